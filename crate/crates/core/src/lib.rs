pub mod algebra;
pub mod cli;
pub mod engine;
pub mod error;
pub mod field;
pub mod linalg;
pub mod oracles;
pub mod poly;
pub mod random;
pub mod tensor;
pub mod variety;

pub use error::{Error, Result};
