// A verified partition-rank certificate for W.

use partition_rank::engine::{check_certificate, decompose, DecomposeConfig};
use partition_rank::field::FieldCtx;
use partition_rank::tensor::w_tensor;
use partition_rank::Result;

pub fn run() -> Result<()> {
    let f = FieldCtx::prime(5)?;
    let w = w_tensor(&f);
    let cert = decompose(&w, &DecomposeConfig::default())?.into_verified()?;
    println!(
        "axis {}, x0 = {:?}, rank {} used, {} terms (bound {})",
        cert.axis + 1,
        cert.x0,
        cert.r_used,
        cert.num_terms(),
        cert.bound
    );
    for term in &cert.decomposition.terms {
        let side: Vec<usize> = term.partition.side().iter().map(|a| a + 1).collect();
        println!("  side {side:?}: u = {:?}, v = {:?}", term.u.array().data(), term.v.array().data());
    }
    println!("check: {}", check_certificate(&w, &cert)?);
    println!("{}", serde_json::to_string_pretty(&cert.to_json()).unwrap());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
