// Arithmetic in F_9 and the embedding of F_3 into it.

use partition_rank::field::FieldCtx;
use partition_rank::Result;

pub fn run() -> Result<()> {
    let f9 = FieldCtx::new(3, 2)?;
    println!("F_9 modulus (low to high): {:?}", f9.modulus());
    let g = f9.generator();
    let mut x = f9.one();
    for i in 0..8 {
        println!("g^{i} = {:?}", f9.coeffs(x));
        x = f9.mul(x, g);
    }
    let a = f9.from_coeffs(&[1, 2])?;
    let inv = f9.inv(a)?;
    println!("a = {:?}, a^-1 = {:?}, a * a^-1 = {:?}", f9.coeffs(a), f9.coeffs(inv), f9.coeffs(f9.mul(a, inv)));
    println!("frobenius(a) = a^3 = {:?}", f9.coeffs(f9.frobenius(a, 1)));

    let f3 = FieldCtx::prime(3)?;
    let emb = f3.embed_into(&f9)?;
    for c in f3.elements()? {
        println!("F_3 {:?} -> F_9 {:?}", f3.coeffs(c), f9.coeffs(emb.apply(c)));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
