// Exact analytic rank and the kernel dimension estimate over extensions.

use partition_rank::field::FieldCtx;
use partition_rank::random::seeded_tensor;
use partition_rank::tensor::w_tensor;
use partition_rank::variety::{analytic_rank, estimate_dim, kernel_count, DEFAULT_BUDGET};
use partition_rank::Result;

pub fn run() -> Result<()> {
    for q in [2, 3, 5, 7] {
        let f = FieldCtx::prime(q)?;
        let w = w_tensor(&f);
        let ar = analytic_rank(&w, 2, DEFAULT_BUDGET)?;
        println!("W over F_{q}: |ker| = {} (3q^2 - 2q = {}), AR = {:.4}", ar.count, 3 * q * q - 2 * q, ar.value());
    }

    let f3 = FieldCtx::prime(3)?;
    let rep = estimate_dim(&w_tensor(&f3), 2, 3, DEFAULT_BUDGET, 4)?;
    println!("W over F_3: counts {:?}, estimates {:?}, gr {} (unstable: {})", rep.counts, rep.estimates, rep.gr_est, rep.unstable);
    for c in &rep.candidates {
        println!("  candidate {:?} with jacobian rank {}", c.point, c.rank);
    }

    let t = seeded_tensor(&f3, &[3, 3, 3], 1.0, 7)?;
    for e in 1..=3 {
        println!("random 3x3x3 over F_3^{e}: |ker| = {}", kernel_count(&t, 2, e, DEFAULT_BUDGET)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
