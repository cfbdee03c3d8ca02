// Every 2x2x2 tensor over F_2, tabulated by partition rank and analytic rank,
// then a short corpus run through the command line entry point.

use std::collections::BTreeMap;

use partition_rank::cli;
use partition_rank::field::FieldCtx;
use partition_rank::oracles::{pr_bruteforce, DEFAULT_PR_BUDGET};
use partition_rank::tensor::{Array, Tensor};
use partition_rank::variety::{analytic_rank, DEFAULT_BUDGET};
use partition_rank::Result;

pub fn run() -> Result<()> {
    let f = FieldCtx::prime(2)?;
    let mut table: BTreeMap<(usize, u128), usize> = BTreeMap::new();
    for code in 0u32..256 {
        let data = (0..8).map(|b| f.from_int(((code >> (7 - b)) & 1) as i64)).collect();
        let t = Tensor::from_array(&f, Array::new(vec![2, 2, 2], data)?);
        let pr = pr_bruteforce(&t, 4, DEFAULT_PR_BUDGET)?.exact().expect("within budget");
        let ar = analytic_rank(&t, 2, DEFAULT_BUDGET)?;
        *table.entry((pr, ar.count)).or_default() += 1;
    }
    println!("pr  |ker|  AR      tensors");
    for ((pr, count), n) in &table {
        println!("{pr}   {count:>5}  {:.4}  {n}", 4.0 - (*count as f64).log2());
    }

    let code = cli::run(["prank", "corpus", "--field", "5", "--dims", "2x2x2", "--count", "4", "--seed", "1"]);
    println!("corpus exit code {code}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
