// AR <= PR <= 3 GR and the certificate size on a few random tensors.

use partition_rank::field::FieldCtx;
use partition_rank::oracles::{check_inequalities, AuditConfig};
use partition_rank::random::seeded_tensor;
use partition_rank::Result;

pub fn run() -> Result<()> {
    let f = FieldCtx::prime(3)?;
    let cfg = AuditConfig::default();
    for seed in 0..6 {
        let dims = if seed % 2 == 0 { vec![2, 2, 2] } else { vec![2, 3, 2] };
        let t = seeded_tensor(&f, &dims, 0.6, seed)?;
        let r = check_inequalities(&t, &cfg)?;
        println!(
            "{:?} seed {seed}: AR {:.3} PR {:?} GR {:?}{} cert {:?} | AR<=PR {:?}, PR<=3GR {:?}",
            dims,
            r.ar.map_or(f64::NAN, |a| a.value()),
            r.pr,
            r.gr_est,
            if r.gr_stable { "" } else { " (unstable)" },
            r.cert_terms,
            r.holds_ar_le_pr,
            r.holds_gr_bound
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
