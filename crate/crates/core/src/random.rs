//! Seeded random tensors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::tensor::{Array, Tensor};

/// Each entry, in row-major order, is kept with probability `density` and is
/// then uniform over the field (so it may still be zero).
pub fn random_tensor<R: Rng>(ctx: &FieldCtx, dims: &[usize], density: f64, rng: &mut R) -> Result<Tensor> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Invalid(format!("density {density} outside [0, 1]")));
    }
    let q = ctx.q();
    let len: usize = dims.iter().product();
    let mut data = Vec::with_capacity(len);
    for _ in 0..len {
        let keep = density >= 1.0 || rng.gen::<f64>() < density;
        data.push(if keep { ctx.element(rng.gen_range(0..q))? } else { ctx.zero() });
    }
    Ok(Tensor::from_array(ctx, Array::new(dims.to_vec(), data)?))
}

pub fn seeded_tensor(ctx: &FieldCtx, dims: &[usize], density: f64, seed: u64) -> Result<Tensor> {
    random_tensor(ctx, dims, density, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn random_element<R: Rng>(ctx: &FieldCtx, rng: &mut R) -> FieldElement {
    ctx.element(rng.gen_range(0..ctx.q())).expect("index below q")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_density_zero() {
        let f = FieldCtx::prime(5).unwrap();
        let a = seeded_tensor(&f, &[2, 2, 2], 1.0, 1).unwrap();
        let b = seeded_tensor(&f, &[2, 2, 2], 1.0, 1).unwrap();
        assert_eq!(a, b);
        assert!(seeded_tensor(&f, &[3, 3], 0.0, 9).unwrap().is_zero());
    }
}
