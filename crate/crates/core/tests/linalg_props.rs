mod common;

use common::*;
use partition_rank::linalg::{
    adjugate, determinant, find_pivot, kernel_projection, mat_mul, mat_scale, nullspace, rank, solve, Matrix,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn column(v: &[partition_rank::field::FieldElement]) -> Matrix<partition_rank::field::FieldElement> {
    Matrix::from_vec(v.len(), 1, v.to_vec()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rank_matches_the_oracle(p in prop::sample::select(vec![2u64, 3, 5, 7]), m in 1usize..7, n in 1usize..7, seed in any::<u64>()) {
        let f = fp(p);
        let a = random_matrix(&f, m, n, &mut ChaCha8Rng::seed_from_u64(seed));
        let r = rank(&f, &a);
        prop_assert_eq!(r, matrix_rank(&f, &a));
        prop_assert_eq!(rank(&f, &a.transpose()), r);
    }

    #[test]
    fn nullspace_and_solve(p in prop::sample::select(vec![2u64, 3, 5, 7]), m in 1usize..6, n in 1usize..6, seed in any::<u64>()) {
        let f = fp(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&f, m, n, &mut rng);
        let ns = nullspace(&f, &a);
        prop_assert_eq!(ns.len(), n - matrix_rank(&f, &a));
        for v in &ns {
            prop_assert!(mat_mul(&f, &a, &column(v)).unwrap().data().iter().all(|x| f.is_zero(*x)));
        }
        let y = random_matrix(&f, n, 1, &mut rng);
        let b = mat_mul(&f, &a, &y).unwrap();
        let x = solve(&f, &a, b.data()).unwrap().expect("consistent system");
        prop_assert_eq!(mat_mul(&f, &a, &column(&x)).unwrap(), b);
    }

    #[test]
    fn determinant_and_adjugate(p in prop::sample::select(vec![3u64, 5, 7]), n in 1usize..6, seed in any::<u64>()) {
        let f = fp(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&f, n, n, &mut rng);
        let b = random_matrix(&f, n, n, &mut rng);
        let (da, db) = (determinant(&f, &a).unwrap(), determinant(&f, &b).unwrap());
        prop_assert_eq!(determinant(&f, &mat_mul(&f, &a, &b).unwrap()).unwrap(), f.mul(da, db));
        prop_assert_eq!(f.is_zero(da), matrix_rank(&f, &a) < n);
        let adj = adjugate(&f, &a).unwrap();
        prop_assert_eq!(mat_mul(&f, &adj, &a).unwrap(), mat_scale(&f, &Matrix::identity(&f, n), &da));
    }

    #[test]
    fn kernel_projection_fixes_the_kernel(p in prop::sample::select(vec![2u64, 5]), m in 1usize..6, n in 1usize..6, seed in any::<u64>()) {
        let f = fp(p);
        let a = random_matrix(&f, m, n, &mut ChaCha8Rng::seed_from_u64(seed));
        let r = matrix_rank(&f, &a);
        let pmat = kernel_projection(&f, &a, r, &find_pivot(&f, &a, r).unwrap()).unwrap();
        for v in nullspace(&f, &a) {
            prop_assert_eq!(mat_mul(&f, &pmat, &column(&v)).unwrap(), column(&v));
        }
    }
}

#[test]
fn pivot_search_rejects_too_large_ranks() {
    let f = fp(5);
    let a = matrix_of_rank(&f, 3, 3, 1, &mut ChaCha8Rng::seed_from_u64(2));
    assert!(find_pivot(&f, &a, 2).is_err());
    assert_eq!(find_pivot(&f, &a, 1).unwrap().rank(), 1);
}
