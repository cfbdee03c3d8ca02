mod common;

use common::*;
use partition_rank::field::{FieldCtx, FieldElement};
use partition_rank::oracles::{pr_bruteforce, pr_leq_one, DEFAULT_PR_BUDGET};
use partition_rank::random::{random_element, seeded_tensor};
use partition_rank::tensor::{
    constructing_to_decomposition, flatten, ip_apply, slice, tensor_eval, verify_decomposition, Array, BlockLayout,
    Constructing, Partition, Tensor,
};
use partition_rank::variety::{analytic_rank, kernel_count, DEFAULT_BUDGET};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_field() -> impl Strategy<Value = FieldCtx> {
    prop::sample::select(vec![2u64, 3, 5]).prop_map(fp)
}

fn dims(k: std::ops::RangeInclusive<usize>, n: usize) -> impl Strategy<Value = Vec<usize>> {
    k.prop_flat_map(move |k| prop::collection::vec(1..=n, k))
}

fn vector(f: &FieldCtx, n: usize, r: &mut ChaCha8Rng) -> Vec<FieldElement> {
    (0..n).map(|_| random_element(f, r)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn slicing_matches_multilinear_evaluation(f in small_field(), d in dims(2..=4, 3), seed in any::<u64>()) {
        let t = seeded_tensor(&f, &d, 0.7, seed).unwrap();
        let mut r = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let xs: Vec<Vec<FieldElement>> = d.iter().map(|&n| vector(&f, n, &mut r)).collect();
        let refs: Vec<&[FieldElement]> = xs.iter().map(Vec::as_slice).collect();
        let axis = (seed % d.len() as u64) as usize;
        let layout = BlockLayout::new(&d, axis).unwrap();
        let mut point = vec![f.zero(); layout.nvars];
        for &(a, off, len) in &layout.blocks {
            point[off..off + len].copy_from_slice(&xs[a]);
        }
        let forms = slice(&t, axis).unwrap();
        let mut via_forms = f.zero();
        for (i, form) in forms.iter().enumerate() {
            via_forms = f.add(via_forms, f.mul(xs[axis][i], form.eval(&point)));
        }
        prop_assert_eq!(via_forms, tensor_eval(&t, &refs).unwrap());
    }

    #[test]
    fn ip_map_is_the_sum_of_its_pairs(f in small_field(), d in dims(2..=4, 2), width in 1usize..3, seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let mut c = Constructing::zeros(&f, d.clone(), width);
        for block in c.blocks_mut() {
            for (u, v) in block.pairs.iter_mut() {
                *u = Array::from_fn(u.dims().to_vec(), |_| random_element(&f, &mut r));
                *v = Array::from_fn(v.dims().to_vec(), |_| random_element(&f, &mut r));
            }
        }
        let ip = ip_apply(&f, &c).unwrap();
        let dec = constructing_to_decomposition(&f, &c);
        prop_assert!(dec.len() <= width * Partition::count(d.len()));
        let summed = dec.sum(&f).unwrap();
        prop_assert_eq!(summed.array(), &ip);
        // linear in the first factor of a pair
        let lambda = random_element(&f, &mut r);
        let mut scaled = c.clone();
        let (u, v) = scaled.blocks_mut()[0].pairs[0].clone();
        scaled.blocks_mut()[0].pairs[0].0 = u.scale_in(&f, &lambda);
        let one_pair = partition_rank::tensor::PRTerm::new(
            c.blocks()[0].partition,
            Tensor::from_array(&f, u),
            Tensor::from_array(&f, v),
        ).expand(&d).unwrap();
        let diff = Tensor::from_array(&f, ip_apply(&f, &scaled).unwrap()).sub(&Tensor::from_array(&f, ip)).unwrap();
        let expect = Tensor::from_array(&f, one_pair.array().scale_in(&f, &f.sub(lambda, f.one())));
        prop_assert_eq!(diff, expect);
    }

    #[test]
    fn analytic_rank_does_not_depend_on_the_axis(f in small_field(), d in dims(3..=3, 3), seed in any::<u64>()) {
        let t = seeded_tensor(&f, &d, 0.8, seed).unwrap();
        let a0 = analytic_rank(&t, 0, DEFAULT_BUDGET).unwrap();
        for axis in 1..3 {
            prop_assert!(a0.same_value(&analytic_rank(&t, axis, DEFAULT_BUDGET).unwrap()));
        }
    }

    #[test]
    fn analytic_rank_adds_under_direct_sum(f in small_field(), d1 in dims(3..=3, 2), d2 in dims(3..=3, 2), seed in any::<u64>()) {
        let s = seeded_tensor(&f, &d1, 0.8, seed).unwrap();
        let t = seeded_tensor(&f, &d2, 0.8, seed.wrapping_add(1)).unwrap();
        let a = analytic_rank(&s, 2, DEFAULT_BUDGET).unwrap();
        let b = analytic_rank(&t, 2, DEFAULT_BUDGET).unwrap();
        let c = analytic_rank(&s.direct_sum(&t).unwrap(), 2, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(c.n, a.n + b.n);
        prop_assert_eq!(c.count, a.count * b.count);
    }

    #[test]
    fn extension_counts_match_the_embedded_tensor(d in dims(3..=3, 2), seed in any::<u64>()) {
        let f = fp(2);
        let big = FieldCtx::new(2, 2).unwrap();
        let t = seeded_tensor(&f, &d, 1.0, seed).unwrap();
        let lifted = t.embed(&f.embed_into(&big).unwrap());
        prop_assert_eq!(
            kernel_count(&t, 2, 2, DEFAULT_BUDGET).unwrap(),
            kernel_count(&lifted, 2, 1, DEFAULT_BUDGET).unwrap()
        );
    }

    #[test]
    fn partition_rank_is_bounded_by_flattenings(f in small_field(), d in dims(3..=3, 2), seed in any::<u64>()) {
        let t = seeded_tensor(&f, &d, 0.6, seed).unwrap();
        let pr = pr_bruteforce(&t, 4, DEFAULT_PR_BUDGET).unwrap().exact().unwrap();
        let min_flat = Partition::all(3).iter().map(|p| matrix_rank(&f, &flatten(&t, p).unwrap())).min().unwrap();
        prop_assert!(pr <= min_flat);
        prop_assert_eq!(pr <= 1, pr_leq_one(&t).unwrap().is_some());
        prop_assert!(analytic_rank(&t, 2, DEFAULT_BUDGET).unwrap().le(pr as u64));
    }

    #[test]
    fn padding_keeps_partition_rank(d in dims(3..=3, 2), grow in prop::collection::vec(0usize..2, 3), seed in any::<u64>()) {
        let f = fp(2);
        let t = seeded_tensor(&f, &d, 1.0, seed).unwrap();
        let padded_dims: Vec<usize> = d.iter().zip(&grow).map(|(a, b)| a + b).collect();
        let p = t.pad(&padded_dims).unwrap();
        let pr = pr_bruteforce(&t, 4, DEFAULT_PR_BUDGET).unwrap().exact();
        prop_assert_eq!(pr_bruteforce(&p, 4, DEFAULT_PR_BUDGET).unwrap().exact(), pr);
    }

    #[test]
    fn tensor_json_roundtrip(d in dims(1..=4, 3), seed in any::<u64>(), which in 0usize..3) {
        let f = [fp(3), FieldCtx::new(2, 3).unwrap(), FieldCtx::new(3, 2).unwrap()][which].clone();
        let t = seeded_tensor(&f, &d, 0.5, seed).unwrap();
        prop_assert_eq!(Tensor::from_json(&t.to_json()).unwrap(), t);
    }
}

#[test]
fn pr_witnesses_reconstruct() {
    let f = fp(3);
    let mut r = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let d: Vec<usize> = (0..3).map(|_| r.gen_range(1..=3)).collect();
        let t = seeded_tensor(&f, &d, 1.0, r.gen()).unwrap();
        if let partition_rank::oracles::PrResult::Exact { rank, witness } = pr_bruteforce(&t, 4, DEFAULT_PR_BUDGET).unwrap() {
            let v = verify_decomposition(&t, &witness).unwrap();
            assert!(v.ok);
            assert_eq!(v.term_count, rank);
        }
    }
}

#[test]
fn partitions_are_canonical() {
    assert_eq!(Partition::count(3), 3);
    assert_eq!(Partition::count(4), 7);
    let p = Partition::new(3, &[2]).unwrap();
    assert_eq!(p.side(), vec![0, 1]);
    assert_eq!(p.complement(), vec![2]);
    assert!(Partition::new(3, &[0, 1, 2]).is_err());
    assert_eq!(Partition::from_json(3, &p.to_json()).unwrap(), p);
}
