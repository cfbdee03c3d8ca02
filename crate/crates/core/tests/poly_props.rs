mod common;

use common::*;
use partition_rank::field::FieldElement;
use partition_rank::poly::{MultiPoly, RatFunc, RationalMap};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const P: u64 = 7;
const NV: usize = 3;

fn point(r: &mut ChaCha8Rng) -> Vec<FieldElement> {
    let f = fp(P);
    (0..NV).map(|_| f.element(r.gen_range(0..P)).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn evaluation_is_a_ring_homomorphism(seed in any::<u64>()) {
        let f = fp(P);
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random_poly(&f, NV, 3, 5, &mut r);
        let b = random_poly(&f, NV, 3, 5, &mut r);
        let x = point(&mut r);
        prop_assert_eq!(a.add(&b).eval(&x), f.add(a.eval(&x), b.eval(&x)));
        prop_assert_eq!(a.sub(&b).eval(&x), f.sub(a.eval(&x), b.eval(&x)));
        prop_assert_eq!(a.mul(&b).eval(&x), f.mul(a.eval(&x), b.eval(&x)));
        prop_assert_eq!(a.pow(3).eval(&x), f.pow(a.eval(&x), 3));
    }

    #[test]
    fn polynomial_derivative_rules(seed in any::<u64>(), j in 0..NV) {
        let f = fp(P);
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random_poly(&f, NV, 3, 5, &mut r);
        let b = random_poly(&f, NV, 3, 5, &mut r);
        prop_assert_eq!(a.add(&b).partial(j), a.partial(j).add(&b.partial(j)));
        prop_assert_eq!(a.mul(&b).partial(j), a.partial(j).mul(&b).add(&a.mul(&b.partial(j))));
        // mixed partials commute
        let k = (j + 1) % NV;
        prop_assert_eq!(a.partial(j).partial(k), a.partial(k).partial(j));
    }

    #[test]
    fn exact_division(seed in any::<u64>()) {
        let f = fp(P);
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random_poly(&f, NV, 2, 4, &mut r);
        let b = random_nonzero_poly(&f, NV, 2, 4, &mut r);
        prop_assert_eq!(a.mul(&b).div_exact(&b), Some(a));
    }

    #[test]
    fn rational_functions_evaluate_pointwise(seed in any::<u64>()) {
        let f = fp(P);
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let x = RatFunc::new(random_poly(&f, NV, 2, 3, &mut r), random_nonzero_poly(&f, NV, 2, 3, &mut r)).unwrap();
        let y = RatFunc::new(random_poly(&f, NV, 2, 3, &mut r), random_nonzero_poly(&f, NV, 2, 3, &mut r)).unwrap();
        let pt = point(&mut r);
        if x.in_domain(&pt) && y.in_domain(&pt) {
            let (a, b) = (x.eval(&pt).unwrap(), y.eval(&pt).unwrap());
            prop_assert_eq!(x.add(&y).eval(&pt).unwrap(), f.add(a, b));
            prop_assert_eq!(x.mul(&y).eval(&pt).unwrap(), f.mul(a, b));
        } else {
            prop_assert!(!x.add(&y).in_domain(&pt));
        }
        if !x.is_zero() {
            let one = x.mul(&x.inv().unwrap());
            prop_assert!(same_value(&one, &RatFunc::one(&f, NV)));
        }
    }

    #[test]
    fn json_roundtrips(seed in any::<u64>()) {
        let f = fp(P);
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random_poly(&f, NV, 3, 5, &mut r);
        prop_assert_eq!(MultiPoly::from_json(&f, NV, &a.to_json()).unwrap(), a.clone());
        let x = RatFunc::new(a, random_nonzero_poly(&f, NV, 2, 3, &mut r)).unwrap();
        prop_assert_eq!(RatFunc::from_json(&f, NV, &x.to_json()).unwrap(), x);
    }

    #[test]
    fn composition_evaluates_in_order(seed in any::<u64>()) {
        let f = fp(P);
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let outer = RationalMap::from_polys(NV, vec![2], (0..2).map(|_| random_poly(&f, NV, 2, 3, &mut r)).collect()).unwrap();
        let inner = RationalMap::from_polys(NV, vec![NV], (0..NV).map(|_| random_poly(&f, NV, 2, 3, &mut r)).collect()).unwrap();
        let x = point(&mut r);
        let composed = outer.compose(&inner).unwrap();
        prop_assert_eq!(composed.eval(&x).unwrap(), outer.eval(&inner.eval(&x).unwrap()).unwrap());
    }
}

fn same_value(a: &RatFunc, b: &RatFunc) -> bool {
    a.num().mul(&b.den()) == b.num().mul(&a.den())
}

#[test]
fn jacobian_shape_and_entries() {
    let f = fp(5);
    // g(x0, x1) = (x0^2 x1, x0 + x1)
    let g0 = MultiPoly::from_terms(&f, 2, [(vec![2, 1], f.one())]).unwrap();
    let g1 = MultiPoly::var(&f, 2, 0).add(&MultiPoly::var(&f, 2, 1));
    let g = RationalMap::from_polys(2, vec![2], vec![g0, g1]).unwrap();
    let d = g.total_derivative();
    assert_eq!(d.shape(), &[2, 2]);
    let x = [f.from_int(2), f.from_int(3)];
    let vals = d.eval(&x).unwrap();
    assert_eq!(vals, vec![f.from_int(12), f.from_int(4), f.one(), f.one()]);
    assert_eq!(g.higher_derivative(2).shape(), &[2, 2, 2]);
}
