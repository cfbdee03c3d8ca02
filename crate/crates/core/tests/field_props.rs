use partition_rank::field::{FieldCtx, FieldElement};
use proptest::prelude::*;

const FIELDS: [(u64, u32); 8] = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (5, 2)];

fn field() -> impl Strategy<Value = FieldCtx> {
    prop::sample::select(FIELDS.to_vec()).prop_map(|(p, e)| FieldCtx::new(p, e).unwrap())
}

fn with_elems(n: usize) -> impl Strategy<Value = (FieldCtx, Vec<FieldElement>)> {
    field().prop_flat_map(move |f| {
        let q = f.q();
        let g = f.clone();
        prop::collection::vec(0..q, n).prop_map(move |ix| (g.clone(), ix.into_iter().map(|i| g.element(i).unwrap()).collect()))
    })
}

proptest! {
    #[test]
    fn ring_axioms((f, x) in with_elems(3)) {
        let (a, b, c) = (x[0], x[1], x[2]);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        prop_assert_eq!(f.sub(a, b), f.add(a, f.neg(b)));
        prop_assert_eq!(f.mul(a, f.one()), a);
    }

    #[test]
    fn inverses((f, x) in with_elems(2)) {
        let (a, b) = (x[0], x[1]);
        if f.is_zero(a) {
            prop_assert!(f.inv(a).is_err());
        } else {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            prop_assert_eq!(f.mul(f.div(b, a).unwrap(), a), b);
        }
    }

    #[test]
    fn fermat_and_frobenius((f, x) in with_elems(2)) {
        let (a, b) = (x[0], x[1]);
        prop_assert_eq!(f.pow(a, f.q()), a);
        prop_assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
        prop_assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
        prop_assert_eq!(f.frobenius(a, f.e()), a);
    }

    #[test]
    fn json_roundtrip((f, x) in with_elems(1)) {
        prop_assert_eq!(f.from_json(&f.to_json(x[0])).unwrap(), x[0]);
        prop_assert_eq!(f.from_coeffs(&f.coeffs(x[0])).unwrap(), x[0]);
    }

    #[test]
    fn embedding_is_a_homomorphism(pair in prop::sample::select(vec![((2u64, 1u32), 3u32), ((2, 2), 4), ((3, 1), 2), ((2, 1), 2)]), i in any::<u64>(), j in any::<u64>()) {
        let ((p, e), big_e) = pair;
        let small = FieldCtx::new(p, e).unwrap();
        let big = FieldCtx::new(p, big_e).unwrap();
        let emb = small.embed_into(&big).unwrap();
        let a = small.element(i % small.q()).unwrap();
        let b = small.element(j % small.q()).unwrap();
        prop_assert_eq!(emb.apply(small.add(a, b)), big.add(emb.apply(a), emb.apply(b)));
        prop_assert_eq!(emb.apply(small.mul(a, b)), big.mul(emb.apply(a), emb.apply(b)));
        prop_assert_eq!(emb.apply(small.one()), big.one());
        // the image is fixed by the q-power map of the subfield
        prop_assert_eq!(big.pow(emb.apply(a), small.q()), emb.apply(a));
    }
}

#[test]
fn enumeration_and_subfield_count() {
    let f = FieldCtx::new(3, 2).unwrap();
    let elems = f.elements().unwrap();
    assert_eq!(elems.len(), 9);
    let fixed = elems.iter().filter(|&&a| f.pow(a, 3) == a).count();
    assert_eq!(fixed, 3);
    assert!(FieldCtx::new(6, 1).is_err());
    assert!(f.with_max_enumeration(4).elements().is_err());
}
