// Rank factorization and kernel projection, concrete and over rational functions.

use partition_rank::field::FieldCtx;
use partition_rank::linalg::{find_pivot, mat_mul, projection_from_factor, rank, rank_factorize, Matrix};
use partition_rank::poly::{RatFunc, RatFuncField};
use partition_rank::Result;

pub fn run() -> Result<()> {
    let f = FieldCtx::prime(7)?;
    let e = |v: i64| f.from_int(v);
    let a = Matrix::from_rows(vec![
        vec![e(1), e(2), e(3)],
        vec![e(2), e(4), e(6)],
        vec![e(0), e(1), e(1)],
    ])?;
    let r = rank(&f, &a);
    let piv = find_pivot(&f, &a, r)?;
    let (a1, a2) = rank_factorize(&f, &a, r, &piv)?;
    println!("rank {r}, pivot rows {:?} cols {:?}", piv.rows, piv.cols);
    println!("A1 = {a1:?}\nA2 = {a2:?}");
    println!("A1 A2 == A: {}", mat_mul(&f, &a1, &a2)? == a);
    let p = projection_from_factor(&f, &a2, &piv.cols);
    println!("P = {p:?}\nA P = {:?}", mat_mul(&f, &a, &p)?);

    // [[x, x^2], [1, x]] has rank one over F_7(x)
    let k = RatFuncField::new(&f, 1);
    let x = RatFunc::var(&f, 1, 0);
    let one = RatFunc::one(&f, 1);
    let s = Matrix::from_rows(vec![vec![x.clone(), x.mul(&x)], vec![one, x.clone()]])?;
    let at_two = s.try_map(|v| v.eval(&[f.from_int(2)]))?;
    let piv = find_pivot(&f, &at_two, 1)?;
    let (s1, s2) = rank_factorize(&k, &s, 1, &piv)?;
    println!("symbolic A1 = {s1:?}\nsymbolic A2 = {s2:?}");
    println!("kernel projection = {:?}", projection_from_factor(&k, &s2, &piv.cols));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
