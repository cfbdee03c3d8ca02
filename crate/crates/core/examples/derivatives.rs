// The slicing of a tensor and its iterated total derivatives.

use partition_rank::engine::derivative_tensor;
use partition_rank::field::FieldCtx;
use partition_rank::poly::{MultiPoly, RatFunc, RationalMap};
use partition_rank::tensor::{slice, w_tensor, BlockLayout};
use partition_rank::Result;

pub fn run() -> Result<()> {
    let f = FieldCtx::prime(5)?;
    let w = w_tensor(&f);
    let axis = 2;
    let layout = BlockLayout::new(w.dims(), axis)?;
    println!("slicing along axis {} uses {} variables in blocks {:?}", axis + 1, layout.nvars, layout.blocks);
    let forms = slice(&w, axis)?;
    for (i, form) in forms.iter().enumerate() {
        println!("form {i}: {form:?}");
    }

    let map = RationalMap::from_polys(layout.nvars, vec![forms.len()], forms)?;
    let jac = map.total_derivative();
    println!("jacobian shape {:?}", jac.shape());
    let d2 = derivative_tensor(&w, axis, 2)?;
    println!("second derivative is a constant tensor of dims {:?} with {} nonzero entries", d2.dims(), d2.nonzero_entries().len());

    // quotient rule on x / (1 + y)
    let x = MultiPoly::var(&f, 2, 0);
    let den = MultiPoly::one(&f, 2).add(&MultiPoly::var(&f, 2, 1));
    let q = RatFunc::new(x, den)?;
    println!("d/dx {q:?} = {:?}", q.partial(0));
    println!("d/dy {q:?} = {:?}", q.partial(1));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
