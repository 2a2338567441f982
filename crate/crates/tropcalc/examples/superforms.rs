//! Superforms: d′, d″, J and the wedge product.

use tropcalc::linalg::rat::q;
use tropcalc::superforms::{Poly, Superform};

fn main() {
    let r = 2;
    let (x, y) = (Poly::var(r, 0), Poly::var(r, 1));
    let f = Superform::function(&(&x * &x) * &y);
    let a = f.d1();
    println!("d′(x²y) = {a}");
    println!("d″d′(x²y) = {}", a.d2());
    println!("J d′(x²y) = {}", a.j_op());
    assert_eq!(a.j_op(), f.d2());

    let w = Superform::d1x(r, 0).w(&Superform::d2x(r, 1)).scale(&q(3));
    println!("3 d′x₁∧d″x₂ ∧ d′(x²y) = {}", w.w(&a));
}
