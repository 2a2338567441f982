//! Exact integrals, Stokes and Green on polytopes.

use tropcalc::deltaforms::DeltaForm;
use tropcalc::integration::{green_sides, integrate_cell, stokes_sides, volume_form};
use tropcalc::linalg::rat::{q, Rat};
use tropcalc::polyhedra::Polyhedron;
use tropcalc::superforms::{Poly, Superform};

fn main() {
    let unit = Polyhedron::cube(&[q(0)], &[q(1)]).unwrap();
    let x = Poly::var(1, 0);
    let moment = Superform::term(x.clone(), &[0], &[0]).unwrap();
    println!("∫_[0,1] x d′x∧d″x = {}", integrate_cell(&unit, &moment).unwrap());

    let square = Polyhedron::cube(&[q(0), q(0)], &[q(1), q(1)]).unwrap();
    println!("∫ d′x₁∧d″x₁∧d′x₂∧d″x₂ over [0,1]² = {}", integrate_cell(&square, &volume_form(2, &[0, 1])).unwrap());

    let interval = DeltaForm::from_weights(1, 0, vec![(unit, Rat::one())]).unwrap();
    let eta = Superform::term(&(&x * &x) * &x, &[], &[0]).unwrap();
    let (lhs, rhs) = stokes_sides(&interval, &eta).unwrap();
    println!("Stokes for x³ d″x on [0,1]: {lhs} = {rhs}");

    let f = Superform::function(&(&x * &x) * &x);
    let g = Superform::function(&(&x * &x).scale(&q(2)) - &Poly::constant(1, Rat::frac(1, 3)));
    let (lhs, rhs) = green_sides(&interval, &f, &g).unwrap();
    println!("Green for x³, 2x² − 1/3 on [0,1]: {lhs} = {rhs}");
}
