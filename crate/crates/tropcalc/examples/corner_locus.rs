//! Corner loci of tropical polynomials and the Poincaré–Lelong identity.

use tropcalc::deltaforms::{corner_locus, tropical_pl_check, DeltaForm, PsFunction};
use tropcalc::integration::degree;
use tropcalc::linalg::rat::q;
use tropcalc::polyhedra::AffineForm;
use tropcalc::products::diagonal_wedge;
use tropcalc::random::{Sampler, SizeSpec};

fn main() {
    // max{2x, x + y + 1, 2y}: the parallel lines x − y = ±1
    let f = PsFunction::max_of(&[
        AffineForm::new(vec![q(2), q(0)], q(0)),
        AffineForm::new(vec![q(1), q(1)], q(1)),
        AffineForm::new(vec![q(0), q(2)], q(0)),
    ])
    .unwrap();
    let curve = corner_locus(&f, &DeltaForm::full_space(2)).unwrap();
    for (cell, w) in curve.weights().unwrap() {
        println!("weight {w} on a {}-cell through {:?}", cell.dim(), cell.relint_point());
    }

    let mut s = Sampler::new(5, SizeSpec::default());
    let phi = s.ps_function(2, 3);
    println!("Poincaré–Lelong on the conic: {}", tropical_pl_check(&phi, &curve).unwrap());

    let line = corner_locus(&PsFunction::max_of(&s.tropical_polynomial(2, 1)).unwrap(), &DeltaForm::full_space(2)).unwrap();
    println!("deg(conic ∧ line) = {}", degree(&diagonal_wedge(&curve, &line).unwrap()).unwrap());
}
