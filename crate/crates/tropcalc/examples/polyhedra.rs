//! The complex on which max{x, y, 0} is linear, and a face lattice.

use tropcalc::linalg::rat::q;
use tropcalc::polyhedra::{decomposition_of_pl, AffineForm, PlKind, Polyhedron};

fn main() {
    let forms = [
        AffineForm::new(vec![q(1), q(0)], q(0)),
        AffineForm::new(vec![q(0), q(1)], q(0)),
        AffineForm::new(vec![q(0), q(0)], q(0)),
    ];
    let dec = decomposition_of_pl(&forms, PlKind::Max).unwrap();
    for c in dec.complex.maximal_cells() {
        println!("dim {} cell through {:?}", c.dim(), c.relint_point());
    }

    let square = Polyhedron::cube(&[q(0), q(0)], &[q(1), q(1)]).unwrap();
    println!("unit square: {} faces, vertices {:?}", square.faces().len(), square.vertices());
}
