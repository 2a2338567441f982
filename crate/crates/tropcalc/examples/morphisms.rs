//! Push-forward, pull-back and graphs of affine maps.

use tropcalc::deltaforms::{corner_locus, DeltaForm, PsFunction};
use tropcalc::integration::degree;
use tropcalc::linalg::rat::q;
use tropcalc::morphisms::{graph_cycle, graph_direct, projection_formula_check, pullback, pushforward_hat, AffineMap};
use tropcalc::polyhedra::AffineForm;

fn main() {
    let line = corner_locus(
        &PsFunction::max_of(&[
            AffineForm::new(vec![q(1), q(0)], q(0)),
            AffineForm::new(vec![q(0), q(1)], q(0)),
            AffineForm::new(vec![q(0), q(0)], q(0)),
        ])
        .unwrap(),
        &DeltaForm::full_space(2),
    )
    .unwrap();

    let proj = AffineMap::linear_from_rows(2, &[vec![1, 0]]);
    let pushed = pushforward_hat(&proj, &line).unwrap();
    println!("push of L to the x-axis: {} cells", pushed.cells().len());

    let point = DeltaForm::from_weights(1, 1, vec![(tropcalc::polyhedra::Polyhedron::point(&[q(1)]), q(1))]).unwrap();
    let fiber = pullback(&proj, &point).unwrap();
    println!("π*[1]: {} cells of dim {}", fiber.cells().len(), fiber.cell_dim());
    println!("deg(L ∧ π*[1]) via push = {}", degree(&pushforward_hat(&proj, &tropcalc::products::diagonal_wedge(&line, &fiber).unwrap()).unwrap()).unwrap());
    println!("projection formula: {}", projection_formula_check(&proj, &line, &point).unwrap());

    let f = AffineMap::linear_from_rows(2, &[vec![1, 1], vec![0, 1]]);
    println!("graph by corner loci = direct graph: {}", graph_cycle(&f).unwrap().equal(&graph_direct(&f)).unwrap());
}
