//! Tropical Bézout by the diagonal construction, and the transversal formula.

use tropcalc::deltaforms::{corner_locus, DeltaForm, PsFunction};
use tropcalc::integration::degree;
use tropcalc::linalg::rat::Rat;
use tropcalc::products::{diagonal_wedge, transversal_wedge};
use tropcalc::random::{Sampler, SizeSpec};

fn curve(s: &mut Sampler, d: u32) -> DeltaForm {
    let f = PsFunction::max_of(&s.tropical_polynomial(2, d)).unwrap();
    corner_locus(&f, &DeltaForm::full_space(2)).unwrap()
}

fn main() {
    let mut s = Sampler::new(11, SizeSpec::default());
    for (d, e) in [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3)] {
        let (c, k) = (curve(&mut s, d), curve(&mut s, e));
        let w = diagonal_wedge(&c, &k).unwrap();
        println!("deg(C_{d} ∧ C_{e}) = {} in {} points", degree(&w).unwrap(), w.cells().len());
    }

    let (c, k) = (curve(&mut s, 2), curve(&mut s, 2));
    let k = k.translate(&[Rat::frac(1, 7), Rat::frac(-2, 11)]);
    match transversal_wedge(&c, &k) {
        Ok(t) => println!("transversal = diagonal: {}", t.equal(&diagonal_wedge(&c, &k).unwrap()).unwrap()),
        Err(e) => println!("not transversal: {e}"),
    }
}
