//! Smith normal form and lattice indices over ℤ.

use num_bigint::BigInt;
use tropcalc::linalg::lattice::{lattice_index, Lattice};
use tropcalc::linalg::matrix::IntMat;

fn main() {
    let a = IntMat::from_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let (u, d, v) = a.smith_normal_form();
    println!("diagonal: {:?}", (0..3).map(|i| d.get(i, i).to_string()).collect::<Vec<_>>());
    assert_eq!(u.mul(&a).mul(&v), d);

    let gens = |v: &[&[i64]]| v.iter().map(|g| g.iter().map(|&x| BigInt::from(x)).collect()).collect::<Vec<_>>();
    let sub = Lattice::generated_by(2, &gens(&[&[1, 1], &[1, -1]]));
    println!("[Z^2 : <(1,1),(1,-1)>] = {:?}", lattice_index(&sub, &Lattice::standard(2)).unwrap());
}
