//! Split an object avoiding a weight window as X ⊕ Y with X of lower
//! and Y of higher weights, certified by a triangle equivalence.

use kbweights::complex::Complex;
use kbweights::linalg::Coefficients;
use kbweights::weights::{avoiding_decomposition, without_weights, Window};

fn main() {
    // ℤ in degree 0 (weight 0) plus ℤ in degree -2 (weight 2)
    let a = Complex::concentrated(Coefficients::Integers, 0, 1);
    let b = Complex::concentrated(Coefficients::Integers, -2, 1);
    let m = a.direct_sum(&b);
    let win = Window::new(1, 1).unwrap();
    assert!(without_weights(&m, win).verdict);
    let dec = avoiding_decomposition(&m, win).unwrap();
    println!(
        "X carries weight <= 0 content at degrees {:?}",
        dec.low_avoiding.support()
    );
    println!(
        "Y carries weight >= 2 content at degrees {:?}",
        dec.high_avoiding.support()
    );
    dec.verify().unwrap();

    // a torsion complex spans weights -1..0 and cannot avoid [0,0]
    let t = Complex::from_data(Coefficients::Integers, &[(0, 1), (1, 1)], &[(0, vec![vec![2]])]);
    match avoiding_decomposition(&t, Window::new(0, 0).unwrap()) {
        Err(e) => println!("torsion complex: {}", e),
        Ok(_) => unreachable!(),
    }
}
