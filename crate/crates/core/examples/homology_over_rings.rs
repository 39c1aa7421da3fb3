//! Exact homology of one bounded complex over ℤ, ℚ and F_p.

use kbweights::complex::Complex;
use kbweights::linalg::Coefficients;

fn main() {
    // ℤ² →[[2,0],[0,3]] ℤ² in degrees 0, 1
    let d = vec![vec![2, 0], vec![0, 3]];
    for coeff in [
        Coefficients::Integers,
        Coefficients::Rationals,
        Coefficients::PrimeField(2),
        Coefficients::PrimeField(5),
    ] {
        let c = Complex::from_data(coeff, &[(0, 2), (1, 2)], &[(0, d.clone())]);
        println!("over {}:", coeff);
        for (i, h) in c.homology_table() {
            println!("  H^{} = {}", i, h);
        }
    }
}
