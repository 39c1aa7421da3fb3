//! Stupid weight truncations w≤l M → M → w≥l+1 M with a verified
//! triangle certificate.

use kbweights::complex::Complex;
use kbweights::linalg::Coefficients;
use kbweights::weights::truncate;

fn main() {
    // ℤ →(2) ℤ →(0) ℤ in degrees -1, 0, 1
    let c = Complex::from_data(
        Coefficients::Integers,
        &[(-1, 1), (0, 1), (1, 1)],
        &[(-1, vec![vec![2]])],
    );
    for l in -2..=2 {
        let dec = truncate(&c, l);
        // low has degrees >= -l (weights <= l), high has degrees <= -l-1
        let span = |c: &Complex| match c.support() {
            Some((a, b)) => format!("{}..{}", a, b),
            None => "empty".into(),
        };
        println!(
            "l = {:>2}: w<=l degrees {:<8} w>=l+1 degrees {}",
            l,
            span(&dec.low),
            span(&dec.high)
        );
        // the cone of the inclusion is homotopy equivalent to the
        // quotient; the certificate re-verifies both homotopies
        dec.certificate.verify().unwrap();
    }
}
