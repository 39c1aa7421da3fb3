//! Weight detection without truncations: filtration values on hom
//! groups, pure homology functors, and cohomology of the dual complex
//! with group coefficients.

use kbweights::complex::Complex;
use kbweights::detectors::{detect_weight_range, weight_filtration};
use kbweights::linalg::{Coefficients, GroupStructure};
use kbweights::spherical::em_cohomology;

fn main() {
    let t = Complex::from_data(Coefficients::Integers, &[(0, 1), (1, 1)], &[(0, vec![vec![2]])]);

    // the weight filtration of hom(t, t) is monotone in the bound
    for m in -1..=1 {
        let w = weight_filtration(&t, m, &t);
        println!("W^{}(hom) = {}", m, w.structure);
    }

    // dual cohomology with ℤ/2 coefficients sees the torsion twice
    let z2 = GroupStructure { rank: 0, torsion: vec![2.into()] };
    for i in -2..=1 {
        println!("dual H^{} with ℤ/2 coefficients = {}", i, em_cohomology(&t, &z2, i));
    }

    // pure detectors recover the sharp weight interval
    let (lo, hi) = detect_weight_range(&t).unwrap();
    println!("detected weight range [{},{}]", lo, hi);
}
