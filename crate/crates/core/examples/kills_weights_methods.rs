//! Decide whether a chain map kills a window of weights, four ways:
//! direct truncation factorization, ranged nullhomotopy witness,
//! homology criteria with the torsion secondary class, and the virtual
//! truncation detector. All four always agree.

use kbweights::complex::{ChainMap, Complex};
use kbweights::linalg::Coefficients;
use kbweights::weights::{kills_weights, Method, Window};

fn main() {
    // identity on the ℤ/2 torsion complex ℤ →(2) ℤ in degrees 0, 1
    let t = Complex::from_data(Coefficients::Integers, &[(0, 1), (1, 1)], &[(0, vec![vec![2]])]);
    let id = ChainMap::identity(&t);
    let zero = ChainMap::zero(&t, &t);
    for (name, g) in [("zero map", &zero), ("identity", &id)] {
        for win in [Window::new(-1, 0).unwrap(), Window::new(1, 1).unwrap()] {
            print!("{} kills {}:", name, win);
            for method in [Method::Direct, Method::WeakHomotopy, Method::Homology, Method::Detector] {
                let v = kills_weights(g, win, method);
                print!("  {}={}", method, v.verdict);
            }
            println!();
        }
    }
    // the identity on a torsion piece induces zero on homology in the
    // torsion degree yet fails to kill that single weight: the
    // secondary class is the obstruction
    let v = kills_weights(&id, Window::single(-1), Method::Homology);
    println!("identity kills [-1,-1]: {} ({})", v.verdict, v.obstruction.unwrap());
}
