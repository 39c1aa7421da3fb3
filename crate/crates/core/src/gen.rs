//! Seeded random generation of complexes, chain maps and windows.
//! Everything is driven by a ChaCha stream cipher, so a (seed, config)
//! pair reproduces instances bit for bit.

use crate::complex::{ChainMap, Complex, HomComplex};
use crate::linalg::{kernel_basis, Coefficients, Matrix};
use crate::weights::{Piece, Window};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Bounds for random instances.
#[derive(Clone, Copy, Debug)]
pub struct GenBounds {
    pub max_rank: usize,
    pub degree_span: i64,
    pub max_entry: i64,
}

impl Default for GenBounds {
    fn default() -> GenBounds {
        GenBounds { max_rank: 4, degree_span: 7, max_entry: 3 }
    }
}

pub fn rng_for(seed: u64, trial: u64) -> ChaCha8Rng {
    // decorrelate trials so they can run in any order
    ChaCha8Rng::seed_from_u64(seed ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn small_entry(rng: &mut ChaCha8Rng, max_entry: i64) -> BigRational {
    let v = rng.gen_range(-max_entry..=max_entry);
    BigRational::from(BigInt::from(v))
}

/// Random valid complex: the lowest differential is free data and each
/// higher one is a random combination of the saturated left-kernel of
/// its predecessor, so d∘d = 0 holds exactly.
pub fn random_complex(rng: &mut ChaCha8Rng, coeff: Coefficients, bounds: &GenBounds) -> Complex {
    let span = rng.gen_range(1..=bounds.degree_span);
    let base = rng.gen_range(-3..=3 - (span - 1).min(3));
    let mut ranks = BTreeMap::new();
    for i in 0..span {
        let r = rng.gen_range(0..=bounds.max_rank);
        if r > 0 {
            ranks.insert(base + i, r);
        }
    }
    let degrees: Vec<i64> = ranks.keys().copied().collect();
    let mut diffs: BTreeMap<i64, Matrix> = BTreeMap::new();
    let mut prev: Option<(i64, Matrix)> = None;
    for &i in &degrees {
        let rows = ranks.get(&(i + 1)).copied().unwrap_or(0);
        let cols = ranks[&i];
        if rows == 0 {
            prev = None;
            continue;
        }
        let d = match &prev {
            Some((pi, pd)) if *pi == i - 1 => {
                // rows of d must kill the columns of pd
                let left_kernel = kernel_basis(&pd.transpose());
                let k = left_kernel.cols;
                let c = Matrix::from_fn(coeff, k, rows, |_, _| small_entry(rng, 1));
                left_kernel.mul(&c).transpose()
            }
            _ => Matrix::from_fn(coeff, rows, cols, |_, _| small_entry(rng, bounds.max_entry)),
        };
        if !d.is_zero() {
            diffs.insert(i, d.clone());
        }
        prev = Some((i, d));
    }
    Complex::new(coeff, ranks, diffs).expect("internal invariant violation: generated complex invalid")
}

/// Random chain map source → target: a random integer combination of a
/// cycle basis of the hom complex, so every homotopy class can occur.
pub fn random_chain_map(
    rng: &mut ChaCha8Rng,
    source: &Complex,
    target: &Complex,
    bounds: &GenBounds,
) -> ChainMap {
    let hc = HomComplex::new(source, target);
    let kb = hc.complex.cycles(0);
    if kb.cols == 0 {
        return ChainMap::zero(source, target);
    }
    let c = Matrix::from_fn(source.coeff, kb.cols, 1, |_, _| small_entry(rng, bounds.max_entry));
    let flat = kb.mul(&c);
    let comps = hc.unflatten(0, &flat);
    ChainMap::new(source.clone(), target.clone(), comps)
        .expect("internal invariant violation: generated chain map invalid")
}

/// Random window of width at most `max_width` weights.
pub fn random_window(rng: &mut ChaCha8Rng, max_width: i64) -> Window {
    let m = rng.gen_range(-3..=3);
    let n = m + rng.gen_range(0..max_width);
    Window::new(m, n).expect("generated window ordered")
}

/// Random complex guaranteed to be without weights win: a direct sum
/// of elementary pieces whose essential degrees avoid the forbidden
/// degree window, with the homology boundary condition respected, plus
/// optional contractible noise.
pub fn random_without_weights_instance(
    rng: &mut ChaCha8Rng,
    coeff: Coefficients,
    win: Window,
    _bounds: &GenBounds,
) -> Complex {
    // forbidden essential degrees: degree_low..=degree_high; over ℤ a
    // torsion piece at degree j is essential at j−1 and j, and torsion
    // at degree_high+1 is also forbidden (boundary freeness)
    let lo = win.degree_low();
    let hi = win.degree_high();
    let mut pieces: Vec<Piece> = vec![];
    let count = rng.gen_range(0..=3);
    for _ in 0..count {
        let kind = rng.gen_range(0..3);
        match kind {
            0 => {
                // free summand anywhere outside the window
                let d = loop {
                    let d = rng.gen_range(-4..=4);
                    if d < lo || d > hi {
                        break d;
                    }
                };
                pieces.push(Piece::FreeSummand { degree: d, rank: rng.gen_range(1..=2) });
            }
            1 if coeff == Coefficients::Integers => {
                // torsion piece with both essential degrees j−1, j
                // outside the window and j ≠ hi+1
                let j = loop {
                    let j = rng.gen_range(-4..=4);
                    if (j < lo || j - 1 > hi) && j != hi + 1 {
                        break j;
                    }
                };
                let t = BigInt::from(rng.gen_range(2..=3));
                pieces.push(Piece::TorsionPiece { degree: j, invariants: vec![t] });
            }
            _ => {
                pieces.push(Piece::Contractible { degree: rng.gen_range(-4..=4) });
            }
        }
    }
    let mut m = crate::weights::complex_from_pieces(coeff, &pieces);
    // contractible-only or empty sums are fine; shear the basis so the
    // split form is not literal
    m = shear_basis(rng, &m);
    m
}

/// Conjugate by random unimodular shears: adds a multiple of one basis
/// vector to another in a single degree. Homology and weight data are
/// unchanged; matrix shapes are preserved.
pub fn shear_basis(rng: &mut ChaCha8Rng, m: &Complex) -> Complex {
    let coeff = m.coeff;
    let degrees: Vec<i64> = m.ranks().keys().copied().collect();
    let mut diffs: BTreeMap<i64, Matrix> = degrees
        .iter()
        .map(|&i| (i, m.differential(i)))
        .collect();
    for &i in &degrees {
        let r = m.rank(i);
        if r < 2 {
            continue;
        }
        for _ in 0..2 {
            let a = rng.gen_range(0..r);
            let mut b = rng.gen_range(0..r);
            if a == b {
                b = (b + 1) % r;
            }
            let q = small_entry(rng, 1);
            // basis change x_a ← x_a + q x_b: columns of d^i and rows of d^{i−1}
            let mut e = Matrix::identity(coeff, r);
            e.set(a, b, q.clone());
            let mut e_inv = Matrix::identity(coeff, r);
            e_inv.set(a, b, -q.clone());
            if let Some(d) = diffs.get(&i).cloned() {
                diffs.insert(i, d.mul(&e));
            }
            if let Some(d) = diffs.get(&(i - 1)).cloned() {
                diffs.insert(i - 1, e_inv.mul(&d));
            }
        }
    }
    Complex::new(coeff, m.ranks().clone(), diffs)
        .expect("internal invariant violation: sheared complex invalid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::without_weights;

    #[test]
    fn generated_complexes_validate() {
        let bounds = GenBounds::default();
        for seed in 0..30u64 {
            let mut rng = rng_for(7, seed);
            for coeff in [Coefficients::Integers, Coefficients::PrimeField(2), Coefficients::Rationals] {
                let c = random_complex(&mut rng, coeff, &bounds);
                c.validate().unwrap();
            }
        }
    }

    #[test]
    fn generated_maps_are_chain_maps() {
        let bounds = GenBounds::default();
        for seed in 0..20u64 {
            let mut rng = rng_for(11, seed);
            let a = random_complex(&mut rng, Coefficients::Integers, &bounds);
            let b = random_complex(&mut rng, Coefficients::Integers, &bounds);
            let g = random_chain_map(&mut rng, &a, &b, &bounds);
            g.validate().unwrap();
        }
    }

    #[test]
    fn determinism() {
        let bounds = GenBounds::default();
        let mut r1 = rng_for(42, 5);
        let mut r2 = rng_for(42, 5);
        let a = random_complex(&mut r1, Coefficients::Integers, &bounds);
        let b = random_complex(&mut r2, Coefficients::Integers, &bounds);
        assert_eq!(a, b);
    }

    #[test]
    fn without_weights_instances_pass() {
        let bounds = GenBounds::default();
        for seed in 0..15u64 {
            let mut rng = rng_for(3, seed);
            let win = random_window(&mut rng, 3);
            let m = random_without_weights_instance(&mut rng, Coefficients::Integers, win, &bounds);
            assert!(without_weights(&m, win).verdict, "seed {} window {}", seed, win);
        }
    }
}
