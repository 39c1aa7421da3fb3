//! Homology-level weight criteria over ℤ: skeleton and
//! without-weights tests read off homology groups, the secondary
//! Ext-class that refines them for single weights, cohomology with
//! coefficients in a finitely generated group, and acyclicity.

use crate::complex::{ChainMap, Complex};
use crate::linalg::{
    kernel_basis, spans_contain, subquotient_structure, Coefficients, GroupStructure, Matrix,
};
use crate::weights::{normal_form, Piece, Slot, Window};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt;

/// Obstruction class of a map g: M → N beyond homology at source
/// degree i. For each torsion generator a of H^i(M), of order t_a, the
/// top coordinate of its normal-form piece sits in degree i−1 and its
/// image v_a in N^{i−1} is well defined modulo t_a·N^{i−1} plus
/// coboundaries. The class vanishes iff every v_a lies in that
/// lattice; this is exactly the obstruction to g being trivial on the
/// single degree-(i−1) window once H^{i−1}(g) = 0.
#[derive(Clone, Debug)]
pub struct SecondaryClass {
    /// Degree i of the source homology whose torsion drives the class.
    pub source_degree: i64,
    /// One column per torsion generator of H^i(M): the image of its
    /// top coordinate in canonical coordinates of N at degree i−1.
    pub cocycle: Matrix,
    /// Orders t_a of the torsion generators, in column order.
    pub torsion_orders: Vec<BigInt>,
    /// Coboundary lattice: columns spanning im(d_N^{i−2}) in canonical
    /// coordinates of N at degree i−1.
    pub coboundaries: Matrix,
    /// ⊕_a coker(t_a·id ⊕ coboundaries): the Ext-group pairing the
    /// torsion of H^i(M) with cochains of N at degree i−1 modulo
    /// coboundaries.
    pub ambient: GroupStructure,
    pub vanishes: bool,
}

impl SecondaryClass {
    pub fn verify(&self) -> Result<(), String> {
        if self.cocycle.cols != self.torsion_orders.len() {
            return Err("one cocycle column per torsion order required".into());
        }
        let mut computed = true;
        for (a, t) in self.torsion_orders.iter().enumerate() {
            if !in_scaled_lattice(&self.cocycle.column(a), t, &self.coboundaries) {
                computed = false;
            }
        }
        if computed != self.vanishes {
            return Err("stored vanishing flag disagrees with lattice membership".into());
        }
        Ok(())
    }
}

impl fmt::Display for SecondaryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "secondary class at source degree {}: {} in ambient {}",
            self.source_degree,
            if self.vanishes { "zero" } else { "nonzero" },
            self.ambient
        )
    }
}

fn in_scaled_lattice(v: &Matrix, t: &BigInt, coboundaries: &Matrix) -> bool {
    let coeff = v.coeff;
    let n = v.rows;
    let scaled = Matrix::from_fn(coeff, n, n, |r, c| {
        if r == c {
            BigRational::from(t.clone())
        } else {
            BigRational::from(BigInt::from(0))
        }
    });
    spans_contain(&scaled.hstack(coboundaries), v)
}

/// Compute the secondary class of g at source degree i from normal
/// forms of source and target.
pub fn secondary_class(g: &ChainMap, i: i64) -> SecondaryClass {
    assert_eq!(g.source.coeff, Coefficients::Integers, "secondary classes live over the integers");
    let w = i - 1;
    let nfm = normal_form(&g.source);
    let nfn = normal_form(&g.target);
    let ghat =
        nfn.to_canonical.compose(&g.compose(&nfm.from_canonical));
    let gw = ghat.component(w);
    let coeff = g.source.coeff;
    let nrank = nfn.canonical.rank(w);

    // columns of ĝ^w at tops of torsion pieces of M at degree i
    let mut cols: Vec<usize> = vec![];
    let mut orders: Vec<BigInt> = vec![];
    for (pi, off, count, slot) in nfm.layout(w) {
        if slot != Slot::Top {
            continue;
        }
        if let Piece::TorsionPiece { degree, invariants } = &nfm.pieces[pi] {
            if *degree == i {
                for k in 0..count {
                    cols.push(off + k);
                    orders.push(invariants[k].clone());
                }
            }
        }
    }
    let cocycle = Matrix::from_fn(coeff, nrank, cols.len(), |r, c| gw.get(r, cols[c]).clone());
    let coboundaries = nfn.canonical.differential(w - 1);
    let mut ambient = GroupStructure::trivial();
    let mut vanishes = true;
    for (a, t) in orders.iter().enumerate() {
        let scaled = Matrix::from_fn(coeff, nrank, nrank, |r, c| {
            if r == c {
                BigRational::from(t.clone())
            } else {
                BigRational::from(BigInt::from(0))
            }
        });
        ambient = ambient.direct_sum(&crate::linalg::cokernel_structure(&scaled.hstack(&coboundaries)));
        if !in_scaled_lattice(&cocycle.column(a), t, &coboundaries) {
            vanishes = false;
        }
    }
    let out = SecondaryClass {
        source_degree: i,
        cocycle,
        torsion_orders: orders,
        coboundaries,
        ambient,
        vanishes,
    };
    out.verify().expect("internal invariant violation: fresh secondary class fails verification");
    out
}

/// g kills the single weight n iff the induced map on H^{−n} is zero
/// and the secondary class pairing H^{1−n}(M)-torsion with degree-(−n)
/// cochains of N vanishes.
pub fn kills_weight_homology(g: &ChainMap, n: i64) -> bool {
    assert_eq!(g.source.coeff, Coefficients::Integers);
    g.homology_vanishes(-n) && secondary_class(g, 1 - n).vanishes
}

/// M is without weights m..n iff H^j(M) = 0 for −n ≤ j ≤ −m and
/// H^{1−m}(M) is torsion-free.
pub fn homology_without_weights(m: &Complex, win: Window) -> bool {
    assert_eq!(m.coeff, Coefficients::Integers);
    for j in win.degree_low()..=win.degree_high() {
        if !m.homology(j).is_trivial() {
            return false;
        }
    }
    m.homology(win.degree_high() + 1).torsion.is_empty()
}

/// M lies in w≤n up to homotopy equivalence iff H^j(M) = 0 for
/// j < −n and H^{−n}(M) is torsion-free.
pub fn homology_skeleton_test(m: &Complex, n: i64) -> bool {
    assert_eq!(m.coeff, Coefficients::Integers);
    if let Some((lo, _)) = m.support() {
        for j in lo..-n {
            if !m.homology(j).is_trivial() {
                return false;
            }
        }
    }
    m.homology(-n).torsion.is_empty()
}

/// All homology trivial; for bounded complexes of free modules this is
/// the same as contractibility.
pub fn acyclicity_test(m: &Complex) -> bool {
    m.degrees().iter().all(|&i| m.homology(i).is_trivial())
}

/// H^i of the dual complex Hom(M^{−*}, G₀) for a finitely generated
/// coefficient group G₀.
pub fn em_cohomology(m: &Complex, g0: &GroupStructure, i: i64) -> GroupStructure {
    assert_eq!(m.coeff, Coefficients::Integers, "coefficient duals are computed over the integers");
    g0.check().expect("invalid coefficient group");
    let coeff = m.coeff;
    let gens = g0.rank + g0.torsion.len();

    // dual differential D^j → D^{j+1}: precompose with d_M^{−j−1};
    // an element of Hom(M^{−j}, G₀) is a (gens × rank M^{−j}) matrix F
    // flattened row-major, mapped to F·d
    let dual_rank = |j: i64| gens * m.rank(-j);
    let dual_diff = |j: i64| -> Matrix {
        let d = m.differential(-j - 1);
        Matrix::identity(coeff, gens).kron(&d.transpose())
    };
    // relation lattice at index j: λ_s on each torsion generator row
    let dual_rels = |j: i64| -> Matrix {
        let cols = m.rank(-j);
        let mut rel = Matrix::zero(coeff, gens * cols, g0.torsion.len() * cols);
        for (s, lam) in g0.torsion.iter().enumerate() {
            let row = g0.rank + s;
            for c in 0..cols {
                rel.set(row * cols + c, s * cols + c, BigRational::from(lam.clone()));
            }
        }
        rel
    };

    let n_i = dual_rank(i);
    if n_i == 0 {
        return GroupStructure::trivial();
    }
    // cocycles: x with (dual d) x lying in the relation lattice above
    let a_i = dual_diff(i);
    let rel_up = dual_rels(i + 1);
    let stacked = a_i.hstack(&rel_up.neg());
    let ker = kernel_basis(&stacked);
    let cocycles = Matrix::from_fn(coeff, n_i, ker.cols, |r, c| ker.get(r, c).clone());
    let rels = dual_diff(i - 1)
        .hstack(&dual_rels(i));
    subquotient_structure(&cocycles, &rels)
}

/// Cohomology of M with ℚ/ℤ-coefficients vanishes strictly below n.
/// ℚ/ℤ is injective and separates finitely generated groups, so this
/// is exactly the vanishing of H^j(M) for j > −n.
pub fn qz_dual_test(m: &Complex, n: i64) -> bool {
    assert_eq!(m.coeff, Coefficients::Integers);
    if let Some((_, hi)) = m.support() {
        for j in (-n + 1)..=hi {
            if !m.homology(j).is_trivial() {
                return false;
            }
        }
    }
    true
}

/// Solvability of the single-window equation d h + h' d = g at a given
/// source degree; the brute-force oracle for the homology criteria.
pub fn single_window_oracle(g: &ChainMap, degree: i64) -> bool {
    crate::complex::find_ranged_witness(g, Some(degree), Some(degree)).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ChainMap;

    fn z() -> Coefficients {
        Coefficients::Integers
    }

    fn mult2() -> Complex {
        Complex::from_data(z(), &[(0, 1), (1, 1)], &[(0, vec![vec![2]])])
    }

    #[test]
    fn secondary_class_of_identity_on_torsion() {
        let t = mult2();
        let id = ChainMap::identity(&t);
        // H¹ torsion drives a class at source degree 1 obstructing the
        // degree-0 window even though H⁰ = 0
        let sc = secondary_class(&id, 1);
        assert!(!sc.vanishes);
        assert_eq!(sc.ambient, GroupStructure { rank: 0, torsion: vec![BigInt::from(2)] });
        assert!(id.homology_vanishes(0));
        assert!(!single_window_oracle(&id, 0));
        // no torsion in H⁰, so the class at source degree 0 is empty
        let sc0 = secondary_class(&id, 0);
        assert!(sc0.vanishes);
        assert!(sc0.ambient.is_trivial());
    }

    #[test]
    fn kills_weight_homology_matches_oracle() {
        let t = mult2();
        let id = ChainMap::identity(&t);
        // degrees 0 and 1 carry weights 0 and −1
        assert!(!kills_weight_homology(&id, 0));
        assert!(!kills_weight_homology(&id, -1));
        assert!(kills_weight_homology(&id, 5));
        let zero = ChainMap::zero(&t, &t);
        assert!(kills_weight_homology(&zero, 0));
        assert!(kills_weight_homology(&zero, -1));
    }

    #[test]
    fn homology_criteria_examples() {
        let s = Complex::concentrated(z(), 0, 1);
        assert!(homology_without_weights(&s, Window::new(1, 2).unwrap()));
        assert!(!homology_without_weights(&s, Window::new(0, 0).unwrap()));
        let t = mult2();
        assert!(!homology_without_weights(&t, Window::new(0, 0).unwrap()));
        assert!(!homology_without_weights(&t, Window::new(-1, -1).unwrap()));
        assert!(homology_without_weights(&t, Window::new(1, 3).unwrap()));

        assert!(homology_skeleton_test(&s, 0));
        assert!(!homology_skeleton_test(&s, -1));
        assert!(homology_skeleton_test(&t, 0));
        assert!(!homology_skeleton_test(&t, -1));
    }

    #[test]
    fn acyclicity_examples() {
        let c = Complex::from_data(z(), &[(0, 1), (1, 1)], &[(0, vec![vec![1]])]);
        assert!(acyclicity_test(&c));
        assert!(!acyclicity_test(&mult2()));
    }

    #[test]
    fn em_cohomology_examples() {
        let s = Complex::concentrated(z(), 0, 1);
        // Hom(ℤ, ℤ) concentrated at index 0
        assert_eq!(em_cohomology(&s, &GroupStructure::free(1), 0), GroupStructure::free(1));
        assert!(em_cohomology(&s, &GroupStructure::free(1), 1).is_trivial());

        // Hom(mult2^{−*}, ℤ/2): ℤ/2 at indices −1 and 0
        let z2 = GroupStructure { rank: 0, torsion: vec![BigInt::from(2)] };
        let t = mult2();
        let h_neg1 = em_cohomology(&t, &z2, -1);
        let h_0 = em_cohomology(&t, &z2, 0);
        assert_eq!(h_neg1, z2);
        assert_eq!(h_0, z2);
        assert!(em_cohomology(&t, &z2, 1).is_trivial());
    }

    #[test]
    fn qz_dual_matches_homology_support() {
        let t = mult2();
        // homology sits at degree 1, so the dual vanishes below −1
        assert!(qz_dual_test(&t, -1));
        assert!(!qz_dual_test(&t, 0));
        let c = Complex::from_data(z(), &[(0, 1), (1, 1)], &[(0, vec![vec![1]])]);
        assert!(qz_dual_test(&c, -100));
    }
}
