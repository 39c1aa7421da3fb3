//! Representable-cohomology detectors: weight filtrations on hom
//! groups, virtual truncations of the functors Hom(−, I), the detector
//! test for killing weights, and pure functors reading off weight
//! ranges.

use crate::complex::{
    find_nullhomotopy, hom_presentation, ChainMap, Complex, Presentation,
};
use crate::linalg::{solve, spans_contain, Coefficients, GroupStructure, Matrix};
use crate::weights::{quotient_below, sharp_weight_interval, sub_above, Window};
use num_bigint::BigInt;
use std::collections::BTreeMap;

/// Restrict g: M → N to the subcomplexes of degrees ≥ −l on both
/// sides (the map of stupid truncations w≤l).
pub fn truncate_map(g: &ChainMap, l: i64) -> ChainMap {
    let (xs, _) = sub_above(&g.source, -l);
    let (xt, _) = sub_above(&g.target, -l);
    let comps: BTreeMap<i64, Matrix> = g
        .components()
        .iter()
        .filter(|(i, _)| **i >= -l)
        .map(|(i, m)| (*i, m.clone()))
        .collect();
    ChainMap::new(xs, xt, comps).expect("restriction of a chain map to matching truncations")
}

/// W^m(H_I)(M) = im( hom(w≥m M, I) → hom(M, I) ), stored as a
/// subgroup of the hom-group presentation.
#[derive(Clone, Debug)]
pub struct WeightFiltrationValue {
    pub index: i64,
    /// Presentation of hom_group(M, I) in cycle coordinates.
    pub ambient: Presentation,
    /// Coordinates of the subgroup generators in the ambient cycle basis.
    pub generators: Matrix,
    /// Chain-map representatives M → I of the generators.
    pub maps: Vec<ChainMap>,
    pub structure: GroupStructure,
}

impl WeightFiltrationValue {
    /// Does the class of f: M → I lie in this filtration step?
    pub fn contains(&self, f: &ChainMap) -> bool {
        let hc = crate::complex::HomComplex::new(&f.source, &f.target);
        let flat = hc.flatten(0, f.components());
        let kb = hc.complex.cycles(0);
        let coords = solve(&kb, &flat).expect("chain maps are hom-complex cycles");
        spans_contain(&self.generators.hstack(&self.ambient.relations), &coords)
    }
}

/// Compute W^m(H_I)(M) via the stupid truncation w≥m M.
pub fn weight_filtration(i_obj: &Complex, m: i64, mm: &Complex) -> WeightFiltrationValue {
    // w≥m M keeps degrees ≤ −m
    let (high, proj) = quotient_below(mm, 1 - m);
    let (hc_m, kb, pres) = hom_presentation(mm, i_obj);
    let hc_high = crate::complex::HomComplex::new(&high, i_obj);
    let cyc = hc_high.complex.cycles(0);
    let mut gen_coords = Matrix::zero(mm.coeff, kb.cols, 0);
    let mut maps = vec![];
    for c in 0..cyc.cols {
        let comps = hc_high.unflatten(0, &cyc.column(c));
        let f = ChainMap::new(high.clone(), i_obj.clone(), comps)
            .expect("hom-complex cycles are chain maps");
        let pulled = f.compose(&proj);
        let flat = hc_m.flatten(0, pulled.components());
        let coords = solve(&kb, &flat).expect("chain maps are hom-complex cycles");
        gen_coords = gen_coords.hstack(&coords);
        maps.push(pulled);
    }
    let structure = pres.subgroup_structure(&gen_coords);
    WeightFiltrationValue { index: m, ambient: pres, generators: gen_coords, maps, structure }
}

/// τ^{≥−n}(H_I)(M) = im( hom(w≤n+1 M, I) → hom(w≤n M, I) ), as a
/// subgroup of the hom group at the truncation w≤n M.
#[derive(Clone, Debug)]
pub struct DetectorValue {
    pub bound: i64,
    pub ambient: Presentation,
    pub generators: Matrix,
    /// Chain-map representatives w≤n M → I of the generators.
    pub maps: Vec<ChainMap>,
    pub structure: GroupStructure,
}

/// Compute τ^{≥−n}(H_I)(M) with the stupid truncations.
pub fn virtual_truncation_value(i_obj: &Complex, n: i64, mm: &Complex) -> DetectorValue {
    let (low, _) = sub_above(mm, -n);
    let (wide, _) = sub_above(mm, -n - 1);
    // inclusion w≤n M ⊂ w≤n+1 M
    let inc_comps: BTreeMap<i64, Matrix> = low
        .ranks()
        .iter()
        .map(|(i, r)| (*i, Matrix::identity(mm.coeff, *r)))
        .collect();
    let inc = ChainMap::new(low.clone(), wide.clone(), inc_comps)
        .expect("smaller truncation includes into the wider one");
    let (hc_low, kb, pres) = hom_presentation(&low, i_obj);
    let hc_wide = crate::complex::HomComplex::new(&wide, i_obj);
    let cyc = hc_wide.complex.cycles(0);
    let mut gen_coords = Matrix::zero(mm.coeff, kb.cols, 0);
    let mut maps = vec![];
    for c in 0..cyc.cols {
        let comps = hc_wide.unflatten(0, &cyc.column(c));
        let f = ChainMap::new(wide.clone(), i_obj.clone(), comps)
            .expect("hom-complex cycles are chain maps");
        let restricted = f.compose(&inc);
        let flat = hc_low.flatten(0, restricted.components());
        let coords = solve(&kb, &flat).expect("chain maps are hom-complex cycles");
        gen_coords = gen_coords.hstack(&coords);
        maps.push(restricted);
    }
    let structure = pres.subgroup_structure(&gen_coords);
    DetectorValue { bound: n, ambient: pres, generators: gen_coords, maps, structure }
}

/// Action of τ^{≥−n}(H_I) on g: M' → M: pull every generator of the
/// value at M back along w≤n g. Returns the pulled-back maps
/// w≤n M' → I.
pub fn virtual_truncation_action(
    i_obj: &Complex,
    n: i64,
    g: &ChainMap,
) -> (DetectorValue, Vec<ChainMap>) {
    let value = virtual_truncation_value(i_obj, n, &g.target);
    let tg = truncate_map(g, n);
    let pulled = value.maps.iter().map(|f| f.compose(&tg)).collect();
    (value, pulled)
}

/// The detector criterion: g kills weights m..n iff the virtual
/// truncation τ^{≥−n}(H_{I₀}) with I₀ = w≥m N acts as zero on g.
pub fn detector_test(g: &ChainMap, win: Window) -> bool {
    let (i0, _) = quotient_below(&g.target, 1 - win.m());
    let (_, pulled) = virtual_truncation_action(&i0, win.n(), g);
    pulled.iter().all(|f| find_nullhomotopy(f).is_some())
}

/// Pure functor specifications for weight detection.
#[derive(Clone, Debug)]
pub enum PureFunctor {
    /// Identity embedding of free modules.
    Identity,
    /// − ⊗ F_p termwise.
    TensorFp(u64),
    /// Hom(−, G₀) termwise for a finitely generated G₀.
    HomInto(GroupStructure),
}

/// Homology at index i of the termwise transform of M under the pure
/// functor. F_p-vector spaces are reported as torsion groups (ℤ/p)^d.
pub fn pure_homology(spec: &PureFunctor, m: &Complex, i: i64) -> GroupStructure {
    match spec {
        PureFunctor::Identity => m.homology(i),
        PureFunctor::TensorFp(p) => {
            let fp = Coefficients::PrimeField(*p);
            fp.validate().expect("modulus must be prime");
            let reduced = m.change_coefficients(fp);
            let h = reduced.homology(i);
            GroupStructure { rank: 0, torsion: vec![BigInt::from(*p); h.rank] }
        }
        PureFunctor::HomInto(g0) => crate::spherical::em_cohomology(m, g0, -i),
    }
}

/// Weight interval of M read off pure homology: the degrees where
/// homology survives, widened one step down at every degree carrying
/// torsion (where the boundary map fails to split). Cross-checked
/// against the normal form. None for contractible M.
pub fn detect_weight_range(m: &Complex) -> Option<(i64, i64)> {
    let mut dmin: Option<i64> = None;
    let mut dmax: Option<i64> = None;
    let mark = |d: i64, dmin: &mut Option<i64>, dmax: &mut Option<i64>| {
        *dmin = Some(dmin.map_or(d, |x| x.min(d)));
        *dmax = Some(dmax.map_or(d, |x| x.max(d)));
    };
    for j in m.degrees() {
        let h = pure_homology(&PureFunctor::Identity, m, j);
        if !h.is_trivial() {
            mark(j, &mut dmin, &mut dmax);
        }
        if !h.torsion.is_empty() {
            mark(j - 1, &mut dmin, &mut dmax);
        }
    }
    let out = match (dmin, dmax) {
        (Some(a), Some(b)) => Some((-b, -a)),
        _ => None,
    };
    assert_eq!(
        out,
        sharp_weight_interval(m),
        "internal invariant violation: pure-homology weight range disagrees with the normal form"
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{kills_weights, Method};

    fn z() -> Coefficients {
        Coefficients::Integers
    }

    fn mult2() -> Complex {
        Complex::from_data(z(), &[(0, 1), (1, 1)], &[(0, vec![vec![2]])])
    }

    #[test]
    fn weight_filtration_sphere() {
        let s = Complex::concentrated(z(), 0, 1);
        let w0 = weight_filtration(&s, 0, &s);
        assert_eq!(w0.structure, GroupStructure::free(1));
        let w1 = weight_filtration(&s, 1, &s);
        assert!(w1.structure.is_trivial());
    }

    #[test]
    fn weight_filtration_monotone() {
        let t = mult2();
        let i_obj = mult2();
        let mut prev = weight_filtration(&i_obj, -2, &t);
        for m in -1..=2 {
            let cur = weight_filtration(&i_obj, m, &t);
            // W^{m−1} ⊇ W^m: every generator of cur lies in prev's span
            let lattice = prev.generators.hstack(&prev.ambient.relations);
            assert!(spans_contain(&lattice, &cur.generators), "m = {}", m);
            prev = cur;
        }
    }

    #[test]
    fn virtual_truncation_sphere() {
        let s = Complex::concentrated(z(), 0, 1);
        let v = virtual_truncation_value(&s, 0, &s);
        assert_eq!(v.structure, GroupStructure::free(1));
        // M = ℤ in degree −1 has weight 1; w≤0 M = 0
        let m = Complex::concentrated(z(), -1, 1);
        let v = virtual_truncation_value(&s, 0, &m);
        assert!(v.structure.is_trivial());
    }

    #[test]
    fn detector_basic_cases() {
        let s = Complex::concentrated(z(), 0, 1);
        let w = Window::new(0, 0).unwrap();
        assert!(detector_test(&ChainMap::zero(&s, &s), w));
        assert!(!detector_test(&ChainMap::identity(&s), w));
        let id = ChainMap::identity(&mult2());
        assert!(!detector_test(&id, Window::new(0, 0).unwrap()));
        assert!(!detector_test(&id, Window::new(-1, -1).unwrap()));
        assert!(detector_test(&id, Window::new(2, 3).unwrap()));
    }

    #[test]
    fn detector_matches_direct() {
        let t = mult2();
        let id = ChainMap::identity(&t);
        for m in -2..=2 {
            for n in m..=2 {
                let w = Window::new(m, n).unwrap();
                let d = kills_weights(&id, w, Method::Direct).verdict;
                assert_eq!(detector_test(&id, w), d, "window {}", w);
            }
        }
    }

    #[test]
    fn pure_homology_examples() {
        let t = mult2();
        let f2 = pure_homology(&PureFunctor::TensorFp(2), &t, 0);
        assert_eq!(f2.torsion, vec![BigInt::from(2)]);
        let f2 = pure_homology(&PureFunctor::TensorFp(2), &t, 1);
        assert_eq!(f2.torsion, vec![BigInt::from(2)]);
        assert!(pure_homology(&PureFunctor::TensorFp(3), &t, 0).is_trivial());

        let z2 = GroupStructure { rank: 0, torsion: vec![BigInt::from(2)] };
        let h = pure_homology(&PureFunctor::HomInto(z2.clone()), &t, 0);
        assert_eq!(h, z2);
    }

    #[test]
    fn weight_range_examples() {
        let s = Complex::concentrated(z(), 0, 1);
        assert_eq!(detect_weight_range(&s), Some((0, 0)));
        assert_eq!(detect_weight_range(&mult2()), Some((-1, 0)));
        let c = Complex::from_data(z(), &[(0, 1), (1, 1)], &[(0, vec![vec![1]])]);
        assert_eq!(detect_weight_range(&c), None);
    }
}
