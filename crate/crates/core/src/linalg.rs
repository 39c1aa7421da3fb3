//! Exact linear algebra over the integers, the rationals, and prime fields.
//!
//! Everything here is arbitrary precision; there is no floating point
//! anywhere. The Smith normal form carries its transformation matrices
//! together with their inverses and re-verifies itself on every call.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Base ring of a computation: ℤ, ℚ or F_p.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize, Hash)]
pub enum Coefficients {
    Integers,
    Rationals,
    PrimeField(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Coefficients {
    pub fn is_field(&self) -> bool {
        !matches!(self, Coefficients::Integers)
    }

    pub fn validate(&self) -> Result<(), String> {
        match self {
            Coefficients::PrimeField(p) if !is_prime(*p) => {
                Err(format!("{} is not prime", p))
            }
            _ => Ok(()),
        }
    }

    /// Bring a scalar to canonical form in this ring.
    pub fn reduce(&self, x: BigRational) -> BigRational {
        match self {
            Coefficients::Integers | Coefficients::Rationals => x,
            Coefficients::PrimeField(p) => {
                let p = BigInt::from(*p);
                assert!(x.denom().gcd(&p).is_one(), "denominator not invertible mod p");
                // clear the denominator with a modular inverse
                let num = x.numer().mod_floor(&p);
                let den = x.denom().mod_floor(&p);
                let inv = mod_inverse(&den, &p);
                BigRational::from((num * inv).mod_floor(&p))
            }
        }
    }

    pub fn is_unit(&self, x: &BigRational) -> bool {
        match self {
            Coefficients::Integers => x.is_integer() && x.numer().abs().is_one(),
            _ => !x.is_zero(),
        }
    }

    pub fn inv(&self, x: &BigRational) -> BigRational {
        assert!(self.is_unit(x), "not a unit in {:?}: {}", self, x);
        self.reduce(x.recip())
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "Z"),
            Coefficients::Rationals => write!(f, "Q"),
            Coefficients::PrimeField(p) => write!(f, "F{}", p),
        }
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    let e = a.extended_gcd(p);
    assert!(e.gcd.is_one(), "{} not invertible mod {}", a, p);
    e.x.mod_floor(p)
}

/// Dense matrix with exact entries in a fixed coefficient ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    pub coeff: Coefficients,
    pub rows: usize,
    pub cols: usize,
    entries: Vec<BigRational>, // row major
}

impl Matrix {
    pub fn zero(coeff: Coefficients, rows: usize, cols: usize) -> Self {
        Matrix {
            coeff,
            rows,
            cols,
            entries: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(coeff: Coefficients, n: usize) -> Self {
        let mut m = Matrix::zero(coeff, n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_fn(
        coeff: Coefficients,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> BigRational,
    ) -> Self {
        let mut m = Matrix::zero(coeff, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_i64_rows(coeff: Coefficients, data: &[Vec<i64>]) -> Self {
        let rows = data.len();
        let cols = data.first().map(|r| r.len()).unwrap_or(0);
        Matrix::from_fn(coeff, rows, cols, |i, j| BigRational::from(BigInt::from(data[i][j])))
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.entries[i * self.cols + j] = self.coeff.reduce(v);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.get(i, j).is_one()
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    /// All entries integral (denominator 1)?
    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|e| e.is_integer())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.coeff, other.coeff, "coefficient mismatch");
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Matrix::zero(self.coeff, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch in add");
        Matrix::from_fn(self.coeff, self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch in sub");
        Matrix::from_fn(self.coeff, self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn neg(&self) -> Matrix {
        Matrix::from_fn(self.coeff, self.rows, self.cols, |i, j| -self.get(i, j))
    }

    pub fn scale(&self, s: &BigRational) -> Matrix {
        Matrix::from_fn(self.coeff, self.rows, self.cols, |i, j| self.get(i, j) * s)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.coeff, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "dimension mismatch in hstack");
        Matrix::from_fn(self.coeff, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "dimension mismatch in vstack");
        Matrix::from_fn(self.coeff, self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        })
    }

    pub fn column(&self, j: usize) -> Matrix {
        Matrix::from_fn(self.coeff, self.rows, 1, |i, _| self.get(i, j).clone())
    }

    pub fn columns(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.coeff, self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn row_slice(&self, lo: usize, hi: usize) -> Matrix {
        Matrix::from_fn(self.coeff, hi - lo, self.cols, |i, j| self.get(i + lo, j).clone())
    }

    /// Kronecker product; with row-major flattening, vec(A·X·B) = (A ⊗ Bᵀ)·vec(X).
    pub fn kron(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.coeff, other.coeff, "coefficient mismatch in kron");
        Matrix::from_fn(
            self.coeff,
            self.rows * other.rows,
            self.cols * other.cols,
            |i, j| self.get(i / other.rows, j / other.cols) * other.get(i % other.rows, j % other.cols),
        )
    }

    pub fn with_coeff(&self, coeff: Coefficients) -> Matrix {
        Matrix::from_fn(coeff, self.rows, self.cols, |i, j| self.get(i, j).clone())
    }

    pub fn to_i64_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Finitely generated abelian group ℤ^rank ⊕ ⊕ ℤ/tᵢ with t₁ | t₂ | …
/// Over a field the torsion list is empty and rank is the dimension.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GroupStructure {
    pub rank: usize,
    #[serde(with = "bigint_strings")]
    pub torsion: Vec<BigInt>,
}

/// Serialize big-integer lists as decimal strings so documents stay
/// readable and diffable.
pub mod bigint_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|t| t.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|t| BigInt::from_str(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl GroupStructure {
    pub fn trivial() -> Self {
        GroupStructure { rank: 0, torsion: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        GroupStructure { rank, torsion: vec![] }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn check(&self) -> Result<(), String> {
        for w in self.torsion.windows(2) {
            if !w[1].mod_floor(&w[0]).is_zero() {
                return Err(format!("torsion chain broken: {} does not divide {}", w[0], w[1]));
            }
        }
        if self.torsion.iter().any(|t| *t < BigInt::from(2)) {
            return Err("torsion invariant below 2".into());
        }
        Ok(())
    }

    /// Rebuild the invariant-factor chain from an arbitrary list of
    /// torsion orders.
    pub fn normalized(&self) -> GroupStructure {
        GroupStructure { rank: self.rank, torsion: vec![] }
            .direct_sum(&GroupStructure { rank: 0, torsion: self.torsion.clone() })
    }

    pub fn direct_sum(&self, other: &GroupStructure) -> GroupStructure {
        // recombine the invariant chains via elementary divisors
        let mut primary: Vec<(BigInt, u32)> = vec![];
        for t in self.torsion.iter().chain(other.torsion.iter()) {
            let mut t = t.clone();
            let mut d = BigInt::from(2);
            while &d * &d <= t {
                if t.mod_floor(&d).is_zero() {
                    let mut e = 0u32;
                    while t.mod_floor(&d).is_zero() {
                        t /= &d;
                        e += 1;
                    }
                    primary.push((d.clone(), e));
                }
                d += 1;
            }
            if t > BigInt::one() {
                primary.push((t, 1));
            }
        }
        // for each prime gather exponents, rebuild chain from the top
        let mut by_prime: std::collections::BTreeMap<BigInt, Vec<u32>> = Default::default();
        for (p, e) in primary {
            by_prime.entry(p).or_default().push(e);
        }
        let depth = by_prime.values().map(|v| v.len()).max().unwrap_or(0);
        let mut chain = vec![BigInt::one(); depth];
        for (p, mut es) in by_prime {
            es.sort_unstable_by(|a, b| b.cmp(a));
            for (slot, e) in es.into_iter().enumerate() {
                chain[slot] *= p.pow(e);
            }
        }
        chain.reverse();
        GroupStructure { rank: self.rank + other.rank, torsion: chain }
    }
}

impl fmt::Display for GroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = vec![];
        if self.rank > 0 {
            parts.push(if self.rank == 1 { "Z".to_string() } else { format!("Z^{}", self.rank) });
        }
        for t in &self.torsion {
            parts.push(format!("Z/{}", t));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Diagonalization U·A·V = D with tracked inverses. Over ℤ this is the
/// Smith normal form (U, V unimodular, divisor chain on the diagonal);
/// over a field it is the rank normal form with unit pivots.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: Matrix,
    pub u_inv: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
    pub d: Matrix,
    pub rank: usize,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigRational> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn verify(&self, a: &Matrix) -> Result<(), String> {
        if self.u.mul(a).mul(&self.v) != self.d {
            return Err("U·A·V != D".into());
        }
        if !self.u.mul(&self.u_inv).is_identity() || !self.v.mul(&self.v_inv).is_identity() {
            return Err("transform inverses wrong".into());
        }
        for i in 0..self.d.rows {
            for j in 0..self.d.cols {
                if i != j && !self.d.get(i, j).is_zero() {
                    return Err("D not diagonal".into());
                }
            }
        }
        let n = self.d.rows.min(self.d.cols);
        for i in 0..n {
            let nonzero = !self.d.get(i, i).is_zero();
            if nonzero != (i < self.rank) {
                return Err("rank inconsistent with diagonal".into());
            }
        }
        if a.coeff == Coefficients::Integers {
            if !det_is_unit(&self.u) || !det_is_unit(&self.v) {
                return Err("transform not unimodular".into());
            }
            for i in 0..self.rank {
                let di = self.d.get(i, i);
                if !di.is_integer() || di.numer().is_negative() {
                    return Err("diagonal entry not a nonnegative integer".into());
                }
                if i + 1 < self.rank {
                    let dn = self.d.get(i + 1, i + 1);
                    if !dn.numer().mod_floor(&di.numer().clone()).is_zero() {
                        return Err("divisibility chain broken".into());
                    }
                }
            }
        }
        Ok(())
    }
}

/// |det| = 1 check for an integer matrix, by fraction-free elimination.
fn det_is_unit(m: &Matrix) -> bool {
    m.rows == m.cols && det_bareiss(m).abs().is_one()
}

pub fn det_bareiss(m: &Matrix) -> BigInt {
    assert_eq!(m.rows, m.cols);
    assert!(m.is_integral());
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j).numer().clone()).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = &num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

struct Transform {
    side: Matrix,     // accumulated U or V
    side_inv: Matrix, // its inverse
}

/// Diagonalize with tracked transforms. Dispatches on the coefficient ring.
pub fn diagonalize(a: &Matrix) -> SmithForm {
    let f = match a.coeff {
        Coefficients::Integers => smith_integers(a),
        _ => rank_form_field(a),
    };
    if let Err(e) = f.verify(a) {
        panic!("internal invariant violation: smith form self-check failed: {}", e);
    }
    f
}

/// Smith normal form of an integer matrix.
pub fn smith_normal_form(a: &Matrix) -> SmithForm {
    assert_eq!(a.coeff, Coefficients::Integers, "smith_normal_form needs integer entries");
    assert!(a.is_integral(), "smith_normal_form needs integer entries");
    diagonalize(a)
}

fn smith_integers(a: &Matrix) -> SmithForm {
    let rows = a.rows;
    let cols = a.cols;
    let mut w: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| (0..cols).map(|j| a.get(i, j).numer().clone()).collect())
        .collect();
    let c = Coefficients::Integers;
    let mut left = Transform { side: Matrix::identity(c, rows), side_inv: Matrix::identity(c, rows) };
    let mut right = Transform { side: Matrix::identity(c, cols), side_inv: Matrix::identity(c, cols) };

    let swap_rows = |w: &mut Vec<Vec<BigInt>>, t: &mut Transform, i: usize, j: usize| {
        w.swap(i, j);
        for k in 0..t.side.cols {
            let a = t.side.get(i, k).clone();
            let b = t.side.get(j, k).clone();
            t.side.set(i, k, b);
            t.side.set(j, k, a);
        }
        for k in 0..t.side_inv.rows {
            let a = t.side_inv.get(k, i).clone();
            let b = t.side_inv.get(k, j).clone();
            t.side_inv.set(k, i, b);
            t.side_inv.set(k, j, a);
        }
    };
    let swap_cols = |w: &mut Vec<Vec<BigInt>>, t: &mut Transform, i: usize, j: usize| {
        for row in w.iter_mut() {
            row.swap(i, j);
        }
        for k in 0..t.side.rows {
            let a = t.side.get(k, i).clone();
            let b = t.side.get(k, j).clone();
            t.side.set(k, i, b);
            t.side.set(k, j, a);
        }
        for k in 0..t.side_inv.cols {
            let a = t.side_inv.get(i, k).clone();
            let b = t.side_inv.get(j, k).clone();
            t.side_inv.set(i, k, b);
            t.side_inv.set(j, k, a);
        }
    };
    // row_i += q * row_j
    let add_row = |w: &mut Vec<Vec<BigInt>>, t: &mut Transform, i: usize, j: usize, q: &BigInt| {
        for k in 0..w[0].len() {
            let v = &w[i][k] + q * &w[j][k];
            w[i][k] = v;
        }
        for k in 0..t.side.cols {
            let v = t.side.get(i, k) + &BigRational::from(q.clone()) * t.side.get(j, k);
            t.side.set(i, k, v);
        }
        for k in 0..t.side_inv.rows {
            let v = t.side_inv.get(k, j) - &BigRational::from(q.clone()) * t.side_inv.get(k, i);
            t.side_inv.set(k, j, v);
        }
    };
    // col_j += q * col_i
    let add_col = |w: &mut Vec<Vec<BigInt>>, t: &mut Transform, j: usize, i: usize, q: &BigInt| {
        for row in w.iter_mut() {
            let v = &row[j] + q * &row[i];
            row[j] = v;
        }
        for k in 0..t.side.rows {
            let v = t.side.get(k, j) + &BigRational::from(q.clone()) * t.side.get(k, i);
            t.side.set(k, j, v);
        }
        for k in 0..t.side_inv.cols {
            let v = t.side_inv.get(i, k) - &BigRational::from(q.clone()) * t.side_inv.get(j, k);
            t.side_inv.set(i, k, v);
        }
    };
    let negate_row = |w: &mut Vec<Vec<BigInt>>, t: &mut Transform, i: usize| {
        for k in 0..w[0].len() {
            w[i][k] = -w[i][k].clone();
        }
        for k in 0..t.side.cols {
            let v = -t.side.get(i, k).clone();
            t.side.set(i, k, v);
        }
        for k in 0..t.side_inv.rows {
            let v = -t.side_inv.get(k, i).clone();
            t.side_inv.set(k, i, v);
        }
    };

    let n = rows.min(cols);
    let mut rank = 0;
    for t in 0..n {
        loop {
            // minimal nonzero absolute value, row-major tie break
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !w[i][j].is_zero() {
                        let better = match &pivot {
                            None => true,
                            Some((pi, pj)) => w[i][j].abs() < w[*pi][*pj].abs(),
                        };
                        if better {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
            let (pi, pj) = match pivot {
                Some(p) => p,
                None => {
                    rank = t;
                    return finish_smith(a.coeff, rows, cols, w, left, right, rank);
                }
            };
            if pi != t {
                swap_rows(&mut w, &mut left, t, pi);
            }
            if pj != t {
                swap_cols(&mut w, &mut right, t, pj);
            }
            // clear column t
            let mut dirty = false;
            for i in t + 1..rows {
                if !w[i][t].is_zero() {
                    let q = -(&w[i][t]).div_floor(&w[t][t]);
                    add_row(&mut w, &mut left, i, t, &q);
                    if !w[i][t].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // clear row t
            for j in t + 1..cols {
                if !w[t][j].is_zero() {
                    let q = -(&w[t][j]).div_floor(&w[t][t]);
                    add_col(&mut w, &mut right, j, t, &q);
                    if !w[t][j].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            if !(t + 1..rows).all(|i| w[i][t].is_zero()) || !(t + 1..cols).all(|j| w[t][j].is_zero()) {
                continue;
            }
            // divisibility fix-up
            let p = w[t][t].clone();
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !w[i][j].mod_floor(&p).is_zero());
            match offender {
                Some((i, _)) => {
                    add_row(&mut w, &mut left, t, i, &BigInt::one());
                }
                None => {
                    if w[t][t].is_negative() {
                        negate_row(&mut w, &mut left, t);
                    }
                    break;
                }
            }
        }
        rank = t + 1;
    }
    finish_smith(a.coeff, rows, cols, w, left, right, rank)
}

fn finish_smith(
    coeff: Coefficients,
    rows: usize,
    cols: usize,
    w: Vec<Vec<BigInt>>,
    left: Transform,
    right: Transform,
    rank: usize,
) -> SmithForm {
    let d = Matrix::from_fn(coeff, rows, cols, |i, j| BigRational::from(w[i][j].clone()));
    SmithForm {
        u: left.side,
        u_inv: left.side_inv,
        v: right.side,
        v_inv: right.side_inv,
        d,
        rank,
    }
}

fn rank_form_field(a: &Matrix) -> SmithForm {
    let coeff = a.coeff;
    assert!(coeff.is_field());
    let rows = a.rows;
    let cols = a.cols;
    let mut w = a.clone();
    let mut u = Matrix::identity(coeff, rows);
    let mut u_inv = Matrix::identity(coeff, rows);
    let mut v = Matrix::identity(coeff, cols);
    let mut v_inv = Matrix::identity(coeff, cols);
    let n = rows.min(cols);
    let mut rank = 0;
    for t in 0..n {
        // first nonzero entry, row major
        let mut pivot = None;
        'outer: for i in t..rows {
            for j in t..cols {
                if !w.get(i, j).is_zero() {
                    pivot = Some((i, j));
                    break 'outer;
                }
            }
        }
        let (pi, pj) = match pivot {
            Some(p) => p,
            None => break,
        };
        if pi != t {
            for k in 0..cols {
                let (x, y) = (w.get(t, k).clone(), w.get(pi, k).clone());
                w.set(t, k, y);
                w.set(pi, k, x);
            }
            for k in 0..rows {
                let (x, y) = (u.get(t, k).clone(), u.get(pi, k).clone());
                u.set(t, k, y);
                u.set(pi, k, x);
                let (x, y) = (u_inv.get(k, t).clone(), u_inv.get(k, pi).clone());
                u_inv.set(k, t, y);
                u_inv.set(k, pi, x);
            }
        }
        if pj != t {
            for k in 0..rows {
                let (x, y) = (w.get(k, t).clone(), w.get(k, pj).clone());
                w.set(k, t, y);
                w.set(k, pj, x);
            }
            for k in 0..cols {
                let (x, y) = (v.get(k, t).clone(), v.get(k, pj).clone());
                v.set(k, t, y);
                v.set(k, pj, x);
                let (x, y) = (v_inv.get(t, k).clone(), v_inv.get(pj, k).clone());
                v_inv.set(t, k, y);
                v_inv.set(pj, k, x);
            }
        }
        // scale pivot row to make the pivot 1
        let s = coeff.inv(w.get(t, t));
        if !s.is_one() {
            let si = coeff.inv(&s);
            for k in 0..cols {
                let x = w.get(t, k) * &s;
                w.set(t, k, x);
            }
            for k in 0..rows {
                let x = u.get(t, k) * &s;
                u.set(t, k, x);
                let x = u_inv.get(k, t) * &si;
                u_inv.set(k, t, x);
            }
        }
        for i in 0..rows {
            if i != t && !w.get(i, t).is_zero() {
                let q = w.get(i, t).clone();
                for k in 0..cols {
                    let x = w.get(i, k) - &q * w.get(t, k);
                    w.set(i, k, x);
                }
                for k in 0..rows {
                    let x = u.get(i, k) - &q * u.get(t, k);
                    u.set(i, k, x);
                    let x = u_inv.get(k, t) + &q * u_inv.get(k, i);
                    u_inv.set(k, t, x);
                }
            }
        }
        for j in 0..cols {
            if j != t && !w.get(t, j).is_zero() {
                let q = w.get(t, j).clone();
                for k in 0..rows {
                    let x = w.get(k, j) - &q * w.get(k, t);
                    w.set(k, j, x);
                }
                for k in 0..cols {
                    let x = v.get(k, j) - &q * v.get(k, t);
                    v.set(k, j, x);
                    let x = v_inv.get(t, k) + &q * v_inv.get(j, k);
                    v_inv.set(t, k, x);
                }
            }
        }
        rank = t + 1;
    }
    SmithForm { u, u_inv, v, v_inv, d: w, rank }
}

/// Exact solve A·X = B in the coefficient ring; over ℤ only integral
/// solutions count. Returns None when no solution exists in the ring.
pub fn solve(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    assert_eq!(a.coeff, b.coeff, "coefficient mismatch in solve");
    assert_eq!(a.rows, b.rows, "dimension mismatch in solve");
    let f = diagonalize(a);
    let ub = f.u.mul(b);
    let mut y = Matrix::zero(a.coeff, a.cols, b.cols);
    for c in 0..b.cols {
        for i in 0..a.rows {
            let rhs = ub.get(i, c);
            if i < f.rank {
                let di = f.d.get(i, i);
                let q = rhs / di;
                if a.coeff == Coefficients::Integers && !q.is_integer() {
                    return None;
                }
                y.set(i, c, q);
            } else if !rhs.is_zero() {
                return None;
            }
        }
    }
    Some(f.v.mul(&y))
}

/// Basis of ker A as matrix columns. Over ℤ the basis spans the full
/// (saturated) kernel lattice.
pub fn kernel_basis(a: &Matrix) -> Matrix {
    let f = diagonalize(a);
    let idx: Vec<usize> = (f.rank..a.cols).collect();
    f.v.columns(&idx)
}

/// Basis of the column span (lattice over ℤ, subspace over a field).
pub fn column_span_basis(a: &Matrix) -> Matrix {
    let f = diagonalize(a);
    let mut out = Matrix::zero(a.coeff, a.rows, f.rank);
    for i in 0..f.rank {
        let di = f.d.get(i, i);
        for r in 0..a.rows {
            out.set(r, i, f.u_inv.get(r, i) * di);
        }
    }
    out
}

/// Structure of coker A = target / column span.
pub fn cokernel_structure(a: &Matrix) -> GroupStructure {
    let f = diagonalize(a);
    let mut torsion = vec![];
    if a.coeff == Coefficients::Integers {
        for i in 0..f.rank {
            let di = f.d.get(i, i).numer().clone();
            if di > BigInt::one() {
                torsion.push(di);
            }
        }
    }
    let g = GroupStructure { rank: a.rows - f.rank, torsion };
    g.check().expect("internal invariant violation: bad group structure");
    g
}

/// Structure of the subquotient (span(gens) + span(rels)) / span(rels)
/// inside ℤ^n (or the corresponding quotient of vector spaces). `gens`
/// and `rels` are given by columns in ambient coordinates.
pub fn subquotient_structure(gens: &Matrix, rels: &Matrix) -> GroupStructure {
    assert_eq!(gens.rows, rels.rows, "ambient dimension mismatch");
    let w = column_span_basis(&gens.hstack(rels));
    if w.cols == 0 {
        return GroupStructure::trivial();
    }
    let x = solve(&w, rels).expect("relations must lie in the combined span");
    // W / span(rels) where W is free on w.cols generators
    let mut torsion = vec![];
    let f = diagonalize(&x);
    if gens.coeff == Coefficients::Integers {
        for i in 0..f.rank {
            let di = f.d.get(i, i).numer().clone();
            if di > BigInt::one() {
                torsion.push(di);
            }
        }
    }
    GroupStructure { rank: w.cols - f.rank, torsion }
}

/// Does every column of `vecs` lie in the column span of `lattice`?
pub fn spans_contain(lattice: &Matrix, vecs: &Matrix) -> bool {
    solve(lattice, vecs).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zmat(data: &[Vec<i64>]) -> Matrix {
        Matrix::from_i64_rows(Coefficients::Integers, data)
    }

    #[test]
    fn snf_divisor_chain_2_4() {
        let a = zmat(&[vec![2, 4], vec![6, 8]]);
        let f = smith_normal_form(&a);
        assert_eq!(f.rank, 2);
        let d: Vec<String> = f.diagonal().iter().map(|x| x.to_string()).collect();
        assert_eq!(d, vec!["2", "4"]);
        // gcd of 1x1 minors is 2; the 2x2 determinant is 2*8-4*6 = -8, so d1*d2 = 8
        f.verify(&a).unwrap();
    }

    #[test]
    fn snf_zero_and_identity() {
        let z = Matrix::zero(Coefficients::Integers, 2, 3);
        let f = smith_normal_form(&z);
        assert_eq!(f.rank, 0);
        assert!(f.d.is_zero());

        let i = Matrix::identity(Coefficients::Integers, 3);
        let f = smith_normal_form(&i);
        assert_eq!(f.rank, 3);
        assert!(f.d.is_identity());
    }

    #[test]
    fn solve_integers() {
        let a = zmat(&[vec![2]]);
        let b = zmat(&[vec![4]]);
        let x = solve(&a, &b).unwrap();
        assert_eq!(x.get(0, 0), &BigRational::from(BigInt::from(2)));

        let b = zmat(&[vec![3]]);
        assert!(solve(&a, &b).is_none());

        // unique rational solution is non-integral
        let a = zmat(&[vec![1, 2], vec![3, 4]]);
        let b = zmat(&[vec![5], vec![6]]);
        assert!(solve(&a, &b).is_none());
        let aq = a.with_coeff(Coefficients::Rationals);
        let bq = b.with_coeff(Coefficients::Rationals);
        let x = solve(&aq, &bq).unwrap();
        assert_eq!(aq.mul(&x), bq);
    }

    #[test]
    fn kernel_saturated() {
        let a = zmat(&[vec![2, 4]]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols, 1);
        assert!(a.mul(&k).is_zero());
        let g = k.get(0, 0).numer().gcd(k.get(1, 0).numer());
        assert!(g.is_one(), "kernel generator not primitive");
    }

    #[test]
    fn kernel_over_f2() {
        let a = Matrix::from_i64_rows(Coefficients::PrimeField(2), &[vec![1, 1]]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols, 1);
        assert!(a.mul(&k).is_zero());
        assert!(!k.is_zero());

        let i = Matrix::identity(Coefficients::PrimeField(2), 2);
        assert_eq!(kernel_basis(&i).cols, 0);
    }

    #[test]
    fn cokernel_structures() {
        let a = zmat(&[vec![2]]);
        let g = cokernel_structure(&a);
        assert_eq!(g, GroupStructure { rank: 0, torsion: vec![BigInt::from(2)] });

        let empty = Matrix::zero(Coefficients::Integers, 1, 0);
        assert_eq!(cokernel_structure(&empty), GroupStructure::free(1));

        let a = zmat(&[vec![2, 0], vec![0, 4], vec![0, 0]]);
        let g = cokernel_structure(&a);
        assert_eq!(g.rank, 1);
        assert_eq!(g.torsion, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn direct_sum_of_structures() {
        let a = GroupStructure { rank: 1, torsion: vec![BigInt::from(2)] };
        let b = GroupStructure { rank: 0, torsion: vec![BigInt::from(4)] };
        let s = a.direct_sum(&b);
        assert_eq!(s.rank, 1);
        assert_eq!(s.torsion, vec![BigInt::from(2), BigInt::from(4)]);
        s.check().unwrap();

        let c = GroupStructure { rank: 0, torsion: vec![BigInt::from(6)] };
        let d = GroupStructure { rank: 0, torsion: vec![BigInt::from(4)] };
        let s = c.direct_sum(&d);
        assert_eq!(s.torsion, vec![BigInt::from(2), BigInt::from(12)]);
    }

    #[test]
    fn fp_arithmetic_reduces() {
        let c = Coefficients::PrimeField(5);
        let x = c.reduce(BigRational::new(BigInt::from(7), BigInt::from(3)));
        // 7/3 = 2 * 3^{-1} = 2 * 2 = 4 mod 5
        assert_eq!(x, BigRational::from(BigInt::from(4)));
    }
}
