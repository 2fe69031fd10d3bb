//! Dense complex matrices with the defect measures, dephasing, equivalence
//! transforms and Haagerup fingerprints used throughout the crate.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};

/// Tolerance used by `is_hadamard` when the caller has no better value.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Decimal places kept in a [`Fingerprint`] unless the caller asks otherwise.
pub const DEFAULT_PRECISION: u32 = 8;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Square complex matrix, stored row-major.
///
/// The name reflects its main use (candidate Hadamard matrices, whose entries
/// are unimodular) but the container accepts arbitrary complex values so that
/// defects of non-Hadamard inputs can be measured.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl UnitMatrix {
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Malformed("order must be positive"));
        }
        if entries.len() != n * n {
            return Err(Error::Malformed("entry count is not n*n"));
        }
        Ok(UnitMatrix { n, entries })
    }

    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::Malformed("rows must have length n"));
            }
            entries.extend_from_slice(row);
        }
        Self::new(n, entries)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(n > 0, "order must be positive");
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        UnitMatrix { n, entries }
    }

    /// Matrix whose entries are all 1.
    pub fn ones(n: usize) -> Self {
        Self::from_fn(n, |_, _| ONE)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { ONE } else { ZERO })
    }

    /// Permutation matrix that swaps rows (or columns) `i` and `j` when
    /// multiplied from the left (or right). Indices are 0-based.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(i, j);
        Self::permutation(&perm)
    }

    /// Permutation matrix `P` with `(P M)[i] = M[perm[i]]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        Self::from_fn(n, |i, j| if perm[i] == j { ONE } else { ZERO })
    }

    pub fn diagonal(d: &[Complex64]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { d[i] } else { ZERO })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.entries.chunks(self.n)
    }

    pub fn map(&self, mut f: impl FnMut(Complex64) -> Complex64) -> Self {
        UnitMatrix { n: self.n, entries: self.entries.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_order(rhs.n)?;
        let n = self.n;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * rhs[(k, j)];
                }
            }
        }
        Ok(UnitMatrix { n, entries: out })
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "order mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.transpose()) <= tol
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.n {
            self.entries.swap(i * self.n + c, j * self.n + c);
        }
    }

    pub fn swap_cols(&mut self, i: usize, j: usize) {
        for r in 0..self.n {
            self.entries.swap(r * self.n + i, r * self.n + j);
        }
    }

    /// `max |  |m_ij| - 1 |`.
    pub fn modulus_defect(&self) -> f64 {
        self.entries.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation of `H^dagger H / n` (and of `H H^dagger / n`)
    /// from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.n;
        let scale = 1.0 / n as f64;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let mut cols = ZERO;
                let mut rows = ZERO;
                for k in 0..n {
                    cols += self[(k, i)].conj() * self[(k, j)];
                    rows += self[(i, k)] * self[(j, k)].conj();
                }
                let target = if i == j { ONE } else { ZERO };
                worst = worst
                    .max((cols * scale - target).norm())
                    .max((rows * scale - target).norm());
            }
        }
        worst
    }

    pub fn is_hadamard(&self, tol: f64) -> bool {
        self.modulus_defect() <= tol && self.unitarity_defect() <= tol
    }

    pub(crate) fn require_hadamard(&self, tol: f64) -> Result<()> {
        let modulus_defect = self.modulus_defect();
        let unitarity_defect = self.unitarity_defect();
        if modulus_defect <= tol && unitarity_defect <= tol {
            Ok(())
        } else {
            Err(Error::NotHadamard { modulus_defect, unitarity_defect })
        }
    }

    pub(crate) fn check_order(&self, n: usize) -> Result<()> {
        if self.n == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.n, found: n })
        }
    }

    /// Brings the matrix to dephased form (ones in the first row and column).
    ///
    /// Returns the dephased matrix and the witness `w` with
    /// `apply_equivalence(self, w) == dephased`.
    pub fn dephase(&self) -> Result<(UnitMatrix, EquivalenceWitness)> {
        let n = self.n;
        for i in 0..n {
            if self[(i, 0)].norm() < 0.5 {
                return Err(Error::NearZeroEntry { row: i, col: 0 });
            }
            if self[(0, i)].norm() < 0.5 {
                return Err(Error::NearZeroEntry { row: 0, col: i });
            }
        }
        let row_phases: Vec<Complex64> =
            (0..n).map(|i| self[(i, 0)].conj() / self[(i, 0)].norm()).collect();
        let col_phases: Vec<Complex64> = (0..n)
            .map(|j| {
                let v = row_phases[0] * self[(0, j)];
                v.conj() / v.norm()
            })
            .collect();
        let witness = EquivalenceWitness {
            row_perm: (0..n).collect(),
            row_phases,
            col_perm: (0..n).collect(),
            col_phases,
        };
        let mut out = self.apply_equivalence(&witness)?;
        for k in 0..n {
            out[(0, k)] = ONE;
            out[(k, 0)] = ONE;
        }
        Ok((out, witness))
    }

    /// `D2 P2 M P1 D1` for the witness `(P2, D2, P1, D1)`.
    pub fn apply_equivalence(&self, w: &EquivalenceWitness) -> Result<UnitMatrix> {
        w.check(self.n)?;
        Ok(Self::from_fn(self.n, |i, j| {
            w.row_phases[i] * self[(w.row_perm[i], w.col_perm[j])] * w.col_phases[j]
        }))
    }

    /// Haagerup fingerprint at `precision` decimals.
    ///
    /// Requires `self` to be Hadamard within `1e-8`.
    pub fn fingerprint(&self, precision: u32) -> Result<Fingerprint> {
        self.require_hadamard(1e-8)?;
        let raw = self.haagerup_phases();
        let q = 10f64.powi(precision as i32);
        let mut values: Vec<f64> = raw.iter().map(|v| (v * q).round() / q).collect();
        values.sort_by(f64::total_cmp);
        Ok(Fingerprint { values, precision })
    }

    /// Unrounded, sorted folded phases `|arg(h_ij h_kl conj(h_il) conj(h_kj))|`
    /// over `i < k`, `j < l`.
    ///
    /// Folding into `[0, pi]` makes the multiset invariant under row and column
    /// permutations: reversing one of the two index pairs conjugates the product.
    pub fn haagerup_phases(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = Vec::with_capacity((n * (n - 1) / 2).pow(2));
        for i in 0..n {
            for k in i + 1..n {
                for j in 0..n {
                    for l in j + 1..n {
                        let q = self[(i, j)] * self[(k, l)] * (self[(i, l)] * self[(k, j)]).conj();
                        out.push(q.arg().abs());
                    }
                }
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting, `None` if singular.
    pub fn inverse(&self) -> Option<UnitMatrix> {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut inv = Self::identity(n).entries;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[r * n + col].norm().total_cmp(&a[s * n + col].norm()))?;
            let p = a[pivot * n + col];
            if p.norm() < 1e-300 {
                return None;
            }
            if pivot != col {
                for c in 0..n {
                    a.swap(pivot * n + c, col * n + c);
                    inv.swap(pivot * n + c, col * n + c);
                }
            }
            let pinv = p.inv();
            for c in 0..n {
                a[col * n + c] *= pinv;
                inv[col * n + c] *= pinv;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col];
                if factor == ZERO {
                    continue;
                }
                for c in 0..n {
                    let (ac, ic) = (a[col * n + c], inv[col * n + c]);
                    a[r * n + c] -= factor * ac;
                    inv[r * n + c] -= factor * ic;
                }
            }
        }
        Some(UnitMatrix { n, entries: inv })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Unitary factor `U` of the polar decomposition `M = U P`, computed with
    /// the scaled Newton iteration `X <- (g X + X^{-H} / g) / 2`.
    /// `None` if an iterate is singular.
    pub fn polar_unitary(&self) -> Option<UnitMatrix> {
        let mut x = self.clone();
        for _ in 0..100 {
            let inv_h = x.inverse()?.dagger();
            let gamma = (inv_h.frobenius_norm() / x.frobenius_norm()).sqrt();
            let next = UnitMatrix {
                n: x.n,
                entries: x
                    .entries
                    .iter()
                    .zip(&inv_h.entries)
                    .map(|(a, b)| (a * gamma + b / gamma) * 0.5)
                    .collect(),
            };
            let step = next.max_abs_diff(&x);
            x = next;
            if step <= 1e-15 {
                break;
            }
        }
        Some(x)
    }
}

impl Index<(usize, usize)> for UnitMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for UnitMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.n + j]
    }
}

/// Data `(P2, D2, P1, D1)` of the relation `H2 = D2 P2 H1 P1 D1`.
///
/// Permutations act as `(P2 H)[i] = H[row_perm[i]]` and
/// `(H P1)[.., j] = H[.., col_perm[j]]`; indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceWitness {
    pub row_perm: Vec<usize>,
    pub row_phases: Vec<Complex64>,
    pub col_perm: Vec<usize>,
    pub col_phases: Vec<Complex64>,
}

impl EquivalenceWitness {
    pub fn identity(n: usize) -> Self {
        Self::permutations((0..n).collect(), (0..n).collect())
    }

    /// Pure permutation witness with trivial phases.
    pub fn permutations(row_perm: Vec<usize>, col_perm: Vec<usize>) -> Self {
        EquivalenceWitness {
            row_phases: vec![ONE; row_perm.len()],
            col_phases: vec![ONE; col_perm.len()],
            row_perm,
            col_perm,
        }
    }

    /// Witness swapping the given (0-based) row pairs and column pairs.
    pub fn swaps(n: usize, rows: &[(usize, usize)], cols: &[(usize, usize)]) -> Self {
        let mut rp: Vec<usize> = (0..n).collect();
        let mut cp: Vec<usize> = (0..n).collect();
        for &(a, b) in rows {
            rp.swap(a, b);
        }
        for &(a, b) in cols {
            cp.swap(a, b);
        }
        Self::permutations(rp, cp)
    }

    /// Uniformly random permutations and phases.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        fn shuffled<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
            let mut p: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                p.swap(i, rng.gen_range(0..=i));
            }
            p
        }
        let phases = |rng: &mut R| -> Vec<Complex64> {
            (0..n)
                .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..core::f64::consts::TAU)))
                .collect()
        };
        let row_perm = shuffled(n, rng);
        let row_phases = phases(rng);
        let col_perm = shuffled(n, rng);
        let col_phases = phases(rng);
        EquivalenceWitness { row_perm, row_phases, col_perm, col_phases }
    }

    pub fn order(&self) -> usize {
        self.row_perm.len()
    }

    /// Witness equal to applying `self` first and `next` second.
    pub fn then(&self, next: &EquivalenceWitness) -> EquivalenceWitness {
        let n = self.order();
        EquivalenceWitness {
            row_perm: (0..n).map(|i| self.row_perm[next.row_perm[i]]).collect(),
            row_phases: (0..n)
                .map(|i| next.row_phases[i] * self.row_phases[next.row_perm[i]])
                .collect(),
            col_perm: (0..n).map(|j| self.col_perm[next.col_perm[j]]).collect(),
            col_phases: (0..n)
                .map(|j| self.col_phases[next.col_perm[j]] * next.col_phases[j])
                .collect(),
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        for len in [self.row_perm.len(), self.row_phases.len(), self.col_perm.len(), self.col_phases.len()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, found: len });
            }
        }
        if !is_permutation(&self.row_perm) || !is_permutation(&self.col_perm) {
            return Err(Error::Malformed("witness permutation is not a bijection"));
        }
        Ok(())
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&v| v < p.len() && !core::mem::replace(&mut seen[v], true))
}

/// Sorted multiset of rounded Haagerup phases, folded into `[0, pi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Fingerprint {
    pub values: Vec<f64>,
    pub precision: u32,
}

impl Fingerprint {
    /// Sum of absolute differences of the sorted multisets; infinite when the
    /// multisets have different sizes.
    pub fn distance(&self, other: &Fingerprint) -> f64 {
        sorted_l1(&self.values, &other.values)
    }

    /// Multiset equality up to one rounding quantum per element.
    ///
    /// Sorting is 1-Lipschitz in the max norm, so values of equivalent matrices
    /// that straddle a rounding boundary still line up within one quantum.
    pub fn matches(&self, other: &Fingerprint) -> bool {
        if self.values.len() != other.values.len() {
            return false;
        }
        let quantum = 10f64.powi(-(self.precision.min(other.precision) as i32));
        self.values.iter().zip(&other.values).all(|(a, b)| (a - b).abs() <= 1.5 * quantum)
    }
}

pub(crate) fn sorted_l1(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// 2x2 complex block, used for the Z, a and b blocks of the order-6 family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block2(pub [[Complex64; 2]; 2]);

impl Block2 {
    pub fn identity() -> Self {
        Block2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[i][j]
    }

    pub fn dagger(&self) -> Self {
        let m = self.0;
        Block2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let (a, b) = (self.0, rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Block2(out)
    }

    pub fn zip_with(&self, rhs: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let (a, b) = (self.0, rhs.0);
        Block2([[f(a[0][0], b[0][0]), f(a[0][1], b[0][1])], [f(a[1][0], b[1][0]), f(a[1][1], b[1][1])]])
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.zip_with(self, |a, _| a * s)
    }

    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        let d = self.sub(rhs).0;
        d.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }
}
