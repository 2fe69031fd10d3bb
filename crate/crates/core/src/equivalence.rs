//! Exact decision procedure for `H2 = D2 P2 H1 P1 D1` at order 6.
//!
//! For a fixed column permutation and a fixed choice of the first row, the
//! dephased form of `P2 H1 P1` is determined row by row, independent of how the
//! remaining rows are ordered. The search therefore runs over column
//! permutations (outer, lexicographic), then over row permutations
//! (lexicographic) built by extending a prefix only while each placed row
//! matches the corresponding row of dephased `H2`. Pairs `(first row, first
//! column)` whose row phase multisets cannot match dephased `H2` are skipped
//! wholesale. None of the pruning changes the decision or which witness is
//! found first.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use itertools::Itertools;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{EquivalenceWitness, UnitMatrix, DEFAULT_PRECISION, DEFAULT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Equivalent,
    Inequivalent,
    Inconclusive,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Equivalent => "equivalent",
            Decision::Inequivalent => "inequivalent",
            Decision::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceResult {
    pub decision: Decision,
    /// Present iff `decision == Equivalent`; maps `H1` onto `H2`.
    pub witness: Option<EquivalenceWitness>,
    /// Set when a fingerprint mismatch settled the question without a search.
    pub screened_by: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceOptions {
    pub tol: f64,
    /// Fingerprint rounding used by the screen.
    pub precision: u32,
    /// Run the fingerprint screen before searching. Disable to force the
    /// exhaustive search.
    pub screen: bool,
}

impl Default for EquivalenceOptions {
    fn default() -> Self {
        EquivalenceOptions { tol: DEFAULT_TOL, precision: DEFAULT_PRECISION, screen: true }
    }
}

/// Decides equivalence with the default screen and precision.
pub fn are_equivalent(h1: &UnitMatrix, h2: &UnitMatrix, tol: f64) -> Result<EquivalenceResult> {
    are_equivalent_with(h1, h2, &EquivalenceOptions { tol, ..Default::default() })
}

pub fn are_equivalent_with(
    h1: &UnitMatrix,
    h2: &UnitMatrix,
    opts: &EquivalenceOptions,
) -> Result<EquivalenceResult> {
    h1.check_order(h2.order())?;
    let n = h1.order();
    if n != 6 && n != 12 {
        return Err(Error::OrderUnsupported(n));
    }
    h1.require_hadamard(opts.tol)?;
    h2.require_hadamard(opts.tol)?;

    if opts.screen || n != 6 {
        if !fingerprint_match(h1, h2, opts.precision)? {
            return Ok(EquivalenceResult {
                decision: Decision::Inequivalent,
                witness: None,
                screened_by: Some(format!("fingerprint mismatch at precision {}", opts.precision)),
            });
        }
        if n != 6 {
            return Ok(EquivalenceResult {
                decision: Decision::Inconclusive,
                witness: None,
                screened_by: None,
            });
        }
    }

    let witness = find_witness(h1, h2, opts.tol)?;
    Ok(EquivalenceResult {
        decision: if witness.is_some() { Decision::Equivalent } else { Decision::Inequivalent },
        witness,
        screened_by: None,
    })
}

/// Necessary condition for equivalence: Haagerup fingerprints agree at `precision`.
pub fn fingerprint_match(h1: &UnitMatrix, h2: &UnitMatrix, precision: u32) -> Result<bool> {
    Ok(h1.fingerprint(precision)?.matches(&h2.fingerprint(precision)?))
}

/// Exhaustive witness search. Returns the first witness in (column permutation,
/// row permutation) lexicographic order, or `None` when no pair of
/// permutations admits matching diagonals within `10 * tol`.
pub fn find_witness(h1: &UnitMatrix, h2: &UnitMatrix, tol: f64) -> Result<Option<EquivalenceWitness>> {
    h1.check_order(h2.order())?;
    let n = h1.order();
    if n != 6 {
        return Err(Error::OrderUnsupported(n));
    }
    let match_tol = 10.0 * tol;
    let (target, target_w) = h2.dephase()?;
    let target_rows: Vec<&[Complex64]> = target.rows().collect();

    // viable[r0][c0]: every target row i >= 1 has a source row s != r0 whose
    // dephased entries agree with it as a multiset.
    let mut viable = vec![[false; 6]; n];
    for (r0, slot) in viable.iter_mut().enumerate() {
        for (c0, ok) in slot.iter_mut().enumerate() {
            let sources: Vec<Vec<Complex64>> = (0..n)
                .filter(|&s| s != r0)
                .map(|s| (0..n).map(|j| dephased_entry(h1, r0, c0, s, j)).collect())
                .collect();
            *ok = target_rows[1..]
                .iter()
                .all(|t| sources.iter().any(|s| same_multiset(s, t, match_tol)));
        }
    }

    let mut row_perm = vec![0usize; n];
    let mut used = vec![false; n];
    for col_perm in (0..n).permutations(n) {
        let c0 = col_perm[0];
        for r0 in 0..n {
            if !viable[r0][c0] {
                continue;
            }
            // candidate rows under this column order, dephased against (r0, c0)
            let rows: Vec<Vec<Complex64>> = (0..n)
                .map(|s| col_perm.iter().map(|&j| dephased_entry(h1, r0, c0, s, j)).collect())
                .collect();
            row_perm[0] = r0;
            used.iter_mut().for_each(|u| *u = false);
            used[r0] = true;
            if assign_rows(1, &rows, &target_rows, match_tol, &mut row_perm, &mut used) {
                let permuted = EquivalenceWitness::permutations(row_perm.clone(), col_perm.clone());
                let m = h1.apply_equivalence(&permuted)?;
                let (_, deph) = m.dephase()?;
                // h2 = target_w^{-1} (deph (permuted h1))
                let inv_target = EquivalenceWitness {
                    row_perm: (0..n).collect(),
                    row_phases: target_w.row_phases.iter().map(|z| z.conj()).collect(),
                    col_perm: (0..n).collect(),
                    col_phases: target_w.col_phases.iter().map(|z| z.conj()).collect(),
                };
                let w = permuted.then(&deph).then(&inv_target);
                if h1.apply_equivalence(&w)?.max_abs_diff(h2) <= match_tol {
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

/// Entry `(s, j)` of `h` dephased with respect to row `r0` and column `c0`.
#[inline]
fn dephased_entry(h: &UnitMatrix, r0: usize, c0: usize, s: usize, j: usize) -> Complex64 {
    let q = h[(s, j)] * h[(r0, c0)] * (h[(s, c0)] * h[(r0, j)]).conj();
    q / q.norm()
}

fn assign_rows(
    i: usize,
    rows: &[Vec<Complex64>],
    targets: &[&[Complex64]],
    tol: f64,
    perm: &mut [usize],
    used: &mut [bool],
) -> bool {
    if i == rows.len() {
        return true;
    }
    for s in 0..rows.len() {
        if used[s] || !rows_close(&rows[s], targets[i], tol) {
            continue;
        }
        used[s] = true;
        perm[i] = s;
        if assign_rows(i + 1, rows, targets, tol, perm, used) {
            return true;
        }
        used[s] = false;
    }
    false
}

fn rows_close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
}

fn same_multiset(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    let mut taken = [false; 12];
    a.iter().all(|x| {
        match (0..b.len()).find(|&k| !taken[k] && (x - b[k]).norm() <= tol) {
            Some(k) => {
                taken[k] = true;
                true
            }
            None => false,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{dita_d6, family_h, fourier_f6, ParamPoint};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fourier_is_equivalent_to_its_transpose() {
        let f = fourier_f6(0.0, 0.0);
        let r = are_equivalent(&f, &f.transpose(), DEFAULT_TOL).unwrap();
        assert_eq!(r.decision, Decision::Equivalent);
        let w = r.witness.unwrap();
        assert_eq!(w.row_perm, (0..6).collect::<Vec<_>>());
        assert_eq!(w.col_perm, w.row_perm);
        let one = Complex64::new(1.0, 0.0);
        assert!(w.row_phases.iter().chain(&w.col_phases).all(|z| (z - one).norm() < 1e-14));
    }

    #[test]
    fn random_witness_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = family_h(ParamPoint::new(0.3, 0.2)).unwrap();
        let h2 = h.apply_equivalence(&EquivalenceWitness::random(6, &mut rng)).unwrap();
        let r = are_equivalent(&h, &h2, DEFAULT_TOL).unwrap();
        assert_eq!(r.decision, Decision::Equivalent);
        let w = r.witness.unwrap();
        assert!(h.apply_equivalence(&w).unwrap().max_abs_diff(&h2) <= DEFAULT_TOL);
    }

    #[test]
    fn fourier_and_dita_are_inequivalent() {
        let f = fourier_f6(0.0, 0.0);
        let d = dita_d6(0.0).unwrap();
        let screened = are_equivalent(&f, &d, DEFAULT_TOL).unwrap();
        assert_eq!(screened.decision, Decision::Inequivalent);
        assert!(screened.screened_by.is_some());
        assert!(!fingerprint_match(&f, &d, 8).unwrap());
        assert!(find_witness(&f, &d, DEFAULT_TOL).unwrap().is_none());
    }

    #[test]
    fn fingerprint_match_reflexive() {
        let h = family_h(ParamPoint::new(0.5, 0.3)).unwrap();
        assert!(fingerprint_match(&h, &h, 8).unwrap());
    }

    #[test]
    fn errors() {
        let f = fourier_f6(0.0, 0.0);
        assert!(matches!(
            are_equivalent(&UnitMatrix::ones(6), &f, DEFAULT_TOL),
            Err(Error::NotHadamard { .. })
        ));
        let i4 = UnitMatrix::ones(4);
        assert_eq!(are_equivalent(&i4, &i4, DEFAULT_TOL), Err(Error::OrderUnsupported(4)));
        assert!(matches!(
            are_equivalent(&i4, &f, DEFAULT_TOL),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn multiset_helper() {
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        assert!(same_multiset(&[one, i, i], &[i, one, i], 1e-12));
        assert!(!same_multiset(&[one, one, i], &[i, one, i], 1e-12));
    }
}
