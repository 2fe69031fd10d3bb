//! Alternating-projection search for Hadamard matrices and fingerprint-based
//! classification against the known families.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::equivalence::{are_equivalent_with, Decision, EquivalenceOptions};
use crate::error::Error;
use crate::families::{dita_d6, family_h, fourier_f6, fourier_f6_transposed, reduce_params, ParamPoint};
use crate::matrix::{sorted_l1, UnitMatrix};

/// Where the iteration starts.
#[derive(Debug, Clone, PartialEq)]
pub enum SeedSpec {
    /// Uniformly random phases for an order-6 matrix, drawn from `rng_seed`.
    Random,
    Explicit(UnitMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub max_iter: usize,
    pub tol: f64,
    pub seed: SeedSpec,
    pub rng_seed: u64,
}

impl SearchConfig {
    pub fn random(rng_seed: u64, tol: f64, max_iter: usize) -> Self {
        SearchConfig { max_iter, tol, seed: SeedSpec::Random, rng_seed }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub matrix: UnitMatrix,
    /// Number of projection steps taken.
    pub iterations: usize,
    /// `max(modulus_defect, unitarity_defect)` of `matrix`.
    pub defect: f64,
    /// Defect of the phase-normalized seed.
    pub initial_defect: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchError {
    /// No iterate reached the tolerance; carries the best one seen.
    MaxIterExceeded(Box<SearchOutcome>),
    /// The unitary projection hit a singular iterate.
    Degenerate { iteration: usize },
    InvalidConfig(&'static str),
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::MaxIterExceeded(best) => write!(
                f,
                "no Hadamard matrix within tolerance after {} iterations (best defect {:e})",
                best.iterations, best.defect
            ),
            SearchError::Degenerate { iteration } => {
                write!(f, "singular iterate at step {iteration}")
            }
            SearchError::InvalidConfig(why) => write!(f, "invalid search configuration: {why}"),
        }
    }
}

impl core::error::Error for SearchError {}

impl SearchError {
    pub fn name(&self) -> &'static str {
        match self {
            SearchError::MaxIterExceeded(_) => "MaxIterExceeded",
            SearchError::Degenerate { .. } => "Degenerate",
            SearchError::InvalidConfig(_) => "InvalidConfig",
        }
    }
}

/// Random order-`n` matrix with uniformly distributed phases.
pub fn random_phase_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> UnitMatrix {
    UnitMatrix::from_fn(n, |_, _| Complex64::from_polar(1.0, rng.gen_range(0.0..TAU)))
}

/// Multiplies every entry by `exp(i t)` with `t` uniform in `[-amplitude, amplitude]`.
pub fn perturb_phases<R: Rng + ?Sized>(m: &UnitMatrix, amplitude: f64, rng: &mut R) -> UnitMatrix {
    m.map(|z| z * Complex64::from_polar(1.0, rng.gen_range(-amplitude..=amplitude)))
}

fn normalize_phases(m: &UnitMatrix) -> UnitMatrix {
    m.map(|z| {
        let r = z.norm();
        if r > 0.0 {
            z / r
        } else {
            Complex64::new(1.0, 0.0)
        }
    })
}

fn hadamard_defect(m: &UnitMatrix) -> f64 {
    m.modulus_defect().max(m.unitarity_defect())
}

/// Alternates between the unimodular set (entrywise phase normalization) and
/// the scaled unitary group (`sqrt(n)` times the polar factor) until the
/// phase-normalized iterate is Hadamard within `cfg.tol`.
pub fn project_search(cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    if cfg.max_iter == 0 {
        return Err(SearchError::InvalidConfig("max_iter must be at least 1"));
    }
    if cfg.tol.is_nan() || cfg.tol <= 0.0 {
        return Err(SearchError::InvalidConfig("tol must be positive"));
    }
    let start = match &cfg.seed {
        SeedSpec::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
            random_phase_matrix(6, &mut rng)
        }
        SeedSpec::Explicit(m) => m.clone(),
    };
    let scale = Complex64::new((start.order() as f64).sqrt(), 0.0);

    let mut current = normalize_phases(&start);
    let initial_defect = hadamard_defect(&current);
    let mut best = SearchOutcome {
        matrix: current.clone(),
        iterations: 0,
        defect: initial_defect,
        initial_defect,
    };
    for iteration in 0..=cfg.max_iter {
        let defect = if iteration == 0 { initial_defect } else { hadamard_defect(&current) };
        if defect < best.defect {
            best = SearchOutcome { matrix: current.clone(), iterations: iteration, defect, initial_defect };
        }
        if defect <= cfg.tol {
            return Ok(SearchOutcome { matrix: current, iterations: iteration, defect, initial_defect });
        }
        if iteration == cfg.max_iter {
            break;
        }
        let unitary = current.polar_unitary().ok_or(SearchError::Degenerate { iteration })?;
        current = normalize_phases(&unitary.scale(scale));
    }
    best.iterations = cfg.max_iter;
    Err(SearchError::MaxIterExceeded(Box::new(best)))
}

/// Family a classified matrix was matched to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FamilyLabel {
    /// Dita family `D6(c)`.
    D6,
    /// Fourier family `F6(a, b)`.
    F6Slice,
    /// Transposed Fourier family `F6(a, b)^T`.
    F6TSlice,
    /// The nonaffine family `H(x1, x2)`.
    HFamily,
    Unknown,
}

impl FamilyLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyLabel::D6 => "D6",
            FamilyLabel::F6Slice => "F6-slice",
            FamilyLabel::F6TSlice => "F6T-slice",
            FamilyLabel::HFamily => "H-family",
            FamilyLabel::Unknown => "unknown",
        }
    }

    /// Builds the family member at `params`.
    pub fn construct(self, params: &[f64]) -> Option<UnitMatrix> {
        match (self, params) {
            (FamilyLabel::D6, &[c]) => dita_d6(c).ok(),
            (FamilyLabel::F6Slice, &[a, b]) => Some(fourier_f6(a, b)),
            (FamilyLabel::F6TSlice, &[a, b]) => Some(fourier_f6_transposed(a, b)),
            (FamilyLabel::HFamily, &[x1, x2]) => family_h(ParamPoint::new(x1, x2)).ok(),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub label: FamilyLabel,
    /// Fitted parameters: `[c]` for D6, `[a, b]` for the Fourier families,
    /// `[x1, x2]` for H. Empty for `Unknown`.
    pub params: Vec<f64>,
    /// Sum of absolute differences between the sorted Haagerup phases of the
    /// input and of the fitted construction.
    pub distance: f64,
    /// Whether the exact equivalence engine confirmed the fit.
    pub verified: bool,
}

/// Fingerprint precision used while fitting.
pub const CLASSIFY_PRECISION: u32 = 6;

/// Threshold on the fingerprint distance, per multiset element.
pub const CLASSIFY_THRESHOLD_PER_ELEMENT: f64 = 1e-4;

/// Number of grid minima refined per family.
const REFINE_STARTS: usize = 8;

/// Tolerance handed to the equivalence engine when confirming a fit.
const CONFIRM_TOL: f64 = 1e-6;

/// Phase agreement required of a seeded candidate's dephased entries.
const SEED_TOL: f64 = 1e-6;

/// Fits handed to the equivalence engine before settling for the best one.
const MAX_CONFIRM: usize = 32;

struct Fit {
    label: FamilyLabel,
    params: Vec<f64>,
    distance: f64,
}

/// Matches `h` against the D6, F6, F6^T and H families.
///
/// Candidate parameters come from two sources: values read directly off the
/// input's Haagerup phases (kept when every dephased entry of the candidate
/// occurs among those phases), and a grid scan (`grid_n` points per axis)
/// whose local minima are refined by a shrinking compass search on the
/// fingerprint distance. Fits within the threshold are then confirmed with the exact equivalence
/// engine over the images of the fitted point under parameter sign flips and
/// swaps (the Haagerup phases cannot tell these apart). Ties go to D6, then
/// F6, F6^T, H.
pub fn classify(h: &UnitMatrix, grid_n: usize) -> Result<Classification, Error> {
    h.require_hadamard(1e-8)?;
    if h.order() != 6 {
        return Err(Error::OrderUnsupported(h.order()));
    }
    let grid_n = grid_n.max(2);
    let target = h.haagerup_phases();
    let threshold = CLASSIFY_THRESHOLD_PER_ELEMENT * target.len() as f64;

    let half_open = |k: usize| -FRAC_PI_2 + PI * (k + 1) as f64 / grid_n as f64;
    let mut fits = Vec::new();
    for label in [FamilyLabel::D6, FamilyLabel::F6Slice, FamilyLabel::F6TSlice, FamilyLabel::HFamily] {
        let (lo, hi, dims): (f64, f64, usize) = match label {
            FamilyLabel::D6 => (-FRAC_PI_4, FRAC_PI_4, 1),
            _ => (-FRAC_PI_2, FRAC_PI_2, 2),
        };
        let distance = |p: &[f64]| -> f64 {
            match label.construct(p) {
                Some(m) => sorted_l1(&target, &m.haagerup_phases()),
                None => f64::INFINITY,
            }
        };

        // Seeds read off the phases: a dephased member shows its own entries
        // among the Haagerup phases.
        let (seed_lo, seed_hi) = if dims == 1 { (lo, hi) } else { (0.0, FRAC_PI_2) };
        let coords = phase_seeds(&target, seed_lo, seed_hi);
        let seeded: Vec<Vec<f64>> = if dims == 1 {
            coords.iter().map(|&c| alloc::vec![c]).collect()
        } else {
            coords.iter().flat_map(|&a| coords.iter().map(move |&b| alloc::vec![a, b])).collect()
        };
        for p in seeded {
            let Some(m) = label.construct(&p) else { continue };
            if !entries_among(&m, &target, SEED_TOL) {
                continue;
            }
            let d = sorted_l1(&target, &m.haagerup_phases());
            if d <= threshold {
                fits.push(Fit { label, params: p, distance: d });
            }
        }

        let axis: Vec<f64> = if dims == 1 {
            (0..=grid_n).map(|k| lo + (hi - lo) * k as f64 / grid_n as f64).collect()
        } else {
            (0..grid_n).map(half_open).collect()
        };
        let side = axis.len();
        let cells: Vec<Vec<f64>> = if dims == 1 {
            axis.iter().map(|&c| alloc::vec![c]).collect()
        } else {
            axis.iter().flat_map(|&a| axis.iter().map(move |&b| alloc::vec![a, b])).collect()
        };
        let values: Vec<f64> = cells.iter().map(|c| distance(c)).collect();
        let starts = grid_local_minima(&values, side, dims);
        let step = (hi - lo) / grid_n as f64;
        let best = starts
            .into_iter()
            .take(REFINE_STARTS)
            .map(|k| compass_refine(&distance, cells[k].clone(), step, lo, hi))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((params, d)) = best {
            fits.push(Fit { label, params, distance: d });
        }
    }

    let mut candidates: Vec<&Fit> = fits.iter().filter(|f| f.distance <= threshold).collect();
    if candidates.is_empty() {
        let best = fits.iter().map(|f| f.distance).fold(f64::INFINITY, f64::min);
        return Ok(Classification { label: FamilyLabel::Unknown, params: Vec::new(), distance: best, verified: false });
    }
    // stable: preserves the D6, F6, F6T, H priority among equal distances
    candidates.sort_by(|a, b| a.distance.total_cmp(&b.distance));

    let opts = EquivalenceOptions { tol: CONFIRM_TOL, screen: false, ..Default::default() };
    for fit in candidates.iter().take(MAX_CONFIRM) {
        for params in parameter_images(fit.label, &fit.params) {
            let Some(m) = fit.label.construct(&params) else { continue };
            if let Ok(r) = are_equivalent_with(&m, h, &opts) {
                if r.decision == Decision::Equivalent {
                    return Ok(Classification {
                        label: fit.label,
                        params,
                        distance: fit.distance,
                        verified: true,
                    });
                }
            }
        }
    }
    let fit = candidates[0];
    Ok(Classification { label: fit.label, params: fit.params.clone(), distance: fit.distance, verified: false })
}

/// Images of a fitted point under the fingerprint-preserving sign flips and
/// swaps, starting with the point itself. H images are reduced to the
/// canonical domain.
fn parameter_images(label: FamilyLabel, params: &[f64]) -> Vec<Vec<f64>> {
    match *params {
        [c] => alloc::vec![alloc::vec![c], alloc::vec![-c]],
        [a, b] => {
            let mut out: Vec<Vec<f64>> = Vec::new();
            for (p, q) in [(a, b), (b, a)] {
                for (sp, sq) in [(1.0, 1.0), (-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0)] {
                    let (mut x, mut y) = (sp * p, sq * q);
                    if label == FamilyLabel::HFamily {
                        let (r, _) = reduce_params(x, y);
                        (x, y) = (r.x1, r.x2);
                    }
                    out.push(alloc::vec![x, y]);
                }
            }
            out
        }
        _ => Vec::new(),
    }
}

/// Parameter values suggested by the phases `v` of `target`: `v`, `pi - v`,
/// `v - pi/2` and `pi/2 - v`, kept when inside `[lo, hi]`, sorted and deduplicated.
fn phase_seeds(target: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let mut out: Vec<f64> = target
        .iter()
        .flat_map(|&v| [v, PI - v, v - FRAC_PI_2, FRAC_PI_2 - v])
        .filter(|&c| c >= lo - 1e-12 && c <= hi + 1e-12)
        .map(|c| c.clamp(lo, hi))
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    out
}

/// Whether every folded phase of the dephased core of `m` occurs in the
/// sorted `target` within `tol`.
fn entries_among(m: &UnitMatrix, target: &[f64], tol: f64) -> bool {
    let Ok((d, _)) = m.dephase() else { return false };
    let n = d.order();
    (1..n).all(|i| {
        (1..n).all(|j| {
            let v = d[(i, j)].arg().abs();
            let k = target.partition_point(|&t| t < v - tol);
            k < target.len() && target[k] <= v + tol
        })
    })
}

/// Grid cells no worse than any finite neighbour (wrapping), best first.
fn grid_local_minima(values: &[f64], side: usize, dims: usize) -> Vec<usize> {
    let at = |i: isize, j: isize| -> f64 {
        let w = |k: isize| k.rem_euclid(side as isize) as usize;
        if dims == 1 {
            values[w(i)]
        } else {
            values[w(i) * side + w(j)]
        }
    };
    let mut minima: Vec<usize> = (0..values.len())
        .filter(|&k| values[k].is_finite())
        .filter(|&k| {
            let (i, j) = if dims == 1 { (k as isize, 0) } else { ((k / side) as isize, (k % side) as isize) };
            let here = values[k];
            let offsets: &[(isize, isize)] = if dims == 1 {
                &[(-1, 0), (1, 0)]
            } else {
                &[(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)]
            };
            offsets.iter().all(|&(di, dj)| here <= at(i + di, j + dj))
        })
        .collect();
    minima.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    minima
}

/// Shrinking compass search, coordinates kept within `[lo, hi]`.
fn compass_refine(
    f: &dyn Fn(&[f64]) -> f64,
    mut x: Vec<f64>,
    mut step: f64,
    lo: f64,
    hi: f64,
) -> (Vec<f64>, f64) {
    let mut fx = f(&x);
    let mut evals = 0usize;
    while step > 1e-12 && evals < 20_000 {
        let mut improved = false;
        for k in 0..x.len() {
            for dir in [1.0, -1.0] {
                let mut y = x.clone();
                y[k] = (y[k] + dir * step).clamp(lo, hi);
                let fy = f(&y);
                evals += 1;
                if fy < fx {
                    x = y;
                    fx = fy;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, fx)
}
