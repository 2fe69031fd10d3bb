//! JSON and CSV formats for matrices, witnesses, compose specs and
//! classification records.
//!
//! Matrices: `{"n": 6, "re": [[...]], "im": [[...]]}` or, on input only,
//! `{"n": 6, "phase_turns": [[...]]}` with entries `exp(2 pi i t)`.
//! Indices in witnesses are 0-based.

use std::f64::consts::TAU;
use std::io::Write;

use chm6_core::search::Classification;
use chm6_core::{ComposeSpec, EquivalenceWitness, FamilySelector, UnitMatrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub re: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_turns: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &UnitMatrix) -> Self {
        let part = |f: fn(&Complex64) -> f64| m.rows().map(|r| r.iter().map(f).collect()).collect();
        MatrixJson { n: m.order(), re: Some(part(|z| z.re)), im: Some(part(|z| z.im)), phase_turns: None }
    }

    pub fn to_matrix(&self) -> Result<UnitMatrix, CliError> {
        let n = self.n;
        let shaped = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        let entries: Vec<Complex64> = match (&self.re, &self.im, &self.phase_turns) {
            (Some(re), Some(im), None) if shaped(re) && shaped(im) => re
                .iter()
                .flatten()
                .zip(im.iter().flatten())
                .map(|(&a, &b)| Complex64::new(a, b))
                .collect(),
            (None, None, Some(t)) if shaped(t) => {
                t.iter().flatten().map(|&t| Complex64::from_polar(1.0, TAU * t)).collect()
            }
            (None, None, None) | (Some(_), None, _) | (None, Some(_), _) => {
                return Err(CliError::Format("matrix needs both \"re\" and \"im\", or \"phase_turns\"".into()))
            }
            (_, _, Some(_)) if self.re.is_some() => {
                return Err(CliError::Format("give either re/im or phase_turns, not both".into()))
            }
            _ => return Err(CliError::Format(format!("matrix rows must be {n} x {n}"))),
        };
        Ok(UnitMatrix::new(n, entries)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasesJson {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl PhasesJson {
    fn from_slice(z: &[Complex64]) -> Self {
        PhasesJson { re: z.iter().map(|z| z.re).collect(), im: z.iter().map(|z| z.im).collect() }
    }

    fn to_vec(&self) -> Result<Vec<Complex64>, CliError> {
        if self.re.len() != self.im.len() {
            return Err(CliError::Format("phase re/im lengths differ".into()));
        }
        Ok(self.re.iter().zip(&self.im).map(|(&a, &b)| Complex64::new(a, b)).collect())
    }
}

/// `out[i][j] = row_phases[i] * M[row_perm[i]][col_perm[j]] * col_phases[j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub row_perm: Vec<usize>,
    pub row_phases: PhasesJson,
    pub col_perm: Vec<usize>,
    pub col_phases: PhasesJson,
}

impl WitnessJson {
    pub fn from_witness(w: &EquivalenceWitness) -> Self {
        WitnessJson {
            row_perm: w.row_perm.clone(),
            row_phases: PhasesJson::from_slice(&w.row_phases),
            col_perm: w.col_perm.clone(),
            col_phases: PhasesJson::from_slice(&w.col_phases),
        }
    }

    pub fn to_witness(&self) -> Result<EquivalenceWitness, CliError> {
        Ok(EquivalenceWitness {
            row_perm: self.row_perm.clone(),
            row_phases: self.row_phases.to_vec()?,
            col_perm: self.col_perm.clone(),
            col_phases: self.col_phases.to_vec()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectorJson {
    pub family: String,
    pub params: Vec<f64>,
}

impl SelectorJson {
    pub fn to_selector(&self) -> Result<FamilySelector, CliError> {
        let two = |name: &str| match self.params[..] {
            [u, v] => Ok((u, v)),
            _ => Err(CliError::Format(format!("family \"{name}\" takes 2 params, got {}", self.params.len()))),
        };
        match self.family.as_str() {
            "f6" => two("f6").map(|(a, b)| FamilySelector::F6 { a, b }),
            "f6t" => two("f6t").map(|(a, b)| FamilySelector::F6T { a, b }),
            "h" => two("h").map(|(x1, x2)| FamilySelector::H { x1, x2 }),
            "x6" => Err(CliError::UnsupportedFamily("x6".into())),
            other => Err(CliError::Format(format!("unknown family tag \"{other}\""))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComposeSpecJson {
    pub h1: SelectorJson,
    pub h2: SelectorJson,
    pub deltas: [f64; 5],
}

impl ComposeSpecJson {
    pub fn to_spec(&self) -> Result<ComposeSpec, CliError> {
        Ok(ComposeSpec { h1: self.h1.to_selector()?, h2: self.h2.to_selector()?, deltas: self.deltas })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationJson {
    pub label: String,
    pub params: Vec<f64>,
    pub distance: f64,
    pub verified: bool,
}

impl From<&Classification> for ClassificationJson {
    fn from(c: &Classification) -> Self {
        ClassificationJson {
            label: c.label.as_str().to_string(),
            params: c.params.clone(),
            distance: c.distance,
            verified: c.verified,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub x1: f64,
    pub x2: f64,
    /// `None` where the construction hits the singular guard.
    pub defects: Option<(f64, f64)>,
}

/// Header `x1,x2,modulus_defect,unitarity_defect`, LF line endings. Guarded
/// points leave both defect fields empty.
pub fn write_scan_csv<W: Write>(out: W, rows: &[ScanRow]) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["x1", "x2", "modulus_defect", "unitarity_defect"])?;
    for r in rows {
        let (m, u) = match r.defects {
            Some((m, u)) => (num(m), num(u)),
            None => (String::new(), String::new()),
        };
        w.write_record([num(r.x1), num(r.x2), m, u])?;
    }
    w.flush()?;
    Ok(())
}

/// Shortest round-trip decimal, switching to exponent form for tiny values.
fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}
