//! Order-12 block construction `[[H1, D H2], [H1, -D H2]]` from two order-6
//! family members and `D = diag(1, e^{i d1}, ..., e^{i d5})`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::families::{family_h, fourier_f6, fourier_f6_transposed, ParamPoint};
use crate::matrix::{UnitMatrix, DEFAULT_TOL};

/// An order-6 two-parameter family member.
#[derive(Debug, Clone, Copy, PartialEq)]
#[non_exhaustive]
pub enum FamilySelector {
    F6 { a: f64, b: f64 },
    F6T { a: f64, b: f64 },
    H { x1: f64, x2: f64 },
}

impl FamilySelector {
    pub fn build(&self) -> Result<UnitMatrix> {
        match *self {
            FamilySelector::F6 { a, b } => Ok(fourier_f6(a, b)),
            FamilySelector::F6T { a, b } => Ok(fourier_f6_transposed(a, b)),
            FamilySelector::H { x1, x2 } => family_h(ParamPoint::new(x1, x2)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComposeSpec {
    pub h1: FamilySelector,
    pub h2: FamilySelector,
    pub deltas: [f64; 5],
}

pub fn compose12(spec: &ComposeSpec) -> Result<UnitMatrix> {
    let h1 = spec.h1.build()?;
    let h2 = spec.h2.build()?;
    compose_blocks(&h1, &h2, &spec.deltas)
}

/// Block doubling of two explicit order-6 Hadamard matrices.
pub fn compose_blocks(h1: &UnitMatrix, h2: &UnitMatrix, deltas: &[f64; 5]) -> Result<UnitMatrix> {
    for h in [h1, h2] {
        if h.order() != 6 {
            return Err(Error::DimensionMismatch { expected: 6, found: h.order() });
        }
        h.require_hadamard(DEFAULT_TOL)?;
    }
    let mut d = [Complex64::new(1.0, 0.0); 6];
    for (slot, &delta) in d[1..].iter_mut().zip(deltas) {
        *slot = Complex64::from_polar(1.0, delta);
    }
    Ok(UnitMatrix::from_fn(12, |i, j| {
        let (r, c) = (i % 6, j % 6);
        match (i < 6, j < 6) {
            (_, true) => h1[(r, c)],
            (true, false) => d[r] * h2[(r, c)],
            (false, false) => -d[r] * h2[(r, c)],
        }
    }))
}
