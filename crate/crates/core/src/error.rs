use core::fmt;

/// Errors raised by the constructors, transforms and decision procedures.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A first-row or first-column entry is too small to divide by while dephasing.
    NearZeroEntry { row: usize, col: usize },
    /// Operand orders do not agree (matrix vs matrix, or matrix vs witness).
    DimensionMismatch { expected: usize, found: usize },
    /// Input is not a complex Hadamard matrix at the required tolerance.
    NotHadamard { modulus_defect: f64, unitarity_defect: f64 },
    /// A family parameter lies outside the range its construction is defined on.
    ParamOutOfRange { name: &'static str, value: f64 },
    /// Sign factors violate `s11 * s21 == s12 * s22`.
    InadmissibleSigns,
    /// An element of the Z block is (numerically) zero, so the element-wise solution degenerates.
    SingularZ { x1: f64, x2: f64 },
    /// The operation is only available for certain orders.
    OrderUnsupported(usize),
    /// Matrix data does not describe a square matrix.
    Malformed(&'static str),
}

impl Error {
    /// Stable variant name, used by front ends for diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NearZeroEntry { .. } => "NearZeroEntry",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotHadamard { .. } => "NotHadamard",
            Error::ParamOutOfRange { .. } => "ParamOutOfRange",
            Error::InadmissibleSigns => "InadmissibleSigns",
            Error::SingularZ { .. } => "SingularZ",
            Error::OrderUnsupported(_) => "OrderUnsupported",
            Error::Malformed(_) => "Malformed",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NearZeroEntry { row, col } => {
                write!(f, "entry ({row}, {col}) has modulus below 0.5, cannot dephase")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected order {expected}, found {found}")
            }
            Error::NotHadamard { modulus_defect, unitarity_defect } => write!(
                f,
                "not a complex Hadamard matrix (modulus defect {modulus_defect:e}, unitarity defect {unitarity_defect:e})"
            ),
            Error::ParamOutOfRange { name, value } => {
                write!(f, "parameter {name} = {value} is outside its admissible range")
            }
            Error::InadmissibleSigns => write!(f, "sign pattern violates s11*s21 = s12*s22"),
            Error::SingularZ { x1, x2 } => {
                write!(f, "Z block degenerates at (x1, x2) = ({x1}, {x2})")
            }
            Error::OrderUnsupported(n) => write!(f, "order {n} is not supported here"),
            Error::Malformed(what) => write!(f, "malformed matrix: {what}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
