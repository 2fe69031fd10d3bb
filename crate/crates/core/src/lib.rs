//! Order-6 complex Hadamard matrices.
//!
//! * [`matrix`]: dense complex matrices, defects, dephasing, equivalence
//!   transforms and Haagerup fingerprints.
//! * [`families`]: the Fourier and Dita families and the nonaffine
//!   two-parameter family `H(x1, x2)` with its one-parameter slices.
//! * [`equivalence`]: exact decision of `H2 = D2 P2 H1 P1 D1` at order 6.
//! * [`search`]: alternating-projection search and family classification.
//! * [`compose`]: order-12 block doubling.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod compose;
pub mod equivalence;
pub mod error;
pub mod families;
pub mod matrix;
pub mod search;

pub use compose::{compose12, ComposeSpec, FamilySelector};
pub use equivalence::{are_equivalent, fingerprint_match, Decision, EquivalenceResult};
pub use error::{Error, Result};
pub use families::{family_h, ParamPoint, SignPattern};
pub use matrix::{EquivalenceWitness, Fingerprint, UnitMatrix, DEFAULT_PRECISION, DEFAULT_TOL};
pub use search::{classify, project_search, Classification, FamilyLabel, SearchConfig};
