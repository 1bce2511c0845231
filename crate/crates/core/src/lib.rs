//! Norm residue symbol matrices for dihedral towers over `Q(i)`, the
//! all-or-nothing rank dichotomy over `F_ℓ`, and exact rank heuristics for
//! ambiguous `ℓ`-class groups.

pub mod allornothing;
pub mod error;
pub mod ff;
pub mod fixtures;
pub mod galois;
pub mod heuristics;
pub mod sampling;
pub mod skewcirc;

pub use error::{Error, Result};
