//! Spectral radii in group algebras, matrix holomorphic functional calculus,
//! eigenvalue-counting K-groups over the complex numbers, and closed-form
//! stable-rank tables.

pub mod algebra;
pub mod error;
pub mod groups;
pub mod holocalc;
pub mod ktheory;
pub mod ranks;
pub mod spectra;
pub mod weights;

pub use error::{Error, Result};
