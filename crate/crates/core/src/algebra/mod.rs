//! Exact sparse arithmetic in the group algebra and in matrix algebras over it.

mod coeff;
mod element;
mod io;
mod matrix;

pub use coeff::{Coefficient, GaussianRational, FLOAT_PURGE};
pub use element::{AlgElement, Norms};
pub use io::{ElementFile, TermRecord};
pub use matrix::MatrixAlgElement;
