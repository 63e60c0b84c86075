//! Matrix spectra, plane regions, and the contour-integral functional calculus.

mod calc;
mod contour;
mod functions;
mod matrix;
mod region;

pub use calc::{
    apply, apply_in, holo_calc, holo_calc_with, homotopy_deformation_probe, CalcOutput, QuadratureOptions,
    MAX_CONDITION,
};
pub use contour::{build_contour, build_contour_scaled, Circle, Contour, Target, CLUSTER_GAP, DEFAULT_NODES};
pub use functions::{HoloFn, WeightedFn};
pub use matrix::{multiset_distance, SquareMatrix, MAX_EIGEN_SIZE};
pub(crate) use matrix::{pair, pairs};
pub use region::{default_margin, in_region, Axis, BBox, Primitive, RegionSet, Side};
