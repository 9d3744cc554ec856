//! Implicit equations of tensor-product surfaces `P^1 x P^1 -> P^3` that
//! carry a bidegree `(0,1)` or `(1,0)` syzygy, computed from the syzygy
//! module instead of elimination.

pub mod bipoly;
mod error;
pub mod exactla;
pub mod modp;
mod mpoly;
mod parse;

pub use bipoly::{BiDeg, BiPoly, XPoly, Q};
pub use error::{Error, Result};
pub use exactla::{det_interp, det_poly, det_scalar, kernel_basis, rank, MatQ, MatX};
pub mod surface;

pub use surface::{
    basepoint_check, build_d1_nu, build_d1_nu_generic, classify_p22, detect_linear_syzygy, implicitize,
    intersection_number, line_multiplicity, min_syz_generators, normalize_linear, special_pair, syz_strand, uv_split,
    ImplicitOptions, ImplicitResult, LinearSyzygy, NormalizedSurface, Orientation, P22Class, SyzygyVector, TPSurface,
};
