//! Landmark-based 2D image registration with compactly supported radial
//! basis functions, plus the analysis machinery for their topology
//! preservation: minimum support sizes, Jacobian-determinant fields, the
//! closed-form four-landmark case, and figure/warp rendering.

pub mod error;
pub mod four_landmark;
pub mod io;
pub mod kernels;
mod linalg;
pub mod registration;
pub mod render;
pub mod support;
pub mod warp;

pub use error::{Error, Result};
pub use kernels::{Kernel, KernelFamily};
pub use registration::{fit, JacobianField, LandmarkCorrespondence, Point2, Rect, Transformation};
pub use support::{min_support, support_bound, SupportBound};
