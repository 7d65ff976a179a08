//! Pointwise numerical verification of the extrinsic geometry of framed
//! metric f-manifolds.
//!
//! Everything here is pure computation on coordinate charts: second-order
//! jets carry exact derivatives through expression trees, from which the
//! crate assembles Levi-Civita connections, curvature, immersed-submanifold
//! frames, second fundamental forms, slant angles and warped-product
//! quantities. Checks return [`check::CheckResult`] records; nothing here
//! performs IO.
#![no_std]
// Index loops mirror the tensor formulas; `!(a < b)` comparisons deliberately reject NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod ambient;
pub mod check;
pub mod error;
pub mod expr;
pub mod jet;
pub mod linalg;
pub mod sample;
pub mod subgeom;
pub mod warp;

pub use error::{Error, Result};
pub use jet::{Jet, Scalar};
pub use linalg::{BilinearForm, CoordVector};
