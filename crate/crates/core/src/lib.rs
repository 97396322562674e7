//! Exact symbolic engine for flag structures on real 3-manifolds.
//!
//! The crate is organised bottom-up:
//!
//! * [`scalar`]: Gaussian-rational rational functions in named symbols,
//!   reduction modulo declared algebraic relations.
//! * [`exterior`]: coframes with structural differentials, graded exterior
//!   algebra and the exterior derivative.
//! * [`matrix`]: `sl(3, C)`-valued forms: the connection matrix, its
//!   curvature, Borel gauge action and the Chern–Simons transgression form.
//! * [`flag`]: pseudo-flag normalization, curvature coefficients, the
//!   embedding into the full connection and the curvature invariants.
//! * [`catalog`]: ready-made structures (Lie-group frames, the homogeneous
//!   SU(2) family, coordinate examples) and the end-to-end report.
//!
//! Every check in the crate is exact: equality always means "the difference
//! reduces to zero", never a floating point comparison.

pub mod catalog;
pub mod error;
pub mod exterior;
pub mod flag;
pub mod matrix;
pub mod scalar;

pub use error::{Error, Result};
pub use exterior::{check_frame_consistency, ConsistencyReport, Form, FrameBuilder, FrameSpace};
pub use scalar::{GaussianRational, Monomial, Polynomial, RelationSet, Scalar, Symbol};
