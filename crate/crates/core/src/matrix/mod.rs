//! `sl(3, C)`-valued forms.
//!
//! The eight connection 1-forms `ω, ω¹, ω², φ, ω₁¹, φ¹, φ², ψ` are arranged
//! in the traceless matrix
//!
//! ```text
//!     | -φ/2 - ω₁¹/3   -φ²          -ψ/4         |
//! π = |  ω¹             2ω₁¹/3       φ¹/2        |
//!     |  2ω             2ω²          φ/2 - ω₁¹/3 |
//! ```
//!
//! with curvature `Π = dπ + π∧π` and matrix wedge
//! `(A∧B)ᵢⱼ = Σₖ Aᵢₖ∧Bₖⱼ`. The sign of the `φ²` entry is the one for which
//! `Π = dπ + π∧π` has zero entries exactly when the structure equations
//! hold, with `Π₁₂ = −Φ²`, `Π₁₃ = −Ψ/4`, `Π₂₃ = Φ¹/2`. Matrix indices in the
//! API are zero-based.

mod connection;
mod gauge;
mod jmap;
mod transgression;

pub use connection::{
    assemble_pi, curvature, extract_components, ConnectionForms, CurvatureComponents, MatrixForm,
    SLOT_NAMES,
};
pub(crate) use connection::single_coefficient;
pub use gauge::{
    gauge_law, gauge_transform, section_dependence_check, verify_gauge_covariance,
    with_gauge_coordinates, BorelElement, GaugeReport, SectionReport, GAUGE_PARAMETERS,
};
pub use jmap::{j_homomorphism, HMatrix};
pub use transgression::{
    abstract_expansion_residual, cubic_trace, cubic_trace_expansion, tc2, Transgression,
    TC2_FACTOR,
};
