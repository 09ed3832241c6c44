//! Workbench for exact and numerical computation with rotation algebras:
//! twisted monomial arithmetic, Furstenberg transformations and their
//! crossed-product presentations, Pimsner–Voiculescu K-theory, finite
//! clock-and-shift models with Rokhlin-tower diagnostics, and classical
//! skew-product dynamics on the two-torus.

pub mod algebra;
pub mod centralizer;
pub mod circle;
pub mod element;
pub mod furstenberg;
pub mod fuzzy;
pub mod ktheory;
pub mod linalg;
pub mod phase;
pub mod presentations;
pub mod scalar;

pub use algebra::{Algebra, Monomial, ReductionStrategy, SwapRule, TwistTable};
pub use element::Element;
pub use furstenberg::FurstenbergAuto;
pub use phase::{IndependenceMode, Phase};
pub use scalar::{EvalCtx, Scalar};

/// The golden-ratio conjugate (√5 − 1)/2, the standard fully irrational
/// rotation number used throughout the test suites.
pub fn golden_conjugate() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}
