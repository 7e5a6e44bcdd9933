//! Exact computations for relative Hilbert schemes of points on a surface
//! relative to a smooth divisor.
//!
//! * [`series`] and [`goettsche`] evaluate the generating functions of Betti
//!   numbers, for arbitrary Betti input.
//! * [`cycle`], [`relations`] and [`reduce`] implement the calculus of product
//!   classes on the plane relative to a line: generators, the four geometric
//!   relation families, and reduction to canonical and normal forms.
//! * [`verify`] cross-checks the two sides against each other.

pub mod cycle;
pub mod error;
pub mod goettsche;
pub mod linalg;
pub mod par;
pub mod reduce;
pub mod relations;
pub mod series;
pub mod verify;

/// Exact rational over arbitrary-precision integers.
pub type Rational = num_rational::BigRational;

pub use cycle::{BaseFactor, BubbleFactor, CycleClass, CycleExpr};
pub use error::{CycleError, RelationError, SeriesError};
pub use goettsche::{CurveBetti, SurfaceBetti};
pub use par::Execution;
pub use relations::{RelationInstance, RelationKind};
pub use series::{LaurentPoly, QSeries};
