//! Numerical toolkit for one-dimensional weighted spaces `(M, g, e^{-phi} dx)`.
//!
//! The crate builds discrete weighted spaces (circle, interval, truncated
//! line), the weighted Laplacian in self-adjoint divergence form, the carre
//! du champ operators, curvature-dimension checks, linear heat semigroups,
//! porous-medium / fast-diffusion solvers with gradient-bound verdicts, and
//! model-space isoperimetric profiles. Every inequality check reports
//! explicit margins so that suites can be replayed deterministically.

pub mod error;
pub mod exec;
pub mod field;
pub mod functionals;
pub mod history;
pub mod isoperimetry;
pub mod linalg;
pub mod nonlinear;
pub mod operators;
pub mod probes;
pub mod quad;
pub mod report;
pub mod semigroup;
pub mod space;

pub use error::{Error, Result};
pub use field::ScalarField;
pub use history::SolutionHistory;
pub use space::{DomainKind, ModelSpace, WeightSpec, WeightedSpace};
