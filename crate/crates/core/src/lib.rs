//! First-order convex optimization toolkit.
//!
//! The crate follows one lineage of gradient-type methods: plain gradient
//! descent, Bregman mirror steps, model-based steps, the accelerated
//! similar-triangles scheme, universal (Hölder-adaptive) variants, Mirror
//! Prox for variational inequalities, restart wrappers for strong convexity
//! and primal-dual certificate/restoration machinery. A zoo of worst-case
//! test problems with exact oracles backs the convergence-rate checks in the
//! companion bench crate.
//!
//! All numeric code is generic over the scalar type through [`Real`];
//! concrete `f64` aliases live at the crate root.

pub mod error;
pub mod linalg;
pub mod methods;
pub mod model;
pub mod norms;
pub mod oracle;
pub mod primal_dual;
pub mod prox;
pub mod restart;
pub mod scalar;
pub mod sets;
pub mod trace;
pub mod universal;
pub mod vi;
pub mod zoo;

pub use error::Error;
pub use norms::{dual_norm, norm, NormSpec};
pub use oracle::{finite_diff_check, Objective, Oracle, Problem, ProblemConstants};
pub use scalar::{real, Real};
pub use sets::FeasibleSet;
pub use trace::Trace;

/// Dense point of the ambient space; every method iterates over these.
pub type Point<T> = Vec<T>;

/// Library-wide result type.
pub type Result<T, E = Error> = std::result::Result<T, E>;

// Concrete double-precision aliases for the common case.
pub type Point64 = Point<f64>;
pub type Trace64 = Trace<f64>;
pub type Problem64 = Problem<f64>;
pub type Oracle64 = Oracle<f64>;
