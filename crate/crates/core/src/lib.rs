//! Finite-scale laboratory for generic points of shift spaces.
//!
//! The crate covers four layers:
//!
//! * [`symbolic`]: words, lazily generated points, the shift and the metric
//!   `rho(x, y) = 2^{-k}`;
//! * [`measure`]: finitely supported measures, empirical measures and the
//!   exact Prohorov distance (max-flow feasibility over radius intervals);
//! * [`birkhoff`] and [`tracing`]: ergodic averages, specifications, tracing
//!   verifiers and generic-point builders on full shifts;
//! * [`reductions`]: the `ψ^β` interpolation, the tree coding on `ω^ω` and the
//!   Oxtoby–Toeplitz machine.
//!
//! Every quantity is an exact rational; every operation on an infinite point
//! takes an explicit horizon.

pub mod birkhoff;
pub mod flow;
pub mod io;
pub mod measure;
pub mod rational;
pub mod reductions;
pub mod symbolic;
pub mod tracing;

pub use measure::{
    convex_combine, emp_measure, emp_of_sequence, emp_of_specification, prohorov,
    prohorov_bruteforce_oracle, prohorov_report, Coupling, DiscreteMeasure, MeasureError,
    ProhorovReport,
};
pub use rational::{decimal, frac, int, parse_ratio, Ratio};
pub use symbolic::{rho, Point, ShiftSpace, Symbol, SymbolicError, Word};
pub use tracing::Specification;
