//! The three explicit reductions: the `ψ^β` interpolation feeding the
//! generic-point builder, the tree coding on `ω^ω`, and the Oxtoby–Toeplitz
//! machine with its map `f(β)`.

use thiserror::Error;

use crate::birkhoff::BirkhoffError;
use crate::measure::MeasureError;
use crate::symbolic::SymbolicError;
use crate::tracing::TracingError;

pub mod oxtoby;
pub mod psi;
pub mod tree;

pub use oxtoby::{oxtoby_build, oxtoby_language, oxtoby_reduce, OxtobyLanguage, OxtobyMachine, OxtobyReduction};
pub use psi::{phi_reduction, psi_reduction, PhiReduction, PsiReduction, PsiRow, PsiSchedule};
pub use tree::{tree_point, TreeOnOmega, TreePoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("beta has {got} entries, stage {stage} needs {needed}")]
    BetaTooShort { got: usize, needed: usize, stage: usize },
    #[error("the observable does not separate nu from the target")]
    NotSeparating,
    #[error("nu coincides with target measure {0} at the working horizon")]
    NotDistinguishable(usize),
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("length {needed} exceeds the cap {cap}")]
    CapExceeded { needed: u128, cap: u128 },
    #[error("invalid tree: {0}")]
    Tree(String),
    #[error(transparent)]
    Tracing(#[from] TracingError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Birkhoff(#[from] BirkhoffError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}
