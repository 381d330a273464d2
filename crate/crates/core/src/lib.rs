//! Exact computations with Leonard pairs.
//!
//! The crate works in a canonical model: a dual eigenbasis is the standard
//! basis, so the dual idempotents `E*_i` are coordinate projections and `A`
//! is literally an irreducible tridiagonal matrix. On top of that it builds
//! the primitive idempotents `E_i` of `A`, the graph on `{0..d}` joining `i`
//! and `j` when `E_i A* E_j != 0`, and decides which ordered pairs of
//! primitive idempotents start a Q-polynomial ordering, both through the
//! tail/recurrence/distinctness test and through a direct search for
//! Leonard-system orderings.
//!
//! - [`field`], [`matrix`], [`poly`]: exact scalars, matrices, polynomials
//! - [`spectral`]: eigen-splitting and idempotent systems
//! - [`context`]: the standing setup and the Leonard pair/system verifiers
//! - [`dagger`]: the antiautomorphism fixing `A` and every `E*_i`
//! - [`delta`]: the graph, tails, orderings, invariant subspaces
//! - [`qpoly`]: recurrence constants and the pair decision
//! - [`instances`]: deterministic instance generators
//! - [`io`]: instance files
//! - [`report`]: command reports and exit statuses

pub mod context;
pub mod dagger;
pub mod delta;
pub mod error;
pub mod field;
pub mod instances;
pub mod io;
pub mod matrix;
mod numtheory;
pub mod poly;
pub mod qpoly;
pub mod report;
pub mod rng;
pub mod spectral;
pub use context::{Context, LeonardVerdict};
pub use delta::DeltaGraph;
pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};
pub use matrix::{BasisChange, ExactMatrix};
pub use poly::ExactPolynomial;
pub use qpoly::{QPolyAnalysis, QPolyVerdict};
