//! A self-contained branch-and-cut engine for mixed-integer linear programs.
//!
//! The crate is organised around the life cycle of a solve:
//!
//! * [`model`] — problem representation, MPS ingestion, instance features,
//!   and diverse training-subset selection.
//! * [`simplex`] — a bounded-variable primal simplex solver that exposes
//!   basis information and tableau rows, and supports warm resolves after
//!   rows are appended.
//! * [`cutgen`] — Gomory mixed-integer cut generation from the optimal
//!   tableau.
//! * [`cutsel`] — cut scoring measures, filtering modes, and the selection
//!   loop with a per-round nonzero budget.
//! * [`engine`] — separation rounds, pseudo-cost and lock bookkeeping, and a
//!   cut-and-branch solver producing [`engine::SolveStats`].

pub mod cutgen;
pub mod cutsel;
pub mod engine;
pub mod model;
pub mod simplex;

pub use cutsel::{FilterMode, SelectionResult, SelectorConfig, StopReason};
pub use engine::{branch_and_bound, SolveLimits, SolveStats, SolveStatus};
pub use model::{Cut, InstanceFeatures, MilpInstance, RowSense};
pub use simplex::{LpSession, LpSolution, LpStatus};
