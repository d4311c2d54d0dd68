//! Minimization of the total energy: a quasi-Newton core, the overlapped
//! two-segment piece schedule, and an optional global refinement pass.

mod lbfgs;
mod piecewise;

pub use lbfgs::{minimize, MinimizeOptions, MinimizeReport, Termination};
pub use piecewise::{
    optimize_bezigon, optimize_color, optimize_piece, OptimizeReport, PieceOutcome, PieceSelector,
    SolverOptions,
};
