//! Frame-level channel matrices of the SAF protocol variants.

mod build;
mod drop;
mod eval;
mod symbolic;
mod trace;

pub use build::{
    build, build_guard, build_guard_dl, build_offset, build_offset_dl, build_prop_naive, build_sync, BuildError,
};
pub use drop::{apply_drop, compute_drop_plan, submatrix, DropError, DropPlan};
pub use eval::{
    evaluate, extract_band, extract_diag, extract_strict_lower, extract_subdiag, first_subdiagonal, CompiledMatrix,
    EvalError,
};
pub use symbolic::{FadeSymbol, MatrixMeta, Monomial, SymbolicEntry, SymbolicMatrix};
pub use trace::shift_truncate;
