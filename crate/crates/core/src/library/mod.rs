//! Application-aware scoring of library circuits and per-operation Pareto
//! reduction.

pub mod pareto;
pub mod pmf;
mod reduce;

pub use pareto::{pareto_filter, Candidate};
pub use pmf::{score_wmed, Pmf, PreparedPmf, PMF_TOLERANCE};
pub use reduce::{pmf_map, reduce_library, NodeLibrary, ReducedLibrary, RlEntry};
