//! Interval branch and bound certifying a lower bound on the density of
//! ring-packing edge sectors.
//!
//! [`interval`] provides outward-rounded arithmetic, [`case`] the edge
//! configurations and parameter boxes, [`density`] the sector densities, and
//! [`search`] the parallel subdivision driver.

pub mod case;
pub mod density;
pub mod interval;
pub mod search;

pub use case::{admissible, Admissibility, CaseBox, CaseTag, ConfigType, Orientation};
pub use density::eval_density;
pub use interval::{Interval, IntervalError};
pub use search::{prove_all, prove_case, Budget, LeafRecord, ProofReport, ProveOptions, Verdict, DEFAULT_BOUND};
