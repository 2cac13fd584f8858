//! Minimal numbers of periodic orbits forced by the Sharkovskii ordering.
//!
//! Three independent routes arrive at the same counts:
//!
//! * [`orbits`] runs the closed integer recursions and the inclusion–exclusion
//!   transform;
//! * [`symbolic`] derives substitution rules from a Markov map's node list and
//!   iterates branch counts;
//! * [`plmap`] composes the map exactly and solves `f^k(x) = x` piece by piece.
//!
//! [`spectral`] covers growth rates and [`sharkovskii`] the ordering and the
//! bound queries built on the counts.

pub mod exec;
pub mod orbits;
pub mod plmap;
pub mod sharkovskii;
pub mod spectral;
pub mod symbolic;

pub use exec::Exec;
pub use orbits::{Count, CountFunction, CountKind, OrbitError, OrbitTable};
pub use plmap::{ExactRational, PlMap, PlMapError, SolutionSet};
pub use sharkovskii::{precedes, theorem3_bound, SharkovskiiError};
pub use spectral::{dominant_root, RootApprox, SpectralError};
pub use symbolic::{LocatedCounts, MarkovMap, Representation, SubstitutionRules, SymbolicError};
