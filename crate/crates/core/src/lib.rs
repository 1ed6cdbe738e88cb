//! Executable filter convergence in locally solid Riesz spaces over ℚⁿ.
//!
//! The lattice and topology layers give exact arithmetic, Riesz pseudonorms
//! and basic neighborhoods. Two decidable backends sit on top: finite carriers,
//! where every filter is principal, and sequences polynomial in `1/k`, where
//! every membership predicate is eventually constant. [`suite`] runs the claim
//! checks over a corpus under both convergence semantics.

pub mod error;
pub mod filter;
pub mod finite;
pub mod lattice;
pub mod par;
pub mod sampling;
pub mod sequence;
pub mod suite;
pub mod topology;
pub mod verdict;

pub use error::{FilterError, LatticeError, ParseError, TopologyError};
pub use filter::{Filter, FilterBase, QuerySet, Universe};
pub use lattice::{Rational, RationalVector, SpaceSpec};
pub use par::Execution;
pub use verdict::{SemanticsMode, Status, Verdict};
