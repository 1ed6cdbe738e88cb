//! Exact-rational vector lattice ℚⁿ with the coordinatewise order.

mod rational;
mod vector;

pub use rational::Rational;
pub use vector::RationalVector;

use serde::{Deserialize, Serialize};

use crate::error::LatticeError;
use crate::topology::PseudonormFamily;

/// The pair (E, τ): a dimension together with the pseudonorm family generating τ.
///
/// Serializes as `{"dim": n, "pseudonorms": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "PseudonormFamily", into = "PseudonormFamily")]
pub struct SpaceSpec {
    dim: usize,
    pseudonorms: PseudonormFamily,
}

impl SpaceSpec {
    pub fn new(pseudonorms: PseudonormFamily) -> Self {
        SpaceSpec {
            dim: pseudonorms.dim(),
            pseudonorms,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn family(&self) -> &PseudonormFamily {
        &self.pseudonorms
    }

    pub fn check_vector(&self, x: &RationalVector) -> Result<(), LatticeError> {
        if x.dim() != self.dim {
            return Err(LatticeError::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        Ok(())
    }

    pub fn zero(&self) -> RationalVector {
        RationalVector::zero(self.dim)
    }
}

impl From<PseudonormFamily> for SpaceSpec {
    fn from(family: PseudonormFamily) -> Self {
        SpaceSpec::new(family)
    }
}

impl From<SpaceSpec> for PseudonormFamily {
    fn from(space: SpaceSpec) -> Self {
        space.pseudonorms
    }
}
