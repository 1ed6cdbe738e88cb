use std::sync::Arc;

use serde_json::json;

use super::{enumerate_restricted_neighborhoods, ExplicitSet, FiniteCarrier};
use crate::error::FilterError;
use crate::lattice::RationalVector;
use crate::verdict::SemanticsMode;

/// A finite partial order, stored as its full `≤` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDirectedSet {
    leq: Vec<Vec<bool>>,
}

impl FiniteDirectedSet {
    /// Reflexive-transitive closure of `pairs` (each `(a, b)` meaning `a ≤ b`),
    /// checked for antisymmetry but not for directedness.
    pub fn from_relation(size: usize, pairs: &[(usize, usize)]) -> Result<Self, FilterError> {
        if size == 0 {
            return Err(FilterError::Input("a directed set needs an element".into()));
        }
        let mut leq = vec![vec![false; size]; size];
        for (a, row) in leq.iter_mut().enumerate() {
            row[a] = true;
        }
        for &(a, b) in pairs {
            if a >= size || b >= size {
                return Err(FilterError::Input(format!(
                    "order pair ({a}, {b}) outside an index set of {size}"
                )));
            }
            leq[a][b] = true;
        }
        for k in 0..size {
            for a in 0..size {
                if leq[a][k] {
                    for b in 0..size {
                        if leq[k][b] {
                            leq[a][b] = true;
                        }
                    }
                }
            }
        }
        for a in 0..size {
            for b in (a + 1)..size {
                if leq[a][b] && leq[b][a] {
                    return Err(FilterError::Input(format!(
                        "order is not antisymmetric: {a} <= {b} <= {a}"
                    )));
                }
            }
        }
        Ok(FiniteDirectedSet { leq })
    }

    /// Like [`from_relation`](Self::from_relation), and rejects non-directed orders.
    pub fn new(size: usize, pairs: &[(usize, usize)]) -> Result<Self, FilterError> {
        let set = Self::from_relation(size, pairs)?;
        if let Some((a, b)) = set.directedness_witness() {
            return Err(FilterError::Input(format!(
                "index set is not directed: {a} and {b} have no common upper bound"
            )));
        }
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// A pair with no common upper bound, if the order is not directed.
    pub fn directedness_witness(&self) -> Option<(usize, usize)> {
        let n = self.len();
        for a in 0..n {
            for b in a..n {
                if !(0..n).any(|c| self.leq[a][c] && self.leq[b][c]) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_directed(&self) -> bool {
        self.directedness_witness().is_none()
    }

    /// `{α : α ≥ β}`.
    pub fn up_from(&self, beta: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&a| self.leq[beta][a])
    }

    /// The generating pairs `(a, b)` with `a < b`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && self.leq[a][b])
            .collect()
    }

    /// Every directed partial order on `{0, .., size-1}`.
    pub fn all_directed(size: usize) -> Vec<FiniteDirectedSet> {
        let candidates: Vec<(usize, usize)> = (0..size)
            .flat_map(|a| (0..size).map(move |b| (a, b)))
            .filter(|(a, b)| a != b)
            .collect();
        let mut out: Vec<FiniteDirectedSet> = Vec::new();
        for mask in 0u32..(1 << candidates.len()) {
            let pairs: Vec<_> = candidates
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, p)| *p)
                .collect();
            // Keep only transitively closed relations so each order appears once.
            let Ok(set) = Self::from_relation(size, &pairs) else {
                continue;
            };
            if set.strict_pairs().len() != pairs.len() || !set.is_directed() {
                continue;
            }
            out.push(set);
        }
        out
    }
}

/// A function from a finite directed set into a carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteNet {
    index: FiniteDirectedSet,
    values: Vec<usize>,
    carrier: Arc<FiniteCarrier>,
}

impl FiniteNet {
    pub fn new(
        index: FiniteDirectedSet,
        values: Vec<usize>,
        carrier: Arc<FiniteCarrier>,
    ) -> Result<Self, FilterError> {
        if values.len() != index.len() {
            return Err(FilterError::Input(format!(
                "net has {} values for {} indices",
                values.len(),
                index.len()
            )));
        }
        if let Some(bad) = values.iter().find(|&&v| v >= carrier.len()) {
            return Err(FilterError::Input(format!(
                "net value {bad} outside carrier {}",
                carrier.name()
            )));
        }
        Ok(FiniteNet {
            index,
            values,
            carrier,
        })
    }

    pub fn index(&self) -> &FiniteDirectedSet {
        &self.index
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn carrier(&self) -> &Arc<FiniteCarrier> {
        &self.carrier
    }

    /// The tail `{x_α : α ≥ β}`.
    pub fn tail(&self, beta: usize) -> ExplicitSet {
        ExplicitSet::from_indices(self.index.up_from(beta).map(|a| self.values[a]))
    }

    pub fn tails(&self) -> Vec<ExplicitSet> {
        (0..self.index.len()).map(|b| self.tail(b)).collect()
    }

    fn eventually_in(&self, n: ExplicitSet) -> bool {
        (0..self.index.len())
            .any(|beta| self.index.up_from(beta).all(|a| n.contains(self.values[a])))
    }

    fn frequently_in(&self, n: ExplicitSet) -> bool {
        (0..self.index.len())
            .all(|beta| self.index.up_from(beta).any(|a| n.contains(self.values[a])))
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "order": self.index.strict_pairs(),
            "values": self.values,
            "carrier": self.carrier.name(),
        })
    }
}

/// Net convergence: every qualifying trace eventually contains the net.
pub fn net_converges_finite(
    net: &FiniteNet,
    e: &RationalVector,
    mode: SemanticsMode,
) -> Result<bool, FilterError> {
    if let Some((a, b)) = net.index.directedness_witness() {
        return Err(FilterError::Input(format!(
            "index set is not directed: {a} and {b} have no common upper bound"
        )));
    }
    Ok(enumerate_restricted_neighborhoods(&net.carrier, e, mode)?
        .iter()
        .all(|n| net.eventually_in(n.set)))
}

/// Net cluster point: the net is frequently in every qualifying trace.
pub fn net_cluster_finite(
    net: &FiniteNet,
    e: &RationalVector,
    mode: SemanticsMode,
) -> Result<bool, FilterError> {
    if let Some((a, b)) = net.index.directedness_witness() {
        return Err(FilterError::Input(format!(
            "index set is not directed: {a} and {b} have no common upper bound"
        )));
    }
    Ok(enumerate_restricted_neighborhoods(&net.carrier, e, mode)?
        .iter()
        .all(|n| net.frequently_in(n.set)))
}
