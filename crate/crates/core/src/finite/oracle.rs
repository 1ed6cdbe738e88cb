//! Brute-force oracles for the finite backend.
//!
//! Nothing here uses critical-radius sampling or minset shortcuts: traces are
//! found by scanning every subset of the carrier, and filter properties by
//! enumerating every member set.

use std::collections::BTreeSet;

use super::{ExplicitSet, FiniteCarrier};
use crate::error::FilterError;
use crate::filter::{Filter, QuerySet};
use crate::lattice::{Rational, RationalVector};
use crate::verdict::SemanticsMode;

/// Subsets `A ⊆ W` realizable as a single-pseudonorm trace `{x : d(x) < ε}` with `ε > lo`.
///
/// `A` is realizable iff `A = W`, or `max(lo, max_A d) < min_{W∖A} d`.
fn realizable_for(distances: &[Rational], lo: &Rational) -> Vec<ExplicitSet> {
    let n = distances.len();
    ExplicitSet::all_subsets(n)
        .filter(|a| {
            let outside: Vec<_> = (0..n).filter(|i| !a.contains(*i)).collect();
            if outside.is_empty() {
                return true;
            }
            let max_in = a
                .indices()
                .map(|i| distances[i].clone())
                .fold(lo.clone(), Rational::max);
            outside.iter().all(|&i| max_in < distances[i])
        })
        .collect()
}

/// Qualifying traces around `center`, found by subset scan.
pub fn qualifying_traces(
    carrier: &FiniteCarrier,
    center: &RationalVector,
    mode: SemanticsMode,
) -> Result<BTreeSet<ExplicitSet>, FilterError> {
    let space = carrier.space();
    let family = space.family();
    let mut per_index = Vec::new();
    for rho in family.members() {
        let (distances, lo) = match mode {
            SemanticsMode::ZeroNbhd => (
                carrier
                    .points()
                    .iter()
                    .map(|x| rho.evaluate(x))
                    .collect::<Result<Vec<_>, _>>()?,
                rho.evaluate(center)?,
            ),
            SemanticsMode::Translated => (
                carrier
                    .points()
                    .iter()
                    .map(|x| rho.evaluate(&x.try_sub(center)?))
                    .collect::<Result<Vec<_>, _>>()?,
                Rational::zero(),
            ),
        };
        per_index.push(realizable_for(&distances, &lo));
    }
    let mut acc: BTreeSet<ExplicitSet> = [carrier.full()].into_iter().collect();
    for family_sets in per_index {
        acc = acc
            .iter()
            .flat_map(|a| family_sets.iter().map(move |b| a.intersection(*b)))
            .collect();
    }
    Ok(acc)
}

/// Every member of a filter on the carrier, by querying all `2^|W|` subsets.
pub fn members(filter: &Filter, carrier: &FiniteCarrier) -> Result<Vec<ExplicitSet>, FilterError> {
    let mut out = Vec::new();
    for s in ExplicitSet::all_subsets(carrier.len()) {
        if filter.member(&QuerySet::Explicit(s))? {
            out.push(s);
        }
    }
    Ok(out)
}

/// Which filter axiom an explicit family of sets violates, if any.
pub fn filter_axiom_violation(
    family: &BTreeSet<ExplicitSet>,
    n: usize,
) -> Option<(&'static str, Vec<ExplicitSet>)> {
    if family.is_empty() {
        return Some(("nonempty", vec![]));
    }
    if family.contains(&ExplicitSet::EMPTY) {
        return Some(("empty-set-excluded", vec![ExplicitSet::EMPTY]));
    }
    for a in family {
        for b in a.supersets(n) {
            if !family.contains(&b) {
                return Some(("upward-closed", vec![*a, b]));
            }
        }
    }
    for a in family {
        for b in family {
            if !family.contains(&a.intersection(*b)) {
                return Some(("finite-intersections", vec![*a, *b]));
            }
        }
    }
    None
}

/// Exhaustive check that `filter` satisfies the filter axioms on its carrier.
pub fn validate_filter_axioms(
    filter: &Filter,
    carrier: &FiniteCarrier,
) -> Result<Option<(&'static str, Vec<ExplicitSet>)>, FilterError> {
    let family: BTreeSet<_> = members(filter, carrier)?.into_iter().collect();
    Ok(filter_axiom_violation(&family, carrier.len()))
}

/// `𝒩_e ⊆ F`, with `𝒩_e` the up-closure of the subset-scan traces.
pub fn converges_by_subfilter(
    minset: ExplicitSet,
    traces: &BTreeSet<ExplicitSet>,
) -> bool {
    traces.iter().all(|t| minset.is_subset(*t))
}

/// Every trace meets every member `M ⊇ minset`, members enumerated explicitly.
pub fn cluster_by_enumeration(
    minset: ExplicitSet,
    n: usize,
    traces: &BTreeSet<ExplicitSet>,
) -> bool {
    minset
        .supersets(n)
        .all(|m| traces.iter().all(|t| t.meets(m)))
}

/// The literal class `{F₁ ∩ F₂ : F_i ∈ 𝓕_i, F₁ ∩ F₂ ≠ ∅}` from explicit member lists.
pub fn literal_meet_class(
    members1: &[ExplicitSet],
    members2: &[ExplicitSet],
) -> BTreeSet<ExplicitSet> {
    members1
        .iter()
        .flat_map(|a| members2.iter().map(move |b| a.intersection(*b)))
        .filter(|s| !s.is_empty())
        .collect()
}

/// The literal class `{F₁ ∪ F₂ : F_i ∈ 𝓕_i}` from explicit member lists.
pub fn literal_join_class(
    members1: &[ExplicitSet],
    members2: &[ExplicitSet],
) -> BTreeSet<ExplicitSet> {
    members1
        .iter()
        .flat_map(|a| members2.iter().map(move |b| a.union(*b)))
        .collect()
}
