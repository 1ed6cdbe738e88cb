//! Filters, filter bases, the standard constructions, and the two convergence semantics.
//!
//! A filter is a value with a membership query. On a finite carrier every
//! filter is principal and [`Filter::minset`] recovers the generating set;
//! sequence filters answer queries about [`Region`]s through the eventual-sign
//! decision procedure.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::FilterError;
use crate::finite::{
    enumerate_restricted_neighborhoods, minimal_neighborhood, ExplicitSet, FiniteCarrier,
    FiniteMap, FiniteNet, RestrictedNeighborhood,
};
use crate::lattice::{RationalVector, SpaceSpec};
use crate::sequence::{self, PolySequence, Region};
use crate::verdict::{SemanticsMode, Status, Verdict};

/// Where a filter's sets live.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Universe {
    Finite(Arc<FiniteCarrier>),
    Space(Arc<SpaceSpec>),
}

impl Universe {
    pub fn space(&self) -> &Arc<SpaceSpec> {
        match self {
            Universe::Finite(c) => c.space(),
            Universe::Space(s) => s,
        }
    }

    pub fn same(&self, other: &Universe) -> bool {
        match (self, other) {
            (Universe::Finite(a), Universe::Finite(b)) => a.same_universe(b),
            (Universe::Space(a), Universe::Space(b)) => a == b,
            _ => false,
        }
    }
}

/// A set handed to [`Filter::member`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuerySet {
    Explicit(ExplicitSet),
    Region(Region),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FilterBase {
    Explicit {
        carrier: Arc<FiniteCarrier>,
        elements: Vec<ExplicitSet>,
    },
    /// Tails `{x_α : α >= β}` of a finite net.
    NetTails(Arc<FiniteNet>),
    /// Tails `{x_k : k >= m}` of a sequence.
    SequenceTails(Arc<PolySequence>),
}

impl FilterBase {
    fn universe(&self) -> Universe {
        match self {
            FilterBase::Explicit { carrier, .. } => Universe::Finite(carrier.clone()),
            FilterBase::NetTails(net) => Universe::Finite(net.carrier().clone()),
            FilterBase::SequenceTails(s) => Universe::Space(s.space().clone()),
        }
    }

    /// The base elements, for finite bases.
    pub fn elements(&self) -> Option<Vec<ExplicitSet>> {
        match self {
            FilterBase::Explicit { elements, .. } => Some(elements.clone()),
            FilterBase::NetTails(net) => Some(net.tails()),
            FilterBase::SequenceTails(_) => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            FilterBase::Explicit { carrier, elements } => {
                json!({"carrier": carrier.name(), "elements": elements})
            }
            FilterBase::NetTails(net) => json!({"tails": net.to_json()}),
            FilterBase::SequenceTails(s) => json!({"tails": {"sequence": s.name()}}),
        }
    }
}

/// Checks nonemptiness, nonempty elements, and that every pairwise
/// intersection contains some element. Failures carry the offending pair.
pub fn validate_base(base: &FilterBase) -> Verdict {
    const CLAIM: &str = "filter-base";
    if let FilterBase::NetTails(net) = base {
        if let Some((a, b)) = net.index().directedness_witness() {
            return Verdict::failed(
                CLAIM,
                Status::Counterexample,
                json!({"axiom": "directed", "indices": [a, b]}),
            );
        }
    }
    let Some(elements) = base.elements() else {
        // Sequence tails form a decreasing chain of nonempty sets.
        return Verdict::holds(CLAIM);
    };
    if elements.is_empty() {
        return Verdict::failed(CLAIM, Status::Counterexample, json!({"axiom": "nonempty"}));
    }
    if let Some(i) = elements.iter().position(|b| b.is_empty()) {
        return Verdict::failed(
            CLAIM,
            Status::Counterexample,
            json!({"axiom": "elements-nonempty", "element": i}),
        );
    }
    for (i, b1) in elements.iter().enumerate() {
        for (j, b2) in elements.iter().enumerate().skip(i + 1) {
            let meet = b1.intersection(*b2);
            if !elements.iter().any(|b| b.is_subset(meet)) {
                return Verdict::failed(
                    CLAIM,
                    Status::Counterexample,
                    json!({
                        "axiom": "intersection-dominated",
                        "pair": [i, j],
                        "sets": [b1, b2],
                        "intersection": meet,
                    }),
                );
            }
        }
    }
    Verdict::holds(CLAIM)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Filter {
    /// `up(minset)` on a finite carrier.
    Principal {
        carrier: Arc<FiniteCarrier>,
        minset: ExplicitSet,
    },
    /// The elementary filter of a sequence.
    SequenceTail(Arc<PolySequence>),
    /// `𝒩_e` under one semantics. On a finite carrier the minimal member is cached.
    Neighborhood {
        center: RationalVector,
        mode: SemanticsMode,
        universe: Universe,
        minset: Option<ExplicitSet>,
    },
    Generated(FilterBase),
    /// `{B : f⁻¹(B) ∈ inner}`.
    Pushforward {
        map: Arc<FiniteMap>,
        inner: Box<Filter>,
    },
    /// `{F₁ ∪ F₂}`, which as a family is `𝓕₁ ∩ 𝓕₂`.
    Join(Box<Filter>, Box<Filter>),
    /// `{F₁ ∩ F₂}`; only built when no such intersection is empty.
    Meet(Box<Filter>, Box<Filter>),
}

/// `{x ∈ W : x ∈ region}`.
pub fn restrict(region: &Region, carrier: &FiniteCarrier) -> Result<ExplicitSet, FilterError> {
    let mut out = ExplicitSet::EMPTY;
    for (i, p) in carrier.points().iter().enumerate() {
        if region.contains(carrier.space(), p)? {
            out = out.with(i);
        }
    }
    Ok(out)
}

impl Filter {
    pub fn principal(carrier: Arc<FiniteCarrier>, minset: ExplicitSet) -> Result<Self, FilterError> {
        carrier.check_set(minset)?;
        if minset.is_empty() {
            return Err(FilterError::construction(
                "empty-set-excluded",
                json!({"carrier": carrier.name(), "minset": minset}),
            ));
        }
        Ok(Filter::Principal { carrier, minset })
    }

    pub fn universe(&self) -> Universe {
        match self {
            Filter::Principal { carrier, .. } => Universe::Finite(carrier.clone()),
            Filter::SequenceTail(s) => Universe::Space(s.space().clone()),
            Filter::Neighborhood { universe, .. } => universe.clone(),
            Filter::Generated(base) => base.universe(),
            Filter::Pushforward { map, .. } => Universe::Finite(map.to().clone()),
            Filter::Join(a, _) | Filter::Meet(a, _) => a.universe(),
        }
    }

    pub fn carrier(&self) -> Option<Arc<FiniteCarrier>> {
        match self.universe() {
            Universe::Finite(c) => Some(c),
            Universe::Space(_) => None,
        }
    }

    fn explicit_query(&self, carrier: &FiniteCarrier, s: &QuerySet) -> Result<ExplicitSet, FilterError> {
        match s {
            QuerySet::Explicit(set) => {
                carrier.check_set(*set)?;
                Ok(*set)
            }
            QuerySet::Region(r) => restrict(r, carrier),
        }
    }

    /// `S ∈ 𝓕`.
    pub fn member(&self, s: &QuerySet) -> Result<bool, FilterError> {
        match self {
            Filter::Principal { carrier, minset } => {
                Ok(minset.is_subset(self.explicit_query(carrier, s)?))
            }
            Filter::SequenceTail(seq) | Filter::Generated(FilterBase::SequenceTails(seq)) => match s {
                QuerySet::Region(r) => Ok(sequence::eventually_in_region(seq, r)?.truth),
                QuerySet::Explicit(_) => Err(FilterError::Unsupported(
                    "explicit sets are not subsets of a sequence's space".into(),
                )),
            },
            Filter::Neighborhood {
                center,
                mode,
                universe,
                minset,
            } => match universe {
                Universe::Finite(carrier) => {
                    let m = minset.expect("finite neighborhood filters cache their minset");
                    Ok(m.is_subset(self.explicit_query(carrier, s)?))
                }
                Universe::Space(space) => space_nbhd_member(space, center, *mode, s),
            },
            Filter::Generated(base) => {
                let carrier = match base.universe() {
                    Universe::Finite(c) => c,
                    Universe::Space(_) => unreachable!("sequence tails handled above"),
                };
                let target = self.explicit_query(&carrier, s)?;
                let elements = base.elements().expect("finite base");
                Ok(elements.iter().any(|b| b.is_subset(target)))
            }
            Filter::Pushforward { map, inner } => {
                let target = self.explicit_query(map.to(), s)?;
                inner.member(&QuerySet::Explicit(map.preimage(target)))
            }
            Filter::Join(a, b) => Ok(a.member(s)? && b.member(s)?),
            Filter::Meet(a, b) => {
                let carrier = self.carrier().ok_or_else(|| {
                    FilterError::Unsupported("meet is only built on finite carriers".into())
                })?;
                let target = self.explicit_query(&carrier, s)?;
                Ok(a.minset()?.intersection(b.minset()?).is_subset(target))
            }
        }
    }

    /// The minimal member of a filter on a finite carrier.
    pub fn minset(&self) -> Result<ExplicitSet, FilterError> {
        let s = match self {
            Filter::Principal { minset, .. } => *minset,
            Filter::Neighborhood {
                minset: Some(m), ..
            } => *m,
            Filter::Generated(base) => {
                let carrier = self.carrier().ok_or_else(|| {
                    FilterError::Unsupported("sequence filters have no minimal member".into())
                })?;
                let elements = base.elements().expect("finite base");
                let meet = elements
                    .iter()
                    .fold(carrier.full(), |acc, b| acc.intersection(*b));
                // A valid base contains its own total intersection.
                if !elements.contains(&meet) {
                    return Err(FilterError::construction(
                        "intersection-dominated",
                        json!({"base": base.to_json(), "intersection": meet}),
                    ));
                }
                meet
            }
            Filter::Pushforward { map, inner } => map.image(inner.minset()?),
            Filter::Join(a, b) => a.minset()?.union(b.minset()?),
            Filter::Meet(a, b) => a.minset()?.intersection(b.minset()?),
            Filter::SequenceTail(_) | Filter::Neighborhood { .. } => {
                return Err(FilterError::Unsupported(
                    "only filters on finite carriers have a minimal member".into(),
                ))
            }
        };
        if s.is_empty() {
            return Err(FilterError::construction(
                "empty-set-excluded",
                json!({"filter": self.to_json()}),
            ));
        }
        Ok(s)
    }

    /// The equivalent `Principal` value, for finite filters.
    pub fn principal_reduce(&self) -> Result<Filter, FilterError> {
        let carrier = self
            .carrier()
            .ok_or_else(|| FilterError::Unsupported("not a finite filter".into()))?;
        Filter::principal(carrier, self.minset()?)
    }

    pub fn to_json(&self) -> Value {
        match self {
            Filter::Principal { carrier, minset } => {
                json!({"principal": {"carrier": carrier.name(), "minset": minset}})
            }
            Filter::SequenceTail(s) => json!({"tail": {"sequence": s.name()}}),
            Filter::Neighborhood { center, mode, .. } => {
                json!({"nbhd": {"center": center, "mode": mode}})
            }
            Filter::Generated(base) => json!({"generated": base.to_json()}),
            Filter::Pushforward { map, inner } => {
                json!({"pushforward": {"map": map.name(), "filter": inner.to_json()}})
            }
            Filter::Join(a, b) => json!({"join": [a.to_json(), b.to_json()]}),
            Filter::Meet(a, b) => json!({"meet": [a.to_json(), b.to_json()]}),
        }
    }
}

/// Membership in `𝒩_e` on the whole space, for the region shapes where it reduces to a point test.
///
/// Basic sets are open, so `Translated`: `c + V ∈ 𝒩_e` iff `e ∈ c + V`.
/// `ZeroNbhd`: `V ∈ 𝒩_e` iff `e ∈ V` (take `U = V`).
fn space_nbhd_member(
    space: &SpaceSpec,
    e: &RationalVector,
    mode: SemanticsMode,
    s: &QuerySet,
) -> Result<bool, FilterError> {
    let QuerySet::Region(region) = s else {
        return Err(FilterError::Unsupported(
            "explicit sets are not subsets of the space".into(),
        ));
    };
    match region {
        Region::Empty => Ok(false),
        Region::Whole => Ok(true),
        Region::Ball { center, spec } => {
            if mode == SemanticsMode::ZeroNbhd && !center.is_zero() {
                return Err(FilterError::Unsupported(
                    "zero-neighborhood filters answer queries about zero-centered balls only".into(),
                ));
            }
            Ok(spec.contains_translated(space.family(), center, e)?)
        }
        Region::Boxes(_) => Err(FilterError::Unsupported(
            "box queries against a neighborhood filter on the whole space".into(),
        )),
    }
}

/// The filter generated by a validated base.
pub fn generate(base: FilterBase) -> Result<Filter, FilterError> {
    let verdict = validate_base(&base);
    if !verdict.is_holds() {
        let axiom = verdict.witness["axiom"].as_str().unwrap_or("filter-base").to_string();
        return Err(FilterError::construction(
            axiom,
            json!({"base": base.to_json(), "detail": verdict.witness}),
        ));
    }
    Ok(Filter::Generated(base))
}

/// The elementary filter of a finite net: generated by its tails.
pub fn associated_filter_finite(net: &Arc<FiniteNet>) -> Result<Filter, FilterError> {
    if let Some((a, b)) = net.index().directedness_witness() {
        return Err(FilterError::Input(format!(
            "index set is not directed: {a} and {b} have no common upper bound"
        )));
    }
    generate(FilterBase::NetTails(net.clone()))
}

fn same_universe(a: &Filter, b: &Filter) -> Result<(), FilterError> {
    if a.universe().same(&b.universe()) {
        Ok(())
    } else {
        Err(FilterError::UniverseMismatch)
    }
}

pub fn join_filter(f1: &Filter, f2: &Filter) -> Result<Filter, FilterError> {
    same_universe(f1, f2)?;
    Ok(Filter::Join(Box::new(f1.clone()), Box::new(f2.clone())))
}

/// `{F₁ ∩ F₂}`. On a finite carrier this is a filter iff `S₁ ∩ S₂ ≠ ∅`.
pub fn meet_filter(f1: &Filter, f2: &Filter) -> Result<Filter, FilterError> {
    same_universe(f1, f2)?;
    if f1.carrier().is_none() {
        return Err(FilterError::Unsupported(
            "meet is decided only on finite carriers".into(),
        ));
    }
    let (s1, s2) = (f1.minset()?, f2.minset()?);
    if !s1.meets(s2) {
        return Err(FilterError::construction(
            "empty-set-excluded",
            json!({"members": [s1, s2], "intersection": s1.intersection(s2)}),
        ));
    }
    Ok(Filter::Meet(Box::new(f1.clone()), Box::new(f2.clone())))
}

pub fn pushforward(map: &Arc<FiniteMap>, f: &Filter) -> Result<Filter, FilterError> {
    match f.carrier() {
        Some(c) if c.same_universe(map.from()) => Ok(Filter::Pushforward {
            map: map.clone(),
            inner: Box::new(f.clone()),
        }),
        _ => Err(FilterError::UniverseMismatch),
    }
}

/// `𝒩_e` under `mode`. On a finite carrier its minimal member is the
/// intersection of all qualifying traces, which always contains `e` or `0`.
pub fn neighborhood_filter(
    e: &RationalVector,
    universe: &Universe,
    mode: SemanticsMode,
) -> Result<Filter, FilterError> {
    universe.space().check_vector(e)?;
    let minset = match universe {
        Universe::Finite(carrier) => {
            let nbhds = enumerate_restricted_neighborhoods(carrier, e, mode)?;
            let m = minimal_neighborhood(&nbhds, carrier.full());
            if m.is_empty() {
                return Err(FilterError::construction(
                    "empty-set-excluded",
                    json!({"center": e, "mode": mode, "note": "traces have empty intersection on this carrier"}),
                ));
            }
            Some(m)
        }
        Universe::Space(_) => None,
    };
    Ok(Filter::Neighborhood {
        center: e.clone(),
        mode,
        universe: universe.clone(),
        minset,
    })
}

/// Qualifying trace around `e` that is not a member of `f`, if any.
pub fn convergence_witness(
    f: &Filter,
    e: &RationalVector,
    mode: SemanticsMode,
) -> Result<Option<RestrictedNeighborhood>, FilterError> {
    let carrier = f
        .carrier()
        .ok_or_else(|| FilterError::Unsupported("witness search needs a finite carrier".into()))?;
    for n in enumerate_restricted_neighborhoods(&carrier, e, mode)? {
        if !f.member(&QuerySet::Explicit(n.set))? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Every qualifying basic neighborhood of `e` belongs to `f`.
pub fn converges(f: &Filter, e: &RationalVector, mode: SemanticsMode) -> Result<bool, FilterError> {
    if f.carrier().is_some() {
        return Ok(convergence_witness(f, e, mode)?.is_none());
    }
    let space = f.universe().space().clone();
    space.check_vector(e)?;
    match f {
        Filter::SequenceTail(seq) | Filter::Generated(FilterBase::SequenceTails(seq)) => {
            sequence::filter_converges_seq(seq, e, mode)
        }
        Filter::Neighborhood { center, mode: m, .. } => {
            if *m != mode {
                return Err(FilterError::Unsupported(
                    "comparing neighborhood filters across semantics".into(),
                ));
            }
            let family = space.family();
            match mode {
                SemanticsMode::Translated => Ok(family
                    .evaluate_all(&center.try_sub(e)?)?
                    .iter()
                    .all(|r| r.is_zero())),
                SemanticsMode::ZeroNbhd => {
                    let at_c = family.evaluate_all(center)?;
                    let at_e = family.evaluate_all(e)?;
                    Ok(at_c.iter().zip(&at_e).all(|(c, e)| c <= e))
                }
            }
        }
        // The test family does not depend on the filter, so joins converge componentwise.
        Filter::Join(a, b) => Ok(converges(a, e, mode)? && converges(b, e, mode)?),
        _ => Err(FilterError::Unsupported(format!(
            "convergence of {} on the whole space",
            f.to_json()
        ))),
    }
}

/// Qualifying trace around `e` that misses the minimal member of `f`, if any.
pub fn cluster_witness(
    f: &Filter,
    e: &RationalVector,
    mode: SemanticsMode,
) -> Result<Option<RestrictedNeighborhood>, FilterError> {
    let carrier = f
        .carrier()
        .ok_or_else(|| FilterError::Unsupported("witness search needs a finite carrier".into()))?;
    let m = f.minset()?;
    Ok(enumerate_restricted_neighborhoods(&carrier, e, mode)?
        .into_iter()
        .find(|n| !n.set.meets(m)))
}

/// Every qualifying neighborhood meets every member. Members are reduced to the
/// minimal one on finite carriers, since every member contains it.
pub fn is_cluster_point(
    f: &Filter,
    e: &RationalVector,
    mode: SemanticsMode,
) -> Result<bool, FilterError> {
    if f.carrier().is_some() {
        return Ok(cluster_witness(f, e, mode)?.is_none());
    }
    let space = f.universe().space().clone();
    space.check_vector(e)?;
    match f {
        Filter::SequenceTail(seq) | Filter::Generated(FilterBase::SequenceTails(seq)) => {
            sequence::cluster_point_seq(seq, e, mode)
        }
        Filter::Neighborhood { center, mode: m, .. } if *m == mode => match mode {
            SemanticsMode::Translated => Ok(space
                .family()
                .evaluate_all(&center.try_sub(e)?)?
                .iter()
                .all(|r| r.is_zero())),
            // Any two zero neighborhoods share 0.
            SemanticsMode::ZeroNbhd => Ok(true),
        },
        _ => Err(FilterError::Unsupported(format!(
            "cluster points of {} on the whole space",
            f.to_json()
        ))),
    }
}

/// A filter `G ⊇ f` converging to `e`, built from the base `{U ∩ F}`.
///
/// Fails with a construction error naming a disjoint `(U, F)` when `e` is not a cluster point.
pub fn finer_filter_witness(
    f: &Filter,
    e: &RationalVector,
    mode: SemanticsMode,
) -> Result<Filter, FilterError> {
    let Some(carrier) = f.carrier() else {
        return if is_cluster_point(f, e, mode)? {
            // For sequences a cluster point is a limit, so F itself works.
            Ok(f.clone())
        } else {
            Err(FilterError::construction(
                "empty-set-excluded",
                json!({"filter": f.to_json(), "point": e, "mode": mode}),
            ))
        };
    };
    let s = f.minset()?;
    let nbhds = enumerate_restricted_neighborhoods(&carrier, e, mode)?;
    if let Some(n) = nbhds.iter().find(|n| !n.set.meets(s)) {
        return Err(FilterError::construction(
            "empty-set-excluded",
            json!({"neighborhood": n.to_json(&carrier), "member": s}),
        ));
    }
    // Members F ⊇ S only enlarge U ∩ F, so U ∩ S generates the same filter.
    let mut elements: Vec<ExplicitSet> = nbhds.iter().map(|n| n.set.intersection(s)).collect();
    elements.sort();
    elements.dedup();
    generate(FilterBase::Explicit { carrier, elements })
}

/// Every member of `f1` is a member of `f2`.
pub fn is_subfilter(f1: &Filter, f2: &Filter) -> Result<bool, FilterError> {
    same_universe(f1, f2)?;
    if f1.carrier().is_some() {
        return Ok(f2.minset()?.is_subset(f1.minset()?));
    }
    match f1 {
        Filter::Neighborhood { center, mode, .. } => converges(f2, center, *mode),
        _ => Err(FilterError::Unsupported(
            "inclusion between these filters on the whole space".into(),
        )),
    }
}

pub fn filters_equal(f1: &Filter, f2: &Filter) -> Result<bool, FilterError> {
    same_universe(f1, f2)?;
    if f1.carrier().is_some() {
        return Ok(f1.minset()? == f2.minset()?);
    }
    Ok(is_subfilter(f1, f2)? && is_subfilter(f2, f1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{oracle, FiniteDirectedSet};
    use crate::topology::{NeighborhoodSpec, Pseudonorm, PseudonormFamily};

    fn line_space() -> Arc<SpaceSpec> {
        Arc::new(SpaceSpec::new(
            PseudonormFamily::new(1, vec![Pseudonorm::coord(0)]).unwrap(),
        ))
    }

    fn line(points: &[&str]) -> Arc<FiniteCarrier> {
        Arc::new(
            FiniteCarrier::new(
                "W",
                points.iter().map(|p| format!("[{p}]").parse().unwrap()).collect(),
                line_space(),
            )
            .unwrap(),
        )
    }

    fn v(s: &str) -> RationalVector {
        s.parse().unwrap()
    }

    fn up(w: &Arc<FiniteCarrier>, idx: &[usize]) -> Filter {
        Filter::principal(w.clone(), ExplicitSet::from_indices(idx.iter().copied())).unwrap()
    }

    fn set(idx: &[usize]) -> ExplicitSet {
        ExplicitSet::from_indices(idx.iter().copied())
    }

    #[test]
    fn base_validation() {
        let w = line(&["0", "1"]);
        let good = FilterBase::Explicit {
            carrier: w.clone(),
            elements: vec![set(&[0]), set(&[0, 1])],
        };
        assert!(validate_base(&good).is_holds());
        let g = generate(good).unwrap();
        assert_eq!(g.minset().unwrap(), set(&[0]));
        assert!(g.member(&QuerySet::Explicit(set(&[0, 1]))).unwrap());
        assert!(!g.member(&QuerySet::Explicit(ExplicitSet::EMPTY)).unwrap());

        let bad = FilterBase::Explicit {
            carrier: w.clone(),
            elements: vec![set(&[0]), set(&[1])],
        };
        let verdict = validate_base(&bad);
        assert_eq!(verdict.status, Status::Counterexample);
        assert_eq!(verdict.witness["pair"], json!([0, 1]));
        assert!(matches!(generate(bad), Err(FilterError::Construction { .. })));
    }

    #[test]
    fn net_tail_filters() {
        let w = line(&["0", "1", "2"]);
        let chain = FiniteDirectedSet::new(3, &[(0, 1), (1, 2)]).unwrap();
        let net = Arc::new(FiniteNet::new(chain, vec![0, 1, 2], w.clone()).unwrap());
        let f = associated_filter_finite(&net).unwrap();
        assert_eq!(f.minset().unwrap(), set(&[2]));

        let with_top = FiniteDirectedSet::new(3, &[(0, 2), (1, 2)]).unwrap();
        let net = Arc::new(FiniteNet::new(with_top, vec![0, 1, 2], w.clone()).unwrap());
        assert_eq!(associated_filter_finite(&net).unwrap().minset().unwrap(), set(&[2]));

        let anti = FiniteDirectedSet::from_relation(2, &[]).unwrap();
        let net = Arc::new(FiniteNet::new(anti, vec![0, 1], w).unwrap());
        assert!(associated_filter_finite(&net).is_err());
    }

    #[test]
    fn join_and_meet_on_principal_filters() {
        let w = line(&["0", "1", "2", "3"]);
        let a = up(&w, &[0, 1]);
        let b = up(&w, &[0, 2]);
        let j = join_filter(&a, &b).unwrap();
        assert_eq!(j.minset().unwrap(), set(&[0, 1, 2]));
        let m = meet_filter(&a, &b).unwrap();
        assert_eq!(m.minset().unwrap(), set(&[0]));
        assert!(filters_equal(&join_filter(&a, &a).unwrap(), &a).unwrap());
        assert!(filters_equal(&meet_filter(&a, &a).unwrap(), &a).unwrap());

        let err = meet_filter(&up(&w, &[1]), &up(&w, &[2])).unwrap_err();
        match err {
            FilterError::Construction { axiom, witness } => {
                assert_eq!(axiom, "empty-set-excluded");
                assert_eq!(witness["members"], json!([[1], [2]]));
            }
            other => panic!("unexpected {other:?}"),
        }

        // Family laws against explicit member lists.
        let ma = oracle::members(&a, &w).unwrap();
        let mb = oracle::members(&b, &w).unwrap();
        let mj: std::collections::BTreeSet<_> = oracle::members(&j, &w).unwrap().into_iter().collect();
        let both: std::collections::BTreeSet<_> = ma.iter().filter(|s| mb.contains(s)).copied().collect();
        assert_eq!(mj, both);
        assert_eq!(mj, oracle::literal_join_class(&ma, &mb));
    }

    #[test]
    fn pushforward_is_image() {
        let w1 = line(&["0", "1", "2", "3"]);
        let w2 = line(&["0", "1"]);
        let parity = Arc::new(FiniteMap::new("p", w1.clone(), w2.clone(), vec![0, 1, 0, 1]).unwrap());
        let f = up(&w1, &[0, 2]);
        let g = pushforward(&parity, &f).unwrap();
        assert_eq!(g.minset().unwrap(), set(&[0]));
        for s in ExplicitSet::all_subsets(2) {
            let by_def = f.member(&QuerySet::Explicit(parity.preimage(s))).unwrap();
            assert_eq!(g.member(&QuerySet::Explicit(s)).unwrap(), by_def);
        }
        let constant = Arc::new(FiniteMap::new("c", w1.clone(), w2, vec![1; 4]).unwrap());
        assert_eq!(pushforward(&constant, &f).unwrap().minset().unwrap(), set(&[1]));
    }

    #[test]
    fn neighborhood_filters() {
        let w = line(&["-1", "0"]);
        let u = Universe::Finite(w.clone());
        let n = neighborhood_filter(&v("[-1]"), &u, SemanticsMode::ZeroNbhd).unwrap();
        assert_eq!(n.minset().unwrap(), w.full());
        for mode in SemanticsMode::ALL {
            let n = neighborhood_filter(&v("[-1]"), &u, mode).unwrap();
            assert!(converges(&n, &v("[-1]"), mode).unwrap());
            assert!(n.member(&QuerySet::Explicit(w.full())).unwrap());
        }
        let z = neighborhood_filter(&v("[0]"), &u, SemanticsMode::ZeroNbhd).unwrap();
        let t = neighborhood_filter(&v("[0]"), &u, SemanticsMode::Translated).unwrap();
        assert!(filters_equal(&z, &t).unwrap());
    }

    #[test]
    fn convergence_and_cluster_examples() {
        let w = line(&["-1", "0", "1/2"]);
        let f = up(&w, &[0]);
        for mode in SemanticsMode::ALL {
            assert!(converges(&f, &v("[-1]"), mode).unwrap());
        }
        let g = up(&w, &[1]);
        assert!(converges(&g, &v("[1]"), SemanticsMode::ZeroNbhd).unwrap());
        assert!(!converges(&g, &v("[1]"), SemanticsMode::Translated).unwrap());

        let w = line(&["-1/2", "0", "2"]);
        assert!(!is_cluster_point(&up(&w, &[2]), &v("[0]"), SemanticsMode::Translated).unwrap());
        assert!(!is_cluster_point(&up(&w, &[0, 2]), &v("[0]"), SemanticsMode::Translated).unwrap());
    }

    #[test]
    fn finer_filter_examples() {
        let w = line(&["-1", "0", "1"]);
        let f = up(&w, &[0, 1, 2]);
        for mode in SemanticsMode::ALL {
            let g = finer_filter_witness(&f, &v("[0]"), mode).unwrap();
            assert!(is_subfilter(&f, &g).unwrap());
            assert!(converges(&g, &v("[0]"), mode).unwrap());
        }
        let err = finer_filter_witness(&up(&w, &[2]), &v("[-1]"), SemanticsMode::Translated);
        assert!(matches!(err, Err(FilterError::Construction { .. })));
    }

    #[test]
    fn subfilter_order() {
        let w = line(&["0", "1", "2"]);
        assert!(is_subfilter(&up(&w, &[0, 1]), &up(&w, &[0])).unwrap());
        assert!(!is_subfilter(&up(&w, &[0]), &up(&w, &[0, 1])).unwrap());
        assert!(!is_subfilter(&up(&w, &[0, 1]), &up(&w, &[1, 2])).unwrap());
        let other = line(&["5", "6"]);
        assert!(is_subfilter(&up(&w, &[0]), &up(&other, &[0])).is_err());
    }

    #[test]
    fn region_queries_on_finite_carriers() {
        let w = line(&["-1", "0", "1/2"]);
        let f = up(&w, &[1, 2]);
        let ball = Region::zero_ball(w.space(), NeighborhoodSpec::ball(0, "1".parse().unwrap()).unwrap());
        assert!(f.member(&QuerySet::Region(ball)).unwrap());
        assert!(!f.member(&QuerySet::Region(Region::Empty)).unwrap());
    }

    #[test]
    fn space_neighborhood_filters() {
        let space = line_space();
        let u = Universe::Space(space.clone());
        let n = neighborhood_filter(&v("[1]"), &u, SemanticsMode::Translated).unwrap();
        assert!(converges(&n, &v("[1]"), SemanticsMode::Translated).unwrap());
        assert!(!converges(&n, &v("[2]"), SemanticsMode::Translated).unwrap());
        let z = neighborhood_filter(&v("[0]"), &u, SemanticsMode::ZeroNbhd).unwrap();
        assert!(converges(&z, &v("[1]"), SemanticsMode::ZeroNbhd).unwrap());
        let seq = Arc::new(PolySequence::approaching("s", space, &v("[1]"), &v("[3]")));
        let tail = Filter::SequenceTail(seq);
        assert!(is_subfilter(&n, &tail).unwrap());
    }
}
