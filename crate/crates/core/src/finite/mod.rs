//! The fully decidable model: a finite carrier `W ⊂ ℚⁿ` with explicit subsets.
//!
//! On a finite set every filter is principal, so a filter is determined by its
//! minimal member. Basic neighborhoods are only ever seen through their traces
//! `U ∩ W`, and because membership uses strict inequalities a trace changes
//! only when a radius crosses one of the finitely many critical values
//! `ρ_j(x - c)`. Sampling one radius between each pair of consecutive critical
//! values, plus one beyond the largest, realizes every distinct trace.

mod net;
pub mod oracle;
mod set;

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

pub use net::{net_cluster_finite, net_converges_finite, FiniteDirectedSet, FiniteNet};
pub use set::{ExplicitSet, MAX_CARRIER_POINTS};

use crate::error::FilterError;
use crate::lattice::{Rational, RationalVector, SpaceSpec};
use crate::topology::NeighborhoodSpec;
use crate::verdict::SemanticsMode;

/// Default bound on carrier size for exhaustive principal-filter enumeration.
pub const DEFAULT_EXHAUSTIVE_BOUND: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCarrier {
    name: String,
    points: Vec<RationalVector>,
    space: Arc<SpaceSpec>,
}

impl FiniteCarrier {
    pub fn new(
        name: impl Into<String>,
        points: Vec<RationalVector>,
        space: Arc<SpaceSpec>,
    ) -> Result<Self, FilterError> {
        let name = name.into();
        if points.is_empty() {
            return Err(FilterError::Input(format!("carrier {name} has no points")));
        }
        if points.len() > MAX_CARRIER_POINTS {
            return Err(FilterError::Input(format!(
                "carrier {name} has {} points (limit {MAX_CARRIER_POINTS})",
                points.len()
            )));
        }
        for p in &points {
            space.check_vector(p)?;
        }
        let distinct: BTreeSet<_> = points.iter().collect();
        if distinct.len() != points.len() {
            return Err(FilterError::Input(format!(
                "carrier {name} lists a point twice"
            )));
        }
        Ok(FiniteCarrier {
            name,
            points,
            space,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn points(&self) -> &[RationalVector] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &RationalVector {
        &self.points[i]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn space(&self) -> &Arc<SpaceSpec> {
        &self.space
    }

    pub fn full(&self) -> ExplicitSet {
        ExplicitSet::full(self.points.len())
    }

    pub fn index_of(&self, x: &RationalVector) -> Option<usize> {
        self.points.iter().position(|p| p == x)
    }

    /// Same points and space; names are labels only.
    pub fn same_universe(&self, other: &FiniteCarrier) -> bool {
        std::ptr::eq(self, other) || (self.points == other.points && self.space == other.space)
    }

    pub fn set_points(&self, s: ExplicitSet) -> Vec<&RationalVector> {
        s.indices()
            .filter(|&i| i < self.points.len())
            .map(|i| &self.points[i])
            .collect()
    }

    pub(crate) fn check_set(&self, s: ExplicitSet) -> Result<(), FilterError> {
        if !s.is_subset(self.full()) {
            return Err(FilterError::Input(format!(
                "set {s:?} is not a subset of carrier {}",
                self.name
            )));
        }
        Ok(())
    }
}

/// One distinct trace `U ∩ W` (or `(e + U) ∩ W`) together with a spec realizing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictedNeighborhood {
    pub set: ExplicitSet,
    pub spec: NeighborhoodSpec,
    /// Translation applied to `spec`: the zero vector under `ZeroNbhd`, the center under `Translated`.
    pub shift: RationalVector,
}

impl RestrictedNeighborhood {
    pub fn to_json(&self, carrier: &FiniteCarrier) -> serde_json::Value {
        json!({
            "set": self.set,
            "points": carrier.set_points(self.set),
            "spec": self.spec,
            "shift": self.shift,
        })
    }
}

/// Radii realizing every distinct trace of one pseudonorm ball, paired with the trace.
///
/// `distances[i]` is `ρ_j(x_i - shift)`. Radii must exceed `floor` (strictly).
fn radius_representatives(
    distances: &[Rational],
    floor: Option<&Rational>,
) -> Vec<(Rational, ExplicitSet)> {
    let mut critical: Vec<Rational> = distances.to_vec();
    critical.push(Rational::zero());
    if let Some(f) = floor {
        critical.push(f.clone());
    }
    critical.sort();
    critical.dedup();
    let mut reps: Vec<Rational> = critical
        .windows(2)
        .map(|w| w[0].midpoint(&w[1]))
        .collect();
    reps.push(critical.last().expect("nonempty") + Rational::one());
    reps.into_iter()
        .filter(|eps| floor.is_none_or(|f| eps > f))
        .map(|eps| {
            let set = ExplicitSet::from_indices(
                distances
                    .iter()
                    .enumerate()
                    .filter(|(_, d)| **d < eps)
                    .map(|(i, _)| i),
            );
            (eps, set)
        })
        .collect()
}

/// Every distinct restricted neighborhood qualifying for `center` under `mode`.
///
/// `ZeroNbhd`: traces `U ∩ W` of basic zero neighborhoods with `center ∈ U`.
/// `Translated`: traces `(center + U) ∩ W`. The result is deduplicated,
/// complete, and sorted by size then by bitmask.
pub fn enumerate_restricted_neighborhoods(
    carrier: &FiniteCarrier,
    center: &RationalVector,
    mode: SemanticsMode,
) -> Result<Vec<RestrictedNeighborhood>, FilterError> {
    let space = carrier.space();
    space.check_vector(center)?;
    let family = space.family();
    let shift = match mode {
        SemanticsMode::ZeroNbhd => space.zero(),
        SemanticsMode::Translated => center.clone(),
    };
    let mut per_index = Vec::with_capacity(family.len());
    for (j, rho) in family.members().iter().enumerate() {
        let distances = carrier
            .points()
            .iter()
            .map(|x| rho.evaluate(&x.try_sub(&shift)?))
            .collect::<Result<Vec<_>, _>>()?;
        let floor = match mode {
            SemanticsMode::ZeroNbhd => Some(rho.evaluate(center)?),
            SemanticsMode::Translated => None,
        };
        per_index.push((j, radius_representatives(&distances, floor.as_ref())));
    }

    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut choice = vec![0usize; per_index.len()];
    loop {
        let set = choice
            .iter()
            .zip(&per_index)
            .fold(carrier.full(), |acc, (&c, (_, reps))| acc.intersection(reps[c].1));
        if seen.insert(set) {
            let constraints = choice
                .iter()
                .zip(&per_index)
                .map(|(&c, (j, reps))| (*j, reps[c].0.clone()))
                .collect();
            out.push(RestrictedNeighborhood {
                set,
                spec: NeighborhoodSpec::new(constraints)?,
                shift: shift.clone(),
            });
        }
        // Odometer over the per-index radius choices.
        let mut k = 0;
        loop {
            if k == choice.len() {
                out.sort_by_key(|n| (n.set.len(), n.set));
                return Ok(out);
            }
            choice[k] += 1;
            if choice[k] < per_index[k].1.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Intersection of all qualifying traces: the minset of the neighborhood filter.
pub fn minimal_neighborhood(neighborhoods: &[RestrictedNeighborhood], full: ExplicitSet) -> ExplicitSet {
    neighborhoods
        .iter()
        .fold(full, |acc, n| acc.intersection(n.set))
}

/// `up(minset)` converges to `center`: the minset lies inside every qualifying trace.
pub fn converges_finite(
    carrier: &FiniteCarrier,
    minset: ExplicitSet,
    center: &RationalVector,
    mode: SemanticsMode,
) -> Result<bool, FilterError> {
    Ok(convergence_witness(carrier, minset, center, mode)?.is_none())
}

/// The first qualifying trace that does not contain `minset`, if any.
pub fn convergence_witness(
    carrier: &FiniteCarrier,
    minset: ExplicitSet,
    center: &RationalVector,
    mode: SemanticsMode,
) -> Result<Option<RestrictedNeighborhood>, FilterError> {
    let nbhds = enumerate_restricted_neighborhoods(carrier, center, mode)?;
    Ok(nbhds.into_iter().find(|n| !minset.is_subset(n.set)))
}

/// `center` is a cluster point of `up(minset)`: every qualifying trace meets the minset.
pub fn cluster_finite(
    carrier: &FiniteCarrier,
    minset: ExplicitSet,
    center: &RationalVector,
    mode: SemanticsMode,
) -> Result<bool, FilterError> {
    let nbhds = enumerate_restricted_neighborhoods(carrier, center, mode)?;
    Ok(nbhds.iter().all(|n| n.set.meets(minset)))
}

/// Minsets of every principal filter `up(S)`, `S ⊆ W` nonempty, each exactly once.
pub fn all_principal_minsets(
    carrier: &FiniteCarrier,
    bound: usize,
) -> Result<impl Iterator<Item = ExplicitSet>, FilterError> {
    if carrier.len() > bound {
        return Err(FilterError::Input(format!(
            "carrier {} has {} points; exhaustive enumeration is bounded at {bound}",
            carrier.name(),
            carrier.len()
        )));
    }
    Ok(ExplicitSet::all_subsets(carrier.len()).skip(1))
}

/// A total map between two finite carriers, given by point indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMap {
    name: String,
    from: Arc<FiniteCarrier>,
    to: Arc<FiniteCarrier>,
    images: Vec<usize>,
}

impl FiniteMap {
    pub fn new(
        name: impl Into<String>,
        from: Arc<FiniteCarrier>,
        to: Arc<FiniteCarrier>,
        images: Vec<usize>,
    ) -> Result<Self, FilterError> {
        let name = name.into();
        if images.len() != from.len() {
            return Err(FilterError::Input(format!(
                "map {name} gives {} images for {} points",
                images.len(),
                from.len()
            )));
        }
        if let Some(bad) = images.iter().find(|&&i| i >= to.len()) {
            return Err(FilterError::Input(format!(
                "map {name} sends a point to index {bad}, outside {}",
                to.name()
            )));
        }
        Ok(FiniteMap {
            name,
            from,
            to,
            images,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn from(&self) -> &Arc<FiniteCarrier> {
        &self.from
    }

    pub fn to(&self) -> &Arc<FiniteCarrier> {
        &self.to
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn image(&self, s: ExplicitSet) -> ExplicitSet {
        ExplicitSet::from_indices(s.indices().map(|i| self.images[i]))
    }

    pub fn preimage(&self, s: ExplicitSet) -> ExplicitSet {
        ExplicitSet::from_indices(
            self.images
                .iter()
                .enumerate()
                .filter(|(_, &y)| s.contains(y))
                .map(|(i, _)| i),
        )
    }

    /// Every map `W₁ → W₂`, in lexicographic order of image tuples.
    pub fn all_maps(
        from: &Arc<FiniteCarrier>,
        to: &Arc<FiniteCarrier>,
    ) -> impl Iterator<Item = FiniteMap> {
        let (n, m) = (from.len(), to.len());
        let total = (m as u64).pow(n as u32);
        let (from, to) = (from.clone(), to.clone());
        (0..total).map(move |mut code| {
            let mut images = vec![0; n];
            for slot in images.iter_mut().rev() {
                *slot = (code % m as u64) as usize;
                code /= m as u64;
            }
            FiniteMap {
                name: format!("{}->{}#{:?}", from.name(), to.name(), images),
                from: from.clone(),
                to: to.clone(),
                images,
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuityResult {
    pub continuous: bool,
    /// On failure: the point `e`, and a qualifying trace around `f(e)` whose
    /// preimage contains no qualifying trace around `e`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

/// Finite topological continuity: for each `e` and each qualifying trace `N`
/// around `f(e)`, the preimage `f⁻¹(N)` contains a qualifying trace around `e`.
pub fn check_continuity_finite(
    map: &FiniteMap,
    mode: SemanticsMode,
) -> Result<ContinuityResult, FilterError> {
    for (i, e) in map.from.points().iter().enumerate() {
        let fe = map.to.point(map.images[i]);
        let source = enumerate_restricted_neighborhoods(&map.from, e, mode)?;
        for n in enumerate_restricted_neighborhoods(&map.to, fe, mode)? {
            let pre = map.preimage(n.set);
            if !source.iter().any(|s| s.set.is_subset(pre)) {
                return Ok(ContinuityResult {
                    continuous: false,
                    witness: Some(json!({
                        "map": map.images,
                        "e": e,
                        "f_e": fe,
                        "neighborhood": n.to_json(&map.to),
                        "preimage": pre,
                    })),
                });
            }
        }
    }
    Ok(ContinuityResult {
        continuous: true,
        witness: None,
    })
}

/// Cached qualifying traces around every point of a carrier, for one mode.
#[derive(Clone, Debug)]
pub struct NeighborhoodTable {
    pub mode: SemanticsMode,
    pub per_point: Vec<Vec<RestrictedNeighborhood>>,
    pub minimal: Vec<ExplicitSet>,
}

impl NeighborhoodTable {
    pub fn build(carrier: &FiniteCarrier, mode: SemanticsMode) -> Result<Self, FilterError> {
        let mut per_point = Vec::with_capacity(carrier.len());
        let mut minimal = Vec::with_capacity(carrier.len());
        for p in carrier.points() {
            let nbhds = enumerate_restricted_neighborhoods(carrier, p, mode)?;
            minimal.push(minimal_neighborhood(&nbhds, carrier.full()));
            per_point.push(nbhds);
        }
        Ok(NeighborhoodTable {
            mode,
            per_point,
            minimal,
        })
    }

    pub fn converges(&self, minset: ExplicitSet, point: usize) -> bool {
        self.per_point[point].iter().all(|n| minset.is_subset(n.set))
    }

    pub fn cluster(&self, minset: ExplicitSet, point: usize) -> bool {
        self.per_point[point].iter().all(|n| n.set.meets(minset))
    }

    pub fn convergence_witness(
        &self,
        minset: ExplicitSet,
        point: usize,
    ) -> Option<&RestrictedNeighborhood> {
        self.per_point[point].iter().find(|n| !minset.is_subset(n.set))
    }

    pub fn cluster_witness(&self, minset: ExplicitSet, point: usize) -> Option<&RestrictedNeighborhood> {
        self.per_point[point].iter().find(|n| !n.set.meets(minset))
    }
}
