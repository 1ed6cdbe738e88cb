//! ℕ-indexed sequences whose coordinates are polynomials in `1/k`.
//!
//! Every membership predicate we ask about such a sequence (a strict pseudonorm
//! bound, a box face) reduces to the eventual sign of a polynomial in `t = 1/k`,
//! so each predicate is eventually constant and the threshold is computable.
//! Oscillating sequences are outside this class.

mod poly;

use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub use poly::{EventualSign, Poly, Sign};

use crate::error::FilterError;
use crate::filter::{Filter, QuerySet};
use crate::lattice::{Rational, RationalVector, SpaceSpec};
use crate::sampling;
use crate::topology::{NeighborhoodSpec, Pseudonorm};
use crate::verdict::SemanticsMode;

pub const DEFAULT_MAX_DEGREE: usize = 4;

/// Recorded alongside every sequence cluster verdict.
pub const FREQUENTLY_NOTE: &str =
    "membership predicates of polynomial sequences are eventually constant, so frequently = eventually";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySequence {
    name: String,
    space: Arc<SpaceSpec>,
    coords: Vec<Poly>,
}

impl PolySequence {
    pub fn new(
        name: impl Into<String>,
        space: Arc<SpaceSpec>,
        coords: Vec<Poly>,
        max_degree: usize,
    ) -> Result<Self, FilterError> {
        let name = name.into();
        if coords.len() != space.dim() {
            return Err(FilterError::Input(format!(
                "sequence {name} has {} coordinates in a space of dimension {}",
                coords.len(),
                space.dim()
            )));
        }
        if let Some(d) = coords.iter().filter_map(Poly::degree).max() {
            if d > max_degree {
                return Err(FilterError::Input(format!(
                    "sequence {name} has degree {d} (bound {max_degree})"
                )));
            }
        }
        Ok(PolySequence { name, space, coords })
    }

    /// The constant sequence `x_k = c`.
    pub fn constant(name: impl Into<String>, space: Arc<SpaceSpec>, c: &RationalVector) -> Self {
        PolySequence {
            name: name.into(),
            coords: c.coords().iter().map(|a| Poly::constant(a.clone())).collect(),
            space,
        }
    }

    /// `x_k = e + v/k`.
    pub fn approaching(
        name: impl Into<String>,
        space: Arc<SpaceSpec>,
        e: &RationalVector,
        v: &RationalVector,
    ) -> Self {
        PolySequence {
            name: name.into(),
            coords: e
                .coords()
                .iter()
                .zip(v.coords())
                .map(|(a, b)| Poly::new(vec![a.clone(), b.clone()]))
                .collect(),
            space,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &Arc<SpaceSpec> {
        &self.space
    }

    pub fn coords(&self) -> &[Poly] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// `x_k`, for `k >= 1`.
    pub fn at(&self, k: u64) -> RationalVector {
        RationalVector::new(self.coords.iter().map(|p| p.at_index(k)).collect())
    }

    /// The constant-term vector, which is the coordinatewise limit.
    pub fn limit(&self) -> RationalVector {
        RationalVector::new(self.coords.iter().map(Poly::constant_term).collect())
    }

    fn shifted(&self, c: &RationalVector) -> Vec<Poly> {
        self.coords
            .iter()
            .zip(c.coords())
            .map(|(p, a)| p.sub(&Poly::constant(a.clone())))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventualVerdict {
    /// Whether the predicate holds for all `k >= threshold`.
    pub truth: bool,
    pub threshold: u64,
}

impl EventualVerdict {
    fn and(self, other: EventualVerdict) -> EventualVerdict {
        match (self.truth, other.truth) {
            (true, true) => EventualVerdict {
                truth: true,
                threshold: self.threshold.max(other.threshold),
            },
            (false, _) => self,
            (true, false) => other,
        }
    }

    fn or(self, other: EventualVerdict) -> EventualVerdict {
        match (self.truth, other.truth) {
            (false, false) => EventualVerdict {
                truth: false,
                threshold: self.threshold.max(other.threshold),
            },
            (true, _) => self,
            (false, true) => other,
        }
    }
}

/// Eventual sign of `p(1/k)`.
pub fn eventual_sign(p: &Poly) -> EventualSign {
    p.eventual_sign()
}

/// `ρ(x_k) < eps` eventually, where `shifted` are the coordinate polynomials of `x_k - c`.
fn eventually_below(rho: &Pseudonorm, shifted: &[Poly], eps: &Rational) -> EventualVerdict {
    let dim = shifted.len();
    let weights = rho.weights(dim);
    // |q_i(1/k)| = s_i q_i(1/k) once k passes the sign threshold of q_i.
    let mut abs_terms = Vec::with_capacity(dim);
    let mut sign_threshold = 1u64;
    for (q, w) in shifted.iter().zip(&weights) {
        if w.is_zero() {
            continue;
        }
        let s = q.eventual_sign();
        sign_threshold = sign_threshold.max(s.threshold);
        abs_terms.push(q.scale(&(s.sign.as_rational() * w)));
    }
    let compare = |p: &Poly| {
        let gap = Poly::constant(eps.clone()).sub(p).eventual_sign();
        EventualVerdict {
            truth: gap.sign == Sign::Positive,
            threshold: gap.threshold.max(sign_threshold),
        }
    };
    if rho.is_sup_like() {
        abs_terms.iter().map(compare).fold(
            EventualVerdict {
                truth: true,
                threshold: sign_threshold,
            },
            EventualVerdict::and,
        )
    } else {
        let total = abs_terms.iter().fold(Poly::zero(), |acc, p| acc.add(p));
        compare(&total)
    }
}

/// Decides whether `x_k - center` eventually lies in the basic set `spec`.
pub fn eventually_in_ball(
    seq: &PolySequence,
    center: &RationalVector,
    spec: &NeighborhoodSpec,
) -> Result<EventualVerdict, FilterError> {
    seq.space.check_vector(center)?;
    let family = seq.space.family();
    spec.validate(family)?;
    let shifted = seq.shifted(center);
    let mut acc = EventualVerdict {
        truth: true,
        threshold: 1,
    };
    for (j, eps) in spec.constraints() {
        acc = acc.and(eventually_below(family.get(*j)?, &shifted, eps));
        if !acc.truth {
            break;
        }
    }
    Ok(acc)
}

/// `ZeroNbhd`: is `x_k ∈ U` eventually. `Translated`: is `x_k ∈ e + U` eventually.
pub fn eventually_in_nbhd(
    seq: &PolySequence,
    e: &RationalVector,
    spec: &NeighborhoodSpec,
    mode: SemanticsMode,
) -> Result<EventualVerdict, FilterError> {
    match mode {
        SemanticsMode::ZeroNbhd => eventually_in_ball(seq, &seq.space.zero(), spec),
        SemanticsMode::Translated => eventually_in_ball(seq, e, spec),
    }
}

/// One coordinate interval; a missing bound is unbounded on that side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<Rational>,
    #[serde(default)]
    pub lo_closed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<Rational>,
    #[serde(default)]
    pub hi_closed: bool,
}

impl Interval {
    pub fn contains(&self, x: &Rational) -> bool {
        let above = match &self.lo {
            None => true,
            Some(lo) if self.lo_closed => x >= lo,
            Some(lo) => x > lo,
        };
        let below = match &self.hi {
            None => true,
            Some(hi) if self.hi_closed => x <= hi,
            Some(hi) => x < hi,
        };
        above && below
    }

    fn eventually_contains(&self, q: &Poly) -> EventualVerdict {
        let mut acc = EventualVerdict {
            truth: true,
            threshold: 1,
        };
        if let Some(lo) = &self.lo {
            let s = q.sub(&Poly::constant(lo.clone())).eventual_sign();
            let ok = s.sign == Sign::Positive || (self.lo_closed && s.sign == Sign::Zero);
            acc = acc.and(EventualVerdict {
                truth: ok,
                threshold: s.threshold,
            });
        }
        if let Some(hi) = &self.hi {
            let s = Poly::constant(hi.clone()).sub(q).eventual_sign();
            let ok = s.sign == Sign::Positive || (self.hi_closed && s.sign == Sign::Zero);
            acc = acc.and(EventualVerdict {
                truth: ok,
                threshold: s.threshold,
            });
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalBox {
    pub intervals: Vec<Interval>,
}

impl RationalBox {
    pub fn contains(&self, x: &RationalVector) -> bool {
        self.intervals
            .iter()
            .zip(x.coords())
            .all(|(i, a)| i.contains(a))
    }
}

/// The set class the sequence backend can decide membership for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Empty,
    Whole,
    /// `center + U`; a basic zero neighborhood when `center = 0`.
    Ball {
        center: RationalVector,
        spec: NeighborhoodSpec,
    },
    /// Finite union of axis-aligned boxes.
    Boxes(Vec<RationalBox>),
}

impl Region {
    pub fn zero_ball(space: &SpaceSpec, spec: NeighborhoodSpec) -> Self {
        Region::Ball {
            center: space.zero(),
            spec,
        }
    }

    pub fn contains(&self, space: &SpaceSpec, x: &RationalVector) -> Result<bool, FilterError> {
        Ok(match self {
            Region::Empty => false,
            Region::Whole => true,
            Region::Ball { center, spec } => {
                spec.contains_translated(space.family(), center, x)?
            }
            Region::Boxes(boxes) => boxes.iter().any(|b| b.contains(x)),
        })
    }
}

/// `x_k ∈ region` eventually.
pub fn eventually_in_region(
    seq: &PolySequence,
    region: &Region,
) -> Result<EventualVerdict, FilterError> {
    match region {
        Region::Empty => Ok(EventualVerdict {
            truth: false,
            threshold: 1,
        }),
        Region::Whole => Ok(EventualVerdict {
            truth: true,
            threshold: 1,
        }),
        Region::Ball { center, spec } => eventually_in_ball(seq, center, spec),
        Region::Boxes(boxes) => {
            let mut acc = EventualVerdict {
                truth: false,
                threshold: 1,
            };
            for b in boxes {
                if b.intervals.len() != seq.dim() {
                    return Err(FilterError::Input(format!(
                        "box of dimension {} for a sequence of dimension {}",
                        b.intervals.len(),
                        seq.dim()
                    )));
                }
                let inside = b
                    .intervals
                    .iter()
                    .zip(seq.coords())
                    .map(|(i, q)| i.eventually_contains(q))
                    .fold(
                        EventualVerdict {
                            truth: true,
                            threshold: 1,
                        },
                        EventualVerdict::and,
                    );
                acc = acc.or(inside);
            }
            Ok(acc)
        }
    }
}

/// Evaluates membership directly at `k₀, k₀+1, 2k₀, 10k₀` and compares with the verdict.
pub fn spot_check(
    seq: &PolySequence,
    region: &Region,
    verdict: EventualVerdict,
) -> Result<bool, FilterError> {
    let k0 = verdict.threshold;
    for k in [k0, k0.saturating_add(1), k0.saturating_mul(2), k0.saturating_mul(10)] {
        if region.contains(&seq.space, &seq.at(k))? != verdict.truth {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `1/(2D)`, where `D` clears every denominator that can appear in a limit
/// `ρ_j(x_∞ - c)` or a reference value `ρ_j(e)`: two distinct such values differ by at least `1/D`.
fn critical_gap(seq: &PolySequence, e: &RationalVector) -> Rational {
    let dim = seq.dim();
    let weights: Vec<Rational> = seq
        .space
        .family()
        .members()
        .iter()
        .flat_map(|p| p.weights(dim))
        .collect();
    let limit = seq.limit();
    let point_den = Rational::denominator_lcm(limit.coords().iter().chain(e.coords()));
    let d: BigInt = Rational::denominator_lcm(&weights) * point_den;
    Rational::from_bigint(d * BigInt::from(2)).recip()
}

/// The finitely many basic neighborhoods that decide convergence to `e`.
///
/// `ZeroNbhd`: for each `j`, the ball `ρ_j < ρ_j(e) + δ`. `Translated`: for each
/// `j`, `e + {ρ_j < δ}`. With `δ = 1/(2D)` no limit value lies strictly between
/// the reference value and the test radius, so these are the hardest cases.
pub fn critical_test_regions(
    seq: &PolySequence,
    e: &RationalVector,
    mode: SemanticsMode,
) -> Result<Vec<Region>, FilterError> {
    seq.space.check_vector(e)?;
    let delta = critical_gap(seq, e);
    let family = seq.space.family();
    let mut out = Vec::with_capacity(family.len());
    for (j, rho) in family.members().iter().enumerate() {
        let region = match mode {
            SemanticsMode::ZeroNbhd => Region::Ball {
                center: seq.space.zero(),
                spec: NeighborhoodSpec::ball(j, rho.evaluate(e)? + &delta)?,
            },
            SemanticsMode::Translated => Region::Ball {
                center: e.clone(),
                spec: NeighborhoodSpec::ball(j, delta.clone())?,
            },
        };
        out.push(region);
    }
    Ok(out)
}

/// `lim_k ρ_j(x_k - c)` for every `j`, using continuity of the shipped pseudonorms.
pub fn pseudonorm_limits(
    seq: &PolySequence,
    c: &RationalVector,
) -> Result<Vec<Rational>, FilterError> {
    let diff = seq.limit().try_sub(c)?;
    Ok(seq.space.family().evaluate_all(&diff)?)
}

/// Sequence (net-side) convergence, decided from limits.
///
/// `Translated`: every `ρ_j(x_k - e) → 0`. `ZeroNbhd`: every basic `U ∋ e`
/// eventually contains the sequence, which holds iff `lim ρ_j(x_k) <= ρ_j(e)` for all `j`.
pub fn seq_converges(
    seq: &PolySequence,
    e: &RationalVector,
    mode: SemanticsMode,
) -> Result<bool, FilterError> {
    seq.space.check_vector(e)?;
    let family = seq.space.family();
    match mode {
        SemanticsMode::Translated => Ok(pseudonorm_limits(seq, e)?.iter().all(Rational::is_zero)),
        SemanticsMode::ZeroNbhd => {
            let limits = pseudonorm_limits(seq, &seq.space.zero())?;
            let at_e = family.evaluate_all(e)?;
            Ok(limits.iter().zip(&at_e).all(|(l, r)| l <= r))
        }
    }
}

/// Net-side cluster point: frequently in every qualifying neighborhood.
/// For this sequence class that coincides with [`seq_converges`]; see [`FREQUENTLY_NOTE`].
pub fn net_cluster_seq(
    seq: &PolySequence,
    e: &RationalVector,
    mode: SemanticsMode,
) -> Result<bool, FilterError> {
    seq_converges(seq, e, mode)
}

/// The elementary filter `{F : x_k ∈ F eventually}`.
pub fn associated_filter_seq(seq: &Arc<PolySequence>) -> Filter {
    Filter::SequenceTail(seq.clone())
}

/// Filter-side convergence: membership of the critical test neighborhoods in the tail filter.
pub fn filter_converges_seq(
    seq: &Arc<PolySequence>,
    e: &RationalVector,
    mode: SemanticsMode,
) -> Result<bool, FilterError> {
    let filter = associated_filter_seq(seq);
    for region in critical_test_regions(seq, e, mode)? {
        if !filter.member(&QuerySet::Region(region))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Filter-side cluster point: each critical neighborhood meets every tail,
/// i.e. is visited frequently, which for this class means eventually.
pub fn cluster_point_seq(
    seq: &PolySequence,
    e: &RationalVector,
    mode: SemanticsMode,
) -> Result<bool, FilterError> {
    for region in critical_test_regions(seq, e, mode)? {
        if !eventually_in_region(seq, &region)?.truth {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A seeded polynomial sequence in `space` with degree at most `max_degree`.
///
/// A third of the time the constant terms vanish, and some coordinates are
/// forced to be identically zero, so limits hit 0 and the pseudonorm kernels.
pub fn random_sequence<R: Rng>(
    rng: &mut R,
    name: impl Into<String>,
    space: Arc<SpaceSpec>,
    max_degree: usize,
) -> PolySequence {
    let dim = space.dim();
    let zero_limit = rng.gen_range(0..3) == 0;
    let coords = (0..dim)
        .map(|_| {
            if rng.gen_range(0..5) == 0 {
                return Poly::zero();
            }
            let degree = rng.gen_range(0..=max_degree);
            let mut c: Vec<Rational> = (0..=degree)
                .map(|_| sampling::rational(rng, 3, 4))
                .collect();
            if zero_limit {
                c[0] = Rational::zero();
            }
            Poly::new(c)
        })
        .collect();
    PolySequence {
        name: name.into(),
        space,
        coords,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::PseudonormFamily;

    fn line() -> Arc<SpaceSpec> {
        Arc::new(SpaceSpec::new(
            PseudonormFamily::new(1, vec![Pseudonorm::coord(0)]).unwrap(),
        ))
    }

    fn seq(space: &Arc<SpaceSpec>, coeffs: &[&[&str]]) -> PolySequence {
        PolySequence::new(
            "s",
            space.clone(),
            coeffs
                .iter()
                .map(|c| Poly::new(c.iter().map(|x| x.parse().unwrap()).collect()))
                .collect(),
            DEFAULT_MAX_DEGREE,
        )
        .unwrap()
    }

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn v(s: &str) -> RationalVector {
        s.parse().unwrap()
    }

    #[test]
    fn one_over_k_enters_half_ball_at_three() {
        let sp = line();
        let s = seq(&sp, &[&["0", "1"]]);
        let u = NeighborhoodSpec::ball(0, r("1/2")).unwrap();
        let verdict = eventually_in_nbhd(&s, &v("[0]"), &u, SemanticsMode::ZeroNbhd).unwrap();
        assert_eq!(verdict, EventualVerdict { truth: true, threshold: 3 });
        assert!(spot_check(&s, &Region::zero_ball(&sp, u), verdict).unwrap());
    }

    #[test]
    fn constant_one_stays_outside() {
        let sp = line();
        let s = seq(&sp, &[&["1"]]);
        let u = NeighborhoodSpec::ball(0, r("1/2")).unwrap();
        let verdict = eventually_in_nbhd(&s, &v("[0]"), &u, SemanticsMode::ZeroNbhd).unwrap();
        assert!(!verdict.truth);
    }

    #[test]
    fn translated_ball_around_limit() {
        let sp = line();
        let s = seq(&sp, &[&["1", "-1"]]);
        for eps in ["1", "1/10", "1/1000"] {
            let u = NeighborhoodSpec::ball(0, r(eps)).unwrap();
            let verdict =
                eventually_in_nbhd(&s, &v("[1]"), &u, SemanticsMode::Translated).unwrap();
            assert!(verdict.truth);
            let region = Region::Ball {
                center: v("[1]"),
                spec: u,
            };
            assert!(spot_check(&s, &region, verdict).unwrap());
        }
    }

    #[test]
    fn boundary_limit_is_excluded() {
        // x_k = 1/2 + 1/k never gets below 1/2; x_k = 1/2 - 1/k does, strictly.
        let sp = line();
        let u = NeighborhoodSpec::ball(0, r("1/2")).unwrap();
        let above = seq(&sp, &[&["1/2", "1"]]);
        let below = seq(&sp, &[&["1/2", "-1"]]);
        let zero = v("[0]");
        assert!(!eventually_in_nbhd(&above, &zero, &u, SemanticsMode::ZeroNbhd).unwrap().truth);
        let verdict = eventually_in_nbhd(&below, &zero, &u, SemanticsMode::ZeroNbhd).unwrap();
        assert!(verdict.truth);
        assert!(spot_check(&below, &Region::zero_ball(&sp, u), verdict).unwrap());
    }

    #[test]
    fn convergence_examples() {
        let sp = line();
        let e = v("[3/2]");
        let approach = PolySequence::approaching("a", sp.clone(), &e, &v("[-2]"));
        let constant_e = PolySequence::constant("c", sp.clone(), &e);
        let zero = PolySequence::constant("z", sp.clone(), &v("[0]"));
        for mode in SemanticsMode::ALL {
            assert!(seq_converges(&approach, &e, mode).unwrap());
            assert!(seq_converges(&constant_e, &e, mode).unwrap());
            assert!(filter_converges_seq(&Arc::new(approach.clone()), &e, mode).unwrap());
            assert!(filter_converges_seq(&Arc::new(constant_e.clone()), &e, mode).unwrap());
        }
        let one = v("[1]");
        assert!(seq_converges(&zero, &one, SemanticsMode::ZeroNbhd).unwrap());
        assert!(!seq_converges(&zero, &one, SemanticsMode::Translated).unwrap());
        let zero = Arc::new(zero);
        assert!(filter_converges_seq(&zero, &one, SemanticsMode::ZeroNbhd).unwrap());
        assert!(!filter_converges_seq(&zero, &one, SemanticsMode::Translated).unwrap());
    }

    #[test]
    fn cluster_examples() {
        let sp = line();
        let far = v("[5]");
        let zero = PolySequence::constant("z", sp.clone(), &v("[0]"));
        assert!(!cluster_point_seq(&zero, &far, SemanticsMode::Translated).unwrap());
        let inv = seq(&sp, &[&["0", "1"]]);
        assert!(cluster_point_seq(&inv, &v("[0]"), SemanticsMode::ZeroNbhd).unwrap());
        assert!(cluster_point_seq(&inv, &v("[0]"), SemanticsMode::Translated).unwrap());
    }

    #[test]
    fn tail_membership() {
        let sp = line();
        let s = Arc::new(seq(&sp, &[&["0", "1"]]));
        let f = associated_filter_seq(&s);
        let ball = Region::zero_ball(&sp, NeighborhoodSpec::ball(0, r("1")).unwrap());
        assert!(f.member(&QuerySet::Region(ball)).unwrap());
        assert!(!f.member(&QuerySet::Region(Region::Empty)).unwrap());
        let nonneg = Region::Boxes(vec![RationalBox {
            intervals: vec![Interval {
                lo: Some(Rational::zero()),
                lo_closed: true,
                hi: None,
                hi_closed: false,
            }],
        }]);
        assert!(f.member(&QuerySet::Region(nonneg)).unwrap());
        let positive_open = Region::Boxes(vec![RationalBox {
            intervals: vec![Interval {
                lo: None,
                lo_closed: false,
                hi: Some(Rational::zero()),
                hi_closed: true,
            }],
        }]);
        assert!(!f.member(&QuerySet::Region(positive_open)).unwrap());
    }

    #[test]
    fn degree_bound_enforced() {
        let sp = line();
        let coeffs = vec![Poly::new(vec![Rational::one(); 6])];
        assert!(PolySequence::new("big", sp, coeffs, DEFAULT_MAX_DEGREE).is_err());
    }
}
