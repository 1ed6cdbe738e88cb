//! Riesz pseudonorm families and the basic zero neighborhoods they generate.
//!
//! Three shapes are shipped: `|x_j|`, weighted ℓ¹ and weighted sup. Each is
//! absolutely homogeneous, subadditive and monotone in `|x|`, so every finite
//! family of them generates a locally solid topology on ℚⁿ. Families need not
//! separate points.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{LatticeError, TopologyError};
use crate::lattice::{Rational, RationalVector};
use crate::sampling;
use crate::verdict::{Status, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Pseudonorm {
    /// `|x_j|`.
    #[serde(rename = "coord")]
    CoordinateAbs { j: usize },
    /// `Σ w_i |x_i|`.
    #[serde(rename = "l1")]
    WeightedL1 { w: Vec<Rational> },
    /// `max_i w_i |x_i|`.
    #[serde(rename = "sup")]
    WeightedSup { w: Vec<Rational> },
}

impl Pseudonorm {
    pub fn coord(j: usize) -> Self {
        Pseudonorm::CoordinateAbs { j }
    }

    pub fn l1(w: &[i64]) -> Self {
        Pseudonorm::WeightedL1 {
            w: w.iter().map(|&c| Rational::from_integer(c)).collect(),
        }
    }

    pub fn sup(w: &[i64]) -> Self {
        Pseudonorm::WeightedSup {
            w: w.iter().map(|&c| Rational::from_integer(c)).collect(),
        }
    }

    pub fn validate(&self, dim: usize) -> Result<(), TopologyError> {
        match self {
            Pseudonorm::CoordinateAbs { j } => {
                if *j >= dim {
                    return Err(TopologyError::InvalidPseudonorm(format!(
                        "coordinate {j} out of range for dimension {dim}"
                    )));
                }
            }
            Pseudonorm::WeightedL1 { w } | Pseudonorm::WeightedSup { w } => {
                if w.len() != dim {
                    return Err(TopologyError::InvalidPseudonorm(format!(
                        "{} weights for dimension {dim}",
                        w.len()
                    )));
                }
                if w.iter().any(Rational::is_negative) {
                    return Err(TopologyError::InvalidPseudonorm(
                        "weights must be nonnegative".into(),
                    ));
                }
                if !w.iter().any(Rational::is_positive) {
                    return Err(TopologyError::InvalidPseudonorm(
                        "at least one weight must be positive".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Per-coordinate weights; `CoordinateAbs(j)` is the unit weight at `j`.
    pub fn weights(&self, dim: usize) -> Vec<Rational> {
        match self {
            Pseudonorm::CoordinateAbs { j } => (0..dim)
                .map(|i| if i == *j { Rational::one() } else { Rational::zero() })
                .collect(),
            Pseudonorm::WeightedL1 { w } | Pseudonorm::WeightedSup { w } => w.clone(),
        }
    }

    /// True when the value combines weighted coordinates by `max` rather than `Σ`.
    pub fn is_sup_like(&self) -> bool {
        matches!(
            self,
            Pseudonorm::WeightedSup { .. } | Pseudonorm::CoordinateAbs { .. }
        )
    }

    pub fn evaluate(&self, x: &RationalVector) -> Result<Rational, TopologyError> {
        match self {
            Pseudonorm::CoordinateAbs { j } => {
                if *j >= x.dim() {
                    return Err(TopologyError::Lattice(LatticeError::DimensionMismatch {
                        expected: j + 1,
                        found: x.dim(),
                    }));
                }
                Ok(x.get(*j).abs())
            }
            Pseudonorm::WeightedL1 { w } => {
                check_len(w.len(), x)?;
                Ok(w.iter().zip(x.coords()).map(|(w, a)| w * a.abs()).sum())
            }
            Pseudonorm::WeightedSup { w } => {
                check_len(w.len(), x)?;
                Ok(w
                    .iter()
                    .zip(x.coords())
                    .map(|(w, a)| w * a.abs())
                    .fold(Rational::zero(), Rational::max))
            }
        }
    }
}

fn check_len(len: usize, x: &RationalVector) -> Result<(), TopologyError> {
    if len != x.dim() {
        return Err(LatticeError::DimensionMismatch {
            expected: len,
            found: x.dim(),
        }
        .into());
    }
    Ok(())
}

/// The finite index set `J` of a pseudonorm family `{ρ_j}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PseudonormFamily {
    dim: usize,
    members: Vec<Pseudonorm>,
}

impl PseudonormFamily {
    pub fn new(dim: usize, members: Vec<Pseudonorm>) -> Result<Self, TopologyError> {
        if dim == 0 {
            return Err(LatticeError::EmptyVector.into());
        }
        if members.is_empty() {
            return Err(TopologyError::EmptyFamily);
        }
        for m in &members {
            m.validate(dim)?;
        }
        Ok(PseudonormFamily { dim, members })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn members(&self) -> &[Pseudonorm] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn get(&self, j: usize) -> Result<&Pseudonorm, TopologyError> {
        self.members.get(j).ok_or(TopologyError::BadIndex {
            index: j,
            len: self.members.len(),
        })
    }

    pub fn evaluate(&self, j: usize, x: &RationalVector) -> Result<Rational, TopologyError> {
        self.get(j)?.evaluate(x)
    }

    /// `ρ_j(x)` for every `j`, in index order.
    pub fn evaluate_all(&self, x: &RationalVector) -> Result<Vec<Rational>, TopologyError> {
        self.members.iter().map(|p| p.evaluate(x)).collect()
    }
}

impl Serialize for PseudonormFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawSpace {
            dim: self.dim,
            pseudonorms: self.members.clone(),
        }
        .serialize(s)
    }
}

/// Wire form of a space: `{"dim": n, "pseudonorms": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawSpace {
    pub dim: usize,
    pub pseudonorms: Vec<Pseudonorm>,
}

impl<'de> Deserialize<'de> for PseudonormFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawSpace::deserialize(d)?;
        PseudonormFamily::new(raw.dim, raw.pseudonorms).map_err(serde::de::Error::custom)
    }
}

/// The basic zero neighborhood `{x : ρ_j(x) < ε_j for every listed (j, ε_j)}`.
///
/// Inequalities are strict, so the set always contains 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct NeighborhoodSpec {
    constraints: Vec<(usize, Rational)>,
}

#[derive(Deserialize)]
struct RawSpec {
    constraints: Vec<(usize, Rational)>,
}

impl TryFrom<RawSpec> for NeighborhoodSpec {
    type Error = TopologyError;

    fn try_from(raw: RawSpec) -> Result<Self, Self::Error> {
        NeighborhoodSpec::new(raw.constraints)
    }
}

impl NeighborhoodSpec {
    pub fn new(constraints: Vec<(usize, Rational)>) -> Result<Self, TopologyError> {
        if constraints.is_empty() {
            return Err(TopologyError::InvalidNeighborhood(
                "at least one constraint is required".into(),
            ));
        }
        if let Some((j, eps)) = constraints.iter().find(|(_, eps)| !eps.is_positive()) {
            return Err(TopologyError::InvalidNeighborhood(format!(
                "radius {eps} for pseudonorm {j} is not positive"
            )));
        }
        Ok(NeighborhoodSpec { constraints })
    }

    /// Single constraint `ρ_j < eps`.
    pub fn ball(j: usize, eps: Rational) -> Result<Self, TopologyError> {
        Self::new(vec![(j, eps)])
    }

    pub fn constraints(&self) -> &[(usize, Rational)] {
        &self.constraints
    }

    pub fn validate(&self, family: &PseudonormFamily) -> Result<(), TopologyError> {
        for (j, _) in &self.constraints {
            family.get(*j)?;
        }
        Ok(())
    }

    /// Effective radius per index: the minimum over repeated constraints.
    pub fn radii(&self) -> BTreeMap<usize, Rational> {
        let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
        for (j, eps) in &self.constraints {
            out.entry(*j)
                .and_modify(|r| {
                    if eps < r {
                        *r = eps.clone()
                    }
                })
                .or_insert_with(|| eps.clone());
        }
        out
    }

    /// Canonical form: one constraint per index, sorted by index.
    pub fn normalized(&self) -> Self {
        NeighborhoodSpec {
            constraints: self.radii().into_iter().collect(),
        }
    }

    /// `x ∈ U`, strict on every constraint.
    pub fn contains(
        &self,
        family: &PseudonormFamily,
        x: &RationalVector,
    ) -> Result<bool, TopologyError> {
        for (j, eps) in &self.constraints {
            if family.evaluate(*j, x)? >= *eps {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `x ∈ center + U`.
    pub fn contains_translated(
        &self,
        family: &PseudonormFamily,
        center: &RationalVector,
        x: &RationalVector,
    ) -> Result<bool, TopologyError> {
        self.contains(family, &x.try_sub(center)?)
    }

    /// `V₁ ∩ V₂` as a spec: the union of both constraint lists with per-index minimum radii.
    pub fn intersect(&self, other: &Self) -> Self {
        let mut all = self.constraints.clone();
        all.extend(other.constraints.iter().cloned());
        NeighborhoodSpec { constraints: all }.normalized()
    }

    /// `λU` for `λ ≠ 0`; homogeneity turns every radius into `|λ|ε`.
    pub fn scaled(&self, lambda: &Rational) -> Result<Self, TopologyError> {
        if lambda.is_zero() {
            return Err(TopologyError::InvalidNeighborhood(
                "0·U is not a basic neighborhood".into(),
            ));
        }
        let factor = lambda.abs();
        Ok(NeighborhoodSpec {
            constraints: self
                .constraints
                .iter()
                .map(|(j, eps)| (*j, eps * &factor))
                .collect(),
        })
    }

    pub fn halved(&self) -> Self {
        self.scaled(&Rational::new(1, 2))
            .expect("1/2 is a nonzero scalar")
    }

    /// Sufficient symbolic test for `self ⊆ other`: every constraint of `other`
    /// is implied by one of `self` on the same index with a radius no larger.
    pub fn subset_of_symbolic(&self, other: &Self) -> bool {
        let mine = self.radii();
        other
            .radii()
            .iter()
            .all(|(j, eps)| mine.get(j).is_some_and(|r| r <= eps))
    }

    pub fn max_radius(&self) -> Rational {
        self.constraints
            .iter()
            .map(|(_, eps)| eps.clone())
            .fold(Rational::zero(), Rational::max)
    }
}

/// `U ∩ W` membership, restated as the primitive the convergence definition quantifies over.
pub fn nbhd_contains(
    spec: &NeighborhoodSpec,
    family: &PseudonormFamily,
    x: &RationalVector,
) -> Result<bool, TopologyError> {
    spec.contains(family, x)
}

/// A map under audit: either a shipped pseudonorm, or an arbitrary function used as a control.
pub enum AuditSubject<'a> {
    Shipped(&'a Pseudonorm),
    Opaque {
        name: &'a str,
        map: &'a dyn Fn(&RationalVector) -> Rational,
    },
}

impl AuditSubject<'_> {
    fn eval(&self, x: &RationalVector) -> Result<Rational, TopologyError> {
        match self {
            AuditSubject::Shipped(p) => p.evaluate(x),
            AuditSubject::Opaque { map, .. } => Ok(map(x)),
        }
    }

    fn name(&self) -> String {
        match self {
            AuditSubject::Shipped(p) => serde_json::to_string(p).unwrap_or_default(),
            AuditSubject::Opaque { name, .. } => name.to_string(),
        }
    }
}

fn unit_probes(dim: usize) -> Vec<RationalVector> {
    let mut out = Vec::with_capacity(2 * dim);
    for i in 0..dim {
        let mut c = vec![Rational::zero(); dim];
        c[i] = Rational::one();
        let e = RationalVector::new(c);
        out.push(-&e);
        out.push(e);
    }
    out
}

/// Checks the five Riesz pseudonorm axioms on the given samples.
///
/// Nonnegativity, `ρ(0) = 0`, subadditivity and monotonicity in `|x|` are
/// checked exactly. The null-sequence axiom is discharged analytically for
/// shipped kinds (absolute homogeneity gives `ρ(λ_n x) = |λ_n| ρ(x) → 0`);
/// homogeneity itself is spot-checked on `scalars`. For opaque maps a
/// homogeneity failure only leaves that axiom undetermined.
pub fn audit_pseudonorm_axioms(
    subject: &AuditSubject<'_>,
    dim: usize,
    samples: &[(RationalVector, RationalVector)],
    scalars: &[Rational],
) -> Result<Verdict, TopologyError> {
    const CLAIM: &str = "PSEUDO-AXIOMS";
    if samples.is_empty() {
        return Err(TopologyError::InvalidPseudonorm("no samples".into()));
    }
    let fail = |axiom: &str, detail: serde_json::Value| {
        Verdict::failed(
            CLAIM,
            Status::Counterexample,
            json!({"pseudonorm": subject.name(), "axiom": axiom, "detail": detail}),
        )
    };

    let zero = RationalVector::zero(dim);
    let rho0 = subject.eval(&zero)?;
    if !rho0.is_zero() {
        return Ok(fail("vanishes-at-zero", json!({"x": zero, "value": rho0})));
    }

    let mut points = unit_probes(dim);
    for (x, y) in samples {
        points.push(x.clone());
        points.push(y.clone());
    }
    for x in &points {
        let v = subject.eval(x)?;
        if v.is_negative() {
            return Ok(fail("nonnegative", json!({"x": x, "value": v})));
        }
    }

    for (x, y) in samples {
        let lhs = subject.eval(&x.try_add(y)?)?;
        let rhs = subject.eval(x)? + subject.eval(y)?;
        if lhs > rhs {
            return Ok(fail(
                "subadditive",
                json!({"x": x, "y": y, "lhs": lhs, "rhs": rhs}),
            ));
        }
    }

    for (a, y) in samples {
        // Given pairs that already satisfy |x| <= |y| are used as-is; otherwise
        // x is clamped into the order interval [-|y|, |y|].
        let x = if a.abs().leq(&y.abs())? {
            a.clone()
        } else {
            sampling::dominated_by(a, y)
        };
        let (rx, ry) = (subject.eval(&x)?, subject.eval(y)?);
        if rx > ry {
            return Ok(fail("monotone", json!({"x": x, "y": y, "lhs": rx, "rhs": ry})));
        }
    }

    let mut homogeneous = true;
    'outer: for (x, _) in samples {
        for lambda in scalars {
            let lhs = subject.eval(&x.scale(lambda))?;
            let rhs = lambda.abs() * subject.eval(x)?;
            if lhs != rhs {
                homogeneous = false;
                if matches!(subject, AuditSubject::Shipped(_)) {
                    return Ok(fail(
                        "null-sequence",
                        json!({"x": x, "lambda": lambda, "lhs": lhs, "rhs": rhs}),
                    ));
                }
                break 'outer;
            }
        }
    }

    let null_sequence = match (subject, homogeneous) {
        (AuditSubject::Shipped(_), _) => "analytic: absolutely homogeneous",
        (AuditSubject::Opaque { .. }, true) => "homogeneous on samples",
        (AuditSubject::Opaque { .. }, false) => "undetermined",
    };
    let mut verdict = Verdict::holds(CLAIM);
    verdict.witness = json!({
        "pseudonorm": subject.name(),
        "pairs": samples.len(),
        "null_sequence": null_sequence,
    });
    Ok(verdict)
}

/// Audit of one shipped pseudonorm on random pairs.
pub fn audit_shipped<R: Rng>(
    rho: &Pseudonorm,
    dim: usize,
    pairs: usize,
    rng: &mut R,
) -> Result<Verdict, TopologyError> {
    let samples: Vec<_> = (0..pairs)
        .map(|_| {
            (
                sampling::vector(rng, dim, 100, 100),
                sampling::vector(rng, dim, 100, 100),
            )
        })
        .collect();
    let scalars = default_scalars();
    audit_pseudonorm_axioms(&AuditSubject::Shipped(rho), dim, &samples, &scalars)
}

pub fn default_scalars() -> Vec<Rational> {
    vec![
        Rational::new(-1, 1),
        Rational::new(1, 2),
        Rational::new(-2, 3),
        Rational::new(3, 1),
        Rational::zero(),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseAxiom {
    /// `λV ⊆ V` for `|λ| <= 1`.
    Balanced,
    /// Some `V ⊆ V₁ ∩ V₂`.
    Intersection,
    /// Some `U` with `U + U ⊆ V`.
    HalfSum,
    /// `λV` is again a basic set for `λ ≠ 0`.
    Scaling,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaseAxiomWitness {
    pub axiom: BaseAxiom,
    pub inputs: Vec<NeighborhoodSpec>,
    pub witness: NeighborhoodSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar: Option<Rational>,
    /// Outcome of the constraint comparison, where one applies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbolic: Option<bool>,
    pub samples_checked: usize,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<serde_json::Value>,
}

/// Sample points for a spec: a seeded draw from the grid `k·R/4`, `|k| <= 5`,
/// where `R` is the largest radius over the smallest positive weight in use.
fn grid_samples<R: Rng>(
    family: &PseudonormFamily,
    specs: &[&NeighborhoodSpec],
    count: usize,
    rng: &mut R,
) -> Vec<RationalVector> {
    let dim = family.dim();
    let radius = specs
        .iter()
        .map(|s| s.max_radius())
        .fold(Rational::zero(), Rational::max);
    let min_weight = family
        .members()
        .iter()
        .flat_map(|p| p.weights(dim))
        .filter(Rational::is_positive)
        .fold(None, |acc: Option<Rational>, w| {
            Some(acc.map_or(w.clone(), |a| a.min(w)))
        })
        .unwrap_or_else(Rational::one);
    let step = radius / min_weight * Rational::new(1, 4);
    let mut out = vec![RationalVector::zero(dim)];
    while out.len() < count {
        out.push(RationalVector::new(
            (0..dim)
                .map(|_| &step * Rational::from_integer(rng.gen_range(-5..=5)))
                .collect(),
        ));
    }
    out
}

/// Constructs and verifies witnesses for the four neighborhood-base properties
/// of every spec in `specs`.
///
/// Intersection witnesses pair each spec with its successor (cyclically).
pub fn audit_base_axioms(
    family: &PseudonormFamily,
    specs: &[NeighborhoodSpec],
    seed: u64,
) -> Result<Vec<BaseAxiomWitness>, TopologyError> {
    if specs.is_empty() {
        return Err(TopologyError::InvalidNeighborhood("no specs to audit".into()));
    }
    let mut rng = sampling::rng(seed);
    let mut out = Vec::new();
    for (i, v) in specs.iter().enumerate() {
        v.validate(family)?;
        let next = &specs[(i + 1) % specs.len()];
        next.validate(family)?;
        let points = grid_samples(family, &[v, next], 48, &mut rng);

        for lambda in [
            Rational::new(-1, 1),
            Rational::new(1, 3),
            Rational::new(-1, 2),
            Rational::one(),
        ] {
            let scaled = v.scaled(&lambda)?;
            let symbolic = scaled.subset_of_symbolic(v);
            let mut failure = None;
            for x in &points {
                if v.contains(family, x)? && !v.contains(family, &x.scale(&lambda))? {
                    failure = Some(json!({"x": x, "lambda_x": x.scale(&lambda)}));
                    break;
                }
            }
            out.push(BaseAxiomWitness {
                axiom: BaseAxiom::Balanced,
                inputs: vec![v.clone()],
                witness: scaled,
                scalar: Some(lambda),
                symbolic: Some(symbolic),
                samples_checked: points.len(),
                holds: symbolic && failure.is_none(),
                failure,
            });
        }

        let meet = v.intersect(next);
        let symbolic = meet.subset_of_symbolic(v) && meet.subset_of_symbolic(next);
        let mut failure = None;
        for x in &points {
            let lhs = meet.contains(family, x)?;
            let rhs = v.contains(family, x)? && next.contains(family, x)?;
            if lhs && !rhs {
                failure = Some(json!({"x": x}));
                break;
            }
        }
        out.push(BaseAxiomWitness {
            axiom: BaseAxiom::Intersection,
            inputs: vec![v.clone(), next.clone()],
            witness: meet,
            scalar: None,
            symbolic: Some(symbolic),
            samples_checked: points.len(),
            holds: symbolic && failure.is_none(),
            failure,
        });

        let half = v.halved();
        let inside: Vec<_> = points
            .iter()
            .map(|x| x.scale(&Rational::new(1, 2)))
            .filter(|x| half.contains(family, x).unwrap_or(false))
            .collect();
        let mut failure = None;
        let mut checked = 0;
        'pairs: for x in &inside {
            for y in &inside {
                checked += 1;
                if !v.contains(family, &x.try_add(y)?)? {
                    failure = Some(json!({"x": x, "y": y}));
                    break 'pairs;
                }
            }
        }
        out.push(BaseAxiomWitness {
            axiom: BaseAxiom::HalfSum,
            inputs: vec![v.clone()],
            witness: half,
            scalar: None,
            symbolic: None,
            samples_checked: checked,
            holds: failure.is_none(),
            failure,
        });

        for lambda in [Rational::from_integer(2), Rational::new(-3, 1), Rational::new(1, 5)] {
            let scaled = v.scaled(&lambda)?;
            let mut failure = None;
            for x in &points {
                if v.contains(family, x)? != scaled.contains(family, &x.scale(&lambda))? {
                    failure = Some(json!({"x": x}));
                    break;
                }
            }
            out.push(BaseAxiomWitness {
                axiom: BaseAxiom::Scaling,
                inputs: vec![v.clone()],
                witness: scaled,
                scalar: Some(lambda),
                symbolic: None,
                samples_checked: points.len(),
                holds: failure.is_none(),
                failure,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolidityCertificate {
    pub solid: bool,
    pub certificate: String,
    pub pairs_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<(RationalVector, RationalVector)>,
}

/// Every spec set is solid: `|x| <= |y|` gives `ρ_j(x) <= ρ_j(y) < ε_j`.
/// The implication is also spot-checked on `pairs` seeded pairs.
pub fn is_solid_spec(
    spec: &NeighborhoodSpec,
    family: &PseudonormFamily,
    pairs: usize,
    seed: u64,
) -> Result<SolidityCertificate, TopologyError> {
    spec.validate(family)?;
    let mut rng = sampling::rng(seed);
    let pool = grid_samples(family, &[spec], pairs.max(1), &mut rng);
    let mut checked = 0;
    for y in &pool {
        if !spec.contains(family, y)? {
            continue;
        }
        let shape = sampling::vector(&mut rng, family.dim(), 10, 10);
        let x = sampling::dominated_by(&shape, y);
        checked += 1;
        if !spec.contains(family, &x)? {
            return Ok(SolidityCertificate {
                solid: false,
                certificate: "monotone axiom violated".into(),
                pairs_checked: checked,
                counterexample: Some((x, y.clone())),
            });
        }
    }
    Ok(SolidityCertificate {
        solid: true,
        certificate: "monotone axiom".into(),
        pairs_checked: checked,
        counterexample: None,
    })
}
