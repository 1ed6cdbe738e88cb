//! Corpus files: the JSON wire schema and its resolution into backend objects.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::Rng;
use serde::Deserialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::ClaimId;
use crate::error::FilterError;
use crate::filter::{self, Filter, FilterBase, Universe};
use crate::finite::{
    ExplicitSet, FiniteCarrier, FiniteDirectedSet, FiniteMap, FiniteNet, DEFAULT_EXHAUSTIVE_BOUND,
};
use crate::lattice::{Rational, RationalVector, SpaceSpec};
use crate::sampling;
use crate::sequence::{self, Poly, PolySequence, DEFAULT_MAX_DEGREE};
use crate::topology::{NeighborhoodSpec, Pseudonorm, PseudonormFamily};
use crate::verdict::SemanticsMode;

pub const SCHEMA_VERSION: u64 = 1;
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    /// Malformed JSON or a schema violation. The message already names the line and column.
    #[error("{message}")]
    Parse {
        message: String,
        line: usize,
        column: usize,
    },
    #[error("{field}: {message}")]
    Resolve { field: String, message: String },
    #[error("empty corpus")]
    Empty,
}

fn resolve_err(field: impl Into<String>, e: impl std::fmt::Display) -> CorpusError {
    CorpusError::Resolve {
        field: field.into(),
        message: e.to_string(),
    }
}

// ---- wire schema ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCorpus {
    version: u64,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    spaces: BTreeMap<String, RawSpaceEntry>,
    #[serde(default)]
    carriers: BTreeMap<String, RawCarrier>,
    #[serde(default)]
    exhaustive: Vec<RawExhaustive>,
    #[serde(default)]
    sequences: BTreeMap<String, RawSequence>,
    #[serde(default)]
    random_sequences: Option<RawRandomSequences>,
    #[serde(default)]
    filters: BTreeMap<String, RawFilter>,
    #[serde(default)]
    nets: BTreeMap<String, RawNet>,
    #[serde(default)]
    maps: BTreeMap<String, RawMap>,
    #[serde(default)]
    neighborhoods: BTreeMap<String, RawNeighborhood>,
    #[serde(default)]
    claims: Option<Vec<String>>,
    #[serde(default)]
    bounds: Bounds,
    #[serde(default)]
    manifest: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpaceEntry {
    dim: usize,
    pseudonorms: Vec<Pseudonorm>,
    /// Extra test points for sequence claims.
    #[serde(default)]
    points: Vec<RationalVector>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCarrier {
    space: String,
    points: Vec<RationalVector>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExhaustive {
    id: String,
    space: String,
    grid: Vec<RationalVector>,
    #[serde(default = "one")]
    min_points: usize,
    max_points: usize,
}

fn one() -> usize {
    1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSequence {
    space: String,
    #[serde(default)]
    dim: Option<usize>,
    /// Per coordinate, constant term first.
    coeffs: Vec<Vec<Rational>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRandomSequences {
    count: usize,
    #[serde(default = "default_max_dim")]
    max_dim: usize,
    #[serde(default = "default_random_degree")]
    max_degree: usize,
}

fn default_max_dim() -> usize {
    4
}

fn default_random_degree() -> usize {
    3
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FilterRef {
    Id(String),
    Inline(Box<RawFilter>),
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum RawFilter {
    Principal {
        carrier: String,
        minset: Vec<usize>,
    },
    Tail {
        sequence: String,
    },
    Nbhd {
        center: RationalVector,
        mode: SemanticsMode,
        #[serde(default)]
        carrier: Option<String>,
        #[serde(default)]
        space: Option<String>,
    },
    Generated {
        #[serde(default)]
        carrier: Option<String>,
        #[serde(default)]
        elements: Option<Vec<Vec<usize>>>,
        #[serde(default)]
        net: Option<String>,
        #[serde(default)]
        sequence: Option<String>,
    },
    Join([FilterRef; 2]),
    Meet([FilterRef; 2]),
    Pushforward {
        map: String,
        filter: FilterRef,
    },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawValues {
    List(Vec<usize>),
    Map(BTreeMap<String, usize>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNet {
    carrier: String,
    size: usize,
    #[serde(default)]
    order: Vec<(usize, usize)>,
    values: RawValues,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMap {
    from: String,
    to: String,
    images: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNeighborhood {
    space: String,
    constraints: Vec<(usize, Rational)>,
}

/// Size limits for the exhaustive sweeps.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(default, deny_unknown_fields)]
pub struct Bounds {
    /// Largest carrier used by all-filters × all-points sweeps.
    pub finite: usize,
    /// Largest carrier used by sweeps over pairs of filters.
    pub pairs: usize,
    /// Largest carrier on either side of an exhaustive map sweep.
    pub maps: usize,
    /// Largest index poset for exhaustive nets.
    pub net_index: usize,
    /// Largest carrier for exhaustive nets.
    pub net_carrier: usize,
    pub random_specs: usize,
    pub pseudo_pairs: usize,
    pub max_degree: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            finite: 6,
            pairs: 4,
            maps: 4,
            net_index: 3,
            net_carrier: 4,
            random_specs: 100,
            pseudo_pairs: 500,
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }
}

// ---- resolved corpus ----

#[derive(Clone, Debug)]
pub struct SpaceEntry {
    pub id: String,
    pub space: Arc<SpaceSpec>,
    pub points: Vec<RationalVector>,
}

#[derive(Clone, Debug)]
pub struct Corpus {
    pub seed: u64,
    /// SHA-256 of the corpus bytes.
    pub sha: String,
    pub spaces: Vec<SpaceEntry>,
    /// Declared carriers, in id order.
    pub carriers: Vec<Arc<FiniteCarrier>>,
    /// Carriers produced by the exhaustive generators.
    pub generated: Vec<Arc<FiniteCarrier>>,
    pub sequences: Vec<Arc<PolySequence>>,
    pub random_sequences: Vec<Arc<PolySequence>>,
    pub filters: BTreeMap<String, Filter>,
    pub nets: BTreeMap<String, Arc<FiniteNet>>,
    pub maps: BTreeMap<String, Arc<FiniteMap>>,
    pub neighborhoods: Vec<(String, Arc<SpaceSpec>, NeighborhoodSpec)>,
    pub claims: Vec<ClaimId>,
    pub bounds: Bounds,
    pub manifest: Option<PathBuf>,
}

impl Corpus {
    pub fn load(path: &Path) -> Result<Corpus, CorpusError> {
        let bytes = std::fs::read(path).map_err(|e| CorpusError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let mut corpus = Corpus::from_bytes(&bytes)?;
        corpus.manifest = corpus
            .manifest
            .take()
            .map(|m| path.parent().unwrap_or(Path::new(".")).join(m));
        Ok(corpus)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Corpus, CorpusError> {
        let text = std::str::from_utf8(bytes).map_err(|e| resolve_err("corpus", e))?;
        if text.trim().is_empty() {
            return Err(CorpusError::Empty);
        }
        let raw: RawCorpus = serde_json::from_str(text).map_err(|e| CorpusError::Parse {
            message: e.to_string(),
            line: e.line(),
            column: e.column(),
        })?;
        let sha = hex::encode(Sha256::digest(bytes));
        resolve(raw, sha)
    }

    pub fn space(&self, id: &str) -> Option<&SpaceEntry> {
        self.spaces.iter().find(|s| s.id == id)
    }

    /// Declared carriers first, then generated ones.
    pub fn all_carriers(&self) -> impl Iterator<Item = &Arc<FiniteCarrier>> {
        self.carriers.iter().chain(&self.generated)
    }

    pub fn carrier(&self, name: &str) -> Option<&Arc<FiniteCarrier>> {
        self.all_carriers().find(|c| c.name() == name)
    }

    pub fn all_sequences(&self) -> impl Iterator<Item = &Arc<PolySequence>> {
        self.sequences.iter().chain(&self.random_sequences)
    }

    pub fn sequence(&self, name: &str) -> Option<&Arc<PolySequence>> {
        self.all_sequences().find(|s| s.name() == name)
    }

    /// Declared test points of the space a sequence lives in.
    pub fn points_for(&self, space: &SpaceSpec) -> Vec<RationalVector> {
        self.spaces
            .iter()
            .filter(|s| *s.space == *space)
            .flat_map(|s| s.points.iter().cloned())
            .collect()
    }

    pub fn is_finite_empty(&self) -> bool {
        self.carriers.is_empty() && self.generated.is_empty()
    }
}

struct Resolver<'a> {
    raw: &'a RawCorpus,
    spaces: BTreeMap<String, Arc<SpaceSpec>>,
    carriers: BTreeMap<String, Arc<FiniteCarrier>>,
    sequences: BTreeMap<String, Arc<PolySequence>>,
    nets: BTreeMap<String, Arc<FiniteNet>>,
    maps: BTreeMap<String, Arc<FiniteMap>>,
    filters: BTreeMap<String, Filter>,
}

impl Resolver<'_> {
    fn space(&self, field: &str, id: &str) -> Result<Arc<SpaceSpec>, CorpusError> {
        self.spaces
            .get(id)
            .cloned()
            .ok_or_else(|| resolve_err(field, format!("unknown space {id:?}")))
    }

    fn carrier(&self, field: &str, id: &str) -> Result<Arc<FiniteCarrier>, CorpusError> {
        self.carriers
            .get(id)
            .cloned()
            .ok_or_else(|| resolve_err(field, format!("unknown carrier {id:?}")))
    }

    fn filter_ref(&mut self, field: &str, r: &FilterRef, depth: usize) -> Result<Filter, CorpusError> {
        match r {
            FilterRef::Inline(f) => self.filter(field, f, depth + 1),
            FilterRef::Id(id) => {
                if let Some(f) = self.filters.get(id) {
                    return Ok(f.clone());
                }
                let raw = self
                    .raw
                    .filters
                    .get(id)
                    .ok_or_else(|| resolve_err(field, format!("unknown filter {id:?}")))?;
                let f = self.filter(&format!("filters.{id}"), raw, depth + 1)?;
                self.filters.insert(id.clone(), f.clone());
                Ok(f)
            }
        }
    }

    fn filter(&mut self, field: &str, raw: &RawFilter, depth: usize) -> Result<Filter, CorpusError> {
        if depth > 32 {
            return Err(resolve_err(field, "filter references are cyclic or too deep"));
        }
        let err = |e: FilterError| resolve_err(field, e);
        Ok(match raw {
            RawFilter::Principal { carrier, minset } => {
                let c = self.carrier(field, carrier)?;
                if let Some(bad) = minset.iter().find(|&&i| i >= c.len()) {
                    return Err(resolve_err(field, format!("index {bad} outside carrier {carrier}")));
                }
                Filter::principal(c, ExplicitSet::from_indices(minset.iter().copied())).map_err(err)?
            }
            RawFilter::Tail { sequence } => Filter::SequenceTail(
                self.sequences
                    .get(sequence)
                    .cloned()
                    .ok_or_else(|| resolve_err(field, format!("unknown sequence {sequence:?}")))?,
            ),
            RawFilter::Nbhd {
                center,
                mode,
                carrier,
                space,
            } => {
                let universe = match (carrier, space) {
                    (Some(c), None) => Universe::Finite(self.carrier(field, c)?),
                    (None, Some(s)) => Universe::Space(self.space(field, s)?),
                    _ => {
                        return Err(resolve_err(
                            field,
                            "a neighborhood filter names exactly one of carrier or space",
                        ))
                    }
                };
                filter::neighborhood_filter(center, &universe, *mode).map_err(err)?
            }
            RawFilter::Generated {
                carrier,
                elements,
                net,
                sequence,
            } => {
                let base = match (carrier, elements, net, sequence) {
                    (Some(c), Some(els), None, None) => {
                        let c = self.carrier(field, c)?;
                        let mut sets = Vec::with_capacity(els.len());
                        for el in els {
                            if let Some(bad) = el.iter().find(|&&i| i >= c.len()) {
                                return Err(resolve_err(
                                    field,
                                    format!("index {bad} outside carrier {}", c.name()),
                                ));
                            }
                            sets.push(ExplicitSet::from_indices(el.iter().copied()));
                        }
                        FilterBase::Explicit {
                            carrier: c,
                            elements: sets,
                        }
                    }
                    (None, None, Some(n), None) => FilterBase::NetTails(
                        self.nets
                            .get(n)
                            .cloned()
                            .ok_or_else(|| resolve_err(field, format!("unknown net {n:?}")))?,
                    ),
                    (None, None, None, Some(s)) => FilterBase::SequenceTails(
                        self.sequences
                            .get(s)
                            .cloned()
                            .ok_or_else(|| resolve_err(field, format!("unknown sequence {s:?}")))?,
                    ),
                    _ => {
                        return Err(resolve_err(
                            field,
                            "a generated filter takes carrier+elements, net, or sequence",
                        ))
                    }
                };
                filter::generate(base).map_err(err)?
            }
            RawFilter::Join([a, b]) => {
                let fa = self.filter_ref(field, a, depth)?;
                let fb = self.filter_ref(field, b, depth)?;
                filter::join_filter(&fa, &fb).map_err(err)?
            }
            RawFilter::Meet([a, b]) => {
                let fa = self.filter_ref(field, a, depth)?;
                let fb = self.filter_ref(field, b, depth)?;
                filter::meet_filter(&fa, &fb).map_err(err)?
            }
            RawFilter::Pushforward { map, filter: inner } => {
                let m = self
                    .maps
                    .get(map)
                    .cloned()
                    .ok_or_else(|| resolve_err(field, format!("unknown map {map:?}")))?;
                let f = self.filter_ref(field, inner, depth)?;
                filter::pushforward(&m, &f).map_err(err)?
            }
        })
    }
}

/// A random shipped pseudonorm family on `dim` coordinates.
fn random_family<R: Rng>(rng: &mut R, dim: usize) -> PseudonormFamily {
    let count = rng.gen_range(1..=3);
    let weight = |rng: &mut R| match rng.gen_range(0..4) {
        0 => Rational::zero(),
        1 => Rational::new(1, 2),
        2 => Rational::one(),
        _ => Rational::from_integer(2),
    };
    let members = (0..count)
        .map(|_| match rng.gen_range(0..3) {
            0 => Pseudonorm::coord(rng.gen_range(0..dim)),
            kind => {
                let mut w: Vec<Rational> = (0..dim).map(|_| weight(rng)).collect();
                if !w.iter().any(Rational::is_positive) {
                    let i = rng.gen_range(0..dim);
                    w[i] = Rational::one();
                }
                if kind == 1 {
                    Pseudonorm::WeightedL1 { w }
                } else {
                    Pseudonorm::WeightedSup { w }
                }
            }
        })
        .collect();
    PseudonormFamily::new(dim, members).expect("generated members are valid")
}

fn resolve(raw: RawCorpus, sha: String) -> Result<Corpus, CorpusError> {
    if raw.version != SCHEMA_VERSION {
        return Err(resolve_err(
            "version",
            format!("unsupported schema version {} (expected {SCHEMA_VERSION})", raw.version),
        ));
    }
    let has_content = !raw.carriers.is_empty()
        || !raw.exhaustive.is_empty()
        || !raw.sequences.is_empty()
        || raw.random_sequences.as_ref().is_some_and(|r| r.count > 0);
    if !has_content {
        return Err(CorpusError::Empty);
    }
    let seed = raw.seed.unwrap_or(DEFAULT_SEED);
    let bounds = raw.bounds.clone();

    let mut spaces = Vec::new();
    let mut space_map = BTreeMap::new();
    for (id, s) in &raw.spaces {
        let field = format!("spaces.{id}");
        let family = PseudonormFamily::new(s.dim, s.pseudonorms.clone()).map_err(|e| resolve_err(&field, e))?;
        let space = Arc::new(SpaceSpec::new(family));
        for (i, p) in s.points.iter().enumerate() {
            space
                .check_vector(p)
                .map_err(|e| resolve_err(format!("{field}.points[{i}]"), e))?;
        }
        space_map.insert(id.clone(), space.clone());
        spaces.push(SpaceEntry {
            id: id.clone(),
            space,
            points: s.points.clone(),
        });
    }

    let mut r = Resolver {
        raw: &raw,
        spaces: space_map,
        carriers: BTreeMap::new(),
        sequences: BTreeMap::new(),
        nets: BTreeMap::new(),
        maps: BTreeMap::new(),
        filters: BTreeMap::new(),
    };

    let mut carriers = Vec::new();
    for (id, c) in &raw.carriers {
        let field = format!("carriers.{id}");
        let space = r.space(&field, &c.space)?;
        let carrier = Arc::new(
            FiniteCarrier::new(id.clone(), c.points.clone(), space).map_err(|e| resolve_err(&field, e))?,
        );
        r.carriers.insert(id.clone(), carrier.clone());
        carriers.push(carrier);
    }

    let mut generated = Vec::new();
    for (g, ex) in raw.exhaustive.iter().enumerate() {
        let field = format!("exhaustive[{g}]");
        let space = r.space(&field, &ex.space)?;
        let distinct: BTreeSet<_> = ex.grid.iter().collect();
        if distinct.len() != ex.grid.len() || ex.grid.is_empty() {
            return Err(resolve_err(&field, "grid points must be distinct and nonempty"));
        }
        if ex.max_points > DEFAULT_EXHAUSTIVE_BOUND || ex.grid.len() > 20 {
            return Err(resolve_err(
                &field,
                format!("exhaustive generators are bounded at {DEFAULT_EXHAUSTIVE_BOUND} points per carrier and 20 grid points"),
            ));
        }
        for s in ExplicitSet::all_subsets(ex.grid.len()) {
            if s.len() < ex.min_points.max(1) || s.len() > ex.max_points {
                continue;
            }
            let points: Vec<_> = s.indices().map(|i| ex.grid[i].clone()).collect();
            let name = format!(
                "{}{{{}}}",
                ex.id,
                s.indices().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
            );
            let carrier = FiniteCarrier::new(name, points, space.clone()).map_err(|e| resolve_err(&field, e))?;
            generated.push(Arc::new(carrier));
        }
    }
    // Generated carriers are ordered by size, then by grid subset.
    generated.sort_by_key(|c| c.len());

    let mut sequences = Vec::new();
    for (id, s) in &raw.sequences {
        let field = format!("sequences.{id}");
        let space = r.space(&field, &s.space)?;
        if let Some(d) = s.dim {
            if d != space.dim() {
                return Err(resolve_err(&field, format!("dim {d} differs from space dimension {}", space.dim())));
            }
        }
        let coords = s.coeffs.iter().map(|c| Poly::new(c.clone())).collect();
        let seq = Arc::new(
            PolySequence::new(id.clone(), space, coords, bounds.max_degree).map_err(|e| resolve_err(&field, e))?,
        );
        r.sequences.insert(id.clone(), seq.clone());
        sequences.push(seq);
    }

    let mut random_sequences = Vec::new();
    if let Some(spec) = &raw.random_sequences {
        if spec.max_dim == 0 || spec.max_degree > bounds.max_degree {
            return Err(resolve_err(
                "random_sequences",
                format!("need max_dim >= 1 and max_degree <= {}", bounds.max_degree),
            ));
        }
        let mut rng = sampling::rng(seed ^ 0x5eed_5e9);
        for i in 0..spec.count {
            let dim = rng.gen_range(1..=spec.max_dim);
            let space = Arc::new(SpaceSpec::new(random_family(&mut rng, dim)));
            random_sequences.push(Arc::new(sequence::random_sequence(
                &mut rng,
                format!("random#{i}"),
                space,
                spec.max_degree,
            )));
        }
    }

    for (id, n) in &raw.nets {
        let field = format!("nets.{id}");
        let carrier = r.carrier(&field, &n.carrier)?;
        let index = FiniteDirectedSet::from_relation(n.size, &n.order).map_err(|e| resolve_err(&field, e))?;
        let values = match &n.values {
            RawValues::List(v) => v.clone(),
            RawValues::Map(m) => {
                let mut v = vec![usize::MAX; n.size];
                for (k, x) in m {
                    let i: usize = k
                        .parse()
                        .ok()
                        .filter(|&i| i < n.size)
                        .ok_or_else(|| resolve_err(&field, format!("bad index key {k:?}")))?;
                    v[i] = *x;
                }
                if v.contains(&usize::MAX) {
                    return Err(resolve_err(&field, "values must cover every index"));
                }
                v
            }
        };
        let net = FiniteNet::new(index, values, carrier).map_err(|e| resolve_err(&field, e))?;
        r.nets.insert(id.clone(), Arc::new(net));
    }

    for (id, m) in &raw.maps {
        let field = format!("maps.{id}");
        let from = r.carrier(&field, &m.from)?;
        let to = r.carrier(&field, &m.to)?;
        let map = FiniteMap::new(id.clone(), from, to, m.images.clone()).map_err(|e| resolve_err(&field, e))?;
        r.maps.insert(id.clone(), Arc::new(map));
    }

    let ids: Vec<String> = raw.filters.keys().cloned().collect();
    for id in ids {
        if !r.filters.contains_key(&id) {
            let f = r.filter_ref(&format!("filters.{id}"), &FilterRef::Id(id.clone()), 0)?;
            r.filters.insert(id, f);
        }
    }

    let mut neighborhoods = Vec::new();
    for (id, n) in &raw.neighborhoods {
        let field = format!("neighborhoods.{id}");
        let space = r.space(&field, &n.space)?;
        let spec = NeighborhoodSpec::new(n.constraints.clone()).map_err(|e| resolve_err(&field, e))?;
        spec.validate(space.family()).map_err(|e| resolve_err(&field, e))?;
        neighborhoods.push((id.clone(), space, spec));
    }

    let claims = match &raw.claims {
        None => ClaimId::ALL.to_vec(),
        Some(list) => {
            let mut out = Vec::new();
            for (i, c) in list.iter().enumerate() {
                let id: ClaimId = c.parse().map_err(|e| resolve_err(format!("claims[{i}]"), e))?;
                if !out.contains(&id) {
                    out.push(id);
                }
            }
            out.sort();
            out
        }
    };

    Ok(Corpus {
        seed,
        sha,
        spaces,
        carriers,
        generated,
        sequences,
        random_sequences,
        filters: r.filters,
        nets: r.nets,
        maps: r.maps,
        neighborhoods,
        claims,
        bounds,
        manifest: raw.manifest.clone().map(PathBuf::from),
    })
}

impl Corpus {
    /// Replaces the seed and regenerates every seeded object.
    pub fn reseed(bytes: &[u8], seed: u64) -> Result<Corpus, CorpusError> {
        let text = std::str::from_utf8(bytes).map_err(|e| resolve_err("corpus", e))?;
        let mut value: serde_json::Value = serde_json::from_str(text).map_err(|e| CorpusError::Parse {
            message: e.to_string(),
            line: e.line(),
            column: e.column(),
        })?;
        if let Some(obj) = value.as_object_mut() {
            obj.insert("seed".into(), seed.into());
        }
        let raw: RawCorpus = serde_json::from_value(value).map_err(|e| CorpusError::Parse {
            message: e.to_string(),
            line: 0,
            column: 0,
        })?;
        resolve(raw, hex::encode(Sha256::digest(bytes)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{
        "version": 1,
        "seed": 3,
        "spaces": {"R1": {"dim": 1, "pseudonorms": [{"kind": "coord", "j": 0}], "points": [["1"]]}},
        "carriers": {"W": {"space": "R1", "points": [["-1"], ["0"]]}},
        "sequences": {"zero": {"space": "R1", "coeffs": [[]]}},
        "nets": {"n": {"carrier": "W", "size": 2, "order": [[0, 1]], "values": [0, 1]}},
        "filters": {
            "a": {"principal": {"carrier": "W", "minset": [0]}},
            "b": {"join": ["a", {"principal": {"carrier": "W", "minset": [1]}}]},
            "t": {"tail": {"sequence": "zero"}},
            "g": {"generated": {"net": "n"}}
        }
    }"#;

    #[test]
    fn resolves_cross_references() {
        let c = Corpus::from_bytes(SMALL.as_bytes()).unwrap();
        assert_eq!(c.seed, 3);
        assert_eq!(c.filters["b"].minset().unwrap(), ExplicitSet::full(2));
        assert_eq!(c.filters["g"].minset().unwrap(), ExplicitSet::singleton(1));
        assert_eq!(c.claims.len(), ClaimId::ALL.len());
        assert_eq!(c.sha.len(), 64);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let bad = SMALL.replace("\"minset\": [0]", "\"minset\": [7]");
        let err = Corpus::from_bytes(bad.as_bytes()).unwrap_err();
        assert!(err.to_string().starts_with("filters.a"), "{err}");

        let err = Corpus::from_bytes(b"{\"version\": 1,\n \"spaces\": 3}").unwrap_err();
        assert!(matches!(err, CorpusError::Parse { line: 2, .. }), "{err}");

        assert!(matches!(Corpus::from_bytes(b"").unwrap_err(), CorpusError::Empty));
        assert!(matches!(
            Corpus::from_bytes(b"{\"version\": 1}").unwrap_err(),
            CorpusError::Empty
        ));
    }

    #[test]
    fn broken_base_is_rejected_with_axiom() {
        let bad = SMALL.replace(
            "\"g\": {\"generated\": {\"net\": \"n\"}}",
            "\"g\": {\"generated\": {\"carrier\": \"W\", \"elements\": [[0], [1]]}}",
        );
        let err = Corpus::from_bytes(bad.as_bytes()).unwrap_err().to_string();
        assert!(err.contains("intersection-dominated"), "{err}");
    }

    #[test]
    fn zero_weight_pseudonorm_rejected() {
        let bad = SMALL.replace(
            "{\"kind\": \"coord\", \"j\": 0}",
            "{\"kind\": \"l1\", \"w\": [\"0\"]}",
        );
        assert!(Corpus::from_bytes(bad.as_bytes()).is_err());
    }

    #[test]
    fn exhaustive_generator_counts() {
        let text = r#"{
            "version": 1,
            "spaces": {"R1": {"dim": 1, "pseudonorms": [{"kind": "coord", "j": 0}]}},
            "exhaustive": [{"id": "g", "space": "R1", "grid": [["0"], ["1"], ["2"], ["3"]], "max_points": 2}]
        }"#;
        let c = Corpus::from_bytes(text.as_bytes()).unwrap();
        assert_eq!(c.generated.len(), 4 + 6);
        assert_eq!(c.generated[0].name(), "g{0}");
    }
}
