use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::Rng;
use serde_json::{json, Value};

use super::{ClaimId, Corpus, CorpusError, Tally};
use crate::error::FilterError;
use crate::filter::{self, Filter, QuerySet, Universe};
use crate::finite::{
    check_continuity_finite, enumerate_restricted_neighborhoods, net_cluster_finite,
    net_converges_finite, oracle, ExplicitSet, FiniteCarrier, FiniteDirectedSet, FiniteMap,
    FiniteNet, RestrictedNeighborhood,
};
use crate::lattice::{Rational, RationalVector};
use crate::par::Execution;
use crate::sampling;
use crate::sequence::{self, PolySequence};
use crate::topology::{self, NeighborhoodSpec};
use crate::verdict::SemanticsMode;

type Res<T> = Result<T, CorpusError>;

fn internal(context: &str) -> impl Fn(FilterError) -> CorpusError + '_ {
    move |e| CorpusError::Resolve {
        field: context.to_string(),
        message: e.to_string(),
    }
}

/// Rejects inputs no claim can be evaluated on.
pub(super) fn preflight(corpus: &Corpus) -> Res<()> {
    for (id, net) in &corpus.nets {
        if let Some((a, b)) = net.index().directedness_witness() {
            return Err(CorpusError::Resolve {
                field: format!("nets.{id}"),
                message: format!("index set is not directed: {a} and {b} have no common upper bound"),
            });
        }
    }
    Ok(())
}

/// Qualifying traces around one center, from both the critical-radius
/// enumeration and the subset-scan oracle.
struct Traces {
    fast: Vec<RestrictedNeighborhood>,
    min: ExplicitSet,
    oracle: BTreeSet<ExplicitSet>,
}

/// Per-carrier cache of [`Traces`] for one mode.
struct Ctx<'a> {
    carrier: &'a Arc<FiniteCarrier>,
    mode: SemanticsMode,
    cache: BTreeMap<RationalVector, Arc<Traces>>,
}

impl<'a> Ctx<'a> {
    fn new(carrier: &'a Arc<FiniteCarrier>, mode: SemanticsMode) -> Self {
        Ctx {
            carrier,
            mode,
            cache: BTreeMap::new(),
        }
    }

    fn n(&self) -> usize {
        self.carrier.len()
    }

    fn subsets(&self) -> impl Iterator<Item = ExplicitSet> {
        ExplicitSet::all_subsets(self.carrier.len()).skip(1)
    }

    fn traces(&mut self, t: &mut Tally, center: &RationalVector) -> Res<Arc<Traces>> {
        if let Some(tr) = self.cache.get(center) {
            return Ok(tr.clone());
        }
        let err = internal(self.carrier.name());
        let fast = enumerate_restricted_neighborhoods(self.carrier, center, self.mode).map_err(&err)?;
        let oracle_sets = oracle::qualifying_traces(self.carrier, center, self.mode).map_err(&err)?;
        let fast_sets: BTreeSet<_> = fast.iter().map(|n| n.set).collect();
        if fast_sets != oracle_sets {
            t.mismatch(|| {
                json!({
                    "check": "trace-enumeration",
                    "carrier": self.carrier.name(),
                    "center": center,
                    "fast": fast_sets,
                    "oracle": oracle_sets,
                })
            });
        }
        let min = fast.iter().fold(self.carrier.full(), |acc, n| acc.intersection(n.set));
        let tr = Arc::new(Traces {
            fast,
            min,
            oracle: oracle_sets,
        });
        self.cache.insert(center.clone(), tr.clone());
        Ok(tr)
    }

    /// `up(s) → e`: minset inside the minimal trace, against subset-scan traces.
    fn conv(&mut self, t: &mut Tally, s: ExplicitSet, e: &RationalVector) -> Res<bool> {
        let tr = self.traces(t, e)?;
        let fast = s.is_subset(tr.min);
        let slow = oracle::converges_by_subfilter(s, &tr.oracle);
        Ok(t.decide(fast, slow, || self.context("converges", s, e)))
    }

    /// Convergence of an arbitrary finite filter: fast via its minset,
    /// oracle via membership of every subset-scan trace.
    fn conv_filter(&mut self, t: &mut Tally, f: &Filter, e: &RationalVector) -> Res<bool> {
        let tr = self.traces(t, e)?;
        let err = internal(self.carrier.name());
        let s = f.minset().map_err(&err)?;
        let fast = s.is_subset(tr.min);
        let mut slow = true;
        for set in &tr.oracle {
            if !f.member(&QuerySet::Explicit(*set)).map_err(&err)? {
                slow = false;
                break;
            }
        }
        Ok(t.decide(fast, slow, || self.context("converges", s, e)))
    }

    fn cluster(&mut self, t: &mut Tally, s: ExplicitSet, e: &RationalVector) -> Res<bool> {
        let tr = self.traces(t, e)?;
        let fast = tr.fast.iter().all(|n| n.set.meets(s));
        let slow = oracle::cluster_by_enumeration(s, self.n(), &tr.oracle);
        Ok(t.decide(fast, slow, || self.context("cluster", s, e)))
    }

    fn context(&self, check: &str, s: ExplicitSet, e: &RationalVector) -> Value {
        json!({
            "check": check,
            "carrier": self.carrier.name(),
            "filter": s,
            "point": e,
        })
    }

    /// Witness that `up(s)` does not converge to `target`.
    fn conv_failure(&mut self, t: &mut Tally, s: ExplicitSet, target: &RationalVector, given: Value) -> Res<Value> {
        let tr = self.traces(t, target)?;
        let n = tr.fast.iter().find(|n| !s.is_subset(n.set));
        Ok(json!({
            "violation": "convergence",
            "carrier": self.carrier.name(),
            "filter": s,
            "filter_points": self.carrier.set_points(s),
            "given": given,
            "target": target,
            "neighborhood": n.map(|n| n.to_json(self.carrier)),
        }))
    }

    fn cluster_failure(&mut self, t: &mut Tally, s: ExplicitSet, target: &RationalVector, given: Value) -> Res<Value> {
        let tr = self.traces(t, target)?;
        let n = tr.fast.iter().find(|n| !n.set.meets(s));
        Ok(json!({
            "violation": "cluster",
            "carrier": self.carrier.name(),
            "filter": s,
            "filter_points": self.carrier.set_points(s),
            "given": given,
            "target": target,
            "neighborhood": n.map(|n| n.to_json(self.carrier)),
        }))
    }
}

fn principal(c: &Arc<FiniteCarrier>, s: ExplicitSet) -> Filter {
    Filter::Principal {
        carrier: c.clone(),
        minset: s,
    }
}

fn member_list(f: &Filter, c: &FiniteCarrier) -> Res<BTreeSet<ExplicitSet>> {
    Ok(oracle::members(f, c)
        .map_err(internal(c.name()))?
        .into_iter()
        .collect())
}

/// Runs `body` on every carrier of at most `bound` points and merges the tallies in order.
fn finite_sweep<F>(corpus: &Corpus, bound: usize, exec: Execution, mode: SemanticsMode, body: F) -> Res<Tally>
where
    F: Fn(&mut Ctx<'_>, &mut Tally) -> Res<()> + Sync + Send,
{
    let carriers: Vec<_> = corpus.all_carriers().filter(|c| c.len() <= bound).cloned().collect();
    let parts = exec.try_map(&carriers, |c| {
        let mut ctx = Ctx::new(c, mode);
        let mut t = Tally::default();
        body(&mut ctx, &mut t)?;
        Ok(t)
    })?;
    let mut total = Tally::default();
    for p in parts {
        total.merge(p);
    }
    Ok(total)
}

pub(super) fn run_claim(
    corpus: &Corpus,
    claim: ClaimId,
    mode: Option<SemanticsMode>,
    exec: Execution,
) -> Res<(Tally, Vec<String>)> {
    let b = &corpus.bounds;
    let m = || mode.expect("mode-dependent claim");
    let mut notes = Vec::new();
    let tally = match claim {
        ClaimId::Rem1 => finite_sweep(corpus, b.finite, exec, m(), rem1)?,
        ClaimId::Rem2 => finite_sweep(corpus, b.finite, exec, m(), rem2)?,
        ClaimId::Prop1a => finite_sweep(corpus, b.finite, exec, m(), |ctx, t| {
            let hyps = point_pairs(ctx.carrier, |e, x| e.is_positive() && x.is_positive());
            preservation(ctx, t, &hyps)
        })?,
        ClaimId::Prop1b => finite_sweep(corpus, b.finite, exec, m(), |ctx, t| {
            let hyps = point_pairs(ctx.carrier, |e, x| e.is_disjoint(x).unwrap_or(false));
            preservation(ctx, t, &hyps)
        })?,
        ClaimId::Prop2 => finite_sweep(corpus, b.finite, exec, m(), |ctx, t| {
            let hyps: Vec<_> = ctx
                .carrier
                .points()
                .iter()
                .map(|e| (json!({"e": e}), e.clone(), vec![e.abs()]))
                .collect();
            preservation(ctx, t, &hyps)
        })?,
        ClaimId::Prop3 => finite_sweep(corpus, b.finite, exec, m(), |ctx, t| {
            let hyps: Vec<_> = ctx
                .carrier
                .points()
                .iter()
                .map(|e| (json!({"e": e}), e.clone(), vec![e.pos(), e.neg_part()]))
                .collect();
            preservation(ctx, t, &hyps)
        })?,
        ClaimId::ThmJoin => finite_sweep(corpus, b.pairs, exec, m(), |ctx, t| pair_construction(ctx, t, true))?,
        ClaimId::ThmMeet => finite_sweep(corpus, b.pairs, exec, m(), |ctx, t| pair_construction(ctx, t, false))?,
        ClaimId::ThmCluster => finite_sweep(corpus, b.finite, exec, m(), cluster_characterization)?,
        ClaimId::ThmNetFilter => {
            notes.push(sequence::FREQUENTLY_NOTE.to_string());
            let mut t = net_filter_finite(corpus, m(), exec)?;
            t.merge(net_filter_sequences(corpus, m(), exec)?);
            t
        }
        ClaimId::CorPseudo => corollary(corpus, m(), exec)?,
        ClaimId::PropCont => continuity(corpus, m(), exec)?,
        ClaimId::Ex2Filterhood => {
            let t = finite_sweep(corpus, b.finite, exec, m(), ex2)?;
            if t.instances > 0 && t.mismatches == 0 {
                notes.push("the up-closed neighborhood filter satisfied every filter axiom on every instance".into());
            }
            t
        }
        ClaimId::BaseAxioms => base_axioms(corpus)?,
        ClaimId::PseudoAxioms => pseudo_axioms(corpus)?,
    };
    Ok((tally, notes))
}

fn rem1(ctx: &mut Ctx<'_>, t: &mut Tally) -> Res<()> {
    let points = ctx.carrier.points().to_vec();
    for s in ctx.subsets() {
        for e in &points {
            t.instance();
            let conv = ctx.conv(t, s, e)?;
            let cl = ctx.cluster(t, s, e)?;
            if conv && !cl {
                let w = ctx.cluster_failure(t, s, e, json!({"converges_to": e}))?;
                t.counterexample(|| w);
            }
        }
    }
    Ok(())
}

fn rem2(ctx: &mut Ctx<'_>, t: &mut Tally) -> Res<()> {
    let points = ctx.carrier.points().to_vec();
    let subsets: Vec<_> = ctx.subsets().collect();
    let members: Vec<_> = subsets
        .iter()
        .map(|&s| member_list(&principal(ctx.carrier, s), ctx.carrier))
        .collect::<Res<_>>()?;
    for (i, &s1) in subsets.iter().enumerate() {
        for (j, &s2) in subsets.iter().enumerate() {
            let f1 = principal(ctx.carrier, s1);
            let f2 = principal(ctx.carrier, s2);
            let fast = filter::is_subfilter(&f1, &f2).map_err(internal(ctx.carrier.name()))?;
            let slow = members[i].is_subset(&members[j]);
            let sub = t.decide(fast, slow, || json!({"check": "subfilter", "carrier": ctx.carrier.name(), "f1": s1, "f2": s2}));
            if !sub {
                continue;
            }
            for e in &points {
                t.instance();
                if ctx.conv(t, s1, e)? && !ctx.conv(t, s2, e)? {
                    let w = ctx.conv_failure(t, s2, e, json!({"finer_than": s1, "coarse_converges_to": e}))?;
                    t.counterexample(|| w);
                }
            }
        }
    }
    Ok(())
}

fn point_pairs(
    c: &FiniteCarrier,
    keep: impl Fn(&RationalVector, &RationalVector) -> bool,
) -> Vec<(Value, RationalVector, Vec<RationalVector>)> {
    let mut out = Vec::new();
    for e in c.points() {
        for x in c.points() {
            if keep(e, x) {
                out.push((json!({"e": e, "x": x}), e.clone(), vec![e + x]));
            }
        }
    }
    out
}

/// For every filter and hypothesis `(e, targets)`: `F → e` implies `F → target` for each target.
fn preservation(
    ctx: &mut Ctx<'_>,
    t: &mut Tally,
    hyps: &[(Value, RationalVector, Vec<RationalVector>)],
) -> Res<()> {
    for s in ctx.subsets() {
        for (given, e, targets) in hyps {
            t.instance();
            if !ctx.conv(t, s, e)? {
                continue;
            }
            for target in targets {
                if !ctx.conv(t, s, target)? {
                    let w = ctx.conv_failure(t, s, target, given.clone())?;
                    t.counterexample(|| w);
                    break;
                }
            }
        }
    }
    Ok(())
}

/// The join and meet theorems: for `F₁ → e`, `F₂ → x` with `e, x` positive or
/// disjoint, the construction is a filter and converges to `e + x`.
fn pair_construction(ctx: &mut Ctx<'_>, t: &mut Tally, join: bool) -> Res<()> {
    let carrier = ctx.carrier.clone();
    let name = carrier.name().to_string();
    let err = internal(&name);
    let hyps = point_pairs(&carrier, |e, x| {
        (e.is_positive() && x.is_positive()) || e.is_disjoint(x).unwrap_or(false)
    });
    let subsets: Vec<_> = ctx.subsets().collect();
    let members: Vec<_> = subsets
        .iter()
        .map(|&s| member_list(&principal(&carrier, s), &carrier))
        .collect::<Res<_>>()?;
    for (i, &s1) in subsets.iter().enumerate() {
        for (j, &s2) in subsets.iter().enumerate() {
            let mut satisfied = Vec::new();
            for (given, e, targets) in &hyps {
                let x = &given["x"];
                let x: RationalVector = serde_json::from_value(x.clone()).expect("pair hypothesis");
                if ctx.conv(t, s1, e)? && ctx.conv(t, s2, &x)? {
                    satisfied.push((given, &targets[0]));
                }
            }
            if satisfied.is_empty() {
                continue;
            }
            let (f1, f2) = (principal(&carrier, s1), principal(&carrier, s2));
            let built = if join {
                filter::join_filter(&f1, &f2)
            } else {
                filter::meet_filter(&f1, &f2)
            };
            let f = match built {
                Ok(f) => f,
                Err(FilterError::Construction { axiom, witness }) => {
                    for (given, target) in &satisfied {
                        t.instance();
                        t.construction_error(|| {
                            json!({
                                "carrier": name,
                                "f1": s1,
                                "f2": s2,
                                "given": given,
                                "target": target,
                                "axiom": axiom,
                                "detail": witness,
                            })
                        });
                    }
                    continue;
                }
                Err(e) => return Err(err(e)),
            };
            // Filterhood and the literal family law, both from explicit member lists.
            let axioms = oracle::validate_filter_axioms(&f, &carrier).map_err(&err)?;
            let literal = if join {
                oracle::literal_join_class(
                    &members[i].iter().copied().collect::<Vec<_>>(),
                    &members[j].iter().copied().collect::<Vec<_>>(),
                )
            } else {
                oracle::literal_meet_class(
                    &members[i].iter().copied().collect::<Vec<_>>(),
                    &members[j].iter().copied().collect::<Vec<_>>(),
                )
            };
            let got = member_list(&f, &carrier)?;
            t.decide(true, got == literal, || {
                json!({"check": "family-law", "carrier": name, "f1": s1, "f2": s2})
            });
            let minset = f.minset().map_err(&err)?;
            for (given, target) in &satisfied {
                t.instance();
                if let Some((axiom, sets)) = &axioms {
                    t.counterexample(|| {
                        json!({"violation": "filterhood", "carrier": name, "f1": s1, "f2": s2, "axiom": axiom, "sets": sets})
                    });
                    continue;
                }
                if !ctx.conv_filter(t, &f, target)? {
                    let mut w = ctx.conv_failure(t, minset, target, (*given).clone())?;
                    w["f1"] = json!(s1);
                    w["f2"] = json!(s2);
                    t.counterexample(|| w);
                }
            }
        }
    }
    Ok(())
}

/// `e` is a cluster point of `F` iff some filter containing `F` converges to `e`.
fn cluster_characterization(ctx: &mut Ctx<'_>, t: &mut Tally) -> Res<()> {
    let carrier = ctx.carrier.clone();
    let name = carrier.name().to_string();
    let err = internal(&name);
    let mode = ctx.mode;
    for s in ctx.subsets().collect::<Vec<_>>() {
        for e in carrier.points() {
            t.instance();
            let cl = ctx.cluster(t, s, e)?;
            // Oracle side: search all principal superfilters up(T), T ⊆ s.
            let tr = ctx.traces(t, e)?;
            let superfilter = ExplicitSet::all_subsets(carrier.len())
                .skip(1)
                .filter(|x| x.is_subset(s))
                .find(|x| oracle::converges_by_subfilter(*x, &tr.oracle));
            if cl != superfilter.is_some() {
                t.counterexample(|| {
                    json!({"violation": "characterization", "carrier": name, "filter": s, "point": e, "cluster": cl, "superfilter": superfilter})
                });
                continue;
            }
            let f = principal(&carrier, s);
            match filter::finer_filter_witness(&f, e, mode) {
                Ok(g) => {
                    let ok_axioms = oracle::validate_filter_axioms(&g, &carrier).map_err(&err)?.is_none();
                    let finer = filter::is_subfilter(&f, &g).map_err(&err)?;
                    let conv = ctx.conv_filter(t, &g, e)?;
                    if !(cl && ok_axioms && finer && conv) {
                        t.counterexample(|| {
                            json!({
                                "violation": "finer-filter", "carrier": name, "filter": s, "point": e,
                                "cluster": cl, "axioms": ok_axioms, "finer": finer, "converges": conv,
                            })
                        });
                    }
                }
                Err(FilterError::Construction { .. }) if !cl => {}
                Err(FilterError::Construction { axiom, witness }) => t.counterexample(|| {
                    json!({"violation": "finer-filter", "carrier": name, "filter": s, "point": e, "axiom": axiom, "detail": witness})
                }),
                Err(other) => return Err(err(other)),
            }
        }
    }
    Ok(())
}

fn net_instances(
    ctx: &mut Ctx<'_>,
    t: &mut Tally,
    net: &Arc<FiniteNet>,
    label: &Value,
) -> Res<()> {
    let name = ctx.carrier.name().to_string();
    let err = internal(&name);
    let f = filter::associated_filter_finite(net).map_err(&err)?;
    let s = f.minset().map_err(&err)?;
    for e in ctx.carrier.points().to_vec() {
        t.instance();
        let net_conv = net_converges_finite(net, &e, ctx.mode).map_err(&err)?;
        let filter_conv = ctx.conv_filter(t, &f, &e)?;
        let net_cl = net_cluster_finite(net, &e, ctx.mode).map_err(&err)?;
        let fast_cl = filter::is_cluster_point(&f, &e, ctx.mode).map_err(&err)?;
        let slow_cl = oracle::cluster_by_enumeration(s, ctx.n(), &ctx.traces(t, &e)?.oracle);
        let filter_cl = t.decide(fast_cl, slow_cl, || json!({"check": "cluster", "carrier": name, "filter": s, "point": e}));
        if net_conv != filter_conv || net_cl != filter_cl {
            t.counterexample(|| {
                json!({
                    "net": label, "point": e, "tail_minset": s,
                    "net_converges": net_conv, "filter_converges": filter_conv,
                    "net_cluster": net_cl, "filter_cluster": filter_cl,
                })
            });
        }
    }
    Ok(())
}

fn net_filter_finite(corpus: &Corpus, mode: SemanticsMode, exec: Execution) -> Res<Tally> {
    let b = &corpus.bounds;
    let carriers: Vec<_> = corpus
        .carriers
        .iter()
        .filter(|c| c.len() <= b.net_carrier)
        .cloned()
        .collect();
    let orders: Vec<FiniteDirectedSet> = (1..=b.net_index).flat_map(FiniteDirectedSet::all_directed).collect();
    let parts = exec.try_map(&carriers, |c| {
        let mut ctx = Ctx::new(c, mode);
        let mut t = Tally::default();
        let n = c.len();
        for order in &orders {
            let size = order.len();
            for code in 0..(n as u64).pow(size as u32) {
                let mut values = vec![0; size];
                let mut rest = code;
                for v in values.iter_mut() {
                    *v = (rest % n as u64) as usize;
                    rest /= n as u64;
                }
                let net = Arc::new(FiniteNet::new(order.clone(), values, c.clone()).map_err(internal(c.name()))?);
                let label = net.to_json();
                net_instances(&mut ctx, &mut t, &net, &label)?;
            }
        }
        Ok(t)
    })?;
    let mut total = Tally::default();
    for p in parts {
        total.merge(p);
    }
    for (id, net) in &corpus.nets {
        let mut ctx = Ctx::new(net.carrier(), mode);
        let mut t = Tally::default();
        net_instances(&mut ctx, &mut t, net, &json!({"id": id}))?;
        total.merge(t);
    }
    Ok(total)
}

/// Test points for a sequence: 0, its limit, limit + e₁, and the space's declared points.
fn sequence_points(corpus: &Corpus, seq: &PolySequence) -> Vec<RationalVector> {
    let zero = seq.space().zero();
    let limit = seq.limit();
    let mut shift = vec![Rational::zero(); seq.dim()];
    shift[0] = Rational::one();
    let bumped = &limit + &RationalVector::new(shift);
    let mut out: Vec<RationalVector> = Vec::new();
    for p in [zero, limit, bumped].into_iter().chain(corpus.points_for(seq.space())) {
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

fn sequence_json(seq: &PolySequence) -> Value {
    json!({"sequence": seq.name(), "coeffs": seq.coords()})
}

fn net_filter_sequences(corpus: &Corpus, mode: SemanticsMode, exec: Execution) -> Res<Tally> {
    let seqs: Vec<_> = corpus.all_sequences().cloned().collect();
    let parts = exec.try_map(&seqs, |seq| {
        let err = internal(seq.name());
        let mut t = Tally::default();
        for e in sequence_points(corpus, seq) {
            t.instance();
            for region in sequence::critical_test_regions(seq, &e, mode).map_err(&err)? {
                let verdict = sequence::eventually_in_region(seq, &region).map_err(&err)?;
                if !sequence::spot_check(seq, &region, verdict).map_err(&err)? {
                    t.mismatch(|| json!({"check": "spot-check", "sequence": sequence_json(seq), "region": region, "verdict": verdict}));
                }
            }
            let net_conv = sequence::seq_converges(seq, &e, mode).map_err(&err)?;
            let filter_conv = sequence::filter_converges_seq(seq, &e, mode).map_err(&err)?;
            let net_cl = sequence::net_cluster_seq(seq, &e, mode).map_err(&err)?;
            let filter_cl = sequence::cluster_point_seq(seq, &e, mode).map_err(&err)?;
            if net_conv != filter_conv || net_cl != filter_cl {
                t.counterexample(|| {
                    json!({
                        "net": sequence_json(seq), "point": e,
                        "net_converges": net_conv, "filter_converges": filter_conv,
                        "net_cluster": net_cl, "filter_cluster": filter_cl,
                    })
                });
            }
        }
        Ok(t)
    })?;
    let mut total = Tally::default();
    for p in parts {
        total.merge(p);
    }
    Ok(total)
}

/// Filter convergence against "every `ρ_j(x_k − e) → 0`".
fn corollary(corpus: &Corpus, mode: SemanticsMode, exec: Execution) -> Res<Tally> {
    let seqs: Vec<_> = corpus.all_sequences().cloned().collect();
    let parts = exec.try_map(&seqs, |seq| {
        let err = internal(seq.name());
        let mut t = Tally::default();
        for e in sequence_points(corpus, seq) {
            t.instance();
            let fast = sequence::filter_converges_seq(seq, &e, mode).map_err(&err)?;
            let slow = sequence::seq_converges(seq, &e, mode).map_err(&err)?;
            let filter_conv = t.decide(fast, slow, || json!({"check": "converges", "sequence": sequence_json(seq), "point": e}));
            let limits = sequence::pseudonorm_limits(seq, &e).map_err(&err)?;
            let vanish = limits.iter().all(Rational::is_zero);
            if filter_conv != vanish {
                t.counterexample(|| {
                    json!({
                        "violation": "corollary",
                        "sequence": seq.name(),
                        "coeffs": seq.coords(),
                        "point": e,
                        "filter_converges": filter_conv,
                        "pseudonorm_limits": limits,
                    })
                });
            }
        }
        Ok(t)
    })?;
    let mut total = Tally::default();
    for p in parts {
        total.merge(p);
    }
    Ok(total)
}

/// Continuity by subset-scan traces.
fn continuity_oracle(map: &FiniteMap, mode: SemanticsMode) -> Result<bool, FilterError> {
    for (i, e) in map.from().points().iter().enumerate() {
        let fe = map.to().point(map.images()[i]);
        let source = oracle::qualifying_traces(map.from(), e, mode)?;
        for n in oracle::qualifying_traces(map.to(), fe, mode)? {
            let pre = map.preimage(n);
            if !source.iter().any(|s| s.is_subset(pre)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn map_instance(
    t: &mut Tally,
    src: &mut Ctx<'_>,
    dst: &mut Ctx<'_>,
    map: &Arc<FiniteMap>,
) -> Res<()> {
    let mode = src.mode;
    let label = format!("{}->{}", map.from().name(), map.to().name());
    let err = internal(&label);
    t.instance();
    let fast = check_continuity_finite(map, mode).map_err(&err)?;
    let slow = continuity_oracle(map, mode).map_err(&err)?;
    let continuous = t.decide(fast.continuous, slow, || json!({"check": "continuity", "map": label, "images": map.images()}));

    let mut filter_side = true;
    let mut failure = Value::Null;
    'outer: for s in src.subsets().collect::<Vec<_>>() {
        let pushed = filter::pushforward(map, &principal(src.carrier, s)).map_err(&err)?;
        for (i, e) in map.from().points().iter().enumerate() {
            if !src.conv(t, s, e)? {
                continue;
            }
            let fe = map.to().point(map.images()[i]).clone();
            if !dst.conv_filter(t, &pushed, &fe)? {
                filter_side = false;
                failure = json!({"filter": s, "e": e, "f_e": fe, "image": map.image(s)});
                break 'outer;
            }
        }
    }
    if continuous != filter_side {
        t.counterexample(|| {
            json!({
                "violation": "continuity",
                "map": label,
                "images": map.images(),
                "continuous": continuous,
                "continuity_witness": fast.witness,
                "filter_side": filter_side,
                "filter_failure": failure,
            })
        });
        return Ok(());
    }
    if continuous {
        // 𝒩_{f(e)} ⊆ f́𝒩_e at every point.
        for (i, e) in map.from().points().iter().enumerate() {
            let fe = map.to().point(map.images()[i]);
            let n_e = filter::neighborhood_filter(e, &Universe::Finite(map.from().clone()), mode).map_err(&err)?;
            let n_fe = filter::neighborhood_filter(fe, &Universe::Finite(map.to().clone()), mode).map_err(&err)?;
            let pushed = filter::pushforward(map, &n_e).map_err(&err)?;
            if !filter::is_subfilter(&n_fe, &pushed).map_err(&err)? {
                t.counterexample(|| {
                    json!({"violation": "lemma", "map": label, "images": map.images(), "e": e, "f_e": fe})
                });
                break;
            }
        }
    }
    Ok(())
}

fn continuity(corpus: &Corpus, mode: SemanticsMode, exec: Execution) -> Res<Tally> {
    let small: Vec<_> = corpus
        .carriers
        .iter()
        .filter(|c| c.len() <= corpus.bounds.maps)
        .cloned()
        .collect();
    let pairs: Vec<_> = small
        .iter()
        .flat_map(|a| small.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    let parts = exec.try_map(&pairs, |(a, b)| {
        let mut t = Tally::default();
        let mut src = Ctx::new(a, mode);
        let mut dst = Ctx::new(b, mode);
        for map in FiniteMap::all_maps(a, b) {
            map_instance(&mut t, &mut src, &mut dst, &Arc::new(map))?;
        }
        Ok(t)
    })?;
    let mut total = Tally::default();
    for p in parts {
        total.merge(p);
    }
    for map in corpus.maps.values() {
        let mut src = Ctx::new(map.from(), mode);
        let mut dst = Ctx::new(map.to(), mode);
        let mut t = Tally::default();
        map_instance(&mut t, &mut src, &mut dst, map)?;
        total.merge(t);
    }
    Ok(total)
}

/// Whether the bare class of qualifying traces is itself a filter, and whether its up-closure is.
fn ex2(ctx: &mut Ctx<'_>, t: &mut Tally) -> Res<()> {
    let carrier = ctx.carrier.clone();
    let err = internal(carrier.name());
    for e in carrier.points() {
        t.instance();
        let tr = ctx.traces(t, e)?;
        let literal: BTreeSet<_> = tr.fast.iter().map(|n| n.set).collect();
        if let Some((axiom, sets)) = oracle::filter_axiom_violation(&literal, carrier.len()) {
            t.counterexample(|| {
                json!({
                    "class": "literal",
                    "carrier": carrier.name(),
                    "e": e,
                    "axiom": axiom,
                    "sets": sets,
                    "points": sets.iter().map(|s| carrier.set_points(*s)).collect::<Vec<_>>(),
                })
            });
        }
        let upclosed = filter::neighborhood_filter(e, &Universe::Finite(carrier.clone()), ctx.mode).map_err(&err)?;
        if let Some((axiom, sets)) = oracle::validate_filter_axioms(&upclosed, &carrier).map_err(&err)? {
            // The constructor guarantees filterhood; the validator disagreeing is an oracle mismatch.
            t.mismatch(|| {
                json!({"class": "up-closed", "carrier": carrier.name(), "e": e, "axiom": axiom, "sets": sets})
            });
        }
    }
    Ok(())
}

fn claim_seed(corpus: &Corpus, claim: ClaimId, index: usize) -> u64 {
    let salt = claim
        .as_str()
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3));
    corpus.seed ^ salt ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn random_spec<R: Rng>(rng: &mut R, family_len: usize) -> NeighborhoodSpec {
    let k = rng.gen_range(1..=family_len.min(3));
    let constraints = (0..k)
        .map(|_| (rng.gen_range(0..family_len), sampling::positive_rational(rng, 5, 4)))
        .collect();
    NeighborhoodSpec::new(constraints).expect("positive radii")
}

fn base_axioms(corpus: &Corpus) -> Res<Tally> {
    let mut t = Tally::default();
    for (i, entry) in corpus.spaces.iter().enumerate() {
        let family = entry.space.family();
        let mut specs: Vec<NeighborhoodSpec> = corpus
            .neighborhoods
            .iter()
            .filter(|(_, s, _)| **s == *entry.space)
            .map(|(_, _, spec)| spec.clone())
            .collect();
        let seed = claim_seed(corpus, ClaimId::BaseAxioms, i);
        let mut rng = sampling::rng(seed);
        specs.extend((0..corpus.bounds.random_specs).map(|_| random_spec(&mut rng, family.len())));
        if specs.is_empty() {
            continue;
        }
        let witnesses = topology::audit_base_axioms(family, &specs, seed)
            .map_err(|e| internal(&entry.id)(e.into()))?;
        for w in witnesses {
            t.instance();
            if !w.holds {
                t.counterexample(|| json!({"space": entry.id, "witness": w}));
            }
        }
    }
    Ok(t)
}

fn pseudo_axioms(corpus: &Corpus) -> Res<Tally> {
    let mut t = Tally::default();
    for (i, entry) in corpus.spaces.iter().enumerate() {
        let mut rng = sampling::rng(claim_seed(corpus, ClaimId::PseudoAxioms, i));
        for rho in entry.space.family().members() {
            t.instance();
            let v = topology::audit_shipped(rho, entry.space.dim(), corpus.bounds.pseudo_pairs, &mut rng)
                .map_err(|e| internal(&entry.id)(e.into()))?;
            if !v.is_holds() {
                t.counterexample(|| json!({"space": entry.id, "witness": v.witness}));
            }
        }
    }
    Ok(t)
}

/// Re-checks a counterexample witness against the primitive definitions:
/// the neighborhood is rebuilt from its spec with `nbhd_contains`, checked to
/// qualify for the target, and tested with `member`. `Ok(true)` means the
/// violation reproduces.
pub fn replay_witness(corpus: &Corpus, mode: SemanticsMode, witness: &Value) -> Result<bool, String> {
    let kind = witness["violation"].as_str().unwrap_or_default();
    match kind {
        "convergence" | "cluster" => {
            let name = witness["carrier"].as_str().ok_or("witness names no carrier")?;
            let carrier = corpus.carrier(name).ok_or_else(|| format!("unknown carrier {name}"))?;
            let s: ExplicitSet = serde_json::from_value(witness["filter"].clone()).map_err(|e| e.to_string())?;
            let target: RationalVector = serde_json::from_value(witness["target"].clone()).map_err(|e| e.to_string())?;
            let n = &witness["neighborhood"];
            let spec: NeighborhoodSpec = serde_json::from_value(n["spec"].clone()).map_err(|e| e.to_string())?;
            let shift: RationalVector = serde_json::from_value(n["shift"].clone()).map_err(|e| e.to_string())?;
            let claimed: ExplicitSet = serde_json::from_value(n["set"].clone()).map_err(|e| e.to_string())?;
            let family = carrier.space().family();
            let qualifies = match mode {
                SemanticsMode::ZeroNbhd => {
                    shift.is_zero() && topology::nbhd_contains(&spec, family, &target).map_err(|e| e.to_string())?
                }
                SemanticsMode::Translated => shift == target,
            };
            if !qualifies {
                return Ok(false);
            }
            let mut trace = ExplicitSet::EMPTY;
            for (i, p) in carrier.points().iter().enumerate() {
                let d = p.try_sub(&shift).map_err(|e| e.to_string())?;
                if topology::nbhd_contains(&spec, family, &d).map_err(|e| e.to_string())? {
                    trace = trace.with(i);
                }
            }
            if trace != claimed {
                return Ok(false);
            }
            let f = Filter::principal(carrier.clone(), s).map_err(|e| e.to_string())?;
            if kind == "convergence" {
                Ok(!f.member(&QuerySet::Explicit(trace)).map_err(|e| e.to_string())?)
            } else {
                // U ∩ S = ∅ with S ∈ 𝓕.
                Ok(f.member(&QuerySet::Explicit(s)).map_err(|e| e.to_string())? && !trace.meets(s))
            }
        }
        "corollary" => {
            let name = witness["sequence"].as_str().ok_or("witness names no sequence")?;
            let seq = corpus.sequence(name).ok_or_else(|| format!("unknown sequence {name}"))?;
            let e: RationalVector = serde_json::from_value(witness["point"].clone()).map_err(|e| e.to_string())?;
            let tail = Filter::SequenceTail(seq.clone());
            let mut converges = true;
            for region in sequence::critical_test_regions(seq, &e, mode).map_err(|e| e.to_string())? {
                converges &= tail.member(&QuerySet::Region(region)).map_err(|e| e.to_string())?;
            }
            let limits = sequence::pseudonorm_limits(seq, &e).map_err(|e| e.to_string())?;
            Ok(converges != limits.iter().all(Rational::is_zero))
        }
        other => Err(format!("no replay for witness kind {other:?}")),
    }
}
