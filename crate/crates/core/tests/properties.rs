use std::sync::Arc;

use proptest::prelude::*;

use riesz_core::filter::Filter;
use riesz_core::finite::{self, oracle, ExplicitSet, FiniteCarrier};
use riesz_core::sequence::{self, PolySequence, Region};
use riesz_core::topology::{NeighborhoodSpec, Pseudonorm, PseudonormFamily};
use riesz_core::{sampling, Rational, RationalVector, SemanticsMode, SpaceSpec};

fn rational() -> impl Strategy<Value = Rational> {
    (-100i64..=100, 1i64..=100).prop_map(|(n, d)| Rational::new(n, d))
}

fn vector(dim: usize) -> impl Strategy<Value = RationalVector> {
    prop::collection::vec(rational(), dim).prop_map(RationalVector::new)
}

fn pair() -> impl Strategy<Value = (RationalVector, RationalVector)> {
    (1usize..=6).prop_flat_map(|d| (vector(d), vector(d)))
}

fn pseudonorm(dim: usize) -> impl Strategy<Value = Pseudonorm> {
    let weights = prop::collection::vec(0i64..=3, dim).prop_filter("a positive weight", |w| w.iter().any(|&x| x > 0));
    prop_oneof![
        (0..dim).prop_map(Pseudonorm::coord),
        weights.clone().prop_map(|w| Pseudonorm::l1(&w)),
        weights.prop_map(|w| Pseudonorm::sup(&w)),
    ]
}

fn small_carrier() -> impl Strategy<Value = Arc<FiniteCarrier>> {
    (1usize..=2)
        .prop_flat_map(|dim| {
            (
                prop::collection::vec(pseudonorm(dim), 1..=2),
                prop::collection::btree_set(prop::collection::vec((-4i64..=4, 1i64..=2), dim), 1..=5),
            )
                .prop_map(move |(family, points)| (dim, family, points))
        })
        .prop_map(|(dim, family, points)| {
            let space = Arc::new(SpaceSpec::new(PseudonormFamily::new(dim, family).unwrap()));
            let mut pts: Vec<RationalVector> = points
                .into_iter()
                .map(|p| RationalVector::new(p.into_iter().map(|(n, d)| Rational::new(n, d)).collect()))
                .collect();
            pts.sort();
            pts.dedup();
            Arc::new(FiniteCarrier::new("w", pts, space).unwrap())
        })
}

fn mode() -> impl Strategy<Value = SemanticsMode> {
    prop_oneof![Just(SemanticsMode::ZeroNbhd), Just(SemanticsMode::Translated)]
}

proptest! {
    #[test]
    fn lattice_decomposition((x, y) in pair()) {
        prop_assert_eq!(&x.pos() - &x.neg_part(), x.clone());
        prop_assert_eq!(&x.pos() + &x.neg_part(), x.abs());
        prop_assert_eq!(&x.sup(&y).unwrap() + &x.inf(&y).unwrap(), &x + &y);
        prop_assert!((&x + &y).abs().leq(&(&x.abs() + &y.abs())).unwrap());
    }

    #[test]
    fn pseudonorms_are_subadditive_and_solid(
        (rho, x, y) in (1usize..=4).prop_flat_map(|d| (pseudonorm(d), vector(d), vector(d)))
    ) {
        let r = |v: &RationalVector| rho.evaluate(v).unwrap();
        prop_assert!(r(&(&x + &y)) <= r(&x) + r(&y));
        prop_assert_eq!(r(&x), r(&x.abs()));
        // |x ∧ y| ≤ |x| + |y|, hence ρ(x ∧ y) ≤ ρ(|x| + |y|).
        prop_assert!(r(&x.inf(&y).unwrap()) <= r(&(&x.abs() + &y.abs())));
    }

    #[test]
    fn enumeration_matches_subset_scan(c in small_carrier(), m in mode(), k in 0usize..5) {
        let e = c.point(k % c.len()).clone();
        let fast: std::collections::BTreeSet<_> = finite::enumerate_restricted_neighborhoods(&c, &e, m)
            .unwrap()
            .into_iter()
            .map(|n| n.set)
            .collect();
        prop_assert_eq!(fast, oracle::qualifying_traces(&c, &e, m).unwrap());
    }

    #[test]
    fn off_carrier_centers_match_subset_scan(c in small_carrier(), m in mode(), shift in rational()) {
        let e = RationalVector::new(vec![shift; c.space().dim()]);
        let fast: std::collections::BTreeSet<_> = finite::enumerate_restricted_neighborhoods(&c, &e, m)
            .unwrap()
            .into_iter()
            .map(|n| n.set)
            .collect();
        prop_assert_eq!(fast, oracle::qualifying_traces(&c, &e, m).unwrap());
    }

    #[test]
    fn principal_filters_satisfy_the_axioms(c in small_carrier(), bits in 1u64..32) {
        let s = ExplicitSet::from_bits(bits).intersection(c.full());
        prop_assume!(!s.is_empty());
        let f = Filter::principal(c.clone(), s).unwrap();
        prop_assert!(oracle::validate_filter_axioms(&f, &c).unwrap().is_none());
    }

    #[test]
    fn remark_one_convergence_implies_cluster(c in small_carrier(), m in mode(), bits in 1u64..32, k in 0usize..5) {
        let s = ExplicitSet::from_bits(bits).intersection(c.full());
        prop_assume!(!s.is_empty());
        let e = c.point(k % c.len()).clone();
        if finite::converges_finite(&c, s, &e, m).unwrap() {
            prop_assert!(finite::cluster_finite(&c, s, &e, m).unwrap());
        }
    }

    #[test]
    fn eventual_verdicts_survive_spot_checks(seed in any::<u64>(), radius in 1i64..20) {
        let mut rng = sampling::rng(seed);
        let space = Arc::new(SpaceSpec::new(PseudonormFamily::new(2, vec![Pseudonorm::l1(&[1, 2])]).unwrap()));
        let seq: PolySequence = sequence::random_sequence(&mut rng, "s", space.clone(), 3);
        let center = sampling::vector(&mut rng, 2, 3, 2);
        let region = Region::Ball {
            center,
            spec: NeighborhoodSpec::ball(0, Rational::new(radius, 8)).unwrap(),
        };
        let verdict = sequence::eventually_in_region(&seq, &region).unwrap();
        prop_assert!(sequence::spot_check(&seq, &region, verdict).unwrap());
    }

    #[test]
    fn sequence_paths_agree(seed in any::<u64>(), m in mode()) {
        let mut rng = sampling::rng(seed);
        let space = Arc::new(SpaceSpec::new(
            PseudonormFamily::new(2, vec![Pseudonorm::coord(1), Pseudonorm::sup(&[1, 1])]).unwrap(),
        ));
        let seq = Arc::new(sequence::random_sequence(&mut rng, "s", space, 3));
        for e in [seq.limit(), sampling::vector(&mut rng, 2, 2, 1)] {
            prop_assert_eq!(
                sequence::seq_converges(&seq, &e, m).unwrap(),
                sequence::filter_converges_seq(&seq, &e, m).unwrap()
            );
        }
    }
}
