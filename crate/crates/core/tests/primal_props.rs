mod common;

use std::sync::Arc;

use proptest::prelude::*;

use common::{q, Fam, NormOracle, Space, Q};
use tsinorm_core::corpus::{sample_vectors, small_grid, standard_grid};
use tsinorm_core::families::{ExplicitFamily, Level, Theta};
use tsinorm_core::primal::{
    fj_norm, fj_norm_level, mixed_norm, verify_certificate, LevelEvaluator, PrimalCertificate, PrimalEvaluator,
    Strategy as Eval, Witness,
};
use tsinorm_core::{AdmissibilityFamily, FinVec, MixedSpaceSpec, Rational};

fn mixed_spec() -> (MixedSpaceSpec, Space) {
    let mut explicit = vec![vec![2, 3], vec![3, 5, 6], vec![1, 4]];
    explicit.extend((1..=6).map(|i| vec![i]));
    let spec = MixedSpaceSpec::new(
        "mixed-test",
        vec![
            Level { family: AdmissibilityFamily::Schreier1, theta: Theta::Rational("1/2".parse().unwrap()) },
            Level {
                family: AdmissibilityFamily::ExplicitFinite(ExplicitFamily::new(explicit.clone()).unwrap()),
                theta: Theta::Rational("2/3".parse().unwrap()),
            },
            Level { family: AdmissibilityFamily::CardinalityAtMost(3), theta: Theta::Rational("1/3".parse().unwrap()) },
        ],
        None,
    )
    .unwrap();
    let oracle = Space {
        levels: vec![(Fam::Schreier, q("1/2")), (Fam::Explicit(explicit), q("2/3")), (Fam::Card(3), q("1/3"))],
    };
    (spec, oracle)
}

#[test]
fn fj_norm_matches_brute_force() {
    let mut oracle = NormOracle::new(Space::tsirelson());
    for x in sample_vectors(6, &standard_grid(), 400, 1) {
        let (v, _) = fj_norm(&x);
        assert_eq!(common::qlib(&v), oracle.norm(&common::from_lib(&x)), "{x}");
    }
    for x in sample_vectors(9, &small_grid(), 60, 2) {
        let (v, _) = fj_norm(&x);
        assert_eq!(common::qlib(&v), oracle.norm(&common::from_lib(&x)), "{x}");
    }
}

#[test]
fn mixed_norm_matches_brute_force() {
    let (spec, space) = mixed_spec();
    let mut oracle = NormOracle::new(space);
    for x in sample_vectors(6, &standard_grid(), 300, 3) {
        let m = mixed_norm(&spec, &x).unwrap();
        let v = m.value.as_point().expect("rational space");
        assert_eq!(common::qlib(v), oracle.norm(&common::from_lib(&x)), "{x}");
    }
}

#[test]
fn level_values_match_brute_force() {
    let mut oracle = NormOracle::new(Space::tsirelson());
    for x in sample_vectors(5, &standard_grid(), 80, 4) {
        let ox = common::from_lib(&x);
        let mut prev = Q::from_integer(0.into());
        for n in 0..=3 {
            let got = common::qlib(&fj_norm_level(&x, n));
            assert_eq!(got, oracle.norm_level(&ox, n), "{x} at level {n}");
            assert!(got >= prev);
            prev = got;
        }
        assert_eq!(common::qlib(&fj_norm_level(&x, 8)), oracle.norm(&ox), "{x}");
    }
    let (spec, space) = mixed_spec();
    let mut oracle = NormOracle::new(space);
    let mut ev = LevelEvaluator::new(&spec).unwrap();
    for x in sample_vectors(5, &standard_grid(), 40, 5) {
        for n in 0..=2 {
            assert_eq!(common::qlib(&ev.eval(&x, n)), oracle.norm_level(&common::from_lib(&x), n), "{x} at {n}");
        }
    }
}

#[test]
fn strategies_agree() {
    let (spec, _) = mixed_spec();
    for s in [MixedSpaceSpec::tsirelson(), spec] {
        let mut memo = PrimalEvaluator::new(&s, 0, Eval::Memoized);
        let mut direct = PrimalEvaluator::new(&s, 0, Eval::Direct);
        for x in sample_vectors(7, &standard_grid(), 300, 6) {
            assert_eq!(memo.eval(&x).value, direct.eval(&x).value, "{x}");
        }
    }
}

#[test]
fn schlumprecht_enclosures() {
    let s = MixedSpaceSpec::schlumprecht();
    let mut thetas = Vec::new();
    for l in 1..=4u64 {
        let (lo, hi) = common::inv_log2_bounds(l + 1, 1 << 14);
        thetas.push(common::Iv(lo, hi));
    }
    for x in [FinVec::ones(1..=2), FinVec::ones(1..=3), FinVec::ones(2..=5), "1:1 2:1/2 4:2".parse().unwrap()] {
        let m = mixed_norm(&s, &x).unwrap();
        assert!(m.value.width() <= Rational::pow2(-32));
        let brute = common::interval_norm(&thetas, &common::from_lib(&x));
        // The oracle enclosure is wider; the two must overlap.
        let (lo, hi) = (common::qlib(m.value.lo()), common::qlib(m.value.hi()));
        assert!(lo <= brute.1 && brute.0 <= hi, "{x}: {:?} vs {brute:?}", m.value);
    }
}

/// Walks a certificate and recomputes every node with oracle arithmetic.
fn oracle_walk(c: &PrimalCertificate, theta: &Q) -> Q {
    let x = common::from_lib(&c.vector);
    let v = match &c.witness {
        Witness::Zero => {
            assert!(x.is_empty());
            Q::from_integer(0.into())
        }
        Witness::Leaf { index } => {
            let a = x[index].clone();
            if a < Q::from_integer(0.into()) {
                -a
            } else {
                a
            }
        }
        Witness::Split { partition, children, .. } => {
            let bounds = partition.bounds();
            assert!(Fam::Schreier.admits(&bounds));
            let mut sum = Q::from_integer(0.into());
            for (b, child) in partition.blocks().iter().zip(children) {
                let want: common::V = b.iter().filter_map(|i| x.get(i).map(|a| (*i, a.clone()))).collect();
                assert_eq!(common::from_lib(&child.vector), want);
                sum += oracle_walk(child, theta);
            }
            theta * sum
        }
    };
    assert_eq!(common::qlib(c.value.as_point().unwrap()), v);
    v
}

#[test]
fn certificates_recompute_independently() {
    let spec = MixedSpaceSpec::tsirelson();
    for x in sample_vectors(6, &standard_grid(), 300, 8) {
        let (v, cert) = fj_norm(&x);
        verify_certificate(&spec, &cert, 0).unwrap();
        assert_eq!(common::qlib(&v), oracle_walk(&cert, &q("1/2")));
    }
}

#[test]
fn tampered_children_are_rejected() {
    let spec = MixedSpaceSpec::tsirelson();
    let (_, cert) = fj_norm(&FinVec::ones(3..=5));
    let Witness::Split { level, partition, children } = &cert.witness else {
        panic!("expected a split");
    };
    let mut kids: Vec<PrimalCertificate> = children.iter().map(|c| (**c).clone()).collect();
    kids[0].vector = "3:2".parse().unwrap();
    let bad = PrimalCertificate {
        vector: cert.vector.clone(),
        value: cert.value.clone(),
        witness: Witness::Split { level: *level, partition: partition.clone(), children: kids.into_iter().map(Arc::new).collect() },
    };
    assert!(verify_certificate(&spec, &bad, 0).is_err());
}

fn arb_vec(window: usize) -> impl Strategy<Value = FinVec> {
    prop::collection::vec((-4i64..=4, 1i64..=3), window).prop_map(|v| {
        FinVec::from_pairs(v.into_iter().enumerate().map(|(i, (n, d))| (i + 1, Rational::new(n, d)))).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sandwich_and_unconditional(x in arb_vec(7), flips in prop::collection::vec(any::<bool>(), 7)) {
        let (v, _) = fj_norm(&x);
        prop_assert!(x.sup_norm() <= v && v <= x.ell1_norm());
        let flipped = FinVec::from_pairs(x.iter().map(|(i, a)| (i, if flips[i - 1] { -a.clone() } else { a.clone() }))).unwrap();
        prop_assert_eq!(fj_norm(&flipped).0, v);
    }

    #[test]
    fn lattice_monotone(x in arb_vec(7), keep in prop::collection::vec(0u8..3, 7)) {
        // Shrink each entry to itself, half of itself, or zero.
        let y = FinVec::from_pairs(x.iter().map(|(i, a)| {
            let f = match keep[i - 1] { 0 => Rational::one(), 1 => Rational::new(1, 2), _ => Rational::zero() };
            (i, a * &f)
        })).unwrap();
        prop_assert!(fj_norm(&y).0 <= fj_norm(&x).0);
    }

    #[test]
    fn triangle_and_homogeneity(x in arb_vec(6), y in arb_vec(6), n in -3i64..=3, d in 1i64..=3) {
        let (vx, vy) = (fj_norm(&x).0, fj_norm(&y).0);
        prop_assert!(fj_norm(&x.add(&y)).0 <= &vx + &vy);
        let c = Rational::new(n, d);
        prop_assert_eq!(fj_norm(&x.scale(&c)).0, c.abs() * vx);
    }

    #[test]
    fn shifting_right_never_decreases(x in arb_vec(5), s in 1usize..4) {
        // Schreier admissibility only grows as supports move right.
        let shifted = FinVec::from_pairs(x.iter().map(|(i, a)| (i + s, a.clone()))).unwrap();
        prop_assert!(fj_norm(&shifted).0 >= fj_norm(&x).0);
    }
}
