mod common;

use std::collections::HashMap;

use tsinorm_core::corpus::{grid_vectors, sample_pairs, sample_vectors, small_grid, standard_grid};
use tsinorm_core::dualnorm::{
    dual_norm, dual_norm_bounds, verify_dual_certificate, DualCertificate, DualEngine, SplitCandidates,
};
use tsinorm_core::families::{Level, Theta};
use tsinorm_core::primal::fj_norm;
use tsinorm_core::{pairing, AdmissibilityFamily, FinVec, MixedSpaceSpec, Rational};

const BUDGET: usize = tsinorm_core::DEFAULT_BUDGET;

fn engine() -> DualEngine {
    DualEngine::new(&MixedSpaceSpec::tsirelson(), BUDGET).unwrap()
}

fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

#[test]
fn pairing_is_bounded_by_the_norms() {
    let mut e = engine();
    for (x, y) in sample_pairs(6, &standard_grid(), 3_000, 40) {
        let lhs = pairing(&x, &y).abs();
        let rhs = e.value(&x).unwrap() * fj_norm(&y).0;
        assert!(lhs <= rhs, "x = {x}, y = {y}");
    }
}

#[test]
fn ball_witness_has_oracle_norm_at_most_one() {
    let mut e = engine();
    let mut oracle = common::NormOracle::new(common::Space::tsirelson());
    for x in sample_vectors(6, &standard_grid(), 300, 41) {
        let d = e.dual_norm(&x).unwrap();
        let y = common::from_lib(&d.certificate.ball);
        assert!(oracle.norm(&y) <= common::q("1"), "{x}");
        assert_eq!(common::qlib(&pairing(&x, &d.certificate.ball)), common::qlib(&d.value));
    }
}

#[test]
fn certificates_survive_serialization() {
    let spec = MixedSpaceSpec::tsirelson();
    for x in sample_vectors(6, &standard_grid(), 50, 42) {
        let (_, cert) = dual_norm(&spec, &x).unwrap();
        let json = serde_json::to_string(&cert.to_doc()).unwrap();
        let back = DualCertificate::from_doc(&serde_json::from_str(&json).unwrap()).unwrap();
        verify_dual_certificate(&spec, &back).unwrap();
        assert_eq!(back, cert);
    }
}

#[test]
fn cross_level_subadditivity() {
    let mut e = engine();
    for (x, y) in sample_pairs(4, &standard_grid(), 300, 43) {
        let s = x.add(&y);
        if x.is_zero() || y.is_zero() || s.is_zero() {
            continue;
        }
        let with = SplitCandidates { bipartitions: true, extra: vec![(x.clone(), y.clone())] };
        let plain = SplitCandidates { bipartitions: true, extra: vec![] };
        for n in 0..3 {
            let lhs = e.rho_with_splits_upper(&s, n + 1, &with).unwrap();
            let rhs = e.rho_with_splits_lenient(&x, n, &plain) + e.rho_with_splits_lenient(&y, n, &plain);
            assert!(lhs <= rhs, "x = {x}, y = {y}, n = {n}");
            assert!(lhs >= e.value(&s).unwrap());
        }
    }
}

#[test]
fn split_candidates() {
    let mut e = engine();
    let x: FinVec = "1:1 2:1".parse().unwrap();
    let none = SplitCandidates::default();
    let bip = SplitCandidates { bipartitions: true, extra: vec![] };
    for v in grid_vectors(4, &small_grid()).step_by(5) {
        for n in 0..4 {
            assert_eq!(e.rho_with_splits_upper(&v, n, &none).unwrap(), e.rho_partition_upper(&v, n));
            assert!(e.rho_with_splits_upper(&v, n, &bip).unwrap() <= e.rho_partition_upper(&v, n));
        }
    }
    assert_eq!(e.rho_with_splits_upper(&x, 2, &bip).unwrap(), r("2"));
    let bad = SplitCandidates { bipartitions: false, extra: vec![("1:1".parse().unwrap(), "2:2".parse().unwrap())] };
    assert!(e.rho_with_splits_upper(&x, 1, &bad).is_err());
}

#[test]
fn rho_hat_matches_oracle() {
    let mut e = engine();
    let space = common::Space::tsirelson();
    let mut memo = HashMap::new();
    for x in sample_vectors(6, &standard_grid(), 300, 44) {
        for n in 0..=4 {
            let want = common::rho_hat(&space, &common::from_lib(&x), n, &mut memo);
            assert_eq!(common::qlib(&e.rho_partition_upper(&x, n)), want, "{x} n = {n}");
        }
    }
}

#[test]
fn sigma_matches_oracle() {
    let mut e = engine();
    let space = common::Space::tsirelson();
    let mut memo = HashMap::new();
    for x in grid_vectors(4, &small_grid()).skip(1) {
        let want = common::sigma(&space, &common::from_lib(&x), &mut memo);
        assert_eq!(common::qlib(&e.sigma(&x, 32).unwrap()), want, "{x}");
    }
    assert_eq!(e.sigma(&FinVec::ones(1..=6), 3), None);
}

#[test]
fn ball_closure() {
    let spec = MixedSpaceSpec::tsirelson();
    let mut e = engine();
    let set = e.norming_set(6).unwrap();
    let reps = set.representatives().to_vec();
    // θ(f_1 + ... + f_k) for successive admissible pieces stays in the ball.
    let mut checked = 0;
    for f in &reps {
        for g in &reps {
            let (fmin, fmax) = f.tree.bounds();
            let (gmin, _) = g.tree.bounds();
            if fmax < gmin && fmin >= 2 {
                let c = f.coeffs.add(&g.coeffs).scale(&r("1/2"));
                assert!(e.value(&c).unwrap() <= Rational::one(), "{c}");
                checked += 1;
            }
        }
        // Coordinatewise smaller vectors stay in the ball.
        let half = f.coeffs.scale(&r("1/2"));
        assert!(e.value(&half).unwrap() <= r("1/2"));
        assert!(e.value(&f.coeffs).unwrap() <= Rational::one(), "{}", f.coeffs);
    }
    assert!(checked > 0);
    verify_functional_all(&spec, &reps);
}

fn verify_functional_all(spec: &MixedSpaceSpec, reps: &[tsinorm_core::norming::NormingFunctional]) {
    for f in reps {
        tsinorm_core::norming::verify_functional(spec, f).unwrap();
    }
}

#[test]
fn unit_vectors() {
    let mut e = engine();
    for k in 1..=20 {
        assert_eq!(e.value(&FinVec::basis(k)).unwrap(), Rational::one());
        assert_eq!(e.value(&FinVec::basis(k).scale(&r("-7/3"))).unwrap(), r("7/3"));
    }
}

#[test]
fn rational_mixed_space() {
    let levels = (1..=4)
        .map(|l| Level {
            family: AdmissibilityFamily::CardinalityAtMost(l),
            theta: Theta::Rational(Rational::new(1, l as i64 + 1)),
        })
        .collect();
    let spec = MixedSpaceSpec::new("mixed-4", levels, None).unwrap();
    let mut e = DualEngine::new(&spec, BUDGET).unwrap();
    for x in sample_vectors(5, &standard_grid(), 300, 45) {
        let d = e.dual_norm(&x).unwrap();
        verify_dual_certificate(&spec, &d.certificate).unwrap();
        assert!(x.sup_norm() <= d.value && d.value <= x.ell1_norm());
    }
}

#[test]
fn schlumprecht_bounds() {
    let s = MixedSpaceSpec::schlumprecht();
    let x = FinVec::ones(1..=3);
    let coarse = dual_norm_bounds(&s, &x, 8, 256, BUDGET).unwrap();
    let fine = dual_norm_bounds(&s, &x, 64, 256, BUDGET).unwrap();
    assert!(coarse.contains_interval(&fine));
    // ⟨x, y⟩ / ‖y‖ with y = x and ‖y‖ = 3/2.
    assert!(fine.contains(&r("2")));
    for x in ["1:1 2:1", "2:1 3:1/2 4:1", "1:1 3:1 4:1 5:1"] {
        let x: FinVec = x.parse().unwrap();
        let b = dual_norm_bounds(&s, &x, 48, 256, BUDGET).unwrap();
        assert!(x.sup_norm() <= *b.lo() && *b.hi() <= x.ell1_norm(), "{x}: {b}");
    }
    assert!(dual_norm_bounds(&s, &x, 300, 256, BUDGET).is_err());
    assert!(DualEngine::new(&s, BUDGET).is_err());
}
