mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{q, LpOutcome};
use tsinorm_core::lp::{self, LinearProgram, LpStatus, Relation, Sense};
use tsinorm_core::Rational;

fn coef(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    Rational::new(rng.gen_range(lo..=hi), rng.gen_range(1..=3))
}

/// Programs with shifted, possibly negative, lower bounds.
fn shifted_lp(rng: &mut ChaCha8Rng) -> (LinearProgram, Sense) {
    let n = rng.gen_range(1..=5);
    let m = rng.gen_range(1..=5);
    let mut prog = LinearProgram::new((0..n).map(|_| coef(rng, -4, 4)).collect());
    for _ in 0..m {
        let row = (0..n).map(|_| coef(rng, -3, 3)).collect();
        let (rel, rhs) = match rng.gen_range(0..6) {
            0 => (Relation::Eq, coef(rng, -2, 3)),
            1 => (Relation::Ge, coef(rng, -4, 2)),
            _ => (Relation::Le, coef(rng, -1, 6)),
        };
        prog.constrain(row, rel, rhs);
    }
    for j in 0..n {
        let lo = coef(rng, -3, 2);
        let hi = rng.gen_bool(0.3).then(|| &lo + coef(rng, 0, 6));
        prog.bound(j, Some(lo), hi);
    }
    (prog, if rng.gen_bool(0.5) { Sense::Max } else { Sense::Min })
}

#[test]
fn shifted_bounds_match_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let big = q("1000000000");
    let mut seen = [0usize; 3];
    for case in 0..300 {
        let (prog, sense) = shifted_lp(&mut rng);
        let sol = lp::solve(&prog, sense).unwrap();
        match (common::lp_oracle(&prog, sense, &big), sol.status) {
            (LpOutcome::Optimal(v), LpStatus::Optimal) => {
                assert_eq!(common::qlib(&sol.value), v, "case {case}");
                lp::verify(&prog, sense, &sol).unwrap();
                seen[0] += 1;
            }
            (LpOutcome::Infeasible, LpStatus::Infeasible) => seen[1] += 1,
            (LpOutcome::Unbounded, LpStatus::Unbounded) => seen[2] += 1,
            (o, s) => panic!("case {case}: {s:?} but the oracle says {o:?}"),
        }
    }
    assert!(seen.iter().all(|&c| c > 10), "{seen:?}");
}

#[test]
fn tampered_solutions_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(78);
    let mut tried = 0;
    while tried < 60 {
        let (prog, sense) = shifted_lp(&mut rng);
        let sol = lp::solve(&prog, sense).unwrap();
        if sol.status != LpStatus::Optimal {
            continue;
        }
        tried += 1;
        let mut bad = sol.clone();
        bad.value = &bad.value + Rational::new(1, 7);
        assert!(lp::verify(&prog, sense, &bad).is_err());

        let mut bad = sol.clone();
        bad.duals.push(Rational::zero());
        assert!(lp::verify(&prog, sense, &bad).is_err());

        if let Some(i) = sol.duals.iter().position(|y| !y.is_zero()) {
            let mut bad = sol.clone();
            bad.duals[i] = &bad.duals[i] * Rational::from_integer(2);
            assert!(lp::verify(&prog, sense, &bad).is_err(), "scaled dual {i}");
        }

        let mut bad = sol.clone();
        bad.status = LpStatus::Infeasible;
        assert!(lp::verify(&prog, sense, &bad).is_err());
    }
}

#[test]
fn degenerate_cycling_example_terminates() {
    // A classic degenerate program on which largest-coefficient pivoting cycles.
    let r = |n, d| Rational::new(n, d);
    let mut prog = LinearProgram::new(vec![r(3, 4), r(-150, 1), r(1, 50), r(-6, 1)]);
    prog.constrain(vec![r(1, 4), r(-60, 1), r(-1, 25), r(9, 1)], Relation::Le, r(0, 1));
    prog.constrain(vec![r(1, 2), r(-90, 1), r(-1, 50), r(3, 1)], Relation::Le, r(0, 1));
    prog.constrain(vec![r(0, 1), r(0, 1), r(1, 1), r(0, 1)], Relation::Le, r(1, 1));
    let sol = lp::solve(&prog, Sense::Max).unwrap();
    assert_eq!(sol.status, LpStatus::Optimal);
    assert_eq!(sol.value, r(1, 20));
    lp::verify(&prog, Sense::Max, &sol).unwrap();
}

#[test]
fn min_and_max_are_mirrors() {
    let mut rng = ChaCha8Rng::seed_from_u64(79);
    for _ in 0..150 {
        let (prog, _) = shifted_lp(&mut rng);
        let max = lp::solve(&prog, Sense::Max).unwrap();
        let mut neg = prog.clone();
        neg.objective = neg.objective.iter().map(|c| -c.clone()).collect();
        let min = lp::solve(&neg, Sense::Min).unwrap();
        assert_eq!(max.status, min.status);
        if max.status == LpStatus::Optimal {
            assert_eq!(max.value, -min.value);
        }
    }
}
