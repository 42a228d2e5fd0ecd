mod common;

use proptest::prelude::*;
use surfcurve::constructions::orienting_curve;
use surfcurve::curve::Sidedness;
use surfcurve::solver::{solve, solve_prepared, Goal, GoalSpec, Prepared};
use surfcurve::weight::Weight;

use common::{corpus, refine, scaled, BASES};

#[test]
fn outputs_are_simple_with_multiplicity_at_most_two() {
    for inst in corpus() {
        let m = &inst.map;
        let prep = Prepared::new(m).unwrap();
        for goal in Goal::named() {
            let Ok(spec) = GoalSpec::new(goal.clone(), m.euler_genus(), false) else { continue };
            let s = solve_prepared(m, &prep, &spec).unwrap();
            assert!(s.curve.is_simple(m), "{} {}", inst.name, goal.name());
            assert!(s.curve.multiplicity() <= 2, "{} {}", inst.name, goal.name());
            assert!(goal.matches(s.curve.classify_by_cutting(m).unwrap()), "{} {}", inst.name, goal.name());
            assert_eq!(s.curve.length(m), s.length);
            assert_eq!(prep.canonical_signature(&s.curve).unwrap(), s.signature);
        }
    }
}

#[test]
fn doubling_weights_doubles_lengths() {
    for inst in corpus().into_iter().step_by(3) {
        let doubled = scaled(&inst.map, 2);
        for goal in Goal::named() {
            match (solve(&inst.map, &goal), solve(&doubled, &goal)) {
                (Ok(a), Ok(b)) => assert_eq!(a.length * Weight::from_integer(2), b.length, "{}", inst.name),
                (Err(a), Err(b)) => assert_eq!(a, b),
                _ => panic!("feasibility changed under scaling on {}", inst.name),
            }
        }
    }
}

#[test]
fn orienting_sidedness_follows_genus_parity() {
    for inst in corpus() {
        let s = solve(&inst.map, &Goal::Orienting).unwrap();
        let expect = if inst.map.euler_genus() % 2 == 1 { Sidedness::OneSided } else { Sidedness::TwoSided };
        assert_eq!(s.class.sidedness(), expect, "{}", inst.name);
    }
}

#[test]
fn goal_minima_are_ordered() {
    for inst in corpus() {
        let m = &inst.map;
        let len = |g: Goal| solve(m, &g).ok().map(|s| s.length);
        let onesided = len(Goal::OneSidedAny).unwrap();
        let orienting = len(Goal::Orienting).unwrap();
        if m.euler_genus() % 2 == 1 {
            assert!(onesided <= orienting, "{}", inst.name);
        }
        if let Some(n1) = len(Goal::NonsepNonorientOneSided) {
            assert!(onesided <= n1, "{}", inst.name);
            if m.euler_genus() % 2 == 1 {
                assert_eq!(onesided, n1.min(orienting), "{}", inst.name);
            } else {
                assert_eq!(onesided, n1, "{}", inst.name);
            }
        }
    }
}

#[test]
fn repeated_solves_are_identical() {
    for inst in corpus().into_iter().step_by(5) {
        let a = solve(&inst.map, &Goal::NonsepNonorientOneSided);
        let b = solve(&inst.map, &Goal::NonsepNonorientOneSided);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                assert_eq!(a.report, b.report);
                assert_eq!(a.curve.to_json(&inst.map).unwrap(), b.curve.to_json(&inst.map).unwrap());
            }
            (Err(a), Err(b)) => assert_eq!(a, b),
            _ => panic!("nondeterministic feasibility"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn shortest_orienting_beats_the_constructed_one(base in 0..BASES.len(), extra in 0usize..14, seed in any::<u64>()) {
        let (word, _) = BASES[base];
        let edges = word.split_whitespace().count() / 2 + extra;
        let m = refine(word, edges, seed);
        let s = solve(&m, &Goal::Orienting).unwrap();
        let c = orienting_curve(&m).unwrap();
        prop_assert!(s.length <= c.length(&m));
        prop_assert!(s.curve.is_simple(&m));
        prop_assert!(s.curve.multiplicity() <= 2);
    }

    #[test]
    fn onesided_curves_are_one_sided(base in 0..BASES.len(), extra in 0usize..14, seed in any::<u64>()) {
        let (word, _) = BASES[base];
        let edges = word.split_whitespace().count() / 2 + extra;
        let m = refine(word, edges, seed);
        let s = solve(&m, &Goal::OneSidedAny).unwrap();
        prop_assert_eq!(s.class.sidedness(), Sidedness::OneSided);
        prop_assert_eq!(s.signature.count_ones() % 2, 1);
    }
}
