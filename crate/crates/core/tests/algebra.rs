//! Randomized language-equivalence checks of the core algorithms against
//! path enumeration.

mod common;

use common::*;
use latcomb::algo::{compose, determinize, minimize, prune_to_threshold, remove_epsilons};
use latcomb::{Fst, Log, Semiring, Tropical};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CASES: u64 = 1000;
const LOG_TOL: f64 = 1e-9;

fn rng(test: u64, case: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(test << 32 | case)
}

fn check_compose<W: Semiring>(test: u64, tol: f64, integer_weights: bool) {
    let shape = Shape { max_states: 5, integer_weights, ..Shape::default() };
    let mut nonempty = 0;
    for case in 0..CASES {
        let mut r = rng(test, case);
        let a: Fst<W> = random_acyclic(&mut r, &shape);
        let b: Fst<W> = random_acyclic(&mut r, &shape);
        let c = compose(&a, &b).unwrap();
        nonempty += usize::from(!c.is_empty());
        if let Err(e) = same_relation(&relation(&c), &compose_oracle(&a, &b), tol) {
            panic!("case {case}: {e}\na = {a:?}\nb = {b:?}");
        }
    }
    assert!(nonempty > CASES as usize / 4, "only {nonempty} non-empty compositions");
}

#[test]
fn compose_matches_relational_join_tropical() {
    check_compose::<Tropical>(1, 0.0, true);
}

#[test]
fn compose_matches_relational_join_log() {
    check_compose::<Log>(2, LOG_TOL, false);
}

fn check_rmeps<W: Semiring>(test: u64, tol: f64, integer_weights: bool) {
    let shape = Shape { epsilon_prob: 0.4, integer_weights, ..Shape::default() };
    for case in 0..CASES {
        let mut r = rng(test, case);
        let a: Fst<W> = random_acyclic(&mut r, &shape);
        let b = remove_epsilons(&a).unwrap();
        assert!(b.states().all(|s| b.arcs(s).iter().all(|x| !x.is_epsilon())), "case {case}");
        if let Err(e) = same_relation(&relation(&b), &relation(&a), tol) {
            panic!("case {case}: {e}\n{a:?}");
        }
    }
}

#[test]
fn rmeps_preserves_relation_tropical() {
    check_rmeps::<Tropical>(3, 0.0, true);
}

#[test]
fn rmeps_preserves_relation_log() {
    check_rmeps::<Log>(4, LOG_TOL, false);
}

fn acceptor_shape(integer_weights: bool) -> Shape {
    Shape {
        acceptor: true,
        epsilon_prob: 0.0,
        labels: 2,
        integer_weights,
        ..Shape::default()
    }
}

fn check_determinize<W: Semiring>(test: u64, tol: f64, integer_weights: bool) {
    for case in 0..CASES {
        let mut r = rng(test, case);
        let a: Fst<W> = random_acyclic(&mut r, &acceptor_shape(integer_weights));
        let d = determinize(&a).unwrap();
        assert!(d.is_deterministic(), "case {case}");
        if let Err(e) = same_relation(&language(&d), &language(&a), tol) {
            panic!("case {case}: {e}\n{a:?}");
        }
    }
}

#[test]
fn determinize_preserves_language_tropical() {
    check_determinize::<Tropical>(5, 0.0, true);
}

#[test]
fn determinize_preserves_language_log() {
    check_determinize::<Log>(6, LOG_TOL, false);
}

#[test]
fn minimize_is_minimal_and_equivalent_tropical() {
    for case in 0..CASES {
        let mut r = rng(7, case);
        let a: Fst<Tropical> = random_acyclic(&mut r, &acceptor_shape(true));
        let d = determinize(&a).unwrap();
        let m = minimize(&d).unwrap();
        assert!(m.is_deterministic(), "case {case}");
        if let Err(e) = same_relation(&language(&m), &language(&a), 0.0) {
            panic!("case {case}: {e}\n{a:?}");
        }
        assert_eq!(m.num_states(), minimal_state_count(&d), "case {case}\n{d:?}\n{m:?}");
        assert_eq!(minimize(&m).unwrap().num_states(), m.num_states(), "case {case}");
    }
}

#[test]
fn minimize_preserves_language_log() {
    for case in 0..CASES {
        let mut r = rng(8, case);
        let a: Fst<Log> = random_acyclic(&mut r, &acceptor_shape(false));
        let d = determinize(&a).unwrap();
        let m = minimize(&d).unwrap();
        assert!(m.is_deterministic(), "case {case}");
        assert!(m.num_states() <= d.trim().num_states() + 1, "case {case}");
        if let Err(e) = same_relation(&language(&m), &language(&a), LOG_TOL) {
            panic!("case {case}: {e}\n{a:?}");
        }
    }
}

#[test]
fn prune_keeps_exactly_the_arc_closure_of_good_paths() {
    let shape = Shape { integer_weights: true, ..Shape::default() };
    for case in 0..CASES {
        let mut r = rng(9, case);
        let a: Fst<Tropical> = random_acyclic(&mut r, &shape);
        let t = [0.0, 0.5, 1.0, 2.0, 3.0][r.gen_range(0..5)];
        let p = prune_to_threshold(&a, Tropical(t)).unwrap();
        let got = relation(&p);
        if let Err(e) = same_relation(&got, &prune_oracle(&a, t), 0.0) {
            panic!("case {case} t={t}: {e}\n{a:?}");
        }
        // every path within t of the best survives with its weight
        let full = arc_paths(&a);
        let best = full.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let original = relation(&a);
        for (k, w) in &original {
            if w.0 <= best + t {
                assert!(got.contains_key(k), "case {case}: lost {k:?}");
            }
        }
        if t == 0.0 {
            let best_only: Vec<_> = original.iter().filter(|(_, w)| w.0 == best).map(|(k, _)| k).collect();
            let kept: Vec<_> = got.keys().collect();
            assert_eq!(kept, best_only, "case {case}");
        }
    }
}
