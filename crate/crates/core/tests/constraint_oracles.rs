//! Randomized agreement between independent satisfiability procedures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regsynth::constraints::brute::brute_force_prefix_n;
use regsynth::constraints::gen::{random_consistent_lasso, random_consistent_prefix, random_lasso};
use regsynth::constraints::monitor::{build_max_monitor, monitor_zero_satisfiable_n};
use regsynth::constraints::prefix::{prefix_consistent, prefix_satisfiable_n};
use regsynth::constraints::{is_satisfiable_n, is_zero_satisfiable_n, LassoConstraintSeq};

#[test]
fn brute_force_matches_prefix_predicates() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..600 {
        let k = rng.gen_range(1..=3);
        let len = rng.gen_range(1..=4);
        let p = random_consistent_prefix(&mut rng, k, len, 0.6);
        assert!(prefix_consistent(&p));
        for zero in [false, true] {
            let brute = brute_force_prefix_n(&p, zero).is_some();
            assert_eq!(brute, prefix_satisfiable_n(&p, zero), "zero={zero} {:?}", p);
        }
    }
}

#[test]
fn monitor_matches_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for i in 0..3000 {
        let k = rng.gen_range(1..=4);
        let s = random_lasso(&mut rng, k, 3, 3, 0.9);
        let m = build_max_monitor(k).eval_lasso(&s);
        assert_eq!(m.accepted, is_satisfiable_n(&s), "case {i}: {:?}", s);
        assert_eq!(monitor_zero_satisfiable_n(&s), is_zero_satisfiable_n(&s).0);
    }
}

fn rotate_unroll_invariant(s: &LassoConstraintSeq) {
    let v = is_zero_satisfiable_n(s).0;
    assert_eq!(is_zero_satisfiable_n(&s.rotate_once()).0, v);
    assert_eq!(is_zero_satisfiable_n(&s.unroll_once()).0, v);
    assert_eq!(is_satisfiable_n(&s.rotate_once()), is_satisfiable_n(s));
}

#[test]
fn verdicts_survive_rotation_and_unrolling() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..500 {
        let k = rng.gen_range(1..=3);
        let (u, v) = (rng.gen_range(0..=3), rng.gen_range(1..=3));
        rotate_unroll_invariant(&random_consistent_lasso(&mut rng, k, u, v, 0.5));
    }
}

#[test]
fn generator_covers_every_verdict_component() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut counts = [0usize; 5];
    for _ in 0..1000 {
        let k = rng.gen_range(1..=3);
        let s = random_lasso(&mut rng, k, 3, 3, 0.9);
        let (ok, v) = is_zero_satisfiable_n(&s);
        counts[0] += ok as usize;
        counts[1] += !v.consistent as usize;
        counts[2] += (v.consistent && v.has_inf_decreasing_1w) as usize;
        counts[3] += (v.consistent && !v.has_inf_decreasing_1w && v.has_trespassing_inf_increasing_1w) as usize;
        counts[4] += (v.consistent && v.c0_all_equal && v.has_decrease_from_0) as usize;
    }
    eprintln!("verdict counts {counts:?}");
    assert!(counts.iter().all(|&c| c >= 20), "{counts:?}");
}
