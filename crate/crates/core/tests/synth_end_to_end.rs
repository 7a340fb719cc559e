//! Synthesis on the bundled specifications, checked by simulation.

use std::sync::Arc;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regsynth::game::verify_strategy;
use regsynth::model::dsl::{parse_document, parse_spec, SpecDocument};
use regsynth::model::{DataDomain, OneSidedSpec, Player};
use regsynth::synth::{
    duel_memoryless, estimate_adam_bound, memoryless_eves, reduce_ido_to_one_sided, simulate, synthesize,
    verify_assignment_invariant, AdamDataStrategy, AdamStrategyGraph, RandomData, Scripted, Verdict,
};

fn load(name: &str) -> OneSidedSpec {
    let text = std::fs::read_to_string(format!("{}/../../specs/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap();
    match parse_document(&text).unwrap() {
        SpecDocument::OneSided(s) => s,
        SpecDocument::Ido(i) => reduce_ido_to_one_sided(&i).unwrap(),
    }
}

fn width(regs: &[BigRational]) -> BigRational {
    &regs[0] - &regs[1]
}

#[test]
fn fig1_nat_transducer_shrinks_the_interval() {
    let spec = load("fig1.rsa");
    let s = synthesize(&spec, DataDomain::Nat);
    let Verdict::Realizable(t) = &s.verdict else { panic!("fig1 over N must be realizable") };
    assert!(verify_strategy(&s.game.game, &s.solution.sigma_e, Player::Eve, &s.solution.region(Player::Eve)));
    let sink = spec.state_index("6").unwrap();
    let three = spec.state_index("3").unwrap();
    let four = spec.state_index("4").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut loops = 0;
    for _ in 0..1000 {
        let mut src = RandomData { rng: ChaCha8Rng::seed_from_u64(rng.gen()), domain: DataDomain::Nat };
        let trace = simulate(&spec, t, &mut src, 200);
        assert!(trace.violations.is_empty(), "{:?}", trace.violations);
        assert!(!trace.visits(sink));
        for w in trace.steps.windows(2) {
            if w[0].state == three && w[1].eve_state == four {
                assert!(width(&w[1].registers) < width(&w[0].registers));
                loops += 1;
            }
        }
    }
    assert!(loops > 100, "too few loop iterations observed: {loops}");
}

#[test]
fn fig1_rat_adam_keeps_the_interval_open() {
    let spec = load("fig1.rsa");
    let s = synthesize(&spec, DataDomain::Rat);
    let Verdict::Unrealizable(adam) = &s.verdict else { panic!("fig1 over Q must be unrealizable") };
    assert!(verify_strategy(&s.game.game, &s.solution.sigma_a, Player::Adam, &s.solution.region(Player::Adam)));
    // Eve always answers a
    let always_a = vec![0; spec.num_states()];
    let duel = duel_memoryless(adam, &spec, &always_a);
    assert!(duel.adam_wins(), "{duel:?}");
    let (three, four) = (spec.state_index("3").unwrap(), spec.state_index("4").unwrap());
    let mut play = adam.reset();
    for i in 0..100 {
        let mv = play.play().unwrap();
        let regs = play.valuation();
        if i > 0 {
            assert!(regs[1] < regs[0], "interval emptied at step {i}");
            assert!([three, four].contains(&play.node().state) || play.node().eve_state == four);
        }
        assert!(mv.datum >= BigRational::from_integer(0.into()) || i > 0);
        play.observe(0);
    }
    for choice in memoryless_eves(&spec) {
        assert!(duel_memoryless(adam, &spec, &choice).adam_wins(), "{choice:?}");
    }
}

#[test]
fn climb_nat_data_keeps_its_spacing() {
    let spec = load("climb.rsa");
    let s = synthesize(&spec, DataDomain::Nat);
    let Verdict::Unrealizable(adam) = &s.verdict else { panic!("Adam wins climb over N") };
    let b = adam.bound;
    assert_eq!(b, estimate_adam_bound(&adam.graph));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..60 {
        let mut play = adam.reset();
        for _ in 0..14 {
            play.play().unwrap();
            play.observe(rng.gen_range(0..spec.labels.len()));
        }
        let (lifted, hist) = play.nat_history().unwrap();
        verify_assignment_invariant(lifted, hist, b).unwrap();
        assert!(regsynth::constraints::prefix::max_r2w_depth(lifted) <= b);
    }
    for choice in memoryless_eves(&spec) {
        assert!(duel_memoryless(adam, &spec, &choice).adam_wins(), "{choice:?}");
    }
}

#[test]
fn bound_formula_on_one_vertex() {
    let g = AdamStrategyGraph { k: 1, nodes: Vec::new(), restricted_vertices: 1 };
    assert_eq!(estimate_adam_bound(&g), 4);
    let _ = AdamDataStrategy::with_bound(Arc::new(g), DataDomain::Nat, 4);
}

#[test]
fn trivially_even_is_realizable_everywhere() {
    let spec = parse_spec(
        "registers r\nlabels x y\nstate A adam priority 2 initial\nstate E eve priority 2\n\
         on A guard \"TOP\" asgn {r} -> E\non E label x,y -> A\n",
    )
    .unwrap();
    for dom in [DataDomain::Nat, DataDomain::Rat] {
        assert!(synthesize(&spec, dom).verdict.is_realizable());
    }
}

#[test]
fn ido_specs() {
    for dom in [DataDomain::Nat, DataDomain::Rat] {
        assert!(synthesize(&load("echo.ido"), dom).verdict.is_realizable(), "echo {dom}");
        assert!(synthesize(&load("max.ido"), dom).verdict.is_realizable(), "max {dom}");
    }
    assert!(synthesize(&load("fig1.ido"), DataDomain::Nat).verdict.is_realizable());
    assert!(!synthesize(&load("fig1.ido"), DataDomain::Rat).verdict.is_realizable());
}

#[test]
fn zero_steps_give_an_empty_trace() {
    let spec = load("fig1.rsa");
    let Verdict::Realizable(t) = synthesize(&spec, DataDomain::Nat).verdict else { panic!() };
    assert!(simulate(&spec, &t, &mut Scripted::integers(&[]), 0).steps.is_empty());
}
