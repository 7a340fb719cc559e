//! Product games against the constraint predicates, on random specifications.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regsynth::constraints::{is_zero_satisfiable_n, is_zero_satisfiable_q, LassoConstraintSeq};
use regsynth::game::{build_parity_game, build_parity_game_with, solve_parity, verify_strategy, Construction, ProductGame};
use regsynth::model::gen::random_spec;
use regsynth::model::{DataDomain, OneSidedSpec, Player};

fn spec_from(seed: u64, k: usize) -> OneSidedSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let adam = rng.gen_range(1..=2);
    let eve = rng.gen_range(1..=2);
    random_spec(&mut rng, k, adam, eve, 2, 3)
}

/// A random walk until some vertex repeats: the play `path[..start] (path[start..])^ω`.
fn random_lasso_play(pg: &ProductGame, rng: &mut ChaCha8Rng) -> (Vec<usize>, usize) {
    let g = &pg.game;
    let mut path = vec![g.initial];
    let mut seen = std::collections::HashMap::new();
    seen.insert(g.initial, 0);
    loop {
        let u = *path.last().unwrap();
        let v = g.succ[u][rng.gen_range(0..g.succ[u].len())];
        if let Some(&i) = seen.get(&v) {
            return (path, i);
        }
        seen.insert(v, path.len());
        path.push(v);
    }
}

/// Eve wins the lasso iff its constraint word is not (0-)satisfiable or its states satisfy the priorities.
fn expected_winner(pg: &ProductGame, spec: &OneSidedSpec, path: &[usize], start: usize) -> Player {
    if path.iter().any(|&v| pg.is_broken(v)) {
        return Player::Eve;
    }
    let n = path.len();
    let mut cs = Vec::new();
    let mut loop_from = None;
    for i in 0..n {
        let (u, v) = (path[i], if i + 1 == n { path[start] } else { path[i + 1] });
        if i == start {
            loop_from = Some(cs.len());
        }
        if let Some(c) = pg.constraint_on(u, v) {
            cs.push(c);
        }
    }
    let lf = loop_from.unwrap();
    let seq = LassoConstraintSeq::new(cs[..lf].to_vec(), cs[lf..].to_vec());
    let feasible = match pg.domain {
        DataDomain::Nat => is_zero_satisfiable_n(&seq).0,
        DataDomain::Rat => is_zero_satisfiable_q(&seq),
    };
    let alpha = path[start..]
        .iter()
        .map(|&v| spec.priority(pg.arena_vertex(v).unwrap().state()))
        .max()
        .unwrap();
    if !feasible || alpha % 2 == 0 {
        Player::Eve
    } else {
        Player::Adam
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lasso_plays_are_scored_like_their_words(seed in any::<u64>(), k in 1usize..=2, rat in any::<bool>()) {
        let spec = spec_from(seed, k);
        let dom = if rat { DataDomain::Rat } else { DataDomain::Nat };
        let pg = build_parity_game(&spec, dom);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for _ in 0..40 {
            let (path, start) = random_lasso_play(&pg, &mut rng);
            let top = path[start..].iter().map(|&v| pg.game.priority[v]).max().unwrap();
            prop_assert_eq!(Player::winner_of(top), expected_winner(&pg, &spec, &path, start));
        }
    }

    #[test]
    fn split_and_union_agree(seed in any::<u64>(), k in 1usize..=2) {
        let spec = spec_from(seed, k);
        let a = build_parity_game_with(&spec, DataDomain::Nat, Construction::Split);
        let b = build_parity_game_with(&spec, DataDomain::Nat, Construction::Union);
        let (sa, sb) = (solve_parity(&a.game), solve_parity(&b.game));
        prop_assert_eq!(sa.winner[a.game.initial], sb.winner[b.game.initial]);
    }

    #[test]
    fn raising_a_priority_to_even_helps_eve(seed in any::<u64>(), k in 1usize..=2, rat in any::<bool>()) {
        let spec = spec_from(seed, k);
        let dom = if rat { DataDomain::Rat } else { DataDomain::Nat };
        let before = build_parity_game(&spec, dom);
        let w0 = solve_parity(&before.game).winner[before.game.initial];
        let mut weaker = spec.clone();
        let q = (seed as usize) % weaker.num_states();
        if weaker.states[q].priority % 2 == 1 {
            weaker.states[q].priority += 1;
        }
        let after = build_parity_game(&weaker, dom);
        let w1 = solve_parity(&after.game).winner[after.game.initial];
        prop_assert!(w0 == Player::Adam || w1 == Player::Eve);
    }

    #[test]
    fn regions_partition_and_strategies_verify(seed in any::<u64>(), rat in any::<bool>()) {
        let spec = spec_from(seed, 1);
        let dom = if rat { DataDomain::Rat } else { DataDomain::Nat };
        let pg = build_parity_game(&spec, dom);
        pg.game.check().unwrap();
        let sol = solve_parity(&pg.game);
        prop_assert_eq!(sol.winner.len(), pg.game.num_vertices());
        prop_assert!(verify_strategy(&pg.game, &sol.sigma_e, Player::Eve, &sol.region(Player::Eve)));
        prop_assert!(verify_strategy(&pg.game, &sol.sigma_a, Player::Adam, &sol.region(Player::Adam)));
    }
}
