//! Seeded cross-validation suites. Every suite pits independent procedures
//! against each other on random inputs and counts disagreements.

use std::fmt::Write;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constraints::brute::brute_force_prefix_n;
use crate::constraints::gen::{random_consistent_prefix, random_lasso};
use crate::constraints::monitor::{build_max_monitor, monitor_zero_satisfiable_n};
use crate::constraints::prefix::{max_r2w_depth, prefix_consistent, prefix_satisfiable_n};
use crate::constraints::is_zero_satisfiable_n;
use crate::game::parity::random_game;
use crate::game::{brute_force_solve, solve_parity, verify_strategy};
use crate::model::dsl::parse_spec;
use crate::model::gen::random_spec;
use crate::model::{Constraint, DataDomain, OneSidedSpec, Player, Term};
use crate::omega::{build_bad_chain_nbas, build_quasi_feasible_dpa, determinize, dpa_lasso_member, nba_lasso_member, LassoWord, Memo, Nba};
use crate::synth::{adversarial_continuation, synthesize, verify_assignment_invariant, AdamDataStrategy, InsertRule, Verdict};

pub const DEFAULT_SEED: u64 = 2024;

/// Eve demands insertions into an interval before Adam may raise its top.
pub const CLIMB_SPEC: &str = include_str!("../../../specs/climb.rsa");

/// Case counts per suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sizes {
    pub prefixes: usize,
    pub lassos: usize,
    pub det_lassos: usize,
    pub games: usize,
    pub plays: usize,
}

impl Default for Sizes {
    fn default() -> Self {
        Sizes { prefixes: 500, lassos: 1000, det_lassos: 1000, games: 200, plays: 200 }
    }
}

impl Sizes {
    pub fn uniform(n: usize) -> Self {
        Sizes { prefixes: n, lassos: n, det_lassos: n, games: n, plays: n }
    }
}

/// A deliberately planted bug, to show that a suite can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// brute force forgets the zero start
    Prefix,
    /// monitor verdict without the zero-start checks
    Lasso,
    /// automaton run on the loop only
    Determinize,
    /// one priority off by one before solving
    Games,
    /// data assigned with half the bound, the adversary meets `lower + 1`
    Data,
}

impl Mutation {
    pub const ALL: [(&'static str, Mutation); 5] = [
        ("prefix", Mutation::Prefix),
        ("lasso", Mutation::Lasso),
        ("determinize", Mutation::Determinize),
        ("games", Mutation::Games),
        ("data", Mutation::Data),
    ];
}

impl std::str::FromStr for Mutation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL.iter().find(|(n, _)| *n == s).map(|&(_, m)| m).ok_or_else(|| format!("unknown mutation {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        SuiteResult { name, cases: 0, failures: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Brute-force search over `0..=K` against the chain-based prefix predicates.
pub fn prefix_suite(seed: u64, n: usize, mutation: Option<Mutation>) -> SuiteResult {
    let mut rng = rng_for(seed, 1);
    let mut r = SuiteResult::new("prefix");
    for i in 0..n {
        let k = rng.gen_range(1..=3);
        let len = rng.gen_range(1..=4);
        let p = random_consistent_prefix(&mut rng, k, len, 0.6);
        let mut ok = prefix_consistent(&p);
        for zero in [false, true] {
            let brute_zero = zero && mutation != Some(Mutation::Prefix);
            ok &= brute_force_prefix_n(&p, brute_zero).is_some() == prefix_satisfiable_n(&p, zero);
        }
        r.record(ok, || format!("case {i}: {p:?}"));
    }
    r
}

/// Chains, the quasi-feasibility automaton and the counter monitor on the same lassos.
pub fn lasso_suite(seed: u64, n: usize, mutation: Option<Mutation>) -> SuiteResult {
    let mut rng = rng_for(seed, 2);
    let mut r = SuiteResult::new("lasso");
    let dpas: Vec<_> = (1..=3).map(|k| Memo::new(build_quasi_feasible_dpa(k))).collect();
    for i in 0..n {
        let k = rng.gen_range(1..=3);
        let s = random_lasso(&mut rng, k, 3, 3, 0.85);
        let chains = is_zero_satisfiable_n(&s).0;
        let dpa = dpa_lasso_member(&dpas[k - 1], &LassoWord::from(&s));
        let monitor = match mutation {
            Some(Mutation::Lasso) => build_max_monitor(k).eval_lasso(&s).accepted,
            _ => monitor_zero_satisfiable_n(&s),
        };
        r.record(chains == dpa && dpa == monitor, || format!("case {i}: chains {chains} dpa {dpa} monitor {monitor}: {s:?}"));
    }
    r
}

fn lt(c: &Constraint, a: Term, b: Term) -> bool {
    c.cmp(a, b).is_lt()
}

/// Three small automata over constraints on at least two registers.
pub fn hand_built_nbas() -> Vec<(&'static str, Nba<Constraint>)> {
    use Term::{Next, Now};
    let names = |n: &[&str]| n.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    // infinitely often r1 < r1'
    let climbs = Nba::new(names(&["wait", "seen"]), vec![0], vec![false, true], |_, c: &Constraint| {
        vec![if lt(c, Now(0), Next(0)) { 1 } else { 0 }]
    });
    // eventually always r1 != r2
    let apart = Nba::new(names(&["any", "apart"]), vec![0], vec![false, true], |q, c: &Constraint| {
        let ne = !c.now_now(0, 1).is_eq();
        match (q, ne) {
            (0, true) => vec![0, 1],
            (0, false) => vec![0],
            (_, true) => vec![1],
            _ => vec![],
        }
    });
    // eventually r1 constant, and r2 rises infinitely often
    let frozen = Nba::new(names(&["any", "frozen", "rose"]), vec![0], vec![false, false, true], |q, c: &Constraint| {
        let still = c.now_next(0, 0).is_eq();
        let rises = lt(c, Now(1), Next(1));
        let settle = if rises { 2 } else { 1 };
        match q {
            0 if still => vec![0, settle],
            0 => vec![0],
            _ if still => vec![settle],
            _ => vec![],
        }
    });
    vec![("climbs", climbs), ("apart", apart), ("frozen", frozen)]
}

/// Determinized automata against direct NBA lasso membership.
pub fn determinize_suite(seed: u64, n: usize, mutation: Option<Mutation>) -> SuiteResult {
    let mut rng = rng_for(seed, 3);
    let mut r = SuiteResult::new("determinize");
    let mut nbas: Vec<(String, usize, Nba<Constraint>)> = Vec::new();
    for k in [2, 3] {
        for (name, a) in ["decreasing", "trespassing", "zero-violation"].iter().zip(build_bad_chain_nbas(k)) {
            nbas.push((format!("{name}/{k}"), k, a));
        }
    }
    for (name, a) in hand_built_nbas() {
        nbas.push((name.to_string(), 2, a));
    }
    for (name, k, a) in nbas {
        let d = Memo::new(determinize(a.clone()));
        for i in 0..n {
            let s = random_lasso(&mut rng, k, 3, 3, 0.9);
            let w = LassoWord::from(&s);
            let probe = match mutation {
                Some(Mutation::Determinize) => LassoWord::new(Vec::new(), w.v.clone()),
                _ => w.clone(),
            };
            let (nba, dpa) = (nba_lasso_member(&a, &w), dpa_lasso_member(&d, &probe));
            r.record(nba == dpa, || format!("{name} case {i}: nba {nba} dpa {dpa}: {s:?}"));
        }
    }
    r
}

/// Zielonka against enumeration of positional strategy pairs.
pub fn games_suite(seed: u64, n: usize, mutation: Option<Mutation>) -> SuiteResult {
    let mut rng = rng_for(seed, 4);
    let mut r = SuiteResult::new("games");
    let mut i = 0;
    while r.cases < n {
        let size = rng.gen_range(1..=8);
        let g = random_game(&mut rng, size, 4);
        let Ok(brute) = brute_force_solve(&g) else { continue };
        let mut solved = g.clone();
        if mutation == Some(Mutation::Games) {
            solved.priority[0] += 1;
        }
        let sol = solve_parity(&solved);
        let eve = sol.region(Player::Eve);
        let adam = sol.region(Player::Adam);
        let partition = (0..size).all(|v| eve[v] != adam[v]);
        let regions = sol.winner == brute;
        let strategies = verify_strategy(&g, &sol.sigma_e, Player::Eve, &eve) && verify_strategy(&g, &sol.sigma_a, Player::Adam, &adam);
        r.record(partition && regions && strategies, || {
            format!("game {i}: partition {partition} regions {regions} strategies {strategies}")
        });
        i += 1;
    }
    r
}

/// Specifications Adam wins over ℕ: the climb, then a few random ones.
pub fn adam_nat_specs(seed: u64) -> Vec<(String, OneSidedSpec)> {
    let mut out = vec![("climb".to_string(), parse_spec(CLIMB_SPEC).expect("bundled specification"))];
    let mut rng = rng_for(seed, 5);
    for (k, want, tries) in [(1, 3, 200), (2, 1, 40)] {
        let mut found = 0;
        for t in 0..tries {
            if found == want {
                break;
            }
            let adam = rng.gen_range(1..=2);
            let eve = rng.gen_range(1..=2);
            let spec = random_spec(&mut rng, k, adam, eve, 2, 3);
            if !synthesize(&spec, DataDomain::Nat).verdict.is_realizable() {
                out.push((format!("random k={k} #{t}"), spec));
                found += 1;
            }
        }
    }
    out
}

const PLAY_STEPS: usize = 12;

/// Plays of Adam's data strategy checked against the spacing invariant, and
/// the adversarial interval game against the honest and the sabotaged rule.
pub fn data_suite(seed: u64, n: usize, mutation: Option<Mutation>) -> SuiteResult {
    let mut r = SuiteResult::new("data");
    if n == 0 {
        return r;
    }
    let mut rng = rng_for(seed, 6);
    let mut players = Vec::new();
    for (name, spec) in adam_nat_specs(seed) {
        let s = synthesize(&spec, DataDomain::Nat);
        let Verdict::Unrealizable(adam) = s.verdict else { unreachable!("selected for Adam") };
        let played = match mutation {
            Some(Mutation::Data) => AdamDataStrategy::with_bound(Arc::clone(&adam.graph), DataDomain::Nat, adam.bound / 2),
            _ => adam.clone(),
        };
        players.push((name, spec.labels.len(), adam.bound, played));
    }
    for i in 0..n {
        let (name, labels, bound, adam) = &players[i % players.len()];
        let mut play = adam.reset();
        let mut err = None;
        for _ in 0..PLAY_STEPS {
            if let Err(e) = play.play() {
                err = Some(e.to_string());
                break;
            }
            play.observe(rng.gen_range(0..*labels));
        }
        let verdict = match err {
            Some(e) => Err(e),
            None => {
                let (lifted, hist) = play.nat_history().expect("natural play");
                match verify_assignment_invariant(lifted, hist, *bound) {
                    Err(e) => Err(e.to_string()),
                    Ok(()) if max_r2w_depth(lifted) > *bound => Err(format!("depth {} above {bound}", max_r2w_depth(lifted))),
                    Ok(()) => Ok(()),
                }
            }
        };
        r.record(verdict.is_ok(), || format!("{name} play {i}: {}", verdict.unwrap_err()));
    }
    let honest = match mutation {
        Some(Mutation::Data) => InsertRule::LowerPlusOne,
        _ => InsertRule::Midpoint,
    };
    // at B = 1 both rules fail on the second insertion
    for b in 2..=8u32 {
        let steps = b as usize + 2;
        let h = adversarial_continuation(honest, b, steps);
        r.record(h.failed_after == Some(b as usize), || format!("midpoint B={b}: {h:?}"));
        let s = adversarial_continuation(InsertRule::LowerPlusOne, b, steps);
        r.record(s.failed_after.is_some_and(|s| s < b as usize), || format!("sabotaged B={b}: {s:?}"));
    }
    r
}

pub fn run_all(seed: u64, sizes: Sizes, mutation: Option<Mutation>) -> Vec<SuiteResult> {
    vec![
        prefix_suite(seed, sizes.prefixes, mutation),
        lasso_suite(seed, sizes.lassos, mutation),
        determinize_suite(seed, sizes.det_lassos, mutation),
        games_suite(seed, sizes.games, mutation),
        data_suite(seed, sizes.plays, mutation),
    ]
}

/// One line per suite; identical for identical seeds and sizes.
pub fn render(results: &[SuiteResult]) -> String {
    let mut s = String::new();
    for r in results {
        let verdict = if r.passed() { "pass" } else { "FAIL" };
        writeln!(s, "{:<12} cases {:>6}  failures {:>6}  {verdict}", r.name, r.cases, r.failures).unwrap();
        if let Some(f) = &r.first_failure {
            writeln!(s, "  first failure: {f}").unwrap();
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_sizes_pass_vacuously() {
        let rs = run_all(1, Sizes::uniform(0), None);
        assert!(rs.iter().all(|r| r.cases == 0 && r.passed()));
    }

    #[test]
    fn small_runs_pass_and_repeat() {
        let sizes = Sizes { prefixes: 40, lassos: 40, det_lassos: 20, games: 20, plays: 10 };
        let a = run_all(5, sizes, None);
        assert!(a.iter().all(SuiteResult::passed), "{}", render(&a));
        assert_eq!(render(&a), render(&run_all(5, sizes, None)));
    }

    #[test]
    fn hand_built_automata_mean_what_they_say() {
        let c = |now: &[i32], next: &[i32]| Constraint::from_values(now, next);
        let mut it = hand_built_nbas().into_iter().map(|(_, a)| a);
        let (climbs, apart, frozen) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
        let up = LassoWord::new(vec![], vec![c(&[0, 0], &[1, 1])]);
        let flat = LassoWord::new(vec![], vec![c(&[0, 0], &[0, 0])]);
        assert!(nba_lasso_member(&climbs, &up));
        assert!(!nba_lasso_member(&climbs, &flat));
        assert!(!nba_lasso_member(&apart, &flat));
        let split = LassoWord::new(vec![c(&[0, 0], &[0, 1])], vec![c(&[0, 1], &[0, 1])]);
        assert!(nba_lasso_member(&apart, &split));
        assert!(!nba_lasso_member(&frozen, &split));
        let rise = LassoWord::new(vec![], vec![c(&[0, 0], &[0, 1]), c(&[0, 1], &[0, 0])]);
        assert!(nba_lasso_member(&frozen, &rise));
        assert!(!nba_lasso_member(&frozen, &up));
    }
}
