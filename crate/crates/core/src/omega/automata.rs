//! Automata over constraint letters.

use std::cmp::Ordering;

use super::nba::Nba;
use super::safra::{determinize, SafraDpa};
use super::{Complement, Dpa};
use crate::model::{Constraint, StateConstraint};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ConsistencyState {
    Init,
    Expect(StateConstraint),
    Sink,
}

/// Accepts consistent sequences; with `zero`, the first order must also be all-equal.
#[derive(Clone, Debug)]
pub struct ConsistencyDpa {
    pub k: usize,
    pub zero: bool,
}

pub fn build_consistency_dpa(k: usize, zero: bool) -> ConsistencyDpa {
    ConsistencyDpa { k, zero }
}

impl Dpa<Constraint> for ConsistencyDpa {
    type State = ConsistencyState;

    fn initial(&self) -> ConsistencyState {
        ConsistencyState::Init
    }

    fn step(&self, q: &ConsistencyState, c: &Constraint) -> (ConsistencyState, u32) {
        let ok = match q {
            ConsistencyState::Init => !self.zero || c.start().is_all_equal(),
            ConsistencyState::Expect(pi) => c.start() == *pi,
            ConsistencyState::Sink => false,
        };
        if ok {
            (ConsistencyState::Expect(c.end()), 2)
        } else {
            (ConsistencyState::Sink, 1)
        }
    }

    fn max_priority(&self) -> u32 {
        2
    }
}

fn le(o: Ordering) -> bool {
    o != Ordering::Greater
}

fn ge(o: Ordering) -> bool {
    o != Ordering::Less
}

/// Least register equal to `s` at the end of `c`. Chains through equal registers are
/// interchangeable, so the automata below only ever track these representatives.
fn rep(c: &Constraint, s: usize) -> usize {
    (0..s).find(|&t| c.next_next(t, s) == Ordering::Equal).unwrap_or(s)
}

const ORDS: [Ordering; 3] = [Ordering::Less, Ordering::Equal, Ordering::Greater];

/// Guesses an adjacent pair whose seam disagrees on two registers.
pub fn build_inconsistency_nba(k: usize) -> Nba<Constraint> {
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
    let mut names = vec!["wait".to_string(), "bad".to_string()];
    for &(a, b) in &pairs {
        for o in ORDS {
            names.push(format!("expect({a},{b},{o:?})"));
        }
    }
    let n = names.len();
    let mut accepting = vec![false; n];
    accepting[1] = true;
    let expect = |i: usize, o: Ordering| 2 + 3 * i + ORDS.iter().position(|&x| x == o).unwrap();
    Nba::new(names, vec![0], accepting, move |q, c: &Constraint| match q {
        0 => {
            let mut out = vec![0];
            out.extend(pairs.iter().enumerate().map(|(i, &(a, b))| expect(i, c.next_next(a, b))));
            out
        }
        1 => vec![1],
        _ => {
            let (i, o) = ((q - 2) / 3, ORDS[(q - 2) % 3]);
            let (a, b) = pairs[i];
            if c.now_now(a, b) != o {
                vec![1]
            } else {
                vec![]
            }
        }
    })
}

/// Infinitely decreasing one-way chain: `(r, b)` sits at register `r`, `b` marks a strict step.
fn decreasing_nba(k: usize) -> Nba<Constraint> {
    let mut names = vec!["wait".to_string()];
    let mut accepting = vec![false];
    for r in 0..k {
        for b in 0..2 {
            names.push(format!("dec({r},{b})"));
            accepting.push(b == 1);
        }
    }
    Nba::new(names, vec![0], accepting, move |q, c: &Constraint| {
        let froms: Vec<usize> = if q == 0 { (0..k).collect() } else { vec![(q - 1) / 2] };
        let mut out = if q == 0 { vec![0] } else { vec![] };
        for r in froms {
            for s in 0..k {
                let o = c.now_next(r, s);
                if ge(o) {
                    out.push(1 + 2 * rep(c, s) + usize::from(o == Ordering::Greater));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    })
}

/// A stable chain at `s` with an increasing chain at `t <= s` that climbs infinitely often.
fn trespassing_nba(k: usize) -> Nba<Constraint> {
    let mut names = vec!["wait".to_string()];
    let mut accepting = vec![false];
    for s in 0..k {
        for t in 0..k {
            for b in 0..2 {
                names.push(format!("tres({s},{t},{b})"));
                accepting.push(b == 1);
            }
        }
    }
    let id = move |s: usize, t: usize, b: bool| 1 + 2 * (s * k + t) + usize::from(b);
    Nba::new(names, vec![0], accepting, move |q, c: &Constraint| {
        let froms: Vec<(usize, usize)> = if q == 0 {
            (0..k).flat_map(|s| (0..k).map(move |t| (s, t))).collect()
        } else {
            let x = (q - 1) / 2;
            vec![(x / k, x % k)]
        };
        let mut out = if q == 0 { vec![0] } else { vec![] };
        for (s, t) in froms {
            if !le(c.now_now(t, s)) {
                continue;
            }
            for s2 in (0..k).filter(|&s2| c.now_next(s, s2) == Ordering::Equal) {
                for t2 in 0..k {
                    let o = c.now_next(t, t2);
                    if le(o) && le(c.next_next(t2, s2)) {
                        out.push(id(rep(c, s2), rep(c, t2), o == Ordering::Less));
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    })
}

/// First order not all-equal, or a strict descent reachable by equalities from moment 0.
fn zero_violation_nba(k: usize) -> Nba<Constraint> {
    let mut names = vec!["start".to_string(), "bad".to_string()];
    names.extend((0..k).map(|r| format!("track({r})")));
    let mut accepting = vec![false; k + 2];
    accepting[1] = true;
    Nba::new(names, vec![0], accepting, move |q, c: &Constraint| {
        let froms: Vec<usize> = match q {
            0 if !c.start().is_all_equal() => return vec![1],
            0 => (0..k).collect(),
            1 => return vec![1],
            _ => vec![q - 2],
        };
        let mut out = Vec::new();
        for r in froms {
            for s in 0..k {
                if c.now_now(r, s) == Ordering::Greater || c.now_next(r, s) == Ordering::Greater {
                    return vec![1];
                }
                if c.now_next(r, s) == Ordering::Equal {
                    out.push(2 + rep(c, s));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    })
}

/// The decreasing-chain, trespassing and zero-violation automata, in that order.
pub fn build_bad_chain_nbas(k: usize) -> Vec<Nba<Constraint>> {
    vec![decreasing_nba(k), trespassing_nba(k), zero_violation_nba(k)]
}

pub type QuasiFeasibleDpa = Complement<SafraDpa<Constraint>>;

/// Complement of the determinized union of the bad-chain automata and the inconsistency detector.
pub fn build_quasi_feasible_dpa(k: usize) -> QuasiFeasibleDpa {
    let mut parts = build_bad_chain_nbas(k);
    parts.push(build_inconsistency_nba(k));
    Complement(determinize(Nba::union(&parts)))
}

#[cfg(test)]
mod tests {
    use super::super::nba::nba_lasso_member;
    use super::super::{complement_dpa, dpa_lasso_member, LassoWord};
    use super::*;
    use crate::constraints::chains::tests::fig2_loop;
    use crate::constraints::gen::random_lasso;
    use crate::constraints::{chain_verdict_n, LassoConstraintSeq};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(now: &[i32], next: &[i32]) -> Constraint {
        Constraint::from_values(now, next)
    }

    fn lw(u: Vec<Constraint>, v: Vec<Constraint>) -> LassoWord<Constraint> {
        LassoWord::new(u, v)
    }

    /// The interval game loop: `rl` climbs below the constant `rM`.
    fn climbing() -> LassoWord<Constraint> {
        lw(vec![c(&[0, 0, 0], &[8, 0, 8]), c(&[8, 0, 8], &[8, 4, 4])], vec![c(&[8, 4, 4], &[8, 6, 6])])
    }

    #[test]
    fn consistency_examples() {
        let d = build_consistency_dpa(1, false);
        assert!(dpa_lasso_member(&d, &lw(vec![], vec![c(&[0], &[0])])));
        let d = build_consistency_dpa(2, false);
        let broken = lw(vec![c(&[0, 1], &[1, 0])], vec![c(&[0, 1], &[0, 1])]);
        assert!(!dpa_lasso_member(&d, &broken));
        assert!(dpa_lasso_member(&complement_dpa(d), &broken));
        // distinct start values: fine in general, not from all-zero
        let w = lw(vec![c(&[1, 2], &[1, 3])], vec![c(&[1, 3], &[1, 3])]);
        assert!(dpa_lasso_member(&build_consistency_dpa(2, false), &w));
        assert!(!dpa_lasso_member(&build_consistency_dpa(2, true), &w));
    }

    #[test]
    fn bad_chain_examples() {
        let nbas = build_bad_chain_nbas(1);
        let down = lw(vec![], vec![c(&[1], &[0])]);
        assert!(nba_lasso_member(&nbas[0], &down));
        let still = lw(vec![], vec![c(&[0], &[0])]);
        for a in &nbas {
            assert!(!nba_lasso_member(a, &still));
        }
        let nbas = build_bad_chain_nbas(3);
        assert!(nba_lasso_member(&nbas[1], &climbing()));
        assert!(!nba_lasso_member(&nbas[0], &climbing()));
        assert!(!nba_lasso_member(&nbas[2], &climbing()));
    }

    #[test]
    fn quasi_feasible_examples() {
        let qf = build_quasi_feasible_dpa(1);
        assert!(dpa_lasso_member(&qf, &lw(vec![], vec![c(&[0], &[0])])));
        assert!(!dpa_lasso_member(&build_quasi_feasible_dpa(3), &climbing()));
        // the six-step example from a non-zero start is never zero-satisfiable
        let l = fig2_loop();
        assert!(!dpa_lasso_member(&build_quasi_feasible_dpa(4), &lw(l[..4].to_vec(), l[4..].to_vec())));
    }

    #[test]
    fn nbas_match_chain_predicates() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 1..=3 {
            let nbas = build_bad_chain_nbas(k);
            let inc = build_inconsistency_nba(k);
            for _ in 0..200 {
                let s: LassoConstraintSeq = random_lasso(&mut rng, k, 3, 3, 0.8);
                let v = chain_verdict_n(&s);
                let w = LassoWord::from(&s);
                assert_eq!(nba_lasso_member(&inc, &w), !v.consistent);
                if v.consistent {
                    assert_eq!(nba_lasso_member(&nbas[0], &w), v.has_inf_decreasing_1w, "{s:?}");
                    assert_eq!(nba_lasso_member(&nbas[1], &w), v.has_trespassing_inf_increasing_1w, "{s:?}");
                    // like the chains, the zero checks only mean something on consistent words
                    assert_eq!(nba_lasso_member(&nbas[2], &w), !v.c0_all_equal || v.has_decrease_from_0, "{s:?}");
                }
            }
        }
    }
}
