//! One-way chain predicates on lassos via the folded (register, position) graph.
//!
//! Node `(r, p)` stands for register `r` at the moment where letter `p` is read.
//! Forward edges read the letter at `p` and lead to the folded successor position.

use std::cmp::Ordering;

use super::LassoConstraintSeq;
use crate::graph::WGraph;
use crate::model::Reg;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Dir {
    Decreasing,
    Increasing,
}

fn node(seq: &LassoConstraintSeq, r: Reg, p: usize) -> usize {
    p * seq.k + r
}

/// Edge weight for a step whose relation from source to target is `ord`
/// (`Greater` means source > target). `None` if the step is not allowed.
fn step(dir: Dir, ord: Ordering) -> Option<u32> {
    match (dir, ord) {
        (_, Ordering::Equal) => Some(0),
        (Dir::Decreasing, Ordering::Greater) | (Dir::Increasing, Ordering::Less) => Some(1),
        _ => None,
    }
}

fn folded_graph(seq: &LassoConstraintSeq, dir: Dir) -> WGraph {
    let k = seq.k;
    let mut g = WGraph::new(k * seq.positions());
    for p in 0..seq.positions() {
        let c = seq.letter(p);
        let q = seq.next(p);
        for r in 0..k {
            for s in 0..k {
                if r != s {
                    if let Some(w) = step(dir, c.now_now(r, s)) {
                        g.add(node(seq, r, p), node(seq, s, p), w);
                    }
                }
                if let Some(w) = step(dir, c.now_next(r, s)) {
                    g.add(node(seq, r, p), node(seq, s, q), w);
                }
            }
        }
    }
    g
}

pub fn has_infinite_decreasing_1w(seq: &LassoConstraintSeq) -> bool {
    folded_graph(seq, Dir::Decreasing).has_positive_cycle(&|_| true)
}

pub fn has_infinite_increasing_1w(seq: &LassoConstraintSeq) -> bool {
    folded_graph(seq, Dir::Increasing).has_positive_cycle(&|_| true)
}

/// A stable chain in periodic form: `regs[i]` is the register at loop offset `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableChain {
    pub start: usize,
    pub regs: Vec<Reg>,
}

/// Loop nodes that start an infinite forward path of equalities.
fn stable_capable(seq: &LassoConstraintSeq) -> Vec<bool> {
    let k = seq.k;
    let n = k * seq.positions();
    let mut alive = vec![false; n];
    for p in seq.loop_start()..seq.positions() {
        for r in 0..k {
            alive[node(seq, r, p)] = true;
        }
    }
    loop {
        let mut changed = false;
        for p in seq.loop_start()..seq.positions() {
            let c = seq.letter(p);
            let q = seq.next(p);
            for r in 0..k {
                let u = node(seq, r, p);
                if alive[u] && !(0..k).any(|s| c.now_next(r, s) == Ordering::Equal && alive[node(seq, s, q)]) {
                    alive[u] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return alive;
        }
    }
}

/// The stable chain through the top stable-capable class at the loop start.
/// Its register at each loop offset is the least index in its class.
pub fn maximal_stable_chain(seq: &LassoConstraintSeq) -> Option<StableChain> {
    let alive = stable_capable(seq);
    let m = seq.loop_start();
    let start = seq.letter(m);
    let top = (0..seq.k)
        .filter(|&r| alive[node(seq, r, m)])
        .max_by(|&a, &b| start.now_now(a, b).then(b.cmp(&a)))?;
    let mut regs = vec![top];
    let mut cur = top;
    for i in 0..seq.lp.len() - 1 {
        let p = m + i;
        let c = seq.letter(p);
        cur = (0..seq.k)
            .find(|&s| c.now_next(cur, s) == Ordering::Equal && alive[node(seq, s, p + 1)])
            .expect("stable successor");
        regs.push(cur);
    }
    Some(StableChain { start: m, regs })
}

/// Increasing chains that stay non-strictly below the maximal stable chain.
pub fn has_trespassing_infinite_increasing_1w(seq: &LassoConstraintSeq) -> bool {
    let Some(chain) = maximal_stable_chain(seq) else { return false };
    let k = seq.k;
    let m = seq.loop_start();
    let g = folded_graph(seq, Dir::Increasing);
    // a node (t, p) is allowed when t <= stable register at p
    let below = |u: usize| {
        let p = u / k;
        let t = u % k;
        p >= m && seq.letter(p).now_now(t, chain.regs[p - m]) != Ordering::Greater
    };
    g.has_positive_cycle(&below)
}

/// `(C0|R all equal, some decreasing 1w chain from moment 0 has depth >= 1)`.
pub fn zero_start_checks(seq: &LassoConstraintSeq) -> (bool, bool) {
    let first = seq.first();
    let all_equal = first.start().is_all_equal();
    let k = seq.k;
    let n = k * seq.positions();
    let mut seen = vec![false; n];
    let mut stack: Vec<usize> = (0..k).map(|r| node(seq, r, 0)).collect();
    for &u in &stack {
        seen[u] = true;
    }
    while let Some(u) = stack.pop() {
        let (p, r) = (u / k, u % k);
        let c = seq.letter(p);
        let q = seq.next(p);
        for s in 0..k {
            if c.now_now(r, s) == Ordering::Greater || c.now_next(r, s) == Ordering::Greater {
                return (all_equal, true);
            }
            for v in [
                (c.now_now(r, s) == Ordering::Equal).then(|| node(seq, s, p)),
                (c.now_next(r, s) == Ordering::Equal).then(|| node(seq, s, q)),
            ]
            .into_iter()
            .flatten()
            {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    (all_equal, false)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::model::Constraint;

    fn c(now: &[i32], next: &[i32]) -> Constraint {
        Constraint::from_values(now, next)
    }

    /// The six-step example (registers r1..r4 at indices 0..3).
    pub fn fig2_loop() -> Vec<Constraint> {
        let v = [
            [12, 13, 14, 15],
            [12, 11, 15, 14],
            [10, 11, 14, 15],
            [10, 9, 15, 14],
            [10, 12, 14, 15],
            [10, 12, 15, 14],
            [10, 12, 14, 15],
        ];
        (0..6).map(|i| c(&v[i], &v[i + 1])).collect()
    }

    #[test]
    fn fig2_stable_chain() {
        let l = fig2_loop();
        // moment 6 has the same order as moment 0, so the six letters form a loop
        let seq = LassoConstraintSeq::new(vec![], l.clone());
        assert!(seq.is_consistent());
        let ch = maximal_stable_chain(&seq).unwrap();
        // r4 r3 r4 r3 ...
        assert_eq!(ch, StableChain { start: 0, regs: vec![3, 2, 3, 2, 3, 2] });
        // repeating all six steps pushes r1 down once per period
        assert!(has_infinite_decreasing_1w(&seq));
        // repeating only the last two steps (r3 and r4 swapping) is harmless
        let seq = LassoConstraintSeq::new(l[..4].to_vec(), l[4..].to_vec());
        assert!(seq.is_consistent());
        assert_eq!(maximal_stable_chain(&seq), Some(StableChain { start: 4, regs: vec![3, 2] }));
        assert!(!has_infinite_decreasing_1w(&seq));
        assert!(!has_trespassing_infinite_increasing_1w(&seq));
    }

    #[test]
    fn identity_chain() {
        let seq = LassoConstraintSeq::new(vec![], vec![c(&[0], &[0])]);
        assert_eq!(maximal_stable_chain(&seq), Some(StableChain { start: 0, regs: vec![0] }));
        assert_eq!(zero_start_checks(&seq), (true, false));
        assert!(!has_trespassing_infinite_increasing_1w(&seq));
    }

    #[test]
    fn climbing_register_has_no_stable_chain() {
        let seq = LassoConstraintSeq::new(vec![], vec![c(&[0], &[1])]);
        assert_eq!(maximal_stable_chain(&seq), None);
        assert!(!has_trespassing_infinite_increasing_1w(&seq));
        assert!(has_infinite_increasing_1w(&seq));
    }

    #[test]
    fn third_cycle_above_two_others() {
        // r3 stays on top, r1 and r2 swap below it without ever meeting
        let seq = LassoConstraintSeq::new(vec![], vec![c(&[1, 2, 5], &[2, 1, 5]), c(&[2, 1, 5], &[1, 2, 5])]);
        let ch = maximal_stable_chain(&seq).unwrap();
        assert_eq!(ch.regs, vec![2, 2]);
    }

    #[test]
    fn interval_game_loop() {
        // registers (rM, rl, rd): rl climbs towards the constant rM
        let seq = LassoConstraintSeq::new(
            vec![c(&[0, 0, 0], &[8, 0, 8]), c(&[8, 0, 8], &[8, 4, 4])],
            vec![c(&[8, 4, 4], &[8, 6, 6])],
        );
        assert!(seq.is_consistent());
        assert!(!has_infinite_decreasing_1w(&seq));
        assert!(has_trespassing_infinite_increasing_1w(&seq));
        assert_eq!(zero_start_checks(&seq), (true, false));
    }

    #[test]
    fn decrease_from_zero() {
        // all equal, then r1 drops below r2 while r2 stays: r2 = r2' > r1'
        let seq = LassoConstraintSeq::new(vec![c(&[0, 0], &[0, 0]), c(&[0, 0], &[-1, 0])], vec![c(&[-1, 0], &[-1, 0])]);
        assert_eq!(zero_start_checks(&seq), (true, true));
        let seq = LassoConstraintSeq::new(vec![c(&[1, 2], &[1, 2])], vec![c(&[1, 2], &[1, 2])]);
        assert!(!zero_start_checks(&seq).0);
    }
}
