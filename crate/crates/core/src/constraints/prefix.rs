//! Finite prefixes: consistency, zero-start predicates, and two-way chain depths.

use std::cmp::Ordering;

use crate::graph::WGraph;
use crate::model::{adjacent_consistent, Constraint, Reg, StateConstraint};

pub fn prefix_consistent(prefix: &[Constraint]) -> bool {
    prefix.windows(2).all(|w| adjacent_consistent(&w[0], &w[1]))
}

/// Order of the registers at moment `t` (`0..=L`).
pub fn order_at(prefix: &[Constraint], t: usize) -> StateConstraint {
    if t < prefix.len() {
        prefix[t].start()
    } else {
        prefix[t - 1].end()
    }
}

/// `(C0|R all equal, some decreasing 1w chain from moment 0 has depth >= 1)`.
pub fn prefix_zero_checks(prefix: &[Constraint]) -> (bool, bool) {
    let Some(first) = prefix.first() else { return (true, false) };
    let k = first.k();
    let all_equal = first.start().is_all_equal();
    let mut seen = vec![vec![false; k]; prefix.len() + 1];
    let mut stack: Vec<(usize, Reg)> = (0..k).map(|r| (0, r)).collect();
    for r in 0..k {
        seen[0][r] = true;
    }
    while let Some((t, r)) = stack.pop() {
        let ord = order_at(prefix, t);
        for s in 0..k {
            match ord.cmp_regs(r, s) {
                Ordering::Greater => return (all_equal, true),
                Ordering::Equal if !seen[t][s] => {
                    seen[t][s] = true;
                    stack.push((t, s));
                }
                _ => {}
            }
            if t < prefix.len() {
                match prefix[t].now_next(r, s) {
                    Ordering::Greater => return (all_equal, true),
                    Ordering::Equal if !seen[t + 1][s] => {
                        seen[t + 1][s] = true;
                        stack.push((t + 1, s));
                    }
                    _ => {}
                }
            }
        }
    }
    (all_equal, false)
}

/// The chain-based finite-prefix verdict: ℕ-realizable (from 0 when `zero_start`).
pub fn prefix_satisfiable_n(prefix: &[Constraint], zero_start: bool) -> bool {
    if !prefix_consistent(prefix) {
        return false;
    }
    if !zero_start {
        return true;
    }
    let (eq, dec) = prefix_zero_checks(prefix);
    eq && !dec
}

/// Decreasing two-way step graph over points `(r, t)`, node id `t·k + r`.
/// Edge weight 1 marks a strict step.
pub fn two_way_graph(prefix: &[Constraint]) -> WGraph {
    let k = prefix.first().map_or(0, |c| c.k());
    let l = prefix.len();
    let id = |r: Reg, t: usize| t * k + r;
    let mut g = WGraph::new(k * (l + 1));
    for t in 0..=l {
        let ord = order_at(prefix, t);
        for r in 0..k {
            for s in 0..k {
                if r != s {
                    match ord.cmp_regs(r, s) {
                        Ordering::Greater => g.add(id(r, t), id(s, t), 1),
                        Ordering::Equal => g.add(id(r, t), id(s, t), 0),
                        Ordering::Less => {}
                    }
                }
                if t < l {
                    // forward (r,t) -> (s,t+1) and backward (s,t+1) -> (r,t)
                    match prefix[t].now_next(r, s) {
                        Ordering::Greater => g.add(id(r, t), id(s, t + 1), 1),
                        Ordering::Equal => {
                            g.add(id(r, t), id(s, t + 1), 0);
                            g.add(id(s, t + 1), id(r, t), 0);
                        }
                        Ordering::Less => g.add(id(s, t + 1), id(r, t), 1),
                    }
                }
            }
        }
    }
    g
}

/// Longest chains of the prefix starting at moment `i` and confined to `[i, hi]`,
/// indexed by end point.
fn window_longest(g: &WGraph, k: usize, i: usize, hi: usize, sources: &[usize]) -> Vec<Option<u32>> {
    let alive = move |u: usize| {
        let t = u / k;
        t >= i && t <= hi
    };
    g.longest_from(sources, &alive)
}

/// Maximal depth of right two-way chains (chains never visiting a moment before their start).
pub fn max_r2w_depth(prefix: &[Constraint]) -> u32 {
    let Some(first) = prefix.first() else { return 0 };
    let k = first.k();
    let l = prefix.len();
    let g = two_way_graph(prefix);
    let mut best = 0;
    for i in 0..=l {
        let sources: Vec<usize> = (0..k).map(|r| i * k + r).collect();
        let d = window_longest(&g, k, i, l, &sources);
        best = best.max(d.into_iter().flatten().max().unwrap_or(0));
    }
    best
}

/// Depth table of connecting chains at moment `m = prefix.len()`:
/// `d[x][y]` for `x > y` at moment `m`, `None` otherwise.
pub fn connecting_depths(prefix: &[Constraint]) -> Vec<Vec<Option<u32>>> {
    let k = prefix.first().map_or(0, |c| c.k());
    let m = prefix.len();
    let g = two_way_graph(prefix);
    let rev = g.reversed();
    let ord = order_at(prefix, m);
    // alpha[i][x]: longest chain from some point at moment i to (x, m) within [i, m]
    // beta[j][y]: longest chain from (y, m) to some point at moment j within [j, m]
    let mut alpha = vec![vec![None; k]; m + 1];
    let mut beta = vec![vec![None; k]; m + 1];
    for i in 0..=m {
        let at_i: Vec<usize> = (0..k).map(|r| i * k + r).collect();
        let fwd = window_longest(&g, k, i, m, &at_i);
        let bwd = window_longest(&rev, k, i, m, &at_i);
        for x in 0..k {
            alpha[i][x] = fwd[m * k + x];
            beta[i][x] = bwd[m * k + x];
        }
    }
    let mut d = vec![vec![None; k]; k];
    for x in 0..k {
        for y in 0..k {
            if ord.cmp_regs(x, y) != Ordering::Greater {
                continue;
            }
            let mut best: Option<u32> = None;
            for i in 0..=m {
                let Some(a) = alpha[i][x] else { continue };
                let b = (i..=m).filter_map(|j| beta[j][y]).max();
                if let Some(b) = b {
                    let v = a + 1 + b;
                    best = Some(best.map_or(v, |x: u32| x.max(v)));
                }
            }
            d[x][y] = best;
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2_prefix() -> Vec<Constraint> {
        let v = [
            [12, 13, 14, 15],
            [12, 11, 15, 14],
            [10, 11, 14, 15],
            [10, 9, 15, 14],
            [10, 12, 14, 15],
            [10, 12, 15, 14],
            [10, 12, 14, 15],
        ];
        (0..6).map(|i| Constraint::from_values(&v[i], &v[i + 1])).collect()
    }

    #[test]
    fn identity_depth_zero() {
        let c = Constraint::from_values(&[0, 0], &[0, 0]);
        assert_eq!(max_r2w_depth(&[c.clone(), c.clone(), c]), 0);
    }

    #[test]
    fn fig2_chain_depth() {
        let p = fig2_prefix();
        // (r4,2) > (r4,3) > (r2,2) > (r1,3) > (r2,3), the drawn chain of depth 4 starting at moment 2
        let g = two_way_graph(&p);
        let k = 4;
        let pts = [(3, 2), (3, 3), (1, 2), (0, 3), (1, 3)];
        for w in pts.windows(2) {
            let (u, v) = (w[0].1 * k + w[0].0, w[1].1 * k + w[1].0);
            assert!(g.succ[u].contains(&(v, 1)), "{:?} -> {:?}", w[0], w[1]);
        }
        assert!(max_r2w_depth(&p) >= 4);
    }

    #[test]
    fn zero_checks_on_prefix() {
        let c0 = Constraint::from_values(&[0, 0], &[0, 0]);
        let c1 = Constraint::from_values(&[0, 0], &[0, -1]);
        assert_eq!(prefix_zero_checks(&[c0.clone(), c1]), (true, true));
        assert_eq!(prefix_zero_checks(&[c0.clone(), c0]), (true, false));
    }

    #[test]
    fn connecting_depth_direct() {
        // one step that separates r1 above r0
        let c = Constraint::from_values(&[0, 0], &[0, 5]);
        let d = connecting_depths(&[c]);
        assert_eq!(d[1][0], Some(1));
        assert_eq!(d[0][1], None);
    }
}
