//! A deterministic max-plus counter monitor for ℕ-satisfiability of constraint words.
//!
//! The finite state remembers the expected start order (consistency) and which
//! tracer follows which level. A level is an equivalence class of registers
//! whose value survives from one moment to the next; a level alive forever is a
//! stable chain. Counters:
//!
//! * `dec[r]`: depth of the deepest decreasing one-way chain ending at `r`.
//! * per tracer `t`: `idle[t]` counts steps without a level (never reset),
//!   `down[t][r]` / `up[t][r]` the depths of decreasing / increasing chains
//!   ending at `r` that stay at or below the followed level.
//!
//! Acceptance: no inconsistency, every `dec` bounded, and for every tracer
//! `idle` bounded implies its `down`/`up` counters bounded.
//!
//! Every step is a max-plus linear map on the counter vector, so on a lasso the
//! loop's effect is a matrix and boundedness is a positive-cycle question.

use std::collections::HashMap;

use super::LassoConstraintSeq;
use crate::graph::scc;
use crate::model::{Constraint, StateConstraint, Term};

pub const NEG_INF: i64 = i64::MIN;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonitorState {
    Init,
    Reject,
    /// Expected start order of the next letter, and the tracer of each of its classes.
    Run { order: StateConstraint, tracer: Vec<u8> },
}

/// Sparse max-plus map: `x'[j] = max over (i, w) in rows[j] of x[i] + w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterMap {
    pub rows: Vec<Vec<(usize, i64)>>,
}

impl CounterMap {
    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.rows
            .iter()
            .map(|row| row.iter().filter(|(i, _)| x[*i] != NEG_INF).map(|&(i, w)| x[i] + w).max().unwrap_or(NEG_INF))
            .collect()
    }
}

/// Dense max-plus matrix, `m[i][j]` is the weight from counter `i` to counter `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxPlusMatrix {
    pub m: Vec<Vec<i64>>,
}

impl MaxPlusMatrix {
    pub fn identity(n: usize) -> Self {
        let mut m = vec![vec![NEG_INF; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 0;
        }
        MaxPlusMatrix { m }
    }

    /// `self` followed by `step`.
    pub fn then(&self, step: &CounterMap) -> Self {
        let n = self.m.len();
        let mut out = vec![vec![NEG_INF; n]; n];
        for (j, row) in step.rows.iter().enumerate() {
            for &(k, w) in row {
                for i in 0..n {
                    let a = self.m[i][k];
                    if a != NEG_INF && a + w > out[i][j] {
                        out[i][j] = a + w;
                    }
                }
            }
        }
        MaxPlusMatrix { m: out }
    }

    /// Counters that grow without bound under iteration from a finite start vector.
    pub fn unbounded(&self) -> Vec<bool> {
        let n = self.m.len();
        let succ = |u: usize, out: &mut Vec<usize>| {
            out.extend((0..n).filter(|&v| self.m[u][v] != NEG_INF));
        };
        let (comp, _) = scc(n, &succ);
        let mut seed = vec![false; n];
        for u in 0..n {
            for v in 0..n {
                if self.m[u][v] > 0 && comp[u] == comp[v] {
                    seed[u] = true;
                }
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&u| seed[u]).collect();
        let mut out = seed;
        let mut buf = Vec::new();
        while let Some(u) = stack.pop() {
            buf.clear();
            succ(u, &mut buf);
            for &v in &buf {
                if !out[v] {
                    out[v] = true;
                    stack.push(v);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonitorVerdict {
    pub accepted: bool,
    pub consistent: bool,
    pub unbounded: Vec<bool>,
}

#[derive(Clone, Debug)]
pub struct MaxPlusMonitor {
    k: usize,
}

pub fn build_max_monitor(k: usize) -> MaxPlusMonitor {
    MaxPlusMonitor { k }
}

impl MaxPlusMonitor {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_counters(&self) -> usize {
        1 + self.k + self.k * (1 + 2 * self.k)
    }

    pub const ZERO: usize = 0;

    pub fn dec(&self, r: usize) -> usize {
        1 + r
    }

    pub fn idle(&self, t: usize) -> usize {
        1 + self.k + t * (1 + 2 * self.k)
    }

    pub fn down(&self, t: usize, r: usize) -> usize {
        self.idle(t) + 1 + r
    }

    pub fn up(&self, t: usize, r: usize) -> usize {
        self.idle(t) + 1 + self.k + r
    }

    pub fn counter_name(&self, c: usize) -> String {
        if c == Self::ZERO {
            return "zero".into();
        }
        if c <= self.k {
            return format!("dec[{}]", c - 1);
        }
        let off = c - 1 - self.k;
        let (t, i) = (off / (1 + 2 * self.k), off % (1 + 2 * self.k));
        match i {
            0 => format!("idle[{t}]"),
            i if i <= self.k => format!("down[{t}][{}]", i - 1),
            i => format!("up[{t}][{}]", i - 1 - self.k),
        }
    }

    pub fn initial(&self) -> MonitorState {
        MonitorState::Init
    }

    pub fn initial_counters(&self) -> Vec<i64> {
        vec![0; self.num_counters()]
    }

    fn frozen(&self) -> CounterMap {
        // the reject sink keeps every counter constant
        CounterMap { rows: (0..self.num_counters()).map(|i| vec![(i, 0)]).collect() }
    }

    pub fn step(&self, state: &MonitorState, c: &Constraint) -> (MonitorState, CounterMap) {
        assert_eq!(c.k(), self.k);
        let k = self.k;
        let start = c.start();
        let tracer: Vec<u8> = match state {
            MonitorState::Reject => return (MonitorState::Reject, self.frozen()),
            MonitorState::Init => (0..start.num_classes() as u8).collect(),
            MonitorState::Run { order, tracer } => {
                if *order != start {
                    return (MonitorState::Reject, self.frozen());
                }
                tracer.clone()
            }
        };
        let zero = Self::ZERO;
        let mut rows: Vec<Vec<(usize, i64)>> = vec![Vec::new(); self.num_counters()];
        rows[zero].push((zero, 0));
        let strict = |b: bool| if b { 1 } else { 0 };
        // dec: r > s' or r = s'
        for s in 0..k {
            let row = &mut rows[self.dec(s)];
            row.push((zero, 0));
            for r in 0..k {
                let o = c.now_next(r, s);
                if o.is_ge() {
                    row.push((self.dec(r), strict(o.is_gt())));
                }
            }
        }
        // levels: start class ci persists iff some r in it equals some s'
        let start_classes = start.classes();
        let end = c.end();
        let mut end_tracer: Vec<Option<u8>> = vec![None; end.num_classes()];
        let mut busy = vec![false; k];
        for (ci, cl) in start_classes.iter().enumerate() {
            let t = tracer[ci] as usize;
            let rep = cl[0];
            let persists = (0..k).find(|&s| c.now_next(rep, s).is_eq());
            let idle_row = &mut rows[self.idle(t)];
            match persists {
                Some(s) => {
                    busy[t] = true;
                    end_tracer[end.rank(s) as usize] = Some(t as u8);
                    idle_row.push((self.idle(t), 0));
                    for s in 0..k {
                        // s' at or below the level
                        let below = c.cmp(Term::Next(s), Term::Now(rep)).is_le();
                        let (drow, urow) = (self.down(t, s), self.up(t, s));
                        rows[drow].push((zero, 0));
                        rows[urow].push((zero, 0));
                        if !below {
                            continue;
                        }
                        for r in 0..k {
                            if c.now_now(r, rep).is_gt() {
                                continue;
                            }
                            let o = c.now_next(r, s);
                            if o.is_ge() {
                                rows[drow].push((self.down(t, r), strict(o.is_gt())));
                            }
                            if o.is_le() {
                                rows[urow].push((self.up(t, r), strict(o.is_lt())));
                            }
                        }
                    }
                }
                None => {
                    // the level ends: reset
                    idle_row.push((self.idle(t), 1));
                }
            }
        }
        // new end levels take the lowest free tracers
        let mut free = (0..k).filter(|&t| !busy[t]);
        for slot in end_tracer.iter_mut() {
            if slot.is_none() {
                let t = free.next().expect("at most k levels");
                *slot = Some(t as u8);
            }
        }
        for t in 0..k {
            if rows[self.idle(t)].is_empty() {
                // tracer without a level this step
                rows[self.idle(t)].push((self.idle(t), 1));
            }
            for r in 0..k {
                for c in [self.down(t, r), self.up(t, r)] {
                    if rows[c].is_empty() {
                        rows[c].push((zero, 0));
                    }
                }
            }
        }
        let tracer = end_tracer.into_iter().map(|t| t.unwrap()).collect();
        (MonitorState::Run { order: end, tracer }, CounterMap { rows })
    }

    /// Run a finite word, returning the final state and counter values.
    pub fn run_finite(&self, word: &[Constraint]) -> (MonitorState, Vec<i64>) {
        let mut st = self.initial();
        let mut x = self.initial_counters();
        for c in word {
            let (s2, m) = self.step(&st, c);
            x = m.apply(&x);
            st = s2;
        }
        (st, x)
    }

    fn accepts(&self, unbounded: &[bool]) -> bool {
        let k = self.k;
        if (0..k).any(|r| unbounded[self.dec(r)]) {
            return false;
        }
        (0..k).all(|t| {
            unbounded[self.idle(t)] || (0..k).all(|r| !unbounded[self.down(t, r)] && !unbounded[self.up(t, r)])
        })
    }

    pub fn eval_lasso(&self, seq: &LassoConstraintSeq) -> MonitorVerdict {
        let mut st = self.initial();
        for c in &seq.prefix {
            st = self.step(&st, c).0;
        }
        // iterate the loop until the state at an iteration boundary repeats
        let mut seen: HashMap<MonitorState, usize> = HashMap::new();
        let mut boundary = Vec::new();
        while !seen.contains_key(&st) {
            seen.insert(st.clone(), boundary.len());
            boundary.push(st.clone());
            for c in &seq.lp {
                st = self.step(&st, c).0;
            }
        }
        let j0 = seen[&st];
        let iters = boundary.len() - j0;
        let n = self.num_counters();
        let mut partial = Vec::with_capacity(iters * seq.lp.len());
        let mut a = MaxPlusMatrix::identity(n);
        let mut cur = boundary[j0].clone();
        for _ in 0..iters {
            for c in &seq.lp {
                let (s2, m) = self.step(&cur, c);
                a = a.then(&m);
                partial.push(a.clone());
                cur = s2;
            }
        }
        debug_assert_eq!(cur, boundary[j0]);
        let at_boundary = a.unbounded();
        let mut unbounded = vec![false; n];
        for b in &partial {
            for i in (0..n).filter(|&i| at_boundary[i]) {
                for j in 0..n {
                    if b.m[i][j] != NEG_INF {
                        unbounded[j] = true;
                    }
                }
            }
        }
        let consistent = cur != MonitorState::Reject;
        MonitorVerdict { accepted: consistent && self.accepts(&unbounded), consistent, unbounded }
    }
}

/// Monitor verdict combined with the zero-start checks.
pub fn monitor_zero_satisfiable_n(seq: &LassoConstraintSeq) -> bool {
    let (all_eq, dec0) = super::zero_start_checks(seq);
    all_eq && !dec0 && build_max_monitor(seq.k).eval_lasso(seq).accepted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::chains::tests::fig2_loop;
    use crate::constraints::is_satisfiable_n;

    fn c(now: &[i32], next: &[i32]) -> Constraint {
        Constraint::from_values(now, next)
    }

    fn lasso(u: Vec<Constraint>, v: Vec<Constraint>) -> LassoConstraintSeq {
        LassoConstraintSeq::new(u, v)
    }

    #[test]
    fn identity_accepted() {
        let s = lasso(vec![], vec![c(&[0], &[0])]);
        assert!(build_max_monitor(1).eval_lasso(&s).accepted);
    }

    #[test]
    fn decreasing_rejected() {
        let m = build_max_monitor(1);
        let v = m.eval_lasso(&lasso(vec![], vec![c(&[1], &[0])]));
        assert!(!v.accepted);
        assert!(v.unbounded[m.dec(0)]);
    }

    #[test]
    fn climbing_under_constant_rejected() {
        // (rM, rl): rl climbs strictly while rM stays
        let s = lasso(vec![c(&[0, 0], &[5, 0])], vec![c(&[5, 0], &[5, 1])]);
        let m = build_max_monitor(2);
        let v = m.eval_lasso(&s);
        assert!(v.consistent && !v.accepted);
        assert!(!is_satisfiable_n(&s));
    }

    #[test]
    fn climbing_alone_accepted() {
        let s = lasso(vec![], vec![c(&[0], &[1])]);
        assert!(build_max_monitor(1).eval_lasso(&s).accepted);
    }

    #[test]
    fn inconsistent_seam_rejected() {
        let s = lasso(vec![], vec![c(&[0, 1], &[1, 0])]);
        let v = build_max_monitor(2).eval_lasso(&s);
        assert!(!v.consistent && !v.accepted);
    }

    #[test]
    fn fig2_loop_agrees_with_chains() {
        let s = lasso(vec![], fig2_loop());
        assert_eq!(build_max_monitor(4).eval_lasso(&s).accepted, is_satisfiable_n(&s));
    }

    #[test]
    fn finite_run_counts_depth() {
        let d = c(&[1], &[0]);
        let m = build_max_monitor(1);
        let (_, x) = m.run_finite(&[d.clone(), d.clone(), d]);
        assert_eq!(x[m.dec(0)], 3);
        assert_eq!(m.counter_name(m.up(0, 0)), "up[0][0]");
    }
}
