//! ω-automata over implicit alphabets: Büchi automata, deterministic parity
//! automata (max-parity, even accepts), determinization, complement and
//! parity combinations, and the automata over constraint letters.

pub mod automata;
pub mod hoa;
pub mod iar;
pub mod nba;
pub mod safra;

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Mutex;

pub use automata::{
    build_bad_chain_nbas, build_consistency_dpa, build_inconsistency_nba, build_quasi_feasible_dpa, ConsistencyDpa, ConsistencyState,
    QuasiFeasibleDpa,
};
pub use iar::{conjunction, disjunction_to_parity, product_dpa, Iar, IarProduct, Mode};
pub use nba::{nba_lasso_member, Nba};
pub use hoa::dump_hoa;
pub use safra::{determinize, SafraDpa, SafraTree};

use crate::constraints::LassoConstraintSeq;
use crate::model::Constraint;

/// An ultimately periodic word `u · v^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LassoWord<L> {
    pub u: Vec<L>,
    pub v: Vec<L>,
}

impl<L: Clone> LassoWord<L> {
    pub fn new(u: Vec<L>, v: Vec<L>) -> Self {
        assert!(!v.is_empty(), "loop must be nonempty");
        LassoWord { u, v }
    }

    pub fn len(&self) -> usize {
        self.u.len() + self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn letter(&self, pos: usize) -> &L {
        if pos < self.u.len() {
            &self.u[pos]
        } else {
            &self.v[pos - self.u.len()]
        }
    }

    pub fn next(&self, pos: usize) -> usize {
        if pos + 1 < self.len() {
            pos + 1
        } else {
            self.u.len()
        }
    }

    pub fn rotate_once(&self) -> Self {
        let mut u = self.u.clone();
        u.push(self.v[0].clone());
        let mut v = self.v[1..].to_vec();
        v.push(self.v[0].clone());
        LassoWord { u, v }
    }

    pub fn unroll_once(&self) -> Self {
        let mut v = self.v.clone();
        v.extend(self.v.iter().cloned());
        LassoWord { u: self.u.clone(), v }
    }
}

impl From<&LassoConstraintSeq> for LassoWord<Constraint> {
    fn from(s: &LassoConstraintSeq) -> Self {
        LassoWord { u: s.prefix.clone(), v: s.lp.clone() }
    }
}

/// A deterministic, complete parity automaton with transition priorities.
pub trait Dpa<L> {
    type State: Clone + Eq + Hash + Debug;
    fn initial(&self) -> Self::State;
    /// Successor and the priority of the transition (at least 1).
    fn step(&self, q: &Self::State, a: &L) -> (Self::State, u32);
    /// An upper bound on emitted priorities.
    fn max_priority(&self) -> u32;
}

impl<L, D: Dpa<L> + ?Sized> Dpa<L> for &D {
    type State = D::State;
    fn initial(&self) -> Self::State {
        (**self).initial()
    }
    fn step(&self, q: &Self::State, a: &L) -> (Self::State, u32) {
        (**self).step(q, a)
    }
    fn max_priority(&self) -> u32 {
        (**self).max_priority()
    }
}

/// Run the unique path on `u · v^ω`; accept iff the maximal priority on the cycle is even.
pub fn dpa_lasso_member<L, D: Dpa<L>>(d: &D, w: &LassoWord<L>) -> bool {
    let mut q = d.initial();
    for a in &w.u {
        q = d.step(&q, a).0;
    }
    // states at loop boundaries, and the max priority of each loop iteration
    let mut seen: HashMap<D::State, usize> = HashMap::new();
    let mut iter_max: Vec<u32> = Vec::new();
    while !seen.contains_key(&q) {
        seen.insert(q.clone(), iter_max.len());
        let mut m = 0;
        for a in &w.v {
            let (q2, p) = d.step(&q, a);
            m = m.max(p);
            q = q2;
        }
        iter_max.push(m);
    }
    let top = iter_max[seen[&q]..].iter().copied().max().unwrap();
    top % 2 == 0
}

/// Complement by shifting every priority by one.
#[derive(Clone, Debug)]
pub struct Complement<D>(pub D);

pub fn complement_dpa<D>(d: D) -> Complement<D> {
    Complement(d)
}

impl<L, D: Dpa<L>> Dpa<L> for Complement<D> {
    type State = D::State;
    fn initial(&self) -> Self::State {
        self.0.initial()
    }
    fn step(&self, q: &Self::State, a: &L) -> (Self::State, u32) {
        let (q2, p) = self.0.step(q, a);
        (q2, p + 1)
    }
    fn max_priority(&self) -> u32 {
        self.0.max_priority() + 1
    }
}

struct MemoInner<L, S> {
    ids: HashMap<S, u32>,
    states: Vec<S>,
    edges: HashMap<(u32, L), (u32, u32)>,
}

/// Interns states as integers and caches transitions; safe to share between threads.
pub struct Memo<L, D: Dpa<L>> {
    inner: D,
    cache: Mutex<MemoInner<L, D::State>>,
}

impl<L: Clone + Eq + Hash, D: Dpa<L>> Memo<L, D> {
    pub fn new(inner: D) -> Self {
        let init = inner.initial();
        let mut ids = HashMap::new();
        ids.insert(init.clone(), 0);
        Memo { inner, cache: Mutex::new(MemoInner { ids, states: vec![init], edges: HashMap::new() }) }
    }

    pub fn num_states(&self) -> usize {
        self.cache.lock().unwrap().states.len()
    }

    pub fn state(&self, id: u32) -> D::State {
        self.cache.lock().unwrap().states[id as usize].clone()
    }

    pub fn inner(&self) -> &D {
        &self.inner
    }
}

impl<L: Clone + Eq + Hash, D: Dpa<L>> Dpa<L> for Memo<L, D> {
    type State = u32;
    fn initial(&self) -> u32 {
        0
    }
    fn step(&self, q: &u32, a: &L) -> (u32, u32) {
        let key = (*q, a.clone());
        let src = {
            let c = self.cache.lock().unwrap();
            if let Some(&hit) = c.edges.get(&key) {
                return hit;
            }
            c.states[*q as usize].clone()
        };
        let (s2, p) = self.inner.step(&src, a);
        let mut c = self.cache.lock().unwrap();
        let next = c.states.len() as u32;
        let id = *c.ids.entry(s2.clone()).or_insert(next);
        if id == next {
            c.states.push(s2);
        }
        c.edges.insert(key, (id, p));
        (id, p)
    }
    fn max_priority(&self) -> u32 {
        self.inner.max_priority()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Deterministic "infinitely many `x`" over letters `x = 0`, `y = 1`.
    struct InfX;

    impl Dpa<u8> for InfX {
        type State = ();
        fn initial(&self) {}
        fn step(&self, _: &(), a: &u8) -> ((), u32) {
            ((), if *a == 0 { 2 } else { 1 })
        }
        fn max_priority(&self) -> u32 {
            2
        }
    }

    #[test]
    fn membership_and_complement() {
        let xs = LassoWord::new(vec![], vec![0u8]);
        let ys = LassoWord::new(vec![0u8], vec![1]);
        assert!(dpa_lasso_member(&InfX, &xs));
        assert!(!dpa_lasso_member(&InfX, &ys));
        let c = complement_dpa(InfX);
        assert!(!dpa_lasso_member(&c, &xs));
        assert!(dpa_lasso_member(&c, &ys));
        let cc = complement_dpa(complement_dpa(InfX));
        assert!(dpa_lasso_member(&cc, &xs));
    }

    #[test]
    fn memo_is_transparent() {
        let m = Memo::new(InfX);
        let w = LassoWord::new(vec![1u8], vec![1, 0]);
        assert_eq!(dpa_lasso_member(&m, &w), dpa_lasso_member(&InfX, &w));
        assert_eq!(m.num_states(), 1);
    }
}
