//! Ordered partitions: state constraints over `R` and constraints over `R ∪ R'`.

use std::cmp::Ordering;
use std::fmt;

use super::basic::{Reg, Registers};

fn densify<K: Ord + Clone>(keys: &[K]) -> Vec<u8> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).unwrap() as u8).collect()
}

fn classes_of(rank: &[u8]) -> Vec<Vec<usize>> {
    let n = rank.iter().map(|&r| r as usize + 1).max().unwrap_or(0);
    let mut out = vec![Vec::new(); n];
    for (i, &r) in rank.iter().enumerate() {
        out[r as usize].push(i);
    }
    out
}

/// Total preorder on registers, stored as dense class ranks (0 = lowest class).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateConstraint {
    rank: Vec<u8>,
}

impl StateConstraint {
    pub fn from_keys<K: Ord + Clone>(keys: &[K]) -> Self {
        StateConstraint { rank: densify(keys) }
    }

    pub fn all_equal(k: usize) -> Self {
        StateConstraint { rank: vec![0; k] }
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    pub fn rank(&self, r: Reg) -> u8 {
        self.rank[r]
    }

    pub fn ranks(&self) -> &[u8] {
        &self.rank
    }

    pub fn cmp_regs(&self, a: Reg, b: Reg) -> Ordering {
        self.rank[a].cmp(&self.rank[b])
    }

    pub fn num_classes(&self) -> usize {
        self.rank.iter().map(|&r| r as usize + 1).max().unwrap_or(0)
    }

    /// Classes in ascending order.
    pub fn classes(&self) -> Vec<Vec<Reg>> {
        classes_of(&self.rank)
    }

    pub fn is_all_equal(&self) -> bool {
        self.rank.iter().all(|&r| r == 0)
    }

    /// Every ordered partition of `k` registers.
    pub fn enumerate(k: usize) -> Vec<StateConstraint> {
        let mut out = Vec::new();
        let mut cur = vec![0u8; k];
        fn rec(i: usize, cur: &mut Vec<u8>, out: &mut Vec<StateConstraint>) {
            if i == cur.len() {
                let used = cur.iter().map(|&r| r as usize + 1).max().unwrap_or(0);
                let mut seen = vec![false; used];
                for &r in cur.iter() {
                    seen[r as usize] = true;
                }
                if seen.iter().all(|&s| s) {
                    out.push(StateConstraint { rank: cur.clone() });
                }
                return;
            }
            for r in 0..cur.len() as u8 {
                cur[i] = r;
                rec(i + 1, cur, out);
            }
        }
        rec(0, &mut cur, &mut out);
        out
    }

    /// Restriction to a subset of registers, renumbered in the given order.
    pub fn restrict(&self, regs: &[Reg]) -> StateConstraint {
        let keys: Vec<u8> = regs.iter().map(|&r| self.rank[r]).collect();
        StateConstraint::from_keys(&keys)
    }

    pub fn display(&self, regs: &Registers) -> String {
        self.classes()
            .iter()
            .map(|c| {
                let names: Vec<&str> = c.iter().map(|&r| regs.name(r)).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect::<Vec<_>>()
            .join(" < ")
    }
}

/// A term of a constraint: `Now(r)` is `r`, `Next(r)` is `r'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Now(Reg),
    Next(Reg),
}

/// Total preorder on `R ∪ R'`. Index `r` is `r`, index `k + r` is `r'`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    k: u8,
    rank: Vec<u8>,
}

impl Constraint {
    /// Build from arbitrary keys for the `2k` positions.
    pub fn from_keys<K: Ord + Clone>(k: usize, keys: &[K]) -> Self {
        assert_eq!(keys.len(), 2 * k);
        Constraint { k: k as u8, rank: densify(keys) }
    }

    pub fn from_ranks(k: usize, rank: Vec<u8>) -> Self {
        Self::from_keys(k, &rank)
    }

    /// The constraint realized by two consecutive valuations.
    pub fn from_values<T: Ord + Clone>(now: &[T], next: &[T]) -> Self {
        assert_eq!(now.len(), next.len());
        let keys: Vec<T> = now.iter().chain(next.iter()).cloned().collect();
        Self::from_keys(now.len(), &keys)
    }

    /// `r = r'` for all `r`, with the given start order.
    pub fn identity(start: &StateConstraint) -> Self {
        let keys: Vec<u8> = start.ranks().iter().chain(start.ranks().iter()).copied().collect();
        Self::from_keys(start.len(), &keys)
    }

    pub fn k(&self) -> usize {
        self.k as usize
    }

    pub fn ranks(&self) -> &[u8] {
        &self.rank
    }

    pub fn pos(&self, t: Term) -> usize {
        match t {
            Term::Now(r) => r,
            Term::Next(r) => self.k as usize + r,
        }
    }

    pub fn rank_of(&self, t: Term) -> u8 {
        self.rank[self.pos(t)]
    }

    pub fn cmp(&self, a: Term, b: Term) -> Ordering {
        self.rank_of(a).cmp(&self.rank_of(b))
    }

    /// Compare `r` (now) with `s'` (next).
    pub fn now_next(&self, r: Reg, s: Reg) -> Ordering {
        self.rank[r].cmp(&self.rank[self.k as usize + s])
    }

    pub fn now_now(&self, r: Reg, s: Reg) -> Ordering {
        self.rank[r].cmp(&self.rank[s])
    }

    pub fn next_next(&self, r: Reg, s: Reg) -> Ordering {
        let k = self.k as usize;
        self.rank[k + r].cmp(&self.rank[k + s])
    }

    pub fn start(&self) -> StateConstraint {
        StateConstraint::from_keys(&self.rank[..self.k as usize])
    }

    pub fn end(&self) -> StateConstraint {
        StateConstraint::from_keys(&self.rank[self.k as usize..])
    }

    pub fn num_classes(&self) -> usize {
        self.rank.iter().map(|&r| r as usize + 1).max().unwrap_or(0)
    }

    /// Classes in ascending order, as position indices.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        classes_of(&self.rank)
    }

    /// Whether two valuations realize the constraint.
    pub fn satisfied_by<T: Ord>(&self, now: &[T], next: &[T]) -> bool {
        let k = self.k as usize;
        let val = |i: usize| if i < k { &now[i] } else { &next[i - k] };
        (0..2 * k).all(|i| (0..2 * k).all(|j| val(i).cmp(val(j)) == self.rank[i].cmp(&self.rank[j])))
    }

    /// Number of classes of primed registers that contain no unprimed register.
    pub fn new_classes(&self) -> usize {
        let k = self.k as usize;
        let mut has_now = vec![false; self.num_classes()];
        for i in 0..k {
            has_now[self.rank[i] as usize] = true;
        }
        let mut fresh: Vec<u8> = self.rank[k..].iter().copied().filter(|&c| !has_now[c as usize]).collect();
        fresh.sort();
        fresh.dedup();
        fresh.len()
    }

    /// Enumerate all constraints over `k` registers (ordered partitions of `2k` items).
    pub fn enumerate(k: usize) -> Vec<Constraint> {
        StateConstraint::enumerate(2 * k)
            .into_iter()
            .map(|s| Constraint { k: k as u8, rank: s.ranks().to_vec() })
            .collect()
    }

    pub fn term_name(&self, regs: &Registers, i: usize) -> String {
        let k = self.k as usize;
        if i < k {
            regs.name(i).to_string()
        } else {
            format!("{}'", regs.name(i - k))
        }
    }

    pub fn display(&self, regs: &Registers) -> String {
        self.classes()
            .iter()
            .map(|c| {
                let names: Vec<String> = c.iter().map(|&i| self.term_name(regs, i)).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect::<Vec<_>>()
            .join(" < ")
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display(&Registers::numbered(self.k())))
    }
}

pub fn adjacent_consistent(c1: &Constraint, c2: &Constraint) -> bool {
    c1.k == c2.k && c1.end() == c2.start()
}
