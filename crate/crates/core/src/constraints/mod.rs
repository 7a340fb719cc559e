//! Constraint sequences and their satisfiability in ℚ and ℕ.

pub mod brute;
pub mod c0nv;
pub mod chains;
pub mod constr;
pub mod gen;
pub mod monitor;
pub mod prefix;
pub mod text;

use crate::model::{adjacent_consistent, Constraint};

pub use chains::{
    has_infinite_decreasing_1w, has_trespassing_infinite_increasing_1w, maximal_stable_chain, zero_start_checks,
    StableChain,
};

/// An ultimately periodic constraint sequence `u · v^ω` over `k` registers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LassoConstraintSeq {
    pub k: usize,
    pub prefix: Vec<Constraint>,
    pub lp: Vec<Constraint>,
}

impl LassoConstraintSeq {
    pub fn new(prefix: Vec<Constraint>, lp: Vec<Constraint>) -> Self {
        assert!(!lp.is_empty(), "loop must be nonempty");
        let k = lp[0].k();
        assert!(prefix.iter().chain(&lp).all(|c| c.k() == k), "mixed register counts");
        LassoConstraintSeq { k, prefix, lp }
    }

    /// Number of folded positions `|u| + |v|`.
    pub fn positions(&self) -> usize {
        self.prefix.len() + self.lp.len()
    }

    pub fn loop_start(&self) -> usize {
        self.prefix.len()
    }

    pub fn letter(&self, pos: usize) -> &Constraint {
        if pos < self.prefix.len() {
            &self.prefix[pos]
        } else {
            &self.lp[pos - self.prefix.len()]
        }
    }

    /// Folded successor position.
    pub fn next(&self, pos: usize) -> usize {
        if pos + 1 < self.positions() {
            pos + 1
        } else {
            self.prefix.len()
        }
    }

    /// The constraint at moment `m` of the unrolled sequence.
    pub fn at(&self, m: usize) -> &Constraint {
        if m < self.prefix.len() {
            &self.prefix[m]
        } else {
            &self.lp[(m - self.prefix.len()) % self.lp.len()]
        }
    }

    pub fn first(&self) -> &Constraint {
        self.letter(0)
    }

    /// All adjacency checks, including both seams.
    pub fn is_consistent(&self) -> bool {
        (0..self.positions()).all(|p| adjacent_consistent(self.letter(p), self.letter(self.next(p))))
    }

    pub fn rotate_once(&self) -> LassoConstraintSeq {
        // u (v0 v1..vn)^ω = u v0 (v1..vn v0)^ω
        let mut prefix = self.prefix.clone();
        prefix.push(self.lp[0].clone());
        let mut lp = self.lp[1..].to_vec();
        lp.push(self.lp[0].clone());
        LassoConstraintSeq { k: self.k, prefix, lp }
    }

    pub fn unroll_once(&self) -> LassoConstraintSeq {
        let mut lp = self.lp.clone();
        lp.extend(self.lp.iter().cloned());
        LassoConstraintSeq { k: self.k, prefix: self.prefix.clone(), lp }
    }
}

/// Breakdown of the ℕ zero-satisfiability verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainVerdictN {
    pub consistent: bool,
    pub has_inf_decreasing_1w: bool,
    pub has_trespassing_inf_increasing_1w: bool,
    pub c0_all_equal: bool,
    pub has_decrease_from_0: bool,
}

impl ChainVerdictN {
    pub fn zero_satisfiable(&self) -> bool {
        self.consistent
            && !self.has_inf_decreasing_1w
            && !self.has_trespassing_inf_increasing_1w
            && self.c0_all_equal
            && !self.has_decrease_from_0
    }

    /// Satisfiable in ℕ from some start valuation.
    pub fn satisfiable(&self) -> bool {
        self.consistent && !self.has_inf_decreasing_1w && !self.has_trespassing_inf_increasing_1w
    }
}

pub fn chain_verdict_n(seq: &LassoConstraintSeq) -> ChainVerdictN {
    let consistent = seq.is_consistent();
    let (c0_all_equal, has_decrease_from_0) = zero_start_checks(seq);
    // the chain predicates presuppose consistency
    let (dec, tres) = if consistent {
        (has_infinite_decreasing_1w(seq), has_trespassing_infinite_increasing_1w(seq))
    } else {
        (false, false)
    };
    ChainVerdictN {
        consistent,
        has_inf_decreasing_1w: dec,
        has_trespassing_inf_increasing_1w: tres,
        c0_all_equal,
        has_decrease_from_0,
    }
}

pub fn is_zero_satisfiable_n(seq: &LassoConstraintSeq) -> (bool, ChainVerdictN) {
    let v = chain_verdict_n(seq);
    (v.zero_satisfiable(), v)
}

pub fn is_satisfiable_n(seq: &LassoConstraintSeq) -> bool {
    chain_verdict_n(seq).satisfiable()
}

pub fn is_satisfiable_q(seq: &LassoConstraintSeq) -> bool {
    seq.is_consistent()
}

pub fn is_zero_satisfiable_q(seq: &LassoConstraintSeq) -> bool {
    seq.is_consistent() && seq.first().start().is_all_equal()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(now: &[i32], next: &[i32]) -> Constraint {
        Constraint::from_values(now, next)
    }

    #[test]
    fn decreasing_single_register() {
        let s = LassoConstraintSeq::new(vec![], vec![c(&[1], &[0])]);
        assert!(is_satisfiable_q(&s));
        assert!(is_zero_satisfiable_q(&s));
        let (ok, v) = is_zero_satisfiable_n(&s);
        assert!(!ok);
        assert!(v.has_inf_decreasing_1w);
    }

    #[test]
    fn identity() {
        let s = LassoConstraintSeq::new(vec![], vec![c(&[0], &[0])]);
        assert!(is_zero_satisfiable_n(&s).0);
        assert!(is_zero_satisfiable_q(&s));
    }

    #[test]
    fn broken_seam() {
        let s = LassoConstraintSeq::new(vec![], vec![c(&[0, 1], &[1, 0])]);
        assert!(!s.is_consistent());
        assert!(!is_satisfiable_q(&s));
        let s = LassoConstraintSeq::new(vec![], vec![c(&[0, 1], &[1, 0]), c(&[1, 0], &[0, 1])]);
        assert!(s.is_consistent());
    }
}
