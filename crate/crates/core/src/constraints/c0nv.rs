//! Adding a register `r_0` that always holds 0 (appended as the last index).

use std::cmp::Ordering;

use super::prefix::{prefix_consistent, prefix_zero_checks};
use crate::model::Constraint;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NotMeaningful {
    #[error("the sequence is inconsistent")]
    Inconsistent,
    #[error("the first constraint does not start with all registers equal")]
    NotZeroStart,
    #[error("a register decreases below its initial value")]
    DecreaseFromZero,
}

/// Incremental lifting: tracks which registers currently hold 0.
#[derive(Clone, Debug)]
pub struct ZeroTracker {
    zero: Vec<bool>,
}

impl ZeroTracker {
    pub fn new(k: usize) -> Self {
        ZeroTracker { zero: vec![true; k] }
    }

    pub fn zero_set(&self) -> &[bool] {
        &self.zero
    }

    /// Lift one constraint over `k` registers to `k + 1` registers.
    /// Returns `None` if the step pushes a register below 0.
    pub fn lift(&mut self, c: &Constraint) -> Option<Constraint> {
        let k = c.k();
        let z = k; // index of r_0 in the lifted constraint
        let ranks = c.ranks();
        // rank (in c) of the zero class at the start and its image at the end
        let zero_rank = (0..k).find(|&r| self.zero[r]).map(|r| ranks[r]);
        if let Some(zr) = zero_rank {
            if (0..k).any(|r| self.zero[r] != (ranks[r] == zr)) {
                return None;
            }
            if ranks.iter().any(|&x| x < zr) {
                return None;
            }
        }
        // keys: 2·rank + 1 for c's positions; r_0 sits at the zero class or below everything
        let zkey = zero_rank.map_or(0, |zr| 2 * zr as usize + 1);
        let mut keys: Vec<usize> = Vec::with_capacity(2 * (k + 1));
        for r in 0..k {
            keys.push(2 * ranks[r] as usize + 1);
        }
        keys.push(zkey);
        for r in 0..k {
            keys.push(2 * ranks[k + r] as usize + 1);
        }
        keys.push(zkey);
        let lifted = Constraint::from_keys(k + 1, &keys);
        self.zero = (0..k).map(|r| lifted.now_next(z, r) == Ordering::Equal).collect();
        Some(lifted)
    }
}

/// Lift a meaningful prefix (consistent, zero start, no decrease from 0).
pub fn c0nv_add_zero_register(prefix: &[Constraint]) -> Result<Vec<Constraint>, NotMeaningful> {
    if !prefix_consistent(prefix) {
        return Err(NotMeaningful::Inconsistent);
    }
    let (eq, dec) = prefix_zero_checks(prefix);
    if !eq {
        return Err(NotMeaningful::NotZeroStart);
    }
    if dec {
        return Err(NotMeaningful::DecreaseFromZero);
    }
    let Some(first) = prefix.first() else { return Ok(Vec::new()) };
    let mut z = ZeroTracker::new(first.k());
    prefix.iter().map(|c| z.lift(c).ok_or(NotMeaningful::DecreaseFromZero)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::prefix::max_r2w_depth;
    use crate::model::{StateConstraint, Term};

    #[test]
    fn identity_lifts_to_identity() {
        let c = Constraint::identity(&StateConstraint::all_equal(2));
        let l = c0nv_add_zero_register(&[c.clone(), c]).unwrap();
        assert_eq!(l[0], Constraint::identity(&StateConstraint::all_equal(3)));
    }

    #[test]
    fn climbing_register_leaves_zero() {
        let c0 = Constraint::from_values(&[0, 0], &[0, 3]);
        let c1 = Constraint::from_values(&[0, 3], &[0, 3]);
        let l = c0nv_add_zero_register(&[c0.clone(), c1.clone()]).unwrap();
        // r_0 is index 2
        assert_eq!(l[0].cmp(Term::Next(1), Term::Next(2)), Ordering::Greater);
        assert_eq!(l[1].cmp(Term::Now(1), Term::Now(2)), Ordering::Greater);
        assert_eq!(l[1].cmp(Term::Now(0), Term::Now(2)), Ordering::Equal);
        assert!(max_r2w_depth(&l) <= max_r2w_depth(&[c0, c1]) + 1);
    }

    #[test]
    fn rejects_non_meaningful() {
        let c = Constraint::from_values(&[1, 0], &[1, 0]);
        assert_eq!(c0nv_add_zero_register(&[c]), Err(NotMeaningful::NotZeroStart));
        let c = Constraint::from_values(&[0, 0], &[0, -1]);
        assert_eq!(c0nv_add_zero_register(&[c]), Err(NotMeaningful::DecreaseFromZero));
    }
}
