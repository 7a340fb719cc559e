//! Concrete values for a constraint sequence, chosen online.
//!
//! Over `ℕ` the sequence is first lifted by a register `r_0` pinned to 0. A value
//! that must be fresh goes `2^B` above the current maximum, or to the floor of the
//! midpoint of its two neighbours; a value equal to an existing one copies it.
//! Over `ℚ` midpoints are exact and the outer values are `±1` away.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::constraints::c0nv::ZeroTracker;
use crate::constraints::constr::constr;
use crate::constraints::prefix::connecting_depths;
use crate::model::{Assignment, Constraint, Rel, StateConstraint, Test};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AssignError {
    #[error("the constraint does not start from the current order")]
    Inconsistent,
    #[error("a value would go below 0")]
    BelowZero,
    #[error("no integer strictly between {lower} and {upper}")]
    NoRoom { lower: BigInt, upper: BigInt },
    #[error("several fresh values share one gap")]
    Crowded,
}

/// How a fresh value between two neighbours is chosen over `ℕ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InsertRule {
    Midpoint,
    /// One above the lower neighbour; only meant as a broken variant.
    LowerPlusOne,
}

/// Next values for `c` given the current ones; `fresh(lower, upper)` picks a value
/// strictly between its two neighbours (either may be missing).
fn place<T: Ord + Clone>(
    c: &Constraint,
    now: &[T],
    mut fresh: impl FnMut(Option<&T>, Option<&T>) -> Result<T, AssignError>,
) -> Result<Vec<T>, AssignError> {
    let k = c.k();
    for r in 0..k {
        for s in 0..k {
            if now[r].cmp(&now[s]) != c.now_now(r, s) {
                return Err(AssignError::Inconsistent);
            }
        }
    }
    let mut out: Vec<Option<T>> = vec![None; k];
    let mut gaps: Vec<(Option<T>, Option<T>)> = Vec::new();
    for s in 0..k {
        if let Some(r) = (0..k).find(|&r| c.now_next(r, s) == Ordering::Equal) {
            out[s] = Some(now[r].clone());
            continue;
        }
        if let Some(t) = (0..s).find(|&t| c.next_next(t, s) == Ordering::Equal) {
            out[s] = out[t].clone();
            continue;
        }
        let lower = (0..k).filter(|&r| c.now_next(r, s) == Ordering::Less).max_by(|&a, &b| now[a].cmp(&now[b]));
        let upper = (0..k).filter(|&r| c.now_next(r, s) == Ordering::Greater).min_by(|&a, &b| now[a].cmp(&now[b]));
        let key = (lower.map(|r| now[r].clone()), upper.map(|r| now[r].clone()));
        if gaps.contains(&key) {
            return Err(AssignError::Crowded);
        }
        gaps.push(key);
        out[s] = Some(fresh(lower.map(|r| &now[r]), upper.map(|r| &now[r]))?);
    }
    Ok(out.into_iter().map(|v| v.expect("every register placed")).collect())
}

fn pow2(e: u32) -> BigInt {
    BigInt::one() << e as usize
}

/// The data-assignment function over `ℕ`. Registers are `R_d` followed by `r_0`.
#[derive(Clone, Debug)]
pub struct NatAssigner {
    pub bound: u32,
    pub rule: InsertRule,
    zero: ZeroTracker,
    lifted: Vec<Constraint>,
    history: Vec<Vec<BigInt>>,
}

impl NatAssigner {
    /// `k` is `|R_d|`.
    pub fn new(k: usize, bound: u32) -> Self {
        Self::with_rule(k, bound, InsertRule::Midpoint)
    }

    pub fn with_rule(k: usize, bound: u32, rule: InsertRule) -> Self {
        NatAssigner { bound, rule, zero: ZeroTracker::new(k), lifted: Vec::new(), history: vec![vec![BigInt::zero(); k + 1]] }
    }

    /// Current values, `r_0` last.
    pub fn values(&self) -> &[BigInt] {
        self.history.last().expect("nonempty history")
    }

    pub fn lifted(&self) -> &[Constraint] {
        &self.lifted
    }

    pub fn history(&self) -> &[Vec<BigInt>] {
        &self.history
    }

    /// Read one constraint over `R_d` and fix the next values.
    pub fn push(&mut self, c: &Constraint) -> Result<&[BigInt], AssignError> {
        let mut zero = self.zero.clone();
        let lc = zero.lift(c).ok_or(AssignError::BelowZero)?;
        let (bound, rule) = (self.bound, self.rule);
        let next = place(&lc, self.values(), |lower, upper| match (lower, upper) {
            (None, _) => Err(AssignError::BelowZero),
            (Some(l), None) => Ok(l + pow2(bound)),
            (Some(l), Some(u)) => match rule {
                InsertRule::LowerPlusOne => Ok(l + 1),
                InsertRule::Midpoint if u - l >= BigInt::from(2) => Ok((l + u) / 2),
                InsertRule::Midpoint => Err(AssignError::NoRoom { lower: l.clone(), upper: u.clone() }),
            },
        })?;
        assert!(next.iter().all(|v| *v >= BigInt::zero()), "negative value over N");
        self.zero = zero;
        self.lifted.push(lc);
        self.history.push(next);
        Ok(self.values())
    }
}

/// Midpoints and `±1` over `ℚ`, from the all-zero valuation of `R_d`.
#[derive(Clone, Debug)]
pub struct RatAssigner {
    history: Vec<Vec<BigRational>>,
}

impl RatAssigner {
    pub fn new(k: usize) -> Self {
        RatAssigner { history: vec![vec![BigRational::zero(); k]] }
    }

    pub fn values(&self) -> &[BigRational] {
        self.history.last().expect("nonempty history")
    }

    pub fn history(&self) -> &[Vec<BigRational>] {
        &self.history
    }

    pub fn push(&mut self, c: &Constraint) -> Result<&[BigRational], AssignError> {
        let one = BigRational::one();
        let next = place(c, self.values(), |lower, upper| {
            Ok(match (lower, upper) {
                (Some(l), Some(u)) => (l + u) / BigRational::from_integer(2.into()),
                (Some(l), None) => l + &one,
                (None, Some(u)) => u - &one,
                (None, None) => BigRational::zero(),
            })
        })?;
        self.history.push(next);
        Ok(self.values())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InvariantViolation {
    #[error("moment {moment}: the values do not realize the constraint")]
    Constraint { moment: usize },
    #[error("moment {moment}: registers {x} and {y} are {gap} apart, need 2^{need}")]
    Spacing { moment: usize, x: usize, y: usize, gap: BigInt, need: u32 },
}

/// Checks moment `m >= 1` of a lifted prefix against its values.
pub fn check_moment(lifted: &[Constraint], history: &[Vec<BigInt>], m: usize, bound: u32) -> Result<(), InvariantViolation> {
    if !lifted[m - 1].satisfied_by(&history[m - 1], &history[m]) {
        return Err(InvariantViolation::Constraint { moment: m });
    }
    let d = connecting_depths(&lifted[..m]);
    let v = &history[m];
    for x in 0..v.len() {
        for y in 0..v.len() {
            if v[x] <= v[y] {
                continue;
            }
            let need = bound.saturating_sub(d[x][y].unwrap_or(0));
            let gap = &v[x] - &v[y];
            if gap < pow2(need) {
                return Err(InvariantViolation::Spacing { moment: m, x, y, gap, need });
            }
        }
    }
    Ok(())
}

/// Every value realizes its constraint and `v(x) - v(y) >= 2^(B - d_xy)` whenever `x > y`,
/// with `d_xy` the depth of the deepest chain connecting `x` and `y`.
pub fn verify_assignment_invariant(
    lifted: &[Constraint],
    history: &[Vec<BigInt>],
    bound: u32,
) -> Result<(), InvariantViolation> {
    assert_eq!(history.len(), lifted.len() + 1);
    (1..=lifted.len()).try_for_each(|m| check_moment(lifted, history, m, bound))
}

/// How the adversary's interval game against an assignment rule ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdversaryOutcome {
    /// Insertions survived before the first failure, if any.
    pub failed_after: Option<usize>,
    pub reason: Option<String>,
}

/// Two registers `lo < hi`; after opening the interval, every step inserts a value
/// strictly between them and overwrites whichever end leaves the narrower interval.
pub fn adversarial_continuation(rule: InsertRule, bound: u32, steps: usize) -> AdversaryOutcome {
    let (lo, hi) = (0, 1);
    let open = Test(vec![Rel::Gt, Rel::Gt]);
    let inside = Test(vec![Rel::Gt, Rel::Lt]);
    let mut a = NatAssigner::with_rule(3, bound, rule);
    let mut pi = StateConstraint::all_equal(3);
    let c = constr(&pi, &open, Assignment::from_regs([hi])).expect("opening move");
    a.push(&c).expect("opening value");
    pi = c.end();
    for step in 0..steps {
        let mut best: Option<(BigInt, NatAssigner, StateConstraint)> = None;
        for side in [lo, hi] {
            let Ok(c) = constr(&pi, &inside, Assignment::from_regs([side])) else { continue };
            let mut trial = a.clone();
            let width = match trial.push(&c) {
                Ok(v) => &v[hi] - &v[lo],
                Err(e) => return AdversaryOutcome { failed_after: Some(step), reason: Some(e.to_string()) },
            };
            let m = trial.lifted().len();
            if let Err(e) = check_moment(trial.lifted(), trial.history(), m, bound) {
                return AdversaryOutcome { failed_after: Some(step), reason: Some(e.to_string()) };
            }
            if best.as_ref().is_none_or(|(w, _, _)| width < *w) {
                best = Some((width, trial, c.end()));
            }
        }
        let (_, next, end) = best.expect("some side applies");
        a = next;
        pi = end;
    }
    AdversaryOutcome { failed_after: None, reason: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn r(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn midpoint_between_neighbours() {
        // rl -> 0, rM -> 8 with B = 3; a datum strictly inside, stored in rl
        let mut a = NatAssigner::new(3, 3);
        let pi = StateConstraint::all_equal(3);
        let c = constr(&pi, &Test(vec![Rel::Gt, Rel::Gt]), Assignment::from_regs([0])).unwrap();
        assert_eq!(a.push(&c).unwrap()[0], big(8));
        let c2 = constr(&c.end(), &Test(vec![Rel::Lt, Rel::Gt]), Assignment::from_regs([1])).unwrap();
        let v = a.push(&c2).unwrap();
        assert_eq!(v[1], big(4));
        assert_eq!(v[2], big(4));
    }

    #[test]
    fn equality_copies() {
        let mut a = NatAssigner::new(2, 3);
        let pi = StateConstraint::all_equal(2);
        let c = constr(&pi, &Test(vec![Rel::Gt]), Assignment::from_regs([0])).unwrap();
        a.push(&c).unwrap();
        let c2 = constr(&c.end(), &Test(vec![Rel::Eq]), Assignment::EMPTY).unwrap();
        assert_eq!(a.push(&c2).unwrap()[1], big(8));
    }

    #[test]
    fn top_from_all_zero() {
        let mut a = NatAssigner::new(2, 3);
        let c = constr(&StateConstraint::all_equal(2), &Test(vec![Rel::Gt]), Assignment::EMPTY).unwrap();
        assert_eq!(a.push(&c).unwrap(), &[big(0), big(8), big(0)]);
    }

    #[test]
    fn below_zero_is_refused() {
        let mut a = NatAssigner::new(2, 3);
        let c = constr(&StateConstraint::all_equal(2), &Test(vec![Rel::Lt]), Assignment::EMPTY).unwrap();
        assert_eq!(a.push(&c), Err(AssignError::BelowZero));
    }

    #[test]
    fn rationals_always_have_room() {
        let mut a = RatAssigner::new(3);
        let mut pi = StateConstraint::all_equal(3);
        let c = constr(&pi, &Test(vec![Rel::Gt, Rel::Gt]), Assignment::from_regs([0])).unwrap();
        a.push(&c).unwrap();
        pi = c.end();
        for _ in 0..60 {
            let c = constr(&pi, &Test(vec![Rel::Lt, Rel::Gt]), Assignment::from_regs([1])).unwrap();
            let v = a.push(&c).unwrap().to_vec();
            assert!(v[1] > r(0) && v[1] < v[0]);
            pi = c.end();
        }
        let c = constr(&pi, &Test(vec![Rel::Lt, Rel::Lt]), Assignment::EMPTY).unwrap();
        assert!(a.push(&c).unwrap()[2] < r(0));
    }

    #[test]
    fn invariant_on_all_equal_prefix() {
        let mut a = NatAssigner::new(2, 4);
        let mut pi = StateConstraint::all_equal(2);
        for _ in 0..5 {
            let c = constr(&pi, &Test(vec![Rel::Eq]), Assignment::from_regs([0])).unwrap();
            a.push(&c).unwrap();
            pi = c.end();
        }
        assert!(a.values().iter().all(|v| v.is_zero()));
        verify_assignment_invariant(a.lifted(), a.history(), 4).unwrap();
    }

    #[test]
    fn descending_interval_keeps_the_invariant() {
        let b = 6;
        // the midpoint rule survives exactly B nested insertions
        let honest = adversarial_continuation(InsertRule::Midpoint, b, 3 * b as usize);
        assert_eq!(honest.failed_after, Some(b as usize), "{honest:?}");
        let broken = adversarial_continuation(InsertRule::LowerPlusOne, b, b as usize);
        assert!(broken.failed_after.is_some_and(|s| s < b as usize), "{broken:?}");
    }
}
