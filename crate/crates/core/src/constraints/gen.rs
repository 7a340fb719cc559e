//! Random constraints, prefixes and lassos for the cross-validation suites.

use rand::Rng;

use super::constr::{induced_lasso, InducedLasso};
use super::LassoConstraintSeq;
use crate::model::{Assignment, Constraint, StateConstraint, Test};

pub fn random_state_constraint<R: Rng>(rng: &mut R, k: usize) -> StateConstraint {
    let keys: Vec<usize> = (0..k).map(|_| rng.gen_range(0..k.max(1))).collect();
    StateConstraint::from_keys(&keys)
}

/// A random interleaving of the classes of `start` (unprimed) and `end` (primed),
/// where a class of each side may be merged. Merges are favoured so that values
/// tend to persist.
pub fn random_constraint_between<R: Rng>(rng: &mut R, start: &StateConstraint, end: &StateConstraint) -> Constraint {
    let k = start.len();
    assert_eq!(end.len(), k);
    let (a, b) = (start.classes(), end.classes());
    let (mut i, mut j) = (0, 0);
    let mut keys = vec![0usize; 2 * k];
    let mut key = 0;
    while i < a.len() || j < b.len() {
        // 0: start class alone, 1: end class alone, 2: merged
        let choice = if i == a.len() {
            1
        } else if j == b.len() {
            0
        } else {
            [0, 1, 2, 2][rng.gen_range(0..4)]
        };
        if choice != 1 {
            for &r in &a[i] {
                keys[r] = key;
            }
            i += 1;
        }
        if choice != 0 {
            for &r in &b[j] {
                keys[k + r] = key;
            }
            j += 1;
        }
        key += 1;
    }
    Constraint::from_keys(k, &keys)
}

/// A random constraint whose start order is `start`.
pub fn random_constraint_from<R: Rng>(rng: &mut R, start: &StateConstraint) -> Constraint {
    let end = if rng.gen_bool(0.3) { start.clone() } else { random_state_constraint(rng, start.len()) };
    random_constraint_between(rng, start, &end)
}

fn random_start<R: Rng>(rng: &mut R, k: usize, zero_bias: f64) -> StateConstraint {
    if rng.gen_bool(zero_bias) {
        StateConstraint::all_equal(k)
    } else {
        random_state_constraint(rng, k)
    }
}

/// A consistent prefix of length `len`; the first order is all-equal with probability `zero_bias`.
pub fn random_consistent_prefix<R: Rng>(rng: &mut R, k: usize, len: usize, zero_bias: f64) -> Vec<Constraint> {
    let mut pi = random_start(rng, k, zero_bias);
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let c = random_constraint_from(rng, &pi);
        pi = c.end();
        out.push(c);
    }
    out
}

/// A consistent lasso with `|u| = ulen`, `|v| = vlen >= 1`.
pub fn random_consistent_lasso<R: Rng>(rng: &mut R, k: usize, ulen: usize, vlen: usize, zero_bias: f64) -> LassoConstraintSeq {
    assert!(vlen >= 1);
    let prefix = random_consistent_prefix(rng, k, ulen, zero_bias);
    let v0 = match prefix.last() {
        Some(c) => c.end(),
        None => random_start(rng, k, zero_bias),
    };
    let mut lp = Vec::with_capacity(vlen);
    let mut pi = v0.clone();
    for i in 0..vlen {
        let c = if i + 1 == vlen {
            let end = v0.clone();
            random_constraint_between(rng, &pi, &end)
        } else {
            random_constraint_from(rng, &pi)
        };
        pi = c.end();
        lp.push(c);
    }
    LassoConstraintSeq::new(prefix, lp)
}

/// A datum relative to the current values: equal to one, between two, above or below all.
fn random_datum<R: Rng>(rng: &mut R, vals: &[i64]) -> i64 {
    let mut sorted = vals.to_vec();
    sorted.sort();
    sorted.dedup();
    match rng.gen_range(0..10) {
        0..=2 if !sorted.is_empty() => sorted[rng.gen_range(0..sorted.len())],
        3..=6 if sorted.len() >= 2 => {
            let i = rng.gen_range(0..sorted.len() - 1);
            (sorted[i] + sorted[i + 1]).div_euclid(2)
        }
        9 => sorted.first().copied().unwrap_or(0) - 1024,
        _ => sorted.last().copied().unwrap_or(0) + 1024,
    }
}

/// A random action word letter by letter along a concrete play, so each letter is
/// realizable when it is read for the first time.
pub fn random_action_word<R: Rng>(rng: &mut R, k: usize, vals: &mut Vec<i64>, len: usize) -> Vec<(Test, Assignment)> {
    (0..len)
        .map(|_| {
            let d = random_datum(rng, vals);
            let t = Test::of_datum(vals, &d);
            let a = Assignment(rng.gen_range(0..1u32 << k));
            for r in a.regs() {
                vals[r] = d;
            }
            (t, a)
        })
        .collect()
}

/// The constraint lasso over `R_d` induced by a random action lasso, if consistent.
pub fn random_induced_lasso<R: Rng>(rng: &mut R, k: usize, max_u: usize, max_v: usize) -> Option<LassoConstraintSeq> {
    let mut vals = vec![0i64; k];
    let (ul, vl) = (rng.gen_range(0..=max_u), rng.gen_range(1..=max_v));
    let u = random_action_word(rng, k, &mut vals, ul);
    let v = random_action_word(rng, k, &mut vals, vl);
    match induced_lasso(k, &u, &v) {
        InducedLasso::Lasso(s) => Some(s),
        InducedLasso::Inconsistent { .. } => None,
    }
}

/// A consistent lasso in which one register climbs strictly below a constant one
/// while the remaining registers sit still below, at, or above the ceiling.
pub fn random_ceiling_lasso<R: Rng>(rng: &mut R, k: usize, ulen: usize, vlen: usize) -> LassoConstraintSeq {
    assert!(k >= 2 && vlen >= 1);
    let mut perm: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let (ceil, climber) = (perm[0], perm[1]);
    let mut vals = vec![0i64; k];
    vals[ceil] = 100;
    vals[climber] = 10;
    for &r in &perm[2..] {
        vals[r] = [0, 10, 100, 150][rng.gen_range(0..4)];
    }
    let strict_at = rng.gen_range(0..vlen);
    let mut lp = Vec::with_capacity(vlen);
    for i in 0..vlen {
        let mut next = vals.clone();
        if i == strict_at {
            next[climber] += 1;
        }
        lp.push(Constraint::from_values(&vals, &next));
        vals = next;
    }
    let start = lp[0].start();
    let mut prefix = random_consistent_prefix(rng, k, ulen, 0.5);
    if let Some(last) = prefix.pop() {
        let c = random_constraint_between(rng, &last.start(), &start);
        prefix.push(c);
    }
    LassoConstraintSeq::new(prefix, lp)
}

/// Any lasso over `k` registers; consistent with probability about `p_consistent`.
/// Some draws come from induced action lassos over `k - 1` registers and from
/// [`random_ceiling_lasso`].
pub fn random_lasso<R: Rng>(rng: &mut R, k: usize, max_u: usize, max_v: usize, p_consistent: f64) -> LassoConstraintSeq {
    let ulen = rng.gen_range(0..=max_u);
    let vlen = rng.gen_range(1..=max_v);
    let family = if k >= 2 { rng.gen_range(0..6) } else { 5 };
    let induced = if family < 2 { random_induced_lasso(rng, k - 1, max_u, max_v) } else { None };
    let mut seq = match induced {
        Some(s) if s.prefix.len() <= max_u && s.lp.len() <= max_v => s,
        _ if family == 2 => random_ceiling_lasso(rng, k, ulen, vlen),
        _ => random_consistent_lasso(rng, k, ulen, vlen, 0.5),
    };
    if !rng.gen_bool(p_consistent) {
        let n = seq.positions();
        let p = rng.gen_range(0..n);
        let (a, b) = (random_state_constraint(rng, k), random_state_constraint(rng, k));
        let fresh = random_constraint_between(rng, &a, &b);
        if p < seq.prefix.len() {
            seq.prefix[p] = fresh;
        } else {
            seq.lp[p - seq.prefix.len()] = fresh;
        }
    }
    seq
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn between_has_requested_ends() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let s = random_state_constraint(&mut rng, 3);
            let e = random_state_constraint(&mut rng, 3);
            let c = random_constraint_between(&mut rng, &s, &e);
            assert_eq!(c.start(), s);
            assert_eq!(c.end(), e);
        }
    }

    #[test]
    fn between_reaches_every_constraint() {
        // every constraint over one register arises from its own ends
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let all = Constraint::enumerate(1);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..200 {
            let s = StateConstraint::all_equal(1);
            seen.insert(random_constraint_between(&mut rng, &s, &s));
        }
        assert_eq!(seen.len(), all.len());
    }

    #[test]
    fn lassos_are_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let u = rng.gen_range(0..4);
            let v = rng.gen_range(1..4);
            assert!(random_consistent_lasso(&mut rng, 3, u, v, 0.5).is_consistent());
        }
    }
}
