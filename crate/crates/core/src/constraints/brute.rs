//! Exhaustive search for ℕ valuations realizing a finite constraint prefix.

use std::collections::HashSet;

use crate::model::Constraint;

/// Search valuations with values in `0..=K`, `K = k·(L+1)`.
pub fn brute_force_prefix_n(prefix: &[Constraint], zero_start: bool) -> Option<Vec<Vec<u64>>> {
    let k = prefix.first().map_or(0, |c| c.k());
    let big = (k * (prefix.len() + 1)) as u64;
    brute_force_prefix_bounded(prefix, zero_start, big)
}

pub fn brute_force_prefix_bounded(prefix: &[Constraint], zero_start: bool, big: u64) -> Option<Vec<Vec<u64>>> {
    let Some(first) = prefix.first() else {
        return Some(vec![vec![]]);
    };
    let k = first.k();
    let mut dead: HashSet<(usize, Vec<u64>)> = HashSet::new();
    let starts: Vec<Vec<u64>> = if zero_start {
        vec![vec![0; k]]
    } else {
        ordered_valuations(&first.start().classes(), k, big)
    };
    for v0 in starts {
        let mut path = vec![v0.clone()];
        if dfs(prefix, 0, &v0, big, &mut dead, &mut path) {
            return Some(path);
        }
    }
    None
}

/// All valuations in `0..=big` whose order is exactly the given ascending classes.
fn ordered_valuations(classes: &[Vec<usize>], k: usize, big: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut v = vec![0; k];
    fn rec(classes: &[Vec<usize>], i: usize, min: u64, big: u64, v: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == classes.len() {
            out.push(v.clone());
            return;
        }
        for x in min..=big {
            for &r in &classes[i] {
                v[r] = x;
            }
            rec(classes, i + 1, x + 1, big, v, out);
        }
    }
    rec(classes, 0, 0, big, &mut v, &mut out);
    out
}

fn successors(c: &Constraint, v: &[u64], big: u64) -> Vec<Vec<u64>> {
    let k = c.k();
    if !c.start().cmp_all(v) {
        return Vec::new();
    }
    // primed classes in ascending order, with bounds from the unprimed values
    let classes: Vec<Vec<usize>> = c.classes().into_iter().filter(|cl| cl.iter().any(|&i| i >= k)).collect();
    let mut out = Vec::new();
    let mut w = vec![0; k];
    fn rec(c: &Constraint, classes: &[Vec<usize>], i: usize, prev: Option<u64>, v: &[u64], big: u64, w: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        let k = c.k();
        if i == classes.len() {
            out.push(w.clone());
            return;
        }
        let cl = &classes[i];
        let rank = c.ranks()[cl[0]];
        let fixed = cl.iter().find(|&&p| p < k).map(|&p| v[p]);
        let lo = (0..k).filter(|&r| c.ranks()[r] < rank).map(|r| v[r] as i64 + 1).max().unwrap_or(0);
        let hi = (0..k).filter(|&r| c.ranks()[r] > rank).map(|r| v[r] as i64 - 1).min().unwrap_or(big as i64);
        let lo = lo.max(prev.map_or(0, |p| p as i64 + 1));
        let hi = hi.min(big as i64);
        let range: Vec<i64> = match fixed {
            Some(x) => vec![x as i64],
            None => (lo..=hi).collect(),
        };
        for x in range {
            if x < lo || x > hi {
                continue;
            }
            let x = x as u64;
            for &p in cl {
                if p >= k {
                    w[p - k] = x;
                }
            }
            rec(c, classes, i + 1, Some(x), v, big, w, out);
        }
    }
    rec(c, &classes, 0, None, v, big, &mut w, &mut out);
    out
}

fn dfs(
    prefix: &[Constraint],
    i: usize,
    v: &[u64],
    big: u64,
    dead: &mut HashSet<(usize, Vec<u64>)>,
    path: &mut Vec<Vec<u64>>,
) -> bool {
    if i == prefix.len() {
        return true;
    }
    if dead.contains(&(i, v.to_vec())) {
        return false;
    }
    for w in successors(&prefix[i], v, big) {
        debug_assert!(prefix[i].satisfied_by(v, &w));
        path.push(w.clone());
        if dfs(prefix, i + 1, &w, big, dead, path) {
            return true;
        }
        path.pop();
    }
    dead.insert((i, v.to_vec()));
    false
}

impl crate::model::StateConstraint {
    /// Whether valuation `v` realizes exactly this order.
    pub fn cmp_all<T: Ord>(&self, v: &[T]) -> bool {
        (0..v.len()).all(|a| (0..v.len()).all(|b| v[a].cmp(&v[b]) == self.cmp_regs(a, b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_prefix_witness() {
        // registers r1..r4 at indices 0..3
        let c0 = Constraint::from_values(&[3, 4, 5, 6], &[3, 1, 6, 5]);
        let c1 = Constraint::from_values(&[3, 1, 6, 5], &[0, 1, 5, 6]);
        let w = brute_force_prefix_n(&[c0.clone(), c1.clone()], false).unwrap();
        assert!(c0.satisfied_by(&w[0], &w[1]) && c1.satisfied_by(&w[1], &w[2]));
        // the hand witness also works, and the search finds one at least as small
        assert!(c0.satisfied_by(&[3, 4, 5, 6], &[3, 1, 6, 5]));
        assert!(w[0][3] <= 6);
        assert!(brute_force_prefix_n(&[c0, c1], true).is_none());
    }

    #[test]
    fn identity_zero_start() {
        let c = Constraint::from_values(&[0, 0], &[0, 0]);
        assert_eq!(brute_force_prefix_n(&[c.clone(), c], true), Some(vec![vec![0, 0]; 3]));
    }

    #[test]
    fn decrease_needs_room() {
        let c = Constraint::from_values(&[1], &[0]);
        assert!(brute_force_prefix_n(&[c.clone()], true).is_none());
        assert!(brute_force_prefix_n(&[c.clone(), c], false).is_some());
    }
}
