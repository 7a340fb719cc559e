//! From (test, assignment) letters to constraints over `R_d = R ∪ {r_d}`.
//!
//! `r_d` is the last index and holds the most recent datum.

use std::collections::HashMap;

use super::LassoConstraintSeq;
use crate::model::{Assignment, Constraint, Rel, StateConstraint, Test};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderInconsistent;

/// The constraint induced by reading a datum satisfying `t` and assigning it to `a`,
/// when the registers of `R_d` are currently ordered by `pi`.
pub fn constr(pi: &StateConstraint, t: &Test, a: Assignment) -> Result<Constraint, OrderInconsistent> {
    let n = pi.len() - 1;
    let rd = n;
    assert_eq!(t.len(), n, "test arity must be |R|");
    let classes = pi.classes();
    let rel_of_class: Vec<Option<Rel>> = classes
        .iter()
        .map(|cl| {
            let mut rels = cl.iter().filter(|&&r| r != rd).map(|&r| t.rel(r));
            let first = rels.next();
            match first {
                Some(f) => {
                    if rels.all(|x| x == f) {
                        Ok(Some(f))
                    } else {
                        Err(OrderInconsistent)
                    }
                }
                None => Ok(None),
            }
        })
        .collect::<Result<_, _>>()?;
    // classes where * is above come first, then at most one equal class, then below
    let mut phase = 0;
    let mut eq_class = None;
    let mut lo: Option<usize> = None; // highest class with * > class
    let mut hi: Option<usize> = None; // lowest class with * < class
    for (ci, r) in rel_of_class.iter().enumerate() {
        let Some(r) = r else { continue };
        let ph = match r {
            Rel::Gt => 0,
            Rel::Eq => 1,
            Rel::Lt => 2,
        };
        if ph < phase || (ph == 1 && eq_class.is_some()) {
            return Err(OrderInconsistent);
        }
        phase = ph;
        match r {
            Rel::Gt => lo = Some(ci),
            Rel::Eq => eq_class = Some(ci),
            Rel::Lt => {
                if hi.is_none() {
                    hi = Some(ci);
                }
            }
        }
    }
    // numeric key of the datum: class c has key 2c + 2
    let star_key: usize = match eq_class {
        Some(c) => 2 * c + 2,
        None => {
            let lo_i = lo.map_or(-1i64, |c| c as i64);
            let hi_i = hi.map_or(classes.len() as i64, |c| c as i64);
            // a class between lo and hi holds only r_d; * ties with it
            let between: Vec<usize> = ((lo_i + 1)..hi_i).map(|c| c as usize).collect();
            match between.as_slice() {
                [c] => 2 * c + 2,
                [] => (2 * lo_i + 3) as usize,
                _ => unreachable!("at most one class without R registers"),
            }
        }
    };
    let mut keys = Vec::with_capacity(2 * (n + 1));
    for r in 0..=n {
        keys.push(2 * pi.rank(r) as usize + 2);
    }
    for r in 0..=n {
        let now = 2 * pi.rank(r) as usize + 2;
        keys.push(if r == rd || a.contains(r) { star_key } else { now });
    }
    Ok(Constraint::from_keys(n + 1, &keys))
}

/// Result of threading `constr` through an action lasso.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InducedLasso {
    Lasso(LassoConstraintSeq),
    Inconsistent { at: usize },
}

/// Induce the constraint lasso of `u_a · v_a^ω`, starting from all registers equal.
pub fn induced_lasso(k: usize, u: &[(Test, Assignment)], v: &[(Test, Assignment)]) -> InducedLasso {
    assert!(!v.is_empty());
    let mut pi = StateConstraint::all_equal(k + 1);
    let mut out = Vec::new();
    for (i, (t, a)) in u.iter().enumerate() {
        match constr(&pi, t, *a) {
            Ok(c) => {
                pi = c.end();
                out.push(c);
            }
            Err(_) => return InducedLasso::Inconsistent { at: i },
        }
    }
    let mut seen: HashMap<StateConstraint, usize> = HashMap::new();
    let mut iter_starts = Vec::new();
    loop {
        if let Some(&j) = seen.get(&pi) {
            let split = iter_starts[j];
            let lp = out.split_off(split);
            return InducedLasso::Lasso(LassoConstraintSeq::new(out, lp));
        }
        seen.insert(pi.clone(), iter_starts.len());
        iter_starts.push(out.len());
        for (t, a) in v {
            match constr(&pi, t, *a) {
                Ok(c) => {
                    pi = c.end();
                    out.push(c);
                }
                Err(_) => return InducedLasso::Inconsistent { at: out.len() },
            }
        }
    }
}
