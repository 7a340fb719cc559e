//! Input-driven output specifications and their reduction to one-sided games.
//!
//! Eve answers by outputting the content of a register. Since registers holding
//! equal values are indistinguishable, the reduction tracks which registers are
//! equal and lets the output register play the role of a label.
//!
//! An Eve transition is keyed by an output register. When the output value sits
//! in several registers, the transition of the lowest such register that has
//! one is taken; if none has one, the play enters a losing sink.

use std::collections::HashMap;

use crate::model::{all_tests, num_tests, Assignment, OneSidedSpec, Player, Registers, Rel, State, Test};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdoSpec {
    pub registers: Registers,
    pub states: Vec<State>,
    pub initial: usize,
    /// Adam states: one entry per test. Empty for Eve states.
    pub delta_a: Vec<Vec<(Assignment, usize)>>,
    /// Eve states: successor per output register, if any. Empty for Adam states.
    pub delta_out: Vec<Vec<Option<usize>>>,
}

impl IdoSpec {
    pub fn check(&self) -> Result<(), String> {
        let k = self.registers.len();
        let nt = num_tests(k);
        let n = self.states.len();
        if self.initial >= n || self.states[self.initial].player != Player::Adam {
            return Err("the initial state must belong to Adam".into());
        }
        if self.delta_a.len() != n || self.delta_out.len() != n {
            return Err("transition tables have the wrong size".into());
        }
        for (q, s) in self.states.iter().enumerate() {
            if s.priority == 0 {
                return Err(format!("state `{}`: priority must be at least 1", s.name));
            }
            match s.player {
                Player::Adam => {
                    if self.delta_a[q].len() != nt || !self.delta_out[q].is_empty() {
                        return Err(format!("state `{}`: wrong transition table", s.name));
                    }
                    if self.delta_a[q].iter().any(|&(_, t)| t >= n || self.states[t].player != Player::Eve) {
                        return Err(format!("state `{}`: Adam transitions must lead to Eve states", s.name));
                    }
                }
                Player::Eve => {
                    if self.delta_out[q].len() != k || !self.delta_a[q].is_empty() {
                        return Err(format!("state `{}`: wrong transition table", s.name));
                    }
                    if self.delta_out[q].iter().all(Option::is_none) {
                        return Err(format!("state `{}` outputs no register", s.name));
                    }
                    if self.delta_out[q].iter().flatten().any(|&t| t >= n || self.states[t].player != Player::Adam) {
                        return Err(format!("state `{}`: output transitions must lead to Adam states", s.name));
                    }
                }
            }
        }
        Ok(())
    }

    /// Eve's successor when outputting register `r` while registers are grouped by `eq`
    /// (`eq[s]` is the class id of `s`).
    pub fn out_step(&self, q: usize, r: usize, eq: &[u8]) -> Option<usize> {
        (0..self.registers.len()).filter(|&s| eq[s] == eq[r]).find_map(|s| self.delta_out[q][s])
    }
}

/// Canonical equality partition: class ids by first occurrence.
fn canonical(keys: &[usize]) -> Vec<u8> {
    let mut seen: Vec<usize> = Vec::new();
    keys.iter()
        .map(|k| match seen.iter().position(|x| x == k) {
            Some(i) => i as u8,
            None => {
                seen.push(*k);
                (seen.len() - 1) as u8
            }
        })
        .collect()
}

/// Equalities after reading a datum with test `t` and assigning it to `a`.
fn next_partition(eq: &[u8], t: &Test, a: Assignment) -> Vec<u8> {
    let k = eq.len();
    // the datum joins the class of a register it equals, if any
    let datum_class = (0..k).find(|&r| t.rel(r) == Rel::Eq).map_or(usize::MAX, |r| eq[r] as usize);
    let keys: Vec<usize> = (0..k).map(|r| if a.contains(r) { datum_class } else { eq[r] as usize }).collect();
    canonical(&keys)
}

fn partition_name(eq: &[u8], regs: &Registers) -> String {
    let mut classes: Vec<Vec<&str>> = Vec::new();
    for (r, &c) in eq.iter().enumerate() {
        if classes.len() <= c as usize {
            classes.resize(c as usize + 1, Vec::new());
        }
        classes[c as usize].push(regs.name(r));
    }
    classes.iter().map(|c| c.join("=")).collect::<Vec<_>>().join(",")
}

/// The one-sided game with labels = registers and states `(q, equality partition)`,
/// plus a losing sink pair. Only states reachable from the initial one are built.
pub fn reduce_ido_to_one_sided(spec: &IdoSpec) -> Result<OneSidedSpec, String> {
    spec.check()?;
    let regs = &spec.registers;
    let k = regs.len();
    let tests = all_tests(k);
    let mut index: HashMap<(usize, Vec<u8>), usize> = HashMap::new();
    let mut states: Vec<State> = Vec::new();
    let mut keys: Vec<(usize, Vec<u8>)> = Vec::new();
    // sink pair: Adam sink 0, Eve sink 1
    states.push(State { name: "⊥".into(), player: Player::Adam, priority: 1 });
    states.push(State { name: "⊥e".into(), player: Player::Eve, priority: 1 });
    keys.push((usize::MAX, Vec::new()));
    keys.push((usize::MAX, Vec::new()));
    let mut intern = |q: usize, eq: Vec<u8>, states: &mut Vec<State>, keys: &mut Vec<(usize, Vec<u8>)>| -> usize {
        *index.entry((q, eq.clone())).or_insert_with(|| {
            let s = &spec.states[q];
            let name = if k == 0 { s.name.clone() } else { format!("{}[{}]", s.name, partition_name(&eq, regs)) };
            states.push(State { name, player: s.player, priority: s.priority });
            keys.push((q, eq));
            states.len() - 1
        })
    };
    let init = intern(spec.initial, vec![0; k], &mut states, &mut keys);
    let mut delta_a: Vec<Vec<(Assignment, usize)>> = vec![vec![(Assignment::EMPTY, 1); tests.len()], Vec::new()];
    let mut delta_e: Vec<Vec<usize>> = vec![Vec::new(), vec![0; k]];
    let mut i = 2;
    while i < states.len() {
        let (q, eq) = keys[i].clone();
        match spec.states[q].player {
            Player::Adam => {
                let row = tests
                    .iter()
                    .map(|t| {
                        let (a, q2) = spec.delta_a[q][t.index()];
                        (a, intern(q2, next_partition(&eq, t, a), &mut states, &mut keys))
                    })
                    .collect();
                delta_a.push(row);
                delta_e.push(Vec::new());
            }
            Player::Eve => {
                let row = (0..k)
                    .map(|r| match spec.out_step(q, r, &eq) {
                        Some(q2) => intern(q2, eq.clone(), &mut states, &mut keys),
                        None => 0,
                    })
                    .collect();
                delta_a.push(Vec::new());
                delta_e.push(row);
            }
        }
        i += 1;
    }
    let out = OneSidedSpec {
        registers: regs.clone(),
        labels: regs.names().to_vec(),
        states,
        initial: init,
        delta_a,
        delta_e,
    };
    out.check().map_err(|e| e.to_string())?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::dsl::{parse_document, SpecDocument};

    fn ido(text: &str) -> IdoSpec {
        match parse_document(text).unwrap() {
            SpecDocument::Ido(s) => s,
            SpecDocument::OneSided(_) => panic!("expected an ido spec"),
        }
    }

    #[test]
    fn echo_reduces() {
        let s = ido(include_str!("../../../../specs/echo.ido"));
        let r = reduce_ido_to_one_sided(&s).unwrap();
        assert_eq!(r.registers, s.registers);
        assert_eq!(r.labels, s.registers.names().to_vec());
    }

    #[test]
    fn partition_update() {
        let t = Test(vec![Rel::Eq, Rel::Gt]);
        // r0 != r1, datum equals r0, assign to r1
        assert_eq!(next_partition(&[0, 1], &t, Assignment::from_regs([1])), vec![0, 0]);
        let t = Test(vec![Rel::Gt, Rel::Gt]);
        assert_eq!(next_partition(&[0, 0], &t, Assignment::from_regs([0])), vec![0, 1]);
    }

    #[test]
    fn output_uses_equal_register() {
        let s = ido(include_str!("../../../../specs/max.ido"));
        let e = s.states.iter().position(|x| x.player == Player::Eve).unwrap();
        let m = s.registers.index("m").unwrap();
        let l = s.registers.index("l").unwrap();
        // with m = l, outputting l counts as outputting m
        assert_eq!(s.out_step(e, l, &[0, 0]), s.delta_out[e][m]);
    }
}
