//! HOA-like text dump of a parity automaton over an explicit alphabet.

use std::collections::HashMap;
use std::fmt::Write;

use super::Dpa;

/// Explores the states reachable over `alphabet`; fails past `max_states`.
pub fn dump_hoa<L, D: Dpa<L>>(
    d: &D,
    alphabet: &[L],
    letter_name: &dyn Fn(&L) -> String,
    max_states: usize,
) -> Result<String, String> {
    let mut ids: HashMap<D::State, usize> = HashMap::new();
    let mut states = vec![d.initial()];
    ids.insert(states[0].clone(), 0);
    let mut edges: Vec<Vec<(usize, usize, u32)>> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let mut row = Vec::with_capacity(alphabet.len());
        for (j, a) in alphabet.iter().enumerate() {
            let (q2, p) = d.step(&states[i], a);
            let id = match ids.get(&q2) {
                Some(&id) => id,
                None => {
                    if states.len() >= max_states {
                        return Err(format!("more than {max_states} states"));
                    }
                    ids.insert(q2.clone(), states.len());
                    states.push(q2);
                    states.len() - 1
                }
            };
            row.push((j, id, p));
        }
        edges.push(row);
        i += 1;
    }
    let mut out = String::new();
    writeln!(out, "HOA: v1").unwrap();
    writeln!(out, "States: {}", states.len()).unwrap();
    writeln!(out, "Start: 0").unwrap();
    writeln!(out, "acc-name: parity max even {}", d.max_priority() + 1).unwrap();
    writeln!(out, "AP-letters: {}", alphabet.len()).unwrap();
    for (j, a) in alphabet.iter().enumerate() {
        writeln!(out, "  {j}: {}", letter_name(a)).unwrap();
    }
    writeln!(out, "--BODY--").unwrap();
    for (q, row) in edges.iter().enumerate() {
        writeln!(out, "State: {q} \"{:?}\"", states[q]).unwrap();
        for &(j, t, p) in row {
            writeln!(out, "  [{j}] {t} {{{p}}}").unwrap();
        }
    }
    writeln!(out, "--END--").unwrap();
    Ok(out)
}
