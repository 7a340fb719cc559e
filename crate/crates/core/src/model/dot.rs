//! Graphviz export. Adam nodes are boxes, Eve nodes are circles.

use super::basic::{Player, Test};
use super::dsl::test_guard;
use super::spec::OneSidedSpec;
use super::transducer::{test_code, RegisterTransducer};
use crate::game::ParityGame;

fn esc(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn shape(p: Player) -> &'static str {
    match p {
        Player::Adam => "shape=box, style=filled, fillcolor=\"#f4b6b6\"",
        Player::Eve => "shape=circle, style=filled, fillcolor=\"#b6f4b6\"",
    }
}

pub fn spec_to_dot(spec: &OneSidedSpec) -> String {
    let mut s = String::from("digraph spec {\n  rankdir=LR;\n");
    for (q, st) in spec.states.iter().enumerate() {
        s.push_str(&format!(
            "  q{q} [label=\"{} ({})\", {}{}];\n",
            esc(&st.name),
            st.priority,
            shape(st.player),
            if q == spec.initial { ", penwidth=2" } else { "" }
        ));
    }
    let k = spec.registers.len();
    for q in 0..spec.num_states() {
        match spec.player(q) {
            Player::Adam => {
                // one edge per (assignment, target), listing its tests
                let mut groups: Vec<((u32, usize), Vec<String>)> = Vec::new();
                for (ti, &(a, t)) in spec.delta_a[q].iter().enumerate() {
                    let g = test_guard(&Test::from_index(k, ti), &spec.registers);
                    match groups.iter_mut().find(|(key, _)| *key == (a.0, t)) {
                        Some((_, v)) => v.push(g),
                        None => groups.push(((a.0, t), vec![g])),
                    }
                }
                for ((a, t), gs) in groups {
                    let guard = if gs.len() == spec.delta_a[q].len() { "TOP".to_string() } else { gs.join(" | ") };
                    let asgn = super::basic::Assignment(a);
                    let suffix = if asgn.is_empty() { String::new() } else { format!(" / {}", asgn.display(&spec.registers)) };
                    s.push_str(&format!("  q{q} -> q{t} [label=\"{}{}\"];\n", esc(&guard), esc(&suffix)));
                }
            }
            Player::Eve => {
                let mut groups: Vec<(usize, Vec<&str>)> = Vec::new();
                for (l, &t) in spec.delta_e[q].iter().enumerate() {
                    match groups.iter_mut().find(|(x, _)| *x == t) {
                        Some((_, v)) => v.push(&spec.labels[l]),
                        None => groups.push((t, vec![&spec.labels[l]])),
                    }
                }
                for (t, ls) in groups {
                    s.push_str(&format!("  q{q} -> q{t} [label=\"{}\", fontcolor=darkgreen];\n", esc(&ls.join(","))));
                }
            }
        }
    }
    s.push_str("}\n");
    s
}

pub fn transducer_to_dot(t: &RegisterTransducer) -> String {
    let mut s = String::from("digraph transducer {\n  rankdir=LR;\n");
    for (q, n) in t.names.iter().enumerate() {
        s.push_str(&format!(
            "  t{q} [label=\"{}\", shape=ellipse{}];\n",
            esc(n),
            if q == t.initial { ", penwidth=2" } else { "" }
        ));
    }
    let k = t.registers.len();
    for (q, row) in t.steps.iter().enumerate() {
        for (ti, st) in row.iter().enumerate() {
            s.push_str(&format!(
                "  t{q} -> t{} [label=\"{} {} / {}\"];\n",
                st.next,
                esc(&test_code(&Test::from_index(k, ti))),
                esc(&st.asgn.display(&t.registers)),
                esc(&t.labels[st.label])
            ));
        }
    }
    s.push_str("}\n");
    s
}

pub fn game_to_dot(g: &ParityGame) -> String {
    let mut s = String::from("digraph game {\n");
    for v in 0..g.num_vertices() {
        let name = g.names.get(v).cloned().unwrap_or_else(|| v.to_string());
        s.push_str(&format!(
            "  v{v} [label=\"{} : {}\", {}{}];\n",
            esc(&name),
            g.priority[v],
            shape(g.owner[v]),
            if v == g.initial { ", penwidth=2" } else { "" }
        ));
    }
    for v in 0..g.num_vertices() {
        for &w in &g.succ[v] {
            s.push_str(&format!("  v{v} -> v{w};\n"));
        }
    }
    s.push_str("}\n");
    s
}

pub fn node_count(dot: &str) -> usize {
    dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::basic::{num_tests, Assignment, Registers};
    use crate::model::dsl::parse_spec;
    use crate::model::transducer::Step;

    #[test]
    fn fig1_dot() {
        let spec = parse_spec(include_str!("../../../../specs/fig1.rsa")).unwrap();
        let d = spec_to_dot(&spec);
        assert_eq!(node_count(&d), spec.num_states());
        assert!(d.contains("shape=box") && d.contains("shape=circle"));
    }

    #[test]
    fn single_state_transducer() {
        let t = RegisterTransducer {
            registers: Registers::numbered(2),
            labels: vec!["x".into()],
            names: vec!["s".into()],
            initial: 0,
            steps: vec![vec![Step { asgn: Assignment::EMPTY, label: 0, next: 0 }; num_tests(2)]],
        };
        let d = transducer_to_dot(&t);
        assert_eq!(node_count(&d), 1);
        assert_eq!(d.matches("t0 -> t0").count(), 9);
    }
}
