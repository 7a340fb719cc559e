//! The feasibility arena of a one-sided specification.
//!
//! Adam vertices are the initial state and pairs `(label, Adam state)`; Eve
//! vertices are triples `(test, assignment, Eve state)`. Only vertices reachable
//! from the initial one are built.

use std::collections::HashMap;

use crate::model::{all_tests, Assignment, OneSidedSpec, Player, Test};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ArenaVertex {
    Init(usize),
    Adam { label: usize, q: usize },
    Eve { test: usize, asgn: Assignment, q: usize },
}

impl ArenaVertex {
    pub fn owner(&self) -> Player {
        match self {
            ArenaVertex::Init(_) | ArenaVertex::Adam { .. } => Player::Adam,
            ArenaVertex::Eve { .. } => Player::Eve,
        }
    }

    /// The specification state the vertex sits in.
    pub fn state(&self) -> usize {
        match *self {
            ArenaVertex::Init(q) | ArenaVertex::Adam { q, .. } | ArenaVertex::Eve { q, .. } => q,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Arena {
    pub vertices: Vec<ArenaVertex>,
    pub succ: Vec<Vec<usize>>,
    /// Tests by index, shared by all Eve vertices.
    pub tests: Vec<Test>,
}

impl Arena {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn count(&self, p: Player) -> usize {
        self.vertices.iter().filter(|v| v.owner() == p).count()
    }

    pub fn name(&self, spec: &OneSidedSpec, v: usize) -> String {
        let regs = &spec.registers;
        match &self.vertices[v] {
            ArenaVertex::Init(q) => spec.states[*q].name.clone(),
            ArenaVertex::Adam { label, q } => format!("({},{})", spec.labels[*label], spec.states[*q].name),
            ArenaVertex::Eve { test, asgn, q } => {
                format!("({},{},{})", self.tests[*test].display(regs), asgn.display(regs), spec.states[*q].name)
            }
        }
    }
}

pub fn build_arena(spec: &OneSidedSpec) -> Arena {
    let tests = all_tests(spec.registers.len());
    let mut index: HashMap<ArenaVertex, usize> = HashMap::new();
    let mut vertices = vec![ArenaVertex::Init(spec.initial)];
    index.insert(vertices[0].clone(), 0);
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < vertices.len() {
        let next: Vec<ArenaVertex> = match vertices[i] {
            ArenaVertex::Init(q) | ArenaVertex::Adam { q, .. } => tests
                .iter()
                .enumerate()
                .map(|(ti, t)| {
                    let (asgn, q2) = spec.adam_step(q, t);
                    ArenaVertex::Eve { test: ti, asgn, q: q2 }
                })
                .collect(),
            ArenaVertex::Eve { q, .. } => {
                (0..spec.labels.len()).map(|label| ArenaVertex::Adam { label, q: spec.eve_step(q, label) }).collect()
            }
        };
        let row = next
            .into_iter()
            .map(|v| {
                let n = vertices.len();
                *index.entry(v.clone()).or_insert_with(|| {
                    vertices.push(v);
                    n
                })
            })
            .collect();
        succ.push(row);
        i += 1;
    }
    Arena { vertices, succ, tests }
}
