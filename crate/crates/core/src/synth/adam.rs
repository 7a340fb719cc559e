//! Adam's side: his positional strategy, restricted to what it can reach, and the
//! data he plays along it.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::data::{AssignError, NatAssigner, RatAssigner};
use crate::constraints::constr::constr;
use crate::game::{ArenaVertex, PositionalStrategy, ProductGame};
use crate::model::{Assignment, Constraint, DataDomain, OneSidedSpec, Player, StateConstraint, Test};

pub type Datum = BigRational;

/// An Adam vertex of the game together with the move his strategy makes there.
#[derive(Clone, Debug)]
pub struct AdamNode {
    pub vertex: usize,
    pub name: String,
    pub pi: StateConstraint,
    /// Specification state of the Adam vertex.
    pub state: usize,
    pub test: Test,
    pub asgn: Assignment,
    /// Eve state reached by the move.
    pub eve_state: usize,
    /// Next node per label.
    pub next: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct AdamStrategyGraph {
    /// `|R|`.
    pub k: usize,
    pub nodes: Vec<AdamNode>,
    /// Game vertices of both players reachable under the strategy.
    pub restricted_vertices: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("Adam does not win from the initial vertex")]
pub struct NotUnrealizable;

/// The strategy restricted to the vertices it reaches from the initial one.
pub fn adam_strategy_graph(pg: &ProductGame, winner: &[Player], sigma_a: &PositionalStrategy) -> Result<AdamStrategyGraph, NotUnrealizable> {
    let g = &pg.game;
    if winner[g.initial] != Player::Adam {
        return Err(NotUnrealizable);
    }
    let mut index: HashMap<usize, usize> = HashMap::new();
    let mut order = vec![g.initial];
    index.insert(g.initial, 0);
    let mut eve_seen = std::collections::HashSet::new();
    let mut nodes = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        let w = sigma_a.choice[u].expect("strategy defined on Adam's region");
        assert!(!pg.is_broken(w), "a winning strategy never plays an impossible test");
        eve_seen.insert(w);
        let (test, asgn, eve_state) = match *pg.arena_vertex(w).expect("live vertex") {
            ArenaVertex::Eve { test, asgn, q } => (pg.arena.tests[test].clone(), asgn, q),
            _ => unreachable!("Adam moves into Eve vertices"),
        };
        let next = g.succ[w]
            .iter()
            .map(|&v| {
                let l = order.len();
                *index.entry(v).or_insert_with(|| {
                    order.push(v);
                    l
                })
            })
            .collect();
        nodes.push(AdamNode {
            vertex: u,
            name: g.names[u].clone(),
            pi: pg.order(u).expect("live vertex").clone(),
            state: pg.arena_vertex(u).expect("live vertex").state(),
            test,
            asgn,
            eve_state,
            next,
        });
        i += 1;
    }
    Ok(AdamStrategyGraph { k: pg.arena.tests.first().map_or(0, Test::len), restricted_vertices: nodes.len() + eve_seen.len(), nodes })
}

/// Vertices of the restricted graph times `|R_d| + 1`, plus one.
pub fn estimate_adam_bound(g: &AdamStrategyGraph) -> u32 {
    let rd = g.k + 1;
    u32::try_from(g.restricted_vertices * (rd + 1) + 1).expect("bound fits in u32")
}

#[derive(Clone, Debug)]
enum Values {
    Nat(NatAssigner),
    Rat(RatAssigner),
}

/// Adam's strategy with the data he plays along it. One value per play.
#[derive(Clone, Debug)]
pub struct AdamDataStrategy {
    pub graph: Arc<AdamStrategyGraph>,
    pub domain: DataDomain,
    pub bound: u32,
    node: usize,
    values: Values,
    constraints: Vec<Constraint>,
}

/// One Adam move.
#[derive(Clone, Debug)]
pub struct AdamMove {
    pub datum: Datum,
    pub test: Test,
    pub asgn: Assignment,
}

impl AdamDataStrategy {
    pub fn new(graph: Arc<AdamStrategyGraph>, domain: DataDomain) -> Self {
        let bound = estimate_adam_bound(&graph);
        Self::with_bound(graph, domain, bound)
    }

    pub fn with_bound(graph: Arc<AdamStrategyGraph>, domain: DataDomain, bound: u32) -> Self {
        let rd = graph.k + 1;
        let values = match domain {
            DataDomain::Nat => Values::Nat(NatAssigner::new(rd, bound)),
            DataDomain::Rat => Values::Rat(RatAssigner::new(rd)),
        };
        AdamDataStrategy { graph, domain, bound, node: 0, values, constraints: Vec::new() }
    }

    /// A fresh play from the initial vertex.
    pub fn reset(&self) -> Self {
        Self::with_bound(self.graph.clone(), self.domain, self.bound)
    }

    pub fn node(&self) -> &AdamNode {
        &self.graph.nodes[self.node]
    }

    /// The next datum, with the test it satisfies against the current registers.
    pub fn play(&mut self) -> Result<AdamMove, AssignError> {
        let n = &self.graph.nodes[self.node];
        let c = constr(&n.pi, &n.test, n.asgn).expect("strategy moves are realizable");
        let rd = self.graph.k;
        let datum = match &mut self.values {
            Values::Nat(a) => BigRational::from_integer(a.push(&c)?[rd].clone()),
            Values::Rat(a) => a.push(&c)?[rd].clone(),
        };
        self.constraints.push(c);
        Ok(AdamMove { datum, test: n.test.clone(), asgn: n.asgn })
    }

    /// Eve answered with `label`.
    pub fn observe(&mut self, label: usize) {
        self.node = self.graph.nodes[self.node].next[label];
    }

    /// Current values of the specification registers.
    pub fn valuation(&self) -> Vec<Datum> {
        let k = self.graph.k;
        match &self.values {
            Values::Nat(a) => a.values()[..k].iter().cloned().map(BigRational::from_integer).collect(),
            Values::Rat(a) => a.values()[..k].to_vec(),
        }
    }

    /// Constraints over `R_d` read so far.
    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// The lifted prefix and its integer values, over `ℕ`.
    pub fn nat_history(&self) -> Option<(&[Constraint], &[Vec<BigInt>])> {
        match &self.values {
            Values::Nat(a) => Some((a.lifted(), a.history())),
            Values::Rat(_) => None,
        }
    }

    /// Short text summary of the strategy graph.
    pub fn summary(&self, spec: &OneSidedSpec) -> String {
        let regs = &spec.registers;
        let mut s = format!(
            "adam strategy: {} nodes, {} restricted vertices, bound B = {}, domain {}\n",
            self.graph.nodes.len(),
            self.graph.restricted_vertices,
            self.bound,
            self.domain
        );
        for (i, n) in self.graph.nodes.iter().enumerate() {
            let next: Vec<String> =
                n.next.iter().enumerate().map(|(l, j)| format!("{}->{j}", spec.labels[l])).collect();
            s += &format!(
                "{i}\t{}\t{}\t{}\t{}\t{}\n",
                spec.states[n.state].name,
                crate::model::dsl::test_guard(&n.test, regs),
                n.asgn.display(regs),
                spec.states[n.eve_state].name,
                next.join(" ")
            );
        }
        s
    }
}

/// Outcome of Adam's strategy against an Eve who answers by her current state only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemorylessDuel {
    /// Nodes before the play repeats, and the period.
    pub prefix: usize,
    pub period: usize,
    /// Maximal specification priority on the repeated part.
    pub cycle_priority: u32,
    /// Whether the data Adam played realized every chosen test.
    pub data_ok: bool,
}

impl MemorylessDuel {
    pub fn adam_wins(&self) -> bool {
        self.data_ok && self.cycle_priority % 2 == 1
    }
}

/// Play `adam` against `choice[eve state] = label` until the play repeats, then once more around.
pub fn duel_memoryless(adam: &AdamDataStrategy, spec: &OneSidedSpec, choice: &[usize]) -> MemorylessDuel {
    let g = &adam.graph;
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut path = Vec::new();
    let mut u = 0;
    while !seen.contains_key(&u) {
        seen.insert(u, path.len());
        path.push(u);
        u = g.nodes[u].next[choice[g.nodes[u].eve_state]];
    }
    let start = seen[&u];
    let cycle_priority = path[start..]
        .iter()
        .map(|&v| spec.priority(g.nodes[v].state).max(spec.priority(g.nodes[v].eve_state)))
        .max()
        .expect("nonempty cycle");
    let mut play = adam.reset();
    let mut regs: Vec<Datum> = play.valuation();
    let mut data_ok = true;
    for _ in 0..path.len() + (path.len() - start) {
        let Ok(mv) = play.play() else {
            data_ok = false;
            break;
        };
        if Test::of_datum(&regs, &mv.datum) != mv.test {
            data_ok = false;
            break;
        }
        regs = crate::model::update_valuation(&regs, &mv.datum, mv.asgn);
        let label = choice[play.node().eve_state];
        play.observe(label);
    }
    MemorylessDuel { prefix: start, period: path.len() - start, cycle_priority, data_ok }
}

/// All Eve strategies that pick a label per Eve state.
pub fn memoryless_eves(spec: &OneSidedSpec) -> Vec<Vec<usize>> {
    let eves: Vec<usize> = (0..spec.num_states()).filter(|&q| spec.player(q) == Player::Eve).collect();
    let nl = spec.labels.len();
    let total = nl.checked_pow(eves.len() as u32).expect("catalog size");
    (0..total)
        .map(|mut code| {
            let mut choice = vec![0; spec.num_states()];
            for &q in &eves {
                choice[q] = code % nl;
                code /= nl;
            }
            choice
        })
        .collect()
}
