//! The finite parity game: arena × order of `R_d` × automata × appearance record.
//!
//! Adam moves read a test and an assignment; the induced constraint feeds the
//! automata whose union is "not (quasi-)feasible". Eve moves feed them nothing,
//! which is the same as the neutral priority 1. Every move feeds the priority of
//! the state it reaches into one more component. The components are combined by
//! an appearance record, and the priority a move emits is stored on the vertex it
//! reaches.
//!
//! The game is built in two passes. The first explores triples (arena vertex,
//! order, automaton states) and records the component priorities of each move.
//! Each component's priorities are then compressed over that graph, keeping the
//! parity of the maximum on every strongly connected set, before the second pass
//! adds the record.
//!
//! A test that contradicts the current order cannot be realized by any datum;
//! such moves lead to a vertex Eve wins trivially.

use std::collections::HashMap;
use std::fmt::Write;

use super::arena::{build_arena, Arena, ArenaVertex};
use super::parity::{ParityGame, Solution};
use crate::constraints::constr::constr;
use crate::graph::scc;
use crate::model::{Constraint, DataDomain, OneSidedSpec, Player, StateConstraint};
use crate::omega::{
    build_bad_chain_nbas, build_consistency_dpa, build_inconsistency_nba, build_quasi_feasible_dpa, complement_dpa,
    determinize, Dpa, Iar, Memo,
};

/// How "not (quasi-)feasible" is split into automata over `ℕ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    /// One automaton per bad-chain automaton and one for inconsistency.
    Split,
    /// The complement of the single quasi-feasibility automaton.
    Union,
}

/// A deterministic automaton with integer states, usable behind a pointer.
pub trait IdDpa {
    fn step_id(&self, q: u32, c: &Constraint) -> (u32, u32);
    fn states(&self) -> usize;
    fn top_priority(&self) -> u32;
}

impl<D: Dpa<Constraint>> IdDpa for Memo<Constraint, D> {
    fn step_id(&self, q: u32, c: &Constraint) -> (u32, u32) {
        self.step(&q, c)
    }
    fn states(&self) -> usize {
        self.num_states()
    }
    fn top_priority(&self) -> u32 {
        self.max_priority()
    }
}

/// Automata whose union is the set of constraint words Eve wins on regardless of `α`.
pub fn losing_word_automata(k: usize, domain: DataDomain, how: Construction) -> Vec<Box<dyn IdDpa>> {
    match (domain, how) {
        (DataDomain::Rat, _) => vec![Box::new(Memo::new(complement_dpa(build_consistency_dpa(k, true))))],
        (DataDomain::Nat, Construction::Union) => {
            vec![Box::new(Memo::new(complement_dpa(build_quasi_feasible_dpa(k))))]
        }
        (DataDomain::Nat, Construction::Split) => {
            let mut nbas = build_bad_chain_nbas(k);
            nbas.push(build_inconsistency_nba(k));
            nbas.into_iter().map(|a| Box::new(Memo::new(determinize(a))) as Box<dyn IdDpa>).collect()
        }
    }
}

/// Parity-preserving compression of edge priorities (`0` = no priority).
///
/// Within every strongly connected part, the edges of maximal priority get the
/// least value of that parity above everything assigned inside the part without
/// them. Edges outside strongly connected parts get 1.
pub fn compress_edge_priorities(n: usize, edges: &[(usize, usize)], prio: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = prio.iter().map(|&p| u32::from(p > 0)).collect();
    let all: Vec<usize> = (0..edges.len()).collect();
    compress_rec(n, edges, prio, &all, &mut out);
    out
}

fn compress_rec(n: usize, edges: &[(usize, usize)], prio: &[u32], ids: &[usize], out: &mut [u32]) -> u32 {
    // local numbering of the vertices touched by `ids`
    let mut local: HashMap<usize, usize> = HashMap::new();
    for &e in ids {
        for v in [edges[e].0, edges[e].1] {
            let l = local.len();
            local.entry(v).or_insert(l);
        }
    }
    let m = local.len();
    debug_assert!(m <= n);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m];
    for &e in ids {
        adj[local[&edges[e].0]].push(local[&edges[e].1]);
    }
    let (comp, ncomp) = scc(m, &|v, buf: &mut Vec<usize>| buf.extend_from_slice(&adj[v]));
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for &e in ids {
        let (a, b) = (comp[local[&edges[e].0]], comp[local[&edges[e].1]]);
        if a == b {
            groups[a].push(e);
        }
    }
    let mut top_value = 0;
    for g in groups.into_iter().filter(|g| !g.is_empty()) {
        let Some(mx) = g.iter().map(|&e| prio[e]).max().filter(|&p| p > 0) else { continue };
        let (top, rest): (Vec<usize>, Vec<usize>) = g.into_iter().partition(|&e| prio[e] == mx);
        let h = if rest.is_empty() { 0 } else { compress_rec(n, edges, prio, &rest, out) };
        let mut v = h.max(1);
        if v % 2 != mx % 2 {
            v += 1;
        }
        for e in top {
            out[e] = v;
        }
        top_value = top_value.max(v);
    }
    top_value
}

/// A triple of the first pass.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductNode {
    pub arena: usize,
    pub pi: StateConstraint,
    pub dpa: Vec<u32>,
}

/// Back-reference of a game vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductVertex {
    pub arena: usize,
    /// `None` for the trivially won vertex.
    pub pi: Option<StateConstraint>,
    pub dpa: Vec<u32>,
    pub record: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductStats {
    pub arena_vertices: usize,
    pub arena_edges: usize,
    pub dpa_states: Vec<usize>,
    pub dpa_max_priority: Vec<u32>,
    pub compressed_max_priority: Vec<u32>,
    pub triples: usize,
    pub vertices: usize,
    pub edges: usize,
    pub max_priority: u32,
}

#[derive(Clone, Debug)]
pub struct ProductGame {
    pub domain: DataDomain,
    pub game: ParityGame,
    pub arena: Arena,
    pub nodes: Vec<ProductNode>,
    /// Per game vertex: its triple (`u32::MAX` for the trivially won vertex) and record.
    /// Successors of a live vertex are aligned with those of its arena vertex
    /// (one per test, or one per label), so they may repeat.
    pub info: Vec<(u32, Vec<u8>)>,
    pub stats: ProductStats,
}

/// The trivially won vertex for unrealizable tests.
pub const BROKEN: &str = "⊤";
const SINK: u32 = u32::MAX;

impl ProductGame {
    pub fn vertex(&self, v: usize) -> ProductVertex {
        let (node, ref record) = self.info[v];
        if node == SINK {
            return ProductVertex { arena: usize::MAX, pi: None, dpa: Vec::new(), record: record.clone() };
        }
        let n = &self.nodes[node as usize];
        ProductVertex { arena: n.arena, pi: Some(n.pi.clone()), dpa: n.dpa.clone(), record: record.clone() }
    }

    pub fn is_broken(&self, v: usize) -> bool {
        self.info[v].0 == SINK
    }

    pub fn arena_vertex(&self, v: usize) -> Option<&ArenaVertex> {
        let node = self.info[v].0;
        (node != SINK).then(|| &self.arena.vertices[self.nodes[node as usize].arena])
    }

    pub fn order(&self, v: usize) -> Option<&StateConstraint> {
        let node = self.info[v].0;
        (node != SINK).then(|| &self.nodes[node as usize].pi)
    }

    /// The constraint read on the move from `u` to `v`, if it is an Adam move into a live vertex.
    pub fn constraint_on(&self, u: usize, v: usize) -> Option<Constraint> {
        let pi = self.order(u)?;
        self.order(v)?;
        match *self.arena_vertex(v)? {
            ArenaVertex::Eve { test, asgn, .. } => constr(pi, &self.arena.tests[test], asgn).ok(),
            _ => None,
        }
    }
}

pub fn build_parity_game(spec: &OneSidedSpec, domain: DataDomain) -> ProductGame {
    build_parity_game_with(spec, domain, Construction::Split)
}

struct Move {
    to: u32,
    /// Component priorities, `0` for none; the last entry is the state priority.
    events: Vec<u32>,
}

pub fn build_parity_game_with(spec: &OneSidedSpec, domain: DataDomain, how: Construction) -> ProductGame {
    let arena = build_arena(spec);
    let k = spec.registers.len() + 1;
    let dpas = losing_word_automata(k, domain, how);
    let m = dpas.len();

    // first pass
    let mut nodes: Vec<ProductNode> = Vec::new();
    let mut index: HashMap<ProductNode, u32> = HashMap::new();
    let mut moves: Vec<Vec<Move>> = Vec::new();
    let start = ProductNode { arena: 0, pi: StateConstraint::all_equal(k), dpa: vec![0; m] };
    index.insert(start.clone(), 0);
    nodes.push(start);
    let mut i = 0;
    while i < nodes.len() {
        let cur = nodes[i].clone();
        let mut row = Vec::new();
        for &w in &arena.succ[cur.arena] {
            let alpha = spec.priority(arena.vertices[w].state());
            let (next, mut events) = match arena.vertices[w] {
                ArenaVertex::Eve { test, asgn, .. } => match constr(&cur.pi, &arena.tests[test], asgn) {
                    Ok(c) => {
                        let (dpa, ev): (Vec<u32>, Vec<u32>) =
                            dpas.iter().zip(&cur.dpa).map(|(d, &q)| d.step_id(q, &c)).unzip();
                        (Some(ProductNode { arena: w, pi: c.end(), dpa }), ev)
                    }
                    Err(_) => (None, Vec::new()),
                },
                _ => (Some(ProductNode { arena: w, pi: cur.pi.clone(), dpa: cur.dpa.clone() }), vec![0; m]),
            };
            let to = match next {
                Some(node) => {
                    let l = nodes.len() as u32;
                    *index.entry(node.clone()).or_insert_with(|| {
                        nodes.push(node);
                        l
                    })
                }
                None => SINK,
            };
            events.push(alpha);
            row.push(Move { to, events });
        }
        moves.push(row);
        i += 1;
    }
    drop(index);

    // compression, per component
    let mut flat: Vec<(usize, usize)> = Vec::new();
    let mut where_: Vec<(usize, usize)> = Vec::new();
    for (u, row) in moves.iter().enumerate() {
        for (j, mv) in row.iter().enumerate() {
            if mv.to != SINK {
                flat.push((u, mv.to as usize));
                where_.push((u, j));
            }
        }
    }
    let mut compressed_max = Vec::with_capacity(m + 1);
    for c in 0..=m {
        let prio: Vec<u32> = where_.iter().map(|&(u, j)| moves[u][j].events[c]).collect();
        let new = compress_edge_priorities(nodes.len(), &flat, &prio);
        compressed_max.push(new.iter().copied().max().unwrap_or(1).max(1));
        for (x, &(u, j)) in where_.iter().enumerate() {
            moves[u][j].events[c] = new[x];
        }
    }

    // second pass
    let iar = Iar::new(&compressed_max);
    let regs = spec.registers.with_data_register();
    let mut game = ParityGame::default();
    let mut info: Vec<(u32, Vec<u8>)> = Vec::new();
    let mut vindex: HashMap<(u32, Vec<u8>, u32), usize> = HashMap::new();
    let mut intern = |node: u32, rec: Vec<u8>, prio: u32, game: &mut ParityGame, info: &mut Vec<(u32, Vec<u8>)>| {
        *vindex.entry((node, rec.clone(), prio)).or_insert_with(|| {
            let (owner, name) = if node == SINK {
                (Player::Eve, BROKEN.to_string())
            } else {
                let n = &nodes[node as usize];
                let name = format!("{} {} {:?} {:?}", arena.name(spec, n.arena), n.pi.display(&regs), n.dpa, rec);
                (arena.vertices[n.arena].owner(), name)
            };
            info.push((node, rec));
            game.add_vertex(owner, prio, name)
        })
    };
    let v0 = intern(0, iar.initial(), 1, &mut game, &mut info);
    game.initial = v0;
    let sink = intern(SINK, Vec::new(), 2, &mut game, &mut info);
    let mut v = 0;
    while v < info.len() {
        if v == sink {
            game.succ[sink] = vec![sink];
            v += 1;
            continue;
        }
        let (node, rec) = info[v].clone();
        let mut row = Vec::new();
        for mv in &moves[node as usize] {
            let id = if mv.to == SINK {
                sink
            } else {
                let ev: Vec<Option<u32>> = mv.events.iter().map(|&p| (p > 0).then_some(p)).collect();
                let (rec2, p) = iar.update(&rec, &ev);
                intern(mv.to, rec2, p, &mut game, &mut info)
            };
            row.push(id);
        }
        game.succ[v] = row;
        v += 1;
    }
    let stats = ProductStats {
        arena_vertices: arena.num_vertices(),
        arena_edges: arena.num_edges(),
        dpa_states: dpas.iter().map(|d| d.states()).collect(),
        dpa_max_priority: dpas.iter().map(|d| d.top_priority()).collect(),
        compressed_max_priority: compressed_max,
        triples: nodes.len(),
        vertices: game.num_vertices(),
        edges: game.num_edges(),
        max_priority: game.max_priority(),
    };
    ProductGame { domain, game, arena, nodes, info, stats }
}

/// Region sizes, the winner at the initial vertex and the winner's strategy table.
pub fn solve_report(pg: &ProductGame, sol: &Solution, max_rows: usize) -> String {
    let g = &pg.game;
    let s = &pg.stats;
    let mut out = String::new();
    let we = sol.winner.iter().filter(|&&p| p == Player::Eve).count();
    let winner = sol.winner[g.initial];
    writeln!(out, "domain: {}", pg.domain).unwrap();
    writeln!(out, "arena: {} vertices, {} edges", s.arena_vertices, s.arena_edges).unwrap();
    writeln!(
        out,
        "automata: states {:?}, max priorities {:?}, compressed {:?}",
        s.dpa_states, s.dpa_max_priority, s.compressed_max_priority
    )
    .unwrap();
    writeln!(out, "game: {} vertices ({} triples), {} edges, max priority {}", s.vertices, s.triples, s.edges, s.max_priority)
        .unwrap();
    writeln!(out, "W_E: {we}  W_A: {}", g.num_vertices() - we).unwrap();
    writeln!(out, "winner at v0: {winner:?}").unwrap();
    let sigma = sol.strategy(winner);
    let mut rows = 0;
    for v in 0..g.num_vertices() {
        if g.owner[v] != winner || sol.winner[v] != winner {
            continue;
        }
        if let Some(t) = sigma.choice[v] {
            if rows == max_rows {
                writeln!(out, "  ...").unwrap();
                break;
            }
            writeln!(out, "  {} -> {}", g.names[v], g.names[t]).unwrap();
            rows += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::parity::solve_parity;
    use crate::model::dsl::parse_spec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec(text: &str) -> OneSidedSpec {
        parse_spec(text).unwrap()
    }

    const TOGGLE: &str = "registers r\nlabels x\nstate A adam priority 1 initial\nstate E eve priority 1\n\
                          on A guard \"TOP\" asgn {r} -> E\non E label x -> A\n";

    #[test]
    fn fig1_separates_the_domains() {
        let s = spec(include_str!("../../../../specs/fig1.rsa"));
        for how in [Construction::Split, Construction::Union] {
            let nat = build_parity_game_with(&s, DataDomain::Nat, how);
            nat.game.check().unwrap();
            let sol = solve_parity(&nat.game);
            assert_eq!(sol.winner[nat.game.initial], Player::Eve, "{how:?}");
        }
        let rat = build_parity_game(&s, DataDomain::Rat);
        let sol = solve_parity(&rat.game);
        assert_eq!(sol.winner[rat.game.initial], Player::Adam);
    }

    #[test]
    fn even_everywhere_is_won_by_eve() {
        let s = spec(&TOGGLE.replace("priority 1", "priority 2"));
        for dom in [DataDomain::Nat, DataDomain::Rat] {
            let pg = build_parity_game(&s, dom);
            pg.game.check().unwrap();
            let sol = solve_parity(&pg.game);
            assert_eq!(sol.winner[pg.game.initial], Player::Eve);
        }
    }

    #[test]
    fn odd_everywhere_is_won_by_adam() {
        // Adam can keep every test consistent and never lower a value
        let s = spec(TOGGLE);
        for dom in [DataDomain::Nat, DataDomain::Rat] {
            let pg = build_parity_game(&s, dom);
            let sol = solve_parity(&pg.game);
            assert_eq!(sol.winner[pg.game.initial], Player::Adam);
        }
    }

    #[test]
    fn vertices_remember_their_order() {
        let pg = build_parity_game(&spec(TOGGLE), DataDomain::Nat);
        for u in 0..pg.game.num_vertices() {
            for &v in &pg.game.succ[u] {
                if let Some(c) = pg.constraint_on(u, v) {
                    assert_eq!(Some(&c.start()), pg.order(u));
                    assert_eq!(Some(&c.end()), pg.order(v));
                }
            }
        }
    }

    /// Max priority of every cycle, by brute force over simple cycles of a small graph.
    fn cycle_parities(n: usize, edges: &[(usize, usize)], prio: &[u32]) -> Vec<(Vec<usize>, u32)> {
        let mut out = Vec::new();
        fn dfs(
            start: usize,
            v: usize,
            edges: &[(usize, usize)],
            prio: &[u32],
            used: &mut Vec<usize>,
            seen: &mut Vec<bool>,
            out: &mut Vec<(Vec<usize>, u32)>,
        ) {
            for (e, &(a, b)) in edges.iter().enumerate() {
                if a != v || used.contains(&e) {
                    continue;
                }
                used.push(e);
                if b == start {
                    out.push((used.clone(), used.iter().map(|&x| prio[x]).max().unwrap()));
                } else if b > start && !seen[b] {
                    seen[b] = true;
                    dfs(start, b, edges, prio, used, seen, out);
                    seen[b] = false;
                }
                used.pop();
            }
        }
        for s in 0..n {
            dfs(s, s, edges, prio, &mut Vec::new(), &mut vec![false; n], &mut out);
        }
        out
    }

    #[test]
    fn compression_keeps_cycle_parities() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.gen_range(1..6);
            let m = rng.gen_range(1..10);
            let edges: Vec<(usize, usize)> = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
            let prio: Vec<u32> = (0..m).map(|_| rng.gen_range(1..12)).collect();
            let new = compress_edge_priorities(n, &edges, &prio);
            for (cycle, top) in cycle_parities(n, &edges, &prio) {
                let top2 = cycle.iter().map(|&e| new[e]).max().unwrap();
                assert_eq!(top % 2, top2 % 2);
            }
            assert!(new.iter().all(|&p| p <= *prio.iter().max().unwrap()));
        }
    }
}
