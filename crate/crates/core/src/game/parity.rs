//! Finite parity games (max-parity, even is good for Eve), Zielonka's algorithm,
//! a brute-force oracle and a strategy checker.

use rand::Rng;

use crate::graph::scc;
use crate::model::Player;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParityGame {
    pub owner: Vec<Player>,
    pub priority: Vec<u32>,
    pub succ: Vec<Vec<usize>>,
    pub initial: usize,
    pub names: Vec<String>,
}

impl ParityGame {
    pub fn num_vertices(&self) -> usize {
        self.owner.len()
    }

    pub fn num_edges(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn add_vertex(&mut self, owner: Player, priority: u32, name: String) -> usize {
        self.owner.push(owner);
        self.priority.push(priority);
        self.succ.push(Vec::new());
        self.names.push(name);
        self.owner.len() - 1
    }

    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.num_vertices()];
        for (v, ws) in self.succ.iter().enumerate() {
            for &w in ws {
                pred[w].push(v);
            }
        }
        pred
    }

    pub fn max_priority(&self) -> u32 {
        self.priority.iter().copied().max().unwrap_or(0)
    }

    pub fn check(&self) -> Result<(), String> {
        let n = self.num_vertices();
        if self.priority.len() != n || self.succ.len() != n {
            return Err("length mismatch".into());
        }
        if n > 0 && self.initial >= n {
            return Err("initial vertex out of range".into());
        }
        for (v, ws) in self.succ.iter().enumerate() {
            if ws.is_empty() {
                return Err(format!("vertex {v} has no successor"));
            }
            if ws.iter().any(|&w| w >= n) {
                return Err(format!("vertex {v} has an edge out of range"));
            }
        }
        Ok(())
    }
}

/// A choice of successor for every vertex of one player (`None` elsewhere).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionalStrategy {
    pub owner: Player,
    pub choice: Vec<Option<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub winner: Vec<Player>,
    pub sigma_e: PositionalStrategy,
    pub sigma_a: PositionalStrategy,
}

impl Solution {
    pub fn region(&self, p: Player) -> Vec<bool> {
        self.winner.iter().map(|&w| w == p).collect()
    }

    pub fn strategy(&self, p: Player) -> &PositionalStrategy {
        match p {
            Player::Eve => &self.sigma_e,
            Player::Adam => &self.sigma_a,
        }
    }
}

struct Zielonka<'a> {
    g: &'a ParityGame,
    pred: Vec<Vec<usize>>,
}

/// Per-vertex result of a subgame: winner and the winner's move (if the winner owns the vertex).
type Sub = Vec<Option<(Player, Option<usize>)>>;

impl Zielonka<'_> {
    /// Attractor of `target` for `p` inside `alive`, with attractor moves for `p`.
    fn attractor(&self, alive: &[bool], target: &[usize], p: Player) -> (Vec<bool>, Vec<Option<usize>>) {
        let n = self.g.num_vertices();
        let mut inside = vec![false; n];
        let mut mv = vec![None; n];
        let mut count: Vec<usize> =
            (0..n).map(|v| if alive[v] { self.g.succ[v].iter().filter(|&&w| alive[w]).count() } else { 0 }).collect();
        let mut queue: Vec<usize> = Vec::new();
        for &t in target {
            if !inside[t] {
                inside[t] = true;
                queue.push(t);
            }
        }
        while let Some(w) = queue.pop() {
            for &v in &self.pred[w] {
                if !alive[v] || inside[v] {
                    continue;
                }
                if self.g.owner[v] == p {
                    inside[v] = true;
                    mv[v] = Some(w);
                    queue.push(v);
                } else {
                    count[v] -= 1;
                    if count[v] == 0 {
                        inside[v] = true;
                        queue.push(v);
                    }
                }
            }
        }
        (inside, mv)
    }

    fn solve(&self, alive: &[bool]) -> Sub {
        let g = self.g;
        let n = g.num_vertices();
        let mut out: Sub = vec![None; n];
        let Some(p) = (0..n).filter(|&v| alive[v]).map(|v| g.priority[v]).max() else { return out };
        let alpha = Player::winner_of(p);
        let top: Vec<usize> = (0..n).filter(|&v| alive[v] && g.priority[v] == p).collect();
        let (a, amove) = self.attractor(alive, &top, alpha);
        let rest: Vec<bool> = (0..n).map(|v| alive[v] && !a[v]).collect();
        let sub = self.solve(&rest);
        let opp_wins: Vec<usize> =
            (0..n).filter(|&v| matches!(sub[v], Some((w, _)) if w == alpha.opponent())).collect();
        if opp_wins.is_empty() {
            for v in (0..n).filter(|&v| alive[v]) {
                let mv = if g.owner[v] != alpha {
                    None
                } else if a[v] {
                    amove[v].or_else(|| g.succ[v].iter().copied().find(|&w| alive[w]))
                } else {
                    sub[v].and_then(|(_, m)| m)
                };
                out[v] = Some((alpha, mv));
            }
            return out;
        }
        let beta = alpha.opponent();
        let (b, bmove) = self.attractor(alive, &opp_wins, beta);
        let rest2: Vec<bool> = (0..n).map(|v| alive[v] && !b[v]).collect();
        let sub2 = self.solve(&rest2);
        for v in (0..n).filter(|&v| alive[v]) {
            out[v] = if b[v] {
                let mv = if g.owner[v] != beta {
                    None
                } else if let Some((_, m)) = sub[v].filter(|(w, _)| *w == beta) {
                    m
                } else {
                    bmove[v]
                };
                Some((beta, mv))
            } else {
                sub2[v]
            };
        }
        out
    }
}

/// Zielonka's recursive algorithm with positional strategies for both players.
pub fn solve_parity(g: &ParityGame) -> Solution {
    let n = g.num_vertices();
    let z = Zielonka { g, pred: g.predecessors() };
    // deep recursion on large games
    let sub = std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(512 << 20)
            .spawn_scoped(s, || z.solve(&vec![true; n]))
            .expect("spawn solver thread")
            .join()
            .expect("solver thread panicked")
    });
    let mut winner = Vec::with_capacity(n);
    let mut sigma_e = PositionalStrategy { owner: Player::Eve, choice: vec![None; n] };
    let mut sigma_a = PositionalStrategy { owner: Player::Adam, choice: vec![None; n] };
    for v in 0..n {
        let (w, mv) = sub[v].expect("every vertex solved");
        winner.push(w);
        let sigma = if g.owner[v] == Player::Eve { &mut sigma_e } else { &mut sigma_a };
        // losing vertices get their first edge
        sigma.choice[v] = Some(if w == g.owner[v] { mv.expect("winner move") } else { g.succ[v][0] });
    }
    Solution { winner, sigma_e, sigma_a }
}

/// Whether `sigma` wins for `owner` from every vertex of `region`:
/// the region is closed under the opponent's moves and `sigma`, and every cycle of the
/// restricted graph has a maximal priority of the owner's parity.
pub fn verify_strategy(g: &ParityGame, sigma: &PositionalStrategy, owner: Player, region: &[bool]) -> bool {
    let n = g.num_vertices();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in (0..n).filter(|&v| region[v]) {
        if g.owner[v] == owner {
            let Some(w) = sigma.choice[v] else { return false };
            if !g.succ[v].contains(&w) || !region[w] {
                return false;
            }
            succ[v].push(w);
        } else {
            if g.succ[v].iter().any(|&w| !region[w]) {
                return false;
            }
            succ[v] = g.succ[v].clone();
        }
    }
    let mut priorities: Vec<u32> = (0..n).filter(|&v| region[v]).map(|v| g.priority[v]).collect();
    priorities.sort();
    priorities.dedup();
    for p in priorities.into_iter().filter(|&p| Player::winner_of(p) != owner) {
        let alive = |v: usize| region[v] && g.priority[v] <= p;
        let f = |u: usize, out: &mut Vec<usize>| {
            if alive(u) {
                out.extend(succ[u].iter().copied().filter(|&w| alive(w)));
            }
        };
        let (comp, ncomp) = scc(n, &f);
        let mut size = vec![0usize; ncomp];
        for v in 0..n {
            size[comp[v]] += 1;
        }
        for v in (0..n).filter(|&v| alive(v) && g.priority[v] == p) {
            if size[comp[v]] > 1 || succ[v].contains(&v) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("game too large for exhaustive search ({0} strategy pairs)")]
pub struct SizeGuard(pub u128);

pub const BRUTE_FORCE_LIMIT: u128 = 20_000_000;

fn strategies(g: &ParityGame, p: Player) -> Vec<Vec<usize>> {
    // mixed-radix enumeration of successor indices for p's vertices
    let verts: Vec<usize> = (0..g.num_vertices()).filter(|&v| g.owner[v] == p).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; verts.len()];
    loop {
        let mut s = vec![usize::MAX; g.num_vertices()];
        for (i, &v) in verts.iter().enumerate() {
            s[v] = g.succ[v][idx[i]];
        }
        out.push(s);
        let mut i = 0;
        loop {
            if i == verts.len() {
                return out;
            }
            idx[i] += 1;
            if idx[i] < g.succ[verts[i]].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Winner of every vertex by enumerating all pairs of positional strategies.
pub fn brute_force_solve(g: &ParityGame) -> Result<Vec<Player>, SizeGuard> {
    let n = g.num_vertices();
    let pairs: u128 = (0..n).map(|v| g.succ[v].len() as u128).product();
    if pairs > BRUTE_FORCE_LIMIT {
        return Err(SizeGuard(pairs));
    }
    let se = strategies(g, Player::Eve);
    let sa = strategies(g, Player::Adam);
    let mut eve_wins = vec![false; n];
    for e in &se {
        let mut wins = vec![true; n];
        for a in &sa {
            let next = |v: usize| if g.owner[v] == Player::Eve { e[v] } else { a[v] };
            for v0 in 0..n {
                if !wins[v0] {
                    continue;
                }
                // play from v0 until a vertex repeats, then read the cycle
                let mut pos = vec![usize::MAX; n];
                let mut path = Vec::new();
                let mut v = v0;
                while pos[v] == usize::MAX {
                    pos[v] = path.len();
                    path.push(v);
                    v = next(v);
                }
                let top = path[pos[v]..].iter().map(|&u| g.priority[u]).max().unwrap();
                if top % 2 == 1 {
                    wins[v0] = false;
                }
            }
        }
        for v in 0..n {
            eve_wins[v] |= wins[v];
        }
    }
    Ok(eve_wins.into_iter().map(|w| if w { Player::Eve } else { Player::Adam }).collect())
}

/// A random game with `n` vertices, priorities in `1..=max_priority` and out-degree 1 to 3.
pub fn random_game<R: Rng>(rng: &mut R, n: usize, max_priority: u32) -> ParityGame {
    let mut g = ParityGame::default();
    for v in 0..n {
        let owner = if rng.gen_bool(0.5) { Player::Eve } else { Player::Adam };
        g.add_vertex(owner, rng.gen_range(1..=max_priority), format!("v{v}"));
    }
    for v in 0..n {
        let d = rng.gen_range(1..=3.min(n));
        while g.succ[v].len() < d {
            let w = rng.gen_range(0..n);
            if !g.succ[v].contains(&w) {
                g.succ[v].push(w);
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn single(owner: Player, p: u32) -> ParityGame {
        let mut g = ParityGame::default();
        g.add_vertex(owner, p, "v".into());
        g.succ[0].push(0);
        g
    }

    #[test]
    fn self_loops() {
        let s = solve_parity(&single(Player::Eve, 2));
        assert_eq!(s.winner, vec![Player::Eve]);
        let s = solve_parity(&single(Player::Eve, 1));
        assert_eq!(s.winner, vec![Player::Adam]);
    }

    #[test]
    fn eve_picks_the_even_loop() {
        // v0 (Eve) -> v1 (prio 1 loop) | v2 (prio 2 loop)
        let mut g = ParityGame::default();
        g.add_vertex(Player::Eve, 1, "a".into());
        g.add_vertex(Player::Adam, 1, "b".into());
        g.add_vertex(Player::Adam, 2, "c".into());
        g.succ[0] = vec![1, 2];
        g.succ[1] = vec![1];
        g.succ[2] = vec![2];
        let s = solve_parity(&g);
        assert_eq!(s.winner, vec![Player::Eve, Player::Adam, Player::Eve]);
        assert_eq!(s.sigma_e.choice[0], Some(2));
        assert!(verify_strategy(&g, &s.sigma_e, Player::Eve, &s.region(Player::Eve)));
        let mut bad = s.sigma_e.clone();
        bad.choice[0] = Some(1);
        assert!(!verify_strategy(&g, &bad, Player::Eve, &s.region(Player::Eve)));
    }

    #[test]
    fn random_games_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.gen_range(1..=7);
            let g = random_game(&mut rng, n, 4);
            let s = solve_parity(&g);
            assert_eq!(s.winner, brute_force_solve(&g).unwrap());
            assert!(verify_strategy(&g, &s.sigma_e, Player::Eve, &s.region(Player::Eve)));
            assert!(verify_strategy(&g, &s.sigma_a, Player::Adam, &s.region(Player::Adam)));
        }
    }
}
