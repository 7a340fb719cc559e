//! Small directed-graph helpers shared by the chain, automata and game code.

/// Strongly connected components (iterative Tarjan).
///
/// Returns `comp[v]` and the number of components. Component ids are in
/// reverse topological order: every edge `u -> v` has `comp[u] >= comp[v]`.
pub fn scc(n: usize, succ: &dyn Fn(usize, &mut Vec<usize>)) -> (Vec<usize>, usize) {
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut ncomp = 0;
    let mut buf = Vec::new();
    // call stack frames: (vertex, successors, position)
    let mut frames: Vec<(usize, Vec<usize>, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        buf.clear();
        succ(root, &mut buf);
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        frames.push((root, buf.clone(), 0));
        while let Some(frame) = frames.last_mut() {
            let v = frame.0;
            if frame.2 < frame.1.len() {
                let w = frame.1[frame.2];
                frame.2 += 1;
                if index[w] == UNSEEN {
                    buf.clear();
                    succ(w, &mut buf);
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, buf.clone(), 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(parent) = frames.last() {
                    let p = parent.0;
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    (comp, ncomp)
}

/// Weighted edge list graph with nonnegative small weights.
#[derive(Clone, Debug, Default)]
pub struct WGraph {
    pub succ: Vec<Vec<(usize, u32)>>,
}

impl WGraph {
    pub fn new(n: usize) -> Self {
        WGraph { succ: vec![Vec::new(); n] }
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn add(&mut self, u: usize, v: usize, w: u32) {
        self.succ[u].push((v, w));
    }

    pub fn reversed(&self) -> WGraph {
        let mut g = WGraph::new(self.len());
        for (u, es) in self.succ.iter().enumerate() {
            for &(v, w) in es {
                g.add(v, u, w);
            }
        }
        g
    }

    /// Whether some cycle carries positive weight.
    pub fn has_positive_cycle(&self, alive: &dyn Fn(usize) -> bool) -> bool {
        let (comp, _) = scc(self.len(), &|u, out: &mut Vec<usize>| {
            if alive(u) {
                out.extend(self.succ[u].iter().filter(|e| alive(e.0)).map(|e| e.0));
            }
        });
        (0..self.len()).filter(|&u| alive(u)).any(|u| {
            self.succ[u].iter().any(|&(v, w)| w > 0 && alive(v) && comp[v] == comp[u])
        })
    }

    /// Longest path weights starting from any of `sources`, restricted to `alive`
    /// vertices. `None` marks unreachable vertices. Panics on positive cycles.
    pub fn longest_from(&self, sources: &[usize], alive: &dyn Fn(usize) -> bool) -> Vec<Option<u32>> {
        let n = self.len();
        let (comp, ncomp) = scc(n, &|u, out: &mut Vec<usize>| {
            if alive(u) {
                out.extend(self.succ[u].iter().filter(|e| alive(e.0)).map(|e| e.0));
            }
        });
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
        for u in 0..n {
            if alive(u) {
                members[comp[u]].push(u);
            }
        }
        let mut dist: Vec<Option<u32>> = vec![None; n];
        for &s in sources {
            if alive(s) {
                dist[s] = Some(0);
            }
        }
        // higher component ids come first topologically
        for c in (0..ncomp).rev() {
            let ms = &members[c];
            // inside a component every edge has weight 0; spread the max
            let best = ms.iter().filter_map(|&u| dist[u]).max();
            if let Some(b) = best {
                for &u in ms {
                    assert!(
                        self.succ[u].iter().all(|&(v, w)| !(alive(v) && comp[v] == c && w > 0)),
                        "positive cycle"
                    );
                    dist[u] = Some(b);
                }
            }
            for &u in ms {
                if let Some(d) = dist[u] {
                    for &(v, w) in &self.succ[u] {
                        if alive(v) && comp[v] != c {
                            let nd = d + w;
                            if dist[v].map_or(true, |x| x < nd) {
                                dist[v] = Some(nd);
                            }
                        }
                    }
                }
            }
        }
        dist
    }
}
