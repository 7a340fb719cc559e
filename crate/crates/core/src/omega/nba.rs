//! Nondeterministic Büchi automata with state-based acceptance.

use std::fmt;
use std::sync::Arc;

use super::LassoWord;
use crate::graph::scc;

pub type NbaDelta<L> = Arc<dyn Fn(usize, &L) -> Vec<usize> + Send + Sync>;

#[derive(Clone)]
pub struct Nba<L> {
    pub names: Vec<String>,
    pub initial: Vec<usize>,
    pub accepting: Vec<bool>,
    delta: NbaDelta<L>,
}

impl<L> fmt::Debug for Nba<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Nba")
            .field("names", &self.names)
            .field("initial", &self.initial)
            .field("accepting", &self.accepting)
            .finish()
    }
}

impl<L: 'static> Nba<L> {
    pub fn new(
        names: Vec<String>,
        initial: Vec<usize>,
        accepting: Vec<bool>,
        delta: impl Fn(usize, &L) -> Vec<usize> + Send + Sync + 'static,
    ) -> Self {
        assert_eq!(names.len(), accepting.len());
        assert!(initial.iter().all(|&q| q < names.len()));
        Nba { names, initial, accepting, delta: Arc::new(delta) }
    }

    /// Disjoint union; states of `parts[i]` are shifted by the sizes of the earlier parts.
    pub fn union(parts: &[Nba<L>]) -> Nba<L> {
        let mut offsets = Vec::with_capacity(parts.len());
        let mut names = Vec::new();
        let mut initial = Vec::new();
        let mut accepting = Vec::new();
        for (i, p) in parts.iter().enumerate() {
            let off = names.len();
            offsets.push(off);
            names.extend(p.names.iter().map(|s| format!("{i}:{s}")));
            initial.extend(p.initial.iter().map(|q| q + off));
            accepting.extend(p.accepting.iter().copied());
        }
        let deltas: Vec<(usize, usize, NbaDelta<L>)> =
            parts.iter().zip(&offsets).map(|(p, &off)| (off, p.num_states(), p.delta.clone())).collect();
        Nba::new(names, initial, accepting, move |q, a| {
            let &(off, _, ref d) = deltas.iter().find(|(off, n, _)| q >= *off && q < off + n).expect("state in range");
            d(q - off, a).into_iter().map(|t| t + off).collect()
        })
    }
}

impl<L> Nba<L> {
    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn succ(&self, q: usize, a: &L) -> Vec<usize> {
        (self.delta)(q, a)
    }
}

/// Accepting-cycle search in the product with the lasso's position graph.
pub fn nba_lasso_member<L: Clone>(a: &Nba<L>, w: &LassoWord<L>) -> bool {
    let n = a.num_states();
    let len = w.len();
    let id = |q: usize, p: usize| p * n + q;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n * len];
    let mut reach = vec![false; n * len];
    let mut stack: Vec<usize> = Vec::new();
    for &q in &a.initial {
        if !reach[id(q, 0)] {
            reach[id(q, 0)] = true;
            stack.push(id(q, 0));
        }
    }
    while let Some(x) = stack.pop() {
        let (p, q) = (x / n, x % n);
        let p2 = w.next(p);
        for t in a.succ(q, w.letter(p)) {
            let y = id(t, p2);
            adj[x].push(y);
            if !reach[y] {
                reach[y] = true;
                stack.push(y);
            }
        }
    }
    let (comp, ncomp) = scc(n * len, &|x, out: &mut Vec<usize>| out.extend(adj[x].iter().copied()));
    // a nontrivial component holding an accepting state
    let mut size = vec![0usize; ncomp];
    for x in 0..n * len {
        if reach[x] {
            size[comp[x]] += 1;
        }
    }
    (0..n * len).any(|x| {
        reach[x] && a.accepting[x % n] && (size[comp[x]] > 1 || adj[x].contains(&x))
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// "Infinitely many `x`" over `x = 0`, `y = 1`.
    pub fn inf_x() -> Nba<u8> {
        Nba::new(vec!["a".into(), "b".into()], vec![0], vec![false, true], |_, &c| vec![if c == 0 { 1 } else { 0 }])
    }

    /// "Finitely many `x`": guess the last `x`.
    pub fn fin_x() -> Nba<u8> {
        Nba::new(vec!["any".into(), "noX".into()], vec![0], vec![false, true], |q, &c| match (q, c) {
            (0, _) => {
                if c == 0 {
                    vec![0]
                } else {
                    vec![0, 1]
                }
            }
            (_, 1) => vec![1],
            _ => vec![],
        })
    }

    #[test]
    fn inf_x_membership() {
        assert!(nba_lasso_member(&inf_x(), &LassoWord::new(vec![], vec![0])));
        assert!(!nba_lasso_member(&inf_x(), &LassoWord::new(vec![0], vec![1])));
        assert!(nba_lasso_member(&inf_x(), &LassoWord::new(vec![1], vec![1, 1, 0])));
    }

    #[test]
    fn fin_x_membership() {
        assert!(!nba_lasso_member(&fin_x(), &LassoWord::new(vec![], vec![0])));
        assert!(nba_lasso_member(&fin_x(), &LassoWord::new(vec![0, 0], vec![1])));
        assert!(!nba_lasso_member(&fin_x(), &LassoWord::new(vec![1], vec![1, 0])));
    }

    #[test]
    fn union_is_disjunction() {
        let u = Nba::union(&[inf_x(), fin_x()]);
        assert_eq!(u.num_states(), 4);
        for w in [
            LassoWord::new(vec![], vec![0u8]),
            LassoWord::new(vec![0], vec![1]),
            LassoWord::new(vec![], vec![0, 1]),
        ] {
            assert!(nba_lasso_member(&u, &w));
        }
    }
}
