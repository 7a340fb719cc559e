//! Büchi to parity determinization with compact Safra trees.
//!
//! Trees carry names `1..=m` for their `m` nodes. A step applies the
//! transition to every label, spawns a youngest child holding the accepting
//! part of each label, removes states already owned by an older sibling,
//! drops empty nodes, and collapses every node whose children cover its label
//! (the node is then marked). With `f` the least removed name and `e` the least
//! marked name, the min-parity priority is `2e` if `e < f`, `2f - 1` if some
//! node was removed, and the neutral `4n + 1` otherwise. Temporary names of
//! spawned nodes run from `n + 1`, so `f <= 2n`. Names are compacted
//! afterwards, keeping their order. Priorities are reported in max-parity form
//! as `4n + 2 - p`.

use super::nba::Nba;
use super::Dpa;

type Bits = Vec<u64>;

fn bits_empty(n: usize) -> Bits {
    vec![0; n.div_ceil(64).max(1)]
}

fn bits_is_empty(b: &Bits) -> bool {
    b.iter().all(|&w| w == 0)
}

fn bits_iter(b: &Bits) -> impl Iterator<Item = usize> + '_ {
    b.iter().enumerate().flat_map(|(i, &w)| (0..64).filter(move |j| w >> j & 1 == 1).map(move |j| i * 64 + j))
}

/// A node in preorder; children appear oldest first. `parent` indexes the vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SafraNode {
    pub name: u16,
    pub parent: Option<u16>,
    pub label: Bits,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SafraTree {
    pub nodes: Vec<SafraNode>,
}

impl SafraTree {
    pub fn render<L>(&self, nba: &Nba<L>) -> String {
        let mut out = String::new();
        for node in &self.nodes {
            let mut depth = 0;
            let mut p = node.parent;
            while let Some(i) = p {
                depth += 1;
                p = self.nodes[i as usize].parent;
            }
            let states: Vec<&str> = bits_iter(&node.label).map(|q| nba.names[q].as_str()).collect();
            out.push_str(&format!("{}{}: {{{}}}\n", "  ".repeat(depth), node.name, states.join(", ")));
        }
        out
    }
}

pub struct SafraDpa<L> {
    nba: Nba<L>,
    accepting: Bits,
}

pub fn determinize<L: 'static>(nba: Nba<L>) -> SafraDpa<L> {
    let n = nba.num_states();
    let mut accepting = bits_empty(n);
    for q in (0..n).filter(|&q| nba.accepting[q]) {
        accepting[q / 64] |= 1 << (q % 64);
    }
    SafraDpa { nba, accepting }
}

struct Work {
    name: usize,
    label: Bits,
    children: Vec<usize>,
}

impl<L> SafraDpa<L> {
    pub fn nba(&self) -> &Nba<L> {
        &self.nba
    }

    fn n(&self) -> usize {
        self.nba.num_states()
    }

    fn post(&self, label: &Bits, a: &L) -> Bits {
        let mut out = bits_empty(self.n());
        for q in bits_iter(label) {
            for t in self.nba.succ(q, a) {
                out[t / 64] |= 1 << (t % 64);
            }
        }
        out
    }

    fn horizontal(w: &mut [Work], i: usize, mask: &Bits) {
        for (x, m) in w[i].label.iter_mut().zip(mask) {
            *x &= m;
        }
        let mut seen = bits_empty(mask.len() * 64);
        for c in w[i].children.clone() {
            let allowed: Bits = w[i].label.iter().zip(&seen).map(|(l, s)| l & !s).collect();
            Self::horizontal(w, c, &allowed);
            for (s, l) in seen.iter_mut().zip(&w[c].label) {
                *s |= l;
            }
        }
    }

    fn collect_names(w: &[Work], i: usize, out: &mut Vec<usize>) {
        out.push(w[i].name);
        for &c in &w[i].children {
            Self::collect_names(w, c, out);
        }
    }

    fn prune_empty(w: &mut [Work], i: usize, removed: &mut Vec<usize>) {
        let kids = std::mem::take(&mut w[i].children);
        let mut keep = Vec::new();
        for c in kids {
            if bits_is_empty(&w[c].label) {
                Self::collect_names(w, c, removed);
            } else {
                Self::prune_empty(w, c, removed);
                keep.push(c);
            }
        }
        w[i].children = keep;
    }

    fn vertical(w: &mut [Work], i: usize, removed: &mut Vec<usize>, marked: &mut Vec<usize>) {
        if w[i].children.is_empty() {
            return;
        }
        let mut union = bits_empty(w[i].label.len() * 64);
        for &c in &w[i].children {
            for (u, l) in union.iter_mut().zip(&w[c].label) {
                *u |= l;
            }
        }
        if union == w[i].label {
            for c in std::mem::take(&mut w[i].children) {
                Self::collect_names(w, c, removed);
            }
            marked.push(w[i].name);
        } else {
            for c in w[i].children.clone() {
                Self::vertical(w, c, removed, marked);
            }
        }
    }

    fn linearize(w: &[Work], i: usize, parent: Option<u16>, rename: &dyn Fn(usize) -> u16, out: &mut Vec<SafraNode>) {
        let me = out.len() as u16;
        out.push(SafraNode { name: rename(w[i].name), parent, label: w[i].label.clone() });
        for &c in &w[i].children {
            Self::linearize(w, c, Some(me), rename, out);
        }
    }
}

impl<L> Dpa<L> for SafraDpa<L> {
    type State = SafraTree;

    fn initial(&self) -> SafraTree {
        let mut label = bits_empty(self.n());
        for &q in &self.nba.initial {
            label[q / 64] |= 1 << (q % 64);
        }
        if bits_is_empty(&label) {
            return SafraTree { nodes: vec![] };
        }
        SafraTree { nodes: vec![SafraNode { name: 1, parent: None, label }] }
    }

    fn step(&self, t: &SafraTree, a: &L) -> (SafraTree, u32) {
        let n = self.n();
        let neutral = 4 * n as u32 + 1;
        if t.nodes.is_empty() {
            return (t.clone(), 4 * n as u32 + 2 - neutral);
        }
        let mut w: Vec<Work> = t
            .nodes
            .iter()
            .map(|x| Work { name: x.name as usize, label: self.post(&x.label, a), children: Vec::new() })
            .collect();
        for (i, x) in t.nodes.iter().enumerate() {
            if let Some(p) = x.parent {
                w[p as usize].children.push(i);
            }
        }
        // spawn
        let old = w.len();
        for i in 0..old {
            let acc: Bits = w[i].label.iter().zip(&self.accepting).map(|(l, f)| l & f).collect();
            if !bits_is_empty(&acc) {
                let name = n + 1 + (w.len() - old);
                w.push(Work { name, label: acc, children: Vec::new() });
                let c = w.len() - 1;
                w[i].children.push(c);
            }
        }
        let full: Bits = vec![u64::MAX; w[0].label.len()];
        Self::horizontal(&mut w, 0, &full);
        let mut removed = Vec::new();
        let mut marked = Vec::new();
        if bits_is_empty(&w[0].label) {
            Self::collect_names(&w, 0, &mut removed);
            let f = *removed.iter().min().unwrap() as u32;
            return (SafraTree { nodes: vec![] }, 4 * n as u32 + 2 - (2 * f - 1));
        }
        Self::prune_empty(&mut w, 0, &mut removed);
        Self::vertical(&mut w, 0, &mut removed, &mut marked);
        let f = removed.iter().min().map(|&x| x as u32);
        let e = marked.iter().min().map(|&x| x as u32);
        let p_min = match (e, f) {
            (Some(e), Some(f)) if e < f => 2 * e,
            (Some(e), None) => 2 * e,
            (_, Some(f)) => 2 * f - 1,
            (None, None) => neutral,
        };
        let mut live = Vec::new();
        Self::collect_names(&w, 0, &mut live);
        live.sort_unstable();
        let rename = |x: usize| (live.binary_search(&x).unwrap() + 1) as u16;
        let mut nodes = Vec::with_capacity(live.len());
        Self::linearize(&w, 0, None, &rename, &mut nodes);
        (SafraTree { nodes }, 4 * n as u32 + 2 - p_min)
    }

    fn max_priority(&self) -> u32 {
        4 * self.n() as u32 + 1
    }
}

#[cfg(test)]
mod tests {
    use super::super::nba::tests::{fin_x, inf_x};
    use super::super::nba::{nba_lasso_member, Nba};
    use super::super::{dpa_lasso_member, LassoWord, Memo};
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_word(rng: &mut ChaCha8Rng, sigma: u8) -> LassoWord<u8> {
        let u = (0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..sigma)).collect();
        let v = (0..rng.gen_range(1..5)).map(|_| rng.gen_range(0..sigma)).collect();
        LassoWord::new(u, v)
    }

    fn agree(a: &Nba<u8>, words: usize, seed: u64) {
        let d = Memo::new(determinize(a.clone()));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..words {
            let w = random_word(&mut rng, 2);
            assert_eq!(dpa_lasso_member(&d, &w), nba_lasso_member(a, &w), "{w:?}");
        }
    }

    #[test]
    fn fin_x_determinized() {
        agree(&fin_x(), 200, 1);
    }

    #[test]
    fn deterministic_input() {
        agree(&inf_x(), 200, 2);
    }

    #[test]
    fn random_small_nbas() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for round in 0..60 {
            let n = rng.gen_range(1..5);
            let table: Vec<Vec<Vec<usize>>> = (0..n)
                .map(|_| (0..2).map(|_| (0..n).filter(|_| rng.gen_bool(0.4)).collect()).collect())
                .collect();
            let acc: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.4)).collect();
            let a = Nba::new((0..n).map(|q| format!("q{q}")).collect(), vec![0], acc, move |q, &c| {
                table[q][c as usize].clone()
            });
            agree(&a, 50, 100 + round);
        }
    }

    #[test]
    fn empty_initial_rejects() {
        let a: Nba<u8> = Nba::new(vec!["q".into()], vec![], vec![true], |_, _| vec![0]);
        assert!(!dpa_lasso_member(&determinize(a), &LassoWord::new(vec![], vec![0])));
    }
}
