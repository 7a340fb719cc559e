//! Boolean combinations of parity conditions through index appearance records.
//!
//! A max-parity condition with priorities up to `m` is the Rabin chain of pairs
//! `e = 2, 4, ..`: pair `e` is hit when `e` is emitted and spoiled by anything
//! above `e`. The disjunction of several such conditions is a Rabin condition
//! over all their pairs. The record is a permutation of the pairs: spoiled pairs
//! move to the front. With `b` the largest spoiled position and `g` the largest
//! hit position (1-based, before moving), the emitted priority is the maximum of
//! `2b + 1`, `2g` and `1`.

use super::Dpa;

#[derive(Clone, Debug)]
pub struct Iar {
    /// `(component, e)` per pair index.
    pub pairs: Vec<(usize, u32)>,
}

impl Iar {
    /// One component per entry of `max_priorities`.
    pub fn new(max_priorities: &[u32]) -> Self {
        let pairs = max_priorities
            .iter()
            .enumerate()
            .flat_map(|(c, &m)| (1..=m / 2).map(move |h| (c, 2 * h)))
            .collect::<Vec<_>>();
        assert!(pairs.len() <= 256, "too many priorities for a byte-sized record");
        Iar { pairs }
    }

    pub fn initial(&self) -> Vec<u8> {
        (0..self.pairs.len() as u8).collect()
    }

    pub fn max_priority(&self) -> u32 {
        2 * self.pairs.len() as u32 + 1
    }

    /// Feed one step; `events[c]` is the priority emitted by component `c`, if any.
    pub fn update(&self, rec: &[u8], events: &[Option<u32>]) -> (Vec<u8>, u32) {
        let mut b = 0;
        let mut g = 0;
        let mut spoiled = vec![false; rec.len()];
        for (pos, &i) in rec.iter().enumerate() {
            let (c, e) = self.pairs[i as usize];
            match events[c] {
                Some(p) if p > e => {
                    spoiled[pos] = true;
                    b = pos + 1;
                }
                Some(p) if p == e => g = pos + 1,
                _ => {}
            }
        }
        let prio = (2 * b as u32 + 1).max(2 * g as u32).max(1);
        let mut next: Vec<u8> = rec.iter().zip(&spoiled).filter(|(_, &s)| s).map(|(&i, _)| i).collect();
        next.extend(rec.iter().zip(&spoiled).filter(|(_, &s)| !s).map(|(&i, _)| i));
        (next, prio)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Conjunction,
    Disjunction,
}

/// Product of two parity automata accepting the intersection or union.
pub struct IarProduct<A, B> {
    pub a: A,
    pub b: B,
    pub mode: Mode,
    iar: Iar,
}

/// Conjunction as the dual of a disjunction: complement inputs, combine, complement the result.
pub fn product_dpa<L, A: Dpa<L>, B: Dpa<L>>(a: A, b: B, mode: Mode) -> IarProduct<A, B> {
    let shift = u32::from(mode == Mode::Conjunction);
    let iar = Iar::new(&[a.max_priority() + shift, b.max_priority() + shift]);
    IarProduct { a, b, mode, iar }
}

pub fn conjunction<L, A: Dpa<L>, B: Dpa<L>>(a: A, b: B) -> IarProduct<A, B> {
    product_dpa(a, b, Mode::Conjunction)
}

pub fn disjunction_to_parity<L, A: Dpa<L>, B: Dpa<L>>(a: A, b: B) -> IarProduct<A, B> {
    product_dpa(a, b, Mode::Disjunction)
}

impl<A, B> IarProduct<A, B> {
    pub fn iar(&self) -> &Iar {
        &self.iar
    }
}

impl<L, A: Dpa<L>, B: Dpa<L>> Dpa<L> for IarProduct<A, B> {
    type State = (A::State, B::State, Vec<u8>);

    fn initial(&self) -> Self::State {
        (self.a.initial(), self.b.initial(), self.iar.initial())
    }

    fn step(&self, (qa, qb, rec): &Self::State, x: &L) -> (Self::State, u32) {
        let shift = u32::from(self.mode == Mode::Conjunction);
        let (qa2, pa) = self.a.step(qa, x);
        let (qb2, pb) = self.b.step(qb, x);
        let (rec2, p) = self.iar.update(rec, &[Some(pa + shift), Some(pb + shift)]);
        ((qa2, qb2, rec2), p + shift)
    }

    fn max_priority(&self) -> u32 {
        self.iar.max_priority() + u32::from(self.mode == Mode::Conjunction)
    }
}
