//! Synthesis of register transducers for one-sided register automata games over
//! `(ℕ, ≤)` and `(ℚ, ≤)`, with the constraint-sequence satisfiability engine behind it.

pub mod constraints;
pub mod bench;
pub mod game;
pub mod graph;
pub mod model;
pub mod omega;
pub mod oracle;
pub mod synth;
