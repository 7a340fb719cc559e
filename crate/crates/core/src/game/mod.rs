//! Feasibility arenas, product parity games and their solution.

pub mod arena;
pub mod parity;
pub mod product;

pub use arena::{build_arena, Arena, ArenaVertex};
pub use parity::{brute_force_solve, solve_parity, verify_strategy, ParityGame, PositionalStrategy, Solution};
pub use product::{
    build_parity_game, build_parity_game_with, compress_edge_priorities, losing_word_automata, solve_report, Construction,
    IdDpa, ProductGame, ProductNode, ProductStats, ProductVertex, BROKEN,
};
