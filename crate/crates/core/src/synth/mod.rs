//! From solved games to executable artifacts.

pub mod adam;
pub mod data;
pub mod extract;
pub mod ido;
pub mod simulate;

use std::sync::Arc;
use std::time::{Duration, Instant};

pub use adam::{
    adam_strategy_graph, duel_memoryless, estimate_adam_bound, memoryless_eves, AdamDataStrategy, AdamMove, AdamNode,
    AdamStrategyGraph, Datum, MemorylessDuel, NotUnrealizable,
};
pub use data::{
    adversarial_continuation, check_moment, verify_assignment_invariant, AdversaryOutcome, AssignError, InsertRule,
    InvariantViolation, NatAssigner, RatAssigner,
};
pub use extract::{extract_eve_transducer, NotRealizable};
pub use ido::{reduce_ido_to_one_sided, IdoSpec};
pub use simulate::{simulate, DataSource, RandomData, Scripted, Trace, TraceStep};

use crate::game::{build_parity_game, solve_parity, ProductGame, Solution};
use crate::model::{DataDomain, OneSidedSpec, RegisterTransducer};

#[derive(Clone, Debug)]
pub enum Verdict {
    Realizable(RegisterTransducer),
    Unrealizable(AdamDataStrategy),
}

impl Verdict {
    pub fn is_realizable(&self) -> bool {
        matches!(self, Verdict::Realizable(_))
    }
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    pub game: ProductGame,
    pub solution: Solution,
    pub verdict: Verdict,
    pub build_time: Duration,
    pub solve_time: Duration,
}

/// Build the game, solve it and materialize the winner's side.
pub fn synthesize(spec: &OneSidedSpec, domain: DataDomain) -> Synthesis {
    let t = Instant::now();
    let game = build_parity_game(spec, domain);
    let build_time = t.elapsed();
    let t = Instant::now();
    let solution = solve_parity(&game.game);
    let solve_time = t.elapsed();
    let verdict = match extract_eve_transducer(&game, &solution, spec) {
        Ok(tr) => Verdict::Realizable(tr),
        Err(NotRealizable) => {
            let g = adam_strategy_graph(&game, &solution.winner, &solution.sigma_a).expect("determined game");
            Verdict::Unrealizable(AdamDataStrategy::new(Arc::new(g), domain))
        }
    };
    Synthesis { game, solution, verdict, build_time, solve_time }
}
