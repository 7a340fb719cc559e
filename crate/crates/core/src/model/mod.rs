//! Registers, tests, constraints, specifications and transducers.

pub mod basic;
pub mod dot;
pub mod dsl;
pub mod gen;
pub mod order;
pub mod spec;
pub mod transducer;

pub use basic::*;
pub use order::{adjacent_consistent, Constraint, StateConstraint, Term};
pub use spec::{OneSidedSpec, State};
pub use transducer::{RegisterTransducer, Step};
