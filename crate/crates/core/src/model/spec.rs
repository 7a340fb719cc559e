use super::basic::{num_tests, Assignment, Player, Registers, Test};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    pub name: String,
    pub player: Player,
    pub priority: u32,
}

/// Deterministic one-sided register automaton.
///
/// Adam states read a datum (through its test) and perform an assignment;
/// Eve states read a label. Registers start at 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneSidedSpec {
    pub registers: Registers,
    pub labels: Vec<String>,
    pub states: Vec<State>,
    pub initial: usize,
    /// For Adam states: one entry per test (canonical test order). Empty for Eve states.
    pub delta_a: Vec<Vec<(Assignment, usize)>>,
    /// For Eve states: one successor per label. Empty for Adam states.
    pub delta_e: Vec<Vec<usize>>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SpecCheckError {
    #[error("initial state `{0}` must belong to Adam")]
    InitialNotAdam(String),
    #[error("state `{0}`: transition table has wrong size")]
    WrongArity(String),
    #[error("state `{0}`: transition leads to a state of the same player")]
    NotAlternating(String),
    #[error("state `{0}`: priority must be at least 1")]
    BadPriority(String),
    #[error("assignment mentions an unknown register")]
    BadAssignment,
}

impl OneSidedSpec {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s.name == name)
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }

    pub fn player(&self, q: usize) -> Player {
        self.states[q].player
    }

    pub fn priority(&self, q: usize) -> u32 {
        self.states[q].priority
    }

    pub fn max_priority(&self) -> u32 {
        self.states.iter().map(|s| s.priority).max().unwrap_or(1)
    }

    pub fn adam_step(&self, q: usize, t: &Test) -> (Assignment, usize) {
        self.delta_a[q][t.index()]
    }

    pub fn eve_step(&self, q: usize, label: usize) -> usize {
        self.delta_e[q][label]
    }

    pub fn check(&self) -> Result<(), SpecCheckError> {
        let nt = num_tests(self.registers.len());
        let full = if self.registers.len() >= 32 { u32::MAX } else { (1u32 << self.registers.len()) - 1 };
        if self.states[self.initial].player != Player::Adam {
            return Err(SpecCheckError::InitialNotAdam(self.states[self.initial].name.clone()));
        }
        for (q, s) in self.states.iter().enumerate() {
            if s.priority == 0 {
                return Err(SpecCheckError::BadPriority(s.name.clone()));
            }
            match s.player {
                Player::Adam => {
                    if self.delta_a[q].len() != nt || !self.delta_e[q].is_empty() {
                        return Err(SpecCheckError::WrongArity(s.name.clone()));
                    }
                    for &(a, t) in &self.delta_a[q] {
                        if a.0 & !full != 0 {
                            return Err(SpecCheckError::BadAssignment);
                        }
                        if self.states[t].player != Player::Eve {
                            return Err(SpecCheckError::NotAlternating(s.name.clone()));
                        }
                    }
                }
                Player::Eve => {
                    if self.delta_e[q].len() != self.labels.len() || !self.delta_a[q].is_empty() {
                        return Err(SpecCheckError::WrongArity(s.name.clone()));
                    }
                    if self.delta_e[q].iter().any(|&t| self.states[t].player != Player::Adam) {
                        return Err(SpecCheckError::NotAlternating(s.name.clone()));
                    }
                }
            }
        }
        Ok(())
    }
}
