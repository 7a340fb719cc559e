//! Plays between a transducer and a data source, with the specification alongside.

use std::fmt::Write;

use num_rational::BigRational;

use super::adam::{AdamDataStrategy, Datum};
use crate::model::transducer::{test_code, TransducerRun};
use crate::model::{Assignment, OneSidedSpec, RegisterTransducer, Test};

/// Something that plays data.
pub trait DataSource {
    /// The next datum, and the test it is meant to satisfy if the source knows.
    fn datum(&mut self, registers: &[Datum]) -> Result<(Datum, Option<Test>), String>;
    fn observe(&mut self, _label: usize) {}
}

impl DataSource for AdamDataStrategy {
    fn datum(&mut self, _registers: &[Datum]) -> Result<(Datum, Option<Test>), String> {
        self.play().map(|m| (m.datum, Some(m.test))).map_err(|e| e.to_string())
    }

    fn observe(&mut self, label: usize) {
        AdamDataStrategy::observe(self, label)
    }
}

/// A fixed list of data, then stop.
pub struct Scripted(pub Vec<Datum>, pub usize);

impl Scripted {
    pub fn new(data: Vec<Datum>) -> Self {
        Scripted(data, 0)
    }

    pub fn integers(data: &[i64]) -> Self {
        Self::new(data.iter().map(|&d| BigRational::from_integer(d.into())).collect())
    }
}

impl DataSource for Scripted {
    fn datum(&mut self, _registers: &[Datum]) -> Result<(Datum, Option<Test>), String> {
        let d = self.0.get(self.1).cloned().ok_or("script exhausted")?;
        self.1 += 1;
        Ok((d, None))
    }
}

#[derive(Clone, Debug)]
pub struct TraceStep {
    pub step: usize,
    pub datum: Datum,
    pub test: Test,
    pub asgn: Assignment,
    pub label: usize,
    /// Eve state reached by the datum, and the Adam state reached by the label.
    pub eve_state: usize,
    pub state: usize,
    pub priority: u32,
    /// Registers after the step.
    pub registers: Vec<Datum>,
}

#[derive(Clone, Debug, Default)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
    pub violations: Vec<String>,
}

impl Trace {
    /// One step per line: step, data, test, asgn, label, state, priority.
    pub fn render(&self, spec: &OneSidedSpec) -> String {
        let mut s = String::new();
        for st in &self.steps {
            writeln!(
                s,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                st.step,
                st.datum,
                test_code(&st.test),
                st.asgn.display(&spec.registers),
                spec.labels[st.label],
                spec.states[st.eve_state].name,
                st.priority
            )
            .unwrap();
        }
        for v in &self.violations {
            writeln!(s, "violation\t{v}").unwrap();
        }
        s
    }

    pub fn visits(&self, state: usize) -> bool {
        self.steps.iter().any(|s| s.eve_state == state || s.state == state)
    }
}

/// Run `steps` rounds from the all-zero valuation. The specification is run in
/// lockstep; a transducer assignment that departs from it is reported.
pub fn simulate(spec: &OneSidedSpec, t: &RegisterTransducer, adam: &mut dyn DataSource, steps: usize) -> Trace {
    let zero = BigRational::from_integer(0.into());
    let mut run = TransducerRun::new(t, zero);
    let mut q = spec.initial;
    let mut trace = Trace::default();
    for step in 0..steps {
        let (d, meant) = match adam.datum(&run.valuation) {
            Ok(x) => x,
            Err(e) => {
                trace.violations.push(format!("step {step}: {e}"));
                break;
            }
        };
        let fired = run.feed(&d);
        if let Some(m) = meant {
            if m != fired.test {
                trace.violations.push(format!("step {step}: datum {d} misses the intended test {}", test_code(&m)));
            }
        }
        let (asgn, qe) = spec.adam_step(q, &fired.test);
        if asgn != fired.asgn {
            trace.violations.push(format!("step {step}: transducer assignment departs from the specification"));
        }
        let q2 = spec.eve_step(qe, fired.label);
        adam.observe(fired.label);
        trace.steps.push(TraceStep {
            step,
            datum: d,
            test: fired.test,
            asgn: fired.asgn,
            label: fired.label,
            eve_state: qe,
            state: q2,
            priority: spec.priority(qe).max(spec.priority(q2)),
            registers: run.valuation.clone(),
        });
        q = q2;
    }
    trace
}

/// Random data shaped by the registers: a copy of a register, a point strictly
/// inside a gap between two of them, or a value past either end.
pub struct RandomData<R> {
    pub rng: R,
    pub domain: crate::model::DataDomain,
}

impl<R: rand::Rng> DataSource for RandomData<R> {
    fn datum(&mut self, registers: &[Datum]) -> Result<(Datum, Option<Test>), String> {
        use num_traits::{One, Zero};
        let mut vals: Vec<Datum> = registers.to_vec();
        vals.sort();
        vals.dedup();
        let int = |v: i64| BigRational::from_integer(v.into());
        let lo = vals.first().cloned().unwrap_or_else(BigRational::zero);
        let hi = vals.last().cloned().unwrap_or_else(BigRational::zero);
        let nat = self.domain == crate::model::DataDomain::Nat;
        let d = match self.rng.gen_range(0..4) {
            0 if !vals.is_empty() => vals[self.rng.gen_range(0..vals.len())].clone(),
            1 if vals.len() >= 2 => {
                let i = self.rng.gen_range(0..vals.len() - 1);
                let (a, b) = (&vals[i], &vals[i + 1]);
                if nat {
                    let (a, b) = (a.to_integer(), b.to_integer());
                    let span = &b - &a;
                    if span <= One::one() {
                        BigRational::from_integer(b)
                    } else {
                        let off: i64 = self.rng.gen_range(1..span.min(1_000_000.into()).try_into().unwrap_or(2));
                        BigRational::from_integer(a + off)
                    }
                } else {
                    let t = BigRational::new(self.rng.gen_range(1..8).into(), 8.into());
                    a + (b - a) * t
                }
            }
            2 if !nat || lo > BigRational::zero() => {
                let down = &lo - int(self.rng.gen_range(1..10));
                if nat && down < BigRational::zero() {
                    BigRational::zero()
                } else {
                    down
                }
            }
            _ => hi + int(self.rng.gen_range(1..10)),
        };
        Ok((d, None))
    }
}
