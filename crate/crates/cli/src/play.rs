//! Terminal dialogue between a human and a synthesized strategy.

use std::io::{self, BufRead, Write};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use regsynth::model::dsl::test_guard;
use regsynth::model::transducer::TransducerRun;
use regsynth::model::{DataDomain, OneSidedSpec, Player, RegisterTransducer};
use regsynth::synth::{AdamDataStrategy, Datum};

/// Who wins every play from `q`, when all reachable states share one parity.
pub fn settled(spec: &OneSidedSpec, q: usize) -> Option<Player> {
    let mut seen = vec![false; spec.num_states()];
    let mut stack = vec![q];
    seen[q] = true;
    while let Some(p) = stack.pop() {
        let next: Vec<usize> = match spec.player(p) {
            Player::Adam => spec.delta_a[p].iter().map(|&(_, e)| e).collect(),
            Player::Eve => spec.delta_e[p].clone(),
        };
        for n in next {
            if !seen[n] {
                seen[n] = true;
                stack.push(n);
            }
        }
    }
    let mut parities = (0..spec.num_states()).filter(|&p| seen[p]).map(|p| spec.priority(p) % 2);
    let first = parities.next()?;
    parities.all(|x| x == first).then(|| Player::winner_of(first))
}

/// `None` at end of input or on `quit`.
fn prompt<R: BufRead, W: Write>(input: &mut R, out: &mut W, text: &str) -> io::Result<Option<String>> {
    loop {
        write!(out, "{text}")?;
        out.flush()?;
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 {
            writeln!(out)?;
            return Ok(None);
        }
        let line = line.trim();
        match line {
            "" => continue,
            "q" | "quit" | "exit" => return Ok(None),
            _ => return Ok(Some(line.to_string())),
        }
    }
}

pub fn parse_datum(s: &str, domain: DataDomain) -> Result<Datum, String> {
    match domain {
        DataDomain::Nat => {
            let n = BigInt::from_str(s).map_err(|_| format!("`{s}` is not an integer"))?;
            if n.is_negative() {
                return Err(format!("{s} is negative; data in N are nonnegative"));
            }
            Ok(BigRational::from_integer(n))
        }
        DataDomain::Rat => BigRational::from_str(s).map_err(|_| format!("`{s}` is not of the form p/q")),
    }
}

fn show_registers(spec: &OneSidedSpec, v: &[Datum]) -> String {
    spec.registers.names().iter().zip(v).map(|(n, x)| format!("{n}={x}")).collect::<Vec<_>>().join(" ")
}

struct Settled(Option<Player>);

impl Settled {
    fn check<W: Write>(&mut self, spec: &OneSidedSpec, q: usize, out: &mut W) -> io::Result<()> {
        if self.0.is_none() {
            if let Some(p) = settled(spec, q) {
                writeln!(out, "state {} reached: {p:?} wins every continuation", spec.states[q].name)?;
                self.0 = Some(p);
            }
        }
        Ok(())
    }
}

/// The human supplies data, the transducer answers.
pub fn human_adam<R: BufRead, W: Write>(
    spec: &OneSidedSpec,
    t: &RegisterTransducer,
    domain: DataDomain,
    input: &mut R,
    out: &mut W,
) -> io::Result<()> {
    let hint = match domain {
        DataDomain::Nat => "a nonnegative integer",
        DataDomain::Rat => "a rational p/q",
    };
    writeln!(out, "You play Adam over {domain}: enter {hint} per turn, `quit` to stop.")?;
    let mut run = TransducerRun::new(t, BigRational::zero());
    let mut q = spec.initial;
    let mut done = Settled(None);
    writeln!(out, "registers {}  state {}", show_registers(spec, &run.valuation), spec.states[q].name)?;
    while let Some(line) = prompt(input, out, "datum> ")? {
        let d = match parse_datum(&line, domain) {
            Ok(d) => d,
            Err(e) => {
                writeln!(out, "{e}")?;
                continue;
            }
        };
        let fired = run.feed(&d);
        let (_, qe) = spec.adam_step(q, &fired.test);
        let q2 = spec.eve_step(qe, fired.label);
        writeln!(
            out,
            "test {}  asgn {}  Eve answers {}  registers {}  state {} -> {}",
            test_guard(&fired.test, &spec.registers),
            fired.asgn.display(&spec.registers),
            spec.labels[fired.label],
            show_registers(spec, &run.valuation),
            spec.states[qe].name,
            spec.states[q2].name
        )?;
        done.check(spec, qe, out)?;
        done.check(spec, q2, out)?;
        q = q2;
    }
    writeln!(out, "bye")
}

/// The human answers with labels, Adam's data strategy supplies the data.
pub fn human_eve<R: BufRead, W: Write>(spec: &OneSidedSpec, adam: AdamDataStrategy, input: &mut R, out: &mut W) -> io::Result<()> {
    writeln!(out, "You play Eve over {}: answer with one of {}, `quit` to stop.", adam.domain, spec.labels.join(" "))?;
    let mut play = adam.reset();
    let mut q = spec.initial;
    let mut done = Settled(None);
    loop {
        let mv = match play.play() {
            Ok(m) => m,
            Err(e) => {
                writeln!(out, "Adam cannot continue: {e}")?;
                break;
            }
        };
        let (_, qe) = spec.adam_step(q, &mv.test);
        writeln!(
            out,
            "Adam plays {}  test {}  asgn {}  registers {}  state {}",
            mv.datum,
            test_guard(&mv.test, &spec.registers),
            mv.asgn.display(&spec.registers),
            show_registers(spec, &play.valuation()),
            spec.states[qe].name
        )?;
        done.check(spec, qe, out)?;
        let label = loop {
            let Some(line) = prompt(input, out, "label> ")? else {
                writeln!(out, "bye")?;
                return Ok(());
            };
            let l = spec.label_index(&line).or_else(|| line.parse().ok().filter(|&i: &usize| i < spec.labels.len()));
            match l {
                Some(l) => break l,
                None => writeln!(out, "unknown label `{line}`")?,
            }
        };
        play.observe(label);
        q = spec.eve_step(qe, label);
        writeln!(out, "state {}", spec.states[q].name)?;
        done.check(spec, q, out)?;
    }
    writeln!(out, "bye")
}

#[cfg(test)]
mod tests {
    use super::*;
    use regsynth::model::dsl::parse_spec;
    use regsynth::synth::{synthesize, Verdict};

    fn fig1() -> OneSidedSpec {
        parse_spec(include_str!("../../../specs/fig1.rsa")).unwrap()
    }

    fn session(f: impl FnOnce(&mut &[u8], &mut Vec<u8>) -> io::Result<()>, input: &str) -> String {
        let mut out = Vec::new();
        f(&mut input.as_bytes(), &mut out).unwrap();
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn human_adam_is_pushed_out_over_n() {
        let spec = fig1();
        let Verdict::Realizable(t) = synthesize(&spec, DataDomain::Nat).verdict else { panic!() };
        // open the interval at 5, then climb inside it
        let text = session(|i, o| human_adam(&spec, &t, DataDomain::Nat, i, o), "5\n-1\nx\n1\n2\n3\n4\n5\nquit\n");
        assert!(text.contains("negative"), "{text}");
        assert!(text.contains("not an integer"), "{text}");
        assert!(text.contains("state 7 reached: Eve wins"), "{text}");
        assert!(!text.contains("Adam wins"), "{text}");
        assert!(text.trim_end().ends_with("bye"));
    }

    #[test]
    fn machine_adam_keeps_the_interval_open_over_q() {
        let spec = fig1();
        let Verdict::Unrealizable(adam) = synthesize(&spec, DataDomain::Rat).verdict else { panic!() };
        let text = session(|i, o| human_eve(&spec, adam, i, o), &"a\n".repeat(10));
        assert!(!text.contains("wins every continuation"), "{text}");
        assert_eq!(text.matches("Adam plays").count(), 11);
        assert!(text.trim_end().ends_with("bye"));
    }

    #[test]
    fn quitting_right_away() {
        let spec = fig1();
        let Verdict::Realizable(t) = synthesize(&spec, DataDomain::Nat).verdict else { panic!() };
        let text = session(|i, o| human_adam(&spec, &t, DataDomain::Nat, i, o), "quit\n");
        assert!(text.ends_with("bye\n"));
        assert!(!text.contains("test "));
    }

    #[test]
    fn rationals_parse() {
        assert_eq!(parse_datum("3/6", DataDomain::Rat).unwrap(), BigRational::new(1.into(), 2.into()));
        assert!(parse_datum("1/2", DataDomain::Nat).is_err());
        assert!(parse_datum("-4", DataDomain::Rat).is_ok());
    }

    #[test]
    fn sinks_settle_the_play() {
        let spec = fig1();
        assert_eq!(settled(&spec, spec.state_index("6").unwrap()), Some(Player::Adam));
        assert_eq!(settled(&spec, spec.state_index("7").unwrap()), Some(Player::Eve));
        assert_eq!(settled(&spec, spec.initial), None);
    }
}
