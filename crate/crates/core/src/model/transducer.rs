//! Register transducers: finite-state Eve implementations.
//!
//! Dump format, one item per line, fields in this order:
//!
//! ```text
//! transducer
//! registers <r1> <r2> ...
//! labels <a> <b> ...
//! states <n>
//! initial <i>
//! name <i> <text>                     (optional, one per state)
//! step <i> <code> <asgn-set> <label> <j>
//! ```
//!
//! `<code>` lists the relation of `*` to each register in declaration order
//! using the characters `<`, `=`, `>` (`-` when there are no registers).
//! Steps appear for every state and every test in canonical test order.

use super::basic::{num_tests, update_valuation, Assignment, Registers, Rel, Test};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub asgn: Assignment,
    pub label: usize,
    pub next: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterTransducer {
    pub registers: Registers,
    pub labels: Vec<String>,
    pub names: Vec<String>,
    pub initial: usize,
    /// `steps[state][test index]`.
    pub steps: Vec<Vec<Step>>,
}

pub fn test_code(t: &Test) -> String {
    if t.is_empty() {
        return "-".into();
    }
    t.0.iter().map(|r| r.symbol()).collect()
}

pub fn parse_test_code(k: usize, s: &str) -> Option<Test> {
    if k == 0 {
        return (s == "-").then(|| Test(vec![]));
    }
    let rels: Option<Vec<Rel>> = s
        .chars()
        .map(|c| match c {
            '<' => Some(Rel::Lt),
            '=' => Some(Rel::Eq),
            '>' => Some(Rel::Gt),
            _ => None,
        })
        .collect();
    rels.filter(|r| r.len() == k).map(Test)
}

impl RegisterTransducer {
    pub fn num_states(&self) -> usize {
        self.steps.len()
    }

    pub fn step(&self, q: usize, t: &Test) -> &Step {
        &self.steps[q][t.index()]
    }

    /// Run on a finite data word from the all-zero valuation, returning labels.
    pub fn run<T: Ord + Clone>(&self, zero: T, data: &[T]) -> Vec<usize> {
        let mut run = TransducerRun::new(self, zero);
        data.iter().map(|d| run.feed(d).label).collect()
    }

    pub fn dump(&self) -> String {
        let mut s = String::from("transducer\n");
        s.push_str(&format!("registers {}\n", self.registers.names().join(" ")));
        s.push_str(&format!("labels {}\n", self.labels.join(" ")));
        s.push_str(&format!("states {}\n", self.num_states()));
        s.push_str(&format!("initial {}\n", self.initial));
        for (i, n) in self.names.iter().enumerate() {
            s.push_str(&format!("name {i} {n}\n"));
        }
        let k = self.registers.len();
        for (q, row) in self.steps.iter().enumerate() {
            for (ti, st) in row.iter().enumerate() {
                s.push_str(&format!(
                    "step {q} {} {} {} {}\n",
                    test_code(&Test::from_index(k, ti)),
                    st.asgn.display(&self.registers),
                    self.labels[st.label],
                    st.next
                ));
            }
        }
        s
    }

    pub fn parse_dump(text: &str) -> Result<RegisterTransducer, String> {
        let mut regs = None;
        let mut labels: Vec<String> = Vec::new();
        let mut n = None;
        let mut initial = 0;
        let mut names: Vec<Option<String>> = Vec::new();
        let mut steps: Vec<Vec<Option<Step>>> = Vec::new();
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, l)) if l.trim() == "transducer" => {}
            _ => return Err("missing `transducer` header".into()),
        }
        for (ln, line) in lines {
            let err = |m: &str| format!("line {}: {m}", ln + 1);
            let w: Vec<&str> = line.split_whitespace().collect();
            match w[0] {
                "registers" => regs = Some(Registers::new(w[1..].iter().copied()).map_err(|e| err(&e))?),
                "labels" => labels = w[1..].iter().map(|s| s.to_string()).collect(),
                "states" => {
                    let c: usize = w.get(1).and_then(|s| s.parse().ok()).ok_or_else(|| err("bad state count"))?;
                    let k = regs.as_ref().ok_or_else(|| err("registers must come first"))?.len();
                    n = Some(c);
                    names = vec![None; c];
                    steps = vec![vec![None; num_tests(k)]; c];
                }
                "initial" => initial = w.get(1).and_then(|s| s.parse().ok()).ok_or_else(|| err("bad initial"))?,
                "name" => {
                    let i: usize = w.get(1).and_then(|s| s.parse().ok()).ok_or_else(|| err("bad index"))?;
                    *names.get_mut(i).ok_or_else(|| err("index out of range"))? = Some(w[2..].join(" "));
                }
                "step" => {
                    let regs = regs.as_ref().ok_or_else(|| err("registers must come first"))?;
                    if w.len() != 6 {
                        return Err(err("expected `step <i> <code> <asgn> <label> <j>`"));
                    }
                    let q: usize = w[1].parse().map_err(|_| err("bad state"))?;
                    let t = parse_test_code(regs.len(), w[2]).ok_or_else(|| err("bad test code"))?;
                    let body = w[3].strip_prefix('{').and_then(|s| s.strip_suffix('}')).ok_or_else(|| err("bad asgn"))?;
                    let mut a = Vec::new();
                    for r in body.split(',').filter(|s| !s.is_empty()) {
                        a.push(regs.index(r).ok_or_else(|| err("unknown register"))?);
                    }
                    let label = labels.iter().position(|l| l == w[4]).ok_or_else(|| err("unknown label"))?;
                    let next: usize = w[5].parse().map_err(|_| err("bad target"))?;
                    let slot = steps.get_mut(q).ok_or_else(|| err("state out of range"))?;
                    slot[t.index()] = Some(Step { asgn: Assignment::from_regs(a), label, next });
                }
                other => return Err(err(&format!("unknown field `{other}`"))),
            }
        }
        let n = n.ok_or("missing `states`")?;
        let registers = regs.ok_or("missing `registers`")?;
        let mut full = Vec::with_capacity(n);
        for (q, row) in steps.into_iter().enumerate() {
            let mut r = Vec::new();
            for (ti, s) in row.into_iter().enumerate() {
                let s = s.ok_or_else(|| format!("state {q}: no step for test index {ti}"))?;
                if s.next >= n {
                    return Err(format!("state {q}: target {} out of range", s.next));
                }
                r.push(s);
            }
            full.push(r);
        }
        if initial >= n {
            return Err("initial state out of range".into());
        }
        let names = names.into_iter().enumerate().map(|(i, s)| s.unwrap_or_else(|| format!("t{i}"))).collect();
        Ok(RegisterTransducer { registers, labels, names, initial, steps: full })
    }
}

/// A transducer executing on live data.
pub struct TransducerRun<'a, T> {
    pub t: &'a RegisterTransducer,
    pub state: usize,
    pub valuation: Vec<T>,
}

pub struct Fired {
    pub test: Test,
    pub asgn: Assignment,
    pub label: usize,
}

impl<'a, T: Ord + Clone> TransducerRun<'a, T> {
    pub fn new(t: &'a RegisterTransducer, zero: T) -> Self {
        TransducerRun { t, state: t.initial, valuation: vec![zero; t.registers.len()] }
    }

    pub fn feed(&mut self, d: &T) -> Fired {
        let test = Test::of_datum(&self.valuation, d);
        let st = self.t.step(self.state, &test).clone();
        self.valuation = update_valuation(&self.valuation, d, st.asgn);
        self.state = st.next;
        Fired { test, asgn: st.asgn, label: st.label }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(k: usize) -> RegisterTransducer {
        RegisterTransducer {
            registers: Registers::numbered(k),
            labels: vec!["x".into()],
            names: vec!["only".into()],
            initial: 0,
            steps: vec![vec![Step { asgn: Assignment::EMPTY, label: 0, next: 0 }; num_tests(k)]],
        }
    }

    #[test]
    fn dump_round_trip() {
        let t = constant(2);
        assert_eq!(RegisterTransducer::parse_dump(&t.dump()).unwrap(), t);
        let t0 = constant(0);
        assert_eq!(RegisterTransducer::parse_dump(&t0.dump()).unwrap(), t0);
    }

    #[test]
    fn runs() {
        let t = constant(1);
        assert_eq!(t.run(0u64, &[3, 1, 4]), vec![0, 0, 0]);
    }
}
