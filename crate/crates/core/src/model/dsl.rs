//! Line-oriented specification language.
//!
//! ```text
//! registers rM rl
//! labels a b
//! state 1 adam priority 1 initial
//! state 2 eve priority 1
//! on 1 guard "TOP" asgn {rM} -> 2
//! on 2 label a,b -> 3
//! on 3 guard "rl < * < rM" asgn {rl} -> 4
//! on 3 guard "ELSE" -> 7
//! ```
//!
//! Input-driven-output specs start with `kind ido` and use
//! `on <eve-state> out <register> -> <adam-state>` instead of labels.

use std::collections::HashMap;

use super::basic::{all_tests, num_tests, Assignment, Player, Registers, Rel, Test};
use super::spec::{OneSidedSpec, State};
use crate::synth::ido::IdoSpec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}: unknown {what} `{name}`")]
    Unknown { line: usize, what: &'static str, name: String },
    #[error("state `{state}`: test [{test}] matched by more than one guard")]
    Nondeterministic { state: String, test: String },
    #[error("state `{state}`: test [{test}] not covered and no ELSE guard")]
    Incomplete { state: String, test: String },
    #[error("state `{state}`: label `{label}` has no transition")]
    MissingLabel { state: String, label: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Quoted(String),
    Set(Vec<String>),
    Arrow,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> SpecError {
    SpecError::Syntax { line, col, msg: msg.into() }
}

fn lex(line_no: usize, line: &str) -> Result<Vec<(usize, Tok)>, SpecError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c == '#' {
            break;
        } else if c == '"' {
            let start = i + 1;
            i += 1;
            while i < chars.len() && chars[i] != '"' {
                i += 1;
            }
            if i == chars.len() {
                return Err(syntax(line_no, col, "unterminated string"));
            }
            out.push((col, Tok::Quoted(chars[start..i].iter().collect())));
            i += 1;
        } else if c == '{' {
            let start = i + 1;
            while i < chars.len() && chars[i] != '}' {
                i += 1;
            }
            if i == chars.len() {
                return Err(syntax(line_no, col, "unterminated register set"));
            }
            let body: String = chars[start..i].iter().collect();
            let items = body.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
            out.push((col, Tok::Set(items)));
            i += 1;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push((col, Tok::Arrow));
            i += 2;
        } else {
            let start = i;
            while i < chars.len()
                && !chars[i].is_whitespace()
                && !matches!(chars[i], '"' | '{' | '#')
                && !(chars[i] == '-' && chars.get(i + 1) == Some(&'>'))
            {
                i += 1;
            }
            out.push((col, Tok::Word(chars[start..i].iter().collect())));
        }
    }
    Ok(out)
}

/// Allowed relations per register (bit 0 `<`, bit 1 `=`, bit 2 `>`), or ELSE.
#[derive(Clone, Debug)]
enum Guard {
    Conj(Vec<u8>),
    Else,
}

fn rel_bits(op: &str) -> Option<u8> {
    Some(match op {
        "<" => 0b001,
        "=" | "==" => 0b010,
        ">" => 0b100,
        "<=" | "≤" => 0b011,
        ">=" | "≥" => 0b110,
        "!=" | "≠" => 0b101,
        _ => return None,
    })
}

fn flip(bits: u8) -> u8 {
    (bits & 0b010) | ((bits & 1) << 2) | ((bits >> 2) & 1)
}

fn parse_guard(line: usize, col: usize, text: &str, regs: &Registers) -> Result<Guard, SpecError> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("else") {
        return Ok(Guard::Else);
    }
    let mut allowed = vec![0b111u8; regs.len()];
    if t.eq_ignore_ascii_case("top") || t == "⊤" || t.eq_ignore_ascii_case("true") {
        return Ok(Guard::Conj(allowed));
    }
    // tokenize the expression: operands and operators
    let mut toks: Vec<String> = Vec::new();
    let cs: Vec<char> = t.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if "<>=!≤≥≠".contains(c) {
            let mut s = c.to_string();
            if i + 1 < cs.len() && cs[i + 1] == '=' && "<>=!".contains(c) {
                s.push('=');
                i += 1;
            }
            toks.push(s);
            i += 1;
        } else if c == '&' || c == '∧' {
            if i + 1 < cs.len() && cs[i + 1] == '&' {
                i += 1;
            }
            toks.push("&".into());
            i += 1;
        } else {
            let s = i;
            while i < cs.len() && !cs[i].is_whitespace() && !"<>=!≤≥≠&∧".contains(cs[i]) {
                i += 1;
            }
            let w: String = cs[s..i].iter().collect();
            toks.push(if w.eq_ignore_ascii_case("and") { "&".into() } else { w });
        }
    }
    for conj in toks.split(|s| s == "&") {
        if conj.len() < 3 || conj.len() % 2 == 0 {
            return Err(syntax(line, col, format!("malformed comparison in guard `{t}`")));
        }
        for w in conj.windows(3).step_by(2) {
            let (a, op, b) = (&w[0], &w[1], &w[2]);
            let bits = rel_bits(op).ok_or_else(|| syntax(line, col, format!("unknown operator `{op}`")))?;
            let (reg, bits) = match (a.as_str(), b.as_str()) {
                ("*", "*") => return Err(syntax(line, col, "comparison of * with itself")),
                ("*", r) => (r, bits),
                (r, "*") => (r, flip(bits)),
                _ => return Err(syntax(line, col, format!("`{a} {op} {b}` does not mention *"))),
            };
            let idx = regs
                .index(reg)
                .ok_or_else(|| SpecError::Unknown { line, what: "register", name: reg.to_string() })?;
            allowed[idx] &= bits;
        }
    }
    if allowed.iter().any(|&b| b == 0) {
        return Err(SpecError::Invalid(format!("line {line}: guard `{t}` is unsatisfiable")));
    }
    Ok(Guard::Conj(allowed))
}

fn guard_tests(allowed: &[u8]) -> Vec<usize> {
    all_tests(allowed.len())
        .into_iter()
        .filter(|t| t.0.iter().zip(allowed).all(|(&r, &b)| b >> (r as u8) & 1 == 1))
        .map(|t| t.index())
        .collect()
}

/// Parsed document: either a one-sided spec or an input-driven-output spec.
#[derive(Clone, Debug)]
pub enum SpecDocument {
    OneSided(OneSidedSpec),
    Ido(IdoSpec),
}

struct Raw {
    registers: Option<Registers>,
    labels: Vec<String>,
    ido: bool,
    states: Vec<State>,
    initial: Option<usize>,
    names: HashMap<String, usize>,
    adam_edges: Vec<(usize, usize, Guard, Assignment, String)>,
    eve_edges: Vec<(usize, usize, Vec<String>, String)>,
}

pub fn parse_spec(text: &str) -> Result<OneSidedSpec, SpecError> {
    match parse_document(text)? {
        SpecDocument::OneSided(s) => Ok(s),
        SpecDocument::Ido(_) => Err(SpecError::Invalid("expected a one-sided spec, found `kind ido`".into())),
    }
}

pub fn parse_document(text: &str) -> Result<SpecDocument, SpecError> {
    let mut raw = Raw {
        registers: None,
        labels: Vec::new(),
        ido: false,
        states: Vec::new(),
        initial: None,
        names: HashMap::new(),
        adam_edges: Vec::new(),
        eve_edges: Vec::new(),
    };
    for (ln, line) in text.lines().enumerate() {
        let ln = ln + 1;
        let toks = lex(ln, line)?;
        if toks.is_empty() {
            continue;
        }
        let word = |i: usize| -> Result<&str, SpecError> {
            match toks.get(i) {
                Some((_, Tok::Word(w))) => Ok(w.as_str()),
                Some((c, _)) => Err(syntax(ln, *c, "expected a name")),
                None => Err(syntax(ln, line.len() + 1, "unexpected end of line")),
            }
        };
        match word(0)? {
            "registers" => {
                if raw.registers.is_some() {
                    return Err(syntax(ln, 1, "registers declared twice"));
                }
                let names: Vec<String> = (1..toks.len()).map(|i| word(i).map(String::from)).collect::<Result<_, _>>()?;
                raw.registers = Some(Registers::new(names).map_err(|m| syntax(ln, 1, m))?);
            }
            "labels" => {
                for i in 1..toks.len() {
                    for l in word(i)?.split(',').filter(|s| !s.is_empty()) {
                        if raw.labels.iter().any(|x| x == l) {
                            return Err(syntax(ln, toks[i].0, format!("duplicate label `{l}`")));
                        }
                        raw.labels.push(l.to_string());
                    }
                }
            }
            "kind" => match word(1)? {
                "ido" => raw.ido = true,
                "one-sided" => raw.ido = false,
                k => return Err(syntax(ln, toks[1].0, format!("unknown kind `{k}`"))),
            },
            "state" => {
                let name = word(1)?.to_string();
                let player = match word(2)? {
                    "adam" => Player::Adam,
                    "eve" => Player::Eve,
                    p => return Err(syntax(ln, toks[2].0, format!("expected adam or eve, found `{p}`"))),
                };
                if word(3)? != "priority" {
                    return Err(syntax(ln, toks[3].0, "expected `priority`"));
                }
                let priority: u32 = word(4)?
                    .parse()
                    .ok()
                    .filter(|&p| p >= 1)
                    .ok_or_else(|| syntax(ln, toks[4].0, "priority must be a positive integer"))?;
                let mut initial = false;
                if toks.len() > 5 {
                    if word(5)? != "initial" || toks.len() > 6 {
                        return Err(syntax(ln, toks[5].0, "unexpected tokens after priority"));
                    }
                    initial = true;
                }
                if raw.names.contains_key(&name) {
                    return Err(syntax(ln, toks[1].0, format!("state `{name}` declared twice")));
                }
                let q = raw.states.len();
                raw.names.insert(name.clone(), q);
                raw.states.push(State { name, player, priority });
                if initial {
                    if raw.initial.is_some() {
                        return Err(syntax(ln, toks[5].0, "second initial state"));
                    }
                    raw.initial = Some(q);
                }
            }
            "on" => parse_edge(&mut raw, ln, line, &toks)?,
            w => return Err(syntax(ln, toks[0].0, format!("unknown directive `{w}`"))),
        }
    }
    build(raw)
}

fn lookup_state(raw: &Raw, ln: usize, name: &str) -> Result<usize, SpecError> {
    raw.names.get(name).copied().ok_or_else(|| SpecError::Unknown { line: ln, what: "state", name: name.into() })
}

fn parse_edge(raw: &mut Raw, ln: usize, line: &str, toks: &[(usize, Tok)]) -> Result<(), SpecError> {
    let regs = raw.registers.clone().ok_or_else(|| syntax(ln, 1, "`registers` must precede transitions"))?;
    let end = line.len() + 1;
    let get = |i: usize| toks.get(i).map(|(_, t)| t);
    let col = |i: usize| toks.get(i).map(|(c, _)| *c).unwrap_or(end);
    let Some(Tok::Word(src)) = get(1) else { return Err(syntax(ln, col(1), "expected source state")) };
    let q = lookup_state(raw, ln, src)?;
    let Some(Tok::Word(kind)) = get(2) else { return Err(syntax(ln, col(2), "expected guard, label or out")) };
    let arrow_at = toks
        .iter()
        .position(|(_, t)| *t == Tok::Arrow)
        .ok_or_else(|| syntax(ln, end, "missing `->`"))?;
    let target = match get(arrow_at + 1) {
        Some(Tok::Word(t)) if toks.len() == arrow_at + 2 => t.clone(),
        _ => return Err(syntax(ln, col(arrow_at + 1), "expected exactly one target state after `->`")),
    };
    let t = lookup_state(raw, ln, &target)?;
    match kind.as_str() {
        "guard" => {
            if raw.states[q].player != Player::Adam {
                return Err(syntax(ln, col(2), format!("guards belong to Adam states; `{src}` is Eve's")));
            }
            let Some(Tok::Quoted(g)) = get(3) else { return Err(syntax(ln, col(3), "expected quoted guard")) };
            let guard = parse_guard(ln, col(3), g, &regs)?;
            let asgn = match arrow_at {
                4 => Assignment::EMPTY,
                6 => {
                    match (get(4), get(5)) {
                        (Some(Tok::Word(w)), Some(Tok::Set(items))) if w == "asgn" => {
                            let mut idx = Vec::new();
                            for it in items {
                                idx.push(regs.index(it).ok_or_else(|| SpecError::Unknown {
                                    line: ln,
                                    what: "register",
                                    name: it.clone(),
                                })?);
                            }
                            Assignment::from_regs(idx)
                        }
                        _ => return Err(syntax(ln, col(4), "expected `asgn {...}`")),
                    }
                }
                _ => return Err(syntax(ln, col(4), "expected `asgn {...}` or `->`")),
            };
            raw.adam_edges.push((q, t, guard, asgn, g.clone()));
        }
        "label" | "out" => {
            if raw.states[q].player != Player::Eve {
                return Err(syntax(ln, col(2), format!("`{kind}` edges belong to Eve states; `{src}` is Adam's")));
            }
            if (kind == "out") != raw.ido {
                return Err(syntax(ln, col(2), "`out` edges need `kind ido`; `label` edges forbid it"));
            }
            if arrow_at != 4 {
                return Err(syntax(ln, col(4), "Eve transitions carry no assignment"));
            }
            let Some(Tok::Word(ls)) = get(3) else { return Err(syntax(ln, col(3), "expected label list")) };
            let ls: Vec<String> = ls.split(',').filter(|s| !s.is_empty()).map(String::from).collect();
            raw.eve_edges.push((q, t, ls, kind.clone()));
        }
        k => return Err(syntax(ln, col(2), format!("expected guard, label or out, found `{k}`"))),
    }
    Ok(())
}

fn build(mut raw: Raw) -> Result<SpecDocument, SpecError> {
    let regs = raw.registers.clone().unwrap_or_else(|| Registers::new(Vec::<String>::new()).unwrap());
    let initial = raw.initial.ok_or_else(|| SpecError::Invalid("no initial state".into()))?;
    let k = regs.len();
    let nt = num_tests(k);

    // Eve edges into Eve states go through a hidden Adam state that reads any datum.
    let mut eve_edges = std::mem::take(&mut raw.eve_edges);
    let mut companions: HashMap<usize, usize> = HashMap::new();
    for e in eve_edges.iter_mut() {
        if raw.states[e.1].player == Player::Eve {
            let target = e.1;
            let c = *companions.entry(target).or_insert_with(|| {
                let q = raw.states.len();
                let st = &raw.states[target];
                raw.states.push(State { name: format!("~{}", st.name), player: Player::Adam, priority: st.priority });
                raw.adam_edges.push((q, target, Guard::Conj(vec![0b111; k]), Assignment::EMPTY, "TOP".into()));
                q
            });
            e.1 = c;
        }
    }

    let n = raw.states.len();
    let mut delta_a: Vec<Vec<Option<(Assignment, usize)>>> = (0..n)
        .map(|q| if raw.states[q].player == Player::Adam { vec![None; nt] } else { Vec::new() })
        .collect();
    let mut elses: Vec<Option<(Assignment, usize)>> = vec![None; n];
    for (q, t, guard, asgn, _) in &raw.adam_edges {
        if raw.states[*t].player != Player::Eve {
            return Err(SpecError::Invalid(format!(
                "Adam state `{}` leads to Adam state `{}`",
                raw.states[*q].name, raw.states[*t].name
            )));
        }
        match guard {
            Guard::Else => {
                if elses[*q].is_some() {
                    return Err(SpecError::Invalid(format!("state `{}` has two ELSE guards", raw.states[*q].name)));
                }
                elses[*q] = Some((*asgn, *t));
            }
            Guard::Conj(allowed) => {
                for ti in guard_tests(allowed) {
                    if delta_a[*q][ti].is_some() {
                        return Err(SpecError::Nondeterministic {
                            state: raw.states[*q].name.clone(),
                            test: Test::from_index(k, ti).display(&regs),
                        });
                    }
                    delta_a[*q][ti] = Some((*asgn, *t));
                }
            }
        }
    }
    let mut delta_a_full = Vec::with_capacity(n);
    for q in 0..n {
        let mut row = Vec::new();
        for ti in 0..delta_a[q].len() {
            match delta_a[q][ti].or(elses[q]) {
                Some(e) => row.push(e),
                None => {
                    return Err(SpecError::Incomplete {
                        state: raw.states[q].name.clone(),
                        test: Test::from_index(k, ti).display(&regs),
                    })
                }
            }
        }
        delta_a_full.push(row);
    }

    if raw.ido {
        let mut out: Vec<Vec<Option<usize>>> =
            (0..n).map(|q| if raw.states[q].player == Player::Eve { vec![None; k] } else { Vec::new() }).collect();
        for (q, t, regs_out, _) in &eve_edges {
            for r in regs_out {
                let ri = regs.index(r).ok_or_else(|| SpecError::Unknown { line: 0, what: "register", name: r.clone() })?;
                if out[*q][ri].replace(*t).is_some() {
                    return Err(SpecError::Invalid(format!(
                        "state `{}` outputs `{r}` on two transitions",
                        raw.states[*q].name
                    )));
                }
            }
        }
        let spec = IdoSpec { registers: regs, states: raw.states, initial, delta_a: delta_a_full, delta_out: out };
        spec.check().map_err(SpecError::Invalid)?;
        return Ok(SpecDocument::Ido(spec));
    }

    let mut delta_e: Vec<Vec<Option<usize>>> = (0..n)
        .map(|q| if raw.states[q].player == Player::Eve { vec![None; raw.labels.len()] } else { Vec::new() })
        .collect();
    for (q, t, ls, _) in &eve_edges {
        for l in ls {
            let li = raw
                .labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| SpecError::Unknown { line: 0, what: "label", name: l.clone() })?;
            if delta_e[*q][li].replace(*t).is_some() {
                return Err(SpecError::Invalid(format!(
                    "state `{}` has two transitions on label `{l}`",
                    raw.states[*q].name
                )));
            }
        }
    }
    let mut delta_e_full = Vec::with_capacity(n);
    for q in 0..n {
        let mut row = Vec::new();
        for (li, t) in delta_e[q].iter().enumerate() {
            row.push(t.ok_or_else(|| SpecError::MissingLabel {
                state: raw.states[q].name.clone(),
                label: raw.labels[li].clone(),
            })?);
        }
        delta_e_full.push(row);
    }
    let spec = OneSidedSpec {
        registers: regs,
        labels: raw.labels,
        states: raw.states,
        initial,
        delta_a: delta_a_full,
        delta_e: delta_e_full,
    };
    spec.check().map_err(|e| SpecError::Invalid(e.to_string()))?;
    Ok(SpecDocument::OneSided(spec))
}

/// Guard text for a single maximal test.
pub fn test_guard(t: &Test, regs: &Registers) -> String {
    if t.is_empty() {
        return "TOP".into();
    }
    t.0.iter()
        .enumerate()
        .map(|(i, r)| match r {
            Rel::Lt => format!("* < {}", regs.name(i)),
            Rel::Eq => format!("* = {}", regs.name(i)),
            Rel::Gt => format!("* > {}", regs.name(i)),
        })
        .collect::<Vec<_>>()
        .join(" & ")
}

/// Print a spec in the DSL. Every Adam transition is written per maximal test.
pub fn pretty_print(spec: &OneSidedSpec) -> String {
    let mut s = String::new();
    let regs = &spec.registers;
    s.push_str(&format!("registers {}\n", regs.names().join(" ")));
    s.push_str(&format!("labels {}\n", spec.labels.join(" ")));
    for (q, st) in spec.states.iter().enumerate() {
        let p = match st.player {
            Player::Adam => "adam",
            Player::Eve => "eve",
        };
        let init = if q == spec.initial { " initial" } else { "" };
        s.push_str(&format!("state {} {} priority {}{}\n", st.name, p, st.priority, init));
    }
    let k = regs.len();
    for (q, st) in spec.states.iter().enumerate() {
        match st.player {
            Player::Adam => {
                let row = &spec.delta_a[q];
                if row.iter().all(|e| *e == row[0]) {
                    let (a, t) = row[0];
                    s.push_str(&format!(
                        "on {} guard \"TOP\" asgn {} -> {}\n",
                        st.name,
                        a.display(regs),
                        spec.states[t].name
                    ));
                    continue;
                }
                for (ti, &(a, t)) in row.iter().enumerate() {
                    s.push_str(&format!(
                        "on {} guard \"{}\" asgn {} -> {}\n",
                        st.name,
                        test_guard(&Test::from_index(k, ti), regs),
                        a.display(regs),
                        spec.states[t].name
                    ));
                }
            }
            Player::Eve => {
                for (li, &t) in spec.delta_e[q].iter().enumerate() {
                    s.push_str(&format!("on {} label {} -> {}\n", st.name, spec.labels[li], spec.states[t].name));
                }
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    pub const FIG1: &str = include_str!("../../../../specs/fig1.rsa");

    #[test]
    fn fig1_parses() {
        let s = parse_spec(FIG1).unwrap();
        assert_eq!(s.registers.names(), &["rM".to_string(), "rl".to_string()]);
        assert_eq!(s.labels, vec!["a", "b"]);
        // six numbered states, the sink, and the hidden companions of 6 and 7
        let visible = s.states.iter().filter(|st| !st.name.starts_with('~')).count();
        assert_eq!(visible, 7);
        let q3 = s.state_index("3").unwrap();
        let q4 = s.state_index("4").unwrap();
        let inside: Vec<usize> =
            (0..9).filter(|&ti| s.delta_a[q3][ti].1 == q4).collect();
        // rl < * < rM: rel to rM is `<`, rel to rl is `>`
        assert_eq!(inside, vec![Test(vec![Rel::Lt, Rel::Gt]).index()]);
    }

    #[test]
    fn top_guard_is_universal() {
        let s = parse_spec(
            "registers r s\nlabels x\nstate A adam priority 2 initial\nstate E eve priority 2\n\
             on A guard \"TOP\" -> E\non E label x -> A\n",
        )
        .unwrap();
        assert_eq!(s.delta_a[0].len(), 9);
        assert!(s.delta_a[0].iter().all(|&(a, t)| a.is_empty() && t == 1));
    }

    #[test]
    fn errors_are_reported() {
        let base = "registers r\nlabels x\nstate A adam priority 1 initial\nstate E eve priority 1\non E label x -> A\n";
        let e = parse_spec(&format!("{base}on A guard \"* < r\" -> E\n")).unwrap_err();
        assert!(matches!(e, SpecError::Incomplete { .. }));
        let e = parse_spec(&format!("{base}on A guard \"* <= r\" -> E\non A guard \"* = r\" -> E\non A guard \"ELSE\" -> E\n"))
            .unwrap_err();
        assert!(matches!(e, SpecError::Nondeterministic { .. }));
        let e = parse_spec(&format!("{base}on A guard \"* < q\" -> E\n")).unwrap_err();
        assert!(matches!(e, SpecError::Unknown { what: "register", .. }));
        let e = parse_spec(&format!("{base}on A guard \"* < r -> E\n")).unwrap_err();
        assert!(matches!(e, SpecError::Syntax { line: 6, .. }));
        let e = parse_spec(&format!("{base}on E label y -> A\non A guard \"TOP\" -> E\n")).unwrap_err();
        assert!(matches!(e, SpecError::Unknown { what: "label", .. }));
    }

    #[test]
    fn round_trip() {
        let s = parse_spec(FIG1).unwrap();
        let again = parse_spec(&pretty_print(&s)).unwrap();
        assert_eq!(s, again);
    }
}
