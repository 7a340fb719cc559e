//! Text format for constraint sequences.
//!
//! ```text
//! registers r
//! {r'} < {r} ; loop-start
//! ```
//!
//! One constraint per line, classes in ascending order separated by `<`.
//! The first loop constraint carries `; loop-start` (or a line `loop-start`
//! precedes it). Without a marker the file describes a finite prefix.
//! Without a `registers` line, registers are taken in order of first appearance.

use super::LassoConstraintSeq;
use crate::model::{Constraint, Registers};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintFile {
    pub registers: Registers,
    pub constraints: Vec<Constraint>,
    pub loop_start: Option<usize>,
}

impl ConstraintFile {
    pub fn lasso(&self) -> Option<LassoConstraintSeq> {
        let ls = self.loop_start?;
        Some(LassoConstraintSeq::new(self.constraints[..ls].to_vec(), self.constraints[ls..].to_vec()))
    }

    pub fn render(&self) -> String {
        let mut s = format!("registers {}\n", self.registers.names().join(" "));
        for (i, c) in self.constraints.iter().enumerate() {
            s.push_str(&c.display(&self.registers));
            if Some(i) == self.loop_start {
                s.push_str(" ; loop-start");
            }
            s.push('\n');
        }
        s
    }
}

pub fn render_lasso(seq: &LassoConstraintSeq, regs: &Registers) -> String {
    let mut constraints = seq.prefix.clone();
    constraints.extend(seq.lp.iter().cloned());
    ConstraintFile { registers: regs.clone(), constraints, loop_start: Some(seq.prefix.len()) }.render()
}

fn parse_classes(line: &str) -> Result<Vec<Vec<(String, bool)>>, String> {
    let mut out = Vec::new();
    for part in line.split('<') {
        let p = part.trim();
        let body = p
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| format!("expected `{{...}}`, found `{p}`"))?;
        let mut cls = Vec::new();
        for t in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match t.strip_suffix('\'') {
                Some(n) => cls.push((n.to_string(), true)),
                None => cls.push((t.to_string(), false)),
            }
        }
        if cls.is_empty() {
            return Err("empty class".into());
        }
        out.push(cls);
    }
    Ok(out)
}

pub fn parse_constraint_file(text: &str) -> Result<ConstraintFile, String> {
    let mut regs: Option<Registers> = None;
    let mut raw: Vec<(usize, Vec<Vec<(String, bool)>>)> = Vec::new();
    let mut loop_start = None;
    let mut pending_loop = false;
    for (ln, line) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("registers") {
            if !raw.is_empty() || regs.is_some() {
                return Err(format!("line {ln}: `registers` must come first"));
            }
            regs = Some(Registers::new(rest.split_whitespace()).map_err(|e| format!("line {ln}: {e}"))?);
            continue;
        }
        if line == "loop-start" || line == "loop" {
            pending_loop = true;
            continue;
        }
        let (body, marker) = match line.split_once(';') {
            Some((b, m)) => {
                if m.trim() != "loop-start" {
                    return Err(format!("line {ln}: unknown marker `{}`", m.trim()));
                }
                (b, true)
            }
            None => (line, false),
        };
        if marker || pending_loop {
            if loop_start.is_some() {
                return Err(format!("line {ln}: second loop-start marker"));
            }
            loop_start = Some(raw.len());
            pending_loop = false;
        }
        raw.push((ln, parse_classes(body).map_err(|e| format!("line {ln}: {e}"))?));
    }
    if pending_loop {
        return Err("loop-start marker after the last constraint".into());
    }
    let regs = match regs {
        Some(r) => r,
        None => {
            let mut names: Vec<String> = Vec::new();
            for (_, cls) in &raw {
                for (n, _) in cls.iter().flatten() {
                    if !names.contains(n) {
                        names.push(n.clone());
                    }
                }
            }
            Registers::new(names)?
        }
    };
    let k = regs.len();
    let mut constraints = Vec::new();
    for (ln, cls) in raw {
        let mut keys = vec![usize::MAX; 2 * k];
        for (ci, cl) in cls.iter().enumerate() {
            for (n, primed) in cl {
                let r = regs.index(n).ok_or_else(|| format!("line {ln}: unknown register `{n}`"))?;
                let pos = if *primed { k + r } else { r };
                if keys[pos] != usize::MAX {
                    return Err(format!("line {ln}: `{n}{}` appears twice", if *primed { "'" } else { "" }));
                }
                keys[pos] = ci;
            }
        }
        if let Some(p) = keys.iter().position(|&x| x == usize::MAX) {
            let name = if p < k { regs.name(p).to_string() } else { format!("{}'", regs.name(p - k)) };
            return Err(format!("line {ln}: `{name}` missing"));
        }
        constraints.push(Constraint::from_keys(k, &keys));
    }
    if constraints.is_empty() {
        return Err("no constraints".into());
    }
    Ok(ConstraintFile { registers: regs, constraints, loop_start })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        let f = parse_constraint_file("registers r\n{r'} < {r} ; loop-start\n").unwrap();
        assert_eq!(f.constraints[0], Constraint::from_values(&[1], &[0]));
        assert_eq!(f.loop_start, Some(0));
        let again = parse_constraint_file(&f.render()).unwrap();
        assert_eq!(f, again);
    }

    #[test]
    fn inferred_registers_and_errors() {
        let f = parse_constraint_file("{a,b,a',b'}\n").unwrap();
        assert_eq!(f.registers.len(), 2);
        assert_eq!(f.loop_start, None);
        assert!(parse_constraint_file("registers a b\n{a,a'} < {b}\n").is_err());
        assert!(parse_constraint_file("registers a\n{a,a,a'}\n").is_err());
        assert!(parse_constraint_file("registers a\n{a,a'} ; loop\n").is_err());
    }
}
