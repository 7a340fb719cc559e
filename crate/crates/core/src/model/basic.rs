use std::fmt;
use std::str::FromStr;

/// Index of a register inside its register set.
pub type Reg = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Registers {
    names: Vec<String>,
}

impl Registers {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, String> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if n == "r_d" || n == "r_0" {
                return Err(format!("register name `{n}` is reserved"));
            }
            if names[..i].contains(n) {
                return Err(format!("duplicate register `{n}`"));
            }
        }
        if names.len() > 16 {
            return Err("at most 16 registers are supported".into());
        }
        Ok(Registers { names })
    }

    /// Register set with generated names `r1..rk`.
    pub fn numbered(k: usize) -> Self {
        Registers { names: (1..=k).map(|i| format!("r{i}")).collect() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, r: Reg) -> &str {
        &self.names[r]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<Reg> {
        self.names.iter().position(|n| n == name)
    }

    /// The same set extended by the last-data register (appended last).
    pub fn with_data_register(&self) -> Registers {
        let mut names = self.names.clone();
        names.push("r_d".into());
        Registers { names }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DataDomain {
    Nat,
    Rat,
}

impl FromStr for DataDomain {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "nat" | "n" => Ok(DataDomain::Nat),
            "rat" | "q" => Ok(DataDomain::Rat),
            _ => Err(format!("unknown domain `{s}` (expected nat or rat)")),
        }
    }
}

impl fmt::Display for DataDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DataDomain::Nat => "nat",
            DataDomain::Rat => "rat",
        })
    }
}

/// Relation of the placeholder `*` to a register.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Lt,
    Eq,
    Gt,
}

impl Rel {
    pub const ALL: [Rel; 3] = [Rel::Lt, Rel::Eq, Rel::Gt];

    pub fn of<T: Ord>(d: &T, v: &T) -> Rel {
        match d.cmp(v) {
            std::cmp::Ordering::Less => Rel::Lt,
            std::cmp::Ordering::Equal => Rel::Eq,
            std::cmp::Ordering::Greater => Rel::Gt,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Eq => "=",
            Rel::Gt => ">",
        }
    }
}

/// A maximal test: one relation of `*` per register.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Test(pub Vec<Rel>);

impl Test {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn rel(&self, r: Reg) -> Rel {
        self.0[r]
    }

    /// Position in the canonical order (mixed radix, register 0 most significant).
    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &r| acc * 3 + r as usize)
    }

    pub fn from_index(k: usize, mut idx: usize) -> Test {
        let mut rels = vec![Rel::Lt; k];
        for i in (0..k).rev() {
            rels[i] = Rel::ALL[idx % 3];
            idx /= 3;
        }
        Test(rels)
    }

    /// The unique test satisfied by datum `d` against valuation `v`.
    pub fn of_datum<T: Ord>(v: &[T], d: &T) -> Test {
        Test(v.iter().map(|x| Rel::of(d, x)).collect())
    }

    pub fn holds<T: Ord>(&self, v: &[T], d: &T) -> bool {
        test_holds(v, d, self)
    }

    pub fn display(&self, regs: &Registers) -> String {
        if self.0.is_empty() {
            return "TOP".into();
        }
        self.0
            .iter()
            .enumerate()
            .map(|(i, r)| format!("* {} {}", r.symbol(), regs.name(i)))
            .collect::<Vec<_>>()
            .join(" & ")
    }
}

pub fn num_tests(k: usize) -> usize {
    3usize.pow(k as u32)
}

pub fn all_tests(k: usize) -> Vec<Test> {
    (0..num_tests(k)).map(|i| Test::from_index(k, i)).collect()
}

pub fn test_holds<T: Ord>(v: &[T], d: &T, t: &Test) -> bool {
    v.len() == t.0.len() && v.iter().zip(&t.0).all(|(x, &r)| Rel::of(d, x) == r)
}

/// Set of registers overwritten by the incoming datum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(pub u32);

impl Assignment {
    pub const EMPTY: Assignment = Assignment(0);

    pub fn from_regs(regs: impl IntoIterator<Item = Reg>) -> Self {
        Assignment(regs.into_iter().fold(0, |m, r| m | (1 << r)))
    }

    pub fn contains(self, r: Reg) -> bool {
        self.0 >> r & 1 == 1
    }

    pub fn regs(self) -> impl Iterator<Item = Reg> {
        (0..32).filter(move |&r| self.contains(r))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn display(self, regs: &Registers) -> String {
        let names: Vec<&str> = self.regs().map(|r| regs.name(r)).collect();
        format!("{{{}}}", names.join(","))
    }
}

pub fn update_valuation<T: Clone>(v: &[T], d: &T, a: Assignment) -> Vec<T> {
    v.iter()
        .enumerate()
        .map(|(r, x)| if a.contains(r) { d.clone() } else { x.clone() })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    Adam,
    Eve,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Adam => Player::Eve,
            Player::Eve => Player::Adam,
        }
    }

    /// The player who wins when `p` is the maximal priority seen infinitely often.
    pub fn winner_of(p: u32) -> Player {
        if p % 2 == 0 {
            Player::Eve
        } else {
            Player::Adam
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_counts_and_order() {
        assert_eq!(all_tests(0), vec![Test(vec![])]);
        assert_eq!(
            all_tests(1),
            vec![Test(vec![Rel::Lt]), Test(vec![Rel::Eq]), Test(vec![Rel::Gt])]
        );
        assert_eq!(all_tests(2).len(), 9);
        for (i, t) in all_tests(3).iter().enumerate() {
            assert_eq!(t.index(), i);
        }
    }

    #[test]
    fn holds_examples() {
        assert!(test_holds(&[5], &7, &Test(vec![Rel::Gt])));
        // registers in order (rM, rl): rM=4, rl=1, d=2
        assert!(test_holds(&[4, 1], &2, &Test(vec![Rel::Lt, Rel::Gt])));
    }

    #[test]
    fn update_examples() {
        assert_eq!(update_valuation(&[3], &9, Assignment::from_regs([0])), vec![9]);
        assert_eq!(update_valuation(&[3, 4], &9, Assignment::EMPTY), vec![3, 4]);
        assert_eq!(update_valuation(&[0, 0], &6, Assignment::from_regs([0])), vec![6, 0]);
    }

    #[test]
    fn reserved_names_rejected() {
        assert!(Registers::new(["r_d"]).is_err());
        assert!(Registers::new(["a", "a"]).is_err());
    }
}
