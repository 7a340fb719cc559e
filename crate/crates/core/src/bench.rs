//! A specification family indexed by its number of registers, for size measurements.

use std::fmt::Write;
use std::time::{Duration, Instant};

use crate::game::{build_parity_game, solve_parity, ProductStats};
use crate::model::dsl::parse_spec;
use crate::model::{DataDomain, OneSidedSpec, Player};

/// Registers `r1..rn`. From `A_i` Adam either exceeds `r_i` (to `G_i`, even) or
/// not (to `B_i`, odd), storing the datum in `r_i`; Eve then moves on to `A_{i+1}`
/// with `x` or stays with `y`.
pub fn register_family_text(n: usize) -> String {
    assert!(n >= 1);
    let regs: Vec<String> = (1..=n).map(|i| format!("r{i}")).collect();
    let mut s = format!("registers {}\nlabels x y\n", regs.join(" "));
    for i in 1..=n {
        s += &format!("state A{i} adam priority 1{}\n", if i == 1 { " initial" } else { "" });
        s += &format!("state G{i} eve priority 2\nstate B{i} eve priority 1\n");
    }
    for i in 1..=n {
        let j = i % n + 1;
        s += &format!("on A{i} guard \"* > r{i}\" asgn {{r{i}}} -> G{i}\non A{i} guard \"ELSE\" asgn {{r{i}}} -> B{i}\n");
        for q in ["G", "B"] {
            s += &format!("on {q}{i} label x -> A{j}\non {q}{i} label y -> A{i}\n");
        }
    }
    s
}

pub fn register_family(n: usize) -> OneSidedSpec {
    parse_spec(&register_family_text(n)).expect("family specification")
}

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub registers: usize,
    pub domain: DataDomain,
    pub stats: ProductStats,
    pub build: Duration,
    pub solve: Duration,
    pub winner: Player,
}

pub fn bench_one(n: usize, domain: DataDomain) -> BenchRow {
    let spec = register_family(n);
    let t = Instant::now();
    let pg = build_parity_game(&spec, domain);
    let build = t.elapsed();
    let t = Instant::now();
    let sol = solve_parity(&pg.game);
    let solve = t.elapsed();
    BenchRow { registers: n, domain, winner: sol.winner[pg.game.initial], stats: pg.stats, build, solve }
}

/// Vertex-count ratios between consecutive rows of one domain.
pub fn growth_factors(rows: &[BenchRow], domain: DataDomain) -> Vec<f64> {
    let v: Vec<f64> = rows.iter().filter(|r| r.domain == domain).map(|r| r.stats.vertices as f64).collect();
    v.windows(2).map(|w| w[1] / w[0]).collect()
}

pub fn render_report(rows: &[BenchRow]) -> String {
    let mut s = String::from("registers\tdomain\tarena\ttriples\tvertices\tedges\tmax_priority\tbuild_ms\tsolve_ms\twinner\n");
    for r in rows {
        writeln!(
            s,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:?}",
            r.registers,
            r.domain,
            r.stats.arena_vertices,
            r.stats.triples,
            r.stats.vertices,
            r.stats.edges,
            r.stats.max_priority,
            r.build.as_millis(),
            r.solve.as_millis(),
            r.winner
        )
        .unwrap();
    }
    for dom in [DataDomain::Nat, DataDomain::Rat] {
        let f: Vec<String> = growth_factors(rows, dom).iter().map(|x| format!("{x:.1}")).collect();
        writeln!(s, "# growth per register ({dom}): {}", f.join(" ")).unwrap();
    }
    s
}
