use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regsynth::constraints::prefix::{prefix_consistent, prefix_satisfiable_n};
use regsynth::constraints::text::parse_constraint_file;
use regsynth::constraints::{chain_verdict_n, is_satisfiable_q, is_zero_satisfiable_q};
use regsynth::game::{build_parity_game, solve_parity, solve_report};
use regsynth::model::dot::{game_to_dot, spec_to_dot, transducer_to_dot};
use regsynth::model::dsl::{parse_document, SpecDocument};
use regsynth::model::{DataDomain, OneSidedSpec, Player, RegisterTransducer};
use regsynth::oracle::{self, Mutation, Sizes};
use regsynth::synth::{reduce_ido_to_one_sided, simulate, synthesize, RandomData, Verdict};

mod play;

#[derive(Parser)]
#[command(name = "regsynth", version, about = "Register transducer synthesis over (N, <=) and (Q, <=)")]
struct Cli {
    /// Seed for randomized commands.
    #[arg(long, global = true, env = "REGSYNTH_SEED", default_value_t = oracle::DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Domain {
    Nat,
    Rat,
}

impl From<Domain> for DataDomain {
    fn from(d: Domain) -> Self {
        match d {
            Domain::Nat => DataDomain::Nat,
            Domain::Rat => DataDomain::Rat,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Adam,
    Eve,
}

#[derive(Clone, Copy, ValueEnum)]
enum DotWhat {
    Spec,
    Game,
    Transducer,
}

#[derive(Subcommand)]
enum Command {
    /// Satisfiability of a constraint sequence (exit 0 sat, 1 unsat).
    CheckSat {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "nat")]
        domain: Domain,
        /// Require the all-zero start valuation.
        #[arg(long)]
        zero: bool,
    },
    /// Solve the game and write the winner's artifact (exit 0 realizable, 1 unrealizable).
    Synth {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "nat")]
        domain: Domain,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Build and solve the product game and print the report (exit 0 Eve wins, 1 Adam wins).
    Solve {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "nat")]
        domain: Domain,
        /// Strategy rows to print.
        #[arg(long, default_value_t = 20)]
        rows: usize,
    },
    /// Play against the synthesized strategy in the terminal.
    Play {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "nat")]
        domain: Domain,
        /// The side the human plays.
        #[arg(long, value_enum, default_value = "adam")]
        side: Side,
        /// Use a dumped transducer instead of synthesizing one.
        #[arg(long)]
        transducer: Option<PathBuf>,
    },
    /// Random data against a transducer, one step per line.
    Simulate {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "nat")]
        domain: Domain,
        #[arg(long)]
        transducer: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Graphviz output for a specification, its product game or a transducer dump.
    ExportDot {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "spec")]
        what: DotWhat,
        #[arg(long, value_enum, default_value = "nat")]
        domain: Domain,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized cross-validation suites (exit 1 on any disagreement).
    Oracle {
        /// Cases per suite; the defaults differ per suite.
        #[arg(long)]
        sizes: Option<usize>,
        /// Plant a bug to see a suite fail.
        #[arg(long, value_parser = parse_mutation)]
        mutate: Option<Mutation>,
    },
}

fn parse_mutation(s: &str) -> Result<Mutation, String> {
    s.parse()
}

/// Failure with exit code 2.
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

type Outcome = Result<u8, Fatal>;

fn read(path: &Path) -> Result<String, Fatal> {
    fs::read_to_string(path).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

fn load_spec(path: &Path) -> Result<OneSidedSpec, Fatal> {
    let text = read(path)?;
    match parse_document(&text).map_err(|e| Fatal(format!("{}: {e}", path.display())))? {
        SpecDocument::OneSided(s) => Ok(s),
        SpecDocument::Ido(i) => Ok(reduce_ido_to_one_sided(&i)?),
    }
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "spec".into())
}

fn check_sat(path: &Path, domain: DataDomain, zero: bool) -> Outcome {
    let f = parse_constraint_file(&read(path)?).map_err(|e| Fatal(format!("{}: {e}", path.display())))?;
    let sat = match (f.lasso(), domain) {
        (Some(seq), DataDomain::Nat) => {
            let v = chain_verdict_n(&seq);
            println!("consistent: {}", v.consistent);
            println!("has_inf_decreasing_1w: {}", v.has_inf_decreasing_1w);
            println!("has_trespassing_inf_increasing_1w: {}", v.has_trespassing_inf_increasing_1w);
            println!("c0_all_equal: {}", v.c0_all_equal);
            println!("has_decrease_from_0: {}", v.has_decrease_from_0);
            if zero {
                v.zero_satisfiable()
            } else {
                v.satisfiable()
            }
        }
        (Some(seq), DataDomain::Rat) => {
            println!("consistent: {}", seq.is_consistent());
            if zero {
                is_zero_satisfiable_q(&seq)
            } else {
                is_satisfiable_q(&seq)
            }
        }
        (None, dom) => {
            let p = &f.constraints;
            println!("prefix of length {}", p.len());
            println!("consistent: {}", prefix_consistent(p));
            match dom {
                DataDomain::Nat => prefix_satisfiable_n(p, zero),
                DataDomain::Rat => prefix_consistent(p) && (!zero || p.first().is_none_or(|c| c.start().is_all_equal())),
            }
        }
    };
    let what = if zero { "0-satisfiable" } else { "satisfiable" };
    println!("{} in {domain}", if sat { what.to_string() } else { format!("not {what}") });
    Ok(u8::from(!sat))
}

fn synth(path: &Path, domain: DataDomain, out: &Path) -> Outcome {
    let spec = load_spec(path)?;
    let s = synthesize(&spec, domain);
    let report = solve_report(&s.game, &s.solution, 0);
    print!("{}", report.lines().filter(|l| !l.starts_with("  ")).map(|l| format!("{l}\n")).collect::<String>());
    println!("build: {:.3}s  solve: {:.3}s", s.build_time.as_secs_f64(), s.solve_time.as_secs_f64());
    fs::create_dir_all(out)?;
    let file = |ext: &str| out.join(format!("{}.{domain}.{ext}", stem(path)));
    match &s.verdict {
        Verdict::Realizable(t) => {
            let (dump, dot) = (file("transducer"), file("dot"));
            fs::write(&dump, t.dump())?;
            fs::write(&dot, transducer_to_dot(t))?;
            println!("Realizable: transducer with {} states", t.num_states());
            println!("wrote {} and {}", dump.display(), dot.display());
            Ok(0)
        }
        Verdict::Unrealizable(adam) => {
            let file = file("adam.txt");
            fs::write(&file, adam.summary(&spec))?;
            println!("Unrealizable: Adam strategy with {} nodes, bound {}", adam.graph.nodes.len(), adam.bound);
            println!("wrote {}", file.display());
            Ok(1)
        }
    }
}

fn solve(path: &Path, domain: DataDomain, rows: usize) -> Outcome {
    let spec = load_spec(path)?;
    let pg = build_parity_game(&spec, domain);
    let sol = solve_parity(&pg.game);
    print!("{}", solve_report(&pg, &sol, rows));
    Ok(u8::from(sol.winner[pg.game.initial] == Player::Adam))
}

fn transducer_for(spec: &OneSidedSpec, domain: DataDomain, dump: Option<&Path>) -> Result<Option<RegisterTransducer>, Fatal> {
    if let Some(p) = dump {
        let t = RegisterTransducer::parse_dump(&read(p)?).map_err(|e| Fatal(format!("{}: {e}", p.display())))?;
        if t.registers != spec.registers || t.labels != spec.labels {
            return Err(Fatal("transducer registers or labels differ from the specification".into()));
        }
        return Ok(Some(t));
    }
    Ok(match synthesize(spec, domain).verdict {
        Verdict::Realizable(t) => Some(t),
        Verdict::Unrealizable(_) => None,
    })
}

fn simulate_cmd(path: &Path, domain: DataDomain, dump: Option<&Path>, steps: usize, seed: u64) -> Outcome {
    let spec = load_spec(path)?;
    let Some(t) = transducer_for(&spec, domain, dump)? else {
        println!("Unrealizable in {domain}: no transducer to simulate");
        return Ok(1);
    };
    let mut src = RandomData { rng: ChaCha8Rng::seed_from_u64(seed), domain };
    let trace = simulate(&spec, &t, &mut src, steps);
    println!("step\tdata\ttest\tasgn\tlabel\tstate\tpriority");
    print!("{}", trace.render(&spec));
    Ok(u8::from(!trace.violations.is_empty()))
}

fn export_dot(path: &Path, what: DotWhat, domain: DataDomain, out: Option<&Path>) -> Outcome {
    let dot = match what {
        DotWhat::Transducer => {
            let t = RegisterTransducer::parse_dump(&read(path)?).map_err(|e| Fatal(format!("{}: {e}", path.display())))?;
            transducer_to_dot(&t)
        }
        DotWhat::Spec => spec_to_dot(&load_spec(path)?),
        DotWhat::Game => game_to_dot(&build_parity_game(&load_spec(path)?, domain).game),
    };
    match out {
        Some(p) => fs::write(p, dot)?,
        None => print!("{dot}"),
    }
    Ok(0)
}

fn oracle_cmd(seed: u64, sizes: Option<usize>, mutation: Option<Mutation>) -> Outcome {
    let sizes = sizes.map_or_else(Sizes::default, Sizes::uniform);
    let t = Instant::now();
    let results = oracle::run_all(seed, sizes, mutation);
    println!("seed {seed}");
    print!("{}", oracle::render(&results));
    eprintln!("oracle suites took {:.1}s", t.elapsed().as_secs_f64());
    Ok(u8::from(!results.iter().all(|r| r.passed())))
}

fn play_cmd(path: &Path, domain: DataDomain, side: Side, dump: Option<&Path>) -> Outcome {
    let spec = load_spec(path)?;
    let stdin = io::stdin();
    let mut input = stdin.lock();
    let mut output = io::stdout();
    match side {
        Side::Adam => {
            let Some(t) = transducer_for(&spec, domain, dump)? else {
                println!("Eve has no winning strategy in {domain}; try --side eve");
                return Ok(1);
            };
            play::human_adam(&spec, &t, domain, &mut input, &mut output)?;
        }
        Side::Eve => match synthesize(&spec, domain).verdict {
            Verdict::Unrealizable(adam) => play::human_eve(&spec, adam, &mut input, &mut output)?,
            Verdict::Realizable(_) => {
                println!("Adam has no winning strategy in {domain}; try --side adam");
                return Ok(1);
            }
        },
    }
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::CheckSat { path, domain, zero } => check_sat(&path, domain.into(), zero),
        Command::Synth { path, domain, out } => synth(&path, domain.into(), &out),
        Command::Solve { path, domain, rows } => solve(&path, domain.into(), rows),
        Command::Play { path, domain, side, transducer } => play_cmd(&path, domain.into(), side, transducer.as_deref()),
        Command::Simulate { path, domain, transducer, steps } => {
            simulate_cmd(&path, domain.into(), transducer.as_deref(), steps, cli.seed)
        }
        Command::ExportDot { path, what, domain, out } => export_dot(&path, what, domain.into(), out.as_deref()),
        Command::Oracle { sizes, mutate } => oracle_cmd(cli.seed, sizes, mutate),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(c) => c,
        Err(Fatal(m)) => {
            eprintln!("error: {m}");
            2
        }
    };
    let _ = io::stdout().flush();
    ExitCode::from(code)
}
