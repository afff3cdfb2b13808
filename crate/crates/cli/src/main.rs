//! `domproof`: checks, translates and generates proofs.
//!
//! Exit codes: 0 accept, 1 reject, 2 parse, input/output or resource errors.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use domproof::cp::check_cp;
use domproof::dominance::{check_dom_mode, Checker, Mode};
use domproof::er::check_er;
use domproof::erpls::check_erpls;
use domproof::format::{self, ParseError};
use domproof::oracle::{self, VarOrder};
use domproof::ordering::gen_lex;
use domproof::symmetry::{asymmetrize, check_q, gen_lex_leader, QRefutation};
use domproof::translate::erpls_to_lindom;
use domproof::{Cnf, LinearSum, Lit, Rejection, Var};

#[derive(Parser)]
#[command(name = "domproof", version, about = "Checkers and translators for ER, CP, ER-PLS and dominance proofs")]
struct Cli {
    /// Print the verdict as one JSON object.
    #[arg(long, global = true)]
    json: bool,
    /// Fixes the fresh-variable counters. Every command is deterministic,
    /// so the value only matters for reproducing a run's command line.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a proof file.
    Check {
        #[command(subcommand)]
        what: CheckCmd,
    },
    /// Translate between proof systems.
    Translate {
        #[command(subcommand)]
        what: TranslateCmd,
    },
    /// Generate encodings.
    Gen {
        #[command(subcommand)]
        what: GenCmd,
    },
    /// Add a lex-leader constraint for every given symmetry, printing DIMACS.
    BreakSymmetry {
        cnf: PathBuf,
        /// Substitution files, one symmetry each.
        #[arg(required = true)]
        symmetries: Vec<PathBuf>,
        #[command(flatten)]
        order: OrderArg,
    },
    /// Check a refutation that adds lex-leader constraints.
    CheckQ {
        file: PathBuf,
        #[arg(long)]
        max_symmetries: Option<usize>,
    },
    /// Brute-force ground truth on small inputs.
    Oracle {
        #[command(subcommand)]
        what: OracleCmd,
    },
    /// Add clauses that leave the formula with no nontrivial symmetry.
    Asymmetrize { cnf: PathBuf },
}

#[derive(Subcommand)]
enum CheckCmd {
    Er { file: PathBuf },
    Cp { file: PathBuf },
    Erpls { file: PathBuf },
    Dom {
        file: PathBuf,
        /// Overrides the mode given in the file.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
}

#[derive(Subcommand)]
enum TranslateCmd {
    /// Compile an ER-PLS refutation into a linear dominance proof.
    ErplsToDom {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// The comparison x1..xr against x(r+1)..x(2r), x1 most significant.
    Lex {
        #[arg(long)]
        bits: usize,
        #[arg(long)]
        strict: bool,
        /// Print the single PB constraint instead of the clauses.
        #[arg(long)]
        pb: bool,
        /// Make x1 the least significant bit.
        #[arg(long)]
        lsb_first: bool,
    },
    /// The lex-leader clauses of one symmetry, in DIMACS.
    LexLeader {
        cnf: PathBuf,
        symmetry: PathBuf,
        #[command(flatten)]
        order: OrderArg,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    Sat { cnf: PathBuf },
    Equisat { a: PathBuf, b: PathBuf },
    /// The lexicographically smallest model.
    Lexmin {
        cnf: PathBuf,
        #[command(flatten)]
        order: OrderArg,
    },
    /// Whether every configuration reached by a dominance proof is valid.
    Valid {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
}

#[derive(Args)]
struct OrderArg {
    /// Variables most significant first; defaults to the formula's variables
    /// in increasing order.
    #[arg(long, value_delimiter = ',')]
    order: Option<Vec<Var>>,
}

impl OrderArg {
    fn resolve(&self, cnf: &Cnf) -> Result<VarOrder, Failure> {
        match &self.order {
            Some(vs) => VarOrder::new(vs.clone()).map_err(|e| Failure::Input(e.to_string())),
            None => Ok(VarOrder::natural(cnf.vars())),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Linear,
    Weak,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Full => Mode::Full,
            ModeArg::Linear => Mode::Linear,
            ModeArg::Weak => Mode::WeakLinear,
        }
    }
}

#[derive(Serialize, Default)]
struct Stats {
    steps: usize,
    cp_steps: usize,
    max_bits: u64,
    wall_ms: f64,
}

#[derive(Serialize)]
struct Verdict {
    status: &'static str,
    step: Option<usize>,
    reason: Option<String>,
    stats: Stats,
}

/// Why a command could not produce a verdict.
enum Failure {
    Parse(PathBuf, ParseError),
    Input(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        Failure::Input(format!("{e:#}"))
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    let mut s = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
    } else {
        s = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    }
    Ok(s)
}

fn load<T>(path: &Path, parse: fn(&str) -> Result<T, ParseError>) -> Result<T, Failure> {
    parse(&read(path)?).map_err(|e| Failure::Parse(path.to_path_buf(), e))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
        }
        _ => {
            std::io::stdout().write_all(text.as_bytes()).context("writing standard output")?;
        }
    }
    Ok(())
}

/// The outcome of a checking command before timing is added.
struct Outcome {
    result: Result<Option<String>, Rejection>,
    stats: Stats,
    /// Printed after the verdict line in plain output.
    extra: Option<String>,
}

impl Outcome {
    fn of(result: Result<Option<String>, Rejection>, stats: Stats) -> Outcome {
        Outcome { result, stats, extra: None }
    }
}

fn oracle_err(e: oracle::OracleError) -> Failure {
    Failure::Input(e.to_string())
}

fn judge(holds: bool, yes: &str, no: &str) -> Result<Option<String>, Rejection> {
    if holds {
        Ok(Some(yes.into()))
    } else {
        Err(Rejection::global(no))
    }
}

fn check(what: &CheckCmd) -> Result<Outcome, Failure> {
    Ok(match what {
        CheckCmd::Er { file } => {
            let pi = load(file, format::parse_er)?;
            let stats = Stats {
                steps: pi.steps.len(),
                ..Stats::default()
            };
            Outcome::of(check_er(&pi).map(|_| None), stats)
        }
        CheckCmd::Cp { file } => {
            let pi = load(file, format::parse_cp)?;
            let mut stats = Stats {
                cp_steps: pi.steps.len(),
                ..Stats::default()
            };
            let result = check_cp(&pi).map(|t| {
                stats.max_bits = t.max_bits;
                None
            });
            Outcome::of(result, stats)
        }
        CheckCmd::Erpls { file } => {
            let p = load(file, format::parse_erpls)?;
            let stats = Stats {
                steps: p.steps.len(),
                ..Stats::default()
            };
            Outcome::of(check_erpls(&p).map(|_| None), stats)
        }
        CheckCmd::Dom { file, mode } => {
            let p = load(file, format::parse_dom)?;
            let mode = mode.map_or(p.mode, Mode::from);
            let mut stats = Stats {
                steps: p.steps.len(),
                cp_steps: p.size() - p.steps.len(),
                ..Stats::default()
            };
            let result = check_dom_mode(&p, mode).map(|t| {
                stats.max_bits = t.max_bits;
                Some(format!("{mode} mode"))
            });
            Outcome::of(result, stats)
        }
    })
}

fn check_q_file(file: &Path, limit: Option<usize>) -> Result<Outcome, Failure> {
    let q: QRefutation = load(file, format::parse_q)?;
    let stats = Stats {
        steps: q.pi.steps.len(),
        ..Stats::default()
    };
    let result = check_q(&q, limit).map(|_| Some(format!("{} symmetries", q.symmetries.len())));
    Ok(Outcome::of(result, stats))
}

fn run_oracle(what: &OracleCmd) -> Result<Outcome, Failure> {
    Ok(match what {
        OracleCmd::Sat { cnf } => {
            let f = load(cnf, format::parse_cnf)?;
            let model = oracle::lex_min_model(&f, &VarOrder::natural(f.vars())).map_err(oracle_err)?;
            let mut out = Outcome::of(judge(model.is_some(), "satisfiable", "unsatisfiable"), Stats::default());
            out.extra = model.map(|m| format::print_assignment(&m));
            out
        }
        OracleCmd::Equisat { a, b } => {
            let (fa, fb) = (load(a, format::parse_cnf)?, load(b, format::parse_cnf)?);
            let same = oracle::equisatisfiable(&fa, &fb).map_err(oracle_err)?;
            Outcome::of(judge(same, "equisatisfiable", "not equisatisfiable"), Stats::default())
        }
        OracleCmd::Lexmin { cnf, order } => {
            let f = load(cnf, format::parse_cnf)?;
            let order = order.resolve(&f)?;
            let model = oracle::lex_min_model(&f, &order).map_err(oracle_err)?;
            let mut out = Outcome::of(judge(model.is_some(), "satisfiable", "unsatisfiable"), Stats::default());
            out.extra = model.map(|m| format::print_assignment(&m));
            out
        }
        OracleCmd::Valid { file, mode } => {
            let p = load(file, format::parse_dom)?;
            let mode = mode.map_or(p.mode, Mode::from);
            let mut ch = Checker::new(p.input.clone(), mode);
            let stats = Stats {
                steps: p.steps.len(),
                ..Stats::default()
            };
            if !oracle::config_valid(ch.config()).map_err(oracle_err)? {
                return Ok(Outcome::of(Err(Rejection::global("the input is unsatisfiable")), stats));
            }
            for (i, step) in p.steps.iter().enumerate() {
                ch.apply_unchecked(step);
                if !oracle::config_valid(ch.config()).map_err(oracle_err)? {
                    let why = format!("the configuration after this {} is not valid", step.rule());
                    return Ok(Outcome::of(Err(Rejection::at(i, why)), stats));
                }
            }
            Outcome::of(Ok(Some("every configuration is valid".into())), stats)
        }
    })
}

fn report(json: bool, out: Outcome, started: Instant) -> ExitCode {
    let mut stats = out.stats;
    stats.wall_ms = started.elapsed().as_secs_f64() * 1000.0;
    let (verdict, code) = match out.result {
        Ok(note) => (
            Verdict {
                status: "accept",
                step: None,
                reason: note,
                stats,
            },
            0,
        ),
        Err(r) => (
            Verdict {
                status: "reject",
                // a global rejection is pinned to the end of the proof
                step: Some(r.step.unwrap_or(stats.steps)),
                reason: Some(r.reason),
                stats,
            },
            1,
        ),
    };
    if json {
        println!("{}", serde_json::to_string(&verdict).expect("verdicts serialize"));
    } else {
        let s = &verdict.stats;
        match (&verdict.reason, verdict.status) {
            (Some(r), "accept") => println!("accept: {r}"),
            (None, _) => println!("accept"),
            (Some(r), _) => println!("reject at step {}: {r}", verdict.step.unwrap()),
        }
        println!(
            "{} steps, {} cp steps, {} max coefficient bits, {:.1} ms",
            s.steps, s.cp_steps, s.max_bits, s.wall_ms
        );
        if let Some(extra) = out.extra {
            println!("{extra}");
        }
    }
    ExitCode::from(code)
}

fn fail(json: bool, f: Failure) -> ExitCode {
    let (status, reason) = match f {
        Failure::Parse(path, e) => ("parse-error", format!("{}: {e}", path.display())),
        Failure::Input(msg) => ("error", msg),
    };
    if json {
        let v = Verdict {
            status,
            step: None,
            reason: Some(reason),
            stats: Stats::default(),
        };
        println!("{}", serde_json::to_string(&v).expect("verdicts serialize"));
    } else {
        eprintln!("{status}: {reason}");
    }
    ExitCode::from(2)
}

/// Commands that print a formula or proof rather than a verdict. A bad
/// input yields `Err(Ok(reason))`, exit 1.
fn produce(cmd: &Cmd) -> Result<Result<(), String>, Failure> {
    match cmd {
        Cmd::Translate {
            what: TranslateCmd::ErplsToDom { file, output },
        } => {
            let p = load(file, format::parse_erpls)?;
            match erpls_to_lindom(&p) {
                Ok(d) => write_out(output.as_deref(), &format::print_dom(&d))?,
                Err(e) => return Ok(Err(e.to_string())),
            }
        }
        Cmd::Gen {
            what: GenCmd::Lex { bits, strict, pb, lsb_first },
        } => {
            if *bits == 0 {
                return Ok(Err("--bits must be at least 1".into()));
            }
            let text = if *pb {
                let mut s = LinearSum::new();
                for i in 0..*bits {
                    let w = BigInt::from(1) << if *lsb_first { i } else { bits - 1 - i };
                    let (x, y) = ((i + 1) as Var, (bits + i + 1) as Var);
                    s.add_lit(w.clone(), Lit::Pos(y)).add_lit(-w, Lit::Pos(x));
                }
                format::print_opb(&[s.ge(i64::from(*strict))].into_iter().collect())
            } else {
                let g = gen_lex(*bits, *strict, !*lsb_first).map_err(|e| Failure::Input(e.to_string()))?;
                format::print_cnf(&g.cnf())
            };
            write_out(None, &text)?;
        }
        Cmd::Gen {
            what: GenCmd::LexLeader { cnf, symmetry, order },
        } => {
            let f = load(cnf, format::parse_cnf)?;
            let omega = load(symmetry, format::parse_subst)?;
            let order = order.resolve(&f)?;
            match gen_lex_leader(&f, &omega, &order) {
                Ok(leader) => write_out(None, &format::print_cnf(&leader))?,
                Err(e) => return Ok(Err(e.to_string())),
            }
        }
        Cmd::BreakSymmetry { cnf, symmetries, order } => {
            let f = load(cnf, format::parse_cnf)?;
            let omegas = symmetries
                .iter()
                .map(|p| load(p, format::parse_subst))
                .collect::<Result<Vec<_>, _>>()?;
            let order = order.resolve(&f)?;
            match QRefutation::leaders_for(&f, &order, &omegas) {
                Ok(leaders) => {
                    let mut out = f.clone();
                    for g in &leaders {
                        out.extend(g.cnf().iter().cloned());
                    }
                    write_out(None, &format::print_cnf(&out))?;
                }
                Err(e) => return Ok(Err(e.to_string())),
            }
        }
        Cmd::Asymmetrize { cnf } => {
            let f = load(cnf, format::parse_cnf)?;
            let (out, _) = asymmetrize(&f);
            write_out(None, &format::print_cnf(&out))?;
        }
        _ => unreachable!("verdict commands are handled separately"),
    }
    Ok(Ok(()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let outcome = match &cli.cmd {
        Cmd::Check { what } => check(what),
        Cmd::CheckQ { file, max_symmetries } => check_q_file(file, *max_symmetries),
        Cmd::Oracle { what } => run_oracle(what),
        other => {
            return match produce(other) {
                Ok(Ok(())) => ExitCode::SUCCESS,
                Ok(Err(reason)) => {
                    eprintln!("reject: {reason}");
                    ExitCode::from(1)
                }
                Err(f) => fail(cli.json, f),
            };
        }
    };
    match outcome {
        Ok(out) => report(cli.json, out, started),
        Err(f) => fail(cli.json, f),
    }
}
