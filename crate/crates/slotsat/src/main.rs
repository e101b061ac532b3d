use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use slotsat::bench::{
    markdown_report, parse_seeds, run_suite, validate_pipeline, write_csv, SuiteBudgets,
    SuiteOptions,
};
use slotsat::dimacs::{parse_dimacs, write_dimacs};
use slotsat::instance_io::{read_instance, write_instance};
use slotsat::result_json::OptimizeRecord;
use slotsat::StdClock;
use slotsat_core::encode::{encode_feasibility, AdjacencyMode, AmoMode, EncodingConfig, SymmetryMode};
use slotsat_core::generator::{generate, ExperimentKind, GeneratorSpec};
use slotsat_core::layout::Structure;
use slotsat_core::optimize::{
    branch_and_bound, deep_enumeration_optimize, warm_start_optimize, BnbConfig, Budget,
    HybridConfig,
};
use slotsat_core::sat::{SolveStatus, Solver, SolverConfig};

#[derive(Parser)]
#[command(name = "slotsat", version, about = "Constrained grid layout via SAT and branch and bound")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random instance.
    Gen {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, default_value = "mixed", value_parser = parse_structure)]
        structure: Structure,
        #[arg(long, default_value_t = 0.15)]
        rho: f64,
        #[arg(long, default_value_t = 0.05)]
        rho_soft: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the feasibility CNF of an instance in DIMACS format.
    Encode {
        instance: PathBuf,
        #[arg(long, default_value = "pairwise", value_parser = parse_amo)]
        amo: AmoMode,
        #[arg(long, default_value = "forbidden_pairs", value_parser = parse_adjacency)]
        adjacency: AdjacencyMode,
        #[arg(long, default_value = "none", value_parser = parse_symmetry)]
        symmetry: SymmetryMode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve a DIMACS CNF file.
    Solve {
        cnf: PathBuf,
        /// Seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long)]
        conflict_limit: Option<u64>,
    },
    /// Minimize the weighted distance objective of an instance.
    Optimize {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Cold)]
        mode: Mode,
        #[arg(long, default_value_t = 75_000)]
        max_samples: usize,
        /// Seconds for the whole run.
        #[arg(long, default_value_t = 60.0)]
        time_limit: f64,
        /// Seconds for the feasibility solve that produces a warm-start hint.
        #[arg(long, default_value_t = 10.0)]
        feas_timeout: f64,
        #[arg(long)]
        node_limit: Option<u64>,
    },
    /// Run an experiment suite and write CSV records.
    Bench {
        #[arg(long, value_parser = parse_kind)]
        suite: ExperimentKind,
        #[arg(long, default_value = "0..10")]
        seeds: String,
        #[arg(long, default_value_t = 10.0)]
        feas_timeout: f64,
        #[arg(long, default_value_t = 60.0)]
        opt_timeout: f64,
        #[arg(long)]
        conflict_limit: Option<u64>,
        #[arg(long)]
        node_limit: Option<u64>,
        #[arg(long, default_value_t = 75_000)]
        max_samples: usize,
        /// Also run the brute-force oracle on instances small enough.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        markdown: Option<PathBuf>,
    },
    /// Check that every method agrees on the five-machine validation instance.
    Validate,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Cold,
    Warm,
    Enum,
}

fn parse_structure(s: &str) -> Result<Structure, String> {
    Structure::parse(s).ok_or_else(|| format!("unknown structure `{s}`"))
}

fn parse_amo(s: &str) -> Result<AmoMode, String> {
    AmoMode::parse(s).ok_or_else(|| format!("unknown at-most-one encoding `{s}`"))
}

fn parse_adjacency(s: &str) -> Result<AdjacencyMode, String> {
    AdjacencyMode::parse(s).ok_or_else(|| format!("unknown adjacency encoding `{s}`"))
}

fn parse_symmetry(s: &str) -> Result<SymmetryMode, String> {
    SymmetryMode::parse(s).ok_or_else(|| format!("unknown symmetry mode `{s}`"))
}

fn parse_kind(s: &str) -> Result<ExperimentKind, String> {
    ExperimentKind::parse(s).ok_or_else(|| format!("unknown suite `{s}`"))
}

fn seconds(s: f64) -> Result<Duration> {
    Duration::try_from_secs_f64(s).with_context(|| format!("invalid duration {s}"))
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Gen { rows, cols, structure, rho, rho_soft, seed, out } => {
            let spec = GeneratorSpec::new(rows, cols, structure, rho, rho_soft, seed);
            let instance = generate(&spec)?;
            match out {
                Some(path) => write_instance(&path, &instance)?,
                None => println!("{}", slotsat::instance_io::instance_to_json(&instance)),
            }
        }
        Command::Encode { instance, amo, adjacency, symmetry, out } => {
            let instance = read_instance(&instance)?;
            let config = EncodingConfig { amo, adjacency, symmetry };
            let (formula, varmap) = encode_feasibility(&instance, &config);
            let mut w = output(out.as_ref())?;
            write_dimacs(&mut w, &formula, Some(&varmap))?;
            w.flush()?;
        }
        Command::Solve { cnf, time_limit, conflict_limit } => {
            let text = fs::read_to_string(&cnf).with_context(|| format!("reading {}", cnf.display()))?;
            let dimacs = parse_dimacs(&text)?;
            let config = SolverConfig {
                time_limit: time_limit.map(seconds).transpose()?,
                conflict_limit,
                ..SolverConfig::default()
            };
            let out = Solver::from_formula(&dimacs.formula, config).solve_with_clock(&[], &StdClock::new());
            let s = out.stats;
            println!(
                "c conflicts {} decisions {} propagations {} restarts {} learned {}",
                s.conflicts, s.decisions, s.propagations, s.restarts, s.learned_count
            );
            match out.status {
                SolveStatus::Sat => {
                    println!("s SATISFIABLE");
                    let model = out.model.expect("SAT outcome carries a model");
                    let lits: Vec<String> = model
                        .values()
                        .iter()
                        .enumerate()
                        .map(|(i, &v)| if v { format!("{}", i + 1) } else { format!("-{}", i + 1) })
                        .collect();
                    println!("v {} 0", lits.join(" "));
                }
                SolveStatus::Unsat => println!("s UNSATISFIABLE"),
                SolveStatus::Unknown(_) => println!("s UNKNOWN"),
            }
        }
        Command::Optimize { instance, mode, max_samples, time_limit, feas_timeout, node_limit } => {
            let instance = read_instance(&instance)?;
            let budget = Budget { time_limit: Some(seconds(time_limit)?), node_limit };
            let config = HybridConfig {
                solver: SolverConfig { time_limit: Some(seconds(feas_timeout)?), ..SolverConfig::default() },
                bnb: BnbConfig { budget, ..BnbConfig::default() },
                ..HybridConfig::default()
            };
            let clock = StdClock::new();
            let (name, result) = match mode {
                Mode::Cold => ("cold", branch_and_bound(&instance, None, &config.bnb, &clock)),
                Mode::Warm => ("warm", warm_start_optimize(&instance, &config, &clock)),
                Mode::Enum => ("enum", deep_enumeration_optimize(&instance, max_samples, &config, &clock)),
            };
            println!("{}", OptimizeRecord::new(name, &result).to_json());
        }
        Command::Bench {
            suite,
            seeds,
            feas_timeout,
            opt_timeout,
            conflict_limit,
            node_limit,
            max_samples,
            oracle,
            out,
            markdown,
        } => {
            let Some(seeds) = parse_seeds(&seeds) else {
                bail!("cannot parse seed list `{seeds}`");
            };
            let options = SuiteOptions {
                budgets: SuiteBudgets {
                    feas_timeout: seconds(feas_timeout)?,
                    opt_timeout: seconds(opt_timeout)?,
                    conflict_limit,
                    node_limit,
                },
                include_oracle: oracle,
                max_samples,
            };
            let records = run_suite(suite, &seeds, &options);
            let file = File::create(&out).with_context(|| format!("creating {}", out.display()))?;
            write_csv(BufWriter::new(file), &records)?;
            if let Some(md) = markdown {
                fs::write(&md, markdown_report(&records)?).with_context(|| format!("writing {}", md.display()))?;
            }
            eprintln!("{} records written to {}", records.len(), out.display());
        }
        Command::Validate => {
            let report = validate_pipeline();
            println!("{report}");
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
