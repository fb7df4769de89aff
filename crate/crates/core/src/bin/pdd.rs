use clap::{Args, Parser, Subcommand, ValueEnum};
use pdd::cli::{bench_dir, parse_document, portfolio_solve, render_table, thread_count, verify, write_document};
use pdd::cli::{Algorithm, Policy};
use pdd::colorcoding::CcConfig;
use pdd::generators::{gen_random, generate, random_spec, GeneratorSpec, RandomParams, ReductionFamily, TreeShape};
use pdd::{Instance, PddError};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pdd", version, about = "Phylogenetic diversity under food-web constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance; prints one JSON record. Exit 0 = yes, 1 = no, 2 = error.
    Solve {
        #[command(flatten)]
        opts: SolveOpts,
        /// Also compute the maximum diversity.
        #[arg(long)]
        optimize: bool,
        /// Print a plain-text line after the record.
        #[arg(long)]
        table: bool,
        file: PathBuf,
    },
    /// Check a claimed solution. Exit 0 when every predicate holds.
    Verify {
        file: PathBuf,
        /// Comma-separated taxon names.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        solution: Vec<String>,
    },
    /// Write a generated instance to stdout.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Taxa for `random`; vertices or elements for the reductions.
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 0.25)]
        density: f64,
        #[arg(long, value_enum, default_value = "random")]
        shape: Shape,
        #[arg(long, default_value_t = 0.5)]
        k_fraction: f64,
        #[arg(long, default_value_t = 0.5)]
        d_fraction: f64,
        #[arg(long, default_value_t = 1)]
        min_weight: u64,
        #[arg(long, default_value_t = 5)]
        max_weight: u64,
        /// Source-problem payload as JSON, overriding the random one.
        #[arg(long)]
        payload: Option<String>,
    },
    /// Solve every instance file in a directory. Workers: PDD_THREADS.
    Bench {
        #[command(flatten)]
        opts: SolveOpts,
        dir: PathBuf,
    },
}

#[derive(Args)]
struct SolveOpts {
    #[arg(long, default_value = "auto")]
    algorithm: Algorithm,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// Largest estimated cost a specialized solver may have.
    #[arg(long, default_value_t = 1e9)]
    budget: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Mc,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Random,
    VertexCover,
    RedBlueNonblocker,
    SetCover,
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Star,
    Caterpillar,
    Random,
}

impl SolveOpts {
    fn policy(&self) -> Policy {
        let cc = match self.mode {
            ModeArg::Exact => CcConfig { seed: self.seed, ..CcConfig::exact() },
            ModeArg::Mc => CcConfig::monte_carlo(self.seed, self.epsilon),
        };
        Policy { algorithm: self.algorithm, cc, budget: self.budget, ..Policy::default() }
    }
}

fn load(path: &PathBuf) -> Result<Instance, PddError> {
    let text = std::fs::read_to_string(path).map_err(|e| PddError::Domain(format!("{}: {e}", path.display())))?;
    parse_document(&text)
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("records serialize")
}

fn run(cli: Cli) -> Result<ExitCode, PddError> {
    match cli.command {
        Command::Solve { opts, optimize, table, file } => {
            let inst = load(&file)?;
            let rec = portfolio_solve(&inst, &opts.policy(), optimize)?;
            println!("{}", json(&rec));
            if table {
                println!("{}", render_table(&[(file, Ok(rec.clone()))]).trim_end());
            }
            Ok(if rec.decision == "yes" { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Verify { file, solution } => {
            let inst = load(&file)?;
            let names: Vec<&str> = solution.iter().map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
            let set = inst.taxa_from_names(&names)?;
            let report = verify(&inst, &set);
            println!("{}", json(&report));
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Gen { family, seed, n, density, shape, k_fraction, d_fraction, min_weight, max_weight, payload } => {
            let reduction = match family {
                Family::Random => None,
                Family::VertexCover => Some(ReductionFamily::VertexCover),
                Family::RedBlueNonblocker => Some(ReductionFamily::RedBlueNonblocker),
                Family::SetCover => Some(ReductionFamily::SetCover),
            };
            let text = match reduction {
                None => {
                    let shape = match shape {
                        Shape::Star => TreeShape::Star,
                        Shape::Caterpillar => TreeShape::Caterpillar,
                        Shape::Random => TreeShape::Random,
                    };
                    let p = RandomParams { n, density, min_weight, max_weight, shape, k_fraction, d_fraction, seed };
                    write_document(&gen_random(&p)?)
                }
                Some(fam) => {
                    let spec: GeneratorSpec = match payload {
                        Some(p) => serde_json::from_str(&p).map_err(|e| PddError::Parse { line: 1, msg: e.to_string() })?,
                        None => random_spec(fam, n, seed)?,
                    };
                    let g = generate(&spec)?;
                    format!("# source: {}\n# contract: {}\n{}", json(&g.spec), g.contract, write_document(&g.instance))
                }
            };
            print!("{text}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { opts, dir } => {
            let rows = bench_dir(&dir, &opts.policy(), thread_count())?;
            for (_, rec) in &rows {
                match rec {
                    Ok(r) => println!("{}", json(r)),
                    Err(e) => println!("{}", json(&serde_json::json!({ "error": e.to_string() }))),
                }
            }
            eprint!("{}", render_table(&rows));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
