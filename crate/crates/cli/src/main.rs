use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use l2link::TraceSpec;
use l2link_cli::commands::{self, GenerateRequest, DEFAULT_CONDUCTOR};
use l2link_cli::generate::PairKind;
use l2link_cli::{CliError, Options, Outcome, Source};

/// Torsion linking forms and their invariants over Laurent polynomial rings.
#[derive(Parser)]
#[command(name = "l2link", version)]
struct Cli {
    /// Cyclotomic conductor N (a multiple of 4) for files that do not set one.
    #[arg(long, global = true, env = "L2LINK_CONDUCTOR", default_value_t = DEFAULT_CONDUCTOR)]
    conductor: u32,
    /// Omit timings so identical inputs give byte-identical output.
    #[arg(long, global = true)]
    deterministic: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Free rank and torsion blocks of every homology group.
    Homology { file: String },
    /// Linking form invariants at the support points of the middle degree.
    Invariants {
        file: String,
        /// Also report capacities or the torsion signature under this trace.
        #[arg(long, value_parser = parse_trace)]
        trace: Option<TraceSpec>,
        /// Restrict to the point zeta_N^a.
        #[arg(long, conflicts_with = "all_points")]
        point: Option<i64>,
        /// Report every support point (the default).
        #[arg(long)]
        all_points: bool,
    },
    /// Capacities, signatures and metabolizers of block forms.
    Blocks { file: String },
    /// Spectral densities of a stepped circle module.
    Circle { file: String },
    /// Compare the induced form of a boundary pair with its discriminant form.
    PairVerify { file: String },
    /// Print a ready-to-run input file.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Run built-in consistency checks.
    Selftest,
}

#[derive(Subcommand)]
enum GenerateKind {
    /// The circle complex.
    Circle,
    /// A presentation synthesized from blocks such as `2+,1-,1+x3`.
    Blocks {
        blocks: String,
        #[arg(long, default_value_t = 0)]
        point: i64,
        #[arg(long, default_value_t = 0)]
        q: u32,
        /// Scramble by random unimodular changes of basis from this seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// A boundary pair whose induced form matches its discriminant form.
    Pair {
        #[arg(long, value_enum, default_value_t = PairChoice::Mixed)]
        kind: PairChoice,
        /// Shorthand for `--kind metabolic`.
        #[arg(long)]
        metabolic: bool,
        #[arg(long, default_value_t = 0)]
        q: u32,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PairChoice {
    Metabolic,
    Zero,
    Mixed,
}

fn parse_trace(s: &str) -> Result<TraceSpec, String> {
    s.parse().map_err(|e: l2link::Error| e.to_string())
}

fn run(cli: Cli) -> Result<(Outcome, bool), CliError> {
    let opts = Options {
        conductor: cli.conductor,
        deterministic: cli.deterministic,
    };
    let out = match cli.command {
        Command::Homology { file } => commands::homology(&Source::read(&file)?, &opts)?,
        Command::Invariants {
            file, trace, point, ..
        } => commands::invariants(&Source::read(&file)?, &opts, trace, point)?,
        Command::Blocks { file } => commands::blocks(&Source::read(&file)?, &opts)?,
        Command::Circle { file } => commands::circle(&Source::read(&file)?, &opts)?,
        Command::PairVerify { file } => commands::pair_verify(&Source::read(&file)?, &opts)?,
        Command::Generate { kind } => {
            let req = match kind {
                GenerateKind::Circle => GenerateRequest::Circle,
                GenerateKind::Blocks {
                    blocks,
                    point,
                    q,
                    seed,
                } => GenerateRequest::Blocks {
                    blocks,
                    point,
                    q,
                    seed,
                },
                GenerateKind::Pair {
                    kind,
                    metabolic,
                    q,
                    seed,
                } => GenerateRequest::Pair {
                    kind: match (metabolic, kind) {
                        (true, _) | (_, PairChoice::Metabolic) => PairKind::Metabolic,
                        (_, PairChoice::Zero) => PairKind::Zero,
                        (_, PairChoice::Mixed) => PairKind::Mixed,
                    },
                    q,
                    seed,
                },
            };
            let report = commands::generate_file(&req, &opts)?;
            return Ok((
                Outcome {
                    report,
                    warnings: Vec::new(),
                },
                true,
            ));
        }
        Command::Selftest => {
            let out = commands::selftest(&opts)?;
            let passed = out.report["passed"] == serde_json::json!(true);
            return Ok((out, passed));
        }
    };
    Ok((out, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, passed)) => {
            let text = serde_json::to_string_pretty(&out.report).expect("serializable report");
            if let Err(e) = writeln!(std::io::stdout().lock(), "{}", text) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {}", e);
                    return ExitCode::from(1);
                }
            }
            for w in &out.warnings {
                eprintln!("warning: {}", w);
            }
            if !passed {
                eprintln!("error: selftest failed");
                return ExitCode::from(1);
            }
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(1)
        }
    }
}
