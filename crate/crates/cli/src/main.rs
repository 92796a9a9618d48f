use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lognorm_cli::{
    character_report, corpus_fields, corpus_status, oracle_precision, parse_ells, parse_spec, rank_report, run_corpus,
    CliError,
};

#[derive(Parser)]
#[command(name = "lognorm", version, about = "Rank and Galois character of naive cyclotomic norms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for one field: characters, ranks, equality verdict.
    Rank {
        /// `q:<d>`, `bq:<d1>,<d2>`, `cyc:<n>` or `abs:<path>`.
        spec: String,
        #[arg(long)]
        ell: u64,
        /// Cross-check the formula against the explicit kernel computation.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Runs every quadratic field with |d| ≤ dmax (and optionally Q(ζ_n)) at each prime.
    Corpus {
        #[arg(long)]
        dmax: i64,
        #[arg(long, default_value = "2,3,5,7,11,13")]
        ells: String,
        #[arg(long, default_value_t = 0)]
        cyc_max: u64,
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Character decomposition only.
    Character {
        spec: String,
        #[arg(long)]
        ell: u64,
    },
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string(value).map_err(|e| CliError::Other(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    let io = |e: std::io::Error| CliError::Other(e.to_string());
    match cli.command {
        Command::Rank { spec, ell, oracle, precision } => {
            let precision = if oracle { Some(oracle_precision(precision)?) } else { None };
            let report = rank_report(&parse_spec(&spec)?, ell, precision)?;
            writeln!(out, "{}", to_json(&report)?).map_err(io)?;
            match report.oracle_agrees() {
                Some(false) if report.tilde_e_oracle.as_ref().is_some_and(|o| o.ambiguous) => {
                    Err(CliError::Ambiguous(format!("{spec} at {ell}: oracle rank ambiguous after retry")))
                }
                Some(false) => Err(CliError::Disagreement(format!("{spec} at {ell}: formula and oracle disagree"))),
                _ => Ok(()),
            }
        }
        Command::Corpus { dmax, ells, cyc_max, oracle, precision, jobs } => {
            let precision = if oracle { Some(oracle_precision(precision)?) } else { None };
            let fields = corpus_fields(dmax, cyc_max)?;
            let run = run_corpus(&fields, &parse_ells(&ells)?, precision, jobs.max(1))?;
            for r in &run.reports {
                match r {
                    Ok(report) => writeln!(out, "{}", to_json(report)?).map_err(io)?,
                    Err(e) => eprintln!("error: {e}"),
                }
            }
            let s = &run.summary;
            eprintln!(
                "fields {}  runs {}  oracle {}  agree {}  disagree {}  ambiguous {}  equality {}  single-place {}  totally-split {}  errors {}",
                s.fields,
                s.runs,
                s.oracle_runs,
                s.agreements,
                s.disagreements,
                s.unresolved_ambiguities,
                s.equality_holds,
                s.single_ell_place,
                s.totally_split,
                s.errors
            );
            corpus_status(s)
        }
        Command::Character { spec, ell } => {
            let report = character_report(&parse_spec(&spec)?, ell)?;
            writeln!(out, "{}", to_json(&report)?).map_err(io)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
