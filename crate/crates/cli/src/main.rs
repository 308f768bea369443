use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gestura_core::pipeline::{
    check_corpus, load_knowledge, parse_corpus, run, RunConfig, RunError,
};

/// Constraint-based articulatory synthesis: segment sequences to fully timed
/// gestural scores and articulator trajectories.
#[derive(Parser)]
#[command(name = "gestura", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigOpts {
    /// Directory holding lattice.cfg, params.cfg and inventory.cfg
    /// (built-in defaults when omitted).
    #[arg(long, value_name = "DIR")]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one word and write score.json, trajectory.csv and plot.svg.
    Synthesize {
        /// Segment ids, e.g. `q E b t pp` (quoting optional).
        #[arg(required = true, value_name = "SEGMENT")]
        word: Vec<String>,
        #[command(flatten)]
        config: ConfigOpts,
        /// Trajectory sample rate in Hz.
        #[arg(long, default_value_t = 1000.0, value_name = "HZ")]
        rate: f64,
        /// Output directory.
        #[arg(long, default_value = ".", value_name = "DIR")]
        out: PathBuf,
        /// Emit only the score JSON (flags combine; none means everything).
        #[arg(long)]
        emit_score: bool,
        /// Emit only the trajectory CSV.
        #[arg(long)]
        emit_trajectory: bool,
        /// Emit only the SVG panel plot.
        #[arg(long)]
        emit_plot: bool,
        /// Additionally write the solved per-segment structure as text.
        #[arg(long)]
        explain: bool,
    },
    /// Run a regression corpus and print a pass/fail table.
    CheckCorpus {
        /// Corpus file: `name | segment ids | id=voiced ...` per line.
        #[arg(value_name = "FILE")]
        corpus: PathBuf,
        #[command(flatten)]
        config: ConfigOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Synthesize {
            word,
            config,
            rate,
            out,
            emit_score,
            emit_trajectory,
            emit_plot,
            explain,
        } => {
            let any_emit = emit_score || emit_trajectory || emit_plot;
            let mut cfg = RunConfig {
                sample_rate: rate,
                out_dir: out,
                emit_score: !any_emit || emit_score,
                emit_trajectory: !any_emit || emit_trajectory,
                emit_plot: !any_emit || emit_plot,
                explain,
                ..RunConfig::default()
            };
            if let Some(dir) = &config.config {
                cfg = cfg.with_config_dir(dir);
            }
            let ids: Vec<&str> = word
                .iter()
                .flat_map(|w| w.split_whitespace())
                .collect();
            match run(&ids, &cfg) {
                Ok(outcome) => {
                    for path in &outcome.written {
                        println!("wrote {}", path.display());
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::CheckCorpus { corpus, config } => {
            let mut cfg = RunConfig::default();
            if let Some(dir) = &config.config {
                cfg = cfg.with_config_dir(dir);
            }
            let text = match std::fs::read_to_string(&corpus) {
                Ok(t) => t,
                Err(e) => {
                    return fail(RunError::Io {
                        path: corpus,
                        source: e,
                    })
                }
            };
            let entries = match parse_corpus(&text) {
                Ok(entries) => entries,
                Err(e) => return fail(RunError::Config(e.to_string())),
            };
            let knowledge = match load_knowledge(&cfg) {
                Ok(k) => k,
                Err(e) => return fail(e),
            };
            let rows = match check_corpus(&knowledge, &entries) {
                Ok(rows) => rows,
                Err(e) => return fail(e),
            };
            let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
            println!("{:<width$}  {:<6}  detail", "word", "result");
            let mut all_pass = true;
            for row in &rows {
                all_pass &= row.pass;
                println!(
                    "{:<width$}  {:<6}  {}",
                    row.name,
                    if row.pass { "PASS" } else { "FAIL" },
                    row.detail
                );
            }
            println!(
                "{}/{} words match the transcribed voicing",
                rows.iter().filter(|r| r.pass).count(),
                rows.len()
            );
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn fail(e: RunError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}
