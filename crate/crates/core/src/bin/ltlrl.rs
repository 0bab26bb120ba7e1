use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ltlrl::harness::{cmd_inspect, cmd_train, cmd_verify, ExperimentConfig, TrainOptions};

/// Learn policies for LTL objectives with eventual discounting.
#[derive(Parser)]
#[command(name = "ltlrl", version)]
struct Cli {
    /// Output directory (overrides the config's `experiment.out`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for training cells.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Also write each run's replay contents.
    #[arg(long, global = true)]
    dump_replay: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every (variant, seed) cell of an experiment config.
    Train { config: PathBuf },
    /// Run a property suite: lemma1, theorem1, lcer-equiv, oracle or all.
    Verify { suite: String },
    /// Summarize an automaton and spot-check it against a formula.
    Inspect { ldba: String, formula: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Train { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            let opts = TrainOptions {
                out: cli.out,
                jobs: cli.jobs,
                dump_replay: cli.dump_replay,
            };
            println!("config {} ({})", config.display(), &cfg.hash[..12]);
            let outcome = cmd_train(&cfg, &opts)?;
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            for r in &outcome.records {
                let p = r.final_p_sat.map_or_else(|| "NA".to_string(), |p| format!("{p:.6}"));
                println!(
                    "{:<8} seed {:<3} episodes_to_threshold {:<6} final_p_sat {p}  ({:.2}s)",
                    r.variant.name(),
                    r.seed,
                    r.episodes_to_threshold,
                    r.wall_time.as_secs_f64()
                );
            }
            for (v, m) in outcome.medians() {
                println!("median episodes_to_threshold {}: {m}", v.name());
            }
            println!("wrote {}", outcome.out_dir.display());
            Ok(true)
        }
        Command::Verify { suite } => {
            let (text, ok) = cmd_verify(&suite)?;
            print!("{text}");
            Ok(ok)
        }
        Command::Inspect { ldba, formula } => {
            let report = cmd_inspect(&ldba, &formula)?;
            print!("{}", report.text);
            Ok(report.ok())
        }
    }
}
