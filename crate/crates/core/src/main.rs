use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use varflow::report::{emit_tables, run_workflow, OutputFormat, RunConfig};

#[derive(Parser)]
#[command(name = "varflow", version, about = "Monthly VAR workflow over topic counts and economic indicators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full workflow for every (page, topic, indicator) triple.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `seed` in the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides `out` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_parser = ["csv", "markdown"])]
        format: Option<String>,
        /// Indicator key from the config, or `all`.
        #[arg(long, default_value = "all")]
        indicator: String,
    },
}

fn main() -> ExitCode {
    let Command::Analyze {
        config,
        seed,
        out,
        format,
        indicator,
    } = Cli::parse().command;

    let run = || -> varflow::Result<RunConfig> {
        let mut cfg = RunConfig::load(&config)?;
        cfg.select_indicator(&indicator)?;
        if let Some(s) = seed {
            cfg.seed = s;
        }
        if let Some(o) = out {
            cfg.out = o;
        }
        if let Some(f) = format {
            cfg.format = f.parse::<OutputFormat>()?;
        }
        Ok(cfg)
    };
    let cfg = match run() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let bundle = match run_workflow(&cfg) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit_tables(&bundle, &cfg.out, cfg.format, cfg.settings.alpha) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let failed = bundle.failures();
    eprintln!(
        "{} of {} triples analyzed; report written to {}",
        bundle.triples.len() - failed,
        bundle.triples.len(),
        cfg.out.display()
    );
    for t in bundle.triples.iter().filter(|t| t.result.is_err()) {
        if let Err(e) = &t.result {
            eprintln!("  {} / {} / {}: {e}", t.key.page, t.key.topic, t.key.indicator);
        }
    }
    if failed > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
