use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use pbc_experiments::{run, ConfigLayer};

/// Runs one experiment and writes CSV tables plus a manifest.
///
/// Settings come from `--config` (TOML, keys named like the flags), then
/// `PBC_*` environment variables, then flags.
#[derive(Parser)]
#[command(name = "pbc", version)]
struct Cli {
    #[arg(long, env = "PBC_CONFIG")]
    config: Option<PathBuf>,
    #[command(flatten)]
    layer: ConfigLayer,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let outcome = cli
        .config
        .as_deref()
        .map_or_else(|| Ok(ConfigLayer::default()), ConfigLayer::from_toml_file)
        .and_then(|file| file.overlay(cli.layer).resolve())
        .and_then(|config| run(&config));
    match outcome {
        Ok(summary) => {
            for t in &summary.tables {
                eprintln!("wrote {} ({} rows)", t.file, t.rows.len());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("pbc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
