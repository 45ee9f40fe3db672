mod config;
mod pipeline;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pipeline::Fatal;

#[derive(Parser)]
#[command(name = "supermap", version, about = "Finite-dimensional modules over map Lie superalgebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Build every module in the config and run its verifications.
    Run {
        config: PathBuf,
        /// Directory for report.json and the per-module artifacts.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the resolved plan without building modules.
    Describe { config: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn load(path: &Path) -> Result<config::RunConfig, Fatal> {
    let text = std::fs::read_to_string(path).map_err(|e| Fatal::Parse(format!("{}: {e}", path.display())))?;
    pipeline::parse_config(&text)
}

fn write_artifacts(dir: &Path, art: &pipeline::Artifacts) -> std::io::Result<()> {
    for (rel, body) in &art.files {
        let path = dir.join(rel);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(path, body)?;
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<bool, Fatal> {
    match &cli.command {
        Command::Describe { config } => {
            let plan = pipeline::describe(&load(config)?)?;
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&plan).expect("serializable")),
                Format::Text => print!("{}", pipeline::describe_text(&plan)),
            }
            Ok(true)
        }
        Command::Run { config, out } => {
            let art = pipeline::run(&load(config)?)?;
            if let Some(dir) = out {
                if let Err(e) = write_artifacts(dir, &art) {
                    eprintln!("cannot write artifacts to {}: {e}", dir.display());
                    return Ok(false);
                }
            }
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&art.report).expect("serializable")),
                Format::Text => print!("{}", art.text),
            }
            Ok(art.passed)
        }
    }
}

fn configure_jobs(jobs: Option<usize>) {
    match jobs {
        Some(1) => supermap::par::set_parallel(false),
        #[cfg(feature = "parallel")]
        Some(n) => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
        _ => {}
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    configure_jobs(cli.jobs);
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.code())
        }
    }
}
