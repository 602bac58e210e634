use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use onsager_cli::{execute, CliError, ExperimentConfig, ExperimentKind, Overrides};

/// Reproduce scar experiments on disordered clock chains.
#[derive(Debug, Parser)]
#[command(name = "onsager-scars", version)]
struct Args {
    /// TOML experiment description.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed (overrides the file).
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (overrides the file).
    #[arg(long)]
    out: Option<PathBuf>,
    /// levelstats | ee_scatter | dynamics | closed_form_ee | verify
    #[arg(long)]
    experiment: Option<String>,
    /// Worker threads for parallel sections.
    #[arg(long)]
    threads: Option<usize>,
}

fn load(args: &Args) -> Result<ExperimentConfig, CliError> {
    let experiment = args
        .experiment
        .as_deref()
        .map(ExperimentKind::parse)
        .transpose()?;
    let config = match (&args.config, experiment) {
        (Some(path), _) => ExperimentConfig::load(path)?,
        (None, Some(kind)) => {
            ExperimentConfig::from_toml(&format!("experiment = \"{}\"", kind.name()))?
        }
        (None, None) => return Err(CliError::Config("pass --config or --experiment".into())),
    };
    config.resolve(&Overrides {
        experiment,
        seed: args.seed,
        output: args.out.clone(),
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let args = Args::parse();
    if let Some(k) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
        {
            log::warn!("thread pool already initialized: {e}");
        }
    }
    let outcome = load(&args).and_then(|config| execute(&config));
    match outcome {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let report = serde_json::to_string(&e.report())
                .unwrap_or_else(|_| format!("{{\"message\":{:?}}}", e.to_string()));
            eprintln!("{report}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
