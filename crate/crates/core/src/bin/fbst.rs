use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fbst_cutoff::cli::{execute, Command, Overrides, RunConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Preset {
    InterceptOnly,
    InterceptSlope,
}

#[derive(Debug, Parser)]
#[command(name = "fbst", version, about = "FBST evidence cut-off calibration")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Config file (key = value); defaults to the preset
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "intercept-only")]
    preset: Preset,
    /// Comma-separated sample sizes
    #[arg(long, global = true, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    a: Option<f64>,
    #[arg(long, global = true)]
    b: Option<f64>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    grid_size: Option<usize>,
    /// 1e5 samples per arm instead of 1e6
    #[arg(long, global = true)]
    quick: bool,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// k*, alpha*, beta* for every n
    Table,
    /// alpha, beta and the objective on a k grid for the first n
    Curve,
    /// alpha*, beta* and the objective versus n
    OptimalErrors,
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let config = match &cli.config {
        Some(path) => RunConfig::from_file(path),
        None => Ok(match cli.preset {
            Preset::InterceptOnly => RunConfig::intercept_only(),
            Preset::InterceptSlope => RunConfig::intercept_slope(),
        }),
    };
    let result = config.and_then(|mut config| {
        Overrides {
            n_list: cli.n.clone(),
            n_samples: cli.samples,
            seed: cli.seed,
            a: cli.a,
            b: cli.b,
            output_path: cli.out.clone(),
            grid_size: cli.grid_size,
            quick: cli.quick,
        }
        .apply(&mut config);
        let command = match cli.command {
            Cmd::Table => Command::Table,
            Cmd::Curve => Command::Curve { n: None },
            Cmd::OptimalErrors => Command::OptimalErrors,
        };
        execute(&command, &config)
    });
    match result {
        Ok(path) => {
            println!("{}", path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
