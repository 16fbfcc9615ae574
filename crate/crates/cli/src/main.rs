use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod exit;

use exit::Failure;

#[derive(Parser)]
#[command(
    name = "semsnap",
    version,
    about = "Find and repair semantic relations between the views of a chart canvas"
)]
struct Cli {
    /// TOML file with scoring weights and the differentiate palette.
    #[arg(long, global = true, env = "SEMSNAP_CONFIG")]
    config: Option<PathBuf>,
    /// Print nothing on success.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Report relations; exits 1 when any are found.
    Lint {
        canvas: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Count relations that still wait on a confirmation.
        #[arg(long)]
        fail_on_conditional: bool,
    },
    /// List the operations offered for one view.
    Ops {
        canvas: PathBuf,
        #[arg(long)]
        view: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Apply an operation by id and write the result.
    Apply {
        canvas: PathBuf,
        #[arg(long = "op")]
        op: String,
        /// Answer a confirmation, e.g. "sum(Europe)=sum(North America):same".
        #[arg(long = "confirm")]
        confirm: Vec<String>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write one render spec per view plus an index.
    Render {
        canvas: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Host the editing session over HTTP.
    Serve {
        canvas: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Directory of the built UI bundle, served at `/`.
        #[arg(long)]
        ui: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let config = commands::load_config(cli.config.as_deref())?;
    let out = commands::Output { quiet: cli.quiet };
    match cli.command {
        Command::Lint {
            canvas,
            format,
            fail_on_conditional,
        } => commands::lint(&canvas, format, fail_on_conditional, &out),
        Command::Ops { canvas, view, format } => commands::ops(&canvas, &view, format, &config, &out),
        Command::Apply {
            canvas,
            op,
            confirm,
            output,
        } => commands::apply(&canvas, &op, &confirm, &output, &config, &out),
        Command::Render { canvas, output } => commands::render(&canvas, &output, &out),
        Command::Serve { canvas, port, host, ui } => commands::serve(&canvas, (host, port).into(), ui, config, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(exit::USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
