use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tvd_ehl::harness::{bundled_case, parse_config, run_config, sci6, surface_csv, BUNDLED_CASES};
use tvd_ehl::lfa::smoothing_factor_kappa;
use tvd_ehl::report::SolveStatus;
use tvd_ehl::Error;

#[derive(Parser)]
#[command(name = "tvd-ehl", version, about = "EHL point-contact and linear convection-diffusion multigrid experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the experiment described by a TOML config file.
    Run { config: PathBuf },
    /// Print the smoothing factor of the kappa line relaxation and its surface as CSV.
    Lfa {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        h: f64,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
    },
    /// Run a bundled case.
    Tables {
        #[arg(long)]
        case: String,
    },
}

const EXIT_CONFIG: u8 = 2;
const EXIT_DIVERGED: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::InvalidInput(_) | Error::Unsupported(_) => EXIT_CONFIG,
        Error::Divergence(_) | Error::NonPhysical { .. } => EXIT_DIVERGED,
        _ => 1,
    }
}

fn run_text(text: &str) -> ExitCode {
    let cfg = match parse_config(text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    match run_config(&cfg, text) {
        Ok(out) => {
            for f in &out.files {
                println!("{}", f.display());
            }
            if out.status == SolveStatus::Diverged {
                eprintln!("error: solver diverged");
                return ExitCode::from(EXIT_DIVERGED);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Run { config } => match fs::read_to_string(&config) {
            Ok(text) => run_text(&text),
            Err(e) => {
                eprintln!("error: {}: {e}", config.display());
                ExitCode::from(EXIT_CONFIG)
            }
        },
        Cmd::Tables { case } => match bundled_case(&case) {
            Some(text) => run_text(text),
            None => {
                eprintln!("error: unknown case `{case}`; known: {}", BUNDLED_CASES.join(", "));
                ExitCode::from(EXIT_CONFIG)
            }
        },
        Cmd::Lfa { eps, kappa, h, samples, a } => {
            if !(h > 0.0) {
                eprintln!("error: h must be positive");
                return ExitCode::from(EXIT_CONFIG);
            }
            let (a1, b) = (eps / (h * h), a / h);
            let res = smoothing_factor_kappa(a1, b, kappa, samples).and_then(|r| Ok((r, surface_csv(a1, b, kappa, samples)?)));
            match res {
                Ok((r, csv)) => {
                    println!("# mu {} at theta ({}, {})", sci6(r.mu), sci6(r.argmax.0), sci6(r.argmax.1));
                    print!("{csv}");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(exit_code(&e))
                }
            }
        }
    }
}
