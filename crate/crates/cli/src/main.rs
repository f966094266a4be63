use std::path::PathBuf;
use std::process::ExitCode;

use chdisc_cli::commands;
use chdisc_cli::formats::ScanConfig;
use chdisc_cli::pipeline::TurnoverOptions;
use chdisc_cli::scan::{run_scan, write_summary};
use chdisc_cli::{CliError, EXIT_INVALID, EXIT_OK};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "chdisc", version, about = "Quadrangles of bisectors, turnover representations and their characteristic numbers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Certify a quadrangle file (K1, K2, K3) and write <stem>.cert.json.
    CheckQuadrangle {
        input: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Build a turnover representation and write .rep/.cert/.report files.
    Turnover {
        #[arg(long, num_args = 3, value_names = ["N1", "N2", "N3"], required = true)]
        n: Vec<u32>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        bend: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Mesh edge length for the Euler number.
        #[arg(long, default_value_t = 0.1)]
        mesh: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Print the genus/Toledo table and check -3|tau| = 2e + 2chi.
    Gkl {
        #[arg(long)]
        genus: i64,
        #[arg(long, allow_negative_numbers = true)]
        tau: i64,
    },
    /// Render a figure spec to <stem>.svg.
    Figure {
        spec: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run the turnover pipeline over a grid and write summary.json and summary.tsv.
    Scan {
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let mut so = std::io::stdout();
    match cli.cmd {
        Cmd::CheckQuadrangle { input, out } => commands::check_quadrangle(&input, &out, &mut so),
        Cmd::Turnover { n, bend, tol, mesh, seed, out } => {
            let o = TurnoverOptions { n: [n[0], n[1], n[2]], bend, tol, mesh, seed };
            commands::turnover(&o, &out, &mut so)
        }
        Cmd::Gkl { genus, tau } => commands::gkl(genus, tau, &mut so),
        Cmd::Figure { spec, out } => commands::figure(&spec, &out, &mut so).map(|_| EXIT_OK),
        Cmd::Scan { config, out } => {
            let cfg = ScanConfig::load(&config)?;
            let s = run_scan(&cfg, Some(&out))?;
            for w in s.warnings.iter() {
                eprintln!("warning: {w}");
            }
            write_summary(&s, &out)?;
            println!("{} rows, summary in {}", s.rows.len(), out.join("summary.json").display());
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            e.print().ok();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
