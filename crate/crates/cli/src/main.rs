use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fedosov_lab::{run, Command, Scenario};

#[derive(Parser)]
#[command(name = "fedosov-lab", version, about = "Exact Fedosov star-product checks")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the full check suite on a scenario
    Verify(Common),
    /// Print the C_n(f, g) table
    Star(Common),
    /// Probe the perturbed product against the base one
    Compare(Common),
    /// Print the sigma / kappa / c table, e.g. `coeffs P=32`
    Coeffs {
        /// `P=<n>`
        bound: Option<String>,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the formal Poisson bivector and its Schouten residual
    Poisson(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML); the bundled flat plane scenario if omitted
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long)]
    order: Option<usize>,
    /// Write the check records as JSON
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_bound(b: &str) -> Option<usize> {
    b.strip_prefix("P=").or(b.strip_prefix("p=")).unwrap_or(b).parse().ok()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, scenario, order, out) = match cli.command {
        Cmd::Verify(c) => (Command::Verify, c.scenario, c.order, c.out),
        Cmd::Star(c) => (Command::Star, c.scenario, c.order, c.out),
        Cmd::Compare(c) => (Command::Compare, c.scenario, c.order, c.out),
        Cmd::Poisson(c) => (Command::Poisson, c.scenario, c.order, c.out),
        Cmd::Coeffs { bound, order, out } => {
            let p = match bound.as_deref().map(parse_bound) {
                Some(None) => {
                    eprintln!("error: expected `P=<n>`, got `{}`", bound.unwrap_or_default());
                    return ExitCode::from(2);
                }
                Some(Some(p)) => Some(p),
                None => order,
            };
            (Command::Coeffs, None, Some(p.unwrap_or(8)), out)
        }
    };
    let scenario = match scenario {
        Some(path) => match Scenario::load(&path) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        None => Scenario::default_scenario(),
    };
    let report = match run(cmd, &scenario, order) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    print!("{}", report.to_table());
    if let Some(path) = out {
        if let Err(e) = std::fs::write(&path, report.to_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        for c in report.failures() {
            eprintln!("FAIL {} [{}]: {}", c.anchor, c.scenario_id, c.residual);
        }
        ExitCode::from(1)
    }
}
