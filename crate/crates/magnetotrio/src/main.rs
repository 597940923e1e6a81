use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use magnetotrio::commands::{self, BracketOptions, FindConfig, FindOptions, SimulateOptions, VerifyOptions};
use magnetotrio_core::jacobi::EomMode;

#[derive(Parser)]
#[command(name = "magnetotrio", version, about = "Planar charges in a uniform magnetic field")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    #[value(name = "paper-literal")]
    PaperLiteral,
    Derived,
}

#[derive(Clone, Copy, ValueEnum)]
#[allow(clippy::upper_case_acronyms)]
enum Config {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
    #[value(name = "III")]
    III,
    #[value(name = "nbody-II")]
    NbodyII,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate a system file and write trajectory, invariants and manifest.
    Simulate {
        system: PathBuf,
        #[arg(long, default_value_t = 10.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-10)]
        rel_tol: f64,
        #[arg(long, default_value_t = 1e-10)]
        abs_tol: f64,
        #[arg(long, default_value_t = 0.1)]
        sample_every: f64,
        /// Integrate in Jacobi variables with the given equations of motion.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Search for rigidly rotating configurations.
    Find {
        system: PathBuf,
        #[arg(long, value_enum)]
        config: Config,
        #[arg(long)]
        grid_min: Option<f64>,
        #[arg(long)]
        grid_max: Option<f64>,
        #[arg(long)]
        grid_points: Option<usize>,
        /// Config I: speed of the third charge.
        #[arg(long)]
        v3: Option<f64>,
        /// Directory for ready-to-simulate system files.
        #[arg(long)]
        emit_states: Option<PathBuf>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Check conserved quantities (and rigidity with --config) along a trajectory.
    Verify {
        system: PathBuf,
        trajectory: PathBuf,
        #[arg(long)]
        config: Option<String>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Finite-difference Poisson brackets at seeded random states.
    Brackets {
        system: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

fn run(cmd: Cmd) -> Result<(), commands::CliError> {
    let out = &mut std::io::stdout().lock();
    match cmd {
        Cmd::Simulate { system, t_end, rel_tol, abs_tol, sample_every, mode, out_dir } => {
            let mode = mode.map(|m| match m {
                Mode::PaperLiteral => EomMode::Literal,
                Mode::Derived => EomMode::Derived,
            });
            let opts = SimulateOptions { system, out_dir, t_end, rel_tol, abs_tol, sample_every, mode };
            commands::simulate(&opts, out)
        }
        Cmd::Find { system, config, grid_min, grid_max, grid_points, v3, emit_states, out_dir } => {
            let config = match config {
                Config::I => FindConfig::I,
                Config::II => FindConfig::II,
                Config::III => FindConfig::III,
                Config::NbodyII => FindConfig::NbodyII,
            };
            let opts = FindOptions { system, out_dir, config, grid_min, grid_max, grid_points, v3, emit_states };
            commands::find(&opts, out)
        }
        Cmd::Verify { system, trajectory, config, tol } => {
            commands::verify(&VerifyOptions { system, trajectory, config, tol }, out)
        }
        Cmd::Brackets { system, samples, seed, tol } => {
            commands::brackets(&BracketOptions { system, samples, seed, tol }, out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // usage errors share the exit code of malformed input
            return ExitCode::from(if e.use_stderr() { commands::EXIT_PARSE as u8 } else { 0 });
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
