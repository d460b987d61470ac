use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rigidkit_cli::commands::{self, AnalyzeOptions, CritInput, GrowthOptions, Output};
use rigidkit_cli::{Failure, EXIT_OK, EXIT_USAGE};
use rigidkit_core::growth::{DEFAULT_N_RADII, DEFAULT_R_MAX, DEFAULT_R_MIN, DEFAULT_STARTS};
use rigidkit_core::{EnergyFamily, DEFAULT_LADDER_TOL, DEFAULT_MAX_K};

/// Rigidity orders of bar-and-joint frameworks.
#[derive(Parser)]
#[command(name = "rigidkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct LadderArgs {
    /// Highest ladder level tried.
    #[arg(long, default_value_t = DEFAULT_MAX_K)]
    max_k: u32,
    /// Relative residual below which a level counts as solvable.
    #[arg(long, default_value_t = DEFAULT_LADDER_TOL)]
    tol: f64,
}

#[derive(Args, Clone)]
struct PinArgs {
    /// Fail instead of relabeling when the leading vertices are degenerate.
    #[arg(long)]
    no_auto_permute: bool,
}

#[derive(Args, Clone)]
struct GrowthArgs {
    #[arg(long, default_value = "harmonic")]
    family: EnergyFamily,
    #[arg(long, default_value_t = DEFAULT_R_MIN)]
    rmin: f64,
    #[arg(long, default_value_t = DEFAULT_R_MAX)]
    rmax: f64,
    /// Number of radii on the geometric grid.
    #[arg(long, default_value_t = DEFAULT_N_RADII)]
    n: usize,
    /// Descents per radius.
    #[arg(long, default_value_t = DEFAULT_STARTS)]
    starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl GrowthArgs {
    fn options(&self) -> GrowthOptions {
        GrowthOptions {
            family: self.family,
            r_min: self.rmin,
            r_max: self.rmax,
            n_radii: self.n,
            starts: self.starts,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate, pin, decompose and order a framework.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        ladder: LadderArgs,
        #[command(flatten)]
        pin: PinArgs,
        /// Also fit the energy growth order.
        #[arg(long)]
        growth: bool,
        #[command(flatten)]
        growth_args: GrowthArgs,
        /// Exit with status 2 unless the verdict is this order.
        #[arg(long)]
        expect: Option<u32>,
        /// Leave wall-clock timings out of the report.
        #[arg(long)]
        no_timings: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run the flex ladder and print residuals and witness coefficients.
    Order {
        file: PathBuf,
        #[command(flatten)]
        ladder: LadderArgs,
        #[command(flatten)]
        pin: PinArgs,
        #[arg(long)]
        json: bool,
    },
    /// Fit the growth order of an energy from minima on shrinking spheres.
    Growth {
        file: PathBuf,
        #[command(flatten)]
        growth: GrowthArgs,
        #[command(flatten)]
        pin: PinArgs,
        /// Write the (r, m(r)) table here instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Taylor coefficients of an energy along a trajectory, as CSV.
    Energy {
        file: PathBuf,
        #[arg(long, default_value = "harmonic")]
        family: EnergyFamily,
        /// Trajectory JSON ({"coeffs": [[..], ..]} in pinned coordinates, or
        /// the output of `order --json`); defaults to the ladder witness.
        #[arg(long)]
        traj: Option<PathBuf>,
        /// Highest coefficient computed.
        #[arg(long)]
        order: Option<usize>,
        #[command(flatten)]
        pin: PinArgs,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Classify the critical point of a polynomial, or of a framework
    /// energy at its rest configuration, by its order-2k coefficient.
    Critpoint {
        /// Framework file (omit when using --poly).
        file: Option<PathBuf>,
        /// Polynomial as a monomial list [{"exps": [..], "coef": r}, ..].
        #[arg(long, conflicts_with = "file")]
        poly: Option<PathBuf>,
        #[arg(long, default_value = "harmonic")]
        family: EnergyFamily,
        /// k of the order-2k test (2 is the fourth derivative test).
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 64)]
        starts: usize,
        #[command(flatten)]
        pin: PinArgs,
    },
    /// Recompute the bundled corpus orders and compare with the known ones.
    CorpusVerify {
        /// Read `<name>.json` files from this directory instead.
        #[arg(long)]
        dir: Option<PathBuf>,
        #[command(flatten)]
        ladder: LadderArgs,
        #[arg(long)]
        json: bool,
    },
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("RIGIDKIT_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::usage(format!("RIGIDKIT_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::usage(e.to_string()))
}

fn run(cli: Cli) -> Result<Output, Failure> {
    configure_threads()?;
    match cli.command {
        Command::Analyze {
            file,
            ladder,
            pin,
            growth,
            growth_args,
            expect,
            no_timings,
            json,
        } => {
            let opts = AnalyzeOptions {
                max_k: ladder.max_k,
                tol: ladder.tol,
                auto_permute: !pin.no_auto_permute,
                growth: growth.then(|| growth_args.options()),
                timings: !no_timings,
            };
            commands::cmd_analyze(&file, &opts, json, expect)
        }
        Command::Order { file, ladder, pin, json } => {
            commands::cmd_order(&file, ladder.max_k, ladder.tol, !pin.no_auto_permute, json)
        }
        Command::Growth {
            file,
            growth,
            pin,
            csv,
            json,
        } => commands::cmd_growth(&file, &growth.options(), !pin.no_auto_permute, csv.as_deref(), json),
        Command::Energy {
            file,
            family,
            traj,
            order,
            pin,
            csv,
        } => commands::cmd_energy(&file, family, traj.as_deref(), order, !pin.no_auto_permute, csv.as_deref()),
        Command::Critpoint {
            file,
            poly,
            family,
            order,
            tol,
            starts,
            pin,
        } => {
            let input = match (poly, file) {
                (Some(p), _) => CritInput::Polynomial(p),
                (None, Some(path)) => CritInput::Framework {
                    path,
                    family,
                    k: order,
                    auto_permute: !pin.no_auto_permute,
                },
                (None, None) => return Err(Failure::usage("critpoint needs a framework file or --poly")),
            };
            commands::cmd_critpoint(&input, tol, starts)
        }
        Command::CorpusVerify { dir, ladder, json } => {
            commands::cmd_corpus_verify(dir.as_deref(), ladder.max_k, ladder.tol, json)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            ExitCode::from(out.code as u8)
        }
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code as u8)
        }
    }
}
