//! `symcone`: command-line access to partition-symmetric polymatroid cones.

mod commands;
mod output;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use symcone::cone::DEFAULT_MAX_DIM;
use symcone::families::FamilyTag;
use symcone::partition::Partition;
use symcone::setfn::{GroundSet, SetFunction};
use symcone::verify::SuiteConfig;
use symcone::Error;

use output::{Format, Report};

const MAX_DIM_ENV: &str = "SYMCONE_MAX_DIM";

#[derive(Parser, Debug)]
#[command(name = "symcone", version, about = "Exact computations on partition-symmetric polymatroid cones")]
struct Cli {
    /// Ground set size.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Partition of the ground set, e.g. "1,2|3,4".
    #[arg(long, global = true)]
    partition: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest cone dimension handed to ray enumeration. SYMCONE_MAX_DIM takes precedence.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DIM)]
    max_dim: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the inequality description of the symmetric cone with orbit labels.
    Facets,
    /// Print the facet orbit labels and the number of facets in each orbit.
    Orbits,
    /// Project a set function onto the symmetric subspace.
    Project(FunctionArg),
    /// Enumerate extreme rays with their tight facets.
    Rays,
    /// Test properties of a set function.
    Check(CheckArgs),
    /// Write a function as a nonnegative combination of generators.
    Decompose(DecomposeArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
    /// Print a named family member, e.g. "ukm:2,3,3" or "gap:2,2".
    Family { tag: String },
}

#[derive(Args, Debug)]
struct FunctionArg {
    /// File with `mask value` lines or a JSON value array.
    #[arg(long)]
    function: PathBuf,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    input: FunctionArg,
    #[arg(long)]
    polymatroid: bool,
    #[arg(long)]
    matroid: bool,
    /// Membership in the cone of --partition (the full polymatroid cone without one).
    #[arg(long)]
    membership: bool,
    /// Evaluate the Zhang-Yeung expression.
    #[arg(long)]
    zy: bool,
    /// Elements playing the roles a,b,c,d in the Zhang-Yeung expression.
    #[arg(long, value_delimiter = ',', num_args = 4, default_values_t = [1, 2, 3, 4])]
    roles: Vec<usize>,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    #[command(flatten)]
    input: FunctionArg,
    /// Use the lifting construction instead of the linear program ([1,n-1] only).
    #[arg(long)]
    inductive: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Smaller parameter ranges.
    #[arg(long)]
    quick: bool,
    /// Report zero wall times so repeated runs print identical output.
    #[arg(long)]
    no_timing: bool,
}

/// Failure before any report could be produced: exit code 2.
struct UsageError(String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

fn max_dim(cli: &Cli) -> Result<usize, UsageError> {
    match std::env::var(MAX_DIM_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| usage(format!("{MAX_DIM_ENV}={v:?} is not a number"))),
        Err(_) => Ok(cli.max_dim),
    }
}

/// `--partition` (normalized) or `fallback(n)` from `--n`; both must agree when given.
fn partition(cli: &Cli, n: Option<usize>, fallback: fn(GroundSet) -> Partition) -> Result<Partition, UsageError> {
    let n = match (cli.n, n) {
        (Some(a), Some(b)) if a != b => return Err(usage(format!("--n {a} disagrees with the input size {b}"))),
        (a, b) => a.or(b),
    };
    match &cli.partition {
        Some(s) => {
            let p: Partition = s.parse()?;
            if let Some(n) = n {
                if p.n() != n {
                    return Err(usage(format!("partition {s:?} covers {} elements, expected {n}", p.n())));
                }
            }
            Ok(p.normalized())
        }
        None => match n {
            Some(n) => Ok(fallback(GroundSet::new(n)?)),
            None => Err(usage("give --n or --partition")),
        },
    }
}

fn load(cli: &Cli, arg: &FunctionArg) -> Result<SetFunction, UsageError> {
    let h = commands::read_function(&arg.function)?;
    if let Some(n) = cli.n {
        if n != h.n() {
            return Err(usage(format!("--n {n} disagrees with the function on {} elements", h.n())));
        }
    }
    Ok(h)
}

fn suite(args: &VerifyArgs, cli: &Cli, max_dim: usize) -> SuiteConfig {
    let mut cfg = SuiteConfig { seed: cli.seed, max_dim, ..SuiteConfig::default() };
    if args.quick {
        cfg.psi_n = (2..=5).collect();
        cfg.psi_1n1 = (2..=4).collect();
        cfg.bijection_max_n = 4;
        cfg.gap.truncate(2);
        cfg.isolation_max_n = 4;
        cfg.decompose_samples = 3;
        cfg.decompose_ns = vec![3, 4];
    }
    cfg
}

fn run(cli: &Cli) -> Result<Report, UsageError> {
    let max_dim = max_dim(cli)?;
    Ok(match &cli.command {
        Command::Facets => commands::facets(&partition(cli, None, Partition::whole)?),
        Command::Orbits => commands::orbits(&partition(cli, None, Partition::whole)?),
        Command::Rays => commands::rays(&partition(cli, None, Partition::whole)?, max_dim)?,
        Command::Project(arg) => {
            let h = load(cli, arg)?;
            commands::project(&h, &partition(cli, Some(h.n()), Partition::whole)?)?
        }
        Command::Check(args) => {
            let h = load(cli, &args.input)?;
            let roles: [usize; 4] = args.roles.as_slice().try_into().map_err(|_| usage("--roles takes four elements"))?;
            let any = args.polymatroid || args.matroid || args.membership || args.zy;
            let checks = commands::Checks {
                polymatroid: args.polymatroid || !any,
                matroid: args.matroid,
                membership: if args.membership {
                    Some(partition(cli, Some(h.n()), Partition::singletons)?)
                } else {
                    None
                },
                zy: args.zy.then_some(roles),
            };
            commands::check(&h, &checks)?
        }
        Command::Decompose(args) => {
            let h = load(cli, &args.input)?;
            let p = match &cli.partition {
                Some(_) => Some(partition(cli, Some(h.n()), Partition::whole)?),
                None => None,
            };
            commands::decompose(&h, p.as_ref(), args.inductive, max_dim)?
        }
        Command::Verify(args) => commands::verify(&suite(args, cli, max_dim), !args.no_timing),
        Command::Family { tag } => commands::family(&tag.parse::<FamilyTag>()?)?,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let mut out = io::stdout().lock();
            if let Err(e) = report.write(cli.format, &mut out).and_then(|()| out.flush()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
