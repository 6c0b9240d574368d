//! `latpierce`: decide, optimize and reproduce lattice piercing results.

mod golden;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use latpierce::decision::is_piercing_oracle;
use latpierce::lattice::parse_basis;
use latpierce::periodic::{parse_periodic, search_integer_periodic, verify_periodic, PeriodicSet};
use latpierce::solver::{solve, SolveMode, SolverConfig};
use latpierce::{
    build_funnel, build_funnel_brute, canonicalize, f0, f1, is_piercing, AxisTransform, Error, LatticeBasis, Point,
    RectFamily,
};

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "latpierce", version, about = "Exact piercing lattices for families of axis-parallel rectangles")]
struct Cli {
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "PIERCE_JOBS", default_value_t = 0)]
    jobs: usize,

    #[arg(long, global = true, visible_alias = "report", value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Directory for SVG output.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Svg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Does a lattice pierce every translate of every rectangle?
    Decide {
        #[command(flatten)]
        family: FamilyArg,
        /// `a b c d` (u = (a, b), v = (c, -d)) or `u=(x,y) v=(x,y)`.
        #[arg(long)]
        basis: String,
        /// Also run the brute-force funnel and the maximal-empty-rectangle
        /// oracle and fail on any disagreement.
        #[arg(long, visible_alias = "cross-check")]
        oracle: bool,
    },
    /// Optimal lattices by solving tight 2×2 systems.
    Solve(SolveArgs),
    /// Same as `solve --mode sweep`: sweeps common denominators (integer families).
    Sweep(SolveArgs),
    /// Checks a periodic point set against a family.
    VerifyPeriodic {
        #[command(flatten)]
        family: FamilyArg,
        /// File with `tile <W> <H>` followed by `x y` lines.
        #[arg(long)]
        set: PathBuf,
    },
    /// Exhaustive search for periodic integer point sets on a square torus.
    SearchPeriodic {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        tile: usize,
        #[arg(long)]
        count: usize,
    },
    /// Prints the canonical basis and metrics of a lattice.
    Canonicalize {
        #[arg(long)]
        basis: String,
    },
    /// Recomputes the published optimum and separation ratio for F0 or F1.
    Reproduce {
        #[arg(long, value_enum)]
        target: Target,
    },
}

#[derive(Args, Debug)]
struct FamilyArg {
    /// File of `<w> <h>` lines, or the built-in names `F0` / `F1`.
    #[arg(long)]
    family: String,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    family: FamilyArg,
    /// Enumeration algorithm; `sweep` requires integer dimensions.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Also list every generating basis before deduplication.
    #[arg(long, visible_alias = "no-dedup")]
    all: bool,
    /// Report only the first optimal lattice.
    #[arg(long)]
    first: bool,
    /// Multiply every coefficient cap.
    #[arg(long, default_value_t = 1)]
    bound_multiplier: u32,
    /// Keep the lower area bound at A_min/2 instead of raising it to the incumbent.
    #[arg(long)]
    no_incumbent: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Systems,
    Sweep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    F0,
    F1,
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success = 0,
    Negative = 1,
    Usage = 2,
    Mismatch = 3,
}

pub struct Failure {
    code: Outcome,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: Outcome::Usage, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::usage(e.to_string())
    }
}

/// The family as given, normalized, and the raw → normalized transform.
struct LoadedFamily {
    family: RectFamily,
    to_normal: AxisTransform,
    raw_len: usize,
}

fn load_family(arg: &FamilyArg) -> Result<LoadedFamily, Failure> {
    let builtin = match arg.family.to_ascii_uppercase().as_str() {
        "F0" => Some(f0()),
        "F1" => Some(f1()),
        _ => None,
    };
    if let Some(family) = builtin {
        let raw_len = family.len();
        return Ok(LoadedFamily { family, to_normal: AxisTransform::identity(), raw_len });
    }
    let text = read(Path::new(&arg.family))?;
    let raw = latpierce::family::parse_rects(&text)?;
    let (family, to_normal) = latpierce::normalize_family(&raw)?;
    Ok(LoadedFamily { family, to_normal, raw_len: raw.len() })
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn scale_set(ps: &PeriodicSet, t: &AxisTransform) -> Result<PeriodicSet, Failure> {
    if t.is_identity() {
        return Ok(ps.clone());
    }
    let corner = t.apply(&Point::new(ps.tile_w.clone(), ps.tile_h.clone()));
    Ok(PeriodicSet::new(corner.x, corner.y, ps.points.iter().map(|p| t.apply(p)).collect())?)
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let mut out = Report::new(cli.format, cli.out.clone());
    let outcome = match &cli.command {
        Command::Decide { family, basis, oracle: cross_check } => {
            let lf = load_family(family)?;
            let raw_basis = parse_basis(basis)?;
            let basis = raw_basis.transformed(&lf.to_normal);
            let verdict = is_piercing(&basis, &lf.family)?;
            out.normalization(&lf.family, &lf.to_normal, lf.raw_len);
            out.verdict(&basis, &lf.family, &verdict, &lf.to_normal)?;
            if *cross_check {
                let oracle = is_piercing_oracle(&basis, &lf.family)?;
                let cb = canonicalize(&basis)?;
                let k = lf.family.k();
                let funnel_ok = build_funnel(&cb, k) == build_funnel_brute(&cb, k);
                out.cross_check(oracle, funnel_ok);
                if oracle != verdict.pierced || !funnel_ok {
                    out.finish()?;
                    return Ok(Outcome::Mismatch);
                }
            }
            if verdict.pierced {
                Outcome::Success
            } else {
                Outcome::Negative
            }
        }
        Command::Solve(args) | Command::Sweep(args) => {
            let sweep = match args.mode {
                Some(m) => m == Mode::Sweep,
                None => matches!(cli.command, Command::Sweep(_)),
            };
            let mode = if sweep { SolveMode::DenominatorSweep } else { SolveMode::Systems };
            let lf = load_family(&args.family)?;
            let cfg = SolverConfig {
                mode,
                dedup: !args.all,
                parallelism: cli.jobs,
                emit_all: !args.first,
                bound_multiplier: args.bound_multiplier.max(1),
                incumbent_tightening: !args.no_incumbent,
            };
            let res = solve(&lf.family, &cfg)?;
            out.normalization(&lf.family, &lf.to_normal, lf.raw_len);
            out.solve_result(&res, &lf.to_normal)?;
            Outcome::Success
        }
        Command::VerifyPeriodic { family, set } => {
            let lf = load_family(family)?;
            let ps = scale_set(&parse_periodic(&read(set)?)?, &lf.to_normal)?;
            let v = verify_periodic(&ps, &lf.family);
            out.normalization(&lf.family, &lf.to_normal, lf.raw_len);
            out.periodic_verdict(&ps, &lf.family, &v, &lf.to_normal)?;
            if v.pierced {
                Outcome::Success
            } else {
                Outcome::Negative
            }
        }
        Command::SearchPeriodic { family, tile, count } => {
            let lf = load_family(family)?;
            let sets = search_integer_periodic(&lf.family, *tile, *count)?;
            out.normalization(&lf.family, &lf.to_normal, lf.raw_len);
            out.search_result(&lf.family, *tile, *count, &sets)?;
            if sets.is_empty() {
                Outcome::Negative
            } else {
                Outcome::Success
            }
        }
        Command::Canonicalize { basis } => {
            if cli.format == Format::Svg {
                return Err(Failure::usage("canonicalize supports text and json output only"));
            }
            let b: LatticeBasis = parse_basis(basis)?;
            out.canonical(&b, &canonicalize(&b)?);
            Outcome::Success
        }
        Command::Reproduce { target } => golden::reproduce(*target, cli.jobs, &mut out)?,
    };
    out.finish()?;
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => ExitCode::from(o as u8),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
