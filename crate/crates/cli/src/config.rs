use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use pil_core::boundary_models::{Angle, BlaschkeProduct, MAX_TABLE};
use pil_core::plaque_engine::{DepthSchedule, Disk, SignatureParams, TowerOptions};
use pil_core::poly_dynamics::{parse_complex, BasinOptions, ClassifyOptions, Polynomial, RootOptions};
use pil_core::Execution;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "pil", version, about = "Signatures of points in plaque inverse limits")]
struct Cli {
    /// Seed for the root finder's initial angles.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Run every data-parallel stage on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Periodic cycles, critical points and basin verdicts.
    Classify(ClassifyArgs),
    /// Plaque tower and index windows along a backward orbit.
    Index(IndexArgs),
    /// Signature estimate from a chain of shrinking rings.
    Signature(SignatureArgs),
    /// Component counts of the pullbacks of a small disk.
    Census(CensusArgs),
    /// Conjugacy of a Blaschke product to z^d on the circle.
    BlaschkeConj(BlaschkeArgs),
    /// Proximity bits of an angle under multiplication by d.
    AngleBits(AngleBitsArgs),
    /// Boundary signature from proximity bits with shrinking epsilon.
    BoundarySig(BoundarySigArgs),
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct ClassifyArgs {
    /// Coefficients in ascending order, e.g. "0,1,1" for z + z^2.
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    /// Largest period searched; degree^period must stay at most 64.
    #[arg(long)]
    max_period: Option<usize>,
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
    #[arg(long, default_value_t = 1e-3)]
    basin_eps: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args, Debug)]
struct OrbitArgs {
    /// Fixed point carrying the invariant lift, or x_1 when --anchor is given.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "cycle")]
    point: Option<String>,
    /// Periodic lift of a cycle, points separated by ';' in forward order.
    #[arg(long, allow_hyphen_values = true)]
    cycle: Option<String>,
    /// Follow the preimage nearest to this point at every step.
    #[arg(long, allow_hyphen_values = true, requires = "point")]
    anchor: Option<String>,
}

#[derive(Args, Debug)]
struct TowerArgs {
    #[arg(long, default_value_t = 512)]
    samples: usize,
    #[arg(long, default_value_t = 4096)]
    max_vertices: usize,
    #[arg(long, default_value_t = 1e-3)]
    guard: f64,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct IndexArgs {
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    #[command(flatten)]
    orbit: OrbitArgs,
    #[arg(long, allow_hyphen_values = true)]
    critical: Option<String>,
    #[arg(long)]
    radius: f64,
    #[arg(long)]
    levels: usize,
    #[command(flatten)]
    tower: TowerArgs,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct SignatureArgs {
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    #[command(flatten)]
    orbit: OrbitArgs,
    #[arg(long, allow_hyphen_values = true)]
    critical: String,
    #[arg(long)]
    radius: f64,
    #[arg(long, default_value_t = 0.5)]
    shrink: f64,
    /// Index of the last ring.
    #[arg(long, default_value_t = 4)]
    rings: usize,
    /// "auto", a single depth, or one depth per ring separated by commas.
    #[arg(long, default_value = "auto")]
    levels: String,
    #[arg(long, default_value_t = 8)]
    min_depth: usize,
    #[command(flatten)]
    tower: TowerArgs,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct CensusArgs {
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    #[command(flatten)]
    orbit: OrbitArgs,
    /// Radius of V_1.
    #[arg(long, default_value_t = 0.8)]
    radius: f64,
    #[arg(long, allow_hyphen_values = true)]
    w_center: String,
    #[arg(long)]
    w_radius: f64,
    #[arg(long)]
    levels: usize,
    #[command(flatten)]
    tower: TowerArgs,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct BlaschkeArgs {
    /// Zeros separated by commas, optionally followed by "@rotation" in turns.
    #[arg(long, allow_hyphen_values = true)]
    product: String,
    #[arg(long, default_value_t = 8)]
    depth: u32,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct AngleBitsArgs {
    /// "p/q", a decimal, or "champernowne2".
    #[arg(long, allow_hyphen_values = true)]
    theta: String,
    #[arg(long, default_value_t = 2)]
    d: u32,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    len: usize,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct BoundarySigArgs {
    #[arg(long, allow_hyphen_values = true)]
    theta: String,
    #[arg(long, default_value_t = 2)]
    d: u32,
    /// epsilon_t = eps0 * 2^-t.
    #[arg(long, default_value_t = 1.0)]
    eps0: f64,
    #[arg(long, default_value_t = 8)]
    steps: usize,
    #[arg(long, default_value_t = 512)]
    len: usize,
}

/// How the backward orbit is chosen.
#[derive(Clone, Debug, PartialEq)]
pub enum OrbitSpec {
    Fixed(Complex64),
    Cycle(Vec<Complex64>),
    Nearest { x1: Complex64, anchor: Complex64 },
}

#[derive(Clone, Debug)]
pub enum Task {
    Classify {
        poly: Polynomial,
        max_period: usize,
        classify: ClassifyOptions,
        basin: BasinOptions,
    },
    Index {
        poly: Polynomial,
        orbit: OrbitSpec,
        critical: Option<Complex64>,
        radius: f64,
        levels: usize,
        tower: TowerOptions,
    },
    Signature {
        poly: Polynomial,
        orbit: OrbitSpec,
        critical: Complex64,
        params: SignatureParams,
    },
    Census {
        poly: Polynomial,
        orbit: OrbitSpec,
        radius: f64,
        w: Disk,
        levels: usize,
        tower: TowerOptions,
    },
    BlaschkeConj {
        product: BlaschkeProduct,
        depth: u32,
    },
    AngleBits {
        theta: Angle,
        d: u32,
        eps: f64,
        len: usize,
    },
    BoundarySig {
        theta: Angle,
        d: u32,
        eps0: f64,
        steps: usize,
        len: usize,
    },
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Classify { .. } => "classify",
            Task::Index { .. } => "index",
            Task::Signature { .. } => "signature",
            Task::Census { .. } => "census",
            Task::BlaschkeConj { .. } => "blaschke-conj",
            Task::AngleBits { .. } => "angle-bits",
            Task::BoundarySig { .. } => "boundary-sig",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub task: Task,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub exec: Execution,
}

impl RunConfig {
    pub fn roots(&self) -> RootOptions {
        RootOptions {
            seed: self.seed,
            ..RootOptions::default()
        }
    }
}

/// Parses and validates argv, including the program name.
///
/// Help and version requests come back as [`CliError::Help`] carrying the
/// rendered text.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            CliError::Help(e.to_string())
        }
        _ => CliError::Usage(e.to_string().trim_end().to_string()),
    })?;
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let roots = RootOptions {
        seed: cli.seed,
        ..RootOptions::default()
    };
    let task = match cli.command {
        Command::Classify(a) => classify_task(a)?,
        Command::Index(a) => {
            let poly = polynomial(&a.poly)?;
            let tower = tower_options(&a.tower, &roots)?;
            positive("--radius", a.radius)?;
            at_least("--levels", a.levels, 1)?;
            Task::Index {
                orbit: orbit_spec(&a.orbit)?,
                critical: a.critical.as_deref().map(|c| complex("--critical", c)).transpose()?,
                poly,
                radius: a.radius,
                levels: a.levels,
                tower,
            }
        }
        Command::Signature(a) => {
            let poly = polynomial(&a.poly)?;
            let rings = a.rings;
            let params = SignatureParams {
                radius: a.radius,
                shrink: a.shrink,
                rings,
                schedule: schedule(&a.levels, rings)?,
                tower: tower_options(&a.tower, &roots)?,
                min_depth: a.min_depth,
                exec,
                ..SignatureParams::default()
            };
            positive("--radius", a.radius)?;
            if !(a.shrink > 0.0 && a.shrink < 1.0) {
                return Err(CliError::usage("--shrink", "must lie in (0, 1)"));
            }
            at_least("--min-depth", a.min_depth, 1)?;
            params.validate().map_err(|e| CliError::usage("signature", e))?;
            Task::Signature {
                orbit: orbit_spec(&a.orbit)?,
                critical: complex("--critical", &a.critical)?,
                poly,
                params,
            }
        }
        Command::Census(a) => {
            let poly = polynomial(&a.poly)?;
            positive("--radius", a.radius)?;
            positive("--w-radius", a.w_radius)?;
            at_least("--levels", a.levels, 1)?;
            let w = Disk::new(complex("--w-center", &a.w_center)?, a.w_radius)
                .map_err(|e| CliError::usage("--w-center", e))?;
            Task::Census {
                orbit: orbit_spec(&a.orbit)?,
                tower: tower_options(&a.tower, &roots)?,
                poly,
                radius: a.radius,
                w,
                levels: a.levels,
            }
        }
        Command::BlaschkeConj(a) => {
            let product: BlaschkeProduct = a.product.parse().map_err(|e| CliError::usage("--product", e))?;
            let size = (product.degree() as u64).checked_pow(a.depth);
            if !size.is_some_and(|s| s <= MAX_TABLE) {
                return Err(CliError::usage("--depth", format!("degree^depth must stay at most {MAX_TABLE}")));
            }
            Task::BlaschkeConj { product, depth: a.depth }
        }
        Command::AngleBits(a) => {
            degree("--d", a.d)?;
            positive("--eps", a.eps)?;
            at_least("--len", a.len, 1)?;
            Task::AngleBits {
                theta: angle(&a.theta)?,
                d: a.d,
                eps: a.eps,
                len: a.len,
            }
        }
        Command::BoundarySig(a) => {
            degree("--d", a.d)?;
            positive("--eps0", a.eps0)?;
            at_least("--steps", a.steps, 2)?;
            at_least("--len", a.len, 1)?;
            Task::BoundarySig {
                theta: angle(&a.theta)?,
                d: a.d,
                eps0: a.eps0,
                steps: a.steps,
                len: a.len,
            }
        }
    };
    Ok(RunConfig {
        task,
        seed: cli.seed,
        out: cli.out,
        format: cli.format,
        exec,
    })
}

fn classify_task(a: ClassifyArgs) -> Result<Task, CliError> {
    let poly = polynomial(&a.poly)?;
    let d = poly.degree();
    let budget = (1..=4usize).take_while(|&q| d.pow(q as u32) <= 64).last().unwrap_or(1);
    let max_period = a.max_period.unwrap_or(budget);
    at_least("--max-period", max_period, 1)?;
    if (d as f64).powi(max_period as i32) > 64.0 {
        return Err(CliError::usage(
            "--max-period",
            format!("degree^period = {d}^{max_period} exceeds 64"),
        ));
    }
    positive("--basin-eps", a.basin_eps)?;
    positive("--tol", a.tol)?;
    at_least("--max-iter", a.max_iter, 1)?;
    Ok(Task::Classify {
        poly,
        max_period,
        classify: ClassifyOptions {
            tol1: a.tol,
            ..ClassifyOptions::default()
        },
        basin: BasinOptions {
            max_iter: a.max_iter,
            eps: a.basin_eps,
            ..BasinOptions::default()
        },
    })
}

fn polynomial(s: &str) -> Result<Polynomial, CliError> {
    s.parse().map_err(|e| CliError::usage("--poly", e))
}

fn complex(flag: &str, s: &str) -> Result<Complex64, CliError> {
    parse_complex(s).map_err(|e| CliError::usage(flag, e))
}

fn angle(s: &str) -> Result<Angle, CliError> {
    s.parse().map_err(|e| CliError::usage("--theta", e))
}

fn positive(flag: &str, x: f64) -> Result<(), CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(CliError::usage(flag, format!("must be positive and finite, got {x}")))
    }
}

fn at_least(flag: &str, x: usize, min: usize) -> Result<(), CliError> {
    if x >= min {
        Ok(())
    } else {
        Err(CliError::usage(flag, format!("must be >= {min}, got {x}")))
    }
}

fn degree(flag: &str, d: u32) -> Result<(), CliError> {
    if d >= 2 {
        Ok(())
    } else {
        Err(CliError::usage(flag, format!("degree must be >= 2, got {d}")))
    }
}

fn orbit_spec(a: &OrbitArgs) -> Result<OrbitSpec, CliError> {
    match (&a.point, &a.cycle, &a.anchor) {
        (Some(p), None, None) => Ok(OrbitSpec::Fixed(complex("--point", p)?)),
        (Some(p), None, Some(anchor)) => Ok(OrbitSpec::Nearest {
            x1: complex("--point", p)?,
            anchor: complex("--anchor", anchor)?,
        }),
        (None, Some(c), None) => {
            let points = c
                .split(';')
                .map(|z| complex("--cycle", z))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(OrbitSpec::Cycle(points))
        }
        _ => Err(CliError::usage("--point", "give either --point [--anchor] or --cycle")),
    }
}

fn tower_options(a: &TowerArgs, roots: &RootOptions) -> Result<TowerOptions, CliError> {
    let mut opts = TowerOptions {
        roots: roots.clone(),
        ..TowerOptions::default()
    };
    opts.lift.samples = a.samples;
    opts.lift.max_vertices = a.max_vertices;
    opts.lift.guard = a.guard;
    opts.lift
        .validate()
        .map_err(|e| CliError::usage("--samples/--max-vertices/--guard", e))?;
    Ok(opts)
}

/// `auto` is `N_j = max(32, ceil(4/r_j))`.
fn schedule(s: &str, rings: usize) -> Result<DepthSchedule, CliError> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("auto") {
        return Ok(DepthSchedule::Parabolic { min: 32, factor: 4.0 });
    }
    let depths = s
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::usage("--levels", format!("expected auto, N or N0,N1,..., got {s:?}")))?;
    if depths.iter().any(|&n| n == 0) {
        return Err(CliError::usage("--levels", "depths must be >= 1"));
    }
    match depths.as_slice() {
        [n] => Ok(DepthSchedule::Fixed { depth: *n }),
        _ if depths.len() == rings + 1 => Ok(DepthSchedule::List { depths }),
        _ => Err(CliError::usage(
            "--levels",
            format!("{} depths given for {} rings", depths.len(), rings + 1),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &str) -> Result<RunConfig, CliError> {
        parse_config(std::iter::once("pil").chain(args.split_whitespace()))
    }

    #[test]
    fn signature_with_auto_levels() {
        let c = parse("signature --poly 0,1,1 --point 0 --critical -0.5 --radius 0.3 --shrink 0.5 --rings 4 --levels auto")
            .unwrap();
        let Task::Signature { params, critical, .. } = c.task else { panic!() };
        assert_eq!(critical, Complex64::new(-0.5, 0.0));
        assert_eq!(params.depths().unwrap(), vec![32, 32, 54, 107, 214]);
    }

    #[test]
    fn angle_bits() {
        let c = parse("angle-bits --theta 1/3 --d 2 --eps 0.5 --len 64").unwrap();
        assert_eq!(c.task.name(), "angle-bits");
    }

    #[test]
    fn rejects_bad_input_naming_the_flag() {
        let e = parse("classify --poly 0,1").unwrap_err();
        assert!(e.to_string().contains("--poly") && e.to_string().contains("degree must be >= 2"));
        assert_eq!(e.exit_code(), 1);
        let e = parse("angle-bits --theta 1/0 --eps 0.5 --len 4").unwrap_err();
        assert!(e.to_string().contains("--theta"));
        let e = parse("signature --poly 0,0,1 --point 0 --critical 0 --radius 0.5 --levels 8,8").unwrap_err();
        assert!(e.to_string().contains("--levels"));
        assert!(parse("census --poly 0,0,1 --point 0 --w-center 0.5 --w-radius -1 --levels 3").is_err());
        assert!(parse("angle-bits --theta 0 --eps 0.5 --len 4 --bogus").is_err());
    }

    #[test]
    fn orbit_forms() {
        let c = parse("index --poly -1,0,1 --cycle 0;-1 --radius 0.1 --levels 4").unwrap();
        let Task::Index { orbit, critical, .. } = c.task else { panic!() };
        assert_eq!(orbit, OrbitSpec::Cycle(vec![Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)]));
        assert_eq!(critical, None);
        assert!(parse("index --poly 0,0,1 --radius 0.1 --levels 4").is_err());
    }

    #[test]
    fn help_is_not_an_error_exit() {
        assert!(matches!(parse("--help"), Err(CliError::Help(_))));
    }
}
