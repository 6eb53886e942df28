//! Command-line front end for `veto-manip`.

pub mod csv_out;
pub mod instance_file;
pub mod presets;

use clap::{Args, Parser, Subcommand};
use presets::{m_grid, CurveDefaults, CurveKind, CurvePreset, HungPreset};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use veto_manip::election::{decide_manipulation, CaseLabel, ManipulationInstance, VetoTarget};
use veto_manip::experiments::{
    self, bound, hard_bound, probability_curve, with_workers, CurvePoint, SweepPoint,
};
use veto_manip::generators::{GeneratorSpec, WeightModel};

pub const EXIT_MANIPULABLE: u8 = 0;
pub const EXIT_NOT_MANIPULABLE: u8 = 1;
pub const EXIT_INPUT_ERROR: u8 = 2;

/// Comma separated values; `a..b` is an inclusive range, `a..b:s` steps by `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumList<T>(pub Vec<T>);

impl<T> FromStr for NumList<T>
where
    T: FromStr + Copy + PartialOrd + std::ops::Add<Output = T> + TryFrom<u8>,
{
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |item: &str| format!("`{item}` is not a number or a..b[:step] range");
        let one = T::try_from(1u8).map_err(|_| "unsupported element type".to_string())?;
        let mut out = Vec::new();
        for item in s.split(',').map(str::trim) {
            if let Some((lo, rest)) = item.split_once("..") {
                let (hi, step) = match rest.split_once(':') {
                    Some((hi, step)) => (hi, step.parse::<T>().map_err(|_| bad(item))?),
                    None => (rest, one),
                };
                let lo: T = lo.parse().map_err(|_| bad(item))?;
                let hi: T = hi.parse().map_err(|_| bad(item))?;
                if !(step > T::try_from(0u8).map_err(|_| bad(item))?) {
                    return Err(format!("`{item}`: step must be positive"));
                }
                let mut v = lo;
                while v <= hi {
                    out.push(v);
                    v = v + step;
                }
            } else {
                out.push(item.parse().map_err(|_| bad(item))?);
            }
        }
        if out.is_empty() {
            return Err("empty list".into());
        }
        Ok(NumList(out))
    }
}

#[derive(Debug, Parser)]
#[command(name = "vetoman", version, about = "Coalition manipulation of weighted veto elections")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide one instance file. Exit 0 = manipulable, 1 = not, 2 = input error.
    Decide {
        /// Instance file (`veto-instance v1` format).
        file: PathBuf,
    },
    /// Probability and cost curves for uniform or normal weights.
    Curve(CurveArgs),
    /// Probability and cost curves for hung elections.
    Hung(HungArgs),
    /// Probability of the hard band for uniform weights.
    Bound(BoundArgs),
    /// Check the solver against brute force on random instances.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Trials per point.
    #[arg(long, default_value_t = experiments::DEFAULT_TRIALS, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    /// Base seed; every random draw derives from it.
    #[arg(long)]
    pub seed: u64,
    /// Worker threads (output does not depend on it).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output CSV path; stdout when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[arg(long, value_enum)]
    pub preset: Option<CurvePreset>,
    #[arg(long, value_enum)]
    pub kind: Option<CurveKind>,
    /// Sincere voter counts.
    #[arg(long)]
    pub n: Option<NumList<u32>>,
    /// Coalition sizes; when absent, m = round(x sqrt(n)) over the x grid.
    #[arg(long)]
    pub m: Option<NumList<u32>>,
    #[arg(long)]
    pub x_step: Option<f64>,
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Weight bounds for uniform weights.
    #[arg(long, conflicts_with = "k_from_m")]
    pub k: Option<NumList<u64>>,
    /// Use k = 2^m (capped at 2^30).
    #[arg(long)]
    pub k_from_m: bool,
    #[arg(long)]
    pub mean: Option<f64>,
    #[arg(long)]
    pub sd: Option<f64>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct HungArgs {
    #[arg(long, value_enum)]
    pub preset: Option<HungPreset>,
    /// Coalition sizes.
    #[arg(long)]
    pub m: Option<NumList<u32>>,
    /// Exponents of the coalition weight bound k = 2^e.
    #[arg(long)]
    pub log2k: Option<NumList<u32>>,
    /// Add one sincere voter with weight uniform on (0, k'].
    #[arg(long)]
    pub one_random: bool,
    /// Exponents of k'; defaults to k' = k.
    #[arg(long, requires = "one_random")]
    pub log2k_prime: Option<NumList<u32>>,
    /// Sincere voter count recorded in the output (metadata only).
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    /// Sincere voter counts.
    #[arg(long)]
    pub n: NumList<u64>,
    /// Coalition size (required unless --critical).
    #[arg(long, required_unless_present = "critical")]
    pub m: Option<u64>,
    /// Weight bound (required unless --critical).
    #[arg(long, required_unless_present = "critical")]
    pub k: Option<f64>,
    /// Use m = ceil(sqrt(n)) and k = 2^m for each n.
    #[arg(long, conflicts_with_all = ["m", "k"])]
    pub critical: bool,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub alpha: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    /// Random instances per check.
    #[arg(long, default_value_t = 2000)]
    pub instances: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        source: instance_file::InstanceFileError,
    },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Experiment(#[from] experiments::ExperimentError),
    #[error(transparent)]
    Bound(#[from] bound::BoundError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn config_error(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

pub fn run(cli: Cli) -> ExitCode {
    let result = match cli.command {
        Command::Decide { file } => cmd_decide(&file),
        Command::Curve(args) => cmd_curve(&args).map(|_| 0),
        Command::Hung(args) => cmd_hung(&args).map(|_| 0),
        Command::Bound(args) => cmd_bound(&args).map(|report| {
            print!("{report}");
            0
        }),
        Command::Selftest(args) => Ok(cmd_selftest(&args)),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT_ERROR)
        }
    }
}

fn target_name(t: VetoTarget) -> &'static str {
    match t {
        VetoTarget::A => "A",
        VetoTarget::B => "B",
    }
}

fn case_name(case: CaseLabel) -> &'static str {
    match case {
        CaseLabel::BothLosersAhead => "both-losers-ahead",
        CaseLabel::OneLoserAhead => "one-loser-ahead",
        CaseLabel::Deficit => "deficit",
    }
}

/// Human-readable decision report for one instance.
pub fn decision_report(instance: &ManipulationInstance) -> (bool, String) {
    let result = decide_manipulation(instance);
    let mut out = String::new();
    let verdict = if result.manipulable { "MANIPULABLE" } else { "NOT MANIPULABLE" };
    writeln!(out, "{verdict}").unwrap();
    writeln!(out, "case: {}", case_name(result.case)).unwrap();
    writeln!(out, "veto to A: {}", result.veto_to_a).unwrap();
    writeln!(out, "veto to B: {}", result.veto_to_b).unwrap();
    let assignment: Vec<String> = instance
        .coalition()
        .iter()
        .zip(&result.assignment)
        .map(|(w, &t)| format!("{w}->{}", target_name(t)))
        .collect();
    writeln!(out, "assignment: {}", assignment.join(" ")).unwrap();
    writeln!(out, "branches: {}", result.stats.branches).unwrap();
    (result.manipulable, out)
}

pub fn cmd_decide(file: &Path) -> Result<u8, CliError> {
    let text = std::fs::read_to_string(file).map_err(|source| CliError::Read {
        path: file.to_path_buf(),
        source,
    })?;
    let instance = instance_file::parse_instance(&text).map_err(|source| CliError::Parse {
        path: file.to_path_buf(),
        source,
    })?;
    let (manipulable, report) = decision_report(&instance);
    print!("{report}");
    Ok(if manipulable { EXIT_MANIPULABLE } else { EXIT_NOT_MANIPULABLE })
}

/// A resolved sweep ready to run.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub base: GeneratorSpec,
    pub sweep: Vec<SweepPoint>,
    /// Deterministic description written to the CSV metadata.
    pub description: String,
}

pub fn curve_plan(args: &CurveArgs) -> Result<Plan, CliError> {
    let d = args.preset.map(CurvePreset::defaults).unwrap_or_default();
    let CurveDefaults {
        kind,
        ns,
        ks,
        k_from_m: preset_k_from_m,
        mean,
        sd,
        x_step,
        x_max,
    } = d;
    let kind = args.kind.unwrap_or(kind);
    let ns = args.n.clone().map_or(ns, |l| l.0);
    let x_step = args.x_step.unwrap_or(x_step);
    let x_max = args.x_max.unwrap_or(x_max);
    if !(x_step > 0.0) || !(x_max >= 0.0) {
        return Err(CliError::Config("x grid needs x-step > 0 and x-max >= 0".into()));
    }
    let k_from_m = args.k_from_m || (preset_k_from_m && args.k.is_none());
    let ks = args.k.clone().map_or(ks, |l| l.0);
    let (mean, sd) = (args.mean.unwrap_or(mean), args.sd.unwrap_or(sd));

    let model = match kind {
        CurveKind::Uniform => WeightModel::Uniform { k: ks[0] },
        CurveKind::Normal => {
            if args.k.is_some() || args.k_from_m {
                return Err(CliError::Config("--k and --k-from-m apply to uniform weights only".into()));
            }
            WeightModel::Normal { mean, sd }
        }
    };
    let base = GeneratorSpec::new(model, ns[0], 0, args.run.seed).map_err(config_error)?;

    let mut sweep = Vec::new();
    for &n in &ns {
        let ms = args.m.clone().map_or_else(|| m_grid(n, x_step, x_max), |l| l.0);
        let ks_here: &[u64] = if kind == CurveKind::Normal || k_from_m { &[0] } else { &ks };
        for &k in ks_here {
            for &m in &ms {
                let mut point = SweepPoint::nm(n, m);
                if kind == CurveKind::Uniform {
                    point = point.with_k(if k_from_m { presets::k_from_m(m) } else { k });
                }
                sweep.push(point);
            }
        }
    }

    let mut description = format!("curve preset={:?} kind={kind:?} n={ns:?}", args.preset);
    match (&args.m, kind) {
        (Some(ms), _) => write!(description, " m={:?}", ms.0).unwrap(),
        (None, _) => write!(description, " x_step={x_step} x_max={x_max}").unwrap(),
    }
    match kind {
        CurveKind::Uniform if k_from_m => description.push_str(" k=2^min(m,30)"),
        CurveKind::Uniform => write!(description, " k={ks:?}").unwrap(),
        CurveKind::Normal => write!(description, " mean={mean} sd={sd}").unwrap(),
    }
    write!(description, " trials={} seed={}", args.run.trials, args.run.seed).unwrap();
    Ok(Plan {
        base,
        sweep,
        description,
    })
}

pub fn hung_plan(args: &HungArgs) -> Result<Plan, CliError> {
    let d = args.preset.map(HungPreset::defaults);
    let ms = args
        .m
        .clone()
        .map(|l| l.0)
        .or_else(|| d.as_ref().map(|d| d.ms.clone()))
        .ok_or_else(|| CliError::Config("hung needs --m or --preset".into()))?;
    let log2ks = args
        .log2k
        .clone()
        .map(|l| l.0)
        .or_else(|| d.as_ref().map(|d| d.log2ks.clone()))
        .ok_or_else(|| CliError::Config("hung needs --log2k or --preset".into()))?;
    let one_random = args.one_random || d.as_ref().is_some_and(|d| d.one_random);
    let log2k_primes = args
        .log2k_prime
        .clone()
        .map(|l| l.0)
        .or_else(|| d.as_ref().and_then(|d| d.log2k_primes.clone()));

    let pow2 = |e: u32| -> Result<u64, CliError> {
        1u64.checked_shl(e)
            .filter(|&k| k <= veto_manip::generators::MAX_WEIGHT_BOUND)
            .ok_or_else(|| CliError::Config(format!("2^{e} exceeds the largest weight bound 2^40")))
    };
    let model = if one_random {
        WeightModel::HungOneRandom { k: 2, k_prime: 2 }
    } else {
        WeightModel::Hung { k: 2 }
    };
    let base = GeneratorSpec::new(model, args.n, ms[0], args.run.seed).map_err(config_error)?;
    let mut sweep = Vec::new();
    for &m in &ms {
        for &e in &log2ks {
            let k = pow2(e)?;
            let point = SweepPoint::m(m).with_k(k);
            if one_random {
                match &log2k_primes {
                    Some(primes) => {
                        for &ep in primes {
                            sweep.push(point.with_k_prime(pow2(ep)?));
                        }
                    }
                    None => sweep.push(point.with_k_prime(k)),
                }
            } else {
                sweep.push(point);
            }
        }
    }
    let description = format!(
        "hung preset={:?} m={ms:?} log2k={log2ks:?} one_random={one_random} log2k_prime={} n={} trials={} seed={}",
        args.preset,
        log2k_primes.map_or("=log2k".to_string(), |p| format!("{p:?}")),
        args.n,
        args.run.trials,
        args.run.seed
    );
    Ok(Plan {
        base,
        sweep,
        description,
    })
}

/// Run a plan and render its CSV.
pub fn execute_plan(plan: &Plan, run: &RunArgs) -> Result<(Vec<CurvePoint>, Vec<u8>), CliError> {
    let points = with_workers(run.workers, || probability_curve(&plan.base, &plan.sweep, run.trials))
        .map_err(config_error)??;
    let bytes = csv_out::render(&points, &plan.description)?;
    Ok((points, bytes))
}

fn emit(bytes: &[u8], out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        }),
        None => std::io::stdout().write_all(bytes).map_err(|source| CliError::Write {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

pub fn cmd_curve(args: &CurveArgs) -> Result<Vec<CurvePoint>, CliError> {
    let plan = curve_plan(args)?;
    let (points, bytes) = execute_plan(&plan, &args.run)?;
    emit(&bytes, args.run.out.as_deref())?;
    Ok(points)
}

pub fn cmd_hung(args: &HungArgs) -> Result<Vec<CurvePoint>, CliError> {
    let plan = hung_plan(args)?;
    let (points, bytes) = execute_plan(&plan, &args.run)?;
    emit(&bytes, args.run.out.as_deref())?;
    Ok(points)
}

pub fn cmd_bound(args: &BoundArgs) -> Result<String, CliError> {
    let mut out = String::new();
    writeln!(
        out,
        "# quadrature: adaptive Gauss-Kronrod 7/15, absolute tolerance {:e} on the band-normalised integral, outer range [0, mean + {} sd]",
        bound::OUTER_TOLERANCE,
        bound::TRUNCATION_SIGMAS
    )
    .unwrap();
    writeln!(out, "m,n,k,alpha,numeric_bound,asymptotic_bound").unwrap();
    for &n in &args.n.0 {
        let (m, k) = if args.critical {
            let m = (n as f64).sqrt().ceil() as u64;
            (m, 2f64.powi(m as i32))
        } else {
            (args.m.unwrap_or(0), args.k.unwrap_or(0.0))
        };
        let b = hard_bound(m, n, k, args.alpha)?;
        writeln!(out, "{m},{n},{k},{},{:e},{:e}", args.alpha, b.numeric, b.asymptotic).unwrap();
    }
    Ok(out)
}

/// Brute-force cross checks; prints one line per check, exit 0 when all pass.
pub fn cmd_selftest(args: &SelftestArgs) -> u8 {
    let checks = selftest_checks(args.instances, args.seed);
    let mut code = 0;
    for (name, passed, detail) in &checks {
        println!("{} {name}: {detail}", if *passed { "PASS" } else { "FAIL" });
        if !passed {
            code = 1;
        }
    }
    code
}

pub fn selftest_checks(instances: u64, seed: u64) -> Vec<(&'static str, bool, String)> {
    use veto_manip::election::brute_force_manipulation;
    use veto_manip::generators::trial_rng;
    use veto_manip::partition::{brute_force_partition, ckk_optimize};
    use rand::Rng;

    let mut partition_mismatch = 0;
    let mut election_mismatch = 0;
    for t in 0..instances {
        let mut rng = trial_rng(seed, t);
        let len = rng.random_range(0..=12usize);
        let numbers: Vec<u64> = (0..len).map(|_| rng.random_range(0..=1024)).collect();
        if ckk_optimize(&numbers).best_difference != brute_force_partition(&numbers).unwrap() {
            partition_mismatch += 1;
        }
        let m = rng.random_range(0..=10usize);
        let coalition: Vec<u64> = (0..m).map(|_| rng.random_range(1..=1024)).collect();
        let spread = 1024 * (m as u64 + 1);
        let (a, b, c) = (
            rng.random_range(0..=spread),
            rng.random_range(0..=spread),
            rng.random_range(0..=spread),
        );
        let instance = ManipulationInstance::new(a, b, c, coalition).unwrap();
        if decide_manipulation(&instance).manipulable != brute_force_manipulation(&instance).unwrap() {
            election_mismatch += 1;
        }
    }
    vec![
        (
            "partition-oracle",
            partition_mismatch == 0,
            format!("{partition_mismatch} mismatches in {instances}"),
        ),
        (
            "manipulation-oracle",
            election_mismatch == 0,
            format!("{election_mismatch} mismatches in {instances}"),
        ),
    ]
}
