//! Monte Carlo estimation of manipulability and search cost.

pub mod bound;
pub mod exec;
pub mod quadrature;
pub mod stats;

pub use bound::{hard_bound, hard_bound_with, BoundConfig, BoundError, HardBound};
pub use exec::{with_workers, Executor};

use crate::election::decide_manipulation;
use crate::generators::{GeneratorError, GeneratorSpec, WeightModel};
use stats::{binomial_halfwidth, sorted_median};
use thiserror::Error;

/// Trials per point used for the published curves.
pub const DEFAULT_TRIALS: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("at least one trial is required")]
    NoTrials,
    #[error("sweep has no points")]
    EmptySweep,
    #[error("sweep point {index} sets {field}, which the {kind} model does not have")]
    InapplicableOverride {
        index: usize,
        field: &'static str,
        kind: &'static str,
    },
    #[error("point {index} has n = 0; m/sqrt(n) is undefined")]
    MissingVoters { index: usize },
    #[error(transparent)]
    Generator(#[from] GeneratorError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TrialOutcome {
    pub manipulable: bool,
    pub branches: u64,
}

/// Aggregate of a batch of trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialSummary {
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub ci_halfwidth: f64,
    pub branch_mean: f64,
    pub branch_median: f64,
    pub branch_max: u64,
}

impl TrialSummary {
    /// Outcomes must be in trial order for the result to be reproducible
    /// bit for bit (the mean is a float sum).
    pub fn from_outcomes(outcomes: &[TrialOutcome]) -> Result<Self, ExperimentError> {
        if outcomes.is_empty() {
            return Err(ExperimentError::NoTrials);
        }
        let trials = outcomes.len() as u64;
        let successes = outcomes.iter().filter(|o| o.manipulable).count() as u64;
        let mut branches: Vec<u64> = outcomes.iter().map(|o| o.branches).collect();
        let branch_mean = branches.iter().map(|&b| b as f64).sum::<f64>() / trials as f64;
        branches.sort_unstable();
        Ok(Self {
            trials,
            successes,
            p_hat: successes as f64 / trials as f64,
            ci_halfwidth: binomial_halfwidth(successes, trials),
            branch_mean,
            branch_median: sorted_median(&branches),
            branch_max: *branches.last().unwrap(),
        })
    }
}

/// Run `trials` trials of an arbitrary experiment and summarise them.
pub fn estimate_with<F>(trials: u64, executor: Executor, trial: F) -> Result<TrialSummary, ExperimentError>
where
    F: Fn(u64) -> TrialOutcome + Sync + Send,
{
    if trials == 0 {
        return Err(ExperimentError::NoTrials);
    }
    TrialSummary::from_outcomes(&executor.run(trials, trial))
}

/// One row of a probability or cost curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub spec: GeneratorSpec,
    pub summary: TrialSummary,
    /// `m / sqrt(n)`, absent when `n = 0`.
    pub x_rescaled: Option<f64>,
}

impl CurvePoint {
    pub fn p_hat(&self) -> f64 {
        self.summary.p_hat
    }
}

pub fn rescaled(m: u32, n: u32) -> Option<f64> {
    (n > 0).then(|| m as f64 / (n as f64).sqrt())
}

fn run_instance(spec: &GeneratorSpec, trial_index: u64) -> TrialOutcome {
    let instance = spec
        .generate(trial_index)
        .expect("generator spec validated before trials start");
    let result = decide_manipulation(&instance);
    TrialOutcome {
        manipulable: result.manipulable,
        branches: result.stats.branches,
    }
}

pub fn estimate_point(spec: &GeneratorSpec, trials: u64) -> Result<CurvePoint, ExperimentError> {
    estimate_point_with(spec, trials, Executor::default())
}

pub fn estimate_point_with(
    spec: &GeneratorSpec,
    trials: u64,
    executor: Executor,
) -> Result<CurvePoint, ExperimentError> {
    spec.validate()?;
    let summary = estimate_with(trials, executor, |t| run_instance(spec, t))?;
    Ok(CurvePoint {
        spec: *spec,
        summary,
        x_rescaled: rescaled(spec.m, spec.n),
    })
}

/// Parameters overridden at one point of a sweep. Unset fields keep the
/// base spec's value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SweepPoint {
    pub n: Option<u32>,
    pub m: Option<u32>,
    pub k: Option<u64>,
    pub k_prime: Option<u64>,
}

impl SweepPoint {
    pub fn m(m: u32) -> Self {
        Self {
            m: Some(m),
            ..Self::default()
        }
    }

    pub fn nm(n: u32, m: u32) -> Self {
        Self {
            n: Some(n),
            m: Some(m),
            ..Self::default()
        }
    }

    pub fn k(k: u64) -> Self {
        Self {
            k: Some(k),
            ..Self::default()
        }
    }

    pub fn with_k(mut self, k: u64) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_k_prime(mut self, k_prime: u64) -> Self {
        self.k_prime = Some(k_prime);
        self
    }

    pub fn apply(&self, base: &GeneratorSpec, index: usize) -> Result<GeneratorSpec, ExperimentError> {
        let mut spec = *base;
        if let Some(n) = self.n {
            spec.n = n;
        }
        if let Some(m) = self.m {
            spec.m = m;
        }
        let inapplicable = |field| ExperimentError::InapplicableOverride {
            index,
            field,
            kind: base.model.kind(),
        };
        if let Some(new_k) = self.k {
            match &mut spec.model {
                WeightModel::Uniform { k } | WeightModel::Hung { k } | WeightModel::HungOneRandom { k, .. } => {
                    *k = new_k
                }
                WeightModel::Normal { .. } => return Err(inapplicable("k")),
            }
        }
        if let Some(new_k_prime) = self.k_prime {
            match &mut spec.model {
                WeightModel::HungOneRandom { k_prime, .. } => *k_prime = new_k_prime,
                _ => return Err(inapplicable("k_prime")),
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// Estimate every point of a sweep. All points share the base seed, so
/// trial `t` at coalition size `m` extends trial `t` at any smaller `m`.
pub fn probability_curve(
    base: &GeneratorSpec,
    sweep: &[SweepPoint],
    trials: u64,
) -> Result<Vec<CurvePoint>, ExperimentError> {
    probability_curve_with(base, sweep, trials, Executor::default())
}

pub fn probability_curve_with(
    base: &GeneratorSpec,
    sweep: &[SweepPoint],
    trials: u64,
    executor: Executor,
) -> Result<Vec<CurvePoint>, ExperimentError> {
    if sweep.is_empty() {
        return Err(ExperimentError::EmptySweep);
    }
    if trials == 0 {
        return Err(ExperimentError::NoTrials);
    }
    let specs = sweep
        .iter()
        .enumerate()
        .map(|(i, p)| p.apply(base, i))
        .collect::<Result<Vec<_>, _>>()?;
    specs
        .iter()
        .map(|spec| estimate_point_with(spec, trials, executor))
        .collect()
}

/// Same rows as [`probability_curve`]; the branch statistics are the
/// quantities of interest.
pub fn cost_curve(
    base: &GeneratorSpec,
    sweep: &[SweepPoint],
    trials: u64,
) -> Result<Vec<CurvePoint>, ExperimentError> {
    probability_curve(base, sweep, trials)
}

/// `1 - (2/3) e^{-x}`.
pub fn universal_form(x: f64) -> f64 {
    1.0 - 2.0 / 3.0 * (-x).exp()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    /// `(m / sqrt(n), p_hat)` per point.
    pub points: Vec<(f64, f64)>,
    pub max_abs_residual: f64,
    pub rms_residual: f64,
}

impl FitReport {
    pub fn from_points(points: Vec<(f64, f64)>) -> Self {
        let (max_abs_residual, rms_residual) = residual_summary(&points);
        Self {
            points,
            max_abs_residual,
            rms_residual,
        }
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.points.iter().map(|&(x, p)| p - universal_form(x)).collect()
    }

    /// Whether the stored residual summary matches the points.
    pub fn is_consistent(&self) -> bool {
        residual_summary(&self.points) == (self.max_abs_residual, self.rms_residual)
    }
}

fn residual_summary(points: &[(f64, f64)]) -> (f64, f64) {
    if points.is_empty() {
        return (0.0, 0.0);
    }
    let residuals = points.iter().map(|&(x, p)| p - universal_form(x));
    let max = residuals.clone().fold(0.0f64, |acc, r| acc.max(r.abs()));
    let rms = (residuals.map(|r| r * r).sum::<f64>() / points.len() as f64).sqrt();
    (max, rms)
}

/// Residuals of measured probabilities against the fixed universal curve.
/// Nothing is fitted.
pub fn fit_universal(points: &[CurvePoint]) -> Result<FitReport, ExperimentError> {
    let xy = points
        .iter()
        .enumerate()
        .map(|(index, p)| {
            p.x_rescaled
                .map(|x| (x, p.summary.p_hat))
                .ok_or(ExperimentError::MissingVoters { index })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FitReport::from_points(xy))
}
