//! Seeded random election generators.
//!
//! Every trial draws from its own ChaCha8 stream: the generator is seeded
//! with `seed_from_u64(base_seed)` and switched to stream `trial_index`, so
//! an instance depends only on `(spec, trial_index)` and never on the order
//! in which trials are evaluated. Sincere votes are drawn first and coalition
//! weights after them, which makes the coalition of size `m` a prefix of the
//! coalition of size `m + 1` for the same trial.

use crate::election::{ElectionError, ManipulationInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

/// Recorded in output metadata.
pub const PRNG_DESCRIPTION: &str =
    "ChaCha8Rng (rand_chacha 0.9), seed_from_u64(base_seed), stream = trial_index";

/// Weight bounds above this could overflow coalition or vote totals.
pub const MAX_WEIGHT_BOUND: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("weight bound {name} must be in [1, 2^40], got {value}")]
    WeightBound { name: &'static str, value: u64 },
    #[error("normal weights need a positive finite sd and finite mean, got mean {mean}, sd {sd}")]
    NormalParameters { mean: f64, sd: f64 },
    #[error("generator {called} called with a {kind} spec")]
    WrongKind { called: &'static str, kind: &'static str },
    #[error(transparent)]
    Election(#[from] ElectionError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightModel {
    /// Sincere and coalition weights uniform on `[1, k]`.
    Uniform { k: u64 },
    /// Weights are normal draws rounded to the nearest integer, redrawn
    /// until at least 1.
    Normal { mean: f64, sd: f64 },
    /// All sincere weight on C and `2c = sum(W)`, coalition uniform on `[1, k]`.
    Hung { k: u64 },
    /// A hung election plus one sincere voter with weight uniform on
    /// `[1, k_prime]` vetoing a uniformly random candidate.
    HungOneRandom { k: u64, k_prime: u64 },
}

impl WeightModel {
    pub fn kind(&self) -> &'static str {
        match self {
            WeightModel::Uniform { .. } => "uniform",
            WeightModel::Normal { .. } => "normal",
            WeightModel::Hung { .. } => "hung",
            WeightModel::HungOneRandom { .. } => "hung_one_random",
        }
    }

    pub fn k(&self) -> Option<u64> {
        match *self {
            WeightModel::Uniform { k }
            | WeightModel::Hung { k }
            | WeightModel::HungOneRandom { k, .. } => Some(k),
            WeightModel::Normal { .. } => None,
        }
    }

    pub fn k_prime(&self) -> Option<u64> {
        match *self {
            WeightModel::HungOneRandom { k_prime, .. } => Some(k_prime),
            _ => None,
        }
    }

    pub fn normal_parameters(&self) -> Option<(f64, f64)> {
        match *self {
            WeightModel::Normal { mean, sd } => Some((mean, sd)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub model: WeightModel,
    /// Sincere voters. For the hung models this is metadata only.
    pub n: u32,
    /// Coalition size.
    pub m: u32,
    pub base_seed: u64,
}

fn check_bound(name: &'static str, value: u64) -> Result<(), GeneratorError> {
    if (1..=MAX_WEIGHT_BOUND).contains(&value) {
        Ok(())
    } else {
        Err(GeneratorError::WeightBound { name, value })
    }
}

impl GeneratorSpec {
    pub fn new(model: WeightModel, n: u32, m: u32, base_seed: u64) -> Result<Self, GeneratorError> {
        let spec = Self {
            model,
            n,
            m,
            base_seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), GeneratorError> {
        match self.model {
            WeightModel::Uniform { k } | WeightModel::Hung { k } => check_bound("k", k),
            WeightModel::HungOneRandom { k, k_prime } => {
                check_bound("k", k)?;
                check_bound("k_prime", k_prime)
            }
            WeightModel::Normal { mean, sd } => {
                if mean.is_finite() && sd.is_finite() && sd > 0.0 && mean.abs() < MAX_WEIGHT_BOUND as f64 {
                    Ok(())
                } else {
                    Err(GeneratorError::NormalParameters { mean, sd })
                }
            }
        }
    }

    /// Draw the instance for one trial with whichever generator the model names.
    pub fn generate(&self, trial_index: u64) -> Result<ManipulationInstance, GeneratorError> {
        match self.model {
            WeightModel::Uniform { .. } => gen_uniform(self, trial_index),
            WeightModel::Normal { .. } => gen_normal(self, trial_index),
            WeightModel::Hung { .. } => gen_hung(self, trial_index),
            WeightModel::HungOneRandom { .. } => gen_hung_one_random(self, trial_index),
        }
    }
}

/// The random stream for one trial.
pub fn trial_rng(base_seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(trial_index);
    rng
}

fn wrong_kind(called: &'static str, spec: &GeneratorSpec) -> GeneratorError {
    GeneratorError::WrongKind {
        called,
        kind: spec.model.kind(),
    }
}

/// Sum `n` sincere vetoes, each on a uniformly chosen candidate, into (a, b, c).
fn sincere_totals<R: Rng>(rng: &mut R, n: u32, mut weight: impl FnMut(&mut R) -> u64) -> [u64; 3] {
    let mut totals = [0u64; 3];
    for _ in 0..n {
        let candidate = rng.random_range(0..3usize);
        totals[candidate] += weight(rng);
    }
    totals
}

pub fn gen_uniform(spec: &GeneratorSpec, trial_index: u64) -> Result<ManipulationInstance, GeneratorError> {
    let WeightModel::Uniform { k } = spec.model else {
        return Err(wrong_kind("gen_uniform", spec));
    };
    spec.validate()?;
    let mut rng = trial_rng(spec.base_seed, trial_index);
    let [a, b, c] = sincere_totals(&mut rng, spec.n, |r| r.random_range(1..=k));
    let coalition = (0..spec.m).map(|_| rng.random_range(1..=k)).collect();
    Ok(ManipulationInstance::new(a, b, c, coalition)?.with_voters(spec.n))
}

fn normal_weight<R: Rng>(rng: &mut R, normal: &Normal<f64>) -> u64 {
    loop {
        let x = normal.sample(rng).round();
        if x >= 1.0 {
            return x as u64;
        }
    }
}

pub fn gen_normal(spec: &GeneratorSpec, trial_index: u64) -> Result<ManipulationInstance, GeneratorError> {
    let WeightModel::Normal { mean, sd } = spec.model else {
        return Err(wrong_kind("gen_normal", spec));
    };
    spec.validate()?;
    let normal = Normal::new(mean, sd).map_err(|_| GeneratorError::NormalParameters { mean, sd })?;
    let mut rng = trial_rng(spec.base_seed, trial_index);
    let [a, b, c] = sincere_totals(&mut rng, spec.n, |r| normal_weight(r, &normal));
    let coalition = (0..spec.m).map(|_| normal_weight(&mut rng, &normal)).collect();
    Ok(ManipulationInstance::new(a, b, c, coalition)?.with_voters(spec.n))
}

/// Coalition weights uniform on `[1, k]` with the last weight redrawn until
/// the total is even.
fn hung_coalition<R: Rng>(rng: &mut R, m: u32, k: u64) -> Vec<u64> {
    let mut coalition: Vec<u64> = (0..m).map(|_| rng.random_range(1..=k)).collect();
    if let Some((last, rest)) = coalition.split_last_mut() {
        let rest: u64 = rest.iter().sum();
        // with k = 1 every weight is 1 and no redraw can fix an odd m
        while (rest + *last) % 2 == 1 && k > 1 {
            *last = rng.random_range(1..=k);
        }
    }
    coalition
}

pub fn gen_hung(spec: &GeneratorSpec, trial_index: u64) -> Result<ManipulationInstance, GeneratorError> {
    let WeightModel::Hung { k } = spec.model else {
        return Err(wrong_kind("gen_hung", spec));
    };
    spec.validate()?;
    let mut rng = trial_rng(spec.base_seed, trial_index);
    let coalition = hung_coalition(&mut rng, spec.m, k);
    let c = coalition.iter().sum::<u64>() / 2;
    Ok(ManipulationInstance::new(0, 0, c, coalition)?.with_voters(spec.n))
}

pub fn gen_hung_one_random(
    spec: &GeneratorSpec,
    trial_index: u64,
) -> Result<ManipulationInstance, GeneratorError> {
    let WeightModel::HungOneRandom { k, k_prime } = spec.model else {
        return Err(wrong_kind("gen_hung_one_random", spec));
    };
    spec.validate()?;
    let mut rng = trial_rng(spec.base_seed, trial_index);
    let coalition = hung_coalition(&mut rng, spec.m, k);
    let mut totals = [0, 0, coalition.iter().sum::<u64>() / 2];
    let candidate = rng.random_range(0..3usize);
    totals[candidate] += rng.random_range(1..=k_prime);
    let [a, b, c] = totals;
    Ok(ManipulationInstance::new(a, b, c, coalition)?.with_voters(spec.n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{decide_manipulation, reduce_to_partition};

    fn spec(model: WeightModel, n: u32, m: u32) -> GeneratorSpec {
        GeneratorSpec::new(model, n, m, 0xfeed).unwrap()
    }

    #[test]
    fn uniform_no_voters() {
        let i = gen_uniform(&spec(WeightModel::Uniform { k: 256 }, 0, 0), 3).unwrap();
        assert_eq!((i.a(), i.b(), i.c()), (0, 0, 0));
        assert_eq!(i.m(), 0);
    }

    #[test]
    fn deterministic_per_trial() {
        let models = [
            WeightModel::Uniform { k: 256 },
            WeightModel::Normal { mean: 256.0, sd: 128.0 },
            WeightModel::Hung { k: 1 << 20 },
            WeightModel::HungOneRandom { k: 1 << 20, k_prime: 1 << 10 },
        ];
        for model in models {
            let s = spec(model, 50, 9);
            for t in [0, 1, 99, u64::MAX] {
                assert_eq!(s.generate(t).unwrap(), s.generate(t).unwrap());
            }
            assert_ne!(s.generate(0).unwrap(), s.generate(1).unwrap());
        }
    }

    #[test]
    fn coalition_prefix_coupling() {
        let small = spec(WeightModel::Uniform { k: 256 }, 40, 5).generate(7).unwrap();
        let large = spec(WeightModel::Uniform { k: 256 }, 40, 9).generate(7).unwrap();
        assert_eq!((small.a(), small.b(), small.c()), (large.a(), large.b(), large.c()));
        assert_eq!(small.coalition(), &large.coalition()[..5]);
    }

    #[test]
    fn weights_in_range() {
        let s = spec(WeightModel::Uniform { k: 3 }, 30, 30);
        for t in 0..50 {
            let i = s.generate(t).unwrap();
            assert!(i.coalition().iter().all(|&w| (1..=3).contains(&w)));
            assert!(i.a() + i.b() + i.c() <= 90 && i.a() + i.b() + i.c() >= 30);
        }
    }

    #[test]
    fn normal_rejects_bad_sd() {
        for sd in [0.0, -1.0, f64::NAN] {
            assert!(matches!(
                GeneratorSpec::new(WeightModel::Normal { mean: 256.0, sd }, 1, 1, 0),
                Err(GeneratorError::NormalParameters { .. })
            ));
        }
    }

    #[test]
    fn bounds_validated() {
        assert!(GeneratorSpec::new(WeightModel::Uniform { k: 0 }, 1, 1, 0).is_err());
        assert!(GeneratorSpec::new(WeightModel::HungOneRandom { k: 4, k_prime: 0 }, 1, 1, 0).is_err());
        assert!(GeneratorSpec::new(WeightModel::Hung { k: MAX_WEIGHT_BOUND + 1 }, 1, 1, 0).is_err());
    }

    #[test]
    fn wrong_kind_is_an_error() {
        let s = spec(WeightModel::Hung { k: 8 }, 0, 4);
        assert!(matches!(gen_uniform(&s, 0), Err(GeneratorError::WrongKind { .. })));
    }

    #[test]
    fn hung_is_balanced() {
        for m in [1u32, 2, 3, 7, 20] {
            let s = spec(WeightModel::Hung { k: 1 << 12 }, 100, m);
            for t in 0..200 {
                let i = s.generate(t).unwrap();
                assert_eq!((i.a(), i.b()), (0, 0));
                assert_eq!(2 * i.c(), i.coalition_weight());
            }
        }
    }

    #[test]
    fn hung_two_unit_weights() {
        let i = spec(WeightModel::Hung { k: 1 }, 10, 2).generate(0).unwrap();
        assert_eq!(i.coalition(), &[1, 1]);
        assert_eq!(i.c(), 1);
        assert!(decide_manipulation(&i).manipulable);
    }

    #[test]
    fn one_random_voter_threshold() {
        let s = spec(WeightModel::HungOneRandom { k: 1 << 10, k_prime: 1 << 8 }, 0, 12);
        let mut seen = [false; 3];
        for t in 0..300 {
            let i = s.generate(t).unwrap();
            let half = i.coalition_weight() / 2;
            let r = reduce_to_partition(&i);
            if i.a() > 0 {
                seen[0] = true;
                assert_eq!((i.b(), i.c()), (0, half));
                assert_eq!(r.problem.threshold, i.a() as i64);
            } else if i.b() > 0 {
                seen[1] = true;
                assert_eq!(r.problem.threshold, i.b() as i64);
            } else {
                seen[2] = true;
                assert!(i.c() > half);
                assert!(r.problem.threshold < 0);
                assert!(!decide_manipulation(&i).manipulable);
            }
        }
        assert_eq!(seen, [true; 3]);
    }
}
