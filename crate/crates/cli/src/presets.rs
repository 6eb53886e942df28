//! Named sweep configurations.

use clap::ValueEnum;

/// Sincere electorate sizes used when a preset sweeps several n.
pub const DEFAULT_NS: [u32; 5] = [16, 64, 256, 1024, 4096];

/// Largest weight bound used when k grows with m.
pub const K_FROM_M_CAP_LOG2: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurvePreset {
    /// Uniform weights on (0, 2^8], m swept at several n.
    Fig1,
    /// Same sweep as fig1, read against m / sqrt(n).
    Fig2,
    /// Uniform weights on (0, 2^m], search cost.
    Fig3,
    /// n = 256, k from 2^8 to 2^16.
    Fig4,
    /// Normal weights, mean 2^8, sd 2^7.
    Fig5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HungPreset {
    /// Hung elections, m = 20, log2(k)/m from 0.25 to 2.
    Fig6,
    /// Hung elections, m = 24, log2(k)/m from 0.25 to 2 (cost).
    Fig7,
    /// One random voter, m = 24, k = 2^24, k' from 2^0 to 2^32.
    Fig8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveKind {
    Uniform,
    Normal,
}

/// Defaults a curve preset supplies; explicit flags override them.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveDefaults {
    pub kind: CurveKind,
    pub ns: Vec<u32>,
    pub ks: Vec<u64>,
    pub k_from_m: bool,
    pub mean: f64,
    pub sd: f64,
    pub x_step: f64,
    pub x_max: f64,
}

impl Default for CurveDefaults {
    fn default() -> Self {
        Self {
            kind: CurveKind::Uniform,
            ns: DEFAULT_NS.to_vec(),
            ks: vec![1 << 8],
            k_from_m: false,
            mean: 256.0,
            sd: 128.0,
            x_step: 0.25,
            x_max: 4.0,
        }
    }
}

impl CurvePreset {
    pub fn defaults(self) -> CurveDefaults {
        let base = CurveDefaults::default();
        match self {
            CurvePreset::Fig1 | CurvePreset::Fig2 => base,
            CurvePreset::Fig3 => CurveDefaults {
                k_from_m: true,
                ..base
            },
            CurvePreset::Fig4 => CurveDefaults {
                ns: vec![256],
                ks: (8..=16).step_by(2).map(|e| 1u64 << e).collect(),
                ..base
            },
            CurvePreset::Fig5 => CurveDefaults {
                kind: CurveKind::Normal,
                ..base
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HungDefaults {
    pub ms: Vec<u32>,
    pub log2ks: Vec<u32>,
    pub one_random: bool,
    pub log2k_primes: Option<Vec<u32>>,
}

impl HungPreset {
    pub fn defaults(self) -> HungDefaults {
        match self {
            HungPreset::Fig6 => HungDefaults {
                ms: vec![20],
                log2ks: (5..=40).collect(),
                one_random: false,
                log2k_primes: None,
            },
            HungPreset::Fig7 => HungDefaults {
                ms: vec![24],
                log2ks: (6..=48).collect(),
                one_random: false,
                log2k_primes: None,
            },
            HungPreset::Fig8 => HungDefaults {
                ms: vec![24],
                log2ks: vec![24],
                one_random: true,
                log2k_primes: Some((0..=32).collect()),
            },
        }
    }
}

/// Coalition sizes `round(x * sqrt(n))` for `x = 0, step, 2 step, ..., x_max`,
/// duplicates removed.
pub fn m_grid(n: u32, x_step: f64, x_max: f64) -> Vec<u32> {
    let root = (n as f64).sqrt();
    let steps = (x_max / x_step + 1e-9).floor() as u32;
    let mut ms: Vec<u32> = (0..=steps)
        .map(|i| (i as f64 * x_step * root).round() as u32)
        .collect();
    ms.dedup();
    ms
}

pub fn k_from_m(m: u32) -> u64 {
    1u64 << m.min(K_FROM_M_CAP_LOG2)
}
