//! Globally adaptive Gauss-Kronrod (7/15 point) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("quadrature did not converge after {subdivisions} subdivisions: estimate {estimate:e}, error {achieved:e}, tolerance {requested:e}")]
pub struct QuadratureError {
    pub estimate: f64,
    pub achieved: f64,
    pub requested: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub absolute: f64,
    pub relative: f64,
    pub max_subdivisions: usize,
}

impl Tolerance {
    pub fn absolute(absolute: f64) -> Self {
        Self {
            absolute,
            relative: 0.0,
            max_subdivisions: 2000,
        }
    }

    fn target(&self, estimate: f64) -> f64 {
        self.absolute.max(self.relative * estimate.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the odd-indexed Kronrod nodes, centre last.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Integral {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Integral {
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

struct Piece {
    a: f64,
    b: f64,
    estimate: Integral,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.estimate.error.total_cmp(&other.estimate.error)
    }
}

/// Integrate `f` over `[a, b]`, starting from `initial_pieces` equal
/// subintervals and bisecting the worst one until the summed error estimate
/// is within tolerance.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    initial_pieces: usize,
    tol: Tolerance,
) -> Result<Integral, QuadratureError> {
    if a == b {
        return Ok(Integral { value: 0.0, error: 0.0 });
    }
    let pieces = initial_pieces.max(1);
    let width = (b - a) / pieces as f64;
    let mut heap = BinaryHeap::with_capacity(pieces + tol.max_subdivisions);
    for i in 0..pieces {
        let lo = a + width * i as f64;
        let hi = if i + 1 == pieces { b } else { lo + width };
        heap.push(Piece {
            a: lo,
            b: hi,
            estimate: kronrod(&mut f, lo, hi),
        });
    }
    let mut subdivisions = 0;
    loop {
        let value: f64 = heap.iter().map(|p| p.estimate.value).sum();
        let error: f64 = heap.iter().map(|p| p.estimate.error).sum();
        let requested = tol.target(value);
        if error <= requested {
            return Ok(Integral { value, error });
        }
        if subdivisions >= tol.max_subdivisions {
            return Err(QuadratureError {
                estimate: value,
                achieved: error,
                requested,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("at least one piece");
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(Piece {
            a: worst.a,
            b: mid,
            estimate: kronrod(&mut f, worst.a, mid),
        });
        heap.push(Piece {
            a: mid,
            b: worst.b,
            estimate: kronrod(&mut f, mid, worst.b),
        });
        subdivisions += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| x.powi(5) - 3.0 * x * x, 0.0, 2.0, 1, Tolerance::absolute(1e-12)).unwrap();
        assert!((r.value - (64.0 / 6.0 - 8.0)).abs() < 1e-12);
    }

    #[test]
    fn gaussian_mass() {
        let r = integrate(
            |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt(),
            -12.0,
            12.0,
            4,
            Tolerance::absolute(1e-12),
        )
        .unwrap();
        assert!((r.value - 1.0).abs() < 1e-11);
    }

    #[test]
    fn sqrt_singularity_needs_subdivision() {
        let r = integrate(|x: f64| x.sqrt(), 0.0, 1.0, 1, Tolerance::absolute(1e-10)).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn reports_non_convergence() {
        let tol = Tolerance {
            absolute: 1e-15,
            relative: 0.0,
            max_subdivisions: 3,
        };
        let err = integrate(|x: f64| (1.0 / x).sin(), 1e-4, 1.0, 1, tol).unwrap_err();
        assert_eq!(err.subdivisions, 3);
        assert!(err.achieved > err.requested);
    }
}
