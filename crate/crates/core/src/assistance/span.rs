use core::f64::consts::{FRAC_PI_2, PI};
use core::ops::Range;

use crate::measures::spread;
use crate::qmath::schmidt_probabilities;
use crate::states::{make_u, PHI_DIMS};
use crate::{Error, Result, C64};

/// `x|u0> + y|u1>` on `8 x 4` (not normalized).
pub fn span_vector(x: C64, y: C64) -> Result<alloc::vec::Vec<C64>> {
    if x.norm_sqr() + y.norm_sqr() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let u0 = make_u(0)?;
    let u1 = make_u(1)?;
    Ok(u0
        .amplitudes()
        .iter()
        .zip(u1.amplitudes())
        .map(|(a, b)| x * a + y * b)
        .collect())
}

/// Normalized squared Schmidt coefficients of `x|u0> + y|u1>`, descending,
/// computed directly from the vector.
pub fn span_deficit_oracle(x: C64, y: C64) -> Result<[f64; 4]> {
    let v = span_vector(x, y)?;
    let p = schmidt_probabilities(&v, PHI_DIMS[0], PHI_DIMS[1])?;
    Ok([p[0], p[1], p[2], p[3]])
}

/// Spread of [`span_deficit_oracle`].
pub fn span_deficit(x: C64, y: C64) -> Result<f64> {
    Ok(spread(&span_deficit_oracle(x, y)?))
}

/// Unnormalized squared Schmidt coefficients `lambda_k` (Schmidt index
/// `k = 0..3` on B) of `x|u0> + y|u1>` in closed form:
/// `(|x+iy|^2 + |x+y|^2, |x+y|^2 + 2|x|^2, |x-iy|^2 + |x+y|^2, |x-y|^2 + 2|x|^2) / 16`.
/// They sum to `|x u0 + y u1|^2`.
pub fn span_magnitudes_closed_form(x: C64, y: C64) -> [f64; 4] {
    span_magnitudes(x, y, 1.0)
}

/// The same expressions with weight `1/2` on `|x+y|^2` in the first and
/// third entries, the form in which they are commonly quoted. They disagree
/// with the direct computation (e.g. `(3/32, 3/16, 3/32, 3/16)` at `(1, 0)`,
/// which is not proportional to the true `(0.2, 0.3, 0.2, 0.3)`).
pub fn span_magnitudes_half_weight(x: C64, y: C64) -> [f64; 4] {
    span_magnitudes(x, y, 0.5)
}

fn span_magnitudes(x: C64, y: C64, w: f64) -> [f64; 4] {
    let i = C64::new(0.0, 1.0);
    let sum = (x + y).norm_sqr();
    [
        ((x + i * y).norm_sqr() + w * sum) / 16.0,
        (sum + 2.0 * x.norm_sqr()) / 16.0,
        ((x - i * y).norm_sqr() + w * sum) / 16.0,
        ((x - y).norm_sqr() + 2.0 * x.norm_sqr()) / 16.0,
    ]
}

/// `(cos a, sin a e^{i b})`, the projective parameterisation of the span
/// with the global phase fixed.
pub fn span_point(alpha: f64, beta: f64) -> (C64, C64) {
    (C64::new(libm::cos(alpha), 0.0), C64::from_polar(libm::sin(alpha), beta))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpanScanConfig {
    /// Grid points per axis (`alpha` over `[0, pi/2]`, `beta` over `[0, 2 pi)`).
    pub grid_points: usize,
    /// Maximum compass sweeps per step size during refinement.
    pub refine_iters: usize,
}

impl Default for SpanScanConfig {
    fn default() -> Self {
        Self {
            grid_points: 512,
            refine_iters: 200,
        }
    }
}

impl SpanScanConfig {
    fn validate(&self) -> Result<()> {
        if self.grid_points < 64 {
            return Err(Error::InvalidConfig("grid_points must be at least 64".into()));
        }
        Ok(())
    }

    fn alpha(&self, i: usize) -> f64 {
        FRAC_PI_2 * i as f64 / (self.grid_points - 1) as f64
    }

    fn beta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.grid_points as f64
    }
}

/// Lowest deficit over part of the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridBest {
    pub deficit: f64,
    /// Flat grid index `i * grid_points + j`.
    pub index: usize,
    pub samples: usize,
}

impl GridBest {
    /// Merges two partial results; ties go to the lower grid index.
    pub fn merge(self, other: Self) -> Self {
        let samples = self.samples + other.samples;
        let keep_self = self.deficit < other.deficit || (self.deficit == other.deficit && self.index <= other.index);
        let best = if keep_self { self } else { other };
        Self { samples, ..best }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpanScanResult {
    pub min_deficit: f64,
    pub argmin: (C64, C64),
    pub alpha: f64,
    pub beta: f64,
    /// Deficit evaluations, grid plus refinement.
    pub samples: usize,
    pub grid_min_deficit: f64,
}

/// Scans grid rows `rows` (`alpha` indices).
pub fn span_scan_rows(cfg: &SpanScanConfig, rows: Range<usize>) -> Result<GridBest> {
    cfg.validate()?;
    let g = cfg.grid_points;
    let mut best = GridBest {
        deficit: f64::INFINITY,
        index: usize::MAX,
        samples: 0,
    };
    for i in rows.start..rows.end.min(g) {
        let alpha = cfg.alpha(i);
        for j in 0..g {
            let (x, y) = span_point(alpha, cfg.beta(j));
            let d = span_deficit(x, y)?;
            best.samples += 1;
            if d < best.deficit {
                best.deficit = d;
                best.index = i * g + j;
            }
        }
    }
    Ok(best)
}

/// Compass refinement in `(alpha, beta)` from the best grid point.
pub fn span_refine(cfg: &SpanScanConfig, grid: GridBest) -> Result<SpanScanResult> {
    cfg.validate()?;
    let g = cfg.grid_points;
    if grid.index >= g * g {
        return Err(Error::InvalidConfig("empty grid".into()));
    }
    let mut alpha = cfg.alpha(grid.index / g);
    let mut beta = cfg.beta(grid.index % g);
    let mut best = grid.deficit;
    let mut samples = grid.samples;
    let mut step = FRAC_PI_2 / (g - 1) as f64;
    let eval = |a: f64, b: f64| {
        let (x, y) = span_point(a, b);
        span_deficit(x, y)
    };
    while step > 1e-12 {
        for _ in 0..cfg.refine_iters {
            let mut improved = false;
            for (da, db) in compass_moves(step) {
                let a = (alpha + da).clamp(0.0, FRAC_PI_2);
                let b = beta + db;
                let d = eval(a, b)?;
                samples += 1;
                if d < best {
                    best = d;
                    alpha = a;
                    beta = b;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        step *= 0.5;
    }
    let tau = 2.0 * PI;
    let beta = beta - tau * libm::floor(beta / tau);
    Ok(SpanScanResult {
        min_deficit: best,
        argmin: span_point(alpha, beta),
        alpha,
        beta,
        samples,
        grid_min_deficit: grid.deficit,
    })
}

/// Number of compass directions. The deficit is a max-min of smooth
/// functions; with few directions the search stalls on its ridges.
const DIRECTIONS: usize = 32;

fn compass_moves(step: f64) -> impl Iterator<Item = (f64, f64)> {
    (0..DIRECTIONS).map(move |k| {
        let t = 2.0 * PI * k as f64 / DIRECTIONS as f64;
        (step * libm::cos(t), step * libm::sin(t))
    })
}

/// Minimises the maximal-entanglement deficit over normalized
/// `x|u0> + y|u1>`: full grid, then local refinement.
pub fn span_scan(cfg: &SpanScanConfig) -> Result<SpanScanResult> {
    let grid = span_scan_rows(cfg, 0..cfg.grid_points)?;
    span_refine(cfg, grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_best_merge_is_order_independent() {
        let a = GridBest {
            deficit: 0.1,
            index: 7,
            samples: 3,
        };
        let b = GridBest {
            deficit: 0.1,
            index: 2,
            samples: 5,
        };
        assert_eq!(a.merge(b), b.merge(a));
        assert_eq!(a.merge(b).index, 2);
        assert_eq!(a.merge(b).samples, 8);
    }

    #[test]
    fn zero_input_rejected() {
        assert_eq!(
            span_deficit_oracle(C64::new(0.0, 0.0), C64::new(0.0, 0.0)),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn small_grid_rejected() {
        let cfg = SpanScanConfig {
            grid_points: 16,
            refine_iters: 5,
        };
        assert!(span_scan(&cfg).is_err());
    }
}
