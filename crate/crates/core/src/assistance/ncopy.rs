use alloc::vec;
use alloc::vec::Vec;

use crate::measures::spread;
use crate::qmath::{inner, norm_sqr, schmidt_probabilities};
use crate::random::{gaussian, rng_for};
use crate::states::{make_u, PHI_DIMS};
use crate::{Error, Result, C64};

/// Only two copies are supported.
const SUPPORTED_COPIES: usize = 2;
const NA: usize = PHI_DIMS[0];
const NB: usize = PHI_DIMS[1];

/// Normalized linear combination `chi = sum c[i1*2+i2] |u_i1>|u_i2>` of two
/// copies, written as `chi = |chi_0>|u_0> + |chi_1>|u_1>` with
/// `|chi_b> = sum_s |alpha_{b,s}>|s>`.
///
/// Invariant: the assembled vector has unit norm, so the lambda table sums to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct NCopyCombo {
    n: usize,
    coeffs: Vec<C64>,
    mu: [[f64; NB]; 2],
    eta: [C64; NB],
}

impl NCopyCombo {
    /// Rescales `coeffs` so the assembled state is normalized.
    pub fn new(n: usize, coeffs: &[C64]) -> Result<Self> {
        if n != SUPPORTED_COPIES {
            return Err(Error::UnsupportedCopies(n));
        }
        if coeffs.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: coeffs.len(),
            });
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let raw = assemble(coeffs)?;
        let ns = norm_sqr(&raw);
        if ns <= 1e-28 {
            return Err(Error::ZeroVector);
        }
        let scale = 1.0 / libm::sqrt(ns);
        let coeffs: Vec<C64> = coeffs.iter().map(|c| c * scale).collect();

        let u = [make_u(0)?, make_u(1)?];
        let mut mu = [[0.0; NB]; 2];
        let mut eta = [C64::new(0.0, 0.0); NB];
        let mut alpha = [[[C64::new(0.0, 0.0); NA]; NB]; 2];
        for (b, alpha_b) in alpha.iter_mut().enumerate() {
            // chi_b = sum_i1 c[i1*2+b] u_i1
            for (i1, ui) in u.iter().enumerate() {
                let w = coeffs[i1 * 2 + b];
                for (idx, amp) in ui.amplitudes().iter().enumerate() {
                    alpha_b[idx % NB][idx / NB] += w * amp;
                }
            }
        }
        for s in 0..NB {
            mu[0][s] = norm_sqr(&alpha[0][s]);
            mu[1][s] = norm_sqr(&alpha[1][s]);
            eta[s] = inner(&alpha[0][s], &alpha[1][s]);
        }
        Ok(Self { n, coeffs, mu, eta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Coefficients after normalization.
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// `mu[b][s] = <alpha_{b,s}|alpha_{b,s}>`.
    pub fn mu(&self) -> &[[f64; 4]; 2] {
        &self.mu
    }

    /// `eta[s] = <alpha_{0,s}|alpha_{1,s}>`.
    pub fn eta(&self) -> &[C64; 4] {
        &self.eta
    }

    /// The state on `(A1 A2) x (B1 B2)`, index `(a1*8 + a2)*16 + b1*4 + b2`.
    pub fn assembled(&self) -> Vec<C64> {
        assemble(&self.coeffs).expect("length checked at construction")
    }

    /// Deficit of the assembled state computed by direct Schmidt decomposition.
    pub fn deficit(&self) -> Result<f64> {
        let p = schmidt_probabilities(&self.assembled(), NA * NA, NB * NB)?;
        Ok(spread(&p))
    }
}

fn assemble(coeffs: &[C64]) -> Result<Vec<C64>> {
    if coeffs.len() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: coeffs.len(),
        });
    }
    let u = [make_u(0)?, make_u(1)?];
    let mut out = vec![C64::new(0.0, 0.0); NA * NA * NB * NB];
    for (i1, u1) in u.iter().enumerate() {
        for (i2, u2) in u.iter().enumerate() {
            let w = coeffs[i1 * 2 + i2];
            if w == C64::new(0.0, 0.0) {
                continue;
            }
            for (x1, &v1) in u1.amplitudes().iter().enumerate() {
                if v1 == C64::new(0.0, 0.0) {
                    continue;
                }
                let (a1, b1) = (x1 / NB, x1 % NB);
                for (x2, &v2) in u2.amplitudes().iter().enumerate() {
                    let (a2, b2) = (x2 / NB, x2 % NB);
                    out[(a1 * NA + a2) * NB * NB + b1 * NB + b2] += w * v1 * v2;
                }
            }
        }
    }
    Ok(out)
}

/// One row `[lambda_{s,0}, .., lambda_{s,3}]` from `mu_{0,s}`, `mu_{1,s}`, `eta_s`.
pub fn lambda_table_from_moments(mu0: f64, mu1: f64, eta: C64) -> [f64; 4] {
    let i = C64::new(0.0, 1.0);
    let one = C64::new(1.0, 0.0);
    [
        (mu0 + mu1) / 8.0 + ((one + i) * eta).re / 8.0,
        3.0 * mu0 / 16.0 + mu1 / 16.0 + eta.re / 8.0,
        (mu0 + mu1) / 8.0 + ((one - i) * eta).re / 8.0,
        3.0 * mu0 / 16.0 + mu1 / 16.0 - eta.re / 8.0,
    ]
}

/// The `4 x 4` table `lambda_{s,k}`: squared Schmidt coefficients of the
/// assembled state, `s` indexing B1 and `k` indexing B2.
pub fn ncopy_lambda_analytic(combo: &NCopyCombo) -> Vec<[f64; 4]> {
    (0..NB)
        .map(|s| lambda_table_from_moments(combo.mu[0][s], combo.mu[1][s], combo.eta[s]))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct NCopyScanResult {
    pub min_deficit: f64,
    /// Normalized coefficients attaining `min_deficit`.
    pub argmin: Vec<C64>,
    pub samples: usize,
}

/// Minimum deficit over `samples` random unit coefficient vectors in `C^4`,
/// drawn from stream 0 of `seed`.
pub fn ncopy_deficit_scan(n: usize, samples: usize, seed: u64) -> Result<NCopyScanResult> {
    if n != SUPPORTED_COPIES {
        return Err(Error::UnsupportedCopies(n));
    }
    if samples == 0 {
        return Err(Error::InvalidConfig("samples must be positive".into()));
    }
    let mut rng = rng_for(seed, 0);
    let mut best = NCopyScanResult {
        min_deficit: f64::INFINITY,
        argmin: Vec::new(),
        samples,
    };
    for _ in 0..samples {
        let coeffs: Vec<C64> = (0..4).map(|_| gaussian(&mut rng)).collect();
        let combo = NCopyCombo::new(n, &coeffs)?;
        let d = combo.deficit()?;
        if d < best.min_deficit {
            best.min_deficit = d;
            best.argmin = combo.coeffs;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn only_two_copies() {
        let c = [C64::new(1.0, 0.0); 8];
        assert_eq!(NCopyCombo::new(3, &c), Err(Error::UnsupportedCopies(3)));
        assert_eq!(ncopy_deficit_scan(1, 10, 0), Err(Error::UnsupportedCopies(1)));
    }

    #[test]
    fn table_sums_to_one() {
        let c = [
            C64::new(0.3, 0.1),
            C64::new(-0.2, 0.5),
            C64::new(0.0, 0.7),
            C64::new(0.4, 0.0),
        ];
        let combo = NCopyCombo::new(2, &c).unwrap();
        let total: f64 = ncopy_lambda_analytic(&combo).iter().flatten().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!((norm_sqr(&combo.assembled()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_u0_u0() {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let combo = NCopyCombo::new(2, &[one, zero, zero, zero]).unwrap();
        assert!((combo.deficit().unwrap() - 0.05).abs() < 1e-12);
    }
}
