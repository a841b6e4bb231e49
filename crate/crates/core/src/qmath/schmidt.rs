use alloc::vec::Vec;

use super::{hermitian_eig, hermitian_eigenvalues, ComplexMatrix, StateVector, NEGATIVE_EIG_TOL};
use crate::{Error, Result, C64};

/// Probabilities at or below this are treated as absent Schmidt terms.
const ZERO_PROBABILITY: f64 = 1e-14;

/// `psi = sqrt(norm_sqr) * sum_i sqrt(p_i) |l_i> ⊗ |r_i>`.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Squared Schmidt coefficients of the normalized vector, descending,
    /// `min(dim_a, dim_b)` of them (zeros included).
    pub probabilities: Vec<f64>,
    /// Left vectors for the nonzero probabilities.
    pub left: Vec<Vec<C64>>,
    /// Right vectors for the nonzero probabilities.
    pub right: Vec<Vec<C64>>,
    /// Squared norm of the decomposed vector (1 unless subnormalized).
    pub norm_sqr: f64,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.left.len()
    }

    /// Rebuilds the decomposed vector (including its original norm).
    pub fn reconstruct(&self) -> Vec<C64> {
        let da = self.left.first().map_or(0, Vec::len);
        let db = self.right.first().map_or(0, Vec::len);
        let mut out = alloc::vec![C64::new(0.0, 0.0); da * db];
        let scale = libm::sqrt(self.norm_sqr);
        for ((p, l), r) in self.probabilities.iter().zip(&self.left).zip(&self.right) {
            let w = libm::sqrt(*p) * scale;
            for (a, la) in l.iter().enumerate() {
                for (b, rb) in r.iter().enumerate() {
                    out[a * db + b] += la * rb * w;
                }
            }
        }
        out
    }
}

/// Reduced operator on the smaller side of `M[a][b] = amps[a * dim_b + b]`:
/// `M M^dagger` when `dim_a <= dim_b`, otherwise `M^T conj(M)`.
fn smaller_side_gram(amps: &[C64], dim_a: usize, dim_b: usize) -> ComplexMatrix {
    if dim_a <= dim_b {
        ComplexMatrix::from_fn(dim_a, dim_a, |i, j| {
            let ri = &amps[i * dim_b..(i + 1) * dim_b];
            let rj = &amps[j * dim_b..(j + 1) * dim_b];
            ri.iter().zip(rj).map(|(x, y)| x * y.conj()).sum()
        })
    } else {
        ComplexMatrix::from_fn(dim_b, dim_b, |i, j| {
            (0..dim_a)
                .map(|a| amps[a * dim_b + i] * amps[a * dim_b + j].conj())
                .sum()
        })
    }
}

fn check_shape(amps: &[C64], dim_a: usize, dim_b: usize) -> Result<f64> {
    if dim_a == 0 || dim_b == 0 || amps.len() != dim_a * dim_b {
        return Err(Error::DimensionMismatch {
            expected: dim_a * dim_b,
            found: amps.len(),
        });
    }
    let n: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    if n <= 1e-28 {
        return Err(Error::ZeroVector);
    }
    Ok(n)
}

fn clamp_normalize(values: &mut [f64], norm_sqr: f64) -> Result<()> {
    for v in values.iter_mut() {
        *v /= norm_sqr;
        if *v < -NEGATIVE_EIG_TOL {
            return Err(Error::NotPositive { eigenvalue: *v });
        }
        *v = v.max(0.0);
    }
    Ok(())
}

/// Squared Schmidt coefficients only (descending, normalized to sum 1).
pub fn schmidt_probabilities(amps: &[C64], dim_a: usize, dim_b: usize) -> Result<Vec<f64>> {
    let n = check_shape(amps, dim_a, dim_b)?;
    let mut values = hermitian_eigenvalues(&smaller_side_gram(amps, dim_a, dim_b))?;
    clamp_normalize(&mut values, n)?;
    Ok(values)
}

/// Schmidt decomposition across the `dim_a x dim_b` split, computed from the
/// eigendecomposition of the reduced operator on the smaller side.
pub fn schmidt(psi: &StateVector, dim_a: usize, dim_b: usize) -> Result<SchmidtDecomposition> {
    let amps = psi.amplitudes();
    let norm_sqr = check_shape(amps, dim_a, dim_b)?;
    let eig = hermitian_eig(&smaller_side_gram(amps, dim_a, dim_b))?;
    let mut probabilities = eig.values.clone();
    clamp_normalize(&mut probabilities, norm_sqr)?;

    let mut left = Vec::new();
    let mut right = Vec::new();
    for (k, &p) in probabilities.iter().enumerate() {
        if p <= ZERO_PROBABILITY {
            continue;
        }
        let e = eig.vector(k);
        let inv = 1.0 / libm::sqrt(p * norm_sqr);
        if dim_a <= dim_b {
            // r = M^T conj(l) / sqrt(p)
            let r: Vec<C64> = (0..dim_b)
                .map(|b| (0..dim_a).map(|a| amps[a * dim_b + b] * e[a].conj()).sum::<C64>() * inv)
                .collect();
            left.push(e);
            right.push(r);
        } else {
            // l = M conj(r) / sqrt(p)
            let l: Vec<C64> = (0..dim_a)
                .map(|a| (0..dim_b).map(|b| amps[a * dim_b + b] * e[b].conj()).sum::<C64>() * inv)
                .collect();
            left.push(l);
            right.push(e);
        }
    }
    Ok(SchmidtDecomposition {
        probabilities,
        left,
        right,
        norm_sqr,
    })
}
