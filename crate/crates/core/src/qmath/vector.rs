use alloc::vec::Vec;

use super::{ComplexMatrix, NORM_TOL};
use crate::{Error, Result, C64};

/// `<a|b>`, conjugate-linear in the first argument.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// Complex amplitude vector.
///
/// A vector is either flagged normalized (squared norm within
/// [`NORM_TOL`] of one, checked on construction) or explicitly
/// subnormalized, as for the unnormalized branch vectors `|u_b>`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
    normalized: bool,
}

impl StateVector {
    /// A normalized vector; fails if `|psi|^2` is not within `1e-9` of 1.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        check_finite(&amplitudes)?;
        let n = norm_sqr(&amplitudes);
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr: n });
        }
        Ok(Self {
            amplitudes,
            normalized: true,
        })
    }

    /// A vector with no norm constraint.
    pub fn subnormalized(amplitudes: Vec<C64>) -> Result<Self> {
        check_finite(&amplitudes)?;
        Ok(Self {
            amplitudes,
            normalized: false,
        })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalize(mut amplitudes: Vec<C64>) -> Result<Self> {
        check_finite(&amplitudes)?;
        let n = norm_sqr(&amplitudes);
        if n <= 1e-300 {
            return Err(Error::ZeroVector);
        }
        let inv = 1.0 / libm::sqrt(n);
        for z in &mut amplitudes {
            *z *= inv;
        }
        Ok(Self {
            amplitudes,
            normalized: true,
        })
    }

    /// Computational basis vector `|index>`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::OutOfRange { index, limit: dim });
        }
        let mut amplitudes = alloc::vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self {
            amplitudes,
            normalized: true,
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    pub fn inner(&self, other: &Self) -> C64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// Unit-norm copy of this vector.
    pub fn normalized(&self) -> Result<Self> {
        Self::normalize(self.amplitudes.clone())
    }

    /// Kronecker product `self ⊗ other`; normalized iff both factors are.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Self {
            amplitudes,
            normalized: self.normalized && other.normalized,
        }
    }

    /// `|psi><psi|`.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }
}

fn check_finite(v: &[C64]) -> Result<()> {
    if v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}
