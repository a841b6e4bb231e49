use super::{hermitian_eigenvalues, ComplexMatrix, NEGATIVE_EIG_TOL};
use crate::{Error, Result};

/// Shannon entropy in bits, with `0 log 0 = 0`; clamped at zero.
pub fn shannon_bits(probabilities: &[f64]) -> f64 {
    let h: f64 = probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * libm::log2(p))
        .sum();
    h.max(0.0)
}

/// Von Neumann entropy `-Tr rho log2 rho` in bits.
pub fn vn_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let mut values = hermitian_eigenvalues(rho)?;
    if let Some(&min) = values.last() {
        if min < -NEGATIVE_EIG_TOL {
            return Err(Error::NotPositive { eigenvalue: min });
        }
    }
    for v in &mut values {
        *v = v.max(0.0);
    }
    Ok(shannon_bits(&values))
}

/// `Tr rho^2` for a Hermitian `rho`.
pub fn purity(rho: &ComplexMatrix) -> f64 {
    rho.as_slice().iter().map(|z| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximally_mixed_two_qubits_is_two_bits() {
        let rho = ComplexMatrix::identity(4).scale_real(0.25);
        assert!((vn_entropy(&rho).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn spectrum_point_two_point_three() {
        // direct evaluation: -2(0.2 log2 0.2 + 0.3 log2 0.3)
        let rho = ComplexMatrix::from_diagonal(&[0.2, 0.3, 0.2, 0.3]);
        assert!((vn_entropy(&rho).unwrap() - 1.9710).abs() < 1e-4);
    }

    #[test]
    fn negative_eigenvalue_rejected_small_one_clamped() {
        let bad = ComplexMatrix::from_diagonal(&[1.1, -0.1]);
        assert!(matches!(vn_entropy(&bad), Err(Error::NotPositive { .. })));
        let ok = ComplexMatrix::from_diagonal(&[1.0, -1e-12]);
        assert_eq!(vn_entropy(&ok).unwrap(), 0.0);
    }
}
