//! Party-labelled states and the catalog of concrete example states.

mod catalog;

pub use catalog::{
    make_bell, make_max_entangled, make_mixed_components, make_mixed_example, make_phi, make_u, purify,
    MIXED_EXAMPLE_DIMS, PHI_DIMS,
};

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::qmath::{
    hermitian_eig, hermitian_eigenvalues, partial_trace, purity, reduced_state, tensor, ComplexMatrix, HermitianEigen,
    StateVector, HERMITIAN_TOL, NEGATIVE_EIG_TOL, NORM_TOL,
};
use crate::{Error, Result, C64};

/// Ordered party labels with their local dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartySpace {
    labels: Vec<String>,
    dims: Vec<usize>,
}

impl PartySpace {
    pub fn new(labels: Vec<String>, dims: Vec<usize>) -> Result<Self> {
        if labels.len() != dims.len() || dims.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: dims.len(),
                found: labels.len(),
            });
        }
        if let Some(p) = dims.iter().position(|&d| d == 0) {
            return Err(Error::InvalidSubsystem(p));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || labels[..i].contains(l) {
                return Err(Error::UnknownParty(l.clone()));
            }
        }
        Ok(Self { labels, dims })
    }

    /// Parties labelled `A`, `B`, `C`, ... in order.
    pub fn with_dims(dims: &[usize]) -> Result<Self> {
        let labels = (0..dims.len()).map(default_label).collect();
        Self::new(labels, dims.to_vec())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownParty(label.to_string()))
    }

    /// The sub-space made of the parties in `keep` (original order kept).
    pub fn subspace(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        let mut k = keep.to_vec();
        k.sort_unstable();
        k.dedup();
        if let Some(&bad) = k.iter().find(|&&i| i >= self.len()) {
            return Err(Error::InvalidSubsystem(bad));
        }
        Ok(Self {
            labels: k.iter().map(|&i| self.labels[i].clone()).collect(),
            dims: k.iter().map(|&i| self.dims[i]).collect(),
        })
    }

    /// This space followed by `other` (labels must stay distinct).
    pub fn join(&self, other: &Self) -> Result<Self> {
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let mut dims = self.dims.clone();
        dims.extend(other.dims.iter().copied());
        Self::new(labels, dims)
    }

    /// A label not yet used by this space (`C` for an `A, B` space).
    pub fn fresh_label(&self) -> String {
        (self.len()..)
            .map(default_label)
            .find(|l| !self.labels.contains(l))
            .expect("unbounded label supply")
    }
}

fn default_label(i: usize) -> String {
    if i < 26 {
        char::from(b'A' + i as u8).to_string()
    } else {
        alloc::format!("P{i}")
    }
}

/// Normalized pure state over a party space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    space: PartySpace,
    vector: StateVector,
}

impl PureState {
    pub fn new(space: PartySpace, vector: StateVector) -> Result<Self> {
        if vector.dim() != space.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.total_dim(),
                found: vector.dim(),
            });
        }
        let n = vector.norm_sqr();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr: n });
        }
        let vector = if vector.is_normalized() {
            vector
        } else {
            StateVector::new(vector.into_amplitudes())?
        };
        Ok(Self { space, vector })
    }

    pub fn from_amplitudes(space: PartySpace, amplitudes: Vec<C64>) -> Result<Self> {
        Self::new(space, StateVector::new(amplitudes)?)
    }

    /// Tensor product of single-party factors, labelled `A, B, ...`.
    pub fn product(factors: &[StateVector]) -> Result<Self> {
        let dims: Vec<usize> = factors.iter().map(StateVector::dim).collect();
        let space = PartySpace::with_dims(&dims)?;
        let mut v = StateVector::basis(1, 0)?;
        for f in factors {
            v = v.tensor(f);
        }
        Self::new(space, v)
    }

    pub fn space(&self) -> &PartySpace {
        &self.space
    }

    pub fn vector(&self) -> &StateVector {
        &self.vector
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.vector.amplitudes()
    }

    /// Reduced state on the parties in `keep`.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityOperator> {
        let m = reduced_state(self.amplitudes(), self.space.dims(), keep)?;
        Ok(DensityOperator {
            space: self.space.subspace(keep)?,
            matrix: m,
        })
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator {
            space: self.space.clone(),
            matrix: self.vector.projector(),
        }
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.vector.inner(&other.vector).norm_sqr()
    }
}

/// Hermitian, positive semidefinite, unit-trace operator over a party space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    space: PartySpace,
    matrix: ComplexMatrix,
}

/// Trace tolerance for density operators.
pub const TRACE_TOL: f64 = 1e-9;

impl DensityOperator {
    pub fn new(space: PartySpace, matrix: ComplexMatrix) -> Result<Self> {
        let n = space.total_dim();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.rows(),
            });
        }
        let deviation = matrix.hermiticity_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::BadTrace { trace });
        }
        let values = hermitian_eigenvalues(&matrix)?;
        if let Some(&min) = values.last() {
            if min < -NEGATIVE_EIG_TOL {
                return Err(Error::NotPositive { eigenvalue: min });
            }
        }
        Ok(Self { space, matrix })
    }

    /// Skips validation; for internal results that hold by construction.
    pub(crate) fn from_parts(space: PartySpace, matrix: ComplexMatrix) -> Self {
        Self { space, matrix }
    }

    /// `I / d` over the space.
    pub fn maximally_mixed(space: PartySpace) -> Self {
        let d = space.total_dim();
        let matrix = ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
        Self { space, matrix }
    }

    pub fn space(&self) -> &PartySpace {
        &self.space
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        purity(&self.matrix)
    }

    pub fn eigen(&self) -> Result<HermitianEigen> {
        hermitian_eig(&self.matrix)
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> Result<usize> {
        Ok(hermitian_eigenvalues(&self.matrix)?
            .iter()
            .filter(|&&v| v > tol)
            .count())
    }

    /// Partial trace keeping the parties in `keep`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        Ok(Self {
            space: self.space.subspace(keep)?,
            matrix: partial_trace(&self.matrix, self.space.dims(), keep)?,
        })
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            space: self.space.join(&other.space)?,
            matrix: tensor(&self.matrix, &other.matrix),
        })
    }

    /// Dominant eigenvector as a pure state when the purity is at least
    /// `1 - tol`; otherwise [`Error::MixedState`].
    pub fn as_pure(&self, tol: f64) -> Result<PureState> {
        let p = self.purity();
        if p < 1.0 - tol {
            return Err(Error::MixedState { purity: p });
        }
        let eig = self.eigen()?;
        PureState::new(self.space.clone(), StateVector::normalize(eig.vector(0))?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn party_space_validation() {
        assert!(PartySpace::with_dims(&[2, 0]).is_err());
        assert!(PartySpace::new(vec!["A".into(), "A".into()], vec![2, 2]).is_err());
        let s = PartySpace::with_dims(&[8, 4, 2]).unwrap();
        assert_eq!(s.total_dim(), 64);
        assert_eq!(s.index_of("C").unwrap(), 2);
        assert_eq!(
            s.subspace(&[2, 0]).unwrap().labels(),
            &["A".to_string(), "C".to_string()]
        );
        assert_eq!(PartySpace::with_dims(&[2, 2]).unwrap().fresh_label(), "C");
    }

    #[test]
    fn density_operator_validation() {
        let space = PartySpace::with_dims(&[2]).unwrap();
        assert!(matches!(
            DensityOperator::new(space.clone(), ComplexMatrix::identity(2)),
            Err(Error::BadTrace { .. })
        ));
        assert!(matches!(
            DensityOperator::new(space.clone(), ComplexMatrix::from_diagonal(&[1.5, -0.5])),
            Err(Error::NotPositive { .. })
        ));
        assert!(DensityOperator::new(space, ComplexMatrix::from_diagonal(&[0.5, 0.5])).is_ok());
    }

    #[test]
    fn product_marginal() {
        let a = DensityOperator::new(
            PartySpace::with_dims(&[2]).unwrap(),
            ComplexMatrix::from_diagonal(&[0.7, 0.3]),
        )
        .unwrap();
        let b = DensityOperator::maximally_mixed(PartySpace::new(vec!["B".into()], vec![3]).unwrap());
        let ab = a.tensor(&b).unwrap();
        let back = ab.partial_trace(&[0]).unwrap();
        assert!(back.matrix().max_abs_diff(a.matrix()) < 1e-15);
    }
}
