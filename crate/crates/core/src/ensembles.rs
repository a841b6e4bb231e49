//! Pure-state ensemble decompositions of a bipartite density operator.
//!
//! Every decomposition of `rho` arises as `v_i = sum_j V[i,j] u_j` for an
//! isometry `V` and any fixed family `{u_j}` with `sum |u_j><u_j| = rho`;
//! equivalently, from a rank-1 measurement on a purifying party.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::measures::{Bipartition, RootMeasure};
use crate::qmath::{hermitian_eig, ComplexMatrix, StateVector, NEGATIVE_EIG_TOL};
use crate::states::{DensityOperator, PureState};
use crate::{Error, Result, C64};

/// Entries with weight below this are dropped.
pub const ZERO_WEIGHT: f64 = 1e-14;
/// Eigenvalues above this count towards the rank.
pub const RANK_TOL: f64 = 1e-12;
/// Second eigenvalue allowed for an element to count as rank 1.
pub const RANK_ONE_TOL: f64 = 1e-10;
const WEIGHT_SUM_TOL: f64 = 1e-9;
const RECONSTRUCTION_TOL: f64 = 1e-8;
const ISOMETRY_TOL: f64 = 1e-9;
const COMPLETENESS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleEntry {
    pub weight: f64,
    pub state: PureState,
}

/// Weighted pure states whose mixture is `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    target: DensityOperator,
    entries: Vec<EnsembleEntry>,
}

impl Ensemble {
    pub fn new(target: DensityOperator, entries: Vec<EnsembleEntry>) -> Result<Self> {
        if let Some(e) = entries.iter().find(|e| e.weight.is_nan() || e.weight <= 0.0) {
            return Err(Error::InvalidConfig(format!("nonpositive weight {}", e.weight)));
        }
        if let Some(e) = entries.iter().find(|e| e.state.space() != target.space()) {
            return Err(Error::DimensionMismatch {
                expected: target.space().total_dim(),
                found: e.state.space().total_dim(),
            });
        }
        let total: f64 = entries.iter().map(|e| e.weight).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::BadTrace { trace: total });
        }
        let ens = Self { target, entries };
        let err = ens.reconstruction_error();
        if err > RECONSTRUCTION_TOL {
            return Err(Error::InvalidConfig(format!(
                "ensemble does not reconstruct its target (error {err:e})"
            )));
        }
        Ok(ens)
    }

    pub fn target(&self) -> &DensityOperator {
        &self.target
    }

    pub fn entries(&self) -> &[EnsembleEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `sum_i w_i |psi_i><psi_i|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.target.space().total_dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for e in &self.entries {
            let a = e.state.amplitudes();
            for r in 0..n {
                let ar = a[r] * e.weight;
                for c in 0..n {
                    m[(r, c)] += ar * a[c].conj();
                }
            }
        }
        m
    }

    pub fn reconstruction_error(&self) -> f64 {
        self.reconstruct().max_abs_diff(self.target.matrix())
    }

    /// `sum_i w_i E(psi_i)` across `cut`.
    pub fn average(&self, measure: &dyn RootMeasure, cut: &Bipartition) -> Result<f64> {
        self.entries
            .iter()
            .map(|e| Ok(e.weight * measure.evaluate(&e.state, cut)?))
            .sum()
    }
}

/// `m x r` matrix with orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    matrix: ComplexMatrix,
}

impl Isometry {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let deviation = if matrix.rows() < matrix.cols() {
            f64::INFINITY
        } else {
            matrix.isometry_deviation()
        };
        if deviation > ISOMETRY_TOL {
            return Err(Error::NotIsometry { deviation });
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

/// Labelled positive operators summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<(String, ComplexMatrix)>,
}

impl Povm {
    pub fn new(elements: Vec<(String, ComplexMatrix)>) -> Result<Self> {
        let dim = elements
            .first()
            .map(|(_, e)| e.rows())
            .ok_or_else(|| Error::InvalidConfig("empty POVM".into()))?;
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (_, e) in &elements {
            if e.rows() != dim || e.cols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.rows(),
                });
            }
            let eig = hermitian_eig(e)?;
            if let Some(&min) = eig.values.last() {
                if min < -NEGATIVE_EIG_TOL {
                    return Err(Error::NotPositive { eigenvalue: min });
                }
            }
            sum = &sum + e;
        }
        let deviation = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if deviation > COMPLETENESS_TOL {
            return Err(Error::Incomplete { deviation });
        }
        Ok(Self { elements })
    }

    /// Projective measurement in an orthonormal basis, labels given.
    pub fn from_basis(basis: &[(String, Vec<C64>)]) -> Result<Self> {
        Self::new(
            basis
                .iter()
                .map(|(l, v)| (l.clone(), ComplexMatrix::outer(v, v)))
                .collect(),
        )
    }

    pub fn elements(&self) -> &[(String, ComplexMatrix)] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements[0].1.rows()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// `u_j = sqrt(p_j) v_j` from the eigendecomposition, one per nonzero
/// eigenvalue, so that `sum_j |u_j><u_j| = rho`.
pub fn canonical_vectors(rho: &DensityOperator) -> Result<Vec<StateVector>> {
    let eig = rho.eigen()?;
    eig.values
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > RANK_TOL)
        .map(|(k, &p)| {
            let w = libm::sqrt(p);
            StateVector::subnormalized(eig.vector(k).iter().map(|z| z * w).collect())
        })
        .collect()
}

/// Accepts a caller-supplied family after checking `sum |u_j><u_j| = rho`.
pub fn canonical_vectors_from(rho: &DensityOperator, vectors: Vec<StateVector>) -> Result<Vec<StateVector>> {
    let n = rho.space().total_dim();
    let mut sum = ComplexMatrix::zeros(n, n);
    for v in &vectors {
        if v.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.dim(),
            });
        }
        sum = &sum + &v.projector();
    }
    let err = sum.max_abs_diff(rho.matrix());
    if err > 1e-9 {
        return Err(Error::InvalidConfig(format!(
            "vectors do not sum to the target (error {err:e})"
        )));
    }
    Ok(vectors)
}

/// `v_i = sum_j V[i,j] u_j`, weights `|v_i|^2`, zero rows dropped.
pub fn ensemble_from_isometry(target: &DensityOperator, us: &[StateVector], v: &Isometry) -> Result<Ensemble> {
    let m = v.matrix();
    if m.cols() != us.len() {
        return Err(Error::DimensionMismatch {
            expected: us.len(),
            found: m.cols(),
        });
    }
    let n = target.space().total_dim();
    let mut entries = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let mut vi = alloc::vec![C64::new(0.0, 0.0); n];
        for (j, u) in us.iter().enumerate() {
            let c = m[(i, j)];
            for (x, y) in vi.iter_mut().zip(u.amplitudes()) {
                *x += c * y;
            }
        }
        if let Some(entry) = entry_from_vector(target, vi)? {
            entries.push(entry);
        }
    }
    Ensemble::new(target.clone(), entries)
}

fn entry_from_vector(target: &DensityOperator, v: Vec<C64>) -> Result<Option<EnsembleEntry>> {
    let weight: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if weight < ZERO_WEIGHT {
        return Ok(None);
    }
    let state = PureState::new(target.space().clone(), StateVector::normalize(v)?)?;
    Ok(Some(EnsembleEntry { weight, state }))
}

/// The ensemble Alice and Bob hold after the last party of `psi` measures
/// a rank-1 POVM and announces the outcome.
pub fn ensemble_from_charlie_povm(psi: &PureState, povm: &Povm) -> Result<Ensemble> {
    let dims = psi.space().dims();
    let charlie = dims.len() - 1;
    if dims.len() < 2 {
        return Err(Error::InvalidSubsystem(charlie));
    }
    let dc = dims[charlie];
    if povm.dim() != dc {
        return Err(Error::DimensionMismatch {
            expected: dc,
            found: povm.dim(),
        });
    }
    let keep: Vec<usize> = (0..charlie).collect();
    let target = psi.reduced(&keep)?;
    let amps = psi.amplitudes();
    let nab = amps.len() / dc;
    let mut entries = Vec::with_capacity(povm.len());
    for (label, e) in povm.elements() {
        let f = rank_one_factor(label, e)?;
        let w: Vec<C64> = (0..nab)
            .map(|ab| (0..dc).map(|c| f[c].conj() * amps[ab * dc + c]).sum())
            .collect();
        if let Some(entry) = entry_from_vector(&target, w)? {
            entries.push(entry);
        }
    }
    Ensemble::new(target, entries)
}

/// `f` with `E = |f><f|`, or an error if `E` has rank above one.
fn rank_one_factor(label: &str, e: &ComplexMatrix) -> Result<Vec<C64>> {
    let eig = hermitian_eig(e)?;
    let second = eig.values.get(1).copied().unwrap_or(0.0);
    if second > RANK_ONE_TOL {
        return Err(Error::NotRankOne {
            label: label.into(),
            second,
        });
    }
    let w = libm::sqrt(eig.values[0].max(0.0));
    Ok(eig.vector(0).iter().map(|z| z * w).collect())
}

/// Splits every element along its eigenbasis into rank-1 pieces labelled
/// `label.k`.
pub fn refine_povm(povm: &Povm) -> Result<Povm> {
    let mut out = Vec::new();
    for (label, e) in povm.elements() {
        let eig = hermitian_eig(e)?;
        for (k, &l) in eig.values.iter().enumerate() {
            if l <= RANK_TOL {
                continue;
            }
            let v = eig.vector(k);
            out.push((format!("{label}.{k}"), ComplexMatrix::outer(&v, &v).scale_real(l)));
        }
    }
    Povm::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::PartySpace;
    use alloc::vec;

    #[test]
    fn refine_identity_into_two_projectors() {
        let p = Povm::new(vec![("all".into(), ComplexMatrix::identity(2))]).unwrap();
        let r = refine_povm(&p).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.elements()[0].0, "all.0");
    }

    #[test]
    fn povm_validation() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(matches!(
            Povm::new(vec![("a".into(), half.clone())]),
            Err(Error::Incomplete { .. })
        ));
        let neg = ComplexMatrix::from_diagonal(&[1.5, -0.5]);
        let comp = ComplexMatrix::from_diagonal(&[-0.5, 1.5]);
        assert!(matches!(
            Povm::new(vec![("a".into(), neg), ("b".into(), comp)]),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn non_isometry_rejected() {
        let m = ComplexMatrix::identity(3).scale_real(2.0);
        assert!(matches!(Isometry::new(m), Err(Error::NotIsometry { .. })));
        let wide = ComplexMatrix::zeros(1, 2);
        assert!(Isometry::new(wide).is_err());
    }

    #[test]
    fn pure_rho_has_single_canonical_vector() {
        let psi = crate::states::make_bell(1).unwrap();
        let us = canonical_vectors(&psi.to_density()).unwrap();
        assert_eq!(us.len(), 1);
        assert!(us[0].inner(psi.vector()).norm() > 1.0 - 1e-12);
    }

    #[test]
    fn rank_two_element_rejected_by_charlie_map() {
        let psi = crate::states::make_phi();
        let p = Povm::new(vec![("I".into(), ComplexMatrix::identity(2))]).unwrap();
        assert!(matches!(
            ensemble_from_charlie_povm(&psi, &p),
            Err(Error::NotRankOne { .. })
        ));
    }

    #[test]
    fn ensemble_rejects_wrong_weights() {
        let psi = crate::states::make_bell(0).unwrap();
        let target = psi.to_density();
        let e = EnsembleEntry {
            weight: 0.5,
            state: psi,
        };
        assert!(Ensemble::new(target, vec![e]).is_err());
        let _ = PartySpace::with_dims(&[2]).unwrap();
    }
}
