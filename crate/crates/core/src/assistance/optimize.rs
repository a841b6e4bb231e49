use alloc::format;
use alloc::vec::Vec;

use crate::ensembles::{canonical_vectors, ensemble_from_isometry, Ensemble, Isometry, ZERO_WEIGHT};
use crate::measures::{Bipartition, RootMeasure};
use crate::qmath::{permute_subsystems, vn_entropy, ComplexMatrix, StateVector};
use crate::random::{random_isometry, rng_for};
use crate::states::{DensityOperator, PureState};
use crate::{Error, Result, C64};

const INITIAL_STEP: f64 = 0.1;
const FINAL_STEP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct EoaConfig {
    pub restarts: usize,
    /// Number of ensemble members `m`; `None` means `rank^2`.
    pub max_ensemble_size: Option<usize>,
    pub seed: u64,
    /// Maximum compass sweeps per step size.
    pub refine_iters: usize,
}

impl Default for EoaConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_ensemble_size: None,
            seed: 0,
            refine_iters: 200,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EoaResult {
    /// Average root measure of `certificate`, a lower bound on the EoA.
    pub value: f64,
    pub certificate: Ensemble,
    pub restarts_used: usize,
    /// `min(S(rho_A), S(rho_B))`.
    pub upper_bound: f64,
}

/// Best isometry of one restart.
#[derive(Debug, Clone)]
pub struct RestartOutcome {
    pub restart: usize,
    pub value: f64,
    pub isometry: ComplexMatrix,
}

/// Picks the highest value, ties going to the lowest restart index, so the
/// result does not depend on evaluation order.
pub fn select_best(outcomes: impl IntoIterator<Item = RestartOutcome>) -> Option<RestartOutcome> {
    outcomes.into_iter().fold(None, |best, o| match best {
        Some(b) if b.value > o.value || (b.value == o.value && b.restart < o.restart) => Some(b),
        _ => Some(o),
    })
}

/// A decomposition search over `m x r` isometries `V`, scoring
/// `sum_i |v_i|^2 E(v_i / |v_i|)` with `v_i = sum_j V[i,j] u_j`.
pub struct EoaProblem<'a> {
    target: DensityOperator,
    family: Vec<StateVector>,
    /// `family` regrouped in cut order.
    blocks: Vec<Vec<C64>>,
    cut: Bipartition,
    dim_a: usize,
    dim_b: usize,
    members: usize,
    measure: &'a dyn RootMeasure,
    config: EoaConfig,
}

impl core::fmt::Debug for EoaProblem<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("EoaProblem")
            .field("rank", &self.family.len())
            .field("members", &self.members)
            .field("measure", &self.measure.name())
            .field("config", &self.config)
            .finish()
    }
}

impl<'a> EoaProblem<'a> {
    /// `family` must satisfy `sum |u_j><u_j| = target`, see
    /// [`crate::ensembles::canonical_vectors`].
    pub fn new(
        target: DensityOperator,
        family: Vec<StateVector>,
        cut: Bipartition,
        measure: &'a dyn RootMeasure,
        config: EoaConfig,
    ) -> Result<Self> {
        if !cut.covers(target.space()) {
            return Err(Error::InvalidCut("cut must cover the decomposed parties".into()));
        }
        if config.restarts == 0 || config.refine_iters == 0 {
            return Err(Error::InvalidConfig(
                "restarts and refine_iters must be positive".into(),
            ));
        }
        let rank = family.len();
        if rank == 0 {
            return Err(Error::InvalidConfig("empty vector family".into()));
        }
        let members = config.max_ensemble_size.unwrap_or(rank * rank);
        if members < rank {
            return Err(Error::InvalidConfig(format!(
                "max ensemble size {members} is below the rank {rank}"
            )));
        }
        let dims = target.space().dims();
        let order: Vec<usize> = cut.left().iter().chain(cut.right()).copied().collect();
        let blocks = family
            .iter()
            .map(|u| permute_subsystems(u.amplitudes(), dims, &order))
            .collect::<Result<Vec<_>>>()?;
        let dim_a = cut.left().iter().map(|&p| dims[p]).product();
        let dim_b = cut.right().iter().map(|&p| dims[p]).product();
        Ok(Self {
            target,
            family,
            blocks,
            cut,
            dim_a,
            dim_b,
            members,
            measure,
            config,
        })
    }

    /// Decompositions of `Tr_C |psi><psi|` (last party traced out), first
    /// remaining party against the rest, with the eigen family.
    pub fn from_pure(psi: &PureState, measure: &'a dyn RootMeasure, config: EoaConfig) -> Result<Self> {
        let n = psi.space().len();
        if n < 3 {
            return Err(Error::InvalidConfig("need at least three parties".into()));
        }
        let keep: Vec<usize> = (0..n - 1).collect();
        let target = psi.reduced(&keep)?;
        let family = canonical_vectors(&target)?;
        let cut = Bipartition::first_vs_rest(target.space())?;
        Self::new(target, family, cut, measure, config)
    }

    pub fn target(&self) -> &DensityOperator {
        &self.target
    }

    pub fn rank(&self) -> usize {
        self.family.len()
    }

    pub fn members(&self) -> usize {
        self.members
    }

    pub fn config(&self) -> &EoaConfig {
        &self.config
    }

    pub fn cut(&self) -> &Bipartition {
        &self.cut
    }

    fn row_value(&self, row: &[C64]) -> f64 {
        let len = self.dim_a * self.dim_b;
        let mut v = alloc::vec![C64::new(0.0, 0.0); len];
        for (c, u) in row.iter().zip(&self.blocks) {
            for (x, y) in v.iter_mut().zip(u) {
                *x += c * y;
            }
        }
        let w: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if w < ZERO_WEIGHT {
            return 0.0;
        }
        // Nonzero, finite input: Schmidt probabilities cannot fail here.
        w * self
            .measure
            .evaluate_amplitudes(&v, self.dim_a, self.dim_b)
            .unwrap_or(0.0)
    }

    /// Average root measure of the decomposition generated by `v`.
    pub fn objective(&self, v: &ComplexMatrix) -> f64 {
        (0..v.rows()).map(|i| self.row_value(v.row(i))).sum()
    }

    /// Seeded random start plus compass refinement. Restart `k` uses its
    /// own random stream, so its outcome does not depend on other restarts.
    pub fn run_restart(&self, k: usize) -> RestartOutcome {
        let mut rng = rng_for(self.config.seed, k as u64);
        let v = random_isometry(&mut rng, self.members, self.rank());
        let (value, isometry) = self.compass(v);
        RestartOutcome {
            restart: k,
            value,
            isometry,
        }
    }

    /// Coordinate search over the anti-Hermitian generators `E_pq - E_qp`
    /// and `i(E_pq + E_qp)`: each coordinate move is an exact Givens
    /// rotation of rows `p, q`, so `V` stays an isometry.
    fn compass(&self, mut v: ComplexMatrix) -> (f64, ComplexMatrix) {
        let m = v.rows();
        let mut rows: Vec<f64> = (0..m).map(|i| self.row_value(v.row(i))).collect();
        let mut total: f64 = rows.iter().sum();
        let mut step = INITIAL_STEP;
        while step >= FINAL_STEP {
            for _ in 0..self.config.refine_iters {
                let mut improved = false;
                for p in 0..m {
                    for q in p + 1..m {
                        for imaginary in [false, true] {
                            for sign in [1.0, -1.0] {
                                let (rp, rq) = givens_rows(&v, p, q, imaginary, sign * step);
                                let vp = self.row_value(&rp);
                                let vq = self.row_value(&rq);
                                let candidate = total - rows[p] - rows[q] + vp + vq;
                                if candidate > total + 1e-15 {
                                    set_row(&mut v, p, &rp);
                                    set_row(&mut v, q, &rq);
                                    rows[p] = vp;
                                    rows[q] = vq;
                                    total = rows.iter().sum();
                                    improved = true;
                                    break;
                                }
                            }
                        }
                    }
                }
                if !improved {
                    break;
                }
            }
            step *= 0.5;
        }
        (total, v)
    }

    /// Builds the certificate for the winning restart.
    pub fn finish(&self, best: RestartOutcome, restarts_used: usize) -> Result<EoaResult> {
        let iso = Isometry::new(best.isometry)?;
        let certificate = ensemble_from_isometry(&self.target, &self.family, &iso)?;
        let value = certificate.average(self.measure, &self.cut)?;
        Ok(EoaResult {
            value,
            certificate,
            restarts_used,
            upper_bound: upper_bound_of(&self.target, &self.cut)?,
        })
    }

    /// All restarts in order, single-threaded.
    pub fn solve(&self) -> Result<EoaResult> {
        let n = self.config.restarts;
        let best = select_best((0..n).map(|k| self.run_restart(k))).expect("at least one restart");
        self.finish(best, n)
    }
}

/// Rows `p, q` of `G V` for the rotation `exp(t X)` with
/// `X = E_pq - E_qp` (real) or `X = i(E_pq + E_qp)` (imaginary).
fn givens_rows(v: &ComplexMatrix, p: usize, q: usize, imaginary: bool, t: f64) -> (Vec<C64>, Vec<C64>) {
    let (s, c) = libm::sincos(t);
    let (g_pq, g_qp) = if imaginary {
        (C64::new(0.0, s), C64::new(0.0, s))
    } else {
        (C64::new(s, 0.0), C64::new(-s, 0.0))
    };
    let rp = v.row(p);
    let rq = v.row(q);
    let new_p = rp.iter().zip(rq).map(|(a, b)| a * c + g_pq * b).collect();
    let new_q = rp.iter().zip(rq).map(|(a, b)| g_qp * a + b * c).collect();
    (new_p, new_q)
}

fn set_row(v: &mut ComplexMatrix, r: usize, row: &[C64]) {
    for (c, z) in row.iter().enumerate() {
        v[(r, c)] = *z;
    }
}

/// Best decomposition found for `target` with the given family and cut.
pub fn eoa_optimize(
    target: &DensityOperator,
    family: Vec<StateVector>,
    cut: &Bipartition,
    measure: &dyn RootMeasure,
    config: &EoaConfig,
) -> Result<EoaResult> {
    EoaProblem::new(target.clone(), family, cut.clone(), measure, config.clone())?.solve()
}

/// [`eoa_optimize`] for a pure state whose last party assists.
pub fn eoa_optimize_pure(psi: &PureState, measure: &dyn RootMeasure, config: &EoaConfig) -> Result<EoaResult> {
    EoaProblem::from_pure(psi, measure, config.clone())?.solve()
}

/// `min(S(rho_left), S(rho_right))` for a state on the cut's parties.
pub fn upper_bound_of(rho: &DensityOperator, cut: &Bipartition) -> Result<f64> {
    let left = vn_entropy(rho.partial_trace(cut.left())?.matrix())?;
    let right = vn_entropy(rho.partial_trace(cut.right())?.matrix())?;
    Ok(left.min(right))
}

/// Local-entropy bound on the EoA of a pure state whose last party assists:
/// `min(S(rho_A), S(rho_B))` for the first party against the others.
pub fn eoa_upper_bound(psi: &PureState) -> Result<f64> {
    let n = psi.space().len();
    if n < 3 {
        return Err(Error::InvalidConfig("need at least three parties".into()));
    }
    let keep: Vec<usize> = (0..n - 1).collect();
    let rho = psi.reduced(&keep)?;
    upper_bound_of(&rho, &Bipartition::first_vs_rest(rho.space())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcome(restart: usize, value: f64) -> RestartOutcome {
        RestartOutcome {
            restart,
            value,
            isometry: ComplexMatrix::identity(1),
        }
    }

    #[test]
    fn best_selection_breaks_ties_by_lowest_restart() {
        let b = select_best([outcome(3, 1.0), outcome(1, 1.0), outcome(2, 0.5)]).unwrap();
        assert_eq!(b.restart, 1);
        let b = select_best([outcome(0, 0.2), outcome(5, 0.9)]).unwrap();
        assert_eq!(b.restart, 5);
    }

    #[test]
    fn givens_rows_preserve_isometry() {
        let mut rng = rng_for(7, 0);
        let mut v = random_isometry(&mut rng, 4, 2);
        let (rp, rq) = givens_rows(&v, 0, 3, true, 0.37);
        set_row(&mut v, 0, &rp);
        set_row(&mut v, 3, &rq);
        let (rp, rq) = givens_rows(&v, 1, 2, false, -1.1);
        set_row(&mut v, 1, &rp);
        set_row(&mut v, 2, &rq);
        assert!(v.isometry_deviation() < 1e-14);
    }

    #[test]
    fn config_validation() {
        let psi = crate::states::make_phi();
        let m = crate::measures::EntropyOfEntanglement;
        let cfg = EoaConfig {
            max_ensemble_size: Some(1),
            ..EoaConfig::default()
        };
        assert!(matches!(
            EoaProblem::from_pure(&psi, &m, cfg),
            Err(Error::InvalidConfig(_))
        ));
        let cfg = EoaConfig {
            restarts: 0,
            ..EoaConfig::default()
        };
        assert!(EoaProblem::from_pure(&psi, &m, cfg).is_err());
    }
}
