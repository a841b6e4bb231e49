//! Seeded random objects: Haar states and unitaries, isometries, density
//! operators and POVMs. Used for optimizer restarts and by the test suites.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::ensembles::Povm;
use crate::qmath::{hermitian_eig, inner, ComplexMatrix, StateVector};
use crate::{Result, C64};

/// Deterministic generator for stream `stream` of `seed`; streams are
/// independent, so restart `k` does not depend on how many restarts run.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard complex Gaussian (independent `N(0, 1/2)` parts).
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-random normalized vector.
pub fn haar_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> StateVector {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
        if let Ok(s) = StateVector::normalize(v) {
            return s;
        }
    }
}

/// Orthonormalizes the columns of `m` (modified Gram-Schmidt). Columns are
/// assumed linearly independent, which holds almost surely for Gaussian draws.
pub fn orthonormalize_columns(m: &ComplexMatrix) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = (0..m.cols()).map(|c| m.column(c)).collect();
    for j in 0..cols.len() {
        for i in 0..j {
            let proj = inner(&cols[i], &cols[j]);
            let (head, tail) = cols.split_at_mut(j);
            for (x, y) in tail[0].iter_mut().zip(&head[i]) {
                *x -= proj * y;
            }
        }
        let n = libm::sqrt(cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>());
        for x in &mut cols[j] {
            *x /= n;
        }
    }
    ComplexMatrix::from_columns(&cols).expect("equal column lengths")
}

/// Random `rows x cols` isometry (`rows >= cols`) from orthonormalized
/// Gaussian columns.
pub fn random_isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    orthonormalize_columns(&gaussian_matrix(rng, rows, cols))
}

/// Haar-random unitary.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    random_isometry(rng, dim, dim)
}

/// Random Hermitian matrix `(G + G^dagger) / 2`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, dim, dim);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Random density matrix of the given rank (`G G^dagger / Tr`).
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, dim, rank.max(1));
    let rho = &g * &g.adjoint();
    let tr = rho.trace().re;
    rho.scale_real(1.0 / tr)
}

/// Random positive semidefinite matrix of the given rank, unit trace.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> ComplexMatrix {
    random_density(rng, dim, rank)
}

/// Rank-1 POVM with `outcomes` elements `|f_i><f_i|`, where the `f_i^dagger`
/// are the rows of a random `outcomes x dim` isometry.
pub fn random_rank1_povm<R: Rng + ?Sized>(rng: &mut R, dim: usize, outcomes: usize) -> Result<Povm> {
    let v = random_isometry(rng, outcomes, dim);
    let elements = (0..outcomes)
        .map(|i| {
            let f: Vec<C64> = v.row(i).iter().map(|z| z.conj()).collect();
            (format!("{i}"), ComplexMatrix::outer(&f, &f))
        })
        .collect();
    Povm::new(elements)
}

/// General POVM: random PSD `G_i` normalized as `S^{-1/2} G_i S^{-1/2}`
/// with `S = sum G_i`.
pub fn random_povm<R: Rng + ?Sized>(rng: &mut R, dim: usize, outcomes: usize) -> Result<Povm> {
    let gs: Vec<ComplexMatrix> = (0..outcomes)
        .map(|_| {
            let rank = rng.random_range(1..=dim);
            random_psd(rng, dim, rank)
        })
        .collect();
    let mut s = ComplexMatrix::zeros(dim, dim);
    for g in &gs {
        s = &s + g;
    }
    let eig = hermitian_eig(&s)?;
    let inv_sqrt: Vec<f64> = eig.values.iter().map(|&l| 1.0 / libm::sqrt(l)).collect();
    let s_inv_half = &(&eig.vectors * &ComplexMatrix::from_diagonal(&inv_sqrt)) * &eig.vectors.adjoint();
    let elements = gs
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let e = &(&s_inv_half * g) * &s_inv_half;
            // re-Hermitize against round-off
            let e = (&e + &e.adjoint()).scale_real(0.5);
            (format!("{i}"), e)
        })
        .collect();
    Povm::new(elements)
}
