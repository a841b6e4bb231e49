//! Concrete states of the 8x4x2 pure and 4x2x2 mixed counterexamples.
//!
//! Amplitudes are written out term by term (with `z = (1+i)/sqrt 2`,
//! `|±i> = (|0> ± i|1>)/sqrt 2`) rather than generated at run time, so each
//! table can be checked against the defining expressions by eye.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use super::{DensityOperator, PartySpace, PureState};
use crate::qmath::{hermitian_eig, tensor, ComplexMatrix, StateVector};
use crate::{Error, Result, C64};

/// Dimensions `(A, B, C)` of the pure counterexample.
pub const PHI_DIMS: [usize; 3] = [8, 4, 2];
/// Dimensions `(A, B, C)` of the mixed counterexample.
pub const MIXED_EXAMPLE_DIMS: [usize; 3] = [4, 2, 2];

const Q: f64 = 0.25;
/// `z / 4 = (1 + i) / (4 sqrt 2)`, real and imaginary part.
const Z4: f64 = SQRT_2 / 8.0;
const R4: f64 = SQRT_2 / 4.0;

/// Nonzero entries `(a, b, re, im)` of `|u_0>` on `8 x 4`:
/// `(|0> + z|4>)|0> + (|1> + sqrt2|5>)|1> + (|2> + z|6>)|2> + (|3> + sqrt2|7>)|3>`, over 4.
const U0: [(usize, usize, f64, f64); 8] = [
    (0, 0, Q, 0.0),
    (4, 0, Z4, Z4),
    (1, 1, Q, 0.0),
    (5, 1, R4, 0.0),
    (2, 2, Q, 0.0),
    (6, 2, Z4, Z4),
    (3, 3, Q, 0.0),
    (7, 3, R4, 0.0),
];

/// Nonzero entries of `|u_1>`:
/// `(i|0> + z|4>)|0> + |1>|1> + (-i|2> + z|6>)|2> - |3>|3>`, over 4.
const U1: [(usize, usize, f64, f64); 6] = [
    (0, 0, 0.0, Q),
    (4, 0, Z4, Z4),
    (1, 1, Q, 0.0),
    (2, 2, 0.0, -Q),
    (6, 2, Z4, Z4),
    (3, 3, -Q, 0.0),
];

/// Subnormalized `|u_b>` on `8 x 4`, the `|b>_C` component of [`make_phi`].
pub fn make_u(b: usize) -> Result<StateVector> {
    let table: &[(usize, usize, f64, f64)] = match b {
        0 => &U0,
        1 => &U1,
        _ => return Err(Error::OutOfRange { index: b, limit: 2 }),
    };
    let db = PHI_DIMS[1];
    let mut amps = vec![C64::new(0.0, 0.0); PHI_DIMS[0] * db];
    for &(a, bb, re, im) in table {
        amps[a * db + bb] = C64::new(re, im);
    }
    StateVector::subnormalized(amps)
}

/// The `8 x 4 x 2` pure state `|Phi> = |u_0>|0> + |u_1>|1>`.
pub fn make_phi() -> PureState {
    let u = [make_u(0).expect("b = 0"), make_u(1).expect("b = 1")];
    let dc = PHI_DIMS[2];
    let mut amps = vec![C64::new(0.0, 0.0); PHI_DIMS.iter().product()];
    for (c, uc) in u.iter().enumerate() {
        for (ab, z) in uc.amplitudes().iter().enumerate() {
            amps[ab * dc + c] = *z;
        }
    }
    let space = PartySpace::with_dims(&PHI_DIMS).expect("valid dims");
    PureState::from_amplitudes(space, amps).expect("|Phi> is normalized")
}

/// `(|phi_i>_AB, |c_i>_C)` for `i = 1..4` of the mixed example:
/// `phi_1 = (|01>+|10>)/√2` with `|0>`, `phi_2 = (|00>+|11>)/√2` with `|1>`,
/// `phi_3 = (|21>+|30>)/√2` with `|+>`, `phi_4 = (|20>+|31>)/√2` with `|->`.
pub fn make_mixed_components() -> Vec<(StateVector, StateVector)> {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let ab = |i: usize, j: usize| {
        let mut v = vec![C64::new(0.0, 0.0); 8];
        v[i] = h;
        v[j] = h;
        StateVector::new(v).expect("normalized")
    };
    let c = |a: f64, b: f64| StateVector::new(vec![C64::new(a, 0.0), C64::new(b, 0.0)]).expect("normalized");
    // flat AB index = a * 2 + b
    vec![
        (ab(1, 2), c(1.0, 0.0)),
        (ab(0, 3), c(0.0, 1.0)),
        (ab(5, 6), c(FRAC_1_SQRT_2, FRAC_1_SQRT_2)),
        (ab(4, 7), c(FRAC_1_SQRT_2, -FRAC_1_SQRT_2)),
    ]
}

/// `(1/4) sum_i |phi_i><phi_i| ⊗ |c_i><c_i|` on `4 x 2 x 2`.
pub fn make_mixed_example() -> DensityOperator {
    let mut m = ComplexMatrix::zeros(16, 16);
    for (phi, c) in make_mixed_components() {
        m = &m + &tensor(&phi.projector(), &c.projector()).scale_real(0.25);
    }
    let space = PartySpace::with_dims(&MIXED_EXAMPLE_DIMS).expect("valid dims");
    DensityOperator::new(space, m).expect("valid density operator")
}

/// Two-qubit Bell states: 0 `Phi+`, 1 `Phi-`, 2 `Psi+`, 3 `Psi-`.
pub fn make_bell(k: usize) -> Result<PureState> {
    let h = FRAC_1_SQRT_2;
    let amps = match k {
        0 => [h, 0.0, 0.0, h],
        1 => [h, 0.0, 0.0, -h],
        2 => [0.0, h, h, 0.0],
        3 => [0.0, h, -h, 0.0],
        _ => return Err(Error::OutOfRange { index: k, limit: 4 }),
    };
    PureState::from_amplitudes(
        PartySpace::with_dims(&[2, 2])?,
        amps.iter().map(|&x| C64::new(x, 0.0)).collect(),
    )
}

/// `sum_{k < dB} |k>|k> / sqrt(dB)` on `dA x dB`, requires `dB <= dA`.
pub fn make_max_entangled(dim_a: usize, dim_b: usize) -> Result<PureState> {
    if dim_b > dim_a || dim_b == 0 {
        return Err(Error::InvalidConfig(alloc::format!(
            "maximally entangled state needs 0 < dB <= dA, got {dim_a}x{dim_b}"
        )));
    }
    let amp = C64::new(1.0 / libm::sqrt(dim_b as f64), 0.0);
    let mut amps = vec![C64::new(0.0, 0.0); dim_a * dim_b];
    for k in 0..dim_b {
        amps[k * dim_b + k] = amp;
    }
    PureState::from_amplitudes(PartySpace::with_dims(&[dim_a, dim_b])?, amps)
}

/// Eigen-purification `sum_i sqrt(p_i) |v_i> |i>_C` with `dim C = rank(rho)`.
///
/// Any other purification differs from this one by an isometry on the
/// purifying party.
pub fn purify(rho: &DensityOperator) -> Result<PureState> {
    let eig = hermitian_eig(rho.matrix())?;
    let kept: Vec<usize> = (0..eig.values.len()).filter(|&k| eig.values[k] > 1e-12).collect();
    let rank = kept.len().max(1);
    let n = rho.space().total_dim();
    let mut amps = vec![C64::new(0.0, 0.0); n * rank];
    for (i, &k) in kept.iter().enumerate() {
        let w = libm::sqrt(eig.values[k]);
        for (ab, z) in eig.vector(k).iter().enumerate() {
            amps[ab * rank + i] = z * w;
        }
    }
    let purifier = PartySpace::new(vec![rho.space().fresh_label()], vec![rank])?;
    let space = rho.space().join(&purifier)?;
    // Renormalize away the eigenvalue round-off.
    PureState::new(space, StateVector::normalize(amps)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u_vectors_squared_norms() {
        assert!((make_u(0).unwrap().norm_sqr() - 5.0 / 8.0).abs() < 1e-15);
        assert!((make_u(1).unwrap().norm_sqr() - 3.0 / 8.0).abs() < 1e-15);
        assert!(make_u(2).is_err());
    }

    #[test]
    fn bell_and_max_entangled() {
        let b = make_bell(0).unwrap();
        assert!((b.amplitudes()[0].re - FRAC_1_SQRT_2).abs() < 1e-16);
        assert!(make_bell(4).is_err());
        assert!(make_max_entangled(2, 4).is_err());
        assert_eq!(make_max_entangled(8, 4).unwrap().space().dims(), &[8, 4]);
    }

    #[test]
    fn purify_pure_state_has_trivial_purifier() {
        let rho = make_bell(2).unwrap().to_density();
        let p = purify(&rho).unwrap();
        assert_eq!(p.space().dims(), &[2, 2, 1]);
        assert_eq!(p.space().labels()[2], "C");
    }
}
