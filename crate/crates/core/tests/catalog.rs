use std::f64::consts::FRAC_1_SQRT_2;

use entassist_core::measures::{Bipartition, EntropyOfEntanglement, RootMeasure};
use entassist_core::qmath::{schmidt_probabilities, shannon_bits, vn_entropy};
use entassist_core::states::{
    make_bell, make_max_entangled, make_mixed_example, make_phi, make_u, purify, DensityOperator, PartySpace,
};
use entassist_core::C64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `|u_0>, |u_1>` on `8 x 4` built ket by ket, `|a>|b>` at `a * 4 + b`.
fn u_oracle() -> [Vec<C64>; 2] {
    let z = c(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
    let r2 = c(2f64.sqrt(), 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let mut u0 = vec![c(0.0, 0.0); 32];
    let mut u1 = vec![c(0.0, 0.0); 32];
    let add = |v: &mut Vec<C64>, a: usize, b: usize, w: C64| v[a * 4 + b] += w / 4.0;
    for (a, b, w) in [
        (0, 0, one),
        (4, 0, z),
        (1, 1, one),
        (5, 1, r2),
        (2, 2, one),
        (6, 2, z),
        (3, 3, one),
        (7, 3, r2),
    ] {
        add(&mut u0, a, b, w);
    }
    for (a, b, w) in [(0, 0, i), (4, 0, z), (1, 1, one), (2, 2, -i), (6, 2, z), (3, 3, -one)] {
        add(&mut u1, a, b, w);
    }
    [u0, u1]
}

#[test]
fn phi_matches_ket_expansion() {
    let [u0, u1] = u_oracle();
    let phi = make_phi();
    assert_eq!(phi.space().dims(), &[8, 4, 2]);
    for ab in 0..32 {
        assert!((phi.amplitudes()[ab * 2] - u0[ab]).norm() < 1e-15);
        assert!((phi.amplitudes()[ab * 2 + 1] - u1[ab]).norm() < 1e-15);
    }
    for (b, u) in [u0, u1].iter().enumerate() {
        let got = make_u(b).unwrap();
        assert!(got.amplitudes().iter().zip(u).all(|(x, y)| (x - y).norm() < 1e-15));
    }
    let nonzero = phi.amplitudes().iter().filter(|z| z.norm() > 0.0).count();
    assert_eq!(nonzero, 14);
    let norm: f64 = phi.amplitudes().iter().map(|z| z.norm_sqr()).sum();
    assert!((norm - 1.0).abs() < 1e-14);
}

#[test]
fn u_vectors_gram_and_spectra() {
    let u0 = make_u(0).unwrap();
    let u1 = make_u(1).unwrap();
    assert!((u0.norm_sqr() - 5.0 / 8.0).abs() < 1e-14);
    assert!((u1.norm_sqr() - 3.0 / 8.0).abs() < 1e-14);
    assert!((u0.inner(&u1) - c(1.0 / 8.0, 0.0)).norm() < 1e-14);
    let p0 = schmidt_probabilities(u0.amplitudes(), 8, 4).unwrap();
    let p1 = schmidt_probabilities(u1.amplitudes(), 8, 4).unwrap();
    for (got, want) in p0.iter().zip([0.3, 0.3, 0.2, 0.2]) {
        assert!((got - want).abs() < 1e-12);
    }
    for (got, want) in p1.iter().zip([1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0]) {
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn phi_marginals() {
    let phi = make_phi();
    let rho_b = phi.reduced(&[1]).unwrap();
    let id = entassist_core::qmath::ComplexMatrix::identity(4).scale_real(0.25);
    assert!(rho_b.matrix().max_abs_diff(&id) < 1e-14);
    let rho_ab = phi.reduced(&[0, 1]).unwrap();
    assert_eq!(rho_ab.rank(1e-12).unwrap(), 2);
}

#[test]
fn mixed_example_structure() {
    let rho = make_mixed_example();
    assert_eq!(rho.space().dims(), &[4, 2, 2]);
    assert!((rho.trace() - 1.0).abs() < 1e-14);
    assert_eq!(rho.rank(1e-12).unwrap(), 4);
    let spectrum = rho.eigen().unwrap().values;
    for v in &spectrum[..4] {
        assert!((v - 0.25).abs() < 1e-12);
    }
    // Each phi_i is a Bell pair on a qubit block of A, so rho_B = I/2.
    let rho_b = rho.partial_trace(&[1]).unwrap();
    let half = entassist_core::qmath::ComplexMatrix::identity(2).scale_real(0.5);
    assert!(rho_b.matrix().max_abs_diff(&half) < 1e-14);
    assert!((rho.purity() - 0.25).abs() < 1e-12);
}

#[test]
fn purification_round_trip() {
    let rho = make_mixed_example();
    let psi = purify(&rho).unwrap();
    assert_eq!(psi.space().dims(), &[4, 2, 2, 4]);
    let back = psi.reduced(&[0, 1, 2]).unwrap();
    assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-12);

    let mixed = DensityOperator::maximally_mixed(PartySpace::with_dims(&[2, 2]).unwrap());
    let p = purify(&mixed).unwrap();
    assert_eq!(p.space().dims(), &[2, 2, 4]);
    let s = vn_entropy(p.reduced(&[0, 1]).unwrap().matrix()).unwrap();
    assert!((s - 2.0).abs() < 1e-12);
}

#[test]
fn bell_and_max_entangled_entropies() {
    for k in 0..4 {
        let b = make_bell(k).unwrap();
        let cut = Bipartition::first_vs_rest(b.space()).unwrap();
        assert!((EntropyOfEntanglement.evaluate(&b, &cut).unwrap() - 1.0).abs() < 1e-12);
    }
    let m = make_max_entangled(8, 4).unwrap();
    let cut = Bipartition::first_vs_rest(m.space()).unwrap();
    assert!((EntropyOfEntanglement.evaluate(&m, &cut).unwrap() - 2.0).abs() < 1e-12);
    assert!(make_max_entangled(2, 4).is_err());
}

#[test]
fn u_decomposition_average_entropy() {
    // (5/8) H(.2,.3,.2,.3) + (3/8) H(1/3,1/6,1/3,1/6)
    let expect = 5.0 / 8.0 * shannon_bits(&[0.2, 0.3, 0.2, 0.3])
        + 3.0 / 8.0 * shannon_bits(&[1.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0, 1.0 / 6.0]);
    assert!((expect - 1.951_205_059_304_601_5).abs() < 1e-12);
    let mut avg = 0.0;
    for b in 0..2 {
        let u = make_u(b).unwrap();
        let p = schmidt_probabilities(u.amplitudes(), 8, 4).unwrap();
        avg += u.norm_sqr() * shannon_bits(&p);
    }
    assert!((avg - expect).abs() < 1e-12);
}
