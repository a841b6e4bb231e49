//! Seeded single-instance invariant checks. Each check builds one random
//! instance from `seed` and returns a description of the first violated
//! invariant. Used by the property suites and the reproduction report.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::ensembles::{canonical_vectors_from, ensemble_from_charlie_povm, ensemble_from_isometry, Isometry, Povm};
use crate::locc::{apply_instrument, channel_output, Instrument, SystemState};
use crate::measures::{Bipartition, EntropyOfEntanglement, RootMeasure};
use crate::qmath::{
    apply_local, hermitian_eig, partial_trace, schmidt, schmidt_probabilities, tensor, vn_entropy, ComplexMatrix,
    StateVector,
};
use crate::random::{haar_state, random_density, random_hermitian, random_isometry, random_unitary, rng_for};
use crate::states::{make_phi, PartySpace, PureState};
use crate::C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Check = fn(u64) -> Result<(), String>;

pub const CASES: u64 = 200;

/// Named suites, in report order.
pub const SUITES: &[(&str, Check)] = &[
    ("schmidt reconstruction", schmidt_roundtrip),
    ("eigen reconstruction", eigen_roundtrip),
    ("tensor product", tensor_oracle),
    ("partial trace", partial_trace_consistency),
    ("trace preservation", trace_preservation),
    ("ensemble reconstruction", ensemble_reconstruction),
    ("HJW correspondence", hjw_correspondence),
    ("local-unitary invariance", local_unitary_invariance),
    ("entropy additivity", entropy_additivity),
    ("marginal entropies agree", marginal_entropies_agree),
];

fn rng(seed: u64) -> ChaCha8Rng {
    // stream 7 keeps the test draws apart from library defaults
    rng_for(seed, 7)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: crate::Error) -> String {
    e.to_string()
}

/// Schmidt decomposition up to 64 x 16 reconstructs the vector.
pub fn schmidt_roundtrip(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let da = r.random_range(1..=64);
    let db = r.random_range(1..=16);
    let psi = haar_state(&mut r, da * db);
    let s = schmidt(&psi, da, db).map_err(err)?;
    let back = s.reconstruct();
    let diff = back
        .iter()
        .zip(psi.amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    ensure(diff < 1e-9, || format!("{da}x{db}: reconstruction error {diff:e}"))?;
    let total: f64 = s.probabilities.iter().sum();
    ensure((total - 1.0).abs() < 1e-9, || {
        format!("{da}x{db}: probabilities sum {total}")
    })?;
    ensure(s.probabilities.windows(2).all(|w| w[0] >= w[1]), || {
        "not descending".into()
    })
}

/// Eigendecomposition of a random 16 x 16 Hermitian matrix.
pub fn eigen_roundtrip(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let a = random_hermitian(&mut r, 16);
    let e = hermitian_eig(&a).map_err(err)?;
    let scale = a.frobenius_norm().max(1.0);
    let recon = e.reconstruct().max_abs_diff(&a);
    ensure(recon < 1e-9 * scale, || format!("reconstruction error {recon:e}"))?;
    let orth = e.vectors.isometry_deviation();
    ensure(orth < 1e-9, || format!("eigenvectors not orthonormal ({orth:e})"))
}

/// `tensor` against the double loop `(A ⊗ B)[(i k),(j l)] = A[i,j] B[k,l]`.
pub fn tensor_oracle(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let (m, n) = (r.random_range(1..=4), r.random_range(1..=4));
    let (p, q) = (r.random_range(1..=4), r.random_range(1..=4));
    let a = crate::random::gaussian_matrix(&mut r, m, n);
    let b = crate::random::gaussian_matrix(&mut r, p, q);
    let t = tensor(&a, &b);
    for i in 0..m {
        for j in 0..n {
            for k in 0..p {
                for l in 0..q {
                    let expect = a[(i, j)] * b[(k, l)];
                    let got = t[(i * p + k, j * q + l)];
                    ensure((expect - got).norm() < 1e-12, || format!("entry ({i}{k},{j}{l})"))?;
                }
            }
        }
    }
    Ok(())
}

/// Tracing out a factor of a product returns the other factor, and every
/// partial trace keeps the trace.
pub fn partial_trace_consistency(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let (da, db) = (r.random_range(1..=4), r.random_range(1..=4));
    let (ka, kb) = (r.random_range(1..=da), r.random_range(1..=db));
    let ra = random_density(&mut r, da, ka);
    let rb = random_density(&mut r, db, kb);
    let prod = tensor(&ra, &rb);
    let ka = partial_trace(&prod, &[da, db], &[0]).map_err(err)?;
    let kb = partial_trace(&prod, &[da, db], &[1]).map_err(err)?;
    ensure(ka.max_abs_diff(&ra) < 1e-12, || "Tr_B(a ⊗ b) != a".into())?;
    ensure(kb.max_abs_diff(&rb) < 1e-12, || "Tr_A(a ⊗ b) != b".into())?;
    let rho = random_density(&mut r, 2 * da * db, 3);
    for keep in [&[0][..], &[1], &[2], &[0, 2], &[1, 2]] {
        let t = partial_trace(&rho, &[da, db, 2], keep).map_err(err)?.trace().re;
        ensure((t - 1.0).abs() < 1e-9, || format!("keep {keep:?}: trace {t}"))?;
    }
    Ok(())
}

fn random_instrument(r: &mut ChaCha8Rng, party: &str, dim: usize) -> Instrument {
    let outcomes = r.random_range(1..=4);
    let v = random_isometry(r, outcomes * dim, dim);
    let ops = (0..outcomes)
        .map(|b| {
            (
                format!("k{b}"),
                ComplexMatrix::from_fn(dim, dim, |i, j| v[(b * dim + i, j)]),
            )
        })
        .collect();
    Instrument::new(party, ops).expect("isometry blocks are complete")
}

/// Instruments preserve trace on pure and mixed inputs; branch
/// probabilities sum to one.
pub fn trace_preservation(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let dims = [r.random_range(2..=3), r.random_range(2..=3), 2];
    let space = PartySpace::with_dims(&dims).map_err(err)?;
    let party = r.random_range(0..3);
    let inst = random_instrument(&mut r, &space.labels()[party].clone(), dims[party]);
    let n = space.total_dim();
    let pure = PureState::new(space.clone(), haar_state(&mut r, n)).map_err(err)?;
    let rank = r.random_range(1..=n);
    let mixed = crate::states::DensityOperator::new(space.clone(), random_density(&mut r, n, rank)).map_err(err)?;
    for state in [SystemState::from(pure), SystemState::from(mixed)] {
        let out = channel_output(&state, &inst).map_err(err)?;
        ensure((out.trace() - 1.0).abs() < 1e-9, || {
            format!("channel trace {}", out.trace())
        })?;
        let p: f64 = apply_instrument(&state, &inst)
            .map_err(err)?
            .iter()
            .map(|b| b.probability)
            .sum();
        ensure((p - 1.0).abs() < 1e-9, || format!("branch probabilities sum {p}"))?;
    }
    Ok(())
}

fn random_tripartite(r: &mut ChaCha8Rng) -> PureState {
    let dims = [r.random_range(2..=4), r.random_range(2..=4), r.random_range(2..=3)];
    let space = PartySpace::with_dims(&dims).unwrap();
    let n = space.total_dim();
    PureState::new(space, haar_state(r, n)).unwrap()
}

/// Rank-1 POVM whose element `i` is `|f_i><f_i|` with `f_i = conj(row_i V)`.
fn povm_from_isometry(v: &ComplexMatrix) -> Povm {
    let elems = (0..v.rows())
        .map(|i| {
            let f: Vec<C64> = v.row(i).iter().map(|z| z.conj()).collect();
            (format!("{i}"), ComplexMatrix::outer(&f, &f))
        })
        .collect();
    Povm::new(elems).expect("rows of an isometry")
}

/// A rank-1 measurement by the last party yields an ensemble that
/// reconstructs `Tr_C |psi><psi|` with weights summing to one.
pub fn ensemble_reconstruction(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let psi = random_tripartite(&mut r);
    let dc = psi.space().dims()[2];
    let m = r.random_range(dc..=2 * dc + 1);
    let povm = povm_from_isometry(&random_isometry(&mut r, m, dc));
    let ens = ensemble_from_charlie_povm(&psi, &povm).map_err(err)?;
    let e = ens.reconstruction_error();
    ensure(e < 1e-8, || format!("reconstruction error {e:e}"))?;
    let w: f64 = ens.entries().iter().map(|x| x.weight).sum();
    ensure((w - 1.0).abs() < 1e-9, || format!("weights sum {w}"))
}

/// On the 8x4x2 state, Charlie's rank-1 POVM `{|f_i><f_i|}` and the
/// isometry `V[i,c] = conj(f_i[c])` on `(u_0, u_1)` give the same ensemble.
pub fn hjw_correspondence(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let phi = make_phi();
    let m = r.random_range(2..=6);
    let v = random_isometry(&mut r, m, 2);
    let via_povm = ensemble_from_charlie_povm(&phi, &povm_from_isometry(&v)).map_err(err)?;
    let amps = phi.amplitudes();
    let family: Vec<StateVector> = (0..2)
        .map(|c| StateVector::subnormalized((0..32).map(|ab| amps[ab * 2 + c]).collect()).unwrap())
        .collect();
    let target = via_povm.target().clone();
    let family = canonical_vectors_from(&target, family).map_err(err)?;
    let via_iso = ensemble_from_isometry(&target, &family, &Isometry::new(v).map_err(err)?).map_err(err)?;
    ensure(via_povm.len() == via_iso.len(), || "ensemble sizes differ".into())?;
    for (a, b) in via_povm.entries().iter().zip(via_iso.entries()) {
        ensure((a.weight - b.weight).abs() < 1e-12, || {
            format!("weights {} vs {}", a.weight, b.weight)
        })?;
        let f = a.state.fidelity(&b.state);
        ensure((f - 1.0).abs() < 1e-9, || format!("fidelity {f}"))?;
    }
    let cut = Bipartition::first_vs_rest(target.space()).map_err(err)?;
    let (x, y) = (
        via_povm.average(&EntropyOfEntanglement, &cut).map_err(err)?,
        via_iso.average(&EntropyOfEntanglement, &cut).map_err(err)?,
    );
    ensure((x - y).abs() < 1e-9, || format!("averages {x} vs {y}"))
}

/// Entropy of entanglement is unchanged by `U_A ⊗ U_B`.
pub fn local_unitary_invariance(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let dims = [r.random_range(2..=6), r.random_range(2..=6)];
    let space = PartySpace::with_dims(&dims).map_err(err)?;
    let psi = PureState::new(space.clone(), haar_state(&mut r, dims[0] * dims[1])).map_err(err)?;
    let ua = random_unitary(&mut r, dims[0]);
    let ub = random_unitary(&mut r, dims[1]);
    let moved = apply_local(psi.amplitudes(), &dims, 0, &ua).map_err(err)?;
    let moved = apply_local(&moved, &dims, 1, &ub).map_err(err)?;
    let moved = PureState::from_amplitudes(space.clone(), moved).map_err(err)?;
    let cut = Bipartition::first_vs_rest(&space).map_err(err)?;
    let m = EntropyOfEntanglement;
    let (e0, e1) = (
        m.evaluate(&psi, &cut).map_err(err)?,
        m.evaluate(&moved, &cut).map_err(err)?,
    );
    ensure((e0 - e1).abs() < 1e-9, || format!("entropy {e0} -> {e1}"))?;
    let p0 = schmidt_probabilities(psi.amplitudes(), dims[0], dims[1]).map_err(err)?;
    let p1 = schmidt_probabilities(moved.amplitudes(), dims[0], dims[1]).map_err(err)?;
    let d = p0.iter().zip(&p1).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ensure(d < 1e-9, || format!("spectrum moved by {d:e}"))
}

/// `S(a ⊗ b) = S(a) + S(b)` and `S(U a U^dagger) = S(a)`.
pub fn entropy_additivity(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let (da, db) = (r.random_range(1..=4), r.random_range(1..=4));
    let (ka, kb) = (r.random_range(1..=da), r.random_range(1..=db));
    let a = random_density(&mut r, da, ka);
    let b = random_density(&mut r, db, kb);
    let sa = vn_entropy(&a).map_err(err)?;
    let sb = vn_entropy(&b).map_err(err)?;
    let sab = vn_entropy(&tensor(&a, &b)).map_err(err)?;
    ensure((sab - sa - sb).abs() < 1e-9, || {
        format!("S(ab) = {sab}, S(a) + S(b) = {}", sa + sb)
    })?;
    let u = random_unitary(&mut r, da);
    let rotated = &(&u * &a) * &u.adjoint();
    let su = vn_entropy(&rotated).map_err(err)?;
    ensure((su - sa).abs() < 1e-9, || format!("S(U a U*) = {su}, S(a) = {sa}"))
}

/// Both marginals of a pure bipartite state have the same entropy.
pub fn marginal_entropies_agree(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let dims = [r.random_range(1..=8), r.random_range(1..=8)];
    let psi = haar_state(&mut r, dims[0] * dims[1]);
    let pa = psi.projector();
    let sa = vn_entropy(&partial_trace(&pa, &dims, &[0]).map_err(err)?).map_err(err)?;
    let sb = vn_entropy(&partial_trace(&pa, &dims, &[1]).map_err(err)?).map_err(err)?;
    ensure((sa - sb).abs() < 1e-9, || format!("S(A) = {sa}, S(B) = {sb}"))
}
