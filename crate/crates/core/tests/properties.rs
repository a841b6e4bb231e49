use entassist_core::checks as common;

use entassist_core::assistance::{
    eoa_optimize_pure, eoa_upper_bound, ncopy_lambda_analytic, span_deficit_oracle, EoaConfig, NCopyCombo,
};
use entassist_core::ensembles::{ensemble_from_charlie_povm, refine_povm};
use entassist_core::locc::assisted_outcome;
use entassist_core::measures::{Bipartition, EntropyOfEntanglement};
use entassist_core::qmath::{hermitian_eig, vn_entropy, ComplexMatrix};
use entassist_core::random::{haar_state, random_povm, random_rank1_povm, rng_for};
use entassist_core::states::{make_phi, PartySpace, PureState};
use entassist_core::C64;
use proptest::prelude::*;

fn cfg() -> ProptestConfig {
    ProptestConfig::with_cases(common::CASES as u32)
}

macro_rules! suite {
    ($name:ident, $check:path) => {
        proptest! {
            #![proptest_config(cfg())]
            #[test]
            fn $name(seed in any::<u64>()) {
                if let Err(msg) = $check(seed) {
                    prop_assert!(false, "{}", msg);
                }
            }
        }
    };
}

suite!(schmidt_reconstruction, common::schmidt_roundtrip);
suite!(eigen_reconstruction, common::eigen_roundtrip);
suite!(tensor_matches_double_loop, common::tensor_oracle);
suite!(partial_trace_consistency, common::partial_trace_consistency);
suite!(instruments_preserve_trace, common::trace_preservation);
suite!(ensembles_reconstruct_target, common::ensemble_reconstruction);
suite!(hjw_povm_matches_isometry, common::hjw_correspondence);
suite!(entropy_local_unitary_invariance, common::local_unitary_invariance);
suite!(entropy_additive_and_unitary_invariant, common::entropy_additivity);
suite!(pure_marginal_entropies_agree, common::marginal_entropies_agree);

fn c64() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im))
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn span_oracle_ignores_global_phase(x in c64(), y in c64(), theta in 0.0..6.3f64) {
        prop_assume!(x.norm_sqr() + y.norm_sqr() > 1e-6);
        let ph = C64::from_polar(1.0, theta);
        let a = span_deficit_oracle(x, y).unwrap();
        let b = span_deficit_oracle(ph * x, ph * y).unwrap();
        for (p, q) in a.iter().zip(&b) {
            prop_assert!((p - q).abs() < 1e-12, "{:?} vs {:?}", a, b);
        }
    }

    #[test]
    fn lambda_table_sums_to_one(c in prop::collection::vec(c64(), 4)) {
        prop_assume!(c.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-6);
        let combo = NCopyCombo::new(2, &c).unwrap();
        let total: f64 = ncopy_lambda_analytic(&combo).iter().flatten().sum();
        prop_assert!((total - 1.0).abs() < 1e-9, "sum {}", total);
    }

    /// Splitting a POVM element into rank-1 pieces gives pure outcomes whose
    /// average entanglement is at least the hashing bound of the unsplit
    /// (mixed) outcome; splitting an already rank-1 POVM changes nothing.
    #[test]
    fn charlie_refinement_never_loses_entanglement(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 3);
        let phi = make_phi();
        let rho = phi.to_density();
        let cut = Bipartition::first_vs_rest(&PartySpace::with_dims(&[8, 4]).unwrap()).unwrap();
        let coarse = random_povm(&mut rng, 2, 3).unwrap();
        for (_, e) in coarse.elements() {
            let Some((p, out)) = assisted_outcome(&rho, e).unwrap() else { continue };
            let s_ab = vn_entropy(out.matrix()).unwrap();
            let s_a = vn_entropy(out.partial_trace(&[0]).unwrap().matrix()).unwrap();
            let s_b = vn_entropy(out.partial_trace(&[1]).unwrap().matrix()).unwrap();
            let hashing = (s_a - s_ab).max(s_b - s_ab).max(0.0);
            let split = hermitian_eig(e).unwrap();
            let mut avg = 0.0;
            for (k, &l) in split.values.iter().enumerate() {
                if l <= 1e-12 {
                    continue;
                }
                let v = split.vector(k);
                let piece = ComplexMatrix::outer(&v, &v).scale_real(l);
                let Some((q, pure)) = assisted_outcome(&rho, &piece).unwrap() else { continue };
                avg += q * vn_entropy(pure.partial_trace(&[0]).unwrap().matrix()).unwrap();
            }
            avg /= p;
            prop_assert!(avg >= hashing - 1e-9, "refined {} < bound {}", avg, hashing);
        }
        let rank1 = random_rank1_povm(&mut rng, 2, 4).unwrap();
        let a = ensemble_from_charlie_povm(&phi, &rank1).unwrap().average(&EntropyOfEntanglement, &cut).unwrap();
        let b = ensemble_from_charlie_povm(&phi, &refine_povm(&rank1).unwrap()).unwrap()
            .average(&EntropyOfEntanglement, &cut).unwrap();
        prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
    }
}

fn small_tripartite(seed: u64) -> PureState {
    let mut rng = rng_for(seed, 5);
    let space = PartySpace::with_dims(&[2, 2, 2]).unwrap();
    PureState::new(space, haar_state(&mut rng, 8)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Value below the local-entropy bound, certificate valid, and more
    /// (nested) restarts never do worse.
    #[test]
    fn eoa_bounds_certificate_and_nesting(seed in any::<u64>()) {
        let psi = small_tripartite(seed);
        let base = EoaConfig { restarts: 2, seed, refine_iters: 50, ..Default::default() };
        let r2 = eoa_optimize_pure(&psi, &EntropyOfEntanglement, &base).unwrap();
        let r4 = eoa_optimize_pure(&psi, &EntropyOfEntanglement, &EoaConfig { restarts: 4, ..base }).unwrap();
        let ub = eoa_upper_bound(&psi).unwrap();
        prop_assert!(r4.value <= ub + 1e-8, "{} > {}", r4.value, ub);
        prop_assert!(r4.value >= r2.value, "{} < {}", r4.value, r2.value);
        prop_assert!(r4.certificate.reconstruction_error() < 1e-8);
        let cut = Bipartition::first_vs_rest(r4.certificate.target().space()).unwrap();
        let again = r4.certificate.average(&EntropyOfEntanglement, &cut).unwrap();
        prop_assert!((again - r4.value).abs() < 1e-9);
    }
}
