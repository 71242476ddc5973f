//! Property tests: structural invariants that must hold for arbitrary
//! parameters and states, not just hand-picked examples.

use ndarray::Array2;
use num_complex::Complex64;
use proptest::prelude::*;

use cbhm::hamiltonian::build_hamiltonian;
use cbhm::basis::TwoExcitationBasis;
use cbhm::model::{dispersion_pair, single_excitation_solve};
use cbhm::observables::{entanglement_entropy, ipr, EntanglementCut};
use cbhm::params::ModelParams;
use cbhm::state::TwoExcitationState;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Model parameters with moderate couplings and optional hard-core modes.
fn arb_params(n_range: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = ModelParams> {
    (
        n_range,
        -3.0..3.0f64,
        -3.0..3.0f64,
        -10.0..10.0f64,
        -10.0..10.0f64,
        -10.0..10.0f64,
        -5.0..5.0f64,
        -3.0..3.0f64,
        any::<bool>(),
        any::<bool>(),
    )
        .prop_map(
            |(n, j1, j2, u1, u2, u3, omega, delta, hc_a, hc_b)| ModelParams {
                j1,
                j2,
                u1,
                u2,
                u3,
                omega,
                delta,
                n,
                u1_infinite: hc_a,
                u2_infinite: hc_b,
            },
        )
}

/// A normalized state with amplitudes drawn uniformly; `hardcore` clears
/// the same-site same-species amplitudes.
fn arb_state(
    n_range: std::ops::RangeInclusive<usize>,
    hardcore: bool,
) -> impl Strategy<Value = TwoExcitationState> {
    n_range
        .prop_flat_map(move |n| {
            (
                Just(n),
                proptest::collection::vec(-1.0..1.0f64, 6 * n * n),
            )
        })
        .prop_filter_map("state must have usable norm", move |(n, raw)| {
            let block = |offset: usize| {
                Array2::from_shape_fn((n, n), |(i, j)| {
                    let base = offset + 2 * (i * n + j);
                    c(raw[base], raw[base + 1])
                })
            };
            let mut a = block(0);
            let b = block(2 * n * n);
            let mut c_mat = block(4 * n * n);
            if hardcore {
                for i in 0..n {
                    a[(i, i)] = c(0.0, 0.0);
                    c_mat[(i, i)] = c(0.0, 0.0);
                }
            }
            let state = TwoExcitationState::from_matrices(a, b, c_mat);
            (state.weighted_norm_sq() > 1e-6).then(|| state.normalized().unwrap())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// The drive splits each momentum's two-level block symmetrically: the
    /// dressed band energies always sum to the bare dispersion sum.
    #[test]
    fn dressed_bands_sum_to_bare_dispersions(
        params in arb_params(2..=12),
        k in -10.0..10.0f64,
    ) {
        let pair = single_excitation_solve(&params, k);
        let (w, wp) = dispersion_pair(&params, k);
        prop_assert!((pair.eps_plus + pair.eps_minus - (w + wp)).abs() < 1e-12);
        prop_assert!(pair.eps_minus <= pair.eps_plus);
    }

    /// Lattice dispersions are 2π-periodic.
    #[test]
    fn dispersions_are_two_pi_periodic(
        params in arb_params(2..=12),
        k in -10.0..10.0f64,
    ) {
        let here = dispersion_pair(&params, k);
        let shifted = dispersion_pair(&params, k + 2.0 * std::f64::consts::PI);
        prop_assert!((here.0 - shifted.0).abs() < 1e-12);
        prop_assert!((here.1 - shifted.1).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Normalizing twice equals normalizing once.
    #[test]
    fn normalization_is_idempotent(state in arb_state(2..=8, false)) {
        let again = state.normalized().unwrap();
        prop_assert!(again.distance_max(&state) < 1e-14);
        prop_assert!((state.weighted_norm_sq() - 1.0).abs() < 1e-12);
    }

    /// Packing to the flat coefficient vector preserves the weighted norm,
    /// and unpacking returns the exact state.
    #[test]
    fn pack_roundtrips_and_preserves_norm(
        hardcore in any::<bool>(),
        state in arb_state(2..=8, true),
    ) {
        // The generated state has hard-core-safe amplitudes either way, so
        // both basis layouts must round-trip it.
        let basis = TwoExcitationBasis::new_hardcore(state.n(), hardcore, hardcore).unwrap();
        let v = basis.pack(&state);
        let two_norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((two_norm_sq - state.weighted_norm_sq()).abs() < 1e-12);
        prop_assert!(basis.unpack(&v).distance_max(&state) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// The Hamiltonian is Hermitian and commutes with lattice translation
    /// for every admissible parameter set.
    #[test]
    fn hamiltonian_is_hermitian_and_translation_invariant(
        params in arb_params(2..=10),
    ) {
        let h = build_hamiltonian(&params).unwrap();
        let scale = 1.0 + h.entries().iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(h.hermiticity_deviation() <= 1e-12 * scale);
        prop_assert!(h.translation_commutator_norm() <= 1e-12 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(25))]

    /// With the drive and all interactions off, the two-excitation spectrum
    /// is exactly the multiset of two single-particle dispersion sums.
    #[test]
    fn noninteracting_spectrum_is_pairwise_dispersion_sums(
        n in 2..=8usize,
        j1 in -3.0..3.0f64,
        j2 in -3.0..3.0f64,
        delta in -3.0..3.0f64,
    ) {
        let params = ModelParams {
            j1,
            j2,
            delta,
            n,
            ..ModelParams::default()
        };
        let h = build_hamiltonian(&params).unwrap();
        let mut eigen = h.eigenvalues().unwrap();

        let momenta: Vec<f64> = (0..n).map(|r| params.momentum(r)).collect();
        let mut sums = Vec::new();
        for (i, &k) in momenta.iter().enumerate() {
            let (wa_k, wb_k) = dispersion_pair(&params, k);
            for &q in &momenta[i..] {
                let (wa_q, wb_q) = dispersion_pair(&params, q);
                sums.push(wa_k + wa_q);
                sums.push(wb_k + wb_q);
            }
            for &q in &momenta {
                let (wa_q, _) = dispersion_pair(&params, q);
                sums.push(wa_q + wb_k);
            }
        }
        sums.sort_by(f64::total_cmp);
        eigen.sort_by(f64::total_cmp);
        prop_assert_eq!(eigen.len(), sums.len());
        for (e, s) in eigen.iter().zip(&sums) {
            prop_assert!((e - s).abs() < 1e-10, "eigenvalue {} vs sum {}", e, s);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Participation is bounded: at most 1 (one basis state), at least
    /// 1/(3N²). The lower bound comes from minimizing Σ w_p² over the
    /// per-cell weights w compatible with unit weighted norm: off-diagonal
    /// same-species cells contribute w²/2 after the bosonic double count,
    /// so the effective cell count is N² + 2N + 2N(N−1) = 3N².
    /// Species weights partition unity and the block entropies add up.
    #[test]
    fn ipr_bounds_and_weight_partition_hold(state in arb_state(2..=8, false)) {
        let n = state.n() as f64;
        let value = ipr(&state).unwrap();
        prop_assert!(value <= 1.0 + 1e-12);
        prop_assert!(value >= 1.0 / (3.0 * n * n) - 1e-12);

        let ent = entanglement_entropy(&state, EntanglementCut::Coupled).unwrap();
        let b_weight: f64 = state.b.iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((ent.lambda_a + ent.lambda_c + b_weight - 1.0).abs() < 1e-10);
        prop_assert!((ent.s_total - (ent.s0 + ent.s1 + ent.s2)).abs() < 1e-10);
    }

    /// Translating a state by one site changes neither participation nor
    /// entanglement.
    #[test]
    fn diagnostics_are_translation_invariant(state in arb_state(2..=8, false)) {
        let shifted = state.translated();
        prop_assert!((ipr(&state).unwrap() - ipr(&shifted).unwrap()).abs() < 1e-12);
        let here = entanglement_entropy(&state, EntanglementCut::Coupled).unwrap();
        let there = entanglement_entropy(&shifted, EntanglementCut::Coupled).unwrap();
        prop_assert!((here.s_total - there.s_total).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Translation-invariant interspecies states with any relative profile
    /// spread over all N sites, so their participation is at most 1/N.
    #[test]
    fn momentum_states_bound_participation_by_inverse_ring_length(
        n in 3..=10usize,
        r in 0..10usize,
        profile in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 10),
    ) {
        let r = r % n;
        let norm_sq: f64 = profile[..n].iter().map(|(re, im)| re * re + im * im).sum();
        prop_assume!(norm_sq > 1e-6);
        let scale = 1.0 / (norm_sq * n as f64).sqrt();
        let p = 2.0 * std::f64::consts::PI * r as f64 / n as f64;

        let mut state = TwoExcitationState::zero(n);
        for site in 0..n {
            let phase = Complex64::from_polar(scale, p * site as f64);
            for (d, &(re, im)) in profile[..n].iter().enumerate() {
                state.b[(site, (site + d) % n)] = phase * c(re, im);
            }
        }
        let state = state.normalized().unwrap();
        prop_assert!(ipr(&state).unwrap() <= 1.0 / n as f64 + 1e-9);
    }

    /// A symmetric rank-1 same-species amplitude matrix is a two-boson
    /// product state: its single-species entanglement entropy vanishes.
    #[test]
    fn symmetric_rank_one_states_are_unentangled(
        n in 2..=8usize,
        raw in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 8),
    ) {
        let v: Vec<Complex64> = raw[..n].iter().map(|&(re, im)| c(re, im)).collect();
        let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        prop_assume!(norm_sq > 1e-6);
        // ‖v‖² = 2^{-1/2} makes the weighted norm of A = v vᵀ equal 1.
        let scale = c(1.0 / (norm_sq * std::f64::consts::SQRT_2).sqrt(), 0.0);
        let a = Array2::from_shape_fn((n, n), |(i, j)| scale * v[i] * scale * v[j]);
        let zero = Array2::zeros((n, n));
        let state = TwoExcitationState::from_matrices(a, zero.clone(), zero);

        let ent = entanglement_entropy(&state, EntanglementCut::SingleSpecies).unwrap();
        prop_assert!(ent.s_total < 1e-10, "entropy {} for a product state", ent.s_total);
        prop_assert!((ent.lambda_a - 1.0).abs() < 1e-10);
    }
}
