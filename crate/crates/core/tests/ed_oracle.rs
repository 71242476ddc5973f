//! Checks for the exact-diagonalization oracle: basis layout, Hamiltonian
//! structure, and sector-resolved diagonalization.

use approx::assert_abs_diff_eq;
use cbhm::basis::{PairKind, TwoExcitationBasis};
use cbhm::hamiltonian::{apply_h, build_hamiltonian};
use cbhm::params::ModelParams;
use cbhm::spectra::{diagonalize_all_sectors, diagonalize_sector};
use cbhm::state::TwoExcitationState;
use cbhm::Error;
use num_complex::Complex64;

fn params(n: usize) -> ModelParams {
    ModelParams {
        j1: 1.0,
        j2: 1.0,
        u1: 0.0,
        u2: 0.0,
        u3: 0.0,
        omega: 0.0,
        delta: 0.0,
        n,
        u1_infinite: false,
        u2_infinite: false,
    }
}

#[test]
fn basis_dimensions() {
    assert_eq!(TwoExcitationBasis::new(2).unwrap().dimension(), 10);
    assert_eq!(TwoExcitationBasis::new(3).unwrap().dimension(), 21);
    assert_eq!(TwoExcitationBasis::new(10).unwrap().dimension(), 210);
    for n in 2..=12 {
        let b = TwoExcitationBasis::new(n).unwrap();
        assert_eq!(b.dimension(), 2 * n * n + n);
        assert_eq!(b.dimension(), n * (n + 1) / 2 + n * n + n * (n + 1) / 2);
    }
    assert!(matches!(TwoExcitationBasis::new(1), Err(Error::BadSize(1))));
}

#[test]
fn basis_ordering_is_canonical() {
    let b = TwoExcitationBasis::new(3).unwrap();
    let entries = b.entries();
    // aa pairs lexicographic with n <= m first.
    assert_eq!(
        (entries[0].kind, entries[0].n, entries[0].m),
        (PairKind::AA, 0, 0)
    );
    assert_eq!(
        (entries[1].kind, entries[1].n, entries[1].m),
        (PairKind::AA, 0, 1)
    );
    // Then all ab pairs, then bb.
    let n_aa = 3 * 4 / 2;
    assert_eq!(entries[n_aa].kind, PairKind::AB);
    assert_eq!(entries[n_aa + 9].kind, PairKind::BB);
    assert_eq!(entries.len(), 21);
}

#[test]
fn hardcore_basis_drops_same_site_pairs() {
    let b = TwoExcitationBasis::new_hardcore(4, true, true).unwrap();
    // aa loses N diagonal entries, bb too: 2*(N(N+1)/2 - N) + N^2.
    assert_eq!(b.dimension(), 2 * (4 * 5 / 2 - 4) + 16);
    assert!(b
        .entries()
        .iter()
        .all(|e| e.kind == PairKind::AB || e.n != e.m));
}

#[test]
fn hamiltonian_is_hermitian_and_commutes_with_translation() {
    let cases = [
        ModelParams {
            j1: 1.0,
            j2: 0.4,
            u1: 3.0,
            u2: 1.5,
            u3: 0.8,
            omega: 1.2,
            delta: 0.6,
            n: 5,
            u1_infinite: false,
            u2_infinite: false,
        },
        ModelParams {
            j1: 0.7,
            j2: 1.3,
            u1: 0.0,
            u2: 0.0,
            u3: 2.0,
            omega: 0.9,
            delta: -0.4,
            n: 6,
            u1_infinite: true,
            u2_infinite: true,
        },
    ];
    for p in cases {
        let h = build_hamiltonian(&p).unwrap();
        assert!(h.hermiticity_deviation() < 1e-12);
        assert!(h.translation_commutator_norm() < 1e-12);
    }
}

#[test]
fn diagonal_entries_follow_interaction_rules() {
    let p = ModelParams {
        delta: 1.0,
        u1: 5.0,
        u3: 0.25,
        ..params(4)
    };
    let h = build_hamiltonian(&p).unwrap();
    let b = h.basis();
    // aa state (n,n): 2Δ + U1 = 7.
    let i_aa = b.index_of(PairKind::AA, 1, 1).unwrap();
    assert_abs_diff_eq!(h.entries()[[i_aa, i_aa]].re, 7.0, epsilon = 1e-12);
    // ab state (n,n): Δ + U3 = 1.25.
    let i_ab = b.index_of(PairKind::AB, 2, 2).unwrap();
    assert_abs_diff_eq!(h.entries()[[i_ab, i_ab]].re, 1.25, epsilon = 1e-12);
    // bb state (n,n): U2 = 0.
    let i_bb = b.index_of(PairKind::BB, 3, 3).unwrap();
    assert_abs_diff_eq!(h.entries()[[i_bb, i_bb]].re, 0.0, epsilon = 1e-12);
}

#[test]
fn free_spectrum_is_sum_of_dispersions() {
    // Ω = 0, all U = 0: eigenvalues are ω_p + ω_q, ω_p + ω'_q, ω'_p + ω'_q.
    let mut p = params(4);
    p.j2 = 0.5;
    p.delta = 0.3;
    let h = build_hamiltonian(&p).unwrap();
    let mut computed = h.eigenvalues().unwrap();
    computed.sort_by(f64::total_cmp);

    let disp1 = |r: usize| p.delta - 2.0 * p.j1 * p.momentum(r).cos();
    let disp2 = |r: usize| -2.0 * p.j2 * p.momentum(r).cos();
    let mut expected = Vec::new();
    for r in 0..4 {
        for s in r..4 {
            expected.push(disp1(r) + disp1(s)); // aa (symmetrized pairs)
            expected.push(disp2(r) + disp2(s)); // bb
        }
    }
    for r in 0..4 {
        for s in 0..4 {
            expected.push(disp1(r) + disp2(s)); // ab, unrestricted
        }
    }
    expected.sort_by(f64::total_cmp);
    assert_eq!(computed.len(), expected.len());
    for (c, e) in computed.iter().zip(&expected) {
        assert_abs_diff_eq!(c, e, epsilon = 1e-10);
    }
}

#[test]
fn sector_spectra_partition_full_spectrum_and_satisfy_trace_identity() {
    let p = ModelParams {
        j1: 1.0,
        j2: 0.6,
        u1: 2.0,
        u2: 1.0,
        u3: 0.5,
        omega: 1.5,
        delta: 0.2,
        n: 6,
        u1_infinite: false,
        u2_infinite: false,
    };
    let h = build_hamiltonian(&p).unwrap();
    let mut full = h.eigenvalues().unwrap();
    full.sort_by(f64::total_cmp);

    let mut from_sectors = Vec::new();
    let mut trace_sum = 0.0;
    for r in 0..p.n {
        let pairs = diagonalize_sector(&h, r).unwrap();
        for (e, st) in &pairs {
            trace_sum += e;
            from_sectors.push(*e);
            // Each state is a translation eigenstate with eigenvalue e^{iP}.
            let shifted = st.translated();
            let phase = Complex64::from_polar(1.0, p.momentum(r));
            let mut reference = st.clone();
            reference.scale(phase);
            assert!(shifted.distance_max(&reference) < 1e-8);
            // And normalized in the weighted norm.
            assert_abs_diff_eq!(st.weighted_norm_sq(), 1.0, epsilon = 1e-10);
        }
    }
    from_sectors.sort_by(f64::total_cmp);
    assert_eq!(from_sectors.len(), full.len());
    for (a, b) in from_sectors.iter().zip(&full) {
        assert_abs_diff_eq!(a, b, epsilon = 1e-8);
    }
    // Σ eigenvalues = trace(H) within 1e-9 · dimension.
    let trace: f64 = (0..h.dimension()).map(|i| h.entries()[[i, i]].re).sum();
    assert!((trace_sum - trace).abs() < 1e-9 * h.dimension() as f64);
}

#[test]
fn sector_states_are_true_eigenstates() {
    let p = ModelParams {
        j1: 0.8,
        j2: 1.1,
        u1: 4.0,
        u2: 2.5,
        u3: 1.0,
        omega: 2.0,
        delta: 0.0,
        n: 5,
        u1_infinite: false,
        u2_infinite: false,
    };
    let h = build_hamiltonian(&p).unwrap();
    for (e, st) in diagonalize_all_sectors(&h).unwrap() {
        let hs = apply_h(&p, &st);
        let mut residual = hs.clone();
        residual.axpy(Complex64::new(-e, 0.0), &st);
        assert!(
            residual.amplitude_max() < 1e-9,
            "residual {} at E = {}",
            residual.amplitude_max(),
            e
        );
    }
}

#[test]
fn matrix_action_matches_amplitude_action() {
    // The dense matrix (occupation algebra) and apply_h (amplitude algebra)
    // are independent implementations; they must act identically.
    let cases = [
        ModelParams {
            j1: 1.3,
            j2: 0.7,
            u1: 2.2,
            u2: 3.1,
            u3: 0.9,
            omega: 1.7,
            delta: 0.5,
            n: 5,
            u1_infinite: false,
            u2_infinite: false,
        },
        ModelParams {
            j1: 1.0,
            j2: 1.0,
            u1: 0.0,
            u2: 0.0,
            u3: 0.4,
            omega: 2.5,
            delta: 0.0,
            n: 6,
            u1_infinite: true,
            u2_infinite: true,
        },
    ];
    for p in cases {
        let h = build_hamiltonian(&p).unwrap();
        let n = p.n;
        let mut st = TwoExcitationState::zero(n);
        for i in 0..n {
            for j in 0..n {
                let z = Complex64::new(
                    ((3 * i + 5 * j + 1) as f64).sin(),
                    ((7 * i + 2 * j) as f64).cos() * 0.5,
                );
                st.set_aa(i, j, z);
                st.b[[i, j]] = z * Complex64::new(-0.2, 0.6);
                st.set_bb(i, j, z * 0.8);
            }
        }
        if p.u1_infinite {
            for i in 0..n {
                st.a[[i, i]] = Complex64::new(0.0, 0.0);
            }
        }
        if p.u2_infinite {
            for i in 0..n {
                st.c[[i, i]] = Complex64::new(0.0, 0.0);
            }
        }
        let via_matrix = {
            let v = h.basis().pack(&st);
            let hv = h.entries().dot(&v);
            h.basis().unpack(&hv)
        };
        let via_action = apply_h(&p, &st);
        assert!(via_matrix.distance_max(&via_action) < 1e-10);
    }
}

#[test]
fn eigenvector_unpacking_preserves_weighted_norm() {
    let p = ModelParams {
        j1: 1.0,
        j2: 0.9,
        u1: 1.0,
        u2: 2.0,
        u3: 0.3,
        omega: 0.7,
        delta: 0.1,
        n: 4,
        u1_infinite: false,
        u2_infinite: false,
    };
    let h = build_hamiltonian(&p).unwrap();
    for (_e, st) in diagonalize_all_sectors(&h).unwrap() {
        assert_abs_diff_eq!(st.weighted_norm_sq(), 1.0, epsilon = 1e-10);
    }
}
