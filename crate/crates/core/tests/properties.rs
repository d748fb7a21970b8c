//! Invariants checked over random inputs.

use std::f64::consts::{PI, TAU};

use liddi::dressing::{dressed_states, ground_pair_state, rotating_hamiltonian, sideband_weights};
use liddi::linalg::{hermitian_eigenvalues, hermiticity_residual, trace4, Op2, Op4, Vec3, C64};
use liddi::liouvillian::{build_hdd, build_liouvillian, steady_state};
use liddi::observables::{liddi_potential, scattering_rate, steady_state_potential_closed};
use liddi::orientation::effective_dipole;
use liddi::spectra::{cavity_rddi, coupling_table, IdealCavity, Lorentzian, TableOptions};
use liddi::validation::{closed_population_block, population_block};
use liddi::{CouplingTable, DressedFrame, OrientationModel, ReservoirSpectrum, TwoAtomState};
use proptest::prelude::*;

fn detuning() -> impl Strategy<Value = f64> {
    prop_oneof![-10.0..-0.05f64, 0.05..10.0f64]
}

fn frame_strategy() -> impl Strategy<Value = DressedFrame> {
    (detuning(), 0.0..8.0f64, 0.0..0.4f64).prop_map(|(delta, rabi, kz)| {
        DressedFrame::new(30.0, delta, rabi)
            .unwrap()
            .with_wavevector(Vec3::new(0.0, 0.0, 30.0 + kz))
    })
}

fn state_strategy() -> impl Strategy<Value = TwoAtomState> {
    prop::collection::vec(-1.0..1.0f64, 32).prop_map(|v| {
        let a = Op4::from_fn(|r, c| C64::new(v[2 * (4 * r + c)], v[2 * (4 * r + c) + 1]));
        let rho = a * a.adjoint() + Op4::identity() * C64::new(1e-3, 0.0);
        TwoAtomState::new(rho / trace4(&rho)).unwrap()
    })
}

/// Per channel: real `Δ₁₂`, `Γ = [[g, x], [x̄, g]]` with `|x| ≤ g`.
fn table_strategy() -> impl Strategy<Value = CouplingTable> {
    prop::collection::vec((-2.0..2.0f64, 0.0..2.0f64, 0.0..1.0f64, 0.0..6.3f64), 3).prop_map(|ch| {
        let zero = C64::new(0.0, 0.0);
        let mut delta = [[[zero; 2]; 2]; 3];
        let mut gamma = [[[zero; 2]; 2]; 3];
        for (i, &(d, g, frac, phase)) in ch.iter().enumerate() {
            delta[i][0][1] = C64::new(d, 0.0);
            delta[i][1][0] = C64::new(d, 0.0);
            let x = C64::from_polar(g * frac, phase);
            gamma[i] = [[C64::new(g, 0.0), x], [x.conj(), C64::new(g, 0.0)]];
        }
        CouplingTable::new(delta, gamma).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn weights_sum_to_one(delta in -1e3..1e3f64, rabi in 0.0..1e3f64) {
        prop_assume!(delta != 0.0 || rabi != 0.0);
        let f = DressedFrame::new(1.0, delta, rabi).unwrap();
        prop_assert!((sideband_weights(&f).sum() - 1.0).abs() < 1e-12);
        let scale = 4.0 * f.omega_bar * f.omega_bar;
        prop_assert!((f.c_plus * f.c_minus + rabi * rabi / scale).abs() < 1e-12);
        prop_assert!((f.c_plus + f.c_minus - delta / f.omega_bar).abs() < 1e-12);
        prop_assert!(f.omega_bar >= delta.abs() && f.omega_bar >= rabi);
    }

    #[test]
    fn dressed_states_are_eigenvectors(f in frame_strategy(), phase in 0.0..6.3f64) {
        let site = C64::from_polar(1.0, phase);
        let s = dressed_states(&f, site).unwrap();
        let h: Op2 = rotating_hamiltonian(&f, site);
        for (v, eps) in [(s.plus(), s.eps_plus), (s.minus(), s.eps_minus)] {
            let x = nalgebra::Vector2::new(v[0], v[1]);
            prop_assert!((h * x - x * C64::new(eps, 0.0)).norm() < 1e-12 * f.omega_bar.max(1.0));
            prop_assert!((x.norm() - 1.0).abs() < 1e-12);
        }
        let overlap = s.plus()[0].conj() * s.minus()[0] + s.plus()[1].conj() * s.minus()[1];
        prop_assert!(overlap.norm() < 1e-12);
    }

    #[test]
    fn potential_equals_hamiltonian_expectation(
        f in frame_strategy(),
        table in table_strategy(),
        rho in state_strategy(),
        z in 0.0..0.5f64,
    ) {
        let r12 = Vec3::new(0.0, 0.0, z);
        let u = liddi_potential(&rho, &table, &f, &r12).unwrap();
        let h = build_hdd(&table, &f, &r12).unwrap();
        let expectation = trace4(&(rho.matrix() * h));
        prop_assert!((u.total - expectation.re).abs() < 1e-10);
        prop_assert!(expectation.im.abs() < 1e-10);
        prop_assert_eq!(u.total, u.u_z + u.u_plus + u.u_minus);
    }

    #[test]
    fn rates_are_nonnegative(f in frame_strategy(), table in table_strategy(), rho in state_strategy()) {
        let r = scattering_rate(&rho, &table, &f);
        prop_assert!(r.r_z >= 0.0 && r.r_plus >= 0.0 && r.r_minus >= 0.0);
        prop_assert_eq!(r.total, r.r_z + r.r_plus + r.r_minus);
    }

    #[test]
    fn generator_preserves_trace_and_hermiticity(
        f in frame_strategy(),
        table in table_strategy(),
        rho in state_strategy(),
        z in 0.0..0.5f64,
    ) {
        let gen = build_liouvillian(&table, &f, &Vec3::new(0.0, 0.0, z)).unwrap();
        prop_assert!(gen.trace_residual() < 1e-10);
        prop_assert!(hermiticity_residual(gen.hamiltonian()) < 1e-12);
        let out = gen.apply(rho.matrix());
        prop_assert!(trace4(&out).norm() < 1e-10);
        prop_assert!(hermiticity_residual(&out) < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn steady_potential_matches_closed_form(
        delta in detuning(),
        rabi in 0.2..6.0f64,
        d in prop::array::uniform3(-1.5..1.5f64),
        g in prop::array::uniform3(0.05..2.0f64),
        z in 0.0..0.2f64,
    ) {
        prop_assume!(d[1].abs() > 0.05);
        let f = DressedFrame::new(30.0, delta, rabi).unwrap().with_wavevector(Vec3::new(0.0, 0.0, 30.0));
        let table = CouplingTable::independent(d, g).unwrap();
        let r12 = Vec3::new(0.0, 0.0, z);
        let ss = steady_state(&build_liouvillian(&table, &f, &r12).unwrap()).unwrap();
        let numeric = liddi_potential(&ss, &table, &f, &r12).unwrap();
        let closed = steady_state_potential_closed(&table, &f, &r12, g[0], g[2]).unwrap();
        prop_assert!((numeric.total - closed.total).abs() <= 1e-9 * closed.total.abs() + 1e-14);
        prop_assert!(numeric.nonlinear().abs() < 1e-12);
        let eig = hermitian_eigenvalues(ss.matrix());
        prop_assert!(eig[0] > -1e-10);
    }

    #[test]
    fn population_block_matches_closed_matrix(
        delta in detuning(),
        rabi in 0.0..6.0f64,
        d in prop::array::uniform3(-2.0..2.0f64),
        g in prop::array::uniform3(0.0..2.0f64),
    ) {
        let f = DressedFrame::new(30.0, delta, rabi).unwrap();
        let table = CouplingTable::independent(d, g).unwrap();
        let (a, c) = population_block(&build_liouvillian(&table, &f, &Vec3::zeros()).unwrap());
        let (printed, source) = closed_population_block(&table, &f);
        prop_assert!((a - printed).abs().max() < 1e-10);
        for k in 0..5 {
            prop_assert!((c[k] - source[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn lorentzian_table_is_hermitian(delta in detuning(), rabi in 0.0..3.0f64) {
        let f = DressedFrame::new(30.0, delta, rabi).unwrap();
        let spec = ReservoirSpectrum::Lorentzian(Lorentzian { weight: 0.7, omega0: 29.0, gamma: 0.5 });
        let t = coupling_table(&spec, &f, &[Vec3::zeros(); 2], &TableOptions::default()).unwrap();
        for i in 0..3 {
            prop_assert!((t.delta[i][0][1] - t.delta[i][1][0].conj()).norm() < 1e-12);
            prop_assert!((t.gamma[i][0][1] - t.gamma[i][1][0].conj()).norm() < 1e-12);
            prop_assert!(t.gamma[i][0][0].re >= 0.0);
        }
    }

    #[test]
    fn molecule_dipole_is_a_third_of_atom(d_mag in 0.1..10.0f64, theta in 0.0..PI, phi in 0.0..TAU) {
        let e = Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
        let e = liddi::linalg::to_complex(&(e / e.norm()));
        let atom = effective_dipole(&OrientationModel::IsotropicAtom { d_mag }, &e).unwrap();
        let mol = effective_dipole(&OrientationModel::RandomMolecule { d_mag, samples: 1000, seed: 0 }, &e).unwrap();
        for k in 0..3 {
            prop_assert!((mol[k] - atom[k] / 3.0).norm() <= 1e-15 * d_mag);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn cavity_swap_is_bit_identical(z1 in 0.05..3.0f64, z2 in 0.05..3.0f64, omega in 1.2..3.8f64) {
        prop_assume!((z1 - z2).abs() > 0.05);
        prop_assume!((omega - omega.round()).abs() > 0.05);
        let cav = IdealCavity::new(std::f64::consts::PI, 2.0, 1.0).unwrap();
        let a = cavity_rddi(&cav, z1, z2, omega).unwrap();
        let b = cavity_rddi(&cav, z2, z1, omega).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }
}

#[test]
fn ground_pair_is_pure_for_random_frames() {
    for (delta, rabi) in [(3.0, 4.0), (-2.0, 0.5), (0.0, 1.0), (1.0, 0.0)] {
        let f = DressedFrame::new(10.0, delta, rabi).unwrap();
        let g = ground_pair_state(&f, &f).unwrap();
        assert!((g.purity() - 1.0).abs() < 1e-14);
    }
}
