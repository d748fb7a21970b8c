//! End-to-end behaviour of the dynamics and the potential comparators.

use std::f64::consts::PI;

use liddi::dressing::ground_pair_state;
use liddi::linalg::{Op4, Vec3, C64};
use liddi::liouvillian::{build_liouvillian, evolve, max_step, steady_state};
use liddi::observables::{large_detuning_potential, liddi_potential, linear_comparator, transient_potential_closed};
use liddi::spectra::{coupling_table, IdealCavity, Lorentzian, TableOptions, TabulatedSpectrum};
use liddi::{CouplingTable, DressedFrame, ReservoirSpectrum, TwoAtomState};

fn final_state(table: &CouplingTable, frame: &DressedFrame, rho0: &TwoAtomState, t: f64, dt: f64) -> Op4 {
    let gen = build_liouvillian(table, frame, &Vec3::zeros()).unwrap();
    *evolve(&gen, rho0, t, dt).unwrap().states.last().unwrap().matrix()
}

#[test]
fn rk4_converges_at_fourth_order() {
    let frame = DressedFrame::new(20.0, 1.3, 2.2).unwrap();
    let zero = C64::new(0.0, 0.0);
    let mut table = CouplingTable::independent([0.9, -0.4, 1.3], [0.6, 0.3, 1.1]).unwrap();
    table.gamma[2][0][1] = C64::new(0.4, 0.2);
    table.gamma[2][1][0] = C64::new(0.4, -0.2);
    assert_ne!(table.gamma[2][0][1], zero);
    let gen = build_liouvillian(&table, &frame, &Vec3::zeros()).unwrap();
    let rho0 = TwoAtomState::from_pure_real([0.5, 0.5, -0.5, 0.5]);
    let dt = max_step(&gen);
    let t = 400.0 * dt;
    let a = final_state(&table, &frame, &rho0, t, dt);
    let b = final_state(&table, &frame, &rho0, t, dt / 2.0);
    let c = final_state(&table, &frame, &rho0, t, dt / 4.0);
    let ratio = (a - b).norm() / (b - c).norm();
    assert!(ratio >= 8.0, "halving ratio {ratio}");
}

#[test]
fn weak_drive_steady_state_is_the_ground_pair() {
    let frame = DressedFrame::new(10.0, 2.0, 2e-8).unwrap();
    let table = CouplingTable::independent([0.3, 0.2, 0.5], [1.0; 3]).unwrap();
    let ss = steady_state(&build_liouvillian(&table, &frame, &Vec3::zeros()).unwrap()).unwrap();
    let undriven = DressedFrame::new(10.0, 2.0, 0.0).unwrap();
    let ground = ground_pair_state(&undriven, &undriven).unwrap();
    assert!((ss.matrix() - ground.matrix()).norm() < 1e-6);
}

#[test]
fn transient_closed_form_matches_evolved_potential() {
    let frame = DressedFrame::new(30.0, -1.5, 2.0).unwrap();
    let table = CouplingTable::independent([0.8, -0.6, 0.35], [0.0; 3]).unwrap();
    let rho0 = ground_pair_state(&frame, &frame).unwrap();
    let gen = build_liouvillian(&table, &frame, &Vec3::zeros()).unwrap();
    let traj = evolve(&gen, &rho0, 12.0, max_step(&gen) / 4.0).unwrap();
    let closed = transient_potential_closed(&table, &frame, &Vec3::zeros()).unwrap();
    for s in traj.states.iter().step_by(50) {
        let u = liddi_potential(s, &table, &frame, &Vec3::zeros()).unwrap();
        assert!((u.total - closed.total).abs() < 1e-10);
        assert!((u.u_minus - closed.u_minus).abs() < 1e-10);
        assert!((u.u_plus - closed.u_plus).abs() < 1e-10);
    }
}

/// Tabulated flank of a narrow line at 18.8, so shifts at 19, 20 and 21 differ strongly.
fn sloped() -> ReservoirSpectrum {
    let line = Lorentzian {
        weight: 1.0,
        omega0: 18.8,
        gamma: 0.1,
    };
    let omega: Vec<f64> = (0..=2000).map(|k| 10.0 + 0.01 * k as f64).collect();
    let g: Vec<f64> = omega.iter().map(|&w| line.density(w)).collect();
    let g12 = g.iter().map(|&x| C64::new(x, 0.0)).collect();
    ReservoirSpectrum::Tabulated(TabulatedSpectrum::new(omega, g.clone(), g, g12).unwrap())
}

#[test]
fn nonlinear_part_follows_the_sideband_picked_by_the_detuning_sign() {
    let spec = sloped();
    for (delta, band_index) in [(1.0, 2), (-1.0, 0)] {
        let frame = DressedFrame::new(20.0, delta, 0.01).unwrap();
        let table = coupling_table(&spec, &frame, &[Vec3::zeros(); 2], &TableOptions::default()).unwrap();
        let u = transient_potential_closed(&table, &frame, &Vec3::zeros()).unwrap();
        let expected = table.delta[band_index][0][1].re / table.delta[1][0][1].re;
        let ratio = u.nonlinear() / u.u_z;
        assert!(
            ((ratio - expected) / expected).abs() < 1e-3,
            "δ = {delta}: {ratio} vs {expected}"
        );
        let approx = large_detuning_potential(&table, &frame, &Vec3::zeros()).unwrap();
        assert!(((approx.nonlinear() - u.nonlinear()) / u.nonlinear()).abs() < 1e-3);
    }
}

#[test]
fn equal_shifts_make_the_comparator_miss_half() {
    // Identical Δ at every sideband: the linear treatment misses U_NL ≈ U_L.
    let frame = DressedFrame::new(20.0, 1.0, 0.02).unwrap();
    let table = CouplingTable::independent([0.7; 3], [0.0; 3]).unwrap();
    let u = transient_potential_closed(&table, &frame, &Vec3::zeros()).unwrap();
    let gap = linear_comparator(&table, &frame, &Vec3::zeros()).unwrap() - u.total;
    let approx = large_detuning_potential(&table, &frame, &Vec3::zeros()).unwrap();
    assert_eq!(approx.u_minus, approx.u_z);
    // The remainder is U_L minus its leading order, about 2(Ω/δ)² of U_L.
    assert!(((gap + u.nonlinear()) / u.nonlinear()).abs() < 2e-3);
}

#[test]
fn cavity_lower_sideband_near_a_mode_dominates() {
    // Modes of a cavity of length π sit at the integers; ω_L = 5.5 lies between
    // modes and ω_− = 5.002 sits just above mode 5.
    let mut cav = IdealCavity::new(PI, 10.0, 1.0).unwrap();
    cav.free_space_dipole = Some(liddi::linalg::to_complex(&Vec3::new(1.0, 0.0, 0.0)));
    let spec = ReservoirSpectrum::IdealCavity(cav);
    let omega_bar: f64 = 0.498;
    let delta = 0.45;
    let frame = DressedFrame::new(5.5, delta, (omega_bar * omega_bar - delta * delta).sqrt()).unwrap();
    let sites = [Vec3::new(0.0, 0.0, PI / 10.0), Vec3::new(0.0, 0.0, 3.0 * PI / 10.0)];
    let table = coupling_table(&spec, &frame, &sites, &TableOptions::default()).unwrap();
    let u = transient_potential_closed(&table, &frame, &Vec3::zeros()).unwrap();
    let linear = linear_comparator(&table, &frame, &Vec3::zeros()).unwrap();
    assert!(u.total.abs() > 10.0 * linear.abs(), "{} vs {}", u.total, linear);
    assert!(u.u_minus.abs() > 0.9 * u.total.abs());
}
