//! Pair potential and single-atom scattering rate, plus closed-form limits.
//!
//! The potential is the expectation value of `H_DD` split by channel:
//!
//! ```text
//! U^z = −Δ^z₁₂ w_z cos(k_L·r₁₂) [1 − 2(ρ₂₂ + ρ₃₃)]
//! U^± = −Δ^±₁₂ w_± [e^{±ik_L·r₁₂} ρ₂₃ + c.c.]
//! ```
//!
//! `U^z` is the linear (elastic, `ω_L`) part; `U^±` are the nonlinear parts
//! carried by virtual photons at the Mollow sidebands.

use serde::Serialize;

use crate::dressing::{sideband_weights, DressedFrame, Sideband};
use crate::error::{Error, Result};
use crate::linalg::{Vec3, C64};
use crate::liouvillian::TwoAtomState;
use crate::spectra::CouplingTable;

/// Above this `|Ω/δ|` the large-detuning expansion is flagged as unreliable.
pub const LARGE_DETUNING_WARNING: f64 = 0.1;

/// Where the state behind a potential came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSource {
    User,
    Steady,
    Transient,
    LargeDetuning,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialBreakdown {
    pub u_z: f64,
    pub u_plus: f64,
    pub u_minus: f64,
    pub total: f64,
    pub r12: [f64; 3],
    pub source: StateSource,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl PotentialBreakdown {
    fn new(u_z: f64, u_plus: f64, u_minus: f64, r12: &Vec3, source: StateSource) -> Self {
        Self {
            u_z,
            u_plus,
            u_minus,
            total: u_z + u_plus + u_minus,
            r12: [r12.x, r12.y, r12.z],
            source,
            warning: None,
        }
    }

    /// Nonlinear part `U^+ + U^−`.
    pub fn nonlinear(&self) -> f64 {
        self.u_plus + self.u_minus
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateBreakdown {
    pub r_z: f64,
    pub r_plus: f64,
    pub r_minus: f64,
    pub total: f64,
}

/// `U = tr[ρ H_DD]` evaluated channel by channel.
pub fn liddi_potential(
    rho: &TwoAtomState,
    table: &CouplingTable,
    frame: &DressedFrame,
    r12: &Vec3,
) -> Result<PotentialBreakdown> {
    let [d_plus, d_z, d_minus] = table.real_cross_deltas()?;
    let w = sideband_weights(frame);
    let theta = frame.laser_phase(r12);
    let outer = (rho.element(2, 2) + rho.element(3, 3)).re;
    let rho23 = rho.element(2, 3);
    let u_z = -d_z * w.w_z * theta.cos() * (1.0 - 2.0 * outer);
    let exchange = |sign: f64| 2.0 * (C64::from_polar(1.0, sign * theta) * rho23).re;
    let u_plus = -d_plus * w.w_plus * exchange(1.0);
    let u_minus = -d_minus * w.w_minus * exchange(-1.0);
    Ok(PotentialBreakdown::new(u_z, u_plus, u_minus, r12, StateSource::User))
}

/// Photon-scattering rate of atom 1, cooperative terms excluded.
pub fn scattering_rate(rho: &TwoAtomState, table: &CouplingTable, frame: &DressedFrame) -> RateBreakdown {
    let w = sideband_weights(frame);
    let reduced = rho.reduced_first();
    let pop_plus = reduced[(0, 0)].re.max(0.0);
    let pop_minus = reduced[(1, 1)].re.max(0.0);
    let rate = |band: Sideband| table.gamma(band, 0, 0).re.max(0.0);
    let r_z = rate(Sideband::Z) * w.w_z;
    let r_plus = rate(Sideband::Plus) * w.w_plus * pop_plus;
    let r_minus = rate(Sideband::Minus) * w.w_minus * pop_minus;
    RateBreakdown {
        r_z,
        r_plus,
        r_minus,
        total: r_z + r_plus + r_minus,
    }
}

/// Steady-state potential for independent single-atom decay:
/// `U = −w_z [1 − 4Γ⁺Γ⁻|Ω|⁴/(Γ⁺(δ−Ω̄)² + Γ⁻(δ+Ω̄)²)²] Δ^z₁₂ cos(k_L·r₁₂)`.
pub fn steady_state_potential_closed(
    table: &CouplingTable,
    frame: &DressedFrame,
    r12: &Vec3,
    gamma_plus_11: f64,
    gamma_minus_11: f64,
) -> Result<PotentialBreakdown> {
    if gamma_plus_11 == 0.0 && gamma_minus_11 == 0.0 {
        return Err(Error::ZeroDenominator("steady state needs Γ⁺₁₁ or Γ⁻₁₁ nonzero"));
    }
    let [_, d_z, _] = table.real_cross_deltas()?;
    let theta = frame.laser_phase(r12);
    let rabi2 = frame.rabi_abs * frame.rabi_abs;
    // (δ ∓ Ω̄)² = 4Ω̄²c±², evaluated without cancellation.
    let scale = 4.0 * frame.omega_bar * frame.omega_bar;
    let den =
        gamma_plus_11 * scale * frame.c_plus * frame.c_plus + gamma_minus_11 * scale * frame.c_minus * frame.c_minus;
    let w_z = rabi2 / (2.0 * frame.omega_bar * frame.omega_bar);
    let bracket = if den == 0.0 {
        // Only possible without drive, where w_z = 0 as well.
        0.0
    } else {
        1.0 - 4.0 * gamma_plus_11 * gamma_minus_11 * rabi2 * rabi2 / (den * den)
    };
    let u_z = -w_z * bracket * d_z * theta.cos();
    Ok(PotentialBreakdown::new(u_z, 0.0, 0.0, r12, StateSource::Steady))
}

/// Transient potential of the ground pair without dissipation:
/// `U_L = −|Ω|²δ²/(2Ω̄⁴) Δ^z₁₂ cos` and `U^± = −|Ω|²(δ∓Ω̄)²/(8Ω̄⁴) Δ^±₁₂ cos`.
pub fn transient_potential_closed(
    table: &CouplingTable,
    frame: &DressedFrame,
    r12: &Vec3,
) -> Result<PotentialBreakdown> {
    let [d_plus, d_z, d_minus] = table.real_cross_deltas()?;
    let cos = frame.laser_phase(r12).cos();
    let rabi2 = frame.rabi_abs * frame.rabi_abs;
    let bar2 = frame.omega_bar * frame.omega_bar;
    let bar4 = bar2 * bar2;
    let detuned_plus = 2.0 * frame.omega_bar * frame.c_plus;
    let detuned_minus = 2.0 * frame.omega_bar * frame.c_minus;
    let u_z = -rabi2 * frame.delta * frame.delta / (2.0 * bar4) * d_z * cos;
    let u_plus = -rabi2 * detuned_plus * detuned_plus / (8.0 * bar4) * d_plus * cos;
    let u_minus = -rabi2 * detuned_minus * detuned_minus / (8.0 * bar4) * d_minus * cos;
    Ok(PotentialBreakdown::new(
        u_z,
        u_plus,
        u_minus,
        r12,
        StateSource::Transient,
    ))
}

/// Lowest-order large-detuning estimate. The nonlinear part is carried by
/// the `ω_−` channel for `δ > 0` and by the `ω_+` channel for `δ < 0`.
pub fn large_detuning_potential(table: &CouplingTable, frame: &DressedFrame, r12: &Vec3) -> Result<PotentialBreakdown> {
    if frame.delta == 0.0 {
        return Err(Error::ZeroDenominator("large-detuning expansion needs δ ≠ 0"));
    }
    let [d_plus, d_z, d_minus] = table.real_cross_deltas()?;
    let cos = frame.laser_phase(r12).cos();
    let prefactor = -frame.rabi_abs * frame.rabi_abs / (2.0 * frame.delta * frame.delta);
    let u_z = prefactor * d_z * cos;
    let (u_plus, u_minus) = if frame.delta > 0.0 {
        (0.0, prefactor * d_minus * cos)
    } else {
        (prefactor * d_plus * cos, 0.0)
    };
    let mut out = PotentialBreakdown::new(u_z, u_plus, u_minus, r12, StateSource::LargeDetuning);
    let ratio = frame.rabi_abs / frame.delta.abs();
    if ratio > LARGE_DETUNING_WARNING {
        out.warning = Some(format!(
            "|Ω/δ| = {ratio:.3} exceeds {LARGE_DETUNING_WARNING}; expansion may be inaccurate"
        ));
    }
    Ok(out)
}

/// Linear-response prediction `−(|Ω|²/2δ²) Δ^z₁₂ cos(k_L·r₁₂)`, which has no
/// sideband contribution.
pub fn linear_comparator(table: &CouplingTable, frame: &DressedFrame, r12: &Vec3) -> Result<f64> {
    if frame.delta == 0.0 {
        return Err(Error::ZeroDenominator("linear response needs δ ≠ 0"));
    }
    let [_, d_z, _] = table.real_cross_deltas()?;
    let cos = frame.laser_phase(r12).cos();
    Ok(-frame.rabi_abs * frame.rabi_abs / (2.0 * frame.delta * frame.delta) * d_z * cos)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dressing::ground_pair_state;
    use crate::linalg::{trace4, Op4};
    use crate::liouvillian::{build_hdd, build_liouvillian, steady_state};

    fn frame() -> DressedFrame {
        DressedFrame::new(100.0, 3.0, 4.0).unwrap()
    }

    #[test]
    fn fully_dressed_up_pair_has_only_linear_part() {
        let table = CouplingTable::independent([0.3, 1.0, -0.6], [0.0; 3]).unwrap();
        let u = liddi_potential(&TwoAtomState::basis(0), &table, &frame(), &Vec3::zeros()).unwrap();
        assert!((u.u_z + 0.32).abs() < 1e-15);
        assert_eq!(u.u_plus, 0.0);
        assert_eq!(u.u_minus, 0.0);
        assert_eq!(u.total, u.u_z + u.u_plus + u.u_minus);
    }

    #[test]
    fn linear_part_with_outer_populations() {
        let mut rho = Op4::zeros();
        rho[(0, 0)] = C64::new(0.68, 0.0);
        rho[(1, 1)] = C64::new(0.16, 0.0);
        rho[(2, 2)] = C64::new(0.16, 0.0);
        let state = TwoAtomState::new(rho).unwrap();
        let table = CouplingTable::independent([0.0, 1.0, 0.0], [0.0; 3]).unwrap();
        let u = liddi_potential(&state, &table, &frame(), &Vec3::zeros()).unwrap();
        assert!((u.u_z + 0.1152).abs() < 1e-15);
    }

    #[test]
    fn potential_equals_hamiltonian_expectation() {
        let f = DressedFrame::new(40.0, -2.0, 1.5)
            .unwrap()
            .with_wavevector(Vec3::new(0.0, 40.0, 0.0));
        let r12 = Vec3::new(0.0, 0.021, 0.003);
        let table = CouplingTable::independent([0.9, -0.4, 1.7], [0.0; 3]).unwrap();
        let h = build_hdd(&table, &f, &r12).unwrap();
        let psi = [0.2, -0.5, 0.7, 0.3];
        let base = TwoAtomState::from_pure_real(psi);
        let phase = Op4::from_diagonal(&nalgebra::Vector4::new(
            C64::new(1.0, 0.0),
            C64::from_polar(1.0, 0.4),
            C64::from_polar(1.0, -1.1),
            C64::new(1.0, 0.0),
        ));
        let state = TwoAtomState::new(phase * base.matrix() * phase.adjoint()).unwrap();
        let u = liddi_potential(&state, &table, &f, &r12).unwrap();
        let expectation = trace4(&(state.matrix() * h)).re;
        assert!((u.total - expectation).abs() < 1e-14);
    }

    #[test]
    fn scattering_examples() {
        let table = CouplingTable::independent([0.0; 3], [1.0; 3]).unwrap();
        let up = scattering_rate(&TwoAtomState::basis(0), &table, &frame());
        assert!((up.total - 0.36).abs() < 1e-15);
        let mixed = scattering_rate(&TwoAtomState::maximally_mixed(), &table, &frame());
        assert!((mixed.total - 0.66).abs() < 1e-15);
        let bare = DressedFrame::new(10.0, 1.0, 0.0).unwrap();
        assert_eq!(scattering_rate(&TwoAtomState::basis(0), &table, &bare).total, 0.0);
    }

    #[test]
    fn steady_closed_form_matches_numerical_state() {
        let f = frame();
        let table = CouplingTable::independent([0.5, 0.8, -0.2], [1.1, 0.4, 0.7]).unwrap();
        let r12 = Vec3::zeros();
        let gen = build_liouvillian(&table, &f, &r12).unwrap();
        let ss = steady_state(&gen).unwrap();
        let numeric = liddi_potential(&ss, &table, &f, &r12).unwrap();
        let closed = steady_state_potential_closed(&table, &f, &r12, 1.1, 0.7).unwrap();
        assert!((numeric.total - closed.total).abs() < 1e-9 * closed.total.abs());
        assert!(numeric.u_plus.abs() < 1e-10 && numeric.u_minus.abs() < 1e-10);
    }

    #[test]
    fn steady_closed_form_edge_cases() {
        let table = CouplingTable::independent([0.0, 1.0, 0.0], [1.0; 3]).unwrap();
        let bare = DressedFrame::new(10.0, 1.0, 0.0).unwrap();
        assert_eq!(
            steady_state_potential_closed(&table, &bare, &Vec3::zeros(), 1.0, 1.0)
                .unwrap()
                .total,
            0.0
        );
        assert!(matches!(
            steady_state_potential_closed(&table, &frame(), &Vec3::zeros(), 0.0, 0.0),
            Err(Error::ZeroDenominator(_))
        ));
    }

    #[test]
    fn transient_closed_form_is_state_formula_on_ground_pair() {
        for delta in [3.0, -3.0] {
            let f = DressedFrame::new(100.0, delta, 4.0).unwrap();
            let table = CouplingTable::independent([0.6, 1.3, -0.9], [0.0; 3]).unwrap();
            let rho = ground_pair_state(&f, &f).unwrap();
            let a = liddi_potential(&rho, &table, &f, &Vec3::zeros()).unwrap();
            let b = transient_potential_closed(&table, &f, &Vec3::zeros()).unwrap();
            assert!((a.u_z - b.u_z).abs() < 1e-14);
            assert!((a.u_plus - b.u_plus).abs() < 1e-14);
            assert!((a.u_minus - b.u_minus).abs() < 1e-14);
        }
    }

    #[test]
    fn transient_nonlinear_part_selects_branch() {
        for (delta, band) in [(20.0, Sideband::Minus), (-20.0, Sideband::Plus)] {
            let f = DressedFrame::new(100.0, delta, 1.0).unwrap();
            let table = CouplingTable::independent([0.7, 1.0, -1.3], [0.0; 3]).unwrap();
            let u = transient_potential_closed(&table, &f, &Vec3::zeros()).unwrap();
            let d = table.delta(band, 0, 1).re;
            let expected = -1.0 / (2.0 * delta * delta) * d;
            assert!((u.nonlinear() - expected).abs() < 1e-2 * expected.abs());
        }
    }

    #[test]
    fn large_detuning_forms() {
        let f = DressedFrame::new(100.0, 20.0, 1.0).unwrap();
        let table = CouplingTable::independent([0.4, 0.4, 0.4], [0.0; 3]).unwrap();
        let u = large_detuning_potential(&table, &f, &Vec3::zeros()).unwrap();
        assert_eq!(u.u_minus, u.u_z);
        assert!(u.warning.is_none());
        assert_eq!(linear_comparator(&table, &f, &Vec3::zeros()).unwrap(), u.u_z);
        let strong = DressedFrame::new(100.0, 2.0, 1.0).unwrap();
        assert!(large_detuning_potential(&table, &strong, &Vec3::zeros())
            .unwrap()
            .warning
            .is_some());
        let undriven = DressedFrame::new(100.0, 2.0, 0.0).unwrap();
        assert_eq!(
            large_detuning_potential(&table, &undriven, &Vec3::zeros())
                .unwrap()
                .total,
            0.0
        );
    }
}
