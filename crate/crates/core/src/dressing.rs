//! Dressed frame of a single laser-driven two-level atom.
//!
//! In the frame rotating at `ω_L` the atom-laser Hamiltonian is
//! `H = −(δ/2)σᶻ + (Ω̃σ⁺ + h.c.)/2` with `Ω̃ = Ω e^{i k_L·r}` and
//! `δ = ω_L − ω_e`. Its eigenstates `|±⟩` split by `Ω̄ = sqrt(|Ω|² + δ²)`,
//! and in that basis
//!
//! ```text
//! σ⁺ = e^{−i k_L·r} [ c₊ S⁺ + c_z Sᶻ + c₋ S⁻ ]
//! c± = (δ ∓ Ω̄)/(2Ω̄),   c_z = |Ω|/(2Ω̄)
//! ```
//!
//! with `S⁺ = |+⟩⟨−|`, `S⁻ = |−⟩⟨+|`, `Sᶻ = |+⟩⟨+| − |−⟩⟨−|`. Each term
//! radiates at `ω_± = ω_L ± Ω̄` or `ω_z = ω_L`. A global phase of `Ω` is
//! unobservable; only `|Ω|` and the site phase enter.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{cnorm, CVec3, Op2, Vec3, C64};
use crate::liouvillian::TwoAtomState;

const UNIT_TOLERANCE: f64 = 1e-12;

/// One of the three dressed transitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sideband {
    Plus,
    Z,
    Minus,
}

impl Sideband {
    pub const ALL: [Sideband; 3] = [Sideband::Plus, Sideband::Z, Sideband::Minus];

    pub fn index(self) -> usize {
        match self {
            Sideband::Plus => 0,
            Sideband::Z => 1,
            Sideband::Minus => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Sideband::Plus => "plus",
            Sideband::Z => "z",
            Sideband::Minus => "minus",
        }
    }
}

/// Classical driving laser.
#[derive(Debug, Clone, PartialEq)]
pub struct LaserDrive {
    omega: f64,
    wavevector: Vec3,
    polarization: CVec3,
    rabi: C64,
}

impl LaserDrive {
    /// `direction` need not be normalized; the wavevector is `ω_L · direction/|direction|`.
    pub fn new(omega: f64, direction: Vec3, polarization: CVec3, rabi: C64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidInput(format!(
                "laser frequency must be positive, got {omega}"
            )));
        }
        let len = direction.norm();
        if !(len > 0.0) || !len.is_finite() {
            return Err(Error::InvalidInput(
                "laser propagation direction must be nonzero".into(),
            ));
        }
        let norm = cnorm(&polarization);
        if (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::UnnormalizedPolarization { norm });
        }
        if !rabi.re.is_finite() || !rabi.im.is_finite() {
            return Err(Error::InvalidInput("Rabi frequency must be finite".into()));
        }
        Ok(Self {
            omega,
            wavevector: direction * (omega / len),
            polarization,
            rabi,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn wavevector(&self) -> Vec3 {
        self.wavevector
    }

    pub fn polarization(&self) -> CVec3 {
        self.polarization
    }

    pub fn rabi(&self) -> C64 {
        self.rabi
    }
}

/// Transition frequency, dipole matrix element and position of one atom.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomParams {
    omega_e: f64,
    dipole: CVec3,
    position: Vec3,
}

impl AtomParams {
    pub fn new(omega_e: f64, dipole: CVec3, position: Vec3) -> Result<Self> {
        if !(omega_e > 0.0) || !omega_e.is_finite() {
            return Err(Error::InvalidInput(format!(
                "transition frequency must be positive, got {omega_e}"
            )));
        }
        if !(cnorm(&dipole) > 0.0) {
            return Err(Error::InvalidInput("dipole matrix element must be nonzero".into()));
        }
        Ok(Self {
            omega_e,
            dipole,
            position,
        })
    }

    pub fn omega_e(&self) -> f64 {
        self.omega_e
    }

    pub fn dipole(&self) -> CVec3 {
        self.dipole
    }

    pub fn position(&self) -> Vec3 {
        self.position
    }
}

/// Dressed-frame constants of one atom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DressedFrame {
    pub omega_laser: f64,
    pub delta: f64,
    pub rabi_abs: f64,
    pub omega_bar: f64,
    pub c_plus: f64,
    pub c_minus: f64,
    pub c_z: f64,
    #[serde(skip)]
    pub wavevector: Vec3,
    /// `e^{−i k_L·r_ν}` for the atom this frame was built for.
    #[serde(skip)]
    pub site_phase: C64,
}

impl DressedFrame {
    /// Frame from detuning and Rabi modulus, with a zero wavevector and unit site phase.
    pub fn new(omega_laser: f64, delta: f64, rabi_abs: f64) -> Result<Self> {
        Self::build(omega_laser, delta, rabi_abs, Vec3::zeros(), C64::new(1.0, 0.0))
    }

    pub fn with_wavevector(mut self, wavevector: Vec3) -> Self {
        self.wavevector = wavevector;
        self
    }

    fn build(omega_laser: f64, delta: f64, rabi_abs: f64, wavevector: Vec3, site_phase: C64) -> Result<Self> {
        let rabi_abs = rabi_abs.abs();
        if !delta.is_finite() || !rabi_abs.is_finite() {
            return Err(Error::InvalidInput("detuning and Rabi frequency must be finite".into()));
        }
        let omega_bar = rabi_abs.hypot(delta);
        if omega_bar == 0.0 {
            return Err(Error::DegenerateFrame);
        }
        // δ ∓ Ω̄ is evaluated without cancellation: Ω̄ − |δ| = |Ω|²/(Ω̄ + |δ|).
        let gap = rabi_abs * rabi_abs / (omega_bar + delta.abs());
        let (c_plus, c_minus) = if delta >= 0.0 {
            (-gap / (2.0 * omega_bar), (delta + omega_bar) / (2.0 * omega_bar))
        } else {
            ((delta - omega_bar) / (2.0 * omega_bar), gap / (2.0 * omega_bar))
        };
        Ok(Self {
            omega_laser,
            delta,
            rabi_abs,
            omega_bar,
            c_plus,
            c_minus,
            c_z: rabi_abs / (2.0 * omega_bar),
            wavevector,
            site_phase,
        })
    }

    /// Sideband frequency `ω_i`.
    pub fn omega(&self, band: Sideband) -> f64 {
        match band {
            Sideband::Plus => self.omega_laser + self.omega_bar,
            Sideband::Z => self.omega_laser,
            Sideband::Minus => self.omega_laser - self.omega_bar,
        }
    }

    /// Operator coefficient `c_i` in the dressed decomposition of `σ⁺`.
    pub fn coefficient(&self, band: Sideband) -> f64 {
        match band {
            Sideband::Plus => self.c_plus,
            Sideband::Z => self.c_z,
            Sideband::Minus => self.c_minus,
        }
    }

    /// `k_L · r₁₂`.
    pub fn laser_phase(&self, r12: &Vec3) -> f64 {
        self.wavevector.dot(r12)
    }
}

/// Builds the dressed frame of `atom` under `laser`.
pub fn dressed_frame(laser: &LaserDrive, atom: &AtomParams) -> Result<DressedFrame> {
    let kr = laser.wavevector.dot(&atom.position);
    DressedFrame::build(
        laser.omega,
        laser.omega - atom.omega_e,
        laser.rabi.norm(),
        laser.wavevector,
        C64::from_polar(1.0, -kr),
    )
}

/// Dressed eigenvectors expressed in the bare `(|g⟩, |e⟩)` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedStates {
    pub a_plus_g: C64,
    pub a_plus_e: C64,
    pub a_minus_g: C64,
    pub a_minus_e: C64,
    pub eps_plus: f64,
    pub eps_minus: f64,
}

impl DressedStates {
    pub fn plus(&self) -> [C64; 2] {
        [self.a_plus_g, self.a_plus_e]
    }

    pub fn minus(&self) -> [C64; 2] {
        [self.a_minus_g, self.a_minus_e]
    }
}

/// Eigenstates of the rotating-frame Hamiltonian with `Ω̃ = |Ω| · conj(site_phase)`.
///
/// The amplitudes are the closed forms
/// `|+⟩ = [(δ+Ω̄)|g⟩ + Ω̃|e⟩]/sqrt(2Ω̄(Ω̄+δ))`,
/// `|−⟩ = [(δ−Ω̄)|g⟩ + Ω̃|e⟩]/sqrt(2Ω̄(Ω̄−δ))`, rewritten so that the
/// `Ω → 0` limits are finite for either sign of `δ`.
pub fn dressed_states(frame: &DressedFrame, site_phase: C64) -> Result<DressedStates> {
    if frame.omega_bar == 0.0 {
        return Err(Error::DegenerateFrame);
    }
    let phase = if site_phase.norm() > 0.0 {
        site_phase.conj() / site_phase.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let (upper, lower) = split_fractions(frame);
    let p = upper.sqrt();
    let q = lower.sqrt();
    Ok(DressedStates {
        a_plus_g: C64::new(p, 0.0),
        a_plus_e: phase * q,
        a_minus_g: C64::new(-q, 0.0),
        a_minus_e: phase * p,
        eps_plus: 0.5 * frame.omega_bar,
        eps_minus: -0.5 * frame.omega_bar,
    })
}

/// `((Ω̄+δ)/(2Ω̄), (Ω̄−δ)/(2Ω̄))`, both computed without cancellation.
fn split_fractions(frame: &DressedFrame) -> (f64, f64) {
    // c₋ = (δ+Ω̄)/(2Ω̄) and −c₊ = (Ω̄−δ)/(2Ω̄) are already stable.
    (frame.c_minus, -frame.c_plus)
}

/// Rotating-frame Hamiltonian in the `(|g⟩, |e⟩)` basis.
pub fn rotating_hamiltonian(frame: &DressedFrame, site_phase: C64) -> Op2 {
    let rabi = C64::new(frame.rabi_abs, 0.0) * site_phase.conj();
    let half_delta = C64::new(0.5 * frame.delta, 0.0);
    Op2::new(half_delta, rabi.conj() * 0.5, rabi * 0.5, -half_delta)
}

/// Relative strengths of the three dressed transitions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SidebandWeights {
    pub w_z: f64,
    pub w_plus: f64,
    pub w_minus: f64,
}

impl SidebandWeights {
    pub fn sum(&self) -> f64 {
        self.w_z + self.w_plus + self.w_minus
    }
}

/// `w_z = |Ω|²/(2Ω̄²)`, `w_± = (δ ∓ Ω̄)²/(4Ω̄²)`; these sum to one.
pub fn sideband_weights(frame: &DressedFrame) -> SidebandWeights {
    SidebandWeights {
        w_z: 2.0 * frame.c_z * frame.c_z,
        w_plus: frame.c_plus * frame.c_plus,
        w_minus: frame.c_minus * frame.c_minus,
    }
}

/// `(⟨+|g⟩, ⟨−|g⟩)` for the atom's local dressed basis. Both are real.
pub fn ground_in_dressed_basis(frame: &DressedFrame) -> [f64; 2] {
    let (upper, lower) = split_fractions(frame);
    [upper.sqrt(), -lower.sqrt()]
}

/// `|g₁g₂⟩⟨g₁g₂|` in the pair basis `|++⟩, |+−⟩, |−+⟩, |−−⟩`.
pub fn ground_pair_state(frame1: &DressedFrame, frame2: &DressedFrame) -> Result<TwoAtomState> {
    if frame1.omega_bar == 0.0 || frame2.omega_bar == 0.0 {
        return Err(Error::DegenerateFrame);
    }
    let a = ground_in_dressed_basis(frame1);
    let b = ground_in_dressed_basis(frame2);
    let psi = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]];
    Ok(TwoAtomState::from_pure_real(psi))
}

/// Excited-state probability `(|Ω|²/Ω̄²) sin²(Ω̄t/2)` of an atom starting in `|g⟩`.
pub fn rabi_population(frame: &DressedFrame, t: f64) -> f64 {
    let s = (0.5 * frame.omega_bar * t).sin();
    (frame.rabi_abs / frame.omega_bar).powi(2) * s * s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigenvalues, trace4};
    use nalgebra::Vector2;

    fn frame(delta: f64, rabi: f64) -> DressedFrame {
        DressedFrame::new(100.0, delta, rabi).unwrap()
    }

    #[test]
    fn frame_closed_forms() {
        let f = frame(3.0, 4.0);
        assert!((f.omega_bar - 5.0).abs() < 1e-15);
        assert!((f.c_plus + 0.2).abs() < 1e-15);
        assert!((f.c_minus - 0.8).abs() < 1e-15);
        assert!((f.c_z - 0.4).abs() < 1e-15);
        assert!((f.omega(Sideband::Plus) - 105.0).abs() < 1e-12);
        assert!((f.omega(Sideband::Minus) - 95.0).abs() < 1e-12);

        let bare = frame(1.0, 0.0);
        assert_eq!((bare.c_plus, bare.c_minus, bare.c_z), (0.0, 1.0, 0.0));
        assert_eq!(bare.omega(Sideband::Minus), 99.0);

        let resonant = frame(0.0, 2.0);
        assert_eq!(resonant.omega_bar, 2.0);
        assert_eq!((resonant.c_plus, resonant.c_minus, resonant.c_z), (-0.5, 0.5, 0.5));
    }

    #[test]
    fn frame_identities_hold_for_both_detuning_signs() {
        for &(d, r) in &[(3.0, 4.0), (-3.0, 4.0), (0.2, 7.0), (-5.0, 0.01)] {
            let f = frame(d, r);
            let ob2 = f.omega_bar * f.omega_bar;
            assert!((f.c_plus * f.c_minus + r * r / (4.0 * ob2)).abs() < 1e-14);
            assert!((f.c_plus + f.c_minus - d / f.omega_bar).abs() < 1e-14);
            assert!(f.omega_bar >= d.abs() && f.omega_bar >= r);
        }
    }

    #[test]
    fn degenerate_frame_is_rejected() {
        assert_eq!(DressedFrame::new(1.0, 0.0, 0.0), Err(Error::DegenerateFrame));
    }

    #[test]
    fn laser_validation() {
        let z = CVec3::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        let x = Vec3::new(2.0, 0.0, 0.0);
        let laser = LaserDrive::new(3.0, x, z, C64::new(0.0, 1.0)).unwrap();
        assert!((laser.wavevector().norm() - 3.0).abs() < 1e-15);
        assert!(matches!(
            LaserDrive::new(3.0, x, z * C64::new(1.1, 0.0), C64::new(1.0, 0.0)),
            Err(Error::UnnormalizedPolarization { .. })
        ));
        assert!(LaserDrive::new(-1.0, x, z, C64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn dressed_states_limits() {
        let bare = dressed_states(&frame(2.0, 0.0), C64::new(1.0, 0.0)).unwrap();
        assert_eq!(bare.plus(), [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        assert_eq!(bare.minus(), [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);

        let res = dressed_states(&frame(0.0, 3.0), C64::new(1.0, 0.0)).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for amp in [res.a_plus_g, res.a_plus_e, res.a_minus_e] {
            assert!((amp.re - h).abs() < 1e-15 && amp.im == 0.0);
        }
        assert!((res.a_minus_g.re + h).abs() < 1e-15);
    }

    #[test]
    fn weak_drive_amplitudes_match_expansion() {
        let f = frame(1.0, 0.1);
        let s = dressed_states(&f, C64::new(1.0, 0.0)).unwrap();
        // Quoted values carry six decimals.
        assert!((s.a_plus_g.re - 0.998_758).abs() < 1e-6);
        assert!((s.a_minus_g.re + 0.049_814).abs() < 1e-6);
        let x: f64 = 0.1;
        assert!((s.a_plus_g.re - (1.0 - x * x / 8.0)).abs() < x.powi(3));
        assert!((s.a_minus_g.re + x / 2.0).abs() < x.powi(3));
    }

    #[test]
    fn dressed_states_diagonalize_the_hamiltonian() {
        for &(d, r, kr) in &[(3.0, 4.0, 0.3), (-2.0, 0.5, 1.7), (0.0, 1.0, -2.2), (4.0, 1e-9, 0.0)] {
            let f = frame(d, r);
            let phase = C64::from_polar(1.0, -kr);
            let s = dressed_states(&f, phase).unwrap();
            let h = rotating_hamiltonian(&f, phase);
            for (vec, eps) in [(s.plus(), s.eps_plus), (s.minus(), s.eps_minus)] {
                let v = Vector2::new(vec[0], vec[1]);
                let residual = (h * v - v * C64::new(eps, 0.0)).norm();
                assert!(residual < 1e-12, "residual {residual}");
                assert!((v.norm() - 1.0).abs() < 1e-12);
            }
            let overlap: C64 = s.plus().iter().zip(s.minus()).map(|(a, b)| a.conj() * b).sum();
            assert!(overlap.norm() < 1e-12);
        }
    }

    #[test]
    fn weights_match_hand_values() {
        let w = sideband_weights(&frame(3.0, 4.0));
        assert!((w.w_z - 0.32).abs() < 1e-15);
        assert!((w.w_plus - 0.04).abs() < 1e-15);
        assert!((w.w_minus - 0.64).abs() < 1e-15);
        let bare = sideband_weights(&frame(2.0, 0.0));
        assert_eq!((bare.w_z, bare.w_plus, bare.w_minus), (0.0, 0.0, 1.0));
        let res = sideband_weights(&frame(0.0, 1.3));
        assert!((res.w_z - 0.5).abs() < 1e-15 && (res.w_plus - 0.25).abs() < 1e-15);
    }

    #[test]
    fn ground_pair_in_dressed_basis() {
        let f = frame(3.0, 4.0);
        let rho = ground_pair_state(&f, &f).unwrap();
        let m = rho.matrix();
        for (r, c) in [(1, 1), (2, 2), (1, 2)] {
            assert!((m[(r, c)].re - 0.16).abs() < 1e-15 && m[(r, c)].im == 0.0);
        }
        assert!((trace4(m).re - 1.0).abs() < 1e-15);
        let eig = hermitian_eigenvalues(m);
        assert!(eig[..3].iter().all(|e| e.abs() < 1e-14) && (eig[3] - 1.0).abs() < 1e-14);

        let bare = frame(1.0, 0.0);
        let rho = ground_pair_state(&bare, &bare).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                let expected = if r == 0 && c == 0 { 1.0 } else { 0.0 };
                assert_eq!(rho.matrix()[(r, c)].re, expected);
            }
        }
    }

    #[test]
    fn rabi_population_values() {
        let f = frame(3.0, 4.0);
        assert_eq!(rabi_population(&f, 0.0), 0.0);
        assert!((rabi_population(&f, std::f64::consts::PI / 5.0) - 0.64).abs() < 1e-15);
        let r = frame(0.0, 2.0);
        assert!((rabi_population(&r, std::f64::consts::PI / 2.0) - 1.0).abs() < 1e-15);
    }
}
