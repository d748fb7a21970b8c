use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{CVec3, C64};

const RESONANCE_TOLERANCE: f64 = 1e-9;
const DEFAULT_CONVERGENCE: f64 = 1e-6;
/// Default regulator in units of the probed frequency.
pub const REGULATOR_FACTOR: f64 = 50.0;
/// The regulated sum is analytic in `π/(LΛ)` within a radius set by the
/// phase gap `min(|u₁−u₂|, u₁+u₂, 2−u₁−u₂)π`, `u = z/L`; the default regulator
/// keeps the expansion variable below `1/GEOMETRY_FACTOR` of that radius.
const GEOMETRY_FACTOR: f64 = 40.0;
/// Upper limit on the modes summed per pass.
const MAX_MODES: u64 = 1 << 27;
/// Regulators `Λ, 2Λ, …, 2^{LEVELS−1}Λ` enter one Richardson table.
const LEVELS: usize = 4;
/// Default mode count in units of the largest regulator over `ω₁`; the Abel
/// factor is `e^{−80}` there.
const MODES_PER_REGULATOR: f64 = 80.0;

/// Planar cavity of length `L` along `z` with mirror area `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealCavity {
    pub length: f64,
    pub area: f64,
    /// `|d·e_x|² + |d·e_y|²`.
    pub d_perp2: f64,
    /// Highest mode kept; defaults to `80 · 2³Λ/ω₁`.
    pub mode_cutoff: Option<u64>,
    /// Abel regulator `Λ`; see [`default_regulator`].
    pub regulator: Option<f64>,
    pub convergence: f64,
    /// Dipole radiating into the unconfined modes; sets `Γ₁₁ = Γ_fs(ω)`.
    pub free_space_dipole: Option<CVec3>,
}

impl IdealCavity {
    pub fn new(length: f64, area: f64, d_perp2: f64) -> Result<Self> {
        for (name, v) in [("length", length), ("area", area)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidInput(format!("cavity {name} must be positive, got {v}")));
            }
        }
        if !(d_perp2 >= 0.0) || !d_perp2.is_finite() {
            return Err(Error::InvalidInput(format!(
                "transverse dipole strength must be non-negative, got {d_perp2}"
            )));
        }
        Ok(Self {
            length,
            area,
            d_perp2,
            mode_cutoff: None,
            regulator: None,
            convergence: DEFAULT_CONVERGENCE,
            free_space_dipole: None,
        })
    }

    /// Transverse dipole strength of a (possibly complex) dipole vector.
    pub fn transverse_strength(dipole: &CVec3) -> f64 {
        dipole[0].norm_sqr() + dipole[1].norm_sqr()
    }

    pub fn mode_spacing(&self) -> f64 {
        PI / self.length
    }

    /// Mode index whose frequency lies within `1e-9` relative of `omega`.
    pub fn resonant_mode(&self, omega: f64) -> Option<u64> {
        let m = (omega / self.mode_spacing()).round();
        if m < 1.0 {
            return None;
        }
        let omega_m = m * self.mode_spacing();
        ((omega - omega_m).abs() <= RESONANCE_TOLERANCE * omega.abs()).then_some(m as u64)
    }

    /// Correlation time estimate `L/c`.
    pub fn tau_c(&self) -> f64 {
        self.length
    }
}

/// `sin(πx)` with exact zeros at the integers.
fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r == 0.0 || r == 1.0 {
        0.0
    } else {
        (PI * r).sin()
    }
}

/// Regulated partial sums `Σ_{n=1}^{N} ω_n sin(nπz₁/L) sin(nπz₂/L) e^{−ω_n/Λ_j}/(ω_n − ω)`
/// for `Λ_j = 2^j Λ`, accumulated in index order with Neumaier compensation.
fn regulated_sums(cav: &IdealCavity, u1: f64, u2: f64, omega: f64, regulator: f64, modes: u64) -> [f64; LEVELS] {
    let spacing = cav.mode_spacing();
    let widest = regulator * (1u64 << (LEVELS - 1)) as f64;
    let mut sum = [0.0; LEVELS];
    let mut carry = [0.0; LEVELS];
    for n in 1..=modes {
        let nf = n as f64;
        let omega_n = nf * spacing;
        // IEEE multiplication commutes, so z₁ ↔ z₂ is bit-exact.
        let shape = sin_pi(nf * u1) * sin_pi(nf * u2);
        if shape == 0.0 {
            continue;
        }
        let bare = omega_n * shape / (omega_n - omega);
        // e^{−ω_n/Λ_j} by repeated squaring from the widest regulator down.
        let mut damping = (-omega_n / widest).exp();
        for j in (0..LEVELS).rev() {
            let term = bare * damping;
            let t = sum[j] + term;
            if sum[j].abs() >= term.abs() {
                carry[j] += (sum[j] - t) + term;
            } else {
                carry[j] += (term - t) + sum[j];
            }
            sum[j] = t;
            damping *= damping;
        }
    }
    std::array::from_fn(|j| sum[j] + carry[j])
}

/// Richardson table over regulators doubling in size; the regulated sum is
/// analytic in `1/Λ`, so each column removes one more power.
fn extrapolated(cav: &IdealCavity, u1: f64, u2: f64, omega: f64, regulator: f64, modes: u64) -> f64 {
    let mut table = regulated_sums(cav, u1, u2, omega, regulator, modes);
    for k in 1..LEVELS {
        let factor = (1u64 << k) as f64;
        for j in 0..LEVELS - k {
            table[j] = (factor * table[j + 1] - table[j]) / (factor - 1.0);
        }
    }
    table[0]
}

fn at_node(u: f64) -> bool {
    u == 0.0 || u == 1.0
}

/// Smallest of the phase gaps that bound the convergence of the regulated sum.
fn phase_gap(u1: f64, u2: f64) -> f64 {
    (u1 - u2).abs().min(u1 + u2).min(2.0 - u1 - u2)
}

/// `max(50 ω_ref, 40 (π/L)/(π · gap))`: large against the probed frequency
/// and against the mode spacing measured in units of the atoms' phase gap.
pub fn default_regulator(cav: &IdealCavity, z1: f64, z2: f64, omega_ref: f64) -> f64 {
    let (u1, u2) = (z1 / cav.length, z2 / cav.length);
    let spectral = REGULATOR_FACTOR * omega_ref;
    if at_node(u1) || at_node(u2) {
        return spectral;
    }
    let gap = phase_gap(u1, u2);
    if gap <= 0.0 {
        return spectral;
    }
    spectral.max(GEOMETRY_FACTOR * cav.mode_spacing() / (PI * gap))
}

/// Cavity-mediated shift `Δ₁₂(ω)` for atoms at `z1`, `z2`.
///
/// The mode sum does not converge on its own. It is Abel-regulated and
/// extrapolated to infinite regulator; the result at `(2Λ, 2N)` is returned
/// after checking it against `(Λ, N)`.
pub fn cavity_rddi(cav: &IdealCavity, z1: f64, z2: f64, omega: f64) -> Result<f64> {
    let regulator = cav.regulator.unwrap_or_else(|| default_regulator(cav, z1, z2, omega));
    cavity_rddi_with_regulator(cav, z1, z2, omega, regulator)
}

pub fn cavity_rddi_with_regulator(cav: &IdealCavity, z1: f64, z2: f64, omega: f64, regulator: f64) -> Result<f64> {
    for z in [z1, z2] {
        if !(0.0..=cav.length).contains(&z) {
            return Err(Error::InvalidInput(format!(
                "position {z} lies outside the cavity [0, {}]",
                cav.length
            )));
        }
    }
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidInput(format!("frequency must be positive, got {omega}")));
    }
    if !(regulator > 0.0) || !regulator.is_finite() {
        return Err(Error::InvalidInput(format!(
            "regulator must be positive, got {regulator}"
        )));
    }
    if let Some(mode) = cav.resonant_mode(omega) {
        return Err(Error::ResonantMode { omega, mode });
    }
    let u1 = z1 / cav.length;
    let u2 = z2 / cav.length;
    if at_node(u1) || at_node(u2) {
        return Ok(0.0);
    }
    if phase_gap(u1, u2) == 0.0 {
        return Err(Error::InvalidInput(format!(
            "coincident positions z = {z1} leave the mode sum divergent"
        )));
    }
    let modes = cav
        .mode_cutoff
        .unwrap_or_else(|| {
            let widest = regulator * (1u64 << (LEVELS - 1)) as f64;
            (MODES_PER_REGULATOR * widest / cav.mode_spacing()).ceil() as u64
        })
        .max(1);
    if modes > MAX_MODES {
        return Err(Error::InvalidInput(format!(
            "{modes} modes needed for this regulator; atoms too close to each other or to a mirror"
        )));
    }
    let prefactor = cav.d_perp2 / (cav.length * cav.area);
    let coarse = extrapolated(cav, u1, u2, omega, regulator, modes);
    let fine = extrapolated(cav, u1, u2, omega, 2.0 * regulator, 2 * modes);
    let change = (fine - coarse).abs() / fine.abs().max(f64::MIN_POSITIVE);
    if fine != coarse && change > cav.convergence {
        return Err(Error::NonConvergent {
            change,
            tolerance: cav.convergence,
        });
    }
    Ok(prefactor * fine)
}

/// `Γ₁₁` from the unconfined modes, or zero without a free-space dipole.
pub fn cavity_gamma(cav: &IdealCavity, nu: usize, nu2: usize, omega: f64) -> C64 {
    match (&cav.free_space_dipole, nu == nu2) {
        (Some(d), true) => C64::new(super::free_space_gamma(d, omega), 0.0),
        _ => C64::new(0.0, 0.0),
    }
}
