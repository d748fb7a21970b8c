//! Reservoir two-point spectra `G_{νν'}(ω)` and the rates derived from them,
//!
//! ```text
//! Γ_{νν'}(ω) = 2π G_{νν'}(ω),    Δ_{νν'}(ω) = P∫ dω' G_{νν'}(ω')/(ω' − ω)
//! ```
//!
//! sampled at the three dressed frequencies to form a [`CouplingTable`].

use std::cell::RefCell;
use std::f64::consts::PI;

use serde::Serialize;

use crate::dressing::{DressedFrame, Sideband};
use crate::error::{Error, Result};
use crate::linalg::{cnorm, CVec3, Vec3, C64};
use crate::quadrature::{integrate_panels, Tolerance};

pub mod cavity;
pub mod lorentzian;
mod table;
pub mod tabulated;

pub use cavity::{cavity_rddi, IdealCavity};
pub use lorentzian::Lorentzian;
pub use table::CouplingTable;
pub use tabulated::TabulatedSpectrum;

/// Margin used by [`markov_validity`] for every "much larger than" test.
pub const MARKOV_MARGIN: f64 = 10.0;
/// Half-width of the coarse-graining window in units of `1/T`.
const SINC_WINDOW: f64 = 400.0;

#[derive(Debug, Clone, PartialEq)]
pub enum ReservoirSpectrum {
    /// Unconfined modes: only the single-atom rate `Γ₁₁ = Γ_fs(ω)` survives.
    FreeSpace {
        dipole: CVec3,
    },
    IdealCavity(IdealCavity),
    /// The same Lorentzian for every atom pair.
    Lorentzian(Lorentzian),
    Tabulated(TabulatedSpectrum),
}

/// `Γ_fs(ω) = |d|²ω³/(3π)`.
pub fn free_space_gamma(dipole: &CVec3, omega: f64) -> f64 {
    let d = cnorm(dipole);
    d * d * omega.powi(3) / (3.0 * PI)
}

fn check_pair(nu: usize, nu2: usize) -> Result<()> {
    if nu > 1 || nu2 > 1 {
        return Err(Error::InvalidInput(format!(
            "atom indices must be 0 or 1, got ({nu}, {nu2})"
        )));
    }
    Ok(())
}

fn check_frequency(omega: f64) -> Result<()> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidInput(format!("frequency must be positive, got {omega}")));
    }
    Ok(())
}

impl ReservoirSpectrum {
    /// Correlation-time estimate used only by the Markov diagnostics.
    pub fn tau_c(&self, frame: &DressedFrame) -> f64 {
        match self {
            ReservoirSpectrum::FreeSpace { .. } => 1.0 / frame.omega(Sideband::Minus).min(frame.omega_laser),
            ReservoirSpectrum::IdealCavity(c) => c.tau_c(),
            ReservoirSpectrum::Lorentzian(l) => 1.0 / l.gamma,
            ReservoirSpectrum::Tabulated(t) => t.tau_c(),
        }
    }

    /// `Γ_{νν'}(ω) = 2π G_{νν'}(ω)`.
    pub fn gamma_at(&self, nu: usize, nu2: usize, omega: f64) -> Result<C64> {
        check_pair(nu, nu2)?;
        check_frequency(omega)?;
        Ok(match self {
            ReservoirSpectrum::FreeSpace { dipole } => {
                let g = if nu == nu2 {
                    free_space_gamma(dipole, omega)
                } else {
                    0.0
                };
                C64::new(g, 0.0)
            }
            ReservoirSpectrum::IdealCavity(c) => cavity::cavity_gamma(c, nu, nu2, omega),
            ReservoirSpectrum::Lorentzian(l) => C64::new(2.0 * PI * l.density(omega), 0.0),
            ReservoirSpectrum::Tabulated(t) => {
                let (lo, hi) = t.range();
                if omega < lo || omega > hi {
                    return Err(Error::OutOfRange {
                        omega,
                        min: lo,
                        max: hi,
                    });
                }
                t.density(nu, nu2, omega) * (2.0 * PI)
            }
        })
    }

    /// `Δ_{νν'}(ω)`. Free-space entries and cavity self terms are not
    /// computed and return zero; see [`TableOptions::self_shift`].
    pub fn delta_at(&self, nu: usize, nu2: usize, omega: f64, sites: &[Vec3; 2], tol: Tolerance) -> Result<C64> {
        check_pair(nu, nu2)?;
        check_frequency(omega)?;
        Ok(match self {
            ReservoirSpectrum::FreeSpace { .. } => C64::new(0.0, 0.0),
            ReservoirSpectrum::IdealCavity(c) => {
                if nu == nu2 {
                    C64::new(0.0, 0.0)
                } else {
                    C64::new(cavity_rddi(c, sites[0].z, sites[1].z, omega)?, 0.0)
                }
            }
            ReservoirSpectrum::Lorentzian(l) => C64::new(l.principal_value(omega, tol)?, 0.0),
            ReservoirSpectrum::Tabulated(t) => t.principal_value(nu, nu2, omega, tol)?,
        })
    }

    /// `χ(ω) = ½Γ(ω) − iΔ(ω)` on the whole frequency axis, for the overlap integral.
    fn response(&self, nu: usize, nu2: usize, omega: f64, tol: Tolerance) -> Result<C64> {
        let (gamma, delta) = match self {
            ReservoirSpectrum::FreeSpace { dipole } => {
                let g = if nu == nu2 && omega > 0.0 {
                    free_space_gamma(dipole, omega)
                } else {
                    0.0
                };
                (C64::new(g, 0.0), C64::new(0.0, 0.0))
            }
            ReservoirSpectrum::IdealCavity(_) => {
                return Err(Error::Unsupported("coarse-grained rates for the mode-sum cavity"))
            }
            ReservoirSpectrum::Lorentzian(l) => (
                C64::new(2.0 * PI * l.density(omega), 0.0),
                C64::new(l.principal_value(omega, tol)?, 0.0),
            ),
            ReservoirSpectrum::Tabulated(t) => (
                t.density(nu, nu2, omega) * (2.0 * PI),
                t.principal_value(nu, nu2, omega, tol)?,
            ),
        };
        Ok(gamma * 0.5 - delta * C64::new(0.0, 1.0))
    }
}

/// Options for [`coupling_table`].
#[derive(Debug, Clone, Copy, Default)]
pub struct TableOptions {
    pub pv: Tolerance,
    /// Constant self shifts `Δ^i_{νν}`, ordered `(+, z, −)`, for the spectra
    /// whose self shifts are not computed (free space and cavity).
    pub self_shift: Option<[f64; 3]>,
}

/// `Δ^i_{νν'} = Δ_{νν'}(ω_i)` and `Γ^i_{νν'} = Γ_{νν'}(ω_i)` for all three channels.
pub fn coupling_table(
    spec: &ReservoirSpectrum,
    frame: &DressedFrame,
    sites: &[Vec3; 2],
    options: &TableOptions,
) -> Result<CouplingTable> {
    for band in Sideband::ALL {
        let omega = frame.omega(band);
        if !(omega > 0.0) {
            return Err(Error::InvalidInput(format!(
                "sideband {} frequency {omega} is not positive",
                band.label()
            )));
        }
    }
    // The cavity regulator is shared by all channels and set by the largest frequency.
    let spec = match spec {
        ReservoirSpectrum::IdealCavity(c) if c.regulator.is_none() => {
            let mut c = c.clone();
            c.regulator = Some(cavity::default_regulator(
                &c,
                sites[0].z,
                sites[1].z,
                frame.omega(Sideband::Plus),
            ));
            std::borrow::Cow::Owned(ReservoirSpectrum::IdealCavity(c))
        }
        other => std::borrow::Cow::Borrowed(other),
    };
    let computes_self = matches!(
        *spec,
        ReservoirSpectrum::Lorentzian(_) | ReservoirSpectrum::Tabulated(_)
    );
    let zero = C64::new(0.0, 0.0);
    let mut delta = [[[zero; 2]; 2]; 3];
    let mut gamma = [[[zero; 2]; 2]; 3];
    for band in Sideband::ALL {
        let i = band.index();
        let omega = frame.omega(band);
        for nu in 0..2 {
            for nu2 in 0..2 {
                gamma[i][nu][nu2] = spec.gamma_at(nu, nu2, omega)?;
                delta[i][nu][nu2] = if nu == nu2 && !computes_self {
                    C64::new(options.self_shift.map_or(0.0, |s| s[i]), 0.0)
                } else if nu == 1 && nu2 == 0 {
                    delta[i][0][1].conj()
                } else {
                    spec.delta_at(nu, nu2, omega, sites, options.pv)?
                };
            }
        }
        // Force exact Hermiticity of the interpolated Γ cross terms.
        gamma[i][1][0] = gamma[i][0][1].conj();
    }
    CouplingTable::new(delta, gamma)
}

/// `∫ dω' δ_T(ω') χ(ω_i + ω')` with `δ_T(ω) = sin(ωT)/(πω)`.
///
/// The window `|ω'| ≤ 400/T` is integrated in half-period panels; the sinc
/// mass outside it is assigned to the mean of `χ` at the two edges, so a
/// constant `χ` is reproduced exactly.
pub fn sinc_overlap<F>(chi: F, omega_i: f64, coarse_time: f64, tol: Tolerance) -> Result<C64>
where
    F: Fn(f64) -> Result<C64>,
{
    if !(coarse_time > 0.0) || !coarse_time.is_finite() {
        return Err(Error::InvalidInput(format!(
            "coarse-graining time must be positive, got {coarse_time}"
        )));
    }
    let t = coarse_time;
    let sinc = |x: f64| if x == 0.0 { t / PI } else { (x * t).sin() / (PI * x) };
    let reach = SINC_WINDOW / t;
    let step = PI / t;
    let half_panels = (reach / step).floor() as i64;
    let mut breaks: Vec<f64> = (-half_panels..=half_panels).map(|k| k as f64 * step).collect();
    if breaks[0] > -reach {
        breaks.insert(0, -reach);
        breaks.push(reach);
    }

    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let guarded = |x: f64| match chi(omega_i + x) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            C64::new(0.0, 0.0)
        }
    };
    let tol = Tolerance {
        max_intervals: tol.max_intervals + breaks.len(),
        ..tol
    };
    let body = integrate_panels(|x| guarded(x) * sinc(x), &breaks, tol)?;
    let mass = integrate_panels(|x| C64::new(sinc(x), 0.0), &breaks, tol)?.re;
    let edges = (guarded(-reach) + guarded(reach)) * 0.5;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(body + edges * (1.0 - mass))
}

/// Finite-`T` rate `∫ dω' δ_T(ω') [½Γ − iΔ](ω_i + ω')` for channel `band`.
pub fn coarse_grained_rates(
    spec: &ReservoirSpectrum,
    frame: &DressedFrame,
    coarse_time: f64,
    nu: usize,
    nu2: usize,
    band: Sideband,
    tol: Tolerance,
) -> Result<C64> {
    check_pair(nu, nu2)?;
    let omega_i = frame.omega(band);
    match spec {
        ReservoirSpectrum::IdealCavity(_) => {
            return Err(Error::Unsupported("coarse-grained rates for the mode-sum cavity"))
        }
        ReservoirSpectrum::FreeSpace { .. } if omega_i - SINC_WINDOW / coarse_time <= 0.0 => {
            return Err(Error::InvalidInput(
                "coarse-graining window reaches non-positive frequencies".into(),
            ))
        }
        _ => {}
    }
    let inner = Tolerance {
        relative: tol.relative * 1e-2,
        ..tol
    };
    sinc_overlap(|w| spec.response(nu, nu2, w, inner), omega_i, coarse_time, tol)
}

/// Separation-of-time-scales diagnostics for a coarse-graining time `T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarkovReport {
    pub coarse_time: f64,
    pub tau_c: f64,
    pub omega_bar: f64,
    pub max_rate: f64,
    pub margin: f64,
    /// `T·Ω̄`, should exceed the margin.
    pub secular_ratio: f64,
    /// `T/τ_c`, should exceed the margin.
    pub markov_ratio: f64,
    /// `T·max rate`, should stay below `1/margin`.
    pub resolution_ratio: f64,
    pub ok_secular: bool,
    pub ok_markov: bool,
    pub ok_resolution: bool,
}

impl MarkovReport {
    pub fn evaluate(coarse_time: f64, tau_c: f64, omega_bar: f64, max_rate: f64) -> Self {
        let secular_ratio = coarse_time * omega_bar;
        let markov_ratio = coarse_time / tau_c;
        let resolution_ratio = coarse_time * max_rate;
        Self {
            coarse_time,
            tau_c,
            omega_bar,
            max_rate,
            margin: MARKOV_MARGIN,
            secular_ratio,
            markov_ratio,
            resolution_ratio,
            ok_secular: secular_ratio >= MARKOV_MARGIN,
            ok_markov: markov_ratio >= MARKOV_MARGIN,
            ok_resolution: resolution_ratio <= 1.0 / MARKOV_MARGIN,
        }
    }

    pub fn all_ok(&self) -> bool {
        self.ok_secular && self.ok_markov && self.ok_resolution
    }
}

/// Diagnostic only: never blocks a computation.
pub fn markov_validity(
    spec: &ReservoirSpectrum,
    frame: &DressedFrame,
    table: &CouplingTable,
    coarse_time: f64,
) -> Result<MarkovReport> {
    if !(coarse_time > 0.0) {
        return Err(Error::InvalidInput(format!(
            "coarse-graining time must be positive, got {coarse_time}"
        )));
    }
    Ok(MarkovReport::evaluate(
        coarse_time,
        spec.tau_c(frame),
        frame.omega_bar,
        table.max_rate(),
    ))
}
