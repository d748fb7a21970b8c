use serde::Serialize;

use crate::dressing::{DressedFrame, Sideband};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues2, Op2, C64};

const HERMITIAN_TOLERANCE: f64 = 1e-12;
const PSD_TOLERANCE: f64 = 1e-9;
const REAL_DELTA_TOLERANCE: f64 = 1e-9;

/// `Δ^i_{νν'}` and `Γ^i_{νν'}` for the three dressed channels, indexed
/// `[channel][ν][ν']` with channels ordered as [`Sideband::ALL`] and atoms `0, 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingTable {
    pub delta: [[[C64; 2]; 2]; 3],
    pub gamma: [[[C64; 2]; 2]; 3],
}

impl CouplingTable {
    /// Checks finiteness and Hermiticity in `(ν, ν')`. Positivity of `Γ` is
    /// checked when the dissipator is assembled, see [`CouplingTable::check_physical`].
    pub fn new(delta: [[[C64; 2]; 2]; 3], gamma: [[[C64; 2]; 2]; 3]) -> Result<Self> {
        for (name, table) in [("delta", &delta), ("gamma", &gamma)] {
            for (i, m) in table.iter().enumerate() {
                if m.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(Error::InvalidInput(format!("{name}[{i}] has non-finite entries")));
                }
                let scale = m.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
                let off = (m[0][1] - m[1][0].conj()).norm();
                let diag = m[0][0].im.abs().max(m[1][1].im.abs());
                if off.max(diag) > HERMITIAN_TOLERANCE * scale {
                    return Err(Error::InvalidInput(format!(
                        "{name}[{i}] is not Hermitian in the atom indices"
                    )));
                }
            }
        }
        Ok(Self { delta, gamma })
    }

    /// Identical atoms with independent decay: `Γ^i₁₁ = Γ^i₂₂`, `Γ^i₁₂ = 0`,
    /// real symmetric `Δ^i₁₂` and no self shifts. Arrays are ordered `(+, z, −)`.
    pub fn independent(delta_12: [f64; 3], gamma_self: [f64; 3]) -> Result<Self> {
        let zero = C64::new(0.0, 0.0);
        let mut delta = [[[zero; 2]; 2]; 3];
        let mut gamma = [[[zero; 2]; 2]; 3];
        for i in 0..3 {
            delta[i][0][1] = C64::new(delta_12[i], 0.0);
            delta[i][1][0] = C64::new(delta_12[i], 0.0);
            gamma[i][0][0] = C64::new(gamma_self[i], 0.0);
            gamma[i][1][1] = C64::new(gamma_self[i], 0.0);
        }
        Self::new(delta, gamma)
    }

    pub fn delta(&self, band: Sideband, nu: usize, nu2: usize) -> C64 {
        self.delta[band.index()][nu][nu2]
    }

    pub fn gamma(&self, band: Sideband, nu: usize, nu2: usize) -> C64 {
        self.gamma[band.index()][nu][nu2]
    }

    /// `Γ̃^i = Γ^i₁₁ c_i²`.
    pub fn tilde_gamma(&self, band: Sideband, frame: &DressedFrame) -> f64 {
        let c = frame.coefficient(band);
        self.gamma(band, 0, 0).re * c * c
    }

    /// `Δ̃^i₁₂ = Re Δ^i₁₂ c_i²`.
    pub fn tilde_delta(&self, band: Sideband, frame: &DressedFrame) -> f64 {
        let c = frame.coefficient(band);
        self.delta(band, 0, 1).re * c * c
    }

    /// Largest modulus over all entries.
    pub fn max_rate(&self) -> f64 {
        self.delta
            .iter()
            .chain(self.gamma.iter())
            .flatten()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Every per-channel `Γ^i` must be positive semidefinite.
    pub fn check_physical(&self) -> Result<()> {
        for band in Sideband::ALL {
            let m = &self.gamma[band.index()];
            let op = Op2::new(m[0][0], m[0][1], m[1][0], m[1][1]);
            let lowest = hermitian_eigenvalues2(&op)[0];
            let scale = m.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
            if lowest < -PSD_TOLERANCE * scale {
                return Err(Error::NonPhysicalDissipator {
                    channel: band.label(),
                    eigenvalue: lowest,
                });
            }
        }
        Ok(())
    }

    /// Real cross shifts `Δ^i₁₂`, ordered `(+, z, −)`; imaginary parts below
    /// `1e-9` of the magnitude are dropped, larger ones are an error.
    pub fn real_cross_deltas(&self) -> Result<[f64; 3]> {
        let mut out = [0.0; 3];
        for band in Sideband::ALL {
            let d = self.delta(band, 0, 1);
            if d.im.abs() > REAL_DELTA_TOLERANCE * d.norm() {
                return Err(Error::ComplexDelta {
                    channel: band.label(),
                    imag: d.im,
                    magnitude: d.norm(),
                });
            }
            out[band.index()] = d.re;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tilde_weights_for_flat_rates() {
        let frame = DressedFrame::new(100.0, 3.0, 4.0).unwrap();
        let table = CouplingTable::independent([0.0; 3], [1.0; 3]).unwrap();
        assert!((table.tilde_gamma(Sideband::Plus, &frame) - 0.04).abs() < 1e-15);
        assert!((table.tilde_gamma(Sideband::Minus, &frame) - 0.64).abs() < 1e-15);
        assert!((table.tilde_gamma(Sideband::Z, &frame) - 0.16).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian_entries() {
        let z = C64::new(0.0, 0.0);
        let mut delta = [[[z; 2]; 2]; 3];
        delta[0][0][1] = C64::new(1.0, 0.0);
        assert!(matches!(
            CouplingTable::new(delta, [[[z; 2]; 2]; 3]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn negative_rate_is_non_physical() {
        let table = CouplingTable::independent([0.0; 3], [1.0, -0.5, 1.0]).unwrap();
        assert!(matches!(
            table.check_physical(),
            Err(Error::NonPhysicalDissipator { channel: "z", .. })
        ));
        let mut ok = CouplingTable::independent([0.0; 3], [1.0; 3]).unwrap();
        ok.gamma[2][0][1] = C64::new(0.0, 1.0);
        ok.gamma[2][1][0] = C64::new(0.0, -1.0);
        assert!(ok.check_physical().is_ok());
        ok.gamma[2][0][1] = C64::new(0.0, 1.1);
        ok.gamma[2][1][0] = C64::new(0.0, -1.1);
        assert!(ok.check_physical().is_err());
    }

    #[test]
    fn complex_delta_guard() {
        let mut table = CouplingTable::independent([1.0, 2.0, 3.0], [0.0; 3]).unwrap();
        table.delta[1][0][1] = C64::new(2.0, 1e-12);
        table.delta[1][1][0] = C64::new(2.0, -1e-12);
        assert_eq!(table.real_cross_deltas().unwrap(), [1.0, 2.0, 3.0]);
        table.delta[1][0][1] = C64::new(2.0, 1e-6);
        assert!(matches!(
            table.real_cross_deltas(),
            Err(Error::ComplexDelta { channel: "z", .. })
        ));
    }
}
