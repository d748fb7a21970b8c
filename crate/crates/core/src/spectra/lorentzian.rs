use std::f64::consts::PI;

use crate::error::Result;
use crate::linalg::C64;
use crate::quadrature::{integrate_panels, Tolerance};

/// Lorentzian two-point spectrum shared by every atom pair,
/// `G(ω) = (W/π)(γ/2)/((ω − ω₀)² + (γ/2)²)`, normalized to `∫G dω = W`
/// over the whole real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lorentzian {
    pub weight: f64,
    pub omega0: f64,
    /// Full width at half maximum.
    pub gamma: f64,
}

/// Half-width of the quadrature window in units of the linewidth.
const WINDOW_WIDTHS: f64 = 100.0;

impl Lorentzian {
    fn half_width(&self) -> f64 {
        0.5 * self.gamma
    }

    pub fn density(&self, omega: f64) -> f64 {
        let a = self.half_width();
        let u = omega - self.omega0;
        self.weight * a / (PI * (u * u + a * a))
    }

    /// `P∫ G(ω)/(ω − ω_i) dω` over the real line.
    ///
    /// A symmetric window `ω_i ± h` around the pole is integrated with the
    /// singularity subtracted; the two tails outside it are integrated in
    /// closed form.
    pub fn principal_value(&self, omega_i: f64, tol: Tolerance) -> Result<f64> {
        let a = self.half_width();
        let h = WINDOW_WIDTHS * self.gamma + (omega_i - self.omega0).abs();
        let lo = omega_i - h;
        let hi = omega_i + h;
        let g_i = self.density(omega_i);
        let integrand = |w: f64| C64::new((self.density(w) - g_i) / (w - omega_i), 0.0);

        let mut breaks = vec![lo, hi, omega_i];
        for k in [-8.0, -2.0, 0.0, 2.0, 8.0] {
            let x = self.omega0 + k * a;
            if x > lo && x < hi {
                breaks.push(x);
            }
        }
        breaks.sort_by(|x, y| x.total_cmp(y));
        breaks.dedup();
        let window = integrate_panels(integrand, &breaks, tol)?.re;
        // Exactly symmetric windows make this vanish; kept for rounding in lo/hi.
        let log_term = g_i * ((hi - omega_i) / (omega_i - lo)).ln();
        Ok(window + log_term + self.tails(omega_i, lo, hi))
    }

    /// `∫_{−∞}^{lo} + ∫_{hi}^{∞}` of `G(ω)/(ω − ω_i)`, requiring `lo < ω₀ < hi`.
    fn tails(&self, omega_i: f64, lo: f64, hi: f64) -> f64 {
        let a = self.half_width();
        let b = omega_i - self.omega0;
        let amp = 1.0 / (a * a + b * b);
        let log_part = |u: f64| ((u - b).abs() / u.hypot(a)).ln();
        let u_hi = hi - self.omega0;
        let u_lo = lo - self.omega0;
        // Antiderivative of 1/((u² + a²)(u − b)):
        // amp·[ln|u − b| − ½ln(u² + a²)] − (amp·b/a)·atan(u/a).
        let upper = -amp * log_part(u_hi) - amp * b / a * (a / u_hi).atan();
        let lower = amp * log_part(u_lo) - amp * b / a * (a / u_lo.abs()).atan();
        self.weight * a / PI * (upper + lower)
    }

    /// Closed-form dispersive partner `W(ω₀ − ω)/((ω₀ − ω)² + (γ/2)²)`.
    pub fn dispersive_closed_form(&self, omega: f64) -> f64 {
        let a = self.half_width();
        let b = self.omega0 - omega;
        self.weight * b / (b * b + a * a)
    }
}
