use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::quadrature::{integrate_panels, Tolerance};

pub const MIN_ROWS: usize = 16;
const CROSS_BOUND_TOLERANCE: f64 = 1e-9;

/// Monotone piecewise-cubic Hermite interpolant (Fritsch–Carlson slopes).
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    slope: Vec<f64>,
}

impl MonotoneCubic {
    /// `x` must be strictly increasing with at least two points.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        let n = x.len();
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let secant: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
        let mut slope = vec![0.0; n];
        if n == 2 {
            slope[0] = secant[0];
            slope[1] = secant[0];
        } else {
            for k in 1..n - 1 {
                let (s0, s1) = (secant[k - 1], secant[k]);
                if s0 * s1 > 0.0 {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    slope[k] = (w1 + w2) / (w1 / s0 + w2 / s1);
                }
            }
            slope[0] = edge_slope(h[0], h[1], secant[0], secant[1]);
            slope[n - 1] = edge_slope(h[n - 2], h[n - 3], secant[n - 2], secant[n - 3]);
        }
        Self { x, y, slope }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let k = match self.x.partition_point(|&v| v <= t) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let h = self.x[k + 1] - self.x[k];
        let s = (t - self.x[k]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.y[k] + h10 * h * self.slope[k] + h01 * self.y[k + 1] + h11 * h * self.slope[k + 1]
    }
}

/// One-sided three-point end slope, clipped to keep the end interval monotone.
fn edge_slope(h0: f64, h1: f64, s0: f64, s1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if d * s0 <= 0.0 {
        0.0
    } else if s0 * s1 <= 0.0 && d.abs() > 3.0 * s0.abs() {
        3.0 * s0
    } else {
        d
    }
}

/// `G_{νν'}(ω)` sampled on a grid; `G₂₁ = conj(G₁₂)`. Vanishes outside the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedSpectrum {
    omega: Vec<f64>,
    g11: MonotoneCubic,
    g22: MonotoneCubic,
    g12_re: MonotoneCubic,
    g12_im: MonotoneCubic,
    tau_c: f64,
}

#[derive(Debug, Deserialize)]
struct Row {
    omega: f64,
    g11: f64,
    g22: f64,
    g12_re: f64,
    g12_im: f64,
}

impl TabulatedSpectrum {
    /// Validates the grid and the pointwise positivity of the 2×2 spectrum.
    /// `τ_c` defaults to the inverse grid span.
    pub fn new(omega: Vec<f64>, g11: Vec<f64>, g22: Vec<f64>, g12: Vec<C64>) -> Result<Self> {
        let n = omega.len();
        if n < MIN_ROWS {
            return Err(Error::InvalidInput(format!(
                "tabulated spectrum needs at least {MIN_ROWS} rows, got {n}"
            )));
        }
        if g11.len() != n || g22.len() != n || g12.len() != n {
            return Err(Error::InvalidInput("tabulated columns have different lengths".into()));
        }
        if omega.iter().any(|w| !w.is_finite()) || omega.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput(
                "tabulated frequencies must be finite and strictly increasing".into(),
            ));
        }
        for k in 0..n {
            let (a, b, c) = (g11[k], g22[k], g12[k]);
            if !a.is_finite() || !b.is_finite() || !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite spectrum value at row {k}")));
            }
            if a < 0.0 || b < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "negative self spectrum at ω = {}",
                    omega[k]
                )));
            }
            if c.norm_sqr() > a * b + CROSS_BOUND_TOLERANCE * (1.0 + a * b) {
                return Err(Error::InvalidInput(format!(
                    "cross spectrum exceeds sqrt(G₁₁G₂₂) at ω = {}",
                    omega[k]
                )));
            }
        }
        let tau_c = 1.0 / (omega[n - 1] - omega[0]);
        let column = |v: Vec<f64>| MonotoneCubic::new(omega.clone(), v);
        Ok(Self {
            g11: column(g11),
            g22: column(g22),
            g12_re: column(g12.iter().map(|z| z.re).collect()),
            g12_im: column(g12.iter().map(|z| z.im).collect()),
            omega,
            tau_c,
        })
    }

    /// Reads a CSV with header `omega,g11,g22,g12_re,g12_im`.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let headers = reader
            .headers()
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?
            .clone();
        let expected = ["omega", "g11", "g22", "g12_re", "g12_im"];
        if headers.iter().map(str::trim).ne(expected) {
            return Err(Error::Io(format!(
                "{}: header must be {}, found {}",
                path.display(),
                expected.join(","),
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let (mut omega, mut g11, mut g22, mut g12) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for (k, row) in reader.deserialize::<Row>().enumerate() {
            let row = row.map_err(|e| Error::Io(format!("{} row {}: {e}", path.display(), k + 2)))?;
            omega.push(row.omega);
            g11.push(row.g11);
            g22.push(row.g22);
            g12.push(C64::new(row.g12_re, row.g12_im));
        }
        Self::new(omega, g11, g22, g12)
    }

    pub fn with_tau_c(mut self, tau_c: f64) -> Result<Self> {
        if !(tau_c > 0.0) || !tau_c.is_finite() {
            return Err(Error::InvalidInput(format!(
                "correlation time must be positive, got {tau_c}"
            )));
        }
        self.tau_c = tau_c;
        Ok(self)
    }

    pub fn tau_c(&self) -> f64 {
        self.tau_c
    }

    pub fn range(&self) -> (f64, f64) {
        (self.omega[0], self.omega[self.omega.len() - 1])
    }

    pub fn grid(&self) -> &[f64] {
        &self.omega
    }

    /// Interpolated `G_{νν'}(ω)`, zero outside the grid.
    pub fn density(&self, nu: usize, nu2: usize, omega: f64) -> C64 {
        let (lo, hi) = self.range();
        if omega < lo || omega > hi {
            return C64::new(0.0, 0.0);
        }
        match (nu, nu2) {
            (0, 0) => C64::new(self.g11.eval(omega), 0.0),
            (1, 1) => C64::new(self.g22.eval(omega), 0.0),
            (0, 1) => C64::new(self.g12_re.eval(omega), self.g12_im.eval(omega)),
            _ => C64::new(self.g12_re.eval(omega), -self.g12_im.eval(omega)),
        }
    }

    /// `P∫ G_{νν'}(ω)/(ω − ω_i) dω` over the grid.
    pub fn principal_value(&self, nu: usize, nu2: usize, omega_i: f64, tol: Tolerance) -> Result<C64> {
        let (lo, hi) = self.range();
        let tol = Tolerance {
            max_intervals: tol.max_intervals + self.omega.len(),
            ..tol
        };
        if omega_i < lo || omega_i > hi {
            return integrate_panels(|w| self.density(nu, nu2, w) / (w - omega_i), &self.omega, tol);
        }
        if omega_i == lo || omega_i == hi {
            return Err(Error::InvalidInput(format!(
                "principal value undefined at the grid edge ω = {omega_i}"
            )));
        }
        let g_i = self.density(nu, nu2, omega_i);
        let mut breaks = self.omega.clone();
        let at = breaks.partition_point(|&w| w < omega_i);
        if breaks[at] != omega_i {
            breaks.insert(at, omega_i);
        }
        let window = integrate_panels(|w| (self.density(nu, nu2, w) - g_i) / (w - omega_i), &breaks, tol)?;
        Ok(window + g_i * ((hi - omega_i) / (omega_i - lo)).ln())
    }
}
