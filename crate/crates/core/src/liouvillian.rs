//! Two-atom master equation in the dressed pair basis
//! `|1⟩ = |++⟩, |2⟩ = |+−⟩, |3⟩ = |−+⟩, |4⟩ = |−−⟩`.
//!
//! With `S̃_{iν} = c_i e^{−i k_L·r_ν} S^i_ν` the generator is
//!
//! ```text
//! H_DD = −½ Σ_{ν≠ν'} Σ_i (Δ^i_{νν'} S̃_{iν} S̃†_{iν'} + h.c.)
//! D[ρ] = Σ_{i,ν,ν'} Γ^i_{νν'} (A_{iν} ρ A†_{iν'} − ½{A†_{iν'} A_{iν}, ρ}),   A_{iν} = S̃†_{iν}
//! ```
//!
//! Only the phase difference `k_L·r₁₂` is observable, so atom 1 carries
//! `e^{−i k_L·r₁₂}` and atom 2 carries no phase.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::dressing::{DressedFrame, Sideband};
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigenvalues, hermiticity_residual, on_first, on_second, sandwich, spectral_norm, spin_lower, spin_raise,
    spin_z, trace4, unvectorize, vectorize, Op2, Op4, Super16, Vec16, Vec3, C64, I, ONE, ZERO,
};
use crate::spectra::CouplingTable;

const STATE_HERMITIAN: f64 = 1e-10;
const STATE_TRACE: f64 = 1e-10;
const STATE_EIGEN: f64 = -1e-8;
const TRAJECTORY_TRACE: f64 = 1e-8;
const STEP_SAFETY: f64 = 0.05;

/// Density matrix of the pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoAtomState {
    #[serde(serialize_with = "serialize_op4")]
    rho: Op4,
}

fn serialize_op4<S: serde::Serializer>(m: &Op4, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<[f64; 2]>> = (0..4)
        .map(|r| (0..4).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect();
    serde::Serialize::serialize(&rows, s)
}

impl TwoAtomState {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(rho: Op4) -> Result<Self> {
        check_state(&rho, STATE_TRACE).map_err(Error::InvalidInput)?;
        Ok(Self { rho })
    }

    /// `|ψ⟩⟨ψ|` for a real amplitude vector, normalized here.
    pub fn from_pure_real(psi: [f64; 4]) -> Self {
        let norm2: f64 = psi.iter().map(|x| x * x).sum();
        let rho = Op4::from_fn(|r, c| C64::new(psi[r] * psi[c] / norm2, 0.0));
        Self { rho }
    }

    /// `|n⟩⟨n|` with `n` zero-based.
    pub fn basis(n: usize) -> Self {
        let mut rho = Op4::zeros();
        rho[(n, n)] = ONE;
        Self { rho }
    }

    pub fn maximally_mixed() -> Self {
        Self {
            rho: Op4::identity().scale(0.25),
        }
    }

    pub fn matrix(&self) -> &Op4 {
        &self.rho
    }

    /// `ρ_{nm}` with the one-based labels of the pair basis.
    pub fn element(&self, n: usize, m: usize) -> C64 {
        self.rho[(n - 1, m - 1)]
    }

    /// Reduced state of atom 1 in its `(+, −)` basis.
    pub fn reduced_first(&self) -> Op2 {
        Op2::from_fn(|a, b| (0..2).map(|k| self.rho[(2 * a + k, 2 * b + k)]).sum())
    }

    pub fn purity(&self) -> f64 {
        trace4(&(self.rho * self.rho)).re
    }
}

fn check_state(rho: &Op4, trace_tol: f64) -> std::result::Result<(), String> {
    if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err("density matrix has non-finite entries".into());
    }
    let herm = hermiticity_residual(rho);
    if herm > STATE_HERMITIAN {
        return Err(format!("Hermiticity residual {herm:e}"));
    }
    let tr = trace4(rho);
    if (tr - ONE).norm() > trace_tol {
        return Err(format!("trace {} deviates from 1", tr.re));
    }
    let lowest = hermitian_eigenvalues(rho)[0];
    if lowest < STATE_EIGEN {
        return Err(format!("negative eigenvalue {lowest:e}"));
    }
    Ok(())
}

/// Superoperator `L` on column-stacked `ρ` together with the coherent part.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix {
    liouvillian: Super16,
    hamiltonian: Op4,
}

impl GeneratorMatrix {
    /// Purely coherent generator `−i[H, ·]`.
    pub fn coherent(hamiltonian: Op4) -> Self {
        Self {
            liouvillian: commutator_super(&hamiltonian),
            hamiltonian,
        }
    }

    pub fn liouvillian(&self) -> &Super16 {
        &self.liouvillian
    }

    pub fn hamiltonian(&self) -> &Op4 {
        &self.hamiltonian
    }

    /// `max_k |(vec(I)ᵀ L)_k|`; zero for a trace-preserving generator.
    pub fn trace_residual(&self) -> f64 {
        (0..16)
            .map(|k| (0..4).map(|d| self.liouvillian[(5 * d, k)]).sum::<C64>().norm())
            .fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        spectral_norm(&self.liouvillian)
    }

    /// `L[ρ]` as a matrix.
    pub fn apply(&self, rho: &Op4) -> Op4 {
        unvectorize(&(self.liouvillian * vectorize(rho)))
    }
}

fn commutator_super(h: &Op4) -> Super16 {
    let id = Op4::identity();
    (sandwich(h, &id) - sandwich(&id, h)) * (-I)
}

/// `[S̃_{i1}, S̃_{i2}]` as pair operators for channel `band`.
fn dressed_operators(frame: &DressedFrame, band: Sideband, theta: f64) -> [Op4; 2] {
    let spin = match band {
        Sideband::Plus => spin_raise(),
        Sideband::Z => spin_z(),
        Sideband::Minus => spin_lower(),
    };
    let c = C64::new(frame.coefficient(band), 0.0);
    let phase = C64::from_polar(1.0, -theta);
    [on_first(&spin) * (c * phase), on_second(&spin) * c]
}

/// Dipole-dipole Hamiltonian of the dressed pair; `ν = ν'` shifts are omitted.
pub fn build_hdd(table: &CouplingTable, frame: &DressedFrame, r12: &Vec3) -> Result<Op4> {
    let deltas = table.real_cross_deltas()?;
    let theta = frame.laser_phase(r12);
    let mut h = Op4::zeros();
    for band in Sideband::ALL {
        let d = C64::new(deltas[band.index()], 0.0);
        if d == ZERO {
            continue;
        }
        let s = dressed_operators(frame, band, theta);
        for (nu, nu2) in [(0, 1), (1, 0)] {
            let term = s[nu] * s[nu2].adjoint() * d;
            h -= (term + term.adjoint()) * C64::new(0.5, 0.0);
        }
    }
    Ok(h)
}

/// Full generator `−i[H_DD, ·] + D`.
pub fn build_liouvillian(table: &CouplingTable, frame: &DressedFrame, r12: &Vec3) -> Result<GeneratorMatrix> {
    table.check_physical()?;
    let hamiltonian = build_hdd(table, frame, r12)?;
    let mut liouvillian = commutator_super(&hamiltonian);
    let theta = frame.laser_phase(r12);
    let id = Op4::identity();
    for band in Sideband::ALL {
        let s = dressed_operators(frame, band, theta);
        let jumps = [s[0].adjoint(), s[1].adjoint()];
        for nu in 0..2 {
            for nu2 in 0..2 {
                let g = table.gamma(band, nu, nu2);
                if g == ZERO {
                    continue;
                }
                let a = &jumps[nu];
                let b_dag = jumps[nu2].adjoint();
                let anti = b_dag * a;
                let dissipator =
                    sandwich(a, &b_dag) - (sandwich(&anti, &id) + sandwich(&id, &anti)) * C64::new(0.5, 0.0);
                liouvillian += dissipator * g;
            }
        }
    }
    Ok(GeneratorMatrix {
        liouvillian,
        hamiltonian,
    })
}

/// States emitted at every integration step, starting with the initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<TwoAtomState>,
}

/// Largest step accepted by [`evolve`]: `0.05/‖L‖₂`.
pub fn max_step(gen: &GeneratorMatrix) -> f64 {
    let norm = gen.norm();
    if norm == 0.0 {
        f64::INFINITY
    } else {
        STEP_SAFETY / norm
    }
}

/// Fixed-step RK4 integration up to `t_final`. The step is shrunk so that an
/// integer number of steps lands exactly on `t_final`.
pub fn evolve(gen: &GeneratorMatrix, rho0: &TwoAtomState, t_final: f64, dt: f64) -> Result<Trajectory> {
    if !(t_final >= 0.0) || !t_final.is_finite() {
        return Err(Error::InvalidInput(format!(
            "final time must be non-negative, got {t_final}"
        )));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidInput(format!("time step must be positive, got {dt}")));
    }
    let bound = max_step(gen);
    if dt > bound {
        return Err(Error::StepTooLarge { dt, bound });
    }
    check_state(&rho0.rho, STATE_TRACE).map_err(Error::InvalidInput)?;

    let steps = (t_final / dt).ceil() as usize;
    let h = if steps == 0 { 0.0 } else { t_final / steps as f64 };
    let l = &gen.liouvillian;
    let hc = C64::new(h, 0.0);
    let half = C64::new(0.5 * h, 0.0);
    let sixth = C64::new(h / 6.0, 0.0);

    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(*rho0);
    let mut x: Vec16 = vectorize(&rho0.rho);
    for n in 1..=steps {
        let k1 = l * x;
        let k2 = l * (x + k1 * half);
        let k3 = l * (x + k2 * half);
        let k4 = l * (x + k3 * hc);
        x += (k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4) * sixth;
        let t = if n == steps { t_final } else { n as f64 * h };
        let rho = unvectorize(&x);
        check_state(&rho, TRAJECTORY_TRACE).map_err(|what| Error::InvariantViolation { t, what })?;
        times.push(t);
        states.push(TwoAtomState { rho });
    }
    Ok(Trajectory { times, states })
}

/// Unique stationary state from the one-dimensional kernel of `L`.
pub fn steady_state(gen: &GeneratorMatrix) -> Result<TwoAtomState> {
    let svd = gen.liouvillian.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..16).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let smallest = svd.singular_values[order[0]];
    let second = svd.singular_values[order[1]];
    let largest = svd.singular_values[order[15]];
    if !(smallest < 1e-10 * largest) || !(second > 1e-6 * largest) {
        return Err(Error::DegenerateKernel {
            smallest,
            second,
            largest,
        });
    }
    let kernel = Vec16::from_fn(|k, _| v_t[(order[0], k)].conj());
    let rho = unvectorize(&kernel);
    let tr = trace4(&rho);
    if tr.norm() == 0.0 {
        return Err(Error::DegenerateKernel {
            smallest,
            second,
            largest,
        });
    }
    let rho = rho / tr;
    let rho = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
    TwoAtomState::new(rho)
}

/// Components `(ρ₂₂, ρ₃₃, Re ρ₂₃, Im ρ₂₃)` of the dissipationless reduced model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedTransient {
    pub rho22: f64,
    pub rho33: f64,
    pub re_rho23: f64,
    pub im_rho23: f64,
}

/// Closed 3×3 model for `(ρ₂₂, ρ₃₃, Im ρ₂₃)` with `Δ = Δ̃⁺₁₂ + Δ̃⁻₁₂`,
/// solved by matrix exponential; `Re ρ₂₃` stays at its initial value.
///
/// The model treats `H₂₃` as real, which holds for `k_L·r₁₂ = 0` (mod π) or
/// `Δ̃⁺₁₂ = Δ̃⁻₁₂`; otherwise it differs from the full generator.
pub fn transient_reduced(
    table: &CouplingTable,
    frame: &DressedFrame,
    rho0: &TwoAtomState,
    t: f64,
) -> Result<ReducedTransient> {
    table.real_cross_deltas()?;
    let d = table.tilde_delta(Sideband::Plus, frame) + table.tilde_delta(Sideband::Minus, frame);
    #[rustfmt::skip]
    let m = Matrix3::new(
        0.0, 0.0, 2.0 * d,
        0.0, 0.0, -2.0 * d,
        -d, d, 0.0,
    );
    let x0 = Vector3::new(rho0.element(2, 2).re, rho0.element(3, 3).re, rho0.element(2, 3).im);
    let x = (m * t).exp() * x0;
    Ok(ReducedTransient {
        rho22: x[0],
        rho33: x[1],
        re_rho23: rho0.element(2, 3).re,
        im_rho23: x[2],
    })
}
