//! Small dense complex linear algebra used by the two-atom solver.
//!
//! Density matrices are vectorized by column stacking: `vec(ρ)[i + 4j] = ρ[i, j]`.
//! With this convention `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)` and the trace functional
//! is the row vector `vec(I)ᵀ`.

use nalgebra::{Matrix2, Matrix4, SMatrix, SVector, Vector3};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type Op2 = Matrix2<C64>;
pub type Op4 = Matrix4<C64>;
pub type Super16 = SMatrix<C64, 16, 16>;
pub type Vec16 = SVector<C64, 16>;
pub type Vec3 = Vector3<f64>;
pub type CVec3 = Vector3<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// `|+⟩⟨+| − |−⟩⟨−|` in the single-atom dressed basis ordered `(+, −)`.
pub fn spin_z() -> Op2 {
    Op2::new(ONE, ZERO, ZERO, -ONE)
}

/// `|+⟩⟨−|`.
pub fn spin_raise() -> Op2 {
    Op2::new(ZERO, ONE, ZERO, ZERO)
}

/// `|−⟩⟨+|`.
pub fn spin_lower() -> Op2 {
    Op2::new(ZERO, ZERO, ONE, ZERO)
}

pub fn kron2(a: &Op2, b: &Op2) -> Op4 {
    Op4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// Operator acting on atom 1 of the pair.
pub fn on_first(a: &Op2) -> Op4 {
    kron2(a, &Op2::identity())
}

/// Operator acting on atom 2 of the pair.
pub fn on_second(b: &Op2) -> Op4 {
    kron2(&Op2::identity(), b)
}

pub fn kron4(a: &Op4, b: &Op4) -> Super16 {
    Super16::from_fn(|r, c| a[(r / 4, c / 4)] * b[(r % 4, c % 4)])
}

/// Superoperator of `ρ ↦ A ρ B`.
pub fn sandwich(a: &Op4, b: &Op4) -> Super16 {
    kron4(&b.transpose(), a)
}

pub fn vectorize(rho: &Op4) -> Vec16 {
    Vec16::from_fn(|k, _| rho[(k % 4, k / 4)])
}

pub fn unvectorize(v: &Vec16) -> Op4 {
    Op4::from_fn(|r, c| v[r + 4 * c])
}

pub fn trace4(m: &Op4) -> C64 {
    (0..4).map(|k| m[(k, k)]).sum()
}

/// Largest entry of `|M − M†|`.
pub fn hermiticity_residual(m: &Op4) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &Op4) -> [f64; 4] {
    let h = (m + m.adjoint()).scale(0.5);
    let eig = h.symmetric_eigenvalues();
    let mut out = [eig[0], eig[1], eig[2], eig[3]];
    out.sort_by(|a, b| a.total_cmp(b));
    out
}

/// Eigenvalues of a 2×2 Hermitian matrix, ascending.
pub fn hermitian_eigenvalues2(m: &Op2) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = (m[(0, 1)] + m[(1, 0)].conj()) * 0.5;
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean - radius, mean + radius]
}

/// Largest singular value.
pub fn spectral_norm(m: &Super16) -> f64 {
    m.singular_values().iter().cloned().fold(0.0, f64::max)
}

pub fn to_complex(v: &Vec3) -> CVec3 {
    v.map(|x| C64::new(x, 0.0))
}

/// Euclidean norm of a complex 3-vector, `sqrt(Σ|vᵢ|²)`.
pub fn cnorm(v: &CVec3) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
