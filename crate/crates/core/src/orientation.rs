//! Effective dipole vectors from the laser polarization and the orientation
//! statistics of the emitters.
//!
//! For an atom the polarization selects the transition, so `d ∥ e_L`. For
//! randomly oriented molecules the pair potential involves the isotropic
//! average `⟨(d₁·e_k)(d₂·e_k)(d₁·e_L)(d₂·e_L)⟩ = |d|⁴(e_L·e_k)²/9`, which is
//! what a fixed dipole `|d|e_L/3` reproduces.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cnorm, CVec3, Vec3, C64};

const UNIT_TOLERANCE: f64 = 1e-12;
pub const MIN_SAMPLES: u64 = 1000;
/// Independent random streams; fixed so results do not depend on the thread count.
const SHARDS: u64 = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrientationModel {
    Fixed { d: [[f64; 2]; 3] },
    IsotropicAtom { d_mag: f64 },
    RandomMolecule { d_mag: f64, samples: u64, seed: u64 },
}

impl OrientationModel {
    pub fn fixed(d: CVec3) -> Self {
        OrientationModel::Fixed {
            d: [[d[0].re, d[0].im], [d[1].re, d[1].im], [d[2].re, d[2].im]],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            OrientationModel::Fixed { d } => {
                if d.iter().flatten().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidInput("dipole components must be finite".into()));
                }
            }
            OrientationModel::IsotropicAtom { d_mag } | OrientationModel::RandomMolecule { d_mag, .. } => {
                if !(d_mag > 0.0) || !d_mag.is_finite() {
                    return Err(Error::InvalidInput(format!(
                        "dipole magnitude must be positive, got {d_mag}"
                    )));
                }
            }
        }
        if let OrientationModel::RandomMolecule { samples, .. } = *self {
            if samples < MIN_SAMPLES {
                return Err(Error::InvalidInput(format!(
                    "need at least {MIN_SAMPLES} samples, got {samples}"
                )));
            }
        }
        Ok(())
    }
}

/// Dipole vector to use for an emitter under polarization `e_L`.
pub fn effective_dipole(model: &OrientationModel, e_l: &CVec3) -> Result<CVec3> {
    let norm = cnorm(e_l);
    if (norm - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::UnnormalizedPolarization { norm });
    }
    model.validate()?;
    Ok(match *model {
        OrientationModel::Fixed { d } => CVec3::new(
            C64::new(d[0][0], d[0][1]),
            C64::new(d[1][0], d[1][1]),
            C64::new(d[2][0], d[2][1]),
        ),
        OrientationModel::IsotropicAtom { d_mag } => e_l * C64::new(d_mag, 0.0),
        OrientationModel::RandomMolecule { d_mag, .. } => e_l * C64::new(d_mag / 3.0, 0.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

fn unit_vector(rng: &mut ChaCha8Rng) -> Vec3 {
    let cos_theta: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..2.0 * PI);
    let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
    Vec3::new(sin_theta * phi.cos(), sin_theta * phi.sin(), cos_theta)
}

/// Monte-Carlo estimate of `⟨(d₁·e_k)(d₂·e_k)(d₁·e_L)(d₂·e_L)⟩` over
/// independent isotropic orientations of `d₁` and `d₂`.
pub fn isotropic_average_oracle(
    d_mag: f64,
    e_l: &Vec3,
    e_k: &Vec3,
    samples: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidInput(format!(
            "need at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    for v in [e_l, e_k] {
        let norm = v.norm();
        if (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::UnnormalizedPolarization { norm });
        }
    }
    let d4 = d_mag.powi(4);
    let partials: Vec<(f64, f64)> = (0..SHARDS)
        .into_par_iter()
        .map(|shard| {
            let count = samples / SHARDS + u64::from(shard < samples % SHARDS);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let (mut sum, mut sum_sq) = (0.0, 0.0);
            for _ in 0..count {
                let d1 = unit_vector(&mut rng);
                let d2 = unit_vector(&mut rng);
                let x = d4 * d1.dot(e_k) * d2.dot(e_k) * d1.dot(e_l) * d2.dot(e_l);
                sum += x;
                sum_sq += x * x;
            }
            (sum, sum_sq)
        })
        .collect();
    let (sum, sum_sq) = partials.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
    let n = samples as f64;
    let mean = sum / n;
    let variance = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(MonteCarloEstimate {
        mean,
        std_error: (variance / n).sqrt(),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::to_complex;

    fn z() -> CVec3 {
        to_complex(&Vec3::new(0.0, 0.0, 1.0))
    }

    #[test]
    fn effective_dipole_rules() {
        let atom = effective_dipole(&OrientationModel::IsotropicAtom { d_mag: 2.0 }, &z()).unwrap();
        assert_eq!(atom, to_complex(&Vec3::new(0.0, 0.0, 2.0)));
        let mol = OrientationModel::RandomMolecule {
            d_mag: 3.0,
            samples: 1000,
            seed: 1,
        };
        let m = effective_dipole(&mol, &z()).unwrap();
        assert!((cnorm(&m) - 1.0).abs() < 1e-15);
        let fixed = OrientationModel::fixed(to_complex(&Vec3::new(1.0, 0.0, 0.0)));
        let e = to_complex(&Vec3::new(0.6, 0.8, 0.0));
        assert_eq!(
            effective_dipole(&fixed, &e).unwrap(),
            to_complex(&Vec3::new(1.0, 0.0, 0.0))
        );
    }

    #[test]
    fn molecule_is_one_third_of_atom() {
        let s = 0.5f64.sqrt();
        let circular = CVec3::new(C64::new(s, 0.0), C64::new(0.0, s), C64::new(0.0, 0.0));
        let atom = effective_dipole(&OrientationModel::IsotropicAtom { d_mag: 1.7 }, &circular).unwrap();
        let mol = OrientationModel::RandomMolecule {
            d_mag: 1.7,
            samples: 5000,
            seed: 0,
        };
        let m = effective_dipole(&mol, &circular).unwrap();
        for k in 0..3 {
            assert_eq!(m[k], circular[k] * C64::new(1.7 / 3.0, 0.0));
            assert!((m[k] - atom[k] / 3.0).norm() < 1e-16);
        }
    }

    #[test]
    fn rejects_unnormalized_polarization() {
        let e = to_complex(&Vec3::new(0.0, 0.0, 1.1));
        assert!(matches!(
            effective_dipole(&OrientationModel::IsotropicAtom { d_mag: 1.0 }, &e),
            Err(Error::UnnormalizedPolarization { .. })
        ));
    }

    #[test]
    fn oracle_is_deterministic_and_unbiased() {
        let e = Vec3::new(0.0, 0.0, 1.0);
        let a = isotropic_average_oracle(1.0, &e, &e, 200_000, 7).unwrap();
        let b = isotropic_average_oracle(1.0, &e, &e, 200_000, 7).unwrap();
        assert_eq!(a, b);
        assert!((a.mean - 1.0 / 9.0).abs() < 3.0 * a.std_error, "{a:?}");
        let c = isotropic_average_oracle(1.0, &e, &e, 200_000, 8).unwrap();
        assert!((a.mean - c.mean).abs() < 6.0 * a.std_error.hypot(c.std_error));
    }

    #[test]
    fn oracle_vanishes_for_orthogonal_vectors() {
        let e_l = Vec3::new(0.0, 0.0, 1.0);
        let e_k = Vec3::new(1.0, 0.0, 0.0);
        let est = isotropic_average_oracle(1.0, &e_l, &e_k, 100_000, 3).unwrap();
        assert!(est.mean.abs() < 3.0 * est.std_error);
    }
}
