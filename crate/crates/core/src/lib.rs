//! Laser-induced dipole-dipole interactions (LIDDI) between two driven
//! two-level dipoles.
//!
//! The potential and the photon-scattering rate of a laser-illuminated pair
//! are obtained from the resonant dipole-dipole interaction (RDDI) between
//! the *dressed* atoms: each atom's raising operator splits into three dressed
//! spin operators oscillating at `ω_L` and the Mollow sidebands `ω_L ± Ω̄`,
//! and the reservoir couples to each of them through its two-point spectrum
//! sampled at that frequency.
//!
//! Units are natural throughout: `ħ = ε₀ = c = 1`, so wavenumbers equal
//! angular frequencies and energies are reported as angular frequencies.
//!
//! Module map:
//! - [`dressing`]: dressed frame, dressed states and single-atom oracles.
//! - [`spectra`]: reservoir spectra, principal-value shifts, cavity mode sums,
//!   the coupling table and Markov diagnostics.
//! - [`validation`]: the oracle battery run by `liddi validate`.
//! - [`liouvillian`]: two-atom dressed-basis generator, time evolution and
//!   steady state.
//! - [`observables`]: potential and scattering-rate breakdowns plus the
//!   closed-form limits.
//! - [`orientation`]: effective dipole vectors from polarization and
//!   orientation statistics.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dressing;
mod error;
pub mod linalg;
pub mod liouvillian;
pub mod observables;
pub mod orientation;
pub mod quadrature;
pub mod spectra;
pub mod validation;

pub use error::{Error, Result};

pub use dressing::{AtomParams, DressedFrame, DressedStates, LaserDrive, Sideband, SidebandWeights};
pub use liouvillian::{GeneratorMatrix, TwoAtomState};
pub use observables::{PotentialBreakdown, RateBreakdown};
pub use orientation::OrientationModel;
pub use spectra::{CouplingTable, MarkovReport, ReservoirSpectrum};
