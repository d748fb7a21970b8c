//! Physics objects built from one (already swept) config.

use std::path::Path;

use liddi::dressing::dressed_frame;
use liddi::linalg::{CVec3, Vec3, C64};
use liddi::liouvillian::{build_liouvillian, GeneratorMatrix};
use liddi::orientation::effective_dipole;
use liddi::quadrature::Tolerance;
use liddi::spectra::{coupling_table, IdealCavity, Lorentzian, TableOptions, TabulatedSpectrum};
use liddi::{AtomParams, CouplingTable, DressedFrame, LaserDrive, MarkovReport, OrientationModel, ReservoirSpectrum};

use crate::config::{AtomConfig, RunConfig, SpectrumConfig};

pub struct Scenario {
    pub frame: DressedFrame,
    pub table: CouplingTable,
    pub r12: Vec3,
    /// `None` for couplings given directly.
    pub spectrum: Option<ReservoirSpectrum>,
}

fn cvec(re: [f64; 3], im: [f64; 3]) -> CVec3 {
    CVec3::new(C64::new(re[0], im[0]), C64::new(re[1], im[1]), C64::new(re[2], im[2]))
}

fn dipole(atom: &AtomConfig, e_l: &CVec3) -> liddi::Result<CVec3> {
    let model = match (&atom.dipole, &atom.orientation) {
        (Some(d), _) => OrientationModel::fixed(cvec(*d, [0.0; 3])),
        (None, Some(m)) => m.clone(),
        (None, None) => {
            return Err(liddi::Error::InvalidInput(
                "atom has neither dipole nor orientation".into(),
            ))
        }
    };
    effective_dipole(&model, e_l)
}

impl Scenario {
    /// `base_dir` resolves relative tabulated-spectrum paths.
    pub fn build(config: &RunConfig, base_dir: &Path) -> liddi::Result<Self> {
        let l = &config.laser;
        let polarization = cvec(l.polarization, l.polarization_im.unwrap_or([0.0; 3]));
        let laser = LaserDrive::new(
            l.omega_l,
            Vec3::from(l.k_direction),
            polarization,
            C64::from_polar(l.rabi_abs, l.rabi_phase),
        )?;
        let dipoles = [
            dipole(&config.atoms[0], &polarization)?,
            dipole(&config.atoms[1], &polarization)?,
        ];
        let sites = [
            Vec3::from(config.atoms[0].position),
            Vec3::from(config.atoms[1].position),
        ];
        let atom = AtomParams::new(config.atoms[0].omega_e, dipoles[0], sites[0])?;
        let frame = dressed_frame(&laser, &atom)?;
        let r12 = sites[0] - sites[1];
        let n = &config.numerics;
        let options = TableOptions {
            pv: Tolerance::relative(n.pv_tolerance),
            self_shift: n.self_shift,
        };
        let spectrum = match &config.spectrum {
            SpectrumConfig::FreeSpace => Some(ReservoirSpectrum::FreeSpace { dipole: dipoles[0] }),
            SpectrumConfig::Cavity {
                length,
                area,
                regulator,
                free_space_sidecar,
            } => {
                let mut cav = IdealCavity::new(*length, *area, IdealCavity::transverse_strength(&dipoles[0]))?;
                cav.regulator = *regulator;
                cav.mode_cutoff = n.cavity_cutoff;
                if *free_space_sidecar {
                    cav.free_space_dipole = Some(dipoles[0]);
                }
                Some(ReservoirSpectrum::IdealCavity(cav))
            }
            SpectrumConfig::Lorentzian { weight, omega0, gamma } => Some(ReservoirSpectrum::Lorentzian(Lorentzian {
                weight: *weight,
                omega0: *omega0,
                gamma: *gamma,
            })),
            SpectrumConfig::Tabulated { path, tau_c } => {
                let mut t = TabulatedSpectrum::from_csv(&base_dir.join(path))?;
                if let Some(tau) = tau_c {
                    t = t.with_tau_c(*tau)?;
                }
                Some(ReservoirSpectrum::Tabulated(t))
            }
            SpectrumConfig::Couplings { .. } => None,
        };
        let table = match (&spectrum, &config.spectrum) {
            (Some(spec), _) => coupling_table(spec, &frame, &sites, &options)?,
            (
                None,
                SpectrumConfig::Couplings {
                    delta,
                    gamma,
                    gamma_cross,
                },
            ) => {
                let cross = gamma_cross.unwrap_or([0.0; 3]);
                let mut table = CouplingTable::independent(*delta, *gamma)?;
                for (g, x) in table.gamma.iter_mut().zip(cross) {
                    g[0][1] = C64::new(x, 0.0);
                    g[1][0] = C64::new(x, 0.0);
                }
                table
            }
            (None, _) => unreachable!("only direct couplings have no spectrum"),
        };
        Ok(Self {
            frame,
            table,
            r12,
            spectrum,
        })
    }

    pub fn generator(&self) -> liddi::Result<GeneratorMatrix> {
        build_liouvillian(&self.table, &self.frame, &self.r12)
    }

    /// Fast scale `max(τ_c, 1/Ω̄)`.
    fn fast_time(&self) -> f64 {
        self.tau_c().max(1.0 / self.frame.omega_bar)
    }

    fn tau_c(&self) -> f64 {
        self.spectrum.as_ref().map_or(0.0, |s| s.tau_c(&self.frame))
    }

    /// Diagnostics at `coarse_time`, by default the geometric mean of the
    /// fast scale and the inverse largest rate.
    pub fn markov(&self, coarse_time: Option<f64>) -> MarkovReport {
        let max_rate = self.table.max_rate();
        let t = coarse_time.unwrap_or_else(|| {
            if max_rate > 0.0 {
                (self.fast_time() / max_rate).sqrt()
            } else {
                100.0 * self.fast_time()
            }
        });
        MarkovReport::evaluate(t, self.tau_c(), self.frame.omega_bar, max_rate)
    }
}
