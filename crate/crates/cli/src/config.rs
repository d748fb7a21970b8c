//! TOML run configuration.
//!
//! Every section maps onto a serde struct with unknown keys rejected, so a
//! typo is reported with its line instead of being silently ignored.

use std::path::{Path, PathBuf};

use liddi::OrientationModel;
use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Potential,
    Steady,
    Evolve,
    Scatter,
    Rddi,
    Validate,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Potential => "potential",
            Task::Steady => "steady",
            Task::Evolve => "evolve",
            Task::Scatter => "scatter",
            Task::Rddi => "rddi",
            Task::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub task: Task,
    pub laser: LaserConfig,
    pub atoms: Vec<AtomConfig>,
    pub spectrum: SpectrumConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaserConfig {
    pub omega_l: f64,
    pub rabi_abs: f64,
    #[serde(default)]
    pub rabi_phase: f64,
    pub k_direction: [f64; 3],
    /// Real part of the unit polarization vector.
    pub polarization: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarization_im: Option<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomConfig {
    pub omega_e: f64,
    /// Fixed real dipole vector; exclusive with `orientation`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dipole: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<OrientationModel>,
    pub position: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpectrumConfig {
    FreeSpace,
    Cavity {
        length: f64,
        area: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        regulator: Option<f64>,
        /// Adds the free-space rate of atom 1's dipole as `Γ₁₁`.
        #[serde(default)]
        free_space_sidecar: bool,
    },
    Lorentzian {
        weight: f64,
        omega0: f64,
        gamma: f64,
    },
    Tabulated {
        /// CSV `omega,g11,g22,g12_re,g12_im`, relative to the config file.
        path: PathBuf,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tau_c: Option<f64>,
    },
    /// Coupling constants given directly, ordered `(+, z, −)`.
    Couplings {
        delta: [f64; 3],
        gamma: [f64; 3],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gamma_cross: Option<[f64; 3]>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Dotted path into this config (`laser.rabi_abs`, `atoms.1.position.2`)
    /// or one of the aliases `r12`, `z1`, `z2`.
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
    /// Separation direction for `r12`; defaults to the laser direction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<[f64; 3]>,
}

/// Which two-atom state the observables are evaluated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateChoice {
    #[default]
    Steady,
    /// Ground pair, conserved without dissipation.
    Transient,
    /// Lowest-order expansion in `Ω/δ`; potential task only.
    LargeDetuning,
    /// Integrated from `initial` up to `t_final`.
    Evolved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    #[default]
    Ground,
    Mixed,
    /// Pair basis states `|++⟩, |+−⟩, |−+⟩, |−−⟩`.
    Pp,
    Pm,
    Mp,
    Mm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Numerics {
    #[serde(default = "default_pv_tolerance")]
    pub pv_tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cavity_cutoff: Option<u64>,
    /// Defaults to the stability bound of the generator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default = "default_t_final")]
    pub t_final: f64,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    /// Coarse-graining time for the Markov diagnostics.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coarse_time: Option<f64>,
    /// Self shifts `(+, z, −)` for free space and cavity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub self_shift: Option<[f64; 3]>,
    #[serde(default)]
    pub state: StateChoice,
    #[serde(default)]
    pub initial: InitialState,
}

fn default_pv_tolerance() -> f64 {
    1e-8
}

fn default_t_final() -> f64 {
    10.0
}

fn default_record_every() -> usize {
    1
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            pv_tolerance: default_pv_tolerance(),
            cavity_cutoff: None,
            dt: None,
            t_final: default_t_final(),
            record_every: default_record_every(),
            coarse_time: None,
            self_shift: None,
            state: StateChoice::default(),
            initial: InitialState::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Relative to the config file; defaults to the config path with the format's extension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

/// 1-based line and column of a byte offset.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |p| p + 1) + 1;
    (line, col)
}

impl RunConfig {
    /// Parses and validates a config document.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let config: RunConfig = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
            ConfigError::Parse {
                line,
                column,
                message: e.message().to_string(),
            }
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    /// Structural checks that do not need any physics.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |field: &str, message: String| {
            Err(ConfigError::Invalid {
                field: field.to_string(),
                message,
            })
        };
        let l = &self.laser;
        if !(l.omega_l > 0.0 && l.omega_l.is_finite()) {
            return bad("laser.omega_l", format!("must be positive, got {}", l.omega_l));
        }
        if !(l.rabi_abs >= 0.0 && l.rabi_abs.is_finite()) {
            return bad("laser.rabi_abs", format!("must be non-negative, got {}", l.rabi_abs));
        }
        if self.atoms.len() != 2 {
            return bad(
                "atoms",
                format!("exactly two atoms are required, got {}", self.atoms.len()),
            );
        }
        for (k, atom) in self.atoms.iter().enumerate() {
            if atom.dipole.is_some() == atom.orientation.is_some() {
                return bad(
                    &format!("atoms.{k}"),
                    "give exactly one of `dipole` and `orientation`".into(),
                );
            }
            if !(atom.omega_e > 0.0 && atom.omega_e.is_finite()) {
                return bad(
                    &format!("atoms.{k}.omega_e"),
                    format!("must be positive, got {}", atom.omega_e),
                );
            }
        }
        if self.atoms[0].omega_e != self.atoms[1].omega_e {
            return bad(
                "atoms.1.omega_e",
                "both atoms must share the transition frequency".into(),
            );
        }
        let n = &self.numerics;
        if !(n.pv_tolerance > 0.0 && n.pv_tolerance < 1.0) {
            return bad(
                "numerics.pv_tolerance",
                format!("must lie in (0, 1), got {}", n.pv_tolerance),
            );
        }
        if n.cavity_cutoff == Some(0) {
            return bad("numerics.cavity_cutoff", "must be positive".into());
        }
        if let Some(dt) = n.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return bad("numerics.dt", format!("must be positive, got {dt}"));
            }
        }
        if !(n.t_final >= 0.0 && n.t_final.is_finite()) {
            return bad("numerics.t_final", format!("must be non-negative, got {}", n.t_final));
        }
        if n.record_every == 0 {
            return bad("numerics.record_every", "must be at least 1".into());
        }
        if let Some(t) = n.coarse_time {
            if !(t > 0.0 && t.is_finite()) {
                return bad("numerics.coarse_time", format!("must be positive, got {t}"));
            }
        }
        if n.state == StateChoice::LargeDetuning && self.task != Task::Potential {
            return bad(
                "numerics.state",
                "large_detuning only applies to the potential task".into(),
            );
        }
        if let Some(s) = &self.sweep {
            if s.count == 0 {
                return bad("sweep.count", "must be at least 1".into());
            }
            if !s.start.is_finite() || !s.stop.is_finite() {
                return bad("sweep.start", "sweep bounds must be finite".into());
            }
            if s.spacing == Spacing::Log && !(s.start > 0.0 && s.stop > 0.0) {
                return bad("sweep.spacing", "log spacing needs positive start and stop".into());
            }
            crate::sweep::check_parameter(self, &s.parameter)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
task = "potential"

[laser]
omega_l = 20.0
rabi_abs = 0.5
k_direction = [0.0, 0.0, 1.0]
polarization = [1.0, 0.0, 0.0]

[[atoms]]
omega_e = 19.0
dipole = [1.0, 0.0, 0.0]
position = [0.0, 0.0, 0.0]

[[atoms]]
omega_e = 19.0
orientation = { kind = "isotropic_atom", d_mag = 1.0 }
position = [0.0, 0.0, 0.3]

[spectrum]
kind = "lorentzian"
weight = 1.0
omega0 = 18.0
gamma = 0.5
"#;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let c = RunConfig::parse(MINIMAL).unwrap();
        assert_eq!(c.task, Task::Potential);
        assert_eq!(c.numerics, Numerics::default());
        assert_eq!(c.output.format, Format::Csv);
        assert!(matches!(
            c.atoms[1].orientation,
            Some(OrientationModel::IsotropicAtom { .. })
        ));
    }

    #[test]
    fn round_trip_is_idempotent() {
        let c = RunConfig::parse(MINIMAL).unwrap();
        let once = c.to_toml();
        let again = RunConfig::parse(&once).unwrap();
        assert_eq!(again, c);
        assert_eq!(again.to_toml(), once);
    }

    #[test]
    fn unknown_key_reports_its_line() {
        let text = MINIMAL.replace("rabi_abs = 0.5", "rabi_abs = 0.5\nrabbi = 1.0");
        match RunConfig::parse(&text) {
            Err(ConfigError::Parse { line, message, .. }) => {
                assert_eq!(line, 7);
                assert!(message.contains("rabbi"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn semantic_errors_name_the_field() {
        let text = MINIMAL.replace("omega_e = 19.0\norientation", "omega_e = 19.5\norientation");
        match RunConfig::parse(&text) {
            Err(ConfigError::Invalid { field, .. }) => assert_eq!(field, "atoms.1.omega_e"),
            other => panic!("unexpected {other:?}"),
        }
        let text = MINIMAL.replace("dipole = [1.0, 0.0, 0.0]\n", "");
        assert!(matches!(RunConfig::parse(&text), Err(ConfigError::Invalid { field, .. }) if field == "atoms.0"));
    }

    #[test]
    fn line_col_counts_from_one() {
        assert_eq!(line_col("ab\ncd", 0), (1, 1));
        assert_eq!(line_col("ab\ncd", 4), (2, 2));
    }
}
