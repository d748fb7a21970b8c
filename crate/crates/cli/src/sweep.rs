//! Sweep grids and their application to a config.
//!
//! A sweep value is written into the TOML tree of the base config at a dotted
//! path and the tree is deserialized again, so every numeric field is
//! sweepable without a dedicated setter.

use toml::Value;

use crate::config::{RunConfig, Spacing, SweepConfig};
use crate::error::ConfigError;

/// Sweep grid, endpoints included.
pub fn points(sweep: &SweepConfig) -> Vec<f64> {
    let n = sweep.count;
    if n == 1 {
        return vec![sweep.start];
    }
    let last = (n - 1) as f64;
    (0..n)
        .map(|k| {
            if k == n - 1 {
                return sweep.stop;
            }
            let t = k as f64 / last;
            match sweep.spacing {
                Spacing::Linear => sweep.start + (sweep.stop - sweep.start) * t,
                Spacing::Log => sweep.start * (sweep.stop / sweep.start).powf(t),
            }
        })
        .collect()
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.to_string(),
        message: message.into(),
    }
}

fn unit(v: [f64; 3], field: &str) -> Result<[f64; 3], ConfigError> {
    let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(len > 0.0) || !len.is_finite() {
        return Err(invalid(field, "direction must be a nonzero finite vector"));
    }
    Ok(v.map(|x| x / len))
}

/// Rejects paths that do not name a numeric field of `config`.
pub fn check_parameter(config: &RunConfig, parameter: &str) -> Result<(), ConfigError> {
    apply(config, parameter, 1.0).map(|_| ())
}

/// `config` with `parameter` set to `value`.
///
/// `r12` places atom 2 at `r₁ − value·n̂` so that `r₁₂ = r₁ − r₂ = value·n̂`;
/// `z1` and `z2` are the atoms' `z` coordinates.
pub fn apply(config: &RunConfig, parameter: &str, value: f64) -> Result<RunConfig, ConfigError> {
    let mut config = config.clone();
    match parameter {
        "r12" => {
            let dir = config
                .sweep
                .as_ref()
                .and_then(|s| s.direction)
                .unwrap_or(config.laser.k_direction);
            let n = unit(dir, "sweep.direction")?;
            let r1 = config.atoms[0].position;
            config.atoms[1].position = [0, 1, 2].map(|k| r1[k] - value * n[k]);
            Ok(config)
        }
        "z1" => {
            config.atoms[0].position[2] = value;
            Ok(config)
        }
        "z2" => {
            config.atoms[1].position[2] = value;
            Ok(config)
        }
        path => {
            let mut tree = Value::try_from(&config).map_err(|e| invalid(path, e.to_string()))?;
            set_path(&mut tree, path, value)?;
            let out: RunConfig = tree
                .try_into()
                .map_err(|e: toml::de::Error| invalid(path, e.message().to_string()))?;
            Ok(out)
        }
    }
}

fn set_path(tree: &mut Value, path: &str, value: f64) -> Result<(), ConfigError> {
    let segments: Vec<&str> = path.split('.').collect();
    if segments.iter().any(|s| s.is_empty()) || segments[0] == "sweep" {
        return Err(invalid("sweep.parameter", format!("`{path}` is not a sweepable path")));
    }
    let (last, parents) = segments.split_last().expect("split yields at least one segment");
    let mut node = tree;
    for seg in parents {
        node = child(node, seg).ok_or_else(|| invalid("sweep.parameter", format!("`{path}`: no field `{seg}`")))?;
    }
    let slot = match node {
        Value::Table(t) => {
            // Optional fields left out of the config are created on demand;
            // integral values also deserialize into float fields.
            t.entry(last.to_string()).or_insert_with(|| {
                if value.fract() == 0.0 && value.abs() < 9.0e15 {
                    Value::Integer(value as i64)
                } else {
                    Value::Float(value)
                }
            })
        }
        other => {
            child(other, last).ok_or_else(|| invalid("sweep.parameter", format!("`{path}`: no field `{last}`")))?
        }
    };
    *slot = match slot {
        Value::Float(_) => Value::Float(value),
        Value::Integer(_) if value.fract() == 0.0 && value.abs() < 9.0e15 => Value::Integer(value as i64),
        Value::Integer(_) => {
            return Err(invalid(
                "sweep.parameter",
                format!("`{path}` is an integer field, {value} is not integral"),
            ))
        }
        _ => return Err(invalid("sweep.parameter", format!("`{path}` is not a numeric field"))),
    };
    Ok(())
}

fn child<'a>(node: &'a mut Value, seg: &str) -> Option<&'a mut Value> {
    match node {
        Value::Table(t) => t.get_mut(seg),
        Value::Array(a) => seg.parse::<usize>().ok().and_then(|i| a.get_mut(i)),
        _ => None,
    }
}
