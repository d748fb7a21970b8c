//! Task dispatch, parallel sweeps and output files.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use liddi::validation::{validate_suite, CheckResult, Mutation, SuiteOptions};
use liddi::MarkovReport;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig, Task};
use crate::error::CliError;
use crate::model::Scenario;
use crate::{sweep, tasks};

/// Bound on the generator trace residual checked by the precondition entry.
const PRECONDITION_TRACE: f64 = 1e-10;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub task: Option<Task>,
    /// Taken relative to the working directory.
    pub out: Option<PathBuf>,
    /// Test fixture for the validation suite; not exposed on the command line.
    pub mutation: Option<Mutation>,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub output: PathBuf,
    pub meta: PathBuf,
    /// Points that produced an error row.
    pub failed_points: usize,
    /// `Some(false)` when a validation check failed.
    pub validation_passed: Option<bool>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.validation_passed == Some(false) {
            2
        } else {
            0
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct PointMeta {
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    markov: Option<MarkovReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

struct Point {
    label: Option<f64>,
    rows: Vec<Vec<f64>>,
    meta: PointMeta,
}

fn evaluate_point(config: &RunConfig, task: Task, base_dir: &Path, label: Option<f64>) -> Point {
    let result = (|| -> Result<(Vec<Vec<f64>>, MarkovReport), String> {
        let swept = match (&config.sweep, label) {
            (Some(s), Some(x)) => {
                let c = sweep::apply(config, &s.parameter, x).map_err(|e| e.to_string())?;
                c.validate().map_err(|e| e.to_string())?;
                c
            }
            _ => config.clone(),
        };
        let scenario = Scenario::build(&swept, base_dir).map_err(|e| e.to_string())?;
        let markov = scenario.markov(swept.numerics.coarse_time);
        let rows = tasks::evaluate(task, &scenario, &swept.numerics).map_err(|e| e.to_string())?;
        Ok((rows, markov))
    })();
    match result {
        Ok((rows, markov)) => Point {
            label,
            rows,
            meta: PointMeta {
                label,
                markov: Some(markov),
                error: None,
            },
        },
        Err(e) => Point {
            label,
            rows: Vec::new(),
            meta: PointMeta {
                label,
                markov: None,
                error: Some(e),
            },
        },
    }
}

/// Caps parallelism at `LIDDI_THREADS` when set.
fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match std::env::var("LIDDI_THREADS") {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| CliError::Threads(format!("expected a positive integer, got `{v}`")))?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Threads(e.to_string()))?;
            Ok(pool.install(f))
        }
        Err(_) => Ok(f()),
    }
}

/// Number formatting shared by CSV and the validation table: 17 significant digits.
fn number(x: f64) -> String {
    format!("{x:.16e}")
}

fn output_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Output {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn meta_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_os_string();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn resolve_output(config: &RunConfig, config_path: &Path, options: &RunOptions) -> PathBuf {
    if let Some(out) = &options.out {
        return out.clone();
    }
    let base_dir = config_path.parent().unwrap_or(Path::new(""));
    match &config.output.path {
        Some(p) => base_dir.join(p),
        None => config_path.with_extension(config.output.format.extension()),
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    let mut f = File::create(path).map_err(|e| output_error(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| output_error(path, e))
}

fn write_json(path: &Path, value: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| output_error(path, e))?;
    text.push('\n');
    write_text(path, &text)
}

fn write_csv(path: &Path, header: &[String], records: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| output_error(path, e))?;
    w.write_record(header).map_err(|e| output_error(path, e))?;
    for r in records {
        w.write_record(r).map_err(|e| output_error(path, e))?;
    }
    w.flush().map_err(|e| output_error(path, e))
}

fn json_number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// Loads `config_path`, runs its task and writes the output and sidecar files.
pub fn run(config_path: &Path, options: &RunOptions) -> Result<Outcome, CliError> {
    let mut config = RunConfig::load(config_path)?;
    if let Some(task) = options.task {
        config.task = task;
        config.validate()?;
    }
    let base_dir = config_path.parent().unwrap_or(Path::new("")).to_path_buf();
    let output = resolve_output(&config, config_path, options);
    let meta = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "task": config.task.name(),
        "config": config,
    });
    if config.task == Task::Validate {
        return run_validation(&config, &base_dir, output, meta, options.mutation);
    }

    let task = config.task;
    let labels: Vec<Option<f64>> = match &config.sweep {
        Some(s) => sweep::points(s).into_iter().map(Some).collect(),
        None => vec![None],
    };
    let points: Vec<Point> = with_pool(|| {
        labels
            .par_iter()
            .map(|&label| evaluate_point(&config, task, &base_dir, label))
            .collect()
    })?;

    let label_name = config.sweep.as_ref().map(|s| s.parameter.clone());
    let columns = tasks::columns(task);
    let failed_points = points.iter().filter(|p| p.meta.error.is_some()).count();
    let mut meta = meta;
    meta["points"] =
        serde_json::to_value(points.iter().map(|p| &p.meta).collect::<Vec<_>>()).expect("point metadata serializes");

    match config.output.format {
        Format::Csv => {
            let mut header: Vec<String> = label_name.iter().cloned().collect();
            header.extend(columns.iter().cloned());
            header.push("error".into());
            let mut records = Vec::new();
            for p in &points {
                let label: Vec<String> = p.label.map(number).into_iter().collect();
                if let Some(e) = &p.meta.error {
                    let mut r = label.clone();
                    r.extend(std::iter::repeat_n(String::new(), columns.len()));
                    r.push(e.clone());
                    records.push(r);
                }
                for row in &p.rows {
                    let mut r = label.clone();
                    r.extend(row.iter().copied().map(number));
                    r.push(String::new());
                    records.push(r);
                }
            }
            write_csv(&output, &header, &records)?;
        }
        Format::Json => {
            let mut rows = Vec::new();
            for p in &points {
                let base = |error: Option<&String>| {
                    let mut obj = Map::new();
                    if let (Some(name), Some(x)) = (&label_name, p.label) {
                        obj.insert(name.clone(), json_number(x));
                    }
                    obj.insert("error".into(), error.map_or(Value::Null, |e| Value::String(e.clone())));
                    obj
                };
                if let Some(e) = &p.meta.error {
                    rows.push(Value::Object(base(Some(e))));
                }
                for row in &p.rows {
                    let mut obj = base(None);
                    for (name, x) in columns.iter().zip(row) {
                        obj.insert(name.clone(), json_number(*x));
                    }
                    rows.push(Value::Object(obj));
                }
            }
            write_json(&output, &json!({ "meta": meta, "rows": rows }))?;
        }
    }
    let meta_file = meta_path(&output);
    write_json(&meta_file, &meta)?;
    Ok(Outcome {
        output,
        meta: meta_file,
        failed_points,
        validation_passed: None,
    })
}

/// Entry 0 of the validation table: the configured system must assemble into
/// a physical, trace-preserving generator.
fn preconditions(config: &RunConfig, base_dir: &Path) -> (CheckResult, Option<MarkovReport>) {
    const NAME: &str = "config preconditions";
    let scenario = match Scenario::build(config, base_dir) {
        Ok(s) => s,
        Err(e) => return (CheckResult::failed(0, NAME, e.to_string()), None),
    };
    let markov = scenario.markov(config.numerics.coarse_time);
    match scenario.generator() {
        Ok(gen) => {
            let mut check = CheckResult::new(0, NAME);
            check.measure(
                "generator trace residual",
                gen.trace_residual(),
                liddi::validation::Bound::Below(PRECONDITION_TRACE),
            );
            (check, Some(markov))
        }
        Err(e) => (CheckResult::failed(0, NAME, e.to_string()), Some(markov)),
    }
}

fn run_validation(
    config: &RunConfig,
    base_dir: &Path,
    output: PathBuf,
    mut meta: Value,
    mutation: Option<Mutation>,
) -> Result<Outcome, CliError> {
    let (first, markov) = preconditions(config, base_dir);
    let suite = with_pool(|| validate_suite(&SuiteOptions { mutation }))?;
    let mut checks = vec![first];
    checks.extend(suite.checks);
    let passed = checks.iter().all(|c| c.passed);
    for c in &checks {
        println!("{}", c.summary());
    }
    println!(
        "{}",
        if passed {
            "all checks passed"
        } else {
            "validation FAILED"
        }
    );

    meta["points"] = json!([PointMeta {
        label: None,
        markov,
        error: checks[0].error.clone(),
    }]);
    match config.output.format {
        Format::Csv => {
            let header: Vec<String> = ["id", "name", "passed", "measurement", "value", "bound", "error"]
                .map(String::from)
                .to_vec();
            let mut records = Vec::new();
            for c in &checks {
                let error = c.error.clone().unwrap_or_default();
                if c.measurements.is_empty() {
                    records.push(vec![
                        c.id.to_string(),
                        c.name.clone(),
                        c.passed.to_string(),
                        String::new(),
                        String::new(),
                        String::new(),
                        error.clone(),
                    ]);
                }
                for m in &c.measurements {
                    records.push(vec![
                        c.id.to_string(),
                        c.name.clone(),
                        m.passed.to_string(),
                        m.label.clone(),
                        number(m.value),
                        m.bound.to_string(),
                        error.clone(),
                    ]);
                }
            }
            write_csv(&output, &header, &records)?;
        }
        Format::Json => write_json(&output, &json!({ "meta": meta, "rows": checks }))?,
    }
    let meta_file = meta_path(&output);
    write_json(&meta_file, &meta)?;
    Ok(Outcome {
        output,
        meta: meta_file,
        failed_points: 0,
        validation_passed: Some(passed),
    })
}
