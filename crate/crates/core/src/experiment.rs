//! Configuration-driven sweeps and table export.
//!
//! A config is a flat JSON object. Unknown keys are rejected. A tomography
//! config expands into a grid of configuration × ε × σ × N points, each
//! simulated with the master seed so that every grid point sees the same
//! noise draws. A `qfi` config samples the normalization constant of a
//! perturbed real state and tabulates the noiseless and noisy variance bounds.

use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{norm_const_samples, qfi_total_closed_form};
use crate::montecarlo::{run_repetitions, RunSpec, Target};
use crate::pure_protocol::Configuration;
use crate::scalar::cplx;
use crate::state::{make_standard_state, random_real_state, PureState, StandardState};

pub const DEFAULT_REPETITIONS: usize = 50;
pub const DEFAULT_SAMPLES: usize = 100_000;
pub const DEFAULT_BINS: usize = 15;
pub const DEFAULT_HISTOGRAM_RANGE: [f64; 2] = [0.5, 2.0];
pub const DEFAULT_CURVE_POINTS: usize = 151;
/// Largest register simulated by a tomography sweep.
pub const MAX_TOMOGRAPHY_QUBITS: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    #[default]
    Tomography,
    Qfi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StateKind {
    #[serde(rename = "GHZ")]
    Ghz,
    W,
    Dicke,
    Haar,
    #[serde(rename = "random_real")]
    RandomReal,
    #[serde(rename = "custom")]
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Pure,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ConfigurationChoice {
    C1,
    C2,
    #[default]
    #[serde(rename = "both")]
    Both,
}

impl ConfigurationChoice {
    pub fn expand(self) -> Vec<Configuration> {
        match self {
            ConfigurationChoice::C1 => vec![Configuration::C1],
            ConfigurationChoice::C2 => vec![Configuration::C2],
            ConfigurationChoice::Both => vec![Configuration::C1, Configuration::C2],
        }
    }
}

fn default_repetitions() -> usize {
    DEFAULT_REPETITIONS
}

fn is_default<T: Default + PartialEq>(v: &T) -> bool {
    *v == T::default()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "is_default")]
    pub experiment: ExperimentKind,
    pub state: StateKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_qubits: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub excitations: Option<u32>,
    /// `[re, im]` pairs for a `custom` state; normalized on use.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub configuration: ConfigurationChoice,
    /// Pins the preparation σ (pure mode); otherwise it follows the sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_prep: Option<f64>,
    /// Pins the postselection σ; otherwise it follows the sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_post: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_sweep: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_sweep: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub copy_budgets: Option<Vec<u64>>,
    /// Replaces `copy_budgets` when a full-scale run is requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full_scale_copy_budgets: Option<Vec<u64>>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    /// Number of sampled `𝒩` values (`qfi` only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub histogram_range: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve_points: Option<usize>,
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn check_sigma(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(config_err(format!("{name} must be finite and non-negative, got {v}")))
    }
}

fn check_nonempty<T>(name: &str, v: &Option<Vec<T>>) -> Result<()> {
    match v {
        Some(list) if list.is_empty() => Err(config_err(format!("{name} must not be empty"))),
        _ => Ok(()),
    }
}

fn reject(name: &str, present: bool, context: &str) -> Result<()> {
    if present {
        Err(config_err(format!("{name} is not allowed {context}")))
    } else {
        Ok(())
    }
}

/// Strict parse followed by validation.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| config_err(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

/// Swept noise values of one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub configuration: Configuration,
    pub sigma_prep: f64,
    pub sigma_post: f64,
    pub epsilon: f64,
    pub copies: u64,
}

impl ExperimentConfig {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(config_err("repetitions must be at least 1"));
        }
        check_nonempty("sigma_sweep", &self.sigma_sweep)?;
        check_nonempty("epsilon_sweep", &self.epsilon_sweep)?;
        check_nonempty("copy_budgets", &self.copy_budgets)?;
        check_nonempty("full_scale_copy_budgets", &self.full_scale_copy_budgets)?;
        for v in self.sigma_sweep.iter().flatten() {
            check_sigma("sigma_sweep entry", *v)?;
        }
        if let Some(v) = self.sigma_prep {
            check_sigma("sigma_prep", v)?;
        }
        if let Some(v) = self.sigma_post {
            check_sigma("sigma_post", v)?;
        }
        for e in self.epsilon.iter().chain(self.epsilon_sweep.iter().flatten()) {
            if !(0.0..=1.0).contains(e) {
                return Err(config_err(format!("epsilon must lie in [0, 1], got {e}")));
            }
        }
        reject(
            "epsilon together with epsilon_sweep",
            self.epsilon.is_some() && self.epsilon_sweep.is_some(),
            "",
        )?;
        reject(
            "excitations",
            self.excitations.is_some() && self.state != StateKind::Dicke,
            "for this state",
        )?;
        reject(
            "amplitudes",
            self.amplitudes.is_some() && self.state != StateKind::Custom,
            "unless state is custom",
        )?;
        self.build_state()?;
        match self.experiment {
            ExperimentKind::Tomography => self.validate_tomography(),
            ExperimentKind::Qfi => self.validate_qfi(),
        }
    }

    fn validate_tomography(&self) -> Result<()> {
        let ctx = "in a tomography experiment";
        reject("samples", self.samples.is_some(), ctx)?;
        reject("bins", self.bins.is_some(), ctx)?;
        reject("histogram_range", self.histogram_range.is_some(), ctx)?;
        reject("curve_points", self.curve_points.is_some(), ctx)?;
        let budgets = self
            .copy_budgets
            .as_ref()
            .ok_or_else(|| config_err("copy_budgets is required"))?;
        if budgets
            .iter()
            .chain(self.full_scale_copy_budgets.iter().flatten())
            .any(|&n| n == 0)
        {
            return Err(config_err("copy budgets must be positive"));
        }
        if self.state_dim()? > 1 << MAX_TOMOGRAPHY_QUBITS {
            return Err(config_err(format!(
                "tomography is limited to {MAX_TOMOGRAPHY_QUBITS} qubits"
            )));
        }
        match self.mode {
            Mode::Pure => {
                reject("epsilon", self.epsilon.is_some(), "in pure mode")?;
                reject("epsilon_sweep", self.epsilon_sweep.is_some(), "in pure mode")
            }
            Mode::Mixed => reject("sigma_prep", self.sigma_prep.is_some(), "in mixed mode (use epsilon)"),
        }
    }

    fn validate_qfi(&self) -> Result<()> {
        let ctx = "in a qfi experiment";
        reject("copy_budgets", self.copy_budgets.is_some(), ctx)?;
        reject("full_scale_copy_budgets", self.full_scale_copy_budgets.is_some(), ctx)?;
        reject("epsilon", self.epsilon.is_some(), ctx)?;
        reject("epsilon_sweep", self.epsilon_sweep.is_some(), ctx)?;
        reject("sigma_post", self.sigma_post.is_some(), ctx)?;
        reject("sigma_sweep", self.sigma_sweep.is_some(), ctx)?;
        reject("mode mixed", self.mode == Mode::Mixed, ctx)?;
        if self.sigma_prep.is_none() {
            return Err(config_err("sigma_prep is required in a qfi experiment"));
        }
        if self.samples == Some(0) {
            return Err(config_err("samples must be positive"));
        }
        if self.bins == Some(0) {
            return Err(config_err("bins must be positive"));
        }
        if let Some(p) = self.curve_points {
            if p < 2 {
                return Err(config_err("curve_points must be at least 2"));
            }
        }
        if let Some([lo, hi]) = self.histogram_range {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(config_err("histogram_range must be an increasing finite pair"));
            }
        }
        if !self.build_state()?.is_real() {
            return Err(config_err("the qfi experiment needs a real state"));
        }
        Ok(())
    }

    fn state_dim(&self) -> Result<usize> {
        match (self.state, &self.amplitudes) {
            (StateKind::Custom, Some(a)) => Ok(a.len()),
            _ => Ok(1usize << self.num_qubits.ok_or_else(|| config_err("num_qubits is required"))?),
        }
    }

    /// Target state. Random kinds are drawn from the master seed.
    pub fn build_state(&self) -> Result<PureState<f64>> {
        let qubits = || self.num_qubits.ok_or_else(|| config_err("num_qubits is required"));
        let state = match self.state {
            StateKind::Ghz => make_standard_state(StandardState::Ghz, qubits()?, None),
            StateKind::W => make_standard_state(StandardState::W, qubits()?, None),
            StateKind::Dicke => {
                let excitations = self.excitations.ok_or_else(|| config_err("Dicke needs excitations"))?;
                make_standard_state(StandardState::Dicke { excitations }, qubits()?, None)
            }
            StateKind::Haar => make_standard_state(StandardState::Haar, qubits()?, Some(self.seed)),
            StateKind::RandomReal => {
                let n = qubits()?;
                if n == 0 || n > 20 {
                    return Err(config_err(format!("num_qubits {n} outside 1..=20")));
                }
                random_real_state(1usize << n, &mut ChaCha8Rng::seed_from_u64(self.seed))
            }
            StateKind::Custom => {
                let amps = self
                    .amplitudes
                    .as_ref()
                    .ok_or_else(|| config_err("custom state needs amplitudes"))?;
                if let Some(n) = self.num_qubits {
                    if 1usize.checked_shl(n) != Some(amps.len()) {
                        return Err(config_err(format!("{} amplitudes do not match {n} qubits", amps.len())));
                    }
                }
                PureState::normalized(amps.iter().map(|&[re, im]| cplx(re, im)).collect())
            }
        };
        state.map_err(|e| config_err(e.to_string()))
    }

    pub fn sigma_values(&self) -> Vec<f64> {
        self.sigma_sweep.clone().unwrap_or_else(|| vec![0.0])
    }

    pub fn epsilon_values(&self) -> Vec<f64> {
        match (&self.epsilon_sweep, self.epsilon) {
            (Some(sweep), _) => sweep.clone(),
            (None, Some(e)) => vec![e],
            (None, None) => vec![0.0],
        }
    }

    pub fn budgets(&self, full_scale: bool) -> Vec<u64> {
        let desk = self.copy_budgets.clone().unwrap_or_default();
        if full_scale {
            self.full_scale_copy_budgets.clone().unwrap_or(desk)
        } else {
            desk
        }
    }

    /// Grid points in output order: configuration, ε, σ, N.
    pub fn grid(&self, full_scale: bool) -> Vec<GridPoint> {
        let mut out = Vec::new();
        for configuration in self.configuration.expand() {
            for &epsilon in &self.epsilon_values() {
                for &s in &self.sigma_values() {
                    let sigma_prep = match self.mode {
                        Mode::Pure => self.sigma_prep.unwrap_or(s),
                        Mode::Mixed => 0.0,
                    };
                    let sigma_post = self.sigma_post.unwrap_or(s);
                    for copies in self.budgets(full_scale) {
                        out.push(GridPoint {
                            configuration,
                            sigma_prep,
                            sigma_post,
                            epsilon,
                            copies,
                        });
                    }
                }
            }
        }
        out
    }
}

/// Columns of an exported table.
pub trait Record: Serialize {
    const HEADER: &'static [&'static str];
}

pub const STATUS_OK: &str = "ok";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub state: StateKind,
    pub mode: Mode,
    pub configuration: Option<Configuration>,
    pub sigma_prep: Option<f64>,
    pub sigma_post: Option<f64>,
    pub epsilon: Option<f64>,
    pub copies: Option<u64>,
    pub mean_distance: Option<f64>,
    pub std_error: Option<f64>,
    pub repetitions: usize,
    pub seed: u64,
    /// `ok`, or `error: <message>` on the marker row closing a failed run.
    pub status: String,
}

impl Record for ResultRow {
    const HEADER: &'static [&'static str] = &[
        "state",
        "mode",
        "configuration",
        "sigma_prep",
        "sigma_post",
        "epsilon",
        "copies",
        "mean_distance",
        "std_error",
        "repetitions",
        "seed",
        "status",
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub sigma: f64,
    pub bin_lower: f64,
    pub bin_upper: f64,
    pub count: u64,
    /// `count / (samples · bin width)`.
    pub density: f64,
}

impl Record for HistogramRow {
    const HEADER: &'static [&'static str] = &["sigma", "bin_lower", "bin_upper", "count", "density"];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub norm_const: f64,
    pub qfi_noiseless: f64,
    pub qfi_noisy: f64,
    pub variance_noiseless: f64,
    pub variance_noisy: f64,
}

impl Record for CurveRow {
    const HEADER: &'static [&'static str] = &[
        "norm_const",
        "qfi_noiseless",
        "qfi_noisy",
        "variance_noiseless",
        "variance_noisy",
    ];
}

/// Rows produced by a tomography sweep. When a grid point fails, the rows
/// computed so far are kept, an error marker row is appended and the error
/// is returned alongside.
#[derive(Debug)]
pub struct FigureRun {
    pub rows: Vec<ResultRow>,
    pub failure: Option<Error>,
}

pub fn run_figure(cfg: &ExperimentConfig, full_scale: bool) -> Result<FigureRun> {
    if cfg.experiment != ExperimentKind::Tomography {
        return Err(config_err("run_figure needs a tomography config"));
    }
    cfg.validate()?;
    let psi = cfg.build_state()?;
    let target = match cfg.mode {
        Mode::Pure => Target::Pure(psi),
        Mode::Mixed => Target::Mixed(psi.projector()),
    };
    let mut rows = Vec::new();
    for point in cfg.grid(full_scale) {
        let spec = RunSpec {
            target: target.clone(),
            config: point.configuration,
            sigma_prep: point.sigma_prep,
            sigma_post: point.sigma_post,
            epsilon: point.epsilon,
            copies: point.copies,
            repetitions: cfg.repetitions,
            seed: cfg.seed,
        };
        let row = |mean, se, status: String| ResultRow {
            state: cfg.state,
            mode: cfg.mode,
            configuration: Some(point.configuration),
            sigma_prep: Some(point.sigma_prep),
            sigma_post: Some(point.sigma_post),
            epsilon: Some(point.epsilon),
            copies: Some(point.copies),
            mean_distance: mean,
            std_error: se,
            repetitions: cfg.repetitions,
            seed: cfg.seed,
            status,
        };
        match run_repetitions(&spec) {
            Ok(res) => rows.push(row(Some(res.mean_distance), Some(res.std_error), STATUS_OK.into())),
            Err(e) => {
                rows.push(row(None, None, format!("error: {e}")));
                return Ok(FigureRun { rows, failure: Some(e) });
            }
        }
    }
    Ok(FigureRun { rows, failure: None })
}

#[derive(Debug, Clone, PartialEq)]
pub struct QfiTables {
    pub histogram: Vec<HistogramRow>,
    pub curves: Vec<CurveRow>,
}

/// Normalized histogram of sampled `𝒩` plus the variance bounds
/// `1/(4(d−1))` and `𝒩²/(4(d−1))` on an even grid over the same range.
pub fn run_qfi(cfg: &ExperimentConfig) -> Result<QfiTables> {
    if cfg.experiment != ExperimentKind::Qfi {
        return Err(config_err("run_qfi needs a qfi config"));
    }
    cfg.validate()?;
    let psi = cfg.build_state()?;
    let sigma = cfg.sigma_prep.unwrap_or(0.0);
    let samples = cfg.samples.unwrap_or(DEFAULT_SAMPLES);
    let bins = cfg.bins.unwrap_or(DEFAULT_BINS);
    let [lo, hi] = cfg.histogram_range.unwrap_or(DEFAULT_HISTOGRAM_RANGE);
    let points = cfg.curve_points.unwrap_or(DEFAULT_CURVE_POINTS);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let values = norm_const_samples(&psi, sigma, samples, &mut rng);
    let width = (hi - lo) / bins as f64;
    let edge = |i: usize| lo + (hi - lo) * i as f64 / bins as f64;
    let mut counts = vec![0u64; bins];
    for v in values {
        if (lo..hi).contains(&v) {
            let mut i = (((v - lo) / width) as usize).min(bins - 1);
            // Keep the bin assignment consistent with the printed edges.
            if v < edge(i) {
                i -= 1;
            } else if v >= edge(i + 1) {
                i += 1;
            }
            counts[i] += 1;
        }
    }
    let histogram = counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistogramRow {
            sigma,
            bin_lower: edge(i),
            bin_upper: edge(i + 1),
            count,
            density: count as f64 / (samples as f64 * width),
        })
        .collect();

    let d = psi.dim();
    let q = qfi_total_closed_form::<f64>(d, 1.0);
    let curves = (0..points)
        .map(|i| {
            let n = lo + (hi - lo) * i as f64 / (points - 1) as f64;
            let qn = qfi_total_closed_form::<f64>(d, n);
            CurveRow {
                norm_const: n,
                qfi_noiseless: q,
                qfi_noisy: qn,
                variance_noiseless: q.recip(),
                variance_noisy: qn.recip(),
            }
        })
        .collect();
    Ok(QfiTables { histogram, curves })
}

/// CSV with a header line and LF terminators. An empty table is header only.
pub fn write_csv<R: Record, W: Write>(rows: &[R], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(R::HEADER)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Pretty-printed JSON array of objects, newline terminated.
pub fn write_json<R: Record, W: Write>(rows: &[R], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    out.write_all(b"\n")?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    /// JSON for a `.json` extension, CSV otherwise.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => OutputFormat::Json,
            _ => OutputFormat::Csv,
        }
    }
}

pub fn write_table<R: Record, W: Write>(rows: &[R], format: OutputFormat, out: W) -> Result<()> {
    match format {
        OutputFormat::Csv => write_csv(rows, out),
        OutputFormat::Json => write_json(rows, out),
    }
}

pub fn export_csv<R: Record>(rows: &[R], path: &Path) -> Result<()> {
    write_csv(rows, std::io::BufWriter::new(std::fs::File::create(path)?))
}

pub fn export_json<R: Record>(rows: &[R], path: &Path) -> Result<()> {
    write_json(rows, std::io::BufWriter::new(std::fs::File::create(path)?))
}

/// Companion path for the curve table of a `qfi` run: `fig6.csv` → `fig6_curves.csv`.
pub fn curves_path(path: &Path) -> std::path::PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("output");
    let name = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_curves.{ext}"),
        None => format!("{stem}_curves"),
    };
    path.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"state": "GHZ", "num_qubits": 3, "copy_budgets": [1000]}"#;

    #[test]
    fn minimal_config_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.repetitions, 50);
        assert_eq!(cfg.mode, Mode::Pure);
        assert_eq!(cfg.configuration, ConfigurationChoice::Both);
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.grid(false).len(), 2);
    }

    #[test]
    fn unknown_key_rejected() {
        let err = parse_config(r#"{"state": "GHZ", "num_qubits": 3, "copy_budgets": [10], "sigma": 0.1}"#);
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn epsilon_in_pure_mode_rejected() {
        let err = parse_config(r#"{"state": "GHZ", "num_qubits": 3, "copy_budgets": [10], "epsilon": 0.1}"#);
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn empty_sweep_and_zero_reps_rejected() {
        for text in [
            r#"{"state": "GHZ", "num_qubits": 3, "copy_budgets": []}"#,
            r#"{"state": "GHZ", "num_qubits": 3, "copy_budgets": [10], "sigma_sweep": []}"#,
            r#"{"state": "GHZ", "num_qubits": 3, "copy_budgets": [10], "repetitions": 0}"#,
            r#"{"state": "Dicke", "num_qubits": 3, "copy_budgets": [10]}"#,
            r#"{"state": "GHZ", "copy_budgets": [10]}"#,
        ] {
            assert!(parse_config(text).is_err(), "{text}");
        }
    }

    #[test]
    fn round_trip() {
        let cfg = parse_config(
            r#"{"state": "Dicke", "num_qubits": 3, "excitations": 2, "mode": "mixed", "configuration": "C1",
                "sigma_sweep": [0.0, 0.05], "epsilon_sweep": [0.1, 0.5], "copy_budgets": [100, 1000],
                "repetitions": 7, "seed": 42, "output": "x.csv"}"#,
        )
        .unwrap();
        assert_eq!(parse_config(&cfg.to_json().unwrap()).unwrap(), cfg);
        assert_eq!(cfg.grid(false).len(), 8);
    }

    #[test]
    fn grid_pins_override_sweep() {
        let cfg = parse_config(
            r#"{"state": "GHZ", "num_qubits": 3, "configuration": "C2", "sigma_sweep": [0.0, 0.1],
                "sigma_prep": 0.0, "copy_budgets": [10]}"#,
        )
        .unwrap();
        let g = cfg.grid(false);
        assert_eq!(g.len(), 2);
        assert!(g.iter().all(|p| p.sigma_prep == 0.0));
        assert_eq!(g[1].sigma_post, 0.1);
    }

    #[test]
    fn csv_header_only_and_one_row() {
        let mut buf = Vec::new();
        write_csv::<HistogramRow, _>(&[], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "sigma,bin_lower,bin_upper,count,density\n"
        );
        let mut buf = Vec::new();
        let row = HistogramRow {
            sigma: 0.1,
            bin_lower: 0.5,
            bin_upper: 0.6,
            count: 3,
            density: 0.25,
        };
        write_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(!text.contains('\r'));
        assert!(text.ends_with("0.1,0.5,0.6,3,0.25\n"));
    }

    #[test]
    fn curves_companion_path() {
        assert_eq!(curves_path(Path::new("out/fig6.csv")), Path::new("out/fig6_curves.csv"));
        assert_eq!(curves_path(Path::new("fig6")), Path::new("fig6_curves"));
    }
}
