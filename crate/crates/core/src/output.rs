//! Run configuration and artifact generation for the command-line tool.
//!
//! A [`RunConfig`] fully describes one invocation: which command to run,
//! the model parameters, an optional parameter sweep, and where/how to
//! write results. [`run`] validates the configuration, expands the sweep
//! into grid points, renders every artifact in memory (grid points in
//! parallel), and then writes all files from a single sequential pass so
//! output is deterministic.
//!
//! Reproducibility contract: artifacts contain no timestamps, rows are
//! emitted in a deterministic order, and every float is rounded to 12
//! significant digits before printing, so re-running a configuration
//! produces byte-identical files.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::doublon::{self, Region};
use crate::dynamics::{self, EvolutionMethod};
use crate::enumerate::{self, StateFamily};
use crate::error::{Error, Result};
use crate::observables::{self, EntanglementCut};
use crate::params::ModelParams;
use crate::state::TwoExcitationState;

/// Tool version stamped into every manifest.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Which computation a run performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    /// Enumerate analytic eigenstates of momentum sectors with diagnostics.
    Spectrum,
    /// Bound-pair dispersion branches on a momentum grid.
    Doublon,
    /// Five-region classification of hard-core coupled-sector states.
    Regions,
    /// Dump one eigenstate's amplitudes and diagnostics.
    Eigenstate,
    /// Quench time evolution from an on-site pair.
    Evolve,
}

impl CommandKind {
    /// File stem of the command's data artifact.
    pub fn stem(self) -> &'static str {
        match self {
            CommandKind::Spectrum => "spectrum",
            CommandKind::Doublon => "doublon",
            CommandKind::Regions => "regions",
            CommandKind::Eigenstate => "eigenstate",
            CommandKind::Evolve => "evolve",
        }
    }

    fn takes_sector(self) -> bool {
        matches!(
            self,
            CommandKind::Spectrum | CommandKind::Regions | CommandKind::Eigenstate
        )
    }
}

/// Data-file format.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// Initial state of a quench run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialState {
    /// One a-particle and one b-particle on site 0.
    #[default]
    Ab00,
    /// Two a-particles on site 0.
    Aa00,
}

impl InitialState {
    fn build(self, n: usize) -> TwoExcitationState {
        match self {
            InitialState::Ab00 => dynamics::onsite_pair_ab(n),
            InitialState::Aa00 => dynamics::onsite_pair_aa(n),
        }
    }
}

/// Time-evolution route.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodKind {
    #[default]
    Spectral,
    Integrator,
}

impl From<MethodKind> for EvolutionMethod {
    fn from(m: MethodKind) -> Self {
        match m {
            MethodKind::Spectral => EvolutionMethod::Spectral,
            MethodKind::Integrator => EvolutionMethod::Integrator,
        }
    }
}

/// Optional parameter grid: the cartesian product of the provided axes is
/// run point by point. `u` sets both same-species interactions (symmetric
/// sweep); `p` selects momentum sectors and applies only to sector
/// commands. Every provided axis must be non-empty and finite.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGrid {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<f64>>,
}

impl SweepGrid {
    fn validate(&self, command: CommandKind) -> Result<()> {
        let check_floats = |name: &str, axis: &Option<Vec<f64>>| -> Result<()> {
            if let Some(values) = axis {
                if values.is_empty() {
                    return Err(Error::Config(format!("sweep.{name} must be non-empty")));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Config(format!(
                        "sweep.{name} contains a non-finite value"
                    )));
                }
            }
            Ok(())
        };
        check_floats("u", &self.u)?;
        check_floats("omega", &self.omega)?;
        if let Some(ps) = &self.p {
            if ps.is_empty() {
                return Err(Error::Config("sweep.p must be non-empty".into()));
            }
            if !command.takes_sector() {
                return Err(Error::Config(format!(
                    "sweep.p does not apply to the `{}` command",
                    command.stem()
                )));
            }
        }
        Ok(())
    }
}

/// One resolved point of a sweep, recorded in the point's manifest.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SweepPoint {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
}

fn default_p_grid() -> usize {
    64
}

fn default_t_max() -> f64 {
    40.0
}

fn default_dt_out() -> f64 {
    0.1
}

/// Complete description of one tool invocation.
///
/// The same structure is accepted as a JSON config file; command-line
/// flags override file values. Unknown keys are rejected by name.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandKind,
    #[serde(default)]
    pub params: ModelParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepGrid>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,

    /// Momentum-sector index for sector commands (`spectrum`, `regions`,
    /// `eigenstate`); mutually exclusive with `all_p`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    /// Run every momentum sector.
    #[serde(default)]
    pub all_p: bool,
    /// Position (ascending in energy) of the state dumped by `eigenstate`.
    #[serde(default)]
    pub index: usize,
    /// Number of momentum grid points for `doublon`.
    #[serde(default = "default_p_grid")]
    pub p_grid: usize,
    /// Initial state of `evolve`.
    #[serde(default)]
    pub initial: InitialState,
    /// Final time of `evolve`, in units of 1/J.
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    /// Output-time spacing of `evolve`, in units of 1/J.
    #[serde(default = "default_dt_out")]
    pub dt_out: f64,
    /// Evolution route of `evolve`.
    #[serde(default)]
    pub method: MethodKind,
    /// Also write per-time state snapshots (`evolve` only).
    #[serde(default)]
    pub snapshots: bool,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

impl RunConfig {
    /// Baseline configuration for a command: default parameters, `out/`
    /// directory, CSV format.
    pub fn new(command: CommandKind) -> Self {
        RunConfig {
            command,
            params: ModelParams::default(),
            sweep: None,
            output_dir: default_output_dir(),
            format: OutputFormat::default(),
            p: None,
            all_p: false,
            index: 0,
            p_grid: default_p_grid(),
            initial: InitialState::default(),
            t_max: default_t_max(),
            dt_out: default_dt_out(),
            method: MethodKind::default(),
            snapshots: false,
        }
    }

    /// Parses a JSON config file; malformed content (including unknown
    /// keys) is reported as a configuration error naming the problem.
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("config file {}: {e}", path.display())))
    }

    /// Checks every cross-field invariant; violations name the offending
    /// key.
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if let Some(sweep) = &self.sweep {
            sweep.validate(self.command)?;
        }
        if self.command.takes_sector() {
            match (self.p, self.all_p) {
                (Some(_), true) => {
                    return Err(Error::Config("--p and --all-p are mutually exclusive".into()))
                }
                (None, false) if self.sweep.as_ref().is_some_and(|s| s.p.is_some()) => {}
                (None, false) => {
                    return Err(Error::Config(
                        "select momentum sectors with --p INDEX or --all-p".into(),
                    ))
                }
                _ => {}
            }
            if let Some(p) = self.p {
                if p >= self.params.n {
                    return Err(Error::Config(format!(
                        "--p {p} is out of range for n = {} sites",
                        self.params.n
                    )));
                }
            }
        }
        if let Some(ps) = self.sweep.as_ref().and_then(|s| s.p.as_ref()) {
            if let Some(&bad) = ps.iter().find(|&&p| p >= self.params.n) {
                return Err(Error::Config(format!(
                    "sweep.p value {bad} is out of range for n = {} sites",
                    self.params.n
                )));
            }
        }
        match self.command {
            CommandKind::Doublon => {
                if self.p_grid < 2 {
                    return Err(Error::Config("--p-grid must be at least 2".into()));
                }
            }
            CommandKind::Evolve => {
                if !(self.t_max.is_finite() && self.t_max > 0.0) {
                    return Err(Error::Config("--t-max must be positive and finite".into()));
                }
                if !(self.dt_out.is_finite() && self.dt_out > 0.0 && self.dt_out <= self.t_max) {
                    return Err(Error::Config(
                        "--dt-out must be positive, finite, and at most --t-max".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Expands the sweep into fully resolved per-point configurations.
    /// Without a sweep this is the configuration itself.
    fn expand(&self) -> Vec<(RunConfig, Option<SweepPoint>)> {
        let Some(sweep) = &self.sweep else {
            return vec![(self.clone(), None)];
        };
        let p_axis: Vec<Option<usize>> = match &sweep.p {
            Some(v) => v.iter().copied().map(Some).collect(),
            None => vec![None],
        };
        let u_axis: Vec<Option<f64>> = match &sweep.u {
            Some(v) => v.iter().copied().map(Some).collect(),
            None => vec![None],
        };
        let omega_axis: Vec<Option<f64>> = match &sweep.omega {
            Some(v) => v.iter().copied().map(Some).collect(),
            None => vec![None],
        };

        let mut points = Vec::new();
        for &p in &p_axis {
            for &u in &u_axis {
                for &omega in &omega_axis {
                    let mut cfg = self.clone();
                    cfg.sweep = None;
                    if let Some(p) = p {
                        cfg.p = Some(p);
                        cfg.all_p = false;
                    }
                    if let Some(u) = u {
                        cfg.params.u1 = u;
                        cfg.params.u2 = u;
                    }
                    if let Some(omega) = omega {
                        cfg.params.omega = omega;
                    }
                    let index = points.len();
                    points.push((cfg, Some(SweepPoint { index, p, u, omega })));
                }
            }
        }
        points
    }
}

/// Runs a validated configuration to completion: computes every sweep
/// point (in parallel), then writes all artifacts sequentially.
pub fn run(config: &RunConfig) -> Result<()> {
    config.validate()?;
    let points = config.expand();
    let multi = points.len() > 1;

    let rendered: Vec<Vec<Artifact>> = points
        .par_iter()
        .map(|(cfg, point)| {
            let suffix = match point {
                Some(pt) if multi => format!("_s{:03}", pt.index),
                _ => String::new(),
            };
            render_point(cfg, point.as_ref(), &suffix)
        })
        .collect::<Result<_>>()?;

    fs::create_dir_all(&config.output_dir)?;
    for artifact in rendered.into_iter().flatten() {
        fs::write(config.output_dir.join(&artifact.filename), &artifact.bytes)?;
    }
    Ok(())
}

/// One output file, fully rendered in memory.
struct Artifact {
    filename: String,
    bytes: Vec<u8>,
}

fn render_point(
    cfg: &RunConfig,
    point: Option<&SweepPoint>,
    suffix: &str,
) -> Result<Vec<Artifact>> {
    let mut artifacts = match cfg.command {
        CommandKind::Spectrum => render_table(cfg, suffix, spectrum_table(cfg)?)?,
        CommandKind::Doublon => render_table(cfg, suffix, doublon_table(cfg)?)?,
        CommandKind::Regions => render_table(cfg, suffix, regions_table(cfg)?)?,
        CommandKind::Eigenstate => eigenstate_artifacts(cfg, suffix)?,
        CommandKind::Evolve => evolve_artifacts(cfg, suffix)?,
    };
    artifacts.push(Artifact {
        filename: format!("manifest{suffix}.json"),
        bytes: manifest_bytes(cfg, point)?,
    });
    Ok(artifacts)
}

// ---------------------------------------------------------------------------
// Float formatting
// ---------------------------------------------------------------------------

/// Formats a float with 12 significant digits in scientific notation.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.11e}")
    }
}

/// Rounds a float to the 12 significant digits that printing keeps, so
/// JSON and CSV artifacts carry numerically identical values.
fn round_float(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.11e}").parse().unwrap_or(x)
    } else {
        x
    }
}

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

/// One table cell; numbers print with fixed precision, missing values are
/// empty in CSV and null in JSON.
#[derive(Clone, Debug)]
enum Cell {
    Int(u64),
    Float(f64),
    Text(&'static str),
    Missing,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => (*s).to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Int(v) => serde_json::Value::from(*v),
            Cell::Float(v) => serde_json::Number::from_f64(round_float(*v))
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
            Cell::Text(s) => serde_json::Value::from(*s),
            Cell::Missing => serde_json::Value::Null,
        }
    }
}

/// A rectangular result set with named, unit-bearing columns.
struct Table {
    columns: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

fn render_table(cfg: &RunConfig, suffix: &str, table: Table) -> Result<Vec<Artifact>> {
    let filename = format!(
        "{}{suffix}.{}",
        cfg.command.stem(),
        cfg.format.extension()
    );
    let bytes = match cfg.format {
        OutputFormat::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer.write_record(table.columns)?;
            for row in &table.rows {
                debug_assert_eq!(row.len(), table.columns.len());
                writer.write_record(row.iter().map(Cell::csv))?;
            }
            writer.into_inner().map_err(|e| Error::Config(e.to_string()))?
        }
        OutputFormat::Json => {
            let records: Vec<serde_json::Value> = table
                .rows
                .iter()
                .map(|row| {
                    let map: serde_json::Map<String, serde_json::Value> = table
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(col, cell)| ((*col).to_string(), cell.json()))
                        .collect();
                    serde_json::Value::Object(map)
                })
                .collect();
            let mut bytes = serde_json::to_vec_pretty(&records)?;
            bytes.push(b'\n');
            bytes
        }
    };
    Ok(vec![Artifact { filename, bytes }])
}

fn family_label(family: &StateFamily) -> &'static str {
    match family {
        StateFamily::Free => "free",
        StateFamily::SingleSpecies { bound: false } => "single_species",
        StateFamily::SingleSpecies { bound: true } => "single_species_bound",
        StateFamily::Coupled => "coupled",
        StateFamily::AntisymmetricPair => "antisymmetric_pair",
        StateFamily::FlatLocal => "flat_local",
    }
}

fn region_label(region: Region) -> &'static str {
    match region {
        Region::BelowBands => "below_bands",
        Region::LowerBand => "lower_band",
        Region::MidGap => "mid_gap",
        Region::UpperBand => "upper_band",
        Region::AboveBands => "above_bands",
    }
}

/// Momentum sectors selected by the configuration.
fn selected_sectors(cfg: &RunConfig) -> Vec<usize> {
    if cfg.all_p {
        (0..cfg.params.n).collect()
    } else {
        cfg.p.into_iter().collect()
    }
}

fn spectrum_table(cfg: &RunConfig) -> Result<Table> {
    const COLUMNS: &[&str] = &[
        "p_index",
        "momentum_rad",
        "energy_over_j",
        "type",
        "ipr",
        "entropy_nats",
        "residual",
    ];
    let mut rows = Vec::new();
    for r in selected_sectors(cfg) {
        let momentum = cfg.params.momentum(r);
        for st in enumerate::enumerate_sector(&cfg.params, r)? {
            let ipr = observables::ipr(&st.state)?;
            let ent = observables::entanglement_entropy(&st.state, EntanglementCut::Coupled)?;
            rows.push(vec![
                Cell::Int(r as u64),
                Cell::Float(momentum),
                Cell::Float(st.energy),
                Cell::Text(family_label(&st.family)),
                Cell::Float(ipr),
                Cell::Float(ent.s_total),
                Cell::Float(st.residual),
            ]);
        }
    }
    sort_rows(&mut rows);
    Ok(Table { columns: COLUMNS, rows })
}

fn doublon_table(cfg: &RunConfig) -> Result<Table> {
    const COLUMNS: &[&str] = &[
        "branch",
        "momentum_rad",
        "energy_over_j",
        "decay_per_site",
        "group_velocity_j_site",
    ];
    let m = cfg.p_grid;
    let grid: Vec<f64> = (0..m)
        .map(|i| 2.0 * std::f64::consts::PI * i as f64 / m as f64)
        .collect();
    let mut rows = Vec::new();
    for branch in doublon::doublon_branches(&cfg.params, &grid)? {
        let label = match branch.branch_id {
            doublon::BranchId::Below => "below",
            doublon::BranchId::Middle => "middle",
            doublon::BranchId::Above => "above",
        };
        for (k, &(p, e)) in branch.samples.iter().enumerate() {
            rows.push(vec![
                Cell::Text(label),
                Cell::Float(p),
                Cell::Float(e),
                Cell::Float(branch.decay_constants[k]),
                Cell::Float(branch.group_velocity[k]),
            ]);
        }
    }
    Ok(Table { columns: COLUMNS, rows })
}

fn regions_table(cfg: &RunConfig) -> Result<Table> {
    const COLUMNS: &[&str] = &[
        "p_index",
        "region",
        "energy_over_j",
        "ipr",
        "entropy_nats",
        "decay_min_per_site",
        "residual",
    ];
    let mut rows = Vec::new();
    for r in selected_sectors(cfg) {
        for st in doublon::enumerate_regions(&cfg.params, r)? {
            let ipr = observables::ipr(&st.state)?;
            let ent = observables::entanglement_entropy(&st.state, EntanglementCut::Coupled)?;
            let decay = st
                .decay_constants
                .iter()
                .cloned()
                .fold(f64::INFINITY, f64::min);
            rows.push(vec![
                Cell::Int(r as u64),
                Cell::Text(region_label(st.region)),
                Cell::Float(st.energy),
                Cell::Float(ipr),
                Cell::Float(ent.s_total),
                if decay.is_finite() { Cell::Float(decay) } else { Cell::Missing },
                Cell::Float(st.residual),
            ]);
        }
    }
    sort_rows(&mut rows);
    Ok(Table { columns: COLUMNS, rows })
}

/// Deterministic row order: by sector, then energy, then remaining cells.
fn sort_rows(rows: &mut [Vec<Cell>]) {
    rows.sort_by(|a, b| {
        for (x, y) in a.iter().zip(b) {
            let ord = match (x, y) {
                (Cell::Int(u), Cell::Int(v)) => u.cmp(v),
                (Cell::Float(u), Cell::Float(v)) => u.total_cmp(v),
                (Cell::Text(u), Cell::Text(v)) => u.cmp(v),
                _ => std::cmp::Ordering::Equal,
            };
            if ord != std::cmp::Ordering::Equal {
                return ord;
            }
        }
        std::cmp::Ordering::Equal
    });
}

// ---------------------------------------------------------------------------
// Eigenstate dump
// ---------------------------------------------------------------------------

fn complex_matrix_json(m: &ndarray::Array2<Complex64>) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = m
        .rows()
        .into_iter()
        .map(|row| {
            let entries: Vec<serde_json::Value> = row
                .iter()
                .map(|z| {
                    serde_json::Value::from(vec![
                        serde_json::Value::from(round_float(z.re)),
                        serde_json::Value::from(round_float(z.im)),
                    ])
                })
                .collect();
            serde_json::Value::from(entries)
        })
        .collect();
    serde_json::Value::from(rows)
}

fn eigenstate_artifacts(cfg: &RunConfig, suffix: &str) -> Result<Vec<Artifact>> {
    let r = cfg.p.ok_or_else(|| {
        Error::Config("eigenstate requires a single momentum sector: pass --p INDEX".into())
    })?;
    let states = enumerate::enumerate_sector(&cfg.params, r)?;
    let st = states.get(cfg.index).ok_or_else(|| {
        Error::Config(format!(
            "--index {} is out of range: sector {r} holds {} states",
            cfg.index,
            states.len()
        ))
    })?;

    let ipr = observables::ipr(&st.state)?;
    let ent = observables::entanglement_entropy(&st.state, EntanglementCut::Coupled)?;
    let n_db = observables::n_db(&st.state)?;
    let n_db_linear = observables::n_db_linear(&st.state)?;

    let filename = format!(
        "{}{suffix}.{}",
        cfg.command.stem(),
        cfg.format.extension()
    );
    let bytes = match cfg.format {
        OutputFormat::Json => {
            let doc = serde_json::json!({
                "p_index": r,
                "index": cfg.index,
                "energy_over_j": round_float(st.energy),
                "type": family_label(&st.family),
                "residual": round_float(st.residual),
                "ipr": round_float(ipr),
                "entropy": {
                    "lambda_a": round_float(ent.lambda_a),
                    "lambda_c": round_float(ent.lambda_c),
                    "s0": round_float(ent.s0),
                    "s1": round_float(ent.s1),
                    "s2": round_float(ent.s2),
                    "s_total": round_float(ent.s_total),
                },
                "n_db": round_float(n_db),
                "n_db_linear": round_float(n_db_linear),
                "amplitudes": {
                    "a": complex_matrix_json(&st.state.a),
                    "b": complex_matrix_json(&st.state.b),
                    "c": complex_matrix_json(&st.state.c),
                },
            });
            let mut bytes = serde_json::to_vec_pretty(&doc)?;
            bytes.push(b'\n');
            bytes
        }
        OutputFormat::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer.write_record(["block", "row_site", "col_site", "re", "im"])?;
            for (label, m) in [("a", &st.state.a), ("b", &st.state.b), ("c", &st.state.c)] {
                for ((i, j), z) in m.indexed_iter() {
                    writer.write_record([
                        label.to_string(),
                        i.to_string(),
                        j.to_string(),
                        format_float(z.re),
                        format_float(z.im),
                    ])?;
                }
            }
            writer.into_inner().map_err(|e| Error::Config(e.to_string()))?
        }
    };
    Ok(vec![Artifact { filename, bytes }])
}

// ---------------------------------------------------------------------------
// Time evolution
// ---------------------------------------------------------------------------

fn evolve_artifacts(cfg: &RunConfig, suffix: &str) -> Result<Vec<Artifact>> {
    const COLUMNS: &[&str] = &[
        "time_inv_j",
        "norm",
        "energy_over_j",
        "ipr",
        "s0_nats",
        "s1_nats",
        "s2_nats",
        "s_total_nats",
        "n_db",
        "n_db_linear",
    ];
    const SERIES: &[&str] = &[
        "norm",
        "energy",
        "ipr",
        "s0",
        "s1",
        "s2",
        "s_total",
        "n_db",
        "n_db_linear",
    ];

    let initial = cfg.initial.build(cfg.params.n);
    let times = dynamics::uniform_times(cfg.t_max, cfg.dt_out);
    let traj = dynamics::evolve(&initial, &cfg.params, &times, cfg.method.into())?;

    let mut rows = Vec::with_capacity(traj.times.len());
    for (k, &t) in traj.times.iter().enumerate() {
        let mut row = Vec::with_capacity(COLUMNS.len());
        row.push(Cell::Float(t));
        for name in SERIES {
            let series = traj
                .series(name)
                .ok_or_else(|| Error::Config(format!("missing series `{name}`")))?;
            row.push(Cell::Float(series[k]));
        }
        rows.push(row);
    }
    let mut artifacts = render_table(cfg, suffix, Table { columns: COLUMNS, rows })?;

    if cfg.snapshots {
        let states = traj
            .states
            .as_ref()
            .ok_or_else(|| Error::Config("trajectory carries no snapshots".into()))?;
        let docs: Vec<serde_json::Value> = traj
            .times
            .iter()
            .zip(states)
            .map(|(&t, st)| {
                serde_json::json!({
                    "time_inv_j": round_float(t),
                    "a": complex_matrix_json(&st.a),
                    "b": complex_matrix_json(&st.b),
                    "c": complex_matrix_json(&st.c),
                })
            })
            .collect();
        let mut bytes = serde_json::to_vec_pretty(&docs)?;
        bytes.push(b'\n');
        artifacts.push(Artifact {
            filename: format!("snapshots{suffix}.json"),
            bytes,
        });
    }
    Ok(artifacts)
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

fn manifest_bytes(cfg: &RunConfig, point: Option<&SweepPoint>) -> Result<Vec<u8>> {
    let mut doc = BTreeMap::<&str, serde_json::Value>::new();
    doc.insert("version", serde_json::Value::from(TOOL_VERSION));
    doc.insert("command", serde_json::to_value(cfg.command)?);
    doc.insert("format", serde_json::to_value(cfg.format)?);
    doc.insert("params", serde_json::to_value(cfg.params)?);
    let selection = match cfg.command {
        CommandKind::Spectrum | CommandKind::Regions => serde_json::json!({
            "p": cfg.p,
            "all_p": cfg.all_p,
        }),
        CommandKind::Eigenstate => serde_json::json!({
            "p": cfg.p,
            "index": cfg.index,
        }),
        CommandKind::Doublon => serde_json::json!({
            "p_grid": cfg.p_grid,
        }),
        CommandKind::Evolve => serde_json::json!({
            "initial": cfg.initial,
            "t_max": cfg.t_max,
            "dt_out": cfg.dt_out,
            "method": cfg.method,
        }),
    };
    doc.insert("selection", selection);
    if let Some(pt) = point {
        doc.insert("sweep_point", serde_json::to_value(pt)?);
    }
    let mut bytes = serde_json::to_vec_pretty(&doc)?;
    bytes.push(b'\n');
    Ok(bytes)
}
