//! Serialized report documents.
//!
//! Single runs are written as one JSON object. Tables (sweeps, model
//! evaluations, sector listings) are written as CSV with a fixed header,
//! or as JSON with the rows under `rows`.

use serde::{Deserialize, Serialize};
use trapcat_core::protocol::Sampling;
use trapcat_core::{
    CutoffPolicy, GroverMode, IterationPolicy, ProtocolConfig, SimulationReport, TraceRecord,
};

pub const RUN_SCHEMA: &str = "trapcat.run/1";
pub const ENTANGLE_SCHEMA: &str = "trapcat.entangle/1";
pub const TABLE_SCHEMA: &str = "trapcat.table/1";

/// Resolved configuration, echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub ions: u32,
    pub alpha: [f64; 2],
    pub target: usize,
    pub mode: String,
    /// `"auto"` or a decimal count.
    pub iterations: String,
    /// `"auto"` or a decimal cutoff.
    pub cutoff: String,
    pub epsilon: Option<f64>,
    pub seed: Option<u64>,
    pub postselect: bool,
}

impl ConfigEcho {
    pub fn from_config(cfg: &ProtocolConfig) -> Self {
        let (cutoff, epsilon) = match cfg.cutoff {
            CutoffPolicy::Auto { epsilon } => ("auto".to_string(), Some(epsilon)),
            CutoffPolicy::Fixed(c) => (c.to_string(), None),
        };
        let (seed, postselect) = match cfg.sampling {
            Sampling::Seeded(s) => (Some(s), false),
            Sampling::Postselect => (None, true),
        };
        Self {
            ions: cfg.ions,
            alpha: [cfg.alpha.re, cfg.alpha.im],
            target: cfg.target,
            mode: cfg.mode.name().to_string(),
            iterations: match cfg.iterations {
                IterationPolicy::Auto => "auto".to_string(),
                IterationPolicy::Fixed(n) => n.to_string(),
            },
            cutoff,
            epsilon,
            seed,
            postselect,
        }
    }

    /// Rebuilds the configuration this echo was written from.
    pub fn to_config(&self) -> Result<ProtocolConfig, String> {
        let mode: GroverMode = self.mode.parse().map_err(|e| format!("{e}"))?;
        let iterations = match self.iterations.as_str() {
            "auto" => IterationPolicy::Auto,
            n => IterationPolicy::Fixed(n.parse().map_err(|_| format!("bad iterations {n:?}"))?),
        };
        let cutoff = match self.cutoff.as_str() {
            "auto" => CutoffPolicy::Auto {
                epsilon: self.epsilon.ok_or("auto cutoff without epsilon")?,
            },
            c => CutoffPolicy::Fixed(c.parse().map_err(|_| format!("bad cutoff {c:?}"))?),
        };
        let sampling = match (self.postselect, self.seed) {
            (true, _) => Sampling::Postselect,
            (false, Some(s)) => Sampling::Seeded(s),
            (false, None) => return Err("seeded sampling without a seed".to_string()),
        };
        Ok(ProtocolConfig {
            ions: self.ions,
            alpha: trapcat_core::Complex64::new(self.alpha[0], self.alpha[1]),
            target: self.target,
            mode,
            iterations,
            cutoff,
            sampling,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub marked: f64,
    pub unmarked: f64,
    pub success_probability: f64,
    pub norm_sqr: f64,
}

impl From<&TraceRecord> for TraceRow {
    fn from(r: &TraceRecord) -> Self {
        Self {
            iteration: r.iteration,
            marked: r.marked,
            unmarked: r.unmarked,
            success_probability: r.success_probability,
            norm_sqr: r.norm_sqr,
        }
    }
}

/// JSON document for a single `prepare` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: String,
    pub config: ConfigEcho,
    pub register_size: usize,
    pub theta_effective: f64,
    pub t_exact: f64,
    pub t_rounded: usize,
    pub iterations: usize,
    pub baseline_probability: f64,
    pub success_probability: f64,
    pub outcome: usize,
    pub outcome_probability: f64,
    pub fidelity_to_target: f64,
    pub sector_weights: Vec<f64>,
    pub trace: Vec<TraceRow>,
    pub cutoff: usize,
    pub tail_bound: f64,
}

impl RunReport {
    pub fn new(r: &SimulationReport) -> Self {
        Self {
            schema_version: RUN_SCHEMA.to_string(),
            config: ConfigEcho::from_config(&r.config),
            register_size: r.register_size,
            theta_effective: r.theta_effective,
            t_exact: r.t_exact,
            t_rounded: r.t_rounded,
            iterations: r.iterations,
            baseline_probability: r.baseline_probability,
            success_probability: r.success_probability,
            outcome: r.outcome,
            outcome_probability: r.outcome_probability,
            fidelity_to_target: r.fidelity_to_target,
            sector_weights: r.sector_weights.clone(),
            trace: r.trace.records.iter().map(TraceRow::from).collect(),
            cutoff: r.cutoff,
            tail_bound: r.tail_bound,
        }
    }
}

/// JSON document for `entangle-only`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntangleReport {
    pub schema_version: String,
    pub config: ConfigEcho,
    pub register_size: usize,
    pub cutoff: usize,
    pub tail_bound: f64,
    pub sector_weights: Vec<f64>,
    /// Weight of `--target`, when one was given.
    pub baseline_probability: Option<f64>,
}

/// One row per run of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub ions: u32,
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub target: usize,
    pub mode: String,
    pub seed: Option<u64>,
    pub postselect: bool,
    pub cutoff: usize,
    pub tail_bound: f64,
    pub theta_effective: f64,
    pub t_exact: f64,
    pub t_rounded: usize,
    pub iterations: usize,
    pub baseline_probability: f64,
    pub success_probability: f64,
    pub outcome: usize,
    pub outcome_probability: f64,
    pub fidelity_to_target: f64,
}

impl RunRow {
    pub fn new(r: &SimulationReport) -> Self {
        let echo = ConfigEcho::from_config(&r.config);
        Self {
            ions: echo.ions,
            alpha_re: echo.alpha[0],
            alpha_im: echo.alpha[1],
            target: echo.target,
            mode: echo.mode,
            seed: echo.seed,
            postselect: echo.postselect,
            cutoff: r.cutoff,
            tail_bound: r.tail_bound,
            theta_effective: r.theta_effective,
            t_exact: r.t_exact,
            t_rounded: r.t_rounded,
            iterations: r.iterations,
            baseline_probability: r.baseline_probability,
            success_probability: r.success_probability,
            outcome: r.outcome,
            outcome_probability: r.outcome_probability,
            fidelity_to_target: r.fidelity_to_target,
        }
    }
}

/// One row of the ideal-model table. `a` is the marked amplitude and `b`
/// the amplitude of each unmarked branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRow {
    pub n: usize,
    pub j: usize,
    pub theta: f64,
    pub t_exact: f64,
    pub t_rounded: usize,
    pub a: f64,
    pub b: f64,
    pub success_probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorRow {
    pub k: usize,
    pub bits: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "rows", rename_all = "kebab-case")]
pub enum Rows {
    Runs(Vec<RunRow>),
    Model(Vec<ModelRow>),
    Sectors(Vec<SectorRow>),
}

impl Rows {
    pub fn len(&self) -> usize {
        match self {
            Rows::Runs(r) => r.len(),
            Rows::Model(r) => r.len(),
            Rows::Sectors(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableDocument {
    pub schema_version: String,
    #[serde(flatten)]
    pub rows: Rows,
}

impl TableDocument {
    pub fn new(rows: Rows) -> Self {
        Self {
            schema_version: TABLE_SCHEMA.to_string(),
            rows,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReportDocument {
    Run(Box<RunReport>),
    Entangle(EntangleReport),
    Table(TableDocument),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl ReportDocument {
    pub fn schema_version(&self) -> &str {
        match self {
            ReportDocument::Run(r) => &r.schema_version,
            ReportDocument::Entangle(r) => &r.schema_version,
            ReportDocument::Table(t) => &t.schema_version,
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Single documents become a one-row table; the trace is JSON-only.
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        match self {
            ReportDocument::Run(r) => write_csv(std::slice::from_ref(&run_row_of(r))),
            ReportDocument::Entangle(e) => {
                write_csv(&sector_rows(e.register_size, &e.sector_weights))
            }
            ReportDocument::Table(t) => match &t.rows {
                Rows::Runs(r) => write_csv(r),
                Rows::Model(r) => write_csv(r),
                Rows::Sectors(r) => write_csv(r),
            },
        }
    }

    pub fn render(&self, format: Format) -> Result<String, String> {
        match format {
            Format::Json => self.to_json().map_err(|e| e.to_string()),
            Format::Csv => self.to_csv().map_err(|e| e.to_string()),
        }
    }
}

fn run_row_of(r: &RunReport) -> RunRow {
    RunRow {
        ions: r.config.ions,
        alpha_re: r.config.alpha[0],
        alpha_im: r.config.alpha[1],
        target: r.config.target,
        mode: r.config.mode.clone(),
        seed: r.config.seed,
        postselect: r.config.postselect,
        cutoff: r.cutoff,
        tail_bound: r.tail_bound,
        theta_effective: r.theta_effective,
        t_exact: r.t_exact,
        t_rounded: r.t_rounded,
        iterations: r.iterations,
        baseline_probability: r.baseline_probability,
        success_probability: r.success_probability,
        outcome: r.outcome,
        outcome_probability: r.outcome_probability,
        fidelity_to_target: r.fidelity_to_target,
    }
}

pub fn sector_rows(register_size: usize, weights: &[f64]) -> Vec<SectorRow> {
    let ions = register_size.trailing_zeros() as usize;
    weights
        .iter()
        .enumerate()
        .map(|(k, &weight)| SectorRow {
            k,
            bits: format!("{k:0ions$b}"),
            weight,
        })
        .collect()
}

fn write_csv<T: Serialize>(rows: &[T]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub const RUN_CSV_HEADER: &str =
    "ions,alpha_re,alpha_im,target,mode,seed,postselect,cutoff,tail_bound,\
theta_effective,t_exact,t_rounded,iterations,baseline_probability,success_probability,outcome,\
outcome_probability,fidelity_to_target";
pub const MODEL_CSV_HEADER: &str = "n,j,theta,t_exact,t_rounded,a,b,success_probability";
pub const SECTOR_CSV_HEADER: &str = "k,bits,weight";
