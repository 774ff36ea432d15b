//! Argument parsing and verb execution.

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use trapcat_core::grover::{
    grover_angle, model_amplitudes, optimal_iterations, unnormalized_model_amplitudes,
};
use trapcat_core::protocol::{prepare_entangled, run_protocol, Sampling};
use trapcat_core::register::MAX_IONS;
use trapcat_core::{Complex64, CutoffPolicy, Error, GroverMode, IterationPolicy, ProtocolConfig};

use crate::ranges::{
    parse_complex, parse_count_spec, parse_cutoff, parse_iterations, parse_real_range, CountSpec,
    CutoffArg, IterationsArg, RealRange,
};
use crate::report::{
    ConfigEcho, EntangleReport, Format, ModelRow, ReportDocument, Rows, RunReport, RunRow,
    TableDocument, ENTANGLE_SCHEMA,
};
use crate::sweep;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_DEGENERATE: i32 = 4;

const DEFAULT_ALPHA: &str = "2.0";
const DEFAULT_EPSILON: &str = "1e-12";

#[derive(Parser, Debug)]
#[command(
    name = "trapcat",
    version,
    about = "Ion-trap cat-state preparation simulator"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Full protocol: entangle, amplify, measure.
    Prepare(PrepareArgs),
    /// Stop after entangling and report the register sector weights.
    EntangleOnly(EntangleArgs),
    /// Tabulate the ideal Grover amplitudes.
    Model(ModelArgs),
    /// One run per coherent amplitude in a range.
    SweepAlpha(SweepAlphaArgs),
    /// One run per iteration count in a range.
    SweepIterations(SweepIterationsArgs),
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// File to write, or `stdout`.
    #[arg(long, default_value = "stdout")]
    output: String,
}

#[derive(Args, Debug)]
struct CutoffArgs {
    /// `auto` or an explicit Fock cutoff.
    #[arg(long, default_value = "auto", value_parser = parse_cutoff)]
    cutoff: CutoffArg,
    /// Discarded-mass tolerance for `--cutoff auto`.
    #[arg(long, default_value = DEFAULT_EPSILON)]
    epsilon: f64,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Reading of the diffusion step.
    #[arg(long, value_enum, default_value = "correlated-diffusion")]
    mode: ModeArg,
    #[command(flatten)]
    cutoff: CutoffArgs,
    /// Sampling seed; sweeps use seed + row index.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Condition on the target outcome instead of sampling.
    #[arg(long)]
    postselect: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct PrepareArgs {
    /// Number of ions m; the register has 2^m outcomes.
    #[arg(long)]
    ions: u32,
    /// Coherent amplitude, `re` or `re,im`.
    #[arg(long, default_value = DEFAULT_ALPHA, value_parser = parse_complex, allow_hyphen_values = true)]
    alpha: Complex64,
    /// Marked outcome k0.
    #[arg(long)]
    target: usize,
    /// `auto` (nearest integer to T) or a fixed count.
    #[arg(long, default_value = "auto", value_parser = parse_iterations)]
    iterations: IterationsArg,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct EntangleArgs {
    /// Number of ions m; the register has 2^m outcomes.
    #[arg(long)]
    ions: u32,
    /// Coherent amplitude, `re` or `re,im`.
    #[arg(long, default_value = DEFAULT_ALPHA, value_parser = parse_complex, allow_hyphen_values = true)]
    alpha: Complex64,
    /// Outcome whose weight is reported as the baseline.
    #[arg(long)]
    target: Option<usize>,
    #[command(flatten)]
    cutoff: CutoffArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// Register size, or an inclusive `a..b` range of sizes.
    #[arg(long = "N", value_parser = parse_count_spec)]
    n: CountSpec,
    /// `auto` (0 through the rounded optimum), a count, or `a..b`.
    #[arg(long, default_value = "auto", value_parser = parse_iterations)]
    iterations: IterationsArg,
    #[arg(long, value_enum, default_value = "normalized")]
    convention: Convention,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct SweepAlphaArgs {
    /// Number of ions m; the register has 2^m outcomes.
    #[arg(long)]
    ions: u32,
    /// Marked outcome k0.
    #[arg(long)]
    target: usize,
    /// `start:stop:step` over real amplitudes.
    #[arg(long, value_parser = parse_real_range, allow_hyphen_values = true)]
    alpha: RealRange,
    /// `auto` (nearest integer to T) or a fixed count.
    #[arg(long, default_value = "auto", value_parser = parse_iterations)]
    iterations: IterationsArg,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct SweepIterationsArgs {
    /// Number of ions m; the register has 2^m outcomes.
    #[arg(long)]
    ions: u32,
    /// Marked outcome k0.
    #[arg(long)]
    target: usize,
    /// Coherent amplitude, `re` or `re,im`.
    #[arg(long, default_value = DEFAULT_ALPHA, value_parser = parse_complex, allow_hyphen_values = true)]
    alpha: Complex64,
    /// Inclusive `a..b` range of iteration counts.
    #[arg(long, value_parser = parse_count_spec)]
    iterations: CountSpec,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    CorrelatedDiffusion,
    AmplitudeAmplification,
    ElectronicDiffusion,
    IdealModel,
}

impl From<ModeArg> for GroverMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::CorrelatedDiffusion => GroverMode::CorrelatedDiffusion,
            ModeArg::AmplitudeAmplification => GroverMode::AmplitudeAmplification,
            ModeArg::ElectronicDiffusion => GroverMode::ElectronicDiffusion,
            ModeArg::IdealModel => GroverMode::IdealModel,
        }
    }
}

/// Amplitude convention for `model` tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    /// `a^2 + (N-1) b^2 = 1`.
    Normalized,
    /// Amplitudes against unit-coefficient branches.
    UnitBranch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub format: Format,
    /// `None` writes to stdout.
    pub path: Option<PathBuf>,
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub enum CliCommand {
    Prepare {
        config: ProtocolConfig,
        output: OutputSpec,
    },
    EntangleOnly {
        config: ProtocolConfig,
        target: Option<usize>,
        output: OutputSpec,
    },
    Model {
        sizes: Vec<usize>,
        iterations: Option<Vec<usize>>,
        convention: Convention,
        output: OutputSpec,
    },
    SweepAlpha {
        base: ProtocolConfig,
        alphas: Vec<f64>,
        output: OutputSpec,
    },
    SweepIterations {
        base: ProtocolConfig,
        counts: Vec<usize>,
        output: OutputSpec,
    },
}

impl CliCommand {
    pub fn output(&self) -> &OutputSpec {
        match self {
            CliCommand::Prepare { output, .. }
            | CliCommand::EntangleOnly { output, .. }
            | CliCommand::Model { output, .. }
            | CliCommand::SweepAlpha { output, .. }
            | CliCommand::SweepIterations { output, .. } => output,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// `--help` or `--version`; the text goes to stdout.
    Info(String),
    Usage(String),
    Numerical(String),
    Degenerate(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => EXIT_OK,
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Degenerate(_) => EXIT_DEGENERATE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Info(s) | CliError::Usage(s) => f.write_str(s.trim_end()),
            CliError::Numerical(s) => write!(f, "numerical integrity: {s}"),
            CliError::Degenerate(s) => write!(f, "degenerate measurement: {s}"),
            CliError::Io(s) => write!(f, "io: {s}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NumericalIntegrity { .. } => CliError::Numerical(e.to_string()),
            Error::DegenerateMeasurement { .. } | Error::DegenerateState => {
                CliError::Degenerate(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn domain(msg: String) -> CliError {
    CliError::Usage(format!("domain violation: {msg}"))
}

fn check_register(ions: u32, target: Option<usize>) -> Result<(), CliError> {
    if !(1..=MAX_IONS).contains(&ions) {
        return Err(domain(format!("--ions {ions} must lie in 1..={MAX_IONS}")));
    }
    let size = 1usize << ions;
    match target {
        Some(k0) if k0 >= size => Err(domain(format!(
            "--target {k0} must be below 2^{ions} = {size}"
        ))),
        _ => Ok(()),
    }
}

fn cutoff_policy(c: &CutoffArgs) -> Result<CutoffPolicy, CliError> {
    match c.cutoff {
        CutoffArg::Fixed(n) => Ok(CutoffPolicy::Fixed(n)),
        CutoffArg::Auto if c.epsilon > 0.0 && c.epsilon < 1.0 => {
            Ok(CutoffPolicy::Auto { epsilon: c.epsilon })
        }
        CutoffArg::Auto => Err(domain(format!(
            "--epsilon {} must lie in (0, 1)",
            c.epsilon
        ))),
    }
}

fn output_spec(o: &OutputArgs) -> OutputSpec {
    OutputSpec {
        format: o.format,
        path: (o.output != "stdout").then(|| PathBuf::from(&o.output)),
    }
}

fn iteration_policy(i: IterationsArg) -> Result<IterationPolicy, CliError> {
    match i {
        IterationsArg::Auto => Ok(IterationPolicy::Auto),
        IterationsArg::Counts(CountSpec::One(n)) => Ok(IterationPolicy::Fixed(n)),
        IterationsArg::Counts(CountSpec::Span(..)) => Err(CliError::Usage(
            "--iterations takes auto or a single count here; use sweep-iterations for ranges"
                .to_string(),
        )),
    }
}

fn run_config(
    ions: u32,
    alpha: Complex64,
    target: usize,
    iterations: IterationPolicy,
    run: &RunArgs,
) -> Result<ProtocolConfig, CliError> {
    check_register(ions, Some(target))?;
    let config = ProtocolConfig {
        ions,
        alpha,
        target,
        mode: run.mode.into(),
        iterations,
        cutoff: cutoff_policy(&run.cutoff)?,
        sampling: if run.postselect {
            Sampling::Postselect
        } else {
            Sampling::Seeded(run.seed)
        },
    };
    config.validate()?;
    Ok(config)
}

/// Parses a full argv, program name first.
pub fn parse_args<I, T>(argv: I) -> Result<CliCommand, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        let text = e.render().to_string();
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliError::Info(text),
            _ => CliError::Usage(text),
        }
    })?;
    match cli.verb {
        Verb::Prepare(a) => Ok(CliCommand::Prepare {
            config: run_config(
                a.ions,
                a.alpha,
                a.target,
                iteration_policy(a.iterations)?,
                &a.run,
            )?,
            output: output_spec(&a.run.out),
        }),
        Verb::EntangleOnly(a) => {
            check_register(a.ions, a.target)?;
            let config = ProtocolConfig {
                cutoff: cutoff_policy(&a.cutoff)?,
                ..ProtocolConfig::new(a.ions, a.alpha, a.target.unwrap_or(0))
            };
            config.validate()?;
            Ok(CliCommand::EntangleOnly {
                config,
                target: a.target,
                output: output_spec(&a.out),
            })
        }
        Verb::Model(a) => {
            let sizes = a.n.values();
            if let Some(&n) = sizes.iter().find(|&&n| n < 2) {
                return Err(domain(format!("--N {n} must be at least 2")));
            }
            let iterations = match a.iterations {
                IterationsArg::Auto => None,
                IterationsArg::Counts(c) => Some(c.values()),
            };
            Ok(CliCommand::Model {
                sizes,
                iterations,
                convention: a.convention,
                output: output_spec(&a.out),
            })
        }
        Verb::SweepAlpha(a) => {
            let iterations = iteration_policy(a.iterations)?;
            let alphas = a.alpha.0;
            let first = *alphas.first().expect("ranges are never empty");
            let base = run_config(a.ions, first.into(), a.target, iterations, &a.run)?;
            Ok(CliCommand::SweepAlpha {
                base,
                alphas,
                output: output_spec(&a.run.out),
            })
        }
        Verb::SweepIterations(a) => {
            let base = run_config(a.ions, a.alpha, a.target, IterationPolicy::Auto, &a.run)?;
            Ok(CliCommand::SweepIterations {
                base,
                counts: a.iterations.values(),
                output: output_spec(&a.run.out),
            })
        }
    }
}

fn model_rows(
    sizes: &[usize],
    iterations: Option<&[usize]>,
    convention: Convention,
) -> Result<Vec<ModelRow>, CliError> {
    let mut rows = Vec::new();
    for &n in sizes {
        let theta = grover_angle(n)?;
        let (t_exact, t_rounded) = optimal_iterations(theta)?;
        let js: Vec<usize> = match iterations {
            Some(js) => js.to_vec(),
            None => (0..=t_rounded).collect(),
        };
        for j in js {
            let (a, b) = match convention {
                Convention::Normalized => model_amplitudes(n, j)?,
                Convention::UnitBranch => unnormalized_model_amplitudes(n, j)?,
            };
            let success_probability = model_amplitudes(n, j)?.0.powi(2);
            rows.push(ModelRow {
                n,
                j,
                theta,
                t_exact,
                t_rounded,
                a,
                b,
                success_probability,
            });
        }
    }
    Ok(rows)
}

/// Runs a validated command and builds its report.
pub fn execute(cmd: &CliCommand) -> Result<ReportDocument, CliError> {
    match cmd {
        CliCommand::Prepare { config, .. } => {
            let report = run_protocol(config)?;
            Ok(ReportDocument::Run(Box::new(RunReport::new(&report))))
        }
        CliCommand::EntangleOnly { config, target, .. } => {
            let (state, cutoff, tail_bound) = prepare_entangled(config)?;
            let sector_weights = state.register_weights();
            Ok(ReportDocument::Entangle(EntangleReport {
                schema_version: ENTANGLE_SCHEMA.to_string(),
                config: ConfigEcho::from_config(config),
                register_size: state.register_size(),
                cutoff,
                tail_bound,
                baseline_probability: target.map(|k| sector_weights[k]),
                sector_weights,
            }))
        }
        CliCommand::Model {
            sizes,
            iterations,
            convention,
            ..
        } => {
            let rows = model_rows(sizes, iterations.as_deref(), *convention)?;
            Ok(ReportDocument::Table(TableDocument::new(Rows::Model(rows))))
        }
        CliCommand::SweepAlpha { base, alphas, .. } => {
            let configs = alphas
                .iter()
                .map(|&a| ProtocolConfig {
                    alpha: a.into(),
                    ..*base
                })
                .collect();
            run_table(sweep::schedule(configs))
        }
        CliCommand::SweepIterations { base, counts, .. } => {
            let configs = counts
                .iter()
                .map(|&n| ProtocolConfig {
                    iterations: IterationPolicy::Fixed(n),
                    ..*base
                })
                .collect();
            run_table(sweep::schedule(configs))
        }
    }
}

fn run_table(configs: Vec<ProtocolConfig>) -> Result<ReportDocument, CliError> {
    let rows = sweep::run_all(&configs)?.iter().map(RunRow::new).collect();
    Ok(ReportDocument::Table(TableDocument::new(Rows::Runs(rows))))
}

/// Parses, executes and writes the report. Returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match try_run(argv) {
        Ok(()) => EXIT_OK,
        Err(CliError::Info(text)) => {
            print!("{text}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("trapcat: {e}");
            e.exit_code()
        }
    }
}

fn try_run<I, T>(argv: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cmd = parse_args(argv)?;
    let doc = execute(&cmd)?;
    let out = cmd.output();
    let text = doc.render(out.format).map_err(CliError::Io)?;
    match &out.path {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}
