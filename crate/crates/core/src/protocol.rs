//! The full preparation pipeline: product state, entangler, Grover run,
//! register measurement.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coupling::conditional_phase_unitary;
use crate::grover::{effective_angle, grover_run, AmplitudeTrace, GroverMode, GroverPlan};
use crate::hilbert::{
    fidelity, tensor_product, ElectronicState, JointState, StateVector, VibrationalState,
};
use crate::register::{apply_pi_half_pulses, fourier_matrix, FourierDirection, RegisterSpec};
use crate::states::{choose_cutoff, coherent_state, generalized_coherent, CoherentParam};
use crate::{Error, Result};

/// Tolerance on `|psi|^2 = 1` for inputs that must be normalized.
pub const NORM_TOLERANCE: f64 = 1e-9;
/// Norm drift that aborts a run.
pub const DRIFT_LIMIT: f64 = 1e-6;
/// Fock cutoff tolerance used when none is given.
pub const DEFAULT_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IterationPolicy {
    /// Nearest integer to `T` at the measured branch angle.
    #[default]
    Auto,
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CutoffPolicy {
    /// Smallest cutoff whose discarded coherent-state mass is below
    /// `epsilon`.
    Auto {
        epsilon: f64,
    },
    Fixed(usize),
}

impl Default for CutoffPolicy {
    fn default() -> Self {
        CutoffPolicy::Auto {
            epsilon: DEFAULT_EPSILON,
        }
    }
}

/// How the register readout is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    /// Draw an outcome from a ChaCha8 stream seeded with this value.
    Seeded(u64),
    /// Condition on the marked outcome.
    Postselect,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling::Seeded(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    pub ions: u32,
    pub alpha: Complex64,
    pub target: usize,
    pub mode: GroverMode,
    pub iterations: IterationPolicy,
    pub cutoff: CutoffPolicy,
    pub sampling: Sampling,
}

impl ProtocolConfig {
    pub fn new(ions: u32, alpha: Complex64, target: usize) -> Self {
        Self {
            ions,
            alpha,
            target,
            mode: GroverMode::default(),
            iterations: IterationPolicy::default(),
            cutoff: CutoffPolicy::default(),
            sampling: Sampling::default(),
        }
    }

    pub fn validate(&self) -> Result<RegisterSpec> {
        let spec = RegisterSpec::new(self.ions)?;
        if self.target >= spec.size() {
            return Err(Error::Index {
                index: self.target,
                bound: spec.size(),
            });
        }
        CoherentParam::new(self.alpha)?;
        match self.cutoff {
            CutoffPolicy::Auto { epsilon } if !(epsilon > 0.0 && epsilon < 1.0) => {
                return Err(Error::Parameter(alloc::format!(
                    "epsilon must lie in (0, 1), got {epsilon}"
                )));
            }
            CutoffPolicy::Fixed(c) if c + 1 < spec.size() => {
                return Err(Error::Configuration(alloc::format!(
                    "cutoff {c} leaves some of the {} register branches without a Fock level",
                    spec.size()
                )));
            }
            _ => {}
        }
        Ok(spec)
    }
}

/// `|0...0>_e ⊗ v`. `v` must be normalized.
pub fn initial_state(v: &VibrationalState, ions: u32) -> Result<JointState> {
    let norm = v.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::Parameter(alloc::format!(
            "vibrational input has squared norm {norm}, expected 1"
        )));
    }
    Ok(tensor_product(&ElectronicState::basis(ions, 0)?, v))
}

/// pi/2 pulses on every ion, the number-conditioned phase, then the
/// inverse Fourier transform on the register. On `|0>_e ⊗ sum_q C_q |q>`
/// this leaves `sum_q C_q |q mod N>_e ⊗ |q>`.
pub fn entangle(s: &JointState) -> Result<JointState> {
    let stray: f64 = (1..s.register_size()).map(|k| s.sector_norm_sqr(k)).sum();
    if stray > 0.0 {
        return Err(Error::ProtocolOrder(alloc::format!(
            "entangler expects the register in |0...0>, found weight {stray:e} elsewhere"
        )));
    }
    let spec = RegisterSpec::new(s.ions())?;
    let superposed = apply_pi_half_pulses(s);
    let coupled = conditional_phase_unitary(s.ions(), s.cutoff())?.apply(&superposed)?;
    coupled.apply_register_operator(&fourier_matrix(spec, FourierDirection::Inverse))
}

/// Squared norm of register sector `k0`.
pub fn success_probability(s: &JointState, k0: usize) -> Result<f64> {
    if k0 >= s.register_size() {
        return Err(Error::Index {
            index: k0,
            bound: s.register_size(),
        });
    }
    Ok(s.sector_norm_sqr(k0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measurement {
    Seeded(u64),
    Postselect(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    pub outcome: usize,
    pub probability: f64,
    /// Mode state conditioned on `outcome`, renormalized.
    pub collapsed: VibrationalState,
}

fn require_normalized(s: &JointState) -> Result<()> {
    let norm = s.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::Parameter(alloc::format!(
            "joint state has squared norm {norm}, expected 1"
        )));
    }
    Ok(())
}

fn collapse(s: &JointState, k: usize) -> Result<MeasurementOutcome> {
    let probability = s.sector_norm_sqr(k);
    if probability == 0.0 {
        return Err(Error::DegenerateMeasurement { outcome: k });
    }
    let collapsed = VibrationalState::new(s.sector(k).to_vec())?.normalized()?;
    Ok(MeasurementOutcome {
        outcome: k,
        probability,
        collapsed,
    })
}

/// Draws register outcomes from a fixed distribution with a reproducible
/// stream.
#[derive(Debug, Clone)]
pub struct RegisterSampler {
    cumulative: Vec<f64>,
    rng: ChaCha8Rng,
}

impl RegisterSampler {
    pub fn new(s: &JointState, seed: u64) -> Result<Self> {
        require_normalized(s)?;
        let mut acc = 0.0;
        let cumulative = s
            .register_weights()
            .into_iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        Ok(Self {
            cumulative,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn draw(&mut self) -> usize {
        let total = *self.cumulative.last().expect("register is never empty");
        let u: f64 = self.rng.gen::<f64>() * total;
        // first index whose cumulative weight exceeds u; zero-weight
        // outcomes can never be selected
        self.cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.cumulative.len() - 1)
    }

    /// Histogram of `draws` outcomes.
    pub fn counts(&mut self, draws: usize) -> Vec<u64> {
        let mut counts = alloc::vec![0u64; self.cumulative.len()];
        for _ in 0..draws {
            counts[self.draw()] += 1;
        }
        counts
    }
}

/// Projective measurement of the register.
pub fn measure_register(s: &JointState, how: Measurement) -> Result<MeasurementOutcome> {
    require_normalized(s)?;
    match how {
        Measurement::Postselect(k) => {
            if k >= s.register_size() {
                return Err(Error::Index {
                    index: k,
                    bound: s.register_size(),
                });
            }
            collapse(s, k)
        }
        Measurement::Seeded(seed) => {
            let k = RegisterSampler::new(s, seed)?.draw();
            collapse(s, k)
        }
    }
}

/// Everything a single run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub config: ProtocolConfig,
    pub register_size: usize,
    /// `arcsin(sqrt(p_k0))` from the entangled state's sector weights.
    pub theta_effective: f64,
    pub t_exact: f64,
    pub t_rounded: usize,
    pub iterations: usize,
    /// Probability of the marked outcome with no Grover iterations.
    pub baseline_probability: f64,
    pub success_probability: f64,
    pub outcome: usize,
    pub outcome_probability: f64,
    /// Fidelity of the collapsed mode state with `|alpha, N, k0>`.
    pub fidelity_to_target: f64,
    pub sector_weights: Vec<f64>,
    pub trace: AmplitudeTrace,
    pub cutoff: usize,
    /// Coherent-state mass discarded by the cutoff before renormalizing.
    pub tail_bound: f64,
    pub collapsed: VibrationalState,
}

fn check_drift(s: &JointState) -> Result<()> {
    let drift = s.norm_drift();
    if drift > DRIFT_LIMIT {
        return Err(Error::NumericalIntegrity { drift });
    }
    Ok(())
}

pub fn resolve_cutoff(cfg: &ProtocolConfig) -> Result<usize> {
    let spec = cfg.validate()?;
    let min = spec.size() - 1;
    match cfg.cutoff {
        CutoffPolicy::Auto { epsilon } => {
            Ok(choose_cutoff(CoherentParam::new(cfg.alpha)?, epsilon)?.max(min))
        }
        CutoffPolicy::Fixed(c) => Ok(c),
    }
}

/// Coherent input at the resolved cutoff, entangled with the register.
/// Returns the entangled state and the discarded tail mass.
pub fn prepare_entangled(cfg: &ProtocolConfig) -> Result<(JointState, usize, f64)> {
    let alpha = CoherentParam::new(cfg.alpha)?;
    let cutoff = resolve_cutoff(cfg)?;
    let raw = coherent_state(alpha, cutoff);
    let tail = raw.tail_bound();
    if tail > DRIFT_LIMIT {
        return Err(Error::NumericalIntegrity { drift: tail });
    }
    let v = raw.normalized()?;
    let entangled = entangle(&initial_state(&v, cfg.ions)?)?;
    check_drift(&entangled)?;
    Ok((entangled, cutoff, tail))
}

pub fn run_protocol(cfg: &ProtocolConfig) -> Result<SimulationReport> {
    let spec = cfg.validate()?;
    let size = spec.size();
    let k0 = cfg.target;
    let alpha = CoherentParam::new(cfg.alpha)?;

    let (entangled, cutoff, tail_bound) = prepare_entangled(cfg)?;
    let sector_weights = entangled.register_weights();
    let baseline = sector_weights[k0];
    if baseline == 0.0 {
        return Err(Error::DegenerateMeasurement { outcome: k0 });
    }

    let theta = effective_angle(baseline)?;
    let plan = GroverPlan::with_angle(size, k0, cfg.mode, theta)?;
    let count = match cfg.iterations {
        IterationPolicy::Auto => plan.t_rounded(),
        IterationPolicy::Fixed(n) => n,
    };
    let (amplified, trace) = grover_run(&entangled, &plan, count)?;
    if let Some(bad) = trace
        .records
        .iter()
        .find(|r| (r.norm_sqr - 1.0).abs() > DRIFT_LIMIT)
    {
        return Err(Error::NumericalIntegrity {
            drift: (bad.norm_sqr - 1.0).abs(),
        });
    }

    let how = match cfg.sampling {
        Sampling::Postselect => Measurement::Postselect(k0),
        Sampling::Seeded(seed) => Measurement::Seeded(seed),
    };
    let measured = measure_register(&amplified, how)?;
    let target = generalized_coherent(alpha, size, k0, cutoff)?;
    let fidelity_to_target = fidelity(&measured.collapsed, &target)?;

    Ok(SimulationReport {
        config: *cfg,
        register_size: size,
        theta_effective: theta,
        t_exact: plan.t_exact(),
        t_rounded: plan.t_rounded(),
        iterations: count,
        baseline_probability: baseline,
        success_probability: amplified.sector_norm_sqr(k0),
        outcome: measured.outcome,
        outcome_probability: measured.probability,
        fidelity_to_target,
        sector_weights,
        trace,
        cutoff,
        tail_bound,
        collapsed: measured.collapsed,
    })
}
