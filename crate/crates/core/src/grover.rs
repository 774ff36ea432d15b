//! Grover amplification of one register branch.
//!
//! An iteration is a sign flip of register sector `k0` followed by an
//! inversion about the average. The inversion matrix
//! `D_ij = 2/N - delta_ij` can act in three places, selected by
//! [`GroverMode`]:
//!
//! * over the `N` entangled branches `|k> ⊗ |tag_k>`, where `tag_k` is the
//!   normalized sector `k` of the state the run started from;
//! * as the reflection `2|psi><psi| - 1` about the starting state itself;
//! * on the register alone, `D ⊗ 1`.
//!
//! Only the first two amplify. With the register-only reading every Fock
//! column evolves under the same `N × N` unitary and the orthogonal
//! vibrational tags keep the branches from interfering.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
// shadowed by the inherent f64 methods whenever std is in the build
#[allow(unused_imports)]
use num_traits::Float;

use crate::hilbert::{DenseMatrix, JointState, StateVector};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GroverMode {
    /// `D` over the entangled branches of the starting state.
    #[default]
    CorrelatedDiffusion,
    /// Reflection about the starting state.
    AmplitudeAmplification,
    /// `D` on the register only.
    ElectronicDiffusion,
    /// The branch-space recursion alone, with no vibrational amplitudes.
    IdealModel,
}

impl GroverMode {
    pub const ALL: [GroverMode; 4] = [
        GroverMode::CorrelatedDiffusion,
        GroverMode::AmplitudeAmplification,
        GroverMode::ElectronicDiffusion,
        GroverMode::IdealModel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GroverMode::CorrelatedDiffusion => "correlated-diffusion",
            GroverMode::AmplitudeAmplification => "amplitude-amplification",
            GroverMode::ElectronicDiffusion => "electronic-diffusion",
            GroverMode::IdealModel => "ideal-model",
        }
    }
}

impl fmt::Display for GroverMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroverMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GroverMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parameter(alloc::format!("unknown Grover mode '{s}'")))
    }
}

/// `arcsin(1 / sqrt(N))`.
pub fn grover_angle(register_size: usize) -> Result<f64> {
    if register_size < 2 {
        return Err(Error::Parameter(alloc::format!(
            "Grover search needs N >= 2, got {register_size}"
        )));
    }
    Ok((1.0 / (register_size as f64).sqrt()).asin())
}

/// `arcsin(sqrt(p))` for a branch carrying probability `p`.
pub fn effective_angle(weight: f64) -> Result<f64> {
    if !(weight > 0.0 && weight <= 1.0 + 1e-12) {
        return Err(Error::Parameter(alloc::format!(
            "marked branch weight must be in (0, 1], got {weight}"
        )));
    }
    Ok(weight.min(1.0).sqrt().asin())
}

/// `T = (pi - 2 theta) / (4 theta)` and the nearest integer to it, ties
/// rounded up. Values within `1e-9` of a half integer count as ties.
pub fn optimal_iterations(theta: f64) -> Result<(f64, usize)> {
    if !(theta > 0.0 && theta <= PI / 2.0 + 1e-15) {
        return Err(Error::Parameter(alloc::format!(
            "Grover angle must be in (0, pi/2], got {theta}"
        )));
    }
    let exact = (PI - 2.0 * theta) / (4.0 * theta);
    let rounded = (exact + 0.5 + 1e-9).floor().max(0.0) as usize;
    Ok((exact, rounded))
}

/// Branch amplitudes after `j` iterations from the uniform state, in the
/// normalized convention: `a = sin((2j+1) theta)`,
/// `b = cos((2j+1) theta) / sqrt(N-1)`, so `a^2 + (N-1) b^2 = 1`.
pub fn model_amplitudes(register_size: usize, j: usize) -> Result<(f64, f64)> {
    let theta = grover_angle(register_size)?;
    let phase = (2 * j + 1) as f64 * theta;
    Ok((
        phase.sin(),
        phase.cos() / ((register_size - 1) as f64).sqrt(),
    ))
}

/// The same recursion written against unit-coefficient branches:
/// `a = sqrt(N) sin((2j+1) theta)`, `b = sqrt((N-1)/N) cos((2j+1) theta)`.
pub fn unnormalized_model_amplitudes(register_size: usize, j: usize) -> Result<(f64, f64)> {
    let theta = grover_angle(register_size)?;
    let phase = (2 * j + 1) as f64 * theta;
    let n = register_size as f64;
    Ok((n.sqrt() * phase.sin(), ((n - 1.0) / n).sqrt() * phase.cos()))
}

/// Inversion about the average, `D_ij = 2/N - delta_ij`.
pub fn diffusion_matrix(register_size: usize) -> DenseMatrix {
    let off = 2.0 / register_size as f64;
    DenseMatrix::from_fn(register_size, register_size, |r, c| {
        Complex64::new(if r == c { off - 1.0 } else { off }, 0.0)
    })
}

/// Marked index, register size, angle and iteration count for one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroverPlan {
    k0: usize,
    register_size: usize,
    theta: f64,
    t_exact: f64,
    t_rounded: usize,
    mode: GroverMode,
}

impl GroverPlan {
    /// Plan from the uniform-branch angle `arcsin(1/sqrt(N))`.
    pub fn new(register_size: usize, k0: usize, mode: GroverMode) -> Result<Self> {
        Self::with_angle(register_size, k0, mode, grover_angle(register_size)?)
    }

    /// Plan from an explicit angle, e.g. one measured from sector weights.
    pub fn with_angle(
        register_size: usize,
        k0: usize,
        mode: GroverMode,
        theta: f64,
    ) -> Result<Self> {
        if register_size < 2 {
            return Err(Error::Parameter("Grover search needs N >= 2".into()));
        }
        if k0 >= register_size {
            return Err(Error::Index {
                index: k0,
                bound: register_size,
            });
        }
        let (t_exact, t_rounded) = optimal_iterations(theta)?;
        Ok(Self {
            k0,
            register_size,
            theta,
            t_exact,
            t_rounded,
            mode,
        })
    }

    pub fn k0(&self) -> usize {
        self.k0
    }

    pub fn register_size(&self) -> usize {
        self.register_size
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn t_exact(&self) -> f64 {
        self.t_exact
    }

    pub fn t_rounded(&self) -> usize {
        self.t_rounded
    }

    pub fn mode(&self) -> GroverMode {
        self.mode
    }

    pub fn with_mode(self, mode: GroverMode) -> Self {
        Self { mode, ..self }
    }
}

/// Flips the sign of register sector `k0`.
pub fn oracle_apply(s: &JointState, k0: usize) -> Result<JointState> {
    let size = s.register_size();
    if k0 >= size {
        return Err(Error::Index {
            index: k0,
            bound: size,
        });
    }
    let mut out = s.clone();
    for a in out.sector_mut(k0) {
        *a = -*a;
    }
    Ok(out)
}

/// Orthonormal branch vectors `|k> ⊗ |tag_k>` taken from a reference state.
#[derive(Debug, Clone)]
struct BranchBasis {
    tags: Vec<Vec<Complex64>>,
}

impl BranchBasis {
    /// Sectors with no weight get the Fock tag `|k>`, which lies in the
    /// same residue class the entangler would have put there.
    fn from_context(ctx: &JointState) -> Result<Self> {
        let levels = ctx.levels();
        let tags = (0..ctx.register_size())
            .map(|k| {
                let norm = ctx.sector_norm_sqr(k);
                if norm > 0.0 {
                    let inv = 1.0 / norm.sqrt();
                    Ok(ctx.sector(k).iter().map(|a| a * inv).collect())
                } else if k < levels {
                    let mut tag = vec![ZERO; levels];
                    tag[k] = Complex64::new(1.0, 0.0);
                    Ok(tag)
                } else {
                    Err(Error::Configuration(alloc::format!(
                        "branch {k} is empty and cutoff {} cannot hold a substitute",
                        ctx.cutoff()
                    )))
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self { tags })
    }

    fn coords(&self, s: &JointState) -> Vec<Complex64> {
        self.tags
            .iter()
            .enumerate()
            .map(|(k, tag)| tag.iter().zip(s.sector(k)).map(|(t, a)| t.conj() * a).sum())
            .collect()
    }

    /// Moves the branch coordinates of `s` from `old` to `new`, leaving the
    /// orthogonal complement alone.
    fn shift(&self, s: &mut JointState, old: &[Complex64], new: &[Complex64]) {
        for (k, tag) in self.tags.iter().enumerate() {
            let delta = new[k] - old[k];
            if delta == ZERO {
                continue;
            }
            for (a, t) in s.sector_mut(k).iter_mut().zip(tag) {
                *a += delta * t;
            }
        }
    }
}

/// `D c` without forming the matrix.
fn invert_about_mean(c: &mut [Complex64]) {
    let mean: Complex64 = c.iter().sum::<Complex64>() * (2.0 / c.len() as f64);
    for x in c.iter_mut() {
        *x = mean - *x;
    }
}

enum Diffuser {
    Branches(BranchBasis),
    Reflection(Vec<Complex64>),
    Register,
}

impl Diffuser {
    fn build(s_shape: &JointState, mode: GroverMode, context: Option<&JointState>) -> Result<Self> {
        let need_context = || {
            let ctx = context.ok_or_else(|| {
                Error::Configuration(alloc::format!("{mode} diffusion needs the initial state"))
            })?;
            if (ctx.ions(), ctx.cutoff()) != (s_shape.ions(), s_shape.cutoff()) {
                return Err(Error::Dimension {
                    expected: s_shape.amps().len(),
                    found: ctx.amps().len(),
                });
            }
            Ok(ctx)
        };
        match mode {
            GroverMode::CorrelatedDiffusion | GroverMode::IdealModel => Ok(Diffuser::Branches(
                BranchBasis::from_context(need_context()?)?,
            )),
            GroverMode::AmplitudeAmplification => {
                let ctx = need_context()?;
                let norm = ctx.norm_sqr();
                if norm == 0.0 {
                    return Err(Error::DegenerateState);
                }
                let inv = 1.0 / norm.sqrt();
                Ok(Diffuser::Reflection(
                    ctx.amps().iter().map(|a| a * inv).collect(),
                ))
            }
            GroverMode::ElectronicDiffusion => Ok(Diffuser::Register),
        }
    }

    fn apply(&self, s: &mut JointState) {
        match self {
            Diffuser::Branches(basis) => {
                let old = basis.coords(s);
                let mut new = old.clone();
                invert_about_mean(&mut new);
                basis.shift(s, &old, &new);
            }
            Diffuser::Reflection(psi) => {
                let overlap: Complex64 = psi.iter().zip(s.amps()).map(|(p, a)| p.conj() * a).sum();
                for (a, p) in s.amps_mut().iter_mut().zip(psi) {
                    *a = 2.0 * overlap * p - *a;
                }
            }
            Diffuser::Register => {
                let size = s.register_size();
                let levels = s.levels();
                let scale = 2.0 / size as f64;
                let amps = s.amps_mut();
                for n in 0..levels {
                    let total: Complex64 = (0..size).map(|k| amps[k * levels + n]).sum();
                    for k in 0..size {
                        let a = &mut amps[k * levels + n];
                        *a = total * scale - *a;
                    }
                }
            }
        }
    }
}

/// One inversion about the average under `plan.mode()`. The correlated and
/// amplitude-amplification modes need the state the run started from.
pub fn diffusion_apply(
    s: &JointState,
    plan: &GroverPlan,
    context: Option<&JointState>,
) -> Result<JointState> {
    if plan.mode() == GroverMode::IdealModel {
        return Err(Error::Configuration(
            "ideal-model mode has no joint-space diffusion; use grover_run or ideal_run".into(),
        ));
    }
    if s.register_size() != plan.register_size() {
        return Err(Error::Dimension {
            expected: plan.register_size(),
            found: s.register_size(),
        });
    }
    let diffuser = Diffuser::build(s, plan.mode(), context)?;
    let mut out = s.clone();
    diffuser.apply(&mut out);
    Ok(out)
}

/// Branch magnitudes and success probability after `iteration` steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    /// `sqrt` of the probability in sector `k0`.
    pub marked: f64,
    /// Root-mean-square magnitude of the other `N - 1` sectors, so that
    /// `marked^2 + (N-1) unmarked^2` is the squared norm.
    pub unmarked: f64,
    pub success_probability: f64,
    pub norm_sqr: f64,
}

impl TraceRecord {
    fn measure(iteration: usize, weights: &[f64], k0: usize) -> Self {
        let total: f64 = weights.iter().sum();
        let marked = weights[k0];
        let rest = (total - marked).max(0.0);
        Self {
            iteration,
            marked: marked.sqrt(),
            unmarked: (rest / (weights.len() - 1) as f64).sqrt(),
            success_probability: marked,
            norm_sqr: total,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AmplitudeTrace {
    pub records: Vec<TraceRecord>,
}

impl AmplitudeTrace {
    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Runs `count` Grover iterations starting from `s`, which also serves as
/// the reference state for the diffusion. The trace has `count + 1`
/// records, the first describing `s` itself.
pub fn grover_run(
    s: &JointState,
    plan: &GroverPlan,
    count: usize,
) -> Result<(JointState, AmplitudeTrace)> {
    if s.register_size() != plan.register_size() {
        return Err(Error::Dimension {
            expected: plan.register_size(),
            found: s.register_size(),
        });
    }
    let k0 = plan.k0();
    let mut trace = AmplitudeTrace {
        records: Vec::with_capacity(count + 1),
    };
    trace
        .records
        .push(TraceRecord::measure(0, &s.register_weights(), k0));

    if plan.mode() == GroverMode::IdealModel {
        let basis = BranchBasis::from_context(s)?;
        let start = basis.coords(s);
        let mut coords = start.clone();
        let residual: Vec<f64> = (0..s.register_size())
            .map(|k| (s.sector_norm_sqr(k) - start[k].norm_sqr()).max(0.0))
            .collect();
        for j in 1..=count {
            coords[k0] = -coords[k0];
            invert_about_mean(&mut coords);
            let weights: Vec<f64> = coords
                .iter()
                .zip(&residual)
                .map(|(c, r)| c.norm_sqr() + r)
                .collect();
            trace.records.push(TraceRecord::measure(j, &weights, k0));
        }
        // complement of the branch span keeps its weight and only collects
        // the oracle sign on sector k0
        let zeros = vec![ZERO; coords.len()];
        let mut out = s.clone();
        basis.shift(&mut out, &start, &zeros);
        if count % 2 == 1 {
            for a in out.sector_mut(k0) {
                *a = -*a;
            }
        }
        basis.shift(&mut out, &zeros, &coords);
        return Ok((out, trace));
    }

    let diffuser = Diffuser::build(s, plan.mode(), Some(s))?;
    let mut state = s.clone();
    for j in 1..=count {
        for a in state.sector_mut(k0) {
            *a = -*a;
        }
        diffuser.apply(&mut state);
        trace
            .records
            .push(TraceRecord::measure(j, &state.register_weights(), k0));
    }
    Ok((state, trace))
}

/// The `N`-dimensional recursion on branch amplitudes alone. Returns the
/// success probability `|c_k0|^2` after each of `0..=count` iterations and
/// the final amplitudes.
pub fn ideal_run(
    initial: &[Complex64],
    k0: usize,
    count: usize,
) -> Result<(Vec<f64>, Vec<Complex64>)> {
    if initial.len() < 2 {
        return Err(Error::Parameter("Grover search needs N >= 2".into()));
    }
    if k0 >= initial.len() {
        return Err(Error::Index {
            index: k0,
            bound: initial.len(),
        });
    }
    let mut c = initial.to_vec();
    let mut probs = Vec::with_capacity(count + 1);
    probs.push(c[k0].norm_sqr());
    for _ in 0..count {
        c[k0] = -c[k0];
        invert_about_mean(&mut c);
        probs.push(c[k0].norm_sqr());
    }
    Ok((probs, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{tensor_product, VibrationalState};
    use crate::register::{uniform_superposition, RegisterSpec};

    /// Branch-correlated state `sum_k c_k |k> ⊗ |k>` at the given cutoff.
    fn diagonal_state(ions: u32, cutoff: usize, c: &[Complex64]) -> JointState {
        let mut s = JointState::zeros(ions, cutoff).unwrap();
        for (k, ck) in c.iter().enumerate() {
            s.sector_mut(k)[k] = *ck;
        }
        s
    }

    fn equal_weight(ions: u32) -> JointState {
        let n = 1usize << ions;
        diagonal_state(
            ions,
            n + 3,
            &vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n],
        )
    }

    #[test]
    fn angles() {
        assert!((grover_angle(4).unwrap() - PI / 6.0).abs() < 1e-15);
        assert!((grover_angle(2).unwrap() - PI / 4.0).abs() < 1e-15);
        assert!((grover_angle(16).unwrap() - 0.25f64.asin()).abs() < 1e-16);
        assert!((grover_angle(16).unwrap() - 0.2526802551420786).abs() < 1e-15);
        assert!(grover_angle(1).is_err());
        assert!(grover_angle(0).is_err());
        for n in [2usize, 3, 4, 16, 64] {
            let th = grover_angle(n).unwrap();
            assert!((th.sin() - 1.0 / (n as f64).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn iteration_counts() {
        let (t, r) = optimal_iterations(grover_angle(4).unwrap()).unwrap();
        assert!((t - 1.0).abs() < 1e-12);
        assert_eq!(r, 1);
        let (t, r) = optimal_iterations(grover_angle(2).unwrap()).unwrap();
        assert!((t - 0.5).abs() < 1e-12);
        assert_eq!(r, 1);
        let (t, r) = optimal_iterations(grover_angle(16).unwrap()).unwrap();
        assert!((t - 2.6083).abs() < 1e-3);
        assert_eq!(r, 3);
        assert_eq!(optimal_iterations(PI / 2.0).unwrap(), (0.0, 0));
        assert!(optimal_iterations(0.0).is_err());
        assert!(optimal_iterations(2.0).is_err());
    }

    #[test]
    fn model_values() {
        let (a, b) = model_amplitudes(4, 1).unwrap();
        assert!((a - 1.0).abs() < 1e-15 && b.abs() < 1e-15);
        let (a, b) = model_amplitudes(4, 0).unwrap();
        assert!((a - 0.5).abs() < 1e-15 && (b - 0.5).abs() < 1e-15);
        let (a, _) = model_amplitudes(16, 3).unwrap();
        assert!((a - 0.9805).abs() < 1e-4);
        for n in [2usize, 5, 16] {
            for j in 0..6 {
                let (a, b) = model_amplitudes(n, j).unwrap();
                assert!((a * a + (n - 1) as f64 * b * b - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn unnormalized_convention_starts_at_unit_branches() {
        let (a, b) = unnormalized_model_amplitudes(8, 0).unwrap();
        assert!((a - 1.0).abs() < 1e-14);
        assert!((b - (7.0f64 / 8.0)).abs() < 1e-14);
    }

    #[test]
    fn mode_names_round_trip() {
        for m in GroverMode::ALL {
            assert_eq!(m.name().parse::<GroverMode>().unwrap(), m);
        }
        assert!("grover".parse::<GroverMode>().is_err());
    }

    #[test]
    fn diffusion_matrix_is_unitary_and_fixes_uniform() {
        for n in [2usize, 4, 8, 16] {
            let d = diffusion_matrix(n);
            assert!(d.unitarity_defect().unwrap() < 1e-12);
            let u = vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n];
            let du = d.apply(&u).unwrap();
            for (x, y) in du.iter().zip(&u) {
                assert!((x - y).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn oracle_is_an_involution() {
        let s = tensor_product(
            &uniform_superposition(RegisterSpec::new(2).unwrap()),
            &VibrationalState::fock(1, 4).unwrap(),
        );
        let once = oracle_apply(&s, 2).unwrap();
        assert_eq!(once.amp(2, 1), -s.amp(2, 1));
        assert_eq!(once.amp(1, 1), s.amp(1, 1));
        assert_eq!(oracle_apply(&once, 2).unwrap(), s);
        assert!(oracle_apply(&s, 4).is_err());
    }

    #[test]
    fn diffusion_needs_context() {
        let s = equal_weight(2);
        for mode in [
            GroverMode::CorrelatedDiffusion,
            GroverMode::AmplitudeAmplification,
        ] {
            let plan = GroverPlan::new(4, 0, mode).unwrap();
            assert!(matches!(
                diffusion_apply(&s, &plan, None),
                Err(Error::Configuration(_))
            ));
        }
        let plan = GroverPlan::new(4, 0, GroverMode::ElectronicDiffusion).unwrap();
        assert!(diffusion_apply(&s, &plan, None).is_ok());
        let plan = GroverPlan::new(4, 0, GroverMode::IdealModel).unwrap();
        assert!(diffusion_apply(&s, &plan, Some(&s)).is_err());
    }

    #[test]
    fn correlated_diffusion_fixes_uniform_branches() {
        let s = equal_weight(3);
        let plan = GroverPlan::new(8, 5, GroverMode::CorrelatedDiffusion).unwrap();
        let out = diffusion_apply(&s, &plan, Some(&s)).unwrap();
        for (a, b) in out.amps().iter().zip(s.amps()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_iterations_leave_state_alone() {
        let s = equal_weight(2);
        let plan = GroverPlan::new(4, 1, GroverMode::CorrelatedDiffusion).unwrap();
        let (out, trace) = grover_run(&s, &plan, 0).unwrap();
        assert_eq!(out, s);
        assert_eq!(trace.len(), 1);
        assert_eq!(trace.records[0].iteration, 0);
    }

    #[test]
    fn n4_single_iteration_is_exact() {
        let s = equal_weight(2);
        for mode in [
            GroverMode::CorrelatedDiffusion,
            GroverMode::AmplitudeAmplification,
            GroverMode::IdealModel,
        ] {
            for k0 in 0..4 {
                let plan = GroverPlan::new(4, k0, mode).unwrap();
                let (_, trace) = grover_run(&s, &plan, 1).unwrap();
                assert!(
                    (trace.last().unwrap().success_probability - 1.0).abs() < 1e-12,
                    "{mode}"
                );
            }
        }
    }

    #[test]
    fn explicit_matrix_iteration_matches_run() {
        // G = D O as a dense 4x4, applied to the uniform vector.
        let n = 4;
        let d = diffusion_matrix(n);
        let mut o = DenseMatrix::identity(n);
        o.set(3, 3, Complex64::new(-1.0, 0.0));
        let g = d.matmul(&o).unwrap();
        let u = vec![Complex64::new(0.5, 0.0); n];
        let after = g.apply(&u).unwrap();
        assert!((after[3].norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ideal_run_matches_closed_form() {
        for n in [4usize, 8, 16] {
            let u = vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n];
            let (probs, _) = ideal_run(&u, 1, 8).unwrap();
            for (j, p) in probs.iter().enumerate() {
                let (a, _) = model_amplitudes(n, j).unwrap();
                assert!((p - a * a).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ideal_mode_state_matches_correlated_mode() {
        let c: Vec<Complex64> = [0.3, 0.5, 0.6, 0.2]
            .iter()
            .map(|x| Complex64::new(*x, 0.1))
            .collect();
        let norm: f64 = c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let c: Vec<_> = c.iter().map(|x| x / norm).collect();
        let s = diagonal_state(2, 6, &c);
        for count in 0..5 {
            let ideal = GroverPlan::new(4, 2, GroverMode::IdealModel).unwrap();
            let corr = ideal.with_mode(GroverMode::CorrelatedDiffusion);
            let (a, ta) = grover_run(&s, &ideal, count).unwrap();
            let (b, tb) = grover_run(&s, &corr, count).unwrap();
            for (x, y) in a.amps().iter().zip(b.amps()) {
                assert!((x - y).norm() < 1e-12);
            }
            for (x, y) in ta.records.iter().zip(&tb.records) {
                assert!((x.success_probability - y.success_probability).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn register_only_diffusion_is_inert_for_equal_weights() {
        for ions in 1..=3 {
            let n = 1usize << ions;
            let s = equal_weight(ions);
            let plan = GroverPlan::new(n, 0, GroverMode::ElectronicDiffusion).unwrap();
            let (_, trace) = grover_run(&s, &plan, 10).unwrap();
            for r in &trace.records {
                assert!((r.success_probability - 1.0 / n as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn empty_branch_gets_fock_tag() {
        let s = diagonal_state(1, 3, &[Complex64::new(1.0, 0.0), ZERO]);
        let plan = GroverPlan::new(2, 1, GroverMode::CorrelatedDiffusion).unwrap();
        let (out, trace) = grover_run(&s, &plan, 1).unwrap();
        // D for N = 2 swaps the two branches.
        assert!((trace.last().unwrap().success_probability - 1.0).abs() < 1e-15);
        assert!((out.amp(1, 1) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn plan_validation() {
        assert!(GroverPlan::new(4, 4, GroverMode::CorrelatedDiffusion).is_err());
        assert!(GroverPlan::with_angle(4, 0, GroverMode::CorrelatedDiffusion, 0.0).is_err());
        let p = GroverPlan::with_angle(4, 0, GroverMode::AmplitudeAmplification, 0.5).unwrap();
        assert_eq!(p.mode(), GroverMode::AmplitudeAmplification);
        assert_eq!(p.theta(), 0.5);
    }
}
