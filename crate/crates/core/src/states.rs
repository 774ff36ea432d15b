//! Vibrational states of interest: coherent states, their residue-class
//! components `|alpha, N, k>`, and the phase superpositions of rotated
//! coherent states that those components are proportional to.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
// shadowed by the inherent f64 methods whenever std is in the build
#[allow(unused_imports)]
use num_traits::Float;

use crate::hilbert::{apply_annihilation_power, StateVector, VibrationalState};
use crate::{Error, Result};

/// Smallest cutoff `choose_cutoff` ever returns.
pub const MIN_CUTOFF: usize = 16;

/// Coherent displacement `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentParam(Complex64);

impl CoherentParam {
    pub fn new(alpha: Complex64) -> Result<Self> {
        if alpha.re.is_finite() && alpha.im.is_finite() {
            Ok(Self(alpha))
        } else {
            Err(Error::NonFinite)
        }
    }

    /// Real displacement. Panics on a non-finite value.
    pub fn real(alpha: f64) -> Self {
        Self::new(Complex64::new(alpha, 0.0)).expect("finite alpha")
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }

    /// `|alpha|^2`, the mean phonon number.
    pub fn intensity(&self) -> f64 {
        self.0.norm_sqr()
    }
}

/// `ln(n!)` for `n = 0..len`, by cumulative sums of logarithms.
fn ln_factorials(len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut acc = 0.0;
    for n in 0..len {
        if n > 1 {
            acc += (n as f64).ln();
        }
        out.push(acc);
    }
    out
}

/// Poisson weights `e^{-x} x^n / n!` for `n = 0..len`.
fn poisson_weights(intensity: f64, len: usize) -> Vec<f64> {
    if intensity == 0.0 {
        let mut w = vec![0.0; len];
        if len > 0 {
            w[0] = 1.0;
        }
        return w;
    }
    let ln_x = intensity.ln();
    ln_factorials(len)
        .into_iter()
        .enumerate()
        .map(|(n, lf)| (-intensity + n as f64 * ln_x - lf).exp())
        .collect()
}

/// Number of Poisson terms summed when measuring tails; the mass past this
/// point is far below double precision for any alpha the dense simulator
/// can hold.
fn tail_horizon(intensity: f64) -> usize {
    (intensity + 20.0 * intensity.sqrt() + 200.0).ceil() as usize
}

/// `sum_{n > cutoff} e^{-|alpha|^2} |alpha|^{2n} / n!`, summed directly from
/// the far end so small terms are not swamped.
pub fn poisson_tail(alpha: CoherentParam, cutoff: usize) -> f64 {
    let x = alpha.intensity();
    let horizon = tail_horizon(x).max(cutoff + 2);
    let w = poisson_weights(x, horizon);
    w[cutoff + 1..].iter().rev().sum()
}

/// Smallest cutoff whose discarded Poisson tail is below `epsilon`, never
/// below [`MIN_CUTOFF`].
pub fn choose_cutoff(alpha: CoherentParam, epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Parameter(alloc::format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    let x = alpha.intensity();
    let horizon = tail_horizon(x);
    let w = poisson_weights(x, horizon + 1);
    // suffix[n] = sum_{i >= n} w[i]
    let mut suffix = vec![0.0; w.len() + 1];
    for n in (0..w.len()).rev() {
        suffix[n] = suffix[n + 1] + w[n];
    }
    let found = (0..horizon)
        .find(|&n_max| suffix[n_max + 1] < epsilon)
        .unwrap_or(horizon);
    Ok(found.max(MIN_CUTOFF))
}

/// `amps[n] = e^{-|alpha|^2/2} alpha^n / sqrt(n!)` restricted to levels
/// selected by `keep`.
fn coherent_amplitudes(
    alpha: CoherentParam,
    cutoff: usize,
    keep: impl Fn(usize) -> bool,
) -> Vec<Complex64> {
    let a = alpha.value();
    let x = alpha.intensity();
    if x == 0.0 {
        let mut amps = vec![Complex64::new(0.0, 0.0); cutoff + 1];
        if keep(0) {
            amps[0] = Complex64::new(1.0, 0.0);
        }
        return amps;
    }
    let (ln_r, phase) = (a.norm().ln(), a.arg());
    ln_factorials(cutoff + 1)
        .into_iter()
        .enumerate()
        .map(|(n, lf)| {
            if !keep(n) {
                return Complex64::new(0.0, 0.0);
            }
            let magnitude = (-0.5 * x + n as f64 * ln_r - 0.5 * lf).exp();
            Complex64::from_polar(magnitude, n as f64 * phase)
        })
        .collect()
}

/// Coherent state `|alpha>` truncated at `cutoff`; the discarded Poisson
/// mass is recorded as the tail bound.
pub fn coherent_state(alpha: CoherentParam, cutoff: usize) -> VibrationalState {
    let amps = coherent_amplitudes(alpha, cutoff, |_| true);
    VibrationalState::with_tail(amps, poisson_tail(alpha, cutoff)).expect("finite amplitudes")
}

/// Unnormalized component `|alpha, N, k>`: the coherent amplitudes on
/// Fock levels `k, k + N, k + 2N, ...`.
pub fn generalized_coherent(
    alpha: CoherentParam,
    modulus: usize,
    k: usize,
    cutoff: usize,
) -> Result<VibrationalState> {
    if modulus == 0 {
        return Err(Error::Parameter("modulus must be at least 1".into()));
    }
    if k >= modulus {
        return Err(Error::Index {
            index: k,
            bound: modulus,
        });
    }
    if cutoff < k {
        return Err(Error::Parameter(alloc::format!(
            "cutoff {cutoff} cannot hold residue class {k}"
        )));
    }
    let amps = coherent_amplitudes(alpha, cutoff, |n| n % modulus == k);
    VibrationalState::with_tail(amps, poisson_tail(alpha, cutoff))
}

/// Probability carried by each residue class `k mod N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorWeights {
    modulus: usize,
    weights: Vec<f64>,
}

impl SectorWeights {
    pub fn from_weights(weights: Vec<f64>) -> Self {
        Self {
            modulus: weights.len(),
            weights,
        }
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn get(&self, k: usize) -> f64 {
        self.weights[k]
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }
}

pub fn sector_weights(v: &VibrationalState, modulus: usize) -> Result<SectorWeights> {
    if modulus == 0 {
        return Err(Error::Parameter("modulus must be at least 1".into()));
    }
    let mut weights = vec![0.0; modulus];
    for (n, a) in v.amps().iter().enumerate() {
        weights[n % modulus] += a.norm_sqr();
    }
    Ok(SectorWeights { modulus, weights })
}

/// Splits `v` into `N` pieces with disjoint support, piece `k` keeping the
/// levels congruent to `k`. The pieces add back to `v` exactly.
pub fn residue_decompose(v: &VibrationalState, modulus: usize) -> Result<Vec<VibrationalState>> {
    if modulus == 0 {
        return Err(Error::Parameter("modulus must be at least 1".into()));
    }
    let zero = Complex64::new(0.0, 0.0);
    (0..modulus)
        .map(|k| {
            let amps = v
                .amps()
                .iter()
                .enumerate()
                .map(|(n, a)| if n % modulus == k { *a } else { zero })
                .collect();
            VibrationalState::with_tail(amps, v.tail_bound())
        })
        .collect()
}

/// `sum_{j<N} omega^{-j k0} |omega^j alpha>` with `omega = e^{2 pi i / N}`,
/// unnormalized. For `N = 2` these are the even and odd cat states.
pub fn multi_component_cat(
    alpha: CoherentParam,
    modulus: usize,
    k0: usize,
    cutoff: usize,
) -> Result<VibrationalState> {
    if modulus == 0 {
        return Err(Error::Parameter("modulus must be at least 1".into()));
    }
    if k0 >= modulus {
        return Err(Error::Index {
            index: k0,
            bound: modulus,
        });
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); cutoff + 1];
    for j in 0..modulus {
        let turn = 2.0 * PI * j as f64 / modulus as f64;
        let rotated = CoherentParam::new(alpha.value() * Complex64::from_polar(1.0, turn))?;
        let weight = Complex64::from_polar(1.0, -turn * k0 as f64);
        for (acc, a) in amps.iter_mut().zip(coherent_state(rotated, cutoff).amps()) {
            *acc += weight * a;
        }
    }
    VibrationalState::with_tail(amps, modulus as f64 * poisson_tail(alpha, cutoff))
}

/// How far `v` is from satisfying `a^N v = alpha^N v`, relative to `|v|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenResidual {
    /// Residual over levels `0..=cutoff-N`, where the truncated `a^N` is
    /// exact.
    pub represented: f64,
    /// Residual including the top `N` levels, whose `a^N` sources lie
    /// above the cutoff.
    pub full: f64,
}

pub fn eigen_residual(
    v: &VibrationalState,
    power: u32,
    alpha: CoherentParam,
) -> Result<EigenResidual> {
    let norm = v.norm_sqr().sqrt();
    if norm == 0.0 {
        return Err(Error::DegenerateState);
    }
    let lowered = apply_annihilation_power(v, power);
    let eigenvalue = alpha.value().powu(power);
    let faithful = v.amps().len().saturating_sub(power as usize);
    let mut represented = 0.0;
    let mut full = 0.0;
    for (n, (l, a)) in lowered.amps().iter().zip(v.amps()).enumerate() {
        let r = (l - eigenvalue * a).norm_sqr();
        full += r;
        if n < faithful {
            represented += r;
        }
    }
    Ok(EigenResidual {
        represented: represented.sqrt() / norm,
        full: full.sqrt() / norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::fidelity;

    #[test]
    fn cutoff_floor_for_vacuum() {
        assert_eq!(
            choose_cutoff(CoherentParam::real(0.0), 1e-3).unwrap(),
            MIN_CUTOFF
        );
        assert_eq!(
            choose_cutoff(CoherentParam::real(0.0), 1e-16).unwrap(),
            MIN_CUTOFF
        );
    }

    #[test]
    fn cutoff_rejects_bad_epsilon() {
        let a = CoherentParam::real(1.0);
        assert!(choose_cutoff(a, 0.0).is_err());
        assert!(choose_cutoff(a, 1.0).is_err());
        assert!(choose_cutoff(a, f64::NAN).is_err());
    }

    #[test]
    fn cutoff_is_monotone_in_epsilon() {
        for &a in &[0.5, 1.0, 2.0, 4.0, 7.0] {
            let a = CoherentParam::real(a);
            assert!(choose_cutoff(a, 1e-16).unwrap() >= choose_cutoff(a, 1e-8).unwrap());
        }
    }

    #[test]
    fn vacuum_coherent_state() {
        let v = coherent_state(CoherentParam::real(0.0), 10);
        assert_eq!(v, VibrationalState::vacuum(10));
    }

    #[test]
    fn coherent_ground_amplitude() {
        let v = coherent_state(CoherentParam::real(2.0), 40);
        assert!((v.amp(0).re - 0.1353352832366127).abs() < 1e-15);
    }

    #[test]
    fn coherent_phase_follows_alpha() {
        let a = CoherentParam::new(Complex64::new(0.0, 1.2)).unwrap();
        let v = coherent_state(a, 30);
        // alpha^n picks up i^n
        assert!(v.amp(1).re.abs() < 1e-15 && v.amp(1).im > 0.0);
        assert!(v.amp(2).re < 0.0 && v.amp(2).im.abs() < 1e-15);
    }

    #[test]
    fn large_cutoff_does_not_overflow() {
        let a = CoherentParam::real(8.0);
        let cutoff = choose_cutoff(a, 1e-16).unwrap();
        assert!(cutoff > 100);
        let v = coherent_state(a, 250);
        assert!(v.amps().iter().all(|x| x.re.is_finite()));
        assert!((v.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn generalized_support() {
        let g = generalized_coherent(CoherentParam::real(1.0), 2, 0, 20).unwrap();
        for n in (1..=20).step_by(2) {
            assert_eq!(g.amp(n), Complex64::new(0.0, 0.0));
        }
        assert!(g.amp(2).re > 0.0);
    }

    #[test]
    fn generalized_errors() {
        let a = CoherentParam::real(1.0);
        assert!(matches!(
            generalized_coherent(a, 4, 4, 20),
            Err(Error::Index { .. })
        ));
        assert!(generalized_coherent(a, 4, 3, 2).is_err());
    }

    #[test]
    fn sector_weights_of_fock() {
        let w = sector_weights(&VibrationalState::fock(5, 10).unwrap(), 4).unwrap();
        assert_eq!(w.weights(), &[0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn residue_pieces_are_orthogonal() {
        let v = coherent_state(CoherentParam::real(1.1), 30);
        let pieces = residue_decompose(&v, 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    let ip = crate::hilbert::inner_product(&pieces[i], &pieces[j]).unwrap();
                    assert_eq!(ip, Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn even_cat_matches_component() {
        let a = CoherentParam::real(1.0);
        let cat = multi_component_cat(a, 2, 0, 40).unwrap();
        let g = generalized_coherent(a, 2, 0, 40).unwrap();
        assert!((fidelity(&cat, &g).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cat_index_out_of_range() {
        assert!(multi_component_cat(CoherentParam::real(1.0), 4, 4, 20).is_err());
    }

    #[test]
    fn eigen_residual_of_fock_state() {
        // a^2 |1> = 0 everywhere, so the residual is |alpha^2|.
        let v = VibrationalState::fock(1, 10).unwrap();
        let r = eigen_residual(&v, 2, CoherentParam::real(0.5)).unwrap();
        assert!((r.represented - 0.25).abs() < 1e-15);
        assert!((r.full - 0.25).abs() < 1e-15);
    }
}
