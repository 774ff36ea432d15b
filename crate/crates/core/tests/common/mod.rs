//! Reference implementations written directly from the defining formulas,
//! independent of the library's own numerics.

#![allow(dead_code)]

use trapcat_core::hilbert::JointState;
use trapcat_core::{Complex64, VibrationalState};

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `e^{-|a|^2/2} a^n / sqrt(n!)` by forward recurrence.
pub fn coherent_oracle(alpha: Complex64, cutoff: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(cutoff + 1);
    let mut term = c((-alpha.norm_sqr() / 2.0).exp());
    for n in 0..=cutoff {
        if n > 0 {
            term = term * alpha / (n as f64).sqrt();
        }
        out.push(term);
    }
    out
}

/// `<alpha|beta> = exp(-|alpha|^2/2 - |beta|^2/2 + conj(alpha) beta)`.
pub fn coherent_overlap(alpha: Complex64, beta: Complex64) -> Complex64 {
    (alpha.conj() * beta - (alpha.norm_sqr() + beta.norm_sqr()) / 2.0).exp()
}

/// Smallest `c` with Poisson mass above `c` below `eps`, by direct summation
/// of the probability mass function.
pub fn cutoff_oracle(mean: f64, eps: f64) -> usize {
    let mut pmf = (-mean).exp();
    let mut below = pmf;
    let mut n = 0usize;
    while 1.0 - below >= eps {
        n += 1;
        pmf *= mean / n as f64;
        below += pmf;
    }
    n
}

/// Dense `(a^p)_{ij} = sqrt(j!/(j-p)!) delta_{i, j-p}` applied to `v`.
pub fn lowered_oracle(v: &[Complex64], p: usize) -> Vec<Complex64> {
    (0..v.len())
        .map(|i| {
            let j = i + p;
            if j >= v.len() {
                return c(0.0);
            }
            let f: f64 = ((i + 1)..=j).map(|x| x as f64).product();
            v[j] * f.sqrt()
        })
        .collect()
}

/// Joint state after the entangler, by regrouping the Fock expansion of
/// `v` into residue classes: sector `k` holds the levels `n = k mod N`.
pub fn regroup_oracle(v: &[Complex64], ions: u32) -> JointState {
    let size = 1usize << ions;
    let cutoff = v.len() - 1;
    let mut amps = vec![c(0.0); size * v.len()];
    for (n, a) in v.iter().enumerate() {
        amps[(n % size) * v.len() + n] = *a;
    }
    JointState::new(ions, cutoff, amps).unwrap()
}

pub fn grover_marked_oracle(n: usize, j: usize) -> f64 {
    ((2 * j + 1) as f64 * (1.0 / (n as f64).sqrt()).asin()).sin()
}

/// `sum_n (1 / sqrt(N)) |n mod N> ⊗ |n>` for `n < N`: every branch carries
/// weight `1/N`.
pub fn equal_weight_input(ions: u32, cutoff: usize) -> VibrationalState {
    let size = 1usize << ions;
    let mut amps = vec![c(0.0); cutoff + 1];
    for a in amps.iter_mut().take(size) {
        *a = c(1.0 / (size as f64).sqrt());
    }
    VibrationalState::new(amps).unwrap()
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Three-sigma binomial band around `n p`.
pub fn within_three_sigma(count: u64, draws: usize, p: f64) -> bool {
    let n = draws as f64;
    let sigma = (n * p * (1.0 - p)).sqrt();
    (count as f64 - n * p).abs() <= 3.0 * sigma
}
