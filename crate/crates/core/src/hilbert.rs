//! Dense complex vectors and matrices over the truncated Fock space, the
//! register space and their tensor product.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// shadowed by the inherent f64 methods whenever std is in the build
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn check_finite(amps: &[Complex64]) -> Result<()> {
    if amps.iter().all(|a| a.re.is_finite() && a.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Common read access to the amplitude vector of any pure state.
pub trait StateVector {
    fn amplitudes(&self) -> &[Complex64];

    /// `(rows, cols)` of the amplitude layout. Vectors are `(1, len)`.
    fn shape(&self) -> (usize, usize) {
        (1, self.amplitudes().len())
    }

    fn norm_sqr(&self) -> f64 {
        self.amplitudes().iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Vibrational mode state truncated at Fock level `cutoff`.
///
/// `tail_bound` is an upper bound on probability that lived above the
/// cutoff in the untruncated state this one was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct VibrationalState {
    amps: Vec<Complex64>,
    tail_bound: f64,
}

impl VibrationalState {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        Self::with_tail(amps, 0.0)
    }

    pub fn with_tail(amps: Vec<Complex64>, tail_bound: f64) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::Parameter(
                "vibrational state needs at least one level".into(),
            ));
        }
        check_finite(&amps)?;
        if !(tail_bound.is_finite() && tail_bound >= 0.0) {
            return Err(Error::Parameter(
                "tail bound must be finite and non-negative".into(),
            ));
        }
        Ok(Self { amps, tail_bound })
    }

    /// Fock state `|n>` in a space truncated at `cutoff`.
    pub fn fock(n: usize, cutoff: usize) -> Result<Self> {
        if n > cutoff {
            return Err(Error::Index {
                index: n,
                bound: cutoff + 1,
            });
        }
        let mut amps = vec![ZERO; cutoff + 1];
        amps[n] = Complex64::new(1.0, 0.0);
        Ok(Self {
            amps,
            tail_bound: 0.0,
        })
    }

    pub fn vacuum(cutoff: usize) -> Self {
        Self::fock(0, cutoff).expect("level 0 always fits")
    }

    pub fn cutoff(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, n: usize) -> Complex64 {
        self.amps.get(n).copied().unwrap_or(ZERO)
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn into_amps(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            amps: self.amps.iter().map(|a| a * c).collect(),
            tail_bound: self.tail_bound * c.norm_sqr(),
        }
    }

    /// Unit-norm copy. The tail bound is rescaled with the amplitudes.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sqr();
        if norm == 0.0 {
            return Err(Error::DegenerateState);
        }
        let inv = 1.0 / norm.sqrt();
        Ok(Self {
            amps: self.amps.iter().map(|a| a * inv).collect(),
            tail_bound: self.tail_bound / norm,
        })
    }

    /// `<a^dagger a>` divided by the squared norm.
    pub fn mean_phonon_number(&self) -> Result<f64> {
        let norm = self.norm_sqr();
        if norm == 0.0 {
            return Err(Error::DegenerateState);
        }
        let weighted: f64 = self
            .amps
            .iter()
            .enumerate()
            .map(|(n, a)| n as f64 * a.norm_sqr())
            .sum();
        Ok(weighted / norm)
    }
}

impl StateVector for VibrationalState {
    fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }
}

/// State of an `m`-ion register over the `2^m` basis states `|k>`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElectronicState {
    ions: u32,
    amps: Vec<Complex64>,
}

impl ElectronicState {
    pub fn new(ions: u32, amps: Vec<Complex64>) -> Result<Self> {
        let size = register_size(ions)?;
        if amps.len() != size {
            return Err(Error::Dimension {
                expected: size,
                found: amps.len(),
            });
        }
        check_finite(&amps)?;
        Ok(Self { ions, amps })
    }

    /// Basis state `|k>`.
    pub fn basis(ions: u32, k: usize) -> Result<Self> {
        let size = register_size(ions)?;
        if k >= size {
            return Err(Error::Index {
                index: k,
                bound: size,
            });
        }
        let mut amps = vec![ZERO; size];
        amps[k] = Complex64::new(1.0, 0.0);
        Ok(Self { ions, amps })
    }

    pub fn ions(&self) -> u32 {
        self.ions
    }

    pub fn size(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }
}

impl StateVector for ElectronicState {
    fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }
}

pub(crate) fn register_size(ions: u32) -> Result<usize> {
    if ions == 0 || ions > crate::register::MAX_IONS {
        return Err(Error::Parameter(alloc::format!(
            "register needs between 1 and {} ions, got {ions}",
            crate::register::MAX_IONS
        )));
    }
    Ok(1usize << ions)
}

/// Register ⊗ mode amplitudes, stored row-major as `(k, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    ions: u32,
    cutoff: usize,
    amps: Vec<Complex64>,
}

impl JointState {
    pub fn new(ions: u32, cutoff: usize, amps: Vec<Complex64>) -> Result<Self> {
        let size = register_size(ions)?;
        let expected = size * (cutoff + 1);
        if amps.len() != expected {
            return Err(Error::Dimension {
                expected,
                found: amps.len(),
            });
        }
        check_finite(&amps)?;
        Ok(Self { ions, cutoff, amps })
    }

    pub fn zeros(ions: u32, cutoff: usize) -> Result<Self> {
        let size = register_size(ions)?;
        Ok(Self {
            ions,
            cutoff,
            amps: vec![ZERO; size * (cutoff + 1)],
        })
    }

    pub fn ions(&self) -> u32 {
        self.ions
    }

    pub fn register_size(&self) -> usize {
        1 << self.ions
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn levels(&self) -> usize {
        self.cutoff + 1
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, k: usize, n: usize) -> Complex64 {
        self.amps[k * self.levels() + n]
    }

    /// Vibrational amplitudes attached to register state `|k>`.
    pub fn sector(&self, k: usize) -> &[Complex64] {
        let levels = self.levels();
        &self.amps[k * levels..(k + 1) * levels]
    }

    pub fn sector_norm_sqr(&self, k: usize) -> f64 {
        self.sector(k).iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability of each register outcome, unnormalized.
    pub fn register_weights(&self) -> Vec<f64> {
        (0..self.register_size())
            .map(|k| self.sector_norm_sqr(k))
            .collect()
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub(crate) fn sector_mut(&mut self, k: usize) -> &mut [Complex64] {
        let levels = self.levels();
        &mut self.amps[k * levels..(k + 1) * levels]
    }

    /// Applies a `2^m × 2^m` operator to the register, identity on the mode.
    pub fn apply_register_operator(&self, op: &DenseMatrix) -> Result<Self> {
        let size = self.register_size();
        if op.rows() != size || op.cols() != size {
            return Err(Error::Dimension {
                expected: size,
                found: op.rows().max(op.cols()),
            });
        }
        let levels = self.levels();
        let mut out = vec![ZERO; self.amps.len()];
        for row in 0..size {
            for col in 0..size {
                let w = op.get(row, col);
                if w == ZERO {
                    continue;
                }
                let src = &self.amps[col * levels..(col + 1) * levels];
                let dst = &mut out[row * levels..(row + 1) * levels];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += w * s;
                }
            }
        }
        Ok(Self {
            ions: self.ions,
            cutoff: self.cutoff,
            amps: out,
        })
    }

    /// Probability-mass-preserving check used by the protocol driver.
    pub fn norm_drift(&self) -> f64 {
        (self.norm_sqr() - 1.0).abs()
    }
}

impl StateVector for JointState {
    fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    fn shape(&self) -> (usize, usize) {
        (self.register_size(), self.levels())
    }
}

/// `e ⊗ v` with amplitude `e[k] * v[n]` at `(k, n)`.
pub fn tensor_product(e: &ElectronicState, v: &VibrationalState) -> JointState {
    let amps = e
        .amps()
        .iter()
        .flat_map(|ek| v.amps().iter().map(move |vn| ek * vn))
        .collect();
    JointState {
        ions: e.ions(),
        cutoff: v.cutoff(),
        amps,
    }
}

/// `<a|b>`, conjugate-linear in `a`.
pub fn inner_product<A, B>(a: &A, b: &B) -> Result<Complex64>
where
    A: StateVector + ?Sized,
    B: StateVector + ?Sized,
{
    let (sa, sb) = (a.shape(), b.shape());
    if sa != sb {
        return Err(Error::Dimension {
            expected: sa.0 * sa.1,
            found: sb.0 * sb.1,
        });
    }
    Ok(a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// `|<a|b>|^2 / (<a|a><b|b>)`, blind to global phase and scale.
pub fn fidelity<A, B>(a: &A, b: &B) -> Result<f64>
where
    A: StateVector + ?Sized,
    B: StateVector + ?Sized,
{
    let overlap = inner_product(a, b)?;
    let (na, nb) = (a.norm_sqr(), b.norm_sqr());
    if na == 0.0 || nb == 0.0 {
        return Err(Error::DegenerateState);
    }
    Ok(overlap.norm_sqr() / (na * nb))
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == ZERO {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.get(k, c);
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.cols {
            return Err(Error::Dimension {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn pow(&self, exponent: u32) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Dimension {
                expected: self.rows,
                found: self.cols,
            });
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..exponent {
            acc = acc.matmul(self)?;
        }
        Ok(acc)
    }

    /// Largest entrywise `|a - b|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest entry of `|A A^dagger - I|`.
    pub fn unitarity_defect(&self) -> Result<f64> {
        let product = self.matmul(&self.adjoint())?;
        product.max_abs_diff(&Self::identity(self.rows))
    }
}

/// Matrix of the lowering operator on levels `0..=cutoff`:
/// `<n-1|a|n> = sqrt(n)`.
pub fn annihilation_matrix(cutoff: usize) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(cutoff + 1, cutoff + 1);
    for n in 1..=cutoff {
        m.set(n - 1, n, Complex64::new((n as f64).sqrt(), 0.0));
    }
    m
}

/// `a^power v` by repeated lowering. The top `power` levels of the result
/// are zero because their sources lie above the cutoff.
pub fn apply_annihilation_power(v: &VibrationalState, power: u32) -> VibrationalState {
    let mut amps = v.amps().to_vec();
    for _ in 0..power {
        let len = amps.len();
        for n in 1..len {
            amps[n - 1] = amps[n] * (n as f64).sqrt();
        }
        amps[len - 1] = ZERO;
    }
    VibrationalState {
        amps,
        tail_bound: v.tail_bound(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec::Vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basis_product() {
        let e = ElectronicState::basis(1, 0).unwrap();
        let v = VibrationalState::vacuum(3);
        let s = tensor_product(&e, &v);
        assert_eq!(s.amp(0, 0), c(1.0, 0.0));
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
        assert_eq!(s.amps().iter().filter(|a| **a != ZERO).count(), 1);
    }

    #[test]
    fn superposed_register_times_fock() {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let e = ElectronicState::new(1, vec![c(h, 0.0), c(h, 0.0)]).unwrap();
        let v = VibrationalState::fock(3, 5).unwrap();
        let s = tensor_product(&e, &v);
        assert_eq!(s.amp(0, 3), c(h, 0.0));
        assert_eq!(s.amp(1, 3), c(h, 0.0));
        assert_eq!(s.amp(1, 2), ZERO);
    }

    #[test]
    fn fock_orthonormality() {
        let a = VibrationalState::fock(2, 6).unwrap();
        let b = VibrationalState::fock(3, 6).unwrap();
        assert_eq!(inner_product(&a, &a).unwrap(), c(1.0, 0.0));
        assert_eq!(inner_product(&a, &b).unwrap(), ZERO);
    }

    #[test]
    fn inner_product_shape_mismatch() {
        let a = VibrationalState::fock(2, 6).unwrap();
        let b = VibrationalState::fock(2, 7).unwrap();
        assert!(matches!(
            inner_product(&a, &b),
            Err(Error::Dimension { .. })
        ));
        let j = JointState::zeros(1, 2).unwrap();
        let flat = VibrationalState::vacuum(5);
        assert!(inner_product(&j, &flat).is_err());
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_first_argument() {
        let a = VibrationalState::new(vec![c(1.0, 0.5), c(0.0, 1.0)]).unwrap();
        let b = VibrationalState::new(vec![c(0.3, -0.2), c(2.0, 0.0)]).unwrap();
        let z = c(0.7, -1.3);
        let lhs = inner_product(&a.scaled(z), &b).unwrap();
        let rhs = z.conj() * inner_product(&a, &b).unwrap();
        assert!((lhs - rhs).norm() < 1e-15);
    }

    #[test]
    fn fidelity_basics() {
        let x = VibrationalState::new(vec![c(0.3, 0.1), c(-0.2, 0.9), c(0.0, 0.4)]).unwrap();
        assert!((fidelity(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        assert!((fidelity(&x.scaled(c(-2.0, 3.5)), &x).unwrap() - 1.0).abs() < 1e-14);
        let f0 = VibrationalState::fock(0, 2).unwrap();
        let f1 = VibrationalState::fock(1, 2).unwrap();
        assert_eq!(fidelity(&f0, &f1).unwrap(), 0.0);
    }

    #[test]
    fn fidelity_rejects_zero_state() {
        let z = VibrationalState::new(vec![ZERO; 3]).unwrap();
        let x = VibrationalState::fock(1, 2).unwrap();
        assert_eq!(fidelity(&z, &x), Err(Error::DegenerateState));
    }

    #[test]
    fn constructors_reject_non_finite() {
        assert_eq!(
            VibrationalState::new(vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite)
        );
        assert!(ElectronicState::new(1, vec![ZERO, c(0.0, f64::INFINITY)]).is_err());
        assert!(matches!(
            ElectronicState::new(2, vec![ZERO; 3]),
            Err(Error::Dimension {
                expected: 4,
                found: 3
            })
        ));
    }

    #[test]
    fn annihilation_entries() {
        let a = annihilation_matrix(6);
        assert_eq!(a.get(0, 1), c(1.0, 0.0));
        assert_eq!(a.get(3, 4), c(2.0, 0.0));
        let vac = a.apply(VibrationalState::vacuum(6).amps()).unwrap();
        assert!(vac.iter().all(|x| *x == ZERO));
    }

    #[test]
    fn ladder_power_on_fock() {
        let v = VibrationalState::fock(5, 8).unwrap();
        let out = apply_annihilation_power(&v, 2);
        assert!((out.amp(3) - c(20f64.sqrt(), 0.0)).norm() < 1e-14);
        assert_eq!(out.cutoff(), 8);
        let vac = apply_annihilation_power(&VibrationalState::vacuum(8), 4);
        assert!(vac.amps().iter().all(|x| *x == ZERO));
    }

    #[test]
    fn ladder_power_zeroes_top_levels() {
        let amps: Vec<_> = (0..10).map(|n| c(1.0 / (n as f64 + 1.0), 0.1)).collect();
        let out = apply_annihilation_power(&VibrationalState::new(amps).unwrap(), 3);
        assert!(out.amps()[7..].iter().all(|x| *x == ZERO));
    }

    #[test]
    fn commutator_is_identity_below_top_level() {
        let cutoff = 12;
        let a = annihilation_matrix(cutoff);
        let ad = a.adjoint();
        let aad = a.matmul(&ad).unwrap();
        let ada = ad.matmul(&a).unwrap();
        for r in 0..=cutoff {
            for col in 0..=cutoff {
                let comm = aad.get(r, col) - ada.get(r, col);
                let expect = if r == col && r < cutoff {
                    1.0
                } else if r == col {
                    -(cutoff as f64)
                } else {
                    0.0
                };
                assert!((comm - c(expect, 0.0)).norm() < 1e-12, "({r},{col})");
            }
        }
    }

    #[test]
    fn register_operator_dimension_check() {
        let s = JointState::zeros(2, 3).unwrap();
        assert!(s
            .apply_register_operator(&DenseMatrix::identity(2))
            .is_err());
        let same = s
            .apply_register_operator(&DenseMatrix::identity(4))
            .unwrap();
        assert_eq!(same, s);
    }
}
