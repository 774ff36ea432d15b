//! Ion-mode coupling.
//!
//! Each ion sees `H_j = hbar chi a^dagger a (sigma_z^(j) + 1/2)`, where the
//! bracket has eigenvalue `s_j` in `{0, 1}`. A pulse of length `tau_j` with
//! `chi tau_j = 2^j pi / 2^m` is therefore the diagonal phase
//! `exp(-i n s_j 2^j pi / 2^m)` on `|k> ⊗ |n>`, and the ordered product over
//! all ions is `exp(-2 pi i n k / 2^m)`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
// shadowed by the inherent f64 methods whenever std is in the build
#[allow(unused_imports)]
use num_traits::Float;

use crate::hilbert::{register_size, JointState};
use crate::register::{ion_bit, root_of_unity};
use crate::{Error, Result};

/// Laser and trap parameters entering the effective coupling strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Lamb-Dicke parameter.
    pub eta: f64,
    /// Rabi frequency, rad/s.
    pub omega: f64,
    /// Detuning, rad/s.
    pub delta: f64,
    pub ions: u32,
}

impl PhysicalParams {
    pub fn new(eta: f64, omega: f64, delta: f64, ions: u32) -> Result<Self> {
        let p = Self {
            eta,
            omega,
            delta,
            ions,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(Error::Parameter("eta must be positive".into()));
        }
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(Error::Parameter("omega must be positive".into()));
        }
        if !self.delta.is_finite() || self.delta == 0.0 {
            return Err(Error::Parameter(
                "detuning must be finite and non-zero".into(),
            ));
        }
        if self.ions == 0 {
            return Err(Error::Parameter("at least one ion is required".into()));
        }
        Ok(())
    }
}

/// `chi = eta^2 Omega^2 / (m Delta)`.
pub fn compute_chi(p: &PhysicalParams) -> Result<f64> {
    p.validate()?;
    Ok(p.eta * p.eta * p.omega * p.omega / (p.ions as f64 * p.delta))
}

/// Accumulated phases `chi tau_j = 2^j pi / 2^m` for `j = 1..=m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSchedule {
    ions: u32,
    phases: Vec<f64>,
}

impl PulseSchedule {
    pub fn new(ions: u32) -> Result<Self> {
        register_size(ions)?;
        let phases = (1..=ions)
            .map(|j| PI * (2f64).powi(j as i32 - ions as i32))
            .collect();
        Ok(Self { ions, phases })
    }

    pub fn ions(&self) -> u32 {
        self.ions
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// Pulse durations `tau_j` for a given coupling `chi`, in seconds when
    /// `chi` is in rad/s.
    pub fn durations(&self, chi: f64) -> Result<Vec<f64>> {
        if !chi.is_finite() || chi == 0.0 {
            return Err(Error::Parameter("chi must be finite and non-zero".into()));
        }
        Ok(self.phases.iter().map(|phi| phi / chi).collect())
    }
}

/// Unitary that is diagonal on the joint basis `|k> ⊗ |n>`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalUnitary {
    ions: u32,
    cutoff: usize,
    entries: Vec<Complex64>,
}

impl DiagonalUnitary {
    fn from_fn(ions: u32, cutoff: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        let size = register_size(ions)?;
        let entries = (0..size)
            .flat_map(|k| (0..=cutoff).map(move |n| (k, n)))
            .map(|(k, n)| f(k, n))
            .collect();
        Ok(Self {
            ions,
            cutoff,
            entries,
        })
    }

    pub fn ions(&self) -> u32 {
        self.ions
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn entry(&self, k: usize, n: usize) -> Complex64 {
        self.entries[k * (self.cutoff + 1) + n]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    fn check_shape(&self, ions: u32, cutoff: usize) -> Result<()> {
        if (self.ions, self.cutoff) != (ions, cutoff) {
            let levels = self.cutoff + 1;
            return Err(Error::Dimension {
                expected: (1 << self.ions) * levels,
                found: (1 << ions) * (cutoff + 1),
            });
        }
        Ok(())
    }

    pub fn apply(&self, s: &JointState) -> Result<JointState> {
        self.check_shape(s.ions(), s.cutoff())?;
        let mut out = s.clone();
        for (a, d) in out.amps_mut().iter_mut().zip(&self.entries) {
            *a *= d;
        }
        Ok(out)
    }

    /// `self · other`; both are diagonal so the order does not matter.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_shape(other.ions, other.cutoff)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .collect();
        Ok(Self {
            ions: self.ions,
            cutoff: self.cutoff,
            entries,
        })
    }

    pub fn identity(ions: u32, cutoff: usize) -> Result<Self> {
        Self::from_fn(ions, cutoff, |_, _| Complex64::new(1.0, 0.0))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_shape(other.ions, other.cutoff)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest `||d| - 1|` over the diagonal.
    pub fn modulus_defect(&self) -> f64 {
        self.entries
            .iter()
            .map(|d| (d.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Phase imprinted by the standing-wave pulse on ion `j`:
/// `exp(-i n s_j(k) 2^j pi / 2^m)`.
pub fn ion_pulse_unitary(j: u32, ions: u32, cutoff: usize) -> Result<DiagonalUnitary> {
    let size = register_size(ions)?;
    if j == 0 || j > ions {
        return Err(Error::Index {
            index: j as usize,
            bound: ions as usize + 1,
        });
    }
    // 2^j pi / 2^m = 2 pi 2^(j-1) / N
    let step = 1usize << (j - 1);
    DiagonalUnitary::from_fn(ions, cutoff, |k, n| {
        let turns = (n % size) * ion_bit(k, j) * step;
        root_of_unity(turns % size, size)
    })
}

/// `exp(-2 pi i a^dagger a gamma / 2^m)`, entry `exp(-2 pi i n k / N)`.
pub fn conditional_phase_unitary(ions: u32, cutoff: usize) -> Result<DiagonalUnitary> {
    let size = register_size(ions)?;
    DiagonalUnitary::from_fn(ions, cutoff, |k, n| {
        root_of_unity((n % size) * k % size, size)
    })
}

/// Product of the per-ion pulses for `j = 1..=m`.
pub fn pulse_sequence_unitary(ions: u32, cutoff: usize) -> Result<DiagonalUnitary> {
    (1..=ions).try_fold(DiagonalUnitary::identity(ions, cutoff)?, |acc, j| {
        acc.compose(&ion_pulse_unitary(j, ions, cutoff)?)
    })
}
