//! The `m`-ion register: integer encoding of the internal states, the
//! diagonal index operator, and the Fourier basis conjugate to it.
//!
//! Bits are listed most significant first, `(s_m, ..., s_1)`, and
//! `k = sum_i s_i 2^(i-1)`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
// shadowed by the inherent f64 methods whenever std is in the build
#[allow(unused_imports)]
use num_traits::Float;

use crate::hilbert::{register_size, DenseMatrix, ElectronicState, JointState};
use crate::{Error, Result};

/// Largest register the dense simulator accepts.
pub const MAX_IONS: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegisterSpec {
    ions: u32,
}

impl RegisterSpec {
    pub fn new(ions: u32) -> Result<Self> {
        register_size(ions)?;
        Ok(Self { ions })
    }

    pub fn ions(&self) -> u32 {
        self.ions
    }

    /// `N = 2^m`.
    pub fn size(&self) -> usize {
        1 << self.ions
    }
}

/// Internal states of the ions, `s_m` first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitString {
    bits: Vec<u8>,
}

impl BitString {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() || bits.len() > MAX_IONS as usize {
            return Err(Error::Parameter(alloc::format!(
                "bit string length must be 1..={MAX_IONS}, got {}",
                bits.len()
            )));
        }
        if let Some(bad) = bits.iter().find(|b| **b > 1) {
            return Err(Error::Parameter(alloc::format!(
                "bit value {bad} is not 0 or 1"
            )));
        }
        Ok(Self { bits })
    }

    pub fn ions(&self) -> u32 {
        self.bits.len() as u32
    }

    /// Bits in stored order, most significant first.
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// `s_j` for ion `j` in `1..=m`; ion 1 is the least significant bit.
    pub fn ion(&self, j: u32) -> Result<u8> {
        let m = self.ions();
        if j == 0 || j > m {
            return Err(Error::Index {
                index: j as usize,
                bound: m as usize + 1,
            });
        }
        Ok(self.bits[(m - j) as usize])
    }
}

impl core::fmt::Display for BitString {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

pub fn encode_bits(b: &BitString) -> usize {
    b.bits().iter().fold(0, |k, &s| (k << 1) | s as usize)
}

pub fn decode_index(k: usize, ions: u32) -> Result<BitString> {
    let size = register_size(ions)?;
    if k >= size {
        return Err(Error::Index {
            index: k,
            bound: size,
        });
    }
    let bits = (0..ions).rev().map(|i| ((k >> i) & 1) as u8).collect();
    Ok(BitString { bits })
}

/// Bit `s_j` of index `k` (ion `j`, 1-based from the least significant end).
pub(crate) fn ion_bit(k: usize, j: u32) -> usize {
    (k >> (j - 1)) & 1
}

/// Diagonal of the index operator `sum_k k |k><k|`.
pub fn gamma_diagonal(spec: RegisterSpec) -> Vec<usize> {
    (0..spec.size()).collect()
}

/// `exp(-2 pi i r / N)` with `r` already reduced mod `N`.
pub(crate) fn root_of_unity(r: usize, size: usize) -> Complex64 {
    let r = r % size;
    match (4 * r) % size {
        // exact quarter turns
        0 => match 4 * r / size {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, -1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        },
        _ => Complex64::from_polar(1.0, -2.0 * PI * r as f64 / size as f64),
    }
}

/// `|p̄> = N^(-1/2) sum_k exp(-2 pi i k p / N) |k>`.
pub fn fourier_state(p: usize, spec: RegisterSpec) -> Result<ElectronicState> {
    let size = spec.size();
    if p >= size {
        return Err(Error::Index {
            index: p,
            bound: size,
        });
    }
    let scale = 1.0 / (size as f64).sqrt();
    let amps = (0..size)
        .map(|k| root_of_unity(k * p % size, size) * scale)
        .collect();
    ElectronicState::new(spec.ions(), amps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourierDirection {
    /// Columns are the Fourier states: `F |p> = |p̄>`.
    Forward,
    /// Adjoint of `Forward`: `F^dagger |p̄> = |p>`.
    Inverse,
}

pub fn fourier_matrix(spec: RegisterSpec, direction: FourierDirection) -> DenseMatrix {
    let size = spec.size();
    let scale = 1.0 / (size as f64).sqrt();
    let forward =
        DenseMatrix::from_fn(size, size, |k, p| root_of_unity(k * p % size, size) * scale);
    match direction {
        FourierDirection::Forward => forward,
        FourierDirection::Inverse => forward.adjoint(),
    }
}

/// Equal superposition `N^(-1/2) sum_k |k>`, the result of a pi/2 pulse on
/// every ion starting from `|0...0>`.
pub fn uniform_superposition(spec: RegisterSpec) -> ElectronicState {
    let size = spec.size();
    let a = Complex64::new(1.0 / (size as f64).sqrt(), 0.0);
    ElectronicState::new(spec.ions(), alloc::vec![a; size]).expect("size matches spec")
}

/// A pi/2 pulse on every ion, i.e. a Hadamard on each qubit of the
/// register, leaving the mode untouched.
pub fn apply_pi_half_pulses(s: &JointState) -> JointState {
    let mut out = s.clone();
    let size = s.register_size();
    let h = core::f64::consts::FRAC_1_SQRT_2;
    for j in 1..=s.ions() {
        let bit = 1usize << (j - 1);
        for k in (0..size).filter(|k| k & bit == 0) {
            let (lo, hi) = (k, k | bit);
            let levels = s.levels();
            let amps = out.amps_mut();
            for n in 0..levels {
                let a = amps[lo * levels + n];
                let b = amps[hi * levels + n];
                amps[lo * levels + n] = (a + b) * h;
                amps[hi * levels + n] = (a - b) * h;
            }
        }
    }
    out
}
