//! Numerical core for preparing eigenstates of `a^N` in an ion trap.
//!
//! A vibrational mode is entangled with an `m`-ion register through a
//! number-conditioned phase and an inverse Fourier transform, one branch of
//! the resulting superposition is amplified with Grover iterations, and a
//! projective measurement of the register leaves the mode in a
//! multi-phonon coherent state.
//!
//! Everything here is dense, double precision and free of IO. The crate is
//! `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;

pub mod coupling;
pub mod grover;
pub mod hilbert;
pub mod protocol;
pub mod register;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use coupling::{DiagonalUnitary, PhysicalParams, PulseSchedule};
pub use grover::{AmplitudeTrace, GroverMode, GroverPlan, TraceRecord};
pub use hilbert::{DenseMatrix, ElectronicState, JointState, StateVector, VibrationalState};
pub use protocol::{
    CutoffPolicy, IterationPolicy, Measurement, MeasurementOutcome, ProtocolConfig,
    SimulationReport,
};
pub use register::{BitString, FourierDirection, RegisterSpec};
pub use states::{CoherentParam, EigenResidual, SectorWeights};
