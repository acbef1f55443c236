//! Simulation toolkit for communication through a pair of thermal channels
//! arranged by a quantum switch.
//!
//! A carrier qubit M, classically correlated with a reference qubit A,
//! undergoes two collision-model thermal contacts whose causal order is
//! controlled by a qubit C.  The crate builds the channels from first
//! principles (partial-swap collisions with Gibbs bath qubits), composes
//! them into the switch, and evaluates the information-theoretic
//! quantities of interest:
//!
//! - [`qmath`] — dense complex Hermitian linear algebra on small Hilbert
//!   spaces: Kronecker products, partial traces, eigendecomposition,
//!   entropy, fidelity, trace distance.
//! - [`thermal`] — qubit Hamiltonians, Gibbs states, the partial-swap
//!   collision unitary and the Kraus form of the thermal channel ε(T, s).
//! - [`switch`] — the switch channel on M⊗C and its action on the joint
//!   A-M-C system.
//! - [`infomeasures`] — the correlated input family, quantum mutual
//!   information, energy-basis dephasing, free coherence, and the
//!   capacity optimizer over the input family.
//! - [`sweep`] — thermalization-strength sweeps, turning-point detection
//!   and the information-backflow (non-Markovianity) measure.
//! - [`emulator`] — shot-noise emulation: Pauli-setting sampling,
//!   tomographic reconstruction with positivity projection, and Monte
//!   Carlo error bars.
//!
//! All numerics are generic over the floating-point scalar through
//! [`Scalar`]; the aliases below fix the common instantiations.  All
//! entropic quantities are in bits and the energy gap is the unit of
//! energy throughout.

pub mod emulator;
mod error;
pub mod infomeasures;
pub mod qmath;
mod scalar;
pub mod sweep;
pub mod switch;
pub mod thermal;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// `f64` instantiations, used by the command-line tools and tests.
pub type Matrix64 = qmath::ComplexMatrix<f64>;
pub type Density64 = qmath::DensityMatrix<f64>;
pub type Channel64 = thermal::KrausChannel<f64>;
pub type Temperature64 = thermal::Temperature<f64>;

/// `f32` instantiations for callers trading precision for footprint.
pub type Matrix32 = qmath::ComplexMatrix<f32>;
pub type Density32 = qmath::DensityMatrix<f32>;
pub type Channel32 = thermal::KrausChannel<f32>;
pub type Temperature32 = thermal::Temperature<f32>;
