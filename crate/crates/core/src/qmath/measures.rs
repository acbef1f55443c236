//! Spectral functionals of states: von Neumann entropy, Uhlmann
//! fidelity, trace distance.  Entropies are in bits.

use super::eig::eig_hermitian;
use super::state::DensityMatrix;
use super::{require, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Von Neumann entropy `S(ρ) = -Tr(ρ log₂ ρ)` in bits, with the
/// convention `0·log₂ 0 = 0`.
pub fn vn_entropy<T: Scalar>(rho: &DensityMatrix<T>) -> T {
    let mut s = T::zero();
    for lambda in rho.spectrum() {
        if lambda > T::zero() {
            s -= lambda * lambda.log2();
        }
    }
    s.max(T::zero())
}

/// Squared Uhlmann fidelity `(Tr √(√ρ σ √ρ))²`.
///
/// Note the convention: this is the *squared* quantity, which is 1 for
/// identical states and `⟨ψ|σ|ψ⟩` when `ρ = |ψ⟩⟨ψ|`.  Callers that
/// need the amplitude convention take a square root.
pub fn fidelity<T: Scalar>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    require(rho.dim() == sigma.dim(), || {
        Error::DimMismatch(format!("fidelity of {}-dim and {}-dim states", rho.dim(), sigma.dim()))
    })?;
    let sqrt_rho = matrix_sqrt_psd(rho.matrix())?;
    let inner = &(&sqrt_rho * sigma.matrix()) * &sqrt_rho;
    let eig = eig_hermitian(&inner)?;
    let tr_sqrt: T = eig
        .values
        .into_iter()
        .map(|v| v.max(T::zero()).sqrt())
        .sum();
    Ok((tr_sqrt * tr_sqrt).min(T::one()))
}

/// Trace distance `½‖ρ - σ‖₁`.
pub fn trace_distance<T: Scalar>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    require(rho.dim() == sigma.dim(), || {
        Error::DimMismatch(format!(
            "trace distance of {}-dim and {}-dim states",
            rho.dim(),
            sigma.dim()
        ))
    })?;
    let diff = rho.matrix() - sigma.matrix();
    let eig = eig_hermitian(&diff)?;
    let sum: T = eig.values.into_iter().map(|v| v.abs()).sum();
    Ok(sum * T::real(0.5))
}

/// PSD square root via eigendecomposition; eigenvalues below the PSD
/// floor are treated as zero.
fn matrix_sqrt_psd<T: Scalar>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let eig = eig_hermitian(m)?;
    Ok(eig.map_rebuild(|lambda| {
        if lambda > T::zero() {
            Some(lambda.sqrt())
        } else {
            None
        }
    }))
}

/// `log₂` of a PSD matrix restricted to its support: eigenvalues at or
/// below the validity floor are skipped, matching `0·log₂ 0 = 0` when
/// the result is traced against a state supported inside this one.
pub(crate) fn log2_on_support<T: Scalar>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let eig = eig_hermitian(m)?;
    Ok(eig.map_rebuild(|lambda| {
        if lambda > T::validity_tol() {
            Some(lambda.log2())
        } else {
            None
        }
    }))
}
