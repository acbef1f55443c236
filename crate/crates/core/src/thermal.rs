//! Collision-model thermalization of a qubit.
//!
//! A bath qubit in the Gibbs state τ_T collides once with the carrier
//! through the partial swap `U = √(1-s²)·I + i·s·SWAP`, which commutes
//! with the total Hamiltonian, and is then discarded.  The resulting
//! channel ε(T, s) is energy-preserving and fixes τ_T, which is what
//! makes it thermodynamically free.
//!
//! Basis convention everywhere: index 0 = |g⟩, index 1 = |e⟩.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qmath::{kron, require, ComplexMatrix, DensityMatrix, SubsystemLayout};
use crate::scalar::Scalar;

/// Qubit Hamiltonian `Ω(|e⟩⟨e| - |g⟩⟨g|)` with the energy gap Ω fixed
/// to 1, the unit of energy throughout.
#[derive(Debug, Clone, Copy)]
pub struct QubitHamiltonian;

impl QubitHamiltonian {
    pub fn gap<T: Scalar>(&self) -> T {
        T::one()
    }

    /// `diag(-Ω, +Ω)` in the (|g⟩, |e⟩) basis.
    pub fn matrix<T: Scalar>(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_real_diag(&[-T::one(), T::one()])
    }

    /// Non-interacting two-qubit Hamiltonian `H⊗I + I⊗H`.
    pub fn two_qubit_total<T: Scalar>(&self) -> ComplexMatrix<T> {
        let h = self.matrix::<T>();
        let id = ComplexMatrix::identity(2);
        &kron(&h, &id) + &kron(&id, &h)
    }
}

/// Bath temperature; `kT` is in units of the energy gap, with the
/// Boltzmann constant absorbed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperature<T> {
    Zero,
    Infinite,
    Finite(T),
}

impl<T: Scalar> Temperature<T> {
    /// Finite temperature; `kt` must be positive.
    pub fn finite(kt: T) -> Result<Self> {
        require(kt > T::zero() && kt.is_finite(), || {
            Error::InvalidArgument(format!("finite temperature needs kT > 0, got {kt}"))
        })?;
        Ok(Self::Finite(kt))
    }

    /// `kT` when finite.
    pub fn kt(&self) -> Option<T> {
        match self {
            Self::Finite(kt) => Some(*kt),
            _ => None,
        }
    }
}

impl<T: Scalar> std::fmt::Display for Temperature<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Zero => write!(f, "zero"),
            Self::Infinite => write!(f, "inf"),
            Self::Finite(kt) => write!(f, "kT={kt}"),
        }
    }
}

/// Thermalization strength `s ∈ [0, 1]`: 0 is no interaction, 1 a full
/// swap with the bath qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalizationStrength<T>(T);

impl<T: Scalar> ThermalizationStrength<T> {
    pub fn new(s: T) -> Result<Self> {
        require(s >= T::zero() && s <= T::one(), || {
            Error::InvalidArgument(format!("thermalization strength must be in [0, 1], got {s}"))
        })?;
        Ok(Self(s))
    }

    pub fn value(&self) -> T {
        self.0
    }
}

/// Gibbs populations `(p_g, p_e)` of the standard qubit Hamiltonian.
pub fn gibbs_populations<T: Scalar>(temperature: Temperature<T>) -> (T, T) {
    match temperature {
        Temperature::Zero => (T::one(), T::zero()),
        Temperature::Infinite => (T::real(0.5), T::real(0.5)),
        Temperature::Finite(kt) => {
            assert!(kt > T::zero(), "finite temperature requires kT > 0");
            // p_g = e^{Ω/kT}/Z written in overflow-safe form
            let w = (-(T::one() + T::one()) / kt).exp();
            let z = T::one() + w;
            (T::one() / z, w / z)
        }
    }
}

/// Gibbs thermal state `τ_T = exp(-H/kT)/Z` of the carrier qubit.
pub fn gibbs_state<T: Scalar>(temperature: Temperature<T>) -> DensityMatrix<T> {
    let (pg, pe) = gibbs_populations(temperature);
    DensityMatrix::new(
        ComplexMatrix::from_real_diag(&[pg, pe]),
        SubsystemLayout::carrier_qubit(),
    )
    .expect("Gibbs state is valid by construction")
}

/// Partial-swap collision unitary `U = √(1-s²)·I + i·s·SWAP` on
/// carrier ⊗ bath.
pub fn partial_swap_unitary<T: Scalar>(s: ThermalizationStrength<T>) -> ComplexMatrix<T> {
    let s = s.value();
    let c = (T::one() - s * s).sqrt();
    let mut u = ComplexMatrix::identity(4).scale(Complex::new(c, T::zero()));
    let swap = [(0usize, 0usize), (1, 2), (2, 1), (3, 3)];
    for (i, j) in swap {
        u[(i, j)] += Complex::new(T::zero(), s);
    }
    u
}

/// Max-abs entry of the commutator `[U, H⊗I + I⊗H]`; at most ~1e-12
/// for every strength, which is the energy-conservation condition on
/// the collision.
pub fn energy_conservation_residual<T: Scalar>(s: ThermalizationStrength<T>) -> T {
    let u = partial_swap_unitary(s);
    let h = QubitHamiltonian.two_qubit_total::<T>();
    (&(&u * &h) - &(&h * &u)).max_abs()
}

/// Finite sequence of Kraus operators forming a CPTP map; construction
/// checks the completeness relation `Σ Kᵢ†Kᵢ = I`.
#[derive(Debug, Clone)]
pub struct KrausChannel<T> {
    in_dim: usize,
    out_dim: usize,
    ops: Vec<ComplexMatrix<T>>,
}

impl<T: Scalar> KrausChannel<T> {
    pub fn from_ops(ops: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let ch = Self::from_ops_unchecked(ops)?;
        let residual = completeness_residual(&ch);
        require(residual <= T::validity_tol(), || {
            Error::InvalidChannel(format!("completeness residual {residual:e} exceeds tolerance"))
        })?;
        Ok(ch)
    }

    /// Skips the completeness check; for deliberately defective sets
    /// fed to [`validate_channel`].
    pub fn from_ops_unchecked(ops: Vec<ComplexMatrix<T>>) -> Result<Self> {
        require(!ops.is_empty(), || {
            Error::InvalidChannel("channel needs at least one Kraus operator".into())
        })?;
        let (out_dim, in_dim) = (ops[0].rows(), ops[0].cols());
        for op in &ops {
            require(op.rows() == out_dim && op.cols() == in_dim, || {
                Error::InvalidChannel("Kraus operators have mixed shapes".into())
            })?;
            require(op.all_finite(), || {
                Error::InvalidChannel("Kraus operator has non-finite entries".into())
            })?;
        }
        Ok(Self { in_dim, out_dim, ops })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            in_dim: dim,
            out_dim: dim,
            ops: vec![ComplexMatrix::identity(dim)],
        }
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn ops(&self) -> &[ComplexMatrix<T>] {
        &self.ops
    }

    /// `Σ Kᵢ ρ Kᵢ†` for a dimension-preserving channel; the output
    /// keeps the input layout.
    pub fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        require(self.in_dim == self.out_dim, || {
            Error::DimMismatch("dimension-changing channel requires apply_into".into())
        })?;
        self.apply_into(rho, rho.layout().clone())
    }

    /// `Σ Kᵢ ρ Kᵢ†` with an explicit layout for the output space.
    pub fn apply_into(
        &self,
        rho: &DensityMatrix<T>,
        out_layout: SubsystemLayout,
    ) -> Result<DensityMatrix<T>> {
        require(rho.dim() == self.in_dim, || {
            Error::DimMismatch(format!(
                "channel input dimension {} does not match state dimension {}",
                self.in_dim,
                rho.dim()
            ))
        })?;
        let mut out = ComplexMatrix::zeros(self.out_dim, self.out_dim);
        for k in &self.ops {
            let term = &(k * rho.matrix()) * &k.adjoint();
            out = &out + &term;
        }
        DensityMatrix::new(out, out_layout)
    }
}

/// Sequential composition: `earlier` acts first, `later` second.
pub fn compose<T: Scalar>(
    later: &KrausChannel<T>,
    earlier: &KrausChannel<T>,
) -> Result<KrausChannel<T>> {
    require(later.in_dim == earlier.out_dim, || {
        Error::DimMismatch(format!(
            "cannot compose: later input {} vs earlier output {}",
            later.in_dim, earlier.out_dim
        ))
    })?;
    let mut ops = Vec::with_capacity(later.ops.len() * earlier.ops.len());
    for l in &later.ops {
        for e in &earlier.ops {
            ops.push(l * e);
        }
    }
    KrausChannel::from_ops(ops)
}

fn completeness_residual<T: Scalar>(ch: &KrausChannel<T>) -> T {
    let mut sum = ComplexMatrix::zeros(ch.in_dim, ch.in_dim);
    for k in &ch.ops {
        sum = &sum + &(&k.adjoint() * k);
    }
    sum.max_abs_diff(&ComplexMatrix::identity(ch.in_dim))
}

/// Residuals of the two defining channel properties.
#[derive(Debug, Clone, Copy)]
pub struct ChannelValidation<T> {
    /// Max-abs of `Σ Kᵢ†Kᵢ - I`.
    pub completeness_residual: T,
    /// Worst trace-preservation defect over matrix-unit inputs.
    pub trace_residual: T,
}

impl<T: Scalar> ChannelValidation<T> {
    pub fn accepted(&self) -> bool {
        self.completeness_residual <= T::validity_tol() && self.trace_residual <= T::validity_tol()
    }
}

/// Report completeness and trace-preservation residuals without
/// rejecting anything; the caller decides what to do with a defective
/// set.
pub fn validate_channel<T: Scalar>(ch: &KrausChannel<T>) -> ChannelValidation<T> {
    let completeness = completeness_residual(ch);

    // trace preservation probed independently on all matrix units
    let mut trace_residual = T::zero();
    for i in 0..ch.in_dim {
        for j in 0..ch.in_dim {
            let unit = ComplexMatrix::from_fn(ch.in_dim, ch.in_dim, |r, c| {
                if r == i && c == j {
                    Complex::new(T::one(), T::zero())
                } else {
                    Complex::new(T::zero(), T::zero())
                }
            });
            let mut out = ComplexMatrix::zeros(ch.out_dim, ch.out_dim);
            for k in &ch.ops {
                out = &out + &(&(k * &unit) * &k.adjoint());
            }
            let expected = if i == j { T::one() } else { T::zero() };
            let defect = (out.trace() - Complex::new(expected, T::zero())).norm();
            trace_residual = trace_residual.max(defect);
        }
    }

    ChannelValidation {
        completeness_residual: completeness,
        trace_residual,
    }
}

/// Thermal channel ε(T, s) from one partial-swap collision with a
/// Gibbs bath qubit.
///
/// The four Kraus operators are
/// `E_{k,l} = √p_l · (√(1-s²)·δ_{k,l}·I + i·s·|l⟩⟨k|)` with `p_l` the
/// Gibbs populations; operators with zero weight are kept as exact
/// zeros so every channel has the same four-element shape.  The set is
/// equivalent to `Tr_B[U (ρ ⊗ τ_T) U†]`, which the test suite checks
/// directly.
pub fn thermal_channel<T: Scalar>(
    temperature: Temperature<T>,
    s: ThermalizationStrength<T>,
) -> KrausChannel<T> {
    let (pg, pe) = gibbs_populations(temperature);
    let sv = s.value();
    let c = (T::one() - sv * sv).sqrt();

    let mut ops = Vec::with_capacity(4);
    for k in 0..2usize {
        for (l, pl) in [pg, pe].into_iter().enumerate() {
            let mut op = ComplexMatrix::zeros(2, 2);
            if k == l {
                op[(0, 0)] = Complex::new(c, T::zero());
                op[(1, 1)] = Complex::new(c, T::zero());
            }
            op[(l, k)] += Complex::new(T::zero(), sv);
            ops.push(op.scale_real(pl.sqrt()));
        }
    }
    KrausChannel::from_ops(ops).expect("collision Kraus set is complete by construction")
}
