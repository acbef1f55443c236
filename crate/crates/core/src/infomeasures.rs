//! Information-theoretic quantities of the switched-channel pipeline:
//! the correlated input family, quantum mutual information, energy-basis
//! dephasing, free coherence, and the capacity maximization over the
//! input family.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qmath::{
    log2_on_support, require, vn_entropy, ComplexMatrix, DensityMatrix, SubsystemLayout,
};
use crate::scalar::Scalar;
use crate::switch::{apply_switch_joint, ControlState};
use crate::thermal::{thermal_channel, Temperature, ThermalizationStrength};

/// Mixing weight `p ∈ [0, 1]` of the input family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputParameter<T>(T);

impl<T: Scalar> InputParameter<T> {
    pub fn new(p: T) -> Result<Self> {
        require(p >= T::zero() && p <= T::one(), || {
            Error::InvalidArgument(format!("input parameter must be in [0, 1], got {p}"))
        })?;
        Ok(Self(p))
    }

    pub fn value(&self) -> T {
        self.0
    }
}

/// Classically correlated input
/// `ρ_AM = p·|gg⟩⟨gg| + (1-p)·|ee⟩⟨ee|` on A⊗M.
pub fn input_state<T: Scalar>(p: InputParameter<T>) -> DensityMatrix<T> {
    let p = p.value();
    let layout = SubsystemLayout::qubits(&["A", "M"]).expect("static layout");
    DensityMatrix::new(
        ComplexMatrix::from_real_diag(&[p, T::zero(), T::zero(), T::one() - p]),
        layout,
    )
    .expect("diagonal mixture is a valid state")
}

/// Disjoint split of a layout's labels into the two sides of a mutual
/// information.
#[derive(Debug, Clone)]
pub struct Bipartition {
    x_labels: Vec<String>,
    y_labels: Vec<String>,
}

impl Bipartition {
    pub fn new(x_labels: &[&str], y_labels: &[&str]) -> Self {
        Self {
            x_labels: x_labels.iter().map(|s| s.to_string()).collect(),
            y_labels: y_labels.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn x(&self) -> Vec<&str> {
        self.x_labels.iter().map(|s| s.as_str()).collect()
    }

    pub fn y(&self) -> Vec<&str> {
        self.y_labels.iter().map(|s| s.as_str()).collect()
    }

    fn check_against(&self, layout: &SubsystemLayout) -> Result<()> {
        require(!self.x_labels.is_empty() && !self.y_labels.is_empty(), || {
            Error::InvalidArgument("both sides of a bipartition must be nonempty".into())
        })?;
        for l in self.x_labels.iter().chain(&self.y_labels) {
            require(layout.position(l).is_some(), || Error::UnknownLabel(l.clone()))?;
        }
        for l in &self.x_labels {
            require(!self.y_labels.contains(l), || {
                Error::InvalidArgument(format!("label `{l}` appears on both sides"))
            })?;
        }
        require(
            self.x_labels.len() + self.y_labels.len() == layout.len(),
            || Error::InvalidArgument("bipartition must cover every subsystem".into()),
        )
    }
}

/// Quantum mutual information `I(X:Y) = S(ρ_X) + S(ρ_Y) - S(ρ_XY)` in
/// bits; the partition must cover the state's layout.
pub fn mutual_information<T: Scalar>(rho: &DensityMatrix<T>, part: &Bipartition) -> Result<T> {
    part.check_against(rho.layout())?;
    let sx = vn_entropy(&rho.partial_trace(&part.x())?);
    let sy = vn_entropy(&rho.partial_trace(&part.y())?);
    Ok(sx + sy - vn_entropy(rho))
}

/// Remove all coherence between the rays of an orthonormal basis,
/// given as the columns of `basis`:
/// `D(ρ) = Σ_b |b⟩⟨b| ρ |b⟩⟨b|`.
pub fn dephase<T: Scalar>(
    rho: &DensityMatrix<T>,
    basis: &ComplexMatrix<T>,
) -> Result<DensityMatrix<T>> {
    require(basis.is_square() && basis.rows() == rho.dim(), || {
        Error::DimMismatch(format!(
            "basis must be {dim}x{dim} for a {dim}-dim state",
            dim = rho.dim()
        ))
    })?;
    let gram = &basis.adjoint() * basis;
    require(
        gram.max_abs_diff(&ComplexMatrix::identity(rho.dim())) <= T::validity_tol().sqrt(),
        || Error::InvalidArgument("dephasing basis is not orthonormal".into()),
    )?;

    let in_basis = &(&basis.adjoint() * rho.matrix()) * basis;
    let diag = ComplexMatrix::from_fn(rho.dim(), rho.dim(), |i, j| {
        if i == j {
            Complex::new(in_basis[(i, i)].re, T::zero())
        } else {
            Complex::new(T::zero(), T::zero())
        }
    });
    DensityMatrix::new(&(basis * &diag) * &basis.adjoint(), rho.layout().clone())
}

/// The computational basis as dephasing basis (identity columns).
pub fn computational_basis<T: Scalar>(dim: usize) -> ComplexMatrix<T> {
    ComplexMatrix::identity(dim)
}

/// Free coherence `A(ρ) = Tr[ρ (log₂ ρ - log₂ D(ρ))]` in bits.
///
/// Evaluated through the trace formula with matrix logarithms on the
/// respective supports; algebraically this equals `S(D(ρ)) - S(ρ)`,
/// which the test suite uses as an independent route.
pub fn free_coherence<T: Scalar>(rho: &DensityMatrix<T>, basis: &ComplexMatrix<T>) -> Result<T> {
    let dephased = dephase(rho, basis)?;
    let log_rho = log2_on_support(rho.matrix())?;
    let log_deph = log2_on_support(dephased.matrix())?;
    let inner = rho.matrix() * &(&log_rho - &log_deph);
    Ok(inner.trace().re.max(T::zero()))
}

/// Free energy of coherence `F_coh = kT·A(ρ)`; only meaningful at
/// finite temperature.
pub fn free_energy_of_coherence<T: Scalar>(temperature: Temperature<T>, a_c: T) -> Option<T> {
    temperature.kt().map(|kt| kt * a_c)
}

/// Joint A-M-C output of the experiment pipeline: the family input at
/// `p` sent through two identical thermal contacts at `(temperature, s)`
/// arranged by the switch with control `omega`.
pub fn family_output<T: Scalar>(
    temperature: Temperature<T>,
    s: ThermalizationStrength<T>,
    p: InputParameter<T>,
    omega: &ControlState<T>,
) -> DensityMatrix<T> {
    let eps = thermal_channel(temperature, s);
    apply_switch_joint(&input_state(p), &eps, &eps, omega)
        .expect("pipeline over validated inputs")
}

/// `I(A:CM)` of [`family_output`].
pub fn family_mutual_information<T: Scalar>(
    temperature: Temperature<T>,
    s: ThermalizationStrength<T>,
    p: InputParameter<T>,
    omega: &ControlState<T>,
) -> T {
    let out = family_output(temperature, s, p, omega);
    mutual_information(&out, &Bipartition::new(&["A"], &["M", "C"]))
        .expect("partition matches pipeline layout")
}

/// Capacity point: the maximizing input weight and the value attained.
#[derive(Debug, Clone, Copy)]
pub struct CapacityPoint<T> {
    pub p_star: T,
    pub i_star: T,
}

/// Maximum of `I(A:CM)` over the input family, located by
/// golden-section search with absolute tolerance 1e-6 in `p`.
///
/// Over separable inputs this maximum is the Holevo capacity of the
/// switched channel; here the search is restricted to the one-parameter
/// family actually prepared, which is exhaustive for that family only.
pub fn holevo_over_family<T: Scalar>(
    temperature: Temperature<T>,
    s: ThermalizationStrength<T>,
    switch_on: bool,
) -> CapacityPoint<T> {
    let omega = if switch_on {
        ControlState::on()
    } else {
        ControlState::off()
    };
    let eval = |p: T| {
        family_mutual_information(
            temperature,
            s,
            InputParameter::new(p).expect("search stays in [0, 1]"),
            &omega,
        )
    };
    let (p_star, i_star) = golden_section_max(eval, T::zero(), T::one(), T::real(1e-6));
    CapacityPoint { p_star, i_star }
}

/// Brute-force grid oracle for [`holevo_over_family`]: evaluates the
/// objective on a uniform grid and returns the best point.  Guards the
/// unimodality assumption of the golden-section search.
pub fn holevo_grid_scan<T: Scalar>(
    temperature: Temperature<T>,
    s: ThermalizationStrength<T>,
    switch_on: bool,
    points: usize,
) -> CapacityPoint<T> {
    assert!(points >= 2, "grid scan needs at least two points");
    let omega = if switch_on {
        ControlState::on()
    } else {
        ControlState::off()
    };
    let mut best = CapacityPoint {
        p_star: T::zero(),
        i_star: T::neg_infinity(),
    };
    for k in 0..points {
        let p = T::from_usize(k).unwrap() / T::from_usize(points - 1).unwrap();
        let i = family_mutual_information(
            temperature,
            s,
            InputParameter::new(p).expect("grid stays in [0, 1]"),
            &omega,
        );
        if i > best.i_star {
            best = CapacityPoint { p_star: p, i_star: i };
        }
    }
    best
}

/// Golden-section search for the maximum of `f` on `[a, b]`.
fn golden_section_max<T: Scalar>(f: impl Fn(T) -> T, mut a: T, mut b: T, tol: T) -> (T, T) {
    let invphi = (T::real(5.0).sqrt() - T::one()) * T::real(0.5);
    let mut x1 = b - invphi * (b - a);
    let mut x2 = a + invphi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    let xm = (a + b) * T::real(0.5);
    (xm, f(xm))
}
