//! Labeled tensor-product structure and validated density matrices.

use num_complex::Complex;

use super::eig::eig_hermitian;
use super::{require, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Ordered list of labeled subsystem dimensions.  Gives meaning to the
/// tensor indices of any state that carries it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemLayout {
    parts: Vec<(String, usize)>,
}

impl SubsystemLayout {
    pub fn new(parts: &[(&str, usize)]) -> Result<Self> {
        require(!parts.is_empty(), || {
            Error::InvalidArgument("layout needs at least one subsystem".into())
        })?;
        for (label, dim) in parts {
            require(*dim > 0, || {
                Error::InvalidArgument(format!("subsystem `{label}` has dimension 0"))
            })?;
        }
        for (i, (label, _)) in parts.iter().enumerate() {
            require(parts[..i].iter().all(|(l, _)| l != label), || {
                Error::InvalidArgument(format!("duplicate subsystem label `{label}`"))
            })?;
        }
        Ok(Self {
            parts: parts.iter().map(|(l, d)| (l.to_string(), *d)).collect(),
        })
    }

    /// Layout of qubit subsystems with the given labels.
    pub fn qubits(labels: &[&str]) -> Result<Self> {
        let parts: Vec<(&str, usize)> = labels.iter().map(|&l| (l, 2)).collect();
        Self::new(&parts)
    }

    /// Single qubit labeled `M`, the information carrier.
    pub fn carrier_qubit() -> Self {
        Self::qubits(&["M"]).expect("static layout")
    }

    pub fn total_dim(&self) -> usize {
        self.parts.iter().map(|(_, d)| d).product()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.parts.iter().map(|(l, _)| l.as_str()).collect()
    }

    pub fn parts(&self) -> &[(String, usize)] {
        &self.parts
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.parts.iter().position(|(l, _)| l == label)
    }

    /// Row-major stride of each subsystem index.
    fn strides(&self) -> Vec<usize> {
        let n = self.parts.len();
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.parts[i + 1].1;
        }
        strides
    }
}

/// Trace-one positive-semidefinite Hermitian matrix with a subsystem
/// layout.  Construction validates all three properties, so a value of
/// this type is always a physical state (within tolerance).
#[derive(Debug, Clone)]
pub struct DensityMatrix<T> {
    matrix: ComplexMatrix<T>,
    layout: SubsystemLayout,
}

impl<T: Scalar> DensityMatrix<T> {
    /// Validates hermiticity, unit trace and positive semidefiniteness
    /// within [`Scalar::validity_tol`], and that the layout matches the
    /// matrix dimension.
    pub fn new(matrix: ComplexMatrix<T>, layout: SubsystemLayout) -> Result<Self> {
        let tol = T::validity_tol();
        require(matrix.is_square(), || {
            Error::InvalidState(format!("state matrix is {}x{}", matrix.rows(), matrix.cols()))
        })?;
        require(matrix.all_finite(), || {
            Error::InvalidState("state has non-finite entries".into())
        })?;
        require(layout.total_dim() == matrix.dim(), || {
            Error::DimMismatch(format!(
                "layout dimension {} does not match matrix dimension {}",
                layout.total_dim(),
                matrix.dim()
            ))
        })?;
        let herm = matrix.hermiticity_residual();
        require(herm <= tol, || {
            Error::InvalidState(format!("hermiticity residual {herm:e} exceeds tolerance"))
        })?;
        let tr = matrix.trace();
        let tr_residual = (tr - Complex::new(T::one(), T::zero())).norm();
        require(tr_residual <= tol, || {
            Error::InvalidState(format!("trace residual {tr_residual:e} exceeds tolerance"))
        })?;
        let eig = eig_hermitian(&matrix)?;
        let min = eig.values[0];
        require(min >= -tol, || {
            Error::InvalidState(format!("minimum eigenvalue {min:e} below PSD floor"))
        })?;
        Ok(Self { matrix, layout })
    }

    /// Pure state |ψ⟩⟨ψ| from an already-normalized ket.
    pub fn from_ket(ket: &[Complex<T>], layout: SubsystemLayout) -> Result<Self> {
        Self::new(ComplexMatrix::outer(ket, ket), layout)
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Eigenvalues ascending, clamped into `[0, 1]` at the PSD floor.
    pub fn spectrum(&self) -> Vec<T> {
        let eig = eig_hermitian(&self.matrix).expect("validated state is Hermitian");
        eig.values
            .into_iter()
            .map(|v| v.max(T::zero()))
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.matrix.max_abs_diff(&other.matrix)
    }

    /// Reduced state on `keep`, in layout order; the remaining
    /// subsystems are traced out.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<DensityMatrix<T>> {
        require(!keep.is_empty(), || {
            Error::InvalidArgument("partial trace must keep at least one subsystem".into())
        })?;
        let mut keep_pos = Vec::with_capacity(keep.len());
        for label in keep {
            let pos = self
                .layout
                .position(label)
                .ok_or_else(|| Error::UnknownLabel((*label).to_string()))?;
            require(!keep_pos.contains(&pos), || {
                Error::InvalidArgument(format!("label `{label}` listed twice"))
            })?;
            keep_pos.push(pos);
        }
        keep_pos.sort_unstable();

        let parts = self.layout.parts();
        let strides = self.layout.strides();
        let trace_pos: Vec<usize> =
            (0..parts.len()).filter(|p| !keep_pos.contains(p)).collect();

        let kept_dims: Vec<usize> = keep_pos.iter().map(|&p| parts[p].1).collect();
        let traced_dims: Vec<usize> = trace_pos.iter().map(|&p| parts[p].1).collect();
        let out_dim: usize = kept_dims.iter().product();
        let trace_dim: usize = traced_dims.iter().product();

        // base index of a multi-index within the full matrix
        let expand = |digits_dims: &[usize], positions: &[usize], mut flat: usize| -> usize {
            let mut base = 0usize;
            for (k, &pos) in positions.iter().enumerate().rev() {
                let d = digits_dims[k];
                base += (flat % d) * strides[pos];
                flat /= d;
            }
            base
        };

        let mut out = ComplexMatrix::zeros(out_dim.max(1), out_dim.max(1));
        for i in 0..out_dim {
            let bi = expand(&kept_dims, &keep_pos, i);
            for j in 0..out_dim {
                let bj = expand(&kept_dims, &keep_pos, j);
                let mut acc = Complex::new(T::zero(), T::zero());
                for t in 0..trace_dim {
                    let bt = expand(&traced_dims, &trace_pos, t);
                    acc += self.matrix[(bi + bt, bj + bt)];
                }
                out[(i, j)] = acc;
            }
        }

        let kept_parts: Vec<(&str, usize)> = keep_pos
            .iter()
            .map(|&p| (parts[p].0.as_str(), parts[p].1))
            .collect();
        DensityMatrix::new(out, SubsystemLayout::new(&kept_parts)?)
    }
}
