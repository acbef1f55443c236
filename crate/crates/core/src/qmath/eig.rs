//! Eigendecomposition of complex Hermitian matrices by cyclic Jacobi
//! rotations.  The matrices here never exceed 16×16, where Jacobi
//! converges in a handful of sweeps and is accurate to machine
//! precision, so nothing fancier is warranted.

use num_complex::Complex;

use super::{require, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Result of [`eig_hermitian`]: eigenvalues ascending, eigenvectors as
/// orthonormal columns of `vectors` in matching order.
#[derive(Debug, Clone)]
pub struct HermitianEig<T> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Scalar> HermitianEig<T> {
    /// Rebuild `Σ f(λᵢ) vᵢvᵢ†`, skipping eigenvalues for which `f`
    /// returns `None`.
    pub fn map_rebuild(&self, f: impl Fn(T) -> Option<T>) -> ComplexMatrix<T> {
        let n = self.vectors.rows();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let Some(fl) = f(lambda) else { continue };
            let col = self.vectors.column(k);
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += col[i] * col[j].conj() * Complex::new(fl, T::zero());
                }
            }
        }
        out
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input must be Hermitian within [`Scalar::hermiticity_tol`];
/// it is symmetrized before iteration so the returned eigenvalues are
/// exactly real.  `V diag(λ) V†` reconstructs the input to roughly
/// machine precision.
pub fn eig_hermitian<T: Scalar>(m: &ComplexMatrix<T>) -> Result<HermitianEig<T>> {
    require(m.is_square(), || {
        Error::DimMismatch(format!("eigendecomposition needs a square matrix, got {}x{}", m.rows(), m.cols()))
    })?;
    require(m.all_finite(), || {
        Error::InvalidArgument("matrix has non-finite entries".into())
    })?;
    require(m.hermiticity_residual() <= T::hermiticity_tol(), || {
        Error::InvalidArgument(format!(
            "matrix is not Hermitian (residual {:e})",
            m.hermiticity_residual()
        ))
    })?;

    let n = m.dim();
    // Work on the Hermitian part so roundoff asymmetry cannot leak
    // imaginary parts into the spectrum.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()).unscale(T::real(2.0)));
    let mut v = ComplexMatrix::identity(n);

    let scale = a.fro_norm().max(T::one());
    let tol = scale * T::epsilon() * T::from_usize(n).unwrap();

    for _sweep in 0..60 {
        let mut off = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[(i, j)].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }

        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let beta = apq.norm();
                if beta <= scale * T::epsilon() {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (beta + beta);
                let t = if theta >= T::zero() {
                    T::one() / (theta + (theta * theta + T::one()).sqrt())
                } else {
                    -T::one() / (-theta + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let phase = apq.unscale(beta);
                let s = phase.scale(t * c);

                rotate_columns(&mut a, p, q, c, s);
                rotate_rows(&mut a, p, q, c, s);
                rotate_columns(&mut v, p, q, c, s);

                // the rotation zeroes this element by construction
                a[(p, q)] = Complex::new(T::zero(), T::zero());
                a[(q, p)] = Complex::new(T::zero(), T::zero());
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));

    let values: Vec<T> = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEig { values, vectors })
}

/// `M ← M · V(p,q,c,s)` where the plane rotation has
/// `V[p][p]=c, V[p][q]=s, V[q][p]=-s̄, V[q][q]=c` and real `c`.
fn rotate_columns<T: Scalar>(m: &mut ComplexMatrix<T>, p: usize, q: usize, c: T, s: Complex<T>) {
    for k in 0..m.rows() {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp.scale(c) - mkq * s.conj();
        m[(k, q)] = mkp * s + mkq.scale(c);
    }
}

/// `M ← V(p,q,c,s)† · M`.
fn rotate_rows<T: Scalar>(m: &mut ComplexMatrix<T>, p: usize, q: usize, c: T, s: Complex<T>) {
    for k in 0..m.cols() {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = mpk.scale(c) - mqk * s;
        m[(q, k)] = mpk * s.conj() + mqk.scale(c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::random_hermitian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type M = ComplexMatrix<f64>;

    #[test]
    fn diagonal_matrix_eigenvalues_ascend() {
        let eig = eig_hermitian(&M::from_real_diag(&[2.0, 1.0])).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn plus_projector_is_rank_one() {
        let h = Complex::new(0.5, 0.0);
        let plus = M::from_fn(2, 2, |_, _| h);
        let eig = eig_hermitian(&plus).unwrap();
        assert!(eig.values[0].abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_hermitian_reconstructs_and_is_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in [2usize, 3, 4, 8, 16] {
            let h = random_hermitian::<f64>(&mut rng, dim);
            let eig = eig_hermitian(&h).unwrap();

            let vtv = &eig.vectors.adjoint() * &eig.vectors;
            assert!(vtv.max_abs_diff(&M::identity(dim)) < 1e-9, "dim {dim}");

            let rebuilt = eig.map_rebuild(Some);
            assert!(rebuilt.max_abs_diff(&h) < 1e-9, "dim {dim}");
        }
    }

    #[test]
    fn rejects_non_hermitian_input() {
        let mut m = M::identity(2);
        m[(0, 1)] = Complex::new(0.5, 0.0);
        assert!(eig_hermitian(&m).is_err());
    }
}
