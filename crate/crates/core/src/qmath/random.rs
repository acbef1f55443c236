//! Seeded random states and operators, used by property tests and the
//! self-check battery.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use super::state::{DensityMatrix, SubsystemLayout};
use super::ComplexMatrix;
use crate::scalar::Scalar;

fn ginibre<T: Scalar>(rng: &mut impl Rng, dim: usize) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(T::real(re), T::real(im))
    })
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian<T: Scalar>(rng: &mut impl Rng, dim: usize) -> ComplexMatrix<T> {
    let g = ginibre(rng, dim);
    (&g + &g.adjoint()).scale_real(T::real(0.5))
}

/// Random full-rank density matrix `GG†/Tr(GG†)` on the given layout.
pub fn random_density_matrix<T: Scalar>(
    rng: &mut impl Rng,
    layout: SubsystemLayout,
) -> DensityMatrix<T> {
    let dim = layout.total_dim();
    let g = ginibre::<T>(rng, dim);
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    let rho = gg.scale_real(T::one() / tr);
    DensityMatrix::new(rho, layout).expect("Ginibre construction yields a valid state")
}
