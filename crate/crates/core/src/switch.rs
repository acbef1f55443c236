//! The quantum switch: two channels applied in a superposition of the
//! two orderings, conditioned on a control qubit C.
//!
//! For Kraus sets {E_i} and {F_j} the switch operators on M⊗C are
//!
//! ```text
//! W_ij = E_i F_j ⊗ |0⟩⟨0| + F_j E_i ⊗ |1⟩⟨1|
//! ```
//!
//! Ordering convention: control |0⟩ means the *first* channel argument
//! acts first.  Operator products apply right to left, so the first
//! channel's Kraus operators sit on the right factor of the |0⟩ branch.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qmath::{basis_ket, eig_hermitian, kron, require, ComplexMatrix, DensityMatrix, SubsystemLayout};
use crate::scalar::Scalar;
use crate::thermal::KrausChannel;

/// State of the switch's control qubit in the {|0⟩, |1⟩} basis.
#[derive(Debug, Clone)]
pub struct ControlState<T>(DensityMatrix<T>);

impl<T: Scalar> ControlState<T> {
    pub fn new(state: DensityMatrix<T>) -> Result<Self> {
        require(state.dim() == 2, || {
            Error::DimMismatch(format!("control qubit must be 2-dimensional, got {}", state.dim()))
        })?;
        Ok(Self(state))
    }

    fn pure(ket: &[Complex<T>]) -> Self {
        let layout = SubsystemLayout::qubits(&["C"]).expect("static layout");
        Self(DensityMatrix::from_ket(ket, layout).expect("valid pure control state"))
    }

    /// Switch on: control in `|+⟩⟨+|`, superposing the two orders.
    pub fn on() -> Self {
        let h = T::real(0.5).sqrt();
        Self::pure(&[Complex::new(h, T::zero()), Complex::new(h, T::zero())])
    }

    /// Switch off: control in `|0⟩⟨0|`, fixing the definite order.
    pub fn off() -> Self {
        Self::pure(&basis_ket(2, 0))
    }

    pub fn state(&self) -> &DensityMatrix<T> {
        &self.0
    }
}

/// Switch Kraus operators `W_ij` on M⊗C from two qubit Kraus sets.
pub fn switch_kraus<T: Scalar>(
    e_ops: &[ComplexMatrix<T>],
    f_ops: &[ComplexMatrix<T>],
) -> Result<Vec<ComplexMatrix<T>>> {
    for op in e_ops.iter().chain(f_ops) {
        require(op.rows() == 2 && op.cols() == 2, || {
            Error::DimMismatch("switch operands must be qubit Kraus operators".into())
        })?;
    }
    let p0 = ComplexMatrix::outer(&basis_ket::<T>(2, 0), &basis_ket::<T>(2, 0));
    let p1 = ComplexMatrix::outer(&basis_ket::<T>(2, 1), &basis_ket::<T>(2, 1));

    let mut ws = Vec::with_capacity(e_ops.len() * f_ops.len());
    for e in e_ops {
        for f in f_ops {
            let w = &kron(&(e * f), &p0) + &kron(&(f * e), &p1);
            ws.push(w);
        }
    }
    Ok(ws)
}

/// The switch as an ordinary channel from M to M⊗C with the control
/// state fixed at construction: Kraus operators
/// `√q_m · W_ij · (I ⊗ |w_m⟩)` over the eigenpairs `(q_m, |w_m⟩)` of ω.
///
/// Control |0⟩ routes the carrier through `eps1` first, then `eps2`.
pub fn switched_channel<T: Scalar>(
    eps1: &KrausChannel<T>,
    eps2: &KrausChannel<T>,
    omega: &ControlState<T>,
) -> Result<KrausChannel<T>> {
    require(eps1.in_dim() == 2 && eps1.out_dim() == 2, || {
        Error::DimMismatch("eps1 must be a qubit channel".into())
    })?;
    require(eps2.in_dim() == 2 && eps2.out_dim() == 2, || {
        Error::DimMismatch("eps2 must be a qubit channel".into())
    })?;

    // |0⟩ branch carries E·F with F = eps1 acting first
    let ws = switch_kraus(eps2.ops(), eps1.ops())?;

    let omega_eig = eig_hermitian(omega.state().matrix())?;
    let id = ComplexMatrix::identity(2);

    let mut ops = Vec::with_capacity(ws.len() * 2);
    for (m, &weight) in omega_eig.values.iter().enumerate() {
        let root = weight.max(T::zero()).sqrt();
        let col = omega_eig.vectors.column(m);
        // I ⊗ |w_m⟩ as a 4x2 injection
        let inject = kron(&id, &ComplexMatrix::from_fn(2, 1, |i, _| col[i]));
        for w in &ws {
            ops.push((w * &inject).scale_real(root));
        }
    }
    KrausChannel::from_ops(ops)
}

/// Layout of the joint output state, in order (A, M, C).
pub fn joint_layout() -> SubsystemLayout {
    SubsystemLayout::qubits(&["A", "M", "C"]).expect("static layout")
}

/// Send the M half of a two-qubit A-M state through the switched
/// channel, leaving A untouched.  Output lives on A⊗M⊗C.
pub fn apply_switch_joint<T: Scalar>(
    rho_am: &DensityMatrix<T>,
    eps1: &KrausChannel<T>,
    eps2: &KrausChannel<T>,
    omega: &ControlState<T>,
) -> Result<DensityMatrix<T>> {
    let labels = rho_am.layout().labels();
    require(labels == ["A", "M"] && rho_am.dim() == 4, || {
        Error::DimMismatch(format!("expected a two-qubit state with layout (A, M), got {labels:?}"))
    })?;
    let switched = switched_channel(eps1, eps2, omega)?;
    let id = ComplexMatrix::identity(2);
    let lifted: Vec<ComplexMatrix<T>> = switched.ops().iter().map(|v| kron(&id, v)).collect();
    KrausChannel::from_ops(lifted)?.apply_into(rho_am, joint_layout())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infomeasures::{input_state, InputParameter};
    use crate::qmath::random_density_matrix;
    use crate::thermal::{compose, thermal_channel, Temperature, ThermalizationStrength};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type M = ComplexMatrix<f64>;

    fn strength(s: f64) -> ThermalizationStrength<f64> {
        ThermalizationStrength::new(s).unwrap()
    }

    fn carrier(rng: &mut ChaCha8Rng) -> DensityMatrix<f64> {
        random_density_matrix(rng, SubsystemLayout::carrier_qubit())
    }

    fn mc_layout() -> SubsystemLayout {
        SubsystemLayout::qubits(&["M", "C"]).unwrap()
    }

    #[test]
    fn identity_pair_gives_identity_switch() {
        let ws = switch_kraus(&[M::identity(2)], &[M::identity(2)]).unwrap();
        assert_eq!(ws.len(), 1);
        assert!(ws[0].max_abs_diff(&M::identity(4)) < 1e-15);
    }

    #[test]
    fn switch_kraus_is_complete() {
        let eps = thermal_channel(Temperature::Infinite, strength(0.6));
        let ws = switch_kraus(eps.ops(), eps.ops()).unwrap();
        assert_eq!(ws.len(), 16);
        let mut sum = M::zeros(4, 4);
        for w in &ws {
            sum = &sum + &(&w.adjoint() * w);
        }
        assert!(sum.max_abs_diff(&M::identity(4)) < 1e-12);
    }

    #[test]
    fn reset_pair_only_outputs_ground_on_m() {
        let eps = thermal_channel(Temperature::Zero, strength(1.0));
        let ws = switch_kraus(eps.ops(), eps.ops()).unwrap();
        // every surviving operator maps into M = |g⟩; rows with M = |e⟩
        // (indices 2 and 3 of M⊗C) vanish identically
        let mut any_nonzero = false;
        for w in &ws {
            any_nonzero |= w.max_abs() > 0.0;
            for row in [2, 3] {
                for col in 0..4 {
                    assert_eq!(w[(row, col)].norm(), 0.0);
                }
            }
        }
        assert!(any_nonzero);
    }

    #[test]
    fn definite_order_reduces_to_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let eps = thermal_channel(Temperature::Finite(1.0), strength(0.45));
        let switched = switched_channel(&eps, &eps, &ControlState::off()).unwrap();
        let rho = carrier(&mut rng);

        let out = switched.apply_into(&rho, mc_layout()).unwrap();
        let twice = compose(&eps, &eps).unwrap().apply(&rho).unwrap();
        let expected = kron(
            twice.matrix(),
            &M::from_real_diag(&[1.0, 0.0]),
        );
        assert!(out.matrix().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn zero_strength_passes_everything_through() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let eps = thermal_channel(Temperature::Zero, strength(0.0));
        let switched = switched_channel(&eps, &eps, &ControlState::on()).unwrap();
        let rho = carrier(&mut rng);
        let out = switched.apply_into(&rho, mc_layout()).unwrap();
        let expected = kron(rho.matrix(), ControlState::<f64>::on().state().matrix());
        assert!(out.matrix().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn cold_full_swap_closed_form() {
        // ε₁ = ε₂ = reset-to-ground, ω = |+⟩⟨+|, ρ = diag(p, 1-p):
        // output is |g⟩⟨g| ⊗ (p|+⟩⟨+| + (1-p)·I/2)
        let p = 0.3;
        let eps = thermal_channel(Temperature::Zero, strength(1.0));
        let rho = DensityMatrix::new(
            M::from_real_diag(&[p, 1.0 - p]),
            SubsystemLayout::carrier_qubit(),
        )
        .unwrap();
        let out = switched_channel(&eps, &eps, &ControlState::on())
            .unwrap()
            .apply_into(&rho, mc_layout())
            .unwrap();

        let plus = ControlState::<f64>::on();
        let c_part = &plus.state().matrix().scale_real(p)
            + &M::from_real_diag(&[0.5, 0.5]).scale_real(1.0 - p);
        let expected = kron(&M::from_real_diag(&[1.0, 0.0]), &c_part);
        assert!(out.matrix().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn branch_convention_with_distinct_channels() {
        // eps1 resets to |g⟩, eps2 flips g↔e.  Control |0⟩ must route
        // through eps1 first, so the M output is |e⟩⟨e|.
        let reset = thermal_channel(Temperature::Zero, strength(1.0));
        let mut x = M::zeros(2, 2);
        x[(0, 1)] = Complex::new(1.0, 0.0);
        x[(1, 0)] = Complex::new(1.0, 0.0);
        let flip = KrausChannel::from_ops(vec![x]).unwrap();

        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let rho = carrier(&mut rng);
        let out = switched_channel(&reset, &flip, &ControlState::off())
            .unwrap()
            .apply_into(&rho, mc_layout())
            .unwrap();
        let m_part = out.partial_trace(&["M"]).unwrap();
        assert!(m_part.matrix().max_abs_diff(&M::from_real_diag(&[0.0, 1.0])) < 1e-12);

        // opposite order: flip first, then reset, leaving |g⟩⟨g|
        let swapped = switched_channel(&flip, &reset, &ControlState::off())
            .unwrap()
            .apply_into(&rho, mc_layout())
            .unwrap();
        let m_part = swapped.partial_trace(&["M"]).unwrap();
        assert!(m_part.matrix().max_abs_diff(&M::from_real_diag(&[1.0, 0.0])) < 1e-12);
    }

    #[test]
    fn order_branches_project_to_the_two_compositions() {
        let eps1 = thermal_channel(Temperature::Zero, strength(0.8));
        let eps2 = thermal_channel(Temperature::Infinite, strength(0.35));
        let omega = ControlState::on();
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let rho = carrier(&mut rng);

        let out = switched_channel(&eps1, &eps2, &omega)
            .unwrap()
            .apply_into(&rho, mc_layout())
            .unwrap();

        // unnormalized control projections, traced over C, divided by ω_kk
        for (k, pair) in [(0usize, (&eps2, &eps1)), (1usize, (&eps1, &eps2))] {
            let omega_kk = omega.state().matrix()[(k, k)].re;
            let mut block = M::zeros(2, 2);
            for i in 0..2 {
                for j in 0..2 {
                    block[(i, j)] = out.matrix()[(2 * i + k, 2 * j + k)];
                }
            }
            let block = block.scale_real(1.0 / omega_kk);
            let expected = compose(pair.0, pair.1).unwrap().apply(&rho).unwrap();
            assert!(block.max_abs_diff(expected.matrix()) < 1e-10, "branch {k}");
        }
    }

    #[test]
    fn diagonal_control_marginal_is_branch_independent() {
        let eps = thermal_channel(Temperature::Finite(2.0), strength(0.7));
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        let rho = carrier(&mut rng);

        let excited = ControlState::new(
            DensityMatrix::from_ket(&basis_ket(2, 1), SubsystemLayout::qubits(&["C"]).unwrap())
                .unwrap(),
        )
        .unwrap();
        let m_off = switched_channel(&eps, &eps, &ControlState::off())
            .unwrap()
            .apply_into(&rho, mc_layout())
            .unwrap()
            .partial_trace(&["M"])
            .unwrap();
        let m_exc = switched_channel(&eps, &eps, &excited)
            .unwrap()
            .apply_into(&rho, mc_layout())
            .unwrap()
            .partial_trace(&["M"])
            .unwrap();
        assert!(m_off.max_abs_diff(&m_exc) < 1e-12);
    }

    #[test]
    fn joint_application_leaves_a_untouched() {
        let eps = thermal_channel(Temperature::Infinite, strength(0.9));
        let omega = ControlState::on();

        // s = 0 leaves the joint state in a product with ω
        let rho = input_state(InputParameter::new(0.37).unwrap());
        let idle = apply_switch_joint(
            &rho,
            &thermal_channel(Temperature::Infinite, strength(0.0)),
            &thermal_channel(Temperature::Infinite, strength(0.0)),
            &omega,
        )
        .unwrap();
        let expected = kron(rho.matrix(), omega.state().matrix());
        assert!(idle.matrix().max_abs_diff(&expected) < 1e-12);
        assert_eq!(idle.layout().labels(), vec!["A", "M", "C"]);

        // p = 1 pins A to |g⟩⟨g| exactly
        let pinned = apply_switch_joint(
            &input_state(InputParameter::new(1.0).unwrap()),
            &eps,
            &eps,
            &omega,
        )
        .unwrap();
        let a = pinned.partial_trace(&["A"]).unwrap();
        assert!(a.matrix().max_abs_diff(&M::from_real_diag(&[1.0, 0.0])) < 1e-12);

        // A marginal is invariant for any input
        let rho = input_state(InputParameter::new(0.62).unwrap());
        let out = apply_switch_joint(&rho, &eps, &eps, &omega).unwrap();
        let a_in = rho.partial_trace(&["A"]).unwrap();
        let a_out = out.partial_trace(&["A"]).unwrap();
        assert!(a_in.max_abs_diff(&a_out) < 1e-10);
    }

    #[test]
    fn cold_full_swap_joint_closed_form() {
        // Eq-family input at p = 1/2 through the reset pair:
        // ½|g⟩⟨g|⊗|g⟩⟨g|⊗|+⟩⟨+| + ½|e⟩⟨e|⊗|g⟩⟨g|⊗I/2
        let eps = thermal_channel(Temperature::Zero, strength(1.0));
        let out = apply_switch_joint(
            &input_state(InputParameter::new(0.5).unwrap()),
            &eps,
            &eps,
            &ControlState::on(),
        )
        .unwrap();

        let g = M::from_real_diag(&[1.0, 0.0]);
        let e = M::from_real_diag(&[0.0, 1.0]);
        let plus = ControlState::<f64>::on();
        let half_mixed = M::from_real_diag(&[0.5, 0.5]);
        let expected = &kron(&kron(&g, &g), plus.state().matrix()).scale_real(0.5)
            + &kron(&kron(&e, &g), &half_mixed).scale_real(0.5);
        assert!(out.matrix().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn joint_kraus_set_is_cptp() {
        let id = M::identity(2);
        for temperature in [Temperature::Zero, Temperature::Infinite, Temperature::Finite(1.0)] {
            for k in 0..=10 {
                let eps = thermal_channel(temperature, strength(k as f64 / 10.0));

                // lifted switch operators I ⊗ W on the full A-M-C space
                let ws = switch_kraus(eps.ops(), eps.ops()).unwrap();
                let mut sum8 = M::zeros(8, 8);
                for w in &ws {
                    let lifted = kron(&id, w);
                    sum8 = &sum8 + &(&lifted.adjoint() * &lifted);
                }
                assert!(sum8.max_abs_diff(&M::identity(8)) < 1e-10);

                // ω-fixed channel completeness on its A⊗M input
                let switched = switched_channel(&eps, &eps, &ControlState::on()).unwrap();
                let mut sum4 = M::zeros(4, 4);
                for v in switched.ops() {
                    let lifted = kron(&id, v);
                    sum4 = &sum4 + &(&lifted.adjoint() * &lifted);
                }
                assert!(sum4.max_abs_diff(&M::identity(4)) < 1e-10);
            }
        }
    }
}
