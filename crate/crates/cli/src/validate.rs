//! Self-check battery: residuals of every structural invariant the
//! simulator relies on, printed one line per check.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thermoswitch::infomeasures::{computational_basis, dephase, free_coherence};
use thermoswitch::qmath::{
    eig_hermitian, kron, random_density_matrix, random_hermitian, trace_distance, vn_entropy,
    ComplexMatrix, DensityMatrix, SubsystemLayout,
};
use thermoswitch::switch::switch_kraus;
use thermoswitch::thermal::{
    energy_conservation_residual, gibbs_state, thermal_channel, validate_channel, KrausChannel,
    Temperature, ThermalizationStrength,
};

type M = ComplexMatrix<f64>;

pub struct CheckLine {
    pub name: &'static str,
    pub detail: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl CheckLine {
    fn new(name: &'static str, detail: String, residual: f64, tol: f64) -> Self {
        Self {
            name,
            detail,
            residual,
            tol,
            pass: residual <= tol,
        }
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} residual={:.3e} tol={:.0e} {}",
            self.name,
            self.detail,
            self.residual,
            self.tol,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

const STRUCT_TOL: f64 = 1e-10;
const COMMUTATOR_TOL: f64 = 1e-12;
const ENTROPY_TOL: f64 = 1e-9;
const RANDOM_TRIALS: usize = 5;

pub fn run_battery(grid_points: usize, seed: u64, inject_fault: bool) -> Vec<CheckLine> {
    let mut lines = Vec::new();
    let temps = [
        Temperature::Zero,
        Temperature::Infinite,
        Temperature::finite(1.0).expect("positive"),
    ];
    let grid: Vec<f64> = (0..grid_points)
        .map(|k| k as f64 / (grid_points - 1) as f64)
        .collect();

    for &temperature in &temps {
        let tau = gibbs_state(temperature);
        for &s in &grid {
            let strength = ThermalizationStrength::new(s).expect("grid in range");
            let channel = thermal_channel(temperature, strength);
            let detail = format!("T={temperature} s={s:.6}");

            let out = channel.apply(&tau).expect("qubit channel");
            let gibbs_residual = trace_distance(&out, &tau).expect("same dims");
            lines.push(CheckLine::new("gibbs-fixed-point", detail.clone(), gibbs_residual, STRUCT_TOL));

            let report = validate_channel(&channel);
            lines.push(CheckLine::new(
                "channel-completeness",
                detail.clone(),
                report.completeness_residual,
                STRUCT_TOL,
            ));
            lines.push(CheckLine::new(
                "channel-trace-preservation",
                detail.clone(),
                report.trace_residual,
                STRUCT_TOL,
            ));

            let ws = switch_kraus(channel.ops(), channel.ops()).expect("qubit Kraus sets");
            let mut sum = M::zeros(4, 4);
            for w in &ws {
                sum = &sum + &(&w.adjoint() * w);
            }
            lines.push(CheckLine::new(
                "switch-cptp",
                detail.clone(),
                sum.max_abs_diff(&M::identity(4)),
                STRUCT_TOL,
            ));

            let id = M::identity(2);
            let mut sum8 = M::zeros(8, 8);
            for w in &ws {
                let lifted = kron(&id, w);
                sum8 = &sum8 + &(&lifted.adjoint() * &lifted);
            }
            lines.push(CheckLine::new(
                "joint-cptp",
                detail,
                sum8.max_abs_diff(&M::identity(8)),
                STRUCT_TOL,
            ));
        }
    }

    for &s in &grid {
        let strength = ThermalizationStrength::new(s).expect("grid in range");
        lines.push(CheckLine::new(
            "commutator",
            format!("s={s:.6}"),
            energy_conservation_residual(strength),
            COMMUTATOR_TOL,
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pair = SubsystemLayout::qubits(&["A", "B"]).expect("static layout");
    let basis = computational_basis::<f64>(4);
    for trial in 0..RANDOM_TRIALS {
        let rho = random_density_matrix::<f64>(&mut rng, pair.clone());
        let detail = format!("trial={trial}");

        let u = eig_hermitian(&random_hermitian::<f64>(&mut rng, 4))
            .expect("Hermitian input")
            .vectors;
        let rotated = DensityMatrix::new(&(&u * rho.matrix()) * &u.adjoint(), pair.clone())
            .expect("rotation preserves validity");
        lines.push(CheckLine::new(
            "entropy-unitary-invariance",
            detail.clone(),
            (vn_entropy(&rho) - vn_entropy(&rotated)).abs(),
            ENTROPY_TOL,
        ));

        let sa = vn_entropy(&rho.partial_trace(&["A"]).expect("label exists"));
        let sb = vn_entropy(&rho.partial_trace(&["B"]).expect("label exists"));
        lines.push(CheckLine::new(
            "entropy-subadditivity",
            detail.clone(),
            (vn_entropy(&rho) - sa - sb).max(0.0),
            ENTROPY_TOL,
        ));

        let dephased = dephase(&rho, &basis).expect("orthonormal basis");
        let via_trace = free_coherence(&rho, &basis).expect("valid state");
        let via_entropy = vn_entropy(&dephased) - vn_entropy(&rho);
        lines.push(CheckLine::new(
            "free-coherence-identity",
            detail.clone(),
            (via_trace - via_entropy).abs(),
            ENTROPY_TOL,
        ));

        let twice = dephase(&dephased, &basis).expect("orthonormal basis");
        lines.push(CheckLine::new(
            "dephase-idempotence",
            detail,
            dephased.max_abs_diff(&twice),
            STRUCT_TOL,
        ));
    }

    if inject_fault {
        let half = KrausChannel::from_ops_unchecked(vec![M::identity(2).scale_real(0.5)])
            .expect("well-shaped operators");
        let report = validate_channel(&half);
        lines.push(CheckLine::new(
            "injected-fault",
            "deliberately incomplete Kraus set {I/2}".into(),
            report.completeness_residual,
            STRUCT_TOL,
        ));
    }

    lines
}
