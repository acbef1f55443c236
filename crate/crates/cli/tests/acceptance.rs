//! Acceptance suite: one test per release criterion, each printing a
//! single PASS/FAIL line (visible with `--nocapture`).
//!
//!     cargo test -p thermoswitch-cli --test acceptance -- --nocapture

use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

use thermoswitch::emulator::{
    born_probabilities, monte_carlo_metrics, reconstruct_from_frequencies, MeasurementSetting,
    RandomSeed,
};
use thermoswitch::infomeasures::{
    family_mutual_information, family_output, holevo_grid_scan, holevo_over_family,
    mutual_information, Bipartition, InputParameter,
};
use thermoswitch::qmath::{
    kron, random_density_matrix, trace_distance, ComplexMatrix, DensityMatrix, SubsystemLayout,
};
use thermoswitch::switch::{apply_switch_joint, joint_layout, switch_kraus, ControlState};
use thermoswitch::sweep::{find_turning_point, non_markovianity, run_sweep, SweepConfig};
use thermoswitch::thermal::{
    gibbs_state, partial_swap_unitary, thermal_channel, Temperature, ThermalizationStrength,
};

type M = ComplexMatrix<f64>;

fn criterion(number: usize, summary: &str, body: impl FnOnce() + UnwindSafe) {
    let outcome = catch_unwind(body);
    match &outcome {
        Ok(()) => println!("CRITERION {number:>2} PASS: {summary}"),
        Err(_) => println!("CRITERION {number:>2} FAIL: {summary}"),
    }
    if let Err(panic) = outcome {
        resume_unwind(panic);
    }
}

fn temperatures() -> [Temperature<f64>; 3] {
    [
        Temperature::Zero,
        Temperature::Infinite,
        Temperature::finite(1.0).unwrap(),
    ]
}

fn strength(s: f64) -> ThermalizationStrength<f64> {
    ThermalizationStrength::new(s).unwrap()
}

fn param(p: f64) -> InputParameter<f64> {
    InputParameter::new(p).unwrap()
}

fn binary_entropy(x: f64) -> f64 {
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

#[test]
fn criterion_01_gibbs_fixed_point() {
    criterion(1, "Gibbs state fixed over 101 strengths x 3 temperatures", || {
        let start = Instant::now();
        for temperature in temperatures() {
            let tau = gibbs_state(temperature);
            for k in 0..=100 {
                let channel = thermal_channel(temperature, strength(k as f64 / 100.0));
                let out = channel.apply(&tau).unwrap();
                let d = trace_distance(&out, &tau).unwrap();
                assert!(d <= 1e-10, "T={temperature} s={}: {d:e}", k as f64 / 100.0);
            }
        }
        assert!(start.elapsed() < Duration::from_secs(1), "{:?}", start.elapsed());
    });
}

#[test]
fn criterion_02_collision_model_oracle() {
    criterion(2, "Kraus channel equals Tr_B[U(rho x tau)U'] on random states", || {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(20_240_801);
        let layout = SubsystemLayout::new(&[("M", 2), ("B", 2)]).unwrap();
        for temperature in temperatures() {
            let tau = gibbs_state(temperature);
            for k in 0..=10 {
                let s = strength(k as f64 / 10.0);
                let channel = thermal_channel(temperature, s);
                let u = partial_swap_unitary(s);
                for _ in 0..100 {
                    let rho =
                        random_density_matrix(&mut rng, SubsystemLayout::carrier_qubit());
                    let via_kraus = channel.apply(&rho).unwrap();
                    let joint = kron(rho.matrix(), tau.matrix());
                    let evolved = &(&u * &joint) * &u.adjoint();
                    let reference = DensityMatrix::new(evolved, layout.clone())
                        .unwrap()
                        .partial_trace(&["M"])
                        .unwrap();
                    assert!(via_kraus.max_abs_diff(&reference) <= 1e-10);
                }
            }
        }
        assert!(start.elapsed() < Duration::from_secs(1), "{:?}", start.elapsed());
    });
}

#[test]
fn criterion_03_switch_cptp() {
    criterion(3, "switch Kraus operators satisfy completeness on M x C", || {
        let start = Instant::now();
        for temperature in temperatures() {
            for k in 0..=10 {
                let eps = thermal_channel(temperature, strength(k as f64 / 10.0));
                let ws = switch_kraus(eps.ops(), eps.ops()).unwrap();
                let mut sum = M::zeros(4, 4);
                for w in &ws {
                    sum = &sum + &(&w.adjoint() * w);
                }
                assert!(sum.max_abs_diff(&M::identity(4)) <= 1e-10);
            }
        }
        assert!(start.elapsed() < Duration::from_secs(1), "{:?}", start.elapsed());
    });
}

#[test]
fn criterion_04_anchor_values() {
    criterion(4, "anchor values of I(A:CM) at s=0 and s=1, p=1/2", || {
        let p = param(0.5);
        for temperature in [Temperature::Zero, Temperature::Infinite] {
            for omega in [ControlState::on(), ControlState::off()] {
                let i = family_mutual_information(temperature, strength(0.0), p, &omega);
                assert!((i - 1.0).abs() <= 1e-9, "s=0 anchor at T={temperature}");
            }
            let i_off = family_mutual_information(temperature, strength(1.0), p, &ControlState::off());
            assert!(i_off.abs() <= 1e-9, "s=1 switch-off anchor at T={temperature}");
        }

        // independent oracle: the closed-form 8-dim output state at
        // T=0, s=1, eigendecomposed by the generic machinery
        let g = M::from_real_diag(&[1.0, 0.0]);
        let e = M::from_real_diag(&[0.0, 1.0]);
        let plus = ControlState::<f64>::on();
        let half_mixed = M::from_real_diag(&[0.5, 0.5]);
        let closed_form = &kron(&kron(&g, &g), plus.state().matrix()).scale_real(0.5)
            + &kron(&kron(&e, &g), &half_mixed).scale_real(0.5);
        let oracle_state = DensityMatrix::new(closed_form, joint_layout()).unwrap();
        let oracle_i =
            mutual_information(&oracle_state, &Bipartition::new(&["A"], &["M", "C"])).unwrap();

        let analytic = 1.0 + binary_entropy(0.25) - 1.5;
        assert!((oracle_i - analytic).abs() <= 1e-9);
        assert!((analytic - 0.311278).abs() <= 1e-6);

        let pipeline = family_mutual_information(
            Temperature::Zero,
            strength(1.0),
            p,
            &ControlState::on(),
        );
        assert!((pipeline - oracle_i).abs() <= 1e-6, "pipeline {pipeline} vs oracle {oracle_i}");
    });
}

#[test]
fn criterion_05_turning_points() {
    criterion(5, "turning points inside [0.81, 0.83] and [0.88, 0.90]", || {
        let start = Instant::now();
        let cold = find_turning_point(Temperature::<f64>::Zero, param(0.5), true)
            .last()
            .expect("cold turning point exists");
        assert!((0.81..=0.83).contains(&cold), "cold tp {cold}");

        let hot = find_turning_point(Temperature::<f64>::Infinite, param(0.5), true)
            .last()
            .expect("hot turning point exists");
        assert!((0.88..=0.90).contains(&hot), "hot tp {hot}");
        assert!(start.elapsed() < Duration::from_secs(5), "{:?}", start.elapsed());
    });
}

#[test]
fn criterion_06_non_markovianity() {
    criterion(6, "backflow measure lands in the reference bands, routes agree", || {
        let cold = non_markovianity(Temperature::<f64>::Zero, param(0.5), true);
        assert!((cold.value() - 0.132).abs() <= 0.02, "cold N {}", cold.value());
        assert!(cold.residual() <= 1e-6, "cold residual {:e}", cold.residual());

        let hot = non_markovianity(Temperature::<f64>::Infinite, param(0.5), true);
        assert!((hot.value() - 0.014).abs() <= 0.01, "hot N {}", hot.value());
        assert!(hot.residual() <= 1e-6, "hot residual {:e}", hot.residual());

        let off = non_markovianity(Temperature::<f64>::Zero, param(0.5), false);
        assert_eq!(off.value(), 0.0);
    });
}

#[test]
fn criterion_07_capacity_optimizer() {
    criterion(7, "capacity optimizer finds p*=1/2 at infinite temperature", || {
        for s in [0.3, 0.6, 0.9] {
            let optimum = holevo_over_family(Temperature::<f64>::Infinite, strength(s), true);
            assert!(
                (optimum.p_star - 0.5).abs() <= 1e-3,
                "s={s}: p*={}",
                optimum.p_star
            );
            let oracle = holevo_grid_scan(Temperature::<f64>::Infinite, strength(s), true, 1001);
            assert!(
                (optimum.i_star - oracle.i_star).abs() <= 1e-4,
                "s={s}: optimizer {} vs grid {}",
                optimum.i_star,
                oracle.i_star
            );
        }
    });
}

#[test]
fn criterion_08_figure_shape_properties() {
    criterion(8, "sweep curves keep the expected monotonicity structure", || {
        let start = Instant::now();
        for temperature in [Temperature::Zero, Temperature::Infinite] {
            let cfg = SweepConfig::standard(temperature, param(0.5));
            let records = run_sweep(&cfg).unwrap();
            assert_eq!(records.len(), 101);
            for r in &records {
                assert!(r.delta_i >= -1e-9);
                assert!(r.i_on >= r.i_off - 1e-9);
            }
            for w in records.windows(2) {
                assert!(w[1].delta_i >= w[0].delta_i - 1e-9, "delta_i non-decreasing");
                assert!(w[1].a_c <= w[0].a_c + 1e-9, "a_c non-increasing");
            }
        }
        assert!(start.elapsed() < Duration::from_secs(1), "{:?}", start.elapsed());
    });
}

#[test]
fn criterion_09_emulator_quality() {
    criterion(9, "tomography emulation: exact round trip, 0.999 fidelity, 1/sqrt(N) bars", || {
        // noiseless round trip
        let mut rng = ChaCha8Rng::seed_from_u64(31_337);
        for _ in 0..3 {
            let rho = random_density_matrix::<f64>(&mut rng, joint_layout());
            let data: Vec<(MeasurementSetting, [f64; 8])> = MeasurementSetting::all()
                .into_iter()
                .map(|s| {
                    let probs = born_probabilities(&rho, &s).unwrap();
                    (s, probs)
                })
                .collect();
            let rebuilt = reconstruct_from_frequencies(&data).unwrap();
            assert!(rebuilt.max_abs_diff(&rho) <= 1e-9);
        }

        // mean fidelity at 1e6 shots on the Gibbs-check state
        let start = Instant::now();
        let tau = gibbs_state::<f64>(Temperature::Infinite);
        let am = DensityMatrix::new(
            kron(tau.matrix(), tau.matrix()),
            SubsystemLayout::qubits(&["A", "M"]).unwrap(),
        )
        .unwrap();
        let eps = thermal_channel(Temperature::Infinite, strength(0.6));
        let gibbs_joint = apply_switch_joint(&am, &eps, &eps, &ControlState::on()).unwrap();
        let high = monte_carlo_metrics(&gibbs_joint, 1_000_000, 100, RandomSeed(9)).unwrap();
        assert!(high.fidelity.mean >= 0.999, "mean fidelity {}", high.fidelity.mean);
        let hundred_trials = start.elapsed();

        // error bars scale like 1/sqrt(shots) within a factor-2 band
        let correlated = family_output(
            Temperature::Infinite,
            strength(0.6),
            param(0.5),
            &ControlState::on(),
        );
        let coarse = monte_carlo_metrics(&correlated, 10_000, 100, RandomSeed(9)).unwrap();
        let fine = monte_carlo_metrics(&correlated, 1_000_000, 100, RandomSeed(9)).unwrap();
        let ratio = coarse.mutual_information.std / fine.mutual_information.std;
        assert!((5.0..=20.0).contains(&ratio), "std ratio {ratio}");

        assert!(
            hundred_trials < Duration::from_secs(60),
            "100 trials took {hundred_trials:?}"
        );
    });
}

#[test]
fn criterion_10_deterministic_outputs() {
    criterion(10, "identical seeds give byte-identical CSV and JSON outputs", || {
        let dir = TempDir::new().unwrap();
        let run = |args: &[&str]| {
            let out = Command::new(env!("CARGO_BIN_EXE_thermoswitch"))
                .args(args)
                .current_dir(dir.path())
                .env_remove("THERMOSWITCH_SEED")
                .output()
                .expect("binary runs");
            assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        };

        let sweep_args = [
            "sweep", "--temperature", "zero", "--grid", "31", "--format", "json", "-o", "s.json",
        ];
        run(&sweep_args);
        let sweep1 = std::fs::read(dir.path().join("s.json")).unwrap();
        run(&sweep_args);
        let sweep2 = std::fs::read(dir.path().join("s.json")).unwrap();
        assert_eq!(sweep1, sweep2);

        let emulate_args = [
            "emulate", "--temperature", "inf", "--s", "0.6", "--shots", "5000", "--trials", "20",
            "--seed", "123", "-o", "e",
        ];
        run(&emulate_args);
        let counts1 = std::fs::read(dir.path().join("e_counts.csv")).unwrap();
        let metrics1 = std::fs::read(dir.path().join("e_metrics.json")).unwrap();
        run(&emulate_args);
        assert_eq!(counts1, std::fs::read(dir.path().join("e_counts.csv")).unwrap());
        assert_eq!(metrics1, std::fs::read(dir.path().join("e_metrics.json")).unwrap());
    });
}
