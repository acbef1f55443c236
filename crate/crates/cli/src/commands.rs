//! Implementations of the six subcommands.

use serde_json::json;
use thermoswitch::emulator::{monte_carlo_metrics, sample_run, RandomSeed};
use thermoswitch::infomeasures::{
    family_mutual_information, free_energy_of_coherence, holevo_grid_scan, holevo_over_family,
};
use thermoswitch::sweep::{
    find_turning_point, non_markovianity, run_sweep, SweepConfig, TurningPoint,
};
use thermoswitch::switch::ControlState;
use thermoswitch::thermal::ThermalizationStrength;

use crate::config::{Merger, DEFAULT_SWEEP_GRID, DEFAULT_VALIDATE_GRID};
use crate::output::{json_number, sig6, write_text};
use crate::{validate, CapacityArgs, CliError, CurveArgs, EmulateArgs, Format, SweepArgs, ValidateArgs};

const GRID_ORACLE_POINTS: usize = 1001;
const OPTIMIZER_ORACLE_TOL: f64 = 1e-4;
const BACKFLOW_ROUTE_TOL: f64 = 1e-6;

pub fn cmd_sweep(merger: &Merger, args: &SweepArgs, full_precision: bool) -> Result<(), CliError> {
    let temperature = merger.temperature(args.temperature.as_deref())?;
    let p = merger.p(args.p)?;
    let points = merger.grid(args.grid, DEFAULT_SWEEP_GRID)?;
    let format = merger.format(args.format)?;
    let default_name = match format {
        Format::Csv => "sweep.csv",
        Format::Json => "sweep.json",
    };
    let path = merger.output(args.output.clone(), default_name);

    let cfg = SweepConfig::with_grid_points(temperature, p, points);
    let records = run_sweep(&cfg).map_err(|e| CliError::Usage(e.to_string()))?;

    let content = match format {
        Format::Csv => {
            let mut text = String::from("s,i_on,i_off,delta_i,a_c\n");
            for r in &records {
                text.push_str(&format!(
                    "{},{},{},{},{}\n",
                    sig6(r.s),
                    sig6(r.i_on),
                    sig6(r.i_off),
                    sig6(r.delta_i),
                    sig6(r.a_c)
                ));
            }
            text
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = records
                .iter()
                .map(|r| {
                    let mut row = json!({
                        "s": json_number(r.s, full_precision),
                        "i_on": json_number(r.i_on, full_precision),
                        "i_off": json_number(r.i_off, full_precision),
                        "delta_i": json_number(r.delta_i, full_precision),
                        "a_c": json_number(r.a_c, full_precision),
                    });
                    // free energy of coherence kT·A_C, finite T only
                    if let Some(f_coh) = free_energy_of_coherence(temperature, r.a_c) {
                        row["f_coh"] = json_number(f_coh, full_precision);
                    }
                    row
                })
                .collect();
            let doc = json!({
                "metadata": {
                    "command": "sweep",
                    "temperature": temperature.to_string(),
                    "p": p.value(),
                    "points": points,
                    "precision": if full_precision { "full" } else { "6 digits" },
                },
                "records": rows,
            });
            format!("{doc:#}\n")
        }
    };
    write_text(&path, &content)?;
    println!("wrote {} records to {}", records.len(), path.display());
    Ok(())
}

pub fn cmd_capacity(
    merger: &Merger,
    args: &CapacityArgs,
    full_precision: bool,
) -> Result<(), CliError> {
    let temperature = merger.temperature(args.temperature.as_deref())?;
    let s = merger.s(args.s)?;
    let switch_on = !args.switch_off;

    let optimum = holevo_over_family(temperature, s, switch_on);
    let grid = holevo_grid_scan(temperature, s, switch_on, GRID_ORACLE_POINTS);
    let agreement = (optimum.i_star - grid.i_star).abs();

    println!("temperature: {temperature}");
    println!("s: {}", sig6(s.value()));
    println!("switch: {}", if switch_on { "on" } else { "off" });
    println!("p_star: {}", sig6(optimum.p_star));
    println!("i_star: {}", sig6(optimum.i_star));
    println!("grid_oracle_i_star: {}", sig6(grid.i_star));
    println!("oracle_agreement: {agreement:.3e}");
    println!("note: maximization restricted to the correlated input family");

    if let Some(path) = &args.output {
        let doc = json!({
            "metadata": {
                "command": "capacity",
                "temperature": temperature.to_string(),
                "s": s.value(),
                "switch": if switch_on { "on" } else { "off" },
                "search": "golden-section, tolerance 1e-6 in p",
                "oracle": format!("{GRID_ORACLE_POINTS}-point grid scan"),
                "restriction": "input family parameterized by p only",
            },
            "p_star": json_number(optimum.p_star, full_precision),
            "i_star": json_number(optimum.i_star, full_precision),
            "grid_p_star": json_number(grid.p_star, full_precision),
            "grid_i_star": json_number(grid.i_star, full_precision),
            "oracle_agreement": agreement,
        });
        write_text(path, &format!("{doc:#}\n"))?;
    }

    if agreement > OPTIMIZER_ORACLE_TOL {
        return Err(CliError::Validation(format!(
            "optimizer disagrees with the grid oracle by {agreement:e}"
        )));
    }
    Ok(())
}

pub fn cmd_turning_point(merger: &Merger, args: &CurveArgs) -> Result<(), CliError> {
    let temperature = merger.temperature(args.temperature.as_deref())?;
    let p = merger.p(args.p)?;
    let switch_on = !args.switch_off;

    println!("temperature: {temperature}");
    println!("p: {}", sig6(p.value()));
    println!("switch: {}", if switch_on { "on" } else { "off" });

    let omega = if switch_on {
        ControlState::on()
    } else {
        ControlState::off()
    };
    match find_turning_point(temperature, p, switch_on) {
        TurningPoint::Absent => println!("turning point: none"),
        TurningPoint::Unique(s_tp) => {
            let i_tp = family_mutual_information(
                temperature,
                ThermalizationStrength::new(s_tp).expect("turning point stays in [0, 1]"),
                p,
                &omega,
            );
            println!("s_tp: {}", sig6(s_tp));
            println!("i_at_tp: {}", sig6(i_tp));
        }
        TurningPoint::Ambiguous(points) => {
            println!("turning point: ambiguous ({} sign changes)", points.len());
            for s_tp in points {
                println!("s_tp: {}", sig6(s_tp));
            }
        }
    }
    Ok(())
}

pub fn cmd_nonmarkov(merger: &Merger, args: &CurveArgs) -> Result<(), CliError> {
    let temperature = merger.temperature(args.temperature.as_deref())?;
    let p = merger.p(args.p)?;
    let switch_on = !args.switch_off;

    let measure = non_markovianity(temperature, p, switch_on);

    println!("temperature: {temperature}");
    println!("p: {}", sig6(p.value()));
    println!("switch: {}", if switch_on { "on" } else { "off" });
    match measure.turning_point {
        Some(tp) => println!("s_tp: {}", sig6(tp)),
        None => println!("s_tp: none"),
    }
    println!("n_endpoint: {}", sig6(measure.endpoint));
    println!("n_integral: {}", sig6(measure.integral));
    println!("route_residual: {:.3e}", measure.residual());
    println!("monotone_tail: {}", measure.monotone_tail);
    println!("n: {}", sig6(measure.value()));

    if measure.residual() > BACKFLOW_ROUTE_TOL {
        return Err(CliError::Validation(format!(
            "backflow routes disagree by {:e}",
            measure.residual()
        )));
    }
    Ok(())
}

pub fn cmd_emulate(
    merger: &Merger,
    args: &EmulateArgs,
    seed_flag: Option<u64>,
    full_precision: bool,
) -> Result<(), CliError> {
    let temperature = merger.temperature(args.temperature.as_deref())?;
    let s = merger.s(args.s)?;
    let p = merger.p(args.p)?;
    let shots = merger.shots(args.shots)?;
    let trials = merger.trials(args.trials)?;
    let seed = merger.seed(seed_flag);
    let format = merger.format(args.format)?;
    let prefix = merger.output(args.output.clone(), "emulate");

    let rho = thermoswitch::infomeasures::family_output(temperature, s, p, &ControlState::on());
    let tables = sample_run(&rho, shots, RandomSeed(seed))
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let report = monte_carlo_metrics(&rho, shots, trials, RandomSeed(seed))
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let counts_path = match format {
        Format::Csv => prefix.with_file_name(format!(
            "{}_counts.csv",
            prefix.file_name().unwrap_or_default().to_string_lossy()
        )),
        Format::Json => prefix.with_file_name(format!(
            "{}_counts.json",
            prefix.file_name().unwrap_or_default().to_string_lossy()
        )),
    };
    let counts_content = match format {
        Format::Csv => {
            let mut text = String::from("setting,shots,c0,c1,c2,c3,c4,c5,c6,c7\n");
            for t in &tables {
                text.push_str(&format!("{},{}", t.setting.label(), t.shots));
                for c in t.counts {
                    text.push_str(&format!(",{c}"));
                }
                text.push('\n');
            }
            text
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = tables
                .iter()
                .map(|t| {
                    json!({
                        "setting": t.setting.label(),
                        "shots": t.shots,
                        "counts": t.counts.to_vec(),
                    })
                })
                .collect();
            format!("{:#}\n", serde_json::Value::from(rows))
        }
    };
    write_text(&counts_path, &counts_content)?;

    let stat = |m: &thermoswitch::emulator::MetricStat<f64>| {
        json!({
            "mean": json_number(m.mean, full_precision),
            "std": json_number(m.std, full_precision),
        })
    };
    let metrics_path = prefix.with_file_name(format!(
        "{}_metrics.json",
        prefix.file_name().unwrap_or_default().to_string_lossy()
    ));
    let doc = json!({
        "metadata": {
            "command": "emulate",
            "temperature": temperature.to_string(),
            "s": s.value(),
            "p": p.value(),
            "shots": shots,
            "trials": trials,
            "seed": seed,
            "estimator": "linear inversion, negative eigenvalues truncated, trace renormalized",
            "fidelity_convention": "squared Uhlmann; amplitude reported alongside",
            "counts_dataset": "one full run sampled from the master seed",
        },
        "mutual_information": stat(&report.mutual_information),
        "free_coherence": stat(&report.free_coherence),
        "fidelity": stat(&report.fidelity),
        "fidelity_amplitude": stat(&report.fidelity_amplitude),
    });
    write_text(&metrics_path, &format!("{doc:#}\n"))?;

    println!("wrote {}", counts_path.display());
    println!("wrote {}", metrics_path.display());
    println!("fidelity_mean: {}", sig6(report.fidelity.mean));
    println!("fidelity_amplitude_mean: {}", sig6(report.fidelity_amplitude.mean));
    println!("i_mean: {}", sig6(report.mutual_information.mean));
    println!("i_std: {:.3e}", report.mutual_information.std);
    Ok(())
}

pub fn cmd_validate(
    merger: &Merger,
    args: &ValidateArgs,
    seed_flag: Option<u64>,
) -> Result<(), CliError> {
    let points = merger.grid(args.grid, DEFAULT_VALIDATE_GRID)?;
    let seed = merger.seed(seed_flag);
    let lines = validate::run_battery(points, seed, args.inject_fault);

    let mut failures = 0usize;
    for line in &lines {
        println!("{line}");
        if !line.pass {
            failures += 1;
        }
    }
    println!("summary: {} checks, {failures} failures", lines.len());
    if failures > 0 {
        return Err(CliError::Validation(format!("{failures} checks failed")));
    }
    Ok(())
}
