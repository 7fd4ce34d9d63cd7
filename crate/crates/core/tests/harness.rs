use std::fs;

use risuav::harness::{
    child_seed, read_results, run_single, run_sweep, sidecar_path, write_results, Execution, ExperimentConfig, Method,
    SweepSpec, SweepVariable, CSV_HEADER,
};

fn small() -> ExperimentConfig {
    let mut c = ExperimentConfig::default();
    c.trials = 3;
    c.channel.num_elements = 16;
    c.channel.num_subcarriers = 128;
    c.solver.randomization_samples = 100;
    c
}

#[test]
fn csv_round_trip_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("snr.csv");
    let config = small().for_sweep(SweepVariable::Snr);
    let result = run_sweep(&config, SweepVariable::Snr, Execution::Serial).unwrap();
    write_results(&result, &config, &path).unwrap();

    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    let rows = read_results(&path).unwrap();
    assert_eq!(rows.len(), 9 * 2);
    for (a, b) in rows.iter().zip(&result.rows) {
        assert_eq!(a, b);
    }

    let echoed: ExperimentConfig = serde_json::from_str(&fs::read_to_string(sidecar_path(&path)).unwrap()).unwrap();
    assert_eq!(echoed, config.resolved());
    assert!(echoed.geometry.element_spacing.is_some());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = small();
    let mut bytes = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("k{i}.csv"));
        let r = run_sweep(&config, SweepVariable::Subcarriers, Execution::Parallel).unwrap();
        write_results(&r, &config.clone().for_sweep(SweepVariable::Subcarriers), &path).unwrap();
        bytes.push(fs::read(&path).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);

    let mut other = config.clone();
    other.master_seed = 2;
    let a = run_sweep(&config, SweepVariable::Subcarriers, Execution::Serial).unwrap();
    let b = run_sweep(&other, SweepVariable::Subcarriers, Execution::Serial).unwrap();
    assert_ne!(a.means(Method::Sdr), b.means(Method::Sdr));
}

#[test]
fn unconfigured_only_element_sweep() {
    let mut config = small();
    config.methods = vec![Method::Unconfigured];
    config.sweep = Some(SweepSpec {
        variable: SweepVariable::Elements,
        values: vec![4.0, 9.0, 16.0, 25.0],
    });
    let r = run_sweep(&config, SweepVariable::Elements, Execution::Serial).unwrap();
    assert_eq!(r.rows.len(), 4);
    assert!(r.rows.iter().all(|row| row.method == Method::Unconfigured));
    assert!(r.outcomes.iter().all(|t| t.get(Method::Sdr).is_none()));
}

#[test]
fn paired_points_share_channel_draws() {
    let config = small();
    let r = run_sweep(&config, SweepVariable::Snr, Execution::Serial).unwrap();
    let t = config.trials;
    for p in 1..9 {
        for trial in 0..t {
            assert_eq!(r.outcomes[p * t + trial].channel_seed, r.outcomes[trial].channel_seed);
        }
    }
    let mut unpaired = config.clone();
    unpaired.paired_across_points = false;
    let u = run_sweep(&unpaired, SweepVariable::Snr, Execution::Serial).unwrap();
    assert_ne!(u.outcomes[t].channel_seed, u.outcomes[0].channel_seed);
}

#[test]
fn child_seeds_are_distinct() {
    let mut seen = std::collections::HashSet::new();
    for trial in 0..100u64 {
        for stream in 0..2u64 {
            assert!(seen.insert(child_seed(1, &[trial, stream])));
        }
    }
    assert_ne!(child_seed(1, &[0, 1]), child_seed(1, &[1, 0]));
}

#[test]
fn full_size_single_trial() {
    let mut config = ExperimentConfig::default();
    config.trials = 1;
    let r = run_single(&config, Execution::Serial).unwrap();
    assert_eq!(r.sweep_var, "single");
    let t = &r.outcomes[0];
    let sdr = t.get(Method::Sdr).unwrap();
    let flat = t.get(Method::Unconfigured).unwrap();
    assert_eq!(sdr.subcarrier_power.len(), 1000);
    assert!(sdr.rate_mbps >= flat.rate_mbps);
    assert!(sdr.rate_mbps > 20.0 && sdr.rate_mbps < 40.0, "{}", sdr.rate_mbps);
}

#[test]
fn bad_configs_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"trials": 5, "unknown_field": 1}"#).unwrap();
    assert!(ExperimentConfig::from_json_file(&path).unwrap_err().is_config());

    fs::write(&path, r#"{"trials": 0}"#).unwrap();
    let c = ExperimentConfig::from_json_file(&path);
    assert!(c.is_err() || c.unwrap().validate().is_err());

    let mut c = small();
    c.channel.num_taps = 64;
    assert!(run_single(&c, Execution::Serial).unwrap_err().is_config());

    let mut c = small();
    c.sweep = Some(SweepSpec {
        variable: SweepVariable::Subcarriers,
        values: vec![16.0],
    });
    assert!(run_sweep(&c, SweepVariable::Subcarriers, Execution::Serial).is_err());
}

#[test]
fn partial_config_takes_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    fs::write(&path, r#"{"trials": 7, "channel": {"num_elements": 64}}"#).unwrap();
    let c = ExperimentConfig::from_json_file(&path).unwrap();
    assert_eq!(c.trials, 7);
    assert_eq!(c.channel.num_elements, 64);
    assert_eq!(c.channel.num_subcarriers, 1000);
    assert_eq!(c.master_seed, 1);
}
