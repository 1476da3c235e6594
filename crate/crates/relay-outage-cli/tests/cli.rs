//! Binary-level behavior: exit codes, flag validation, CSV byte format,
//! config-file precedence, and the environment tolerance override.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_relay-outage"))
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("relay-outage-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn eval_exact_and_mc_agree() {
    let out = bin()
        .args([
            "eval",
            "--topology",
            "n11",
            "--scheme",
            "fixed",
            "--n",
            "2",
            "--rho1-db",
            "10",
            "--rho2-db",
            "10",
            "--rhoi-db",
            "0",
            "--gamma-th-db",
            "0",
            "--exact",
            "--mc",
            "--mc-samples",
            "1000000",
            "--seed",
            "3",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let grab = |label: &str| -> f64 {
        text.lines()
            .find(|l| l.starts_with(label))
            .unwrap()
            .split_whitespace()
            .nth(1)
            .unwrap()
            .parse()
            .unwrap()
    };
    let exact = grab("exact");
    let mc = grab("mc");
    let sigma = (exact * (1.0 - exact) / 1e6).sqrt();
    assert!((exact - mc).abs() <= 4.0 * sigma, "{exact} vs {mc}");
}

#[test]
fn eval_accepts_minus_inf_interference() {
    let out = bin()
        .args([
            "eval", "--topology", "11n", "--scheme", "variable", "--n", "2", "--rho1-db", "10",
            "--rho2-db", "10", "--rhoi-db", "-inf", "--exact",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("rho_i=0.0000"));
}

#[test]
fn eval_rejects_zero_antennas_with_usage_exit() {
    let out = bin()
        .args([
            "eval", "--topology", "n11", "--scheme", "fixed", "--n", "0", "--rho1-db", "10",
            "--rho2-db", "10", "--exact",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_with_no_method_is_usage_error() {
    let out = bin()
        .args([
            "eval", "--topology", "n11", "--scheme", "fixed", "--n", "2", "--rho1-db", "10",
            "--rho2-db", "10",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = bin().args(["eval", "--frequency", "2.4GHz"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_writes_identical_bytes_across_runs() {
    let p1 = tmp("sweep1.csv");
    let p2 = tmp("sweep2.csv");
    for p in [&p1, &p2] {
        let out = bin()
            .args([
                "sweep",
                "--topology",
                "1n1",
                "--scheme",
                "variable",
                "--ici",
                "--n",
                "2",
                "--grid-db",
                "0:20:10",
                "--mu",
                "1",
                "--rhoi-db",
                "0",
                "--gamma-th-db",
                "0",
                "--methods",
                "exact,lower,mc",
                "--mc-samples",
                "200000",
                "--seed",
                "7",
                "--output",
                p.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = std::fs::read(&p1).unwrap();
    let b = std::fs::read(&p2).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "topology,scheme,ici,n_antennas,rho1_db,rho2_db,rhoi_db,gamma_th_db,\
method,probability,numeric_error_or_ci,n_samples,seed"
    );
    // 3 grid points x 3 methods.
    assert_eq!(lines.count(), 9);
    // Probabilities carry >= 12 significant digits.
    let row = text.lines().nth(1).unwrap();
    let prob_field = row.split(',').nth(9).unwrap();
    let mantissa = prob_field.split('e').next().unwrap();
    let digits = mantissa.chars().filter(|c| c.is_ascii_digit()).count();
    assert!(digits >= 12, "{prob_field}");
    let _ = std::fs::remove_file(p1);
    let _ = std::fs::remove_file(p2);
}

#[test]
fn sweep_with_empty_methods_is_usage_error() {
    let out = bin()
        .args([
            "sweep", "--topology", "n11", "--scheme", "fixed", "--n", "1", "--grid-db", "0:10:5",
            "--methods", "", "--output", "/tmp/never-written.csv",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_tiny_k_fails_with_exit_one() {
    let out = bin()
        .args([
            "validate",
            "--n-list",
            "1",
            "--rho-db-list",
            "10",
            "--k-sigma",
            "0.001",
            "--mc-samples",
            "200000",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn validate_small_grid_passes() {
    let out = bin()
        .args([
            "validate",
            "--n-list",
            "1,2",
            "--rho-db-list",
            "0,10",
            "--topology",
            "n11",
            "--mc-samples",
            "400000",
            "--seed",
            "11",
        ])
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("PASS"));
    assert!(stdout.contains("n1-collapse"));
}

#[test]
fn slope_reports_unit_diversity_for_fixed_gain() {
    let out = bin()
        .args([
            "slope", "--topology", "11n", "--scheme", "fixed", "--n-list", "4", "--grid-db",
            "30,40,50", "--rhoi-db", "0",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let slope: f64 = text
        .lines()
        .find(|l| l.starts_with("N=4"))
        .unwrap()
        .split_whitespace()
        .last()
        .unwrap()
        .parse()
        .unwrap();
    assert!((slope - 1.0).abs() < 0.15, "{slope}");
}

#[test]
fn sweep_curves_show_variable_gain_advantage() {
    // N-1-1 at N in {1, 2}, both schemes, mu = 1, gamma_th = rho_i = 0 dB,
    // swept 0..40 dB: the variable-gain curve sits at or below the
    // fixed-gain curve from 20 dB up.
    use relay_outage::model::{Scheme, Topology};
    use relay_outage_cli::{run_sweep_csv, MethodSel, SweepSpec};

    let grid: Vec<f64> = (0..=20).map(|i| 2.0 * f64::from(i)).collect();
    for n in [1u32, 2] {
        let curve = |scheme: Scheme| -> Vec<(f64, f64)> {
            let spec = SweepSpec {
                topology: Topology::N11,
                scheme,
                ici_at_relay: false,
                n_antennas: n,
                rho1_grid_db: grid.clone(),
                mu: 1.0,
                rho_i_db: 0.0,
                gamma_th_db: 0.0,
                methods: vec![MethodSel::Exact],
                mc_samples: 1000,
                seed: 1,
            };
            let csv = run_sweep_csv(&spec, relay_outage::analytic::QuadTol::default()).unwrap();
            csv.lines()
                .skip(1)
                .map(|l| {
                    let fields: Vec<&str> = l.split(',').collect();
                    (fields[4].parse().unwrap(), fields[9].parse().unwrap())
                })
                .collect()
        };
        let fixed = curve(Scheme::FixedGain);
        let variable = curve(Scheme::VariableGain);
        for (&(db, f), &(_, v)) in fixed.iter().zip(&variable) {
            if db >= 20.0 {
                assert!(v <= f * (1.0 + 1e-6), "N={n} at {db} dB: {v} > {f}");
            }
        }
    }
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let cfg_path = tmp("eval.toml");
    std::fs::write(
        &cfg_path,
        "topology = \"n11\"\nscheme = \"fixed\"\nn = 2\nrho1_db = 10.0\nrho2_db = 10.0\nrhoi_db = 0.0\n",
    )
    .unwrap();
    let from_file = bin()
        .args(["eval", "--config", cfg_path.to_str().unwrap(), "--exact"])
        .output()
        .unwrap();
    assert!(from_file.status.success());
    let base = String::from_utf8(from_file.stdout).unwrap();

    // Overriding N on the command line must change the result.
    let overridden = bin()
        .args([
            "eval",
            "--config",
            cfg_path.to_str().unwrap(),
            "--n",
            "4",
            "--exact",
        ])
        .output()
        .unwrap();
    assert!(overridden.status.success());
    let over = String::from_utf8(overridden.stdout).unwrap();
    assert!(base.contains("N=2"));
    assert!(over.contains("N=4"));
    assert_ne!(base, over);
    let _ = std::fs::remove_file(cfg_path);
}

#[test]
fn quad_tol_env_var_is_honored() {
    // A sloppy tolerance must change the reported numeric error of a
    // quadrature-backed value.
    let args = [
        "eval", "--topology", "n11", "--scheme", "variable", "--n", "2", "--rho1-db", "10",
        "--rho2-db", "10", "--rhoi-db", "0", "--exact",
    ];
    let tight = bin().args(args).output().unwrap();
    let loose = bin()
        .args(args)
        .env("RELAY_OUTAGE_QUAD_TOL", "1e-4")
        .output()
        .unwrap();
    assert!(tight.status.success() && loose.status.success());
    let err_of = |out: &std::process::Output| -> f64 {
        String::from_utf8_lossy(&out.stdout)
            .lines()
            .find(|l| l.starts_with("exact"))
            .unwrap()
            .split_whitespace()
            .nth(2)
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!(err_of(&loose) > err_of(&tight));
}
