use abkit::cli::report_from_json;
use abkit::evolve::Checkpoint;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn ab_kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ab-kit")).args(args).env_remove("AB_KIT_WORKERS").output().expect("run ab-kit")
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("ab-kit-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    d
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn free_dispersive_scan_passes() {
    let out = scratch("dispersive");
    let o = ab_kit(&["dispersive-scan", "--alpha", "0", "--tol-profile", "fast", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rep = report_from_json(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert!(rep.all_pass());
    // α = 0 rows sit exactly on 1/(16π²)
    for r in &rep.rows {
        assert!((r.measured - 1.0 / (16.0 * std::f64::consts::PI.powi(2))).abs() < 1e-10);
    }
    let csv = std::fs::read_to_string(out.join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), rep.rows.len() + 1);
    let m = manifest(&out);
    assert_eq!(m["exit_code"], 0);
    assert_eq!(m["config_sha256"].as_str().unwrap().len(), 64);
    assert!(out.join("report.dat").exists() && out.join("report.gp").exists());
}

#[test]
fn malformed_key_exits_two_naming_it() {
    let dir = scratch("badkey");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "[run]\ncommand = heat-scan\n[scan]\ntimes = 0.1, 1\nstep_size = 2\n").unwrap();
    let o = ab_kit(&["heat-scan", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("scan.step_size"));
    let o = ab_kit(&["heat-scan", "--set", "tol.quad=tight"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("tol.quad"));
}

#[test]
fn config_file_drives_the_run() {
    let dir = scratch("cfgfile");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    let out = dir.join("out");
    std::fs::write(&cfg, format!("[run]\ncommand = heat-scan\nalpha = 0.25\nout = {}\ntol_profile = fast\n[scan]\ntimes = 0.05, 0.5, 5\n", out.display())).unwrap();
    let o = ab_kit(&["heat-scan", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let rep = report_from_json(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(rep.rows.len(), 9);
    assert_eq!(rep.metadata["alpha"], "0.25");
}

#[test]
fn nls_over_budget_exits_three_with_drift() {
    let out = scratch("nls");
    let o = ab_kit(&[
        "evolve-nls", "--tol-profile", "fast", "--set", "scan.dt=0.2", "--set", "tol.energy_drift=1e-5", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let m = manifest(&out);
    assert_eq!(m["exit_code"], 3);
    let drift: f64 = m["summary"]["energy drift"].as_str().unwrap().parse().unwrap();
    assert!(drift > 1e-5);
    assert!(m["error"].as_str().unwrap().contains("energy drift"));
    // the final state is still checkpointed
    let cp = Checkpoint::read(&out.join("checkpoint.bin")).unwrap();
    assert!((cp.time - 1.0).abs() < 1e-12 && cp.exponent == 2.5);
}

#[test]
fn domain_errors_exit_four() {
    let out = scratch("domain");
    // a box far too small for the datum trips the boundary monitor
    let o = ab_kit(&["evolve-nls", "--tol-profile", "fast", "--set", "grid.r_max=5", "--set", "grid.sigma_ref=0.4", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn reports_are_reproducible_across_worker_counts() {
    let a = scratch("det-a");
    let b = scratch("det-b");
    for (dir, w) in [(&a, "1"), (&b, "3")] {
        let o = ab_kit(&["spectral-consistency", "--tol-profile", "fast", "--workers", w, "--out", dir.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    for f in ["report.json", "report.csv", "report.dat"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn linear_evolution_checkpoint_round_trips() {
    let out = scratch("linear");
    let o = ab_kit(&["evolve-linear", "--tol-profile", "fast", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let cp = Checkpoint::read(&out.join("checkpoint.bin")).unwrap();
    assert_eq!(cp.time, 1.0);
    assert_eq!(cp.field.data.len(), cp.field.n_theta * cp.field.n_r * cp.field.n_t * cp.field.n_t);
    assert!(cp.field.is_physical());
}
