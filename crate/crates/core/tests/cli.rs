//! End-to-end tests of the `glv` binary.

use std::path::Path;
use std::process::{Command, Output};

fn glv(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glv"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn first_line(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn headers_of_every_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &str); 7] = [
        (&["simulate", "--t-end", "1"], "t,x1,x2,x3"),
        (
            &["simulate", "--t-end", "1", "--x0-pair", "1.0033,1.0589,0.6503"],
            "t,x1,x2,x3,x1b,x2b,x3b,separation",
        ),
        (&["lyapunov", "--t-end", "220"], "t,L1,L2,L3"),
        (
            &["equilibria"],
            "label,x1,x2,x3,feasible,c2,c1,c0,re1,im1,re2,im2,re3,im3,classification",
        ),
        (&["stabilize", "--t-end", "1"], "t,x1,x2,x3,err_norm"),
        (&["sync-active", "--t-end", "1"], "t,x1d,x2d,x3d,x2r,x3r,e2,e3"),
        (&["sync-adaptive", "--t-end", "1"], "t,x1d,x2d,x3d,x2r,x3r,e2,e3,P,Q,Lyap"),
    ];
    for (i, (args, header)) in cases.iter().enumerate() {
        let out = format!("run{i}.csv");
        let mut full = args.to_vec();
        full.extend(["--out", &out]);
        let o = glv(&full, dir.path());
        assert!(o.status.success(), "{args:?}: {}", stderr(&o));
        assert_eq!(first_line(&dir.path().join(&out)), *header, "{args:?}");
        assert!(dir.path().join(format!("{out}.config.toml")).exists());
    }
}

#[test]
fn csv_goes_to_stdout_without_out() {
    let dir = tempfile::tempdir().unwrap();
    let o = glv(&["simulate", "--t-end", "0.01"], dir.path());
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,x1,x2,x3");
    assert_eq!(lines.len(), 4);
    assert_eq!(
        lines[1],
        "0.0000000000000000e0,1.0023000000000000e0,1.0589000000000000e0,6.5029999999999999e-1"
    );
    assert!(!text.contains('\r'));
    assert!(stderr(&o).contains("samples 3"));
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sync-adaptive", "--t-end", "20", "--record-every", "7", "--out", "a.csv"];
    assert!(glv(&args, dir.path()).status.success());
    let first = std::fs::read(dir.path().join("a.csv")).unwrap();
    assert!(glv(&args, dir.path()).status.success());
    assert_eq!(std::fs::read(dir.path().join("a.csv")).unwrap(), first);

    std::fs::rename(dir.path().join("a.csv"), dir.path().join("orig.csv")).unwrap();
    let o = glv(&["sync-adaptive", "--config", "a.csv.config.toml"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(std::fs::read(dir.path().join("a.csv")).unwrap(), first);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("c.toml"),
        "x0 = [0.5, 0.5, 0.5]\n[integration]\nt_end = 0.01\n",
    )
    .unwrap();
    let o = glv(&["simulate", "--config", "c.toml", "--x0", "2,0,0"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("0.0000000000000000e0,2.0000000000000000e0,0.0"));
}

#[test]
fn paired_simulation_reports_separation_time() {
    let dir = tempfile::tempdir().unwrap();
    let o = glv(
        &["simulate", "--t-end", "100", "--x0-pair", "1.0033,1.0589,0.6503", "--out", "p.csv"],
        dir.path(),
    );
    assert!(o.status.success());
    let report = stdout(&o);
    let t: f64 = report
        .lines()
        .find_map(|l| l.strip_prefix("separation exceeds 0.1 at t = "))
        .expect("separation line")
        .parse()
        .unwrap();
    // independent fixed-step oracle: 64.685 for +1e-3 on x1 at h = 0.005
    assert!((t - 64.685).abs() <= 0.01, "{t}");
}

#[test]
fn equilibrium_start_gives_constant_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = glv(&["simulate", "--x0", "1,3,0", "--t-end", "5"], dir.path());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).map(|l| l.split_once(',').unwrap().1).collect();
    assert!(rows.iter().all(|r| *r == rows[0]));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| glv(args, dir.path()).status.code().unwrap();
    assert_eq!(code(&["equilibria"]), 0);
    assert_eq!(code(&["simulate", "--x0", "1,2"]), 2);
    assert_eq!(code(&["simulate", "--step", "-1"]), 2);
    assert_eq!(code(&["simulate", "--model", "ht4"]), 2);
    assert_eq!(code(&["simulate", "--config", "missing.toml"]), 1);
    assert_eq!(code(&["stabilize", "--gains", "1,2"]), 2);
    assert_eq!(code(&["sync-active", "--gains", "0,1"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&[]), 2);
    assert_eq!(code(&["simulate", "--model", "ht3", "--t-end", "100"]), 3);
    assert_eq!(code(&["stabilize", "--target", "1,1,1", "--t-end", "1"]), 4);
}

#[test]
fn uncontrolled_stabilization_is_not_converged() {
    let dir = tempfile::tempdir().unwrap();
    let o = glv(&["stabilize", "--gains", "0,0,0", "--t-end", "50", "--out", "s.csv"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("not converged"));
    assert!(stderr(&o).contains("warning"));
}

#[test]
fn weak_sync_gains_warn() {
    let dir = tempfile::tempdir().unwrap();
    let o = glv(&["sync-active", "--t-end", "20", "--out", "w.csv"], dir.path());
    assert!(o.status.success());
    assert!(stderr(&o).contains("violate the sufficient sync conditions"));
}

#[test]
fn coupled_lyapunov_prints_comparison_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = glv(
        &["lyapunov", "--coupled", "--gains", "1,5", "--t-end", "250", "--out", "c.csv"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(first_line(&dir.path().join("c.csv")), "t,L1,L2,L3,L4,L5");
    assert!(stdout(&o).contains("reference"));
}

#[test]
fn update_law_flag_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let o = glv(
        &["sync-adaptive", "--update-law", "paper-literal", "--t-end", "1", "--out", "l.csv"],
        dir.path(),
    );
    assert!(o.status.success());
    let cfg = std::fs::read_to_string(dir.path().join("l.csv.config.toml")).unwrap();
    assert!(cfg.contains("update_law = \"literal\""));
}

#[test]
fn sweep_runs_each_config() {
    let dir = tempfile::tempdir().unwrap();
    for (name, cmd) in [("a", "simulate"), ("b", "equilibria"), ("c", "stabilize")] {
        std::fs::write(
            dir.path().join(format!("{name}.toml")),
            format!("command = \"{cmd}\"\nout = \"{name}.csv\"\n[integration]\nt_end = 2.0\n"),
        )
        .unwrap();
    }
    let o = glv(&["--sweep", "a.toml", "b.toml", "c.toml"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    for name in ["a", "b", "c"] {
        assert!(dir.path().join(format!("{name}.csv")).exists());
    }
    let solo = glv(&["simulate", "--t-end", "2"], dir.path());
    assert_eq!(std::fs::read(dir.path().join("a.csv")).unwrap(), solo.stdout);

    std::fs::write(dir.path().join("d.toml"), "command = \"simulate\"\n").unwrap();
    assert_eq!(glv(&["--sweep", "d.toml"], dir.path()).status.code(), Some(2));
}
