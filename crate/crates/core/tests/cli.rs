use std::process::{Command, Output};

use bohmian_sn::cli::Table;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bohmian-sn"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout_table(args: &[&str]) -> Table {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    Table::read_from(out.stdout.as_slice()).unwrap()
}

#[test]
fn critical_width_is_one_in_natural_units() {
    let t = stdout_table(&["critical"]);
    assert!(t.comment.starts_with("bohmian-sn ") && t.comment.contains("config="));
    assert_eq!(t.column("sigma_star").unwrap(), vec![1.0]);
    assert_eq!(t.column("E_at_min").unwrap(), vec![-0.5]);

    let t = stdout_table(&["critical", "--mass-list", "1,2,4"]);
    let sigma = t.column("sigma_star").unwrap();
    for (m, s) in [1.0f64, 2.0, 4.0].iter().zip(sigma) {
        assert!((s * m.powi(3) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn packet_width_reaches_root_two() {
    let t = stdout_table(&["packet", "--seeds", "3"]);
    let (time, sigma) = (t.column("t").unwrap(), t.column("sigma").unwrap());
    assert_eq!(*time.last().unwrap(), 2.0);
    assert!((sigma.last().unwrap() - 2f64.sqrt()).abs() < 1e-12);
    let (x0, xt) = (t.column("x_seed").unwrap(), t.column("x_t").unwrap());
    for i in 0..x0.len() {
        assert!((xt[i] - x0[i] * sigma[i]).abs() < 1e-6);
    }
    let t3 = stdout_table(&["packet", "--dim", "3", "--steps", "1"]);
    assert_eq!(t3.column("Q_center").unwrap()[0], 0.75);
}

#[test]
fn config_file_and_flags_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# packet run\nmass = 2\nsigma0 = 0.5\n").unwrap();
    let from_file = run(&["packet", "--config", cfg.to_str().unwrap()]);
    let from_flags = run(&["packet", "--sigma0", "0.5", "--mass", "2"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, from_flags.stdout);
    let overridden = run(&["packet", "--config", cfg.to_str().unwrap(), "--mass", "3"]);
    assert_ne!(overridden.stdout, from_file.stdout);
}

#[test]
fn out_directory_holds_the_same_table_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["critical", "--mass-list", "1,3", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let written = std::fs::read(dir.path().join("critical.csv")).unwrap();
    assert_eq!(written, run(&["critical", "--mass-list", "1,3"]).stdout);
}

#[test]
fn multi_file_commands_write_every_table() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = run(&[
        "sweep",
        "--mode",
        "physical",
        "--mass-list",
        "1,2,4,8",
        "--nodes",
        "1000",
        "--out",
        d,
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let fit = Table::read(&dir.path().join("sweep_fit.csv")).unwrap();
    assert!((fit.column("slope").unwrap()[0] + 3.0).abs() < 1e-9);
    let summary = Table::read(&dir.path().join("sweep_summary.csv")).unwrap();
    assert_eq!(summary.column("m").unwrap(), vec![1.0, 2.0, 4.0, 8.0]);
    for i in 0..4 {
        assert!(dir.path().join(format!("sweep_profile_{i}.csv")).exists());
    }

    let ev = dir.path().join("ev");
    let out = run(&[
        "evolve",
        "--seeds",
        "50",
        "--steps",
        "20",
        "--out",
        ev.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let traj = Table::read(&ev.join("trajectories.csv")).unwrap();
    assert_eq!(traj.header, ["seed_id", "t", "x"]);
    assert_eq!(traj.rows.len(), 50 * 3);
}

#[test]
fn literal_stationary_marks_the_exterior() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["stationary", "--mode", "literal", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let t = Table::read(&dir.path().join("stationary.csv")).unwrap();
    let (amp, res) = (t.column("sqrt_rho").unwrap(), t.column("residual").unwrap());
    let last = amp.len() - 1;
    assert_eq!(amp[last], 0.0);
    assert!(res[last].is_nan());
    let summary = Table::read(&dir.path().join("stationary_summary.csv")).unwrap();
    assert!(summary.column("E").unwrap()[0].is_nan());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["packet", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["packet", "--sigma0", "-1"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let few = run(&["sweep", "--mass-list", "1,2", "--out", d]);
    assert_eq!(few.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&few.stderr).contains("need ≥ 4 masses"));

    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "mass = 1\nsigma = 2\n").unwrap();
    let bad = run(&["packet", "--config", cfg.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("unknown config key `sigma` on line 2"));

    let leak = run(&["evolve", "--rmax", "4", "--steps", "400", "--dt", "0.05"]);
    assert_eq!(leak.status.code(), Some(2));
    assert_eq!(run(&["evolve", "--seeds", "5"]).status.code(), Some(2));
    assert_eq!(
        run(&["evolve", "--mode", "sn", "--seeds", "5", "--out", d])
            .status
            .code(),
        Some(2)
    );
}
