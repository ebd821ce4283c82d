use std::path::Path;
use std::process::{Command, Output};

use matchkit::io::{read_matrix_csv, write_matrix_csv, write_permutation_csv};
use matchkit::{make_signal_sweep_params, sample_pair, separation_profile, Permutation, SeededRng};

fn matchkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matchkit")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn simulate_writes_one_row_per_value_and_method() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = matchkit(&[
        "simulate", "--axis", "signal", "--values", "250,500", "--n", "100", "--p", "50", "--r", "10",
        "--sigma-x", "1", "--sigma-y", "1", "--reps", "5", "--seed-param", "7", "--seed-noise", "11",
        "--methods", "laps,naive", "--out", p(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "axis,value,method,mean_loss,log10_mean_loss,stderr,theory_rate,reps,seed_param,seed_noise,wall_ms"
    );
    assert_eq!(lines.count(), 4);
}

#[test]
fn simulate_usage_errors() {
    let base = ["simulate", "--axis", "signal", "--seed-param", "1", "--seed-noise", "2"];
    assert_eq!(matchkit(&base).status.code(), Some(2));
    let mut args = base.to_vec();
    args.extend(["--r", "0", "--out", "x.csv"]);
    assert_eq!(matchkit(&args).status.code(), Some(2));
    let mut args = base.to_vec();
    args.extend(["--r", "60", "--p", "50", "--out", "x.csv"]);
    assert_eq!(matchkit(&args).status.code(), Some(2));
    let o = matchkit(&["simulate", "--axis", "p", "--seed-param", "1", "--seed-noise", "2", "--out", "x.csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_exits_zero_everywhere() {
    for sub in ["simulate", "match", "theory", "evaluate"] {
        let o = matchkit(&[sub, "--help"]);
        assert_eq!(o.status.code(), Some(0), "{sub}");
        assert!(stdout(&o).contains("--threads"));
    }
    assert_eq!(matchkit(&["--help"]).status.code(), Some(0));
}

fn fixture(dir: &Path, sigma_x: f64, sigma_y: f64) -> Permutation {
    let mut rng = SeededRng::new(17);
    let params = make_signal_sweep_params(&mut rng, 80, 20, 3, 300.0, sigma_x, sigma_y).unwrap();
    let data = sample_pair(&mut rng, &params).unwrap();
    write_matrix_csv(&data.x, dir.join("x.csv")).unwrap();
    write_matrix_csv(&data.y, dir.join("y.csv")).unwrap();
    let lx: String = (0..80).map(|i| format!("c{}\n", i % 4)).collect();
    let mut ly = vec![String::new(); 80];
    for i in 0..80 {
        ly[params.pi_star.get(i)] = format!("c{}\n", i % 4);
    }
    std::fs::write(dir.join("lx.txt"), lx).unwrap();
    std::fs::write(dir.join("ly.txt"), ly.concat()).unwrap();
    params.pi_star
}

#[test]
fn match_noiseless_fixture_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let truth = fixture(d, 0.0, 0.0);
    let out = d.join("pi.csv");
    let conf = d.join("conf.csv");
    let o = matchkit(&[
        "match", "--x", p(&d.join("x.csv")), "--y", p(&d.join("y.csv")), "--r", "3", "--out", p(&out),
        "--labels-x", p(&d.join("lx.txt")), "--labels-y", p(&d.join("ly.txt")), "--confusion", p(&conf),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("accuracy 1\n"), "{}", stdout(&o));
    assert_eq!(matchkit::io::read_permutation_csv(&out).unwrap(), truth);
    let table = std::fs::read_to_string(conf).unwrap();
    assert!(table.starts_with("label,c0,c1,c2,c3\nc0,20,0,0,0\n"));
}

#[test]
fn match_auto_basis_selects_x() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fixture(d, 1.0, 1.5);
    let o = matchkit(&[
        "match", "--x", p(&d.join("x.csv")), "--y", p(&d.join("y.csv")), "--r", "3", "--basis", "auto",
        "--out", p(&d.join("pi.csv")),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("using the basis of x"), "{}", stdout(&o));
}

#[test]
fn match_runtime_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fixture(d, 1.0, 1.0);
    let x = read_matrix_csv(d.join("x.csv")).unwrap();
    let narrow = matchkit::linalg::DenseMatrix::from_fn(x.rows(), 5, |i, j| x.get(i, j));
    write_matrix_csv(&narrow, d.join("narrow.csv")).unwrap();
    let o = matchkit(&[
        "match", "--x", p(&d.join("x.csv")), "--y", p(&d.join("narrow.csv")), "--r", "3", "--out",
        p(&d.join("pi.csv")),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("80x20") && err.contains("80x5"), "{err}");

    std::fs::write(d.join("short.txt"), "a\nb\n").unwrap();
    let o = matchkit(&[
        "match", "--x", p(&d.join("x.csv")), "--y", p(&d.join("y.csv")), "--r", "3", "--out", p(&d.join("pi.csv")),
        "--labels-x", p(&d.join("short.txt")), "--labels-y", p(&d.join("ly.txt")),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn theory_from_params_two_rows() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("u.csv"), "0.7071067811865476\n-0.7071067811865476\n").unwrap();
    std::fs::write(d.join("d.csv"), "1.4142135623730951\n").unwrap();
    let out = d.join("rates.csv");
    let o = matchkit(&[
        "theory", "--from-params", "--u", p(&d.join("u.csv")), "--d", p(&d.join("d.csv")), "--p", "3", "--out",
        p(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    let rate = row[header.iter().position(|h| *h == "rate_exp").unwrap()];
    assert!((rate - (-1f64).exp()).abs() < 1e-14);

    std::fs::write(d.join("d2.csv"), "1\n2\n").unwrap();
    let o = matchkit(&["theory", "--from-params", "--u", p(&d.join("u.csv")), "--d", p(&d.join("d2.csv"))]);
    assert_eq!(o.status.code(), Some(2));
}

fn spec_rates(signal: &str) -> Vec<(String, f64)> {
    let o = matchkit(&[
        "theory", "--from-spec", "--n", "300", "--p", "50", "--r", "10", "--signal", signal, "--seed-param", "5",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from);
    let row = lines.next().unwrap().split(',').map(|v| v.parse::<f64>().unwrap());
    header.zip(row).collect()
}

#[test]
fn theory_from_spec_is_monotone_and_consistent() {
    let low = spec_rates("250");
    let high = spec_rates("500");
    let get = |v: &[(String, f64)], k: &str| v.iter().find(|(h, _)| h == k).unwrap().1;
    assert!(get(&high, "rate_exp") < get(&low, "rate_exp"));

    let spec = matchkit::SweepSpec {
        n: 300,
        values: vec![250.0],
        ..matchkit::SweepSpec::signal_sweep(1, 5, 0)
    };
    let params = spec.params_at(0).unwrap();
    let profile = separation_profile(&params.u, &params.d, 1.0).unwrap();
    assert_eq!(get(&low, "beta_sq"), profile.beta_sq);
}

#[test]
fn evaluate_reports_loss_and_cycles() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let id = Permutation::identity(10);
    write_permutation_csv(&id, d.join("star.csv")).unwrap();
    write_permutation_csv(&id, d.join("same.csv")).unwrap();
    write_permutation_csv(&Permutation::swap(10, 3, 7), d.join("swap.csv")).unwrap();

    let o = matchkit(&["evaluate", "--pi-hat", p(&d.join("same.csv")), "--pi-star", p(&d.join("star.csv"))]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "loss 0\ncycles none\n");

    let o = matchkit(&["evaluate", "--pi-hat", p(&d.join("swap.csv")), "--pi-star", p(&d.join("star.csv"))]);
    assert_eq!(stdout(&o), "loss 0.2\ncycles 2:1\n");

    std::fs::write(d.join("bad.csv"), "0,0\n0,1\n").unwrap();
    let o = matchkit(&["evaluate", "--pi-hat", p(&d.join("bad.csv")), "--pi-star", p(&d.join("star.csv"))]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn thread_env_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = Command::new(env!("CARGO_BIN_EXE_matchkit"))
        .env("MATCHKIT_THREADS", "2")
        .args([
            "simulate", "--axis", "p", "--values", "5,10", "--n", "40", "--r", "2", "--signal", "30", "--reps", "3",
            "--seed-param", "1", "--seed-noise", "2", "--no-timing", "--out", p(&out),
        ])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = Command::new(env!("CARGO_BIN_EXE_matchkit"))
        .env("MATCHKIT_THREADS", "0")
        .args(["simulate", "--axis", "p", "--values", "5", "--seed-param", "1", "--seed-noise", "2", "--out", p(&out)])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
