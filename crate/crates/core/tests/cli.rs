use std::process::{Command, Output};

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_spectral-tail"));
    c.args(args);
    if let Some(t) = threads {
        c.env("SPECTRAL_TAIL_THREADS", t);
    }
    c.output().expect("binary runs")
}

fn csv(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn verify_default_passes() {
    let out = run(&["verify"], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0 failed"));
}

#[test]
fn usage_errors_exit_one() {
    let out = run(&["verify", "--rho", "0.9"], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(run(&["figure", "9z"], None).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"], None).status.code(), Some(1));
    assert_eq!(run(&["theta", "--lmax", "x"], None).status.code(), Some(1));
}

#[test]
fn perturbation_exits_two() {
    let out = run(&["verify", "--perturb"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn figure_2a_exact_below_bound() {
    let out = run(&["figure", "2a"], None);
    assert!(out.status.success());
    let rows = csv(&out);
    assert_eq!(rows[0], ["n", "rho", "M", "exact", "bound"]);
    assert_eq!(rows.len(), 51);
    for r in &rows[1..] {
        let n: i32 = r[0].parse().unwrap();
        let exact: f64 = r[3].parse().unwrap();
        assert_eq!(exact, 2f64.powi(1 - n));
        assert!(exact <= r[4].parse::<f64>().unwrap());
    }
}

#[test]
fn figure_1d_legendre_band() {
    let rows = csv(&run(&["figure", "1d"], None));
    let legendre: Vec<f64> =
        rows[1..].iter().filter(|r| r[0].parse::<f64>().unwrap() == 0.0).map(|r| r[2].parse().unwrap()).collect();
    assert_eq!(legendre.len(), 91);
    assert!(legendre.iter().all(|t| (3.5..=4.5).contains(t)));
}

#[test]
fn output_is_byte_stable_across_thread_counts() {
    for args in [&["figure", "5b", "--nmax", "10"][..], &["coeff-bounds", "--grid", "1.1:2:0.1"][..]] {
        let a = run(args, Some("1"));
        let b = run(args, Some("4"));
        let c = run(args, None);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.stdout, c.stdout);
        assert!(!a.stdout.contains(&b'\r'));
    }
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("spectral-tail-{}.csv", std::process::id()));
    let out = run(&["theta", "--n", "4", "--lmax", "10", "--output", path.to_str().unwrap()], None);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(text.starts_with("n,alpha,l,theta,is_argmax\n"));
    assert_eq!(text.lines().count(), 12);
}

#[test]
fn every_subcommand_runs() {
    for cmd in ["sigma", "coeffs", "coeff-bounds", "trunc-bounds", "theta", "quad-bounds", "quad-verify"] {
        let out = run(&[cmd, "--nmax", "5"], None);
        assert_eq!(out.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(csv(&out).len() > 1);
    }
}
