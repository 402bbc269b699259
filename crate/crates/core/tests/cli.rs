use std::process::{Command, Output};

fn cvent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvent"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(line: &str, key: &str) -> f64 {
    line.split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn entangle_cat() {
    let o = cvent(&["entangle", "cat", "--a0-sq", "0.5", "--d", "1.0"]);
    assert_eq!(o.status.code(), Some(0));
    let e = field(&stdout(&o), "entropy_bits");
    assert!((e - 0.948_418_466).abs() < 1e-8);
}

#[test]
fn entangle_unsqueezed_state_is_product() {
    let o = cvent(&["entangle", "squeezed", "--r", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(field(&stdout(&o), "entropy_bits").abs() < 1e-10);
}

#[test]
fn bell_entropy_ignores_scale_and_centre() {
    let moved = cvent(&[
        "entangle", "bell", "--alpha", "1", "--beta", "1", "--sigma", "2", "--x1", "5",
    ]);
    let plain = cvent(&["entangle", "bell"]);
    let (e1, e2) = (
        field(&stdout(&moved), "entropy_bits"),
        field(&stdout(&plain), "entropy_bits"),
    );
    assert!((e1 - e2).abs() < 1e-8);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(
        cvent(&["entangle", "bell", "--gamma", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        cvent(&["entangle", "cat", "--a0-sq", "1.5"]).status.code(),
        Some(1)
    );
    assert_eq!(cvent(&["sweep", "--family", "cat"]).status.code(), Some(1));
    assert_eq!(cvent(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn unconverged_exit_two() {
    let o = cvent(&["entangle", "squeezed", "--r", "3", "--max-side", "201"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("converged=false"));
}

#[test]
fn sweep_from_config_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("cat.cfg");
    std::fs::write(
        &config,
        "family = cat\naxis1 = d:0.2:2.5:4\naxis2 = a0-sq:0:1:5\n",
    )
    .unwrap();
    let out1 = dir.path().join("one.csv");
    let out2 = dir.path().join("two.csv");
    let cfg = config.to_str().unwrap();
    assert_eq!(
        cvent(&[
            "sweep",
            "--config",
            cfg,
            "--out",
            out1.to_str().unwrap(),
            "--jobs",
            "1"
        ])
        .status
        .code(),
        Some(0)
    );
    assert_eq!(
        cvent(&[
            "sweep",
            "--config",
            cfg,
            "--out",
            out2.to_str().unwrap(),
            "--jobs",
            "3"
        ])
        .status
        .code(),
        Some(0)
    );
    let a = std::fs::read(&out1).unwrap();
    assert_eq!(a, std::fs::read(&out2).unwrap());

    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("axis1,axis2,entropy_bits,converged,trace_rel_err")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 20);
    // each fixed-d slice peaks at equal weights
    for slice in rows.chunks(5) {
        let e: Vec<f64> = slice.iter().map(|r| r[2].parse().unwrap()).collect();
        let best = e.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(e[2], best);
    }
}

#[test]
fn sweep_flags_and_failed_cells() {
    let o = cvent(&[
        "sweep",
        "--family",
        "bell",
        "--axis1",
        "alpha:0:2:3",
        "--axis2",
        "beta:1:1:1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows[0], "0.000000000e0,1.000000000e0,NaN,false,NaN");
    assert!(rows[1].contains(",true,"));

    let o = cvent(&[
        "sweep", "--family", "swap-cat", "--axis1", "a:-2:2:5", "--axis2", "b:-2:2:5", "--fixed",
        "mu=0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let above = stdout(&o)
        .lines()
        .skip(1)
        .filter(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap() > 0.881)
        .count();
    assert!(above > 0);
}

#[test]
fn swap_subcommands() {
    let o = cvent(&[
        "swap", "bell", "--alpha", "0.7", "--beta", "1.2", "--a", "-1", "--b", "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o);
    assert!(
        field(&line, "e_swapped")
            <= field(&line, "e_initial_alpha").min(field(&line, "e_initial_beta"))
    );

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = cvent(&[
        "swap",
        "cat",
        "--steps",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.starts_with("a,b,e_initial,e_swapped,gain,converged,trace_rel_err\n"));
    assert_eq!(text.lines().count(), 26);
}

#[test]
fn verify_reports_every_check() {
    let first = cvent(&["verify"]);
    let second = cvent(&["verify"]);
    assert_eq!(first.stdout, second.stdout);
    let table = stdout(&first);
    let rows = table
        .lines()
        .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
        .count();
    assert_eq!(rows, 12);
    let code = first.status.code();
    if table.contains("FAIL") {
        assert_eq!(code, Some(3));
    } else {
        assert_eq!(code, Some(0));
    }
}
