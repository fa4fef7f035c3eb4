use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magic-simplex")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(text: &str, key: &str) -> String {
    let prefix = format!("{key} = ");
    text.lines().find_map(|l| l.strip_prefix(&prefix)).unwrap_or_else(|| panic!("no `{key}` in\n{text}")).to_string()
}

fn num(text: &str, key: &str) -> f64 {
    field(text, key).parse().unwrap()
}

#[test]
fn measure_werner_endpoints() {
    let o = bin(&["measure", "--werner", "1.0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!((num(&text, "negativity") - 1.0).abs() < 1e-9);
    assert!(num(&text, "linear_entropy").abs() < 1e-12);
    assert_eq!(field(&text, "ppt_by_purity"), "false");

    let text = stdout(&bin(&["measure", "--werner", "0.5"]));
    assert!((num(&text, "negativity") - 1.0 / 3.0).abs() < 1e-9);
    assert!((num(&text, "linear_entropy") - 0.75).abs() < 1e-12);

    let text = stdout(&bin(&["measure", "--werner", "0.25"]));
    assert_eq!(num(&text, "negativity"), 0.0);
}

#[test]
fn measure_pair_and_coefficients() {
    let text = stdout(&bin(&["measure", "--pair", "0.5,0.5"]));
    assert_eq!(field(&text, "negativity"), "0.5");
    let coeffs: Vec<f64> = field(&text, "bell_coefficients").split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(coeffs.len(), 9);
    assert!((coeffs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert_eq!(coeffs.iter().filter(|&&c| (c - 0.5).abs() < 1e-12).count(), 2);
}

#[test]
fn measure_rejects_bad_probabilities() {
    let o = bin(&["measure", "--pair", "0.5,0.6"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bin(&["measure", "--line", "0.5,0.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bin(&["measure"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classify_examples() {
    let cases = [
        (vec!["0,0", "1,1", "2,2"], "line", "12"),
        (vec!["0,0", "1,0", "1,1"], "triangle", "72"),
        (vec!["0,0", "1,0", "1,1", "0,1"], "cap", "54"),
        (vec!["0,0", "1,0", "2,0", "2,1"], "line_plus_point", "72"),
        (vec!["0,0", "2,1"], "pair", "36"),
    ];
    for (points, class, size) in cases {
        let mut args = vec!["classify"];
        args.extend(points.iter().copied());
        let text = stdout(&bin(&args));
        assert_eq!(field(&text, "class"), class, "{points:?}");
        assert_eq!(field(&text, "orbit_size"), size, "{points:?}");
    }
    assert_eq!(bin(&["classify", "0,0", "0,0"]).status.code(), Some(2));
}

#[test]
fn scan_is_reproducible_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let run = |path: &Path, workers: &str| {
        bin(&["scan", "--count", "300", "--seed", "42", "--workers", workers, "--out", path.to_str().unwrap()])
    };
    let (oa, ob) = (run(&a, "1"), run(&b, "4"));
    assert!(oa.status.success() && ob.status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(oa.stdout, ob.stdout);
    let csv = std::fs::read_to_string(&a).unwrap();
    assert_eq!(csv.lines().next(), Some("seed,index,s,n"));
    assert_eq!(csv.lines().count(), 301);
    assert_eq!(field(&stdout(&oa), "violations"), "0");
}

#[test]
fn scan_requires_seed() {
    assert_eq!(bin(&["scan", "--count", "10"]).status.code(), Some(2));
}

#[test]
fn frontier_state_file_roundtrips_through_measure() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("state.txt");
    let o = bin(&["frontier", "--band", "0.8,0.9", "--budget", "3000", "--seed", "2", "--out", state.to_str().unwrap()]);
    assert!(o.status.success());
    let summary = stdout(&o);
    let measured = stdout(&bin(&["measure", "--file", state.to_str().unwrap()]));
    assert_eq!(field(&summary, "n"), field(&measured, "negativity"));
    assert_eq!(field(&summary, "s"), field(&measured, "linear_entropy"));
    assert!(num(&summary, "margin") > 0.0);
}

#[test]
fn frontier_rejects_bad_band() {
    assert_eq!(bin(&["frontier", "--band", "0.5,0.2", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(bin(&["frontier", "--band", "0.5,0.99", "--seed", "1"]).status.code(), Some(2));
}

#[test]
fn figure_formats() {
    let one = stdout(&bin(&["figure", "1", "--resolution", "4"]));
    assert_eq!(one, "p,negativity\n0,1\n0.25,0.661437827766\n0.5,0.5\n0.75,0.661437827766\n1,1\n");

    let two = stdout(&bin(&["figure", "2", "--resolution", "3"]));
    assert_eq!(two.lines().next(), Some("p_alpha,p_beta,p_gamma,n_line,n_triangle"));
    assert_eq!(two.lines().count(), 1 + 10);

    let four = stdout(&bin(&["figure", "4", "--seed", "9", "--count", "20", "--budget", "50", "--resolution", "5"]));
    let mut lines = four.lines();
    assert_eq!(lines.next(), Some("section,s,n"));
    let sections: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(sections.iter().filter(|s| **s == "simplex").count(), 20);
    assert_eq!(sections.iter().filter(|s| **s == "curve_werner").count(), 6);

    assert_eq!(bin(&["figure", "4"]).status.code(), Some(2));
    assert_eq!(bin(&["figure", "7"]).status.code(), Some(2));
}
