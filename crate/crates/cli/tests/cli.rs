use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

fn zetawalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zetawalk"))
        .args(args)
        .output()
        .unwrap()
}

fn csv(out: &Output) -> (Vec<String>, Vec<Vec<f64>>) {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| {
            l.split(',')
                .map(|x| x.parse().unwrap_or(f64::NAN))
                .collect()
        })
        .collect();
    (header, rows)
}

#[test]
fn eval_grid_starts_at_one() {
    let (header, rows) = csv(&zetawalk(&[
        "eval",
        "--p",
        "0.3333333333",
        "--s",
        "2",
        "--t-max",
        "100",
        "--points",
        "2000",
    ]));
    assert_eq!(header, ["t", "cl", "trend_factor", "upper_envelope"]);
    assert_eq!(rows.len(), 2000);
    assert_eq!(rows[0][..2], [0.0, 1.0]);
    assert!(rows.iter().all(|r| r[1].abs() <= r[3] * (1.0 + 1e-9)));
}

#[test]
fn eval_harmonic_product_vanishes_at_zeros() {
    let (_, rows) = csv(&zetawalk(&[
        "eval", "--p", "1", "--s", "1", "--t-max", "10", "--points", "1001",
    ]));
    for z in [PI / 2.0, 1.5 * PI] {
        let near = rows
            .iter()
            .filter(|r| (r[0] - z).abs() < 0.011)
            .map(|r| r[1].abs())
            .fold(1.0, f64::min);
        assert!(near < 0.01, "{z}: {near}");
    }
    let crossing = rows
        .windows(2)
        .find(|w| w[0][1] > 0.0 && w[1][1] <= 0.0)
        .unwrap();
    assert!(crossing[0][0] < PI / 2.0 && crossing[1][0] >= PI / 2.0);
}

#[test]
fn invalid_p_is_a_usage_error() {
    let out = zetawalk(&["eval", "--p", "1.5", "--s", "1", "--t-max", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(0, 1]"));
    assert_eq!(
        zetawalk(&["eval", "--p", "1/3", "--s", "0.5", "--t-max", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(zetawalk(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn compute_failures_exit_one() {
    let out = zetawalk(&["lattice", "--p", "1/3", "--s", "2", "--steps", "30"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("capacity"));
}

#[test]
fn trend_rows() {
    let (_, rows) = csv(&zetawalk(&[
        "trend",
        "--s",
        "1",
        "--p-grid",
        "0.01:0.49:0.01",
    ]));
    assert_eq!(rows.len(), 49);
    assert!(rows.windows(2).all(|w| w[1][1] > w[0][1]));
    let (_, rows) = csv(&zetawalk(&["trend", "--s", "2", "--p", "0.3333333333"]));
    assert!((rows[0][1] - 0.319905585 * PI.sqrt()).abs() < 1e-6);
    let out = zetawalk(&["trend", "--s", "1", "--p", "0.5"]);
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.lines().nth(1).unwrap().ends_with(",quadrature"));
}

#[test]
fn sample_counts_every_walk() {
    let args = [
        "sample", "--p", "0.3333", "--s", "2", "--steps", "1000", "--walks", "100000", "--seed",
        "7", "--bins", "0.02",
    ];
    let out = zetawalk(&args);
    let (header, rows) = csv(&out);
    assert_eq!(header, ["bin_center", "count", "density"]);
    assert_eq!(rows.iter().map(|r| r[1]).sum::<f64>(), 100000.0);
    assert_eq!(out.stdout, zetawalk(&args).stdout);
}

#[test]
fn two_step_lattice() {
    let (_, rows) = csv(&zetawalk(&[
        "lattice", "--p", "1/3", "--s", "2", "--steps", "2",
    ]));
    assert_eq!(rows.len(), 9);
    let weight = |w: f64| rows.iter().find(|r| (r[0] - w).abs() < 1e-15).unwrap()[1];
    assert!((weight(0.0) - 4.0 / 9.0).abs() < 1e-15);
    assert!((weight(1.25) - 1.0 / 36.0).abs() < 1e-15);
    assert!((weight(0.25) - 1.0 / 9.0).abs() < 1e-15);
}

#[test]
fn power_products_match_sinc() {
    let (header, rows) = csv(&zetawalk(&[
        "power",
        "--kind",
        "euler_sinc",
        "--t-max",
        "20",
    ]));
    assert_eq!(header, ["t", "product", "closed_form", "abs_diff"]);
    assert!(rows.iter().all(|r| r[3] < 1e-9));
    let (header, _) = csv(&zetawalk(&["power", "--kind", "cantor", "--t-max", "5"]));
    assert_eq!(header, ["t", "product"]);
}

#[test]
fn pdf_with_trend_column() {
    let (header, rows) = csv(&zetawalk(&[
        "pdf", "--p", "1/3", "--s", "2", "--points", "81", "--trend",
    ]));
    assert_eq!(header, ["omega", "pdf", "trend_pdf"]);
    assert!(rows.iter().all(|r| r[1] >= 0.0 && r[2] > 0.0));
    assert_eq!(
        zetawalk(&["pdf", "--p", "1/3", "--s", "3", "--trend"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn typicality_report() {
    let out = zetawalk(&[
        "typicality",
        "--source",
        "mobius",
        "--n",
        "100000",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let f = doc["meta"]["nonzero_freq"].as_f64().unwrap();
    assert!((f - 6.0 / (PI * PI)).abs() < 1e-3);
    assert_eq!(doc["columns"][0]["name"], "n");
    assert_eq!(
        zetawalk(&["typicality", "--source", "sampled", "--n", "10"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn output_files_are_never_overwritten() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("atoms.json");
    let p = path.to_str().unwrap();
    let args = [
        "lattice", "--p", "1/2", "--s", "2", "--steps", "3", "--format", "json", "--out", p,
    ];
    assert!(zetawalk(&args).status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["meta"]["atoms"], 27);
    assert_eq!(doc["meta"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["columns"][1]["name"], "prob");
    let again = zetawalk(&args);
    assert_eq!(again.status.code(), Some(1));
    assert!(Path::new(p).exists());
}

#[test]
fn thread_variable_is_validated() {
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_zetawalk"))
            .args(["lattice", "--p", "1", "--s", "2", "--steps", "2"])
            .env("ZETAWALK_THREADS", v)
            .output()
            .unwrap()
    };
    assert_eq!(run("0").status.code(), Some(2));
    assert_eq!(run("many").status.code(), Some(2));
    assert!(run("1").status.success());
}
