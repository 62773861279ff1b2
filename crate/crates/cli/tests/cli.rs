use std::path::Path;
use std::process::{Command, Output};

fn carousel(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_carousel"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, col: usize) -> Vec<f64> {
    csv.lines().skip(1).map(|l| l.split(',').nth(col).unwrap().parse().unwrap()).collect()
}

#[test]
fn sample_is_byte_identical_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sample", "sine", "--beta", "2", "--window", "-20", "20", "--paths", "6", "--seed", "7", "--out"];
    let a = carousel(&[&args[..], &["a.csv"]].concat(), dir.path());
    let b = carousel(&[&args[..], &["b.csv"]].concat(), dir.path());
    assert!(a.status.success() && b.status.success());
    let ta = std::fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(ta, std::fs::read(dir.path().join("b.csv")).unwrap());
    let text = String::from_utf8(ta).unwrap();
    assert!(text.starts_with("path,lambda\n"));
    let paths: Vec<f64> = column(&text, 0);
    assert_eq!(paths.iter().cloned().fold(0.0, f64::max), 5.0);
    assert!(column(&text, 1).iter().all(|x| (-20.0..=20.0).contains(x)));

    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("a.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["subcommand"], "sample");
    assert_eq!(m["seed"], 7);
    assert_eq!(m["outputs"][0], "a.csv");
    assert!(m["grid"].as_str().unwrap().starts_with("log:500"));
}

#[test]
fn bessel_reports_k_smallest_points() {
    let dir = tempfile::tempdir().unwrap();
    let o = carousel(&["sample", "bessel", "--beta", "2", "--a", "0.5", "--k", "5", "--seed", "1", "--paths", "2"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let paths = column(&text, 0);
    let pts = column(&text, 1);
    assert_eq!(pts.len(), 10);
    assert_eq!(paths.iter().filter(|p| **p == 0.0).count(), 5);
    assert!(pts.iter().all(|x| *x > 0.0));
    assert!(pts[..5].windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn finite_circular_matches_eigen_angle_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let o = carousel(&["finite", "circular", "--n", "8", "--beta", "2", "--seed", "3", "--out", "c.csv"], dir.path());
    assert!(o.status.success());
    let spec = column(&std::fs::read_to_string(dir.path().join("c.csv")).unwrap(), 0);
    assert_eq!(spec.len(), 8);
    assert!(spec.iter().all(|x| (0.0..16.0 * std::f64::consts::PI).contains(x)));

    let o = carousel(&["oracle", "eigen-angles", "--input", "c.csv.coeffs.json"], dir.path());
    assert!(o.status.success());
    let mut angles: Vec<f64> = column(&stdout(&o), 0).iter().map(|t| t.rem_euclid(std::f64::consts::TAU)).collect();
    angles.sort_by(f64::total_cmp);
    for (l, t) in spec.iter().zip(&angles) {
        assert!((l / 8.0 - t).abs() < 1e-8, "{l} vs {t}");
    }
    let m = std::fs::read_to_string(dir.path().join("c.csv.manifest.json")).unwrap();
    assert!(m.contains("c.csv.coeffs.json"));
}

#[test]
fn finite_hua_pickrell_accepts_complex_delta() {
    let dir = tempfile::tempdir().unwrap();
    let o = carousel(&["finite", "hua-pickrell", "--n", "8", "--beta", "2", "--delta", "0.5+0.5i", "--periods", "2"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(column(&stdout(&o), 0).len(), 16);
    let bad = carousel(&["finite", "hua-pickrell", "--n", "8", "--delta", "-0.7"], dir.path());
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn hs_norm_of_clock_operator() {
    let dir = tempfile::tempdir().unwrap();
    let o = carousel(&["oracle", "hs-norm"], dir.path());
    assert_eq!(stdout(&o), "hs_norm_squared\n0.25\n");
    std::fs::write(
        dir.path().join("op.json"),
        r#"{"grid": [0.0, 0.5, 1.0], "values": [[0.0, 1.0], [0.0, 1.0]], "eta0": 0.0, "eta1": null}"#,
    )
    .unwrap();
    let o = carousel(&["oracle", "hs-norm", "--input", "op.json"], dir.path());
    let v = column(&stdout(&o), 0)[0];
    assert!((v - 0.25).abs() < 1e-10);
}

#[test]
fn riccati_on_stored_noise_matches_sampled_points() {
    let dir = tempfile::tempdir().unwrap();
    let o = carousel(&["sample", "airy", "--window", "-3", "4", "--seed", "2", "--noise-out", "n.json", "--out", "a.csv"], dir.path());
    assert!(o.status.success());
    let pts = column(&std::fs::read_to_string(dir.path().join("a.csv")).unwrap(), 1);
    let o = carousel(&["oracle", "riccati", "--input", "n.json", "--lambda", "-3", "4"], dir.path());
    let text = stdout(&o);
    assert!(text.starts_with("lambda,count\n"));
    let counts = column(&text, 1);
    assert_eq!((counts[1] - counts[0]) as usize, pts.len());
}

#[test]
fn json_output_carries_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let o = carousel(&["sample", "ks", "--beta", "2", "--window", "-10", "0", "--paths", "2", "--seed", "4", "--format", "json"], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["model"], "ks");
    assert_eq!(v["seed"], 4);
    assert_eq!(v["paths"].as_array().unwrap().len(), 2);
}

#[test]
fn validate_reports_each_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let o = carousel(&["validate", "--suite", "deterministic", "--only", "1,2,3", "--out", "v.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let t = std::fs::read_to_string(dir.path().join("v.csv")).unwrap();
    assert!(t.starts_with("criterion,model,window_lo,window_hi,paths,estimate,se,threshold,decision\n"));
    assert_eq!(t.lines().filter(|l| l.ends_with(",pass")).count(), 4);
    let o = carousel(&["validate", "--only", "4", "--format", "json"], dir.path());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["passed"], true);
}

#[test]
fn exit_status_classes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(carousel(&["sample", "sine", "--bogus"], dir.path()).status.code(), Some(1));
    assert_eq!(carousel(&["sample", "sine", "--window", "3", "1"], dir.path()).status.code(), Some(1));
    assert_eq!(carousel(&["sample", "sine", "--beta", "0"], dir.path()).status.code(), Some(1));
    assert_eq!(carousel(&["validate", "--only", "11"], dir.path()).status.code(), Some(1));
    assert_eq!(carousel(&["oracle", "eigen-angles"], dir.path()).status.code(), Some(1));
    let o = carousel(&["sample", "airy", "--window", "0", "60", "--seed", "1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("HorizonTooShort"));
    assert_eq!(carousel(&["--help"], dir.path()).status.code(), Some(0));
}
