use std::path::PathBuf;
use std::process::{Command, Output};

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn wfcrack(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wfcrack"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn report_value(text: &str, key: &str) -> Vec<f64> {
    let line = text
        .lines()
        .find(|l| l.starts_with(key))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"));
    line[key.len()..]
        .split_whitespace()
        .map(|v| v.parse().unwrap())
        .collect()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn write_config(dir: &tempfile::TempDir, text: &str) -> PathBuf {
    let path = dir.path().join("run.json");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn identical_materials_have_no_oscillation() {
    let cfg = config("identical.json");
    let text = stdout(&wfcrack(
        &["params", "--config", cfg.to_str().unwrap()],
        &[],
    ));
    assert_eq!(report_value(&text, "epsilon"), vec![0.0]);
    assert_eq!(report_value(&text, "max_residual"), vec![0.0]);
    assert!(
        text.contains("undefined"),
        "gamma_star at alpha = 0:\n{text}"
    );
}

#[test]
fn hutchinson_paths_agree() {
    let cfg = config("hutchinson.json");
    let text = stdout(&wfcrack(&["sif", "--config", cfg.to_str().unwrap()], &[]));
    let closed = report_value(&text, "K closed_form");
    assert!((closed[0] - 0.819038536439171).abs() < 1e-12 && closed[1].abs() < 1e-15);
    assert!(report_value(&text, "max_path_delta")[0] < 1e-8);
}

#[test]
fn mode3_paths_agree() {
    let cfg = config("mode3.json");
    let text = stdout(&wfcrack(&["mode3", "--config", cfg.to_str().unwrap()], &[]));
    let k = report_value(&text, "K_III closed_form")[0];
    assert!((k - (2.0 / std::f64::consts::PI).sqrt() / 0.8f64.sqrt()).abs() < 1e-12);
    assert!(report_value(&text, "max_path_delta")[0] < 1e-10);
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let cfg = config("three_point.json");
    let args = ["sweep", "--config", cfg.to_str().unwrap(), "--grid", "12"];
    let one = stdout(&wfcrack(&args, &[("WFCRACK_THREADS", "1")]));
    let four = stdout(&wfcrack(&args, &[("WFCRACK_THREADS", "4")]));
    assert_eq!(one, four);
    let (header, rows) = csv_rows(&one);
    assert_eq!(
        header[1..],
        [
            "b_over_a", "KS_I", "KS_II", "KA_I", "KA_II", "AS_I", "AS_II", "AA_I", "AA_II",
            "ratio_KI"
        ]
    );
    assert_eq!(rows.len(), 5 * 12);
    // No skew load when the lower-face forces meet at the upper one.
    for row in rows.iter().filter(|r| r[1] == 0.0) {
        assert_eq!(&row[4..6], &[0.0, 0.0]);
    }
}

#[test]
fn sweep_mode_ii_ratio_is_alpha() {
    let cfg = config("three_point.json");
    let text = stdout(&wfcrack(
        &[
            "sweep",
            "--config",
            cfg.to_str().unwrap(),
            "--grid",
            "6",
            "--eta",
            "-0.5,0.5",
        ],
        &[],
    ));
    let (_, rows) = csv_rows(&text);
    let mut worst: f64 = 0.0;
    for row in rows.iter().filter(|r| r[1] > 0.0) {
        let eta = row[0];
        let alpha = wfcrack::BimaterialParams::from_eta(eta, 0.2, 0.3)
            .unwrap()
            .alpha;
        worst = worst.max((row[5] / row[3] - alpha).abs());
    }
    assert!(worst < 1e-10, "max |KA_II/KS_II - alpha| = {worst:e}");
}

#[test]
fn perturbation_error_is_second_order() {
    let cfg = config("three_point.json");
    let text = stdout(&wfcrack(
        &["perturb", "--config", cfg.to_str().unwrap()],
        &[],
    ));
    let (header, rows) = csv_rows(&text);
    assert_eq!(
        header,
        ["a", "ReK_star", "ImK_star", "ReK_pred", "ImK_pred", "abs_err"]
    );
    for pair in rows.windows(2) {
        let shrink = pair[0][5] / pair[1][5];
        assert!(shrink > 50.0, "error ratio {shrink} per decade of advance");
    }
}

#[test]
fn field_methods_agree_near_the_tip() {
    let dir = tempfile::tempdir().unwrap();
    let base = std::fs::read_to_string(config("three_point.json")).unwrap();
    let series_out = dir.path().join("series.csv");
    let cfg = config("three_point.json");
    stdout(&wfcrack(
        &[
            "field",
            "--config",
            cfg.to_str().unwrap(),
            "--grid",
            "5",
            "--out",
            series_out.to_str().unwrap(),
        ],
        &[],
    ));
    let mellin = write_config(
        &dir,
        &base
            .replace("\"method\": \"series\"", "\"method\": \"mellin\"")
            .replace("[0.001, 0.01, 0.1]", "[0.001]"),
    );
    let numeric = stdout(&wfcrack(
        &[
            "field",
            "--config",
            mellin.to_str().unwrap(),
            "--grid",
            "5",
            "--tol",
            "1e-8",
        ],
        &[],
    ));
    let (_, series) = csv_rows(&std::fs::read_to_string(series_out).unwrap());
    let (_, numeric) = csv_rows(&numeric);
    assert_eq!(numeric.len(), 5);
    for (s, n) in series.iter().zip(&numeric) {
        let scale = n[2..5].iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for k in 2..5 {
            assert!(
                (s[k] - n[k]).abs() < 1e-2 * scale,
                "r = {}, theta = {}: {} vs {}",
                n[0],
                n[1],
                s[k],
                n[k]
            );
        }
    }
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let both = write_config(
        &dir,
        r#"{"materials": {"eta": 0.5, "mu_plus": 1, "nu_plus": 0.2, "nu_minus": 0.3}, "loads": []}"#,
    );
    let o = wfcrack(&["params", "--config", both.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(
        err.starts_with("wfcrack: E_CONFIG: ") && err.lines().count() == 1,
        "{err}"
    );

    let unbalanced = write_config(
        &dir,
        r#"{"materials": {"eta": 0.5, "nu_plus": 0.2, "nu_minus": 0.3},
            "loads": [{"kind": "point", "face": "upper", "x1": -1, "value": [0, -1]}]}"#,
    );
    assert_eq!(
        wfcrack(&["sif", "--config", unbalanced.to_str().unwrap()], &[])
            .status
            .code(),
        Some(2)
    );
    let missing = dir.path().join("absent.json");
    assert_eq!(
        wfcrack(&["params", "--config", missing.to_str().unwrap()], &[])
            .status
            .code(),
        Some(2)
    );
    let cfg = config("three_point.json");
    let threads = wfcrack(
        &["sweep", "--config", cfg.to_str().unwrap()],
        &[("WFCRACK_THREADS", "zero")],
    );
    assert_eq!(threads.status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_with_three() {
    // A point force exactly at the sampled face point makes the traction a delta there.
    let dir = tempfile::tempdir().unwrap();
    let base = std::fs::read_to_string(config("three_point.json")).unwrap();
    let cfg = write_config(
        &dir,
        &base
            .replace("\"method\": \"series\"", "\"method\": \"mellin\"")
            .replace("[0.001, 0.01, 0.1]", "[1.0]"),
    );
    let o = wfcrack(
        &["field", "--config", cfg.to_str().unwrap(), "--grid", "3"],
        &[],
    );
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("wfcrack: E_NUMERICAL: "));
}
