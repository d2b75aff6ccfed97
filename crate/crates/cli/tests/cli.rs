use std::path::Path;
use std::process::{Command, Output};

fn bubblewave(args: &[&str], env_out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bubblewave"));
    cmd.args(args).env_remove("BUBBLEWAVE_OUT");
    if let Some(dir) = env_out {
        cmd.env("BUBBLEWAVE_OUT", dir);
    }
    cmd.output().unwrap()
}

fn manifest(dir: &Path) -> String {
    std::fs::read_to_string(dir.join("manifest.txt")).unwrap()
}

fn outputs(text: &str) -> Vec<String> {
    text.lines()
        .filter(|l| l.starts_with("output."))
        .map(|l| l.split(" = ").nth(1).unwrap().to_string())
        .collect()
}

const COATED: &[&str] = &["bubble", "--model", "rp_coated", "--A", "15MPa", "--f", "0.5MHz", "--T", "20us"];

#[test]
fn bubble_run_writes_csv_svg_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let mut args = COATED.to_vec();
    args.extend(["--out-dir", out.to_str().unwrap()]);
    let res = bubblewave(&args, None);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let csv = std::fs::read_to_string(out.join("bubble.csv")).unwrap();
    assert!(csv.lines().count() > 100);
    assert!(std::fs::read_to_string(out.join("bubble.svg")).unwrap().starts_with("<svg"));
    let text = manifest(&out);
    assert!(text.contains("status = ok"));
    let listed = outputs(&text);
    assert!(listed.len() >= 4);
    assert!(listed.iter().all(|p| Path::new(p).exists()), "{listed:?}");
}

#[test]
fn rerun_from_config_snapshot_is_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let mut args = COATED.to_vec();
    args.extend(["--out-dir", a.to_str().unwrap()]);
    assert_eq!(bubblewave(&args, None).status.code(), Some(0));
    let snapshot = a.join("config.txt");
    let res = bubblewave(
        &["bubble", "--config", snapshot.to_str().unwrap(), "--out-dir", b.to_str().unwrap()],
        None,
    );
    assert_eq!(res.status.code(), Some(0));
    assert_eq!(std::fs::read(a.join("bubble.csv")).unwrap(), std::fs::read(b.join("bubble.csv")).unwrap());
    assert_eq!(std::fs::read(a.join("bubble.svg")).unwrap(), std::fs::read(b.join("bubble.svg")).unwrap());
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let res = bubblewave(&["bubble", "--no-such-flag", "1"], None);
    assert_eq!(res.status.code(), Some(1));
    assert!(!res.stderr.is_empty());
}

#[test]
fn invalid_value_is_a_usage_error() {
    let res = bubblewave(&["bubble", "--A", "loud"], None);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(bubblewave(&["--help"], None).status.code(), Some(0));
    assert_eq!(bubblewave(&["reproduce", "--help"], None).status.code(), Some(0));
}

#[test]
fn output_directory_falls_back_to_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let res = bubblewave(&["convergence", "--study", "rk4"], Some(tmp.path()));
    assert_eq!(res.status.code(), Some(0));
    assert!(tmp.path().join("convergence.csv").exists());
    assert!(tmp.path().join("manifest.txt").exists());
}

#[test]
fn unwritable_output_is_an_io_error() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("file");
    std::fs::write(&blocker, "not a directory").unwrap();
    let target = blocker.join("out");
    let mut args = COATED.to_vec();
    args.extend(["--out-dir", target.to_str().unwrap()]);
    assert_eq!(bubblewave(&args, None).status.code(), Some(3));
}

#[test]
fn missing_config_file_is_an_io_error() {
    let res = bubblewave(&["bubble", "--config", "/nonexistent/run.cfg"], None);
    assert_eq!(res.status.code(), Some(3));
}

#[test]
fn collapsing_bubble_is_a_numerical_failure() {
    let tmp = tempfile::tempdir().unwrap();
    let res = bubblewave(
        &[
            "bubble", "--model", "rp_simple", "--A", "1MPa", "--f", "0.1MHz", "--T", "30us", "--out-dir",
            tmp.path().to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(res.status.code(), Some(2));
    let text = manifest(tmp.path());
    assert!(text.contains("radius_floor"), "{text}");
    assert!(tmp.path().join("bubble.csv").exists());
}

#[test]
fn overview_preset_runs_six_bubbles() {
    let tmp = tempfile::tempdir().unwrap();
    let res = bubblewave(&["reproduce", "fig-overview", "--out-dir", tmp.path().to_str().unwrap()], None);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let dir = tmp.path().join("fig-overview");
    let csvs = std::fs::read_dir(&dir)
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "csv"))
        .count();
    assert_eq!(csvs, 6);
    let text = manifest(&dir);
    assert!(text.contains("claim_holds = true"), "{text}");
}

#[test]
fn spectrum_of_a_csv_series() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("tone.csv");
    let mut csv = String::from("t,y\n");
    for i in 0..20_000 {
        let t = i as f64 * 1e-8;
        csv.push_str(&format!("{t:e},{:e}\n", (2.0 * std::f64::consts::PI * 1e6 * t).sin()));
    }
    std::fs::write(&input, csv).unwrap();
    let res = bubblewave(
        &[
            "spectrum", "--input", input.to_str().unwrap(), "--f", "1MHz", "--out-dir",
            tmp.path().to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let thd: f64 = manifest(tmp.path())
        .lines()
        .find_map(|l| l.strip_prefix("thd = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(thd < 1e-3, "pure tone thd {thd}");
}
