use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn sphdepth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphdepth")).args(args).output().expect("spawn sphdepth")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn on_circle(degrees: &[f64]) -> String {
    degrees
        .iter()
        .map(|d| format!("{:?},{:?}\n", d.to_radians().cos(), d.to_radians().sin()))
        .collect()
}

fn exit(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn depth_prints_value() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "s.csv", "# two points\n1,0\n0,1\n");
    let o = sphdepth(&["depth", "--delta", "cos", "--theta", "1,0", "--input", &input]);
    assert_eq!(exit(&o), 0);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 1.5).abs() < 1e-15);

    let o = sphdepth(&["depth", "--delta", "arc", "--theta", "-1,0", "--input", &input]);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - std::f64::consts::PI / 4.0).abs() < 1e-12);
}

#[test]
fn deepest_prints_point_and_depth() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "s.csv", "1,0\n0.6,0.8\n0.6,-0.8\n");
    let o = sphdepth(&["deepest", "--delta", "cos", "--input", &input]);
    assert_eq!(exit(&o), 0);
    let text = stdout(&o);
    let point = text.lines().find_map(|l| l.strip_prefix("point=")).unwrap();
    let xs: Vec<f64> = point.split(',').map(|x| x.parse().unwrap()).collect();
    assert!((xs[0] - 1.0).abs() < 1e-12 && xs[1].abs() < 1e-12);
    assert!(text.lines().any(|l| l.starts_with("depth=")));
}

#[test]
fn sample_vmf_is_reproducible_and_readable() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("v.csv");
    let args = ["sample", "vmf", "--q", "3", "--kappa", "5", "--n", "40", "--seed", "7"];
    let a = sphdepth(&args);
    assert_eq!(exit(&a), 0);
    assert_eq!(stdout(&a), stdout(&sphdepth(&args)));
    assert_eq!(stdout(&a).lines().count(), 40);

    let mut with_out = args.to_vec();
    with_out.extend(["--out", out.to_str().unwrap()]);
    assert_eq!(exit(&sphdepth(&with_out)), 0);
    assert_eq!(fs::read_to_string(&out).unwrap(), stdout(&a));

    let o = sphdepth(&["deepest", "--delta", "arc", "--input", out.to_str().unwrap()]);
    assert_eq!(exit(&o), 0);
}

#[test]
fn bdp_table_and_svg() {
    let o = sphdepth(&["bdp", "--q-list", "3", "--kappa-grid", "5", "--deltas", "cos"]);
    assert_eq!(exit(&o), 0);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with('#')));
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "q,kernel,kappa,bound");
    let row = text.lines().last().unwrap();
    let bound: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
    assert!((bound - 0.400_045_401_991_009_7).abs() < 1e-9);

    let dir = TempDir::new().unwrap();
    let svg = dir.path().join("bdp.svg");
    let o = sphdepth(&["bdp", "--q-list", "2,3", "--out", svg.to_str().unwrap()]);
    assert_eq!(exit(&o), 0);
    let body = fs::read_to_string(&svg).unwrap();
    assert!(body.starts_with("<svg") || body.starts_with("<?xml"));
    assert_eq!(body.matches("<polyline").count(), 6);
}

#[test]
fn classify_query_and_labels() {
    let dir = TempDir::new().unwrap();
    let t1 = write(&dir, "t1.csv", "1,0\n0.8,0.6\n0.8,-0.6\n");
    let t2 = write(&dir, "t2.csv", "-1,0\n-0.8,0.6\n-0.8,-0.6\n");
    let t3 = write(&dir, "t3.csv", &on_circle(&[0.0, 20.0, -20.0, 40.0, -40.0]));
    let t4 = write(&dir, "t4.csv", &on_circle(&[80.0, 100.0, 120.0, 140.0, 160.0]));
    let query = "0.98480775301220802,0.17364817766693033";
    for delta in ["arc", "cos", "chord", "atd", "asd"] {
        let o = sphdepth(&["classify", "--train1", &t3, "--train2", &t4, "--delta", delta, "--query", query]);
        assert_eq!(exit(&o), 0, "{delta}");
        assert_eq!(stdout(&o).trim(), "1", "{delta}");
    }
    let test = write(&dir, "test.csv", "1,0\n-1,0\n0,1\n");
    let o = sphdepth(&["classify", "--train1", &t1, "--train2", &t2, "--delta", "chord", "--test", &test]);
    let text = stdout(&o);
    let labels: Vec<&str> = text.lines().map(str::trim).collect();
    assert_eq!(&labels[..2], &["1", "2"]);

    let truth = write(&dir, "labels.txt", "2\n2\n");
    let two = write(&dir, "two.csv", "1,0\n-1,0\n");
    let o = sphdepth(&[
        "classify", "--train1", &t1, "--train2", &t2, "--delta", "cos", "--test", &two, "--labels", &truth,
    ]);
    assert_eq!(exit(&o), 0);
    let rate: f64 = stdout(&o).trim().parse().unwrap();
    assert_eq!(rate, 0.5);
}

#[test]
fn simulate_is_deterministic() {
    let args = ["simulate", "efficiency", "--M", "3", "--q", "3", "--n", "25", "--kappa", "5", "--seed", "11"];
    let a = sphdepth(&args);
    assert_eq!(exit(&a), 0);
    assert_eq!(a.stdout, sphdepth(&args).stdout);
    let text = stdout(&a);
    assert!(text.contains("# seed=11"));
    assert!(text.lines().any(|l| l == "stat,q,n,kappa,kernel,replication,value"));
}

#[test]
fn config_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "s.csv", "1,0\n");
    assert_eq!(exit(&sphdepth(&["depth", "--delta", "manhattan", "--theta", "1,0", "--input", &input])), 2);
    assert_eq!(exit(&sphdepth(&["simulate", "nonsense"])), 2);
    assert_eq!(exit(&sphdepth(&["sample", "vmf", "--q", "3", "--kappa", "-1", "--n", "5"])), 2);
    assert_eq!(exit(&sphdepth(&["sample", "vmf", "--q", "3", "--kappa", "1", "--n", "5", "--mode", "1,0"])), 2);
    assert_eq!(exit(&sphdepth(&["simulate", "efficiency", "--M", "0"])), 2);
}

#[test]
fn data_errors_exit_3() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.csv");
    let o = sphdepth(&["depth", "--delta", "cos", "--theta", "1,0", "--input", missing.to_str().unwrap()]);
    assert_eq!(exit(&o), 3);

    let off = write(&dir, "off.csv", "1,0\n3,4\n");
    let o = sphdepth(&["depth", "--delta", "cos", "--theta", "1,0", "--input", &off]);
    assert_eq!(exit(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let o = sphdepth(&["depth", "--delta", "cos", "--theta", "1,0", "--input", &off, "--normalize"]);
    assert_eq!(exit(&o), 0);

    let ragged = write(&dir, "ragged.csv", "1,0\n1,0,0\n");
    assert_eq!(exit(&sphdepth(&["deepest", "--delta", "arc", "--input", &ragged])), 3);

    let circle = write(&dir, "c.csv", "1,0\n");
    let o = sphdepth(&["depth", "--delta", "arc", "--theta", "0,0,1", "--input", &circle]);
    assert_eq!(exit(&o), 3);
}

#[test]
fn numerical_failures_exit_4() {
    let dir = TempDir::new().unwrap();
    let balanced = write(&dir, "b.csv", "1,0\n-1,0\n");
    let o = sphdepth(&["deepest", "--delta", "cos", "--input", &balanced]);
    assert_eq!(exit(&o), 4);
    assert!(Path::new(&balanced).exists());
}
