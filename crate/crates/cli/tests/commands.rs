use std::path::Path;
use std::process::{Command, Output};

use semsnap_testkit::fixture_path;

fn semsnap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semsnap"))
        .args(args)
        .env_remove("SEMSNAP_CONFIG")
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    fixture_path(&format!("{name}.canvas.json")).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn plan_id(canvas: &str, view: &str, label: &str) -> String {
    let out = semsnap(&["ops", canvas, "--view", view]);
    stdout(&out)
        .lines()
        .find(|l| l.contains(label))
        .and_then(|l| l.split_whitespace().next())
        .unwrap_or_else(|| panic!("no `{label}` for {view}: {}", stdout(&out)))
        .to_string()
}

#[test]
fn lint_exit_codes() {
    let dirty = semsnap(&["lint", &fixture("election")]);
    assert_eq!(dirty.status.code(), Some(1));
    assert!(stdout(&dirty).contains("R5 [pollsters,trump] color"));

    let clean = semsnap(&["lint", &fixture("single")]);
    assert_eq!(clean.status.code(), Some(0));
    assert_eq!(stdout(&clean).trim(), "no relations found");

    let broken = semsnap(&["lint", &fixture("malformed")]);
    assert_eq!(broken.status.code(), Some(2));
    assert!(stdout(&broken).is_empty());
    assert!(stderr(&broken).contains("syntax error at line"));

    let missing = semsnap(&["lint", "/no/such/file.canvas.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn conditional_relations_fail_only_on_request() {
    let sales = fixture("sales");
    assert_eq!(semsnap(&["lint", &sales]).status.code(), Some(0));
    assert_eq!(
        semsnap(&["lint", &sales, "--fail-on-conditional"]).status.code(),
        Some(1)
    );
}

#[test]
fn lint_json_and_quiet() {
    let out = semsnap(&["lint", &fixture("election"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 2);
    let quiet = semsnap(&["--quiet", "lint", &fixture("election")]);
    assert_eq!(quiet.status.code(), Some(1));
    assert!(quiet.stdout.is_empty());
}

#[test]
fn ops_lists_menus() {
    let out = semsnap(&["ops", &fixture("election"), "--view", "trump"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("integrate: mirror"));
    assert!(text.contains("integrate: overlay"));

    let bars = semsnap(&["ops", &fixture("same_grouping"), "--view", "price_by_cyl"]);
    assert_eq!(stdout(&bars).lines().filter(|l| l.contains("  integrate: ")).count(), 3);

    let isolated = semsnap(&["ops", &fixture("single"), "--view", "price_by_cyl", "--format", "json"]);
    assert_eq!(isolated.status.code(), Some(0));
    assert_eq!(stdout(&isolated).trim(), "[]");

    let unknown = semsnap(&["ops", &fixture("election"), "--view", "ghost"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn apply_mirror_then_lint() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mirrored.canvas.json");
    let election = fixture("election");
    let id = plan_id(&election, "trump", "integrate: mirror");
    let res = semsnap(&["apply", &election, "--op", &id, "-o", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0), "{}", stderr(&res));

    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let views = doc["views"].as_array().unwrap();
    assert!(views.iter().any(|v| v["composition"] == "mirrored"));

    let lint = semsnap(&["lint", out.to_str().unwrap()]);
    assert!(!stdout(&lint).contains("R3a"), "{}", stdout(&lint));
}

#[test]
fn apply_needs_answers_and_fresh_ids() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.canvas.json");
    let out = out.to_str().unwrap();
    let sales = fixture("sales");
    let id = plan_id(&sales, "europe", "integrate: group");

    let unanswered = semsnap(&["apply", &sales, "--op", &id, "-o", out]);
    assert_eq!(unanswered.status.code(), Some(3));
    assert!(stderr(&unanswered).contains("Are sum(Europe) and sum(North America) representing the same quantity?"));
    assert!(!Path::new(out).exists());

    let answered = semsnap(&[
        "apply",
        &sales,
        "--op",
        &id,
        "--confirm",
        "sum(Europe)=sum(North America):same",
        "-o",
        out,
    ]);
    assert_eq!(answered.status.code(), Some(0), "{}", stderr(&answered));

    let stale = semsnap(&["apply", &sales, "--op", "0123456789ab", "-o", out]);
    assert_eq!(stale.status.code(), Some(3));

    let garbled = semsnap(&["apply", &sales, "--op", &id, "--confirm", "nonsense", "-o", out]);
    assert_eq!(garbled.status.code(), Some(2));
}

#[test]
fn apply_leaves_the_input_alone_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let election = fixture("election");
    let before = std::fs::read(&election).unwrap();
    let id = plan_id(&election, "trump", "differentiate");
    for out in [&a, &b] {
        assert_eq!(
            semsnap(&["apply", &election, "--op", &id, "-o", out.to_str().unwrap()])
                .status
                .code(),
            Some(0)
        );
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(std::fs::read(&election).unwrap(), before);
    // the written document points back at the dataset
    assert_eq!(semsnap(&["lint", a.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn render_writes_specs_and_index() {
    let dir = tempfile::tempdir().unwrap();
    let res = semsnap(&["render", &fixture("election"), "-o", dir.path().to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0), "{}", stderr(&res));
    let index: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("index.json")).unwrap()).unwrap();
    let views = index["views"].as_array().unwrap();
    assert_eq!(views.len(), 3);
    for v in views {
        assert!(dir.path().join(v["file"].as_str().unwrap()).exists());
    }
}

#[test]
fn render_after_stacking() {
    let dir = tempfile::tempdir().unwrap();
    let stacked = dir.path().join("stacked.canvas.json");
    let nightingale = fixture("nightingale");
    let id = plan_id(&nightingale, "disease", "integrate: stack");
    assert_eq!(
        semsnap(&["apply", &nightingale, "--op", &id, "-o", stacked.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    let specs = dir.path().join("specs");
    assert_eq!(
        semsnap(&["render", stacked.to_str().unwrap(), "-o", specs.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    let spec: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(specs.join("disease.json")).unwrap()).unwrap();
    assert_eq!(spec["composition"], "stacked");
    assert_eq!(spec["seriesMarks"].as_array().unwrap().len(), 3);
}

#[test]
fn render_empty_canvas() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.canvas.json");
    let doc = r#"{"version": 1, "dataset": {"name": "t", "inline": "a,b\nx,1\n",
        "columns": [{"name": "a", "type": "nominal"}, {"name": "b", "type": "quantitative"}]}, "views": []}"#;
    std::fs::write(&empty, doc).unwrap();
    let specs = dir.path().join("specs");
    assert_eq!(
        semsnap(&["render", empty.to_str().unwrap(), "-o", specs.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    let index: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(specs.join("index.json")).unwrap()).unwrap();
    assert_eq!(index["views"].as_array().unwrap().len(), 0);
}

#[test]
fn config_from_flag_and_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("semsnap.toml");
    std::fs::write(&cfg, "[weights]\nconfuser = 5.0\n").unwrap();
    let res = semsnap(&["--config", cfg.to_str().unwrap(), "lint", &fixture("single")]);
    assert_eq!(res.status.code(), Some(0));

    std::fs::write(&cfg, "weights = 3").unwrap();
    let bad = semsnap(&["--config", cfg.to_str().unwrap(), "lint", &fixture("single")]);
    assert_eq!(bad.status.code(), Some(2));
    let via_env = Command::new(env!("CARGO_BIN_EXE_semsnap"))
        .args(["lint", &fixture("single")])
        .env("SEMSNAP_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(via_env.status.code(), Some(2));
}

#[test]
fn serve_rejects_bad_input_before_binding() {
    let res = semsnap(&["serve", &fixture("malformed"), "--port", "0"]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn serve_reports_a_busy_port() {
    let taken = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let port = taken.local_addr().unwrap().port().to_string();
    let res = semsnap(&["serve", &fixture("single"), "--port", &port]);
    assert_eq!(res.status.code(), Some(2));
    assert!(stderr(&res).contains("binding"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(semsnap(&[]).status.code(), Some(2));
    assert_eq!(semsnap(&["lint"]).status.code(), Some(2));
    assert_eq!(semsnap(&["--help"]).status.code(), Some(0));
}
