use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_raagsep"));
    c.env_remove("RAAGSEP_CAP");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(o)).expect("stdout is json")
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    /// Folds and completes `gens` over the graph `text`.
    fn new(text: &str, gens: &[&str]) -> Self {
        let ws = Self { dir: TempDir::new().unwrap() };
        fs::write(ws.path("g.txt"), text).unwrap();
        let mut args = vec!["fold".to_string(), "--graph".into(), ws.s("g.txt"), "--out".into(), ws.s("Y.json")];
        for g in gens {
            args.push("--gen".into());
            args.push(g.to_string());
        }
        assert!(bin().args(&args).status().unwrap().success());
        let o = run(&[
            "complete",
            "--graph",
            &ws.s("g.txt"),
            "--Y",
            &ws.s("Y.json"),
            "--out-c",
            &ws.s("C.json"),
            "--out-ledger",
            &ws.s("L.json"),
        ]);
        assert!(o.status.success());
        ws
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn s(&self, name: &str) -> String {
        self.path(name).to_string_lossy().into_owned()
    }

    fn bundle_args(&self) -> Vec<String> {
        ["--graph", "g.txt", "--Y", "Y.json", "--C", "C.json", "--ledger", "L.json"]
            .iter()
            .enumerate()
            .map(|(i, a)| if i % 2 == 1 { self.s(a) } else { a.to_string() })
            .collect()
    }

    fn run_with_bundle(&self, head: &[&str], tail: &[&str]) -> Output {
        let mut args: Vec<String> = head.iter().map(|s| s.to_string()).collect();
        args.extend(self.bundle_args());
        args.extend(tail.iter().map(|s| s.to_string()));
        bin().args(&args).output().unwrap()
    }
}

fn read_json(p: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn fold_and_complete_write_versioned_json() {
    let ws = Workspace::new("generators: a b\n", &["a a", "b"]);
    let y = read_json(&ws.path("Y.json"));
    assert_eq!(y["schema"], 1);
    assert_eq!(y["vertices"].as_array().unwrap().len(), 2);
    assert_eq!(y["edges"].as_array().unwrap().len(), 3);
    let ledger = read_json(&ws.path("L.json"));
    assert_eq!(ledger["schema"], 1);
    assert_eq!(ledger["steps"].as_array().unwrap().len(), 1);
    assert_eq!(ledger["steps"][0]["h"], "a");
    let c = read_json(&ws.path("C.json"));
    assert_eq!(c["vertices"].as_array().unwrap().len(), 2);
}

#[test]
fn member_reports_both_subgroups() {
    let ws = Workspace::new("generators: a b\n", &["a a", "b"]);
    let base = ["--graph", &ws.s("g.txt"), "--Y", &ws.s("Y.json"), "--C", &ws.s("C.json")].map(String::from);
    let member = |w: &str| {
        let mut args = vec!["member".to_string()];
        args.extend(base.iter().cloned());
        args.extend(["--word".to_string(), w.to_string()]);
        json(&bin().args(&args).output().unwrap())
    };
    let v = member("a b a^-1");
    assert_eq!((v["in_h"].as_bool(), v["in_k"].as_bool()), (Some(false), Some(true)));
    let v = member("a a b");
    assert_eq!((v["in_h"].as_bool(), v["in_k"].as_bool()), (Some(true), Some(true)));
    let v = member("a");
    assert_eq!(v["in_k"].as_bool(), Some(false));
}

#[test]
fn rep_rewrites_into_stable_letters() {
    let ws = Workspace::new("generators: a b\n", &["a a", "b"]);
    let v = json(&ws.run_with_bundle(&["rep"], &["--word", "a b a^-1 b"]));
    assert_eq!(v["hnn_word"], "t1 . (b)");
    assert_eq!(v["dim"], 4);
    assert_eq!(v["in_h"], false);
    let v = json(&ws.run_with_bundle(&["rep"], &["--word", "a"]));
    assert!(v["rho_prime"].is_null());
}

#[test]
fn separate_then_verify() {
    let ws = Workspace::new("generators: a b\n", &["a a", "b"]);
    for (word, kind) in [("a", "permutation"), ("a b a^-1", "mod-p")] {
        let o = ws.run_with_bundle(&["separate"], &["--word", word, "--out", &ws.s("cert.json")]);
        assert!(o.status.success());
        let cert = read_json(&ws.path("cert.json"));
        assert_eq!(cert["schema"], 1);
        assert_eq!(cert["kind"], kind);
        assert_eq!(cert["word_literal"], word);
        let o = ws.run_with_bundle(&["verify", "--cert", &ws.s("cert.json")], &[]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).trim(), "verified");
        let o = ws.run_with_bundle(&["verify", "--cert", &ws.s("cert.json")], &["--word", "a a"]);
        assert_eq!(o.status.code(), Some(1));
    }
    let o = ws.run_with_bundle(&["separate"], &["--word", "a a b"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lies in H"));
}

#[test]
fn cap_is_read_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("z2.txt");
    fs::write(&g, "generators: a b\nedge: a b\n").unwrap();
    let o =
        bin().args(["fold", "--graph", g.to_str().unwrap(), "--gen", "a b"]).env("RAAGSEP_CAP", "60").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap 60"));
    let o =
        bin().args(["fold", "--graph", g.to_str().unwrap(), "--gen", "a"]).env("RAAGSEP_CAP", "60").output().unwrap();
    assert!(o.status.success());
}

#[test]
fn bench_writes_csv_and_fit() {
    let dir = TempDir::new().unwrap();
    let family = dir.path().join("f.json");
    fs::write(
        &family,
        r#"{"schema": 1, "name": "z2", "graph": "generators: a b\nedge: a b\n", "subgroup": ["a"], "base": "b", "m_min": 1, "m_max": 9}"#,
    )
    .unwrap();
    let out = dir.path().join("r.csv");
    let v = json(&run(&["bench", "--family", family.to_str().unwrap(), "--out", out.to_str().unwrap()]));
    assert_eq!(v["records"], 9);
    assert!(v["fit"]["slope"].is_number());
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("m,len,kind,p,log_bound,ms\n"));
    assert_eq!(csv.lines().count(), 10);

    fs::write(
        &family,
        r#"{"name": "bad", "graph": "generators: a b\n", "subgroup": ["a"], "base": "a", "m_min": 1, "m_max": 3}"#,
    )
    .unwrap();
    let o = run(&["bench", "--family", family.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn export_dot_from_json_graph() {
    let ws = Workspace::new("generators: a b\n", &["a a", "b"]);
    let graph_json = r#"{"schema": 1, "generators": ["a", "b"], "edges": []}"#;
    fs::write(ws.path("g.json"), graph_json).unwrap();
    let o = run(&["export-dot", "--graph", &ws.s("g.json"), "--complex", &ws.s("Y.json")]);
    assert!(o.status.success());
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 3);
}
