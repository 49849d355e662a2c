//! The binary's subcommands, exit codes and config handling.

use std::fs;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_ldkep");

fn ldkep(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn laver_tables_print_and_check() {
    let o = ldkep(&["laver", "1"]);
    assert_eq!(code(&o), 0);
    let rows: Vec<String> = stdout(&o)
        .lines()
        .skip(2)
        .map(|l| l.split_whitespace().collect::<Vec<_>>().join(" "))
        .collect();
    assert_eq!(rows, ["1| 2 2", "2| 1 2"]);
    let o = ldkep(&["laver", "3", "--check"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("3| 4 8 4 8 4 8 4 8"));
    assert!(text.contains("PASS left distributivity (exhaustive, 512 triples)"));
    assert_eq!(code(&ldkep(&["laver", "0"])), 2);
    assert_eq!(code(&ldkep(&["laver", "6"])), 2);
}

#[test]
fn law_checks_exit_on_counterexamples() {
    let o = ldkep(&["laws", "--ctx", "shifted"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).matches("PASS").count(), 4);
    let bad = r#"platform=braid mode=gsl p=3 ap=1 app=2 unchecked=1"#;
    let o = ldkep(&["laws", "--ctx", bad, "--trials", "100"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL"));
    let o = ldkep(&["laws", "--ctx", "laver3"]);
    assert!(stdout(&o).contains("exhaustive, 512 cases"));
    assert_eq!(code(&ldkep(&["laws", "--ctx", "platform=nothing"])), 2);
}

#[test]
fn in_process_runs_agree() {
    for preset in ["laver3", "s5-conj", "braid-gsc"] {
        let o = ldkep(&["kep", "run", "--ctx", preset, "--seed", "4"]);
        assert_eq!(code(&o), 0, "{preset}");
        let text = stdout(&o);
        let hash = |k: &str| text.lines().find_map(|l| l.strip_prefix(k)).unwrap().to_string();
        assert_eq!(hash("key_hash_a "), hash("key_hash_b "));
        assert!(text.contains("LDKEP/1 PUB role=alice count=2\nELT at1 "));
    }
    // same seed, same bytes
    let a = stdout(&ldkep(&["kep", "run", "--ctx", "s5-conj", "--seed", "9", "--m", "2"]));
    let b = stdout(&ldkep(&["kep", "run", "--ctx", "s5-conj", "--seed", "9", "--m", "2"]));
    assert_eq!(a, b);
    assert!(a.contains("PUB role=bob count=2"));
}

#[test]
fn attacks_and_refusal() {
    let o = ldkep(&["attack", "--ctx", "laver3", "--pipeline", "C", "--count", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).matches("verdict match").count(), 3);
    let o = ldkep(&["attack", "--ctx", "d4-twist", "--pipeline", "A"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("oracle MSP[B]"));
    let o = ldkep(&["attack", "--ctx", "braid-gsc", "--pipeline", "A"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("finite platform"));
    assert_eq!(code(&ldkep(&["attack", "--pipeline", "E"])), 2);
}

#[test]
fn sccp_modes() {
    let o = ldkep(&["sccp", "--plant", "--count", "5", "--seed", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("solved 5/5"));
    let o = ldkep(&["sccp", "--plant", "--k", "trivial", "--count", "3"]);
    assert!(stdout(&o)
        .lines()
        .filter(|l| l.starts_with("instance"))
        .all(|l| l.contains("c=()")));
    let o = ldkep(&["sccp", "--transform", "--count", "50"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("solved 50/50"));
    assert_eq!(code(&ldkep(&["sccp"])), 2);
    assert_eq!(code(&ldkep(&["sccp", "--plant", "--transform"])), 2);
    assert_eq!(code(&ldkep(&["sccp", "--plant", "--group", "Z5"])), 2);
}

#[test]
fn bench_emits_csv() {
    let o = ldkep(&[
        "bench",
        "--reps",
        "1",
        "--presets",
        "laver3,braid-gsc",
        "--lengths",
        "8,64",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("task,ctx,size,reps,mean_ms"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert!(rows.iter().all(|r| r.len() == 5));
    assert!(rows.iter().any(|r| r[0] == "handshake" && r[1] == "braid-gsc"));
}

#[test]
fn config_file_and_out_path() {
    let dir = std::env::temp_dir().join(format!("ldkep-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let conf = dir.join("run.conf");
    let out = dir.join("report.txt");
    fs::write(&conf, "ctx=s5-conj\nseed=9\nm=2\n").unwrap();
    let o = ldkep(&[
        "kep",
        "run",
        "--config",
        conf.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let from_flags = stdout(&ldkep(&["kep", "run", "--ctx", "s5-conj", "--seed", "9", "--m", "2"]));
    assert_eq!(fs::read_to_string(&out).unwrap(), from_flags);
    // flags win over the file
    let o = ldkep(&["kep", "run", "--config", conf.to_str().unwrap(), "--m", "1"]);
    assert!(stdout(&o).contains("PUB role=bob count=1"));
    fs::write(&conf, "colour=blue\n").unwrap();
    assert_eq!(code(&ldkep(&["laws", "--config", conf.to_str().unwrap()])), 2);
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn mismatched_contexts_fail_at_hello() {
    let mut server = Command::new(BIN)
        .args([
            "kep",
            "serve",
            "--listen",
            "127.0.0.1:0",
            "--ctx",
            "laver3",
            "--timeout",
            "10",
        ])
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    let mut err = std::io::BufReader::new(server.stderr.take().unwrap());
    let mut line = String::new();
    std::io::BufRead::read_line(&mut err, &mut line).unwrap();
    let addr = line.trim().strip_prefix("listening on ").unwrap().to_string();
    let client = ldkep(&[
        "kep",
        "connect",
        "--connect",
        &addr,
        "--ctx",
        "s5-conj",
        "--timeout",
        "10",
    ]);
    assert_ne!(code(&client), 0);
    assert!(String::from_utf8_lossy(&client.stderr).contains("context mismatch"));
    assert!(!server.wait().unwrap().success());
}
