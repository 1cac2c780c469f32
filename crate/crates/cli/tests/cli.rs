use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpStream;
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Output, Stdio};

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_faqbot");
const ENTRY_QUESTION: &str = "What are the entry requirements for the computer security msc?";
const ENTRY_ANSWER: &str = "To enter the programme, you need to have at least an Upper Second Class (2.1) degree or an international equivalent in Computer Science or a closely related discipline and a solid foundation in programming.";

fn data() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// A config over the shipped word lists with state in a fresh directory.
fn setup(seeded: bool) -> (TempDir, PathBuf) {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("config.json");
    let body = serde_json::json!({
        "data_dir": dir.path().join("state"),
        "dictionary_path": data().join("dictionary.txt"),
        "lexicon_path": data().join("lexicon.tsv"),
        "link_corpus_path": data().join("links.jsonl"),
        "port": 0,
    });
    std::fs::write(&config, body.to_string()).unwrap();
    if seeded {
        let out = faqbot(
            &[
                "seed",
                "--config",
                config.to_str().unwrap(),
                "--file",
                data().join("info.seed.jsonl").to_str().unwrap(),
            ],
            "",
        );
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    (dir, config)
}

fn faqbot(args: &[&str], stdin: &str) -> Output {
    faqbot_env(args, stdin, &[])
}

fn faqbot_env(args: &[&str], stdin: &str, env: &[(&str, &str)]) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .env_remove("FAQBOT_ADMIN_PASSWORD")
        .envs(env.iter().copied())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn bot_lines(transcript: &str) -> Vec<String> {
    transcript
        .split("Chat Bot: ")
        .skip(1)
        .map(|s| s.lines().next().unwrap_or("").to_owned())
        .collect()
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["frobnicate"],
        vec!["chat"],
        vec!["seed", "--config", "c.json"],
        vec![
            "label",
            "--config",
            "c.json",
            "--id",
            "1",
            "--category",
            "great",
        ],
        vec![
            "label",
            "--config",
            "c.json",
            "--id",
            "x",
            "--category",
            "relevant",
        ],
        vec!["chat", "--config", "c.json", "--verbose"],
    ] {
        let out = faqbot(&args, "");
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
        assert!(stderr(&out).starts_with("error:"), "{args:?}");
    }
    assert_eq!(faqbot(&["--help"], "").status.code(), Some(0));
}

#[test]
fn config_failures_exit_1_naming_the_problem() {
    let (dir, config) = setup(false);
    let out = faqbot(
        &[
            "chat",
            "--config",
            dir.path().join("absent.json").to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("absent.json"));

    let mut body: Value = serde_json::from_str(&std::fs::read_to_string(&config).unwrap()).unwrap();
    body["dictionary_path"] = "missing-words.txt".into();
    std::fs::write(&config, body.to_string()).unwrap();
    let out = faqbot(&["serve", "--config", config.to_str().unwrap()], "");
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("dictionary_path"), "{}", stderr(&out));
    assert!(stderr(&out).contains("missing-words.txt"));
}

#[test]
fn chat_on_empty_store_fails() {
    let (_dir, config) = setup(false);
    let out = faqbot(&["chat", "--config", config.to_str().unwrap()], "hello\n");
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("seed"));
}

#[test]
fn chat_conversation() {
    let (_dir, config) = setup(true);
    let c = config.to_str().unwrap();
    let script =
        format!("{ENTRY_QUESTION}\nn\nDo I need a vsia?\nYes and yes not yes\n:quit\nnever read\n");
    let out = faqbot(&["chat", "--config", c], &script);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("Chat Bot: Hi, How can I help you?\n"));
    let lines = bot_lines(&text);
    assert_eq!(lines[1], ENTRY_ANSWER);
    assert!(text.contains("Was your question answered? (y/n)"));
    assert!(
        lines[2].contains("http://www.example.ac.uk/admissions/"),
        "{}",
        lines[2]
    );
    assert!(
        lines[3].contains("\"vsia\"") && lines[3].contains("visa"),
        "{}",
        lines[3]
    );
    assert!(lines[4].contains("noun and a verb"));
    assert_eq!(lines.len(), 5);

    let out = faqbot(&["eval", "--config", c], "");
    assert!(
        stdout(&out).contains("unlabeled             1"),
        "{}",
        stdout(&out)
    );
    let out = faqbot(
        &[
            "label",
            "--config",
            c,
            "--id",
            "1",
            "--category",
            "poor_response",
        ],
        "",
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains(ENTRY_QUESTION));
    let out = faqbot(&["eval", "--config", c], "");
    assert!(
        stdout(&out).contains("poor_response         1   100.00%"),
        "{}",
        stdout(&out)
    );
    let out = faqbot(
        &[
            "label",
            "--config",
            c,
            "--id",
            "9",
            "--category",
            "relevant",
        ],
        "",
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn satisfied_answer_leaves_no_log() {
    let (dir, config) = setup(true);
    let out = faqbot(
        &["chat", "--config", config.to_str().unwrap()],
        &format!("{ENTRY_QUESTION}\ny\n"),
    );
    assert_eq!(out.status.code(), Some(0));
    let logs = std::fs::read_to_string(dir.path().join("state/logs.jsonl")).unwrap_or_default();
    assert!(logs.trim().is_empty(), "{logs}");
}

#[test]
fn adduser_rules() {
    let (dir, config) = setup(false);
    let c = config.to_str().unwrap();
    let out = faqbot(
        &["adduser", "--config", c, "--username", "alice"],
        "s3cret-pass\n",
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let out = faqbot(
        &["adduser", "--config", c, "--username", "alice"],
        "other\n",
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("alice"));
    let out = faqbot(&["adduser", "--config", c, "--username", "bob"], "\n");
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("empty"));
    let out = faqbot_env(
        &["adduser", "--config", c, "--username", "carol"],
        "",
        &[("FAQBOT_ADMIN_PASSWORD", "from-env")],
    );
    assert!(out.status.success());

    let users = std::fs::read_to_string(dir.path().join("state/users.jsonl")).unwrap();
    assert_eq!(users.lines().count(), 2);
    assert!(!users.contains("s3cret-pass") && !users.contains("from-env"));
}

struct Server(Child);

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.0.kill();
    }
}

/// Sends one request and returns (status line, body).
fn request(addr: &str, method: &str, path: &str, body: &str) -> (String, String) {
    let mut s = TcpStream::connect(addr).unwrap();
    write!(
        s,
        "{method} {path} HTTP/1.1\r\nHost: {addr}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    )
    .unwrap();
    let mut response = String::new();
    s.read_to_string(&mut response).unwrap();
    let (head, payload) = response.split_once("\r\n\r\n").unwrap();
    (head.lines().next().unwrap().to_owned(), payload.to_owned())
}

fn post(addr: &str, path: &str, body: &Value) -> Value {
    let (_, payload) = request(addr, "POST", path, &body.to_string());
    serde_json::from_str(&payload).unwrap()
}

fn start(config: &Path) -> (Server, String) {
    let mut child = Command::new(BIN)
        .args(["serve", "--config", config.to_str().unwrap()])
        .env("FAQBOT_ADMIN_PASSWORD", "bootstrap-pw")
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let mut first = String::new();
    BufReader::new(child.stdout.take().unwrap())
        .read_line(&mut first)
        .unwrap();
    let addr = first
        .trim()
        .strip_prefix("listening on http://")
        .expect(&first)
        .to_owned();
    (Server(child), addr)
}

#[test]
fn chat_and_serve_agree_and_serve_stops_cleanly() {
    let (dir, config) = setup(true);
    let c = config.to_str().unwrap();
    let questions = [
        ENTRY_QUESTION,
        "How can i find out about scholarships?",
        "Can I pay using visa?",
        "Have you received the pack sent?",
        "How can I apply?",
        "what is the meaning of life?",
    ];

    let mut script = String::new();
    for q in questions {
        script.push_str(q);
        script.push_str("\ny\n");
    }
    let out = faqbot(&["chat", "--config", c], &script);
    let from_repl: Vec<String> = bot_lines(&stdout(&out)).into_iter().skip(1).collect();
    assert_eq!(from_repl.len(), questions.len());

    let mut child = Command::new(BIN)
        .args(["serve", "--config", c])
        .env("FAQBOT_ADMIN_PASSWORD", "bootstrap-pw")
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let mut first = String::new();
    BufReader::new(child.stdout.take().unwrap())
        .read_line(&mut first)
        .unwrap();
    let mut server = Server(child);
    let addr = first
        .trim()
        .strip_prefix("listening on http://")
        .expect(&first)
        .to_owned();

    for (q, repl_answer) in questions.iter().zip(&from_repl) {
        let v = post(&addr, "/api/chat", &serde_json::json!({ "question": q }));
        assert_eq!(v["answer"].as_str().unwrap(), repl_answer, "{q}");
    }
    let login = post(
        &addr,
        "/api/login",
        &serde_json::json!({"username": "admin", "password": "bootstrap-pw"}),
    );
    assert!(login["token"].is_string(), "{login}");

    let pid = server.0.id().to_string();
    assert!(Command::new("kill")
        .args(["-INT", &pid])
        .status()
        .unwrap()
        .success());
    let status = server.0.wait().unwrap();
    assert_eq!(status.code(), Some(0));
    assert!(dir.path().join("state/users.jsonl").is_file());
}

#[test]
fn static_client_beside_the_api() {
    let (dir, config) = setup(true);
    let site = dir.path().join("site");
    std::fs::create_dir(&site).unwrap();
    std::fs::write(site.join("index.html"), "<h1>faqbot</h1>").unwrap();
    let mut body: Value = serde_json::from_str(&std::fs::read_to_string(&config).unwrap()).unwrap();
    body["static_dir"] = site.to_str().unwrap().into();
    std::fs::write(&config, body.to_string()).unwrap();

    let (_server, addr) = start(&config);
    let (status, page) = request(&addr, "GET", "/", "");
    assert!(status.contains("200"), "{status}");
    assert_eq!(page, "<h1>faqbot</h1>");
    let (status, payload) = request(&addr, "GET", "/api/nothing", "");
    assert!(status.contains("404"), "{status}");
    let v: Value = serde_json::from_str(&payload).unwrap();
    assert_eq!(v["error"], "not_found");
}
