use std::path::Path;

use faqbot::engine::ChatStatus;
use faqbot::store::LogEntry;
use faqbot::{Config, Engine, Store};
use faqbot_cli::repl;

fn engine() -> (tempfile::TempDir, Engine) {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let dir = tempfile::TempDir::new().unwrap();
    let config: Config = serde_json::from_value(serde_json::json!({
        "data_dir": dir.path(),
        "dictionary_path": data.join("dictionary.txt"),
        "lexicon_path": data.join("lexicon.tsv"),
        "link_corpus_path": data.join("links.jsonl"),
    }))
    .unwrap();
    Store::open(dir.path())
        .unwrap()
        .seed(data.join("info.seed.jsonl"))
        .unwrap();
    let engine = Engine::load(&config).unwrap();
    (dir, engine)
}

fn transcript(engine: &Engine, input: &str) -> String {
    let mut out = Vec::new();
    repl::run(engine, input.as_bytes(), &mut out).unwrap();
    String::from_utf8(out).unwrap()
}

#[test]
fn greets_and_quits() {
    let (_d, e) = engine();
    assert_eq!(
        transcript(&e, ":quit\n"),
        "Chat Bot: Hi, How can I help you?\nUser: "
    );
    assert_eq!(
        transcript(&e, ""),
        "Chat Bot: Hi, How can I help you?\nUser: \n"
    );
}

#[test]
fn unsatisfied_logs_once_and_prints_link() {
    let (_d, e) = engine();
    let t = transcript(&e, "Do i need a visa?\nmaybe\nn\n");
    assert_eq!(t.matches(repl::FOLLOW_UP).count(), 2, "{t}");
    assert!(
        t.contains("This page may help: http://www.example.ac.uk/admissions/visas"),
        "{t}"
    );
    let logs = e.store().list::<LogEntry>();
    assert_eq!(logs.len(), 1);
    assert_eq!(logs[0].question, "Do i need a visa?");
    assert_eq!(
        Some(logs[0].answer.clone()),
        e.handle_chat("Do i need a visa?").unwrap().answer
    );
}

#[test]
fn gate_replies_skip_the_follow_up() {
    let (_d, e) = engine();
    let t = transcript(&e, "Do I need a vsia?\nYes and yes not yes\n");
    assert!(!t.contains(repl::FOLLOW_UP), "{t}");
    assert!(e.store().list::<LogEntry>().is_empty());
}

#[test]
fn render_matches_reply() {
    let (_d, e) = engine();
    let reply = e.handle_chat("How can I apply?").unwrap();
    assert_eq!(reply.status, ChatStatus::Answer);
    assert_eq!(repl::render(&reply), vec![reply.answer.clone().unwrap()]);
    let reply = e.handle_chat("Is the libary open?").unwrap();
    let lines = repl::render(&reply);
    assert_eq!(lines.len(), 1);
    assert!(
        lines[0].contains("\"libary\"") && lines[0].contains("library"),
        "{lines:?}"
    );
}
