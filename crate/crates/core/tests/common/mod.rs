#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;
use std::sync::Arc;

use faqbot::engine::shipped_data_dir;
use faqbot::{Config, Engine, Store};
use tempfile::TempDir;

pub fn shipped_config(data_dir: PathBuf) -> Config {
    let shipped = shipped_data_dir();
    Config {
        data_dir,
        dictionary_path: shipped.join("dictionary.txt"),
        lexicon_path: shipped.join("lexicon.tsv"),
        link_corpus_path: shipped.join("links.jsonl"),
        bind_address: std::net::Ipv4Addr::LOCALHOST.into(),
        port: 0,
        no_answer_threshold: 0.55,
        session_ttl_hours: 8,
        no_answer_text: faqbot::config::DEFAULT_NO_ANSWER_TEXT.into(),
        admin_username: "admin".into(),
        static_dir: None,
    }
}

/// An engine over the shipped word lists and corpus, with a fresh store
/// seeded from the shipped knowledge base.
pub fn seeded_engine() -> (TempDir, Arc<Engine>) {
    let dir = TempDir::new().unwrap();
    let config = shipped_config(dir.path().to_owned());
    let store = Arc::new(Store::open(&config.data_dir).unwrap());
    store
        .seed(shipped_data_dir().join("info.seed.jsonl"))
        .unwrap();
    let engine = Engine::with_store(&config, store).unwrap();
    (dir, Arc::new(engine))
}

pub mod http {
    use std::sync::atomic::{AtomicU64, Ordering};
    use std::sync::Arc;

    use axum::body::Body;
    use axum::http::{Method, Request, StatusCode};
    use axum::Router;
    use faqbot::http::{router, AppState};
    use faqbot::Engine;
    use http_body_util::BodyExt;
    use serde_json::Value;
    use tower::ServiceExt;

    pub const ADMIN_PASSWORD: &str = "correct horse battery";

    pub struct Api {
        pub app: Router,
        pub now: Arc<AtomicU64>,
        pub engine: Arc<Engine>,
        /// Raw bodies of every response seen, for markup scans.
        pub bodies: std::sync::Mutex<Vec<(String, String)>>,
    }

    impl Api {
        pub fn new(engine: Arc<Engine>) -> Self {
            faqbot::auth::bootstrap_admin(engine.store(), "adm", Some(ADMIN_PASSWORD)).unwrap();
            let now = Arc::new(AtomicU64::new(1_000_000));
            let clock_now = now.clone();
            let state = AppState::new(engine.clone(), 8)
                .with_clock(Arc::new(move || clock_now.load(Ordering::SeqCst)));
            Self {
                app: router(state),
                now,
                engine,
                bodies: Default::default(),
            }
        }

        pub fn advance(&self, secs: u64) {
            self.now.fetch_add(secs, Ordering::SeqCst);
        }

        pub async fn raw(
            &self,
            method: Method,
            uri: &str,
            token: Option<&str>,
            body: Option<String>,
        ) -> (StatusCode, String) {
            let mut req = Request::builder().method(method).uri(uri);
            if let Some(t) = token {
                req = req.header("authorization", format!("Bearer {t}"));
            }
            let req = match body {
                Some(b) => req
                    .header("content-type", "application/json")
                    .body(Body::from(b)),
                None => req.body(Body::empty()),
            }
            .unwrap();
            let res = self.app.clone().oneshot(req).await.unwrap();
            let status = res.status();
            let bytes = res.into_body().collect().await.unwrap().to_bytes();
            let text = String::from_utf8(bytes.to_vec()).unwrap();
            self.bodies
                .lock()
                .unwrap()
                .push((uri.to_owned(), text.clone()));
            (status, text)
        }

        pub async fn call(
            &self,
            method: Method,
            uri: &str,
            token: Option<&str>,
            body: Option<Value>,
        ) -> (StatusCode, Value) {
            let (status, text) = self
                .raw(method, uri, token, body.map(|b| b.to_string()))
                .await;
            let value = if text.is_empty() {
                Value::Null
            } else {
                serde_json::from_str(&text).unwrap()
            };
            (status, value)
        }

        pub async fn login(&self) -> String {
            let (status, v) = self
                .call(
                    Method::POST,
                    "/api/login",
                    None,
                    Some(serde_json::json!({"username": "adm", "password": ADMIN_PASSWORD})),
                )
                .await;
            assert_eq!(status, StatusCode::OK, "{v}");
            v["token"].as_str().unwrap().to_owned()
        }
    }
}
