//! Service configuration file.

use std::fs;
use std::net::{IpAddr, Ipv4Addr};
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

pub const DEFAULT_NO_ANSWER_TEXT: &str = "I am sorry, I do not know the answer to that yet.";
/// Environment variable holding the bootstrap administrator password.
pub const ADMIN_PASSWORD_ENV: &str = "FAQBOT_ADMIN_PASSWORD";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config {}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
    #[error("config field {field}: {message}")]
    Field {
        field: &'static str,
        message: String,
    },
}

fn default_bind() -> IpAddr {
    IpAddr::V4(Ipv4Addr::LOCALHOST)
}
fn default_port() -> u16 {
    8080
}
fn default_threshold() -> f64 {
    0.55
}
fn default_ttl() -> u64 {
    8
}
fn default_no_answer_text() -> String {
    DEFAULT_NO_ANSWER_TEXT.to_owned()
}
fn default_admin() -> String {
    "admin".to_owned()
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub data_dir: PathBuf,
    pub dictionary_path: PathBuf,
    pub lexicon_path: PathBuf,
    pub link_corpus_path: PathBuf,
    #[serde(default = "default_bind")]
    pub bind_address: IpAddr,
    #[serde(default = "default_port")]
    pub port: u16,
    #[serde(default = "default_threshold")]
    pub no_answer_threshold: f64,
    #[serde(default = "default_ttl")]
    pub session_ttl_hours: u64,
    #[serde(default = "default_no_answer_text")]
    pub no_answer_text: String,
    /// Account created on first start when the store has no users.
    #[serde(default = "default_admin")]
    pub admin_username: String,
    /// Directory of static web client files, served at `/`.
    #[serde(default)]
    pub static_dir: Option<PathBuf>,
}

impl Config {
    /// Parses the config file. Relative paths resolve against its directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_owned(),
            source,
        })?;
        let mut cfg: Config = serde_json::from_str(&text).map_err(|e| ConfigError::Parse {
            path: path.to_owned(),
            message: e.to_string(),
        })?;
        if let Some(base) = path.parent() {
            cfg.resolve_relative_to(base);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn resolve_relative_to(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.data_dir);
        fix(&mut self.dictionary_path);
        fix(&mut self.lexicon_path);
        fix(&mut self.link_corpus_path);
        if let Some(s) = self.static_dir.as_mut() {
            fix(s);
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(0.0..=1.0).contains(&self.no_answer_threshold) {
            return Err(ConfigError::Field {
                field: "no_answer_threshold",
                message: format!("{} is outside [0, 1]", self.no_answer_threshold),
            });
        }
        if self.session_ttl_hours == 0 {
            return Err(ConfigError::Field {
                field: "session_ttl_hours",
                message: "must be at least 1".into(),
            });
        }
        if self.no_answer_text.trim().is_empty() {
            return Err(ConfigError::Field {
                field: "no_answer_text",
                message: "must not be empty".into(),
            });
        }
        Ok(())
    }

    /// Confirms the data files the engine needs are present.
    pub fn check_files(&self) -> Result<(), ConfigError> {
        for (field, path) in [
            ("dictionary_path", &self.dictionary_path),
            ("lexicon_path", &self.lexicon_path),
            ("link_corpus_path", &self.link_corpus_path),
        ] {
            if !path.is_file() {
                return Err(ConfigError::Field {
                    field,
                    message: format!("file not found: {}", path.display()),
                });
            }
        }
        Ok(())
    }
}
