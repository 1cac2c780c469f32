//! The chat pipeline shared by the HTTP service and the terminal REPL.
//!
//! A question is cleaned, spell checked, passed through the sentence gate and
//! only then matched. Each gate stops the pipeline on failure, so a rejected
//! question never reaches the matcher or the store.

use std::path::PathBuf;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::config::{Config, ConfigError};
use crate::linkfinder::{self, IndexError, LinkIndex};
use crate::matcher::{self, MatchError, Outcome, SimilarityParams};
use crate::sanitize::sanitize;
use crate::sentence_gate::{self, GateReport, LexiconError, PosLexicon};
use crate::spellcheck::{self, Dictionary, DictionaryError, SpellingIssue};
use crate::store::{InfoEntry, NewLog, Store, StoreError};

pub const MAX_QUESTION_CHARS: usize = 1000;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("question is {0} characters long, at most {MAX_QUESTION_CHARS} allowed")]
    QuestionTooLong(usize),
    #[error("question must not be empty")]
    EmptyQuestion,
    #[error("the knowledge base is empty")]
    NotReady,
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Dictionary(#[from] DictionaryError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Match(#[from] MatchError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChatStatus {
    Answer,
    NoAnswer,
    Spelling,
    InvalidSentence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChatReply {
    pub status: ChatStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub answer: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub issues: Option<Vec<SpellingIssue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gate: Option<GateReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnsatisfiedReply {
    #[serde(skip)]
    pub log_id: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub link: Option<String>,
}

pub struct Engine {
    store: Arc<Store>,
    dictionary: Dictionary,
    lexicon: PosLexicon,
    links: LinkIndex,
    params: SimilarityParams,
    no_answer_text: String,
}

impl std::fmt::Debug for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Engine")
            .field("store", &self.store.dir())
            .field("dictionary_words", &self.dictionary.len())
            .field("lexicon_entries", &self.lexicon.len())
            .field("link_docs", &self.links.docs().len())
            .field("params", &self.params)
            .finish()
    }
}

impl Engine {
    pub fn new(
        store: Arc<Store>,
        dictionary: Dictionary,
        lexicon: PosLexicon,
        links: LinkIndex,
        params: SimilarityParams,
        no_answer_text: impl Into<String>,
    ) -> Result<Self, EngineError> {
        params.validate()?;
        Ok(Self {
            store,
            dictionary,
            lexicon,
            links,
            params,
            no_answer_text: no_answer_text.into(),
        })
    }

    /// Opens the store and loads every data file named in `config`.
    pub fn load(config: &Config) -> Result<Self, EngineError> {
        config.check_files()?;
        let store = Arc::new(Store::open(&config.data_dir)?);
        Self::with_store(config, store)
    }

    pub fn with_store(config: &Config, store: Arc<Store>) -> Result<Self, EngineError> {
        let dictionary = spellcheck::load_dictionary(&config.dictionary_path)?;
        let lexicon = sentence_gate::load_lexicon(&config.lexicon_path)?;
        let links = linkfinder::build_index(linkfinder::load_corpus(&config.link_corpus_path)?)?;
        let params = SimilarityParams::with_threshold(config.no_answer_threshold)?;
        Self::new(
            store,
            dictionary,
            lexicon,
            links,
            params,
            config.no_answer_text.clone(),
        )
    }

    pub fn store(&self) -> &Arc<Store> {
        &self.store
    }

    pub fn params(&self) -> &SimilarityParams {
        &self.params
    }

    pub fn links(&self) -> &LinkIndex {
        &self.links
    }

    fn clean_question(question: &str) -> Result<String, EngineError> {
        let len = question.chars().count();
        if len > MAX_QUESTION_CHARS {
            return Err(EngineError::QuestionTooLong(len));
        }
        Ok(sanitize(question))
    }

    /// Runs one question through the full pipeline.
    pub fn handle_chat(&self, question: &str) -> Result<ChatReply, EngineError> {
        let question = Self::clean_question(question)?;

        let issues = spellcheck::check(&question, &self.dictionary);
        if !issues.is_empty() {
            return Ok(ChatReply {
                status: ChatStatus::Spelling,
                answer: None,
                issues: Some(issues),
                gate: None,
            });
        }

        let gate = sentence_gate::validate(&question, &self.lexicon);
        if !gate.valid {
            return Ok(ChatReply {
                status: ChatStatus::InvalidSentence,
                answer: None,
                issues: None,
                gate: Some(gate),
            });
        }

        let entries: Vec<InfoEntry> = self.store.list();
        if entries.is_empty() {
            return Err(EngineError::NotReady);
        }
        let result = matcher::respond(&question, &entries, &self.params)?;
        Ok(match result.outcome {
            Outcome::Answer => ChatReply {
                status: ChatStatus::Answer,
                answer: result.answer,
                issues: None,
                gate: None,
            },
            Outcome::NoAnswer => ChatReply {
                status: ChatStatus::NoAnswer,
                answer: Some(self.no_answer_text.clone()),
                issues: None,
                gate: None,
            },
        })
    }

    /// Logs an exchange the user was unhappy with and looks up a fallback link.
    pub fn handle_unsatisfied(
        &self,
        question: &str,
        answer: &str,
    ) -> Result<UnsatisfiedReply, EngineError> {
        let question = Self::clean_question(question)?;
        if question.trim().is_empty() {
            return Err(EngineError::EmptyQuestion);
        }
        let log_id = self.store.append(NewLog {
            question: question.clone(),
            answer: sanitize(answer),
        })?;
        let link = self
            .links
            .search(&question, 1)
            .into_iter()
            .next()
            .map(|l| l.url);
        Ok(UnsatisfiedReply { log_id, link })
    }
}

/// Paths of the data files shipped with the repository, for tests and examples.
pub fn shipped_data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}
