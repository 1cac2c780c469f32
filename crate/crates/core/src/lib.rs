//! A retrieval-based FAQ chatbot.
//!
//! Questions are answered from a small knowledge base of question/answer rows
//! tagged with keywords. See the guide in `book/` for a walk through the
//! matching algorithm, the input gates and the HTTP API.

pub mod auth;
pub mod config;
pub mod engine;
pub mod evalkit;
pub mod http;
pub mod linkfinder;
pub mod matcher;
pub mod sanitize;
pub mod sentence_gate;
pub mod spellcheck;
pub mod store;

pub use config::Config;
pub use engine::{ChatReply, ChatStatus, Engine, EngineError};
pub use store::Store;

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/matching.md")]
    mod matching {}
    #[doc = include_str!("../../../book/src/jaro-winkler.md")]
    mod jaro_winkler {}
    #[doc = include_str!("../../../book/src/gates.md")]
    mod gates {}
    #[doc = include_str!("../../../book/src/links.md")]
    mod links {}
    #[doc = include_str!("../../../book/src/storage.md")]
    mod storage {}
    #[doc = include_str!("../../../book/src/api.md")]
    mod api {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
