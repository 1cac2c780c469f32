use std::fmt;

use serde::{Deserialize, Serialize};

use crate::matcher::normalize;

pub const MAX_KEYWORDS: usize = 5;
pub const MAX_FEEDBACK_CHARS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RecordKind {
    Info,
    Log,
    Feedback,
    User,
}

impl RecordKind {
    pub fn file_name(self) -> &'static str {
        match self {
            RecordKind::Info => "info.jsonl",
            RecordKind::Log => "logs.jsonl",
            RecordKind::Feedback => "feedback.jsonl",
            RecordKind::User => "users.jsonl",
        }
    }
}

impl fmt::Display for RecordKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RecordKind::Info => "info",
            RecordKind::Log => "log",
            RecordKind::Feedback => "feedback",
            RecordKind::User => "user",
        })
    }
}

/// One knowledge-base row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfoEntry {
    pub id: u64,
    pub question: String,
    pub answer: String,
    pub keywords: Vec<String>,
}

/// Human judgement attached to a logged exchange.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Relevant,
    Irrelevant,
    NoResponse,
    PoorResponse,
}

impl Category {
    pub const ALL: [Category; 4] = [
        Category::Relevant,
        Category::Irrelevant,
        Category::NoResponse,
        Category::PoorResponse,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Relevant => "relevant",
            Category::Irrelevant => "irrelevant",
            Category::NoResponse => "no_response",
            Category::PoorResponse => "poor_response",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown category {s:?}; expected one of relevant, irrelevant, no_response, poor_response"))
    }
}

/// A question/answer pair the user was not satisfied with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogEntry {
    pub id: u64,
    pub question: String,
    pub answer: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Category>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedbackEntry {
    pub id: u64,
    pub mark: u8,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Admin,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserAccount {
    pub username: String,
    pub password_hash: String,
    pub salt: String,
    pub role: Role,
}

/// Fields of an info row before it has an id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewInfo {
    pub question: String,
    pub answer: String,
    #[serde(default)]
    pub keywords: Vec<String>,
}

impl NewInfo {
    pub fn new(question: impl Into<String>, answer: impl Into<String>, keywords: &[&str]) -> Self {
        Self {
            question: question.into(),
            answer: answer.into(),
            keywords: keywords.iter().map(|k| k.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewLog {
    pub question: String,
    pub answer: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewFeedback {
    pub mark: u8,
    #[serde(default)]
    pub message: String,
}

/// Partial replacement for an info row.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfoUpdate {
    pub question: Option<String>,
    pub answer: Option<String>,
    pub keywords: Option<Vec<String>>,
}

/// Lowercases each keyword and checks it is exactly one token.
pub fn canonical_keywords(keywords: &[String]) -> Result<Vec<String>, String> {
    if keywords.len() > MAX_KEYWORDS {
        return Err(format!(
            "{} keywords given, at most {MAX_KEYWORDS} allowed",
            keywords.len()
        ));
    }
    keywords
        .iter()
        .map(|k| {
            let n = normalize(k);
            match n.tokens.as_slice() {
                [single] if !k.trim().contains(char::is_whitespace) => Ok(single.clone()),
                _ => Err(format!("keyword {k:?} is not a single word")),
            }
        })
        .collect()
}

pub trait Record: Clone + Serialize + serde::de::DeserializeOwned + Send + Sync + 'static {
    const KIND: RecordKind;

    fn id(&self) -> u64;
    fn validate(&self) -> Result<(), String>;
}

/// A record body awaiting an id.
pub trait Draft {
    type Record: Record;

    fn into_record(self, id: u64) -> Result<Self::Record, String>;
}

fn nonempty(field: &str, value: &str) -> Result<(), String> {
    if value.trim().is_empty() {
        Err(format!("{field} must not be empty"))
    } else {
        Ok(())
    }
}

impl Record for InfoEntry {
    const KIND: RecordKind = RecordKind::Info;

    fn id(&self) -> u64 {
        self.id
    }

    fn validate(&self) -> Result<(), String> {
        if self.id == 0 {
            return Err("id must be positive".into());
        }
        nonempty("question", &self.question)?;
        nonempty("answer", &self.answer)?;
        if canonical_keywords(&self.keywords)? != self.keywords {
            return Err("keywords must be lowercase single words".into());
        }
        Ok(())
    }
}

impl Record for LogEntry {
    const KIND: RecordKind = RecordKind::Log;

    fn id(&self) -> u64 {
        self.id
    }

    fn validate(&self) -> Result<(), String> {
        if self.id == 0 {
            return Err("id must be positive".into());
        }
        nonempty("question", &self.question)
    }
}

impl Record for FeedbackEntry {
    const KIND: RecordKind = RecordKind::Feedback;

    fn id(&self) -> u64 {
        self.id
    }

    fn validate(&self) -> Result<(), String> {
        if self.id == 0 {
            return Err("id must be positive".into());
        }
        if !(1..=5).contains(&self.mark) {
            return Err(format!("mark {} is outside 1..=5", self.mark));
        }
        let len = self.message.chars().count();
        if len > MAX_FEEDBACK_CHARS {
            return Err(format!(
                "message has {len} characters, at most {MAX_FEEDBACK_CHARS} allowed"
            ));
        }
        Ok(())
    }
}

impl UserAccount {
    pub fn validate(&self) -> Result<(), String> {
        if self.username.is_empty() || self.username.contains(char::is_whitespace) {
            return Err("username must be a nonempty word".into());
        }
        let is_hex = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_hexdigit());
        if !is_hex(&self.password_hash) {
            return Err("password_hash must be hex".into());
        }
        if !is_hex(&self.salt) {
            return Err("salt must be hex".into());
        }
        Ok(())
    }
}

impl Draft for NewInfo {
    type Record = InfoEntry;

    fn into_record(self, id: u64) -> Result<InfoEntry, String> {
        let entry = InfoEntry {
            id,
            question: self.question.trim().to_owned(),
            answer: self.answer.trim().to_owned(),
            keywords: canonical_keywords(&self.keywords)?,
        };
        entry.validate()?;
        Ok(entry)
    }
}

impl Draft for NewLog {
    type Record = LogEntry;

    fn into_record(self, id: u64) -> Result<LogEntry, String> {
        let entry = LogEntry {
            id,
            question: self.question,
            answer: self.answer,
            label: None,
        };
        entry.validate()?;
        Ok(entry)
    }
}

impl Draft for NewFeedback {
    type Record = FeedbackEntry;

    fn into_record(self, id: u64) -> Result<FeedbackEntry, String> {
        let entry = FeedbackEntry {
            id,
            mark: self.mark,
            message: self.message,
        };
        entry.validate()?;
        Ok(entry)
    }
}
