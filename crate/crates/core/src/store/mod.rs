//! File-backed storage for knowledge-base rows, unsatisfied-answer logs,
//! feedback and administrator accounts.
//!
//! Each record kind lives in its own JSON Lines file inside the data
//! directory. The whole table is held in memory; every mutation rewrites the
//! file through a temporary file and an atomic rename before the in-memory
//! copy changes. Id high-water marks are kept in `ids.json` so an id is never
//! handed out twice, even after the highest row is deleted.

mod records;

use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{RwLock, RwLockReadGuard, RwLockWriteGuard};

use access::{Access as _, NextIds, Tables};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use records::{
    canonical_keywords, Category, Draft, FeedbackEntry, InfoEntry, InfoUpdate, LogEntry,
    NewFeedback, NewInfo, NewLog, Record, RecordKind, Role, UserAccount, MAX_FEEDBACK_CHARS,
    MAX_KEYWORDS,
};

const IDS_FILE: &str = "ids.json";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("invalid {kind} record: {reason}")]
    Validation { kind: RecordKind, reason: String },
    #[error("{kind} {id} not found")]
    NotFound { kind: RecordKind, id: u64 },
    #[error("user {0:?} already exists")]
    DuplicateUser(String),
    #[error("{}:{line}: {reason}", path.display())]
    Corrupt {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("storage I/O failure on {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl StoreError {
    fn io(path: &Path) -> impl FnOnce(io::Error) -> StoreError + '_ {
        move |source| StoreError::Io {
            path: path.to_owned(),
            source,
        }
    }
}

pub type Result<T, E = StoreError> = std::result::Result<T, E>;

mod access {
    use serde::{Deserialize, Serialize};

    use super::{FeedbackEntry, InfoEntry, LogEntry, UserAccount};

    #[derive(Debug, Default, Clone, Serialize, Deserialize)]
    pub struct NextIds {
        #[serde(default)]
        pub info: u64,
        #[serde(default)]
        pub log: u64,
        #[serde(default)]
        pub feedback: u64,
    }

    #[derive(Debug, Default)]
    pub struct Tables {
        pub info: Vec<InfoEntry>,
        pub logs: Vec<LogEntry>,
        pub feedback: Vec<FeedbackEntry>,
        pub users: Vec<UserAccount>,
        pub next: NextIds,
    }

    pub trait Access {
        fn rows(t: &Tables) -> &Vec<Self>
        where
            Self: Sized;
        fn rows_mut(t: &mut Tables) -> &mut Vec<Self>
        where
            Self: Sized;
        fn next_id(ids: &mut NextIds) -> &mut u64;
    }
}

/// A record kind kept in its own table: info, log or feedback.
pub trait Tabled: Record + access::Access {}

macro_rules! tabled {
    ($ty:ty, $field:ident, $next:ident) => {
        impl access::Access for $ty {
            fn rows(t: &Tables) -> &Vec<Self> {
                &t.$field
            }
            fn rows_mut(t: &mut Tables) -> &mut Vec<Self> {
                &mut t.$field
            }
            fn next_id(ids: &mut NextIds) -> &mut u64 {
                &mut ids.$next
            }
        }
        impl Tabled for $ty {}
    };
}

tabled!(InfoEntry, info, info);
tabled!(LogEntry, logs, log);
tabled!(FeedbackEntry, feedback, feedback);

/// Handle to a data directory. Cheap to share behind an `Arc`.
#[derive(Debug)]
pub struct Store {
    dir: PathBuf,
    tables: RwLock<Tables>,
}

impl Store {
    /// Opens (creating if needed) the store in `dir` and validates every row.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_owned();
        fs::create_dir_all(&dir).map_err(StoreError::io(&dir))?;

        let info: Vec<InfoEntry> = load_table(&dir)?;
        let logs: Vec<LogEntry> = load_table(&dir)?;
        let feedback: Vec<FeedbackEntry> = load_table(&dir)?;
        let users = load_users(&dir)?;

        let ids_path = dir.join(IDS_FILE);
        let mut next: NextIds = match fs::read_to_string(&ids_path) {
            Ok(text) => serde_json::from_str(&text).map_err(|e| StoreError::Corrupt {
                path: ids_path.clone(),
                line: e.line(),
                reason: e.to_string(),
            })?,
            Err(e) if e.kind() == io::ErrorKind::NotFound => NextIds::default(),
            Err(e) => {
                return Err(StoreError::Io {
                    path: ids_path,
                    source: e,
                })
            }
        };
        let after = |max: Option<u64>| max.map_or(1, |m| m + 1);
        next.info = next.info.max(after(info.iter().map(|r| r.id).max()));
        next.log = next.log.max(after(logs.iter().map(|r| r.id).max()));
        next.feedback = next
            .feedback
            .max(after(feedback.iter().map(|r| r.id).max()));

        Ok(Self {
            dir,
            tables: RwLock::new(Tables {
                info,
                logs,
                feedback,
                users,
                next,
            }),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn read(&self) -> RwLockReadGuard<'_, Tables> {
        self.tables.read().unwrap_or_else(|e| e.into_inner())
    }

    fn write(&self) -> RwLockWriteGuard<'_, Tables> {
        self.tables.write().unwrap_or_else(|e| e.into_inner())
    }

    /// Validates and persists `draft` under a fresh id.
    pub fn append<D>(&self, draft: D) -> Result<u64>
    where
        D: Draft,
        D::Record: Tabled,
    {
        let mut tables = self.write();
        let mut next = tables.next.clone();
        let id = *D::Record::next_id(&mut next);
        let record = draft
            .into_record(id)
            .map_err(|reason| StoreError::Validation {
                kind: D::Record::KIND,
                reason,
            })?;

        let mut rows = D::Record::rows(&tables).clone();
        rows.push(record);
        *D::Record::next_id(&mut next) = id + 1;
        self.persist(&rows)?;
        self.persist_ids(&next)?;
        *D::Record::rows_mut(&mut tables) = rows;
        tables.next = next;
        Ok(id)
    }

    /// All live rows of one kind, ordered by id.
    pub fn list<R: Tabled>(&self) -> Vec<R> {
        R::rows(&self.read()).clone()
    }

    pub fn get<R: Tabled>(&self, id: u64) -> Option<R> {
        R::rows(&self.read()).iter().find(|r| r.id() == id).cloned()
    }

    /// Applies `edit` to the row with `id`, revalidates and persists it.
    pub fn modify<R: Tabled>(
        &self,
        id: u64,
        edit: impl FnOnce(&mut R) -> Result<(), String>,
    ) -> Result<R> {
        let mut tables = self.write();
        let mut rows = R::rows(&tables).clone();
        let row = rows
            .iter_mut()
            .find(|r| r.id() == id)
            .ok_or(StoreError::NotFound { kind: R::KIND, id })?;
        let invalid = |reason| StoreError::Validation {
            kind: R::KIND,
            reason,
        };
        edit(row).map_err(invalid)?;
        row.validate().map_err(invalid)?;
        let updated = row.clone();
        self.persist(&rows)?;
        *R::rows_mut(&mut tables) = rows;
        Ok(updated)
    }

    pub fn update_info(&self, id: u64, update: InfoUpdate) -> Result<InfoEntry> {
        self.modify::<InfoEntry>(id, |entry| {
            if let Some(q) = update.question {
                entry.question = q.trim().to_owned();
            }
            if let Some(a) = update.answer {
                entry.answer = a.trim().to_owned();
            }
            if let Some(k) = update.keywords {
                entry.keywords = canonical_keywords(&k)?;
            }
            Ok(())
        })
    }

    pub fn set_log_label(&self, id: u64, label: Option<Category>) -> Result<LogEntry> {
        self.modify::<LogEntry>(id, |log| {
            log.label = label;
            Ok(())
        })
    }

    pub fn delete<R: Tabled>(&self, id: u64) -> Result<R> {
        let mut tables = self.write();
        let mut rows = R::rows(&tables).clone();
        let pos = rows
            .iter()
            .position(|r| r.id() == id)
            .ok_or(StoreError::NotFound { kind: R::KIND, id })?;
        let removed = rows.remove(pos);
        self.persist(&rows)?;
        *R::rows_mut(&mut tables) = rows;
        Ok(removed)
    }

    /// Replaces the knowledge base with the rows in a JSON Lines seed file.
    ///
    /// Each line is `{"id"?, "question", "answer", "keywords"?}`. Lines without
    /// an id are numbered after the largest id seen so far.
    pub fn seed(&self, path: impl AsRef<Path>) -> Result<usize> {
        #[derive(Deserialize)]
        struct SeedRow {
            id: Option<u64>,
            #[serde(flatten)]
            info: NewInfo,
        }

        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(StoreError::io(path))?;
        let corrupt = |line: usize, reason: String| StoreError::Corrupt {
            path: path.to_owned(),
            line,
            reason,
        };

        let mut pending = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row: SeedRow =
                serde_json::from_str(line).map_err(|e| corrupt(idx + 1, e.to_string()))?;
            pending.push((idx + 1, row));
        }

        let mut seen = HashSet::new();
        let mut max_id = pending.iter().filter_map(|(_, r)| r.id).max().unwrap_or(0);
        let mut rows = Vec::with_capacity(pending.len());
        for (line, row) in pending {
            let id = row.id.unwrap_or_else(|| {
                max_id += 1;
                max_id
            });
            if !seen.insert(id) {
                return Err(corrupt(line, format!("duplicate id {id}")));
            }
            rows.push(
                row.info
                    .into_record(id)
                    .map_err(|reason| corrupt(line, reason))?,
            );
        }
        rows.sort_by_key(|r: &InfoEntry| r.id);

        let mut tables = self.write();
        let mut next = tables.next.clone();
        next.info = next.info.max(max_id + 1);
        self.persist(&rows)?;
        self.persist_ids(&next)?;
        let count = rows.len();
        tables.info = rows;
        tables.next = next;
        Ok(count)
    }

    pub fn users(&self) -> Vec<UserAccount> {
        self.read().users.clone()
    }

    pub fn find_user(&self, username: &str) -> Option<UserAccount> {
        self.read()
            .users
            .iter()
            .find(|u| u.username == username)
            .cloned()
    }

    pub fn add_user(&self, account: UserAccount) -> Result<()> {
        account
            .validate()
            .map_err(|reason| StoreError::Validation {
                kind: RecordKind::User,
                reason,
            })?;
        let mut tables = self.write();
        if tables.users.iter().any(|u| u.username == account.username) {
            return Err(StoreError::DuplicateUser(account.username));
        }
        let mut users = tables.users.clone();
        users.push(account);
        write_lines(&self.dir.join(RecordKind::User.file_name()), &users)?;
        tables.users = users;
        Ok(())
    }

    /// Forces every table back to disk.
    pub fn flush(&self) -> Result<()> {
        let tables = self.write();
        self.persist(&tables.info)?;
        self.persist(&tables.logs)?;
        self.persist(&tables.feedback)?;
        write_lines(&self.dir.join(RecordKind::User.file_name()), &tables.users)?;
        self.persist_ids(&tables.next)
    }

    fn persist<R: Record>(&self, rows: &[R]) -> Result<()> {
        write_lines(&self.dir.join(R::KIND.file_name()), rows)
    }

    fn persist_ids(&self, next: &NextIds) -> Result<()> {
        let path = self.dir.join(IDS_FILE);
        let json = serde_json::to_string(next).expect("ids serialize");
        write_atomic(&path, json.as_bytes())
    }
}

fn load_table<R: Record>(dir: &Path) -> Result<Vec<R>> {
    let path = dir.join(R::KIND.file_name());
    let rows: Vec<(usize, R)> = read_lines(&path)?;
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(rows.len());
    for (line, row) in rows {
        let corrupt = |reason| StoreError::Corrupt {
            path: path.clone(),
            line,
            reason,
        };
        row.validate().map_err(corrupt)?;
        if !seen.insert(row.id()) {
            return Err(corrupt(format!("duplicate id {}", row.id())));
        }
        out.push(row);
    }
    out.sort_by_key(Record::id);
    Ok(out)
}

fn load_users(dir: &Path) -> Result<Vec<UserAccount>> {
    let path = dir.join(RecordKind::User.file_name());
    let rows: Vec<(usize, UserAccount)> = read_lines(&path)?;
    let mut names = HashSet::new();
    let mut out = Vec::with_capacity(rows.len());
    for (line, user) in rows {
        let corrupt = |reason| StoreError::Corrupt {
            path: path.clone(),
            line,
            reason,
        };
        user.validate().map_err(corrupt)?;
        if !names.insert(user.username.clone()) {
            return Err(corrupt(format!("duplicate username {:?}", user.username)));
        }
        out.push(user);
    }
    Ok(out)
}

fn read_lines<T: DeserializeOwned>(path: &Path) -> Result<Vec<(usize, T)>> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => {
            return Err(StoreError::Io {
                path: path.to_owned(),
                source: e,
            })
        }
    };
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(StoreError::io(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let value = serde_json::from_str(&line).map_err(|e| StoreError::Corrupt {
            path: path.to_owned(),
            line: idx + 1,
            reason: e.to_string(),
        })?;
        out.push((idx + 1, value));
    }
    Ok(out)
}

fn write_lines<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut buf = Vec::new();
    for row in rows {
        serde_json::to_writer(&mut buf, row).expect("records serialize");
        buf.push(b'\n');
    }
    write_atomic(path, &buf)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let mut file = File::create(&tmp).map_err(StoreError::io(&tmp))?;
    file.write_all(bytes).map_err(StoreError::io(&tmp))?;
    file.sync_all().map_err(StoreError::io(&tmp))?;
    drop(file);
    fs::rename(&tmp, path).map_err(StoreError::io(path))?;
    if let Some(parent) = path.parent() {
        // Directory fsync is not supported everywhere; the rename already happened.
        let _ = File::open(parent).and_then(|d| d.sync_all());
    }
    Ok(())
}
