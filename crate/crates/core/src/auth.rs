//! Administrator credentials and bearer sessions.

use std::collections::HashMap;
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::Sha256;
use subtle::ConstantTimeEq;
use thiserror::Error;

use crate::store::{Role, Store, StoreError, UserAccount};

pub const HASH_ITERATIONS: u32 = 100_000;
pub const SALT_LEN: usize = 16;
const DIGEST_LEN: usize = 32;

#[derive(Debug, Error)]
pub enum AuthError {
    #[error("password must not be empty")]
    EmptyPassword,
    #[error("salt must be at least {SALT_LEN} bytes")]
    ShortSalt,
    #[error("invalid username or password")]
    BadCredentials,
    #[error("missing or invalid session token")]
    Unauthorized,
    #[error("session lacks the required role")]
    Forbidden,
    #[error("random source unavailable: {0}")]
    Random(String),
    #[error(transparent)]
    Store(#[from] StoreError),
}

/// PBKDF2-HMAC-SHA256 digest of `password`, hex encoded.
pub fn hash_password(password: &str, salt: &[u8]) -> Result<String, AuthError> {
    if password.is_empty() {
        return Err(AuthError::EmptyPassword);
    }
    if salt.len() < SALT_LEN {
        return Err(AuthError::ShortSalt);
    }
    let mut out = [0u8; DIGEST_LEN];
    pbkdf2::pbkdf2_hmac::<Sha256>(password.as_bytes(), salt, HASH_ITERATIONS, &mut out);
    Ok(hex::encode(out))
}

fn random_bytes<const N: usize>() -> Result<[u8; N], AuthError> {
    let mut buf = [0u8; N];
    getrandom::fill(&mut buf).map_err(|e| AuthError::Random(e.to_string()))?;
    Ok(buf)
}

/// A fresh admin account with a random salt.
pub fn new_account(username: &str, password: &str) -> Result<UserAccount, AuthError> {
    let salt = random_bytes::<SALT_LEN>()?;
    Ok(UserAccount {
        username: username.to_owned(),
        password_hash: hash_password(password, &salt)?,
        salt: hex::encode(salt),
        role: Role::Admin,
    })
}

pub fn verify_password(account: &UserAccount, password: &str) -> bool {
    let (Ok(salt), Ok(expected)) = (
        hex::decode(&account.salt),
        hex::decode(&account.password_hash),
    ) else {
        return false;
    };
    match hash_password(password, &salt) {
        Ok(digest) => {
            let digest = hex::decode(digest).unwrap_or_default();
            digest.len() == expected.len() && bool::from(digest.ct_eq(&expected))
        }
        Err(_) => false,
    }
}

pub fn now_unix() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Session {
    pub token: String,
    pub username: String,
    pub role: Role,
    /// Unix seconds after which the token stops working.
    pub expires: u64,
}

/// Live sessions keyed by token.
#[derive(Debug)]
pub struct SessionTable {
    ttl_secs: u64,
    sessions: Mutex<HashMap<String, Session>>,
}

impl SessionTable {
    pub fn new(ttl_hours: u64) -> Self {
        Self {
            ttl_secs: ttl_hours * 3600,
            sessions: Mutex::new(HashMap::new()),
        }
    }

    pub fn issue(&self, username: &str, role: Role, now: u64) -> Result<Session, AuthError> {
        let mut sessions = self.sessions.lock().unwrap_or_else(|e| e.into_inner());
        sessions.retain(|_, s| s.expires > now);
        let token = loop {
            let t = hex::encode(random_bytes::<16>()?);
            if !sessions.contains_key(&t) {
                break t;
            }
        };
        let session = Session {
            token: token.clone(),
            username: username.to_owned(),
            role,
            expires: now + self.ttl_secs,
        };
        sessions.insert(token, session.clone());
        Ok(session)
    }

    /// The live session for `token`. Expired sessions are dropped.
    pub fn lookup(&self, token: &str, now: u64) -> Option<Session> {
        let mut sessions = self.sessions.lock().unwrap_or_else(|e| e.into_inner());
        match sessions.get(token) {
            Some(s) if s.expires > now => Some(s.clone()),
            Some(_) => {
                sessions.remove(token);
                None
            }
            None => None,
        }
    }

    pub fn revoke(&self, token: &str) {
        self.sessions
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .remove(token);
    }
}

/// Checks credentials against the store and opens a session.
///
/// Unknown users and wrong passwords give the same error, and unknown users
/// still pay for one hash.
pub fn authenticate(
    store: &Store,
    sessions: &SessionTable,
    username: &str,
    password: &str,
    now: u64,
) -> Result<Session, AuthError> {
    let account = store.find_user(username);
    let ok = match &account {
        Some(a) => verify_password(a, password),
        None => {
            let _ = hash_password(password, &[0u8; SALT_LEN]);
            false
        }
    };
    match account {
        Some(a) if ok => sessions.issue(&a.username, a.role, now),
        _ => Err(AuthError::BadCredentials),
    }
}

/// Resolves a bearer token to a session holding `role`.
pub fn require_role(
    sessions: &SessionTable,
    token: Option<&str>,
    role: Role,
    now: u64,
) -> Result<Session, AuthError> {
    let session = token
        .and_then(|t| sessions.lookup(t, now))
        .ok_or(AuthError::Unauthorized)?;
    if session.role != role {
        return Err(AuthError::Forbidden);
    }
    Ok(session)
}

/// Creates the first administrator when the store has none.
pub fn bootstrap_admin(
    store: &Store,
    username: &str,
    password: Option<&str>,
) -> Result<bool, AuthError> {
    if !store.users().is_empty() {
        return Ok(false);
    }
    let Some(password) = password else {
        return Ok(false);
    };
    store.add_user(new_account(username, password)?)?;
    Ok(true)
}
