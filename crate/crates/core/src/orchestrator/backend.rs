// SPDX-License-Identifier: Apache-2.0

use std::collections::VecDeque;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BackendError {
    #[error("backend unavailable: {0}")]
    BackendUnavailable(String),
    #[error("no replay fixture left in {dir} (used {used})")]
    FixturesExhausted { dir: String, used: usize },
    #[error("conversation needs about {estimated} tokens, budget is {budget}")]
    ContextOverflow { estimated: usize, budget: usize },
}

pub trait LlmBackend {
    fn id(&self) -> &str;

    /// Sends the whole conversation, last message being the new prompt,
    /// and returns the assistant reply.
    fn query(&mut self, messages: &[ChatMessage]) -> Result<String, BackendError>;

    /// Consumes one reply without producing it (used when resuming).
    fn skip(&mut self) {}
}

/// Serves `NNN_response.txt` files from a directory in name order.
pub struct ReplayBackend {
    dir: PathBuf,
    files: Vec<PathBuf>,
    next: usize,
}

impl ReplayBackend {
    pub fn open(dir: &Path) -> Result<Self, BackendError> {
        let entries = std::fs::read_dir(dir)
            .map_err(|e| BackendError::BackendUnavailable(format!("replay directory {}: {e}", dir.display())))?;
        let mut files: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.ends_with("_response.txt")))
            .collect();
        files.sort();
        Ok(ReplayBackend { dir: dir.to_path_buf(), files, next: 0 })
    }

    pub fn remaining(&self) -> usize {
        self.files.len() - self.next.min(self.files.len())
    }
}

impl LlmBackend for ReplayBackend {
    fn id(&self) -> &str {
        "replay"
    }

    fn query(&mut self, _messages: &[ChatMessage]) -> Result<String, BackendError> {
        let Some(path) = self.files.get(self.next) else {
            return Err(BackendError::FixturesExhausted { dir: self.dir.display().to_string(), used: self.next });
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| BackendError::BackendUnavailable(format!("{}: {e}", path.display())))?;
        self.next += 1;
        Ok(text)
    }

    fn skip(&mut self) {
        self.next += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HttpConfig {
    /// Chat-completions URL.
    pub endpoint: String,
    pub model: String,
    /// Environment variable holding the bearer token.
    pub api_key_env: String,
    pub token_budget: usize,
    pub timeout_secs: u64,
}

impl Default for HttpConfig {
    fn default() -> Self {
        HttpConfig {
            endpoint: "https://api.openai.com/v1/chat/completions".into(),
            model: "gpt-4".into(),
            api_key_env: "SVAFLOW_API_KEY".into(),
            token_budget: 8000,
            timeout_secs: 120,
        }
    }
}

/// Rough token count: four characters per token.
pub fn estimate_tokens(messages: &[ChatMessage]) -> usize {
    messages.iter().map(|m| m.content.chars().count().div_ceil(4) + 4).sum()
}

/// Chat-completions client. The credential is read from the environment
/// when the backend is created and again before each request.
pub struct HttpBackend {
    cfg: HttpConfig,
    client: reqwest::blocking::Client,
}

impl HttpBackend {
    pub fn new(cfg: HttpConfig) -> Result<Self, BackendError> {
        credential(&cfg)?;
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(cfg.timeout_secs))
            .build()
            .map_err(|e| BackendError::BackendUnavailable(e.to_string()))?;
        Ok(HttpBackend { cfg, client })
    }
}

fn credential(cfg: &HttpConfig) -> Result<String, BackendError> {
    match std::env::var(&cfg.api_key_env) {
        Ok(k) if !k.trim().is_empty() => Ok(k),
        _ => Err(BackendError::BackendUnavailable(format!("credential variable {} is not set", cfg.api_key_env))),
    }
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    temperature: f64,
    messages: &'a [ChatMessage],
}

#[derive(Deserialize)]
struct ChatReply {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: ReplyMessage,
}

#[derive(Deserialize)]
struct ReplyMessage {
    content: String,
}

impl LlmBackend for HttpBackend {
    fn id(&self) -> &str {
        "http"
    }

    fn query(&mut self, messages: &[ChatMessage]) -> Result<String, BackendError> {
        let key = credential(&self.cfg)?;
        let estimated = estimate_tokens(messages);
        if estimated > self.cfg.token_budget {
            return Err(BackendError::ContextOverflow { estimated, budget: self.cfg.token_budget });
        }
        let body = ChatRequest { model: &self.cfg.model, temperature: 0.0, messages };
        let resp = self
            .client
            .post(&self.cfg.endpoint)
            .bearer_auth(key)
            .json(&body)
            .send()
            .map_err(|e| BackendError::BackendUnavailable(e.to_string()))?;
        let status = resp.status();
        if !status.is_success() {
            let text = resp.text().unwrap_or_default();
            return Err(BackendError::BackendUnavailable(format!("HTTP {status}: {}", text.chars().take(300).collect::<String>())));
        }
        let reply: ChatReply = resp.json().map_err(|e| BackendError::BackendUnavailable(format!("bad reply: {e}")))?;
        reply
            .choices
            .into_iter()
            .next()
            .map(|c| c.message.content)
            .ok_or_else(|| BackendError::BackendUnavailable("reply has no choices".into()))
    }
}

/// Answers from an earlier run's log first, skipping the same number of
/// replies on the wrapped backend, then falls through to it.
pub struct ResumingBackend<B> {
    recorded: VecDeque<String>,
    inner: B,
}

impl<B: LlmBackend> ResumingBackend<B> {
    pub fn new(recorded: Vec<String>, inner: B) -> Self {
        ResumingBackend { recorded: recorded.into(), inner }
    }

    pub fn into_inner(self) -> B {
        self.inner
    }
}

impl<B: LlmBackend> LlmBackend for ResumingBackend<B> {
    fn id(&self) -> &str {
        self.inner.id()
    }

    fn query(&mut self, messages: &[ChatMessage]) -> Result<String, BackendError> {
        match self.recorded.pop_front() {
            Some(r) => {
                self.inner.skip();
                Ok(r)
            }
            None => self.inner.query(messages),
        }
    }

    fn skip(&mut self) {
        if self.recorded.pop_front().is_none() {
            self.inner.skip();
        }
    }
}

/// Fixed replies, for tests and examples.
pub struct ScriptedBackend {
    replies: VecDeque<String>,
    pub seen: Vec<Vec<ChatMessage>>,
}

impl ScriptedBackend {
    pub fn new<S: Into<String>>(replies: impl IntoIterator<Item = S>) -> Self {
        ScriptedBackend { replies: replies.into_iter().map(Into::into).collect(), seen: Vec::new() }
    }
}

impl LlmBackend for ScriptedBackend {
    fn id(&self) -> &str {
        "scripted"
    }

    fn query(&mut self, messages: &[ChatMessage]) -> Result<String, BackendError> {
        self.seen.push(messages.to_vec());
        self.replies
            .pop_front()
            .ok_or(BackendError::FixturesExhausted { dir: "<scripted>".into(), used: self.seen.len() - 1 })
    }

    fn skip(&mut self) {
        self.replies.pop_front();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn user(text: &str) -> Vec<ChatMessage> {
        vec![ChatMessage { role: Role::User, content: text.into() }]
    }

    #[test]
    fn replay_in_name_order() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("001_response.txt"), "second").unwrap();
        std::fs::write(dir.path().join("000_response.txt"), "first").unwrap();
        std::fs::write(dir.path().join("notes.md"), "ignored").unwrap();
        let mut b = ReplayBackend::open(dir.path()).unwrap();
        assert_eq!(b.query(&user("x")).unwrap(), "first");
        assert_eq!(b.query(&user("x")).unwrap(), "second");
        assert!(matches!(b.query(&user("x")), Err(BackendError::FixturesExhausted { used: 2, .. })));
    }

    #[test]
    fn empty_replay_dir_is_exhausted() {
        let dir = tempfile::tempdir().unwrap();
        let mut b = ReplayBackend::open(dir.path()).unwrap();
        assert!(matches!(b.query(&user("x")), Err(BackendError::FixturesExhausted { .. })));
    }

    #[test]
    fn http_without_credential_fails_before_network() {
        // unroutable endpoint: reaching the network would time out or fail differently
        let cfg = HttpConfig {
            endpoint: "http://192.0.2.1:9/never".into(),
            api_key_env: "SVAFLOW_TEST_KEY_THAT_IS_NOT_SET".into(),
            ..HttpConfig::default()
        };
        match HttpBackend::new(cfg) {
            Err(BackendError::BackendUnavailable(m)) => assert!(m.contains("SVAFLOW_TEST_KEY_THAT_IS_NOT_SET")),
            _ => panic!("expected BackendUnavailable"),
        }
    }

    #[test]
    fn resuming_serves_recorded_then_inner() {
        let mut b = ResumingBackend::new(vec!["old".into()], ScriptedBackend::new(["a", "b"]));
        assert_eq!(b.query(&user("x")).unwrap(), "old");
        assert_eq!(b.query(&user("x")).unwrap(), "b");
        assert!(b.query(&user("x")).is_err());
    }

    #[test]
    fn token_estimate() {
        assert_eq!(estimate_tokens(&user("abcdefgh")), 6);
    }
}
