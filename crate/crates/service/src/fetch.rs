use std::time::Duration;

use reqwest::header::CONTENT_TYPE;
use reqwest::{redirect, Client};
use thiserror::Error;
use url::Url;

/// Redirects followed before giving up.
pub const MAX_REDIRECTS: usize = 5;

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("timed out")]
    Timeout,
    #[error("unreachable: {0}")]
    Unreachable(String),
    #[error("answered with status {0}")]
    Status(u16),
    #[error("larger than {0} bytes")]
    TooLarge(usize),
    #[error("{0}")]
    Upstream(String),
}

#[derive(Debug, Clone)]
pub struct Fetched {
    /// Where the page ended up after redirects.
    pub url: Url,
    pub content_type: Option<String>,
    pub body: Vec<u8>,
}

pub fn http_client(timeout: Duration) -> reqwest::Result<Client> {
    Client::builder()
        .redirect(redirect::Policy::limited(MAX_REDIRECTS))
        .timeout(timeout)
        .no_proxy()
        .user_agent(concat!("deius/", env!("CARGO_PKG_VERSION")))
        .build()
}

fn classify(e: reqwest::Error) -> FetchError {
    let detail = error_chain(&e);
    if e.is_timeout() {
        FetchError::Timeout
    } else if e.is_connect() {
        FetchError::Unreachable(detail)
    } else {
        FetchError::Upstream(detail)
    }
}

fn error_chain(e: &dyn std::error::Error) -> String {
    let mut out = e.to_string();
    let mut source = e.source();
    while let Some(s) = source {
        out.push_str(": ");
        out.push_str(&s.to_string());
        source = s.source();
    }
    out
}

/// GET `url`, following redirects, reading at most `max_size` bytes.
pub async fn fetch(client: &Client, url: &Url, max_size: usize) -> Result<Fetched, FetchError> {
    let mut response = client.get(url.clone()).send().await.map_err(classify)?;
    let status = response.status();
    if status.is_client_error() || status.is_server_error() {
        return Err(FetchError::Status(status.as_u16()));
    }
    if status.is_redirection() {
        return Err(FetchError::Upstream(format!("too many redirects (status {})", status.as_u16())));
    }
    if response.content_length().is_some_and(|n| n > max_size as u64) {
        return Err(FetchError::TooLarge(max_size));
    }
    let final_url = response.url().clone();
    let content_type = response
        .headers()
        .get(CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .map(str::to_string);
    let mut body = Vec::new();
    while let Some(chunk) = response.chunk().await.map_err(classify)? {
        if body.len() + chunk.len() > max_size {
            return Err(FetchError::TooLarge(max_size));
        }
        body.extend_from_slice(&chunk);
    }
    Ok(Fetched {
        url: final_url,
        content_type,
        body,
    })
}

fn mime_essence(content_type: &str) -> String {
    content_type.split(';').next().unwrap_or_default().trim().to_ascii_lowercase()
}

/// The `charset` parameter of a Content-Type value.
pub fn charset_param(content_type: &str) -> Option<String> {
    content_type.split(';').skip(1).find_map(|p| {
        let (k, v) = p.split_once('=')?;
        k.trim()
            .eq_ignore_ascii_case("charset")
            .then(|| v.trim().trim_matches(['"', '\'']).to_string())
            .filter(|v| !v.is_empty())
    })
}

/// HTML by content type; without one, by a leading `<`.
pub fn is_html(content_type: Option<&str>, body: &[u8]) -> bool {
    match content_type.map(mime_essence) {
        Some(m) if !m.is_empty() => m == "text/html" || m == "application/xhtml+xml",
        _ => body.iter().find(|b| !b.is_ascii_whitespace()) == Some(&b'<'),
    }
}
