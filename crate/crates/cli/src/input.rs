use std::path::Path;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use deius_service::{charset_param, fetch, http_client, is_html};
use url::Url;

/// A page to annotate and where it is considered to live.
pub struct Page {
    pub bytes: Vec<u8>,
    pub url: Url,
    /// Charset announced by the transport, if any.
    pub charset: Option<String>,
}

const MAX_FETCH: usize = 64 * 1024 * 1024;

/// Read a file, or fetch an http(s) URL the way the proxy would.
pub fn load(source: &str, page_url: Option<&Url>, timeout_secs: u64) -> Result<Page> {
    if let Ok(url) = Url::parse(source) {
        if matches!(url.scheme(), "http" | "https") {
            return fetch_page(&url, page_url, timeout_secs);
        }
    }
    let path = Path::new(source);
    let bytes = std::fs::read(path).with_context(|| format!("cannot read {source}"))?;
    let url = match page_url {
        Some(u) => u.clone(),
        None => {
            let abs = std::fs::canonicalize(path).with_context(|| format!("cannot resolve {source}"))?;
            Url::from_file_path(&abs).map_err(|_| anyhow::anyhow!("cannot form a URL for {}", abs.display()))?
        }
    };
    Ok(Page {
        bytes,
        url,
        charset: None,
    })
}

fn fetch_page(url: &Url, page_url: Option<&Url>, timeout_secs: u64) -> Result<Page> {
    let runtime = tokio::runtime::Builder::new_current_thread().enable_all().build()?;
    let fetched = runtime.block_on(async {
        let client = http_client(Duration::from_secs(timeout_secs))?;
        anyhow::Ok(fetch(&client, url, MAX_FETCH).await.with_context(|| format!("cannot fetch {url}"))?)
    })?;
    if !is_html(fetched.content_type.as_deref(), &fetched.body) {
        bail!(
            "{url} is not an HTML page ({})",
            fetched.content_type.as_deref().unwrap_or("no content type")
        );
    }
    Ok(Page {
        charset: fetched.content_type.as_deref().and_then(charset_param),
        url: page_url.cloned().unwrap_or(fetched.url),
        bytes: fetched.body,
    })
}
