use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::time::Duration;

use deius_core::annotator::AnnotateConfig;
use deius_core::dom::Charset;
use deius_core::page::{LexiconError, ShortcutLexicon};
use deius_core::pipeline::PipelineConfig;
use thiserror::Error;
use url::Url;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("upstream timeout must be positive")]
    ZeroTimeout,
    #[error("maximum page size must be positive")]
    ZeroMaxPageSize,
    #[error("cannot read lexicon {path}: {source}")]
    LexiconIo { path: PathBuf, source: std::io::Error },
    #[error("lexicon {path}: {source}")]
    Lexicon { path: PathBuf, source: LexiconError },
    #[error("unsupported encoding override {0:?}")]
    Encoding(String),
    #[error("middleware base {0} must be an http(s) URL")]
    Base(Url),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ServiceConfig {
    pub listen: IpAddr,
    pub port: u16,
    pub timeout_secs: u64,
    pub max_page_size: usize,
    pub lexicon_path: Option<PathBuf>,
    pub verification: bool,
    /// 0 disables the cache.
    pub cache_ttl_secs: u64,
    /// Public address of the proxy, used when rewriting links. Defaults to
    /// the listening address.
    pub public_base: Option<Url>,
    pub encoding_override: Option<String>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            listen: IpAddr::V4(Ipv4Addr::LOCALHOST),
            port: 8080,
            timeout_secs: 10,
            max_page_size: 5 * 1024 * 1024,
            lexicon_path: None,
            verification: true,
            cache_ttl_secs: 60,
            public_base: None,
            encoding_override: None,
        }
    }
}

impl ServiceConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.timeout_secs == 0 {
            return Err(ConfigError::ZeroTimeout);
        }
        if self.max_page_size == 0 {
            return Err(ConfigError::ZeroMaxPageSize);
        }
        if let Some(base) = &self.public_base {
            if !matches!(base.scheme(), "http" | "https") {
                return Err(ConfigError::Base(base.clone()));
            }
        }
        self.charset_override()?;
        Ok(())
    }

    pub fn socket_addr(&self) -> SocketAddr {
        SocketAddr::new(self.listen, self.port)
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_secs(self.timeout_secs)
    }

    pub fn cache_ttl(&self) -> Duration {
        Duration::from_secs(self.cache_ttl_secs)
    }

    /// Empty when no lexicon path is configured.
    pub fn load_lexicon(&self) -> Result<ShortcutLexicon, ConfigError> {
        let Some(path) = &self.lexicon_path else {
            return Ok(ShortcutLexicon::new());
        };
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::LexiconIo {
            path: path.clone(),
            source,
        })?;
        ShortcutLexicon::parse(&text).map_err(|source| ConfigError::Lexicon {
            path: path.clone(),
            source,
        })
    }

    fn charset_override(&self) -> Result<Option<Charset>, ConfigError> {
        self.encoding_override
            .as_deref()
            .map(|l| Charset::from_label(l).map_err(|_| ConfigError::Encoding(l.to_string())))
            .transpose()
    }

    /// The base links are rewritten against: `public_base`, else the
    /// address actually bound.
    pub fn middleware_base(&self, bound: SocketAddr) -> Url {
        self.public_base.clone().unwrap_or_else(|| {
            Url::parse(&format!("http://{bound}/")).expect("socket address forms a valid URL")
        })
    }

    /// Pipeline settings for one page, given the charset the transport
    /// announced.
    pub fn pipeline_config(&self, base: &Url, encoding_hint: Option<String>) -> Result<PipelineConfig, ConfigError> {
        Ok(PipelineConfig {
            annotate: AnnotateConfig {
                verification: self.verification,
                encoding_override: self.charset_override()?,
            },
            middleware_base: Some(base.clone()),
            encoding_hint,
        })
    }
}
