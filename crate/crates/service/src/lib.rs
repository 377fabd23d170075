//! HTTP middleware: `GET /annotate?url=U` fetches U, annotates HTML pages
//! with voice dialogs and serves the X+V result with links routed back
//! through the proxy. Other content passes through untouched.

mod app;
mod cache;
mod config;
mod fetch;

use std::future::Future;
use std::sync::Arc;

use thiserror::Error;
use tokio::net::TcpListener;

pub use app::{router, AppState};
pub use cache::{CachedResponse, ResponseCache};
pub use config::{ConfigError, ServiceConfig};
pub use fetch::{charset_param, fetch, http_client, is_html, FetchError, Fetched, MAX_REDIRECTS};

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot build HTTP client: {0}")]
    Client(reqwest::Error),
    #[error("cannot listen: {0}")]
    Io(#[from] std::io::Error),
}

/// Serve on an already bound listener until `shutdown` resolves.
pub async fn serve_on(
    listener: TcpListener,
    config: ServiceConfig,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> Result<(), ServiceError> {
    let base = config.middleware_base(listener.local_addr()?);
    let state = Arc::new(AppState::new(config, base)?);
    axum::serve(listener, router(state))
        .with_graceful_shutdown(shutdown)
        .await?;
    Ok(())
}

/// Bind the configured address and serve until `shutdown` resolves.
pub async fn serve(
    config: ServiceConfig,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> Result<(), ServiceError> {
    config.validate()?;
    let listener = TcpListener::bind(config.socket_addr()).await?;
    serve_on(listener, config, shutdown).await
}
