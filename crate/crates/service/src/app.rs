use std::collections::HashMap;
use std::sync::Arc;

use axum::extract::{Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use deius_core::annotator::{error_document, serialize_xv, XV_CONTENT_TYPE};
use deius_core::page::ShortcutLexicon;
use deius_core::pipeline::annotate_page;
use reqwest::Client;
use serde_json::json;
use url::Url;

use crate::cache::{CachedResponse, ResponseCache};
use crate::config::{ConfigError, ServiceConfig};
use crate::fetch::{charset_param, fetch, http_client, is_html, FetchError};
use crate::ServiceError;

/// Shared, read-only after startup except for the cache.
#[derive(Debug)]
pub struct AppState {
    pub config: ServiceConfig,
    pub lexicon: ShortcutLexicon,
    pub base: Url,
    pub client: Client,
    pub cache: ResponseCache,
}

impl AppState {
    pub fn new(config: ServiceConfig, base: Url) -> Result<Self, ServiceError> {
        config.validate()?;
        let lexicon = config.load_lexicon()?;
        let client = http_client(config.timeout()).map_err(ServiceError::Client)?;
        Ok(Self {
            cache: ResponseCache::new(config.cache_ttl()),
            config,
            lexicon,
            base,
            client,
        })
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/annotate", get(handle_annotate))
        .route("/health", get(handle_health))
        .with_state(state)
}

fn xv_content_type(label: &str) -> String {
    format!("{XV_CONTENT_TYPE}; charset={label}")
}

fn error_page(status: StatusCode, message: &str) -> Response {
    let title = status.canonical_reason().unwrap_or("Error");
    let body = serialize_xv(&error_document(title, message));
    (status, [(header::CONTENT_TYPE, xv_content_type("utf-8"))], body).into_response()
}

fn ok(r: CachedResponse) -> Response {
    (StatusCode::OK, [(header::CONTENT_TYPE, r.content_type)], r.body).into_response()
}

async fn handle_health(State(state): State<Arc<AppState>>) -> Json<serde_json::Value> {
    Json(json!({
        "status": "ok",
        "version": env!("CARGO_PKG_VERSION"),
        "lexicon_entries": state.lexicon.len(),
    }))
}

async fn handle_annotate(
    State(state): State<Arc<AppState>>,
    Query(params): Query<HashMap<String, String>>,
) -> Response {
    let Some(raw) = params.get("url").filter(|u| !u.trim().is_empty()) else {
        return error_page(StatusCode::BAD_REQUEST, "The url parameter is missing.");
    };
    let target = match Url::parse(raw.trim()) {
        Ok(u) if matches!(u.scheme(), "http" | "https") => u,
        _ => {
            return error_page(
                StatusCode::BAD_REQUEST,
                &format!("The address {raw} is not an http or https URL."),
            )
        }
    };
    if let Some(hit) = state.cache.get(raw) {
        return ok(hit);
    }
    match respond(&state, &target).await {
        Ok(r) => {
            state.cache.insert(raw.clone(), r.clone());
            ok(r)
        }
        Err(e) => e,
    }
}

async fn respond(state: &Arc<AppState>, target: &Url) -> Result<CachedResponse, Response> {
    let page = fetch(&state.client, target, state.config.max_page_size)
        .await
        .map_err(|e| {
            let status = match e {
                FetchError::Timeout | FetchError::Unreachable(_) => StatusCode::GATEWAY_TIMEOUT,
                FetchError::TooLarge(_) => StatusCode::PAYLOAD_TOO_LARGE,
                FetchError::Status(_) | FetchError::Upstream(_) => StatusCode::BAD_GATEWAY,
            };
            error_page(status, &format!("The page at {target} {e}."))
        })?;
    if !is_html(page.content_type.as_deref(), &page.body) {
        return Ok(CachedResponse {
            content_type: page
                .content_type
                .unwrap_or_else(|| "application/octet-stream".to_string()),
            body: page.body,
        });
    }
    let hint = page.content_type.as_deref().and_then(charset_param);
    let config = state
        .config
        .pipeline_config(&state.base, hint)
        .map_err(|e: ConfigError| error_page(StatusCode::INTERNAL_SERVER_ERROR, &e.to_string()))?;
    let worker = Arc::clone(state);
    let out = tokio::task::spawn_blocking(move || {
        annotate_page(&page.body, &page.url, &worker.lexicon, &config)
    })
    .await
    .map_err(|e| error_page(StatusCode::INTERNAL_SERVER_ERROR, &format!("Annotation failed: {e}.")))?
    .map_err(|e| error_page(StatusCode::BAD_GATEWAY, &format!("The page at {target} could not be read: {e}.")))?;
    Ok(CachedResponse {
        content_type: xv_content_type(out.charset.label()),
        body: out.bytes,
    })
}
