use percent_encoding::{percent_decode_str, utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use url::Url;

use crate::dom::DomTree;

/// Everything except unreserved characters is escaped.
const QUERY_VALUE: &AsciiSet = &NON_ALPHANUMERIC.remove(b'-').remove(b'.').remove(b'_').remove(b'~');

/// The middleware URL that annotates `target`.
pub fn proxied_url(middleware_base: &Url, target: &Url) -> String {
    format!(
        "{}/annotate?url={}",
        middleware_base.as_str().trim_end_matches('/'),
        utf8_percent_encode(target.as_str(), QUERY_VALUE)
    )
}

fn is_web(url: &Url) -> bool {
    matches!(url.scheme(), "http" | "https")
}

/// Point every http(s) link at the middleware so that following it yields
/// another annotated page. Relative hrefs are resolved against `page_url`
/// (or the document's `<base href>`). Returns the number of links changed.
pub fn rewrite_links(doc: &mut DomTree, middleware_base: &Url, page_url: &Url) -> usize {
    let base = crate::page::base_url(doc, page_url);
    let prefix = format!("{}/annotate?url=", middleware_base.as_str().trim_end_matches('/'));
    let mut changed = 0;
    doc.root.for_each_mut(&mut |el| {
        if el.name != "a" {
            return;
        }
        let Some(href) = el.attr("href").map(str::trim) else {
            return;
        };
        if href.starts_with('#') || href.starts_with(&prefix) {
            return;
        }
        let Ok(target) = base.join(href) else {
            return;
        };
        if !is_web(&target) {
            return;
        }
        el.set_attr("href", proxied_url(middleware_base, &target));
        changed += 1;
    });
    changed
}

/// Undo `rewrite_links`: every href that points at the middleware goes back
/// to the absolute target URL.
pub fn unrewrite_links(doc: &mut DomTree, middleware_base: &Url) -> usize {
    let prefix = format!("{}/annotate?url=", middleware_base.as_str().trim_end_matches('/'));
    let mut changed = 0;
    doc.root.for_each_mut(&mut |el| {
        if el.name != "a" {
            return;
        }
        let Some(rest) = el.attr("href").and_then(|h| h.strip_prefix(&prefix)) else {
            return;
        };
        let Ok(target) = percent_decode_str(rest).decode_utf8() else {
            return;
        };
        let target = target.into_owned();
        el.set_attr("href", target);
        changed += 1;
    });
    changed
}
