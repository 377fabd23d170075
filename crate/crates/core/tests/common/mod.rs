#![allow(dead_code)]

pub mod xv_check;

use std::path::PathBuf;

use deius_core::page::ShortcutLexicon;
use deius_core::pipeline::{annotate_page, PipelineConfig, PipelineOutput};
use url::Url;

pub const PAGE_URL: &str = "http://example.org/site/page.html";

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> Vec<u8> {
    std::fs::read(fixtures_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every `.html` page of the corpus, sorted by name.
pub fn corpus() -> Vec<(String, Vec<u8>)> {
    let mut pages: Vec<(String, Vec<u8>)> = std::fs::read_dir(fixtures_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "html"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    pages.sort();
    pages
}

pub fn page_url() -> Url {
    Url::parse(PAGE_URL).unwrap()
}

pub fn annotate(bytes: &[u8]) -> PipelineOutput {
    annotate_page(bytes, &page_url(), &ShortcutLexicon::new(), &PipelineConfig::default()).unwrap()
}

/// The meeting scheduler select on its own, as a page.
pub const BARE_SELECT: &str = r#"<select name="participants" id="participants" multiple="multiple" size="10" width="100%">
<option> Anton, Tudor </option>
<option> Cesar, Brian </option>
<option> Danniels, David </option>
<option> Tejada, Jose </option>
</select>"#;

pub const PARTICIPANTS: [&str; 4] = ["Anton, Tudor", "Cesar, Brian", "Danniels, David", "Tejada, Jose"];
