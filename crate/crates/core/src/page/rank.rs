use std::collections::BTreeSet;

use super::{ComponentKind, PageModel, ShortcutLexicon};
use crate::dom::text_words;

/// A navigable entry (link or content region) with its ranking weight.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedEntry {
    pub id: String,
    pub doc_order: usize,
    pub text: String,
    pub weight: f64,
}

/// Sum of lexicon weights over the distinct words of `text`.
pub(crate) fn weigh(text: &str, lexicon: &ShortcutLexicon) -> f64 {
    let words: BTreeSet<String> = text_words(text).into_iter().collect();
    words.iter().filter_map(|w| lexicon.weight(w)).sum()
}

/// Links and output regions ordered by weight (descending), ties broken by
/// document order.
pub fn rank_entries(model: &PageModel, lexicon: &ShortcutLexicon) -> Vec<RankedEntry> {
    let mut entries: Vec<RankedEntry> = model
        .components
        .iter()
        .filter(|c| {
            matches!(
                c.kind,
                ComponentKind::Link { .. } | ComponentKind::OutputRegion { .. }
            )
        })
        .map(|c| {
            let text = c.visible_text();
            RankedEntry {
                id: c.id.clone(),
                doc_order: c.doc_order,
                weight: weigh(&text, lexicon),
                text,
            }
        })
        .collect();
    entries.sort_by(|a, b| {
        b.weight
            .total_cmp(&a.weight)
            .then(a.doc_order.cmp(&b.doc_order))
    });
    entries
}
