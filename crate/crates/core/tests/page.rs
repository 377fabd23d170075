mod common;

use std::collections::BTreeSet;

use deius_core::dom::{ensure_ids, parse_html, DomTree};
use deius_core::page::{
    build_dialog_tree, build_weighted_dialog_tree, extract_components, extract_words, rank_entries,
    ComponentKind, DialogNode, NodeKind, PageModel, ShortcutLexicon,
};
use proptest::prelude::*;

fn load(html: &[u8]) -> (DomTree, PageModel) {
    let (doc, _) = ensure_ids(parse_html(html, None).unwrap());
    let model = extract_components(&doc, &common::page_url());
    (doc, model)
}

/// Closed form: one leaf per link and region, one per form field plus its
/// submit, and one per field outside any form.
fn expected_leaves(m: &PageModel) -> usize {
    let links = m.links().count();
    let regions = m.regions().count();
    let in_forms: usize = m
        .forms
        .iter()
        .map(|f| f.members.iter().filter(|id| m.component(id).is_some_and(|c| c.is_field())).count() + 1)
        .sum();
    let orphans = m
        .fields()
        .filter(|c| c.form.as_deref().and_then(|f| m.form(f)).is_none())
        .count();
    links + regions + in_forms + orphans
}

fn count_leaves(n: &DialogNode) -> usize {
    if n.children.is_empty() {
        1
    } else {
        n.children.iter().map(count_leaves).sum()
    }
}

#[test]
fn scheduler_page_has_one_selection_input() {
    let (_, m) = load(&common::fixture("scheduler.html"));
    let fields: Vec<_> = m.fields().collect();
    assert_eq!(fields.len(), 1);
    assert_eq!(fields[0].id, "participants");
    match &fields[0].kind {
        ComponentKind::SelectionInput { options, multiple, name } => {
            assert!(*multiple);
            assert_eq!(name.as_deref(), Some("participants"));
            let texts: Vec<&str> = options.iter().map(|o| o.text.as_str()).collect();
            assert_eq!(texts, common::PARTICIPANTS);
        }
        other => panic!("unexpected {other:?}"),
    }
    assert_eq!(m.title, "Schedule a meeting");
    assert_eq!(m.forms.len(), 1);
    assert_eq!(m.forms[0].id, "scheduler_meeting");
    assert_eq!(m.forms[0].action.as_str(), "http://example.org/meetings/new");
}

#[test]
fn scheduler_words() {
    let (doc, _) = load(&common::fixture("scheduler.html"));
    let words = extract_words(&doc);
    for w in ["anton", "tudor", "cesar", "brian", "participants"] {
        assert!(words.contains_key(w), "{w}");
    }
    assert!(words.keys().all(|w| w.chars().all(|c| c.is_alphanumeric() && !c.is_uppercase())));
}

#[test]
fn punctuation_and_scripts_are_not_words() {
    let (doc, _) = load(b"<p>Cesar,</p><script>var hidden = 1;</script><style>b{}</style>");
    let bag = extract_words(&doc);
    let words: Vec<&str> = bag.keys().map(String::as_str).collect();
    assert_eq!(words, ["cesar"]);
    let (empty, _) = load(b"");
    assert!(extract_words(&empty).is_empty());
}

#[test]
fn components_in_source_order() {
    let (_, m) = load(br#"<a href="a">A</a><a href="b">B</a><input name="q">"#);
    let kinds: Vec<&str> = m
        .components
        .iter()
        .map(|c| match c.kind {
            ComponentKind::Link { .. } => "link",
            ComponentKind::TextInput { .. } => "text",
            _ => "other",
        })
        .collect();
    assert_eq!(kinds, ["link", "link", "text"]);
    let (_, blank) = load(b"");
    assert!(blank.components.is_empty() && blank.forms.is_empty());
}

#[test]
fn form_with_select_submit_and_two_links_has_four_paths() {
    let (_, m) = load(
        br#"<form id="f"><select id="s" name="s"><option>x</option></select><input type="submit" id="go"></form>
            <a id="a1" href="/1">One</a><a id="a2" href="/2">Two</a>"#,
    );
    let tree = build_dialog_tree(&m);
    assert_eq!(tree.root.children.len(), 3);
    let form = &tree.root.children[0];
    assert_eq!(form.kind, NodeKind::Form);
    assert_eq!(form.children.iter().map(|c| c.kind).collect::<Vec<_>>(), [NodeKind::Field, NodeKind::Submit]);
    // Written out by hand.
    let expected: Vec<Vec<&str>> = vec![
        vec!["page", "f", "s"],
        vec!["page", "f", "go"],
        vec!["page", "a1"],
        vec!["page", "a2"],
    ];
    assert_eq!(tree.paths(), expected);
}

#[test]
fn rank_example() {
    let (_, m) = load(br#"<a href="/1">Top news</a><a href="/2">Sports today</a><a href="/3">Contact</a>"#);
    let lex = ShortcutLexicon::from_entries([("news", 5.0), ("sports", 2.0)]).unwrap();
    let ranked: Vec<(String, f64)> = rank_entries(&m, &lex).into_iter().map(|e| (e.text, e.weight)).collect();
    assert_eq!(
        ranked,
        [("Top news".to_string(), 5.0), ("Sports today".to_string(), 2.0), ("Contact".to_string(), 0.0)]
    );
    let plain: Vec<String> = rank_entries(&m, &ShortcutLexicon::new()).into_iter().map(|e| e.text).collect();
    assert_eq!(plain, ["Top news", "Sports today", "Contact"]);
}

#[test]
fn rank_ties_keep_document_order() {
    let (_, m) = load(br#"<a href="/1">Old news</a><a href="/2">Other</a><a href="/3">Fresh news</a>"#);
    let lex = ShortcutLexicon::from_entries([("news", 5.0)]).unwrap();
    let ranked: Vec<String> = rank_entries(&m, &lex).into_iter().map(|e| e.text).collect();
    assert_eq!(ranked, ["Old news", "Fresh news", "Other"]);
}

#[test]
fn corpus_models_are_consistent() {
    for (name, bytes) in common::corpus() {
        let (doc, m) = load(&bytes);
        for c in &m.components {
            assert!(doc.find_by_id(&c.id).is_some(), "{name}: {}", c.id);
            if let ComponentKind::Link { href, .. } = &c.kind {
                assert!(!href.cannot_be_a_base() || href.scheme() == "mailto", "{name}: {href}");
            }
        }
        assert!(m.components.windows(2).all(|w| w[0].doc_order < w[1].doc_order), "{name}");
        for f in &m.forms {
            assert!(doc.find_by_id(&f.id).is_some(), "{name}: form {}", f.id);
            for id in &f.members {
                assert!(m.component(id).is_some(), "{name}: member {id}");
            }
        }
        let tree = build_dialog_tree(&m);
        let leaves = if tree.root.children.is_empty() { 0 } else { count_leaves(&tree.root) };
        assert_eq!(tree.leaf_count(), leaves, "{name}");
        assert_eq!(leaves, expected_leaves(&m), "{name}");
    }
}

fn page_parts() -> impl Strategy<Value = String> {
    let part = prop_oneof![
        "[a-z]{1,8}".prop_map(|t| format!("<a href=\"/{t}\">{t} link</a>")),
        "[a-z]{1,8}".prop_map(|t| format!("<h2>{t}</h2><p>about {t}</p>")),
        "[a-z]{1,8}".prop_map(|t| format!("<input name=\"{t}\">")),
        "[a-z]{1,8}".prop_map(|t| format!("<select name=\"{t}\"><option>{t}</option></select>")),
        Just("<form action=\"/go\">".to_string()),
        Just("</form>".to_string()),
        Just("<input type=\"submit\">".to_string()),
        "[a-z]{1,8}".prop_map(|t| format!("<input type=\"radio\" name=\"r\" value=\"{t}\">")),
        Just("<p>plain</p>".to_string()),
    ];
    prop::collection::vec(part, 0..25).prop_map(|v| v.concat())
}

proptest! {
    #[test]
    fn leaf_count_matches_closed_form(html in page_parts()) {
        let (_, m) = load(html.as_bytes());
        let tree = build_dialog_tree(&m);
        prop_assert_eq!(tree.leaf_count(), expected_leaves(&m));
        for path in tree.paths() {
            prop_assert_eq!(path[0].as_str(), "page");
            let last = path.last().unwrap();
            prop_assert!(m.component(last).is_some() || m.form(last).is_some());
        }
    }

    #[test]
    fn ranking_is_a_permutation(
        html in page_parts(),
        weights in prop::collection::btree_map("[a-z]{1,8}", 0.5f64..10.0, 0..6),
    ) {
        let (_, m) = load(html.as_bytes());
        let lex = ShortcutLexicon::from_entries(weights.clone()).unwrap();
        let ranked = rank_entries(&m, &lex);
        let ids: Vec<&str> = ranked.iter().map(|e| e.id.as_str()).collect();
        let mut sorted_ids = ids.clone();
        sorted_ids.sort_unstable();
        let mut expected: Vec<&str> = m
            .components
            .iter()
            .filter(|c| matches!(c.kind, ComponentKind::Link { .. } | ComponentKind::OutputRegion { .. }))
            .map(|c| c.id.as_str())
            .collect();
        expected.sort_unstable();
        prop_assert_eq!(sorted_ids, expected);
        for e in &ranked {
            let words: BTreeSet<String> = e
                .text
                .split(|c: char| !c.is_alphanumeric())
                .filter(|w| !w.is_empty())
                .map(str::to_lowercase)
                .collect();
            let w: f64 = words.iter().filter_map(|w| weights.get(w)).sum();
            prop_assert!((w - e.weight).abs() < 1e-9);
        }
        prop_assert!(ranked.windows(2).all(|p| p[0].weight > p[1].weight
            || (p[0].weight == p[1].weight && p[0].doc_order < p[1].doc_order)));
        let tree = build_weighted_dialog_tree(&m, &lex);
        prop_assert_eq!(tree.leaf_count(), expected_leaves(&m));
    }
}
