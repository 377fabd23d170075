use std::collections::{HashMap, HashSet};

use super::build::ROOT_DECLARATION_NAMES;
use super::{AnnotatedDocument, DOCTYPE_PUBLIC_ID, DOCTYPE_SYSTEM_ID};
use crate::dom::{DomTree, Element, IdReport, Node, XmlWriter};

/// Encode an annotated document: XML declaration, X+V doctype, then the
/// tree with the namespace declarations one per line.
pub fn serialize_xv(a: &AnnotatedDocument) -> Vec<u8> {
    let doc = &a.doc;
    let mut w = XmlWriter::new(&doc.charset);
    w.raw(&format!(
        "<?xml version=\"1.0\" encoding=\"{}\"?>\n",
        doc.charset.label()
    ));
    w.raw(&format!(
        "<!DOCTYPE html PUBLIC \"{DOCTYPE_PUBLIC_ID}\"\n\"{DOCTYPE_SYSTEM_ID}\">\n"
    ));
    w.raw("<html");
    for (i, attr) in doc.root.attrs.iter().enumerate() {
        if i > 0 && ROOT_DECLARATION_NAMES.contains(&attr.name.as_str()) {
            w.attr_after("\n", &attr.name, &attr.value);
        } else {
            w.attr(&attr.name, &attr.value);
        }
    }
    w.close_start_and_children(&doc.root, 0);
    w.raw("\n");
    doc.charset.encode(&w.into_string())
}

fn is_voice_name(name: &str) -> bool {
    matches!(name.split_once(':'), Some(("vxml" | "xv" | "ev", _)))
}

fn strip_element(el: &mut Element, auto: &HashSet<&str>, renamed: &HashMap<&str, &str>) {
    el.attrs.retain(|a| !is_voice_name(&a.name));
    if let Some(id) = el.id().map(str::to_string) {
        if auto.contains(id.as_str()) {
            el.remove_attr("id");
        } else if let Some(orig) = renamed.get(id.as_str()) {
            el.set_attr("id", *orig);
        }
    }
    let container = matches!(el.name.as_str(), "html" | "head");
    el.children.retain(|c| match c {
        Node::Element(e) => !is_voice_name(&e.name),
        Node::Text(t) => !(container && t.trim().is_empty()),
        Node::CData(_) => true,
    });
    // A removed voice element may leave two text runs side by side.
    let mut merged: Vec<Node> = Vec::with_capacity(el.children.len());
    for child in std::mem::take(&mut el.children) {
        match (merged.last_mut(), child) {
            (Some(Node::Text(prev)), Node::Text(t)) => prev.push_str(&t),
            (_, Node::Element(mut e)) => {
                strip_element(&mut e, auto, renamed);
                merged.push(Node::Element(e));
            }
            (_, other) => merged.push(other),
        }
    }
    el.children = merged;
}

/// Remove every vxml/xv/ev element and attribute, generated ids, and the
/// root namespace and language declarations; restore renamed duplicate ids.
/// Whitespace-only text directly inside `html` and `head` is dropped, so
/// the result compares structurally with the equally stripped input.
pub fn strip_voice_markup(mut doc: DomTree, ids: &IdReport) -> DomTree {
    let auto: HashSet<&str> = ids.assigned.iter().map(|(_, id)| id.as_str()).collect();
    let renamed: HashMap<&str, &str> = ids
        .collisions
        .iter()
        .map(|(orig, new)| (new.as_str(), orig.as_str()))
        .collect();
    strip_element(&mut doc.root, &auto, &renamed);
    doc.root
        .attrs
        .retain(|a| !ROOT_DECLARATION_NAMES.contains(&a.name.as_str()) && !a.name.starts_with("xmlns"));
    doc
}
