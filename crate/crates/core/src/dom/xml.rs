//! Strict XML loading, used for documents this crate produced.

use roxmltree::{Document, ParsingOptions};

use super::encoding::{sniff_declared, Charset};
use super::{Attribute, DomError, DomTree, Element, Node};

const XML_NS: &str = "http://www.w3.org/XML/1998/namespace";

fn decode(bytes: &[u8]) -> Result<(String, Charset), DomError> {
    let charset = sniff_declared(bytes)?.unwrap_or_default();
    let text = charset.decode(bytes);
    Ok((text, charset))
}

fn parse_doc(text: &str) -> Result<Document<'_>, DomError> {
    let opts = ParsingOptions {
        allow_dtd: true,
        ..ParsingOptions::default()
    };
    Document::parse_with_options(text, opts).map_err(|e| DomError::MalformedXml(e.to_string()))
}

/// True when `bytes` parse as namespace-well-formed XML.
pub fn is_well_formed(bytes: &[u8]) -> Result<(), DomError> {
    let (text, _) = decode(bytes)?;
    parse_doc(&text).map(|_| ())
}

/// Load an XML document (such as an annotated X+V page) into a tree.
/// Prefixes are reconstructed from the in-scope namespace bindings and
/// namespace declarations reappear as `xmlns` attributes.
pub fn from_xml(bytes: &[u8]) -> Result<DomTree, DomError> {
    let (text, charset) = decode(bytes)?;
    let doc = parse_doc(&text)?;
    let root = doc.root_element();
    let mut root_el = convert(root);
    if root_el.name != "html" {
        return Err(DomError::MalformedXml(format!(
            "root element is <{}>, expected <html>",
            root_el.name
        )));
    }
    if root_el.first_child_named("head").is_none() {
        root_el.children.insert(0, Node::Element(Element::new("head")));
    }
    if root_el.first_child_named("body").is_none() {
        root_el.append(Element::new("body"));
    }
    Ok(DomTree {
        root: root_el,
        charset,
    })
}

fn qualified(node: roxmltree::Node<'_, '_>, ns: Option<&str>, local: &str, is_attr: bool) -> String {
    let Some(uri) = ns else {
        return local.to_string();
    };
    if uri == XML_NS {
        return format!("xml:{local}");
    }
    if !is_attr && node.lookup_namespace_uri(None) == Some(uri) {
        return local.to_string();
    }
    match node.lookup_prefix(uri) {
        Some(prefix) if !prefix.is_empty() => format!("{prefix}:{local}"),
        _ => local.to_string(),
    }
}

fn convert(node: roxmltree::Node<'_, '_>) -> Element {
    let tag = node.tag_name();
    let mut el = Element::new(qualified(node, tag.namespace(), tag.name(), false));

    let parent_ns: Vec<(Option<&str>, &str)> = node
        .parent_element()
        .map(|p| p.namespaces().map(|n| (n.name(), n.uri())).collect())
        .unwrap_or_default();
    for ns in node.namespaces() {
        if ns.name() == Some("xml") || parent_ns.contains(&(ns.name(), ns.uri())) {
            continue;
        }
        let name = match ns.name() {
            Some(p) => format!("xmlns:{p}"),
            None => "xmlns".to_string(),
        };
        el.attrs.push(Attribute {
            name,
            value: ns.uri().to_string(),
        });
    }
    for a in node.attributes() {
        el.attrs.push(Attribute {
            name: qualified(node, a.namespace(), a.name(), true),
            value: a.value().to_string(),
        });
    }
    for child in node.children() {
        if child.is_element() {
            el.children.push(Node::Element(convert(child)));
        } else if child.is_text() {
            let t = child.text().unwrap_or_default();
            match el.children.last_mut() {
                Some(Node::Text(prev)) => prev.push_str(t),
                _ => el.children.push(Node::Text(t.to_string())),
            }
        }
    }
    el
}
