//! Document tree, tolerant HTML parsing, id assignment and text extraction.

mod encoding;
mod entities;
mod ids;
mod parse;
mod serialize;
mod xml;

use thiserror::Error;

pub use encoding::{sniff_declared, Charset};
pub use ids::{ensure_ids, is_interactive, IdReport, AUTO_ID_PREFIX};
pub use parse::{parse_html, MAX_DEPTH};
pub use serialize::{serialize_xhtml, write_element, XmlWriter};
pub use xml::{from_xml, is_well_formed};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DomError {
    #[error("unsupported character encoding: {0}")]
    EncodingUnsupported(String),
    #[error("malformed XML: {0}")]
    MalformedXml(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribute {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Element(Element),
    Text(String),
    /// Character data the serializer writes as a CDATA section when the
    /// output charset allows it.
    CData(String),
}

impl Node {
    pub fn as_element(&self) -> Option<&Element> {
        match self {
            Node::Element(e) => Some(e),
            _ => None,
        }
    }

    pub fn as_element_mut(&mut self) -> Option<&mut Element> {
        match self {
            Node::Element(e) => Some(e),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Element {
    /// Lowercase tag name, possibly prefixed (`vxml:form`).
    pub name: String,
    pub attrs: Vec<Attribute>,
    pub children: Vec<Node>,
}

impl Element {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            attrs: Vec::new(),
            children: Vec::new(),
        }
    }

    pub fn with_attr(mut self, name: &str, value: impl Into<String>) -> Self {
        self.set_attr(name, value);
        self
    }

    pub fn with_child(mut self, child: Element) -> Self {
        self.children.push(Node::Element(child));
        self
    }

    pub fn with_text(mut self, text: impl Into<String>) -> Self {
        self.children.push(Node::Text(text.into()));
        self
    }

    pub fn attr(&self, name: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|a| a.name == name)
            .map(|a| a.value.as_str())
    }

    pub fn has_attr(&self, name: &str) -> bool {
        self.attrs.iter().any(|a| a.name == name)
    }

    /// Insert or overwrite an attribute, keeping its original position.
    pub fn set_attr(&mut self, name: &str, value: impl Into<String>) {
        let value = value.into();
        match self.attrs.iter_mut().find(|a| a.name == name) {
            Some(a) => a.value = value,
            None => self.attrs.push(Attribute {
                name: name.to_string(),
                value,
            }),
        }
    }

    pub fn remove_attr(&mut self, name: &str) -> Option<String> {
        let pos = self.attrs.iter().position(|a| a.name == name)?;
        Some(self.attrs.remove(pos).value)
    }

    /// The `id` attribute when present and non-empty.
    pub fn id(&self) -> Option<&str> {
        self.attr("id").filter(|v| !v.is_empty())
    }

    pub fn prefix(&self) -> Option<&str> {
        self.name.split_once(':').map(|(p, _)| p)
    }

    pub fn child_elements(&self) -> impl Iterator<Item = &Element> {
        self.children.iter().filter_map(Node::as_element)
    }

    pub fn child_elements_mut(&mut self) -> impl Iterator<Item = &mut Element> {
        self.children.iter_mut().filter_map(Node::as_element_mut)
    }

    pub fn first_child_named(&self, name: &str) -> Option<&Element> {
        self.child_elements().find(|e| e.name == name)
    }

    /// Preorder traversal of this element and all descendant elements.
    pub fn descendants(&self) -> Descendants<'_> {
        Descendants { stack: vec![self] }
    }

    pub fn find_by_id(&self, id: &str) -> Option<&Element> {
        self.descendants().find(|e| e.id() == Some(id))
    }

    pub fn find_by_id_mut(&mut self, id: &str) -> Option<&mut Element> {
        if self.id() == Some(id) {
            return Some(self);
        }
        self.child_elements_mut().find_map(|c| c.find_by_id_mut(id))
    }

    /// Apply `f` to this element and every descendant element, preorder.
    pub fn for_each_mut(&mut self, f: &mut dyn FnMut(&mut Element)) {
        f(self);
        for child in self.child_elements_mut() {
            child.for_each_mut(f);
        }
    }

    pub fn append(&mut self, child: Element) {
        self.children.push(Node::Element(child));
    }
}

pub struct Descendants<'a> {
    stack: Vec<&'a Element>,
}

impl<'a> Iterator for Descendants<'a> {
    type Item = &'a Element;

    fn next(&mut self) -> Option<&'a Element> {
        let next = self.stack.pop()?;
        self.stack
            .extend(next.children.iter().rev().filter_map(Node::as_element));
        Some(next)
    }
}

/// A parsed document. The root is always `html` with `head` and `body`
/// children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomTree {
    pub root: Element,
    pub charset: Charset,
}

impl DomTree {
    /// An empty `html > head + body` skeleton.
    pub fn skeleton(charset: Charset) -> Self {
        Self {
            root: Element::new("html")
                .with_child(Element::new("head"))
                .with_child(Element::new("body")),
            charset,
        }
    }

    pub fn head(&self) -> &Element {
        self.root.first_child_named("head").expect("html has a head")
    }

    pub fn head_mut(&mut self) -> &mut Element {
        self.root
            .child_elements_mut()
            .find(|e| e.name == "head")
            .expect("html has a head")
    }

    pub fn body(&self) -> &Element {
        self.root.first_child_named("body").expect("html has a body")
    }

    pub fn body_mut(&mut self) -> &mut Element {
        self.root
            .child_elements_mut()
            .find(|e| e.name == "body")
            .expect("html has a body")
    }

    pub fn find_by_id(&self, id: &str) -> Option<&Element> {
        self.root.find_by_id(id)
    }

    pub fn find_by_id_mut(&mut self, id: &str) -> Option<&mut Element> {
        self.root.find_by_id_mut(id)
    }

    pub fn elements(&self) -> Descendants<'_> {
        self.root.descendants()
    }
}

/// Text content with script/style excluded, whitespace collapsed and trimmed.
pub fn extract_text(node: &Element) -> String {
    let mut raw = String::new();
    collect_text(node, &mut raw);
    collapse_whitespace(&raw)
}

fn collect_text(el: &Element, out: &mut String) {
    if matches!(el.name.as_str(), "script" | "style") {
        return;
    }
    for child in &el.children {
        match child {
            Node::Element(e) => collect_text(e, out),
            Node::Text(t) | Node::CData(t) => out.push_str(t),
        }
    }
}

pub fn collapse_whitespace(raw: &str) -> String {
    raw.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Lowercased words of `text`, split on anything that is not alphanumeric.
pub fn text_words(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}
