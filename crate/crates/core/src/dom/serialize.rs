//! Deterministic XHTML serialization.
//!
//! Body content is written byte-for-byte with no added whitespace. `html`,
//! `head` and `vxml:*` containers whose children are all elements are laid
//! out one child per line, with `vxml` nesting indented by two spaces.

use super::encoding::Charset;
use super::parse::{is_raw_text, is_void};
use super::{DomTree, Element, Node};

pub struct XmlWriter<'c> {
    out: String,
    charset: &'c Charset,
}

impl<'c> XmlWriter<'c> {
    pub fn new(charset: &'c Charset) -> Self {
        Self {
            out: String::new(),
            charset,
        }
    }

    pub fn raw(&mut self, s: &str) {
        self.out.push_str(s);
    }

    pub fn attr(&mut self, name: &str, value: &str) {
        self.attr_after(" ", name, value);
    }

    /// Write an attribute preceded by `sep` instead of a single space.
    pub fn attr_after(&mut self, sep: &str, name: &str, value: &str) {
        self.out.push_str(sep);
        self.out.push_str(name);
        self.out.push_str("=\"");
        escape_attr(value, &mut self.out);
        self.out.push('"');
    }

    pub fn element(&mut self, el: &Element, level: usize) {
        self.out.push('<');
        self.out.push_str(&el.name);
        for a in &el.attrs {
            self.attr(&a.name, &a.value);
        }
        self.close_start_and_children(el, level);
    }

    /// Finish a start tag whose name and attributes were already written,
    /// then write the children and the end tag.
    pub fn close_start_and_children(&mut self, el: &Element, level: usize) {
        if el.children.is_empty() && (is_void(&el.name) || el.name.contains(':')) {
            self.out.push_str("/>");
            return;
        }
        self.out.push('>');
        if is_block(el) {
            let child_level = if el.prefix() == Some("vxml") { level + 1 } else { level };
            for child in el.child_elements() {
                self.out.push('\n');
                indent(&mut self.out, child_level);
                self.element(child, child_level);
            }
            self.out.push('\n');
            indent(&mut self.out, level);
        } else {
            let raw = is_raw_text(&el.name);
            for child in &el.children {
                match child {
                    Node::Element(e) => self.element(e, level),
                    Node::Text(t) if raw && needs_cdata(t) && self.charset.can_encode(t) => {
                        self.cdata(t)
                    }
                    Node::Text(t) => escape_text(t, &mut self.out),
                    Node::CData(t) if self.charset.can_encode(t) => self.cdata(t),
                    Node::CData(t) => escape_text(t, &mut self.out),
                }
            }
        }
        self.out.push_str("</");
        self.out.push_str(&el.name);
        self.out.push('>');
    }

    fn cdata(&mut self, text: &str) {
        self.out.push_str("<![CDATA[");
        self.out.push_str(&text.replace("]]>", "]]]]><![CDATA[>"));
        self.out.push_str("]]>");
    }

    pub fn into_string(self) -> String {
        self.out
    }
}

fn needs_cdata(text: &str) -> bool {
    text.contains(['<', '&', '>'])
}

fn is_block(el: &Element) -> bool {
    let container = matches!(el.name.as_str(), "html" | "head") || el.prefix() == Some("vxml");
    container
        && el.children.iter().any(|c| matches!(c, Node::Element(_)))
        && el.children.iter().all(|c| match c {
            Node::Element(_) => true,
            Node::Text(t) => t.trim().is_empty(),
            Node::CData(_) => false,
        })
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

pub(crate) fn escape_text(s: &str, out: &mut String) {
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
}

pub(crate) fn escape_attr(s: &str, out: &mut String) {
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\t' => out.push_str("&#9;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
}

/// Serialize the whole tree as XHTML markup (no XML declaration).
pub fn serialize_xhtml(doc: &DomTree) -> String {
    let mut w = XmlWriter::new(&doc.charset);
    w.element(&doc.root, 0);
    w.into_string()
}

/// Serialize a single element as UTF-8 XHTML.
pub fn write_element(el: &Element) -> String {
    let charset = Charset::utf8();
    let mut w = XmlWriter::new(&charset);
    w.element(el, 0);
    w.into_string()
}
