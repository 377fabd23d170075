//! Tag-soup HTML parser.
//!
//! Recovery policy: `html`/`head`/`body` are synthesized, `p`, `li`,
//! `option`, table rows and cells are closed implicitly, nested `form`
//! start tags are ignored (their controls belong to the outer form), stray
//! end tags are dropped, comments and doctypes are discarded. Names are
//! normalized so that every tree serializes to well-formed XML.

use super::encoding::{sniff_declared, Charset};
use super::{entities, Attribute, DomError, DomTree, Element, Node};

/// Open elements beyond this depth are inserted but not entered; their
/// content becomes sibling content.
pub const MAX_DEPTH: usize = 256;

/// Prefixes owned by the voice annotation. Source markup never gets to use
/// them.
pub(crate) const RESERVED_PREFIXES: &[&str] = &["vxml", "ev", "xv"];

const VOID: &[&str] = &[
    "area", "base", "basefont", "bgsound", "br", "col", "embed", "frame", "hr", "img", "input",
    "keygen", "link", "meta", "param", "source", "track", "wbr",
];

const RAW_TEXT: &[&str] = &["script", "style", "xmp", "iframe", "noembed", "noframes"];
const ESCAPABLE_RAW_TEXT: &[&str] = &["textarea", "title"];

const BOOLEAN_ATTRS: &[&str] = &[
    "checked", "compact", "declare", "defer", "disabled", "ismap", "multiple", "nohref",
    "noresize", "noshade", "nowrap", "readonly", "selected",
];

const HEAD_CONTENT: &[&str] = &[
    "title", "meta", "link", "style", "script", "base", "noscript",
];

const CLOSES_P: &[&str] = &[
    "address", "article", "aside", "blockquote", "center", "details", "dialog", "dir", "div",
    "dl", "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5",
    "h6", "header", "hgroup", "hr", "main", "menu", "nav", "ol", "p", "pre", "section",
    "summary", "table", "ul", "li", "dd", "dt", "listing", "xmp", "plaintext",
];

const BUTTON_SCOPE: &[&str] = &[
    "applet", "caption", "html", "table", "td", "th", "marquee", "object", "template", "button",
];

const HEADINGS: &[&str] = &["h1", "h2", "h3", "h4", "h5", "h6"];

pub(crate) fn is_void(name: &str) -> bool {
    VOID.contains(&name)
}

pub(crate) fn is_raw_text(name: &str) -> bool {
    RAW_TEXT.contains(&name)
}

/// Parse HTML bytes into a tree. Never fails on malformed markup; the only
/// error is an encoding that cannot be decoded.
///
/// Charset priority: `encoding_hint`, then whatever the document declares,
/// then UTF-8.
pub fn parse_html(bytes: &[u8], encoding_hint: Option<&str>) -> Result<DomTree, DomError> {
    let charset = match encoding_hint {
        Some(label) => Charset::from_label(label)?,
        None => sniff_declared(bytes)?.unwrap_or_default(),
    };
    let text = preprocess(&charset.decode(bytes));
    let tokens = Tokenizer::new(&text).run();
    let mut builder = TreeBuilder::new();
    for token in tokens {
        builder.process(token);
    }
    Ok(DomTree {
        root: builder.finish(),
        charset,
    })
}

/// Newline normalization and removal of characters XML cannot carry.
pub(crate) fn preprocess(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\r' => {
                if chars.peek() == Some(&'\n') {
                    chars.next();
                }
                out.push('\n');
            }
            '\u{feff}' if out.is_empty() => {}
            c => out.push(sanitize_char(c)),
        }
    }
    out
}

pub(crate) fn sanitize_char(c: char) -> char {
    match c {
        '\t' | '\n' | '\r' => c,
        '\u{0}'..='\u{1f}' | '\u{fffe}' | '\u{ffff}' => '\u{fffd}',
        c => c,
    }
}

fn sanitize_text(s: String) -> String {
    if s.chars().all(|c| sanitize_char(c) == c) {
        s
    } else {
        s.chars().map(sanitize_char).collect()
    }
}

#[derive(Debug)]
enum Token {
    Start {
        name: String,
        attrs: Vec<(String, String)>,
        self_closing: bool,
    },
    End {
        name: String,
    },
    Text(String),
}

struct Tokenizer<'a> {
    src: &'a str,
    pos: usize,
    tokens: Vec<Token>,
    text: String,
}

impl<'a> Tokenizer<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            src,
            pos: 0,
            tokens: Vec::new(),
            text: String::new(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn flush_text(&mut self) {
        if !self.text.is_empty() {
            let raw = std::mem::take(&mut self.text);
            self.tokens
                .push(Token::Text(sanitize_text(entities::decode(&raw, false))));
        }
    }

    fn run(mut self) -> Vec<Token> {
        while self.pos < self.src.len() {
            let rest = self.rest();
            let Some(lt) = rest.find('<') else {
                self.text.push_str(rest);
                self.pos = self.src.len();
                break;
            };
            self.text.push_str(&rest[..lt]);
            self.pos += lt;
            if !self.markup() {
                self.text.push('<');
                self.pos += 1;
            }
        }
        self.flush_text();
        self.tokens
    }

    /// Handle markup at `<`. Returns false when the `<` is literal text.
    fn markup(&mut self) -> bool {
        let rest = self.rest();
        let bytes = rest.as_bytes();
        let next = bytes.get(1).copied();
        match next {
            Some(b'!') => {
                self.flush_text();
                if let Some(comment) = rest.strip_prefix("<!--") {
                    let end = comment.find("-->").map_or(rest.len(), |e| 4 + e + 3);
                    self.pos += end;
                } else if let Some(body) = rest.strip_prefix("<![CDATA[") {
                    let (content, used) = match body.find("]]>") {
                        Some(e) => (&body[..e], 9 + e + 3),
                        None => (body, rest.len()),
                    };
                    self.tokens.push(Token::Text(content.to_string()));
                    self.pos += used;
                } else {
                    self.skip_past_gt();
                }
                true
            }
            Some(b'?') => {
                self.flush_text();
                self.skip_past_gt();
                true
            }
            Some(b'/') => match bytes.get(2) {
                Some(c) if c.is_ascii_alphabetic() => {
                    self.flush_text();
                    self.end_tag();
                    true
                }
                Some(b'>') => {
                    self.pos += 3;
                    true
                }
                Some(_) => {
                    self.flush_text();
                    self.skip_past_gt();
                    true
                }
                None => false,
            },
            Some(c) if c.is_ascii_alphabetic() => {
                self.flush_text();
                self.start_tag();
                true
            }
            _ => false,
        }
    }

    fn skip_past_gt(&mut self) {
        let rest = self.rest();
        self.pos += rest.find('>').map_or(rest.len(), |e| e + 1);
    }

    fn read_name(&mut self) -> String {
        let rest = self.rest();
        let end = rest
            .find(|c: char| c.is_whitespace() || c == '/' || c == '>')
            .unwrap_or(rest.len());
        self.pos += end;
        rest[..end].to_ascii_lowercase()
    }

    fn skip_ws(&mut self) {
        let rest = self.rest();
        let n = rest.len() - rest.trim_start().len();
        self.pos += n;
    }

    fn end_tag(&mut self) {
        self.pos += 2;
        let name = self.read_name();
        // Attributes on end tags are ignored.
        self.skip_past_gt();
        self.tokens.push(Token::End { name });
    }

    fn start_tag(&mut self) {
        let start = self.pos;
        self.pos += 1;
        let name = self.read_name();
        let mut attrs = Vec::new();
        let mut self_closing = false;
        loop {
            self.skip_ws();
            let rest = self.rest();
            match rest.as_bytes().first() {
                None => {
                    // EOF inside a tag: the tag is dropped.
                    let _ = start;
                    return;
                }
                Some(b'>') => {
                    self.pos += 1;
                    break;
                }
                Some(b'/') => {
                    self.pos += 1;
                    if self.rest().starts_with('>') {
                        self.pos += 1;
                        self_closing = true;
                        break;
                    }
                }
                Some(_) => {
                    if let Some(attr) = self.attribute() {
                        attrs.push(attr);
                    }
                }
            }
        }
        let raw = RAW_TEXT.contains(&name.as_str());
        let escapable = ESCAPABLE_RAW_TEXT.contains(&name.as_str());
        self.tokens.push(Token::Start {
            name: name.clone(),
            attrs,
            self_closing,
        });
        if (raw || escapable) && !self_closing {
            self.raw_content(&name, escapable);
        }
    }

    fn attribute(&mut self) -> Option<(String, String)> {
        let rest = self.rest();
        // A leading '=' is part of the name, as in browsers.
        let first = rest.chars().next()?;
        let tail = &rest[first.len_utf8()..];
        let end = first.len_utf8()
            + tail
                .find(|c: char| c.is_whitespace() || matches!(c, '/' | '>' | '='))
                .unwrap_or(tail.len());
        let name = rest[..end].to_ascii_lowercase();
        self.pos += end;
        self.skip_ws();
        if !self.rest().starts_with('=') {
            return Some((name, String::new()));
        }
        self.pos += 1;
        self.skip_ws();
        let rest = self.rest();
        let value = match rest.chars().next() {
            Some(q @ ('"' | '\'')) => {
                let inner = &rest[1..];
                let close = inner.find(q).unwrap_or(inner.len());
                self.pos += 1 + close + usize::from(close < inner.len());
                &inner[..close]
            }
            Some(_) => {
                let end = rest
                    .find(|c: char| c.is_whitespace() || c == '>')
                    .unwrap_or(rest.len());
                self.pos += end;
                &rest[..end]
            }
            None => "",
        };
        Some((name, sanitize_text(entities::decode(value, true))))
    }

    fn raw_content(&mut self, name: &str, escapable: bool) {
        let rest = self.rest();
        let close = format!("</{name}");
        let lower = rest.to_ascii_lowercase();
        let mut search = 0;
        let end = loop {
            match lower[search..].find(&close) {
                Some(i) => {
                    let at = search + i;
                    let after = lower.as_bytes().get(at + close.len());
                    if matches!(after, None | Some(b'>' | b'/' | b' ' | b'\t' | b'\n' | b'\x0c')) {
                        break Some(at);
                    }
                    search = at + close.len();
                }
                None => break None,
            }
        };
        let content_end = end.unwrap_or(rest.len());
        let content = &rest[..content_end];
        let text = if escapable {
            sanitize_text(entities::decode(content, false))
        } else {
            unwrap_cdata(content).unwrap_or_else(|| content.to_string())
        };
        if !text.is_empty() {
            self.tokens.push(Token::Text(text));
        }
        self.pos += content_end;
        if end.is_some() {
            self.end_tag();
        }
    }
}

/// Raw text that is exactly a run of CDATA sections (what the serializer
/// writes for script/style bodies) is unwrapped.
fn unwrap_cdata(content: &str) -> Option<String> {
    let mut rest = content;
    let mut out = String::new();
    if !rest.starts_with("<![CDATA[") {
        return None;
    }
    while !rest.is_empty() {
        let body = rest.strip_prefix("<![CDATA[")?;
        let end = body.find("]]>")?;
        out.push_str(&body[..end]);
        rest = &body[end + 3..];
    }
    Some(out)
}

enum Child {
    Elem(usize),
    Text(String),
}

struct BuildElem {
    name: String,
    attrs: Vec<Attribute>,
    children: Vec<Child>,
}

struct TreeBuilder {
    arena: Vec<BuildElem>,
    stack: Vec<usize>,
    in_body: bool,
    after_body: bool,
    ignored_forms: usize,
    /// Elements inserted but not entered at the depth cap, so their end
    /// tags do not close an ancestor.
    capped: Vec<String>,
}

const HTML: usize = 0;
const HEAD: usize = 1;
const BODY: usize = 2;

impl TreeBuilder {
    fn new() -> Self {
        let mk = |name: &str| BuildElem {
            name: name.to_string(),
            attrs: Vec::new(),
            children: Vec::new(),
        };
        let mut arena = vec![mk("html"), mk("head"), mk("body")];
        arena[HTML].children = vec![Child::Elem(HEAD), Child::Elem(BODY)];
        Self {
            arena,
            stack: vec![HTML, HEAD],
            in_body: false,
            after_body: false,
            ignored_forms: 0,
            capped: Vec::new(),
        }
    }

    fn current(&self) -> usize {
        *self.stack.last().expect("stack never empty")
    }

    fn name_of(&self, idx: usize) -> &str {
        &self.arena[idx].name
    }

    fn enter_body(&mut self) {
        if !self.in_body {
            self.in_body = true;
            self.stack = vec![HTML, BODY];
        }
    }

    fn process(&mut self, token: Token) {
        if self.after_body {
            match &token {
                Token::Text(t) if t.trim().is_empty() => return,
                Token::End { name } if name == "body" || name == "html" => return,
                _ => self.after_body = false,
            }
        }
        match token {
            Token::Text(text) => self.text(text),
            Token::Start {
                name,
                attrs,
                self_closing,
            } => self.start(name, attrs, self_closing),
            Token::End { name } => self.end(&name),
        }
    }

    fn text(&mut self, text: String) {
        if text.is_empty() {
            return;
        }
        let cur = self.current();
        if cur == HTML || cur == HEAD {
            let trimmed = text.trim_start();
            if trimmed.is_empty() {
                return;
            }
            self.enter_body();
            return self.append_text(trimmed.to_string());
        }
        self.append_text(text);
    }

    fn append_text(&mut self, text: String) {
        let cur = self.current();
        match self.arena[cur].children.last_mut() {
            Some(Child::Text(t)) => t.push_str(&text),
            _ => self.arena[cur].children.push(Child::Text(text)),
        }
    }

    fn merge_attrs(&mut self, idx: usize, attrs: Vec<(String, String)>) {
        let cleaned = self.clean_attrs(attrs, idx == HTML);
        for attr in cleaned {
            if !self.arena[idx].attrs.iter().any(|a| a.name == attr.name) {
                self.arena[idx].attrs.push(attr);
            }
        }
    }

    fn start(&mut self, name: String, attrs: Vec<(String, String)>, self_closing: bool) {
        match name.as_str() {
            "html" => return self.merge_attrs(HTML, attrs),
            "head" => {
                if !self.in_body {
                    self.merge_attrs(HEAD, attrs);
                }
                return;
            }
            "body" => {
                self.enter_body();
                return self.merge_attrs(BODY, attrs);
            }
            _ => {}
        }
        if !self.in_body && !HEAD_CONTENT.contains(&name.as_str()) {
            self.enter_body();
        }
        if self.in_body && !self.close_for_start(&name) {
            return;
        }
        let cleaned = self.clean_attrs(attrs, false);
        let name = self.clean_element_name(&name, &cleaned);
        let idx = self.arena.len();
        self.arena.push(BuildElem {
            name: name.clone(),
            attrs: cleaned,
            children: Vec::new(),
        });
        let parent = self.current();
        self.arena[parent].children.push(Child::Elem(idx));
        if self_closing || is_void(&name) {
            return;
        }
        if self.stack.len() < MAX_DEPTH {
            self.capped.clear();
            self.stack.push(idx);
        } else {
            self.capped.push(name);
        }
    }

    /// Apply implicit-close rules before inserting `name`. Returns false
    /// when the start tag itself is to be ignored.
    fn close_for_start(&mut self, name: &str) -> bool {
        if CLOSES_P.contains(&name) {
            self.close_in_scope("p", BUTTON_SCOPE);
        }
        match name {
            "form" => {
                if self.open_index("form", &[]).is_some() {
                    self.ignored_forms += 1;
                    return false;
                }
            }
            "li" => self.close_in_scope("li", &["ul", "ol", "table", "td", "th", "button"]),
            "dt" | "dd" => {
                for target in ["dt", "dd"] {
                    self.close_in_scope(target, &["dl", "table", "td", "th", "button"]);
                }
            }
            "option" => {
                if self.name_of(self.current()) == "option" {
                    self.stack.pop();
                }
            }
            "optgroup" => {
                if self.name_of(self.current()) == "option" {
                    self.stack.pop();
                }
                if self.name_of(self.current()) == "optgroup" {
                    self.stack.pop();
                }
            }
            "tr" => self.close_in_scope("tr", &["table", "thead", "tbody", "tfoot"]),
            "td" | "th" => {
                for target in ["td", "th"] {
                    self.close_in_scope(target, &["tr", "table"]);
                }
            }
            "thead" | "tbody" | "tfoot" => {
                for target in ["thead", "tbody", "tfoot"] {
                    self.close_in_scope(target, &["table"]);
                }
            }
            "a" => self.close_in_scope("a", &[]),
            "button" => self.close_in_scope("button", &[]),
            "select" => {
                if let Some(i) = self.open_index("select", &[]) {
                    self.stack.truncate(i);
                    return false;
                }
            }
            h if HEADINGS.contains(&h) && HEADINGS.contains(&self.name_of(self.current())) => {
                self.stack.pop();
            }
            _ => {}
        }
        true
    }

    /// Index into the stack of the nearest open `target`, searching down to
    /// (not past) any boundary element, never below body.
    fn open_index(&self, target: &str, boundaries: &[&str]) -> Option<usize> {
        for i in (2..self.stack.len()).rev() {
            let name = self.name_of(self.stack[i]);
            if name == target {
                return Some(i);
            }
            if boundaries.contains(&name) {
                return None;
            }
        }
        None
    }

    fn close_in_scope(&mut self, target: &str, boundaries: &[&str]) {
        if let Some(i) = self.open_index(target, boundaries) {
            self.stack.truncate(i);
        }
    }

    fn end(&mut self, name: &str) {
        match name {
            "html" | "body" => self.after_body = true,
            "head" => {
                if !self.in_body {
                    self.stack.truncate(2);
                }
            }
            "br" => self.start("br".to_string(), Vec::new(), false),
            "form" if self.ignored_forms > 0 => self.ignored_forms -= 1,
            _ => {
                if self.stack.len() >= MAX_DEPTH
                    && self.capped.last().is_some_and(|c| c == name || *c == sanitized_plain(name))
                {
                    self.capped.pop();
                    return;
                }
                for i in (2..self.stack.len()).rev() {
                    if self.arena[self.stack[i]].name == name
                        || self.arena[self.stack[i]].name == sanitized_plain(name)
                    {
                        self.stack.truncate(i);
                        return;
                    }
                }
            }
        }
    }

    fn prefix_in_scope(&self, prefix: &str, own: &[Attribute]) -> bool {
        let decl = format!("xmlns:{prefix}");
        own.iter().any(|a| a.name == decl)
            || self
                .stack
                .iter()
                .any(|&i| self.arena[i].attrs.iter().any(|a| a.name == decl))
    }

    fn clean_element_name(&self, raw: &str, own: &[Attribute]) -> String {
        let name = sanitize_name(raw);
        if let Some((prefix, _)) = name.split_once(':') {
            let ok = !RESERVED_PREFIXES.contains(&prefix)
                && prefix != "xml"
                && prefix != "xmlns"
                && self.prefix_in_scope(prefix, own);
            if !ok {
                return name.replace(':', "_");
            }
        }
        name
    }

    fn clean_attrs(&self, raw: Vec<(String, String)>, on_root: bool) -> Vec<Attribute> {
        let mut out: Vec<Attribute> = Vec::with_capacity(raw.len());
        // Declarations first so prefixed names on the same element resolve.
        let mut decls: Vec<Attribute> = Vec::new();
        for (name, value) in &raw {
            let name = sanitize_name(name);
            if let Some(prefix) = name.strip_prefix("xmlns:") {
                let keep = !value.is_empty()
                    && prefix != "xml"
                    && prefix != "xmlns"
                    && (on_root || !RESERVED_PREFIXES.contains(&prefix));
                if keep {
                    decls.push(Attribute {
                        name: name.clone(),
                        value: value.clone(),
                    });
                }
            }
        }
        for (name, value) in raw {
            let mut name = sanitize_name(&name);
            if name.starts_with("xmlns:") {
                if !decls.iter().any(|d| d.name == name) {
                    continue;
                }
            } else if let Some((prefix, local)) = name.split_once(':') {
                let ok = match prefix {
                    "xml" => matches!(local, "lang" | "space" | "base" | "id"),
                    "xmlns" => false,
                    p if RESERVED_PREFIXES.contains(&p) => false,
                    p => self.prefix_in_scope(p, &decls),
                };
                if !ok {
                    name = name.replace(':', "_");
                }
            }
            if out.iter().any(|a| a.name == name) {
                continue;
            }
            // Minimized booleans take the XHTML form `checked="checked"`.
            let value = if value.is_empty() && BOOLEAN_ATTRS.contains(&name.as_str()) {
                name.clone()
            } else {
                value
            };
            out.push(Attribute { name, value });
        }
        out
    }

    fn finish(self) -> Element {
        let TreeBuilder { mut arena, .. } = self;
        build(&mut arena, HTML)
    }
}

fn sanitized_plain(name: &str) -> String {
    sanitize_name(name).replace(':', "_")
}

/// Restrict a tag or attribute name to ASCII XML name characters. A single
/// interior colon survives; anything else invalid becomes `_`.
pub(crate) fn sanitize_name(raw: &str) -> String {
    let mut out: String = raw
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.' | ':') {
                c.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect();
    if out.is_empty() {
        out.push('_');
    }
    let colons = out.matches(':').count();
    if colons > 0 {
        let valid = colons == 1 && {
            let (p, l) = out.split_once(':').unwrap();
            !p.is_empty() && !l.is_empty() && name_start_ok(p) && name_start_ok(l)
        };
        if !valid {
            out = out.replace(':', "_");
        }
    }
    if !name_start_ok(&out) {
        out.insert(0, '_');
    }
    out
}

fn name_start_ok(s: &str) -> bool {
    s.chars()
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
}

fn build(arena: &mut Vec<BuildElem>, idx: usize) -> Element {
    let children = std::mem::take(&mut arena[idx].children);
    let mut out = Element {
        name: std::mem::take(&mut arena[idx].name),
        attrs: std::mem::take(&mut arena[idx].attrs),
        children: Vec::with_capacity(children.len()),
    };
    for child in children {
        match child {
            Child::Elem(i) => out.children.push(Node::Element(build(arena, i))),
            Child::Text(t) => out.children.push(Node::Text(t)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dom::serialize_xhtml;

    fn parse(s: &str) -> DomTree {
        parse_html(s.as_bytes(), None).unwrap()
    }

    fn body(s: &str) -> String {
        let doc = parse(s);
        let mut out = String::new();
        for child in &doc.body().children {
            if let Node::Element(e) = child {
                out.push_str(&crate::dom::write_element(e));
            } else if let Node::Text(t) = child {
                out.push_str(t);
            }
        }
        out
    }

    #[test]
    fn empty_input_is_a_skeleton() {
        let doc = parse("");
        assert_eq!(doc.root.name, "html");
        let names: Vec<_> = doc.root.child_elements().map(|e| e.name.as_str()).collect();
        assert_eq!(names, ["head", "body"]);
        assert!(doc.head().children.is_empty());
        assert!(doc.body().children.is_empty());
    }

    #[test]
    fn unclosed_paragraphs_become_siblings() {
        assert_eq!(body("<p>one<p>two"), "<p>one</p><p>two</p>");
    }

    #[test]
    fn head_elements_stay_in_head() {
        let doc = parse("<title>T</title><meta charset=utf-8><p>x");
        let head: Vec<_> = doc.head().child_elements().map(|e| e.name.as_str()).collect();
        assert_eq!(head, ["title", "meta"]);
        assert_eq!(body("<title>T</title><p>x"), "<p>x</p>");
    }

    #[test]
    fn nested_form_start_is_ignored() {
        assert_eq!(
            body("<form id=a><input name=x><form id=b><input name=y></form><input name=z></form>"),
            r#"<form id="a"><input name="x"/><input name="y"/><input name="z"/></form>"#
        );
    }

    #[test]
    fn options_close_each_other() {
        assert_eq!(
            body("<select><option>a<option>b</select>"),
            "<select><option>a</option><option>b</option></select>"
        );
    }

    #[test]
    fn script_content_is_raw() {
        let doc = parse("<script>if (a < b && c) {}</script>");
        let script = doc.elements().find(|e| e.name == "script").unwrap();
        assert_eq!(script.children, vec![Node::Text("if (a < b && c) {}".into())]);
    }

    #[test]
    fn names_are_made_xml_safe() {
        assert_eq!(
            body(r#"<div @click="go" :href="x" o:p="1" data-x=1>t</div>"#),
            r#"<div _click="go" _href="x" o_p="1" data-x="1">t</div>"#
        );
        assert_eq!(body("<o:p>x</o:p>"), "<o_p>x</o_p>");
        assert_eq!(body("<vxml:form>x</vxml:form>"), "<vxml_form>x</vxml_form>");
    }

    #[test]
    fn declared_prefix_survives() {
        assert_eq!(
            body(r##"<svg xmlns:xlink="http://www.w3.org/1999/xlink"><use xlink:href="#a"/></svg>"##),
            r##"<svg xmlns:xlink="http://www.w3.org/1999/xlink"><use xlink:href="#a"></use></svg>"##
        );
    }

    #[test]
    fn depth_is_capped() {
        let deep = "<div>".repeat(MAX_DEPTH * 2);
        let doc = parse(&deep);
        fn depth(e: &Element) -> usize {
            1 + e.child_elements().map(depth).max().unwrap_or(0)
        }
        assert!(depth(&doc.root) <= MAX_DEPTH + 1);
    }

    #[test]
    fn control_chars_are_replaced() {
        let doc = parse("<p>a\u{1}b&#0;</p>");
        assert_eq!(crate::dom::extract_text(doc.body()), "a\u{fffd}b\u{fffd}");
    }

    #[test]
    fn latin1_hint_decodes_bytes() {
        let doc = parse_html(b"<p>caf\xe9</p>", Some("iso-8859-1")).unwrap();
        assert_eq!(crate::dom::extract_text(doc.body()), "caf\u{e9}");
        assert_eq!(doc.charset.label(), "iso-8859-1");
    }

    #[test]
    fn unsupported_declared_encoding_errors() {
        let err = parse_html(b"<meta charset=x-nope><p>x", None).unwrap_err();
        assert!(matches!(err, DomError::EncodingUnsupported(_)));
    }

    #[test]
    fn serializer_output_reparses_identically() {
        let doc = parse("<ul><li>a<li>b</ul><table><tr><td>1<td>2<tr><td>3</table><script>a<b</script>");
        let text = serialize_xhtml(&doc);
        let again = parse(&text);
        assert_eq!(doc.root, again.root);
    }
}
