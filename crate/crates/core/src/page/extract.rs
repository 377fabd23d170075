use std::collections::{HashMap, HashSet};

use url::Url;

use super::{
    ChoiceKind, ChoiceOption, ComponentKind, FormInfo, PageComponent, PageModel, SelectOption,
    WordBag,
};
use crate::dom::{collapse_whitespace, extract_text, text_words, DomTree, Element, Node};

/// Elements whose boundaries do not separate words.
const INLINE: &[&str] = &[
    "a", "abbr", "b", "bdi", "bdo", "big", "cite", "code", "data", "dfn", "em", "font", "i",
    "kbd", "label", "mark", "q", "s", "samp", "small", "span", "strike", "strong", "sub", "sup",
    "time", "tt", "u", "var",
];

const SKIPPED_LINK_SCHEMES: &[&str] = &["javascript", "mailto", "tel", "data", "about", "vbscript"];

fn is_heading(name: &str) -> bool {
    matches!(name, "h1" | "h2" | "h3" | "h4" | "h5" | "h6")
}

fn is_inline(name: &str) -> bool {
    INLINE.contains(&name) || name.contains(':')
}

fn push_text(el: &Element, out: &mut String) {
    if matches!(el.name.as_str(), "script" | "style") {
        return;
    }
    let block = !is_inline(&el.name);
    if block {
        out.push(' ');
    }
    for child in &el.children {
        match child {
            Node::Element(e) => push_text(e, out),
            Node::Text(t) | Node::CData(t) => out.push_str(t),
        }
    }
    if block {
        out.push(' ');
    }
}

/// Text content like `extract_text`, but with block-level element
/// boundaries treated as word breaks.
pub fn visible_text(el: &Element) -> String {
    let mut raw = String::new();
    push_text(el, &mut raw);
    collapse_whitespace(&raw)
}

/// Every word of the document's visible text (title included), lowercased.
pub fn extract_words(doc: &DomTree) -> WordBag {
    let mut bag = WordBag::new();
    for word in text_words(&visible_text(&doc.root)) {
        *bag.entry(word).or_insert(0) += 1;
    }
    bag
}

struct Walker<'a> {
    page_url: &'a Url,
    base: &'a Url,
    form_ids: HashSet<String>,
    labels: HashMap<String, String>,
    datalists: HashMap<String, Vec<String>>,
    components: Vec<PageComponent>,
    groups: HashMap<(Option<String>, String, bool), usize>,
    forms: Vec<FormInfo>,
    region: Option<(usize, String)>,
}

impl Walker<'_> {
    fn push(&mut self, id: &str, form: Option<&str>, kind: ComponentKind) -> usize {
        self.components.push(PageComponent {
            id: id.to_string(),
            doc_order: self.components.len(),
            form: form.map(str::to_string),
            kind,
        });
        self.components.len() - 1
    }

    fn region_text(&mut self, s: &str) {
        if let Some((_, body)) = &mut self.region {
            body.push_str(s);
        }
    }

    fn close_region(&mut self) {
        if let Some((index, body)) = self.region.take() {
            if let ComponentKind::OutputRegion { body: b, .. } = &mut self.components[index].kind {
                *b = collapse_whitespace(&body);
            }
        }
    }

    fn form_of<'f>(&self, el: &'f Element, enclosing: Option<&'f str>) -> Option<&'f str> {
        match el.attr("form") {
            Some(f) if self.form_ids.contains(f) => Some(f),
            _ => enclosing,
        }
    }

    fn walk<'d>(&mut self, el: &'d Element, form: Option<&'d str>, label: Option<&str>) {
        let name = el.name.as_str();
        if matches!(name, "script" | "style" | "template") {
            return;
        }
        if is_heading(name) {
            if let Some(id) = el.id() {
                self.close_region();
                let heading = extract_text(el);
                let index = self.push(
                    id,
                    None,
                    ComponentKind::OutputRegion {
                        heading,
                        body: String::new(),
                    },
                );
                self.region = Some((index, String::new()));
            }
            return;
        }
        let block = !is_inline(name);
        if block {
            self.region_text(" ");
        }
        let mut descend = true;
        let mut form = form;
        let mut label_text: Option<String> = None;
        match name {
            "form" => {
                if let Some(id) = el.id() {
                    self.forms.push(FormInfo {
                        id: id.to_string(),
                        action: el
                            .attr("action")
                            .map(str::trim)
                            .filter(|a| !a.is_empty())
                            .and_then(|a| self.base.join(a).ok())
                            .unwrap_or_else(|| self.page_url.clone()),
                        method: match el.attr("method").map(|m| m.trim().to_ascii_lowercase()) {
                            Some(m) if m == "post" => m,
                            _ => "get".to_string(),
                        },
                        members: Vec::new(),
                        position: self.components.len(),
                    });
                    form = Some(id);
                }
            }
            "label" => label_text = Some(extract_text(el)),
            "select" => {
                descend = false;
                if let Some(id) = el.id() {
                    let options = el
                        .descendants()
                        .filter(|d| d.name == "option")
                        .filter_map(|o| {
                            let value = o.attr("value").map(str::to_string);
                            let text = Some(extract_text(o))
                                .filter(|t| !t.is_empty())
                                .or_else(|| o.attr("label").map(collapse_whitespace))
                                .filter(|t| !t.is_empty())
                                .or_else(|| value.as_deref().map(collapse_whitespace))
                                .filter(|t| !t.is_empty())?;
                            Some(SelectOption { text, value })
                        })
                        .collect();
                    let f = self.form_of(el, form);
                    self.push(
                        id,
                        f,
                        ComponentKind::SelectionInput {
                            name: el.attr("name").map(str::to_string),
                            options,
                            multiple: el.has_attr("multiple"),
                        },
                    );
                }
            }
            "textarea" => {
                descend = false;
                if let Some(id) = el.id() {
                    let f = self.form_of(el, form);
                    self.push(
                        id,
                        f,
                        ComponentKind::TextInput {
                            name: el.attr("name").map(str::to_string),
                            suggestions: Vec::new(),
                            secret: false,
                        },
                    );
                }
            }
            "input" => self.input(el, form, label),
            "button" => {
                descend = false;
                let kind = el.attr("type").unwrap_or("submit").trim().to_ascii_lowercase();
                let f = self.form_of(el, form);
                if let (Some(id), Some(f), "submit") = (el.id(), f, kind.as_str()) {
                    let label = Some(extract_text(el))
                        .filter(|t| !t.is_empty())
                        .or_else(|| el.attr("value").map(collapse_whitespace))
                        .filter(|t| !t.is_empty())
                        .unwrap_or_else(|| "Submit".to_string());
                    self.push(
                        id,
                        Some(f),
                        ComponentKind::SubmitControl {
                            form_id: f.to_string(),
                            label,
                        },
                    );
                }
                self.region_text(&extract_text(el));
            }
            "a" => {
                if let (Some(id), Some(href)) = (el.id(), el.attr("href")) {
                    if let Some(href) = self.link_target(href) {
                        let text = link_text(el);
                        self.push(id, None, ComponentKind::Link { href, text });
                    }
                }
            }
            _ => {}
        }
        if descend {
            let label = label_text.as_deref().or(label);
            for child in &el.children {
                match child {
                    Node::Element(e) => self.walk(e, form, label),
                    Node::Text(t) | Node::CData(t) => self.region_text(t),
                }
            }
        }
        if block {
            self.region_text(" ");
        }
    }

    fn input(&mut self, el: &Element, form: Option<&str>, label: Option<&str>) {
        let Some(id) = el.id() else {
            return;
        };
        let form = self.form_of(el, form);
        let kind = el.attr("type").unwrap_or("text").trim().to_ascii_lowercase();
        let name = el.attr("name").map(str::to_string);
        match kind.as_str() {
            "hidden" | "file" | "reset" | "button" => {}
            "submit" | "image" => {
                if let Some(f) = form {
                    let label = el
                        .attr("value")
                        .or_else(|| el.attr("alt"))
                        .map(collapse_whitespace)
                        .filter(|t| !t.is_empty())
                        .unwrap_or_else(|| "Submit".to_string());
                    self.push(
                        id,
                        Some(f),
                        ComponentKind::SubmitControl {
                            form_id: f.to_string(),
                            label,
                        },
                    );
                }
            }
            "radio" | "checkbox" => {
                let checkbox = kind == "checkbox";
                let value = el.attr("value").unwrap_or("on").to_string();
                let option = ChoiceOption {
                    id: id.to_string(),
                    label: self
                        .labels
                        .get(id)
                        .cloned()
                        .or_else(|| label.map(str::to_string))
                        .filter(|l| !l.is_empty())
                        .unwrap_or_else(|| collapse_whitespace(&value)),
                    value,
                };
                let key_name = name.clone().unwrap_or_else(|| format!("#{id}"));
                let key = (form.map(str::to_string), key_name, checkbox);
                if let Some(&index) = self.groups.get(&key) {
                    if let ComponentKind::ChoiceGroup { options, .. } = &mut self.components[index].kind {
                        options.push(option);
                    }
                } else {
                    let index = self.push(
                        id,
                        form,
                        ComponentKind::ChoiceGroup {
                            name,
                            kind: if checkbox { ChoiceKind::Checkbox } else { ChoiceKind::Radio },
                            options: vec![option],
                        },
                    );
                    self.groups.insert(key, index);
                }
            }
            _ => {
                let suggestions = el
                    .attr("list")
                    .and_then(|l| self.datalists.get(l))
                    .cloned()
                    .unwrap_or_default();
                self.push(
                    id,
                    form,
                    ComponentKind::TextInput {
                        name,
                        suggestions,
                        secret: kind == "password",
                    },
                );
            }
        }
    }

    /// Absolute target of a navigable link, or `None` for script, mail and
    /// same-document references.
    fn link_target(&self, href: &str) -> Option<Url> {
        let href = href.trim();
        if href.is_empty() || href.starts_with('#') {
            return None;
        }
        let url = self.base.join(href).ok()?;
        if SKIPPED_LINK_SCHEMES.contains(&url.scheme()) {
            return None;
        }
        let mut bare = url.clone();
        bare.set_fragment(None);
        let mut page = self.page_url.clone();
        page.set_fragment(None);
        if url.fragment().is_some() && bare == page {
            return None;
        }
        Some(url)
    }
}

fn link_text(a: &Element) -> String {
    let text = extract_text(a);
    if !text.is_empty() {
        return text;
    }
    a.attr("aria-label")
        .or_else(|| a.attr("title"))
        .map(collapse_whitespace)
        .filter(|t| !t.is_empty())
        .or_else(|| {
            a.descendants()
                .filter(|d| d.name == "img")
                .find_map(|img| img.attr("alt").map(collapse_whitespace).filter(|t| !t.is_empty()))
        })
        .unwrap_or_default()
}

/// Base URL for relative references: `<base href>` if present, else the page.
pub(crate) fn base_url(doc: &DomTree, page_url: &Url) -> Url {
    doc.head()
        .child_elements()
        .find(|e| e.name == "base")
        .and_then(|b| b.attr("href"))
        .and_then(|h| page_url.join(h.trim()).ok())
        .unwrap_or_else(|| page_url.clone())
}

/// Collect the page's interactive components in document order.
///
/// Expects `ensure_ids` to have run: elements without an id are ignored.
pub fn extract_components(doc: &DomTree, page_url: &Url) -> PageModel {
    let base = base_url(doc, page_url);
    let mut labels = HashMap::new();
    let mut datalists = HashMap::new();
    let mut form_ids = HashSet::new();
    for el in doc.body().descendants() {
        match el.name.as_str() {
            "label" => {
                if let Some(target) = el.attr("for") {
                    labels.entry(target.to_string()).or_insert_with(|| extract_text(el));
                }
            }
            "datalist" => {
                if let Some(id) = el.id() {
                    let values = el
                        .descendants()
                        .filter(|o| o.name == "option")
                        .filter_map(|o| {
                            o.attr("value")
                                .map(collapse_whitespace)
                                .filter(|v| !v.is_empty())
                                .or_else(|| Some(extract_text(o)).filter(|t| !t.is_empty()))
                        })
                        .collect();
                    datalists.entry(id.to_string()).or_insert(values);
                }
            }
            "form" => {
                if let Some(id) = el.id() {
                    form_ids.insert(id.to_string());
                }
            }
            _ => {}
        }
    }
    let mut w = Walker {
        page_url,
        base: &base,
        form_ids,
        labels,
        datalists,
        components: Vec::new(),
        groups: HashMap::new(),
        forms: Vec::new(),
        region: None,
    };
    w.walk(doc.body(), None, None);
    w.close_region();

    let mut forms = w.forms;
    for c in &w.components {
        let member = c.is_field() || matches!(c.kind, ComponentKind::SubmitControl { .. });
        if let (true, Some(f)) = (member, &c.form) {
            if let Some(info) = forms.iter_mut().find(|i| &i.id == f) {
                info.members.push(c.id.clone());
            }
        }
    }
    let title = doc
        .head()
        .child_elements()
        .find(|e| e.name == "title")
        .map(extract_text)
        .unwrap_or_default();
    PageModel {
        page_url: page_url.clone(),
        base_url: base.clone(),
        title,
        components: w.components,
        forms,
        words: extract_words(doc),
    }
}
