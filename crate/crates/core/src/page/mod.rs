//! Page components, word harvesting, the dialog tree and entry ranking.

mod extract;
mod lexicon;
mod rank;
mod tree;

use std::collections::BTreeMap;

use url::Url;

pub use extract::{extract_components, extract_words, visible_text};
pub(crate) use extract::base_url;
pub use lexicon::{LexiconError, ShortcutLexicon};
pub use rank::{rank_entries, RankedEntry};
pub use tree::{build_dialog_tree, build_weighted_dialog_tree, DialogNode, DialogTree, NodeKind};

/// Lowercase word counts.
pub type WordBag = BTreeMap<String, usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectOption {
    /// Whitespace-collapsed option text, the value voice input resolves to.
    pub text: String,
    pub value: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChoiceKind {
    Radio,
    Checkbox,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceOption {
    /// Id of the radio or checkbox element.
    pub id: String,
    pub label: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ComponentKind {
    SelectionInput {
        name: Option<String>,
        options: Vec<SelectOption>,
        multiple: bool,
    },
    TextInput {
        name: Option<String>,
        suggestions: Vec<String>,
        /// Password fields: never voiced.
        secret: bool,
    },
    /// Radio buttons or checkboxes sharing a name; the id is the first
    /// member's.
    ChoiceGroup {
        name: Option<String>,
        kind: ChoiceKind,
        options: Vec<ChoiceOption>,
    },
    Link {
        href: Url,
        text: String,
    },
    SubmitControl {
        form_id: String,
        label: String,
    },
    OutputRegion {
        heading: String,
        body: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageComponent {
    pub id: String,
    pub doc_order: usize,
    /// Enclosing (or `form`-attribute) HTML form id.
    pub form: Option<String>,
    pub kind: ComponentKind,
}

impl PageComponent {
    /// Selection inputs, text inputs and choice groups.
    pub fn is_field(&self) -> bool {
        matches!(
            self.kind,
            ComponentKind::SelectionInput { .. }
                | ComponentKind::TextInput { .. }
                | ComponentKind::ChoiceGroup { .. }
        )
    }

    pub fn name(&self) -> Option<&str> {
        match &self.kind {
            ComponentKind::SelectionInput { name, .. }
            | ComponentKind::TextInput { name, .. }
            | ComponentKind::ChoiceGroup { name, .. } => name.as_deref(),
            _ => None,
        }
    }

    /// The text a user would read for this entry.
    pub fn visible_text(&self) -> String {
        match &self.kind {
            ComponentKind::Link { text, .. } => text.clone(),
            ComponentKind::SubmitControl { label, .. } => label.clone(),
            ComponentKind::OutputRegion { heading, body } if body.is_empty() => heading.clone(),
            ComponentKind::OutputRegion { heading, body } => format!("{heading} {body}"),
            ComponentKind::SelectionInput { options, .. } => options
                .iter()
                .map(|o| o.text.as_str())
                .collect::<Vec<_>>()
                .join(" "),
            ComponentKind::ChoiceGroup { options, .. } => options
                .iter()
                .map(|o| o.label.as_str())
                .collect::<Vec<_>>()
                .join(" "),
            ComponentKind::TextInput { suggestions, .. } => suggestions.join(" "),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormInfo {
    pub id: String,
    /// Absolute action URL (the page itself when the attribute is absent).
    pub action: Url,
    /// Lowercase, `get` unless the source says `post`.
    pub method: String,
    /// Field and submit-control component ids, in document order.
    pub members: Vec<String>,
    /// Number of components that precede the form's start tag.
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageModel {
    pub page_url: Url,
    /// Base for resolving relative references (`<base href>` or the page).
    pub base_url: Url,
    pub title: String,
    pub components: Vec<PageComponent>,
    pub forms: Vec<FormInfo>,
    pub words: WordBag,
}

impl PageModel {
    pub fn component(&self, id: &str) -> Option<&PageComponent> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn form(&self, id: &str) -> Option<&FormInfo> {
        self.forms.iter().find(|f| f.id == id)
    }

    pub fn fields(&self) -> impl Iterator<Item = &PageComponent> {
        self.components.iter().filter(|c| c.is_field())
    }

    pub fn links(&self) -> impl Iterator<Item = &PageComponent> {
        self.components
            .iter()
            .filter(|c| matches!(c.kind, ComponentKind::Link { .. }))
    }

    pub fn regions(&self) -> impl Iterator<Item = &PageComponent> {
        self.components
            .iter()
            .filter(|c| matches!(c.kind, ComponentKind::OutputRegion { .. }))
    }
}
