//! Text-mode X+V interpreter: runs the voice forms of an annotated page
//! against typed utterances and GUI edits, keeping both sides in sync.

mod load;
mod script;
mod step;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::dom::{DomTree, Element};
use crate::grammar::{JsgfGrammar, SemanticValue};

pub use load::load_machine;
pub use script::{parse_script, run_script, ScriptError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WalkError {
    #[error("malformed X+V document: {0}")]
    MalformedDocument(String),
    #[error("sync {field} -> {input} does not resolve")]
    DanglingSync { field: String, input: String },
    #[error("no input with id {0}")]
    UnknownInputId(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WalkEvent {
    Voice(String),
    Gui { input_id: String, value: String },
    Silence,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum FieldState {
    #[default]
    Unfilled,
    Filled(SemanticValue),
    Confirmed(SemanticValue),
}

impl FieldState {
    pub fn value(&self) -> Option<&SemanticValue> {
        match self {
            FieldState::Unfilled => None,
            FieldState::Filled(v) | FieldState::Confirmed(v) => Some(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Pending {
    #[default]
    None,
    Navigate(String),
    Submit {
        /// HTML form id.
        form_id: String,
        action: String,
        method: String,
        payload: Vec<(String, String)>,
    },
}

impl Pending {
    /// `none`, `navigate URL` or `submit FORM METHOD ACTION k=v&k=v`.
    pub fn render(&self) -> String {
        match self {
            Pending::None => "none".into(),
            Pending::Navigate(url) => format!("navigate {url}"),
            Pending::Submit {
                form_id,
                action,
                method,
                payload,
            } => {
                let pairs: Vec<String> = payload.iter().map(|(k, v)| format!("{k}={v}")).collect();
                format!("submit {form_id} {method} {action} {}", pairs.join("&"))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum PromptPart {
    Text(String),
    /// `<vxml:value expr="field"/>`
    Value(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum FieldRole {
    Input,
    Confirm { for_field: String },
    Submit { next: String, method: String },
    Navigation,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct FieldDef {
    pub name: String,
    pub form: usize,
    pub role: FieldRole,
    pub modal: bool,
    pub grammars: Vec<JsgfGrammar>,
    pub prompt: Vec<PromptPart>,
    pub noinput: String,
    pub nomatch: String,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct FormDef {
    pub id: String,
    /// Prompts of `vxml:block` elements, played when the form loads.
    pub blocks: Vec<String>,
}

/// A loaded X+V document mid-dialog.
#[derive(Debug, Clone, PartialEq)]
pub struct DialogMachine {
    pub(crate) doc: DomTree,
    pub(crate) forms: Vec<FormDef>,
    pub(crate) fields: Vec<FieldDef>,
    pub(crate) states: BTreeMap<String, FieldState>,
    /// Field name -> input id.
    pub(crate) sync: BTreeMap<String, String>,
    /// Radio and checkbox group members -> the synced group id.
    pub(crate) aliases: BTreeMap<String, String>,
    pub(crate) gui: BTreeMap<String, Vec<String>>,
    pub(crate) active: Option<usize>,
    pub(crate) log: Vec<String>,
    pub(crate) pending: Pending,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    pub prompts: Vec<String>,
    pub pending: Pending,
}

/// Field states, GUI mirror, prompt log and pending action, in stable order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub active: Option<String>,
    /// Input fields in document order.
    pub fields: Vec<(String, FieldState)>,
    pub gui: BTreeMap<String, Vec<String>>,
    pub prompts: Vec<String>,
    pub pending: Pending,
}

fn render_state(s: &FieldState) -> String {
    match s {
        FieldState::Unfilled => "unfilled".into(),
        FieldState::Filled(v) => format!("filled:{}", v.items().join("|")),
        FieldState::Confirmed(v) => format!("confirmed:{}", v.items().join("|")),
    }
}

impl Snapshot {
    /// Readable report.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "active field: {}", self.active.as_deref().unwrap_or("(none)"));
        for (name, state) in &self.fields {
            let _ = writeln!(out, "  {name}: {}", render_state(state));
        }
        for (id, values) in &self.gui {
            let _ = writeln!(out, "  gui {id}: {}", values.join(" | "));
        }
        let _ = writeln!(out, "prompts: {}", self.prompts.len());
        let _ = writeln!(out, "pending: {}", self.pending.render());
        out
    }

    /// One `key=value` per line: `active`, `field.<name>`, `gui.<id>`,
    /// `prompt.<n>` (from 1), `pending`. Multiple values are `|`-joined.
    pub fn render_kv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "active={}", self.active.as_deref().unwrap_or(""));
        for (name, state) in &self.fields {
            let _ = writeln!(out, "field.{name}={}", render_state(state));
        }
        for (id, values) in &self.gui {
            let _ = writeln!(out, "gui.{id}={}", values.join("|"));
        }
        for (i, p) in self.prompts.iter().enumerate() {
            let _ = writeln!(out, "prompt.{}={p}", i + 1);
        }
        let _ = writeln!(out, "pending={}", self.pending.render());
        out
    }
}

impl DialogMachine {
    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            active: self.active_field().map(str::to_string),
            fields: self
                .fields
                .iter()
                .filter(|f| f.role == FieldRole::Input)
                .map(|f| (f.name.clone(), self.states.get(&f.name).cloned().unwrap_or_default()))
                .collect(),
            gui: self.gui.clone(),
            prompts: self.log.clone(),
            pending: self.pending.clone(),
        }
    }

    pub fn active_field(&self) -> Option<&str> {
        self.active.map(|i| self.fields[i].name.as_str())
    }

    pub fn field_state(&self, name: &str) -> Option<&FieldState> {
        self.states.get(name)
    }

    pub fn gui_value(&self, input_id: &str) -> Option<&[String]> {
        self.gui.get(input_id).map(Vec::as_slice)
    }

    pub fn prompt_log(&self) -> &[String] {
        &self.log
    }

    pub fn pending(&self) -> &Pending {
        &self.pending
    }

    /// Voice form ids, navigation form included.
    pub fn form_ids(&self) -> Vec<&str> {
        self.forms.iter().map(|f| f.id.as_str()).collect()
    }

    /// Input field names (not confirmation, submit or navigation fields).
    pub fn input_fields(&self) -> Vec<&str> {
        self.fields
            .iter()
            .filter(|f| f.role == FieldRole::Input)
            .map(|f| f.name.as_str())
            .collect()
    }

    /// (field name, input id) pairs.
    pub fn sync_map(&self) -> &BTreeMap<String, String> {
        &self.sync
    }

    /// The page as currently loaded. Dynamic content can be simulated by
    /// editing it through [`DialogMachine::page_element_mut`].
    pub fn document(&self) -> &DomTree {
        &self.doc
    }

    pub fn page_element_mut(&mut self, id: &str) -> Option<&mut Element> {
        self.doc.find_by_id_mut(id)
    }
}
