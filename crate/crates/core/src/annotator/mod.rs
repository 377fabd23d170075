//! X+V assembly: voice forms, verification units, sync bindings, link
//! rewriting and serialization.

mod build;
mod links;
mod output;

use thiserror::Error;

use crate::dom::{Charset, DomTree, IdReport, AUTO_ID_PREFIX};
use crate::grammar::{yes_no_grammar, JsgfGrammar};
use crate::page::{ComponentKind, PageComponent};

pub use build::{annotate_document, error_document, plan_voice, ERROR_FORM_ID, VoiceFormPlan, VoicePlan};
pub use links::{proxied_url, rewrite_links, unrewrite_links};
pub use output::{serialize_xv, strip_voice_markup};

pub const XHTML_NS: &str = "http://www.w3.org/1999/xhtml";
pub const VXML_NS: &str = "http://www.w3.org/2001/vxml";
pub const EV_NS: &str = "http://www.w3.org/2001/xml-events";
pub const XV_NS: &str = "http://www.voicexml.org/2002/xhtml+voice";
pub const DOCTYPE_PUBLIC_ID: &str = "-//VoiceXML Forum//DTD XHTML+Voice 1.2//EN";
pub const DOCTYPE_SYSTEM_ID: &str =
    "http://www.voicexml.org/specs/multimodal/x+v/12/dtd/xhtml+voice12.dtd";
/// Content type of annotated responses (the charset parameter is appended).
pub const XV_CONTENT_TYPE: &str = "application/xhtml+xml";

pub const NAVIGATION_FORM_ID: &str = "voice_navigation";
pub const NAVIGATION_FIELD: &str = "voice_navigation_choice";
pub const CONFIRM_SUFFIX: &str = "_confirm";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnnotateError {
    #[error("component {0} cannot be voiced")]
    NotVoiceEligible(String),
    #[error("sync target {0} is not in the document")]
    DanglingTarget(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnotateConfig {
    /// Emit a yes/no confirmation after each field (default on).
    pub verification: bool,
    /// Output charset; the source's charset when absent.
    pub encoding_override: Option<Charset>,
}

impl Default for AnnotateConfig {
    fn default() -> Self {
        Self {
            verification: true,
            encoding_override: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VoiceField {
    pub field_name: String,
    pub target_input_id: String,
    pub modal: bool,
    pub grammar: JsgfGrammar,
    pub prompt: String,
    pub bargein: bool,
    pub noinput: String,
    pub nomatch: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationUnit {
    pub for_field: String,
    pub confirm_field_name: String,
    pub grammar: JsgfGrammar,
    /// `{value}` is replaced by the spoken form of the field's value.
    pub prompt_template: String,
    pub noinput: String,
    pub nomatch: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyncBinding {
    /// `#` followed by the voice field name.
    pub field_ref: String,
    pub input_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedComponent {
    pub id: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnnotationReport {
    /// Input ids that received a voice field.
    pub voiced: Vec<String>,
    pub skipped: Vec<SkippedComponent>,
    pub ids: IdReport,
    /// The input was already X+V and is returned unchanged.
    pub passthrough: bool,
    pub notes: Vec<String>,
}

impl AnnotationReport {
    /// Human-readable summary, one item per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if self.passthrough {
            out.push_str("passthrough: input is already X+V\n");
        }
        for id in &self.voiced {
            out.push_str(&format!("voiced: {id}\n"));
        }
        for s in &self.skipped {
            out.push_str(&format!("skipped: {} ({})\n", s.id, s.reason));
        }
        for (path, id) in &self.ids.assigned {
            out.push_str(&format!("id assigned: {id} at {path}\n"));
        }
        for (orig, renamed) in &self.ids.collisions {
            out.push_str(&format!("id renamed: {orig} -> {renamed}\n"));
        }
        for note in &self.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedDocument {
    pub doc: DomTree,
    pub report: AnnotationReport,
}

pub fn field_name_for(input_id: &str) -> String {
    format!("voice_{input_id}_name")
}

/// Split a name or id on `_`, `-`, whitespace and lower-to-upper case
/// changes, lowercased and space-joined.
pub fn humanize(raw: &str) -> String {
    let mut words: Vec<String> = Vec::new();
    let mut current = String::new();
    let mut prev_lower = false;
    for c in raw.chars() {
        if c == '_' || c == '-' || c.is_whitespace() || c == '.' {
            if !current.is_empty() {
                words.push(std::mem::take(&mut current));
            }
            prev_lower = false;
            continue;
        }
        if c.is_uppercase() && prev_lower && !current.is_empty() {
            words.push(std::mem::take(&mut current));
        }
        prev_lower = c.is_lowercase() || c.is_ascii_digit();
        current.extend(c.to_lowercase());
    }
    if !current.is_empty() {
        words.push(current);
    }
    words.join(" ")
}

fn prompt_for(c: &PageComponent) -> String {
    let label = match c.name().map(str::trim).filter(|n| !n.is_empty()) {
        Some(name) => humanize(name),
        None if c.id.starts_with(AUTO_ID_PREFIX) => String::new(),
        None => humanize(&c.id),
    };
    if label.is_empty() {
        "Please say your selection.".to_string()
    } else {
        format!("Please say the {label}.")
    }
}

pub fn noinput_text(prompt: &str) -> String {
    format!("Sorry, I did not hear you. {prompt}")
}

pub fn nomatch_text(prompt: &str) -> String {
    format!("Sorry, I did not understand you. {prompt}")
}

/// Voice field for a selection input, choice group or text input.
pub fn make_voice_field(c: &PageComponent, g: JsgfGrammar) -> Result<VoiceField, AnnotateError> {
    let modal = match &c.kind {
        ComponentKind::SelectionInput { .. } | ComponentKind::ChoiceGroup { .. } => true,
        ComponentKind::TextInput { secret: false, .. } => false,
        _ => return Err(AnnotateError::NotVoiceEligible(c.id.clone())),
    };
    let prompt = prompt_for(c);
    Ok(VoiceField {
        field_name: field_name_for(&c.id),
        target_input_id: c.id.clone(),
        modal,
        grammar: g,
        noinput: noinput_text(&prompt),
        nomatch: nomatch_text(&prompt),
        prompt,
        bargein: true,
    })
}

pub const CONFIRM_TEMPLATE: &str = "You said {value}. Is that correct?";
pub const YES_NO_PROMPT: &str = "Please say yes or no.";

pub fn make_verification_unit(f: &VoiceField) -> VerificationUnit {
    VerificationUnit {
        for_field: f.field_name.clone(),
        confirm_field_name: format!("{}{CONFIRM_SUFFIX}", f.field_name),
        grammar: yes_no_grammar(),
        prompt_template: CONFIRM_TEMPLATE.to_string(),
        noinput: noinput_text(YES_NO_PROMPT),
        nomatch: nomatch_text(YES_NO_PROMPT),
    }
}

pub fn make_sync(f: &VoiceField, doc: &DomTree) -> Result<SyncBinding, AnnotateError> {
    if doc.find_by_id(&f.target_input_id).is_none() {
        return Err(AnnotateError::DanglingTarget(f.target_input_id.clone()));
    }
    Ok(SyncBinding {
        field_ref: format!("#{}", f.field_name),
        input_id: f.target_input_id.clone(),
    })
}


#[cfg(test)]
mod error_page_tests {
    use super::*;
    use crate::dom::is_well_formed;
    use crate::walker::load_machine;

    #[test]
    fn error_page_is_spoken_xv() {
        let bytes = serialize_xv(&error_document("Bad gateway", "The page returned status 404 <Not Found>."));
        is_well_formed(&bytes).unwrap();
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert!(text.contains(DOCTYPE_PUBLIC_ID));
        assert!(text.contains("xmlns:vxml=\"http://www.w3.org/2001/vxml\""));
        let m = load_machine(&bytes).unwrap();
        assert_eq!(
            m.prompt_log(),
            ["Bad gateway. The page returned status 404 <Not Found>."]
        );
    }
}
