use std::collections::HashSet;

use url::Url;

use super::{
    make_sync, make_verification_unit, make_voice_field, nomatch_text, noinput_text,
    AnnotateConfig, AnnotatedDocument, AnnotationReport, SkippedComponent, VerificationUnit,
    VoiceField, EV_NS, NAVIGATION_FIELD, NAVIGATION_FORM_ID, VXML_NS, XHTML_NS, XV_NS,
    YES_NO_PROMPT,
};
use crate::dom::{Charset, DomTree, Element, Node};
use crate::grammar::{
    grammar_for_links, grammar_for_options, grammar_for_sections, sanitize_identifier,
    serialize_jsgf, shortcut_grammar, yes_no_grammar, JsgfGrammar, SpokenEntry,
};
use crate::page::{
    rank_entries, ComponentKind, DialogTree, NodeKind, PageComponent, PageModel, ShortcutLexicon,
};

pub const SUBMIT_PROMPT: &str = "Do you want to submit the form?";

#[derive(Debug, Clone, PartialEq)]
pub struct SubmitPlan {
    pub field_name: String,
    pub action: Url,
    pub method: String,
    pub grammar: JsgfGrammar,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VoiceFormPlan {
    pub id: String,
    /// The HTML form the fields belong to, if any.
    pub html_form: Option<String>,
    pub fields: Vec<VoiceField>,
    pub verifications: Vec<VerificationUnit>,
    pub submit: Option<SubmitPlan>,
}

/// Everything voice-related generated for a page, before it is turned
/// into markup.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VoicePlan {
    pub forms: Vec<VoiceFormPlan>,
    pub links: Option<JsgfGrammar>,
    pub shortcuts: Option<JsgfGrammar>,
    pub sections: Option<JsgfGrammar>,
    pub skipped: Vec<SkippedComponent>,
}

impl VoicePlan {
    /// Every grammar with the voice field it belongs to, in document order.
    pub fn grammars(&self) -> Vec<(String, &JsgfGrammar)> {
        let mut out = Vec::new();
        for form in &self.forms {
            for f in &form.fields {
                out.push((f.field_name.clone(), &f.grammar));
            }
            for v in &form.verifications {
                out.push((v.confirm_field_name.clone(), &v.grammar));
            }
            if let Some(s) = &form.submit {
                out.push((s.field_name.clone(), &s.grammar));
            }
        }
        for g in [&self.links, &self.shortcuts, &self.sections].into_iter().flatten() {
            out.push((NAVIGATION_FIELD.to_string(), g));
        }
        out
    }

    pub fn has_navigation(&self) -> bool {
        self.links.is_some() || self.shortcuts.is_some() || self.sections.is_some()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty() && !self.has_navigation()
    }
}

/// Grammar for a field component, or the reason it cannot be voiced.
fn field_grammar(
    c: &PageComponent,
    model: &PageModel,
    lexicon: &ShortcutLexicon,
) -> Result<JsgfGrammar, String> {
    let name = sanitize_identifier(c.name().map(str::trim).filter(|n| !n.is_empty()).unwrap_or(&c.id));
    let (options, multiple): (Vec<String>, bool) = match &c.kind {
        ComponentKind::SelectionInput { options, multiple, .. } => {
            if options.is_empty() {
                return Err("select has no options".into());
            }
            (options.iter().map(|o| o.text.clone()).collect(), *multiple)
        }
        ComponentKind::ChoiceGroup { options, kind, .. } => (
            options.iter().map(|o| o.label.clone()).collect(),
            *kind == crate::page::ChoiceKind::Checkbox,
        ),
        ComponentKind::TextInput { secret: true, .. } => {
            return Err("password input".into());
        }
        ComponentKind::TextInput { suggestions, .. } if !suggestions.is_empty() => {
            (suggestions.clone(), false)
        }
        ComponentKind::TextInput { .. } => {
            let words: Vec<String> = lexicon
                .by_weight()
                .into_iter()
                .filter(|(w, _)| model.words.contains_key(*w))
                .map(|(w, _)| w.to_string())
                .collect();
            if words.is_empty() {
                return Err("open text input without suggested values or shortcut words".into());
            }
            (words, false)
        }
        _ => return Err("not an input".into()),
    };
    grammar_for_options(&name, &options, multiple).map_err(|e| e.to_string())
}

fn unique(candidate: String, taken: &mut HashSet<String>) -> String {
    let mut id = candidate.clone();
    let mut k = 1;
    while taken.contains(&id) {
        k += 1;
        id = format!("{candidate}_{k}");
    }
    taken.insert(id.clone());
    id
}

/// Decide voice forms, fields and navigation grammars for a page.
pub fn plan_voice(
    doc: &DomTree,
    model: &PageModel,
    tree: &DialogTree,
    lexicon: &ShortcutLexicon,
    config: &AnnotateConfig,
) -> VoicePlan {
    let charset = config
        .encoding_override
        .as_ref()
        .unwrap_or(&doc.charset)
        .label()
        .to_string();
    let with_charset = |g: JsgfGrammar| g.with_charset(charset.clone());
    let mut taken: HashSet<String> = doc.elements().filter_map(|e| e.id().map(str::to_string)).collect();
    let mut plan = VoicePlan::default();

    let voice_field = |id: &str, plan: &mut VoicePlan| -> Option<VoiceField> {
        let c = model.component(id)?;
        match field_grammar(c, model, lexicon) {
            Ok(g) => make_voice_field(c, with_charset(g)).ok(),
            Err(reason) => {
                plan.skipped.push(SkippedComponent {
                    id: c.id.clone(),
                    reason,
                });
                None
            }
        }
    };

    let mut orphans: Option<usize> = None;
    for node in &tree.root.children {
        match node.kind {
            NodeKind::Form => {
                let fields: Vec<VoiceField> = node
                    .children
                    .iter()
                    .filter(|n| n.kind == NodeKind::Field)
                    .filter_map(|n| voice_field(&n.id, &mut plan))
                    .collect();
                if fields.is_empty() {
                    continue;
                }
                let id = unique(format!("{}_form", node.id), &mut taken);
                let info = model.form(&node.id);
                let submit = info.map(|info| SubmitPlan {
                    field_name: format!("{id}_submit"),
                    action: info.action.clone(),
                    method: info.method.clone(),
                    grammar: with_charset(yes_no_grammar()),
                });
                plan.forms.push(VoiceFormPlan {
                    id,
                    html_form: Some(node.id.clone()),
                    fields,
                    verifications: Vec::new(),
                    submit,
                });
            }
            NodeKind::Field => {
                let Some(field) = voice_field(&node.id, &mut plan) else {
                    continue;
                };
                match orphans {
                    Some(i) => plan.forms[i].fields.push(field),
                    None => {
                        let n = plan.forms.len() + 1;
                        let id = unique(format!("xv-form-{n}"), &mut taken);
                        orphans = Some(plan.forms.len());
                        plan.forms.push(VoiceFormPlan {
                            id,
                            html_form: None,
                            fields: vec![field],
                            verifications: Vec::new(),
                            submit: None,
                        });
                    }
                }
            }
            _ => {}
        }
    }
    if config.verification {
        for form in &mut plan.forms {
            form.verifications = form
                .fields
                .iter()
                .map(|f| {
                    let mut v = make_verification_unit(f);
                    v.grammar = with_charset(v.grammar);
                    v
                })
                .collect();
        }
    }

    let ranked = rank_entries(model, lexicon);
    let mut links = Vec::new();
    let mut sections = Vec::new();
    for entry in &ranked {
        let Some(c) = model.component(&entry.id) else {
            continue;
        };
        match &c.kind {
            ComponentKind::Link { text, .. } => {
                if crate::grammar::normalize_words(text).is_empty() {
                    plan.skipped.push(SkippedComponent {
                        id: c.id.clone(),
                        reason: "link has no speakable text".into(),
                    });
                } else {
                    links.push(SpokenEntry::new(&c.id, text));
                }
            }
            ComponentKind::OutputRegion { heading, .. } => {
                if crate::grammar::normalize_words(heading).is_empty() {
                    plan.skipped.push(SkippedComponent {
                        id: c.id.clone(),
                        reason: "heading has no speakable text".into(),
                    });
                } else {
                    sections.push(SpokenEntry::new(&c.id, heading));
                }
            }
            _ => {}
        }
    }
    let all: Vec<SpokenEntry> = ranked.iter().map(|e| SpokenEntry::new(&e.id, &e.text)).collect();
    plan.links = grammar_for_links(&links).map(with_charset);
    plan.sections = grammar_for_sections(&sections).map(with_charset);
    plan.shortcuts = shortcut_grammar(&all, lexicon).map(with_charset);
    plan
}

fn vxml(name: &str) -> Element {
    Element::new(format!("vxml:{name}"))
}

fn grammar_element(g: &JsgfGrammar) -> Element {
    let mut el = vxml("grammar");
    el.children.push(Node::CData(format!("\n{}", serialize_jsgf(g))));
    el
}

fn catches(noinput: &str, nomatch: &str) -> [Element; 2] {
    [
        vxml("catch").with_attr("event", "noinput").with_text(noinput),
        vxml("catch").with_attr("event", "nomatch").with_text(nomatch),
    ]
}

fn field_shell(name: &str, modal: bool) -> Element {
    vxml("field")
        .with_attr("name", name)
        .with_attr("xv:id", name)
        .with_attr("modal", if modal { "true" } else { "false" })
}

fn field_element(f: &VoiceField) -> Element {
    let mut el = field_shell(&f.field_name, f.modal)
        .with_child(grammar_element(&f.grammar))
        .with_child(
            vxml("prompt")
                .with_attr("bargein", if f.bargein { "true" } else { "false" })
                .with_text(&f.prompt),
        );
    for c in catches(&f.noinput, &f.nomatch) {
        el.append(c);
    }
    el
}

fn verification_element(v: &VerificationUnit) -> Element {
    let (before, after) = v
        .prompt_template
        .split_once("{value}")
        .unwrap_or((v.prompt_template.as_str(), ""));
    let mut prompt = vxml("prompt").with_attr("bargein", "true");
    prompt.children.push(Node::Text(before.to_string()));
    prompt.append(vxml("value").with_attr("expr", &v.for_field));
    prompt.children.push(Node::Text(after.to_string()));
    let mut el = field_shell(&v.confirm_field_name, true)
        .with_child(grammar_element(&v.grammar))
        .with_child(prompt);
    for c in catches(&v.noinput, &v.nomatch) {
        el.append(c);
    }
    el.with_child(
        vxml("filled").with_child(
            vxml("if")
                .with_attr("cond", format!("{} == 'no'", v.confirm_field_name))
                .with_child(vxml("clear").with_attr(
                    "namelist",
                    format!("{} {}", v.for_field, v.confirm_field_name),
                )),
        ),
    )
}

fn submit_element(form: &VoiceFormPlan, s: &SubmitPlan) -> Element {
    let fields: Vec<&str> = form.fields.iter().map(|f| f.field_name.as_str()).collect();
    let mut everything: Vec<&str> = fields.clone();
    everything.extend(form.verifications.iter().map(|v| v.confirm_field_name.as_str()));
    everything.push(&s.field_name);
    let mut el = field_shell(&s.field_name, true)
        .with_child(grammar_element(&s.grammar))
        .with_child(vxml("prompt").with_attr("bargein", "true").with_text(SUBMIT_PROMPT));
    for c in catches(&noinput_text(YES_NO_PROMPT), &nomatch_text(YES_NO_PROMPT)) {
        el.append(c);
    }
    el.with_child(
        vxml("filled").with_child(
            vxml("if")
                .with_attr("cond", format!("{} == 'yes'", s.field_name))
                .with_child(
                    vxml("submit")
                        .with_attr("next", s.action.as_str())
                        .with_attr("method", &s.method)
                        .with_attr("namelist", fields.join(" ")),
                )
                .with_child(vxml("else"))
                .with_child(vxml("clear").with_attr("namelist", everything.join(" "))),
        ),
    )
}

/// Prompt of the navigation field, naming only the kinds of choice present.
pub fn navigation_prompt(plan: &VoicePlan) -> String {
    let mut parts = Vec::new();
    if plan.links.is_some() {
        parts.push("a link");
    }
    if plan.shortcuts.is_some() {
        parts.push("a shortcut word");
    }
    if plan.sections.is_some() {
        parts.push("read followed by a section title");
    }
    let list = match parts.as_slice() {
        [] => String::new(),
        [one] => one.to_string(),
        [init @ .., last] => format!("{}, or {last}", init.join(", ")),
    };
    format!("Please say {list}.")
}

fn navigation_element(plan: &VoicePlan) -> Element {
    let mut field = field_shell(NAVIGATION_FIELD, false);
    for g in [&plan.links, &plan.shortcuts, &plan.sections].into_iter().flatten() {
        field.append(grammar_element(g));
    }
    let prompt = navigation_prompt(plan);
    field.append(vxml("prompt").with_attr("bargein", "true").with_text(&prompt));
    for c in catches(&noinput_text(&prompt), &nomatch_text(&prompt)) {
        field.append(c);
    }
    vxml("form").with_attr("id", NAVIGATION_FORM_ID).with_child(field)
}

/// Root namespace declarations and language, in output order.
pub(crate) fn root_declarations(root: &Element) -> Vec<(String, String)> {
    let lang = root
        .attr("xml:lang")
        .or_else(|| root.attr("lang"))
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .unwrap_or("en-US");
    vec![
        ("xmlns".into(), XHTML_NS.into()),
        ("xmlns:vxml".into(), VXML_NS.into()),
        ("xmlns:ev".into(), EV_NS.into()),
        ("xmlns:xv".into(), XV_NS.into()),
        ("xml:lang".into(), lang.to_string()),
    ]
}

pub(crate) const ROOT_DECLARATION_NAMES: [&str; 5] =
    ["xmlns", "xmlns:vxml", "xmlns:ev", "xmlns:xv", "xml:lang"];

fn set_root_declarations(root: &mut Element) {
    let decls = root_declarations(root);
    root.attrs
        .retain(|a| !ROOT_DECLARATION_NAMES.contains(&a.name.as_str()));
    let rest = std::mem::take(&mut root.attrs);
    for (name, value) in decls {
        root.set_attr(&name, value);
    }
    root.attrs.extend(rest);
}

/// A minimal X+V page whose voice form reads `title` and `message` when it
/// loads. Used for failures, so audio users hear them too.
pub fn error_document(title: &str, message: &str) -> AnnotatedDocument {
    let mut doc = DomTree::skeleton(Charset::utf8());
    set_root_declarations(&mut doc.root);
    let head = doc.head_mut();
    head.append(Element::new("title").with_text(title));
    head.append(
        Element::new("vxml:form")
            .with_attr("id", ERROR_FORM_ID)
            .with_child(Element::new("vxml:block").with_text(format!("{title}. {message}"))),
    );
    let body = doc.body_mut();
    body.set_attr("ev:event", "load");
    body.set_attr("ev:handler", format!("#{ERROR_FORM_ID}"));
    body.append(Element::new("h1").with_text(title));
    body.append(Element::new("p").with_text(message));
    AnnotatedDocument {
        doc,
        report: AnnotationReport::default(),
    }
}

pub const ERROR_FORM_ID: &str = "voice_error";

/// Annotate a page with voice forms, sync bindings and activation wiring.
///
/// A document whose root already binds the `xv` prefix is returned
/// unchanged with `passthrough` set.
pub fn annotate_document(
    mut doc: DomTree,
    model: &PageModel,
    tree: &DialogTree,
    lexicon: &ShortcutLexicon,
    config: &AnnotateConfig,
) -> AnnotatedDocument {
    let mut report = AnnotationReport::default();
    if doc.root.has_attr("xmlns:xv") {
        report.passthrough = true;
        return AnnotatedDocument { doc, report };
    }
    let plan = plan_voice(&doc, model, tree, lexicon, config);
    report.skipped = plan.skipped.clone();

    let mut head_additions = Vec::new();
    let mut syncs = Vec::new();
    for form in &plan.forms {
        let mut el = vxml("form").with_attr("id", &form.id);
        for f in &form.fields {
            el.append(field_element(f));
        }
        for v in &form.verifications {
            el.append(verification_element(v));
        }
        if let Some(s) = &form.submit {
            el.append(submit_element(form, s));
        }
        head_additions.push(el);

        let handler = format!("#{}", form.id);
        for f in &form.fields {
            let Ok(sync) = make_sync(f, &doc) else {
                continue;
            };
            report.voiced.push(f.target_input_id.clone());
            let members: Vec<String> = match model.component(&f.target_input_id).map(|c| &c.kind) {
                Some(ComponentKind::ChoiceGroup { options, .. }) => {
                    options.iter().map(|o| o.id.clone()).collect()
                }
                _ => vec![f.target_input_id.clone()],
            };
            for id in members {
                if let Some(input) = doc.find_by_id_mut(&id) {
                    input.set_attr("ev:event", "focus");
                    input.set_attr("ev:handler", handler.as_str());
                }
            }
            syncs.push(
                Element::new("xv:sync")
                    .with_attr("xv:field", &sync.field_ref)
                    .with_attr("xv:input", &sync.input_id),
            );
        }
    }
    if plan.has_navigation() {
        head_additions.push(navigation_element(&plan));
        let body = doc.body_mut();
        body.set_attr("ev:event", "load");
        body.set_attr("ev:handler", format!("#{NAVIGATION_FORM_ID}"));
    }
    if plan.is_empty() {
        report.notes.push("no voice content".into());
    }
    let head = doc.head_mut();
    for el in head_additions.into_iter().chain(syncs) {
        head.append(el);
    }
    set_root_declarations(&mut doc.root);
    if let Some(cs) = &config.encoding_override {
        doc.charset = cs.clone();
    }
    AnnotatedDocument { doc, report }
}
