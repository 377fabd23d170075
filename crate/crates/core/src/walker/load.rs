use std::collections::BTreeMap;

use url::Url;

use super::{DialogMachine, FieldDef, FieldRole, FieldState, FormDef, Pending, PromptPart, WalkError};
use crate::annotator::NAVIGATION_FORM_ID;
use crate::dom::{collapse_whitespace, extract_text, from_xml, DomTree, Element, Node};
use crate::grammar::parse_jsgf;
use crate::page::{extract_components, ComponentKind, PageModel};

fn malformed(msg: impl Into<String>) -> WalkError {
    WalkError::MalformedDocument(msg.into())
}

/// Components of the page, recomputed from the current tree.
pub(crate) fn page_model(doc: &DomTree) -> PageModel {
    let base = Url::parse("http://localhost/").expect("static url");
    extract_components(doc, &base)
}

fn raw_text(el: &Element) -> String {
    let mut out = String::new();
    for c in &el.children {
        match c {
            Node::Text(t) | Node::CData(t) => out.push_str(t),
            Node::Element(e) => out.push_str(&raw_text(e)),
        }
    }
    out
}

fn prompt_parts(el: &Element) -> Vec<PromptPart> {
    let mut parts = Vec::new();
    for c in &el.children {
        match c {
            Node::Text(t) | Node::CData(t) => parts.push(PromptPart::Text(t.clone())),
            Node::Element(e) if e.name == "vxml:value" => {
                parts.push(PromptPart::Value(e.attr("expr").unwrap_or_default().to_string()))
            }
            Node::Element(e) => parts.push(PromptPart::Text(extract_text(e))),
        }
    }
    parts
}

fn role_of(field: &Element, name: &str, navigation: bool) -> FieldRole {
    if navigation {
        return FieldRole::Navigation;
    }
    let filled = field.child_elements().filter(|e| e.name == "vxml:filled");
    for f in filled {
        if let Some(s) = f.descendants().find(|e| e.name == "vxml:submit") {
            return FieldRole::Submit {
                next: s.attr("next").unwrap_or_default().to_string(),
                method: s.attr("method").unwrap_or("get").to_string(),
            };
        }
        let expected = format!("{name} == 'no'");
        for cond in f.descendants().filter(|e| e.name == "vxml:if") {
            if cond.attr("cond").map(str::trim) != Some(expected.as_str()) {
                continue;
            }
            let target = cond
                .descendants()
                .find(|e| e.name == "vxml:clear")
                .and_then(|c| c.attr("namelist"))
                .and_then(|n| n.split_whitespace().find(|n| *n != name));
            if let Some(t) = target {
                return FieldRole::Confirm {
                    for_field: t.to_string(),
                };
            }
        }
    }
    FieldRole::Input
}

fn field_def(el: &Element, form: usize, navigation: bool) -> Result<FieldDef, WalkError> {
    let name = el
        .attr("name")
        .filter(|n| !n.is_empty())
        .ok_or_else(|| malformed("vxml:field without a name"))?
        .to_string();
    let mut grammars = Vec::new();
    for g in el.child_elements().filter(|e| e.name == "vxml:grammar") {
        let g = parse_jsgf(&raw_text(g)).map_err(|e| malformed(format!("grammar of {name}: {e}")))?;
        grammars.push(g);
    }
    let catch = |event: &str| {
        el.child_elements()
            .find(|e| e.name == "vxml:catch" && e.attr("event") == Some(event))
            .map(|e| collapse_whitespace(&extract_text(e)))
            .unwrap_or_default()
    };
    Ok(FieldDef {
        role: role_of(el, &name, navigation),
        modal: el.attr("modal") == Some("true"),
        prompt: el
            .child_elements()
            .find(|e| e.name == "vxml:prompt")
            .map(prompt_parts)
            .unwrap_or_default(),
        noinput: catch("noinput"),
        nomatch: catch("nomatch"),
        grammars,
        form,
        name,
    })
}

/// Value the GUI shows for an input before any interaction.
fn initial_gui(doc: &DomTree, model: &PageModel, input_id: &str) -> Vec<String> {
    let Some(el) = doc.find_by_id(input_id) else {
        return Vec::new();
    };
    match model.component(input_id).map(|c| &c.kind) {
        Some(ComponentKind::ChoiceGroup { options, .. }) => options
            .iter()
            .filter(|o| doc.find_by_id(&o.id).is_some_and(|e| e.has_attr("checked")))
            .map(|o| o.label.clone())
            .collect(),
        _ if el.name == "select" => el
            .descendants()
            .filter(|o| o.name == "option" && o.has_attr("selected"))
            .map(|o| collapse_whitespace(&extract_text(o)))
            .collect(),
        _ if el.name == "textarea" => {
            let t = extract_text(el);
            if t.is_empty() { Vec::new() } else { vec![t] }
        }
        _ => el
            .attr("value")
            .filter(|v| !v.is_empty())
            .map(|v| vec![v.to_string()])
            .unwrap_or_default(),
    }
}

/// Load an annotated document and queue its opening prompts.
pub fn load_machine(bytes: &[u8]) -> Result<DialogMachine, WalkError> {
    let doc = from_xml(bytes).map_err(|e| malformed(e.to_string()))?;
    let mut forms = Vec::new();
    let mut fields = Vec::new();
    for form in doc.elements().filter(|e| e.name == "vxml:form") {
        let id = form.attr("id").unwrap_or_default().to_string();
        let navigation = id == NAVIGATION_FORM_ID;
        let index = forms.len();
        for f in form.child_elements().filter(|e| e.name == "vxml:field") {
            fields.push(field_def(f, index, navigation)?);
        }
        let blocks = form
            .child_elements()
            .filter(|e| e.name == "vxml:block")
            .map(|b| collapse_whitespace(&extract_text(b)))
            .filter(|t| !t.is_empty())
            .collect();
        forms.push(FormDef { id, blocks });
    }

    let model = page_model(&doc);
    let mut sync = BTreeMap::new();
    let mut aliases = BTreeMap::new();
    let mut gui = BTreeMap::new();
    for s in doc.elements().filter(|e| e.name == "xv:sync") {
        let field = s.attr("xv:field").unwrap_or_default();
        let input = s.attr("xv:input").unwrap_or_default().to_string();
        let name = field.strip_prefix('#').unwrap_or(field).to_string();
        let known = fields.iter().any(|f| f.name == name && f.role == FieldRole::Input);
        if !known || doc.find_by_id(&input).is_none() {
            return Err(WalkError::DanglingSync {
                field: field.to_string(),
                input,
            });
        }
        sync.insert(name, input);
    }
    // Every field the page shows is mirrored, voiced or not.
    for c in model.fields() {
        if let ComponentKind::ChoiceGroup { options, .. } = &c.kind {
            for o in options {
                aliases.insert(o.id.clone(), c.id.clone());
            }
        }
        gui.insert(c.id.clone(), initial_gui(&doc, &model, &c.id));
    }

    let states = fields
        .iter()
        .filter(|f| f.role == FieldRole::Input)
        .map(|f| (f.name.clone(), FieldState::Unfilled))
        .collect();
    let mut m = DialogMachine {
        doc,
        forms,
        fields,
        states,
        sync,
        aliases,
        gui,
        active: None,
        log: Vec::new(),
        pending: Pending::None,
    };
    let mut opening: Vec<String> = m.forms.iter().flat_map(|f| f.blocks.clone()).collect();
    let first = m
        .fields
        .iter()
        .position(|f| f.role == FieldRole::Input)
        .or_else(|| m.fields.iter().position(|f| f.role == FieldRole::Navigation));
    if let Some(i) = first {
        m.active = Some(i);
        opening.push(m.render_prompt(i));
    }
    m.log.extend(opening);
    Ok(m)
}
