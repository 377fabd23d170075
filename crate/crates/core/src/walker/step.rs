use super::load::page_model;
use super::{DialogMachine, FieldRole, FieldState, Pending, PromptPart, StepOutcome, WalkError, WalkEvent};
use crate::dom::{collapse_whitespace, extract_text};
use crate::grammar::{match_utterance, Expansion, JsgfGrammar, MatchResult, SemanticValue, TagAction};
use crate::page::ComponentKind;

fn builds_list(e: &Expansion) -> bool {
    match e {
        Expansion::Tagged(inner, tag) => *tag == TagAction::NewArray || builds_list(inner),
        Expansion::Sequence(v) | Expansion::Alternatives(v) => v.iter().any(builds_list),
        Expansion::Optional(inner) | Expansion::Repeat(inner) => builds_list(inner),
        _ => false,
    }
}

/// Whether the grammar's value is an array (multiple selection).
fn list_valued(g: &JsgfGrammar) -> bool {
    builds_list(&g.public_rule().expansion)
}

fn first_match(grammars: &[JsgfGrammar], utterance: &str) -> Option<SemanticValue> {
    grammars.iter().find_map(|g| match match_utterance(g, utterance) {
        MatchResult::Match(v) => Some(v),
        MatchResult::NoMatch => None,
    })
}

impl DialogMachine {
    pub(crate) fn render_prompt(&self, i: usize) -> String {
        let mut out = String::new();
        for part in &self.fields[i].prompt {
            match part {
                PromptPart::Text(t) => out.push_str(t),
                PromptPart::Value(expr) => {
                    if let Some(v) = self.states.get(expr).and_then(FieldState::value) {
                        out.push_str(&v.spoken());
                    }
                }
            }
        }
        collapse_whitespace(&out)
    }

    fn field_index(&self, name: &str) -> Option<usize> {
        self.fields.iter().position(|f| f.name == name)
    }

    fn activate(&mut self, i: usize, out: &mut Vec<String>) {
        self.active = Some(i);
        out.push(self.render_prompt(i));
    }

    fn navigation_field(&self) -> Option<usize> {
        self.fields.iter().position(|f| f.role == FieldRole::Navigation)
    }

    /// Apply one event. Prompts it produced are also appended to the log.
    pub fn step(&mut self, event: &WalkEvent) -> Result<StepOutcome, WalkError> {
        self.pending = Pending::None;
        let mut out = Vec::new();
        match event {
            WalkEvent::Silence => {
                if let Some(i) = self.active {
                    out.push(self.fields[i].noinput.clone());
                }
            }
            WalkEvent::Voice(u) => {
                if let Some(i) = self.active {
                    self.voice(i, u, &mut out);
                }
            }
            WalkEvent::Gui { input_id, value } => self.gui_edit(input_id, value, &mut out)?,
        }
        self.log.extend(out.iter().cloned());
        Ok(StepOutcome {
            prompts: out,
            pending: self.pending.clone(),
        })
    }

    fn voice(&mut self, i: usize, utterance: &str, out: &mut Vec<String>) {
        let def = &self.fields[i];
        let matched = first_match(&def.grammars, utterance);
        let (role, modal, nomatch) = (def.role.clone(), def.modal, def.nomatch.clone());
        match (role, matched) {
            (FieldRole::Input, Some(v)) => self.fill(i, v, out),
            (FieldRole::Input, None) if !modal => {
                if !self.try_navigation(utterance, out) {
                    out.push(nomatch);
                }
            }
            (FieldRole::Confirm { for_field }, Some(v)) => {
                let target = self.field_index(&for_field);
                if v == SemanticValue::Text("yes".into()) {
                    if let Some(FieldState::Filled(value)) = self.states.get(&for_field).cloned() {
                        self.states.insert(for_field, FieldState::Confirmed(value));
                    }
                    self.advance(self.fields[i].form, out);
                } else {
                    self.clear(&for_field);
                    match target {
                        Some(t) => self.activate(t, out),
                        None => self.advance(self.fields[i].form, out),
                    }
                }
            }
            (FieldRole::Submit { next, method }, Some(v)) => {
                let form = self.fields[i].form;
                if v == SemanticValue::Text("yes".into()) {
                    let (form_id, payload) = self.payload(form);
                    self.pending = Pending::Submit {
                        form_id,
                        action: next,
                        method,
                        payload,
                    };
                    self.active = self.navigation_field();
                } else {
                    let names: Vec<String> = self.form_inputs(form).map(|j| self.fields[j].name.clone()).collect();
                    for n in &names {
                        self.clear(n);
                    }
                    self.advance(form, out);
                }
            }
            (FieldRole::Navigation, Some(v)) => self.navigate(&v, out),
            (_, None) => out.push(nomatch),
        }
    }

    fn try_navigation(&mut self, utterance: &str, out: &mut Vec<String>) -> bool {
        let Some(n) = self.navigation_field() else {
            return false;
        };
        match first_match(&self.fields[n].grammars, utterance) {
            Some(v) => {
                self.navigate(&v, out);
                true
            }
            None => false,
        }
    }

    /// Follow a link or read a section, by the element id a navigation
    /// grammar returned.
    fn navigate(&mut self, v: &SemanticValue, out: &mut Vec<String>) {
        let id = v.items().first().map(|s| s.to_string()).unwrap_or_default();
        let Some(el) = self.doc.find_by_id(&id) else {
            return;
        };
        if el.name == "a" {
            self.pending = Pending::Navigate(el.attr("href").unwrap_or_default().to_string());
            return;
        }
        // Recomputed on every request, so edited content is read as it is now.
        let model = page_model(&self.doc);
        let text = match model.component(&id).map(|c| &c.kind) {
            Some(ComponentKind::OutputRegion { heading, body }) if body.is_empty() => heading.clone(),
            Some(ComponentKind::OutputRegion { heading, body }) => {
                if heading.ends_with(['.', '!', '?', ':']) {
                    format!("{heading} {body}")
                } else {
                    format!("{heading}. {body}")
                }
            }
            _ => collapse_whitespace(&extract_text(el)),
        };
        out.push(text);
    }

    fn confirm_for(&self, name: &str) -> Option<usize> {
        self.fields
            .iter()
            .position(|f| matches!(&f.role, FieldRole::Confirm { for_field } if for_field == name))
    }

    fn fill(&mut self, i: usize, v: SemanticValue, out: &mut Vec<String>) {
        let name = self.fields[i].name.clone();
        if let Some(input) = self.sync.get(&name) {
            self.gui.insert(input.clone(), v.items().iter().map(|s| s.to_string()).collect());
        }
        self.states.insert(name.clone(), FieldState::Filled(v));
        match self.confirm_for(&name) {
            Some(c) => self.activate(c, out),
            None => self.advance(self.fields[i].form, out),
        }
    }

    fn clear(&mut self, name: &str) {
        if self.states.contains_key(name) {
            self.states.insert(name.to_string(), FieldState::Unfilled);
        }
        if let Some(input) = self.sync.get(name) {
            self.gui.insert(input.clone(), Vec::new());
        }
    }

    fn form_inputs(&self, form: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.fields.len()).filter(move |&j| self.fields[j].form == form && self.fields[j].role == FieldRole::Input)
    }

    /// Move to the next unfilled field, then the form's submit question,
    /// then later forms, then navigation.
    fn advance(&mut self, form: usize, out: &mut Vec<String>) {
        let unfilled = |m: &Self, f: usize| {
            m.form_inputs(f)
                .find(|&j| m.states.get(&m.fields[j].name) == Some(&FieldState::Unfilled))
        };
        if let Some(j) = unfilled(self, form) {
            return self.activate(j, out);
        }
        if let Some(j) = (0..self.fields.len())
            .find(|&j| self.fields[j].form == form && matches!(self.fields[j].role, FieldRole::Submit { .. }))
        {
            return self.activate(j, out);
        }
        for f in form + 1..self.forms.len() {
            if let Some(j) = unfilled(self, f) {
                return self.activate(j, out);
            }
        }
        match self.navigation_field() {
            Some(n) => self.activate(n, out),
            None => self.active = None,
        }
    }

    fn gui_edit(&mut self, input_id: &str, value: &str, out: &mut Vec<String>) -> Result<(), WalkError> {
        if self.doc.find_by_id(input_id).is_none() {
            return Err(WalkError::UnknownInputId(input_id.to_string()));
        }
        let target = self.aliases.get(input_id).cloned().unwrap_or_else(|| input_id.to_string());
        let values: Vec<String> = value
            .split('|')
            .map(str::trim)
            .filter(|v| !v.is_empty())
            .map(str::to_string)
            .collect();
        let field = self.sync.iter().find(|(_, i)| **i == target).map(|(f, _)| f.clone());
        let Some(i) = field.and_then(|f| self.field_index(&f)) else {
            self.gui.insert(target, values);
            return Ok(());
        };
        if values.is_empty() {
            let name = self.fields[i].name.clone();
            self.clear(&name);
            return Ok(());
        }
        let v = if self.fields[i].grammars.iter().any(list_valued) {
            SemanticValue::List(values)
        } else {
            SemanticValue::Text(values.join(" "))
        };
        self.fill(i, v, out);
        Ok(())
    }

    /// HTML form id and name/value pairs the form would submit, from the
    /// GUI mirror for synced inputs and the markup for everything else.
    fn payload(&self, form: usize) -> (String, Vec<(String, String)>) {
        let model = page_model(&self.doc);
        let html_form = self
            .form_inputs(form)
            .filter_map(|j| self.sync.get(&self.fields[j].name))
            .find_map(|input| model.component(input).and_then(|c| c.form.clone()))
            .unwrap_or_default();
        let mut pairs = Vec::new();
        let Some(info) = model.form(&html_form) else {
            return (html_form, pairs);
        };
        for id in &info.members {
            let Some(c) = model.component(id) else {
                continue;
            };
            let Some(name) = c.name() else {
                continue;
            };
            let shown = self.gui.get(&c.id).cloned().unwrap_or_default();
            match &c.kind {
                ComponentKind::SelectionInput { options, .. } => {
                    for t in &shown {
                        let value = options
                            .iter()
                            .find(|o| &o.text == t)
                            .and_then(|o| o.value.clone())
                            .unwrap_or_else(|| t.clone());
                        pairs.push((name.to_string(), value));
                    }
                }
                ComponentKind::ChoiceGroup { options, .. } => {
                    for t in &shown {
                        let value = options
                            .iter()
                            .find(|o| &o.label == t)
                            .map(|o| o.value.clone())
                            .unwrap_or_else(|| t.clone());
                        pairs.push((name.to_string(), value));
                    }
                }
                _ => pairs.extend(shown.into_iter().map(|v| (name.to_string(), v))),
            }
        }
        if let Some(el) = self.doc.find_by_id(&html_form) {
            for h in el
                .descendants()
                .filter(|e| e.name == "input" && e.attr("type").is_some_and(|t| t.eq_ignore_ascii_case("hidden")))
            {
                if let Some(n) = h.attr("name") {
                    pairs.push((n.to_string(), h.attr("value").unwrap_or_default().to_string()));
                }
            }
        }
        (html_form, pairs)
    }
}
