use super::rank::weigh;
use super::{ComponentKind, FormInfo, PageModel, ShortcutLexicon};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Page,
    Form,
    Field,
    Submit,
    Navigation,
    Content,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DialogNode {
    pub kind: NodeKind,
    /// Component id (form id for form nodes, `page` for the root).
    pub id: String,
    pub weight: f64,
    pub children: Vec<DialogNode>,
}

impl DialogNode {
    fn leaf(kind: NodeKind, id: &str, weight: f64) -> Self {
        Self {
            kind,
            id: id.to_string(),
            weight,
            children: Vec::new(),
        }
    }

    fn collect_paths<'a>(&'a self, prefix: &mut Vec<&'a str>, out: &mut Vec<Vec<String>>) {
        prefix.push(&self.id);
        if self.children.is_empty() {
            out.push(prefix.iter().map(|s| s.to_string()).collect());
        }
        for child in &self.children {
            child.collect_paths(prefix, out);
        }
        prefix.pop();
    }
}

/// Every dialog path through a page: forms (fields, then submit),
/// navigation leaves and content leaves, in document order.
#[derive(Debug, Clone, PartialEq)]
pub struct DialogTree {
    pub root: DialogNode,
}

impl DialogTree {
    /// Root-to-leaf id paths, excluding a childless root.
    pub fn paths(&self) -> Vec<Vec<String>> {
        if self.root.children.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        self.root.collect_paths(&mut Vec::new(), &mut out);
        out
    }

    pub fn leaf_count(&self) -> usize {
        self.paths().len()
    }
}

/// Dialog tree with zero weights.
pub fn build_dialog_tree(model: &PageModel) -> DialogTree {
    build_weighted_dialog_tree(model, &ShortcutLexicon::new())
}

/// Dialog tree whose nodes carry lexicon weights of their visible text;
/// a form's weight is the sum over its children.
///
/// Fields outside any form hang directly off the root.
pub fn build_weighted_dialog_tree(model: &PageModel, lexicon: &ShortcutLexicon) -> DialogTree {
    let mut children = Vec::new();
    let mut forms = model.forms.iter().peekable();
    for (i, c) in model.components.iter().enumerate() {
        while let Some(form) = forms.next_if(|f| f.position <= i) {
            children.push(form_node(model, form, lexicon));
        }
        let weight = weigh(&c.visible_text(), lexicon);
        match &c.kind {
            ComponentKind::Link { .. } => {
                children.push(DialogNode::leaf(NodeKind::Navigation, &c.id, weight))
            }
            ComponentKind::OutputRegion { .. } => {
                children.push(DialogNode::leaf(NodeKind::Content, &c.id, weight))
            }
            ComponentKind::SubmitControl { .. } => {}
            _ if c.form.as_deref().and_then(|f| model.form(f)).is_some() => {}
            _ => children.push(DialogNode::leaf(NodeKind::Field, &c.id, weight)),
        }
    }
    for form in forms {
        children.push(form_node(model, form, lexicon));
    }
    DialogTree {
        root: DialogNode {
            kind: NodeKind::Page,
            id: "page".to_string(),
            weight: 0.0,
            children,
        },
    }
}

fn form_node(model: &PageModel, info: &FormInfo, lexicon: &ShortcutLexicon) -> DialogNode {
    let form_id = info.id.as_str();
    let members: Vec<_> = info
        .members
        .iter()
        .filter_map(|id| model.component(id))
        .collect();
    let mut children: Vec<DialogNode> = members
        .iter()
        .filter(|c| c.is_field())
        .map(|c| DialogNode::leaf(NodeKind::Field, &c.id, weigh(&c.visible_text(), lexicon)))
        .collect();
    let submit = members
        .iter()
        .find(|c| matches!(c.kind, ComponentKind::SubmitControl { .. }));
    children.push(match submit {
        Some(s) => DialogNode::leaf(NodeKind::Submit, &s.id, weigh(&s.visible_text(), lexicon)),
        None => DialogNode::leaf(NodeKind::Submit, form_id, 0.0),
    });
    DialogNode {
        kind: NodeKind::Form,
        id: form_id.to_string(),
        weight: children.iter().map(|c| c.weight).sum(),
        children,
    }
}
