use std::collections::{HashMap, HashSet};

use super::{DomTree, Element};

pub const AUTO_ID_PREFIX: &str = "xv-auto-";

/// What `ensure_ids` changed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdReport {
    /// (element path, generated id), in document order.
    pub assigned: Vec<(String, String)>,
    /// (original id, renamed id) for every duplicate after the first.
    pub collisions: Vec<(String, String)>,
}

impl IdReport {
    pub fn is_empty(&self) -> bool {
        self.assigned.is_empty() && self.collisions.is_empty()
    }
}

/// Elements that must be addressable by id. Headings are included because
/// content regions are keyed on them.
pub fn is_interactive(el: &Element) -> bool {
    match el.name.as_str() {
        "form" | "select" | "input" | "textarea" | "button" => true,
        "a" => el.has_attr("href"),
        "h1" | "h2" | "h3" | "h4" | "h5" | "h6" => true,
        _ => false,
    }
}

/// Give every interactive element a unique id and rename duplicate ids.
///
/// Duplicates keep the first occurrence and rename later ones to
/// `<orig>-dup-<k>`; missing ids become `xv-auto-<n>` in document order.
/// Running it twice changes nothing the second time.
pub fn ensure_ids(mut doc: DomTree) -> (DomTree, IdReport) {
    let mut report = IdReport::default();
    let mut taken: HashSet<String> = doc
        .elements()
        .filter_map(|e| e.id().map(str::to_string))
        .collect();

    let mut seen: HashSet<String> = HashSet::new();
    let mut dup_counter: HashMap<String, usize> = HashMap::new();
    doc.root.for_each_mut(&mut |el| {
        let Some(id) = el.id().map(str::to_string) else {
            return;
        };
        if seen.insert(id.clone()) {
            return;
        }
        let k = dup_counter.entry(id.clone()).or_insert(0);
        let renamed = loop {
            *k += 1;
            let candidate = format!("{id}-dup-{k}");
            if !taken.contains(&candidate) {
                break candidate;
            }
        };
        taken.insert(renamed.clone());
        seen.insert(renamed.clone());
        el.set_attr("id", renamed.clone());
        report.collisions.push((id, renamed));
    });

    let mut counter = 0usize;
    assign_auto(&mut doc.root, "", 1, &mut taken, &mut counter, &mut report);
    (doc, report)
}

fn assign_auto(
    el: &mut Element,
    parent_path: &str,
    index: usize,
    taken: &mut HashSet<String>,
    counter: &mut usize,
    report: &mut IdReport,
) {
    let path = format!("{parent_path}/{}[{index}]", el.name);
    if is_interactive(el) && el.id().is_none() {
        let id = loop {
            *counter += 1;
            let candidate = format!("{AUTO_ID_PREFIX}{counter}");
            if !taken.contains(&candidate) {
                break candidate;
            }
        };
        taken.insert(id.clone());
        el.set_attr("id", id.clone());
        report.assigned.push((path.clone(), id));
    }
    let mut per_name: HashMap<String, usize> = HashMap::new();
    for child in el.child_elements_mut() {
        let n = per_name.entry(child.name.clone()).or_insert(0);
        *n += 1;
        let n = *n;
        assign_auto(child, &path, n, taken, counter, report);
    }
}
