//! Grammar templates for page entries.

use std::collections::HashMap;

use super::matcher::normalize_words;
use super::{Expansion, GrammarError, JsgfGrammar, Rule, TagAction};
use crate::dom::text_words;
use crate::page::ShortcutLexicon;

/// A speakable entry: the element id it resolves to and its visible text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpokenEntry {
    pub id: String,
    pub text: String,
}

impl SpokenEntry {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            text: text.into(),
        }
    }
}

/// Map an arbitrary name onto a JSGF identifier (`[A-Za-z_][A-Za-z0-9_]*`).
pub fn sanitize_identifier(raw: &str) -> String {
    let mut out: String = raw
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    if out.is_empty() {
        out.push_str("field");
    }
    if out.starts_with(|c: char| c.is_ascii_digit()) {
        out.insert(0, '_');
    }
    out
}

/// Name of the item rule of a multiple-choice grammar: the singular of
/// `name`, or `{name}_item` when stripping a plural `s` is not possible.
pub fn item_rule_name(name: &str) -> String {
    match name.strip_suffix('s') {
        Some(stem) if !stem.is_empty() && !name.ends_with("ss") && !stem.ends_with('_')
                && !matches!(stem, "NULL" | "VOID") =>
        {
            stem.to_string()
        }
        _ => format!("{name}_item"),
    }
}

fn literal(text: &str, tag: &str) -> Expansion {
    Expansion::words_with_tag(text, TagAction::AssignLiteral(tag.to_string()))
}

fn grammar(name: &str, rules: Vec<Rule>) -> JsgfGrammar {
    JsgfGrammar::new(None, name, rules).expect("template grammars are valid")
}

/// Grammar for a selection input. Option texts are emitted verbatim and also
/// serve as the canonical tag values.
pub fn grammar_for_options(
    name: &str,
    options: &[String],
    multiple: bool,
) -> Result<JsgfGrammar, GrammarError> {
    if !super::is_grammar_name(name) {
        return Err(GrammarError::InvalidName(name.to_string()));
    }
    let alternatives: Vec<Expansion> = options
        .iter()
        .map(|o| o.trim())
        .filter(|o| !o.is_empty())
        .map(|o| literal(o, o))
        .collect();
    if alternatives.is_empty() {
        return Err(GrammarError::EmptyGrammar);
    }
    let alternatives = Expansion::Alternatives(alternatives);
    if !multiple {
        return Ok(grammar(
            name,
            vec![Rule {
                name: name.to_string(),
                public: true,
                expansion: alternatives,
            }],
        ));
    }
    let item = item_rule_name(name);
    let public = Expansion::Sequence(vec![
        Expansion::Null.tagged(TagAction::NewArray),
        Expansion::Repeat(Box::new(Expansion::Sequence(vec![
            Expansion::RuleRef(item.clone()),
            Expansion::Optional(Box::new(Expansion::Token("and".into())))
                .tagged(TagAction::PushRef(item.clone())),
        ]))),
    ]);
    Ok(grammar(
        name,
        vec![
            Rule {
                name: name.to_string(),
                public: true,
                expansion: public,
            },
            Rule {
                name: item,
                public: false,
                expansion: alternatives,
            },
        ],
    ))
}

const ORDINALS: [&str; 19] = [
    "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve",
    "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen", "twenty",
];

/// Spoken suffix for the `n`th (1-based) occurrence of a repeated text.
fn ordinal_suffix(n: usize) -> String {
    match n {
        0 | 1 => String::new(),
        n if n - 2 < ORDINALS.len() => ORDINALS[n - 2].to_string(),
        n => n.to_string(),
    }
}

/// Alternatives `text {$="id"}`, with repeated spoken texts made distinct by
/// an appended ordinal word. Entries with nothing speakable are dropped.
fn entry_alternatives(entries: &[SpokenEntry], prefix: Option<&str>) -> Vec<Expansion> {
    let mut seen: HashMap<Vec<String>, usize> = HashMap::new();
    let mut out = Vec::new();
    for entry in entries {
        let text = entry.text.split_whitespace().collect::<Vec<_>>().join(" ");
        let key = normalize_words(&text);
        if key.is_empty() {
            continue;
        }
        let n = seen.entry(key).or_insert(0);
        *n += 1;
        let mut spoken = match prefix {
            Some(p) => format!("{p} {text}"),
            None => text,
        };
        let suffix = ordinal_suffix(*n);
        if !suffix.is_empty() {
            spoken.push(' ');
            spoken.push_str(&suffix);
        }
        out.push(literal(&spoken, &entry.id));
    }
    out
}

fn single_rule_grammar(name: &str, alternatives: Vec<Expansion>) -> Option<JsgfGrammar> {
    if alternatives.is_empty() {
        return None;
    }
    Some(grammar(
        name,
        vec![Rule {
            name: name.to_string(),
            public: true,
            expansion: Expansion::alternatives(alternatives),
        }],
    ))
}

/// Link grammar: each link's spoken text tagged with its element id.
pub fn grammar_for_links(links: &[SpokenEntry]) -> Option<JsgfGrammar> {
    single_rule_grammar("links", entry_alternatives(links, None))
}

/// "read <heading>" choices for content regions, tagged with the heading id.
pub fn grammar_for_sections(sections: &[SpokenEntry]) -> Option<JsgfGrammar> {
    single_rule_grammar("sections", entry_alternatives(sections, Some("read")))
}

/// One alternative per lexicon word found in some entry, tagged with the id
/// of the first (highest-ranked) entry containing it. `entries` must already
/// be in rank order.
pub fn shortcut_grammar(entries: &[SpokenEntry], lexicon: &ShortcutLexicon) -> Option<JsgfGrammar> {
    let entry_words: Vec<Vec<String>> = entries.iter().map(|e| text_words(&e.text)).collect();
    let alternatives = lexicon
        .by_weight()
        .into_iter()
        .filter_map(|(word, _)| {
            let hit = entries
                .iter()
                .zip(&entry_words)
                .find(|(_, words)| words.iter().any(|w| w == word))?;
            Some(literal(word, &hit.0.id))
        })
        .collect();
    single_rule_grammar("shortcuts", alternatives)
}

/// Fixed confirmation grammar.
pub fn yes_no_grammar() -> JsgfGrammar {
    let alternatives = [("yes", "yes"), ("correct", "yes"), ("no", "no"), ("wrong", "no")]
        .into_iter()
        .map(|(w, v)| literal(w, v))
        .collect();
    single_rule_grammar("yesno", alternatives).expect("non-empty")
}
