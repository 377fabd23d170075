//! JSGF speech grammars with a small semantic-tag language.
//!
//! The tag language has exactly three statements: `$="literal"`,
//! `$ = new Array` and `$.push($rule)`. Tags are written in braces; the
//! parser also accepts the parenthesized `( $ = new Array; )` form.

mod enumerate;
mod generate;
mod jsgf;
mod matcher;

use std::collections::BTreeSet;

use thiserror::Error;

pub use enumerate::{enumerate_language, enumerate_language_capped, DEFAULT_ENUMERATION_CAP};
pub use generate::{
    grammar_for_links, grammar_for_options, grammar_for_sections, item_rule_name,
    sanitize_identifier, shortcut_grammar, yes_no_grammar, SpokenEntry,
};
pub use jsgf::{parse_jsgf, serialize_jsgf};
pub use matcher::{match_utterance, normalize_word, normalize_words};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrammarError {
    #[error("grammar has no options")]
    EmptyGrammar,
    #[error("missing or malformed #JSGF header: {0}")]
    BadHeader(String),
    #[error("rule reference <{0}> does not resolve")]
    UnresolvedRuleRef(String),
    #[error("grammar has no public rule")]
    NoPublicRule,
    #[error("grammar has more than one public rule")]
    MultiplePublicRules,
    #[error("bad tag: {0}")]
    TagSyntax(String),
    #[error("syntax error at line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid identifier: {0:?}")]
    InvalidName(String),
    #[error("language exceeds {cap} sentences")]
    ExplosionGuard { cap: usize },
    #[error("{0}")]
    InvalidArgument(String),
}

/// A semantic tag action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TagAction {
    /// `$="literal"`
    AssignLiteral(String),
    /// `$ = new Array`
    NewArray,
    /// `$.push($rule)`
    PushRef(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expansion {
    Token(String),
    RuleRef(String),
    /// `<NULL>`: matches without consuming input.
    Null,
    /// `<VOID>`: never matches.
    Void,
    Sequence(Vec<Expansion>),
    Alternatives(Vec<Expansion>),
    Optional(Box<Expansion>),
    /// One or more repetitions (`+`).
    Repeat(Box<Expansion>),
    /// A unit with a tag attached to it.
    Tagged(Box<Expansion>, TagAction),
}

impl Expansion {
    pub fn tagged(self, action: TagAction) -> Self {
        Expansion::Tagged(Box::new(self), action)
    }

    /// Whitespace-separated words as tokens, with `action` attached to the
    /// last one.
    pub fn words_with_tag(text: &str, action: TagAction) -> Self {
        let mut tokens: Vec<Expansion> = text
            .split_whitespace()
            .map(|w| Expansion::Token(w.to_string()))
            .collect();
        let last = tokens.pop().unwrap_or(Expansion::Null).tagged(action);
        tokens.push(last);
        Expansion::sequence(tokens)
    }

    /// A sequence, collapsed to its only item when there is just one.
    pub fn sequence(mut items: Vec<Expansion>) -> Self {
        if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Expansion::Sequence(items)
        }
    }

    /// Alternatives, collapsed to the only item when there is just one.
    pub fn alternatives(mut items: Vec<Expansion>) -> Self {
        if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Expansion::Alternatives(items)
        }
    }

    fn collect_refs<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expansion::RuleRef(r) => out.push(r),
            Expansion::Token(_) | Expansion::Null | Expansion::Void => {}
            Expansion::Sequence(items) | Expansion::Alternatives(items) => {
                items.iter().for_each(|i| i.collect_refs(out))
            }
            Expansion::Optional(inner) | Expansion::Repeat(inner) => inner.collect_refs(out),
            Expansion::Tagged(inner, _) => inner.collect_refs(out),
        }
    }

    fn collect_pushes<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expansion::Tagged(inner, action) => {
                if let TagAction::PushRef(r) = action {
                    out.push(r);
                }
                inner.collect_pushes(out);
            }
            Expansion::Sequence(items) | Expansion::Alternatives(items) => {
                items.iter().for_each(|i| i.collect_pushes(out))
            }
            Expansion::Optional(inner) | Expansion::Repeat(inner) => inner.collect_pushes(out),
            _ => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub public: bool,
    pub expansion: Expansion,
}

/// A validated grammar: every reference resolves and exactly one rule is
/// public.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsgfGrammar {
    charset: Option<String>,
    name: String,
    rules: Vec<Rule>,
}

impl JsgfGrammar {
    pub fn new(
        charset: Option<String>,
        name: impl Into<String>,
        rules: Vec<Rule>,
    ) -> Result<Self, GrammarError> {
        let name = name.into();
        if !is_grammar_name(&name) {
            return Err(GrammarError::InvalidName(name));
        }
        let publics = rules.iter().filter(|r| r.public).count();
        match publics {
            0 => return Err(GrammarError::NoPublicRule),
            1 => {}
            _ => return Err(GrammarError::MultiplePublicRules),
        }
        let mut seen = BTreeSet::new();
        for rule in &rules {
            if !is_rule_name(&rule.name) || matches!(rule.name.as_str(), "NULL" | "VOID") {
                return Err(GrammarError::InvalidName(rule.name.clone()));
            }
            if !seen.insert(rule.name.as_str()) {
                return Err(GrammarError::Syntax {
                    line: 0,
                    message: format!("rule <{}> defined twice", rule.name),
                });
            }
        }
        for rule in &rules {
            let mut refs = Vec::new();
            rule.expansion.collect_refs(&mut refs);
            if let Some(missing) = refs.iter().find(|r| !seen.contains(*r)) {
                return Err(GrammarError::UnresolvedRuleRef(missing.to_string()));
            }
            let mut pushes = Vec::new();
            rule.expansion.collect_pushes(&mut pushes);
            if let Some(bad) = pushes.iter().find(|p| !refs.contains(p)) {
                return Err(GrammarError::TagSyntax(format!(
                    "$.push(${bad}) in <{}> but <{bad}> is not referenced there",
                    rule.name
                )));
            }
        }
        Ok(Self {
            charset,
            name,
            rules,
        })
    }

    pub fn charset(&self) -> Option<&str> {
        self.charset.as_deref()
    }

    pub fn with_charset(mut self, charset: impl Into<String>) -> Self {
        self.charset = Some(charset.into());
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn public_rule(&self) -> &Rule {
        self.rules
            .iter()
            .find(|r| r.public)
            .expect("validated grammar has a public rule")
    }
}

/// The value produced by a successful match.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SemanticValue {
    Text(String),
    List(Vec<String>),
}

impl SemanticValue {
    /// Spoken rendering: list items joined with " and ".
    pub fn spoken(&self) -> String {
        match self {
            SemanticValue::Text(t) => t.clone(),
            SemanticValue::List(items) => items.join(" and "),
        }
    }

    pub fn items(&self) -> Vec<&str> {
        match self {
            SemanticValue::Text(t) => vec![t.as_str()],
            SemanticValue::List(items) => items.iter().map(String::as_str).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchResult {
    Match(SemanticValue),
    NoMatch,
}

impl MatchResult {
    pub fn value(&self) -> Option<&SemanticValue> {
        match self {
            MatchResult::Match(v) => Some(v),
            MatchResult::NoMatch => None,
        }
    }
}

pub(crate) fn is_rule_name(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
}

pub(crate) fn is_grammar_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}
