//! Utterance matching with tag evaluation.
//!
//! The matcher explores every parse breadth-first over `(position, env)`
//! states, where `env` holds the rule's current `$` value and the latest
//! value of each referenced rule. Tags run in the order they are reached,
//! so a successful parse carries its semantic value with it.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::{Expansion, JsgfGrammar, MatchResult, SemanticValue, TagAction};

/// Upper bound on live parse states at any point; further states are dropped.
const MAX_STATES: usize = 4096;

/// Case-fold a word and strip surrounding punctuation.
pub fn normalize_word(word: &str) -> String {
    word.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase()
}

/// Whitespace-split, normalized, non-empty words.
pub fn normalize_words(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(normalize_word)
        .filter(|w| !w.is_empty())
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
struct Env {
    value: Option<SemanticValue>,
    refs: BTreeMap<String, SemanticValue>,
}

type States = Vec<(usize, Env)>;

struct Matcher<'g> {
    grammar: &'g JsgfGrammar,
    words: Vec<String>,
    raw: Vec<&'g str>,
    memo: HashMap<(String, usize), Vec<(usize, SemanticValue)>>,
    active: HashSet<(String, usize)>,
}

fn dedup(states: States) -> States {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for s in states {
        if out.len() >= MAX_STATES {
            break;
        }
        if seen.insert(s.clone()) {
            out.push(s);
        }
    }
    out
}

impl Matcher<'_> {
    fn span_text(&self, from: usize, to: usize) -> String {
        self.raw[from..to].join(" ")
    }

    fn expand(&mut self, e: &Expansion, pos: usize, env: Env) -> States {
        match e {
            Expansion::Token(t) => {
                let want = normalize_words(t);
                let end = pos + want.len();
                if end <= self.words.len() && self.words[pos..end] == want[..] {
                    vec![(end, env)]
                } else {
                    Vec::new()
                }
            }
            Expansion::Null => vec![(pos, env)],
            Expansion::Void => Vec::new(),
            Expansion::RuleRef(name) => self
                .rule_values(name, pos)
                .into_iter()
                .map(|(end, value)| {
                    let mut env = env.clone();
                    env.refs.insert(name.clone(), value);
                    (end, env)
                })
                .collect(),
            Expansion::Sequence(items) => {
                let mut states = vec![(pos, env)];
                for item in items {
                    let mut next = Vec::new();
                    for (p, env) in states {
                        next.extend(self.expand(item, p, env));
                    }
                    states = dedup(next);
                    if states.is_empty() {
                        break;
                    }
                }
                states
            }
            Expansion::Alternatives(items) => {
                let mut out = Vec::new();
                for item in items {
                    out.extend(self.expand(item, pos, env.clone()));
                }
                dedup(out)
            }
            Expansion::Optional(inner) => {
                let mut out = self.expand(inner, pos, env.clone());
                out.push((pos, env));
                dedup(out)
            }
            Expansion::Repeat(inner) => {
                let mut results = Vec::new();
                let mut seen = HashSet::new();
                let mut frontier = self.expand(inner, pos, env);
                while !frontier.is_empty() && results.len() < MAX_STATES {
                    let mut next = Vec::new();
                    for state in frontier {
                        if !seen.insert(state.clone()) {
                            continue;
                        }
                        results.push(state.clone());
                        let (p, env) = state;
                        // Each further iteration must consume input.
                        next.extend(
                            self.expand(inner, p, env)
                                .into_iter()
                                .filter(|(p2, _)| *p2 > p),
                        );
                    }
                    frontier = next;
                }
                dedup(results)
            }
            Expansion::Tagged(inner, action) => self
                .expand(inner, pos, env)
                .into_iter()
                .map(|(p, mut env)| {
                    apply(action, &mut env);
                    (p, env)
                })
                .collect(),
        }
    }

    /// Every (end, value) a rule can produce starting at `pos`.
    fn rule_values(&mut self, name: &str, pos: usize) -> Vec<(usize, SemanticValue)> {
        let key = (name.to_string(), pos);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        // Left recursion: the rule is already being expanded at this position.
        if !self.active.insert(key.clone()) {
            return Vec::new();
        }
        let grammar = self.grammar;
        let values = match grammar.rule(name) {
            Some(rule) => {
                let mut seen = HashSet::new();
                self.expand(&rule.expansion, pos, Env::default())
                    .into_iter()
                    .map(|(end, env)| {
                        let value = env
                            .value
                            .unwrap_or_else(|| SemanticValue::Text(self.span_text(pos, end)));
                        (end, value)
                    })
                    .filter(|v| seen.insert(v.clone()))
                    .collect()
            }
            None => Vec::new(),
        };
        self.active.remove(&key);
        self.memo.insert(key, values.clone());
        values
    }
}

fn apply(action: &TagAction, env: &mut Env) {
    match action {
        TagAction::AssignLiteral(s) => env.value = Some(SemanticValue::Text(s.clone())),
        TagAction::NewArray => env.value = Some(SemanticValue::List(Vec::new())),
        TagAction::PushRef(rule) => {
            let Some(pushed) = env.refs.get(rule) else {
                return;
            };
            let mut items = match env.value.take() {
                Some(SemanticValue::List(items)) => items,
                Some(SemanticValue::Text(t)) => vec![t],
                None => Vec::new(),
            };
            items.extend(pushed.items().into_iter().map(str::to_string));
            env.value = Some(SemanticValue::List(items));
        }
    }
}

/// Match a whole utterance against the grammar's public rule. Words are
/// compared after normalization; the first complete parse supplies the
/// value, falling back to the spoken words when no tag assigned one.
pub fn match_utterance(g: &JsgfGrammar, utterance: &str) -> MatchResult {
    let raw: Vec<&str> = utterance
        .split_whitespace()
        .filter(|w| !normalize_word(w).is_empty())
        .collect();
    let words = raw.iter().map(|w| normalize_word(w)).collect();
    let mut m = Matcher {
        grammar: g,
        words,
        raw,
        memo: HashMap::new(),
        active: HashSet::new(),
    };
    let public = g.public_rule().name.as_str();
    let len = m.words.len();
    match m.rule_values(public, 0).into_iter().find(|(end, _)| *end == len) {
        Some((_, value)) => MatchResult::Match(value),
        None => MatchResult::NoMatch,
    }
}
