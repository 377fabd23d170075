//! Bounded enumeration of a grammar's language.

use std::collections::BTreeSet;

use super::{Expansion, GrammarError, JsgfGrammar};

pub const DEFAULT_ENUMERATION_CAP: usize = 100_000;

type Language = BTreeSet<Vec<String>>;

/// Every token sequence the public rule accepts, with each `+` taken
/// 1..=`max_repeat` times.
pub fn enumerate_language(g: &JsgfGrammar, max_repeat: usize) -> Result<Language, GrammarError> {
    enumerate_language_capped(g, max_repeat, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_language_capped(
    g: &JsgfGrammar,
    max_repeat: usize,
    cap: usize,
) -> Result<Language, GrammarError> {
    if max_repeat == 0 {
        return Err(GrammarError::InvalidArgument("max_repeat must be at least 1".into()));
    }
    let mut e = Enumerator {
        grammar: g,
        max_repeat,
        cap,
        stack: Vec::new(),
    };
    e.rule(&g.public_rule().name)
}

struct Enumerator<'g> {
    grammar: &'g JsgfGrammar,
    max_repeat: usize,
    cap: usize,
    stack: Vec<&'g str>,
}

impl<'g> Enumerator<'g> {
    fn guard(&self, lang: &Language) -> Result<(), GrammarError> {
        if lang.len() > self.cap {
            Err(GrammarError::ExplosionGuard { cap: self.cap })
        } else {
            Ok(())
        }
    }

    fn rule(&mut self, name: &str) -> Result<Language, GrammarError> {
        let rule = self
            .grammar
            .rule(name)
            .ok_or_else(|| GrammarError::UnresolvedRuleRef(name.to_string()))?;
        // A recursive rule has an unbounded language.
        if self.stack.contains(&rule.name.as_str()) {
            return Err(GrammarError::ExplosionGuard { cap: self.cap });
        }
        self.stack.push(&rule.name);
        let lang = self.expansion(&rule.expansion);
        self.stack.pop();
        lang
    }

    fn product(&self, a: &Language, b: &Language) -> Result<Language, GrammarError> {
        let mut out = Language::new();
        for x in a {
            for y in b {
                out.insert(x.iter().chain(y).cloned().collect());
                if out.len() > self.cap {
                    return Err(GrammarError::ExplosionGuard { cap: self.cap });
                }
            }
        }
        Ok(out)
    }

    fn expansion(&mut self, e: &'g Expansion) -> Result<Language, GrammarError> {
        let lang = match e {
            Expansion::Token(t) => Language::from([vec![t.clone()]]),
            Expansion::Null => Language::from([Vec::new()]),
            Expansion::Void => Language::new(),
            Expansion::RuleRef(r) => self.rule(r)?,
            Expansion::Tagged(inner, _) => self.expansion(inner)?,
            Expansion::Sequence(items) => {
                let mut acc = Language::from([Vec::new()]);
                for item in items {
                    let next = self.expansion(item)?;
                    acc = self.product(&acc, &next)?;
                }
                acc
            }
            Expansion::Alternatives(items) => {
                let mut acc = Language::new();
                for item in items {
                    acc.extend(self.expansion(item)?);
                    self.guard(&acc)?;
                }
                acc
            }
            Expansion::Optional(inner) => {
                let mut acc = self.expansion(inner)?;
                acc.insert(Vec::new());
                acc
            }
            Expansion::Repeat(inner) => {
                let once = self.expansion(inner)?;
                let mut total = once.clone();
                let mut power = once.clone();
                for _ in 1..self.max_repeat {
                    power = self.product(&power, &once)?;
                    total.extend(power.iter().cloned());
                    self.guard(&total)?;
                }
                total
            }
        };
        self.guard(&lang)?;
        Ok(lang)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{grammar_for_options, parse_jsgf};
    use super::*;

    fn opts(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn sentences(lang: &Language) -> Vec<String> {
        lang.iter().map(|s| s.join(" ")).collect()
    }

    #[test]
    fn single_choice() {
        let g = grammar_for_options("x", &opts(&["A"]), false).unwrap();
        assert_eq!(sentences(&enumerate_language(&g, 3).unwrap()), ["A"]);
    }

    #[test]
    fn one_repeat_of_multiple_choice() {
        let g = grammar_for_options("xs", &opts(&["A", "B"]), true).unwrap();
        assert_eq!(
            sentences(&enumerate_language(&g, 1).unwrap()),
            ["A", "A and", "B", "B and"]
        );
    }

    #[test]
    fn zero_repeat_is_rejected() {
        let g = grammar_for_options("x", &opts(&["A"]), false).unwrap();
        assert!(matches!(enumerate_language(&g, 0), Err(GrammarError::InvalidArgument(_))));
    }

    #[test]
    fn cap_and_recursion() {
        let g = grammar_for_options("xs", &opts(&["A", "B", "C", "D"]), true).unwrap();
        assert_eq!(
            enumerate_language_capped(&g, 3, 100),
            Err(GrammarError::ExplosionGuard { cap: 100 })
        );
        let r = parse_jsgf("#JSGF V1.0;\ngrammar g;\npublic <a> = x [<a>];").unwrap();
        assert!(matches!(enumerate_language(&r, 2), Err(GrammarError::ExplosionGuard { .. })));
    }
}
