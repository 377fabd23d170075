use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LexiconError {
    #[error("lexicon line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("invalid lexicon entry {word:?}: {message}")]
    Entry { word: String, message: String },
}

/// Shortcut words with positive ranking weights.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ShortcutLexicon {
    entries: BTreeMap<String, f64>,
}

impl ShortcutLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build from (word, weight) pairs. Words are lowercased; each must be a
    /// single alphanumeric word with a finite positive weight.
    pub fn from_entries<I, S>(entries: I) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: AsRef<str>,
    {
        let mut lex = Self::new();
        for (word, weight) in entries {
            lex.insert(word.as_ref(), weight)
                .map_err(|message| LexiconError::Entry {
                    word: word.as_ref().to_string(),
                    message,
                })?;
        }
        Ok(lex)
    }

    fn insert(&mut self, word: &str, weight: f64) -> Result<(), String> {
        let word = word.trim().to_lowercase();
        if word.is_empty() || !word.chars().all(char::is_alphanumeric) {
            return Err("word must be a single alphanumeric word".into());
        }
        if !(weight.is_finite() && weight > 0.0) {
            return Err(format!("weight {weight} is not a positive number"));
        }
        if self.entries.insert(word, weight).is_some() {
            return Err("word listed twice".into());
        }
        Ok(())
    }

    /// Parse the text format: one `word<TAB>weight` per line; blank lines and
    /// lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut lex = Self::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let err = |message: String| LexiconError::Line { line, message };
            let (word, weight) = match trimmed.split_once('\t') {
                Some(parts) => parts,
                None => {
                    let mut parts = trimmed.split_whitespace();
                    match (parts.next(), parts.next(), parts.next()) {
                        (Some(w), Some(n), None) => (w, n),
                        _ => return Err(err("expected `word<TAB>weight`".into())),
                    }
                }
            };
            let weight: f64 = weight
                .trim()
                .parse()
                .map_err(|_| err(format!("bad weight {:?}", weight.trim())))?;
            lex.insert(word, weight).map_err(err)?;
        }
        Ok(lex)
    }

    pub fn weight(&self, word: &str) -> Option<f64> {
        self.entries.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in alphabetical order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(w, n)| (w.as_str(), *n))
    }

    /// Entries by weight descending, then alphabetically.
    pub fn by_weight(&self) -> Vec<(&str, f64)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_tab_separated_lines() {
        let lex = ShortcutLexicon::parse("# shortcuts\nnews\t5\n\nSports\t2.5\nweather 1\n").unwrap();
        assert_eq!(lex.len(), 3);
        assert_eq!(lex.weight("sports"), Some(2.5));
        assert_eq!(lex.by_weight()[0], ("news", 5.0));
    }

    #[test]
    fn rejects_bad_lines() {
        for bad in ["news\t0", "news\t-1", "news\tabc", "two words\t1", "news\t1\nnews\t2", "news"] {
            assert!(ShortcutLexicon::parse(bad).is_err(), "{bad:?}");
        }
        let err = ShortcutLexicon::parse("ok\t1\nbad\tx").unwrap_err();
        assert!(matches!(err, LexiconError::Line { line: 2, .. }));
    }
}
