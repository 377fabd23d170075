//! JSGF text form: canonical writer and a parser for the supported subset.

use super::{Expansion, GrammarError, JsgfGrammar, Rule, TagAction};

/// Characters that force a token into double quotes.
const SPECIAL: &[char] = &[
    '{', '}', '[', ']', '(', ')', '<', '>', '|', '*', '+', ';', '=', '/', '"', '\\',
];

/// Canonical JSGF text: header, grammar declaration, then one rule per line
/// with the public rule first.
pub fn serialize_jsgf(g: &JsgfGrammar) -> String {
    let mut out = String::new();
    match g.charset() {
        Some(cs) => out.push_str(&format!("#JSGF V1.0 {cs};\n")),
        None => out.push_str("#JSGF V1.0;\n"),
    }
    out.push_str(&format!("grammar {};\n", g.name()));
    let public = g.rules().iter().filter(|r| r.public);
    let private = g.rules().iter().filter(|r| !r.public);
    for rule in public.chain(private) {
        if rule.public {
            out.push_str("public ");
        }
        out.push_str(&format!("<{}> = ", rule.name));
        write_alternatives(&rule.expansion, &mut out);
        out.push_str(";\n");
    }
    out
}

fn write_alternatives(e: &Expansion, out: &mut String) {
    match e {
        Expansion::Alternatives(items) => {
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(" | ");
                }
                write_sequence_level(item, out);
            }
        }
        other => write_sequence_level(other, out),
    }
}

/// Write `e` where a sequence is allowed without parentheses.
fn write_sequence_level(e: &Expansion, out: &mut String) {
    match e {
        Expansion::Sequence(items) => {
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                write_unit(item, out);
            }
        }
        Expansion::Alternatives(_) => {
            out.push('(');
            write_alternatives(e, out);
            out.push(')');
        }
        other => write_unit(other, out),
    }
}

/// Write `e` as a single unit, parenthesizing compound expansions.
fn write_unit(e: &Expansion, out: &mut String) {
    match e {
        Expansion::Token(t) => write_token(t, out),
        Expansion::RuleRef(r) => out.push_str(&format!("<{r}>")),
        Expansion::Null => out.push_str("<NULL>"),
        Expansion::Void => out.push_str("<VOID>"),
        Expansion::Optional(inner) => {
            out.push('[');
            write_alternatives(inner, out);
            out.push(']');
        }
        Expansion::Repeat(inner) => {
            match inner.as_ref() {
                Expansion::Token(_)
                | Expansion::RuleRef(_)
                | Expansion::Null
                | Expansion::Void
                | Expansion::Optional(_) => write_unit(inner, out),
                other => {
                    out.push('(');
                    write_alternatives(other, out);
                    out.push(')');
                }
            }
            out.push('+');
        }
        Expansion::Tagged(inner, action) => {
            match inner.as_ref() {
                Expansion::Sequence(_) | Expansion::Alternatives(_) => {
                    out.push('(');
                    write_alternatives(inner, out);
                    out.push(')');
                }
                other => write_unit(other, out),
            }
            out.push(' ');
            write_tag(action, out);
        }
        Expansion::Sequence(_) | Expansion::Alternatives(_) => {
            out.push('(');
            write_alternatives(e, out);
            out.push(')');
        }
    }
}

fn write_token(t: &str, out: &mut String) {
    let needs_quotes = t.is_empty()
        || t.contains(char::is_whitespace)
        || t.contains(SPECIAL)
        || t.starts_with('$')
        || t.starts_with('#');
    if needs_quotes {
        out.push('"');
        for c in t.chars() {
            if c == '"' || c == '\\' {
                out.push('\\');
            }
            out.push(c);
        }
        out.push('"');
    } else {
        out.push_str(t);
    }
}

fn write_tag(action: &TagAction, out: &mut String) {
    match action {
        TagAction::AssignLiteral(s) => {
            out.push_str("{$=\"");
            for c in s.chars() {
                if c == '"' || c == '\\' {
                    out.push('\\');
                }
                out.push(c);
            }
            out.push_str("\"}");
        }
        TagAction::NewArray => out.push_str("{$ = new Array;}"),
        TagAction::PushRef(r) => out.push_str(&format!("{{$.push(${r})}}")),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Lex {
    Word(String),
    Quoted(String),
    Ref(String),
    Tag(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Bar,
    Plus,
    Star,
    Semi,
    Equals,
    Weight,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

fn syntax(line: usize, message: impl Into<String>) -> GrammarError {
    GrammarError::Syntax {
        line,
        message: message.into(),
    }
}

impl<'a> Lexer<'a> {
    fn line(&self) -> usize {
        1 + self.src[..self.pos].matches('\n').count()
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_trivia(&mut self) -> Result<(), GrammarError> {
        loop {
            let rest = self.rest();
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with("//") {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else if let Some(body) = trimmed.strip_prefix("/*") {
                let end = body
                    .find("*/")
                    .ok_or_else(|| syntax(self.line(), "unterminated comment"))?;
                self.pos += 2 + end + 2;
            } else {
                return Ok(());
            }
        }
    }

    /// Read up to the matching closing delimiter, honoring quoted strings,
    /// backslash escapes and nested parentheses.
    fn delimited(&mut self, close: char) -> Result<String, GrammarError> {
        let line = self.line();
        let rest = self.rest();
        let mut in_quote: Option<char> = None;
        let mut escaped = false;
        let mut depth = 0usize;
        for (i, c) in rest.char_indices() {
            if escaped {
                escaped = false;
                continue;
            }
            match (in_quote, c) {
                (_, '\\') => escaped = true,
                (Some(q), c) if c == q => in_quote = None,
                (Some(_), _) => {}
                (None, '"' | '\'') => in_quote = Some(c),
                (None, '(') => depth += 1,
                (None, ')') if depth > 0 => depth -= 1,
                (None, c) if c == close => {
                    self.pos += i + c.len_utf8();
                    return Ok(rest[..i].to_string());
                }
                _ => {}
            }
        }
        Err(syntax(line, format!("missing '{close}'")))
    }

    fn next(&mut self) -> Result<Option<(Lex, usize)>, GrammarError> {
        self.skip_trivia()?;
        let line = self.line();
        let rest = self.rest();
        let Some(c) = rest.chars().next() else {
            return Ok(None);
        };
        let single = |lex: Lex, me: &mut Self| {
            me.pos += 1;
            Ok(Some((lex, line)))
        };
        match c {
            '<' => {
                let end = rest
                    .find('>')
                    .ok_or_else(|| syntax(line, "unterminated rule reference"))?;
                self.pos += end + 1;
                Ok(Some((Lex::Ref(rest[1..end].trim().to_string()), line)))
            }
            '{' => {
                self.pos += 1;
                let body = self.delimited('}')?;
                Ok(Some((Lex::Tag(body), line)))
            }
            '(' => {
                let after = rest[1..].trim_start();
                if after.starts_with('$') {
                    self.pos += 1;
                    let body = self.delimited(')')?;
                    Ok(Some((Lex::Tag(body), line)))
                } else {
                    single(Lex::LParen, self)
                }
            }
            ')' => single(Lex::RParen, self),
            '[' => single(Lex::LBracket, self),
            ']' => single(Lex::RBracket, self),
            '|' => single(Lex::Bar, self),
            '+' => single(Lex::Plus, self),
            '*' => single(Lex::Star, self),
            ';' => single(Lex::Semi, self),
            '=' => single(Lex::Equals, self),
            '/' => {
                self.pos += 1;
                self.delimited('/')?;
                Ok(Some((Lex::Weight, line)))
            }
            '"' => {
                self.pos += 1;
                let mut out = String::new();
                let mut chars = self.rest().char_indices();
                loop {
                    match chars.next() {
                        None => return Err(syntax(line, "unterminated quoted token")),
                        Some((i, '"')) => {
                            self.pos += i + 1;
                            break;
                        }
                        Some((_, '\\')) => match chars.next() {
                            Some((_, e)) => out.push(e),
                            None => return Err(syntax(line, "unterminated quoted token")),
                        },
                        Some((_, ch)) => out.push(ch),
                    }
                }
                Ok(Some((Lex::Quoted(out), line)))
            }
            _ => {
                let end = rest
                    .find(|ch: char| ch.is_whitespace() || SPECIAL.contains(&ch))
                    .unwrap_or(rest.len());
                if end == 0 {
                    return Err(syntax(line, format!("unexpected character {c:?}")));
                }
                self.pos += end;
                Ok(Some((Lex::Word(rest[..end].to_string()), line)))
            }
        }
    }
}

/// Parse JSGF text into a validated grammar.
pub fn parse_jsgf(text: &str) -> Result<JsgfGrammar, GrammarError> {
    let text = text.trim_start_matches('\u{feff}').trim_start();
    if !text.starts_with("#JSGF") {
        let first = text.lines().next().unwrap_or_default();
        return Err(GrammarError::BadHeader(first.to_string()));
    }
    let header_end = text
        .find(';')
        .ok_or_else(|| GrammarError::BadHeader("header is not terminated by ';'".into()))?;
    let header: Vec<&str> = text[5..header_end].split_whitespace().collect();
    let charset = match header.as_slice() {
        [version, rest @ ..] if version.starts_with('V') && rest.len() <= 2 => {
            rest.first().map(|s| s.to_string())
        }
        _ => return Err(GrammarError::BadHeader(text[..header_end].to_string())),
    };

    let mut lexer = Lexer {
        src: text,
        pos: header_end + 1,
    };
    let mut tokens = Vec::new();
    while let Some(tok) = lexer.next()? {
        tokens.push(tok);
    }
    let mut p = Parser { tokens, pos: 0 };

    p.expect_word("grammar")?;
    let name = match p.bump() {
        Some((Lex::Word(w), _)) => w,
        other => return Err(p.unexpected(other, "grammar name")),
    };
    p.expect(Lex::Semi)?;

    let mut rules = Vec::new();
    while !p.at_end() {
        let public = p.eat_word("public");
        if p.peek_word("import") {
            return Err(syntax(p.line(), "import declarations are not supported"));
        }
        let rule_name = match p.bump() {
            Some((Lex::Ref(r), _)) => r,
            other => return Err(p.unexpected(other, "rule name")),
        };
        p.expect(Lex::Equals)?;
        let expansion = p.alternatives()?;
        p.expect(Lex::Semi)?;
        rules.push(Rule {
            name: rule_name,
            public,
            expansion,
        });
    }
    JsgfGrammar::new(charset, name, rules)
}

struct Parser {
    tokens: Vec<(Lex, usize)>,
    pos: usize,
}

impl Parser {
    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn line(&self) -> usize {
        self.tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map_or(1, |t| t.1)
    }

    fn peek(&self) -> Option<&Lex> {
        self.tokens.get(self.pos).map(|t| &t.0)
    }

    fn bump(&mut self) -> Option<(Lex, usize)> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn unexpected(&self, got: Option<(Lex, usize)>, wanted: &str) -> GrammarError {
        match got {
            Some((lex, line)) => syntax(line, format!("expected {wanted}, found {lex:?}")),
            None => syntax(self.line(), format!("expected {wanted}, found end of input")),
        }
    }

    fn expect(&mut self, lex: Lex) -> Result<(), GrammarError> {
        match self.bump() {
            Some((got, _)) if got == lex => Ok(()),
            other => Err(self.unexpected(other, &format!("{lex:?}"))),
        }
    }

    fn peek_word(&self, word: &str) -> bool {
        matches!(self.peek(), Some(Lex::Word(w)) if w == word)
    }

    fn eat_word(&mut self, word: &str) -> bool {
        if self.peek_word(word) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_word(&mut self, word: &str) -> Result<(), GrammarError> {
        if self.eat_word(word) {
            Ok(())
        } else {
            let got = self.bump();
            Err(self.unexpected(got, word))
        }
    }

    fn alternatives(&mut self) -> Result<Expansion, GrammarError> {
        let mut items = vec![self.sequence()?];
        while self.peek() == Some(&Lex::Bar) {
            self.pos += 1;
            items.push(self.sequence()?);
        }
        Ok(Expansion::alternatives(items))
    }

    fn sequence(&mut self) -> Result<Expansion, GrammarError> {
        let mut items = Vec::new();
        loop {
            match self.peek() {
                Some(
                    Lex::Word(_) | Lex::Quoted(_) | Lex::Ref(_) | Lex::LParen | Lex::LBracket,
                ) => items.push(self.item()?),
                Some(Lex::Tag(_)) => {
                    return Err(GrammarError::TagSyntax(
                        "tag does not follow an expansion".into(),
                    ))
                }
                Some(Lex::Weight) => return Err(syntax(self.line(), "weights are not supported")),
                _ => break,
            }
        }
        if items.is_empty() {
            return Err(syntax(self.line(), "empty expansion"));
        }
        Ok(Expansion::sequence(items))
    }

    fn item(&mut self) -> Result<Expansion, GrammarError> {
        let mut unit = match self.bump() {
            Some((Lex::Word(w), _)) => Expansion::Token(w),
            Some((Lex::Quoted(q), _)) => Expansion::Token(q),
            Some((Lex::Ref(r), line)) => match r.as_str() {
                "NULL" => Expansion::Null,
                "VOID" => Expansion::Void,
                r if super::is_rule_name(r) => Expansion::RuleRef(r.to_string()),
                r => return Err(syntax(line, format!("bad rule name <{r}>"))),
            },
            Some((Lex::LParen, _)) => {
                let inner = self.alternatives()?;
                self.expect(Lex::RParen)?;
                inner
            }
            Some((Lex::LBracket, _)) => {
                let inner = self.alternatives()?;
                self.expect(Lex::RBracket)?;
                Expansion::Optional(Box::new(inner))
            }
            other => return Err(self.unexpected(other, "expansion")),
        };
        loop {
            match self.peek() {
                Some(Lex::Plus) => {
                    self.pos += 1;
                    unit = Expansion::Repeat(Box::new(unit));
                }
                Some(Lex::Star) => {
                    return Err(syntax(self.line(), "kleene star is not supported"));
                }
                Some(Lex::Tag(_)) => {
                    let Some((Lex::Tag(body), _)) = self.bump() else {
                        unreachable!()
                    };
                    unit = unit.tagged(parse_tag(&body)?);
                }
                _ => return Ok(unit),
            }
        }
    }
}

/// Parse one tag body (without its delimiters).
pub(crate) fn parse_tag(body: &str) -> Result<TagAction, GrammarError> {
    let bad = || GrammarError::TagSyntax(body.trim().to_string());
    let s = body.trim();
    let s = s.strip_suffix(';').unwrap_or(s).trim();
    if s.contains(';') && !s.contains(['"', '\'']) {
        return Err(bad());
    }
    let rest = s.strip_prefix('$').ok_or_else(bad)?.trim_start();
    if let Some(call) = rest.strip_prefix(".push") {
        let inner = call
            .trim()
            .strip_prefix('(')
            .and_then(|c| c.strip_suffix(')'))
            .ok_or_else(bad)?
            .trim();
        let name = inner.strip_prefix('$').ok_or_else(bad)?;
        if !super::is_rule_name(name) {
            return Err(bad());
        }
        return Ok(TagAction::PushRef(name.to_string()));
    }
    let value = rest.strip_prefix('=').ok_or_else(bad)?.trim();
    if let Some(ctor) = value.strip_prefix("new") {
        let ctor = ctor.trim();
        if ctor == "Array" || ctor == "Array()" {
            return Ok(TagAction::NewArray);
        }
        return Err(bad());
    }
    let quote = value.chars().next().filter(|c| *c == '"' || *c == '\'').ok_or_else(bad)?;
    let mut out = String::new();
    let mut chars = value[1..].chars();
    loop {
        match chars.next() {
            None => return Err(bad()),
            Some('\\') => out.push(chars.next().ok_or_else(bad)?),
            Some(c) if c == quote => break,
            Some(c) => out.push(c),
        }
    }
    if !chars.as_str().trim().is_empty() {
        return Err(bad());
    }
    Ok(TagAction::AssignLiteral(out))
}
