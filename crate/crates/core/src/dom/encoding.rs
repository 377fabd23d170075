//! Character encoding resolution for incoming pages and outgoing documents.

use encoding_rs::{Encoding, UTF_8, WINDOWS_1252};

use super::DomError;

const LATIN1_LABELS: &[&str] = &[
    "iso-8859-1",
    "iso8859-1",
    "iso_8859-1",
    "iso88591",
    "iso-ir-100",
    "latin1",
    "l1",
    "cp819",
    "ibm819",
    "csisolatin1",
];

/// A resolved document charset: the label written into output headers plus
/// the codec behind it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Charset {
    label: String,
    encoding: &'static Encoding,
    latin1: bool,
}

impl Charset {
    pub fn utf8() -> Self {
        Self {
            label: "utf-8".to_string(),
            encoding: UTF_8,
            latin1: false,
        }
    }

    pub fn latin1() -> Self {
        Self {
            label: "iso-8859-1".to_string(),
            encoding: WINDOWS_1252,
            latin1: true,
        }
    }

    /// Resolve an encoding label (`"ISO-8859-1"`, `"utf8"`, `"shift_jis"`, ...).
    pub fn from_label(label: &str) -> Result<Self, DomError> {
        let trimmed = label.trim().trim_matches(|c| c == '"' || c == '\'');
        let lower = trimmed.to_ascii_lowercase();
        if LATIN1_LABELS.contains(&lower.as_str()) {
            return Ok(Self::latin1());
        }
        let encoding = Encoding::for_label(lower.as_bytes())
            .ok_or_else(|| DomError::EncodingUnsupported(trimmed.to_string()))?;
        if encoding == encoding_rs::REPLACEMENT {
            return Err(DomError::EncodingUnsupported(trimmed.to_string()));
        }
        let encoding = encoding.output_encoding();
        Ok(Self {
            label: encoding.name().to_ascii_lowercase(),
            encoding,
            latin1: false,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_utf8(&self) -> bool {
        self.encoding == UTF_8
    }

    pub fn decode(&self, bytes: &[u8]) -> String {
        let bytes = strip_bom(bytes, self.encoding);
        let (text, _) = self.encoding.decode_without_bom_handling(bytes);
        text.into_owned()
    }

    /// Encode text; characters the charset cannot represent become decimal
    /// character references.
    pub fn encode(&self, text: &str) -> Vec<u8> {
        if self.latin1 {
            let mut out = Vec::with_capacity(text.len());
            for c in text.chars() {
                if latin1_byte(c).is_some() {
                    out.push(c as u8);
                } else {
                    out.extend_from_slice(format!("&#{};", c as u32).as_bytes());
                }
            }
            return out;
        }
        if self.encoding == UTF_8 {
            return text.as_bytes().to_vec();
        }
        let (bytes, _, _) = self.encoding.encode(text);
        bytes.into_owned()
    }

    /// True when every character of `text` has a direct byte representation.
    pub fn can_encode(&self, text: &str) -> bool {
        if self.latin1 {
            return text.chars().all(|c| latin1_byte(c).is_some());
        }
        if self.encoding == UTF_8 {
            return true;
        }
        let mut encoder = self.encoding.new_encoder();
        let mut buf = vec![0u8; text.len() * 4 + 16];
        let (result, _, _) =
            encoder.encode_from_utf8_without_replacement(text, &mut buf, true);
        matches!(result, encoding_rs::EncoderResult::InputEmpty)
    }
}

impl Default for Charset {
    fn default() -> Self {
        Self::utf8()
    }
}

fn latin1_byte(c: char) -> Option<u8> {
    let v = c as u32;
    if v <= 0x7F || (0xA0..=0xFF).contains(&v) {
        Some(v as u8)
    } else {
        None
    }
}

fn strip_bom<'a>(bytes: &'a [u8], encoding: &'static Encoding) -> &'a [u8] {
    match Encoding::for_bom(bytes) {
        Some((bom_enc, len)) if bom_enc == encoding => &bytes[len..],
        _ => bytes,
    }
}

/// Determine the charset a document declares for itself: a byte order mark,
/// an XML declaration, or a `<meta>` charset. `None` when nothing is declared.
pub fn sniff_declared(bytes: &[u8]) -> Result<Option<Charset>, DomError> {
    if let Some((encoding, _)) = Encoding::for_bom(bytes) {
        return Ok(Some(Charset {
            label: encoding.name().to_ascii_lowercase(),
            encoding,
            latin1: false,
        }));
    }
    let window = &bytes[..bytes.len().min(4096)];
    let head: String = window.iter().map(|&b| b as char).collect();
    let lower = head.to_ascii_lowercase();

    if let Some(label) = xml_decl_encoding(&lower) {
        return declared(label);
    }
    let mut from = 0;
    while let Some(pos) = lower[from..].find("<meta") {
        let start = from + pos;
        let end = lower[start..].find('>').map_or(lower.len(), |e| start + e);
        if let Some(label) = meta_charset(&lower[start..end]) {
            return declared(label);
        }
        from = end.max(start + 5);
        if from >= lower.len() {
            break;
        }
    }
    Ok(None)
}

fn declared(label: &str) -> Result<Option<Charset>, DomError> {
    let charset = Charset::from_label(label)?;
    // A meta tag readable as ASCII cannot really be UTF-16.
    if charset.encoding == encoding_rs::UTF_16LE || charset.encoding == encoding_rs::UTF_16BE {
        return Ok(Some(Charset::utf8()));
    }
    Ok(Some(charset))
}

fn xml_decl_encoding(lower: &str) -> Option<&str> {
    let body = lower.trim_start();
    if !body.starts_with("<?xml") {
        return None;
    }
    let decl = &body[..body.find("?>")?];
    let at = decl.find("encoding")?;
    quoted_or_bare_value(&decl[at + "encoding".len()..])
}

fn meta_charset(tag: &str) -> Option<&str> {
    let at = tag.find("charset")?;
    quoted_or_bare_value(&tag[at + "charset".len()..])
}

fn quoted_or_bare_value(rest: &str) -> Option<&str> {
    let rest = rest.trim_start().strip_prefix('=')?.trim_start();
    let value = match rest.chars().next()? {
        q @ ('"' | '\'') => {
            let inner = &rest[1..];
            &inner[..inner.find(q).unwrap_or(inner.len())]
        }
        _ => {
            let end = rest
                .find(|c: char| c.is_whitespace() || matches!(c, ';' | '"' | '\'' | '>' | '/'))
                .unwrap_or(rest.len());
            &rest[..end]
        }
    };
    let value = value.trim();
    (!value.is_empty()).then_some(value)
}
