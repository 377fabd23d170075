//! Structural check of the annotated meeting-scheduler page: whitespace
//! insensitive, exact on attributes and text. Shared with the acceptance
//! suite, so it depends only on roxmltree and encoding_rs.

use roxmltree::{Document, Node, ParsingOptions};

pub const XHTML: &str = "http://www.w3.org/1999/xhtml";
pub const VXML: &str = "http://www.w3.org/2001/vxml";
pub const EV: &str = "http://www.w3.org/2001/xml-events";
pub const XV: &str = "http://www.voicexml.org/2002/xhtml+voice";
pub const PUBLIC_ID: &str = "-//VoiceXML Forum//DTD XHTML+Voice 1.2//EN";
pub const SYSTEM_ID: &str = "http://www.voicexml.org/specs/multimodal/x+v/12/dtd/xhtml+voice12.dtd";

pub const PROMPT: &str = "Please say the participants.";
pub const NOINPUT: &str = "Sorry, I did not hear you. Please say the participants.";
pub const NOMATCH: &str = "Sorry, I did not understand you. Please say the participants.";
pub const NAMES: [&str; 4] = ["Anton, Tudor", "Cesar, Brian", "Danniels, David", "Tejada, Jose"];

fn collapse(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Decode by the encoding named in the XML declaration (UTF-8 if none).
pub fn decode(bytes: &[u8]) -> Result<String, String> {
    let head = String::from_utf8_lossy(&bytes[..bytes.len().min(200)]).into_owned();
    let label = head
        .strip_prefix("<?xml")
        .and_then(|d| d.split("?>").next())
        .and_then(|d| d.split("encoding=\"").nth(1))
        .and_then(|e| e.split('"').next())
        .unwrap_or("utf-8")
        .to_string();
    let enc = encoding_rs::Encoding::for_label(label.as_bytes()).ok_or(format!("unknown encoding {label}"))?;
    let (text, _, bad) = enc.decode(bytes);
    if bad {
        return Err(format!("undecodable bytes for {label}"));
    }
    Ok(text.into_owned())
}

pub fn parse(text: &str) -> Result<Document<'_>, String> {
    let opts = ParsingOptions {
        allow_dtd: true,
        ..ParsingOptions::default()
    };
    Document::parse_with_options(text, opts).map_err(|e| format!("not well-formed: {e}"))
}

fn text_of(n: Node) -> String {
    collapse(&n.descendants().filter(|d| d.is_text()).filter_map(|d| d.text()).collect::<String>())
}

fn vxml<'a, 'i>(n: Node<'a, 'i>, local: &str) -> std::vec::IntoIter<Node<'a, 'i>> {
    n.descendants().filter(|d| d.has_tag_name((VXML, local))).collect::<Vec<_>>().into_iter()
}

/// Checks the annotated scheduler page; `Err` names the first mismatch.
pub fn check_scheduler_annotation(bytes: &[u8]) -> Result<(), String> {
    let text = decode(bytes)?;
    let prolog = collapse(text.split("<html").next().unwrap_or_default());
    if !prolog.starts_with("<?xml version=\"1.0\" encoding=\"") {
        return Err(format!("missing XML declaration: {prolog}"));
    }
    let doctype = format!("<!DOCTYPE html PUBLIC \"{PUBLIC_ID}\" \"{SYSTEM_ID}\">");
    if !prolog.ends_with(&doctype) {
        return Err(format!("doctype mismatch: {prolog}"));
    }
    let doc = parse(&text)?;
    let root = doc.root_element();
    if !root.has_tag_name((XHTML, "html")) {
        return Err("root is not xhtml html".into());
    }
    let mut decls: Vec<(Option<&str>, &str)> = root.namespaces().map(|n| (n.name(), n.uri())).collect();
    decls.sort();
    let want = vec![(None, XHTML), (Some("ev"), EV), (Some("vxml"), VXML), (Some("xv"), XV)];
    if decls != want {
        return Err(format!("namespace declarations {decls:?}"));
    }
    let head = root
        .children()
        .find(|c| c.has_tag_name((XHTML, "head")))
        .ok_or("no head")?;
    let field = vxml(head, "field")
        .find(|f| f.attribute("name") == Some("voice_participants_name"))
        .ok_or("no voice_participants_name field in head")?;
    if field.attribute("modal") != Some("true") {
        return Err("field is not modal=\"true\"".into());
    }
    if field.attribute((XV, "id")) != Some("voice_participants_name") {
        return Err("field xv:id mismatch".into());
    }
    let grammar = vxml(field, "grammar").next().ok_or("no grammar")?;
    let g = collapse(&grammar.descendants().filter_map(|d| d.text()).collect::<String>());
    for name in NAMES {
        let alt = format!("{name} {{$=\"{name}\"}}");
        if !g.contains(&alt) {
            return Err(format!("grammar lacks `{alt}`: {g}"));
        }
    }
    if !g.starts_with("#JSGF V1.0") || !g.contains("grammar participants;") || !g.contains("public <participants>") {
        return Err(format!("grammar header mismatch: {g}"));
    }
    let prompt = vxml(field, "prompt").next().ok_or("no prompt")?;
    if text_of(prompt) != PROMPT || prompt.attribute("bargein") != Some("true") {
        return Err(format!("prompt mismatch: {}", text_of(prompt)));
    }
    for (event, want) in [("noinput", NOINPUT), ("nomatch", NOMATCH)] {
        let c = vxml(field, "catch")
            .find(|c| c.attribute("event") == Some(event))
            .ok_or(format!("no {event} catch"))?;
        if text_of(c) != want {
            return Err(format!("{event} catch text: {}", text_of(c)));
        }
    }
    if !field.ancestors().any(|a| a.has_tag_name((VXML, "form"))) {
        return Err("field outside a vxml form".into());
    }
    let sync = head
        .descendants()
        .filter(|d| d.has_tag_name((XV, "sync")))
        .find(|s| s.attribute((XV, "field")) == Some("#voice_participants_name"))
        .ok_or("no sync for #voice_participants_name")?;
    if sync.attribute((XV, "input")) != Some("participants") {
        return Err("sync input mismatch".into());
    }
    Ok(())
}
