use std::fmt::Write as _;

use thiserror::Error;

use super::{DialogMachine, Pending, WalkError, WalkEvent};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScriptError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// Parse a walk script: one event per line, `say <utterance>`,
/// `gui <input id> <value>` or `silence`. Blank lines and `#` comments are
/// skipped.
pub fn parse_script(text: &str) -> Result<Vec<WalkEvent>, ScriptError> {
    let mut events = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: &str| ScriptError::Syntax {
            line: n + 1,
            message: message.to_string(),
        };
        let (cmd, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let event = match cmd {
            "say" => WalkEvent::Voice(rest.to_string()),
            "silence" if rest.is_empty() => WalkEvent::Silence,
            "silence" => return Err(err("silence takes no argument")),
            "gui" => {
                let (id, value) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                if id.is_empty() {
                    return Err(err("gui needs an input id"));
                }
                WalkEvent::Gui {
                    input_id: id.to_string(),
                    value: value.trim().to_string(),
                }
            }
            other => return Err(err(&format!("unknown command {other:?}"))),
        };
        events.push(event);
    }
    Ok(events)
}

fn describe(e: &WalkEvent) -> String {
    match e {
        WalkEvent::Voice(u) => format!("say {u}"),
        WalkEvent::Gui { input_id, value } => format!("gui {input_id} {value}"),
        WalkEvent::Silence => "silence".into(),
    }
}

/// Run events in order and return the transcript: the opening prompts,
/// then each event (`> `), its prompts (`< `) and any pending action (`! `).
/// Stops at the first error.
pub fn run_script(m: &mut DialogMachine, events: &[WalkEvent]) -> Result<String, WalkError> {
    let mut out = String::new();
    for p in m.prompt_log() {
        let _ = writeln!(out, "< {p}");
    }
    for e in events {
        let _ = writeln!(out, "> {}", describe(e));
        let step = m.step(e)?;
        for p in &step.prompts {
            let _ = writeln!(out, "< {p}");
        }
        if step.pending != Pending::None {
            let _ = writeln!(out, "! {}", step.pending.render());
        }
    }
    Ok(out)
}
