use std::io::{BufRead, Write};
use std::path::Path;

use anyhow::{Context, Result};
use deius_core::walker::{load_machine, parse_script, run_script, DialogMachine, Pending};

/// Scripted: print the transcript, `---`, then the final state as
/// `key=value` lines. Interactive: echo prompts after each typed event;
/// `state` prints the current state, `quit` or end of input stops.
pub fn run(document: &Path, script: Option<&Path>) -> Result<()> {
    let bytes = std::fs::read(document).with_context(|| format!("cannot read {}", document.display()))?;
    let mut machine = load_machine(&bytes).with_context(|| format!("cannot load {}", document.display()))?;
    match script {
        Some(path) => scripted(&mut machine, path),
        None => interactive(&mut machine),
    }
}

fn scripted(machine: &mut DialogMachine, path: &Path) -> Result<()> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let events = parse_script(&text).with_context(|| format!("in {}", path.display()))?;
    let transcript = run_script(machine, &events)?;
    let mut out = std::io::stdout().lock();
    write!(out, "{transcript}---\n{}", machine.snapshot().render_kv())?;
    out.flush()?;
    Ok(())
}

fn interactive(machine: &mut DialogMachine) -> Result<()> {
    let stdin = std::io::stdin();
    let mut out = std::io::stdout().lock();
    for p in machine.prompt_log() {
        writeln!(out, "< {p}")?;
    }
    out.flush()?;
    for line in stdin.lock().lines() {
        let line = line?;
        match line.trim() {
            "quit" | "exit" => break,
            "state" => {
                write!(out, "{}", machine.snapshot().render_text())?;
                out.flush()?;
                continue;
            }
            _ => {}
        }
        let events = match parse_script(&line) {
            Ok(events) => events,
            Err(e) => {
                eprintln!("deius: {e}");
                continue;
            }
        };
        for e in &events {
            match machine.step(e) {
                Ok(step) => {
                    for p in &step.prompts {
                        writeln!(out, "< {p}")?;
                    }
                    if step.pending != Pending::None {
                        writeln!(out, "! {}", step.pending.render())?;
                    }
                }
                Err(e) => eprintln!("deius: {e}"),
            }
        }
        out.flush()?;
    }
    write!(out, "---\n{}", machine.snapshot().render_text())?;
    out.flush()?;
    Ok(())
}
