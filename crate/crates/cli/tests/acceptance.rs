//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

#[path = "../../core/tests/common/xv_check.rs"]
mod xv_check;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use axum::extract::Path as UrlPath;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use deius_core::annotator::{rewrite_links, strip_voice_markup, unrewrite_links};
use deius_core::dom::{from_xml, parse_html, serialize_xhtml, DomTree, Element, Node};
use deius_core::grammar::{
    enumerate_language, grammar_for_options, match_utterance, serialize_jsgf, MatchResult, SemanticValue,
};
use deius_core::page::{rank_entries, ShortcutLexicon};
use deius_core::pipeline::{annotate_page, plan_page, prepare_page, PipelineConfig, PipelineOutput};
use deius_core::walker::{load_machine, parse_script, run_script, DialogMachine, FieldState, Pending, WalkEvent};
use deius_service::{serve_on, ServiceConfig};
use tokio::net::TcpListener;
use url::Url;

const SCHEDULER_BUDGET: Duration = Duration::from_secs(1);
const GRAMMAR_BUDGET: Duration = Duration::from_secs(30);
const MIN_GRAMMAR_INSTANCES: usize = 200;
const SYNC_BUDGET: Duration = Duration::from_secs(10);
const MIN_CORPUS_PAGES: usize = 20;
const DETERMINISM_RUNS: usize = 3;
const LARGE_PAGE_BYTES: usize = 500 * 1024;
const LARGE_PAGE_BUDGET: Duration = Duration::from_secs(1);

const PAGE_URL: &str = "http://example.org/site/page.html";
const FIELD: &str = "voice_participants_name";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(name: &str) -> Vec<u8> {
    std::fs::read(fixtures_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn corpus() -> Vec<(String, Vec<u8>)> {
    let mut pages: Vec<(String, Vec<u8>)> = std::fs::read_dir(fixtures_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "html"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    pages.sort();
    pages
}

fn page_url() -> Url {
    Url::parse(PAGE_URL).unwrap()
}

fn mw() -> Url {
    Url::parse("http://mw:8080/").unwrap()
}

fn proxied() -> PipelineConfig {
    PipelineConfig {
        middleware_base: Some(mw()),
        ..PipelineConfig::default()
    }
}

fn annotate(bytes: &[u8]) -> PipelineOutput {
    annotate_page(bytes, &page_url(), &ShortcutLexicon::new(), &PipelineConfig::default()).unwrap()
}

fn scheduler_only() -> Vec<u8> {
    let options: String = xv_check::NAMES.iter().map(|n| format!("<option> {n} </option>\n")).collect();
    format!(r#"<select name="participants" id="participants" multiple="multiple" size="10" width="100%">{options}</select>"#)
        .into_bytes()
}

fn criterion_1() -> Outcome {
    let bytes = fixture("scheduler.html");
    let start = Instant::now();
    let out = annotate(&bytes);
    xv_check::check_scheduler_annotation(&out.bytes)?;
    let elapsed = start.elapsed();
    ensure(elapsed < SCHEDULER_BUDGET, || format!("took {elapsed:?}"))?;
    xv_check::check_scheduler_annotation(&annotate(&scheduler_only()).bytes).map_err(|e| format!("bare select: {e}"))?;
    Ok(format!("structure matches in {elapsed:?}"))
}

/// Sentences of an option grammar with the values each may carry, by
/// direct recursion over how many items are picked.
fn oracle(options: &[String], multiple: bool, max_repeat: usize) -> BTreeMap<Vec<String>, BTreeSet<SemanticValue>> {
    let words = |o: &str| o.split_whitespace().map(str::to_string).collect::<Vec<_>>();
    let mut out: BTreeMap<Vec<String>, BTreeSet<SemanticValue>> = BTreeMap::new();
    if !multiple {
        for o in options {
            out.entry(words(o)).or_default().insert(SemanticValue::Text(o.clone()));
        }
        return out;
    }
    let mut frontier: Vec<(Vec<String>, Vec<String>)> = vec![(Vec::new(), Vec::new())];
    for _ in 0..max_repeat {
        let mut next = Vec::new();
        for (tokens, picked) in &frontier {
            for o in options {
                for and in [false, true] {
                    let mut t = tokens.clone();
                    t.extend(words(o));
                    if and {
                        t.push("and".into());
                    }
                    let mut p = picked.clone();
                    p.push(o.clone());
                    out.entry(t.clone()).or_default().insert(SemanticValue::List(p.clone()));
                    next.push((t, p));
                }
            }
        }
        frontier = next;
    }
    out
}

fn criterion_2() -> Outcome {
    let pools: [&[&str]; 2] = [
        &["red", "green", "blue", "light blue", "Dark, Red"],
        &["Anton, Tudor", "Cesar, Brian", "New York", "york", "x"],
    ];
    let start = Instant::now();
    let mut instances = 0;
    for pool in pools {
        for n in 1..=4 {
            for first in 0..pool.len() {
                let options: Vec<String> = (0..n).map(|i| pool[(first + i) % pool.len()].to_string()).collect();
                for multiple in [false, true] {
                    let g = grammar_for_options("items", &options, multiple).map_err(|e| e.to_string())?;
                    for max_repeat in 1..=3 {
                        let lang = enumerate_language(&g, max_repeat).map_err(|e| e.to_string())?;
                        let expected = oracle(&options, multiple, max_repeat);
                        let keys: BTreeSet<Vec<String>> = expected.keys().cloned().collect();
                        ensure(lang == keys, || format!("{options:?} multiple={multiple} r={max_repeat}: language differs"))?;
                        for (sentence, values) in &expected {
                            match match_utterance(&g, &sentence.join(" ")) {
                                MatchResult::Match(v) if values.contains(&v) => {}
                                other => return Err(format!("{sentence:?}: {other:?}, expected one of {values:?}")),
                            }
                        }
                        for probe in ["zzz", "and", ""] {
                            ensure(match_utterance(&g, probe) == MatchResult::NoMatch, || format!("{options:?} accepted {probe:?}"))?;
                        }
                        instances += 1;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(instances >= MIN_GRAMMAR_INSTANCES, || format!("only {instances} instances"))?;
    ensure(elapsed < GRAMMAR_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{instances} grammars agree with the oracle in {elapsed:?}"))
}

fn say(m: &mut DialogMachine, u: &str) -> Result<Vec<String>, String> {
    m.step(&WalkEvent::Voice(u.into())).map(|s| s.prompts).map_err(|e| e.to_string())
}

fn gui(m: &mut DialogMachine, id: &str, v: &str) -> Result<Vec<String>, String> {
    m.step(&WalkEvent::Gui {
        input_id: id.into(),
        value: v.into(),
    })
    .map(|s| s.prompts)
    .map_err(|e| e.to_string())
}

fn read(m: &DialogMachine) -> (Option<SemanticValue>, Vec<String>) {
    (
        m.field_state(FIELD).and_then(FieldState::value).cloned(),
        m.gui_value("participants").unwrap_or_default().to_vec(),
    )
}

fn selects_page(fields: &[(&[&str], bool)]) -> Vec<u8> {
    let mut html = String::from(r#"<form id="f" action="/go">"#);
    for (i, (options, multiple)) in fields.iter().enumerate() {
        html.push_str(&format!(r#"<select id="s{i}" name="s{i}"{}>"#, if *multiple { " multiple" } else { "" }));
        for (k, o) in options.iter().enumerate() {
            html.push_str(&format!(r#"<option value="v{k}">{o}</option>"#));
        }
        html.push_str("</select>");
    }
    html.push_str("</form>");
    html.into_bytes()
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let doc = annotate(&fixture("scheduler.html")).bytes;
    let machine = || load_machine(&doc).map_err(|e| e.to_string());
    let g = grammar_for_options("participants", &xv_check::NAMES.map(String::from), true).map_err(|e| e.to_string())?;
    let utterances = enumerate_language(&g, 2).map_err(|e| e.to_string())?;
    for u in &utterances {
        let u = u.join(" ");
        let mut by_voice = machine()?;
        say(&mut by_voice, &u)?;
        let voiced = read(&by_voice);
        let value = voiced.0.clone().ok_or_else(|| format!("{u:?} not accepted"))?;
        let shown: Vec<&str> = voiced.1.iter().map(String::as_str).collect();
        ensure(value.items() == shown, || format!("{u:?}: GUI shows {shown:?}"))?;
        let mut by_gui = machine()?;
        gui(&mut by_gui, "participants", &value.items().join("|"))?;
        ensure(read(&by_gui) == voiced, || format!("{u:?}: GUI fill reads back differently"))?;
        let mut submits = Vec::new();
        for m in [&mut by_voice, &mut by_gui] {
            say(m, "yes")?;
            say(m, "yes")?;
            submits.push(m.snapshot().pending);
        }
        ensure(matches!(submits[0], Pending::Submit { .. }) && submits[0] == submits[1], || {
            format!("{u:?}: submits {submits:?}")
        })?;
    }

    let fields: [(&[&str], bool); 3] = [
        (&["red", "green", "blue"], false),
        (&["Anton, Tudor", "Cesar, Brian", "light grey"], true),
        (&["yes please", "no thanks"], false),
    ];
    let picks: [&[&str]; 3] = [&["green"], &["light grey", "Anton, Tudor"], &["no thanks"]];
    let page = annotate(&selects_page(&fields)).bytes;
    let mut payloads = BTreeSet::new();
    for mask in 0..(1 << fields.len()) {
        let mut m = load_machine(&page).map_err(|e| e.to_string())?;
        for (i, chosen) in picks.iter().enumerate() {
            if mask & (1 << i) != 0 {
                gui(&mut m, &format!("s{i}"), &chosen.join("|"))?;
            } else {
                say(&mut m, &chosen.join(" and "))?;
            }
            say(&mut m, "yes")?;
        }
        let pending = m.step(&WalkEvent::Voice("yes".into())).map_err(|e| e.to_string())?.pending;
        ensure(matches!(pending, Pending::Submit { .. }), || format!("mask {mask}: {pending:?}"))?;
        payloads.insert(pending.render());
    }
    ensure(payloads.len() == 1, || format!("interleavings disagree: {payloads:?}"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < SYNC_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} utterances and {} interleavings agree in {elapsed:?}",
        utterances.len(),
        1 << fields.len()
    ))
}

fn criterion_4() -> Outcome {
    let mut m = load_machine(&annotate(&fixture("scheduler.html")).bytes).map_err(|e| e.to_string())?;
    let silence = m.step(&WalkEvent::Silence).map_err(|e| e.to_string())?.prompts;
    ensure(silence == [xv_check::NOINPUT], || format!("silence: {silence:?}"))?;
    let nomatch = say(&mut m, "Nobody Here")?;
    ensure(nomatch == [xv_check::NOMATCH], || format!("non-member: {nomatch:?}"))?;
    say(&mut m, "Tejada Jose")?;
    let denied = say(&mut m, "no")?;
    ensure(denied == [xv_check::PROMPT], || format!("after no: {denied:?}"))?;
    ensure(read(&m) == (None, Vec::new()), || format!("after no: {:?}", read(&m)))?;

    let dir = fixtures_dir().join("walks");
    let mut scripts: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "walk"))
        .collect();
    scripts.sort();
    for path in &scripts {
        let (got, golden) = walk(path)?;
        ensure(got == golden, || format!("{} differs from its transcript", path.display()))?;
    }
    Ok(format!("catches correct, {} golden walks match", scripts.len()))
}

fn walk(path: &Path) -> Result<(String, String), String> {
    let script = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let page = script
        .lines()
        .find_map(|l| l.strip_prefix("# page:"))
        .ok_or("script names no page")?
        .trim();
    let mut m = load_machine(&annotate(&fixture(page)).bytes).map_err(|e| e.to_string())?;
    let events = parse_script(&script).map_err(|e| e.to_string())?;
    let mut transcript = run_script(&mut m, &events).map_err(|e| e.to_string())?;
    transcript.push_str("---\n");
    transcript.push_str(&m.snapshot().render_kv());
    let golden = std::fs::read_to_string(path.with_extension("transcript")).map_err(|e| e.to_string())?;
    Ok((transcript, golden))
}

fn drop_layout_whitespace(el: &mut Element) {
    if matches!(el.name.as_str(), "html" | "head") {
        el.children.retain(|c| !matches!(c, Node::Text(t) if t.trim().is_empty()));
    }
    for c in &mut el.children {
        if let Node::Element(e) = c {
            drop_layout_whitespace(e);
        }
    }
}

fn expected_visual(bytes: &[u8]) -> DomTree {
    let mut doc = parse_html(bytes, None).unwrap();
    rewrite_links(&mut doc, &mw(), &page_url());
    unrewrite_links(&mut doc, &mw());
    drop_layout_whitespace(&mut doc.root);
    doc
}

/// Well-formed, unique ids, resolvable syncs, proxied links; returns the
/// parsed output.
fn check_output(name: &str, bytes: &[u8], base: &str) -> Result<Option<DomTree>, String> {
    let text = xv_check::decode(bytes).map_err(|e| format!("{name}: {e}"))?;
    xv_check::parse(&text).map_err(|e| format!("{name}: {e}"))?;
    let doc = from_xml(bytes).map_err(|e| format!("{name}: {e}"))?;
    if !doc.elements().any(|e| e.name.starts_with("vxml:")) {
        return Ok(None);
    }
    let ids: Vec<&str> = doc.elements().filter_map(|e| e.id()).collect();
    ensure(ids.iter().collect::<HashSet<_>>().len() == ids.len(), || format!("{name}: duplicate ids"))?;
    let fields: Vec<&str> = doc
        .elements()
        .filter(|e| e.name == "vxml:field")
        .filter_map(|e| e.attr("name"))
        .collect();
    for sync in doc.elements().filter(|e| e.name == "xv:sync") {
        let field = sync.attr("xv:field").and_then(|f| f.strip_prefix('#')).unwrap_or("");
        let input = sync.attr("xv:input").unwrap_or("");
        ensure(fields.contains(&field), || format!("{name}: sync field {field:?}"))?;
        ensure(doc.find_by_id(input).is_some(), || format!("{name}: sync input {input:?}"))?;
    }
    for href in doc.elements().filter(|e| e.name == "a").filter_map(|a| a.attr("href")) {
        if href.starts_with('#') {
            continue;
        }
        if page_url().join(href).is_ok_and(|u| matches!(u.scheme(), "http" | "https")) {
            ensure(href.starts_with(&format!("{base}annotate?url=")), || format!("{name}: unproxied {href}"))?;
        }
    }
    Ok(Some(doc))
}

fn criterion_5() -> Outcome {
    let pages = corpus();
    ensure(pages.len() >= MIN_CORPUS_PAGES, || format!("only {} pages", pages.len()))?;
    let mut voiced = 0;
    for (name, bytes) in &pages {
        let out = annotate_page(bytes, &page_url(), &ShortcutLexicon::new(), &proxied()).map_err(|e| format!("{name}: {e}"))?;
        let Some(doc) = check_output(name, &out.bytes, mw().as_str())? else { continue };
        if out.report.passthrough {
            continue;
        }
        voiced += 1;
        let mut stripped = strip_voice_markup(doc, &out.report.ids);
        unrewrite_links(&mut stripped, &mw());
        ensure(serialize_xhtml(&stripped) == serialize_xhtml(&expected_visual(bytes)), || {
            format!("{name}: stripping voice markup does not recover the page")
        })?;
    }
    Ok(format!("{} pages sound, {voiced} carry voice markup", pages.len()))
}

fn criterion_6() -> Outcome {
    let lex = ShortcutLexicon::from_entries([("news", 3.0), ("weather", 1.5)]).map_err(|e| e.to_string())?;
    let url = page_url();
    let pages = corpus();
    for (name, bytes) in &pages {
        let mut runs = Vec::new();
        for _ in 0..DETERMINISM_RUNS {
            let parsed = serialize_xhtml(&parse_html(bytes, None).map_err(|e| e.to_string())?);
            let p = prepare_page(bytes, &url, &lex, None).map_err(|e| e.to_string())?;
            let plan = plan_page(bytes, &url, &lex, &proxied()).map_err(|e| e.to_string())?;
            let grammars: Vec<String> = plan.grammars().iter().map(|(n, g)| format!("{n}\n{}", serialize_jsgf(g))).collect();
            let out = annotate_page(bytes, &url, &lex, &proxied()).map_err(|e| e.to_string())?;
            let walked = match load_machine(&out.bytes) {
                Ok(mut m) => {
                    let events = parse_script("silence\nsay yes\nsay read news\n").unwrap();
                    let t = run_script(&mut m, &events).map_err(|e| e.to_string())?;
                    format!("{t}{}", m.snapshot().render_kv())
                }
                Err(e) => e.to_string(),
            };
            runs.push((
                parsed,
                serialize_xhtml(&p.doc),
                format!("{:?}", p.model),
                format!("{:?}", p.tree),
                format!("{:?}", rank_entries(&p.model, &lex)),
                grammars,
                out.bytes,
                out.report.render(),
                walked,
            ));
        }
        ensure(runs.windows(2).all(|w| w[0] == w[1]), || format!("{name}: runs differ"))?;
    }
    Ok(format!("{} pages identical over {DETERMINISM_RUNS} runs at every stage", pages.len()))
}

async fn upstream_page(UrlPath(name): UrlPath<String>) -> Response {
    match name.as_str() {
        "missing.html" => (StatusCode::NOT_FOUND, "gone").into_response(),
        "logo.png" => ([(header::CONTENT_TYPE, "image/png")], png()).into_response(),
        _ => match std::fs::read(fixtures_dir().join(&name)) {
            Ok(bytes) => ([(header::CONTENT_TYPE, "text/html")], bytes).into_response(),
            Err(_) => StatusCode::NOT_FOUND.into_response(),
        },
    }
}

fn png() -> Vec<u8> {
    let mut bytes = b"\x89PNG\r\n\x1a\n".to_vec();
    bytes.extend((0u8..=255).cycle().take(3000));
    bytes
}

fn error_page_ok(what: &str, status: u16, expected: u16, body: &[u8]) -> Result<(), String> {
    ensure(status == expected, || format!("{what}: status {status}, expected {expected}"))?;
    let text = xv_check::decode(body).map_err(|e| format!("{what}: {e}"))?;
    let doc = xv_check::parse(&text).map_err(|e| format!("{what}: {e}"))?;
    let root = doc.root_element();
    ensure(root.tag_name().namespace() == Some(xv_check::XHTML), || format!("{what}: root not XHTML"))?;
    ensure(
        root.namespaces().any(|ns| ns.uri() == xv_check::VXML) && doc.descendants().any(|n| n.tag_name().namespace() == Some(xv_check::VXML)),
        || format!("{what}: no voice markup"),
    )?;
    ensure(text.contains(xv_check::PUBLIC_ID), || format!("{what}: no X+V doctype"))
}

fn criterion_7() -> Outcome {
    let rt = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    let client = reqwest::Client::builder().no_proxy().build().map_err(|e| e.to_string())?;
    rt.block_on(async {
        let up = TcpListener::bind("127.0.0.1:0").await.map_err(|e| e.to_string())?;
        let up_base = format!("http://{}/", up.local_addr().unwrap());
        tokio::spawn(async move {
            axum::serve(up, Router::new().route("/{name}", get(upstream_page))).await.unwrap();
        });
        let closed = {
            let l = TcpListener::bind("127.0.0.1:0").await.map_err(|e| e.to_string())?;
            format!("http://{}/page.html", l.local_addr().unwrap())
        };
        let px = TcpListener::bind("127.0.0.1:0").await.map_err(|e| e.to_string())?;
        let config = ServiceConfig {
            timeout_secs: 2,
            ..ServiceConfig::default()
        };
        let base = config.middleware_base(px.local_addr().unwrap()).to_string();
        tokio::spawn(async move { serve_on(px, config, std::future::pending()).await.unwrap() });

        let get = |target: Option<String>| {
            let client = client.clone();
            let url = match target {
                Some(t) => format!("{base}annotate?url={}", url::form_urlencoded::byte_serialize(t.as_bytes()).collect::<String>()),
                None => format!("{base}annotate"),
            };
            async move {
                let r = client.get(url).send().await.map_err(|e| e.to_string())?;
                let status = r.status().as_u16();
                let body = r.bytes().await.map_err(|e| e.to_string())?.to_vec();
                Ok::<_, String>((status, body))
            }
        };

        let (status, body) = get(Some(format!("{up_base}scheduler.html"))).await?;
        ensure(status == 200, || format!("scheduler: status {status}"))?;
        xv_check::check_scheduler_annotation(&body).map_err(|e| format!("scheduler: {e}"))?;

        let (status, _) = get(None).await?;
        ensure(status == 400, || format!("missing url: status {status}"))?;

        let (status, body) = get(Some(format!("{up_base}missing.html"))).await?;
        error_page_ok("upstream 404", status, 502, &body)?;
        let (status, body) = get(Some(closed)).await?;
        error_page_ok("unreachable upstream", status, 504, &body)?;

        let (status, body) = get(Some(format!("{up_base}logo.png"))).await?;
        ensure(status == 200 && body == png(), || format!("binary passthrough: status {status}, {} bytes", body.len()))?;

        let mut links = 0;
        for name in ["news.html", "travel.html", "links_dup.html", "base_href.html", "search.html"] {
            let (status, body) = get(Some(format!("{up_base}{name}"))).await?;
            ensure(status == 200, || format!("{name}: status {status}"))?;
            if let Some(doc) = check_output(name, &body, &base)? {
                links += doc.elements().filter(|e| e.name == "a" && e.attr("href").is_some_and(|h| h.starts_with(&base))).count();
            }
        }
        ensure(links > 0, || "no rewritten links seen".into())?;
        Ok(format!("200/400/502/504 and passthrough correct, {links} links target {base}"))
    })
}

/// Deterministic news-like page of at least `size` bytes with sections,
/// links and a few forms.
fn large_page(size: usize) -> Vec<u8> {
    let mut html = String::from("<html><head><title>Archive</title></head><body><h1>Archive</h1>\n");
    let mut i = 0;
    while html.len() < size {
        html.push_str(&format!(
            "<div id=\"story{i}\"><h2>Story {i}</h2><p>Paragraph {i} reports the weather, the markets and \
             the local news in some detail so that the page carries a realistic amount of text. \
             <a href=\"/story/{i}\">More on story {i}</a> and <a href=\"http://other.example/{i}\">elsewhere</a>.</p>\
             <ul><li>Item one of {i}</li><li>Item two of {i}</li></ul></div>\n"
        ));
        if i % 200 == 0 {
            html.push_str(&format!(
                "<form id=\"poll{i}\" action=\"/vote\"><select name=\"choice{i}\"><option>Yes</option><option>No</option>\
                 <option>Not sure</option></select><input type=\"submit\" value=\"Vote\"></form>\n"
            ));
        }
        i += 1;
    }
    html.push_str("</body></html>\n");
    html.into_bytes()
}

fn criterion_8() -> Outcome {
    let page = large_page(LARGE_PAGE_BYTES);
    let lex = ShortcutLexicon::from_entries([("news", 3.0), ("weather", 1.5)]).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let out = annotate_page(&page, &page_url(), &lex, &proxied()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check_output("large page", &out.bytes, mw().as_str())?;
    ensure(elapsed < LARGE_PAGE_BUDGET, || format!("{} KB took {elapsed:?}", page.len() / 1024))?;
    Ok(format!("{} KB page annotated in {elapsed:?}", page.len() / 1024))
}

fn main() -> ExitCode {
    // Silence the default panic printout; failures are reported below.
    std::panic::set_hook(Box::new(|_| {}));
    let criteria: [Criterion; 8] = [
        ("scheduler page structure", criterion_1),
        ("grammar equivalence", criterion_2),
        ("sync bidirectionality", criterion_3),
        ("catch behavior", criterion_4),
        ("corpus robustness", criterion_5),
        ("determinism", criterion_6),
        ("service end-to-end", criterion_7),
        ("large page budget", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Err(format!("panic: {msg}"))
        });
        match result {
            Ok(detail) => println!("PASS {}: {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}: {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
