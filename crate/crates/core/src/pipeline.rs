//! Page in, X+V out: parse, assign ids, extract, annotate, rewrite links,
//! serialize.

use url::Url;

use crate::annotator::{
    annotate_document, plan_voice, rewrite_links, serialize_xv, AnnotateConfig, AnnotationReport,
    VoicePlan,
};
use crate::dom::{ensure_ids, parse_html, Charset, DomError, DomTree, IdReport};
use crate::page::{build_weighted_dialog_tree, extract_components, DialogTree, PageModel, ShortcutLexicon};

#[derive(Debug, Clone, Default)]
pub struct PipelineConfig {
    pub annotate: AnnotateConfig,
    /// When set, http(s) links are rewritten to go through this middleware.
    pub middleware_base: Option<Url>,
    /// Charset label from the transport (HTTP `Content-Type`), if any.
    pub encoding_hint: Option<String>,
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub bytes: Vec<u8>,
    /// Charset the bytes are encoded in.
    pub charset: Charset,
    pub report: AnnotationReport,
}

/// Parsed page with ids assigned, plus its component model and dialog tree.
#[derive(Debug, Clone)]
pub struct PreparedPage {
    pub doc: DomTree,
    pub ids: IdReport,
    pub model: PageModel,
    pub tree: DialogTree,
}

pub fn prepare_page(
    bytes: &[u8],
    page_url: &Url,
    lexicon: &ShortcutLexicon,
    encoding_hint: Option<&str>,
) -> Result<PreparedPage, DomError> {
    let (doc, ids) = ensure_ids(parse_html(bytes, encoding_hint)?);
    let model = extract_components(&doc, page_url);
    let tree = build_weighted_dialog_tree(&model, lexicon);
    Ok(PreparedPage {
        doc,
        ids,
        model,
        tree,
    })
}

/// The voice plan (grammars, fields) a page would receive.
pub fn plan_page(
    bytes: &[u8],
    page_url: &Url,
    lexicon: &ShortcutLexicon,
    config: &PipelineConfig,
) -> Result<VoicePlan, DomError> {
    let p = prepare_page(bytes, page_url, lexicon, config.encoding_hint.as_deref())?;
    Ok(plan_voice(&p.doc, &p.model, &p.tree, lexicon, &config.annotate))
}

/// Annotate one page. Input that is already X+V comes back byte-identical.
pub fn annotate_page(
    bytes: &[u8],
    page_url: &Url,
    lexicon: &ShortcutLexicon,
    config: &PipelineConfig,
) -> Result<PipelineOutput, DomError> {
    let p = prepare_page(bytes, page_url, lexicon, config.encoding_hint.as_deref())?;
    let mut annotated = annotate_document(p.doc, &p.model, &p.tree, lexicon, &config.annotate);
    annotated.report.ids = p.ids;
    if annotated.report.passthrough {
        return Ok(PipelineOutput {
            bytes: bytes.to_vec(),
            charset: annotated.doc.charset,
            report: annotated.report,
        });
    }
    if let Some(base) = &config.middleware_base {
        rewrite_links(&mut annotated.doc, base, page_url);
    }
    Ok(PipelineOutput {
        bytes: serialize_xv(&annotated),
        charset: annotated.doc.charset.clone(),
        report: annotated.report,
    })
}
