//! `deius`: annotate pages with XHTML+Voice dialogs, serve them through the
//! proxy, walk the resulting dialogs in text, and inspect their grammars.

mod input;
mod walk;

use std::io::Write;
use std::net::IpAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use deius_core::annotator::AnnotateConfig;
use deius_core::dom::Charset;
use deius_core::grammar::serialize_jsgf;
use deius_core::page::ShortcutLexicon;
use deius_core::pipeline::{annotate_page, plan_page, PipelineConfig};
use deius_service::ServiceConfig;
use url::Url;

#[derive(Debug, Parser)]
#[command(name = "deius", version, about = "Voice-enable web pages with XHTML+Voice annotations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Annotate one page (file or http(s) URL) and write the X+V document.
    Annotate {
        input: String,
        /// Write here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Run the annotation proxy.
    Serve(ServeArgs),
    /// Run the voice dialog of an X+V document, from a script or stdin.
    Walk {
        document: PathBuf,
        /// Lines of `say <utterance>`, `gui <id> <value>` or `silence`.
        script: Option<PathBuf>,
    },
    /// Print every JSGF grammar generated for a page.
    Grammars {
        input: String,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
}

fn parse_charset(label: &str) -> Result<String, String> {
    Charset::from_label(label)
        .map(|c| c.label().to_string())
        .map_err(|e| e.to_string())
}

fn parse_base(raw: &str) -> Result<Url, String> {
    let url = Url::parse(raw).map_err(|e| e.to_string())?;
    if matches!(url.scheme(), "http" | "https") {
        Ok(url)
    } else {
        Err("must be an http or https URL".into())
    }
}

#[derive(Debug, Args)]
struct PipelineArgs {
    /// Shortcut words, one `word<TAB>weight` per line.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Skip the yes/no confirmation after each field.
    #[arg(long)]
    no_verification: bool,
    /// Rewrite links to go through the proxy at this address.
    #[arg(long, value_parser = parse_base)]
    base: Option<Url>,
    /// Encode the output in this charset instead of the page's own.
    #[arg(long, value_parser = parse_charset)]
    encoding_override: Option<String>,
    /// Address the page is treated as coming from (a file:// URL for files
    /// by default). Relative links resolve against it.
    #[arg(long, value_parser = parse_base)]
    page_url: Option<Url>,
    /// Upstream timeout in seconds, for URL inputs.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    timeout: u64,
}

impl PipelineArgs {
    fn lexicon(&self) -> Result<ShortcutLexicon> {
        ServiceConfig {
            lexicon_path: self.lexicon.clone(),
            ..ServiceConfig::default()
        }
        .load_lexicon()
        .map_err(Into::into)
    }

    fn config(&self, encoding_hint: Option<String>) -> Result<PipelineConfig> {
        Ok(PipelineConfig {
            annotate: AnnotateConfig {
                verification: !self.no_verification,
                encoding_override: self.encoding_override.as_deref().map(Charset::from_label).transpose()?,
            },
            middleware_base: self.base.clone(),
            encoding_hint,
        })
    }
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long, env = "DEIUS_LISTEN", default_value = "127.0.0.1")]
    listen: IpAddr,
    #[arg(long, env = "DEIUS_PORT", default_value_t = 8080)]
    port: u16,
    /// Upstream timeout in seconds.
    #[arg(long, env = "DEIUS_TIMEOUT", default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    timeout: u64,
    /// Largest upstream page accepted, in bytes.
    #[arg(long, env = "DEIUS_MAX_PAGE_SIZE", default_value_t = 5 * 1024 * 1024, value_parser = clap::value_parser!(u64).range(1..))]
    max_page_size: u64,
    /// Response cache lifetime in seconds; 0 disables caching.
    #[arg(long, env = "DEIUS_CACHE_TTL", default_value_t = 60)]
    cache_ttl: u64,
    #[arg(long, env = "DEIUS_LEXICON")]
    lexicon: Option<PathBuf>,
    #[arg(long, env = "DEIUS_NO_VERIFICATION")]
    no_verification: bool,
    /// Public address of the proxy used in rewritten links; defaults to the
    /// listening address.
    #[arg(long, env = "DEIUS_BASE", value_parser = parse_base)]
    base: Option<Url>,
    #[arg(long, env = "DEIUS_ENCODING_OVERRIDE", value_parser = parse_charset)]
    encoding_override: Option<String>,
}

impl ServeArgs {
    fn config(&self) -> ServiceConfig {
        ServiceConfig {
            listen: self.listen,
            port: self.port,
            timeout_secs: self.timeout,
            max_page_size: usize::try_from(self.max_page_size).unwrap_or(usize::MAX),
            lexicon_path: self.lexicon.clone(),
            verification: !self.no_verification,
            cache_ttl_secs: self.cache_ttl,
            public_base: self.base.clone(),
            encoding_override: self.encoding_override.clone(),
        }
    }
}

fn write_output(path: Option<&PathBuf>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn annotate(source: &str, output: Option<&PathBuf>, args: &PipelineArgs) -> Result<()> {
    let page = input::load(source, args.page_url.as_ref(), args.timeout)?;
    let lexicon = args.lexicon()?;
    let out = annotate_page(&page.bytes, &page.url, &lexicon, &args.config(page.charset)?)
        .with_context(|| format!("cannot annotate {source}"))?;
    write_output(output, &out.bytes)?;
    eprint!("{}", out.report.render());
    Ok(())
}

fn grammars(source: &str, args: &PipelineArgs) -> Result<()> {
    let page = input::load(source, args.page_url.as_ref(), args.timeout)?;
    let lexicon = args.lexicon()?;
    let plan = plan_page(&page.bytes, &page.url, &lexicon, &args.config(page.charset)?)
        .with_context(|| format!("cannot read {source}"))?;
    let mut out = String::new();
    for (i, (name, g)) in plan.grammars().into_iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("// {name}\n{}", serialize_jsgf(g)));
        if !out.ends_with('\n') {
            out.push('\n');
        }
    }
    write_output(None, out.as_bytes())
}

fn serve(args: &ServeArgs) -> Result<()> {
    let config = args.config();
    config.validate()?;
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(config.socket_addr())
            .await
            .with_context(|| format!("cannot listen on {}", config.socket_addr()))?;
        let base = config.middleware_base(listener.local_addr()?);
        eprintln!("deius: serving on {base} (GET {base}annotate?url=...)");
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        deius_service::serve_on(listener, config, shutdown).await?;
        Ok(())
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Annotate { input, output, pipeline } => annotate(&input, output.as_ref(), &pipeline),
        Command::Serve(args) => serve(&args),
        Command::Walk { document, script } => walk::run(&document, script.as_deref()),
        Command::Grammars { input, pipeline } => grammars(&input, &pipeline),
    }
}

fn main() -> ExitCode {
    // Usage errors exit with status 2 inside clap.
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("deius: {e:#}");
            ExitCode::FAILURE
        }
    }
}
