//! `neogate`: validate, adapt, prompt, run and score Neo-GATE-format corpora.

mod config;

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use neogate_core::corpus::{aligned_tag_labels, cohen_kappa, validate_corpus, validate_with_mapping, Severity};
use neogate_core::evaluator::{aggregate, compute_metrics, evaluate_corpus, parse_hypotheses, write_trace};
use neogate_core::paradigm::{adapt_corpus_with, parse_mapping};
use neogate_core::promptkit::{
    build_prompt, dump_messages, extract_translation, rank_exemplar_candidates, select_exemplars, ExtractionOutcome,
    PromptFormat, PromptSpec,
};
use neogate_core::report::{render_report, ReportFormat, RunManifest};
use neogate_core::runner::{export_hypotheses, run_corpus, ClientConfig, HttpTransport, RecordOutcome};
use neogate_core::{parse_corpus, Corpus, Execution, TagsetDefinition, TagsetMapping};

#[derive(Parser)]
#[command(name = "neogate", version, about = "Neomorpheme translation benchmark toolkit")]
#[command(args_override_self = true)]
struct Cli {
    /// key=value file of default flags for the subcommand.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check corpus invariants; exits 1 if any error is found.
    Validate {
        #[command(flatten)]
        corpus: CorpusArg,
        /// Also check that adapted forms differ from gendered ones.
        #[arg(long)]
        paradigm: Option<String>,
    },
    /// Entry and tag counts.
    Stats {
        #[command(flatten)]
        corpus: CorpusArg,
    },
    /// Realize tagged references and annotations in a paradigm.
    Adapt {
        #[command(flatten)]
        corpus: CorpusArg,
        #[command(flatten)]
        paradigm: ParadigmArg,
        /// Print only the adapted references, one per line.
        #[arg(long)]
        refs_only: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Print the chat messages for one sentence.
    Prompt {
        #[command(flatten)]
        prompt: PromptArgs,
        /// English source sentence.
        #[arg(long, conflicts_with = "entry")]
        source: Option<String>,
        /// Take the source from this corpus entry (needs --corpus).
        #[arg(long, requires = "corpus")]
        entry: Option<String>,
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Prompt a chat-completions endpoint for every entry.
    Run {
        #[command(flatten)]
        corpus: CorpusArg,
        #[command(flatten)]
        prompt: PromptArgs,
        #[command(flatten)]
        client: ClientArgs,
        /// Response cache (JSONL).
        #[arg(long)]
        cache: PathBuf,
        /// Hypothesis file to write; stdout if omitted.
        #[arg(long)]
        hyp_out: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract the translation from a raw completion (file or stdin).
    Extract {
        #[arg(long, default_value = "direct")]
        format: PromptFormat,
        input: Option<PathBuf>,
    },
    /// Score a hypothesis file against the corpus.
    Evaluate {
        #[command(flatten)]
        corpus: CorpusArg,
        #[command(flatten)]
        paradigm: ParadigmArg,
        /// One translation per corpus entry; blank lines are unparseable.
        #[arg(long)]
        hyp: PathBuf,
        /// Directory for report.txt, report.kv, trace.tsv and manifest.kv.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format on stdout.
        #[arg(long, default_value = "text")]
        report: ReportFormat,
        #[arg(long)]
        sequential: bool,
    },
    /// Cohen's kappa between two annotations of the same corpus, or two
    /// label files.
    Kappa {
        a: PathBuf,
        b: PathBuf,
        /// Inputs are label files, one label per line.
        #[arg(long)]
        labels: bool,
    },
}

#[derive(Args)]
struct CorpusArg {
    /// Corpus TSV.
    #[arg(long)]
    corpus: PathBuf,
}

#[derive(Args)]
struct ParadigmArg {
    /// asterisk, schwa, or a mapping file.
    #[arg(long, default_value = "asterisk")]
    paradigm: String,
}

#[derive(Args)]
struct PromptArgs {
    #[arg(long, default_value = "zero_shot")]
    format: PromptFormat,
    #[command(flatten)]
    paradigm: ParadigmArg,
    /// Dev corpus the exemplars come from.
    #[arg(long)]
    dev: Option<PathBuf>,
    /// Comma-separated dev entry ids.
    #[arg(long, value_delimiter = ',')]
    exemplars: Vec<String>,
    /// Pick this many top-ranked dev entries when --exemplars is not given.
    #[arg(long)]
    shots: Option<usize>,
    /// Also put the task instruction in few-shot prompts.
    #[arg(long)]
    with_instruction: bool,
}

#[derive(Args)]
struct ClientArgs {
    #[arg(long, default_value = "https://api.openai.com/v1/chat/completions")]
    endpoint: String,
    #[arg(long, default_value = "gpt-4")]
    model: String,
    #[arg(long, default_value_t = 0.0)]
    temperature: f64,
    #[arg(long, default_value_t = 1)]
    concurrency: usize,
    #[arg(long, default_value_t = 3)]
    max_retries: u32,
    /// Seconds.
    #[arg(long, default_value_t = 120)]
    timeout: u64,
    /// Requests per second.
    #[arg(long)]
    rate_limit: Option<f64>,
    /// Milliseconds before the first retry.
    #[arg(long, default_value_t = 500)]
    backoff_ms: u64,
}

/// Any failure after argument parsing: bad input files or data.
#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_corpus(path: &Path) -> Result<Corpus, Failure> {
    parse_corpus(&read(path)?, &TagsetDefinition::neo_gate()).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_paradigm(name: &str) -> Result<TagsetMapping, Failure> {
    if let Some(m) = TagsetMapping::builtin(name) {
        return Ok(m);
    }
    let path = Path::new(name);
    if !path.exists() {
        return Err(Failure(format!("unknown paradigm {name:?}: not a built-in name or a mapping file")));
    }
    parse_mapping(&read(path)?, &TagsetDefinition::neo_gate()).map_err(|e| Failure(format!("{name}: {e}")))
}

fn write_out(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn tsv_field(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

fn prompt_spec(args: &PromptArgs) -> Result<(PromptSpec, Vec<neogate_core::promptkit::Exemplar>), Failure> {
    let paradigm = load_paradigm(&args.paradigm.paradigm)?;
    if args.format == PromptFormat::ZeroShot {
        if !args.exemplars.is_empty() || args.shots.is_some_and(|n| n > 0) {
            return Err(Failure("zero_shot prompts take no exemplars".into()));
        }
        return Ok((PromptSpec::zero_shot(paradigm), Vec::new()));
    }
    let dev_path = args
        .dev
        .as_deref()
        .ok_or_else(|| Failure(format!("{} prompts need --dev", args.format)))?;
    let dev = load_corpus(dev_path)?;
    let ids = if !args.exemplars.is_empty() {
        args.exemplars.clone()
    } else {
        let n = args.shots.unwrap_or(1);
        rank_exemplar_candidates(&dev)?.into_iter().take(n).collect()
    };
    let mut spec = PromptSpec::new(args.format, paradigm, ids)?;
    spec.instruction_in_few_shot = args.with_instruction;
    let exemplars = select_exemplars(&dev, &spec.exemplar_ids, &spec.paradigm)?;
    Ok((spec, exemplars))
}

fn validate(corpus: &Path, paradigm: Option<&str>) -> Outcome {
    let c = load_corpus(corpus)?;
    let mut issues = validate_corpus(&c);
    if let Some(p) = paradigm {
        issues.extend(validate_with_mapping(&c, &load_paradigm(p)?));
    }
    let errors = issues.iter().filter(|i| i.severity == Severity::Error).count();
    let report: String = issues.iter().map(|i| format!("{i}\n")).collect();
    let summary = format!("{} entries, {errors} errors, {} warnings", c.len(), issues.len() - errors);
    if errors > 0 {
        eprint!("{report}");
        return Err(Failure(summary));
    }
    print!("{report}");
    println!("{summary}");
    Ok(())
}

fn adapt(corpus: &Path, paradigm: &str, refs_only: bool, output: Option<&Path>) -> Outcome {
    let c = load_corpus(corpus)?;
    let mapping = load_paradigm(paradigm)?;
    let adapted = adapt_corpus_with(&c, &mapping, Execution::default())?;
    let mut out = String::new();
    if refs_only {
        for a in &adapted {
            out.push_str(&tsv_field(&a.ref_adapted));
            out.push('\n');
        }
    } else {
        out.push_str("ID\tSOURCE\tREF-M\tREF-F\tREF-ADAPTED\tANNOTATION\n");
        for (e, a) in c.iter().zip(&adapted) {
            let row = [&e.id, &e.source, &e.ref_masc, &e.ref_fem, &a.ref_adapted, &a.annotation()].map(|s| tsv_field(s));
            out.push_str(&row.join("\t"));
            out.push('\n');
        }
    }
    write_out(output, &out)
}

fn prompt(args: &PromptArgs, source: Option<&str>, entry: Option<&str>, corpus: Option<&Path>) -> Outcome {
    let (spec, exemplars) = prompt_spec(args)?;
    let source = match (source, entry, corpus) {
        (Some(s), _, _) => s.to_string(),
        (None, Some(id), Some(path)) => load_corpus(path)?
            .get(id)
            .map(|e| e.source.clone())
            .ok_or_else(|| Failure(format!("entry {id} not in {}", path.display())))?,
        _ => return Err(Failure("give --source, or --entry with --corpus".into())),
    };
    println!("{}", dump_messages(&build_prompt(&source, &spec, &exemplars)?));
    Ok(())
}

fn manifest(command: &str, corpus: &Path, paradigm: &str, out: &Path) -> RunManifest {
    RunManifest {
        command: command.to_string(),
        corpus: corpus.display().to_string(),
        paradigm: paradigm.to_string(),
        out_dir: out.display().to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        ..Default::default()
    }
}

fn write_file(dir: &Path, name: &str, text: &str) -> Outcome {
    let p = dir.join(name);
    fs::write(&p, text).map_err(|e| Failure(format!("{}: {e}", p.display())))
}

fn run(
    corpus: &Path,
    prompt: &PromptArgs,
    client: &ClientArgs,
    cache: &Path,
    hyp_out: Option<&Path>,
    out: Option<&Path>,
) -> Outcome {
    let c = load_corpus(corpus)?;
    let (spec, exemplars) = prompt_spec(prompt)?;
    let config = ClientConfig {
        endpoint: client.endpoint.clone(),
        model: client.model.clone(),
        temperature: client.temperature,
        timeout_secs: client.timeout,
        max_retries: client.max_retries,
        rate_limit: client.rate_limit,
        concurrency: client.concurrency,
        retry_backoff: Duration::from_millis(client.backoff_ms),
    };
    let transport = HttpTransport::from_env(&config);
    let records = run_corpus(&c, &spec, &exemplars, &config, cache, &transport)?;
    let count = |o: RecordOutcome| records.iter().filter(|r| r.outcome == o).count();
    let cached = records.iter().filter(|r| r.from_cache).count();
    eprintln!(
        "{} entries: {} ok, {} unparseable, {} failed ({} from cache)",
        records.len(),
        count(RecordOutcome::Ok),
        count(RecordOutcome::Unparseable),
        count(RecordOutcome::Failed),
        cached
    );
    write_out(hyp_out, &export_hypotheses(&records, &c.ids())?)?;
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        let mut m = manifest("run", corpus, &prompt.paradigm.paradigm, dir);
        let s = &mut m.settings;
        s.insert("prompt.format".into(), spec.format.to_string());
        s.insert("prompt.n_shots".into(), spec.n_shots.to_string());
        s.insert("prompt.exemplars".into(), spec.exemplar_ids.join(","));
        s.insert("prompt.instruction_in_few_shot".into(), spec.instruction_in_few_shot.to_string());
        s.insert("client.endpoint".into(), config.endpoint.clone());
        s.insert("client.model".into(), config.model.clone());
        s.insert("client.temperature".into(), config.temperature.to_string());
        s.insert("client.max_retries".into(), config.max_retries.to_string());
        s.insert("client.concurrency".into(), config.concurrency.to_string());
        s.insert("cache".into(), cache.display().to_string());
        write_file(dir, "manifest.kv", &m.to_kv())?;
    }
    Ok(())
}

fn extract(format: PromptFormat, input: Option<&Path>) -> Outcome {
    let raw = match input {
        Some(p) => String::from_utf8(read(p)?)?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let r = extract_translation(&raw, format);
    match (r.outcome, r.translation) {
        (ExtractionOutcome::Ok, Some(t)) => {
            println!("{t}");
            Ok(())
        }
        _ => Err(Failure("unparseable: no <...> span in the output".into())),
    }
}

fn evaluate(
    corpus: &Path,
    paradigm: &str,
    hyp: &Path,
    out: Option<&Path>,
    report_format: ReportFormat,
    sequential: bool,
) -> Outcome {
    let c = load_corpus(corpus)?;
    let mapping = load_paradigm(paradigm)?;
    let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
    let adapted = adapt_corpus_with(&c, &mapping, exec)?;
    let hyps = parse_hypotheses(&String::from_utf8(read(hyp)?).map_err(|e| Failure(format!("{}: {e}", hyp.display())))?);
    let evals = evaluate_corpus(&adapted, &hyps, &mapping, exec)?;
    let report = compute_metrics(&aggregate(&evals))?;
    print!("{}", render_report(&report, report_format));
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        write_file(dir, "report.txt", &render_report(&report, ReportFormat::Text))?;
        write_file(dir, "report.kv", &render_report(&report, ReportFormat::Kv))?;
        write_file(dir, "trace.tsv", &write_trace(&evals))?;
        let mut m = manifest("evaluate", corpus, paradigm, dir);
        m.settings.insert("hypotheses".into(), hyp.display().to_string());
        write_file(dir, "manifest.kv", &m.to_kv())?;
    }
    Ok(())
}

fn kappa(a: &Path, b: &Path, labels: bool) -> Outcome {
    let (la, lb) = if labels {
        let lines = |p: &Path| -> Result<Vec<String>, Failure> {
            Ok(String::from_utf8(read(p)?)?.lines().map(|l| l.trim().to_string()).collect())
        };
        (lines(a)?, lines(b)?)
    } else {
        aligned_tag_labels(&load_corpus(a)?, &load_corpus(b)?)?
    };
    let k = cohen_kappa(&la, &lb)?;
    println!("n={}\nkappa={k:.4}", la.len());
    Ok(())
}

fn dispatch(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { corpus, paradigm } => validate(&corpus.corpus, paradigm.as_deref()),
        Command::Stats { corpus } => {
            println!("{}", load_corpus(&corpus.corpus)?.stats());
            Ok(())
        }
        Command::Adapt {
            corpus,
            paradigm,
            refs_only,
            output,
        } => adapt(&corpus.corpus, &paradigm.paradigm, refs_only, output.as_deref()),
        Command::Prompt {
            prompt: p,
            source,
            entry,
            corpus,
        } => prompt(&p, source.as_deref(), entry.as_deref(), corpus.as_deref()),
        Command::Run {
            corpus,
            prompt,
            client,
            cache,
            hyp_out,
            out,
        } => run(&corpus.corpus, &prompt, &client, &cache, hyp_out.as_deref(), out.as_deref()),
        Command::Extract { format, input } => extract(format, input.as_deref()),
        Command::Evaluate {
            corpus,
            paradigm,
            hyp,
            out,
            report,
            sequential,
        } => evaluate(&corpus.corpus, &paradigm.paradigm, &hyp, out.as_deref(), report, sequential),
        Command::Kappa { a, b, labels } => kappa(&a, &b, labels),
    }
}

fn main() -> ExitCode {
    let cmd = Cli::command();
    let args = match config::expand(std::env::args_os().collect(), &cmd) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match cmd.try_get_matches_from(args).and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
