use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use concern_lens::alignment::{corpus_from_snapshot, merge, suggest_alignments, DEFAULT_SUGGESTION_THRESHOLD};
use concern_lens::extractor::extract_snapshot;
use concern_lens::metrics::{
    concern_metrics, kind_distribution, lexical_rows, shared_concern_matrix, MetricsOptions,
    DEFAULT_MIN_RECOGNIZERS,
};
use concern_lens::query::{concerns_of, find_usages, list_by_kind, related_elements};
use concern_lens::report::{self, Format, Table};
use concern_lens::snapshot_io::{read_snapshot, to_json, to_xml, write_snapshot, SnapshotFormat};
use concern_lens::stats::{
    compare_groups, group_summary, AlternativePolicy, Group, Method, ResultsTable, Variable,
};
use concern_lens::textdist::summarize;
use concern_lens::{ConcernDictionary, ConcernKind, Corpus, ElementPath, Error, ErrorClass, Snapshot};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "concern-lens", version, about = "Concern annotation analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract a snapshot of concern annotations from a source tree
    Extract(ExtractArgs),
    /// Merge snapshots into a corpus through a concern dictionary
    Merge(MergeArgs),
    /// Suggest dictionary entries for similarly named annotation types
    Suggest(SuggestArgs),
    /// Per-concern agreement metrics
    Metrics(MetricsArgs),
    /// Concerns shared by each pair of annotators
    Matrix(MatrixArgs),
    /// Keyword edit distances per concern
    Lexical(LexicalArgs),
    /// Concern-location queries
    Query(QueryArgs),
    /// Mann-Whitney comparison of experiment groups
    Stats(StatsArgs),
    /// Full Markdown corpus report
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SnapshotFmt {
    Json,
    Xml,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFmt {
    Text,
    Csv,
    Markdown,
    Json,
}

impl From<OutFmt> for Format {
    fn from(f: OutFmt) -> Format {
        match f {
            OutFmt::Text => Format::Text,
            OutFmt::Csv => Format::Csv,
            OutFmt::Markdown => Format::Markdown,
            OutFmt::Json => Format::Json,
        }
    }
}

#[derive(Args)]
struct ExtractArgs {
    /// Source root, searched recursively for .java files
    root: PathBuf,
    #[arg(long)]
    annotator: String,
    /// Defaults to the source root's directory name
    #[arg(long)]
    project: Option<String>,
    /// Output file; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to the output file's extension, else json
    #[arg(long, value_enum)]
    format: Option<SnapshotFmt>,
}

/// A corpus file, or one or more snapshots merged through a dictionary.
#[derive(Args)]
struct CorpusInput {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Concern dictionary; unmapped types keep their own name when absent
    #[arg(long)]
    dict: Option<PathBuf>,
}

#[derive(Args)]
struct MergeArgs {
    #[arg(required = true)]
    snapshots: Vec<PathBuf>,
    #[arg(long)]
    dict: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SuggestArgs {
    #[arg(required = true)]
    snapshots: Vec<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SUGGESTION_THRESHOLD)]
    threshold: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutFmt,
}

#[derive(Args)]
struct MetricsArgs {
    #[command(flatten)]
    input: CorpusInput,
    #[arg(long, value_enum, default_value = "text")]
    format: OutFmt,
    /// Recognizers a concern needs to count as shared in the kind tables,
    /// and to be listed at all in the per-concern table
    #[arg(long)]
    min_recognizers: Option<usize>,
    #[arg(long)]
    fold_case: bool,
    /// Report the distribution of concern kinds instead
    #[arg(long, conflicts_with = "by_annotator")]
    by_kind: bool,
    /// Report concern kinds per annotator instead
    #[arg(long)]
    by_annotator: bool,
}

#[derive(Args)]
struct MatrixArgs {
    #[command(flatten)]
    input: CorpusInput,
    #[arg(long, value_enum, default_value = "text")]
    format: OutFmt,
}

#[derive(Clone, Copy, ValueEnum)]
enum LexicalMode {
    Pairwise,
    Anchored,
}

#[derive(Args)]
struct LexicalArgs {
    #[command(flatten)]
    input: CorpusInput,
    #[arg(long, value_enum, default_value = "pairwise")]
    mode: LexicalMode,
    #[arg(long)]
    fold_case: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutFmt,
}

#[derive(Args)]
#[group(id = "target", required = true, multiple = false, args = ["concern", "element", "related", "kind"])]
struct QueryArgs {
    #[command(flatten)]
    input: CorpusInput,
    /// Elements carrying the concern
    #[arg(long)]
    concern: Option<String>,
    /// Concerns placed on the element
    #[arg(long)]
    element: Option<String>,
    /// Elements sharing a concern with the element
    #[arg(long)]
    related: Option<String>,
    /// Concerns of a kind with their elements
    #[arg(long)]
    kind: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: OutFmt,
}

#[derive(Clone, Copy, ValueEnum)]
enum VarArg {
    Correctness,
    Time,
    Efficiency,
    Confidence,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Exact,
    Approx,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Observed,
    Hypothesis,
}

#[derive(Args)]
struct StatsArgs {
    results: PathBuf,
    #[arg(long = "var", value_enum, default_value = "all")]
    variable: VarArg,
    /// auto: exact when there are no ties and at most 30 subjects
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    /// Direction of the one-sided alternative
    #[arg(long, value_enum, default_value = "observed")]
    alternative: PolicyArg,
    #[arg(long, value_enum, default_value = "text")]
    format: OutFmt,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    input: CorpusInput,
    #[arg(long, default_value_t = DEFAULT_MIN_RECOGNIZERS)]
    min_recognizers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.class() {
            ErrorClass::Parse => 2,
            ErrorClass::Validation => 3,
            ErrorClass::Undefined => 4,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn emit(text: &str, out: Option<&Path>) -> Outcome {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::io(format!("cannot write {}", path.display()), e).into()),
        None => {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not an error worth reporting
            let _ = stdout.write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn json_text(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

fn render(table: &Table, format: OutFmt) -> String {
    table.render(format.into())
}

fn dictionary(path: Option<&Path>) -> Result<ConcernDictionary, Error> {
    match path {
        Some(p) => ConcernDictionary::read(p),
        None => Ok(ConcernDictionary::identity()),
    }
}

enum Loaded {
    Corpus(Corpus),
    Snapshot(Snapshot),
}

fn load(path: &Path) -> Result<Loaded, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::io(format!("cannot read {}", path.display()), e))?;
    let is_corpus = !text.trim_start().starts_with('<')
        && serde_json::from_str::<Value>(&text)
            .ok()
            .is_some_and(|v| v.get("concerns").is_some());
    if is_corpus {
        Corpus::read(path).map(Loaded::Corpus)
    } else {
        read_snapshot(path).map(Loaded::Snapshot)
    }
}

fn load_corpus(input: &CorpusInput) -> Result<Corpus, Error> {
    let mut snapshots = Vec::new();
    for path in &input.inputs {
        match load(path)? {
            Loaded::Corpus(c) if input.inputs.len() == 1 && input.dict.is_none() => return Ok(c),
            Loaded::Corpus(_) => {
                return Err(Error::Validation(format!(
                    "{} is a corpus; give it alone and without --dict",
                    path.display()
                )))
            }
            Loaded::Snapshot(s) => snapshots.push(s),
        }
    }
    if snapshots.len() == 1 && input.dict.is_none() {
        return corpus_from_snapshot(&snapshots[0]);
    }
    merge(&snapshots, &dictionary(input.dict.as_deref())?)
}

fn read_snapshots(paths: &[PathBuf]) -> Result<Vec<Snapshot>, Error> {
    paths.iter().map(|p| read_snapshot(p)).collect()
}

fn extract(a: &ExtractArgs) -> Outcome {
    let project = match &a.project {
        Some(p) => p.clone(),
        None => a
            .root
            .canonicalize()
            .ok()
            .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .unwrap_or_else(|| "project".into()),
    };
    let extraction = extract_snapshot(&a.root, &a.annotator, &project)?;
    for w in &extraction.warnings {
        eprintln!("{w}");
    }
    let format = match (a.format, &a.out) {
        (Some(SnapshotFmt::Json), _) => SnapshotFormat::Json,
        (Some(SnapshotFmt::Xml), _) => SnapshotFormat::Xml,
        (None, Some(out)) => SnapshotFormat::from_extension(out).unwrap_or(SnapshotFormat::Json),
        (None, None) => SnapshotFormat::Json,
    };
    match &a.out {
        Some(out) => write_snapshot(&extraction.snapshot, out, format).map_err(Failure::from),
        None => emit(
            &match format {
                SnapshotFormat::Json => to_json(&extraction.snapshot),
                SnapshotFormat::Xml => to_xml(&extraction.snapshot),
            },
            None,
        ),
    }
}

fn merge_cmd(a: &MergeArgs) -> Outcome {
    let snapshots = read_snapshots(&a.snapshots)?;
    let corpus = merge(&snapshots, &dictionary(a.dict.as_deref())?)?;
    emit(&corpus.to_json(), a.out.as_deref())
}

fn suggest(a: &SuggestArgs) -> Outcome {
    let snapshots = read_snapshots(&a.snapshots)?;
    let suggestions = suggest_alignments::<f64>(&snapshots, a.threshold)?;
    emit(&render(&report::suggestion_table(&suggestions), a.format), None)
}

fn metrics(a: &MetricsArgs) -> Outcome {
    let corpus = load_corpus(&a.input)?;
    if a.by_kind {
        let rows = kind_distribution(&corpus, a.min_recognizers.unwrap_or(DEFAULT_MIN_RECOGNIZERS));
        return emit(&render(&report::kind_table(&rows), a.format), None);
    }
    if a.by_annotator {
        return emit(&render(&report::annotator_kind_table(&corpus), a.format), None);
    }
    let options = MetricsOptions {
        min_recognizers: a.min_recognizers.unwrap_or(0),
        fold_case: a.fold_case,
    };
    let rows = concern_metrics::<f64>(&corpus, &options);
    let text = match a.format {
        OutFmt::Json => json_text(&report::metrics_json(&corpus, &rows)),
        OutFmt::Csv => report::metrics_table(&rows).to_csv(),
        OutFmt::Text => report::metrics_table(&rows).to_text() + "\n" + &report::overall_text(&corpus),
        OutFmt::Markdown => report::metrics_table(&rows).to_markdown(),
    };
    emit(&text, None)
}

fn matrix(a: &MatrixArgs) -> Outcome {
    let corpus = load_corpus(&a.input)?;
    let m = shared_concern_matrix(&corpus)?;
    let text = match a.format {
        OutFmt::Json => json_text(&report::matrix_json(&m)),
        f => render(&report::matrix_table(&m), f),
    };
    emit(&text, None)
}

fn lexical(a: &LexicalArgs) -> Outcome {
    let corpus = load_corpus(&a.input)?;
    let rows = lexical_rows::<f64>(&corpus, matches!(a.mode, LexicalMode::Anchored), a.fold_case);
    let mut text = render(&report::lexical_table(&rows), a.format);
    if matches!(a.format, OutFmt::Text) {
        let per: Vec<_> = rows.iter().map(|r| r.distance).collect();
        if let Some(s) = summarize(&per) {
            text.push_str(&format!(
                "\nmean over concerns {}\nmean over all distances {}\n",
                report::fixed(s.unweighted, 2),
                report::fixed(s.weighted, 2)
            ));
        }
    }
    emit(&text, None)
}

fn element(text: &str) -> Result<ElementPath, Error> {
    ElementPath::parse(text)
}

fn query(a: &QueryArgs) -> Outcome {
    let corpus = load_corpus(&a.input)?;
    let json = matches!(a.format, OutFmt::Json);
    let text = if let Some(c) = &a.concern {
        let rows = find_usages(&corpus, c)?;
        if json {
            json_text(&json!(rows
                .iter()
                .map(|(p, m)| json!({"element": p.to_string(), "magnitude": m}))
                .collect::<Vec<_>>()))
        } else {
            render(&report::usages_table(&rows), a.format)
        }
    } else if let Some(e) = &a.element {
        let rows = concerns_of(&corpus, &element(e)?);
        if json {
            json_text(&json!(rows
                .iter()
                .map(|(c, m)| json!({"concern": c, "magnitude": m}))
                .collect::<Vec<_>>()))
        } else {
            render(&report::concerns_table(&rows), a.format)
        }
    } else if let Some(e) = &a.related {
        let related = related_elements(&corpus, &element(e)?);
        if json {
            json_text(&report::related_json(&related))
        } else {
            render(&report::related_table(&related), a.format)
        }
    } else {
        let kind: ConcernKind = a.kind.as_deref().unwrap_or_default().parse()?;
        let rows = list_by_kind(&corpus, kind);
        if json {
            json_text(&report::by_kind_json(&rows))
        } else {
            render(&report::by_kind_table(&rows), a.format)
        }
    };
    emit(&text, None)
}

fn stats(a: &StatsArgs) -> Outcome {
    let table = ResultsTable::<f64>::read(&a.results)?;
    let variables: Vec<Variable> = match a.variable {
        VarArg::Correctness => vec![Variable::Correctness],
        VarArg::Time => vec![Variable::Time],
        VarArg::Efficiency => vec![Variable::Efficiency],
        VarArg::Confidence => vec![Variable::Confidence],
        VarArg::All => Variable::ALL.to_vec(),
    };
    let method = match a.method {
        MethodArg::Exact => Method::Exact,
        MethodArg::Approx => Method::Approx,
        MethodArg::Auto => Method::Auto,
    };
    let policy = match a.alternative {
        PolicyArg::Observed => AlternativePolicy::Observed,
        PolicyArg::Hypothesis => AlternativePolicy::Hypothesis,
    };
    let comparisons = compare_groups(&table, &variables, method, policy)?;
    let summaries = vec![
        group_summary(&table, Group::Annotated)?,
        group_summary(&table, Group::Unannotated)?,
    ];
    let text = match a.format {
        OutFmt::Json => json_text(&json!({
            "groups": summaries,
            "comparisons": comparisons,
        })),
        OutFmt::Text => {
            report::summary_table(&summaries).to_text() + "\n" + &report::stats_table(&comparisons).to_text()
        }
        f => render(&report::stats_table(&comparisons), f),
    };
    emit(&text, None)
}

fn report_cmd(a: &ReportArgs) -> Outcome {
    let corpus = load_corpus(&a.input)?;
    let options = MetricsOptions {
        min_recognizers: 0,
        fold_case: false,
    };
    let mut text = report::corpus_report::<f64>(&corpus, &options);
    text.push_str("\n## Concern kinds\n\n");
    text.push_str(&report::kind_table(&kind_distribution(&corpus, a.min_recognizers)).to_markdown());
    text.push('\n');
    text.push_str(&report::annotator_kind_table(&corpus).to_markdown());
    emit(&text, a.out.as_deref())
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Extract(a) => extract(a),
        Command::Merge(a) => merge_cmd(a),
        Command::Suggest(a) => suggest(a),
        Command::Metrics(a) => metrics(a),
        Command::Matrix(a) => matrix(a),
        Command::Lexical(a) => lexical(a),
        Command::Query(a) => query(a),
        Command::Stats(a) => stats(a),
        Command::Report(a) => report_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let rendered = e.render().to_string();
            let mut lines = rendered.lines();
            let first = lines.next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("ERROR[1]: {first}");
            for l in lines {
                eprintln!("{l}");
            }
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("ERROR[{}]: {}", f.code, f.message.replace('\n', " "));
            ExitCode::from(f.code)
        }
    }
}
