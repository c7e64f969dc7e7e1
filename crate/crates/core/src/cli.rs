//! Batch command-line front end.
//!
//! Exit status: 0 on success, 1 on usage errors (unknown subcommand or
//! flag, bad flag values, missing input files), 2 on data errors
//! (malformed CoNLL, unmatched documents, invalid entity sets).

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{
    analyze_corpus, breakdown_by_mention_type, composition_breakdown, format_composition_breakdown,
    format_error_log, format_error_table, format_mention_type_breakdown, total_counts,
};
use crate::conll::{parse_conll, write_conll_string, Corpus, Document};
use crate::error::Error;
use crate::experiments::{
    audit_annotations, condition_grid, default_fractions, format_audit, format_document_table, format_grid,
    format_study_tsv, per_document_table, run_truncation_study, StudyMetric,
};
use crate::mentions::Scheme;
use crate::metrics::{score_corpus, MentionMode, SingletonMode};
use crate::report::{format_score_table, format_score_tsv};
use crate::resources::Resources;
use crate::sieve::{resolve_corpus, SieveConfig};
use crate::split::{default_genre, stratified_split};
use crate::stats::{corpus_stats, format_stats_table, format_stats_tsv};

#[derive(Debug, Parser)]
#[command(name = "sievecoref", version, about = "Rule-based Dutch coreference resolution and evaluation")]
pub struct Cli {
    /// Worker threads for per-document parallelism.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: u16,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect mentions and resolve coreference; writes CoNLL.
    Resolve(ResolveArgs),
    /// Score system output against gold.
    Score(ScoreArgs),
    /// Classify the errors of system output against gold.
    AnalyzeErrors(AnalyzeArgs),
    /// Corpus statistics.
    Stats(StatsArgs),
    /// Genre-stratified train/dev/test split.
    Split(SplitArgs),
    /// Score documents truncated to a grid of length fractions.
    TruncateStudy(StudyArgs),
    /// Flag likely annotation inconsistencies in gold files.
    Audit(AuditArgs),
    /// Scores under predicted/gold mentions with and without singletons.
    Grid(GridArgs),
}

#[derive(Debug, Args)]
pub struct ResolveArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// `none`, or a sieve config file; all sieves when omitted.
    #[arg(long)]
    pub sieves: Option<String>,
    /// Mention boundary scheme: riddle or sonar (overrides the config file).
    #[arg(long)]
    pub scheme: Option<Scheme>,
    /// Resolve the mentions of the input's coreference column instead of
    /// detecting mentions.
    #[arg(long)]
    pub gold_mentions: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub gold: PathBuf,
    /// System output; repeat to compare several systems.
    #[arg(long, required = true)]
    pub sys: Vec<PathBuf>,
    #[arg(long, default_value = "include")]
    pub singletons: SingletonMode,
    /// System output was produced from the gold mentions.
    #[arg(long)]
    pub gold_mentions: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl EvalArgs {
    fn mention_mode(&self) -> MentionMode {
        if self.gold_mentions {
            MentionMode::Gold
        } else {
            MentionMode::Predicted
        }
    }
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub eval: EvalArgs,
    /// One row per document and system, best LEA and CoNLL marked with `*`.
    #[arg(long, conflicts_with = "tsv")]
    pub per_document: bool,
    /// key/value output for a single system.
    #[arg(long)]
    pub tsv: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub gold: PathBuf,
    #[arg(long, required = true)]
    pub sys: Vec<PathBuf>,
    /// Drop singleton entities from both sides first.
    #[arg(long)]
    pub ignore_singletons: bool,
    /// Also write every error record to this file.
    #[arg(long)]
    pub log: Option<PathBuf>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// One or more corpora; each becomes a column.
    #[arg(long, short, required = true)]
    pub input: Vec<PathBuf>,
    #[arg(long)]
    pub tsv: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// train,dev,test fractions.
    #[arg(long, default_value = "0.8,0.1,0.1")]
    pub ratios: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Lines of `document-id<TAB>genre`; unlisted documents are novels.
    #[arg(long)]
    pub genres: Option<PathBuf>,
    /// Directory for `<stem>.train.conll`, `.dev.conll` and `.test.conll`.
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct StudyArgs {
    #[arg(long)]
    pub gold: PathBuf,
    #[arg(long)]
    pub sys: PathBuf,
    /// Comma-separated percentages of words to keep.
    #[arg(long)]
    pub fractions: Option<String>,
    /// Comma-separated metrics: mentions, muc, bcub, ceafe, lea, conll.
    #[arg(long, default_value = "lea,conll")]
    pub metrics: String,
    #[arg(long, default_value = "include")]
    pub singletons: SingletonMode,
    #[arg(long)]
    pub gold_mentions: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long)]
    pub gold: PathBuf,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub gold: PathBuf,
    /// Output of the system run on predicted mentions.
    #[arg(long)]
    pub sys: PathBuf,
    /// Output of the system run on gold mentions.
    #[arg(long)]
    pub sys_gold_mentions: PathBuf,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::InvalidArgument(m) | Error::Config(m) => Failure::Usage(m),
            other => Failure::Data(other.to_string()),
        }
    }
}

type Outcome<T = ()> = std::result::Result<T, Failure>;

/// Parses `args` (including the program name) and runs the command.
/// Returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut (dyn Write + Send), stderr: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind::*;
            return if matches!(e.kind(), DisplayHelp | DisplayVersion) {
                let _ = write!(stdout, "{}", e.render());
                0
            } else {
                let _ = write!(stderr, "{}", e.render());
                1
            };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs as usize).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot start worker threads: {e}");
            return 2;
        }
    };
    match pool.install(|| execute(&cli.command, stdout, stderr)) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(stderr, "error: {m}\n\nFor more information, try '--help'.");
            1
        }
        Err(Failure::Data(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            2
        }
    }
}

fn execute(command: &Command, stdout: &mut (dyn Write + Send), stderr: &mut (dyn Write + Send)) -> Outcome {
    match command {
        Command::Resolve(a) => resolve(a, stdout),
        Command::Score(a) => score(a, stdout),
        Command::AnalyzeErrors(a) => analyze(a, stdout),
        Command::Stats(a) => stats(a, stdout),
        Command::Split(a) => split(a, stderr),
        Command::TruncateStudy(a) => study(a, stdout),
        Command::Audit(a) => audit(a, stdout),
        Command::Grid(a) => grid(a, stdout),
    }
}

fn require_files<'a>(paths: impl IntoIterator<Item = &'a PathBuf>) -> Outcome {
    for p in paths {
        if !p.is_file() {
            return Err(Failure::Usage(format!("input file {} does not exist", p.display())));
        }
    }
    Ok(())
}

fn read_corpus(path: &Path) -> Outcome<Corpus> {
    let file = File::open(path).map_err(|e| Failure::Usage(format!("cannot open {}: {e}", path.display())))?;
    parse_conll(BufReader::new(file)).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&PathBuf>, text: &str, stdout: &mut (dyn Write + Send)) -> Outcome {
    let res = match output {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    res.map_err(Failure::Data)
}

/// Display label of an input file: its name without extension.
fn label(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

fn sorted(mut corpus: Corpus) -> Corpus {
    corpus.documents.sort_by(|a, b| (&a.id, &a.part).cmp(&(&b.id, &b.part)));
    corpus
}

fn resolve(a: &ResolveArgs, stdout: &mut (dyn Write + Send)) -> Outcome {
    require_files([&a.input])?;
    let mut config = match a.sieves.as_deref() {
        None => SieveConfig::default(),
        Some("none") => SieveConfig::none(),
        Some(path) => {
            let path = Path::new(path);
            if !path.is_file() {
                return Err(Failure::Usage(format!("sieve config {} does not exist", path.display())));
            }
            SieveConfig::load(path)?
        }
    };
    if let Some(s) = a.scheme {
        config.scheme = s;
    }
    let corpus = read_corpus(&a.input)?;
    let out = resolve_corpus(&corpus, &config, Resources::shipped(), a.gold_mentions)?;
    emit(a.output.as_ref(), &write_conll_string(&out)?, stdout)
}

fn score(a: &ScoreArgs, stdout: &mut (dyn Write + Send)) -> Outcome {
    let e = &a.eval;
    require_files(std::iter::once(&e.gold).chain(&e.sys))?;
    if a.tsv && e.sys.len() > 1 {
        return Err(Failure::Usage("--tsv takes a single --sys file".into()));
    }
    let gold = read_corpus(&e.gold)?;
    let systems = e
        .sys
        .iter()
        .map(|p| Ok((label(p), read_corpus(p)?)))
        .collect::<Outcome<Vec<_>>>()?;
    let text = if a.per_document {
        format_document_table(&per_document_table(&gold, &systems, e.singletons, e.mention_mode())?)
    } else {
        let mut rows = Vec::new();
        for (name, sys) in &systems {
            rows.push((name.clone(), score_corpus(&gold, sys, e.singletons, e.mention_mode())?.total));
        }
        if a.tsv {
            format_score_tsv(&rows[0].1)
        } else {
            format_score_table(&rows)
        }
    };
    emit(e.output.as_ref(), &text, stdout)
}

fn analyze(a: &AnalyzeArgs, stdout: &mut (dyn Write + Send)) -> Outcome {
    require_files(std::iter::once(&a.gold).chain(&a.sys))?;
    let gold = read_corpus(&a.gold)?;
    let mut rows = Vec::new();
    let mut all_logs = Vec::new();
    for p in &a.sys {
        let sys = read_corpus(p)?;
        let mut logs = analyze_corpus(&gold, &sys, a.ignore_singletons)?;
        logs.sort_by(|x, y| x.doc.cmp(&y.doc));
        rows.push((label(p), total_counts(&logs)));
        all_logs.push((label(p), logs));
    }
    let flat: Vec<_> = all_logs.iter().flat_map(|(_, l)| l.iter()).collect();
    let mut text = format!(
        "# singleton_mode: {}\n# mention_mode: predicted\n",
        if a.ignore_singletons { SingletonMode::Excluded } else { SingletonMode::Included }
    );
    text.push_str("\nError counts\n");
    text.push_str(&format_error_table(&rows));
    text.push_str("\nMissing and extra mentions by type\n");
    text.push_str(&format_mention_type_breakdown(&breakdown_by_mention_type(flat.iter().copied())));
    text.push_str("\nDivided and conflated entities by composition\n");
    text.push_str(&format_composition_breakdown(&composition_breakdown(flat.iter().copied())));
    if let Some(path) = &a.log {
        let mut log = String::new();
        for (name, logs) in &all_logs {
            if all_logs.len() > 1 {
                log.push_str(&format!("# system: {name}\n"));
            }
            log.push_str(&format_error_log(logs));
        }
        emit(Some(path), &log, stdout)?;
    }
    emit(a.output.as_ref(), &text, stdout)
}

fn stats(a: &StatsArgs, stdout: &mut (dyn Write + Send)) -> Outcome {
    require_files(&a.input)?;
    let mut columns = Vec::new();
    for p in &a.input {
        columns.push((label(p), corpus_stats(&read_corpus(p)?)));
    }
    let text = if a.tsv { format_stats_tsv(&columns) } else { format_stats_table(&columns) };
    emit(a.output.as_ref(), &text, stdout)
}

/// Parses comma-separated numbers.
fn numbers(text: &str, what: &str) -> Outcome<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Failure::Usage(format!("invalid {what} value {t:?}")))
        })
        .collect()
}

fn read_genres(path: &Path) -> Outcome<HashMap<String, String>> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split('\t');
        match (cols.next(), cols.next()) {
            (Some(id), Some(genre)) if !genre.trim().is_empty() => {
                map.insert(id.trim().to_string(), genre.trim().to_string());
            }
            _ => {
                return Err(Failure::Data(format!(
                    "{} line {}: expected document id and genre separated by a tab",
                    path.display(),
                    n + 1
                )))
            }
        }
    }
    Ok(map)
}

fn split(a: &SplitArgs, stderr: &mut (dyn Write + Send)) -> Outcome {
    require_files(std::iter::once(&a.input).chain(&a.genres))?;
    let ratios = numbers(&a.ratios, "ratio")?;
    let ratios: [f64; 3] = ratios
        .try_into()
        .map_err(|_| Failure::Usage("--ratios needs exactly three values".into()))?;
    let genres = a.genres.as_deref().map(read_genres).transpose()?.unwrap_or_default();
    let corpus = read_corpus(&a.input)?;
    let genre_of = |d: &Document| {
        genres
            .get(&d.id)
            .or_else(|| genres.get(&d.name()))
            .cloned()
            .unwrap_or_else(|| default_genre(d))
    };
    let outcome = stratified_split(&corpus, ratios, genre_of, a.seed)?;
    for w in &outcome.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    fs::create_dir_all(&a.out_dir).map_err(|e| Failure::Data(format!("cannot create {}: {e}", a.out_dir.display())))?;
    let stem = label(&a.input);
    for (name, part) in ["train", "dev", "test"].iter().zip(outcome.parts()) {
        let path = a.out_dir.join(format!("{stem}.{name}.conll"));
        fs::write(&path, write_conll_string(part)?)
            .map_err(|e| Failure::Data(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn study(a: &StudyArgs, stdout: &mut (dyn Write + Send)) -> Outcome {
    require_files([&a.gold, &a.sys])?;
    let fractions = match &a.fractions {
        Some(f) => numbers(f, "fraction")?,
        None => default_fractions(),
    };
    let metrics = a
        .metrics
        .split(',')
        .map(|m| m.trim().parse::<StudyMetric>())
        .collect::<Result<Vec<_>, _>>()?;
    let mode = if a.gold_mentions { MentionMode::Gold } else { MentionMode::Predicted };
    let gold = sorted(read_corpus(&a.gold)?);
    let sys = read_corpus(&a.sys)?;
    let study = run_truncation_study(&gold, &sys, &fractions, &metrics, a.singletons, mode)?;
    let text = format!("# singleton_mode: {}\n# mention_mode: {mode}\n{}", a.singletons, format_study_tsv(&study));
    emit(a.output.as_ref(), &text, stdout)
}

fn audit(a: &AuditArgs, stdout: &mut (dyn Write + Send)) -> Outcome {
    require_files([&a.gold])?;
    let gold = sorted(read_corpus(&a.gold)?);
    emit(a.output.as_ref(), &format_audit(&audit_annotations(&gold)), stdout)
}

fn grid(a: &GridArgs, stdout: &mut (dyn Write + Send)) -> Outcome {
    require_files([&a.gold, &a.sys, &a.sys_gold_mentions])?;
    let gold = read_corpus(&a.gold)?;
    let predicted = read_corpus(&a.sys)?;
    let with_gold = read_corpus(&a.sys_gold_mentions)?;
    let cells = condition_grid(&gold, &predicted, &with_gold)?;
    emit(a.output.as_ref(), &format_grid(&cells), stdout)
}
