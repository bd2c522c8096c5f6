//! negscope: negation-aware sentiment classification experiments for
//! colloquial Arabic reviews.
//!
//! Subcommands: `stats`, `tag`, `explain`, `train`, `evaluate`, `compare`.
//! Exit codes: 0 on success, 1 on usage errors, 2 on data or resource errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use negscope_core::classify::{train_model, ClassifierKind, TrainConfig, TrainedModel};
use negscope_core::corpus::{
    self, corpus_stats, load_corpus, load_run_config, load_sentiment_lexicon, load_stopwords,
    CorpusFormat, LabeledCorpus, NegationStats, SentimentLexicon,
};
use negscope_core::digest::fnv1a64_hex;
use negscope_core::evaluate::{
    compare_grid, cross_validate, render_comparison_table, stratified_folds, unstratified_folds,
    ComparisonReport, CvReport, FoldPlan,
};
use negscope_core::features::{
    build_matrix, build_vocabulary, compute_idf, remove_stopwords, term_of, write_vocabulary,
};
use negscope_core::negation::{PolicyKind, ScopePolicy, TriggerTrace};
use negscope_core::{PolarityLabel, Resources, RuleTrace, TokenizedReview};

#[derive(Parser)]
#[command(
    name = "negscope",
    version,
    about = "Negation-aware sentiment classification experiments for colloquial Arabic reviews"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Sectioned config file (negation rules, preprocessing, resource paths);
    /// defaults to the built-in resources/negation.conf
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Sentiment lexicon (`word<TAB>polarity`); overrides the config's
    /// [resources] entry
    #[arg(long, global = true, value_name = "PATH")]
    lexicon: Option<PathBuf>,

    /// Stop-word list, one token per line; overrides the config's
    /// [resources] entry
    #[arg(long, global = true, value_name = "PATH")]
    stopwords: Option<PathBuf>,

    /// Disable stop-word removal entirely
    #[arg(long, global = true)]
    no_stopwords: bool,

    /// Seed for fold assignment and training shuffles
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Corpus-level negation statistics
    Stats(StatsArgs),
    /// Tag a corpus under a scope policy
    Tag(TagArgs),
    /// Rule-based tagging with a per-trigger trace (tag --explain --policy rules)
    Explain(ExplainArgs),
    /// Train one classifier on the full corpus and save the model
    Train(TrainArgs),
    /// K-fold cross-validation of one (policy, classifier) condition
    Evaluate(EvaluateArgs),
    /// Run the full policies × classifiers comparison grid
    Compare(CompareArgs),
}

#[derive(Args)]
struct CorpusArg {
    /// Corpus file
    corpus: PathBuf,

    /// Corpus encoding
    #[arg(long, default_value = "tsv", value_parser = parse_format)]
    format: CorpusFormat,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    corpus: CorpusArg,
}

#[derive(Args)]
struct TagArgs {
    #[command(flatten)]
    corpus: CorpusArg,

    /// Scope policy to tag with
    #[arg(long, default_value = "rules", value_parser = parse_policy)]
    policy: PolicyKind,

    /// Add per-trigger trace lines (rule-based policy only)
    #[arg(long)]
    explain: bool,

    /// Write to a file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExplainArgs {
    #[command(flatten)]
    corpus: CorpusArg,

    /// Write to a file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    corpus: CorpusArg,

    /// Classifier to train
    #[arg(long, value_parser = parse_classifier)]
    classifier: ClassifierKind,

    /// Scope policy applied before featurization
    #[arg(long, default_value = "rules", value_parser = parse_policy)]
    policy: PolicyKind,

    /// Output model file; a `<PATH>.vocab` sidecar is written next to it
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    corpus: CorpusArg,

    /// Classifier to evaluate
    #[arg(long, value_parser = parse_classifier)]
    classifier: ClassifierKind,

    /// Scope policy applied before featurization
    #[arg(long, default_value = "rules", value_parser = parse_policy)]
    policy: PolicyKind,

    /// Number of cross-validation folds
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    folds: u64,

    /// Plain random folds instead of stratified ones
    #[arg(long)]
    no_stratify: bool,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    corpus: CorpusArg,

    /// Number of cross-validation folds
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    folds: u64,

    /// Plain random folds instead of stratified ones
    #[arg(long)]
    no_stratify: bool,

    /// Write `<PREFIX>.txt` and `<PREFIX>.json` reports
    #[arg(long, value_name = "PREFIX")]
    out: Option<PathBuf>,
}

fn parse_format(s: &str) -> std::result::Result<CorpusFormat, String> {
    s.parse()
}

fn parse_policy(s: &str) -> std::result::Result<PolicyKind, String> {
    s.parse()
}

fn parse_classifier(s: &str) -> std::result::Result<ClassifierKind, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{err}");
                    ExitCode::from(1)
                }
            }
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Stats(args) => cmd_stats(&cli.global, args),
        Command::Tag(args) => cmd_tag(&cli.global, args),
        Command::Explain(args) => {
            let tag_args = TagArgs {
                corpus: CorpusArg {
                    corpus: args.corpus.corpus.clone(),
                    format: args.corpus.format,
                },
                policy: PolicyKind::RuleBased,
                explain: true,
                out: args.out.clone(),
            };
            cmd_tag(&cli.global, &tag_args)
        }
        Command::Train(args) => cmd_train(&cli.global, args),
        Command::Evaluate(args) => cmd_evaluate(&cli.global, args),
        Command::Compare(args) => cmd_compare(&cli.global, args),
    }
}

/// Loaded resources plus where each one came from, for the manifest.
struct ResolvedResources {
    resources: Resources,
    config_origin: String,
    lexicon_origin: Option<String>,
    stopwords_origin: Option<String>,
    digests: BTreeMap<String, String>,
}

const BUILTIN: &str = "<built-in>";

fn resolve_resources(global: &GlobalArgs) -> Result<ResolvedResources> {
    let mut digests = BTreeMap::new();

    let (run, config_origin) = match &global.config {
        Some(path) => {
            let run = load_run_config(path)?;
            let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            digests.insert("config".to_string(), fnv1a64_hex(&bytes));
            (run, path.display().to_string())
        }
        None => {
            digests.insert(
                "config".to_string(),
                fnv1a64_hex(corpus::default_config_text().as_bytes()),
            );
            (corpus::default_run_config(), BUILTIN.to_string())
        }
    };
    let config_dir = global.config.as_deref().and_then(Path::parent);
    let from_config = |key: &str| -> Option<PathBuf> {
        run.resource_paths.get(key).map(|rel| match config_dir {
            Some(dir) => dir.join(rel),
            None => PathBuf::from(rel),
        })
    };

    let lexicon_path = global.lexicon.clone().or_else(|| from_config("lexicon"));
    let (lexicon, lexicon_origin) = match &lexicon_path {
        Some(path) => {
            let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            digests.insert("lexicon".to_string(), fnv1a64_hex(&bytes));
            (
                load_sentiment_lexicon(path, &run.preprocess)?,
                Some(path.display().to_string()),
            )
        }
        None => (SentimentLexicon::default(), None),
    };

    let (stopwords, stopwords_origin) = if global.no_stopwords {
        (Default::default(), None)
    } else {
        match global.stopwords.clone().or_else(|| from_config("stopwords")) {
            Some(path) => {
                let bytes =
                    fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
                digests.insert("stopwords".to_string(), fnv1a64_hex(&bytes));
                (
                    load_stopwords(&path, &run.preprocess)?,
                    Some(path.display().to_string()),
                )
            }
            None => {
                digests.insert(
                    "stopwords".to_string(),
                    fnv1a64_hex(corpus::default_stopwords_text().as_bytes()),
                );
                (
                    corpus::default_stopwords(&run.preprocess),
                    Some(BUILTIN.to_string()),
                )
            }
        }
    };

    Ok(ResolvedResources {
        resources: Resources {
            negation: run.negation,
            lexicon,
            stopwords,
            preprocess: run.preprocess,
        },
        config_origin,
        lexicon_origin,
        stopwords_origin,
        digests,
    })
}

fn load_corpus_with_digest(
    args: &CorpusArg,
    resolved: &mut ResolvedResources,
) -> Result<LabeledCorpus> {
    let bytes = fs::read(&args.corpus)
        .with_context(|| format!("reading {}", args.corpus.display()))?;
    resolved
        .digests
        .insert("corpus".to_string(), fnv1a64_hex(&bytes));
    Ok(load_corpus(&args.corpus, args.format)?)
}

/// Provenance block embedded in every experiment report and model file.
#[derive(Serialize)]
struct RunManifest {
    tool: String,
    command: String,
    seed: u64,
    corpus: String,
    config: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    lexicon: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stopwords: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    policy: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classifier: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    folds: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stratified: Option<bool>,
    digests: BTreeMap<String, String>,
}

impl RunManifest {
    fn new(
        command: &str,
        global: &GlobalArgs,
        corpus: &Path,
        resolved: &ResolvedResources,
    ) -> Self {
        RunManifest {
            tool: format!("negscope {}", env!("CARGO_PKG_VERSION")),
            command: command.to_string(),
            seed: global.seed,
            corpus: corpus.display().to_string(),
            config: resolved.config_origin.clone(),
            lexicon: resolved.lexicon_origin.clone(),
            stopwords: resolved.stopwords_origin.clone(),
            policy: None,
            classifier: None,
            folds: None,
            stratified: None,
            digests: resolved.digests.clone(),
        }
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, content).with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {}", path.display());
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn pct(v: f64) -> String {
    format!("{:.2}%", v * 100.0)
}

fn cmd_stats(global: &GlobalArgs, args: &StatsArgs) -> Result<()> {
    let mut resolved = resolve_resources(global)?;
    let corpus = load_corpus_with_digest(&args.corpus, &mut resolved)?;
    let stats = corpus_stats(
        &corpus,
        &resolved.resources.negation,
        &resolved.resources.preprocess,
    )?;
    let manifest = RunManifest::new("stats", global, &args.corpus.corpus, &resolved);

    if global.json {
        #[derive(Serialize)]
        struct StatsReport<'a> {
            #[serde(flatten)]
            stats: &'a NegationStats,
            manifest: &'a RunManifest,
        }
        println!(
            "{}",
            serde_json::to_string_pretty(&StatsReport {
                stats: &stats,
                manifest: &manifest
            })?
        );
    } else {
        println!("reviews: {}", stats.total_reviews);
        println!("reviews with negation triggers: {}", stats.reviews_with_trigger);
        println!("prevalence: {}", pct(stats.prevalence));
        match (stats.negative_share, stats.positive_share) {
            (Some(neg), Some(pos)) => {
                println!("negative share among trigger reviews: {}", pct(neg));
                println!("positive share among trigger reviews: {}", pct(pos));
            }
            _ => {
                println!("negative share among trigger reviews: n/a");
                println!("positive share among trigger reviews: n/a");
            }
        }
    }
    Ok(())
}

fn render_trace_line(t: &TriggerTrace) -> String {
    let case = t
        .fired_case
        .map(|c| c.number().to_string())
        .unwrap_or_else(|| "none".to_string());
    let tagged: Vec<String> = t.tagged_indices.iter().map(ToString::to_string).collect();
    format!(
        "{}@{} case={} tagged=[{}]",
        t.trigger,
        t.trigger_index,
        case,
        tagged.join(",")
    )
}

fn tagged_text(review: &TokenizedReview) -> String {
    review
        .tokens
        .iter()
        .map(term_of)
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_tag(global: &GlobalArgs, args: &TagArgs) -> Result<()> {
    let mut resolved = resolve_resources(global)?;
    let corpus = load_corpus_with_digest(&args.corpus, &mut resolved)?;
    let policy = ScopePolicy::with_window(args.policy, resolved.resources.negation.window_length);

    let mut out = String::new();
    for review in &corpus.reviews {
        let (tagged, trace) = negscope_core::tag_review(review, &policy, &resolved.resources);
        if global.json {
            #[derive(Serialize)]
            struct TaggedRow<'a> {
                id: &'a str,
                text: String,
                #[serde(skip_serializing_if = "Option::is_none")]
                label: Option<PolarityLabel>,
                #[serde(skip_serializing_if = "Option::is_none")]
                trace: Option<&'a RuleTrace>,
            }
            let row = TaggedRow {
                id: &review.id,
                text: tagged_text(&tagged),
                label: review.label,
                trace: if args.explain { trace.as_ref() } else { None },
            };
            out.push_str(&serde_json::to_string(&row)?);
            out.push('\n');
        } else {
            let label = review.label.map(|l| l.as_str()).unwrap_or("");
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                review.id,
                tagged_text(&tagged),
                label
            ));
            if args.explain {
                if let Some(trace) = &trace {
                    for t in &trace.triggers {
                        out.push_str(&render_trace_line(t));
                        out.push('\n');
                    }
                }
            }
        }
    }
    emit(&args.out, &out)
}

fn cmd_train(global: &GlobalArgs, args: &TrainArgs) -> Result<()> {
    if args.classifier == ClassifierKind::Knn {
        bail!(
            "knn models are not serialized standalone (they reference the full training matrix); \
             use the evaluate command instead"
        );
    }
    let mut resolved = resolve_resources(global)?;
    let corpus = load_corpus_with_digest(&args.corpus, &mut resolved)?;
    let policy = ScopePolicy::with_window(args.policy, resolved.resources.negation.window_length);

    let prepared: Vec<TokenizedReview> = corpus
        .reviews
        .iter()
        .map(|r| {
            let (tagged, _) = negscope_core::tag_review(r, &policy, &resolved.resources);
            remove_stopwords(&tagged, &resolved.resources.stopwords)
        })
        .collect();
    let vocab = build_vocabulary(&prepared)?;
    let idf = compute_idf(&vocab);
    let matrix = build_matrix(&prepared, &vocab, &idf)?;

    let train_config = TrainConfig {
        classifier: args.classifier,
        seed: global.seed,
        ..TrainConfig::new(args.classifier)
    };
    let model: TrainedModel = train_model(&matrix, &train_config)?;

    let mut manifest = RunManifest::new("train", global, &args.corpus.corpus, &resolved);
    manifest.policy = Some(args.policy.name().to_string());
    manifest.classifier = Some(args.classifier.name().to_string());
    let comment = format!("manifest {}", serde_json::to_string(&manifest)?);
    negscope_core::classify::save_model(&model, &args.out, &[comment])?;

    let vocab_path = PathBuf::from(format!("{}.vocab", args.out.display()));
    let mut vocab_file = Vec::new();
    write_vocabulary(&mut vocab_file, &vocab)?;
    fs::write(&vocab_path, vocab_file)
        .with_context(|| format!("writing {}", vocab_path.display()))?;

    println!(
        "model written to {} (|V|={})",
        args.out.display(),
        vocab.len()
    );
    println!("vocabulary written to {}", vocab_path.display());
    Ok(())
}

fn build_plan(
    corpus: &LabeledCorpus,
    folds: u64,
    stratified: bool,
    seed: u64,
) -> negscope_core::Result<FoldPlan> {
    if stratified {
        stratified_folds(corpus, folds as usize, seed)
    } else {
        unstratified_folds(corpus, folds as usize, seed)
    }
}

fn cmd_evaluate(global: &GlobalArgs, args: &EvaluateArgs) -> Result<()> {
    let mut resolved = resolve_resources(global)?;
    let corpus = load_corpus_with_digest(&args.corpus, &mut resolved)?;
    let policy = ScopePolicy::with_window(args.policy, resolved.resources.negation.window_length);
    let stratified = !args.no_stratify;
    let plan = build_plan(&corpus, args.folds, stratified, global.seed)?;
    let train_config = TrainConfig {
        classifier: args.classifier,
        seed: global.seed,
        ..TrainConfig::new(args.classifier)
    };
    let report = cross_validate(&corpus, &policy, &train_config, &resolved.resources, &plan)?;

    let mut manifest = RunManifest::new("evaluate", global, &args.corpus.corpus, &resolved);
    manifest.policy = Some(args.policy.name().to_string());
    manifest.classifier = Some(args.classifier.name().to_string());
    manifest.folds = Some(args.folds);
    manifest.stratified = Some(stratified);

    if global.json {
        #[derive(Serialize)]
        struct EvaluateReport<'a> {
            policy: &'a str,
            classifier: &'a str,
            folds: u64,
            stratified: bool,
            #[serde(flatten)]
            report: &'a CvReport,
            manifest: &'a RunManifest,
        }
        println!(
            "{}",
            serde_json::to_string_pretty(&EvaluateReport {
                policy: args.policy.name(),
                classifier: args.classifier.name(),
                folds: args.folds,
                stratified,
                report: &report,
                manifest: &manifest,
            })?
        );
    } else {
        println!("policy: {}", args.policy.name());
        println!("classifier: {}", args.classifier.name());
        println!(
            "folds: {} ({}, seed {})",
            args.folds,
            if stratified { "stratified" } else { "unstratified" },
            global.seed
        );
        println!("accuracy:  {:.3}", report.metrics.accuracy);
        match report.metrics.precision {
            Some(p) => println!("precision: {p:.3}"),
            None => println!("precision: n/a"),
        }
        match report.metrics.recall {
            Some(r) => println!("recall:    {r:.3}"),
            None => println!("recall:    n/a"),
        }
        println!("per-fold confusion (tp tn fp fn):");
        for (i, cm) in report.per_fold.iter().enumerate() {
            println!(
                "  fold {:>2}: {} {} {} {}",
                i + 1,
                cm.true_pos,
                cm.true_neg,
                cm.false_pos,
                cm.false_neg
            );
        }
        let p = &report.pooled;
        println!(
            "pooled: tp={} tn={} fp={} fn={}",
            p.true_pos, p.true_neg, p.false_pos, p.false_neg
        );
    }
    Ok(())
}

fn cmd_compare(global: &GlobalArgs, args: &CompareArgs) -> Result<()> {
    let mut resolved = resolve_resources(global)?;
    let corpus = load_corpus_with_digest(&args.corpus, &mut resolved)?;
    let window = resolved.resources.negation.window_length;
    let policies: Vec<ScopePolicy> = PolicyKind::all()
        .into_iter()
        .map(|kind| ScopePolicy::with_window(kind, window))
        .collect();
    let classifiers = ClassifierKind::all();
    let stratified = !args.no_stratify;
    let base_config = TrainConfig {
        seed: global.seed,
        ..TrainConfig::new(ClassifierKind::Svm)
    };
    let report = compare_grid(
        &corpus,
        &policies,
        &classifiers,
        &resolved.resources,
        &base_config,
        args.folds as usize,
        stratified,
    )?;

    let mut manifest = RunManifest::new("compare", global, &args.corpus.corpus, &resolved);
    manifest.folds = Some(args.folds);
    manifest.stratified = Some(stratified);

    #[derive(Serialize)]
    struct FullReport<'a> {
        #[serde(flatten)]
        report: &'a ComparisonReport,
        manifest: &'a RunManifest,
    }
    let json = serde_json::to_string_pretty(&FullReport {
        report: &report,
        manifest: &manifest,
    })?;
    let mut table = render_comparison_table(&report);
    table.push_str(&format!(
        "config digest: {}\n",
        report.provenance.config_digest
    ));

    match &args.out {
        Some(prefix) => {
            let json_path = PathBuf::from(format!("{}.json", prefix.display()));
            let txt_path = PathBuf::from(format!("{}.txt", prefix.display()));
            fs::write(&json_path, format!("{json}\n"))
                .with_context(|| format!("writing {}", json_path.display()))?;
            fs::write(&txt_path, &table)
                .with_context(|| format!("writing {}", txt_path.display()))?;
            println!("wrote {}", json_path.display());
            println!("wrote {}", txt_path.display());
        }
        None => {
            if global.json {
                println!("{json}");
            } else {
                print!("{table}");
            }
        }
    }
    Ok(())
}
