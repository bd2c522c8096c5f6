//! Corpora, sentiment lexicons, negation configuration, and stop-word lists.
//!
//! Everything loaded here is immutable after construction and safe to share
//! across threads. All resource tokens are normalized at load time with the
//! same table used on review text, so lookups never need to renormalize.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::digest::fnv1a64_hex;
use crate::error::{Error, Result};
use crate::preprocess::{normalize_token, preprocess_review, PreprocessOptions};

/// Document-level polarity. There are exactly two classes; no neutral class
/// exists anywhere in the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolarityLabel {
    Positive,
    Negative,
}

impl PolarityLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            PolarityLabel::Positive => "positive",
            PolarityLabel::Negative => "negative",
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            PolarityLabel::Positive => PolarityLabel::Negative,
            PolarityLabel::Negative => PolarityLabel::Positive,
        }
    }
}

impl fmt::Display for PolarityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolarityLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "positive" => Ok(PolarityLabel::Positive),
            "negative" => Ok(PolarityLabel::Negative),
            other => Err(format!("unknown label {other:?} (expected positive or negative)")),
        }
    }
}

/// One opinion document. `text` is raw, untouched by preprocessing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Review {
    pub id: String,
    pub text: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<PolarityLabel>,
}

/// A sequence of reviews with per-class counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledCorpus {
    pub reviews: Vec<Review>,
    pub class_counts: BTreeMap<PolarityLabel, usize>,
}

impl LabeledCorpus {
    /// Validate ids and texts and compute class counts. Input order is kept.
    pub fn from_reviews(reviews: Vec<Review>) -> Result<Self> {
        let mut seen: HashSet<&str> = HashSet::with_capacity(reviews.len());
        for r in &reviews {
            if r.id.trim().is_empty() {
                return Err(Error::Data("review with empty id".into()));
            }
            if !seen.insert(r.id.as_str()) {
                return Err(Error::Data(format!("duplicate review id {:?}", r.id)));
            }
            if r.text.trim().is_empty() {
                return Err(Error::Data(format!("review {:?} has empty text", r.id)));
            }
        }
        let mut class_counts = BTreeMap::new();
        for r in &reviews {
            if let Some(label) = r.label {
                *class_counts.entry(label).or_insert(0) += 1;
            }
        }
        Ok(LabeledCorpus {
            reviews,
            class_counts,
        })
    }

    pub fn len(&self) -> usize {
        self.reviews.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reviews.is_empty()
    }

    pub fn class_count(&self, label: PolarityLabel) -> usize {
        self.class_counts.get(&label).copied().unwrap_or(0)
    }
}

/// On-disk corpus encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Tsv,
    Jsonl,
}

impl FromStr for CorpusFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "tsv" => Ok(CorpusFormat::Tsv),
            "jsonl" => Ok(CorpusFormat::Jsonl),
            other => Err(format!("unknown corpus format {other:?}")),
        }
    }
}

/// Load a corpus file. TSV rows are `id<TAB>text<TAB>label`; JSONL rows are
/// `{"id":…,"text":…,"label":…}`. An empty label field (or a missing JSON
/// field) yields an unlabeled review. File order is preserved.
pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<LabeledCorpus> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_corpus(&text, format, path)
}

fn parse_corpus(text: &str, format: CorpusFormat, origin: &Path) -> Result<LabeledCorpus> {
    let mut reviews = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let review = match format {
            CorpusFormat::Tsv => {
                let fields: Vec<&str> = line.split('\t').collect();
                if fields.len() != 3 {
                    return Err(Error::parse(
                        origin,
                        line_no,
                        format!("expected 3 tab-separated columns, found {}", fields.len()),
                    ));
                }
                let label = match fields[2].trim() {
                    "" => None,
                    s => Some(
                        PolarityLabel::from_str(s)
                            .map_err(|e| Error::parse(origin, line_no, e))?,
                    ),
                };
                Review {
                    id: fields[0].trim().to_string(),
                    text: fields[1].to_string(),
                    label,
                }
            }
            CorpusFormat::Jsonl => serde_json::from_str::<Review>(line)
                .map_err(|e| Error::parse(origin, line_no, e.to_string()))?,
        };
        if review.id.is_empty() {
            return Err(Error::parse(origin, line_no, "empty review id"));
        }
        if !seen.insert(review.id.clone()) {
            return Err(Error::parse(
                origin,
                line_no,
                format!("duplicate review id {:?}", review.id),
            ));
        }
        if review.text.trim().is_empty() {
            return Err(Error::parse(origin, line_no, "empty review text"));
        }
        reviews.push(review);
    }

    LabeledCorpus::from_reviews(reviews)
}

/// Write a corpus as TSV. Fails if any text contains a tab or newline, which
/// the format cannot carry.
pub fn write_corpus_tsv<W: Write>(out: &mut W, corpus: &LabeledCorpus) -> Result<()> {
    for r in &corpus.reviews {
        if r.text.contains('\t') || r.text.contains('\n') {
            return Err(Error::Data(format!(
                "review {:?} contains a tab or newline; use jsonl output",
                r.id
            )));
        }
        let label = r.label.map(|l| l.as_str()).unwrap_or("");
        writeln!(out, "{}\t{}\t{}", r.id, r.text, label)?;
    }
    Ok(())
}

pub fn write_corpus_jsonl<W: Write>(out: &mut W, corpus: &LabeledCorpus) -> Result<()> {
    for r in &corpus.reviews {
        let line = serde_json::to_string(r).map_err(|e| Error::Data(e.to_string()))?;
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Map from normalized word to polarity. Keys are stored in normalized form,
/// so lookups against preprocessed tokens are plain string equality.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SentimentLexicon {
    entries: HashMap<String, PolarityLabel>,
}

impl SentimentLexicon {
    /// Build from already-normalized entries, rejecting polarity conflicts.
    pub fn from_entries<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, PolarityLabel)>,
    {
        let mut map = HashMap::new();
        for (word, polarity) in entries {
            if let Some(prev) = map.insert(word.clone(), polarity) {
                if prev != polarity {
                    return Err(Error::Resource(format!(
                        "conflicting polarity for lexicon word {word:?}"
                    )));
                }
            }
        }
        Ok(SentimentLexicon { entries: map })
    }

    pub fn polarity_of(&self, word: &str) -> Option<PolarityLabel> {
        self.entries.get(word).copied()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Load a lexicon of `word<TAB>polarity` lines. Blank lines and lines opening
/// with `#` are skipped. Words are normalized before insertion; duplicates
/// with identical polarity are silently deduplicated, conflicting duplicates
/// are an error.
pub fn load_sentiment_lexicon(path: &Path, options: &PreprocessOptions) -> Result<SentimentLexicon> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut entries: HashMap<String, PolarityLabel> = HashMap::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            return Err(Error::parse(
                path,
                line_no,
                format!("expected `word<TAB>polarity`, found {} columns", fields.len()),
            ));
        }
        let word = normalize_token(fields[0], options);
        if word.is_empty() {
            return Err(Error::parse(path, line_no, "empty lexicon word"));
        }
        let polarity = PolarityLabel::from_str(fields[1].trim())
            .map_err(|e| Error::parse(path, line_no, e))?;
        if let Some(prev) = entries.insert(word.clone(), polarity) {
            if prev != polarity {
                return Err(Error::parse(
                    path,
                    line_no,
                    format!("conflicting polarity for normalized word {word:?}"),
                ));
            }
        }
    }

    Ok(SentimentLexicon { entries })
}

/// Context exceptions for one trigger: single words that may stand directly
/// before it, and token sequences that may follow it, each canceling the
/// negation sense.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ContextExceptions {
    pub before: BTreeSet<String>,
    pub after: BTreeSet<Vec<String>>,
}

/// Negation trigger terms plus every exception list the rule engine consults.
/// All stored tokens are normalized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegationConfig {
    pub triggers: BTreeSet<String>,
    pub exceptional_words: BTreeSet<String>,
    pub superlatives: BTreeSet<String>,
    pub context_exceptions: BTreeMap<String, ContextExceptions>,
    pub window_length: usize,
}

impl NegationConfig {
    /// Minimal config for programmatic use: the given triggers, empty
    /// exception lists, window of five. Tokens must already be normalized.
    pub fn with_triggers<I, S>(triggers: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        NegationConfig {
            triggers: triggers.into_iter().map(Into::into).collect(),
            exceptional_words: BTreeSet::new(),
            superlatives: BTreeSet::new(),
            context_exceptions: BTreeMap::new(),
            window_length: 5,
        }
    }

    pub fn is_trigger(&self, surface: &str) -> bool {
        self.triggers.contains(surface)
    }

    pub fn validate(&self) -> Result<()> {
        if self.triggers.is_empty() {
            return Err(Error::Resource("negation config has no triggers".into()));
        }
        if self.window_length < 1 {
            return Err(Error::Resource("window_length must be at least 1".into()));
        }
        for trigger in self.context_exceptions.keys() {
            if !self.triggers.contains(trigger) {
                return Err(Error::Resource(format!(
                    "context exception for {trigger:?}, which is not a trigger"
                )));
            }
        }
        Ok(())
    }

    /// Stable digest of the full rule set, for report provenance.
    pub fn digest(&self) -> String {
        let mut canon = String::new();
        canon.push_str(&format!("w={}\n", self.window_length));
        for t in &self.triggers {
            canon.push_str(&format!("t={t}\n"));
        }
        for e in &self.exceptional_words {
            canon.push_str(&format!("e={e}\n"));
        }
        for s in &self.superlatives {
            canon.push_str(&format!("s={s}\n"));
        }
        for (trigger, ctx) in &self.context_exceptions {
            for b in &ctx.before {
                canon.push_str(&format!("b:{trigger}={b}\n"));
            }
            for a in &ctx.after {
                canon.push_str(&format!("a:{trigger}={}\n", a.join(" ")));
            }
        }
        fnv1a64_hex(canon.as_bytes())
    }
}

/// Everything a single sectioned config file can carry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub negation: NegationConfig,
    pub preprocess: PreprocessOptions,
    /// Paths named in a `[resources]` section, relative to the config file.
    pub resource_paths: BTreeMap<String, String>,
}

const DEFAULT_CONFIG_TEXT: &str = include_str!("../../../resources/negation.conf");

/// Raw text of the built-in config, for provenance digests.
pub fn default_config_text() -> &'static str {
    DEFAULT_CONFIG_TEXT
}

/// The built-in configuration shipped at `resources/negation.conf`.
pub fn default_run_config() -> RunConfig {
    parse_run_config(DEFAULT_CONFIG_TEXT, Path::new("<built-in negation.conf>"))
        .expect("built-in config is valid")
}

/// Load the sectioned config file (triggers, exception lists, preprocessing
/// overrides, resource paths). Missing optional sections fall back to
/// defaults: exceptional = {إلا}, window_length = 5.
pub fn load_run_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_run_config(&text, path)
}

/// As `load_run_config`, returning only the negation rules.
pub fn load_negation_config(path: &Path) -> Result<NegationConfig> {
    Ok(load_run_config(path)?.negation)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Section {
    Triggers,
    Exceptional,
    Superlatives,
    Before(String),
    After(String),
    Preprocess,
    Resources,
}

pub(crate) fn parse_run_config(text: &str, origin: &Path) -> Result<RunConfig> {
    // Raw (unnormalized) collections; normalization happens once the
    // [preprocess] section has fixed the table.
    let mut triggers: Vec<String> = Vec::new();
    let mut exceptional: Vec<String> = Vec::new();
    let mut exceptional_present = false;
    let mut superlatives: Vec<String> = Vec::new();
    let mut before: Vec<(String, String, usize)> = Vec::new();
    let mut after: Vec<(String, Vec<String>)> = Vec::new();
    let mut window_length: usize = 5;
    let mut options = PreprocessOptions::default();
    let mut resource_paths = BTreeMap::new();
    let mut section: Option<Section> = None;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim_end_matches('\r').trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }

        if line.starts_with('[') {
            if !line.ends_with(']') {
                return Err(Error::parse(origin, line_no, "unterminated section header"));
            }
            let inner = line[1..line.len() - 1].trim();
            let parts: Vec<&str> = inner.split_whitespace().collect();
            section = Some(match parts.as_slice() {
                ["triggers"] => Section::Triggers,
                ["exceptional"] => {
                    exceptional_present = true;
                    Section::Exceptional
                }
                ["superlatives"] => Section::Superlatives,
                ["before", t] => Section::Before((*t).to_string()),
                ["after", t] => Section::After((*t).to_string()),
                ["preprocess"] => Section::Preprocess,
                ["resources"] => Section::Resources,
                _ => {
                    return Err(Error::parse(
                        origin,
                        line_no,
                        format!("unknown section {inner:?}"),
                    ))
                }
            });
            continue;
        }

        if let Some((key, value)) = split_key_value(line) {
            match section {
                None => {
                    if key == "window_length" {
                        window_length = parse_positive_int(value, origin, line_no)?;
                    } else {
                        return Err(Error::parse(
                            origin,
                            line_no,
                            format!("unknown top-level setting {key:?}"),
                        ));
                    }
                }
                Some(Section::Preprocess) => match key {
                    "collapse_repeats_to" => {
                        options.collapse_repeats_to = parse_positive_int(value, origin, line_no)?;
                    }
                    "strip_diacritics" => {
                        options.strip_diacritics = match value {
                            "true" => true,
                            "false" => false,
                            other => {
                                return Err(Error::parse(
                                    origin,
                                    line_no,
                                    format!("expected true or false, found {other:?}"),
                                ))
                            }
                        };
                    }
                    _ => {
                        // single char = single char: a normalization override
                        let mut from = key.chars();
                        let mut to = value.chars();
                        match (from.next(), from.next(), to.next(), to.next()) {
                            (Some(f), None, Some(t), None) => {
                                options.normalization_table.insert(f, t);
                            }
                            _ => {
                                return Err(Error::parse(
                                    origin,
                                    line_no,
                                    "normalization overrides map one character to one character",
                                ))
                            }
                        }
                    }
                },
                Some(Section::Resources) => match key {
                    "lexicon" | "stopwords" => {
                        resource_paths.insert(key.to_string(), value.to_string());
                    }
                    _ => {
                        return Err(Error::parse(
                            origin,
                            line_no,
                            format!("unknown resource key {key:?}"),
                        ))
                    }
                },
                Some(_) => {
                    return Err(Error::parse(
                        origin,
                        line_no,
                        "key = value lines are not allowed in token sections",
                    ))
                }
            }
            continue;
        }

        // plain token line
        match &section {
            None => {
                return Err(Error::parse(origin, line_no, "token outside any section"));
            }
            Some(Section::Triggers) => triggers.push(line.to_string()),
            Some(Section::Exceptional) => exceptional.push(line.to_string()),
            Some(Section::Superlatives) => superlatives.push(line.to_string()),
            Some(Section::Before(t)) => {
                if line.split_whitespace().count() != 1 {
                    return Err(Error::parse(
                        origin,
                        line_no,
                        "before-entries are single tokens",
                    ));
                }
                before.push((t.clone(), line.to_string(), line_no));
            }
            Some(Section::After(t)) => {
                let seq: Vec<String> = line.split_whitespace().map(|s| s.to_string()).collect();
                after.push((t.clone(), seq));
            }
            Some(Section::Preprocess) | Some(Section::Resources) => {
                return Err(Error::parse(
                    origin,
                    line_no,
                    "expected a key = value line in this section",
                ));
            }
        }
    }

    let norm = |s: &str| normalize_token(s, &options);

    let mut config = NegationConfig {
        triggers: triggers.iter().map(|t| norm(t)).collect(),
        exceptional_words: if exceptional_present {
            exceptional.iter().map(|t| norm(t)).collect()
        } else {
            [norm("إلا")].into_iter().collect()
        },
        superlatives: superlatives.iter().map(|t| norm(t)).collect(),
        context_exceptions: BTreeMap::new(),
        window_length,
    };
    for (trigger, word, _line) in &before {
        config
            .context_exceptions
            .entry(norm(trigger))
            .or_default()
            .before
            .insert(norm(word));
    }
    for (trigger, seq) in &after {
        config
            .context_exceptions
            .entry(norm(trigger))
            .or_default()
            .after
            .insert(seq.iter().map(|t| norm(t)).collect());
    }

    config.validate()?;
    if options.collapse_repeats_to < 1 {
        return Err(Error::Resource("collapse_repeats_to must be at least 1".into()));
    }

    Ok(RunConfig {
        negation: config,
        preprocess: options,
        resource_paths,
    })
}

fn split_key_value(line: &str) -> Option<(&str, &str)> {
    let (key, value) = line.split_once('=')?;
    Some((key.trim(), value.trim()))
}

fn parse_positive_int(value: &str, origin: &Path, line_no: usize) -> Result<usize> {
    let n: usize = value
        .parse()
        .map_err(|_| Error::parse(origin, line_no, format!("expected an integer, found {value:?}")))?;
    if n < 1 {
        return Err(Error::parse(origin, line_no, "value must be at least 1"));
    }
    Ok(n)
}

const DEFAULT_STOPWORDS_TEXT: &str = include_str!("../../../resources/stopwords.txt");

/// Raw text of the built-in stop-word list, for provenance digests.
pub fn default_stopwords_text() -> &'static str {
    DEFAULT_STOPWORDS_TEXT
}

/// The built-in stop-word list shipped at `resources/stopwords.txt`. It
/// excludes every default negation trigger so that tagging always sees them.
pub fn default_stopwords(options: &PreprocessOptions) -> HashSet<String> {
    parse_stopwords(DEFAULT_STOPWORDS_TEXT, options)
}

/// Load a stop-word list, one token per line, normalized.
pub fn load_stopwords(path: &Path, options: &PreprocessOptions) -> Result<HashSet<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_stopwords(&text, options))
}

fn parse_stopwords(text: &str, options: &PreprocessOptions) -> HashSet<String> {
    text.lines()
        .map(|l| l.trim_end_matches('\r').trim())
        .filter(|l| !l.is_empty())
        .map(|l| normalize_token(l, options))
        .collect()
}

/// Corpus-level negation prevalence, computed with raw trigger matching over
/// preprocessed tokens (no context filtering).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegationStats {
    pub total_reviews: usize,
    pub reviews_with_trigger: usize,
    pub prevalence: f64,
    /// Share of trigger-containing reviews labeled negative; absent when no
    /// review contains a trigger.
    pub negative_share: Option<f64>,
    pub positive_share: Option<f64>,
}

/// Count reviews containing at least one trigger token and split them by
/// label. Every review must be labeled.
pub fn corpus_stats(
    corpus: &LabeledCorpus,
    config: &NegationConfig,
    options: &PreprocessOptions,
) -> Result<NegationStats> {
    let total = corpus.len();
    let mut with_trigger = 0usize;
    let mut negative = 0usize;
    let mut positive = 0usize;

    for review in &corpus.reviews {
        let label = review.label.ok_or_else(|| {
            Error::Data(format!("review {:?} is unlabeled; stats require labels", review.id))
        })?;
        let tokenized = preprocess_review(review, options);
        if tokenized
            .tokens
            .iter()
            .any(|t| config.is_trigger(&t.surface))
        {
            with_trigger += 1;
            match label {
                PolarityLabel::Negative => negative += 1,
                PolarityLabel::Positive => positive += 1,
            }
        }
    }

    let prevalence = if total == 0 {
        0.0
    } else {
        with_trigger as f64 / total as f64
    };
    let (negative_share, positive_share) = if with_trigger == 0 {
        (None, None)
    } else {
        (
            Some(negative as f64 / with_trigger as f64),
            Some(positive as f64 / with_trigger as f64),
        )
    };

    Ok(NegationStats {
        total_reviews: total,
        reviews_with_trigger: with_trigger,
        prevalence,
        negative_share,
        positive_share,
    })
}
