//! Negation scope tagging: the rule engine plus the window and
//! sentence-extent baseline taggers.
//!
//! The rule engine walks a review's raw trigger occurrences left to right.
//! An occurrence is first checked against the per-trigger context tables
//! (cases 4–6: the apparent trigger is a relative pronoun, a preposition, or
//! another non-negating sense). A surviving occurrence gets a fixed window
//! scope; the scope is checked for an emphasis-redirecting word such as الا
//! (case 1) or a comparative/superlative form (case 2), either of which
//! suppresses the whole scope. Otherwise the first lexicon word in the scope
//! fixes the polarity being negated, and only same-polarity lexicon words are
//! tagged (case 3). The baselines skip every one of these checks: the window
//! tagger marks everything inside the window of every raw trigger, and the
//! sentence tagger marks everything up to the next sentence break.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::corpus::{NegationConfig, SentimentLexicon};
use crate::preprocess::TokenizedReview;

/// Which tagger runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PolicyKind {
    /// Leave every token untouched.
    None,
    /// Tag every token in the fixed window after every raw trigger.
    FixedWindow,
    /// Tag every token from a raw trigger to the end of its sentence.
    ToSentenceEnd,
    /// The rule engine.
    RuleBased,
}

impl PolicyKind {
    /// Short name used in reports and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::None => "none",
            PolicyKind::FixedWindow => "window",
            PolicyKind::ToSentenceEnd => "sentence",
            PolicyKind::RuleBased => "rules",
        }
    }

    pub fn all() -> [PolicyKind; 4] {
        [
            PolicyKind::None,
            PolicyKind::FixedWindow,
            PolicyKind::ToSentenceEnd,
            PolicyKind::RuleBased,
        ]
    }
}

impl std::str::FromStr for PolicyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(PolicyKind::None),
            "window" => Ok(PolicyKind::FixedWindow),
            "sentence" => Ok(PolicyKind::ToSentenceEnd),
            "rules" => Ok(PolicyKind::RuleBased),
            other => Err(format!(
                "unknown policy {other:?} (expected none, window, sentence, or rules)"
            )),
        }
    }
}

/// A scope policy: the tagger kind plus the window length used by the
/// window-bounded kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScopePolicy {
    pub kind: PolicyKind,
    pub window_length: usize,
}

impl ScopePolicy {
    pub fn new(kind: PolicyKind) -> Self {
        ScopePolicy {
            kind,
            window_length: 5,
        }
    }

    pub fn with_window(kind: PolicyKind, window_length: usize) -> Self {
        ScopePolicy {
            kind,
            window_length,
        }
    }
}

/// Whether an occurrence has only been surface-matched or has survived the
/// context tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OccurrenceKind {
    Raw,
    Validated,
}

/// One position where a trigger term occurs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriggerOccurrence {
    pub token_index: usize,
    pub trigger: String,
    pub kind: OccurrenceKind,
}

/// The exception cases of the rule engine; stored in traces and rendered as
/// `case=1` … `case=6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    Case1,
    Case2,
    Case3,
    Case4,
    Case5,
    Case6,
}

impl Case {
    pub fn number(self) -> u8 {
        match self {
            Case::Case1 => 1,
            Case::Case2 => 2,
            Case::Case3 => 3,
            Case::Case4 => 4,
            Case::Case5 => 5,
            Case::Case6 => 6,
        }
    }

    pub fn from_number(n: u8) -> Option<Case> {
        match n {
            1 => Some(Case::Case1),
            2 => Some(Case::Case2),
            3 => Some(Case::Case3),
            4 => Some(Case::Case4),
            5 => Some(Case::Case5),
            6 => Some(Case::Case6),
            _ => None,
        }
    }
}

impl Serialize for Case {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.number())
    }
}

impl<'de> Deserialize<'de> for Case {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let n = u8::deserialize(deserializer)?;
        Case::from_number(n).ok_or_else(|| serde::de::Error::custom(format!("invalid case {n}")))
    }
}

/// Why a scope token was left untagged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    NotInLexicon,
    OppositePolarity,
    AlreadyTagged,
    TriggerToken,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedToken {
    pub index: usize,
    pub reason: SkipReason,
}

/// What the rule engine did for one trigger occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriggerTrace {
    pub trigger: String,
    pub trigger_index: usize,
    /// The exception case that fired, if any. Cases 1/2/4/5/6 mean the scope
    /// was left untagged; case 3 means opposite-polarity words were
    /// discarded while tagging.
    pub fired_case: Option<Case>,
    pub tagged_indices: Vec<usize>,
    pub skipped: Vec<SkippedToken>,
}

/// Per-trigger explanation of a rule-based tagging run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleTrace {
    pub triggers: Vec<TriggerTrace>,
}

/// Every token whose surface is a trigger term, in position order.
pub fn match_raw_triggers(
    review: &TokenizedReview,
    config: &NegationConfig,
) -> Vec<TriggerOccurrence> {
    review
        .tokens
        .iter()
        .filter(|t| config.is_trigger(&t.surface))
        .map(|t| TriggerOccurrence {
            token_index: t.position,
            trigger: t.surface.clone(),
            kind: OccurrenceKind::Raw,
        })
        .collect()
}

/// Verdict of the context tables for one occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContextVerdict {
    pub is_negation: bool,
    pub fired_case: Option<Case>,
}

/// Check the trigger's context tables: a listed word immediately before the
/// occurrence, or a listed token sequence immediately after it, means the
/// term is not being used as a negation. The case number reflects which
/// trigger's table matched: ما → case 4, غير → case 5, anything else → case 6.
pub fn filter_trigger_context(
    review: &TokenizedReview,
    occ: &TriggerOccurrence,
    config: &NegationConfig,
) -> ContextVerdict {
    let negation = ContextVerdict {
        is_negation: true,
        fired_case: None,
    };
    let Some(ctx) = config.context_exceptions.get(&occ.trigger) else {
        return negation;
    };

    let mut matched = false;
    if occ.token_index > 0 {
        let before = &review.tokens[occ.token_index - 1].surface;
        if ctx.before.contains(before) {
            matched = true;
        }
    }
    if !matched {
        for seq in &ctx.after {
            let start = occ.token_index + 1;
            let end = start + seq.len();
            if end <= review.tokens.len()
                && seq
                    .iter()
                    .zip(&review.tokens[start..end])
                    .all(|(want, tok)| *want == tok.surface)
            {
                matched = true;
                break;
            }
        }
    }

    if matched {
        let case = match occ.trigger.as_str() {
            "ما" => Case::Case4,
            "غير" => Case::Case5,
            _ => Case::Case6,
        };
        ContextVerdict {
            is_negation: false,
            fired_case: Some(case),
        }
    } else {
        negation
    }
}

/// Token index range a trigger may affect under the given policy. The range
/// never includes the trigger itself and is empty for a trigger at the last
/// token (and always empty under the identity policy).
pub fn scope_of(review: &TokenizedReview, trigger_index: usize, policy: &ScopePolicy) -> Range<usize> {
    let len = review.tokens.len();
    let start = (trigger_index + 1).min(len);
    match policy.kind {
        PolicyKind::None => start..start,
        PolicyKind::FixedWindow | PolicyKind::RuleBased => {
            let end = trigger_index.saturating_add(policy.window_length + 1).min(len);
            start..end.max(start)
        }
        PolicyKind::ToSentenceEnd => {
            let end = review
                .sentence_breaks
                .range(trigger_index + 1..)
                .next()
                .copied()
                .unwrap_or(len);
            start..end.max(start)
        }
    }
}

/// Verdict of the in-scope exception check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScopeVerdict {
    pub suppress: bool,
    pub fired_case: Option<Case>,
}

/// Look for an exceptional word (case 1) or a superlative/comparative form
/// (case 2) standing before the first lexicon word of the scope; either one
/// suppresses the trigger entirely. Superlative-list tokens do not count as
/// lexicon words when locating that first polarity word.
pub fn check_scope_exceptions(
    review: &TokenizedReview,
    _trigger_index: usize,
    scope: Range<usize>,
    config: &NegationConfig,
    lexicon: &SentimentLexicon,
) -> ScopeVerdict {
    let first_polarity = first_lexicon_index(review, scope.clone(), config, lexicon);
    let limit = first_polarity.unwrap_or(usize::MAX);

    for idx in scope {
        if idx >= limit {
            break;
        }
        let surface = &review.tokens[idx].surface;
        if config.exceptional_words.contains(surface) {
            return ScopeVerdict {
                suppress: true,
                fired_case: Some(Case::Case1),
            };
        }
        if config.superlatives.contains(surface) {
            return ScopeVerdict {
                suppress: true,
                fired_case: Some(Case::Case2),
            };
        }
    }
    ScopeVerdict {
        suppress: false,
        fired_case: None,
    }
}

/// First in-scope token that counts as a polarity anchor: in the lexicon,
/// not a superlative-list form, not itself a trigger term.
fn first_lexicon_index(
    review: &TokenizedReview,
    scope: Range<usize>,
    config: &NegationConfig,
    lexicon: &SentimentLexicon,
) -> Option<usize> {
    scope.into_iter().find(|&idx| {
        let surface = &review.tokens[idx].surface;
        lexicon.contains(surface)
            && !config.superlatives.contains(surface)
            && !config.is_trigger(surface)
    })
}

/// The rule engine. Triggers are processed left to right; each one is run
/// through the context tables (cases 4–6), scoped to the configured window,
/// checked for scope exceptions (cases 1–2), and finally tags the lexicon
/// words sharing the polarity of the first lexicon word in scope (case 3
/// discards the rest). Already-tagged tokens and trigger tokens are never
/// tagged again.
pub fn tag_rule_based(
    review: &TokenizedReview,
    config: &NegationConfig,
    lexicon: &SentimentLexicon,
) -> (TokenizedReview, RuleTrace) {
    let mut tagged = review.clone();
    let mut trace = RuleTrace::default();

    for occ in match_raw_triggers(review, config) {
        let mut record = TriggerTrace {
            trigger: occ.trigger.clone(),
            trigger_index: occ.token_index,
            fired_case: None,
            tagged_indices: Vec::new(),
            skipped: Vec::new(),
        };

        let verdict = filter_trigger_context(&tagged, &occ, config);
        if !verdict.is_negation {
            record.fired_case = verdict.fired_case;
            trace.triggers.push(record);
            continue;
        }

        let scope = scope_of(
            &tagged,
            occ.token_index,
            &ScopePolicy::with_window(PolicyKind::RuleBased, config.window_length),
        );

        let exceptions =
            check_scope_exceptions(&tagged, occ.token_index, scope.clone(), config, lexicon);
        if exceptions.suppress {
            record.fired_case = exceptions.fired_case;
            trace.triggers.push(record);
            continue;
        }

        let Some(anchor) = first_lexicon_index(&tagged, scope.clone(), config, lexicon) else {
            // a trigger with no polarity word in reach tags nothing
            trace.triggers.push(record);
            continue;
        };
        let polarity = lexicon
            .polarity_of(&tagged.tokens[anchor].surface)
            .expect("anchor is a lexicon word");

        let mut discarded_opposite = false;
        for idx in scope {
            let surface = tagged.tokens[idx].surface.clone();
            if config.is_trigger(&surface) {
                record.skipped.push(SkippedToken {
                    index: idx,
                    reason: SkipReason::TriggerToken,
                });
                continue;
            }
            match lexicon.polarity_of(&surface) {
                None => record.skipped.push(SkippedToken {
                    index: idx,
                    reason: SkipReason::NotInLexicon,
                }),
                Some(p) if p != polarity => {
                    discarded_opposite = true;
                    record.skipped.push(SkippedToken {
                        index: idx,
                        reason: SkipReason::OppositePolarity,
                    });
                }
                Some(_) => {
                    if tagged.tokens[idx].negated {
                        record.skipped.push(SkippedToken {
                            index: idx,
                            reason: SkipReason::AlreadyTagged,
                        });
                    } else {
                        tagged.tokens[idx].negated = true;
                        record.tagged_indices.push(idx);
                    }
                }
            }
        }
        if discarded_opposite {
            record.fired_case = Some(Case::Case3);
        }
        trace.triggers.push(record);
    }

    (tagged, trace)
}

/// Baseline window tagger: every token inside the fixed window of every raw
/// trigger is tagged, with no context filtering and no lexicon.
pub fn tag_window(review: &TokenizedReview, config: &NegationConfig) -> TokenizedReview {
    let mut tagged = review.clone();
    let policy = ScopePolicy::with_window(PolicyKind::FixedWindow, config.window_length);
    for occ in match_raw_triggers(review, config) {
        for idx in scope_of(review, occ.token_index, &policy) {
            tagged.tokens[idx].negated = true;
        }
    }
    tagged
}

/// Baseline sentence tagger: every token from a raw trigger to the end of
/// its sentence is tagged.
pub fn tag_to_sentence_end(review: &TokenizedReview, config: &NegationConfig) -> TokenizedReview {
    let mut tagged = review.clone();
    let policy = ScopePolicy::new(PolicyKind::ToSentenceEnd);
    for occ in match_raw_triggers(review, config) {
        for idx in scope_of(review, occ.token_index, &policy) {
            tagged.tokens[idx].negated = true;
        }
    }
    tagged
}

/// Dispatch on the policy kind. Only the rule engine produces a trace.
pub fn apply_policy(
    review: &TokenizedReview,
    policy: &ScopePolicy,
    config: &NegationConfig,
    lexicon: &SentimentLexicon,
) -> (TokenizedReview, Option<RuleTrace>) {
    match policy.kind {
        PolicyKind::None => (review.clone(), None),
        PolicyKind::FixedWindow => (tag_window(review, config), None),
        PolicyKind::ToSentenceEnd => (tag_to_sentence_end(review, config), None),
        PolicyKind::RuleBased => {
            let (tagged, trace) = tag_rule_based(review, config, lexicon);
            (tagged, Some(trace))
        }
    }
}
