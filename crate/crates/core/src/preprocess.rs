//! Raw review text to normalized token sequences.
//!
//! The pipeline is `strip_noise` → `normalize_letters` → `tokenize`. Noise
//! stripping removes diacritics, tatweel, digits, Latin letters, and
//! punctuation, collapsing elongated letter runs; sentence-final punctuation
//! is recorded as a boundary mark before removal so that sentence extents
//! survive into the token stream.

use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::{PolarityLabel, Review};

/// Tatweel / kashida, the Arabic elongation character.
const TATWEEL: char = '\u{0640}';

/// Punctuation recorded as a sentence boundary before removal.
const SENTENCE_FINAL: [char; 6] = ['.', '!', '?', '؟', '،', '؛'];

/// One normalized token of a review.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub position: usize,
    /// Set by the negation module; always false at construction.
    pub negated: bool,
}

impl Token {
    pub fn new(surface: impl Into<String>, position: usize) -> Self {
        Token {
            surface: surface.into(),
            position,
            negated: false,
        }
    }
}

/// A review after preprocessing: tokens plus sentence-boundary metadata.
///
/// An entry `i` in `sentence_breaks` means a sentence boundary occurs
/// immediately before token `i`; all entries lie in `1..tokens.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedReview {
    pub id: String,
    pub tokens: Vec<Token>,
    pub sentence_breaks: BTreeSet<usize>,
    pub label: Option<PolarityLabel>,
}

impl TokenizedReview {
    /// Token surfaces in order, mostly for tests and display.
    pub fn surfaces(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.surface.as_str()).collect()
    }

    /// Positions of tokens carrying the negation flag.
    pub fn negated_positions(&self) -> BTreeSet<usize> {
        self.tokens
            .iter()
            .filter(|t| t.negated)
            .map(|t| t.position)
            .collect()
    }
}

/// Knobs for noise stripping and letter normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreprocessOptions {
    /// Letter runs longer than this are truncated to this length; must be ≥ 1.
    pub collapse_repeats_to: usize,
    /// Character-for-character orthographic normalization map.
    pub normalization_table: BTreeMap<char, char>,
    pub strip_diacritics: bool,
}

impl Default for PreprocessOptions {
    fn default() -> Self {
        PreprocessOptions {
            collapse_repeats_to: 2,
            normalization_table: default_normalization_table(),
            strip_diacritics: true,
        }
    }
}

/// The standard orthographic-variant collapse: hamza-carrying alef forms to
/// bare alef, teh marbuta to heh, alef maqsura to yeh, and hamza seats on
/// waw/yeh to the bare letter.
pub fn default_normalization_table() -> BTreeMap<char, char> {
    [
        ('أ', 'ا'),
        ('إ', 'ا'),
        ('آ', 'ا'),
        ('ة', 'ه'),
        ('ى', 'ي'),
        ('ؤ', 'و'),
        ('ئ', 'ي'),
    ]
    .into_iter()
    .collect()
}

fn is_arabic_letter(c: char) -> bool {
    matches!(c,
        '\u{0621}'..='\u{063A}'
        | '\u{0641}'..='\u{064A}'
        | '\u{0671}'..='\u{06D3}'
        | '\u{06D5}'
        | '\u{06EE}'..='\u{06EF}'
        | '\u{06FA}'..='\u{06FF}'
        | '\u{0750}'..='\u{077F}'
        | '\u{08A0}'..='\u{08C9}')
}

fn is_arabic_diacritic(c: char) -> bool {
    matches!(c,
        '\u{064B}'..='\u{065F}'
        | '\u{0670}'
        | '\u{06D6}'..='\u{06DC}'
        | '\u{06DF}'..='\u{06E8}'
        | '\u{06EA}'..='\u{06ED}'
        | '\u{08CA}'..='\u{08FF}')
}

/// Remove noise from raw text. Returns the cleaned string and the char
/// offsets (into the cleaned string) where sentence-final punctuation stood.
///
/// Diacritics and tatweel vanish without trace; everything else that is not
/// an Arabic letter (digits of any flavor, Latin letters, punctuation,
/// symbols) acts as a word separator. Letter runs longer than
/// `collapse_repeats_to` are truncated, whitespace runs collapse to single
/// spaces, and the result carries no leading or trailing space.
pub fn strip_noise(text: &str, options: &PreprocessOptions) -> (String, Vec<usize>) {
    let mut out = String::new();
    let mut out_chars = 0usize;
    let mut boundaries: Vec<usize> = Vec::new();
    let mut pending_space = false;
    let mut last: Option<char> = None;
    let mut run = 0usize;

    for c in text.chars() {
        if c == TATWEEL || (is_arabic_diacritic(c) && options.strip_diacritics) {
            // in-word noise: removed without splitting the surrounding run
            continue;
        }
        if c.is_whitespace() {
            pending_space = true;
            last = None;
            run = 0;
            continue;
        }
        let keep = is_arabic_letter(c) || is_arabic_diacritic(c);
        if !keep {
            if SENTENCE_FINAL.contains(&c) && boundaries.last() != Some(&out_chars) {
                boundaries.push(out_chars);
            }
            pending_space = true;
            last = None;
            run = 0;
            continue;
        }
        if pending_space {
            if out_chars > 0 {
                out.push(' ');
                out_chars += 1;
            }
            pending_space = false;
        }
        if last == Some(c) {
            run += 1;
            if run > options.collapse_repeats_to {
                continue;
            }
        } else {
            last = Some(c);
            run = 1;
        }
        out.push(c);
        out_chars += 1;
    }

    (out, boundaries)
}

/// Apply the normalization table character-wise. Single char maps to single
/// char, so the output has exactly as many chars as the input.
pub fn normalize_letters(text: &str, options: &PreprocessOptions) -> String {
    text.chars()
        .map(|c| *options.normalization_table.get(&c).unwrap_or(&c))
        .collect()
}

/// Split a cleaned string on spaces and map boundary offsets to the index of
/// the first token at or after each mark. Marks that would land before token
/// 0 or past the last token are dropped.
pub fn tokenize(text: &str, boundaries: &[usize]) -> (Vec<Token>, BTreeSet<usize>) {
    let mut tokens: Vec<Token> = Vec::new();
    let mut starts: Vec<usize> = Vec::new();
    let mut current = String::new();
    let mut current_start = 0usize;

    for (idx, c) in text.chars().enumerate() {
        if c == ' ' {
            if !current.is_empty() {
                starts.push(current_start);
                tokens.push(Token::new(std::mem::take(&mut current), tokens.len()));
            }
        } else {
            if current.is_empty() {
                current_start = idx;
            }
            current.push(c);
        }
    }
    if !current.is_empty() {
        starts.push(current_start);
        tokens.push(Token::new(current, tokens.len()));
    }

    let mut breaks = BTreeSet::new();
    for &b in boundaries {
        let idx = starts.partition_point(|&s| s < b);
        if idx >= 1 && idx < tokens.len() {
            breaks.insert(idx);
        }
    }

    (tokens, breaks)
}

/// Full preprocessing of one review: noise stripping, letter normalization,
/// tokenization. Id and label are carried through unchanged. A review that
/// loses all its content yields zero tokens.
pub fn preprocess_review(review: &Review, options: &PreprocessOptions) -> TokenizedReview {
    let (stripped, boundaries) = strip_noise(&review.text, options);
    let normalized = normalize_letters(&stripped, options);
    debug_assert_eq!(stripped.chars().count(), normalized.chars().count());
    let (tokens, sentence_breaks) = tokenize(&normalized, &boundaries);
    TokenizedReview {
        id: review.id.clone(),
        tokens,
        sentence_breaks,
        label: review.label,
    }
}

/// Normalize a single resource token (lexicon entry, trigger, stop word)
/// the same way review tokens are normalized.
pub fn normalize_token(token: &str, options: &PreprocessOptions) -> String {
    normalize_letters(token.trim(), options)
}
