//! Uni-gram TF-IDF features over tagged token sequences.
//!
//! A tagged occurrence of a word becomes its own term (`w` vs `w_!`), so the
//! vocabulary under any tagging policy is a superset of the untagged one.
//! Stop words are removed after tagging, and a tagged token always survives
//! removal. Weights are raw term count × ln(N/df), L2-normalized per document.

use std::collections::HashMap;
use std::collections::HashSet;
use std::io::Write;

use crate::corpus::PolarityLabel;
use crate::error::{Error, Result};
use crate::preprocess::{Token, TokenizedReview};

/// Suffix appended to a negated token's surface at featurization time.
pub const NEGATION_SUFFIX: &str = "_!";

/// Drop stop-word tokens that are not negated; negated tokens are always
/// retained. Positions are re-indexed densely and sentence breaks remapped.
pub fn remove_stopwords(review: &TokenizedReview, stopwords: &HashSet<String>) -> TokenizedReview {
    let mut tokens: Vec<Token> = Vec::with_capacity(review.tokens.len());
    // kept[i] = number of retained tokens strictly before old index i
    let mut kept_before = vec![0usize; review.tokens.len() + 1];
    let mut kept = 0usize;
    for (i, tok) in review.tokens.iter().enumerate() {
        kept_before[i] = kept;
        if tok.negated || !stopwords.contains(&tok.surface) {
            let mut t = tok.clone();
            t.position = kept;
            tokens.push(t);
            kept += 1;
        }
    }
    kept_before[review.tokens.len()] = kept;

    let sentence_breaks = review
        .sentence_breaks
        .iter()
        .map(|&b| kept_before[b])
        .filter(|&b| b >= 1 && b < tokens.len())
        .collect();

    TokenizedReview {
        id: review.id.clone(),
        tokens,
        sentence_breaks,
        label: review.label,
    }
}

/// The feature string of a token: its surface, with `_!` appended when the
/// token carries the negation flag.
pub fn term_of(token: &Token) -> String {
    if token.negated {
        format!("{}{}", token.surface, NEGATION_SUFFIX)
    } else {
        token.surface.clone()
    }
}

/// Term-to-index map with document frequencies. Indices follow first
/// appearance over the review sequence, so construction is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    index: HashMap<String, usize>,
    terms: Vec<String>,
    df: Vec<usize>,
    n_documents: usize,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_documents(&self) -> usize {
        self.n_documents
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, index: usize) -> &str {
        &self.terms[index]
    }

    pub fn df(&self, index: usize) -> usize {
        self.df[index]
    }
}

/// Build the vocabulary of a (tagged, stop-filtered) review sequence.
/// Document frequency counts reviews containing a term at least once.
pub fn build_vocabulary(reviews: &[TokenizedReview]) -> Result<Vocabulary> {
    if reviews.is_empty() {
        return Err(Error::Data("cannot build a vocabulary from an empty corpus".into()));
    }
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut terms: Vec<String> = Vec::new();
    let mut df: Vec<usize> = Vec::new();
    let mut seen_in_doc: HashSet<usize> = HashSet::new();

    for review in reviews {
        seen_in_doc.clear();
        for token in &review.tokens {
            let term = term_of(token);
            let idx = match index.get(&term) {
                Some(&i) => i,
                None => {
                    let i = terms.len();
                    index.insert(term.clone(), i);
                    terms.push(term);
                    df.push(0);
                    i
                }
            };
            if seen_in_doc.insert(idx) {
                df[idx] += 1;
            }
        }
    }

    Ok(Vocabulary {
        index,
        terms,
        df,
        n_documents: reviews.len(),
    })
}

/// idf(t) = ln(N / df(t)), indexed by feature index. A term present in every
/// document gets exactly zero.
pub fn compute_idf(vocab: &Vocabulary) -> Vec<f64> {
    vocab
        .df
        .iter()
        .map(|&df| (vocab.n_documents as f64 / df as f64).ln())
        .collect()
}

/// Sparse vector with strictly increasing indices and nonzero finite weights.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseVector {
    entries: Vec<(usize, f64)>,
}

impl SparseVector {
    /// Build from pairs that are already sorted by index; zero weights are
    /// dropped.
    pub fn from_sorted(entries: Vec<(usize, f64)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        SparseVector {
            entries: entries.into_iter().filter(|&(_, w)| w != 0.0).collect(),
        }
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dot(&self, other: &SparseVector) -> f64 {
        let mut sum = 0.0;
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            let (ia, wa) = self.entries[i];
            let (ib, wb) = other.entries[j];
            match ia.cmp(&ib) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    sum += wa * wb;
                    i += 1;
                    j += 1;
                }
            }
        }
        sum
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|(_, w)| w * w).sum::<f64>().sqrt()
    }
}

/// TF-IDF vector of one review against a frozen vocabulary. Out-of-vocabulary
/// terms contribute nothing; the result is L2-normalized unless all weights
/// vanish.
pub fn vectorize(review: &TokenizedReview, vocab: &Vocabulary, idf: &[f64]) -> SparseVector {
    let mut counts: HashMap<usize, f64> = HashMap::new();
    for token in &review.tokens {
        if let Some(idx) = vocab.index_of(&term_of(token)) {
            *counts.entry(idx).or_insert(0.0) += 1.0;
        }
    }
    let mut entries: Vec<(usize, f64)> = counts
        .into_iter()
        .map(|(idx, count)| (idx, count * idf[idx]))
        .filter(|&(_, w)| w != 0.0)
        .collect();
    entries.sort_unstable_by_key(|&(idx, _)| idx);

    let norm = entries.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
    if norm > 0.0 {
        for (_, w) in entries.iter_mut() {
            *w /= norm;
        }
    }
    SparseVector::from_sorted(entries)
}

/// Vectorized corpus with aligned labels.
#[derive(Debug, Clone, PartialEq)]
pub struct DocumentTermMatrix {
    pub rows: Vec<SparseVector>,
    pub labels: Vec<PolarityLabel>,
    pub n_features: usize,
}

impl DocumentTermMatrix {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Vectorize every review; all reviews must carry a label.
pub fn build_matrix(
    reviews: &[TokenizedReview],
    vocab: &Vocabulary,
    idf: &[f64],
) -> Result<DocumentTermMatrix> {
    let mut rows = Vec::with_capacity(reviews.len());
    let mut labels = Vec::with_capacity(reviews.len());
    for review in reviews {
        let label = review.label.ok_or_else(|| {
            Error::Data(format!("review {:?} is unlabeled; cannot build a training matrix", review.id))
        })?;
        rows.push(vectorize(review, vocab, idf));
        labels.push(label);
    }
    Ok(DocumentTermMatrix {
        rows,
        labels,
        n_features: vocab.len(),
    })
}

/// Write a matrix as `label<TAB>idx:weight idx:weight …`, one row per line.
pub fn write_matrix<W: Write>(out: &mut W, matrix: &DocumentTermMatrix) -> Result<()> {
    for (row, label) in matrix.rows.iter().zip(&matrix.labels) {
        let cells: Vec<String> = row
            .entries()
            .iter()
            .map(|(idx, w)| format!("{idx}:{w}"))
            .collect();
        writeln!(out, "{}\t{}", label, cells.join(" "))?;
    }
    Ok(())
}

/// Write the sidecar vocabulary file: `term<TAB>index<TAB>df`.
pub fn write_vocabulary<W: Write>(out: &mut W, vocab: &Vocabulary) -> Result<()> {
    for idx in 0..vocab.len() {
        writeln!(out, "{}\t{}\t{}", vocab.term(idx), idx, vocab.df(idx))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preprocess::Token;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn review(words: &[&str]) -> TokenizedReview {
        TokenizedReview {
            id: "t".into(),
            tokens: words
                .iter()
                .enumerate()
                .map(|(i, w)| Token::new(*w, i))
                .collect(),
            sentence_breaks: BTreeSet::new(),
            label: Some(PolarityLabel::Positive),
        }
    }

    fn stopset(words: &[&str]) -> HashSet<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn stopword_removal_keeps_negated_tokens() {
        let mut r = review(&["لا", "احب", "هذا"]);
        r.tokens[1].negated = true;
        let out = remove_stopwords(&r, &stopset(&["لا", "هذا"]));
        assert_eq!(out.tokens.len(), 1);
        assert_eq!(out.tokens[0].surface, "احب");
        assert!(out.tokens[0].negated);
        assert_eq!(out.tokens[0].position, 0);
    }

    #[test]
    fn empty_stoplist_is_identity() {
        let r = review(&["مكان", "جميل"]);
        assert_eq!(remove_stopwords(&r, &HashSet::new()), r);
    }

    #[test]
    fn all_stopped_yields_empty_review() {
        let r = review(&["هذا", "من"]);
        let out = remove_stopwords(&r, &stopset(&["هذا", "من"]));
        assert!(out.tokens.is_empty());
        assert!(out.sentence_breaks.is_empty());
    }

    #[test]
    fn breaks_are_remapped() {
        let mut r = review(&["حلو", "هذا", "المكان", "وسخ"]);
        r.sentence_breaks.insert(2);
        let out = remove_stopwords(&r, &stopset(&["هذا"]));
        assert_eq!(out.tokens.len(), 3);
        assert_eq!(out.sentence_breaks.iter().copied().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn term_of_appends_suffix() {
        let mut token = Token::new("احب", 0);
        assert_eq!(term_of(&token), "احب");
        token.negated = true;
        assert_eq!(term_of(&token), "احب_!");
    }

    #[test]
    fn vocabulary_distinguishes_tagged_terms() {
        let a = review(&["احب"]);
        let mut b = review(&["احب"]);
        b.tokens[0].negated = true;
        let vocab = build_vocabulary(&[a, b]).unwrap();
        assert_eq!(vocab.len(), 2);
    }

    #[test]
    fn df_counts_documents_not_tokens() {
        let r = review(&["حلو", "حلو"]);
        let vocab = build_vocabulary(&[r]).unwrap();
        assert_eq!(vocab.len(), 1);
        assert_eq!(vocab.df(0), 1);
    }

    #[test]
    fn empty_corpus_is_an_error() {
        assert!(build_vocabulary(&[]).is_err());
    }

    #[test]
    fn index_order_is_first_appearance() {
        let a = review(&["حلو", "وسخ"]);
        let b = review(&["جميل", "حلو"]);
        let vocab = build_vocabulary(&[a, b]).unwrap();
        assert_eq!(vocab.index_of("حلو"), Some(0));
        assert_eq!(vocab.index_of("وسخ"), Some(1));
        assert_eq!(vocab.index_of("جميل"), Some(2));
    }

    #[test]
    fn idf_of_rare_term() {
        let reviews = vec![
            review(&["نادر"]),
            review(&["شايع"]),
            review(&["شايع"]),
            review(&["شايع"]),
        ];
        let vocab = build_vocabulary(&reviews).unwrap();
        let idf = compute_idf(&vocab);
        let rare = vocab.index_of("نادر").unwrap();
        // arithmetic oracle: ln(4/1)
        assert!((idf[rare] - 4.0_f64.ln()).abs() < 1e-12);
        assert!((idf[rare] - 1.386294).abs() < 1e-6);
    }

    #[test]
    fn idf_of_ubiquitous_term_is_zero() {
        let reviews = vec![review(&["شايع"]), review(&["شايع"])];
        let vocab = build_vocabulary(&reviews).unwrap();
        let idf = compute_idf(&vocab);
        assert_eq!(idf[0], 0.0);
    }

    #[test]
    fn idf_decreases_with_df() {
        let n = 10usize;
        let idf = |df: usize| (n as f64 / df as f64).ln();
        for df in 1..n {
            assert!(idf(df) > idf(df + 1));
        }
    }

    #[test]
    fn vectorize_single_term_review() {
        let r = review(&["حلو", "حلو"]);
        let vocab = build_vocabulary(std::slice::from_ref(&r)).unwrap();
        // identity idf keeps the arithmetic visible: weight 2.0 pre-norm
        let idf = vec![1.0];
        let v = vectorize(&r, &vocab, &idf);
        assert_eq!(v.entries().len(), 1);
        assert!((v.entries()[0].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oov_review_is_zero_vector() {
        let train = review(&["حلو"]);
        let vocab = build_vocabulary(&[train]).unwrap();
        let idf = compute_idf(&vocab);
        let test = review(&["غريب", "جديد"]);
        assert!(vectorize(&test, &vocab, &idf).is_zero());
    }

    #[test]
    fn matrix_has_one_row_per_review() {
        let reviews: Vec<_> = (0..12)
            .map(|i| {
                let mut r = review(&["حلو", "مكان"]);
                r.id = format!("r{i}");
                r
            })
            .collect();
        let vocab = build_vocabulary(&reviews).unwrap();
        let idf = compute_idf(&vocab);
        let matrix = build_matrix(&reviews, &vocab, &idf).unwrap();
        assert_eq!(matrix.len(), 12);
        assert_eq!(matrix.labels.len(), 12);
    }

    #[test]
    fn matrix_requires_labels() {
        let mut r = review(&["حلو"]);
        r.label = None;
        let vocab = build_vocabulary(std::slice::from_ref(&r)).unwrap();
        let idf = compute_idf(&vocab);
        assert!(build_matrix(&[r], &vocab, &idf).is_err());
    }

    #[test]
    fn matrix_is_deterministic() {
        let reviews = vec![review(&["حلو", "مكان"]), review(&["وسخ", "مكان"])];
        let vocab = build_vocabulary(&reviews).unwrap();
        let idf = compute_idf(&vocab);
        let a = build_matrix(&reviews, &vocab, &idf).unwrap();
        let b = build_matrix(&reviews, &vocab, &idf).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn matrix_export_shape() {
        let reviews = vec![review(&["حلو", "مكان"]), review(&["وسخ"])];
        let vocab = build_vocabulary(&reviews).unwrap();
        let idf = compute_idf(&vocab);
        let matrix = build_matrix(&reviews, &vocab, &idf).unwrap();
        let mut buf = Vec::new();
        write_matrix(&mut buf, &matrix).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.lines().next().unwrap().starts_with("positive\t"));
        let mut vbuf = Vec::new();
        write_vocabulary(&mut vbuf, &vocab).unwrap();
        assert_eq!(String::from_utf8(vbuf).unwrap().lines().count(), vocab.len());
    }

    fn arb_review() -> impl Strategy<Value = TokenizedReview> {
        let pool = ["حلو", "وسخ", "مكان", "يوم", "ناس", "جميل", "شي"];
        (
            proptest::collection::vec((0usize..7, proptest::bool::ANY), 0..10),
        )
            .prop_map(move |(words,)| {
                let mut r = review(&words.iter().map(|(i, _)| pool[*i]).collect::<Vec<_>>());
                for (tok, (_, negated)) in r.tokens.iter_mut().zip(&words) {
                    tok.negated = *negated;
                }
                r
            })
    }

    proptest! {
        #[test]
        fn nonzero_vectors_have_unit_norm(reviews in proptest::collection::vec(arb_review(), 1..8)) {
            let vocab = build_vocabulary(&reviews).unwrap();
            let idf = compute_idf(&vocab);
            for r in &reviews {
                let v = vectorize(r, &vocab, &idf);
                for w in v.entries().windows(2) {
                    prop_assert!(w[0].0 < w[1].0);
                }
                for &(_, weight) in v.entries() {
                    prop_assert!(weight.is_finite() && weight > 0.0);
                }
                if !v.is_zero() {
                    prop_assert!((v.norm() - 1.0).abs() < 1e-9);
                }
            }
        }

        #[test]
        fn negated_tokens_always_survive_stop_removal(reviews in proptest::collection::vec(arb_review(), 1..6)) {
            let stopwords = stopset(&["حلو", "مكان", "شي"]);
            for r in &reviews {
                let out = remove_stopwords(r, &stopwords);
                let negated_in: Vec<_> = r.tokens.iter().filter(|t| t.negated).map(|t| t.surface.clone()).collect();
                let negated_out: Vec<_> = out.tokens.iter().filter(|t| t.negated).map(|t| t.surface.clone()).collect();
                prop_assert_eq!(negated_in, negated_out);
                for (i, t) in out.tokens.iter().enumerate() {
                    prop_assert_eq!(t.position, i);
                }
            }
        }
    }
}
