//! Desk-scale latent semantic analysis.
//!
//! Raw term-document counts, a truncated SVD, and cosine similarity between
//! singular-value-scaled word vectors. Also the two sentence representations
//! that separate word order: an order-free bag of words and a sequential tensor
//! product of one-hot word vectors.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest tensor representation `order_representation` will materialize.
pub const DEFAULT_TENSOR_BUDGET: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct TermDocMatrix {
    terms: Vec<String>,
    docs: Vec<String>,
    // terms x docs
    counts: DMatrix<f64>,
}

impl TermDocMatrix {
    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn docs(&self) -> &[String] {
        &self.docs
    }

    pub fn count(&self, term: &str, doc: &str) -> Option<u64> {
        let i = self.terms.iter().position(|t| t == term)?;
        let j = self.docs.iter().position(|d| d == doc)?;
        Some(self.counts[(i, j)] as u64)
    }

    pub fn column(&self, doc: usize) -> Vec<f64> {
        self.counts.column(doc).iter().copied().collect()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.counts
    }

    pub fn rank_bound(&self) -> usize {
        self.terms.len().min(self.docs.len())
    }

    /// Wraps an explicit nonnegative matrix with generated labels `t0..`, `d0..`.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let n_terms = rows.len();
        let n_docs = rows.first().map_or(0, Vec::len);
        if n_terms == 0 || n_docs == 0 {
            return Err(Error::Invalid("matrix is empty".into()));
        }
        if rows.iter().any(|r| r.len() != n_docs) {
            return Err(Error::Invalid("ragged matrix".into()));
        }
        if rows.iter().flatten().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Invalid("counts must be finite and nonnegative".into()));
        }
        if rows.iter().flatten().all(|v| *v == 0.0) {
            return Err(Error::Invalid("matrix has no nonzero count".into()));
        }
        Ok(TermDocMatrix {
            terms: (0..n_terms).map(|i| format!("t{i}")).collect(),
            docs: (0..n_docs).map(|j| format!("d{j}")).collect(),
            counts: DMatrix::from_fn(n_terms, n_docs, |i, j| rows[i][j]),
        })
    }
}

/// Counts tokens per document. Vocabulary is in first-seen order.
pub fn build_matrix<S: AsRef<str>>(corpus: &[(String, Vec<S>)]) -> Result<TermDocMatrix> {
    if corpus.is_empty() {
        return Err(Error::Invalid("empty corpus".into()));
    }
    let mut terms: Vec<String> = Vec::new();
    let mut docs: Vec<String> = Vec::with_capacity(corpus.len());
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for (j, (label, tokens)) in corpus.iter().enumerate() {
        if docs.contains(label) {
            return Err(Error::Invalid(format!("duplicate document label `{label}`")));
        }
        docs.push(label.clone());
        for token in tokens {
            let token = token.as_ref();
            if token.is_empty() {
                return Err(Error::Invalid(format!("empty token in document `{label}`")));
            }
            let i = match terms.iter().position(|t| t == token) {
                Some(i) => i,
                None => {
                    terms.push(token.to_string());
                    terms.len() - 1
                }
            };
            cells.push((i, j));
        }
    }
    if terms.is_empty() {
        return Err(Error::Invalid("corpus has no tokens".into()));
    }
    let mut counts = DMatrix::zeros(terms.len(), docs.len());
    for (i, j) in cells {
        counts[(i, j)] += 1.0;
    }
    Ok(TermDocMatrix { terms, docs, counts })
}

/// One document per non-blank line, whitespace-tokenized. Documents are
/// labeled `doc1`, `doc2`, ... by line order among non-blank lines.
pub fn parse_corpus(source: &str, lowercase: bool) -> Vec<(String, Vec<String>)> {
    source
        .lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(k, line)| {
            let tokens = tokenize(line, lowercase);
            (format!("doc{}", k + 1), tokens)
        })
        .collect()
}

pub fn tokenize(text: &str, lowercase: bool) -> Vec<String> {
    text.split_whitespace()
        .map(|t| if lowercase { t.to_lowercase() } else { t.to_string() })
        .collect()
}

/// Rank-k factors `U_k diag(sigma_k) V_k^T`.
#[derive(Clone, Debug)]
pub struct SemanticSpace {
    terms: Vec<String>,
    docs: Vec<String>,
    rank: usize,
    /// terms x k
    left: DMatrix<f64>,
    singular_values: Vec<f64>,
    /// docs x k
    right: DMatrix<f64>,
}

impl SemanticSpace {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn docs(&self) -> &[String] {
        &self.docs
    }

    pub fn left(&self) -> &DMatrix<f64> {
        &self.left
    }

    pub fn right(&self) -> &DMatrix<f64> {
        &self.right
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        let sigma = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.singular_values));
        &self.left * sigma * self.right.transpose()
    }

    /// Singular-value-scaled row of `U_k`.
    pub fn word_vector(&self, term: &str) -> Result<Vec<f64>> {
        let i = self
            .terms
            .iter()
            .position(|t| t == term)
            .ok_or_else(|| Error::OutOfVocabulary(vec![term.to_string()]))?;
        Ok((0..self.rank)
            .map(|k| self.left[(i, k)] * self.singular_values[k])
            .collect())
    }
}

/// Best rank-`k` approximation in Frobenius norm.
pub fn svd_truncate(m: &TermDocMatrix, k: usize) -> Result<SemanticSpace> {
    let bound = m.rank_bound();
    if k == 0 || k > bound {
        return Err(Error::out_of_range("k", k as f64, 1.0, bound as f64));
    }
    let svd = m.counts.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let order = &order[..k];

    let left = DMatrix::from_fn(m.terms.len(), k, |i, c| u[(i, order[c])]);
    let right = DMatrix::from_fn(m.docs.len(), k, |j, c| v_t[(order[c], j)]);
    let singular_values = order.iter().map(|&c| svd.singular_values[c].max(0.0)).collect();
    Ok(SemanticSpace {
        terms: m.terms.clone(),
        docs: m.docs.clone(),
        rank: k,
        left,
        singular_values,
        right,
    })
}

/// Frobenius norm of `M - U_k S_k V_k^T`.
pub fn reconstruction_error(m: &TermDocMatrix, s: &SemanticSpace) -> f64 {
    (m.matrix() - s.reconstruct()).norm()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Similarity {
    pub value: f64,
    /// Set when either word vector is zero; `value` is then 0.
    pub degenerate: bool,
}

/// Cosine of the two word vectors.
pub fn similarity(s: &SemanticSpace, t1: &str, t2: &str) -> Result<Similarity> {
    let missing: Vec<String> = [t1, t2]
        .iter()
        .filter(|t| !s.terms.iter().any(|x| x == *t))
        .map(|t| t.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::OutOfVocabulary(missing));
    }
    let u = s.word_vector(t1)?;
    let v = s.word_vector(t2)?;
    let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if nu <= f64::EPSILON * 16.0 || nv <= f64::EPSILON * 16.0 {
        return Ok(Similarity {
            value: 0.0,
            degenerate: true,
        });
    }
    let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
    Ok(Similarity {
        value: (dot / (nu * nv)).clamp(-1.0, 1.0),
        degenerate: false,
    })
}

fn vocab_indices<S: AsRef<str>>(tokens: &[S], vocab: &[String]) -> Result<Vec<usize>> {
    let mut missing = Vec::new();
    let mut idx = Vec::with_capacity(tokens.len());
    for t in tokens {
        match vocab.iter().position(|v| v == t.as_ref()) {
            Some(i) => idx.push(i),
            None => {
                if !missing.iter().any(|m: &String| m == t.as_ref()) {
                    missing.push(t.as_ref().to_string());
                }
            }
        }
    }
    if missing.is_empty() {
        Ok(idx)
    } else {
        Err(Error::OutOfVocabulary(missing))
    }
}

/// Token counts over `vocab`; blind to order.
pub fn bow_vector<S: AsRef<str>>(tokens: &[S], vocab: &[String]) -> Result<Vec<u32>> {
    let mut out = vec![0; vocab.len()];
    for i in vocab_indices(tokens, vocab)? {
        out[i] += 1;
    }
    Ok(out)
}

/// One-hot word vectors multiplied together in sentence order.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderTensor {
    vocab_size: usize,
    order: usize,
    data: Vec<f64>,
}

impl OrderTensor {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Flat index of the single unit entry.
    pub fn nonzero_index(&self) -> usize {
        self.data
            .iter()
            .position(|&x| x != 0.0)
            .expect("one-hot product has one unit entry")
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }
}

pub fn order_representation<S: AsRef<str>>(tokens: &[S], vocab: &[String]) -> Result<OrderTensor> {
    order_representation_with_budget(tokens, vocab, DEFAULT_TENSOR_BUDGET)
}

/// Fails when `|vocab|^n` exceeds `budget` entries.
pub fn order_representation_with_budget<S: AsRef<str>>(
    tokens: &[S],
    vocab: &[String],
    budget: usize,
) -> Result<OrderTensor> {
    if tokens.is_empty() {
        return Err(Error::Invalid("order representation needs at least one token".into()));
    }
    let idx = vocab_indices(tokens, vocab)?;
    let v = vocab.len();
    let dim = u32::try_from(idx.len())
        .ok()
        .and_then(|n| v.checked_pow(n))
        .filter(|&d| d <= budget)
        .ok_or_else(|| {
            Error::Invalid(format!(
                "tensor of {} tokens over {v} words exceeds the {budget}-entry budget",
                idx.len()
            ))
        })?;
    let mut data = vec![1.0];
    for &i in &idx {
        let mut one_hot = vec![0.0; v];
        one_hot[i] = 1.0;
        data = data.iter().flat_map(|a| one_hot.iter().map(move |b| a * b)).collect();
    }
    debug_assert_eq!(data.len(), dim);
    Ok(OrderTensor {
        vocab_size: v,
        order: idx.len(),
        data,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(label: &str, text: &str) -> (String, Vec<String>) {
        (label.to_string(), tokenize(text, true))
    }

    #[test]
    fn counts_and_order() {
        let m = build_matrix(&[doc("d", "a a b")]).unwrap();
        assert_eq!(m.terms(), ["a", "b"]);
        assert_eq!(m.count("a", "d"), Some(2));
        assert_eq!(m.count("b", "d"), Some(1));
    }

    #[test]
    fn disjoint_docs_are_block_diagonal() {
        let m = build_matrix(&[doc("d1", "a b"), doc("d2", "c")]).unwrap();
        assert_eq!(m.count("c", "d1"), Some(0));
        assert_eq!(m.count("a", "d2"), Some(0));
    }

    #[test]
    fn swapped_sentences_share_a_column() {
        let m = build_matrix(&[doc("d1", "mary hits john"), doc("d2", "john hits mary")]).unwrap();
        assert_eq!(m.column(0), m.column(1));
    }

    #[test]
    fn empty_corpus_rejected() {
        assert!(build_matrix::<String>(&[]).is_err());
    }

    #[test]
    fn rank_one_svd() {
        let m = TermDocMatrix::from_dense(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        let s = svd_truncate(&m, 1).unwrap();
        assert!((s.singular_values()[0] - 5.0).abs() < 1e-12);
        assert!(reconstruction_error(&m, &s) < 1e-9);
    }

    #[test]
    fn identity_svd_and_bad_k() {
        let m = TermDocMatrix::from_dense(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let s = svd_truncate(&m, 2).unwrap();
        for sv in s.singular_values() {
            assert!((sv - 1.0).abs() < 1e-12);
        }
        assert!(svd_truncate(&m, 0).is_err());
        assert!(svd_truncate(&m, 3).is_err());
    }

    #[test]
    fn similarity_cases() {
        let m = build_matrix(&[doc("d1", "a b c"), doc("d2", "a b"), doc("d3", "d")]).unwrap();
        let s = svd_truncate(&m, 3).unwrap();
        assert!((similarity(&s, "c", "c").unwrap().value - 1.0).abs() < 1e-12);
        // a and b occur in identical documents
        assert!((similarity(&s, "a", "b").unwrap().value - 1.0).abs() < 1e-12);
        assert!(similarity(&s, "a", "d").unwrap().value.abs() < 1e-12);
        assert!(similarity(&s, "a", "zzz").is_err());
    }

    #[test]
    fn zero_word_vector_is_flagged() {
        let m = build_matrix(&[doc("d1", "a a a a"), doc("d2", "b")]).unwrap();
        let s = svd_truncate(&m, 1).unwrap();
        let sim = similarity(&s, "a", "b").unwrap();
        assert!(sim.degenerate);
        assert_eq!(sim.value, 0.0);
    }

    #[test]
    fn bow_cases() {
        let vocab: Vec<String> = ["mary", "hits", "john", "a"].map(String::from).to_vec();
        let x = bow_vector(&tokenize("mary hits john", true), &vocab).unwrap();
        let y = bow_vector(&tokenize("john hits mary", true), &vocab).unwrap();
        assert_eq!(x, y);
        assert_eq!(bow_vector::<&str>(&[], &vocab).unwrap(), [0, 0, 0, 0]);
        assert_eq!(bow_vector(&["a", "a"], &vocab).unwrap(), [0, 0, 0, 2]);
        match bow_vector(&["bob", "a", "bob"], &vocab).unwrap_err() {
            Error::OutOfVocabulary(m) => assert_eq!(m, ["bob"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn order_cases() {
        let vocab: Vec<String> = ["mary", "hits", "john"].map(String::from).to_vec();
        let x = order_representation(&["mary", "hits", "john"], &vocab).unwrap();
        let y = order_representation(&["john", "hits", "mary"], &vocab).unwrap();
        // mary=0 hits=1 john=2: 0*9 + 1*3 + 2 = 5 and 2*9 + 1*3 + 0 = 21
        assert_eq!(x.nonzero_index(), 5);
        assert_eq!(y.nonzero_index(), 21);
        assert_ne!(x, y);
        let single = order_representation(&["hits"], &vocab).unwrap();
        assert_eq!(single.data(), &[0.0, 1.0, 0.0]);
        assert_eq!(
            order_representation(&["mary", "mary"], &vocab).unwrap(),
            order_representation(&["mary", "mary"], &vocab).unwrap()
        );
        assert!(order_representation::<&str>(&[], &vocab).is_err());
        assert!(order_representation_with_budget(&["mary"; 13], &vocab, DEFAULT_TENSOR_BUDGET).is_err());
    }

    #[test]
    fn corpus_lines() {
        let c = parse_corpus("Mary hits John\n\n  john hits mary \n", true);
        assert_eq!(c.len(), 2);
        assert_eq!(c[1].0, "doc2");
        assert_eq!(c[0].1, ["mary", "hits", "john"]);
    }
}
