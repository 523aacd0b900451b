//! Typicality ratings of exemplars under contexts, and the concept states they induce.
//!
//! A context column of raw ratings becomes a probability distribution by L1
//! normalization. The concept state under that context has the square roots of
//! those probabilities as real, nonnegative amplitudes, so the Born rule on a
//! single-exemplar projector gives back the typicality.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{Basis, StateVector};

/// Exemplars x contexts matrix of nonnegative ratings.
#[derive(Clone, Debug, PartialEq)]
pub struct RatingTable {
    exemplars: Basis,
    contexts: Vec<String>,
    // row-major, exemplar x context
    ratings: Vec<f64>,
}

impl RatingTable {
    /// `ratings[i][j]` is the rating of exemplar `i` under context `j`.
    pub fn new(exemplars: Vec<String>, contexts: Vec<String>, ratings: Vec<Vec<f64>>) -> Result<Self> {
        let basis = Basis::new(&exemplars)?;
        check_contexts(&contexts).map_err(Error::Invalid)?;
        if ratings.len() != exemplars.len() {
            return Err(Error::DimensionMismatch {
                expected: exemplars.len(),
                got: ratings.len(),
            });
        }
        let mut flat = Vec::with_capacity(exemplars.len() * contexts.len());
        for (i, row) in ratings.into_iter().enumerate() {
            if row.len() != contexts.len() {
                return Err(Error::DimensionMismatch {
                    expected: contexts.len(),
                    got: row.len(),
                });
            }
            for (j, value) in row.into_iter().enumerate() {
                if !value.is_finite() || value < 0.0 {
                    return Err(Error::Invalid(format!(
                        "rating {value} for ({}, {}) is not a finite nonnegative number",
                        exemplars[i], contexts[j]
                    )));
                }
                flat.push(value);
            }
        }
        let table = RatingTable {
            exemplars: basis,
            contexts,
            ratings: flat,
        };
        for j in 0..table.contexts.len() {
            if table.column(j).all(|r| r == 0.0) {
                return Err(Error::EmptyContext(table.contexts[j].clone()));
            }
        }
        Ok(table)
    }

    pub fn exemplars(&self) -> &Basis {
        &self.exemplars
    }

    pub fn exemplar_names(&self) -> Vec<String> {
        self.exemplars.names()
    }

    pub fn contexts(&self) -> &[String] {
        &self.contexts
    }

    pub fn rating(&self, exemplar: usize, context: usize) -> f64 {
        self.ratings[exemplar * self.contexts.len() + context]
    }

    fn column(&self, context: usize) -> impl Iterator<Item = f64> + '_ {
        self.ratings.iter().skip(context).step_by(self.contexts.len()).copied()
    }

    /// Sum of a context column.
    pub fn column_mass(&self, context: usize) -> f64 {
        self.column(context).sum()
    }

    /// Finds a context by exact label, falling back to a unique
    /// case-insensitive substring match.
    pub fn resolve_context(&self, query: &str) -> Result<usize> {
        if let Some(j) = self.contexts.iter().position(|c| c == query) {
            return Ok(j);
        }
        let needle = query.to_lowercase();
        let hits: Vec<usize> = if needle.is_empty() {
            Vec::new()
        } else {
            (0..self.contexts.len())
                .filter(|&j| self.contexts[j].to_lowercase().contains(&needle))
                .collect()
        };
        match hits.as_slice() {
            [j] => Ok(*j),
            [] => Err(Error::UnknownLabel {
                label: query.to_string(),
                available: self.contexts.clone(),
            }),
            _ => Err(Error::AmbiguousContext {
                query: query.to_string(),
                matches: hits.iter().map(|&j| self.contexts[j].clone()).collect(),
            }),
        }
    }

    /// Scales one context column by `factor`.
    pub fn with_scaled_context(&self, context: usize, factor: f64) -> Result<Self> {
        let n = self.contexts.len();
        let rows = (0..self.exemplars.len())
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let r = self.rating(i, j);
                        if j == context {
                            r * factor
                        } else {
                            r
                        }
                    })
                    .collect()
            })
            .collect();
        RatingTable::new(self.exemplar_names(), self.contexts.clone(), rows)
    }
}

fn check_contexts(contexts: &[String]) -> std::result::Result<(), String> {
    if contexts.is_empty() {
        return Err("table has no context columns".into());
    }
    for (j, c) in contexts.iter().enumerate() {
        if c.is_empty() {
            return Err(format!("context label {} is empty", j + 1));
        }
        if contexts[..j].contains(c) {
            return Err(format!("duplicate context `{c}`"));
        }
    }
    Ok(())
}

/// Parses a delimiter-separated rating table.
///
/// The first row holds a corner cell (conventionally `exemplar`) followed by
/// context labels. Each following row is an exemplar label and one rating per
/// context. Lines starting with `#` are ignored. Reported line and column
/// numbers are 1-based.
pub fn parse_ratings(source: &str, delimiter: u8) -> Result<RatingTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .delimiter(delimiter)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source.as_bytes());

    let mut contexts: Option<Vec<String>> = None;
    let mut header_line = 0;
    let mut exemplars: Vec<String> = Vec::new();
    let mut exemplar_lines: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();

    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            Error::parse(line, 0, e.to_string())
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let Some(ctx) = &contexts else {
            if record.len() < 2 {
                return Err(Error::parse(line, 1, "header needs at least one context label"));
            }
            let labels: Vec<String> = record.iter().skip(1).map(str::to_string).collect();
            check_contexts(&labels).map_err(|m| Error::parse(line, 2, m))?;
            contexts = Some(labels);
            header_line = line;
            continue;
        };
        if record.len() != ctx.len() + 1 {
            return Err(Error::parse(
                line,
                record.len().min(ctx.len() + 1) + 1,
                format!("expected {} cells, found {}", ctx.len() + 1, record.len()),
            ));
        }
        let name = &record[0];
        if name.is_empty() {
            return Err(Error::parse(line, 1, "empty exemplar label"));
        }
        if let Some(k) = exemplars.iter().position(|e| e == name) {
            return Err(Error::parse(
                line,
                1,
                format!("duplicate exemplar `{name}` (first on line {})", exemplar_lines[k]),
            ));
        }
        let mut row = Vec::with_capacity(ctx.len());
        for (j, cell) in record.iter().enumerate().skip(1) {
            let value: f64 = cell
                .parse()
                .map_err(|_| Error::parse(line, j + 1, format!("`{cell}` is not a number")))?;
            if !value.is_finite() {
                return Err(Error::parse(line, j + 1, format!("`{cell}` is not finite")));
            }
            if value < 0.0 {
                return Err(Error::parse(
                    line,
                    j + 1,
                    format!("negative rating {cell} for ({name}, {})", ctx[j - 1]),
                ));
            }
            row.push(value);
        }
        exemplars.push(name.to_string());
        exemplar_lines.push(line);
        rows.push(row);
    }

    let Some(contexts) = contexts else {
        return Err(Error::parse(1, 1, "missing header row"));
    };
    if exemplars.is_empty() {
        return Err(Error::parse(header_line, 1, "table has no exemplar rows"));
    }
    for (j, label) in contexts.iter().enumerate() {
        if rows.iter().all(|r| r[j] == 0.0) {
            return Err(Error::parse(
                header_line,
                j + 2,
                format!("context column `{label}` has no mass"),
            ));
        }
    }
    RatingTable::new(exemplars, contexts, rows)
}

/// Probability of each exemplar under one context.
#[derive(Clone, Debug, PartialEq)]
pub struct ContextDistribution {
    context: String,
    exemplars: Basis,
    probabilities: Vec<f64>,
}

impl ContextDistribution {
    /// L1-normalizes nonnegative weights. At least one weight must be positive.
    pub fn from_weights(context: impl Into<String>, exemplars: Basis, weights: &[f64]) -> Result<Self> {
        let context = context.into();
        if weights.len() != exemplars.len() {
            return Err(Error::DimensionMismatch {
                expected: exemplars.len(),
                got: weights.len(),
            });
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::Invalid(format!("weight {w} is not a finite nonnegative number")));
        }
        let mass: f64 = weights.iter().sum();
        if mass == 0.0 {
            return Err(Error::EmptyContext(context));
        }
        Ok(ContextDistribution {
            context,
            exemplars,
            probabilities: weights.iter().map(|w| w / mass).collect(),
        })
    }

    pub fn context(&self) -> &str {
        &self.context
    }

    pub fn exemplars(&self) -> &Basis {
        &self.exemplars
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn probability(&self, exemplar: &str) -> Result<f64> {
        Ok(self.probabilities[self.exemplars.require(exemplar)?])
    }

    /// Real nonnegative amplitudes `sqrt(p)`.
    pub fn state(&self) -> StateVector {
        let amplitudes = self
            .probabilities
            .iter()
            .map(|p| Complex64::new(p.sqrt(), 0.0))
            .collect();
        crate::hilbert::normalize(self.exemplars.clone(), amplitudes).expect("a distribution has positive mass")
    }

    /// `(exemplar, probability)` pairs in basis order.
    pub fn iter(&self) -> impl Iterator<Item = (String, f64)> + '_ {
        self.exemplars
            .labels()
            .iter()
            .map(ToString::to_string)
            .zip(self.probabilities.iter().copied())
    }
}

pub fn context_distribution(table: &RatingTable, context: &str) -> Result<ContextDistribution> {
    let j = table.resolve_context(context)?;
    let weights: Vec<f64> = table.column(j).collect();
    ContextDistribution::from_weights(table.contexts[j].clone(), table.exemplars.clone(), &weights)
}

pub fn context_state(table: &RatingTable, context: &str) -> Result<StateVector> {
    Ok(context_distribution(table, context)?.state())
}

pub fn typicality(table: &RatingTable, context: &str, exemplar: &str) -> Result<f64> {
    let dist = context_distribution(table, context)?;
    dist.probability(exemplar)
}

/// Exemplars by descending typicality; ties in lexicographic label order.
pub fn rank_exemplars(table: &RatingTable, context: &str) -> Result<Vec<String>> {
    let j = table.resolve_context(context)?;
    let names = table.exemplar_names();
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by(|&a, &b| {
        table
            .rating(b, j)
            .total_cmp(&table.rating(a, j))
            .then_with(|| names[a].cmp(&names[b]))
    });
    Ok(order.into_iter().map(|i| names[i].clone()).collect())
}

/// Ranking with its typicalities, most typical first.
pub fn ranked_typicalities(table: &RatingTable, context: &str) -> Result<Vec<(String, f64)>> {
    let dist = context_distribution(table, context)?;
    rank_exemplars(table, context)?
        .into_iter()
        .map(|name| {
            let p = dist.probability(&name)?;
            Ok((name, p))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{born_prob, Projector};

    const SMALL: &str = "exemplar\tc1\tc2\nx\t1\t0\ny\t1\t2\n";

    #[test]
    fn parses_small_table() {
        let t = parse_ratings(SMALL, b'\t').unwrap();
        assert_eq!(t.exemplar_names(), ["x", "y"]);
        assert_eq!(t.contexts(), ["c1", "c2"]);
        assert_eq!(t.rating(1, 1), 2.0);
    }

    #[test]
    fn negative_cell_reports_coordinates() {
        let src = "exemplar\tc1\nx\t1\ny\t-0.1\n";
        match parse_ratings(src, b'\t').unwrap_err() {
            Error::Parse { line, column, message } => {
                assert_eq!((line, column), (3, 2));
                assert!(message.contains("-0.1"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_column_rejected() {
        let src = "exemplar\tc1\tc2\nx\t1\t0\ny\t2\t0\n";
        let err = parse_ratings(src, b'\t').unwrap_err().to_string();
        assert!(err.contains("context column `c2` has no mass"), "{err}");
    }

    #[test]
    fn duplicate_exemplar_rejected() {
        let src = "exemplar\tc1\nx\t1\nx\t2\n";
        let err = parse_ratings(src, b'\t').unwrap_err().to_string();
        assert!(err.contains("duplicate exemplar"), "{err}");
    }

    #[test]
    fn ragged_and_non_numeric_rows_rejected() {
        assert!(parse_ratings("exemplar\tc1\nx\t1\t2\n", b'\t').is_err());
        assert!(parse_ratings("exemplar\tc1\nx\tlots\n", b'\t').is_err());
        assert!(parse_ratings("", b'\t').is_err());
        assert!(parse_ratings("exemplar\tc1\n", b'\t').is_err());
    }

    #[test]
    fn comments_and_commas() {
        let src = "# note\nexemplar,\"a, b\"\nx,3\n";
        let t = parse_ratings(src, b',').unwrap();
        assert_eq!(t.contexts(), ["a, b"]);
    }

    #[test]
    fn distribution_cases() {
        let single = RatingTable::new(vec!["x".into()], vec!["c".into()], vec![vec![0.3]]).unwrap();
        assert_eq!(typicality(&single, "c", "x").unwrap(), 1.0);
        let t = parse_ratings(SMALL, b'\t').unwrap();
        let d = context_distribution(&t, "c1").unwrap();
        assert_eq!(d.probabilities(), &[0.5, 0.5]);
        assert_eq!(typicality(&t, "c2", "x").unwrap(), 0.0);
    }

    #[test]
    fn unknown_context_lists_available() {
        let t = parse_ratings(SMALL, b'\t').unwrap();
        let err = context_distribution(&t, "nope").unwrap_err().to_string();
        assert!(err.contains("c1, c2"), "{err}");
        assert!(matches!(t.resolve_context("c"), Err(Error::AmbiguousContext { .. })));
        assert!(typicality(&t, "c1", "z").is_err());
    }

    #[test]
    fn state_cases() {
        let t = parse_ratings(SMALL, b'\t').unwrap();
        let s = context_state(&t, "c1").unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitudes()[0].re - h).abs() < 1e-15);
        assert!((s.amplitudes()[1].re - h).abs() < 1e-15);
        let point = ContextDistribution::from_weights("c", Basis::new(["x", "y"]).unwrap(), &[1.0, 0.0])
            .unwrap()
            .state();
        assert_eq!(
            point,
            StateVector::basis_state(Basis::new(["x", "y"]).unwrap(), "x").unwrap()
        );
        let p = Projector::onto(s.basis().clone(), &["y"]).unwrap();
        assert!((born_prob(&p, &s).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ties_rank_lexicographically() {
        let t = RatingTable::new(
            vec!["pear".into(), "apple".into(), "fig".into()],
            vec!["c".into()],
            vec![vec![1.0], vec![1.0], vec![1.0]],
        )
        .unwrap();
        assert_eq!(rank_exemplars(&t, "c").unwrap(), ["apple", "fig", "pear"]);
    }
}
