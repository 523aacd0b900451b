use std::fmt;
use std::path::{Path, PathBuf};

use ctxbell::concept::ranked_typicalities;
use ctxbell::entangle::EntangledState;
use ctxbell::kolmo::{self, Classification, Realizability};
use ctxbell::semantic::{self, parse_corpus, tokenize, Similarity};
use ctxbell::{
    bell_value, combine, context_distribution, guppy_gap, is_violated, marginal, parse_ratings, parse_relation,
    parse_scenario, pet_food_table, product_equality_check, sweep_case_c, CorrelationTable, PetFoodScenario,
    ProductEqualityCheck, RatingTable, Side, SweepRow,
};
use serde::Serialize;

use crate::report::{Output, Tsv};

/// Error surfaced to the user, prefixed with the file it came from.
#[derive(Debug)]
pub struct Failure(pub String);

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<ctxbell::Error> for Failure {
    fn from(e: ctxbell::Error) -> Self {
        Failure(e.to_string())
    }
}

fn in_file(path: &Path) -> impl Fn(ctxbell::Error) -> Failure + '_ {
    move |e| Failure(format!("{}: {e}", path.display()))
}

/// Reads input files and keeps their bytes for the report digest.
#[derive(Default)]
pub struct Inputs {
    pub contents: Vec<Vec<u8>>,
}

impl Inputs {
    pub fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let bytes = std::fs::read(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        let text =
            String::from_utf8(bytes.clone()).map_err(|e| Failure(format!("{}: not UTF-8 ({e})", path.display())))?;
        self.contents.push(bytes);
        Ok(text)
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Delimiter {
    Tab,
    Comma,
}

impl Delimiter {
    fn byte(self) -> u8 {
        match self {
            Delimiter::Tab => b'\t',
            Delimiter::Comma => b',',
        }
    }
}

fn load_table(inputs: &mut Inputs, path: &Path, delimiter: Delimiter) -> Result<RatingTable, Failure> {
    let text = inputs.read(path)?;
    parse_ratings(&text, delimiter.byte()).map_err(in_file(path))
}

#[derive(Serialize)]
struct RankedExemplar {
    rank: usize,
    exemplar: String,
    rating: f64,
    typicality: f64,
}

#[derive(Serialize)]
struct RatingsResult {
    context: String,
    column_mass: f64,
    ranking: Vec<RankedExemplar>,
}

pub fn ratings(inputs: &mut Inputs, table: &Path, context: &str, delimiter: Delimiter) -> Result<Output, Failure> {
    let t = load_table(inputs, table, delimiter)?;
    let j = t.resolve_context(context).map_err(in_file(table))?;
    let label = t.contexts()[j].clone();
    let ranked = ranked_typicalities(&t, &label)?;
    let ranking: Vec<RankedExemplar> = ranked
        .into_iter()
        .enumerate()
        .map(|(k, (exemplar, typicality))| {
            let i = t
                .exemplars()
                .position(&exemplar)
                .expect("ranked exemplars come from the table");
            RankedExemplar {
                rank: k + 1,
                rating: t.rating(i, j),
                exemplar,
                typicality,
            }
        })
        .collect();
    let mut tsv = Tsv::new(&["rank", "exemplar", "rating", "typicality"]);
    for r in &ranking {
        tsv.push(vec![
            r.rank.to_string(),
            r.exemplar.clone(),
            fmt_f64(r.rating),
            fmt_f64(r.typicality),
        ]);
    }
    let result = RatingsResult {
        column_mass: t.column_mass(j),
        context: label,
        ranking,
    };
    Ok(Output::new(&result, tsv))
}

/// Where a correlation table comes from.
pub enum TableSource<'a> {
    Scenario(&'a Path),
    Lambda(f64),
    Joint([f64; 4]),
}

struct LoadedTable {
    name: Option<String>,
    case_c: Option<f64>,
    table: CorrelationTable,
}

fn load_correlations(inputs: &mut Inputs, source: TableSource<'_>) -> Result<LoadedTable, Failure> {
    match source {
        TableSource::Scenario(path) => {
            let text = inputs.read(path)?;
            let s = parse_scenario(&text).map_err(in_file(path))?;
            Ok(LoadedTable {
                name: s.name,
                case_c: s.case_c,
                table: s.table,
            })
        }
        TableSource::Lambda(lambda) => Ok(LoadedTable {
            name: Some("pet-food".into()),
            case_c: Some(lambda),
            table: pet_food_table(&PetFoodScenario::new(lambda)?),
        }),
        TableSource::Joint([a, b, c, d]) => Ok(LoadedTable {
            name: None,
            case_c: None,
            table: CorrelationTable::new([[a, b], [c, d]])?,
        }),
    }
}

#[derive(Serialize)]
struct AllForms {
    value: f64,
    form: String,
}

#[derive(Serialize)]
struct BellResult {
    #[serde(skip_serializing_if = "Option::is_none")]
    scenario: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    table: CorrelationTable,
    bell_value: f64,
    all_forms: AllForms,
    violated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    product_equalities: Option<ProductEqualityCheck>,
    product_tolerance: f64,
    classification: Classification,
}

pub fn bell(inputs: &mut Inputs, source: TableSource<'_>, tol: f64) -> Result<Output, Failure> {
    let loaded = load_correlations(inputs, source)?;
    let t = &loaded.table;
    let value = bell_value(t);
    let classification = kolmo::classify(t);
    let product = t.singles().map(|s| product_equality_check(s, &t.joint(), tol));
    let violated = is_violated(value);

    let mut pairs = vec![
        ("bell_value", fmt_f64(value)),
        ("all_forms_value", fmt_f64(classification.value)),
        ("all_forms_form", classification.form.to_string()),
        ("violated", violated.to_string()),
        ("band", classification.band.to_string()),
    ];
    if let Some(p) = &product {
        for r in 0..2 {
            for c in 0..2 {
                pairs.push(("product_equality", format!("{}={}", t.cell_name(r, c), p.cells[r][c])));
            }
        }
        pairs.push(("product_equalities_hold", p.all_hold.to_string()));
    }
    let result = BellResult {
        scenario: loaded.name.clone(),
        lambda: loaded.case_c,
        table: t.clone(),
        bell_value: value,
        all_forms: AllForms {
            value: classification.value,
            form: classification.form.to_string(),
        },
        violated,
        product_equalities: product,
        product_tolerance: tol,
        classification,
    };
    Ok(Output::new(&result, Tsv::key_values(pairs)))
}

/// Parses `start:stop:step` into grid points within [0, 1].
pub fn parse_range(range: &str) -> Result<Vec<f64>, Failure> {
    let bad = |why: &str| Failure(format!("range `{range}`: {why}"));
    let parts: Vec<&str> = range.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(bad("expected start:stop:step"));
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| bad(&format!("`{s}` is not a number")))
    };
    let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
    if ![start, stop, step].iter().all(|x| x.is_finite()) {
        return Err(bad("values must be finite"));
    }
    if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&stop) {
        return Err(bad("range exceeds [0, 1]"));
    }
    if stop < start {
        return Err(bad("stop is below start"));
    }
    if stop == start {
        return Ok(vec![start]);
    }
    if step <= 0.0 {
        return Err(bad("step must be positive"));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    if n > 1_000_000 {
        return Err(bad("too many grid points"));
    }
    Ok((0..=n).map(|i| (start + i as f64 * step).min(stop)).collect())
}

#[derive(Serialize)]
struct SweepResult {
    rows: Vec<SweepRow>,
}

pub fn sweep(range: &str) -> Result<Output, Failure> {
    let grid = parse_range(range)?;
    let rows = sweep_case_c(&grid)?;
    let mut tsv = Tsv::new(&["lambda", "bell_value", "violated"]);
    for r in &rows {
        tsv.push(vec![fmt_f64(r.lambda), fmt_f64(r.bell_value), r.violated.to_string()]);
    }
    Ok(Output::new(&SweepResult { rows }, tsv))
}

#[derive(Serialize)]
struct PairWeight {
    a: String,
    b: String,
    probability: f64,
}

#[derive(Serialize)]
struct GuppyResult {
    exemplar: String,
    context_a: String,
    context_b: String,
    typicality_a: f64,
    typicality_b: f64,
    combined_marginal: f64,
    gap: f64,
    guppy_effect: bool,
    support: Vec<PairWeight>,
}

pub struct GuppyArgs<'a> {
    pub concept_a: &'a Path,
    pub context_a: Option<&'a str>,
    pub concept_b: &'a Path,
    pub context_b: Option<&'a str>,
    pub relation: &'a Path,
    pub exemplar: &'a str,
    pub delimiter: Delimiter,
}

fn pick_context(t: &RatingTable, path: &Path, query: Option<&str>) -> Result<String, Failure> {
    match query {
        Some(q) => {
            let j = t.resolve_context(q).map_err(in_file(path))?;
            Ok(t.contexts()[j].clone())
        }
        None if t.contexts().len() == 1 => Ok(t.contexts()[0].clone()),
        None => Err(Failure(format!(
            "{}: table has {} contexts, choose one of: {}",
            path.display(),
            t.contexts().len(),
            t.contexts().join(", ")
        ))),
    }
}

pub fn guppy(inputs: &mut Inputs, args: GuppyArgs<'_>) -> Result<Output, Failure> {
    let ta = load_table(inputs, args.concept_a, args.delimiter)?;
    let tb = load_table(inputs, args.concept_b, args.delimiter)?;
    let relation_text = inputs.read(args.relation)?;
    let relation = parse_relation(&relation_text).map_err(in_file(args.relation))?;
    let ca = pick_context(&ta, args.concept_a, args.context_a)?;
    let cb = pick_context(&tb, args.concept_b, args.context_b)?;
    let pa = context_distribution(&ta, &ca)?;
    let pb = context_distribution(&tb, &cb)?;
    let state: EntangledState = combine(&pa, &pb, &relation).map_err(in_file(args.relation))?;
    let gap = guppy_gap(&state, &pa, &pb, args.exemplar)?;
    let result = GuppyResult {
        exemplar: args.exemplar.to_string(),
        typicality_a: pa.probability(args.exemplar)?,
        typicality_b: pb.probability(args.exemplar)?,
        combined_marginal: marginal(&state, Side::A).probability(args.exemplar)?,
        gap,
        guppy_effect: gap > 0.0,
        support: state
            .support(0.0)
            .into_iter()
            .map(|(a, b, probability)| PairWeight { a, b, probability })
            .collect(),
        context_a: ca,
        context_b: cb,
    };
    let tsv = Tsv::key_values(vec![
        ("exemplar", result.exemplar.clone()),
        ("typicality_a", fmt_f64(result.typicality_a)),
        ("typicality_b", fmt_f64(result.typicality_b)),
        ("combined_marginal", fmt_f64(result.combined_marginal)),
        ("gap", fmt_f64(result.gap)),
        ("guppy_effect", result.guppy_effect.to_string()),
    ]);
    Ok(Output::new(&result, tsv))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum CompareMode {
    Bow,
    Order,
    Both,
}

#[derive(Serialize)]
struct SimilarityRow {
    a: String,
    b: String,
    #[serde(flatten)]
    similarity: Similarity,
}

#[derive(Serialize)]
struct Verdict {
    equal: bool,
    verdict: &'static str,
}

impl Verdict {
    fn of(equal: bool) -> Self {
        Verdict {
            equal,
            verdict: if equal { "indistinguishable" } else { "distinguishable" },
        }
    }
}

#[derive(Serialize)]
struct Comparison {
    first: String,
    second: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    bow: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<Verdict>,
}

#[derive(Serialize)]
struct SemspaceResult {
    terms: usize,
    documents: usize,
    k: usize,
    singular_values: Vec<f64>,
    reconstruction_error: f64,
    similarities: Vec<SimilarityRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<Comparison>,
}

pub struct SemspaceArgs<'a> {
    pub corpus: &'a Path,
    pub k: usize,
    pub pairs: &'a [String],
    pub compare: &'a [String],
    pub mode: CompareMode,
    pub lowercase: bool,
}

pub fn semspace(inputs: &mut Inputs, args: SemspaceArgs<'_>) -> Result<Output, Failure> {
    let text = inputs.read(args.corpus)?;
    let corpus = parse_corpus(&text, args.lowercase);
    let m = semantic::build_matrix(&corpus).map_err(in_file(args.corpus))?;
    let space = semantic::svd_truncate(&m, args.k)?;

    let mut similarities = Vec::new();
    for pair in args.pairs {
        let Some((a, b)) = pair.split_once(',') else {
            return Err(Failure(format!("pair `{pair}`: expected word,word")));
        };
        let (a, b) = if args.lowercase {
            (a.trim().to_lowercase(), b.trim().to_lowercase())
        } else {
            (a.trim().to_string(), b.trim().to_string())
        };
        let similarity = semantic::similarity(&space, &a, &b)?;
        similarities.push(SimilarityRow { a, b, similarity });
    }

    let comparison = match args.compare {
        [] => None,
        [first, second] => {
            let x = tokenize(first, args.lowercase);
            let y = tokenize(second, args.lowercase);
            let vocab = m.terms();
            let bow = matches!(args.mode, CompareMode::Bow | CompareMode::Both)
                .then(|| -> Result<Verdict, Failure> {
                    Ok(Verdict::of(
                        semantic::bow_vector(&x, vocab)? == semantic::bow_vector(&y, vocab)?,
                    ))
                })
                .transpose()?;
            let order = matches!(args.mode, CompareMode::Order | CompareMode::Both)
                .then(|| -> Result<Verdict, Failure> {
                    Ok(Verdict::of(
                        semantic::order_representation(&x, vocab)? == semantic::order_representation(&y, vocab)?,
                    ))
                })
                .transpose()?;
            Some(Comparison {
                first: first.clone(),
                second: second.clone(),
                bow,
                order,
            })
        }
        _ => return Err(Failure("--compare takes exactly two sentences".into())),
    };

    let mut pairs = Vec::new();
    for (i, s) in space.singular_values().iter().enumerate() {
        pairs.push(("singular_value", format!("{}={}", i + 1, fmt_f64(*s))));
    }
    for s in &similarities {
        pairs.push(("similarity", format!("{},{}={}", s.a, s.b, fmt_f64(s.similarity.value))));
    }
    if let Some(c) = &comparison {
        if let Some(v) = &c.bow {
            pairs.push(("bow", v.verdict.to_string()));
        }
        if let Some(v) = &c.order {
            pairs.push(("order", v.verdict.to_string()));
        }
    }
    let result = SemspaceResult {
        terms: m.terms().len(),
        documents: m.docs().len(),
        k: space.rank(),
        singular_values: space.singular_values().to_vec(),
        reconstruction_error: semantic::reconstruction_error(&m, &space),
        similarities,
        comparison,
    };
    Ok(Output::new(&result, Tsv::key_values(pairs)))
}

#[derive(Serialize)]
struct KolmoResult {
    table: CorrelationTable,
    realizability: Realizability,
    kolmogorovian_by_forms: bool,
    classification: Classification,
}

pub fn kolmo(inputs: &mut Inputs, source: TableSource<'_>) -> Result<Output, Failure> {
    let loaded = load_correlations(inputs, source)?;
    let t = loaded.table;
    let realizability = kolmo::realizable(&t);
    let classification = kolmo::classify(&t);
    let mut pairs = vec![
        ("feasible", realizability.is_feasible().to_string()),
        ("band", classification.band.to_string()),
        ("all_forms_value", fmt_f64(classification.value)),
    ];
    match &realizability {
        Realizability::Feasible { weights, .. } => {
            for (s, w) in weights.iter().filter(|(_, w)| *w > 0.0) {
                pairs.push(("weight", format!("{s}={}", fmt_f64(*w))));
            }
        }
        Realizability::Infeasible { witness, .. } => {
            pairs.push(("witness_value", fmt_f64(witness.value)));
            pairs.push(("witness_bound", fmt_f64(witness.bound)));
        }
    }
    let result = KolmoResult {
        kolmogorovian_by_forms: kolmo::is_kolmogorovian(&t.joints_only()),
        table: t,
        realizability,
        classification,
    };
    Ok(Output::new(&result, Tsv::key_values(pairs)))
}

pub fn path_arg(p: &Option<PathBuf>) -> Option<&Path> {
    p.as_deref()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("0:1:0.25").unwrap(), [0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_range("0:0:1").unwrap(), [0.0]);
        assert_eq!(parse_range("0:1:0.1").unwrap().len(), 11);
        assert!(parse_range("0:2:0.5").unwrap_err().0.contains("exceeds [0, 1]"));
        assert!(parse_range("0:1").is_err());
        assert!(parse_range("0:1:0").is_err());
        assert!(parse_range("0.5:0.2:0.1").is_err());
        assert!(parse_range("a:1:0.1").is_err());
    }
}
