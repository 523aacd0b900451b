//! Combined concepts as entangled states over pairs of exemplars.
//!
//! Two single-concept distributions and an explicit compatibility relation
//! determine the combined state: amplitude(x, y) is proportional to
//! `sqrt(pA(x) pB(y))` on compatible pairs and zero elsewhere. This is a
//! modeling choice, the smallest entangled embedding in which collapsing one
//! factor onto an exemplar drags the other factor onto its partner.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::Deserialize;

use crate::bell::{CorrelationTable, Singles};
use crate::concept::ContextDistribution;
use crate::error::{Error, Result};
use crate::hilbert::{self, Basis, Observable, StateVector, DEFAULT_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

/// Explicit set of exemplar pairs that may co-occur in the combination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibilityRelation {
    pairs: BTreeSet<(String, String)>,
}

impl CompatibilityRelation {
    pub fn new<I, A, B>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        let pairs: BTreeSet<(String, String)> = pairs.into_iter().map(|(a, b)| (a.into(), b.into())).collect();
        if pairs.is_empty() {
            return Err(Error::Invalid("compatibility relation is empty".into()));
        }
        if let Some((a, b)) = pairs.iter().find(|(a, b)| a.is_empty() || b.is_empty()) {
            return Err(Error::Invalid(format!("empty label in pair ({a}, {b})")));
        }
        Ok(CompatibilityRelation { pairs })
    }

    /// Every pair of the two bases.
    pub fn full(a: &Basis, b: &Basis) -> Self {
        let pairs = a
            .names()
            .into_iter()
            .flat_map(|x| b.names().into_iter().map(move |y| (x.clone(), y)))
            .collect();
        CompatibilityRelation { pairs }
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.pairs.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, a: &str, b: &str) -> bool {
        self.pairs.contains(&(a.to_string(), b.to_string()))
    }

    fn mask(&self, a: &Basis, b: &Basis) -> Result<Vec<bool>> {
        let mut mask = vec![false; a.len() * b.len()];
        for (x, y) in &self.pairs {
            let i = a.require(x)?;
            let j = b.require(y)?;
            mask[i * b.len() + j] = true;
        }
        Ok(mask)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationFile {
    #[serde(default)]
    #[allow(dead_code)]
    concept_a: Option<String>,
    #[serde(default)]
    #[allow(dead_code)]
    concept_b: Option<String>,
    pairs: Vec<(String, String)>,
}

/// Reads a relation from TOML:
///
/// ```toml
/// concept_a = "pet"
/// concept_b = "food"
/// pairs = [["Roller", "Royal Canin"], ["Felix", "Eukanuba"]]
/// ```
pub fn parse_relation(source: &str) -> Result<CompatibilityRelation> {
    let file: RelationFile = toml::from_str(source).map_err(|e| toml_error(source, &e))?;
    CompatibilityRelation::new(file.pairs)
}

pub(crate) fn toml_error(source: &str, e: &toml::de::Error) -> Error {
    let (line, column) = match e.span() {
        Some(span) => {
            let before = &source[..span.start.min(source.len())];
            let line = before.matches('\n').count() + 1;
            let column = before.len() - before.rfind('\n').map_or(0, |p| p + 1) + 1;
            (line, column)
        }
        None => (0, 0),
    };
    Error::parse(line, column, e.message().to_string())
}

/// Unit-norm amplitudes over exemplar pairs, zero outside a compatibility relation.
#[derive(Clone, Debug, PartialEq)]
pub struct EntangledState {
    basis_a: Basis,
    basis_b: Basis,
    allowed: Vec<bool>,
    // row-major, |A| x |B|
    amplitudes: Vec<Complex64>,
}

impl EntangledState {
    /// Normalizes raw pair amplitudes. Entries outside `relation` must be zero;
    /// `None` allows every pair.
    pub fn from_amplitudes(
        basis_a: Basis,
        basis_b: Basis,
        relation: Option<&CompatibilityRelation>,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self> {
        let dim = basis_a.len() * basis_b.len();
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: amplitudes.len(),
            });
        }
        let allowed = match relation {
            Some(r) => r.mask(&basis_a, &basis_b)?,
            None => vec![true; dim],
        };
        if let Some(k) = (0..dim).find(|&k| !allowed[k] && amplitudes[k] != Complex64::new(0.0, 0.0)) {
            return Err(Error::Invalid(format!(
                "nonzero amplitude on incompatible pair ({}, {})",
                basis_a.labels()[k / basis_b.len()],
                basis_b.labels()[k % basis_b.len()]
            )));
        }
        let state = hilbert::normalize(basis_a.product(&basis_b), amplitudes)?;
        Ok(EntangledState {
            basis_a,
            basis_b,
            allowed,
            amplitudes: state.amplitudes().to_vec(),
        })
    }

    pub fn basis_a(&self) -> &Basis {
        &self.basis_a
    }

    pub fn basis_b(&self) -> &Basis {
        &self.basis_b
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, a: &str, b: &str) -> Result<Complex64> {
        let i = self.basis_a.require(a)?;
        let j = self.basis_b.require(b)?;
        Ok(self.amplitudes[i * self.basis_b.len() + j])
    }

    pub fn probability(&self, a: &str, b: &str) -> Result<f64> {
        Ok(self.amplitude(a, b)?.norm_sqr())
    }

    /// Pairs carrying weight above `tol`, with their probabilities.
    pub fn support(&self, tol: f64) -> Vec<(String, String, f64)> {
        let nb = self.basis_b.len();
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > tol)
            .map(|(k, a)| {
                (
                    self.basis_a.labels()[k / nb].to_string(),
                    self.basis_b.labels()[k % nb].to_string(),
                    a.norm_sqr(),
                )
            })
            .collect()
    }

    /// The same amplitudes as a vector over the pair basis.
    pub fn to_state_vector(&self) -> StateVector {
        hilbert::normalize(self.basis_a.product(&self.basis_b), self.amplitudes.clone())
            .expect("entangled states are unit norm")
    }

    fn factor_basis(&self, side: Side) -> &Basis {
        match side {
            Side::A => &self.basis_a,
            Side::B => &self.basis_b,
        }
    }
}

/// Combines two concept distributions under `relation`.
pub fn combine(
    pa: &ContextDistribution,
    pb: &ContextDistribution,
    relation: &CompatibilityRelation,
) -> Result<EntangledState> {
    let basis_a = pa.exemplars().clone();
    let basis_b = pb.exemplars().clone();
    let allowed = relation.mask(&basis_a, &basis_b)?;
    let nb = basis_b.len();
    let amplitudes: Vec<Complex64> = (0..basis_a.len() * nb)
        .map(|k| {
            let w = if allowed[k] {
                pa.probabilities()[k / nb] * pb.probabilities()[k % nb]
            } else {
                0.0
            };
            Complex64::new(w.sqrt(), 0.0)
        })
        .collect();
    if amplitudes.iter().all(|a| a.norm_sqr() == 0.0) {
        return Err(Error::IncompatibleConcepts(format!(
            "no pair of the relation has positive weight under `{}` and `{}`",
            pa.context(),
            pb.context()
        )));
    }
    EntangledState::from_amplitudes(basis_a, basis_b, Some(relation), amplitudes)
}

/// `<psi| A (x) B |psi>`.
pub fn joint_expectation(s: &EntangledState, a: &Observable, b: &Observable) -> Result<f64> {
    s.basis_a.ensure_same(a.basis())?;
    s.basis_b.ensure_same(b.basis())?;
    let (na, nb) = (s.basis_a.len(), s.basis_b.len());
    if let (Some(sa), Some(sb)) = (a.signs(), b.signs()) {
        return Ok((0..na * nb)
            .map(|k| sa[k / nb].value() * sb[k % nb].value() * s.amplitudes[k].norm_sqr())
            .sum());
    }
    let mut total = Complex64::new(0.0, 0.0);
    for x in 0..na {
        for y in 0..nb {
            let bra = s.amplitudes[x * nb + y].conj();
            if bra == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut ket = Complex64::new(0.0, 0.0);
            for x2 in 0..na {
                let ax = a.element(x, x2);
                if ax == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for y2 in 0..nb {
                    ket += ax * b.element(y, y2) * s.amplitudes[x2 * nb + y2];
                }
            }
            total += bra * ket;
        }
    }
    Ok(total.re)
}

/// `<psi| A (x) I |psi>` (side A) or `<psi| I (x) B |psi>` (side B).
pub fn local_expectation(s: &EntangledState, side: Side, obs: &Observable) -> Result<f64> {
    let identity_on = |basis: &Basis| Observable::constant(basis.clone(), hilbert::Sign::Plus);
    match side {
        Side::A => joint_expectation(s, obs, &identity_on(&s.basis_b)),
        Side::B => joint_expectation(s, &identity_on(&s.basis_a), obs),
    }
}

/// 2x2 correlation table from two observables per side, with singles.
pub fn correlation_table(
    s: &EntangledState,
    side_a: [&Observable; 2],
    side_b: [&Observable; 2],
) -> Result<CorrelationTable> {
    let mut joint = [[0.0; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            joint[r][c] = clamp_unit(joint_expectation(s, side_a[r], side_b[c])?);
        }
    }
    let singles = Singles {
        rows: [
            clamp_unit(local_expectation(s, Side::A, side_a[0])?),
            clamp_unit(local_expectation(s, Side::A, side_a[1])?),
        ],
        cols: [
            clamp_unit(local_expectation(s, Side::B, side_b[0])?),
            clamp_unit(local_expectation(s, Side::B, side_b[1])?),
        ],
    };
    CorrelationTable::new(joint)?.with_singles(singles)
}

// Round-off can push an exact +-1 expectation a few ulps outside [-1, 1].
fn clamp_unit(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

/// Diagonal weights summed over the other factor.
pub fn marginal(s: &EntangledState, side: Side) -> ContextDistribution {
    let (na, nb) = (s.basis_a.len(), s.basis_b.len());
    let mut weights = vec![0.0; s.factor_basis(side).len()];
    for k in 0..na * nb {
        let idx = match side {
            Side::A => k / nb,
            Side::B => k % nb,
        };
        weights[idx] += s.amplitudes[k].norm_sqr();
    }
    let name = match side {
        Side::A => "marginal A",
        Side::B => "marginal B",
    };
    ContextDistribution::from_weights(name, s.factor_basis(side).clone(), &weights)
        .expect("unit-norm state has positive mass")
}

/// Projects one factor onto `exemplar` and renormalizes.
pub fn conditional_collapse(s: &EntangledState, side: Side, exemplar: &str) -> Result<EntangledState> {
    let idx = s.factor_basis(side).require(exemplar)?;
    let nb = s.basis_b.len();
    let keep = |k: usize| match side {
        Side::A => k / nb == idx,
        Side::B => k % nb == idx,
    };
    let amplitudes: Vec<Complex64> = s
        .amplitudes
        .iter()
        .enumerate()
        .map(|(k, &a)| if keep(k) { a } else { Complex64::new(0.0, 0.0) })
        .collect();
    let probability: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    if probability <= DEFAULT_TOL {
        return Err(Error::IncompatibleContext { probability });
    }
    let state = hilbert::normalize(s.basis_a.product(&s.basis_b), amplitudes)?;
    Ok(EntangledState {
        basis_a: s.basis_a.clone(),
        basis_b: s.basis_b.clone(),
        allowed: s.allowed.clone(),
        amplitudes: state.amplitudes().to_vec(),
    })
}

/// Combined typicality of `exemplar` minus its larger single-concept
/// typicality. Positive means the combination favors it more than either
/// constituent does.
pub fn guppy_gap(
    s: &EntangledState,
    pa: &ContextDistribution,
    pb: &ContextDistribution,
    exemplar: &str,
) -> Result<f64> {
    let single_a = pa.probability(exemplar)?;
    let single_b = pb.probability(exemplar)?;
    let combined = marginal(s, Side::A).probability(exemplar)?;
    Ok(combined - single_a.max(single_b))
}
