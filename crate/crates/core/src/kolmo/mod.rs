//! Classical (Kolmogorovian) realizability of 2x2 correlation tables.
//!
//! A table is classical when it is a convex mixture of the 16 deterministic
//! strategies, each fixing every outcome in advance. Two independent routes
//! decide this: a linear feasibility program over the strategy weights, and
//! enumeration of the eight CHSH forms (valid for joints-only tables). With
//! singles present the local polytope also has sixteen positivity facets,
//! which supply the witness when no CHSH form is violated.

mod simplex;

use std::fmt;

use serde::Serialize;

use crate::bell::{bell_value_all_forms, strongest_form, BellForm, CorrelationTable, CLASSICAL_BOUND, TSIRELSON_BOUND};
use crate::hilbert::Sign;

/// Reconstruction tolerance for feasible weights.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Slack at the classical and Tsirelson band boundaries.
pub const BAND_TOL: f64 = 1e-12;

/// Outcomes (A(e), A(g)) on side A and (B(f), B(g)) on side B.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DeterministicStrategy {
    pub a: [Sign; 2],
    pub b: [Sign; 2],
}

impl DeterministicStrategy {
    pub fn joint(&self, row: usize, col: usize) -> f64 {
        (self.a[row] * self.b[col]).value()
    }

    /// Joints in row-major order followed by A(e), A(g), B(f), B(g).
    pub fn expectations(&self) -> [f64; 8] {
        [
            self.joint(0, 0),
            self.joint(0, 1),
            self.joint(1, 0),
            self.joint(1, 1),
            self.a[0].value(),
            self.a[1].value(),
            self.b[0].value(),
            self.b[1].value(),
        ]
    }
}

impl fmt::Display for DeterministicStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a[0], self.a[1], self.b[0], self.b[1])
    }
}

/// All 16 strategies; index bits from most to least significant pick a minus
/// for A(e), A(g), B(f), B(g).
pub fn enumerate_strategies() -> Vec<DeterministicStrategy> {
    (0..16u8)
        .map(|i| {
            let s = |bit: u8| if i >> bit & 1 == 1 { Sign::Minus } else { Sign::Plus };
            DeterministicStrategy {
                a: [s(3), s(2)],
                b: [s(1), s(0)],
            }
        })
        .collect()
}

/// A facet of the local polytope.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Facet {
    /// CHSH form, bound 2.
    Chsh { form: BellForm },
    /// P(a, b | row, col) >= 0 written in correlators:
    /// -(a E_A + b E_B + a b E_AB) <= 1.
    Positivity { row: usize, col: usize, a: Sign, b: Sign },
}

impl Facet {
    pub fn bound(&self) -> f64 {
        match self {
            Facet::Chsh { .. } => CLASSICAL_BOUND,
            Facet::Positivity { .. } => 1.0,
        }
    }

    /// Left-hand side on `t`; `None` for a positivity facet on a table without singles.
    pub fn evaluate(&self, t: &CorrelationTable) -> Option<f64> {
        match *self {
            Facet::Chsh { form } => Some(form.evaluate(t)),
            Facet::Positivity { row, col, a, b } => {
                let s = t.singles()?;
                let (a, b) = (a.value(), b.value());
                Some(-(a * s.rows[row] + b * s.cols[col] + a * b * t.get(row, col)))
            }
        }
    }

    fn all() -> Vec<Facet> {
        let mut out: Vec<Facet> = BellForm::all().into_iter().map(|form| Facet::Chsh { form }).collect();
        for row in 0..2 {
            for col in 0..2 {
                for a in Sign::BOTH {
                    for b in Sign::BOTH {
                        out.push(Facet::Positivity { row, col, a, b });
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub facet: Facet,
    pub value: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Realizability {
    Feasible {
        /// One weight per strategy, in [`enumerate_strategies`] order.
        weights: Vec<(DeterministicStrategy, f64)>,
        max_residual: f64,
    },
    Infeasible {
        witness: Witness,
        infeasibility: f64,
    },
}

impl Realizability {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Realizability::Feasible { .. })
    }

    pub fn weights(&self) -> Option<&[(DeterministicStrategy, f64)]> {
        match self {
            Realizability::Feasible { weights, .. } => Some(weights),
            Realizability::Infeasible { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Realizability::Infeasible { witness, .. } => Some(witness),
            Realizability::Feasible { .. } => None,
        }
    }
}

/// Expectations the strategies must reproduce: joints, then singles if present.
fn targets(t: &CorrelationTable) -> Vec<f64> {
    let mut out = t.joint_values().to_vec();
    if let Some(s) = t.singles() {
        out.extend_from_slice(&s.values());
    }
    out
}

/// Largest deviation between the mixture's expectations and the table's.
pub fn reconstruction_residual(t: &CorrelationTable, weights: &[(DeterministicStrategy, f64)]) -> f64 {
    let want = targets(t);
    let mut got = vec![0.0; want.len()];
    for (strategy, w) in weights {
        for (g, e) in got.iter_mut().zip(strategy.expectations()) {
            *g += w * e;
        }
    }
    let mass: f64 = weights.iter().map(|(_, w)| w).sum();
    want.iter()
        .zip(&got)
        .map(|(w, g)| (w - g).abs())
        .fold((mass - 1.0).abs(), f64::max)
}

/// Solves for convex strategy weights reproducing every expectation of `t`.
pub fn realizable(t: &CorrelationTable) -> Realizability {
    let strategies = enumerate_strategies();
    let want = targets(t);
    let mut a = vec![vec![1.0; strategies.len()]];
    let mut b = vec![1.0];
    for (k, &target) in want.iter().enumerate() {
        a.push(strategies.iter().map(|s| s.expectations()[k]).collect());
        b.push(target);
    }
    let sol = simplex::phase_one(&a, &b);
    let weights: Vec<(DeterministicStrategy, f64)> = strategies.into_iter().zip(sol.x).collect();
    let max_residual = reconstruction_residual(t, &weights);
    if sol.infeasibility <= FEASIBILITY_TOL && max_residual <= FEASIBILITY_TOL {
        Realizability::Feasible { weights, max_residual }
    } else {
        Realizability::Infeasible {
            witness: strongest_witness(t),
            infeasibility: sol.infeasibility,
        }
    }
}

/// Facet with the largest excess over its bound.
pub fn strongest_witness(t: &CorrelationTable) -> Witness {
    Facet::all()
        .into_iter()
        .filter_map(|facet| {
            facet.evaluate(t).map(|value| Witness {
                facet,
                value,
                bound: facet.bound(),
            })
        })
        .fold(None, |best: Option<Witness>, w| match best {
            Some(b) if b.value - b.bound >= w.value - w.bound => Some(b),
            _ => Some(w),
        })
        .expect("CHSH facets always evaluate")
}

/// Joints-only test: no CHSH form exceeds 2.
pub fn is_kolmogorovian(t: &CorrelationTable) -> bool {
    bell_value_all_forms(t) <= CLASSICAL_BOUND + BAND_TOL
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Band {
    Classical,
    QuantumAchievable,
    SupraQuantum,
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Band::Classical => "classical",
            Band::QuantumAchievable => "quantum-achievable",
            Band::SupraQuantum => "supra-quantum",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub band: Band,
    pub value: f64,
    pub form: BellForm,
}

pub fn classify(t: &CorrelationTable) -> Classification {
    let (form, value) = strongest_form(t);
    let band = if value <= CLASSICAL_BOUND + BAND_TOL {
        Band::Classical
    } else if value <= TSIRELSON_BOUND + BAND_TOL {
        Band::QuantumAchievable
    } else {
        Band::SupraQuantum
    };
    Classification { band, value, form }
}
