//! Dense complex state spaces over labeled bases.
//!
//! Dimensions in this crate are at most a few dozen, so everything here is a
//! plain `Vec<Complex64>` indexed by basis position. Values are immutable once
//! built; every operation returns a fresh value.

use std::fmt;
use std::ops::{Mul, Neg};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numeric slack used for norm and probability checks unless a call overrides it.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Name of a basis direction. Tensor products produce ordered pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Atom(String),
    Pair(Box<Label>, Box<Label>),
}

impl Label {
    pub fn atom(name: impl Into<String>) -> Self {
        Label::Atom(name.into())
    }

    pub fn pair(left: Label, right: Label) -> Self {
        Label::Pair(Box::new(left), Box::new(right))
    }

    /// Canonical re-pairing `((a, b), c)` to `(a, (b, c))`.
    pub fn reassociate_right(&self) -> Option<Label> {
        match self {
            Label::Pair(ab, c) => match ab.as_ref() {
                Label::Pair(a, b) => Some(Label::pair(
                    a.as_ref().clone(),
                    Label::pair(b.as_ref().clone(), c.as_ref().clone()),
                )),
                Label::Atom(_) => None,
            },
            Label::Atom(_) => None,
        }
    }

    fn is_well_formed(&self) -> bool {
        match self {
            Label::Atom(name) => !name.is_empty(),
            Label::Pair(a, b) => a.is_well_formed() && b.is_well_formed(),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Atom(name) => f.write_str(name),
            Label::Pair(a, b) => write!(f, "({a}, {b})"),
        }
    }
}

impl From<&str> for Label {
    fn from(name: &str) -> Self {
        Label::atom(name)
    }
}

impl From<String> for Label {
    fn from(name: String) -> Self {
        Label::Atom(name)
    }
}

impl From<&String> for Label {
    fn from(name: &String) -> Self {
        Label::Atom(name.clone())
    }
}

/// Ordered list of distinct, non-empty labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Basis {
    labels: Vec<Label>,
}

impl Basis {
    pub fn new<I, L>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = L>,
        L: Into<Label>,
    {
        let labels: Vec<Label> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidBasis("basis has no labels".into()));
        }
        for (i, label) in labels.iter().enumerate() {
            if !label.is_well_formed() {
                return Err(Error::InvalidBasis(format!("empty label at position {i}")));
            }
            if labels[..i].contains(label) {
                return Err(Error::InvalidBasis(format!("duplicate label `{label}`")));
            }
        }
        Ok(Basis { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn index_of(&self, label: &Label) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Position of an atomic label by name.
    pub fn position(&self, name: &str) -> Option<usize> {
        self.labels
            .iter()
            .position(|l| matches!(l, Label::Atom(n) if n == name))
    }

    pub(crate) fn require(&self, name: &str) -> Result<usize> {
        self.position(name).ok_or_else(|| Error::UnknownLabel {
            label: name.to_string(),
            available: self.names(),
        })
    }

    pub fn names(&self) -> Vec<String> {
        self.labels.iter().map(ToString::to_string).collect()
    }

    /// Basis of ordered pairs, first factor major.
    pub fn product(&self, other: &Basis) -> Basis {
        let labels = self
            .labels
            .iter()
            .flat_map(|a| other.labels.iter().map(move |b| Label::pair(a.clone(), b.clone())))
            .collect();
        Basis { labels }
    }

    pub(crate) fn ensure_same(&self, other: &Basis) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::BasisMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, label) in self.labels.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{label}")?;
        }
        Ok(())
    }
}

/// Outcome of a two-valued measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Unit-norm amplitude vector over a labeled basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    basis: Basis,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, name: &str) -> Option<Complex64> {
        self.basis.position(name).map(|i| self.amplitudes[i])
    }

    pub fn amplitude_at(&self, label: &Label) -> Option<Complex64> {
        self.basis.index_of(label).map(|i| self.amplitudes[i])
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Squared magnitudes in basis order.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Labels whose squared amplitude exceeds `tol`.
    pub fn support(&self, tol: f64) -> Vec<&Label> {
        self.basis
            .labels()
            .iter()
            .zip(&self.amplitudes)
            .filter(|(_, a)| a.norm_sqr() > tol)
            .map(|(l, _)| l)
            .collect()
    }

    pub fn from_real(basis: Basis, amplitudes: &[f64]) -> Result<Self> {
        normalize(basis, amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn basis_state(basis: Basis, name: &str) -> Result<Self> {
        let i = basis.require(name)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); basis.len()];
        amplitudes[i] = Complex64::new(1.0, 0.0);
        Ok(StateVector { basis, amplitudes })
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }
}

fn norm_sqr(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum()
}

/// `<u|v>`, conjugate-linear in `u`.
pub fn inner(u: &StateVector, v: &StateVector) -> Result<Complex64> {
    u.basis.ensure_same(&v.basis)?;
    Ok(u.amplitudes.iter().zip(&v.amplitudes).map(|(a, b)| a.conj() * b).sum())
}

/// Rescales raw amplitudes to unit norm.
pub fn normalize(basis: Basis, amplitudes: Vec<Complex64>) -> Result<StateVector> {
    if amplitudes.len() != basis.len() {
        return Err(Error::DimensionMismatch {
            expected: basis.len(),
            got: amplitudes.len(),
        });
    }
    if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(Error::Invalid("non-finite amplitude".into()));
    }
    let norm = norm_sqr(&amplitudes).sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
    Ok(StateVector { basis, amplitudes })
}

/// Kronecker product of raw amplitude lists, first factor major.
pub fn kron(u: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    u.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect()
}

pub fn tensor(u: &StateVector, v: &StateVector) -> StateVector {
    StateVector {
        basis: u.basis.product(&v.basis),
        amplitudes: kron(&u.amplitudes, &v.amplitudes),
    }
}

/// Orthogonal projector diagonal in the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projector {
    basis: Basis,
    mask: Vec<bool>,
}

impl Projector {
    /// Projector onto the named labels. An empty list is rejected; use [`Projector::zero`].
    pub fn onto(basis: Basis, names: &[&str]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Invalid("projector support is empty".into()));
        }
        let mut mask = vec![false; basis.len()];
        for name in names {
            mask[basis.require(name)?] = true;
        }
        Ok(Projector { basis, mask })
    }

    pub fn from_mask(basis: Basis, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                got: mask.len(),
            });
        }
        Ok(Projector { basis, mask })
    }

    pub fn identity(basis: Basis) -> Self {
        let mask = vec![true; basis.len()];
        Projector { basis, mask }
    }

    pub fn zero(basis: Basis) -> Self {
        let mask = vec![false; basis.len()];
        Projector { basis, mask }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn contains(&self, index: usize) -> bool {
        self.mask.get(index).copied().unwrap_or(false)
    }

    pub fn support(&self) -> Vec<&Label> {
        self.basis
            .labels()
            .iter()
            .zip(&self.mask)
            .filter(|(_, &m)| m)
            .map(|(l, _)| l)
            .collect()
    }

    pub fn complement(&self) -> Projector {
        Projector {
            basis: self.basis.clone(),
            mask: self.mask.iter().map(|m| !m).collect(),
        }
    }

    fn apply(&self, amplitudes: &[Complex64]) -> Vec<Complex64> {
        amplitudes
            .iter()
            .zip(&self.mask)
            .map(|(&a, &m)| if m { a } else { Complex64::new(0.0, 0.0) })
            .collect()
    }
}

/// Born-rule probability `<v|P|v>`.
pub fn born_prob(p: &Projector, v: &StateVector) -> Result<f64> {
    p.basis.ensure_same(&v.basis)?;
    Ok(norm_sqr(&p.apply(&v.amplitudes)))
}

pub fn collapse(p: &Projector, v: &StateVector) -> Result<StateVector> {
    collapse_with_tol(p, v, DEFAULT_TOL)
}

/// Projects `v` with `p` and renormalizes. Fails when the outcome has
/// probability at or below `tol`.
pub fn collapse_with_tol(p: &Projector, v: &StateVector, tol: f64) -> Result<StateVector> {
    let probability = born_prob(p, v)?;
    if probability <= tol {
        return Err(Error::IncompatibleContext { probability });
    }
    normalize(v.basis.clone(), p.apply(&v.amplitudes))
}

/// Hermitian operator with eigenvalues in {+1, -1}.
///
/// The usual form is a sign per basis label. Non-diagonal observables are built
/// from their +1 eigenspace; they are needed wherever two measurements on the
/// same factor do not commute.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    basis: Basis,
    signs: Option<Vec<Sign>>,
    // row-major, dim x dim
    matrix: Vec<Complex64>,
}

impl Observable {
    pub fn from_signs(basis: Basis, signs: Vec<Sign>) -> Result<Self> {
        if signs.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                got: signs.len(),
            });
        }
        let n = basis.len();
        let mut matrix = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, s) in signs.iter().enumerate() {
            matrix[i * n + i] = Complex64::new(s.value(), 0.0);
        }
        Ok(Observable {
            basis,
            signs: Some(signs),
            matrix,
        })
    }

    /// +1 on the named labels, -1 everywhere else.
    pub fn plus_on(basis: Basis, plus: &[&str]) -> Result<Self> {
        let mut signs = vec![Sign::Minus; basis.len()];
        for name in plus {
            signs[basis.require(name)?] = Sign::Plus;
        }
        Self::from_signs(basis, signs)
    }

    pub fn constant(basis: Basis, sign: Sign) -> Self {
        let signs = vec![sign; basis.len()];
        Self::from_signs(basis, signs).expect("lengths agree")
    }

    /// `2 P - I` where `P` projects onto the span of `plus_space`, which must be
    /// orthonormal within `1e-9`.
    pub fn from_plus_space(basis: Basis, plus_space: &[Vec<Complex64>]) -> Result<Self> {
        let n = basis.len();
        for (i, u) in plus_space.iter().enumerate() {
            if u.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: u.len(),
                });
            }
            for (j, w) in plus_space.iter().enumerate().take(i + 1) {
                let dot: Complex64 = u.iter().zip(w).map(|(a, b)| a.conj() * b).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                if (dot - want).norm() > 1e-9 {
                    return Err(Error::InvalidObservable(format!(
                        "+1 eigenspace vectors {j} and {i} are not orthonormal"
                    )));
                }
            }
        }
        let mut matrix = vec![Complex64::new(0.0, 0.0); n * n];
        for r in 0..n {
            matrix[r * n + r] -= 1.0;
            for c in 0..n {
                for u in plus_space {
                    matrix[r * n + c] += 2.0 * u[r] * u[c].conj();
                }
            }
        }
        Ok(Observable {
            basis,
            signs: None,
            matrix,
        })
    }

    /// Two-level observable `n . sigma` for a Bloch direction `n` (normalized here).
    pub fn qubit(basis: Basis, direction: [f64; 3]) -> Result<Self> {
        if basis.len() != 2 {
            return Err(Error::InvalidObservable(format!(
                "qubit observable needs a 2-label basis, got {}",
                basis.len()
            )));
        }
        let [x, y, z] = direction;
        let len = (x * x + y * y + z * z).sqrt();
        if !len.is_finite() || len <= 0.0 {
            return Err(Error::InvalidObservable("zero Bloch direction".into()));
        }
        let (x, y, z) = (x / len, y / len, z / len);
        let c = |re, im| Complex64::new(re, im);
        let matrix = vec![c(z, 0.0), c(x, -y), c(x, y), c(-z, 0.0)];
        let signs = if x == 0.0 && y == 0.0 {
            Some(vec![Sign::of(z), -Sign::of(z)])
        } else {
            None
        };
        Ok(Observable { basis, signs, matrix })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    /// Per-label signs when the observable is diagonal in the basis.
    pub fn signs(&self) -> Option<&[Sign]> {
        self.signs.as_deref()
    }

    pub fn is_diagonal(&self) -> bool {
        self.signs.is_some()
    }

    pub fn element(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[row * self.basis.len() + col]
    }

    /// Sign-class projector for a diagonal observable.
    pub fn sign_projector(&self, sign: Sign) -> Option<Projector> {
        let signs = self.signs.as_ref()?;
        let mask = signs.iter().map(|&s| s == sign).collect();
        Some(Projector {
            basis: self.basis.clone(),
            mask,
        })
    }

    pub(crate) fn apply(&self, amplitudes: &[Complex64]) -> Vec<Complex64> {
        let n = self.basis.len();
        (0..n)
            .map(|r| {
                self.matrix[r * n..(r + 1) * n]
                    .iter()
                    .zip(amplitudes)
                    .map(|(m, a)| m * a)
                    .sum()
            })
            .collect()
    }
}

/// `<v|A|v>`.
pub fn expectation(a: &Observable, v: &StateVector) -> Result<f64> {
    a.basis.ensure_same(&v.basis)?;
    Ok(match &a.signs {
        Some(signs) => signs
            .iter()
            .zip(&v.amplitudes)
            .map(|(s, amp)| s.value() * amp.norm_sqr())
            .sum(),
        None => v
            .amplitudes
            .iter()
            .zip(a.apply(&v.amplitudes))
            .map(|(u, w)| (u.conj() * w).re)
            .sum(),
    })
}
