//! Oracles that share no code path with the library.
#![allow(dead_code, clippy::needless_range_loop)]

use ctxbell::{entangle, Basis, CorrelationTable, EntangledState, Observable};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Pet typicality ratings: (exemplar, chewing a bone, being taught, weird person).
pub const PET_RATINGS_TABLE: [(&str, f64, f64, f64); 14] = [
    ("rabbit", 0.07, 2.52, 1.77),
    ("cat", 3.96, 4.80, 0.94),
    ("mouse", 0.74, 2.27, 3.31),
    ("bird", 0.42, 3.06, 1.41),
    ("parrot", 0.53, 5.80, 1.57),
    ("goldfish", 0.12, 0.69, 0.83),
    ("hamster", 0.85, 2.72, 1.25),
    ("canary", 0.26, 2.73, 0.86),
    ("guppy", 0.14, 0.68, 0.83),
    ("snake", 0.57, 0.98, 5.64),
    ("spider", 0.26, 0.40, 5.96),
    ("dog", 6.81, 6.78, 0.91),
    ("hedgehog", 0.53, 0.85, 3.48),
    ("guinea pig", 0.58, 2.63, 1.31),
];

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    eig
}

/// `M^T M` for a row-major matrix.
pub fn gram(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = rows[0].len();
    (0..n)
        .map(|i| (0..n).map(|j| rows.iter().map(|r| r[i] * r[j]).sum()).collect())
        .collect()
}

/// Every sign quadruple (A(e), A(g), B(f), B(g)) as +-1 values.
pub fn sign_quadruples() -> Vec<[f64; 4]> {
    let mut out = Vec::new();
    for ae in [1.0, -1.0] {
        for ag in [1.0, -1.0] {
            for bf in [1.0, -1.0] {
                for bg in [1.0, -1.0] {
                    out.push([ae, ag, bf, bg]);
                }
            }
        }
    }
    out
}

/// Direct evaluation of |E1 - E2| + |E3 + E4| and the one-minus-sign forms.
pub fn chsh_max(j: [f64; 4]) -> f64 {
    (0..4)
        .map(|k| (0..4).map(|i| if i == k { -j[i] } else { j[i] }).sum::<f64>().abs())
        .fold(0.0, f64::max)
}

pub fn qubit_basis(prefix: &str) -> Basis {
    Basis::new([format!("{prefix}0"), format!("{prefix}1")]).unwrap()
}

pub fn random_unit3<R: Rng>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        if v.iter().map(|x| x * x).sum::<f64>() > 1e-12 {
            return v;
        }
    }
}

pub fn random_two_qubit_state<R: Rng>(rng: &mut R) -> EntangledState {
    let amps: Vec<Complex64> = (0..4)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    EntangledState::from_amplitudes(qubit_basis("a"), qubit_basis("b"), None, amps).unwrap()
}

/// A +-1 observable on a qubit: a random Bloch direction, or occasionally +-I.
pub fn random_qubit_observable<R: Rng>(rng: &mut R, basis: &Basis) -> Observable {
    match rng.random_range(0..20) {
        0 => Observable::constant(basis.clone(), ctxbell::Sign::Plus),
        1 => Observable::constant(basis.clone(), ctxbell::Sign::Minus),
        _ => Observable::qubit(basis.clone(), random_unit3(rng)).unwrap(),
    }
}

/// Bell state (|00> + |11>)/sqrt2 with A = Z, A' = X, B = (Z+X)/sqrt2, B' = (Z-X)/sqrt2.
pub fn optimal_chsh_table() -> CorrelationTable {
    let (ba, bb) = (qubit_basis("a"), qubit_basis("b"));
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let amps = [h, 0.0, 0.0, h].map(|x| Complex64::new(x, 0.0)).to_vec();
    let state = EntangledState::from_amplitudes(ba.clone(), bb.clone(), None, amps).unwrap();
    let a = Observable::qubit(ba.clone(), [0.0, 0.0, 1.0]).unwrap();
    let a2 = Observable::qubit(ba, [1.0, 0.0, 0.0]).unwrap();
    let b = Observable::qubit(bb.clone(), [1.0, 0.0, 1.0]).unwrap();
    let b2 = Observable::qubit(bb, [-1.0, 0.0, 1.0]).unwrap();
    entangle::correlation_table(&state, [&a, &a2], [&b, &b2]).unwrap()
}
