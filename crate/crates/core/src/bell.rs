//! Bell functionals on 2x2 measurement scenarios.
//!
//! Side A has two contexts (rows, `e` and `g` in the pet/food story), side B
//! has two contexts (columns, `f` and `g`). A [`CorrelationTable`] holds the four
//! joint expectations and, optionally, the four single-side expectations.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::Sign;

/// Classical bound of every CHSH-type form.
pub const CLASSICAL_BOUND: f64 = 2.0;
/// Largest CHSH value reachable with product measurements on a shared state.
pub const TSIRELSON_BOUND: f64 = 2.0 * std::f64::consts::SQRT_2;
/// Slack applied to the strict `> 2` violation test.
pub const VIOLATION_TOL: f64 = 1e-12;

/// Single-side expectations: `rows[i]` is E(row_i, p), `cols[j]` is E(p, col_j).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Singles {
    pub rows: [f64; 2],
    pub cols: [f64; 2],
}

impl Singles {
    pub fn from_signs(rows: [Sign; 2], cols: [Sign; 2]) -> Self {
        Singles {
            rows: rows.map(Sign::value),
            cols: cols.map(Sign::value),
        }
    }

    pub fn values(&self) -> [f64; 4] {
        [self.rows[0], self.rows[1], self.cols[0], self.cols[1]]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationTable {
    rows: [String; 2],
    cols: [String; 2],
    joint: [[f64; 2]; 2],
    singles: Option<Singles>,
}

fn check_unit(name: String, value: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::out_of_range(name, value, -1.0, 1.0))
    }
}

impl CorrelationTable {
    /// Joint expectations with the default labels (rows `e`, `g`; columns `f`, `g`).
    pub fn new(joint: [[f64; 2]; 2]) -> Result<Self> {
        Self::with_labels(["e", "g"], ["f", "g"], joint)
    }

    pub fn with_labels(rows: [&str; 2], cols: [&str; 2], joint: [[f64; 2]; 2]) -> Result<Self> {
        let rows = rows.map(str::to_string);
        let cols = cols.map(str::to_string);
        for r in 0..2 {
            for c in 0..2 {
                check_unit(format!("E({}, {})", rows[r], cols[c]), joint[r][c])?;
            }
        }
        Ok(CorrelationTable {
            rows,
            cols,
            joint,
            singles: None,
        })
    }

    pub fn with_singles(mut self, singles: Singles) -> Result<Self> {
        for i in 0..2 {
            check_unit(format!("E({}, p)", self.rows[i]), singles.rows[i])?;
            check_unit(format!("E(p, {})", self.cols[i]), singles.cols[i])?;
        }
        self.singles = Some(singles);
        Ok(self)
    }

    /// Joints generated by the product equalities E(a, b) = E(a, p) E(p, b).
    pub fn from_product(singles: Singles) -> Result<Self> {
        let mut joint = [[0.0; 2]; 2];
        for (r, row) in joint.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = singles.rows[r] * singles.cols[c];
            }
        }
        Self::new(joint)?.with_singles(singles)
    }

    pub fn rows(&self) -> &[String; 2] {
        &self.rows
    }

    pub fn cols(&self) -> &[String; 2] {
        &self.cols
    }

    pub fn joint(&self) -> [[f64; 2]; 2] {
        self.joint
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.joint[row][col]
    }

    pub fn singles(&self) -> Option<&Singles> {
        self.singles.as_ref()
    }

    /// Joints in the order E(r0,c0), E(r0,c1), E(r1,c0), E(r1,c1).
    pub fn joint_values(&self) -> [f64; 4] {
        [self.joint[0][0], self.joint[0][1], self.joint[1][0], self.joint[1][1]]
    }

    pub fn cell_name(&self, row: usize, col: usize) -> String {
        format!("E({}, {})", self.rows[row], self.cols[col])
    }

    /// Same joints, singles dropped.
    pub fn joints_only(&self) -> Self {
        CorrelationTable {
            singles: None,
            ..self.clone()
        }
    }

    /// Entry-wise convex combination `w * self + (1 - w) * other`.
    pub fn mix(&self, other: &Self, w: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::out_of_range("mixing weight", w, 0.0, 1.0));
        }
        let joint: [[f64; 2]; 2] =
            std::array::from_fn(|r| std::array::from_fn(|c| w * self.joint[r][c] + (1.0 - w) * other.joint[r][c]));
        let table = CorrelationTable {
            joint,
            singles: None,
            ..self.clone()
        };
        match (self.singles, other.singles) {
            (Some(a), Some(b)) => {
                let blend = |x: [f64; 2], y: [f64; 2]| [w * x[0] + (1.0 - w) * y[0], w * x[1] + (1.0 - w) * y[1]];
                table.with_singles(Singles {
                    rows: blend(a.rows, b.rows),
                    cols: blend(a.cols, b.cols),
                })
            }
            _ => Ok(table),
        }
    }
}

/// |E(e,f) - E(e,g)| + |E(g,f) + E(g,g)|.
pub fn bell_value(t: &CorrelationTable) -> f64 {
    (t.get(0, 0) - t.get(0, 1)).abs() + (t.get(1, 0) + t.get(1, 1)).abs()
}

/// One of the eight CHSH sign placements: every joint enters with `+`,
/// except the one at `minus` (row-major cell index), and the sum is
/// multiplied by `sign`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BellForm {
    pub minus: usize,
    pub sign: Sign,
}

impl BellForm {
    pub fn all() -> [BellForm; 8] {
        let mut out = [BellForm {
            minus: 0,
            sign: Sign::Plus,
        }; 8];
        for (k, form) in out.iter_mut().enumerate() {
            form.minus = k / 2;
            form.sign = Sign::BOTH[k % 2];
        }
        out
    }

    pub fn coefficients(&self) -> [f64; 4] {
        let mut c = [self.sign.value(); 4];
        c[self.minus] = -c[self.minus];
        c
    }

    pub fn evaluate(&self, t: &CorrelationTable) -> f64 {
        self.coefficients()
            .iter()
            .zip(t.joint_values())
            .map(|(c, e)| c * e)
            .sum()
    }
}

impl fmt::Display for BellForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["E11", "E12", "E21", "E22"];
        if self.sign == Sign::Minus {
            f.write_str("-(")?;
        }
        for (k, name) in names.iter().enumerate() {
            let op = match (k, k == self.minus) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            write!(f, "{op}{name}")?;
        }
        if self.sign == Sign::Minus {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// The form with the largest value on `t` and that value.
pub fn strongest_form(t: &CorrelationTable) -> (BellForm, f64) {
    BellForm::all()
        .into_iter()
        .map(|f| (f, f.evaluate(t)))
        .fold(None, |best: Option<(BellForm, f64)>, cur| match best {
            Some(b) if b.1 >= cur.1 => Some(b),
            _ => Some(cur),
        })
        .expect("eight forms")
}

/// Maximum over all eight CHSH forms.
pub fn bell_value_all_forms(t: &CorrelationTable) -> f64 {
    strongest_form(t).1
}

pub fn is_violated(value: f64) -> bool {
    value > CLASSICAL_BOUND + VIOLATION_TOL
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProductEqualityCheck {
    /// `cells[r][c]` holds when |E(r, p, c) - E(r, p) E(p, c)| <= tol.
    pub cells: [[bool; 2]; 2],
    pub all_hold: bool,
}

/// Tests the four product equalities `E(a, b) = E(a, p) * E(p, b)`.
pub fn product_equality_check(singles: &Singles, joint: &[[f64; 2]; 2], tol: f64) -> ProductEqualityCheck {
    let mut cells = [[false; 2]; 2];
    for (r, row) in cells.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = (joint[r][c] - singles.rows[r] * singles.cols[c]).abs() <= tol;
        }
    }
    ProductEqualityCheck {
        cells,
        all_hold: cells.iter().flatten().all(|&h| h),
    }
}

/// The two-pets story with probability `case_c` that Roller really is eating
/// the cat food, against the alternative that one of the sisters is mistaken.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PetFoodScenario {
    case_c: f64,
}

impl PetFoodScenario {
    pub fn new(case_c: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&case_c) {
            Ok(PetFoodScenario { case_c })
        } else {
            Err(Error::out_of_range("lambda", case_c, 0.0, 1.0))
        }
    }

    pub fn case_c(&self) -> f64 {
        self.case_c
    }
}

/// Case C contributes +1 to E(e, f) and cases A/B contribute -1, so
/// E(e, f) = 2 lambda - 1. The other three joints and all singles are +1.
pub fn pet_food_table(s: &PetFoodScenario) -> CorrelationTable {
    let ef = 2.0 * s.case_c - 1.0;
    CorrelationTable::with_labels(["e", "g"], ["f", "g"], [[ef, 1.0], [1.0, 1.0]])
        .and_then(|t| {
            t.with_singles(Singles {
                rows: [1.0, 1.0],
                cols: [1.0, 1.0],
            })
        })
        .expect("lambda in [0, 1] keeps every entry in [-1, 1]")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub bell_value: f64,
    pub violated: bool,
}

/// Evaluates the pet/food scenario at each grid point, in grid order.
pub fn sweep_case_c(grid: &[f64]) -> Result<Vec<SweepRow>> {
    grid.par_iter()
        .enumerate()
        .map(|(i, &lambda)| {
            let scenario = PetFoodScenario::new(lambda)
                .map_err(|_| Error::out_of_range(format!("lambda at grid point {i}"), lambda, 0.0, 1.0))?;
            let value = bell_value(&pet_food_table(&scenario));
            Ok(SweepRow {
                lambda,
                bell_value: value,
                violated: is_violated(value),
            })
        })
        .collect()
}
