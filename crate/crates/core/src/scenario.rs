//! Scenario files for the Bell and realizability commands.
//!
//! TOML with optional side labels and either a case-C probability or four
//! explicit joints:
//!
//! ```toml
//! rows = ["e", "g"]
//! cols = ["f", "g"]
//! joint = [[-1.0, 1.0], [1.0, 1.0]]
//! singles = { rows = [1.0, 1.0], cols = [1.0, 1.0] }
//! ```
//!
//! or `lambda = 0.25` in place of `joint`, which builds the pet/food table.

use serde::Deserialize;

use crate::bell::{pet_food_table, CorrelationTable, PetFoodScenario, Singles};
use crate::entangle::toml_error;
use crate::error::{Error, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    name: Option<String>,
    rows: Option<[String; 2]>,
    cols: Option<[String; 2]>,
    lambda: Option<f64>,
    joint: Option<[[f64; 2]; 2]>,
    singles: Option<SinglesFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SinglesFile {
    rows: [f64; 2],
    cols: [f64; 2],
}

fn labels(l: &[String; 2]) -> [&str; 2] {
    [l[0].as_str(), l[1].as_str()]
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: Option<String>,
    pub case_c: Option<f64>,
    pub table: CorrelationTable,
}

pub fn parse_scenario(source: &str) -> Result<Scenario> {
    let file: ScenarioFile = toml::from_str(source).map_err(|e| toml_error(source, &e))?;
    let rows = file.rows.unwrap_or_else(|| ["e".into(), "g".into()]);
    let cols = file.cols.unwrap_or_else(|| ["f".into(), "g".into()]);

    let (table, case_c) = match (file.lambda, file.joint) {
        (Some(_), Some(_)) => {
            return Err(Error::Invalid("scenario sets both `lambda` and `joint`".into()));
        }
        (None, None) => {
            return Err(Error::Invalid("scenario needs `lambda` or `joint`".into()));
        }
        (Some(lambda), None) => {
            let t = pet_food_table(&PetFoodScenario::new(lambda)?);
            let t = CorrelationTable::with_labels(labels(&rows), labels(&cols), t.joint())?
                .with_singles(*t.singles().expect("pet/food table carries singles"))?;
            (t, Some(lambda))
        }
        (None, Some(joint)) => (
            CorrelationTable::with_labels(labels(&rows), labels(&cols), joint)?,
            None,
        ),
    };
    let table = match file.singles {
        Some(s) => table.with_singles(Singles {
            rows: s.rows,
            cols: s.cols,
        })?,
        None => table,
    };
    Ok(Scenario {
        name: file.name,
        case_c,
        table,
    })
}
