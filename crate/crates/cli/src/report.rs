use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Output format selected with `--format`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Pretty-printed JSON run report.
    Record,
    /// Tab-separated rows behind a `#` header comment.
    Tsv,
}

/// Plot-ready rows.
#[derive(Debug, Default)]
pub struct Tsv {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Tsv {
    pub fn new(columns: &[&'static str]) -> Self {
        Tsv {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    /// Two-column `key  value` layout.
    pub fn key_values(pairs: Vec<(&str, String)>) -> Self {
        let mut t = Tsv::new(&["key", "value"]);
        for (k, v) in pairs {
            t.push(vec![k.to_string(), v]);
        }
        t
    }
}

pub struct Output {
    pub results: Value,
    pub tsv: Tsv,
}

impl Output {
    pub fn new<T: Serialize>(results: &T, tsv: Tsv) -> Self {
        Output {
            results: serde_json::to_value(results).expect("report types serialize"),
            tsv,
        }
    }
}

#[derive(Serialize)]
struct RunReport<'a> {
    schema_version: u32,
    artifact_version: &'static str,
    command: &'a [String],
    inputs_digest: String,
    results: &'a Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing: Option<Timing>,
}

#[derive(Serialize)]
struct Timing {
    elapsed_ms: f64,
}

/// SHA-256 over the argument list and the bytes of every input file, each
/// length-prefixed.
pub fn inputs_digest(args: &[String], inputs: &[Vec<u8>]) -> String {
    let mut h = Sha256::new();
    for part in args
        .iter()
        .map(|a| a.as_bytes())
        .chain(inputs.iter().map(Vec::as_slice))
    {
        h.update((part.len() as u64).to_le_bytes());
        h.update(part);
    }
    hex::encode(h.finalize())
}

pub fn render(
    format: Format,
    command: &str,
    args: &[String],
    inputs: &[Vec<u8>],
    output: &Output,
    elapsed: Option<Duration>,
) -> String {
    match format {
        Format::Record => {
            let report = RunReport {
                schema_version: ctxbell::SCHEMA_VERSION,
                artifact_version: env!("CARGO_PKG_VERSION"),
                command: args,
                inputs_digest: inputs_digest(args, inputs),
                results: &output.results,
                timing: elapsed.map(|d| Timing {
                    elapsed_ms: d.as_secs_f64() * 1e3,
                }),
            };
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Tsv => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "# ctxbell {command} schema {} version {}",
                ctxbell::SCHEMA_VERSION,
                env!("CARGO_PKG_VERSION")
            );
            if let Some(d) = elapsed {
                let _ = writeln!(s, "# elapsed_ms {}", d.as_secs_f64() * 1e3);
            }
            s.push_str(&output.tsv.columns.join("\t"));
            s.push('\n');
            for row in &output.tsv.rows {
                s.push_str(&row.join("\t"));
                s.push('\n');
            }
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_separates_fields() {
        let a = inputs_digest(&["ab".into(), "c".into()], &[]);
        let b = inputs_digest(&["a".into(), "bc".into()], &[]);
        assert_ne!(a, b);
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn tsv_has_header_comment() {
        let out = Output::new(&1, Tsv::key_values(vec![("x", "1".into())]));
        let s = render(Format::Tsv, "bell", &[], &[], &out, None);
        assert_eq!(s, "# ctxbell bell schema 1 version 0.1.0\nkey\tvalue\nx\t1\n");
    }
}
