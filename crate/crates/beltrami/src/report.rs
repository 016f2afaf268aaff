//! Machine-readable run reports.
//!
//! Every command emits one `Report`: a top-level object {version, seed,
//! config, results}. Results are flat JSON objects (claim verdicts, form
//! components, type evidence rows). All maps are ordered, all randomness is
//! seeded and echoed, so identical configs produce byte-identical output.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "MISMATCH")]
    Mismatch,
    #[serde(rename = "NUMERIC_ONLY_PASS")]
    NumericOnlyPass,
    /// The claim computation itself failed; the error is captured in details.
    #[serde(rename = "ERROR")]
    Error,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Pass => "PASS",
            Verdict::Mismatch => "MISMATCH",
            Verdict::NumericOnlyPass => "NUMERIC_ONLY_PASS",
            Verdict::Error => "ERROR",
        };
        write!(f, "{s}")
    }
}

/// Residuals or differing terms backing a verdict.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Details {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    /// Canonicalized difference computed - expected, present on MISMATCH.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub difference: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Details {
    pub fn note(msg: impl Into<String>) -> Details {
        Details {
            notes: vec![msg.into()],
            ..Details::default()
        }
    }
}

/// Verdict record for one registered formula claim.
#[derive(Debug, Clone, Serialize)]
pub struct ClaimReport {
    pub claim_id: String,
    /// Human-readable pointer to the formula being checked.
    pub anchor: String,
    pub verdict: Verdict,
    /// Canonical display of the claimed form (or a textual statement).
    pub expected: String,
    /// Canonical display of the engine-derived form.
    pub computed: String,
    #[serde(flatten)]
    pub details: Details,
}

impl ClaimReport {
    pub fn error(claim_id: &str, anchor: &str, err: &crate::EngineError) -> ClaimReport {
        ClaimReport {
            claim_id: claim_id.into(),
            anchor: anchor.into(),
            verdict: Verdict::Error,
            expected: String::new(),
            computed: String::new(),
            details: Details::note(format!("{err}")),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub version: String,
    pub seed: u64,
    pub config: BTreeMap<String, String>,
    pub results: Vec<serde_json::Value>,
}

impl Report {
    pub fn new(seed: u64, config: BTreeMap<String, String>) -> Report {
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            config,
            results: Vec::new(),
        }
    }

    pub fn push_claim(&mut self, c: &ClaimReport) {
        self.results
            .push(serde_json::to_value(c).expect("claim serializes"));
    }

    pub fn push_row(&mut self, row: serde_json::Value) {
        self.results.push(row);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// CSV with a header of all keys appearing in any result, sorted.
    pub fn to_csv(&self) -> String {
        let mut keys: Vec<String> = Vec::new();
        for row in &self.results {
            if let serde_json::Value::Object(map) = row {
                for k in map.keys() {
                    if !keys.contains(k) {
                        keys.push(k.clone());
                    }
                }
            }
        }
        keys.sort();
        let mut out = String::new();
        out.push_str(&keys.join(","));
        out.push('\n');
        for row in &self.results {
            let mut fields = Vec::with_capacity(keys.len());
            for k in &keys {
                let cell = match row.get(k) {
                    None | Some(serde_json::Value::Null) => String::new(),
                    Some(serde_json::Value::String(s)) => s.clone(),
                    Some(v) => v.to_string(),
                };
                fields.push(csv_escape(&cell));
            }
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_pretty(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("version: {}\nseed: {}\n", self.version, self.seed));
        for (k, v) in &self.config {
            out.push_str(&format!("config.{k}: {v}\n"));
        }
        for row in &self.results {
            out.push('\n');
            match row {
                serde_json::Value::Object(map) => {
                    for (k, v) in map {
                        match v {
                            serde_json::Value::String(s) => {
                                out.push_str(&format!("{k}: {s}\n"))
                            }
                            other => out.push_str(&format!("{k}: {other}\n")),
                        }
                    }
                }
                other => out.push_str(&format!("{other}\n")),
            }
        }
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Pretty => self.to_pretty(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Pretty,
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_is_deterministic_and_escapes_csv() {
        let mut config = BTreeMap::new();
        config.insert("surface".to_string(), "tube".to_string());
        let mut r = Report::new(42, config.clone());
        r.push_claim(&ClaimReport {
            claim_id: "K-eq7".into(),
            anchor: "Gauss curvature closed form".into(),
            verdict: Verdict::Pass,
            expected: "a, \"b\"".into(),
            computed: "a, \"b\"".into(),
            details: Details::default(),
        });
        let mut r2 = Report::new(42, config);
        r2.push_claim(&ClaimReport {
            claim_id: "K-eq7".into(),
            anchor: "Gauss curvature closed form".into(),
            verdict: Verdict::Pass,
            expected: "a, \"b\"".into(),
            computed: "a, \"b\"".into(),
            details: Details::default(),
        });
        assert_eq!(r.to_json(), r2.to_json());
        let csv = r.to_csv();
        assert!(csv.lines().next().unwrap().starts_with("anchor,claim_id"));
        assert!(csv.contains("\"a, \"\"b\"\"\""));
    }
}
