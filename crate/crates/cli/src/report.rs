//! The report emitted by every command, as JSON or aligned text.
//!
//! All mathematical values are strings in the expression grammar of the
//! input format, so they can be read back exactly.

use std::fmt::{self, Write as _};

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

/// String pairs serialized as a JSON object in insertion order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Ordered(pub Vec<(String, String)>);

impl Ordered {
    pub fn push(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.0.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

impl Serialize for Ordered {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StageRecord {
    pub name: &'static str,
    /// `ok` or `failed`.
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FrameSection {
    pub consistent: bool,
    /// `d(d e)` for every basis form and coordinate, then failing relations.
    pub residuals: Ordered,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegrandSection {
    pub form: String,
    pub transcendental_factor: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub volume_form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficient: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub volume: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integral: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GaugeSection {
    pub element: Ordered,
    pub passed: bool,
    /// Transformed slot minus the closed-form law.
    pub slot_residuals: Ordered,
    pub q1_residual: String,
    pub q2_residual: String,
    pub original: Ordered,
    pub transformed: Ordered,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrSection {
    pub passed: bool,
    pub premise: String,
    pub d_incompatible: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conditions: Option<Ordered>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorSection {
    pub kind: &'static str,
    pub message: String,
    pub exit_code: i32,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub input_sha256: String,
    pub status: Status,
    pub stages: Vec<StageRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<Ordered>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curvature: Option<Ordered>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embedding: Option<Ordered>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<Ordered>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<Ordered>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flat: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bianchi: Option<Ordered>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integrand: Option<IntegrandSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gauge: Option<GaugeSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cr: Option<CrSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorSection>,
}

impl ReportDocument {
    pub fn new(command: &str, input_sha256: String) -> Self {
        ReportDocument {
            tool: "flagcalc",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            input_sha256,
            status: Status::Pass,
            stages: Vec::new(),
            frame: None,
            reduction: None,
            curvature: None,
            embedding: None,
            structure: None,
            invariants: None,
            flat: None,
            bianchi: None,
            integrand: None,
            gauge: None,
            cr: None,
            error: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match (&self.error, self.status) {
            (Some(e), _) => e.exit_code,
            (None, Status::Pass) => 0,
            (None, _) => crate::EXIT_FAILURE,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut rows: Vec<(String, String)> = vec![
            ("tool".into(), format!("{} {}", self.tool, self.version)),
            ("command".into(), self.command.clone()),
            ("input sha256".into(), self.input_sha256.clone()),
            ("status".into(), self.status.to_string()),
        ];
        for st in &self.stages {
            let v = match &st.detail {
                Some(d) => format!("{}: {d}", st.status),
                None => st.status.to_string(),
            };
            rows.push((format!("stage {}", st.name), v));
        }
        let mut out = String::new();
        block(&mut out, None, &rows);

        if let Some(f) = &self.frame {
            let mut rows = vec![("consistent".to_string(), f.consistent.to_string())];
            rows.extend(f.residuals.0.iter().cloned());
            block(&mut out, Some("frame"), &rows);
        }
        for (title, section) in [
            ("reduction", &self.reduction),
            ("curvature", &self.curvature),
            ("embedding", &self.embedding),
            ("structure", &self.structure),
            ("invariants", &self.invariants),
        ] {
            if let Some(o) = section {
                block(&mut out, Some(title), &o.0);
            }
        }
        if let Some(flat) = self.flat {
            block(&mut out, Some("flat"), &[("flat".into(), flat.to_string())]);
        }
        if let Some(b) = &self.bianchi {
            block(&mut out, Some("bianchi"), &b.0);
        }
        if let Some(i) = &self.integrand {
            let mut rows = vec![
                ("form".to_string(), i.form.clone()),
                ("transcendental_factor".to_string(), i.transcendental_factor.to_string()),
            ];
            for (k, v) in [
                ("base_form", &i.base_form),
                ("volume_form", &i.volume_form),
                ("coefficient", &i.coefficient),
                ("volume", &i.volume),
                ("integral", &i.integral),
            ] {
                if let Some(v) = v {
                    rows.push((k.to_string(), v.clone()));
                }
            }
            block(&mut out, Some("integrand"), &rows);
        }
        if let Some(g) = &self.gauge {
            let mut rows = vec![("passed".to_string(), g.passed.to_string())];
            rows.extend(g.element.0.iter().map(|(k, v)| (format!("h.{k}"), v.clone())));
            rows.extend(g.slot_residuals.0.iter().map(|(k, v)| (format!("residual {k}"), v.clone())));
            rows.push(("residual Q1".into(), g.q1_residual.clone()));
            rows.push(("residual Q2".into(), g.q2_residual.clone()));
            rows.extend(g.original.0.iter().map(|(k, v)| (format!("original {k}"), v.clone())));
            rows.extend(g.transformed.0.iter().map(|(k, v)| (format!("transformed {k}"), v.clone())));
            block(&mut out, Some("gauge"), &rows);
        }
        if let Some(c) = &self.cr {
            let mut rows = vec![
                ("passed".to_string(), c.passed.to_string()),
                ("premise".to_string(), c.premise.clone()),
                ("d_incompatible".to_string(), c.d_incompatible.join(", ")),
            ];
            if let Some(cond) = &c.conditions {
                rows.extend(cond.0.iter().cloned());
            }
            block(&mut out, Some("cr"), &rows);
        }
        if let Some(e) = &self.error {
            let rows = vec![
                ("kind".to_string(), e.kind.to_string()),
                ("message".to_string(), e.message.clone()),
                ("exit_code".to_string(), e.exit_code.to_string()),
            ];
            block(&mut out, Some("error"), &rows);
        }
        out
    }
}

fn block(out: &mut String, title: Option<&str>, rows: &[(String, String)]) {
    if let Some(t) = title {
        let _ = writeln!(out, "\n[{t}]");
    }
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    for (k, v) in rows {
        let _ = writeln!(out, "{k:<width$}  {v}");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_keeps_insertion_order() {
        let mut o = Ordered::default();
        o.push("Z", 1);
        o.push("A", 2);
        assert_eq!(serde_json::to_string(&o).unwrap(), r#"{"Z":"1","A":"2"}"#);
        assert_eq!(o.get("A"), Some("2"));
    }

    #[test]
    fn text_rows_align() {
        let mut r = ReportDocument::new("check", "00".into());
        let mut o = Ordered::default();
        o.push("Q1", "0");
        o.push("longer", "1");
        r.invariants = Some(o);
        let text = r.to_text();
        assert!(text.contains("\n[invariants]\nQ1      0\nlonger  1\n"), "{text}");
    }
}
