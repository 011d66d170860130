//! Structured run reports, serialized as JSON or as labeled text lines.

use std::fmt::Write as _;

use serde::Serialize;

use crate::config::RingConfig;
use crate::parse::format_poly;
use crate::poly::{Escape, ModPoly};
use crate::verdict::{IndexConvention, Soundness, Verdict, VerdictKind};
use crate::witt::selftest::CheckReport;

#[derive(Debug, Clone, Serialize)]
pub struct RingInfo {
    pub vars: Vec<String>,
    pub p: u64,
    pub precision: u32,
}

impl RingInfo {
    pub fn of(cfg: &RingConfig) -> Self {
        RingInfo { vars: cfg.vars().to_vec(), p: cfg.p(), precision: cfg.precision() }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_range: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search_bound: Option<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EscapeInfo {
    pub monomial: String,
    pub coefficient: u64,
}

impl EscapeInfo {
    fn of(esc: &Escape, vars: &[String]) -> Self {
        EscapeInfo { monomial: esc.monomial.display(vars).to_string(), coefficient: esc.coefficient }
    }
}

/// A [`Certificate`](crate::verdict::Certificate) with polynomials rendered as text.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CertificateInfo {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplier: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub escape: Option<EscapeInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convention: Option<IndexConvention>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_power: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shifted_also_holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search_bound: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub height: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub escape_element: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test_element: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub elements: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stable: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub ring: RingInfo,
    pub f: String,
    pub parameters: Parameters,
    pub verdict: VerdictKind,
    pub soundness: Soundness,
    pub certificate: CertificateInfo,
}

fn show(g: &Option<ModPoly>) -> Option<String> {
    g.as_ref().map(format_poly)
}

impl Report {
    pub fn new(command: &str, f: &ModPoly, parameters: Parameters, verdict: &Verdict) -> Self {
        let vars = f.cfg().vars();
        let c = &verdict.certificate;
        let certificate = CertificateInfo {
            e: c.e,
            n: c.n,
            c: show(&c.c),
            multiplier: show(&c.multiplier),
            escape: c.escape.as_ref().map(|e| EscapeInfo::of(e, vars)),
            convention: c.convention,
            u_power: c.u_power,
            shifted_also_holds: c.shifted_also_holds,
            degree_bound: c.degree_bound,
            search_bound: c.search_bound,
            height: c.height,
            escape_element: show(&c.escape_element),
            test_element: show(&c.test_element),
            elements: c.elements.iter().map(format_poly).collect(),
            stable: c.stable,
            notes: c.notes.clone(),
        };
        Report {
            command: command.to_string(),
            ring: RingInfo::of(f.cfg()),
            f: format_poly(f),
            parameters,
            verdict: verdict.kind,
            soundness: verdict.soundness,
            certificate,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The same fields as [`to_json`](Self::to_json), one `key: value` per line.
    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("reports serialize");
        let mut out = String::new();
        flatten(&mut out, "", &value);
        out
    }
}

/// Report of a Witt self-test run.
#[derive(Debug, Clone, Serialize)]
pub struct SelfTestReport {
    pub command: String,
    pub p: u64,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

impl SelfTestReport {
    pub fn new(p: u64, n: usize, trials: u64, seed: u64, checks: Vec<CheckReport>) -> Self {
        let passed = checks.iter().all(CheckReport::ok);
        SelfTestReport { command: "witt-selftest".into(), p, n, trials, seed, passed, checks }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\np: {}\nn: {}\ntrials: {}\nseed: {}\n", self.command, self.p, self.n, self.trials, self.seed);
        for c in &self.checks {
            let _ = write!(out, "{}: {} passed, {} failed", c.name, c.passed, c.failed);
            if let Some(ex) = &c.first_counterexample {
                let _ = write!(out, " (first: {ex})");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "result: {}", if self.passed { "PASS" } else { "FAIL" });
        out
    }
}

fn scalar(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(out: &mut String, prefix: &str, v: &serde_json::Value) {
    match v {
        serde_json::Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(out, &key, x);
            }
        }
        serde_json::Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array() && !scalar(x).contains(' ')) => {
            let items: Vec<String> = xs.iter().map(scalar).collect();
            let _ = writeln!(out, "{prefix}: {}", items.join(", "));
        }
        serde_json::Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(out, &format!("{prefix}[{i}]"), x);
            }
        }
        other => {
            let _ = writeln!(out, "{prefix}: {}", scalar(other));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::fedder::fedder_fpure;
    use crate::parse::parse_poly;

    #[test]
    fn fpure_report() {
        let cfg = RingConfig::new(&["x", "y"], 3, 2).unwrap();
        let f = parse_poly("x*y", &cfg).unwrap();
        let v = fedder_fpure(&f).unwrap();
        let r = Report::new("fpure", &f, Parameters::default(), &v);
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["verdict"], "F_PURE");
        assert_eq!(json["soundness"], "EXACT");
        assert_eq!(json["ring"]["vars"], serde_json::json!(["x", "y"]));
        assert_eq!(json["certificate"]["escape"]["monomial"], "x^2*y^2");
        let text = r.to_text();
        assert!(text.contains("verdict: F_PURE\n"));
        assert!(text.contains("certificate.escape.monomial: x^2*y^2\n"));
    }
}
