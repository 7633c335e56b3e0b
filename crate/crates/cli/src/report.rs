use std::fmt::Write as _;

use opfactor::{QuadratureConfig, C64};
use serde::{Deserialize, Serialize};

/// Where an effective tolerance came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Default,
    File,
    Flag,
}

impl Source {
    fn label(self) -> &'static str {
        match self {
            Source::Default => "default",
            Source::File => "file",
            Source::Flag => "flag",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToleranceHeader {
    pub rtol: f64,
    pub rtol_source: Source,
    /// `None` means each point gets its own isolating radius.
    pub eps: Option<f64>,
    pub eps_source: Source,
    pub quadrature: QuadratureConfig,
    pub quadrature_source: Source,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<String>,
    pub tolerances: ToleranceHeader,
    pub results: serde_json::Map<String, serde_json::Value>,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<Timing>>,
    /// Human-readable body; not part of the JSON form.
    #[serde(skip)]
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(command: &str, problem: Option<String>, tolerances: ToleranceHeader) -> Self {
        Self {
            command: command.to_string(),
            problem,
            tolerances,
            results: serde_json::Map::new(),
            checks: Vec::new(),
            warnings: Vec::new(),
            ok: true,
            timings: None,
            lines: Vec::new(),
        }
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn result<T: Serialize>(&mut self, key: &str, value: &T) {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.results.insert(key.to_string(), v);
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.ok &= ok;
        self.checks.push(Check {
            name: name.into(),
            ok,
            detail: detail.into(),
        });
    }

    pub fn warn(&mut self, text: impl Into<String>) {
        self.warnings.push(text.into());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let t = &self.tolerances;
        let _ = writeln!(s, "opfactor {}", self.command);
        if let Some(p) = &self.problem {
            let _ = writeln!(s, "problem: {p}");
        }
        let eps = match t.eps {
            Some(e) => format!("{e:e}"),
            None => "auto".into(),
        };
        let _ = writeln!(
            s,
            "tolerances: rtol={:e} ({}) eps={eps} ({}) quadrature: nodes={} doublings={} rel_tol={:e} ({})",
            t.rtol,
            t.rtol_source.label(),
            t.eps_source.label(),
            t.quadrature.initial_nodes,
            t.quadrature.max_doublings,
            t.quadrature.rel_tol,
            t.quadrature_source.label()
        );
        for l in &self.lines {
            let _ = writeln!(s, "{l}");
        }
        if !self.checks.is_empty() {
            let _ = writeln!(s, "checks:");
            for c in &self.checks {
                let mark = if c.ok { "ok  " } else { "FAIL" };
                if c.detail.is_empty() {
                    let _ = writeln!(s, "  [{mark}] {}", c.name);
                } else {
                    let _ = writeln!(s, "  [{mark}] {}: {}", c.name, c.detail);
                }
            }
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        if let Some(timings) = &self.timings {
            for t in timings {
                let _ = writeln!(s, "time {}: {:.3} s", t.stage, t.seconds);
            }
        }
        let _ = writeln!(s, "result: {}", if self.ok { "ok" } else { "FAILED" });
        s
    }
}

/// `a+bi` with six decimals and no negative zeros.
pub fn fmt_c(z: C64) -> String {
    let clean = |x: f64| if x.abs() < 5e-7 { 0.0 } else { x };
    format!("{:.6}{:+.6}i", clean(z.re), clean(z.im))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header() -> ToleranceHeader {
        ToleranceHeader {
            rtol: 1e-10,
            rtol_source: Source::Default,
            eps: None,
            eps_source: Source::Default,
            quadrature: QuadratureConfig::default(),
            quadrature_source: Source::Default,
        }
    }

    #[test]
    fn json_round_trip() {
        let mut r = Report::new("factorize", Some("x".into()), header());
        r.result("nu", &2usize);
        r.check("p nonincreasing", true, "");
        r.check("residual", false, "1e-3");
        r.line("not serialized");
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert!(!back.ok);
        assert!(back.lines.is_empty());
        assert_eq!(back.to_json(), r.to_json());
    }

    #[test]
    fn header_lists_defaults() {
        let text = Report::new("projections", None, header()).to_text();
        assert!(text.contains("rtol=1e-10 (default) eps=auto (default) quadrature: nodes=64 doublings=6"));
    }

    #[test]
    fn complex_formatting() {
        assert_eq!(fmt_c(C64::new(-0.0, -1e-9)), "0.000000+0.000000i");
        assert_eq!(fmt_c(C64::new(1.5, -2.0)), "1.500000-2.000000i");
    }
}
