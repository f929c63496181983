//! Audit reports and their serializations.

use crate::syntax::Formula;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", content = "detail")]
pub enum Verdict {
    Verified,
    VerifiedViaExpansion,
    HypothesisUse(String),
    AxiomByDeclaration(String),
    Failed(String),
}

impl Verdict {
    pub fn is_failed(&self) -> bool {
        matches!(self, Verdict::Failed(_))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Classification {
    #[serde(rename = "PROOF")]
    Proof,
    #[serde(rename = "DEDUCTION")]
    Deduction,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::Proof => "PROOF",
            Classification::Deduction => "DEDUCTION",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct LineReport {
    pub label: String,
    pub formula: Option<String>,
    pub justification: String,
    pub verdict: Verdict,
    /// primitive lines behind a derived-rule line
    pub expansion: usize,
    pub reconstructed: bool,
    pub notes: Vec<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct HypothesisEntry {
    pub name: String,
    pub formula: String,
    pub used_at: Vec<String>,
    pub discharged_at: Option<String>,
    /// one of `undischarged`, `discharged`, `linked`, `bypassed`, `unused`
    pub status: String,
    pub detail: Option<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ObligationEntry {
    pub origin: String,
    pub kind: String,
    pub variable: Option<String>,
    pub termoid: Option<String>,
    pub holds: Option<bool>,
    pub note: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct AxiomUse {
    pub name: String,
    pub used_at: Vec<String>,
    pub origin: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct LinkEntry {
    pub target: String,
    pub script: String,
    pub status: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct Stats {
    pub lines: usize,
    pub verified: usize,
    pub verified_via_expansion: usize,
    pub hypothesis_use: usize,
    pub axiom_by_declaration: usize,
    pub failed: usize,
    /// lines not justified by a definitional or notational rewrite
    pub primitive_lines: usize,
    pub rewrite_lines: usize,
    /// primitive lines after expanding every derived-rule line
    pub expanded_lines: usize,
    pub reconstructed: usize,
    pub flagged: usize,
    /// conclusion labels of chain-inference lines, in order
    pub chin_conclusions: Vec<String>,
    pub derived_rules: BTreeMap<String, Vec<String>>,
    pub schemas: BTreeMap<String, usize>,
    /// discharges and generalizations in script order
    pub events: Vec<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct AuditReport {
    pub script: String,
    pub system: String,
    pub mode: String,
    pub classification: Classification,
    pub final_formula: Option<String>,
    pub verdicts: Vec<LineReport>,
    pub hypotheses: Vec<HypothesisEntry>,
    pub obligations: Vec<ObligationEntry>,
    pub axioms: Vec<AxiomUse>,
    pub deferred: Vec<(String, String)>,
    pub linkage: Vec<LinkEntry>,
    pub errors: Vec<String>,
    pub stats: Stats,
    #[serde(skip)]
    pub final_value: Option<Formula>,
}

impl AuditReport {
    pub fn is_proof(&self) -> bool {
        self.classification == Classification::Proof
    }

    pub fn undischarged(&self) -> Vec<&str> {
        self.hypotheses.iter().filter(|h| h.status == "undischarged").map(|h| h.name.as_str()).collect()
    }

    pub fn failed(&self) -> Vec<&LineReport> {
        self.verdicts.iter().filter(|v| v.verdict.is_failed()).collect()
    }

    /// Pretty JSON with the field order of the types above.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// One-line summary, e.g. `imp0: PROOF, 5/5 verified`.
    pub fn summary(&self) -> String {
        let ok = self.stats.lines - self.stats.failed;
        let mut s = format!("{}: {}, {}/{} verified", self.script, self.classification.name(), ok, self.stats.lines);
        let open = self.undischarged();
        if !open.is_empty() {
            let _ = write!(s, "; undischarged: {}", open.join(", "));
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.summary());
        let _ = writeln!(out, "system {} / logic {}", self.system, self.mode);
        if let Some(f) = &self.final_formula {
            let _ = writeln!(out, "final: {f}");
        }
        let st = &self.stats;
        let _ = writeln!(
            out,
            "verdicts: {} verified, {} via expansion, {} hypothesis uses, {} declared axioms, {} failed",
            st.verified, st.verified_via_expansion, st.hypothesis_use, st.axiom_by_declaration, st.failed
        );
        let _ = writeln!(
            out,
            "lines: {} ({} primitive, {} rewrites, {} after expansion); reconstructed {}, flagged {}",
            st.lines, st.primitive_lines, st.rewrite_lines, st.expanded_lines, st.reconstructed, st.flagged
        );
        for l in self.failed() {
            if let super::Verdict::Failed(r) = &l.verdict {
                let _ = writeln!(out, "FAILED {}: {r}", l.label);
            }
        }
        if !self.hypotheses.is_empty() {
            let _ = writeln!(out, "hypotheses:");
            for h in &self.hypotheses {
                let _ = write!(out, "  {} [{}] used at {}", h.name, h.status, list_or_none(&h.used_at));
                if let Some(d) = &h.discharged_at {
                    let _ = write!(out, ", discharged at {d}");
                }
                if let Some(d) = &h.detail {
                    let _ = write!(out, " ({d})");
                }
                out.push('\n');
            }
        }
        if !self.axioms.is_empty() {
            let _ = writeln!(out, "declared axioms:");
            for a in &self.axioms {
                let _ = writeln!(out, "  {} ({}) at {}", a.name, a.origin, list_or_none(&a.used_at));
            }
        }
        if !self.obligations.is_empty() {
            let _ = writeln!(out, "obligations:");
            for o in &self.obligations {
                let _ = write!(out, "  {} {}", o.origin, o.kind);
                if let Some(t) = &o.termoid {
                    let _ = write!(out, " {t}");
                }
                if !o.note.is_empty() {
                    let _ = write!(out, ": {}", o.note);
                }
                out.push('\n');
            }
        }
        if !self.deferred.is_empty() {
            let _ = writeln!(out, "deferred:");
            for (n, t) in &self.deferred {
                let _ = writeln!(out, "  {n}: {t}");
            }
        }
        for l in &self.linkage {
            let _ = writeln!(out, "link {} = {}: {}", l.target, l.script, l.status);
        }
        for e in &self.errors {
            let _ = writeln!(out, "error: {e}");
        }
        if !st.chin_conclusions.is_empty() {
            let _ = writeln!(out, "chin conclusions ({}): {}", st.chin_conclusions.len(), st.chin_conclusions.join(", "));
        }
        out
    }
}

fn list_or_none(xs: &[String]) -> String {
    if xs.is_empty() {
        "-".into()
    } else {
        xs.join(", ")
    }
}
