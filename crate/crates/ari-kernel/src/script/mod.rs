//! Proof presentations: parsing, line checking, hypothesis bookkeeping and
//! cross-script linkage.

mod check;
mod parse;
mod report;

pub use check::{audit, check_script, CheckOptions, Link, LinkTarget};
pub use parse::parse_script;
pub use report::{
    AuditReport, AxiomUse, Classification, HypothesisEntry, LineReport, LinkEntry, ObligationEntry, Stats, Verdict,
};

use crate::calculus::{DerivedRule, Mode, SchemaId};
use crate::syntax::{Formula, Termoid, Var};
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum System {
    Ari,
    AriPlus,
    AriNu,
}

impl System {
    pub fn name(self) -> &'static str {
        match self {
            System::Ari => "Ari",
            System::AriPlus => "Ari+",
            System::AriNu => "AriNu",
        }
    }
}

/// A named formula declared in the header.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decl {
    pub name: String,
    pub formula: Formula,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Label {
    /// an integer with an optional letter suffix, like `2a`
    Num(u32, String),
    /// `start-end`, both inclusive
    Range(u32, u32),
    /// a name starting with a letter, like `c1`
    Named(String),
}

impl Label {
    /// The label under which other lines cite this one.
    pub fn key(&self) -> String {
        match self {
            Label::Num(n, s) => format!("{n}{s}"),
            Label::Range(_, e) => e.to_string(),
            Label::Named(s) => s.clone(),
        }
    }

    fn order(&self) -> Option<(u32, String, u32, String)> {
        match self {
            Label::Num(n, s) => Some((*n, s.clone(), *n, s.clone())),
            Label::Range(a, b) => Some((*a, String::new(), *b, String::new())),
            Label::Named(_) => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Range(a, b) => write!(f, "{a}-{b}"),
            _ => f.write_str(&self.key()),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Justification {
    Schema(SchemaId),
    /// a substitution axiom with its termoid given explicitly
    Sba1(Termoid),
    Mp(String, String),
    Gen { premise: String, var: Var, after: Option<String> },
    Derived(DerivedRule, Vec<String>),
    Hyp(String),
    Axiom(String),
    DefRewrite(String),
    Notation(String),
    Discharge(String, String),
}

impl Justification {
    /// Labels and names this justification cites.
    pub fn cites(&self) -> Vec<&str> {
        match self {
            Justification::Mp(a, b) => vec![a, b],
            Justification::Gen { premise, .. } => vec![premise],
            Justification::Derived(_, xs) => xs.iter().map(String::as_str).collect(),
            Justification::DefRewrite(a) | Justification::Notation(a) | Justification::Discharge(_, a) => vec![a],
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Schema(id) => write!(f, "{id}"),
            Justification::Sba1(t) => write!(f, "SBA1 {t}"),
            Justification::Mp(a, b) => write!(f, "MP {a} {b}"),
            Justification::Gen { premise, var, after } => {
                write!(f, "Gen {premise} {var}")?;
                if let Some(h) = after {
                    write!(f, " after {h}")?;
                }
                Ok(())
            }
            Justification::Derived(r, xs) => {
                write!(f, "{r}")?;
                for x in xs {
                    write!(f, " {x}")?;
                }
                Ok(())
            }
            Justification::Hyp(h) => write!(f, "Hyp {h}"),
            Justification::Axiom(h) => write!(f, "Axiom {h}"),
            Justification::DefRewrite(a) => write!(f, "DefRewrite {a}"),
            Justification::Notation(a) => write!(f, "Notation {a}"),
            Justification::Discharge(h, a) => write!(f, "Discharge {h} {a}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScriptLine {
    pub label: Label,
    /// `None` when the formula was left to the justification and could not
    /// be derived
    pub formula: Option<Formula>,
    /// the formula was written as `_`
    pub derived: bool,
    pub just: Justification,
    pub reconstructed: bool,
    /// a range whose width differs from the rule's expansion length
    pub width_anomaly: bool,
    pub note: Option<String>,
    /// 1-based line in the source text
    pub source_line: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Script {
    pub name: String,
    pub mode: Mode,
    pub system: System,
    pub params: Vec<Var>,
    pub hyps: Vec<Decl>,
    pub axiomdecls: Vec<Decl>,
    pub premises: Vec<Decl>,
    /// residual items recorded for the audit ledger
    pub deferred: Vec<(String, String)>,
    pub lines: Vec<ScriptLine>,
    /// hypotheses discharged after the last line
    pub discharges: Vec<String>,
    pub qed: String,
}

impl Script {
    pub fn line_index(&self, key: &str) -> Option<usize> {
        self.lines.iter().position(|l| l.label.key() == key || l.label.to_string() == key)
    }

    pub fn hyp(&self, name: &str) -> Option<&Decl> {
        self.hyps.iter().find(|d| d.name == name)
    }

    pub fn axiomdecl(&self, name: &str) -> Option<&Decl> {
        self.axiomdecls.iter().find(|d| d.name == name)
    }

    pub fn premise(&self, name: &str) -> Option<&Decl> {
        self.premises.iter().find(|d| d.name == name)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum ScriptError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: {message}")]
    Monotonicity { line: usize, message: String },
}
