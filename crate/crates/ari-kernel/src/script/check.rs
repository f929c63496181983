//! Line checking, the hypothesis ledger and linkage.

use super::report::*;
use super::*;
use crate::arith::{AxiomTable, Valuation};
use crate::calculus::{apply_gen, apply_mp, definitional_equal, expand_derived, match_named, verify_expansion, RuleError};
use crate::code::ARITH_BUDGET;
use crate::kleene::{feasibility, instantiate_nu, normalize_nu, translate};
use crate::syntax::{imp, Obligation, ObligationKind};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LinkTarget {
    /// a hypothesis of the checked script
    Hyp(String),
    /// a line of the checked script, by label
    Line(String),
}

impl LinkTarget {
    /// `lineN` names line `N`; anything else names a hypothesis.
    pub fn parse(s: &str) -> LinkTarget {
        match s.strip_prefix("line") {
            Some(l) if l.starts_with(|c: char| c.is_ascii_digit()) => LinkTarget::Line(l.to_string()),
            _ => LinkTarget::Hyp(s.to_string()),
        }
    }
}

impl std::fmt::Display for LinkTarget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LinkTarget::Hyp(h) => f.write_str(h),
            LinkTarget::Line(l) => write!(f, "line{l}"),
        }
    }
}

/// A checked script standing in for a hypothesis or a line.
#[derive(Clone, Debug)]
pub struct Link {
    pub target: LinkTarget,
    pub report: AuditReport,
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    /// overrides the script's `logic` header
    pub mode: Option<Mode>,
    pub budget: usize,
    /// reject every generalization over a variable free in an active hypothesis
    pub strict_capture: bool,
    pub table: AxiomTable,
    pub links: Vec<Link>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { mode: None, budget: ARITH_BUDGET, strict_capture: false, table: AxiomTable::full(), links: Vec::new() }
    }
}

struct Outcome {
    verdict: Verdict,
    obligations: Vec<Obligation>,
    notes: Vec<String>,
    expansion: usize,
    schema: Option<String>,
}

impl Outcome {
    fn new(verdict: Verdict) -> Outcome {
        Outcome { verdict, obligations: Vec::new(), notes: Vec::new(), expansion: 0, schema: None }
    }

    fn failed(reason: impl Into<String>) -> Outcome {
        Outcome::new(Verdict::Failed(reason.into()))
    }
}

fn rule_reason(e: &RuleError) -> String {
    let dbg = format!("{e:?}");
    let name = dbg.split(['(', ' ', '{']).next().unwrap_or("");
    format!("{name}: {e}")
}

fn is_nu(id: &SchemaId) -> bool {
    matches!(id, SchemaId::Lea1Nu | SchemaId::Lea2Nu | SchemaId::LeaMpNu)
}

fn is_declared(id: &SchemaId) -> bool {
    matches!(id, SchemaId::ElemAx(_) | SchemaId::DefAx(_) | SchemaId::MOmega)
}

struct Ctx<'a> {
    script: &'a Script,
    mode: Mode,
    opts: &'a CheckOptions,
}

impl Ctx<'_> {
    /// The formula a citation denotes and the line it belongs to.
    fn cited(&self, key: &str, before: usize) -> Result<(Formula, Option<usize>), String> {
        let s = self.script;
        if let Some(j) = s.line_index(key) {
            if j >= before {
                return Err(format!("cites {key}, which is not an earlier line"));
            }
            return s.lines[j].formula.clone().map(|f| (f, Some(j))).ok_or_else(|| format!("cited line {key} has no formula"));
        }
        if let Ok(k) = key.parse::<u32>() {
            if let Some(j) = s.lines.iter().position(|l| matches!(l.label, Label::Range(a, b) if a <= k && k < b)) {
                if j >= before {
                    return Err(format!("cites {key}, which is not an earlier line"));
                }
                return self.interior(j, k).map(|f| (f, Some(j)));
            }
        }
        if let Some(d) = s.premise(key).or_else(|| s.hyp(key)).or_else(|| s.axiomdecl(key)) {
            return Ok((d.formula.clone(), None));
        }
        Err(format!("unknown citation {key}"))
    }

    fn interior(&self, j: usize, k: u32) -> Result<Formula, String> {
        let line = &self.script.lines[j];
        let (Label::Range(a, _), Justification::Derived(rule, cites)) = (&line.label, &line.just) else {
            return Err("not a range".into());
        };
        let concl = line.formula.clone().ok_or("range without formula")?;
        let ps = cites.iter().map(|c| self.cited(c, j).map(|x| x.0)).collect::<Result<Vec<_>, _>>()?;
        let lines = expand_derived(*rule, &ps, &concl).map_err(|e| e.to_string())?;
        lines
            .into_iter()
            .filter(|l| !l.is_rewrite())
            .nth((k - a) as usize)
            .map(|l| l.formula)
            .ok_or_else(|| format!("line {k} lies outside the expansion"))
    }

    fn check_schema(&self, id: &SchemaId, f: &Formula) -> Outcome {
        if is_nu(id) && self.script.system != System::AriNu {
            return Outcome::failed(format!("{id} is available only in AriNu"));
        }
        let mut out;
        match match_named(id, f, self.mode) {
            Some(m) => {
                if let Some(o) = m.obligations.iter().find(|o| o.holds == Some(false)) {
                    return Outcome::failed(format!("side condition {} fails: {}", o.kind.name(), o.note));
                }
                out = Outcome::new(if is_declared(id) { Verdict::AxiomByDeclaration(id.name()) } else { Verdict::Verified });
                out.obligations = m.obligations.clone();
                if is_nu(id) {
                    if let Some(body) = instantiate_nu(&m) {
                        out.obligations.extend(feasibility(&body, &self.opts.table, self.opts.budget));
                    }
                }
            }
            None => {
                let translated = f.has_kleene().then(|| translate(f, &Valuation::new(), &self.opts.table, self.opts.budget));
                match translated {
                    Some(Ok(g)) if match_named(id, &g, self.mode).is_some() => {
                        out = Outcome::new(Verdict::Verified);
                        out.notes.push(format!("via translation to {g}"));
                    }
                    _ => return Outcome::failed(format!("not an instance of {id}")),
                }
            }
        }
        out.schema = Some(id.name());
        out
    }

    fn check_sba(&self, t: &Termoid, f: &Formula) -> Outcome {
        let Some((Formula::Forall(v, c), rhs)) = f.as_imp() else {
            return Outcome::failed("SBA1 needs the shape all(x, C) -> C[x:=t]");
        };
        let (inst, free_ok) = c.subst(*v, t);
        if inst != *rhs {
            return Outcome::failed(format!("consequent is not the instance of {v} by {t}"));
        }
        if !free_ok {
            return Outcome::failed(format!("{t} is not free for {v}"));
        }
        let mut out = Outcome::new(Verdict::Verified);
        out.schema = Some(SchemaId::Sba1.name());
        if t.contains_iota() {
            out.obligations.push(Obligation::new(ObligationKind::ValueInRange, Some(*v), Some(t.clone()), format!("{t} = nu({t})")));
        }
        out
    }

    fn check_line(&self, i: usize) -> Outcome {
        let s = self.script;
        let line = &s.lines[i];
        let Some(f) = &line.formula else {
            return Outcome::failed("the formula cannot be derived from the justification");
        };
        let cite = |k: &str| self.cited(k, i).map(|x| x.0);
        macro_rules! get {
            ($k:expr) => {
                match cite($k) {
                    Ok(x) => x,
                    Err(e) => return Outcome::failed(e),
                }
            };
        }
        match &line.just {
            Justification::Schema(id) => self.check_schema(id, f),
            Justification::Sba1(t) => self.check_sba(t, f),
            Justification::Mp(a, b) => {
                let (fa, fb) = (get!(a), get!(b));
                let r1 = apply_mp(&fa, &fb, self.mode);
                let r2 = apply_mp(&fb, &fa, self.mode);
                if r1.as_ref() == Ok(f) || r2.as_ref() == Ok(f) {
                    let mut o = Outcome::new(Verdict::Verified);
                    o.schema = Some("MP".into());
                    return o;
                }
                match (r1, r2) {
                    (Ok(g), _) | (_, Ok(g)) => Outcome::failed(format!("ConclusionMismatch: MP yields {g}")),
                    (Err(e), _) => Outcome::failed(rule_reason(&e)),
                }
            }
            Justification::Gen { premise, var, .. } => {
                let fp = get!(premise);
                match apply_gen(&fp, *var, self.mode) {
                    Ok(g) if g == *f => {
                        let mut o = Outcome::new(Verdict::Verified);
                        o.schema = Some("Gen".into());
                        o
                    }
                    Ok(g) => Outcome::failed(format!("ConclusionMismatch: Gen yields {g}")),
                    Err(e) => Outcome::failed(rule_reason(&e)),
                }
            }
            Justification::Derived(rule, cites) => {
                let mut ps = Vec::new();
                for c in cites {
                    ps.push(get!(c));
                }
                let lines = match expand_derived(*rule, &ps, f) {
                    Ok(l) => l,
                    Err(e) => return Outcome::failed(rule_reason(&e)),
                };
                if let Err((_, m)) = verify_expansion(&lines, &ps, self.mode) {
                    return Outcome::failed(m);
                }
                let mut o = Outcome::new(Verdict::VerifiedViaExpansion);
                o.expansion = rule.primitive_len();
                o.schema = Some(rule.name().into());
                if let Label::Range(a, b) = line.label {
                    let width = (b - a + 1) as usize;
                    if width != rule.primitive_len() {
                        if !line.width_anomaly {
                            return Outcome::failed(format!(
                                "range width {width} differs from the {} expansion length {}",
                                rule,
                                rule.primitive_len()
                            ));
                        }
                        o.notes.push(format!("width anomaly: {width} labels for {} lines", rule.primitive_len()));
                    }
                }
                o
            }
            Justification::Hyp(h) => match s.hyp(h) {
                Some(d) if d.formula == *f => Outcome::new(Verdict::HypothesisUse(h.clone())),
                Some(_) => Outcome::failed(format!("formula differs from hypothesis {h}")),
                None => Outcome::failed(format!("undeclared hypothesis {h}")),
            },
            Justification::Axiom(h) => match s.axiomdecl(h) {
                Some(d) if d.formula == *f => Outcome::new(Verdict::AxiomByDeclaration(h.clone())),
                Some(_) => Outcome::failed(format!("formula differs from declared axiom {h}")),
                None => Outcome::failed(format!("undeclared axiom {h}")),
            },
            Justification::DefRewrite(a) => {
                let fa = get!(a);
                if definitional_equal(f, &fa) {
                    Outcome::new(Verdict::Verified)
                } else {
                    Outcome::failed(format!("not a definitional rewrite of {a}"))
                }
            }
            Justification::Notation(a) => {
                let fa = get!(a);
                let (t, b) = (&self.opts.table, self.opts.budget);
                if normalize_nu(f, t, b) == normalize_nu(&fa, t, b) {
                    Outcome::new(Verdict::Verified)
                } else {
                    Outcome::failed(format!("not a notational variant of {a}"))
                }
            }
            Justification::Discharge(h, a) => {
                let fa = get!(a);
                match s.hyp(h) {
                    Some(d) if imp(d.formula.clone(), fa.clone()) == *f => Outcome::new(Verdict::Verified),
                    Some(_) => Outcome::failed(format!("formula is not {h} -> {a}")),
                    None => Outcome::failed(format!("undeclared hypothesis {h}")),
                }
            }
        }
    }
}

fn obligation_entry(origin: String, o: &Obligation) -> ObligationEntry {
    ObligationEntry {
        origin,
        kind: o.kind.name().into(),
        variable: o.variable.map(|v| v.to_string()),
        termoid: o.termoid.as_ref().map(|t| t.to_string()),
        holds: o.holds,
        note: o.note.clone(),
    }
}

/// Checks every line, then computes hypothesis dependencies, discharges and
/// the classification in one sequential pass.
pub fn check_script(script: &Script, opts: &CheckOptions) -> AuditReport {
    let mode = opts.mode.unwrap_or(script.mode);
    let ctx = Ctx { script, mode, opts };
    let mut outcomes: Vec<Outcome> = (0..script.lines.len()).into_par_iter().map(|i| ctx.check_line(i)).collect();

    let mut errors = Vec::new();
    let mut linkage = Vec::new();
    let mut linked_hyps: BTreeMap<String, String> = BTreeMap::new();
    let mut linked_lines: BTreeMap<usize, String> = BTreeMap::new();
    let mut valid_links = Vec::new();
    for link in &opts.links {
        let name = link.report.script.clone();
        let target_formula = match &link.target {
            LinkTarget::Hyp(h) => script.hyp(h).map(|d| d.formula.clone()),
            LinkTarget::Line(l) => script.line_index(l).and_then(|i| script.lines[i].formula.clone()),
        };
        let status = match target_formula {
            None => format!("LinkageMismatch: {} has no such target", script.name),
            Some(_) if !link.report.is_proof() => format!("LinkageMismatch: {name} is not a proof"),
            Some(t) if link.report.final_value.as_ref() != Some(&t) => {
                format!("LinkageMismatch: the final formula of {name} differs from {}", link.target)
            }
            Some(_) => {
                match &link.target {
                    LinkTarget::Hyp(h) => {
                        linked_hyps.insert(h.clone(), name.clone());
                    }
                    LinkTarget::Line(l) => {
                        linked_lines.insert(script.line_index(l).unwrap(), name.clone());
                    }
                }
                valid_links.push(link);
                "discharged".to_string()
            }
        };
        if status.starts_with("LinkageMismatch") {
            errors.push(status.clone());
        }
        linkage.push(LinkEntry { target: link.target.to_string(), script: name, status });
    }

    // sequential pass
    let n = script.lines.len();
    let mut deps: Vec<BTreeSet<String>> = Vec::with_capacity(n);
    let mut used_at: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut discharged_at: BTreeMap<String, String> = BTreeMap::new();
    let mut events = Vec::new();
    let mut axiom_uses: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for i in 0..n {
        let line = &script.lines[i];
        let key = line.label.key();
        let mut d = BTreeSet::new();
        for c in line.just.cites() {
            if let Ok((_, Some(j))) = ctx.cited(c, i) {
                d.extend(deps[j].iter().cloned());
            } else if script.hyp(c).is_some() {
                d.insert(c.to_string());
                used_at.entry(c.to_string()).or_default().push(key.clone());
            }
        }
        match &line.just {
            Justification::Hyp(h) => {
                d.insert(h.clone());
                used_at.entry(h.clone()).or_default().push(key.clone());
            }
            Justification::Discharge(h, _) => {
                d.remove(h);
                discharged_at.entry(h.clone()).or_insert_with(|| key.clone());
                events.push(format!("discharge {h} at {key}"));
            }
            Justification::Gen { var, after, .. } => {
                events.push(format!("gen {var} at {key}"));
                let captured: Vec<&String> =
                    d.iter().filter(|h| script.hyp(h).is_some_and(|x| x.formula.occurs_free(*var))).collect();
                if !captured.is_empty() && !outcomes[i].verdict.is_failed() {
                    let only_after = after.as_ref().is_some_and(|a| captured.iter().all(|c| *c == a));
                    if only_after && !opts.strict_capture {
                        let a = after.clone().unwrap();
                        let mut o = Obligation::new(
                            ObligationKind::DischargeFirst,
                            Some(*var),
                            None,
                            format!("{var} is free in {a}; sound once {a} is discharged"),
                        );
                        o.holds = Some(linked_hyps.contains_key(&a));
                        outcomes[i].obligations.push(o);
                    } else {
                        let e = RuleError::HypothesisCapture { var: *var, hypothesis: captured[0].clone() };
                        outcomes[i].verdict = Verdict::Failed(rule_reason(&e));
                    }
                }
            }
            _ => {}
        }
        if let Some(src) = linked_lines.get(&i) {
            d.clear();
            outcomes[i].notes.push(format!("justified by linked script {src}"));
        }
        if let Verdict::AxiomByDeclaration(name) = &outcomes[i].verdict {
            axiom_uses.entry(name.clone()).or_default().push(key.clone());
        }
        deps.push(d);
    }

    let qed_idx = script.line_index(&script.qed);
    let mut final_value = qed_idx.and_then(|q| script.lines[q].formula.clone());
    let mut final_deps = qed_idx.map(|q| deps[q].clone()).unwrap_or_default();
    for h in &script.discharges {
        if let (Some(f), Some(d)) = (final_value.take(), script.hyp(h)) {
            final_value = Some(imp(d.formula.clone(), f));
        }
        final_deps.remove(h);
        discharged_at.entry(h.clone()).or_insert_with(|| "end".into());
        events.push(format!("discharge {h} at end"));
    }
    for h in linked_hyps.keys() {
        final_deps.remove(h);
    }

    let hypotheses = script
        .hyps
        .iter()
        .map(|h| {
            let used = used_at.get(&h.name).cloned().unwrap_or_default();
            let (status, detail) = if final_deps.contains(&h.name) {
                ("undischarged", None)
            } else if let Some(src) = linked_hyps.get(&h.name) {
                ("linked", Some(format!("proved by {src}")))
            } else if discharged_at.contains_key(&h.name) {
                ("discharged", None)
            } else if !used.is_empty() && !linked_lines.is_empty() {
                let via = linked_lines
                    .iter()
                    .map(|(i, src)| format!("line {} = {}", script.lines[*i].label.key(), src))
                    .collect::<Vec<_>>()
                    .join(", ");
                ("bypassed", Some(format!("every use lies under a linked line: {via}")))
            } else {
                ("unused", None)
            };
            HypothesisEntry {
                name: h.name.clone(),
                formula: h.formula.to_string(),
                used_at: used,
                discharged_at: discharged_at.get(&h.name).cloned(),
                status: status.into(),
                detail,
            }
        })
        .collect::<Vec<_>>();

    let mut obligations = Vec::new();
    let mut stats = Stats { lines: n, events, ..Stats::default() };
    let mut verdicts = Vec::with_capacity(n);
    for (line, mut o) in script.lines.iter().zip(outcomes) {
        let key = line.label.key();
        for ob in &o.obligations {
            obligations.push(obligation_entry(key.clone(), ob));
        }
        match &o.verdict {
            Verdict::Verified => stats.verified += 1,
            Verdict::VerifiedViaExpansion => stats.verified_via_expansion += 1,
            Verdict::HypothesisUse(_) => stats.hypothesis_use += 1,
            Verdict::AxiomByDeclaration(_) => stats.axiom_by_declaration += 1,
            Verdict::Failed(_) => stats.failed += 1,
        }
        let rewrite = matches!(line.just, Justification::DefRewrite(_) | Justification::Notation(_));
        if rewrite {
            stats.rewrite_lines += 1;
        } else {
            stats.primitive_lines += 1;
            stats.expanded_lines += o.expansion.max(1);
        }
        if line.reconstructed {
            stats.reconstructed += 1;
        }
        if let Some(note) = &line.note {
            stats.flagged += 1;
            o.notes.push(note.clone());
        }
        if let Justification::Derived(rule, _) = &line.just {
            stats.derived_rules.entry(rule.name().into()).or_default().push(key.clone());
            if *rule == DerivedRule::ChIn {
                stats.chin_conclusions.push(key.clone());
            }
        }
        if let Some(sname) = &o.schema {
            *stats.schemas.entry(sname.clone()).or_default() += 1;
        }
        verdicts.push(LineReport {
            label: line.label.to_string(),
            formula: line.formula.as_ref().map(|f| f.to_string()),
            justification: line.just.to_string(),
            verdict: o.verdict,
            expansion: o.expansion,
            reconstructed: line.reconstructed,
            notes: o.notes,
        });
    }

    let mut axioms: Vec<AxiomUse> =
        axiom_uses.into_iter().map(|(name, used_at)| AxiomUse { name, used_at, origin: script.name.clone() }).collect();
    let mut deferred = script.deferred.clone();
    for link in valid_links {
        let r = &link.report;
        let prefix = |l: &str| format!("{}:{l}", r.script);
        for a in &r.axioms {
            axioms.push(AxiomUse {
                name: a.name.clone(),
                used_at: a.used_at.iter().map(|l| prefix(l)).collect(),
                origin: format!("{} via {}", r.script, link.target),
            });
        }
        for o in &r.obligations {
            let mut o = o.clone();
            o.origin = prefix(&o.origin);
            obligations.push(o);
        }
        deferred.extend(r.deferred.iter().cloned());
    }

    if qed_idx.is_none() {
        errors.push(format!("qed target {} is missing", script.qed));
    }
    let proof = stats.failed == 0 && final_deps.is_empty() && final_value.is_some();
    AuditReport {
        script: script.name.clone(),
        system: script.system.name().into(),
        mode: match mode {
            Mode::Open => "open".into(),
            Mode::Closed => "closed".into(),
        },
        classification: if proof { Classification::Proof } else { Classification::Deduction },
        final_formula: final_value.as_ref().map(|f| f.to_string()),
        verdicts,
        hypotheses,
        obligations,
        axioms,
        deferred,
        linkage,
        errors,
        stats,
        final_value,
    }
}

/// Checks `main` with each linked script checked first and substituted for
/// its target.
pub fn audit(main: &Script, linked: &[(LinkTarget, &Script)], opts: &CheckOptions) -> AuditReport {
    let base = CheckOptions { links: Vec::new(), ..opts.clone() };
    let links: Vec<Link> = linked
        .par_iter()
        .map(|(target, s)| Link { target: target.clone(), report: check_script(s, &base) })
        .collect();
    check_script(main, &CheckOptions { links, ..base })
}
