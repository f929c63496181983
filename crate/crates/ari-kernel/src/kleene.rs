//! Kleene atoms `F_r`, the three ν-schemata and translation into LAri.

use crate::arith::{eval_fl, eval_formula, eval_termoid, AxiomTable, EvalError, Valuation};
use crate::calculus::{
    apply_mp, expand_derived, match_axiom, Binding, Bindings, DerivedRule, ExpJust, ExpLine, Mode, SchemaId, SchemaMatch,
};
use crate::encode::decode_formula;
use crate::syntax::{and, app1, eq, falsum, imp, kleene, negate, num, or, Formula, Func, Obligation, ObligationKind, Pred, Termoid};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error("subscript {0} is not constant")]
    NonConstantSubscript(String),
    #[error("subscript {0} has a value beyond the materialization budget")]
    ValueTooLarge(String),
    #[error("subscript {0} has no computable value")]
    NoValue(String),
}

fn nu_bindings(pairs: &[(&str, &Termoid)]) -> Bindings {
    pairs.iter().map(|(k, t)| (k.to_string(), Binding::Termoid((*t).clone()))).collect()
}

fn nu_match(id: SchemaId, b: Bindings) -> SchemaMatch {
    SchemaMatch { schema: id, bindings: b, obligations: Vec::new(), prefix: Vec::new() }
}

/// Recognizes `LEA1ν`, `LEA2ν` and `LEAMPν` instances.
pub fn match_nu_schema(e: &Formula) -> Option<SchemaMatch> {
    let (ante, cons) = e.as_imp()?;
    // LEA1ν: r1 = r2 ⊃ (F r1 ⊃ F r2)
    if let (Formula::Atom(Pred::Eq, r1, r2), Some((Formula::Kleene(a), Formula::Kleene(b)))) = (ante, cons.as_imp()) {
        if a == r1 && b == r2 {
            return Some(nu_match(SchemaId::Lea1Nu, nu_bindings(&[("r1", r1), ("r2", r2)])));
        }
    }
    // LEAMPν: (r)0 = 3 ⊃ (F r ⊃ (F (r)1 ⊃ F (r)2))
    if let Formula::Atom(Pred::Eq, Termoid::App(Func::Exp0, xs), three) = ante {
        let r = &xs[0];
        if *three == num(3) {
            if let Some((Formula::Kleene(a), rest)) = cons.as_imp() {
                if let Some((Formula::Kleene(b), Formula::Kleene(c))) = rest.as_imp() {
                    if a == r && *b == app1(Func::Exp1, r.clone()) && *c == app1(Func::Exp2, r.clone()) {
                        return Some(nu_match(SchemaId::LeaMpNu, nu_bindings(&[("r", r)])));
                    }
                }
            }
        }
    }
    // LEA2ν: fl(r) = r ⊃ νF(fl(r)) = νF(r)
    if let (Formula::Atom(Pred::Eq, Termoid::App(Func::Fl, xs), r), Formula::Atom(Pred::Eq, l2, r2)) = (ante, cons) {
        if xs[0] == *r
            && *l2 == app1(Func::NuF, app1(Func::Fl, r.clone()))
            && *r2 == app1(Func::NuF, r.clone())
        {
            return Some(nu_match(SchemaId::Lea2Nu, nu_bindings(&[("r", r)])));
        }
    }
    None
}

/// Rebuilds a ν-schema instance from its bindings (without prefix).
pub fn instantiate_nu(m: &SchemaMatch) -> Option<Formula> {
    let t = |k: &str| match m.bindings.get(k)? {
        Binding::Termoid(t) => Some(t.clone()),
        _ => None,
    };
    Some(match m.schema {
        SchemaId::Lea1Nu => {
            let (r1, r2) = (t("r1")?, t("r2")?);
            imp(eq(r1.clone(), r2.clone()), imp(kleene(r1), kleene(r2)))
        }
        SchemaId::LeaMpNu => {
            let r = t("r")?;
            imp(
                eq(app1(Func::Exp0, r.clone()), num(3)),
                imp(kleene(r.clone()), imp(kleene(app1(Func::Exp1, r.clone())), kleene(app1(Func::Exp2, r)))),
            )
        }
        SchemaId::Lea2Nu => {
            let r = t("r")?;
            let flr = app1(Func::Fl, r.clone());
            imp(eq(flr.clone(), r.clone()), eq(app1(Func::NuF, flr), app1(Func::NuF, r)))
        }
        _ => return None,
    })
}

/// The closed LAri formula denoted by `F_r` under `val`.
pub fn translate_atom(r: &Termoid, val: &Valuation, table: &AxiomTable, budget: usize) -> Result<Formula, TranslateError> {
    let code = eval_termoid(r, val, table).map_err(|e| match e {
        EvalError::Unbound(_) => TranslateError::NonConstantSubscript(r.to_string()),
        EvalError::Description => TranslateError::NoValue(r.to_string()),
        _ => TranslateError::ValueTooLarge(r.to_string()),
    })?;
    if code.materialize(budget).is_err() {
        return Err(TranslateError::ValueTooLarge(r.to_string()));
    }
    Ok(decode_formula(&eval_fl(&code)).expect("fl yields a formula code"))
}

/// Replaces every Kleene atom by the formula it denotes.
pub fn translate(e: &Formula, val: &Valuation, table: &AxiomTable, budget: usize) -> Result<Formula, TranslateError> {
    let rec = |x: &Formula| translate(x, val, table, budget);
    Ok(match e {
        Formula::Atom(..) => e.clone(),
        Formula::Imp(a, b) => imp(rec(a)?, rec(b)?),
        Formula::And(a, b) => and(rec(a)?, rec(b)?),
        Formula::Or(a, b) => or(rec(a)?, rec(b)?),
        Formula::Forall(v, a) => Formula::Forall(*v, Box::new(rec(a)?)),
        Formula::Exists(v, a) => Formula::Exists(*v, Box::new(rec(a)?)),
        Formula::Kleene(r) => translate_atom(r, val, table, budget)?,
    })
}

/// Subscripts of a ν-instance, used for feasibility reporting.
pub fn subscripts(m: &SchemaMatch) -> Vec<Termoid> {
    m.bindings
        .values()
        .filter_map(|b| match b {
            Binding::Termoid(t) => Some(t.clone()),
            _ => None,
        })
        .collect()
}

/// How a ν-instance with constant subscripts was reduced to LAri.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substantiation {
    /// the translated instance
    pub formula: Formula,
    /// numeric facts established by evaluation (refuted antecedents)
    pub premises: Vec<Formula>,
    pub lines: Vec<ExpLine>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SubstantiationError {
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error("the instance relates code generators and is checked at the schema level only")]
    SchemaLevelOnly,
    #[error("antecedent cannot be evaluated: {0}")]
    Evaluation(String),
    #[error("translated consequent {0} is neither an axiom nor an identity")]
    NoReduction(String),
}

/// Replays the reduction of a ν-instance to a proof in LAri: a true
/// antecedent leaves a consequent provable by `Imp0` or an axiom, lifted by
/// `Imp1`; a false one is refuted by evaluation and closed by `Imp3`.
pub fn substantiate(e: &Formula, table: &AxiomTable, budget: usize) -> Result<Substantiation, SubstantiationError> {
    let m = match_nu_schema(e).ok_or_else(|| SubstantiationError::NoReduction(e.to_string()))?;
    if m.schema == SchemaId::Lea2Nu {
        return Err(SubstantiationError::SchemaLevelOnly);
    }
    let formula = translate(e, &Valuation::new(), table, budget)?;
    let (h, x) = formula.as_imp().expect("ν-instances are implications");
    let (h, x) = (h.clone(), x.clone());
    let truth = eval_formula(&h, &Valuation::new(), table).map_err(|err| SubstantiationError::Evaluation(err.to_string()))?;
    let mut lines = Vec::new();
    let mut premises = Vec::new();
    use crate::calculus::Src;
    if truth {
        let proof_of_x = if let Some(ax) = match_axiom(&x, Mode::Closed) {
            lines.push(ExpLine { formula: x.clone(), just: ExpJust::Axiom(ax.schema) });
            Src::Line(0)
        } else if matches!(x.as_imp(), Some((a, b)) if a == b) {
            lines = expand_derived(DerivedRule::Imp0, &[], &x).expect("identity");
            Src::Line(lines.len() - 1)
        } else {
            return Err(SubstantiationError::NoReduction(x.to_string()));
        };
        let lift = imp(x.clone(), imp(h.clone(), x.clone()));
        lines.push(ExpLine { formula: lift, just: ExpJust::Axiom(SchemaId::Imp1) });
        let major = Src::Line(lines.len() - 1);
        let concl = apply_mp(&x, &lines[lines.len() - 1].formula, Mode::Closed).expect("Imp1 lift");
        lines.push(ExpLine { formula: concl, just: ExpJust::Mp(proof_of_x, major) });
    } else {
        premises.push(negate(h.clone()));
        lines.push(ExpLine { formula: imp(falsum(), x.clone()), just: ExpJust::Axiom(SchemaId::Imp3) });
        let chain = expand_derived(DerivedRule::ChIn, &[negate(h.clone()), imp(falsum(), x.clone())], &imp(h, x)).expect("chain");
        let offset = lines.len();
        for l in chain {
            let map = |s: Src| match s {
                Src::Premise(0) => Src::Premise(0),
                Src::Premise(_) => Src::Line(0),
                Src::Line(i) => Src::Line(i + offset),
            };
            let just = match l.just {
                ExpJust::Mp(a, b) => ExpJust::Mp(map(a), map(b)),
                ExpJust::Rewrite(a) => ExpJust::Rewrite(map(a)),
                j => j,
            };
            lines.push(ExpLine { formula: l.formula, just });
        }
    }
    Ok(Substantiation { formula, premises, lines })
}

/// Obligations attached to an accepted ν-instance: none when the instance
/// substantiates, otherwise a `Feasibility` item.
pub fn feasibility(e: &Formula, table: &AxiomTable, budget: usize) -> Vec<Obligation> {
    match substantiate(e, table, budget) {
        Ok(s) if crate::calculus::verify_expansion(&s.lines, &s.premises, Mode::Closed).is_ok() => Vec::new(),
        Ok(_) => vec![Obligation::new(ObligationKind::Feasibility, None, None, "substantiation failed to verify")],
        Err(err) => {
            let m = match_nu_schema(e);
            let t = m.as_ref().and_then(|m| subscripts(m).into_iter().next());
            vec![Obligation::new(ObligationKind::Feasibility, None, t, err.to_string())]
        }
    }
}

fn normalize_termoid(t: &Termoid, table: &AxiomTable, budget: usize) -> Termoid {
    match t {
        Termoid::App(Func::Nu, xs) => {
            let inner = normalize_termoid(&xs[0], table, budget);
            match &inner {
                Termoid::Num(_) => inner,
                Termoid::App(Func::PiF, ys) => app1(Func::NuF, ys[0].clone()),
                _ if inner.is_closed() && !inner.contains_iota() => {
                    match eval_termoid(&inner, &Valuation::new(), table).ok().and_then(|c| c.materialize(budget).ok()) {
                        Some(n) => Termoid::Num(n),
                        None => app1(Func::Nu, inner),
                    }
                }
                _ => app1(Func::Nu, inner),
            }
        }
        Termoid::App(f, xs) => Termoid::App(*f, xs.iter().map(|x| normalize_termoid(x, table, budget)).collect()),
        Termoid::Iota(v, body) => Termoid::Iota(*v, Box::new(normalize_nu(body, table, budget))),
        _ => t.clone(),
    }
}

/// Reads ν-notation: `ν` of a numeral is the numeral, `ν` of `π_F` is
/// `ν_F`, and `ν` of a materializable closed termoid is its value.
pub fn normalize_nu(e: &Formula, table: &AxiomTable, budget: usize) -> Formula {
    let rec = |x: &Formula| normalize_nu(x, table, budget);
    let t = |x: &Termoid| normalize_termoid(x, table, budget);
    match e {
        Formula::Atom(p, l, r) => Formula::Atom(*p, t(l), t(r)),
        Formula::Imp(a, b) => imp(rec(a), rec(b)),
        Formula::And(a, b) => and(rec(a), rec(b)),
        Formula::Or(a, b) => or(rec(a), rec(b)),
        Formula::Forall(v, a) => Formula::Forall(*v, Box::new(rec(a))),
        Formula::Exists(v, a) => Formula::Exists(*v, Box::new(rec(a))),
        Formula::Kleene(r) => kleene(t(r)),
    }
}
