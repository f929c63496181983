//! Abstract syntax of LAri and its Kleene extension.
//!
//! Negation is not a constructor: `neg(A)` is `imp(A, bot)` where `bot` is
//! the anti-axiom `0 = 1`.

mod parse;
mod print;

pub use parse::{parse_formula, parse_termoid, SyntaxError};

use num_bigint::BigUint;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

/// The variable with the given index (≥ 1).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Var(pub u32);

impl serde::Serialize for Var {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Function symbols of the table Ta.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Func {
    Suc,
    Sg,
    Ssg,
    Exp0,
    Exp1,
    Exp2,
    Exp00,
    Exp01,
    Exp02,
    Ell1,
    Cfor,
    Fl,
    Sigma,
    Len,
    Ax,
    /// numeroid of the value of a constant termoid
    Nu,
    /// numeroid of the code of the formula denoted by a Kleene atom
    NuF,
    /// code generator of the formula denoted by a Kleene atom
    PiF,
    Add,
    Mul,
    Pow,
    Msd,
    /// `Mp`, the code combiner for modus ponens
    MpCode,
    /// `mp`, the guarded combiner
    Mp,
    Ell,
    E,
}

/// (symbol, name, arity, position in the table for that arity)
const TABLE: [(Func, &str, u8, u32); 26] = [
    (Func::Suc, "suc", 1, 1),
    (Func::Sg, "sg", 1, 2),
    (Func::Ssg, "ssg", 1, 3),
    (Func::Exp0, "exp0", 1, 4),
    (Func::Exp1, "exp1", 1, 5),
    (Func::Exp2, "exp2", 1, 6),
    (Func::Exp00, "exp00", 1, 7),
    (Func::Exp01, "exp01", 1, 8),
    (Func::Exp02, "exp02", 1, 9),
    (Func::Ell1, "ell1", 1, 10),
    (Func::Cfor, "cfor", 1, 11),
    (Func::Fl, "fl", 1, 12),
    (Func::Sigma, "sigma", 1, 13),
    (Func::Len, "len", 1, 14),
    (Func::Ax, "ax", 1, 15),
    (Func::Nu, "nu", 1, 16),
    (Func::NuF, "nuF", 1, 17),
    (Func::PiF, "piF", 1, 18),
    (Func::Add, "add", 2, 1),
    (Func::Mul, "mul", 2, 2),
    (Func::Pow, "pow", 2, 3),
    (Func::Msd, "msd", 2, 4),
    (Func::MpCode, "Mp", 2, 5),
    (Func::Mp, "mp", 2, 6),
    (Func::Ell, "ell", 2, 7),
    (Func::E, "e", 2, 8),
];

impl Func {
    fn row(self) -> &'static (Func, &'static str, u8, u32) {
        TABLE.iter().find(|r| r.0 == self).expect("every symbol has a table row")
    }

    pub fn name(self) -> &'static str {
        self.row().1
    }

    pub fn arity(self) -> u8 {
        self.row().2
    }

    /// Position in Ta among the symbols of the same arity (1-based).
    pub fn table_index(self) -> u32 {
        self.row().3
    }

    pub fn from_name(name: &str) -> Option<Func> {
        TABLE.iter().find(|r| r.1 == name).map(|r| r.0)
    }

    pub fn from_table(arity: u8, index: u32) -> Option<Func> {
        TABLE.iter().find(|r| r.2 == arity && r.3 == index).map(|r| r.0)
    }

    pub fn all() -> impl Iterator<Item = Func> {
        TABLE.iter().map(|r| r.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Pred {
    Eq,
    Lt,
    Le,
}

impl Pred {
    pub fn name(self) -> &'static str {
        match self {
            Pred::Eq => "eq",
            Pred::Lt => "lt",
            Pred::Le => "le",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Termoid {
    Var(Var),
    /// `Su^n 0`; atomic.
    Num(BigUint),
    App(Func, Vec<Termoid>),
    Iota(Var, Box<Formula>),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Formula {
    Atom(Pred, Termoid, Termoid),
    Imp(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
    /// `F_r`
    Kleene(Termoid),
}

/// Kinds of side conditions collected while checking.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ObligationKind {
    /// the range of the variable must be nonempty
    RangeNonEmpty,
    /// the termoid must be free for the variable
    FreeFor,
    /// the value of the termoid must lie in the range of the variable
    ValueInRange,
    /// a Kleene schema instance whose subscripts cannot be materialized
    Feasibility,
    /// a generalization that is only sound once a hypothesis is discharged
    DischargeFirst,
    /// a schema whose stated form is ambiguous and fixed by convention
    Convention,
}

impl ObligationKind {
    pub fn name(self) -> &'static str {
        match self {
            ObligationKind::RangeNonEmpty => "RangeNonEmpty",
            ObligationKind::FreeFor => "FreeFor",
            ObligationKind::ValueInRange => "ValueInRange",
            ObligationKind::Feasibility => "Feasibility",
            ObligationKind::DischargeFirst => "DischargeFirst",
            ObligationKind::Convention => "Convention",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Obligation {
    pub kind: ObligationKind,
    pub variable: Option<Var>,
    pub termoid: Option<Termoid>,
    /// label of the line that raised it, filled in by the checker
    pub origin: Option<String>,
    /// result of the check when it is decidable at the syntax level
    pub holds: Option<bool>,
    pub note: String,
}

impl Obligation {
    pub fn new(kind: ObligationKind, variable: Option<Var>, termoid: Option<Termoid>, note: impl Into<String>) -> Self {
        Obligation { kind, variable, termoid, origin: None, holds: None, note: note.into() }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum SyntaxOpError {
    #[error("{termoid} is not free for {var} in the formula")]
    CaptureViolation { var: Var, termoid: String },
    #[error("closure order omits free variable {0}")]
    IncompleteClosure(Var),
}

// ---------------------------------------------------------------------------
// constructors

pub fn var(i: u32) -> Termoid {
    Termoid::Var(Var(i))
}

pub fn num(n: u64) -> Termoid {
    Termoid::Num(BigUint::from(n))
}

pub fn app(f: Func, args: Vec<Termoid>) -> Termoid {
    assert_eq!(f.arity() as usize, args.len(), "arity of {}", f.name());
    Termoid::App(f, args)
}

pub fn app1(f: Func, a: Termoid) -> Termoid {
    app(f, vec![a])
}

pub fn app2(f: Func, a: Termoid, b: Termoid) -> Termoid {
    app(f, vec![a, b])
}

pub fn atom(p: Pred, l: Termoid, r: Termoid) -> Formula {
    Formula::Atom(p, l, r)
}

pub fn eq(l: Termoid, r: Termoid) -> Formula {
    Formula::Atom(Pred::Eq, l, r)
}

pub fn imp(a: Formula, b: Formula) -> Formula {
    Formula::Imp(Box::new(a), Box::new(b))
}

pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}

pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or(Box::new(a), Box::new(b))
}

pub fn forall(v: Var, a: Formula) -> Formula {
    Formula::Forall(v, Box::new(a))
}

pub fn exists(v: Var, a: Formula) -> Formula {
    Formula::Exists(v, Box::new(a))
}

pub fn kleene(r: Termoid) -> Formula {
    Formula::Kleene(r)
}

/// The anti-axiom `0 = 1`.
pub fn falsum() -> Formula {
    eq(num(0), num(1))
}

pub fn negate(e: Formula) -> Formula {
    imp(e, falsum())
}

/// The value of the code of `bot`, i.e. 2^15 · 3^23 · 5^529.
pub fn vf_value() -> &'static BigUint {
    static V: OnceLock<BigUint> = OnceLock::new();
    V.get_or_init(|| BigUint::from(2u32).pow(15) * BigUint::from(3u32).pow(23) * BigUint::from(5u32).pow(529))
}

/// The numeroid whose length is the code of `bot`.
pub fn vf() -> Termoid {
    Termoid::Num(vf_value().clone())
}

/// `ell(t, vf) = 0`
fn proves_falsum(t: Termoid) -> Formula {
    eq(app2(Func::Ell, t, vf()), num(0))
}

/// Body of the description of omega, with x1 the described variable.
pub fn omega_body() -> Formula {
    let x1 = var(1);
    let x2 = var(2);
    or(
        and(
            proves_falsum(x1.clone()),
            negate(exists(Var(2), and(atom(Pred::Lt, x2.clone(), x1.clone()), proves_falsum(x2)))),
        ),
        and(eq(x1, num(0)), con_ari()),
    )
}

/// The least code of a proof of `bot`, or 0 if there is none.
pub fn omega() -> Termoid {
    Termoid::Iota(Var(1), Box::new(omega_body()))
}

/// `¬∃x1 ell(x1, vf) = 0`
pub fn con_ari() -> Formula {
    negate(exists(Var(1), proves_falsum(var(1))))
}

// ---------------------------------------------------------------------------
// free variables

impl Termoid {
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Termoid::Var(v) => {
                if !bound.contains(v) {
                    out.insert(*v);
                }
            }
            Termoid::Num(_) => {}
            Termoid::App(_, args) => args.iter().for_each(|a| a.collect_free(bound, out)),
            Termoid::Iota(v, body) => {
                bound.push(*v);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn occurs_free(&self, v: Var) -> bool {
        self.free_vars().contains(&v)
    }

    pub fn contains_iota(&self) -> bool {
        match self {
            Termoid::Var(_) | Termoid::Num(_) => false,
            Termoid::App(_, args) => args.iter().any(Termoid::contains_iota),
            Termoid::Iota(..) => true,
        }
    }

    /// Replaces free occurrences of `v` by `t`. Returns whether `t` stayed
    /// free for `v` (no variable of `t` got captured).
    pub fn subst(&self, v: Var, t: &Termoid) -> (Termoid, bool) {
        let fv = t.free_vars();
        let mut ok = true;
        let out = self.subst_inner(v, t, &fv, &mut Vec::new(), &mut ok);
        (out, ok)
    }

    fn subst_inner(&self, v: Var, t: &Termoid, fv: &BTreeSet<Var>, binders: &mut Vec<Var>, ok: &mut bool) -> Termoid {
        match self {
            Termoid::Var(w) if *w == v => {
                if binders.iter().any(|b| fv.contains(b)) {
                    *ok = false;
                }
                t.clone()
            }
            Termoid::Var(_) | Termoid::Num(_) => self.clone(),
            Termoid::App(f, args) => Termoid::App(*f, args.iter().map(|a| a.subst_inner(v, t, fv, binders, ok)).collect()),
            Termoid::Iota(w, body) => {
                if *w == v {
                    return self.clone();
                }
                binders.push(*w);
                let b = body.subst_inner(v, t, fv, binders, ok);
                binders.pop();
                Termoid::Iota(*w, Box::new(b))
            }
        }
    }

    /// Number of nodes; used to bound random generation.
    pub fn size(&self) -> usize {
        match self {
            Termoid::Var(_) | Termoid::Num(_) => 1,
            Termoid::App(_, args) => 1 + args.iter().map(Termoid::size).sum::<usize>(),
            Termoid::Iota(_, body) => 1 + body.size(),
        }
    }
}

impl Formula {
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Atom(_, l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                bound.push(*v);
                a.collect_free(bound, out);
                bound.pop();
            }
            Formula::Kleene(r) => r.collect_free(bound, out),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn occurs_free(&self, v: Var) -> bool {
        self.free_vars().contains(&v)
    }

    pub fn has_kleene(&self) -> bool {
        match self {
            Formula::Atom(..) => false,
            Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) => a.has_kleene() || b.has_kleene(),
            Formula::Forall(_, a) | Formula::Exists(_, a) => a.has_kleene(),
            Formula::Kleene(_) => true,
        }
    }

    pub fn is_falsum(&self) -> bool {
        *self == falsum()
    }

    /// `Some(A)` when the formula is `A ⊃ bot`.
    pub fn as_negation(&self) -> Option<&Formula> {
        match self {
            Formula::Imp(a, b) if b.is_falsum() => Some(a),
            _ => None,
        }
    }

    pub fn as_imp(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Imp(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Replaces free occurrences of `v` by `t`, reporting capture.
    pub fn subst(&self, v: Var, t: &Termoid) -> (Formula, bool) {
        let fv = t.free_vars();
        let mut ok = true;
        let out = self.subst_inner(v, t, &fv, &mut Vec::new(), &mut ok);
        (out, ok)
    }

    fn subst_inner(&self, v: Var, t: &Termoid, fv: &BTreeSet<Var>, binders: &mut Vec<Var>, ok: &mut bool) -> Formula {
        let mut rec = |f: &Formula, binders: &mut Vec<Var>| Box::new(f.subst_inner(v, t, fv, binders, ok));
        match self {
            Formula::Atom(p, l, r) => {
                let l = l.subst_inner(v, t, fv, binders, ok);
                let r = r.subst_inner(v, t, fv, binders, ok);
                Formula::Atom(*p, l, r)
            }
            Formula::Imp(a, b) => {
                let a = rec(a, binders);
                Formula::Imp(a, rec(b, binders))
            }
            Formula::And(a, b) => {
                let a = rec(a, binders);
                Formula::And(a, rec(b, binders))
            }
            Formula::Or(a, b) => {
                let a = rec(a, binders);
                Formula::Or(a, rec(b, binders))
            }
            Formula::Forall(w, a) | Formula::Exists(w, a) => {
                if *w == v {
                    return self.clone();
                }
                binders.push(*w);
                let a = rec(a, binders);
                binders.pop();
                match self {
                    Formula::Forall(..) => Formula::Forall(*w, a),
                    _ => Formula::Exists(*w, a),
                }
            }
            Formula::Kleene(r) => Formula::Kleene(r.subst_inner(v, t, fv, binders, ok)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_, l, r) => 1 + l.size() + r.size(),
            Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.size(),
            Formula::Kleene(r) => 1 + r.size(),
        }
    }

    /// Every termoid occurring at an atom or Kleene subscript, outermost first.
    pub fn termoids(&self) -> Vec<&Termoid> {
        let mut out = Vec::new();
        self.collect_termoids(&mut out);
        out
    }

    fn collect_termoids<'a>(&'a self, out: &mut Vec<&'a Termoid>) {
        match self {
            Formula::Atom(_, l, r) => {
                out.push(l);
                out.push(r);
            }
            Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_termoids(out);
                b.collect_termoids(out);
            }
            Formula::Forall(_, a) | Formula::Exists(_, a) => a.collect_termoids(out),
            Formula::Kleene(r) => out.push(r),
        }
    }
}

/// `C[t/v]` with the free-for check.
///
/// In strict mode a capture is an error; otherwise it is returned as a
/// failed `FreeFor` obligation. Substituting a variable for itself yields no
/// obligation.
pub fn substitute(c: &Formula, v: Var, t: &Termoid, strict: bool) -> Result<(Formula, Vec<Obligation>), SyntaxOpError> {
    if *t == Termoid::Var(v) {
        return Ok((c.clone(), Vec::new()));
    }
    let (out, ok) = c.subst(v, t);
    if !ok && strict {
        return Err(SyntaxOpError::CaptureViolation { var: v, termoid: t.to_string() });
    }
    let mut ob = Obligation::new(ObligationKind::FreeFor, Some(v), Some(t.clone()), "");
    ob.holds = Some(ok);
    Ok((out, vec![ob]))
}

/// Universal closure in the given order.
pub fn closure(e: &Formula, order: &[Var]) -> Result<Formula, SyntaxOpError> {
    if let Some(v) = e.free_vars().into_iter().find(|v| !order.contains(v)) {
        return Err(SyntaxOpError::IncompleteClosure(v));
    }
    Ok(order.iter().rev().fold(e.clone(), |acc, v| forall(*v, acc)))
}
