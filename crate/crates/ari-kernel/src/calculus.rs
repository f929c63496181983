//! Axiom schemata, the rules MP and Gen, and the derived rules.

use crate::primes::nth_prime;
use crate::syntax::{
    and, app1, app2, atom, con_ari, eq, exists, falsum, forall, imp, negate, num, omega, omega_body, or, Formula,
    Func, Obligation, ObligationKind, Pred, Termoid, Var,
};
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Open,
    Closed,
}

/// Names of axiom schemata and non-logical axioms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SchemaId {
    Imp0,
    Imp1,
    Imp2,
    Imp3,
    Con1,
    Con2,
    Con3,
    Dis1,
    Dis2,
    Dis3,
    Fi1,
    Fi2,
    Fi3,
    Fi4,
    DisQ,
    WbaA,
    WbaE,
    Br,
    Ref,
    Sym,
    Lea1,
    Lea2,
    LeaRp,
    ES,
    Sba1,
    Sba2,
    Tnd,
    Dne,
    Cvi,
    IndPeano,
    NumeroidAx,
    ElemAx(String),
    DefAx(String),
    /// exponent extraction from an explicit prime factorization
    Gauss(u32),
    Rosser11,
    MOmega,
    Lea1Nu,
    Lea2Nu,
    LeaMpNu,
}

impl SchemaId {
    pub fn name(&self) -> String {
        match self {
            SchemaId::Imp0 => "Imp0".into(),
            SchemaId::Imp1 => "Imp1".into(),
            SchemaId::Imp2 => "Imp2".into(),
            SchemaId::Imp3 => "Imp3".into(),
            SchemaId::Con1 => "Con1".into(),
            SchemaId::Con2 => "Con2".into(),
            SchemaId::Con3 => "Con3".into(),
            SchemaId::Dis1 => "Dis1".into(),
            SchemaId::Dis2 => "Dis2".into(),
            SchemaId::Dis3 => "Dis3".into(),
            SchemaId::Fi1 => "Fi1".into(),
            SchemaId::Fi2 => "Fi2".into(),
            SchemaId::Fi3 => "Fi3".into(),
            SchemaId::Fi4 => "Fi4".into(),
            SchemaId::DisQ => "DisQ".into(),
            SchemaId::WbaA => "WBA-A".into(),
            SchemaId::WbaE => "WBA-E".into(),
            SchemaId::Br => "BR".into(),
            SchemaId::Ref => "Ref".into(),
            SchemaId::Sym => "Sym=".into(),
            SchemaId::Lea1 => "LEA1=".into(),
            SchemaId::Lea2 => "LEA2=".into(),
            SchemaId::LeaRp => "LEA-rp".into(),
            SchemaId::ES => "E-S".into(),
            SchemaId::Sba1 => "SBA1".into(),
            SchemaId::Sba2 => "SBA2".into(),
            SchemaId::Tnd => "TND".into(),
            SchemaId::Dne => "DNE".into(),
            SchemaId::Cvi => "CVI".into(),
            SchemaId::IndPeano => "IndPeano".into(),
            SchemaId::NumeroidAx => "NumeroidAx".into(),
            SchemaId::ElemAx(id) => format!("ElemAx({id})"),
            SchemaId::DefAx(id) => format!("DefAx({id})"),
            SchemaId::Gauss(h) => format!("Ga{h}"),
            SchemaId::Rosser11 => "Rosser11".into(),
            SchemaId::MOmega => "M-omega".into(),
            SchemaId::Lea1Nu => "LEA1nu".into(),
            SchemaId::Lea2Nu => "LEA2nu".into(),
            SchemaId::LeaMpNu => "LEAMPnu".into(),
        }
    }

    /// Parses a justification name. `Sym` and `LEA1` are accepted without
    /// the trailing `=`; `WBA` alone means `WBA-A`.
    pub fn from_name(s: &str) -> Option<SchemaId> {
        let plain = [
            SchemaId::Imp0,
            SchemaId::Imp1,
            SchemaId::Imp2,
            SchemaId::Imp3,
            SchemaId::Con1,
            SchemaId::Con2,
            SchemaId::Con3,
            SchemaId::Dis1,
            SchemaId::Dis2,
            SchemaId::Dis3,
            SchemaId::Fi1,
            SchemaId::Fi2,
            SchemaId::Fi3,
            SchemaId::Fi4,
            SchemaId::DisQ,
            SchemaId::WbaA,
            SchemaId::WbaE,
            SchemaId::Br,
            SchemaId::Ref,
            SchemaId::Sym,
            SchemaId::Lea1,
            SchemaId::Lea2,
            SchemaId::LeaRp,
            SchemaId::ES,
            SchemaId::Sba1,
            SchemaId::Sba2,
            SchemaId::Tnd,
            SchemaId::Dne,
            SchemaId::Cvi,
            SchemaId::IndPeano,
            SchemaId::NumeroidAx,
            SchemaId::Rosser11,
            SchemaId::MOmega,
            SchemaId::Lea1Nu,
            SchemaId::Lea2Nu,
            SchemaId::LeaMpNu,
        ];
        if let Some(id) = plain.iter().find(|id| id.name() == s) {
            return Some(id.clone());
        }
        match s {
            "Sym" => return Some(SchemaId::Sym),
            "LEA1" => return Some(SchemaId::Lea1),
            "LEA2" => return Some(SchemaId::Lea2),
            "WBA" => return Some(SchemaId::WbaA),
            _ => {}
        }
        if let Some(h) = s.strip_prefix("Ga") {
            return h.parse().ok().map(SchemaId::Gauss);
        }
        for (prefix, mk) in [("ElemAx(", SchemaId::ElemAx as fn(String) -> SchemaId), ("DefAx(", SchemaId::DefAx)] {
            if let Some(rest) = s.strip_prefix(prefix).and_then(|r| r.strip_suffix(')')) {
                return Some(mk(rest.to_string()));
            }
        }
        None
    }
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Serialize for SchemaId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

/// Value bound to a schema metavariable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Binding {
    Formula(Formula),
    Termoid(Termoid),
    Var(Var),
    Pred(Pred),
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binding::Formula(e) => write!(f, "{e}"),
            Binding::Termoid(t) => write!(f, "{t}"),
            Binding::Var(v) => write!(f, "{v}"),
            Binding::Pred(p) => f.write_str(p.name()),
        }
    }
}

impl Serialize for Binding {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub type Bindings = BTreeMap<String, Binding>;

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SchemaMatch {
    pub schema: SchemaId,
    pub bindings: Bindings,
    pub obligations: Vec<Obligation>,
    /// universal prefix stripped before the match (outermost first)
    pub prefix: Vec<Var>,
}

impl Serialize for Obligation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Obligation", 6)?;
        st.serialize_field("kind", self.kind.name())?;
        st.serialize_field("variable", &self.variable.map(|v| v.to_string()))?;
        st.serialize_field("termoid", &self.termoid.as_ref().map(|t| t.to_string()))?;
        st.serialize_field("origin", &self.origin)?;
        st.serialize_field("holds", &self.holds)?;
        st.serialize_field("note", &self.note)?;
        st.end()
    }
}

// ---------------------------------------------------------------------------
// pattern language

#[derive(Clone, Debug)]
enum TP {
    Meta(&'static str),
    VarMeta(&'static str),
    Num(u64),
    App(Func, Vec<TP>),
    /// `ι v A` for a bound variable metavariable and formula metavariable
    IotaOf(&'static str, &'static str),
}

#[derive(Clone, Copy, Debug)]
enum PP {
    Fixed(Pred),
    Meta(&'static str),
}

#[derive(Clone, Debug)]
enum FP {
    Meta(&'static str),
    Atom(PP, TP, TP),
    Imp(Box<FP>, Box<FP>),
    And(Box<FP>, Box<FP>),
    Or(Box<FP>, Box<FP>),
    Forall(&'static str, Box<FP>),
    Exists(&'static str, Box<FP>),
    /// `C(t)`: formula metavariable with a variable metavariable replaced
    Subst(&'static str, &'static str, TP),
}

fn fm(n: &'static str) -> FP {
    FP::Meta(n)
}
fn tm(n: &'static str) -> TP {
    TP::Meta(n)
}
fn vm(n: &'static str) -> TP {
    TP::VarMeta(n)
}
fn tn(k: u64) -> TP {
    TP::Num(k)
}
fn t1(f: Func, a: TP) -> TP {
    TP::App(f, vec![a])
}
fn t2(f: Func, a: TP, b: TP) -> TP {
    TP::App(f, vec![a, b])
}
fn pimp(a: FP, b: FP) -> FP {
    FP::Imp(Box::new(a), Box::new(b))
}
fn pand(a: FP, b: FP) -> FP {
    FP::And(Box::new(a), Box::new(b))
}
fn por(a: FP, b: FP) -> FP {
    FP::Or(Box::new(a), Box::new(b))
}
fn pall(v: &'static str, a: FP) -> FP {
    FP::Forall(v, Box::new(a))
}
fn pex(v: &'static str, a: FP) -> FP {
    FP::Exists(v, Box::new(a))
}
fn peq(a: TP, b: TP) -> FP {
    FP::Atom(PP::Fixed(Pred::Eq), a, b)
}
fn plt(a: TP, b: TP) -> FP {
    FP::Atom(PP::Fixed(Pred::Lt), a, b)
}
fn pbot() -> FP {
    peq(tn(0), tn(1))
}
fn pneg(a: FP) -> FP {
    pimp(a, pbot())
}
fn psub(c: &'static str, v: &'static str, t: TP) -> FP {
    FP::Subst(c, v, t)
}

struct Matcher {
    b: Bindings,
    deferred: Vec<(&'static str, &'static str, TP, Formula)>,
}

impl Matcher {
    fn new() -> Self {
        Matcher { b: Bindings::new(), deferred: Vec::new() }
    }

    fn bind(&mut self, name: &str, val: Binding) -> bool {
        match self.b.get(name) {
            Some(old) => *old == val,
            None => {
                self.b.insert(name.to_string(), val);
                true
            }
        }
    }

    fn mt(&mut self, p: &TP, t: &Termoid) -> bool {
        match (p, t) {
            (TP::Meta(n), _) => self.bind(n, Binding::Termoid(t.clone())),
            (TP::VarMeta(n), Termoid::Var(v)) => self.bind(n, Binding::Var(*v)),
            (TP::Num(k), Termoid::Num(m)) => *m == (*k).into(),
            (TP::App(f, ps), Termoid::App(g, ts)) => {
                f == g && ps.len() == ts.len() && ps.iter().zip(ts).all(|(p, t)| self.mt(p, t))
            }
            (TP::IotaOf(v, a), Termoid::Iota(w, body)) => {
                self.bind(v, Binding::Var(*w)) && self.bind(a, Binding::Formula((**body).clone()))
            }
            _ => false,
        }
    }

    fn mf(&mut self, p: &FP, e: &Formula) -> bool {
        match (p, e) {
            (FP::Meta(n), _) => self.bind(n, Binding::Formula(e.clone())),
            (FP::Atom(pp, l, r), Formula::Atom(q, a, b)) => {
                let pred_ok = match pp {
                    PP::Fixed(x) => x == q,
                    PP::Meta(n) => self.bind(n, Binding::Pred(*q)),
                };
                pred_ok && self.mt(l, a) && self.mt(r, b)
            }
            (FP::Imp(p1, p2), Formula::Imp(a, b)) | (FP::And(p1, p2), Formula::And(a, b)) | (FP::Or(p1, p2), Formula::Or(a, b)) => {
                self.mf(p1, a) && self.mf(p2, b)
            }
            (FP::Forall(v, p1), Formula::Forall(w, a)) | (FP::Exists(v, p1), Formula::Exists(w, a)) => {
                self.bind(v, Binding::Var(*w)) && self.mf(p1, a)
            }
            (FP::Subst(c, v, t), _) => {
                self.deferred.push((c, v, t.clone(), e.clone()));
                true
            }
            _ => false,
        }
    }

    /// Resolves `C(t)` nodes once `C` and the variable are bound.
    fn resolve(&mut self) -> Option<Vec<Obligation>> {
        let mut obs = Vec::new();
        for (c, v, tp, target) in std::mem::take(&mut self.deferred) {
            let (Some(Binding::Formula(cf)), Some(Binding::Var(var))) = (self.b.get(c).cloned(), self.b.get(v).cloned()) else {
                return None;
            };
            let mut found = None;
            if !parallel_f(&cf, var, &target, &mut Vec::new(), &mut found) {
                return None;
            }
            let t = match found {
                Some(t) => t,
                // the variable does not occur: any termoid fits, the pattern may already fix one
                None => match &tp {
                    TP::Meta(n) => match self.b.get(*n) {
                        Some(Binding::Termoid(t)) => t.clone(),
                        _ => Termoid::Var(var),
                    },
                    _ => match instantiate_t(&tp, &self.b) {
                        Some(t) => t,
                        None => Termoid::Var(var),
                    },
                },
            };
            if !self.mt(&tp, &t) {
                return None;
            }
            let (out, free) = cf.subst(var, &t);
            if out != target {
                return None;
            }
            if t != Termoid::Var(var) {
                let mut ob = Obligation::new(ObligationKind::FreeFor, Some(var), Some(t.clone()), "");
                ob.holds = Some(free);
                obs.push(ob);
            }
        }
        Some(obs)
    }
}

/// Walks `c` and `target` in parallel; free occurrences of `v` in `c` must
/// line up with one common termoid in `target`.
fn parallel_f(c: &Formula, v: Var, target: &Formula, bound: &mut Vec<Var>, found: &mut Option<Termoid>) -> bool {
    match (c, target) {
        (Formula::Atom(p, a, b), Formula::Atom(q, x, y)) => {
            p == q && parallel_t(a, v, x, bound, found) && parallel_t(b, v, y, bound, found)
        }
        (Formula::Imp(a, b), Formula::Imp(x, y)) | (Formula::And(a, b), Formula::And(x, y)) | (Formula::Or(a, b), Formula::Or(x, y)) => {
            parallel_f(a, v, x, bound, found) && parallel_f(b, v, y, bound, found)
        }
        (Formula::Forall(w, a), Formula::Forall(u, x)) | (Formula::Exists(w, a), Formula::Exists(u, x)) => {
            if w != u {
                return false;
            }
            if *w == v {
                return a == x;
            }
            bound.push(*w);
            let ok = parallel_f(a, v, x, bound, found);
            bound.pop();
            ok
        }
        (Formula::Kleene(a), Formula::Kleene(x)) => parallel_t(a, v, x, bound, found),
        _ => false,
    }
}

fn parallel_t(c: &Termoid, v: Var, target: &Termoid, bound: &mut Vec<Var>, found: &mut Option<Termoid>) -> bool {
    match c {
        Termoid::Var(w) if *w == v && !bound.contains(w) => match found {
            Some(t) => t == target,
            None => {
                *found = Some(target.clone());
                true
            }
        },
        Termoid::Var(_) | Termoid::Num(_) => c == target,
        Termoid::App(f, args) => match target {
            Termoid::App(g, xs) if f == g && args.len() == xs.len() => {
                args.iter().zip(xs).all(|(a, x)| parallel_t(a, v, x, bound, found))
            }
            _ => false,
        },
        Termoid::Iota(w, body) => match target {
            Termoid::Iota(u, x) if w == u => {
                if *w == v {
                    return body == x;
                }
                bound.push(*w);
                let ok = parallel_f(body, v, x, bound, found);
                bound.pop();
                ok
            }
            _ => false,
        },
    }
}

fn instantiate_t(p: &TP, b: &Bindings) -> Option<Termoid> {
    Some(match p {
        TP::Meta(n) => match b.get(*n)? {
            Binding::Termoid(t) => t.clone(),
            _ => return None,
        },
        TP::VarMeta(n) => match b.get(*n)? {
            Binding::Var(v) => Termoid::Var(*v),
            _ => return None,
        },
        TP::Num(k) => num(*k),
        TP::App(f, ps) => Termoid::App(*f, ps.iter().map(|p| instantiate_t(p, b)).collect::<Option<_>>()?),
        TP::IotaOf(v, a) => match (b.get(*v)?, b.get(*a)?) {
            (Binding::Var(v), Binding::Formula(a)) => Termoid::Iota(*v, Box::new(a.clone())),
            _ => return None,
        },
    })
}

fn get_var(b: &Bindings, n: &str) -> Option<Var> {
    match b.get(n)? {
        Binding::Var(v) => Some(*v),
        _ => None,
    }
}

fn get_formula<'a>(b: &'a Bindings, n: &str) -> Option<&'a Formula> {
    match b.get(n)? {
        Binding::Formula(e) => Some(e),
        _ => None,
    }
}

fn get_termoid<'a>(b: &'a Bindings, n: &str) -> Option<&'a Termoid> {
    match b.get(n)? {
        Binding::Termoid(t) => Some(t),
        _ => None,
    }
}

fn instantiate_f(p: &FP, b: &Bindings) -> Option<Formula> {
    Some(match p {
        FP::Meta(n) => get_formula(b, n)?.clone(),
        FP::Atom(pp, l, r) => {
            let pred = match pp {
                PP::Fixed(x) => *x,
                PP::Meta(n) => match b.get(*n)? {
                    Binding::Pred(p) => *p,
                    _ => return None,
                },
            };
            atom(pred, instantiate_t(l, b)?, instantiate_t(r, b)?)
        }
        FP::Imp(x, y) => imp(instantiate_f(x, b)?, instantiate_f(y, b)?),
        FP::And(x, y) => and(instantiate_f(x, b)?, instantiate_f(y, b)?),
        FP::Or(x, y) => or(instantiate_f(x, b)?, instantiate_f(y, b)?),
        FP::Forall(v, x) => forall(get_var(b, v)?, instantiate_f(x, b)?),
        FP::Exists(v, x) => exists(get_var(b, v)?, instantiate_f(x, b)?),
        FP::Subst(c, v, t) => get_formula(b, c)?.subst(get_var(b, v)?, &instantiate_t(t, b)?).0,
    })
}

// ---------------------------------------------------------------------------
// the schema table

type Side = fn(&Bindings) -> Option<Vec<Obligation>>;
type Custom = fn(&Formula) -> Option<(SchemaId, Bindings, Vec<Obligation>)>;
type CustomInst = fn(&SchemaId, &Bindings) -> Option<Formula>;

enum Shape {
    Pattern(FP, Side),
    Custom(Custom, CustomInst),
}

struct Schema {
    /// for custom schemata, the family representative
    id: SchemaId,
    shape: Shape,
}

fn no_side(_: &Bindings) -> Option<Vec<Obligation>> {
    Some(Vec::new())
}

fn fictitious(b: &Bindings) -> Option<Vec<Obligation>> {
    let (v, a) = (get_var(b, "mu")?, get_formula(b, "A")?);
    (!a.occurs_free(v)).then(Vec::new)
}

fn occurring(b: &Bindings) -> Option<Vec<Obligation>> {
    let (v, c) = (get_var(b, "mu")?, get_formula(b, "C")?);
    c.occurs_free(v).then(Vec::new)
}

fn convention(note: &'static str) -> Vec<Obligation> {
    vec![Obligation::new(ObligationKind::Convention, None, None, note)]
}

fn side_disq(_: &Bindings) -> Option<Vec<Obligation>> {
    Some(convention("quantifier distribution schema with an ambiguous quantifier"))
}

fn side_br(b: &Bindings) -> Option<Vec<Obligation>> {
    fictitious(b)
}

fn side_es(b: &Bindings) -> Option<Vec<Obligation>> {
    let (v, t) = (get_var(b, "mu")?, get_termoid(b, "t")?);
    if t.occurs_free(v) {
        return None;
    }
    Some(vec![Obligation::new(ObligationKind::RangeNonEmpty, Some(v), Some(t.clone()), "")])
}

fn side_sba(b: &Bindings) -> Option<Vec<Obligation>> {
    let (v, t) = (get_var(b, "mu")?, get_termoid(b, "t")?);
    let mut out = Vec::new();
    if t.contains_iota() {
        out.push(Obligation::new(ObligationKind::ValueInRange, Some(v), Some(t.clone()), ""));
    }
    Some(out)
}

fn side_cvi(b: &Bindings) -> Option<Vec<Obligation>> {
    let (m, k, a) = (get_var(b, "mu")?, get_var(b, "kappa")?, get_formula(b, "A")?);
    if m == k || a.occurs_free(k) {
        return None;
    }
    Some(convention("course-of-values induction in its standard shape"))
}

fn side_ind(b: &Bindings) -> Option<Vec<Obligation>> {
    get_var(b, "mu").map(|_| Vec::new())
}

fn side_rosser(b: &Bindings) -> Option<Vec<Obligation>> {
    let (m, k, a) = (get_var(b, "mu")?, get_var(b, "kappa")?, get_formula(b, "A")?);
    if m == k || a.occurs_free(k) {
        return None;
    }
    Some(convention("description axiom"))
}

/// `LEA-rp`: `r = s ⊃ f(.., r, ..) = f(.., s, ..)`, one argument place.
fn custom_lea_rp(e: &Formula) -> Option<(SchemaId, Bindings, Vec<Obligation>)> {
    let (ante, cons) = e.as_imp()?;
    let Formula::Atom(Pred::Eq, r, s) = ante else { return None };
    let Formula::Atom(Pred::Eq, Termoid::App(f, xs), Termoid::App(g, ys)) = cons else { return None };
    if f != g || xs.len() != ys.len() {
        return None;
    }
    let diffs: Vec<usize> = (0..xs.len()).filter(|&i| xs[i] != ys[i]).collect();
    let place = match diffs.as_slice() {
        [i] if xs[*i] == *r && ys[*i] == *s => *i,
        [] if r == s => xs.iter().position(|x| x == r)?,
        _ => return None,
    };
    let mut ctx = xs.clone();
    ctx[place] = Termoid::Var(HOLE);
    let mut b = Bindings::new();
    b.insert("r".into(), Binding::Termoid(r.clone()));
    b.insert("s".into(), Binding::Termoid(s.clone()));
    b.insert("context".into(), Binding::Termoid(Termoid::App(*f, ctx)));
    Some((SchemaId::LeaRp, b, Vec::new()))
}

/// Index of the hole variable in `LEA-rp` contexts; real variables start at 1.
const HOLE: Var = Var(0);

fn fill(ctx: &Termoid, t: &Termoid) -> Termoid {
    match ctx {
        Termoid::App(f, xs) => Termoid::App(*f, xs.iter().map(|x| if *x == Termoid::Var(HOLE) { t.clone() } else { x.clone() }).collect()),
        _ => ctx.clone(),
    }
}

fn inst_lea_rp(_: &SchemaId, b: &Bindings) -> Option<Formula> {
    let (r, s, ctx) = (get_termoid(b, "r")?, get_termoid(b, "s")?, get_termoid(b, "context")?);
    Some(imp(eq(r.clone(), s.clone()), eq(fill(ctx, r), fill(ctx, s))))
}

/// Left-associated product of `pow(num(p_g), φ_g)` over consecutive primes.
pub fn prime_product(factors: &[Termoid]) -> Termoid {
    let pw = |g: usize, e: &Termoid| app2(Func::Pow, num(nth_prime(g as u64).unwrap()), e.clone());
    let mut acc = pw(0, &factors[0]);
    for (g, e) in factors.iter().enumerate().skip(1) {
        acc = app2(Func::Mul, acc, pw(g, e));
    }
    acc
}

fn split_product(t: &Termoid) -> Option<Vec<Termoid>> {
    let pow_of = |t: &Termoid, g: usize| match t {
        Termoid::App(Func::Pow, xs) if xs[0] == num(nth_prime(g as u64).unwrap()) => Some(xs[1].clone()),
        _ => None,
    };
    let mut rev = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            Termoid::App(Func::Mul, xs) if !matches!(xs[0], Termoid::Num(_)) => {
                rev.push(&xs[1]);
                cur = &xs[0];
            }
            _ => {
                rev.push(cur);
                break;
            }
        }
    }
    rev.reverse();
    rev.iter().enumerate().map(|(g, f)| pow_of(f, g)).collect()
}

/// `Ga_h`: `(p_0^φ_0 · … · p_k^φ_k)_h = φ_h`.
fn custom_gauss(e: &Formula) -> Option<(SchemaId, Bindings, Vec<Obligation>)> {
    let Formula::Atom(Pred::Eq, Termoid::App(f, xs), rhs) = e else { return None };
    let h = match f {
        Func::Exp0 => 0,
        Func::Exp1 => 1,
        Func::Exp2 => 2,
        _ => return None,
    };
    let factors = split_product(&xs[0])?;
    if factors.get(h)? != rhs {
        return None;
    }
    let mut b = Bindings::new();
    b.insert("product".into(), Binding::Termoid(xs[0].clone()));
    b.insert("exponent".into(), Binding::Termoid(rhs.clone()));
    Some((SchemaId::Gauss(h as u32), b, Vec::new()))
}

fn inst_gauss(id: &SchemaId, b: &Bindings) -> Option<Formula> {
    let SchemaId::Gauss(h) = id else { return None };
    let f = [Func::Exp0, Func::Exp1, Func::Exp2].get(*h as usize)?;
    Some(eq(app1(*f, get_termoid(b, "product")?.clone()), get_termoid(b, "exponent")?.clone()))
}

/// `suc(n) = n+1` and its converse on numeroids.
fn custom_numeroid(e: &Formula) -> Option<(SchemaId, Bindings, Vec<Obligation>)> {
    let Formula::Atom(Pred::Eq, l, r) = e else { return None };
    let check = |s: &Termoid, n: &Termoid| match (s, n) {
        (Termoid::App(Func::Suc, xs), Termoid::Num(m)) => match &xs[0] {
            Termoid::Num(k) => (k + 1u32 == *m).then(|| k.clone()),
            _ => None,
        },
        _ => None,
    };
    let (k, dir) = if let Some(k) = check(l, r) { (k, "su-Su") } else { (check(r, l)?, "Su-su") };
    let mut b = Bindings::new();
    b.insert("n".into(), Binding::Termoid(Termoid::Num(k)));
    b.insert("direction".into(), Binding::Termoid(Termoid::Num(((dir == "Su-su") as u32).into())));
    Some((SchemaId::NumeroidAx, b, Vec::new()))
}

fn inst_numeroid(_: &SchemaId, b: &Bindings) -> Option<Formula> {
    let Termoid::Num(k) = get_termoid(b, "n")? else { return None };
    let s = app1(Func::Suc, Termoid::Num(k.clone()));
    let n = Termoid::Num(k + 1u32);
    Some(if *get_termoid(b, "direction")? == num(0) { eq(s, n) } else { eq(n, s) })
}

/// The description axiom for omega, an instance of its defining disjunction.
pub fn m_omega() -> Formula {
    omega_body().subst(Var(1), &omega()).0
}

fn custom_m_omega(e: &Formula) -> Option<(SchemaId, Bindings, Vec<Obligation>)> {
    (*e == m_omega()).then(|| (SchemaId::MOmega, Bindings::new(), Vec::new()))
}

fn inst_m_omega(_: &SchemaId, _: &Bindings) -> Option<Formula> {
    Some(m_omega())
}

/// Antecedent of the first axiom-definition of `ℓ₁`.
pub fn ant1(m: &Termoid) -> Formula {
    and(eq(m.clone(), app2(Func::Pow, num(2), app1(Func::Exp0, m.clone()))), eq(app1(Func::Ax, app1(Func::Exp0, m.clone())), num(0)))
}

/// Antecedent of the second axiom-definition of `ℓ₁`, left-associated.
pub fn ant2(m: &Termoid) -> Formula {
    let e1 = app1(Func::Exp1, m.clone());
    let e2 = app1(Func::Exp2, m.clone());
    and(
        and(
            and(eq(m.clone(), app2(Func::Mp, e1.clone(), e2.clone())), negate(eq(m.clone(), num(0)))),
            eq(app1(Func::Ell1, e1), num(0)),
        ),
        eq(app1(Func::Ell1, e2), num(0)),
    )
}

fn ant_pattern(which: u8) -> FP {
    let m = || vm("mu");
    let zero = || tn(0);
    match which {
        1 => pand(peq(m(), t2(Func::Pow, tn(2), t1(Func::Exp0, m()))), peq(t1(Func::Ax, t1(Func::Exp0, m())), zero())),
        2 => pand(
            pand(
                pand(peq(m(), t2(Func::Mp, t1(Func::Exp1, m()), t1(Func::Exp2, m()))), pneg(peq(m(), zero()))),
                peq(t1(Func::Ell1, t1(Func::Exp1, m())), zero()),
            ),
            peq(t1(Func::Ell1, t1(Func::Exp2, m())), zero()),
        ),
        _ => pneg(por(ant_pattern(1), ant_pattern(2))),
    }
}

fn schemas() -> &'static [Schema] {
    static S: OnceLock<Vec<Schema>> = OnceLock::new();
    S.get_or_init(build_schemas)
}

fn build_schemas() -> Vec<Schema> {
    use SchemaId as I;
    let (a, b, c) = (|| fm("A"), || fm("B"), || fm("C"));
    let (r, s, t) = (|| tm("r"), || tm("s"), || tm("t"));
    let pat = |id: SchemaId, p: FP, side: Side| Schema { id, shape: Shape::Pattern(p, side) };
    let mut out = vec![
        pat(I::Imp0, pimp(a(), a()), no_side),
        pat(I::Imp1, pimp(a(), pimp(b(), a())), no_side),
        pat(I::Imp2, pimp(pimp(a(), pimp(b(), c())), pimp(pimp(a(), b()), pimp(a(), c()))), no_side),
        pat(I::Imp3, pimp(pbot(), b()), no_side),
        pat(I::Con1, pimp(pand(a(), b()), a()), no_side),
        pat(I::Con2, pimp(pand(a(), b()), b()), no_side),
        pat(I::Con3, pimp(a(), pimp(b(), pand(a(), b()))), no_side),
        pat(I::Dis1, pimp(a(), por(a(), b())), no_side),
        pat(I::Dis2, pimp(b(), por(a(), b())), no_side),
        pat(I::Dis3, pimp(pand(pimp(a(), c()), pimp(b(), c())), pimp(por(a(), b()), c())), no_side),
        pat(I::Fi1, pimp(pall("mu", a()), a()), fictitious),
        pat(I::Fi2, pimp(a(), pall("mu", a())), fictitious),
        pat(I::Fi3, pimp(a(), pex("mu", a())), fictitious),
        pat(I::Fi4, pimp(pex("mu", a()), a()), fictitious),
        pat(I::DisQ, pimp(pall("mu", pimp(b(), c())), pimp(pall("mu", b()), pall("mu", c()))), side_disq),
        pat(I::WbaA, pimp(pall("mu", c()), c()), occurring),
        pat(I::WbaE, pimp(c(), pex("mu", c())), occurring),
        pat(I::Br, pimp(pall("mu", pimp(c(), a())), pimp(pex("mu", c()), a())), side_br),
        pat(I::Ref, peq(r(), r()), no_side),
        pat(I::Sym, pimp(peq(r(), s()), peq(s(), r())), no_side),
        pat(I::Lea1, pimp(peq(r(), s()), pimp(FP::Atom(PP::Meta("P"), r(), t()), FP::Atom(PP::Meta("P"), s(), t()))), no_side),
        pat(I::Lea2, pimp(peq(r(), s()), pimp(FP::Atom(PP::Meta("P"), t(), r()), FP::Atom(PP::Meta("P"), t(), s()))), no_side),
        Schema { id: I::LeaRp, shape: Shape::Custom(custom_lea_rp, inst_lea_rp) },
        pat(I::ES, pex("mu", peq(vm("mu"), t())), side_es),
        pat(I::Sba1, pimp(pall("mu", c()), psub("C", "mu", t())), side_sba),
        pat(I::Sba2, pimp(psub("C", "mu", t()), pex("mu", c())), side_sba),
        pat(I::Tnd, por(a(), pneg(a())), no_side),
        pat(I::Dne, pimp(pneg(pneg(a())), a()), no_side),
        pat(
            I::Cvi,
            pimp(
                pall("mu", pimp(pall("kappa", pimp(plt(vm("kappa"), vm("mu")), psub("A", "mu", vm("kappa")))), a())),
                pall("mu", a()),
            ),
            side_cvi,
        ),
        pat(
            I::IndPeano,
            pimp(
                pand(psub("A", "mu", tn(0)), pall("mu", pimp(a(), psub("A", "mu", t1(Func::Suc, vm("mu")))))),
                pall("mu", a()),
            ),
            side_ind,
        ),
        Schema { id: I::NumeroidAx, shape: Shape::Custom(custom_numeroid, inst_numeroid) },
    ];
    for (id, p) in elem_table() {
        out.push(pat(I::ElemAx(id.into()), p, no_side));
    }
    for (id, p) in def_table() {
        out.push(pat(I::DefAx(id.into()), p, no_side));
    }
    out.push(Schema { id: I::Gauss(0), shape: Shape::Custom(custom_gauss, inst_gauss) });
    out.push(pat(
        I::Rosser11,
        pimp(
            pand(pex("mu", a()), pall("mu", pall("kappa", pimp(pand(a(), psub("A", "mu", vm("kappa"))), peq(vm("mu"), vm("kappa")))))),
            psub("A", "mu", TP::IotaOf("mu", "A")),
        ),
        side_rosser,
    ));
    out.push(Schema { id: I::MOmega, shape: Shape::Custom(custom_m_omega, inst_m_omega) });
    out
}

/// Elementary axioms admitted without derivation.
fn elem_table() -> Vec<(&'static str, FP)> {
    let (r, s) = (|| tm("r"), || tm("s"));
    let m = || vm("mu");
    vec![
        ("sg-dichotomy", por(peq(t1(Func::Sg, r()), tn(0)), peq(t1(Func::Sg, r()), tn(1)))),
        ("mul-zero", peq(t2(Func::Mul, r(), tn(0)), tn(0))),
        ("mul-one", peq(t2(Func::Mul, r(), tn(1)), r())),
        ("ssg-dichotomy", por(peq(t1(Func::Ssg, r()), tn(0)), peq(t1(Func::Ssg, r()), tn(1)))),
        ("ssg-msd", pimp(peq(t1(Func::Ssg, t2(Func::Msd, r(), s())), tn(1)), peq(r(), s()))),
        ("ell1-cfor", pimp(peq(t1(Func::Ell1, r()), tn(0)), peq(t1(Func::Cfor, t1(Func::Exp0, r())), tn(0)))),
        ("cfor-len", pimp(peq(t1(Func::Cfor, r()), tn(0)), peq(t1(Func::Len, r()), tn(2)))),
        (
            "len-decomp",
            pimp(
                peq(t1(Func::Len, r()), tn(2)),
                peq(
                    r(),
                    t2(
                        Func::Mul,
                        t2(Func::Mul, t2(Func::Pow, tn(2), t1(Func::Exp0, r())), t2(Func::Pow, tn(3), t1(Func::Exp1, r()))),
                        t2(Func::Pow, tn(5), t1(Func::Exp2, r())),
                    ),
                ),
            ),
        ),
        ("exp1-less", pall("mu", pimp(pneg(peq(m(), tn(0))), plt(t1(Func::Exp1, m()), m())))),
        ("exp2-less", pall("mu", pimp(pneg(peq(m(), tn(0))), plt(t1(Func::Exp2, m()), m())))),
        ("ax-cfor", pall("mu", pimp(peq(t1(Func::Ax, m()), tn(0)), peq(t1(Func::Cfor, m()), tn(0))))),
    ]
}

/// Instances of axiom-definitions; termoid metavariables stand for the
/// universally closed variables.
fn def_table() -> Vec<(&'static str, FP)> {
    let (n, q, r) = (|| tm("n"), || tm("q"), || tm("r"));
    let m = || vm("mu");
    let ell = |a: TP, b: TP| t2(Func::Ell, a, b);
    let mut out = vec![
        (
            "def_mp",
            peq(
                t2(Func::Mp, n(), q()),
                t2(Func::Mul, t2(Func::Mul, t2(Func::MpCode, n(), q()), t2(Func::E, n(), q())), t1(Func::Sg, n())),
            ),
        ),
        (
            "def_e",
            peq(
                t2(Func::E, n(), q()),
                t2(
                    Func::Mul,
                    t1(Func::Ssg, t2(Func::Msd, t1(Func::Exp00, q()), tn(3))),
                    t1(Func::Ssg, t2(Func::Msd, t1(Func::Exp01, q()), t1(Func::Exp0, n()))),
                ),
            ),
        ),
        (
            "def_Mp",
            peq(
                t2(Func::MpCode, n(), q()),
                t2(
                    Func::Mul,
                    t2(Func::Mul, t2(Func::Pow, tn(2), t1(Func::Exp02, q())), t2(Func::Pow, tn(3), n())),
                    t2(Func::Pow, tn(5), q()),
                ),
            ),
        ),
        ("df1_ell1", pall("mu", pimp(ant_pattern(1), peq(t1(Func::Ell1, m()), tn(0))))),
        ("df2_ell1", pall("mu", pimp(ant_pattern(2), peq(t1(Func::Ell1, m()), tn(0))))),
        ("df3_ell1", pall("mu", pimp(ant_pattern(3), peq(t1(Func::Ell1, m()), tn(1))))),
        (
            "def1_ell",
            pimp(peq(ell(n(), q()), tn(0)), pand(peq(t1(Func::Ell1, n()), tn(0)), peq(t1(Func::Exp0, n()), q()))),
        ),
        (
            "def2_ell",
            pimp(pand(peq(t1(Func::Ell1, n()), tn(0)), peq(t1(Func::Exp0, n()), q())), peq(ell(n(), q()), tn(0))),
        ),
        ("def3_ell", pimp(pneg(peq(ell(n(), q()), tn(0))), peq(ell(n(), q()), tn(1)))),
        ("def1_fl", pall("mu", pimp(peq(t1(Func::Cfor, m()), tn(0)), peq(t1(Func::Fl, m()), m())))),
        ("def_nuF", peq(t1(Func::NuF, t1(Func::Fl, r())), t1(Func::Fl, r()))),
    ];
    for (g, name) in [(Func::Exp00, "def_exp00"), (Func::Exp01, "def_exp01"), (Func::Exp02, "def_exp02")] {
        let inner = match g {
            Func::Exp00 => Func::Exp0,
            Func::Exp01 => Func::Exp1,
            _ => Func::Exp2,
        };
        out.push((name, peq(t1(inner, t1(Func::Exp0, r())), t1(g, r()))));
    }
    out
}

/// Closed formula `Con_Ari` and its open defining form.
pub fn con_ari_open() -> Formula {
    negate(eq(app2(Func::Ell, crate::syntax::var(1), crate::syntax::vf()), num(0)))
}

/// Whether `line` follows from `cited` by unfolding a definition of notation.
/// Negation is already notation; the only named definition is `Con_Ari`.
pub fn definitional_equal(line: &Formula, cited: &Formula) -> bool {
    line == cited || (*line == con_ari() && *cited == con_ari_open())
}

// ---------------------------------------------------------------------------
// matching entry points

fn try_schema(s: &Schema, e: &Formula) -> Option<(SchemaId, Bindings, Vec<Obligation>)> {
    match &s.shape {
        Shape::Pattern(p, side) => {
            let mut m = Matcher::new();
            if !m.mf(p, e) {
                return None;
            }
            let mut obs = m.resolve()?;
            obs.extend(side(&m.b)?);
            Some((s.id.clone(), m.b, obs))
        }
        Shape::Custom(f, _) => f(e),
    }
}

fn same_family(a: &SchemaId, b: &SchemaId) -> bool {
    match (a, b) {
        (SchemaId::Gauss(_), SchemaId::Gauss(_)) => true,
        _ => a == b,
    }
}

/// Matches `e`, stripping any universal prefix, against the schemata
/// accepted by `want`.
fn match_with(e: &Formula, mode: Mode, want: &dyn Fn(&SchemaId) -> bool) -> Option<SchemaMatch> {
    if mode == Mode::Closed && !e.is_closed() {
        return None;
    }
    let mut prefix = Vec::new();
    let mut cur = e;
    loop {
        for s in schemas().iter().filter(|s| want(&s.id)) {
            if let Some((schema, bindings, obligations)) = try_schema(s, cur) {
                if want(&schema) {
                    return Some(SchemaMatch { schema, bindings, obligations, prefix });
                }
            }
        }
        if cur.has_kleene() && want(&SchemaId::Lea1Nu) {
            if let Some(mut m) = crate::kleene::match_nu_schema(cur) {
                m.prefix = prefix;
                return Some(m);
            }
        }
        match cur {
            Formula::Forall(v, body) => {
                prefix.push(*v);
                cur = body;
            }
            _ => return None,
        }
    }
}

/// First schema, in table order, of which `e` is an instance or a closure
/// of an instance.
pub fn match_axiom(e: &Formula, mode: Mode) -> Option<SchemaMatch> {
    match_with(e, mode, &|_| true)
}

/// Matches against one named schema; `Ga` families match any index only
/// when the index agrees.
pub fn match_named(id: &SchemaId, e: &Formula, mode: Mode) -> Option<SchemaMatch> {
    let want = |s: &SchemaId| same_family(s, id);
    let m = match id {
        SchemaId::Lea1Nu | SchemaId::Lea2Nu | SchemaId::LeaMpNu => {
            let mut prefix = Vec::new();
            let mut cur = e;
            loop {
                if let Some(mut m) = crate::kleene::match_nu_schema(cur).filter(|m| m.schema == *id) {
                    m.prefix = prefix;
                    break Some(m);
                }
                match cur {
                    Formula::Forall(v, body) => {
                        prefix.push(*v);
                        cur = body;
                    }
                    _ => break None,
                }
            }
        }
        _ => match_with(e, mode, &want),
    }?;
    (m.schema == *id).then_some(m)
}

/// Rebuilds the formula of a match; the inverse of matching.
pub fn instantiate(m: &SchemaMatch) -> Option<Formula> {
    let body = match m.schema {
        SchemaId::Lea1Nu | SchemaId::Lea2Nu | SchemaId::LeaMpNu => crate::kleene::instantiate_nu(m)?,
        _ => {
            let s = schemas().iter().find(|s| same_family(&s.id, &m.schema))?;
            match &s.shape {
                Shape::Pattern(p, _) => instantiate_f(p, &m.bindings)?,
                Shape::Custom(_, inst) => inst(&m.schema, &m.bindings)?,
            }
        }
    };
    Some(m.prefix.iter().rev().fold(body, |acc, v| forall(*v, acc)))
}

/// Names of the elementary axioms.
pub fn elem_ids() -> Vec<&'static str> {
    elem_table().into_iter().map(|(id, _)| id).collect()
}

/// Names of the admitted axiom-definitions.
pub fn def_ids() -> Vec<&'static str> {
    def_table().into_iter().map(|(id, _)| id).collect()
}

// ---------------------------------------------------------------------------
// rules

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum RuleError {
    #[error("major premise is not an implication")]
    NotImplication,
    #[error("minor premise differs from the antecedent of the major premise")]
    AntecedentMismatch,
    #[error("premise is not closed in closed logic")]
    OpenInClosedMode,
    #[error("variable {0} is not free in the premise")]
    VariableNotFree(Var),
    #[error("Gen is not available in closed logic")]
    ClosedModeViolation,
    #[error("variable {var} is free in active hypothesis {hypothesis}")]
    HypothesisCapture { var: Var, hypothesis: String },
    #[error("premises do not fit the rule: {0}")]
    ShapeMismatch(String),
}

/// `B, B ⊃ C / C`.
pub fn apply_mp(minor: &Formula, major: &Formula, mode: Mode) -> Result<Formula, RuleError> {
    if mode == Mode::Closed && !(minor.is_closed() && major.is_closed()) {
        return Err(RuleError::OpenInClosedMode);
    }
    let (a, c) = major.as_imp().ok_or(RuleError::NotImplication)?;
    if a != minor {
        return Err(RuleError::AntecedentMismatch);
    }
    Ok(c.clone())
}

/// `C(μ) / ∀μ C(μ)`. Hypothesis capture is checked by the script checker.
pub fn apply_gen(premise: &Formula, v: Var, mode: Mode) -> Result<Formula, RuleError> {
    if mode == Mode::Closed {
        return Err(RuleError::ClosedModeViolation);
    }
    if !premise.occurs_free(v) {
        return Err(RuleError::VariableNotFree(v));
    }
    Ok(forall(v, premise.clone()))
}

// ---------------------------------------------------------------------------
// derived rules

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum DerivedRule {
    Imp0,
    ChIn,
    ChIn2,
    ChInFla2,
    IntAnt,
    IntAntFla,
    Contrap,
    ContrapFla,
    Mtp1,
    Mtp2,
}

impl DerivedRule {
    pub const ALL: [DerivedRule; 10] = [
        DerivedRule::Imp0,
        DerivedRule::ChIn,
        DerivedRule::ChIn2,
        DerivedRule::ChInFla2,
        DerivedRule::IntAnt,
        DerivedRule::IntAntFla,
        DerivedRule::Contrap,
        DerivedRule::ContrapFla,
        DerivedRule::Mtp1,
        DerivedRule::Mtp2,
    ];

    /// Script name of the rule.
    pub fn name(self) -> &'static str {
        match self {
            DerivedRule::Imp0 => "imp0",
            DerivedRule::ChIn => "chin",
            DerivedRule::ChIn2 => "chin2",
            DerivedRule::ChInFla2 => "chinfla2",
            DerivedRule::IntAnt => "intant",
            DerivedRule::IntAntFla => "intant2",
            DerivedRule::Contrap => "contrap1",
            DerivedRule::ContrapFla => "contrap2",
            DerivedRule::Mtp1 => "mtp1",
            DerivedRule::Mtp2 => "mtp2",
        }
    }

    pub fn from_name(s: &str) -> Option<DerivedRule> {
        DerivedRule::ALL.into_iter().find(|r| r.name() == s)
    }

    pub fn premise_count(self) -> usize {
        match self {
            DerivedRule::Imp0 | DerivedRule::ChInFla2 | DerivedRule::IntAntFla | DerivedRule::ContrapFla => 0,
            DerivedRule::IntAnt | DerivedRule::Contrap | DerivedRule::Mtp2 => 1,
            DerivedRule::ChIn | DerivedRule::ChIn2 | DerivedRule::Mtp1 => 2,
        }
    }

    /// Number of primitive lines, excluding definitional rewrites.
    pub fn primitive_len(self) -> usize {
        match self {
            DerivedRule::Imp0 | DerivedRule::ChIn | DerivedRule::ChIn2 => 5,
            DerivedRule::ChInFla2 => 7,
            DerivedRule::IntAnt => 8,
            DerivedRule::IntAntFla => 19,
            DerivedRule::Contrap => 12,
            DerivedRule::ContrapFla => 15,
            DerivedRule::Mtp1 => 17,
            DerivedRule::Mtp2 => 20,
        }
    }

    /// Number of definitional rewrite lines.
    pub fn rewrite_len(self) -> usize {
        match self {
            DerivedRule::Contrap | DerivedRule::ContrapFla => 2,
            DerivedRule::Mtp1 | DerivedRule::Mtp2 => 1,
            _ => 0,
        }
    }

    /// Premise and conclusion shapes over the metavariables A, B, C.
    fn signature(self) -> (Vec<FP>, FP) {
        let (a, b, c) = (|| fm("A"), || fm("B"), || fm("C"));
        match self {
            DerivedRule::Imp0 => (vec![], pimp(a(), a())),
            DerivedRule::ChIn => (vec![pimp(a(), b()), pimp(b(), c())], pimp(a(), c())),
            DerivedRule::ChIn2 => (vec![pimp(a(), pimp(b(), c())), b()], pimp(a(), c())),
            DerivedRule::ChInFla2 => (vec![], pimp(pimp(b(), c()), pimp(pimp(a(), b()), pimp(a(), c())))),
            DerivedRule::IntAnt => (vec![pimp(a(), pimp(b(), c()))], pimp(b(), pimp(a(), c()))),
            DerivedRule::IntAntFla => (vec![], pimp(pimp(a(), pimp(b(), c())), pimp(b(), pimp(a(), c())))),
            DerivedRule::Contrap => (vec![pimp(a(), b())], pimp(pneg(b()), pneg(a()))),
            DerivedRule::ContrapFla => (vec![], pimp(pimp(a(), b()), pimp(pneg(b()), pneg(a())))),
            DerivedRule::Mtp1 => (vec![por(a(), b()), pneg(a())], b()),
            DerivedRule::Mtp2 => (vec![por(a(), b())], pimp(pneg(a()), b())),
        }
    }
}

impl fmt::Display for DerivedRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Source of a formula inside an expansion.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Src {
    Premise(usize),
    Line(usize),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ExpJust {
    Axiom(SchemaId),
    Mp(Src, Src),
    Rewrite(Src),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExpLine {
    pub formula: Formula,
    pub just: ExpJust,
}

impl ExpLine {
    pub fn is_rewrite(&self) -> bool {
        matches!(self.just, ExpJust::Rewrite(_))
    }
}

struct Builder {
    premises: Vec<Formula>,
    lines: Vec<ExpLine>,
}

impl Builder {
    fn get(&self, s: Src) -> &Formula {
        match s {
            Src::Premise(i) => &self.premises[i],
            Src::Line(i) => &self.lines[i].formula,
        }
    }

    fn push(&mut self, formula: Formula, just: ExpJust) -> Src {
        self.lines.push(ExpLine { formula, just });
        Src::Line(self.lines.len() - 1)
    }

    fn ax(&mut self, id: SchemaId, f: Formula) -> Src {
        self.push(f, ExpJust::Axiom(id))
    }

    fn mp(&mut self, minor: Src, major: Src) -> Result<Src, RuleError> {
        let f = apply_mp(self.get(minor), self.get(major), Mode::Open)?;
        Ok(self.push(f, ExpJust::Mp(minor, major)))
    }

    fn rw(&mut self, s: Src) -> Src {
        let f = self.get(s).clone();
        self.push(f, ExpJust::Rewrite(s))
    }

    /// Inlines a nested derived rule.
    fn sub(&mut self, rule: DerivedRule, premises: &[Src], conclusion: &Formula) -> Result<Src, RuleError> {
        let ps: Vec<Formula> = premises.iter().map(|s| self.get(*s).clone()).collect();
        let inner = expand_derived(rule, &ps, conclusion)?;
        let offset = self.lines.len();
        let map = |s: Src| match s {
            Src::Premise(i) => premises[i],
            Src::Line(i) => Src::Line(offset + i),
        };
        for l in inner {
            let just = match l.just {
                ExpJust::Axiom(id) => ExpJust::Axiom(id),
                ExpJust::Mp(a, b) => ExpJust::Mp(map(a), map(b)),
                ExpJust::Rewrite(a) => ExpJust::Rewrite(map(a)),
            };
            self.lines.push(ExpLine { formula: l.formula, just });
        }
        Ok(Src::Line(self.lines.len() - 1))
    }
}

/// Infers `A, B, C` from the premises and the conclusion.
fn rule_bindings(rule: DerivedRule, premises: &[Formula], conclusion: &Formula) -> Result<Bindings, RuleError> {
    let (ps, c) = rule.signature();
    if premises.len() != ps.len() {
        return Err(RuleError::ShapeMismatch(format!("{} takes {} premises, got {}", rule, ps.len(), premises.len())));
    }
    let mut m = Matcher::new();
    for (i, (p, f)) in ps.iter().zip(premises).enumerate() {
        if !m.mf(p, f) {
            return Err(RuleError::ShapeMismatch(format!("premise {} of {} has the wrong shape", i + 1, rule)));
        }
    }
    if !m.mf(&c, conclusion) {
        return Err(RuleError::ShapeMismatch(format!("conclusion does not fit {rule}")));
    }
    Ok(m.b)
}

/// The conclusion a rule yields from its premises, when the premises fix it.
pub fn derive_conclusion(rule: DerivedRule, premises: &[Formula]) -> Option<Formula> {
    let (ps, c) = rule.signature();
    if ps.is_empty() || ps.len() != premises.len() {
        return None;
    }
    let mut m = Matcher::new();
    for (p, f) in ps.iter().zip(premises) {
        if !m.mf(p, f) {
            return None;
        }
    }
    instantiate_f(&c, &m.b)
}

/// The primitive line sequence deriving the rule's conclusion from its
/// premises. Nested derived rules are inlined.
pub fn expand_derived(rule: DerivedRule, premises: &[Formula], conclusion: &Formula) -> Result<Vec<ExpLine>, RuleError> {
    let b = rule_bindings(rule, premises, conclusion)?;
    let get = |n: &str| get_formula(&b, n).cloned().unwrap_or_else(falsum);
    let (a, bb, c) = (get("A"), get("B"), get("C"));
    let mut x = Builder { premises: premises.to_vec(), lines: Vec::new() };
    use SchemaId as I;
    match rule {
        DerivedRule::Imp0 => {
            let aa = imp(a.clone(), a.clone());
            let l1 = x.ax(I::Imp1, imp(a.clone(), aa.clone()));
            let l2 = x.ax(I::Imp1, imp(a.clone(), imp(aa.clone(), a.clone())));
            let l3 = x.ax(I::Imp2, imp(x.get(l2).clone(), imp(x.get(l1).clone(), aa)));
            let l4 = x.mp(l2, l3)?;
            x.mp(l1, l4)?;
        }
        DerivedRule::ChIn => {
            let (pa, pb) = (Src::Premise(0), Src::Premise(1));
            let l1 = x.ax(I::Imp1, imp(x.get(pb).clone(), imp(a.clone(), x.get(pb).clone())));
            let l2 = x.mp(pb, l1)?;
            let l3 = x.ax(I::Imp2, imp(x.get(l2).clone(), imp(x.get(pa).clone(), imp(a.clone(), c.clone()))));
            let l4 = x.mp(l2, l3)?;
            x.mp(pa, l4)?;
        }
        DerivedRule::ChIn2 => {
            let (pa, pb) = (Src::Premise(0), Src::Premise(1));
            let l1 = x.ax(I::Imp1, imp(bb.clone(), imp(a.clone(), bb.clone())));
            let l2 = x.mp(pb, l1)?;
            let l3 = x.ax(I::Imp2, imp(x.get(pa).clone(), imp(x.get(l2).clone(), imp(a.clone(), c.clone()))));
            let l4 = x.mp(pa, l3)?;
            x.mp(l2, l4)?;
        }
        DerivedRule::ChInFla2 => {
            let bc = imp(bb.clone(), c.clone());
            let abc = imp(a.clone(), bc.clone());
            let abac = imp(imp(a.clone(), bb.clone()), imp(a.clone(), c.clone()));
            let l1 = x.ax(I::Imp1, imp(bc.clone(), abc.clone()));
            let l2 = x.ax(I::Imp2, imp(abc, abac.clone()));
            x.sub(DerivedRule::ChIn, &[l1, l2], &imp(bc, abac))?;
        }
        DerivedRule::IntAnt => {
            let pa = Src::Premise(0);
            let abac = imp(imp(a.clone(), bb.clone()), imp(a.clone(), c.clone()));
            let l1 = x.ax(I::Imp2, imp(x.get(pa).clone(), abac));
            let l2 = x.mp(pa, l1)?;
            let l3 = x.ax(I::Imp1, imp(bb.clone(), imp(a.clone(), bb.clone())));
            x.sub(DerivedRule::ChIn, &[l3, l2], &imp(bb.clone(), imp(a.clone(), c.clone())))?;
        }
        DerivedRule::IntAntFla => {
            let xx = imp(a.clone(), imp(bb.clone(), c.clone()));
            let y = imp(imp(a.clone(), bb.clone()), imp(a.clone(), c.clone()));
            let z = imp(bb.clone(), imp(a.clone(), bb.clone()));
            let w = imp(bb.clone(), imp(a.clone(), c.clone()));
            let by = imp(bb.clone(), y.clone());
            let l1 = x.ax(I::Imp1, z.clone());
            let l2 = x.ax(I::Imp2, imp(xx.clone(), y.clone()));
            let l3 = x.ax(I::Imp1, imp(y.clone(), by.clone()));
            let f3 = x.get(l3).clone();
            let l4 = x.ax(I::Imp1, imp(f3.clone(), imp(xx.clone(), f3.clone())));
            let l5 = x.mp(l3, l4)?;
            let f5 = x.get(l5).clone();
            let l6 = x.ax(I::Imp2, imp(f5, imp(imp(xx.clone(), y.clone()), imp(xx.clone(), by.clone()))));
            let l7 = x.mp(l5, l6)?;
            let l8 = x.mp(l2, l7)?;
            let l9 = x.ax(I::Imp2, imp(by.clone(), imp(z.clone(), w.clone())));
            let f9 = x.get(l9).clone();
            let l10 = x.ax(I::Imp1, imp(f9.clone(), imp(xx.clone(), f9.clone())));
            let l11 = x.mp(l9, l10)?;
            let f11 = x.get(l11).clone();
            let f8 = x.get(l8).clone();
            let l12 = x.ax(I::Imp2, imp(f11, imp(f8, imp(xx.clone(), imp(z.clone(), w.clone())))));
            let l13 = x.mp(l11, l12)?;
            let l14 = x.mp(l8, l13)?;
            let l15 = x.ax(I::Imp1, imp(z.clone(), imp(xx.clone(), z.clone())));
            let l16 = x.mp(l1, l15)?;
            let (f14, f16) = (x.get(l14).clone(), x.get(l16).clone());
            let l17 = x.ax(I::Imp2, imp(f14, imp(f16, imp(xx.clone(), w.clone()))));
            let l18 = x.mp(l14, l17)?;
            x.mp(l16, l18)?;
        }
        DerivedRule::Contrap => {
            let bot = falsum();
            let fla = imp(imp(bb.clone(), bot.clone()), imp(imp(a.clone(), bb.clone()), imp(a.clone(), bot.clone())));
            let l7 = x.sub(DerivedRule::ChInFla2, &[], &fla)?;
            let l12 = x.sub(DerivedRule::ChIn2, &[l7, Src::Premise(0)], &imp(negate(bb.clone()), negate(a.clone())))?;
            let l12a = x.rw(l12);
            x.rw(l12a);
        }
        DerivedRule::ContrapFla => {
            let bot = falsum();
            let fla = imp(imp(bb.clone(), bot.clone()), imp(imp(a.clone(), bb.clone()), imp(a.clone(), bot.clone())));
            let l7 = x.sub(DerivedRule::ChInFla2, &[], &fla)?;
            let concl = imp(imp(a.clone(), bb.clone()), imp(negate(bb.clone()), negate(a.clone())));
            let l15 = x.sub(DerivedRule::IntAnt, &[l7], &concl)?;
            let l15a = x.rw(l15);
            x.rw(l15a);
        }
        DerivedRule::Mtp1 | DerivedRule::Mtp2 => {
            let bot = falsum();
            let l1 = x.ax(I::Imp3, imp(bot.clone(), bb.clone()));
            let f1 = x.get(l1).clone();
            let l2 = x.ax(I::Imp1, imp(f1.clone(), imp(a.clone(), f1)));
            let l3 = x.mp(l1, l2)?;
            let f3 = x.get(l3).clone();
            let l4 = x.ax(I::Imp2, imp(f3, imp(negate(a.clone()), imp(a.clone(), bb.clone()))));
            let l5 = x.mp(l3, l4)?;
            let l5a = x.rw(l5);
            if rule == DerivedRule::Mtp2 {
                let nab = imp(negate(a.clone()), bb.clone());
                let l13 = x.sub(DerivedRule::IntAnt, &[l5a], &imp(a.clone(), nab.clone()))?;
                let l14 = x.ax(I::Imp1, imp(bb.clone(), nab.clone()));
                let (f13, f14) = (x.get(l13).clone(), x.get(l14).clone());
                let both = and(f13.clone(), f14.clone());
                let l15 = x.ax(I::Con3, imp(f13, imp(f14, both.clone())));
                let l16 = x.mp(l13, l15)?;
                let l17 = x.mp(l14, l16)?;
                let l18 = x.ax(I::Dis3, imp(both, imp(or(a.clone(), bb.clone()), nab)));
                let l19 = x.mp(l17, l18)?;
                x.mp(Src::Premise(0), l19)?;
            } else {
                let l6 = x.mp(Src::Premise(1), l5a)?;
                let l11 = x.sub(DerivedRule::Imp0, &[], &imp(bb.clone(), bb.clone()))?;
                let (f6, f11) = (x.get(l6).clone(), x.get(l11).clone());
                let both = and(f6.clone(), f11.clone());
                let l12 = x.ax(I::Con3, imp(f6, imp(f11, both.clone())));
                let l13 = x.mp(l6, l12)?;
                let l14 = x.mp(l11, l13)?;
                let l15 = x.ax(I::Dis3, imp(both, imp(or(a.clone(), bb.clone()), bb.clone())));
                let l16 = x.mp(l14, l15)?;
                x.mp(Src::Premise(0), l16)?;
            }
        }
    }
    debug_assert_eq!(x.lines.iter().filter(|l| !l.is_rewrite()).count(), rule.primitive_len());
    debug_assert_eq!(x.lines.last().map(|l| &l.formula), Some(conclusion));
    Ok(x.lines)
}

/// Re-checks every line of an expansion with the primitive rules.
pub fn verify_expansion(lines: &[ExpLine], premises: &[Formula], mode: Mode) -> Result<(), (usize, String)> {
    let get = |s: Src| match s {
        Src::Premise(i) => &premises[i],
        Src::Line(i) => &lines[i].formula,
    };
    for (i, l) in lines.iter().enumerate() {
        let ok = match &l.just {
            ExpJust::Axiom(id) => match_named(id, &l.formula, mode).is_some(),
            ExpJust::Mp(a, b) => apply_mp(get(*a), get(*b), mode).as_ref() == Ok(&l.formula),
            ExpJust::Rewrite(a) => definitional_equal(&l.formula, get(*a)),
        };
        if !ok {
            return Err((i, format!("expansion line {} ({:?}) does not verify", i + 1, l.just)));
        }
    }
    Ok(())
}
