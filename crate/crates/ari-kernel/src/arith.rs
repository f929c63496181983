//! Evaluators for the primitive recursive function symbols over codes.

use crate::calculus::{self, Mode};
use crate::code::{Code, CodeError, ARITH_BUDGET};
use crate::encode::{self, decode_formula, encode_formula};
use crate::syntax::{falsum, Formula, Func, Pred, Termoid, Var};
use num_bigint::BigUint;
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};

/// A small closed axiom set over abstract formula codes, used to test `ℓ₁`
/// against exhaustive enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MicroSystem {
    pub name: String,
    /// codes of the axioms
    pub axioms: Vec<Code>,
}

impl MicroSystem {
    /// Abstract implication code `2^3 · 3^a · 5^b`.
    pub fn imp(a: &Code, b: &Code) -> Code {
        Code::product(vec![(0, Code::from_u64(3)), (1, a.clone()), (2, b.clone())]).expect("distinct primes")
    }
}

/// Decides axiom-hood for `ax`.
#[derive(Clone, Debug)]
pub enum AxiomTable {
    /// Schema recognizers of the full system plus explicitly admitted closed axioms.
    Full { extra: Vec<Formula> },
    Micro(MicroSystem),
}

impl AxiomTable {
    pub fn full() -> AxiomTable {
        AxiomTable::Full { extra: Vec::new() }
    }

    pub fn is_axiom_code(&self, n: &Code) -> bool {
        match self {
            AxiomTable::Micro(m) => m.axioms.iter().any(|a| a.code_eq(n)),
            AxiomTable::Full { extra } => match decode_formula(n) {
                Ok(e) if e.is_closed() => {
                    extra.contains(&e) || calculus::match_axiom(&e, Mode::Closed).is_some()
                }
                _ => false,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("step budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("variable {0} has no value")]
    Unbound(Var),
    #[error("descriptions have no computable value")]
    Description,
    #[error("value {0} is not materializable")]
    NonMaterializable(String),
}

fn bit(b: bool) -> Code {
    Code::from_u64(b as u64)
}

pub fn sg(n: &Code) -> Code {
    bit(!n.is_zero())
}

pub fn ssg(n: &Code) -> Code {
    bit(n.is_zero())
}

pub fn msd(a: &Code, b: &Code) -> Result<Code, CodeError> {
    a.abs_diff(b, ARITH_BUDGET)
}

pub fn suc(n: &Code) -> Result<Code, CodeError> {
    n.add(&Code::one(), ARITH_BUDGET)
}

/// Nested exponent `(n)_{g,h,...}`.
pub fn exp_path(n: &Code, path: &[u64]) -> Code {
    path.iter().fold(n.clone(), |c, &g| c.exp(g))
}

/// `Mp(n, q) = 2^{(q)_{0,2}} · 3^n · 5^q`.
pub fn eval_mp_code(n: &Code, q: &Code) -> Code {
    Code::product(vec![(0, exp_path(q, &[0, 2])), (1, n.clone()), (2, q.clone())]).expect("distinct primes")
}

/// `e(n, q)`: 1 iff `(q)_{0,0} = 3` and `(q)_{0,1} = (n)_0`.
pub fn eval_e(n: &Code, q: &Code) -> bool {
    exp_path(q, &[0, 0]).as_small() == Some(encode::symbols::IMP) && exp_path(q, &[0, 1]).code_eq(&n.exp(0))
}

/// `mp(n, q) = Mp(n, q) · e(n, q) · sg(n)`.
pub fn eval_mp(n: &Code, q: &Code) -> Code {
    if eval_e(n, q) && !n.is_zero() {
        eval_mp_code(n, q)
    } else {
        Code::zero()
    }
}

/// Evaluation context for `ℓ₁`, memoizing per call.
pub struct Ell1<'a> {
    table: &'a AxiomTable,
    memo: HashMap<Code, bool>,
}

impl<'a> Ell1<'a> {
    pub fn new(table: &'a AxiomTable) -> Self {
        Ell1 { table, memo: HashMap::new() }
    }

    /// True iff `ℓ₁(n) = 0`, i.e. `n` codes a proof.
    pub fn is_proof(&mut self, n: &Code) -> bool {
        if let Some(&b) = self.memo.get(n) {
            return b;
        }
        let r = self.compute(n);
        self.memo.insert(n.clone(), r);
        r
    }

    fn compute(&mut self, n: &Code) -> bool {
        if n.is_zero() {
            return false;
        }
        let root = n.exp(0);
        if Code::prime_power(0, root.clone()).code_eq(n) && self.table.is_axiom_code(&root) {
            return true;
        }
        let (a, b) = (n.exp(1), n.exp(2));
        // structural check first; the recursion only sees strictly smaller codes
        if !eval_mp(&a, &b).code_eq(n) {
            return false;
        }
        self.is_proof(&a) && self.is_proof(&b)
    }
}

/// `ℓ₁(n)` as a bit: 0 for proofs.
pub fn eval_ell1(n: &Code, table: &AxiomTable) -> Code {
    bit(!Ell1::new(table).is_proof(n))
}

/// `ℓ(n, q)`: 0 iff `n` is a proof whose root code is `q`.
pub fn eval_ell(n: &Code, q: &Code, table: &AxiomTable) -> Code {
    bit(!(Ell1::new(table).is_proof(n) && n.exp(0).code_eq(q)))
}

pub fn eval_ax(n: &Code, table: &AxiomTable) -> Code {
    bit(!table.is_axiom_code(n))
}

/// `cfor(n)`: 0 iff `n` codes a closed formula.
pub fn eval_cfor(n: &Code) -> Code {
    bit(!matches!(decode_formula(n), Ok(e) if e.is_closed()))
}

/// `fl(n)`: `n` itself for closed-formula codes, else the code of falsum.
pub fn eval_fl(n: &Code) -> Code {
    if eval_cfor(n).is_zero() {
        n.clone()
    } else {
        falsum_code()
    }
}

pub fn falsum_code() -> Code {
    encode_formula(&falsum()).expect("falsum has a code")
}

/// `σ` by its defining recursion, one step per successor.
pub fn eval_sigma(t: &BigUint, budget: u64) -> Result<BigUint, EvalError> {
    let mut acc = BigUint::zero();
    let mut remaining = t.clone();
    let mut steps = 0u64;
    while !remaining.is_zero() {
        if steps >= budget {
            return Err(EvalError::BudgetExceeded(budget));
        }
        // σ(suc(x)) = suc(σ(x))
        remaining -= 1u32;
        acc += 1u32;
        steps += 1;
    }
    Ok(acc)
}

pub fn eval_len(n: &Code) -> Result<Code, CodeError> {
    Ok(Code::from_u64(n.len()?))
}

/// Step budget for `σ`.
pub const SIGMA_BUDGET: u64 = 100_000;

/// Values of parameters.
pub type Valuation = BTreeMap<Var, Code>;

/// Applies a function symbol to argument values.
pub fn apply(f: Func, args: &[Code], table: &AxiomTable) -> Result<Code, EvalError> {
    let a = &args[0];
    Ok(match f {
        Func::Suc => suc(a)?,
        Func::Sg => sg(a),
        Func::Ssg => ssg(a),
        Func::Exp0 => a.exp(0),
        Func::Exp1 => a.exp(1),
        Func::Exp2 => a.exp(2),
        Func::Exp00 => exp_path(a, &[0, 0]),
        Func::Exp01 => exp_path(a, &[0, 1]),
        Func::Exp02 => exp_path(a, &[0, 2]),
        Func::Ell1 => eval_ell1(a, table),
        Func::Cfor => eval_cfor(a),
        Func::Fl | Func::NuF | Func::PiF => eval_fl(a),
        Func::Nu => a.clone(),
        Func::Sigma => {
            let v = a.materialize(ARITH_BUDGET).map_err(|_| EvalError::NonMaterializable(a.to_string()))?;
            Code::from_big(eval_sigma(&v, SIGMA_BUDGET)?)
        }
        Func::Len => eval_len(a)?,
        Func::Ax => eval_ax(a, table),
        Func::Add => a.add(&args[1], ARITH_BUDGET)?,
        Func::Mul => a.mul(&args[1], ARITH_BUDGET)?,
        Func::Pow => a.pow(&args[1], ARITH_BUDGET)?,
        Func::Msd => msd(a, &args[1])?,
        Func::MpCode => eval_mp_code(a, &args[1]),
        Func::Mp => eval_mp(a, &args[1]),
        Func::Ell => eval_ell(a, &args[1], table),
        Func::E => bit(eval_e(a, &args[1])),
    })
}

/// Value of a termoid under a valuation.
pub fn eval_termoid(t: &Termoid, val: &Valuation, table: &AxiomTable) -> Result<Code, EvalError> {
    match t {
        Termoid::Var(v) => val.get(v).cloned().ok_or(EvalError::Unbound(*v)),
        Termoid::Num(n) => Ok(Code::from_big(n.clone())),
        Termoid::App(f, args) => {
            let vals = args.iter().map(|a| eval_termoid(a, val, table)).collect::<Result<Vec<_>, _>>()?;
            apply(*f, &vals, table)
        }
        Termoid::Iota(..) => Err(EvalError::Description),
    }
}

/// Truth of a quantifier-free, Kleene-free formula under a valuation.
pub fn eval_formula(e: &Formula, val: &Valuation, table: &AxiomTable) -> Result<bool, EvalError> {
    match e {
        Formula::Atom(p, l, r) => {
            let (a, b) = (eval_termoid(l, val, table)?, eval_termoid(r, val, table)?);
            Ok(match p {
                Pred::Eq => a.code_eq(&b),
                _ => {
                    if a.code_eq(&b) {
                        *p == Pred::Le
                    } else {
                        let x = a.materialize(ARITH_BUDGET).map_err(|_| EvalError::NonMaterializable(a.to_string()))?;
                        let y = b.materialize(ARITH_BUDGET).map_err(|_| EvalError::NonMaterializable(b.to_string()))?;
                        x < y
                    }
                }
            })
        }
        Formula::Imp(a, b) => Ok(!eval_formula(a, val, table)? || eval_formula(b, val, table)?),
        Formula::And(a, b) => Ok(eval_formula(a, val, table)? && eval_formula(b, val, table)?),
        Formula::Or(a, b) => Ok(eval_formula(a, val, table)? || eval_formula(b, val, table)?),
        Formula::Forall(..) | Formula::Exists(..) | Formula::Kleene(_) => {
            Err(EvalError::NonMaterializable("quantified or Kleene formula".into()))
        }
    }
}

/// Materialized value of a closed termoid as an integer, if small enough.
pub fn small_integer(t: &Termoid, table: &AxiomTable, budget: usize) -> Option<BigUint> {
    eval_termoid(t, &Valuation::new(), table).ok()?.materialize(budget).ok()
}
