//! The enumeration: codes of termoids, formulas and deductions, and decoding.

use crate::code::{Code, ARITH_BUDGET};
use crate::syntax::{Formula, Func, Pred, Termoid, Var};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use std::fmt;

/// Symbol codes. Kept in one place so the convention can be audited.
pub mod symbols {
    pub const IMP: u64 = 3;
    pub const AND: u64 = 5;
    pub const OR: u64 = 7;
    pub const FORALL: u64 = 11;
    pub const EXISTS: u64 = 13;
    pub const EQ: u64 = 15;
    pub const LT: u64 = 25;
    pub const LE: u64 = 35;
    pub const IOTA: u64 = 113;
    /// prime index of 23, the base of numeroid codes
    pub const NUM_PRIME: u64 = 8;
    /// prime index of 29, the base of variable codes
    pub const VAR_PRIME: u64 = 9;
    /// prime indices of 71, 73 and 79, the bases of function-symbol codes
    pub const FUNC_PRIME: [u64; 3] = [19, 20, 21];
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum EncodeError {
    #[error("formula contains a Kleene atom, which has no code of its own")]
    KleenePresent,
    #[error("arithmetic on codes failed: {0}")]
    Code(#[from] crate::code::CodeError),
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
#[error("not a code: {0}")]
pub struct NotACode(pub String);

/// A proof tree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Deduction {
    Trivial(Formula),
    Mp { root: Formula, minor: Box<Deduction>, major: Box<Deduction> },
    Gen { root: Formula, premise: Box<Deduction>, variable: Var },
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum DeductionError {
    #[error("major premise is not an implication from the minor premise")]
    BadMajor,
}

impl Deduction {
    pub fn root(&self) -> &Formula {
        match self {
            Deduction::Trivial(r) | Deduction::Mp { root: r, .. } | Deduction::Gen { root: r, .. } => r,
        }
    }

    /// Modus ponens node; the root is the consequent of the major premise.
    pub fn mp(minor: Deduction, major: Deduction) -> Result<Deduction, DeductionError> {
        let root = match major.root() {
            Formula::Imp(a, b) if **a == *minor.root() => (**b).clone(),
            _ => return Err(DeductionError::BadMajor),
        };
        Ok(Deduction::Mp { root, minor: Box::new(minor), major: Box::new(major) })
    }

    pub fn gen(premise: Deduction, variable: Var) -> Deduction {
        let root = Formula::Forall(variable, Box::new(premise.root().clone()));
        Deduction::Gen { root, premise: Box::new(premise), variable }
    }

    /// Trivial leaves, left to right.
    pub fn leaves(&self) -> Vec<&Formula> {
        match self {
            Deduction::Trivial(r) => vec![r],
            Deduction::Mp { minor, major, .. } => {
                let mut v = minor.leaves();
                v.extend(major.leaves());
                v
            }
            Deduction::Gen { premise, .. } => premise.leaves(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Deduction::Trivial(_) => 0,
            Deduction::Mp { minor, major, .. } => 1 + minor.depth().max(major.depth()),
            Deduction::Gen { premise, .. } => 1 + premise.depth(),
        }
    }
}

fn pp(g: u64, e: Code) -> (u64, Code) {
    (g, e)
}

fn product(f: Vec<(u64, Code)>) -> Code {
    // every factor list built here has distinct primes, so no addition happens
    Code::product(f).expect("distinct primes")
}

pub fn func_code(f: Func) -> Code {
    let g = symbols::FUNC_PRIME[(f.arity() - 1) as usize];
    Code::prime_power(g, Code::from_u64(f.table_index() as u64))
}

pub fn var_code(v: Var) -> Code {
    Code::prime_power(symbols::VAR_PRIME, Code::from_u64(v.0 as u64))
}

pub fn encode_termoid(t: &Termoid) -> Result<Code, EncodeError> {
    Ok(match t {
        Termoid::Var(v) => var_code(*v),
        Termoid::Num(n) => Code::prime_power(symbols::NUM_PRIME, Code::from_big(n + BigUint::one())),
        Termoid::App(f, args) => {
            let mut factors = vec![pp(0, func_code(*f))];
            for (i, a) in args.iter().enumerate() {
                factors.push(pp(i as u64 + 1, encode_termoid(a)?));
            }
            product(factors)
        }
        Termoid::Iota(v, body) => product(vec![
            pp(0, Code::from_u64(symbols::IOTA)),
            pp(1, var_code(*v)),
            pp(2, encode_formula(body)?),
        ]),
    })
}

fn pred_code(p: Pred) -> u64 {
    match p {
        Pred::Eq => symbols::EQ,
        Pred::Lt => symbols::LT,
        Pred::Le => symbols::LE,
    }
}

pub fn encode_formula(e: &Formula) -> Result<Code, EncodeError> {
    let triple = |h: u64, a: Code, b: Code| product(vec![pp(0, Code::from_u64(h)), pp(1, a), pp(2, b)]);
    Ok(match e {
        Formula::Atom(p, l, r) => triple(pred_code(*p), encode_termoid(l)?, encode_termoid(r)?),
        Formula::Imp(a, b) => triple(symbols::IMP, encode_formula(a)?, encode_formula(b)?),
        Formula::And(a, b) => triple(symbols::AND, encode_formula(a)?, encode_formula(b)?),
        Formula::Or(a, b) => triple(symbols::OR, encode_formula(a)?, encode_formula(b)?),
        Formula::Forall(v, a) => triple(symbols::FORALL, var_code(*v), encode_formula(a)?),
        Formula::Exists(v, a) => triple(symbols::EXISTS, var_code(*v), encode_formula(a)?),
        Formula::Kleene(_) => return Err(EncodeError::KleenePresent),
    })
}

pub fn encode_deduction(d: &Deduction) -> Result<Code, EncodeError> {
    Ok(match d {
        Deduction::Trivial(r) => Code::prime_power(0, encode_formula(r)?),
        Deduction::Mp { root, minor, major } => product(vec![
            pp(0, encode_formula(root)?),
            pp(1, encode_deduction(minor)?),
            pp(2, encode_deduction(major)?),
        ]),
        Deduction::Gen { root, premise, .. } => {
            product(vec![pp(0, encode_formula(root)?), pp(1, encode_deduction(premise)?)])
        }
    })
}

/// What `decode` should look for.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kind {
    Auto,
    Termoid,
    Formula,
    Deduction,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Object {
    Termoid(Termoid),
    Formula(Formula),
    Deduction(Deduction),
}

impl fmt::Display for Object {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Object::Termoid(t) => write!(f, "termoid {t}"),
            Object::Formula(e) => write!(f, "formula {e}"),
            Object::Deduction(d) => write!(f, "deduction with root {}", d.root()),
        }
    }
}

fn bad<T>(msg: impl Into<String>) -> Result<T, NotACode> {
    Err(NotACode(msg.into()))
}

/// The factors of `c`, which must be exactly at the given prime indices.
fn shape(c: &Code, want: &[u64]) -> Result<Vec<Code>, NotACode> {
    let f = c.factors().map_err(|e| NotACode(e.to_string()))?;
    if f.len() != want.len() || f.iter().zip(want).any(|((g, _), w)| g != w) {
        return bad(format!("expected factors at prime indices {want:?}"));
    }
    Ok(f.into_iter().map(|(_, e)| e).collect())
}

/// `Some((g, k))` when `c = p_g^k` with a small `k`.
fn as_prime_power(c: &Code) -> Option<(u64, u64)> {
    let f = c.factors().ok()?;
    match f.as_slice() {
        [(g, e)] => Some((*g, e.as_small()?)),
        _ => None,
    }
}

fn decode_var(c: &Code) -> Result<Var, NotACode> {
    match as_prime_power(c) {
        Some((symbols::VAR_PRIME, i)) if i >= 1 && i <= u32::MAX as u64 => Ok(Var(i as u32)),
        _ => bad("expected a variable code 29^i"),
    }
}

pub fn decode_termoid(c: &Code) -> Result<Termoid, NotACode> {
    if c.is_zero() || c.is_one() {
        return bad("0 and 1 code nothing");
    }
    let f = c.factors().map_err(|e| NotACode(e.to_string()))?;
    if let [(g, e)] = f.as_slice() {
        if *g == symbols::VAR_PRIME {
            return decode_var(c).map(Termoid::Var);
        }
        if *g == symbols::NUM_PRIME {
            let v = e
                .materialize(ARITH_BUDGET)
                .map_err(|_| NotACode("numeroid too long to decode".into()))?;
            return Ok(Termoid::Num(v - BigUint::one()));
        }
    }
    let head = c.exp(0);
    if head.as_small() == Some(symbols::IOTA) {
        let parts = shape(c, &[0, 1, 2])?;
        let v = decode_var(&parts[1])?;
        let body = decode_formula(&parts[2])?;
        if !body.occurs_free(v) {
            return bad("description body does not contain its variable");
        }
        return Ok(Termoid::Iota(v, Box::new(body)));
    }
    let func = match as_prime_power(&head) {
        Some((g, k)) => symbols::FUNC_PRIME
            .iter()
            .position(|&h| h == g)
            .and_then(|a| Func::from_table(a as u8 + 1, k as u32)),
        None => None,
    };
    let Some(func) = func else {
        return bad(format!("head exponent {head} is not a termoid symbol"));
    };
    let want: Vec<u64> = (0..=func.arity() as u64).collect();
    let parts = shape(c, &want).map_err(|_| NotACode(format!("arity mismatch for {}", func.name())))?;
    let args = parts[1..].iter().map(decode_termoid).collect::<Result<Vec<_>, _>>()?;
    Ok(Termoid::App(func, args))
}

pub fn decode_formula(c: &Code) -> Result<Formula, NotACode> {
    let head = c.exp(0).as_small();
    let pred = match head {
        Some(symbols::EQ) => Some(Pred::Eq),
        Some(symbols::LT) => Some(Pred::Lt),
        Some(symbols::LE) => Some(Pred::Le),
        _ => None,
    };
    let recognised = pred.is_some()
        || matches!(head, Some(symbols::IMP | symbols::AND | symbols::OR | symbols::FORALL | symbols::EXISTS));
    if !recognised {
        return bad("head exponent is not a formula symbol");
    }
    let parts = shape(c, &[0, 1, 2])?;
    if let Some(p) = pred {
        return Ok(Formula::Atom(p, decode_termoid(&parts[1])?, decode_termoid(&parts[2])?));
    }
    let h = head.unwrap();
    if h == symbols::FORALL || h == symbols::EXISTS {
        let v = decode_var(&parts[1])?;
        let body = Box::new(decode_formula(&parts[2])?);
        return Ok(if h == symbols::FORALL { Formula::Forall(v, body) } else { Formula::Exists(v, body) });
    }
    let a = Box::new(decode_formula(&parts[1])?);
    let b = Box::new(decode_formula(&parts[2])?);
    Ok(match h {
        symbols::IMP => Formula::Imp(a, b),
        symbols::AND => Formula::And(a, b),
        _ => Formula::Or(a, b),
    })
}

pub fn decode_deduction(c: &Code) -> Result<Deduction, NotACode> {
    if c.is_zero() || c.is_one() {
        return bad("0 and 1 code no deduction");
    }
    let n = c.factors().map_err(|e| NotACode(e.to_string()))?.len();
    match n {
        1 => {
            let parts = shape(c, &[0])?;
            Ok(Deduction::Trivial(decode_formula(&parts[0])?))
        }
        2 => {
            let parts = shape(c, &[0, 1])?;
            let root = decode_formula(&parts[0])?;
            let premise = decode_deduction(&parts[1])?;
            match &root {
                Formula::Forall(v, body) if **body == *premise.root() => {
                    Ok(Deduction::Gen { variable: *v, root, premise: Box::new(premise) })
                }
                _ => bad("generalization root does not quantify the premise root"),
            }
        }
        3 => {
            let parts = shape(c, &[0, 1, 2])?;
            let root = decode_formula(&parts[0])?;
            let minor = decode_deduction(&parts[1])?;
            let major = decode_deduction(&parts[2])?;
            let d = Deduction::mp(minor, major).map_err(|e| NotACode(e.to_string()))?;
            if *d.root() != root {
                return bad("modus ponens root differs from the major consequent");
            }
            Ok(d)
        }
        _ => bad("wrong number of factors for a deduction"),
    }
}

/// Heads of termoid and formula codes are small symbol codes; a deduction's
/// head is itself a formula code.
fn is_symbol_head(head: &Code) -> bool {
    if let Some(h) = head.as_small() {
        if [symbols::IMP, symbols::AND, symbols::OR, symbols::FORALL, symbols::EXISTS, symbols::EQ, symbols::LT, symbols::LE, symbols::IOTA]
            .contains(&h)
        {
            return true;
        }
    }
    matches!(as_prime_power(head), Some((g, _)) if symbols::FUNC_PRIME.contains(&g))
}

pub fn decode(c: &Code, kind: Kind) -> Result<Object, NotACode> {
    match kind {
        Kind::Termoid => decode_termoid(c).map(Object::Termoid),
        Kind::Formula => decode_formula(c).map(Object::Formula),
        Kind::Deduction => decode_deduction(c).map(Object::Deduction),
        Kind::Auto => {
            if c.is_zero() || c.is_one() {
                return bad("0 and 1 code nothing");
            }
            let single = matches!(as_prime_power(c), Some((g, _)) if g == symbols::VAR_PRIME)
                || matches!(c.factors().as_deref(), Ok([(symbols::NUM_PRIME, _)]));
            if single {
                return decode_termoid(c).map(Object::Termoid);
            }
            let head = c.exp(0);
            if head.is_zero() {
                return bad("no factor at prime 2");
            }
            if is_symbol_head(&head) {
                if let Ok(f) = decode_formula(c) {
                    return Ok(Object::Formula(f));
                }
                return decode_termoid(c).map(Object::Termoid);
            }
            decode_deduction(c).map(Object::Deduction)
        }
    }
}

/// The code of a closed constant numeroid's value, for small values.
pub fn small_value(c: &Code) -> Option<u64> {
    c.as_small().or_else(|| c.materialize(20).ok().and_then(|v| v.to_u64()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::*;

    fn falsum_code() -> Code {
        Code::product(vec![(0, 15.into()), (1, 23.into()), (2, 529.into())]).unwrap()
    }

    #[test]
    fn atoms_of_the_enumeration() {
        assert_eq!(encode_termoid(&var(1)).unwrap(), Code::from_u64(29));
        assert_eq!(encode_termoid(&num(0)).unwrap(), Code::from_u64(23));
        assert_eq!(encode_formula(&falsum()).unwrap(), falsum_code());
        let t = app2(Func::Add, num(0), var(1));
        let want = Code::product(vec![(0, 73.into()), (1, 23.into()), (2, 29.into())]).unwrap();
        assert_eq!(encode_termoid(&t).unwrap(), want);
    }

    #[test]
    fn implication_layout() {
        let a = eq(var(1), num(0));
        let c = encode_formula(&imp(a.clone(), falsum())).unwrap();
        assert_eq!(c.exp(0), Code::from_u64(3));
        assert_eq!(c.exp(1), encode_formula(&a).unwrap());
        assert_eq!(c.exp(2), falsum_code());
    }

    #[test]
    fn kleene_has_no_code() {
        assert_eq!(encode_formula(&kleene(var(1))), Err(EncodeError::KleenePresent));
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode(&Code::from_u64(29), Kind::Auto).unwrap(), Object::Termoid(var(1)));
        assert_eq!(decode(&falsum_code(), Kind::Auto).unwrap(), Object::Formula(falsum()));
        assert!(decode(&Code::from_u64(12), Kind::Auto).is_err());
        assert!(decode(&Code::zero(), Kind::Auto).is_err());
    }

    #[test]
    fn deductions_roundtrip() {
        let a = eq(num(0), num(0));
        let ax = imp(a.clone(), imp(falsum(), a.clone()));
        let d = Deduction::mp(Deduction::Trivial(a.clone()), Deduction::Trivial(ax)).unwrap();
        let g = Deduction::gen(d.clone(), Var(1));
        for x in [Deduction::Trivial(falsum()), d, g] {
            let c = encode_deduction(&x).unwrap();
            assert_eq!(c.exp(0), encode_formula(x.root()).unwrap());
            assert_eq!(decode(&c, Kind::Auto).unwrap(), Object::Deduction(x));
        }
    }

    #[test]
    fn sugar_roundtrips() {
        for t in [vf(), omega(), app1(Func::PiF, var(3))] {
            let c = encode_termoid(&t).unwrap();
            assert_eq!(decode_termoid(&c).unwrap(), t);
        }
        let c = encode_formula(&con_ari()).unwrap();
        assert_eq!(decode(&c, Kind::Auto).unwrap(), Object::Formula(con_ari()));
    }

    #[test]
    fn function_heads_of_every_size() {
        for f in Func::all() {
            let args = (0..f.arity()).map(|i| num(i as u64)).collect();
            let t = app(f, args);
            assert_eq!(decode_termoid(&encode_termoid(&t).unwrap()).unwrap(), t);
        }
    }
}
