//! Symbolic enumeration numbers.
//!
//! A [`Code`] is either a literal integer or a product of prime powers whose
//! exponents are again codes. Canonical form:
//!
//! * values below 2^32 are always `Lit`;
//! * a `Prod` has strictly increasing prime indices, no zero exponent and a
//!   value of at least 2^32;
//! * a literal of at least 2^32 is turned into a `Prod` when trial division by
//!   the primes below 2^16 factors it completely, and stays `Lit` otherwise.
//!
//! The last clause leaves one ambiguity (large literals with a large cofactor),
//! which [`Code::code_eq`] resolves by materializing.

use crate::primes;
use num_bigint::BigUint;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

/// Literals below this bound are canonical as `Lit`.
pub const SMALL_LIMIT: u64 = 1 << 32;

/// Digit budget used when exponents have to be added or compared numerically.
pub const ARITH_BUDGET: usize = 10_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Code {
    Lit(BigUint),
    Prod(Arc<Vec<(u64, Code)>>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodeError {
    #[error("value is not materializable within {budget} digits")]
    NonMaterializable { budget: usize },
    #[error("prime index {0} is outside the supported prime table")]
    PrimeOutOfRange(u64),
    #[error("literal has a cofactor that trial division cannot split")]
    Unfactorable,
}

/// Materialization refused: the value has more decimal digits than allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TooLarge {
    /// Certified lower bound on the number of decimal digits.
    pub digits_lower_bound: BigUint,
}

/// log10 of a prime, rounded down, scaled by 10^15.
fn log10_scaled_floor(p: u64) -> BigUint {
    let l = (p as f64).log10();
    // f64 is good to ~1e-16 relative; back off by 100 ulps of the scale
    let scaled = (l * 1e15).floor() as u64;
    BigUint::from(scaled.saturating_sub(100))
}

fn log10_scale() -> BigUint {
    BigUint::from(10u64.pow(15))
}

fn decimal_digits(n: &BigUint) -> usize {
    if n.is_zero() {
        return 1;
    }
    n.to_str_radix(10).len()
}

/// Largest exponent budget (in digits) tried when bounding a tower.
const EXPONENT_PROBE: usize = 4_000;
/// Cap on the size of a lower bound built from a non-materializable exponent.
const BOUND_CAP_DIGITS: usize = 4_000;

impl Code {
    pub fn zero() -> Code {
        Code::Lit(BigUint::zero())
    }

    pub fn one() -> Code {
        Code::Lit(BigUint::one())
    }

    pub fn from_u64(n: u64) -> Code {
        Code::from_big(BigUint::from(n))
    }

    /// Canonical code of an integer.
    pub fn from_big(n: BigUint) -> Code {
        if n < BigUint::from(SMALL_LIMIT) {
            return Code::Lit(n);
        }
        let (found, rest) = primes::trial_divide(&n);
        if !rest.is_one() {
            return Code::Lit(n);
        }
        let factors = found
            .into_iter()
            .map(|(p, k)| (primes::prime_index(p), Code::from_u64(k)))
            .collect();
        Code::Prod(Arc::new(factors))
    }

    /// `p_g ^ e`.
    pub fn prime_power(g: u64, e: Code) -> Code {
        Code::product(vec![(g, e)]).expect("a single factor never needs addition")
    }

    /// Canonical product of prime powers; repeated indices have their
    /// exponents added.
    pub fn product(mut factors: Vec<(u64, Code)>) -> Result<Code, CodeError> {
        factors.sort_by_key(|f| f.0);
        let mut merged: Vec<(u64, Code)> = Vec::with_capacity(factors.len());
        for (g, e) in factors {
            if e.is_zero() {
                continue;
            }
            match merged.last_mut() {
                Some((h, acc)) if *h == g => *acc = acc.add(&e, ARITH_BUDGET)?,
                _ => merged.push((g, e)),
            }
        }
        Ok(Code::from_sorted_factors(merged))
    }

    /// Builds a code from factors that are already sorted, merged and nonzero.
    fn from_sorted_factors(factors: Vec<(u64, Code)>) -> Code {
        if factors.is_empty() {
            return Code::one();
        }
        let mut bits = 0f64;
        for (g, e) in &factors {
            match (e, primes::nth_prime(*g)) {
                (Code::Lit(v), Some(p)) => bits += v.to_f64().unwrap_or(f64::INFINITY) * (p as f64).log2(),
                _ => bits = f64::INFINITY,
            }
        }
        let candidate = Code::Prod(Arc::new(factors));
        if bits < 33.0 {
            if let Ok(v) = candidate.materialize(10) {
                if v < BigUint::from(SMALL_LIMIT) {
                    return Code::Lit(v);
                }
            }
        }
        candidate
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Code::Lit(n) if n.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Code::Lit(n) if n.is_one())
    }

    pub fn as_small(&self) -> Option<u64> {
        match self {
            Code::Lit(n) => n.to_u64(),
            Code::Prod(_) => None,
        }
    }

    /// Prime-power view of a positive code.
    pub fn factors(&self) -> Result<Vec<(u64, Code)>, CodeError> {
        match self {
            Code::Prod(f) => Ok(f.as_ref().clone()),
            Code::Lit(n) if n.is_zero() || n.is_one() => Ok(Vec::new()),
            Code::Lit(n) => match n.to_u64() {
                Some(small) if small < SMALL_LIMIT => Ok(primes::factor_u64(small)
                    .into_iter()
                    .map(|(p, k)| (primes::prime_index(p), Code::from_u64(k as u64)))
                    .collect()),
                _ => Err(CodeError::Unfactorable),
            },
        }
    }

    /// Exponent of the g-th prime; zero for the code 0 and for absent primes.
    pub fn exp(&self, g: u64) -> Code {
        match self {
            Code::Prod(f) => f
                .iter()
                .find(|(h, _)| *h == g)
                .map(|(_, e)| e.clone())
                .unwrap_or_else(Code::zero),
            Code::Lit(n) if n.is_zero() || n.is_one() => Code::zero(),
            Code::Lit(n) => match primes::nth_prime(g) {
                Some(p) => Code::from_u64(primes::multiplicity(n, p)),
                // primes beyond the table are larger than any 23-bit literal
                None if n.bits() <= 23 => Code::zero(),
                None => match self.factors() {
                    Ok(f) => f
                        .into_iter()
                        .find(|(h, _)| *h == g)
                        .map(|(_, e)| e)
                        .unwrap_or_else(Code::zero),
                    Err(_) => Code::zero(),
                },
            },
        }
    }

    /// Largest prime index present; 0 for the codes 0 and 1.
    pub fn len(&self) -> Result<u64, CodeError> {
        Ok(self.factors()?.last().map(|f| f.0).unwrap_or(0))
    }

    /// Certified lower bound on the number of decimal digits of the value.
    pub fn digits_lower_bound(&self) -> BigUint {
        match self {
            Code::Lit(n) => BigUint::from(decimal_digits(n)),
            Code::Prod(f) => {
                let mut scaled = BigUint::zero();
                for (g, e) in f.iter() {
                    let p = primes::nth_prime(*g).unwrap_or(2);
                    let e_lb = match e {
                        Code::Lit(v) => v.clone(),
                        Code::Prod(_) => {
                            let d = e.digits_lower_bound().to_usize().unwrap_or(usize::MAX);
                            let probe = if d <= EXPONENT_PROBE { e.materialize(EXPONENT_PROBE).ok() } else { None };
                            probe.unwrap_or_else(|| {
                                BigUint::from(10u32).pow(d.saturating_sub(1).min(BOUND_CAP_DIGITS) as u32)
                            })
                        }
                    };
                    scaled += e_lb * log10_scaled_floor(p);
                }
                scaled / log10_scale() + BigUint::one()
            }
        }
    }

    /// The exact value if it has at most `budget` decimal digits.
    pub fn materialize(&self, budget: usize) -> Result<BigUint, TooLarge> {
        match self {
            Code::Lit(n) => {
                let d = decimal_digits(n);
                if d <= budget {
                    Ok(n.clone())
                } else {
                    Err(TooLarge { digits_lower_bound: BigUint::from(d) })
                }
            }
            Code::Prod(f) => {
                let lb = self.digits_lower_bound();
                if lb > BigUint::from(budget) {
                    return Err(TooLarge { digits_lower_bound: lb });
                }
                let mut value = BigUint::one();
                for (g, e) in f.iter() {
                    let p = primes::nth_prime(*g).ok_or(TooLarge { digits_lower_bound: lb.clone() })?;
                    // lb ≤ budget, so every exponent is at most ~3.33 * budget
                    let e = e.materialize(EXPONENT_PROBE).map_err(|_| TooLarge { digits_lower_bound: lb.clone() })?;
                    let e = e.to_u32().ok_or(TooLarge { digits_lower_bound: lb.clone() })?;
                    value *= BigUint::from(p).pow(e);
                    if value.bits() as f64 * std::f64::consts::LOG10_2 > budget as f64 + 1.0 {
                        return Err(TooLarge { digits_lower_bound: BigUint::from(budget + 1) });
                    }
                }
                let d = decimal_digits(&value);
                if d <= budget {
                    Ok(value)
                } else {
                    Err(TooLarge { digits_lower_bound: BigUint::from(d) })
                }
            }
        }
    }

    /// Equality of denoted integers.
    pub fn code_eq(&self, other: &Code) -> bool {
        match (self, other) {
            (Code::Lit(a), Code::Lit(b)) => a == b,
            (Code::Prod(a), Code::Prod(b)) => {
                a.len() == b.len() && a.iter().zip(b.iter()).all(|((g, e), (h, f))| g == h && e.code_eq(f))
            }
            (Code::Lit(n), p @ Code::Prod(_)) | (p @ Code::Prod(_), Code::Lit(n)) => {
                if n < &BigUint::from(SMALL_LIMIT) {
                    return false;
                }
                match p.materialize(decimal_digits(n)) {
                    Ok(v) => &v == n,
                    Err(_) => false,
                }
            }
        }
    }

    pub fn add(&self, other: &Code, budget: usize) -> Result<Code, CodeError> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let a = self.materialize(budget).map_err(|_| CodeError::NonMaterializable { budget })?;
        let b = other.materialize(budget).map_err(|_| CodeError::NonMaterializable { budget })?;
        Ok(Code::from_big(a + b))
    }

    /// Absolute difference. Equal codes give 0 without materializing.
    pub fn abs_diff(&self, other: &Code, budget: usize) -> Result<Code, CodeError> {
        if self.code_eq(other) {
            return Ok(Code::zero());
        }
        let a = self.materialize(budget).map_err(|_| CodeError::NonMaterializable { budget })?;
        let b = other.materialize(budget).map_err(|_| CodeError::NonMaterializable { budget })?;
        Ok(Code::from_big(if a > b { a - b } else { b - a }))
    }

    pub fn mul(&self, other: &Code, budget: usize) -> Result<Code, CodeError> {
        if self.is_zero() || other.is_zero() {
            return Ok(Code::zero());
        }
        match (self.factors(), other.factors()) {
            (Ok(mut a), Ok(b)) => {
                a.extend(b);
                Code::product(a)
            }
            _ => {
                let a = self.materialize(budget).map_err(|_| CodeError::NonMaterializable { budget })?;
                let b = other.materialize(budget).map_err(|_| CodeError::NonMaterializable { budget })?;
                Ok(Code::from_big(a * b))
            }
        }
    }

    pub fn pow(&self, exponent: &Code, budget: usize) -> Result<Code, CodeError> {
        if exponent.is_zero() {
            return Ok(Code::one());
        }
        if self.is_zero() || self.is_one() {
            return Ok(self.clone());
        }
        match self.factors() {
            Ok(f) => {
                let mut out = Vec::with_capacity(f.len());
                for (g, e) in f {
                    out.push((g, e.mul(exponent, budget)?));
                }
                Code::product(out)
            }
            Err(_) => {
                let b = self.materialize(budget).map_err(|_| CodeError::NonMaterializable { budget })?;
                let e = exponent
                    .materialize(12)
                    .ok()
                    .and_then(|e| e.to_u32())
                    .ok_or(CodeError::NonMaterializable { budget })?;
                let v = b.pow(e);
                if decimal_digits(&v) > budget {
                    return Err(CodeError::NonMaterializable { budget });
                }
                Ok(Code::from_big(v))
            }
        }
    }
}

impl From<u64> for Code {
    fn from(n: u64) -> Code {
        Code::from_u64(n)
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Code::Lit(n) => write!(f, "{n}"),
            Code::Prod(factors) => {
                for (i, (g, e)) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, " * ")?;
                    }
                    match e {
                        Code::Lit(_) => write!(f, "p({g})^{e}")?,
                        Code::Prod(_) => write!(f, "p({g})^({e})")?,
                    }
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Code[{self}]")
    }
}

/// Parses the CLI code syntax: integers, `p(<g>)^<atom>`, products joined by
/// `*`, and parentheses.
pub fn parse_code(text: &str) -> Result<Code, String> {
    let mut p = CodeParser { s: text.as_bytes(), i: 0 };
    let c = p.product()?;
    p.ws();
    if p.i != p.s.len() {
        return Err(format!("unexpected input at byte {}", p.i));
    }
    Ok(c)
}

struct CodeParser<'a> {
    s: &'a [u8],
    i: usize,
}

impl CodeParser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.ws();
        if self.s.get(self.i) == Some(&c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<BigUint, String> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        if start == self.i {
            return Err(format!("expected a number at byte {start}"));
        }
        let digits = std::str::from_utf8(&self.s[start..self.i]).unwrap();
        Ok(digits.parse::<BigUint>().unwrap())
    }

    fn product(&mut self) -> Result<Code, String> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let next = self.factor()?;
            acc = acc.mul(&next, ARITH_BUDGET).map_err(|e| e.to_string())?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Code, String> {
        self.ws();
        if self.eat(b'(') {
            let c = self.product()?;
            if !self.eat(b')') {
                return Err(format!("expected ')' at byte {}", self.i));
            }
            return Ok(c);
        }
        if self.s.get(self.i) == Some(&b'p') {
            self.i += 1;
            if !self.eat(b'(') {
                return Err(format!("expected '(' at byte {}", self.i));
            }
            let g = self.number()?.to_u64().ok_or("prime index too large")?;
            if !self.eat(b')') || !self.eat(b'^') {
                return Err(format!("expected ')^' at byte {}", self.i));
            }
            let e = if self.eat(b'(') {
                let e = self.product()?;
                if !self.eat(b')') {
                    return Err(format!("expected ')' at byte {}", self.i));
                }
                e
            } else {
                Code::from_big(self.number()?)
            };
            if primes::nth_prime(g).is_none() {
                return Err(format!("prime index {g} is outside the prime table"));
            }
            return Ok(Code::prime_power(g, e));
        }
        Ok(Code::from_big(self.number()?))
    }
}
