//! Small-prime utilities: a cached sieve, prime indexing and trial division.
//!
//! Prime indices are zero based: `nth_prime(0) == 2`, `nth_prime(9) == 29`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

const SIEVE_LIMIT: usize = 10_000_000;

/// Primes below 2^16; trial division of large literals stops here.
const TRIAL_LIMIT: u64 = 1 << 16;

fn sieve() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut composite = vec![false; SIEVE_LIMIT + 1];
        let mut out = Vec::with_capacity(700_000);
        for i in 2..=SIEVE_LIMIT {
            if !composite[i] {
                out.push(i as u64);
                let mut j = i * i;
                while j <= SIEVE_LIMIT {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

fn small_primes() -> &'static [u64] {
    static SMALL: OnceLock<Vec<u64>> = OnceLock::new();
    SMALL.get_or_init(|| {
        let mut composite = vec![false; TRIAL_LIMIT as usize];
        let mut out = Vec::new();
        for i in 2..TRIAL_LIMIT as usize {
            if !composite[i] {
                out.push(i as u64);
                let mut j = i * i;
                while j < TRIAL_LIMIT as usize {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

/// The g-th prime, if it lies within the sieve.
pub fn nth_prime(g: u64) -> Option<u64> {
    if g < 16 {
        const FIRST: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
        return Some(FIRST[g as usize]);
    }
    if g < small_primes().len() as u64 {
        return Some(small_primes()[g as usize]);
    }
    sieve().get(g as usize).copied()
}

/// Number of primes ≤ x (Lucy Hedgehog), memoized.
fn prime_pi(x: u64) -> u64 {
    static MEMO: OnceLock<Mutex<HashMap<u64, u64>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = memo.lock().unwrap().get(&x) {
        return *v;
    }
    let r = x.isqrt();
    // lo[i] = S(i) for i ≤ r, hi[i] = S(x / i) for i ≤ r
    let mut lo: Vec<u64> = (0..=r).map(|i| i.saturating_sub(1)).collect();
    let mut hi: Vec<u64> = (0..=r).map(|i| if i == 0 { 0 } else { x / i - 1 }).collect();
    for p in 2..=r {
        if lo[p as usize] == lo[p as usize - 1] {
            continue;
        }
        let sp = lo[p as usize - 1];
        let p2 = p * p;
        for i in 1..=r {
            let v = x / i;
            if v < p2 {
                break;
            }
            let d = i * p;
            let sv = if d <= r { hi[d as usize] } else { lo[(x / d) as usize] };
            hi[i as usize] -= sv - sp;
        }
        for v in (p2..=r).rev() {
            let sv = lo[(v / p) as usize];
            lo[v as usize] -= sv - sp;
        }
    }
    let out = hi[1];
    memo.lock().unwrap().insert(x, out);
    out
}

/// Zero-based index of the prime `p`. `p` must be prime.
pub fn prime_index(p: u64) -> u64 {
    let primes = sieve();
    if p <= SIEVE_LIMIT as u64 {
        return primes.binary_search(&p).expect("prime_index of a non-prime") as u64;
    }
    prime_pi(p) - 1
}

/// Full factorization of `n ≥ 2` as (prime, multiplicity) pairs, ascending.
/// Exact for every `n < 2^32`.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for &p in small_primes() {
        if p * p > n {
            break;
        }
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Trial division of a large integer by primes below 2^16.
/// Returns the (prime, multiplicity) pairs found and the remaining cofactor,
/// which is 1 whenever the factorization completed.
pub fn trial_divide(n: &BigUint) -> (Vec<(u64, u64)>, BigUint) {
    let one = BigUint::from(1u32);
    let mut rest = n.clone();
    let mut out = Vec::new();
    for &p in small_primes() {
        if rest == one {
            break;
        }
        if BigUint::from(p * p) > rest {
            // no factor ≤ sqrt(rest) remains, so rest is prime
            out.push((rest.to_u64().expect("cofactor below 2^32"), 1));
            rest = one.clone();
            break;
        }
        let bp = BigUint::from(p);
        let mut k = 0u64;
        loop {
            let (q, r) = rest.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            rest = q;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
    }
    (out, rest)
}

/// Multiplicity of the prime `p` in `n > 0`.
pub fn multiplicity(n: &BigUint, p: u64) -> u64 {
    let bp = BigUint::from(p);
    let mut rest = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = rest.div_rem(&bp);
        if !r.is_zero() {
            return k;
        }
        rest = q;
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_primes() {
        assert_eq!(nth_prime(0), Some(2));
        assert_eq!(nth_prime(8), Some(23));
        assert_eq!(nth_prime(9), Some(29));
        assert_eq!(nth_prime(19), Some(71));
        assert_eq!(nth_prime(20), Some(73));
        assert_eq!(nth_prime(21), Some(79));
        assert_eq!(nth_prime(29), Some(113));
        assert_eq!(prime_index(113), 29);
    }

    #[test]
    fn lucy_matches_sieve() {
        for x in [10u64, 100, 1000, 65_537, 1_000_000] {
            let count = sieve().iter().take_while(|&&p| p <= x).count() as u64;
            assert_eq!(prime_pi(x), count, "pi({x})");
        }
        // 4294967291 is the largest prime below 2^32; pi(2^32) = 203280221
        assert_eq!(prime_index(4_294_967_291), 203_280_220);
    }

    #[test]
    fn factor_small() {
        assert_eq!(factor_u64(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factor_u64(4_294_967_291), vec![(4_294_967_291, 1)]);
        assert_eq!(factor_u64(65_521 * 65_519), vec![(65_519, 1), (65_521, 1)]);
    }

    #[test]
    fn trial_division_of_large() {
        let n = BigUint::from(2u32).pow(100) * BigUint::from(7u32);
        let (f, rest) = trial_divide(&n);
        assert_eq!(f, vec![(2, 100), (7, 1)]);
        assert_eq!(rest, BigUint::from(1u32));
    }
}
