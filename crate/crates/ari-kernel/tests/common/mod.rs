//! Strategies and properties shared by the property tests and the
//! acceptance harness. Every property takes a case count and reports the
//! first counterexample as an error string.
#![allow(dead_code)]

use ari_kernel::arith::{
    eval_e, eval_ell, eval_mp, eval_mp_code, eval_sigma, exp_path, AxiomTable, Ell1, Valuation, SIGMA_BUDGET,
};
use ari_kernel::calculus::{
    expand_derived, instantiate, match_axiom, verify_expansion, DerivedRule, ExpJust, Mode, SchemaId,
};
use ari_kernel::code::Code;
use ari_kernel::corpus;
use ari_kernel::encode::{
    decode_deduction, decode_formula, decode_termoid, encode_deduction, encode_formula, encode_termoid, Deduction,
};
use ari_kernel::kleene::{substantiate, translate};
use ari_kernel::script::{check_script, parse_script, AuditReport, CheckOptions, Script};
use ari_kernel::syntax::{
    and, app1, app2, atom, closure, eq, exists, falsum, forall, imp, kleene, negate, num, or, parse_formula,
    parse_termoid, substitute, var, Formula, Func, Pred, Termoid, Var,
};
use num_bigint::BigUint;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRng, TestRunner, RngAlgorithm};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::sync::OnceLock;

pub type Property = fn(u32) -> Result<(), String>;

/// Name, default case count and body of every property.
pub const PROPERTIES: &[(&str, u32, Property)] = &[
    ("print_parse_round_trip", 1000, print_parse_round_trip),
    ("identity_substitution", 500, identity_substitution),
    ("substitution_free_vars", 500, substitution_free_vars),
    ("negation_shape", 300, negation_shape),
    ("encode_decode_round_trip", 1000, encode_decode_round_trip),
    ("encoding_injective", 500, encoding_injective),
    ("root_correlation", 1000, root_correlation),
    ("mp_code_identities", 1000, mp_code_identities),
    ("implication_major_exponents", 500, implication_major_exponents),
    ("mp_dichotomy", 1000, mp_dichotomy),
    ("exponent_extraction", 1000, exponent_extraction),
    ("materialization_matches_naive", 1000, materialization_matches_naive),
    ("literal_exponents_match_trial_division", 1000, literal_exponents_match_trial_division),
    ("ell_decomposition", 300, ell_decomposition),
    ("mp_components_are_smaller", 1000, mp_components_are_smaller),
    ("sigma_is_identity", 300, sigma_is_identity),
    ("schema_round_trip", 1000, schema_round_trip),
    ("closed_mode_needs_closed_formulas", 500, closed_mode_needs_closed_formulas),
    ("derived_rule_expansions_verify", 1000, derived_rule_expansions_verify),
    ("true_antecedent_substantiates", 300, true_antecedent_substantiates),
    ("false_antecedent_substantiates", 300, false_antecedent_substantiates),
    ("translation_commutes", 500, translation_commutes),
    ("checker_is_deterministic", 14, checker_is_deterministic),
    ("prefix_verdicts_are_stable", 40, prefix_verdicts_are_stable),
    ("range_width_law", 200, range_width_law),
    ("classification_dichotomy", 300, classification_dichotomy),
];

pub fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config { cases, failure_persistence: None, max_shrink_iters: 256, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

// ---------------------------------------------------------------------------
// strategies

pub fn arb_var() -> impl Strategy<Value = Var> {
    (1u32..6).prop_map(Var)
}

const UNARY: [Func; 8] = [Func::Suc, Func::Sg, Func::Exp0, Func::Exp1, Func::Exp2, Func::Ell1, Func::Fl, Func::Len];
const BINARY: [Func; 5] = [Func::Add, Func::Mul, Func::Pow, Func::Mp, Func::Ell];

pub fn arb_termoid() -> impl Strategy<Value = Termoid> {
    let leaf = prop_oneof![(1u32..6).prop_map(var), (0u64..40).prop_map(num)];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (prop::sample::select(&UNARY[..]), inner.clone()).prop_map(|(f, a)| app1(f, a)),
            (prop::sample::select(&BINARY[..]), inner.clone(), inner).prop_map(|(f, a, b)| app2(f, a, b)),
        ]
    })
}

pub fn arb_pred() -> impl Strategy<Value = Pred> {
    prop::sample::select(vec![Pred::Eq, Pred::Lt, Pred::Le])
}

fn formula_over(leaf: BoxedStrategy<Formula>) -> impl Strategy<Value = Formula> {
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| imp(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| or(a, b)),
            inner.clone().prop_map(negate),
            (arb_var(), inner.clone()).prop_map(|(v, a)| forall(v, a)),
            (arb_var(), inner).prop_map(|(v, a)| exists(v, a)),
        ]
    })
}

/// Formulas of the Kleene-free language, possibly open.
pub fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        4 => (arb_pred(), arb_termoid(), arb_termoid()).prop_map(|(p, l, r)| atom(p, l, r)),
        1 => Just(falsum()),
    ];
    formula_over(leaf.boxed())
}

/// Formulas that may contain Kleene atoms.
pub fn arb_nu_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        3 => (arb_pred(), arb_termoid(), arb_termoid()).prop_map(|(p, l, r)| atom(p, l, r)),
        1 => arb_termoid().prop_map(kleene),
    ];
    formula_over(leaf.boxed())
}

pub fn arb_closed_atom() -> impl Strategy<Value = Formula> {
    (arb_pred(), 0u64..20, 0u64..20).prop_map(|(p, a, b)| atom(p, num(a), num(b)))
}

/// Codes of every flavor: small literals, explicit products and the
/// symbolic codes of formulas.
pub fn arb_code() -> impl Strategy<Value = Code> {
    let lit = prop_oneof![(0u64..1_000_000).prop_map(Code::from_u64), any::<u64>().prop_map(Code::from_u64)];
    let prod = prop::collection::vec((0u64..6, 0u64..40), 0..5)
        .prop_map(|fs| Code::product(fs.into_iter().map(|(g, e)| (g, Code::from_u64(e))).collect()).unwrap());
    let sym = || arb_formula().prop_map(|f| encode_formula(&f).unwrap());
    let nested = (0u64..4, sym()).prop_map(|(g, c)| Code::prime_power(g, c));
    prop_oneof![lit, prod, sym(), nested]
}

// ---------------------------------------------------------------------------
// deduction trees

fn random_closed_atom(rng: &mut StdRng) -> Formula {
    let p = [Pred::Eq, Pred::Lt, Pred::Le][rng.gen_range(0..3)];
    atom(p, num(rng.gen_range(0..30)), num(rng.gen_range(0..30)))
}

fn random_formula(rng: &mut StdRng, depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.4) {
        return match rng.gen_range(0..4) {
            0 => eq(var(rng.gen_range(1..5)), num(rng.gen_range(0..9))),
            1 => falsum(),
            _ => random_closed_atom(rng),
        };
    }
    match rng.gen_range(0..4) {
        0 => imp(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
        1 => and(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
        2 => forall(Var(rng.gen_range(1..5)), random_formula(rng, depth - 1)),
        _ => negate(random_formula(rng, depth - 1)),
    }
}

/// A deduction tree of depth at most `depth` whose root is `target`.
fn deduction_with_root(rng: &mut StdRng, depth: usize, target: Formula) -> Deduction {
    if depth == 0 || rng.gen_bool(0.35) {
        return Deduction::Trivial(target);
    }
    let minor = random_deduction(rng, depth - 1);
    let major = deduction_with_root(rng, depth - 1, imp(minor.root().clone(), target));
    Deduction::mp(minor, major).expect("major is built to fit")
}

/// A random deduction tree (MP and Gen nodes over arbitrary leaves).
pub fn random_deduction(rng: &mut StdRng, depth: usize) -> Deduction {
    if depth > 0 && rng.gen_bool(0.2) {
        let premise = random_deduction(rng, depth - 1);
        return Deduction::gen(premise, Var(rng.gen_range(1..5)));
    }
    let target = random_formula(rng, 2);
    deduction_with_root(rng, depth, target)
}

/// A genuine proof in closed Ari: reflexivity leaves lifted through Imp1
/// instances.
pub fn random_proof(rng: &mut StdRng, depth: usize) -> Deduction {
    if depth == 0 || rng.gen_bool(0.3) {
        if rng.gen_bool(0.5) {
            let k = num(rng.gen_range(0..50));
            return Deduction::Trivial(eq(k.clone(), k));
        }
        let (a, b) = (random_closed_atom(rng), random_closed_atom(rng));
        return Deduction::Trivial(imp(a.clone(), imp(b, a)));
    }
    let minor = random_proof(rng, depth - 1);
    let a = minor.root().clone();
    let z = random_closed_atom(rng);
    let major = Deduction::Trivial(imp(a.clone(), imp(z, a)));
    Deduction::mp(minor, major).expect("Imp1 instance fits")
}

// ---------------------------------------------------------------------------
// syntax

pub fn print_parse_round_trip(cases: u32) -> Result<(), String> {
    run(cases, (arb_nu_formula(), arb_termoid()), |(f, t)| {
        prop_assert_eq!(parse_formula(&f.to_string()).map_err(|e| TestCaseError::fail(e.to_string()))?, f);
        prop_assert_eq!(parse_termoid(&t.to_string()).map_err(|e| TestCaseError::fail(e.to_string()))?, t);
        Ok(())
    })
}

pub fn identity_substitution(cases: u32) -> Result<(), String> {
    run(cases, (arb_nu_formula(), arb_var()), |(f, v)| {
        let (out, obs) = substitute(&f, v, &Termoid::Var(v), true).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(out, f);
        prop_assert!(obs.is_empty());
        Ok(())
    })
}

pub fn substitution_free_vars(cases: u32) -> Result<(), String> {
    run(cases, (arb_nu_formula(), arb_var(), arb_termoid()), |(f, v, t)| {
        let (out, ok) = f.subst(v, &t);
        let allowed: std::collections::BTreeSet<Var> =
            f.free_vars().into_iter().filter(|w| *w != v).chain(t.free_vars()).collect();
        prop_assert!(out.free_vars().is_subset(&allowed));
        if !f.occurs_free(v) {
            prop_assert_eq!(&out, &f);
            prop_assert!(ok);
        }
        Ok(())
    })
}

pub fn negation_shape(cases: u32) -> Result<(), String> {
    run(cases, arb_formula(), |f| {
        let n = negate(f.clone());
        prop_assert_eq!(n.as_negation(), Some(&f));
        prop_assert_eq!(n.as_imp(), Some((&f, &falsum())));
        prop_assert_eq!(n.to_string(), format!("neg({f})"));
        let (cn, cf) = (encode_formula(&n).unwrap(), encode_formula(&f).unwrap());
        prop_assert!(cn.exp(1).code_eq(&cf));
        prop_assert!(cn.exp(2).code_eq(&encode_formula(&falsum()).unwrap()));
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// enumeration

pub fn encode_decode_round_trip(cases: u32) -> Result<(), String> {
    run(cases, (arb_formula(), arb_termoid()), |(f, t)| {
        let c = encode_formula(&f).unwrap();
        prop_assert_eq!(decode_formula(&c).map_err(|e| TestCaseError::fail(e.to_string()))?, f);
        let c = encode_termoid(&t).unwrap();
        prop_assert_eq!(decode_termoid(&c).map_err(|e| TestCaseError::fail(e.to_string()))?, t);
        Ok(())
    })
}

pub fn encoding_injective(cases: u32) -> Result<(), String> {
    run(cases, (arb_formula(), arb_formula()), |(f, g)| {
        let (cf, cg) = (encode_formula(&f).unwrap(), encode_formula(&g).unwrap());
        prop_assert_eq!(cf.code_eq(&cg), f == g);
        Ok(())
    })
}

pub fn root_correlation(cases: u32) -> Result<(), String> {
    run(cases, (any::<u64>(), 0usize..=6), |(seed, depth)| {
        let d = random_deduction(&mut StdRng::seed_from_u64(seed), depth);
        prop_assert!(d.depth() <= 6);
        let c = encode_deduction(&d).unwrap();
        prop_assert!(c.exp(0).code_eq(&encode_formula(d.root()).unwrap()));
        prop_assert_eq!(decode_deduction(&c).map_err(|e| TestCaseError::fail(e.to_string()))?, d);
        Ok(())
    })
}

pub fn mp_code_identities(cases: u32) -> Result<(), String> {
    run(cases, (arb_code(), arb_code()), |(n, q)| {
        let m = eval_mp_code(&n, &q);
        prop_assert!(m.exp(0).code_eq(&exp_path(&q, &[0, 2])));
        prop_assert!(m.exp(1).code_eq(&n));
        prop_assert!(m.exp(2).code_eq(&q));
        prop_assert!(m.exp(0).code_eq(&exp_path(&m, &[2, 0, 2])));
        prop_assert!(exp_path(&m, &[1, 0]).code_eq(&n.exp(0)));
        prop_assert!(exp_path(&m, &[2, 0]).code_eq(&q.exp(0)));
        for g in 3..10 {
            prop_assert!(m.exp(g).is_zero());
        }
        Ok(())
    })
}

/// `(q)_{0,0} = 3`, `(q)_{0,1}` and `(q)_{0,2}` for deductions of implications.
pub fn implication_major_exponents(cases: u32) -> Result<(), String> {
    run(cases, (any::<u64>(), 0usize..4), |(seed, depth)| {
        let rng = &mut StdRng::seed_from_u64(seed);
        let (a, b) = (random_formula(rng, 2), random_formula(rng, 2));
        let q = encode_deduction(&deduction_with_root(rng, depth, imp(a.clone(), b.clone()))).unwrap();
        prop_assert!(exp_path(&q, &[0, 0]).code_eq(&Code::from_u64(3)));
        prop_assert!(exp_path(&q, &[0, 1]).code_eq(&encode_formula(&a).unwrap()));
        prop_assert!(exp_path(&q, &[0, 2]).code_eq(&encode_formula(&b).unwrap()));
        Ok(())
    })
}

fn arb_mp_pair() -> impl Strategy<Value = (Code, Code)> {
    let fitting = (any::<u64>(), 0usize..4).prop_map(|(seed, depth)| {
        let rng = &mut StdRng::seed_from_u64(seed);
        let minor = random_deduction(rng, depth);
        let target = random_formula(rng, 2);
        let major = deduction_with_root(rng, depth, imp(minor.root().clone(), target));
        (encode_deduction(&minor).unwrap(), encode_deduction(&major).unwrap())
    });
    prop_oneof![fitting, (arb_code(), arb_code())]
}

pub fn mp_dichotomy(cases: u32) -> Result<(), String> {
    run(cases, arb_mp_pair(), |(n, q)| {
        let r = eval_mp(&n, &q);
        let m = eval_mp_code(&n, &q);
        prop_assert!(r.is_zero() || r.code_eq(&m));
        let expected = eval_e(&n, &q) && !n.is_zero();
        prop_assert_eq!(r.code_eq(&m), expected);
        Ok(())
    })
}

pub fn exponent_extraction(cases: u32) -> Result<(), String> {
    run(cases, prop::collection::btree_map(0u64..12, arb_code(), 0..5), |fs| {
        let c = Code::product(fs.clone().into_iter().collect()).map_err(|e| TestCaseError::fail(e.to_string()))?;
        for g in 0..14 {
            match fs.get(&g) {
                Some(e) => prop_assert!(c.exp(g).code_eq(e)),
                None => prop_assert!(c.exp(g).is_zero()),
            }
        }
        Ok(())
    })
}

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn naive_multiplicity(mut n: u64, p: u64) -> u64 {
    let mut k = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        k += 1;
    }
    k
}

pub fn materialization_matches_naive(cases: u32) -> Result<(), String> {
    run(cases, prop::collection::vec((0usize..12, 0u32..25), 0..6), |fs| {
        let c = Code::product(fs.iter().map(|&(g, e)| (g as u64, Code::from_u64(e as u64))).collect()).unwrap();
        let naive: BigUint = fs.iter().fold(BigUint::from(1u32), |acc, &(g, e)| acc * BigUint::from(SMALL_PRIMES[g]).pow(e));
        prop_assert_eq!(c.materialize(10_000).map_err(|_| TestCaseError::fail("too large"))?, naive.clone());
        prop_assert!(c.code_eq(&Code::from_big(naive)));
        Ok(())
    })
}

pub fn literal_exponents_match_trial_division(cases: u32) -> Result<(), String> {
    run(cases, 1u64..1_000_000_000, |n| {
        let c = Code::from_u64(n);
        for (g, &p) in SMALL_PRIMES.iter().enumerate() {
            prop_assert_eq!(c.exp(g as u64).as_small(), Some(naive_multiplicity(n, p)));
        }
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// arithmetization

pub fn ell_decomposition(cases: u32) -> Result<(), String> {
    let table = AxiomTable::full();
    run(cases, (any::<u64>(), 0usize..5, arb_formula()), |(seed, depth, other)| {
        let d = random_proof(&mut StdRng::seed_from_u64(seed), depth);
        let n = encode_deduction(&d).unwrap();
        prop_assert!(Ell1::new(&table).is_proof(&n));
        let root = encode_formula(d.root()).unwrap();
        prop_assert!(eval_ell(&n, &root, &table).is_zero());
        let other = encode_formula(&other).unwrap();
        prop_assert_eq!(eval_ell(&n, &other, &table).is_zero(), other.code_eq(&root));
        // a reflexivity leaf with distinct sides is not an axiom
        let bad = encode_deduction(&Deduction::Trivial(eq(num(seed % 50), num(seed % 50 + 1)))).unwrap();
        prop_assert!(!Ell1::new(&table).is_proof(&bad));
        Ok(())
    })
}

pub fn mp_components_are_smaller(cases: u32) -> Result<(), String> {
    let tables = [AxiomTable::Micro(corpus::micro_a()), AxiomTable::Micro(corpus::micro_b())];
    run(cases, (1u64..300, 1u64..300, 0u64..2_000_000), |(a, b, n)| {
        let (a, b) = (Code::from_u64(a), Code::from_u64(b));
        let m = eval_mp_code(&a, &b);
        let mv = m.materialize(10_000).map_err(|_| TestCaseError::fail("too large"))?;
        prop_assert!(a.materialize(100).unwrap() < mv && b.materialize(100).unwrap() < mv);
        for t in &tables {
            // terminates, and literals that are neither axioms nor products of
            // three primes at most are never proofs
            let p = Ell1::new(t).is_proof(&Code::from_u64(n));
            if n % 7 == 0 && n > 0 {
                prop_assert!(!p);
            }
        }
        Ok(())
    })
}

pub fn sigma_is_identity(cases: u32) -> Result<(), String> {
    run(cases, 0u64..SIGMA_BUDGET, |n| {
        let v = BigUint::from(n);
        prop_assert_eq!(eval_sigma(&v, SIGMA_BUDGET).unwrap(), v);
        prop_assert!(eval_sigma(&BigUint::from(SIGMA_BUDGET + 1 + n), SIGMA_BUDGET).is_err());
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// calculus

/// Instances of schemata that must always be recognized, plus shapes that
/// may or may not be axioms.
fn schema_instances(a: &Formula, b: &Formula, c: &Formula, r: &Termoid, s: &Termoid, t: &Termoid, p: Pred) -> (Vec<Formula>, Vec<Formula>) {
    let must = vec![
        imp(a.clone(), imp(b.clone(), a.clone())),
        imp(imp(a.clone(), imp(b.clone(), c.clone())), imp(imp(a.clone(), b.clone()), imp(a.clone(), c.clone()))),
        imp(falsum(), a.clone()),
        eq(r.clone(), r.clone()),
        imp(negate(negate(a.clone())), a.clone()),
        imp(eq(r.clone(), s.clone()), imp(atom(p, r.clone(), t.clone()), atom(p, s.clone(), t.clone()))),
    ];
    let may = vec![
        imp(and(a.clone(), b.clone()), a.clone()),
        imp(and(a.clone(), b.clone()), b.clone()),
        imp(a.clone(), or(a.clone(), b.clone())),
        imp(b.clone(), or(a.clone(), b.clone())),
        or(a.clone(), negate(a.clone())),
        imp(eq(r.clone(), s.clone()), eq(s.clone(), r.clone())),
        imp(a.clone(), imp(b.clone(), and(a.clone(), b.clone()))),
        a.clone(),
        imp(a.clone(), b.clone()),
    ];
    (must, may)
}

fn arb_schema_inputs() -> impl Strategy<Value = (Formula, Formula, Formula, Termoid, Termoid, Termoid, Pred)> {
    let small = || prop_oneof![arb_closed_atom(), arb_formula()];
    (small(), small(), small(), arb_termoid(), arb_termoid(), arb_termoid(), arb_pred())
}

pub fn schema_round_trip(cases: u32) -> Result<(), String> {
    run(cases, arb_schema_inputs(), |(a, b, c, r, s, t, p)| {
        let (must, may) = schema_instances(&a, &b, &c, &r, &s, &t, p);
        for e in must.iter().chain(&may) {
            match match_axiom(e, Mode::Open) {
                Some(m) => {
                    let back = instantiate(&m);
                    prop_assert_eq!(back.as_ref(), Some(e), "schema {}", m.schema.name());
                }
                None => prop_assert!(!must.contains(e), "{} is not recognized", e),
            }
        }
        Ok(())
    })
}

pub fn closed_mode_needs_closed_formulas(cases: u32) -> Result<(), String> {
    run(cases, arb_schema_inputs(), |(a, b, c, r, s, t, p)| {
        let (must, may) = schema_instances(&a, &b, &c, &r, &s, &t, p);
        for e in must.iter().chain(&may) {
            if match_axiom(e, Mode::Closed).is_some() {
                prop_assert!(e.is_closed(), "{} matched while open", e);
            }
        }
        for e in &must {
            let vars: Vec<Var> = e.free_vars().into_iter().collect();
            let closed = closure(e, &vars).unwrap();
            prop_assert!(match_axiom(&closed, Mode::Closed).is_some(), "closure {} is not recognized", closed);
        }
        Ok(())
    })
}

fn rule_instance(rule: DerivedRule, a: &Formula, b: &Formula, c: &Formula) -> (Vec<Formula>, Formula) {
    let i = |x: &Formula, y: &Formula| imp(x.clone(), y.clone());
    let n = |x: &Formula| negate(x.clone());
    match rule {
        DerivedRule::Imp0 => (vec![], i(a, a)),
        DerivedRule::ChIn => (vec![i(a, b), i(b, c)], i(a, c)),
        DerivedRule::ChIn2 => (vec![i(a, &i(b, c)), b.clone()], i(a, c)),
        DerivedRule::ChInFla2 => (vec![], i(&i(b, c), &i(&i(a, b), &i(a, c)))),
        DerivedRule::IntAnt => (vec![i(a, &i(b, c))], i(b, &i(a, c))),
        DerivedRule::IntAntFla => (vec![], i(&i(a, &i(b, c)), &i(b, &i(a, c)))),
        DerivedRule::Contrap => (vec![i(a, b)], i(&n(b), &n(a))),
        DerivedRule::ContrapFla => (vec![], i(&i(a, b), &i(&n(b), &n(a)))),
        DerivedRule::Mtp1 => (vec![or(a.clone(), b.clone()), n(a)], b.clone()),
        DerivedRule::Mtp2 => (vec![or(a.clone(), b.clone())], i(&n(a), b)),
    }
}

pub fn derived_rule_expansions_verify(cases: u32) -> Result<(), String> {
    let rules = prop::sample::select(DerivedRule::ALL.to_vec());
    run(cases, (rules, arb_formula(), arb_formula(), arb_formula()), |(rule, a, b, c)| {
        let (premises, concl) = rule_instance(rule, &a, &b, &c);
        let lines = expand_derived(rule, &premises, &concl).map_err(|e| TestCaseError::fail(e.to_string()))?;
        verify_expansion(&lines, &premises, Mode::Open).map_err(|(i, e)| TestCaseError::fail(format!("{rule} line {i}: {e}")))?;
        prop_assert_eq!(&lines.last().unwrap().formula, &concl);
        let rewrites = lines.iter().filter(|l| l.is_rewrite()).count();
        prop_assert_eq!(lines.len() - rewrites, rule.primitive_len(), "{}", rule);
        prop_assert_eq!(rewrites, rule.rewrite_len(), "{}", rule);
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// Kleene extension

/// Subscripts with materializable values: plain numbers (mostly not formula
/// codes) and the codes of small closed atoms.
fn arb_subscript() -> impl Strategy<Value = BigUint> {
    let atom_code = (arb_pred(), 0u64..2, 0u64..2).prop_map(|(p, a, b)| {
        encode_formula(&atom(p, num(a), num(b))).unwrap().materialize(10_000).expect("small atom code")
    });
    prop_oneof![(0u64..1_000_000).prop_map(BigUint::from), atom_code]
}

fn denoted(n: &BigUint) -> Formula {
    match decode_formula(&Code::from_big(n.clone())) {
        Ok(f) if f.is_closed() => f,
        _ => falsum(),
    }
}

pub fn true_antecedent_substantiates(cases: u32) -> Result<(), String> {
    let table = AxiomTable::full();
    run(cases, arb_subscript(), |n| {
        let r = Termoid::Num(n.clone());
        let e = imp(eq(r.clone(), r.clone()), imp(kleene(r.clone()), kleene(r)));
        let s = substantiate(&e, &table, 10_000).map_err(|err| TestCaseError::fail(err.to_string()))?;
        let x = denoted(&n);
        prop_assert_eq!(s.formula.as_imp().map(|(_, c)| c.clone()), Some(imp(x.clone(), x)));
        prop_assert!(s.premises.is_empty());
        verify_expansion(&s.lines, &s.premises, Mode::Closed).map_err(|(i, e)| TestCaseError::fail(format!("line {i}: {e}")))?;
        prop_assert_eq!(&s.lines.last().unwrap().formula, &s.formula);
        Ok(())
    })
}

pub fn false_antecedent_substantiates(cases: u32) -> Result<(), String> {
    let table = AxiomTable::full();
    run(cases, (arb_subscript(), arb_subscript()), |(a, b)| {
        prop_assume!(a != b);
        let (ra, rb) = (Termoid::Num(a), Termoid::Num(b));
        let h = eq(ra.clone(), rb.clone());
        let e = imp(h.clone(), imp(kleene(ra), kleene(rb)));
        let s = substantiate(&e, &table, 10_000).map_err(|err| TestCaseError::fail(err.to_string()))?;
        prop_assert_eq!(s.premises.clone(), vec![negate(h)]);
        prop_assert!(matches!(s.lines[0].just, ExpJust::Axiom(SchemaId::Imp3)));
        verify_expansion(&s.lines, &s.premises, Mode::Closed).map_err(|(i, e)| TestCaseError::fail(format!("line {i}: {e}")))?;
        prop_assert_eq!(&s.lines.last().unwrap().formula, &s.formula);
        Ok(())
    })
}

fn arb_translatable() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        arb_closed_atom(),
        arb_subscript().prop_map(|n| kleene(Termoid::Num(n))),
    ];
    formula_over(leaf.boxed())
}

pub fn translation_commutes(cases: u32) -> Result<(), String> {
    let table = AxiomTable::full();
    run(cases, (arb_translatable(), arb_translatable(), arb_var()), |(a, b, v)| {
        let val = Valuation::new();
        let tr = |f: &Formula| translate(f, &val, &table, 10_000).map_err(|e| TestCaseError::fail(e.to_string()));
        let (ta, tb) = (tr(&a)?, tr(&b)?);
        prop_assert!(!ta.has_kleene());
        prop_assert_eq!(tr(&imp(a.clone(), b.clone()))?, imp(ta.clone(), tb.clone()));
        prop_assert_eq!(tr(&and(a.clone(), b.clone()))?, and(ta.clone(), tb.clone()));
        prop_assert_eq!(tr(&or(a.clone(), b.clone()))?, or(ta.clone(), tb));
        prop_assert_eq!(tr(&forall(v, a.clone()))?, forall(v, ta.clone()));
        prop_assert_eq!(tr(&exists(v, a.clone()))?, exists(v, ta.clone()));
        if !a.has_kleene() {
            prop_assert_eq!(ta, a);
        }
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// script checker

fn corpus_reports() -> &'static Vec<(Script, AuditReport)> {
    static REPORTS: OnceLock<Vec<(Script, AuditReport)>> = OnceLock::new();
    REPORTS.get_or_init(|| {
        corpus::names()
            .into_iter()
            .map(|n| {
                let s = corpus::load_corpus(n).unwrap();
                let r = check_script(&s, &CheckOptions::default());
                (s, r)
            })
            .collect()
    })
}

pub fn checker_is_deterministic(cases: u32) -> Result<(), String> {
    let count = corpus::names().len();
    run(cases, 0..count, |i| {
        let (s, r) = &corpus_reports()[i];
        prop_assert_eq!(check_script(s, &CheckOptions::default()).to_json(), r.to_json());
        Ok(())
    })
}

pub fn prefix_verdicts_are_stable(cases: u32) -> Result<(), String> {
    let count = corpus::names().len();
    run(cases, (0..count, 0.0f64..1.0), |(i, frac)| {
        let (s, full) = &corpus_reports()[i];
        let k = 1 + ((s.lines.len() - 1) as f64 * frac) as usize;
        let mut t = s.clone();
        t.lines.truncate(k);
        t.qed = t.lines[k - 1].label.key();
        t.discharges.clear();
        let r = check_script(&t, &CheckOptions::default());
        prop_assert_eq!(&r.verdicts[..], &full.verdicts[..k], "{} truncated to {}", s.name, k);
        Ok(())
    })
}

fn imp0_script(width: u32, annotated: bool, a: &Formula) -> String {
    let note = if annotated { " # width" } else { "" };
    format!(
        "script gen\nlogic closed\nsystem Ari\n1-{width}. imp({a}, {a}) :: imp0{note}\nqed {width}\n"
    )
}

pub fn range_width_law(cases: u32) -> Result<(), String> {
    run(cases, (2u32..10, any::<bool>(), arb_closed_atom()), |(w, annotated, a)| {
        let s = parse_script(&imp0_script(w, annotated, &a)).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let r = check_script(&s, &CheckOptions::default());
        let should_fail = w as usize != DerivedRule::Imp0.primitive_len() && !annotated;
        prop_assert_eq!(r.stats.failed == 1, should_fail);
        prop_assert_eq!(r.is_proof(), !should_fail);
        Ok(())
    })
}

fn small_script(declare: bool, used: bool, discharged: bool, broken: bool, a: &Formula, b: &Formula) -> String {
    let mut s = String::from("script gen\nlogic closed\nsystem Ari\n");
    if declare {
        s += &format!("hyp h: {a}\n");
    }
    s += &format!("1. imp({a}, imp({b}, {a})) :: Imp1\n");
    if declare && used {
        s += &format!("2. {a} :: Hyp h\n3. imp({b}, {a}) :: MP 2 1\n");
    } else {
        s += "2. eq(num(4), num(4)) :: Ref\n3. imp(eq(num(4), num(4)), eq(num(4), num(4))) :: imp0\n";
    }
    let last = if broken {
        s += &format!("4. imp({b}, {b}) :: Imp1\n");
        4
    } else {
        3
    };
    if declare && discharged {
        s += "discharge h\n";
    }
    s += &format!("qed {last}\n");
    s
}

pub fn classification_dichotomy(cases: u32) -> Result<(), String> {
    let flags = (any::<bool>(), any::<bool>(), any::<bool>(), any::<bool>());
    run(cases, (flags, arb_closed_atom(), arb_closed_atom()), |((declare, used, discharged, broken), a, b)| {
        let text = small_script(declare, used, discharged, broken, &a, &b);
        let s = parse_script(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        let r = check_script(&s, &CheckOptions::default());
        prop_assert_eq!(r.is_proof(), r.failed().is_empty() && r.undischarged().is_empty());
        let open = declare && used && !discharged;
        prop_assert_eq!(r.is_proof(), !broken && !open, "{}", text);
        prop_assert_eq!(r.failed().len(), broken as usize);
        Ok(())
    })
}
