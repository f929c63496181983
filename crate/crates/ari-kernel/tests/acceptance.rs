//! Acceptance harness: one PASS/FAIL line per criterion, nonzero exit when
//! any criterion fails.

mod common;

use ari_kernel::arith::{falsum_code, AxiomTable, Ell1, MicroSystem};
use ari_kernel::code::Code;
use ari_kernel::corpus::{self, load_corpus};
use ari_kernel::encode::encode_formula;
use ari_kernel::script::{audit, check_script, AuditReport, CheckOptions, LinkTarget};
use ari_kernel::syntax::{con_ari, falsum, vf_value};
use num_bigint::BigUint;
use rayon::prelude::*;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(t)
}

fn checked(name: &str) -> Result<AuditReport, String> {
    let s = load_corpus(name).map_err(|e| e.to_string())?;
    Ok(check_script(&s, &CheckOptions::default()))
}

fn falsum_value() -> Outcome {
    let start = Instant::now();
    let direct = BigUint::from(2u32).pow(15) * BigUint::from(3u32).pow(23) * BigUint::from(5u32).pow(529);
    let code = encode_formula(&falsum()).map_err(|e| e.to_string())?;
    let m = code.materialize(10_000).map_err(|e| format!("{e:?}"))?;
    ensure(m == direct, "materialized code differs from 2^15 3^23 5^529")?;
    ensure(*vf_value() == direct, "the falsum constant differs from 2^15 3^23 5^529")?;
    let t = within(start, Duration::from_secs(1))?;
    ensure(falsum_code().code_eq(&Code::from_big(direct.clone())), "symbolic and literal codes differ")?;
    Ok(format!("{} digits in {t:.2?}", direct.to_string().len()))
}

fn property(name: &str, cases: u32) -> Result<(), String> {
    let (_, _, body) = common::PROPERTIES.iter().find(|p| p.0 == name).ok_or(format!("no property {name}"))?;
    body(cases).map_err(|e| format!("{name}: {e}"))
}

fn root_correlation() -> Outcome {
    property("root_correlation", 1000)?;
    Ok("1000 trees of depth <= 6".into())
}

fn mp_identities() -> Outcome {
    property("mp_code_identities", 1000)?;
    property("implication_major_exponents", 1000)?;
    property("mp_dichotomy", 1000)?;
    Ok("1000 pairs each".into())
}

fn v(mut n: u64, p: u64) -> u64 {
    let mut k = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        k += 1;
    }
    k
}

fn pow_u64(b: u64, e: u64) -> Option<u64> {
    b.checked_pow(u32::try_from(e).ok()?)
}

/// Direct proof predicate for a micro-system on machine integers; axioms
/// whose codes overflow can only be roots of leaves beyond the range.
fn oracle_is_proof(n: u64, axioms: &[u64]) -> bool {
    if n == 0 {
        return false;
    }
    let root = v(n, 2);
    if pow_u64(2, root) == Some(n) && axioms.contains(&root) {
        return true;
    }
    let (a, b) = (v(n, 3), v(n, 5));
    let broot = v(b, 2);
    let fits = a != 0 && v(broot, 2) == 3 && v(broot, 3) == v(a, 2);
    let mp = || Some(pow_u64(2, v(broot, 5))?.checked_mul(pow_u64(3, a)?)?.checked_mul(pow_u64(5, b)?)?);
    fits && mp() == Some(n) && oracle_is_proof(a, axioms) && oracle_is_proof(b, axioms)
}

fn micro_oracle() -> Outcome {
    let start = Instant::now();
    let limit = 1_000_000u64;
    let mut found = Vec::new();
    for m in [corpus::micro_a(), corpus::micro_b()] {
        let axioms: Vec<u64> = m.axioms.iter().filter_map(Code::as_small).collect();
        let table = AxiomTable::Micro(m.clone());
        let disagreements: Vec<u64> = (0..=limit)
            .into_par_iter()
            .filter(|&n| Ell1::new(&table).is_proof(&Code::from_u64(n)) != oracle_is_proof(n, &axioms))
            .collect();
        ensure(disagreements.is_empty(), format!("system {}: disagree at {:?}", m.name, &disagreements[..5.min(disagreements.len())]))?;
        let proofs: Vec<u64> = (0..=limit).into_par_iter().filter(|&n| oracle_is_proof(n, &axioms)).collect();
        found.push(format!("{}: {:?}", m.name, proofs));
    }
    // the smallest MP proof in either system needs exponents far past the range
    let (p, q) = corpus::micro_atoms();
    ensure(MicroSystem::imp(&p, &q).as_small() == Some(9000), "implication code of the atoms")?;
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!("proofs in range {}; {t:.2?}", found.join(", ")))
}

const DERIVED: [(&str, usize, usize); 10] = [
    ("imp0", 5, 0),
    ("chin", 5, 0),
    ("chin2", 5, 0),
    ("chinfla2", 7, 0),
    ("intant", 8, 0),
    ("intant2", 19, 0),
    ("mtp2", 20, 1),
    ("mtp1", 17, 1),
    ("contrap1", 12, 2),
    ("contrap2", 15, 2),
];

fn derived_scripts() -> Outcome {
    for (name, prim, rw) in DERIVED {
        let r = checked(name)?;
        ensure(r.is_proof(), format!("{name} is {}", r.classification.name()))?;
        ensure(
            r.stats.expanded_lines == prim && r.stats.rewrite_lines == rw,
            format!("{name}: {}+{} lines, expected {prim}+{rw}", r.stats.expanded_lines, r.stats.rewrite_lines),
        )?;
    }
    Ok("10 scripts".into())
}

fn induction_script() -> Outcome {
    let r = checked("appendixC")?;
    let events: Vec<&str> = r.stats.events.iter().map(|e| e.split(" at ").next().unwrap_or("")).collect();
    let want = ["discharge c", "discharge d", "gen x1", "discharge b", "discharge a"];
    ensure(events == want, format!("events {events:?}"))?;
    ensure(r.stats.failed == 0 && r.is_proof(), r.summary())?;
    let main = load_corpus("main").map_err(|e| e.to_string())?;
    let target = main.hyp("mp-ind").ok_or("main has no mp-ind hypothesis")?.formula.to_string();
    ensure(r.final_formula.as_deref() == Some(target.as_str()), "final formula is not the induction principle")?;
    Ok(r.summary())
}

fn declared(r: &AuditReport) -> BTreeSet<&str> {
    r.axioms.iter().map(|a| a.name.as_str()).filter(|n| !n.contains('(')).collect()
}

fn lemma_scripts() -> Outcome {
    let d1 = checked("appendixD1")?;
    ensure(d1.is_proof(), d1.summary())?;
    ensure(d1.stats.expanded_lines == 61, format!("D1 has {} primitive lines", d1.stats.expanded_lines))?;
    ensure(declared(&d1) == BTreeSet::from(["Lemma1", "Lemma2*"]), format!("D1 modulo {:?}", declared(&d1)))?;
    let d2 = checked("appendixD2")?;
    ensure(d2.is_proof(), d2.summary())?;
    let ints: BTreeSet<u32> = d2
        .verdicts
        .iter()
        .filter_map(|l| {
            let digits: String = l.label.chars().take_while(char::is_ascii_digit).collect();
            digits.parse().ok()
        })
        .collect();
    ensure(ints.len() == 125, format!("D2 has {} integer labels", ints.len()))?;
    ensure(declared(&d2) == BTreeSet::from(["Lemma1", "Lemma2"]), format!("D2 modulo {:?}", declared(&d2)))?;
    Ok(format!("D1 61 lines, D2 {} labels", ints.len()))
}

pub const CHIN_CONCLUSIONS: [u32; 66] = [
    7, 15, 21, 27, 33, 41, 51, 57, 70, 90, 118, 127, 132, 138, 152, 158, 177, 183, 196, 216, 236, 261, 267, 273, 281,
    287, 327, 347, 355, 361, 367, 376, 384, 390, 401, 406, 413, 419, 426, 432, 437, 450, 455, 468, 473, 479, 485, 491,
    507, 512, 518, 524, 530, 539, 548, 570, 585, 606, 630, 641, 646, 652, 658, 667, 673, 679,
];

fn main_audit() -> Outcome {
    let main = load_corpus("main").map_err(|e| e.to_string())?;
    let c = load_corpus("appendixC").map_err(|e| e.to_string())?;
    let d2 = load_corpus("appendixD2").map_err(|e| e.to_string())?;
    let links = [(LinkTarget::parse("mp-ind"), &c), (LinkTarget::parse("line7"), &d2)];
    let r = audit(&main, &links, &CheckOptions::default());
    ensure(r.final_formula == Some(con_ari().to_string()), format!("final {:?}", r.final_formula))?;
    ensure(r.stats.failed == 0, format!("{} failed lines", r.stats.failed))?;
    let tax = r.hypotheses.iter().find(|h| h.name == "T-Ax").ok_or("no T-Ax entry")?;
    ensure(tax.status == "bypassed", format!("T-Ax is {}", tax.status))?;
    let axiom = |n: &str| r.axioms.iter().find(|a| a.name == n);
    ensure(axiom("M-omega").is_some(), "M-omega missing from the ledger")?;
    ensure(r.axioms.iter().any(|a| a.name.starts_with("ElemAx(")), "no elementary axioms in the ledger")?;
    for lemma in ["Lemma1", "Lemma2"] {
        let a = axiom(lemma).ok_or(format!("{lemma} missing"))?;
        ensure(a.origin.contains("appendixD2") || a.used_at.iter().any(|u| u.starts_with("appendixD2")), format!("{lemma} not attributed to the linked lemma script"))?;
    }
    ensure(r.obligations.iter().any(|o| o.kind == "Feasibility"), "no feasibility obligations")?;
    ensure(
        r.obligations.iter().any(|o| o.kind == "ValueInRange" && o.note == "omega = nu(omega)"),
        "no value-in-range obligation for omega",
    )?;
    let want: Vec<String> = CHIN_CONCLUSIONS.iter().map(u32::to_string).collect();
    ensure(r.stats.chin_conclusions == want, format!("chain conclusions {:?}", r.stats.chin_conclusions))?;
    Ok(format!("{}; {} chain conclusions", r.summary(), want.len()))
}

fn too_large() -> Outcome {
    let big = Code::prime_power(0, falsum_code());
    match big.materialize(10_000) {
        Ok(_) => Err("materialized a value with more than 10^300 digits".into()),
        Err(e) => {
            let bound = BigUint::from(10u32).pow(300);
            ensure(e.digits_lower_bound >= bound, format!("digit bound {} too small", e.digits_lower_bound))?;
            Ok(format!("digit bound has {} digits", e.digits_lower_bound.to_string().len()))
        }
    }
}

fn property_budget() -> Outcome {
    let start = Instant::now();
    let mut total = 0u64;
    for (name, cases, body) in common::PROPERTIES {
        body(*cases).map_err(|e| format!("{name}: {e}"))?;
        total += *cases as u64;
    }
    ensure(total >= 10_000, format!("only {total} cases"))?;
    let t = within(start, Duration::from_secs(300))?;
    Ok(format!("{total} cases over {} properties in {t:.2?}", common::PROPERTIES.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("falsum code materializes", falsum_value),
        ("root correlation", root_correlation),
        ("modus ponens code identities", mp_identities),
        ("micro-system proof oracle", micro_oracle),
        ("derived-rule scripts", derived_scripts),
        ("induction script", induction_script),
        ("lemma scripts", lemma_scripts),
        ("linked audit of the consistency proof", main_audit),
        ("materialization refusal", too_large),
        ("property cases", property_budget),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
