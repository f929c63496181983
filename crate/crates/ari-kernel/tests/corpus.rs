//! Regression checks of the bundled scripts against their golden reports.

use ari_kernel::calculus::DerivedRule;
use ari_kernel::corpus::{golden, load_corpus, names};
use ari_kernel::script::{audit, check_script, CheckOptions, Justification, Label, LinkTarget};
use ari_kernel::syntax::con_ari;

#[test]
fn reports_match_golden() {
    for name in names() {
        let s = load_corpus(name).unwrap();
        let report = check_script(&s, &CheckOptions::default()).to_json();
        assert_eq!(report, golden(name).unwrap().trim_end(), "{name} drifted from its golden report");
    }
}

#[test]
fn ranges_have_rule_width_unless_flagged() {
    for name in names() {
        let s = load_corpus(name).unwrap();
        let r = check_script(&s, &CheckOptions::default());
        for (line, verdict) in s.lines.iter().zip(&r.verdicts) {
            let (Label::Range(a, b), Justification::Derived(rule, _)) = (&line.label, &line.just) else { continue };
            let width = (b - a + 1) as usize;
            assert_eq!(width != rule.primitive_len(), line.width_anomaly, "{name} {}", line.label);
            assert!(!verdict.verdict.is_failed(), "{name} {}", line.label);
        }
    }
}

#[test]
fn every_script_but_main_is_a_proof() {
    for name in names() {
        let r = check_script(&load_corpus(name).unwrap(), &CheckOptions::default());
        assert_eq!(r.stats.failed, 0, "{}", r.summary());
        assert_eq!(r.is_proof(), name != "main", "{}", r.summary());
    }
}

#[test]
fn unlinked_main_depends_on_two_hypotheses() {
    let r = check_script(&load_corpus("main").unwrap(), &CheckOptions::default());
    assert_eq!(r.undischarged(), vec!["T-Ax", "mp-ind"]);
    assert_eq!(r.final_formula, Some(con_ari().to_string()));
    assert_eq!(r.stats.reconstructed, 1);
}

#[test]
fn linking_one_hypothesis_leaves_a_deduction() {
    let main = load_corpus("main").unwrap();
    let c = load_corpus("appendixC").unwrap();
    let r = audit(&main, &[(LinkTarget::parse("mp-ind"), &c)], &CheckOptions::default());
    assert!(!r.is_proof());
    assert_eq!(r.undischarged(), vec!["T-Ax"]);
}

#[test]
fn derived_rule_names_round_trip() {
    for rule in DerivedRule::ALL {
        assert_eq!(DerivedRule::from_name(rule.name()), Some(rule));
        assert!(names().contains(&rule.name()), "{rule} has a corpus script");
    }
}
