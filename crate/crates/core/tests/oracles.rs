//! Cross-checks between independent routes.

use hcl::congruences::{
    check_hypothesis, max_bernoulli_index, modular_cross_check, verify, verify_eisenstein,
    verify_lehmer, verify_thm_ee20, CaseSpec, TheoremId, TierMode,
};
use hcl::exact::{int, is_prime};
use hcl::Context;
use proptest::prelude::*;

/// A small admissible parameter assignment for each theorem.
fn sample_cases(p: u64) -> Vec<CaseSpec> {
    let mut out = Vec::new();
    for id in TheoremId::all() {
        let base = CaseSpec::new(id, p);
        let cases: Vec<CaseSpec> = match id.param_names() {
            [] => vec![base],
            ["k", "j_terms"] => (1..=3)
                .flat_map(|k| (1..=4).map(move |j| (k, j)))
                .map(|(k, j)| base.clone().with("k", k).with("j_terms", j))
                .collect(),
            ["k"] => (1..=3).map(|k| base.clone().with("k", k)).collect(),
            ["n", "i"] => (0..=2)
                .flat_map(|n| (0..=2).map(move |i| (n, i)))
                .map(|(n, i)| base.clone().with("n", n).with("i", i))
                .collect(),
            ["i", "k"] => (0..=2)
                .flat_map(|i| (1..=4).map(move |k| (i, k)))
                .map(|(i, k)| base.clone().with("i", i).with("k", k))
                .collect(),
            ["j_terms"] => (1..=4).map(|j| base.clone().with("j_terms", j)).collect(),
            ["n"] => (1..=3).map(|n| base.clone().with("n", n)).collect(),
            ["n", "h"] => (1..=3)
                .flat_map(|n| (1..=1).map(move |h| (n, h)))
                .map(|(n, h)| base.clone().with("n", n).with("h", h))
                .collect(),
            other => panic!("unexpected parameter set {other:?}"),
        };
        out.extend(
            cases
                .into_iter()
                .filter(|c| check_hypothesis(c).is_ok() && max_bernoulli_index(c).unwrap() <= 2500),
        );
    }
    out
}

#[test]
fn modular_route_agrees_for_every_theorem() {
    let ctx = Context::new();
    let mut compared = 0;
    for p in [3u64, 5, 7, 11, 13, 37] {
        for case in sample_cases(p) {
            let v = verify(&case, TierMode::Auto, &ctx).unwrap();
            for e in 1..=4 {
                if let Some((modular, exact)) = modular_cross_check(&v, e, &ctx).unwrap() {
                    assert_eq!(modular, exact, "{case} e={e}");
                    compared += 1;
                }
            }
        }
    }
    assert!(compared > 500, "only {compared} comparisons");
}

#[test]
fn fermat_quotient_series_reduces_to_classical_cases() {
    let ctx = Context::new();
    for p in (3..=97).filter(|&p| is_prime(p)) {
        let n1 = verify_thm_ee20(p, 1, &ctx).unwrap();
        let eis = verify_eisenstein(p, &ctx).unwrap();
        assert_eq!(n1.pass, eis.pass);
        assert_eq!(int(2) * &n1.lhs, eis.lhs);
        let n2 = verify_thm_ee20(p, 2, &ctx).unwrap();
        let leh = verify_lehmer(p, &ctx).unwrap();
        assert_eq!(n2.pass, leh.pass, "p={p}");
        assert!(n2.achieved_valuation.at_least(2) && leh.achieved_valuation.at_least(2));
    }
}

#[test]
fn ladders_pass_below_resolved_tier() {
    let ctx = Context::new();
    for p in (2..=61).filter(|&p| is_prime(p)) {
        for (id, n, i) in [
            (TheoremId::ThmEe10bis, 1, 0),
            (TheoremId::ThmEe10bis, 2, 1),
            (TheoremId::ThmEecj, 1, 1),
            (TheoremId::ThmEecj, 2, 2),
        ] {
            let case = CaseSpec::new(id, p).with("n", n).with("i", i);
            let Ok(v) = verify(&case, TierMode::Auto, &ctx) else {
                continue;
            };
            let tier = v.tier.unwrap();
            assert!(v.pass, "{case}");
            for rung in v.ladder.iter().filter(|t| t.m <= tier) {
                assert!(rung.pass, "{case} m={}", rung.m);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_admissible_cases_agree_modularly(
        p in prop::sample::select(vec![5u64, 7, 11, 13, 17, 19, 23, 29, 31]),
        pick in any::<prop::sample::Index>(),
        e in 1u32..=5,
    ) {
        let ctx = Context::new();
        let cases = sample_cases(p);
        let case = &cases[pick.index(cases.len())];
        let v = verify(case, TierMode::Auto, &ctx).unwrap();
        if let Some((modular, exact)) = modular_cross_check(&v, e, &ctx).unwrap() {
            prop_assert_eq!(modular, exact);
        }
    }
}
