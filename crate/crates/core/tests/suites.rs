use std::collections::BTreeSet;

use hetg2::heisenberg::{exact_solution_end_to_end, oracle_equivalence, LieModel};
use hetg2::report::{list_checks, run_suite, Params, Status, Suite};
use hetg2::scalar::{rat, Scalar};
use proptest::prelude::*;

#[test]
fn every_suite_runs_without_failures() {
    for name in ["3ad", "su3", "spinor", "heisenberg", "bianchi"] {
        let suite: Suite = name.parse().unwrap();
        let r = run_suite(suite, &Params::default());
        assert_eq!(r.summary.fail, 0, "{}", r.to_json());
        assert_eq!(r.summary.pass + r.summary.flagged, r.records.len());
        let ids: Vec<_> = r.records.iter().map(|c| c.check_id.as_str()).collect();
        assert_eq!(ids, list_checks(suite));
        assert!(ids.iter().all(|id| id.starts_with(name)));
    }
}

#[test]
fn all_is_the_concatenation_of_the_parts() {
    let all = list_checks(Suite::All);
    let unique: BTreeSet<_> = all.iter().collect();
    assert_eq!(unique.len(), all.len());
    let parts: Vec<_> = [Suite::ThreeAd, Suite::Su3, Suite::Spinor, Suite::Heisenberg, Suite::Bianchi]
        .into_iter()
        .flat_map(list_checks)
        .collect();
    assert_eq!(all, parts);
}

#[test]
fn flagged_records_carry_notes() {
    let r = run_suite(Suite::All, &Params::default());
    for c in r.records.iter().filter(|c| c.status == Status::Flagged) {
        assert!(!c.notes.is_empty(), "{}", c.check_id);
        assert_ne!(c.lhs, c.rhs, "{}", c.check_id);
    }
}

#[test]
fn lambda_parameter_reaches_the_oracle() {
    let r = run_suite(Suite::Heisenberg, &Params::parse("lambda=-5/7").unwrap());
    let rec = r.records.iter().find(|c| c.check_id == "heisenberg.oracle_equivalence").unwrap();
    assert_eq!(rec.status, Status::Pass);
    assert_eq!(rec.parameters.get("lambda").map(String::as_str), Some("-5/7"));
    assert!(rec.notes.contains("-5/7"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn oracle_holds_for_random_models(an in 1i64..6, ad in 1i64..5, neg in any::<bool>(), ln in -40i64..40, ld in 1i64..9) {
        let alpha = rat(if neg { -an } else { an }, ad);
        let model = LieModel::new(Scalar::from_rational(alpha));
        prop_assert!(oracle_equivalence(&model, &Scalar::from_rational(rat(ln, ld))).unwrap());
    }

    #[test]
    fn exact_solution_only_at_the_tuned_slope(an in 1i64..5, ad in 1i64..4, k in 1i64..30) {
        let alpha = rat(an, ad);
        let tuned = (&alpha * &alpha * rat(12, 1)).recip();
        let model = LieModel::new(Scalar::from_rational(alpha));
        prop_assert!(exact_solution_end_to_end(&model, &tuned).unwrap().holds());
        let off = &tuned * rat(k + 1, k);
        prop_assert!(!exact_solution_end_to_end(&model, &off).unwrap().residual.is_zero());
    }
}
