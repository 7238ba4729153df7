//! End-to-end checks of the construction at (p, s, n) = (5, 1, 124).

use std::sync::OnceLock;

use num_traits::Zero;
use zetacert::certificates::{
    check_resummation, growth_report, linear_form_via_volkenborn, linear_form_via_zeta,
    phi_factorization, sample_points, valuation_certificate, verify_integrality,
};
use zetacert::error::Error;
use zetacert::exact::rat;
use zetacert::forms::{make_params, partial_fractions, FormTable};

fn table() -> &'static FormTable {
    static T: OnceLock<FormTable> = OnceLock::new();
    T.get_or_init(|| partial_fractions(&make_params(5, 1, 124, true).unwrap()).unwrap())
}

#[test]
fn rho1_vanishes_and_resummation_is_exact() {
    let t = table();
    assert!(t.rho[1].is_zero());
    let check = check_resummation(t, &sample_points(2024, 5)).unwrap();
    assert!(check.pass, "{}", check.detail);
}

#[test]
fn all_integrality_checks_pass() {
    let t = table();
    let phi = phi_factorization(5, 124).unwrap();
    let rep = verify_integrality(t, &phi).unwrap();
    assert!(rep.passed(), "{:#?}", rep.checks);
    assert_eq!(rep.checks[0].detail, "620 values integral");
}

#[test]
fn corrupted_residue_is_reported() {
    let mut t = table().clone();
    t.r[2][16] += rat(1, 17);
    t.rho[3] += rat(1, 17);
    let phi = phi_factorization(5, 124).unwrap();
    let rep = verify_integrality(&t, &phi).unwrap();
    assert!(!rep.passed());
    assert!(rep.violations.iter().any(|v| v.quantity == "r_{3,17}" && !v.deficits.is_empty()));

    // top order carries no power of d_n, so 17 itself is left over
    let mut t = table().clone();
    t.r[4][16] += rat(1, 17);
    let rep = verify_integrality(&t, &phi).unwrap();
    let v = rep
        .violations
        .iter()
        .find(|v| v.check == "lcm_scaled_residues_integral" && v.quantity == "r_{5,17}")
        .unwrap();
    assert_eq!(v.deficits[0].prime, 17);
}

#[test]
fn certificate_for_n_124() {
    let cert = valuation_certificate(5, 1, 3, 660).unwrap();
    for c in &cert.checks {
        println!("{} {} {}", c.name, c.pass, c.detail);
    }
    assert_eq!(cert.predicted_valuation, 649);
    assert_eq!(cert.computed_valuation, Some(649));
    assert!(cert.path_agreement);
    assert!(cert.passed());
}

#[test]
fn even_terms_change_nothing() {
    let t = table();
    let m = 120;
    let odd = linear_form_via_zeta(t, m, false).unwrap();
    let all = linear_form_via_zeta(t, m, true).unwrap();
    assert!(odd.agreement(&all) >= m - 2);
}

#[test]
fn truncated_series_is_refused() {
    let r = linear_form_via_volkenborn(table(), 660, Some(60));
    assert!(matches!(r, Err(Error::PrecisionShortfall { .. })));
}

#[test]
fn growth_rows_measure_rho() {
    let rows = growth_report(5, 1, &[121]).unwrap();
    assert!(rows[0].explicit_bound_holds);
    assert!(rows[0].log_max_rho_per_n.is_finite());
}
