//! One pass/fail line per acceptance criterion. Run with
//! `cargo test --release --test acceptance -- --nocapture` to see the table.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_traits::Zero;
use zetacert::certificates::{
    arithmetic_growth, check_resummation, criterion_report, growth_report, lambda,
    linear_form_via_volkenborn, phi_factorization, predicted_valuation, sample_points,
    valuation_certificate, verify_integrality, IntegralityReport,
};
use zetacert::constants::{constants_table, minimal_s, table1};
use zetacert::exact::rat;
use zetacert::forms::{admissible_index, construction_constants, make_params, partial_fractions, FormTable};
use zetacert::kernel::verify_kernel;
use zetacert::zeta::zeta_p;
use zetacert::Error;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Runs a criterion, printing its line. Timing is part of the verdict
/// only where a budget is given.
fn criterion(name: &str, budget: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    if let Some(b) = budget {
        if took > b {
            o.pass = false;
            o.detail.push_str(&format!("; over budget {:.0?}", b));
        }
    }
    println!(
        "{:<4} {:<42} {:>9.2?}  {}",
        if o.pass { "PASS" } else { "FAIL" },
        name,
        took,
        o.detail
    );
    o.pass
}

fn table() -> &'static FormTable {
    static T: OnceLock<FormTable> = OnceLock::new();
    T.get_or_init(|| partial_fractions(&make_params(5, 1, 124, true).unwrap()).unwrap())
}

fn construction_suite(t: &FormTable) -> (Outcome, Option<IntegralityReport>) {
    if !t.rho[1].is_zero() {
        return (outcome(false, "rho_1 is nonzero"), None);
    }
    let resum = match check_resummation(t, &sample_points(2024, 5)) {
        Ok(c) => c,
        Err(e) => return (outcome(false, e.to_string()), None),
    };
    if !resum.pass {
        return (outcome(false, resum.detail), None);
    }
    let rep = phi_factorization(5, t.params.n).and_then(|phi| verify_integrality(t, &phi));
    match rep {
        Ok(rep) => {
            let failed: Vec<_> = rep.checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
            let o = if failed.is_empty() {
                outcome(true, format!("rho_1 = 0, resummation at 5 points, {} integrality checks", rep.checks.len()))
            } else {
                outcome(false, format!("failed: {}", failed.join(", ")))
            };
            (o, Some(rep))
        }
        Err(e) => (outcome(false, e.to_string()), None),
    }
}

fn table_of_cp() -> Outcome {
    match table1() {
        Ok(rows) => {
            let bad: Vec<_> = rows.iter().filter(|r| !r.matches).map(|r| r.p.to_string()).collect();
            outcome(bad.is_empty() && rows.len() == 7, format!("{} rows, mismatched primes: [{}]", rows.len(), bad.join(",")))
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn constant_bounds() -> Outcome {
    let small = match constants_table(499) {
        Ok(t) => t,
        Err(e) => return outcome(false, e.to_string()),
    };
    let large = match constants_table(9973) {
        Ok(t) => t,
        Err(e) => return outcome(false, e.to_string()),
    };
    let bad_bounds: Vec<_> = small.iter().filter(|r| !r.bounds_ok).map(|r| r.p).collect();
    let bad_threshold: Vec<_> = large.iter().filter(|r| !r.odd_threshold_ok).map(|r| r.p).collect();
    outcome(
        bad_bounds.is_empty() && bad_threshold.is_empty(),
        format!(
            "varpi bounds for {} primes, odd-threshold bound for {} primes, failures {:?} {:?}",
            small.len(),
            large.len(),
            bad_bounds,
            bad_threshold
        ),
    )
}

fn kernel_identities() -> Outcome {
    match verify_kernel(1) {
        Ok(rep) => {
            let failed: Vec<_> = rep.rows.iter().filter(|r| !r.pass()).map(|r| r.name.clone()).collect();
            let cases: usize = rep.rows.iter().map(|r| r.cases).sum();
            outcome(failed.is_empty(), format!("{} families, {} cases, failed [{}]", rep.rows.len(), cases, failed.join(",")))
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn valuation_certificate_n124() -> Outcome {
    let cert = match valuation_certificate(5, 1, 3, 660) {
        Ok(c) => c,
        Err(e) => return outcome(false, e.to_string()),
    };
    let dominated = cert.checks.iter().any(|c| c.name == "functional_terms_dominated" && c.pass);
    // agreement is checked at full precision, which implies agreement mod 5^50
    let ok = cert.passed()
        && cert.predicted_valuation == 649
        && cert.computed_valuation == Some(649)
        && cert.path_agreement
        && dominated;
    let (_, m0) = construction_constants(5, 1).unwrap();
    let deep = admissible_index(5, 1, 4).ok().flatten();
    let deep_pred = deep.map(|ix| predicted_valuation(5, 1, ix.n, m0, 4));
    let deep_ok = deep.map(|ix| ix.n) == Some(524) && deep_pred == Some(3148);
    outcome(
        ok && deep_ok,
        format!(
            "v_5(S_124) = {:?}, predicted {}, paths agree {}, dominance {}; N = 4 gives n = {:?}, predicted {:?}",
            cert.computed_valuation,
            cert.predicted_valuation,
            cert.path_agreement,
            dominated,
            deep.map(|ix| ix.n),
            deep_pred
        ),
    )
}

fn even_zeta_vanishing() -> Outcome {
    let m = 30;
    let mut parts = Vec::new();
    let mut ok = true;
    for (p, i) in [(5u64, 2i64), (5, 4), (7, 2)] {
        match zeta_p(p, i, m) {
            Ok(z) => {
                let known = z.precision();
                let v = if z.is_zero() { known } else { z.valuation().unwrap_or(known) };
                let good = known >= m - 2 && v >= m - 2;
                ok &= good;
                parts.push(format!("zeta_{p}({i}) = 0 mod {p}^{v}"));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("zeta_{p}({i}): {e}"));
            }
        }
    }
    outcome(ok, parts.join(", "))
}

fn growth_suite() -> Outcome {
    let arith = match arithmetic_growth(5, 10_000) {
        Ok(a) => a,
        Err(e) => return outcome(false, e.to_string()),
    };
    let rows = match growth_report(5, 1, &[121, 130, 140]) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let rho_ok = rows.iter().all(|r| r.within_slack);
    let rho: Vec<_> = rows.iter().map(|r| format!("n={}: {:.3}", r.n, r.log_max_rho_per_n)).collect();
    outcome(
        arith.lcm_in_range && arith.phi_within_slack && rho_ok,
        format!(
            "ln d_n/n = {:.5} ({}), ln Phi_n/n = {:.5} vs varpi {:.5} ({}), ln max|rho|/n [{}] vs {:.3} + {} ({})",
            arith.log_lcm_per_n,
            verdict(arith.lcm_in_range),
            arith.log_phi_per_n,
            arith.varpi,
            verdict(arith.phi_within_slack),
            rho.join(", "),
            rows[0].reference,
            zetacert::certificates::GROWTH_SLACK,
            verdict(rho_ok)
        ),
    )
}

fn verdict(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "exceeded"
    }
}

fn criterion_exponent() -> Outcome {
    let at10 = lambda(5, 10).map(|l| l.is_negative());
    let at9 = lambda(5, 9).map(|l| l.is_negative());
    let sign_ok = matches!((at10, at9), (Ok(true), Ok(false)));
    let mut bad = Vec::new();
    let mut count = 0;
    for p in zetacert::exact::sieve_primes(199).into_iter().filter(|&p| p >= 5) {
        count += 1;
        let agrees = minimal_s(p)
            .and_then(|s| criterion_report(p, s as u64))
            .map(|r| r.s_is_minimal && r.formula_agrees)
            .unwrap_or(false);
        if !agrees {
            bad.push(p);
        }
    }
    outcome(
        sign_ok && bad.is_empty(),
        format!("lambda(5,10) < 0 <= lambda(5,9): {sign_ok}; minimal s agrees for {count} primes, failures {bad:?}"),
    )
}

fn negative_controls() -> Outcome {
    let mut t = table().clone();
    t.r[2][16] += rat(1, 17);
    let (o, _) = construction_suite(&t);
    let corrupted_caught = !o.pass;
    let truncated = linear_form_via_volkenborn(table(), 660, Some(60));
    let shortfall = matches!(truncated, Err(Error::PrecisionShortfall { .. }));
    outcome(
        corrupted_caught && shortfall,
        format!("corrupted r_(3,17) rejected: {corrupted_caught} ({}); truncated series gives precision shortfall: {shortfall}", o.detail),
    )
}

#[test]
fn acceptance() {
    let mins = |m: u64| Some(Duration::from_secs(60 * m));
    let secs = |s: u64| Some(Duration::from_secs(s));
    // budgets are for release builds; debug builds only report timing
    let release = !cfg!(debug_assertions);
    let b = |d: Option<Duration>| d.filter(|_| release);

    let results = [
        criterion("1 table of c_p", b(secs(5)), table_of_cp),
        criterion("2 constant bounds", b(secs(30)), constant_bounds),
        criterion("3 kernel identities", b(secs(30)), kernel_identities),
        criterion("4 construction at (5,1,124)", b(mins(10)), || construction_suite(table()).0),
        criterion("5 valuation certificate (5,1,3)", b(mins(30)), valuation_certificate_n124),
        criterion("6 even zeta vanishing", b(secs(60)), even_zeta_vanishing),
        criterion("7 growth", b(secs(120)), growth_suite),
        criterion("8 criterion exponent", b(secs(5)), criterion_exponent),
        criterion("9 negative controls", None, negative_controls),
    ];
    let failed = results.iter().filter(|&&r| !r).count();
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
