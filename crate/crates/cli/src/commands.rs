use hyperschwarz::checks::{self, Check};
use hyperschwarz::numeric::{cross_check_solution, eval_qseries_with_tail, phase_equivariance_error, ComplexValue};
use hyperschwarz::series::{PuiseuxSeries, Rational};
use hyperschwarz::solver::{expected_schwarz_constant, printed_schwarz_constant, solve};
use hyperschwarz::vvmf::{printed_c1, printed_c2, raised_chain, wronskian_check, ReprData};
use serde_json::{json, Value};

use crate::report::{complex, float, rational, rationals, Report};

fn body(p: &PuiseuxSeries, terms: usize) -> Value {
    rationals(p.body().coeffs().iter().take(terms))
}

fn convention_note(m: u64, n: u64) -> String {
    let verified = expected_schwarz_constant(m, n);
    let printed = printed_schwarz_constant(m, n);
    format!(
        "derivatives are D = q d/dq; the verified constant {verified} is -(1/2)(n/m)^2, and the printed form -2(n/m)^2 = {printed} is {} times it",
        &printed / &verified
    )
}

pub fn solve_report(m: u64, n: u64, terms: usize) -> Report {
    let mut report = Report::new("solve", Some(m), Some(n), terms);
    let bundle = match solve(m, n, terms) {
        Ok(b) => b,
        Err(e) => {
            report.set("error", json!(e.to_string()));
            report.checks.push(Check::new(checks::solve_error_check(&e), false, e.to_string()));
            return report;
        }
    };
    report.set("n_prime", json!(bundle.n_prime));
    report.set("r", json!(bundle.r));
    report.set("offset", rational(bundle.h.offset()));
    report.set("coefficients", body(&bundle.h, terms));
    report.set("schwarz_constant", rational(&bundle.schwarz_constant));
    report.set("ode_parameter", rational(&bundle.ode_parameter));
    report.set("printed_constant", rational(&printed_schwarz_constant(m, n)));
    report.set("convention", json!(convention_note(m, n)));
    let wronskians: Vec<Value> = bundle
        .wronskians
        .iter()
        .map(|w| json!({ "level": w.level, "c": rational(&w.constant), "e": rational(&w.exponent) }))
        .collect();
    report.set("wronskians", Value::Array(wronskians));
    report.checks = checks::bundle_checks(&bundle, terms);
    report
}

pub fn verify_report(m: u64, n: u64, terms: usize) -> Report {
    let mut report = Report::new("verify", Some(m), Some(n), terms);
    report.checks = checks::verify_suite(m, n, terms);
    let passed = report.checks.iter().filter(|c| c.pass).count();
    report.set("passed", json!(passed));
    report.set("total", json!(report.checks.len()));
    report
}

fn component(p: &PuiseuxSeries, terms: usize) -> Value {
    json!({
        "offset": rational(p.offset()),
        "leading": rational(&p.leading_coefficient()),
        "coefficients": body(p, terms),
    })
}

fn comparison(computed: &Rational, printed: &Rational) -> Value {
    json!({ "computed": rational(computed), "printed": rational(printed), "agrees": computed == printed })
}

pub fn vvmf_report(m: u64, n: u64, terms: usize) -> Report {
    let mut report = Report::new("vvmf", Some(m), Some(n), terms);
    let (np, r) = (n % m, (n / m) as u32);
    let chain = match ReprData::new(m, np) {
        Ok(repr) => raised_chain(&repr, r, terms),
        Err(e) => Err(e),
    };
    let chain = match chain {
        Ok(c) => c,
        Err(e) => {
            report.set("error", json!(e.to_string()));
            report.checks.push(Check::new("construction", false, e.to_string()));
            return report;
        }
    };
    let mut levels = Vec::new();
    for form in &chain {
        let mut level = json!({
            "level": form.level,
            "weight": rational(&form.weight),
            "first": component(&form.first, terms),
            "second": component(&form.second, terms),
        });
        let name = format!("wronskian_level_{}", form.level);
        match wronskian_check(form, terms) {
            Ok((c, e)) => {
                level["wronskian"] = json!({ "c": rational(&c), "e": rational(&e) });
                let expected = Rational::from_integer((form.level as i64 + 1).into());
                report.checks.push(Check::new(name, e == expected, format!("W = ({c}) Delta^{e}")));
            }
            Err(e) => report.checks.push(Check::new(name, false, e.to_string())),
        }
        levels.push(level);
    }
    let top = chain.last().expect("F_0 is always built");
    report.set("n_prime", json!(np));
    report.set("r", json!(r));
    report.set("weight", rational(&top.weight));
    if let Some(f1) = chain.get(1) {
        let (c1, c2) = (f1.first.leading_coefficient(), f1.second.leading_coefficient());
        let (p1, p2) = (printed_c1(m, np), printed_c2(m, np));
        report.set("c1", rational(&c1));
        report.set("c2", rational(&c2));
        report.set("c1_comparison", comparison(&c1, &p1));
        report.set("c2_comparison", comparison(&c2, &p2));
        report.checks.push(Check::new("c2_formula", c2 == p2, format!("c2 = {c2}, 12n'/(m + 6n') = {p2}")));
    }
    report.set("levels", Value::Array(levels));
    report
}

pub fn eval_report(m: u64, n: u64, terms: usize, tau: ComplexValue) -> Report {
    let mut report = Report::new("eval", Some(m), Some(n), terms);
    report.set("tau", complex(tau));
    let bundle = match solve(m, n, terms) {
        Ok(b) => b,
        Err(e) => {
            report.checks.push(Check::new(checks::solve_error_check(&e), false, e.to_string()));
            return report;
        }
    };
    match cross_check_solution(&bundle, tau, terms) {
        Ok(r) => {
            report.set("via_series", complex(r.via_series));
            report.set("via_hypergeom", complex(r.via_hypergeom));
            report.set("rel_error", float(r.rel_error));
            report.set("terms_used", json!(r.terms_used));
            report.set("tail_bound", float(r.tail_bound));
            report.checks.push(Check::new(
                "cross_check",
                r.rel_error < checks::CROSS_CHECK_TOLERANCE,
                format!("relative error {:e}, tolerance {:e}", r.rel_error, checks::CROSS_CHECK_TOLERANCE),
            ));
        }
        Err(e) => {
            if let Ok((v, tail)) = eval_qseries_with_tail(&bundle.h, tau, terms) {
                report.set("h", complex(v));
                report.set("terms_used", json!(terms));
                report.set("tail_bound", float(tail));
            }
            report.checks.push(Check::new("cross_check", false, e.to_string()));
        }
    }
    match phase_equivariance_error(&bundle.h, tau, terms) {
        Ok(err) => {
            report.set("phase_error", float(err));
            report.checks.push(Check::new(
                "phase_equivariance",
                err < checks::PHASE_TOLERANCE,
                format!("relative error {err:e}, tolerance {:e}", checks::PHASE_TOLERANCE),
            ));
        }
        Err(e) => report.checks.push(Check::new("phase_equivariance", false, e.to_string())),
    }
    report
}

pub fn selftest_report() -> Report {
    let mut report = Report::new("selftest", None, None, checks::SOLVE_ORDER);
    report.checks = checks::acceptance();
    let passed = report.checks.iter().filter(|c| c.pass).count();
    report.set("passed", json!(passed));
    report.set("total", json!(report.checks.len()));
    report
}
