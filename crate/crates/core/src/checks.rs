//! Named pass/fail checks: the full verification suite for one `(m, n)` and
//! the fixed acceptance grid run by `selftest`.

use std::time::{Duration, Instant};

use num_traits::Zero;

use crate::forms::{delta, eisenstein, euler_product, j_inverse, serre_derivative};
use crate::hypergeometric::Component;
use crate::numeric::{cross_check, cross_check_solution, phase_equivariance_error, ComplexValue};
use crate::series::{int, ratio, PuiseuxSeries, Rational};
use crate::solver::{
    expected_ode_parameter, expected_schwarz_constant, printed_schwarz_constant, schwarz_derivative, solve, solve_with,
    verify_ode, verify_proportionality, PerturbTarget, Perturbation, SolutionBundle, SolveError, SolveOptions,
};
use crate::vvmf::{
    leading_constants, minimal_form, printed_c1, printed_c2, raise_weight, wronskian_check, ReprData, VvmfError,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: detail.into() }
    }
}

pub const IDENTITY_ORDER: usize = 100;
pub const IDENTITY_BUDGET: Duration = Duration::from_secs(10);
pub const SOLVE_ORDER: usize = 40;
pub const SOLVE_BUDGET: Duration = Duration::from_secs(30);
pub const NUMERIC_ORDER: usize = 60;
pub const CROSS_CHECK_TOLERANCE: f64 = 1e-9;
pub const PHASE_TOLERANCE: f64 = 1e-8;

pub const FORM_GRID: [(u64, u64); 7] = [(7, 1), (7, 2), (7, 3), (8, 3), (9, 2), (11, 5), (12, 5)];
pub const SOLVE_GRID: [(u64, u64); 8] = [(7, 1), (7, 2), (7, 6), (8, 3), (9, 2), (7, 9), (7, 16), (11, 13)];
pub const NUMERIC_GRID: [(u64, u64); 3] = [(7, 1), (8, 3), (9, 2)];
pub const PERTURBED_CASES: [(u64, u64); 2] = [(7, 2), (7, 9)];
pub const PERTURBED_INDICES: usize = 5;
pub const MAX_FAILING_INDEX: usize = 5;

pub fn numeric_points() -> [ComplexValue; 3] {
    [ComplexValue::new(0.0, 2.0), ComplexValue::new(0.0, 1.5), ComplexValue::new(0.3, 1.2)]
}

pub fn perturbation_targets() -> [PerturbTarget; 4] {
    [
        PerturbTarget::E4,
        PerturbTarget::Eta24,
        PerturbTarget::Hypergeom(Component::First),
        PerturbTarget::Hypergeom(Component::Second),
    ]
}

/// Short name of the check a solver error belongs to.
pub fn solve_error_check(e: &SolveError) -> &'static str {
    match e {
        SolveError::InvalidParameters { .. } => "parameters",
        SolveError::NotProportional { .. } | SolveError::ConstantMismatch { .. } => "schwarzian_proportional_to_e4",
        SolveError::WronskianExponent { .. } | SolveError::Vvmf(VvmfError::NotProportionalToDeltaPower { .. }) => {
            "wronskian"
        }
        SolveError::OdeResidualNonzero { .. } => "ode",
        SolveError::RatioMismatch { .. } => "ode_ratio",
        SolveError::OffsetMismatch { .. } => "offset",
        _ => "construction",
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn first_failure(results: &[(String, bool)]) -> Option<&str> {
    results.iter().find(|(_, ok)| !ok).map(|(s, _)| s.as_str())
}

fn summarize(name: &str, results: Vec<(String, bool)>, extra: String) -> Check {
    let total = results.len();
    let passed = results.iter().filter(|(_, ok)| *ok).count();
    let mut detail = format!("{passed}/{total} passed");
    if let Some(f) = first_failure(&results) {
        detail.push_str(&format!("; first failure: {f}"));
    }
    if !extra.is_empty() {
        detail.push_str("; ");
        detail.push_str(&extra);
    }
    Check::new(name, passed == total, detail)
}

/// Every check available for one `(m, n)` at `terms` coefficients.
pub fn verify_suite(m: u64, n: u64, terms: usize) -> Vec<Check> {
    let bundle = match solve(m, n, terms) {
        Ok(b) => b,
        Err(e) => return vec![Check::new(solve_error_check(&e), false, e.to_string())],
    };
    let mut out = bundle_checks(&bundle, terms);
    let tau = ComplexValue::new(0.0, 2.0);
    out.push(match phase_equivariance_error(&bundle.h, tau, terms) {
        Ok(err) => {
            Check::new("phase_equivariance", err < PHASE_TOLERANCE, format!("relative error {err:e} at tau = 2i"))
        }
        Err(e) => Check::new("phase_equivariance", false, e.to_string()),
    });
    if n < m {
        out.push(match cross_check_solution(&bundle, tau, terms) {
            Ok(r) => Check::new(
                "cross_check",
                r.rel_error < CROSS_CHECK_TOLERANCE,
                format!("relative error {:e} at tau = 2i", r.rel_error),
            ),
            Err(e) => Check::new("cross_check", false, e.to_string()),
        });
    }
    out
}

/// Exact checks on a solved bundle: Wronskians, offset, Schwarzian and ODE.
pub fn bundle_checks(bundle: &SolutionBundle, terms: usize) -> Vec<Check> {
    let (m, n) = (bundle.m, bundle.n);
    let mut out = Vec::new();
    for w in &bundle.wronskians {
        let expected = int(w.level as i64 + 1);
        out.push(Check::new(
            format!("wronskian_level_{}", w.level),
            w.exponent == expected && !w.constant.is_zero(),
            format!("W = ({}) Delta^{}", w.constant, w.exponent),
        ));
    }
    let offset_ok = bundle.h.offset() == &ratio(n as i64, m as i64) && bundle.h.leading_coefficient() == int(1);
    out.push(Check::new("offset", offset_ok, format!("h = q^({}) (1 + O(q))", bundle.h.offset())));
    out.extend(schwarzian_checks(bundle, terms));
    out.extend(ode_checks(bundle, terms));
    out
}

fn schwarzian_checks(bundle: &SolutionBundle, terms: usize) -> Vec<Check> {
    let (m, n) = (bundle.m, bundle.n);
    let mut out = Vec::new();
    match verify_proportionality(&bundle.schwarzian, terms) {
        Ok(c) => {
            out.push(Check::new("schwarzian_proportional_to_e4", true, format!("{{h}} = ({c}) E4")));
            let expected = expected_schwarz_constant(m, n);
            let printed = printed_schwarz_constant(m, n);
            out.push(Check::new(
                "schwarz_constant",
                c == expected,
                format!("{c}; the printed value {printed} is {} times this", &printed / &c),
            ));
        }
        Err(e) => out.push(Check::new("schwarzian_proportional_to_e4", false, e.to_string())),
    }
    let inverse = PuiseuxSeries::monomial(Rational::zero(), bundle.h.order()).div(&bundle.h);
    let same =
        inverse.map_err(SolveError::from).and_then(|inv| schwarz_derivative(&inv)).map(|s| s == bundle.schwarzian);
    out.push(Check::new("schwarzian_invariant_under_inverse", matches!(same, Ok(true)), "{1/h} = {h}"));
    let scaled = schwarz_derivative(&bundle.h.scale(&ratio(-3, 5))).map(|s| s == bundle.schwarzian);
    out.push(Check::new("schwarzian_invariant_under_scaling", matches!(scaled, Ok(true)), "{-3h/5} = {h}"));
    out
}

fn ode_checks(bundle: &SolutionBundle, terms: usize) -> Vec<Check> {
    let s = expected_ode_parameter(bundle.m, bundle.n);
    let mut out = Vec::new();
    for (name, y) in [("ode_y1", &bundle.y1), ("ode_y2", &bundle.y2)] {
        out.push(match verify_ode(y, &s, terms) {
            Ok(()) => Check::new(name, true, format!("D^2 y + ({s}) E4 y = 0")),
            Err(e) => Check::new(name, false, e.to_string()),
        });
    }
    let ratio_ok = bundle
        .y1
        .div(&bundle.y2)
        .map(|r| r.truncate(terms) == bundle.h.truncate(terms) && r.offset() == bundle.h.offset());
    out.push(Check::new("ode_ratio", matches!(ratio_ok, Ok(true)), "y1/y2 = h"));
    out
}

pub fn classical_identities() -> Check {
    let n = IDENTITY_ORDER;
    let (results, elapsed) = timed(|| -> Result<Vec<(String, bool)>, String> {
        let e4 = eisenstein(4, n).map_err(|x| x.to_string())?;
        let e6 = eisenstein(6, n).map_err(|x| x.to_string())?;
        let d = delta(n).map_err(|x| x.to_string())?;
        let from_eta = euler_product(n).pow_int(24).shift_up(1).truncate(n);
        let cube = e4.pow_int(3);
        let ramanujan4 = serre_derivative(&PuiseuxSeries::from_qseries(e4.clone()), &int(4));
        let ramanujan6 = serre_derivative(&PuiseuxSeries::from_qseries(e6.clone()), &int(6));
        let j = j_inverse(n).map_err(|x| x.to_string())?;
        Ok(vec![
            ("E4^3 - E6^2 = 1728 Delta".into(), &cube - &e6.pow_int(2) == d.scale(&int(1728))),
            ("Delta = q eta^24".into(), d == from_eta),
            ("D_4 E4 = -E6/3".into(), ramanujan4.to_qseries().map(|s| s == e6.scale(&ratio(-1, 3))).unwrap_or(false)),
            (
                "D_6 E6 = -E4^2/2".into(),
                ramanujan6.to_qseries().map(|s| s == e4.pow_int(2).scale(&ratio(-1, 2))).unwrap_or(false),
            ),
            ("(1728/j) E4^3 = 1728 Delta".into(), &j * &cube == d.scale(&int(1728))),
        ])
    });
    let name = "classical identities at N = 100";
    match results {
        Ok(r) => {
            let mut c = summarize(name, r, format!("{elapsed:.2?}"));
            if elapsed >= IDENTITY_BUDGET {
                c.pass = false;
                c.detail.push_str(" exceeds the 10 s budget");
            }
            c
        }
        Err(e) => Check::new(name, false, e),
    }
}

pub fn minimal_form_shape() -> Check {
    let results = FORM_GRID
        .iter()
        .map(|&(m, np)| {
            let label = format!("({m}, {np})");
            let ok = ReprData::new(m, np)
                .and_then(|r| minimal_form(&r, SOLVE_ORDER))
                .map(|f| {
                    f.first.offset() == &ratio((m + np) as i64, 2 * m as i64)
                        && f.second.offset() == &ratio((m - np) as i64, 2 * m as i64)
                        && f.weight == int(5)
                        && f.first.leading_coefficient() == int(1)
                        && f.second.leading_coefficient() == int(1)
                })
                .unwrap_or(false);
            (label, ok)
        })
        .collect();
    summarize("minimal form offsets, weight 5, unit leading terms", results, String::new())
}

pub fn wronskian_grid() -> Check {
    let results = FORM_GRID
        .iter()
        .map(|&(m, np)| {
            let label = format!("({m}, {np})");
            let ok = (|| -> Result<bool, VvmfError> {
                let f0 = minimal_form(&ReprData::new(m, np)?, SOLVE_ORDER + 1)?;
                let (c0, e0) = wronskian_check(&f0, SOLVE_ORDER)?;
                let f1 = raise_weight(&f0)?;
                let (c1, e1) = wronskian_check(&f1, SOLVE_ORDER)?;
                Ok(e0 == int(1) && !c0.is_zero() && e1 == int(2) && !c1.is_zero())
            })()
            .unwrap_or(false);
            (label, ok)
        })
        .collect();
    summarize("Wronskian c Delta with e = 1, then e = 2 after raising", results, String::new())
}

pub fn leading_constant_grid() -> Check {
    let mut c1_report = Vec::new();
    let results = FORM_GRID
        .iter()
        .map(|&(m, np)| {
            let label = format!("({m}, {np})");
            let raised =
                ReprData::new(m, np).and_then(|r| minimal_form(&r, SOLVE_ORDER)).and_then(|f| raise_weight(&f));
            let ok = match raised {
                Ok(f1) => {
                    let (c1, c2) = leading_constants(&f1);
                    let printed = printed_c1(m, np);
                    c1_report.push(format!(
                        "{label} c1 = {c1} vs printed {printed} ({})",
                        if c1 == printed { "agrees" } else { "differs" }
                    ));
                    c2 == printed_c2(m, np)
                }
                Err(_) => false,
            };
            (label, ok)
        })
        .collect();
    summarize("c2 = 12n'/(m + 6n') after one raising", results, c1_report.join(", "))
}

/// `(m, n, outcome)` for one grid entry.
pub type SolvedCase = (u64, u64, Result<SolutionBundle, SolveError>);

/// Solves the main grid once; criteria 5 and 6 both read the bundles.
pub fn solve_grid() -> (Vec<SolvedCase>, Duration) {
    timed(|| SOLVE_GRID.iter().map(|&(m, n)| (m, n, solve(m, n, SOLVE_ORDER))).collect())
}

pub fn schwarzian_grid(solved: &[SolvedCase], elapsed: Duration) -> Check {
    let results = solved
        .iter()
        .map(|(m, n, b)| {
            let label = format!("({m}, {n})");
            let ok = match b {
                Ok(b) => verify_proportionality(&b.schwarzian, SOLVE_ORDER)
                    .map(|c| c == expected_schwarz_constant(*m, *n))
                    .unwrap_or(false),
                Err(_) => false,
            };
            (label, ok)
        })
        .collect();
    let mut c = summarize(
        "{h} = -(1/2)(n/m)^2 E4 at N = 40",
        results,
        format!("{elapsed:.2?}; the printed constant -2(n/m)^2 is 4 times the verified one"),
    );
    if elapsed >= SOLVE_BUDGET {
        c.pass = false;
        c.detail.push_str(" exceeds the 30 s budget");
    }
    c
}

pub fn ode_grid(solved: &[SolvedCase]) -> Check {
    let results = solved
        .iter()
        .map(|(m, n, b)| {
            let label = format!("({m}, {n})");
            let ok = match b {
                Ok(b) => ode_checks(b, SOLVE_ORDER).iter().all(|c| c.pass),
                Err(_) => false,
            };
            (label, ok)
        })
        .collect();
    summarize("y'' - (n/2m)^2 E4 y = 0 for y1, y2 and y1/y2 = h", results, String::new())
}

pub fn numeric_grid() -> Check {
    let mut results = Vec::new();
    let mut notes = Vec::new();
    for &(m, n) in &NUMERIC_GRID {
        let bundle = solve(m, n, NUMERIC_ORDER);
        for tau in numeric_points() {
            let label = format!("({m}, {n}) at {tau}");
            let Ok(b) = &bundle else {
                results.push((label, false));
                continue;
            };
            let cross = cross_check_solution(b, tau, NUMERIC_ORDER);
            let phase = phase_equivariance_error(&b.h, tau, NUMERIC_ORDER);
            let ok = matches!(&cross, Ok(r) if r.rel_error < CROSS_CHECK_TOLERANCE)
                && matches!(phase, Ok(p) if p < PHASE_TOLERANCE);
            if let Err(e) = &cross {
                notes.push(format!("{label}: {e}"));
            }
            results.push((label, ok));
        }
    }
    summarize("series and closed form agree; phase equivariance", results, notes.join(", "))
}

pub fn seeded_bug_sensitivity() -> Check {
    let mut results = Vec::new();
    for &(m, n) in &PERTURBED_CASES {
        for target in perturbation_targets() {
            for index in 0..PERTURBED_INDICES {
                let label = format!("({m}, {n}) {target:?}[{index}]");
                let options = SolveOptions { perturbation: Some(Perturbation { target, index, delta: int(1) }) };
                let ok = match solve_with(m, n, SOLVE_ORDER, &options) {
                    Ok(_) => false,
                    Err(e) => e.failing_index().is_some_and(|i| i <= MAX_FAILING_INDEX),
                };
                results.push((label, ok));
            }
        }
    }
    summarize("single-coefficient perturbations are caught by index 5", results, String::new())
}

/// The whole acceptance grid in order, named `criterion 1` to `criterion 8`.
pub fn acceptance() -> Vec<Check> {
    let mut out = vec![classical_identities(), minimal_form_shape(), wronskian_grid(), leading_constant_grid()];
    let (solved, elapsed) = solve_grid();
    out.push(schwarzian_grid(&solved, elapsed));
    out.push(ode_grid(&solved));
    out.push(numeric_grid());
    out.push(seeded_bug_sensitivity());
    for (i, c) in out.iter_mut().enumerate() {
        c.name = format!("criterion {}: {}", i + 1, c.name);
    }
    out
}

/// Cross-check without an existing solution; used for single evaluations.
pub fn cross_check_point(m: u64, n: u64, tau: ComplexValue, terms: usize) -> Check {
    match cross_check(m, n, tau, terms) {
        Ok(r) => {
            Check::new("cross_check", r.rel_error < CROSS_CHECK_TOLERANCE, format!("relative error {:e}", r.rel_error))
        }
        Err(e) => Check::new("cross_check", false, e.to_string()),
    }
}
