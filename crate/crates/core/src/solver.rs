//! Solving `{h, tau} = c E4` for `c = -(1/2)(n/m)^2` (with `D = q d/dq`).
//!
//! For `n = r m + n'` the solver builds the minimal form for `(m, n')`,
//! raises its weight `r` times, and takes `h = f1/f2` normalized to leading
//! coefficient 1. Every identity on the way is checked exactly: the
//! Wronskian at each level, proportionality of the Schwarzian to `E4`, and
//! the linear ODE `y'' + s E4 y = 0` for `y1 = h/sqrt(h')`, `y2 = 1/sqrt(h')`.

use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::forms::{eisenstein, BasisSeries, FormsError, ModularBasis};
use crate::hypergeometric::{hypergeom_coeffs, Component, ComponentRecipe, HypergeomError};
use crate::series::{int, ratio, PuiseuxSeries, QSeries, Rational, SeriesError};
use crate::vvmf::{minimal_form_with, raise_weight_with, wronskian_check_with, ReprData, VectorForm, VvmfError};

/// Verification order used when callers do not pick one.
pub const DEFAULT_ORDER: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("invalid parameters m = {m}, n = {n}: {reason}")]
    InvalidParameters { m: u64, n: u64, reason: &'static str },
    #[error("h' vanishes to its order")]
    DegenerateDerivative,
    #[error("Schwarzian is not proportional to E4: coefficient {index} of the quotient is {residual}")]
    NotProportional { index: usize, residual: Rational },
    #[error("Schwarzian constant {found} differs from the expected {expected}")]
    ConstantMismatch { expected: Rational, found: Rational },
    #[error("h has offset {found}, expected {expected}")]
    OffsetMismatch { expected: Rational, found: Rational },
    #[error("Wronskian exponent at level {level} is {found}, expected {expected}")]
    WronskianExponent { level: u32, expected: Rational, found: Rational },
    #[error("ODE residual at index {index} is {residual}")]
    OdeResidualNonzero { index: usize, residual: Rational },
    #[error("y1/y2 differs from h at index {index}")]
    RatioMismatch { index: usize },
    #[error("need {required} coefficients but only {available} are available")]
    InsufficientPrecision { required: usize, available: usize },
    #[error(transparent)]
    Vvmf(#[from] VvmfError),
    #[error(transparent)]
    Hypergeom(#[from] HypergeomError),
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

impl SolveError {
    /// Coefficient index at which a verification failed, when the failure
    /// is tied to one.
    pub fn failing_index(&self) -> Option<usize> {
        match self {
            SolveError::NotProportional { index, .. }
            | SolveError::OdeResidualNonzero { index, .. }
            | SolveError::RatioMismatch { index } => Some(*index),
            SolveError::ConstantMismatch { .. }
            | SolveError::OffsetMismatch { .. }
            | SolveError::WronskianExponent { .. } => Some(0),
            SolveError::Vvmf(VvmfError::NotProportionalToDeltaPower { index }) => Some(*index),
            SolveError::Vvmf(VvmfError::LeadingCancellation(_) | VvmfError::LeadingNotCancelled) => Some(0),
            _ => None,
        }
    }
}

/// Where a deliberate coefficient error is injected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbTarget {
    E4,
    Eta24,
    Hypergeom(Component),
}

/// Add `delta` to coefficient `index` of the targeted series before solving.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perturbation {
    pub target: PerturbTarget,
    pub index: usize,
    pub delta: Rational,
}

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    pub perturbation: Option<Perturbation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WronskianRecord {
    pub level: u32,
    pub constant: Rational,
    pub exponent: Rational,
}

#[derive(Debug, Clone)]
pub struct SolutionBundle {
    pub m: u64,
    pub n: u64,
    pub n_prime: u64,
    pub r: u32,
    /// `q^(n/m) (1 + O(q))`.
    pub h: PuiseuxSeries,
    /// `F_0, ..., F_r`.
    pub levels: Vec<VectorForm>,
    pub wronskians: Vec<WronskianRecord>,
    pub schwarzian: QSeries,
    pub schwarz_constant: Rational,
    pub ode_parameter: Rational,
    pub y1: PuiseuxSeries,
    pub y2: PuiseuxSeries,
}

impl SolutionBundle {
    /// The form `h` was taken from, `F_r`.
    pub fn form(&self) -> &VectorForm {
        self.levels.last().expect("at least F_0")
    }
}

/// `-(1/2)(n/m)^2`, the Schwarzian constant for `h = q^(n/m)(1 + O(q))`
/// under `D = q d/dq`.
pub fn expected_schwarz_constant(m: u64, n: u64) -> Rational {
    let x = ratio(n as i64, m as i64);
    -(&x * &x) / int(2)
}

/// `-(n/2m)^2`, the ODE parameter matching [`expected_schwarz_constant`].
pub fn expected_ode_parameter(m: u64, n: u64) -> Rational {
    let x = ratio(n as i64, 2 * m as i64);
    -(&x * &x)
}

/// The constant as it is usually printed, `-2(n/m)^2`; it is four times
/// the value verified here.
pub fn printed_schwarz_constant(m: u64, n: u64) -> Rational {
    let x = ratio(n as i64, m as i64);
    int(-2) * &x * &x
}

/// `{h, tau} = D(h''/h') - (1/2)(h''/h')^2` with `' = D`.
pub fn schwarz_derivative(h: &PuiseuxSeries) -> Result<QSeries, SolveError> {
    let d1 = h.derive();
    if d1.is_zero() {
        return Err(SolveError::DegenerateDerivative);
    }
    let d2 = d1.derive();
    let r = d2.div(&d1)?.to_qseries()?;
    Ok(&r.derive() - &(&r * &r).scale(&ratio(1, 2)))
}

/// Divide by `E4` and check everything past the constant term vanishes
/// through `order` coefficients; returns the constant.
pub fn verify_proportionality(sd: &QSeries, order: usize) -> Result<Rational, SolveError> {
    let e4 = eisenstein(4, order.max(1))?;
    verify_proportionality_with(sd, order, &e4)
}

pub fn verify_proportionality_with(sd: &QSeries, order: usize, e4: &QSeries) -> Result<Rational, SolveError> {
    let available = sd.order().min(order).min(e4.order());
    if available == 0 {
        return Err(SolveError::InsufficientPrecision { required: order.max(1), available });
    }
    let quotient = sd.truncate(available).div_series(e4)?;
    if let Some(index) = (1..available).find(|&i| !quotient.coeff(i).is_zero()) {
        return Err(SolveError::NotProportional { index, residual: quotient.coeff(index).clone() });
    }
    Ok(quotient.coeff(0).clone())
}

/// `y2 = 1/sqrt(h')`, `y1 = h y2`. The square root drops an irrational
/// scalar when there is one, so both are defined up to a common constant.
pub fn ode_solutions(h: &PuiseuxSeries) -> Result<(PuiseuxSeries, PuiseuxSeries), SolveError> {
    let d1 = h.derive();
    if d1.is_zero() {
        return Err(SolveError::DegenerateDerivative);
    }
    let root = d1.sqrt()?;
    let y2 = PuiseuxSeries::monomial(Rational::zero(), root.order()).div(&root)?;
    let y1 = h.mul(&y2);
    Ok((y1, y2))
}

/// `D^2 y + s E4 y = 0` through `order` body coefficients.
pub fn verify_ode(y: &PuiseuxSeries, s: &Rational, order: usize) -> Result<(), SolveError> {
    let e4 = eisenstein(4, order.max(1))?;
    verify_ode_with(y, s, &e4, order)
}

/// `D^2 y + s P y = 0` for an arbitrary potential `P`.
pub fn verify_ode_with(y: &PuiseuxSeries, s: &Rational, potential: &QSeries, order: usize) -> Result<(), SolveError> {
    if y.is_zero() {
        return Ok(());
    }
    let available = y.order().min(potential.order());
    if available < order {
        return Err(SolveError::InsufficientPrecision { required: order, available });
    }
    let body = y.body().truncate(order);
    let py = body.mul_series(&potential.truncate(order));
    for i in 0..order {
        let e = y.offset() + int(i as i64);
        let residual = &e * &e * body.coeff(i) + s * py.coeff(i);
        if !residual.is_zero() {
            return Err(SolveError::OdeResidualNonzero { index: i, residual });
        }
    }
    Ok(())
}

fn check_request(m: u64, n: u64) -> Result<(), SolveError> {
    let reason = if m < 7 {
        "m must be at least 7"
    } else if n == 0 {
        "n must be positive"
    } else if n.is_multiple_of(m) {
        "n must not be a multiple of m"
    } else if m.gcd(&n) != 1 {
        "m and n must be coprime"
    } else {
        return Ok(());
    };
    Err(SolveError::InvalidParameters { m, n, reason })
}

pub fn solve(m: u64, n: u64, order: usize) -> Result<SolutionBundle, SolveError> {
    solve_with(m, n, order, &SolveOptions::default())
}

pub fn solve_with(m: u64, n: u64, order: usize, options: &SolveOptions) -> Result<SolutionBundle, SolveError> {
    check_request(m, n)?;
    if order == 0 {
        return Err(SolveError::InsufficientPrecision { required: 1, available: 0 });
    }
    let n_prime = n % m;
    let r = (n / m) as u32;
    let repr = ReprData::new(m, n_prime)?;

    // Each raising costs one coefficient of the first component.
    let body_order = order + r as usize;
    let mut basis = ModularBasis::new(body_order + 1)?;
    let recipe_first = ComponentRecipe::new(m, n_prime, Component::First)?;
    let recipe_second = ComponentRecipe::new(m, n_prime, Component::Second)?;
    let mut coeffs_first = hypergeom_coeffs(&recipe_first.params, body_order + 1);
    let mut coeffs_second = hypergeom_coeffs(&recipe_second.params, body_order + 1);

    if let Some(p) = &options.perturbation {
        match p.target {
            PerturbTarget::E4 => basis = basis.perturbed(BasisSeries::E4, p.index, &p.delta),
            PerturbTarget::Eta24 => basis = basis.perturbed(BasisSeries::Eta24, p.index, &p.delta),
            PerturbTarget::Hypergeom(c) => {
                let target = match c {
                    Component::First => &mut coeffs_first,
                    Component::Second => &mut coeffs_second,
                };
                if p.index < target.order() {
                    *target.coeff_mut(p.index) += &p.delta;
                }
            }
        }
    }

    let mut form = minimal_form_with(&repr, &basis, &coeffs_first, &coeffs_second)?;
    let mut levels = Vec::with_capacity(r as usize + 1);
    let mut wronskians = Vec::with_capacity(r as usize + 1);
    loop {
        let (constant, exponent) = wronskian_check_with(&form, order, &basis)?;
        let expected = int(form.level as i64 + 1);
        if exponent != expected {
            return Err(SolveError::WronskianExponent { level: form.level, expected, found: exponent });
        }
        wronskians.push(WronskianRecord { level: form.level, constant, exponent });
        let next = if form.level < r { Some(raise_weight_with(&form, &basis)?) } else { None };
        levels.push(form);
        match next {
            Some(f) => form = f,
            None => break,
        }
    }

    let top = levels.last().expect("at least F_0");
    let (_, h) = top.first.div(&top.second)?.unit_normalized();
    let h = h.truncate(order);
    let expected_offset = ratio(n as i64, m as i64);
    if h.offset() != &expected_offset {
        return Err(SolveError::OffsetMismatch { expected: expected_offset, found: h.offset().clone() });
    }

    let schwarzian = schwarz_derivative(&h)?;
    let schwarz_constant = verify_proportionality_with(&schwarzian, order, basis.e4())?;
    let expected = expected_schwarz_constant(m, n);
    if schwarz_constant != expected {
        return Err(SolveError::ConstantMismatch { expected, found: schwarz_constant });
    }

    let (y1, y2) = ode_solutions(&h)?;
    let ode_parameter = expected_ode_parameter(m, n);
    verify_ode_with(&y1, &ode_parameter, basis.e4(), order)?;
    verify_ode_with(&y2, &ode_parameter, basis.e4(), order)?;
    let back = y1.div(&y2)?;
    if back.offset() != h.offset() {
        return Err(SolveError::RatioMismatch { index: 0 });
    }
    if let Some(index) = (0..order).find(|&i| back.body().coeff(i) != h.body().coeff(i)) {
        return Err(SolveError::RatioMismatch { index });
    }

    Ok(SolutionBundle { m, n, n_prime, r, h, levels, wronskians, schwarzian, schwarz_constant, ode_parameter, y1, y2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_schwarzian_is_constant() {
        let sigma = ratio(3, 7);
        let sd = schwarz_derivative(&PuiseuxSeries::monomial(sigma.clone(), 6)).unwrap();
        assert_eq!(sd, QSeries::constant(-(&sigma * &sigma) / int(2), 6));
    }

    #[test]
    fn schwarzian_of_q_one_seventh_times_one_plus_q() {
        // frozen from a symbolic expansion of the definition:
        // h''/h' = 1/7 + 8q - 64q^2 + O(q^3), {h} = -1/98 + (48/7)q - (1056/7)q^2 + O(q^3)
        let h = PuiseuxSeries::new(ratio(1, 7), QSeries::from_integers([1, 1, 0]));
        let sd = schwarz_derivative(&h).unwrap();
        assert_eq!(sd, QSeries::from_coeffs(vec![ratio(-1, 98), ratio(48, 7), ratio(-1056, 7)]));
    }

    #[test]
    fn schwarzian_is_mobius_invariant() {
        let h = PuiseuxSeries::new(
            ratio(2, 9),
            QSeries::from_coeffs(vec![int(1), ratio(3, 5), int(-2), ratio(7, 3), int(1), int(0)]),
        );
        let sd = schwarz_derivative(&h).unwrap();
        // (a h + b)/d with c = 0
        let affine = h.scale(&ratio(-4, 3));
        assert_eq!(schwarz_derivative(&affine).unwrap(), sd);
        let inv = PuiseuxSeries::monomial(int(0), h.order()).div(&h).unwrap();
        assert_eq!(schwarz_derivative(&inv).unwrap(), sd);
    }

    #[test]
    fn degenerate_derivative() {
        let c = PuiseuxSeries::from_qseries(QSeries::constant(int(3), 4));
        assert_eq!(schwarz_derivative(&c).unwrap_err(), SolveError::DegenerateDerivative);
    }

    #[test]
    fn proportionality_examples() {
        let e4 = eisenstein(4, 10).unwrap();
        assert_eq!(verify_proportionality(&e4.scale(&ratio(-1, 2)), 10).unwrap(), ratio(-1, 2));
        assert_eq!(verify_proportionality(&e4, 10).unwrap(), int(1));
        let off = QSeries::from_integers([1, 240, 2161]);
        match verify_proportionality(&off, 3).unwrap_err() {
            SolveError::NotProportional { index, residual } => {
                assert_eq!(index, 2);
                assert_eq!(residual, int(1));
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn ode_solutions_of_monomial() {
        let sigma = ratio(2, 7);
        let (y1, y2) = ode_solutions(&PuiseuxSeries::monomial(sigma.clone(), 5)).unwrap();
        assert_eq!(y1.offset(), &(&sigma / int(2)));
        assert_eq!(y2.offset(), &(-&sigma / int(2)));
    }

    #[test]
    fn monomial_ode_with_unit_potential() {
        let sigma = ratio(3, 5);
        let y = PuiseuxSeries::monomial(sigma.clone(), 6);
        let one = QSeries::one(6);
        assert!(verify_ode_with(&y, &-(&sigma * &sigma), &one, 6).is_ok());
        assert!(matches!(verify_ode_with(&y, &int(-1), &one, 6), Err(SolveError::OdeResidualNonzero { index: 0, .. })));
        let zero = PuiseuxSeries::zero(int(0), 6);
        assert!(verify_ode_with(&zero, &int(5), &one, 6).is_ok());
    }

    #[test]
    fn rejects_bad_requests() {
        for (m, n) in [(6, 1), (7, 0), (7, 14), (8, 6)] {
            assert!(matches!(solve(m, n, 10), Err(SolveError::InvalidParameters { .. })), "({m}, {n})");
        }
    }

    #[test]
    fn small_solve() {
        let b = solve(7, 1, 12).unwrap();
        assert_eq!(b.h.offset(), &ratio(1, 7));
        assert_eq!(b.schwarz_constant, ratio(-1, 98));
        assert_eq!(b.ode_parameter, ratio(-1, 196));
        assert_eq!(b.y1.offset(), &ratio(1, 14));
    }

    #[test]
    fn iterated_solve_shape() {
        let b = solve(7, 9, 12).unwrap();
        assert_eq!((b.n_prime, b.r), (2, 1));
        assert_eq!(b.form().weight, int(11));
        assert_eq!(b.wronskians.iter().map(|w| w.exponent.clone()).collect::<Vec<_>>(), vec![int(1), int(2)]);
    }

    #[test]
    fn wronskian_of_ode_pair_is_constant() {
        let b = solve(8, 3, 12).unwrap();
        let w = crate::vvmf::wronskian_pair(&b.y1, &b.y2).unwrap();
        assert_eq!(w.offset(), &int(0));
        assert!((1..w.order()).all(|i| w.body().coeff(i).is_zero()));
    }
}
