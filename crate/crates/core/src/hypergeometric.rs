//! Gauss hypergeometric coefficients and the closed-form components of the
//! minimal-weight vector-valued modular form.
//!
//! For exponent difference `x = n'/m` the two components are
//!
//! ```text
//! f1 = eta^10 (1728/j)^( x/2 + 1/12) F( x/2 + 1/12,  x/2 + 5/12;  x + 1; 1728/j)
//! f2 = eta^10 (1728/j)^(-x/2 + 1/12) F(-x/2 + 1/12, -x/2 + 5/12; -x + 1; 1728/j)
//! ```
//!
//! with leading exponents `(m + n')/2m` and `(m - n')/2m`. Bodies are
//! normalized to constant term 1, which drops the irrational scalar
//! `1728^outer_power`.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::forms::{FormsError, ModularBasis};
use crate::series::{int, ratio, PuiseuxSeries, QSeries, Rational, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergeomError {
    #[error("lower parameter c = {0} is zero or a negative integer")]
    InvalidC(Rational),
    #[error("invalid representation parameters m = {m}, n' = {n_prime}: {reason}")]
    InvalidParameters { m: u64, n_prime: u64, reason: &'static str },
    #[error("component offset {computed} disagrees with the expected exponent {expected}")]
    RecipeInconsistent { computed: Rational, expected: Rational },
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Parameters `(a, b; c)` of `2F1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypergeomParams {
    a: Rational,
    b: Rational,
    c: Rational,
}

impl HypergeomParams {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self, HypergeomError> {
        if c.is_integer() && !c.is_positive() {
            return Err(HypergeomError::InvalidC(c));
        }
        Ok(HypergeomParams { a, b, c })
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    /// The same series with `a` and `b` exchanged.
    pub fn swapped(&self) -> Self {
        HypergeomParams { a: self.b.clone(), b: self.a.clone(), c: self.c.clone() }
    }
}

/// Coefficients `(a)_n (b)_n / ((c)_n n!)` of `F(a, b; c; z)` for `n < order`.
pub fn hypergeom_coeffs(p: &HypergeomParams, order: usize) -> QSeries {
    let mut coeffs = Vec::with_capacity(order);
    let mut term = Rational::one();
    for n in 0..order {
        coeffs.push(term.clone());
        let k = int(n as i64);
        term = term * (&p.a + &k) * (&p.b + &k) / ((&p.c + &k) * (&k + int(1)));
    }
    QSeries::from_coeffs(coeffs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    First,
    Second,
}

impl Component {
    fn sign(self) -> i64 {
        match self {
            Component::First => 1,
            Component::Second => -1,
        }
    }
}

/// Validates `m >= 7`, `0 < n' < m`, `gcd(m, n') = 1`.
pub(crate) fn check_pair(m: u64, n_prime: u64) -> Result<(), HypergeomError> {
    let reason = if m < 7 {
        "m must be at least 7"
    } else if n_prime == 0 || n_prime >= m {
        "n' must satisfy 0 < n' < m"
    } else if m.gcd(&n_prime) != 1 {
        "m and n' must be coprime"
    } else {
        return Ok(());
    };
    Err(HypergeomError::InvalidParameters { m, n_prime, reason })
}

/// How to build one component of the minimal-weight form for `(m, n')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentRecipe {
    pub m: u64,
    pub n_prime: u64,
    pub component: Component,
    pub eta_exponent: u32,
    pub outer_power: Rational,
    pub params: HypergeomParams,
}

impl ComponentRecipe {
    pub fn new(m: u64, n_prime: u64, component: Component) -> Result<Self, HypergeomError> {
        check_pair(m, n_prime)?;
        let x = ratio(component.sign() * n_prime as i64, m as i64);
        let half = &x / int(2);
        let outer_power = &half + ratio(1, 12);
        let params = HypergeomParams::new(outer_power.clone(), &half + ratio(5, 12), &x + int(1))?;
        Ok(ComponentRecipe { m, n_prime, component, eta_exponent: 10, outer_power, params })
    }

    /// The leading exponent this component must have: `(m +- n')/2m`.
    pub fn expected_offset(&self) -> Rational {
        let m = self.m as i64;
        ratio(m + self.component.sign() * self.n_prime as i64, 2 * m)
    }
}

/// Build the component with body order `order`.
pub fn component_series(recipe: &ComponentRecipe, order: usize) -> Result<PuiseuxSeries, HypergeomError> {
    let basis = ModularBasis::new(order + 1)?;
    let coeffs = hypergeom_coeffs(&recipe.params, order + 1);
    component_series_with(recipe, &basis, &coeffs)
}

/// Assemble a component from a modular basis and explicit hypergeometric
/// coefficients. The body order is `min(basis.order(), coeffs.order() + 1) - 1`.
pub fn component_series_with(
    recipe: &ComponentRecipe,
    basis: &ModularBasis,
    coeffs: &QSeries,
) -> Result<PuiseuxSeries, HypergeomError> {
    let j_inv = basis.j_inverse()?;
    let order = j_inv.order().min(coeffs.order() + 1).saturating_sub(1);
    let j_inv = j_inv.truncate(order + 1);
    // 1728/j = 1728 q U(q) with U(0) = 1; divide by the computed leading
    // coefficient rather than 1728 since the scalar is dropped anyway
    let lead = j_inv.coeff(1).clone();
    if lead.is_zero() {
        return Err(SeriesError::DivisionByZero.into());
    }
    let unit = j_inv.shift_down(1).scale(&lead.recip());
    let outer = unit.pow_rational(&recipe.outer_power)?;
    let hyp = QSeries::compose(coeffs, &j_inv)?.truncate(order);
    let eta = basis.eta_power(recipe.eta_exponent)?;

    let offset = eta.offset() + &recipe.outer_power;
    let expected = recipe.expected_offset();
    if offset != expected {
        return Err(HypergeomError::RecipeInconsistent { computed: offset, expected });
    }
    let body = eta.body().mul_series(&outer).mul_series(&hyp);
    let (_, unit_body) = PuiseuxSeries::new(offset, body).unit_normalized();
    Ok(unit_body)
}

/// `(x)_n`, the rising factorial.
pub fn pochhammer(x: &Rational, n: usize) -> Rational {
    (0..n).fold(Rational::one(), |acc, k| acc * (x + int(k as i64)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: Rational, b: Rational, c: Rational) -> HypergeomParams {
        HypergeomParams::new(a, b, c).unwrap()
    }

    #[test]
    fn leading_coefficient_is_one() {
        let c = hypergeom_coeffs(&params(ratio(1, 3), ratio(2, 5), ratio(7, 4)), 5);
        assert_eq!(c.coeff(0), &int(1));
    }

    #[test]
    fn geometric_case() {
        let c = hypergeom_coeffs(&params(int(1), int(1), int(1)), 8);
        assert!(c.coeffs().iter().all(|x| x == &int(1)));
    }

    #[test]
    fn first_coefficient_for_seven_one() {
        let r = ComponentRecipe::new(7, 1, Component::First).unwrap();
        assert_eq!(r.params, params(ratio(13, 84), ratio(41, 84), ratio(8, 7)));
        let c = hypergeom_coeffs(&r.params, 3);
        assert_eq!(c.coeff(1), &ratio(533, 8064));
    }

    #[test]
    fn recurrence_matches_pochhammer_definition() {
        let p = params(ratio(-3, 14), ratio(5, 28), ratio(9, 11));
        let c = hypergeom_coeffs(&p, 12);
        for n in 0..12 {
            let direct = pochhammer(p.a(), n) * pochhammer(p.b(), n) / (pochhammer(p.c(), n) * pochhammer(&int(1), n));
            assert_eq!(c.coeff(n), &direct, "n = {n}");
        }
    }

    #[test]
    fn parameter_symmetry() {
        let p = params(ratio(13, 84), ratio(41, 84), ratio(8, 7));
        assert_eq!(hypergeom_coeffs(&p, 15), hypergeom_coeffs(&p.swapped(), 15));
    }

    #[test]
    fn invalid_c_rejected() {
        assert!(matches!(HypergeomParams::new(int(1), int(1), int(0)), Err(HypergeomError::InvalidC(_))));
        assert!(matches!(HypergeomParams::new(int(1), int(1), int(-3)), Err(HypergeomError::InvalidC(_))));
        assert!(HypergeomParams::new(int(1), int(1), ratio(-1, 2)).is_ok());
    }

    #[test]
    fn component_offsets() {
        let first = component_series(&ComponentRecipe::new(7, 1, Component::First).unwrap(), 6).unwrap();
        let second = component_series(&ComponentRecipe::new(7, 1, Component::Second).unwrap(), 6).unwrap();
        assert_eq!(first.offset(), &ratio(4, 7));
        assert_eq!(second.offset(), &ratio(3, 7));
        assert_eq!(first.order(), 6);
        let f = component_series(&ComponentRecipe::new(7, 2, Component::First).unwrap(), 6).unwrap();
        assert_eq!(f.body().coeff(0), &int(1));
    }

    #[test]
    fn second_recipe_is_first_with_sign_flipped() {
        let first = ComponentRecipe::new(11, 4, Component::First).unwrap();
        let second = ComponentRecipe::new(11, 4, Component::Second).unwrap();
        let x = ratio(4, 11);
        let flip = |r: &Rational| r - &x;
        assert_eq!(second.outer_power, flip(&first.outer_power));
        assert_eq!(second.params.a(), &flip(first.params.a()));
        assert_eq!(second.params.b(), &flip(first.params.b()));
        assert_eq!(second.params.c(), &(first.params.c() - int(2) * &x));
    }

    #[test]
    fn offsets_sum_to_one() {
        for (m, n) in [(7, 1), (7, 3), (8, 3), (9, 2), (11, 5), (12, 5), (13, 12)] {
            let a = ComponentRecipe::new(m, n, Component::First).unwrap().expected_offset();
            let b = ComponentRecipe::new(m, n, Component::Second).unwrap().expected_offset();
            assert_eq!(a + b, int(1));
        }
    }

    #[test]
    fn recipe_rejects_bad_pairs() {
        assert!(ComponentRecipe::new(6, 1, Component::First).is_err());
        assert!(ComponentRecipe::new(8, 2, Component::First).is_err());
        assert!(ComponentRecipe::new(7, 7, Component::First).is_err());
        assert!(ComponentRecipe::new(7, 0, Component::First).is_err());
    }

    #[test]
    fn first_body_coefficient_matches_leading_order_expansion() {
        // eta^10 body 1 - 10q, U^A = 1 - 744 A q, F(1728/j) = 1 + 1728 (A (A + 1/3) / c) q
        for (m, n) in [(7i64, 1i64), (7, 2), (9, 4)] {
            let x = ratio(n, m);
            let a = &x / int(2) + ratio(1, 12);
            let c = &x + int(1);
            let expected = int(-10) - int(744) * &a + int(1728) * &a * (&a + ratio(1, 3)) / c;
            let r = ComponentRecipe::new(m as u64, n as u64, Component::First).unwrap();
            let f = component_series(&r, 3).unwrap();
            assert_eq!(f.body().coeff(1), &expected);
        }
    }
}
