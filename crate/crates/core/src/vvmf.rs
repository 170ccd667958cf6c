//! Two-dimensional vector-valued modular forms: the minimal-weight form,
//! weight raising, and Wronskian structure checks.

use num_traits::Zero;
use thiserror::Error;

use crate::forms::{serre_derivative_with, ModularBasis};
use crate::hypergeometric::{
    check_pair, component_series_with, hypergeom_coeffs, Component, ComponentRecipe, HypergeomError,
};
use crate::series::{as_integer, int, ratio, PuiseuxSeries, QSeries, Rational, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VvmfError {
    #[error("representation check failed: {0}")]
    InvalidRepresentation(&'static str),
    #[error("raising pivot vanishes")]
    PivotVanishes,
    #[error("leading coefficient of the {0:?} component cancelled while raising the weight")]
    LeadingCancellation(Component),
    #[error("raising did not cancel the leading term of the first component")]
    LeadingNotCancelled,
    #[error("Wronskian exponent {0} is not a nonnegative integer")]
    NonIntegralExponent(Rational),
    #[error("Wronskian is not a constant multiple of Delta^e; first failure at index {index}")]
    NotProportionalToDeltaPower { index: usize },
    #[error("need {required} coefficients but only {available} are available")]
    InsufficientPrecision { required: usize, available: usize },
    #[error(transparent)]
    Hypergeom(#[from] HypergeomError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Diagonal data of `rho(T)`: exponents `(m + n')/2m` and `(m - n')/2m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReprData {
    pub m: u64,
    pub n_prime: u64,
    pub exp_first: Rational,
    pub exp_second: Rational,
}

impl ReprData {
    pub fn new(m: u64, n_prime: u64) -> Result<Self, VvmfError> {
        check_pair(m, n_prime)?;
        let (mi, ni) = (m as i64, n_prime as i64);
        let repr = ReprData { m, n_prime, exp_first: ratio(mi + ni, 2 * mi), exp_second: ratio(mi - ni, 2 * mi) };
        repr.check_existence_conditions()?;
        Ok(repr)
    }

    /// Conditions under which `rho(T) = diag(mu1, mu2)` determines a unique
    /// irreducible representation: `mu1 != mu2`, `(mu1 mu2)^6 = 1`, and
    /// `mu1/mu2` not a primitive 6th root of unity. With
    /// `mu = exp(2 pi i e)` these are statements about the exponents mod 1.
    fn check_existence_conditions(&self) -> Result<(), VvmfError> {
        let sum6 = (&self.exp_first + &self.exp_second) * int(6);
        if !sum6.is_integer() {
            return Err(VvmfError::InvalidRepresentation("(mu1 mu2)^6 != 1"));
        }
        let diff = &self.exp_first - &self.exp_second;
        if diff.is_integer() {
            return Err(VvmfError::InvalidRepresentation("mu1 = mu2"));
        }
        let reduced = diff.fract();
        if reduced.denom() == &6.into() {
            return Err(VvmfError::InvalidRepresentation("mu1/mu2 is a primitive 6th root of unity"));
        }
        Ok(())
    }
}

/// A pair of Puiseux components with weight and iteration level.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorForm {
    pub first: PuiseuxSeries,
    pub second: PuiseuxSeries,
    pub weight: Rational,
    pub repr: ReprData,
    pub level: u32,
}

impl VectorForm {
    /// Smallest body order of the two components.
    pub fn order(&self) -> usize {
        self.first.order().min(self.second.order())
    }
}

/// The weight-5 minimal form for `repr`, with body order `order`.
pub fn minimal_form(repr: &ReprData, order: usize) -> Result<VectorForm, VvmfError> {
    let basis = ModularBasis::new(order + 1).map_err(HypergeomError::from)?;
    let first = ComponentRecipe::new(repr.m, repr.n_prime, Component::First)?;
    let second = ComponentRecipe::new(repr.m, repr.n_prime, Component::Second)?;
    let cf = hypergeom_coeffs(&first.params, order + 1);
    let cs = hypergeom_coeffs(&second.params, order + 1);
    minimal_form_with(repr, &basis, &cf, &cs)
}

/// Minimal form assembled from a given basis and hypergeometric coefficient
/// lists for the two components.
pub fn minimal_form_with(
    repr: &ReprData,
    basis: &ModularBasis,
    first_coeffs: &QSeries,
    second_coeffs: &QSeries,
) -> Result<VectorForm, VvmfError> {
    let rf = ComponentRecipe::new(repr.m, repr.n_prime, Component::First)?;
    let rs = ComponentRecipe::new(repr.m, repr.n_prime, Component::Second)?;
    Ok(VectorForm {
        first: component_series_with(&rf, basis, first_coeffs)?,
        second: component_series_with(&rs, basis, second_coeffs)?,
        weight: int(5),
        repr: repr.clone(),
        level: 0,
    })
}

/// `F' = E6 F - (1/lambda) E4 D_k F` with `lambda = first.offset - k/12`.
///
/// This kills the leading term of the first component, so its offset goes
/// up by one and its body order down by one. The second component keeps its
/// offset. Leading constants are left as computed.
pub fn raise_weight(form: &VectorForm) -> Result<VectorForm, VvmfError> {
    let basis = ModularBasis::new(form.order().max(2)).map_err(HypergeomError::from)?;
    raise_weight_with(form, &basis)
}

pub fn raise_weight_with(form: &VectorForm, basis: &ModularBasis) -> Result<VectorForm, VvmfError> {
    let k = &form.weight;
    let pivot = form.first.offset() - k / int(12);
    if pivot.is_zero() {
        return Err(VvmfError::PivotVanishes);
    }
    let inv = pivot.recip();
    let step = |f: &PuiseuxSeries| -> Result<PuiseuxSeries, SeriesError> {
        let a = f.mul_qseries(basis.e6());
        let b = serre_derivative_with(f, k, basis.e2()).mul_qseries(basis.e4()).scale(&inv);
        a.sub(&b)
    };
    let first = step(&form.first)?;
    let second = step(&form.second)?;

    let target_first = form.first.offset() + int(1);
    if first.is_zero() || first.offset() > &target_first {
        return Err(VvmfError::LeadingCancellation(Component::First));
    }
    if first.offset() != &target_first {
        return Err(VvmfError::LeadingNotCancelled);
    }
    if second.is_zero() || second.offset() != form.second.offset() {
        return Err(VvmfError::LeadingCancellation(Component::Second));
    }
    Ok(VectorForm { first, second, weight: k + int(6), repr: form.repr.clone(), level: form.level + 1 })
}

/// `F_0, ..., F_r`, each with body order at least `order`.
pub fn raised_chain(repr: &ReprData, r: u32, order: usize) -> Result<Vec<VectorForm>, VvmfError> {
    let basis = ModularBasis::new(order + r as usize + 1).map_err(HypergeomError::from)?;
    let first = ComponentRecipe::new(repr.m, repr.n_prime, Component::First)?;
    let second = ComponentRecipe::new(repr.m, repr.n_prime, Component::Second)?;
    let cf = hypergeom_coeffs(&first.params, basis.order());
    let cs = hypergeom_coeffs(&second.params, basis.order());
    let mut chain = vec![minimal_form_with(repr, &basis, &cf, &cs)?];
    for _ in 0..r {
        let next = raise_weight_with(chain.last().expect("nonempty"), &basis)?;
        chain.push(next);
    }
    Ok(chain)
}

/// `W(f, g) = (Df) g - f (Dg)`.
pub fn wronskian_pair(f: &PuiseuxSeries, g: &PuiseuxSeries) -> Result<PuiseuxSeries, SeriesError> {
    f.derive().mul(g).sub(&f.mul(&g.derive()))
}

pub fn wronskian(form: &VectorForm) -> Result<PuiseuxSeries, VvmfError> {
    Ok(wronskian_pair(&form.first, &form.second)?)
}

/// Verify `W(F) = c Delta^e` with `e = first.offset + second.offset`
/// through `order` coefficients and return `(c, e)`.
pub fn wronskian_check(form: &VectorForm, order: usize) -> Result<(Rational, Rational), VvmfError> {
    let basis = ModularBasis::new(order.max(2)).map_err(HypergeomError::from)?;
    wronskian_check_with(form, order, &basis)
}

pub fn wronskian_check_with(
    form: &VectorForm,
    order: usize,
    basis: &ModularBasis,
) -> Result<(Rational, Rational), VvmfError> {
    let e = form.first.offset() + form.second.offset();
    let power = as_integer(&e).filter(|p| *p >= 0).ok_or_else(|| VvmfError::NonIntegralExponent(e.clone()))?;
    let w = wronskian(form)?;
    if w.is_zero() || w.offset() != &e {
        return Err(VvmfError::NotProportionalToDeltaPower { index: 0 });
    }
    let available = w.order().min(basis.order());
    if available < order {
        return Err(VvmfError::InsufficientPrecision { required: order, available });
    }
    // Delta^e = q^e (eta24 body)^e, so compare bodies.
    let delta_body = basis.eta24_body().truncate(order).pow_int(power as u32);
    let quotient = w.body().truncate(order).div_series(&delta_body)?;
    if let Some(index) = (1..order).find(|&i| !quotient.coeff(i).is_zero()) {
        return Err(VvmfError::NotProportionalToDeltaPower { index });
    }
    Ok((quotient.coeff(0).clone(), e))
}

/// The leading constants `(c1, c2)` of the two components.
pub fn leading_constants(form: &VectorForm) -> (Rational, Rational) {
    (form.first.leading_coefficient(), form.second.leading_coefficient())
}

/// Printed closed form for the first-component constant after one raising:
/// `(377 m^2 + 2004 m n' - 2466 n'^2) / ((m - n')(m + 6 n'))`.
pub fn printed_c1(m: u64, n_prime: u64) -> Rational {
    let (m, n) = (m as i64, n_prime as i64);
    ratio(377 * m * m + 2004 * m * n - 2466 * n * n, (m - n) * (m + 6 * n))
}

/// `c2 = 12 n' / (m + 6 n')`.
pub fn printed_c2(m: u64, n_prime: u64) -> Rational {
    let (m, n) = (m as i64, n_prime as i64);
    ratio(12 * n, m + 6 * n)
}

/// Raising pivot at iteration level `i`: `(m + 6n')/12m + i/2`.
pub fn pivot_at_level(repr: &ReprData, level: u32) -> Rational {
    let m = repr.m as i64;
    ratio(m + 6 * repr.n_prime as i64, 12 * m) + ratio(level as i64, 2)
}
