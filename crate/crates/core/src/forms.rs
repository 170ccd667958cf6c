//! q-expansions of the classical level-one objects: Eisenstein series,
//! powers of the Dedekind eta function, the discriminant, `1728/j`, and the
//! Serre derivative.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::series::{int, PuiseuxSeries, QSeries, Rational, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormsError {
    #[error("no Eisenstein series of weight {0} in this library (supported: 2, 4, 6)")]
    UnsupportedWeight(u32),
    #[error("eta exponent {0} must be a positive even integer")]
    OddExponent(u32),
    #[error("truncation order {got} is below the minimum {min}")]
    OrderTooSmall { got: usize, min: usize },
    #[error("the two formulas for the discriminant disagree at q^{index}")]
    InternalMismatch { index: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    E2,
    E4,
    E6,
    EtaPower(u32),
    Delta,
    JInverse,
}

/// A named classical form together with its weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormLabel {
    pub kind: FormKind,
    pub weight: Rational,
}

impl FormLabel {
    pub fn new(kind: FormKind) -> Self {
        let weight = match kind {
            FormKind::E2 => int(2),
            FormKind::E4 => int(4),
            FormKind::E6 => int(6),
            FormKind::EtaPower(e) => Rational::new(BigInt::from(e), BigInt::from(2)),
            FormKind::Delta => int(12),
            FormKind::JInverse => int(0),
        };
        FormLabel { kind, weight }
    }
}

/// `sigma_k(n)`, the sum of the k-th powers of the divisors of `n >= 1`.
pub fn divisor_sum(k: u32, n: u64) -> BigInt {
    let mut total = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            total += BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                total += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    total
}

/// The normalized Eisenstein series `E_k` for `k` in {2, 4, 6}.
pub fn eisenstein(k: u32, order: usize) -> Result<QSeries, FormsError> {
    let c: i64 = match k {
        2 => -24,
        4 => 240,
        6 => -504,
        _ => return Err(FormsError::UnsupportedWeight(k)),
    };
    if order == 0 {
        return Err(FormsError::OrderTooSmall { got: order, min: 1 });
    }
    let c = BigInt::from(c);
    let coeffs = (0..order as u64).map(|n| if n == 0 { BigInt::one() } else { &c * divisor_sum(k - 1, n) });
    Ok(QSeries::from_integers(coeffs))
}

/// `prod_{n>=1} (1 - q^n)` by Euler's pentagonal number theorem.
pub fn euler_product(order: usize) -> QSeries {
    let mut coeffs = vec![0i64; order];
    for k in 0i64.. {
        let p = (k * (3 * k - 1) / 2) as usize;
        if p >= order {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        coeffs[p] += sign;
        if k > 0 {
            let p2 = (k * (3 * k + 1) / 2) as usize;
            if p2 < order {
                coeffs[p2] += sign;
            }
        }
    }
    QSeries::from_integers(coeffs)
}

/// `eta^e` for even `e`: offset `e/24`, body `prod (1 - q^n)^e`.
pub fn eta_power(e: u32, order: usize) -> Result<PuiseuxSeries, FormsError> {
    if e == 0 || !e.is_multiple_of(2) {
        return Err(FormsError::OddExponent(e));
    }
    let body = euler_product(order).pow_int(e);
    Ok(PuiseuxSeries::new(Rational::new(BigInt::from(e), BigInt::from(24)), body))
}

/// The discriminant `q prod (1 - q^n)^24`, checked against
/// `(E4^3 - E6^2) / 1728`.
pub fn delta(order: usize) -> Result<QSeries, FormsError> {
    if order == 0 {
        return Err(FormsError::OrderTooSmall { got: order, min: 1 });
    }
    let from_eta = euler_product(order).pow_int(24).shift_up(1).truncate(order);
    let e4 = eisenstein(4, order)?;
    let e6 = eisenstein(6, order)?;
    let from_eisenstein = (&e4.pow_int(3) - &e6.pow_int(2)).scale(&Rational::new(BigInt::one(), BigInt::from(1728)));
    if let Some(index) = (0..order).find(|&i| from_eta.coeff(i) != from_eisenstein.coeff(i)) {
        return Err(FormsError::InternalMismatch { index });
    }
    Ok(from_eta)
}

/// `1728/j = 1728 Delta / E4^3`, a series with zero constant term.
pub fn j_inverse(order: usize) -> Result<QSeries, FormsError> {
    ModularBasis::new(order)?.j_inverse()
}

/// `D_k f = D f - (k/12) E2 f`.
pub fn serre_derivative(f: &PuiseuxSeries, k: &Rational) -> PuiseuxSeries {
    let e2 = eisenstein(2, f.order().max(1)).expect("weight 2 is supported");
    serre_derivative_with(f, k, &e2)
}

/// Serre derivative against a caller-supplied `E2` expansion.
pub fn serre_derivative_with(f: &PuiseuxSeries, k: &Rational, e2: &QSeries) -> PuiseuxSeries {
    let correction = f.mul_qseries(&e2.scale(&(k / int(12))));
    f.truncate(f.order().min(e2.order())).derive().sub(&correction).expect("same offset")
}

/// Series the basis can hand out, used to name perturbation targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisSeries {
    E2,
    E4,
    E6,
    /// The body `prod (1 - q^n)^24` of `eta^24`.
    Eta24,
}

/// The Eisenstein series and `eta^24` at one truncation order, with every
/// derived object (`Delta`, `1728/j`, other eta powers) computed from them.
///
/// The construction pipeline takes all of its modular input from a basis,
/// which makes it possible to inject a wrong coefficient and watch the
/// downstream checks fail.
#[derive(Debug, Clone)]
pub struct ModularBasis {
    e2: QSeries,
    e4: QSeries,
    e6: QSeries,
    eta24: QSeries,
}

impl ModularBasis {
    pub fn new(order: usize) -> Result<Self, FormsError> {
        if order < 2 {
            return Err(FormsError::OrderTooSmall { got: order, min: 2 });
        }
        Ok(ModularBasis {
            e2: eisenstein(2, order)?,
            e4: eisenstein(4, order)?,
            e6: eisenstein(6, order)?,
            eta24: euler_product(order).pow_int(24),
        })
    }

    pub fn order(&self) -> usize {
        self.e4.order()
    }

    pub fn e2(&self) -> &QSeries {
        &self.e2
    }

    pub fn e4(&self) -> &QSeries {
        &self.e4
    }

    pub fn e6(&self) -> &QSeries {
        &self.e6
    }

    pub fn eta24_body(&self) -> &QSeries {
        &self.eta24
    }

    pub fn series(&self, which: BasisSeries) -> &QSeries {
        match which {
            BasisSeries::E2 => &self.e2,
            BasisSeries::E4 => &self.e4,
            BasisSeries::E6 => &self.e6,
            BasisSeries::Eta24 => &self.eta24,
        }
    }

    /// Copy of the basis with `delta` added to one coefficient of one series.
    pub fn perturbed(&self, which: BasisSeries, index: usize, delta: &Rational) -> Self {
        let mut out = self.clone();
        let s = match which {
            BasisSeries::E2 => &mut out.e2,
            BasisSeries::E4 => &mut out.e4,
            BasisSeries::E6 => &mut out.e6,
            BasisSeries::Eta24 => &mut out.eta24,
        };
        if index < s.order() {
            *s.coeff_mut(index) += delta;
        }
        out
    }

    /// `Delta = q * eta24_body`, at the basis order.
    pub fn delta(&self) -> QSeries {
        self.eta24.shift_up(1).truncate(self.order())
    }

    /// `1728 Delta / E4^3` at the basis order.
    pub fn j_inverse(&self) -> Result<QSeries, FormsError> {
        let num = self.delta().scale(&int(1728));
        Ok(num.mul_series(&self.e4.pow_int(3).inverse()?))
    }

    /// `eta^e` for even `e`, computed as `(eta^24)^(e/24)`.
    pub fn eta_power(&self, e: u32) -> Result<PuiseuxSeries, FormsError> {
        if e == 0 || !e.is_multiple_of(2) {
            return Err(FormsError::OddExponent(e));
        }
        let ratio = Rational::new(BigInt::from(e), BigInt::from(24));
        let lead = self.eta24.coeff(0).clone();
        if lead.is_zero() {
            return Err(SeriesError::NonUnitBase.into());
        }
        let body = self.eta24.scale(&lead.recip()).pow_rational(&ratio)?;
        Ok(PuiseuxSeries::new(ratio, body))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ratio;

    fn ints(v: &[i64]) -> QSeries {
        QSeries::from_integers(v.iter().copied())
    }

    /// Direct expansion of prod_{n=1}^{order-1} (1 - q^n), factor by factor.
    fn naive_euler_product(order: usize) -> QSeries {
        let mut acc = QSeries::one(order);
        for n in 1..order {
            acc = acc.mul_series(&(&QSeries::one(order) - &QSeries::monomial(n, int(1), order)));
        }
        acc
    }

    #[test]
    fn eisenstein_examples() {
        assert_eq!(eisenstein(4, 2).unwrap(), ints(&[1, 240]));
        assert_eq!(eisenstein(6, 2).unwrap(), ints(&[1, -504]));
        assert_eq!(eisenstein(4, 3).unwrap(), ints(&[1, 240, 2160]));
        assert_eq!(eisenstein(2, 4).unwrap(), ints(&[1, -24, -72, -96]));
        assert_eq!(eisenstein(8, 3), Err(FormsError::UnsupportedWeight(8)));
    }

    #[test]
    fn divisor_sums() {
        assert_eq!(divisor_sum(3, 2), BigInt::from(9));
        assert_eq!(divisor_sum(1, 12), BigInt::from(28));
        assert_eq!(divisor_sum(5, 1), BigInt::from(1));
        assert_eq!(divisor_sum(0, 36), BigInt::from(9));
    }

    #[test]
    fn pentagonal_matches_direct_product() {
        assert_eq!(euler_product(60), naive_euler_product(60));
    }

    #[test]
    fn eta_power_examples() {
        // frozen from the factor-by-factor oracle
        let oracle = naive_euler_product(4).pow_int(24);
        assert_eq!(oracle, ints(&[1, -24, 252, -1472]));
        assert_eq!(eta_power(24, 4).unwrap().body(), &oracle);
        assert_eq!(eta_power(2, 2).unwrap().offset(), &ratio(1, 12));
        assert_eq!(eta_power(10, 1).unwrap().body(), &QSeries::one(1));
        assert_eq!(eta_power(3, 4).unwrap_err(), FormsError::OddExponent(3));
    }

    #[test]
    fn basis_eta_power_agrees_with_product() {
        let basis = ModularBasis::new(20).unwrap();
        assert_eq!(basis.eta_power(10).unwrap(), eta_power(10, 20).unwrap());
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(3).unwrap(), ints(&[0, 1, -24]));
        assert_eq!(delta(2).unwrap(), ints(&[0, 1]));
        let e4 = ints(&[1, 240]);
        let e6 = ints(&[1, -504]);
        let direct = (&e4.pow_int(3) - &e6.pow_int(2)).scale(&ratio(1, 1728));
        assert_eq!(direct, ints(&[0, 1]));
    }

    #[test]
    fn j_inverse_examples() {
        assert_eq!(j_inverse(2).unwrap(), ints(&[0, 1728]));
        // 1728 q (1 - 744 q + ...): 1728 * 744 = 1285632
        assert_eq!(j_inverse(3).unwrap(), ints(&[0, 1728, -1285632]));
        assert!(j_inverse(1).is_err());
    }

    #[test]
    fn serre_derivative_examples() {
        let n = 10;
        let e4 = PuiseuxSeries::from_qseries(eisenstein(4, n).unwrap());
        let e6 = PuiseuxSeries::from_qseries(eisenstein(6, n).unwrap());
        let d4 = serre_derivative(&e4, &int(4));
        assert_eq!(d4, e6.scale(&ratio(-1, 3)));
        let d6 = serre_derivative(&e6, &int(6));
        assert_eq!(d6, e4.mul(&e4).scale(&ratio(-1, 2)));
        let one = PuiseuxSeries::from_qseries(QSeries::one(n));
        assert!(serre_derivative(&one, &int(0)).is_zero());
    }

    #[test]
    fn delta_is_serre_flat() {
        let d = PuiseuxSeries::from_qseries(delta(30).unwrap());
        assert!(serre_derivative(&d, &int(12)).is_zero());
    }

    #[test]
    fn form_label_weights() {
        assert_eq!(FormLabel::new(FormKind::EtaPower(10)).weight, int(5));
        assert_eq!(FormLabel::new(FormKind::JInverse).weight, int(0));
        assert_eq!(FormLabel::new(FormKind::E2).weight, int(2));
    }
}
