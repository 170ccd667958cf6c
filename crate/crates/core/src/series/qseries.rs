use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Rational, SeriesError};

/// A truncated power series `c_0 + c_1 q + ... + c_{N-1} q^{N-1} + O(q^N)`.
///
/// The truncation order `N` is the length of the coefficient vector. Two
/// series compare equal when they agree up to their common order.
#[derive(Clone, Debug)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        QSeries { coeffs }
    }

    pub fn from_integers<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        QSeries { coeffs: coeffs.into_iter().map(|c| Rational::from_integer(c.into())).collect() }
    }

    pub fn zero(order: usize) -> Self {
        QSeries { coeffs: vec![Rational::zero(); order] }
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        if order > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    /// `c q^k + O(q^order)`.
    pub fn monomial(k: usize, c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k < order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `q^i`.
    ///
    /// Panics if `i` is at or beyond the truncation order.
    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn coeff_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.coeffs[i]
    }

    /// Index of the first nonzero coefficient, `None` if zero to its order.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn truncate(&self, order: usize) -> Self {
        QSeries { coeffs: self.coeffs[..order.min(self.order())].to_vec() }
    }

    /// Multiply by `q^k`. The order grows by `k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QSeries { coeffs }
    }

    /// Divide by `q^k`, discarding the first `k` coefficients. The order
    /// shrinks by `k`; callers check the discarded coefficients are zero.
    pub fn shift_down(&self, k: usize) -> Self {
        QSeries { coeffs: self.coeffs.iter().skip(k).cloned().collect() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Common denominator and integer numerators of the coefficients.
    fn integer_form(&self) -> (BigInt, Vec<BigInt>) {
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = self.coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        (den, nums)
    }

    /// Cauchy product truncated at the smaller order.
    ///
    /// Products are accumulated over integer numerators with a shared
    /// denominator, so every coefficient is reduced once.
    pub fn mul_series(&self, other: &QSeries) -> QSeries {
        let order = self.order().min(other.order());
        let (da, a) = self.truncate(order).integer_form();
        let (db, b) = other.truncate(order).integer_form();
        let den = da * db;
        let mut coeffs = Vec::with_capacity(order);
        for n in 0..order {
            let mut acc = BigInt::zero();
            for i in 0..=n {
                if a[i].is_zero() || b[n - i].is_zero() {
                    continue;
                }
                acc += &a[i] * &b[n - i];
            }
            coeffs.push(Rational::new(acc, den.clone()));
        }
        QSeries { coeffs }
    }

    /// Multiplicative inverse of a unit series.
    pub fn inverse(&self) -> Result<QSeries, SeriesError> {
        if self.order() == 0 {
            return Ok(QSeries::zero(0));
        }
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(if self.is_zero() {
                SeriesError::DivisionByZero
            } else {
                SeriesError::DivisionByNonUnit { divisor: self.valuation().unwrap(), dividend: 0 }
            });
        }
        let inv0 = c0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(self.order());
        out.push(inv0.clone());
        for n in 1..self.order() {
            let mut acc = Rational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &out[n - k];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(QSeries { coeffs: out })
    }

    /// `self / divisor` to the common order.
    ///
    /// When the divisor has positive valuation `v` and the dividend vanishes
    /// to at least that order, both are divided by `q^v` first and the result
    /// has order `min(orders) - v`.
    pub fn div_series(&self, divisor: &QSeries) -> Result<QSeries, SeriesError> {
        let order = self.order().min(divisor.order());
        let num = self.truncate(order);
        let den = divisor.truncate(order);
        let v = den.valuation().ok_or(SeriesError::DivisionByZero)?;
        if v > 0 {
            let u = num.valuation().unwrap_or(order);
            if u < v {
                return Err(SeriesError::DivisionByNonUnit { divisor: v, dividend: u });
            }
        }
        let num = num.shift_down(v);
        let den = den.shift_down(v);
        Ok(num.mul_series(&den.inverse()?))
    }

    /// The operator `D = q d/dq`: coefficient `i` becomes `i c_i`.
    pub fn derive(&self) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().enumerate().map(|(i, c)| c * Rational::from_integer(BigInt::from(i))).collect(),
        }
    }

    /// `exp(self)` for a series with zero constant term, via `D exp f = exp f * D f`.
    pub fn exp(&self) -> Result<QSeries, SeriesError> {
        if self.order() == 0 {
            return Ok(QSeries::zero(0));
        }
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroExpConstant);
        }
        let df = self.derive();
        let mut out: Vec<Rational> = Vec::with_capacity(self.order());
        out.push(Rational::one());
        for n in 1..self.order() {
            let mut acc = Rational::zero();
            for k in 1..=n {
                if !df.coeffs[k].is_zero() {
                    acc += &df.coeffs[k] * &out[n - k];
                }
            }
            out.push(acc / Rational::from_integer(BigInt::from(n)));
        }
        Ok(QSeries { coeffs: out })
    }

    /// `log(self)` for a series with constant term 1, via `D log u = Du / u`.
    pub fn log(&self) -> Result<QSeries, SeriesError> {
        if self.order() == 0 {
            return Ok(QSeries::zero(0));
        }
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::NonUnitBase);
        }
        let ratio = self.derive().mul_series(&self.inverse()?);
        let mut coeffs = ratio.coeffs;
        coeffs[0] = Rational::zero();
        for (i, c) in coeffs.iter_mut().enumerate().skip(1) {
            *c /= Rational::from_integer(BigInt::from(i));
        }
        Ok(QSeries { coeffs })
    }

    /// `self^alpha = exp(alpha log self)` for a series with constant term 1.
    pub fn pow_rational(&self, alpha: &Rational) -> Result<QSeries, SeriesError> {
        if self.order() > 0 && !self.coeffs[0].is_one() {
            return Err(SeriesError::NonUnitBase);
        }
        if alpha.is_zero() {
            return Ok(QSeries::one(self.order()));
        }
        self.log()?.scale(alpha).exp()
    }

    /// Nonnegative integer power by repeated squaring.
    pub fn pow_int(&self, e: u32) -> QSeries {
        let mut result = QSeries::one(self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_series(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_series(&base);
            }
        }
        result
    }

    /// `outer(inner(q))`, where `outer` is read as a series in a new variable
    /// and `inner` has zero constant term.
    ///
    /// The result has the order of `inner`, reduced to `K * v` when the outer
    /// series is only known to order `K` and `inner` has valuation `v`.
    pub fn compose(outer: &QSeries, inner: &QSeries) -> Result<QSeries, SeriesError> {
        if inner.order() > 0 && !inner.coeffs[0].is_zero() {
            return Err(SeriesError::NonvanishingInnerConstant);
        }
        let order = match inner.valuation() {
            Some(v) => inner.order().min(outer.order().saturating_mul(v)),
            None => inner.order(),
        };
        if outer.order() == 0 || order == 0 {
            return Ok(QSeries::zero(order));
        }
        let inner = inner.truncate(order);
        let terms = outer.order().min(order);
        // Horner from the top coefficient down.
        let mut acc = QSeries::constant(outer.coeffs[terms - 1].clone(), order);
        for k in (0..terms - 1).rev() {
            acc = acc.mul_series(&inner);
            acc.coeffs[0] += &outer.coeffs[k];
        }
        Ok(acc)
    }
}

impl PartialEq for QSeries {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a == b)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})q")?,
                _ => write!(f, "({c})q^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order())
    }
}

fn zip_with(a: &QSeries, b: &QSeries, op: impl Fn(&Rational, &Rational) -> Rational) -> QSeries {
    QSeries { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| op(x, y)).collect() }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        self.mul_series(rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}
