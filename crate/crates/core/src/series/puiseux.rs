use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{rational_sqrt, QSeries, Rational, SeriesError};

/// `q^offset * body(q)`, with the body known to `body.order()` terms.
///
/// Nonzero values are kept normalized: the body has a nonzero constant term
/// and the offset carries the valuation. A zero value keeps whatever offset
/// it was produced with; its absolute precision is still
/// `offset + body.order()`.
#[derive(Clone, Debug)]
pub struct PuiseuxSeries {
    offset: Rational,
    body: QSeries,
}

fn integral_difference(a: &Rational, b: &Rational) -> Option<i64> {
    let d = a - b;
    if d.denom().is_one() {
        i64::try_from(d.numer()).ok()
    } else {
        None
    }
}

impl PuiseuxSeries {
    pub fn new(offset: Rational, body: QSeries) -> Self {
        let mut s = PuiseuxSeries { offset, body };
        s.normalize();
        s
    }

    /// A plain power series viewed with offset zero (then normalized).
    pub fn from_qseries(body: QSeries) -> Self {
        Self::new(Rational::zero(), body)
    }

    /// `q^offset + O(q^(offset + order))`.
    pub fn monomial(offset: Rational, order: usize) -> Self {
        Self::new(offset, QSeries::one(order))
    }

    pub fn zero(offset: Rational, order: usize) -> Self {
        PuiseuxSeries { offset, body: QSeries::zero(order) }
    }

    fn normalize(&mut self) {
        if let Some(v) = self.body.valuation() {
            if v > 0 {
                self.offset += Rational::from_integer(BigInt::from(v));
                self.body = self.body.shift_down(v);
            }
        }
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn body(&self) -> &QSeries {
        &self.body
    }

    pub fn order(&self) -> usize {
        self.body.order()
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    /// Coefficient of `q^offset`; zero for a zero series.
    pub fn leading_coefficient(&self) -> Rational {
        if self.body.order() == 0 {
            Rational::zero()
        } else {
            self.body.coeff(0).clone()
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        PuiseuxSeries { offset: self.offset.clone(), body: self.body.truncate(order) }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.offset.clone(), self.order());
        }
        PuiseuxSeries { offset: self.offset.clone(), body: self.body.scale(c) }
    }

    /// Divide by the leading coefficient so the body starts with 1.
    /// Returns the scalar that was divided out alongside the result.
    pub fn unit_normalized(&self) -> (Rational, Self) {
        let lead = self.leading_coefficient();
        if lead.is_zero() {
            return (Rational::zero(), self.clone());
        }
        let s = self.scale(&lead.recip());
        (lead, s)
    }

    /// Multiply by a plain power series.
    pub fn mul_qseries(&self, u: &QSeries) -> Self {
        Self::new(self.offset.clone(), self.body.mul_series(u))
    }

    /// Offsets add and bodies multiply. A zero factor gives zero.
    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.offset + &other.offset, self.body.mul_series(&other.body))
    }

    /// Offsets subtract and bodies divide; the divisor must be nonzero.
    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        if other.is_zero() {
            return Err(SeriesError::DivisionByZero);
        }
        Ok(Self::new(&self.offset - &other.offset, self.body.div_series(&other.body)?))
    }

    /// `D q^(a+i) = (a+i) q^(a+i)` termwise. With offset zero the constant
    /// term vanishes and normalization moves the result to offset 1.
    pub fn derive(&self) -> Self {
        let coeffs = self
            .body
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c * (&self.offset + Rational::from_integer(BigInt::from(i))))
            .collect();
        Self::new(self.offset.clone(), QSeries::from_coeffs(coeffs))
    }

    /// Halve the offset and take the square root of the body.
    ///
    /// The scalar `sqrt(leading coefficient)` is kept when it is rational and
    /// dropped otherwise, so the result is only defined up to a constant
    /// factor in that case. The square root of zero is zero at half the offset.
    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        let half = &self.offset / Rational::from_integer(BigInt::from(2));
        if self.is_zero() {
            return Ok(Self::zero(half, self.order()));
        }
        let (lead, unit) = self.unit_normalized();
        let root = unit.body.pow_rational(&Rational::new(BigInt::one(), BigInt::from(2)))?;
        let root = match rational_sqrt(&lead) {
            Some(s) if lead.is_positive() => root.scale(&s),
            _ => root,
        };
        Ok(Self::new(half, root))
    }

    fn combine(&self, other: &Self, subtract: bool) -> Result<Self, SeriesError> {
        let Some(shift) = integral_difference(&other.offset, &self.offset) else {
            if other.is_zero() {
                return Ok(self.clone());
            }
            if self.is_zero() {
                return Ok(if subtract { other.neg() } else { other.clone() });
            }
            return Err(SeriesError::IncompatibleOffsets(self.offset.clone(), other.offset.clone()));
        };
        // Align both on the smaller offset.
        let (low, high, d, high_is_other) =
            if shift >= 0 { (self, other, shift as usize, true) } else { (other, self, (-shift) as usize, false) };
        let order = low.order().min(d + high.order());
        let mut coeffs = Vec::with_capacity(order);
        for i in 0..order {
            let a = low.body.coeff(i).clone();
            let b = if i >= d { high.body.coeff(i - d).clone() } else { Rational::zero() };
            let (x, y) = if high_is_other { (a, b) } else { (b, a) };
            coeffs.push(if subtract { x - y } else { x + y });
        }
        Ok(Self::new(low.offset.clone(), QSeries::from_coeffs(coeffs)))
    }

    /// Sum of two series whose offsets differ by an integer. A zero operand
    /// with an incompatible offset is treated as absent.
    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.combine(other, true)
    }

    pub fn neg(&self) -> Self {
        PuiseuxSeries { offset: self.offset.clone(), body: -&self.body }
    }

    /// The plain power series `q^offset * body`, which requires a
    /// nonnegative integral offset. Zero converts to zero of matching
    /// absolute precision when possible.
    pub fn to_qseries(&self) -> Result<QSeries, SeriesError> {
        let k = integral_difference(&self.offset, &Rational::zero())
            .filter(|k| *k >= 0)
            .ok_or_else(|| SeriesError::NonIntegralOffset(self.offset.clone()))?;
        Ok(self.body.shift_up(k as usize))
    }
}

impl PartialEq for PuiseuxSeries {
    fn eq(&self, other: &Self) -> bool {
        if self.is_zero() && other.is_zero() {
            return true;
        }
        self.offset == other.offset && self.body == other.body
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q^({}) * [{}]", self.offset, self.body)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{int, ratio};

    fn ints(v: &[i64]) -> QSeries {
        QSeries::from_integers(v.iter().copied())
    }

    #[test]
    fn offsets_add_under_mul() {
        let half = PuiseuxSeries::monomial(ratio(1, 2), 3);
        let p = half.mul(&half);
        assert_eq!(p.offset(), &int(1));
        assert_eq!(p.body(), &QSeries::one(3));
    }

    #[test]
    fn derive_monomial() {
        let d = PuiseuxSeries::monomial(ratio(4, 7), 3).derive();
        assert_eq!(d.offset(), &ratio(4, 7));
        assert_eq!(d.body(), &QSeries::constant(ratio(4, 7), 3));
    }

    #[test]
    fn derive_at_offset_zero_renormalizes() {
        let d = PuiseuxSeries::from_qseries(ints(&[1, 3, 1])).derive();
        assert_eq!(d.offset(), &int(1));
        assert_eq!(d.body(), &ints(&[3, 2]));
    }

    #[test]
    fn sqrt_matches_binomial() {
        let s = PuiseuxSeries::new(ratio(1, 7), ints(&[1, 1, 0])).sqrt().unwrap();
        assert_eq!(s.offset(), &ratio(1, 14));
        assert_eq!(s.body(), &QSeries::from_coeffs(vec![int(1), ratio(1, 2), ratio(-1, 8)]));
    }

    #[test]
    fn sqrt_keeps_rational_scalar_and_drops_irrational() {
        let four = PuiseuxSeries::new(int(0), ints(&[4, 4, 0]));
        assert_eq!(four.sqrt().unwrap().body(), &QSeries::from_coeffs(vec![int(2), int(1), ratio(-1, 4)]));
        let two = PuiseuxSeries::new(int(0), ints(&[2, 2, 0]));
        assert_eq!(two.sqrt().unwrap().body(), &QSeries::from_coeffs(vec![int(1), ratio(1, 2), ratio(-1, 8)]));
    }

    #[test]
    fn normalization_moves_valuation_into_offset() {
        let p = PuiseuxSeries::new(ratio(1, 3), ints(&[0, 0, 5, 1]));
        assert_eq!(p.offset(), &ratio(7, 3));
        assert_eq!(p.body(), &ints(&[5, 1]));
    }

    #[test]
    fn add_aligns_offsets_and_tracks_precision() {
        // q^(1/2)(1 + q + O(q^3)) + q^(3/2)(1 + O(q)) = q^(1/2)(1 + 2q + O(q^2))
        let a = PuiseuxSeries::new(ratio(1, 2), ints(&[1, 1, 0]));
        let b = PuiseuxSeries::new(ratio(3, 2), ints(&[1]));
        let s = a.add(&b).unwrap();
        assert_eq!(s.offset(), &ratio(1, 2));
        assert_eq!(s.body().order(), 2);
        assert_eq!(s.body(), &ints(&[1, 2]));
        assert_eq!(b.add(&a).unwrap(), s);
    }

    #[test]
    fn cancellation_renormalizes() {
        let a = PuiseuxSeries::new(ratio(1, 2), ints(&[1, 1, 3]));
        let b = PuiseuxSeries::new(ratio(1, 2), ints(&[1, 0, 1]));
        let d = a.sub(&b).unwrap();
        assert_eq!(d.offset(), &ratio(3, 2));
        assert_eq!(d.body(), &ints(&[1, 2]));
    }

    #[test]
    fn incompatible_offsets_rejected() {
        let a = PuiseuxSeries::monomial(ratio(1, 2), 2);
        let b = PuiseuxSeries::monomial(ratio(1, 3), 2);
        assert!(matches!(a.add(&b), Err(SeriesError::IncompatibleOffsets(_, _))));
    }

    #[test]
    fn zero_behaviour() {
        let z = PuiseuxSeries::zero(ratio(1, 5), 4);
        let a = PuiseuxSeries::monomial(ratio(1, 2), 4);
        assert!(z.mul(&a).is_zero());
        assert_eq!(a.div(&z).unwrap_err(), SeriesError::DivisionByZero);
        assert_eq!(a.add(&z).unwrap(), a);
    }

    #[test]
    fn to_qseries_requires_integral_offset() {
        let p = PuiseuxSeries::new(int(2), ints(&[1, 1]));
        assert_eq!(p.to_qseries().unwrap(), ints(&[0, 0, 1, 1]));
        assert!(PuiseuxSeries::monomial(ratio(1, 2), 2).to_qseries().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn body(order: usize) -> impl Strategy<Value = QSeries> {
            prop::collection::vec((-9i64..=9, 1i64..=4), order)
                .prop_map(|v| QSeries::from_coeffs(v.into_iter().map(|(n, d)| ratio(n, d)).collect()))
        }

        fn puiseux() -> impl Strategy<Value = PuiseuxSeries> {
            ((-6i64..=6, 1i64..=7), body(6)).prop_map(|((n, d), b)| PuiseuxSeries::new(ratio(n, d), b))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn nonzero_values_are_normalized(p in puiseux()) {
                prop_assert!(p.is_zero() || !p.body().coeff(0).is_zero());
            }

            #[test]
            fn offsets_add_and_leading_terms_multiply(a in puiseux(), b in puiseux()) {
                prop_assume!(!a.is_zero() && !b.is_zero());
                let p = a.mul(&b);
                prop_assert_eq!(p.offset(), &(a.offset() + b.offset()));
                prop_assert_eq!(p.leading_coefficient(), a.leading_coefficient() * b.leading_coefficient());
            }

            #[test]
            fn division_undoes_multiplication(a in puiseux(), b in puiseux()) {
                prop_assume!(!b.is_zero());
                prop_assert_eq!(a.mul(&b).div(&b).unwrap(), a);
            }

            #[test]
            fn leibniz_rule(a in puiseux(), b in puiseux()) {
                let lhs = a.mul(&b).derive();
                let rhs = a.derive().mul(&b).add(&a.mul(&b.derive())).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn square_root_squares_back(a in puiseux()) {
                prop_assume!(!a.is_zero());
                let (_, unit) = a.unit_normalized();
                let r = unit.sqrt().unwrap();
                prop_assert_eq!(r.mul(&r), unit);
            }
        }
    }
}
