//! Exact coefficient fields: Q and the cyclotomic fields Q(ζ_m).

mod cyclotomic;
mod rational;

pub use cyclotomic::{cyclotomic_polynomial, totient, Cyclotomic};
pub use rational::Rational;

use std::fmt::{Debug, Display};

use crate::error::{Error, Result};

/// The operations every algorithm in the crate needs from its coefficients.
pub trait Field: Clone + PartialEq + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;
    fn from_rational(r: &Rational) -> Self;
    /// ζ_m^k if it lies in this field.
    fn root_of_unity(m: u64, k: i64) -> Option<Self>;
    fn parse_exact(s: &str) -> Result<Self>;
    /// The value as a rational number, when it is one.
    fn to_rational(&self) -> Option<Rational>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::integer(n))
    }

    fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// `self += a * b`.
    fn add_mul(&mut self, a: &Self, b: &Self) {
        if !a.is_zero() && !b.is_zero() {
            *self = self.add(&a.mul(b));
        }
    }

    /// `self -= a * b`.
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        if !a.is_zero() && !b.is_zero() {
            *self = self.sub(&a.mul(b));
        }
    }

    fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    fn to_exact_string(&self) -> String {
        self.to_string()
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Rational::is_one(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self> {
        self.recip()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn root_of_unity(m: u64, k: i64) -> Option<Self> {
        let z = Cyclotomic::root_of_unity(m, k);
        z.as_rational().cloned()
    }
    fn parse_exact(s: &str) -> Result<Self> {
        s.parse()
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        Rational::add_mul(self, a, b)
    }
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        Rational::sub_mul(self, a, b)
    }
}

impl Field for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic::zero()
    }
    fn one() -> Self {
        Cyclotomic::one()
    }
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Cyclotomic::is_one(self)
    }
    fn add(&self, o: &Self) -> Self {
        Cyclotomic::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Cyclotomic::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Cyclotomic::mul(self, o)
    }
    fn neg(&self) -> Self {
        Cyclotomic::neg(self)
    }
    fn inv(&self) -> Result<Self> {
        Cyclotomic::inv(self)
    }
    fn from_rational(r: &Rational) -> Self {
        Cyclotomic::from_rational(r.clone())
    }
    fn root_of_unity(m: u64, k: i64) -> Option<Self> {
        Some(Cyclotomic::root_of_unity(m, k))
    }
    fn parse_exact(s: &str) -> Result<Self> {
        s.parse()
    }
    fn to_rational(&self) -> Option<Rational> {
        self.as_rational().cloned()
    }
    fn pow(&self, e: u64) -> Self {
        Cyclotomic::pow(self, e)
    }
}

/// ζ_m^k in `F`, or an error naming the missing root.
pub fn root_in<F: Field>(m: u64, k: i64) -> Result<F> {
    F::root_of_unity(m, k).ok_or_else(|| Error::NotInField(format!("zeta_{m}^{k}")))
}

/// Field operations on cyclotomic values, as a single dispatching entry point:
/// sum, product, difference, negation and inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Neg,
    Inv,
}

pub fn field_ops(op: FieldOp, a: &Cyclotomic, b: &Cyclotomic) -> Result<Cyclotomic> {
    let check = |x: &Cyclotomic, y: &Cyclotomic| {
        let (m, n) = (x.order(), y.order());
        if m % n == 0 || n % m == 0 || x.order() == 1 || y.order() == 1 {
            Ok(())
        } else {
            Err(Error::Promotion(m, n))
        }
    };
    match op {
        FieldOp::Add => check(a, b).map(|_| a.add(b)),
        FieldOp::Sub => check(a, b).map(|_| a.sub(b)),
        FieldOp::Mul => check(a, b).map(|_| a.mul(b)),
        FieldOp::Neg => Ok(a.neg()),
        FieldOp::Inv => a.inv(),
    }
}

/// ζ_m^k reduced modulo Φ_m.
pub fn root_of_unity(m: u64, k: i64) -> Cyclotomic {
    Cyclotomic::root_of_unity(m, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_roots_of_unity() {
        assert_eq!(Rational::root_of_unity(2, 1), Some(Rational::integer(-1)));
        assert_eq!(Rational::root_of_unity(4, 2), Some(Rational::integer(-1)));
        assert_eq!(Rational::root_of_unity(1, 0), Some(Rational::one()));
        assert_eq!(Rational::root_of_unity(3, 1), None);
        assert!(root_in::<Rational>(4, 1).is_err());
    }

    #[test]
    fn field_ops_dispatch() {
        let i = root_of_unity(4, 1);
        let w = root_of_unity(3, 1);
        assert_eq!(field_ops(FieldOp::Mul, &i, &i).unwrap(), Cyclotomic::from_rational(Rational::integer(-1)));
        assert!(matches!(field_ops(FieldOp::Add, &i, &w), Err(Error::Promotion(4, 3))));
        assert_eq!(field_ops(FieldOp::Inv, &Cyclotomic::zero(), &i), Err(Error::DivisionByZero));
        assert_eq!(field_ops(FieldOp::Neg, &i, &i).unwrap(), root_of_unity(4, 3));
    }
}
