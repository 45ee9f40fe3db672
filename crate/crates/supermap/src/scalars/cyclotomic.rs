use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::Rational;
use crate::error::{Error, Result};

/// Euler's totient.
pub fn totient(m: u64) -> u64 {
    let mut n = m;
    let mut out = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

fn poly_cache() -> &'static Mutex<BTreeMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<BTreeMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// Coefficients (lowest degree first) of the m-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(m: u64) -> Arc<Vec<i64>> {
    assert!(m >= 1, "cyclotomic order must be positive");
    if let Some(p) = poly_cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by every Phi_d with d a proper divisor of m.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let div = cyclotomic_polynomial(d);
            num = exact_divide(&num, &div);
        }
    }
    let p = Arc::new(num);
    poly_cache().lock().unwrap().insert(m, p.clone());
    p
}

fn exact_divide(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut quo = vec![0i64; nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd];
        quo[k] = c;
        if c != 0 {
            for (j, dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quo
}

/// Reduces a polynomial in ζ modulo Φ_m, returning exactly φ(m) coefficients.
fn reduce(order: u64, mut poly: Vec<Rational>) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(order);
    let deg = phi.len() - 1;
    if poly.len() <= deg {
        poly.resize(deg, Rational::zero());
        return poly;
    }
    for top in (deg..poly.len()).rev() {
        if poly[top].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut poly[top]);
        for (j, pj) in phi.iter().enumerate().take(deg) {
            if *pj != 0 {
                poly[top - deg + j].sub_mul(&c, &Rational::integer(*pj));
            }
        }
    }
    poly.truncate(deg);
    poly
}

/// An element of Q(ζ_m), stored as coefficients of 1, ζ, …, ζ^{φ(m)-1}.
///
/// Values whose non-constant coefficients vanish are stored at order 1, so
/// rationals embed without loss. Mixed orders are promoted to their lcm.
#[derive(Clone)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn from_rational(r: Rational) -> Self {
        Cyclotomic { order: 1, coeffs: vec![r] }
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    /// Builds an element from coefficients in the power basis of ζ_m; any
    /// length is accepted and reduced.
    pub fn from_coeffs(order: u64, coeffs: Vec<Rational>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Construction("cyclotomic order must be positive".into()));
        }
        Ok(Self::normalized(order, reduce(order, coeffs)))
    }

    fn normalized(order: u64, coeffs: Vec<Rational>) -> Self {
        if order > 1 && coeffs.iter().skip(1).all(Rational::is_zero) {
            let c0 = coeffs.into_iter().next().unwrap_or_default();
            return Cyclotomic { order: 1, coeffs: vec![c0] };
        }
        Cyclotomic { order, coeffs }
    }

    /// ζ_m^k.
    pub fn root_of_unity(m: u64, k: i64) -> Self {
        assert!(m >= 1, "root of unity order must be positive");
        let e = k.rem_euclid(m as i64) as usize;
        let mut poly = vec![Rational::zero(); e + 1];
        poly[e] = Rational::one();
        Self::normalized(m, reduce(m, poly))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_one()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.order == 1 {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Re-expresses `self` in Q(ζ_target); `self.order` must divide `target`.
    pub fn promote(&self, target: u64) -> Result<Vec<Rational>> {
        if target % self.order != 0 {
            return Err(Error::Promotion(self.order, target));
        }
        if target == self.order {
            return Ok(self.coeffs.clone());
        }
        let step = (target / self.order) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Ok(reduce(target, poly))
    }

    fn common(&self, o: &Self) -> (u64, Vec<Rational>, Vec<Rational>) {
        let m = self.order.lcm(&o.order);
        (m, self.promote(m).unwrap(), o.promote(m).unwrap())
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.order == o.order {
            let c = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
            return Self::normalized(self.order, c);
        }
        let (m, a, b) = self.common(o);
        Self::normalized(m, a.iter().zip(&b).map(|(x, y)| x + y).collect())
    }

    pub fn neg(&self) -> Self {
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.order == 1 {
            let s = &self.coeffs[0];
            return Self::normalized(o.order, o.coeffs.iter().map(|c| c * s).collect());
        }
        if o.order == 1 {
            let s = &o.coeffs[0];
            return Self::normalized(self.order, self.coeffs.iter().map(|c| c * s).collect());
        }
        let (m, a, b) = self.common(o);
        let mut prod = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j].add_mul(x, y);
            }
        }
        Self::normalized(m, reduce(m, prod))
    }

    /// Multiplicative inverse, found by solving the multiplication-by-self
    /// system on the power basis.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.order == 1 {
            return Ok(Self::from_rational(self.coeffs[0].recip()?));
        }
        let m = self.order;
        let n = self.coeffs.len();
        // Column j holds self * ζ^j.
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut poly = vec![Rational::zero(); j];
            poly.extend(self.coeffs.iter().cloned());
            cols.push(reduce(m, poly));
        }
        // Augmented rows [M | e_0].
        let mut rows: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut r: Vec<Rational> = (0..n).map(|j| cols[j][i].clone()).collect();
                r.push(if i == 0 { Rational::one() } else { Rational::zero() });
                r
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !rows[r][c].is_zero()).ok_or(Error::DivisionByZero)?;
            rows.swap(c, p);
            let inv = rows[c][c].recip()?;
            for x in rows[c].iter_mut() {
                *x = &*x * &inv;
            }
            let pivot = rows[c].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != c && !row[c].is_zero() {
                    let f = row[c].clone();
                    for (x, v) in row[c..=n].iter_mut().zip(&pivot[c..=n]) {
                        x.sub_mul(&f, v);
                    }
                }
            }
        }
        Ok(Self::normalized(m, rows.into_iter().map(|r| r[n].clone()).collect()))
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, o: &Self) -> bool {
        if self.order == o.order {
            return self.coeffs == o.coeffs;
        }
        let (_, a, b) = self.common(o);
        a == b
    }
}

impl Eq for Cyclotomic {}

impl From<Rational> for Cyclotomic {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]@{}", self.order)
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Cyclotomic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let Some(body) = t.strip_prefix('[') else {
            return Ok(Self::from_rational(t.parse()?));
        };
        let bad = || Error::ScalarParse(s.to_string());
        let (inner, order) = body.split_once("]@").ok_or_else(bad)?;
        let order: u64 = order.trim().parse().map_err(|_| bad())?;
        if order == 0 {
            return Err(bad());
        }
        let coeffs = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner.split(',').map(str::parse).collect::<Result<Vec<Rational>>>()?
        };
        Self::from_coeffs(order, coeffs)
    }
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::integer(n)
    }

    #[test]
    fn known_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        for m in 1..40 {
            assert_eq!(cyclotomic_polynomial(m).len() as u64 - 1, totient(m));
        }
    }

    #[test]
    fn small_roots() {
        assert_eq!(Cyclotomic::root_of_unity(2, 1), Cyclotomic::from_rational(q(-1)));
        assert_eq!(Cyclotomic::root_of_unity(2, 1).order(), 1);
        let i = Cyclotomic::root_of_unity(4, 1);
        assert_eq!(i.mul(&i), Cyclotomic::from_rational(q(-1)));
        let w = Cyclotomic::root_of_unity(3, 1);
        assert!(Cyclotomic::one().add(&w).add(&w.mul(&w)).is_zero());
        assert_eq!(Cyclotomic::root_of_unity(6, 3), Cyclotomic::from_rational(q(-1)));
        assert!(Cyclotomic::root_of_unity(1, 0).is_one());
    }

    #[test]
    fn mixed_orders_promote() {
        let i = Cyclotomic::root_of_unity(4, 1);
        let w = Cyclotomic::root_of_unity(3, 1);
        let p = i.mul(&w);
        assert_eq!(p.order(), 12);
        assert_eq!(p, Cyclotomic::root_of_unity(12, 7));
        assert_eq!(Cyclotomic::root_of_unity(3, 1), Cyclotomic::root_of_unity(6, 2));
        assert!(matches!(w.promote(4), Err(Error::Promotion(3, 4))));
    }

    #[test]
    fn inverse_and_zero() {
        let a = Cyclotomic::from_coeffs(5, vec![q(1), q(2), q(0), q(-3)]).unwrap();
        assert!(a.mul(&a.inv().unwrap()).is_one());
        assert_eq!(Cyclotomic::zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(Cyclotomic::from_coeffs(7, vec![]).unwrap().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn string_format() {
        let i = Cyclotomic::root_of_unity(4, 1);
        assert_eq!(i.to_string(), "[0,1]@4");
        assert_eq!("[0,1]@4".parse::<Cyclotomic>().unwrap(), i);
        assert_eq!("-3/4".parse::<Cyclotomic>().unwrap().to_string(), "-3/4");
        assert_eq!("[1/2,0]@4".parse::<Cyclotomic>().unwrap().order(), 1);
        assert!("[1,2]@0".parse::<Cyclotomic>().is_err());
    }
}
