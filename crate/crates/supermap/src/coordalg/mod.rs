//! Coordinate algebras of affine spaces and tori, ideals supported at
//! rational points, and their finite-dimensional quotients.

mod group;

pub use group::{Character, GroupAction, PointMap};

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{unit_vector, Echelon, Matrix};
use crate::scalars::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingKind {
    Polynomial,
    Laurent,
}

/// k[x_1..x_n] or k[x_1^±..x_n^±].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    pub kind: RingKind,
    pub vars: usize,
}

impl RingSpec {
    pub fn new(kind: RingKind, vars: usize) -> Result<Self> {
        if vars == 0 {
            return Err(Error::Domain("a ring needs at least one variable".into()));
        }
        Ok(RingSpec { kind, vars })
    }

    pub fn polynomial(vars: usize) -> Self {
        RingSpec { kind: RingKind::Polynomial, vars }
    }

    pub fn laurent(vars: usize) -> Self {
        RingSpec { kind: RingKind::Laurent, vars }
    }

    fn var_name(&self, k: usize) -> String {
        if self.vars == 1 {
            "t".into()
        } else {
            format!("x{}", k + 1)
        }
    }
}

/// A rational point, i.e. a maximal ideal of the coordinate ring.
#[derive(Debug, Clone, PartialEq)]
pub struct Point<F>(pub Vec<F>);

impl<F: Field> Point<F> {
    pub fn new(coords: Vec<F>) -> Self {
        Point(coords)
    }

    pub fn scalar(a: F) -> Self {
        Point(vec![a])
    }

    pub fn coords(&self) -> &[F] {
        &self.0
    }

    pub fn parse(coords: &[String]) -> Result<Self> {
        coords.iter().map(|s| F::parse_exact(s)).collect::<Result<_>>().map(Point)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(Field::to_exact_string).collect()
    }
}

impl<F: Field> fmt::Display for Point<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(","))
    }
}

/// The ideal ∏ m_p^{n_p} of a finite list of distinct points.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealSpec<F> {
    pub factors: Vec<(Point<F>, u32)>,
}

impl<F: Field> IdealSpec<F> {
    pub fn new(factors: Vec<(Point<F>, u32)>) -> Result<Self> {
        for (a, (p, n)) in factors.iter().enumerate() {
            if *n == 0 {
                return Err(Error::Domain(format!("multiplicity of {p} must be positive")));
            }
            if factors[..a].iter().any(|(q, _)| q == p) {
                return Err(Error::Domain(format!("point {p} listed twice")));
            }
        }
        Ok(IdealSpec { factors })
    }

    /// The unit ideal (empty support).
    pub fn unit() -> Self {
        IdealSpec { factors: Vec::new() }
    }

    pub fn support(&self) -> Vec<Point<F>> {
        self.factors.iter().map(|(p, _)| p.clone()).collect()
    }

    pub fn multiplicity(&self, p: &Point<F>) -> u32 {
        self.factors.iter().find(|(q, _)| q == p).map_or(0, |(_, n)| *n)
    }

    pub fn radical(&self) -> Self {
        IdealSpec { factors: self.factors.iter().map(|(p, _)| (p.clone(), 1)).collect() }
    }

    /// IJ: multiplicities add.
    pub fn product(&self, o: &Self) -> Self {
        let mut f = self.factors.clone();
        for (p, n) in &o.factors {
            match f.iter_mut().find(|(q, _)| q == p) {
                Some((_, m)) => *m += n,
                None => f.push((p.clone(), *n)),
            }
        }
        IdealSpec { factors: f }
    }

    /// I ∩ J: multiplicities take the maximum.
    pub fn intersection(&self, o: &Self) -> Self {
        let mut f = self.factors.clone();
        for (p, n) in &o.factors {
            match f.iter_mut().find(|(q, _)| q == p) {
                Some((_, m)) => *m = (*m).max(*n),
                None => f.push((p.clone(), *n)),
            }
        }
        IdealSpec { factors: f }
    }

    /// Whether `self` ⊆ `o` as ideals, i.e. every factor of `o` is covered.
    pub fn contained_in(&self, o: &Self) -> bool {
        o.factors.iter().all(|(p, n)| self.multiplicity(p) >= *n)
    }
}

/// Number of monomials in `vars` variables of total degree below `n`.
pub fn local_dim(vars: usize, n: u32) -> usize {
    // C(n - 1 + vars, vars)
    let mut c: u128 = 1;
    for i in 0..vars as u128 {
        c = c * (u128::from(n) - 1 + vars as u128 - i) / (i + 1);
    }
    c as usize
}

fn local_exponents(vars: usize, n: u32) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..vars {
        let mut next = Vec::new();
        for e in &out {
            let used: u32 = e.iter().sum();
            for k in 0..n - used {
                let mut f = e.clone();
                f.push(k);
                next.push(f);
            }
        }
        out = next;
    }
    out.sort_by(|a, b| {
        let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
        da.cmp(&db).then_with(|| b.cmp(a))
    });
    out
}

/// A/I for I = ∏ m_p^{n_p}, realized as ⊕_p A/m_p^{n_p}. Each block has the
/// basis of monomials ∏(x_k − p_k)^{e_k} of total degree below n_p.
#[derive(Debug, Clone)]
pub struct QuotientAlgebra<F> {
    ring: RingSpec,
    ideal: IdealSpec<F>,
    labels: Vec<String>,
    exponents: Vec<Vec<u32>>,
    block_of: Vec<usize>,
    blocks: Vec<Range<usize>>,
    /// products[i * n + j]: index of x_i x_j, or None if it vanishes.
    products: Vec<Option<usize>>,
}

pub fn quotient_algebra<F: Field>(ring: RingSpec, ideal: IdealSpec<F>) -> Result<QuotientAlgebra<F>> {
    for (p, _) in &ideal.factors {
        if p.0.len() != ring.vars {
            return Err(Error::Domain(format!("point {p} has the wrong number of coordinates")));
        }
        if ring.kind == RingKind::Laurent && p.0.iter().any(F::is_zero) {
            return Err(Error::Domain(format!("point {p} is not on the torus")));
        }
    }
    let mut labels = Vec::new();
    let mut exponents = Vec::new();
    let mut block_of = Vec::new();
    let mut blocks = Vec::new();
    for (b, (p, n)) in ideal.factors.iter().enumerate() {
        let start = exponents.len();
        for e in local_exponents(ring.vars, *n) {
            labels.push(format!("p{b}:{}", monomial_label(&ring, p, &e)));
            exponents.push(e);
            block_of.push(b);
        }
        blocks.push(start..exponents.len());
    }
    let dim = exponents.len();
    let mut products = vec![None; dim * dim];
    for (b, range) in blocks.iter().enumerate() {
        let n = ideal.factors[b].1;
        for i in range.clone() {
            for j in range.clone() {
                let e: Vec<u32> = exponents[i].iter().zip(&exponents[j]).map(|(a, c)| a + c).collect();
                if e.iter().sum::<u32>() < n {
                    products[i * dim + j] = range.clone().find(|&k| exponents[k] == e);
                }
            }
        }
    }
    Ok(QuotientAlgebra { ring, ideal, labels, exponents, block_of, blocks, products })
}

fn monomial_label<F: Field>(ring: &RingSpec, p: &Point<F>, e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, k)| **k > 0)
        .map(|(v, k)| {
            let a = &p.0[v];
            let base = if a.is_zero() {
                ring.var_name(v)
            } else {
                format!("({}-{})", ring.var_name(v), a.to_exact_string())
            };
            if *k == 1 {
                base
            } else {
                format!("{base}^{k}")
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl<F: Field> QuotientAlgebra<F> {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn ideal(&self) -> &IdealSpec<F> {
        &self.ideal
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn exponents(&self, i: usize) -> &[u32] {
        &self.exponents[i]
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.block_of[i]
    }

    pub fn point_blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    pub fn block_index(&self, p: &Point<F>) -> Result<usize> {
        self.ideal
            .factors
            .iter()
            .position(|(q, _)| q == p)
            .ok_or_else(|| Error::Domain(format!("point {p} is outside the support")))
    }

    /// Index of the basis product, if nonzero. All structure constants are 0
    /// or 1 in this basis.
    pub fn product_basis(&self, i: usize, j: usize) -> Option<usize> {
        self.products[i * self.dim() + j]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> F {
        if self.product_basis(i, j) == Some(k) {
            F::one()
        } else {
            F::zero()
        }
    }

    pub fn unit(&self) -> Vec<F> {
        let mut u = vec![F::zero(); self.dim()];
        for r in &self.blocks {
            u[r.start] = F::one();
        }
        u
    }

    /// Unit of one local block.
    pub fn block_unit(&self, b: usize) -> Vec<F> {
        let mut u = vec![F::zero(); self.dim()];
        u[self.blocks[b].start] = F::one();
        u
    }

    pub fn mul(&self, a: &[F], b: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in self.blocks[self.block_of[i]].clone() {
                if let Some(k) = self.product_basis(i, j) {
                    out[k].add_mul(x, &b[j]);
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &[F], e: u32) -> Vec<F> {
        let mut acc = self.unit();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Matrix of multiplication by `a`.
    pub fn mul_matrix(&self, a: &[F]) -> Matrix<F> {
        let n = self.dim();
        let cols: Vec<Vec<F>> = (0..n).map(|j| self.mul(a, &crate::linalg::unit_vector(n, j))).collect();
        Matrix::from_columns(&cols, n)
    }

    pub fn inverse(&self, a: &[F]) -> Result<Vec<F>> {
        self.mul_matrix(a)
            .solve(&self.unit())
            .ok_or_else(|| Error::Domain("element is not invertible in the quotient".into()))
    }

    /// Class of the coordinate function x_k.
    pub fn variable(&self, k: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim()];
        for (b, r) in self.blocks.iter().enumerate() {
            v[r.start] = self.ideal.factors[b].0 .0[k].clone();
            let mut e = vec![0; self.ring.vars];
            e[k] = 1;
            if let Some(i) = r.clone().find(|&i| self.exponents[i] == e) {
                v[i] = F::one();
            }
        }
        v
    }

    /// Class of the Laurent monomial ∏ x_k^{e_k}.
    pub fn monomial(&self, e: &[i64]) -> Result<Vec<F>> {
        let mut acc = self.unit();
        for (k, &ek) in e.iter().enumerate() {
            let x = self.variable(k);
            let base = if ek < 0 {
                if self.ring.kind == RingKind::Polynomial {
                    return Err(Error::Domain("negative exponent in a polynomial ring".into()));
                }
                self.inverse(&x)?
            } else {
                x
            };
            acc = self.mul(&acc, &self.pow(&base, ek.unsigned_abs() as u32));
        }
        Ok(acc)
    }

    /// Value of `f` at a support point: the constant term of its block.
    pub fn evaluate(&self, f: &[F], p: &Point<F>) -> Result<F> {
        let b = self.block_index(p)?;
        Ok(f[self.blocks[b].start].clone())
    }

    /// Projection of the block `b` onto A/m_p^{n} for n ≤ n_p, as the list of
    /// basis indices kept (truncation by total degree).
    pub fn truncated_block(&self, b: usize, n: u32) -> Result<Vec<usize>> {
        if n > self.ideal.factors[b].1 {
            return Err(Error::Domain(format!(
                "multiplicity {n} exceeds {} at {}",
                self.ideal.factors[b].1, self.ideal.factors[b].0
            )));
        }
        Ok(self.blocks[b].clone().filter(|&i| self.exponents[i].iter().sum::<u32>() < n).collect())
    }

    /// For an ideal J (given by a spanning set), the exponent k_p with
    /// e_p J = m_p^{k_p}/m_p^{n_p} in each block, or `None` where J is not of
    /// that form.
    pub fn block_multiplicities(&self, j: &[Vec<F>]) -> Vec<Option<u32>> {
        let da = self.dim();
        let mut out = Vec::new();
        for (b, range) in self.blocks.iter().enumerate() {
            let n = self.ideal.factors[b].1;
            let unit_b = self.block_unit(b);
            let local = Echelon::from_vectors(da, j.iter().map(|v| self.mul(&unit_b, v)));
            let found = (0..=n).find(|&k| {
                let mons: Vec<usize> = range.clone().filter(|&i| self.exponents[i].iter().sum::<u32>() >= k).collect();
                mons.len() == local.len() && mons.iter().all(|&i| local.contains(&unit_vector(da, i)))
            });
            out.push(found);
        }
        out
    }

    /// Commutativity, associativity and the unit law on all basis
    /// pairs/triples.
    pub fn check_axioms(&self) -> bool {
        let n = self.dim();
        let unit = self.unit();
        for i in 0..n {
            let e = crate::linalg::unit_vector(n, i);
            if self.mul(&unit, &e) != e {
                return false;
            }
            for j in 0..n {
                if self.product_basis(i, j) != self.product_basis(j, i) {
                    return false;
                }
                for k in 0..n {
                    let l = self.product_basis(i, j).and_then(|a| self.product_basis(a, k));
                    let r = self.product_basis(j, k).and_then(|a| self.product_basis(i, a));
                    if l != r {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rational;

    fn q(n: i64) -> Rational {
        Rational::integer(n)
    }

    fn pt(a: i64) -> Point<Rational> {
        Point::scalar(q(a))
    }

    #[test]
    fn single_point_is_the_field() {
        let a = quotient_algebra(RingSpec::polynomial(1), IdealSpec::new(vec![(pt(0), 1)]).unwrap()).unwrap();
        assert_eq!(a.dim(), 1);
    }

    #[test]
    fn shifted_square_vanishes() {
        let a = quotient_algebra(RingSpec::polynomial(1), IdealSpec::new(vec![(pt(2), 2)]).unwrap()).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.product_basis(1, 1), None);
        let t = a.variable(0);
        assert_eq!(a.evaluate(&t, &pt(2)).unwrap(), q(2));
        // t² − 4t + 4 = (t − 2)² = 0
        let t2 = a.mul(&t, &t);
        let z: Vec<Rational> = (0..2).map(|i| &(&t2[i] - &(&q(4) * &t[i])) + &(&q(4) * &a.unit()[i])).collect();
        assert!(z.iter().all(Rational::is_zero));
    }

    /// Chinese remainder split of k[t^±]/((t−1)(t+1)) by brute force: the
    /// idempotents (1 ± t)/2 evaluate to the indicator functions.
    #[test]
    fn crt_split_of_two_points() {
        let a = quotient_algebra(RingSpec::laurent(1), IdealSpec::new(vec![(pt(1), 1), (pt(-1), 1)]).unwrap()).unwrap();
        assert_eq!(a.dim(), 2);
        let t = a.variable(0);
        assert_eq!(a.evaluate(&t, &pt(-1)).unwrap(), q(-1));
        assert_eq!(a.evaluate(&t, &pt(1)).unwrap(), q(1));
        let half = Rational::new(1, 2).unwrap();
        let e: Vec<Rational> = a.unit().iter().zip(&t).map(|(u, x)| &(u + x) * &half).collect();
        assert_eq!(a.mul(&e, &e), e);
        assert_eq!(a.evaluate(&e, &pt(-1)).unwrap(), q(0));
        let tinv = a.monomial(&[-1]).unwrap();
        assert_eq!(a.mul(&tinv, &t), a.unit());
    }

    #[test]
    fn torus_rejects_zero() {
        let r = quotient_algebra(RingSpec::laurent(1), IdealSpec::new(vec![(pt(0), 1)]).unwrap());
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn ideal_operations() {
        let i = IdealSpec::new(vec![(pt(1), 2)]).unwrap();
        let j = IdealSpec::new(vec![(pt(-1), 1)]).unwrap();
        assert_eq!(i.product(&j).support(), vec![pt(1), pt(-1)]);
        assert_eq!(i.radical().factors, vec![(pt(1), 1)]);
        let (i1, j1) = (i.radical(), j.clone());
        let d = |x: &IdealSpec<Rational>| quotient_algebra(RingSpec::laurent(1), x.clone()).unwrap().dim();
        assert_eq!(d(&i1.product(&j1)), d(&i1) + d(&j1));
        assert_eq!(i1.product(&j1), i1.intersection(&j1));
        assert!(IdealSpec::new(vec![(pt(1), 1), (pt(1), 2)]).is_err());
    }

    #[test]
    fn multivariate_block_dims() {
        let p = Point::new(vec![q(1), q(2)]);
        let a = quotient_algebra(RingSpec::polynomial(2), IdealSpec::new(vec![(p, 3)]).unwrap()).unwrap();
        assert_eq!(a.dim(), 6);
        assert_eq!(local_dim(2, 3), 6);
        assert_eq!(a.labels()[1], "p0:(x1-1)");
        assert!(a.check_axioms());
    }

    #[test]
    fn evaluate_outside_support() {
        let a = quotient_algebra(RingSpec::polynomial(1), IdealSpec::new(vec![(pt(2), 1)]).unwrap()).unwrap();
        assert!(matches!(a.evaluate(&a.unit(), &pt(3)), Err(Error::Domain(_))));
    }
}
