//! Finite-dimensional Lie superalgebras given by structure constants.

mod auto;
mod construct;
mod roots;

pub use auto::{automorphism_from_matrix, Automorphism};
pub use construct::{construct_basic, construct_basic_with, Family};
pub use roots::{
    distinguished_grading, even_part_summary, reductive_split, triangular_decomposition,
    DistinguishedGrading, EvenPartSummary, GradingType, ReductiveSplit, Root, RootData,
};

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kernel_of_rows, span, Coordinates, Echelon, Matrix};
use crate::par::map_indices;
use crate::scalars::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(b: usize) -> Self {
        if b % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn plus(self, o: Parity) -> Parity {
        Parity::from_bit(self.bit() + o.bit())
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// Whether swapping two elements of these parities costs a sign.
    pub fn both_odd(self, o: Parity) -> bool {
        self.is_odd() && o.is_odd()
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Sparse vector as (index, coefficient) pairs with increasing indices.
pub type Sparse<F> = Vec<(usize, F)>;

pub fn sparse_from_dense<F: Field>(v: &[F]) -> Sparse<F> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn dense_from_sparse<F: Field>(s: &Sparse<F>, n: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    for (i, x) in s {
        v[*i] = x.clone();
    }
    v
}

/// A matrix realization: one supermatrix per basis element acting on a
/// superspace whose first `even` coordinates are even.
#[derive(Clone, Debug)]
pub struct Realization<F> {
    pub even: usize,
    pub odd: usize,
    pub matrices: Vec<Matrix<F>>,
    coords: Coordinates<F>,
}

impl<F: Field> Realization<F> {
    pub fn new(even: usize, odd: usize, matrices: Vec<Matrix<F>>) -> Result<Self> {
        let n = even + odd;
        let flat: Vec<Vec<F>> = matrices.iter().map(|m| m.data().to_vec()).collect();
        let coords = Coordinates::new(n * n, flat)
            .map_err(|_| Error::Construction("realization matrices are linearly dependent".into()))?;
        Ok(Realization { even, odd, matrices, coords })
    }

    pub fn size(&self) -> usize {
        self.even + self.odd
    }

    pub fn space_parity(&self, i: usize) -> Parity {
        if i < self.even {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Coordinates of a matrix in the realized basis, if it lies in the span.
    pub fn coords(&self, x: &Matrix<F>) -> Option<Vec<F>> {
        self.coords.coords(x.data())
    }

    fn permuted(&self, order: &[usize]) -> Result<Self> {
        Realization::new(self.even, self.odd, order.iter().map(|&i| self.matrices[i].clone()).collect())
    }
}

/// A Lie superalgebra with a parity-tagged basis and exact structure
/// constants `[x_i, x_j] = Σ_k c[i][j][k] x_k`.
pub struct SuperAlgebra<F> {
    labels: Vec<String>,
    parity: Vec<Parity>,
    brackets: Vec<Sparse<F>>,
    family: Option<Family>,
    realization: Option<Realization<F>>,
    cartan: Vec<usize>,
    degree_hint: Option<Vec<i32>>,
    roots: OnceLock<std::result::Result<RootData<F>, Error>>,
}

impl<F: Field> Clone for SuperAlgebra<F> {
    fn clone(&self) -> Self {
        SuperAlgebra {
            labels: self.labels.clone(),
            parity: self.parity.clone(),
            brackets: self.brackets.clone(),
            family: self.family.clone(),
            realization: self.realization.clone(),
            cartan: self.cartan.clone(),
            degree_hint: self.degree_hint.clone(),
            roots: OnceLock::new(),
        }
    }
}

impl<F> fmt::Debug for SuperAlgebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let odd = self.parity.iter().filter(|p| p.is_odd()).count();
        let name = self.family.as_ref().map_or_else(|| "algebra".to_string(), ToString::to_string);
        write!(f, "SuperAlgebra({name}, dim {}|{odd})", self.labels.len() - odd)
    }
}

impl<F: Field> SuperAlgebra<F> {
    /// Builds an algebra from raw structure constants; `brackets[i * n + j]`
    /// is the sparse expansion of `[x_i, x_j]`. No axioms are checked here.
    pub fn from_structure_constants(
        labels: Vec<String>,
        parity: Vec<Parity>,
        brackets: Vec<Sparse<F>>,
    ) -> Result<Self> {
        let n = labels.len();
        if parity.len() != n || brackets.len() != n * n {
            return Err(Error::Dimension("structure constant table has the wrong shape".into()));
        }
        Ok(SuperAlgebra {
            labels,
            parity,
            brackets,
            family: None,
            realization: None,
            cartan: Vec::new(),
            degree_hint: None,
            roots: OnceLock::new(),
        })
    }

    /// Structure constants computed from supercommutators of matrices.
    pub fn from_realization(labels: Vec<String>, realization: Realization<F>) -> Result<Self> {
        let n = realization.matrices.len();
        let parity: Vec<Parity> = realization
            .matrices
            .iter()
            .map(|m| matrix_parity(m, realization.even))
            .collect::<Result<_>>()?;
        let brackets = map_indices(n * n, |ij| {
            let (i, j) = (ij / n, ij % n);
            let anti = parity[i].both_odd(parity[j]);
            let c = realization.matrices[i].bracket(&realization.matrices[j], anti);
            realization.coords(&c).map(|v| sparse_from_dense(&v))
        });
        let brackets = brackets
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Construction("matrix span is not closed under the bracket".into()))?;
        let mut g = Self::from_structure_constants(labels, parity, brackets)?;
        g.realization = Some(realization);
        Ok(g)
    }

    pub fn with_family(mut self, family: Family) -> Self {
        self.family = Some(family);
        self
    }

    pub fn with_cartan(mut self, cartan: Vec<usize>) -> Self {
        self.cartan = cartan;
        self.roots = OnceLock::new();
        self
    }

    pub fn with_degree_hint(mut self, degrees: Vec<i32>) -> Self {
        self.degree_hint = Some(degrees);
        self.roots = OnceLock::new();
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim());
        self.labels = labels;
        self
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn even_dim(&self) -> usize {
        self.parity.iter().filter(|p| !p.is_odd()).count()
    }

    pub fn odd_dim(&self) -> usize {
        self.dim() - self.even_dim()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parity[i]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parity
    }

    pub fn family(&self) -> Option<&Family> {
        self.family.as_ref()
    }

    pub fn name(&self) -> String {
        match &self.family {
            Some(f) => f.to_string(),
            None => format!("algebra[{}]", self.dim()),
        }
    }

    pub fn realization(&self) -> Option<&Realization<F>> {
        self.realization.as_ref()
    }

    pub fn cartan(&self) -> &[usize] {
        &self.cartan
    }

    pub fn degree_hint(&self) -> Option<&[i32]> {
        self.degree_hint.as_deref()
    }

    pub fn even_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| !self.parity[i].is_odd()).collect()
    }

    pub fn odd_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.parity[i].is_odd()).collect()
    }

    /// Sparse expansion of `[x_i, x_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &Sparse<F> {
        &self.brackets[i * self.dim() + j]
    }

    /// Bracket of two coordinate vectors (extended bilinearly; inputs need
    /// not be homogeneous).
    pub fn bracket(&self, x: &[F], y: &[F]) -> Vec<F> {
        let n = self.dim();
        let mut out = vec![F::zero(); n];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a.mul(b);
                for (k, c) in self.bracket_basis(i, j) {
                    out[*k].add_mul(&ab, c);
                }
            }
        }
        out
    }

    pub fn bracket_sparse(&self, x: &Sparse<F>, y: &Sparse<F>) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim()];
        for (i, a) in x {
            for (j, b) in y {
                let ab = a.mul(b);
                for (k, c) in self.bracket_basis(*i, *j) {
                    out[*k].add_mul(&ab, c);
                }
            }
        }
        out
    }

    /// Matrix of `ad(x_i)`; column j holds `[x_i, x_j]`.
    pub fn ad(&self, i: usize) -> Matrix<F> {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            for (k, c) in self.bracket_basis(i, j) {
                m.set(*k, j, c.clone());
            }
        }
        m
    }

    /// Parity of a coordinate vector, if homogeneous and nonzero.
    pub fn vector_parity(&self, v: &[F]) -> Option<Parity> {
        let mut seen = None;
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            match seen {
                None => seen = Some(self.parity[i]),
                Some(p) if p != self.parity[i] => return None,
                _ => {}
            }
        }
        seen
    }

    /// Span of all brackets `[g, g]`.
    pub fn derived_span(&self) -> Vec<Vec<F>> {
        let n = self.dim();
        span(n, self.brackets.iter().map(|s| dense_from_sparse(s, n)))
    }

    pub fn is_perfect(&self) -> bool {
        self.derived_span().len() == self.dim()
    }

    /// Basis of the center `{z : [z, g] = 0}`.
    pub fn center(&self) -> Vec<Vec<F>> {
        let n = self.dim();
        let mut rows = Vec::new();
        for j in 0..n {
            // Coefficient of x_k in [z, x_j] as a linear form in z.
            for k in 0..n {
                let row: Vec<F> = (0..n)
                    .map(|i| {
                        self.bracket_basis(i, j)
                            .iter()
                            .find(|(kk, _)| *kk == k)
                            .map(|(_, c)| c.clone())
                            .unwrap_or_else(F::zero)
                    })
                    .collect();
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
        kernel_of_rows(rows, n)
    }

    /// The subalgebra on a subset of basis indices (which must be closed).
    pub fn subalgebra(&self, indices: &[usize]) -> Result<SuperAlgebra<F>> {
        let pos: std::collections::BTreeMap<usize, usize> =
            indices.iter().enumerate().map(|(a, &i)| (i, a)).collect();
        let m = indices.len();
        let mut brackets = Vec::with_capacity(m * m);
        for &i in indices {
            for &j in indices {
                let mut s = Vec::new();
                for (k, c) in self.bracket_basis(i, j) {
                    let Some(&a) = pos.get(k) else {
                        return Err(Error::Precondition(format!(
                            "[{}, {}] leaves the span of the chosen basis elements",
                            self.labels[i], self.labels[j]
                        )));
                    };
                    s.push((a, c.clone()));
                }
                s.sort_by_key(|(a, _)| *a);
                brackets.push(s);
            }
        }
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        let parity = indices.iter().map(|&i| self.parity[i]).collect();
        let mut sub = SuperAlgebra::from_structure_constants(labels, parity, brackets)?;
        sub.cartan = self.cartan.iter().filter_map(|c| pos.get(c).copied()).collect();
        if let Some(d) = &self.degree_hint {
            sub.degree_hint = Some(indices.iter().map(|&i| d[i]).collect());
        }
        Ok(sub)
    }

    /// The quotient by an ideal spanned by `ideal`. The quotient keeps the
    /// basis elements that are not pivots of the ideal's echelon form.
    pub fn quotient(&self, ideal: &[Vec<F>]) -> Result<(SuperAlgebra<F>, Vec<usize>)> {
        let n = self.dim();
        let ech = Echelon::from_vectors(n, ideal.iter().cloned());
        for v in ech.rows() {
            for j in 0..n {
                let e = crate::linalg::unit_vector(n, j);
                if !ech.contains(&self.bracket(v, &e)) {
                    return Err(Error::Precondition("subspace is not an ideal".into()));
                }
            }
        }
        let keep: Vec<usize> = (0..n).filter(|i| !ech.pivots().contains(i)).collect();
        let pos: std::collections::BTreeMap<usize, usize> =
            keep.iter().enumerate().map(|(a, &i)| (i, a)).collect();
        let mut brackets = Vec::with_capacity(keep.len() * keep.len());
        for &i in &keep {
            for &j in &keep {
                let v = dense_from_sparse(self.bracket_basis(i, j), n);
                let r = ech.reduce(&v);
                let s: Sparse<F> =
                    r.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (pos[&k], x)).collect();
                brackets.push(s);
            }
        }
        let labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
        let parity = keep.iter().map(|&i| self.parity[i]).collect();
        let mut q = SuperAlgebra::from_structure_constants(labels, parity, brackets)?;
        q.cartan = self.cartan.iter().filter_map(|c| pos.get(c).copied()).collect();
        if let Some(d) = &self.degree_hint {
            q.degree_hint = Some(keep.iter().map(|&i| d[i]).collect());
        }
        Ok((q, keep))
    }

    /// The same algebra with its basis reordered (`order[new] = old`).
    pub fn permuted(&self, order: &[usize]) -> Result<SuperAlgebra<F>> {
        let n = self.dim();
        let mut inv = vec![0; n];
        for (a, &i) in order.iter().enumerate() {
            inv[i] = a;
        }
        let mut brackets = Vec::with_capacity(n * n);
        for &i in order {
            for &j in order {
                let mut s: Sparse<F> =
                    self.bracket_basis(i, j).iter().map(|(k, c)| (inv[*k], c.clone())).collect();
                s.sort_by_key(|(k, _)| *k);
                brackets.push(s);
            }
        }
        let mut g = SuperAlgebra::from_structure_constants(
            order.iter().map(|&i| self.labels[i].clone()).collect(),
            order.iter().map(|&i| self.parity[i]).collect(),
            brackets,
        )?;
        g.family = self.family.clone();
        g.realization = match &self.realization {
            Some(r) => Some(r.permuted(order)?),
            None => None,
        };
        let mut cartan: Vec<usize> = self.cartan.iter().map(|&c| inv[c]).collect();
        cartan.sort_unstable();
        g.cartan = cartan;
        g.degree_hint = self.degree_hint.as_ref().map(|d| order.iter().map(|&i| d[i]).collect());
        Ok(g)
    }

    /// Copy with one structure constant replaced; used to exercise the
    /// validator on broken input.
    pub fn with_perturbed_constant(&self, i: usize, j: usize, k: usize, delta: &F) -> SuperAlgebra<F> {
        let mut g = self.clone();
        let n = self.dim();
        let mut v = dense_from_sparse(&g.brackets[i * n + j], n);
        v[k] = v[k].add(delta);
        g.brackets[i * n + j] = sparse_from_dense(&v);
        g
    }

    /// Root data for the diagonal Cartan, computed once.
    pub fn root_data(&self) -> Result<&RootData<F>> {
        self.roots
            .get_or_init(|| roots::compute_root_data(self))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Structure constants as a JSON document {basis, parity, constants}.
    pub fn to_json(&self) -> serde_json::Value {
        let n = self.dim();
        let mut constants = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for (k, c) in self.bracket_basis(i, j) {
                    constants.push(serde_json::json!([i, j, k, c.to_exact_string()]));
                }
            }
        }
        serde_json::json!({
            "algebra": self.name(),
            "basis": self.labels,
            "parity": self.parity,
            "constants": constants,
        })
    }
}

fn matrix_parity<F: Field>(m: &Matrix<F>, even: usize) -> Result<Parity> {
    let mut seen: Option<Parity> = None;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if m.get(i, j).is_zero() {
                continue;
            }
            let p = Parity::from_bit(usize::from(i >= even) + usize::from(j >= even));
            match seen {
                None => seen = Some(p),
                Some(q) if q != p => {
                    return Err(Error::Parity("realization matrix is not homogeneous".into()))
                }
                _ => {}
            }
        }
    }
    seen.ok_or_else(|| Error::Construction("zero matrix in realization".into()))
}

/// Outcome of one axiom family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub passed: bool,
    pub checked: usize,
    pub violations: usize,
    /// First offending basis indices, in index order.
    pub first_violation: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub anticommutativity: AxiomCheck,
    pub parity: AxiomCheck,
    pub jacobi: AxiomCheck,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.anticommutativity.passed && self.parity.passed && self.jacobi.passed
    }

    pub fn total_violations(&self) -> usize {
        self.anticommutativity.violations + self.parity.violations + self.jacobi.violations
    }
}

fn axiom(checked: usize, bad: Vec<Vec<usize>>) -> AxiomCheck {
    AxiomCheck { passed: bad.is_empty(), checked, violations: bad.len(), first_violation: bad.into_iter().next() }
}

/// Checks super anticommutativity, parity compatibility and the super Jacobi
/// identity on all basis pairs and triples.
pub fn validate_superalgebra<F: Field>(g: &SuperAlgebra<F>) -> ValidationReport {
    let n = g.dim();
    let mut anti = Vec::new();
    let mut par = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let sign_flip = !g.parity[i].both_odd(g.parity[j]);
            let a = dense_from_sparse(g.bracket_basis(i, j), n);
            let b = dense_from_sparse(g.bracket_basis(j, i), n);
            // c[i][j] = -(-1)^{p(i)p(j)} c[j][i]
            let ok = a.iter().zip(&b).all(|(x, y)| if sign_flip { x.add(y).is_zero() } else { x.sub(y).is_zero() });
            if !ok {
                anti.push(vec![i, j]);
            }
            let want = g.parity[i].plus(g.parity[j]);
            if g.bracket_basis(i, j).iter().any(|(k, _)| g.parity[*k] != want) {
                par.push(vec![i, j]);
            }
        }
    }
    let per_i: Vec<Vec<Vec<usize>>> = map_indices(n, |i| {
        let mut bad = Vec::new();
        for j in 0..n {
            for k in 0..n {
                if !jacobi_residual(g, i, j, k).iter().all(F::is_zero) {
                    bad.push(vec![i, j, k]);
                }
            }
        }
        bad
    });
    ValidationReport {
        anticommutativity: axiom(n * n, anti),
        parity: axiom(n * n, par),
        jacobi: axiom(n * n * n, per_i.into_iter().flatten().collect()),
    }
}

/// (-1)^{p(x)p(z)}[x,[y,z]] + (-1)^{p(y)p(x)}[y,[z,x]] + (-1)^{p(z)p(y)}[z,[x,y]].
pub fn jacobi_residual<F: Field>(g: &SuperAlgebra<F>, i: usize, j: usize, k: usize) -> Vec<F> {
    let n = g.dim();
    let p = |a: usize| g.parity[a];
    let mut out = vec![F::zero(); n];
    let mut term = |a: usize, b: usize, c: usize, neg: bool| {
        let inner = g.bracket_basis(b, c);
        for (l, coef) in inner {
            for (m, c2) in g.bracket_basis(a, *l) {
                if neg {
                    out[*m].sub_mul(coef, c2);
                } else {
                    out[*m].add_mul(coef, c2);
                }
            }
        }
    };
    term(i, j, k, p(i).both_odd(p(k)));
    term(j, k, i, p(j).both_odd(p(i)));
    term(k, i, j, p(k).both_odd(p(j)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rational;

    #[test]
    fn parity_arithmetic() {
        assert_eq!(Parity::Odd.plus(Parity::Odd), Parity::Even);
        assert!(Parity::Odd.both_odd(Parity::Odd));
        assert!(!Parity::Odd.both_odd(Parity::Even));
    }

    #[test]
    fn abelian_algebra_center_is_everything() {
        let g = SuperAlgebra::<Rational>::from_structure_constants(
            vec!["a".into(), "b".into()],
            vec![Parity::Even, Parity::Even],
            vec![Vec::new(); 4],
        )
        .unwrap();
        assert_eq!(g.center().len(), 2);
        assert!(validate_superalgebra(&g).passed());
        assert!(!g.is_perfect());
    }
}
