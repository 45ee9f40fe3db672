//! Dense exact linear algebra over any [`Field`].

use std::fmt;

use crate::error::{Error, Result};
use crate::par::{if_rayon, map_indices};
use crate::scalars::Field;

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix { rows: r, cols, data }
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<F>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn diagonal(entries: &[F]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in entries.iter().enumerate() {
            m.data[i * n + i] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entry_mut(&mut self, r: usize, c: usize) -> &mut F {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn data(&self) -> &[F] {
        &self.data
    }

    pub fn into_data(self) -> Vec<F> {
        self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn nonzeros(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &F) -> Self {
        let data = self.data.iter().map(|a| a.mul(s)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        let data = self.data.iter().map(F::neg).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// `self += s * o`.
    pub fn add_scaled(&mut self, s: &F, o: &Self) {
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&o.data) {
            a.add_mul(s, b);
        }
    }

    pub fn trace(&self) -> F {
        let mut t = F::zero();
        for i in 0..self.rows.min(self.cols) {
            t = t.add(self.get(i, i));
        }
        t
    }

    /// trace(self * o) without forming the product.
    pub fn trace_of_product(&self, o: &Self) -> F {
        assert_eq!(self.cols, o.rows);
        assert_eq!(self.rows, o.cols);
        let mut t = F::zero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                t.add_mul(self.get(i, k), o.get(k, i));
            }
        }
        t
    }

    fn product_row(&self, o: &Self, i: usize) -> Vec<F> {
        let mut out = vec![F::zero(); o.cols];
        for k in 0..self.cols {
            let a = self.get(i, k);
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.row(k).iter().enumerate() {
                out[j].add_mul(a, b);
            }
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape mismatch");
        let rows = map_indices(self.rows, |i| self.product_row(o, i));
        let mut data = Vec::with_capacity(self.rows * o.cols);
        for r in rows {
            data.extend(r);
        }
        Matrix { rows: self.rows, cols: o.cols, data }
    }

    /// Product computed on the calling thread only.
    pub fn mul_seq(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape mismatch");
        let mut data = Vec::with_capacity(self.rows * o.cols);
        for i in 0..self.rows {
            data.extend(self.product_row(o, i));
        }
        Matrix { rows: self.rows, cols: o.cols, data }
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    acc.add_mul(a, b);
                }
                acc
            })
            .collect()
    }

    /// Super commutator `self*o - sign * o*self`.
    pub fn bracket(&self, o: &Self, anti: bool) -> Self {
        let ab = self.mul_seq(o);
        let ba = o.mul_seq(self);
        if anti {
            ab.add(&ba)
        } else {
            ab.sub(&ba)
        }
    }

    pub fn kron(&self, o: &Self) -> Self {
        let (r, c) = (self.rows * o.rows, self.cols * o.cols);
        let mut m = Self::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        let b = o.get(k, l);
                        if !b.is_zero() {
                            m.data[(i * o.rows + k) * c + j * o.cols + l] = a.mul(b);
                        }
                    }
                }
            }
        }
        m
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.data[a * cols.len() + b] = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        rref(self.to_rows(), self.cols).1.len()
    }

    /// Basis of the right null space.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        kernel_of_rows(self.to_rows(), self.cols)
    }

    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        solve_rows(self.to_rows(), self.cols, b)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let rows: Vec<Vec<F>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
                r
            })
            .collect();
        let (red, piv) = rref(rows, 2 * n);
        if piv.len() < n || piv[n - 1] >= n {
            return Err(Error::DivisionByZero);
        }
        Ok(Matrix::from_rows(red.into_iter().map(|r| r[n..].to_vec()).collect(), n))
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let r: Vec<String> = row.iter().map(|x| format!("{x:?}")).collect();
            writeln!(f, "  {}", r.join(" "))?;
        }
        Ok(())
    }
}

fn eliminate_column<F: Field>(rows: &mut [Vec<F>], pivot_row: &[F], col: usize, skip: usize) {
    let apply = |(i, r): (usize, &mut Vec<F>)| {
        if i == skip || r[col].is_zero() {
            return;
        }
        let f = r[col].clone();
        for (x, p) in r.iter_mut().zip(pivot_row).skip(col) {
            x.sub_mul(&f, p);
        }
    };
    if_rayon!(
        {
            use rayon::prelude::*;
            if rows.len() > 16 {
                rows.par_iter_mut().enumerate().for_each(apply);
            } else {
                rows.iter_mut().enumerate().for_each(apply);
            }
        },
        rows.iter_mut().enumerate().for_each(apply)
    )
}

/// Reduced row echelon form. Returns the nonzero reduced rows and their
/// pivot columns (increasing).
pub fn rref<F: Field>(mut rows: Vec<Vec<F>>, cols: usize) -> (Vec<Vec<F>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for x in rows[r].iter_mut().skip(c) {
                *x = x.mul(&inv);
            }
        }
        let pivot_row = rows[r].clone();
        eliminate_column(&mut rows, &pivot_row, c, r);
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn kernel_of_rows<F: Field>(rows: Vec<Vec<F>>, cols: usize) -> Vec<Vec<F>> {
    let (red, piv) = rref(rows, cols);
    let mut is_pivot = vec![false; cols];
    for &p in &piv {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![F::zero(); cols];
        v[free] = F::one();
        for (row, &p) in red.iter().zip(&piv) {
            if !row[free].is_zero() {
                v[p] = row[free].neg();
            }
        }
        out.push(v);
    }
    out
}

pub fn solve_rows<F: Field>(rows: Vec<Vec<F>>, cols: usize, b: &[F]) -> Option<Vec<F>> {
    assert_eq!(rows.len(), b.len());
    let aug: Vec<Vec<F>> = rows
        .into_iter()
        .zip(b)
        .map(|(mut r, x)| {
            r.push(x.clone());
            r
        })
        .collect();
    let (red, piv) = rref(aug, cols + 1);
    if piv.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![F::zero(); cols];
    for (row, &p) in red.iter().zip(&piv) {
        x[p] = row[cols].clone();
    }
    Some(x)
}

/// Incrementally maintained reduced echelon basis of a subspace of F^n.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    dim: usize,
    rows: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Echelon<F> {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_vectors(dim: usize, vs: impl IntoIterator<Item = Vec<F>>) -> Self {
        let mut e = Self::new(dim);
        for v in vs {
            e.insert(v);
        }
        e
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<F>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of `v` after subtracting its projection along the basis.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.dim);
        let coeffs: Vec<(usize, F)> = self
            .pivots
            .iter()
            .enumerate()
            .filter(|(_, &p)| !v[p].is_zero())
            .map(|(i, &p)| (i, v[p].clone()))
            .collect();
        if coeffs.is_empty() {
            return v.to_vec();
        }
        let col = |j: usize| {
            let mut x = v[j].clone();
            for (i, c) in &coeffs {
                x.sub_mul(c, &self.rows[*i][j]);
            }
            x
        };
        if self.dim * coeffs.len() > 4096 {
            map_indices(self.dim, col)
        } else {
            (0..self.dim).map(col).collect()
        }
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(F::is_zero)
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: Vec<F>) -> bool {
        let r = self.reduce(&v);
        self.insert_reduced(r)
    }

    /// Adds an already reduced vector.
    pub fn insert_reduced(&mut self, mut r: Vec<F>) -> bool {
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for x in r.iter_mut().skip(p) {
                *x = x.mul(&inv);
            }
        }
        let skip = self.rows.len();
        eliminate_column(&mut self.rows, &r, p, skip);
        self.rows.push(r);
        self.pivots.push(p);
        true
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the span.
    pub fn coords(&self, v: &[F]) -> Option<Vec<F>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// The basis sorted by pivot, i.e. the reduced row echelon form.
    pub fn into_rref(self) -> (Vec<Vec<F>>, Vec<usize>) {
        let mut idx: Vec<usize> = (0..self.rows.len()).collect();
        idx.sort_by_key(|&i| self.pivots[i]);
        let pivots = idx.iter().map(|&i| self.pivots[i]).collect();
        let mut rows: Vec<Option<Vec<F>>> = self.rows.into_iter().map(Some).collect();
        let rows = idx.iter().map(|&i| rows[i].take().unwrap()).collect();
        (rows, pivots)
    }
}

/// Reduced echelon basis of the span of `vs`.
pub fn span<F: Field>(dim: usize, vs: impl IntoIterator<Item = Vec<F>>) -> Vec<Vec<F>> {
    Echelon::from_vectors(dim, vs).into_rref().0
}

pub fn same_span<F: Field>(dim: usize, a: &[Vec<F>], b: &[Vec<F>]) -> bool {
    span(dim, a.iter().cloned()) == span(dim, b.iter().cloned())
}

pub fn vec_is_zero<F: Field>(v: &[F]) -> bool {
    v.iter().all(F::is_zero)
}

pub fn vec_add<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn vec_sub<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn vec_scale<F: Field>(a: &[F], s: &F) -> Vec<F> {
    a.iter().map(|x| x.mul(s)).collect()
}

pub fn unit_vector<F: Field>(n: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[i] = F::one();
    v
}

/// Coordinates against a fixed list of independent vectors.
#[derive(Clone, Debug)]
pub struct Coordinates<F> {
    basis: Vec<Vec<F>>,
    rows: Vec<usize>,
    inv: Matrix<F>,
}

impl<F: Field> Coordinates<F> {
    pub fn new(dim: usize, basis: Vec<Vec<F>>) -> Result<Self> {
        let (_, rows) = rref(basis.clone(), dim);
        if rows.len() != basis.len() {
            return Err(Error::Dimension("basis vectors are linearly dependent".into()));
        }
        let b = Matrix::from_columns(&basis, dim);
        let inv = b.select(&rows, &(0..basis.len()).collect::<Vec<_>>()).inverse()?;
        Ok(Coordinates { basis, rows, inv })
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    /// Coordinates of `v`, or `None` when `v` is outside the span.
    pub fn coords(&self, v: &[F]) -> Option<Vec<F>> {
        let rhs: Vec<F> = self.rows.iter().map(|&r| v[r].clone()).collect();
        let c = self.inv.mul_vec(&rhs);
        (self.combine(&c) == v).then_some(c)
    }

    pub fn combine(&self, c: &[F]) -> Vec<F> {
        let dim = self.basis.first().map_or(0, Vec::len);
        let mut out = vec![F::zero(); dim];
        for (x, b) in c.iter().zip(&self.basis) {
            if x.is_zero() {
                continue;
            }
            for (o, y) in out.iter_mut().zip(b) {
                o.add_mul(x, y);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rational;

    fn q(n: i64) -> Rational {
        Rational::integer(n)
    }

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        let c = rows[0].len();
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect(), c)
    }

    #[test]
    fn rank_kernel_solve() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(vec_is_zero(&a.mul_vec(&k[0])));
        let b = vec![q(4), q(8), q(2)];
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        assert!(a.solve(&[q(1), q(0), q(0)]).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[7, 4]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn echelon_membership_and_coords() {
        let mut e = Echelon::new(3);
        assert!(e.insert(vec![q(1), q(1), q(0)]));
        assert!(e.insert(vec![q(0), q(1), q(1)]));
        assert!(!e.insert(vec![q(1), q(2), q(1)]));
        assert_eq!(e.len(), 2);
        let v = vec![q(2), q(5), q(3)];
        let c = e.coords(&v).unwrap();
        let mut w = vec![q(0); 3];
        for (row, x) in e.rows().iter().zip(&c) {
            w = vec_add(&w, &vec_scale(row, x));
        }
        assert_eq!(w, v);
        assert!(e.coords(&[q(0), q(0), q(1)]).is_some() == e.contains(&[q(0), q(0), q(1)]));
    }

    #[test]
    fn kron_and_trace() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let i = Matrix::<Rational>::identity(2);
        let k = a.kron(&i);
        assert_eq!(k.rows(), 4);
        assert_eq!(k.trace(), q(10));
        assert_eq!(a.trace_of_product(&a), a.mul(&a).trace());
    }

    #[test]
    fn sequential_and_parallel_products_agree() {
        let a = m(&[&[1, -2, 0, 5], &[3, 4, 1, 0], &[0, 0, 2, 1]]);
        let b = m(&[&[1, 0], &[2, 1], &[0, 3], &[1, 1]]);
        crate::par::set_parallel(false);
        let s = a.mul(&b);
        crate::par::set_parallel(true);
        assert_eq!(s, a.mul(&b));
        assert_eq!(s, a.mul_seq(&b));
    }
}
