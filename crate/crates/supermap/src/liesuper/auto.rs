use super::SuperAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{span, unit_vector, Echelon, Matrix};
use crate::scalars::{root_in, Field};

/// A finite-order automorphism; column j of `matrix` is the image of x_j.
#[derive(Debug, Clone, PartialEq)]
pub struct Automorphism<F> {
    matrix: Matrix<F>,
    order: u64,
}

pub fn automorphism_from_matrix<F: Field>(
    g: &SuperAlgebra<F>,
    images: Matrix<F>,
    claimed_order: u64,
) -> Result<Automorphism<F>> {
    let n = g.dim();
    if images.rows() != n || images.cols() != n {
        return Err(Error::Dimension(format!("automorphism must be {n}x{n}")));
    }
    if claimed_order == 0 {
        return Err(Error::Order("order must be positive".into()));
    }
    for j in 0..n {
        for i in 0..n {
            if !images.get(i, j).is_zero() && g.parity(i) != g.parity(j) {
                return Err(Error::Parity(format!("image of {} is not of its parity", g.labels()[j])));
            }
        }
    }
    let cols: Vec<Vec<F>> = (0..n).map(|j| images.column(j)).collect();
    for i in 0..n {
        for j in 0..n {
            let lhs = images.mul_vec(&g.bracket(&unit_vector(n, i), &unit_vector(n, j)));
            if lhs != g.bracket(&cols[i], &cols[j]) {
                return Err(Error::Bracket(format!(
                    "[{}, {}] is not preserved",
                    g.labels()[i],
                    g.labels()[j]
                )));
            }
        }
    }
    if !images.pow(claimed_order).is_identity() {
        return Err(Error::Order(format!("matrix^{claimed_order} is not the identity")));
    }
    Ok(Automorphism { matrix: images, order: claimed_order })
}

impl<F: Field> Automorphism<F> {
    pub fn identity(g: &SuperAlgebra<F>) -> Self {
        Automorphism { matrix: Matrix::identity(g.dim()), order: 1 }
    }

    /// Conjugation x ↦ D x D⁻¹ through the matrix realization.
    pub fn conjugation(g: &SuperAlgebra<F>, d: &Matrix<F>, claimed_order: u64) -> Result<Self> {
        let real = g
            .realization()
            .ok_or_else(|| Error::Precondition(format!("{} has no matrix realization", g.name())))?;
        let dinv = d.inverse()?;
        let cols: Vec<Vec<F>> = real
            .matrices
            .iter()
            .map(|x| {
                real.coords(&d.mul(x).mul(&dinv))
                    .ok_or_else(|| Error::Bracket("conjugate leaves the algebra".into()))
            })
            .collect::<Result<_>>()?;
        automorphism_from_matrix(g, Matrix::from_columns(&cols, g.dim()), claimed_order)
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        self.matrix.mul_vec(v)
    }

    pub fn compose(&self, o: &Self) -> Self {
        let order = num_integer::lcm(self.order, o.order);
        Automorphism { matrix: self.matrix.mul(&o.matrix), order }
    }

    /// g = ⊕_k g_k with g_k the ζ^k-eigenspace, ζ a primitive root of unity
    /// of the automorphism's order. Only nonzero pieces are listed.
    pub fn eigenspaces(&self) -> Result<Vec<(u64, Vec<Vec<F>>)>> {
        let n = self.matrix.rows();
        let m = self.order;
        let powers: Vec<Matrix<F>> = (0..m).map(|j| self.matrix.pow(j)).collect();
        let scale = F::from_i64(m as i64).inv()?;
        let mut out = Vec::new();
        for k in 0..m {
            let mut p = Matrix::zeros(n, n);
            for (j, pw) in powers.iter().enumerate() {
                let c = root_in::<F>(m, -((j as u64 * k) as i64))?;
                p.add_scaled(&c.mul(&scale), pw);
            }
            let basis = span(n, (0..n).map(|c| p.column(c)));
            if !basis.is_empty() {
                out.push((k, basis));
            }
        }
        Ok(out)
    }

    /// Checks [g_a, g_b] ⊆ g_{a+b} on all pairs of eigenvectors.
    pub fn eigenspaces_compatible(&self, g: &SuperAlgebra<F>) -> Result<bool> {
        let spaces = self.eigenspaces()?;
        let n = g.dim();
        let m = self.order;
        let echs: Vec<(u64, Echelon<F>)> =
            spaces.iter().map(|(k, b)| (*k, Echelon::from_vectors(n, b.iter().cloned()))).collect();
        for (a, ba) in &spaces {
            for (b, bb) in &spaces {
                let target = (a + b) % m;
                let ech = echs.iter().find(|(k, _)| *k == target).map(|(_, e)| e);
                for x in ba {
                    for y in bb {
                        let z = g.bracket(x, y);
                        let ok = match ech {
                            Some(e) => e.contains(&z),
                            None => z.iter().all(F::is_zero),
                        };
                        if !ok {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liesuper::construct_basic;
    use crate::scalars::Rational;

    fn sl21() -> SuperAlgebra<Rational> {
        construct_basic("sl", &[2, 1]).unwrap()
    }

    #[test]
    fn identity_has_one_piece() {
        let g = sl21();
        let a = automorphism_from_matrix(&g, Matrix::identity(8), 1).unwrap();
        let sp = a.eigenspaces().unwrap();
        assert_eq!(sp.len(), 1);
        assert_eq!(sp[0].1.len(), 8);
    }

    #[test]
    fn diagonal_conjugation_splits_evenly() {
        let g = sl21();
        let d = Matrix::diagonal(&[1, -1, 1].map(Rational::integer));
        let a = Automorphism::conjugation(&g, &d, 2).unwrap();
        let dims: Vec<usize> = a.eigenspaces().unwrap().iter().map(|(_, b)| b.len()).collect();
        assert_eq!(dims, vec![4, 4]);
        assert!(a.eigenspaces_compatible(&g).unwrap());
    }

    #[test]
    fn violations_have_distinct_errors() {
        let g = sl21();
        let mut m = Matrix::identity(8);
        m.set(0, 7, Rational::one());
        assert!(matches!(automorphism_from_matrix(&g, m, 1), Err(Error::Parity(_))));
        let mut m = Matrix::identity(8);
        m.set(0, 0, Rational::integer(2));
        assert!(matches!(automorphism_from_matrix(&g, m, 1), Err(Error::Bracket(_))));
        let d = Matrix::diagonal(&[1, -1, 1].map(Rational::integer));
        assert!(matches!(Automorphism::conjugation(&g, &d, 3), Err(Error::Order(_))));
    }
}
