//! Finite-dimensional modules over Lie superalgebras: construction,
//! validation, sub- and quotient modules, and serialization.

mod envelope;
mod kac;
mod weights;

use std::sync::Arc;

use serde::Serialize;

pub use envelope::{envelope, irreducible_quotient, is_irreducible, lie_generators, Certificate, IrreducibleQuotient, ENVELOPE_LIMIT};
pub use kac::{kac_module, kac_setup, KacInduction, KacSetup};
pub use weights::{
    annihilator_ideal, annihilator_in_algebra, decompose, highest_weight_data, highest_weight_radical, isomorphic,
    intertwiner, weight_csv, weight_table, weights, AnnihilatorIdeal, HighestWeightData,
};

use crate::error::{Error, Result};
use crate::liesuper::{Parity, SuperAlgebra};
use crate::linalg::{Echelon, Matrix};
use crate::coordalg::Point;
use crate::mapalg::MapAlgebra;
use crate::par::map_indices;
use crate::scalars::Field;

/// Cartan and raising data used to read weights off a module.
#[derive(Debug, Clone)]
pub struct WeightFrame<F> {
    /// Basis of h ⊗ 1 in algebra coordinates.
    pub h_unit: Vec<Vec<F>>,
    pub unit_labels: Vec<String>,
    /// Basis of h ⊗ A/I (the domain of ψ).
    pub h_full: Vec<Vec<F>>,
    pub h_labels: Vec<String>,
    /// Basis of n⁺ ⊗ A/I.
    pub raising: Vec<Vec<F>>,
}

fn unit<F: Field>(n: usize, i: usize) -> Vec<F> {
    crate::linalg::unit_vector(n, i)
}

impl<F: Field> WeightFrame<F> {
    pub fn for_lie(g: &SuperAlgebra<F>) -> Result<Self> {
        let rd = g.root_data()?;
        let n = g.dim();
        let h: Vec<Vec<F>> = g.cartan().iter().map(|&c| unit(n, c)).collect();
        Ok(WeightFrame {
            unit_labels: g.cartan().iter().map(|&c| g.labels()[c].clone()).collect(),
            h_unit: h.clone(),
            h_full: h,
            h_labels: g.cartan().iter().map(|&c| g.labels()[c].clone()).collect(),
            raising: rd.n_plus().into_iter().map(|i| unit(n, i)).collect(),
        })
    }

    pub fn for_map(m: &MapAlgebra<F>) -> Result<Self> {
        let g = m.target();
        let a = m.coefficients();
        let rd = g.root_data()?;
        let (n, dg, da) = (m.dim(), g.dim(), a.dim());
        let one = a.unit();
        let h_unit = g.cartan().iter().map(|&c| m.tensor(&unit(dg, c), &one)).collect();
        let mut h_full = Vec::new();
        let mut h_labels = Vec::new();
        for &c in g.cartan() {
            for j in 0..da {
                h_full.push(unit(n, m.index(c, j)));
                h_labels.push(m.algebra().labels()[m.index(c, j)].clone());
            }
        }
        let raising = rd.n_plus().into_iter().flat_map(|i| (0..da).map(move |j| (i, j))).map(|(i, j)| unit(n, m.index(i, j))).collect();
        let unit_labels = g.cartan().iter().map(|&c| g.labels()[c].clone()).collect();
        Ok(WeightFrame { h_unit, unit_labels, h_full, h_labels, raising })
    }
}

/// Outcome of the super bracket-compatibility check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuleCheck {
    pub passed: bool,
    pub checked: usize,
    pub violations: usize,
    pub first_violation: Option<(usize, usize)>,
}

/// A finite-dimensional module: one exact matrix per basis element of the
/// acting algebra.
#[derive(Debug, Clone)]
pub struct Module<F> {
    algebra: Arc<SuperAlgebra<F>>,
    parity: Vec<Parity>,
    action: Vec<Matrix<F>>,
    frame: Option<Arc<WeightFrame<F>>>,
    name: String,
}

type SparseRows<F> = Vec<Vec<(usize, F)>>;

fn sparse_rows<F: Field>(m: &Matrix<F>) -> SparseRows<F> {
    (0..m.rows())
        .map(|r| m.row(r).iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(c, x)| (c, x.clone())).collect())
        .collect()
}

/// out += s · a b
fn add_product<F: Field>(out: &mut Matrix<F>, a: &SparseRows<F>, b: &SparseRows<F>, s: &F) {
    for (r, row) in a.iter().enumerate() {
        for (k, x) in row {
            let sx = x.mul(s);
            for (c, y) in &b[*k] {
                out.entry_mut(r, *c).add_mul(&sx, y);
            }
        }
    }
}

impl<F: Field> Module<F> {
    /// Builds and validates a module.
    pub fn new(algebra: Arc<SuperAlgebra<F>>, parity: Vec<Parity>, action: Vec<Matrix<F>>) -> Result<Self> {
        let v = Module { algebra, parity, action, frame: None, name: "module".into() };
        v.check_shape()?;
        let check = v.check_brackets();
        if !check.passed {
            let (i, j) = check.first_violation.expect("violation recorded");
            return Err(Error::Bracket(format!(
                "action fails on [{}, {}] ({} violations)",
                v.algebra.labels()[i],
                v.algebra.labels()[j],
                check.violations
            )));
        }
        Ok(v)
    }

    fn check_shape(&self) -> Result<()> {
        let d = self.parity.len();
        if self.action.len() != self.algebra.dim() {
            return Err(Error::Dimension(format!(
                "{} action matrices for an algebra of dimension {}",
                self.action.len(),
                self.algebra.dim()
            )));
        }
        for (i, m) in self.action.iter().enumerate() {
            if m.rows() != d || m.cols() != d {
                return Err(Error::Dimension(format!("action matrix {i} is not {d}×{d}")));
            }
            let p = self.algebra.parity(i);
            for r in 0..d {
                for c in 0..d {
                    if !m.get(r, c).is_zero() && self.parity[r] != self.parity[c].plus(p) {
                        return Err(Error::Parity(format!(
                            "{} does not act with parity {:?}",
                            self.algebra.labels()[i],
                            p
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// ρ([x_i, x_j]) = ρ(x_i)ρ(x_j) − (−1)^{p_i p_j} ρ(x_j)ρ(x_i) on every
    /// ordered pair of basis elements.
    pub fn check_brackets(&self) -> ModuleCheck {
        let n = self.algebra.dim();
        let d = self.dim();
        let sparse: Vec<SparseRows<F>> = self.action.iter().map(sparse_rows).collect();
        let per_row: Vec<(usize, Option<(usize, usize)>)> = map_indices(n, |i| {
            let mut count = 0usize;
            let mut first = None;
            for j in 0..n {
                let mut out = Matrix::zeros(d, d);
                for (k, c) in self.algebra.bracket_basis(i, j) {
                    out.add_scaled(&c.neg(), &self.action[*k]);
                }
                add_product(&mut out, &sparse[i], &sparse[j], &F::one());
                let s = if self.algebra.parity(i).both_odd(self.algebra.parity(j)) { F::one() } else { F::one().neg() };
                add_product(&mut out, &sparse[j], &sparse[i], &s);
                if !out.is_zero() {
                    count += 1;
                    first.get_or_insert((i, j));
                }
            }
            (count, first)
        });
        let violations = per_row.iter().map(|(c, _)| c).sum();
        let first_violation = per_row.into_iter().find_map(|(_, f)| f);
        ModuleCheck { passed: violations == 0, checked: n * n, violations, first_violation }
    }

    pub fn with_frame(mut self, frame: Arc<WeightFrame<F>>) -> Self {
        self.frame = Some(frame);
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn algebra(&self) -> &Arc<SuperAlgebra<F>> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.parity.len()
    }

    pub fn even_dim(&self) -> usize {
        self.parity.iter().filter(|p| !p.is_odd()).count()
    }

    pub fn odd_dim(&self) -> usize {
        self.dim() - self.even_dim()
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parity[i]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parity
    }

    pub fn action(&self, i: usize) -> &Matrix<F> {
        &self.action[i]
    }

    pub fn actions(&self) -> &[Matrix<F>] {
        &self.action
    }

    pub fn frame(&self) -> Option<&Arc<WeightFrame<F>>> {
        self.frame.as_ref()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// ρ(x) for x in algebra coordinates.
    pub fn act(&self, x: &[F]) -> Matrix<F> {
        let d = self.dim();
        let mut out = Matrix::zeros(d, d);
        for (c, m) in x.iter().zip(&self.action) {
            if !c.is_zero() {
                out.add_scaled(c, m);
            }
        }
        out
    }

    fn same_algebra(&self, o: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &o.algebra) || self.algebra.labels() == o.algebra.labels() {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "modules over different algebras ({} and {})",
                self.algebra.name(),
                o.algebra.name()
            )))
        }
    }

    /// The submodule generated by `vectors`, as a reduced echelon basis.
    pub fn spin(&self, vectors: &[Vec<F>]) -> Echelon<F> {
        let mut ech = Echelon::new(self.dim());
        let mut queue = Vec::new();
        for v in vectors {
            let r = ech.reduce(v);
            if ech.insert_reduced(r.clone()) {
                queue.push(r);
            }
        }
        while let Some(v) = queue.pop() {
            for m in &self.action {
                let r = ech.reduce(&m.mul_vec(&v));
                if ech.insert_reduced(r.clone()) {
                    queue.push(r);
                }
            }
        }
        ech
    }

    fn invariant(&self, ech: &Echelon<F>) -> bool {
        ech.rows().iter().all(|v| self.action.iter().all(|m| ech.contains(&m.mul_vec(v))))
    }

    fn row_parity(&self, v: &[F]) -> Result<Parity> {
        let mut p = None;
        for (i, x) in v.iter().enumerate() {
            if !x.is_zero() {
                match p {
                    None => p = Some(self.parity[i]),
                    Some(q) if q != self.parity[i] => {
                        return Err(Error::Parity("subspace is not spanned by homogeneous vectors".into()))
                    }
                    _ => {}
                }
            }
        }
        p.ok_or_else(|| Error::Precondition("zero basis vector".into()))
    }

    /// The submodule spanned by `basis`, in its reduced echelon basis.
    pub fn submodule(&self, basis: &[Vec<F>]) -> Result<Module<F>> {
        let ech = Echelon::from_vectors(self.dim(), basis.iter().cloned());
        if !self.invariant(&ech) {
            return Err(Error::Precondition("subspace is not a submodule".into()));
        }
        let (rows, _) = ech.clone().into_rref();
        let ech = Echelon::from_vectors(self.dim(), rows.iter().cloned());
        let parity = rows.iter().map(|v| self.row_parity(v)).collect::<Result<Vec<_>>>()?;
        let k = rows.len();
        let action = self
            .action
            .iter()
            .map(|m| {
                let cols: Vec<Vec<F>> =
                    rows.iter().map(|v| ech.coords(&m.mul_vec(v)).expect("invariant subspace")).collect();
                Matrix::from_columns(&cols, k)
            })
            .collect();
        Ok(self.derived(parity, action, "sub"))
    }

    /// V/N, on the standard basis vectors that are not pivots of N. Returns
    /// the quotient and the kept indices.
    pub fn quotient(&self, sub: &[Vec<F>]) -> Result<(Module<F>, Vec<usize>)> {
        let d = self.dim();
        let ech = Echelon::from_vectors(d, sub.iter().cloned());
        if !self.invariant(&ech) {
            return Err(Error::Precondition("subspace is not a submodule".into()));
        }
        for v in ech.rows() {
            self.row_parity(v)?;
        }
        let keep: Vec<usize> = (0..d).filter(|i| !ech.pivots().contains(i)).collect();
        let action = self
            .action
            .iter()
            .map(|m| {
                let cols: Vec<Vec<F>> = keep
                    .iter()
                    .map(|&j| {
                        let r = ech.reduce(&m.column(j));
                        keep.iter().map(|&i| r[i].clone()).collect()
                    })
                    .collect();
                Matrix::from_columns(&cols, keep.len())
            })
            .collect();
        let parity = keep.iter().map(|&i| self.parity[i]).collect();
        Ok((self.derived(parity, action, "quotient"), keep))
    }

    /// A module on the same algebra whose action is known to be valid.
    fn derived(&self, parity: Vec<Parity>, action: Vec<Matrix<F>>, tag: &str) -> Module<F> {
        Module { algebra: self.algebra.clone(), parity, action, frame: self.frame.clone(), name: format!("{tag}({})", self.name) }
    }

    pub fn parity_shift(&self) -> Module<F> {
        let parity = self.parity.iter().map(|p| p.plus(Parity::Odd)).collect();
        self.derived(parity, self.action.clone(), "shift")
    }

    /// Serialization with exact scalar strings.
    pub fn to_json(&self) -> serde_json::Value {
        let mats: Vec<Vec<Vec<String>>> = self
            .action
            .iter()
            .map(|m| m.to_rows().iter().map(|r| r.iter().map(Field::to_exact_string).collect()).collect())
            .collect();
        serde_json::json!({
            "name": self.name,
            "algebra_ref": self.algebra.name(),
            "dim": self.dim(),
            "parity": self.parity,
            "action_matrices": mats,
        })
    }
}

/// The defining module of a matrix-realized algebra.
pub fn natural_module<F: Field>(g: &Arc<SuperAlgebra<F>>) -> Result<Module<F>> {
    let real = g
        .realization()
        .ok_or_else(|| Error::Unsupported(format!("{} has no matrix realization", g.name())))?;
    let parity = (0..real.size()).map(|i| real.space_parity(i)).collect();
    let mut v = Module::new(g.clone(), parity, real.matrices.clone())?.with_name(format!("natural {}", g.name()));
    if let Ok(f) = WeightFrame::for_lie(g) {
        v = v.with_frame(Arc::new(f));
    }
    Ok(v)
}

pub fn trivial_module<F: Field>(algebra: &Arc<SuperAlgebra<F>>) -> Module<F> {
    let action = vec![Matrix::zeros(1, 1); algebra.dim()];
    Module { algebra: algebra.clone(), parity: vec![Parity::Even], action, frame: None, name: "trivial".into() }
}

/// The one-dimensional even module with x_i acting by `theta[i]`.
pub fn one_dim_module<F: Field>(algebra: &Arc<SuperAlgebra<F>>, theta: &[F]) -> Result<Module<F>> {
    if theta.len() != algebra.dim() {
        return Err(Error::Dimension("functional has the wrong length".into()));
    }
    if let Some(i) = (0..theta.len()).find(|&i| algebra.parity(i).is_odd() && !theta[i].is_zero()) {
        return Err(Error::Bracket(format!("functional is nonzero on the odd element {}", algebra.labels()[i])));
    }
    let action = theta.iter().map(|t| Matrix::from_flat(1, 1, vec![t.clone()])).collect();
    let v = Module::new(algebra.clone(), vec![Parity::Even], action)
        .map_err(|_| Error::Bracket("functional is nonzero on a commutator".into()))?;
    Ok(v.with_name("one-dimensional"))
}

pub fn direct_sum<F: Field>(v: &Module<F>, w: &Module<F>) -> Result<Module<F>> {
    v.same_algebra(w)?;
    let (a, b) = (v.dim(), w.dim());
    let action = v
        .action
        .iter()
        .zip(&w.action)
        .map(|(x, y)| {
            let mut m = Matrix::zeros(a + b, a + b);
            for r in 0..a {
                for c in 0..a {
                    m.set(r, c, x.get(r, c).clone());
                }
            }
            for r in 0..b {
                for c in 0..b {
                    m.set(a + r, a + c, y.get(r, c).clone());
                }
            }
            m
        })
        .collect();
    let parity = v.parity.iter().chain(&w.parity).copied().collect();
    let out = Module::new(v.algebra.clone(), parity, action)?;
    Ok(Module { frame: v.frame.clone(), name: format!("{} ⊕ {}", v.name, w.name), ..out })
}

/// V ⊗ W with x(v ⊗ w) = xv ⊗ w + (−1)^{p(x)p(v)} v ⊗ xw, basis index
/// `a * dim W + b`.
pub fn tensor_product<F: Field>(v: &Module<F>, w: &Module<F>) -> Result<Module<F>> {
    v.same_algebra(w)?;
    let id_w = Matrix::identity(w.dim());
    let signs: Vec<F> = v.parity.iter().map(|p| if p.is_odd() { F::one().neg() } else { F::one() }).collect();
    let sign_v = Matrix::diagonal(&signs);
    let id_v = Matrix::identity(v.dim());
    let action = (0..v.algebra.dim())
        .map(|i| {
            let left = v.action[i].kron(&id_w);
            let s = if v.algebra.parity(i).is_odd() { &sign_v } else { &id_v };
            left.add(&s.kron(&w.action[i]))
        })
        .collect();
    let parity = v.parity.iter().flat_map(|p| w.parity.iter().map(move |q| p.plus(*q))).collect();
    let out = Module::new(v.algebra.clone(), parity, action)?;
    Ok(Module { frame: v.frame.clone().or_else(|| w.frame.clone()), name: format!("{} ⊗ {}", v.name, w.name), ..out })
}

/// The source algebra acting through `phi` (dim V.algebra × dim source,
/// columns are images of the source basis).
pub fn pullback<F: Field>(v: &Module<F>, source: &Arc<SuperAlgebra<F>>, phi: &Matrix<F>) -> Result<Module<F>> {
    if phi.rows() != v.algebra.dim() || phi.cols() != source.dim() {
        return Err(Error::Dimension(format!(
            "map is {}×{}, expected {}×{}",
            phi.rows(),
            phi.cols(),
            v.algebra.dim(),
            source.dim()
        )));
    }
    let action = (0..source.dim()).map(|j| v.act(&phi.column(j))).collect();
    let out = Module::new(source.clone(), v.parity.clone(), action)?;
    Ok(out.with_name(format!("pullback({})", v.name)))
}

/// The adjoint module of an algebra.
pub fn adjoint_module<F: Field>(algebra: &Arc<SuperAlgebra<F>>) -> Result<Module<F>> {
    let action = (0..algebra.dim()).map(|i| algebra.ad(i)).collect();
    Ok(Module::new(algebra.clone(), algebra.parities().to_vec(), action)?.with_name(format!("ad {}", algebra.name())))
}

/// ⊗_p ev_p^*(V_p) over g ⊗ A/I, each V_p a g-module pulled back along
/// evaluation at p. No assignments gives the trivial module.
pub fn evaluation_module<F: Field>(m: &MapAlgebra<F>, assignments: &[(Point<F>, Module<F>)]) -> Result<Module<F>> {
    let a = m.coefficients();
    let g = m.target();
    let dg = g.dim();
    let mut out: Option<Module<F>> = None;
    for (p, v) in assignments {
        if v.algebra().labels() != g.labels() {
            return Err(Error::Dimension(format!("{} is not a module over {}", v.name(), g.name())));
        }
        let b = a.block_index(p)?;
        let start = a.point_blocks()[b].start;
        let mut phi = Matrix::zeros(dg, m.dim());
        for u in 0..dg {
            phi.set(u, m.index(u, start), F::one());
        }
        let e = pullback(v, m.algebra(), &phi)?;
        out = Some(match out {
            None => e,
            Some(w) => tensor_product(&w, &e)?,
        });
    }
    let names: Vec<String> = assignments.iter().map(|(p, v)| format!("{}@{p}", v.name())).collect();
    let mut v = out.unwrap_or_else(|| trivial_module(m.algebra()));
    if let Ok(f) = WeightFrame::for_map(m) {
        v = v.with_frame(Arc::new(f));
    }
    Ok(v.with_name(if names.is_empty() { "trivial".into() } else { format!("ev[{}]", names.join(", ")) }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liesuper::construct_basic;
    use crate::scalars::Rational;

    fn sl21() -> Arc<SuperAlgebra<Rational>> {
        Arc::new(construct_basic("sl", &[2, 1]).unwrap())
    }

    #[test]
    fn natural_modules() {
        let v = natural_module(&sl21()).unwrap();
        assert_eq!((v.dim(), v.even_dim(), v.odd_dim()), (3, 2, 1));
        assert!(v.check_brackets().passed);
        let o = natural_module(&Arc::new(construct_basic::<Rational>("osp", &[1, 2]).unwrap())).unwrap();
        assert_eq!((o.dim(), o.even_dim(), o.odd_dim()), (3, 1, 2));
    }

    #[test]
    fn one_dim_on_commutator_fails() {
        let g = sl21();
        let h = g.cartan()[0];
        let mut theta = vec![Rational::zero(); g.dim()];
        theta[h] = Rational::one();
        assert!(matches!(one_dim_module(&g, &theta), Err(Error::Bracket(_))));
        let zero = vec![Rational::zero(); g.dim()];
        assert_eq!(one_dim_module(&g, &zero).unwrap().dim(), 1);
    }

    #[test]
    fn tensor_with_trivial_and_sums() {
        let g = sl21();
        let v = natural_module(&g).unwrap();
        let t = tensor_product(&v, &trivial_module(&g)).unwrap();
        assert_eq!(t.actions(), v.actions());
        let vv = tensor_product(&v, &v).unwrap();
        assert_eq!(vv.dim(), 9);
        assert_eq!(vv.even_dim(), 5);
        assert_eq!(direct_sum(&v, &v).unwrap().dim(), 6);
    }

    #[test]
    fn broken_action_is_rejected() {
        let g = sl21();
        let v = natural_module(&g).unwrap();
        let mut action = v.actions().to_vec();
        action[0] = action[0].scale(&Rational::integer(2));
        assert!(matches!(Module::new(g, v.parities().to_vec(), action), Err(Error::Bracket(_))));
    }

    #[test]
    fn pullback_along_identity() {
        let g = sl21();
        let v = natural_module(&g).unwrap();
        let p = pullback(&v, &g, &Matrix::identity(g.dim())).unwrap();
        assert_eq!(p.actions(), v.actions());
        assert!(matches!(pullback(&v, &g, &Matrix::identity(3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn sub_and_quotient_modules() {
        let g = sl21();
        let v = natural_module(&g).unwrap();
        let vv = direct_sum(&v, &v).unwrap();
        let first: Vec<Vec<Rational>> = (0..3).map(|i| unit(6, i)).collect();
        let s = vv.submodule(&first).unwrap();
        assert_eq!(s.actions(), v.actions());
        let (q, keep) = vv.quotient(&first).unwrap();
        assert_eq!(keep, vec![3, 4, 5]);
        assert_eq!(q.actions(), v.actions());
        assert!(matches!(vv.submodule(&first[..1]), Err(Error::Precondition(_))));
    }
}
