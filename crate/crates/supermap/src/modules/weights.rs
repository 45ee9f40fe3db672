//! Weights, highest-weight data, annihilators, isomorphism tests and
//! composition factors.

use std::collections::BTreeMap;

use serde::Serialize;

use super::envelope::{lie_generators, Certificate};
use super::{Module, WeightFrame};
use crate::coordalg::{IdealSpec, Point};
use crate::error::{Error, Result};
use crate::liesuper::Parity;
use crate::linalg::{kernel_of_rows, same_span, Coordinates, Echelon, Matrix};
use crate::mapalg::MapAlgebra;
use crate::scalars::{Field, Rational};

fn frame_of<F: Field>(v: &Module<F>) -> Result<&WeightFrame<F>> {
    v.frame().map(|f| &**f).ok_or_else(|| Error::Unsupported(format!("{} carries no weight data", v.name())))
}

/// The h ⊗ 1 weight of each basis vector; h must act diagonally.
pub fn weights<F: Field>(v: &Module<F>) -> Result<Vec<Vec<F>>> {
    let frame = frame_of(v)?;
    let mats: Vec<Matrix<F>> = frame.h_unit.iter().map(|h| v.act(h)).collect();
    if !mats.iter().all(Matrix::is_diagonal) {
        return Err(Error::Unsupported("the Cartan subalgebra does not act diagonally".into()));
    }
    Ok((0..v.dim()).map(|a| mats.iter().map(|m| m.get(a, a).clone()).collect()).collect())
}

fn key<F: Field>(w: &[F]) -> Result<Vec<Rational>> {
    w.iter()
        .map(|x| x.to_rational().ok_or_else(|| Error::Unsupported(format!("weight value {x} is not rational"))))
        .collect()
}

/// Distinct weights, lexicographically decreasing, with the basis indices
/// carrying each.
fn weight_spaces<F: Field>(v: &Module<F>) -> Result<Vec<(Vec<F>, Vec<usize>)>> {
    let ws = weights(v)?;
    let mut groups: BTreeMap<Vec<Rational>, (Vec<F>, Vec<usize>)> = BTreeMap::new();
    for (a, w) in ws.into_iter().enumerate() {
        groups.entry(key(&w)?).or_insert_with(|| (w, Vec::new())).1.push(a);
    }
    Ok(groups.into_values().rev().collect())
}

/// Weight multiplicities, lexicographically decreasing.
pub fn weight_table<F: Field>(v: &Module<F>) -> Result<Vec<(Vec<F>, usize)>> {
    Ok(weight_spaces(v)?.into_iter().map(|(w, idx)| (w, idx.len())).collect())
}

pub fn weight_csv<F: Field>(v: &Module<F>) -> Result<String> {
    let frame = frame_of(v)?;
    let mut out = frame.unit_labels.join(",");
    out.push_str(",multiplicity\n");
    for (w, m) in weight_table(v)? {
        let cells: Vec<String> = w.iter().map(Field::to_exact_string).collect();
        out.push_str(&format!("{},{m}\n", cells.join(",")));
    }
    Ok(out)
}

/// Vectors supported on `support` killed by every operator in `ops`.
fn common_kernel<F: Field>(mats: &[Matrix<F>], support: &[usize], d: usize) -> Vec<Vec<F>> {
    let mut rows = Vec::new();
    for m in mats {
        for r in 0..d {
            let row: Vec<F> = support.iter().map(|&c| m.get(r, c).clone()).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    kernel_of_rows(rows, support.len())
        .into_iter()
        .map(|k| {
            let mut v = vec![F::zero(); d];
            for (x, &c) in k.into_iter().zip(support) {
                v[c] = x;
            }
            v
        })
        .collect()
}

/// A common eigenvector of commuting operators preserving span(`space`).
fn common_eigenvector<F: Field>(mut space: Vec<Vec<F>>, ops: &[Matrix<F>], d: usize) -> Result<Vec<F>> {
    for t in ops {
        if space.len() == 1 {
            break;
        }
        let coords = Coordinates::new(d, space.clone())?;
        let k = space.len();
        let cols: Vec<Vec<F>> = space
            .iter()
            .map(|w| coords.coords(&t.mul_vec(w)).ok_or_else(|| Error::Inconsistency("subspace is not stable".into())))
            .collect::<Result<_>>()?;
        let m = Matrix::from_columns(&cols, k);
        let mut candidates: Vec<F> = Vec::new();
        for i in 0..k {
            if !candidates.contains(m.get(i, i)) {
                candidates.push(m.get(i, i).clone());
            }
        }
        let mut found = None;
        for c in candidates {
            let ker = m.sub(&Matrix::identity(k).scale(&c)).kernel();
            if !ker.is_empty() {
                found = Some(ker);
                break;
            }
        }
        let ker = found.ok_or_else(|| Error::Inconsistency("no common eigenvector found".into()))?;
        space = ker.iter().map(|c| coords.combine(c)).collect();
    }
    space.into_iter().next().ok_or_else(|| Error::Inconsistency("empty eigenspace".into()))
}

/// A weight vector killed by n⁺ ⊗ A/I and an eigenvector of h ⊗ A/I, taken
/// in the lexicographically largest weight where such vectors exist.
fn highest_weight_vector<F: Field>(v: &Module<F>) -> Result<Vec<F>> {
    let frame = frame_of(v)?;
    let d = v.dim();
    let raising: Vec<Matrix<F>> = frame.raising.iter().map(|x| v.act(x)).collect();
    for (_, idx) in weight_spaces(v)? {
        let k = common_kernel(&raising, &idx, d);
        if !k.is_empty() {
            let ops: Vec<Matrix<F>> = frame.h_full.iter().map(|h| v.act(h)).collect();
            return common_eigenvector(k, &ops, d);
        }
    }
    Err(Error::Inconsistency("no highest weight vector".into()))
}

/// ψ on h ⊗ A/I, its restriction λ to h ⊗ 1, and a highest weight vector.
#[derive(Debug, Clone, PartialEq)]
pub struct HighestWeightData<F> {
    pub psi: Vec<F>,
    pub psi_labels: Vec<String>,
    pub lambda: Vec<F>,
    pub vector: Vec<F>,
}

impl<F: Field> HighestWeightData<F> {
    pub fn to_json(&self) -> serde_json::Value {
        let s = |v: &[F]| v.iter().map(Field::to_exact_string).collect::<Vec<_>>();
        serde_json::json!({
            "psi": self.psi_labels.iter().zip(s(&self.psi)).map(|(l, x)| serde_json::json!([l, x])).collect::<Vec<_>>(),
            "lambda": s(&self.lambda),
            "vector": s(&self.vector),
        })
    }
}

fn eigenvalue<F: Field>(m: &Matrix<F>, v: &[F]) -> Result<F> {
    let w = m.mul_vec(v);
    let p = v.iter().position(|x| !x.is_zero()).ok_or_else(|| Error::Inconsistency("zero vector".into()))?;
    let c = w[p].div(&v[p])?;
    if w.iter().zip(v).any(|(a, b)| *a != c.mul(b)) {
        return Err(Error::Inconsistency("vector is not an eigenvector".into()));
    }
    Ok(c)
}

pub fn highest_weight_data<F: Field>(v: &Module<F>) -> Result<HighestWeightData<F>> {
    let frame = frame_of(v)?;
    let vector = highest_weight_vector(v)?;
    let psi = frame.h_full.iter().map(|h| eigenvalue(&v.act(h), &vector)).collect::<Result<_>>()?;
    let lambda = frame.h_unit.iter().map(|h| eigenvalue(&v.act(h), &vector)).collect::<Result<_>>()?;
    Ok(HighestWeightData { psi, psi_labels: frame.h_labels.clone(), lambda, vector })
}

/// The largest submodule of V with zero component in the weight space of
/// `generator`, which must be one-dimensional.
pub fn highest_weight_radical<F: Field>(v: &Module<F>, generator: &[F]) -> Result<Vec<Vec<F>>> {
    let frame = frame_of(v)?;
    let d = v.dim();
    let spaces = weight_spaces(v)?;
    let top = spaces
        .iter()
        .find(|(_, idx)| generator.iter().enumerate().any(|(i, x)| !x.is_zero() && idx.contains(&i)))
        .map(|(_, idx)| idx.clone())
        .ok_or_else(|| Error::Precondition("zero generator".into()))?;
    if top.len() != 1 || generator.iter().enumerate().any(|(i, x)| !x.is_zero() && !top.contains(&i)) {
        return Err(Error::Precondition("generator must span a one-dimensional weight space".into()));
    }
    let raising: Vec<Matrix<F>> = frame.raising.iter().map(|x| v.act(x)).collect();
    let mut n: Vec<Vec<F>> = (0..d).filter(|i| *i != top[0]).map(|i| crate::linalg::unit_vector(d, i)).collect();
    loop {
        let annihilator = kernel_of_rows(n.clone(), d);
        let mut rows = Vec::new();
        for m in &raising {
            let images: Vec<Vec<F>> = n.iter().map(|b| m.mul_vec(b)).collect();
            for w in &annihilator {
                let row: Vec<F> = images
                    .iter()
                    .map(|img| img.iter().zip(w).fold(F::zero(), |mut acc, (a, b)| {
                        acc.add_mul(a, b);
                        acc
                    }))
                    .collect();
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
        let sol = kernel_of_rows(rows, n.len());
        if sol.len() == n.len() {
            return Ok(crate::linalg::span(d, n));
        }
        n = sol
            .iter()
            .map(|c| {
                let mut out = vec![F::zero(); d];
                for (x, b) in c.iter().zip(&n) {
                    for (o, y) in out.iter_mut().zip(b) {
                        o.add_mul(x, y);
                    }
                }
                out
            })
            .collect();
    }
}

/// Irreducibility through the n⁺-invariants: a one-dimensional space of
/// invariants that generates V.
pub(super) fn highest_weight_certificate<F: Field>(v: &Module<F>) -> Result<Certificate> {
    let frame = frame_of(v)?;
    weights(v)?;
    let d = v.dim();
    let raising: Vec<Matrix<F>> = frame.raising.iter().map(|x| v.act(x)).collect();
    let all: Vec<usize> = (0..d).collect();
    let k = common_kernel(&raising, &all, d);
    let irreducible = k.len() == 1 && v.spin(&k).len() == d;
    Ok(Certificate { irreducible, method: "highest-weight".into(), module_dim: d, envelope_dim: None, invariants: Some(k.len()) })
}

/// Kernel of x ↦ ρ(x) in algebra coordinates.
pub fn annihilator_in_algebra<F: Field>(v: &Module<F>) -> Vec<Vec<F>> {
    let n = v.algebra().dim();
    let d = v.dim();
    let mut rows = Vec::new();
    for p in 0..d * d {
        let row: Vec<F> = v.actions().iter().map(|m| m.data()[p].clone()).collect();
        if row.iter().any(|x| !x.is_zero()) {
            rows.push(row);
        }
    }
    kernel_of_rows(rows, n)
}

/// The largest ideal J of A/I with (g ⊗ J)V = 0, with its block structure.
#[derive(Debug, Clone)]
pub struct AnnihilatorIdeal<F> {
    pub basis: Vec<Vec<F>>,
    pub codim: usize,
    pub is_ideal: bool,
    /// k_p per support block of A/I, when the annihilator is ∏ m_p^{k_p}.
    pub multiplicities: Vec<Option<u32>>,
    /// Points with k_p > 0: the support of V.
    pub support: Vec<Point<F>>,
    pub reduced: bool,
    /// The annihilator as a product of point powers.
    pub witness: Option<IdealSpec<F>>,
    /// Whether Ann_{g⊗A/I}(V) = g ⊗ Ann_A(V).
    pub tensor_form: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnnihilatorSummary {
    pub codim: usize,
    pub support: Vec<Vec<String>>,
    pub multiplicities: Vec<Option<u32>>,
    pub reduced: bool,
    pub tensor_form: bool,
}

impl<F: Field> AnnihilatorIdeal<F> {
    pub fn summary(&self) -> AnnihilatorSummary {
        AnnihilatorSummary {
            codim: self.codim,
            support: self.support.iter().map(Point::to_strings).collect(),
            multiplicities: self.multiplicities.clone(),
            reduced: self.reduced,
            tensor_form: self.tensor_form,
        }
    }
}

pub fn annihilator_ideal<F: Field>(v: &Module<F>, m: &MapAlgebra<F>) -> Result<AnnihilatorIdeal<F>> {
    if v.algebra().dim() != m.dim() {
        return Err(Error::Dimension("module is not over this map algebra".into()));
    }
    let a = m.coefficients();
    let (dg, da) = (m.target().dim(), a.dim());
    let d = v.dim();
    // f ∈ Ann iff (g ⊗ f a_i)V = 0 for every basis element a_i.
    let mut rows = Vec::new();
    for i in 0..da {
        for u in 0..dg {
            for p in 0..d * d {
                let row: Vec<F> = (0..da)
                    .map(|j| a.product_basis(j, i).map_or_else(F::zero, |k| v.action(m.index(u, k)).data()[p].clone()))
                    .collect();
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let basis = kernel_of_rows(rows, da);
    let j = Echelon::from_vectors(da, basis.iter().cloned());
    let is_ideal = j.rows().iter().all(|f| (0..da).all(|i| j.contains(&a.mul(&crate::linalg::unit_vector(da, i), f))));
    let multiplicities = a.block_multiplicities(&basis);
    let factors: Option<Vec<(Point<F>, u32)>> = a
        .ideal()
        .factors
        .iter()
        .zip(&multiplicities)
        .map(|((p, _), k)| k.map(|k| (p.clone(), k)))
        .collect();
    let factors = factors.filter(|_| is_ideal).map(|f| f.into_iter().filter(|(_, k)| *k > 0).collect::<Vec<_>>());
    let support = factors.iter().flatten().map(|(p, _)| p.clone()).collect();
    let reduced = factors.as_ref().is_some_and(|f| f.iter().all(|(_, k)| *k == 1));
    let witness = factors.map(IdealSpec::new).transpose()?;
    let tensor: Vec<Vec<F>> = (0..dg)
        .flat_map(|u| basis.iter().map(move |f| (u, f)))
        .map(|(u, f)| m.tensor(&crate::linalg::unit_vector(dg, u), f))
        .collect();
    let tensor_form = same_span(m.dim(), &tensor, &annihilator_in_algebra(v));
    Ok(AnnihilatorIdeal { codim: da - basis.len(), basis, is_ideal, multiplicities, support, reduced, witness, tensor_form })
}

/// An invertible even or odd module map V → W, if one exists.
pub fn intertwiner<F: Field>(v: &Module<F>, w: &Module<F>) -> Option<Matrix<F>> {
    let d = v.dim();
    if w.dim() != d || v.algebra().labels() != w.algebra().labels() {
        return None;
    }
    let gens = lie_generators(v.algebra());
    for shift in [Parity::Even, Parity::Odd] {
        let unknowns: Vec<(usize, usize)> = (0..d)
            .flat_map(|r| (0..d).map(move |c| (r, c)))
            .filter(|&(r, c)| w.parity(r) == v.parity(c).plus(shift))
            .collect();
        if unknowns.is_empty() {
            continue;
        }
        let pos: BTreeMap<(usize, usize), usize> = unknowns.iter().enumerate().map(|(i, &rc)| (rc, i)).collect();
        let mut rows = Vec::new();
        for &x in &gens {
            let (a, b) = (v.action(x), w.action(x));
            let eps = if shift.both_odd(v.algebra().parity(x)) { F::one().neg() } else { F::one() };
            // (B T − ε T A)[r][c]
            for r in 0..d {
                for c in 0..d {
                    let mut row = vec![F::zero(); unknowns.len()];
                    for k in 0..d {
                        if let Some(&i) = pos.get(&(k, c)) {
                            row[i] = row[i].add(b.get(r, k));
                        }
                        if let Some(&i) = pos.get(&(r, k)) {
                            row[i].sub_mul(&eps, a.get(k, c));
                        }
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        let sols = kernel_of_rows(rows, unknowns.len());
        let to_matrix = |s: &[F]| {
            let mut t = Matrix::zeros(d, d);
            for (x, &(r, c)) in s.iter().zip(&unknowns) {
                t.set(r, c, x.clone());
            }
            t
        };
        let mut total = vec![F::zero(); unknowns.len()];
        for s in &sols {
            let t = to_matrix(s);
            if t.rank() == d {
                return Some(t);
            }
            total = total.iter().zip(s).map(|(a, b)| a.add(b)).collect();
        }
        if !sols.is_empty() {
            let t = to_matrix(&total);
            if t.rank() == d {
                return Some(t);
            }
        }
    }
    None
}

/// Isomorphism up to parity shift of irreducible modules over one algebra.
pub fn isomorphic<F: Field>(v: &Module<F>, w: &Module<F>) -> bool {
    if v.dim() != w.dim() || v.algebra().labels() != w.algebra().labels() {
        return false;
    }
    let (ve, we) = (v.even_dim(), w.even_dim());
    if ve != we && ve != w.odd_dim() {
        return false;
    }
    if let (Ok(a), Ok(b)) = (highest_weight_data(v), highest_weight_data(w)) {
        return a.psi == b.psi;
    }
    intertwiner(v, w).is_some()
}

fn composition_factors<F: Field>(v: &Module<F>, out: &mut Vec<Module<F>>) -> Result<()> {
    if v.dim() == 0 {
        return Ok(());
    }
    let top = highest_weight_vector(v)?;
    let (rows, _) = v.spin(std::slice::from_ref(&top)).into_rref();
    let w = v.submodule(&rows)?;
    let g = Echelon::from_vectors(v.dim(), rows.iter().cloned()).coords(&top).expect("generator lies in its span");
    let n = highest_weight_radical(&w, &g)?;
    out.push(w.quotient(&n)?.0);
    composition_factors(&w.submodule(&n)?, out)?;
    composition_factors(&v.quotient(&rows)?.0, out)
}

/// Composition factors with multiplicities, in order of discovery.
pub fn decompose<F: Field>(v: &Module<F>) -> Result<Vec<(Module<F>, usize)>> {
    let mut factors = Vec::new();
    composition_factors(v, &mut factors)?;
    let mut out: Vec<(Module<F>, usize)> = Vec::new();
    for f in factors {
        match out.iter_mut().find(|(g, _)| isomorphic(g, &f) && g.even_dim() == f.even_dim()) {
            Some((_, k)) => *k += 1,
            None => out.push((f, 1)),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::coordalg::{quotient_algebra, RingSpec};
    use crate::liesuper::{construct_basic, SuperAlgebra};
    use crate::mapalg::build_map_algebra;
    use crate::modules::{direct_sum, evaluation_module, is_irreducible, natural_module, tensor_product};

    fn pt(a: i64) -> Point<Rational> {
        Point::scalar(Rational::integer(a))
    }

    fn map(points: &[(i64, u32)]) -> MapAlgebra<Rational> {
        let g: Arc<SuperAlgebra<Rational>> = Arc::new(construct_basic("sl", &[2, 1]).unwrap());
        let ideal = IdealSpec::new(points.iter().map(|&(a, n)| (pt(a), n)).collect()).unwrap();
        let a = quotient_algebra(RingSpec::polynomial(1), ideal).unwrap();
        build_map_algebra(g, Arc::new(a)).unwrap()
    }

    #[test]
    fn natural_highest_weight() {
        let m = map(&[(1, 1), (2, 1)]);
        let nat = natural_module(m.target()).unwrap();
        let hw = highest_weight_data(&nat).unwrap();
        assert_eq!(hw.vector, vec![Rational::one(), Rational::zero(), Rational::zero()]);
        let ev = evaluation_module(&m, &[(pt(2), nat)]).unwrap();
        let d = highest_weight_data(&ev).unwrap();
        // ψ(h ⊗ f) = λ(h) f(2): the block at 1 contributes nothing.
        for (c, lam) in hw.lambda.iter().enumerate() {
            assert_eq!(d.psi[2 * c], Rational::zero());
            assert_eq!(&d.psi[2 * c + 1], lam);
        }
        assert_eq!(d.lambda, hw.lambda);
    }

    #[test]
    fn sl2_clebsch_gordan() {
        let g: Arc<SuperAlgebra<Rational>> = Arc::new(construct_basic("sl", &[2, 0]).unwrap());
        let v = natural_module(&g).unwrap();
        let parts = decompose(&tensor_product(&v, &v).unwrap()).unwrap();
        let dims: Vec<(usize, usize)> = parts.iter().map(|(m, k)| (m.dim(), *k)).collect();
        assert_eq!(dims, vec![(3, 1), (1, 1)]);
        assert_eq!(weight_csv(&v).unwrap(), "h1,multiplicity\n1,1\n-1,1\n");
    }

    #[test]
    fn repeated_factor() {
        let g: Arc<SuperAlgebra<Rational>> = Arc::new(construct_basic("sl", &[2, 1]).unwrap());
        let v = natural_module(&g).unwrap();
        let parts = decompose(&direct_sum(&v, &v).unwrap()).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].1, 2);
        assert!(isomorphic(&parts[0].0, &v));
        assert!(intertwiner(&v, &v).is_some());
    }

    #[test]
    fn distinct_points_are_distinguished() {
        let m = map(&[(1, 1), (2, 1)]);
        let nat = natural_module(m.target()).unwrap();
        let a = evaluation_module(&m, &[(pt(1), nat.clone())]).unwrap();
        let b = evaluation_module(&m, &[(pt(2), nat.clone())]).unwrap();
        assert!(isomorphic(&a, &a));
        assert!(!isomorphic(&a, &b));
        assert!(intertwiner(&a, &b).is_none());

        let ann = annihilator_ideal(&a, &m).unwrap();
        assert_eq!(ann.support, vec![pt(1)]);
        assert!(ann.reduced && ann.tensor_form);
        let ab = evaluation_module(&m, &[(pt(1), nat.clone()), (pt(2), nat)]).unwrap();
        let ann = annihilator_ideal(&ab, &m).unwrap();
        assert_eq!(ann.support, vec![pt(1), pt(2)]);
        assert_eq!(ann.codim, 2);
    }

    #[test]
    fn disjoint_support_tensor_irreducibility() {
        let m = map(&[(1, 1), (2, 1)]);
        let nat = natural_module(m.target()).unwrap();
        let apart = evaluation_module(&m, &[(pt(1), nat.clone()), (pt(2), nat.clone())]).unwrap();
        let c = is_irreducible(&apart);
        assert_eq!((c.irreducible, c.envelope_dim), (true, Some(81)));
        let together = evaluation_module(&m, &[(pt(1), nat.clone()), (pt(1), nat)]).unwrap();
        let c = is_irreducible(&together);
        assert!(!c.irreducible);
        assert!(c.envelope_dim.unwrap() < 81);
    }
}
