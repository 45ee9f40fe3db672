//! Map superalgebras g ⊗ A/I, their evaluation maps and Γ-fixed points.

use std::sync::Arc;

use serde::Serialize;

use crate::coordalg::{
    quotient_algebra, Character, GroupAction, IdealSpec, Point, QuotientAlgebra,
};
use crate::error::{Error, Result};
use crate::liesuper::{sparse_from_dense, Automorphism, Parity, SuperAlgebra};
use crate::linalg::{kernel_of_rows, unit_vector, Coordinates, Echelon, Matrix};
use crate::par::map_indices;
use crate::scalars::Field;

/// g ⊗ A/I on the basis u_i ⊗ f_j, indexed `i * dim A + j`.
#[derive(Debug, Clone)]
pub struct MapAlgebra<F> {
    g: Arc<SuperAlgebra<F>>,
    a: Arc<QuotientAlgebra<F>>,
    alg: Arc<SuperAlgebra<F>>,
}

pub fn build_map_algebra<F: Field>(g: Arc<SuperAlgebra<F>>, a: Arc<QuotientAlgebra<F>>) -> Result<MapAlgebra<F>> {
    let (dg, da) = (g.dim(), a.dim());
    let n = dg * da;
    let brackets = map_indices(n * n, |pq| {
        let (p, q) = (pq / n, pq % n);
        let (i, j, k, l) = (p / da, p % da, q / da, q % da);
        match a.product_basis(j, l) {
            None => Vec::new(),
            Some(m) => g.bracket_basis(i, k).iter().map(|(u, c)| (u * da + m, c.clone())).collect(),
        }
    });
    let mut labels = Vec::with_capacity(n);
    let mut parity = Vec::with_capacity(n);
    for i in 0..dg {
        for j in 0..da {
            labels.push(format!("{}⊗{}", g.labels()[i], a.labels()[j]));
            parity.push(g.parity(i));
        }
    }
    let units: Vec<usize> = a.point_blocks().iter().map(|r| r.start).collect();
    let cartan = g.cartan().iter().flat_map(|&h| units.iter().map(move |&u| h * da + u)).collect::<Vec<_>>();
    let mut alg = SuperAlgebra::from_structure_constants(labels, parity, brackets)?.with_cartan({
        let mut c = cartan;
        c.sort_unstable();
        c
    });
    if let Some(d) = g.degree_hint() {
        alg = alg.with_degree_hint((0..n).map(|p| d[p / da]).collect());
    }
    Ok(MapAlgebra { g, a, alg: Arc::new(alg) })
}

impl<F: Field> MapAlgebra<F> {
    pub fn target(&self) -> &Arc<SuperAlgebra<F>> {
        &self.g
    }

    pub fn coefficients(&self) -> &Arc<QuotientAlgebra<F>> {
        &self.a
    }

    /// The map algebra as an abstract Lie superalgebra.
    pub fn algebra(&self) -> &Arc<SuperAlgebra<F>> {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn index(&self, u: usize, f: usize) -> usize {
        u * self.a.dim() + f
    }

    /// Coordinates of x ⊗ f.
    pub fn tensor(&self, x: &[F], f: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim()];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in f.iter().enumerate() {
                if !b.is_zero() {
                    out[self.index(i, j)] = a.mul(b);
                }
            }
        }
        out
    }
}

/// Whether `m` (columns indexed by the source basis) preserves brackets.
pub fn is_homomorphism<F: Field>(src: &SuperAlgebra<F>, tgt: &SuperAlgebra<F>, m: &Matrix<F>) -> bool {
    let n = src.dim();
    let cols: Vec<Vec<F>> = (0..n).map(|j| m.column(j)).collect();
    let ok = map_indices(n, |i| {
        (0..n).all(|j| {
            let lhs = m.mul_vec(&crate::liesuper::dense_from_sparse(src.bracket_basis(i, j), n));
            lhs == tgt.bracket(&cols[i], &cols[j])
        })
    });
    ok.into_iter().all(|b| b)
}

/// A generalized evaluation map onto g ⊗ (⊕_i A/m_i^{n_i}).
#[derive(Debug, Clone)]
pub struct EvaluationMap<F> {
    pub targets: Vec<(Point<F>, u32)>,
    pub target: MapAlgebra<F>,
    /// dim target × dim source.
    pub matrix: Matrix<F>,
}

impl<F: Field> EvaluationMap<F> {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.matrix.rows()
    }

    pub fn kernel_dim(&self) -> usize {
        self.matrix.cols() - self.rank()
    }

    pub fn apply(&self, x: &[F]) -> Vec<F> {
        self.matrix.mul_vec(x)
    }
}

/// Projection A/I → ⊕ A/m_i^{n_i} by truncating the chosen blocks.
fn block_projection<F: Field>(a: &QuotientAlgebra<F>, b: &QuotientAlgebra<F>) -> Result<Matrix<F>> {
    let mut m = Matrix::zeros(b.dim(), a.dim());
    for (t, (p, n)) in b.ideal().factors.iter().enumerate() {
        let src = a.block_index(p)?;
        let kept = a.truncated_block(src, *n)?;
        for i in kept {
            let j = b.point_blocks()[t].clone().find(|&j| b.exponents(j) == a.exponents(i)).expect("same shape");
            m.set(j, i, F::one());
        }
    }
    Ok(m)
}

pub fn evaluation_map<F: Field>(source: &MapAlgebra<F>, targets: &[(Point<F>, u32)]) -> Result<EvaluationMap<F>> {
    let ideal = IdealSpec::new(targets.to_vec())?;
    let b = quotient_algebra(*source.a.ring(), ideal)?;
    let proj = block_projection(&source.a, &b)?;
    let matrix = Matrix::identity(source.g.dim()).kron(&proj);
    let target = build_map_algebra(source.g.clone(), Arc::new(b))?;
    Ok(EvaluationMap { targets: targets.to_vec(), target, matrix })
}

/// (g ⊗ A/I)^Γ with its basis organized as ⊕_ξ g_ξ ⊗ (A/I)_{−ξ}.
#[derive(Debug, Clone)]
pub struct FixedSubalgebra<F> {
    ambient: MapAlgebra<F>,
    group: GroupAction<F>,
    target_autos: Vec<Automorphism<F>>,
    coords: Coordinates<F>,
    grading: Vec<Character>,
    g_pieces: Vec<(Character, Vec<Vec<F>>)>,
    a_pieces: Vec<(Character, Vec<Vec<F>>)>,
    alg: Arc<SuperAlgebra<F>>,
}

pub fn fixed_subalgebra<F: Field>(
    m: &MapAlgebra<F>,
    target_autos: Vec<Automorphism<F>>,
    group: GroupAction<F>,
) -> Result<FixedSubalgebra<F>> {
    if target_autos.len() != group.orders().len() {
        return Err(Error::Domain("one target automorphism per group generator is required".into()));
    }
    for (aut, &k) in target_autos.iter().zip(group.orders()) {
        if !aut.matrix().pow(k).is_identity() {
            return Err(Error::Domain(format!("target automorphism order does not divide {k}")));
        }
    }
    let dg = m.g.dim();
    let n = m.dim();
    let g_mats: Vec<Matrix<F>> = target_autos.iter().map(|a| a.matrix().clone()).collect();
    let g_pieces = group.isotypic_for(&g_mats, dg)?;
    let a_pieces = group.isotypic_decomposition(&m.a)?;

    // Kernel of the stacked (γ − id).
    let mut rows = Vec::new();
    for (gm, am) in g_mats.iter().zip(group.generator_matrices()) {
        let d = gm.kron(am).sub(&Matrix::identity(n));
        rows.extend(d.to_rows().into_iter().filter(|r| r.iter().any(|x| !x.is_zero())));
    }
    let kernel = kernel_of_rows(rows, n);

    let mut basis = Vec::new();
    let mut grading = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        for (xi, gb) in &g_pieces {
            let minus = group.negate(xi);
            let ab = &a_pieces.iter().find(|(c, _)| *c == minus).expect("all characters listed").1;
            for x in gb.iter().filter(|x| m.g.vector_parity(x) == Some(parity)) {
                for f in ab {
                    basis.push(m.tensor(x, f));
                    grading.push(xi.clone());
                }
            }
        }
    }
    if basis.len() != kernel.len() || !crate::linalg::same_span(n, &basis, &kernel) {
        return Err(Error::Inconsistency("graded pieces do not span the fixed points".into()));
    }
    let coords = Coordinates::new(n, basis)?;
    let alg = fixed_structure(m, &coords, &grading)?;
    Ok(FixedSubalgebra { ambient: m.clone(), group, target_autos, coords, grading, g_pieces, a_pieces, alg: Arc::new(alg) })
}

fn fixed_structure<F: Field>(
    m: &MapAlgebra<F>,
    coords: &Coordinates<F>,
    grading: &[Character],
) -> Result<SuperAlgebra<F>> {
    let basis = coords.basis();
    let k = basis.len();
    let sparse: Vec<_> = basis.iter().map(|v| sparse_from_dense(v)).collect();
    let brackets = map_indices(k * k, |pq| {
        let z = m.alg.bracket_sparse(&sparse[pq / k], &sparse[pq % k]);
        coords.coords(&z).map(|c| sparse_from_dense(&c))
    });
    let brackets = brackets
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Inconsistency("fixed points are not closed under the bracket".into()))?;
    let labels = basis
        .iter()
        .zip(grading)
        .enumerate()
        .map(|(a, (v, xi))| {
            let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
            if nz.len() == 1 && v[nz[0]].is_one() {
                m.alg.labels()[nz[0]].clone()
            } else {
                format!("y{}[{}]", a + 1, xi.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
            }
        })
        .collect();
    let parity = basis.iter().map(|v| m.alg.vector_parity(v).unwrap_or(Parity::Even)).collect();
    SuperAlgebra::from_structure_constants(labels, parity, brackets)
}

impl<F: Field> FixedSubalgebra<F> {
    pub fn ambient(&self) -> &MapAlgebra<F> {
        &self.ambient
    }

    pub fn group(&self) -> &GroupAction<F> {
        &self.group
    }

    pub fn target_autos(&self) -> &[Automorphism<F>] {
        &self.target_autos
    }

    pub fn algebra(&self) -> &Arc<SuperAlgebra<F>> {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Basis vectors in ambient coordinates.
    pub fn basis(&self) -> &[Vec<F>] {
        self.coords.basis()
    }

    pub fn grading(&self) -> &[Character] {
        &self.grading
    }

    pub fn target_pieces(&self) -> &[(Character, Vec<Vec<F>>)] {
        &self.g_pieces
    }

    pub fn coefficient_pieces(&self) -> &[(Character, Vec<Vec<F>>)] {
        &self.a_pieces
    }

    /// Columns are the basis vectors in ambient coordinates.
    pub fn inclusion(&self) -> Matrix<F> {
        Matrix::from_columns(self.coords.basis(), self.ambient.dim())
    }

    pub fn coords_of(&self, ambient_vector: &[F]) -> Option<Vec<F>> {
        self.coords.coords(ambient_vector)
    }

    /// Σ_ξ dim g_ξ · dim (A/I)_{−ξ}.
    pub fn graded_dim_formula(&self) -> usize {
        self.g_pieces
            .iter()
            .map(|(xi, gb)| {
                let minus = self.group.negate(xi);
                gb.len() * self.a_pieces.iter().find(|(c, _)| *c == minus).map_or(0, |(_, b)| b.len())
            })
            .sum()
    }

    /// Fixed under every generator, exactly.
    pub fn is_fixed(&self) -> bool {
        self.target_autos.iter().zip(self.group.generator_matrices()).all(|(t, a)| {
            let k = t.matrix().kron(a);
            self.basis().iter().all(|v| k.mul_vec(v) == *v)
        })
    }

    /// [component ξ, component ζ] lies in component ξ + ζ for all basis pairs.
    pub fn grading_compatible(&self) -> bool {
        let k = self.dim();
        (0..k).all(|i| {
            (0..k).all(|j| {
                let want = self.group.add(&self.grading[i], &self.grading[j]);
                self.alg.bracket_basis(i, j).iter().all(|(l, _)| self.grading[*l] == want)
            })
        })
    }
}

/// Restriction of the ambient evaluation to the fixed subalgebra, with the
/// targets in pairwise distinct orbits.
pub fn equivariant_evaluation<F: Field>(f: &FixedSubalgebra<F>, targets: &[(Point<F>, u32)]) -> Result<EvaluationMap<F>> {
    for (a, (p, _)) in targets.iter().enumerate() {
        for (q, _) in &targets[..a] {
            if f.group.same_orbit(p, q) {
                return Err(Error::SameOrbit(q.to_string(), p.to_string()));
            }
        }
    }
    let ev = evaluation_map(&f.ambient, targets)?;
    let matrix = ev.matrix.mul(&f.inclusion());
    Ok(EvaluationMap { targets: ev.targets, target: ev.target, matrix })
}

/// Result of matching an ideal of the fixed subalgebra against the form
/// ⊕_ξ g_ξ ⊗ J_{−ξ} with J a Γ-stable ideal of A/I.
#[derive(Debug, Clone, Serialize)]
pub struct IdealFormReport {
    /// dim of the coefficient space K_η for each character η.
    pub coefficient_dims: Vec<(Character, usize)>,
    pub graded_match: bool,
    pub coefficient_ideal: bool,
    pub block_power_form: bool,
    pub gamma_stable: bool,
    /// k_p per support point of A/I: J = ⊕_p m_p^{k_p}/m_p^{n_p}.
    pub multiplicities: Vec<Option<u32>>,
    /// The witness ideal ∏ m_p^{k_p} (points with k_p = 0 omitted), as
    /// (point strings, multiplicity).
    pub witness: Option<Vec<(Vec<String>, u32)>>,
}

impl IdealFormReport {
    pub fn passed(&self) -> bool {
        self.graded_match && self.coefficient_ideal && self.block_power_form && self.gamma_stable
    }

    pub fn witness_support(&self) -> Vec<Vec<String>> {
        self.witness.iter().flatten().map(|(p, _)| p.clone()).collect()
    }
}

/// Checks that `subspace` (in fixed-subalgebra coordinates) is an ideal of
/// the form ⊕_ξ g_ξ ⊗ J_{−ξ}, and recovers J as a product of point powers.
pub fn ideal_form_check<F: Field>(f: &FixedSubalgebra<F>, subspace: &[Vec<F>]) -> Result<IdealFormReport> {
    let k = f.dim();
    let s = Echelon::from_vectors(k, subspace.iter().cloned());
    for v in s.rows() {
        for i in 0..k {
            if !s.contains(&f.alg.bracket(&unit_vector(k, i), v)) {
                return Err(Error::Precondition("subspace is not an ideal of the fixed subalgebra".into()));
            }
        }
    }
    let m = &f.ambient;
    let a = &m.a;
    let da = a.dim();
    let incl = f.inclusion();
    let s_amb = Echelon::from_vectors(m.dim(), s.rows().iter().map(|v| incl.mul_vec(v)));

    let mut j_basis: Vec<Vec<F>> = Vec::new();
    let mut coefficient_dims = Vec::new();
    let mut expected = 0;
    for (eta, ab) in &f.a_pieces {
        let minus = f.group.negate(eta);
        let gb = &f.g_pieces.iter().find(|(c, _)| *c == minus).expect("all characters").1;
        // α ↦ reduce(x ⊗ Σ α_k a_k) must vanish for every x in g_{−η}.
        let mut rows = Vec::new();
        for x in gb {
            let cols: Vec<Vec<F>> = ab.iter().map(|fk| s_amb.reduce(&m.tensor(x, fk))).collect();
            for r in 0..m.dim() {
                let row: Vec<F> = cols.iter().map(|c| c[r].clone()).collect();
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
        let sol = kernel_of_rows(rows, ab.len());
        expected += gb.len() * sol.len();
        coefficient_dims.push((eta.clone(), sol.len()));
        for c in sol {
            let mut v = vec![F::zero(); da];
            for (ck, fk) in c.iter().zip(ab) {
                for (o, y) in v.iter_mut().zip(fk) {
                    o.add_mul(ck, y);
                }
            }
            j_basis.push(v);
        }
    }
    let graded_match = expected == s.len();
    let j = Echelon::from_vectors(da, j_basis.iter().cloned());
    let coefficient_ideal = j.rows().iter().all(|v| (0..da).all(|i| j.contains(&a.mul(&unit_vector(da, i), v))));

    let multiplicities = a.block_multiplicities(j.rows());
    let block_power_form = coefficient_ideal && multiplicities.iter().all(Option::is_some);
    let gamma_stable = block_power_form && {
        let pts = a.ideal().support();
        pts.iter().enumerate().all(|(b, p)| {
            f.group.orbit(p).iter().all(|q| {
                let c = a.block_index(q).expect("stable support");
                multiplicities[c] == multiplicities[b]
            })
        })
    };
    let witness = block_power_form.then(|| {
        a.ideal()
            .factors
            .iter()
            .zip(&multiplicities)
            .filter(|(_, k)| k.unwrap_or(0) > 0)
            .map(|((p, _), k)| (p.to_strings(), k.unwrap_or(0)))
            .collect()
    });
    Ok(IdealFormReport { coefficient_dims, graded_match, coefficient_ideal, block_power_form, gamma_stable, multiplicities, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordalg::{PointMap, RingSpec};
    use crate::liesuper::{construct_basic, validate_superalgebra};
    use crate::scalars::{Cyclotomic, Rational};

    fn pt(a: i64) -> Point<Rational> {
        Point::scalar(Rational::integer(a))
    }

    fn sl21() -> Arc<SuperAlgebra<Rational>> {
        Arc::new(construct_basic("sl", &[2, 1]).unwrap())
    }

    #[test]
    fn dual_numbers() {
        let a = quotient_algebra(RingSpec::polynomial(1), IdealSpec::new(vec![(pt(0), 2)]).unwrap()).unwrap();
        let m = build_map_algebra(sl21(), Arc::new(a)).unwrap();
        assert_eq!(m.dim(), 16);
        assert!(validate_superalgebra(m.algebra()).passed());
        let g = m.target();
        let e13 = g.labels().iter().position(|l| l == "E13").unwrap();
        let e31 = g.labels().iter().position(|l| l == "E31").unwrap();
        let z = m.algebra().bracket(&unit_vector(16, m.index(e13, 1)), &unit_vector(16, m.index(e31, 1)));
        assert!(z.iter().all(Rational::is_zero));
    }

    #[test]
    fn evaluation_at_two_points_is_bijective() {
        let a = quotient_algebra(RingSpec::laurent(1), IdealSpec::new(vec![(pt(1), 1), (pt(-1), 1)]).unwrap()).unwrap();
        let m = build_map_algebra(sl21(), Arc::new(a)).unwrap();
        let ev = evaluation_map(&m, &[(pt(1), 1), (pt(-1), 1)]).unwrap();
        assert!(ev.is_surjective());
        assert_eq!(ev.kernel_dim(), 0);
        assert!(is_homomorphism(m.algebra(), ev.target.algebra(), &ev.matrix));
    }

    #[test]
    fn evaluation_kernel_dimension() {
        let a = quotient_algebra(RingSpec::polynomial(1), IdealSpec::new(vec![(pt(3), 2), (pt(5), 1)]).unwrap()).unwrap();
        let m = build_map_algebra(sl21(), Arc::new(a)).unwrap();
        let ev = evaluation_map(&m, &[(pt(3), 1)]).unwrap();
        assert_eq!(ev.rank(), 8);
        assert_eq!(ev.kernel_dim(), 8 * (3 - 1));
        assert!(is_homomorphism(m.algebra(), ev.target.algebra(), &ev.matrix));
        assert!(matches!(evaluation_map(&m, &[(pt(3), 1), (pt(3), 1)]), Err(Error::Domain(_))));
        assert!(matches!(evaluation_map(&m, &[(pt(4), 1)]), Err(Error::Domain(_))));
        assert!(matches!(evaluation_map(&m, &[(pt(5), 2)]), Err(Error::Domain(_))));
    }

    fn twisted() -> FixedSubalgebra<Cyclotomic> {
        let g: Arc<SuperAlgebra<Cyclotomic>> = Arc::new(construct_basic("sl", &[2, 1]).unwrap());
        let one = Cyclotomic::one();
        let d = Matrix::diagonal(&[one.clone(), one.neg(), one]);
        let aut = Automorphism::conjugation(&g, &d, 2).unwrap();
        let ring = RingSpec::laurent(1);
        let pts = (0..4).map(|k| (Point::scalar(Cyclotomic::root_of_unity(4, k)), 1)).collect();
        let a = quotient_algebra(ring, IdealSpec::new(pts).unwrap()).unwrap();
        let flip = PointMap::new(vec![Cyclotomic::one().neg()], vec![0]).unwrap();
        let group = GroupAction::new(&ring, vec![2], vec![flip], &a).unwrap();
        let m = build_map_algebra(g, Arc::new(a)).unwrap();
        fixed_subalgebra(&m, vec![aut], group).unwrap()
    }

    #[test]
    fn twisted_fixed_dimension() {
        let f = twisted();
        assert_eq!(f.dim(), 16);
        assert_eq!(f.graded_dim_formula(), 16);
        assert!(f.is_fixed());
        assert!(f.grading_compatible());
        assert!(validate_superalgebra(f.algebra()).passed());
    }

    #[test]
    fn twisted_evaluation_is_surjective() {
        let f = twisted();
        let one = Point::scalar(Cyclotomic::one());
        let ev = equivariant_evaluation(&f, &[(one.clone(), 1)]).unwrap();
        assert_eq!(ev.rank(), 8);
        assert!(is_homomorphism(f.algebra(), ev.target.algebra(), &ev.matrix));
        let minus = Point::scalar(Cyclotomic::one().neg());
        assert!(matches!(equivariant_evaluation(&f, &[(one, 1), (minus, 1)]), Err(Error::SameOrbit(_, _))));
    }

    #[test]
    fn kernel_of_evaluation_has_ideal_form() {
        let f = twisted();
        let one = Point::scalar(Cyclotomic::one());
        let ev = equivariant_evaluation(&f, &[(one, 1)]).unwrap();
        let ker = ev.matrix.kernel();
        let rep = ideal_form_check(&f, &ker).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.witness_support().len(), 2);
        let zero = ideal_form_check(&f, &[]).unwrap();
        assert!(zero.passed());
        assert_eq!(zero.multiplicities, vec![Some(1); 4]);
    }

    #[test]
    fn non_ideal_is_rejected() {
        let f = twisted();
        let v = unit_vector(f.dim(), 0);
        assert!(matches!(ideal_form_check(&f, &[v]), Err(Error::Precondition(_))));
    }

    #[test]
    fn trivial_group_gives_everything() {
        let g = sl21();
        let ring = RingSpec::laurent(1);
        let a = quotient_algebra(ring, IdealSpec::new(vec![(pt(1), 2)]).unwrap()).unwrap();
        let group = GroupAction::trivial(&ring, &a).unwrap();
        let m = build_map_algebra(g, Arc::new(a)).unwrap();
        let f = fixed_subalgebra(&m, vec![], group).unwrap();
        assert_eq!(f.dim(), m.dim());
        assert!(f.inclusion().is_identity());
        let e1 = equivariant_evaluation(&f, &[(pt(1), 1)]).unwrap();
        let e2 = evaluation_map(&m, &[(pt(1), 1)]).unwrap();
        assert_eq!(e1.matrix, e2.matrix);
    }
}
