//! Classification parameters (Ψ and θ data), the modules they build, and
//! verification harnesses comparing them against probe pools.

mod pools;
mod report;
mod verify;

use std::sync::Arc;

pub use pools::{kac_seed, osp12_pool, sl21_pool, twisted_sl21_pool};
pub use report::{Check, Report, Verdict};
pub use verify::{quasifinite_equivalences, quasifinite_with_table, verify_twisted, verify_untwisted, Parameter, Probe, TwistedPool, UntwistedPool};

use crate::coordalg::{local_dim, Point};
use crate::error::{Error, Result};
use crate::liesuper::{distinguished_grading, reductive_split, SuperAlgebra};
use crate::linalg::{kernel_of_rows, unit_vector, Coordinates, Echelon, Matrix};
use crate::mapalg::{equivariant_evaluation, evaluation_map, FixedSubalgebra, MapAlgebra};
use crate::modules::{
    evaluation_module, irreducible_quotient, is_irreducible, kac_module, kac_setup, one_dim_module, pullback,
    tensor_product, trivial_module, IrreducibleQuotient, KacInduction, KacSetup, Module, WeightFrame,
};
use crate::scalars::Field;

fn is_trivial<F: Field>(v: &Module<F>) -> bool {
    v.dim() == 1 && v.actions().iter().all(Matrix::is_zero)
}

/// Ψ: finitely many points, each carrying a nontrivial irreducible module.
#[derive(Debug, Clone)]
pub struct EvalDatum<F> {
    assignments: Vec<(Point<F>, Module<F>)>,
}

impl<F: Field> EvalDatum<F> {
    /// Drops trivial entries; rejects repeated points and reducible modules.
    pub fn new(assignments: Vec<(Point<F>, Module<F>)>) -> Result<Self> {
        let assignments: Vec<_> = assignments.into_iter().filter(|(_, v)| !is_trivial(v)).collect();
        for (a, (p, v)) in assignments.iter().enumerate() {
            if assignments[..a].iter().any(|(q, _)| q == p) {
                return Err(Error::Precondition(format!("point {p} is assigned twice")));
            }
            if !is_irreducible(v).irreducible {
                return Err(Error::Precondition(format!("{} at {p} is not irreducible", v.name())));
            }
        }
        if let Some((_, v)) = assignments.first() {
            if assignments.iter().any(|(_, w)| w.algebra().labels() != v.algebra().labels()) {
                return Err(Error::Dimension("assigned modules live over different algebras".into()));
            }
        }
        Ok(EvalDatum { assignments })
    }

    pub fn empty() -> Self {
        EvalDatum { assignments: Vec::new() }
    }

    pub fn assignments(&self) -> &[(Point<F>, Module<F>)] {
        &self.assignments
    }

    pub fn support(&self) -> Vec<Point<F>> {
        self.assignments.iter().map(|(p, _)| p.clone()).collect()
    }

    pub fn get(&self, p: &Point<F>) -> Option<&Module<F>> {
        self.assignments.iter().find(|(q, _)| q == p).map(|(_, v)| v)
    }

    pub fn describe(&self) -> Vec<(String, String)> {
        self.assignments.iter().map(|(p, v)| (p.to_string(), v.name().to_string())).collect()
    }
}

/// ev_Ψ over g ⊗ A/I.
pub fn build_ev_psi<F: Field>(psi: &EvalDatum<F>, m: &MapAlgebra<F>) -> Result<Module<F>> {
    evaluation_module(m, psi.assignments())
}

/// A functional on z(g₀) ⊗ A/m_p^ℓ: `values[c][k]` is its value on
/// z_c ⊗ (k-th local monomial at p).
#[derive(Debug, Clone, PartialEq)]
pub struct LocalForm<F> {
    pub point: Point<F>,
    pub level: u32,
    pub values: Vec<Vec<F>>,
}

/// θ: finitely many local forms at distinct points.
#[derive(Debug, Clone, PartialEq)]
pub struct AbelianFormDatum<F> {
    forms: Vec<LocalForm<F>>,
}

impl<F: Field> AbelianFormDatum<F> {
    /// Drops zero forms; checks shapes against `vars` coordinates and
    /// `center_dim` central elements.
    pub fn new(forms: Vec<LocalForm<F>>, vars: usize, center_dim: usize) -> Result<Self> {
        let forms: Vec<_> = forms.into_iter().filter(|f| f.values.iter().flatten().any(|x| !x.is_zero())).collect();
        for (a, f) in forms.iter().enumerate() {
            if forms[..a].iter().any(|g| g.point == f.point) {
                return Err(Error::Precondition(format!("point {} carries two forms", f.point)));
            }
            let n = local_dim(vars, f.level);
            if f.level == 0 || f.values.len() != center_dim || f.values.iter().any(|v| v.len() != n) {
                return Err(Error::Dimension(format!(
                    "form at {} needs {center_dim} rows of {n} values",
                    f.point
                )));
            }
        }
        Ok(AbelianFormDatum { forms })
    }

    pub fn empty() -> Self {
        AbelianFormDatum { forms: Vec::new() }
    }

    /// A single form at level one.
    pub fn constant(point: Point<F>, values: Vec<F>) -> Self {
        AbelianFormDatum { forms: vec![LocalForm { point, level: 1, values: values.into_iter().map(|x| vec![x]).collect() }] }
            .pruned()
    }

    fn pruned(self) -> Self {
        AbelianFormDatum { forms: self.forms.into_iter().filter(|f| f.values.iter().flatten().any(|x| !x.is_zero())).collect() }
    }

    pub fn forms(&self) -> &[LocalForm<F>] {
        &self.forms
    }

    /// Union of two data with disjoint supports.
    pub fn merge(&self, o: &Self) -> Result<Self> {
        if self.forms.iter().any(|f| o.forms.iter().any(|g| g.point == f.point)) {
            return Err(Error::Precondition("forms overlap".into()));
        }
        Ok(AbelianFormDatum { forms: self.forms.iter().chain(&o.forms).cloned().collect() })
    }
}

/// One representative point per orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSelection<F> {
    representatives: Vec<Point<F>>,
}

impl<F: Field> OrbitSelection<F> {
    pub fn new(representatives: Vec<Point<F>>, f: &FixedSubalgebra<F>) -> Result<Self> {
        for (a, p) in representatives.iter().enumerate() {
            if let Some(q) = representatives[..a].iter().find(|q| f.group().same_orbit(p, q)) {
                return Err(Error::SameOrbit(q.to_string(), p.to_string()));
            }
        }
        Ok(OrbitSelection { representatives })
    }

    pub fn representatives(&self) -> &[Point<F>] {
        &self.representatives
    }
}

/// Matrix of γ on g for the group element `a`.
fn target_matrix<F: Field>(f: &FixedSubalgebra<F>, a: &[u64]) -> Matrix<F> {
    let gens: Vec<Matrix<F>> = f.target_autos().iter().map(|t| t.matrix().clone()).collect();
    if gens.is_empty() {
        return Matrix::identity(f.ambient().target().dim());
    }
    f.group().element_matrix(&gens, a)
}

/// γ[ρ] = [ρ ∘ γ⁻¹].
fn twist<F: Field>(v: &Module<F>, f: &FixedSubalgebra<F>, a: &[u64]) -> Result<Module<F>> {
    let inv = f.group().negate(&a.to_vec());
    let w = pullback(v, f.ambient().target(), &target_matrix(f, &inv))?;
    Ok(w.with_name(format!("{}^{:?}", v.name(), a)))
}

/// A Γ-equivariant Ψ, listed on whole orbits.
#[derive(Debug, Clone)]
pub struct EquivariantEvalDatum<F> {
    base: EvalDatum<F>,
    selection: OrbitSelection<F>,
}

impl<F: Field> EquivariantEvalDatum<F> {
    /// Checks Ψ(γm) ≅ γΨ(m) for every assigned m and every γ.
    pub fn new(base: EvalDatum<F>, f: &FixedSubalgebra<F>) -> Result<Self> {
        let group = f.group();
        let mut reps: Vec<Point<F>> = Vec::new();
        for (p, v) in base.assignments() {
            for a in group.elements() {
                let q = group.element_point_map(a).apply(p);
                let expected = twist(v, f, a)?;
                match base.get(&q) {
                    Some(w) if crate::modules::isomorphic(w, &expected) => {}
                    Some(w) => {
                        return Err(Error::Equivariance(format!("{} at {q} is not the twist of {} at {p}", w.name(), v.name())))
                    }
                    None => return Err(Error::Equivariance(format!("{q} is unassigned but lies in the orbit of {p}"))),
                }
            }
            if !reps.iter().any(|r| group.same_orbit(r, p)) {
                reps.push(p.clone());
            }
        }
        let selection = OrbitSelection::new(reps, f)?;
        Ok(EquivariantEvalDatum { base, selection })
    }

    /// Extends values on representatives along their orbits.
    pub fn from_orbits(reps: Vec<(Point<F>, Module<F>)>, f: &FixedSubalgebra<F>) -> Result<Self> {
        let group = f.group();
        let reps: Vec<_> = reps.into_iter().filter(|(_, v)| !is_trivial(v)).collect();
        let selection = OrbitSelection::new(reps.iter().map(|(p, _)| p.clone()).collect(), f)?;
        let mut all = Vec::new();
        for (p, v) in &reps {
            for a in group.elements() {
                let q = group.element_point_map(a).apply(p);
                if all.iter().any(|(r, _): &(Point<F>, Module<F>)| *r == q) {
                    continue;
                }
                all.push((q, if a.iter().all(|&k| k == 0) { v.clone() } else { twist(v, f, a)? }));
            }
        }
        Ok(EquivariantEvalDatum { base: EvalDatum::new(all)?, selection })
    }

    pub fn base(&self) -> &EvalDatum<F> {
        &self.base
    }

    pub fn selection(&self) -> &OrbitSelection<F> {
        &self.selection
    }

    /// The same datum with each representative moved to another point of
    /// its orbit, where one exists.
    pub fn alternative_selection(&self, f: &FixedSubalgebra<F>) -> OrbitSelection<F> {
        let representatives = self
            .selection
            .representatives
            .iter()
            .map(|p| f.group().orbit(p).into_iter().find(|q| q != p).unwrap_or_else(|| p.clone()))
            .collect();
        OrbitSelection { representatives }
    }
}

/// ev^Γ_Ψ over (g ⊗ A/I)^Γ, evaluated at the given representatives.
pub fn build_ev_gamma<F: Field>(
    psi: &EquivariantEvalDatum<F>,
    f: &FixedSubalgebra<F>,
    selection: &OrbitSelection<F>,
) -> Result<Module<F>> {
    let reps = selection.representatives();
    if reps.is_empty() {
        return Ok(trivial_module(f.algebra()));
    }
    let mut assignments = Vec::new();
    for r in reps {
        let v = psi
            .base
            .get(r)
            .ok_or_else(|| Error::Precondition(format!("{r} is not in the support of the datum")))?;
        assignments.push((r.clone(), v.clone()));
    }
    if assignments.len() != psi.selection.representatives.len() {
        return Err(Error::Precondition("selection does not cover every orbit".into()));
    }
    let targets: Vec<(Point<F>, u32)> = reps.iter().map(|p| (p.clone(), 1)).collect();
    let ev = equivariant_evaluation(f, &targets)?;
    let w = evaluation_module(&ev.target, &assignments)?;
    let names: Vec<String> = assignments.iter().map(|(p, v)| format!("{}@{p}", v.name())).collect();
    Ok(pullback(&w, f.algebra(), &ev.matrix)?.with_name(format!("ev^G[{}]", names.join(", "))))
}

/// The degree-zero part g₀ of the distinguished grading, as a subalgebra.
pub fn even_zero<F: Field>(g: &SuperAlgebra<F>) -> Result<Arc<SuperAlgebra<F>>> {
    let grading = distinguished_grading(g)?;
    Ok(Arc::new(g.subalgebra(&grading.piece(0))?))
}

/// The functional on g₀ vanishing on [g₀, g₀] with values on the center basis.
pub fn central_character<F: Field>(g0: &SuperAlgebra<F>, values: &[F]) -> Result<Vec<F>> {
    let split = reductive_split(g0)?;
    if values.len() != split.center.len() {
        return Err(Error::Dimension(format!("expected {} central values", split.center.len())));
    }
    let s = split.semisimple.len();
    let n = g0.dim();
    let coords = Coordinates::new(n, split.semisimple.into_iter().chain(split.center).collect())?;
    Ok((0..n)
        .map(|u| {
            let c = coords.coords(&unit_vector(n, u)).expect("basis of g₀");
            let mut t = F::zero();
            for (a, b) in c[s..].iter().zip(values) {
                t.add_mul(a, b);
            }
            t
        })
        .collect())
}

/// The g₁-invariants of an irreducible g-module as a g₀-module, split into
/// central values and the module with the center acting by zero.
pub fn kac_parameter<F: Field>(v: &Module<F>) -> Result<(Vec<F>, Module<F>)> {
    let g = v.algebra();
    let grading = distinguished_grading(g)?;
    let zero = grading.piece(0);
    let g0 = Arc::new(g.subalgebra(&zero)?);
    let mut incl = Matrix::zeros(g.dim(), zero.len());
    for (k, &i) in zero.iter().enumerate() {
        incl.set(i, k, F::one());
    }
    let restricted = pullback(v, &g0, &incl)?;
    let d = v.dim();
    let mut rows = Vec::new();
    for i in grading.piece(1) {
        rows.extend(v.action(i).to_rows());
    }
    let top = kernel_of_rows(rows, d);
    let top = Echelon::from_vectors(d, top).into_rref().0;
    let m = restricted.submodule(&top)?;
    let split = reductive_split(&g0)?;
    let mut values = Vec::new();
    for z in &split.center {
        let a = m.act(z);
        let s = a.get(0, 0).clone();
        if !a.sub(&Matrix::identity(m.dim()).scale(&s)).is_zero() {
            return Err(Error::Precondition("center does not act by scalars on the invariants".into()));
        }
        values.push(s);
    }
    let neg: Vec<F> = values.iter().map(Field::neg).collect();
    let shift = one_dim_module(&g0, &central_character(&g0, &neg)?)?;
    let stripped = tensor_product(&m, &shift)?.with_name(format!("top({})", v.name()));
    Ok((values, stripped))
}

/// V(θ ⊗ ev_Ψ) together with the intermediate objects.
#[derive(Debug, Clone)]
pub struct ThetaPsiBuild<F> {
    /// Points and multiplicities of the cut quotient A'.
    pub targets: Vec<(Point<F>, u32)>,
    pub setup: Option<KacSetup<F>>,
    /// M over g₀ ⊗ A'.
    pub base: Option<Module<F>>,
    pub kac: Option<KacInduction<F>>,
    pub quotient: Option<IrreducibleQuotient<F>>,
    /// The result over g ⊗ A/I.
    pub module: Module<F>,
}

/// V(θ ⊗ ev_Ψ) for Ψ over g₀ with the center acting by zero.
pub fn build_v_theta_psi<F: Field>(
    theta: &AbelianFormDatum<F>,
    psi: &EvalDatum<F>,
    m: &MapAlgebra<F>,
) -> Result<ThetaPsiBuild<F>> {
    let g = m.target();
    let frame = Arc::new(WeightFrame::for_map(m)?);
    let mut targets: Vec<(Point<F>, u32)> = theta.forms().iter().map(|f| (f.point.clone(), f.level)).collect();
    for p in psi.support() {
        if !targets.iter().any(|(q, _)| *q == p) {
            targets.push((p, 1));
        }
    }
    if targets.is_empty() {
        let grading = distinguished_grading(g)?;
        if matches!(grading.type_flag, crate::liesuper::GradingType::TypeII) {
            return Err(Error::UnsupportedType(format!("{} is of type II", g.name())));
        }
        let module = trivial_module(m.algebra()).with_frame(frame);
        return Ok(ThetaPsiBuild { targets, setup: None, base: None, kac: None, quotient: None, module });
    }
    let ev = evaluation_map(m, &targets)?;
    let setup = kac_setup(g.clone(), ev.target.coefficients().clone())?;
    let a = setup.even.coefficients();
    let center_dim = setup.center()?.len();
    let mut values = vec![vec![F::zero(); a.dim()]; center_dim];
    for form in theta.forms() {
        let block = a.point_blocks()[a.block_index(&form.point)?].clone();
        for (row, vals) in values.iter_mut().zip(&form.values) {
            for (k, x) in block.clone().zip(vals) {
                row[k] = x.clone();
            }
        }
    }
    let functional = setup.central_functional(&values)?;
    let twist = one_dim_module(setup.even.algebra(), &functional)?;
    let ev_psi = evaluation_module(&setup.even, psi.assignments())?;
    let base = tensor_product(&twist, &ev_psi)?.with_frame(setup.even_frame.clone()).with_name("M");
    let kac = kac_module(&setup, &base)?;
    let quotient = irreducible_quotient(&kac.total, &kac.generator)?;
    let module = pullback(&quotient.module, m.algebra(), &ev.matrix)?.with_frame(frame).with_name("V(M)");
    Ok(ThetaPsiBuild { targets, setup: Some(setup), base: Some(base), kac: Some(kac), quotient: Some(quotient), module })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordalg::{quotient_algebra, IdealSpec, RingSpec};
    use crate::liesuper::construct_basic;
    use crate::mapalg::build_map_algebra;
    use crate::modules::{annihilator_ideal, isomorphic, natural_module};
    use crate::scalars::Rational;

    fn pt(a: i64) -> Point<Rational> {
        Point::scalar(Rational::integer(a))
    }

    fn sl21_map(points: &[(i64, u32)]) -> MapAlgebra<Rational> {
        let g = Arc::new(construct_basic("sl", &[2, 1]).unwrap());
        let ideal = IdealSpec::new(points.iter().map(|&(a, n)| (pt(a), n)).collect()).unwrap();
        build_map_algebra(g, Arc::new(quotient_algebra(RingSpec::polynomial(1), ideal).unwrap())).unwrap()
    }

    #[test]
    fn natural_at_a_point() {
        let m = sl21_map(&[(0, 1), (1, 1)]);
        let n = natural_module(m.target()).unwrap();
        let psi = EvalDatum::new(vec![(pt(0), n)]).unwrap();
        let v = build_ev_psi(&psi, &m).unwrap();
        assert_eq!(v.dim(), 3);
        assert!(is_irreducible(&v).irreducible);
    }

    #[test]
    fn empty_data_give_trivial_modules() {
        let m = sl21_map(&[(0, 1)]);
        assert_eq!(build_ev_psi(&EvalDatum::empty(), &m).unwrap().dim(), 1);
        let b = build_v_theta_psi(&AbelianFormDatum::empty(), &EvalDatum::empty(), &m).unwrap();
        assert_eq!(b.module.dim(), 1);
        assert!(b.module.actions().iter().all(Matrix::is_zero));
    }

    #[test]
    fn trivial_entries_are_dropped_and_repeats_rejected() {
        let m = sl21_map(&[(0, 1)]);
        let n = natural_module(m.target()).unwrap();
        let t = trivial_module(m.target());
        let psi = EvalDatum::new(vec![(pt(0), t), (pt(1), n.clone())]).unwrap();
        assert_eq!(psi.support(), vec![pt(1)]);
        assert!(EvalDatum::new(vec![(pt(1), n.clone()), (pt(1), n)]).is_err());
    }

    #[test]
    fn natural_recovered_from_its_kac_parameter() {
        let m = sl21_map(&[(0, 1), (1, 1)]);
        let n = natural_module(m.target()).unwrap();
        let (values, top) = kac_parameter(&n).unwrap();
        assert_eq!(top.dim(), 2);
        let theta = AbelianFormDatum::constant(pt(1), values);
        let psi = EvalDatum::new(vec![(pt(1), top)]).unwrap();
        let built = build_v_theta_psi(&theta, &psi, &m).unwrap();
        let direct = build_ev_psi(&EvalDatum::new(vec![(pt(1), n)]).unwrap(), &m).unwrap();
        assert_eq!(built.module.dim(), 3);
        assert!(isomorphic(&built.module, &direct));
    }

    #[test]
    fn level_two_form_gives_a_generalized_evaluation_module() {
        let m = sl21_map(&[(0, 2)]);
        let theta = AbelianFormDatum::new(
            vec![LocalForm { point: pt(0), level: 2, values: vec![vec![Rational::new(5, 2).unwrap(), Rational::one()]] }],
            1,
            1,
        )
        .unwrap();
        let b = build_v_theta_psi(&theta, &EvalDatum::empty(), &m).unwrap();
        assert!(is_irreducible(&b.module).irreducible);
        let ann = annihilator_ideal(&b.module, &m).unwrap();
        assert_eq!(ann.multiplicities, vec![Some(2)]);
        assert!(!ann.reduced);
    }

    #[test]
    fn type_ii_targets_are_rejected() {
        let g = Arc::new(construct_basic::<Rational>("osp", &[1, 2]).unwrap());
        let a = quotient_algebra(RingSpec::polynomial(1), IdealSpec::new(vec![(pt(0), 1)]).unwrap()).unwrap();
        let m = build_map_algebra(g, Arc::new(a)).unwrap();
        let r = build_v_theta_psi(&AbelianFormDatum::empty(), &EvalDatum::empty(), &m);
        assert!(matches!(r, Err(Error::UnsupportedType(_))));
    }
}
