//! Kac induction V̄(M) = Λ(g₋₁ ⊗ A/I) ⊗ M for type I gradings.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::weights::highest_weight_data;
use super::{Module, WeightFrame};
use crate::coordalg::QuotientAlgebra;
use crate::error::{Error, Result};
use crate::liesuper::{distinguished_grading, reductive_split, DistinguishedGrading, GradingType, Parity, SuperAlgebra};
use crate::linalg::{unit_vector, Coordinates, Matrix};
use crate::mapalg::{build_map_algebra, MapAlgebra};
use crate::scalars::Field;

/// Largest supported dim(g₋₁ ⊗ A/I).
const MAX_EXTERIOR: usize = 12;

/// g ⊗ A/I together with its degree-zero part g₀ ⊗ A/I.
#[derive(Debug, Clone)]
pub struct KacSetup<F> {
    pub full: MapAlgebra<F>,
    pub even: MapAlgebra<F>,
    pub grading: DistinguishedGrading,
    /// Indices of g spanning g₀, in the order of the subalgebra basis.
    pub zero: Vec<usize>,
    pub full_frame: Arc<WeightFrame<F>>,
    pub even_frame: Arc<WeightFrame<F>>,
}

pub fn kac_setup<F: Field>(g: Arc<SuperAlgebra<F>>, a: Arc<QuotientAlgebra<F>>) -> Result<KacSetup<F>> {
    let grading = distinguished_grading(&g)?;
    match grading.type_flag {
        GradingType::TypeII => return Err(Error::UnsupportedType(format!("{} is of type II", g.name()))),
        GradingType::LieAlgebra => return Err(Error::UnsupportedType(format!("{} has no odd part", g.name()))),
        _ => {}
    }
    if grading.degree.iter().any(|d| d.abs() > 1) {
        return Err(Error::UnsupportedType(format!("{} has no grading of depth one", g.name())));
    }
    let zero = grading.piece(0);
    let g0 = Arc::new(g.subalgebra(&zero)?);
    let full = build_map_algebra(g, a.clone())?;
    let even = build_map_algebra(g0, a)?;
    let full_frame = Arc::new(WeightFrame::for_map(&full)?);
    let even_frame = Arc::new(WeightFrame::for_map(&even)?);
    Ok(KacSetup { full, even, grading, zero, full_frame, even_frame })
}

impl<F: Field> KacSetup<F> {
    /// Basis of the center of g₀, in g₀ coordinates.
    pub fn center(&self) -> Result<Vec<Vec<F>>> {
        Ok(reductive_split(self.even.target())?.center)
    }

    /// The functional on g₀ ⊗ A/I vanishing on [g₀, g₀] ⊗ A/I with
    /// θ(z_c ⊗ f_j) = `values[c][j]` for the center basis z_c.
    pub fn central_functional(&self, values: &[Vec<F>]) -> Result<Vec<F>> {
        let g0 = self.even.target();
        let split = reductive_split(g0)?;
        let da = self.even.coefficients().dim();
        if values.len() != split.center.len() || values.iter().any(|v| v.len() != da) {
            return Err(Error::Dimension(format!(
                "expected {} rows of {da} values on the center",
                split.center.len()
            )));
        }
        let s = split.semisimple.len();
        let n = g0.dim();
        let coords = Coordinates::new(n, split.semisimple.into_iter().chain(split.center).collect())?;
        let mut theta = vec![F::zero(); self.even.dim()];
        for u in 0..n {
            let c = coords.coords(&unit_vector(n, u)).expect("basis of g₀");
            for j in 0..da {
                let t = &mut theta[self.even.index(u, j)];
                for (zc, row) in c[s..].iter().zip(values) {
                    t.add_mul(zc, &row[j]);
                }
            }
        }
        Ok(theta)
    }
}

/// An induced module with its exterior-algebra bookkeeping.
#[derive(Debug, Clone)]
pub struct KacInduction<F> {
    pub base: Module<F>,
    /// Basis of g₋₁ ⊗ A/I as indices of g ⊗ A/I.
    pub odd_minus: Vec<usize>,
    /// Monomials y_S as increasing lists of positions in `odd_minus`; basis
    /// vector (S, m) has index `position(S) * dim M + m`.
    pub exterior_basis: Vec<Vec<usize>>,
    pub total: Module<F>,
    /// 1 ⊗ (highest weight vector of M).
    pub generator: Vec<F>,
}

impl<F: Field> KacInduction<F> {
    pub fn dimension_law_holds(&self) -> bool {
        self.total.dim() == (1usize << self.odd_minus.len()) * self.base.dim()
    }
}

/// y_t ∧ y_S: `None` if t ∈ S, otherwise (sign is negative, new set).
fn wedge(t: usize, mask: u32) -> Option<(bool, u32)> {
    if mask >> t & 1 == 1 {
        return None;
    }
    let below = (mask & ((1u32 << t) - 1)).count_ones();
    Some((below % 2 == 1, mask | 1 << t))
}

fn elements(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

pub fn kac_module<F: Field>(setup: &KacSetup<F>, base: &Module<F>) -> Result<KacInduction<F>> {
    let full = &setup.full;
    let even = &setup.even;
    if base.algebra().labels() != even.algebra().labels() {
        return Err(Error::Dimension("base module is not over g₀ ⊗ A/I".into()));
    }
    let da = full.coefficients().dim();
    let degree = |p: usize| setup.grading.degree[p / da];
    let minus: Vec<usize> = (0..full.dim()).filter(|&p| degree(p) == -1).collect();
    let k = minus.len();
    if k > MAX_EXTERIOR {
        return Err(Error::Unsupported(format!("exterior algebra on {k} generators is too large")));
    }
    let pos_minus: BTreeMap<usize, usize> = minus.iter().enumerate().map(|(t, &p)| (p, t)).collect();
    let even_of: BTreeMap<usize, usize> = setup
        .zero
        .iter()
        .enumerate()
        .flat_map(|(a, &u)| (0..da).map(move |j| (a, u, j)))
        .map(|(a, u, j)| (full.index(u, j), even.index(a, j)))
        .collect();

    let mut masks: Vec<u32> = (0..1u32 << k).collect();
    masks.sort_by_key(|&m| (m.count_ones(), elements(m)));
    let sidx: HashMap<u32, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let dm = base.dim();
    let dim = masks.len() * dm;
    let idx = |mask: u32, m: usize| sidx[&mask] * dm + m;

    let parity: Vec<Parity> = masks
        .iter()
        .flat_map(|&mask| (0..dm).map(move |m| (mask, m)))
        .map(|(mask, m)| base.parity(m).plus(Parity::from_bit(mask.count_ones() as usize % 2)))
        .collect();

    let left: Vec<Matrix<F>> = (0..k)
        .map(|t| {
            let mut l = Matrix::zeros(dim, dim);
            for &mask in &masks {
                if let Some((neg, nm)) = wedge(t, mask) {
                    let s = if neg { F::one().neg() } else { F::one() };
                    for m in 0..dm {
                        l.set(idx(nm, m), idx(mask, m), s.clone());
                    }
                }
            }
            l
        })
        .collect();

    let bracket_into_minus = |p: usize, y: usize| -> Result<Vec<(usize, F)>> {
        full.algebra()
            .bracket_basis(p, y)
            .iter()
            .map(|(q, c)| {
                pos_minus.get(q).map(|&t| (t, c.clone())).ok_or_else(|| Error::Inconsistency("[g₀, g₋₁] leaves g₋₁".into()))
            })
            .collect()
    };

    let mut even_mats: BTreeMap<usize, Matrix<F>> = BTreeMap::new();
    for (&p, &q) in &even_of {
        let b = base.action(q);
        let mut mat = Matrix::zeros(dim, dim);
        for &mask in &masks {
            let s = sidx[&mask] * dm;
            for m in 0..dm {
                for m2 in 0..dm {
                    let x = b.get(m2, m);
                    if !x.is_zero() {
                        mat.set(s + m2, s + m, x.clone());
                    }
                }
            }
            for (i, &si) in elements(mask).iter().enumerate() {
                let rest = mask ^ 1 << si;
                for (t, c) in bracket_into_minus(p, minus[si])? {
                    if let Some((neg, nm)) = wedge(t, rest) {
                        let c = if neg ^ (i % 2 == 1) { c.neg() } else { c };
                        for m in 0..dm {
                            let e = mat.entry_mut(idx(nm, m), idx(mask, m));
                            *e = e.add(&c);
                        }
                    }
                }
            }
        }
        even_mats.insert(p, mat);
    }

    let mut action = Vec::with_capacity(full.dim());
    for p in 0..full.dim() {
        let m = match degree(p) {
            -1 => left[pos_minus[&p]].clone(),
            0 => even_mats[&p].clone(),
            1 => {
                // Z(y_{s1} y_R ⊗ m) = [z, y_{s1}](y_R ⊗ m) − y_{s1} Z(y_R ⊗ m)
                let mut cols: Vec<Vec<F>> = vec![vec![F::zero(); dim]; dim];
                for &mask in masks.iter().filter(|&&m| m != 0) {
                    let s1 = mask.trailing_zeros() as usize;
                    let rest = mask ^ 1 << s1;
                    let zero_part = full.algebra().bracket_basis(p, minus[s1]);
                    for mm in 0..dm {
                        let src = idx(rest, mm);
                        let mut col = vec![F::zero(); dim];
                        for (q, c) in zero_part {
                            let mat = even_mats.get(q).ok_or_else(|| Error::Inconsistency("[g₁, g₋₁] leaves g₀".into()))?;
                            for (r, o) in col.iter_mut().enumerate() {
                                o.add_mul(c, mat.get(r, src));
                            }
                        }
                        let lz = left[s1].mul_vec(&cols[src]);
                        for (o, x) in col.iter_mut().zip(lz) {
                            *o = o.sub(&x);
                        }
                        cols[idx(mask, mm)] = col;
                    }
                }
                Matrix::from_columns(&cols, dim)
            }
            d => return Err(Error::UnsupportedType(format!("degree {d} in a depth-one grading"))),
        };
        action.push(m);
    }
    let total = Module::new(full.algebra().clone(), parity, action)?
        .with_frame(setup.full_frame.clone())
        .with_name(format!("Kac({})", base.name()));

    let top = if dm == 1 { vec![F::one()] } else { highest_weight_data(base)?.vector };
    let mut generator = vec![F::zero(); dim];
    generator[..dm].clone_from_slice(&top);
    Ok(KacInduction {
        base: base.clone(),
        odd_minus: minus,
        exterior_basis: masks.iter().map(|&m| elements(m)).collect(),
        total,
        generator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordalg::{quotient_algebra, IdealSpec, Point, RingSpec};
    use crate::liesuper::construct_basic;
    use crate::modules::{annihilator_ideal, irreducible_quotient, is_irreducible, one_dim_module, trivial_module};
    use crate::scalars::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn setup(points: &[(i64, u32)]) -> KacSetup<Rational> {
        let g = Arc::new(construct_basic("sl", &[2, 1]).unwrap());
        let ideal = IdealSpec::new(points.iter().map(|&(a, n)| (Point::scalar(Rational::integer(a)), n)).collect()).unwrap();
        let a = quotient_algebra(RingSpec::polynomial(1), ideal).unwrap();
        kac_setup(g, Arc::new(a)).unwrap()
    }

    fn central(s: &KacSetup<Rational>, values: Vec<Rational>) -> Module<Rational> {
        let theta = s.central_functional(&[values]).unwrap();
        one_dim_module(s.even.algebra(), &theta).unwrap().with_frame(s.even_frame.clone())
    }

    #[test]
    fn dimension_law() {
        let s = setup(&[(0, 1)]);
        let k = kac_module(&s, &trivial_module(s.even.algebra())).unwrap();
        assert_eq!(k.total.dim(), 4);
        assert!(k.dimension_law_holds());
        let s2 = setup(&[(0, 2)]);
        let k2 = kac_module(&s2, &trivial_module(s2.even.algebra())).unwrap();
        assert_eq!(k2.total.dim(), 16);
        assert!(k2.dimension_law_holds());
    }

    #[test]
    fn trivial_base_gives_trivial_top() {
        let s = setup(&[(0, 1)]);
        let k = kac_module(&s, &trivial_module(s.even.algebra())).unwrap();
        let top = irreducible_quotient(&k.total, &k.generator).unwrap();
        assert_eq!(top.module.dim(), 1);
        assert_eq!(top.radical_dim, 3);
    }

    #[test]
    fn generic_central_character_is_typical() {
        let s = setup(&[(0, 1)]);
        let m = central(&s, vec![q(7, 3)]);
        let k = kac_module(&s, &m).unwrap();
        let top = irreducible_quotient(&k.total, &k.generator).unwrap();
        assert_eq!(top.radical_dim, 0);
        assert_eq!(top.module.dim(), 4);
        assert!(is_irreducible(&top.module).irreducible);
    }

    #[test]
    fn annihilators_agree_for_nilpotent_twist() {
        let s = setup(&[(2, 2)]);
        let m = central(&s, vec![q(5, 2), q(1, 1)]);
        let k = kac_module(&s, &m).unwrap();
        let top = irreducible_quotient(&k.total, &k.generator).unwrap();
        let am = annihilator_ideal(&m, &s.even).unwrap();
        let av = annihilator_ideal(&top.module, &s.full).unwrap();
        assert_eq!(am.basis, av.basis);
        assert_eq!(av.multiplicities, vec![Some(2)]);
        assert!(!av.reduced);
        assert!(av.tensor_form);
        assert!(am.basis.is_empty());
    }

    #[test]
    fn type_ii_is_rejected() {
        let g = Arc::new(construct_basic::<Rational>("osp", &[1, 2]).unwrap());
        let a = quotient_algebra(RingSpec::polynomial(1), IdealSpec::new(vec![(Point::scalar(Rational::zero()), 1)]).unwrap()).unwrap();
        assert!(matches!(kac_setup(g, Arc::new(a)), Err(Error::UnsupportedType(_))));
    }
}
