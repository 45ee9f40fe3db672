//! Fixed probe pools for the three verification settings.

use std::sync::Arc;

use super::verify::{Parameter, Probe, TwistedPool, UntwistedPool};
use super::{kac_parameter, AbelianFormDatum, EquivariantEvalDatum, EvalDatum, LocalForm};
use crate::coordalg::{quotient_algebra, GroupAction, IdealSpec, Point, PointMap, RingSpec};
use crate::error::{Error, Result};
use crate::liesuper::{construct_basic, Automorphism, SuperAlgebra};
use crate::linalg::Matrix;
use crate::mapalg::{build_map_algebra, evaluation_map, fixed_subalgebra, MapAlgebra};
use crate::modules::{
    adjoint_module, decompose, evaluation_module, irreducible_quotient, kac_module, kac_setup, natural_module,
    one_dim_module, pullback, tensor_product, Module, WeightFrame,
};
use crate::scalars::{Cyclotomic, Field, Rational};

fn q<F: Field>(n: i64, d: i64) -> F {
    F::from_rational(&Rational::new(n, d).expect("nonzero denominator"))
}

fn pt<F: Field>(a: i64) -> Point<F> {
    Point::scalar(F::from_i64(a))
}

fn map_algebra<F: Field>(g: &Arc<SuperAlgebra<F>>, ring: RingSpec, points: Vec<(Point<F>, u32)>) -> Result<MapAlgebra<F>> {
    let a = quotient_algebra(ring, IdealSpec::new(points)?)?;
    build_map_algebra(g.clone(), Arc::new(a))
}

/// V(θ) over g ⊗ k[t]/(t − a)^n for a central form with values
/// `values` on z ⊗ (t − a)^k, pulled back to g ⊗ A along the evaluation.
fn local_kac<F: Field>(m: &MapAlgebra<F>, p: &Point<F>, values: Vec<F>) -> Result<Module<F>> {
    let n = values.len() as u32;
    let ev = evaluation_map(m, &[(p.clone(), n)])?;
    let setup = kac_setup(m.target().clone(), ev.target.coefficients().clone())?;
    let theta = setup.central_functional(&[values])?;
    let base = one_dim_module(setup.even.algebra(), &theta)?.with_frame(setup.even_frame.clone());
    let kac = kac_module(&setup, &base)?;
    let top = irreducible_quotient(&kac.total, &kac.generator)?;
    Ok(pullback(&top.module, m.algebra(), &ev.matrix)?.with_frame(Arc::new(WeightFrame::for_map(m)?)))
}

/// The typical g-module V(c) induced from the central character c.
pub fn kac_seed<F: Field>(g: &Arc<SuperAlgebra<F>>, c: F, name: &str) -> Result<Module<F>> {
    let zero = pt::<F>(0);
    let m = map_algebra(g, RingSpec::polynomial(1), vec![(zero.clone(), 1)])?;
    let over_map = local_kac(&m, &zero, vec![c])?;
    let mut phi = Matrix::zeros(m.dim(), g.dim());
    for u in 0..g.dim() {
        phi.set(m.index(u, 0), u, F::one());
    }
    let mut v = pullback(&over_map, g, &phi)?.with_name(name);
    if let Ok(f) = WeightFrame::for_lie(g) {
        v = v.with_frame(Arc::new(f));
    }
    Ok(v)
}

fn ev<F: Field>(m: &MapAlgebra<F>, items: &[(&Module<F>, &Point<F>)]) -> Result<Module<F>> {
    let assignments: Vec<(Point<F>, Module<F>)> = items.iter().map(|(v, p)| ((*p).clone(), (*v).clone())).collect();
    evaluation_module(m, &assignments)
}

fn with_frame<F: Field>(v: Module<F>, m: &MapAlgebra<F>) -> Result<Module<F>> {
    Ok(v.with_frame(Arc::new(WeightFrame::for_map(m)?)))
}

fn factors<F: Field>(v: &Module<F>, prefix: &str) -> Result<Vec<Probe<F>>> {
    Ok(decompose(v)?
        .into_iter()
        .enumerate()
        .map(|(k, (f, _))| Probe { name: format!("{prefix}/{k}"), module: f })
        .collect())
}

/// osp(1|2) over k[t, t⁻¹]/((t − 1)²(t + 1)²), Ψ-data with values among
/// the natural module and the five-dimensional factor of its square.
pub fn osp12_pool() -> Result<UntwistedPool<Rational>> {
    let g: Arc<SuperAlgebra<Rational>> = Arc::new(construct_basic("osp", &[1, 2])?);
    let (p, r) = (pt::<Rational>(1), pt::<Rational>(-1));
    let m = map_algebra(&g, RingSpec::laurent(1), vec![(p.clone(), 2), (r.clone(), 2)])?;
    let n = natural_module(&g)?.with_name("N");
    let l5 = decompose(&tensor_product(&n, &n)?)?
        .into_iter()
        .map(|(f, _)| f)
        .find(|f| f.dim() == 5)
        .ok_or_else(|| Error::Inconsistency("no five-dimensional factor in N ⊗ N".into()))?
        .with_name("L5");
    let seeds: [Option<&Module<Rational>>; 3] = [None, Some(&n), Some(&l5)];
    let mut parameters = Vec::new();
    for a in seeds {
        for b in seeds {
            let mut items = Vec::new();
            if let Some(a) = a {
                items.push((p.clone(), a.clone()));
            }
            if let Some(b) = b {
                items.push((r.clone(), b.clone()));
            }
            let name = label(&items);
            parameters.push((name, Parameter::Psi(EvalDatum::new(items)?)));
        }
    }
    let mut probes = vec![Probe { name: "trivial".into(), module: ev(&m, &[])? }];
    for (v, x) in [(&n, &p), (&n, &r), (&l5, &p), (&l5, &r)] {
        probes.push(Probe { name: format!("{}@{x}", v.name()), module: ev(&m, &[(v, x)])? });
    }
    for (a, b) in [(&n, &n), (&n, &l5), (&l5, &n), (&l5, &l5)] {
        let t = tensor_product(&ev(&m, &[(a, &p)])?, &ev(&m, &[(b, &r)])?)?;
        probes.push(Probe { name: format!("{}@{p}x{}@{r}", a.name(), b.name()), module: t });
    }
    let square = tensor_product(&ev(&m, &[(&n, &p)])?, &ev(&m, &[(&n, &p)])?)?;
    probes.extend(factors(&square, &format!("NxN@{p}"))?);
    probes.extend(factors(&with_frame(adjoint_module(m.algebra())?, &m)?, "adjoint")?);
    // Parameters are listed a-major: index 3a + b.
    let tensor_checks = vec![(4, 3, 1), (5, 3, 2), (7, 6, 1), (8, 6, 2)];
    Ok(UntwistedPool { name: "osp(1|2) untwisted".into(), map: m, parameters, probes, tensor_checks })
}

fn label<F: Field>(items: &[(Point<F>, Module<F>)]) -> String {
    if items.is_empty() {
        return "trivial".into();
    }
    items.iter().map(|(p, v)| format!("{}@{p}", v.name())).collect::<Vec<_>>().join("+")
}

fn form<F: Field>(p: &Point<F>, values: Vec<F>) -> LocalForm<F> {
    LocalForm { point: p.clone(), level: values.len() as u32, values: vec![values] }
}

/// sl(2,1) over k[t]/(t²(t − 1)): (θ, Ψ) data from typical central
/// characters, a level-two form, and the tops of the natural and adjoint
/// modules.
pub fn sl21_pool() -> Result<UntwistedPool<Rational>> {
    let g: Arc<SuperAlgebra<Rational>> = Arc::new(construct_basic("sl", &[2, 1])?);
    let (o, e) = (pt::<Rational>(0), pt::<Rational>(1));
    let m = map_algebra(&g, RingSpec::polynomial(1), vec![(o.clone(), 2), (e.clone(), 1)])?;
    let n = natural_module(&g)?.with_name("N");
    let ad = adjoint_module(&g)?.with_name("ad");
    let (s_n, top_n) = kac_parameter(&n)?;
    let (s_ad, top_ad) = kac_parameter(&ad)?;

    let theta = |fs: Vec<LocalForm<Rational>>| AbelianFormDatum::new(fs, 1, 1);
    let psi = |items: Vec<(Point<Rational>, Module<Rational>)>| EvalDatum::new(items);
    let k7 = || form(&o, vec![q(7, 3)]);
    let k5 = || form(&e, vec![q(5, 2)]);
    let nat = |p: &Point<Rational>| (form(p, s_n.clone()), (p.clone(), top_n.clone()));
    let adj = |p: &Point<Rational>| (form(p, s_ad.clone()), (p.clone(), top_ad.clone()));
    let (n0, n0_psi) = nat(&o);
    let (n1, n1_psi) = nat(&e);
    let (a0, a0_psi) = adj(&o);
    let (a1, a1_psi) = adj(&e);
    let parameters = vec![
        ("trivial".to_string(), Parameter::ThetaPsi(AbelianFormDatum::empty(), EvalDatum::empty())),
        ("K(7/3)@0".into(), Parameter::ThetaPsi(theta(vec![k7()])?, EvalDatum::empty())),
        ("K(5/2)@1".into(), Parameter::ThetaPsi(theta(vec![k5()])?, EvalDatum::empty())),
        ("level2(5/2,1)@0".into(), Parameter::ThetaPsi(theta(vec![form(&o, vec![q(5, 2), q(1, 1)])])?, EvalDatum::empty())),
        ("N@0".into(), Parameter::ThetaPsi(theta(vec![n0.clone()])?, psi(vec![n0_psi.clone()])?)),
        ("N@1".into(), Parameter::ThetaPsi(theta(vec![n1.clone()])?, psi(vec![n1_psi.clone()])?)),
        ("K(7/3)@0+N@1".into(), Parameter::ThetaPsi(theta(vec![k7(), n1.clone()])?, psi(vec![n1_psi.clone()])?)),
        ("N@0+N@1".into(), Parameter::ThetaPsi(theta(vec![n0, n1])?, psi(vec![n0_psi, n1_psi])?)),
        ("K(7/3)@0+K(5/2)@1".into(), Parameter::ThetaPsi(theta(vec![k7(), k5()])?, EvalDatum::empty())),
        ("ad@0".into(), Parameter::ThetaPsi(theta(vec![a0])?, psi(vec![a0_psi])?)),
        ("ad@1".into(), Parameter::ThetaPsi(theta(vec![a1])?, psi(vec![a1_psi])?)),
    ];

    let k7_seed = kac_seed(&g, q(7, 3), "K(7/3)")?;
    let k5_seed = kac_seed(&g, q(5, 2), "K(5/2)")?;
    let ev_n0 = ev(&m, &[(&n, &o)])?;
    let ev_n1 = ev(&m, &[(&n, &e)])?;
    let ev_k7 = ev(&m, &[(&k7_seed, &o)])?;
    let ev_k5 = ev(&m, &[(&k5_seed, &e)])?;
    let mut probes = vec![
        Probe { name: "trivial".into(), module: ev(&m, &[])? },
        Probe { name: "N@0".into(), module: ev_n0.clone() },
        Probe { name: "N@1".into(), module: ev_n1.clone() },
        Probe { name: "N@0xN@1".into(), module: tensor_product(&ev_n0, &ev_n1)? },
        Probe { name: "K(7/3)@0".into(), module: ev_k7.clone() },
        Probe { name: "K(5/2)@1".into(), module: ev_k5.clone() },
        Probe { name: "kac(5/2,1)@0^2".into(), module: local_kac(&m, &o, vec![q(5, 2), q(1, 1)])? },
        Probe { name: "K(7/3)@0xN@1".into(), module: tensor_product(&ev_k7, &ev_n1)? },
        Probe { name: "K(7/3)@0xK(5/2)@1".into(), module: tensor_product(&ev_k7, &ev_k5)? },
    ];
    probes.extend(factors(&with_frame(adjoint_module(m.algebra())?, &m)?, "adjoint")?);
    let tensor_checks = vec![(6, 1, 5), (7, 4, 5), (8, 1, 2)];
    Ok(UntwistedPool { name: "sl(2,1) untwisted".into(), map: m, parameters, probes, tensor_checks })
}

/// sl(2,1) over k[t, t⁻¹]/(t⁴ − 1) with Z/2 acting by conjugation with
/// diag(1, −1, 1) and t ↦ −t; orbits {±1} and {±i}.
pub fn twisted_sl21_pool() -> Result<TwistedPool<Cyclotomic>> {
    type C = Cyclotomic;
    let g: Arc<SuperAlgebra<C>> = Arc::new(construct_basic("sl", &[2, 1])?);
    let one = C::one();
    let aut = Automorphism::conjugation(&g, &Matrix::diagonal(&[one.clone(), one.neg(), one]), 2)?;
    let ring = RingSpec::laurent(1);
    let roots: Vec<Point<C>> = (0..4).map(|k| Point::scalar(<C as Field>::root_of_unity(4, k).expect("fourth roots exist"))).collect();
    let a = quotient_algebra(ring, IdealSpec::new(roots.iter().map(|p| (p.clone(), 1)).collect())?)?;
    let flip = PointMap::new(vec![C::one().neg()], vec![0])?;
    let group = GroupAction::new(&ring, vec![2], vec![flip], &a)?;
    let m = build_map_algebra(g.clone(), Arc::new(a))?;
    let fixed = fixed_subalgebra(&m, vec![aut], group)?;
    let (p1, pi, pm1, pmi) = (&roots[0], &roots[1], &roots[2], &roots[3]);

    let n = natural_module(&g)?.with_name("N");
    let k7 = kac_seed(&g, q(7, 3), "K(7/3)")?;
    let k5 = kac_seed(&g, q(5, 2), "K(5/2)")?;
    let mut parameters = Vec::new();
    for a in [None, Some(&n), Some(&k7)] {
        for b in [None, Some(&n), Some(&k5)] {
            let mut items = Vec::new();
            if let Some(a) = a {
                items.push((p1.clone(), a.clone()));
            }
            if let Some(b) = b {
                items.push((pi.clone(), b.clone()));
            }
            let name = label(&items);
            parameters.push((name, EquivariantEvalDatum::from_orbits(items, &fixed)?));
        }
    }

    let incl = fixed.inclusion();
    let restrict = |name: String, v: Module<C>| -> Result<Probe<C>> {
        Ok(Probe { name, module: pullback(&v, fixed.algebra(), &incl)? })
    };
    let mut probes = vec![restrict("trivial".into(), ev(&m, &[])?)?];
    for (v, x) in [(&n, p1), (&n, pm1), (&n, pi), (&n, pmi), (&k7, p1), (&k7, pm1), (&k5, pi), (&k5, pmi)] {
        probes.push(restrict(format!("{}@{x}", v.name()), ev(&m, &[(v, x)])?)?);
    }
    for (a, x, b, y) in [(&n, p1, &n, pi), (&k7, p1, &k5, pmi), (&n, pm1, &k5, pi)] {
        probes.push(restrict(format!("{}@{x}x{}@{y}", a.name(), b.name()), ev(&m, &[(a, x), (b, y)])?)?);
    }
    Ok(TwistedPool {
        name: "sl(2,1) twisted by Z/2".into(),
        fixed,
        parameters,
        probes,
        orbit_points: vec![p1.clone(), pi.clone()],
    })
}
