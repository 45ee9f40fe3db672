//! Harnesses: parameterized modules against probe pools.

use serde_json::{json, Value};

use super::report::{Check, Report};
use super::{build_ev_gamma, build_ev_psi, build_v_theta_psi, AbelianFormDatum, EquivariantEvalDatum, EvalDatum, ThetaPsiBuild};
use crate::coordalg::Point;
use crate::error::Result;
use crate::linalg::{same_span, unit_vector};
use crate::mapalg::{equivariant_evaluation, evaluation_map, ideal_form_check, FixedSubalgebra, MapAlgebra};
use crate::modules::{
    annihilator_ideal, annihilator_in_algebra, highest_weight_data, is_irreducible, isomorphic, pullback, tensor_product,
    trivial_module, weight_table, Module,
};
use crate::par::map_indices;
use crate::scalars::Field;

/// A classification parameter: Ψ alone, or (θ, Ψ) for type I.
#[derive(Debug, Clone)]
pub enum Parameter<F> {
    Psi(EvalDatum<F>),
    ThetaPsi(AbelianFormDatum<F>, EvalDatum<F>),
}

impl<F: Field> Parameter<F> {
    pub fn describe(&self) -> Value {
        let psi = |d: &EvalDatum<F>| -> Value {
            d.describe().into_iter().map(|(p, v)| json!({ "point": p, "module": v })).collect()
        };
        match self {
            Parameter::Psi(d) => json!({ "psi": psi(d) }),
            Parameter::ThetaPsi(t, d) => json!({
                "theta": t.forms().iter().map(|f| json!({
                    "point": f.point.to_string(),
                    "level": f.level,
                    "values": f.values.iter().map(|r| r.iter().map(Field::to_exact_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
                "psi": psi(d),
            }),
        }
    }
}

/// A named module to be matched against the parameters.
#[derive(Debug, Clone)]
pub struct Probe<F> {
    pub name: String,
    pub module: Module<F>,
}

#[derive(Debug, Clone)]
pub struct UntwistedPool<F> {
    pub name: String,
    pub map: MapAlgebra<F>,
    pub parameters: Vec<(String, Parameter<F>)>,
    pub probes: Vec<Probe<F>>,
    /// (c, a, b): parameter c has disjoint-support factors a and b.
    pub tensor_checks: Vec<(usize, usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct TwistedPool<F> {
    pub name: String,
    pub fixed: FixedSubalgebra<F>,
    pub parameters: Vec<(String, EquivariantEvalDatum<F>)>,
    pub probes: Vec<Probe<F>>,
    /// Points whose single-orbit evaluation is checked for surjectivity.
    pub orbit_points: Vec<Point<F>>,
}

fn certificate_check<F: Field>(name: String, v: &Module<F>) -> Check {
    let c = is_irreducible(v);
    Check::new(name, c.irreducible, json!(c))
}

/// Annihilator of a built parameter module: the perfect-algebra formula
/// always, and Ann M = Ann V(M) for Kac builds.
fn parameter_annihilator<F: Field>(
    name: String,
    p: &Parameter<F>,
    m: &MapAlgebra<F>,
    v: &Module<F>,
    kac: Option<&ThetaPsiBuild<F>>,
) -> Result<Check> {
    let av = annihilator_ideal(v, m)?;
    match (p, kac) {
        (Parameter::Psi(d), _) => {
            let support_ok = av.support.len() == d.support().len() && d.support().iter().all(|p| av.support.contains(p));
            Ok(Check::new(
                name,
                av.tensor_form && av.reduced && support_ok,
                json!({ "annihilator": av.summary() }),
            ))
        }
        (Parameter::ThetaPsi(..), None) => Ok(Check::failed(name, "missing Kac data")),
        (Parameter::ThetaPsi(..), Some(b)) => {
            let (Some(setup), Some(base), Some(q)) = (&b.setup, &b.base, &b.quotient) else {
                return Ok(Check::new(name, av.tensor_form && av.support.is_empty(), json!({ "annihilator": av.summary() })));
            };
            let am = annihilator_ideal(base, &setup.even)?;
            let aq = annihilator_ideal(&q.module, &setup.full)?;
            let da = setup.full.coefficients().dim();
            let equal = same_span(da, &am.basis, &aq.basis);
            let kac = b.kac.as_ref().expect("kac present");
            Ok(Check::new(
                name,
                equal && aq.tensor_form && av.tensor_form && kac.dimension_law_holds(),
                json!({
                    "ann_M": am.summary(),
                    "ann_V_M": aq.summary(),
                    "equal": equal,
                    "kac_dim": kac.total.dim(),
                    "base_dim": base.dim(),
                    "exterior_generators": kac.odd_minus.len(),
                    "annihilator": av.summary(),
                }),
            ))
        }
    }
}

fn build_parameter<F: Field>(p: &Parameter<F>, m: &MapAlgebra<F>) -> Result<(Module<F>, Option<ThetaPsiBuild<F>>)> {
    match p {
        Parameter::Psi(d) => Ok((build_ev_psi(d, m)?, None)),
        Parameter::ThetaPsi(t, d) => {
            let b = build_v_theta_psi(t, d, m)?;
            Ok((b.module.clone(), Some(b)))
        }
    }
}

fn injectivity<F: Field>(names: &[String], built: &[Option<Module<F>>]) -> Check {
    let n = built.len();
    let collisions: Vec<Vec<(String, String)>> = map_indices(n, |i| {
        let mut out = Vec::new();
        if let Some(v) = &built[i] {
            for j in i + 1..n {
                if let Some(w) = &built[j] {
                    if isomorphic(v, w) {
                        out.push((names[i].clone(), names[j].clone()));
                    }
                }
            }
        }
        out
    });
    let collisions: Vec<_> = collisions.into_iter().flatten().collect();
    let pairs = n * n.saturating_sub(1) / 2;
    Check::new("injectivity", collisions.is_empty(), json!({ "pairs": pairs, "collisions": collisions }))
}

fn match_probe<F: Field>(probe: &Probe<F>, names: &[String], built: &[Option<Module<F>>]) -> Check {
    let cert = is_irreducible(&probe.module);
    let matches: Vec<String> = names
        .iter()
        .zip(built)
        .filter(|(_, b)| b.as_ref().is_some_and(|b| isomorphic(&probe.module, b)))
        .map(|(n, _)| n.clone())
        .collect();
    Check::new(
        format!("probe/{}/match", probe.name),
        cert.irreducible && matches.len() == 1,
        json!({ "dim": probe.module.dim(), "irreducible": cert, "matches": matches }),
    )
}

pub fn verify_untwisted<F: Field>(pool: &UntwistedPool<F>) -> Report {
    let m = &pool.map;
    let mut report = Report::new(pool.name.clone());
    let names: Vec<String> = pool.parameters.iter().map(|(n, _)| n.clone()).collect();
    let per_param: Vec<(Option<Module<F>>, Vec<Check>)> = map_indices(pool.parameters.len(), |i| {
        let (name, p) = &pool.parameters[i];
        match build_parameter(p, m) {
            Err(e) => (None, vec![Check::failed(format!("parameter/{name}/build"), e)]),
            Ok((v, kac)) => {
                let mut checks = vec![Check::new(
                    format!("parameter/{name}/build"),
                    true,
                    json!({ "parameter": p.describe(), "dim": v.dim(), "even_dim": v.even_dim() }),
                )];
                checks.push(certificate_check(format!("parameter/{name}/irreducible"), &v));
                checks.push(
                    parameter_annihilator(format!("parameter/{name}/annihilator"), p, m, &v, kac.as_ref())
                        .unwrap_or_else(|e| Check::failed(format!("parameter/{name}/annihilator"), e)),
                );
                let q = quasifinite_equivalences(&v, m);
                checks.push(Check::new(format!("parameter/{name}/quasifinite"), q.passed(), q.to_json()));
                (Some(v), checks)
            }
        }
    });
    let built: Vec<Option<Module<F>>> = per_param.iter().map(|(v, _)| v.clone()).collect();
    for (_, cs) in per_param {
        report.extend(cs);
    }
    report.push(injectivity(&names, &built));
    for &(c, a, b) in &pool.tensor_checks {
        let name = format!("tensor/{}={}x{}", names[c], names[a], names[b]);
        let check = match (&built[c], &built[a], &built[b]) {
            (Some(vc), Some(va), Some(vb)) => match tensor_product(va, vb) {
                Ok(t) => Check::new(name, isomorphic(vc, &t), json!({ "dim": t.dim() })),
                Err(e) => Check::failed(name, e),
            },
            _ => Check::failed(name, "a factor failed to build"),
        };
        report.push(check);
    }
    let semisimple = crate::liesuper::even_part_summary(m.target()).is_ok_and(|s| s.center_dim == 0);
    let probe_checks: Vec<Vec<Check>> = map_indices(pool.probes.len(), |i| {
        let probe = &pool.probes[i];
        let mut out = vec![match_probe(probe, &names, &built)];
        let name = format!("probe/{}/annihilator", probe.name);
        out.push(if semisimple {
            match annihilator_ideal(&probe.module, m) {
                Ok(a) => Check::new(name, a.reduced && a.tensor_form, json!(a.summary())),
                Err(e) => Check::failed(name, e),
            }
        } else {
            Check::skipped(name, "even part is not semisimple")
        });
        out
    });
    report.extend(probe_checks.into_iter().flatten());
    report
}

/// Extends a (g ⊗ A/I)^Γ-module to g ⊗ A/I through the evaluation at one
/// representative per orbit of its support.
fn restriction_check<F: Field>(name: String, w: &Module<F>, f: &FixedSubalgebra<F>) -> Result<Check> {
    let amb = f.ambient();
    let a = amb.coefficients();
    let form = ideal_form_check(f, &annihilator_in_algebra(w))?;
    if !form.passed() {
        return Ok(Check::new(name, false, json!({ "ideal_form": form })));
    }
    let mut targets: Vec<(Point<F>, u32)> = Vec::new();
    for ((p, _), k) in a.ideal().factors.iter().zip(&form.multiplicities) {
        let k = k.unwrap_or(0);
        if k > 0 && !targets.iter().any(|(q, _)| f.group().same_orbit(p, q)) {
            targets.push((p.clone(), k));
        }
    }
    let extended = if targets.is_empty() {
        trivial_module(amb.algebra())
    } else {
        let ev = equivariant_evaluation(f, &targets)?;
        let t = ev.matrix.rows();
        let mut actions = Vec::with_capacity(t);
        for y in 0..t {
            let Some(x) = ev.matrix.solve(&unit_vector(t, y)) else {
                return Ok(Check::new(name, false, json!({ "surjective": false })));
            };
            actions.push(w.act(&x));
        }
        let lifted = match Module::new(ev.target.algebra().clone(), w.parities().to_vec(), actions) {
            Ok(l) => l,
            Err(e) => return Ok(Check::new(name, false, json!({ "factorization": e.to_string() }))),
        };
        let ev_u = evaluation_map(amb, &targets)?;
        pullback(&lifted, amb.algebra(), &ev_u.matrix)?
    };
    let restricted = pullback(&extended, f.algebra(), &f.inclusion())?;
    let exact = restricted.actions() == w.actions();
    let irr_w = is_irreducible(w).irreducible;
    let irr_v = is_irreducible(&extended).irreducible;
    Ok(Check::new(
        name,
        exact && irr_w && irr_v,
        json!({
            "targets": targets.iter().map(|(p, k)| json!({ "point": p.to_string(), "multiplicity": k })).collect::<Vec<_>>(),
            "extended_dim": extended.dim(),
            "restriction_exact": exact,
            "irreducible": { "restricted": irr_w, "extended": irr_v },
        }),
    ))
}

fn ideal_form_of<F: Field>(name: String, w: &Module<F>, f: &FixedSubalgebra<F>) -> Check {
    match ideal_form_check(f, &annihilator_in_algebra(w)) {
        Ok(r) => {
            let support = r.witness_support().len();
            let divisible = support % f.group().group_order() == 0;
            Check::new(name, r.passed() && divisible, json!({ "support_size": support, "group_order": f.group().group_order(), "form": r }))
        }
        Err(e) => Check::failed(name, e),
    }
}

pub fn verify_twisted<F: Field>(pool: &TwistedPool<F>) -> Report {
    let f = &pool.fixed;
    let mut report = Report::new(pool.name.clone());
    let pieces: Vec<Value> = f
        .target_pieces()
        .iter()
        .map(|(xi, b)| {
            let minus = f.group().negate(xi);
            let a = f.coefficient_pieces().iter().find(|(c, _)| *c == minus).map_or(0, |(_, v)| v.len());
            json!({ "character": xi, "target_dim": b.len(), "coefficient_dim": a })
        })
        .collect();
    report.push(Check::new(
        "fixed-subalgebra",
        f.dim() == f.graded_dim_formula() && f.is_fixed() && f.grading_compatible(),
        json!({ "dim": f.dim(), "formula": f.graded_dim_formula(), "pieces": pieces }),
    ));
    for p in &pool.orbit_points {
        let name = format!("surjectivity/{p}");
        report.push(match equivariant_evaluation(f, &[(p.clone(), 1)]) {
            Ok(ev) => Check::new(name, ev.is_surjective(), json!({ "rank": ev.rank(), "target_dim": ev.matrix.rows() })),
            Err(e) => Check::failed(name, e),
        });
    }
    let names: Vec<String> = pool.parameters.iter().map(|(n, _)| n.clone()).collect();
    let per_param: Vec<(Option<Module<F>>, Vec<Check>)> = map_indices(pool.parameters.len(), |i| {
        let (name, d) = &pool.parameters[i];
        match build_ev_gamma(d, f, d.selection()) {
            Err(e) => (None, vec![Check::failed(format!("parameter/{name}/build"), e)]),
            Ok(v) => {
                let reps: Vec<String> = d.selection().representatives().iter().map(ToString::to_string).collect();
                let mut checks = vec![Check::new(
                    format!("parameter/{name}/build"),
                    true,
                    json!({ "psi": Parameter::Psi(d.base().clone()).describe()["psi"], "representatives": reps, "dim": v.dim() }),
                )];
                checks.push(certificate_check(format!("parameter/{name}/irreducible"), &v));
                let alt = d.alternative_selection(f);
                let rname = format!("parameter/{name}/representatives");
                checks.push(if alt == *d.selection() {
                    Check::skipped(rname, "no other representative")
                } else {
                    match build_ev_gamma(d, f, &alt) {
                        Ok(w) => Check::new(
                            rname,
                            isomorphic(&v, &w),
                            json!({ "alternative": alt.representatives().iter().map(ToString::to_string).collect::<Vec<_>>() }),
                        ),
                        Err(e) => Check::failed(rname, e),
                    }
                });
                checks.push(ideal_form_of(format!("parameter/{name}/ideal-form"), &v, f));
                (Some(v), checks)
            }
        }
    });
    let built: Vec<Option<Module<F>>> = per_param.iter().map(|(v, _)| v.clone()).collect();
    for (_, cs) in per_param {
        report.extend(cs);
    }
    report.push(injectivity(&names, &built));
    let probe_checks: Vec<Vec<Check>> = map_indices(pool.probes.len(), |i| {
        let probe = &pool.probes[i];
        let rname = format!("probe/{}/restriction", probe.name);
        vec![
            match_probe(probe, &names, &built),
            restriction_check(rname.clone(), &probe.module, f).unwrap_or_else(|e| Check::failed(rname, e)),
            ideal_form_of(format!("probe/{}/ideal-form", probe.name), &probe.module, f),
        ]
    });
    report.extend(probe_checks.into_iter().flatten());
    report
}

/// The equivalence cycle for a highest-weight module over g ⊗ A/I, using
/// its computed weight table.
pub fn quasifinite_equivalences<F: Field>(v: &Module<F>, m: &MapAlgebra<F>) -> Report {
    match weight_table(v) {
        Ok(t) => quasifinite_with_table(v, m, &t),
        Err(e) => {
            let mut r = Report::new("quasifinite");
            r.push(Check::failed("weights", e));
            r
        }
    }
}

/// The same cycle with an externally supplied weight table.
pub fn quasifinite_with_table<F: Field>(v: &Module<F>, m: &MapAlgebra<F>, table: &[(Vec<F>, usize)]) -> Report {
    let mut r = Report::new("quasifinite");
    let total: usize = table.iter().map(|(_, k)| k).sum();
    let distinct = table.iter().enumerate().all(|(i, (w, k))| *k > 0 && table[..i].iter().all(|(u, _)| u != w));
    let c1 = total == v.dim() && distinct;

    let ann = annihilator_ideal(v, m);
    let hw = highest_weight_data(v);
    let (c2, c3, c4, witness) = match (&ann, &hw) {
        (Ok(ann), Ok(hw)) => {
            let c2 = ann.is_ideal && ann.witness.is_some() && ann.tensor_form;
            let a = m.coefficients();
            let da = a.dim();
            let rank = hw.psi.len() / da.max(1);
            let psi_at = |c: usize, f: &[F]| {
                let mut s = F::zero();
                for (j, x) in f.iter().enumerate() {
                    s.add_mul(x, &hw.psi[c * da + j]);
                }
                s
            };
            let c3 = ann.basis.iter().all(|f| (0..rank).all(|c| psi_at(c, f).is_zero()));
            let psi_support: Vec<Point<F>> = a
                .ideal()
                .factors
                .iter()
                .enumerate()
                .filter(|(b, _)| a.point_blocks()[*b].clone().any(|j| (0..rank).any(|c| !hw.psi[c * da + j].is_zero())))
                .map(|(_, (p, _))| p.clone())
                .collect();
            let c4 = psi_support.iter().all(|p| ann.support.contains(p));
            let w = json!({
                "annihilator": ann.summary(),
                "psi_support": psi_support.iter().map(ToString::to_string).collect::<Vec<_>>(),
            });
            (c2, c3, c4, w)
        }
        (a, h) => {
            let err = a.as_ref().err().map(ToString::to_string).or_else(|| h.as_ref().err().map(ToString::to_string));
            (false, false, false, json!({ "error": err }))
        }
    };
    r.push(Check::new("finite-multiplicities", c1, json!({ "total": total, "dim": v.dim(), "weights": table.len() })));
    r.push(Check::new("annihilating-ideal", c2, Value::Null));
    r.push(Check::new("psi-vanishes-on-ideal", c3, Value::Null));
    r.push(Check::new("finite-support", c4, witness));
    let agree = c1 == c2 && c2 == c3 && c3 == c4;
    r.push(Check::new("agreement", agree && c1, json!({ "conditions": [c1, c2, c3, c4] })));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{osp12_pool, twisted_sl21_pool, Verdict};
    use crate::error::Error;
    use crate::modules::natural_module;

    #[test]
    fn empty_pool_passes_vacuously() {
        let mut pool = osp12_pool().unwrap();
        pool.parameters.clear();
        pool.probes.clear();
        pool.tensor_checks.clear();
        let r = verify_untwisted(&pool);
        assert!(r.passed());
        assert_eq!(r.find("injectivity").unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn missing_parameter_leaves_probe_unmatched() {
        let mut pool = osp12_pool().unwrap();
        pool.parameters.remove(1);
        pool.tensor_checks.clear();
        let r = verify_untwisted(&pool);
        assert!(!r.passed());
        let failed: Vec<&str> = r.failures().iter().map(|c| c.name.as_str()).collect();
        assert!(failed.contains(&"probe/N@(-1)/match"));
    }

    #[test]
    fn duplicated_parameter_breaks_injectivity() {
        let mut pool = osp12_pool().unwrap();
        let dup = pool.parameters[4].clone();
        pool.parameters.push((format!("{}'", dup.0), dup.1));
        let r = verify_untwisted(&pool);
        assert_eq!(r.find("injectivity").unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn truncated_weight_table_is_inconsistent() {
        let pool = osp12_pool().unwrap();
        let v = pool.probes[1].module.clone();
        assert!(quasifinite_equivalences(&v, &pool.map).passed());
        let mut table = weight_table(&v).unwrap();
        table.pop();
        let r = quasifinite_with_table(&v, &pool.map, &table);
        assert_eq!(r.find("finite-multiplicities").unwrap().verdict, Verdict::Fail);
        assert_eq!(r.find("agreement").unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn non_equivariant_data_are_rejected() {
        let pool = twisted_sl21_pool().unwrap();
        let f = &pool.fixed;
        let g = f.ambient().target();
        let n = natural_module(g).unwrap();
        let one = pool.orbit_points[0].clone();
        let lonely = EvalDatum::new(vec![(one.clone(), n.clone())]).unwrap();
        assert!(matches!(EquivariantEvalDatum::new(lonely, f), Err(Error::Equivariance(_))));
        let minus = f.group().orbit(&one).into_iter().find(|q| *q != one).unwrap();
        let k = crate::classify::kac_seed(g, crate::scalars::Cyclotomic::from_i64(3), "K(3)").unwrap();
        let wrong = EvalDatum::new(vec![(one.clone(), n.clone()), (minus.clone(), k)]).unwrap();
        assert!(matches!(EquivariantEvalDatum::new(wrong, f), Err(Error::Equivariance(_))));
        let full = EquivariantEvalDatum::from_orbits(vec![(one, n)], f).unwrap();
        assert!(EquivariantEvalDatum::new(full.base().clone(), f).is_ok());
    }

    #[test]
    fn representatives_do_not_matter_and_data_separate() {
        let pool = twisted_sl21_pool().unwrap();
        let f = &pool.fixed;
        let (_, d) = pool.parameters.iter().find(|(n, _)| n == "N@(1)").unwrap();
        let (_, e) = pool.parameters.iter().find(|(n, _)| n == "K(7/3)@(1)").unwrap();
        let v = build_ev_gamma(d, f, d.selection()).unwrap();
        let w = build_ev_gamma(d, f, &d.alternative_selection(f)).unwrap();
        assert_ne!(d.selection(), &d.alternative_selection(f));
        assert!(isomorphic(&v, &w));
        let u = build_ev_gamma(e, f, e.selection()).unwrap();
        assert!(!isomorphic(&v, &u));
    }
}
