//! Config → algebra → quotient → action → modules → verifications.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};
use supermap::classify::{
    build_ev_gamma, build_ev_psi, build_v_theta_psi, even_zero, kac_parameter, kac_seed, osp12_pool,
    quasifinite_equivalences, sl21_pool, twisted_sl21_pool, verify_twisted, verify_untwisted, AbelianFormDatum, Check,
    EquivariantEvalDatum, EvalDatum, LocalForm, Report,
};
use supermap::coordalg::{quotient_algebra, GroupAction, IdealSpec, Point, PointMap, RingKind, RingSpec};
use supermap::liesuper::{construct_basic, distinguished_grading, reductive_split, validate_superalgebra, Automorphism, SuperAlgebra};
use supermap::mapalg::{build_map_algebra, evaluation_map, fixed_subalgebra, ideal_form_check, FixedSubalgebra, MapAlgebra};
use supermap::modules::{
    adjoint_module, annihilator_ideal, annihilator_in_algebra, highest_weight_data, is_irreducible, isomorphic,
    natural_module, pullback, tensor_product, trivial_module, weight_csv, Module, WeightFrame,
};
use supermap::par::map_indices;
use supermap::{Cyclotomic, Error, Field, Matrix, Rational};

use crate::config::{GroupSpec, ModuleRecipe, PsiEntry, RunConfig, SeedSpec, ThetaEntry, Verification};

/// A failure that ends the run before verification, with its exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fatal {
    Parse(String),
    Validation(String),
}

impl Fatal {
    pub fn code(&self) -> u8 {
        match self {
            Fatal::Parse(_) => 2,
            Fatal::Validation(_) => 3,
        }
    }
}

impl fmt::Display for Fatal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fatal::Parse(m) => write!(f, "parse error: {m}"),
            Fatal::Validation(m) => write!(f, "invalid configuration: {m}"),
        }
    }
}

impl From<Error> for Fatal {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::UnsupportedFamily(_) => "unsupported family",
            Error::Equivariance(_) => "equivariance",
            Error::SameOrbit(..) => "orbit selection",
            Error::UnsupportedType(_) => "unsupported type",
            Error::Domain(_) | Error::Freeness(_) | Error::Stability(_) => "support",
            _ => "construction",
        };
        Fatal::Validation(format!("{kind}: {e}"))
    }
}

type Res<T> = std::result::Result<T, Fatal>;

pub fn parse_config(text: &str) -> Res<RunConfig> {
    serde_json::from_str(text).map_err(|e| Fatal::Parse(e.to_string()))
}

/// Everything a run writes, keyed by relative path.
#[derive(Debug, Clone)]
pub struct Artifacts {
    pub report: Value,
    pub files: BTreeMap<String, String>,
    pub passed: bool,
    pub text: String,
}

fn invalid(msg: impl Into<String>) -> Fatal {
    Fatal::Validation(msg.into())
}

fn scalar<F: Field>(s: &str) -> Res<F> {
    let t = s.trim();
    if let Some(body) = t.strip_prefix("zeta(").and_then(|b| b.strip_suffix(')')) {
        let (m, k) = body.split_once(',').ok_or_else(|| invalid(format!("bad root of unity {s:?}")))?;
        let m: u64 = m.trim().parse().map_err(|_| invalid(format!("bad order in {s:?}")))?;
        let k: i64 = k.trim().parse().map_err(|_| invalid(format!("bad exponent in {s:?}")))?;
        return F::root_of_unity(m, k).ok_or_else(|| invalid(format!("{s} is not in this field")));
    }
    Ok(F::parse_exact(t)?)
}

fn point<F: Field>(coords: &[String]) -> Res<Point<F>> {
    Ok(Point::new(coords.iter().map(|c| scalar(c)).collect::<Res<_>>()?))
}

fn use_cyclotomic(cfg: &RunConfig) -> Res<bool> {
    match cfg.field.as_deref() {
        None => Ok(cfg.group.is_some() || cfg.multiloop.is_some()),
        Some("rational") => Ok(false),
        Some("cyclotomic") => Ok(true),
        Some(other) => Err(invalid(format!("unknown field {other:?}"))),
    }
}

fn check_references(cfg: &RunConfig) -> Res<()> {
    let mut names: Vec<&str> = Vec::new();
    for r in &cfg.modules {
        if names.contains(&r.name()) {
            return Err(invalid(format!("module {:?} is defined twice", r.name())));
        }
        for d in r.references() {
            if !cfg.modules.iter().any(|m| m.name() == d) {
                return Err(invalid(format!("module {:?} refers to unknown module {d:?}", r.name())));
            }
        }
        names.push(r.name());
    }
    for v in &cfg.verify {
        for d in v.references() {
            if !names.contains(&d) {
                return Err(invalid(format!("verification {} refers to unknown module {d:?}", v.label())));
            }
        }
    }
    Ok(())
}

/// The resolved algebraic setting.
struct Context<F> {
    g: Arc<SuperAlgebra<F>>,
    ring: RingSpec,
    map: Option<MapAlgebra<F>>,
    fixed: Option<FixedSubalgebra<F>>,
}

impl<F: Field> Context<F> {
    fn new(cfg: &RunConfig) -> Res<Self> {
        let g = Arc::new(construct_basic::<F>(&cfg.algebra.family, &cfg.algebra.params)?);
        let group = match (&cfg.group, &cfg.multiloop) {
            (Some(_), Some(_)) => return Err(invalid("give either a group or a multiloop preset, not both")),
            (Some(g), None) => Some(g.clone()),
            (None, Some(m)) => Some(m.group()),
            (None, None) => None,
        };
        if let (Some(m), Some(r)) = (&cfg.multiloop, &cfg.ring) {
            if r.kind != "laurent" || r.vars != m.orders.len() {
                return Err(invalid("a multiloop preset lives on a torus with one variable per order"));
            }
        }
        let ring = match &cfg.ring {
            None if cfg.multiloop.is_some() => RingSpec::laurent(cfg.multiloop.as_ref().map_or(1, |m| m.orders.len())),
            None => RingSpec::polynomial(1),
            Some(r) => {
                let kind = match r.kind.as_str() {
                    "polynomial" => RingKind::Polynomial,
                    "laurent" => RingKind::Laurent,
                    other => return Err(invalid(format!("unknown ring kind {other:?}"))),
                };
                RingSpec::new(kind, r.vars)?
            }
        };
        let map = if cfg.ideal.is_empty() {
            None
        } else {
            let factors = cfg.ideal.iter().map(|f| Ok((point(&f.point)?, f.mult))).collect::<Res<Vec<_>>>()?;
            let a = quotient_algebra(ring, IdealSpec::new(factors)?)?;
            Some(build_map_algebra(g.clone(), Arc::new(a))?)
        };
        let fixed = match (&group, &map) {
            (None, _) => None,
            (Some(_), None) => return Err(invalid("a group action needs an ideal")),
            (Some(spec), Some(m)) => Some(Self::fixed(spec, &g, ring, m)?),
        };
        Ok(Context { g, ring, map, fixed })
    }

    fn fixed(spec: &GroupSpec, g: &Arc<SuperAlgebra<F>>, ring: RingSpec, m: &MapAlgebra<F>) -> Res<FixedSubalgebra<F>> {
        let a = m.coefficients();
        let group = if spec.multiloop {
            GroupAction::multiloop(&ring, &spec.orders, a)?
        } else {
            let maps = spec
                .point_maps
                .iter()
                .map(|p| Ok(PointMap::new(p.scalars.iter().map(|s| scalar(s)).collect::<Res<_>>()?, p.perm.clone())?))
                .collect::<Res<Vec<_>>>()?;
            GroupAction::new(&ring, spec.orders.clone(), maps, a)?
        };
        if spec.automorphisms.len() != spec.orders.len() {
            return Err(invalid("one automorphism per group generator is required"));
        }
        let autos = spec
            .automorphisms
            .iter()
            .zip(&spec.orders)
            .map(|(d, &k)| {
                let entries = d.iter().map(|s| scalar(s)).collect::<Res<Vec<F>>>()?;
                Ok(Automorphism::conjugation(g, &Matrix::diagonal(&entries), k)?)
            })
            .collect::<Res<Vec<_>>>()?;
        Ok(fixed_subalgebra(m, autos, group)?)
    }

    fn map(&self) -> Res<&MapAlgebra<F>> {
        self.map.as_ref().ok_or_else(|| invalid("this recipe needs an ideal"))
    }

    fn fixed_algebra(&self) -> Res<&FixedSubalgebra<F>> {
        self.fixed.as_ref().ok_or_else(|| invalid("this recipe needs a group action"))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Over {
    Map,
    Fixed,
}

struct Built<F> {
    module: Module<F>,
    over: Over,
    kind: &'static str,
}

struct Builder<'a, F> {
    ctx: &'a Context<F>,
    cfg: &'a RunConfig,
    done: BTreeMap<String, Built<F>>,
    seeds: BTreeMap<String, Module<F>>,
}

impl<'a, F: Field> Builder<'a, F> {
    fn seed(&mut self, s: &SeedSpec) -> Res<Module<F>> {
        let key = match s {
            SeedSpec::Named(n) => n.clone(),
            SeedSpec::Kac { kac } => format!("K({kac})"),
        };
        if let Some(v) = self.seeds.get(&key) {
            return Ok(v.clone());
        }
        let g = &self.ctx.g;
        let frame = WeightFrame::for_lie(g).ok().map(Arc::new);
        let v = match s {
            SeedSpec::Named(n) => match n.as_str() {
                "natural" => natural_module(g)?.with_name("N"),
                "adjoint" => adjoint_module(g)?.with_name("ad"),
                "trivial" => trivial_module(g),
                other => return Err(invalid(format!("unknown seed module {other:?}"))),
            },
            SeedSpec::Kac { kac } => kac_seed(g, scalar(kac)?, &key)?,
        };
        let v = match frame {
            Some(f) if v.frame().is_none() => v.with_frame(f),
            _ => v,
        };
        self.seeds.insert(key, v.clone());
        Ok(v)
    }

    fn psi(&mut self, entries: &[PsiEntry]) -> Res<EvalDatum<F>> {
        let items = entries.iter().map(|e| Ok((point(&e.point)?, self.seed(&e.module)?))).collect::<Res<Vec<_>>>()?;
        Ok(EvalDatum::new(items)?)
    }

    /// θ with the central values of the Ψ tops folded in, and Ψ over g₀.
    fn theta_psi(&mut self, theta: &[ThetaEntry], psi: &[PsiEntry]) -> Res<(AbelianFormDatum<F>, EvalDatum<F>)> {
        let g = self.ctx.g.clone();
        let g0 = even_zero(&g)?;
        let center = reductive_split(&g0)?.center.len();
        let vars = self.ctx.ring.vars;
        let mut forms: Vec<LocalForm<F>> = theta
            .iter()
            .map(|t| {
                let values = t.values.iter().map(|r| r.iter().map(|s| scalar(s)).collect::<Res<Vec<F>>>()).collect::<Res<_>>()?;
                Ok(LocalForm { point: point(&t.point)?, level: t.level, values })
            })
            .collect::<Res<_>>()?;
        let mut tops = Vec::new();
        for e in psi {
            let p = point::<F>(&e.point)?;
            let (values, top) = kac_parameter(&self.seed(&e.module)?)?;
            match forms.iter_mut().find(|f| f.point == p) {
                Some(f) => {
                    for (row, s) in f.values.iter_mut().zip(&values) {
                        if let Some(x) = row.first_mut() {
                            *x = x.add(s);
                        }
                    }
                }
                None => forms.push(LocalForm { point: p.clone(), level: 1, values: values.into_iter().map(|s| vec![s]).collect() }),
            }
            tops.push((p, top));
        }
        Ok((AbelianFormDatum::new(forms, vars, center)?, EvalDatum::new(tops)?))
    }

    fn build(&mut self, name: &str, stack: &mut Vec<String>) -> Res<()> {
        if self.done.contains_key(name) {
            return Ok(());
        }
        if stack.iter().any(|s| s == name) {
            return Err(invalid(format!("module {name:?} depends on itself")));
        }
        let recipe = self.cfg.modules.iter().find(|m| m.name() == name).ok_or_else(|| invalid(format!("unknown module {name:?}")))?.clone();
        stack.push(name.to_string());
        for d in recipe.references() {
            self.build(d, stack)?;
        }
        stack.pop();
        let (module, over) = match &recipe {
            ModuleRecipe::EvPsi { psi, .. } => {
                let d = self.psi(psi)?;
                (build_ev_psi(&d, self.ctx.map()?)?, Over::Map)
            }
            ModuleRecipe::Natural { point: p, .. } => {
                let entry = PsiEntry { point: p.clone(), module: SeedSpec::Named("natural".into()) };
                let d = self.psi(&[entry])?;
                (build_ev_psi(&d, self.ctx.map()?)?, Over::Map)
            }
            ModuleRecipe::VThetaPsi { theta, psi, .. } => {
                let (t, d) = self.theta_psi(theta, psi)?;
                (build_v_theta_psi(&t, &d, self.ctx.map()?)?.module, Over::Map)
            }
            ModuleRecipe::Kac { theta, psi, .. } => {
                let (t, d) = self.theta_psi(theta, psi)?;
                let m = self.ctx.map()?;
                let b = build_v_theta_psi(&t, &d, m)?;
                let module = match &b.kac {
                    None => b.module,
                    Some(k) => {
                        let ev = evaluation_map(m, &b.targets)?;
                        pullback(&k.total, m.algebra(), &ev.matrix)?.with_frame(Arc::new(WeightFrame::for_map(m)?))
                    }
                };
                (module, Over::Map)
            }
            ModuleRecipe::EvGamma { psi, .. } => {
                let f = self.ctx.fixed_algebra()?;
                let base = self.psi(psi)?;
                let d = EquivariantEvalDatum::new(base, f)?;
                (build_ev_gamma(&d, f, d.selection())?, Over::Fixed)
            }
            ModuleRecipe::Restrict { module, .. } => {
                let f = self.ctx.fixed_algebra()?;
                let src = &self.done[module.as_str()];
                if src.over != Over::Map {
                    return Err(invalid(format!("{module:?} is not a module over the map algebra")));
                }
                (pullback(&src.module, f.algebra(), &f.inclusion())?, Over::Fixed)
            }
            ModuleRecipe::Tensor { factors, .. } => {
                let first = factors.first().ok_or_else(|| invalid(format!("tensor {name:?} has no factors")))?;
                let over = self.done[first.as_str()].over;
                let mut acc = self.done[first.as_str()].module.clone();
                for f in &factors[1..] {
                    let b = &self.done[f.as_str()];
                    if b.over != over {
                        return Err(invalid(format!("factors of {name:?} live over different algebras")));
                    }
                    acc = tensor_product(&acc, &b.module)?;
                }
                (acc, over)
            }
        };
        self.done.insert(name.to_string(), Built { module: module.with_name(name), over, kind: recipe.kind() });
        Ok(())
    }
}

fn single(name: String, check: Check) -> Report {
    let mut r = Report::new(name);
    r.push(check);
    r
}

fn verification<F: Field>(v: &Verification, ctx: &Context<F>, built: &BTreeMap<String, Built<F>>) -> Report {
    let label = v.label();
    match v {
        Verification::Structure => {
            let rep = validate_superalgebra(&ctx.g);
            single(label, Check::new("axioms", rep.passed(), json!(rep)))
        }
        Verification::Irreducible { module } => {
            let c = is_irreducible(&built[module.as_str()].module);
            single(label, Check::new("density", c.irreducible, json!(c)))
        }
        Verification::Annihilator { module } => {
            let b = &built[module.as_str()];
            let check = match (b.over, &ctx.map, &ctx.fixed) {
                (Over::Map, Some(m), _) => match annihilator_ideal(&b.module, m) {
                    Ok(a) => Check::new("ideal", a.is_ideal && a.tensor_form, json!(a.summary())),
                    Err(e) => Check::failed("ideal", e),
                },
                (Over::Fixed, _, Some(f)) => match ideal_form_check(f, &annihilator_in_algebra(&b.module)) {
                    Ok(r) => {
                        let divisible = r.witness_support().len() % f.group().group_order() == 0;
                        Check::new("ideal-form", r.passed() && divisible, json!(r))
                    }
                    Err(e) => Check::failed("ideal-form", e),
                },
                _ => Check::failed("ideal", "no algebra for this module"),
            };
            single(label, check)
        }
        Verification::Quasifinite { module } => {
            let b = &built[module.as_str()];
            match (&ctx.map, b.over) {
                (Some(m), Over::Map) => {
                    let mut r = quasifinite_equivalences(&b.module, m);
                    r.setting = label;
                    r
                }
                _ => single(label, Check::skipped("cycle", "needs a module over the map algebra")),
            }
        }
        Verification::Isomorphic { modules, expect } => {
            let (a, b) = (&built[modules[0].as_str()], &built[modules[1].as_str()]);
            let iso = a.over == b.over && isomorphic(&a.module, &b.module);
            single(label, Check::new("isomorphism", iso == *expect, json!({ "isomorphic": iso, "expected": expect })))
        }
        Verification::Pool { pool } => {
            let report = match pool.as_str() {
                "osp12" => osp12_pool().map(|p| verify_untwisted(&p)),
                "sl21" => sl21_pool().map(|p| verify_untwisted(&p)),
                "twisted_sl21" => twisted_sl21_pool().map(|p| verify_twisted(&p)),
                other => Err(Error::Unsupported(format!("unknown pool {other:?}"))),
            };
            match report {
                Ok(r) => r,
                Err(e) => single(label, Check::failed("pool", e)),
            }
        }
    }
}

fn structure_json<F: Field>(ctx: &Context<F>) -> Value {
    let mut s = ctx.g.to_json();
    let grading = distinguished_grading(&ctx.g).ok();
    s["grading"] = json!(grading);
    if let Some(m) = &ctx.map {
        s["quotient"] = json!({ "dim": m.coefficients().dim(), "basis": m.coefficients().labels(), "map_dim": m.dim() });
    }
    if let Some(f) = &ctx.fixed {
        s["fixed_subalgebra"] = json!({ "dim": f.dim(), "formula": f.graded_dim_formula(), "basis_size": f.basis().len() });
    }
    s
}

fn run_in<F: Field>(cfg: &RunConfig, field: &str) -> Res<Artifacts> {
    let ctx = Context::<F>::new(cfg)?;
    let mut b = Builder { ctx: &ctx, cfg, done: BTreeMap::new(), seeds: BTreeMap::new() };
    for r in &cfg.modules {
        b.build(r.name(), &mut Vec::new())?;
    }
    let built = b.done;
    let sections: Vec<Report> = map_indices(cfg.verify.len(), |i| verification(&cfg.verify[i], &ctx, &built));
    let passed = sections.iter().all(Report::passed);

    let mut files = BTreeMap::new();
    let mut module_rows = Vec::new();
    for r in &cfg.modules {
        let b = &built[r.name()];
        let v = &b.module;
        let mut doc = v.to_json();
        doc["kind"] = json!(b.kind);
        if let Ok(hw) = highest_weight_data(v) {
            doc["highest_weight"] = hw.to_json();
        }
        files.insert(format!("modules/{}.json", r.name()), pretty(&doc));
        if let Ok(csv) = weight_csv(v) {
            files.insert(format!("weights/{}.csv", r.name()), csv);
        }
        module_rows.push(json!({
            "name": r.name(),
            "kind": b.kind,
            "over": if b.over == Over::Map { "map" } else { "fixed" },
            "dim": v.dim(),
            "even_dim": v.even_dim(),
            "odd_dim": v.odd_dim(),
        }));
    }
    files.insert("structure.json".into(), pretty(&structure_json(&ctx)));
    let report = json!({
        "schema": 1,
        "name": cfg.name,
        "field": field,
        "algebra": ctx.g.name(),
        "passed": passed,
        "modules": module_rows,
        "sections": sections.iter().map(Report::to_json).collect::<Vec<_>>(),
    });
    files.insert("report.json".into(), pretty(&report));
    let mut text = format!("{}: {} over {field}\n", cfg.name, ctx.g.name());
    for s in &sections {
        text.push_str(&s.to_text());
    }
    text.push_str(if passed { "all verifications passed\n" } else { "verification FAILED\n" });
    Ok(Artifacts { report, files, passed, text })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn run(cfg: &RunConfig) -> Res<Artifacts> {
    check_references(cfg)?;
    if use_cyclotomic(cfg)? {
        run_in::<Cyclotomic>(cfg, "cyclotomic")
    } else {
        run_in::<Rational>(cfg, "rational")
    }
}

/// The resolved plan: dimensions, supports and the checks that would run.
pub fn describe(cfg: &RunConfig) -> Res<Value> {
    check_references(cfg)?;
    if use_cyclotomic(cfg)? {
        describe_in::<Cyclotomic>(cfg)
    } else {
        describe_in::<Rational>(cfg)
    }
}

fn describe_in<F: Field>(cfg: &RunConfig) -> Res<Value> {
    let ctx = Context::<F>::new(cfg)?;
    let grading = distinguished_grading(&ctx.g).ok();
    let modules: Vec<Value> = cfg
        .modules
        .iter()
        .map(|r| {
            let support: Vec<String> = match r {
                ModuleRecipe::EvPsi { psi, .. } | ModuleRecipe::EvGamma { psi, .. } => psi.iter().map(|e| e.point.join(",")).collect(),
                ModuleRecipe::VThetaPsi { theta, psi, .. } | ModuleRecipe::Kac { theta, psi, .. } => {
                    theta.iter().map(|t| t.point.join(",")).chain(psi.iter().map(|e| e.point.join(","))).collect()
                }
                ModuleRecipe::Natural { point, .. } => vec![point.join(",")],
                _ => Vec::new(),
            };
            json!({ "name": r.name(), "kind": r.kind(), "support": support, "depends_on": r.references() })
        })
        .collect();
    Ok(json!({
        "schema": 1,
        "name": cfg.name,
        "algebra": {
            "name": ctx.g.name(),
            "dim": ctx.g.dim(),
            "even_dim": ctx.g.even_dim(),
            "odd_dim": ctx.g.odd_dim(),
            "grading_dims": grading.as_ref().map(|g| g.dims()),
            "type": grading.map(|g| g.type_flag),
        },
        "quotient_dim": ctx.map.as_ref().map(|m| m.coefficients().dim()),
        "map_dim": ctx.map.as_ref().map(MapAlgebra::dim),
        "fixed_subalgebra_dim": ctx.fixed.as_ref().map(FixedSubalgebra::dim),
        "group_order": ctx.fixed.as_ref().map(|f| f.group().group_order()),
        "modules": modules,
        "checks": cfg.verify.iter().map(Verification::label).collect::<Vec<_>>(),
    }))
}

pub fn describe_text(plan: &Value) -> String {
    let mut out = format!("plan {}\n", plan["name"].as_str().unwrap_or(""));
    let alg = &plan["algebra"];
    out.push_str(&format!("  algebra {} (dim {}, even {}, odd {})\n", alg["name"].as_str().unwrap_or(""), alg["dim"], alg["even_dim"], alg["odd_dim"]));
    if !plan["map_dim"].is_null() {
        out.push_str(&format!("  quotient dim {}, map algebra dim {}\n", plan["quotient_dim"], plan["map_dim"]));
    }
    if !plan["fixed_subalgebra_dim"].is_null() {
        out.push_str(&format!("  fixed subalgebra dim {} (group order {})\n", plan["fixed_subalgebra_dim"], plan["group_order"]));
    }
    let modules = plan["modules"].as_array().cloned().unwrap_or_default();
    let checks = plan["checks"].as_array().cloned().unwrap_or_default();
    if modules.is_empty() && checks.is_empty() {
        out.push_str("  empty plan\n");
    }
    for m in &modules {
        out.push_str(&format!("  module {} [{}] support {}\n", m["name"].as_str().unwrap_or(""), m["kind"].as_str().unwrap_or(""), m["support"]));
    }
    for c in &checks {
        out.push_str(&format!("  check {}\n", c.as_str().unwrap_or("")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> RunConfig {
        parse_config(text).unwrap()
    }

    #[test]
    fn scalars_parse_fractions_and_roots() {
        assert_eq!(scalar::<Rational>("-3/4").unwrap(), Rational::parse_exact("-3/4").unwrap());
        let i: Cyclotomic = scalar("zeta(4,1)").unwrap();
        assert_eq!(i.mul(&i), Cyclotomic::one().neg());
        assert!(scalar::<Rational>("zeta(4,1)").is_err());
        assert!(scalar::<Rational>("zeta(4)").is_err());
    }

    #[test]
    fn field_defaults_follow_the_group() {
        let plain = cfg(r#"{ "algebra": { "family": "sl", "params": [2, 1] } }"#);
        assert!(!use_cyclotomic(&plain).unwrap());
        let odd = cfg(r#"{ "field": "real", "algebra": { "family": "sl", "params": [2, 1] } }"#);
        assert_eq!(use_cyclotomic(&odd).unwrap_err().code(), 3);
    }

    #[test]
    fn duplicate_and_dangling_names_are_rejected() {
        let dup = cfg(
            r#"{ "algebra": { "family": "sl", "params": [2, 1] },
                 "modules": [ { "kind": "natural", "name": "A", "point": ["0"] },
                              { "kind": "natural", "name": "A", "point": ["1"] } ] }"#,
        );
        assert!(check_references(&dup).is_err());
        let dangling = cfg(
            r#"{ "algebra": { "family": "sl", "params": [2, 1] },
                 "modules": [ { "kind": "restrict", "name": "R", "module": "X" } ] }"#,
        );
        assert!(check_references(&dangling).is_err());
    }

    #[test]
    fn cyclic_recipes_are_rejected() {
        let c = cfg(
            r#"{ "algebra": { "family": "sl", "params": [2, 1] },
                 "ideal": [ { "point": ["0"] } ],
                 "modules": [ { "kind": "tensor", "name": "A", "factors": ["B"] },
                              { "kind": "tensor", "name": "B", "factors": ["A"] } ] }"#,
        );
        let err = run(&c).unwrap_err();
        assert!(err.to_string().contains("depends on itself"), "{err}");
    }

    #[test]
    fn theta_absorbs_the_central_value_of_psi() {
        let c = cfg(
            r#"{ "algebra": { "family": "sl", "params": [2, 1] },
                 "ideal": [ { "point": ["0"] } ],
                 "modules": [ { "kind": "v_theta_psi", "name": "V", "psi": [ { "point": ["0"], "module": "natural" } ] },
                              { "kind": "natural", "name": "N", "point": ["0"] } ],
                 "verify": [ { "check": "isomorphic", "modules": ["V", "N"] } ] }"#,
        );
        let art = run(&c).unwrap();
        assert!(art.passed, "{}", art.text);
    }

    #[test]
    fn recipes_needing_an_ideal_say_so() {
        let c = cfg(r#"{ "algebra": { "family": "sl", "params": [2, 1] }, "modules": [ { "kind": "natural", "name": "N", "point": ["0"] } ] }"#);
        assert!(run(&c).unwrap_err().to_string().contains("needs an ideal"));
    }
}
