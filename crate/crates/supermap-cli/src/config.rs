//! The JSON run configuration.

use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_name")]
    pub name: String,
    /// "rational" or "cyclotomic"; cyclotomic when a group is present and
    /// this is omitted.
    #[serde(default)]
    pub field: Option<String>,
    pub algebra: AlgebraSpec,
    #[serde(default)]
    pub ring: Option<RingConfig>,
    #[serde(default)]
    pub ideal: Vec<IdealFactor>,
    #[serde(default)]
    pub group: Option<GroupSpec>,
    #[serde(default)]
    pub multiloop: Option<MultiloopSpec>,
    #[serde(default)]
    pub modules: Vec<ModuleRecipe>,
    #[serde(default)]
    pub verify: Vec<Verification>,
}

fn default_name() -> String {
    "run".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub family: String,
    #[serde(default)]
    pub params: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingConfig {
    /// "polynomial" or "laurent".
    pub kind: String,
    pub vars: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealFactor {
    pub point: Vec<String>,
    #[serde(default = "one", alias = "multiplicity")]
    pub mult: u32,
}

fn one() -> u32 {
    1
}

/// Either the multiloop shorthand (generator j scales variable j by a
/// primitive root of unity) or explicit point maps.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub orders: Vec<u64>,
    #[serde(default)]
    pub multiloop: bool,
    #[serde(default)]
    pub point_maps: Vec<PointMapSpec>,
    /// One target automorphism per generator: conjugation by a diagonal
    /// matrix on the defining representation.
    pub automorphisms: Vec<Vec<String>>,
}

/// Torus ring in one variable per factor, generator j scaling variable j
/// by a primitive root of unity of order `orders[j]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiloopSpec {
    pub orders: Vec<u64>,
    pub target_autos: Vec<Vec<String>>,
}

impl MultiloopSpec {
    pub fn group(&self) -> GroupSpec {
        GroupSpec {
            orders: self.orders.clone(),
            multiloop: true,
            point_maps: Vec::new(),
            automorphisms: self.target_autos.clone(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointMapSpec {
    pub scalars: Vec<String>,
    pub perm: Vec<usize>,
}

/// A g-module used as a value of Ψ.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SeedSpec {
    /// "natural", "adjoint" or "trivial".
    Named(String),
    /// The typical module induced from a central character.
    Kac { kac: String },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiEntry {
    pub point: Vec<String>,
    pub module: SeedSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaEntry {
    pub point: Vec<String>,
    #[serde(default = "one")]
    pub level: u32,
    /// One row per central element, one value per local monomial.
    pub values: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleRecipe {
    /// ev_Ψ over g ⊗ A/I.
    EvPsi { name: String, psi: Vec<PsiEntry> },
    /// V(θ ⊗ ev_Ψ); Ψ entries name g-modules whose g₁-invariants (with the
    /// center removed) are used.
    VThetaPsi {
        name: String,
        #[serde(default)]
        theta: Vec<ThetaEntry>,
        #[serde(default)]
        psi: Vec<PsiEntry>,
    },
    /// ev^Γ_Ψ over the fixed subalgebra; `psi` must be Γ-equivariant.
    EvGamma { name: String, psi: Vec<PsiEntry> },
    /// The restriction of an untwisted module to the fixed subalgebra.
    Restrict { name: String, module: String },
    Tensor { name: String, factors: Vec<String> },
    /// The natural module evaluated at a point.
    Natural { name: String, point: Vec<String> },
    /// The induced module V̄(θ ⊗ ev_Ψ) before taking its irreducible
    /// quotient.
    Kac {
        name: String,
        #[serde(default)]
        theta: Vec<ThetaEntry>,
        #[serde(default)]
        psi: Vec<PsiEntry>,
    },
}

impl ModuleRecipe {
    pub fn name(&self) -> &str {
        match self {
            ModuleRecipe::EvPsi { name, .. }
            | ModuleRecipe::VThetaPsi { name, .. }
            | ModuleRecipe::EvGamma { name, .. }
            | ModuleRecipe::Restrict { name, .. }
            | ModuleRecipe::Tensor { name, .. }
            | ModuleRecipe::Natural { name, .. }
            | ModuleRecipe::Kac { name, .. } => name,
        }
    }

    pub fn references(&self) -> Vec<&str> {
        match self {
            ModuleRecipe::Restrict { module, .. } => vec![module.as_str()],
            ModuleRecipe::Tensor { factors, .. } => factors.iter().map(String::as_str).collect(),
            _ => Vec::new(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ModuleRecipe::EvPsi { .. } => "ev_psi",
            ModuleRecipe::VThetaPsi { .. } => "v_theta_psi",
            ModuleRecipe::EvGamma { .. } => "ev_gamma",
            ModuleRecipe::Restrict { .. } => "restrict",
            ModuleRecipe::Tensor { .. } => "tensor",
            ModuleRecipe::Natural { .. } => "natural",
            ModuleRecipe::Kac { .. } => "kac",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum Verification {
    /// Super Jacobi, anticommutativity and parity of g.
    Structure,
    Irreducible { module: String },
    Annihilator { module: String },
    Quasifinite { module: String },
    Isomorphic {
        modules: [String; 2],
        #[serde(default = "yes")]
        expect: bool,
    },
    /// One of the preset pools: "osp12", "sl21" or "twisted_sl21".
    Pool { pool: String },
}

fn yes() -> bool {
    true
}

impl Verification {
    pub fn references(&self) -> Vec<&str> {
        match self {
            Verification::Irreducible { module } | Verification::Annihilator { module } | Verification::Quasifinite { module } => {
                vec![module.as_str()]
            }
            Verification::Isomorphic { modules, .. } => modules.iter().map(String::as_str).collect(),
            _ => Vec::new(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Verification::Structure => "structure".into(),
            Verification::Irreducible { module } => format!("irreducible/{module}"),
            Verification::Annihilator { module } => format!("annihilator/{module}"),
            Verification::Quasifinite { module } => format!("quasifinite/{module}"),
            Verification::Isomorphic { modules, .. } => format!("isomorphic/{}~{}", modules[0], modules[1]),
            Verification::Pool { pool } => format!("pool/{pool}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_accept_names_and_kac_parameters() {
        let s: Vec<SeedSpec> = serde_json::from_str(r#"["natural", { "kac": "7/3" }]"#).unwrap();
        assert!(matches!(&s[0], SeedSpec::Named(n) if n == "natural"));
        assert!(matches!(&s[1], SeedSpec::Kac { kac } if kac == "7/3"));
    }

    #[test]
    fn defaults_fill_in() {
        let c: RunConfig = serde_json::from_str(r#"{ "algebra": { "family": "osp", "params": [1, 2] }, "ideal": [ { "point": ["1"] } ] }"#).unwrap();
        assert_eq!(c.name, "run");
        assert_eq!(c.ideal[0].mult, 1);
        assert!(c.modules.is_empty() && c.verify.is_empty());
    }

    #[test]
    fn multiplicity_has_two_spellings() {
        let a: IdealFactor = serde_json::from_str(r#"{ "point": ["1"], "mult": 2 }"#).unwrap();
        let b: IdealFactor = serde_json::from_str(r#"{ "point": ["1"], "multiplicity": 2 }"#).unwrap();
        assert_eq!((a.mult, b.mult), (2, 2));
    }

    #[test]
    fn multiloop_expands_to_a_group() {
        let m: MultiloopSpec = serde_json::from_str(r#"{ "orders": [2], "target_autos": [["1", "-1", "1"]] }"#).unwrap();
        let g = m.group();
        assert!(g.multiloop);
        assert_eq!(g.orders, vec![2]);
        assert_eq!(g.automorphisms.len(), 1);
    }

    #[test]
    fn labels_and_references() {
        let v: Verification = serde_json::from_str(r#"{ "check": "isomorphic", "modules": ["A", "B"] }"#).unwrap();
        assert_eq!(v.label(), "isomorphic/A~B");
        assert_eq!(v.references(), vec!["A", "B"]);
        let r: ModuleRecipe = serde_json::from_str(r#"{ "kind": "tensor", "name": "T", "factors": ["A", "B"] }"#).unwrap();
        assert_eq!((r.name(), r.kind()), ("T", "tensor"));
        assert_eq!(r.references(), vec!["A", "B"]);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{ "algebra": { "family": "sl", "rank": 2 } }"#).is_err());
    }
}
