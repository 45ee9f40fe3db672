use super::{Point, QuotientAlgebra, RingSpec};
use crate::error::{Error, Result};
use crate::linalg::{span, Matrix};
use crate::scalars::{root_in, Field};

/// The point map x ↦ P(x) with P(x)_i = s_i · x_{σ(i)}.
#[derive(Debug, Clone, PartialEq)]
pub struct PointMap<F> {
    pub scalars: Vec<F>,
    pub perm: Vec<usize>,
}

impl<F: Field> PointMap<F> {
    pub fn identity(vars: usize) -> Self {
        PointMap { scalars: vec![F::one(); vars], perm: (0..vars).collect() }
    }

    /// Multiplication of coordinate `k` by ζ_m.
    pub fn scaling(vars: usize, k: usize, m: u64) -> Result<Self> {
        let mut p = Self::identity(vars);
        p.scalars[k] = root_in::<F>(m, 1)?;
        Ok(p)
    }

    pub fn new(scalars: Vec<F>, perm: Vec<usize>) -> Result<Self> {
        let n = scalars.len();
        let mut seen = vec![false; n];
        for &s in &perm {
            if s >= n || std::mem::replace(&mut seen[s], true) {
                return Err(Error::Domain("point map permutation is invalid".into()));
            }
        }
        if perm.len() != n || scalars.iter().any(F::is_zero) {
            return Err(Error::Domain("point map needs nonzero scalars and a full permutation".into()));
        }
        Ok(PointMap { scalars, perm })
    }

    pub fn apply(&self, p: &Point<F>) -> Point<F> {
        Point(self.scalars.iter().zip(&self.perm).map(|(s, &j)| s.mul(&p.0[j])).collect())
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &Self) -> Self {
        let scalars = (0..self.perm.len()).map(|i| self.scalars[i].mul(&o.scalars[self.perm[i]])).collect();
        let perm = (0..self.perm.len()).map(|i| o.perm[self.perm[i]]).collect();
        PointMap { scalars, perm }
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut acc = Self::identity(self.perm.len());
        for _ in 0..k {
            acc = acc.compose(self);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.scalars.iter().all(F::is_one) && self.perm.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// A character ξ of ⊕ Z/m_j, with ξ(g_j) = ζ_{m_j}^{ξ_j}.
pub type Character = Vec<u64>;

/// A finite abelian group ⊕ Z/m_j acting on a quotient coordinate algebra
/// through point maps, by (γf)(x) = f(γ⁻¹x).
#[derive(Debug, Clone)]
pub struct GroupAction<F> {
    orders: Vec<u64>,
    generators: Vec<PointMap<F>>,
    matrices: Vec<Matrix<F>>,
    elements: Vec<Vec<u64>>,
}

impl<F: Field> GroupAction<F> {
    pub fn new(
        ring: &RingSpec,
        orders: Vec<u64>,
        generators: Vec<PointMap<F>>,
        quotient: &QuotientAlgebra<F>,
    ) -> Result<Self> {
        if orders.len() != generators.len() {
            return Err(Error::Domain("one order per generator is required".into()));
        }
        for (m, g) in orders.iter().zip(&generators) {
            if *m == 0 || g.perm.len() != ring.vars {
                return Err(Error::Domain("bad generator".into()));
            }
            if !g.pow(*m).is_identity() {
                return Err(Error::Order(format!("point map does not have order dividing {m}")));
            }
        }
        for (a, g) in generators.iter().enumerate() {
            for h in &generators[..a] {
                if g.compose(h) != h.compose(g) {
                    return Err(Error::Domain("generators do not commute".into()));
                }
            }
        }
        let matrices = generators.iter().map(|g| induced_matrix(g, quotient)).collect::<Result<Vec<_>>>()?;
        let mut act = GroupAction { orders, generators, matrices, elements: Vec::new() };
        act.elements = act.enumerate();
        act.check_free(&quotient.ideal().support())?;
        for m in &act.matrices {
            check_automorphism(m, quotient)?;
        }
        Ok(act)
    }

    /// The trivial group.
    pub fn trivial(ring: &RingSpec, quotient: &QuotientAlgebra<F>) -> Result<Self> {
        Self::new(ring, Vec::new(), Vec::new(), quotient)
    }

    /// Example multiloop action: generator j scales coordinate j by ζ_{m_j}.
    pub fn multiloop(ring: &RingSpec, orders: &[u64], quotient: &QuotientAlgebra<F>) -> Result<Self> {
        if orders.len() != ring.vars {
            return Err(Error::Domain("one order per variable is required".into()));
        }
        let gens = orders
            .iter()
            .enumerate()
            .map(|(k, &m)| PointMap::scaling(ring.vars, k, m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ring, orders.to_vec(), gens, quotient)
    }

    fn enumerate(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for &m in &self.orders {
            out = out.into_iter().flat_map(|e: Vec<u64>| (0..m).map(move |a| [e.clone(), vec![a]].concat())).collect();
        }
        out
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn group_order(&self) -> usize {
        self.elements.len()
    }

    /// Exponent of the group: the lcm of the cyclic orders.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |a, &m| num_integer::lcm(a, m))
    }

    pub fn generators(&self) -> &[PointMap<F>] {
        &self.generators
    }

    pub fn generator_matrices(&self) -> &[Matrix<F>] {
        &self.matrices
    }

    pub fn elements(&self) -> &[Vec<u64>] {
        &self.elements
    }

    pub fn characters(&self) -> Vec<Character> {
        self.elements.clone()
    }

    pub fn negate(&self, xi: &Character) -> Character {
        xi.iter().zip(&self.orders).map(|(k, m)| (m - k % m) % m).collect()
    }

    pub fn add(&self, a: &Character, b: &Character) -> Character {
        a.iter().zip(b).zip(&self.orders).map(|((x, y), m)| (x + y) % m).collect()
    }

    pub fn element_point_map(&self, a: &[u64]) -> PointMap<F> {
        let vars = self.generators.first().map_or(0, |g| g.perm.len());
        let mut acc = PointMap::identity(vars);
        for (g, &k) in self.generators.iter().zip(a) {
            acc = acc.compose(&g.pow(k));
        }
        acc
    }

    /// Matrix of a group element, given matrices for the generators.
    pub fn element_matrix(&self, gens: &[Matrix<F>], a: &[u64]) -> Matrix<F> {
        let mut acc: Option<Matrix<F>> = None;
        for (g, &k) in gens.iter().zip(a) {
            let p = g.pow(k);
            acc = Some(match acc {
                None => p,
                Some(m) => m.mul(&p),
            });
        }
        acc.unwrap_or_else(|| Matrix::identity(self.matrices.first().map_or(0, Matrix::rows)))
    }

    /// ξ(a) = ∏ ζ_{m_j}^{ξ_j a_j}.
    pub fn character_value(&self, xi: &Character, a: &[u64]) -> Result<F> {
        let mut v = F::one();
        for ((k, x), m) in xi.iter().zip(a).zip(&self.orders) {
            v = v.mul(&root_in::<F>(*m, ((k * x) % m) as i64)?);
        }
        Ok(v)
    }

    /// (1/|Γ|) Σ_γ ξ(γ)⁻¹ ρ(γ) for the representation given on generators.
    pub fn projector_for(&self, gens: &[Matrix<F>], dim: usize, xi: &Character) -> Result<Matrix<F>> {
        let mut p = Matrix::zeros(dim, dim);
        for a in &self.elements {
            let c = self.character_value(xi, a)?.inv()?;
            let m = if gens.is_empty() { Matrix::identity(dim) } else { self.element_matrix(gens, a) };
            p.add_scaled(&c, &m);
        }
        Ok(p.scale(&F::from_i64(self.elements.len() as i64).inv()?))
    }

    pub fn projector(&self, xi: &Character) -> Result<Matrix<F>> {
        let dim = self.matrices.first().map(Matrix::rows);
        match dim {
            Some(d) => self.projector_for(&self.matrices, d, xi),
            None => Err(Error::Precondition("use projector_for with an explicit dimension".into())),
        }
    }

    /// Isotypic pieces (ξ, basis) of a representation given on generators,
    /// listing every character (possibly with an empty basis).
    pub fn isotypic_for(&self, gens: &[Matrix<F>], dim: usize) -> Result<Vec<(Character, Vec<Vec<F>>)>> {
        self.characters()
            .into_iter()
            .map(|xi| {
                let p = self.projector_for(gens, dim, &xi)?;
                Ok((xi, span(dim, (0..dim).map(|c| p.column(c)))))
            })
            .collect()
    }

    /// Decomposition A/I = ⊕_ξ (A/I)_ξ.
    pub fn isotypic_decomposition(&self, quotient: &QuotientAlgebra<F>) -> Result<Vec<(Character, Vec<Vec<F>>)>> {
        self.isotypic_for(&self.matrices, quotient.dim())
    }

    pub fn orbit(&self, p: &Point<F>) -> Vec<Point<F>> {
        let mut out: Vec<Point<F>> = Vec::new();
        for a in &self.elements {
            let q = self.element_point_map(a).apply(p);
            if !out.contains(&q) {
                out.push(q);
            }
        }
        out
    }

    pub fn same_orbit(&self, p: &Point<F>, q: &Point<F>) -> bool {
        self.orbit(p).contains(q)
    }

    /// Group element sending p to q, if any.
    pub fn element_between(&self, p: &Point<F>, q: &Point<F>) -> Option<Vec<u64>> {
        self.elements.iter().find(|a| self.element_point_map(a).apply(p) == *q).cloned()
    }

    fn check_free(&self, points: &[Point<F>]) -> Result<()> {
        for p in points {
            for a in self.elements.iter().filter(|a| a.iter().any(|&k| k != 0)) {
                if self.element_point_map(a).apply(p) == *p {
                    return Err(Error::Freeness(format!("{p} is fixed by the element {a:?}")));
                }
            }
        }
        Ok(())
    }
}

/// Matrix of f ↦ f ∘ P⁻¹ on the quotient. A local monomial ∏(x_k − p_k)^{e_k}
/// at p goes to ∏ s_{τ(k)}^{−e_k} (x_{τ(k)} − q_{τ(k)})^{e_k} at q = Pp, τ = σ⁻¹.
fn induced_matrix<F: Field>(g: &PointMap<F>, a: &QuotientAlgebra<F>) -> Result<Matrix<F>> {
    let n = a.dim();
    let vars = g.perm.len();
    let mut tau = vec![0; vars];
    for (i, &s) in g.perm.iter().enumerate() {
        tau[s] = i;
    }
    let inv_scalars: Vec<F> = g.scalars.iter().map(F::inv).collect::<Result<_>>()?;
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        let b = a.block_of(i);
        let (p, mult) = &a.ideal().factors[b];
        let q = g.apply(p);
        let target = a
            .block_index(&q)
            .map_err(|_| Error::Stability(format!("image {q} of {p} is outside the support")))?;
        if a.ideal().factors[target].1 != *mult {
            return Err(Error::Stability(format!("multiplicities at {p} and {q} differ")));
        }
        let e = a.exponents(i);
        let mut e2 = vec![0; vars];
        let mut c = F::one();
        for k in 0..vars {
            e2[tau[k]] = e[k];
            c = c.mul(&inv_scalars[tau[k]].pow(u64::from(e[k])));
        }
        let j = a.point_blocks()[target].clone().find(|&j| a.exponents(j) == e2.as_slice()).expect("same local shape");
        m.set(j, i, c);
    }
    Ok(m)
}

fn check_automorphism<F: Field>(m: &Matrix<F>, a: &QuotientAlgebra<F>) -> Result<()> {
    let n = a.dim();
    let cols: Vec<Vec<F>> = (0..n).map(|j| m.column(j)).collect();
    for i in 0..n {
        for j in 0..n {
            let mut prod = vec![F::zero(); n];
            if let Some(k) = a.product_basis(i, j) {
                prod[k] = F::one();
            }
            if m.mul_vec(&prod) != a.mul(&cols[i], &cols[j]) {
                return Err(Error::Domain("group element is not an algebra automorphism".into()));
            }
        }
    }
    Ok(())
}
