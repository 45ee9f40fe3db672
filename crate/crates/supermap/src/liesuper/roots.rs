//! Roots, the distinguished grading and the even part.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{Family, Parity, SuperAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{unit_vector, Echelon, Matrix};
use crate::scalars::{Field, Rational};

#[derive(Debug, Clone)]
pub struct Root<F> {
    /// Values on the Cartan basis elements, in `RootData::cartan` order.
    pub weight: Vec<F>,
    /// Degree under the distinguished grading.
    pub degree: i32,
    pub indices: Vec<usize>,
    pub parity: Parity,
    pub positive: bool,
    pub height: i64,
    key: Vec<Rational>,
}

impl<F> Root<F> {
    /// (degree, weight) as rationals; the positivity order is lexicographic
    /// in this key.
    pub fn key(&self) -> &[Rational] {
        &self.key
    }
}

#[derive(Debug, Clone)]
pub struct RootData<F> {
    pub cartan: Vec<usize>,
    /// Positive roots by (height, key), then negative roots in mirror order.
    pub roots: Vec<Root<F>>,
    /// Positions in `roots`.
    pub simple_roots: Vec<usize>,
    /// Weights with integer values on the Cartan basis.
    pub weight_lattice_basis: Vec<Vec<F>>,
}

impl<F: Field> RootData<F> {
    pub fn positive(&self) -> impl Iterator<Item = &Root<F>> {
        self.roots.iter().filter(|r| r.positive)
    }

    pub fn negative(&self) -> impl Iterator<Item = &Root<F>> {
        self.roots.iter().filter(|r| !r.positive)
    }

    pub fn count(&self, parity: Parity, positive: bool) -> usize {
        self.roots.iter().filter(|r| r.parity == parity && r.positive == positive).count()
    }

    /// Basis indices of n⁺.
    pub fn n_plus(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.positive().flat_map(|r| r.indices.iter().copied()).collect();
        v.sort_unstable();
        v
    }

    /// Basis indices of n⁻.
    pub fn n_minus(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.negative().flat_map(|r| r.indices.iter().copied()).collect();
        v.sort_unstable();
        v
    }

    pub fn mirror(&self, r: &Root<F>) -> Option<&Root<F>> {
        let neg: Vec<Rational> = r.key.iter().map(|x| -x).collect();
        self.roots.iter().find(|s| s.key == neg)
    }

    /// Root containing a given basis index.
    pub fn root_of(&self, index: usize) -> Option<&Root<F>> {
        self.roots.iter().find(|r| r.indices.contains(&index))
    }

    /// Weight of a basis element (zero on the Cartan).
    pub fn weight_of(&self, index: usize) -> Vec<F> {
        match self.root_of(index) {
            Some(r) => r.weight.clone(),
            None => vec![F::zero(); self.cartan.len()],
        }
    }

    /// Canonical basis order: even before odd; Cartan, positive root
    /// vectors, then negative mirrors.
    pub fn canonical_order(&self, g: &SuperAlgebra<F>) -> Vec<usize> {
        let mut order = Vec::with_capacity(g.dim());
        for parity in [Parity::Even, Parity::Odd] {
            if parity == Parity::Even {
                order.extend(self.cartan.iter().copied());
            }
            for positive in [true, false] {
                for r in self.roots.iter().filter(|r| r.positive == positive && r.parity == parity) {
                    order.extend(r.indices.iter().copied());
                }
            }
        }
        order
    }
}

fn lex_positive(key: &[Rational]) -> bool {
    key.iter().find(|x| !x.is_zero()).is_some_and(|x| !x.is_negative())
}

pub(super) fn compute_root_data<F: Field>(g: &SuperAlgebra<F>) -> Result<RootData<F>> {
    let n = g.dim();
    let cartan = g.cartan().to_vec();
    if cartan.is_empty() {
        return Err(Error::Unsupported("no diagonal Cartan subalgebra recorded".into()));
    }
    let mut weights: Vec<Vec<F>> = vec![Vec::with_capacity(cartan.len()); n];
    for &c in &cartan {
        for (j, w) in weights.iter_mut().enumerate() {
            let b = g.bracket_basis(c, j);
            match b.as_slice() {
                [] => w.push(F::zero()),
                [(k, x)] if *k == j => w.push(x.clone()),
                _ => {
                    return Err(Error::Unsupported(format!(
                        "ad({}) is not diagonal on {}",
                        g.labels()[c],
                        g.labels()[j]
                    )))
                }
            }
        }
    }
    let zero_space: Vec<usize> = (0..n).filter(|&j| weights[j].iter().all(F::is_zero)).collect();
    if zero_space != cartan {
        return Err(Error::Unsupported("zero weight space is larger than the Cartan".into()));
    }
    let degrees: Vec<i32> = g.degree_hint().map(<[i32]>::to_vec).unwrap_or_else(|| vec![0; n]);

    let mut groups: BTreeMap<Vec<Rational>, Vec<usize>> = BTreeMap::new();
    for j in (0..n).filter(|j| !cartan.contains(j)) {
        let mut key = vec![Rational::integer(i64::from(degrees[j]))];
        for w in &weights[j] {
            key.push(w.to_rational().ok_or_else(|| Error::Unsupported("irrational root value".into()))?);
        }
        groups.entry(key).or_default().push(j);
    }
    for (key, idx) in &groups {
        if idx.iter().any(|&j| g.parity(j) != g.parity(idx[0])) {
            return Err(Error::Unsupported("root space mixes parities".into()));
        }
        let neg: Vec<Rational> = key.iter().map(|x| -x).collect();
        if !groups.contains_key(&neg) {
            return Err(Error::Unsupported("root without a negative mirror".into()));
        }
    }

    let pos_keys: Vec<&Vec<Rational>> = groups.keys().filter(|k| lex_positive(k)).collect();
    // Process positives in increasing order; any decomposition uses smaller ones.
    let mut sorted = pos_keys.clone();
    sorted.sort_by(|a, b| {
        let d: Vec<Rational> = a.iter().zip(b.iter()).map(|(x, y)| x - y).collect();
        if d.iter().all(Rational::is_zero) {
            std::cmp::Ordering::Equal
        } else if lex_positive(&d) {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Less
        }
    });
    let mut height: BTreeMap<Vec<Rational>, i64> = BTreeMap::new();
    let mut simple_keys = Vec::new();
    for k in &sorted {
        let mut h = None;
        for a in &sorted {
            if let Some(ha) = height.get(*a) {
                let rest: Vec<Rational> = k.iter().zip(a.iter()).map(|(x, y)| x - y).collect();
                if let Some(hb) = height.get(&rest) {
                    h = Some(ha + hb);
                    break;
                }
            }
        }
        let h = h.unwrap_or_else(|| {
            simple_keys.push((*k).clone());
            1
        });
        height.insert((*k).clone(), h);
    }

    let mut pos: Vec<(i64, Vec<Rational>)> = pos_keys.iter().map(|k| (height[*k], (*k).clone())).collect();
    pos.sort();
    let mut roots = Vec::new();
    let make = |key: &Vec<Rational>, positive: bool, height: i64| {
        let idx = groups[key].clone();
        Root {
            weight: weights[idx[0]].clone(),
            degree: degrees[idx[0]],
            parity: g.parity(idx[0]),
            indices: idx,
            positive,
            height,
            key: key.clone(),
        }
    };
    for (h, k) in &pos {
        roots.push(make(k, true, *h));
    }
    for (h, k) in &pos {
        let neg: Vec<Rational> = k.iter().map(|x| -x).collect();
        roots.push(make(&neg, false, -h));
    }
    let simple_roots = roots.iter().enumerate().filter(|(_, r)| simple_keys.contains(&r.key)).map(|(a, _)| a).collect();
    let r = cartan.len();
    Ok(RootData { cartan, roots, simple_roots, weight_lattice_basis: (0..r).map(|i| unit_vector(r, i)).collect() })
}

/// The triangular decomposition g = n⁻ ⊕ h ⊕ n⁺ for the diagonal Cartan.
pub fn triangular_decomposition<F: Field>(g: &SuperAlgebra<F>) -> Result<RootData<F>> {
    g.root_data().cloned()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradingType {
    TypeI,
    TypeII,
    LieAlgebra,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistinguishedGrading {
    pub degree: Vec<i32>,
    pub type_flag: GradingType,
}

impl DistinguishedGrading {
    pub fn piece(&self, d: i32) -> Vec<usize> {
        (0..self.degree.len()).filter(|&i| self.degree[i] == d).collect()
    }

    /// Dimensions of the pieces of degree -2..=2.
    pub fn dims(&self) -> [usize; 5] {
        let mut out = [0; 5];
        for &d in &self.degree {
            out[(d + 2) as usize] += 1;
        }
        out
    }
}

/// Matrices of ad(x) restricted to the odd part, for x in the even part.
fn odd_action<F: Field>(g: &SuperAlgebra<F>) -> Vec<Matrix<F>> {
    let odd = g.odd_indices();
    let pos: BTreeMap<usize, usize> = odd.iter().enumerate().map(|(a, &i)| (i, a)).collect();
    g.even_indices()
        .into_iter()
        .map(|x| {
            let mut m = Matrix::zeros(odd.len(), odd.len());
            for (b, &j) in odd.iter().enumerate() {
                for (k, c) in g.bracket_basis(x, j) {
                    m.set(pos[k], b, c.clone());
                }
            }
            m
        })
        .collect()
}

/// Dimension of the algebra of matrices commuting with all given ones.
pub fn commutant_dim<F: Field>(mats: &[Matrix<F>], d: usize) -> usize {
    let mut ech = Echelon::new(d * d);
    for a in mats {
        for i in 0..d {
            for j in 0..d {
                // (A T - T A)_{ij}
                let mut row = vec![F::zero(); d * d];
                for c in 0..d {
                    let x = a.get(i, c);
                    if !x.is_zero() {
                        row[c * d + j] = row[c * d + j].add(x);
                    }
                    let y = a.get(c, j);
                    if !y.is_zero() {
                        row[i * d + c] = row[i * d + c].sub(y);
                    }
                }
                ech.insert(row);
            }
        }
    }
    d * d - ech.len()
}

/// Submodule of the odd part generated by one odd basis vector under ad(g₀̄).
fn spin_odd<F: Field>(g: &SuperAlgebra<F>, start: usize) -> Echelon<F> {
    let n = g.dim();
    let even = g.even_indices();
    let mut ech = Echelon::new(n);
    let mut queue = vec![unit_vector(n, start)];
    ech.insert(queue[0].clone());
    while let Some(v) = queue.pop() {
        for &x in &even {
            let w = g.bracket(&unit_vector(n, x), &v);
            if !ech.contains(&w) {
                ech.insert(w.clone());
                queue.push(w);
            }
        }
    }
    ech
}

/// The distinguished Z-grading with type detection from the even action on
/// the odd part.
pub fn distinguished_grading<F: Field>(g: &SuperAlgebra<F>) -> Result<DistinguishedGrading> {
    let n = g.dim();
    if g.odd_dim() == 0 {
        return Ok(DistinguishedGrading { degree: vec![0; n], type_flag: GradingType::LieAlgebra });
    }
    let special = matches!(g.family(), Some(Family::Gl { .. }))
        || matches!(g.family(), Some(Family::Sl { m, n }) if m == n)
        || !g.center().is_empty();
    let irreducible = commutant_dim(&odd_action(g), g.odd_dim()) == 1;
    let type_flag = if special {
        GradingType::NotApplicable
    } else if irreducible {
        GradingType::TypeII
    } else {
        GradingType::TypeI
    };
    let degree = match g.degree_hint() {
        Some(d) => d.to_vec(),
        None if type_flag == GradingType::TypeII => {
            return Err(Error::Unsupported("type II grading needs a grading element".into()))
        }
        None => {
            let odd = g.odd_indices();
            let plus = spin_odd(g, odd[0]);
            let mut d = vec![0; n];
            for &j in &odd {
                d[j] = if plus.contains(&unit_vector(n, j)) { 1 } else { -1 };
            }
            d
        }
    };
    let out = DistinguishedGrading { degree, type_flag };
    check_grading(g, &out)?;
    Ok(out)
}

fn check_grading<F: Field>(g: &SuperAlgebra<F>, gr: &DistinguishedGrading) -> Result<()> {
    let n = g.dim();
    let bad = |why: &str| Err(Error::Inconsistency(format!("grading of {}: {why}", g.name())));
    for i in 0..n {
        let d = gr.degree[i];
        if d.rem_euclid(2) as usize != g.parity(i).bit() {
            return bad("degree parity disagrees with the element parity");
        }
        let limit = if gr.type_flag == GradingType::TypeII { 2 } else { 1 };
        if d.abs() > limit {
            return bad("degree out of range");
        }
        for j in 0..n {
            if g.bracket_basis(i, j).iter().any(|(k, _)| gr.degree[*k] != d + gr.degree[j]) {
                return bad("not a Lie grading");
            }
        }
    }
    if gr.type_flag == GradingType::TypeI {
        for d in [1, -1] {
            let piece = gr.piece(d);
            let mats: Vec<Matrix<F>> = gr
                .piece(0)
                .iter()
                .map(|&x| {
                    let mut m = Matrix::zeros(piece.len(), piece.len());
                    for (b, &j) in piece.iter().enumerate() {
                        for (k, c) in g.bracket_basis(x, j) {
                            let a = piece.iter().position(|p| p == k).expect("graded");
                            m.set(a, b, c.clone());
                        }
                    }
                    m
                })
                .collect();
            if commutant_dim(&mats, piece.len()) != 1 {
                return bad("odd piece is not irreducible");
            }
        }
    }
    Ok(())
}

/// Center and derived algebra of a reductive Lie algebra, as bases of
/// coordinate vectors.
#[derive(Debug, Clone)]
pub struct ReductiveSplit<F> {
    pub semisimple: Vec<Vec<F>>,
    pub center: Vec<Vec<F>>,
}

pub fn reductive_split<F: Field>(g0: &SuperAlgebra<F>) -> Result<ReductiveSplit<F>> {
    if g0.odd_dim() != 0 {
        return Err(Error::Precondition("reductive split needs a Lie algebra".into()));
    }
    let semisimple = g0.derived_span();
    let center = g0.center();
    let mut ech = Echelon::from_vectors(g0.dim(), semisimple.iter().cloned());
    for z in &center {
        if !ech.insert(z.clone()) {
            return Err(Error::Precondition("center meets the derived algebra".into()));
        }
    }
    if ech.len() != g0.dim() {
        return Err(Error::Precondition("even part is not reductive".into()));
    }
    Ok(ReductiveSplit { semisimple, center })
}

/// Shape of the even part: dimension, center dimension and the
/// (dimension, rank) of each simple component of [g₀̄, g₀̄].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvenPartSummary {
    pub dim: usize,
    pub center_dim: usize,
    pub components: Vec<(usize, usize)>,
}

pub fn even_part_summary<F: Field>(g: &SuperAlgebra<F>) -> Result<EvenPartSummary> {
    let g0 = g.subalgebra(&g.even_indices())?;
    let split = reductive_split(&g0)?;
    if split.semisimple.is_empty() {
        return Ok(EvenPartSummary { dim: g0.dim(), center_dim: split.center.len(), components: Vec::new() });
    }
    let rd = g.root_data()?;
    let n = g.dim();
    let even = g.even_indices();
    let even_roots: Vec<usize> = rd.roots.iter().filter(|r| r.parity == Parity::Even).flat_map(|r| r.indices.clone()).collect();
    let mut seen: Vec<Echelon<F>> = Vec::new();
    let mut components = Vec::new();
    for &x in &even_roots {
        if seen.iter().any(|e| e.contains(&unit_vector(n, x))) {
            continue;
        }
        let mut ech = Echelon::new(n);
        let mut queue = vec![unit_vector(n, x)];
        ech.insert(queue[0].clone());
        while let Some(v) = queue.pop() {
            for &y in &even {
                let w = g.bracket(&unit_vector(n, y), &v);
                if !ech.contains(&w) {
                    ech.insert(w.clone());
                    queue.push(w);
                }
            }
        }
        let roots_inside = even_roots.iter().filter(|&&j| ech.contains(&unit_vector(n, j))).count();
        components.push((ech.len(), ech.len() - roots_inside));
        seen.push(ech);
    }
    components.sort_unstable();
    Ok(EvenPartSummary { dim: g0.dim(), center_dim: split.center.len(), components })
}
