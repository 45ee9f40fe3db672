//! Associative envelopes, the density criterion and irreducible quotients.

use std::collections::VecDeque;

use serde::Serialize;

use super::weights::{highest_weight_certificate, highest_weight_radical};
use super::Module;
use crate::error::{Error, Result};
use crate::liesuper::SuperAlgebra;
use crate::linalg::{kernel_of_rows, unit_vector, Echelon, Matrix};
use crate::par::map_indices;
use crate::scalars::Field;

/// Modules up to this dimension are certified through the envelope; larger
/// ones with weight data use the highest-weight criterion.
pub const ENVELOPE_LIMIT: usize = 16;

/// A small set of basis indices generating the algebra under brackets,
/// chosen greedily with odd elements first.
pub fn lie_generators<F: Field>(alg: &SuperAlgebra<F>) -> Vec<usize> {
    let n = alg.dim();
    let mut ech = Echelon::new(n);
    let mut span: Vec<Vec<F>> = Vec::new();
    let mut gens = Vec::new();
    for i in alg.odd_indices().into_iter().chain(alg.even_indices()) {
        if ech.len() == n {
            break;
        }
        let e = unit_vector(n, i);
        let r = ech.reduce(&e);
        if !ech.insert_reduced(r) {
            continue;
        }
        gens.push(i);
        span.push(e.clone());
        let mut queue = vec![e];
        while let Some(v) = queue.pop() {
            let current = span.clone();
            for w in &current {
                let b = alg.bracket(&v, w);
                let r = ech.reduce(&b);
                if ech.insert_reduced(r) {
                    span.push(b.clone());
                    queue.push(b);
                }
            }
        }
    }
    gens
}

/// The associative algebra generated by the action and the identity, as an
/// echelon basis of flattened d×d matrices.
pub fn envelope<F: Field>(v: &Module<F>) -> Echelon<F> {
    let d = v.dim();
    let full = d * d;
    let gens: Vec<Matrix<F>> =
        lie_generators(v.algebra()).into_iter().map(|i| v.action(i).clone()).filter(|m| !m.is_zero()).collect();
    let mut ech = Echelon::new(full);
    let id = Matrix::<F>::identity(d).into_data();
    let mut queue = VecDeque::new();
    if ech.insert(id.clone()) {
        queue.push_back(id);
    }
    while let Some(m) = queue.pop_front() {
        if ech.len() == full {
            break;
        }
        let m = Matrix::from_flat(d, d, m);
        for g in &gens {
            let r = ech.reduce(g.mul(&m).data());
            if ech.insert_reduced(r.clone()) {
                queue.push_back(r);
            }
        }
    }
    ech
}

/// Evidence for (ir)reducibility.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub irreducible: bool,
    pub method: String,
    pub module_dim: usize,
    /// Dimension of the associative envelope (envelope method).
    pub envelope_dim: Option<usize>,
    /// Dimension of the n⁺-invariants (highest-weight method).
    pub invariants: Option<usize>,
}

fn envelope_certificate<F: Field>(v: &Module<F>) -> Certificate {
    let e = envelope(v).len();
    Certificate {
        irreducible: v.dim() > 0 && e == v.dim() * v.dim(),
        method: "envelope".into(),
        module_dim: v.dim(),
        envelope_dim: Some(e),
        invariants: None,
    }
}

/// Absolute irreducibility.
pub fn is_irreducible<F: Field>(v: &Module<F>) -> Certificate {
    if v.dim() > ENVELOPE_LIMIT && v.frame().is_some() {
        if let Ok(c) = highest_weight_certificate(v) {
            return c;
        }
    }
    envelope_certificate(v)
}

/// Null space of the trace form on the envelope, multiplied into V.
fn envelope_radical<F: Field>(v: &Module<F>) -> Vec<Vec<F>> {
    let d = v.dim();
    let (rows, _) = envelope(v).into_rref();
    let mats: Vec<Matrix<F>> = rows.into_iter().map(|r| Matrix::from_flat(d, d, r)).collect();
    let k = mats.len();
    let gram = map_indices(k, |a| (0..k).map(|b| mats[a].trace_of_product(&mats[b])).collect::<Vec<F>>());
    let mut out = Echelon::new(d);
    for c in kernel_of_rows(gram, k) {
        let mut r = Matrix::zeros(d, d);
        for (x, m) in c.iter().zip(&mats) {
            if !x.is_zero() {
                r.add_scaled(x, m);
            }
        }
        for j in 0..d {
            out.insert(r.column(j));
        }
    }
    out.into_rref().0
}

#[derive(Debug, Clone)]
pub struct IrreducibleQuotient<F> {
    pub module: Module<F>,
    /// Dimension of the maximal submodule N.
    pub radical_dim: usize,
    /// Basis vectors of V kept in V/N.
    pub kept: Vec<usize>,
    pub method: String,
}

/// V/N for the unique maximal submodule N of the cyclic module V generated
/// by `generator`.
pub fn irreducible_quotient<F: Field>(v: &Module<F>, generator: &[F]) -> Result<IrreducibleQuotient<F>> {
    if generator.len() != v.dim() {
        return Err(Error::Dimension("generator has the wrong length".into()));
    }
    if v.spin(&[generator.to_vec()]).len() != v.dim() {
        return Err(Error::Precondition("vector does not generate the module".into()));
    }
    let (radical, method) = if v.dim() > ENVELOPE_LIMIT && v.frame().is_some() {
        (highest_weight_radical(v, generator)?, "highest-weight")
    } else {
        (envelope_radical(v), "envelope")
    };
    let (module, kept) = v.quotient(&radical)?;
    Ok(IrreducibleQuotient { module, radical_dim: radical.len(), kept, method: method.into() })
}
