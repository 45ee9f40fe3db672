use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{validate_superalgebra, Realization, SuperAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{kernel_of_rows, Matrix};
use crate::scalars::Field;

/// The constructible families. `Osp { m, n }` is osp(m|n) with `n` even.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Gl { m: usize, n: usize },
    Sl { m: usize, n: usize },
    /// psl(n,n) = sl(n,n) modulo its center, that is A(n-1,n-1).
    Psl { n: usize },
    Osp { m: usize, n: usize },
}

impl Family {
    pub fn parse(tag: &str, params: &[usize]) -> Result<Family> {
        let bad = |why: &str| Error::Construction(format!("{tag}{params:?}: {why}"));
        let two = || -> Result<(usize, usize)> {
            match params {
                [a, b] => Ok((*a, *b)),
                _ => Err(bad("expected two parameters")),
            }
        };
        match tag.to_ascii_lowercase().as_str() {
            "gl" => {
                let (m, n) = two()?;
                if m == 0 {
                    return Err(bad("m must be positive"));
                }
                Ok(Family::Gl { m, n })
            }
            "sl" => {
                let (m, n) = two()?;
                if m == 0 || (n == 0 && m < 2) {
                    return Err(bad("need m >= 1 and n >= 1, or m >= 2 and n = 0"));
                }
                Ok(Family::Sl { m, n })
            }
            "psl" => match params {
                [n] if *n >= 2 => Ok(Family::Psl { n: *n }),
                [a, b] if a == b && *a >= 2 => Ok(Family::Psl { n: *a }),
                _ => Err(bad("expected n >= 2")),
            },
            "a" => match params {
                [n] if *n >= 1 => Ok(Family::Psl { n: n + 1 }),
                [a, b] if a == b && *a >= 1 => Ok(Family::Psl { n: a + 1 }),
                [a, b] if a != b => Ok(Family::Sl { m: a.max(b) + 1, n: a.min(b) + 1 }),
                _ => Err(bad("expected A(m,n) with m > n >= 0 or A(n,n) with n >= 1")),
            },
            "osp" => {
                let (m, n) = two()?;
                if m == 0 || n == 0 || n % 2 == 1 {
                    return Err(bad("need M >= 1 and an even positive symplectic size"));
                }
                Ok(Family::Osp { m, n })
            }
            "f4" | "f(4)" | "g3" | "g(3)" | "d21" | "d(2,1)" | "d(2,1;a)" => {
                Err(Error::UnsupportedFamily(format!("exceptional family {tag} has no constructor")))
            }
            _ => Err(Error::UnsupportedFamily(tag.to_string())),
        }
    }

    pub fn is_lie_algebra(&self) -> bool {
        matches!(self, Family::Sl { n: 0, .. } | Family::Gl { n: 0, .. })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Gl { m, n } => write!(f, "gl({m},{n})"),
            Family::Sl { m, n } => write!(f, "sl({m},{n})"),
            Family::Psl { n } => write!(f, "A({},{})", n - 1, n - 1),
            Family::Osp { m, n } => write!(f, "osp({m}|{n})"),
        }
    }
}

/// Builds a member of a basic family in canonical basis order, validated.
pub fn construct_basic<F: Field>(family: &str, params: &[usize]) -> Result<SuperAlgebra<F>> {
    construct_basic_with(family, params, false)
}

/// As [`construct_basic`]; with `quotient_center` an sl(n,n) request returns
/// A(n,n) instead.
pub fn construct_basic_with<F: Field>(
    family: &str,
    params: &[usize],
    quotient_center: bool,
) -> Result<SuperAlgebra<F>> {
    let mut fam = Family::parse(family, params)?;
    if quotient_center {
        match fam {
            Family::Sl { m, n } if m == n && n >= 2 => fam = Family::Psl { n },
            Family::Psl { .. } => {}
            _ => return Err(Error::Construction(format!("{fam} has no center to quotient by"))),
        }
    }
    let g = build(&fam)?;
    let report = validate_superalgebra(&g);
    if !report.passed() {
        return Err(Error::Construction(format!("{fam}: structure constants fail validation")));
    }
    Ok(g)
}

fn build<F: Field>(fam: &Family) -> Result<SuperAlgebra<F>> {
    match *fam {
        Family::Gl { m, n } => general_linear(m, n, false),
        Family::Sl { m, n } => general_linear(m, n, true),
        Family::Psl { n } => {
            let g: SuperAlgebra<F> = general_linear(n, n, true)?;
            let center = g.center();
            if center.len() != 1 {
                return Err(Error::Construction("sl(n,n) center is not one-dimensional".into()));
            }
            let (q, _) = g.quotient(&center)?;
            let q = q.with_family(fam.clone());
            canonical(q)
        }
        Family::Osp { m, n } => orthosymplectic(m, n / 2),
    }
}

fn unit<F: Field>(size: usize, i: usize, j: usize) -> Matrix<F> {
    let mut x = Matrix::zeros(size, size);
    x.set(i, j, F::one());
    x
}

fn matrix_unit_label(i: usize, j: usize, size: usize) -> String {
    if size < 10 {
        format!("E{}{}", i + 1, j + 1)
    } else {
        format!("E{},{}", i + 1, j + 1)
    }
}

fn general_linear<F: Field>(m: usize, n: usize, traceless: bool) -> Result<SuperAlgebra<F>> {
    let size = m + n;
    let mut mats = Vec::new();
    let mut labels = Vec::new();
    if traceless {
        for i in 0..size - 1 {
            let mut h = unit::<F>(size, i, i);
            // Supertrace zero: across the even/odd boundary both signs agree.
            let s = if i + 1 == m { F::one() } else { F::one().neg() };
            h.set(i + 1, i + 1, s);
            mats.push(h);
            labels.push(format!("h{}", i + 1));
        }
    } else {
        for i in 0..size {
            mats.push(unit(size, i, i));
            labels.push(format!("h{}", i + 1));
        }
    }
    let rank = mats.len();
    let d: Vec<i32> = (0..size).map(|i| i32::from(n > 0 && i < m)).collect();
    let mut degrees = vec![0; rank];
    for i in 0..size {
        for j in 0..size {
            if i != j {
                mats.push(unit(size, i, j));
                labels.push(matrix_unit_label(i, j, size));
                degrees.push(d[i] - d[j]);
            }
        }
    }
    let real = Realization::new(m, n, mats)?;
    let family = if traceless { Family::Sl { m, n } } else { Family::Gl { m, n } };
    let g = SuperAlgebra::from_realization(labels, real)?
        .with_family(family)
        .with_cartan((0..rank).collect())
        .with_degree_hint(degrees);
    canonical(g)
}

/// osp(M|2n) preserving the even supersymmetric form that is antidiagonal on
/// the orthogonal block and standard on the symplectic block.
fn orthosymplectic<F: Field>(big_m: usize, n: usize) -> Result<SuperAlgebra<F>> {
    let size = big_m + 2 * n;
    let par = |i: usize| usize::from(i >= big_m);
    let mut form = vec![vec![0i64; size]; size];
    for i in 0..big_m {
        form[i][big_m - 1 - i] = 1;
    }
    for k in 0..n {
        form[big_m + k][big_m + n + k] = 1;
        form[big_m + n + k][big_m + k] = -1;
    }

    // Diagonal Cartan elements as integer diagonals.
    let mut cartan_diag: Vec<Vec<i64>> = Vec::new();
    for i in 0..big_m / 2 {
        let mut d = vec![0; size];
        d[i] = 1;
        d[big_m - 1 - i] = -1;
        cartan_diag.push(d);
    }
    for k in 0..n {
        let mut d = vec![0; size];
        d[big_m + k] = 1;
        d[big_m + n + k] = -1;
        cartan_diag.push(d);
    }
    let rank = cartan_diag.len();
    let grading: Vec<i64> = (0..size)
        .map(|i| {
            if big_m == 2 {
                [1, -1].get(i).copied().unwrap_or(0)
            } else if i >= big_m {
                if i < big_m + n {
                    1
                } else {
                    -1
                }
            } else {
                0
            }
        })
        .collect();

    type Slot = (usize, Vec<i64>);
    let mut groups: BTreeMap<Slot, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..size {
        for j in 0..size {
            let w: Vec<i64> = cartan_diag.iter().map(|d| d[i] - d[j]).collect();
            groups.entry(((par(i) + par(j)) % 2, w)).or_default().push((i, j));
        }
    }

    let mut mats: Vec<Matrix<F>> = cartan_diag
        .iter()
        .map(|d| Matrix::diagonal(&d.iter().map(|&x| F::from_i64(x)).collect::<Vec<_>>()))
        .collect();
    let mut labels: Vec<String> = (1..=rank).map(|i| format!("h{i}")).collect();
    let mut degrees = vec![0i32; rank];
    for ((p, w), units) in &groups {
        let rows = form_preservation_rows(&form, units, *p, par);
        let sols = kernel_of_rows(rows, units.len());
        if w.iter().all(|&x| x == 0) {
            if sols.len() != rank {
                return Err(Error::Construction("zero weight space of osp differs from the Cartan".into()));
            }
            continue;
        }
        if sols.len() > 1 {
            return Err(Error::Construction("osp root space of dimension > 1".into()));
        }
        for v in sols {
            let lead = v.iter().find(|x: &&F| !x.is_zero()).cloned().expect("kernel vector is nonzero");
            let inv = lead.inv()?;
            let mut x = Matrix::zeros(size, size);
            let mut deg = None;
            for ((i, j), c) in units.iter().zip(&v) {
                if !c.is_zero() {
                    x.set(*i, *j, c.mul(&inv));
                    deg = Some(grading[*i] - grading[*j]);
                }
            }
            mats.push(x);
            labels.push(format!("x{}", labels.len()));
            degrees.push(deg.unwrap_or(0) as i32);
        }
    }
    let real = Realization::new(big_m, 2 * n, mats)?;
    let g = SuperAlgebra::from_realization(labels, real)?
        .with_family(Family::Osp { m: big_m, n: 2 * n })
        .with_cartan((0..rank).collect())
        .with_degree_hint(degrees);
    let g = canonical(g)?;
    relabel_hef(g)
}

/// Linear conditions B(Xu, v) + (-1)^{|X||u|} B(u, Xv) = 0 on the
/// coefficients of X over the given matrix units.
fn form_preservation_rows<F: Field>(
    form: &[Vec<i64>],
    units: &[(usize, usize)],
    parity: usize,
    par: impl Fn(usize) -> usize,
) -> Vec<Vec<F>> {
    let size = form.len();
    let mut rows = Vec::new();
    for a in 0..size {
        let sign = if parity * par(a) % 2 == 1 { -1 } else { 1 };
        for b in 0..size {
            let row: Vec<F> = units
                .iter()
                .map(|&(i, j)| {
                    let mut c = 0;
                    if a == j {
                        c += form[i][b];
                    }
                    if b == j {
                        c += sign * form[a][i];
                    }
                    F::from_i64(c)
                })
                .collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    rows
}

/// Reorders the basis canonically when root data is available; otherwise
/// keeps the construction order with even elements first.
fn canonical<F: Field>(g: SuperAlgebra<F>) -> Result<SuperAlgebra<F>> {
    let order = match g.root_data() {
        Ok(rd) => rd.canonical_order(&g),
        Err(_) => {
            let mut o = g.even_indices();
            o.extend(g.odd_indices());
            o
        }
    };
    g.permuted(&order)
}

/// Names Cartan elements h1.., positive root vectors e1.. and their
/// negative mirrors f1.. in basis order.
fn relabel_hef<F: Field>(g: SuperAlgebra<F>) -> Result<SuperAlgebra<F>> {
    let rd = g.root_data()?.clone();
    let mut labels = g.labels().to_vec();
    for (a, &c) in rd.cartan.iter().enumerate() {
        labels[c] = format!("h{}", a + 1);
    }
    let positives: Vec<_> = rd.roots.iter().filter(|r| r.positive).collect();
    for (a, r) in positives.iter().enumerate() {
        labels[r.indices[0]] = format!("e{}", a + 1);
        let mirror = rd.mirror(r).expect("negative mirror exists");
        labels[mirror.indices[0]] = format!("f{}", a + 1);
    }
    Ok(g.with_labels(labels))
}
