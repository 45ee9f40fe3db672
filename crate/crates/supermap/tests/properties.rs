use std::sync::Arc;

use proptest::collection::vec;
use proptest::prelude::*;
use proptest::sample::subsequence;

use supermap::classify::{build_ev_psi, EvalDatum};
use supermap::coordalg::{quotient_algebra, GroupAction, IdealSpec, Point, QuotientAlgebra, RingSpec};
use supermap::liesuper::{construct_basic, distinguished_grading, SuperAlgebra};
use supermap::mapalg::{build_map_algebra, evaluation_map, is_homomorphism, MapAlgebra};
use supermap::modules::{
    evaluation_module, irreducible_quotient, is_irreducible, isomorphic, kac_module, kac_setup, natural_module,
    one_dim_module, tensor_product,
};
use supermap::{Cyclotomic, Field, Matrix, Rational};

type Q = Rational;

fn rational() -> impl Strategy<Value = Q> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| Q::new(n, d).unwrap())
}

fn cyclotomic(order: u64, len: usize) -> impl Strategy<Value = Cyclotomic> {
    vec(rational(), len).prop_map(move |c| Cyclotomic::from_coeffs(order, c).unwrap())
}

fn algebra(i: usize) -> Arc<SuperAlgebra<Q>> {
    let (f, p): (&str, [usize; 2]) = [("sl", [2, 1]), ("sl", [3, 1]), ("sl", [2, 2]), ("osp", [1, 2]), ("osp", [2, 2]), ("osp", [3, 2])][i];
    Arc::new(construct_basic(f, &p).unwrap())
}

fn quotient(factors: &[(i64, u32)]) -> QuotientAlgebra<Q> {
    let ideal = IdealSpec::new(factors.iter().map(|&(p, n)| (Point::scalar(Q::integer(p)), n)).collect()).unwrap();
    quotient_algebra(RingSpec::polynomial(1), ideal).unwrap()
}

/// Distinct integer points in -3..=3 with multiplicities 1..=3.
fn ideal_factors() -> impl Strategy<Value = Vec<(i64, u32)>> {
    subsequence((-3i64..=3).collect::<Vec<_>>(), 1..=3).prop_flat_map(|pts| {
        let n = pts.len();
        (Just(pts), vec(1u32..=3, n)).prop_map(|(p, m)| p.into_iter().zip(m).collect())
    })
}

fn homogeneous(g: &SuperAlgebra<Q>, odd: bool, coeffs: &[Q]) -> Vec<Q> {
    let idx = if odd { g.odd_indices() } else { g.even_indices() };
    let mut v = vec![Q::zero(); g.dim()];
    for (k, &i) in idx.iter().enumerate() {
        v[i] = coeffs[k % coeffs.len()].clone();
    }
    v
}

fn sign(a: bool, b: bool) -> Q {
    if a && b {
        Q::one().neg()
    } else {
        Q::one()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cyclotomic_field_axioms(a in cyclotomic(12, 4), b in cyclotomic(12, 4), c in cyclotomic(12, 4)) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn mixed_orders_promote_to_the_lcm(a in cyclotomic(3, 2), b in cyclotomic(4, 2)) {
        let p = a.mul(&b);
        prop_assert!(p.is_zero() || 12 % p.order() == 0);
        prop_assert_eq!(p, b.mul(&a));
        prop_assert_eq!(a.add(&b).sub(&b), a);
    }

    #[test]
    fn roots_of_unity_have_their_order(m in 1u64..=12, k in -30i64..30) {
        let z = Cyclotomic::root_of_unity(m, k);
        prop_assert!(z.pow(m).is_one());
    }

    #[test]
    fn rationals_agree_with_integers(a in -10_000i64..10_000, b in -10_000i64..10_000, k in 1i64..50) {
        let (x, y) = (Q::integer(a), Q::integer(b));
        prop_assert_eq!(x.add(&y), Q::integer(a + b));
        prop_assert_eq!(x.sub(&y), Q::integer(a - b));
        prop_assert_eq!(x.mul(&y), Q::integer(a * b));
        if b != 0 {
            let r = Q::new(a * k, b * k).unwrap();
            prop_assert_eq!(&r, &Q::new(a, b).unwrap());
            prop_assert!(r.denom() > &0.into());
        }
    }

    #[test]
    fn scalar_strings_round_trip(x in rational(), z in cyclotomic(8, 4)) {
        prop_assert_eq!(Q::parse_exact(&x.to_string()).unwrap(), x);
        prop_assert_eq!(<Cyclotomic as Field>::parse_exact(&z.to_string()).unwrap(), z);
    }

    #[test]
    fn brackets_are_super_antisymmetric_and_jacobi(
        i in 0usize..6,
        parities in (any::<bool>(), any::<bool>(), any::<bool>()),
        cx in vec(rational(), 1..5),
        cy in vec(rational(), 1..5),
        cz in vec(rational(), 1..5),
    ) {
        let g = algebra(i);
        let (px, py, pz) = parities;
        let x = homogeneous(&g, px, &cx);
        let y = homogeneous(&g, py, &cy);
        let z = homogeneous(&g, pz, &cz);
        let xy = g.bracket(&x, &y);
        let yx = g.bracket(&y, &x);
        let s = sign(px, py).neg();
        prop_assert_eq!(xy.clone(), yx.iter().map(|t| t.mul(&s)).collect::<Vec<_>>());
        if xy.iter().any(|t| !t.is_zero()) {
            prop_assert_eq!(g.vector_parity(&xy).map(|p| p.is_odd()), Some(px ^ py));
        }
        // [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
        let lhs = g.bracket(&x, &g.bracket(&y, &z));
        let first = g.bracket(&xy, &z);
        let second = g.bracket(&y, &g.bracket(&x, &z));
        let t = sign(px, py);
        let rhs: Vec<Q> = first.iter().zip(&second).map(|(a, b)| a.add(&b.mul(&t))).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn distinguished_grading_is_a_lie_grading(i in 0usize..6, a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let g = algebra(i);
        let gr = distinguished_grading(&g).unwrap();
        let (x, y) = (a.index(g.dim()), b.index(g.dim()));
        for (k, _) in g.bracket_basis(x, y) {
            prop_assert_eq!(gr.degree[*k], gr.degree[x] + gr.degree[y]);
        }
        for u in 0..g.dim() {
            prop_assert_eq!(gr.degree[u] % 2 != 0, g.parity(u).is_odd());
        }
    }

    #[test]
    fn quotients_are_commutative_associative_unital(
        factors in ideal_factors(),
        a in vec(rational(), 9),
        b in vec(rational(), 9),
        c in vec(rational(), 9),
    ) {
        let q = quotient(&factors);
        let d: u32 = factors.iter().map(|f| f.1).sum();
        prop_assert_eq!(q.dim(), d as usize);
        prop_assert_eq!(q.point_blocks().len(), factors.len());
        let (a, b, c) = (&a[..q.dim()], &b[..q.dim()], &c[..q.dim()]);
        prop_assert_eq!(q.mul(a, b), q.mul(b, a));
        prop_assert_eq!(q.mul(&q.mul(a, b), c), q.mul(a, &q.mul(b, c)));
        prop_assert_eq!(q.mul(&q.unit(), a), a.to_vec());
        let mut total = vec![Q::zero(); q.dim()];
        for k in 0..factors.len() {
            let e = q.block_unit(k);
            prop_assert_eq!(q.mul(&e, &e), e.clone());
            total = total.iter().zip(&e).map(|(x, y)| x.add(y)).collect();
        }
        prop_assert_eq!(total, q.unit());
    }

    #[test]
    fn evaluation_is_a_homomorphism_with_the_expected_kernel(
        i in 0usize..6,
        factors in ideal_factors(),
        keep in vec(any::<prop::sample::Index>(), 3),
        x in vec(rational(), 1..6),
        y in vec(rational(), 1..6),
    ) {
        let g = algebra(i);
        let m = build_map_algebra(g.clone(), Arc::new(quotient(&factors))).unwrap();
        let targets: Vec<(Point<Q>, u32)> = factors
            .iter()
            .zip(&keep)
            .map(|(&(p, n), k)| (Point::scalar(Q::integer(p)), 1 + k.index(n as usize) as u32))
            .collect();
        let ev = evaluation_map(&m, &targets).unwrap();
        let kept: u32 = targets.iter().map(|t| t.1).sum();
        prop_assert_eq!(ev.kernel_dim(), g.dim() * (m.coefficients().dim() - kept as usize));
        prop_assert!(ev.is_surjective());
        let xv: Vec<Q> = (0..m.dim()).map(|k| x[k % x.len()].mul(&Q::integer((k % 3) as i64))).collect();
        let yv: Vec<Q> = (0..m.dim()).map(|k| y[k % y.len()].mul(&Q::integer((k % 2) as i64))).collect();
        prop_assert_eq!(ev.apply(&m.algebra().bracket(&xv, &yv)), ev.target.algebra().bracket(&ev.apply(&xv), &ev.apply(&yv)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn stable_ideals_have_divisible_support(pairs in subsequence(vec![1i64, 2, 3], 1..=3), mults in vec(1u32..=2, 3)) {
        // ±p under t ↦ -t, with equal multiplicities on each orbit.
        let ring = RingSpec::laurent(1);
        let factors: Vec<(Point<Q>, u32)> = pairs
            .iter()
            .enumerate()
            .flat_map(|(k, &p)| [(Point::scalar(Q::integer(p)), mults[k]), (Point::scalar(Q::integer(-p)), mults[k])])
            .collect();
        let support = factors.len();
        let a = quotient_algebra(ring, IdealSpec::new(factors.clone()).unwrap()).unwrap();
        let group = GroupAction::multiloop(&ring, &[2], &a).unwrap();
        prop_assert_eq!(support % group.group_order(), 0);
        let pieces = group.isotypic_decomposition(&a).unwrap();
        let total: usize = pieces.iter().map(|(_, b)| b.len()).sum();
        prop_assert_eq!(total, a.dim());
        for (_, basis) in &pieces {
            prop_assert!(basis.len() >= support / group.group_order());
        }
        let projectors: Vec<Matrix<Q>> = group.characters().iter().map(|xi| group.projector(xi).unwrap()).collect();
        let mut sum = Matrix::zeros(a.dim(), a.dim());
        for (s, p) in projectors.iter().enumerate() {
            prop_assert_eq!(p.mul(p), p.clone());
            for (t, r) in projectors.iter().enumerate() {
                if s != t {
                    prop_assert!(p.mul(r).is_zero());
                }
            }
            sum = sum.add(p);
        }
        prop_assert!(sum.is_identity());
    }

    #[test]
    fn evaluation_modules_respect_brackets_and_separate_points(
        i in prop::sample::select(vec![0usize, 3, 4]),
        pts in subsequence((-3i64..=3).collect::<Vec<_>>(), 2..=3),
    ) {
        let g = algebra(i);
        let factors: Vec<(i64, u32)> = pts.iter().map(|&p| (p, 1)).collect();
        let m = build_map_algebra(g.clone(), Arc::new(quotient(&factors))).unwrap();
        let n = natural_module(&g).unwrap();
        let at = |p: i64| evaluation_module(&m, &[(Point::scalar(Q::integer(p)), n.clone())]).unwrap();
        let (a, b) = (at(pts[0]), at(pts[1]));
        let ab = tensor_product(&a, &b).unwrap();
        prop_assert!(ab.check_brackets().passed);
        prop_assert!(is_irreducible(&ab).irreducible);
        prop_assert!(!isomorphic(&a, &b));
        let aa = tensor_product(&a, &a).unwrap();
        prop_assert!(!is_irreducible(&aa).irreducible);
        let mut e0 = vec![Q::zero(); a.dim()];
        e0[0] = Q::one();
        let same = irreducible_quotient(&a, &e0).unwrap();
        prop_assert_eq!(same.radical_dim, 0);
    }

    #[test]
    fn kac_dimension_law_for_random_characters(c in rational(), n in 1u32..=2, p in -2i64..=2) {
        let g = algebra(0);
        let a = Arc::new(quotient(&[(p, n)]));
        let setup = kac_setup(g, a).unwrap();
        let values: Vec<Q> = (0..n).map(|j| c.add(&Q::integer(j as i64))).collect();
        let theta = setup.central_functional(&[values]).unwrap();
        let base = one_dim_module(setup.even.algebra(), &theta).unwrap().with_frame(setup.even_frame.clone());
        let kac = kac_module(&setup, &base).unwrap();
        prop_assert_eq!(kac.total.dim(), 1 << (2 * n));
        prop_assert!(kac.total.check_brackets().passed);
        let top = irreducible_quotient(&kac.total, &kac.generator).unwrap();
        prop_assert!(is_irreducible(&top.module).irreducible);
    }

    #[test]
    fn distinct_evaluation_data_give_distinct_modules(
        pts in subsequence((-2i64..=2).collect::<Vec<_>>(), 3..=3),
        pick_a in vec(any::<bool>(), 3),
        pick_b in vec(any::<bool>(), 3),
    ) {
        let g = algebra(3);
        let factors: Vec<(i64, u32)> = pts.iter().map(|&p| (p, 1)).collect();
        let m = build_map_algebra(g.clone(), Arc::new(quotient(&factors))).unwrap();
        let n = natural_module(&g).unwrap();
        let datum = |pick: &[bool]| {
            let items = pts.iter().zip(pick).filter(|(_, &on)| on).map(|(&p, _)| (Point::scalar(Q::integer(p)), n.clone())).collect();
            EvalDatum::new(items).unwrap()
        };
        let (da, db) = (datum(&pick_a), datum(&pick_b));
        let (va, vb) = (build_ev_psi(&da, &m).unwrap(), build_ev_psi(&db, &m).unwrap());
        prop_assert!(is_irreducible(&va).irreducible);
        prop_assert_eq!(isomorphic(&va, &vb), pick_a == pick_b);
    }
}

#[test]
fn every_family_member_is_perfect() {
    for i in 0..6 {
        assert!(algebra(i).is_perfect(), "{}", algebra(i).name());
    }
}

#[test]
fn homomorphism_check_rejects_a_perturbed_map() {
    let g = algebra(0);
    let m: MapAlgebra<Q> = build_map_algebra(g.clone(), Arc::new(quotient(&[(0, 2)]))).unwrap();
    let ev = evaluation_map(&m, &[(Point::scalar(Q::zero()), 1)]).unwrap();
    assert!(is_homomorphism(m.algebra(), ev.target.algebra(), &ev.matrix));
    let mut bad = ev.matrix.clone();
    bad.set(0, 1, Q::one());
    assert!(!is_homomorphism(m.algebra(), ev.target.algebra(), &bad));
}
