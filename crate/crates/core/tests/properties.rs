//! Algebraic invariants on random elements.

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use opcalc::combinat::{binomial, composition_coeff, stirling2, weighted_coeff, falling};
use opcalc::env::{sweep_letters, Env, EnvElem, EnvGen, Flavor};
use opcalc::liealg::{basis_gens, LieElem, PGen};
use opcalc::models::{fock_sl2, FockVector, Sl2, TautMono, TautPoly, TautSpace};
use opcalc::poly::{Monomial, Poly};
use opcalc::ring::Ring;
use opcalc::scalar::sign;
use opcalc::{Int, IntPoly, IntRing};
use proptest::prelude::*;

fn cohomology() -> &'static Arc<IntRing> {
    static R: OnceLock<Arc<IntRing>> = OnceLock::new();
    R.get_or_init(|| Ring::curve_cohomology(2))
}

fn chow() -> &'static Arc<IntRing> {
    static R: OnceLock<Arc<IntRing>> = OnceLock::new();
    R.get_or_init(|| Ring::curve_chow_symbolic(2))
}

fn gens(ring: &IntRing) -> Vec<PGen> {
    basis_gens(ring, 3, 3)
}

/// A random homogeneous-parity combination: either all even or all odd generators.
fn lie(ring: &Arc<IntRing>, picks: &[(usize, i64)], odd: bool) -> LieElem<Int> {
    let all: Vec<PGen> = gens(ring).into_iter().filter(|g| ring.monomial_is_odd(&g.a) == odd).collect();
    let mut x = LieElem::zero(ring);
    for &(i, c) in picks {
        x.add_term(all[i % all.len()].clone(), &IntPoly::from_int(c));
    }
    x
}

fn picks() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..400, -3i64..=3), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bracket_is_super_antisymmetric(a in picks(), b in picks(), oa: bool, ob: bool) {
        let r = cohomology();
        let (x, y) = (lie(r, &a, oa), lie(r, &b, ob));
        let xy = x.bracket(&y).unwrap();
        let yx = y.bracket(&x).unwrap();
        let s: Int = sign(oa && ob);
        prop_assert!(xy.plus(&yx.scaled(&Poly::constant(s))).is_zero());
    }

    #[test]
    fn bracket_satisfies_graded_jacobi(a in picks(), b in picks(), c in picks(), oa: bool, ob: bool, oc: bool) {
        let r = cohomology();
        let (x, y, z) = (lie(r, &a, oa), lie(r, &b, ob), lie(r, &c, oc));
        // [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
        let lhs = x.bracket(&y.bracket(&z).unwrap()).unwrap();
        let s: Int = sign(oa && ob);
        let rhs = x.bracket(&y).unwrap().bracket(&z).unwrap()
            .plus(&y.bracket(&x.bracket(&z).unwrap()).unwrap().scaled(&Poly::constant(s)));
        prop_assert!(lhs.minus(&rhs).is_zero(), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn bracket_is_bilinear_over_base(a in picks(), b in picks(), e in 0u16..3) {
        let r = chow();
        let psi = Poly::monomial(Monomial::from_exponents(vec![0, 0, e]));
        let (x, y) = (lie(r, &a, false), lie(r, &b, false));
        let lhs = x.scaled(&psi).bracket(&y).unwrap();
        let rhs = x.bracket(&y).unwrap().scaled(&psi);
        prop_assert!(lhs.minus(&rhs).is_zero());
    }

    #[test]
    fn normal_forms_multiply_associatively(w in prop::collection::vec(0usize..64, 3..=3), flavor in 0usize..4) {
        let r = chow();
        let flavor = [Flavor::Plain, Flavor::Row, Flavor::Col, Flavor::Heisenberg][flavor];
        let env = Env::new(r, flavor);
        let letters: Vec<EnvGen> = sweep_letters(&env, 2, 2);
        let el = |i: usize| EnvElem::letter(&env, letters[i % letters.len()].clone()).unwrap();
        let (x, y, z) = (el(w[0]), el(w[1]), el(w[2]));
        let left = x.mul(&y).unwrap().mul(&z).unwrap();
        let right = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn lie_commutator_matches_algebra_commutator(a in picks(), b in picks()) {
        let r = chow();
        let env = Env::new(r, Flavor::Plain);
        let (x, y) = (lie(r, &a, false), lie(r, &b, false));
        let via_algebra = EnvElem::from_lie(&env, &x).commutator(&EnvElem::from_lie(&env, &y)).unwrap();
        let via_bracket = EnvElem::from_lie(&env, &x.bracket(&y).unwrap());
        prop_assert_eq!(via_algebra, via_bracket);
    }

    #[test]
    fn realization_respects_brackets(a in picks(), b in picks(), v in prop::collection::vec(0usize..200, 1..3)) {
        let r = chow();
        let space = TautSpace::new(r);
        let basis: Vec<Monomial> = r.sweep_basis();
        let all: Vec<PGen> = basis_gens(r, 2, 2);
        let pick = |p: &[(usize, i64)]| {
            let mut x = LieElem::zero(r);
            for &(i, c) in p {
                x.add_term(all[i % all.len()].clone(), &IntPoly::from_int(c));
            }
            x
        };
        let (x, y) = (pick(&a), pick(&b));
        let monos = space.monomials(3, &basis);
        let mut p = TautPoly::zero();
        for i in v {
            let m: &TautMono = &monos[i % monos.len()];
            p.add_term(m.clone(), IntPoly::one());
        }
        let xy = space.apply_lie(&x, &space.apply_lie(&y, &p));
        let yx = space.apply_lie(&y, &space.apply_lie(&x, &p));
        let bracket = space.apply_lie(&x.bracket(&y).unwrap(), &p);
        prop_assert_eq!(xy.minus(&yx), bracket);
    }

    #[test]
    fn pontryagin_product_is_commutative(i in 0usize..200, j in 0usize..200) {
        let r = chow();
        let space = TautSpace::new(r);
        let monos = space.monomials(3, &r.sweep_basis());
        let (x, y) = (TautPoly::mono(monos[i % monos.len()].clone()), TautPoly::mono(monos[j % monos.len()].clone()));
        prop_assert_eq!(space.mul(&x, &y), space.mul(&y, &x));
    }

    #[test]
    fn fock_sl2_relations(m in 0u32..6, n in 0u32..6, g in 0u32..2) {
        let v = FockVector::<Int>::basis(g, m, n);
        let e = |x: &FockVector<Int>| fock_sl2(Sl2::E, x);
        let f = |x: &FockVector<Int>| fock_sl2(Sl2::F, x);
        let h = fock_sl2(Sl2::H, &v);
        prop_assert_eq!(e(&f(&v)).minus(&f(&e(&v))), h);
    }

    #[test]
    fn stirling_recurrence(m in 1u32..20, i in 1u32..20) {
        let rec = BigInt::from(i) * stirling2(m - 1, i) + stirling2(m - 1, i - 1);
        prop_assert_eq!(stirling2(m, i), rec);
    }

    #[test]
    fn pascal_rule(n in 1u64..40, k in 1i64..40) {
        prop_assert_eq!(binomial(n, k), binomial(n - 1, k) + binomial(n - 1, k - 1));
    }

    #[test]
    fn weighted_coeff_closed_form(i in 0u32..8, l in 0u32..8, n in 1u32..5) {
        prop_assume!(l <= i);
        let want = falling(i as u64, l as u64) * composition_coeff(i - l, i, n);
        prop_assert_eq!(weighted_coeff(i, l, n), want);
    }
}
