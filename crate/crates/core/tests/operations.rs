//! Worked examples for the public operations, each against a value computed
//! independently here (by hand or by brute force).

use num_bigint::BigInt;
use num_rational::BigRational;
use opcalc::combinat::{
    binomial, composition_coeff, compositions, factorial, nested_coeff, stirling2, weighted_coeff,
};
use opcalc::env::{Env, EnvElem, EnvGen, Flavor};
use opcalc::jaccalc::{gamma_ek, t_from_p, tau_pullback_closed, tau_pullback_operator, XAlgebra};
use opcalc::liealg::{LBasisElem, LieElem};
use opcalc::models::{
    fock_apply, fock_sl2, lefschetz_power, FockOp, FockVector, Sl2, TautPoly, TautSpace, ZeroCycleModel,
};
use opcalc::poly::Poly;
use opcalc::ring::{ChowOptions, Ring};
use opcalc::{Int, IntPoly, Rat, RatPoly};

fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(int(n), int(d))
}

// ---- combinatorial kernel

#[test]
fn stirling_small_values() {
    assert_eq!(stirling2(4, 2), int(7));
    assert_eq!(stirling2(0, 0), int(1));
    assert_eq!(stirling2(5, 0), int(0));
    // partitions of a 5-set into 3 blocks, counted directly
    let mut count = 0;
    for labels in 0..3u32.pow(5) {
        let digits: Vec<u32> = (0..5).map(|p| labels / 3u32.pow(p) % 3).collect();
        // canonical labelling: first occurrences in increasing order
        let mut next = 0;
        let mut ok = true;
        for &d in &digits {
            if d > next {
                ok = false;
                break;
            }
            if d == next {
                next += 1;
            }
        }
        if ok && next == 3 {
            count += 1;
        }
    }
    assert_eq!(stirling2(5, 3), int(count));
}

#[test]
fn composition_counts() {
    assert_eq!(composition_coeff(2, 2, 1), int(1));
    assert_eq!(composition_coeff(2, 3, 2), int(4));
    assert_eq!(composition_coeff(0, 0, 5), int(1));
    assert_eq!(composition_coeff(0, 1, 5), int(0));
    assert_eq!(compositions(4, 2).len(), 3);
    for c in compositions(4, 2) {
        assert_eq!(c.total(), 4);
        assert!(c.parts().iter().all(|&p| p > 0));
    }
}

#[test]
fn nested_coefficients() {
    assert_eq!(nested_coeff(&[3], 0), int(1));
    assert_eq!(nested_coeff(&[3], 2), int(0));
    assert_eq!(nested_coeff(&[1, 1], 1), int(1));
    for j in 2..5 {
        assert_eq!(nested_coeff(&[2, 1], j), int(0));
    }
}

#[test]
fn weighted_coefficients() {
    for i in 0..6 {
        for l in 0..=i {
            let want = if l == 0 { int(1) } else { int(0) };
            assert_eq!(weighted_coeff(i, l, 1), want, "b({i},{l};1)");
        }
    }
    // b(3,1;2) = 3!/2! * A_2(3,2) = 3 * 4
    assert_eq!(weighted_coeff(3, 1, 2), int(12));
    assert_eq!(weighted_coeff(2, 0, 2), factorial(2) / factorial(2) * composition_coeff(2, 2, 2));
    assert_eq!(binomial(5, 2), int(10));
}

// ---- rings

#[test]
fn cohomology_ring_tables() {
    let r = Ring::<Int>::curve_cohomology(2);
    let a0 = r.a0().clone();
    assert_eq!(r.pushforward(&a0).unwrap(), IntPoly::from_int(2));
    let a1 = r.gen("alpha1").unwrap();
    let b1 = r.gen("beta1").unwrap();
    assert_eq!(r.pairing(&a1, &b1).unwrap(), IntPoly::from_int(1));
    assert_eq!(r.mul(&a1, &a1), IntPoly::zero());
}

#[test]
fn chow_ring_rewriting() {
    let r = Ring::<Int>::curve_chow_symbolic(2);
    let (k, p0, psi) = (r.gen("K").unwrap(), r.gen("p0").unwrap(), r.gen("psi").unwrap());
    let sq = r.mul(&p0, &p0);
    assert_eq!(sq, r.mul(&psi, &p0).neg());
    assert_eq!(r.pushforward(&sq).unwrap(), psi.neg());
    assert_eq!(r.mul(&k.plus(&p0), &p0), IntPoly::zero());
}

// ---- brackets

#[test]
fn bracket_examples() {
    let r = Ring::<Int>::curve_cohomology(2);
    let one = Poly::one();
    let b = LieElem::p(&r, 2, 1, &one).bracket(&LieElem::p(&r, 0, 1, &one)).unwrap();
    assert_eq!(b.to_string(), LieElem::p(&r, 1, 1, &Poly::from_int(-2)).to_string());
    let pt = r.gen("pt").unwrap();
    let (rest, s) = LieElem::p(&r, 0, 0, &pt).centralize().unwrap();
    assert!(rest.is_zero());
    assert_eq!(s, IntPoly::one());
}

#[test]
fn heisenberg_pairing_after_centralizing() {
    let r = Ring::<Int>::curve_chow_symbolic(2);
    let (p0, psi) = (r.gen("p0").unwrap(), r.gen("psi").unwrap());
    let one = Poly::one();
    let b = LieElem::p(&r, 0, 1, &p0).bracket(&LieElem::p(&r, 1, 0, &one)).unwrap();
    let (rest, s) = b.centralize().unwrap();
    assert!(rest.is_zero());
    assert_eq!(s, IntPoly::one());
    let y = LieElem::p(&r, 1, 0, &p0).plus(&LieElem::p(&r, 1, 0, &one).scaled(&psi));
    let (rest, s) = LieElem::p(&r, 0, 1, &p0).bracket(&y).unwrap().centralize().unwrap();
    assert!(rest.is_zero());
    assert!(s.is_zero(), "{}", r.show(&s));
}

#[test]
fn l_basis_bracket_coefficient() {
    let r = Ring::<Rat>::curve_chow(ChowOptions { point_base: true, ..ChowOptions::new(2) });
    let one = Poly::one();
    let b = LBasisElem::l(&r, 1, 1, &one).bracket(&LBasisElem::l(&r, 2, 0, &one)).unwrap();
    let want = LBasisElem::l(&r, 2, 0, &RatPoly::from_int(2));
    assert_eq!(b, want);
}

// ---- divided powers

#[test]
fn tower_products_are_binomial() {
    let r = Ring::<Int>::curve_chow_symbolic(2);
    let env = Env::new(&r, Flavor::Row);
    for n in 1..=2 {
        for (d1, d2) in [(1, 1), (1, 2), (2, 3)] {
            let x = EnvElem::letter(&env, EnvGen::Row { n, d: d1 }).unwrap();
            let y = EnvElem::letter(&env, EnvGen::Row { n, d: d2 }).unwrap();
            let z = EnvElem::letter(&env, EnvGen::Row { n, d: d1 + d2 }).unwrap();
            let c = binomial((d1 + d2) as u64, d1 as i64);
            assert_eq!(x.mul(&y).unwrap(), z.scaled(&Poly::constant(c)));
        }
    }
}

// ---- Fock module

#[test]
fn fock_actions() {
    let v = FockVector::<Int>::tu(5, 3);
    let got = fock_apply(FockOp::Dt(2), &v);
    assert_eq!(got, FockVector::tu(3, 3).scaled(&int(10)));
    let h = fock_sl2(Sl2::H, &FockVector::<Int>::tu(2, 5));
    assert_eq!(h, FockVector::tu(2, 5).scaled(&int(-3)));
    assert_eq!(lefschetz_power::<Int>(0, 3).unwrap(), FockVector::tu(3, 0));
    assert!(lefschetz_power::<Int>(3, 1).is_err());
}

// ---- zero-cycle model

#[test]
fn witt_examples() {
    let z = ZeroCycleModel::new(3, 4);
    let x1 = z.x::<Int>(1);
    let lhs = z.delta(2, &z.delta(3, &x1)).minus(&z.delta(3, &z.delta(2, &x1)));
    assert_eq!(lhs, z.delta(4, &x1));
    // delta_1 is the grading
    let m = z.mul(&z.pow(&x1, 2), &z.x(2));
    assert_eq!(z.delta(1, &m), m.scaled(&int(3)));
    // P_{2,1}(x_p) = (x_p + t)^2 - t^2
    let t = z.t::<Int>();
    let want = z.pow(&x1.plus(&t), 2).minus(&z.pow(&t, 2));
    assert_eq!(z.p_m1(2, &x1), want);
    assert_eq!(z.p_m1(1, &t), t);
}

// ---- tautological algebra

#[test]
fn realization_examples() {
    let r = Ring::<Int>::curve_chow_symbolic(2);
    let space = TautSpace::new(&r);
    let (p0, psi) = (r.gen("p0").unwrap(), r.gen("psi").unwrap());
    let one = Poly::one();
    let u = space.symbol(1, &one);
    let t = space.symbol(1, &p0);
    // P_{m,0}(a) multiplies by x_m(a)
    let b = space.mul(&u, &t);
    let got = space.apply_lie(&LieElem::p(&r, 2, 0, &p0), &b);
    assert_eq!(got, space.mul(&space.symbol(2, &p0), &b));
    // P_{m,k}(a)(1) = 0 for k > 0
    assert!(space.apply_lie(&LieElem::p(&r, 3, 2, &one), &TautPoly::one()).is_zero());
    // P_{1,1}(p0) acts as t (d_u - psi d_t) on polynomials in t and u
    let v = space.mul(&space.mul(&u, &u), &t);
    let du_v = space.mul(&u, &t).scalar_mul(&int(2));
    let dt_v = space.mul(&u, &u);
    let want = space.mul(&t, &du_v.minus(&space.scale(&dt_v, &psi)));
    assert_eq!(space.apply_lie(&LieElem::p(&r, 1, 1, &p0), &v), want);
}

// ---- Jacobian calculus

#[test]
fn t_operator_low_cases() {
    let r = Ring::<Int>::curve_chow_symbolic(2);
    let k = r.gen("K").unwrap();
    let t = t_from_p(&r, 0, 2, &k).unwrap();
    assert_eq!(t.terms().len(), 1);
    assert_eq!(t.terms()[0].1.len(), 1);
    assert_eq!(t.terms()[0].1[0].to_string(), LieElem::p(&r, 2, 0, &k).to_string());
}

#[test]
fn x_algebra_sl2_bracket() {
    let r = Ring::<Rat>::curve_chow_symbolic(2);
    let alg = XAlgebra::new(&r, true).unwrap();
    let [e, f, h] = alg.sl2().unwrap();
    assert_eq!(alg.commutator(&e, &f), h);
    // h = -Xt(1,1; 1) + g
    let want = alg.scale(&alg.letter(1, 1, &Poly::one()), &RatPoly::from_int(-1)).plus(&alg.scalar(&RatPoly::from_int(2)));
    assert_eq!(h, want);
}

#[test]
fn pullback_routes_and_gamma() {
    let r = Ring::<Rat>::curve_chow_symbolic(2);
    for k in 0..=3 {
        assert_eq!(tau_pullback_closed(&r, k).unwrap(), tau_pullback_operator(&r, k).unwrap(), "k={k}");
    }
    // Gamma_{e,2} = x_2(1) - 2 x_1(1) x_1(p0), the pi_*(1) term being zero
    let rp = Ring::<Rat>::curve_chow(ChowOptions { point_base: true, ..ChowOptions::new(2) });
    let space = TautSpace::new(&rp);
    let p0 = rp.gen("p0").unwrap();
    let one = Poly::one();
    let want = space
        .symbol(2, &one)
        .minus(&space.mul(&space.symbol(1, &one), &space.symbol(1, &p0)).scalar_mul(&rat(2, 1)));
    assert_eq!(gamma_ek(&rp, 2).unwrap(), want);
}
