//! Jacobian-side calculus: the operators `T_k(m,a)` through their expansion
//! in `P`-operators, their commutation relations, the `m`-expansion into
//! `Xt_{n,k}(a)`, the `sl2` built from it, and pullbacks of the classes
//! `tau_k`.
//!
//! The coefficient ring must be even and carry a section class `p0`; the
//! symbolic Chow model is the intended one. Negative powers of `psi` are
//! zero.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::combinat::{binomial, factorial, stirling2};
use crate::env::{Env, EnvElem, EnvError};
use crate::liealg::{show_scaled, LieElem};
use crate::models::{ModelError, TautPoly, TautSpace};
use crate::poly::{Monomial, Poly};
use crate::report::{self, Report};
use crate::ring::Ring;
use crate::scalar::{Scalar, ScalarMode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JacError {
    #[error("the ring has no section class p0")]
    NoSection,
    #[error("this computation needs rational scalars")]
    NeedsRational,
    #[error("the ring has odd classes; only even coefficient rings are supported here")]
    OddRing,
    #[error("the identity is stated for k >= 2, got k = {0}")]
    KTooSmall(u32),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Env(#[from] EnvError),
}

fn require_even<S: Scalar>(ring: &Ring<S>) -> Result<(), JacError> {
    if ring.odd_flags().iter().any(|&o| o) {
        return Err(JacError::OddRing);
    }
    Ok(())
}

fn require_rational<S: Scalar>() -> Result<(), JacError> {
    if S::MODE != ScalarMode::Rational {
        return Err(JacError::NeedsRational);
    }
    Ok(())
}

/// `psi^i`, zero for negative `i`.
pub fn psi_power<S: Scalar>(ring: &Ring<S>, i: i64) -> Poly<S> {
    if i < 0 {
        Poly::zero()
    } else {
        ring.pow(ring.psi(), i as u32)
    }
}

fn int<S: Scalar>(n: BigInt) -> Poly<S> {
    Poly::constant(S::from_bigint(n))
}

/// A sum of products `c * x_1 x_2 .. x_r` of Lie elements; `x_r` acts first.
#[derive(Clone, Debug)]
pub struct TOperator<S: Scalar> {
    ring: Arc<Ring<S>>,
    terms: Vec<(Poly<S>, Vec<LieElem<S>>)>,
}

impl<S: Scalar> TOperator<S> {
    pub fn terms(&self) -> &[(Poly<S>, Vec<LieElem<S>>)] {
        &self.terms
    }

    pub fn apply(&self, space: &TautSpace<S>, p: &TautPoly<S>) -> TautPoly<S> {
        let mut out = TautPoly::zero();
        for (c, factors) in &self.terms {
            let v = space.apply_product(factors, p);
            out.add_assign(&space.scale(&v, c));
        }
        out
    }

    /// The same operator as an enveloping-algebra element in normal form.
    pub fn to_env(&self, env: &Arc<Env<S>>) -> Result<EnvElem<S>, EnvError> {
        let mut out = EnvElem::zero(env);
        for (c, factors) in &self.terms {
            let mut w = EnvElem::one(env);
            for x in factors {
                w = w.mul(&EnvElem::from_lie(env, x))?;
            }
            out = out.plus(&w.scaled(c))?;
        }
        Ok(out)
    }

    pub fn show(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (c, factors)) in self.terms.iter().enumerate() {
            let body = if factors.is_empty() {
                "1".to_string()
            } else {
                factors.iter().map(|x| format!("[{x}]")).collect::<Vec<_>>().join("*")
            };
            out.push_str(&show_scaled(&self.ring, c, &body, idx == 0));
        }
        out
    }
}

/// `T_k(m,a)` as a polynomial in `P`-operators:
/// `(-1)^k P_{m,0}(a p0) P_{1,1}(1)^k psi^{k-1}
///  + sum_{i+n+j=k} (-1)^{n+j} C(k,j) S(i+n,i) P_{i+m,i}(a K^n) P_{1,1}(p0+psi)^j`.
pub fn t_from_p<S: Scalar>(ring: &Arc<Ring<S>>, k: u32, m: u32, a: &Poly<S>) -> Result<TOperator<S>, JacError> {
    let p0 = ring.section().ok_or(JacError::NoSection)?.clone();
    let mut terms = Vec::new();
    let p11 = LieElem::p(ring, 1, 1, &Poly::one());
    let sigma = LieElem::p(ring, 1, 1, &p0).plus(&p11.scaled(ring.psi()));
    let corner = psi_power(ring, k as i64 - 1);
    if !corner.is_zero() {
        let c = corner.scaled(&S::from_i64(if k % 2 == 1 { -1 } else { 1 }));
        let lead = LieElem::p(ring, m, 0, &ring.mul(a, &p0));
        if !lead.is_zero() {
            let mut f = vec![lead];
            f.extend(std::iter::repeat_n(p11.clone(), k as usize));
            terms.push((c, f));
        }
    }
    for i in 0..=k {
        for n in 0..=(k - i) {
            let j = k - i - n;
            let s = stirling2(i + n, i);
            if s.is_zero() {
                continue;
            }
            let mut c = binomial(k as u64, j as i64) * s;
            if (n + j) % 2 == 1 {
                c = -c;
            }
            let class = ring.mul(a, &ring.pow(ring.a0(), n));
            let lead = LieElem::p(ring, i + m, i, &class);
            if lead.is_zero() {
                continue;
            }
            let mut f = vec![lead];
            f.extend(std::iter::repeat_n(sigma.clone(), j as usize));
            terms.push((int(c), f));
        }
    }
    Ok(TOperator { ring: Arc::clone(ring), terms })
}

/// One instance of the commutation relation between `T`-operators.
#[derive(Clone, Debug)]
pub struct TRelation<S: Scalar> {
    pub k: u32,
    pub k2: u32,
    pub m: u32,
    pub m2: u32,
    pub a: Poly<S>,
    pub a2: Poly<S>,
}

/// Both sides of the relation as sums `coeff * t^s A B` of `T`-operator
/// products (`B` acting first, `None` standing for the identity), followed by
/// translation by `s p0`, i.e. Pontryagin product with `t^s`.
type OpSum<S> = Vec<(Poly<S>, TOperator<S>, Option<TOperator<S>>, u32)>;

fn relation_sides<S: Scalar>(ring: &Arc<Ring<S>>, rel: &TRelation<S>) -> Result<(OpSum<S>, OpSum<S>), JacError> {
    let TRelation { k, k2, m, m2, a, a2 } = rel.clone();
    let p0 = ring.section().ok_or(JacError::NoSection)?.clone();
    let pw = |x: u32, e: u32| BigInt::from(x).pow(e);
    let mut lhs: OpSum<S> = Vec::new();
    for i in 0..=k.max(k2) {
        let ps = psi_power(ring, i as i64);
        if i <= k {
            let c = binomial(k as u64, i as i64) * pw(m2, i);
            if !c.is_zero() {
                lhs.push((ps.scaled(&S::from_bigint(c)), t_from_p(ring, k - i, m, &a)?, Some(t_from_p(ring, k2, m2, &a2)?), 0));
            }
        }
        if i <= k2 {
            let c = binomial(k2 as u64, i as i64) * pw(m, i);
            if !c.is_zero() {
                lhs.push((ps.scaled(&S::from_bigint(-c)), t_from_p(ring, k2 - i, m2, &a2)?, Some(t_from_p(ring, k, m, &a)?), 0));
            }
        }
    }
    let mut rhs: OpSum<S> = Vec::new();
    let twist = ring.a0().plus(&p0.scaled(&S::from_i64(2)));
    let aa = ring.mul(&a, &a2);
    for i in 1..=k.max(k2) {
        let mut c = binomial(k as u64, i as i64) * pw(m2, i) - binomial(k2 as u64, i as i64) * pw(m, i);
        if i % 2 == 0 {
            c = -c;
        }
        if c.is_zero() {
            continue;
        }
        let class = ring.mul(&aa, &ring.pow(&twist, i - 1));
        rhs.push((int(c), t_from_p(ring, k + k2 - i, m + m2, &class)?, None, 0));
    }
    let ra = ring.restrict(&a);
    let ra2 = ring.restrict(&a2);
    let c1 = ring.mul(&psi_power(ring, k2 as i64 - 1), &ra2).scaled(&S::from_bigint(pw(m, k2)));
    if !c1.is_zero() {
        rhs.push((c1, t_from_p(ring, k, m, &a)?, None, m2));
    }
    let c2 = ring.mul(&psi_power(ring, k as i64 - 1), &ra).scaled(&S::from_bigint(-pw(m2, k)));
    if !c2.is_zero() {
        rhs.push((c2, t_from_p(ring, k2, m2, &a2)?, None, m));
    }
    if k == 0 {
        for i in 1..=k2 {
            let c = ring
                .mul(&psi_power(ring, i as i64 - 1), &ra)
                .scaled(&S::from_bigint(binomial(k2 as u64, i as i64) * pw(m, i)));
            if !c.is_zero() {
                rhs.push((c, t_from_p(ring, k2 - i, m2, &a2)?, None, m));
            }
        }
    }
    if k2 == 0 {
        for i in 1..=k {
            let c = ring
                .mul(&psi_power(ring, i as i64 - 1), &ra2)
                .scaled(&S::from_bigint(-(binomial(k as u64, i as i64) * pw(m2, i))));
            if !c.is_zero() {
                rhs.push((c, t_from_p(ring, k - i, m, &a)?, None, m2));
            }
        }
    }
    Ok((lhs, rhs))
}

fn apply_sum<S: Scalar>(space: &TautSpace<S>, sum: &OpSum<S>, p: &TautPoly<S>) -> TautPoly<S> {
    let mut out = TautPoly::zero();
    for (c, x, y, shift) in sum {
        let inner = match y {
            Some(y) => y.apply(space, p),
            None => p.clone(),
        };
        let mut v = x.apply(space, &inner);
        if *shift > 0 {
            v = space.mul(&t_power(space, *shift), &v);
        }
        out.add_assign(&space.scale(&v, c));
    }
    out
}

/// Check one relation on every monomial of weight at most `max_weight`
/// over the ring's sweep basis.
pub fn relations_t_check<S: Scalar>(
    space: &Arc<TautSpace<S>>,
    rel: &TRelation<S>,
    max_weight: u32,
) -> Result<Report, JacError> {
    let ring = space.ring();
    require_even(ring)?;
    let (lhs, rhs) = relation_sides(ring, rel)?;
    let monos = space.monomials(max_weight, &ring.sweep_basis());
    let mut r = Report::new("t-relations").with_ring(ring.fingerprint());
    for b in &monos {
        let p = TautPoly::mono(b.clone());
        let l = apply_sum(space, &lhs, &p);
        let rr = apply_sum(space, &rhs, &p);
        r.check(
            "T-operator commutation relation",
            || {
                format!(
                    "k={} k'={} m={} m'={} a={} a'={} on {}",
                    rel.k,
                    rel.k2,
                    rel.m,
                    rel.m2,
                    ring.show(&rel.a),
                    ring.show(&rel.a2),
                    space.show_mono(b)
                )
            },
            l == rr,
            || space.show(&l),
            || space.show(&rr),
        );
    }
    Ok(r.finish())
}

/// All relations with `k + k' <= max_k_sum`, `m, m' <= max_m` and classes
/// `a, a'` among `1, p0, K`.
pub fn relations_t_sweep<S: Scalar>(
    space: &Arc<TautSpace<S>>,
    max_k_sum: u32,
    max_m: u32,
    max_weight: u32,
) -> Result<Report, JacError> {
    let ring = space.ring();
    require_even(ring)?;
    let p0 = ring.section().ok_or(JacError::NoSection)?.clone();
    let classes = [Poly::one(), p0, ring.a0().clone()];
    let mut rels = Vec::new();
    for k in 0..=max_k_sum {
        for k2 in 0..=(max_k_sum - k) {
            for m in 0..=max_m {
                for m2 in 0..=max_m {
                    for a in &classes {
                        for a2 in &classes {
                            rels.push(TRelation { k, k2, m, m2, a: a.clone(), a2: a2.clone() });
                        }
                    }
                }
            }
        }
    }
    let parts: Result<Vec<Report>, JacError> =
        rels.par_iter().map(|rel| relations_t_check(space, rel, max_weight)).collect();
    let mut r = report::merge("t-relations", Some(ring.fingerprint()), parts?);
    r.detail("relations", rels.len().to_string());
    r.detail("section_rule", space.has_section_rule().to_string());
    Ok(r)
}

/// The symbol `Xt_{n,k}(a)` for a reduced fibre monomial `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XLetter {
    pub n: u32,
    pub k: u32,
    pub a: Monomial,
}

/// Base-linear combinations of words in the `Xt`-symbols. Words are never
/// reordered; commutators come only from instances of the relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XElem<S: Scalar> {
    terms: BTreeMap<Vec<XLetter>, Poly<S>>,
}

impl<S: Scalar> XElem<S> {
    pub fn zero() -> Self {
        XElem { terms: BTreeMap::new() }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<XLetter>, Poly<S>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Vec<XLetter>, c: Poly<S>) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(e) => {
                e.add_assign(&c);
                if e.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.neg());
        }
        out
    }

    pub fn scalar_mul(&self, s: &S) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.scaled(s));
        }
        out
    }
}

/// The `Xt`-symbols over a ring, with the vanishing rules optionally on:
/// `Xt_{n,k} = 0` for `n > 2g - k`, `Xt_{0,1}(1) = Xt_{1,0}(1) = 0` and
/// `Xt_{0,0}(a) = pi_*(a)`.
pub struct XAlgebra<S: Scalar> {
    ring: Arc<Ring<S>>,
    genus: u32,
    rules: bool,
}

impl<S: Scalar> XAlgebra<S> {
    pub fn new(ring: &Arc<Ring<S>>, rules: bool) -> Result<Self, JacError> {
        require_even(ring)?;
        ring.section().ok_or(JacError::NoSection)?;
        Ok(XAlgebra { ring: Arc::clone(ring), genus: ring.genus().unwrap_or(0), rules })
    }

    pub fn ring(&self) -> &Arc<Ring<S>> {
        &self.ring
    }

    pub fn scalar(&self, c: &Poly<S>) -> XElem<S> {
        let mut out = XElem::zero();
        out.add_term(Vec::new(), c.clone());
        out
    }

    /// `Xt_{n,k}(a)`, zero for negative indices.
    pub fn letter(&self, n: i64, k: i64, a: &Poly<S>) -> XElem<S> {
        let mut out = XElem::zero();
        if n < 0 || k < 0 {
            return out;
        }
        let (n, k) = (n as u32, k as u32);
        if self.rules && n + k > 2 * self.genus {
            return out;
        }
        for (fiber, base) in self.ring.split(&self.ring.reduce(a)) {
            if self.rules {
                if n == 0 && k == 0 {
                    let v = self.ring.pushforward_fiber(&fiber).expect("pushforward of a fibre class");
                    out.add_term(Vec::new(), self.ring.mul(&v, &base));
                    continue;
                }
                if fiber.is_unit() && n + k == 1 {
                    continue;
                }
            }
            out.add_term(vec![XLetter { n, k, a: fiber }], base);
        }
        out
    }

    fn letter_elem(&self, l: &XLetter) -> XElem<S> {
        self.letter(l.n as i64, l.k as i64, &Poly::monomial(l.a.clone()))
    }

    pub fn scale(&self, x: &XElem<S>, c: &Poly<S>) -> XElem<S> {
        let mut out = XElem::zero();
        for (w, d) in &x.terms {
            out.add_term(w.clone(), self.ring.mul(c, d));
        }
        out
    }

    pub fn mul(&self, x: &XElem<S>, y: &XElem<S>) -> XElem<S> {
        let mut out = XElem::zero();
        for (w1, c1) in &x.terms {
            for (w2, c2) in &y.terms {
                let mut w = w1.clone();
                w.extend(w2.iter().cloned());
                out.add_term(w, self.ring.mul(c1, c2));
            }
        }
        out
    }

    /// Both sides of the relation between `Xt_{n,k}(a)` and `Xt_{n',k'}(a')`,
    /// exactly as displayed: `sum_i psi^i i! (...)` on the left, the bracket
    /// terms and the four Kronecker corrections on the right.
    pub fn relation(&self, n: u32, k: u32, a: &Poly<S>, n2: u32, k2: u32, a2: &Poly<S>) -> (XElem<S>, XElem<S>) {
        let ring = &self.ring;
        let (ni, ki, n2i, k2i) = (n as i64, k as i64, n2 as i64, k2 as i64);
        let c = |x: u32, y: u32| binomial(x as u64, y as i64);
        let mut lhs = XElem::zero();
        for i in 0..=k.max(k2) {
            let ps = psi_power(ring, i as i64).scaled(&S::from_bigint(factorial(i as u64)));
            let ii = i as i64;
            let c1 = c(k, i) * c(n2, i);
            if !c1.is_zero() {
                let w = self.mul(&self.letter(ni, ki - ii, a), &self.letter(n2i - ii, k2i, a2));
                lhs = lhs.plus(&self.scale(&w, &ps.scaled(&S::from_bigint(c1))));
            }
            let c2 = c(k2, i) * c(n, i);
            if !c2.is_zero() {
                let w = self.mul(&self.letter(n2i, k2i - ii, a2), &self.letter(ni - ii, ki, a));
                lhs = lhs.minus(&self.scale(&w, &ps.scaled(&S::from_bigint(c2))));
            }
        }
        let mut rhs = XElem::zero();
        let twist = ring.a0().plus(&ring.section().expect("checked").scaled(&S::from_i64(2)));
        let aa = ring.mul(a, a2);
        for i in 1..=k.max(k2) {
            let mut co = factorial(i as u64) * (c(k, i) * c(n2, i) - c(k2, i) * c(n, i));
            if i % 2 == 0 {
                co = -co;
            }
            if co.is_zero() {
                continue;
            }
            let class = ring.mul(&aa, &ring.pow(&twist, i - 1));
            let ii = i as i64;
            rhs = rhs.plus(&self.letter(ni + n2i - ii, ki + k2i - ii, &class).scalar_mul(&S::from_bigint(co)));
        }
        let ra = ring.restrict(a);
        let ra2 = ring.restrict(a2);
        let corr = |delta: bool, pulled: &Poly<S>, e: i64, top: u32, bin_n: u32, bin_k: u32, x: XElem<S>| {
            if !delta {
                return XElem::zero();
            }
            let co = factorial(top as u64) * c(bin_n, bin_k);
            let s = ring.mul(pulled, &psi_power(ring, e)).scaled(&S::from_bigint(co));
            self.scale(&x, &s)
        };
        rhs = rhs.plus(&corr(n2 == 0, &ra2, k2i - 1, k2, n, k2, self.letter(ni - k2i, ki, a)));
        rhs = rhs.minus(&corr(n == 0, &ra, ki - 1, k, n2, k, self.letter(n2i - ki, k2i, a2)));
        rhs = rhs.plus(&corr(k == 0, &ra, ni - 1, n, k2, n, self.letter(n2i, k2i - ni, a2)));
        rhs = rhs.minus(&corr(k2 == 0, &ra2, n2i - 1, n2, k, n2, self.letter(ni, ki - n2i, a)));
        (lhs, rhs)
    }

    /// `[Xt_{n,k}(a), Xt_{n',k'}(a')]` read off from the relation: the right
    /// side minus the `i >= 1` terms of the left side.
    pub fn letter_commutator(&self, x: &XLetter, y: &XLetter) -> XElem<S> {
        let (a, a2) = (Poly::monomial(x.a.clone()), Poly::monomial(y.a.clone()));
        let (lhs, rhs) = self.relation(x.n, x.k, &a, y.n, y.k, &a2);
        let plain = self.mul(&self.letter_elem(x), &self.letter_elem(y)).minus(&self.mul(&self.letter_elem(y), &self.letter_elem(x)));
        rhs.minus(&lhs.minus(&plain))
    }

    /// Commutator of arbitrary elements by the Leibniz rule down to letters;
    /// scalars are central.
    pub fn commutator(&self, x: &XElem<S>, y: &XElem<S>) -> XElem<S> {
        let mut out = XElem::zero();
        for (w1, c1) in &x.terms {
            for (w2, c2) in &y.terms {
                let c = self.ring.mul(c1, c2);
                out = out.plus(&self.scale(&self.word_commutator(w1, w2), &c));
            }
        }
        out
    }

    fn word(&self, w: &[XLetter]) -> XElem<S> {
        let mut out = XElem::zero();
        out.add_term(w.to_vec(), Poly::one());
        out
    }

    fn word_commutator(&self, w1: &[XLetter], w2: &[XLetter]) -> XElem<S> {
        if w1.is_empty() || w2.is_empty() {
            return XElem::zero();
        }
        if w1.len() > 1 {
            // [AB, C] = A[B, C] + [A, C]B
            let (a, b) = w1.split_at(1);
            let left = self.mul(&self.word(a), &self.word_commutator(b, w2));
            let right = self.mul(&self.word_commutator(a, w2), &self.word(b));
            return left.plus(&right);
        }
        if w2.len() > 1 {
            // [A, BC] = [A, B]C + B[A, C]
            let (b, c) = w2.split_at(1);
            let left = self.mul(&self.word_commutator(w1, b), &self.word(c));
            let right = self.mul(&self.word(b), &self.word_commutator(w1, c));
            return left.plus(&right);
        }
        self.letter_commutator(&w1[0], &w2[0])
    }

    /// `X_{n,k}(a) = sum_i (-1)^i i! C(n,i) C(k,i) Xt_{n-i,k-i}(a eta^i)`.
    pub fn x_basis(&self, n: u32, k: u32, a: &Poly<S>) -> Result<XElem<S>, JacError> {
        let eta = self.ring.eta().ok_or(JacError::NeedsRational)?;
        let mut out = XElem::zero();
        for i in 0..=n.min(k) {
            let mut c = factorial(i as u64) * binomial(n as u64, i as i64) * binomial(k as u64, i as i64);
            if i % 2 == 1 {
                c = -c;
            }
            let class = self.ring.mul(a, &self.ring.pow(&eta, i));
            let ii = i as i64;
            out = out.plus(&self.letter(n as i64 - ii, k as i64 - ii, &class).scalar_mul(&S::from_bigint(c)));
        }
        Ok(out)
    }

    /// Coordinates of a linear element in the `X`-basis: letters with their
    /// coefficients, scalars under the empty key. `None` if `x` has words of
    /// length above one.
    pub fn x_coordinates(&self, x: &XElem<S>) -> Result<Option<BTreeMap<Option<XLetter>, Poly<S>>>, JacError> {
        if x.terms.keys().any(|w| w.len() > 1) {
            return Ok(None);
        }
        let mut rem = x.clone();
        let mut coords: BTreeMap<Option<XLetter>, Poly<S>> = BTreeMap::new();
        loop {
            let top = rem
                .terms
                .iter()
                .filter(|(w, _)| !w.is_empty())
                .max_by_key(|(w, _)| (w[0].n + w[0].k, w[0].clone()))
                .map(|(w, c)| (w[0].clone(), c.clone()));
            let Some((l, c)) = top else { break };
            let xl = self.x_basis(l.n, l.k, &Poly::monomial(l.a.clone()))?;
            rem = rem.minus(&self.scale(&xl, &c));
            coords.entry(Some(l)).or_default().add_assign(&c);
        }
        if let Some(s) = rem.terms.get(&Vec::new()) {
            coords.entry(None).or_default().add_assign(s);
        }
        coords.retain(|_, c| !c.is_zero());
        Ok(Some(coords))
    }

    /// `X_{n,k}(a) -> (-1)^k X_{k,n}(a)` on coordinates; scalars fixed.
    pub fn fourier(&self, coords: &BTreeMap<Option<XLetter>, Poly<S>>) -> BTreeMap<Option<XLetter>, Poly<S>> {
        coords
            .iter()
            .map(|(l, c)| match l {
                None => (None, c.clone()),
                Some(l) => {
                    let c = if l.k % 2 == 1 { c.neg() } else { c.clone() };
                    (Some(XLetter { n: l.k, k: l.n, a: l.a.clone() }), c)
                }
            })
            .collect()
    }

    /// Element with the given `X`-coordinates.
    pub fn from_x_coordinates(&self, coords: &BTreeMap<Option<XLetter>, Poly<S>>) -> Result<XElem<S>, JacError> {
        let mut out = XElem::zero();
        for (l, c) in coords {
            match l {
                None => out = out.plus(&self.scalar(c)),
                Some(l) => out = out.plus(&self.scale(&self.x_basis(l.n, l.k, &Poly::monomial(l.a.clone()))?, c)),
            }
        }
        Ok(out)
    }

    /// `e = Xt_{0,2}(1)/2`, `f = -Xt_{2,0}(1)/2`, `h = -Xt_{1,1}(1) + g`.
    pub fn sl2(&self) -> Result<[XElem<S>; 3], JacError> {
        let half = S::from_ratio(&BigInt::one(), &BigInt::from(2)).ok_or(JacError::NeedsRational)?;
        let one = Poly::one();
        let e = self.letter(0, 2, &one).scalar_mul(&half);
        let f = self.letter(2, 0, &one).scalar_mul(&-half);
        let h = self.letter(1, 1, &one).scalar_mul(&-S::one()).plus(&self.scalar(&Poly::from_int(self.genus as i64)));
        Ok([e, f, h])
    }

    pub fn show(&self, x: &XElem<S>) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (w, c)) in x.terms.iter().enumerate() {
            let body = if w.is_empty() {
                "1".to_string()
            } else {
                w.iter()
                    .map(|l| format!("Xt({},{}; {})", l.n, l.k, self.ring.show_monomial(&l.a)))
                    .collect::<Vec<_>>()
                    .join("*")
            };
            out.push_str(&show_scaled(&self.ring, c, &body, idx == 0));
        }
        out
    }

    pub fn show_coordinates(&self, coords: &BTreeMap<Option<XLetter>, Poly<S>>) -> String {
        if coords.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (l, c)) in coords.iter().enumerate() {
            let body = match l {
                None => "1".to_string(),
                Some(l) => format!("X({},{}; {})", l.n, l.k, self.ring.show_monomial(&l.a)),
            };
            out.push_str(&show_scaled(&self.ring, c, &body, idx == 0));
        }
        out
    }
}

/// Formal expansions in `m, m'` with `Xt`-word coefficients, truncated in
/// both degrees.
struct MPoly<S: Scalar> {
    terms: BTreeMap<(u32, u32), XElem<S>>,
    max: u32,
}

impl<S: Scalar> MPoly<S> {
    fn zero(max: u32) -> Self {
        MPoly { terms: BTreeMap::new(), max }
    }

    fn add(&mut self, deg: (u32, u32), x: &XElem<S>) {
        if deg.0 > self.max || deg.1 > self.max || x.is_zero() {
            return;
        }
        let e = self.terms.entry(deg).or_insert_with(XElem::zero);
        *e = e.plus(x);
    }

    fn add_scaled(&mut self, alg: &XAlgebra<S>, other: &MPoly<S>, c: &Poly<S>, shift: (u32, u32)) {
        for (d, x) in &other.terms {
            self.add((d.0 + shift.0, d.1 + shift.1), &alg.scale(x, c));
        }
    }

    fn mul(&self, alg: &XAlgebra<S>, other: &MPoly<S>) -> MPoly<S> {
        let mut out = MPoly::zero(self.max);
        for (d1, x) in &self.terms {
            for (d2, y) in &other.terms {
                out.add((d1.0 + d2.0, d1.1 + d2.1), &alg.mul(x, y));
            }
        }
        out
    }

    fn coeff(&self, d: (u32, u32)) -> XElem<S> {
        self.terms.get(&d).cloned().unwrap_or_else(XElem::zero)
    }
}

/// `T_k(m,a) = sum_n m^n/n! Xt_{n,k}(a)` in the first (`which = 0`), second
/// (`1`) or summed (`2`, i.e. `m + m'`) variable.
fn t_expansion<S: Scalar>(alg: &XAlgebra<S>, k: u32, a: &Poly<S>, which: u8, max: u32) -> MPoly<S> {
    let mut out = MPoly::zero(max);
    for n in 0..=2 * max {
        let x = alg.letter(n as i64, k as i64, a);
        if x.is_zero() {
            continue;
        }
        match which {
            0 | 1 => {
                let c = S::from_ratio(&BigInt::one(), &factorial(n as u64)).expect("rational");
                let d = if which == 0 { (n, 0) } else { (0, n) };
                out.add(d, &x.scalar_mul(&c));
            }
            _ => {
                for p in 0..=n {
                    let c = S::from_ratio(&BigInt::one(), &(factorial(p as u64) * factorial((n - p) as u64)))
                        .expect("rational");
                    out.add((p, n - p), &x.scalar_mul(&c));
                }
            }
        }
    }
    out
}

/// Substitute the `m`-expansion of `T` into both sides of the `T`-relation
/// and compare the `m^n m'^{n'}` coefficients, times `n! n'!`, with the two
/// sides of the `Xt`-relation, for all `n, n' <= max_n`.
pub fn x_rel_equiv_check<S: Scalar>(
    ring: &Arc<Ring<S>>,
    k: u32,
    k2: u32,
    a: &Poly<S>,
    a2: &Poly<S>,
    max_n: u32,
) -> Result<Report, JacError> {
    require_rational::<S>()?;
    let alg = XAlgebra::new(ring, false)?;
    let max = max_n;
    let t = |kk: u32, c: &Poly<S>, which: u8| t_expansion(&alg, kk, c, which, max);
    let mono = |d: (u32, u32), c: BigInt| {
        let mut p = MPoly::zero(max);
        p.add(d, &alg.scalar(&int(c)));
        p
    };
    let mut lhs = MPoly::zero(max);
    for i in 0..=k.max(k2) {
        let ps = psi_power(ring, i as i64);
        if i <= k {
            let prod = t(k - i, a, 0).mul(&alg, &t(k2, a2, 1));
            let c = ps.scaled(&S::from_bigint(binomial(k as u64, i as i64)));
            lhs.add_scaled(&alg, &prod, &c, (0, i));
        }
        if i <= k2 {
            let prod = t(k2 - i, a2, 1).mul(&alg, &t(k, a, 0));
            let c = ps.scaled(&S::from_bigint(-binomial(k2 as u64, i as i64)));
            lhs.add_scaled(&alg, &prod, &c, (i, 0));
        }
    }
    let mut rhs = MPoly::zero(max);
    let twist = ring.a0().plus(&ring.section().expect("checked").scaled(&S::from_i64(2)));
    let aa = ring.mul(a, a2);
    for i in 1..=k.max(k2) {
        let sgn = if i % 2 == 0 { -BigInt::one() } else { BigInt::one() };
        let class = ring.mul(&aa, &ring.pow(&twist, i - 1));
        let tt = t(k + k2 - i, &class, 2);
        let factor = mono((0, i), binomial(k as u64, i as i64) * &sgn)
            .terms
            .into_iter()
            .chain(mono((i, 0), -binomial(k2 as u64, i as i64) * &sgn).terms)
            .fold(MPoly::zero(max), |mut acc, (d, x)| {
                acc.add(d, &x);
                acc
            });
        let prod = factor.mul(&alg, &tt);
        rhs.add_scaled(&alg, &prod, &Poly::one(), (0, 0));
    }
    let ra = ring.restrict(a);
    let ra2 = ring.restrict(a2);
    rhs.add_scaled(&alg, &t(k, a, 0), &ring.mul(&psi_power(ring, k2 as i64 - 1), &ra2), (k2, 0));
    rhs.add_scaled(&alg, &t(k2, a2, 1), &ring.mul(&psi_power(ring, k as i64 - 1), &ra).neg(), (0, k));
    if k == 0 {
        for i in 1..=k2 {
            let c = ring
                .mul(&psi_power(ring, i as i64 - 1), &ra)
                .scaled(&S::from_bigint(binomial(k2 as u64, i as i64)));
            rhs.add_scaled(&alg, &t(k2 - i, a2, 1), &c, (i, 0));
        }
    }
    if k2 == 0 {
        for i in 1..=k {
            let c = ring
                .mul(&psi_power(ring, i as i64 - 1), &ra2)
                .scaled(&S::from_bigint(-binomial(k as u64, i as i64)));
            rhs.add_scaled(&alg, &t(k - i, a, 0), &c, (0, i));
        }
    }
    let mut r = Report::new("x-equivalence").with_ring(ring.fingerprint());
    for n in 0..=max_n {
        for n2 in 0..=max_n {
            let scale = S::from_bigint(factorial(n as u64) * factorial(n2 as u64));
            let got_l = lhs.coeff((n, n2)).scalar_mul(&scale);
            let got_r = rhs.coeff((n, n2)).scalar_mul(&scale);
            let (want_l, want_r) = alg.relation(n, k, a, n2, k2, a2);
            let params = || {
                format!("k={k} k'={k2} n={n} n'={n2} a={} a'={}", ring.show(a), ring.show(a2))
            };
            r.check("coefficient extraction, left side", params, got_l == want_l, || alg.show(&got_l), || alg.show(&want_l));
            r.check("coefficient extraction, right side", params, got_r == want_r, || alg.show(&got_r), || alg.show(&want_r));
        }
    }
    Ok(r.finish())
}

/// All `k, k' <= max_k` and classes `a, a'` among `1, p0, K`.
pub fn x_rel_equiv_sweep<S: Scalar>(ring: &Arc<Ring<S>>, max_k: u32, max_n: u32) -> Result<Report, JacError> {
    let p0 = ring.section().ok_or(JacError::NoSection)?.clone();
    let classes = [Poly::one(), p0, ring.a0().clone()];
    let mut cases = Vec::new();
    for k in 0..=max_k {
        for k2 in 0..=max_k {
            for a in &classes {
                for a2 in &classes {
                    cases.push((k, k2, a.clone(), a2.clone()));
                }
            }
        }
    }
    let parts: Result<Vec<Report>, JacError> =
        cases.par_iter().map(|(k, k2, a, a2)| x_rel_equiv_check(ring, *k, *k2, a, a2, max_n)).collect();
    Ok(report::merge("x-equivalence", Some(ring.fingerprint()), parts?))
}

/// The `sl2` relations and the ladder formulas for `[e, Xt]`, `[f, Xt]`,
/// all brackets obtained from the relations with the vanishing rules on.
/// Ladders are checked for `n + k <= min(max_total, 2g)`, where all symbols
/// involved lie under the degree bound.
pub fn sl2_verify<S: Scalar>(ring: &Arc<Ring<S>>, max_total: u32) -> Result<Report, JacError> {
    require_rational::<S>()?;
    let alg = XAlgebra::new(ring, true)?;
    let eta = ring.eta().ok_or(JacError::NeedsRational)?;
    let g = alg.genus;
    let [e, f, h] = alg.sl2()?;
    let mut r = Report::new("x-sl2").with_ring(ring.fingerprint());
    let two = S::from_i64(2);
    let pairs = [
        ("[e, f] = h", alg.commutator(&e, &f), h.clone()),
        ("[h, e] = 2e", alg.commutator(&h, &e), e.scalar_mul(&two)),
        ("[h, f] = -2f", alg.commutator(&h, &f), f.scalar_mul(&-two.clone())),
    ];
    for (id, got, want) in &pairs {
        r.check(id, || format!("g={g}"), got == want, || alg.show(got), || alg.show(want));
    }
    let bound = max_total.min(2 * g);
    let classes = ring.fiber_basis(2);
    for a in &classes {
        let ap = Poly::monomial(a.clone());
        let aeta = ring.mul(&ap, &eta);
        for n in 0..=bound {
            for k in 0..=(bound - n) {
                let (ni, ki) = (n as i64, k as i64);
                let x = alg.letter(ni, ki, &ap);
                let got = alg.commutator(&e, &x);
                let want = alg
                    .letter(ni - 1, ki + 1, &ap)
                    .scalar_mul(&S::from_i64(ni))
                    .minus(&alg.letter(ni - 2, ki, &aeta).scalar_mul(&S::from_i64(ni * (ni - 1))));
                let params = || format!("g={g} n={n} k={k} a={}", ring.show_monomial(a));
                r.check("[e, Xt_{n,k}(a)] ladder", params, got == want, || alg.show(&got), || alg.show(&want));
                let got = alg.commutator(&f, &x);
                let want = alg
                    .letter(ni + 1, ki - 1, &ap)
                    .scalar_mul(&S::from_i64(ki))
                    .minus(&alg.letter(ni, ki - 2, &aeta).scalar_mul(&S::from_i64(ki * (ki - 1))));
                r.check("[f, Xt_{n,k}(a)] ladder", params, got == want, || alg.show(&got), || alg.show(&want));
            }
        }
    }
    Ok(r.finish())
}

fn ad_power<S: Scalar>(alg: &XAlgebra<S>, x: &XElem<S>, y: &XElem<S>, times: u32) -> XElem<S> {
    (0..times).fold(y.clone(), |acc, _| alg.commutator(x, &acc))
}

/// The `X`-basis: iterated brackets of `e` and `f` with the extreme symbols,
/// the three ladder relations, and consistency of the involution
/// `X_{n,k} -> (-1)^k X_{k,n}`, `e -> -f`, `f -> -e` with them: it carries
/// every `e`-ladder identity to the corresponding `f`-ladder identity.
pub fn fourier_involution_check<S: Scalar>(ring: &Arc<Ring<S>>, max_total: u32) -> Result<Report, JacError> {
    require_rational::<S>()?;
    let alg = XAlgebra::new(ring, true)?;
    let g = alg.genus;
    let [e, f, h] = alg.sl2()?;
    let neg_f = f.scalar_mul(&-S::one());
    let mut r = Report::new("x-fourier").with_ring(ring.fingerprint());
    let bound = max_total.min(2 * g);
    let ratio = |num: BigInt, den: BigInt| S::from_ratio(&num, &den).expect("rational");
    for a in ring.fiber_basis(2) {
        let ap = Poly::monomial(a.clone());
        for total in 0..=bound {
            for n in 0..=total {
                let k = total - n;
                let params = || format!("g={g} n={n} k={k} a={}", ring.show_monomial(&a));
                let xnk = alg.x_basis(n, k, &ap)?;
                // ad(f)^k Xt_{0,n+k}/(n+k)! = X_{k,n}/n!, ad(e)^k Xt_{n+k,0}/(n+k)! = X_{n,k}/n!
                let c = ratio(factorial(n as u64), factorial(total as u64));
                let got = ad_power(&alg, &f, &alg.letter(0, total as i64, &ap), k).scalar_mul(&c);
                let want = alg.x_basis(k, n, &ap)?;
                r.check("ad(f)^k descent", params, got == want, || alg.show(&got), || alg.show(&want));
                let got = ad_power(&alg, &e, &alg.letter(total as i64, 0, &ap), k).scalar_mul(&c);
                r.check("ad(e)^k descent", params, got == xnk, || alg.show(&got), || alg.show(&xnk));
                // ladders
                let lower = |nn: i64, kk: i64| -> Result<XElem<S>, JacError> {
                    if nn < 0 || kk < 0 {
                        Ok(XElem::zero())
                    } else {
                        alg.x_basis(nn as u32, kk as u32, &ap)
                    }
                };
                let (ni, ki) = (n as i64, k as i64);
                let got_e = alg.commutator(&e, &xnk);
                let want_e = lower(ni - 1, ki + 1)?.scalar_mul(&S::from_i64(ni));
                r.check("[e, X_{n,k}] = n X_{n-1,k+1}", params, got_e == want_e, || alg.show(&got_e), || alg.show(&want_e));
                let got_f = alg.commutator(&f, &xnk);
                let want_f = lower(ni + 1, ki - 1)?.scalar_mul(&S::from_i64(ki));
                r.check("[f, X_{n,k}] = k X_{n+1,k-1}", params, got_f == want_f, || alg.show(&got_f), || alg.show(&want_f));
                let got_h = alg.commutator(&h, &xnk);
                let want_h = xnk.scalar_mul(&S::from_i64(ki - ni));
                r.check("[h, X_{n,k}] = (k-n) X_{n,k}", params, got_h == want_h, || alg.show(&got_h), || alg.show(&want_h));
                // involution: phi([e, X_{n,k}]) = [-f, phi(X_{n,k})]
                let coords = alg.x_coordinates(&xnk)?.expect("linear");
                let image = alg.from_x_coordinates(&alg.fourier(&coords))?;
                let twice = alg.fourier(&alg.fourier(&coords));
                let sign = S::from_i64(if (n + k) % 2 == 1 { -1 } else { 1 });
                let want_twice: BTreeMap<_, _> = coords.iter().map(|(l, c)| (l.clone(), c.scaled(&sign))).collect();
                r.check(
                    "involution squares to (-1)^(n+k)",
                    params,
                    twice == want_twice,
                    || alg.show_coordinates(&twice),
                    || alg.show_coordinates(&want_twice),
                );
                let lhs = alg.x_coordinates(&got_e)?.map(|c| alg.fourier(&c));
                let rhs = alg.x_coordinates(&alg.commutator(&neg_f, &image))?;
                let show = |c: &Option<BTreeMap<Option<XLetter>, Poly<S>>>| match c {
                    Some(c) => alg.show_coordinates(c),
                    None => "nonlinear".to_string(),
                };
                r.check("involution maps the e-ladder to the f-ladder", params, lhs.is_some() && lhs == rhs, || show(&lhs), || show(&rhs));
            }
        }
    }
    Ok(r.finish())
}

/// The tautological space used for pullbacks: rational scalars, the section
/// rule on.
fn pullback_space<S: Scalar>(ring: &Arc<Ring<S>>) -> Result<Arc<TautSpace<S>>, JacError> {
    require_rational::<S>()?;
    require_even(ring)?;
    Ok(TautSpace::with_section_rule(ring)?)
}

fn rat<S: Scalar>(num: BigInt, den: BigInt) -> S {
    S::from_ratio(&num, &den).expect("rational scalars")
}

fn t_power<S: Scalar>(space: &TautSpace<S>, m: u32) -> TautPoly<S> {
    let t = space.t_sym().expect("section");
    space.sym_power(t, m).scalar_mul(&S::from_bigint(factorial(m as u64)))
}

/// Pullback of `tau_k` to the symmetric powers by the closed formula.
pub fn tau_pullback_closed<S: Scalar>(ring: &Arc<Ring<S>>, k: u32) -> Result<TautPoly<S>, JacError> {
    let space = pullback_space(ring)?;
    let nvar = ring.formal_n();
    let npow = |l: u32| ring.pow(&nvar, l);
    let kf = factorial(k as u64);
    let sgn = |e: u32| if e % 2 == 1 { -BigInt::one() } else { BigInt::one() };
    let mut out = TautPoly::zero();
    let lead = ring.mul(&npow(k), &psi_power(ring, k as i64 - 1)).scaled(&S::from_bigint(sgn(k)));
    out.add_assign(&space.scale(&space.fundamental(0)?, &lead));
    for parts in crate::combinat::weak_compositions(k, 5) {
        let [i, n, m, p, l] = [parts[0], parts[1], parts[2], parts[3], parts[4]];
        let s = stirling2(i + n, i) * stirling2(m + p, m);
        if s.is_zero() {
            continue;
        }
        let den = factorial((i + n) as u64) * factorial((m + p) as u64) * factorial(l as u64);
        let c: S = rat(sgn(n + l + m) * &kf * s, den);
        let base = ring.mul(&npow(l), &psi_power(ring, (p + l) as i64)).scaled(&c);
        if base.is_zero() {
            continue;
        }
        let sym = space.symbol(i, &ring.pow(ring.a0(), n));
        let body = space.mul(&space.mul(&sym, &t_power(&space, m)), &space.fundamental(-((m + i) as i64))?);
        out.add_assign(&space.scale(&body, &base));
    }
    for parts in crate::combinat::weak_compositions(k, 6) {
        let [i, n, m, p, l, q] = [parts[0], parts[1], parts[2], parts[3], parts[4], parts[5]];
        if q == 0 {
            continue;
        }
        let s = stirling2(i + n + q, i + q) * stirling2(m + p, m);
        let b = binomial((i + q) as u64, i as i64) * binomial(m as u64, q as i64);
        if s.is_zero() || b.is_zero() {
            continue;
        }
        let den = factorial((i + n + q) as u64) * factorial((m + p) as u64) * factorial(l as u64);
        let c: S = rat(-(sgn(n + l + m + q) * &kf * factorial(q as u64) * b * s), den);
        let base = ring.mul(&npow(l), &psi_power(ring, (p + l + n + q) as i64 - 1)).scaled(&c);
        if base.is_zero() {
            continue;
        }
        let body = space.mul(&t_power(&space, m + i), &space.fundamental(-((m + i) as i64))?);
        out.add_assign(&space.scale(&body, &base));
    }
    Ok(out)
}

/// Pullback of `tau_k` computed as `T_k(0,1)` applied to `u^[N]`.
pub fn tau_pullback_operator<S: Scalar>(ring: &Arc<Ring<S>>, k: u32) -> Result<TautPoly<S>, JacError> {
    let space = pullback_space(ring)?;
    let op = t_from_p(ring, k, 0, &Poly::one())?;
    Ok(op.apply(&space, &space.fundamental(0)?))
}

/// Both routes agree; the report carries both expansions.
pub fn tau_pullback_check<S: Scalar>(ring: &Arc<Ring<S>>, k: u32) -> Result<Report, JacError> {
    let space = pullback_space(ring)?;
    let a = tau_pullback_closed(ring, k)?;
    let b = tau_pullback_operator(ring, k)?;
    let mut r = Report::new("tau-pullback").with_ring(ring.fingerprint());
    r.check(
        "closed formula = operator application",
        || format!("k={k} g={}", ring.genus().unwrap_or(0)),
        a == b,
        || space.show(&a),
        || space.show(&b),
    );
    r.detail(&format!("closed_k{k}"), space.show(&a));
    r.detail(&format!("operator_k{k}"), space.show(&b));
    Ok(r.finish())
}

/// `Gamma_{e,k} = sum_{i+m=k} (-1)^m C(k,m) x_i(1) t^m`, with `x_0(1) = pi_*(1)`.
pub fn gamma_ek<S: Scalar>(ring: &Arc<Ring<S>>, k: u32) -> Result<TautPoly<S>, JacError> {
    let space = pullback_space(ring)?;
    let mut out = TautPoly::zero();
    for m in 0..=k {
        let mut c = binomial(k as u64, m as i64);
        if m % 2 == 1 {
            c = -c;
        }
        let term = space.mul(&space.symbol(k - m, &Poly::one()), &t_power(&space, m));
        out.add_scalar_multiple(&term, &S::from_bigint(c));
    }
    Ok(out)
}

/// The modified-diagonal form of the pullback over a point base. With
/// `K = (2g-2) p0` imposed the right side is
/// `Gamma_{e,k} u^[N-k] - 2g delta_{k,2} t u^[N-1]`; with `K` free it is
/// `Gamma_{e,k} u^[N-k] - sum_{i+m=k-1} (-1)^m C(k,m) C(i+1,2) x_i(K) t^m u^[N-k+1]
/// - 2 delta_{k,2} t u^[N-1]`.
pub fn gs_identity_check<S: Scalar>(ring: &Arc<Ring<S>>, k: u32) -> Result<Report, JacError> {
    if k < 2 {
        return Err(JacError::KTooSmall(k));
    }
    let space = pullback_space(ring)?;
    let g = ring.genus().unwrap_or(0);
    let p0 = ring.section().ok_or(JacError::NoSection)?;
    let canonical = ring.reduce(ring.a0()) == p0.scaled(&S::from_i64(2 * g as i64 - 2));
    let lhs = tau_pullback_operator(ring, k)?;
    let mut rhs = space.mul(&gamma_ek(ring, k)?, &space.fundamental(-(k as i64))?);
    if !canonical {
        for i in 0..k {
            let m = k - 1 - i;
            let mut c = binomial(k as u64, m as i64) * binomial((i + 1) as u64, 2);
            if m % 2 == 1 {
                c = -c;
            }
            if c.is_zero() {
                continue;
            }
            let term = space.mul(
                &space.mul(&space.symbol(i, ring.a0()), &t_power(&space, m)),
                &space.fundamental(1 - k as i64)?,
            );
            rhs.add_scalar_multiple(&term, &S::from_bigint(-c));
        }
    }
    if k == 2 {
        let c = if canonical { 2 * g as i64 } else { 2 };
        let term = space.mul(&t_power(&space, 1), &space.fundamental(-1)?);
        rhs.add_scalar_multiple(&term, &S::from_i64(-c));
    }
    let mut r = Report::new("gross-schoen").with_ring(ring.fingerprint());
    r.check(
        if canonical { "pullback = Gamma_{e,k} - 2g delta_{k,2} term" } else { "pullback = Gamma_{e,k} + K corrections" },
        || format!("k={k} g={g}"),
        lhs == rhs,
        || space.show(&lhs),
        || space.show(&rhs),
    );
    Ok(r.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::TautSpace;
    use crate::ring::ChowOptions;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn t_zero_is_multiplication() {
        let ring = Ring::<BigInt>::curve_chow_symbolic(2);
        let k = ring.gen("K").unwrap();
        let op = t_from_p(&ring, 0, 2, &k).unwrap();
        assert_eq!(op.terms().len(), 1);
        assert_eq!(op.terms()[0].1.len(), 1);
        assert_eq!(op.terms()[0].1[0].to_string(), LieElem::p(&ring, 2, 0, &k).to_string());
    }

    #[test]
    fn t_one_at_m_zero() {
        let ring = Ring::<BigInt>::curve_chow_symbolic(2);
        let env = Env::new(&ring, crate::env::Flavor::Plain);
        let a = ring.gen("K").unwrap();
        let p0 = ring.section().unwrap().clone();
        let got = t_from_p(&ring, 1, 0, &a).unwrap().to_env(&env).unwrap();
        let sigma = EnvElem::p(&env, 1, 1, &p0).plus(&EnvElem::p(&env, 1, 1, &Poly::one()).scaled(ring.psi())).unwrap();
        let want = EnvElem::p(&env, 1, 1, &a)
            .minus(&EnvElem::p(&env, 0, 0, &a).mul(&sigma).unwrap())
            .unwrap()
            .minus(&EnvElem::p(&env, 0, 0, &ring.mul(&a, &p0)).mul(&EnvElem::p(&env, 1, 1, &Poly::one())).unwrap())
            .unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn t_is_additive() {
        let ring = Ring::<BigInt>::curve_chow_symbolic(2);
        assert!(t_from_p(&ring, 2, 1, &Poly::zero()).unwrap().terms().is_empty());
    }

    #[test]
    fn relation_k1_k0() {
        let ring = Ring::<BigInt>::curve_chow_symbolic(2);
        let sp = TautSpace::with_section_rule(&ring).unwrap();
        let rel = TRelation { k: 1, k2: 0, m: 1, m2: 1, a: Poly::one(), a2: Poly::one() };
        let r = relations_t_check(&sp, &rel, 3).unwrap();
        assert!(r.passed(), "{}", r.to_json());
    }

    #[test]
    fn x_relation_k0_is_commutativity() {
        let ring = Ring::<Q>::curve_chow_symbolic(2);
        let alg = XAlgebra::new(&ring, false).unwrap();
        let (l, r) = alg.relation(2, 0, &Poly::one(), 1, 0, ring.a0());
        assert!(r.is_zero());
        let x = alg.letter(2, 0, &Poly::one());
        let y = alg.letter(1, 0, ring.a0());
        assert_eq!(l, alg.mul(&x, &y).minus(&alg.mul(&y, &x)));
    }

    #[test]
    fn x_equivalence_small() {
        let ring = Ring::<Q>::curve_chow_symbolic(2);
        let r = x_rel_equiv_check(&ring, 2, 1, &Poly::one(), ring.a0(), 3).unwrap();
        assert!(r.passed(), "{}", r.to_json());
    }

    #[test]
    fn sl2_genus_two() {
        let ring = Ring::<Q>::curve_chow_symbolic(2);
        let r = sl2_verify(&ring, 4).unwrap();
        assert!(r.passed(), "{}", r.to_json());
    }

    #[test]
    fn f_on_k_two() {
        let ring = Ring::<Q>::curve_chow_symbolic(3);
        let alg = XAlgebra::new(&ring, true).unwrap();
        let [_, f, _] = alg.sl2().unwrap();
        let a = ring.a0().clone();
        let got = alg.commutator(&f, &alg.letter(1, 2, &a));
        let eta = ring.eta().unwrap();
        let want = alg
            .letter(2, 1, &a)
            .scalar_mul(&Q::from_i64(2))
            .minus(&alg.letter(1, 0, &ring.mul(&a, &eta)).scalar_mul(&Q::from_i64(2)));
        assert_eq!(got, want);
    }

    #[test]
    fn fourier_genus_two() {
        let ring = Ring::<Q>::curve_chow_symbolic(2);
        let r = fourier_involution_check(&ring, 4).unwrap();
        assert!(r.passed(), "{}", r.to_json());
    }

    #[test]
    fn tau_zero_vanishes() {
        let ring = Ring::<Q>::curve_chow_symbolic(2);
        assert!(tau_pullback_operator(&ring, 0).unwrap().is_zero());
        assert!(tau_pullback_closed(&ring, 0).unwrap().is_zero());
    }

    #[test]
    fn tau_routes_agree() {
        let ring = Ring::<Q>::curve_chow_symbolic(2);
        for k in 1..=3 {
            let r = tau_pullback_check(&ring, k).unwrap();
            assert!(r.passed(), "{}", r.to_json());
        }
    }

    #[test]
    fn gamma_two() {
        let ring = Ring::<Q>::curve_chow(ChowOptions { point_base: true, ..ChowOptions::new(2) });
        let sp = TautSpace::with_section_rule(&ring).unwrap();
        let got = gamma_ek(&ring, 2).unwrap();
        let x2 = sp.symbol(2, &Poly::one());
        let x1 = sp.symbol(1, &Poly::one());
        let t = sp.symbol(1, ring.section().unwrap());
        let want = x2.minus(&sp.mul(&x1, &t).scalar_mul(&Q::from_i64(2)));
        assert_eq!(got, want);
    }

    #[test]
    fn gross_schoen_genus_two() {
        for canonical in [false, true] {
            let ring = Ring::<Q>::curve_chow(ChowOptions {
                point_base: true,
                canonical_from_section: canonical,
                ..ChowOptions::new(2)
            });
            for k in 2..=4 {
                let r = gs_identity_check(&ring, k).unwrap();
                assert!(r.passed(), "{}", r.to_json());
            }
        }
    }

    #[test]
    fn needs_rationals() {
        let ring = Ring::<BigInt>::curve_chow_symbolic(2);
        assert_eq!(sl2_verify(&ring, 2).unwrap_err(), JacError::NeedsRational);
        assert_eq!(tau_pullback_operator(&ring, 2).unwrap_err(), JacError::NeedsRational);
    }
}
