//! The free tautological algebra and the differential operators realizing
//! `P_{m,k}(a)` on it.
//!
//! The algebra is free supercommutative on symbols `x_i(a)`, `i >= 1`, with
//! `a` a reduced fibre monomial of the coefficient ring; the parity of
//! `x_i(a)` is that of `a`. Even symbols are stored in the divided-power
//! basis `x^[e]`. No geometric relations are imposed, so identities checked
//! here are identities of the universal formulas. `x_0(a)` is not a symbol:
//! it is the scalar `pi_*(a)`.
//!
//! A monomial may carry one formal factor `u^[N+o]` for `u = x_1(1)`, where
//! `N` is the ring's hidden formal generator; it behaves like a divided
//! power of `u` of formal height. Formal factors need rational scalars.
//!
//! With the section rule, `x_i(c p0) = p0^*(c) t^i` for `t = x_1(p0)`,
//! imposed on every symbol as it is created.
//!
//! `P_{m,k}(a)` for `k >= 1` acts as
//! `sum (-1)^{k-s} (k!/s!) prod C(n_i,k_i) x_{m-k+sum n}(a a_s..a_1 a0^{k-s})
//! d_{x_{n_1}(a_1)}..d_{x_{n_s}(a_s)}` over compositions `k_1+..+k_s = k`;
//! the rightmost derivative acts first. `P_{m,0}(a)` is multiplication by
//! `x_m(a)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::combinat::{binomial, factorial};
use crate::env::{EnvElem, EnvGen};
use crate::liealg::{basis_gens, show_scaled, BracketTable, LieElem, PGen};
use crate::poly::{Monomial, Poly};
use crate::report::{self, Report};
use crate::ring::Ring;
use crate::scalar::{sign, Scalar, ScalarMode};

use super::ModelError;

/// The symbol `x_index(class)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym {
    pub index: u32,
    pub class: Monomial,
}

impl Sym {
    pub fn new(index: u32, class: Monomial) -> Self {
        Sym { index, class }
    }
}

/// A monomial: sorted symbols with exponents (divided for even symbols,
/// at most one for odd ones) and an optional formal factor `u^[N+o]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TautMono {
    factors: Vec<(Sym, u32)>,
    formal: Option<i64>,
}

impl TautMono {
    pub fn unit() -> Self {
        Self::default()
    }

    pub fn factors(&self) -> &[(Sym, u32)] {
        &self.factors
    }

    pub fn formal(&self) -> Option<i64> {
        self.formal
    }

    /// Weight (the symmetric-power index) of the symbol part.
    pub fn weight(&self) -> u32 {
        self.factors.iter().map(|(s, e)| s.index * e).sum()
    }
}

/// A base-linear combination of monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TautPoly<S: Scalar> {
    terms: BTreeMap<TautMono, Poly<S>>,
}

impl<S: Scalar> Default for TautPoly<S> {
    fn default() -> Self {
        TautPoly { terms: BTreeMap::new() }
    }
}

impl<S: Scalar> TautPoly<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::mono(TautMono::unit())
    }

    pub fn mono(m: TautMono) -> Self {
        let mut p = Self::zero();
        p.add_term(m, Poly::one());
        p
    }

    pub fn terms(&self) -> &BTreeMap<TautMono, Poly<S>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: TautMono, c: Poly<S>) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                e.add_assign(&c);
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    /// Add `s * other` for a scalar `s`.
    pub fn add_scalar_multiple(&mut self, other: &Self, s: &S) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.scaled(s));
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut p = self.clone();
        p.add_assign(other);
        p
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut p = self.clone();
        p.add_scalar_multiple(other, &-S::one());
        p
    }

    pub fn scalar_mul(&self, s: &S) -> Self {
        let mut p = Self::zero();
        p.add_scalar_multiple(self, s);
        p
    }
}

type ApplyCache<S> = RwLock<HashMap<(PGen, TautMono), Arc<TautPoly<S>>>>;

/// The tautological algebra over a ring, with its operator caches.
pub struct TautSpace<S: Scalar> {
    ring: Arc<Ring<S>>,
    section: Option<Monomial>,
    a0_powers: RwLock<Vec<Poly<S>>>,
    cache: ApplyCache<S>,
}

impl<S: Scalar> TautSpace<S> {
    /// The free model, no relations between symbols.
    pub fn new(ring: &Arc<Ring<S>>) -> Arc<Self> {
        Self::build(ring, None)
    }

    /// The free model modulo the section rule `x_i(c p0) = p0^*(c) t^i`.
    pub fn with_section_rule(ring: &Arc<Ring<S>>) -> Result<Arc<Self>, ModelError> {
        let p0 = ring.section_monomial().ok_or(crate::env::EnvError::NoSection)?;
        Ok(Self::build(ring, Some(p0)))
    }

    fn build(ring: &Arc<Ring<S>>, section: Option<Monomial>) -> Arc<Self> {
        Arc::new(TautSpace {
            ring: Arc::clone(ring),
            section,
            a0_powers: RwLock::new(vec![ring.reduce(&Poly::one())]),
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn ring(&self) -> &Arc<Ring<S>> {
        &self.ring
    }

    pub fn has_section_rule(&self) -> bool {
        self.section.is_some()
    }

    pub fn clear_cache(&self) {
        self.cache.write().expect("taut cache").clear();
    }

    fn odd(&self, s: &Sym) -> bool {
        self.ring.monomial_is_odd(&s.class)
    }

    fn u_sym() -> Sym {
        Sym::new(1, Monomial::unit())
    }

    /// `t = x_1(p0)`.
    pub fn t_sym(&self) -> Option<Sym> {
        self.ring.section_monomial().map(|p0| Sym::new(1, p0))
    }

    fn a0_power(&self, e: u32) -> Poly<S> {
        if let Some(p) = self.a0_powers.read().expect("a0 powers").get(e as usize) {
            return p.clone();
        }
        let mut w = self.a0_powers.write().expect("a0 powers");
        while w.len() <= e as usize {
            let next = self.ring.mul(w.last().expect("nonempty"), self.ring.a0());
            w.push(next);
        }
        w[e as usize].clone()
    }

    /// `u^[N+offset]`; rational mode only.
    pub fn fundamental(&self, offset: i64) -> Result<TautPoly<S>, ModelError> {
        if S::MODE != ScalarMode::Rational {
            return Err(ModelError::NeedsRational);
        }
        Ok(TautPoly::mono(TautMono { factors: Vec::new(), formal: Some(offset) }))
    }

    /// A single symbol to the divided power `e`, as stored.
    pub fn sym_power(&self, s: Sym, e: u32) -> TautPoly<S> {
        if e == 0 {
            return TautPoly::one();
        }
        if self.odd(&s) && e > 1 {
            return TautPoly::zero();
        }
        TautPoly::mono(TautMono { factors: vec![(s, e)], formal: None })
    }

    /// `x_i(c)` for a ring element `c`, with `x_0(c) = pi_*(c)` and the
    /// section rule applied when active.
    pub fn symbol(&self, i: u32, c: &Poly<S>) -> TautPoly<S> {
        let ring = &self.ring;
        if i == 0 {
            let v = ring.pushforward(c).expect("pushforward of a symbol class");
            let mut p = TautPoly::zero();
            p.add_term(TautMono::unit(), v);
            return p;
        }
        let mut out = TautPoly::zero();
        for (fiber, base) in ring.split(&ring.reduce(c)) {
            match &self.section {
                Some(p0) if p0.divides(&fiber) && !(i == 1 && &fiber == p0) => {
                    let rest = p0.quotient_of(&fiber);
                    let (neg, _) = ring.mul_monomials(p0, &rest).expect("reduced monomial");
                    let pulled = ring.restrict(&Poly::monomial(rest));
                    let mut coeff = ring.mul(&base, &pulled);
                    coeff = coeff.scaled(&(S::from_bigint(factorial(i as u64)) * sign::<S>(neg)));
                    let t = Sym::new(1, p0.clone());
                    out.add_term(TautMono { factors: vec![(t, i)], formal: None }, coeff);
                }
                _ => out.add_term(
                    TautMono { factors: vec![(Sym::new(i, fiber), 1)], formal: None },
                    base,
                ),
            }
        }
        out
    }

    /// `binom(N + o + e, e)` as a polynomial in `N`.
    fn formal_binomial(&self, o: i64, e: u32) -> Poly<S> {
        let n = self.ring.formal_n();
        let mut acc = Poly::one();
        for r in 1..=e as i64 {
            let f = n.plus(&Poly::constant(S::from_i64(o + r)));
            acc = self.ring.mul(&acc, &f);
        }
        acc.div_exact(&S::from_bigint(factorial(e as u64)))
            .expect("formal factors need rational scalars")
    }

    /// Product of monomials: a scalar, an optional polynomial factor from the
    /// formal power, and the product monomial. `None` if it vanishes.
    fn mul_mono(&self, a: &TautMono, b: &TautMono) -> Option<(S, Option<Poly<S>>, TautMono)> {
        let mut neg = false;
        let mut mult = BigInt::one();
        let mut out: Vec<(Sym, u32)> = Vec::with_capacity(a.factors.len() + b.factors.len());
        let mut odd_a_left = a.factors.iter().filter(|(s, _)| self.odd(s)).count();
        let (mut i, mut j) = (0, 0);
        while i < a.factors.len() || j < b.factors.len() {
            let take_a = j >= b.factors.len()
                || (i < a.factors.len() && a.factors[i].0 <= b.factors[j].0);
            if take_a && j < b.factors.len() && a.factors[i].0 == b.factors[j].0 {
                let (s, ea) = &a.factors[i];
                let eb = b.factors[j].1;
                if self.odd(s) {
                    return None;
                }
                mult *= binomial((ea + eb) as u64, eb as i64);
                out.push((s.clone(), ea + eb));
                i += 1;
                j += 1;
            } else if take_a {
                if self.odd(&a.factors[i].0) {
                    odd_a_left -= 1;
                }
                out.push(a.factors[i].clone());
                i += 1;
            } else {
                if self.odd(&b.factors[j].0) && odd_a_left % 2 == 1 {
                    neg = !neg;
                }
                out.push(b.factors[j].clone());
                j += 1;
            }
        }
        let mut formal = match (a.formal, b.formal) {
            (Some(_), Some(_)) => panic!("a product of two formal fundamental classes has no meaning here"),
            (x, None) | (None, x) => x,
        };
        let mut extra = None;
        if let Some(o) = formal {
            let u = Self::u_sym();
            if let Some(pos) = out.iter().position(|(s, _)| *s == u) {
                let e = out.remove(pos).1;
                extra = Some(self.formal_binomial(o, e));
                formal = Some(o + e as i64);
            }
        }
        let c = S::from_bigint(mult) * sign::<S>(neg);
        Some((c, extra, TautMono { factors: out, formal }))
    }

    /// Pontryagin product.
    pub fn mul(&self, x: &TautPoly<S>, y: &TautPoly<S>) -> TautPoly<S> {
        let mut out = TautPoly::zero();
        for (a, ca) in &x.terms {
            for (b, cb) in &y.terms {
                if let Some((s, extra, m)) = self.mul_mono(a, b) {
                    let mut c = self.ring.mul(ca, cb).scaled(&s);
                    if let Some(e) = extra {
                        c = self.ring.mul(&c, &e);
                    }
                    out.add_term(m, c);
                }
            }
        }
        out
    }

    /// Multiply every coefficient by a base element.
    pub fn scale(&self, p: &TautPoly<S>, c: &Poly<S>) -> TautPoly<S> {
        let mut out = TautPoly::zero();
        for (m, d) in &p.terms {
            out.add_term(m.clone(), self.ring.mul(c, d));
        }
        out
    }

    /// Symbols a derivative can act on, with `u` standing for a formal factor.
    fn present(&self, m: &TautMono) -> Vec<Sym> {
        let mut v: Vec<Sym> = m.factors.iter().map(|(s, _)| s.clone()).collect();
        if m.formal.is_some() {
            v.push(Self::u_sym());
        }
        v
    }

    /// Left derivative `d/d s`; returns the Koszul sign and the result.
    fn deriv(&self, s: &Sym, m: &TautMono) -> Option<(bool, TautMono)> {
        if let Some(pos) = m.factors.iter().position(|(x, _)| x == s) {
            let odd = self.odd(s);
            let neg = odd && m.factors[..pos].iter().filter(|(x, _)| self.odd(x)).count() % 2 == 1;
            let mut out = m.clone();
            if out.factors[pos].1 == 1 {
                out.factors.remove(pos);
            } else {
                out.factors[pos].1 -= 1;
            }
            return Some((neg, out));
        }
        if *s == Self::u_sym() {
            if let Some(o) = m.formal {
                let mut out = m.clone();
                out.formal = Some(o - 1);
                return Some((false, out));
            }
        }
        None
    }

    /// Apply `P_{m,k}(a)` to a monomial (memoized).
    pub fn apply_gen_mono(&self, g: &PGen, b: &TautMono) -> Arc<TautPoly<S>> {
        let key = (g.clone(), b.clone());
        if let Some(v) = self.cache.read().expect("taut cache").get(&key) {
            return Arc::clone(v);
        }
        let v = Arc::new(self.apply_gen_uncached(g, b));
        self.cache.write().expect("taut cache").insert(key, Arc::clone(&v));
        v
    }

    fn apply_gen_uncached(&self, g: &PGen, b: &TautMono) -> TautPoly<S> {
        let a = Poly::monomial(g.a.clone());
        let base = TautPoly::mono(b.clone());
        if g.k == 0 {
            return self.mul(&self.symbol(g.m, &a), &base);
        }
        let mut out = TautPoly::zero();
        let kfact = factorial(g.k as u64);
        for s in 1..=g.k {
            let lead = kfact.clone() / factorial(s as u64);
            let lead = if (g.k - s) % 2 == 1 { -lead } else { lead };
            let corr = self.a0_power(g.k - s);
            let mut chosen = Vec::with_capacity(s as usize);
            self.derivative_tuples(g, s, &lead, &corr, b, false, &mut chosen, &mut out);
        }
        out
    }

    /// Enumerate `d_{sigma_1}..d_{sigma_s}` applied to `cur`, choosing the
    /// rightmost symbol first; `chosen` lists `sigma_s, sigma_{s-1}, ...`.
    #[allow(clippy::too_many_arguments)]
    fn derivative_tuples(
        &self,
        g: &PGen,
        s: u32,
        lead: &BigInt,
        corr: &Poly<S>,
        cur: &TautMono,
        neg: bool,
        chosen: &mut Vec<Sym>,
        out: &mut TautPoly<S>,
    ) {
        if chosen.len() == s as usize {
            let ns: Vec<u32> = chosen.iter().map(|x| x.index).collect();
            let w = composition_weight(&ns, g.k);
            if w.is_zero() {
                return;
            }
            let ring = &self.ring;
            let mut class = Poly::monomial(g.a.clone());
            for x in chosen.iter() {
                class = ring.mul(&class, &Poly::monomial(x.class.clone()));
            }
            class = ring.mul(&class, corr);
            if class.is_zero() {
                return;
            }
            let index = g.m + ns.iter().sum::<u32>() - g.k;
            let coeff = S::from_bigint(lead * w) * sign::<S>(neg);
            let prod = self.mul(&self.symbol(index, &class), &TautPoly::mono(cur.clone()));
            out.add_scalar_multiple(&prod, &coeff);
            return;
        }
        for x in self.present(cur) {
            if let Some((n2, next)) = self.deriv(&x, cur) {
                chosen.push(x);
                self.derivative_tuples(g, s, lead, corr, &next, neg ^ n2, chosen, out);
                chosen.pop();
            }
        }
    }

    pub fn apply_gen(&self, g: &PGen, p: &TautPoly<S>) -> TautPoly<S> {
        let mut out = TautPoly::zero();
        for (m, c) in &p.terms {
            let v = self.apply_gen_mono(g, m);
            out.add_assign(&self.scale(&v, c));
        }
        out
    }

    pub fn apply_lie(&self, x: &LieElem<S>, p: &TautPoly<S>) -> TautPoly<S> {
        let mut out = TautPoly::zero();
        for (g, c) in x.terms() {
            out.add_assign(&self.scale(&self.apply_gen(g, p), c));
        }
        out
    }

    /// Apply a product `x_1 x_2 .. x_r`; `x_r` acts first.
    pub fn apply_product(&self, factors: &[LieElem<S>], p: &TautPoly<S>) -> TautPoly<S> {
        factors.iter().rev().fold(p.clone(), |acc, x| self.apply_lie(x, &acc))
    }

    /// Apply an enveloping-algebra element. Row towers `P_{n,0}(1)^[d]` act by
    /// multiplication with `x_n(1)^[d]`.
    pub fn apply_env(&self, x: &EnvElem<S>, p: &TautPoly<S>) -> Result<TautPoly<S>, ModelError> {
        let mut out = TautPoly::zero();
        for (w, c) in x.terms() {
            let mut acc = p.clone();
            for letter in w.iter().rev() {
                acc = match letter {
                    EnvGen::P(g) => self.apply_gen(g, &acc),
                    EnvGen::Row { n, d } => {
                        let f = if *n == 0 {
                            divided_scalar_power(&self.symbol(0, &Poly::one()), *d)
                        } else {
                            self.sym_power(Sym::new(*n, Monomial::unit()), *d)
                        };
                        self.mul(&f, &acc)
                    }
                    EnvGen::Col { .. } => return Err(ModelError::ColumnTower),
                };
            }
            out.add_assign(&self.scale(&acc, c));
        }
        Ok(out)
    }

    /// Every monomial without formal factor of weight at most `max_weight`
    /// over the given classes, skipping symbols the section rule removes.
    pub fn monomials(&self, max_weight: u32, classes: &[Monomial]) -> Vec<TautMono> {
        let mut syms = Vec::new();
        for i in 1..=max_weight {
            for c in classes {
                if let Some(p0) = &self.section {
                    if p0.divides(c) && !(i == 1 && c == p0) {
                        continue;
                    }
                }
                syms.push(Sym::new(i, c.clone()));
            }
        }
        syms.sort();
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.monomials_rec(&syms, 0, max_weight, &mut cur, &mut out);
        out.sort();
        out
    }

    fn monomials_rec(
        &self,
        syms: &[Sym],
        pos: usize,
        budget: u32,
        cur: &mut Vec<(Sym, u32)>,
        out: &mut Vec<TautMono>,
    ) {
        if pos == syms.len() {
            out.push(TautMono { factors: cur.clone(), formal: None });
            return;
        }
        let s = &syms[pos];
        let max_e = if self.odd(s) { 1 } else { budget / s.index };
        for e in 0..=max_e.min(budget / s.index) {
            if e > 0 {
                cur.push((s.clone(), e));
            }
            self.monomials_rec(syms, pos + 1, budget - e * s.index, cur, out);
            if e > 0 {
                cur.pop();
            }
        }
    }

    /// Codimension of a monomial in ring degree units: `x_i(a)` has
    /// `deg(a) + unit * (i - 1)`.
    pub fn codim(&self, m: &TautMono) -> i64 {
        let unit = self.ring.degree_unit() as i64;
        m.factors
            .iter()
            .map(|(s, e)| (self.ring.monomial_degree(&s.class) as i64 + unit * (s.index as i64 - 1)) * *e as i64)
            .sum()
    }

    pub fn show_sym(&self, s: &Sym) -> String {
        format!("x_{}({})", s.index, self.ring.show_monomial(&s.class))
    }

    pub fn show_mono(&self, m: &TautMono) -> String {
        let mut parts: Vec<String> = m
            .factors
            .iter()
            .map(|(s, e)| {
                if *e == 1 {
                    self.show_sym(s)
                } else {
                    format!("{}^[{e}]", self.show_sym(s))
                }
            })
            .collect();
        if let Some(o) = m.formal {
            parts.push(match o {
                0 => "u^[N]".to_string(),
                o if o > 0 => format!("u^[N+{o}]"),
                o => format!("u^[N-{}]", -o),
            });
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn show(&self, p: &TautPoly<S>) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (m, c)) in p.terms.iter().enumerate() {
            out.push_str(&show_scaled(&self.ring, c, &self.show_mono(m), idx == 0));
        }
        out
    }
}

/// `c^d / d!` for a scalar element.
fn divided_scalar_power<S: Scalar>(c: &TautPoly<S>, d: u32) -> TautPoly<S> {
    let v = c.terms.get(&TautMono::unit()).cloned().unwrap_or_default();
    let mut acc: Poly<S> = Poly::one();
    for _ in 0..d {
        let mut next = Poly::zero();
        for (m1, c1) in acc.terms() {
            for (m2, c2) in v.terms() {
                next.add_term(m1.raw_product(m2), c1.clone() * c2.clone());
            }
        }
        acc = next;
    }
    let acc = acc
        .div_exact(&S::from_bigint(factorial(d as u64)))
        .expect("divided power of a scalar needs exact division");
    let mut p = TautPoly::zero();
    p.add_term(TautMono::unit(), acc);
    p
}

/// `sum_{k_1+..+k_s = k, k_i >= 1} prod C(n_i, k_i)`: the coefficient of
/// `z^k` in `prod ((1+z)^{n_i} - 1)`.
fn composition_weight(ns: &[u32], k: u32) -> BigInt {
    if ns.iter().sum::<u32>() < k {
        return BigInt::zero();
    }
    let k = k as usize;
    let mut acc = vec![BigInt::zero(); k + 1];
    acc[0] = BigInt::one();
    for &n in ns {
        let mut next = vec![BigInt::zero(); k + 1];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for j in 1..=(k - i).min(n as usize) {
                next[i + j] += a * binomial(n as u64, j as i64);
            }
        }
        acc = next;
    }
    acc[k].clone()
}

/// A finite differential operator: `sum coeff * d_{s_1}..d_{s_r}`, with the
/// derivatives in sorted order and the coefficient a tautological element.
#[derive(Clone, Debug)]
pub struct DiffOp<S: Scalar> {
    pub terms: BTreeMap<Vec<Sym>, TautPoly<S>>,
}

/// The differential operator of `P_{m,k}(a)`, truncated to derivatives in
/// symbols `x_n(b)` with `n <= max_index` and `b` in the sweep basis.
pub fn realize_p<S: Scalar>(space: &TautSpace<S>, g: &PGen, max_index: u32) -> DiffOp<S> {
    let ring = space.ring();
    let mut terms: BTreeMap<Vec<Sym>, TautPoly<S>> = BTreeMap::new();
    if g.k == 0 {
        terms.insert(Vec::new(), space.symbol(g.m, &Poly::monomial(g.a.clone())));
        return DiffOp { terms };
    }
    let mut syms = Vec::new();
    for n in 1..=max_index {
        for b in ring.sweep_basis() {
            if let Some(p0) = &space.section {
                if p0.divides(&b) && !(n == 1 && &b == p0) {
                    continue;
                }
            }
            syms.push(Sym::new(n, b));
        }
    }
    let kfact = factorial(g.k as u64);
    for s in 1..=g.k {
        let lead = kfact.clone() / factorial(s as u64);
        let lead = if (g.k - s) % 2 == 1 { -lead } else { lead };
        let corr = space.a0_power(g.k - s);
        // Ordered tuples (sigma_1, .., sigma_s).
        let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
        while let Some(t) = stack.pop() {
            if t.len() < s as usize {
                for i in 0..syms.len() {
                    let mut t2 = t.clone();
                    t2.push(i);
                    stack.push(t2);
                }
                continue;
            }
            let tuple: Vec<&Sym> = t.iter().map(|&i| &syms[i]).collect();
            let ns: Vec<u32> = tuple.iter().map(|x| x.index).collect();
            let w = composition_weight(&ns, g.k);
            if w.is_zero() {
                continue;
            }
            let mut class = Poly::monomial(g.a.clone());
            for x in tuple.iter().rev() {
                class = ring.mul(&class, &Poly::monomial(x.class.clone()));
            }
            class = ring.mul(&class, &corr);
            if class.is_zero() {
                continue;
            }
            // Sort the derivatives, tracking the Koszul sign.
            let mut order: Vec<Sym> = tuple.iter().map(|x| (*x).clone()).collect();
            let mut neg = false;
            let mut vanishes = false;
            for i in 1..order.len() {
                let mut j = i;
                while j > 0 && order[j - 1] > order[j] {
                    if space.odd(&order[j - 1]) && space.odd(&order[j]) {
                        neg = !neg;
                    }
                    order.swap(j - 1, j);
                    j -= 1;
                }
            }
            for w2 in order.windows(2) {
                if w2[0] == w2[1] && space.odd(&w2[0]) {
                    vanishes = true;
                }
            }
            if vanishes {
                continue;
            }
            let index = g.m + ns.iter().sum::<u32>() - g.k;
            let coeff = S::from_bigint(&lead * w) * sign::<S>(neg);
            let sym = space.symbol(index, &class).scalar_mul(&coeff);
            let e = terms.entry(order).or_default();
            e.add_assign(&sym);
        }
    }
    terms.retain(|_, v| !v.is_zero());
    DiffOp { terms }
}

impl<S: Scalar> DiffOp<S> {
    /// Apply to an element; exact on monomials whose symbols are among those
    /// the operator was truncated to.
    pub fn apply(&self, space: &TautSpace<S>, p: &TautPoly<S>) -> TautPoly<S> {
        let mut out = TautPoly::zero();
        for (derivs, coeff) in &self.terms {
            let mut cur = TautPoly::zero();
            for (m, c) in &p.terms {
                let mut acc = Some((false, m.clone()));
                for s in derivs.iter().rev() {
                    acc = acc.and_then(|(neg, mm)| space.deriv(s, &mm).map(|(n2, r)| (neg ^ n2, r)));
                }
                if let Some((neg, r)) = acc {
                    cur.add_term(r, c.scaled(&sign::<S>(neg)));
                }
            }
            out.add_assign(&space.mul(coeff, &cur));
        }
        out
    }

    pub fn show(&self, space: &TautSpace<S>) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut lines = Vec::new();
        for (derivs, coeff) in &self.terms {
            let d: Vec<String> = derivs.iter().map(|s| format!("d[{}]", space.show_sym(s))).collect();
            let c = space.show(coeff);
            if d.is_empty() {
                lines.push(c);
            } else {
                lines.push(format!("({c}) {}", d.join(" ")));
            }
        }
        lines.join("\n")
    }
}

/// Symbol classes used by sweeps: the ring's sweep basis.
fn sweep_classes<S: Scalar>(ring: &Ring<S>) -> Vec<Monomial> {
    ring.sweep_basis()
}

/// The realization is a bracket homomorphism: for all basis generators with
/// both indices at most `max_index`, `[R(x), R(y)] = R([x, y])` on every
/// monomial of weight at most `max_weight`.
pub fn homomorphism_check<S: Scalar>(space: &Arc<TautSpace<S>>, max_index: u32, max_weight: u32) -> Report {
    let ring = space.ring();
    let gens = basis_gens(ring, max_index, max_index);
    let monos = space.monomials(max_weight, &sweep_classes(ring));
    let table = BracketTable::new(ring);
    let mut pairs = Vec::new();
    for i in 0..gens.len() {
        for j in i..gens.len() {
            pairs.push((i, j));
        }
    }
    let parts: Vec<Report> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (x, y) = (&gens[i], &gens[j]);
            let mut r = Report::new("taut-homomorphism");
            let odd = ring.monomial_is_odd(&x.a) && ring.monomial_is_odd(&y.a);
            let br = table.gens(x, y);
            for b in &monos {
                let bp = TautPoly::mono(b.clone());
                let xy = space.apply_gen(x, &space.apply_gen(y, &bp));
                let yx = space.apply_gen(y, &space.apply_gen(x, &bp));
                let lhs = if odd { xy.plus(&yx) } else { xy.minus(&yx) };
                let rhs = space.apply_lie(&br, &bp);
                r.check(
                    "[R(x), R(y)] = R([x, y])",
                    || {
                        format!(
                            "x=P({},{}; {}) y=P({},{}; {}) on {}",
                            x.m,
                            x.k,
                            ring.show_monomial(&x.a),
                            y.m,
                            y.k,
                            ring.show_monomial(&y.a),
                            space.show_mono(b)
                        )
                    },
                    lhs == rhs,
                    || space.show(&lhs),
                    || space.show(&rhs),
                );
            }
            r
        })
        .collect();
    let mut r = report::merge("taut-homomorphism", Some(ring.fingerprint()), parts);
    r.detail("generators", gens.len().to_string());
    r.detail("monomials", monos.len().to_string());
    r
}

/// Every term of `R(P_{m,k}(a)) b` shifts the weight by `m - k` and the
/// codimension by `deg(a) + unit * (m - 1)`, base classes included.
pub fn bookkeeping_check<S: Scalar>(space: &Arc<TautSpace<S>>, max_index: u32, max_weight: u32) -> Report {
    let ring = space.ring();
    let gens = basis_gens(ring, max_index, max_index);
    let monos = space.monomials(max_weight, &sweep_classes(ring));
    let unit = ring.degree_unit() as i64;
    let mut r = Report::new("taut-bookkeeping").with_ring(ring.fingerprint());
    for g in &gens {
        let dw = g.m as i64 - g.k as i64;
        let dc = ring.monomial_degree(&g.a) as i64 + unit * (g.m as i64 - 1);
        for b in &monos {
            let out = space.apply_gen_mono(g, b);
            for (m, c) in out.terms() {
                let w_ok = m.weight() as i64 == b.weight() as i64 + dw;
                let base_deg = c.terms().map(|(bm, _)| ring.monomial_degree(bm) as i64).collect::<Vec<_>>();
                let c_ok = base_deg.iter().all(|d| space.codim(m) + d == space.codim(b) + dc);
                r.check(
                    "weight and codimension shifts",
                    || format!("P({},{}; {}) on {}", g.m, g.k, ring.show_monomial(&g.a), space.show_mono(b)),
                    w_ok && c_ok,
                    || space.show_mono(m),
                    || format!("weight {} codim {}", b.weight() as i64 + dw, space.codim(b) + dc),
                );
            }
        }
    }
    r.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ChowOptions;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn multiplication_operator() {
        let ring = Ring::<BigInt>::curve_cohomology(2);
        let sp = TautSpace::new(&ring);
        let a = ring.gen("alpha1").unwrap();
        let x = LieElem::p(&ring, 2, 0, &a);
        let got = sp.apply_lie(&x, &TautPoly::one());
        assert_eq!(got, sp.symbol(2, &a));
    }

    #[test]
    fn kills_unit_for_positive_k() {
        let ring = Ring::<BigInt>::curve_cohomology(2);
        let sp = TautSpace::new(&ring);
        for g in basis_gens(&ring, 3, 3).into_iter().filter(|g| g.k > 0) {
            assert!(sp.apply_gen(&g, &TautPoly::one()).is_zero(), "{g:?}");
        }
    }

    #[test]
    fn odd_symbols_anticommute() {
        let ring = Ring::<BigInt>::curve_cohomology(2);
        let sp = TautSpace::new(&ring);
        let a = sp.symbol(1, &ring.gen("alpha1").unwrap());
        let b = sp.symbol(2, &ring.gen("beta1").unwrap());
        assert_eq!(sp.mul(&a, &b), sp.mul(&b, &a).scalar_mul(&BigInt::from(-1)));
        assert!(sp.mul(&a, &a).is_zero());
    }

    #[test]
    fn p11_of_section_on_t_and_u() {
        let ring = Ring::<Q>::curve_chow_symbolic(2);
        let sp = TautSpace::with_section_rule(&ring).unwrap();
        let p0 = ring.section().unwrap().clone();
        let x = LieElem::p(&ring, 1, 1, &p0);
        let t = sp.symbol(1, &p0);
        let u = sp.fundamental(0).unwrap();
        // t (d_u - psi d_t) on t^[2] u^[N]
        let f = sp.mul(&sp.sym_power(sp.t_sym().unwrap(), 2), &u);
        let got = sp.apply_lie(&x, &f);
        let mut want = sp.mul(&sp.mul(&t, &sp.sym_power(sp.t_sym().unwrap(), 2)), &sp.fundamental(-1).unwrap());
        let psi_term = sp.mul(&t, &sp.mul(&t, &u));
        want = want.minus(&sp.scale(&psi_term, ring.psi()));
        assert_eq!(sp.show(&got), sp.show(&want));
    }

    #[test]
    fn weight_operator_on_fundamental_class() {
        let ring = Ring::<Q>::curve_chow_symbolic(2);
        let sp = TautSpace::with_section_rule(&ring).unwrap();
        let x = LieElem::p(&ring, 1, 1, &Poly::one());
        let u = sp.fundamental(0).unwrap();
        assert_eq!(sp.apply_lie(&x, &u), sp.scale(&u, &ring.formal_n()));
    }

    #[test]
    fn diffop_matches_direct_application() {
        let ring = Ring::<BigInt>::curve_cohomology(1);
        let sp = TautSpace::new(&ring);
        let monos = sp.monomials(3, &ring.sweep_basis());
        for g in basis_gens(&ring, 2, 3) {
            let op = realize_p(&sp, &g, 3);
            for b in &monos {
                let p = TautPoly::mono(b.clone());
                assert_eq!(op.apply(&sp, &p), sp.apply_gen(&g, &p), "{g:?} on {}", sp.show_mono(b));
            }
        }
    }

    #[test]
    fn small_homomorphism_sweep() {
        let ring = Ring::<BigInt>::curve_cohomology(1);
        let sp = TautSpace::new(&ring);
        let r = homomorphism_check(&sp, 2, 3);
        assert!(r.passed(), "{}", r.to_json());
    }

    #[test]
    fn chow_homomorphism_sweep() {
        let ring = Ring::<BigInt>::curve_chow(ChowOptions { psi_truncation: Some(3), ..ChowOptions::new(2) });
        let sp = TautSpace::new(&ring);
        let r = homomorphism_check(&sp, 2, 3);
        assert!(r.passed(), "{}", r.to_json());
    }

    #[test]
    fn bookkeeping() {
        let ring = Ring::<BigInt>::curve_cohomology(2);
        let sp = TautSpace::new(&ring);
        let r = bookkeeping_check(&sp, 2, 3);
        assert!(r.passed(), "{}", r.to_json());
    }

    #[test]
    fn composition_weights() {
        assert_eq!(composition_weight(&[2], 2), BigInt::from(1));
        assert_eq!(composition_weight(&[2, 2], 3), BigInt::from(4));
        assert_eq!(composition_weight(&[1, 1], 3), BigInt::zero());
    }
}
