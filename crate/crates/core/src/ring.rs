//! Presented graded supercommutative coefficient rings.
//!
//! A [`Ring`] is compiled from a scalar-independent [`RingSpec`]: generators
//! with parity and degree, oriented rewrite rules, the distinguished even
//! element `a0`, a subset of base generators (scalars pulled back from the
//! base), the fibre pushforward and the restriction along the section.
//! Every ring also carries a hidden base generator `N`, used for formal
//! symmetric-power indices.
//!
//! The symbolic Chow model is a declared model, not an actual Chow ring:
//! identities verified in it check the formulas, not the geometry.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::poly::{monomial_is_odd, mul_monomials, Monomial, Poly};
use crate::scalar::{sign, Scalar, ScalarMode};

pub use crate::ringspec::{GeneratorSpec, RingSpec, SpecPoly};

/// Name of the hidden formal generator appended to every ring.
pub const FORMAL_N: &str = "N";

/// Number of `kappa_j = pi_*(K^{j+1})` base classes in the symbolic Chow model.
pub const KAPPA_COUNT: u32 = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("elements belong to different rings ({0} vs {1})")]
    Mismatch(String, String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("`{0}` is reserved")]
    Reserved(String),
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("rule `{0}` is not homogeneous")]
    NonHomogeneousRule(String),
    #[error("rule `{0}` does not decrease the reduction order")]
    NonDecreasingRule(String),
    #[error("no pushforward known for `{0}`")]
    MissingPushforward(String),
    #[error("pushforward of `{0}` has the wrong degree")]
    PushforwardDegree(String),
    #[error("coefficient {0} is not an integer in integer mode")]
    NotIntegral(String),
    #[error("a0 must be even and homogeneous")]
    BadA0,
    #[error("restriction does not respect rule `{0}`")]
    RestrictionIncompatible(String),
    #[error("theta characteristic invalid: {0}")]
    InvalidChi(String),
    #[error("unknown field `{0}`")]
    UnknownField(String),
    #[error("{0}")]
    Other(String),
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub odd: bool,
    pub degree: u32,
    pub base: bool,
}

#[derive(Clone, Debug)]
pub struct Rule<S: Scalar> {
    pub lhs: Monomial,
    pub rhs: Poly<S>,
}

#[derive(Debug)]
pub struct Ring<S: Scalar> {
    spec: RingSpec,
    gens: Vec<Generator>,
    odd: Vec<bool>,
    rules: Vec<Rule<S>>,
    max_degree: Option<u32>,
    degree_unit: u32,
    a0: Poly<S>,
    pushforward: BTreeMap<Monomial, Poly<S>>,
    restriction: Vec<Poly<S>>,
    section: Option<Poly<S>>,
    psi: Poly<S>,
    chi: Option<Poly<S>>,
    formal_n: usize,
    fingerprint: String,
    cache: RwLock<HashMap<Monomial, Poly<S>>>,
}

/// Options for the symbolic Chow model of a family of curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChowOptions {
    pub genus: u32,
    /// `psi^d = 0` when set.
    pub psi_truncation: Option<u32>,
    /// Treat the base as a point: `psi = 0`.
    pub point_base: bool,
    /// Impose `K = (2g-2) p0`.
    pub canonical_from_section: bool,
}

impl ChowOptions {
    pub fn new(genus: u32) -> Self {
        ChowOptions {
            genus,
            psi_truncation: None,
            point_base: false,
            canonical_from_section: false,
        }
    }
}

impl<S: Scalar> Ring<S> {
    pub fn curve_cohomology(g: u32) -> Arc<Self> {
        Self::from_spec(RingSpec::curve_cohomology(g)).expect("built-in cohomology ring is valid")
    }

    pub fn curve_chow(opts: ChowOptions) -> Arc<Self> {
        Self::from_spec(RingSpec::curve_chow(opts)).expect("built-in Chow model is valid")
    }

    pub fn curve_chow_symbolic(g: u32) -> Arc<Self> {
        Self::curve_chow(ChowOptions::new(g))
    }

    pub fn from_spec(spec: RingSpec) -> Result<Arc<Self>, RingError> {
        let mut gens: Vec<Generator> = spec
            .generators
            .iter()
            .map(|g| Generator {
                name: g.name.clone(),
                odd: g.odd,
                degree: g.degree,
                base: g.base,
            })
            .collect();
        let formal_n = gens.len();
        gens.push(Generator {
            name: FORMAL_N.to_string(),
            odd: false,
            degree: 0,
            base: true,
        });
        let odd: Vec<bool> = gens.iter().map(|g| g.odd).collect();
        let conv = |p: &SpecPoly| -> Result<Poly<S>, RingError> {
            let mut out = Poly::zero();
            for (m, c) in p {
                let s = S::from_ratio(c.numer(), c.denom())
                    .ok_or_else(|| RingError::NotIntegral(c.to_string()))?;
                out.add_term(m.clone(), s);
            }
            Ok(out)
        };
        let degree = |m: &Monomial| -> u32 {
            m.support().map(|(i, e)| gens[i].degree * e as u32).sum()
        };
        let fiber_count = |m: &Monomial| -> u32 {
            m.support().filter(|(i, _)| !gens[*i].base).map(|(_, e)| e as u32).sum()
        };

        let mut rules = Vec::new();
        for (lhs, rhs) in &spec.rules {
            let rhs = conv(rhs)?;
            let shown = spec.show_monomial(lhs);
            let d = degree(lhs);
            for (m, _) in rhs.terms() {
                if degree(m) != d {
                    return Err(RingError::NonHomogeneousRule(shown));
                }
                let key_l = (fiber_count(lhs), lhs.clone());
                let key_r = (fiber_count(m), m.clone());
                if key_r >= key_l {
                    return Err(RingError::NonDecreasingRule(shown));
                }
            }
            rules.push(Rule { lhs: lhs.clone(), rhs });
        }
        for m in &spec.truncation {
            rules.push(Rule { lhs: m.clone(), rhs: Poly::zero() });
        }

        let a0 = conv(&spec.a0)?;
        let mut a0_degree = None;
        for (m, _) in a0.terms() {
            if monomial_is_odd(&odd, m) {
                return Err(RingError::BadA0);
            }
            let d = degree(m);
            if *a0_degree.get_or_insert(d) != d {
                return Err(RingError::BadA0);
            }
        }

        let mut pushforward = BTreeMap::new();
        for (m, v) in &spec.pushforward {
            let v = conv(v)?;
            let d = degree(m);
            for (t, _) in v.terms() {
                if degree(t) + spec.degree_unit != d {
                    return Err(RingError::PushforwardDegree(spec.show_monomial(m)));
                }
            }
            pushforward.insert(m.clone(), v);
        }

        let mut restriction: Vec<Poly<S>> = gens
            .iter()
            .enumerate()
            .map(|(i, g)| {
                if g.base {
                    Poly::monomial(Monomial::generator(i))
                } else {
                    Poly::zero()
                }
            })
            .collect();
        for (name, v) in &spec.restriction {
            let i = gens
                .iter()
                .position(|g| &g.name == name)
                .ok_or_else(|| RingError::UnknownGenerator(name.clone()))?;
            restriction[i] = conv(v)?;
        }

        let section = spec.section.as_ref().map(conv).transpose()?;
        let psi = spec.psi.as_ref().map(conv).transpose()?.unwrap_or_else(Poly::zero);
        // chi may need halves; drop it silently in integer mode when it does not fit.
        let chi = spec.chi.as_ref().and_then(|c| conv(c).ok());

        let fingerprint = {
            let mut h = Sha256::new();
            h.update(spec.to_text().as_bytes());
            h.update(S::MODE.name().as_bytes());
            let digest = h.finalize();
            digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
        };

        if let Some(g) = gens.iter().find(|g| g.base && g.odd) {
            return Err(RingError::Other(format!("base generator {} must be even", g.name)));
        }

        let mut ring = Ring {
            spec: spec.clone(),
            gens,
            odd,
            rules,
            max_degree: spec.max_degree,
            degree_unit: spec.degree_unit,
            a0,
            pushforward,
            restriction,
            section,
            psi,
            chi,
            formal_n,
            fingerprint,
            cache: RwLock::new(HashMap::new()),
        };
        ring.a0 = ring.reduce(&ring.a0);
        ring.psi = ring.reduce(&ring.psi);
        ring.section = ring.section.as_ref().map(|p| ring.reduce(p));
        ring.chi = ring.chi.as_ref().map(|p| ring.reduce(p));
        ring.restriction = ring.restriction.iter().map(|p| ring.reduce(p)).collect();
        for (k, rule) in ring.rules.iter().enumerate() {
            let l = ring.restrict_monomial(&rule.lhs);
            let r = ring.restrict(&rule.rhs);
            if ring.reduce(&l) != ring.reduce(&r) {
                return Err(RingError::RestrictionIncompatible(
                    ring.spec.show_monomial(&ring.rules[k].lhs),
                ));
            }
        }
        if let Some(chi) = &ring.chi {
            if chi.scaled(&S::from_i64(2)) != ring.a0 {
                return Err(RingError::InvalidChi("2*chi differs from a0".into()));
            }
        }
        Ok(Arc::new(ring))
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn mode(&self) -> ScalarMode {
        S::MODE
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn odd_flags(&self) -> &[bool] {
        &self.odd
    }

    pub fn rules(&self) -> &[Rule<S>] {
        &self.rules
    }

    /// Degree of one unit of codimension (1 for Chow, 2 for cohomology).
    pub fn degree_unit(&self) -> u32 {
        self.degree_unit
    }

    pub fn genus(&self) -> Option<u32> {
        self.spec.genus
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn formal_n_index(&self) -> usize {
        self.formal_n
    }

    pub fn formal_n(&self) -> Poly<S> {
        Poly::monomial(Monomial::generator(self.formal_n))
    }

    pub fn gen(&self, name: &str) -> Result<Poly<S>, RingError> {
        self.generator_index(name)
            .map(|i| self.reduce(&Poly::monomial(Monomial::generator(i))))
            .ok_or_else(|| RingError::UnknownGenerator(name.to_string()))
    }

    pub fn is_base_generator(&self, i: usize) -> bool {
        self.gens[i].base
    }

    pub fn a0(&self) -> &Poly<S> {
        &self.a0
    }

    /// The section class `[p0]`, if the model declares one.
    pub fn section(&self) -> Option<&Poly<S>> {
        self.section.as_ref()
    }

    /// A single fibre monomial `m` with `section = m`.
    pub fn section_monomial(&self) -> Option<Monomial> {
        let s = self.section.as_ref()?;
        let mut it = s.terms();
        let (m, c) = it.next()?;
        (it.next().is_none() && c.is_one()).then(|| m.clone())
    }

    pub fn psi(&self) -> &Poly<S> {
        &self.psi
    }

    pub fn chi(&self) -> Option<&Poly<S>> {
        self.chi.as_ref()
    }

    /// `eta = K/2 + [p0] + psi/2`; requires halves.
    pub fn eta(&self) -> Option<Poly<S>> {
        let two = S::from_i64(2);
        let mut e = self.a0.div_exact(&two)?;
        e.add_assign(self.section.as_ref()?);
        e.add_assign(&self.psi.div_exact(&two)?);
        Some(e)
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.support().map(|(i, e)| self.gens[i].degree * e as u32).sum()
    }

    pub fn monomial_is_odd(&self, m: &Monomial) -> bool {
        monomial_is_odd(&self.odd, m)
    }

    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(bool, Monomial)> {
        mul_monomials(&self.odd, a, b)
    }

    /// Degree if the polynomial is homogeneous.
    pub fn degree(&self, p: &Poly<S>) -> Option<u32> {
        let mut d = None;
        for (m, _) in p.terms() {
            let e = self.monomial_degree(m);
            if *d.get_or_insert(e) != e {
                return None;
            }
        }
        d
    }

    /// Parity if the polynomial is homogeneous in parity.
    pub fn parity(&self, p: &Poly<S>) -> Option<bool> {
        let mut d = None;
        for (m, _) in p.terms() {
            let e = self.monomial_is_odd(m);
            if *d.get_or_insert(e) != e {
                return None;
            }
        }
        d
    }

    fn first_rule(&self, m: &Monomial) -> Option<usize> {
        self.rules.iter().position(|r| r.lhs.divides(m))
    }

    fn apply_rule(&self, m: &Monomial, k: usize) -> Poly<S> {
        let rule = &self.rules[k];
        let q = rule.lhs.quotient_of(m);
        let (neg, _) = self
            .mul_monomials(&rule.lhs, &q)
            .expect("rule lhs divides a nonzero monomial");
        let mut out = Poly::zero();
        for (r, c) in rule.rhs.terms() {
            if let Some((neg2, rq)) = self.mul_monomials(r, &q) {
                out.add_term(rq, c.clone() * sign::<S>(neg ^ neg2));
            }
        }
        out
    }

    /// Normal form of a single monomial (memoized).
    pub fn reduce_monomial(&self, m: &Monomial) -> Poly<S> {
        if let Some(d) = self.max_degree {
            if self.monomial_degree(m) > d {
                return Poly::zero();
            }
        }
        if let Some(p) = self.cache.read().expect("ring cache").get(m) {
            return p.clone();
        }
        let result = match self.first_rule(m) {
            None => Poly::monomial(m.clone()),
            Some(k) => {
                let step = self.apply_rule(m, k);
                let mut out = Poly::zero();
                for (t, c) in step.terms() {
                    out.add_scaled(&self.reduce_monomial(t), c);
                }
                out
            }
        };
        self.cache
            .write()
            .expect("ring cache")
            .insert(m.clone(), result.clone());
        result
    }

    /// Reduce after applying rule `k` first at `m` (for confluence checks).
    pub fn reduce_via_rule(&self, m: &Monomial, k: usize) -> Option<Poly<S>> {
        if !self.rules[k].lhs.divides(m) {
            return None;
        }
        let step = self.apply_rule(m, k);
        Some(self.reduce(&step))
    }

    pub fn is_reduced_monomial(&self, m: &Monomial) -> bool {
        self.reduce_monomial(m) == Poly::monomial(m.clone())
    }

    pub fn reduce(&self, p: &Poly<S>) -> Poly<S> {
        let mut out = Poly::zero();
        for (m, c) in p.terms() {
            out.add_scaled(&self.reduce_monomial(m), c);
        }
        out
    }

    pub fn mul_monomial_reduced(&self, a: &Monomial, b: &Monomial) -> Poly<S> {
        match self.mul_monomials(a, b) {
            None => Poly::zero(),
            Some((neg, m)) => {
                let r = self.reduce_monomial(&m);
                if neg {
                    r.neg()
                } else {
                    r
                }
            }
        }
    }

    pub fn mul(&self, x: &Poly<S>, y: &Poly<S>) -> Poly<S> {
        let mut out = Poly::zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                let prod = self.mul_monomial_reduced(a, b);
                out.add_scaled(&prod, &(ca.clone() * cb.clone()));
            }
        }
        out
    }

    pub fn pow(&self, x: &Poly<S>, e: u32) -> Poly<S> {
        let mut acc = self.reduce(&Poly::one());
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// Split into `(fibre monomial, base coefficient)` pairs.
    pub fn split(&self, p: &Poly<S>) -> BTreeMap<Monomial, Poly<S>> {
        let mut out: BTreeMap<Monomial, Poly<S>> = BTreeMap::new();
        for (m, c) in p.terms() {
            let fiber = m.restrict(|i| !self.gens[i].base);
            let base = m.restrict(|i| self.gens[i].base);
            out.entry(fiber).or_default().add_term(base, c.clone());
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    pub fn is_base(&self, p: &Poly<S>) -> bool {
        p.terms().all(|(m, _)| m.support().all(|(i, _)| self.gens[i].base))
    }

    /// `base * fibre` as a reduced element.
    pub fn combine(&self, fiber: &Monomial, base: &Poly<S>) -> Poly<S> {
        self.mul(base, &Poly::monomial(fiber.clone()))
    }

    /// Fibre pushforward, linear over the base.
    pub fn pushforward(&self, p: &Poly<S>) -> Result<Poly<S>, RingError> {
        let mut out = Poly::zero();
        for (fiber, base) in self.split(p) {
            let v = self.pushforward_fiber(&fiber)?;
            out.add_assign(&self.mul(&base, &v));
        }
        Ok(out)
    }

    pub fn pushforward_fiber(&self, fiber: &Monomial) -> Result<Poly<S>, RingError> {
        if let Some(v) = self.pushforward.get(fiber) {
            return Ok(v.clone());
        }
        if self.monomial_degree(fiber) < self.degree_unit {
            return Ok(Poly::zero());
        }
        Err(RingError::MissingPushforward(self.show_monomial(fiber)))
    }

    /// `<x, y> = pi_*(x y)`.
    pub fn pairing(&self, x: &Poly<S>, y: &Poly<S>) -> Result<Poly<S>, RingError> {
        self.pushforward(&self.mul(x, y))
    }

    fn restrict_monomial(&self, m: &Monomial) -> Poly<S> {
        let mut acc = Poly::one();
        for (i, e) in m.support() {
            for _ in 0..e {
                acc = self.mul(&acc, &self.restriction[i]);
            }
        }
        acc
    }

    /// Restriction along the section, a ring map to the base.
    pub fn restrict(&self, p: &Poly<S>) -> Poly<S> {
        let mut out = Poly::zero();
        for (m, c) in p.terms() {
            out.add_scaled(&self.restrict_monomial(m), c);
        }
        self.reduce(&out)
    }

    /// Reduced fibre monomials of degree at most `max_degree`.
    pub fn fiber_basis(&self, max_degree: u32) -> Vec<Monomial> {
        let fiber_idx: Vec<usize> = (0..self.gens.len()).filter(|&i| !self.gens[i].base).collect();
        let mut out = Vec::new();
        fn go<S: Scalar>(
            ring: &Ring<S>,
            idx: &[usize],
            pos: usize,
            cur: &mut Vec<u16>,
            budget: u32,
            out: &mut Vec<Monomial>,
        ) {
            if pos == idx.len() {
                let m = Monomial::from_exponents(cur.clone());
                if ring.is_reduced_monomial(&m) {
                    out.push(m);
                }
                return;
            }
            let g = &ring.gens[idx[pos]];
            let max_e = if g.odd {
                1
            } else if g.degree == 0 {
                0
            } else {
                budget / g.degree
            };
            for e in 0..=max_e {
                cur[idx[pos]] = e as u16;
                go(ring, idx, pos + 1, cur, budget - e * g.degree, out);
            }
            cur[idx[pos]] = 0;
        }
        let mut cur = vec![0u16; self.gens.len()];
        go(self, &fiber_idx, 0, &mut cur, max_degree, &mut out);
        out.sort_by_key(|m| (self.monomial_degree(m), m.clone()));
        out
    }

    /// The basis used by exhaustive sweeps: all of it for finite rings,
    /// fibre degree at most 2 otherwise.
    pub fn sweep_basis(&self) -> Vec<Monomial> {
        let cap = self.spec.sweep_degree.unwrap_or(2 * self.degree_unit);
        self.fiber_basis(cap)
    }

    pub fn show_monomial(&self, m: &Monomial) -> String {
        show_monomial_with(&self.gens.iter().map(|g| g.name.as_str()).collect::<Vec<_>>(), m)
    }

    pub fn show(&self, p: &Poly<S>) -> String {
        show_poly_with(&self.gens.iter().map(|g| g.name.as_str()).collect::<Vec<_>>(), p, |m| {
            self.monomial_degree(m)
        })
    }

    pub fn elem(self: &Arc<Self>, p: Poly<S>) -> RingElem<S> {
        RingElem { ring: Arc::clone(self), poly: self.reduce(&p) }
    }

    /// Parse a polynomial in the generator names.
    pub fn parse(&self, text: &str) -> Result<Poly<S>, RingError> {
        let names: Vec<&str> = self.gens.iter().map(|g| g.name.as_str()).collect();
        let free = crate::ringspec::parse_poly(text, &names, &self.odd, 1, 1)?;
        let mut out = Poly::zero();
        for (m, c) in free {
            let s = S::from_ratio(c.numer(), c.denom())
                .ok_or_else(|| RingError::NotIntegral(c.to_string()))?;
            out.add_term(m, s);
        }
        Ok(self.reduce(&out))
    }
}

pub(crate) fn show_monomial_with(names: &[&str], m: &Monomial) -> String {
    if m.is_unit() {
        return "1".to_string();
    }
    m.support()
        .map(|(i, e)| {
            if e == 1 {
                names[i].to_string()
            } else {
                format!("{}^{}", names[i], e)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Render a scalar coefficient in front of a (possibly empty) factor.
pub fn show_term<S: Scalar>(c: &S, body: &str, first: bool) -> String {
    let (n, d) = c.to_ratio();
    let negative = n < BigInt::zero();
    let abs_n = if negative { -n } else { n };
    let mag = if d.is_one() {
        abs_n.to_string()
    } else {
        format!("{abs_n}/{d}")
    };
    let core = if body.is_empty() || body == "1" {
        mag
    } else if mag == "1" {
        body.to_string()
    } else {
        format!("{mag}*{body}")
    };
    match (first, negative) {
        (true, false) => core,
        (true, true) => format!("-{core}"),
        (false, false) => format!(" + {core}"),
        (false, true) => format!(" - {core}"),
    }
}

pub(crate) fn show_poly_with<S: Scalar>(
    names: &[&str],
    p: &Poly<S>,
    degree: impl Fn(&Monomial) -> u32,
) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<(&Monomial, &S)> = p.terms().collect();
    terms.sort_by(|a, b| (degree(b.0), b.0).cmp(&(degree(a.0), a.0)));
    let mut out = String::new();
    for (k, (m, c)) in terms.into_iter().enumerate() {
        out.push_str(&show_term(c, &show_monomial_with(names, m), k == 0));
    }
    out
}

/// An element together with its ring.
#[derive(Clone)]
pub struct RingElem<S: Scalar> {
    ring: Arc<Ring<S>>,
    poly: Poly<S>,
}

impl<S: Scalar> fmt::Debug for RingElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElem({})", self.ring.show(&self.poly))
    }
}

impl<S: Scalar> fmt::Display for RingElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.show(&self.poly))
    }
}

impl<S: Scalar> PartialEq for RingElem<S> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) && self.poly == other.poly
    }
}

impl<S: Scalar> RingElem<S> {
    pub fn ring(&self) -> &Arc<Ring<S>> {
        &self.ring
    }

    pub fn poly(&self) -> &Poly<S> {
        &self.poly
    }

    pub fn into_poly(self) -> Poly<S> {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    fn same_ring(&self, other: &Self) -> Result<(), RingError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring.fingerprint == other.ring.fingerprint {
            Ok(())
        } else {
            Err(RingError::Mismatch(
                self.ring.name().to_string(),
                other.ring.name().to_string(),
            ))
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, RingError> {
        self.same_ring(other)?;
        Ok(RingElem { ring: Arc::clone(&self.ring), poly: self.ring.mul(&self.poly, &other.poly) })
    }

    pub fn add(&self, other: &Self) -> Result<Self, RingError> {
        self.same_ring(other)?;
        Ok(RingElem { ring: Arc::clone(&self.ring), poly: self.poly.plus(&other.poly) })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, RingError> {
        self.same_ring(other)?;
        Ok(RingElem { ring: Arc::clone(&self.ring), poly: self.poly.minus(&other.poly) })
    }

    pub fn scale(&self, s: &S) -> Self {
        RingElem { ring: Arc::clone(&self.ring), poly: self.poly.scaled(s) }
    }

    pub fn pairing(&self, other: &Self) -> Result<Self, RingError> {
        self.same_ring(other)?;
        let p = self.ring.pairing(&self.poly, &other.poly)?;
        Ok(RingElem { ring: Arc::clone(&self.ring), poly: p })
    }

    pub fn pushforward(&self) -> Result<Self, RingError> {
        let p = self.ring.pushforward(&self.poly)?;
        Ok(RingElem { ring: Arc::clone(&self.ring), poly: p })
    }

    pub fn restrict(&self) -> Self {
        RingElem { ring: Arc::clone(&self.ring), poly: self.ring.restrict(&self.poly) }
    }

    pub fn degree(&self) -> Option<u32> {
        self.ring.degree(&self.poly)
    }

    pub fn is_odd(&self) -> Option<bool> {
        self.ring.parity(&self.poly)
    }
}

/// Convert a spec coefficient into `S`.
pub fn ratio_to<S: Scalar>(c: &BigRational) -> Option<S> {
    S::from_ratio(c.numer(), c.denom())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type R = Ring<BigInt>;

    #[test]
    fn cohomology_relations() {
        let r = R::curve_cohomology(2);
        let a1 = r.gen("alpha1").unwrap();
        let b1 = r.gen("beta1").unwrap();
        let pt = r.gen("pt").unwrap();
        assert_eq!(r.mul(&a1, &b1), pt);
        assert_eq!(r.mul(&b1, &a1), pt.neg());
        assert!(r.mul(&a1, &a1).is_zero());
        assert_eq!(r.pushforward(r.a0()).unwrap(), Poly::from_int(2));
        assert_eq!(r.pairing(&a1, &b1).unwrap(), Poly::from_int(1));
        assert_eq!(r.pairing(&Poly::one(), &Poly::one()).unwrap(), Poly::zero());
    }

    #[test]
    fn chow_relations() {
        let r = R::curve_chow_symbolic(2);
        let p0 = r.gen("p0").unwrap();
        let k = r.gen("K").unwrap();
        let psi = r.gen("psi").unwrap();
        assert_eq!(r.mul(&p0, &p0), r.mul(&psi, &p0).neg());
        assert_eq!(r.pushforward(&r.mul(&p0, &p0)).unwrap(), psi.neg());
        assert!(r.mul(&k.plus(&p0), &p0).is_zero());
        assert!(r.pushforward(&psi).unwrap().is_zero());
        assert_eq!(r.restrict(&k), psi);
    }

    #[test]
    fn eta_needs_rationals() {
        assert!(R::curve_chow_symbolic(2).eta().is_none());
        assert!(Ring::<BigRational>::curve_chow_symbolic(2).eta().is_some());
    }
}
