//! The deformed Hamiltonian Lie superalgebra `D(A, a0)` spanned by
//! `P_{m,k}(a) = t^m (h d/dt)^k (x) a` with `h -> a0`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::combinat::{binomial, factorial};
use crate::poly::{Monomial, Poly};
use crate::report::{self, Report};
use crate::ring::{Ring, RingError};
use crate::scalar::{sign, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("the ring has no theta characteristic (2*chi = a0)")]
    NoThetaCharacteristic,
    #[error("the L-basis needs a trivial family (psi = 0)")]
    NontrivialFamily,
}

/// A generator `P_{m,k}(a)` with `a` a reduced fibre monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PGen {
    pub m: u32,
    pub k: u32,
    pub a: Monomial,
}

impl PGen {
    pub fn new(m: u32, k: u32, a: Monomial) -> Self {
        PGen { m, k, a }
    }
}

/// `(codimension shift, weight shift)`; codimension is in ring degree units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BiDegree {
    pub codim_shift: i64,
    pub weight_shift: i64,
}

impl std::ops::Add for BiDegree {
    type Output = BiDegree;
    fn add(self, o: BiDegree) -> BiDegree {
        BiDegree {
            codim_shift: self.codim_shift + o.codim_shift,
            weight_shift: self.weight_shift + o.weight_shift,
        }
    }
}

/// A base-linear combination of generators.
#[derive(Clone)]
pub struct LieElem<S: Scalar> {
    ring: Arc<Ring<S>>,
    terms: BTreeMap<PGen, Poly<S>>,
}

impl<S: Scalar> PartialEq for LieElem<S> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<S: Scalar> fmt::Debug for LieElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieElem({self})")
    }
}

impl<S: Scalar> fmt::Display for LieElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&show_terms(&self.ring, "P", &self.terms))
    }
}

/// Render `sum coeff * Name(m,k; a)`.
pub(crate) fn show_terms<S: Scalar>(
    ring: &Ring<S>,
    name: &str,
    terms: &BTreeMap<PGen, Poly<S>>,
) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (g, c)) in terms.iter().enumerate() {
        let body = format!("{name}({},{}; {})", g.m, g.k, ring.show_monomial(&g.a));
        out.push_str(&show_scaled(ring, c, &body, idx == 0));
    }
    out
}

pub(crate) fn show_scaled<S: Scalar>(ring: &Ring<S>, c: &Poly<S>, body: &str, first: bool) -> String {
    if let Some(s) = c.as_constant() {
        return crate::ring::show_term(&s, body, first);
    }
    let sep = if first { "" } else { " + " };
    format!("{sep}({})*{body}", ring.show(c))
}

impl<S: Scalar> LieElem<S> {
    pub fn zero(ring: &Arc<Ring<S>>) -> Self {
        LieElem { ring: Arc::clone(ring), terms: BTreeMap::new() }
    }

    /// `P_{m,k}(a)` for an arbitrary ring element `a`.
    pub fn p(ring: &Arc<Ring<S>>, m: u32, k: u32, a: &Poly<S>) -> Self {
        let mut x = LieElem::zero(ring);
        let a = ring.reduce(a);
        for (fiber, base) in ring.split(&a) {
            x.add_term(PGen::new(m, k, fiber), &base);
        }
        x
    }

    pub fn gen(ring: &Arc<Ring<S>>, g: PGen) -> Self {
        let mut x = LieElem::zero(ring);
        x.add_term(g, &Poly::one());
        x
    }

    pub fn ring(&self) -> &Arc<Ring<S>> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<PGen, Poly<S>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, g: PGen, c: &Poly<S>) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(g.clone()).or_default();
        e.add_assign(c);
        if e.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn add_scaled(&mut self, other: &LieElem<S>, c: &Poly<S>) {
        for (g, d) in &other.terms {
            self.add_term(g.clone(), &self.ring.mul(c, d));
        }
    }

    pub fn plus(&self, other: &LieElem<S>) -> Self {
        let mut x = self.clone();
        x.add_scaled(other, &Poly::one());
        x
    }

    pub fn minus(&self, other: &LieElem<S>) -> Self {
        let mut x = self.clone();
        x.add_scaled(other, &Poly::from_int(-1));
        x
    }

    pub fn scaled(&self, c: &Poly<S>) -> Self {
        let mut x = LieElem::zero(&self.ring);
        x.add_scaled(self, c);
        x
    }

    /// Parity, if homogeneous.
    pub fn parity(&self) -> Option<bool> {
        let mut p = None;
        for g in self.terms.keys() {
            let q = self.ring.monomial_is_odd(&g.a);
            if *p.get_or_insert(q) != q {
                return None;
            }
        }
        p
    }

    fn same_ring(&self, other: &Self) -> Result<(), LieError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring.fingerprint() == other.ring.fingerprint() {
            Ok(())
        } else {
            Err(RingError::Mismatch(self.ring.name().into(), other.ring.name().into()).into())
        }
    }

    pub fn bracket(&self, other: &Self) -> Result<Self, LieError> {
        self.same_ring(other)?;
        Ok(bracket(&self.ring, self, other))
    }

    /// Replace every central `P_{0,0}(a)` by the scalar `pi_*(a)`.
    pub fn centralize(&self) -> Result<(Self, Poly<S>), LieError> {
        let mut rest = LieElem::zero(&self.ring);
        let mut scalar = Poly::zero();
        for (g, c) in &self.terms {
            if g.m == 0 && g.k == 0 {
                let pushed = self.ring.pushforward_fiber(&g.a)?;
                scalar.add_assign(&self.ring.mul(c, &pushed));
            } else {
                rest.add_term(g.clone(), c);
            }
        }
        Ok((rest, scalar))
    }

    pub fn bidegrees(&self) -> Vec<BiDegree> {
        self.terms
            .iter()
            .flat_map(|(g, c)| {
                let gd = bidegree(&self.ring, g);
                c.terms().map(move |(m, _)| BiDegree {
                    codim_shift: gd.codim_shift + self.ring.monomial_degree(m) as i64,
                    weight_shift: gd.weight_shift,
                })
            })
            .collect()
    }
}

pub fn bidegree<S: Scalar>(ring: &Ring<S>, g: &PGen) -> BiDegree {
    let unit = ring.degree_unit() as i64;
    BiDegree {
        codim_shift: ring.monomial_degree(&g.a) as i64 + unit * (g.m as i64 - 1),
        weight_shift: g.m as i64 - g.k as i64,
    }
}

/// Structure constant of the bracket at order `i`:
/// `(-1)^{i-1} i! (C(k,i)C(m',i) - C(m,i)C(k',i))`.
pub fn bracket_coeff(m: u32, k: u32, m2: u32, k2: u32, i: u32) -> num_bigint::BigInt {
    let c = binomial(k as u64, i as i64) * binomial(m2 as u64, i as i64)
        - binomial(m as u64, i as i64) * binomial(k2 as u64, i as i64);
    let c = c * factorial(i as u64);
    if i.is_multiple_of(2) {
        -c
    } else {
        c
    }
}

/// `[P_{m,k}(a), P_{m',k'}(a')]` as a combination of generators.
pub fn bracket_gens<S: Scalar>(ring: &Arc<Ring<S>>, x: &PGen, y: &PGen) -> LieElem<S> {
    let mut out = LieElem::zero(ring);
    let top = (x.k.min(y.m)).max(x.m.min(y.k));
    if top == 0 {
        return out;
    }
    let mut arg = ring.mul_monomial_reduced(&x.a, &y.a);
    for i in 1..=top {
        if i > 1 {
            arg = ring.mul(&arg, ring.a0());
        }
        if arg.is_zero() {
            break;
        }
        let c = bracket_coeff(x.m, x.k, y.m, y.k, i);
        if c.is_zero() {
            continue;
        }
        let (m, k) = (x.m + y.m, x.k + y.k);
        assert!(m >= i && k >= i, "bracket produced a negative index");
        let term = LieElem::p(ring, m - i, k - i, &arg);
        out.add_scaled(&term, &Poly::constant(S::from_bigint(c)));
    }
    out
}

pub fn bracket<S: Scalar>(ring: &Arc<Ring<S>>, x: &LieElem<S>, y: &LieElem<S>) -> LieElem<S> {
    let mut out = LieElem::zero(ring);
    for (gx, cx) in &x.terms {
        for (gy, cy) in &y.terms {
            let b = bracket_gens(ring, gx, gy);
            out.add_scaled(&b, &ring.mul(cx, cy));
        }
    }
    out
}

/// Memoized generator brackets for sweeps.
pub struct BracketTable<S: Scalar> {
    ring: Arc<Ring<S>>,
    cache: RwLock<HashMap<(PGen, PGen), Arc<LieElem<S>>>>,
}

impl<S: Scalar> BracketTable<S> {
    pub fn new(ring: &Arc<Ring<S>>) -> Self {
        BracketTable { ring: Arc::clone(ring), cache: RwLock::new(HashMap::new()) }
    }

    pub fn gens(&self, x: &PGen, y: &PGen) -> Arc<LieElem<S>> {
        let key = (x.clone(), y.clone());
        if let Some(v) = self.cache.read().expect("bracket cache").get(&key) {
            return Arc::clone(v);
        }
        let v = Arc::new(bracket_gens(&self.ring, x, y));
        self.cache.write().expect("bracket cache").insert(key, Arc::clone(&v));
        v
    }

    pub fn bracket(&self, x: &LieElem<S>, y: &LieElem<S>) -> LieElem<S> {
        let mut out = LieElem::zero(&self.ring);
        for (gx, cx) in &x.terms {
            for (gy, cy) in &y.terms {
                out.add_scaled(&self.gens(gx, gy), &self.ring.mul(cx, cy));
            }
        }
        out
    }
}

/// All generators `P_{m,k}(a)` with `m <= max_m`, `k <= max_k` and `a` in the
/// ring's sweep basis.
pub fn basis_gens<S: Scalar>(ring: &Ring<S>, max_m: u32, max_k: u32) -> Vec<PGen> {
    let basis = ring.sweep_basis();
    let mut out = Vec::new();
    for m in 0..=max_m {
        for k in 0..=max_k {
            for a in &basis {
                out.push(PGen::new(m, k, a.clone()));
            }
        }
    }
    out
}

fn show_gen<S: Scalar>(ring: &Ring<S>, g: &PGen) -> String {
    format!("P({},{}; {})", g.m, g.k, ring.show_monomial(&g.a))
}

/// Graded Jacobi identity on all unordered basis triples within the bounds,
/// plus super-antisymmetry on all pairs.
pub fn super_jacobi_check<S: Scalar>(ring: &Arc<Ring<S>>, max_m: u32, max_k: u32) -> Report {
    let gens = basis_gens(ring, max_m, max_k);
    let table = BracketTable::new(ring);
    let odd: Vec<bool> = gens.iter().map(|g| ring.monomial_is_odd(&g.a)).collect();
    let parts: Vec<Report> = (0..gens.len())
        .into_par_iter()
        .map(|i| {
            let mut r = Report::new("jacobi");
            let x = LieElem::gen(ring, gens[i].clone());
            for j in i..gens.len() {
                let y = LieElem::gen(ring, gens[j].clone());
                let xy = table.gens(&gens[i], &gens[j]);
                let yx = table.gens(&gens[j], &gens[i]);
                let s = sign::<S>(odd[i] && odd[j]);
                let anti = xy.plus(&yx.scaled(&Poly::constant(s)));
                r.check(
                    "super-antisymmetry",
                    || format!("x={}, y={}", show_gen(ring, &gens[i]), show_gen(ring, &gens[j])),
                    anti.is_zero(),
                    || anti.to_string(),
                    || "0".into(),
                );
                for k in j..gens.len() {
                    let z = LieElem::gen(ring, gens[k].clone());
                    let lhs = table.bracket(&x, &table.gens(&gens[j], &gens[k]));
                    let mut rhs = table.bracket(&xy, &z);
                    let xz = table.gens(&gens[i], &gens[k]);
                    let y_xz = table.bracket(&y, &xz);
                    let s = sign::<S>(odd[i] && odd[j]);
                    rhs.add_scaled(&y_xz, &Poly::constant(s));
                    r.check(
                        "super-jacobi",
                        || {
                            format!(
                                "x={}, y={}, z={}",
                                show_gen(ring, &gens[i]),
                                show_gen(ring, &gens[j]),
                                show_gen(ring, &gens[k])
                            )
                        },
                        lhs == rhs,
                        || lhs.to_string(),
                        || rhs.to_string(),
                    );
                }
            }
            r
        })
        .collect();
    report::merge("jacobi", Some(ring.fingerprint()), parts)
}

/// Linear combination in the L-basis, `L_{m,k}(a) = P_{m,k}(a) - mk P_{m-1,k-1}(chi a)`.
#[derive(Clone)]
pub struct LBasisElem<S: Scalar> {
    ring: Arc<Ring<S>>,
    terms: BTreeMap<PGen, Poly<S>>,
}

impl<S: Scalar> PartialEq for LBasisElem<S> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<S: Scalar> fmt::Debug for LBasisElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LBasisElem({self})")
    }
}

impl<S: Scalar> fmt::Display for LBasisElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&show_terms(&self.ring, "L", &self.terms))
    }
}

fn theta<S: Scalar>(ring: &Ring<S>) -> Result<Poly<S>, LieError> {
    let chi = ring.chi().ok_or(LieError::NoThetaCharacteristic)?;
    if !ring.psi().is_zero() {
        return Err(LieError::NontrivialFamily);
    }
    Ok(chi.clone())
}

impl<S: Scalar> LBasisElem<S> {
    pub fn zero(ring: &Arc<Ring<S>>) -> Self {
        LBasisElem { ring: Arc::clone(ring), terms: BTreeMap::new() }
    }

    /// `L_{m,k}(a)` for an arbitrary ring element `a`.
    pub fn l(ring: &Arc<Ring<S>>, m: u32, k: u32, a: &Poly<S>) -> Self {
        let p = LieElem::p(ring, m, k, a);
        LBasisElem { ring: Arc::clone(ring), terms: p.terms }
    }

    pub fn terms(&self) -> &BTreeMap<PGen, Poly<S>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_p(&self) -> Result<LieElem<S>, LieError> {
        let chi = theta(&self.ring)?;
        let mut out = LieElem::zero(&self.ring);
        for (g, c) in &self.terms {
            out.add_term(g.clone(), c);
            if g.m > 0 && g.k > 0 {
                let arg = self.ring.mul(&chi, &Poly::monomial(g.a.clone()));
                let corr = LieElem::p(&self.ring, g.m - 1, g.k - 1, &arg);
                let mk = S::from_i64(-((g.m * g.k) as i64));
                out.add_scaled(&corr, &self.ring.mul(c, &Poly::constant(mk)));
            }
        }
        Ok(out)
    }

    /// Inverse of [`to_p`](Self::to_p), peeling off the term of largest `m + k`.
    pub fn from_p(x: &LieElem<S>) -> Result<Self, LieError> {
        theta(&x.ring)?;
        let ring = &x.ring;
        let mut out = LBasisElem::zero(ring);
        let mut work = x.clone();
        while let Some((g, c)) = work
            .terms
            .iter()
            .max_by_key(|(g, _)| (g.m + g.k, (*g).clone()))
            .map(|(g, c)| (g.clone(), c.clone()))
        {
            let mut single = LBasisElem::zero(ring);
            single.terms.insert(g.clone(), c.clone());
            work = work.minus(&single.to_p()?);
            out.terms.insert(g, c);
        }
        Ok(out)
    }

    pub fn bracket(&self, other: &Self) -> Result<Self, LieError> {
        let b = self.to_p()?.bracket(&other.to_p()?)?;
        Self::from_p(&b)
    }
}

/// `[L_{m,k}(a), L_{m',k'}(a')] = (km' - mk') L_{m+m'-1,k+k'-1}(a a')` for
/// `m+k, m'+k' <= max_total`.
pub fn hv_check<S: Scalar>(ring: &Arc<Ring<S>>, max_total: u32) -> Result<Report, LieError> {
    theta(ring)?;
    let basis = ring.sweep_basis();
    let mut gens = Vec::new();
    for total in 0..=max_total {
        for m in 0..=total {
            for a in &basis {
                gens.push(PGen::new(m, total - m, a.clone()));
            }
        }
    }
    let parts: Vec<Result<Report, LieError>> = gens
        .par_iter()
        .map(|x| {
            let mut r = Report::new("hv");
            let lx = LBasisElem::l(ring, x.m, x.k, &Poly::monomial(x.a.clone()));
            for y in &gens {
                let ly = LBasisElem::l(ring, y.m, y.k, &Poly::monomial(y.a.clone()));
                let lhs = lx.bracket(&ly)?;
                let c = x.k as i64 * y.m as i64 - x.m as i64 * y.k as i64;
                let rhs = if c == 0 || x.m + y.m == 0 || x.k + y.k == 0 {
                    LBasisElem::zero(ring)
                } else {
                    let prod = ring.mul_monomial_reduced(&x.a, &y.a);
                    let mut l = LBasisElem::l(ring, x.m + y.m - 1, x.k + y.k - 1, &prod);
                    for v in l.terms.values_mut() {
                        *v = v.scaled(&S::from_i64(c));
                    }
                    l
                };
                r.check(
                    "hv-bracket",
                    || format!("x={}, y={}", show_gen(ring, x), show_gen(ring, y)),
                    lhs == rhs,
                    || lhs.to_string(),
                    || rhs.to_string(),
                );
            }
            Ok(r)
        })
        .collect();
    let parts = parts.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(report::merge("hv", Some(ring.fingerprint()), parts))
}

/// Heisenberg relations among `P_{1,0}(a)`, `P_{0,1}(a)` after centralization.
pub fn heisenberg_check<S: Scalar>(ring: &Arc<Ring<S>>) -> Result<Report, LieError> {
    let basis = ring.sweep_basis();
    let mut r = Report::new("heisenberg").with_ring(ring.fingerprint());
    for a in &basis {
        for b in &basis {
            let pa = Poly::monomial(a.clone());
            let pb = Poly::monomial(b.clone());
            let params = || format!("a={}, a'={}", ring.show_monomial(a), ring.show_monomial(b));
            for (name, x, y) in [
                ("[P(1,0),P(1,0)]=0", LieElem::p(ring, 1, 0, &pa), LieElem::p(ring, 1, 0, &pb)),
                ("[P(0,1),P(0,1)]=0", LieElem::p(ring, 0, 1, &pa), LieElem::p(ring, 0, 1, &pb)),
            ] {
                let v = x.bracket(&y)?;
                r.check(name, params, v.is_zero(), || v.to_string(), || "0".into());
            }
            let v = LieElem::p(ring, 0, 1, &pa).bracket(&LieElem::p(ring, 1, 0, &pb))?;
            let (rest, scalar) = v.centralize()?;
            let pairing = ring.pairing(&pa, &pb)?;
            r.check(
                "[P(0,1)(a),P(1,0)(a')]=<a,a'>",
                params,
                rest.is_zero() && scalar == pairing,
                || format!("{} + {}", rest, ring.show(&scalar)),
                || ring.show(&pairing),
            );
        }
    }
    Ok(r.finish())
}

/// `[P_{0,0}(a), y] = 0` for all basis `y` within the bound.
pub fn centrality_check<S: Scalar>(ring: &Arc<Ring<S>>, bound: u32) -> Report {
    let mut r = Report::new("centrality").with_ring(ring.fingerprint());
    let basis = ring.sweep_basis();
    for a in &basis {
        let x = PGen::new(0, 0, a.clone());
        for y in basis_gens(ring, bound, bound) {
            let v = bracket_gens(ring, &x, &y);
            r.check(
                "P(0,0) central",
                || format!("a={}, y={}", ring.show_monomial(a), show_gen(ring, &y)),
                v.is_zero(),
                || v.to_string(),
                || "0".into(),
            );
        }
    }
    r.finish()
}

/// Every generator in `[x, y]` has the summed bidegree of `x` and `y`.
pub fn bidegree_check<S: Scalar>(ring: &Arc<Ring<S>>, bound: u32) -> Report {
    let mut r = Report::new("bidegree").with_ring(ring.fingerprint());
    let gens = basis_gens(ring, bound, bound);
    for x in &gens {
        for y in &gens {
            let want = bidegree(ring, x) + bidegree(ring, y);
            let got = bracket_gens(ring, x, y).bidegrees();
            let ok = got.iter().all(|d| *d == want);
            r.check(
                "bidegree additivity",
                || format!("x={}, y={}", show_gen(ring, x), show_gen(ring, y)),
                ok,
                || format!("{got:?}"),
                || format!("{want:?}"),
            );
        }
    }
    r.finish()
}

impl<S: Scalar> LieElem<S> {
    /// Coefficient of a generator.
    pub fn coeff(&self, g: &PGen) -> Poly<S> {
        self.terms.get(g).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn is_scalar_one(c: &Poly<S>) -> bool {
        c.as_constant().map(|s| s.is_one()).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ChowOptions;
    use num_bigint::BigInt;

    #[test]
    fn spec_bracket_examples() {
        let r = Ring::<BigInt>::curve_cohomology(2);
        let one = Poly::one();
        let b = LieElem::p(&r, 2, 1, &one).bracket(&LieElem::p(&r, 0, 1, &one)).unwrap();
        assert_eq!(b, LieElem::p(&r, 1, 1, &Poly::from_int(-2)));
        let b = LieElem::p(&r, 1, 1, &one).bracket(&LieElem::p(&r, 1, 1, &one)).unwrap();
        assert!(b.is_zero());
        let b = LieElem::p(&r, 0, 1, &one).bracket(&LieElem::p(&r, 1, 0, &one)).unwrap();
        assert_eq!(b, LieElem::p(&r, 0, 0, &one));
    }

    #[test]
    fn centralize_uses_pushforward() {
        let r = Ring::<BigInt>::curve_cohomology(2);
        let pt = r.gen("pt").unwrap();
        let (rest, s) = LieElem::p(&r, 0, 0, &pt).centralize().unwrap();
        assert!(rest.is_zero());
        assert_eq!(s, Poly::one());
        let (_, s) = LieElem::p(&r, 0, 0, &Poly::one()).centralize().unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn l_basis_round_trip_and_example() {
        let r = Ring::<num_rational::BigRational>::curve_chow(ChowOptions {
            point_base: true,
            ..ChowOptions::new(2)
        });
        let one = Poly::one();
        let x = LBasisElem::l(&r, 1, 1, &one);
        let y = LBasisElem::l(&r, 2, 0, &one);
        let b = x.bracket(&y).unwrap();
        let mut want = LBasisElem::l(&r, 2, 0, &one);
        for v in want.terms.values_mut() {
            *v = v.scaled(&num_rational::BigRational::from_integer(2.into()));
        }
        assert_eq!(b, want);
        let p = LieElem::p(&r, 3, 2, &r.gen("K").unwrap());
        assert_eq!(LBasisElem::from_p(&p).unwrap().to_p().unwrap(), p);
    }

    #[test]
    fn l_basis_requires_theta() {
        let r = Ring::<BigInt>::curve_chow_symbolic(2);
        let x = LBasisElem::l(&r, 1, 1, &Poly::one());
        assert!(x.to_p().is_err());
    }
}
