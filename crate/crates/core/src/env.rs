//! Universal enveloping algebra of `D(A, a0)` and its divided-power
//! extensions, computed by rewriting words to a normal form.
//!
//! A word is a sequence of [`EnvGen`] letters: ordinary generators
//! `P_{m,k}(a)` and divided-power towers `P_{n,0}(1)^[d]` (rows) or
//! `P_{0,n}(1)^[d]` (columns). Each [`Flavor`] fixes which towers exist and
//! where they sit in a normal word:
//!
//! * `Plain`: only generators, sorted.
//! * `Row`: rows leftmost, then sorted generators.
//! * `Col`: sorted generators, then columns rightmost.
//! * `Heisenberg`: rows and columns with `n = 1` only, `P_{0,0}(a)` replaced
//!   by the scalar `pi_*(a)`, and rows commuting with columns.
//!
//! Every rewrite step strictly decreases a per-flavor measure; a step that
//! does not aborts with a panic naming the offending word.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::combinat::{binomial, composition_coeff, factorial};
use crate::liealg::{show_scaled, BracketTable, LieElem, PGen};
use crate::poly::{Monomial, Poly};
use crate::report::Report;
use crate::ring::{Ring, RingError};
use crate::scalar::{sign, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnvError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("{0} towers are not available in the {1} flavor")]
    TowerNotAllowed(&'static str, &'static str),
    #[error("elements live in different algebras")]
    Mismatch,
    #[error("the ring has no single-monomial section class")]
    NoSection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    Plain,
    Row,
    Col,
    Heisenberg,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Plain => "plain",
            Flavor::Row => "row",
            Flavor::Col => "column",
            Flavor::Heisenberg => "heisenberg",
        }
    }

    fn has_rows(self) -> bool {
        matches!(self, Flavor::Row | Flavor::Heisenberg)
    }

    fn has_cols(self) -> bool {
        matches!(self, Flavor::Col | Flavor::Heisenberg)
    }

    fn max_tower(self) -> u32 {
        if self == Flavor::Heisenberg {
            1
        } else {
            u32::MAX
        }
    }
}

/// One letter of a word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EnvGen {
    /// `P_{n,0}(1)^[d]`
    Row { n: u32, d: u32 },
    P(PGen),
    /// `P_{0,n}(1)^[d]`
    Col { n: u32, d: u32 },
}

pub type Word = Vec<EnvGen>;
type Terms<S> = BTreeMap<Word, Poly<S>>;

/// Position of a letter in the normal order; towers ignore their height.
fn order_key(g: &EnvGen) -> (u8, Option<&PGen>, u32) {
    match g {
        EnvGen::Row { n, .. } => (0, None, *n),
        EnvGen::P(p) => (1, Some(p), 0),
        EnvGen::Col { n, .. } => (2, None, *n),
    }
}

/// The algebra: a ring, a flavor and the rewriting caches.
pub struct Env<S: Scalar> {
    ring: Arc<Ring<S>>,
    flavor: Flavor,
    table: BracketTable<S>,
    cache: RwLock<HashMap<Word, Arc<Terms<S>>>>,
}

enum Letter<S: Scalar> {
    Gen(EnvGen),
    Scalar(Poly<S>),
}

impl<S: Scalar> Env<S> {
    pub fn new(ring: &Arc<Ring<S>>, flavor: Flavor) -> Arc<Self> {
        Arc::new(Env {
            ring: Arc::clone(ring),
            flavor,
            table: BracketTable::new(ring),
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn ring(&self) -> &Arc<Ring<S>> {
        &self.ring
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// Canonical letter for a generator in this flavor.
    fn letter(&self, g: PGen) -> Letter<S> {
        let unit = g.a.is_unit();
        let max = self.flavor.max_tower();
        if self.flavor.has_rows() && unit && g.k == 0 && g.m >= 1 && g.m <= max {
            return Letter::Gen(EnvGen::Row { n: g.m, d: 1 });
        }
        if self.flavor.has_cols() && unit && g.m == 0 && g.k >= 1 && g.k <= max {
            return Letter::Gen(EnvGen::Col { n: g.k, d: 1 });
        }
        if self.flavor == Flavor::Heisenberg && g.m == 0 && g.k == 0 {
            let s = self
                .ring
                .pushforward_fiber(&g.a)
                .expect("the Heisenberg flavor needs pi_* on every fibre class");
            return Letter::Scalar(s);
        }
        Letter::Gen(EnvGen::P(g))
    }

    fn check_letter(&self, g: &EnvGen) -> Result<(), EnvError> {
        let name = self.flavor.name();
        match g {
            EnvGen::Row { n, .. } if !self.flavor.has_rows() || *n > self.flavor.max_tower() || *n == 0 => {
                Err(EnvError::TowerNotAllowed("row", name))
            }
            EnvGen::Col { n, .. } if !self.flavor.has_cols() || *n > self.flavor.max_tower() || *n == 0 => {
                Err(EnvError::TowerNotAllowed("column", name))
            }
            _ => Ok(()),
        }
    }

    /// Turn raw letters into a canonical word and a scalar factor.
    fn canonical(&self, letters: impl IntoIterator<Item = EnvGen>) -> (Poly<S>, Word) {
        let mut coeff = Poly::one();
        let mut w = Vec::new();
        for g in letters {
            match g {
                EnvGen::Row { d: 0, .. } | EnvGen::Col { d: 0, .. } => {}
                EnvGen::P(p) => match self.letter(p) {
                    Letter::Gen(l) => w.push(l),
                    Letter::Scalar(s) => coeff = self.ring.mul(&coeff, &s),
                },
                other => w.push(other),
            }
        }
        (coeff, w)
    }

    fn weight(&self, w: &[EnvGen]) -> u64 {
        w.iter()
            .map(|g| match g {
                EnvGen::P(p) => match self.flavor {
                    Flavor::Plain | Flavor::Heisenberg => (p.m + p.k) as u64,
                    Flavor::Row => p.k as u64,
                    Flavor::Col => p.m as u64,
                },
                _ => 0,
            })
            .sum()
    }

    fn measure(&self, w: &[EnvGen]) -> (u64, usize, usize) {
        let mut inv = 0;
        for p in 0..w.len() {
            for q in p + 1..w.len() {
                if order_key(&w[p]) > order_key(&w[q]) {
                    inv += 1;
                }
            }
        }
        (self.weight(w), inv, w.len())
    }

    /// Positions where adjacent letters are out of normal order.
    fn violations(&self, w: &[EnvGen]) -> Vec<usize> {
        (0..w.len().saturating_sub(1))
            .filter(|&i| self.pair_is_bad(&w[i], &w[i + 1]))
            .collect()
    }

    fn pair_is_bad(&self, a: &EnvGen, b: &EnvGen) -> bool {
        match order_key(a).cmp(&order_key(b)) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => match a {
                EnvGen::P(p) => self.ring.monomial_is_odd(&p.a),
                _ => true,
            },
        }
    }

    /// Replacement for the adjacent pair `a b`, as raw letter sequences.
    fn rewrite_pair(&self, a: &EnvGen, b: &EnvGen) -> Vec<(Poly<S>, Word)> {
        let ring = &self.ring;
        match (a, b) {
            (EnvGen::Row { n: n1, d: d1 }, EnvGen::Row { n: n2, d: d2 })
            | (EnvGen::Col { n: n1, d: d1 }, EnvGen::Col { n: n2, d: d2 }) => {
                let same = |n, d| match a {
                    EnvGen::Row { .. } => EnvGen::Row { n, d },
                    _ => EnvGen::Col { n, d },
                };
                if n1 == n2 {
                    let c = binomial((d1 + d2) as u64, *d1 as i64);
                    vec![(Poly::constant(S::from_bigint(c)), vec![same(*n1, d1 + d2)])]
                } else {
                    vec![(Poly::one(), vec![b.clone(), a.clone()])]
                }
            }
            (EnvGen::Col { .. }, EnvGen::Row { .. }) => vec![(Poly::one(), vec![b.clone(), a.clone()])],
            (EnvGen::P(x), EnvGen::Row { n, d }) => self.row_relation(x, *n, *d),
            (EnvGen::Col { n, d }, EnvGen::P(x)) => self.col_relation(*n, *d, x),
            (EnvGen::P(y), EnvGen::P(x)) => {
                if y == x {
                    // odd and repeated: x^2 = [x,x]/2 and the bracket vanishes
                    debug_assert!(self.table.gens(x, x).is_zero());
                    return Vec::new();
                }
                let odd = ring.monomial_is_odd(&x.a) && ring.monomial_is_odd(&y.a);
                let mut out = vec![(Poly::constant(sign::<S>(odd)), vec![b.clone(), a.clone()])];
                for (g, c) in self.table.gens(y, x).terms() {
                    out.push((c.clone(), vec![EnvGen::P(g.clone())]));
                }
                out
            }
            _ => unreachable!("pair is already ordered"),
        }
    }

    /// `P_{m,k}(a) P_{n,0}(1)^[d]` with the tower moved left.
    fn row_relation(&self, x: &PGen, n: u32, d: u32) -> Vec<(Poly<S>, Word)> {
        let mut out = Vec::new();
        for i in 0..=x.k {
            for j in 0..=i.min(d) {
                let a = composition_coeff(j, i, n);
                if a.is_zero() {
                    continue;
                }
                let c = sign_int(i - j) * factorial(i as u64) / factorial(j as u64)
                    * binomial(x.k as u64, i as i64)
                    * a;
                if c.is_zero() {
                    continue;
                }
                let m = x.m + n * j - i;
                let arg = self.times_a0_power(&x.a, i - j);
                let lie = LieElem::p(&self.ring, m, x.k - i, &arg);
                for (g, cg) in lie.terms() {
                    let w = vec![EnvGen::Row { n, d: d - j }, EnvGen::P(g.clone())];
                    out.push((cg.scaled(&S::from_bigint(c.clone())), w));
                }
            }
        }
        out
    }

    /// `P_{0,n}(1)^[d] P_{m,k}(a)` with the tower moved right.
    fn col_relation(&self, n: u32, d: u32, x: &PGen) -> Vec<(Poly<S>, Word)> {
        let mut out = Vec::new();
        for i in 0..=x.m {
            for j in 0..=i.min(d) {
                let a = composition_coeff(j, i, n);
                if a.is_zero() {
                    continue;
                }
                let c = sign_int(i - j) * factorial(i as u64) / factorial(j as u64)
                    * binomial(x.m as u64, i as i64)
                    * a;
                if c.is_zero() {
                    continue;
                }
                let k = x.k + n * j - i;
                let arg = self.times_a0_power(&x.a, i - j);
                let lie = LieElem::p(&self.ring, x.m - i, k, &arg);
                for (g, cg) in lie.terms() {
                    let w = vec![EnvGen::P(g.clone()), EnvGen::Col { n, d: d - j }];
                    out.push((cg.scaled(&S::from_bigint(c.clone())), w));
                }
            }
        }
        out
    }

    fn times_a0_power(&self, a: &Monomial, e: u32) -> Poly<S> {
        let base = Poly::monomial(a.clone());
        self.ring.mul(&base, &self.ring.pow(self.ring.a0(), e))
    }

    /// Children of `w` after rewriting at position `i`.
    fn step(&self, w: &[EnvGen], i: usize) -> Vec<(Poly<S>, Word)> {
        let parent = self.measure(w);
        let mut out = Vec::new();
        for (c, mid) in self.rewrite_pair(&w[i], &w[i + 1]) {
            let raw = w[..i].iter().cloned().chain(mid).chain(w[i + 2..].iter().cloned());
            let (s, child) = self.canonical(raw);
            let c = self.ring.mul(&c, &s);
            if c.is_zero() {
                continue;
            }
            let m = self.measure(&child);
            assert!(
                m < parent,
                "rewriting did not decrease the measure: {} -> {}",
                self.show_word(w),
                self.show_word(&child)
            );
            out.push((c, child));
        }
        out
    }

    /// Normal form of a canonical word, rewriting the leftmost violation.
    fn normal_form(&self, w: &[EnvGen]) -> Arc<Terms<S>> {
        if let Some(v) = self.cache.read().expect("env cache").get(w) {
            return Arc::clone(v);
        }
        let mut out = Terms::new();
        match self.violations(w).first() {
            None => {
                out.insert(w.to_vec(), Poly::one());
            }
            Some(&i) => {
                for (c, child) in self.step(w, i) {
                    let nf = self.normal_form(&child);
                    add_scaled_terms(&self.ring, &mut out, &nf, &c);
                }
            }
        }
        let out = Arc::new(out);
        self.cache.write().expect("env cache").insert(w.to_vec(), Arc::clone(&out));
        out
    }

    /// Normal form reached by rewriting at randomly chosen positions.
    fn random_normal_form(&self, w: &[EnvGen], rng: &mut ChaCha8Rng) -> Terms<S> {
        let bad = self.violations(w);
        let mut out = Terms::new();
        if bad.is_empty() {
            out.insert(w.to_vec(), Poly::one());
            return out;
        }
        let i = bad[rng.gen_range(0..bad.len())];
        for (c, child) in self.step(w, i) {
            let nf = self.random_normal_form(&child, rng);
            add_scaled_terms(&self.ring, &mut out, &nf, &c);
        }
        out
    }

    pub fn is_normal(&self, w: &[EnvGen]) -> bool {
        let (c, cw) = self.canonical(w.iter().cloned());
        c.as_constant().map(|s| s.is_one()).unwrap_or(false) && cw == w && self.violations(w).is_empty()
    }

    pub fn show_word(&self, w: &[EnvGen]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter()
            .map(|g| match g {
                EnvGen::Row { n, d } => format!("P({n},0; 1)^[{d}]"),
                EnvGen::Col { n, d } => format!("P(0,{n}; 1)^[{d}]"),
                EnvGen::P(p) => format!("P({},{}; {})", p.m, p.k, self.ring.show_monomial(&p.a)),
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

fn sign_int(e: u32) -> num_bigint::BigInt {
    if e.is_multiple_of(2) {
        1.into()
    } else {
        (-1).into()
    }
}

fn add_scaled_terms<S: Scalar>(ring: &Ring<S>, out: &mut Terms<S>, add: &Terms<S>, c: &Poly<S>) {
    for (w, cw) in add {
        let v = ring.mul(cw, c);
        if v.is_zero() {
            continue;
        }
        let e = out.entry(w.clone()).or_insert_with(Poly::zero);
        e.add_assign(&v);
        if e.is_zero() {
            out.remove(w);
        }
    }
}

/// An element of the algebra in normal form.
#[derive(Clone)]
pub struct EnvElem<S: Scalar> {
    env: Arc<Env<S>>,
    terms: Terms<S>,
}

impl<S: Scalar> PartialEq for EnvElem<S> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<S: Scalar> fmt::Debug for EnvElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EnvElem({self})")
    }
}

impl<S: Scalar> fmt::Display for EnvElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let ring = &self.env.ring;
        for (idx, (w, c)) in self.terms.iter().enumerate() {
            f.write_str(&show_scaled(ring, c, &self.env.show_word(w), idx == 0))?;
        }
        Ok(())
    }
}

impl<S: Scalar> EnvElem<S> {
    pub fn zero(env: &Arc<Env<S>>) -> Self {
        EnvElem { env: Arc::clone(env), terms: Terms::new() }
    }

    pub fn scalar(env: &Arc<Env<S>>, c: &Poly<S>) -> Self {
        let mut x = EnvElem::zero(env);
        let c = env.ring.reduce(c);
        if !c.is_zero() {
            x.terms.insert(Vec::new(), c);
        }
        x
    }

    pub fn one(env: &Arc<Env<S>>) -> Self {
        EnvElem::scalar(env, &Poly::one())
    }

    /// Normal form of an arbitrary word.
    pub fn word(env: &Arc<Env<S>>, letters: &[EnvGen]) -> Result<Self, EnvError> {
        for g in letters {
            env.check_letter(g)?;
        }
        let (c, w) = env.canonical(letters.iter().cloned());
        let mut x = EnvElem::zero(env);
        add_scaled_terms(&env.ring, &mut x.terms, &env.normal_form(&w), &c);
        Ok(x)
    }

    pub fn letter(env: &Arc<Env<S>>, g: EnvGen) -> Result<Self, EnvError> {
        EnvElem::word(env, &[g])
    }

    /// `P_{m,k}(a)` for an arbitrary ring element `a`.
    pub fn p(env: &Arc<Env<S>>, m: u32, k: u32, a: &Poly<S>) -> Self {
        EnvElem::from_lie(env, &LieElem::p(&env.ring, m, k, a))
    }

    pub fn from_lie(env: &Arc<Env<S>>, x: &LieElem<S>) -> Self {
        let mut out = EnvElem::zero(env);
        for (g, c) in x.terms() {
            let (s, w) = env.canonical([EnvGen::P(g.clone())]);
            add_scaled_terms(&env.ring, &mut out.terms, &env.normal_form(&w), &env.ring.mul(c, &s));
        }
        out
    }

    /// The same element computed with a random rewriting order.
    pub fn random_word(env: &Arc<Env<S>>, letters: &[EnvGen], rng: &mut ChaCha8Rng) -> Self {
        let (c, w) = env.canonical(letters.iter().cloned());
        let mut x = EnvElem::zero(env);
        add_scaled_terms(&env.ring, &mut x.terms, &env.random_normal_form(&w, rng), &c);
        x
    }

    pub fn env(&self) -> &Arc<Env<S>> {
        &self.env
    }

    pub fn terms(&self) -> &BTreeMap<Word, Poly<S>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same(&self, other: &Self) -> Result<(), EnvError> {
        if Arc::ptr_eq(&self.env, &other.env) {
            Ok(())
        } else {
            Err(EnvError::Mismatch)
        }
    }

    pub fn plus(&self, other: &Self) -> Result<Self, EnvError> {
        self.same(other)?;
        let mut x = self.clone();
        add_scaled_terms(&self.env.ring, &mut x.terms, &other.terms, &Poly::one());
        Ok(x)
    }

    pub fn minus(&self, other: &Self) -> Result<Self, EnvError> {
        self.plus(&other.scaled(&Poly::from_int(-1)))
    }

    pub fn scaled(&self, c: &Poly<S>) -> Self {
        let mut x = EnvElem::zero(&self.env);
        add_scaled_terms(&self.env.ring, &mut x.terms, &self.terms, c);
        x
    }

    pub fn mul(&self, other: &Self) -> Result<Self, EnvError> {
        self.same(other)?;
        let env = &self.env;
        let mut out = EnvElem::zero(env);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let (s, w) = env.canonical(w1.iter().chain(w2.iter()).cloned());
                let c = env.ring.mul(&env.ring.mul(c1, c2), &s);
                add_scaled_terms(&env.ring, &mut out.terms, &env.normal_form(&w), &c);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self, EnvError> {
        let mut acc = EnvElem::one(&self.env);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `xy - yx`; both arguments are assumed even.
    pub fn commutator(&self, other: &Self) -> Result<Self, EnvError> {
        self.mul(other)?.minus(&other.mul(self)?)
    }

    /// Rewrite towers as ordinary powers, `P^[d] = P^d / d!`, in `target`.
    /// Fails when a coefficient does not divide exactly.
    pub fn expand_towers(&self, target: &Arc<Env<S>>) -> Option<Self> {
        let mut out = EnvElem::zero(target);
        for (w, c) in &self.terms {
            let mut letters = Vec::new();
            let mut denom = num_bigint::BigInt::from(1);
            for g in w {
                match g {
                    EnvGen::Row { n, d } => {
                        denom *= factorial(*d as u64);
                        letters.extend((0..*d).map(|_| EnvGen::P(PGen::new(*n, 0, Monomial::unit()))));
                    }
                    EnvGen::Col { n, d } => {
                        denom *= factorial(*d as u64);
                        letters.extend((0..*d).map(|_| EnvGen::P(PGen::new(0, *n, Monomial::unit()))));
                    }
                    g => letters.push(g.clone()),
                }
            }
            let c = c.div_exact(&S::from_bigint(denom))?;
            let x = EnvElem::word(target, &letters).ok()?;
            out = out.plus(&x.scaled(&c)).ok()?;
        }
        Some(out)
    }
}

/// Right side of the row relation: `sum_{j<=i} (-1)^{i-j} (i!/j!) C(k,i)
/// A_j(i,n) P_{n,0}(1)^[d-j] P_{m+nj-i,k-i}(a a0^{i-j})`, with ordinary powers
/// and `d!/(d-j)!` weights when `divided` is false.
pub fn row_expansion<S: Scalar>(env: &Arc<Env<S>>, x: &PGen, n: u32, d: u32, divided: bool) -> EnvElem<S> {
    let mut out = EnvElem::zero(env);
    for i in 0..=x.k {
        for j in 0..=i.min(d) {
            let a = composition_coeff(j, i, n);
            let mut c = sign_int(i - j) * factorial(i as u64) * binomial(x.k as u64, i as i64) * a;
            if c.is_zero() {
                continue;
            }
            let tower: Vec<EnvGen> = if divided {
                c /= factorial(j as u64);
                vec![EnvGen::Row { n, d: d - j }]
            } else {
                c = c * factorial(d as u64) / (factorial(j as u64) * factorial((d - j) as u64));
                (0..d - j).map(|_| EnvGen::P(PGen::new(n, 0, Monomial::unit()))).collect()
            };
            let t = EnvElem::word(env, &tower).expect("tower letters fit the flavor");
            let arg = env.times_a0_power(&x.a, i - j);
            let p = EnvElem::p(env, x.m + n * j - i, x.k - i, &arg);
            let term = t.mul(&p).expect("same algebra");
            out = out.plus(&term.scaled(&Poly::constant(S::from_bigint(c)))).expect("same algebra");
        }
    }
    out
}

/// Column analogue of [`row_expansion`]: the expansion of
/// `P_{0,n}(1)^[d] P_{m,k}(a)` with the tower on the right.
pub fn col_expansion<S: Scalar>(env: &Arc<Env<S>>, n: u32, d: u32, x: &PGen, divided: bool) -> EnvElem<S> {
    let mut out = EnvElem::zero(env);
    for i in 0..=x.m {
        for j in 0..=i.min(d) {
            let a = composition_coeff(j, i, n);
            let mut c = sign_int(i - j) * factorial(i as u64) * binomial(x.m as u64, i as i64) * a;
            if c.is_zero() {
                continue;
            }
            let tower: Vec<EnvGen> = if divided {
                c /= factorial(j as u64);
                vec![EnvGen::Col { n, d: d - j }]
            } else {
                c = c * factorial(d as u64) / (factorial(j as u64) * factorial((d - j) as u64));
                (0..d - j).map(|_| EnvGen::P(PGen::new(0, n, Monomial::unit()))).collect()
            };
            let t = EnvElem::word(env, &tower).expect("tower letters fit the flavor");
            let arg = env.times_a0_power(&x.a, i - j);
            let p = EnvElem::p(env, x.m - i, x.k + n * j - i, &arg);
            let term = p.mul(&t).expect("same algebra");
            out = out.plus(&term.scaled(&Poly::constant(S::from_bigint(c)))).expect("same algebra");
        }
    }
    out
}

/// Basis generators and towers used by the sweeps.
pub fn sweep_letters<S: Scalar>(env: &Env<S>, max_index: u32, max_height: u32) -> Vec<EnvGen> {
    let mut out = Vec::new();
    for g in crate::liealg::basis_gens(&env.ring, max_index, max_index) {
        if let Letter::Gen(EnvGen::P(p)) = env.letter(g) {
            out.push(EnvGen::P(p));
        }
    }
    let max_n = max_index.min(env.flavor.max_tower());
    for n in 1..=max_n {
        for d in 1..=max_height {
            if env.flavor.has_rows() {
                out.push(EnvGen::Row { n, d });
            }
            if env.flavor.has_cols() {
                out.push(EnvGen::Col { n, d });
            }
        }
    }
    out
}

/// Deterministic and random rewriting orders agree on random words.
pub fn confluence_check<S: Scalar>(
    env: &Arc<Env<S>>,
    trials: usize,
    max_len: usize,
    max_index: u32,
    seed: u64,
) -> Report {
    let mut r = Report::new("confluence").with_ring(env.ring.fingerprint());
    r.detail("flavor", env.flavor.name().into());
    let letters = sweep_letters(env, max_index, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let len = rng.gen_range(1..=max_len);
        let w: Word = (0..len).map(|_| letters[rng.gen_range(0..letters.len())].clone()).collect();
        let det = EnvElem::word(env, &w).expect("sweep letters fit the flavor");
        let rnd = EnvElem::random_word(env, &w, &mut rng);
        let normal = det.terms.keys().all(|k| env.is_normal(k));
        r.check(
            "rewriting order independence",
            || format!("word={}", env.show_word(&w)),
            det == rnd && normal,
            || det.to_string(),
            || rnd.to_string(),
        );
    }
    r.finish()
}

/// `yx = (-1)^{|x||y|} xy + [y,x]` for every pair of sweep generators, in
/// whichever order the normal form does not already hold.
pub fn straightening_check<S: Scalar>(env: &Arc<Env<S>>, max_index: u32) -> Report {
    let mut r = Report::new("straightening").with_ring(env.ring.fingerprint());
    let ring = &env.ring;
    let gens = crate::liealg::basis_gens(ring, max_index, max_index);
    for x in &gens {
        for y in &gens {
            let ex = EnvElem::from_lie(env, &LieElem::gen(ring, x.clone()));
            let ey = EnvElem::from_lie(env, &LieElem::gen(ring, y.clone()));
            let odd = ring.monomial_is_odd(&x.a) && ring.monomial_is_odd(&y.a);
            let lhs = ey.mul(&ex).unwrap();
            let b = EnvElem::from_lie(env, &env.table.gens(y, x));
            let rhs = ex.mul(&ey).unwrap().scaled(&Poly::constant(sign::<S>(odd))).plus(&b).unwrap();
            let show = |g: &PGen| format!("P({},{}; {})", g.m, g.k, ring.show_monomial(&g.a));
            r.check(
                "graded commutator is the bracket",
                || format!("x={}, y={}", show(x), show(y)),
                lhs == rhs,
                || lhs.to_string(),
                || rhs.to_string(),
            );
        }
    }
    r.finish()
}

/// `x^d y = sum_i C(d,i) (ad x)^i(y) x^{d-i}` and
/// `y x^d = sum_i C(d,i) x^{d-i} (-ad x)^i(y)` for even `x`.
pub fn power_commutation_check<S: Scalar>(env: &Arc<Env<S>>, max_index: u32, max_power: u32) -> Report {
    let mut r = Report::new("power-commutation").with_ring(env.ring.fingerprint());
    let ring = &env.ring;
    let gens = crate::liealg::basis_gens(ring, max_index, max_index);
    let show = |g: &PGen| format!("P({},{}; {})", g.m, g.k, ring.show_monomial(&g.a));
    for x in gens.iter().filter(|g| !ring.monomial_is_odd(&g.a)) {
        let lx = LieElem::gen(ring, x.clone());
        let ex = EnvElem::from_lie(env, &lx);
        for y in &gens {
            let ly = LieElem::gen(ring, y.clone());
            let ey = EnvElem::from_lie(env, &ly);
            // (ad x)^i (y) for i = 0..=max_power
            let mut ads = vec![ly.clone()];
            for _ in 0..max_power {
                let next = env.table.bracket(&lx, ads.last().unwrap());
                ads.push(next);
            }
            for d in 1..=max_power {
                let xd = ex.pow(d).unwrap();
                let left = xd.mul(&ey).unwrap();
                let right = ey.mul(&xd).unwrap();
                let mut want_left = EnvElem::zero(env);
                let mut want_right = EnvElem::zero(env);
                for i in 0..=d {
                    let c = Poly::constant(S::from_bigint(binomial(d as u64, i as i64)));
                    let ad = EnvElem::from_lie(env, &ads[i as usize]);
                    let rest = ex.pow(d - i).unwrap();
                    want_left = want_left.plus(&ad.mul(&rest).unwrap().scaled(&c)).unwrap();
                    let s = Poly::constant(sign::<S>(i % 2 == 1)).scaled(&S::from_bigint(binomial(d as u64, i as i64)));
                    want_right = want_right.plus(&rest.mul(&ad).unwrap().scaled(&s)).unwrap();
                }
                let params = || format!("x={}, y={}, d={d}", show(x), show(y));
                r.check("x^d y expansion", params, left == want_left, || left.to_string(), || want_left.to_string());
                r.check("y x^d expansion", params, right == want_right, || right.to_string(), || want_right.to_string());
            }
        }
    }
    r.finish()
}

/// The tower relations: `P^[d1] P^[d2] = C(d1+d2,d1) P^[d1+d2]`,
/// `d! P^[d] = P^d`, and the divided commutation rule against its ordinary
/// counterpart computed by straightening without towers.
pub fn divided_check<S: Scalar>(ring: &Arc<Ring<S>>, max_index: u32, max_height: u32) -> Report {
    let mut r = Report::new("divided").with_ring(ring.fingerprint());
    let plain = Env::new(ring, Flavor::Plain);
    for flavor in [Flavor::Row, Flavor::Col] {
        let env = Env::new(ring, flavor);
        for n in 1..=max_index {
            let tower = |d| match flavor {
                Flavor::Row => EnvGen::Row { n, d },
                _ => EnvGen::Col { n, d },
            };
            let single = match flavor {
                Flavor::Row => PGen::new(n, 0, Monomial::unit()),
                _ => PGen::new(0, n, Monomial::unit()),
            };
            for d1 in 0..=max_height {
                let p = EnvElem::p(&env, single.m, single.k, &Poly::one()).pow(d1).unwrap();
                let t = EnvElem::letter(&env, tower(d1)).unwrap();
                let want = t.scaled(&Poly::constant(S::from_bigint(factorial(d1 as u64))));
                r.check(
                    "d! tower = power",
                    || format!("flavor={}, n={n}, d={d1}", flavor.name()),
                    p == want,
                    || p.to_string(),
                    || want.to_string(),
                );
                for d2 in 0..=max_height {
                    let lhs = EnvElem::word(&env, &[tower(d1), tower(d2)]).unwrap();
                    let c = binomial((d1 + d2) as u64, d1 as i64);
                    let rhs = EnvElem::letter(&env, tower(d1 + d2)).unwrap().scaled(&Poly::constant(S::from_bigint(c)));
                    r.check(
                        "tower product",
                        || format!("flavor={}, n={n}, d1={d1}, d2={d2}", flavor.name()),
                        lhs == rhs,
                        || lhs.to_string(),
                        || rhs.to_string(),
                    );
                }
            }
        }
        for x in crate::liealg::basis_gens(ring, max_index, max_index) {
            for n in 1..=max_index {
                for d in 1..=max_height {
                    divided_commute_into(&mut r, &env, &plain, &x, n, d);
                }
            }
        }
    }
    r.finish()
}

/// One instance of the divided commutation rule, checked two ways: the
/// rewriting result against the closed expansion, and `d!` times it against
/// the ordinary-power computation in the plain algebra.
pub fn divided_commute_into<S: Scalar>(
    r: &mut Report,
    env: &Arc<Env<S>>,
    plain: &Arc<Env<S>>,
    x: &PGen,
    n: u32,
    d: u32,
) {
    let ring = &env.ring;
    let fl = env.flavor;
    let params = || {
        format!(
            "flavor={}, x=P({},{}; {}), n={n}, d={d}",
            fl.name(),
            x.m,
            x.k,
            ring.show_monomial(&x.a)
        )
    };
    let xe = EnvElem::from_lie(env, &LieElem::gen(ring, x.clone()));
    let (got, closed) = match fl {
        Flavor::Row => {
            let t = EnvElem::letter(env, EnvGen::Row { n, d }).unwrap();
            (xe.mul(&t).unwrap(), row_expansion(env, x, n, d, true))
        }
        _ => {
            let t = EnvElem::letter(env, EnvGen::Col { n, d }).unwrap();
            (t.mul(&xe).unwrap(), col_expansion(env, n, d, x, true))
        }
    };
    r.check("divided commutation closed form", params, got == closed, || got.to_string(), || closed.to_string());

    let scaled = got.scaled(&Poly::constant(S::from_bigint(factorial(d as u64))));
    let expanded = scaled.expand_towers(plain);
    let px = EnvElem::from_lie(plain, &LieElem::gen(ring, x.clone()));
    let (ordinary, closed_ordinary) = match fl {
        Flavor::Row => {
            let p = EnvElem::p(plain, n, 0, &Poly::one()).pow(d).unwrap();
            (px.mul(&p).unwrap(), row_expansion(plain, x, n, d, false))
        }
        _ => {
            let p = EnvElem::p(plain, 0, n, &Poly::one()).pow(d).unwrap();
            (p.mul(&px).unwrap(), col_expansion(plain, n, d, x, false))
        }
    };
    r.check(
        "ordinary power commutation closed form",
        params,
        ordinary == closed_ordinary,
        || ordinary.to_string(),
        || closed_ordinary.to_string(),
    );
    let ok = expanded.as_ref() == Some(&ordinary);
    r.check(
        "d! divided rule = ordinary rule",
        params,
        ok,
        || expanded.map(|e| e.to_string()).unwrap_or_else(|| "not integral".into()),
        || ordinary.to_string(),
    );
}

/// With `a0 = 0` the row rule collapses to
/// `P_{m,k}(a) P_{n,0}^[d] = sum_i C(k,i) n^i P_{n,0}^[d-i] P_{m+i(n-1),k-i}(a)`,
/// and similarly for columns.
pub fn flat_example_check<S: Scalar>(ring: &Arc<Ring<S>>, max_index: u32, max_height: u32) -> Report {
    let mut r = Report::new("flat-divided-example").with_ring(ring.fingerprint());
    if !ring.a0().is_zero() {
        r.detail("skipped", "a0 is not zero".into());
        return r.finish();
    }
    let rows = Env::new(ring, Flavor::Row);
    let cols = Env::new(ring, Flavor::Col);
    for x in crate::liealg::basis_gens(ring, max_index, max_index) {
        let a = Poly::monomial(x.a.clone());
        for n in 1..=max_index {
            for d in 1..=max_height {
                let params = || format!("x=P({},{}; {}), n={n}, d={d}", x.m, x.k, ring.show_monomial(&x.a));
                let xe = EnvElem::from_lie(&rows, &LieElem::gen(ring, x.clone()));
                let got = xe.mul(&EnvElem::letter(&rows, EnvGen::Row { n, d }).unwrap()).unwrap();
                let mut want = EnvElem::zero(&rows);
                for i in 0..=x.k.min(d) {
                    let c = binomial(x.k as u64, i as i64) * num_bigint::BigInt::from(n).pow(i);
                    let t = EnvElem::letter(&rows, EnvGen::Row { n, d: d - i }).unwrap();
                    let p = EnvElem::p(&rows, x.m + i * (n - 1), x.k - i, &a);
                    want = want.plus(&t.mul(&p).unwrap().scaled(&Poly::constant(S::from_bigint(c)))).unwrap();
                }
                r.check("flat row rule", params, got == want, || got.to_string(), || want.to_string());

                let xe = EnvElem::from_lie(&cols, &LieElem::gen(ring, x.clone()));
                let got = EnvElem::letter(&cols, EnvGen::Col { n, d }).unwrap().mul(&xe).unwrap();
                let mut want = EnvElem::zero(&cols);
                for i in 0..=x.m.min(d) {
                    let c = binomial(x.m as u64, i as i64) * num_bigint::BigInt::from(n).pow(i);
                    let t = EnvElem::letter(&cols, EnvGen::Col { n, d: d - i }).unwrap();
                    let p = EnvElem::p(&cols, x.m - i, x.k + i * (n - 1), &a);
                    want = want.plus(&p.mul(&t).unwrap().scaled(&Poly::constant(S::from_bigint(c)))).unwrap();
                }
                r.check("flat column rule", params, got == want, || got.to_string(), || want.to_string());
            }
        }
    }
    r.finish()
}

/// Images of the Weyl-algebra generators `t, u^[d], d/dt^[d], d/du`.
pub struct HeisenbergImages<S: Scalar> {
    pub env: Arc<Env<S>>,
    pub t: EnvElem<S>,
    pub d_u: EnvElem<S>,
}

impl<S: Scalar> HeisenbergImages<S> {
    pub fn new(ring: &Arc<Ring<S>>) -> Result<Self, EnvError> {
        let p0 = ring.section().cloned().ok_or(EnvError::NoSection)?;
        let env = Env::new(ring, Flavor::Heisenberg);
        let u = EnvElem::letter(&env, EnvGen::Row { n: 1, d: 1 })?;
        let t = EnvElem::p(&env, 1, 0, &p0).plus(&u.scaled(ring.psi()))?;
        let d_u = EnvElem::p(&env, 0, 1, &p0);
        Ok(HeisenbergImages { env, t, d_u })
    }

    pub fn u_divided(&self, d: u32) -> EnvElem<S> {
        EnvElem::letter(&self.env, EnvGen::Row { n: 1, d }).expect("rows exist")
    }

    pub fn d_t_divided(&self, d: u32) -> EnvElem<S> {
        EnvElem::letter(&self.env, EnvGen::Col { n: 1, d }).expect("columns exist")
    }

    /// `e = t d/du`, `f = u d/dt`, `h = t d/dt - u d/du`.
    pub fn sl2(&self) -> [EnvElem<S>; 3] {
        let u = self.u_divided(1);
        let dt = self.d_t_divided(1);
        let e = self.t.mul(&self.d_u).unwrap();
        let f = u.mul(&dt).unwrap();
        let h = self.t.mul(&dt).unwrap().minus(&u.mul(&self.d_u).unwrap()).unwrap();
        [e, f, h]
    }
}

/// Weyl relations of the images and their divided powers, and the sl2
/// triple built from them.
pub fn heisenberg_embedding_check<S: Scalar>(ring: &Arc<Ring<S>>, max_height: u32) -> Result<Report, EnvError> {
    let mut r = Report::new("heisenberg-embedding").with_ring(ring.fingerprint());
    let im = HeisenbergImages::new(ring)?;
    let env = &im.env;
    let one = EnvElem::one(env);
    let zero = EnvElem::zero(env);
    let u = im.u_divided(1);
    let dt = im.d_t_divided(1);
    let pairs: [(&str, &EnvElem<S>, &EnvElem<S>, &EnvElem<S>); 6] = [
        ("[d/dt, t] = 1", &dt, &im.t, &one),
        ("[d/du, u] = 1", &im.d_u, &u, &one),
        ("[d/du, t] = 0", &im.d_u, &im.t, &zero),
        ("[d/dt, u] = 0", &dt, &u, &zero),
        ("[t, u] = 0", &im.t, &u, &zero),
        ("[d/dt, d/du] = 0", &dt, &im.d_u, &zero),
    ];
    for (name, a, b, want) in pairs {
        let got = a.commutator(b)?;
        r.check(name, String::new, &got == want, || got.to_string(), || want.to_string());
    }
    for d in 1..=max_height {
        let got = im.d_t_divided(d).commutator(&im.t)?;
        let want = im.d_t_divided(d - 1);
        r.check("[d/dt^[d], t] = d/dt^[d-1]", || format!("d={d}"), got == want, || got.to_string(), || want.to_string());
        let got = im.d_u.commutator(&im.u_divided(d))?;
        let want = im.u_divided(d - 1);
        r.check("[d/du, u^[d]] = u^[d-1]", || format!("d={d}"), got == want, || got.to_string(), || want.to_string());
        let got = u.pow(d)?;
        let want = im.u_divided(d).scaled(&Poly::constant(S::from_bigint(factorial(d as u64))));
        r.check("u^d = d! u^[d]", || format!("d={d}"), got == want, || got.to_string(), || want.to_string());
    }
    let [e, f, h] = im.sl2();
    let two = Poly::from_int(2);
    for (name, got, want) in [
        ("[e,f] = h", e.commutator(&f)?, h.clone()),
        ("[h,e] = 2e", h.commutator(&e)?, e.scaled(&two)),
        ("[h,f] = -2f", h.commutator(&f)?, f.scaled(&two.neg())),
    ] {
        r.check(name, String::new, got == want, || got.to_string(), || want.to_string());
    }
    // e, f, h in terms of generators
    let p0 = ring.section().cloned().ok_or(EnvError::NoSection)?;
    let c = Poly::one();
    let p = |m, k, a: &Poly<S>| EnvElem::p(env, m, k, a);
    let e_want = p(1, 0, &p0).mul(&p(0, 1, &p0))?.plus(&u.mul(&p(0, 1, &p0))?.scaled(ring.psi()))?;
    let f_want = p(1, 0, &c).mul(&p(0, 1, &c))?;
    let h_want = p(1, 0, &p0)
        .mul(&p(0, 1, &c))?
        .plus(&f_want.scaled(ring.psi()))?
        .minus(&p(1, 0, &c).mul(&p(0, 1, &p0))?)?;
    for (name, got, want) in [("e formula", &e, &e_want), ("f formula", &f, &f_want), ("h formula", &h, &h_want)] {
        r.check(name, String::new, got == want, || got.to_string(), || want.to_string());
    }
    Ok(r.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ChowOptions;
    use num_bigint::BigInt;

    #[test]
    fn odd_square_vanishes() {
        let r = Ring::<BigInt>::curve_cohomology(1);
        let env = Env::new(&r, Flavor::Plain);
        let alpha = r.gen("alpha1").unwrap();
        let x = EnvElem::p(&env, 1, 1, &alpha);
        assert!(x.mul(&x).unwrap().is_zero());
    }

    #[test]
    fn tower_letters_respect_flavor() {
        let r = Ring::<BigInt>::curve_cohomology(1);
        let env = Env::new(&r, Flavor::Row);
        assert!(EnvElem::letter(&env, EnvGen::Col { n: 1, d: 1 }).is_err());
        let heis = Env::new(&r, Flavor::Heisenberg);
        assert!(EnvElem::letter(&heis, EnvGen::Row { n: 2, d: 1 }).is_err());
    }

    #[test]
    fn row_relation_at_height_one_is_the_bracket() {
        let r = Ring::<BigInt>::curve_cohomology(2);
        let env = Env::new(&r, Flavor::Row);
        let x = EnvElem::p(&env, 2, 1, &Poly::one());
        let t = EnvElem::p(&env, 1, 0, &Poly::one());
        let got = x.commutator(&t).unwrap();
        let b = LieElem::p(&r, 2, 1, &Poly::one()).bracket(&LieElem::p(&r, 1, 0, &Poly::one())).unwrap();
        assert_eq!(got, EnvElem::from_lie(&env, &b));
    }

    #[test]
    fn heisenberg_images_on_chow() {
        let r = Ring::<BigInt>::curve_chow_symbolic(2);
        let rep = heisenberg_embedding_check(&r, 3).unwrap();
        assert!(rep.passed(), "{}", rep.to_json());
    }

    #[test]
    fn small_confluence() {
        let r = Ring::<BigInt>::curve_chow(ChowOptions::new(1));
        for flavor in [Flavor::Plain, Flavor::Row, Flavor::Col, Flavor::Heisenberg] {
            let env = Env::new(&r, flavor);
            let rep = confluence_check(&env, 40, 3, 2, 7);
            assert!(rep.passed(), "{}", rep.to_json());
        }
    }
}

#[cfg(test)]
mod sweep_tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn divided_rules_on_small_models() {
        let r = Ring::<BigInt>::curve_cohomology(2);
        let rep = divided_check(&r, 2, 2);
        assert!(rep.passed(), "{}", rep.to_json());
        let r = Ring::<BigInt>::curve_chow_symbolic(2);
        let rep = divided_check(&r, 2, 2);
        assert!(rep.passed(), "{}", rep.to_json());
    }

    #[test]
    fn straightening_and_powers() {
        let r = Ring::<BigInt>::curve_chow_symbolic(2);
        let env = Env::new(&r, Flavor::Plain);
        let rep = straightening_check(&env, 2);
        assert!(rep.passed(), "{}", rep.to_json());
        let rep = power_commutation_check(&env, 1, 3);
        assert!(rep.passed(), "{}", rep.to_json());
    }

    #[test]
    fn flat_example() {
        let r = Ring::<BigInt>::curve_cohomology(1);
        let rep = flat_example_check(&r, 2, 3);
        assert!(rep.passed(), "{}", rep.to_json());
    }
}
