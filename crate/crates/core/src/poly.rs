//! Monomials and sparse polynomials over the generators of a presented ring.
//!
//! A [`Monomial`] is an exponent vector indexed by generator position, with
//! trailing zeros trimmed so that equal monomials have equal representations.
//! Multiplication needs the parity of each generator and therefore lives on
//! the ring; this module only provides the additive structure.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::scalar::Scalar;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_exponents(mut e: Vec<u16>) -> Self {
        while e.last() == Some(&0) {
            e.pop();
        }
        Monomial(e)
    }

    pub fn generator(index: usize) -> Self {
        let mut e = vec![0; index + 1];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of generator factors counted with multiplicity.
    pub fn factor_count(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().enumerate().all(|(i, &e)| other.exp(i) >= e)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let n = other.0.len();
        let e = (0..n).map(|i| other.exp(i) - self.exp(i)).collect();
        Monomial::from_exponents(e)
    }

    /// Exponent-wise sum, ignoring signs and parity.
    pub fn raw_product(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Monomial::from_exponents((0..n).map(|i| self.exp(i) + other.exp(i)).collect())
    }

    /// Keep only the exponents selected by `keep`.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Monomial {
        Monomial::from_exponents(
            self.0
                .iter()
                .enumerate()
                .map(|(i, &e)| if keep(i) { e } else { 0 })
                .collect(),
        )
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, u16)> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e))
    }
}

/// Sparse linear combination of monomials; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<S: Scalar> {
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Default for Poly<S> {
    fn default() -> Self {
        Poly::zero()
    }
}

impl<S: Scalar> Poly<S> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(c: S) -> Self {
        Poly::term(Monomial::unit(), c)
    }

    pub fn one() -> Self {
        Poly::constant(S::one())
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(S::from_i64(n))
    }

    pub fn term(m: Monomial, c: S) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn monomial(m: Monomial) -> Self {
        Poly::term(m, S::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, S)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    /// The constant term, if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<S> {
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => self.terms.get(&Monomial::unit()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Poly<S>) {
        for (m, c) in other.terms() {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &Poly<S>, s: &S) {
        if s.is_zero() {
            return;
        }
        for (m, c) in other.terms() {
            self.add_term(m.clone(), c.clone() * s.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &Poly<S>) {
        for (m, c) in other.terms() {
            self.add_term(m.clone(), -c.clone());
        }
    }

    pub fn plus(&self, other: &Poly<S>) -> Poly<S> {
        let mut p = self.clone();
        p.add_assign(other);
        p
    }

    pub fn minus(&self, other: &Poly<S>) -> Poly<S> {
        let mut p = self.clone();
        p.sub_assign(other);
        p
    }

    pub fn scaled(&self, s: &S) -> Poly<S> {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.clone() * s.clone()))
                .collect(),
        }
    }

    pub fn neg(&self) -> Poly<S> {
        self.scaled(&-S::one())
    }

    /// Divide every coefficient exactly, or fail.
    pub fn div_exact(&self, d: &S) -> Option<Poly<S>> {
        let mut out = Poly::zero();
        for (m, c) in self.terms() {
            out.add_term(m.clone(), c.div_exact(d)?);
        }
        Some(out)
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> Option<T>) -> Option<Poly<T>> {
        let mut out = Poly::zero();
        for (m, c) in self.terms() {
            out.add_term(m.clone(), f(c)?);
        }
        Some(out)
    }
}

impl<S: Scalar> Zero for Poly<S> {
    fn zero() -> Self {
        Poly::zero()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<S: Scalar> std::ops::Add for Poly<S> {
    type Output = Poly<S>;

    fn add(mut self, rhs: Poly<S>) -> Poly<S> {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

/// Koszul sign of the product of two monomials in a free supercommutative
/// algebra, or `None` if an odd generator would appear twice.
pub fn mul_monomials(odd: &[bool], a: &Monomial, b: &Monomial) -> Option<(bool, Monomial)> {
    let mut negative = false;
    // Each odd factor of `b` moves left past the odd factors of `a` with a
    // larger index.
    let mut odd_in_a_after = 0u32;
    let n = a.exponents().len().max(b.exponents().len());
    for i in (0..n).rev() {
        let (ea, eb) = (a.exp(i), b.exp(i));
        let is_odd = odd.get(i).copied().unwrap_or(false);
        if is_odd {
            if ea + eb > 1 {
                return None;
            }
            if eb == 1 && odd_in_a_after % 2 == 1 {
                negative = !negative;
            }
            if ea == 1 {
                odd_in_a_after += 1;
            }
        }
    }
    Some((negative, a.raw_product(b)))
}

/// Parity of a monomial: the number of odd factors mod 2.
pub fn monomial_is_odd(odd: &[bool], m: &Monomial) -> bool {
    m.support()
        .filter(|(i, _)| odd.get(*i).copied().unwrap_or(false))
        .count()
        % 2
        == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn trimmed_representation() {
        assert_eq!(Monomial::from_exponents(vec![1, 0, 0]), Monomial::generator(0));
        assert!(Monomial::from_exponents(vec![0, 0]).is_unit());
    }

    #[test]
    fn koszul_sign_of_swap() {
        let odd = [true, true];
        let a = Monomial::generator(1);
        let b = Monomial::generator(0);
        let (neg, m) = mul_monomials(&odd, &a, &b).unwrap();
        assert!(neg);
        assert_eq!(m, Monomial::from_exponents(vec![1, 1]));
        let (neg, _) = mul_monomials(&odd, &b, &a).unwrap();
        assert!(!neg);
        assert!(mul_monomials(&odd, &a, &a).is_none());
    }

    #[test]
    fn cancellation_drops_terms() {
        let mut p: Poly<BigInt> = Poly::monomial(Monomial::generator(0));
        p.add_term(Monomial::generator(0), BigInt::from(-1));
        assert!(p.is_zero());
    }
}
