//! Scalar-independent ring descriptions and their text format.
//!
//! ```text
//! [options]
//! name = my-ring
//! scalar_mode = integer        # or rational
//! degree_unit = 1              # pushforward lowers degree by this much
//! truncation = psi^3           # comma separated monomials set to zero
//! max_degree = 6               # optional: monomials above this degree vanish
//! section = p0                 # optional
//! psi = psi                    # optional, defaults to 0
//! chi = 1/2*K                  # optional, must satisfy 2*chi = a0
//! genus = 2                    # optional, informative
//! sweep_degree = 2             # fibre degree bound for exhaustive sweeps
//!
//! [generators]
//! K even 1
//! p0 even 1
//! psi even 1 base
//!
//! [rules]
//! p0^2 = -psi*p0
//!
//! [a0]
//! K
//!
//! [pushforward]
//! p0 = 1
//!
//! [restriction]
//! K = psi
//! ```
//!
//! Polynomials use `+ - * ^`, parentheses and integer or `a/b` literals.
//! `#` starts a comment. Unknown sections and options are rejected.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::{mul_monomials, Monomial};
use crate::ring::{ChowOptions, RingError, FORMAL_N, KAPPA_COUNT};
use crate::scalar::ScalarMode;

/// A polynomial with exact rational coefficients, independent of any scalar mode.
pub type SpecPoly = BTreeMap<Monomial, BigRational>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub odd: bool,
    pub degree: u32,
    pub base: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSpec {
    pub name: String,
    pub genus: Option<u32>,
    pub scalar_mode: Option<ScalarMode>,
    pub generators: Vec<GeneratorSpec>,
    pub rules: Vec<(Monomial, SpecPoly)>,
    pub truncation: Vec<Monomial>,
    pub a0: SpecPoly,
    pub pushforward: Vec<(Monomial, SpecPoly)>,
    pub restriction: Vec<(String, SpecPoly)>,
    pub section: Option<SpecPoly>,
    pub psi: Option<SpecPoly>,
    pub chi: Option<SpecPoly>,
    pub max_degree: Option<u32>,
    pub degree_unit: u32,
    pub sweep_degree: Option<u32>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn single(m: Monomial, c: i64) -> SpecPoly {
    let mut p = SpecPoly::new();
    if c != 0 {
        p.insert(m, rat(c));
    }
    p
}

fn gen_spec(name: &str, odd: bool, degree: u32, base: bool) -> GeneratorSpec {
    GeneratorSpec { name: name.to_string(), odd, degree, base }
}

impl RingSpec {
    fn empty(name: &str) -> Self {
        RingSpec {
            name: name.to_string(),
            genus: None,
            scalar_mode: None,
            generators: Vec::new(),
            rules: Vec::new(),
            truncation: Vec::new(),
            a0: SpecPoly::new(),
            pushforward: Vec::new(),
            restriction: Vec::new(),
            section: None,
            psi: None,
            chi: None,
            max_degree: None,
            degree_unit: 1,
            sweep_degree: None,
        }
    }

    /// `H^*(C)` of a genus `g` curve: `alpha_i beta_i = pt`.
    pub fn curve_cohomology(g: u32) -> Self {
        let g = g as usize;
        let mut s = RingSpec::empty(&format!("curve-cohomology-g{g}"));
        s.genus = Some(g as u32);
        s.degree_unit = 2;
        for i in 1..=g {
            s.generators.push(gen_spec(&format!("alpha{i}"), true, 1, false));
        }
        for i in 1..=g {
            s.generators.push(gen_spec(&format!("beta{i}"), true, 1, false));
        }
        s.generators.push(gen_spec("pt", false, 2, false));
        let pt = 2 * g;
        let pair = |i: usize, j: usize| Monomial::generator(i).raw_product(&Monomial::generator(j));
        for i in 0..2 * g {
            for j in (i + 1)..2 * g {
                let rhs = if j == i + g { single(Monomial::generator(pt), 1) } else { SpecPoly::new() };
                s.rules.push((pair(i, j), rhs));
            }
            s.rules.push((pair(i, pt), SpecPoly::new()));
        }
        s.rules.push((pair(pt, pt), SpecPoly::new()));
        s.a0 = single(Monomial::generator(pt), 2 * g as i64 - 2);
        s.pushforward.push((Monomial::generator(pt), single(Monomial::unit(), 1)));
        s.section = Some(single(Monomial::generator(pt), 1));
        s.chi = Some(single(Monomial::generator(pt), g as i64 - 1));
        s
    }

    /// The symbolic Chow model: fibre classes `K`, `p0`; base classes `psi`
    /// and `kappa_j = pi_*(K^{j+1})`.
    pub fn curve_chow(opts: ChowOptions) -> Self {
        let g = opts.genus as i64;
        let mut name = format!("curve-chow-g{g}");
        if opts.point_base {
            name.push_str("-point");
        } else if let Some(d) = opts.psi_truncation {
            let _ = write!(name, "-psi{d}");
        }
        if opts.canonical_from_section {
            name.push_str("-kp0");
        }
        let mut s = RingSpec::empty(&name);
        s.genus = Some(opts.genus);
        s.generators.push(gen_spec("K", false, 1, false));
        s.generators.push(gen_spec("p0", false, 1, false));
        s.generators.push(gen_spec("psi", false, 1, true));
        for j in 1..=KAPPA_COUNT {
            s.generators.push(gen_spec(&format!("kappa{j}"), false, j, true));
        }
        let (k, p0, psi) = (Monomial::generator(0), Monomial::generator(1), Monomial::generator(2));
        let psi_p0 = psi.raw_product(&p0);
        if opts.canonical_from_section {
            s.rules.push((k.clone(), single(p0.clone(), 2 * g - 2)));
        }
        s.rules.push((p0.raw_product(&p0), single(psi_p0.clone(), -1)));
        if !opts.canonical_from_section {
            s.rules.push((k.raw_product(&p0), single(psi_p0, 1)));
        }
        if opts.point_base {
            // A curve over a point has no classes of codimension two.
            s.truncation.push(Monomial::from_exponents(vec![2]));
            s.truncation.push(psi.clone());
            for j in 1..=KAPPA_COUNT {
                s.truncation.push(Monomial::generator(2 + j as usize));
            }
        } else if let Some(d) = opts.psi_truncation {
            s.truncation.push(Monomial::from_exponents(vec![0, 0, d as u16]));
        }
        s.a0 = single(k.clone(), 1);
        s.pushforward.push((p0.clone(), single(Monomial::unit(), 1)));
        if !opts.canonical_from_section {
            s.pushforward.push((k.clone(), single(Monomial::unit(), 2 * g - 2)));
            for b in 2..=(KAPPA_COUNT + 1) {
                let kb = Monomial::from_exponents(vec![b as u16]);
                s.pushforward.push((kb, single(Monomial::generator(2 + b as usize - 1), 1)));
            }
        }
        s.restriction.push(("K".into(), single(psi.clone(), 1)));
        s.restriction.push(("p0".into(), single(psi.clone(), -1)));
        s.section = Some(single(p0, 1));
        s.psi = Some(single(psi, 1));
        let mut chi = SpecPoly::new();
        chi.insert(k, BigRational::new(BigInt::one(), BigInt::from(2)));
        s.chi = Some(chi);
        s
    }

    pub fn generator_names(&self) -> Vec<&str> {
        self.generators.iter().map(|g| g.name.as_str()).collect()
    }

    fn odd_flags(&self) -> Vec<bool> {
        self.generators.iter().map(|g| g.odd).collect()
    }

    pub fn show_monomial(&self, m: &Monomial) -> String {
        let mut names = self.generator_names();
        names.push(FORMAL_N);
        crate::ring::show_monomial_with(&names, m)
    }

    pub fn show_poly(&self, p: &SpecPoly) -> String {
        if p.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in p.iter().enumerate() {
            let body = self.show_monomial(m);
            out.push_str(&crate::ring::show_term(c, &body, k == 0));
        }
        out
    }

    /// Canonical text form; parsing it gives back an equal spec.
    pub fn to_text(&self) -> String {
        let mut t = String::new();
        t.push_str("[options]\n");
        let _ = writeln!(t, "name = {}", self.name);
        if let Some(m) = self.scalar_mode {
            let _ = writeln!(t, "scalar_mode = {}", m.name());
        }
        let _ = writeln!(t, "degree_unit = {}", self.degree_unit);
        if let Some(g) = self.genus {
            let _ = writeln!(t, "genus = {g}");
        }
        if let Some(d) = self.max_degree {
            let _ = writeln!(t, "max_degree = {d}");
        }
        if let Some(d) = self.sweep_degree {
            let _ = writeln!(t, "sweep_degree = {d}");
        }
        if !self.truncation.is_empty() {
            let ms: Vec<String> = self.truncation.iter().map(|m| self.show_monomial(m)).collect();
            let _ = writeln!(t, "truncation = {}", ms.join(", "));
        }
        for (key, v) in [("section", &self.section), ("psi", &self.psi), ("chi", &self.chi)] {
            if let Some(p) = v {
                let _ = writeln!(t, "{key} = {}", self.show_poly(p));
            }
        }
        t.push_str("\n[generators]\n");
        for g in &self.generators {
            let parity = if g.odd { "odd" } else { "even" };
            let base = if g.base { " base" } else { "" };
            let _ = writeln!(t, "{} {} {}{}", g.name, parity, g.degree, base);
        }
        t.push_str("\n[rules]\n");
        for (l, r) in &self.rules {
            let _ = writeln!(t, "{} = {}", self.show_monomial(l), self.show_poly(r));
        }
        t.push_str("\n[a0]\n");
        let _ = writeln!(t, "{}", self.show_poly(&self.a0));
        t.push_str("\n[pushforward]\n");
        for (l, r) in &self.pushforward {
            let _ = writeln!(t, "{} = {}", self.show_monomial(l), self.show_poly(r));
        }
        t.push_str("\n[restriction]\n");
        for (l, r) in &self.restriction {
            let _ = writeln!(t, "{} = {}", l, self.show_poly(r));
        }
        t
    }

    pub fn parse(text: &str) -> Result<Self, RingError> {
        let mut spec = RingSpec::empty("user-ring");
        let mut section = String::new();
        let mut pending: Vec<(usize, String, String)> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('[') {
                let name = line
                    .strip_prefix('[')
                    .and_then(|l| l.strip_suffix(']'))
                    .ok_or_else(|| perr(line_no, 1, "malformed section header"))?;
                match name {
                    "options" | "generators" | "rules" | "a0" | "pushforward" | "restriction" => {
                        section = name.to_string()
                    }
                    other => return Err(RingError::UnknownField(format!("[{other}]"))),
                }
                continue;
            }
            match section.as_str() {
                "" => return Err(perr(line_no, 1, "content before the first section")),
                "generators" => {
                    let parts: Vec<&str> = line.split_whitespace().collect();
                    if parts.len() < 3 || parts.len() > 4 {
                        return Err(perr(line_no, 1, "expected `name parity degree [base]`"));
                    }
                    let name = parts[0];
                    if !is_ident(name) {
                        return Err(perr(line_no, 1, "invalid generator name"));
                    }
                    if name == FORMAL_N {
                        return Err(RingError::Reserved(name.into()));
                    }
                    if spec.generators.iter().any(|g| g.name == name) {
                        return Err(RingError::DuplicateGenerator(name.into()));
                    }
                    let odd = match parts[1] {
                        "even" => false,
                        "odd" => true,
                        _ => return Err(perr(line_no, col_of(raw, parts[1]), "parity must be even or odd")),
                    };
                    let degree = parts[2]
                        .parse()
                        .map_err(|_| perr(line_no, col_of(raw, parts[2]), "degree must be a natural number"))?;
                    let base = match parts.get(3) {
                        None => false,
                        Some(&"base") => true,
                        Some(other) => return Err(RingError::UnknownField((*other).into())),
                    };
                    spec.generators.push(gen_spec(name, odd, degree, base));
                }
                "options" => {
                    let (k, v) = line
                        .split_once('=')
                        .ok_or_else(|| perr(line_no, 1, "expected `key = value`"))?;
                    let (k, v) = (k.trim(), v.trim());
                    let nat = |v: &str| -> Result<u32, RingError> {
                        v.parse().map_err(|_| perr(line_no, col_of(raw, v), "expected a natural number"))
                    };
                    match k {
                        "name" => spec.name = v.to_string(),
                        "scalar_mode" => {
                            spec.scalar_mode = Some(match v {
                                "integer" => ScalarMode::Integer,
                                "rational" => ScalarMode::Rational,
                                _ => return Err(perr(line_no, col_of(raw, v), "scalar_mode is integer or rational")),
                            })
                        }
                        "degree_unit" => spec.degree_unit = nat(v)?,
                        "max_degree" => spec.max_degree = Some(nat(v)?),
                        "genus" => spec.genus = Some(nat(v)?),
                        "sweep_degree" => spec.sweep_degree = Some(nat(v)?),
                        "truncation" | "section" | "psi" | "chi" => {
                            pending.push((line_no, k.to_string(), v.to_string()))
                        }
                        other => return Err(RingError::UnknownField(other.into())),
                    }
                }
                "rules" | "pushforward" | "restriction" => {
                    let (l, r) = line
                        .split_once('=')
                        .ok_or_else(|| perr(line_no, 1, "expected `lhs = rhs`"))?;
                    pending.push((line_no, format!("{section}:{}", l.trim()), r.trim().to_string()));
                }
                "a0" => pending.push((line_no, "a0".into(), line.to_string())),
                _ => unreachable!(),
            }
        }
        let names = spec.generator_names().iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let names: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let odd = spec.odd_flags();
        // `beta1*alpha1` denotes `-alpha1*beta1`; the sign moves to the rhs.
        let signed_monomial = |text: &str, line: usize| -> Result<(Monomial, bool), RingError> {
            let p = parse_poly(text, &names, &odd, line, 1)?;
            match p.iter().next() {
                Some((m, c)) if p.len() == 1 && c.abs().is_one() => Ok((m.clone(), c.is_negative())),
                _ => Err(perr(line, 1, &format!("`{text}` is not a monomial"))),
            }
        };
        let negate = |p: SpecPoly| -> SpecPoly { p.into_iter().map(|(m, c)| (m, -c)).collect() };
        for (line, key, value) in pending {
            let poly = |t: &str| parse_poly(t, &names, &odd, line, 1);
            if key == "truncation" {
                for part in value.split(',') {
                    spec.truncation.push(signed_monomial(part.trim(), line)?.0);
                }
            } else if key == "section" {
                spec.section = Some(poly(&value)?);
            } else if key == "psi" {
                spec.psi = Some(poly(&value)?);
            } else if key == "chi" {
                spec.chi = Some(poly(&value)?);
            } else if key == "a0" {
                let p = poly(&value)?;
                for (m, c) in p {
                    *spec.a0.entry(m).or_insert_with(BigRational::zero) += c;
                }
                spec.a0.retain(|_, c| !c.is_zero());
            } else if let Some(lhs) = key.strip_prefix("rules:") {
                let (m, neg) = signed_monomial(lhs, line)?;
                let rhs = poly(&value)?;
                spec.rules.push((m, if neg { negate(rhs) } else { rhs }));
            } else if let Some(lhs) = key.strip_prefix("pushforward:") {
                let (m, neg) = signed_monomial(lhs, line)?;
                let rhs = poly(&value)?;
                spec.pushforward.push((m, if neg { negate(rhs) } else { rhs }));
            } else if let Some(lhs) = key.strip_prefix("restriction:") {
                if !names.contains(&lhs) {
                    return Err(RingError::UnknownGenerator(lhs.into()));
                }
                spec.restriction.push((lhs.to_string(), poly(&value)?));
            }
        }
        Ok(spec)
    }
}

fn perr(line: usize, col: usize, msg: &str) -> RingError {
    RingError::Parse { line, col, msg: msg.to_string() }
}

fn col_of(raw: &str, part: &str) -> usize {
    raw.find(part).map(|c| c + 1).unwrap_or(1)
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parse a polynomial over the free supercommutative algebra on `names`.
///
/// `line`/`col` locate the start of `text` for error messages.
pub fn parse_poly(
    text: &str,
    names: &[&str],
    odd: &[bool],
    line: usize,
    col: usize,
) -> Result<SpecPoly, RingError> {
    let mut p = PolyParser { chars: text.char_indices().collect(), pos: 0, names, odd, line, col };
    let v = p.sum()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected input"));
    }
    Ok(v)
}

struct PolyParser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    names: &'a [&'a str],
    odd: &'a [bool],
    line: usize,
    col: usize,
}

fn spec_mul(odd: &[bool], a: &SpecPoly, b: &SpecPoly) -> SpecPoly {
    let mut out = SpecPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            if let Some((neg, m)) = mul_monomials(odd, ma, mb) {
                let c = ca * cb;
                let c = if neg { -c } else { c };
                *out.entry(m).or_insert_with(BigRational::zero) += c;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

impl<'a> PolyParser<'a> {
    fn error(&self, msg: &str) -> RingError {
        let offset = self.chars.get(self.pos).map(|(i, _)| *i).unwrap_or_else(|| {
            self.chars.last().map(|(i, c)| i + c.len_utf8()).unwrap_or(0)
        });
        let msg = if self.pos >= self.chars.len() { format!("{msg} at end of input") } else { msg.to_string() };
        RingError::Parse { line: self.line, col: self.col + offset, msg }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn sum(&mut self) -> Result<SpecPoly, RingError> {
        let mut acc = SpecPoly::new();
        let mut first = true;
        loop {
            let negative = match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    false
                }
                Some('-') => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => break,
            };
            first = false;
            let t = self.product()?;
            for (m, c) in t {
                let e = acc.entry(m).or_insert_with(BigRational::zero);
                if negative {
                    *e -= c;
                } else {
                    *e += c;
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(acc)
    }

    fn product(&mut self) -> Result<SpecPoly, RingError> {
        let mut acc = self.power()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let f = self.power()?;
            acc = spec_mul(self.odd, &acc, &f);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<SpecPoly, RingError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.natural()?;
            let e: u32 = e.try_into().map_err(|_| self.error("exponent too large"))?;
            let mut acc = SpecPoly::new();
            acc.insert(Monomial::unit(), BigRational::one());
            for _ in 0..e {
                acc = spec_mul(self.odd, &acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn natural(&mut self) -> Result<BigInt, RingError> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
        Ok(s.parse().expect("digits"))
    }

    fn atom(&mut self) -> Result<SpecPoly, RingError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.natural()?;
                let mut d = BigInt::one();
                if self.peek() == Some('/') {
                    self.pos += 1;
                    self.skip_ws();
                    d = self.natural()?;
                    if d.is_zero() {
                        return Err(self.error("division by zero"));
                    }
                }
                let mut p = SpecPoly::new();
                if !n.is_zero() {
                    p.insert(Monomial::unit(), BigRational::new(n, d));
                }
                Ok(p)
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].1.is_ascii_alphanumeric() || self.chars[self.pos].1 == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
                match self.names.iter().position(|n| *n == name) {
                    Some(i) => {
                        let mut p = SpecPoly::new();
                        p.insert(Monomial::generator(i), BigRational::one());
                        Ok(p)
                    }
                    None => {
                        self.pos = start;
                        Err(RingError::UnknownGenerator(name))
                    }
                }
            }
            _ => Err(self.error("expected a number, a generator or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_round_trips_through_text() {
        for spec in [RingSpec::curve_cohomology(2), RingSpec::curve_chow(ChowOptions::new(2))] {
            let back = RingSpec::parse(&spec.to_text()).unwrap();
            assert_eq!(back.to_text(), spec.to_text());
        }
    }

    #[test]
    fn rejects_unknown_fields() {
        let err = RingSpec::parse("[options]\ncolour = red\n").unwrap_err();
        assert_eq!(err, RingError::UnknownField("colour".into()));
        assert!(RingSpec::parse("[extras]\n").is_err());
    }

    #[test]
    fn koszul_sign_in_parsed_products() {
        let names = ["a", "b"];
        let p = parse_poly("b*a", &names, &[true, true], 1, 1).unwrap();
        let m = Monomial::from_exponents(vec![1, 1]);
        assert_eq!(p[&m], -BigRational::one());
    }

    #[test]
    fn positioned_errors() {
        let names = ["x"];
        match parse_poly("x + * x", &names, &[false], 3, 1) {
            Err(RingError::Parse { line: 3, col: 5, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
