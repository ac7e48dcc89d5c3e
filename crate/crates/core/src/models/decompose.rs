//! Splitting a module over `Z[t, u^[*], d_t^[*], d_u]` as `M0[t, u^[*]]`.
//!
//! The module is given by integer action tables on a finite basis. The
//! extraction runs in two stages: `P = sum_j (-1)^j u^[j] d_u^j` projects onto
//! `ker d_u`, then `Q = sum_n (-1)^n t^n d_t^[n]` projects onto the joint
//! kernel of the `d_t^[n]`. `M0` is the image of `QP`, and every vector
//! decomposes as `x = sum_{j,n} u^[j] t^n Q d_t^[n] P d_u^j x`.
//!
//! Table format, one directive per line (`#` starts a comment):
//!
//! ```text
//! dim 6
//! weight 0 1 1 2 2 2
//! t 0 1 1
//! u[1] 0 2 1
//! dt[1] 1 0 1
//! du 2 0 1
//! ```
//!
//! `<op> <src> <dst> <coeff>` adds `coeff * e_dst` to the image of `e_src`.
//! Operators are `t`, `u[d]`, `dt[d]` and `du`. The optional `weight` line
//! marks a truncation: `t` and `u` may leave it, so injectivity and
//! surjectivity are checked one weight below the top.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::combinat::binomial;
use crate::report::Report;

use super::ModelError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModOp {
    T,
    U(u32),
    Dt(u32),
    Du,
}

impl ModOp {
    fn name(self) -> String {
        match self {
            ModOp::T => "t".into(),
            ModOp::U(d) => format!("u[{d}]"),
            ModOp::Dt(d) => format!("dt[{d}]"),
            ModOp::Du => "du".into(),
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "t" => return Some(ModOp::T),
            "du" => return Some(ModOp::Du),
            _ => {}
        }
        let (head, rest) = s.split_once('[')?;
        let d: u32 = rest.strip_suffix(']')?.parse().ok()?;
        match head {
            "u" if d >= 1 => Some(ModOp::U(d)),
            "dt" if d >= 1 => Some(ModOp::Dt(d)),
            _ => None,
        }
    }
}

type Matrix = Vec<Vec<BigInt>>;

fn zero_matrix(n: usize) -> Matrix {
    vec![vec![BigInt::zero(); n]; n]
}

fn identity(n: usize) -> Matrix {
    let mut m = zero_matrix(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = zero_matrix(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

fn mat_add_scaled(acc: &mut Matrix, m: &Matrix, s: &BigInt) {
    for (ra, rm) in acc.iter_mut().zip(m) {
        for (x, y) in ra.iter_mut().zip(rm) {
            *x += y * s;
        }
    }
}

fn is_zero_matrix(m: &Matrix) -> bool {
    m.iter().all(|r| r.iter().all(Zero::is_zero))
}

fn mat_vec(m: &Matrix, v: &[BigInt]) -> Vec<BigInt> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn column(m: &Matrix, j: usize) -> Vec<BigInt> {
    m.iter().map(|r| r[j].clone()).collect()
}

/// Integer echelon form of a list of row vectors; returns the pivot values.
/// The rows span `Z^r` exactly when there are `r` pivots, all of absolute
/// value one.
fn integer_pivots(mut rows: Vec<Vec<BigInt>>, width: usize) -> Vec<BigInt> {
    let mut pivots = Vec::new();
    let mut top = 0;
    for c in 0..width {
        loop {
            let best = (top..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&i, &j| rows[i][c].abs().cmp(&rows[j][c].abs()));
            let Some(b) = best else { break };
            rows.swap(top, b);
            let mut done = true;
            for i in (top + 1)..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[top][c]);
                let pivot_row = rows[top].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                pivots.push(rows[top][c].clone());
                top += 1;
                break;
            }
        }
    }
    pivots
}

/// Integer action tables of a finite module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleTables {
    pub dim: usize,
    pub weights: Option<Vec<u32>>,
    pub ops: BTreeMap<ModOp, Matrix>,
}

impl ModuleTables {
    pub fn new(dim: usize) -> Self {
        ModuleTables { dim, weights: None, ops: BTreeMap::new() }
    }

    pub fn add_entry(&mut self, op: ModOp, src: usize, dst: usize, c: BigInt) {
        let dim = self.dim;
        let m = self.ops.entry(op).or_insert_with(|| zero_matrix(dim));
        m[dst][src] += c;
    }

    /// `Gamma[t, u^[*]]` with `Gamma = Z^rank`, truncated at `m + n <= max_weight`.
    pub fn fock(rank: u32, max_weight: u32) -> Self {
        let mut index = BTreeMap::new();
        let mut weights = Vec::new();
        for g in 0..rank {
            for w in 0..=max_weight {
                for m in 0..=w {
                    index.insert((g, m, w - m), weights.len());
                    weights.push(w);
                }
            }
        }
        let mut t = ModuleTables::new(weights.len());
        for (&(g, m, n), &src) in &index {
            if let Some(&dst) = index.get(&(g, m + 1, n)) {
                t.add_entry(ModOp::T, src, dst, BigInt::one());
            }
            for d in 1..=max_weight {
                if let Some(&dst) = index.get(&(g, m, n + d)) {
                    t.add_entry(ModOp::U(d), src, dst, binomial((n + d) as u64, d as i64));
                }
                if m >= d {
                    let dst = index[&(g, m - d, n)];
                    t.add_entry(ModOp::Dt(d), src, dst, binomial(m as u64, d as i64));
                }
            }
            if n >= 1 {
                t.add_entry(ModOp::Du, src, index[&(g, m, n - 1)], BigInt::one());
            }
        }
        for d in 1..=max_weight {
            t.ops.entry(ModOp::U(d)).or_insert_with(|| zero_matrix(weights.len()));
            t.ops.entry(ModOp::Dt(d)).or_insert_with(|| zero_matrix(weights.len()));
        }
        t.ops.entry(ModOp::T).or_insert_with(|| zero_matrix(weights.len()));
        t.ops.entry(ModOp::Du).or_insert_with(|| zero_matrix(weights.len()));
        t.weights = Some(weights);
        t
    }

    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let mut tables: Option<ModuleTables> = None;
        for (no, raw) in text.lines().enumerate() {
            let line_no = no + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| ModelError::Parse { line: line_no, msg: msg.to_string() };
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts[0] {
                "dim" => {
                    if tables.is_some() {
                        return Err(err("duplicate dim"));
                    }
                    let n: usize = parts
                        .get(1)
                        .and_then(|s| s.parse().ok())
                        .filter(|_| parts.len() == 2)
                        .ok_or_else(|| err("expected `dim <n>`"))?;
                    tables = Some(ModuleTables::new(n));
                }
                "weight" => {
                    let t = tables.as_mut().ok_or_else(|| err("weight before dim"))?;
                    let w: Result<Vec<u32>, _> = parts[1..].iter().map(|s| s.parse()).collect();
                    let w = w.map_err(|_| err("weights must be non-negative integers"))?;
                    if w.len() != t.dim {
                        return Err(err("one weight per basis vector expected"));
                    }
                    t.weights = Some(w);
                }
                op => {
                    let t = tables.as_mut().ok_or_else(|| err("entry before dim"))?;
                    let op = ModOp::parse(op).ok_or_else(|| err("unknown operator"))?;
                    if parts.len() != 4 {
                        return Err(err("expected `<op> <src> <dst> <coeff>`"));
                    }
                    let src: usize = parts[1].parse().map_err(|_| err("bad source index"))?;
                    let dst: usize = parts[2].parse().map_err(|_| err("bad target index"))?;
                    let c: BigInt = parts[3].parse().map_err(|_| err("bad coefficient"))?;
                    if src >= t.dim || dst >= t.dim {
                        return Err(err("index out of range"));
                    }
                    t.add_entry(op, src, dst, c);
                }
            }
        }
        tables.ok_or(ModelError::Parse { line: 0, msg: "missing dim".into() })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "dim {}", self.dim);
        if let Some(w) = &self.weights {
            let ws: Vec<String> = w.iter().map(u32::to_string).collect();
            let _ = writeln!(s, "weight {}", ws.join(" "));
        }
        for (op, m) in &self.ops {
            for (dst, row) in m.iter().enumerate() {
                for (src, c) in row.iter().enumerate() {
                    if !c.is_zero() {
                        let _ = writeln!(s, "{} {src} {dst} {c}", op.name());
                    }
                }
            }
        }
        s
    }

    fn op(&self, op: ModOp) -> Result<&Matrix, ModelError> {
        self.ops.get(&op).ok_or_else(|| ModelError::MissingOperator(op.name()))
    }

    fn op_or_zero(&self, op: ModOp) -> Matrix {
        self.ops.get(&op).cloned().unwrap_or_else(|| zero_matrix(self.dim))
    }

    fn top_weight(&self) -> Option<u32> {
        self.weights.as_ref().map(|w| w.iter().copied().max().unwrap_or(0))
    }

    /// Basis indices strictly below the truncation (all of them when untruncated).
    fn interior(&self) -> Vec<usize> {
        match (&self.weights, self.top_weight()) {
            (Some(w), Some(top)) => (0..self.dim).filter(|&i| w[i] < top).collect(),
            _ => (0..self.dim).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    /// The projector `QP` onto `M0`.
    pub projector: Vec<Vec<BigInt>>,
    /// Images of basis vectors spanning `M0`.
    pub m0_basis: Vec<Vec<BigInt>>,
    /// For each basis vector `e_b`, the nonzero pieces `(j, n, y)` with
    /// `y in M0` and `e_b = sum u^[j] t^n y`.
    pub expansions: Vec<Vec<(u32, u32, Vec<BigInt>)>>,
    pub t_injective: bool,
    pub du_surjective: bool,
}

/// Smallest `e` with `m^e = 0`, checked up to the dimension.
fn nilpotency_index(m: &Matrix, name: &str) -> Result<u32, ModelError> {
    let n = m.len();
    let mut p = identity(n);
    for e in 0..=n as u32 {
        if is_zero_matrix(&p) {
            return Ok(e);
        }
        p = mat_mul(&p, m);
    }
    Err(ModelError::NonNilpotent(name.to_string()))
}

pub fn decompose_module(tables: &ModuleTables) -> Result<Decomposition, ModelError> {
    let n = tables.dim;
    let du = tables.op(ModOp::Du)?;
    let t = tables.op(ModOp::T)?;
    let du_index = nilpotency_index(du, "du")?;
    let mut dt_index = 1;
    for (op, m) in &tables.ops {
        if let ModOp::Dt(d) = op {
            let e = nilpotency_index(m, &op.name())?;
            if e > 0 && *d == 1 {
                dt_index = dt_index.max(e);
            }
        }
    }
    let top_dt = if tables.ops.contains_key(&ModOp::Dt(1)) { dt_index.saturating_sub(1) } else { 0 };

    let u_power = |j: u32| -> Result<Matrix, ModelError> {
        if j == 0 {
            Ok(identity(n))
        } else {
            tables.op(ModOp::U(j)).cloned()
        }
    };
    let dt_power = |d: u32| -> Result<Matrix, ModelError> {
        if d == 0 {
            Ok(identity(n))
        } else {
            tables.op(ModOp::Dt(d)).cloned()
        }
    };

    let mut du_pows = vec![identity(n)];
    for j in 1..du_index {
        du_pows.push(mat_mul(&du_pows[j as usize - 1], du));
    }
    let mut p = zero_matrix(n);
    for (j, dj) in du_pows.iter().enumerate() {
        let s = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        mat_add_scaled(&mut p, &mat_mul(&u_power(j as u32)?, dj), &s);
    }
    let mut t_pows = vec![identity(n)];
    for d in 1..=top_dt {
        t_pows.push(mat_mul(&t_pows[d as usize - 1], t));
    }
    let mut q = zero_matrix(n);
    for d in 0..=top_dt {
        let s = if d % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        mat_add_scaled(&mut q, &mat_mul(&t_pows[d as usize], &dt_power(d)?), &s);
    }
    let proj = mat_mul(&q, &p);

    let mut m0_basis: Vec<Vec<BigInt>> = Vec::new();
    for j in 0..n {
        let c = column(&proj, j);
        if c.iter().all(Zero::is_zero) {
            continue;
        }
        let mut trial = m0_basis.clone();
        trial.push(c.clone());
        if integer_pivots(trial, n).len() > m0_basis.len() {
            m0_basis.push(c);
        }
    }

    let mut expansions = Vec::with_capacity(n);
    for b in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[b] = BigInt::one();
        let mut pieces = Vec::new();
        for (j, dj) in du_pows.iter().enumerate() {
            let pd = mat_vec(&p, &mat_vec(dj, &e));
            if pd.iter().all(Zero::is_zero) {
                continue;
            }
            for d in 0..=top_dt {
                let y = mat_vec(&q, &mat_vec(&dt_power(d)?, &pd));
                if !y.iter().all(Zero::is_zero) {
                    pieces.push((j as u32, d, y));
                }
            }
        }
        expansions.push(pieces);
    }

    let interior = tables.interior();
    let t_rows: Vec<Vec<BigInt>> = interior.iter().map(|&src| column(t, src)).collect();
    let t_injective = integer_pivots(t_rows, n).len() == interior.len();
    let du_rows: Vec<Vec<BigInt>> = (0..n)
        .map(|src| interior.iter().map(|&dst| du[dst][src].clone()).collect())
        .collect();
    let pivots = integer_pivots(du_rows, interior.len());
    let du_surjective = pivots.len() == interior.len() && pivots.iter().all(|p| p.abs().is_one());

    Ok(Decomposition { projector: proj, m0_basis, expansions, t_injective, du_surjective })
}

fn show_vec(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(BigInt::to_string).collect();
    format!("[{}]", parts.join(" "))
}

/// Decompose and verify: `M0` is killed by `d_u` and every `d_t^[n]`, the
/// projector is idempotent, every basis vector is reassembled from its
/// pieces, `t` is injective and `d_u` surjective below the truncation.
pub fn decompose_check(tables: &ModuleTables) -> Report {
    let mut r = Report::new("module-decomposition");
    let dec = match decompose_module(tables) {
        Ok(d) => d,
        Err(e) => {
            r.check("decomposition exists", String::new, false, || e.to_string(), String::new);
            return r.finish();
        }
    };
    let n = tables.dim;
    r.detail("m0_rank", dec.m0_basis.len().to_string());
    for (i, y) in dec.m0_basis.iter().enumerate() {
        for (op, m) in &tables.ops {
            if matches!(op, ModOp::Du | ModOp::Dt(_)) {
                let z = mat_vec(m, y);
                r.check(
                    "M0 is killed by the lowering operators",
                    || format!("basis={i} op={}", op.name()),
                    z.iter().all(Zero::is_zero),
                    || show_vec(&z),
                    || "0".into(),
                );
            }
        }
    }
    let sq = mat_mul(&dec.projector, &dec.projector);
    r.check("projector is idempotent", String::new, sq == dec.projector, || "QPQP".into(), || "QP".into());
    let t = tables.op_or_zero(ModOp::T);
    for (b, pieces) in dec.expansions.iter().enumerate() {
        let mut acc = vec![BigInt::zero(); n];
        let mut ok = true;
        for (j, d, y) in pieces {
            let mut v = y.clone();
            for _ in 0..*d {
                v = mat_vec(&t, &v);
            }
            if *j > 0 {
                match tables.ops.get(&ModOp::U(*j)) {
                    Some(u) => v = mat_vec(u, &v),
                    None => ok = false,
                }
            }
            for (a, x) in acc.iter_mut().zip(v) {
                *a += x;
            }
        }
        let mut e = vec![BigInt::zero(); n];
        e[b] = BigInt::one();
        r.check(
            "x = sum u^[j] t^n y_{j,n}",
            || format!("basis={b}"),
            ok && acc == e,
            || show_vec(&acc),
            || show_vec(&e),
        );
    }
    r.check("t is injective", String::new, dec.t_injective, || "false".into(), || "true".into());
    r.check("d_u is surjective", String::new, dec.du_surjective, || "false".into(), || "true".into());
    r.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fock_truncation_splits_off_gamma() {
        let m = ModuleTables::fock(1, 6);
        let dec = decompose_module(&m).unwrap();
        assert_eq!(dec.m0_basis.len(), 1);
        assert_eq!(dec.m0_basis[0][0], BigInt::one());
        assert!(dec.t_injective && dec.du_surjective);
        let r = decompose_check(&ModuleTables::fock(2, 5));
        assert!(r.passed(), "{}", r.to_json());
        assert_eq!(r.details["m0_rank"], "2");
    }

    #[test]
    fn text_round_trip() {
        let m = ModuleTables::fock(1, 3);
        let back = ModuleTables::parse(&m.to_text()).unwrap();
        assert_eq!(back.to_text(), m.to_text());
    }

    #[test]
    fn rejects_non_nilpotent_lowering() {
        let text = "dim 2\nt 0 1 1\ndu 0 1 1\ndu 1 0 1\n";
        let m = ModuleTables::parse(text).unwrap();
        assert_eq!(decompose_module(&m).unwrap_err(), ModelError::NonNilpotent("du".into()));
    }

    #[test]
    fn parse_errors_carry_lines() {
        let err = ModuleTables::parse("dim 2\nfoo 0 1 1\n").unwrap_err();
        assert_eq!(err, ModelError::Parse { line: 2, msg: "unknown operator".into() });
    }

    #[test]
    fn lattice_surjectivity_is_integral() {
        // d_u = 2 on a one-step chain is rationally but not integrally onto.
        let text = "dim 2\nweight 0 1\nt 0 1 1\nu[1] 0 1 1\ndu 1 0 2\n";
        let m = ModuleTables::parse(text).unwrap();
        let dec = decompose_module(&m).unwrap();
        assert!(!dec.du_surjective);
    }
}
