//! Named verification suites.
//!
//! Every suite runs its sweeps with default bounds large enough for the
//! acceptance run; `quick` shrinks them for smoke testing. Explicit bounds in
//! [`SuiteParams`] override the defaults.

use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::combinat;
use crate::env::{self, Env, EnvError, Flavor};
use crate::jaccalc::{self, JacError};
use crate::liealg::{self, LieError};
use crate::models::{self, ModelError, ModuleTables, TautSpace, ZeroCycleModel};
use crate::report::Report;
use crate::ring::{ChowOptions, Ring, RingError};
use crate::ringspec::RingSpec;
use crate::scalar::Scalar;
use crate::{Int, Rat};

pub const SUITE_NAMES: [&str; 15] = [
    "jacobi",
    "hv",
    "pbw",
    "divided",
    "heisenberg",
    "fock-sl2",
    "witt",
    "taut-homomorphism",
    "t-relations",
    "x-equivalence",
    "x-sl2",
    "tau-pullback",
    "gross-schoen",
    "combinat",
    "all",
];

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("unknown ring `{0}`")]
    UnknownRing(String),
    #[error("invalid bound: {0}")]
    InvalidBound(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Jac(#[from] JacError),
}

/// The coefficient rings a suite can be pointed at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingChoice {
    CurveCohomology,
    CurveChow(ChowOptions),
    File(RingSpec),
}

impl RingChoice {
    /// Accepted names: `curve-cohomology`, `curve-chow`, `curve-chow-psi<d>`,
    /// `curve-chow-point`, `curve-chow-point-kp0`. The genus comes separately.
    pub fn parse(name: &str) -> Result<Self, SuiteError> {
        let unknown = || SuiteError::UnknownRing(name.to_string());
        let mut opts = ChowOptions::new(0);
        match name {
            "curve-cohomology" => return Ok(RingChoice::CurveCohomology),
            "curve-chow" | "curve-chow-symbolic" => {}
            "curve-chow-point" => opts.point_base = true,
            "curve-chow-point-kp0" => {
                opts.point_base = true;
                opts.canonical_from_section = true;
            }
            _ => {
                let d = name.strip_prefix("curve-chow-psi").ok_or_else(unknown)?;
                let d: u32 = d.parse().map_err(|_| unknown())?;
                if d == 0 {
                    return Err(unknown());
                }
                opts.psi_truncation = Some(d);
            }
        }
        Ok(RingChoice::CurveChow(opts))
    }

    pub fn spec(&self, genus: u32) -> RingSpec {
        match self {
            RingChoice::CurveCohomology => RingSpec::curve_cohomology(genus),
            RingChoice::CurveChow(o) => RingSpec::curve_chow(ChowOptions { genus, ..*o }),
            RingChoice::File(s) => s.clone(),
        }
    }

    pub fn build<S: Scalar>(&self, genus: u32) -> Result<Arc<Ring<S>>, RingError> {
        Ring::from_spec(self.spec(genus))
    }
}

fn chow(psi_truncation: Option<u32>, point_base: bool, canonical_from_section: bool) -> RingChoice {
    RingChoice::CurveChow(ChowOptions { genus: 0, psi_truncation, point_base, canonical_from_section })
}

#[derive(Clone, Debug, Default)]
pub struct SuiteParams {
    /// Replaces the suite's default rings.
    pub ring: Option<RingChoice>,
    pub genus: Option<u32>,
    pub max_index: Option<u32>,
    pub k: Option<u32>,
    pub quick: bool,
}

impl SuiteParams {
    fn bound(&self, full: u32, quick: u32) -> u32 {
        self.max_index.unwrap_or(if self.quick { quick } else { full })
    }

    fn pick(&self, full: u32, quick: u32) -> u32 {
        if self.quick {
            quick
        } else {
            full
        }
    }

    /// The suite's default rings at their default genera, or the override.
    fn rings<S: Scalar>(&self, defaults: &[(RingChoice, u32)]) -> Result<Vec<Arc<Ring<S>>>, SuiteError> {
        if let Some(r) = &self.ring {
            return Ok(vec![r.build(self.genus.unwrap_or(2))?]);
        }
        defaults
            .iter()
            .map(|(r, g)| Ok(r.build(self.genus.unwrap_or(*g))?))
            .collect()
    }

    fn genera(&self, full: u32, quick: u32) -> Vec<u32> {
        match self.genus {
            Some(g) => vec![g],
            None => (1..=self.pick(full, quick)).collect(),
        }
    }
}

/// Run a named suite; `all` runs every other suite with the same parameters.
pub fn run_suite(name: &str, params: &SuiteParams) -> Result<Report, SuiteError> {
    if params.genus == Some(0) {
        return Err(SuiteError::InvalidBound("genus must be at least 1".into()));
    }
    let parts = match name {
        "jacobi" => jacobi(params)?,
        "hv" => hv(params)?,
        "pbw" => pbw(params)?,
        "divided" => divided(params)?,
        "heisenberg" => heisenberg(params)?,
        "fock-sl2" => fock_sl2(params)?,
        "witt" => witt(params)?,
        "taut-homomorphism" => taut_homomorphism(params)?,
        "t-relations" => t_relations(params)?,
        "x-equivalence" => x_equivalence(params)?,
        "x-sl2" => x_sl2(params)?,
        "tau-pullback" => tau_pullback(params)?,
        "gross-schoen" => gross_schoen(params)?,
        "combinat" => vec![combinat::kernel_check(params.bound(8, 6))],
        "all" => {
            let mut parts = Vec::new();
            for s in SUITE_NAMES.iter().filter(|s| **s != "all") {
                parts.push(run_suite(s, params)?);
            }
            parts
        }
        _ => return Err(SuiteError::UnknownSuite(name.to_string())),
    };
    let mut r = Report::new(name);
    for p in parts {
        r.add_part(p);
    }
    Ok(r.finish())
}

fn jacobi(p: &SuiteParams) -> Result<Vec<Report>, SuiteError> {
    let b = p.bound(4, 2);
    let rings = p.rings::<Int>(&[(RingChoice::CurveCohomology, 2), (chow(Some(3), false, false), 2)])?;
    let mut out = Vec::new();
    for ring in &rings {
        out.push(liealg::super_jacobi_check(ring, b, b));
        out.push(liealg::centrality_check(ring, b.min(3)));
        out.push(liealg::bidegree_check(ring, b.min(3)));
    }
    Ok(out)
}

fn hv(p: &SuiteParams) -> Result<Vec<Report>, SuiteError> {
    let b = p.bound(4, 3);
    let rings = p.rings::<Rat>(&[(RingChoice::CurveCohomology, 1), (chow(None, true, false), 2)])?;
    rings.iter().map(|r| Ok(liealg::hv_check(r, b)?)).collect()
}

fn pbw(p: &SuiteParams) -> Result<Vec<Report>, SuiteError> {
    let b = p.bound(3, 2);
    let trials = p.pick(10_000, 400) as usize;
    let rings = p.rings::<Int>(&[(RingChoice::CurveCohomology, 2), (chow(None, false, false), 2)])?;
    let mut out = Vec::new();
    for ring in &rings {
        let flavors = [Flavor::Plain, Flavor::Row, Flavor::Col, Flavor::Heisenberg];
        for (i, flavor) in flavors.into_iter().enumerate() {
            let e = Env::new(ring, flavor);
            out.push(env::confluence_check(&e, trials / flavors.len(), 3, b, 17 + i as u64));
        }
        let plain = Env::new(ring, Flavor::Plain);
        out.push(env::straightening_check(&plain, b));
        out.push(env::power_commutation_check(&plain, b.min(2), 3));
    }
    Ok(out)
}

fn divided(p: &SuiteParams) -> Result<Vec<Report>, SuiteError> {
    let b = p.bound(3, 2);
    let height = p.pick(3, 2);
    let rings = p.rings::<Int>(&[(RingChoice::CurveCohomology, 2), (chow(None, false, false), 2)])?;
    let mut out: Vec<Report> = rings.iter().map(|r| env::divided_check(r, b, height)).collect();
    if p.ring.is_none() {
        let flat = Ring::<Int>::curve_cohomology(1);
        out.push(env::flat_example_check(&flat, b, 3));
    }
    Ok(out)
}

fn heisenberg(p: &SuiteParams) -> Result<Vec<Report>, SuiteError> {
    let height = p.bound(3, 2);
    let rings = p.rings::<Int>(&[(RingChoice::CurveCohomology, 2), (chow(None, false, false), 2)])?;
    let mut out = Vec::new();
    for ring in &rings {
        out.push(liealg::heisenberg_check(ring)?);
        out.push(env::heisenberg_embedding_check(ring, height)?);
    }
    Ok(out)
}

fn fock_sl2(p: &SuiteParams) -> Result<Vec<Report>, SuiteError> {
    let total = p.bound(8, 5);
    let ring = Ring::<Int>::curve_cohomology(2);
    let mut out = vec![models::fock_sl2_check::<Int>(total)];
    for (d1, d2) in [(1, 1), (2, 3), (2, 0), (3, 3)] {
        out.push(models::row_column_commute_check(&ring, d1, d2, total));
    }
    for rank in 1..=2 {
        out.push(models::decompose_check(&ModuleTables::fock(rank, total.saturating_sub(rank + 1).max(2))));
    }
    Ok(out)
}

fn witt(p: &SuiteParams) -> Result<Vec<Report>, SuiteError> {
    let max_m = p.bound(4, 3);
    let model = ZeroCycleModel::new(3, p.genus.unwrap_or(4));
    Ok(vec![
        models::witt_check::<BigInt>(&model, max_m, p.pick(5, 4)),
        models::pontryagin_identity_check(p.pick(6, 4), 2),
    ])
}

fn taut_homomorphism(p: &SuiteParams) -> Result<Vec<Report>, SuiteError> {
    let b = p.bound(3, 2);
    let weight = p.pick(5, 4);
    let rings = p.rings::<Int>(&[(RingChoice::CurveCohomology, 2)])?;
    let mut out = Vec::new();
    for ring in &rings {
        let space = TautSpace::new(ring);
        out.push(models::homomorphism_check(&space, b, weight));
        out.push(models::bookkeeping_check(&space, b, weight));
    }
    Ok(out)
}

fn t_relations(p: &SuiteParams) -> Result<Vec<Report>, SuiteError> {
    let max_m = p.bound(2, 1);
    let max_k = p.k.unwrap_or(p.pick(2, 1));
    let weight = p.pick(4, 3);
    let rings = p.rings::<Int>(&[(chow(None, false, false), 2)])?;
    let mut out = Vec::new();
    for ring in &rings {
        let space = TautSpace::with_section_rule(ring)?;
        out.push(jaccalc::relations_t_sweep(&space, max_k, max_m, weight)?);
    }
    Ok(out)
}

fn x_equivalence(p: &SuiteParams) -> Result<Vec<Report>, SuiteError> {
    let max_n = p.bound(4, 3);
    let max_k = p.k.unwrap_or(p.pick(2, 1));
    let rings = p.rings::<Rat>(&[(chow(None, false, false), 2)])?;
    rings.iter().map(|r| Ok(jaccalc::x_rel_equiv_sweep(r, max_k, max_n)?)).collect()
}

fn x_sl2(p: &SuiteParams) -> Result<Vec<Report>, SuiteError> {
    let total = p.bound(5, 4);
    let mut out = Vec::new();
    for g in p.genera(3, 2) {
        let ring = match &p.ring {
            Some(r) => r.build::<Rat>(g)?,
            None => Ring::<Rat>::curve_chow_symbolic(g),
        };
        out.push(jaccalc::sl2_verify(&ring, total.min(4))?);
        out.push(jaccalc::fourier_involution_check(&ring, total)?);
    }
    Ok(out)
}

fn tau_pullback(p: &SuiteParams) -> Result<Vec<Report>, SuiteError> {
    let ks: Vec<u32> = match p.k {
        Some(k) => vec![k],
        None => (0..=p.pick(4, 2)).collect(),
    };
    let mut out = Vec::new();
    for g in p.genera(3, 2) {
        let ring = match &p.ring {
            Some(r) => r.build::<Rat>(g)?,
            None => Ring::<Rat>::curve_chow_symbolic(g),
        };
        for &k in &ks {
            out.push(jaccalc::tau_pullback_check(&ring, k)?);
        }
    }
    Ok(out)
}

fn gross_schoen(p: &SuiteParams) -> Result<Vec<Report>, SuiteError> {
    let mut out = Vec::new();
    for g in p.genera(3, 2) {
        let ks: Vec<u32> = match p.k {
            Some(k) if k < 2 || k > g + 2 => {
                return Err(SuiteError::InvalidBound(format!("k = {k} outside 2..={} for genus {g}", g + 2)));
            }
            Some(k) => vec![k],
            None => (2..=g + 2).collect(),
        };
        let rings: Vec<Arc<Ring<Rat>>> = match &p.ring {
            Some(r) => vec![r.build(g)?],
            None => vec![
                chow(None, true, false).build(g)?,
                chow(None, true, true).build(g)?,
            ],
        };
        for ring in &rings {
            for &k in &ks {
                out.push(jaccalc::gs_identity_check(ring, k)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_names() {
        assert_eq!(RingChoice::parse("curve-cohomology").unwrap(), RingChoice::CurveCohomology);
        match RingChoice::parse("curve-chow-psi3").unwrap() {
            RingChoice::CurveChow(o) => assert_eq!(o.psi_truncation, Some(3)),
            other => panic!("{other:?}"),
        }
        assert!(RingChoice::parse("curve-chow-psi").is_err());
        assert!(RingChoice::parse("torus").is_err());
    }

    #[test]
    fn unknown_suite_and_bounds() {
        let p = SuiteParams::default();
        assert!(matches!(run_suite("nope", &p), Err(SuiteError::UnknownSuite(_))));
        let p = SuiteParams { k: Some(9), genus: Some(2), ..SuiteParams::default() };
        assert!(matches!(run_suite("gross-schoen", &p), Err(SuiteError::InvalidBound(_))));
    }

    #[test]
    fn quick_combinat() {
        let p = SuiteParams { quick: true, ..SuiteParams::default() };
        let r = run_suite("combinat", &p).unwrap();
        assert!(r.passed());
        assert_eq!(r.parts.len(), 1);
    }
}
