//! The acceptance run: every criterion at its full bounds, one PASS/FAIL
//! line each. Equality is exact throughout. Runs without the test harness
//! so the lines always reach stdout.

use std::time::Instant;

use opcalc::report::Report;
use opcalc::suites::{run_suite, SuiteParams};

const CRITERIA: [(u32, &str, &[&str]); 11] = [
    (1, "super-Jacobi identity, cohomology and Chow models", &["jacobi"]),
    (2, "Heisenberg relations after centralization", &["heisenberg"]),
    (3, "untwisted bracket in the L-basis", &["hv"]),
    (4, "divided-power relations, genus-1 collapse, rewriting confluence", &["divided", "pbw"]),
    (5, "sl2 and Lefschetz bijectivity on the Fock module", &["fock-sl2"]),
    (6, "Witt algebra, P_{m,1} realization, Pontryagin identity", &["witt"]),
    (7, "differential-operator realization is a bracket homomorphism", &["taut-homomorphism"]),
    (8, "T-operator relations on tautological classes", &["t-relations"]),
    (9, "X-relations by coefficient extraction, sl2, involution ladders", &["x-equivalence", "x-sl2"]),
    (10, "pullback routes agree, modified diagonal identity", &["tau-pullback", "gross-schoen"]),
    (11, "combinatorial kernel identities", &["combinat"]),
];

fn first_failure(r: &Report) -> Option<String> {
    if let Some(f) = r.failures.first() {
        return Some(format!("{} [{}]: {} != {}", f.identity, f.parameters, f.lhs, f.rhs));
    }
    r.parts.iter().find_map(first_failure)
}

fn main() {
    let params = SuiteParams::default();
    let mut failed = Vec::new();
    for (n, what, suites) in CRITERIA {
        let start = Instant::now();
        let mut checked = 0;
        let mut problem = None;
        for s in suites {
            match run_suite(s, &params) {
                Ok(r) => {
                    checked += r.checked;
                    if !r.passed() && problem.is_none() {
                        problem = Some(first_failure(&r).unwrap_or_else(|| "failed".into()));
                    }
                }
                Err(e) => problem = problem.or(Some(e.to_string())),
            }
        }
        let secs = start.elapsed().as_secs_f64();
        match problem {
            None => println!("PASS criterion {n:2}: {what} ({checked} checks, {secs:.1}s)"),
            Some(p) => {
                println!("FAIL criterion {n:2}: {what} ({checked} checks, {secs:.1}s): {p}");
                failed.push(n);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
