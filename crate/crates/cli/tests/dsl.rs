use std::sync::Arc;

use opcalc::liealg::basis_gens;
use opcalc::models::TautSpace;
use opcalc::suites::RingChoice;
use opcalc::RatRing;
use opcalc_cli::dsl::{Context, DslError, Value};
use proptest::prelude::*;

fn ctx(name: &str) -> Context {
    let ring: Arc<RatRing> = RingChoice::parse(name).unwrap().build(2).unwrap();
    let space = TautSpace::with_section_rule(&ring).unwrap();
    Context::new(&ring, space)
}

fn eval(cx: &Context, text: &str) -> String {
    let v = cx.parse_expr(text).unwrap_or_else(|e| panic!("{text}: {e}"));
    cx.show(&v)
}

fn round_trip(cx: &Context, text: &str) {
    let once = eval(cx, text);
    let twice = eval(cx, &once);
    assert_eq!(once, twice, "input {text}");
}

#[test]
fn bracket_of_heisenberg_pair() {
    let cx = ctx("curve-cohomology");
    assert_eq!(eval(&cx, "[P(0,1;1), P(1,0;1)]"), "P(0,0; 1)");
    assert!(matches!(cx.parse_expr("[P(0,1;1), P(1,0;1)]").unwrap(), Value::Lie(_)));
}

#[test]
fn ring_reduction_inside_argument() {
    let cx = ctx("curve-chow");
    assert_eq!(eval(&cx, "P(1,0; p0*p0)"), eval(&cx, "-psi*P(1,0; p0)"));
    assert_eq!(eval(&cx, "P(1,0; p0*p0)"), "(-psi)*P(1,0; p0)");
}

#[test]
fn syntax_errors_carry_positions() {
    let cx = ctx("curve-cohomology");
    match cx.parse_expr("[P(1,1;1)") {
        Err(DslError::Syntax { line: 1, col: 10, msg }) => assert!(msg.contains("end of input"), "{msg}"),
        other => panic!("{:?}", other.map(|v| cx.show(&v))),
    }
    match cx.parse_expr("P(1,1;1) +\n  $") {
        Err(DslError::Syntax { line: 2, col: 3, .. }) => {}
        other => panic!("{:?}", other.map(|v| cx.show(&v))),
    }
    assert!(matches!(cx.parse_expr("Q(1,1;1)"), Err(DslError::Syntax { .. })));
    assert!(matches!(cx.parse_expr("P(-1,1;1)"), Err(DslError::Syntax { .. })));
}

#[test]
fn type_errors() {
    let cx = ctx("curve-chow");
    let e = cx.parse_expr("[P(1,0;1)*P(0,1;1), x_1(1)]").err().unwrap();
    assert!(matches!(e, DslError::Type { line: 1, col: 1, .. }), "{e}");
    assert!(matches!(cx.parse_expr("x_1(1) + P(1,0;1)"), Err(DslError::Type { .. })));
    assert!(matches!(cx.parse_expr("P(1,1;K)^[2]"), Err(DslError::Type { .. })));
    assert!(matches!(cx.parse_expr("P(1,0; x_1(1))"), Err(DslError::Type { .. })));
    assert!(matches!(cx.parse_expr("nope"), Err(DslError::Eval { .. })));
}

#[test]
fn operators_act_on_everything_to_their_right() {
    let cx = ctx("curve-chow");
    // P(1,1; 1) measures the weight: x_1(1)*u^[N] has weight N+1
    assert_eq!(eval(&cx, "P(1,1;1)*x_1(1)*u^[N]"), eval(&cx, "(N+1)*x_1(1)*u^[N]"));
    assert_eq!(eval(&cx, "P(2,0;K)*u^[N]"), eval(&cx, "x_2(K)*u^[N]"));
}

#[test]
fn divided_powers() {
    let cx = ctx("curve-chow");
    assert_eq!(eval(&cx, "P(1,0;1)^[1]*P(1,0;1)^[1]"), eval(&cx, "2*P(1,0;1)^[2]"));
    assert_eq!(eval(&cx, "x_2(1)^[2]"), eval(&cx, "x_2(1)*x_2(1)/2"));
}

#[test]
fn x_basis_and_t_operators() {
    let cx = ctx("curve-chow");
    assert_eq!(eval(&cx, "X(0,0;p0)"), "1");
    assert_eq!(eval(&cx, "Xt(5,0;1)"), "0");
    round_trip(&cx, "[X(2,0;1), X(0,2;1)]");
    round_trip(&cx, "T(2,1;K)");
    assert_eq!(eval(&cx, "T(0,2;K)"), eval(&cx, "P(2,0;K)*1"));
}

#[test]
fn printed_values_reparse() {
    let cx = ctx("curve-chow");
    for text in [
        "P(1,0; p0*p0)",
        "1/2*P(0,0;K) - 3/4*psi*P(2,1;K)",
        "P(2,0;1)^[2]*P(1,1;K)",
        "P(0,1;1)^[2]*P(1,2;p0)",
        "P(1,1;1)*x_1(p0)^[2]*u^[N-1]",
        "x_2(K)*x_1(1) + N*u^[N+2]",
        "T(1,1;p0)",
        "Xt(1,1;1)*Xt(2,0;K) - Xt(2,0;K)*Xt(1,1;1)",
    ] {
        round_trip(&cx, text);
    }
}

#[test]
fn suite_brackets_reparse() {
    let cx = ctx("curve-cohomology");
    let ring = cx.ring().clone();
    let gens = basis_gens(&ring, 2, 2);
    let show = |g: &opcalc::liealg::PGen| format!("P({},{}; {})", g.m, g.k, ring.show_monomial(&g.a));
    for x in &gens {
        for y in &gens {
            round_trip(&cx, &format!("[{}, {}]", show(x), show(y)));
        }
    }
}

fn atom() -> impl Strategy<Value = String> {
    prop_oneof![
        (0u32..3, 0u32..3, prop::sample::select(vec!["1", "K", "p0", "psi*p0", "K^2"]))
            .prop_map(|(m, k, a)| format!("P({m},{k}; {a})")),
        (1u32..3, 1u32..3).prop_map(|(n, d)| format!("P({n},0; 1)^[{d}]")),
        (-3i64..4).prop_map(|c| c.to_string()),
        prop::sample::select(vec!["psi", "K"]).prop_map(str::to_string),
    ]
}

fn operator_expr() -> impl Strategy<Value = String> {
    let leaf = atom();
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) + ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            (inner.clone(), inner).prop_map(|(a, b)| format!("[{a}, {b}]")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_expressions_round_trip(text in operator_expr()) {
        let cx = ctx("curve-chow");
        match cx.parse_expr(&text) {
            Ok(v) => {
                let once = cx.show(&v);
                let again = cx.parse_expr(&once).map(|w| cx.show(&w));
                prop_assert_eq!(Ok(once.clone()), again, "input {}", text);
            }
            // brackets of scalars are type errors by design
            Err(DslError::Type { .. }) => {}
            Err(e) => prop_assert!(false, "{}: {}", text, e),
        }
    }
}
