use proptest::prelude::*;
use rootval::scalar::rat;
use rootval::spectral::MatrixSeries;
use rootval::{QPoly, Rational};
use rootval_cli::text::{format_branch, format_matrix, format_polynomial, parse_branch, parse_germ, parse_matrix};
use rootval_cli::{run, Command, Inputs, Request, EXIT_INPUT, EXIT_OK};

fn arb_rational() -> impl Strategy<Value = Rational> {
    (prop_oneof![-9i64..=-1, 1i64..=9], 1i64..=6).prop_map(|(a, b)| rat(a, b))
}

fn arb_germ() -> impl Strategy<Value = QPoly> {
    prop::collection::btree_map((0u32..6, 0u32..6), arb_rational(), 0..6).prop_map(|terms| {
        QPoly::from_terms(terms.into_iter().map(|((a, b), c)| (vec![("x".to_string(), a), ("y".to_string(), b)], c)))
    })
}

fn arb_matrix() -> impl Strategy<Value = MatrixSeries> {
    (1usize..=3, 1i64..=8).prop_flat_map(|(d, trunc)| {
        prop::collection::vec(prop::collection::btree_map(0i64..trunc, arb_rational(), 0..3), d * d).prop_map(
            move |entries| {
                let rows: Vec<Vec<Vec<(i64, Rational)>>> = entries
                    .chunks(d)
                    .map(|row| row.iter().map(|e| e.clone().into_iter().collect()).collect())
                    .collect();
                MatrixSeries::new(d, trunc, rows).unwrap()
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomials_print_and_parse_back(f in arb_germ()) {
        let text = format_polynomial(&f);
        prop_assert_eq!(parse_germ(&text).unwrap(), f, "{}", text);
    }

    #[test]
    fn branches_print_and_parse_back(
        d in 1u64..=5,
        terms in prop::collection::btree_map(0i64..15, arb_rational(), 1..5),
        finite in any::<bool>(),
    ) {
        let top = *terms.keys().last().unwrap();
        let trunc = finite.then_some(top + 3);
        let terms: Vec<(i64, Rational)> = terms.into_iter().collect();
        let b = rootval::branch::Branch::from_rational(d, &terms, trunc).unwrap();
        let text = format_branch(&b);
        let back = parse_branch(&text).unwrap();
        prop_assert_eq!(format_branch(&back), text);
        prop_assert_eq!(back.y(), b.y());
        prop_assert_eq!(back.trunc(), b.trunc());
    }

    #[test]
    fn matrices_print_and_parse_back(m in arb_matrix()) {
        let text = format_matrix(&m);
        let back = parse_matrix(&text).unwrap();
        prop_assert_eq!(format_matrix(&back), text);
    }

    #[test]
    fn parser_never_panics(src in "[ -~]{0,40}") {
        let _ = parse_germ(&src);
        let _ = parse_branch(&src);
        let _ = parse_matrix(&src);
    }
}

fn request(command: Command, f: impl FnOnce(&mut Inputs)) -> rootval_cli::Response {
    let mut inputs = Inputs::default();
    f(&mut inputs);
    run(&Request::new(command, inputs))
}

#[test]
fn invariants_json_has_sorted_keys() {
    let r = request(Command::Invariants, |i| i.poly = Some("y^2 - x^3".into()));
    assert_eq!(r.exit_code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&r.output).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["certificates", "command", "inputs_echo", "result", "warnings"]);
    assert_eq!(v["result"]["mu"], 2);
    assert_eq!(v["result"]["delta"], 1);
}

#[test]
fn malformed_input_exits_with_the_input_code() {
    let r = request(Command::Invariants, |i| i.poly = Some("y^2 - z".into()));
    assert_eq!(r.exit_code, EXIT_INPUT);
    let v: serde_json::Value = serde_json::from_str(&r.output).unwrap();
    assert_eq!(v["error"], "UnknownVariable");
    let r = request(Command::Intersect, |i| i.branches = vec!["x = t^2; y = t^3".into()]);
    assert_eq!(r.exit_code, EXIT_INPUT);
}

#[test]
fn intersection_of_cusp_and_its_transpose() {
    let r = request(Command::Intersect, |i| {
        i.branches = vec!["x = t^2; y = t^3; trunc=inf".into(), "x = t^3; y = t^2; trunc=inf".into()]
    });
    assert_eq!(r.exit_code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&r.output).unwrap();
    assert_eq!(v["result"]["number"], 4);
}
