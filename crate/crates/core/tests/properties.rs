use num_traits::{One, Zero};
use proptest::prelude::*;
use rootval::branch::{
    branch_pairs, characteristic_exponents, characteristic_pairs, conjugate_difference_valuation, exponents_from_pairs,
    intersection_number, invert_parametrization, pairs_from_root_valuations, standard_branch, Branch, CharExponents,
    CharPairs,
};
use rootval::local::analyze_germ;
use rootval::poly::qpoly;
use rootval::resultant::resultant;
use rootval::scalar::{gcd_u64, int, rat};
use rootval::series::exponent_gcd;
use rootval::spectral::{
    equal_equisingularity, equal_root_valuation, equisingularity_datum, root_valuation_datum, RootValuationDatum,
};
use rootval::{Cyclotomic, Error, Field, QPoly, Rational, Series};

/// Every valid `(β₀; β₁, …)` with `β₀ ≤ max_b0` and `β_g ≤ max_top`.
fn all_exponents(max_b0: u64, max_top: u64) -> Vec<CharExponents> {
    enumerate_exponents(max_b0, max_top, false)
}

/// Those with `β₁ > β₀`, the exponents of a branch transversal to `x = 0`.
fn transversal_exponents(max_b0: u64, max_top: u64) -> Vec<CharExponents> {
    enumerate_exponents(max_b0, max_top, true)
}

fn enumerate_exponents(max_b0: u64, max_top: u64, transversal: bool) -> Vec<CharExponents> {
    fn extend(beta: &mut Vec<u64>, e: u64, max_top: u64, transversal: bool, out: &mut Vec<CharExponents>) {
        if e == 1 {
            out.push(CharExponents::new(beta.clone()).unwrap());
            return;
        }
        let start = match beta.len() {
            1 if transversal => beta[0] + 1,
            1 => 1,
            n => beta[n - 1] + 1,
        };
        for b in start..=max_top {
            if b % e == 0 {
                continue;
            }
            beta.push(b);
            extend(beta, gcd_u64(e, b), max_top, transversal, out);
            beta.pop();
        }
    }
    let mut out = Vec::new();
    for b0 in 2..=max_b0 {
        extend(&mut vec![b0], b0, max_top, transversal, &mut out);
    }
    out
}

#[test]
fn exponents_and_pairs_round_trip_exhaustively() {
    let all = all_exponents(12, 60);
    assert!(all.len() > 1000);
    for c in &all {
        let p = characteristic_pairs(c);
        assert_eq!(&exponents_from_pairs(&p), c, "{p}");
        assert_eq!(p.degree(), c.multiplicity());
        assert_eq!(p.len(), c.genus());
        let back = pairs_from_root_valuations(&p.root_valuations()).unwrap();
        assert_eq!(back, p);
    }
}

/// Valuation of `y(ζ^j t) − y(t)` read directly off the coefficients.
fn twisted_difference_order(b: &Branch, j: u64) -> Option<Rational> {
    let d = b.d();
    b.y()
        .terms()
        .iter()
        .find(|(k, _)| !(**k as u64 * j).is_multiple_of(d))
        .map(|(k, _)| Rational::new((*k).into(), (d as i64).into()))
}

#[test]
fn conjugate_valuations_match_the_cyclotomic_oracle() {
    for c in transversal_exponents(6, 30) {
        let b = standard_branch(&characteristic_pairs(&c));
        let d = b.d();
        let mut counts: Vec<(Rational, u64)> = Vec::new();
        for j in 1..d {
            let v = conjugate_difference_valuation(&b, j).unwrap();
            assert_eq!(Some(v.clone()), twisted_difference_order(&b, j), "{c:?}, twist {j}");
            match counts.iter_mut().find(|(q, _)| *q == v) {
                Some(e) => e.1 += 1,
                None => counts.push((v, 1)),
            }
        }
        counts.sort();
        let mut expected = c.conjugate_valuation_counts();
        expected.sort();
        assert_eq!(counts, expected, "{c:?}");
        assert_eq!(characteristic_exponents(&b).unwrap(), c);
    }
}

#[test]
fn conjugate_series_are_the_twisted_expansion() {
    let b = Branch::exact(4, &[(6, 1), (7, 1)]);
    for j in 0..4 {
        let twisted = Series::new(
            4,
            [(6, Cyclotomic::zeta_pow(4, 6 * j as i64)), (7, Cyclotomic::zeta_pow(4, 7 * j as i64))],
            None,
        );
        assert_eq!(b.conjugate(j), twisted.with_ram(b.conjugate(j).ram()));
    }
}

fn arb_pairs() -> impl Strategy<Value = CharPairs> {
    prop::collection::vec((1u64..40, 2u64..5), 1..=3).prop_filter_map("valid pairs", |v| CharPairs::new(v).ok())
}

fn arb_branch() -> impl Strategy<Value = Branch> {
    arb_branch_up_to(4)
}

fn arb_branch_up_to(max_d: u64) -> impl Strategy<Value = Branch> {
    (1u64..=max_d, prop::collection::btree_map(1i64..=12, prop_oneof![-4i64..=-1, 1i64..=4], 1..=5)).prop_filter_map(
        "primitive support",
        |(d, terms)| {
            let terms: Vec<(i64, i64)> = terms.into_iter().collect();
            let g = terms.iter().fold(d, |g, (k, _)| gcd_u64(g, *k as u64));
            (g == 1).then(|| Branch::exact(d, &terms))
        },
    )
}

fn arb_cyclotomic(m: u64) -> impl Strategy<Value = Cyclotomic> {
    prop::collection::vec((-5i64..=5, 1i64..=3), 1..=m as usize)
        .prop_map(move |v| Cyclotomic::from_coeffs(m, v.into_iter().map(|(a, b)| rat(a, b)).collect()))
}

fn arb_field_triple() -> impl Strategy<Value = (Cyclotomic, Cyclotomic, Cyclotomic)> {
    (1u64..=24).prop_flat_map(|m| (arb_cyclotomic(m), arb_cyclotomic(m), arb_cyclotomic(m)))
}

fn arb_series() -> impl Strategy<Value = Series> {
    (prop::collection::btree_map(0i64..12, -6i64..=6, 0..6), prop_oneof![Just(None), (4i64..16).prop_map(Some)])
        .prop_map(|(terms, trunc)| Series::new(1, terms.into_iter().map(|(k, c)| (k, Cyclotomic::from_i64(c))), trunc))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inversion_is_an_involution(p in arb_pairs()) {
        match invert_parametrization(&p) {
            Ok(q) => {
                prop_assert_eq!(q.degree(), exponents_from_pairs(&p).beta()[1]);
                prop_assert_eq!(invert_parametrization(&q).unwrap(), p);
            }
            Err(e) => prop_assert!(matches!(e, Error::DegenerateInput(_)), "{}", e),
        }
    }

    #[test]
    fn intersection_numbers_are_symmetric(a in arb_branch(), b in arb_branch()) {
        let ab = intersection_number(&a, &b);
        let ba = intersection_number(&b, &a);
        match (ab, ba) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
            (Err(x), Err(y)) => prop_assert_eq!(x.kind(), y.kind()),
            (x, y) => prop_assert!(false, "{:?} vs {:?}", x, y),
        }
    }

    #[test]
    fn branch_pairs_depend_only_on_the_support(b in arb_branch(), seed in prop::collection::vec(1i64..=7, 5)) {
        let rescaled: Vec<(i64, Rational)> = b
            .y()
            .terms()
            .keys()
            .zip(seed.iter().cycle())
            .map(|(k, s)| (*k, rat(if k % 2 == 0 { *s } else { -*s }, 3)))
            .collect();
        let c = Branch::from_rational(b.d(), &rescaled, None).unwrap();
        prop_assert_eq!(branch_pairs(&b).unwrap(), branch_pairs(&c).unwrap());
    }

    #[test]
    fn resultant_vanishes_iff_a_root_is_shared(
        a in prop::collection::vec(-4i64..=4, 1..=3),
        b in prop::collection::vec(-4i64..=4, 1..=3),
    ) {
        let linear = |r: i64| qpoly(&[(1, &[("x", 1)]), (-r, &[])]);
        let product = |rs: &[i64]| rs.iter().fold(QPoly::one(), |acc, &r| acc.mul(&linear(r)));
        let res = resultant(&product(&a), &product(&b), "x").unwrap();
        let shared = a.iter().any(|r| b.contains(r));
        prop_assert_eq!(res.is_zero(), shared);
        let expected = a.iter().flat_map(|&r| b.iter().map(move |&s| int(r - s))).fold(int(1), |acc, f| acc * f);
        prop_assert_eq!(res.as_constant().unwrap_or_else(|| int(0)), expected);
    }

    #[test]
    fn cyclotomic_arithmetic_is_a_commutative_ring((a, b, c) in arb_field_triple()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
        }
    }

    #[test]
    fn zeta_powers_cycle(m in 1u64..=24, k in -50i64..50) {
        let z = Cyclotomic::zeta(m);
        prop_assert_eq!(z.pow(m as u32), Cyclotomic::one());
        prop_assert_eq!(Cyclotomic::zeta_pow(m, k), Cyclotomic::zeta_pow(m, k + m as i64));
    }

    #[test]
    fn series_multiplication_is_associative_and_distributive(a in arb_series(), b in arb_series(), c in arb_series()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn unit_series_invert(a in arb_series(), c0 in 1i64..5) {
        let unit = &a.shift(1) + &Series::constant(Cyclotomic::from_i64(c0));
        let inv = unit.inverse(10).unwrap();
        let prod = &unit * &inv;
        let one = Series::constant(Cyclotomic::one());
        prop_assert!((&prod - &one).truncated(10).terms().is_empty());
    }

    #[test]
    fn root_valuations_are_ultrametric_and_relabel_invariantly(
        branches in prop::collection::vec(arb_branch_up_to(3), 1..=3),
        seed in any::<u64>(),
    ) {
        let Ok(datum) = root_valuation_datum(&branches) else { return Ok(()) };
        let d = datum.size();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if i != j && j != k && i != k {
                        let lower = datum.r(i, j).unwrap().min(datum.r(j, k).unwrap());
                        prop_assert!(datum.r(i, k).unwrap() >= lower);
                    }
                }
            }
        }
        let mut sigma: Vec<usize> = (0..d).collect();
        let mut s = seed;
        for i in (1..d).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            sigma.swap(i, (s >> 33) as usize % (i + 1));
        }
        let moved = datum.relabeled(&sigma);
        prop_assert!(equal_root_valuation(&datum, &moved).unwrap());
        prop_assert!(equal_root_valuation(&moved, &datum).unwrap());
    }

    #[test]
    fn branch_order_does_not_matter(branches in prop::collection::vec(arb_branch_up_to(3), 2..=3)) {
        let mut reversed = branches.clone();
        reversed.reverse();
        let (Ok(a), Ok(b)) = (root_valuation_datum(&branches), root_valuation_datum(&reversed)) else {
            return Ok(());
        };
        prop_assert!(equal_root_valuation(&a, &b).unwrap());
        let (ea, eb) = (equisingularity_datum(&branches).unwrap(), equisingularity_datum(&reversed).unwrap());
        prop_assert!(equal_equisingularity(&ea, &eb));
    }
}

#[test]
fn milnor_relation_on_brieskorn_germs() {
    for p in 2..=5u32 {
        for q in p..=7u32 {
            let f = qpoly(&[(1, &[("y", p)]), (-1, &[("x", q)])]);
            let g = analyze_germ(&f, None).unwrap();
            let r = gcd_u64(p as u64, q as u64);
            assert_eq!(g.mu.value, ((p - 1) * (q - 1)) as u64, "y^{p} - x^{q}");
            assert_eq!(g.germ.branches.len() as u64, r, "y^{p} - x^{q}");
            assert_eq!(g.mu.value + r, 2 * g.delta.value + 1, "y^{p} - x^{q}");
            assert_eq!(g.tau.value, g.mu.value, "quasi-homogeneous y^{p} - x^{q}");
        }
    }
}

#[test]
fn standard_branches_carry_their_pairs() {
    for c in transversal_exponents(8, 40) {
        let p = characteristic_pairs(&c);
        let b = standard_branch(&p);
        assert_eq!(exponent_gcd(b.y()), 1);
        assert_eq!(branch_pairs(&b).unwrap(), p);
    }
}

#[test]
fn equal_datum_detects_a_changed_contact() {
    let a = root_valuation_datum(&[Branch::exact(1, &[(1, 1)]), Branch::exact(1, &[(1, 1), (2, 1)])]).unwrap();
    let b = root_valuation_datum(&[Branch::exact(1, &[(1, 1)]), Branch::exact(1, &[(1, 1), (3, 1)])]).unwrap();
    assert!(!equal_root_valuation(&a, &b).unwrap());
    let bad = RootValuationDatum::new(
        vec![0, 1, 2],
        vec![vec![int(0), int(1), int(2)], vec![int(1), int(0), int(3)], vec![int(2), int(3), int(0)]],
    );
    assert!(bad.is_err());
}
