use proptest::prelude::*;

use super::*;
use crate::num::{binomial, ratio};

fn ints(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| rat(x)).collect()
}

fn x1x2x3() -> HomoPoly {
    HomoPoly::from_terms(3, 3, [(vec![1, 1, 1], rat(1))]).unwrap()
}

fn x1sq_x2x3() -> HomoPoly {
    HomoPoly::from_terms(3, 4, [(vec![2, 1, 1], rat(1))]).unwrap()
}

/// (x3 + x1 + x2)(x3 + x1 − x2)(x3 − x1 + x2)(x3 − x1 − x2)
fn l1_quartic() -> HomoPoly {
    product_of_linear_forms(&[ints(&[1, 1, 1]), ints(&[1, -1, 1]), ints(&[-1, 1, 1]), ints(&[-1, -1, 1])]).unwrap()
}

fn poly(nvars: usize, degree: usize, terms: &[(&[u32], i64)]) -> HomoPoly {
    HomoPoly::from_terms(nvars, degree, terms.iter().map(|(e, c)| (e.to_vec(), rat(*c)))).unwrap()
}

#[test]
fn eval_examples() {
    assert_eq!(x1x2x3().eval(&ints(&[1, 1, 1])).unwrap(), rat(1));
    assert_eq!(x1sq_x2x3().eval(&ints(&[1, 0, 0])).unwrap(), rat(0));
    // all four factors equal x3 = 1
    assert_eq!(l1_quartic().eval(&ints(&[0, 0, 1])).unwrap(), rat(1));
}

#[test]
fn eval_dimension_mismatch() {
    assert_eq!(
        x1x2x3().eval(&ints(&[1, 1])).unwrap_err(),
        HyperError::DimensionMismatch { expected: 3, got: 2 }
    );
}

#[test]
fn construction_rejects_inhomogeneous_terms() {
    assert!(HomoPoly::from_terms(2, 2, [(vec![1, 0], rat(1))]).is_err());
    assert!(HomoPoly::from_terms(2, 1, [(vec![1, 0, 0], rat(1))]).is_err());
}

#[test]
fn canonical_form_drops_cancelled_terms() {
    let p = HomoPoly::from_terms(2, 1, [(vec![1, 0], rat(2)), (vec![1, 0], rat(-2)), (vec![0, 1], rat(3))]).unwrap();
    assert_eq!(p.num_terms(), 1);
    assert_eq!(p, poly(2, 1, &[(&[0, 1], 3)]));
}

#[test]
fn first_derivative_of_triple_product_is_s2() {
    let d1 = x1x2x3().dir_deriv(&ints(&[1, 1, 1]), 1).unwrap();
    assert_eq!(d1, elementary_symmetric(3, 2));
    assert_eq!(d1, poly(3, 2, &[(&[1, 1, 0], 1), (&[1, 0, 1], 1), (&[0, 1, 1], 1)]));
}

#[test]
fn l1_quartic_derivatives() {
    let e = ints(&[0, 0, 1]);
    let p = l1_quartic();
    // 4 x3 (x3^2 − x1^2 − x2^2)
    let d1 = poly(3, 3, &[(&[0, 0, 3], 4), (&[2, 0, 1], -4), (&[0, 2, 1], -4)]);
    // 4 (3 x3^2 − x1^2 − x2^2)
    let d2 = poly(3, 2, &[(&[0, 0, 2], 12), (&[2, 0, 0], -4), (&[0, 2, 0], -4)]);
    assert_eq!(p.dir_deriv(&e, 1).unwrap(), d1);
    assert_eq!(p.dir_deriv(&e, 2).unwrap(), d2);
}

#[test]
fn derivative_order_out_of_range() {
    let err = x1x2x3().dir_deriv(&ints(&[1, 1, 1]), 4).unwrap_err();
    assert_eq!(err, HyperError::DerivativeOrder { k: 4, degree: 3 });
    assert_eq!(x1x2x3().dir_deriv(&ints(&[1, 1, 1]), 0).unwrap(), x1x2x3());
}

#[test]
fn compose_examples() {
    let two = LinearMap::scalar(3, rat(2));
    assert_eq!(x1x2x3().compose(&two).unwrap(), x1x2x3().scale(&rat(8)));
    let swap = LinearMap::permutation(&[1, 0, 2]).unwrap();
    assert_eq!(x1x2x3().compose(&swap).unwrap(), x1x2x3());
    assert_eq!(x1sq_x2x3().compose(&swap).unwrap(), poly(3, 4, &[(&[1, 2, 1], 1)]));
    assert!(x1x2x3().compose(&LinearMap::identity(2)).is_err());
}

#[test]
fn restrict_line_examples() {
    let e = ints(&[1, 1, 1]);
    let (a, b, c) = (rat(2), ratio(-1, 3), rat(5));
    let q = x1x2x3().restrict_line(&e, &[a.clone(), b.clone(), c.clone()]).unwrap();
    let expected = UniPoly::from_coeffs(vec![-(&a * &b * &c), &a * &b + &a * &c + &b * &c, -(&a + &b + &c), rat(1)]);
    assert_eq!(q, expected);

    let q0 = x1x2x3().restrict_line(&e, &ints(&[0, 0, 0])).unwrap();
    assert_eq!(q0.coeffs(), &ints(&[0, 0, 0, 1])[..]);

    let soc = poly(3, 2, &[(&[2, 0, 0], 1), (&[0, 2, 0], -1), (&[0, 0, 2], -1)]);
    let q = soc.restrict_line(&ints(&[1, 0, 0]), &ints(&[0, 1, 0])).unwrap();
    assert_eq!(q, UniPoly::from_ints(&[-1, 0, 1]));
}

#[test]
fn restriction_keeps_full_length() {
    // p(e) = 0 along e = (1, 0, 0) for x2 x3, so the top slot is zero but kept
    let p = poly(3, 2, &[(&[0, 1, 1], 1)]);
    let q = p.restrict_line(&ints(&[1, 0, 0]), &ints(&[0, 1, 1])).unwrap();
    assert_eq!(q.declared_degree(), 2);
    assert_eq!(q.degree(), Some(0));
}

#[test]
fn polar_form_examples() {
    let p = x1x2x3();
    let e = ints(&[1, 1, 1]);
    assert_eq!(p.polar_form(&[e.clone(), e.clone(), e.clone()]).unwrap(), rat(1));

    let q = poly(2, 2, &[(&[1, 1], 1)]);
    let (u, v) = (ints(&[3, -2]), ints(&[5, 7]));
    // (u1 v2 + u2 v1) / 2 = (21 − 10) / 2
    assert_eq!(q.polar_form(&[u.clone(), v.clone()]).unwrap(), ratio(11, 2));

    let doubled: Vec<Rational> = u.iter().map(|x| x * rat(2)).collect();
    assert_eq!(q.polar_form(&[doubled, v]).unwrap(), rat(11));
}

#[test]
fn polar_form_argument_checks() {
    let p = x1x2x3();
    let e = ints(&[1, 1, 1]);
    assert_eq!(
        p.polar_form(&[e.clone(), e.clone()]).unwrap_err(),
        HyperError::ArgumentCount { expected: 3, got: 2 }
    );
    let big = HomoPoly::from_terms(1, 25, [(vec![25], rat(1))]).unwrap();
    let args = vec![ints(&[1]); 25];
    assert_eq!(big.polar_form(&args).unwrap_err(), HyperError::DegreeTooLarge { degree: 25, max: 24 });
}

#[test]
fn products_of_ones_derivatives_are_scaled_elementary_symmetric() {
    for n in 3..=6 {
        let p = product_of_linear_forms(&(0..n).map(|i| {
            let mut v = vec![rat(0); n];
            v[i] = rat(1);
            v
        }).collect::<Vec<_>>())
        .unwrap();
        let e = vec![rat(1); n];
        for k in 0..=n {
            let dk = p.dir_deriv(&e, k).unwrap();
            assert_eq!(dk, elementary_symmetric(n, n - k).scale(&factorial(k)), "n={n} k={k}");
        }
    }
}

#[test]
fn json_roundtrip_is_canonical() {
    let p = l1_quartic();
    let s = p.to_json();
    let back = HomoPoly::from_json(&s).unwrap();
    assert_eq!(back, p);
    assert_eq!(back.to_json(), s);
    // terms come out in descending graded-lex order
    let j: PolyJson = serde_json::from_str(&s).unwrap();
    assert_eq!(j.terms[0].exp, vec![4, 0, 0]);
}

#[test]
fn json_rejects_bad_terms() {
    let bad = r#"{"nvars": 2, "degree": 2, "terms": [{"exp": [1, 0], "num": "1", "den": "1"}]}"#;
    assert!(HomoPoly::from_json(bad).is_err());
    let zero_den = r#"{"nvars": 1, "degree": 1, "terms": [{"exp": [1], "num": "1", "den": "0"}]}"#;
    assert!(HomoPoly::from_json(zero_den).is_err());
}

#[test]
fn display_is_readable() {
    assert_eq!(x1sq_x2x3().to_string(), "x1^2*x2*x3");
    let p = poly(2, 2, &[(&[2, 0], 3), (&[0, 2], -1)]);
    assert_eq!(p.to_string(), "3*x1^2 - x2^2");
}

#[test]
fn float_snapshot_agrees() {
    let p = l1_quartic();
    let f = p.to_float();
    let x = [0.3, -0.7, 1.9];
    let exact = p.eval(&exact_point(&x)).unwrap();
    assert!((f.eval(&x) - crate::num::to_f64(&exact)).abs() < 1e-12);
}

fn exact_point(x: &[f64]) -> Vec<Rational> {
    x.iter().map(|&v| crate::num::from_f64(v).unwrap()).collect()
}

// ---- property tests ----

fn small_rat() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

fn rat_vec(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(small_rat(), n)
}

fn homo_poly(nvars: usize, degree: usize) -> impl Strategy<Value = HomoPoly> {
    let term = (proptest::collection::vec(0..nvars, degree), -5i64..=5);
    proptest::collection::vec(term, 1..6).prop_map(move |terms| {
        let terms = terms.into_iter().map(|(vars, c)| {
            let mut exp = vec![0u32; nvars];
            for v in vars {
                exp[v] += 1;
            }
            (exp, rat(c))
        });
        HomoPoly::from_terms(nvars, degree, terms).unwrap()
    })
}

fn poly_with_points(points: usize) -> impl Strategy<Value = (HomoPoly, Vec<Vec<Rational>>)> {
    (1usize..=3, 0usize..=4).prop_flat_map(move |(n, d)| {
        (homo_poly(n, d), proptest::collection::vec(rat_vec(n), points))
    })
}

fn square_map(n: usize) -> impl Strategy<Value = LinearMap> {
    proptest::collection::vec(proptest::collection::vec(-3i64..=3, n), n)
        .prop_map(|rows| LinearMap::from_int_rows(&rows).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivative_orders_compose((p, pts) in poly_with_points(1)) {
        let e = &pts[0];
        let d = p.degree();
        for k in 0..=d {
            for j in 0..=(d - k) {
                let lhs = p.dir_deriv(e, k).unwrap().dir_deriv(e, j).unwrap();
                prop_assert_eq!(lhs, p.dir_deriv(e, j + k).unwrap());
            }
        }
    }

    #[test]
    fn composition_is_associative(
        (p, a, b) in (1usize..=3, 1usize..=3).prop_flat_map(|(n, d)| (homo_poly(n, d), square_map(n), square_map(n)))
    ) {
        let lhs = p.compose(&a).unwrap().compose(&b).unwrap();
        let rhs = p.compose(&a.mul(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn restriction_matches_point_evaluation((p, pts) in poly_with_points(2), t0 in small_rat()) {
        let (e, x) = (&pts[0], &pts[1]);
        let q = p.restrict_line(e, x).unwrap();
        let point: Vec<Rational> = e.iter().zip(x).map(|(ei, xi)| &t0 * ei - xi).collect();
        prop_assert_eq!(q.eval(&t0), p.eval(&point).unwrap());
        prop_assert_eq!(q.clone(), p.restrict_line_by_substitution(e, x).unwrap());
        prop_assert_eq!(q.coeffs().last().cloned().unwrap(), p.eval(e).unwrap());
    }

    #[test]
    fn polar_form_on_diagonal_is_evaluation((p, pts) in poly_with_points(1)) {
        let x = &pts[0];
        let args = vec![x.clone(); p.degree()];
        prop_assert_eq!(p.polar_form(&args).unwrap(), p.eval(x).unwrap());
    }

    #[test]
    fn polar_form_is_symmetric((p, pts) in poly_with_points(4), rot in 0usize..4) {
        let d = p.degree();
        let args: Vec<Vec<Rational>> = pts.iter().take(d).cloned().collect();
        let mut shuffled = args.clone();
        if d > 0 {
            shuffled.rotate_left(rot % d);
            shuffled.reverse();
        }
        prop_assert_eq!(p.polar_form(&args).unwrap(), p.polar_form(&shuffled).unwrap());
    }

    #[test]
    fn derivatives_match_polar_form((p, pts) in poly_with_points(2)) {
        let (e, x) = (&pts[0], &pts[1]);
        let d = p.degree();
        for k in 0..=d {
            let mut args = vec![e.clone(); k];
            args.extend(std::iter::repeat_n(x.clone(), d - k));
            let polar = p.polar_form(&args).unwrap();
            let via_derivative = p.dir_deriv(e, k).unwrap().eval(x).unwrap();
            // D_e^k p(x) = d!/(d−k)! · P(e^k, x^{d−k})
            prop_assert_eq!(via_derivative, polar * binomial(d, k) * factorial(k));
        }
    }

    #[test]
    fn polar_form_is_multilinear((p, pts) in poly_with_points(5), c in small_rat()) {
        let d = p.degree();
        prop_assume!(d >= 1);
        let mut args: Vec<Vec<Rational>> = pts.iter().take(d).cloned().collect();
        let base = p.polar_form(&args).unwrap();
        let extra = pts[4].clone();
        let mut other = args.clone();
        other[0] = extra.clone();
        let with_extra = p.polar_form(&other).unwrap();
        args[0] = args[0].iter().zip(&extra).map(|(a, b)| &c * a + b).collect();
        prop_assert_eq!(p.polar_form(&args).unwrap(), &c * base + with_extra);
    }
}
