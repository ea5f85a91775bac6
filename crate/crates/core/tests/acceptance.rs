//! Acceptance suite: one line per criterion, each required to pass within its
//! wall-time budget. Independent oracles for the exact identities follow.

use std::io::Write;

use hypercone::cones::HyperCone;
use hypercone::gallery;
use hypercone::num::{rat, Rational};
use hypercone::sampling::{self, random_rational, DEFAULT_SEED};
use hypercone::spectrum::{eigenvalues_exact, SpectrumOptions};
use hypercone::suite::{run_suite, CRITERIA};

#[test]
fn acceptance_suite() {
    let result = run_suite(DEFAULT_SEED, None).expect("suite runs");
    assert_eq!(result.criteria.len(), CRITERIA.len());
    let mut bad = Vec::new();
    // written to the raw handle so the lines survive libtest's capture
    let mut err = std::io::stderr().lock();
    for c in &result.criteria {
        let timing = format!("{:.2}s of {}s", c.elapsed.as_secs_f64(), c.limit.as_secs());
        let within = if c.within_limit() { "" } else { " OVER TIME" };
        writeln!(err, "{} ({timing}{within})", c.summary_line()).unwrap();
        if !c.passed() || !c.within_limit() {
            bad.push(format!("{} {}: {:?}", c.id, c.name, c.details.first()));
        }
    }
    assert!(bad.is_empty(), "criteria not met:\n{}", bad.join("\n"));
}

/// `k!·[t^k] Π (x_i + t)` at `x`, by multiplying univariate linear factors.
fn product_oracle(x: &[Rational], k: usize) -> Rational {
    let mut coeffs = vec![rat(1)];
    for xi in x {
        let mut next = vec![rat(0); coeffs.len() + 1];
        for (j, c) in coeffs.iter().enumerate() {
            next[j] += c * xi;
            next[j + 1] += c;
        }
        coeffs = next;
    }
    (1..=k).fold(coeffs[k].clone(), |acc, i| acc * rat(i as i64))
}

#[test]
fn orthant_derivatives_match_univariate_oracle() {
    let mut rng = sampling::rng(DEFAULT_SEED);
    for n in 3..=8 {
        let cone = gallery::orthant(n).unwrap();
        for k in 0..=n {
            for _ in 0..20 {
                let x: Vec<Rational> = (0..n).map(|_| random_rational(&mut rng, -3, 3, 5)).collect();
                assert_eq!(cone.derivative_chain()[k].eval(&x).unwrap(), product_oracle(&x, k), "n = {n}, k = {k}");
            }
        }
    }
}

/// `D_e^k p(x)` for a product of linear forms `Π ⟨a_i, x⟩`, from the
/// univariate product `Π (⟨a_i, x⟩ + t⟨a_i, e⟩)`.
fn linear_product_oracle(forms: &[[i64; 3]], e: &[i64; 3], x: &[Rational], k: usize) -> Rational {
    let mut coeffs = vec![rat(1)];
    for f in forms {
        let at_x: Rational = f.iter().zip(x).map(|(a, xi)| rat(*a) * xi).sum();
        let at_e: i64 = f.iter().zip(e).map(|(a, b)| a * b).sum();
        let mut next = vec![rat(0); coeffs.len() + 1];
        for (j, c) in coeffs.iter().enumerate() {
            next[j] += c * &at_x;
            next[j + 1] += c * rat(at_e);
        }
        coeffs = next;
    }
    (1..=k).fold(coeffs[k].clone(), |acc, i| acc * rat(i as i64))
}

#[test]
fn l1_derivatives_match_closed_forms() {
    let l1 = gallery::l1_cone();
    let forms = [[1, 1, 1], [1, -1, 1], [-1, 1, 1], [-1, -1, 1]];
    let mut rng = sampling::rng(DEFAULT_SEED ^ 1);
    for _ in 0..50 {
        let x: Vec<Rational> = (0..3).map(|_| random_rational(&mut rng, -4, 4, 3)).collect();
        let (x1, x2, x3) = (&x[0], &x[1], &x[2]);
        let d1 = rat(4) * x3 * (x3 * x3 - x1 * x1 - x2 * x2);
        let d2 = rat(4) * (rat(3) * x3 * x3 - x1 * x1 - x2 * x2);
        assert_eq!(l1.derivative_chain()[1].eval(&x).unwrap(), d1);
        assert_eq!(l1.derivative_chain()[2].eval(&x).unwrap(), d2);
        assert_eq!(linear_product_oracle(&forms, &[0, 0, 1], &x, 1), d1);
        assert_eq!(linear_product_oracle(&forms, &[0, 0, 1], &x, 2), d2);
    }
}

#[test]
fn tilde_spectrum_of_first_unit_vector() {
    let tilde: HyperCone = gallery::orthant_tilde();
    let s = eigenvalues_exact(&tilde, &[rat(1), rat(0), rat(0)], &SpectrumOptions::default()).unwrap();
    assert_eq!(s.eigenvalues, vec![1.0, 1.0, 0.0, 0.0]);
}

#[test]
fn garding_closed_forms() {
    let o3 = gallery::orthant(3).unwrap();
    let ones = vec![rat(1); 3];
    let polar = o3.p().polar_form(&[ones.clone(), ones, vec![rat(1), rat(1), rat(4)]]).unwrap();
    assert_eq!(polar, rat(2));
    let scaled: Vec<Vec<Rational>> = (1..=3).map(|c| vec![rat(c); 3]).collect();
    assert_eq!(o3.p().polar_form(&scaled).unwrap(), rat(6));
}
