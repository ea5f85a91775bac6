use nalgebra::DMatrix;

use super::*;
use crate::cones::Membership;
use crate::linalg::solve_columns;
use crate::num::{factorial, ratio};
use crate::sampling::{gaussian_matrix, gaussian_vec, rng};
use crate::spectrum::{eigenvalues, eigenvalues_exact, exact_rank, SpectrumOptions};
use rand::Rng;

const TOL: f64 = 1e-9;

fn ints(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| rat(x)).collect()
}

fn diag(xs: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(xs))
}

#[test]
fn orthant_derivatives_are_scaled_elementary_symmetric() {
    for n in 3..=8 {
        let cone = orthant(n).unwrap();
        for k in 0..n {
            let expected = elementary_symmetric(n, n - k).scale(&factorial(k));
            assert_eq!(cone.derivative_chain()[k], expected, "n={n} k={k}");
        }
        for k in 1..n {
            assert!(orthant_deriv(n, k).is_ok());
        }
    }
    assert!(orthant_deriv(4, 0).is_err());
    assert!(orthant_deriv(4, 4).is_err());
}

#[test]
fn orthant_examples() {
    let o = orthant(5).unwrap();
    let s = eigenvalues_exact(&o, o.e(), &SpectrumOptions::default()).unwrap();
    assert_eq!(s.eigenvalues, vec![1.0; 5]);
    assert_eq!(exact_rank(&o, &ints(&[1, 0, 0, 0, 0])).unwrap(), 1);
    let d = orthant_deriv(4, 1).unwrap();
    assert_eq!(d.contains(&[-1.0, 3.0, 3.0, 3.0], TOL).unwrap(), Membership::In);
    // k = n−1 is the half-space Σx ≥ 0
    let h = orthant_deriv(4, 3).unwrap();
    assert_eq!(h.p_k().degree(), 1);
    assert_eq!(h.contains(&[5.0, -1.0, -1.0, -1.0], TOL).unwrap(), Membership::In);
    assert_eq!(h.contains(&[1.0, -1.0, -1.0, -1.0], TOL).unwrap(), Membership::Out);
}

#[test]
fn orthant_second_to_last_relaxation_is_lorentz_like() {
    // D_e^{n−2} p = (n−2)!·s_2 and s_2 = ((Σx)² − Σx²)/2 has signature (1, n−1)
    let n = 5;
    let d = orthant_deriv(n, n - 2).unwrap();
    let hessian: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { rat(0) } else { factorial(n - 2) }).collect())
        .collect();
    let m = DMatrix::from_fn(n, n, |i, j| crate::num::to_f64(&hessian[i][j]));
    let eig = m.symmetric_eigen().eigenvalues;
    assert_eq!(eig.iter().filter(|&&l| l > 0.0).count(), 1);
    assert_eq!(eig.iter().filter(|&&l| l < 0.0).count(), n - 1);
    assert_eq!(d.p_k().degree(), 2);
}

#[test]
fn psd_examples() {
    for n in 1..=4 {
        let cone = psd(n).unwrap();
        assert_eq!(cone.dim(), svec_dim(n));
        let s = eigenvalues_exact(&cone, cone.e(), &SpectrumOptions::default()).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0; n]);
    }
    let p3 = psd(3).unwrap();
    assert_eq!(exact_rank(&p3, &svec_outer(&ints(&[2, -1, 3]))).unwrap(), 1);
    let neg_identity: Vec<f64> = p3.e_f64().iter().map(|v| -v).collect();
    assert_eq!(p3.contains(&neg_identity, TOL).unwrap(), Membership::Out);
    let indefinite = svec_f64(&diag(&[1.0, -1.0, 2.0]));
    assert_eq!(p3.contains(&indefinite, TOL).unwrap(), Membership::Out);
    assert!(psd(0).is_err());
    assert!(psd(5).is_err());
}

#[test]
fn psd_eigenvalues_agree_with_eigensolver() {
    let mut r = rng(31);
    for n in 2..=4 {
        let cone = psd(n).unwrap();
        for _ in 0..1000 {
            let g = gaussian_matrix(&mut r, n);
            let x = (&g + g.transpose()) * 0.5;
            let s = eigenvalues(&cone, &svec_f64(&x), &SpectrumOptions::default()).unwrap();
            let mut eig: Vec<f64> = x.symmetric_eigen().eigenvalues.iter().copied().collect();
            eig.sort_by(|a, b| b.total_cmp(a));
            for (l, v) in s.eigenvalues.iter().zip(&eig) {
                assert!((l - v).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn psd_deriv_member_examples() {
    assert_eq!(psd_deriv_member(4, 1, &DMatrix::identity(4, 4), TOL).unwrap(), Membership::In);
    let x = diag(&[-1.0, 3.0, 3.0, 3.0]);
    // s3 vanishes here, so the eigenvalue route sits on the boundary
    assert_eq!(psd_deriv_member(4, 1, &x, TOL).unwrap(), Membership::BoundaryAmbiguous);
    let x = diag(&[-0.9, 3.0, 3.0, 3.0]);
    assert_eq!(psd_deriv_member(4, 1, &x, TOL).unwrap(), Membership::In);
    let x = diag(&[-5.0, 1.0, 1.0, 1.0]);
    assert_eq!(psd_deriv_member(4, 1, &x, TOL).unwrap(), Membership::Out);
    // the spectral route works past the symbolic cap
    assert_eq!(psd_deriv_member(6, 2, &DMatrix::identity(6, 6), TOL).unwrap(), Membership::In);
}

#[test]
fn spectral_membership_matches_symbolic_relaxation() {
    let mut r = rng(32);
    let band = 1e-6;
    for n in 2..=4 {
        for k in 1..n {
            let symbolic = psd_deriv(n, k).unwrap();
            let mut compared = 0;
            for _ in 0..1000 {
                let g = gaussian_matrix(&mut r, n);
                let x = (&g + g.transpose()) * 0.5 + DMatrix::identity(n, n);
                let a = psd_deriv_member(n, k, &x, band).unwrap();
                if a == Membership::BoundaryAmbiguous {
                    continue;
                }
                assert_eq!(symbolic.contains(&svec_f64(&x), TOL).unwrap(), a, "n={n} k={k}");
                assert_eq!(symbolic.contains_by_eigenvalues(&svec_f64(&x), TOL).unwrap(), a);
                compared += 1;
            }
            assert!(compared > 900);
        }
    }
}

#[test]
fn soc_examples() {
    let s = soc(3).unwrap();
    assert_eq!(exact_rank(&s, &ints(&[1, 1, 0])).unwrap(), 1);
    assert!(s.interior_exact(&ints(&[2, 1, 0])).unwrap());
    assert!(!s.contains_exact(&ints(&[0, 1, 0])).unwrap());
    for ray in pythagorean_rays() {
        assert!(s.contains_exact(&ray).unwrap());
        assert_eq!(exact_rank(&s, &ray).unwrap(), 1);
    }
    assert!(soc(1).is_err());
}

#[test]
fn l1_examples() {
    let l1 = l1_cone();
    assert_eq!(l1.p().eval(&ints(&[0, 0, 1])).unwrap(), rat(1));
    let s = eigenvalues_exact(&l1, &ints(&[0, 0, 1]), &SpectrumOptions::default()).unwrap();
    assert_eq!(s.eigenvalues, vec![1.0; 4]);
    for ray in [[1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1]] {
        assert!(l1.contains_exact(&ints(&ray)).unwrap());
        assert_eq!(exact_rank(&l1, &ints(&ray)).unwrap(), 2);
    }
    assert!(l1.minimality_assumed() && !l1.rog());
}

#[test]
fn l1_derivatives() {
    let l1 = l1_cone();
    let x = |i| HomoPoly::variable(3, i);
    let x3sq = x(2).pow(2);
    let rest = x(0).pow(2).add(&x(1).pow(2)).unwrap();
    let d1 = x(2).mul(&x3sq.sub(&rest).unwrap()).unwrap().scale(&rat(4));
    let d2 = x3sq.scale(&rat(3)).sub(&rest).unwrap().scale(&rat(4));
    assert_eq!(l1.derivative_chain()[1], d1);
    assert_eq!(l1.derivative_chain()[2], d2);
}

#[test]
fn spectrahedral_examples() {
    let a2 = soc_2x2().unwrap();
    assert_eq!(a2.cone.p(), soc(3).unwrap().p());
    let a1 = soc_arrow_3x3().unwrap();
    let expected = HomoPoly::variable(3, 0).mul(soc(3).unwrap().p()).unwrap();
    assert_eq!(a1.cone.p(), &expected);
    // a boundary ray of the disc: rank 1 for A_2, rank 2 for A_1
    let ray = ints(&[1, 1, 0]);
    assert_eq!(exact_rank(&a2.cone, &ray).unwrap(), 1);
    assert_eq!(a2.matrix_rank(&ray), 1);
    assert_eq!(exact_rank(&a1.cone, &ray).unwrap(), 2);
    assert_eq!(a1.matrix_rank(&ray), 2);

    let id3 = vec![ints(&[1, 0, 0]), ints(&[0, 1, 0]), ints(&[0, 0, 1])];
    assert!(spectrahedral(vec![id3.clone(), id3.clone()], ints(&[1, 1]), "dup").is_err());
    assert!(spectrahedral(vec![id3.clone()], ints(&[-1]), "neg").is_err());
    let asym = vec![ints(&[0, 1, 0]), ints(&[0, 0, 0]), ints(&[0, 0, 0])];
    assert!(spectrahedral(vec![id3, asym], ints(&[1, 0]), "asym").is_err());
}

#[test]
fn identity_slice_is_psd() {
    let n = 3;
    let mats: Vec<Vec<Vec<Rational>>> = (0..svec_dim(n))
        .map(|c| {
            let mut v = vec![rat(0); svec_dim(n)];
            v[c] = rat(1);
            unsvec(n, &v)
        })
        .collect();
    let s = spectrahedral(mats, svec(&unsvec(n, psd(n).unwrap().e())), "identity").unwrap();
    assert_eq!(s.cone.p(), psd(n).unwrap().p());
}

#[test]
fn spectrahedral_rank_pairing() {
    let mut r = rng(33);
    let opts = SpectrumOptions::default();
    let mut seen = [0usize; 4];
    for _ in 0..20 {
        let s = random_full_slice(&mut r);
        let columns: Vec<Vec<Rational>> = s.matrices.iter().map(|a| a.iter().flatten().cloned().collect()).collect();
        for _ in 0..50 {
            // target matrix Σ ±u uᵀ of a random rank
            let terms = r.random_range(0..=3);
            let mut target = vec![vec![rat(0); 3]; 3];
            for _ in 0..terms {
                let u: Vec<Rational> = (0..3).map(|_| rat(r.random_range(-3..=3))).collect();
                let sign = if r.random_bool(0.7) { rat(1) } else { rat(-1) };
                for i in 0..3 {
                    for j in 0..3 {
                        target[i][j] += &sign * &u[i] * &u[j];
                    }
                }
            }
            let flat: Vec<Rational> = target.iter().flatten().cloned().collect();
            let x = solve_columns(&columns, &flat).unwrap();
            assert_eq!(s.matrix_at(&x), target);
            let hyper = exact_rank(&s.cone, &x).unwrap();
            assert_eq!(hyper, s.matrix_rank(&x));
            seen[hyper] += 1;
        }
        // generic float points of the slice are full rank on both sides
        for _ in 0..10 {
            let x: Vec<Rational> = gaussian_vec(&mut r, 6).iter().map(|&v| crate::num::round_to_grid(v, 16)).collect();
            let xf: Vec<f64> = x.iter().map(crate::num::to_f64).collect();
            if let Ok(rank) = eigenvalues(&s.cone, &xf, &opts).and_then(|sp| sp.checked_rank()) {
                assert_eq!(rank, s.matrix_rank(&x));
            }
        }
    }
    assert!(seen.iter().all(|&c| c > 0), "{seen:?}");
}

#[test]
fn congruence_map_matches_matrix_product() {
    let m = LinearMap::from_int_rows(&[vec![1, 2, 0], vec![0, 1, -1], vec![3, 0, 1]]).unwrap();
    let lm = psd_congruence(&m).unwrap();
    let x = vec![ints(&[2, 1, 0]), ints(&[1, 3, -1]), ints(&[0, -1, 1])];
    let mut mxmt = vec![vec![rat(0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for a in 0..3 {
                for b in 0..3 {
                    mxmt[i][j] += m.entry(i, a) * &x[a][b] * m.entry(j, b);
                }
            }
        }
    }
    assert_eq!(lm.apply(&svec(&x)).unwrap(), svec(&mxmt));
    let lf = psd_congruence_f64(&m.to_f64());
    assert!((lf - lm.to_f64()).abs().max() < 1e-12);
}

#[test]
fn lie_generator_exponentiates_to_congruence() {
    let mut r = rng(34);
    let g = gaussian_matrix(&mut r, 3);
    let w = (&g - g.transpose()) * 0.3;
    let flow = psd_lie_generator(&w).exp();
    let direct = psd_congruence_f64(&w.exp());
    assert!((flow - direct).abs().max() < 1e-10);
}

#[test]
fn cone_ids() {
    let g = parse_cone_id("orthant:4:k=1").unwrap();
    assert_eq!(g.k, Some(1));
    assert_eq!(g.target().unwrap().p(), &elementary_symmetric(4, 3));
    assert_eq!(parse_cone_id("psd:3").unwrap().base.dim(), 6);
    assert_eq!(parse_cone_id("psd:4:k=1").unwrap().target().unwrap().degree(), 3);
    assert_eq!(parse_cone_id("soc:3").unwrap().base.degree(), 2);
    assert_eq!(parse_cone_id("l1").unwrap().base.degree(), 4);
    assert_eq!(parse_cone_id("orthant-tilde").unwrap().base.degree(), 4);
    assert!(parse_cone_id("orthant:4:k=4").is_err());
    assert!(parse_cone_id("cube:3").is_err());
    assert!(parse_cone_id("orthant:x").is_err());
}

#[test]
fn spectrahedral_json() {
    let text = r#"{"matrices": [[["1","0"],["0","1"]], [["1","0"],["0","-1"]], [["0","1/2"],["1/2","0"]]], "xbar": ["1","0","0"]}"#;
    let s = spectrahedral_from_json(text, "file").unwrap();
    assert_eq!(s.cone.p().coefficient(&[0, 0, 2]), ratio(-1, 4));
    assert!(spectrahedral_from_json("{}", "bad").is_err());
}
