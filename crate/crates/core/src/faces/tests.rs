use super::*;
use crate::gallery::{orthant, psd, soc_2x2, soc_arrow_3x3, svec};
use crate::num::ratio;
use crate::polycore::HomoPoly;
use crate::spectrum::exact_rank;

fn ints(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| rat(x)).collect()
}

#[test]
fn face_rank_examples() {
    let o4 = orthant_model(4).unwrap();
    assert_eq!(face_rank_of_points(&o4, &[0, 1]).unwrap(), 2);
    assert_eq!(face_rank_of_points(&o4, &[2]).unwrap(), 1);
    let p3 = psd_model(3, 0, 1).unwrap();
    assert_eq!(face_rank_of_points(&p3, &[0, 1]).unwrap(), 2);
    assert_eq!(face_rank_of_points(&p3, &[0, 1, 2]).unwrap(), 3);
    assert!(face_rank_of_points(&o4, &[]).is_err());
    assert!(face_rank_of_points(&o4, &[9]).is_err());
}

#[test]
fn face_rank_ignores_order_and_positive_scaling() {
    let p3 = psd_model(3, 3, 2).unwrap();
    let scaled: Vec<Vec<Rational>> = p3
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| g.iter().map(|v| v * ratio(i as i64 + 2, 3)).collect())
        .collect();
    let rescaled = GeneratedFaceModel::new(p3.cone.clone(), scaled, "scaled").unwrap();
    for subset in [vec![0, 3], vec![1, 4, 5], vec![5, 0, 2, 1]] {
        let r = face_rank_of_points(&p3, &subset).unwrap();
        let mut rev = subset.clone();
        rev.reverse();
        assert_eq!(face_rank_of_points(&p3, &rev).unwrap(), r);
        assert_eq!(face_rank_of_points(&rescaled, &subset).unwrap(), r);
    }
}

#[test]
fn orthant_chain() {
    let model = orthant_model(6).unwrap();
    let chain = build_chain(&model, 0, None).unwrap();
    assert_eq!(chain.ranks, (0..=6).collect::<Vec<_>>());
    assert_eq!(chain.picks, vec![0, 1, 2, 3, 4, 5]);
    assert!(chain.increments_are_one());
    let shuffled = build_chain(&model, 2, Some(7)).unwrap();
    assert!(shuffled.increments_are_one());
    assert_eq!(shuffled, build_chain(&model, 2, Some(7)).unwrap());
}

#[test]
fn psd_chain() {
    let model = psd_model(4, 4, 3).unwrap();
    let chain = build_chain(&model, 0, Some(11)).unwrap();
    assert_eq!(chain.ranks, vec![0, 1, 2, 3, 4]);
    for (s, r) in chain.partial_sums.iter().zip(&chain.ranks) {
        assert_eq!(crate::linalg::rank(&crate::gallery::unsvec(4, s)), *r);
    }
    let v: serde_json::Value = serde_json::from_str(&chain.to_json()).unwrap();
    assert_eq!(v["ranks"].as_array().unwrap().len(), 5);
    assert!(v["partial_sums"][1][0].is_string());
    assert!(v["spectra"][4]["eigs"].is_array());
}

#[test]
fn chain_needs_enough_generators() {
    let cone = orthant(3).unwrap();
    let single = GeneratedFaceModel::new(cone, vec![ints(&[1, 0, 0])], "single").unwrap();
    assert!(matches!(build_chain(&single, 0, None), Err(HyperError::Precondition(_))));
    // a rank-2 generator is rejected up front
    let bad = GeneratedFaceModel::new(orthant(3).unwrap(), vec![ints(&[1, 1, 0])], "bad").unwrap();
    assert!(build_chain(&bad, 0, None).is_err());
}

#[test]
fn rog_examples() {
    assert!(rog_check(&orthant_model(3).unwrap(), 1e-7).unwrap().is_holds());
    assert!(rog_check(&psd_model(3, 2, 4).unwrap(), 1e-7).unwrap().is_holds());
    assert!(rog_check(&soc_model(3).unwrap(), 1e-7).unwrap().is_holds());
    assert!(rog_check(&soc_model(5).unwrap(), 1e-7).unwrap().is_holds());

    let r = rog_check(&tilde_model().unwrap(), 1e-7).unwrap();
    assert!(r.is_fails());
    assert_eq!(r.witness_point().unwrap(), &ints(&[1, 0, 0])[..]);
    assert_eq!(r.diagnostics["rank"], 2);
    assert_eq!(r.diagnostics["eigenvalues"], serde_json::json!([1.0, 1.0, 0.0, 0.0]));

    let r = rog_check(&l1_model().unwrap(), 1e-7).unwrap();
    assert!(r.is_fails());
    let l1 = l1_model().unwrap();
    for g in &l1.generators {
        assert_eq!(exact_rank(&l1.cone, g).unwrap(), 2);
    }
}

#[test]
fn spectrahedral_representations_split() {
    let a2 = spectrahedral_disc_model(&soc_2x2().unwrap()).unwrap();
    assert!(rog_check(&a2, 1e-7).unwrap().is_holds());
    let a1 = spectrahedral_disc_model(&soc_arrow_3x3().unwrap()).unwrap();
    let r = rog_check(&a1, 1e-7).unwrap();
    assert!(r.is_fails());
    assert_eq!(r.diagnostics["rank"], 2);
}

#[test]
fn independent_rank_one_pairs_have_rank_two() {
    let model = psd_model(3, 40, 5).unwrap();
    let mut checked = 0;
    for i in 0..model.len() {
        for j in i + 1..model.len() {
            let u = &model.generators[i];
            let v = &model.generators[j];
            // proportional generators span the same ray
            let proportional = crate::linalg::rank(&[u.clone(), v.clone()]) == 1;
            let r = face_rank_of_points(&model, &[i, j]).unwrap();
            assert_eq!(r, if proportional { 1 } else { 2 });
            checked += 1;
        }
    }
    assert!(checked > 500);
}

#[test]
fn orthant_face_restriction() {
    let cone = orthant(4).unwrap();
    let basis = vec![ints(&[1, 0, 0, 0]), ints(&[0, 1, 0, 0])];
    let face = face_restrict(&cone, &ints(&[1, 1, 0, 0]), &basis).unwrap();
    // D_e² (x1x2x3x4) = 2 s_2, which restricts to 2 u1 u2
    let expected = HomoPoly::from_terms(2, 2, [(vec![1, 1], rat(2))]).unwrap();
    assert_eq!(face.p(), &expected);
    assert_eq!(face.e(), &ints(&[1, 1])[..]);
    for g in [ints(&[1, 0]), ints(&[0, 1])] {
        assert_eq!(exact_rank(&face, &g).unwrap(), 1);
    }
}

#[test]
fn psd_face_restriction() {
    let cone = psd(3).unwrap();
    let block = |i: usize, j: usize| {
        let mut m = vec![vec![rat(0); 3]; 3];
        m[i][j] = rat(1);
        m[j][i] = rat(1);
        svec(&m)
    };
    let basis = vec![block(0, 0), block(1, 1), block(0, 1)];
    let z = svec(&[ints(&[1, 0, 0]), ints(&[0, 1, 0]), ints(&[0, 0, 0])]);
    let face = face_restrict(&cone, &z, &basis).unwrap();
    assert_eq!(face.p(), psd(2).unwrap().p());
    // rank-one generators of the face stay rank one
    for u in [ints(&[1, 0]), ints(&[1, -2]), ints(&[3, 1])] {
        let g: Vec<Rational> = svec_outer(&[u[0].clone(), u[1].clone(), rat(0)]);
        let coords = solve_columns(&basis, &g).unwrap();
        assert_eq!(exact_rank(&face, &coords).unwrap(), 1);
    }
}

#[test]
fn interior_face_is_the_cone() {
    let cone = orthant(3).unwrap();
    let basis: Vec<Vec<Rational>> = (0..3).map(|i| unit(3, i)).collect();
    let face = face_restrict(&cone, &ints(&[1, 2, 3]), &basis).unwrap();
    assert_eq!(face.p(), cone.p());
}

#[test]
fn face_restriction_rejects_wrong_basis() {
    let cone = orthant(4).unwrap();
    // the basis misses the support of z
    let basis = vec![ints(&[1, 0, 0, 0]), ints(&[0, 0, 1, 0])];
    assert!(face_restrict(&cone, &ints(&[1, 1, 0, 0]), &basis).is_err());
    // a wider basis still restricts to a valid cone
    let too_big = vec![ints(&[1, 0, 0, 0]), ints(&[0, 1, 0, 0]), ints(&[0, 0, 1, 0])];
    assert!(face_restrict(&cone, &ints(&[1, 1, 0, 0]), &too_big).is_ok());
}

#[test]
fn face_descriptors() {
    let o3 = orthant(3).unwrap();
    assert_eq!(face_descriptor(&o3, &[1.0, 1.0, 0.0], 1e-9).unwrap(), FaceDescriptor::Support(vec![0, 1]));
    let p2 = psd(2).unwrap();
    let a = face_descriptor(&p2, &[1.0, 1.0, 1.0], 1e-9).unwrap();
    let b = face_descriptor(&p2, &[2.0, 2.0, 2.0], 1e-9).unwrap();
    assert!(a.agrees_with(&b, 1e-9));
    let c = face_descriptor(&p2, &[1.0, 1.0, -1.0], 1e-9).unwrap();
    assert!(!a.agrees_with(&c, 1e-9));
    assert!(face_descriptor(&crate::gallery::soc(3).unwrap(), &[1.0, 0.0, 0.0], 1e-9).is_err());
}
