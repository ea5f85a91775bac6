//! Faces of finitely generated desk-scale cones, read through ranks.
//!
//! A face is represented by the generators it contains; the minimal face of a
//! set of generators has the rank of their sum.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use serde::Serialize;

use crate::cones::{ConeKind, HyperCone};
use crate::error::{check_dim, HyperError, Result};
use crate::gallery::{self, svec_outer, unsvec_f64, Spectrahedral};
use crate::linalg::{determinant, solve_columns};
use crate::num::{rat, to_f64, Rational};
use crate::report::{vector_json, CheckReport, Witness};
use crate::sampling::{self, SeededRng};
use crate::spectrum::{self, count_roots, exact_mult, Spectrum, SpectrumOptions};
use rand::Rng;

/// A cone together with explicit extreme-ray representatives.
#[derive(Debug, Clone)]
pub struct GeneratedFaceModel {
    pub cone: HyperCone,
    pub generators: Vec<Vec<Rational>>,
    pub label: String,
}

impl GeneratedFaceModel {
    /// Checks that every generator lies in the closed cone.
    pub fn new(cone: HyperCone, generators: Vec<Vec<Rational>>, label: impl Into<String>) -> Result<Self> {
        if generators.is_empty() {
            return Err(HyperError::precondition("a face model needs at least one generator"));
        }
        for (i, g) in generators.iter().enumerate() {
            check_dim(cone.dim(), g.len())?;
            if !cone.contains_exact(g)? {
                return Err(HyperError::precondition(format!("generator {i} is not in the cone")));
            }
        }
        Ok(GeneratedFaceModel {
            cone,
            generators,
            label: label.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    fn sum_of(&self, indices: &[usize]) -> Result<Vec<Rational>> {
        let mut s = vec![rat(0); self.cone.dim()];
        for &i in indices {
            let g = self
                .generators
                .get(i)
                .ok_or_else(|| HyperError::precondition(format!("generator index {i} out of range")))?;
            for (a, b) in s.iter_mut().zip(g) {
                *a += b;
            }
        }
        Ok(s)
    }
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    (0..n).map(|j| if i == j { rat(1) } else { rat(0) }).collect()
}

/// Coordinate rays of `orthant(n)`.
pub fn orthant_model(n: usize) -> Result<GeneratedFaceModel> {
    GeneratedFaceModel::new(gallery::orthant(n)?, (0..n).map(|i| unit(n, i)).collect(), format!("orthant:{n}"))
}

/// Coordinate rays measured by `x1² x2 x3`.
pub fn tilde_model() -> Result<GeneratedFaceModel> {
    GeneratedFaceModel::new(gallery::orthant_tilde(), (0..3).map(|i| unit(3, i)).collect(), "orthant-tilde:3")
}

/// Integer vector with entries in `[−range, range]`, not all zero.
fn random_int_vector(rng: &mut SeededRng, n: usize, range: i64) -> Vec<Rational> {
    loop {
        let u: Vec<i64> = (0..n).map(|_| rng.random_range(-range..=range)).collect();
        if u.iter().any(|&v| v != 0) {
            return u.into_iter().map(rat).collect();
        }
    }
}

/// Generators `svec(u uᵀ)` of `psd(n)`: a random integer basis `u_1..u_n`
/// (rejected unless exactly independent) followed by `extras` further random
/// integer vectors.
pub fn psd_model(n: usize, extras: usize, seed: u64) -> Result<GeneratedFaceModel> {
    let cone = gallery::psd(n)?;
    let mut rng = sampling::rng(seed);
    let basis = loop {
        let b: Vec<Vec<Rational>> = (0..n).map(|_| random_int_vector(&mut rng, n, 2)).collect();
        if !num_traits::Zero::is_zero(&determinant(&b)) {
            break b;
        }
    };
    let mut gens: Vec<Vec<Rational>> = basis.iter().map(|u| svec_outer(u)).collect();
    for _ in 0..extras {
        gens.push(svec_outer(&random_int_vector(&mut rng, n, 2)));
    }
    GeneratedFaceModel::new(cone, gens, format!("psd:{n}"))
}

/// Boundary rays `(c, a, b, 0, …)` of `soc(n)` from Pythagorean triples,
/// plus `(1, ±e_i)` for the remaining coordinates.
pub fn soc_model(n: usize) -> Result<GeneratedFaceModel> {
    let cone = gallery::soc(n)?;
    let mut gens = Vec::new();
    if n >= 3 {
        for ray in gallery::pythagorean_rays() {
            let mut g = ray;
            g.resize(n, rat(0));
            gens.push(g);
        }
    }
    for i in 1..n {
        for s in [1, -1] {
            let mut g = vec![rat(0); n];
            g[0] = rat(1);
            g[i] = rat(s);
            if !gens.contains(&g) {
                gens.push(g);
            }
        }
    }
    GeneratedFaceModel::new(cone, gens, format!("soc:{n}"))
}

/// The four extreme rays `(±1, 0, 1)`, `(0, ±1, 1)` of the ℓ1 cone.
pub fn l1_model() -> Result<GeneratedFaceModel> {
    let gens = [[1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1]]
        .iter()
        .map(|r| r.iter().map(|&v| rat(v)).collect())
        .collect();
    GeneratedFaceModel::new(gallery::l1_cone(), gens, "l1")
}

/// Boundary rays of the disc `x0 ≥ ‖(x1, x2)‖` under a determinantal
/// representation of it.
pub fn spectrahedral_disc_model(s: &Spectrahedral) -> Result<GeneratedFaceModel> {
    GeneratedFaceModel::new(s.cone.clone(), gallery::pythagorean_rays(), s.cone.label().to_string())
}

/// Rank of the minimal face containing the selected generators, i.e. the
/// exact rank of their sum.
pub fn face_rank_of_points(model: &GeneratedFaceModel, indices: &[usize]) -> Result<usize> {
    if indices.is_empty() {
        return Err(HyperError::precondition("no generators selected"));
    }
    let s = model.sum_of(indices)?;
    spectrum::exact_rank(&model.cone, &s)
}

/// Exact multiplicity of zero, from vanishing coefficients, cross-checked
/// against the Sturm zero count.
fn verified_mult(cone: &HyperCone, x: &[Rational]) -> Result<usize> {
    let m = exact_mult(cone, x)?;
    let sturm = count_roots(&cone.restriction_exact(x)?).zero;
    if m != sturm {
        return Err(HyperError::inconclusive(format!(
            "zero multiplicity {m} from coefficients but {sturm} from the Sturm count"
        )));
    }
    Ok(m)
}

/// A chain of faces `{0} ⊂ F_1 ⊂ … ⊂ F_r` with ranks `0, 1, …, r`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceChain {
    pub picks: Vec<usize>,
    #[serde(serialize_with = "serialize_points")]
    pub partial_sums: Vec<Vec<Rational>>,
    pub ranks: Vec<usize>,
    pub spectra: Vec<Spectrum>,
}

fn serialize_points<S: serde::Serializer>(v: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
    serde_json::Value::Array(v.iter().map(|p| vector_json(p)).collect()).serialize(s)
}

impl FaceChain {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("chain serializes")
    }

    /// Ranks go `0, 1, 2, …` with no gaps.
    pub fn increments_are_one(&self) -> bool {
        self.ranks.iter().enumerate().all(|(i, &r)| r == i)
    }
}

/// Greedy chain construction: starting from `start`, repeatedly add the
/// first generator whose inclusion raises the rank by exactly one, until the
/// rank reaches the degree.
///
/// Candidates are scanned by index, or in an order shuffled by `seed`.
/// Ranks are exact and every multiplicity is checked against a Sturm count.
pub fn build_chain(model: &GeneratedFaceModel, start: usize, seed: Option<u64>) -> Result<FaceChain> {
    if start >= model.len() {
        return Err(HyperError::precondition(format!("start index {start} out of range")));
    }
    let cone = &model.cone;
    let d = cone.degree();
    for (i, g) in model.generators.iter().enumerate() {
        let r = d - verified_mult(cone, g)?;
        if r != 1 {
            return Err(HyperError::precondition(format!("generator {i} has rank {r}, not 1")));
        }
    }
    let mut order: Vec<usize> = (0..model.len()).collect();
    if let Some(seed) = seed {
        order.shuffle(&mut sampling::rng(seed));
    }
    let opts = SpectrumOptions::default();
    let zero = vec![rat(0); cone.dim()];
    let mut chain = FaceChain {
        picks: vec![start],
        partial_sums: vec![zero.clone(), model.generators[start].clone()],
        ranks: vec![0, 1],
        spectra: vec![
            spectrum::eigenvalues_exact(cone, &zero, &opts)?,
            spectrum::eigenvalues_exact(cone, &model.generators[start], &opts)?,
        ],
    };
    let mut sum = model.generators[start].clone();
    let mut rank = 1;
    while rank < d {
        let mut extended = false;
        for &i in &order {
            if chain.picks.contains(&i) {
                continue;
            }
            let candidate: Vec<Rational> = sum.iter().zip(&model.generators[i]).map(|(a, b)| a + b).collect();
            let r = d - verified_mult(cone, &candidate)?;
            if r == rank + 1 {
                sum = candidate;
                rank = r;
                chain.picks.push(i);
                chain.spectra.push(spectrum::eigenvalues_exact(cone, &sum, &opts)?);
                chain.partial_sums.push(sum.clone());
                chain.ranks.push(rank);
                extended = true;
                break;
            }
        }
        if !extended {
            return Err(HyperError::precondition(format!(
                "chain stalled at rank {rank} of {d}: no generator raises the rank (picks {:?})",
                chain.picks
            )));
        }
    }
    Ok(chain)
}

/// Holds iff every generator has rank one; otherwise the first offending
/// generator is the witness.
pub fn rog_check(model: &GeneratedFaceModel, zero_tol: f64) -> Result<CheckReport> {
    let opts = SpectrumOptions {
        zero_tol,
        ..Default::default()
    };
    let base = CheckReport::holds().tol("zero_tol", zero_tol).with_samples(model.len());
    for (i, g) in model.generators.iter().enumerate() {
        let gf: Vec<f64> = g.iter().map(to_f64).collect();
        let s = spectrum::eigenvalues(&model.cone, &gf, &opts)?;
        let float_rank = match s.checked_rank() {
            Ok(r) => r,
            Err(e) => return Ok(CheckReport::inconclusive(e.to_string()).tol("zero_tol", zero_tol)),
        };
        let exact_rank = model.cone.degree() - verified_mult(&model.cone, g)?;
        if float_rank != exact_rank {
            return Ok(CheckReport::inconclusive(format!(
                "generator {i}: float rank {float_rank} but exact rank {exact_rank}"
            ))
            .tol("zero_tol", zero_tol));
        }
        if exact_rank != 1 {
            return Ok(CheckReport::fails(Witness::Point(g.clone()))
                .with_samples(i + 1)
                .tol("zero_tol", zero_tol)
                .diag("generator", i)
                .diag("rank", exact_rank)
                .diag("eigenvalues", s.eigenvalues.clone()));
        }
    }
    Ok(base)
}

/// Restriction of `D_e^m p` to the span of `basis`, where `m` is the zero
/// multiplicity of `z`, as a cone in basis coordinates along the coordinates
/// of `z`.
pub fn face_restrict(cone: &HyperCone, z: &[Rational], basis: &[Vec<Rational>]) -> Result<HyperCone> {
    check_dim(cone.dim(), z.len())?;
    if basis.is_empty() {
        return Err(HyperError::precondition("empty basis"));
    }
    if !cone.contains_exact(z)? {
        return Err(HyperError::precondition("z is not in the cone"));
    }
    let m = verified_mult(cone, z)?;
    let coords = solve_columns(basis, z)?;
    let rows: Vec<Vec<Rational>> = (0..cone.dim()).map(|i| basis.iter().map(|b| b[i].clone()).collect()).collect();
    let q = cone.derivative_chain()[m].substitute(&rows)?;
    let qz = q.eval(&coords)?;
    if !num_traits::Signed::is_positive(&qz) {
        return Err(HyperError::precondition(format!(
            "restricted polynomial is not positive at z (value {qz}); wrong basis or multiplicity"
        )));
    }
    Ok(HyperCone::new(q, coords, format!("{} face (m={m})", cone.label()))?.with_flags(cone.minimality_assumed(), cone.rog()))
}

/// Face of a gallery cone generated by a point: the support for the orthant,
/// the column space (as an orthogonal projector) for the PSD cone.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum FaceDescriptor {
    Support(Vec<usize>),
    Range { rank: usize, projector: Vec<f64> },
}

impl FaceDescriptor {
    pub fn agrees_with(&self, other: &FaceDescriptor, tol: f64) -> bool {
        match (self, other) {
            (FaceDescriptor::Support(a), FaceDescriptor::Support(b)) => a == b,
            (FaceDescriptor::Range { rank: ra, projector: pa }, FaceDescriptor::Range { rank: rb, projector: pb }) => {
                ra == rb && pa.iter().zip(pb).all(|(x, y)| (x - y).abs() <= tol)
            }
            _ => false,
        }
    }
}

/// Entries or eigenvalues above `tol · max(1, scale)` count as nonzero.
pub fn face_descriptor(cone: &HyperCone, z: &[f64], tol: f64) -> Result<FaceDescriptor> {
    check_dim(cone.dim(), z.len())?;
    match cone.kind() {
        ConeKind::Orthant(_) => {
            let cut = tol * sampling::inf_norm(z).max(1.0);
            Ok(FaceDescriptor::Support((0..z.len()).filter(|&i| z[i] > cut).collect()))
        }
        ConeKind::Psd(n) => {
            let eig = unsvec_f64(n, z).symmetric_eigen();
            let scale = eig.eigenvalues.iter().fold(1.0f64, |m, l| m.max(l.abs()));
            let keep: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > tol * scale).collect();
            let mut proj = DMatrix::<f64>::zeros(n, n);
            for &i in &keep {
                let v = eig.eigenvectors.column(i);
                proj += v * v.transpose();
            }
            Ok(FaceDescriptor::Range {
                rank: keep.len(),
                projector: proj.iter().copied().collect(),
            })
        }
        _ => Err(HyperError::Unsupported(format!(
            "no face descriptor for {}",
            cone.label()
        ))),
    }
}

#[cfg(test)]
mod tests;
