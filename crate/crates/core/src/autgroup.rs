//! Certification and refutation of cone automorphisms.
//!
//! Two tiers:
//! * exact: for rational maps, `κ = p(e)/p(Ae)` and the identity
//!   `κ·(p∘A) = p` is compared coefficient by coefficient;
//! * float: sampled membership preservation in both directions, for maps that
//!   are not rational (orthogonal matrices, exponential flows) or cones whose
//!   polynomial is not minimal. Every float refutation is re-verified exactly
//!   on the binary values of the point and the map.

use nalgebra::DMatrix;
use num_traits::{Signed, Zero};
use serde_json::json;

use crate::cones::HyperCone;
use crate::error::{check_dim, HyperError, Result};
use crate::faces::face_descriptor;
use crate::gallery::{self, psd_congruence, psd_congruence_f64};
use crate::linalg::LinearMap;
use crate::num::{abs_max, from_f64, to_f64, Rational};
use crate::report::{vector_json, CheckReport, Verdict, Witness};
use crate::sampling::{self, inf_norm};
use crate::spectrum;

/// Exact identity check for `A ∈ Aut(Λ₊(p, e))`.
///
/// Fails with the first differing coefficient of `κ·(p∘A)` and `p`, or with
/// `Ae` when it is not interior. A Holds verdict relies on `p` being minimal;
/// cones without that flag get a warning.
pub fn check_automorphism(cone: &HyperCone, a: &LinearMap) -> Result<CheckReport> {
    check_dim(cone.dim(), a.dim())?;
    if !a.invertible() {
        return Err(HyperError::Singular);
    }
    let ae = a.apply(cone.e())?;
    let pae = cone.p().eval(&ae)?;
    if !pae.is_positive() {
        return Ok(CheckReport::fails(Witness::Point(ae))
            .diag("tier", "exact")
            .diag("reason", "p(Ae) ≤ 0, so Ae is not interior"));
    }
    let kappa = cone.pe() / &pae;
    let lhs = cone.p().compose(a)?.scale(&kappa);
    if let Some((exp, expected, got)) = first_difference(cone.p(), &lhs)? {
        return Ok(CheckReport::fails(Witness::Coefficient { exp, expected, got })
            .with_kappa(kappa)
            .diag("tier", "exact")
            .diag("reason", "κ·(p∘A) ≠ p"));
    }
    if !cone.interior_exact(&ae)? {
        return Ok(CheckReport::fails(Witness::Point(ae))
            .with_kappa(kappa)
            .diag("tier", "exact")
            .diag("reason", "Ae is not interior"));
    }
    let mut report = CheckReport::holds().with_kappa(kappa).diag("tier", "exact");
    if !cone.minimality_assumed() {
        report = report.warn("polynomial not flagged minimal: the identity does not characterize automorphisms");
    }
    Ok(report)
}

/// First exponent (descending graded-lex) where `p` and `q` differ, with
/// `p`'s and `q`'s coefficients.
fn first_difference(p: &crate::polycore::HomoPoly, q: &crate::polycore::HomoPoly) -> Result<Option<(Vec<u32>, Rational, Rational)>> {
    let diff = q.sub(p)?;
    let first = diff.terms().next().map(|(exp, _)| exp.to_vec());
    Ok(first.map(|exp| {
        let (expected, got) = (p.coefficient(&exp), q.coefficient(&exp));
        (exp, expected, got)
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stabilizer {
    Fixed(Rational),
    NotFixed,
}

/// `Fixed(α)` iff `Ae = αe` exactly with `α > 0`.
pub fn stabilizer_check(a: &LinearMap, e: &[Rational]) -> Result<Stabilizer> {
    let ae = a.apply(e)?;
    let Some(i) = e.iter().position(|v| !v.is_zero()) else {
        return Err(HyperError::precondition("e is zero"));
    };
    let alpha = &ae[i] / &e[i];
    let fixed = alpha.is_positive() && ae.iter().zip(e).all(|(x, y)| *x == &alpha * y);
    Ok(if fixed { Stabilizer::Fixed(alpha) } else { Stabilizer::NotFixed })
}

/// Whether `(cone, k)` lies where the stabilizer formula is a theorem: ROG
/// with assumed minimality, `d ≥ 4` and `1 ≤ k ≤ d − 3`.
pub fn in_theorem_regime(cone: &HyperCone, k: usize) -> bool {
    let d = cone.degree();
    cone.rog() && cone.minimality_assumed() && d >= 4 && k >= 1 && k + 3 <= d
}

/// Checks `A ∈ Aut(Λ₊^(k))` and audits the prediction
/// `A ∈ Aut(Λ₊^(k)) ⇔ A ∈ Aut(Λ₊) and A fixes the ray ℝ₊e`.
///
/// The derived check is exact when `D_e^k p` is flagged minimal and float
/// otherwise. In the theorem regime any disagreement with the prediction is a
/// theorem violation; outside it only the always-valid inclusion
/// (`predicted ⇒ derived`) is audited.
pub fn check_deriv_automorphism(cone: &HyperCone, k: usize, a: &LinearMap, float: &FloatTier) -> Result<CheckReport> {
    let d = cone.degree();
    if k == 0 || k >= d {
        return Err(HyperError::DerivativeOrder { k, degree: d });
    }
    let derived = cone.derivative_cone(k)?;
    let base = check_automorphism(cone, a)?;
    let stab = stabilizer_check(a, cone.e())?;
    let mut report = if derived.cone().minimality_assumed() {
        check_automorphism(derived.cone(), a)?
    } else {
        float_automorphism_check_exact_map(derived.cone(), a, float)?
    };
    let regime = in_theorem_regime(cone, k);
    if !regime {
        report = report.warn(format!(
            "outside the theorem regime (ROG, d ≥ 4, 1 ≤ k ≤ d−3) for {} with k = {k}",
            cone.label()
        ));
    }
    let base_aut = base.is_holds();
    let fixed = matches!(stab, Stabilizer::Fixed(_));
    let predicted = base_aut && fixed;
    report = report
        .diag("k", k)
        .diag("base_automorphism", base_aut)
        .diag("base_report", serde_json::to_value(&base).expect("report serializes"))
        .diag(
            "stabilizer",
            match &stab {
                Stabilizer::Fixed(alpha) => json!(crate::num::format_rational(alpha)),
                Stabilizer::NotFixed => json!(null),
            },
        )
        .diag("predicted", predicted);
    if report.verdict == Verdict::Inconclusive {
        return Ok(report);
    }
    let derived_aut = report.is_holds();
    if regime && predicted != derived_aut {
        report = report.violation(format!(
            "prediction {predicted} but derived check {derived_aut} inside the theorem regime"
        ));
    } else if !regime && predicted && !derived_aut {
        report = report.violation("a stabilizing automorphism of the cone fails on the relaxation");
    }
    Ok(report)
}

/// Budget and tolerance of the float tier. Margins are relative to `‖·‖∞`:
/// a point counts as inside (outside) when `λ_min(x)/‖x‖∞ ≥ 10·tol`
/// (`≤ −10·tol`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatTier {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for FloatTier {
    fn default() -> Self {
        FloatTier {
            samples: 1000,
            seed: sampling::DEFAULT_SEED,
            tol: 1e-8,
        }
    }
}

/// A confirmed refutation: `x` and `Ax` lie on opposite sides of the cone.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipWitness {
    pub point: Vec<Rational>,
    pub image: Vec<Rational>,
    /// `true` when `x ∈ K` and `Ax ∉ K`; `false` when `x ∉ K` and `Ax ∈ K`
    /// (so `A⁻¹ K ⊄ K`).
    pub forward: bool,
}

#[derive(Debug, Clone, Default)]
struct SearchStats {
    samples: usize,
    skipped: usize,
    ambiguous: usize,
    unconfirmed: usize,
}

fn normalized_lambda_min(cone: &HyperCone, x: &[f64]) -> Option<f64> {
    let n = inf_norm(x);
    if n == 0.0 || !n.is_finite() {
        return None;
    }
    cone.lambda_min(x).ok().map(|l| l / n)
}

/// Exact confirmation that `x` is inside with margin `m` and `Ax` outside
/// with margin `m`, both relative to `‖·‖∞`.
fn confirm_pair(cone: &HyperCone, inside: &[Rational], outside: &[Rational], m: &Rational) -> Result<bool> {
    let mi = m * abs_max(inside);
    let mo = m * abs_max(outside);
    Ok(spectrum::exact_lambda_min_at_least(cone, inside, &mi)? && spectrum::exact_lambda_min_below(cone, outside, &mo)?)
}

/// Samples Gaussian points and boundary-biased points `y − (λ_min(y) − δ‖y‖∞)e`
/// with `|δ|` log-uniform in `[20·tol, 0.1]` on both sides of the boundary,
/// and looks for a pair `x`, `Ax` on opposite sides with margin.
fn witness_search(
    cone: &HyperCone,
    a_f: &DMatrix<f64>,
    a_q: &LinearMap,
    opts: &FloatTier,
    stop_at_first: bool,
) -> Result<(Option<MembershipWitness>, SearchStats)> {
    let n = cone.dim();
    check_dim(n, a_f.nrows())?;
    let mut rng = sampling::rng(opts.seed);
    let margin = 10.0 * opts.tol;
    let m = from_f64(margin)?;
    let mut stats = SearchStats::default();
    let mut found = None;
    let e = cone.e_f64();
    for i in 0..opts.samples {
        stats.samples += 1;
        let mut y = sampling::gaussian_vec(&mut rng, n);
        if i % 4 != 0 {
            let Some(l) = normalized_lambda_min(cone, &y) else {
                stats.skipped += 1;
                continue;
            };
            let lo = (20.0 * opts.tol).ln();
            let hi = 0.1f64.ln();
            let u: f64 = rand::Rng::random_range(&mut rng, lo..hi);
            let side = if i % 2 == 0 { -1.0 } else { 1.0 };
            let scale = inf_norm(&y);
            y = sampling::axpy(&y, -(l * scale - side * u.exp() * scale), e);
        }
        let ny = inf_norm(&y);
        if ny == 0.0 {
            stats.skipped += 1;
            continue;
        }
        let y = sampling::scaled(&y, 1.0 / ny);
        let ay: Vec<f64> = (a_f * nalgebra::DVector::from_column_slice(&y)).iter().copied().collect();
        let (Some(a), Some(b)) = (normalized_lambda_min(cone, &y), normalized_lambda_min(cone, &ay)) else {
            stats.skipped += 1;
            continue;
        };
        let forward = a >= margin && b <= -margin;
        let backward = a <= -margin && b >= margin;
        if forward || backward {
            let yq = y.iter().map(|&v| from_f64(v)).collect::<Result<Vec<_>>>()?;
            let ayq = a_q.apply(&yq)?;
            let ok = if forward {
                confirm_pair(cone, &yq, &ayq, &m)?
            } else {
                confirm_pair(cone, &ayq, &yq, &m)?
            };
            if ok {
                if found.is_none() {
                    found = Some(MembershipWitness {
                        point: yq,
                        image: ayq,
                        forward,
                    });
                }
                if stop_at_first {
                    break;
                }
            } else {
                stats.unconfirmed += 1;
            }
        } else if (a >= margin && b < -opts.tol) || (a <= -margin && b > opts.tol) {
            stats.ambiguous += 1;
        }
    }
    Ok((found, stats))
}

fn float_report(found: Option<MembershipWitness>, stats: SearchStats, opts: &FloatTier) -> CheckReport {
    let finish = |r: CheckReport| {
        r.with_samples(stats.samples)
            .tol("tol", opts.tol)
            .tol("margin", 10.0 * opts.tol)
            .diag("tier", "float")
            .diag("seed", opts.seed)
            .diag("skipped", stats.skipped)
            .diag("ambiguous", stats.ambiguous)
            .diag("unconfirmed", stats.unconfirmed)
    };
    if let Some(w) = found {
        let dir = if w.forward { "x in K, Ax not in K" } else { "x not in K, Ax in K" };
        return finish(
            CheckReport::fails(Witness::Point(w.point.clone()))
                .diag("image", vector_json(&w.image))
                .diag("direction", dir),
        );
    }
    if stats.ambiguous + stats.unconfirmed > 0 {
        return finish(CheckReport::inconclusive("images inside the tolerance band without a confirmed witness"));
    }
    if stats.skipped * 10 > stats.samples {
        return finish(CheckReport::inconclusive("too many samples with inconclusive spectra"));
    }
    finish(CheckReport::holds())
}

/// Float tier for a float map; witnesses are re-verified on its exact binary
/// entries.
pub fn float_automorphism_check(cone: &HyperCone, a: &DMatrix<f64>, opts: &FloatTier) -> Result<CheckReport> {
    if a.iter().any(|v| !v.is_finite()) {
        return Ok(CheckReport::inconclusive("map has non-finite entries"));
    }
    let a_q = LinearMap::from_f64(a)?;
    if !a_q.invertible() {
        return Err(HyperError::Singular);
    }
    let (found, stats) = witness_search(cone, a, &a_q, opts, true)?;
    Ok(float_report(found, stats, opts))
}

/// Float tier for an exact map.
pub fn float_automorphism_check_exact_map(cone: &HyperCone, a: &LinearMap, opts: &FloatTier) -> Result<CheckReport> {
    if !a.invertible() {
        return Err(HyperError::Singular);
    }
    let (found, stats) = witness_search(cone, &a.to_f64(), a, opts, true)?;
    Ok(float_report(found, stats, opts))
}

/// Searches for a membership witness against `A ∈ Aut(cone)`.
pub fn membership_witness(cone: &HyperCone, a: &LinearMap, opts: &FloatTier) -> Result<Option<MembershipWitness>> {
    Ok(witness_search(cone, &a.to_f64(), a, opts, true)?.0)
}

/// Gårding's inequality `Π p(x_i)^{1/d} ≤ P(x_1, …, x_d)` on interior points.
///
/// The gap is normalized: `P / Π p(x_i)^{1/d} − 1`. Holds iff the gap is at
/// least `−tol`. The report also records whether the tuple is pairwise
/// proportional (exactly) and whether that matches `gap ≤ tol`; the
/// equivalence assumes a pointed cone.
pub fn garding_check(cone: &HyperCone, xs: &[Vec<Rational>], tol: f64) -> Result<CheckReport> {
    let d = cone.degree();
    if xs.len() != d {
        return Err(HyperError::ArgumentCount { expected: d, got: xs.len() });
    }
    for (i, x) in xs.iter().enumerate() {
        check_dim(cone.dim(), x.len())?;
        if !cone.interior_exact(x)? {
            return Err(HyperError::NotInterior(format!("argument {i}")));
        }
    }
    let polar = cone.p().polar_form(xs)?;
    let log_mean = xs
        .iter()
        .map(|x| cone.p().eval(x).map(|v| to_f64(&v).ln()))
        .sum::<Result<f64>>()?
        / d as f64;
    let geometric = log_mean.exp();
    let gap = to_f64(&polar) / geometric - 1.0;
    let proportional = (0..d).all(|i| (i + 1..d).all(|j| crate::linalg::rank(&[xs[i].clone(), xs[j].clone()]) == 1));
    let consistent = proportional == (gap.abs() <= tol);
    let base = if gap >= -tol {
        CheckReport::holds()
    } else {
        CheckReport::fails(Witness::Point(xs.iter().flatten().cloned().collect()))
    };
    Ok(base
        .with_samples(1)
        .tol("tol", tol)
        .diag("polar", to_f64(&polar))
        .diag("geometric_mean", geometric)
        .diag("gap", gap)
        .diag("proportional", proportional)
        .diag("equality_case_consistent", consistent))
}

/// Spectral radius and a cone eigenvector for it.
///
/// `B = I + A/ρ` has `2` as its unique eigenvalue of largest modulus on the
/// Perron eigenspace; `B^N e` for `N = 2^60` (by repeated squaring) is the
/// spectral projection of the interior point `e`, which lies in the cone for
/// a cone-preserving `A`. The vector is checked to be an eigenvector and to
/// lie in the cone up to `√tol` relative to `‖z‖∞` (boundary eigenvectors
/// carry repeated zero eigenvalues, whose float error scales like the square
/// root of the rounding error); for a certified automorphism a miss is a
/// theorem violation.
pub fn perron_eigenvector(cone: &HyperCone, a: &DMatrix<f64>, tol: f64) -> Result<CheckReport> {
    let n = cone.dim();
    if a.nrows() != n || a.ncols() != n {
        return Err(HyperError::DimensionMismatch { expected: n, got: a.nrows() });
    }
    let rho = a.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    if rho == 0.0 || !rho.is_finite() {
        return Ok(CheckReport::inconclusive("spectral radius is zero or not finite"));
    }
    let mut b = DMatrix::<f64>::identity(n, n) + a / rho;
    for _ in 0..60 {
        b = &b * &b;
        let s = b.amax();
        if s == 0.0 || !s.is_finite() {
            return Ok(CheckReport::inconclusive("power iteration degenerated"));
        }
        b /= s;
    }
    let mut z = &b * nalgebra::DVector::from_column_slice(cone.e_f64());
    let zn = z.amax();
    if zn == 0.0 {
        return Ok(CheckReport::inconclusive("projection of e onto the Perron eigenspace vanished"));
    }
    z /= zn;
    let az = a * &z;
    let residual = (&az - &z * rho).amax() / (rho * z.amax());
    let zv: Vec<f64> = z.iter().copied().collect();
    let lmin = cone.lambda_min(&zv)? / inf_norm(&zv);
    let base = |r: CheckReport| {
        r.tol("tol", tol)
            .diag("radius", rho)
            .diag("eigen_residual", residual)
            .diag("lambda_min", lmin)
            .diag("vector", zv.clone())
    };
    if residual > tol.sqrt() {
        return Ok(base(CheckReport::inconclusive("iterate is not an eigenvector; eigenspace ambiguity")));
    }
    if lmin < -tol.sqrt() {
        let w = zv.iter().map(|&v| from_f64(v)).collect::<Result<Vec<_>>>()?;
        return Ok(base(CheckReport::fails(Witness::Point(w)).violation("spectral-radius eigenvector outside the cone")));
    }
    let w = zv.iter().map(|&v| from_f64(v)).collect::<Result<Vec<_>>>()?;
    Ok(base(CheckReport::holds().with_witness(Witness::Point(w))))
}

/// `A` maps the minimal face of the eigenvector `z` onto itself: supports
/// (orthant) or column spaces (PSD) of `z` and `Az` agree.
pub fn min_face_fix_check(cone: &HyperCone, a: &DMatrix<f64>, z: &[f64], tol: f64) -> Result<CheckReport> {
    check_dim(cone.dim(), z.len())?;
    let zv = nalgebra::DVector::from_column_slice(z);
    let az = a * &zv;
    let mu = zv.dot(&az) / zv.dot(&zv);
    let scale = a.amax().max(1.0) * zv.amax();
    if (&az - &zv * mu).amax() > tol.sqrt() * scale {
        return Err(HyperError::precondition("z is not an eigenvector of A"));
    }
    if cone.lambda_min(z)? < -tol.sqrt() * inf_norm(z) {
        return Err(HyperError::precondition("z is not in the cone"));
    }
    let azv: Vec<f64> = az.iter().copied().collect();
    let fz = face_descriptor(cone, z, tol.sqrt())?;
    let faz = face_descriptor(cone, &azv, tol.sqrt())?;
    let base = |r: CheckReport| {
        r.tol("tol", tol)
            .diag("eigenvalue", mu)
            .diag("face", serde_json::to_value(&fz).expect("descriptor serializes"))
            .diag("image_face", serde_json::to_value(&faz).expect("descriptor serializes"))
    };
    if fz.agrees_with(&faz, tol.sqrt()) {
        Ok(base(CheckReport::holds()))
    } else {
        let w = z.iter().map(|&v| from_f64(v)).collect::<Result<Vec<_>>>()?;
        Ok(base(CheckReport::fails(Witness::Point(w))))
    }
}

/// `A = αP` with `α > 0` and `P` a permutation.
pub fn is_scaled_permutation(a: &LinearMap) -> bool {
    let n = a.dim();
    let mut alpha: Option<&Rational> = None;
    let mut col_used = vec![false; n];
    for i in 0..n {
        let nz: Vec<usize> = (0..n).filter(|&j| !a.entry(i, j).is_zero()).collect();
        if nz.len() != 1 || col_used[nz[0]] {
            return false;
        }
        col_used[nz[0]] = true;
        let v = a.entry(i, nz[0]);
        if !v.is_positive() || alpha.is_some_and(|al| al != v) {
            return false;
        }
        alpha = Some(v);
    }
    true
}

/// Theorem-level classification on `ℝ₊^{n,(k)}`: `A` is an automorphism iff
/// `A = αP`. The prediction is confirmed by [`check_deriv_automorphism`];
/// predicted failures additionally get a membership witness from the search
/// oracle. `k = n − 2` is accepted with a warning (the relaxation is a
/// Lorentz-type cone whose group is larger).
pub fn classify_orthant_deriv(n: usize, k: usize, a: &LinearMap, search: &FloatTier) -> Result<CheckReport> {
    if n < 4 || k == 0 || k + 2 > n {
        return Err(HyperError::precondition(format!("need n ≥ 4 and 1 ≤ k ≤ n−2, got n = {n}, k = {k}")));
    }
    let cone = gallery::orthant(n)?;
    let predicted = is_scaled_permutation(a);
    let report = check_deriv_automorphism(&cone, k, a, search)?;
    classify_common(&cone, k, a, predicted, report, search, k + 2 == n)
}

fn classify_common(
    cone: &HyperCone,
    k: usize,
    a: &LinearMap,
    predicted: bool,
    mut report: CheckReport,
    search: &FloatTier,
    lorentz_like: bool,
) -> Result<CheckReport> {
    report = report.diag("classification_predicts", predicted);
    if lorentz_like {
        report = report.warn("k = n−2: the relaxation is linearly isomorphic to a Lorentz cone");
    }
    if report.is_fails() {
        let derived = cone.derivative_cone(k)?;
        match membership_witness(derived.cone(), a, search)? {
            Some(w) => {
                report = report
                    .diag("membership_witness", vector_json(&w.point))
                    .diag("membership_image", vector_json(&w.image))
                    .diag("membership_forward", w.forward)
                    .tol("witness_margin", 10.0 * search.tol);
            }
            None => report = report.diag("membership_witness", json!(null)),
        }
    }
    if report.verdict != Verdict::Inconclusive && !lorentz_like && predicted != report.is_holds() && !report.theorem_violation {
        report = report.violation("classification disagrees with the derived automorphism check");
    }
    Ok(report)
}

/// `MᵀM = μI` for some `μ > 0`, exactly.
pub fn is_scaled_orthogonal(m: &LinearMap) -> bool {
    let mtm = m.transpose().mul(m).expect("same size");
    let mu = mtm.entry(0, 0).clone();
    mu.is_positive() && mtm == LinearMap::scalar(m.dim(), mu)
}

/// Theorem-level classification on `S₊^{n,(k)}` for `L_M(X) = M X Mᵀ` with
/// rational `M`: an automorphism iff `M` is a positive multiple of an
/// orthogonal matrix. Only `n = 4` has a symbolic determinant here.
pub fn classify_psd_deriv(n: usize, k: usize, m: &LinearMap, search: &FloatTier) -> Result<CheckReport> {
    check_psd_regime(n, k)?;
    check_dim(n, m.dim())?;
    let cone = gallery::psd(n)?;
    let lm = psd_congruence(m)?;
    let predicted = is_scaled_orthogonal(m);
    let report = check_deriv_automorphism(&cone, k, &lm, search)?;
    classify_common(&cone, k, &lm, predicted, report, search, k + 2 == n)
}

fn check_psd_regime(n: usize, k: usize) -> Result<()> {
    if n < 4 || k == 0 || k + 2 > n {
        return Err(HyperError::precondition(format!("need n ≥ 4 and 1 ≤ k ≤ n−2, got n = {n}, k = {k}")));
    }
    if n > gallery::MAX_SYMBOLIC_N {
        return Err(HyperError::Unsupported(format!("symbolic PSD relaxation only up to n = {}", gallery::MAX_SYMBOLIC_N)));
    }
    Ok(())
}

/// Float variant for a float `M`: the prediction uses `‖MᵀM − μI‖ ≤ tol·μ`
/// and the check is the float tier on `L_M`.
pub fn classify_psd_deriv_f64(n: usize, k: usize, m: &DMatrix<f64>, opts: &FloatTier) -> Result<CheckReport> {
    check_psd_regime(n, k)?;
    if m.nrows() != n || m.ncols() != n {
        return Err(HyperError::DimensionMismatch { expected: n, got: m.nrows() });
    }
    let mtm = m.transpose() * m;
    let mu = mtm.trace() / n as f64;
    let predicted = mu > 0.0 && (&mtm - DMatrix::identity(n, n) * mu).amax() <= opts.tol.sqrt() * mu;
    let cone = gallery::psd(n)?;
    let derived = cone.derivative_cone(k)?;
    let mut report = float_automorphism_check(derived.cone(), &psd_congruence_f64(m), opts)?
        .diag("classification_predicts", predicted)
        .diag("k", k);
    if k + 2 == n {
        report = report.warn("k = n−2: the relaxation is linearly isomorphic to a Lorentz cone");
    } else if report.verdict != Verdict::Inconclusive && predicted != report.is_holds() {
        report = report.violation("classification disagrees with the float automorphism check");
    }
    Ok(report)
}

/// Singular-value projection: if `L_M ∈ Aut(λ⁻¹(K))` for `K = ℝ₊^{n,(k)}`
/// then `D² ∈ Aut(K)` where `D` holds the singular values of `M`.
///
/// The verdict is that of `D² ∈ Aut(K)` (float tier); the report records the
/// verdict for `L_M` and whether the implication is respected.
pub fn spectral_aut_projection(n: usize, k: usize, m: &DMatrix<f64>, opts: &FloatTier) -> Result<CheckReport> {
    let sv = m.clone().svd(false, false).singular_values;
    let d2 = DMatrix::from_diagonal(&sv.map(|s| s * s));
    let orthant_deriv = gallery::orthant_deriv(n, k)?;
    let mut report = float_automorphism_check(orthant_deriv.cone(), &d2, opts)?;
    let lm = classify_psd_deriv_f64(n, k, m, &FloatTier { seed: sampling::derive_seed(opts.seed, "lm"), ..*opts })?;
    let lm_aut = lm.is_holds();
    let consistent = !lm_aut || report.is_holds();
    report = report
        .diag("singular_values", sv.iter().copied().collect::<Vec<f64>>())
        .diag("lm_verdict", serde_json::to_value(lm.verdict).expect("verdict serializes"))
        .diag("implication_respected", consistent);
    if report.verdict != Verdict::Inconclusive && lm.verdict != Verdict::Inconclusive && !consistent {
        report = report.violation("L_M is an automorphism but D² is not");
    }
    Ok(report)
}

/// Exponential-flow probe: `exp(tL) ∈ Aut(Λ₊^(k))` for every `t` in the grid,
/// each by the float tier.
pub fn lie_probe(cone: &HyperCone, k: usize, l: &DMatrix<f64>, t_grid: &[f64], opts: &FloatTier) -> Result<CheckReport> {
    let target = cone.derivative_cone(k)?;
    let n = cone.dim();
    if l.nrows() != n || l.ncols() != n {
        return Err(HyperError::DimensionMismatch { expected: n, got: l.nrows() });
    }
    let mut inconclusive = None;
    let mut samples = 0;
    for (i, &t) in t_grid.iter().enumerate() {
        let flow = (l * t).exp();
        if flow.iter().any(|v| !v.is_finite()) {
            inconclusive = Some(format!("exp(tL) overflowed at t = {t}"));
            continue;
        }
        let step = FloatTier {
            seed: sampling::derive_seed(opts.seed, &format!("t{i}")),
            ..*opts
        };
        let r = float_automorphism_check(target.cone(), &flow, &step)?;
        samples += r.samples;
        match r.verdict {
            Verdict::FailsWithWitness => return Ok(r.with_samples(samples).diag("t", t)),
            Verdict::Inconclusive => inconclusive = Some(format!("inconclusive at t = {t}")),
            Verdict::Holds => {}
        }
    }
    let r = match inconclusive {
        Some(reason) => CheckReport::inconclusive(reason),
        None => CheckReport::holds(),
    };
    Ok(r.with_samples(samples)
        .tol("tol", opts.tol)
        .tol("margin", 10.0 * opts.tol)
        .diag("t_grid", t_grid.to_vec()))
}
