//! Hyperbolic eigenvalues, rank and multiplicity.
//!
//! Float eigenvalues come from [`roots::real_roots`]; exact questions (zero
//! multiplicity, closed-cone membership, margins) are answered by Sturm counts
//! on the exact restriction `t ↦ p(te − x)`.

pub mod roots;
pub mod sturm;

use num_traits::Signed;
use serde::Serialize;

use crate::cones::HyperCone;
use crate::error::{check_dim, HyperError, Result};
use crate::num::{from_f64, Rational};
use crate::polycore::{HomoPoly, UniPoly};
use crate::sampling;

pub use roots::RootReport;
pub use sturm::{count_roots, square_free_decomposition, RootCounts};

pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-8;
pub const DEFAULT_ZERO_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    /// Imaginary parts above `residual_tol · max(1, max |λ|)` make a spectrum
    /// inconclusive.
    pub residual_tol: f64,
    pub zero_tol: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            residual_tol: DEFAULT_RESIDUAL_TOL,
            zero_tol: DEFAULT_ZERO_TOL,
        }
    }
}

/// Sorted hyperbolic eigenvalues of a point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    #[serde(rename = "eigs")]
    pub eigenvalues: Vec<f64>,
    pub residual: f64,
    pub rank: usize,
    pub mult: usize,
    pub zero_tol: f64,
}

impl Spectrum {
    pub fn new(mut eigenvalues: Vec<f64>, residual: f64, zero_tol: f64) -> Self {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        let rank = eigenvalues.iter().filter(|l| l.abs() > zero_tol).count();
        let mult = eigenvalues.len() - rank;
        Spectrum {
            eigenvalues,
            residual,
            rank,
            mult,
            zero_tol,
        }
    }

    pub fn degree(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    /// Some eigenvalue sits in `(zero_tol/4, 4·zero_tol)`.
    pub fn is_ambiguous(&self) -> bool {
        self.eigenvalues
            .iter()
            .any(|l| l.abs() > self.zero_tol / 4.0 && l.abs() < 4.0 * self.zero_tol)
    }

    pub fn checked_rank(&self) -> Result<usize> {
        if self.is_ambiguous() {
            return Err(HyperError::inconclusive(format!(
                "eigenvalue within the ambiguous band around zero_tol = {:e}: {:?}",
                self.zero_tol, self.eigenvalues
            )));
        }
        Ok(self.rank)
    }

    pub fn checked_mult(&self) -> Result<usize> {
        self.checked_rank().map(|r| self.degree() - r)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spectrum serializes")
    }
}

/// Roots of an exact univariate polynomial, descending, with residual.
pub fn real_roots(q: &UniPoly, tol: f64) -> Result<RootReport> {
    roots::real_roots(&q.to_f64(), tol)
}

fn check_residual(rep: &RootReport, tol: f64) -> Result<()> {
    let scale = rep.roots.iter().fold(1.0f64, |m, r| m.max(r.abs()));
    if rep.residual > tol * scale {
        return Err(HyperError::inconclusive(format!(
            "restriction has non-real roots (residual {:e})",
            rep.residual
        )));
    }
    Ok(())
}

/// Hyperbolic eigenvalues of a float point.
pub fn eigenvalues(cone: &HyperCone, x: &[f64], opts: &SpectrumOptions) -> Result<Spectrum> {
    check_dim(cone.dim(), x.len())?;
    let mut rep = roots::real_roots(&cone.restriction_f64(x), opts.residual_tol)?;
    if check_residual(&rep, opts.residual_tol).is_err() {
        // exactly repeated roots split into complex pairs under coefficient
        // rounding; the exact square-free route keeps them real
        let xq = x.iter().map(|&v| from_f64(v)).collect::<Result<Vec<_>>>()?;
        return eigenvalues_exact(cone, &xq, opts);
    }
    roots::polish_roots(&mut rep.roots, |t| cone.line_eval(x, t));
    Ok(Spectrum::new(rep.roots, rep.residual, opts.zero_tol))
}

/// Eigenvalues of an exact point; zero eigenvalues are exactly zero.
///
/// Roots are found per square-free factor, so repeated eigenvalues come out
/// as simple roots of their factor.
pub fn eigenvalues_exact(cone: &HyperCone, x: &[Rational], opts: &SpectrumOptions) -> Result<Spectrum> {
    let q = cone.restriction_exact(x)?;
    if q.degree().is_none() {
        return Err(HyperError::ZeroPolynomial);
    }
    let xf: Vec<f64> = x.iter().map(crate::num::to_f64).collect();
    let mut all = Vec::with_capacity(cone.degree());
    let mut residual = 0.0f64;
    for (f, m) in square_free_decomposition(&q) {
        if f.degree().unwrap_or(0) == 0 {
            continue;
        }
        let mut rep = real_roots(&f, opts.residual_tol)?;
        check_residual(&rep, opts.residual_tol)?;
        if m == 1 {
            roots::polish_roots(&mut rep.roots, |t| cone.line_eval(&xf, t));
        }
        residual = residual.max(rep.residual);
        for r in rep.roots {
            all.extend(std::iter::repeat_n(r, m));
        }
    }
    Ok(Spectrum::new(all, residual, opts.zero_tol))
}

pub fn rank(cone: &HyperCone, x: &[f64], zero_tol: f64) -> Result<usize> {
    let opts = SpectrumOptions {
        zero_tol,
        ..Default::default()
    };
    eigenvalues(cone, x, &opts)?.checked_rank()
}

pub fn mult(cone: &HyperCone, x: &[f64], zero_tol: f64) -> Result<usize> {
    rank(cone, x, zero_tol).map(|r| cone.degree() - r)
}

/// Multiplicity of the zero eigenvalue, read off the vanishing low
/// coefficients of the exact restriction.
pub fn exact_mult(cone: &HyperCone, x: &[Rational]) -> Result<usize> {
    Ok(cone.restriction_exact(x)?.zero_root_multiplicity())
}

pub fn exact_rank(cone: &HyperCone, x: &[Rational]) -> Result<usize> {
    Ok(cone.degree() - exact_mult(cone, x)?)
}

/// Recomputes the rank along a second interior direction `e2`.
pub fn rank_cross_check(cone: &HyperCone, x: &[f64], e2: &[Rational], opts: &SpectrumOptions) -> Result<usize> {
    let other = HyperCone::new(cone.p().clone(), e2.to_vec(), format!("{} (alt direction)", cone.label()))?;
    if !other.contains_exact(cone.e())? || !cone.contains_exact(e2)? {
        return Err(HyperError::precondition("alternative direction is not in the cone"));
    }
    let r1 = eigenvalues(cone, x, opts)?.checked_rank()?;
    let r2 = eigenvalues(&other, x, opts)?.checked_rank()?;
    if r1 != r2 {
        return Err(HyperError::inconclusive(format!(
            "rank {r1} along e but {r2} along the alternative direction"
        )));
    }
    Ok(r1)
}

/// Exact closed-cone membership: every root of the restriction is real and
/// nonnegative.
pub fn exact_membership(q: &UniPoly) -> bool {
    let c = count_roots(q);
    c.all_real() && c.negative == 0
}

/// `λ_min(x) ≥ m`, decided exactly.
pub fn exact_lambda_min_at_least(cone: &HyperCone, x: &[Rational], m: &Rational) -> Result<bool> {
    let shifted: Vec<Rational> = x.iter().zip(cone.e()).map(|(a, b)| a - m * b).collect();
    cone.contains_exact(&shifted)
}

/// `λ_min(x) < −m`, decided exactly.
pub fn exact_lambda_min_below(cone: &HyperCone, x: &[Rational], m: &Rational) -> Result<bool> {
    let shifted: Vec<Rational> = x.iter().zip(cone.e()).map(|(a, b)| a + m * b).collect();
    Ok(!cone.contains_exact(&shifted)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HyperbolicityVerdict {
    LooksHyperbolic,
    RefutedWithWitness,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyperbolicityCertificate {
    pub verdict: HyperbolicityVerdict,
    pub samples_checked: usize,
    pub worst_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "crate::num::serialize_opt_vector")]
    pub witness: Option<Vec<Rational>>,
}

/// Falsification test for hyperbolicity along `e`.
///
/// Samples alternate between standard Gaussian points and boundary-biased
/// points `y − λ_min(y)·e`. The first point whose restriction has a residual
/// above `tol` (relative to its largest root) is returned as a witness.
pub fn check_hyperbolic(
    p: &HomoPoly,
    e: &[Rational],
    nsamples: usize,
    seed: u64,
    tol: f64,
) -> Result<HyperbolicityCertificate> {
    check_dim(p.nvars(), e.len())?;
    let refuted = |samples: usize, worst: f64, w: Vec<Rational>| HyperbolicityCertificate {
        verdict: HyperbolicityVerdict::RefutedWithWitness,
        samples_checked: samples,
        worst_residual: worst,
        witness: Some(w),
    };
    if !p.eval(e)?.is_positive() {
        return Ok(refuted(0, f64::INFINITY, e.to_vec()));
    }
    let cone = HyperCone::new(p.clone(), e.to_vec(), "hyperbolicity probe")?;
    let mut rng = sampling::rng(seed);
    let mut worst = 0.0f64;
    for i in 0..nsamples {
        let mut x = sampling::gaussian_vec(&mut rng, p.nvars());
        if i % 2 == 1 {
            let rep = roots::real_roots(&cone.restriction_f64(&x), tol)?;
            if rep.residual <= tol * rep.roots.iter().fold(1.0f64, |m, r| m.max(r.abs())) {
                let lmin = rep.roots.last().copied().unwrap_or(0.0);
                for (xi, ei) in x.iter_mut().zip(cone.e_f64()) {
                    *xi -= lmin * ei;
                }
            }
        }
        let rep = roots::real_roots(&cone.restriction_f64(&x), tol)?;
        let scale = rep.roots.iter().fold(1.0f64, |m, r| m.max(r.abs()));
        let rel = rep.residual / scale;
        worst = worst.max(rel);
        if rel > tol {
            let w = x.iter().map(|&v| from_f64(v)).collect::<Result<Vec<_>>>()?;
            return Ok(refuted(i + 1, worst, w));
        }
    }
    Ok(HyperbolicityCertificate {
        verdict: HyperbolicityVerdict::LooksHyperbolic,
        samples_checked: nsamples,
        worst_residual: worst,
        witness: None,
    })
}
