//! Hyperbolicity cones `Λ₊(p, e)` and their derivative relaxations.

use std::sync::Arc;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, HyperError, Result};
use crate::num::{abs_max, factorial, format_rational, from_f64, parse_rational, to_f64, Rational};
use crate::polycore::{FloatPoly, HomoPoly, PolyJson, UniPoly};
use crate::report::{vector_json, CheckReport, Witness};
use crate::sampling::{self, inf_norm};
use crate::spectrum::{self, count_roots, Spectrum, SpectrumOptions};

/// Three-valued membership; theorem checks only quantify over points with a
/// clear margin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Membership {
    In,
    Out,
    BoundaryAmbiguous,
}

/// Which gallery family a cone came from; face descriptors depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConeKind {
    Orthant(usize),
    Psd(usize),
    Soc(usize),
    L1,
    Spectrahedral,
    Custom,
}

#[derive(Debug, Clone)]
struct ConeData {
    p: HomoPoly,
    e: Vec<Rational>,
    pe: Rational,
    label: String,
    minimality_assumed: bool,
    rog: bool,
    kind: ConeKind,
    chain: Vec<HomoPoly>,
    chain_f: Vec<FloatPoly>,
    e_f: Vec<f64>,
    coef_scale: Vec<f64>,
}

/// `Λ₊(p, e) = {x : every root of t ↦ p(te − x) is nonnegative}`.
///
/// The derivative chain `D_e^0 p, …, D_e^d p` is computed once and shared
/// between clones.
#[derive(Debug, Clone)]
pub struct HyperCone(Arc<ConeData>);

impl HyperCone {
    pub fn new(p: HomoPoly, e: Vec<Rational>, label: impl Into<String>) -> Result<Self> {
        check_dim(p.nvars(), e.len())?;
        if p.degree() == 0 {
            return Err(HyperError::InvalidPolynomial("degree must be at least 1".into()));
        }
        let pe = p.eval(&e)?;
        if !pe.is_positive() {
            return Err(HyperError::precondition(format!(
                "p(e) = {} is not positive",
                format_rational(&pe)
            )));
        }
        let chain = p.derivative_chain(&e)?;
        let chain_f = chain.iter().map(HomoPoly::to_float).collect();
        let coef_scale = chain.iter().map(|q| to_f64(&q.max_abs_coefficient())).collect();
        let e_f = e.iter().map(to_f64).collect();
        Ok(HyperCone(Arc::new(ConeData {
            p,
            e,
            pe,
            label: label.into(),
            minimality_assumed: false,
            rog: false,
            kind: ConeKind::Custom,
            chain,
            chain_f,
            e_f,
            coef_scale,
        })))
    }

    /// Sets the documented (not verified) minimality and ROG flags.
    pub fn with_flags(mut self, minimality_assumed: bool, rog: bool) -> Self {
        let data = Arc::make_mut(&mut self.0);
        data.minimality_assumed = minimality_assumed;
        data.rog = rog;
        self
    }

    pub fn with_kind(mut self, kind: ConeKind) -> Self {
        Arc::make_mut(&mut self.0).kind = kind;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        Arc::make_mut(&mut self.0).label = label.into();
        self
    }

    pub fn p(&self) -> &HomoPoly {
        &self.0.p
    }

    pub fn e(&self) -> &[Rational] {
        &self.0.e
    }

    pub fn e_f64(&self) -> &[f64] {
        &self.0.e_f
    }

    pub fn pe(&self) -> &Rational {
        &self.0.pe
    }

    pub fn degree(&self) -> usize {
        self.0.p.degree()
    }

    pub fn dim(&self) -> usize {
        self.0.p.nvars()
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn minimality_assumed(&self) -> bool {
        self.0.minimality_assumed
    }

    pub fn rog(&self) -> bool {
        self.0.rog
    }

    pub fn kind(&self) -> ConeKind {
        self.0.kind
    }

    /// `D_e^0 p, …, D_e^d p`.
    pub fn derivative_chain(&self) -> &[HomoPoly] {
        &self.0.chain
    }

    /// Coefficients of `t ↦ p(te − x)` in floating point.
    pub fn restriction_f64(&self, x: &[f64]) -> Vec<f64> {
        let d = self.degree();
        let mut fact = 1.0;
        self.0
            .chain_f
            .iter()
            .enumerate()
            .map(|(k, dk)| {
                if k > 0 {
                    fact *= k as f64;
                }
                let v = dk.eval(x) / fact;
                if (d - k) % 2 == 1 {
                    -v
                } else {
                    v
                }
            })
            .collect()
    }

    /// `(q(t), q'(t))` for `q(t) = p(te − x)`, evaluated at the point `te − x`.
    pub fn line_eval(&self, x: &[f64], t: f64) -> (f64, f64) {
        let y: Vec<f64> = x.iter().zip(&self.0.e_f).map(|(a, b)| t * b - a).collect();
        let q = self.0.chain_f[0].eval(&y);
        let dq = self.0.chain_f.get(1).map_or(0.0, |c| c.eval(&y));
        (q, dq)
    }

    /// Exact `t ↦ p(te − x)`; keeps all `d + 1` slots.
    pub fn restriction_exact(&self, x: &[Rational]) -> Result<UniPoly> {
        check_dim(self.dim(), x.len())?;
        let d = self.degree();
        let coeffs = self
            .0
            .chain
            .iter()
            .enumerate()
            .map(|(k, dk)| {
                let v = dk.eval(x)? / factorial(k);
                Ok(if (d - k) % 2 == 1 { -v } else { v })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(UniPoly::from_coeffs_full(coeffs))
    }

    pub fn spectrum(&self, x: &[f64], opts: &SpectrumOptions) -> Result<Spectrum> {
        spectrum::eigenvalues(self, x, opts)
    }

    pub fn lambda_min(&self, x: &[f64]) -> Result<f64> {
        Ok(self.spectrum(x, &SpectrumOptions::default())?.lambda_min())
    }

    /// Eigenvalue route: `In` if `λ_min > tol`, `Out` if `λ_min < −tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> Result<Membership> {
        check_dim(self.dim(), x.len())?;
        let lmin = self.lambda_min(x)?;
        Ok(if lmin > tol {
            Membership::In
        } else if lmin < -tol {
            Membership::Out
        } else {
            Membership::BoundaryAmbiguous
        })
    }

    pub fn in_interior(&self, x: &[f64], tol: f64) -> Result<bool> {
        Ok(self.contains(x, tol)? == Membership::In)
    }

    /// Exact closed-cone membership by Sturm counting.
    pub fn contains_exact(&self, x: &[Rational]) -> Result<bool> {
        Ok(spectrum::exact_membership(&self.restriction_exact(x)?))
    }

    /// Exact interior membership: every eigenvalue is strictly positive.
    pub fn interior_exact(&self, x: &[Rational]) -> Result<bool> {
        let c = count_roots(&self.restriction_exact(x)?);
        Ok(c.positive == self.degree())
    }

    pub fn derivative_cone(&self, k: usize) -> Result<DerivedCone> {
        DerivedCone::new(self, k)
    }

    /// Inequality route: `x ∈ Λ₊^(k)` iff `D_e^i p(x) ≥ 0` for `i = k..d−1`.
    ///
    /// Each value is compared against `−tol · scale_i` with
    /// `scale_i = max|coef(D_e^i p)| · ‖x‖₂^{d−i}`.
    pub fn contains_by_inequalities(&self, k: usize, x: &[f64], tol: f64) -> Result<Membership> {
        check_dim(self.dim(), x.len())?;
        let d = self.degree();
        if k >= d {
            return Err(HyperError::DerivativeOrder { k, degree: d });
        }
        let norm = sampling::two_norm(x);
        for i in k..d {
            let scale = self.0.coef_scale[i] * norm.powi((d - i) as i32);
            if self.0.chain_f[i].eval(x) < -tol * scale {
                return Ok(Membership::Out);
            }
        }
        Ok(Membership::In)
    }

    /// Searches for `x ∈ Λ₊^(k) \ Λ₊^(k−1)` with margin `10·tol` on both sides.
    ///
    /// Candidates are `y − ((a + b)/2) e` for Gaussian `y`, where `a` and `b`
    /// are the smallest eigenvalues of `y` in the two cones; this splits the
    /// gap `a − b` evenly. Accepted witnesses are rounded to rationals and
    /// re-verified exactly: `λ_min^(k)(x) ≥ m` and `λ_min^(k−1)(x) < −m`, with
    /// `m = 10·tol·‖x‖∞`.
    pub fn strict_containment_witness(&self, k: usize, budget: usize, seed: u64, tol: f64) -> Result<CheckReport> {
        let d = self.degree();
        if k == 0 || k >= d {
            return Err(HyperError::DerivativeOrder { k, degree: d });
        }
        let outer = self.derivative_cone(k)?;
        let inner = self.derivative_cone(k - 1)?;
        let margin = 10.0 * tol;
        let mut report_base = CheckReport::holds().tol("tol", tol).tol("margin", margin);
        if k == d - 1 {
            report_base = report_base.warn("k = d−1: the relaxation is a half-space");
        }
        if !(self.rog() && self.minimality_assumed()) {
            report_base = report_base.warn("cone is not flagged ROG with assumed minimality");
        }
        let mut rng = sampling::rng(seed);
        for attempt in 1..=budget {
            let y = sampling::gaussian_vec(&mut rng, self.dim());
            let (Ok(a), Ok(b)) = (outer.cone().lambda_min(&y), inner.cone().lambda_min(&y)) else {
                continue;
            };
            let x = sampling::axpy(&y, -(a + b) / 2.0, self.e_f64());
            let norm = inf_norm(&x);
            if norm == 0.0 || (a - b) / 2.0 < 2.0 * margin * norm {
                continue;
            }
            let xq = sampling::grid_vector(&sampling::scaled(&x, 1.0 / norm), 1_000_000_000);
            let m = from_f64(margin)? * abs_max(&xq);
            if spectrum::exact_lambda_min_at_least(outer.cone(), &xq, &m)?
                && spectrum::exact_lambda_min_below(inner.cone(), &xq, &m)?
            {
                let xf: Vec<f64> = xq.iter().map(to_f64).collect();
                return Ok(report_base
                    .diag("lambda_min_k", outer.cone().lambda_min(&xf)?)
                    .diag("lambda_min_k_minus_1", inner.cone().lambda_min(&xf)?)
                    .diag("point", vector_json(&xq))
                    .with_samples(attempt)
                    .with_witness(Witness::Point(xq)));
            }
        }
        let mut r = CheckReport::inconclusive(format!("no witness within a budget of {budget}"))
            .tol("tol", tol)
            .tol("margin", margin)
            .with_samples(budget);
        r.regime_warnings = report_base.regime_warnings;
        Ok(r)
    }

    pub fn descriptor(&self, k: Option<usize>) -> ConeDescriptor {
        ConeDescriptor {
            label: self.label().to_string(),
            polynomial: PolyJson::from(self.p()),
            e: self.e().iter().map(format_rational).collect(),
            k,
        }
    }

    pub fn from_descriptor(desc: &ConeDescriptor) -> Result<(HyperCone, Option<usize>)> {
        let p = HomoPoly::try_from(&desc.polynomial)?;
        let e = desc.e.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        Ok((HyperCone::new(p, e, desc.label.clone())?, desc.k))
    }
}

/// `{"label", "polynomial", "e", "k"?}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeDescriptor {
    pub label: String,
    pub polynomial: PolyJson,
    pub e: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

/// `Λ₊^(k) = Λ₊(D_e^k p, e)`.
#[derive(Debug, Clone)]
pub struct DerivedCone {
    base: HyperCone,
    k: usize,
    cone: HyperCone,
}

impl DerivedCone {
    fn new(base: &HyperCone, k: usize) -> Result<Self> {
        let d = base.degree();
        if k >= d {
            return Err(HyperError::DerivativeOrder { k, degree: d });
        }
        if k == 0 {
            return Ok(DerivedCone {
                base: base.clone(),
                k,
                cone: base.clone(),
            });
        }
        let p_k = base.derivative_chain()[k].clone();
        // D_e^k p stays minimal for ROG cones up to k = d−2; linear forms are trivially minimal
        let minimal = (base.rog() && base.minimality_assumed() && k + 2 <= d) || k + 1 == d;
        let cone = HyperCone::new(p_k, base.e().to_vec(), format!("{} (k={k})", base.label()))?
            .with_flags(minimal, false)
            .with_kind(base.kind());
        Ok(DerivedCone {
            base: base.clone(),
            k,
            cone,
        })
    }

    pub fn base(&self) -> &HyperCone {
        &self.base
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn p_k(&self) -> &HomoPoly {
        self.cone.p()
    }

    /// The relaxation as a cone in its own right.
    pub fn cone(&self) -> &HyperCone {
        &self.cone
    }

    /// Primary membership route (inequalities on the exact derivatives).
    pub fn contains(&self, x: &[f64], tol: f64) -> Result<Membership> {
        self.base.contains_by_inequalities(self.k, x, tol)
    }

    /// Cross-check route through the eigenvalues of `D_e^k p`.
    pub fn contains_by_eigenvalues(&self, x: &[f64], tol: f64) -> Result<Membership> {
        self.cone.contains(x, tol)
    }
}
