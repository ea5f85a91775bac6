//! Concrete cones: orthant, PSD, second-order, ℓ1 and spectrahedral.
//!
//! Symmetric matrices are coordinatized by `svec`: the diagonal entries
//! `X_11, …, X_nn` followed by the off-diagonal entries `X_ij` (`i < j`) in
//! row-major order, with no `√2` scaling. The determinant then has integer
//! coefficients.

use std::fs;

use nalgebra::DMatrix;
use num_traits::{Signed, Zero};
use serde::Deserialize;

use crate::cones::{ConeKind, DerivedCone, HyperCone, Membership};
use crate::error::{HyperError, Result};
use crate::linalg::{determinant, rank, LinearMap, NumberLike};
use crate::num::{factorial, rat, Rational};
use crate::polycore::{elementary_symmetric, product_of_linear_forms, HomoPoly};
use crate::sampling::SeededRng;
use rand::Rng;

/// Largest matrix size with a symbolic determinant.
pub const MAX_SYMBOLIC_N: usize = 4;

/// `Π x_i` along the all-ones vector.
pub fn orthant(n: usize) -> Result<HyperCone> {
    if n == 0 {
        return Err(HyperError::precondition("orthant needs n ≥ 1"));
    }
    let forms: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { rat(1) } else { rat(0) }).collect())
        .collect();
    Ok(HyperCone::new(product_of_linear_forms(&forms)?, vec![rat(1); n], format!("orthant:{n}"))?
        .with_flags(true, true)
        .with_kind(ConeKind::Orthant(n)))
}

/// `x1² x2 x3` along `(1, 1, 1)`: the orthant again, with a non-minimal
/// polynomial.
pub fn orthant_tilde() -> HyperCone {
    let p = HomoPoly::from_terms(3, 4, [(vec![2, 1, 1], rat(1))]).expect("valid monomial");
    HyperCone::new(p, vec![rat(1); 3], "orthant-tilde:3")
        .expect("p(e) = 1")
        .with_kind(ConeKind::Orthant(3))
}

/// `ℝ₊^{n,(k)}`, with `D_e^k p = k!·s_{n−k}` checked exactly.
pub fn orthant_deriv(n: usize, k: usize) -> Result<DerivedCone> {
    if k == 0 || k >= n {
        return Err(HyperError::DerivativeOrder { k, degree: n });
    }
    let derived = orthant(n)?.derivative_cone(k)?;
    let expected = elementary_symmetric(n, n - k).scale(&factorial(k));
    if *derived.p_k() != expected {
        return Err(HyperError::InvalidPolynomial(format!(
            "D_e^{k} of the orthant polynomial differs from k!·s_(n−k)"
        )));
    }
    Ok(derived)
}

pub fn svec_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Position of `X_ij` in `svec(X)`.
pub fn svec_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    if i == j {
        return i;
    }
    // off-diagonals of rows 0..i come first
    let before: usize = (0..i).map(|r| n - 1 - r).sum();
    n + before + (j - i - 1)
}

pub fn svec(x: &[Vec<Rational>]) -> Vec<Rational> {
    let n = x.len();
    let mut out = vec![Rational::zero(); svec_dim(n)];
    for i in 0..n {
        for j in i..n {
            out[svec_index(n, i, j)] = x[i][j].clone();
        }
    }
    out
}

pub fn svec_f64(x: &DMatrix<f64>) -> Vec<f64> {
    let n = x.nrows();
    let mut out = vec![0.0; svec_dim(n)];
    for i in 0..n {
        for j in i..n {
            out[svec_index(n, i, j)] = x[(i, j)];
        }
    }
    out
}

pub fn unsvec(n: usize, v: &[Rational]) -> Vec<Vec<Rational>> {
    (0..n).map(|i| (0..n).map(|j| v[svec_index(n, i, j)].clone()).collect()).collect()
}

pub fn unsvec_f64(n: usize, v: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| v[svec_index(n, i, j)])
}

/// Matrix size `n` with `svec_dim(n) = m`.
pub fn svec_order(m: usize) -> Option<usize> {
    (1..=m).find(|&n| svec_dim(n) == m)
}

/// `svec(u uᵀ)`.
pub fn svec_outer(u: &[Rational]) -> Vec<Rational> {
    let n = u.len();
    let mut out = vec![Rational::zero(); svec_dim(n)];
    for i in 0..n {
        for j in i..n {
            out[svec_index(n, i, j)] = &u[i] * &u[j];
        }
    }
    out
}

/// Determinant of a matrix of linear forms by the Leibniz expansion.
fn leibniz_det(entries: &[Vec<HomoPoly>], nvars: usize) -> Result<HomoPoly> {
    let n = entries.len();
    let mut total = HomoPoly::zero(nvars, n);
    let mut perm: Vec<usize> = (0..n).collect();
    for_each_permutation(&mut perm, 0, &mut |sigma| {
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| sigma[i] > sigma[j])
            .count();
        let mut term = HomoPoly::constant(nvars, if inversions % 2 == 0 { rat(1) } else { rat(-1) });
        for (i, &s) in sigma.iter().enumerate() {
            term = term.mul(&entries[i][s]).expect("same nvars");
            if term.is_zero() {
                break;
            }
        }
        if !term.is_zero() {
            total = total.add(&term).expect("same degree");
        }
    });
    Ok(total)
}

fn for_each_permutation(perm: &mut Vec<usize>, start: usize, f: &mut impl FnMut(&[usize])) {
    if start == perm.len() {
        f(perm);
        return;
    }
    for i in start..perm.len() {
        perm.swap(start, i);
        for_each_permutation(perm, start + 1, f);
        perm.swap(start, i);
    }
}

/// `S₊ⁿ = Λ₊(det, I)` over svec coordinates, `1 ≤ n ≤ 4`.
pub fn psd(n: usize) -> Result<HyperCone> {
    if n == 0 || n > MAX_SYMBOLIC_N {
        return Err(HyperError::Unsupported(format!(
            "symbolic determinant only for 1 ≤ n ≤ {MAX_SYMBOLIC_N}, got {n}"
        )));
    }
    let m = svec_dim(n);
    let entries: Vec<Vec<HomoPoly>> = (0..n)
        .map(|i| (0..n).map(|j| HomoPoly::variable(m, svec_index(n, i, j))).collect())
        .collect();
    let det = leibniz_det(&entries, m)?;
    let identity: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { rat(1) } else { rat(0) }).collect())
        .collect();
    Ok(HyperCone::new(det, svec(&identity), format!("psd:{n}"))?
        .with_flags(true, true)
        .with_kind(ConeKind::Psd(n)))
}

pub fn psd_deriv(n: usize, k: usize) -> Result<DerivedCone> {
    if k == 0 || k >= n {
        return Err(HyperError::DerivativeOrder { k, degree: n });
    }
    psd(n)?.derivative_cone(k)
}

/// Spectral route: `X ∈ S₊^{n,(k)}` iff `λ(X) ∈ ℝ₊^{n,(k)}`; any `n`.
pub fn psd_deriv_member(n: usize, k: usize, x: &DMatrix<f64>, tol: f64) -> Result<Membership> {
    if x.nrows() != n || x.ncols() != n {
        return Err(HyperError::DimensionMismatch { expected: n, got: x.nrows() });
    }
    let eig = x.clone().symmetric_eigen().eigenvalues;
    let cone = orthant_deriv(n, k)?;
    cone.contains_by_eigenvalues(eig.as_slice(), tol)
}

/// `x0² − x1² − … − x_{n−1}²` on `ℝⁿ` along `(1, 0, …, 0)`.
pub fn soc(n: usize) -> Result<HyperCone> {
    if n < 2 {
        return Err(HyperError::precondition("second-order cone needs n ≥ 2"));
    }
    let mut exp0 = vec![0u32; n];
    exp0[0] = 2;
    let mut terms = vec![(exp0, rat(1))];
    for i in 1..n {
        let mut exp = vec![0u32; n];
        exp[i] = 2;
        terms.push((exp, rat(-1)));
    }
    let mut e = vec![rat(0); n];
    e[0] = rat(1);
    Ok(HyperCone::new(HomoPoly::from_terms(n, 2, terms)?, e, format!("soc:{n}"))?
        .with_flags(true, true)
        .with_kind(ConeKind::Soc(n)))
}

/// `x3 ≥ |x1| + |x2|` as the product of its four facet forms, along `(0, 0, 1)`.
pub fn l1_cone() -> HyperCone {
    let forms: Vec<Vec<Rational>> = [[1, 1, 1], [1, -1, 1], [-1, 1, 1], [-1, -1, 1]]
        .iter()
        .map(|f| f.iter().map(|&c| rat(c)).collect())
        .collect();
    let p = product_of_linear_forms(&forms).expect("three variables each");
    HyperCone::new(p, vec![rat(0), rat(0), rat(1)], "l1")
        .expect("p(e) = 1")
        .with_flags(true, false)
        .with_kind(ConeKind::L1)
}

/// Coordinates in which the first relaxation of the ℓ1 cone is `soc(3)`:
/// `(x1, x2, x3) ↦ (x3, x1, x2)`.
pub fn l1_to_soc<T: Clone>(x: &[T]) -> Vec<T> {
    vec![x[2].clone(), x[0].clone(), x[1].clone()]
}

/// A determinantal cone `det(Σ x_i A_i)` together with its matrices.
#[derive(Debug, Clone)]
pub struct Spectrahedral {
    pub cone: HyperCone,
    pub matrices: Vec<Vec<Vec<Rational>>>,
}

impl Spectrahedral {
    pub fn matrix_at(&self, x: &[Rational]) -> Vec<Vec<Rational>> {
        let s = self.matrices[0].len();
        let mut out = vec![vec![Rational::zero(); s]; s];
        for (a, xi) in self.matrices.iter().zip(x) {
            for i in 0..s {
                for j in 0..s {
                    out[i][j] += &a[i][j] * xi;
                }
            }
        }
        out
    }

    /// Matrix rank of `A(x)`, which equals the hyperbolic rank of `x`.
    pub fn matrix_rank(&self, x: &[Rational]) -> usize {
        rank(&self.matrix_at(x))
    }
}

/// `det_A` along `x̄`, for symmetric `A_i` of size ≤ 4 with `A(x̄) ≻ 0`.
pub fn spectrahedral(matrices: Vec<Vec<Vec<Rational>>>, xbar: Vec<Rational>, label: &str) -> Result<Spectrahedral> {
    let m = matrices.len();
    if m == 0 || m != xbar.len() {
        return Err(HyperError::DimensionMismatch { expected: m, got: xbar.len() });
    }
    let s = matrices[0].len();
    if s == 0 || s > MAX_SYMBOLIC_N {
        return Err(HyperError::Unsupported(format!("matrix size {s} outside 1..={MAX_SYMBOLIC_N}")));
    }
    for a in &matrices {
        if a.len() != s || a.iter().any(|r| r.len() != s) {
            return Err(HyperError::precondition("matrices must share one square size"));
        }
        if (0..s).any(|i| (0..s).any(|j| a[i][j] != a[j][i])) {
            return Err(HyperError::precondition("matrices must be symmetric"));
        }
    }
    let flat: Vec<Vec<Rational>> = matrices.iter().map(|a| a.iter().flatten().cloned().collect()).collect();
    if rank(&flat) != m {
        return Err(HyperError::precondition("matrices are linearly dependent"));
    }
    let entries: Vec<Vec<HomoPoly>> = (0..s)
        .map(|i| {
            (0..s)
                .map(|j| HomoPoly::linear_form(&matrices.iter().map(|a| a[i][j].clone()).collect::<Vec<_>>()))
                .collect()
        })
        .collect();
    let det = leibniz_det(&entries, m)?;
    let result = Spectrahedral {
        cone: HyperCone::new(det, xbar.clone(), label)
            .map_err(|_| HyperError::precondition("A(x̄) is not positive definite"))?
            .with_kind(ConeKind::Spectrahedral),
        matrices,
    };
    let ax = result.matrix_at(&xbar);
    let positive_definite = (1..=s).all(|r| {
        let minor: Vec<Vec<Rational>> = ax[..r].iter().map(|row| row[..r].to_vec()).collect();
        determinant(&minor).is_positive()
    });
    if !positive_definite {
        return Err(HyperError::precondition("A(x̄) is not positive definite"));
    }
    Ok(result)
}

fn int_matrix(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect()
}

/// `A_1(x) = [[x0, x1, x2], [x1, x0, 0], [x2, 0, x0]]`, with `det = x0(x0² − x1² − x2²)`.
pub fn soc_arrow_3x3() -> Result<Spectrahedral> {
    let mats = vec![
        int_matrix(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
        int_matrix(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 0]]),
        int_matrix(&[&[0, 0, 1], &[0, 0, 0], &[1, 0, 0]]),
    ];
    spectrahedral(mats, vec![rat(1), rat(0), rat(0)], "spectrahedral:arrow3")
}

/// `A_2(x) = [[x0 + x1, x2], [x2, x0 − x1]]`, with `det = x0² − x1² − x2²`.
pub fn soc_2x2() -> Result<Spectrahedral> {
    let mats = vec![
        int_matrix(&[&[1, 0], &[0, 1]]),
        int_matrix(&[&[1, 0], &[0, -1]]),
        int_matrix(&[&[0, 1], &[1, 0]]),
    ];
    spectrahedral(mats, vec![rat(1), rat(0), rat(0)], "spectrahedral:soc2")
}

/// Random integer symmetric matrix with entries in `[−range, range]`.
pub fn random_symmetric(rng: &mut SeededRng, n: usize, range: i64) -> Vec<Vec<Rational>> {
    let mut m = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = rat(rng.random_range(-range..=range));
            m[i][j] = v.clone();
            m[j][i] = v;
        }
    }
    m
}

/// A random full-dimensional 3×3 slice: an invertible recombination of the
/// svec basis with `A_1 = I`, so every symmetric matrix is `A(x)` for a
/// unique `x` and `x̄ = e_1`.
pub fn random_full_slice(rng: &mut SeededRng) -> Spectrahedral {
    let n = 3;
    loop {
        let mut mats = vec![identity_matrix(n)];
        for _ in 1..svec_dim(n) {
            mats.push(random_symmetric(rng, n, 2));
        }
        let mut xbar = vec![Rational::zero(); svec_dim(n)];
        xbar[0] = rat(1);
        if let Ok(s) = spectrahedral(mats, xbar, "random-slice") {
            return s;
        }
    }
}

fn identity_matrix(n: usize) -> Vec<Vec<Rational>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { rat(1) } else { rat(0) }).collect()).collect()
}

/// `svec(M X Mᵀ)` as a map on svec coordinates.
pub fn psd_congruence(m: &LinearMap) -> Result<LinearMap> {
    let n = m.dim();
    let dim = svec_dim(n);
    let mut rows = vec![vec![Rational::zero(); dim]; dim];
    for i in 0..n {
        for j in i..n {
            let col = svec_index(n, i, j);
            for a in 0..n {
                for b in a..n {
                    let mut v = m.entry(a, i) * m.entry(b, j);
                    if i != j {
                        v += m.entry(a, j) * m.entry(b, i);
                    }
                    rows[svec_index(n, a, b)][col] = v;
                }
            }
        }
    }
    LinearMap::from_rows(rows)
}

pub fn psd_congruence_f64(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let dim = svec_dim(n);
    let mut out = DMatrix::zeros(dim, dim);
    for i in 0..n {
        for j in i..n {
            let col = svec_index(n, i, j);
            for a in 0..n {
                for b in a..n {
                    let mut v = m[(a, i)] * m[(b, j)];
                    if i != j {
                        v += m[(a, j)] * m[(b, i)];
                    }
                    out[(svec_index(n, a, b), col)] = v;
                }
            }
        }
    }
    out
}

/// `X ↦ W X + X Wᵀ` on svec coordinates; its exponential is `L_{exp(W)}`.
pub fn psd_lie_generator(w: &DMatrix<f64>) -> DMatrix<f64> {
    let n = w.nrows();
    let dim = svec_dim(n);
    let mut out = DMatrix::zeros(dim, dim);
    for i in 0..n {
        for j in i..n {
            let mut basis = DMatrix::<f64>::zeros(n, n);
            basis[(i, j)] = 1.0;
            basis[(j, i)] = 1.0;
            let image = w * &basis + &basis * w.transpose();
            out.set_column(svec_index(n, i, j), &nalgebra::DVector::from_vec(svec_f64(&image)));
        }
    }
    out
}

/// A gallery cone addressed by id, optionally relaxed.
#[derive(Debug, Clone)]
pub struct GalleryCone {
    pub base: HyperCone,
    pub k: Option<usize>,
    pub spectrahedral: Option<Spectrahedral>,
}

impl GalleryCone {
    /// The cone membership and eigenvalues refer to.
    pub fn target(&self) -> Result<HyperCone> {
        match self.k {
            Some(k) if k > 0 => Ok(self.base.derivative_cone(k)?.cone().clone()),
            _ => Ok(self.base.clone()),
        }
    }

    pub fn derived(&self) -> Result<DerivedCone> {
        self.base.derivative_cone(self.k.unwrap_or(0))
    }
}

#[derive(Deserialize)]
struct SpectrahedralFile {
    matrices: Vec<Vec<Vec<NumberLike>>>,
    xbar: Vec<NumberLike>,
}

/// Parses ids such as `orthant:4`, `orthant:4:k=1`, `psd:3`, `soc:3`, `l1`,
/// `spectrahedral:<file>`; any id accepts a trailing `:k=K`.
pub fn parse_cone_id(id: &str) -> Result<GalleryCone> {
    let (head, k) = match id.rsplit_once(":k=") {
        Some((h, k)) => (h, Some(k.parse::<usize>().map_err(|_| HyperError::parse(format!("bad k in {id:?}")))?)),
        None => (id, None),
    };
    let size = |s: &str| s.parse::<usize>().map_err(|_| HyperError::parse(format!("bad size in {id:?}")));
    let mut spectra = None;
    let base = match head.split_once(':') {
        Some(("orthant", n)) => orthant(size(n)?)?,
        Some(("psd", n)) => psd(size(n)?)?,
        Some(("soc", n)) => soc(size(n)?)?,
        Some(("spectrahedral", path)) => {
            let text = fs::read_to_string(path).map_err(|e| HyperError::parse(format!("{path}: {e}")))?;
            let s = spectrahedral_from_json(&text, head)?;
            let cone = s.cone.clone();
            spectra = Some(s);
            cone
        }
        None if head == "l1" => l1_cone(),
        None if head == "orthant-tilde" => orthant_tilde(),
        _ => return Err(HyperError::parse(format!("unknown cone id {id:?}"))),
    };
    if let Some(k) = k {
        if k >= base.degree() {
            return Err(HyperError::DerivativeOrder { k, degree: base.degree() });
        }
    }
    Ok(GalleryCone {
        base,
        k,
        spectrahedral: spectra,
    })
}

/// `{"matrices": [[[..]]], "xbar": [..]}` with rational entries.
pub fn spectrahedral_from_json(text: &str, label: &str) -> Result<Spectrahedral> {
    let f: SpectrahedralFile = serde_json::from_str(text).map_err(|e| HyperError::parse(e.to_string()))?;
    let matrices = f
        .matrices
        .iter()
        .map(|a| {
            a.iter()
                .map(|r| r.iter().map(NumberLike::to_rational).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let xbar = f.xbar.iter().map(NumberLike::to_rational).collect::<Result<Vec<_>>>()?;
    spectrahedral(matrices, xbar, label)
}

/// Integer points on the unit circle scaled by `c`: `(c, a, b)` with
/// `a² + b² = c²`; boundary rays of `soc(3)`.
pub fn pythagorean_rays() -> Vec<Vec<Rational>> {
    let triples = [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1), (3, 4, 5), (-3, 4, 5), (4, -3, 5), (-5, -12, 13), (8, 15, 17)];
    triples
        .iter()
        .map(|&(a, b, c)| vec![rat(c), rat(a), rat(b)])
        .collect()
}

#[cfg(test)]
mod tests;
