//! Real roots of (nearly) real-rooted univariate polynomials.
//!
//! The primary route exploits interlacing: if `q` is real-rooted so is `q'`,
//! and consecutive critical points bracket exactly one root of `q` each. The
//! recursion bottoms out at a linear polynomial, so clusters of repeated roots
//! are located through the derivative where they are simple. The candidate
//! roots are then checked by rebuilding `Π (t − r_i)`; a mismatch means `q`
//! has non-real roots and the balanced companion matrix takes over.

use nalgebra::DMatrix;

use crate::error::{HyperError, Result};

/// Backward error (coefficient units, roots scaled into [−1, 1]) below which
/// the interlacing roots are accepted.
const RECONSTRUCTION_GATE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct RootReport {
    /// Real parts, sorted descending.
    pub roots: Vec<f64>,
    /// Largest imaginary magnitude attributed to the roots.
    pub residual: f64,
}

/// Roots of `c_0 + c_1 t + … + c_d t^d`.
pub fn real_roots(coeffs: &[f64], tol: f64) -> Result<RootReport> {
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(HyperError::inconclusive("non-finite coefficient"));
    }
    let top = coeffs.iter().rposition(|&c| c != 0.0).ok_or(HyperError::ZeroPolynomial)?;
    let coeffs = &coeffs[..=top];
    let zeros = coeffs.iter().take_while(|&&c| c == 0.0).count();
    let lead = coeffs[top];
    let monic: Vec<f64> = coeffs[zeros..].iter().map(|c| c / lead).collect();

    let mut roots = interlacing_roots(&monic);
    let scale = roots.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let backward = reconstruction_error(&monic, &roots, scale);
    let residual = if backward <= RECONSTRUCTION_GATE {
        backward * scale.max(1.0)
    } else {
        let (re, imag) = companion_roots(&monic);
        let worst = imag.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        roots = re;
        if worst <= tol {
            for r in roots.iter_mut() {
                *r = newton_polish(&monic, *r);
            }
        }
        worst
    };
    roots.extend(std::iter::repeat_n(0.0, zeros));
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok(RootReport { roots, residual })
}

pub(crate) fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * t + a)
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(i, &a)| a * i as f64).collect()
}

/// Ascending roots of a monic polynomial assumed real-rooted.
fn interlacing_roots(monic: &[f64]) -> Vec<f64> {
    let n = monic.len() - 1;
    match n {
        0 => return Vec::new(),
        1 => return vec![-monic[0]],
        _ => {}
    }
    let d = derivative(monic);
    let lead = d[n - 1];
    let crit: Vec<f64> = interlacing_roots(&d.iter().map(|c| c / lead).collect::<Vec<_>>());
    let bound = fujiwara_bound(monic).max(crit.iter().fold(0.0f64, |m, c| m.max(c.abs()))) * 1.01 + 1e-300;

    let mut points = Vec::with_capacity(n + 1);
    points.push(-bound);
    points.extend(crit.iter().copied());
    points.push(bound);
    (0..n)
        .map(|i| {
            let (a, b) = (points[i], points[i + 1]);
            // prefer the critical-point end when no sign change brackets a root
            let prefer_left = i > 0 && (i + 1 == n || horner(monic, a).abs() <= horner(monic, b).abs());
            bracket_root(monic, a, b, prefer_left)
        })
        .collect()
}

fn bracket_root(c: &[f64], mut a: f64, mut b: f64, prefer_left: bool) -> f64 {
    let fa = horner(c, a);
    let fb = horner(c, b);
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    if fa.signum() == fb.signum() {
        return if prefer_left { a } else { b };
    }
    let sa = fa.signum();
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = horner(c, mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

fn fujiwara_bound(monic: &[f64]) -> f64 {
    let n = monic.len() - 1;
    let mut best = 0.0f64;
    for k in 1..=n {
        let c = monic[n - k].abs();
        let term = if k == n { (c / 2.0).powf(1.0 / k as f64) } else { c.powf(1.0 / k as f64) };
        best = best.max(term);
    }
    2.0 * best
}

/// `max_k |q̃_k − r̃_k|` where both polynomials are rescaled so the roots lie
/// in `[−1, 1]`.
fn reconstruction_error(monic: &[f64], roots: &[f64], scale: f64) -> f64 {
    let n = monic.len() - 1;
    if n == 0 {
        return 0.0;
    }
    let s = if scale > 0.0 { scale } else { 1.0 };
    let mut rebuilt = vec![0.0; n + 1];
    rebuilt[0] = 1.0;
    for (deg, r) in roots.iter().enumerate() {
        let r = r / s;
        // multiply by (t − r)
        for k in (0..=deg + 1).rev() {
            let shifted = if k > 0 { rebuilt[k - 1] } else { 0.0 };
            rebuilt[k] = shifted - r * rebuilt[k];
        }
    }
    (0..=n)
        .map(|k| {
            let scaled = monic[k] * s.powi(k as i32 - n as i32);
            (scaled - rebuilt[k]).abs()
        })
        .fold(0.0, f64::max)
}

/// Eigenvalues of the balanced companion matrix: (real parts, imaginary parts).
fn companion_roots(monic: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = monic.len() - 1;
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -monic[i];
    }
    balance(&mut m);
    let eig = m.complex_eigenvalues();
    let re = eig.iter().map(|z| z.re).collect();
    let im = eig.iter().map(|z| z.im).collect();
    (re, im)
}

/// Parlett–Reinsch diagonal similarity balancing with powers of two.
fn balance(m: &mut DMatrix<f64>) {
    const RADIX: f64 = 2.0;
    let n = m.nrows();
    for _ in 0..100 {
        let mut converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in (0..n).filter(|&j| j != i) {
                c += m[(j, i)].abs();
                r += m[(i, j)].abs();
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            while c < r / RADIX {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            while c > r * RADIX {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
        if converged {
            break;
        }
    }
}

/// Safeguarded Newton refinement of simple roots against an accurate
/// evaluator `t ↦ (q(t), q'(t))`.
///
/// `roots` must be sorted descending. Each root stays between the midpoints
/// to its neighbours and a step is only taken if it reduces `|q|`; exact
/// zeros are left alone.
pub fn polish_roots(roots: &mut [f64], eval: impl Fn(f64) -> (f64, f64)) {
    let n = roots.len();
    let original = roots.to_vec();
    for i in 0..n {
        let r0 = original[i];
        if r0 == 0.0 {
            continue;
        }
        let hi = if i > 0 { 0.5 * (original[i - 1] + r0) } else { f64::INFINITY };
        let lo = if i + 1 < n { 0.5 * (original[i + 1] + r0) } else { f64::NEG_INFINITY };
        if hi <= r0 || lo >= r0 {
            // coincident neighbours: a multiple root, Newton gains nothing
            continue;
        }
        let mut r = r0;
        let (mut f, mut df) = eval(r);
        for _ in 0..12 {
            if f == 0.0 || df == 0.0 || !df.is_finite() {
                break;
            }
            let next = r - f / df;
            if !(next > lo && next < hi) || next == r {
                break;
            }
            let (fn_, dfn) = eval(next);
            if fn_.abs() >= f.abs() {
                break;
            }
            r = next;
            f = fn_;
            df = dfn;
        }
        roots[i] = r;
    }
}

fn newton_polish(c: &[f64], mut r: f64) -> f64 {
    let d = derivative(c);
    let mut best = horner(c, r).abs();
    for _ in 0..8 {
        let dv = horner(&d, r);
        if dv == 0.0 {
            break;
        }
        let next = r - horner(c, r) / dv;
        let v = horner(c, next).abs();
        if !next.is_finite() || v >= best {
            break;
        }
        best = v;
        r = next;
    }
    r
}
