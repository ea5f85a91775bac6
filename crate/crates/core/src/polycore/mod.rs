//! Exact sparse homogeneous polynomials.
//!
//! A [`HomoPoly`] stores a map from exponent vectors to nonzero rational
//! coefficients; every exponent vector sums to the declared degree. Terms are
//! kept in graded lexicographic order so equality and serialization are
//! canonical.
//!
//! Directional derivatives follow the analytic convention
//! `D_e^k p(x) = d^k/dt^k p(x + t e)|_{t=0}`. With that convention the
//! derivatives of `x1 x2 ... xn` along the all-ones vector are `k! s_{n-k}`,
//! where `s_j` is the elementary symmetric polynomial of degree `j`.

mod float;
mod json;
mod unipoly;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, HyperError, Result};
use crate::linalg::LinearMap;
use crate::num::{factorial, format_rational, rat, Rational};

pub use float::FloatPoly;
pub use json::{PolyJson, TermJson};
pub use unipoly::UniPoly;

/// Largest degree accepted by [`HomoPoly::polar_form`] (2^d evaluations).
pub const MAX_POLAR_DEGREE: usize = 24;

/// Exponent vector ordered graded-lexicographically (larger first when
/// iterating in reverse).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Homogeneous polynomial with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomoPoly {
    nvars: usize,
    degree: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl HomoPoly {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        HomoPoly {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars, 0);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated monomials and dropping zero coefficients.
    pub fn from_terms<I>(nvars: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        if nvars == 0 {
            return Err(HyperError::InvalidPolynomial("nvars must be positive".into()));
        }
        let mut p = Self::zero(nvars, degree);
        for (exp, c) in terms {
            if exp.len() != nvars {
                return Err(HyperError::InvalidPolynomial(format!(
                    "exponent {exp:?} has length {} but nvars = {nvars}",
                    exp.len()
                )));
            }
            let m = Monomial(exp);
            if m.degree() != degree {
                return Err(HyperError::InvalidPolynomial(format!(
                    "exponent {:?} has total degree {} but the polynomial has degree {degree}",
                    m.0,
                    m.degree()
                )));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// `Σ c_i x_i`.
    pub fn linear_form(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n, 1);
        for (i, c) in coeffs.iter().enumerate() {
            let mut exp = vec![0; n];
            exp[i] = 1;
            p.add_term(Monomial(exp), c.clone());
        }
        p
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); nvars];
        coeffs[i] = Rational::one();
        Self::linear_form(&coeffs)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().rev().map(|(m, c)| (m.0.as_slice(), c))
    }

    pub fn coefficient(&self, exp: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exp.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, self.degree);
        }
        HomoPoly {
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dim(self.nvars, other.nvars)?;
        let mut out = Self::zero(self.nvars, self.degree + other.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.times(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::constant(self.nvars, Rational::one());
        for _ in 0..k {
            out = out.mul(self).expect("same nvars");
        }
        out
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        check_dim(self.nvars, other.nvars)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(HyperError::InvalidPolynomial(format!(
                "degree mismatch {} vs {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    /// Exact evaluation `Σ c_α x^α`.
    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        check_dim(self.nvars, x.len())?;
        let powers: Vec<Vec<Rational>> = x
            .iter()
            .map(|xi| {
                let mut row = Vec::with_capacity(self.degree + 1);
                let mut acc = Rational::one();
                for _ in 0..=self.degree {
                    row.push(acc.clone());
                    acc *= xi;
                }
                row
            })
            .collect();
        let mut sum = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &a) in m.0.iter().enumerate() {
                if a > 0 {
                    term *= &powers[i][a as usize];
                }
            }
            sum += term;
        }
        Ok(sum)
    }

    /// `∂p/∂x_i` (degree drops by one).
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.degree.saturating_sub(1));
        for (m, c) in &self.terms {
            let a = m.0[i];
            if a == 0 {
                continue;
            }
            let mut exp = m.0.clone();
            exp[i] -= 1;
            out.add_term(Monomial(exp), c * rat(a as i64));
        }
        out
    }

    /// One directional derivative `Σ_i e_i ∂p/∂x_i`, as a single sparse pass.
    fn dir_deriv_once(&self, e: &[Rational]) -> Self {
        let mut out = Self::zero(self.nvars, self.degree.saturating_sub(1));
        for (m, c) in &self.terms {
            for (i, ei) in e.iter().enumerate() {
                let a = m.0[i];
                if a == 0 || ei.is_zero() {
                    continue;
                }
                let mut exp = m.0.clone();
                exp[i] -= 1;
                out.add_term(Monomial(exp), c * ei * rat(a as i64));
            }
        }
        out
    }

    /// `D_e^k p`, computed as `k` repeated single directional derivatives.
    pub fn dir_deriv(&self, e: &[Rational], k: usize) -> Result<Self> {
        check_dim(self.nvars, e.len())?;
        if k > self.degree {
            return Err(HyperError::DerivativeOrder { k, degree: self.degree });
        }
        let mut out = self.clone();
        for _ in 0..k {
            out = out.dir_deriv_once(e);
        }
        Ok(out)
    }

    /// All derivatives `D_e^0 p, ..., D_e^d p`.
    pub fn derivative_chain(&self, e: &[Rational]) -> Result<Vec<Self>> {
        check_dim(self.nvars, e.len())?;
        let mut chain = Vec::with_capacity(self.degree + 1);
        chain.push(self.clone());
        for k in 0..self.degree {
            let next = chain[k].dir_deriv_once(e);
            chain.push(next);
        }
        Ok(chain)
    }

    /// `x ↦ p(A x)` for a square map on the same space.
    pub fn compose(&self, a: &LinearMap) -> Result<Self> {
        check_dim(self.nvars, a.dim())?;
        self.substitute(a.rows())
    }

    /// `u ↦ p(B u)` where `B` has `nvars` rows of equal length `r ≥ 1`; the
    /// result lives in `r` variables.
    pub fn substitute(&self, rows: &[Vec<Rational>]) -> Result<Self> {
        check_dim(self.nvars, rows.len())?;
        let r = rows.first().map(Vec::len).unwrap_or(0);
        if r == 0 {
            return Err(HyperError::InvalidPolynomial("substitution into zero variables".into()));
        }
        for row in rows {
            check_dim(r, row.len())?;
        }
        let forms: Vec<HomoPoly> = rows.iter().map(|row| HomoPoly::linear_form(row)).collect();
        // powers[i][a] = forms[i]^a, built lazily up to the largest exponent used
        let mut max_exp = vec![0usize; self.nvars];
        for m in self.terms.keys() {
            for (i, &a) in m.0.iter().enumerate() {
                max_exp[i] = max_exp[i].max(a as usize);
            }
        }
        let powers: Vec<Vec<HomoPoly>> = forms
            .iter()
            .zip(&max_exp)
            .map(|(f, &top)| {
                let mut row = vec![HomoPoly::constant(r, Rational::one())];
                for a in 1..=top {
                    let next = row[a - 1].mul(f).expect("same nvars");
                    row.push(next);
                }
                row
            })
            .collect();
        let mut out = Self::zero(r, self.degree);
        for (m, c) in &self.terms {
            let mut prod = HomoPoly::constant(r, c.clone());
            for (i, &a) in m.0.iter().enumerate() {
                if a > 0 {
                    prod = prod.mul(&powers[i][a as usize])?;
                }
                if prod.is_zero() {
                    break;
                }
            }
            for (pm, pc) in prod.terms {
                out.add_term(pm, pc);
            }
        }
        Ok(out)
    }

    /// `q(t) = p(t e − x)` via `c_k = (−1)^{d−k} (1/k!) (D_e^k p)(x)`.
    pub fn restrict_line(&self, e: &[Rational], x: &[Rational]) -> Result<UniPoly> {
        check_dim(self.nvars, e.len())?;
        check_dim(self.nvars, x.len())?;
        let chain = self.derivative_chain(e)?;
        let d = self.degree;
        let coeffs = chain
            .iter()
            .enumerate()
            .map(|(k, dk)| {
                let v = dk.eval(x)? / factorial(k);
                Ok(if (d - k) % 2 == 1 { -v } else { v })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(UniPoly::from_coeffs_full(coeffs))
    }

    /// `q(t) = p(t e − x)` by substituting the affine line and expanding;
    /// independent of the derivative route, kept as an oracle.
    pub fn restrict_line_by_substitution(&self, e: &[Rational], x: &[Rational]) -> Result<UniPoly> {
        check_dim(self.nvars, e.len())?;
        check_dim(self.nvars, x.len())?;
        let lines: Vec<UniPoly> = e
            .iter()
            .zip(x)
            .map(|(ei, xi)| UniPoly::from_coeffs_full(vec![-xi.clone(), ei.clone()]))
            .collect();
        let mut q = UniPoly::from_coeffs_full(vec![Rational::zero(); self.degree + 1]);
        for (m, c) in &self.terms {
            let mut term = UniPoly::constant(c.clone());
            for (i, &a) in m.0.iter().enumerate() {
                for _ in 0..a {
                    term = term.mul(&lines[i]);
                }
            }
            q = q.add(&term);
        }
        Ok(q.with_len(self.degree + 1))
    }

    /// Polar form `P(x_1, …, x_d)` by the polarization identity
    /// `(1/d!) Σ_{∅≠S⊆[d]} (−1)^{d−|S|} p(Σ_{i∈S} x_i)`.
    pub fn polar_form(&self, xs: &[Vec<Rational>]) -> Result<Rational> {
        let d = self.degree;
        if xs.len() != d {
            return Err(HyperError::ArgumentCount { expected: d, got: xs.len() });
        }
        if d > MAX_POLAR_DEGREE {
            return Err(HyperError::DegreeTooLarge { degree: d, max: MAX_POLAR_DEGREE });
        }
        for x in xs {
            check_dim(self.nvars, x.len())?;
        }
        if d == 0 {
            return self.eval(&vec![Rational::zero(); self.nvars]);
        }
        // walk the subsets in Gray-code order, updating the running sum by one vector per step
        let mut current = vec![Rational::zero(); self.nvars];
        let mut in_set = vec![false; d];
        let mut size = 0usize;
        let mut total = Rational::zero();
        for step in 1u64..(1u64 << d) {
            let flip = step.trailing_zeros() as usize;
            if in_set[flip] {
                for (c, v) in current.iter_mut().zip(&xs[flip]) {
                    *c -= v;
                }
                size -= 1;
            } else {
                for (c, v) in current.iter_mut().zip(&xs[flip]) {
                    *c += v;
                }
                size += 1;
            }
            in_set[flip] = !in_set[flip];
            let value = self.eval(&current)?;
            if (d - size) % 2 == 0 {
                total += value;
            } else {
                total -= value;
            }
        }
        Ok(total / factorial(d))
    }

    pub fn to_float(&self) -> FloatPoly {
        FloatPoly::from_exact(self)
    }
}

impl fmt::Display for HomoPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let vars: Vec<String> = exp
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(i, &a)| if a == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, a) })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Elementary symmetric polynomial `s_j` in `n` variables.
pub fn elementary_symmetric(n: usize, j: usize) -> HomoPoly {
    let mut p = HomoPoly::zero(n, j);
    let mut choose = |exp: Vec<u32>| p.add_term(Monomial(exp), Rational::one());
    for_each_subset(n, j, &mut |subset: &[usize]| {
        let mut exp = vec![0u32; n];
        for &i in subset {
            exp[i] = 1;
        }
        choose(exp);
    });
    p
}

fn for_each_subset(n: usize, j: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, j: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == j {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < j - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, j, cur, f);
            cur.pop();
        }
    }
    rec(0, n, j, &mut Vec::new(), f);
}

/// Product of linear forms, each given by its coefficient vector.
pub fn product_of_linear_forms(forms: &[Vec<Rational>]) -> Result<HomoPoly> {
    let n = forms
        .first()
        .map(Vec::len)
        .ok_or_else(|| HyperError::InvalidPolynomial("empty product".into()))?;
    let mut p = HomoPoly::constant(n, Rational::one());
    for f in forms {
        p = p.mul(&HomoPoly::linear_form(f))?;
    }
    Ok(p)
}

#[cfg(test)]
mod tests;
