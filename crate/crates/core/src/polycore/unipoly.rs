use num_traits::{One, Zero};

use crate::error::{HyperError, Result};
use crate::num::{rat, to_f64, Rational};

/// Univariate polynomial `c_0 + c_1 t + … + c_d t^d` with exact coefficients.
///
/// Restrictions `t ↦ p(t e − x)` keep all `d + 1` slots even when the top
/// coefficients vanish; arithmetic results are trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    /// Keeps the coefficient vector as given, including trailing zeros.
    pub fn from_coeffs_full(coeffs: Vec<Rational>) -> Self {
        UniPoly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        UniPoly { coeffs }.trimmed()
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Index of the last slot, i.e. the declared degree of a restriction.
    pub fn declared_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Degree after trimming; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn leading(&self) -> Rational {
        self.degree().map(|d| self.coeffs[d].clone()).unwrap_or_else(Rational::zero)
    }

    pub fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn with_len(mut self, len: usize) -> Self {
        self.coeffs.resize(len.max(self.degree().map_or(0, |d| d + 1)), Rational::zero());
        self
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
                let b = other.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
                a + b
            })
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    /// Euclidean division `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(HyperError::ZeroPolynomial)?;
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.clone().trimmed();
        let Some(nd) = rem.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if nd < dd {
            return Ok((Self::zero(), rem));
        }
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = &rem.coeffs[rd] / &lead;
            for (i, c) in divisor.coeffs.iter().enumerate().take(dd + 1) {
                let idx = rd - dd + i;
                rem.coeffs[idx] -= &factor * c;
            }
            quot[rd - dd] = factor;
            rem = rem.trimmed();
        }
        Ok((Self::from_coeffs(quot), rem))
    }

    pub fn monic(&self) -> Self {
        let lead = self.leading();
        if lead.is_zero() {
            return self.clone().trimmed();
        }
        self.scale(&(Rational::one() / lead))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone().trimmed();
        let mut b = other.clone().trimmed();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Exact division, erroring if a remainder is left.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(HyperError::InvalidPolynomial("division left a remainder".into()));
        }
        Ok(q)
    }

    /// Multiplicity of `t = 0` as a root (number of vanishing low coefficients).
    pub fn zero_root_multiplicity(&self) -> usize {
        if self.is_zero() {
            return self.coeffs.len();
        }
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// `t^m` divides out.
    pub fn deflate_zero_roots(&self) -> (usize, Self) {
        let m = self.zero_root_multiplicity();
        (m, Self::from_coeffs(self.coeffs[m.min(self.coeffs.len())..].to_vec()))
    }

    /// `q(−t)`.
    pub fn reflect(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }
}
