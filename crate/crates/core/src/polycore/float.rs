use crate::num::to_f64;

use super::HomoPoly;

/// Floating-point snapshot of a [`HomoPoly`] for bulk evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatPoly {
    nvars: usize,
    degree: usize,
    // flattened exponents, `nvars` entries per term
    exps: Vec<u8>,
    coeffs: Vec<f64>,
    max_abs: f64,
}

impl FloatPoly {
    pub fn from_exact(p: &HomoPoly) -> Self {
        let mut exps = Vec::with_capacity(p.num_terms() * p.nvars());
        let mut coeffs = Vec::with_capacity(p.num_terms());
        for (exp, c) in p.terms() {
            exps.extend(exp.iter().map(|&a| a as u8));
            coeffs.push(to_f64(c));
        }
        let max_abs = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        FloatPoly {
            nvars: p.nvars(),
            degree: p.degree(),
            exps,
            coeffs,
            max_abs,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.max_abs
    }

    /// Panics if `x.len() != nvars`; callers validate dimensions once up front.
    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.nvars, "FloatPoly::eval dimension");
        let n = self.nvars;
        let mut sum = 0.0;
        for (t, c) in self.coeffs.iter().enumerate() {
            let exp = &self.exps[t * n..(t + 1) * n];
            let mut term = *c;
            for (xi, &a) in x.iter().zip(exp) {
                match a {
                    0 => {}
                    1 => term *= xi,
                    2 => term *= xi * xi,
                    _ => term *= xi.powi(a as i32),
                }
            }
            sum += term;
        }
        sum
    }
}
