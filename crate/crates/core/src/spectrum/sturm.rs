//! Exact real-root counting with Sturm sequences over the rationals.

use num_traits::{Signed, Zero};

use crate::num::Rational;
use crate::polycore::UniPoly;

/// Yun's square-free decomposition: `q = c · Π f_i^i` with each `f_i` monic
/// and square-free. Returns the nonconstant `(f_i, i)` pairs.
pub fn square_free_decomposition(q: &UniPoly) -> Vec<(UniPoly, usize)> {
    let q = q.clone().trimmed();
    if q.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let dq = q.derivative();
    let a0 = q.gcd(&dq);
    let mut b = q.exact_div(&a0).expect("gcd divides");
    let mut c = dq.exact_div(&a0).expect("gcd divides");
    let mut d = c.sub(&b.derivative());
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.monic(), i));
        }
        b = b.exact_div(&a).expect("gcd divides");
        c = d.exact_div(&a).expect("gcd divides");
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

/// Real roots counted with multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RootCounts {
    pub degree: usize,
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

impl RootCounts {
    pub fn real(&self) -> usize {
        self.negative + self.zero + self.positive
    }

    pub fn all_real(&self) -> bool {
        self.real() == self.degree
    }
}

struct Sturm(Vec<UniPoly>);

impl Sturm {
    fn new(f: &UniPoly) -> Self {
        let mut seq = vec![f.clone().trimmed(), f.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]).expect("nonzero divisor");
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&Rational::from_integer((-1).into())));
        }
        Sturm(seq)
    }

    fn variations<I: Iterator<Item = i8>>(signs: I) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    fn at(&self, t: &Rational) -> usize {
        Self::variations(self.0.iter().map(|p| sign(&p.eval(t))))
    }

    fn at_infinity(&self, positive: bool) -> usize {
        Self::variations(self.0.iter().map(|p| {
            let s = sign(&p.leading());
            let odd = p.degree().unwrap_or(0) % 2 == 1;
            if !positive && odd {
                -s
            } else {
                s
            }
        }))
    }
}

fn sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Counts the real roots of `q` by sign, with multiplicity.
pub fn count_roots(q: &UniPoly) -> RootCounts {
    let q = q.clone().trimmed();
    let degree = q.degree().unwrap_or(0);
    let mut counts = RootCounts { degree, ..Default::default() };
    let zero = Rational::zero();
    for (f, mult) in square_free_decomposition(&q) {
        let (z, g) = f.deflate_zero_roots();
        counts.zero += z * mult;
        if g.degree().unwrap_or(0) == 0 {
            continue;
        }
        let s = Sturm::new(&g);
        let at0 = s.at(&zero);
        counts.negative += (s.at_infinity(false) - at0) * mult;
        counts.positive += (at0 - s.at_infinity(true)) * mult;
    }
    counts
}

/// Distinct real roots in the half-open interval `(a, b]`.
pub fn count_distinct_in(q: &UniPoly, a: &Rational, b: &Rational) -> usize {
    if q.degree().unwrap_or(0) == 0 || a >= b {
        return 0;
    }
    let s = Sturm::new(q);
    s.at(a).saturating_sub(s.at(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, ratio};

    fn from_roots(roots: &[i64]) -> UniPoly {
        roots
            .iter()
            .fold(UniPoly::one(), |acc, &r| acc.mul(&UniPoly::from_ints(&[-r, 1])))
    }

    #[test]
    fn yun_recovers_multiplicities() {
        let q = from_roots(&[1, 1, 1, 2, -3, -3]).scale(&rat(5));
        let mut parts = square_free_decomposition(&q);
        parts.sort_by_key(|(_, m)| *m);
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0], (from_roots(&[2]), 1));
        assert_eq!(parts[1], (from_roots(&[-3]), 2));
        assert_eq!(parts[2], (from_roots(&[1]), 3));
    }

    #[test]
    fn counts_by_sign() {
        let q = from_roots(&[0, 0, 4, 4, -1, 7]);
        let c = count_roots(&q);
        assert_eq!((c.negative, c.zero, c.positive), (1, 2, 3));
        assert!(c.all_real());
    }

    #[test]
    fn complex_roots_not_counted() {
        // (t^2 + 1)(t - 2)
        let q = UniPoly::from_ints(&[1, 0, 1]).mul(&from_roots(&[2]));
        let c = count_roots(&q);
        assert_eq!(c.real(), 1);
        assert!(!c.all_real());
    }

    #[test]
    fn interval_counts() {
        let q = from_roots(&[1, 2, 3]);
        assert_eq!(count_distinct_in(&q, &ratio(3, 2), &rat(3)), 2);
        assert_eq!(count_distinct_in(&q, &rat(-5), &rat(0)), 0);
    }
}
