//! Exact square linear maps with a floating view.

use std::fmt;

use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, HyperError, Result};
use crate::num::{format_rational, from_f64, parse_rational, rat, to_f64, Rational};

/// Square matrix over the rationals. `invertible` is cached from the exact
/// determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    rows: Vec<Vec<Rational>>,
    det: Rational,
}

impl LinearMap {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(HyperError::precondition("empty matrix"));
        }
        for r in &rows {
            check_dim(n, r.len())?;
        }
        let det = determinant(&rows);
        Ok(LinearMap { rows, det })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    /// Exact binary values of a float matrix.
    pub fn from_f64(m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(HyperError::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
        }
        let rows = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| from_f64(m[(i, j)])).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![Rational::one(); n])
    }

    pub fn scalar(n: usize, c: Rational) -> Self {
        Self::diagonal(&vec![c; n])
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        let n = d.len();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { d[i].clone() } else { Rational::zero() }).collect())
            .collect();
        Self::from_rows(rows).expect("square")
    }

    /// `(P x)_i = x_{sigma(i)}`.
    pub fn permutation(sigma: &[usize]) -> Result<Self> {
        let n = sigma.len();
        let mut seen = vec![false; n];
        for &s in sigma {
            if s >= n || seen[s] {
                return Err(HyperError::precondition(format!("{sigma:?} is not a permutation")));
            }
            seen[s] = true;
        }
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if sigma[i] == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        Self::from_rows(rows)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn determinant(&self) -> &Rational {
        &self.det
    }

    pub fn invertible(&self) -> bool {
        !self.det.is_zero()
    }

    pub fn apply(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        check_dim(self.dim(), x.len())?;
        Ok(self
            .rows
            .iter()
            .map(|r| r.iter().zip(x).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
            .collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        let n = self.dim();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(Rational::zero(), |acc, k| acc + &self.rows[i][k] * &other.rows[k][j]))
                    .collect()
            })
            .collect();
        Self::from_rows(rows)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_rows(self.rows.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()).expect("square")
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim();
        Self::from_rows((0..n).map(|i| (0..n).map(|j| self.rows[j][i].clone()).collect()).collect()).expect("square")
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.invertible() {
            return Err(HyperError::Singular);
        }
        let n = self.dim();
        let mut aug: Vec<Vec<Rational>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !aug[r][col].is_zero()).ok_or(HyperError::Singular)?;
            aug.swap(col, pivot);
            let inv = Rational::one() / &aug[col][col];
            for v in aug[col].iter_mut() {
                *v *= &inv;
            }
            for r in 0..n {
                if r != col && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    for c in 0..2 * n {
                        let delta = &f * &aug[col][c];
                        aug[r][c] -= delta;
                    }
                }
            }
        }
        Self::from_rows(aug.into_iter().map(|r| r[n..].to_vec()).collect())
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| to_f64(&self.rows[i][j]))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim())
    }

    /// JSON array of rows of decimal/fraction strings.
    pub fn parse_json(s: &str) -> Result<Self> {
        let raw: Vec<Vec<NumberLike>> = serde_json::from_str(s).map_err(|e| HyperError::parse(e.to_string()))?;
        let rows = raw
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.to_rational()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn to_json_rows(&self) -> Vec<Vec<String>> {
        self.rows.iter().map(|r| r.iter().map(format_rational).collect()).collect()
    }
}

impl fmt::Display for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(format_rational).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// A JSON scalar given either as a string (`"3/2"`) or a plain number.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberLike {
    Text(String),
    Int(i64),
    Float(f64),
}

impl NumberLike {
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            NumberLike::Text(s) => parse_rational(s),
            NumberLike::Int(i) => Ok(rat(*i)),
            NumberLike::Float(x) => parse_rational(&x.to_string()),
        }
    }
}

/// Exact determinant by Gaussian elimination over the rationals.
pub fn determinant(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let delta = &f * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    det
}

/// Exact rank of a (possibly rectangular) matrix given by rows.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let m = a.len();
    let n = a.first().map(Vec::len).unwrap_or(0);
    let mut r = 0;
    for col in 0..n {
        let Some(pivot) = (r..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, pivot);
        for i in r + 1..m {
            if a[i][col].is_zero() {
                continue;
            }
            let f = &a[i][col] / &a[r][col];
            for c in col..n {
                let delta = &f * &a[r][c];
                a[i][c] -= delta;
            }
        }
        r += 1;
        if r == m {
            break;
        }
    }
    r
}

/// Solves `B c = z` exactly where `B` is `n × r` with independent columns.
pub fn solve_columns(columns: &[Vec<Rational>], z: &[Rational]) -> Result<Vec<Rational>> {
    let r = columns.len();
    let n = z.len();
    for c in columns {
        check_dim(n, c.len())?;
    }
    // augmented n × (r+1)
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(z[i].clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..r {
        let Some(p) = (pivot_row..n).find(|&i| !a[i][col].is_zero()) else {
            return Err(HyperError::precondition("basis columns are linearly dependent"));
        };
        a.swap(pivot_row, p);
        let inv = Rational::one() / &a[pivot_row][col];
        for v in a[pivot_row].iter_mut() {
            *v *= &inv;
        }
        for i in 0..n {
            if i != pivot_row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for c in 0..=r {
                    let delta = &f * &a[pivot_row][c];
                    a[i][c] -= delta;
                }
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    if a[pivot_row..].iter().any(|row| !row[r].is_zero()) {
        return Err(HyperError::precondition("point is not in the span of the basis"));
    }
    Ok(pivots.iter().map(|&p| a[p][r].clone()).collect())
}

/// Largest absolute entry.
pub fn max_abs_entry(m: &LinearMap) -> Rational {
    m.rows().iter().flatten().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
}
