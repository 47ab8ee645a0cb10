//! Exact rational arithmetic and the small amount of linear algebra the
//! geometry needs: square solves, determinant signs, and a row-reduction
//! based solver for rectangular systems.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Scalar = num_rational::BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `[+-]digits[/digits]` with a positive denominator.
pub fn parse_scalar(token: &str) -> Option<Scalar> {
    let (num, den) = match token.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (token, None),
    };
    let digits = num.strip_prefix(['+', '-']).unwrap_or(num);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let num = BigInt::from_str(num.strip_prefix('+').unwrap_or(num)).ok()?;
    let den = match den {
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            let d = BigInt::from_str(d).ok()?;
            if d.is_zero() {
                return None;
            }
            d
        }
        None => BigInt::one(),
    };
    Some(Scalar::new(num, den))
}

/// Sign of a scalar as -1, 0 or +1.
pub fn sign(x: &Scalar) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(ExactMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(ExactMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor from integer rows; panics on ragged input.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
            .expect("rectangular integer rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(a * self.cols + k, b * self.cols + k);
        }
    }

    pub fn min_entry(&self) -> Option<&Scalar> {
        self.data.iter().min()
    }

    /// Rows selected by index, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        ExactMatrix { rows: idx.len(), cols: self.cols, data }
    }

    fn require_square(&self) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!("{}x{} matrix is not square", self.rows, self.cols)));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = Scalar;

    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).fold(Scalar::zero(), |acc, (x, y)| acc + x * y)
}

/// Solves `m x = rhs` for square `m`. `Ok(None)` when `m` is singular.
pub fn solve_linear(m: &ExactMatrix, rhs: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    m.require_square()?;
    if rhs.len() != m.rows {
        return Err(Error::Dimension(format!(
            "right-hand side of length {} for a {}x{} system",
            rhs.len(),
            m.rows,
            m.cols
        )));
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut b = rhs.to_vec();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
            return Ok(None);
        };
        a.swap_rows(col, piv);
        b.swap(col, piv);
        let inv = a[(col, col)].recip();
        for r in col + 1..n {
            if a[(r, col)].is_zero() {
                continue;
            }
            let factor = &a[(r, col)] * &inv;
            for k in col..n {
                let delta = &factor * &a[(col, k)];
                a[(r, k)] -= delta;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    let mut x = vec![Scalar::zero(); n];
    for i in (0..n).rev() {
        let mut acc = b[i].clone();
        for k in i + 1..n {
            acc -= &a[(i, k)] * &x[k];
        }
        x[i] = acc / &a[(i, i)];
    }
    Ok(Some(x))
}

/// Exact sign of the determinant of a square matrix.
pub fn det_sign(m: &ExactMatrix) -> Result<i8> {
    m.require_square()?;
    let n = m.rows;
    let mut a = m.clone();
    let mut s: i8 = 1;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
            return Ok(0);
        };
        if piv != col {
            a.swap_rows(col, piv);
            s = -s;
        }
        if a[(col, col)].is_negative() {
            s = -s;
        }
        let inv = a[(col, col)].recip();
        for r in col + 1..n {
            if a[(r, col)].is_zero() {
                continue;
            }
            let factor = &a[(r, col)] * &inv;
            for k in col..n {
                let delta = &factor * &a[(col, k)];
                a[(r, k)] -= delta;
            }
        }
    }
    Ok(s)
}

/// Rank of an arbitrary matrix.
pub fn rank(m: &ExactMatrix) -> usize {
    let (r, _) = row_reduce(m.clone());
    r
}

/// Solution structure of a possibly rectangular system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SystemSolution {
    Unique(Vec<Scalar>),
    Inconsistent,
    Underdetermined,
}

/// Solves `m x = rhs` for any shape by reduced row echelon form.
pub fn solve_system(m: &ExactMatrix, rhs: &[Scalar]) -> Result<SystemSolution> {
    if rhs.len() != m.rows {
        return Err(Error::Dimension(format!(
            "right-hand side of length {} for {} equations",
            rhs.len(),
            m.rows
        )));
    }
    let mut aug = ExactMatrix::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, m.cols)] = rhs[i].clone();
    }
    let (rank, reduced) = row_reduce(aug);
    let pivots: Vec<usize> = (0..rank)
        .map(|i| (0..=m.cols).find(|&j| !reduced[(i, j)].is_zero()).expect("nonzero pivot row"))
        .collect();
    if pivots.last() == Some(&m.cols) {
        return Ok(SystemSolution::Inconsistent);
    }
    if rank < m.cols {
        return Ok(SystemSolution::Underdetermined);
    }
    Ok(SystemSolution::Unique((0..m.cols).map(|i| reduced[(i, m.cols)].clone()).collect()))
}

fn row_reduce(mut a: ExactMatrix) -> (usize, ExactMatrix) {
    let mut rank = 0;
    for col in 0..a.cols {
        if rank == a.rows {
            break;
        }
        let Some(piv) = (rank..a.rows).find(|&r| !a[(r, col)].is_zero()) else {
            continue;
        };
        a.swap_rows(rank, piv);
        let inv = a[(rank, col)].recip();
        for k in col..a.cols {
            a[(rank, k)] *= &inv;
        }
        for r in 0..a.rows {
            if r == rank || a[(r, col)].is_zero() {
                continue;
            }
            let factor = a[(r, col)].clone();
            for k in col..a.cols {
                let delta = &factor * &a[(rank, k)];
                a[(r, k)] -= delta;
            }
        }
        rank += 1;
    }
    (rank, a)
}
