use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::arith::{format_rational, rat, Rational};

/// Dense matrix of exact rationals, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Rational>>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![vec![Rational::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        QMatrix { rows: rows.len(), cols, data: rows }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    pub fn diag(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.data[i][i] = e.clone();
        }
        m
    }

    pub fn block_diag(blocks: &[QMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.data[r0 + i][c0 + j] = b.data[i][j].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Rational]> {
        self.data.iter().map(Vec::as_slice)
    }

    pub fn into_rows(self) -> Vec<Vec<Rational>> {
        self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        self.data.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().flatten().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[j][i] = self.data[i][j].clone();
            }
        }
        m
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|x| x * c)
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &QMatrix) -> Self {
        assert_eq!(self.cols, other.cols, "vstack width");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        QMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &QMatrix) -> Self {
        assert_eq!(self.rows, other.rows, "hstack height");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect();
        QMatrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        QMatrix { rows: idx.len(), cols: self.cols, data: idx.iter().map(|&i| self.data[i].clone()).collect() }
    }

    pub fn columns(&self, range: std::ops::Range<usize>) -> Self {
        QMatrix {
            rows: self.rows,
            cols: range.len(),
            data: self.data.iter().map(|r| r[range.clone()].to_vec()).collect(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Rational>) {
        assert_eq!(row.len(), self.cols);
        self.data.push(row);
        self.rows += 1;
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.rows, "vector length");
        let mut out = vec![Rational::zero(); self.cols];
        for (vi, row) in v.iter().zip(&self.data) {
            if vi.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                if !x.is_zero() {
                    *o += vi * x;
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Reduced row echelon form over ℚ together with pivot columns.
    fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(pr) = (r..m.rows).find(|&i| !m.data[i][c].is_zero()) else { continue };
            m.data.swap(r, pr);
            let inv = m.data[r][c].recip();
            for x in m.data[r].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = m.data[r].clone();
            for i in 0..m.rows {
                if i != r && !m.data[i][c].is_zero() {
                    let f = m.data[i][c].clone();
                    for (x, y) in m.data[i].iter_mut().zip(&pivot_row) {
                        if !y.is_zero() {
                            *x -= &f * y;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Rational {
        assert!(self.is_square());
        let mut m = self.data.clone();
        let n = self.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m[i][c].is_zero()) else { return Rational::zero() };
            if pr != c {
                m.swap(pr, c);
                det = -det;
            }
            let piv = m[c][c].clone();
            det *= &piv;
            for i in c + 1..n {
                if m[i][c].is_zero() {
                    continue;
                }
                let f = &m[i][c] / &piv;
                let pivot_row = m[c].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &f * y;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Some(QMatrix::zeros(0, 0));
        }
        let aug = self.hstack(&QMatrix::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.columns(n..2 * n))
    }

    /// Basis (rows) of the left kernel `{x : x·A = 0}` over ℚ.
    pub fn left_kernel(&self) -> QMatrix {
        let (r, pivots) = self.transpose().rref();
        // solve Aᵀ xᵀ = 0
        let n = self.rows;
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut out = QMatrix::zeros(0, n);
        for &f in &free {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.data[i][f].clone();
            }
            out.push_row(v);
        }
        out
    }

    /// Some `x` with `x·A = v`, if one exists.
    pub fn solve_left(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(v.len(), self.cols);
        // Aᵀ xᵀ = vᵀ
        let aug = self.transpose().hstack(&QMatrix::from_rows(1, v.iter().map(|x| vec![x.clone()]).collect()));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.rows) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.rows];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.data[i][self.rows].clone();
        }
        Some(x)
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        QMatrix {
            rows: self.rows,
            cols: rhs.cols,
            data: self.data.iter().map(|r| rhs.vec_mul(r)).collect(),
        }
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, rhs: &QMatrix) -> QMatrix {
        self + &(-rhs)
    }
}

impl Neg for &QMatrix {
    type Output = QMatrix;
    fn neg(self) -> QMatrix {
        self.map(|x| -x)
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.data {
            let cells: Vec<String> = r.iter().map(format_rational).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub(crate) fn vec_scale(v: &[Rational], c: &Rational) -> Vec<Rational> {
    v.iter().map(|x| x * c).collect()
}

pub(crate) fn vec_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}
