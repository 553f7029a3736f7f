//! Dense linear algebra over a prime field F_p.
//!
//! A [`Matrix`] carries its modulus, so every operation on it is closed and
//! exact. Vectors are plain `Vec<u32>` of reduced residues.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("modulus {0} is not an odd prime")]
    BadModulus(u32),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u32, u32),
}

/// The prime field F_p for an odd prime p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, GfError> {
        if p < 3 || !is_prime(p) || p > 65_521 {
            return Err(GfError::BadModulus(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(self) -> u32 {
        self.p
    }

    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Inverse of a nonzero residue.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        self.pow(a, (self.p - 2) as u64)
    }

    /// Interpret a residue as the representative in (-p/2, p/2].
    pub fn signed(self, a: u32) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Row-major dense matrix over F_p.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl Matrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Matrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Matrix::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    /// Build from signed integer rows, reducing mod p. All rows must have equal length.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Matrix::zeros(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.data[i * c + j] = x.rem_euclid(p as i64) as u32;
            }
        }
        m
    }

    pub fn from_fn(p: u32, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut m = Matrix::zeros(p, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j).rem_euclid(p as i64) as u32;
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(p: u32, nrows: usize, cols: &[Vec<u32>]) -> Self {
        let mut m = Matrix::zeros(p, nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows);
            for (i, &x) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = x % p;
            }
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_cols(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    fn check_same_p(&self, other: &Matrix) {
        assert_eq!(self.p, other.p, "moduli differ");
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.check_same_p(other);
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let p = self.p as u64;
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            let orow = &mut out[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b as u64;
                }
                // keep accumulators small enough to never overflow
                if k % 4096 == 4095 {
                    for o in orow.iter_mut() {
                        *o %= p;
                    }
                }
            }
        }
        Matrix {
            p: self.p,
            rows: self.rows,
            cols: other.cols,
            data: out.into_iter().map(|x| (x % p) as u32).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                let s: u64 = self.row(i).iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum();
                (s % p) as u32
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.check_same_p(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field();
        Matrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.check_same_p(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field();
        Matrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let f = self.field();
        let c = c % self.p;
        Matrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// self + c * other
    pub fn add_scaled(&self, other: &Matrix, c: u32) -> Matrix {
        self.check_same_p(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field();
        Matrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.add(a, f.mul(b, c)))
                .collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(self.p - 1)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.p, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn hstack(p: u32, rows: usize, blocks: &[&Matrix]) -> Matrix {
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(p, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            for i in 0..rows {
                for j in 0..b.cols {
                    m.data[i * cols + off + j] = b.data[i * b.cols + j];
                }
            }
            off += b.cols;
        }
        m
    }

    pub fn vstack(p: u32, cols: usize, blocks: &[&Matrix]) -> Matrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Matrix { p, rows, cols, data }
    }

    /// Block diagonal sum.
    pub fn block_diag(p: u32, blocks: &[&Matrix]) -> Matrix {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(p, r, c);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.data[(ro + i) * c + co + j] = b.data[i * b.cols + j];
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        m
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.p, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.data[a * cols.len() + b] = self.get(i, j);
            }
        }
        m
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, cols)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.submatrix(rows, &cols)
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Matrix::hstack(self.p, n, &[self, &Matrix::identity(self.p, n)]);
        let r = rref(&aug);
        if r.pivots.iter().take_while(|&&c| c < n).count() < n {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(r.matrix.submatrix(&rows, &cols))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over F_{}", self.rows, self.cols, self.p)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form.
pub fn rref(m: &Matrix) -> Rref {
    let f = m.field();
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.data.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for j in 0..cols {
                a.swap(piv * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(a[r * cols + c]);
        for j in c..cols {
            a[r * cols + j] = f.mul(a[r * cols + j], inv);
        }
        let pivot_row: Vec<u32> = a[r * cols..(r + 1) * cols].to_vec();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a[i * cols + c];
            if factor == 0 {
                continue;
            }
            let neg = f.neg(factor);
            for j in c..cols {
                if pivot_row[j] != 0 {
                    a[i * cols + j] = f.add(a[i * cols + j], f.mul(neg, pivot_row[j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref {
        matrix: Matrix {
            p: m.p,
            rows,
            cols,
            data: a,
        },
        rank: pivots.len(),
        pivots,
    }
}

/// Basis of the null space, returned as the columns of a `cols x k` matrix.
pub fn kernel_basis(m: &Matrix) -> Matrix {
    let r = rref(m);
    let f = m.field();
    let n = m.cols;
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; n];
        for &c in &r.pivots {
            v[c] = true;
        }
        v
    };
    let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let mut k = Matrix::zeros(m.p, n, free.len());
    for (col, &fc) in free.iter().enumerate() {
        k.data[fc * free.len() + col] = 1;
        for (row, &pc) in r.pivots.iter().enumerate() {
            let v = r.matrix.get(row, fc);
            k.data[pc * free.len() + col] = f.neg(v);
        }
    }
    k
}

/// One solution of `m x = b`, or `None` when the system is inconsistent.
pub fn solve(m: &Matrix, b: &[u32]) -> Result<Option<Vec<u32>>, GfError> {
    if b.len() != m.rows {
        return Err(GfError::Dimension(format!(
            "right-hand side has length {} but matrix has {} rows",
            b.len(),
            m.rows
        )));
    }
    let rhs = Matrix::from_cols(m.p, m.rows, &[b.to_vec()]);
    Ok(solve_matrix(m, &rhs).map(|x| x.col(0)))
}

/// One solution `X` of `A X = B`, or `None` if some column is inconsistent.
pub fn solve_matrix(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    assert_eq!(a.rows, b.rows, "solve_matrix shape");
    assert_eq!(a.p, b.p);
    let n = a.cols;
    let aug = Matrix::hstack(a.p, a.rows, &[a, b]);
    let r = rref(&aug);
    if r.pivots.iter().any(|&c| c >= n) {
        return None;
    }
    let mut x = Matrix::zeros(a.p, n, b.cols);
    for (row, &pc) in r.pivots.iter().enumerate() {
        for j in 0..b.cols {
            x.data[pc * b.cols + j] = r.matrix.get(row, n + j);
        }
    }
    Some(x)
}

/// Basis of the column space, as a matrix of independent columns.
pub fn column_space(m: &Matrix) -> Matrix {
    let r = rref(&m.transpose());
    let rows: Vec<usize> = (0..r.rank).collect();
    let cols: Vec<usize> = (0..m.rows).collect();
    r.matrix.submatrix(&rows, &cols).transpose()
}

/// Incremental echelon basis of a subspace of F_p^n, kept in reduced form.
#[derive(Clone, Debug)]
pub struct EchelonSpace {
    field: PrimeField,
    n: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl EchelonSpace {
    pub fn new(field: PrimeField, n: usize) -> Self {
        EchelonSpace {
            field,
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` against the basis; the result vanishes on all pivot positions.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                let neg = f.neg(c);
                for j in 0..self.n {
                    if row[j] != 0 {
                        v[j] = f.add(v[j], f.mul(neg, row[j]));
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Insert `v`; returns true if the dimension grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let f = self.field;
        let mut r = self.reduce(v);
        let Some(pc) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(r[pc]);
        for x in r.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                let neg = f.neg(c);
                for j in 0..self.n {
                    if r[j] != 0 {
                        row[j] = f.add(row[j], f.mul(neg, r[j]));
                    }
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < pc);
        self.pivots.insert(pos, pc);
        self.rows.insert(pos, r);
        true
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Standard basis positions not used as pivots: a complement of the subspace.
    pub fn non_pivots(&self) -> Vec<usize> {
        let mut is_p = vec![false; self.n];
        for &c in &self.pivots {
            is_p[c] = true;
        }
        (0..self.n).filter(|&c| !is_p[c]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_of_rank_one_matrix() {
        let m = Matrix::from_rows(5, &[vec![1, 2], vec![2, 4]]);
        let r = rref(&m);
        assert_eq!(r.matrix, Matrix::from_rows(5, &[vec![1, 2], vec![0, 0]]));
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn identity_and_zero() {
        let id = Matrix::identity(3, 3);
        let r = rref(&id);
        assert_eq!(r.matrix, id);
        assert_eq!(r.pivots, vec![0, 1, 2]);
        assert_eq!(kernel_basis(&id).cols(), 0);

        let z = Matrix::zeros(3, 2, 4);
        let r = rref(&z);
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
        assert_eq!(kernel_basis(&Matrix::zeros(3, 3, 3)), Matrix::identity(3, 3));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_rows(7, &[vec![2, 1], vec![5, 3]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(Matrix::from_rows(7, &[vec![1, 2], vec![2, 4]]).inverse().is_none());
    }

    #[test]
    fn echelon_space_tracks_span() {
        let f = PrimeField::new(3).unwrap();
        let mut s = EchelonSpace::new(f, 3);
        assert!(s.insert(&[1, 1, 0]));
        assert!(s.insert(&[0, 1, 1]));
        assert!(!s.insert(&[1, 2, 1]));
        assert!(s.contains(&[2, 0, 1]));
        assert!(!s.contains(&[2, 0, 2]));
        assert_eq!(s.non_pivots().len(), 1);
    }

    #[test]
    fn field_rejects_composites() {
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(2).is_err());
        assert_eq!(PrimeField::new(5).unwrap().inv(2), 3);
    }
}
