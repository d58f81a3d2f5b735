//! Exact arithmetic over a prime field `F_p`, dense matrices with deterministic
//! row reduction, and truncated polynomials `F_p[t]/(t^n)`.
//!
//! Every routine here is deterministic: pivots are always the first nonzero
//! entry in column order, so reduced forms and kernel bases are reproducible
//! bit for bit.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// The prime field `F_p`. Elements are stored as canonical residues `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, LinalgError> {
        if is_prime(p) {
            Ok(Self { p })
        } else {
            Err(LinalgError::NotPrime(p))
        }
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    /// Reduces a signed integer into `0..p`.
    #[inline]
    pub fn from_i64(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    /// Symmetric representative in `(-p/2, p/2]`, handy for printing.
    pub fn to_signed(self, x: u32) -> i64 {
        let x = x as i64;
        let p = self.p as i64;
        if 2 * x > p {
            x - p
        } else {
            x
        }
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p as u64 - 2))
        }
    }

    pub fn elements(self) -> impl Iterator<Item = u32> {
        0..self.p
    }

    /// All `x` with `x^2 = a`.
    pub fn square_roots(self, a: u32) -> Vec<u32> {
        self.elements().filter(|&x| self.mul(x, x) == a % self.p).collect()
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Row-major dense matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} over {} [", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: DenseMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Solution set of `m·x = b`: one particular solution plus a kernel basis.
#[derive(Clone, Debug)]
pub struct AffineSolution {
    pub particular: Vec<u32>,
    pub kernel: Vec<Vec<u32>>,
}

impl DenseMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry mod p.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| field.from_i64(x)))
            .collect();
        Ok(Self {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            debug_assert_eq!(col.len(), rows);
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    /// Matrix with a single 1 at `(row, col)`.
    pub fn unit(field: PrimeField, rows: usize, cols: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        m.set(row, col, 1);
        m
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.p();
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let p = self.field.p() as u64;
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(r, k) as u64;
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                for (slot, &b) in acc.iter_mut().zip(orow) {
                    *slot = (*slot + a * b as u64) % p;
                }
            }
            for (c, &v) in acc.iter().enumerate() {
                out.data[r * other.cols + c] = v as u32;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        let p = self.field.p() as u64;
        (0..self.rows)
            .map(|r| {
                let s = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |s, (&a, &b)| (s + a as u64 * b as u64) % p);
                s as u32
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Self { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Self { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: u32) -> Self {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.mul(a, s)).collect();
        Self { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c));
            }
        }
        m
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Sub-matrix selecting the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.field, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c));
            }
        }
        m
    }

    pub fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..m.cols {
            if prow == m.rows {
                break;
            }
            let Some(found) = (prow..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            m.swap_rows(found, prow);
            let inv = f.inv(m.get(prow, col)).expect("nonzero pivot");
            m.scale_row(prow, inv);
            for r in 0..m.rows {
                if r != prow {
                    let factor = m.get(r, col);
                    if factor != 0 {
                        m.axpy_row(r, prow, f.neg(factor));
                    }
                }
            }
            pivots.push(col);
            prow += 1;
        }
        let rank = pivots.len();
        Rref {
            matrix: m,
            pivots,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{v : self·v = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let f = self.field;
        let Rref { matrix, pivots, .. } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u32; self.cols];
                v[free] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(matrix.get(r, free));
                }
                v
            })
            .collect()
    }

    /// Solves `self·x = b`; `None` when `b` is outside the column span.
    pub fn solve_affine(&self, b: &[u32]) -> Option<AffineSolution> {
        assert_eq!(b.len(), self.rows, "rhs length must equal row count");
        let bcol = DenseMatrix::from_columns(self.field, self.rows, &[b.to_vec()]);
        let aug = self.hstack(&bcol).rref();
        if aug.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut particular = vec![0u32; self.cols];
        for (r, &pc) in aug.pivots.iter().enumerate() {
            particular[pc] = aug.matrix.get(r, self.cols);
        }
        Some(AffineSolution {
            particular,
            kernel: self.kernel_basis(),
        })
    }

    /// Indices of a deterministic maximal independent set of columns.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.rref().pivots
    }

    /// Columns of `self` at the pivot positions: a basis of the column space.
    pub fn column_space(&self) -> DenseMatrix {
        let cols = self.independent_columns();
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, &cols)
    }

    /// For a full-column-rank `self` (n×r) returns `L` (r×n) with `L·self = I`.
    pub fn left_inverse(&self) -> Option<DenseMatrix> {
        let n = self.rows;
        let r = self.cols;
        let aug = self.hstack(&DenseMatrix::identity(self.field, n)).rref();
        if aug.rank < r || aug.pivots[..r] != (0..r).collect::<Vec<_>>()[..] {
            return None;
        }
        let rows: Vec<usize> = (0..r).collect();
        let cols: Vec<usize> = (r..r + n).collect();
        Some(aug.matrix.select(&rows, &cols))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<DenseMatrix> {
        if !self.is_square() {
            return None;
        }
        self.left_inverse()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: u32) {
        let f = self.field;
        for c in 0..self.cols {
            let i = r * self.cols + c;
            self.data[i] = f.mul(self.data[i], s);
        }
    }

    /// row[dst] += s · row[src]
    fn axpy_row(&mut self, dst: usize, src: usize, s: u32) {
        let f = self.field;
        for c in 0..self.cols {
            let v = self.data[src * self.cols + c];
            if v != 0 {
                let i = dst * self.cols + c;
                self.data[i] = f.add(self.data[i], f.mul(s, v));
            }
        }
    }
}

/// Incrementally maintained subspace of `F_p^n` in reduced echelon form.
///
/// Pivots are the lowest-index nonzero coordinate of each stored row and every
/// stored row is zero at the other rows' pivots, so `reduce` is a single pass.
#[derive(Clone, Debug)]
pub struct RowSpace {
    field: PrimeField,
    len: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    pivot_row: Vec<Option<usize>>,
}

impl RowSpace {
    pub fn new(field: PrimeField, len: usize) -> Self {
        Self {
            field,
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_row: vec![None; len],
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.len
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.pivot_row[c].is_some()
    }

    /// Residue of `v` modulo the space (zero exactly when `v` is contained).
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                let s = f.neg(c);
                for (x, &y) in v.iter_mut().zip(row) {
                    if y != 0 {
                        *x = f.add(*x, f.mul(s, y));
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v` to the space; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.len);
        let f = self.field;
        let mut r = self.reduce(v);
        let Some(pc) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(r[pc]).expect("nonzero");
        r.iter_mut().for_each(|x| *x = f.mul(*x, inv));
        for row in &mut self.rows {
            let c = row[pc];
            if c != 0 {
                let s = f.neg(c);
                for (x, &y) in row.iter_mut().zip(&r) {
                    if y != 0 {
                        *x = f.add(*x, f.mul(s, y));
                    }
                }
            }
        }
        self.pivot_row[pc] = Some(self.rows.len());
        self.rows.push(r);
        self.pivots.push(pc);
        true
    }
}

/// Element of `F_p[t]/(t^n)`; `coeffs[i]` is the coefficient of `t^i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncPoly {
    field: PrimeField,
    coeffs: Vec<u32>,
}

impl TruncPoly {
    pub fn new(field: PrimeField, order: usize, coeffs: &[u32]) -> Self {
        assert!(order >= 1, "truncation order must be at least 1");
        let mut c = vec![0u32; order];
        for (i, &x) in coeffs.iter().take(order).enumerate() {
            c[i] = x % field.p();
        }
        Self { field, coeffs: c }
    }

    pub fn zero(field: PrimeField, order: usize) -> Self {
        Self::new(field, order, &[])
    }

    pub fn constant(field: PrimeField, order: usize, c: u32) -> Self {
        Self::new(field, order, &[c])
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order());
        let f = self.field;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Self { field: f, coeffs }
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        Self {
            field: f,
            coeffs: self.coeffs.iter().map(|&a| f.neg(a)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order());
        let f = self.field;
        let n = self.order();
        let mut coeffs = vec![0u32; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(n - i) {
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        Self { field: f, coeffs }
    }

    /// Image under `F_p[t]/(t^n) → F_p[t]/(t^m)` for `m ≤ n`.
    pub fn reduce(&self, m: usize) -> Self {
        assert!(m >= 1 && m <= self.order());
        Self {
            field: self.field,
            coeffs: self.coeffs[..m].to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn prime_check() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(2).is_ok());
        assert_eq!(PrimeField::new(13).unwrap().inv(5), Some(8));
    }

    #[test]
    fn rref_identity_zero_and_rank_one() {
        let f = f5();
        let id = DenseMatrix::identity(f, 2).rref();
        assert_eq!(id.matrix, DenseMatrix::identity(f, 2));
        assert_eq!(id.pivots, vec![0, 1]);
        assert_eq!(id.rank, 2);

        let z = DenseMatrix::zeros(f, 3, 4).rref();
        assert!(z.matrix.is_zero());
        assert!(z.pivots.is_empty());
        assert_eq!(z.rank, 0);

        let m = DenseMatrix::from_rows(f, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let f = f5();
        assert!(DenseMatrix::identity(f, 3).kernel_basis().is_empty());
        assert_eq!(DenseMatrix::zeros(f, 2, 3).kernel_basis().len(), 3);
        let m = DenseMatrix::from_rows(f, &[vec![1, 2], vec![2, 4]]).unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        // (-2, 1) = (3, 1) mod 5
        assert_eq!(k[0], vec![3, 1]);
    }

    #[test]
    fn affine_examples() {
        let f = f5();
        let id = DenseMatrix::identity(f, 3);
        let s = id.solve_affine(&[4, 0, 2]).unwrap();
        assert_eq!(s.particular, vec![4, 0, 2]);
        assert!(s.kernel.is_empty());
        assert!(DenseMatrix::zeros(f, 2, 2).solve_affine(&[1, 0]).is_none());
        let m = DenseMatrix::from_rows(f, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(m.solve_affine(&[1, 2]).is_some());
        assert!(m.solve_affine(&[1, 1]).is_none());
    }

    #[test]
    fn left_inverse_of_injective() {
        let f = f5();
        let k = DenseMatrix::from_rows(f, &[vec![1, 0], vec![2, 1], vec![0, 3]]).unwrap();
        let l = k.left_inverse().unwrap();
        assert_eq!(l.mul(&k), DenseMatrix::identity(f, 2));
        let dep = DenseMatrix::from_rows(f, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(dep.left_inverse().is_none());
    }

    #[test]
    fn row_space_membership() {
        let f = f5();
        let mut rs = RowSpace::new(f, 3);
        assert!(rs.insert(&[0, 1, 2]));
        assert!(rs.insert(&[1, 1, 0]));
        assert!(!rs.insert(&[1, 2, 2]));
        assert!(rs.contains(&[2, 4, 4]));
        assert!(!rs.contains(&[0, 0, 1]));
        assert_eq!(rs.dim(), 2);
    }

    #[test]
    fn trunc_poly_basics() {
        let f = f5();
        let a = TruncPoly::new(f, 3, &[1, 1]);
        let sq = a.mul(&a);
        assert_eq!(sq.coeffs(), &[1, 2, 1]);
        let cube = sq.mul(&a);
        // (1+t)^3 = 1 + 3t + 3t^2 (t^3 truncated)
        assert_eq!(cube.coeffs(), &[1, 3, 3]);
        assert_eq!(cube.reduce(2).coeffs(), &[1, 3]);
    }
}
