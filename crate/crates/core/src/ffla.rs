//! Exact arithmetic over a prime field `F_p` and the dense linear algebra built on it.
//!
//! Scalars are `u32` values kept in canonical form `0..p`. The modulus is limited to
//! `p < 2^16`, so a product of two scalars fits in 32 bits and a dot product of any
//! practical length can be accumulated in a `u64` and reduced once.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_MODULUS: u32 = 1 << 16;

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u32,
}

fn is_prime(n: u32) -> bool {
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

impl PrimeField {
    /// A field of characteristic `p >= 5`.
    pub fn new(p: u32) -> Result<Self> {
        let field = Self::with_small_prime_override(p)?;
        if p < 5 {
            return Err(Error::SmallCharacteristic(p));
        }
        Ok(field)
    }

    /// Like [`PrimeField::new`] but also accepts `p = 2, 3`.
    pub fn with_small_prime_override(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= MAX_MODULUS {
            return Err(Error::InvalidParameters(format!(
                "modulus {p} is too large (must be below {MAX_MODULUS})"
            )));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u32 {
        (x % self.p as u64) as u32
    }

    pub fn from_i64(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
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
        (a * b) % self.p
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, (self.p - 2) as u64))
        }
    }

    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }

    /// `n! mod p`.
    pub fn factorial(self, n: u64) -> u32 {
        (1..=n).fold(1 % self.p, |acc, k| self.mul(acc, self.reduce(k)))
    }

    pub fn zero_vector(self, len: usize) -> FVector {
        FVector::zeros(len)
    }

    pub fn random_vector<R: Rng + ?Sized>(self, len: usize, rng: &mut R) -> FVector {
        FVector((0..len).map(|_| self.random(rng)).collect())
    }

    /// `dst += c * src`.
    pub fn axpy(self, dst: &mut FVector, c: u32, src: &FVector) {
        debug_assert_eq!(dst.len(), src.len());
        if c == 0 {
            return;
        }
        for (d, &s) in dst.0.iter_mut().zip(&src.0) {
            if s != 0 {
                *d = (*d + c * s) % self.p;
            }
        }
    }

    pub fn scale(self, c: u32, v: &FVector) -> FVector {
        FVector(v.0.iter().map(|&x| self.mul(c, x)).collect())
    }

    pub fn add_vectors(self, a: &FVector, b: &FVector) -> FVector {
        FVector(a.0.iter().zip(&b.0).map(|(&x, &y)| self.add(x, y)).collect())
    }

    pub fn sub_vectors(self, a: &FVector, b: &FVector) -> FVector {
        FVector(a.0.iter().zip(&b.0).map(|(&x, &y)| self.sub(x, y)).collect())
    }

    /// `Σ coeffs[i] * vectors[i]`; `len` is the ambient dimension.
    pub fn combine(self, len: usize, coeffs: &[u32], vectors: &[FVector]) -> FVector {
        let mut out = FVector::zeros(len);
        for (&c, v) in coeffs.iter().zip(vectors) {
            self.axpy(&mut out, c, v);
        }
        out
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// A coordinate vector over `F_p`. Length is fixed at creation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FVector(Vec<u32>);

impl FVector {
    pub fn zeros(len: usize) -> Self {
        FVector(vec![0; len])
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.0[i] = 1;
        v
    }

    /// Wraps raw coordinates, reducing them mod `p`.
    pub fn from_coords(field: PrimeField, coords: Vec<u32>) -> Self {
        FVector(coords.into_iter().map(|c| c % field.p()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }

    /// Indices of nonzero coordinates.
    pub fn support(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().copied().enumerate().filter(|&(_, c)| c != 0)
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, c: u32) {
        self.0[i] = c;
    }
}

impl std::ops::Index<usize> for FVector {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

/// Dense row-major matrix over `F_p`. Matrices act on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn diagonal(field: PrimeField, diag: &[u32]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(field, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d % field.p();
        }
        m
    }

    /// Builds a matrix from rows of raw entries; entries are reduced mod `p`.
    pub fn from_rows(field: PrimeField, rows: &[Vec<u32>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.data[i * c + j] = x % field.p();
            }
        }
        m
    }

    pub fn from_row_vectors(field: PrimeField, cols: usize, rows: &[FVector]) -> Self {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols);
            m.data[i * cols..(i + 1) * cols].copy_from_slice(row.as_slice());
        }
        m
    }

    pub fn from_columns(field: PrimeField, rows: usize, cols: &[FVector]) -> Self {
        let mut m = Self::zeros(field, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &x) in col.as_slice().iter().enumerate() {
                m.data[i * cols.len() + j] = x;
            }
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u32) {
        self.data[i * self.cols + j] = x % self.field.p();
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> FVector {
        FVector(self.row(i).to_vec())
    }

    pub fn column(&self, j: usize) -> FVector {
        FVector((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    pub fn columns(&self) -> Vec<FVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        Matrix {
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        Matrix {
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let f = self.field;
        Matrix {
            data: self.data.iter().map(|&a| f.mul(c, a)).collect(),
            ..self.clone()
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: u32, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if c == 0 {
            return;
        }
        let p = self.field.p();
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            if b != 0 {
                *a = (*a + c * b) % p;
            }
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "incompatible shapes");
        let p = self.field.p() as u64;
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let mut acc = vec![0u64; m];
        let mut out = Matrix::zeros(self.field, n, m);
        for i in 0..n {
            acc.iter_mut().for_each(|x| *x = 0);
            for l in 0..k {
                let a = self.data[i * k + l] as u64;
                if a == 0 {
                    continue;
                }
                let row = &other.data[l * m..(l + 1) * m];
                for (x, &b) in acc.iter_mut().zip(row) {
                    *x += a * b as u64;
                }
            }
            for (j, &x) in acc.iter().enumerate() {
                out.data[i * m + j] = (x % p) as u32;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &FVector) -> FVector {
        assert_eq!(self.cols, v.len(), "incompatible shapes");
        let p = self.field.p() as u64;
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = 0u64;
            for (&a, &b) in self.row(i).iter().zip(v.as_slice()) {
                acc += a as u64 * b as u64;
            }
            out.push((acc % p) as u32);
        }
        FVector(out)
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.field, self.rows);
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

    /// Reduced row echelon form together with its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let p = f.p();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.data[r * cols + c]).expect("nonzero pivot");
            for j in c..cols {
                let x = &mut self.data[r * cols + j];
                *x = f.mul(*x, inv);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.data[i * cols + c];
                if factor == 0 {
                    continue;
                }
                let neg = p - factor;
                for j in c..cols {
                    let pivot_entry = self.data[r * cols + j];
                    if pivot_entry != 0 {
                        let x = &mut self.data[i * cols + j];
                        *x = (*x + neg * pivot_entry) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : M v = 0}`; its size is `cols - rank`.
    pub fn kernel_basis(&self) -> Vec<FVector> {
        let (r, pivots) = self.rref();
        let f = self.field;
        let mut is_pivot = vec![None; self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(row);
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut v = FVector::zeros(self.cols);
            v.0[free] = 1;
            for (row, &c) in pivots.iter().enumerate() {
                v.0[c] = f.neg(r.get(row, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of `ker(M - λI)`.
    pub fn eigenspace(&self, lambda: u32) -> Result<Vec<FVector>> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let shifted = self.sub(&Matrix::identity(self.field, self.rows).scale(lambda));
        Ok(shifted.kernel_basis())
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            aug.data[i * 2 * n..i * 2 * n + n].copy_from_slice(self.row(i));
            aug.data[i * 2 * n + n + i] = 1;
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            inv.data[i * n..(i + 1) * n].copy_from_slice(&aug.data[i * 2 * n + n..(i + 1) * 2 * n]);
        }
        Some(inv)
    }

    pub fn determinant(&self) -> u32 {
        assert!(self.is_square());
        let f = self.field;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1u32;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| m.get(i, c) != 0) else {
                return 0;
            };
            if pr != c {
                for j in 0..n {
                    m.data.swap(pr * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let pivot = m.get(c, c);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot).expect("nonzero pivot");
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), inv);
                if factor == 0 {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(c, j)));
                    m.data[i * n + j] = v;
                }
            }
        }
        det
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(u32::to_string).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Reduced echelon basis of the span of `vectors` (zero rows dropped).
pub fn echelon_basis(field: PrimeField, dim: usize, vectors: &[FVector]) -> Vec<FVector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = Matrix::from_row_vectors(field, dim, vectors).rref();
    (0..pivots.len()).map(|i| r.row_vector(i)).collect()
}

/// Basis of `span(a) ∩ span(b)`, computed from the kernel of `[A | -B]`.
pub fn intersect_subspaces(field: PrimeField, dim: usize, a: &[FVector], b: &[FVector]) -> Vec<FVector> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let a = echelon_basis(field, dim, a);
    let b = echelon_basis(field, dim, b);
    let mut cols: Vec<FVector> = a.clone();
    cols.extend(b.iter().map(|v| field.scale(field.neg(1), v)));
    let system = Matrix::from_columns(field, dim, &cols);
    let kernel = system.kernel_basis();
    let images: Vec<FVector> = kernel
        .iter()
        .map(|k| field.combine(dim, &k.as_slice()[..a.len()], &a))
        .collect();
    echelon_basis(field, dim, &images)
}

/// Expresses vectors in coordinates relative to a fixed list of independent vectors.
#[derive(Clone, Debug)]
pub struct BasisSolver {
    field: PrimeField,
    dim: usize,
    basis_len: usize,
    echelon: Vec<FVector>,
    pivots: Vec<usize>,
    // echelon[r] = Σ_i transform[r][i] * basis[i]
    transform: Vec<Vec<u32>>,
}

impl BasisSolver {
    pub fn new(field: PrimeField, dim: usize, basis: &[FVector]) -> Result<Self> {
        let k = basis.len();
        let mut rows = Vec::with_capacity(k);
        for (i, b) in basis.iter().enumerate() {
            if b.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: b.len(),
                });
            }
            let mut row = b.as_slice().to_vec();
            row.extend((0..k).map(|j| u32::from(i == j)));
            rows.push(row);
        }
        let aug = if k == 0 {
            Matrix::zeros(field, 0, dim)
        } else {
            Matrix::from_rows(field, &rows)
        };
        let (r, pivots) = aug.rref();
        let pivots: Vec<usize> = pivots.into_iter().filter(|&c| c < dim).collect();
        if pivots.len() < k {
            return Err(Error::LinearlyDependent);
        }
        let echelon = (0..k).map(|i| FVector(r.row(i)[..dim].to_vec())).collect();
        let transform = (0..k).map(|i| r.row(i)[dim..].to_vec()).collect();
        Ok(BasisSolver {
            field,
            dim,
            basis_len: k,
            echelon,
            pivots,
            transform,
        })
    }

    pub fn len(&self) -> usize {
        self.basis_len
    }

    pub fn is_empty(&self) -> bool {
        self.basis_len == 0
    }

    /// Coordinates of `v`, or `None` when `v` is outside the span.
    pub fn coordinates(&self, v: &FVector) -> Option<Vec<u32>> {
        let f = self.field;
        if v.len() != self.dim {
            return None;
        }
        let mut residual = v.clone();
        let mut ech = vec![0u32; self.basis_len];
        for (r, &c) in self.pivots.iter().enumerate() {
            let a = residual[c];
            if a != 0 {
                ech[r] = a;
                f.axpy(&mut residual, f.neg(a), &self.echelon[r]);
            }
        }
        if !residual.is_zero() {
            return None;
        }
        let mut coords = vec![0u32; self.basis_len];
        for (r, &a) in ech.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (i, &t) in self.transform[r].iter().enumerate() {
                coords[i] = f.add(coords[i], f.mul(a, t));
            }
        }
        Some(coords)
    }
}

/// Echelon basis grown one vector at a time; used to pick an independent subset of a
/// spanning list while keeping track of which inputs were kept.
#[derive(Clone, Debug)]
pub struct IncrementalBasis {
    field: PrimeField,
    dim: usize,
    rows: Vec<(usize, FVector)>,
}

impl IncrementalBasis {
    pub fn new(field: PrimeField, dim: usize) -> Self {
        IncrementalBasis {
            field,
            dim,
            rows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn reduce(&self, v: &FVector) -> FVector {
        let f = self.field;
        let mut r = v.clone();
        for (pivot, row) in &self.rows {
            let a = r[*pivot];
            if a != 0 {
                f.axpy(&mut r, f.neg(a), row);
            }
        }
        r
    }

    pub fn contains(&self, v: &FVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` if it is independent of the vectors seen so far; returns whether it was added.
    pub fn insert(&mut self, v: &FVector) -> bool {
        assert_eq!(v.len(), self.dim);
        let r = self.reduce(v);
        let Some((pivot, a)) = r.support().next() else {
            return false;
        };
        let inv = self.field.inv(a).expect("nonzero");
        self.rows.push((pivot, self.field.scale(inv, &r)));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn field_construction() {
        assert!(PrimeField::new(5).is_ok());
        assert_eq!(PrimeField::new(6), Err(Error::NotPrime(6)));
        assert_eq!(PrimeField::new(3), Err(Error::SmallCharacteristic(3)));
        assert!(PrimeField::with_small_prime_override(3).is_ok());
    }

    #[test]
    fn field_ops() {
        let f = f5();
        assert_eq!(f.inv(2), Some(3));
        assert_eq!(f.inv(0), None);
        assert_eq!(f.from_i64(-2), 3);
        assert_eq!(f.factorial(4), 4);
        assert_eq!(f.pow(2, 4), 1);
    }

    #[test]
    fn rref_identity_and_zero() {
        let f = f5();
        let id = Matrix::identity(f, 3);
        let (r, piv) = id.rref();
        assert_eq!(r, id);
        assert_eq!(piv, vec![0, 1, 2]);
        let z = Matrix::zeros(f, 2, 2);
        let (r, piv) = z.rref();
        assert!(r.is_zero());
        assert!(piv.is_empty());
    }

    #[test]
    fn rref_rank_one() {
        let f = f5();
        let m = Matrix::from_rows(f, &[vec![1, 2], vec![2, 4]]);
        let (r, piv) = m.rref();
        assert_eq!(r, Matrix::from_rows(f, &[vec![1, 2], vec![0, 0]]));
        assert_eq!(piv, vec![0]);
    }

    #[test]
    fn kernels() {
        let f = f5();
        assert!(Matrix::identity(f, 4).kernel_basis().is_empty());
        assert_eq!(Matrix::zeros(f, 1, 3).kernel_basis().len(), 3);
        let m = Matrix::from_rows(f, &[vec![1, 2], vec![2, 4]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        // x + 2y = 0 over F_5
        let v = &k[0];
        assert_eq!(f.add(v[0], f.mul(2, v[1])), 0);
        assert!(!v.is_zero());
    }

    #[test]
    fn eigenspaces() {
        let f = f5();
        let d = Matrix::diagonal(f, &[1, 2]);
        assert_eq!(d.eigenspace(1).unwrap(), vec![FVector::unit(2, 0)]);
        assert!(d.eigenspace(3).unwrap().is_empty());
        assert!(Matrix::zeros(f, 2, 3).eigenspace(0).is_err());
    }

    #[test]
    fn intersections() {
        let f = f5();
        let e = |i| FVector::unit(3, i);
        assert_eq!(intersect_subspaces(f, 3, &[e(0)], &[e(0)]), vec![e(0)]);
        assert!(intersect_subspaces(f, 3, &[e(0)], &[e(1)]).is_empty());
        assert_eq!(intersect_subspaces(f, 3, &[e(0), e(1)], &[e(1), e(2)]), vec![e(1)]);
    }

    #[test]
    fn inverse_and_determinant() {
        let f = f5();
        let m = Matrix::from_rows(f, &[vec![1, 2], vec![3, 4]]);
        // det = 4 - 6 = -2 = 3
        assert_eq!(m.determinant(), 3);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(f, 2));
        assert!(Matrix::from_rows(f, &[vec![1, 2], vec![2, 4]]).inverse().is_none());
    }

    #[test]
    fn solver_coordinates() {
        let f = f5();
        let b = vec![FVector::from_coords(f, vec![1, 1, 0]), FVector::from_coords(f, vec![0, 1, 1])];
        let s = BasisSolver::new(f, 3, &b).unwrap();
        let v = f.combine(3, &[2, 3], &b);
        assert_eq!(s.coordinates(&v), Some(vec![2, 3]));
        assert_eq!(s.coordinates(&FVector::unit(3, 0)), None);
        assert!(BasisSolver::new(f, 3, &[b[0].clone(), b[0].clone()]).is_err());
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(0u32..5, c), r)
                .prop_map(|rows| Matrix::from_rows(PrimeField::new(5).unwrap(), &rows))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix()) {
            prop_assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
            for v in m.kernel_basis() {
                prop_assert!(m.mul_vec(&v).is_zero());
            }
        }

        #[test]
        fn rref_idempotent(m in arb_matrix()) {
            let (r, piv) = m.rref();
            let (rr, piv2) = r.rref();
            prop_assert_eq!(rr, r);
            prop_assert_eq!(piv, piv2);
        }

        #[test]
        fn eigenvectors_are_exact(rows in proptest::collection::vec(proptest::collection::vec(0u32..5, 4), 4), lambda in 0u32..5) {
            let f = PrimeField::new(5).unwrap();
            let m = Matrix::from_rows(f, &rows);
            for v in m.eigenspace(lambda).unwrap() {
                prop_assert_eq!(m.mul_vec(&v), f.scale(lambda, &v));
            }
            let total: usize = (0..5).map(|l| m.eigenspace(l).unwrap().len()).sum();
            prop_assert!(total <= 4);
        }
    }

    #[test]
    fn eigenspace_sum_full_iff_frobenius_fixed() {
        let f = f5();
        // diag(1,2,3) satisfies M^5 = M; a Jordan block does not.
        let d = Matrix::diagonal(f, &[1, 2, 3]);
        assert_eq!(d.pow(5), d);
        let total: usize = (0..5).map(|l| d.eigenspace(l).unwrap().len()).sum();
        assert_eq!(total, 3);
        let j = Matrix::from_rows(f, &[vec![1, 1], vec![0, 1]]);
        assert_ne!(j.pow(5), j);
        let total: usize = (0..5).map(|l| j.eigenspace(l).unwrap().len()).sum();
        assert_eq!(total, 1);
    }
}
