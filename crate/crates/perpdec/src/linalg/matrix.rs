use std::fmt;

use super::field::Fp;
use crate::error::{Error, Result};

/// Dense row-major matrix over GF(p).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    f: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "Matrix(p={}, {:?})", self.f.p(), self.to_rows())
    }
}

impl Matrix {
    pub fn zeros(f: Fp, rows: usize, cols: usize) -> Self {
        Matrix { f, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(f: Fp, n: usize) -> Self {
        let mut m = Self::zeros(f, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Scalar multiple of the identity.
    pub fn scalar(f: Fp, n: usize, c: u64) -> Self {
        Self::identity(f, n).scale(c)
    }

    /// Matrix unit `E_ij`.
    pub fn unit(f: Fp, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(f, n, n);
        m.data[i * n + j] = 1;
        m
    }

    /// Builds a matrix from integer rows, reducing entries mod p.
    pub fn from_rows(f: Fp, rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::dim("ragged matrix rows"));
            }
            data.extend(row.iter().map(|&x| f.reduce(x)));
        }
        Ok(Matrix { f, rows: r, cols: c, data })
    }

    /// Builds a matrix from reduced rows.
    pub fn from_vecs(f: Fp, cols: usize, rows: &[Vec<u64>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "row length");
            data.extend(row.iter().map(|&x| x % f.p()));
        }
        Matrix { f, rows: rows.len(), cols, data }
    }

    pub fn from_flat(f: Fp, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), rows * cols, "flat data length");
        Matrix { f, rows, cols, data: data.into_iter().map(|x| x % f.p()).collect() }
    }

    pub fn diagonal(f: Fp, diag: &[u64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(f, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d % f.p();
        }
        m
    }

    #[inline]
    pub fn field(&self) -> Fp {
        self.f
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.f.p();
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_flat(&self) -> &[u64] {
        &self.data
    }

    pub fn into_flat(self) -> Vec<u64> {
        self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.f, self.rows)
    }

    fn check_same(&self, o: &Matrix) {
        assert!(
            self.rows == o.rows && self.cols == o.cols && self.f == o.f,
            "shape mismatch {}x{} vs {}x{}",
            self.rows,
            self.cols,
            o.rows,
            o.cols
        );
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        self.check_same(o);
        let f = self.f;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.add(a, b)).collect();
        Matrix { data, ..*self }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        self.check_same(o);
        let f = self.f;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Matrix { data, ..*self }
    }

    pub fn neg(&self) -> Matrix {
        let f = self.f;
        Matrix { data: self.data.iter().map(|&a| f.neg(a)).collect(), ..*self }
    }

    pub fn scale(&self, c: u64) -> Matrix {
        let f = self.f;
        let c = c % f.p();
        Matrix { data: self.data.iter().map(|&a| f.mul(a, c)).collect(), ..*self }
    }

    /// `self + c * o`.
    pub fn add_scaled(&self, o: &Matrix, c: u64) -> Matrix {
        self.check_same(o);
        let f = self.f;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.add(a, f.mul(b, c))).collect();
        Matrix { data, ..*self }
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "product shape mismatch");
        let p = self.f.p();
        let mut out = vec![0u64; self.rows * o.cols];
        // accumulate unreduced; entries < 2^31 so a few products fit in u64
        for i in 0..self.rows {
            let orow = &mut out[i * o.cols..(i + 1) * o.cols];
            let mut pending = 0;
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let brow = &o.data[k * o.cols..(k + 1) * o.cols];
                for (x, &b) in orow.iter_mut().zip(brow) {
                    *x += a * b;
                }
                pending += 1;
                if pending == 3 {
                    orow.iter_mut().for_each(|x| *x %= p);
                    pending = 0;
                }
            }
            orow.iter_mut().for_each(|x| *x %= p);
        }
        Matrix { f: self.f, rows: self.rows, cols: o.cols, data: out }
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.rows, "vector length");
        let f = self.f;
        let mut out = vec![0u64; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, x) in out.iter_mut().enumerate() {
                *x = f.add(*x, f.mul(a, self.get(k, j)));
            }
        }
        out
    }

    /// Bilinear evaluation `u * self * v^T`.
    pub fn bilinear(&self, u: &[u64], v: &[u64]) -> u64 {
        let f = self.f;
        let uv = self.vec_mul(u);
        uv.iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Self::zeros(self.f, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[j * self.rows + i] = self.get(i, j);
            }
        }
        m
    }

    /// Kronecker product.
    pub fn kron(&self, o: &Matrix) -> Matrix {
        let f = self.f;
        let mut m = Self::zeros(f, self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        m.set(i * o.rows + k, j * o.cols + l, f.mul(a, o.get(k, l)));
                    }
                }
            }
        }
        m
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, o: &Matrix) -> Matrix {
        let mut m = Self::zeros(self.f, self.rows + o.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
        }
        for i in 0..o.rows {
            for j in 0..o.cols {
                m.set(self.rows + i, self.cols + j, o.get(i, j));
            }
        }
        m
    }

    pub fn vstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.cols, "vstack width");
        let mut data = self.data.clone();
        data.extend_from_slice(&o.data);
        Matrix { f: self.f, rows: self.rows + o.rows, cols: self.cols, data }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Self::zeros(self.f, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.data[a * cols.len() + b] = self.get(i, j);
            }
        }
        m
    }

    pub fn trace(&self) -> u64 {
        let f = self.f;
        (0..self.rows.min(self.cols)).fold(0, |acc, i| f.add(acc, self.get(i, i)))
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut r = Self::identity(self.f, self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    pub fn is_nilpotent(&self) -> bool {
        self.is_square() && self.pow(self.rows.max(1) as u64).is_zero()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    pub(crate) fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.f;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv_nz(self.data[r * cols + c]);
            for j in c..cols {
                self.data[r * cols + j] = f.mul(self.data[r * cols + j], inv);
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = self.data[i * cols + c];
                if factor == 0 {
                    continue;
                }
                let neg = f.neg(factor);
                for j in c..cols {
                    let v = self.data[r * cols + j];
                    if v != 0 {
                        self.data[i * cols + j] = f.add(self.data[i * cols + j], f.mul(neg, v));
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

    /// Basis of `{x : self * x^T = 0}`, one vector per free column.
    pub fn right_kernel(&self) -> Vec<Vec<u64>> {
        let f = self.f;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(i, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of `{x : x * self = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<u64>> {
        self.transpose().right_kernel()
    }

    /// Nonzero rows of the RREF: a canonical basis of the row space.
    pub fn row_space(&self) -> Matrix {
        let (r, pivots) = self.rref();
        r.submatrix(&(0..pivots.len()).collect::<Vec<_>>(), &(0..self.cols).collect::<Vec<_>>())
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::dim("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.get(i, j);
            }
            aug.data[i * 2 * n + n + i] = 1;
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(aug.submatrix(&(0..n).collect::<Vec<_>>(), &(n..2 * n).collect::<Vec<_>>()))
    }

    pub fn commutator(&self, o: &Matrix) -> Matrix {
        self.mul(o).sub(&o.mul(self))
    }
}

/// Dot product of two vectors over GF(p).
pub fn dot(f: Fp, u: &[u64], v: &[u64]) -> u64 {
    u.iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
}

/// `u + c v` componentwise.
pub fn axpy(f: Fp, u: &mut [u64], c: u64, v: &[u64]) {
    if c == 0 {
        return;
    }
    for (a, &b) in u.iter_mut().zip(v) {
        *a = f.add(*a, f.mul(c, b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Fp {
        Fp::new(5).unwrap()
    }

    #[test]
    fn inverse_and_rank() {
        let f = f5();
        let a = Matrix::from_rows(f, &[vec![1, 2], vec![3, 4]]).unwrap();
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        let s = Matrix::from_rows(f, &[vec![1, 1], vec![2, 2]]).unwrap();
        assert_eq!(s.rank(), 1);
        assert!(matches!(s.inverse(), Err(Error::Singular)));
    }

    #[test]
    fn kernel_is_annihilated() {
        let f = Fp::new(7).unwrap();
        let a = Matrix::from_rows(f, &[vec![1, 2, 3, 4], vec![2, 4, 6, 1], vec![0, 0, 0, 3]]).unwrap();
        let k = a.right_kernel();
        assert_eq!(k.len(), 4 - a.rank());
        for v in k {
            assert!(a.vec_mul_right(&v).iter().all(|&x| x == 0));
        }
    }

    impl Matrix {
        fn vec_mul_right(&self, v: &[u64]) -> Vec<u64> {
            self.transpose().vec_mul(v)
        }
    }
}
