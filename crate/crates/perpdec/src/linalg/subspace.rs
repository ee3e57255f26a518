use super::field::Fp;
use super::matrix::Matrix;
use super::solve::{EchelonBasis, SpanSolver};

/// Subspace of GF(p)^n stored by its RREF basis, so equal subspaces compare
/// equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    /// Span of the rows of `m`.
    pub fn row_space(m: &Matrix) -> Self {
        Subspace { basis: m.row_space() }
    }

    pub fn span(f: Fp, ambient: usize, vectors: &[Vec<u64>]) -> Self {
        Self::row_space(&Matrix::from_vecs(f, ambient, vectors))
    }

    pub fn zero(f: Fp, ambient: usize) -> Self {
        Subspace { basis: Matrix::zeros(f, 0, ambient) }
    }

    pub fn full(f: Fp, ambient: usize) -> Self {
        Subspace { basis: Matrix::identity(f, ambient) }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn field(&self) -> Fp {
        self.basis.field()
    }

    /// RREF basis as the rows of a matrix.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<Vec<u64>> {
        self.basis.to_rows()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut e = EchelonBasis::new(self.field());
        for r in self.vectors() {
            e.insert(&r);
        }
        e.contains(v)
    }

    /// Coordinates of `v` in the RREF basis.
    pub fn coords(&self, v: &[u64]) -> Option<Vec<u64>> {
        SpanSolver::new(self.field(), self.ambient(), &self.vectors()).ok()?.coords(v)
    }

    pub fn sum(&self, o: &Subspace) -> Subspace {
        Subspace::row_space(&self.basis.vstack(&o.basis))
    }

    pub fn intersection(&self, o: &Subspace) -> Subspace {
        // x = a A = b B  <=>  (a, b) in the left kernel of [A; -B]
        let f = self.field();
        let stacked = self.basis.vstack(&o.basis.neg());
        let vecs: Vec<Vec<u64>> = stacked.left_kernel().into_iter().map(|c| self.basis.vec_mul(&c[..self.dim()])).collect();
        Subspace::span(f, self.ambient(), &vecs)
    }

    /// Image under right multiplication `v -> v m`.
    pub fn image(&self, m: &Matrix) -> Subspace {
        Subspace::row_space(&self.basis.mul(m))
    }

    /// Complement spanned by the standard basis vectors at non-pivot columns.
    pub fn standard_complement(&self) -> Subspace {
        let f = self.field();
        let n = self.ambient();
        let pivots = self.basis.rref().1;
        let vecs: Vec<Vec<u64>> = (0..n)
            .filter(|c| !pivots.contains(c))
            .map(|c| {
                let mut v = vec![0; n];
                v[c] = 1;
                v
            })
            .collect();
        Subspace::span(f, n, &vecs)
    }
}
