//! Finite-dimensional unital *-algebras given by structure constants. Used
//! for semisimple quotients, where no matrix model is at hand.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{axpy, min_poly_by_powers, EchelonBasis, Fp, Matrix, Poly};

#[derive(Clone, Debug)]
pub struct StarAlgebra {
    f: Fp,
    dim: usize,
    /// `table[i * dim + j]` holds the coordinates of `b_i b_j`.
    table: Vec<Vec<u64>>,
    unit: Vec<u64>,
    star: Matrix,
}

impl StarAlgebra {
    pub fn new(f: Fp, dim: usize, table: Vec<Vec<u64>>, unit: Vec<u64>, star: Matrix) -> Result<Self> {
        if table.len() != dim * dim || table.iter().any(|v| v.len() != dim) || unit.len() != dim {
            return Err(Error::dim("structure constant table"));
        }
        if star.rows() != dim || star.cols() != dim {
            return Err(Error::dim("involution matrix"));
        }
        Ok(StarAlgebra { f, dim, table, unit, star })
    }

    /// Structure constants of the span of `basis`, a multiplicatively closed
    /// family of matrices with the given coordinate map.
    pub fn from_matrices<C>(f: Fp, basis: &[Matrix], unit: Vec<u64>, star: Matrix, coords: C) -> Result<Self>
    where
        C: Fn(&Matrix) -> Option<Vec<u64>>,
    {
        let d = basis.len();
        let mut table = Vec::with_capacity(d * d);
        for x in basis {
            for y in basis {
                table.push(coords(&x.mul(y)).ok_or(Error::NotInAlgebra)?);
            }
        }
        StarAlgebra::new(f, d, table, unit, star)
    }

    pub fn field(&self) -> Fp {
        self.f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[u64] {
        &self.unit
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.dim]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u64> {
        let mut v = self.zero();
        v[i] = 1;
        v
    }

    pub fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let f = self.f;
        let mut out = self.zero();
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                axpy(f, &mut out, f.mul(a, b), &self.table[i * self.dim + j]);
            }
        }
        out
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).map(|(&a, &b)| self.f.add(a, b)).collect()
    }

    pub fn sub(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).map(|(&a, &b)| self.f.sub(a, b)).collect()
    }

    pub fn scale(&self, x: &[u64], c: u64) -> Vec<u64> {
        x.iter().map(|&a| self.f.mul(a, c)).collect()
    }

    pub fn star(&self, x: &[u64]) -> Vec<u64> {
        self.star.vec_mul(x)
    }

    pub fn is_zero(x: &[u64]) -> bool {
        x.iter().all(|&a| a == 0)
    }

    pub fn eval_poly(&self, g: &Poly, x: &[u64], unit: &[u64]) -> Vec<u64> {
        let mut acc = self.zero();
        for &c in g.coeffs().iter().rev() {
            acc = self.mul(&acc, x);
            axpy(self.f, &mut acc, c, unit);
        }
        acc
    }

    /// Minimal polynomial of `x` inside the algebra with identity `unit`
    /// (a corner `eAe` when `unit = e`).
    pub fn min_poly_with_unit(&self, x: &[u64], unit: &[u64]) -> Poly {
        min_poly_by_powers(self.f, unit.to_vec(), x.to_vec(), |a, b| self.mul(a, b))
    }

    pub fn min_poly(&self, x: &[u64]) -> Poly {
        self.min_poly_with_unit(x, &self.unit)
    }

    /// Basis of the span of `vectors`.
    pub fn span(&self, vectors: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let mut e = EchelonBasis::new(self.f);
        for v in vectors {
            e.insert(v);
        }
        e.basis()
    }

    /// Basis of `x A` for a subspace spanned by `x`.
    pub fn left_ideal_times(&self, gens: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let prods: Vec<Vec<u64>> =
            gens.iter().flat_map(|g| (0..self.dim).map(move |j| (g, j))).map(|(g, j)| self.mul(g, &self.basis_vector(j))).collect();
        self.span(&prods)
    }

    /// Basis of the centre.
    pub fn center(&self) -> Vec<Vec<u64>> {
        // x b_i - b_i x = 0, linear in x
        let d = self.dim;
        let mut sys = Matrix::zeros(self.f, d, d * d);
        for k in 0..d {
            let bk = self.basis_vector(k);
            for i in 0..d {
                let bi = self.basis_vector(i);
                let c = self.sub(&self.mul(&bk, &bi), &self.mul(&bi, &bk));
                for (j, &v) in c.iter().enumerate() {
                    sys.set(k, i * d + j, v);
                }
            }
        }
        let kernel = sys.left_kernel();
        self.span(&kernel)
    }

    pub fn random_in(&self, basis: &[Vec<u64>], rng: &mut impl Rng) -> Vec<u64> {
        let mut out = self.zero();
        for b in basis {
            axpy(self.f, &mut out, self.f.random(rng), b);
        }
        out
    }

    /// Whether the star is an anti-automorphism of order at most two.
    pub fn check_involution(&self) -> bool {
        let d = self.dim;
        for i in 0..d {
            let bi = self.basis_vector(i);
            if self.star(&self.star(&bi)) != bi {
                return false;
            }
            for j in 0..d {
                let bj = self.basis_vector(j);
                let lhs = self.star(&self.mul(&bi, &bj));
                let rhs = self.mul(&self.star(&bj), &self.star(&bi));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}
