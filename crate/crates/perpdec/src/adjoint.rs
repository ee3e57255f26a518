//! The adjoint *-algebra of a bilinear map and its self-adjoint part.
//!
//! Operators act on row vectors from the right. `Adj(b)` consists of the
//! `F` for which some `G` satisfies `b(uF, v) = b(u, vG)` for all `u, v`,
//! that is `F B_k = B_k G^T` for every gram. For a nondegenerate map `G` is
//! unique and `F* = G` is an anti-automorphism of order two.

use rand::Rng;

use crate::bilinear::BilinearMap;
use crate::error::{Error, Result};
use crate::linalg::{Fp, Matrix, SpanSolver};

/// `Adj(b)` with a basis, the involution, and coordinate lookup.
#[derive(Clone, Debug)]
pub struct AdjointAlgebra {
    f: Fp,
    m: usize,
    basis: Vec<Matrix>,
    adjoints: Vec<Matrix>,
    solver: SpanSolver,
    star: Matrix,
    unit: Vec<u64>,
}

/// Solves for `Adj(b)`. Fails on degenerate maps, where `F -> G` is not a
/// function.
pub fn adjoint_algebra(b: &BilinearMap) -> Result<AdjointAlgebra> {
    let f = b.field();
    let m = b.dim_v();
    let mm = m * m;
    let rad = b.radical().dim();
    if rad > 0 {
        return Err(Error::Degenerate(rad));
    }
    // unknowns: F_{ia} at i*m + a, G_{ja} at mm + j*m + a
    let mut sys = Matrix::zeros(f, b.dim_w() * mm, 2 * mm);
    for (k, g) in b.grams().iter().enumerate() {
        for i in 0..m {
            for j in 0..m {
                let row = k * mm + i * m + j;
                for a in 0..m {
                    // (F B)_{ij} = sum_a F_{ia} B_{aj}
                    let v = g.get(a, j);
                    if v != 0 {
                        sys.set(row, i * m + a, v);
                    }
                    // (B G^T)_{ij} = sum_a B_{ia} G_{ja}
                    let w = g.get(i, a);
                    if w != 0 {
                        sys.set(row, mm + j * m + a, f.neg(w));
                    }
                }
            }
        }
    }
    let kernel = sys.right_kernel();
    let fparts: Vec<Vec<u64>> = kernel.iter().map(|v| v[..mm].to_vec()).collect();
    let solver = SpanSolver::new(f, mm, &fparts).map_err(|_| Error::internal("adjoint is not a function of F"))?;
    let basis: Vec<Matrix> = fparts.iter().map(|v| Matrix::from_flat(f, m, m, v.clone())).collect();
    let adjoints: Vec<Matrix> = kernel.iter().map(|v| Matrix::from_flat(f, m, m, v[mm..].to_vec())).collect();
    let d = basis.len();
    let mut star = Matrix::zeros(f, d, d);
    for (i, g) in adjoints.iter().enumerate() {
        let c = solver.coords(g.as_flat()).ok_or_else(|| Error::internal("adjoint algebra not closed under *"))?;
        for (j, v) in c.into_iter().enumerate() {
            star.set(i, j, v);
        }
    }
    let unit = solver.coords(Matrix::identity(f, m).as_flat()).ok_or_else(|| Error::internal("identity missing from Adj(b)"))?;
    Ok(AdjointAlgebra { f, m, basis, adjoints, solver, star, unit })
}

impl AdjointAlgebra {
    pub fn field(&self) -> Fp {
        self.f
    }

    /// Dimension of the underlying space `V`.
    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    /// Matrix of `*` on coordinate row vectors.
    pub fn star_matrix(&self) -> &Matrix {
        &self.star
    }

    pub fn unit_coords(&self) -> &[u64] {
        &self.unit
    }

    pub fn identity(&self) -> Matrix {
        Matrix::identity(self.f, self.m)
    }

    pub fn coords(&self, x: &Matrix) -> Option<Vec<u64>> {
        if x.rows() != self.m || x.cols() != self.m {
            return None;
        }
        self.solver.coords(x.as_flat())
    }

    pub fn contains(&self, x: &Matrix) -> bool {
        self.coords(x).is_some()
    }

    pub fn element(&self, coords: &[u64]) -> Matrix {
        coords.iter().zip(&self.basis).fold(Matrix::zeros(self.f, self.m, self.m), |acc, (&c, b)| acc.add_scaled(b, c))
    }

    pub fn star(&self, x: &Matrix) -> Result<Matrix> {
        let c = self.coords(x).ok_or(Error::NotInAlgebra)?;
        Ok(c.iter().zip(&self.adjoints).fold(Matrix::zeros(self.f, self.m, self.m), |acc, (&c, g)| acc.add_scaled(g, c)))
    }

    pub fn star_coords(&self, c: &[u64]) -> Vec<u64> {
        self.star.vec_mul(c)
    }

    pub fn random_coords(&self, rng: &mut impl Rng) -> Vec<u64> {
        (0..self.dim()).map(|_| self.f.random(rng)).collect()
    }

    pub fn random_element(&self, rng: &mut impl Rng) -> Matrix {
        self.element(&self.random_coords(rng))
    }

    /// The self-adjoint part `Sym(b)`.
    pub fn sym_basis(&self) -> SymBasis {
        let d = self.dim();
        let shifted = self.star.sub(&Matrix::identity(self.f, d));
        let coords = shifted.left_kernel();
        let elements = coords.iter().map(|c| self.element(c)).collect();
        SymBasis { f: self.f, m: self.m, coords, elements }
    }
}

/// Basis of the Jordan algebra `Sym(b) = {x in Adj(b) : x* = x}`.
#[derive(Clone, Debug)]
pub struct SymBasis {
    f: Fp,
    m: usize,
    coords: Vec<Vec<u64>>,
    elements: Vec<Matrix>,
}

impl SymBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    /// Coordinates of the basis elements in `Adj(b)`.
    pub fn adj_coords(&self) -> &[Vec<u64>] {
        &self.coords
    }

    pub fn element(&self, c: &[u64]) -> Matrix {
        c.iter().zip(&self.elements).fold(Matrix::zeros(self.f, self.m, self.m), |acc, (&c, b)| acc.add_scaled(b, c))
    }

    pub fn random_element(&self, rng: &mut impl Rng) -> Matrix {
        let c: Vec<u64> = (0..self.dim()).map(|_| self.f.random(rng)).collect();
        self.element(&c)
    }
}

/// Jordan product `(xy + yx) / 2`.
pub fn jordan_product(x: &Matrix, y: &Matrix) -> Matrix {
    let f = x.field();
    x.mul(y).add(&y.mul(x)).scale(f.half())
}

/// `y U_x = x y x`.
pub fn u_operator(x: &Matrix, y: &Matrix) -> Matrix {
    x.mul(y).mul(x)
}

/// `(x + x*, x x*)`.
pub fn trace_norm(a: &AdjointAlgebra, x: &Matrix) -> Result<(Matrix, Matrix)> {
    let s = a.star(x)?;
    Ok((x.add(&s), x.mul(&s)))
}

/// Whether `phi` lies in `Adj(b)` and satisfies `phi phi* = 1`.
pub fn is_isometry(a: &AdjointAlgebra, phi: &Matrix) -> Result<bool> {
    if phi.rows() != a.degree() || phi.cols() != a.degree() {
        return Err(Error::dim("isometry has the wrong size"));
    }
    phi.inverse()?;
    match a.star(phi) {
        Ok(s) => Ok(phi.mul(&s).is_identity()),
        Err(Error::NotInAlgebra) => Ok(false),
        Err(e) => Err(e),
    }
}
