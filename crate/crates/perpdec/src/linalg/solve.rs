use super::field::{Fp, SquareClass};
use super::matrix::{axpy, Matrix};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Particular solution (if any) and kernel basis of `A x = rhs`.
#[derive(Clone, Debug)]
pub struct LinearSolution {
    pub solution: Option<Vec<u64>>,
    pub kernel: Vec<Vec<u64>>,
}

/// Solves `A x = rhs` for a column vector `x`.
pub fn solve_linear(a: &Matrix, rhs: &[u64]) -> Result<LinearSolution> {
    if rhs.len() != a.rows() {
        return Err(Error::dim(format!("rhs has length {} but matrix has {} rows", rhs.len(), a.rows())));
    }
    let f = a.field();
    let n = a.cols();
    let mut aug = Matrix::zeros(f, a.rows(), n + 1);
    for (i, &r) in rhs.iter().enumerate() {
        for j in 0..n {
            aug.set(i, j, a.get(i, j));
        }
        aug.set(i, n, r);
    }
    let pivots = aug.rref_in_place();
    let solution = if pivots.last() == Some(&n) {
        None
    } else {
        let mut x = vec![0u64; n];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(i, n);
        }
        Some(x)
    };
    Ok(LinearSolution { solution, kernel: a.right_kernel() })
}

/// Coordinates with respect to a fixed family of linearly independent vectors.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    f: Fp,
    len: usize,
    reduced: Vec<Vec<u64>>,
    transform: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl SpanSolver {
    /// Fails if the vectors are dependent.
    pub fn new(f: Fp, len: usize, basis: &[Vec<u64>]) -> Result<Self> {
        let d = basis.len();
        let mut aug = Matrix::zeros(f, d, len + d);
        for (i, v) in basis.iter().enumerate() {
            if v.len() != len {
                return Err(Error::dim("basis vector length"));
            }
            for (j, &x) in v.iter().enumerate() {
                aug.set(i, j, x);
            }
            aug.set(i, len + i, 1);
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < d || (d > 0 && pivots[d - 1] >= len) {
            return Err(Error::invalid("spanning family is linearly dependent"));
        }
        let reduced = (0..d).map(|i| aug.row(i)[..len].to_vec()).collect();
        let transform = (0..d).map(|i| aug.row(i)[len..].to_vec()).collect();
        Ok(SpanSolver { f, len, reduced, transform, pivots })
    }

    pub fn dim(&self) -> usize {
        self.reduced.len()
    }

    /// Coordinates of `x`, or `None` if it is outside the span.
    pub fn coords(&self, x: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(x.len(), self.len, "vector length");
        let f = self.f;
        let mut residual = x.to_vec();
        let mut coords = vec![0u64; self.dim()];
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = residual[pc];
            if c == 0 {
                continue;
            }
            axpy(f, &mut residual, f.neg(c), &self.reduced[i]);
            axpy(f, &mut coords, c, &self.transform[i]);
        }
        residual.iter().all(|&r| r == 0).then_some(coords)
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        self.coords(x).is_some()
    }
}

/// Incremental echelon basis used for span membership and rank growth.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    f: Fp,
    rows: Vec<(usize, Vec<u64>)>,
}

impl EchelonBasis {
    pub fn new(f: Fp) -> Self {
        EchelonBasis { f, rows: Vec::new() }
    }

    fn reduce(&self, v: &mut [u64]) {
        let f = self.f;
        for (pc, row) in &self.rows {
            let c = v[*pc];
            if c != 0 {
                axpy(f, v, f.neg(c), row);
            }
        }
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let f = self.f;
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv_nz(w[pc]);
        w.iter_mut().for_each(|x| *x = f.mul(*x, inv));
        for (_, row) in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                axpy(f, row, f.neg(c), &w);
            }
        }
        self.rows.push((pc, w));
        true
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Basis vectors sorted by pivot, i.e. the RREF rows.
    pub fn basis(&self) -> Vec<Vec<u64>> {
        let mut rows = self.rows.clone();
        rows.sort_by_key(|(pc, _)| *pc);
        rows.into_iter().map(|(_, r)| r).collect()
    }
}

/// Minimal polynomial of `x` given the powers map and the unit, found as the
/// first linear dependency among `1, x, x^2, ...`.
pub fn min_poly_by_powers<F>(f: Fp, unit: Vec<u64>, x: Vec<u64>, mut mul: F) -> Poly
where
    F: FnMut(&[u64], &[u64]) -> Vec<u64>,
{
    let mut powers: Vec<Vec<u64>> = vec![unit];
    let mut current = x.clone();
    loop {
        let k = powers.len();
        let len = current.len();
        let mut a = Matrix::zeros(f, len, k);
        for (j, v) in powers.iter().enumerate() {
            for (i, &x) in v.iter().enumerate() {
                a.set(i, j, x);
            }
        }
        let sol = solve_linear(&a, &current).expect("consistent shapes");
        if let Some(c) = sol.solution {
            // x^k = sum c_j x^j
            let mut coeffs: Vec<u64> = c.iter().map(|&v| f.neg(v)).collect();
            coeffs.push(1);
            return Poly::new(f, coeffs);
        }
        powers.push(current.clone());
        current = mul(&current, &x);
    }
}

/// Minimal polynomial of a square matrix.
pub fn min_poly(m: &Matrix) -> Result<Poly> {
    if !m.is_square() {
        return Err(Error::dim("minimal polynomial of a non-square matrix"));
    }
    let f = m.field();
    let n = m.rows();
    let unit = Matrix::identity(f, n).into_flat();
    Ok(min_poly_by_powers(f, unit, m.as_flat().to_vec(), |a, b| {
        let a = Matrix::from_flat(f, n, n, a.to_vec());
        let b = Matrix::from_flat(f, n, n, b.to_vec());
        a.mul(&b).into_flat()
    }))
}

/// Square class of an invertible element `x` of a local commutative matrix
/// algebra with identity `unit` and residue field of size `q`: `x` is a square
/// modulo the radical iff `x^((q-1)/2) - unit` is nilpotent.
pub fn square_class_in(x: &Matrix, unit: &Matrix, q: u64) -> Result<SquareClass> {
    if x.is_nilpotent() {
        return Err(Error::invalid("square class of a non-invertible element"));
    }
    let d = x.pow((q - 1) / 2).sub(unit);
    Ok(if d.is_nilpotent() { SquareClass::Square } else { SquareClass::Nonsquare })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inconsistent_system() {
        let f = Fp::new(5).unwrap();
        let a = Matrix::from_rows(f, &[vec![1, 1], vec![2, 2]]).unwrap();
        let s = solve_linear(&a, &[1, 3]).unwrap();
        assert!(s.solution.is_none());
        assert_eq!(s.kernel.len(), 1);
        let s = solve_linear(&a, &[1, 2]).unwrap();
        let x = s.solution.unwrap();
        assert_eq!(f.add(x[0], x[1]), 1);
    }

    #[test]
    fn companion_min_poly() {
        let f = Fp::new(3).unwrap();
        let c = Matrix::from_rows(f, &[vec![0, 1], vec![-1, 0]]).unwrap();
        assert_eq!(min_poly(&c).unwrap().coeffs(), &[1, 0, 1]);
        let i = Matrix::identity(f, 3);
        assert_eq!(min_poly(&i).unwrap().coeffs(), &[2, 1]);
    }

    #[test]
    fn span_solver_coords() {
        let f = Fp::new(7).unwrap();
        let basis = vec![vec![1, 2, 0], vec![0, 1, 1]];
        let s = SpanSolver::new(f, 3, &basis).unwrap();
        assert_eq!(s.coords(&[3, 1, 2]).unwrap(), vec![3, 2]);
        assert!(s.coords(&[0, 0, 1]).is_none());
    }
}
