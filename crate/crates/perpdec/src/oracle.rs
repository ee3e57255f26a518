//! Exhaustive oracles for small instances. Each check either enumerates the
//! whole space or refuses with a budget error; sampled verdicts are flagged
//! and never count as certificates.

use serde::{Deserialize, Serialize};

use crate::adjoint::SymBasis;
use crate::algebra::StarAlgebra;
use crate::bilinear::BilinearMap;
use crate::error::{Error, Result};
use crate::frames::primary_idempotents;
use crate::linalg::{Fp, Matrix, SquareClass};
use crate::rng;

/// Largest number of points an enumeration may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleBudget {
    pub max_points: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_points: 3u64.pow(9) }
    }
}

impl OracleBudget {
    /// `p^dim`, or a budget error.
    pub fn points(&self, p: u64, dim: usize) -> Result<u64> {
        let mut n: u64 = 1;
        for _ in 0..dim {
            n = n.saturating_mul(p);
            if n > self.max_points {
                return Err(Error::Budget(format!("{p}^{dim} points exceeds the enumeration budget of {}", self.max_points)));
            }
        }
        Ok(n)
    }
}

/// Base-`p` digits of `k`, least significant first.
fn digits(mut k: u64, p: u64, len: usize) -> Vec<u64> {
    (0..len)
        .map(|_| {
            let d = k % p;
            k /= p;
            d
        })
        .collect()
}

fn sort_matrices(mut v: Vec<Matrix>) -> Vec<Matrix> {
    v.sort_by(|a, b| a.as_flat().cmp(b.as_flat()));
    v.dedup();
    v
}

/// Every `e` in `Sym` with `e^2 = e`.
pub fn enumerate_idempotents(sym: &SymBasis, p: u64, budget: OracleBudget) -> Result<Vec<Matrix>> {
    let total = budget.points(p, sym.dim())?;
    let mut out = Vec::new();
    for k in 0..total {
        let e = sym.element(&digits(k, p, sym.dim()));
        if e.mul(&e) == e {
            out.push(e);
        }
    }
    Ok(sort_matrices(out))
}

/// Idempotents reachable from the minimal-polynomial route: sums of subsets
/// of the primary idempotents of every element of `Sym`.
pub fn reachable_idempotents(sym: &SymBasis, p: u64, budget: OracleBudget) -> Result<Vec<Matrix>> {
    let total = budget.points(p, sym.dim())?;
    let mut out = Vec::new();
    for k in 0..total {
        let x = sym.element(&digits(k, p, sym.dim()));
        let parts = primary_idempotents(&x, rng::child(0, k))?;
        let zero = Matrix::zeros(x.field(), x.rows(), x.cols());
        for mask in 0u64..1 << parts.len() {
            let e = parts.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(zero.clone(), |acc, (_, e)| acc.add(e));
            out.push(e);
        }
    }
    Ok(sort_matrices(out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemisimplicityVerdict {
    pub semisimple: bool,
    /// False when the space was too large and only random elements were
    /// tried.
    pub exhaustive: bool,
}

/// Semisimple iff no nonzero `x` has `x A x = 0`.
pub fn semisimplicity_oracle(a: &StarAlgebra, budget: OracleBudget, samples: usize) -> SemisimplicityVerdict {
    let p = a.field().p();
    let d = a.dim();
    let basis: Vec<Vec<u64>> = (0..d).map(|i| a.basis_vector(i)).collect();
    let kills = |x: &[u64]| basis.iter().all(|y| StarAlgebra::is_zero(&a.mul(&a.mul(x, y), x)));
    match budget.points(p, d) {
        Ok(total) => {
            let found = (1..total).any(|k| kills(&digits(k, p, d)));
            SemisimplicityVerdict { semisimple: !found, exhaustive: true }
        }
        Err(_) => {
            let mut r = rng::stream(0, 0x5e);
            let found = (0..samples).any(|_| {
                let x = a.random_in(&basis, &mut r);
                !StarAlgebra::is_zero(&x) && kills(&x)
            });
            SemisimplicityVerdict { semisimple: !found, exhaustive: false }
        }
    }
}

/// Exhaustive counts `(|Isom(d)|, |Isom*(d)|)` for a form `d`; pseudo-isometries
/// are the `g` with `g D g^T = s D` for some nonzero `s`.
pub fn brute_isometry_group_order(d: &BilinearMap, budget: OracleBudget) -> Result<(u64, u64)> {
    if d.dim_w() != 1 {
        return Err(Error::invalid("isometry counts need a form"));
    }
    let f = d.field();
    let n = d.dim_v();
    let total = budget.points(f.p(), n * n)?;
    let g0 = &d.grams()[0];
    let (mut isom, mut pseudo) = (0, 0);
    for k in 0..total {
        let g = Matrix::from_flat(f, n, n, digits(k, f.p(), n * n));
        if g.rank() < n {
            continue;
        }
        let h = g.mul(g0).mul(&g.transpose());
        if h == *g0 {
            isom += 1;
        }
        if (1..f.p()).any(|s| h == g0.scale(s)) {
            pseudo += 1;
        }
    }
    Ok((isom, pseudo))
}

/// `|GO(d)|` for the non-degenerate symmetric form `d` of dimension `n` and
/// discriminant `disc` over `GF(q)`, `q` odd.
pub fn orthogonal_group_order(n: usize, q: u64, disc: SquareClass) -> u64 {
    let m = (n / 2) as u32;
    let prod = |upto: u32| (1..=upto).map(|i| q.pow(2 * i) - 1).product::<u64>();
    if n % 2 == 1 {
        2 * q.pow(m * m) * prod(m)
    } else {
        // plus type iff (-1)^m disc is a square
        let f = Fp::new(q).expect("prime field");
        let minus_one = if m % 2 == 1 && !f.is_square(f.neg(1)) { SquareClass::Nonsquare } else { SquareClass::Square };
        let plus = disc.times(minus_one) == SquareClass::Square;
        let qm = q.pow(m);
        let middle = if plus { qm - 1 } else { qm + 1 };
        2 * q.pow(m * (m - 1)) * middle * prod(m - 1)
    }
}

/// `eps (q - 1) |GO(d)|` with `eps = 1/2` for odd `n`, else 1.
pub fn pseudo_isometry_order_formula(n: usize, q: u64, disc: SquareClass) -> u64 {
    let base = (q - 1) * orthogonal_group_order(n, q, disc);
    if n % 2 == 1 {
        base / 2
    } else {
        base
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjoint::adjoint_algebra;
    use crate::bilinear::{dot_form, exterior_square};

    #[test]
    fn dot_form_counts() {
        let b = OracleBudget::default();
        let d = dot_form(1, 5, SquareClass::Square).unwrap();
        assert_eq!(brute_isometry_group_order(&d, b).unwrap(), (2, 4));
        let d = dot_form(1, 3, SquareClass::Square).unwrap();
        assert_eq!(brute_isometry_group_order(&d, b).unwrap().0, 2);
        let d = dot_form(2, 3, SquareClass::Square).unwrap();
        let (i, s) = brute_isometry_group_order(&d, b).unwrap();
        assert_eq!(i, orthogonal_group_order(2, 3, SquareClass::Square));
        assert_eq!(s, pseudo_isometry_order_formula(2, 3, SquareClass::Square));
    }

    #[test]
    fn scalars_have_trivial_idempotents() {
        let a = adjoint_algebra(&exterior_square(3, 3).unwrap()).unwrap();
        let e = enumerate_idempotents(&a.sym_basis(), 3, OracleBudget::default()).unwrap();
        assert_eq!(e.len(), 2);
    }

    #[test]
    fn triangular_is_not_semisimple() {
        let f = Fp::new(3).unwrap();
        // basis E11, E12, E22
        let mut table = vec![vec![0; 3]; 9];
        table[0] = vec![1, 0, 0];
        table[1] = vec![0, 1, 0];
        table[5] = vec![0, 1, 0];
        table[8] = vec![0, 0, 1];
        let a = StarAlgebra::new(f, 3, table, vec![1, 0, 1], Matrix::identity(f, 3)).unwrap();
        let v = semisimplicity_oracle(&a, OracleBudget::default(), 0);
        assert!(v.exhaustive && !v.semisimple);
    }

    #[test]
    fn budget_refuses() {
        assert!(OracleBudget::default().points(3, 10).is_err());
        assert_eq!(OracleBudget::default().points(3, 9).unwrap(), 19683);
    }
}
