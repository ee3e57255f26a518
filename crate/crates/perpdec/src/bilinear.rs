//! Hermitian bilinear maps `b: V x V -> W` over GF(p), stored by their Gram
//! matrices: `b(u, v)_k = u B_k v^T`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{EchelonBasis, Fp, Matrix, SpanSolver, Subspace};

/// Symmetry type: `b(u, v) = sign * b(v, u)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Symmetric,
    Alternating,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Symmetric => 1,
            Sign::Alternating => -1,
        }
    }

    pub fn from_value(s: i64) -> Result<Self> {
        match s {
            1 => Ok(Sign::Symmetric),
            -1 => Ok(Sign::Alternating),
            _ => Err(Error::invalid(format!("sign must be 1 or -1, got {s}"))),
        }
    }

    pub fn times(self, o: Sign) -> Sign {
        if self == o {
            Sign::Symmetric
        } else {
            Sign::Alternating
        }
    }
}

/// A full Hermitian bilinear map.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BilinearMap {
    f: Fp,
    sign: Sign,
    dim_v: usize,
    grams: Vec<Matrix>,
}

/// Wire format of a map.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapFile {
    pub p: u64,
    pub sign: i64,
    #[serde(rename = "dimV")]
    pub dim_v: usize,
    #[serde(rename = "dimW")]
    pub dim_w: usize,
    pub grams: Vec<Vec<Vec<i64>>>,
}

/// Restriction of a map to a subspace, with `restricted gram_k = sum_l
/// w_change[k][l] * map.grams[l]`.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub map: BilinearMap,
    pub w_change: Matrix,
    pub degenerate: bool,
}

impl BilinearMap {
    /// Validates shapes, the Hermitian condition and fullness.
    pub fn new(f: Fp, sign: Sign, dim_v: usize, grams: Vec<Matrix>) -> Result<Self> {
        for (k, g) in grams.iter().enumerate() {
            if g.rows() != dim_v || g.cols() != dim_v || g.field() != f {
                return Err(Error::dim(format!("gram {k} is not {dim_v}x{dim_v} over GF({})", f.p())));
            }
            let t = g.transpose();
            let ok = match sign {
                Sign::Symmetric => t == *g,
                Sign::Alternating => t == g.neg(),
            };
            if !ok {
                return Err(Error::invalid(format!("gram {k} is not Hermitian for sign {}", sign.value())));
            }
        }
        let mut span = EchelonBasis::new(f);
        for g in &grams {
            if !span.insert(g.as_flat()) {
                return Err(Error::NotFull);
            }
        }
        Ok(BilinearMap { f, sign, dim_v, grams })
    }

    pub fn field(&self) -> Fp {
        self.f
    }

    pub fn p(&self) -> u64 {
        self.f.p()
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_w(&self) -> usize {
        self.grams.len()
    }

    pub fn grams(&self) -> &[Matrix] {
        &self.grams
    }

    pub fn eval(&self, u: &[u64], v: &[u64]) -> Vec<u64> {
        self.grams.iter().map(|g| g.bilinear(u, v)).collect()
    }

    /// `rad b = {u : b(u, V) = 0}`.
    pub fn radical(&self) -> Subspace {
        let m = self.dim_v;
        if self.grams.is_empty() {
            return Subspace::full(self.f, m);
        }
        let mut wide = Matrix::zeros(self.f, m, m * self.grams.len());
        for (k, g) in self.grams.iter().enumerate() {
            for i in 0..m {
                for j in 0..m {
                    wide.set(i, k * m + j, g.get(i, j));
                }
            }
        }
        Subspace::span(self.f, m, &wide.transpose().right_kernel())
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.radical().dim() == 0
    }

    /// Restriction to `x`, re-expressed in a basis of `b(X, X)` chosen among
    /// the restricted grams.
    pub fn restrict(&self, x: &Subspace) -> Result<Restriction> {
        if x.ambient() != self.dim_v {
            return Err(Error::dim("subspace lives in a different space"));
        }
        let r = x.basis();
        let rt = r.transpose();
        let restricted: Vec<Matrix> = self.grams.iter().map(|g| r.mul(g).mul(&rt)).collect();
        let mut span = EchelonBasis::new(self.f);
        let chosen: Vec<usize> = (0..restricted.len()).filter(|&k| span.insert(restricted[k].as_flat())).collect();
        let grams: Vec<Matrix> = chosen.iter().map(|&k| restricted[k].clone()).collect();
        let d = x.dim();
        let solver = SpanSolver::new(self.f, d * d, &grams.iter().map(|g| g.as_flat().to_vec()).collect::<Vec<_>>())?;
        let mut w_change = Matrix::zeros(self.f, self.grams.len(), grams.len());
        for (k, g) in restricted.iter().enumerate() {
            let c = solver.coords(g.as_flat()).ok_or_else(|| Error::internal("restricted gram outside span"))?;
            for (l, v) in c.into_iter().enumerate() {
                w_change.set(k, l, v);
            }
        }
        let map = BilinearMap { f: self.f, sign: self.sign, dim_v: d, grams };
        let degenerate = !map.is_nondegenerate();
        Ok(Restriction { map, w_change, degenerate })
    }

    /// Orthogonal sum over a common codomain: `V + V' x V + V' -> W`.
    pub fn perp_sum(&self, o: &BilinearMap) -> Result<BilinearMap> {
        if self.f != o.f || self.sign != o.sign || self.dim_w() != o.dim_w() {
            return Err(Error::dim("perpendicular sum needs equal field, sign and codomain"));
        }
        let grams = self.grams.iter().zip(&o.grams).map(|(a, b)| a.direct_sum(b)).collect();
        BilinearMap::new(self.f, self.sign, self.dim_v + o.dim_v, grams)
    }

    /// Direct sum with separate codomains: `V + V' x V + V' -> W + W'`.
    pub fn direct_sum(&self, o: &BilinearMap) -> Result<BilinearMap> {
        if self.f != o.f || self.sign != o.sign {
            return Err(Error::dim("direct sum needs equal field and sign"));
        }
        let zero = Matrix::zeros(self.f, o.dim_v, o.dim_v);
        let zero_self = Matrix::zeros(self.f, self.dim_v, self.dim_v);
        let grams = self.grams.iter().map(|g| g.direct_sum(&zero)).chain(o.grams.iter().map(|g| zero_self.direct_sum(g))).collect();
        BilinearMap::new(self.f, self.sign, self.dim_v + o.dim_v, grams)
    }

    /// `d (x) b` for a form `d` (one gram); coordinates are ordered
    /// `(i, j) -> i * dim_v(b) + j`, so copy `i` of `b` is the i-th block.
    pub fn tensor(d: &BilinearMap, b: &BilinearMap) -> Result<BilinearMap> {
        if d.dim_w() != 1 || d.f != b.f {
            return Err(Error::dim("tensor needs a one-dimensional form over the same field"));
        }
        if d.sign != Sign::Symmetric {
            return Err(Error::invalid("tensor needs a symmetric form"));
        }
        let r = d.radical().dim();
        if r > 0 {
            return Err(Error::Degenerate(r));
        }
        let grams = b.grams.iter().map(|g| d.grams[0].kron(g)).collect();
        BilinearMap::new(b.f, d.sign.times(b.sign), d.dim_v * b.dim_v, grams)
    }

    /// Changes coordinates: the new map is `b'(u, v)_k = sum_l h[l][k] *
    /// b(u g, v g)_l`.
    pub fn transform(&self, g: &Matrix, h: &Matrix) -> Result<BilinearMap> {
        g.inverse()?;
        h.inverse()?;
        let conj: Vec<Matrix> = self.grams.iter().map(|b| g.mul(b).mul(&g.transpose())).collect();
        let w = self.dim_w();
        let grams = (0..w)
            .map(|k| (0..w).fold(Matrix::zeros(self.f, self.dim_v, self.dim_v), |acc, l| acc.add_scaled(&conj[l], h.get(l, k))))
            .collect();
        BilinearMap::new(self.f, self.sign, self.dim_v, grams)
    }

    pub fn to_file(&self) -> MapFile {
        MapFile {
            p: self.p(),
            sign: self.sign.value(),
            dim_v: self.dim_v,
            dim_w: self.dim_w(),
            grams: self.grams.iter().map(to_i64_rows).collect(),
        }
    }

    pub fn from_file(file: &MapFile) -> Result<Self> {
        let f = Fp::new(file.p)?;
        let sign = Sign::from_value(file.sign)?;
        if file.grams.len() != file.dim_w {
            return Err(Error::dim(format!("dimW is {} but {} grams given", file.dim_w, file.grams.len())));
        }
        let grams = file
            .grams
            .iter()
            .map(|g| {
                if g.len() != file.dim_v {
                    return Err(Error::dim("gram row count differs from dimV"));
                }
                Matrix::from_rows(f, g)
            })
            .collect::<Result<Vec<_>>>()?;
        BilinearMap::new(f, sign, file.dim_v, grams)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("map serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(s)?)
    }
}

pub(crate) fn to_i64_rows(m: &Matrix) -> Vec<Vec<i64>> {
    m.to_rows().into_iter().map(|r| r.into_iter().map(|x| x as i64).collect()).collect()
}

/// `V = GF(p)^n`, `W` with basis `e_i ^ e_j` (i < j, lexicographic) and
/// `b(u, v) = u ^ v`.
pub fn exterior_square(n: usize, p: u64) -> Result<BilinearMap> {
    let f = Fp::new(p)?;
    if n < 2 {
        return Err(Error::invalid("exterior square needs n >= 2"));
    }
    let mut grams = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut g = Matrix::zeros(f, n, n);
            g.set(i, j, 1);
            g.set(j, i, p - 1);
            grams.push(g);
        }
    }
    BilinearMap::new(f, Sign::Alternating, n, grams)
}

/// The form `[[0, 1], [-1, 0]]`.
pub fn standard_alternating(p: u64) -> Result<BilinearMap> {
    exterior_square(2, p)
}

/// `(a + u, b + v) -> a v - b u` on `GF(p) + GF(p)^n` with values in `GF(p)^n`.
pub fn exchange_map(n: usize, p: u64) -> Result<BilinearMap> {
    let f = Fp::new(p)?;
    if n < 2 {
        return Err(Error::invalid("exchange map needs n >= 2; for n = 1 it is just the alternating form on GF(p)^2"));
    }
    let grams = (0..n)
        .map(|k| {
            let mut g = Matrix::zeros(f, n + 1, n + 1);
            g.set(0, k + 1, 1);
            g.set(k + 1, 0, p - 1);
            g
        })
        .collect();
    BilinearMap::new(f, Sign::Alternating, n + 1, grams)
}

/// `diag(1, ..., 1, d)` with `d = 1` for a square discriminant and the least
/// nonsquare otherwise.
pub fn dot_form(n: usize, p: u64, disc: crate::linalg::SquareClass) -> Result<BilinearMap> {
    let f = Fp::new(p)?;
    if n == 0 {
        return Err(Error::invalid("dot form needs n >= 1"));
    }
    let mut diag = vec![1; n];
    if disc == crate::linalg::SquareClass::Nonsquare {
        diag[n - 1] = f.least_nonsquare();
    }
    BilinearMap::new(f, Sign::Symmetric, n, vec![Matrix::diagonal(f, &diag)])
}

/// `n` orthogonal copies of `b` over the same codomain.
pub fn central_power(b: &BilinearMap, n: usize) -> Result<BilinearMap> {
    let r = b.radical().dim();
    if r > 0 {
        return Err(Error::Degenerate(r));
    }
    BilinearMap::tensor(&dot_form(n, b.p(), crate::linalg::SquareClass::Square)?, b)
}

/// The coordinate blocks `V_1, ..., V_n` of [`central_power`]`(b, n)` for `b`
/// on `GF(p)^block`.
pub fn coordinate_blocks(f: Fp, block: usize, n: usize) -> Vec<Subspace> {
    let m = block * n;
    (0..n)
        .map(|i| {
            let rows: Vec<Vec<u64>> = (0..block)
                .map(|j| {
                    let mut v = vec![0; m];
                    v[i * block + j] = 1;
                    v
                })
                .collect();
            Subspace::span(f, m, &rows)
        })
        .collect()
}

/// Outcome of checking a map file without building the map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub sign: i64,
    pub full: bool,
    pub radical_dim: Option<usize>,
    pub violations: Vec<String>,
}

/// Checks a map file and reports every violation found.
pub fn validate(file: &MapFile) -> ValidationReport {
    let mut violations = Vec::new();
    let (full, radical_dim) = match BilinearMap::from_file(file) {
        Ok(b) => (true, Some(b.radical().dim())),
        Err(e) => {
            let full = !matches!(e, Error::NotFull);
            violations.push(e.to_string());
            // report symmetry problems in every gram, not just the first
            if let (Ok(f), Ok(sign)) = (Fp::new(file.p), Sign::from_value(file.sign)) {
                for (k, g) in file.grams.iter().enumerate() {
                    let Ok(m) = Matrix::from_rows(f, g) else { continue };
                    let t = m.transpose();
                    let ok = if sign == Sign::Symmetric { t == m } else { t == m.neg() };
                    if !ok && !violations.iter().any(|v| v.contains(&format!("gram {k} "))) {
                        violations.push(format!("gram {k} is not Hermitian for sign {}", file.sign));
                    }
                }
            }
            (full, None)
        }
    };
    ValidationReport { ok: violations.is_empty(), sign: file.sign, full, radical_dim, violations }
}

/// Whether `b'(u alpha, v alpha)_k = sum_l b(u, v)_l alpha_hat[l][k]`, with
/// both matrices invertible.
pub fn check_pseudo_isometry(b: &BilinearMap, b2: &BilinearMap, alpha: &Matrix, alpha_hat: &Matrix) -> Result<bool> {
    if alpha.rows() != b.dim_v() || alpha.cols() != b2.dim_v() || alpha_hat.rows() != b.dim_w() || alpha_hat.cols() != b2.dim_w() {
        return Err(Error::dim("pseudo-isometry shapes"));
    }
    alpha.inverse()?;
    alpha_hat.inverse()?;
    let at = alpha.transpose();
    let m = b.dim_v();
    Ok((0..b2.dim_w()).all(|k| {
        let lhs = alpha.mul(&b2.grams[k]).mul(&at);
        let rhs = (0..b.dim_w()).fold(Matrix::zeros(b.f, m, m), |acc, l| acc.add_scaled(&b.grams[l], alpha_hat.get(l, k)));
        lhs == rhs
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SquareClass;

    #[test]
    fn exterior_square_shape() {
        let b = exterior_square(3, 5).unwrap();
        assert_eq!((b.dim_v(), b.dim_w()), (3, 3));
        assert!(b.is_nondegenerate());
        assert_eq!(b.eval(&[1, 0, 0], &[0, 1, 0]), vec![1, 0, 0]);
        assert_eq!(b.eval(&[0, 1, 0], &[1, 0, 0]), vec![4, 0, 0]);
    }

    #[test]
    fn non_hermitian_rejected() {
        let f = Fp::new(5).unwrap();
        let g = Matrix::from_rows(f, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(BilinearMap::new(f, Sign::Alternating, 2, vec![g]).is_err());
    }

    #[test]
    fn dependent_grams_rejected() {
        let f = Fp::new(5).unwrap();
        let g = standard_alternating(5).unwrap().grams()[0].clone();
        assert!(matches!(BilinearMap::new(f, Sign::Alternating, 2, vec![g.clone(), g.scale(2)]), Err(Error::NotFull)));
    }

    #[test]
    fn restrict_to_plane_and_line() {
        let b = central_power(&standard_alternating(5).unwrap(), 2).unwrap();
        let f = b.field();
        let plane = Subspace::span(f, 4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        let r = b.restrict(&plane).unwrap();
        assert_eq!(r.map, standard_alternating(5).unwrap());
        assert!(!r.degenerate);
        let line = Subspace::span(f, 4, &[vec![1, 0, 0, 0]]);
        let r = b.restrict(&line).unwrap();
        assert_eq!(r.map.dim_w(), 0);
        assert!(r.degenerate);
    }

    #[test]
    fn exchange_radical_trivial() {
        let b = exchange_map(3, 7).unwrap();
        assert!(b.is_nondegenerate());
        assert_eq!(b.dim_w(), 3);
    }

    #[test]
    fn json_roundtrip() {
        let b = dot_form(3, 7, SquareClass::Nonsquare).unwrap();
        let s = b.to_json();
        let c = BilinearMap::from_json(&s).unwrap();
        assert_eq!(b, c);
        assert_eq!(s, c.to_json());
    }

    #[test]
    fn line_isometry_scales() {
        // [[a, b], [b, -a]] scales the plane dot form by a^2 + b^2
        let d = dot_form(2, 5, SquareClass::Square).unwrap();
        let f = d.field();
        let phi = Matrix::from_rows(f, &[vec![1, 1], vec![1, -1]]).unwrap();
        let scale = Matrix::from_rows(f, &[vec![2]]).unwrap();
        assert!(check_pseudo_isometry(&d, &d, &phi, &scale).unwrap());
        let wrong = Matrix::from_rows(f, &[vec![1]]).unwrap();
        assert!(!check_pseudo_isometry(&d, &d, &phi, &wrong).unwrap());
    }
}
