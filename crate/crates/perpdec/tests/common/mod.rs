//! Helpers shared by the integration tests, including oracles that do not
//! reuse the library's linear algebra.
#![allow(dead_code)]

use perpdec::bilinear::{BilinearMap, Sign};
use perpdec::linalg::{Fp, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_gram(f: Fp, sign: Sign, m: usize, r: &mut impl Rng) -> Matrix {
    let mut g = Matrix::zeros(f, m, m);
    for i in 0..m {
        for j in i..m {
            let x = r.gen_range(0..f.p());
            if i == j {
                if sign == Sign::Symmetric {
                    g.set(i, i, x);
                }
            } else {
                g.set(i, j, x);
                g.set(j, i, if sign == Sign::Symmetric { x } else { f.neg(x) });
            }
        }
    }
    g
}

/// A random full, non-degenerate map with the given shape.
pub fn random_map(p: u64, sign: Sign, dim_v: usize, dim_w: usize, r: &mut impl Rng) -> BilinearMap {
    let f = Fp::new(p).unwrap();
    loop {
        let grams = (0..dim_w).map(|_| random_gram(f, sign, dim_v, r)).collect();
        if let Ok(b) = BilinearMap::new(f, sign, dim_v, grams) {
            if b.is_nondegenerate() {
                return b;
            }
        }
    }
}

/// Random non-degenerate alternating map with `dim_v` in `2..=max_v` and
/// `dim_w` in `1..=max_w` (clamped to what the shape allows).
pub fn random_alternating(p: u64, max_v: usize, max_w: usize, r: &mut impl Rng) -> BilinearMap {
    random_hermitian(p, Sign::Alternating, max_v, max_w, r)
}

/// Random full non-degenerate map of the given sign; the shape is redrawn
/// with every attempt since some shapes (odd `dim_v` with one alternating
/// gram, say) admit no such map.
pub fn random_hermitian(p: u64, sign: Sign, max_v: usize, max_w: usize, r: &mut impl Rng) -> BilinearMap {
    let f = Fp::new(p).unwrap();
    let min_v = if sign == Sign::Alternating { 2 } else { 1 };
    loop {
        let m = r.gen_range(min_v..=max_v);
        let room = if sign == Sign::Alternating { m * (m - 1) / 2 } else { m * (m + 1) / 2 };
        let w = r.gen_range(1..=max_w.min(room));
        let grams = (0..w).map(|_| random_gram(f, sign, m, r)).collect();
        if let Ok(b) = BilinearMap::new(f, sign, m, grams) {
            if b.is_nondegenerate() {
                return b;
            }
        }
    }
}

/// Rank over GF(p) by plain Gaussian elimination on `i128` rows.
pub fn rank_mod(p: u64, mut rows: Vec<Vec<i128>>) -> usize {
    let p = p as i128;
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c].rem_euclid(p) != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = mod_inv(rows[rank][c].rem_euclid(p), p);
        for x in rows[rank].iter_mut() {
            *x = (*x * inv).rem_euclid(p);
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][c].rem_euclid(p) != 0 {
                let k = rows[i][c];
                let pivot = rows[rank].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot) {
                    *x = (*x - k * y).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inv(a: i128, p: i128) -> i128 {
    let mut r = 1;
    let (mut b, mut e) = (a, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// `dim Adj(b)` as the nullity of the system `F B_k - B_k G^T = 0` in the
/// `2 m^2` unknowns `(F, G)`.
pub fn adjoint_dim_oracle(b: &BilinearMap) -> usize {
    let m = b.dim_v();
    let mut rows = Vec::new();
    for g in b.grams() {
        let gram: Vec<Vec<i128>> = g.to_rows().into_iter().map(|r| r.into_iter().map(|x| x as i128).collect()).collect();
        for i in 0..m {
            for j in 0..m {
                // (F B)_{ij} = sum_t F_{it} B_{tj};  (B G^T)_{ij} = sum_t B_{it} G_{jt}
                let mut row = vec![0i128; 2 * m * m];
                for t in 0..m {
                    row[i * m + t] += gram[t][j];
                    row[m * m + j * m + t] -= gram[i][t];
                }
                rows.push(row);
            }
        }
    }
    2 * m * m - rank_mod(b.p(), rows)
}

fn random_invertible(f: Fp, n: usize, r: &mut impl Rng) -> Matrix {
    loop {
        let m = Matrix::from_flat(f, n, n, (0..n * n).map(|_| f.random(r)).collect());
        if m.rank() == n {
            return m;
        }
    }
}

/// An orthogonal sum of two random alternating maps over a common codomain,
/// disguised by random changes of basis on both sides.
pub fn random_decomposable(p: u64, r: &mut impl Rng) -> BilinearMap {
    let f = Fp::new(p).unwrap();
    loop {
        let b1 = random_alternating(p, 3, 3, r);
        let b2 = random_alternating(p, 3, 3, r);
        if b1.dim_w() != b2.dim_w() {
            continue;
        }
        let sum = b1.perp_sum(&b2).unwrap();
        let g = random_invertible(f, sum.dim_v(), r);
        let h = random_invertible(f, sum.dim_w(), r);
        return sum.transform(&g, &h).unwrap();
    }
}
