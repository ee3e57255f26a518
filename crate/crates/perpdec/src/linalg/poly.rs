use std::cmp::Ordering;
use std::fmt;

use super::field::Fp;
use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::rng;

/// Univariate polynomial over GF(p), coefficients from low to high degree with
/// no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    f: Fp,
    c: Vec<u64>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "Poly{:?}", self.c)
    }
}

impl Poly {
    pub fn new(f: Fp, mut c: Vec<u64>) -> Self {
        c.iter_mut().for_each(|x| *x %= f.p());
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { f, c }
    }

    pub fn zero(f: Fp) -> Self {
        Poly { f, c: vec![] }
    }

    pub fn constant(f: Fp, a: u64) -> Self {
        Poly::new(f, vec![a])
    }

    /// The monomial `t`.
    pub fn x(f: Fp) -> Self {
        Poly::new(f, vec![0, 1])
    }

    pub fn field(&self) -> Fp {
        self.f
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial has no degree.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn lead(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.f.inv_nz(self.lead());
        self.scale(inv)
    }

    pub fn scale(&self, a: u64) -> Poly {
        let f = self.f;
        Poly::new(f, self.c.iter().map(|&x| f.mul(x, a)).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let f = self.f;
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| f.add(*self.c.get(i).unwrap_or(&0), *o.c.get(i).unwrap_or(&0))).collect();
        Poly::new(f, c)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(self.f.p() - 1))
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.f);
        }
        let f = self.f;
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, c)
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return Err(Error::invalid("division by the zero polynomial"));
        }
        let f = self.f;
        let mut r = self.c.clone();
        let dd = d.deg();
        if r.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let inv = f.inv_nz(d.lead());
        let mut q = vec![0u64; r.len() - dd];
        for i in (0..q.len()).rev() {
            let coef = f.mul(r[i + dd], inv);
            q[i] = coef;
            if coef == 0 {
                continue;
            }
            for (j, &b) in d.c.iter().enumerate() {
                r[i + j] = f.sub(r[i + j], f.mul(coef, b));
            }
        }
        r.truncate(dd);
        Ok((Poly::new(f, q), Poly::new(f, r)))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).expect("nonzero divisor").1
    }

    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Inverse of `self` modulo `m`, if coprime.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let f = self.f;
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (Poly::zero(f), Poly::constant(f, 1));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).ok()?;
            r0 = r1;
            r1 = r;
            let s = s0.sub(&q.mul(&s1));
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let inv = f.inv_nz(r0.lead());
        Some(s0.scale(inv).rem(m))
    }

    pub fn mul_mod(&self, o: &Poly, m: &Poly) -> Poly {
        self.mul(o).rem(m)
    }

    pub fn pow_mod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut r = Poly::constant(self.f, 1).rem(m);
        let mut b = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul_mod(&b, m);
            }
            b = b.mul_mod(&b, m);
            e >>= 1;
        }
        r
    }

    pub fn derivative(&self) -> Poly {
        let f = self.f;
        let c = self.c.iter().enumerate().skip(1).map(|(i, &a)| f.mul(a, i as u64 % f.p())).collect();
        Poly::new(f, c)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = self.f;
        self.c.iter().rev().fold(0, |acc, &a| f.add(f.mul(acc, x), a))
    }

    /// Evaluation at a square matrix by Horner's rule.
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        let n = m.rows();
        let f = self.f;
        let mut acc = Matrix::zeros(f, n, n);
        for &a in self.c.iter().rev() {
            acc = acc.mul(m).add(&Matrix::scalar(f, n, a));
        }
        acc
    }

    /// Whether `self` is irreducible (Rabin's test).
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        let f = self.f;
        let m = self.monic();
        let x = Poly::x(f);
        let p = f.p() as u128;
        let frob = |k: usize| -> Poly {
            let mut y = x.clone();
            for _ in 0..k {
                y = y.pow_mod(p, &m);
            }
            y
        };
        if !frob(n).sub(&x).rem(&m).is_zero() {
            return false;
        }
        for q in prime_divisors(n) {
            if !m.gcd(&frob(n / q).sub(&x)).is_one() {
                return false;
            }
        }
        true
    }

    fn canonical_cmp(&self, o: &Poly) -> Ordering {
        self.c.len().cmp(&o.c.len()).then_with(|| self.c.iter().rev().cmp(o.c.iter().rev()))
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Factorisation into monic irreducibles with multiplicities, sorted by degree
/// then coefficients. Randomised splitting is seeded, the output is not.
pub fn factor_poly(g: &Poly, seed: u64) -> Result<Vec<(Poly, usize)>> {
    if g.is_zero() {
        return Err(Error::invalid("factorisation of the zero polynomial"));
    }
    let mut out = Vec::new();
    let mut stream = 0;
    for (sqf, mult) in squarefree(&g.monic()) {
        for (dpart, d) in distinct_degree(&sqf) {
            stream += 1;
            let mut rng = rng::stream(seed, stream);
            for irr in equal_degree(&dpart, d, &mut rng) {
                out.push((irr, mult));
            }
        }
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(out)
}

/// Squarefree decomposition `g = prod a_i^i` of a monic polynomial.
fn squarefree(g: &Poly) -> Vec<(Poly, usize)> {
    let f = g.field();
    let p = f.p() as usize;
    let mut out = Vec::new();
    if g.degree() == Some(0) {
        return out;
    }
    let dg = g.derivative();
    if dg.is_zero() {
        // g = h(t^p) = h(t)^p over GF(p)
        let h = Poly::new(f, g.c.iter().step_by(p).copied().collect());
        for (a, m) in squarefree(&h) {
            out.push((a, m * p));
        }
        return out;
    }
    let c = g.gcd(&dg);
    let mut w = g.div_exact(&c);
    let mut c = c;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y);
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if !c.is_one() {
        let h = Poly::new(f, c.c.iter().step_by(p).copied().collect());
        for (a, m) in squarefree(&h) {
            out.push((a, m * p));
        }
    }
    out
}

fn distinct_degree(g: &Poly) -> Vec<(Poly, usize)> {
    let f = g.field();
    let p = f.p() as u128;
    let x = Poly::x(f);
    let mut out = Vec::new();
    let mut rest = g.clone();
    let mut h = x.clone();
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(p, &rest);
        let part = rest.gcd(&h.sub(&x));
        if !part.is_one() {
            out.push((part.clone(), d));
            rest = rest.div_exact(&part);
            h = h.rem(&rest);
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        let d = rest.deg();
        out.push((rest, d));
    }
    out
}

fn equal_degree(g: &Poly, d: usize, rng: &mut rng::Rng) -> Vec<Poly> {
    let n = g.deg();
    if n == d {
        return vec![g.monic()];
    }
    let f = g.field();
    let p = f.p() as u128;
    loop {
        let a = Poly::new(f, (0..n).map(|_| f.random(rng)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        // a^((p^d - 1)/2) = (a^(1 + p + ... + p^(d-1)))^((p-1)/2)
        let mut norm = a.rem(g);
        let mut frob = norm.clone();
        for _ in 1..d {
            frob = frob.pow_mod(p, g);
            norm = norm.mul_mod(&frob, g);
        }
        let b = norm.pow_mod((p - 1) / 2, g).sub(&Poly::constant(f, 1));
        let h = g.gcd(&b);
        if h.degree().unwrap_or(0) > 0 && h.deg() < n {
            let mut out = equal_degree(&h, d, rng);
            out.extend(equal_degree(&g.div_exact(&h), d, rng));
            return out;
        }
    }
}

/// Idempotent polynomials for the coprime factorisation `m = prod g_i`:
/// `e_i = 1 mod g_i` and `e_i = 0 mod g_j` for `j != i`.
pub fn crt_idempotents(m: &Poly, parts: &[Poly]) -> Vec<Poly> {
    parts
        .iter()
        .map(|g| {
            let cof = m.div_exact(g);
            let inv = cof.inv_mod(g).expect("coprime factorisation");
            cof.mul(&inv).rem(m)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_t2_plus_1_mod_5() {
        let f = Fp::new(5).unwrap();
        let g = Poly::new(f, vec![1, 0, 1]);
        let fac = factor_poly(&g, 0).unwrap();
        assert_eq!(fac, vec![(Poly::new(f, vec![2, 1]), 1), (Poly::new(f, vec![3, 1]), 1)]);
    }

    #[test]
    fn irreducible_mod_3() {
        let f = Fp::new(3).unwrap();
        let g = Poly::new(f, vec![1, 0, 1]);
        assert!(g.is_irreducible());
        assert_eq!(factor_poly(&g, 9).unwrap(), vec![(g, 1)]);
    }

    #[test]
    fn inseparable_powers() {
        let f = Fp::new(3).unwrap();
        // (t+1)^3 (t^2+1)^2
        let a = Poly::new(f, vec![1, 1]);
        let b = Poly::new(f, vec![1, 0, 1]);
        let g = a.mul(&a).mul(&a).mul(&b).mul(&b);
        let fac = factor_poly(&g, 4).unwrap();
        assert_eq!(fac, vec![(a, 3), (b, 2)]);
    }

    #[test]
    fn crt_parts_are_idempotent() {
        let f = Fp::new(7).unwrap();
        let g1 = Poly::new(f, vec![1, 1]);
        let g2 = Poly::new(f, vec![3, 0, 1]);
        let m = g1.mul(&g2);
        let es = crt_idempotents(&m, &[g1.clone(), g2.clone()]);
        for e in &es {
            assert_eq!(e.mul_mod(e, &m), *e);
        }
        assert!(es[0].add(&es[1]).rem(&m).is_one());
    }
}
