use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The prime field GF(p) for an odd prime `p < 2^31`. Elements are `u64`
/// values in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Fp {
    p: u64,
}

impl TryFrom<u64> for Fp {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        Fp::new(p)
    }
}

impl From<Fp> for u64 {
    fn from(f: Fp) -> u64 {
        f.p
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Fp {
    pub fn new(p: u64) -> Result<Self> {
        if !(3..1 << 31).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidField(p));
        }
        Ok(Fp { p })
    }

    #[inline]
    pub fn p(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(self, a: u64) -> Option<u64> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    /// Inverse of a value known to be nonzero.
    #[inline]
    pub(crate) fn inv_nz(self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p), "inverse of zero");
        self.pow(a, self.p - 2)
    }

    /// The element `1/2 = (p+1)/2`.
    pub fn half(self) -> u64 {
        self.p.div_ceil(2)
    }

    pub fn is_square(self, a: u64) -> bool {
        let a = a % self.p;
        a == 0 || self.pow(a, (self.p - 1) / 2) == 1
    }

    pub fn least_nonsquare(self) -> u64 {
        (2..self.p).find(|&a| !self.is_square(a)).expect("odd prime has a nonsquare")
    }

    /// Square root by Tonelli-Shanks, `None` for nonsquares.
    pub fn sqrt(self, a: u64) -> Option<u64> {
        let p = self.p;
        let a = a % p;
        if a == 0 {
            return Some(0);
        }
        if !self.is_square(a) {
            return None;
        }
        let mut q = p - 1;
        let mut s = 0;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let z = self.least_nonsquare();
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0;
            let mut tt = t;
            while tt != 1 {
                tt = self.mul(tt, tt);
                i += 1;
            }
            let b = self.pow(c, 1 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    pub fn random(self, rng: &mut impl rand::Rng) -> u64 {
        rng.gen_range(0..self.p)
    }

    pub fn random_nonzero(self, rng: &mut impl rand::Rng) -> u64 {
        rng.gen_range(1..self.p)
    }
}

/// Whether a field element is a square or not.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SquareClass {
    Square,
    Nonsquare,
}

impl SquareClass {
    pub fn times(self, other: SquareClass) -> SquareClass {
        if self == other {
            SquareClass::Square
        } else {
            SquareClass::Nonsquare
        }
    }
}

/// Square class of a nonzero element of GF(p).
pub fn square_class(f: Fp, lambda: u64) -> Result<SquareClass> {
    if lambda.is_multiple_of(f.p()) {
        return Err(Error::invalid("square class of zero"));
    }
    Ok(if f.is_square(lambda) { SquareClass::Square } else { SquareClass::Nonsquare })
}
