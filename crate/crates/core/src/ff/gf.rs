//! Small Galois fields `GF(q)`, `q` in {2, 3, 4, 5, 7, 8, 9}.
//!
//! Elements are `u8` values `0..q`. For `q = p^k` the base-`p` digits of an
//! element are the coefficients of a polynomial of degree `< k` (lowest digit
//! first), reduced modulo a fixed irreducible polynomial. Prime fields use
//! plain modular arithmetic; prime-power fields multiply through log/antilog
//! tables built from a primitive element.

use crate::error::{Error, Result};

pub const SUPPORTED_ORDERS: [u32; 7] = [2, 3, 4, 5, 7, 8, 9];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisField {
    q: u32,
    p: u32,
    degree: u32,
    add: Vec<u8>,
    neg: Vec<u8>,
    /// `exp[k] = g^k` for a primitive element `g`, `k` in `0..q-1`.
    exp: Vec<u8>,
    /// `log[a]` for `a != 0`.
    log: Vec<u32>,
}

/// `(p, k, modulus coefficients low-to-high)` for each supported order.
fn layout(q: u32) -> Option<(u32, u32, &'static [u32])> {
    match q {
        2 => Some((2, 1, &[])),
        3 => Some((3, 1, &[])),
        5 => Some((5, 1, &[])),
        7 => Some((7, 1, &[])),
        // x^2 + x + 1
        4 => Some((2, 2, &[1, 1, 1])),
        // x^3 + x + 1
        8 => Some((2, 3, &[1, 1, 0, 1])),
        // x^2 + 1, irreducible since -1 is not a square mod 3
        9 => Some((3, 2, &[1, 0, 1])),
        _ => None,
    }
}

impl GaloisField {
    pub fn new(q: u32) -> Result<Self> {
        let (p, degree, modulus) = layout(q).ok_or(Error::UnsupportedField(q))?;
        let digits = |a: u32| -> Vec<u32> { (0..degree).map(|i| a / p.pow(i) % p).collect() };
        let undigits = |d: &[u32]| -> u32 { d.iter().enumerate().map(|(i, &c)| c * p.pow(i as u32)).sum() };

        let mut add = vec![0u8; (q * q) as usize];
        let mut neg = vec![0u8; q as usize];
        for a in 0..q {
            let da = digits(a);
            neg[a as usize] = undigits(&da.iter().map(|&c| (p - c) % p).collect::<Vec<_>>()) as u8;
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&s) as u8;
            }
        }

        let slow_mul = |a: u32, b: u32| -> u32 {
            if degree == 1 {
                return a * b % p;
            }
            let (da, db) = (digits(a), digits(b));
            let mut prod = vec![0u32; (2 * degree - 1) as usize];
            for (i, x) in da.iter().enumerate() {
                for (j, y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            // reduce by the monic modulus from the top down
            let k = degree as usize;
            for top in (k..prod.len()).rev() {
                let c = prod[top];
                if c != 0 {
                    for (i, &m) in modulus.iter().enumerate() {
                        let idx = top - k + i;
                        prod[idx] = (prod[idx] + (p - c) * m) % p;
                    }
                }
            }
            undigits(&prod[..k])
        };

        let order = (q - 1) as usize;
        let generator = (1..q)
            .find(|&g| {
                let mut x = 1;
                (1..=order).all(|k| {
                    x = slow_mul(x, g);
                    (x == 1) == (k == order)
                })
            })
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u8; order];
        let mut log = vec![0u32; q as usize];
        let mut x = 1;
        for (k, e) in exp.iter_mut().enumerate() {
            *e = x as u8;
            log[x as usize] = k as u32;
            x = slow_mul(x, generator);
        }
        Ok(Self { q, p, degree, add, neg, exp, log })
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        if self.degree == 1 {
            return ((a as u32 * b as u32) % self.p) as u8;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.q - 1;
        self.exp[((self.log[a as usize] + self.log[b as usize]) % order) as usize]
    }

    pub fn pow(&self, a: u8, k: u32) -> u8 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = self.q - 1;
        self.exp[((self.log[a as usize] as u64 * k as u64) % order as u64) as usize]
    }

    /// `1 - v^(q-1)`: one at zero, zero elsewhere.
    #[inline]
    pub fn zero_indicator(&self, v: u8) -> u8 {
        self.sub(1, self.pow(v, self.q - 1))
    }
}
