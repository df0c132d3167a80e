//! Exact arithmetic with Z-linear combinations of n-th roots of unity.
//!
//! Elements are stored as integer coefficient vectors in the group ring
//! Z[x]/(x^n - 1); equality and zero-tests reduce modulo the cyclotomic
//! polynomial Phi_n, which gives the canonical form in Q(zeta_n). This keeps
//! products of sparse elements cheap (roots of unity stay single monomials)
//! while still allowing exact identities like the metaplectic braid relation
//! to be decided.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use hp::{Cplx, Real};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Sum of integer multiples of n-th roots of unity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cyc {
    n: u32,
    c: Vec<BigInt>, // length n; c[k] multiplies zeta_n^k
}

impl Cyc {
    pub fn zero(n: u32) -> Self {
        Cyc { n, c: vec![BigInt::zero(); n as usize] }
    }

    pub fn from_int(n: u32, v: i64) -> Self {
        let mut z = Self::zero(n);
        z.c[0] = BigInt::from(v);
        z
    }

    /// zeta_n^k.
    pub fn root(n: u32, k: i64) -> Self {
        let mut z = Self::zero(n);
        let k = k.rem_euclid(n as i64) as usize;
        z.c[k] = BigInt::one();
        z
    }

    /// e(a/b) as an n-th root; requires b | n.
    pub fn e_frac(n: u32, a: i64, b: i64) -> Self {
        assert!(b > 0 && n as i64 % b == 0, "{b} must divide {n}");
        Self::root(n, a * (n as i64 / b))
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let mut r = self.clone();
        for (a, b) in r.c.iter_mut().zip(&o.c) {
            *a += b;
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let mut r = self.clone();
        for (a, b) in r.c.iter_mut().zip(&o.c) {
            *a -= b;
        }
        r
    }

    pub fn neg(&self) -> Self {
        Cyc { n: self.n, c: self.c.iter().map(|a| -a).collect() }
    }

    pub fn scale_int(&self, v: &BigInt) -> Self {
        Cyc { n: self.n, c: self.c.iter().map(|a| a * v).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let n = self.n as usize;
        let mut r = Cyc::zero(self.n);
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = (i + j) % n;
                r.c[k] += a * b;
            }
        }
        r
    }

    /// Complex conjugation zeta -> zeta^{-1}.
    pub fn conj(&self) -> Self {
        let n = self.n as usize;
        let mut r = Cyc::zero(self.n);
        for (i, a) in self.c.iter().enumerate() {
            r.c[(n - i) % n] += a;
        }
        r
    }

    /// Canonical zero test in Q(zeta_n): reduce mod Phi_n.
    pub fn is_zero_canonical(&self) -> bool {
        let phi = cyclotomic_poly(self.n);
        poly_rem(&self.c, &phi).iter().all(|a| a.is_zero())
    }

    pub fn eq_canonical(&self, o: &Self) -> bool {
        self.sub(o).is_zero_canonical()
    }

    /// Numerical value at zeta_n = e(1/n).
    pub fn to_cplx(&self, p: usize) -> Cplx {
        let n = self.n as i64;
        let mut acc = Cplx::zero(p);
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ang = Cplx::new(
                Real::from_rat(&qexp::Rat::new(BigInt::from(k as i64), BigInt::from(n)), p),
                Real::zero(p),
            );
            let root = ang.e2pii();
            acc = acc.add(&root.scale(&Real::from_bigint(a, p)));
        }
        acc
    }

    /// sqrt(2) = zeta_8 + zeta_8^{-1}; requires 8 | n.
    pub fn sqrt_two(n: u32) -> Self {
        assert!(n % 8 == 0);
        Self::e_frac(n, 1, 8).add(&Self::e_frac(n, -1, 8))
    }

    /// sqrt(p) for a prime p = 3 mod 4, via the Gauss sum
    /// sum_k (k/p) e(k/p) = i sqrt(p); requires 8 | n and p | n.
    pub fn sqrt_prime_3mod4(p: i64, n: u32) -> Self {
        assert!(n % 8 == 0 && n as i64 % p == 0 && p % 4 == 3);
        let mut g = Cyc::zero(n);
        for k in 1..p {
            let chi = legendre(k, p);
            let term = Self::e_frac(n, k, p);
            if chi == 1 {
                g = g.add(&term);
            } else {
                g = g.sub(&term);
            }
        }
        // sqrt(p) = -i * g = e(-1/4) * g
        let minus_i = Self::e_frac(n, -1, 4);
        let r = minus_i.mul(&g);
        debug_assert!(r.mul(&r).eq_canonical(&Self::from_int(n, p)));
        r
    }

    /// sqrt(M) for M = 2^a * p0 with p0 = 1 or a prime = 3 mod 4.
    pub fn sqrt_of(m: u32, n: u32) -> Self {
        let mut m = m as i64;
        let mut r = Self::from_int(n, 1);
        while m % 4 == 0 {
            r = r.scale_int(&BigInt::from(2));
            m /= 4;
        }
        if m % 2 == 0 {
            r = r.mul(&Self::sqrt_two(n));
            m /= 2;
        }
        if m > 1 {
            r = r.mul(&Self::sqrt_prime_3mod4(m, n));
        }
        r
    }
}

fn legendre(a: i64, p: i64) -> i64 {
    let mut e = (p - 1) / 2;
    let mut b = a.rem_euclid(p);
    let mut acc = 1i64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// Remainder of `a` (coefficient vector, any length) modulo the monic
/// integer polynomial `m`.
fn poly_rem(a: &[BigInt], m: &[BigInt]) -> Vec<BigInt> {
    let dm = m.len() - 1;
    debug_assert!(m[dm].is_one());
    let mut r: Vec<BigInt> = a.to_vec();
    while r.len() > dm {
        let top = r.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let off = r.len() - dm;
        for i in 0..dm {
            let d = &m[i] * &top;
            r[off + i] -= d;
        }
    }
    r
}

/// Exact division of integer polynomials (b monic divides a).
fn poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    debug_assert!(b[db].is_one());
    let mut r: Vec<BigInt> = a.to_vec();
    let mut q = vec![BigInt::zero(); r.len() - db];
    while r.len() > db {
        let top = r.pop().unwrap();
        let off = r.len() - db;
        if !top.is_zero() {
            for i in 0..db {
                let d = &b[i] * &top;
                r[off + i] -= d;
            }
        }
        q[off] = top;
    }
    debug_assert!(r.iter().all(|x| x.is_zero()));
    q
}

/// Coefficients of the n-th cyclotomic polynomial, cached.
pub fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by the product of Phi_d over proper divisors d
    let mut xn1 = vec![BigInt::zero(); n as usize + 1];
    xn1[0] = -BigInt::one();
    xn1[n as usize] = BigInt::one();
    let mut acc = xn1;
    for d in 1..n {
        if n % d == 0 {
            let pd = cyclotomic_poly(d);
            acc = poly_div_exact(&acc, &pd);
        }
    }
    // strip leading zeros (should be monic already)
    while acc.len() > 1 && acc.last().unwrap().is_zero() {
        acc.pop();
    }
    cache.lock().unwrap().insert(n, acc.clone());
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_small() {
        let to_i64 = |v: Vec<BigInt>| -> Vec<i64> {
            v.into_iter().map(|x| i64::try_from(x).unwrap()).collect()
        };
        assert_eq!(to_i64(cyclotomic_poly(1)), vec![-1, 1]);
        assert_eq!(to_i64(cyclotomic_poly(4)), vec![1, 0, 1]);
        assert_eq!(to_i64(cyclotomic_poly(8)), vec![1, 0, 0, 0, 1]);
        assert_eq!(to_i64(cyclotomic_poly(23)), vec![1; 23]);
        // Phi_184 = Phi_23(-x^4): degree 88, coefficients +-1
        let p184 = cyclotomic_poly(184);
        assert_eq!(p184.len(), 89);
        assert!(p184.iter().all(|c| c.magnitude() <= &1u32.into()));
    }

    #[test]
    fn canonical_equality() {
        // 1 + zeta_23 + ... + zeta_23^22 = 0
        let n = 184;
        let mut s = Cyc::zero(n);
        for k in 0..23 {
            s = s.add(&Cyc::e_frac(n, k, 23));
        }
        assert!(s.is_zero_canonical());
        assert!(!Cyc::root(n, 5).is_zero_canonical());
    }

    #[test]
    fn sqrt_constructions_square_back() {
        let n = 184;
        for m in [2u32, 23, 46, 4, 92] {
            let r = Cyc::sqrt_of(m, n);
            assert!(r.mul(&r).eq_canonical(&Cyc::from_int(n, m as i64)), "sqrt({m})^2 != {m}");
        }
    }

    #[test]
    fn sqrt_numeric_positive() {
        let n = 184;
        let r = Cyc::sqrt_of(46, n).to_cplx(128);
        assert!((r.re.to_f64() - 46f64.sqrt()).abs() < 1e-20);
        assert!(r.im.to_f64().abs() < 1e-20);
    }

    #[test]
    fn conj_and_mul() {
        let n = 8;
        let z = Cyc::root(n, 1);
        assert!(z.mul(&z.conj()).eq_canonical(&Cyc::from_int(n, 1)));
        let i = Cyc::root(n, 2);
        assert!(i.mul(&i).eq_canonical(&Cyc::from_int(n, -1)));
    }
}
