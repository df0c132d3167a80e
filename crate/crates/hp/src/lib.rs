//! Extended-precision real and complex arithmetic for the numerical
//! pipelines (CM-point evaluation, modularity residuals, quadrature).
//!
//! Thin wrapper around `astro-float` binary floats. Every [`Real`] carries
//! its working precision in bits; binary operations use the max of the two.
//! Shared transcendental constants are cached per thread.

use std::cell::RefCell;
use std::cmp::Ordering;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as NumSign};
use num_rational::BigRational;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Arbitrary-precision binary float with explicit working precision.
#[derive(Debug, Clone)]
pub struct Real {
    x: BigFloat,
    p: usize,
}

impl Real {
    pub fn zero(p: usize) -> Self {
        Real { x: BigFloat::from_i8(0, p), p }
    }

    pub fn one(p: usize) -> Self {
        Real { x: BigFloat::from_i8(1, p), p }
    }

    pub fn from_i64(v: i64, p: usize) -> Self {
        Real { x: BigFloat::from_i64(v, p), p }
    }

    pub fn from_f64(v: f64, p: usize) -> Self {
        Real { x: BigFloat::from_f64(v, p), p }
    }

    pub fn from_bigint(v: &BigInt, p: usize) -> Self {
        let (sign, digits) = v.to_u64_digits();
        if digits.is_empty() {
            return Self::zero(p);
        }
        let e = 64i64 * digits.len() as i64;
        assert!(e <= astro_float::EXPONENT_MAX as i64);
        let s = if sign == NumSign::Minus { Sign::Neg } else { Sign::Pos };
        let x = BigFloat::from_words(&digits, s, e as astro_float::Exponent);
        let mut r = Real { x, p: p.max(64 * digits.len()) };
        r.set_precision(p);
        r
    }

    pub fn from_rat(v: &BigRational, p: usize) -> Self {
        // guard digits so the quotient is correctly rounded to p bits
        let num = Real::from_bigint(v.numer(), p + 64);
        let den = Real::from_bigint(v.denom(), p + 64);
        let mut q = &num / &den;
        q.set_precision(p);
        q
    }

    pub fn precision(&self) -> usize {
        self.p
    }

    fn set_precision(&mut self, p: usize) {
        self.x.set_precision(p, RM).expect("set precision");
        self.p = p;
    }

    pub fn with_precision(&self, p: usize) -> Self {
        let mut r = self.clone();
        r.set_precision(p);
        r
    }

    pub fn to_f64(&self) -> f64 {
        // round-trip through a decimal string; only used for reporting
        let s = self.to_dec_string(19);
        s.parse::<f64>().unwrap_or(f64::NAN)
    }

    /// Decimal rendering with the given number of significant digits.
    pub fn to_dec_string(&self, digits: usize) -> String {
        if self.x.is_zero() {
            return "0".into();
        }
        let mut v = self.clone();
        let pd = ((digits as f64 * 3.33) as usize + 8).max(self.p.min(64));
        v.set_precision(pd.max(64));
        with_consts(|cc| {
            v.x.format(Radix::Dec, RM, cc)
                .unwrap_or_else(|_| "<fmt error>".into())
        })
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.x.is_negative() && !self.x.is_zero()
    }

    pub fn abs(&self) -> Self {
        Real { x: self.x.abs(), p: self.p }
    }

    pub fn neg(&self) -> Self {
        Real { x: self.x.neg(), p: self.p }
    }

    pub fn cmp(&self, other: &Self) -> Ordering {
        match self.x.cmp(&other.x) {
            Some(s) if s < 0 => Ordering::Less,
            Some(s) if s > 0 => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }

    /// Base-2 exponent: |x| is in [2^(e-1), 2^e). None for zero.
    pub fn exponent(&self) -> Option<i32> {
        if self.x.is_zero() {
            None
        } else {
            self.x.exponent().map(|e| e as i32)
        }
    }

    pub fn sqrt(&self) -> Self {
        Real { x: self.x.sqrt(self.p, RM), p: self.p }
    }

    pub fn exp(&self) -> Self {
        Real { x: with_consts(|cc| self.x.exp(self.p, RM, cc)), p: self.p }
    }

    pub fn ln(&self) -> Self {
        Real { x: with_consts(|cc| self.x.ln(self.p, RM, cc)), p: self.p }
    }

    pub fn sin(&self) -> Self {
        Real { x: with_consts(|cc| self.x.sin(self.p, RM, cc)), p: self.p }
    }

    pub fn cos(&self) -> Self {
        Real { x: with_consts(|cc| self.x.cos(self.p, RM, cc)), p: self.p }
    }

    pub fn atan(&self) -> Self {
        Real { x: with_consts(|cc| self.x.atan(self.p, RM, cc)), p: self.p }
    }

    /// Two-argument arctangent with the usual quadrant conventions.
    pub fn atan2(&self, x: &Real) -> Self {
        let p = self.p.max(x.p);
        let pi = Real::pi(p);
        if x.is_zero() && self.is_zero() {
            return Real::zero(p);
        }
        if x.x.is_zero() {
            let half = &pi / &Real::from_i64(2, p);
            return if self.is_negative() { half.neg() } else { half };
        }
        let base = (self / x).atan();
        if x.is_negative() {
            if self.is_negative() {
                &base - &pi
            } else {
                &base + &pi
            }
        } else {
            base
        }
    }

    pub fn powi(&self, k: i64) -> Self {
        if k == 0 {
            return Real::one(self.p);
        }
        let mut base = if k < 0 { Real::one(self.p) / self.clone() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Real::one(self.p);
        loop {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e == 0 {
                break acc;
            }
            base = &base * &base;
        }
    }

    pub fn pi(p: usize) -> Self {
        Real { x: with_consts(|cc| cc.pi(p, RM)), p }
    }

    /// Nearest integer, together with |x - round(x)|.
    pub fn round_nearest(&self) -> (BigInt, Real) {
        let r = Real { x: self.x.round(0, RM), p: self.p };
        let resid = (self - &r).abs();
        // extract integer via decimal string (exact: r is integral)
        let s = with_consts(|cc| {
            r.x.format(Radix::Dec, RoundingMode::None, cc).expect("format integer")
        });
        (parse_decfloat_int(&s), resid)
    }
}

/// Parse astro-float's decimal scientific notation into a BigInt (value must
/// be integral).
fn parse_decfloat_int(s: &str) -> BigInt {
    let s = s.trim();
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().expect("exponent")),
        None => (s, 0),
    };
    let neg = mant.starts_with('-');
    let mant = mant.trim_start_matches(['-', '+']);
    let (int_part, frac_part) = match mant.split_once('.') {
        Some((i, f)) => (i, f.trim_end_matches('0')),
        None => (mant, ""),
    };
    let shift = exp - frac_part.len() as i64;
    assert!(shift >= 0, "value {s} is not an integer");
    let mut digits: String = format!("{int_part}{frac_part}");
    if digits.is_empty() {
        digits.push('0');
    }
    let mut v: BigInt = digits.parse().expect("digits");
    v *= BigInt::from(10u32).pow(shift as u32);
    if neg {
        -v
    } else {
        v
    }
}

macro_rules! real_binop {
    ($trait:ident, $fn:ident, $method:ident) => {
        impl std::ops::$trait<&Real> for &Real {
            type Output = Real;
            fn $fn(self, rhs: &Real) -> Real {
                let p = self.p.max(rhs.p);
                Real { x: self.x.$method(&rhs.x, p, RM), p }
            }
        }
        impl std::ops::$trait<Real> for Real {
            type Output = Real;
            fn $fn(self, rhs: Real) -> Real {
                (&self).$fn(&rhs)
            }
        }
        impl std::ops::$trait<&Real> for Real {
            type Output = Real;
            fn $fn(self, rhs: &Real) -> Real {
                (&self).$fn(rhs)
            }
        }
        impl std::ops::$trait<Real> for &Real {
            type Output = Real;
            fn $fn(self, rhs: Real) -> Real {
                self.$fn(&rhs)
            }
        }
    };
}

real_binop!(Add, add, add);
real_binop!(Sub, sub, sub);
real_binop!(Mul, mul, mul);
real_binop!(Div, div, div);

/// Complex number over [`Real`].
#[derive(Debug, Clone)]
pub struct Cplx {
    pub re: Real,
    pub im: Real,
}

impl Cplx {
    pub fn new(re: Real, im: Real) -> Self {
        Cplx { re, im }
    }

    pub fn zero(p: usize) -> Self {
        Cplx { re: Real::zero(p), im: Real::zero(p) }
    }

    pub fn one(p: usize) -> Self {
        Cplx { re: Real::one(p), im: Real::zero(p) }
    }

    pub fn from_real(re: Real) -> Self {
        let p = re.p;
        Cplx { re, im: Real::zero(p) }
    }

    pub fn i(p: usize) -> Self {
        Cplx { re: Real::zero(p), im: Real::one(p) }
    }

    pub fn precision(&self) -> usize {
        self.re.p.max(self.im.p)
    }

    pub fn conj(&self) -> Self {
        Cplx { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn neg(&self) -> Self {
        Cplx { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn add(&self, o: &Self) -> Self {
        Cplx { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Cplx { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Cplx {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }

    pub fn scale(&self, s: &Real) -> Self {
        Cplx { re: &self.re * s, im: &self.im * s }
    }

    pub fn div(&self, o: &Self) -> Self {
        let d = o.abs2();
        let n = self.mul(&o.conj());
        Cplx { re: &n.re / &d, im: &n.im / &d }
    }

    pub fn abs2(&self) -> Real {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn abs(&self) -> Real {
        self.abs2().sqrt()
    }

    pub fn arg(&self) -> Real {
        self.im.atan2(&self.re)
    }

    pub fn exp(&self) -> Self {
        let r = self.re.exp();
        Cplx { re: &r * &self.im.cos(), im: &r * &self.im.sin() }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let p = self.precision();
        Cplx { re: self.abs2().ln() / Real::from_i64(2, p), im: self.arg() }
    }

    /// Principal power z^s for real s (uses exp(s ln z)).
    pub fn pow_real(&self, s: &Real) -> Self {
        self.ln().scale(s).exp()
    }

    pub fn powi(&self, k: i64) -> Self {
        let p = self.precision();
        if k == 0 {
            return Cplx::one(p);
        }
        let mut base = if k < 0 { Cplx::one(p).div(self) } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Cplx::one(p);
        loop {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e == 0 {
                break acc;
            }
            base = base.mul(&base);
        }
    }

    /// e(z) = exp(2 pi i z).
    pub fn e2pii(&self) -> Self {
        let p = self.precision();
        let two_pi = Real::pi(p) * Real::from_i64(2, p);
        // exp(2 pi i (x+iy)) = exp(-2 pi y) (cos 2 pi x + i sin 2 pi x)
        let r = (self.im.neg() * &two_pi).exp();
        let ang = &self.re * &two_pi;
        Cplx { re: &r * &ang.cos(), im: &r * &ang.sin() }
    }
}

/// Nodes and weights of n-point Gauss-Legendre quadrature on [-1, 1],
/// computed by Newton iteration at the requested precision.
pub fn gauss_legendre(n: usize, p: usize) -> Vec<(Real, Real)> {
    assert!(n >= 2);
    let pw = p + 16;
    let one = Real::one(pw);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // f64 seed
        let seed = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = Real::from_f64(seed, pw);
        // Newton on P_n(x)
        for _ in 0..(64 + p / 8) {
            let (pn, dpn) = legendre_and_deriv(n, &x, pw);
            let dx = &pn / &dpn;
            x = &x - &dx;
            if dx.is_zero() || dx.exponent().map_or(true, |e| e < -(pw as i32) + 4) {
                break;
            }
        }
        let (_, dpn) = legendre_and_deriv(n, &x, pw);
        // w = 2 / ((1 - x^2) P_n'(x)^2)
        let w = Real::from_i64(2, pw) / ((&one - &(&x * &x)) * (&dpn * &dpn));
        out.push((x.with_precision(p), w.with_precision(p)));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn legendre_and_deriv(n: usize, x: &Real, p: usize) -> (Real, Real) {
    let mut p0 = Real::one(p);
    let mut p1 = x.clone();
    for k in 2..=n {
        let kf = Real::from_i64(k as i64, p);
        let a = Real::from_i64((2 * k - 1) as i64, p);
        let b = Real::from_i64((k - 1) as i64, p);
        let pk = (&(&a * x) * &p1 - &(&b * &p0)) / &kf;
        p0 = p1;
        p1 = pk;
    }
    // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
    let nf = Real::from_i64(n as i64, p);
    let num = &nf * &(&(x * &p1) - &p0);
    let den = &(x * x) - &Real::one(p);
    (p1, num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn close(a: &Real, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() < tol
    }

    #[test]
    fn bigint_roundtrip() {
        let v: BigInt = "123456789012345678901234567890123456789".parse().unwrap();
        let r = Real::from_bigint(&v, 192);
        let (back, resid) = r.round_nearest();
        assert_eq!(back, v);
        assert!(resid.is_zero());
    }

    #[test]
    fn rational_conversion() {
        let q = BigRational::new(BigInt::from(1), BigInt::from(3));
        let r = Real::from_rat(&q, 128);
        assert!(close(&r, 1.0 / 3.0, 1e-15));
    }

    #[test]
    fn complex_exp_unit_circle() {
        let p = 128;
        let z = Cplx::new(Real::zero(p), Real::pi(p)); // e^{i pi} = -1
        let w = z.exp();
        assert!(close(&w.re, -1.0, 1e-30));
        assert!(w.im.abs().exponent().map_or(true, |e| e < -100));
    }

    #[test]
    fn e2pii_decay() {
        let p = 128;
        // e(i) = exp(-2 pi)
        let z = Cplx::i(p);
        let w = z.e2pii();
        assert!(close(&w.re, (-2.0 * std::f64::consts::PI).exp(), 1e-12));
    }

    #[test]
    fn atan2_quadrants() {
        let p = 96;
        let a = Real::from_f64(1.0, p).atan2(&Real::from_f64(1.0, p));
        assert!(close(&a, std::f64::consts::FRAC_PI_4, 1e-15));
        let b = Real::from_f64(1.0, p).atan2(&Real::from_f64(-1.0, p));
        assert!(close(&b, 3.0 * std::f64::consts::FRAC_PI_4, 1e-15));
        let c = Real::from_f64(-1.0, p).atan2(&Real::from_f64(-1.0, p));
        assert!(close(&c, -3.0 * std::f64::consts::FRAC_PI_4, 1e-15));
    }

    #[test]
    fn gauss_legendre_integrates_exp() {
        // integral of e^x over [-1,1] = e - 1/e
        let p = 160;
        let nodes = gauss_legendre(24, p);
        let mut acc = Real::zero(p);
        for (x, w) in &nodes {
            acc = &acc + &(w * &x.exp());
        }
        let expect = std::f64::consts::E - 1.0 / std::f64::consts::E;
        assert!(close(&acc, expect, 1e-14));
    }

    #[test]
    fn round_nearest_halves() {
        let r = Real::from_f64(2.5, 64);
        let (v, resid) = r.round_nearest();
        // ties-to-even
        assert_eq!(v, BigInt::from(2));
        assert!(close(&resid, 0.5, 1e-15));
        let r2 = Real::from_f64(-3.4, 64);
        let (v2, _) = r2.round_nearest();
        assert_eq!(v2, BigInt::from(-3));
    }
}
