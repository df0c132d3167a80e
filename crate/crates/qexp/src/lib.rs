//! Exact arithmetic on formal q-expansions with fractional exponents.
//!
//! A [`QExpansion`] is a sparse Laurent series
//!
//! ```text
//!     f = sum_{n} c(n) q^(n/M),      c(n) rational,
//! ```
//!
//! with exponents in (1/M)Z, finitely many negative terms, and a hard
//! precision bound: coefficients are known exactly for all n < prec and
//! unknown beyond it. Every operation recomputes the output precision
//! pessimistically from its inputs, so a truncated tail can never be
//! mistaken for exact data.
//!
//! Coefficients are arbitrary-precision rationals ([`Rat`]), stored in
//! lowest terms with positive denominator (guaranteed by `num-rational`).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rat = num_rational::BigRational;

/// Convenience constructors for rationals.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("cannot invert a series with zero leading coefficient (zero series or empty window)")]
    ZeroLeadingCoefficient,
    #[error("exponent denominators {0} and {1} cannot be merged: lcm overflow")]
    DenominatorOverflow(u32, u32),
    #[error("invalid serialized series: {0}")]
    BadSerialization(String),
}

/// Precision/size budget shared by the exact and floating pipelines.
///
/// `series_prec` counts q^(1/M) terms; `mantissa_bits` is the working
/// precision of the extended-float modules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionBudget {
    pub series_prec: i64,
    pub mantissa_bits: usize,
}

impl PrecisionBudget {
    pub fn new(series_prec: i64, mantissa_bits: usize) -> Self {
        assert!(series_prec >= 1, "series precision must be >= 1");
        assert!(mantissa_bits >= 53, "mantissa must be at least f64");
        PrecisionBudget { series_prec, mantissa_bits }
    }
}

/// Sparse exact Laurent q-expansion with exponents in (1/M)Z.
///
/// Invariants: no stored zero coefficients; every stored key n satisfies
/// n < prec; `prec` is an exclusive bound on known exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExpansion {
    m: u32,
    prec: i64,
    coeffs: BTreeMap<i64, Rat>,
}

impl QExpansion {
    /// The zero series known to precision `prec` (exponents in units 1/m).
    pub fn zero(m: u32, prec: i64) -> Self {
        assert!(m >= 1);
        QExpansion { m, prec, coeffs: BTreeMap::new() }
    }

    /// c * q^(n/m), known to precision `prec`.
    pub fn monomial(m: u32, n: i64, c: Rat, prec: i64) -> Self {
        let mut s = Self::zero(m, prec);
        if !c.is_zero() && n < prec {
            s.coeffs.insert(n, c);
        }
        s
    }

    pub fn one(m: u32, prec: i64) -> Self {
        Self::monomial(m, 0, Rat::one(), prec)
    }

    /// Build from (exponent numerator, coefficient) pairs.
    pub fn from_terms(m: u32, terms: impl IntoIterator<Item = (i64, Rat)>, prec: i64) -> Self {
        let mut s = Self::zero(m, prec);
        for (n, c) in terms {
            if n < prec && !c.is_zero() {
                let e = s.coeffs.entry(n).or_insert_with(Rat::zero);
                *e += c;
                if e.is_zero() {
                    s.coeffs.remove(&n);
                }
            }
        }
        s
    }

    pub fn exponent_denominator(&self) -> u32 {
        self.m
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Lowest stored exponent numerator, or `prec` for the zero series
    /// ("no terms below the horizon").
    pub fn floor(&self) -> i64 {
        self.coeffs.keys().next().copied().unwrap_or(self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of q^(n/m). Zero for any n < prec not stored.
    /// Panics if asked beyond the precision horizon.
    pub fn coeff(&self, n: i64) -> Rat {
        assert!(n < self.prec, "coefficient q^({n}/{}) is beyond precision {}", self.m, self.prec);
        self.coeffs.get(&n).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Rat)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Restrict the precision horizon (dropping now-unknown terms).
    pub fn truncate(&self, prec: i64) -> Self {
        let mut s = self.clone();
        if prec < s.prec {
            s.prec = prec;
            s.coeffs = s.coeffs.into_iter().filter(|(n, _)| *n < prec).collect();
        }
        s
    }

    /// Rescale to exponent denominator `m2` (a multiple of the current one).
    pub fn rescale(&self, m2: u32) -> Self {
        assert!(m2 % self.m == 0, "target denominator must be a multiple");
        let k = (m2 / self.m) as i64;
        QExpansion {
            m: m2,
            prec: self.prec.checked_mul(k).expect("precision overflow"),
            coeffs: self.coeffs.iter().map(|(n, c)| (n * k, c.clone())).collect(),
        }
    }

    /// Substitute q -> q^k (exponents multiply by k), e.g. eta(23z) from eta(z).
    pub fn scale_exponents(&self, k: u32) -> Self {
        assert!(k >= 1);
        let k = k as i64;
        QExpansion {
            m: self.m,
            prec: self.prec.checked_mul(k).expect("precision overflow"),
            coeffs: self.coeffs.iter().map(|(n, c)| (n * k, c.clone())).collect(),
        }
    }

    /// Shrink the exponent denominator when every stored exponent (and the
    /// precision bound) allows it.
    pub fn reduce_denominator(&self) -> Self {
        let mut g = self.m as i64;
        for n in self.coeffs.keys() {
            g = g.gcd(n);
            if g == 1 {
                return self.clone();
            }
        }
        if g <= 1 {
            return self.clone();
        }
        QExpansion {
            m: self.m / g as u32,
            prec: self.prec.div_euclid(g),
            coeffs: self.coeffs.iter().map(|(n, c)| (n / g, c.clone())).collect(),
        }
    }

    fn merge_denominators(a: &Self, b: &Self) -> Result<(Self, Self), SeriesError> {
        if a.m == b.m {
            return Ok((a.clone(), b.clone()));
        }
        let l = (a.m as u64).lcm(&(b.m as u64));
        if l > u32::MAX as u64 {
            return Err(SeriesError::DenominatorOverflow(a.m, b.m));
        }
        Ok((a.rescale(l as u32), b.rescale(l as u32)))
    }

    /// Coefficientwise sum; precision = min of the (rescaled) inputs.
    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = Self::merge_denominators(self, other).expect("denominator overflow");
        let prec = a.prec.min(b.prec);
        let mut coeffs = BTreeMap::new();
        for (n, c) in a.coeffs.iter().chain(b.coeffs.iter()) {
            if *n >= prec {
                continue;
            }
            let e = coeffs.entry(*n).or_insert_with(Rat::zero);
            *e += c;
        }
        coeffs.retain(|_, c: &mut Rat| !c.is_zero());
        QExpansion { m: a.m, prec, coeffs }
    }

    pub fn neg(&self) -> Self {
        QExpansion {
            m: self.m,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|(n, c)| (*n, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.m, self.prec);
        }
        QExpansion {
            m: self.m,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|(n, v)| (*n, v * c)).collect(),
        }
    }

    /// Cauchy product, truncated to the provable joint precision
    /// min(prec_a + floor_b, prec_b + floor_a).
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::merge_denominators(self, other).expect("denominator overflow");
        let prec = (a.prec + b.floor()).min(b.prec + a.floor());
        let mut coeffs: BTreeMap<i64, Rat> = BTreeMap::new();
        for (na, ca) in &a.coeffs {
            // b-terms beyond prec - na cannot contribute below the horizon
            let hi = prec - na;
            for (nb, cb) in b.coeffs.range(..hi) {
                let n = na + nb;
                let e = coeffs.entry(n).or_insert_with(Rat::zero);
                *e += ca * cb;
            }
        }
        coeffs.retain(|_, c: &mut Rat| !c.is_zero());
        QExpansion { m: a.m, prec, coeffs }
    }

    /// Multiplicative inverse of a series with nonzero leading coefficient.
    ///
    /// Writing a = c q^f (1 + u), the result is c^-1 q^-f (1 + u)^-1 with
    /// precision -f + (prec_a - f).
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let (&f, lead) = self.coeffs.iter().next().ok_or(SeriesError::ZeroLeadingCoefficient)?;
        let window = self.prec - f; // known terms of 1 + u
        if window <= 0 {
            return Err(SeriesError::ZeroLeadingCoefficient);
        }
        let lead_inv = lead.recip();
        // Solve (sum_k b_k x^k)(sum_j a_j x^j) = 1 with x = q^(1/m), a_0 = lead.
        // b_0 = 1/a_0; b_k = -(1/a_0) sum_{j=1..k} a_j b_{k-j}.
        let mut b: Vec<Rat> = Vec::with_capacity(window as usize);
        b.push(lead_inv.clone());
        for k in 1..window {
            let mut acc = Rat::zero();
            for (na, ca) in self.coeffs.range(f + 1..=f + k) {
                let j = na - f;
                let bk = &b[(k - j) as usize];
                if !bk.is_zero() {
                    acc += ca * bk;
                }
            }
            b.push(if acc.is_zero() { Rat::zero() } else { -acc * &lead_inv });
        }
        let coeffs = b
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (-f + k as i64, c))
            .collect();
        Ok(QExpansion { m: self.m, prec: -f + window, coeffs })
    }

    /// Normalized derivative (2 pi i)^-1 d/dtau = q d/dq: multiplies the
    /// coefficient of q^(n/M) by n/M.
    pub fn derivative(&self) -> Self {
        let m = BigInt::from(self.m);
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(n, _)| **n != 0)
            .map(|(n, c)| (*n, c * Rat::new(BigInt::from(*n), m.clone())))
            .collect();
        QExpansion { m: self.m, prec: self.prec, coeffs }
    }

    /// Integer power by square-and-multiply; negative powers via `invert`.
    pub fn pow(&self, k: i64) -> Result<Self, SeriesError> {
        if k == 0 {
            // a^0 = 1, known over the multiplicative window of a
            return Ok(Self::one(self.m, self.prec - self.floor()));
        }
        let (mut base, mut e) = if k < 0 {
            (self.invert()?, (-k) as u64)
        } else {
            (self.clone(), k as u64)
        };
        let mut acc: Option<Self> = None;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        Ok(acc.unwrap())
    }

    /// Exponents present, as exact rationals n/M.
    pub fn support(&self) -> impl Iterator<Item = Rat> + '_ {
        let m = BigInt::from(self.m);
        self.coeffs.keys().map(move |n| Rat::new(BigInt::from(*n), m.clone()))
    }
}

impl fmt::Display for QExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().take(12) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *n == 0 {
                write!(f, "{}", c)?;
            } else if self.m == 1 {
                write!(f, "{}*q^{}", c, n)?;
            } else {
                write!(f, "{}*q^({}/{})", c, n, self.m)?;
            }
        }
        if self.coeffs.len() > 12 {
            write!(f, " + ...")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^({}/{}))", self.prec, self.m)
    }
}

// --- JSON schema: {M, floor, coeffs: [[n, "num/den"], ...], precision} ---

fn rat_to_string(c: &Rat) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn rat_from_string(s: &str) -> Result<Rat, SeriesError> {
    let parse_int = |t: &str| {
        t.parse::<BigInt>()
            .map_err(|e| SeriesError::BadSerialization(format!("bad integer {t:?}: {e}")))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let den = parse_int(d)?;
            if !den.is_positive() {
                return Err(SeriesError::BadSerialization(format!("nonpositive denominator in {s:?}")));
            }
            Ok(Rat::new(parse_int(n)?, den))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct QExpansionRepr {
    #[serde(rename = "M")]
    m: u32,
    floor: i64,
    coeffs: Vec<(i64, String)>,
    precision: i64,
}

impl Serialize for QExpansion {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        QExpansionRepr {
            m: self.m,
            floor: self.floor(),
            coeffs: self.coeffs.iter().map(|(n, c)| (*n, rat_to_string(c))).collect(),
            precision: self.prec,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QExpansion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = QExpansionRepr::deserialize(d)?;
        if repr.m == 0 {
            return Err(D::Error::custom("exponent denominator must be positive"));
        }
        let mut coeffs = BTreeMap::new();
        for (n, cs) in repr.coeffs {
            if n >= repr.precision {
                return Err(D::Error::custom(format!("term {n} at or beyond precision {}", repr.precision)));
            }
            let c = rat_from_string(&cs).map_err(D::Error::custom)?;
            if c.is_zero() {
                return Err(D::Error::custom("stored zero coefficient"));
            }
            if coeffs.insert(n, c).is_some() {
                return Err(D::Error::custom(format!("duplicate exponent {n}")));
            }
        }
        Ok(QExpansion { m: repr.m, prec: repr.precision, coeffs })
    }
}
