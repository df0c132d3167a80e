//! Closed-form valuations of alpha at primes of the Hilbert class field:
//!
//! ```text
//!   ord_P(alpha) = sum_{t<0} sum_nu c_nu(t) r_{B A^2}(-t/p) ord_p(t)
//! ```
//!
//! for inert p (the class A indexes the prime P through the Artin map,
//! P^sigma_A = P_1 with P_1 the conjugation-fixed prime); zero for split p;
//! and the same sum at p = D as the flagged-experimental ramified case.

use std::collections::BTreeMap;

use num_traits::Zero;
use qexp::Rat;
use quadclass::{kronecker_symbol, ClassGroup, ClassIdx};
use vvforms::VectorForm;

use crate::OracleError;

/// The finite principal part of a weight-1 form, with its constant term.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalPart {
    /// (nu, t) -> c_nu(t) for t < 0
    pub coeffs: BTreeMap<(u32, i64), Rat>,
    pub c00: Rat,
}

impl PrincipalPart {
    pub fn of_form(f: &VectorForm) -> Self {
        let mut coeffs = BTreeMap::new();
        for nu in f.group().elements() {
            for (t, c) in f.component(nu).terms() {
                if *t < 0 {
                    coeffs.insert((nu, *t), c.clone());
                }
            }
        }
        PrincipalPart { coeffs, c00: f.component(0).coeff(0) }
    }

    /// Integer c-values (the inputs here are integral forms).
    pub fn integer_entries(&self) -> impl Iterator<Item = (u32, i64, i64)> + '_ {
        self.coeffs.iter().map(|((nu, t), c)| {
            debug_assert!(c.is_integer());
            ((*nu), *t, i64::try_from(c.numer()).expect("small coefficient"))
        })
    }
}

fn ord_p(mut n: i64, p: i64) -> i64 {
    n = n.abs();
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

/// The inert-prime valuation sum.
pub fn theorem1_valuation(
    pp: &PrincipalPart,
    g: &ClassGroup,
    b: ClassIdx,
    p: i64,
    a: ClassIdx,
) -> Result<i64, OracleError> {
    if kronecker_symbol(p, g.discriminant()) != -1 {
        return Err(OracleError::WrongSplitting(p));
    }
    Ok(valuation_sum(pp, g, b, p, a))
}

/// Split primes receive exponent zero for every class.
pub fn theorem1_split_case(p: i64, g: &ClassGroup) -> Result<i64, OracleError> {
    if kronecker_symbol(p, g.discriminant()) != 1 {
        return Err(OracleError::WrongSplitting(p));
    }
    Ok(0)
}

/// The same summation shape at p = D; the result is conjectural and callers
/// must surface the experimental flag.
pub fn ramified_valuation(pp: &PrincipalPart, g: &ClassGroup, b: ClassIdx, a: ClassIdx) -> i64 {
    valuation_sum(pp, g, b, g.discriminant().value(), a)
}

fn valuation_sum(pp: &PrincipalPart, g: &ClassGroup, b: ClassIdx, p: i64, a: ClassIdx) -> i64 {
    let ba2 = g.compose(b, g.square(a));
    let mut total = 0i64;
    for ((_nu, t), c) in &pp.coeffs {
        let tt = -t; // positive
        if tt % p != 0 {
            continue;
        }
        let r = g.rep_count(ba2, tt / p) as i64;
        if r == 0 {
            continue;
        }
        let ci = i64::try_from(c.numer()).expect("integral coefficient");
        debug_assert!(c.is_integer());
        total += ci * r * ord_p(tt, p);
    }
    total
}

/// True when the constant term vanishes (the Theorem hypothesis).
pub fn is_weakly_cuspidal(pp: &PrincipalPart) -> bool {
    pp.c00.is_zero()
}
