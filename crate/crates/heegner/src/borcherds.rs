//! Evaluation of the Borcherds product at the CM point -2 - rho and the
//! assembly of the full factorization: for the preimage h of f,
//!
//! ```text
//!   ord_pi(alpha) = sum_d h(-d) ord_pi( H_d(-2 - rho) ),
//! ```
//!
//! with every H_d value factored exactly in Z[rho]. The per-prime exponent
//! vector must come out integral; the rho-power and its sign are reported
//! alongside.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use qexp::Rat;
use rayon::prelude::*;

use crate::cubic::{check_pi_basis, factor, CubicInt, Factorization};
use crate::polys::{heegner_polynomial, HeegnerPoly};
use crate::HeegnerError;

/// Exponent vector over the pi basis with unit part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorVector {
    pub exps: BTreeMap<&'static str, i64>,
    pub rho_pow: i64,
    pub negative: bool,
}

/// Horner evaluation of an integer polynomial at -2 - rho.
pub fn evaluate_at_cm(coeffs: &[BigInt]) -> CubicInt {
    let x = CubicInt::new(-2, -1, 0);
    let mut acc = CubicInt::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(&x).add(&CubicInt::from_bigs(c.clone(), BigInt::zero(), BigInt::zero()));
    }
    acc
}

/// Per-d data of the product expansion.
#[derive(Debug, Clone)]
pub struct ProductRow {
    pub d: i64,
    pub coefficient: Rat,
    pub poly: HeegnerPoly,
    pub value: CubicInt,
    pub factorization: Factorization,
}

/// Evaluate the full product: `h_coeffs` maps d to the coefficient h(-d) of
/// the weight-1/2 preimage (rational; the combined exponents must be
/// integers). Returns the rows and the total factorization of alpha.
pub fn borcherds_value(
    jstar: &qexp::QExpansion,
    h_coeffs: &BTreeMap<i64, Rat>,
    bits: usize,
) -> Result<(Vec<ProductRow>, FactorVector), HeegnerError> {
    check_pi_basis()?;
    let ds: Vec<i64> = h_coeffs
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(d, _)| *d)
        .collect();
    let polys: Vec<HeegnerPoly> = ds
        .par_iter()
        .map(|d| heegner_polynomial(jstar, 23, *d, bits))
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::with_capacity(polys.len());
    for poly in polys {
        let value = evaluate_at_cm(&poly.coeffs);
        let factorization = factor(&value)?;
        rows.push(ProductRow {
            d: poly.d,
            coefficient: h_coeffs[&poly.d].clone(),
            poly,
            value,
            factorization,
        });
    }
    // alpha exponents: sum_d h(-d) * exps(H_d value); rationals that must
    // collapse to integers
    let mut acc: BTreeMap<&'static str, Rat> = BTreeMap::new();
    let mut rho_acc = Rat::zero();
    for row in &rows {
        for (name, e) in &row.factorization.exps {
            let entry = acc.entry(name).or_insert_with(Rat::zero);
            *entry += &row.coefficient * Rat::from_integer((*e).into());
        }
        rho_acc += &row.coefficient * Rat::from_integer(row.factorization.rho_pow.into());
        // sign: h(-d) * (negative part) matters only for odd integer
        // multiplicity; |alpha| is what is compared downstream
    }
    let mut exps = BTreeMap::new();
    for (name, v) in acc {
        if !v.is_integer() {
            return Err(HeegnerError::NonIntegralExponents(format!("{name}: {v}")));
        }
        let e = i64::try_from(v.numer()).map_err(|_| {
            HeegnerError::NonIntegralExponents(format!("{name} exponent too large"))
        })?;
        if e != 0 {
            exps.insert(name, e);
        }
    }
    if !rho_acc.is_integer() {
        return Err(HeegnerError::NonIntegralExponents(format!("rho: {rho_acc}")));
    }
    let rho_pow = i64::try_from(rho_acc.numer())
        .map_err(|_| HeegnerError::NonIntegralExponents("rho exponent too large".into()))?;
    Ok((rows, FactorVector { exps, rho_pow, negative: false }))
}

/// log |alpha| under the real embedding, from a factor vector.
pub fn log_abs_alpha(v: &FactorVector, p: usize) -> hp::Real {
    let f = Factorization {
        exps: v.exps.clone(),
        rho_pow: v.rho_pow,
        negative: v.negative,
    };
    f.log_abs(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qexp::rat_i;

    #[test]
    fn evaluate_linear_square() {
        // (X + 2)^2 at -2 - rho: rho^2
        let v = evaluate_at_cm(&[4.into(), 4.into(), 1.into()]);
        assert_eq!(v, CubicInt::new(0, 0, 1));
    }

    #[test]
    fn single_row_product() {
        // only d = 7 with coefficient b: alpha-part = rho^(2b)
        let j = crate::hauptmodul::j_star_23(500).unwrap();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(7, rat_i(3));
        let (rows, total) = borcherds_value(&j, &coeffs, 192).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(total.exps.is_empty());
        assert_eq!(total.rho_pow, 6);
    }
}
