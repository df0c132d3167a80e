//! Heegner polynomials at level 23: H_d(X) is the product of
//! (X - j*_23(z_l)) over the orbit representatives of both residue classes
//! beta and -beta (the two classes carry the same points, so the product is
//! the square of the single-class product). The roots are evaluated
//! numerically at high precision and the coefficients rounded to integers,
//! with the rounding residual as the acceptance gate.

use hp::{Cplx, Real};
use num_bigint::BigInt;
use qexp::QExpansion;

use crate::orbits::{canonical_beta, enumerate_heegner, reduce_for_evaluation};
use crate::HeegnerError;

#[derive(Debug, Clone)]
pub struct HeegnerPoly {
    pub d: i64,
    /// coefficients, constant term first
    pub coeffs: Vec<BigInt>,
    pub rounding_residual: f64,
    pub mantissa_bits: usize,
}

/// Evaluate a q-expansion with integer exponents at q = e(z).
fn eval_at(series: &QExpansion, z: &Cplx, p: usize) -> Cplx {
    assert_eq!(series.exponent_denominator(), 1);
    let q = z.e2pii();
    let mut acc = Cplx::zero(p);
    let mut qn = Cplx::one(p);
    let mut last = 0i64;
    for (n, c) in series.terms() {
        qn = qn.mul(&q.powi(n - last));
        last = *n;
        acc = acc.add(&qn.scale(&Real::from_rat(c, p)));
    }
    acc
}

/// j*_23 at the CM point of the (already reduced) form [a, b, c], with a
/// geometric tail check: |q| = exp(-pi sqrt(d) / a) must leave the
/// truncation below 2^-p0 margin.
fn jstar_at_form(
    jstar: &QExpansion,
    form: (i64, i64, i64),
    p: usize,
) -> Result<Cplx, HeegnerError> {
    let (a, b, c) = form;
    let d = 4 * a * c - b * b;
    let z = Cplx::new(
        Real::from_i64(-b, p) / Real::from_i64(2 * a, p),
        Real::from_i64(d, p).sqrt() / Real::from_i64(2 * a, p),
    );
    // tail bound: coefficients of j* grow subexponentially; dominate them by
    // e^{4 pi sqrt(n/23)} and require the truncation error to sit far below
    // the 1e-6 rounding tolerance even after the polynomial products
    let y = (d as f64).sqrt() / (2.0 * a as f64);
    let logq = -2.0 * std::f64::consts::PI * y;
    let n = jstar.precision() as f64;
    let tail_log = 4.0 * std::f64::consts::PI * (n / 23.0).sqrt() + n * logq;
    if tail_log > -55.0 {
        return Err(HeegnerError::RoundingResidualTooLarge(tail_log.exp(), p));
    }
    Ok(eval_at(jstar, &z, p))
}

/// Compute H_d with exact integer coefficients. `jstar` must carry enough
/// terms for the deepest representative (precision 700+ is ample for
/// d <= 203 at level 23). Retries internally at increasing mantissa sizes.
pub fn heegner_polynomial(
    jstar: &QExpansion,
    level: i64,
    d: i64,
    bits: usize,
) -> Result<HeegnerPoly, HeegnerError> {
    if level != 23 {
        return Err(HeegnerError::NotImplemented(level));
    }
    let beta = canonical_beta(level, d)
        .ok_or(HeegnerError::NonSquareDiscriminant(d, 4 * level))?;
    let orbit = enumerate_heegner(level, d, beta)?;
    let mut last_err = None;
    for attempt in 0..3 {
        let p = bits + attempt * 96;
        let doubled = beta.rem_euclid(level) != 0;
        match try_poly(jstar, level, &orbit.reps, doubled, p) {
            Ok(poly) => {
                return Ok(HeegnerPoly {
                    d,
                    coeffs: poly.0,
                    rounding_residual: poly.1,
                    mantissa_bits: p,
                })
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap())
}

fn try_poly(
    jstar: &QExpansion,
    level: i64,
    reps: &[crate::orbits::HeegnerForm],
    doubled: bool,
    p: usize,
) -> Result<(Vec<BigInt>, f64), HeegnerError> {
    // roots of the single-class product, with multiplicity 1/stab; the
    // (d, -beta) class contributes the same points again, squaring the
    // product. Stabilizers > 1 would give fractional exponents; they cannot
    // receive nonzero divisor coefficients here (b(-D s^2) = 0), so reject.
    let mut roots: Vec<Cplx> = Vec::new();
    for r in reps {
        if r.stab != 1 {
            return Err(HeegnerError::SelfTestFailure(format!(
                "orbit with stabilizer {} at d-form ({}, {}, {})",
                r.stab, r.a, r.b, r.c
            )));
        }
        let red = reduce_for_evaluation(level, (r.a, r.b, r.c));
        roots.push(jstar_at_form(jstar, red, p)?);
    }
    // polynomial product over the set union of the beta and -beta classes:
    // two disjoint copies of the same points when beta != -beta mod 2D, one
    // copy when D | beta (the classes coincide as sets)
    if doubled {
        let copy = roots.clone();
        roots.extend(copy);
    }
    let mut coeffs: Vec<Cplx> = vec![Cplx::one(p)];
    for root in &roots {
        let mut next = vec![Cplx::zero(p); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(root));
        }
        coeffs = next;
    }
    // round to integers
    let mut out = Vec::with_capacity(coeffs.len());
    let mut residual = 0f64;
    for c in &coeffs {
        let (v, r) = c.re.round_nearest();
        residual = residual.max(r.to_f64()).max(c.im.to_f64().abs());
        out.push(v);
    }
    if residual > 1e-6 {
        return Err(HeegnerError::RoundingResidualTooLarge(residual, p));
    }
    Ok((out, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hauptmodul::j_star_23;

    fn poly_str(p: &HeegnerPoly) -> Vec<i64> {
        p.coeffs.iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn small_table_rows() {
        let j = j_star_23(500).unwrap();
        // H_7 = (X + 2)^2 = X^2 + 4X + 4
        let h7 = heegner_polynomial(&j, 23, 7, 192).unwrap();
        assert_eq!(poly_str(&h7), vec![4, 4, 1]);
        assert!(h7.rounding_residual < 1e-6);
        // H_20 = (X^2 + 4X + 5)^2 = X^4 + 8X^3 + 26X^2 + 40X + 25
        let h20 = heegner_polynomial(&j, 23, 20, 192).unwrap();
        assert_eq!(poly_str(&h20), vec![25, 40, 26, 8, 1]);
        // H_115 = (X + 5)^2
        let h115 = heegner_polynomial(&j, 23, 115, 192).unwrap();
        assert_eq!(poly_str(&h115), vec![25, 10, 1]);
    }

    #[test]
    fn residual_decreases_with_precision() {
        let j = j_star_23(500).unwrap();
        let lo = heegner_polynomial(&j, 23, 44, 160).unwrap();
        let hi = heegner_polynomial(&j, 23, 44, 256).unwrap();
        assert!(hi.rounding_residual <= lo.rounding_residual);
        assert_eq!(lo.coeffs, hi.coeffs);
    }

    #[test]
    fn non_level_23_rejected() {
        let j = j_star_23(50).unwrap();
        assert!(matches!(
            heegner_polynomial(&j, 11, 7, 192),
            Err(HeegnerError::NotImplemented(11))
        ));
    }
}
