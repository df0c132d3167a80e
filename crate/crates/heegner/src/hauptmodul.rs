//! The Hauptmodul of the genus-zero curve attached to level 23 with the
//! Fricke involution adjoined:
//!
//! ```text
//! j*_23(z) = ( sum_{a,b} q^{a^2+ab+6b^2} ) / ( eta(z) eta(23z) ) - 3
//!          = q^-1 + 4q + 7q^2 + 13q^3 + 19q^4 + 33q^5 + 47q^6 + 74q^7 + ...
//! ```
//!
//! with zero constant term. The displayed coefficients are a construction
//! self-test.

use qexp::{rat_i, QExpansion};

use crate::HeegnerError;

/// q-expansion of j*_23 (exponent denominator 1) to `prec` terms.
pub fn j_star_23(prec: i64) -> Result<QExpansion, HeegnerError> {
    let p = prec + 3;
    // theta of the principal form x^2 + xy + 6y^2
    let mut terms: Vec<(i64, qexp::Rat)> = Vec::new();
    let bmax = ((4.0 * p as f64 / 23.0).sqrt().ceil()) as i64 + 1;
    for b in -bmax..=bmax {
        // a^2 + ab + 6b^2 < p  =>  (2a + b)^2 < 4p - 23 b^2
        let disc = 4 * p - 23 * b * b;
        if disc < 0 {
            continue;
        }
        let s = (disc as f64).sqrt() as i64 + 2;
        for a in (-(s + b.abs()) / 2 - 2)..=((s + b.abs()) / 2 + 2) {
            let v = a * a + a * b + 6 * b * b;
            if v < p {
                terms.push((v, rat_i(1)));
            }
        }
    }
    let theta = QExpansion::from_terms(1, terms, p);
    // eta(z) eta(23z) = q * prod (1-q^n)(1-q^23n)
    let e1 = vvforms::classical::euler_product(p);
    let e23 = vvforms::classical::euler_product(p / 23 + 2).scale_exponents(23).truncate(p);
    let den = e1.mul(&e23).mul(&QExpansion::monomial(1, 1, rat_i(1), p + 1));
    let j = theta.mul(&den.invert()?).sub(&QExpansion::monomial(1, 0, rat_i(3), p)).truncate(prec);
    // pinned leading coefficients
    let expect: [(i64, i64); 9] =
        [(-1, 1), (0, 0), (1, 4), (2, 7), (3, 13), (4, 19), (5, 33), (6, 47), (7, 74)];
    for (n, c) in expect {
        if j.precision() > n && j.coeff(n) != rat_i(c) {
            return Err(HeegnerError::SelfTestFailure(format!(
                "j*_23 coefficient at q^{n}: got {}, pinned {c}",
                j.coeff(n)
            )));
        }
    }
    Ok(j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinned_expansion() {
        let j = j_star_23(40).unwrap();
        assert_eq!(j.coeff(-1), rat_i(1));
        assert_eq!(j.coeff(0), rat_i(0));
        assert_eq!(j.coeff(7), rat_i(74));
        // integrality throughout
        for (_, c) in j.terms() {
            assert!(c.is_integer());
        }
    }
}
