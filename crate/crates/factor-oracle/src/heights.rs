//! Local height pairings between Heegner divisors at finite places, in the
//! closed form valid away from the level:
//!
//! ```text
//!   <x_l, y*_{d2}>_P = log(p) sum_{r = b1 b2 (2)} delta_{d1}(r)
//!                       r_n(( d1 d2 - r^2) / (4 D p)) ord_p((d1 d2 - r^2)/(4D))
//! ```
//!
//! for (p/d1) = -1, and 0 for (p/d1) = +1; the class entering the
//! representation count is n cbar^2 a^2, passed as an ideal class of the
//! field of discriminant -d1. Height values are returned as the exact
//! integer coefficient of log p.

use quadclass::{kronecker_symbol, ClassGroup, ClassIdx};

use crate::OracleError;

/// Coefficient of log p in <x_l, y*_{d2}>_P. `g1` is the class group of
/// discriminant -d1 and `cls` the class of n cbar^2 a^2 in it.
#[allow(clippy::too_many_arguments)]
pub fn local_height(
    g1: &ClassGroup,
    level: i64,
    d1: i64,
    beta1: i64,
    d2: i64,
    beta2: i64,
    p: i64,
    cls: ClassIdx,
) -> Result<i64, OracleError> {
    if d1 != g1.discriminant().value() {
        return Err(OracleError::PreconditionViolated(format!(
            "class group has discriminant {}, not -{d1}",
            -g1.discriminant().value()
        )));
    }
    if p == level || level % p == 0 {
        return Err(OracleError::PreconditionViolated(format!("p = {p} divides the level")));
    }
    // d2/d1 must not be a full square
    if d2 % d1 == 0 {
        let q = d2 / d1;
        let s = (q as f64).sqrt() as i64;
        for c in [s - 1, s, s + 1] {
            if c >= 0 && c * c == q {
                return Err(OracleError::PreconditionViolated(format!(
                    "d2/d1 = {q} is a square"
                )));
            }
        }
    }
    match kronecker_symbol(p, g1.discriminant()) {
        1 => Ok(0),
        -1 => {
            let mut total = 0i64;
            // r^2 < d1 d2, r = beta1 beta2 mod 2
            let prod = d1 * d2;
            let rmax = ((prod as f64).sqrt() as i64) + 1;
            let parity = (beta1 * beta2).rem_euclid(2);
            for r in -rmax..=rmax {
                if r.rem_euclid(2) != parity || r * r >= prod {
                    continue;
                }
                let num = prod - r * r;
                if num % (4 * level) != 0 {
                    continue;
                }
                let m = num / (4 * level);
                if m % p != 0 {
                    continue;
                }
                let delta = if r % d1 == 0 { 2 } else { 1 };
                let rc = g1.rep_count(cls, m / p) as i64;
                if rc == 0 {
                    continue;
                }
                total += delta * rc * ord_p(m, p);
            }
            Ok(total)
        }
        _ => Err(OracleError::WrongSplitting(p)),
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

#[cfg(test)]
mod tests {
    use super::*;
    use quadclass::Discriminant;

    #[test]
    fn split_prime_vanishes() {
        let g = ClassGroup::new(Discriminant::new(23).unwrap()).unwrap();
        // (2/23) = +1
        let v = local_height(&g, 23, 23, 23, 51, 5, 2, g.identity()).unwrap();
        assert_eq!(v, 0);
    }

    #[test]
    fn finite_support() {
        let g = ClassGroup::new(Discriminant::new(23).unwrap()).unwrap();
        // terms vanish once r^2 > d1 d2: tiny d2 gives zero at large p
        let v = local_height(&g, 23, 23, 23, 7, 9, 19, g.identity()).unwrap();
        assert_eq!(v, 0);
    }

    #[test]
    fn square_ratio_rejected() {
        let g = ClassGroup::new(Discriminant::new(23).unwrap()).unwrap();
        assert!(local_height(&g, 23, 23, 23, 4 * 23, 0, 7, g.identity()).is_err());
    }
}
