//! Fixed library of classical level-one q-expansions.
//!
//! Everything is generated from defining product/sum formulas in exact
//! rational arithmetic; nothing is transcribed. The normalizations are:
//! E4 = 1 + 240 sum sigma_3(n) q^n, E6 = 1 - 504 sum sigma_5(n) q^n,
//! Delta = q prod (1-q^n)^24, j = E4^3 / Delta.

use qexp::{rat_i, QExpansion};

use crate::FormsError;

/// sigma_k divisor sums up to n < prec.
fn divisor_sums(k: u32, prec: i64) -> Vec<i64> {
    let mut s = vec![0i64; prec.max(0) as usize];
    for d in 1..prec {
        let mut dk = 1i64;
        for _ in 0..k {
            dk = dk.saturating_mul(d);
        }
        let mut n = d;
        while n < prec {
            s[n as usize] = s[n as usize].saturating_add(dk);
            n += d;
        }
    }
    s
}

/// Eisenstein series E4 or E6 (exponent denominator 1, weight k).
pub fn eisenstein(k: u32, prec: i64) -> Result<QExpansion, FormsError> {
    let (pow, c) = match k {
        4 => (3, 240i64),
        6 => (5, -504),
        _ => return Err(FormsError::WeightUnknown(2 * k as i64)),
    };
    let sig = divisor_sums(pow, prec);
    let mut terms = vec![(0i64, rat_i(1))];
    for n in 1..prec {
        terms.push((n, rat_i(c * sig[n as usize])));
    }
    Ok(QExpansion::from_terms(1, terms, prec))
}

/// Euler product prod_{n>=1} (1 - q^n) via the pentagonal number theorem
/// (the eta function without its q^{1/24} prefactor).
pub fn euler_product(prec: i64) -> QExpansion {
    let mut terms = vec![(0i64, rat_i(1))];
    let mut k = 1i64;
    loop {
        let g1 = k * (3 * k - 1) / 2;
        let g2 = k * (3 * k + 1) / 2;
        if g1 >= prec && g2 >= prec {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        if g1 < prec {
            terms.push((g1, rat_i(sign)));
        }
        if g2 < prec {
            terms.push((g2, rat_i(sign)));
        }
        k += 1;
    }
    QExpansion::from_terms(1, terms, prec)
}

/// Dedekind eta as a series with exponent denominator 24:
/// eta = q^{1/24} prod (1 - q^n).
pub fn eta(prec24: i64) -> QExpansion {
    // prec24 counts q^{1/24} steps
    let e = euler_product(prec24 / 24 + 2).rescale(24);
    let qshift = QExpansion::monomial(24, 1, rat_i(1), prec24 + 24);
    e.mul(&qshift).truncate(prec24)
}

/// Ramanujan Delta = q prod (1-q^n)^24.
pub fn delta(prec: i64) -> QExpansion {
    let e = euler_product(prec);
    let e24 = e.pow(24).expect("pow of unit");
    e24.mul(&QExpansion::monomial(1, 1, rat_i(1), prec + 1)).truncate(prec)
}

pub fn delta_inv(prec: i64) -> QExpansion {
    // Delta has floor 1; to know Delta^{-1} for n < prec we need Delta to
    // n < prec + 2.
    delta(prec + 2).invert().expect("Delta has leading coefficient 1")
}

/// Klein j-invariant: E4^3 / Delta = q^{-1} + 744 + 196884 q + ...
pub fn j_invariant(prec: i64) -> QExpansion {
    let e4 = eisenstein(4, prec + 2).unwrap();
    e4.pow(3).unwrap().mul(&delta_inv(prec + 1)).truncate(prec)
}

/// theta_0 = sum_n q^{n^2}, theta_1 = sum_{n in 1/2+Z} q^{n^2}; exponent
/// denominator 4 (so theta_1 has exponents (2k+1)^2 / 4).
pub fn jacobi_thetas(prec4: i64) -> (QExpansion, QExpansion) {
    let mut t0 = vec![(0i64, rat_i(1))];
    let mut n = 1i64;
    while 4 * n * n < prec4 {
        t0.push((4 * n * n, rat_i(2)));
        n += 1;
    }
    let mut t1 = Vec::new();
    let mut k = 0i64;
    while (2 * k + 1) * (2 * k + 1) < prec4 {
        t1.push(((2 * k + 1) * (2 * k + 1), rat_i(2)));
        k += 1;
    }
    (QExpansion::from_terms(4, t0, prec4), QExpansion::from_terms(4, t1, prec4))
}

/// The unique weight 2-2k weakly holomorphic form g_k = q^{-1} + O(1) on
/// SL2(Z), for the k with S_2k = 0: g_k = E_{14-2k} / Delta.
pub fn weakly_holo_gk(k: u32, prec: i64) -> Result<QExpansion, FormsError> {
    let e = match k {
        2 => eisenstein(4, prec + 3)?.mul(&eisenstein(6, prec + 3)?),
        3 => eisenstein(4, prec + 3)?.pow(2)?,
        4 => eisenstein(6, prec + 3)?,
        5 => eisenstein(4, prec + 3)?,
        7 => QExpansion::one(1, prec + 3),
        _ => return Err(FormsError::KNotSupported(k as i64)),
    };
    Ok(e.mul(&delta_inv(prec + 2)).truncate(prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eisenstein_leading_terms() {
        let e4 = eisenstein(4, 10).unwrap();
        assert_eq!(e4.coeff(0), rat_i(1));
        assert_eq!(e4.coeff(1), rat_i(240));
        assert_eq!(e4.coeff(2), rat_i(240 * 9));
        let e6 = eisenstein(6, 10).unwrap();
        assert_eq!(e6.coeff(0), rat_i(1));
        assert_eq!(e6.coeff(1), rat_i(-504));
    }

    #[test]
    fn delta_expansion() {
        let d = delta(8);
        assert_eq!(d.coeff(1), rat_i(1));
        assert_eq!(d.coeff(2), rat_i(-24));
        assert_eq!(d.coeff(3), rat_i(252));
        assert_eq!(d.coeff(4), rat_i(-1472));
    }

    #[test]
    fn e4_cubed_minus_e6_squared_is_1728_delta() {
        let p = 60;
        let e4 = eisenstein(4, p).unwrap();
        let e6 = eisenstein(6, p).unwrap();
        let lhs = e4.pow(3).unwrap().sub(&e6.pow(2).unwrap());
        let rhs = delta(p).scale(&rat_i(1728));
        assert_eq!(lhs.truncate(p - 2), rhs.truncate(p - 2));
    }

    #[test]
    fn j_first_coefficients() {
        let j = j_invariant(4);
        assert_eq!(j.coeff(-1), rat_i(1));
        assert_eq!(j.coeff(0), rat_i(744));
        assert_eq!(j.coeff(1), rat_i(196884));
        assert_eq!(j.coeff(2), rat_i(21493760));
    }

    #[test]
    fn delta_times_inverse() {
        let p = 40;
        let prod = delta(p + 2).mul(&delta_inv(p));
        assert_eq!(prod.coeff(0), rat_i(1));
        for n in prod.floor()..prod.precision() {
            if n != 0 {
                assert_eq!(prod.coeff(n), rat_i(0));
            }
        }
        // delta_inv leading terms: q^-1 + 24 + 324 q + ...
        let di = delta_inv(3);
        assert_eq!(di.coeff(-1), rat_i(1));
        assert_eq!(di.coeff(0), rat_i(24));
        assert_eq!(di.coeff(1), rat_i(324));
    }

    #[test]
    fn theta_expansions() {
        let (t0, t1) = jacobi_thetas(40);
        assert_eq!(t0.coeff(0), rat_i(1));
        assert_eq!(t0.coeff(4), rat_i(2));
        assert_eq!(t0.coeff(16), rat_i(2));
        assert_eq!(t0.coeff(36), rat_i(2));
        assert_eq!(t1.coeff(1), rat_i(2));
        assert_eq!(t1.coeff(9), rat_i(2));
        assert_eq!(t1.coeff(25), rat_i(2));
        // product supported on exponents = 1/4 mod 1
        let prod = t0.mul(&t1);
        for (n, _) in prod.terms() {
            assert_eq!(n.rem_euclid(4), 1);
        }
    }

    #[test]
    fn gk_normalizations() {
        for k in [2u32, 3, 4, 5, 7] {
            let g = weakly_holo_gk(k, 6).unwrap();
            assert_eq!(g.coeff(-1), rat_i(1), "g_{k} leading term");
            assert_eq!(g.floor(), -1);
        }
        let g2 = weakly_holo_gk(2, 4).unwrap();
        assert_eq!(g2.coeff(0), rat_i(-240)); // E4 E6 / Delta = q^-1 - 240 - ...
        let g7 = weakly_holo_gk(7, 4).unwrap();
        assert_eq!(g7.coeff(0), rat_i(24)); // Delta^{-1}
        assert!(weakly_holo_gk(6, 4).is_err());
    }

    #[test]
    fn gk_times_delta_is_holomorphic() {
        for k in [2u32, 3, 4, 5, 7] {
            let g = weakly_holo_gk(k, 30).unwrap();
            let gd = g.mul(&delta(32));
            assert!(gd.floor() >= 0, "g_{k} * Delta has a pole");
        }
    }

    #[test]
    fn eta_leading() {
        let e = eta(100);
        assert_eq!(e.coeff(1), rat_i(1)); // q^{1/24}
        assert_eq!(e.coeff(25), rat_i(-1)); // -q^{25/24}
    }
}
