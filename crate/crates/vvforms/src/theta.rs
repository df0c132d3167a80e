//! Theta series attached to ideal classes, as vector-valued forms over
//! Z/DZ, and the weight-3 cusp form used by the correction terms in the
//! half-integral-weight preimage construction.

use qexp::{rat_i, QExpansion, Rat};
use quadclass::{ClassGroup, ClassIdx};

use crate::group::DiscGroup;
use crate::vector::VectorForm;
use crate::FormsError;

/// Weight-1 theta series of the class B:
/// Theta_{B,nu} = delta_{nu,0} + sum_{t = nu^2 (D), t > 0} (1 + delta_{0,nu}) r_B(t) q^{t/D}.
///
/// This is the literal lattice theta (constant term 1 on the zero
/// component); the (1+delta) weighting is how +-a split between the nu and
/// -nu cosets.
pub fn theta_series(g: &ClassGroup, b: ClassIdx, prec: i64) -> Result<VectorForm, FormsError> {
    let d = g.discriminant().value();
    assert!(d >= 7, "theta construction requires D >= 7 (w = 2)");
    let group = DiscGroup::rank2(d);
    let mut terms: Vec<Vec<(i64, Rat)>> = vec![Vec::new(); d as usize];
    terms[0].push((0, rat_i(1)));
    for t in 1..prec {
        let r = g.rep_count(b, t) as i64;
        if r == 0 {
            continue;
        }
        for nu in 0..d {
            if (nu * nu - t).rem_euclid(d) == 0 {
                let w = if nu == 0 { 2 } else { 1 };
                terms[nu as usize].push((t, rat_i(w * r)));
            }
        }
    }
    let comps = terms
        .into_iter()
        .map(|ts| QExpansion::from_terms(d as u32, ts, prec))
        .collect();
    VectorForm::new(2, group, false, comps)
}

/// The weight-3 cusp form
/// Theta~_nu = sum_{a in o + nu/sqrt(-D)} (a^2 + abar^2) q^{N(a)}.
///
/// Writing a = u + v sqrt(-D) with u = x + y/2, v = y/2 - nu/D over integer
/// (x, y), the exponent is N(a) = u^2 + D v^2 and the coefficient is
/// 2(u^2 - D v^2). All comparisons are exact; the enumeration radius comes
/// from the positive-definite exponent form.
pub fn theta_tilde(g: &ClassGroup, prec: i64) -> Result<VectorForm, FormsError> {
    let d = g.discriminant().value();
    assert!(d >= 7);
    let group = DiscGroup::rank2(d);
    let mut comps = Vec::with_capacity(d as usize);
    for nu in 0..d {
        let mut terms: Vec<(i64, Rat)> = Vec::new();
        // With s = 2u = 2x + y and t = 2Dv = Dy - 2*nu, the exponent
        // numerator over M = D is n = D*N(a) = (D s^2 + t^2) / 4 and the
        // coefficient is 2(u^2 - D v^2) = (D s^2 - t^2) / (2D).
        // Bounds: D^2 v^2 <= n < prec and D u^2 <= n < prec.
        let ybound = {
            let vb = (prec as f64).sqrt() / d as f64;
            let lo = ((-vb + nu as f64 / d as f64) * 2.0).floor() as i64 - 2;
            let hi = ((vb + nu as f64 / d as f64) * 2.0).ceil() as i64 + 2;
            (lo, hi)
        };
        for y in ybound.0..=ybound.1 {
            let t = d * y - 2 * nu;
            for x in x_range(d, y, prec) {
                let s = 2 * x + y;
                let num = (d as i128) * (s as i128) * (s as i128) + (t as i128) * (t as i128);
                debug_assert_eq!(num % 4, 0);
                let n = num / 4;
                if n >= prec as i128 {
                    continue;
                }
                let coeff_num =
                    (d as i128) * (s as i128) * (s as i128) - (t as i128) * (t as i128);
                if coeff_num == 0 {
                    continue;
                }
                let c = Rat::new((coeff_num as i64).into(), (2 * d).into());
                terms.push((n as i64, c));
            }
        }
        comps.push(QExpansion::from_terms(d as u32, terms, prec));
    }
    let f = VectorForm::new(6, group, false, comps)?;
    debug_assert!(f.is_symmetric());
    Ok(f)
}

fn x_range(d: i64, y: i64, prec: i64) -> std::ops::RangeInclusive<i64> {
    // D u^2 <= n < prec  =>  |2x + y| <= 2 sqrt(prec/D)
    let ub = 2.0 * ((prec as f64) / d as f64).sqrt();
    let lo = ((-ub - y as f64) / 2.0).floor() as i64 - 2;
    let hi = ((ub - y as f64) / 2.0).ceil() as i64 + 2;
    lo..=hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use quadclass::Discriminant;

    fn d23() -> ClassGroup {
        ClassGroup::new(Discriminant::new(23).unwrap()).unwrap()
    }

    #[test]
    fn theta_principal_leading_terms() {
        let g = d23();
        let th = theta_series(&g, g.identity(), 120).unwrap();
        // nu = 0: 1 + 2 r_O(23) q^(23/23) + ... ; r_O(23) = 1
        assert_eq!(th.component(0).coeff(0), rat_i(1));
        assert_eq!(th.component(0).coeff(23), rat_i(2));
        // nu = +-1: r_O(1) q^(1/23) = q^(1/23)
        assert_eq!(th.component(1).coeff(1), rat_i(1));
        assert_eq!(th.component(22).coeff(1), rat_i(1));
        assert!(th.is_symmetric());
        th.validate_support().unwrap();
    }

    #[test]
    fn theta_sum_matches_ideal_count_oracle() {
        let g = d23();
        let prec = 200;
        let thetas: Vec<_> =
            (0..g.h()).map(|b| theta_series(&g, b, prec).unwrap()).collect();
        for t in 1..prec {
            let nu = (0..23).find(|v| (v * v - t).rem_euclid(23) == 0);
            let Some(nu) = nu else { continue };
            let w = if nu == 0 { 2 } else { 1 };
            let total: Rat = thetas
                .iter()
                .map(|th| th.component(nu as u32).coeff(t))
                .fold(Rat::from_integer(0.into()), |a, b| a + b);
            assert_eq!(total, rat_i(w * g.total_ideal_count(t)), "t={t}");
        }
    }

    #[test]
    fn theta_tilde_leading() {
        let g = d23();
        let tt = theta_tilde(&g, 100).unwrap();
        // cusp form: zero constant term
        assert!(tt.component(0).floor() > 0);
        // component 0 starts 4q (a = +-1 each contribute 2)
        assert_eq!(tt.component(0).coeff(23), rat_i(4));
        assert!(tt.is_symmetric());
        tt.validate_support().unwrap();
    }
}
