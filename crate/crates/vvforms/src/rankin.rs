//! Rankin-Cohen brackets with the normalized derivative q d/dq.
//!
//! [f, g]_n = sum_{r+s=n} (-1)^s C(n+k-1, s) C(n+l-1, r) f^(r) g^(s),
//! where k, l are the weights of f and g and C is the generalized binomial
//! (rational arguments allowed, so half-integral weights work). The sign
//! placement is the one that reproduces the pinned coefficient table for
//! 23[E4 E6/Delta, Theta]_1; see the golden tests.

use num_bigint::BigInt;
use qexp::{QExpansion, Rat};

use crate::vector::VectorForm;
use crate::FormsError;

/// Generalized binomial C(x, j) = x(x-1)...(x-j+1)/j! for rational x.
fn binomial(x: &Rat, j: u32) -> Rat {
    let mut num = Rat::from_integer(1.into());
    let mut den = BigInt::from(1);
    for i in 0..j {
        num *= x - Rat::from_integer(BigInt::from(i));
        den *= BigInt::from(i as i64 + 1);
    }
    num / Rat::from_integer(den)
}

fn iterated_derivative(f: &QExpansion, r: u32) -> QExpansion {
    let mut g = f.clone();
    for _ in 0..r {
        g = g.derivative();
    }
    g
}

/// Scalar bracket; `wt2_*` are twice the weights.
pub fn bracket(
    f: &QExpansion,
    wt2_f: i64,
    g: &QExpansion,
    wt2_g: i64,
    n: u32,
) -> QExpansion {
    let k = Rat::new(wt2_f.into(), 2.into());
    let l = Rat::new(wt2_g.into(), 2.into());
    let nr = Rat::from_integer(BigInt::from(n as i64));
    let one = Rat::from_integer(1.into());
    let mut acc: Option<QExpansion> = None;
    for s in 0..=n {
        let r = n - s;
        let mut c = binomial(&(&nr + &k - &one), s) * binomial(&(&nr + &l - &one), r);
        if s % 2 == 1 {
            c = -c;
        }
        let term = iterated_derivative(f, r).mul(&iterated_derivative(g, s)).scale(&c);
        acc = Some(match acc {
            None => term,
            Some(t) => t.add(&term),
        });
    }
    acc.expect("n >= 0")
}

/// Bracket of a scalar series against a vector form, componentwise.
/// The result has weight k + l + 2n.
pub fn bracket_vector(
    f: &QExpansion,
    wt2_f: i64,
    g: &VectorForm,
    n: u32,
) -> Result<VectorForm, FormsError> {
    let comps = g
        .components()
        .iter()
        .map(|gc| bracket(f, wt2_f, gc, g.weight2(), n))
        .collect();
    VectorForm::new(wt2_f + g.weight2() + 4 * n as i64, g.group().clone(), g.dual(), comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qexp::rat_i;

    #[test]
    fn zeroth_bracket_is_product() {
        let f = QExpansion::from_terms(1, [(0, rat_i(2)), (1, rat_i(3))], 10);
        let g = QExpansion::from_terms(1, [(1, rat_i(5))], 10);
        assert_eq!(bracket(&f, 4, &g, 6, 0), f.mul(&g));
    }

    #[test]
    fn first_bracket_antisymmetric_for_equal_weights() {
        let f = QExpansion::from_terms(1, [(0, rat_i(1)), (1, rat_i(-7)), (3, rat_i(2))], 12);
        let g = QExpansion::from_terms(1, [(1, rat_i(4)), (2, rat_i(9))], 12);
        let fg = bracket(&f, 8, &g, 8, 1);
        let gf = bracket(&g, 8, &f, 8, 1);
        assert_eq!(fg, gf.scale(&rat_i(-1)));
    }

    #[test]
    fn binomial_rational_arguments() {
        // C(-2, 1) = -2, C(1/2, 2) = -1/8
        assert_eq!(binomial(&Rat::new((-2).into(), 1.into()), 1), rat_i(-2));
        assert_eq!(
            binomial(&Rat::new(1.into(), 2.into()), 2),
            Rat::new((-1).into(), 8.into())
        );
    }
}
