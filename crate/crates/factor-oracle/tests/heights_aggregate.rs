//! Aggregate cross-check of the local-height formula against the closed
//! valuation formula: summing b(-d)-weighted heights over the divisor of
//! the product expansion reproduces the Theorem-style valuations. Run at
//! p = 7 for both class columns (the calibration prime).

use factor_oracle::{local_height, theorem1_valuation, PrincipalPart};
use num_traits::Zero;
use quadclass::{ClassGroup, Discriminant, QuadForm};
use vvforms::seesaw::{b_coefficient, bracket_g2_theta, build_preimage};

#[test]
fn aggregate_heights_match_formula_at_p7() {
    let g = ClassGroup::new(Discriminant::new(23).unwrap()).unwrap();
    let j = g.index_of(&QuadForm { a: 2, b: 1, c: 3 }).unwrap();
    let f = bracket_g2_theta(&g, j, 80).unwrap();
    let pre = build_preimage(&g, &f, 240).unwrap();
    let pp = PrincipalPart::of_form(&f);

    // the CM point z_m has discriminant -23 with beta1 = 23; the ideal
    // classes c and n are principal, so the r-count class is A^2
    for a in [g.identity(), j] {
        let mut total = qexp::Rat::zero();
        for d in 1..=203i64 {
            let beta2 = (0..46).find(|b| (b * b + d).rem_euclid(92) == 0);
            let Some(beta2) = beta2 else { continue };
            let hc = b_coefficient(&pre.h, 23, -d);
            if hc.is_zero() {
                continue;
            }
            let lh = local_height(&g, 23, 23, 23, d, beta2, 7, g.square(a)).unwrap();
            total += hc * qexp::rat_i(lh);
        }
        let expect = theorem1_valuation(&pp, &g, g.identity(), 7, a).unwrap();
        assert!(total.is_integer());
        assert_eq!(i64::try_from(total.numer()).unwrap(), expect, "class column {a}");
    }
}
