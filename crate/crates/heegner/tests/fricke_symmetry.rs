//! The beta and -beta residue classes carry the same geometric points, so
//! their orbit value-multisets agree and the assembled polynomial does not
//! depend on the sign choice.

use heegner::orbits::{canonical_beta, enumerate_heegner, reduce_for_evaluation};
use heegner::j_star_23;
use hp::{Cplx, Real};
use qexp::QExpansion;

fn jstar_value(jstar: &QExpansion, form: (i64, i64, i64), p: usize) -> (f64, f64) {
    let (a, b, c) = form;
    let d = 4 * a * c - b * b;
    let z = Cplx::new(
        Real::from_i64(-b, p) / Real::from_i64(2 * a, p),
        Real::from_i64(d, p).sqrt() / Real::from_i64(2 * a, p),
    );
    let q = z.e2pii();
    let mut acc = Cplx::zero(p);
    let mut qn = Cplx::one(p);
    let mut last = 0i64;
    for (n, cf) in jstar.terms() {
        qn = qn.mul(&q.powi(n - last));
        last = *n;
        acc = acc.add(&qn.scale(&Real::from_rat(cf, p)));
    }
    (acc.re.to_f64(), acc.im.to_f64())
}

#[test]
fn beta_and_minus_beta_orbits_carry_equal_values() {
    let jstar = j_star_23(700).unwrap();
    for d in [20i64, 44, 63] {
        let beta = canonical_beta(23, d).unwrap();
        let o1 = enumerate_heegner(23, d, beta).unwrap();
        let o2 = enumerate_heegner(23, d, (-beta).rem_euclid(46)).unwrap();
        assert_eq!(o1.reps.len(), o2.reps.len(), "d={d}");
        let mut v1: Vec<(i64, i64)> = o1
            .reps
            .iter()
            .map(|r| {
                let (re, im) = jstar_value(&jstar, reduce_for_evaluation(23, (r.a, r.b, r.c)), 128);
                ((re * 1e9).round() as i64, (im * 1e9).round() as i64)
            })
            .collect();
        let mut v2: Vec<(i64, i64)> = o2
            .reps
            .iter()
            .map(|r| {
                let (re, im) = jstar_value(&jstar, reduce_for_evaluation(23, (r.a, r.b, r.c)), 128);
                ((re * 1e9).round() as i64, (im * 1e9).round() as i64)
            })
            .collect();
        v1.sort();
        v2.sort();
        assert_eq!(v1, v2, "value multisets differ at d={d}");
    }
}
