//! Standard pipelines for the discriminant-23 worked example, with caching
//! of the expensive intermediates.

use std::collections::BTreeMap;

use heegner::{borcherds_value, j_star_23, FactorVector};
use num_traits::Zero;
use qexp::{QExpansion, Rat};
use quadclass::{ClassGroup, ClassIdx, Discriminant, QuadForm};
use vvforms::seesaw::{self, Preimage};
use vvforms::vector::VectorForm;
use vvforms::DiscGroup;

use crate::cache::Cache;

pub fn group(d: i64) -> Result<ClassGroup, quadclass::ClassGroupError> {
    ClassGroup::new(Discriminant::new(d)?)
}

pub fn group23() -> ClassGroup {
    group(23).expect("23 is a valid discriminant")
}

pub fn class_j(g: &ClassGroup) -> ClassIdx {
    g.index_of(&QuadForm { a: 2, b: 1, c: 3 }).expect("the nonprincipal class of D=23")
}

/// f = 23 [E4 E6/Delta, Theta_J]_1 at series precision `prec` (units 1/23).
pub fn worked_f(g: &ClassGroup, prec: i64) -> VectorForm {
    let j = class_j(g);
    seesaw::bracket_g2_theta(g, j, prec).expect("bracket pipeline")
}

/// The preimage h with T(h) = f, to `prec92` terms (units 1/92), cached.
pub fn worked_h(cache: &Cache, g: &ClassGroup, prec92: i64) -> Preimage {
    let (comps, corrections): (Vec<QExpansion>, Vec<(i64, String)>) =
        cache.get_or_compute("h23", "worked", prec92, || {
            let f = worked_f(g, (prec92 + 23) / 4 + 8);
            let pre = seesaw::build_preimage(g, &f, prec92).expect("preimage");
            (
                pre.h.components().to_vec(),
                pre.corrections.iter().map(|(s, c)| (*s, c.to_string())).collect(),
            )
        });
    let h = VectorForm::new(1, DiscGroup::rank3(23), false, comps).expect("cached h components");
    let corrections = corrections
        .into_iter()
        .map(|(s, c)| (s, parse_rat(&c)))
        .collect();
    Preimage { h, corrections }
}

fn parse_rat(s: &str) -> Rat {
    match s.split_once('/') {
        None => Rat::from_integer(s.parse().expect("integer")),
        Some((n, d)) => Rat::new(n.parse().expect("num"), d.parse().expect("den")),
    }
}

/// d -> h(-d) over the full principal part.
pub fn h_coefficient_map(h: &VectorForm) -> BTreeMap<i64, Rat> {
    let mut out = BTreeMap::new();
    let floor = h.components().iter().map(|c| c.floor()).min().unwrap_or(0);
    for d in 1..=(-floor) {
        if (0..46).any(|l: i64| (l * l + d).rem_euclid(92) == 0) {
            let c = seesaw::b_coefficient(h, 23, -d);
            if !c.is_zero() {
                out.insert(d, c);
            }
        }
    }
    out
}

/// The full product pipeline: Hauptmodul, polynomials, CM values, exponent
/// vector.
pub fn full_product(
    cache: &Cache,
    g: &ClassGroup,
    bits: usize,
) -> (Vec<heegner::borcherds::ProductRow>, FactorVector) {
    let pre = worked_h(cache, g, 240);
    let coeffs = h_coefficient_map(&pre.h);
    let jstar = j_star_23(800).expect("hauptmodul self-test");
    borcherds_value(&jstar, &coeffs, bits).expect("product pipeline")
}

/// Theta series at a given class, cached.
pub fn theta_cached(cache: &Cache, g: &ClassGroup, b: ClassIdx, prec: i64) -> VectorForm {
    let d = g.discriminant().value();
    let label = format!("d{}-b{}", d, b);
    let comps: Vec<QExpansion> = cache.get_or_compute("theta", &label, prec, || {
        vvforms::theta::theta_series(g, b, prec)
            .expect("theta series")
            .components()
            .to_vec()
    });
    VectorForm::new(2, DiscGroup::rank2(d), false, comps).expect("cached theta")
}
