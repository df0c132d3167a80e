//! Behavioral invariants of the regularized pairing: the internal split
//! height never changes the answer (the tail is analytic), and the value is
//! bilinear in the input form.

use petersson::{regularized_petersson, PeterssonOptions};
use qexp::rat_i;
use quadclass::{ClassGroup, Discriminant, QuadForm};
use vvforms::seesaw::bracket_g2_theta;
use vvforms::theta::theta_series;

fn setup() -> (vvforms::VectorForm, vvforms::VectorForm) {
    let g = ClassGroup::new(Discriminant::new(23).unwrap()).unwrap();
    let j = g.index_of(&QuadForm { a: 2, b: 1, c: 3 }).unwrap();
    let f = bracket_g2_theta(&g, j, 900).unwrap();
    let th = theta_series(&g, g.identity(), 900).unwrap();
    (f, th)
}

#[test]
fn split_height_independence_and_linearity() {
    let (f, th) = setup();
    let light = PeterssonOptions { tol: 1e-6, lobe_cells: 4, ..Default::default() };

    let v10 = regularized_petersson(&f, &th, &PeterssonOptions { t_split: 10.0, ..light }).unwrap();
    let v50 = regularized_petersson(&f, &th, &PeterssonOptions { t_split: 50.0, ..light }).unwrap();
    let dt = (v10.value.to_f64() - v50.value.to_f64()).abs();
    assert!(dt < 1e-6, "split heights disagree by {dt:.2e}");

    let f2 = f.scale(&rat_i(2));
    let v2 = regularized_petersson(&f2, &th, &PeterssonOptions { t_split: 10.0, ..light }).unwrap();
    let dl = (v2.value.to_f64() - 2.0 * v10.value.to_f64()).abs();
    assert!(dl < 1e-6, "bilinearity violated by {dl:.2e}");

    // tolerance honesty: the refinement-based estimate bounds the coarse
    // versus fine difference seen above
    assert!(v10.error_estimate < 1e-6);
}
