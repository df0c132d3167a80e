//! High-precision numerical evaluation of the regularized weight-1 pairing
//!
//! ```text
//!   (f, Theta)^reg = lim_{T -> inf} int_{F_T} <f(tau), conj Theta(tau)> y^-1 dx dy
//! ```
//!
//! over the truncated fundamental domain. The domain splits into
//!
//! - the strip y in [1, T]: the x-integral is exact (exponent differences
//!   within a component are integers), leaving one incomplete-gamma-type
//!   integral per surviving coefficient pair; its T -> infinity limit is the
//!   exponential integral E1, evaluated by panel Gauss-Legendre quadrature;
//! - the lower lobe sqrt(3)/2 <= y < 1, |tau| > 1: smooth 2-D quadrature.
//!
//! The t = 0 term is absent precisely when f has zero constant term, which
//! is the regularizability condition; a nonzero constant term is an error.

use hp::{gauss_legendre, Cplx, Real};
use num_traits::Zero;
use qexp::Rat;
use rayon::prelude::*;
use vvforms::modularity::eval_form;
use vvforms::VectorForm;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PeterssonError {
    #[error("regularization diverges: f has nonzero constant term {0}")]
    NonZeroConstantTerm(String),
    #[error("series precision too small for the requested tolerance")]
    InsufficientSeriesPrecision,
    #[error("quadrature failed to reach tolerance: estimate {0}")]
    ToleranceNotMet(f64),
    #[error("forms error: {0}")]
    Forms(#[from] vvforms::FormsError),
}

/// <f(tau), conj Theta(tau)> / y at a point, by truncated summation.
pub fn pairing_integrand(
    f: &VectorForm,
    theta: &VectorForm,
    tau: &Cplx,
    p: usize,
) -> Result<Cplx, PeterssonError> {
    let fv = eval_form(f, tau, p, 1e-25).map_err(|_| PeterssonError::InsufficientSeriesPrecision)?;
    let tv = eval_form(theta, tau, p, 1e-25)
        .map_err(|_| PeterssonError::InsufficientSeriesPrecision)?;
    let mut acc = Cplx::zero(p);
    for (a, b) in fv.iter().zip(tv.iter()) {
        acc = acc.add(&a.mul(&b.conj()));
    }
    Ok(acc.scale(&(Real::one(p) / tau.im.clone())))
}

/// E1(x) = int_x^inf e^-u / u du by panel Gauss-Legendre with a rigorous
/// geometric cutoff.
pub fn exp_integral_e1(x: &Real, p: usize) -> Real {
    assert!(!x.is_negative() && !x.is_zero());
    // length so that the dropped tail e^-(x+len) / (x+len) < 2^-(p+8)
    let len = Real::from_f64(0.6931 * (p as f64 + 16.0), p);
    let nodes = gauss_legendre(32, p);
    let panel = Real::from_i64(4, p);
    let mut acc = Real::zero(p);
    let mut lo = x.clone();
    let hi = x + &len;
    while lo.cmp(&hi) == std::cmp::Ordering::Less {
        let next = {
            let n = &lo + &panel;
            if n.cmp(&hi) == std::cmp::Ordering::Greater {
                hi.clone()
            } else {
                n
            }
        };
        let half = (&next - &lo) / Real::from_i64(2, p);
        let mid = (&next + &lo) / Real::from_i64(2, p);
        for (t, w) in &nodes {
            let u = &mid + &(&half * t);
            acc = &acc + &(&(w * &half) * &(u.neg().exp() / u));
        }
        lo = next;
    }
    acc
}

/// Options for the evaluation.
#[derive(Debug, Clone, Copy)]
pub struct PeterssonOptions {
    /// target absolute tolerance of the quadrature
    pub tol: f64,
    /// mantissa bits
    pub bits: usize,
    /// split height between numeric strip quadrature and the analytic tail
    pub t_split: f64,
    /// initial x-subdivisions of the lobe
    pub lobe_cells: usize,
}

impl Default for PeterssonOptions {
    fn default() -> Self {
        PeterssonOptions { tol: 1e-8, bits: 128, t_split: 12.0, lobe_cells: 8 }
    }
}

pub struct PeterssonValue {
    pub value: Real,
    pub error_estimate: f64,
    pub strip_part: Real,
    pub lobe_part: Real,
}

/// The regularized pairing. `f` and `theta` must live over the same group
/// with equal exponent denominators D.
pub fn regularized_petersson(
    f: &VectorForm,
    theta: &VectorForm,
    opts: &PeterssonOptions,
) -> Result<PeterssonValue, PeterssonError> {
    let p = opts.bits;
    let d = f.components()[0].exponent_denominator() as i64;
    assert_eq!(theta.components()[0].exponent_denominator() as i64, d);

    // regularizability: zero constant term everywhere paired with theta's
    // constant term (only (nu, t) = (0, 0) matters)
    let c00 = f.component(0).coeff(0);
    if !c00.is_zero() {
        return Err(PeterssonError::NonZeroConstantTerm(c00.to_string()));
    }

    // coefficient pairs c_nu(t) a_nu(t), t > 0
    let mut pairs: Vec<(i64, Rat)> = Vec::new();
    for nu in f.group().elements() {
        let fc = f.component(nu);
        let tc = theta.component(nu);
        let prec = fc.precision().min(tc.precision());
        for (t, c) in fc.terms() {
            if *t <= 0 || *t >= prec {
                continue;
            }
            let a = tc.coeff(*t);
            if !a.is_zero() {
                pairs.push((*t, c * &a));
            }
        }
    }
    // tail check: the largest usable t must make e^{-4 pi t / D} negligible
    let tmax = pairs.iter().map(|(t, _)| *t).max().unwrap_or(0);
    let min_prec = f
        .group()
        .elements()
        .map(|nu| f.component(nu).precision().min(theta.component(nu).precision()))
        .min()
        .unwrap();
    if (4.0 * std::f64::consts::PI * min_prec as f64 / d as f64) < (-(opts.tol.ln()) + 30.0) {
        return Err(PeterssonError::InsufficientSeriesPrecision);
    }
    let _ = tmax;

    // strip part: sum of (ca)_t [ quad int_1^S + E1(x_t S) ],  x_t = 4 pi t / D
    let four_pi_over_d = Real::pi(p) * Real::from_i64(4, p) / Real::from_i64(d, p);
    let strip_tail: Real = pairs
        .par_iter()
        .map(|(t, ca)| {
            let x = &four_pi_over_d * &Real::from_i64(*t, p) * Real::from_f64(opts.t_split, p);
            Real::from_rat(ca, p) * exp_integral_e1(&x, p)
        })
        .reduce(|| Real::zero(p), |a, b| a + b);
    let strip_quad = strip_quadrature(&pairs, d, 1.0, opts.t_split, 48, p);
    let strip_refined = strip_quadrature(&pairs, d, 1.0, opts.t_split, 64, p);
    let strip = &strip_refined + &strip_tail;

    // lobe part with one refinement for the error estimate
    let lobe = lobe_quadrature(f, theta, opts.lobe_cells, p)?;
    let lobe_fine = lobe_quadrature(f, theta, opts.lobe_cells * 2, p)?;
    let lobe_err = (&lobe - &lobe_fine).abs().to_f64();
    let strip_err = (&strip_quad - &strip_refined).abs().to_f64();
    let err = lobe_err + strip_err + opts.tol * 0.01;
    if err > opts.tol {
        return Err(PeterssonError::ToleranceNotMet(err));
    }
    Ok(PeterssonValue {
        value: &strip + &lobe_fine,
        error_estimate: err,
        strip_part: strip,
        lobe_part: lobe_fine,
    })
}

/// int_{y0}^{y1} sum_t (ca)_t e^{-x_t y} dy / y by panel Gauss-Legendre.
/// The sum at each node is evaluated from one exponential via incremental
/// integer powers (exponents x_t = (4 pi / D) t are integer multiples).
fn strip_quadrature(pairs: &[(i64, Rat)], d: i64, y0: f64, y1: f64, n: usize, p: usize) -> Real {
    let nodes = gauss_legendre(n, p);
    let four_pi_over_d = Real::pi(p) * Real::from_i64(4, p) / Real::from_i64(d, p);
    let mut coefs: Vec<(i64, Real)> =
        pairs.iter().map(|(t, ca)| (*t, Real::from_rat(ca, p))).collect();
    coefs.sort_by_key(|(t, _)| *t);
    // geometric panels: [1, 2], [2, 4], ... keep the integrand well resolved
    let mut bounds = vec![y0];
    let mut cur = y0;
    while cur < y1 {
        cur = (cur * 2.0).min(y1);
        bounds.push(cur);
    }
    let mut acc = Real::zero(p);
    for w in bounds.windows(2) {
        let lo = Real::from_f64(w[0], p);
        let hi = Real::from_f64(w[1], p);
        let half = (&hi - &lo) / Real::from_i64(2, p);
        let mid = (&hi + &lo) / Real::from_i64(2, p);
        let panel: Real = nodes
            .par_iter()
            .map(|(tn, wn)| {
                let y = &mid + &(&half * tn);
                let base = (&four_pi_over_d.neg() * &y).exp(); // e^{-4 pi y / D}
                let mut s = Real::zero(p);
                let mut pow = Real::one(p);
                let mut last_t = 0i64;
                for (t, ca) in &coefs {
                    pow = &pow * &base.powi(t - last_t);
                    last_t = *t;
                    s = &s + &(ca * &pow);
                }
                wn * &half * &(s / &y)
            })
            .reduce(|| Real::zero(p), |a, b| a + b);
        acc = &acc + &panel;
    }
    acc
}

/// Quadrature of the pairing integrand over the lobe
/// {sqrt(1 - x^2) < y < 1, |x| < 1/2}.
fn lobe_quadrature(
    f: &VectorForm,
    theta: &VectorForm,
    xcells: usize,
    p: usize,
) -> Result<Real, PeterssonError> {
    let nodes = gauss_legendre(20, p);
    let one = Real::one(p);
    let results: Vec<Result<Real, PeterssonError>> = (0..xcells)
        .into_par_iter()
        .map(|i| {
            // x in [-1/2, 1/2] split into cells
            let xa = -0.5 + i as f64 / xcells as f64;
            let xb = -0.5 + (i + 1) as f64 / xcells as f64;
            let xa = Real::from_f64(xa, p);
            let xb = Real::from_f64(xb, p);
            let hx = (&xb - &xa) / Real::from_i64(2, p);
            let mx = (&xb + &xa) / Real::from_i64(2, p);
            let mut cell = Real::zero(p);
            for (tx, wx) in &nodes {
                let x = &mx + &(&hx * tx);
                // y from sqrt(1 - x^2) to 1
                let ylo = (&one - &(&x * &x)).sqrt();
                let hy = (&one - &ylo) / Real::from_i64(2, p);
                let my = (&one + &ylo) / Real::from_i64(2, p);
                for (ty, wy) in &nodes {
                    let y = &my + &(&hy * ty);
                    let tau = Cplx::new(x.clone(), y.clone());
                    let v = pairing_integrand(f, theta, &tau, p)?;
                    cell = &cell + &(&(wx * &hx) * &(&(wy * &hy) * &v.re));
                }
            }
            Ok(cell)
        })
        .collect();
    let mut acc = Real::zero(p);
    for r in results {
        acc = &acc + &r?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use quadclass::{ClassGroup, Discriminant};
    use vvforms::theta::theta_series;

    #[test]
    fn e1_matches_known_values() {
        let p = 128;
        // E1(1) = 0.21938393439552027368...
        let v = exp_integral_e1(&Real::one(p), p);
        assert!((v.to_f64() - 0.21938393439552027368).abs() < 1e-15);
        // E1(10) = 4.15696892968532438e-6
        let v = exp_integral_e1(&Real::from_i64(10, p), p);
        assert!((v.to_f64() - 4.156968929685324277e-6).abs() < 1e-18);
    }

    #[test]
    fn zero_form_gives_zero() {
        let g = ClassGroup::new(Discriminant::new(23).unwrap()).unwrap();
        let th = theta_series(&g, g.identity(), 700).unwrap();
        let z = VectorForm::zero(2, th.group().clone(), 23, 700);
        let v = regularized_petersson(&z, &th, &PeterssonOptions::default()).unwrap();
        assert!(v.value.to_f64().abs() < 1e-12);
    }

    #[test]
    fn nonzero_constant_term_rejected() {
        let g = ClassGroup::new(Discriminant::new(23).unwrap()).unwrap();
        let th = theta_series(&g, g.identity(), 700).unwrap();
        // theta itself has constant term 1: not regularizable
        assert!(matches!(
            regularized_petersson(&th, &th, &PeterssonOptions::default()),
            Err(PeterssonError::NonZeroConstantTerm(_))
        ));
    }

    #[test]
    fn integrand_is_real_after_symmetrization() {
        let g = ClassGroup::new(Discriminant::new(23).unwrap()).unwrap();
        let th = theta_series(&g, g.identity(), 900).unwrap();
        let j = (0..g.h()).find(|i| *i != g.identity()).unwrap();
        let f = vvforms::seesaw::bracket_g2_theta(&g, j, 900).unwrap();
        let p = 128;
        let tau = Cplx::new(Real::from_f64(0.3, p), Real::from_f64(0.95, p));
        let taum = Cplx::new(Real::from_f64(-0.3, p), Real::from_f64(0.95, p));
        let v1 = pairing_integrand(&f, &th, &tau, p).unwrap();
        let v2 = pairing_integrand(&f, &th, &taum, p).unwrap();
        // value(tau) = conj(value(-conj tau))
        assert!((&v1.re - &v2.re).abs().to_f64() < 1e-25);
        assert!((&v1.im + &v2.im).abs().to_f64() < 1e-25);
    }
}
