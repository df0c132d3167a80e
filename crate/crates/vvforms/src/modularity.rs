//! Numerical verification of the vector-valued transformation law on the
//! generators T and S, using truncated q-expansions in extended floats.

use hp::{Cplx, Real};
use num_traits::ToPrimitive;
use qexp::QExpansion;

use crate::vector::VectorForm;
use crate::weil::WeilRep;
use crate::FormsError;

/// Evaluate a truncated q-expansion at tau (Im tau > 0), with a crude
/// geometric tail bound. Errors out if the tail at this height cannot be
/// pushed below `tail_tol`.
pub fn eval_series(
    f: &QExpansion,
    tau: &Cplx,
    p: usize,
    tail_tol: f64,
) -> Result<Cplx, FormsError> {
    let m = f.exponent_denominator() as i64;
    let w = tau
        .scale(&(Real::one(p) / Real::from_i64(m, p)))
        .e2pii();
    let mut acc = Cplx::zero(p);
    let mut wn = Cplx::one(p);
    let mut last_n = 0i64;
    let mut max_tail_coeff = 0f64;
    for (n, c) in f.terms() {
        wn = wn.mul(&w.powi(n - last_n));
        last_n = *n;
        let cf = Real::from_rat(c, p);
        acc = acc.add(&wn.scale(&cf));
        if *n > f.precision() - f.precision() / 5 {
            let mag = c.to_f64().unwrap_or(f64::MAX).abs();
            max_tail_coeff = max_tail_coeff.max(mag);
        }
    }
    // tail estimate: sum_{n >= prec} C r^(n/m) <= C r^(prec/m) / (1 - r)
    let y = tau.im.to_f64();
    let r = (-2.0 * std::f64::consts::PI * y / m as f64).exp();
    let c_est = max_tail_coeff.max(1.0) * 1e6; // coefficient growth margin
    let tail = c_est * r.powf(f.precision() as f64) / (1.0 - r);
    if !tail.is_finite() || tail > tail_tol {
        return Err(FormsError::InsufficientPrecision);
    }
    Ok(acc)
}

/// Evaluate all components at tau.
pub fn eval_form(
    f: &VectorForm,
    tau: &Cplx,
    p: usize,
    tail_tol: f64,
) -> Result<Vec<Cplx>, FormsError> {
    f.components().iter().map(|c| eval_series(c, tau, p, tail_tol)).collect()
}

/// Max over the generators T, S and over components of
/// |f(gamma tau) - (c tau + d)^k rho(gamma) f(tau)|.
pub fn modularity_residual(
    f: &VectorForm,
    rep: &WeilRep,
    samples: &[Cplx],
    p: usize,
) -> Result<Real, FormsError> {
    assert_eq!(rep.group(), f.group());
    let tail_tol = 1e-22;
    let mut worst = Real::zero(p);
    let t_diag = rep.t_numeric(p, f.dual());
    let s_mat = rep.s_numeric(p, f.dual());
    let k2 = f.weight2();
    for tau in samples {
        let ftau = eval_form(f, tau, p, tail_tol)?;

        // T: f(tau + 1) = rho(T) f(tau)
        let tau1 = tau.add(&Cplx::one(p));
        let ftau1 = eval_form(f, &tau1, p, tail_tol)?;
        for (i, v) in ftau1.iter().enumerate() {
            let rhs = t_diag[i].mul(&ftau[i]);
            track_max(&mut worst, &v.sub(&rhs).abs());
        }

        // S: f(-1/tau) = tau^k rho(S) f(tau)
        let minv = Cplx::one(p).neg().div(tau);
        let fminv = eval_form(f, &minv, p, tail_tol)?;
        // tau^k = exp(k log tau), principal branch (Im tau > 0)
        let k = Real::from_i64(k2, p) / Real::from_i64(2, p);
        let tau_k = tau.ln().scale(&k).exp();
        for (i, v) in fminv.iter().enumerate() {
            let mut rhs = Cplx::zero(p);
            for (j, fj) in ftau.iter().enumerate() {
                rhs = rhs.add(&s_mat[i][j].mul(fj));
            }
            rhs = rhs.mul(&tau_k);
            track_max(&mut worst, &v.sub(&rhs).abs());
        }
    }
    Ok(worst)
}

fn track_max(worst: &mut Real, x: &Real) {
    if x.cmp(worst) == std::cmp::Ordering::Greater {
        *worst = x.clone();
    }
}

/// Standard sample points near the unit circle, where both tau and -1/tau
/// keep enough height for the truncated series.
pub fn default_samples(p: usize) -> Vec<Cplx> {
    [
        (0.0, 1.0),
        (0.3, 0.98),
        (0.15, 1.03),
        (-0.45, 0.93),
        (-0.23, 1.08),
    ]
    .iter()
    .map(|(x, y)| Cplx::new(Real::from_f64(*x, p), Real::from_f64(*y, p)))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DiscGroup;
    use crate::theta;
    use quadclass::{ClassGroup, Discriminant};

    #[test]
    fn theta_is_modular_at_i() {
        let g = ClassGroup::new(Discriminant::new(23).unwrap()).unwrap();
        let th = theta::theta_series(&g, g.identity(), 1600).unwrap();
        let rep = WeilRep::new(DiscGroup::rank2(23), (2, 0)).unwrap();
        let p = 160;
        let tau = vec![Cplx::new(Real::zero(p), Real::one(p))];
        let r = modularity_residual(&th, &rep, &tau, p).unwrap();
        assert!(r.to_f64() < 1e-20, "residual {}", r.to_f64());
    }

    #[test]
    fn zero_form_residual_zero() {
        let rep = WeilRep::new(DiscGroup::rank2(23), (2, 0)).unwrap();
        let z = VectorForm::zero(2, DiscGroup::rank2(23), 23, 4000);
        let p = 128;
        let r = modularity_residual(&z, &rep, &default_samples(p), p).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn insufficient_precision_detected() {
        let g = ClassGroup::new(Discriminant::new(23).unwrap()).unwrap();
        let th = theta::theta_series(&g, g.identity(), 30).unwrap();
        let rep = WeilRep::new(DiscGroup::rank2(23), (2, 0)).unwrap();
        let p = 128;
        let low = vec![Cplx::new(Real::zero(p), Real::from_f64(0.5, p))];
        assert!(matches!(
            modularity_residual(&th, &rep, &low, p),
            Err(FormsError::InsufficientPrecision)
        ));
    }
}
