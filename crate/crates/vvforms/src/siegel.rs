//! Siegel theta kernel of the rank-3 lattice L at a point of the upper
//! half-plane model of its Grassmannian. Used termwise by the see-saw
//! identity test; no regularized integrals are taken here.

use hp::{Cplx, Real};

/// The positive 2-plane v+(z) for z in the upper half-plane, spanned by
/// X = Re W, Y = Im W with W = (D z^2, 2 D z, 1) in (alpha, beta, gamma)
/// coordinates.
pub struct GrassPoint {
    d: i64,
    x: [Real; 3],
    y: [Real; 3],
    xx: Real,
    yy: Real,
}

impl GrassPoint {
    pub fn new(d: i64, z: &Cplx, p: usize) -> Self {
        let df = Real::from_i64(d, p);
        let z2 = z.mul(z);
        let x = [
            &df * &z2.re,
            Real::from_i64(2 * d, p) * z.re.clone(),
            Real::one(p),
        ];
        let y = [
            &df * &z2.im,
            Real::from_i64(2 * d, p) * z.im.clone(),
            Real::zero(p),
        ];
        // doubled bilinear form (v, w) = bv bw/(2D) - (av cw + aw cv)
        let pair = |u: &[Real; 3], v: &[Real; 3]| -> Real {
            &(&u[1] * &v[1]) / &Real::from_i64(2 * d, p) - &(&u[0] * &v[2]) - &(&u[2] * &v[0])
        };
        let xx = pair(&x, &x);
        let yy = pair(&y, &y);
        // X and Y are orthogonal with equal norm by construction
        debug_assert!((&xx - &yy).abs().to_f64() < 1e-10 * xx.to_f64().abs());
        GrassPoint { d, x, y, xx, yy }
    }

    fn pair_int(&self, v: (i64, i64, i64), p: usize) -> (Real, Real) {
        let vr = [
            Real::from_i64(v.0, p),
            Real::from_i64(v.1, p),
            Real::from_i64(v.2, p),
        ];
        let pairf = |u: &[Real; 3]| -> Real {
            &(&vr[1] * &u[1]) / &Real::from_i64(2 * self.d, p)
                - &(&vr[0] * &u[2])
                - &(&vr[2] * &u[0])
        };
        (pairf(&self.x), pairf(&self.y))
    }

    /// (q(l_{v+}), q(l_{v-})) for l with integer (alpha, beta, gamma).
    pub fn split_norms(&self, v: (i64, i64, i64), p: usize) -> (Real, Real) {
        let (lx, ly) = self.pair_int(v, p);
        let two = Real::from_i64(2, p);
        let qplus = (&(&lx * &lx) / &self.xx + &(&ly * &ly) / &self.yy) / &two;
        // q(v) = beta^2/(4D) - alpha gamma, exact in i128 then floated
        let qv_num = (v.1 as i128) * (v.1 as i128) - 4 * (self.d as i128) * (v.0 as i128) * (v.2 as i128);
        let qv = Real::from_i64(qv_num as i64, p) / Real::from_i64(4 * self.d, p);
        let qminus = &qv - &qplus;
        (qplus, qminus)
    }
}

/// Component lambda of the (unweighted) Siegel theta sum
/// sum_{l in L', beta = lambda (2D)} e(q(l_{v+}) tau + q(l_{v-}) taubar),
/// truncated at majorant q+ - q- <= mu_max.
pub fn siegel_theta_l_component(
    gp: &GrassPoint,
    lambda: u32,
    tau: &Cplx,
    mu_max: f64,
    radius: i64,
    p: usize,
) -> Cplx {
    let d = gp.d;
    let mut acc = Cplx::zero(p);
    let mut beta = lambda as i64;
    // all beta = lambda mod 2D within |beta| <= 2D*radius
    let betas: Vec<i64> = {
        let mut v = Vec::new();
        while beta <= 2 * d * radius {
            v.push(beta);
            beta += 2 * d;
        }
        let mut b2 = lambda as i64 - 2 * d;
        while b2 >= -2 * d * radius {
            v.push(b2);
            b2 -= 2 * d;
        }
        v
    };
    for b in betas {
        for alpha in -radius..=radius {
            for gamma in -radius..=radius {
                let (qp, qm) = gp.split_norms((alpha, b, gamma), p);
                let mu = (&qp - &qm).to_f64();
                if mu > mu_max {
                    continue;
                }
                // e(q+ tau + q- taubar)
                let arg = Cplx::new(
                    &(&qp + &qm) * &tau.re,
                    &(&qp - &qm) * &tau.im,
                );
                acc = acc.add(&arg.e2pii());
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grassmann_point_orthogonality() {
        let p = 96;
        let z = Cplx::new(Real::from_f64(0.5, p), Real::from_f64(0.10425720702853739, p));
        let gp = GrassPoint::new(23, &z, p);
        // X, Y norms positive and equal
        assert!(gp.xx.to_f64() > 0.0);
        assert!((gp.xx.to_f64() - gp.yy.to_f64()).abs() < 1e-12);
    }

    #[test]
    fn split_norms_add_up() {
        let p = 96;
        let z = Cplx::new(Real::from_f64(0.25, p), Real::from_f64(0.8, p));
        let gp = GrassPoint::new(23, &z, p);
        let (qp, qm) = gp.split_norms((3, 7, -2), p);
        let q = 7.0 * 7.0 / (4.0 * 23.0) - 3.0 * (-2.0);
        assert!(((&qp + &qm).to_f64() - q).abs() < 1e-12);
        assert!(qp.to_f64() >= 0.0);
        assert!(qm.to_f64() <= 1e-12);
    }
}
