//! The two weak Jacobi forms of index 1 and their theta decompositions.
//!
//! Working representation: q-expansions whose coefficients are Laurent
//! polynomials in w = e(z/2) (half powers of the elliptic variable keep the
//! odd theta function polynomial). The two generators are built from first
//! principles,
//!
//! ```text
//!   phi_{-2,1} = theta_11(tau,z)^2 / eta(tau)^6,
//!   phi_{0,1}  = 4 ( th2(z)^2/th2^2 + th3(z)^2/th3^2 + th4(z)^2/th4^2 ),
//! ```
//!
//! and their theta components (psi_0, psi_1), (phi_0, phi_1) are read off
//! from the decomposition c(n, r) -> C(4n - r^2). The four pinned leading
//! expansions act as a self-test gate; a mismatch aborts construction.

use std::collections::BTreeMap;

use num_traits::Zero;

use qexp::{rat_i, QExpansion, Rat};

use crate::classical;
use crate::FormsError;

/// Laurent polynomial in w (exponents are powers of w = zeta^{1/2}).
type ZPoly = BTreeMap<i64, Rat>;

/// q-expansion (denominator `QDEN` = 8) with ZPoly coefficients.
#[derive(Debug, Clone)]
struct JExp {
    terms: BTreeMap<i64, ZPoly>,
    prec: i64, // in 1/8 units
}

const QDEN: i64 = 8;

impl JExp {
    fn zero(prec: i64) -> Self {
        JExp { terms: BTreeMap::new(), prec }
    }

    fn insert(&mut self, n: i64, w: i64, c: Rat) {
        if n >= self.prec {
            return;
        }
        let p = self.terms.entry(n).or_default();
        let e = p.entry(w).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            p.remove(&w);
        }
    }

    fn floor(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(self.prec)
    }

    fn mul(&self, other: &Self) -> Self {
        let prec = (self.prec + other.floor()).min(other.prec + self.floor());
        let mut out = JExp::zero(prec);
        for (na, pa) in &self.terms {
            for (nb, pb) in &other.terms {
                let n = na + nb;
                if n >= prec {
                    continue;
                }
                for (wa, ca) in pa {
                    for (wb, cb) in pb {
                        out.insert(n, wa + wb, ca * cb);
                    }
                }
            }
        }
        out
    }

    fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let mut out = JExp::zero(prec);
        for (n, p) in self.terms.iter().chain(other.terms.iter()) {
            for (w, c) in p {
                out.insert(*n, *w, c.clone());
            }
        }
        out
    }

    /// Multiply by a one-variable series (exponent denominator dividing 8).
    fn mul_series(&self, s: &QExpansion) -> Self {
        let s8 = s.rescale(QDEN as u32);
        let prec = (self.prec + s8.floor()).min(s8.precision() + self.floor());
        let mut out = JExp::zero(prec);
        for (na, pa) in &self.terms {
            for (nb, cb) in s8.terms() {
                let n = na + nb;
                if n >= prec {
                    continue;
                }
                for (wa, ca) in pa {
                    out.insert(n, *wa, ca * cb);
                }
            }
        }
        out
    }

    fn scale(&self, c: &Rat) -> Self {
        let mut out = JExp::zero(self.prec);
        for (n, p) in &self.terms {
            for (w, v) in p {
                out.insert(*n, *w, v * c);
            }
        }
        out
    }

    /// Specialize z = 0 (sum the Laurent coefficients).
    fn at_z0(&self) -> QExpansion {
        let terms = self.terms.iter().map(|(n, p)| {
            let mut acc = Rat::zero();
            for c in p.values() {
                acc += c;
            }
            (*n, acc)
        });
        QExpansion::from_terms(QDEN as u32, terms, self.prec)
    }
}

/// theta_11 = sum_m (-1)^m q^{(2m+1)^2/8} w^{2m+1}.
fn theta11(prec: i64) -> JExp {
    let mut t = JExp::zero(prec);
    let mut m = 0i64;
    loop {
        let e = (2 * m + 1) * (2 * m + 1);
        if e >= prec && (2 * (-m - 1) + 1).pow(2) >= prec {
            break;
        }
        for mm in [m, -m - 1] {
            let ee = (2 * mm + 1) * (2 * mm + 1);
            if ee < prec {
                let sign = if mm.rem_euclid(2) == 0 { 1 } else { -1 };
                t.insert(ee, 2 * mm + 1, rat_i(sign));
            }
        }
        m += 1;
    }
    t
}

/// theta_2 = sum q^{(2m+1)^2/8} w^{2m+1}, theta_3 = sum q^{m^2/2} w^{2m},
/// theta_4 = sum (-1)^m q^{m^2/2} w^{2m}.
fn theta234(prec: i64) -> (JExp, JExp, JExp) {
    let mut t2 = JExp::zero(prec);
    let mut m = 0i64;
    while (2 * m + 1) * (2 * m + 1) < prec {
        t2.insert((2 * m + 1) * (2 * m + 1), 2 * m + 1, rat_i(1));
        t2.insert((2 * m + 1) * (2 * m + 1), -(2 * m + 1), rat_i(1));
        m += 1;
    }
    let mut t3 = JExp::zero(prec);
    let mut t4 = JExp::zero(prec);
    t3.insert(0, 0, rat_i(1));
    t4.insert(0, 0, rat_i(1));
    let mut k = 1i64;
    while 4 * k * k < prec {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        for w in [2 * k, -2 * k] {
            t3.insert(4 * k * k, w, rat_i(1));
            t4.insert(4 * k * k, w, rat_i(sign));
        }
        k += 1;
    }
    (t2, t3, t4)
}

/// Theta decomposition of a weak Jacobi form of index 1: components
/// h_kappa(tau) = sum_{d} C(d) q^{d/4} with C(4n - r^2) = c(n, r), kappa = r
/// mod 2. Inconsistent coefficients abort with `SelfTestFailure`.
fn decompose(j: &JExp, name: &str) -> Result<(QExpansion, QExpansion), FormsError> {
    let mut comp: [BTreeMap<i64, Rat>; 2] = [BTreeMap::new(), BTreeMap::new()];
    for (n8, p) in &j.terms {
        for (w, c) in p {
            if w.rem_euclid(2) != 0 || n8 % 8 != 0 {
                return Err(FormsError::SelfTestFailure(format!(
                    "{name}: non-integral (q, zeta) support ({n8}/8, w^{w})"
                )));
            }
            let r = w / 2;
            let d4 = n8 / 2 - r * r; // 4n - r^2 in quarter units
            let kappa = (r.rem_euclid(2)) as usize;
            if let Some(old) = comp[kappa].get(&d4) {
                if old != c {
                    return Err(FormsError::SelfTestFailure(format!(
                        "{name}: theta decomposition inconsistent at d={d4}, r={r}"
                    )));
                }
            } else {
                comp[kappa].insert(d4, c.clone());
            }
        }
    }
    // component kappa is known at d iff some readable (n, r) realizes it;
    // the earliest is r = kappa (n = (d + kappa^2)/4)
    let precq4 = j.prec / 2; // 4 * (prec8/8) in quarter units
    let p0 = precq4;
    let p1 = precq4 - 1;
    let [c0, c1] = comp;
    Ok((
        QExpansion::from_terms(4, c0.into_iter().filter(|(d, _)| *d < p0), p0),
        QExpansion::from_terms(4, c1.into_iter().filter(|(d, _)| *d < p1), p1),
    ))
}

/// The four theta components (psi_0, psi_1, phi_0, phi_1) of the index-1
/// generators, to `prec4` quarter-power terms, with the pinned leading
/// coefficients verified.
pub fn weak_jacobi_components(
    prec4: i64,
) -> Result<(QExpansion, QExpansion, QExpansion, QExpansion), FormsError> {
    let prec8 = 2 * prec4 + 16;
    let precq = prec8 / 8 + 2;

    // psi: theta_11^2 / eta^6
    let t11 = theta11(prec8);
    let t11sq = t11.mul(&t11);
    let eta6 = {
        let e = classical::eta(24 * precq).pow(6).expect("eta unit");
        // exponents are multiples of 6: reduce 24 -> 4, then invert
        e.reduce_denominator()
    };
    let eta6_inv = eta6.invert()?;
    let psi = t11sq.mul_series(&eta6_inv);
    let (psi0, psi1) = decompose(&psi, "phi_{-2,1}")?;

    // phi: 4 sum theta_j(z)^2 / theta_j(0)^2
    let (t2, t3, t4) = theta234(prec8);
    let mut phi: Option<JExp> = None;
    for t in [&t2, &t3, &t4] {
        let tsq = t.mul(t);
        let t0sq = tsq.at_z0();
        let term = tsq.mul_series(&t0sq.invert()?);
        phi = Some(match phi {
            None => term,
            Some(acc) => acc.add(&term),
        });
    }
    let phi = phi.unwrap().scale(&rat_i(4));
    let (phi0, phi1) = decompose(&phi, "phi_{0,1}")?;

    // pinned leading expansions
    let gate: [(&QExpansion, &[(i64, i64)], &str); 4] = [
        (&psi0, &[(0, -2), (4, -12), (8, -56), (12, -208)], "psi0"),
        (&psi1, &[(-1, 1), (3, 8), (7, 39), (11, 152)], "psi1"),
        (&phi0, &[(0, 10), (4, 108), (8, 808), (12, 4016)], "phi0"),
        (&phi1, &[(-1, 1), (3, -64), (7, -513), (11, -2752)], "phi1"),
    ];
    for (series, expect, name) in gate {
        for (n, c) in expect {
            if series.precision() > *n && series.coeff(*n) != rat_i(*c) {
                return Err(FormsError::SelfTestFailure(format!(
                    "{name} coefficient at q^({n}/4): got {}, pinned {c}",
                    series.coeff(*n)
                )));
            }
        }
    }
    Ok((
        psi0.truncate(prec4),
        psi1.truncate(prec4),
        phi0.truncate(prec4),
        phi1.truncate(prec4),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components_match_pinned_tables() {
        let (psi0, psi1, phi0, phi1) = weak_jacobi_components(60).unwrap();
        assert_eq!(psi0.coeff(0), rat_i(-2));
        assert_eq!(psi1.coeff(-1), rat_i(1));
        assert_eq!(phi0.coeff(0), rat_i(10));
        assert_eq!(phi1.coeff(3), rat_i(-64));
        assert_eq!(psi1.coeff(11), rat_i(152));
        assert_eq!(phi0.coeff(12), rat_i(4016));
    }

    #[test]
    fn theta_relations() {
        let p4 = 120;
        let (psi0, psi1, phi0, phi1) = weak_jacobi_components(p4).unwrap();
        let (t0, t1) = classical::jacobi_thetas(p4);
        let z = psi0.mul(&t0).add(&psi1.mul(&t1));
        assert!(z.is_zero(), "psi0 t0 + psi1 t1 = {z}");
        let twelve = phi0.mul(&t0).add(&phi1.mul(&t1));
        assert_eq!(twelve.coeff(0), rat_i(12));
        for (n, _) in twelve.terms() {
            assert_eq!(*n, 0, "phi0 t0 + phi1 t1 has a spurious term at {n}");
        }
    }

    #[test]
    fn psi_supported_on_correct_residues() {
        let (psi0, psi1, _, _) = weak_jacobi_components(40).unwrap();
        for (n, _) in psi0.terms() {
            assert_eq!(n.rem_euclid(4), 0);
        }
        for (n, _) in psi1.terms() {
            assert_eq!(n.rem_euclid(4), 3);
        }
    }
}
