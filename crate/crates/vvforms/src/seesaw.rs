//! The signature (2,1) lattice L, its norm -1/4 vectors, the see-saw map
//! T_{L,N}, and the construction of the weight-1/2 preimage h of a given
//! weight-1 form f.
//!
//! Coordinates: an element of L' is written (alpha, beta, gamma), meaning
//! the matrix [[alpha/D, beta/2D], [beta/2D, gamma]], with
//! q(v) = beta^2/(4D) - alpha*gamma and doubled bilinear form
//! (v, w) = (beta_v beta_w)/(2D) - (alpha_v gamma_w + alpha_w gamma_v).
//! L itself consists of the triples with 2D | beta, and the L'/L coset of a
//! vector is beta mod 2D.

use num_integer::Integer;
use num_traits::Zero;
use qexp::{rat, rat_i, QExpansion, Rat};
use quadclass::{ClassGroup, ClassIdx, QuadForm};

use crate::classical;
use crate::group::DiscGroup;
use crate::jacobi;
use crate::rankin;
use crate::theta;
use crate::vector::{tensor_pair, GroupSplit, VectorForm};
use crate::FormsError;

/// A vector m in L' of norm -1/4 together with its quadratic-form data.
/// The triple (a, b, c) is the binary form a z^2 + b z + c of discriminant
/// -D with D | a and D | b; the matrix is m = (1/D)[[c, -b/2], [-b/2, a]]
/// and the CM point z_m = (-b + i sqrt(D)) / (2a).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MVector {
    pub d: i64,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    /// class of the fractional ideal z_m Z + Z
    pub ideal_class: ClassIdx,
}

impl MVector {
    /// (alpha, beta, gamma) coordinates of m in L'.
    pub fn coords(&self) -> (i64, i64, i64) {
        (self.c, -self.b, self.a / self.d)
    }

    /// q(m), as a check: always -1/4.
    pub fn norm4(&self) -> i64 {
        // 4 q(m) = b^2/D - 4ac/D = (b^2 - 4ac)/D = -1
        (self.b * self.b - 4 * self.a * self.c) / self.d
    }
}

/// Find a norm -1/4 vector m whose ideal z_m Z + Z lies in the class C:
/// transform the reduced form of C by SL2(Z) into [a, b, c] with
/// D | a, D | b, choosing the smallest such a and normalizing b into
/// [-a, a).
pub fn find_m_vector(g: &ClassGroup, c_class: ClassIdx) -> MVector {
    let d = g.discriminant().value();
    let q = *g.form(c_class);
    // search primitive (p, r) minimizing Q(p,r) = 0 mod D over a small box;
    // Q(p, r) = 0 mod D iff 2 a p + b r = 0 mod D (D odd prime, D does not
    // divide a for a reduced form)
    let mut best: Option<(i64, i64, i64)> = None; // (value, p, r)
    let bound = 2 * d;
    for r in -bound..=bound {
        for p in -bound..=bound {
            if (p, r) == (0, 0) || p.gcd(&r) != 1 {
                continue;
            }
            if (2 * q.a * p + q.b * r).rem_euclid(d) != 0 {
                continue;
            }
            let val = q.value(p, r);
            debug_assert!(val > 0 && val % d == 0);
            if best.map_or(true, |(v, _, _)| val < v) {
                best = Some((val, p, r));
            }
        }
    }
    let (a_new, p, r) = best.expect("a multiple of D is always represented");
    // complete (p, r) to an SL2 matrix [[p, s], [r, t]] with p t - s r = 1
    let (g1, u, v) = ext_gcd(p, r); // u p + v r = 1
    debug_assert_eq!(g1, 1);
    let (s, t) = (-v, u);
    // transformed form coefficients
    let b_new = 2 * (q.a * p * s + q.c * r * t) + q.b * (p * t + s * r);
    let c_new = q.value(s, t);
    debug_assert_eq!(b_new * b_new - 4 * a_new * c_new, -d);
    debug_assert_eq!(a_new.rem_euclid(d), 0);
    debug_assert_eq!(b_new.rem_euclid(d), 0);
    // normalize b into [-a, a) by z -> z + k (preserves D-divisibility)
    let _ = c_new;
    let mut b = b_new;
    let k = -((b + a_new).div_euclid(2 * a_new));
    b += 2 * k * a_new;
    let c = (b * b + d) / (4 * a_new);
    debug_assert!((-a_new..a_new).contains(&b));
    let ideal_class = g
        .index_of(&QuadForm { a: a_new, b, c })
        .expect("SL2-equivalent form stays in the class");
    debug_assert_eq!(ideal_class, c_class);
    MVector { d, a: a_new, b, c, ideal_class }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        return (a.abs(), a.signum(), 0);
    }
    let (g, u, v) = ext_gcd(b, a.rem_euclid(b));
    (g, v, u - a.div_euclid(b) * v)
}

/// Basis and Gram data of N = L? m^perp (rank 2, positive definite,
/// |N'/N| = D), plus the isometry witnesses from the ideal (a) c^2.
#[derive(Debug, Clone)]
pub struct OrthoLattice {
    pub basis: [(i64, i64, i64); 2],
    /// doubled Gram matrix (v_i, v_j)
    pub gram: [[i64; 2]; 2],
}

/// Compute an integer basis of N = L cap m^perp and verify |N'/N| = D and
/// that the images of the ideal generators land in N.
pub fn orthogonal_lattice(m: &MVector) -> Result<OrthoLattice, FormsError> {
    let d = m.d;
    // (v, m) = 0 for v in L with coords (A, B, C) (beta = 2 D B):
    //   (a/D) A + b B + c C = 0   ... after scaling by -1
    let (g1c, g2c, g3c) = (m.a / d, m.b, m.c);
    let (d12, u, v) = ext_gcd3_prefix(g1c, g2c);
    let e = d12.gcd(&g3c);
    let k1 = (g2c / d12, -g1c / d12, 0i64);
    let k2 = (-u * g3c / e, -v * g3c / e, d12 / e);
    debug_assert_eq!(g1c * k1.0 + g2c * k1.1 + g3c * k1.2, 0);
    debug_assert_eq!(g1c * k2.0 + g2c * k2.1 + g3c * k2.2, 0);
    // doubled bilinear form on L in (A, B, C) coordinates:
    // (v, w) = 2 D Bv Bw - (Av Cw + Aw Cv)
    let pair = |x: (i64, i64, i64), y: (i64, i64, i64)| -> i64 {
        2 * d * x.1 * y.1 - (x.0 * y.2 + y.0 * x.2)
    };
    let gram = [[pair(k1, k1), pair(k1, k2)], [pair(k2, k1), pair(k2, k2)]];
    let det = gram[0][0] as i128 * gram[1][1] as i128 - gram[0][1] as i128 * gram[1][0] as i128;
    if det != d as i128 || gram[0][0] <= 0 {
        return Err(FormsError::IsometryCheckFailure(format!(
            "Gram determinant {det}, expected {d}"
        )));
    }
    // isometry witnesses: iota(s) = sbar Z + s Zbar for s = a and s = a z_m,
    // in (A, B, C) coordinates; their norms must be N(a) = a^2 and
    // N(a z_m) = a c.
    let w1 = ((m.b * m.b - d) / 2, -(m.a / d) * m.b, 2 * m.a * m.a / d);
    let w2 = (-m.b * m.c, (m.b * m.b + d) / (2 * d), -m.a * m.b / d);
    for (w, nsq) in [(w1, m.a * m.a), (w2, m.a * m.c)] {
        // q(v) = D B^2 - A C in these coordinates
        let qw = d * w.1 * w.1 - w.0 * w.2;
        if qw != nsq {
            return Err(FormsError::IsometryCheckFailure(format!(
                "iota image norm {qw}, expected {nsq}"
            )));
        }
        if !in_span(&k1, &k2, &w) {
            return Err(FormsError::IsometryCheckFailure("iota image outside N".into()));
        }
    }
    Ok(OrthoLattice { basis: [k1, k2], gram })
}

fn ext_gcd3_prefix(a: i64, b: i64) -> (i64, i64, i64) {
    let (g, u, v) = ext_gcd(a, b);
    (g, u, v)
}

fn in_span(k1: &(i64, i64, i64), k2: &(i64, i64, i64), w: &(i64, i64, i64)) -> bool {
    // solve x k1 + y k2 = w over Q, check integrality, on two independent
    // coordinate pairs
    let det = (k1.0 as i128) * (k2.1 as i128) - (k1.1 as i128) * (k2.0 as i128);
    let (xn, yn);
    if det != 0 {
        xn = (w.0 as i128) * (k2.1 as i128) - (w.1 as i128) * (k2.0 as i128);
        yn = (k1.0 as i128) * (w.1 as i128) - (k1.1 as i128) * (w.0 as i128);
        if xn % det != 0 || yn % det != 0 {
            return false;
        }
        let (x, y) = (xn / det, yn / det);
        return x * k1.2 as i128 + y * k2.2 as i128 == w.2 as i128;
    }
    // fall back to another pair
    let det2 = (k1.1 as i128) * (k2.2 as i128) - (k1.2 as i128) * (k2.1 as i128);
    if det2 == 0 {
        return false;
    }
    let xn2 = (w.1 as i128) * (k2.2 as i128) - (w.2 as i128) * (k2.1 as i128);
    let yn2 = (k1.1 as i128) * (w.2 as i128) - (k1.2 as i128) * (w.1 as i128);
    if xn2 % det2 != 0 || yn2 % det2 != 0 {
        return false;
    }
    let (x, y) = (xn2 / det2, yn2 / det2);
    x * k1.0 as i128 + y * k2.0 as i128 == w.0 as i128
}

/// T_{L,N}: pair a rho_L form with (theta_0, theta_1) through the splitting
/// L = N + S: (T h)_nu = h_(0,nu) theta_0 + h_(1,nu) theta_1. Weight gains
/// 1/2.
pub fn tln_map(h: &VectorForm, split: &GroupSplit, prec4: i64) -> Result<VectorForm, FormsError> {
    let (t0, t1) = classical::jacobi_thetas(prec4);
    let thetas = VectorForm::new(1, DiscGroup::s_lattice(), true, vec![t0, t1])?;
    tensor_pair(h, &thetas, split)
}

/// The worked weight-1 input form f = 23 [E4 E6 / Delta, Theta_B]_1 for a
/// class B of discriminant -23 (integral coefficients, zero constant term).
pub fn bracket_g2_theta(g: &ClassGroup, b: ClassIdx, prec: i64) -> Result<VectorForm, FormsError> {
    let d = g.discriminant().value();
    let g2 = classical::weakly_holo_gk(2, prec / d + 4)?;
    let th = theta::theta_series(g, b, prec + d)?;
    let f = rankin::bracket_vector(&g2, -4, &th, 1)?;
    Ok(f.scale(&rat_i(d)).truncate(prec))
}

/// Result of the preimage construction.
#[derive(Debug, Clone)]
pub struct Preimage {
    pub h: VectorForm,
    /// correction coefficients, per s (largest first)
    pub corrections: Vec<(i64, Rat)>,
}

/// Construct h in S^!_{1/2}(rho_L) with T_{L,N}(h) = f and b(-D s^2) = 0:
/// start from (1/12) phi x f and subtract multiples of
/// psi x (Theta~ j^{(s^2-t)/4 + 1}) from the largest relevant s downward.
/// `prec92` is the target precision of h in 1/(4D) units.
pub fn build_preimage(
    g: &ClassGroup,
    f: &VectorForm,
    prec92: i64,
) -> Result<Preimage, FormsError> {
    let d = g.discriminant().value();
    let two_d = (2 * d) as u32;
    let split = GroupSplit::s_plus_rank2(d);
    let group_l = DiscGroup::rank3(d);

    // the phi x f product loses d units (phi floor -d in 1/4D units), so f
    // must reach t < (prec92 + d)/4
    if 4 * f.min_precision() - d < prec92 {
        return Err(FormsError::InsufficientPrecision);
    }

    // service precisions, from the product precision rules
    let prec4 = (prec92 + 4 * d + d) / d + 8; // phi/psi target (units 1/4)
    let (psi0, psi1, phi0, phi1) = jacobi::weak_jacobi_components(prec4)?;
    let psi = [&psi0, &psi1];
    let phi = [&phi0, &phi1];

    // g = (1/12) phi_kappa f_nu
    let twelfth = rat(1, 12);
    let mut comps: Vec<QExpansion> = Vec::with_capacity(two_d as usize);
    for lam in 0..two_d {
        let (kappa, nu) = split.split_index(lam);
        let c = phi[kappa as usize].mul(f.component(nu)).scale(&twelfth);
        comps.push(c);
    }
    let mut h = VectorForm::new(1, group_l.clone(), false, comps)?;

    // deepest principal-part exponent of (phi x f) in 1/(4D) units
    let min_exp = h
        .components()
        .iter()
        .map(|c| if c.is_zero() { 0 } else { c.floor() })
        .min()
        .unwrap_or(0);
    let s_max = {
        let mut s = 1i64;
        while d * (s + 1) * (s + 1) <= -min_exp {
            s += 1;
        }
        s
    };

    // corrector builder: components psi_kappa Theta~_nu j^k
    let k_of = |s: i64| -> i64 { (s * s - (s % 2)) / 4 + 1 };
    let kmax = k_of(s_max);
    let theta_t = theta::theta_tilde(g, (prec92 + d + 4 * d * kmax) / 4 + 8)?;
    let jinv = classical::j_invariant(prec92 / (4 * d) + 2 * kmax + 8);

    let mut corrections = Vec::new();
    for s in (1..=s_max).rev() {
        let k = k_of(s);
        let jk = jinv.pow(k)?;
        let mut corr_comps = Vec::with_capacity(two_d as usize);
        for lam in 0..two_d {
            let (kappa, nu) = split.split_index(lam);
            let c = psi[kappa as usize].mul(theta_t.component(nu)).mul(&jk);
            corr_comps.push(c);
        }
        let corr = VectorForm::new(1, group_l.clone(), false, corr_comps)?;
        // position of b(-D s^2): component lambda(s mod 2, 0), exponent -D s^2
        let lam_pos = split.lambda((s % 2) as u32, 0);
        let pos = -d * s * s;
        let lead = corr.component(lam_pos).coeff(pos);
        if lead.is_zero() {
            return Err(FormsError::CorrectionSolveFailure(s));
        }
        let cur = h.component(lam_pos).coeff(pos);
        let gamma = cur / lead;
        h = h.sub(&corr.scale(&gamma))?;
        corrections.push((s, gamma));
    }

    if h.min_precision() < prec92 {
        return Err(FormsError::InsufficientPrecision);
    }
    let h = h.truncate(prec92);

    // b(-D s^2) = 0 for all s >= 1 within range, and b(0) = 0
    let global_floor = h.components().iter().map(|c| c.floor()).min().unwrap();
    for s in 1.. {
        let pos = -d * s * s;
        if pos < global_floor {
            break;
        }
        let lam_pos = split.lambda((s % 2) as u32, 0);
        if !h.component(lam_pos).coeff(pos).is_zero() {
            return Err(FormsError::SelfTestFailure(format!("b(-{}*{s}^2) != 0", d)));
        }
    }
    if !h.component(0).coeff(0).is_zero() {
        return Err(FormsError::SelfTestFailure("b(0) != 0".into()));
    }
    Ok(Preimage { h, corrections })
}

/// Read b(d) (coefficient of q^{d/4D}) from h, resolving the component from
/// d: the lambda with lambda^2 = d mod 4D.
pub fn b_coefficient(h: &VectorForm, d_disc: i64, dval: i64) -> Rat {
    let two_d = 2 * d_disc;
    for lam in 0..two_d {
        if (lam * lam - dval).rem_euclid(4 * d_disc) == 0 {
            return h.component(lam as u32).coeff(dval);
        }
    }
    panic!("{dval} is not a square mod {}", 4 * d_disc);
}

#[cfg(test)]
mod tests {
    use super::*;
    use quadclass::Discriminant;

    fn d23() -> ClassGroup {
        ClassGroup::new(Discriminant::new(23).unwrap()).unwrap()
    }

    #[test]
    fn m_vector_matches_paper_example() {
        let g = d23();
        let m = find_m_vector(&g, g.identity());
        assert_eq!((m.a, m.b, m.c), (23, -23, 6));
        assert_eq!(m.norm4(), -1);
        assert_eq!(m.ideal_class, g.identity());
    }

    #[test]
    fn m_vector_all_classes() {
        let g = d23();
        for c in 0..g.h() {
            let m = find_m_vector(&g, c);
            assert_eq!(m.norm4(), -1);
            assert_eq!(m.ideal_class, c);
            assert_eq!(m.a.rem_euclid(23), 0);
            assert_eq!(m.b.rem_euclid(23), 0);
        }
    }

    #[test]
    fn orthogonal_lattice_has_determinant_d() {
        let g = d23();
        let m = find_m_vector(&g, g.identity());
        let n = orthogonal_lattice(&m).unwrap();
        let det = n.gram[0][0] * n.gram[1][1] - n.gram[0][1] * n.gram[1][0];
        assert_eq!(det, 23);
    }

    #[test]
    fn worked_f_has_golden_negative_coefficients() {
        let g = d23();
        let j = g.index_of(&QuadForm { a: 2, b: 1, c: 3 }).unwrap();
        let f = bracket_g2_theta(&g, j, 40).unwrap();
        // (t, c(-t)) from the pinned table
        let golden = [
            (5i64, 26i64),
            (7, 18),
            (11, 2),
            (14, -5),
            (15, -7),
            (17, -11),
            (19, -15),
            (20, -17),
            (21, -19),
            (23, -23),
        ];
        for (t, c) in golden {
            let nu = (0..23).find(|v| (v * v + t).rem_euclid(23) == 0).unwrap() as u32;
            assert_eq!(f.component(nu).coeff(-t), rat_i(c), "c(-{t})");
        }
        // zero constant term (weakly holomorphic cusp form)
        assert!(f.component(0).coeff(0).is_zero());
        // the unprinted coefficient between the table entries
        assert_eq!(f.component(6).coeff(-10), rat_i(3));
    }

    #[test]
    fn preimage_kills_b_at_ds2_and_inverts_tln() {
        let g = d23();
        let j = g.index_of(&QuadForm { a: 2, b: 1, c: 3 }).unwrap();
        let f = bracket_g2_theta(&g, j, 80).unwrap();
        let pre = build_preimage(&g, &f, 240).unwrap();
        assert_eq!(pre.corrections.len(), 2);
        assert_eq!(pre.corrections[0].0, 2);
        // T(h) = f on the available window
        let split = GroupSplit::s_plus_rank2(23);
        let t = tln_map(&pre.h, &split, 260).unwrap();
        for nu in 0..23u32 {
            let lhs = t.component(nu);
            let prec = lhs.precision().min(f.component(nu).rescale(92).precision());
            let rhs = f.component(nu).rescale(92).truncate(prec);
            assert_eq!(lhs.truncate(prec), rhs, "component {nu}");
        }
    }

    #[test]
    fn correctors_lie_in_the_kernel_of_tln() {
        // T(psi x Theta~ j^k) = 0 exactly: the kappa-sum collapses onto
        // psi0 theta0 + psi1 theta1
        let g = d23();
        let split = GroupSplit::s_plus_rank2(23);
        let group_l = crate::group::DiscGroup::rank3(23);
        let (psi0, psi1, _, _) = crate::jacobi::weak_jacobi_components(40).unwrap();
        let psi = [&psi0, &psi1];
        let tt = crate::theta::theta_tilde(&g, 160).unwrap();
        let jinv = crate::classical::j_invariant(12);
        for k in [1i64, 2] {
            let jk = jinv.pow(k).unwrap();
            let mut comps = Vec::new();
            for lam in 0..46u32 {
                let (kappa, nu) = split.split_index(lam);
                comps.push(psi[kappa as usize].mul(tt.component(nu)).mul(&jk));
            }
            let corr = VectorForm::new(1, group_l.clone(), false, comps).unwrap();
            let t = tln_map(&corr, &split, 200).unwrap();
            for nu in 0..23u32 {
                assert!(t.component(nu).is_zero(), "kernel violated at nu={nu}, k={k}");
            }
        }
    }
}
