//! Generator matrices of the Weil representation and their exact relations.
//!
//! rho(T) is diagonal with entries e(q(nu)). rho(S) is stored as its exact
//! cyclotomic part: rho(S) = phase / sqrt(M) * [e(-(mu,nu))], where the
//! phase i^{(b^- - b^+)/2} is an eighth root of unity folded into the
//! matrix and the 1/sqrt(M) scale is tracked separately (as a power of
//! sqrt(M)). Exactness makes the braid relation (S T)^3 = S^2 and the
//! Z-action S^2 = i^{b^- - b^+} (nu -> -nu) decidable, not approximate.

use hp::{Cplx, Real};
use num_integer::Integer;

use crate::cyclotomic::Cyc;
use crate::group::DiscGroup;
use crate::FormsError;

#[derive(Debug, Clone)]
pub struct WeilRep {
    group: DiscGroup,
    sig: (u32, u32),
    n_root: u32,
    /// rho(T) diagonal: exponents k(nu) with entry zeta_{n_root}^{k}.
    t_exp: Vec<i64>,
    /// Exact part of rho(S): s_mat[mu][nu] = phase * e(-(mu,nu)); the true
    /// matrix is s_mat / sqrt(M).
    s_mat: Vec<Vec<Cyc>>,
}

impl WeilRep {
    /// Build the representation for a cyclic quadratic module and signature
    /// (b+, b-). Fails if the Milgram invariant
    /// sum_nu e(q(nu)) = sqrt(M) e((b+ - b-)/8) does not hold.
    pub fn new(group: DiscGroup, sig: (u32, u32)) -> Result<Self, FormsError> {
        let m = group.order();
        let qden = group.qden();
        let n_root = (8i64.lcm(&qden)) as u32;
        // Milgram: sum_nu e(q(nu)) = sqrt(M) e((b+ - b-)/8), checked exactly.
        let mut gauss = Cyc::zero(n_root);
        for nu in group.elements() {
            gauss = gauss.add(&Cyc::e_frac(n_root, group.qnum(nu), qden));
        }
        let sg = (sig.0 as i64 - sig.1 as i64).rem_euclid(8);
        let expect = Cyc::sqrt_of(m, n_root).mul(&Cyc::e_frac(n_root, sg, 8));
        if !gauss.eq_canonical(&expect) {
            return Err(FormsError::SignatureMismatch);
        }

        let t_exp = group
            .elements()
            .map(|nu| group.qnum(nu) * (n_root as i64 / qden))
            .collect();
        // phase = i^{(b- - b+)/2} = e((b- - b+)/8)
        let phase_num = (sig.1 as i64 - sig.0 as i64).rem_euclid(8);
        let phase = Cyc::e_frac(n_root, phase_num, 8);
        let mut s_mat = Vec::with_capacity(m as usize);
        for mu in group.elements() {
            let mut row = Vec::with_capacity(m as usize);
            for nu in group.elements() {
                let b = group.bilinear_num(mu, nu);
                row.push(phase.mul(&Cyc::e_frac(n_root, -b, qden)));
            }
            s_mat.push(row);
        }
        Ok(WeilRep { group, sig, n_root, t_exp, s_mat })
    }

    pub fn group(&self) -> &DiscGroup {
        &self.group
    }

    pub fn signature(&self) -> (u32, u32) {
        self.sig
    }

    pub fn root_order(&self) -> u32 {
        self.n_root
    }

    /// rho(T) as numeric diagonal.
    pub fn t_numeric(&self, p: usize, dual: bool) -> Vec<Cplx> {
        self.t_exp
            .iter()
            .map(|k| {
                let z = Cyc::root(self.n_root, *k).to_cplx(p);
                if dual {
                    z.conj()
                } else {
                    z
                }
            })
            .collect()
    }

    /// rho(S) as a numeric matrix (including the 1/sqrt(M) scale).
    pub fn s_numeric(&self, p: usize, dual: bool) -> Vec<Vec<Cplx>> {
        let scale = Real::one(p) / Real::from_i64(self.group.order() as i64, p).sqrt();
        self.s_mat
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        let z = e.to_cplx(p).scale(&scale);
                        if dual {
                            z.conj()
                        } else {
                            z
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Exact braid relation (S T)^3 = S^2 in Mp2(Z), compared at the
    /// cyclotomic level: (SM T)^3 = sqrt(M) SM^2 with SM the exact part.
    pub fn braid_relation_holds(&self) -> bool {
        let st = self.mul_by_t(&self.s_mat);
        let st2 = mat_mul(&st, &st);
        let st3 = mat_mul(&st2, &st);
        let s2 = mat_mul(&self.s_mat, &self.s_mat);
        let sqrt_m = Cyc::sqrt_of(self.group.order(), self.n_root);
        let m = self.group.order() as usize;
        for i in 0..m {
            for j in 0..m {
                if !st3[i][j].eq_canonical(&s2[i][j].mul(&sqrt_m)) {
                    return false;
                }
            }
        }
        true
    }

    /// Exact Z-action: S^2 = M * i^{b- - b+} P with P the permutation
    /// nu -> -nu (exact part; the true rho(Z) = i^{b- - b+} P).
    pub fn z_action_is_standard(&self) -> bool {
        let s2 = mat_mul(&self.s_mat, &self.s_mat);
        let m = self.group.order();
        let zq = (2 * (self.sig.1 as i64 - self.sig.0 as i64)).rem_euclid(8);
        let scale = Cyc::from_int(self.n_root, m as i64).mul(&Cyc::e_frac(self.n_root, zq, 8));
        for mu in self.group.elements() {
            for nu in self.group.elements() {
                let expect = if nu == self.group.neg(mu) { scale.clone() } else { Cyc::zero(self.n_root) };
                if !s2[mu as usize][nu as usize].eq_canonical(&expect) {
                    return false;
                }
            }
        }
        true
    }

    /// Max |(rho(S) rho(S)^*)_{ij} - delta_ij| at precision p.
    pub fn unitarity_residual(&self, p: usize) -> Real {
        let s = self.s_numeric(p, false);
        let m = s.len();
        let mut worst = Real::zero(p);
        for i in 0..m {
            for j in 0..m {
                let mut acc = Cplx::zero(p);
                for (k, _) in s.iter().enumerate() {
                    acc = acc.add(&s[i][k].mul(&s[j][k].conj()));
                }
                if i == j {
                    acc = acc.sub(&Cplx::one(p));
                }
                let dev = acc.abs();
                if dev.cmp(&worst) == std::cmp::Ordering::Greater {
                    worst = dev;
                }
            }
        }
        worst
    }

    fn mul_by_t(&self, a: &[Vec<Cyc>]) -> Vec<Vec<Cyc>> {
        // (A T)_{ij} = A_{ij} zeta^{t_j}
        a.iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(j, e)| e.mul(&Cyc::root(self.n_root, self.t_exp[j])))
                    .collect()
            })
            .collect()
    }
}

fn mat_mul(a: &[Vec<Cyc>], b: &[Vec<Cyc>]) -> Vec<Vec<Cyc>> {
    let n = a.len();
    let order = a[0][0].order();
    let mut out = vec![vec![Cyc::zero(order); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = &a[i][k];
            for j in 0..n {
                out[i][j] = out[i][j].add(&aik.mul(&b[k][j]));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank2_d23_relations() {
        let rep = WeilRep::new(DiscGroup::rank2(23), (2, 0)).unwrap();
        assert!(rep.z_action_is_standard());
        assert!(rep.braid_relation_holds());
    }

    #[test]
    fn s_lattice_relations() {
        let rep = WeilRep::new(DiscGroup::s_lattice(), (0, 1)).unwrap();
        assert!(rep.z_action_is_standard());
        assert!(rep.braid_relation_holds());
    }

    #[test]
    fn wrong_signature_rejected() {
        assert!(matches!(
            WeilRep::new(DiscGroup::rank2(23), (0, 2)),
            Err(FormsError::SignatureMismatch)
        ));
    }

    #[test]
    fn unitarity_small() {
        let rep = WeilRep::new(DiscGroup::s_lattice(), (0, 1)).unwrap();
        let r = rep.unitarity_residual(128);
        assert!(r.to_f64() < 1e-30);
    }

    #[test]
    fn unitarity_rank2_at_128_bits() {
        let rep = WeilRep::new(DiscGroup::rank2(23), (2, 0)).unwrap();
        let r = rep.unitarity_residual(128);
        assert!(r.to_f64() < 1e-20, "residual {}", r.to_f64());
    }
}
