//! The vector-valued modular form type and the index-level maps between
//! discriminant groups (tensor pairing, restriction, trace).

use num_integer::Integer;
use qexp::{QExpansion, Rat};

use crate::group::DiscGroup;
use crate::FormsError;

/// A vector-valued q-expansion: one component per group element.
///
/// `weight2` stores twice the weight, so half-integral weights stay exact.
/// `dual` marks forms transforming under the conjugate representation.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorForm {
    weight2: i64,
    group: DiscGroup,
    dual: bool,
    comps: Vec<QExpansion>,
}

impl VectorForm {
    pub fn new(
        weight2: i64,
        group: DiscGroup,
        dual: bool,
        comps: Vec<QExpansion>,
    ) -> Result<Self, FormsError> {
        assert_eq!(comps.len(), group.order() as usize);
        let f = VectorForm { weight2, group, dual, comps };
        f.validate_support()?;
        Ok(f)
    }

    pub fn zero(weight2: i64, group: DiscGroup, m: u32, prec: i64) -> Self {
        let comps = (0..group.order()).map(|_| QExpansion::zero(m, prec)).collect();
        VectorForm { weight2, group, dual: false, comps }
    }

    /// Twice the weight.
    pub fn weight2(&self) -> i64 {
        self.weight2
    }

    pub fn group(&self) -> &DiscGroup {
        &self.group
    }

    pub fn dual(&self) -> bool {
        self.dual
    }

    pub fn component(&self, nu: u32) -> &QExpansion {
        &self.comps[nu as usize]
    }

    pub fn components(&self) -> &[QExpansion] {
        &self.comps
    }

    /// Minimum precision across components (in each component's own 1/M units
    /// this is not comparable; callers use it for same-M forms).
    pub fn min_precision(&self) -> i64 {
        self.comps.iter().map(|c| c.precision()).min().unwrap_or(0)
    }

    /// Every component nu must be supported on exponents = q(nu) mod 1.
    pub fn validate_support(&self) -> Result<(), FormsError> {
        let qden = self.group.qden();
        for nu in self.group.elements() {
            let comp = &self.comps[nu as usize];
            let m = comp.exponent_denominator() as i64;
            let sign = if self.dual { -1 } else { 1 };
            let target = (sign * self.group.qnum(nu)).rem_euclid(qden);
            for (n, _) in comp.terms() {
                // n/m = target/qden mod 1  <=>  n*qden = target*m mod m*qden
                let lhs = (n * qden).rem_euclid(m * qden);
                let rhs = (target * m).rem_euclid(m * qden);
                if lhs != rhs {
                    return Err(FormsError::SupportCongruence { nu, num: *n, den: m });
                }
            }
        }
        Ok(())
    }

    /// Component symmetry f_nu = f_{-nu}.
    pub fn is_symmetric(&self) -> bool {
        self.group
            .elements()
            .all(|nu| self.comps[nu as usize] == self.comps[self.group.neg(nu) as usize])
    }

    pub fn add(&self, other: &Self) -> Result<Self, FormsError> {
        if self.group != other.group || self.weight2 != other.weight2 || self.dual != other.dual {
            return Err(FormsError::GroupMismatch);
        }
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(VectorForm { weight2: self.weight2, group: self.group.clone(), dual: self.dual, comps })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FormsError> {
        self.add(&other.scale(&Rat::from_integer((-1).into())))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        VectorForm {
            weight2: self.weight2,
            group: self.group.clone(),
            dual: self.dual,
            comps: self.comps.iter().map(|f| f.scale(c)).collect(),
        }
    }

    /// Multiply every component by a scalar q-expansion, adding `wt2` to the
    /// weight (e.g. multiplication by j leaves the representation alone).
    pub fn mul_scalar_series(&self, s: &QExpansion, wt2: i64) -> Self {
        VectorForm {
            weight2: self.weight2 + wt2,
            group: self.group.clone(),
            dual: self.dual,
            comps: self.comps.iter().map(|f| f.mul(s)).collect(),
        }
    }

    pub fn truncate(&self, prec: i64) -> Self {
        VectorForm {
            weight2: self.weight2,
            group: self.group.clone(),
            dual: self.dual,
            comps: self.comps.iter().map(|f| f.truncate(prec)).collect(),
        }
    }
}

/// Splitting data for L'/L = (M'/M) + (N'/N): the index bijection
/// (kappa, nu) -> lambda compatible with the quadratic forms.
#[derive(Debug, Clone)]
pub struct GroupSplit {
    pub left: DiscGroup,
    pub right: DiscGroup,
    pub total: DiscGroup,
    map: Vec<Vec<u32>>, // map[kappa][nu] = lambda
}

impl GroupSplit {
    /// The split used throughout: S + N inside L for odd prime D.
    /// lambda = kappa mod 2, lambda = 2 nu mod D.
    pub fn s_plus_rank2(d: i64) -> Self {
        let left = DiscGroup::s_lattice();
        let right = DiscGroup::rank2(d);
        let total = DiscGroup::rank3(d);
        let two_d = 2 * d;
        let mut map = vec![vec![0u32; d as usize]; 2];
        for kappa in 0..2i64 {
            for nu in 0..d {
                // CRT: lambda = kappa (mod 2), lambda = 2 nu (mod D)
                let mut lambda = (2 * nu) % two_d;
                if lambda % 2 != kappa {
                    lambda = (lambda + d).rem_euclid(two_d);
                }
                debug_assert_eq!(lambda % 2, kappa);
                debug_assert_eq!(lambda % d, (2 * nu) % d);
                map[kappa as usize][nu as usize] = lambda as u32;
            }
        }
        let s = GroupSplit { left, right, total, map };
        s.validate().expect("q-additivity of the standard split");
        s
    }

    pub fn lambda(&self, kappa: u32, nu: u32) -> u32 {
        self.map[kappa as usize][nu as usize]
    }

    /// (kappa, nu) of a total-group index.
    pub fn split_index(&self, lambda: u32) -> (u32, u32) {
        for kappa in 0..self.left.order() {
            for nu in 0..self.right.order() {
                if self.map[kappa as usize][nu as usize] == lambda {
                    return (kappa, nu);
                }
            }
        }
        unreachable!("index map is a bijection")
    }

    /// q_total(lambda(kappa,nu)) = q_left(kappa) + q_right(nu) mod 1.
    fn validate(&self) -> Result<(), FormsError> {
        let qd_t = self.total.qden();
        let qd_l = self.left.qden();
        let qd_r = self.right.qden();
        let l = lcm3(qd_t, qd_l, qd_r);
        for kappa in self.left.elements() {
            for nu in self.right.elements() {
                let lam = self.lambda(kappa, nu);
                let lhs = (self.total.qnum(lam) * (l / qd_t)).rem_euclid(l);
                let rhs = (self.left.qnum(kappa) * (l / qd_l) + self.right.qnum(nu) * (l / qd_r))
                    .rem_euclid(l);
                if lhs != rhs {
                    return Err(FormsError::GroupMismatch);
                }
            }
        }
        Ok(())
    }
}

fn lcm3(a: i64, b: i64, c: i64) -> i64 {
    a.lcm(&b).lcm(&c)
}

/// h_nu = sum_kappa f_{lambda(kappa,nu)} g_kappa, for f on the total group
/// and g on the left group carrying the dual representation. Weights add.
pub fn tensor_pair(f: &VectorForm, g: &VectorForm, split: &GroupSplit) -> Result<VectorForm, FormsError> {
    if f.group() != &split.total || g.group() != &split.left {
        return Err(FormsError::GroupMismatch);
    }
    if !g.dual() {
        return Err(FormsError::GroupMismatch);
    }
    let mut comps = Vec::with_capacity(split.right.order() as usize);
    for nu in split.right.elements() {
        let mut acc: Option<QExpansion> = None;
        for kappa in split.left.elements() {
            let term = f.component(split.lambda(kappa, nu)).mul(g.component(kappa));
            acc = Some(match acc {
                None => term,
                Some(s) => s.add(&term),
            });
        }
        comps.push(acc.expect("left group nonempty"));
    }
    VectorForm::new(f.weight2() + g.weight2(), split.right.clone(), false, comps)
}

/// Index data for a finite-index sublattice M of L: the elements of L'/M,
/// each labeled by its image in M'/M and its image in L'/L (when the coset
/// lies in L'/M).
#[derive(Debug, Clone)]
pub struct IndexEmbedding {
    pub l_group: DiscGroup,
    pub m_group: DiscGroup,
    /// (label in M'/M, label in L'/L) for each element of L'/M
    pub fibers: Vec<(u32, u32)>,
}

impl IndexEmbedding {
    /// The trivial embedding M = L.
    pub fn identity(g: &DiscGroup) -> Self {
        IndexEmbedding {
            l_group: g.clone(),
            m_group: g.clone(),
            fibers: g.elements().map(|v| (v, v)).collect(),
        }
    }
}

/// res_{L/M}: a form for rho_L viewed as a form for rho_M.
/// (res f)_mu = f_{mubar} when mu lies in L'/M, else 0.
pub fn res_map(f: &VectorForm, emb: &IndexEmbedding) -> Result<VectorForm, FormsError> {
    if f.group() != &emb.l_group {
        return Err(FormsError::IncompatibleLattices);
    }
    let m = f.components()[0].exponent_denominator();
    let prec = f.min_precision();
    let mut comps: Vec<QExpansion> =
        (0..emb.m_group.order()).map(|_| QExpansion::zero(m, prec)).collect();
    for (mu, lam) in &emb.fibers {
        comps[*mu as usize] = f.component(*lam).clone();
    }
    VectorForm::new(f.weight2(), emb.m_group.clone(), f.dual(), comps)
}

/// tr_{L/M}: (tr g)_lambda = sum over fiber elements mapping to lambda.
pub fn tr_map(g: &VectorForm, emb: &IndexEmbedding) -> Result<VectorForm, FormsError> {
    if g.group() != &emb.m_group {
        return Err(FormsError::IncompatibleLattices);
    }
    let m = g.components()[0].exponent_denominator();
    let prec = g.min_precision();
    let mut comps: Vec<QExpansion> =
        (0..emb.l_group.order()).map(|_| QExpansion::zero(m, prec)).collect();
    for (mu, lam) in &emb.fibers {
        comps[*lam as usize] = comps[*lam as usize].add(g.component(*mu));
    }
    VectorForm::new(g.weight2(), emb.l_group.clone(), g.dual(), comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qexp::rat_i;

    #[test]
    fn split_is_bijective_and_additive() {
        let s = GroupSplit::s_plus_rank2(23);
        let mut seen = vec![false; 46];
        for kappa in 0..2 {
            for nu in 0..23 {
                let lam = s.lambda(kappa, nu);
                assert!(!seen[lam as usize]);
                seen[lam as usize] = true;
            }
        }
        assert!(seen.iter().all(|b| *b));
        assert_eq!(s.split_index(s.lambda(1, 7)), (1, 7));
    }

    #[test]
    fn support_congruence_enforced() {
        let g = DiscGroup::rank2(23);
        let mut comps: Vec<QExpansion> = (0..23).map(|_| QExpansion::zero(23, 100)).collect();
        comps[1] = QExpansion::from_terms(23, [(1, rat_i(1))], 100); // 1/23 = q(1) ok
        assert!(VectorForm::new(2, g.clone(), false, comps.clone()).is_ok());
        comps[1] = QExpansion::from_terms(23, [(2, rat_i(1))], 100); // 2/23 != 1/23 mod 1
        assert!(matches!(
            VectorForm::new(2, g, false, comps),
            Err(FormsError::SupportCongruence { nu: 1, .. })
        ));
    }

    #[test]
    fn res_tr_identity_embedding() {
        let lg = DiscGroup::s_lattice();
        let emb = IndexEmbedding::identity(&lg);
        let comps = vec![
            QExpansion::from_terms(4, [(0, rat_i(2))], 40),
            QExpansion::from_terms(4, [(3, rat_i(5))], 40),
        ];
        let f = VectorForm::new(1, lg, false, comps).unwrap();
        let r = res_map(&f, &emb).unwrap();
        assert_eq!(r.components(), f.components());
        let t = tr_map(&r, &emb).unwrap();
        assert_eq!(t.components(), f.components());
    }

    #[test]
    fn tr_res_scales_by_fiber_size() {
        // fiber {5, 18} of L'/M over the single label 5 of L'/L (q(5) = q(18)
        // in Z/23): tr(res f) multiplies the supported component by |L/M| = 2.
        let g = DiscGroup::rank2(23);
        let emb = IndexEmbedding {
            l_group: g.clone(),
            m_group: g.clone(),
            fibers: vec![(5, 5), (18, 5)],
        };
        let mut comps: Vec<QExpansion> = (0..23).map(|_| QExpansion::zero(23, 50)).collect();
        comps[5] = QExpansion::from_terms(23, [(2, rat_i(7))], 50); // 2 = q(5) mod 23
        let f = VectorForm::new(2, g, false, comps).unwrap();
        let r = res_map(&f, &emb).unwrap();
        assert_eq!(r.component(5), f.component(5));
        assert_eq!(r.component(18), f.component(5));
        let t = tr_map(&r, &emb).unwrap();
        assert_eq!(t.component(5), &f.component(5).scale(&rat_i(2)));
        assert!(t.component(3).is_zero());
    }
}
