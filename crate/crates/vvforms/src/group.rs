//! Finite quadratic modules (discriminant groups) in the cyclic shapes used
//! by this pipeline, with their Q/Z-valued quadratic forms.

use serde::Serialize;

/// Cyclic discriminant group Z/MZ with quadratic form
/// q(nu) = qnum(nu) / qden mod 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscGroup {
    order: u32,
    qden: i64,
    qnum: Vec<i64>,
}

impl DiscGroup {
    /// N'/N for the rank-2 lattice of a class of discriminant -D:
    /// order D, q(nu) = nu^2 / D.
    pub fn rank2(d: i64) -> Self {
        let order = d as u32;
        let qnum = (0..d).map(|v| (v * v).rem_euclid(d)).collect();
        DiscGroup { order, qden: d, qnum }
    }

    /// L'/L for the rank-3 lattice: order 2D, q(lambda) = lambda^2 / 4D.
    pub fn rank3(d: i64) -> Self {
        let order = (2 * d) as u32;
        let qden = 4 * d;
        let qnum = (0..2 * d).map(|v| (v * v).rem_euclid(qden)).collect();
        DiscGroup { order, qden, qnum }
    }

    /// S'/S for S = (Z, -x^2): order 2, q(0) = 0, q(1) = -1/4.
    pub fn s_lattice() -> Self {
        DiscGroup { order: 2, qden: 4, qnum: vec![0, 3] }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Denominator of the quadratic form values.
    pub fn qden(&self) -> i64 {
        self.qden
    }

    /// Numerator of q(nu) (mod qden, in [0, qden)).
    pub fn qnum(&self, nu: u32) -> i64 {
        self.qnum[nu as usize]
    }

    pub fn neg(&self, nu: u32) -> u32 {
        (self.order - nu) % self.order
    }

    /// Bilinear form (mu, nu) = q(mu+nu) - q(mu) - q(nu) mod 1, returned as
    /// a numerator over `qden`.
    pub fn bilinear_num(&self, mu: u32, nu: u32) -> i64 {
        let s = ((mu + nu) % self.order) as usize;
        (self.qnum[s] - self.qnum[mu as usize] - self.qnum[nu as usize]).rem_euclid(self.qden)
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank2_values() {
        let g = DiscGroup::rank2(23);
        assert_eq!(g.order(), 23);
        assert_eq!(g.qnum(5), 2); // 25 mod 23
        assert_eq!(g.qnum(g.neg(5)), 2); // q(nu) = q(-nu)
    }

    #[test]
    fn rank3_values() {
        let g = DiscGroup::rank3(23);
        assert_eq!(g.order(), 46);
        assert_eq!(g.qden(), 92);
        assert_eq!(g.qnum(23), (23 * 23) % 92);
    }

    #[test]
    fn s_lattice_values() {
        let g = DiscGroup::s_lattice();
        assert_eq!(g.qnum(1), 3); // -1/4 mod 1
        // (1,1) = q(0) - 2q(1) = -6/4 = 2/4 mod 1
        assert_eq!(g.bilinear_num(1, 1), 2);
    }
}
