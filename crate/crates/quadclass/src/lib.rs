//! Class-group arithmetic for imaginary quadratic fields of prime
//! discriminant -D, D = 3 mod 4, and ideal-counting functions.
//!
//! Classes are labeled by reduced binary quadratic forms [a,b,c] of
//! discriminant -D (|b| <= a <= c, b >= 0 when |b| = a or a = c), composed
//! by Gauss composition. `r_B(t)` counts integral ideals of norm t in the
//! class B; it is computed from representation numbers of the reduced form
//! divided by the unit count w = 2. Ideal conjugation inverts a class and
//! preserves norms, so r_B = r_{B^-1} and the form/class orientation drops
//! out of every r-count.

use num_integer::Integer;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassGroupError {
    #[error("invalid discriminant {0}: need a prime = 3 mod 4")]
    InvalidDiscriminant(i64),
    #[error("form [{0},{1},{2}] does not belong to this group")]
    ClassNotInGroup(i64, i64, i64),
}

/// Positive prime D with D = 3 mod 4, so that -D is fundamental.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Discriminant(i64);

impl Discriminant {
    pub fn new(d: i64) -> Result<Self, ClassGroupError> {
        if d > 0 && d % 4 == 3 && is_prime(d as u64) {
            Ok(Discriminant(d))
        } else {
            Err(ClassGroupError::InvalidDiscriminant(d))
        }
    }

    pub fn value(&self) -> i64 {
        self.0
    }
}

/// Deterministic Miller-Rabin, valid for all u64.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Legendre symbol (a/D) for D an odd prime.
pub fn kronecker_symbol(a: i64, disc: Discriminant) -> i8 {
    let d = disc.value() as u64;
    let a = a.rem_euclid(d as i64) as u64;
    if a == 0 {
        return 0;
    }
    let e = mod_pow(a, (d - 1) / 2, d);
    if e == 1 {
        1
    } else {
        -1
    }
}

/// Primitive positive-definite binary quadratic form a x^2 + b x y + c y^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64, disc: Discriminant) -> Result<Self, ClassGroupError> {
        let f = QuadForm { a, b, c };
        if f.discriminant() != -disc.value() || a <= 0 || gcd3(a, b, c) != 1 {
            return Err(ClassGroupError::ClassNotInGroup(a, b, c));
        }
        Ok(f)
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() < a && a < c))
    }

    /// Standard reduction loop for positive definite forms.
    pub fn reduce(&self) -> QuadForm {
        let (mut a, mut b, mut c) = (self.a, self.b, self.c);
        loop {
            if c < a {
                (a, b, c) = (c, -b, a);
                continue;
            }
            if b.abs() > a || (b == -a) {
                // normalize b into (-a, a]
                let k = div_round_nearest(b, 2 * a);
                let b2 = b - 2 * k * a;
                let c2 = c - k * b + k * k * a;
                b = b2;
                c = c2;
                continue;
            }
            if a == c && b < 0 {
                b = -b;
                continue;
            }
            break;
        }
        QuadForm { a, b, c }
    }

    pub fn value(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    /// Inverse class representative: [a, -b, c] reduced.
    pub fn inverse(&self) -> QuadForm {
        QuadForm { a: self.a, b: -self.b, c: self.c }.reduce()
    }
}

fn div_round_nearest(n: i64, d: i64) -> i64 {
    // round to nearest, ties toward zero; d > 0
    let (q, r) = (n.div_euclid(d), n.rem_euclid(d));
    if 2 * r > d {
        q + 1
    } else {
        q
    }
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    a.gcd(&b).gcd(&c)
}

/// Extended gcd: returns (g, u, v) with g = u a + v b, g >= 0.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        return (a.abs(), a.signum(), 0);
    }
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Gauss composition of primitive forms of equal discriminant (Cohen,
/// A Course in Computational Algebraic Number Theory, Alg. 5.4.7).
fn compose(f1: &QuadForm, f2: &QuadForm) -> QuadForm {
    let (mut f1, mut f2) = (*f1, *f2);
    if f1.a > f2.a {
        std::mem::swap(&mut f1, &mut f2);
    }
    let s = (f1.b + f2.b) / 2;
    let n = f2.b - s;
    let (d, u, _v) = ext_gcd(f2.a, f1.a); // d = u a2 + v a1
    let (y1, d) = if f2.a % f1.a == 0 { (0, f1.a) } else { (u, d) };
    let (d1, x2, y2) = if s % d == 0 {
        (d, 0, -1)
    } else {
        let (d1, u1, v1) = ext_gcd(s, d); // d1 = u1 s + v1 d
        (d1, u1, -v1)
    };
    let v1 = f1.a / d1;
    let v2 = f2.a / d1;
    let r = (y1 as i128 * y2 as i128 * n as i128 - x2 as i128 * f2.c as i128).rem_euclid(v1 as i128);
    let a3 = v1 as i128 * v2 as i128;
    let b3 = f2.b as i128 + 2 * v2 as i128 * r;
    let c3 = (f2.c as i128 * d1 as i128 + r * (f2.b as i128 + v2 as i128 * r)) / v1 as i128;
    debug_assert_eq!(
        b3 * b3 - 4 * a3 * c3,
        (f1.b as i128) * (f1.b as i128) - 4 * (f1.a as i128) * (f1.c as i128)
    );
    QuadForm { a: a3 as i64, b: b3 as i64, c: c3 as i64 }.reduce()
}

/// The full class group of discriminant -D.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    disc: Discriminant,
    classes: Vec<QuadForm>,
    compose: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

/// Index of a class within its group.
pub type ClassIdx = usize;

impl ClassGroup {
    pub fn new(disc: Discriminant) -> Result<Self, ClassGroupError> {
        let d = disc.value();
        let mut classes = Vec::new();
        // enumerate reduced forms: b odd, |b| <= a <= sqrt(D/3)
        let amax = ((d as f64) / 3.0).sqrt() as i64 + 1;
        for a in 1..=amax {
            for b in -a..=a {
                if (b * b + d) % (4 * a) != 0 {
                    continue;
                }
                let c = (b * b + d) / (4 * a);
                let f = QuadForm { a, b, c };
                if f.is_reduced() && gcd3(a, b, c) == 1 && c >= a {
                    classes.push(f);
                }
            }
        }
        classes.sort();
        classes.dedup();
        // principal class first
        let principal = QuadForm { a: 1, b: 1, c: (d + 1) / 4 };
        let pi = classes.iter().position(|f| *f == principal).ok_or(ClassGroupError::InvalidDiscriminant(d))?;
        classes.swap(0, pi);
        let idx_of = |f: &QuadForm, classes: &[QuadForm]| -> Option<usize> {
            classes.iter().position(|g| g == f)
        };
        let n = classes.len();
        let mut table = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                let f = compose(&classes[i], &classes[j]);
                table[i][j] = idx_of(&f, &classes).ok_or(ClassGroupError::InvalidDiscriminant(d))?;
            }
        }
        let mut inverse = vec![0usize; n];
        for i in 0..n {
            let f = classes[i].inverse();
            inverse[i] = idx_of(&f, &classes).ok_or(ClassGroupError::InvalidDiscriminant(d))?;
        }
        let g = ClassGroup { disc, classes, compose: table, inverse };
        debug_assert!(g.h() % 2 == 1, "class number must be odd for prime D");
        Ok(g)
    }

    pub fn discriminant(&self) -> Discriminant {
        self.disc
    }

    pub fn h(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[QuadForm] {
        &self.classes
    }

    pub fn identity(&self) -> ClassIdx {
        0
    }

    pub fn form(&self, i: ClassIdx) -> &QuadForm {
        &self.classes[i]
    }

    pub fn index_of(&self, f: &QuadForm) -> Result<ClassIdx, ClassGroupError> {
        let r = f.reduce();
        self.classes
            .iter()
            .position(|g| *g == r)
            .ok_or(ClassGroupError::ClassNotInGroup(f.a, f.b, f.c))
    }

    pub fn compose(&self, i: ClassIdx, j: ClassIdx) -> ClassIdx {
        self.compose[i][j]
    }

    pub fn inverse(&self, i: ClassIdx) -> ClassIdx {
        self.inverse[i]
    }

    pub fn square(&self, i: ClassIdx) -> ClassIdx {
        self.compose(i, i)
    }

    /// Some class C with C^2 = i (exists and can be chosen canonically since
    /// h is odd: C = i^((h+1)/2)).
    pub fn square_root(&self, i: ClassIdx) -> ClassIdx {
        let mut acc = self.identity();
        for _ in 0..(self.h() + 1) / 2 {
            acc = self.compose(acc, i);
        }
        debug_assert_eq!(self.square(acc), i);
        acc
    }

    /// Number of integral ideals of norm t in class B: representations of t
    /// by the reduced form, divided by the unit count w = 2. Returns 0 for
    /// t <= 0 (t = 0 is excluded by convention; callers special-case the
    /// theta constant term).
    pub fn rep_count(&self, b: ClassIdx, t: i64) -> u64 {
        if t <= 0 {
            return 0;
        }
        debug_assert!(self.disc.value() > 4, "w = 2 requires D >= 7 (D = 3 excluded)");
        let f = &self.classes[b];
        let d = self.disc.value();
        // a x^2 + b x y + c y^2 = t  =>  (2ax + by)^2 + D y^2 = 4 a t
        let mut count = 0u64;
        let ymax = int_sqrt(4 * f.a * t / d);
        for y in -ymax..=ymax {
            // solve a x^2 + (b y) x + (c y^2 - t) = 0
            let disc = f.b * f.b * y * y - 4 * f.a * (f.c * y * y - t);
            if disc < 0 {
                continue;
            }
            let s = int_sqrt(disc);
            if s * s != disc {
                continue;
            }
            for sign in [1i64, -1] {
                let num = -f.b * y + sign * s;
                if num % (2 * f.a) == 0 {
                    count += 1;
                }
                if s == 0 {
                    break;
                }
            }
        }
        debug_assert!(count % 2 == 0);
        count / 2
    }

    /// Total ideal count sum over divisors: sum_{m | t} chi_D(m).
    pub fn total_ideal_count(&self, t: i64) -> i64 {
        if t <= 0 {
            return 0;
        }
        let mut s = 0i64;
        let mut m = 1;
        while m * m <= t {
            if t % m == 0 {
                s += kronecker_symbol(m, self.disc) as i64;
                let m2 = t / m;
                if m2 != m {
                    s += kronecker_symbol(m2, self.disc) as i64;
                }
            }
            m += 1;
        }
        s
    }
}

fn int_sqrt(n: i64) -> i64 {
    if n < 0 {
        return -1;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d23() -> ClassGroup {
        ClassGroup::new(Discriminant::new(23).unwrap()).unwrap()
    }

    #[test]
    fn d23_structure() {
        let g = d23();
        assert_eq!(g.h(), 3);
        let forms: Vec<_> = g.classes().to_vec();
        assert!(forms.contains(&QuadForm { a: 1, b: 1, c: 6 }));
        assert!(forms.contains(&QuadForm { a: 2, b: 1, c: 3 }));
        assert!(forms.contains(&QuadForm { a: 2, b: -1, c: 3 }));
    }

    #[test]
    fn d7_and_d3_class_numbers() {
        let g7 = ClassGroup::new(Discriminant::new(7).unwrap()).unwrap();
        assert_eq!(g7.h(), 1);
        let g3 = ClassGroup::new(Discriminant::new(3).unwrap()).unwrap();
        assert_eq!(g3.h(), 1);
    }

    #[test]
    fn invalid_discriminants() {
        assert!(Discriminant::new(21).is_err()); // not prime
        assert!(Discriminant::new(13).is_err()); // 1 mod 4
        assert!(Discriminant::new(-23).is_err());
    }

    #[test]
    fn group_laws_d23() {
        let g = d23();
        let j = g.index_of(&QuadForm { a: 2, b: 1, c: 3 }).unwrap();
        let jinv = g.index_of(&QuadForm { a: 2, b: -1, c: 3 }).unwrap();
        assert_eq!(g.compose(j, jinv), g.identity());
        assert_eq!(g.compose(j, j), jinv); // order 3
        assert_eq!(g.compose(g.identity(), j), j);
        assert_eq!(g.inverse(j), jinv);
    }

    #[test]
    fn composition_is_group_for_all_d_up_to_1000() {
        for d in (7..=1000).step_by(4) {
            let disc = match Discriminant::new(d) {
                Ok(x) => x,
                Err(_) => continue,
            };
            let g = ClassGroup::new(disc).unwrap();
            assert!(g.h() % 2 == 1, "h even for D={d}");
            let n = g.h();
            for i in 0..n {
                assert_eq!(g.compose(i, g.identity()), i);
                assert_eq!(g.compose(i, g.inverse(i)), g.identity());
                for j in 0..n {
                    assert_eq!(g.compose(i, j), g.compose(j, i));
                    for k in 0..n {
                        assert_eq!(
                            g.compose(g.compose(i, j), k),
                            g.compose(i, g.compose(j, k)),
                            "associativity fails for D={d}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn rep_counts_d23() {
        let g = d23();
        let o = g.identity();
        let j = g.index_of(&QuadForm { a: 2, b: 1, c: 3 }).unwrap();
        let jinv = g.inverse(j);
        assert_eq!(g.rep_count(o, 1), 1);
        assert_eq!(g.rep_count(o, 2), 0);
        assert_eq!(g.rep_count(j, 2) + g.rep_count(jinv, 2), 2);
        assert_eq!(g.rep_count(o, 4), 1); // the ideal (2)
        assert_eq!(g.rep_count(o, 23), 1); // ramified prime is principal
    }

    #[test]
    fn rep_count_oracle_and_symmetry() {
        let g = d23();
        for t in 1..=10_000i64 {
            let total: u64 = (0..g.h()).map(|b| g.rep_count(b, t)).sum();
            assert_eq!(total as i64, g.total_ideal_count(t), "ideal count mismatch at t={t}");
        }
        for b in 0..g.h() {
            let binv = g.inverse(b);
            for t in 1..=500 {
                assert_eq!(g.rep_count(b, t), g.rep_count(binv, t));
            }
        }
    }

    #[test]
    fn kronecker_values() {
        let d = Discriminant::new(23).unwrap();
        assert_eq!(kronecker_symbol(2, d), 1);
        assert_eq!(kronecker_symbol(5, d), -1);
        assert_eq!(kronecker_symbol(23, d), 0);
        assert_eq!(kronecker_symbol(13, d), 1);
        // brute-force square scan oracle
        for p in [2i64, 3, 5, 7, 11, 13, 17, 19] {
            let is_sq = (1..23).any(|x| (x * x) % 23 == p % 23);
            assert_eq!(kronecker_symbol(p, d) == 1, is_sq, "symbol mismatch at {p}");
        }
    }

    #[test]
    fn square_root_classes() {
        let g = d23();
        for i in 0..g.h() {
            let c = g.square_root(i);
            assert_eq!(g.square(c), i);
        }
    }
}
