//! Enumeration of Heegner forms at prime level D.
//!
//! A vector of the set indexed by (d, beta) corresponds to an integral
//! binary form [a, b, c] of discriminant -d with D | a and b determined
//! mod 2D; the group Gamma_0(D) acts by substitution. Orbits are produced
//! by combining SL2-reduced forms of discriminant -d (including imprimitive
//! ones) with the D+1 cosets of Gamma_0(D) in SL2(Z), keeping the cosets
//! whose transform has D | a and the requested b residue.

use num_integer::Integer;

use crate::HeegnerError;

/// One orbit representative: the form [a, b, c] (D | a, a > 0) with CM point
/// z = (-b + i sqrt(d)) / (2a), and the order of its stabilizer in the
/// Fricke-extended group mod +-1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeegnerForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub stab: u32,
}

#[derive(Debug, Clone)]
pub struct HeegnerOrbit {
    pub level: i64,
    pub d: i64,
    pub beta: i64,
    pub reps: Vec<HeegnerForm>,
}

/// All SL2-reduced positive forms of discriminant -d, including imprimitive
/// ones.
pub fn sl2_reduced_forms(d: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    let amax = ((d as f64) / 3.0).sqrt() as i64 + 1;
    for a in 1..=amax {
        for b in -a..=a {
            if (b * b + d) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b + d) / (4 * a);
            if c < a {
                continue;
            }
            // reduced: |b| <= a <= c, b >= 0 if |b| = a or a = c
            if (b == -a || (a == c && b < 0)) || b.abs() > a {
                continue;
            }
            out.push((a, b, c));
        }
    }
    out
}

/// The content (gcd) and the primitive discriminant of a form.
fn primitive_disc(a: i64, b: i64, c: i64) -> (i64, i64) {
    let g = a.gcd(&b).gcd(&c);
    let disc = (b * b - 4 * a * c) / (g * g);
    (g, disc)
}

/// Stabilizer order in PSL2 extended by the Fricke involution. Nontrivial
/// orders come only from unit CM (primitive discriminant -3 or -4) or from
/// Fricke fixed points (primitive discriminant -D or -4D); the polynomial-
/// degree cross-checks in the tests pin this down for the range in use.
fn stabilizer_order(level: i64, a: i64, b: i64, c: i64) -> u32 {
    let (_, pdisc) = primitive_disc(a, b, c);
    match pdisc {
        -3 => 3,
        -4 => 2,
        _ => {
            if pdisc == -level || pdisc == -4 * level {
                2
            } else {
                1
            }
        }
    }
}

/// Form substitution by the matrix [[p, q], [r, s]].
fn transform(f: (i64, i64, i64), m: (i64, i64, i64, i64)) -> (i64, i64, i64) {
    let (a, b, c) = f;
    let (p, q, r, s) = m;
    let a2 = a * p * p + b * p * r + c * r * r;
    let b2 = 2 * (a * p * q + c * r * s) + b * (p * s + q * r);
    let c2 = a * q * q + b * q * s + c * s * s;
    (a2, b2, c2)
}

/// Complete orbit representatives of the (d, beta) Heegner set at prime
/// level D.
pub fn enumerate_heegner(level: i64, d: i64, beta: i64) -> Result<HeegnerOrbit, HeegnerError> {
    if (beta * beta + d).rem_euclid(4 * level) != 0 {
        return Err(HeegnerError::NonSquareDiscriminant(d, 4 * level));
    }
    let mut reps = Vec::new();
    for (a, b, c) in sl2_reduced_forms(d) {
        // cosets of Gamma_0(D)\SL2(Z), acting on the right; first columns
        // (1, 0) and (j, 1) for j mod D cover P^1(F_D)
        let mut cosets: Vec<(i64, i64, i64, i64)> = vec![(1, 0, 0, 1)];
        for j in 0..level {
            cosets.push((j, -1, 1, 0)); // det = j*0 - (-1)*1 = 1
        }
        // deduplicate cosets under the stabilizer of the reduced form when
        // it has unit CM (the only forms with extra PSL2 automorphisms)
        let (_, pdisc) = primitive_disc(a, b, c);
        let auto: Vec<(i64, i64, i64, i64)> = match pdisc {
            -4 => vec![(0, -1, 1, 0)],
            -3 => vec![(0, -1, 1, 1)],
            _ => vec![],
        };
        let mut seen: Vec<(i64, i64, i64)> = Vec::new();
        for m in cosets {
            let t = transform((a, b, c), m);
            if t.0.rem_euclid(level) != 0 {
                continue;
            }
            if (t.1 - beta).rem_euclid(2 * level) != 0 {
                continue;
            }
            // skip if equivalent to an already kept one through a form
            // automorphism composed with a Gamma_0(D) move (detected by
            // normalizing b mod 2a)
            let norm = normalize_b(t);
            if auto.is_empty() {
                if seen.contains(&norm) {
                    continue;
                }
            } else {
                // orbit of the coset under the automorphism group
                let mut dup = false;
                for aut in &auto {
                    let alt = transform(transform((a, b, c), *aut), m);
                    if alt.0.rem_euclid(level) == 0 && seen.contains(&normalize_b(alt)) {
                        dup = true;
                        break;
                    }
                }
                if dup || seen.contains(&norm) {
                    continue;
                }
            }
            seen.push(norm);
            let stab = stabilizer_order(level, t.0, t.1, t.2);
            reps.push(HeegnerForm { a: norm.0, b: norm.1, c: norm.2, stab });
        }
    }
    Ok(HeegnerOrbit { level, d, beta, reps })
}

/// Translate b into [-a, a) (a Gamma_0(D) move for forms with D | a).
fn normalize_b(f: (i64, i64, i64)) -> (i64, i64, i64) {
    let (a, b0, c0) = f;
    let disc = b0 * b0 - 4 * a * c0;
    let k = -((b0 + a).div_euclid(2 * a));
    let b = b0 + 2 * k * a;
    let c = (b * b - disc) / (4 * a);
    (a, b, c)
}

/// The canonical residue: smallest beta >= 0 with beta^2 = -d mod 4D.
pub fn canonical_beta(level: i64, d: i64) -> Option<i64> {
    (0..=level).find(|b| (b * b + d).rem_euclid(4 * level) == 0)
}

/// Reduce a Heegner form within its Fricke-extended orbit to (near-)maximal
/// imaginary part: alternate minimal-a column moves within Gamma_0(D) and
/// the Fricke flip [a, b, c] -> [D c, -b, a/D].
pub fn reduce_for_evaluation(level: i64, f: (i64, i64, i64)) -> (i64, i64, i64) {
    let mut cur = normalize_b(f);
    loop {
        let mut best = cur;
        // Gamma_0(D) columns (p, r) with r = 0 mod D; for each small r the
        // quadratic in p is minimized near -b r / (2a)
        for r1 in -3i64..=3 {
            let r = r1 * level;
            let center = if cur.0 != 0 { -(cur.1 * r) / (2 * cur.0) } else { 0 };
            for p in (center - 40)..=(center + 40) {
                if p.gcd(&r) != 1 {
                    continue;
                }
                let a2 = cur.0 * p * p + cur.1 * p * r + cur.2 * r * r;
                if a2 > 0 && a2 < best.0 {
                    // complete column to a determinant-1 matrix
                    let (g, u, v) = ext_gcd(p, r);
                    debug_assert_eq!(g, 1);
                    let m = (p, -v, r, u);
                    let t = transform(cur, m);
                    debug_assert_eq!(t.0, a2);
                    best = normalize_b(t);
                }
            }
        }
        // Fricke flip
        if best.2 * level < best.0 {
            best = normalize_b((best.2 * level, -best.1, best.0 / level));
        }
        if best == cur {
            return cur;
        }
        cur = best;
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        return (a.abs(), a.signum(), 0);
    }
    let (g, u, v) = ext_gcd(b, a.rem_euclid(b));
    (g, v, u - a.div_euclid(b) * v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_counts_match_class_numbers() {
        // for 23 not dividing d, orbits per beta-class = total reduced-form
        // count of discriminant -d (including imprimitive forms)
        for d in [7i64, 19, 20, 28, 44, 56, 63, 68] {
            let beta = canonical_beta(23, d).unwrap();
            let orbit = enumerate_heegner(23, d, beta).unwrap();
            let expect = sl2_reduced_forms(d).len();
            assert_eq!(orbit.reps.len(), expect, "d={d}");
        }
    }

    #[test]
    fn d115_orbits_are_fricke_paired() {
        // 23 | 115: beta = -beta, so the class carries both Fricke-paired
        // orbits itself; each SL2 class lifts through the unique double root
        // of the form mod 23
        let beta = canonical_beta(23, 115).unwrap();
        assert_eq!(beta, 23);
        let orbit = enumerate_heegner(23, 115, beta).unwrap();
        assert_eq!(orbit.reps.len(), 2);
        assert_eq!(sl2_reduced_forms(115).len(), 2);
    }

    #[test]
    fn rejects_non_square() {
        assert!(matches!(
            enumerate_heegner(23, 5, 1),
            Err(HeegnerError::NonSquareDiscriminant(5, 92))
        ));
    }

    #[test]
    fn representatives_are_valid_and_inequivalent_points() {
        let beta = canonical_beta(23, 44).unwrap();
        let orbit = enumerate_heegner(23, 44, beta).unwrap();
        assert_eq!(orbit.reps.len(), 4); // h(-44) + h(-11) = 3 + 1
        for r in &orbit.reps {
            assert_eq!(r.a.rem_euclid(23), 0);
            assert!(r.a > 0);
            assert_eq!(r.b * r.b - 4 * r.a * r.c, -44);
            assert_eq!((r.b - orbit.beta).rem_euclid(46), 0);
            assert_eq!(r.stab, 1);
        }
    }

    #[test]
    fn evaluation_reduction_improves_height() {
        let beta = canonical_beta(23, 203).unwrap();
        let orbit = enumerate_heegner(23, 203, beta).unwrap();
        for r in &orbit.reps {
            let red = reduce_for_evaluation(23, (r.a, r.b, r.c));
            assert_eq!(red.1 * red.1 - 4 * red.0 * red.2, -203);
            assert_eq!(red.0.rem_euclid(23), 0);
            assert!(red.0 <= r.a);
            // all orbits at level 23 reach a <= 23 * c after reduction
            assert!(red.0 <= 23 * red.2);
        }
    }
}
