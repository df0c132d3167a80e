//! Pinned reference data for the discriminant-23 worked example, embedded
//! at compile time.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Deserialize;

#[derive(Deserialize)]
struct FTableRepr {
    c: BTreeMap<String, i64>,
}

/// t -> c(-t) for the weight-1 form.
pub fn f_table() -> BTreeMap<i64, i64> {
    let repr: FTableRepr =
        serde_json::from_str(include_str!("../golden/f_table.json")).expect("f_table.json");
    repr.c.into_iter().map(|(k, v)| (k.parse().unwrap(), v)).collect()
}

#[derive(Deserialize)]
struct BTableRepr {
    b: BTreeMap<String, i64>,
}

/// d -> b(-d), the 24-scaled preimage coefficients.
pub fn b_table() -> BTreeMap<i64, i64> {
    let repr: BTableRepr =
        serde_json::from_str(include_str!("../golden/b_table.json")).expect("b_table.json");
    repr.b.into_iter().map(|(k, v)| (k.parse().unwrap(), v)).collect()
}

#[derive(Deserialize)]
struct JstarRepr {
    coeffs: BTreeMap<String, i64>,
}

/// n -> coefficient of q^n in the Hauptmodul.
pub fn jstar_coeffs() -> BTreeMap<i64, i64> {
    let repr: JstarRepr =
        serde_json::from_str(include_str!("../golden/jstar.json")).expect("jstar.json");
    repr.coeffs.into_iter().map(|(k, v)| (k.parse().unwrap(), v)).collect()
}

#[derive(Deserialize)]
pub struct FinalExponents {
    pub exponents: BTreeMap<String, i64>,
    pub rho_abs: i64,
}

pub fn final_exponents() -> FinalExponents {
    serde_json::from_str(include_str!("../golden/final_exponents.json"))
        .expect("final_exponents.json")
}

#[derive(Deserialize)]
pub struct HPolyRow {
    /// factors as (constant-first coefficients, multiplicity)
    pub factors: Vec<(Vec<i64>, u32)>,
    pub exps: BTreeMap<String, i64>,
    pub rho: i64,
}

#[derive(Deserialize)]
struct HPolysRepr {
    rows: BTreeMap<String, HPolyRow>,
}

pub fn h_poly_rows() -> BTreeMap<i64, HPolyRow> {
    let repr: HPolysRepr =
        serde_json::from_str(include_str!("../golden/h_polys.json")).expect("h_polys.json");
    repr.rows.into_iter().map(|(k, v)| (k.parse().unwrap(), v)).collect()
}

impl HPolyRow {
    /// Expand the factored form into coefficients, constant term first.
    pub fn expand(&self) -> Vec<BigInt> {
        let mut acc = vec![BigInt::from(1)];
        for (coeffs, mult) in &self.factors {
            for _ in 0..*mult {
                let mut next = vec![BigInt::from(0); acc.len() + coeffs.len() - 1];
                for (i, a) in acc.iter().enumerate() {
                    for (j, b) in coeffs.iter().enumerate() {
                        next[i + j] += a * BigInt::from(*b);
                    }
                }
                acc = next;
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_parse_and_have_expected_sizes() {
        assert_eq!(f_table().len(), 10);
        assert_eq!(b_table().len(), 43);
        assert_eq!(h_poly_rows().len(), 25);
        assert_eq!(jstar_coeffs().len(), 9);
        assert_eq!(final_exponents().exponents.len(), 8);
    }

    #[test]
    fn expansion_of_squares() {
        let rows = h_poly_rows();
        // (X+2)^2 = 4 + 4X + X^2
        let h7 = rows[&7].expand();
        assert_eq!(h7, vec![4.into(), 4.into(), 1.into()]);
        // degree of the d=44 row: (X+1)^2 (cubic)^2 -> 8
        assert_eq!(rows[&44].expand().len(), 9);
    }
}
