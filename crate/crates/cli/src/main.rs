//! Command-line front end. Every subcommand prints a single JSON document
//! on stdout; exit code 0 on success, 2 on reference-data mismatch, 1 on
//! usage or computation errors.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;
use pet1_cli::{cache::Cache, golden, pipeline};
use qexp::Rat;
use serde_json::json;

#[derive(Parser)]
#[command(name = "pet1", about = "regularized weight-one pairings at prime discriminant", version)]
struct Args {
    /// cache directory (defaults to $PET1_CACHE; unset disables caching)
    #[arg(long, global = true)]
    cache_dir: Option<std::path::PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Class group: classes and composition table
    Classgroup {
        #[arg(long)]
        disc: i64,
    },
    /// Ideal counts r_B(t) for t = 1..upto
    Repcount {
        #[arg(long)]
        disc: i64,
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 50)]
        upto: i64,
    },
    /// Theta series components of a class
    Theta {
        #[arg(long)]
        disc: i64,
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 200)]
        prec: i64,
    },
    /// Classical series by name
    Series {
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 50)]
        prec: i64,
    },
    /// The weight-1/2 preimage and its coefficient table
    SeesawH {
        #[arg(long, default_value_t = 23)]
        disc: i64,
        #[arg(long, default_value_t = 240)]
        prec: i64,
        #[arg(long)]
        dump_table: bool,
    },
    /// One Heegner polynomial and its value factorization
    HeegnerPoly {
        #[arg(long, default_value_t = 23)]
        disc: i64,
        #[arg(short, long)]
        d: i64,
    },
    /// The full product expansion evaluated at the CM point
    BorcherdsEval {
        #[arg(long, default_value_t = 23)]
        disc: i64,
        #[arg(long, default_value_t = 192)]
        bits: usize,
    },
    /// Numerical regularized pairing
    Petersson {
        #[arg(long, default_value_t = 23)]
        disc: i64,
        #[arg(long, default_value = "O")]
        class: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// split height between numeric strip quadrature and analytic tail
        #[arg(long = "T", default_value_t = 12.0)]
        t_split: f64,
    },
    /// Closed-form factor report
    Factor {
        #[arg(long, default_value_t = 23)]
        disc: i64,
        #[arg(long, default_value = "O")]
        class: String,
        #[arg(long)]
        prime: Option<i64>,
        #[arg(long)]
        with_ramified: bool,
    },
    /// Higher Green's function values through the same pipeline
    Green {
        #[arg(short, long)]
        k: u32,
    },
    /// Full end-to-end verification of the worked example
    VerifyExample,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cache = match &args.cache_dir {
        Some(d) => Cache::new(Some(d.clone())),
        None => Cache::from_env(),
    };
    match run(args.cmd, &cache) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Cmd, cache: &Cache) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cmd {
        Cmd::Classgroup { disc } => {
            let g = pipeline::group(disc)?;
            let classes: Vec<String> =
                (0..g.h()).map(|i| factor_oracle::report::class_label(&g, i)).collect();
            let table: Vec<Vec<String>> = (0..g.h())
                .map(|i| (0..g.h()).map(|j| classes[g.compose(i, j)].clone()).collect())
                .collect();
            emit(&json!({
                "D": disc,
                "h": g.h(),
                "classes": classes,
                "composition": table,
            }));
        }
        Cmd::Repcount { disc, class, upto } => {
            let g = pipeline::group(disc)?;
            let b = parse_class(&g, &class)?;
            let counts: BTreeMap<i64, u64> = (1..=upto).map(|t| (t, g.rep_count(b, t))).collect();
            emit(&json!({
                "D": disc,
                "class": factor_oracle::report::class_label(&g, b),
                "r": counts,
            }));
        }
        Cmd::Theta { disc, class, prec } => {
            let g = pipeline::group(disc)?;
            let b = parse_class(&g, &class)?;
            let th = pipeline::theta_cached(cache, &g, b, prec);
            emit(&json!({
                "D": disc,
                "class": factor_oracle::report::class_label(&g, b),
                "weight": 1,
                "components": th.components(),
            }));
        }
        Cmd::Series { name, prec } => {
            let s = named_series(&name, prec)?;
            emit(&json!({ "name": name, "series": s }));
        }
        Cmd::SeesawH { disc, prec, dump_table } => {
            if disc != 23 {
                return Err("only discriminant 23 is wired end to end".into());
            }
            if prec < 50 {
                return Err("precision must be at least 50 for the worked pipeline".into());
            }
            let g = pipeline::group23();
            let pre = pipeline::worked_h(cache, &g, prec);
            let coeffs = pipeline::h_coefficient_map(&pre.h);
            let table: BTreeMap<i64, String> = coeffs
                .iter()
                .map(|(d, c)| (*d, (c * qexp::rat_i(24)).to_string()))
                .collect();
            let mut doc = json!({
                "D": 23,
                "weight": "1/2",
                "corrections": pre.corrections.iter().map(|(s, c)| json!({"s": s, "coefficient": c.to_string()})).collect::<Vec<_>>(),
                "scaled_b_table": table,
                "scale": 24,
            });
            if dump_table {
                doc["components"] = serde_json::to_value(pre.h.components())?;
            }
            let golden_b = golden::b_table();
            let matches = golden_b.iter().all(|(d, b)| {
                coeffs.get(d).map(|c| c * qexp::rat_i(24) == qexp::rat_i(*b)).unwrap_or(false)
            });
            doc["matches_reference"] = json!(matches);
            emit(&doc);
            if !matches {
                return Ok(ExitCode::from(2));
            }
        }
        Cmd::HeegnerPoly { disc, d } => {
            if disc != 23 {
                return Err("only level 23 has a pinned Hauptmodul".into());
            }
            let jstar = heegner::j_star_23(800)?;
            let poly = heegner::heegner_polynomial(&jstar, 23, d, 192)?;
            let value = heegner::borcherds::evaluate_at_cm(&poly.coeffs);
            let f = heegner::factor(&value)?;
            emit(&json!({
                "d": d,
                "coefficients": poly.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "rounding_residual": poly.rounding_residual,
                "value": value.to_string(),
                "factorization": { "exps": f.exps, "rho": f.rho_pow, "negative": f.negative },
            }));
        }
        Cmd::BorcherdsEval { disc, bits } => {
            if disc != 23 {
                return Err("only level 23 has a pinned Hauptmodul".into());
            }
            if bits < 128 {
                return Err("CM evaluation needs at least 128 mantissa bits".into());
            }
            let g = pipeline::group23();
            let (rows, total) = pipeline::full_product(cache, &g, bits);
            let report = factor_oracle::report::borcherds_report(&g, &total, 23);
            let la = heegner::borcherds::log_abs_alpha(&total, 192);
            emit(&json!({
                "D": 23,
                "rows": rows.iter().map(|r| json!({
                    "d": r.d,
                    "coefficient_24h": (r.coefficient.clone() * qexp::rat_i(24)).to_string(),
                    "value": r.value.to_string(),
                    "exps": r.factorization.exps,
                    "rho": r.factorization.rho_pow,
                })).collect::<Vec<_>>(),
                "alpha": { "exps": total.exps, "rho": total.rho_pow },
                "log_abs_alpha": la.to_dec_string(24),
                "report": report,
            }));
        }
        Cmd::Petersson { disc, class, tol, t_split } => {
            if disc != 23 {
                return Err("only discriminant 23 is wired end to end".into());
            }
            let g = pipeline::group23();
            let b = parse_class(&g, &class)?;
            let f = pipeline::worked_f(&g, 900);
            let th = pipeline::theta_cached(cache, &g, b, 900);
            let opts = petersson::PeterssonOptions { tol, t_split, ..Default::default() };
            let v = petersson::regularized_petersson(&f, &th, &opts)?;
            // reference value from the exact pipeline
            let (_, total) = pipeline::full_product(cache, &g, 192);
            let la = heegner::borcherds::log_abs_alpha(&total, 192);
            let bridged = -0.5 * v.value.to_f64();
            emit(&json!({
                "D": 23,
                "class": factor_oracle::report::class_label(&g, b),
                "value": v.value.to_dec_string(24),
                "error_estimate": v.error_estimate,
                "log_alpha_from_factorization": la.to_dec_string(24),
                "bridge_constant": -0.5,
                "difference": (bridged - la.to_f64()).abs(),
            }));
        }
        Cmd::Factor { disc, class, prime, with_ramified } => {
            let g = pipeline::group(disc)?;
            if disc != 23 {
                return Err("only discriminant 23 is wired end to end".into());
            }
            let b = parse_class(&g, &class)?;
            let f = pipeline::worked_f(&g, 80);
            let pp = factor_oracle::PrincipalPart::of_form(&f);
            let mut report = factor_oracle::report::formula_report(&pp, &g, b, 23)?;
            if let Some(p) = prime {
                report.primes.retain(|e| e.p == p);
            }
            if !with_ramified {
                report.diagnostics.push("ramified entry is conjectural".into());
            }
            emit(&serde_json::to_value(&report)?);
        }
        Cmd::Green { k } => {
            let doc = green_report(k)?;
            emit(&doc);
        }
        Cmd::VerifyExample => {
            let (doc, ok) = verify_example(cache)?;
            emit(&doc);
            if !ok {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn emit(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn parse_class(
    g: &quadclass::ClassGroup,
    s: &str,
) -> Result<quadclass::ClassIdx, Box<dyn std::error::Error>> {
    factor_oracle::report::parse_class_label(g, s)
        .ok_or_else(|| format!("unknown class label {s:?}").into())
}

fn named_series(name: &str, prec: i64) -> Result<qexp::QExpansion, Box<dyn std::error::Error>> {
    use vvforms::classical;
    Ok(match name {
        "E4" => classical::eisenstein(4, prec)?,
        "E6" => classical::eisenstein(6, prec)?,
        "Delta" => classical::delta(prec),
        "DeltaInv" => classical::delta_inv(prec),
        "j" => classical::j_invariant(prec),
        "eta" => classical::eta(prec),
        "theta0" => classical::jacobi_thetas(prec).0,
        "theta1" => classical::jacobi_thetas(prec).1,
        "jstar23" => heegner::j_star_23(prec)?,
        "psi0" | "psi1" | "phi0" | "phi1" => {
            let (p0, p1, f0, f1) = vvforms::jacobi::weak_jacobi_components(prec)?;
            match name {
                "psi0" => p0,
                "psi1" => p1,
                "phi0" => f0,
                _ => f1,
            }
        }
        "g2" | "g3" | "g4" | "g5" | "g7" => {
            let k = name[1..].parse::<u32>()?;
            classical::weakly_holo_gk(k, prec)?
        }
        _ => return Err(format!("unknown series {name:?}").into()),
    })
}

/// The Green's-function pipeline: f_k = [g_k, Theta_{B Cbar}]_{k-1}, paired
/// with Theta_{BC}; the closed formula gives the valuation vector of
/// alpha_k with 23^{k-1} G_k = log|alpha_k|.
fn green_report(k: u32) -> Result<serde_json::Value, Box<dyn std::error::Error>> {
    if ![2u32, 3, 4, 5, 7].contains(&k) {
        return Err("k must lie in {2, 3, 4, 5, 7}".into());
    }
    let g = pipeline::group23();
    let j = pipeline::class_j(&g);
    // B and C are the classes of the two CM ideals; B Cbar = J-side,
    // B C = principal
    let prec = 80;
    let gk = vvforms::classical::weakly_holo_gk(k, prec / 23 + 4)?;
    let th = vvforms::theta::theta_series(&g, j, prec + 23)?;
    let fk = vvforms::rankin::bracket_vector(&gk, 2 * (2 - 2 * k as i64), &th, k - 1)?;
    // scale to integrality
    let mut denom = num_bigint::BigInt::from(1);
    for nu in fk.group().elements() {
        for (_, c) in fk.component(nu).terms() {
            let d = c.denom().clone();
            denom = num_integer::lcm(denom.clone(), d);
        }
    }
    // the scale is 23^(k-1): the scaled pairing is exactly 23^(k-1) G_k,
    // whose value is log|alpha_k| with integer valuations
    let scaled = fk.scale(&Rat::from_integer(denom.clone()));
    let pp = factor_oracle::PrincipalPart::of_form(&scaled);
    let mut exps = BTreeMap::new();
    let mut log_alpha = 0f64;
    for p in [5i64, 7, 11, 13, 17, 19] {
        if quadclass::kronecker_symbol(p, g.discriminant()) != -1 {
            continue;
        }
        let e1 = factor_oracle::theorem1_valuation(&pp, &g, g.identity(), p, g.identity())?;
        let e2 = factor_oracle::theorem1_valuation(&pp, &g, g.identity(), p, j)?;
        log_alpha += e1 as f64 * pi_log(p, true) + e2 as f64 * pi_log(p, false);
        let mut per = BTreeMap::new();
        for a in 0..g.h() {
            let e = if a == g.identity() { e1 } else { e2 };
            per.insert(factor_oracle::report::class_label(&g, a), e);
        }
        exps.insert(p.to_string(), per);
    }
    let ram = factor_oracle::ramified_valuation(&pp, &g, g.identity(), g.identity());
    Ok(json!({
        "k": k,
        "pairing_class": "O",
        "bracket_class": factor_oracle::report::class_label(&g, j),
        "integrality_scale": denom.to_string(),
        "exponents": exps,
        "ramified": { "e": ram, "experimental": true },
        "note": "23^(k-1) G_k(z1, z2) = log|alpha_k|; the unit part is not determined by the closed formula",
        "log_alpha_partial": log_alpha,
    }))
}

/// log of the absolute real embedding of the degree-1 / degree-2 prime
/// element over the inert rational p.
fn pi_log(p: i64, deg1: bool) -> f64 {
    let pr = 128;
    for (_, v, n) in heegner::pi_basis() {
        let matches = if deg1 { n == p } else { n == p * p };
        if matches {
            return v.embed(pr).abs().ln().to_f64();
        }
    }
    for (_, v, n) in heegner::cubic::extended_basis() {
        let matches = if deg1 { *n == p } else { *n == p * p };
        if matches {
            return v.embed(pr).abs().ln().to_f64();
        }
    }
    // primes outside the basis: split log p by residue degree
    if deg1 {
        (p as f64).ln() / 3.0
    } else {
        2.0 * (p as f64).ln() / 3.0
    }
}

fn verify_example(cache: &Cache) -> Result<(serde_json::Value, bool), Box<dyn std::error::Error>> {
    let g = pipeline::group23();
    let mut ok = true;
    let mut steps = Vec::new();

    // f-table
    let f = pipeline::worked_f(&g, 80);
    let ftab = golden::f_table();
    let f_ok = ftab.iter().all(|(t, c)| {
        let nu = (0..23).find(|v| (v * v + t).rem_euclid(23) == 0).unwrap() as u32;
        f.component(nu).coeff(-t) == qexp::rat_i(*c)
    });
    ok &= f_ok;
    steps.push(json!({"step": "f-table", "pass": f_ok}));

    // b-table
    let pre = pipeline::worked_h(cache, &g, 240);
    let coeffs = pipeline::h_coefficient_map(&pre.h);
    let btab = golden::b_table();
    let b_ok = btab.len() == coeffs.len()
        && btab.iter().all(|(d, b)| {
            coeffs.get(d).map(|c| c * qexp::rat_i(24) == qexp::rat_i(*b)).unwrap_or(false)
        });
    ok &= b_ok;
    steps.push(json!({"step": "b-table (scale 24)", "pass": b_ok}));

    // product
    let (rows, total) = pipeline::full_product(cache, &g, 192);
    let fin = golden::final_exponents();
    let exps_ok = fin.exponents.iter().all(|(n, e)| {
        total.exps.get(n.as_str()).copied().unwrap_or(0) == *e
    }) && total.exps.len() == fin.exponents.len();
    let rho_ok = total.rho_pow.abs() == fin.rho_abs;
    ok &= exps_ok && rho_ok;
    steps.push(json!({
        "step": "final exponent vector",
        "pass": exps_ok,
        "rho_power": total.rho_pow,
        "rho_abs_matches": rho_ok,
        "note": "the two source displays disagree on the unit-power sign; the computed value is reported",
    }));

    // H-table rows
    let hrows = golden::h_poly_rows();
    let mut h_ok = true;
    for (d, row) in &hrows {
        let r = rows.iter().find(|r| r.d == *d);
        let Some(r) = r else {
            h_ok = false;
            continue;
        };
        if r.poly.coeffs != row.expand() {
            h_ok = false;
        }
        let exps_match = row.exps.iter().all(|(n, e)| {
            r.factorization.exps.get(n.as_str()).copied().unwrap_or(0) == *e
        }) && r.factorization.exps.len() == row.exps.len()
            && r.factorization.rho_pow == row.rho;
        h_ok &= exps_match;
    }
    ok &= h_ok;
    steps.push(json!({"step": "25 tabulated polynomials and CM values", "pass": h_ok}));

    let la = heegner::borcherds::log_abs_alpha(&total, 192);
    Ok((
        json!({
            "D": 23,
            "steps": steps,
            "alpha": { "exps": total.exps, "rho": total.rho_pow },
            "log_abs_alpha": la.to_dec_string(24),
            "pass": ok,
        }),
        ok,
    ))
}
