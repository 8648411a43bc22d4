use std::collections::BTreeMap;
use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{gf4_matrix_string, matrix_string, resolved_threads, ExperimentReport, Verdicts, DEFAULT_SEED};
use crate::codes::{five_qubit_boundary, steane_boundary, steane_gf4_boundary};
use crate::css::code_from_complex;
use crate::distance::{distance_with, SearchOptions};
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::gf4::{enumerate_selfadjoint_invertible, gf4_distance_upper_bound, gf4_distance_with, gf4_product};
use crate::par;
use crate::product::product;

pub const EXPERIMENTS: [&str; 4] = [
    "steane-css-params",
    "steane-squared",
    "fivequbit-squared",
    "steane-by-fivequbit",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReproduceOptions {
    pub seed: u64,
    /// 0 uses every core.
    pub threads: usize,
    /// Most self-adjoint 3×3 matrices sampled for the Steane side of the mixed product.
    pub sample_cap: usize,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        ReproduceOptions {
            seed: DEFAULT_SEED,
            threads: 0,
            sample_cap: 200,
        }
    }
}

pub fn reproduce(name: &str, opts: &ReproduceOptions) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut verdicts = Verdicts::default();
    let mut params = BTreeMap::new();
    let results = match name {
        "steane-css-params" => steane_params(&mut verdicts)?,
        "steane-squared" => steane_squared(opts.threads, &mut verdicts)?,
        "fivequbit-squared" => fivequbit_squared(opts.threads, &mut verdicts)?,
        "steane-by-fivequbit" => {
            params.insert("sample_cap".into(), json!(opts.sample_cap));
            params.insert("bound".into(), json!(MIXED_BOUND));
            mixed(opts, &mut verdicts)?
        }
        other => return Err(Error::UnknownExperiment(other.to_string())),
    };
    Ok(ExperimentReport {
        name: name.to_string(),
        params,
        results,
        pass: verdicts.0.is_empty(),
        failures: verdicts.0,
        seed: opts.seed,
        wall_time: start.elapsed().as_secs_f64(),
        threads: resolved_threads(opts.threads),
    })
}

fn steane_params(verdicts: &mut Verdicts) -> Result<Value> {
    let d = steane_boundary(&BitMatrix::identity(3))?;
    let code = code_from_complex(&d);
    let dist = distance_with(&d, &SearchOptions::default())?;
    let (n, k, w) = (code.n(), code.k(), code.stabilizer_weight());
    verdicts.check("steane-parameters", (n, k, w, dist.d_z, dist.d_x) == (7, 1, 4, 3, 3));
    Ok(json!({ "n": n, "k": k, "w": w, "d_z": dist.d_z, "d_x": dist.d_x }))
}

fn invertible_3x3() -> Vec<BitMatrix> {
    (0u32..512)
        .map(|code| BitMatrix::from_fn(3, 3, |r, c| code >> (3 * r + c) & 1 == 1))
        .filter(BitMatrix::is_invertible)
        .collect()
}

fn steane_squared(threads: usize, verdicts: &mut Verdicts) -> Result<Value> {
    let us = invertible_3x3();
    let identity = steane_boundary(&BitMatrix::identity(3))?;
    let rows = par::with_threads(threads, |parallel| {
        par::map(us.len(), parallel, |i| -> Result<Value> {
            let p = product(&steane_boundary(&us[i])?, &identity);
            let code = code_from_complex(p.operator());
            let dist = distance_with(p.operator(), &SearchOptions::default())?;
            Ok(json!({
                "u": matrix_string(&us[i]),
                "symmetric": us[i].is_symmetric(),
                "n": code.n(),
                "k": code.k(),
                "w": code.stabilizer_weight(),
                "d_z": dist.d_z,
                "d_x": dist.d_x,
                "d": dist.distance(),
            }))
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let dichotomy = rows.iter().all(|r| {
        let expected = if r["symmetric"].as_bool() == Some(true) { 7 } else { 9 };
        r["n"] == 49 && r["k"] == 1 && r["d"] == expected
    });
    verdicts.check("steane-squared-dichotomy", dichotomy && rows.len() == 168);
    verdicts.check("steane-squared-weight", rows.iter().all(|r| r["w"].as_u64() <= Some(8)));
    let bucket = |sym: bool| -> BTreeMap<String, usize> {
        let mut h = BTreeMap::new();
        for r in rows.iter().filter(|r| r["symmetric"] == sym) {
            *h.entry(r["d"].to_string()).or_default() += 1;
        }
        h
    };
    Ok(json!({
        "count": rows.len(),
        "symmetric_distances": bucket(true),
        "nonsymmetric_distances": bucket(false),
        "per_u": rows,
    }))
}

fn fivequbit_squared(threads: usize, verdicts: &mut Verdicts) -> Result<Value> {
    let us = enumerate_selfadjoint_invertible(2)?;
    verdicts.check("selfadjoint-count", us.len() == 10);
    let factors = us.iter().map(five_qubit_boundary).collect::<Result<Vec<_>>>()?;
    let m = factors.len();
    let rows = par::with_threads(threads, |parallel| {
        par::map(m * m, parallel, |t| -> Result<Value> {
            let (i, j) = (t / m, t % m);
            let p = gf4_product(&factors[i], &factors[j]);
            let dist = gf4_distance_with(&p, &SearchOptions::default())?;
            Ok(json!({
                "u": gf4_matrix_string(&us[i]),
                "v": gf4_matrix_string(&us[j]),
                "n": p.dim(),
                "k": p.hom_dim(),
                "w": p.weight(),
                "d": dist.d,
            }))
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    verdicts.check(
        "fivequbit-squared-params",
        rows.iter().all(|r| r["n"] == 25 && r["k"] == 1 && r["d"] == 5),
    );
    verdicts.check(
        "fivequbit-squared-weight",
        rows.iter().all(|r| r["w"].as_u64() <= Some(8)),
    );
    let at_five = rows.iter().filter(|r| r["d"] == 5).count();
    Ok(json!({ "pairs": rows.len(), "pairs_at_d5": at_five, "per_pair": rows }))
}

const MIXED_BOUND: usize = 6;

fn mixed(opts: &ReproduceOptions, verdicts: &mut Verdicts) -> Result<Value> {
    let us5 = enumerate_selfadjoint_invertible(2)?;
    let all7 = enumerate_selfadjoint_invertible(3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut picked = sample(&mut rng, all7.len(), opts.sample_cap.min(all7.len())).into_vec();
    picked.sort_unstable();
    let f5 = us5.iter().map(five_qubit_boundary).collect::<Result<Vec<_>>>()?;
    let f7 = picked
        .iter()
        .map(|&i| steane_gf4_boundary(&all7[i]))
        .collect::<Result<Vec<_>>>()?;
    let (a, b) = (f5.len(), f7.len());
    let rows = par::with_threads(opts.threads, |parallel| {
        par::map(a * b, parallel, |t| -> Result<Value> {
            let (i, j) = (t / b, t % b);
            let p = gf4_product(&f5[i], &f7[j]);
            let s = gf4_distance_upper_bound(&p, MIXED_BOUND, &SearchOptions::default())?;
            Ok(json!({
                "u": gf4_matrix_string(&us5[i]),
                "v": gf4_matrix_string(&all7[picked[j]]),
                "n": p.dim(),
                "k": p.hom_dim(),
                "method": s.method,
                "witness_weight": s.witness.as_ref().map(|w| w.weight()),
            }))
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let found = rows.iter().filter(|r| !r["witness_weight"].is_null()).count();
    verdicts.check("mixed-product-bound", found == rows.len());
    Ok(json!({
        "selfadjoint_3x3_total": all7.len(),
        "sampled_indices": picked,
        "pairs": rows.len(),
        "pairs_with_witness": found,
        "per_pair": rows,
    }))
}
