use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{resolved_threads, ExperimentReport, Verdicts};
use crate::complex::{is_good, random_boundary, BoundaryOperator};
use crate::distance::{distance_with, min_weight_in_span, DistanceResult, SearchOptions};
use crate::error::{Error, Result};
use crate::par;
use crate::product::product;

/// Largest number of samples per run.
pub const MAX_SAMPLES: usize = 1_000_000;

/// Products are sampled and solved exactly only up to this factor size.
pub const SMALL_PRODUCT_M: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloParams {
    pub m: usize,
    pub h: usize,
    pub m_prime: usize,
    /// Weight threshold as a fraction of `m`.
    pub c: f64,
    pub samples: usize,
    pub seed: u64,
}

impl MonteCarloParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c < 1.0) {
            return Err(Error::InvalidParameter(format!("c = {} is not in (0, 1)", self.c)));
        }
        if self.h > self.m || !(self.m - self.h).is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "m - h must be even and non-negative (m={}, h={})",
                self.m, self.h
            )));
        }
        if self.m_prime > self.m {
            return Err(Error::InvalidParameter(format!(
                "m' = {} exceeds m = {}",
                self.m_prime, self.m
            )));
        }
        if self.samples > MAX_SAMPLES {
            return Err(Error::Budget {
                required: self.samples as u128,
                budget: MAX_SAMPLES as u128,
            });
        }
        Ok(())
    }

    fn with_products(&self) -> bool {
        self.m <= SMALL_PRODUCT_M && self.h >= 1
    }
}

struct Sample {
    kernel_min: usize,
    good: bool,
    product: Option<ProductSample>,
}

struct ProductSample {
    d: usize,
    sandwich: bool,
}

fn sandwich(d1: &DistanceResult, d2: &DistanceResult, p: &DistanceResult) -> bool {
    let holds = |a: usize, b: usize, d: usize| a.max(b) <= d && d <= a * b;
    holds(d1.d_z, d2.d_z, p.d_z) && holds(d1.d_x, d2.d_x, p.d_x)
}

fn draw(p: &MonteCarloParams, i: usize) -> Result<Sample> {
    // One ChaCha stream per sample, so results do not depend on scheduling.
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    rng.set_stream(i as u64);
    let opts = SearchOptions::default();
    let d = random_boundary(p.m, p.h, &mut rng)?;
    let kernel_min = min_weight_in_span(&d.kernel(), &opts)?.map_or(0, |(w, _)| w);
    let good = is_good(&d, p.m_prime);
    let product = if p.with_products() {
        let d2 = random_boundary(p.m, p.h, &mut rng)?;
        Some(product_sample(&d, &d2, &opts)?)
    } else {
        None
    };
    Ok(Sample {
        kernel_min,
        good,
        product,
    })
}

fn product_sample(d1: &BoundaryOperator, d2: &BoundaryOperator, opts: &SearchOptions) -> Result<ProductSample> {
    let r1 = distance_with(d1, opts)?;
    let r2 = distance_with(d2, opts)?;
    let rp = distance_with(product(d1, d2).operator(), opts)?;
    Ok(ProductSample {
        d: rp.distance(),
        sandwich: sandwich(&r1, &r2, &rp),
    })
}

fn histogram(values: impl Iterator<Item = usize>) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for v in values {
        *h.entry(v).or_default() += 1;
    }
    h
}

/// Samples random boundary operators and reports low-weight kernels, goodness
/// and, for small `m`, exact product distances.
pub fn montecarlo(p: &MonteCarloParams, threads: usize) -> Result<ExperimentReport> {
    p.validate()?;
    let start = Instant::now();
    let samples = par::with_threads(threads, |parallel| par::map(p.samples, parallel, |i| draw(p, i)))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let threshold = p.c * p.m as f64;
    let low = samples.iter().filter(|s| (s.kernel_min as f64) < threshold).count();
    let not_good = samples.iter().filter(|s| !s.good).count();
    let fraction = |k: usize| {
        if p.samples == 0 {
            0.0
        } else {
            k as f64 / p.samples as f64
        }
    };
    let mut verdicts = Verdicts::default();
    let products = if p.with_products() {
        let violations = samples
            .iter()
            .filter(|s| s.product.as_ref().is_some_and(|q| !q.sandwich))
            .count();
        verdicts.check("distance-sandwich", violations == 0);
        json!({
            "samples": p.samples,
            "distance_histogram": histogram(samples.iter().filter_map(|s| s.product.as_ref().map(|q| q.d))),
            "sandwich_violations": violations,
        })
    } else {
        Value::Null
    };
    let results = json!({
        "weight_threshold": threshold,
        "low_weight_count": low,
        "low_weight_fraction": fraction(low),
        "not_good_count": not_good,
        "not_good_fraction": fraction(not_good),
        "kernel_min_histogram": histogram(samples.iter().map(|s| s.kernel_min)),
        "products": products,
    });
    let params = serde_json::to_value(p)
        .expect("params serialize")
        .as_object()
        .expect("params are an object")
        .clone()
        .into_iter()
        .collect();
    Ok(ExperimentReport {
        name: "montecarlo".into(),
        params,
        results,
        pass: verdicts.0.is_empty(),
        failures: verdicts.0,
        seed: p.seed,
        wall_time: start.elapsed().as_secs_f64(),
        threads: resolved_threads(threads),
    })
}

/// Runs [`montecarlo`] for each `m` (same seed, same gap `m - m_prime`) and
/// checks that the low-weight fraction does not increase with `m`.
pub fn montecarlo_trend(ms: &[usize], template: &MonteCarloParams, threads: usize) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut runs = Vec::new();
    for &m in ms {
        let m_prime = (m + template.m_prime).saturating_sub(template.m);
        runs.push(montecarlo(
            &MonteCarloParams {
                m,
                m_prime,
                ..*template
            },
            threads,
        )?);
    }
    let fractions: Vec<f64> = runs
        .iter()
        .map(|r| r.results["low_weight_fraction"].as_f64().expect("fraction is a number"))
        .collect();
    let mut verdicts = Verdicts::default();
    verdicts.check("low-weight-trend", fractions.windows(2).all(|w| w[1] <= w[0]));
    for r in &runs {
        verdicts.0.extend(r.failures.iter().cloned());
    }
    let mut params: BTreeMap<String, Value> = runs.first().map(|r| r.params.clone()).unwrap_or_default();
    params.insert("m".into(), json!(ms));
    Ok(ExperimentReport {
        name: "montecarlo-trend".into(),
        params,
        results: json!({
            "low_weight_fractions": fractions,
            "runs": runs.iter().map(|r| json!({ "m": r.params["m"], "results": r.results })).collect::<Vec<_>>(),
        }),
        pass: verdicts.0.is_empty(),
        failures: verdicts.0,
        seed: template.seed,
        wall_time: start.elapsed().as_secs_f64(),
        threads: resolved_threads(threads),
    })
}
