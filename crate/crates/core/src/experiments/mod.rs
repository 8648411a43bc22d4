//! Reproduction runs and Monte-Carlo estimates, reported as JSON.

mod montecarlo;
mod reproduce;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use montecarlo::{montecarlo, montecarlo_trend, MonteCarloParams, MAX_SAMPLES, SMALL_PRODUCT_M};
pub use reproduce::{reproduce, ReproduceOptions, EXPERIMENTS};

use crate::gf2::BitMatrix;
use crate::gf4::Gf4Matrix;

/// Seed used when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 7;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub params: BTreeMap<String, Value>,
    pub results: Value,
    pub pass: bool,
    /// Ids of the manifest claims that did not hold.
    pub failures: Vec<String>,
    pub seed: u64,
    pub wall_time: f64,
    pub threads: usize,
}

impl ExperimentReport {
    /// The report as JSON without `wall_time` and `threads`; equal for reruns with the same seed.
    pub fn fingerprint(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        let obj = v.as_object_mut().expect("report is an object");
        obj.remove("wall_time");
        obj.remove("threads");
        v.to_string()
    }
}

/// One expected value checked by a reproduction run.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Claim {
    pub experiment: &'static str,
    pub id: &'static str,
    pub statement: &'static str,
}

pub const MANIFEST: &[Claim] = &[
    Claim {
        experiment: "steane-css-params",
        id: "steane-parameters",
        statement: "the Steane boundary gives a [[7,1,3]] code with stabilizer weight 4",
    },
    Claim {
        experiment: "steane-squared",
        id: "steane-squared-dichotomy",
        statement: "with V = I the product is [[49,1,7]] exactly when U is symmetric and [[49,1,9]] otherwise",
    },
    Claim {
        experiment: "steane-squared",
        id: "steane-squared-weight",
        statement: "every Steane product has stabilizer weight at most 8",
    },
    Claim {
        experiment: "fivequbit-squared",
        id: "selfadjoint-count",
        statement: "there are exactly 10 invertible self-adjoint 2x2 matrices over GF(4)",
    },
    Claim {
        experiment: "fivequbit-squared",
        id: "fivequbit-squared-params",
        statement: "every [[5,1,3]] product is [[25,1,5]] whatever U and V are",
    },
    Claim {
        experiment: "fivequbit-squared",
        id: "fivequbit-squared-weight",
        statement: "every [[5,1,3]] product has checks of weight at most 8",
    },
    Claim {
        experiment: "steane-by-fivequbit",
        id: "mixed-product-bound",
        statement: "every [[5,1,3]] x [[7,1,3]] product has a nontrivial cycle of weight at most 6",
    },
    Claim {
        experiment: "montecarlo",
        id: "distance-sandwich",
        statement: "max(d1, d2) <= d <= d1 d2 in each sector for every sampled product",
    },
    Claim {
        experiment: "montecarlo-trend",
        id: "low-weight-trend",
        statement: "the fraction of kernels with a vector of weight below cM does not increase with M",
    },
];

pub fn claims_for(experiment: &str) -> impl Iterator<Item = &'static Claim> + '_ {
    MANIFEST.iter().filter(move |c| c.experiment == experiment)
}

/// Collects failed claim ids; panics on ids missing from the manifest.
#[derive(Default)]
struct Verdicts(Vec<String>);

impl Verdicts {
    fn check(&mut self, id: &str, holds: bool) {
        assert!(
            MANIFEST.iter().any(|c| c.id == id),
            "claim `{id}` is not in the manifest"
        );
        if !holds {
            log::warn!("claim `{id}` failed");
            self.0.push(id.to_string());
        }
    }
}

fn matrix_string(m: &BitMatrix) -> String {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| if m.get(r, c) { '1' } else { '0' })
                .collect::<String>()
        })
        .collect::<Vec<_>>()
        .join(",")
}

fn gf4_matrix_string(m: &Gf4Matrix) -> String {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c).to_char()).collect::<String>())
        .collect::<Vec<_>>()
        .join(",")
}

fn resolved_threads(threads: usize) -> usize {
    if threads == 0 {
        crate::par::available_threads()
    } else {
        threads
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_experiment_has_claims() {
        for name in EXPERIMENTS {
            assert!(claims_for(name).count() > 0, "{name}");
        }
        let mut ids: Vec<_> = MANIFEST.iter().map(|c| c.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), MANIFEST.len());
    }

    #[test]
    fn fingerprint_ignores_timing() {
        let a = ExperimentReport {
            name: "x".into(),
            params: BTreeMap::new(),
            results: Value::Null,
            pass: true,
            failures: vec![],
            seed: 1,
            wall_time: 1.0,
            threads: 1,
        };
        let b = ExperimentReport {
            wall_time: 2.0,
            threads: 4,
            ..a.clone()
        };
        assert_eq!(a.fingerprint(), b.fingerprint());
        assert_ne!(a.fingerprint(), ExperimentReport { seed: 2, ..a.clone() }.fingerprint());
    }
}
