//! Distance of GF(4) codes.
//!
//! The exhaustive search reuses the binary coset engine on planar vectors:
//! `im δ` over GF(4) is the GF(2) span of `{g, ωg}` for its basis vectors, and
//! since `wt(λf) = wt(f)` only one representative per projective coset label
//! is swept.
//!
//! The bounded search can also run an information-set enumeration, which is
//! far cheaper when the bound is small compared with the code length.

use std::time::{Duration, Instant};

use serde_json::json;

use super::boundary::Gf4Boundary;
use super::field::Gf4;
use super::matrix::{Gf4Matrix, Gf4Span};
use super::vector::Gf4Vec;
use crate::distance::engine::{self, Labels, Layout, Mode, Plan};
use crate::distance::SearchOptions;
use crate::error::{Error, Result};
use crate::par;

#[derive(Clone, Debug)]
pub struct Gf4DistanceResult {
    pub d: usize,
    pub witness: Gf4Vec,
    pub cosets_scanned: u64,
    pub wall_time: Duration,
}

impl Gf4DistanceResult {
    pub fn same_outcome(&self, other: &Gf4DistanceResult) -> bool {
        (self.d, &self.witness, self.cosets_scanned) == (other.d, &other.witness, other.cosets_scanned)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "d": self.d,
            "witness": self.witness.to_string(),
            "cosets_scanned": self.cosets_scanned,
            "wall_time_s": self.wall_time.as_secs_f64(),
        })
    }
}

/// Which enumeration the bounded search used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundedMethod {
    CosetSweep,
    InformationSet,
}

#[derive(Clone, Debug)]
pub struct BoundedSearch {
    pub witness: Option<Gf4Vec>,
    pub method: BoundedMethod,
    pub steps: u128,
}

struct Sector {
    image: Gf4Span,
    reps: Vec<Gf4Vec>,
}

fn sector(d: &Gf4Boundary) -> Result<Sector> {
    let image = d.image();
    let reps = image.complement_in(&d.kernel());
    if reps.is_empty() {
        return Err(Error::NoLogicals);
    }
    Ok(Sector { image, reps })
}

fn pow4(e: usize) -> u128 {
    u32::try_from(2 * e)
        .ok()
        .and_then(|b| 2u128.checked_pow(b))
        .unwrap_or(u128::MAX)
}

fn coset_plan(n: usize, s: &Sector) -> Plan {
    let gens = s
        .image
        .vectors()
        .iter()
        .flat_map(|g| [g.planar_words(), g.scaled(Gf4::W).planar_words()])
        .collect();
    let reps = s
        .reps
        .iter()
        .map(|h| {
            [
                h.planar_words(),
                h.scaled(Gf4::W).planar_words(),
                h.scaled(Gf4::W2).planar_words(),
            ]
        })
        .collect();
    Plan {
        layout: Layout::Planar(n),
        gens,
        labels: Labels::Projective(reps),
    }
}

fn verify(d: &Gf4Boundary, image: &Gf4Span, w: &Gf4Vec) {
    assert!(d.matrix().mul_vec(w).is_zero(), "witness is not a cycle");
    assert!(!image.contains(w), "witness is a boundary");
}

pub fn gf4_distance(d: &Gf4Boundary) -> Result<Gf4DistanceResult> {
    gf4_distance_with(d, &SearchOptions::default())
}

/// Exact minimum weight over `ker δ \ im δ`.
pub fn gf4_distance_with(d: &Gf4Boundary, opts: &SearchOptions) -> Result<Gf4DistanceResult> {
    let start = Instant::now();
    let s = sector(d)?;
    let required = pow4(s.image.dim() + s.reps.len());
    if required > opts.budget {
        return Err(Error::Budget {
            required,
            budget: opts.budget,
        });
    }
    let plan = coset_plan(d.dim(), &s);
    let hit = par::with_threads(opts.threads, |parallel| engine::run(&plan, Mode::Minimum, parallel))
        .expect("nontrivial coset is nonempty");
    let witness = Gf4Vec::from_planar_words(d.dim(), &hit.words);
    verify(d, &s.image, &witness);
    assert_eq!(witness.weight(), hit.weight as usize);
    Ok(Gf4DistanceResult {
        d: hit.weight as usize,
        witness,
        cosets_scanned: plan.coset_count() as u64,
        wall_time: start.elapsed(),
    })
}

/// Number of candidates the information-set search visits for a kernel of dimension `k`.
fn infoset_steps(k: usize, bound: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    for w in 1..=bound.min(k) {
        binom = binom * (k + 1 - w) as u128 / w as u128;
        total = total.saturating_add(binom.saturating_mul(3u128.pow(w as u32 - 1)));
    }
    total
}

/// First nontrivial cycle of weight at most `bound`, or `None` when none exists.
///
/// Runs whichever of the coset sweep and the information-set enumeration
/// visits fewer vectors; both are exhaustive.
pub fn gf4_distance_upper_bound(d: &Gf4Boundary, bound: usize, opts: &SearchOptions) -> Result<BoundedSearch> {
    let s = sector(d)?;
    let k = s.image.dim() + s.reps.len();
    let sweep_steps = ((pow4(s.reps.len()) - 1) / 3).saturating_mul(pow4(s.image.dim()));
    let info_steps = infoset_steps(k, bound);
    let (method, steps) = if info_steps < sweep_steps {
        (BoundedMethod::InformationSet, info_steps)
    } else {
        (BoundedMethod::CosetSweep, sweep_steps)
    };
    if steps > opts.budget {
        return Err(Error::Budget {
            required: steps,
            budget: opts.budget,
        });
    }
    if bound == 0 {
        return Ok(BoundedSearch {
            witness: None,
            method,
            steps: 0,
        });
    }
    let witness = match method {
        BoundedMethod::CosetSweep => {
            let plan = coset_plan(d.dim(), &s);
            let b = u32::try_from(bound).unwrap_or(u32::MAX);
            par::with_threads(opts.threads, |parallel| engine::run(&plan, Mode::AtMost(b), parallel))
                .map(|h| Gf4Vec::from_planar_words(d.dim(), &h.words))
        }
        BoundedMethod::InformationSet => {
            par::with_threads(opts.threads, |parallel| infoset_first(d, &s.image, bound, parallel))
        }
    };
    if let Some(w) = &witness {
        verify(d, &s.image, w);
        assert!(w.weight() <= bound);
    }
    log::debug!(
        "gf4 bounded search ({method:?}, {steps} steps): found={}",
        witness.is_some()
    );
    Ok(BoundedSearch { witness, method, steps })
}

/// Exhaustive search over kernel vectors whose restriction to an information set has weight at most `bound`.
///
/// With the kernel basis in reduced echelon form, a kernel vector's entries on
/// the pivot columns are exactly its coordinates, so any vector of weight at
/// most `bound` has at most `bound` nonzero coordinates. Coordinates are
/// normalized so the first nonzero one is 1.
fn infoset_first(d: &Gf4Boundary, image: &Gf4Span, bound: usize, parallel: bool) -> Option<Gf4Vec> {
    let n = d.dim();
    let ech = Gf4Matrix::from_rows(n, d.kernel()).echelon();
    let k = ech.pivots.len();
    // multiples[i][c - 1] = c · row_i for c = 1, ω, ω²
    let multiples: Vec<[Vec<u64>; 3]> = (0..k)
        .map(|i| {
            let r = ech.reduced.row(i);
            [
                r.planar_words(),
                r.scaled(Gf4::W).planar_words(),
                r.scaled(Gf4::W2).planar_words(),
            ]
        })
        .collect();
    let half = multiples.first().map_or(0, |m| m[0].len() / 2);
    let weight = |v: &[u64]| -> usize { (0..half).map(|w| (v[w] | v[w + half]).count_ones() as usize).sum() };

    struct Walk<'a> {
        multiples: &'a [[Vec<u64>; 3]],
        weight: &'a (dyn Fn(&[u64]) -> usize + Sync),
        accept: &'a (dyn Fn(&[u64]) -> bool + Sync),
        bound: usize,
    }

    impl Walk<'_> {
        // Extend the support with `remaining` more indices from `next..`.
        fn go(&self, v: &mut Vec<u64>, next: usize, remaining: usize) -> Option<Vec<u64>> {
            if remaining == 0 {
                return ((self.weight)(v) <= self.bound && (self.accept)(v)).then(|| v.clone());
            }
            for i in next..=self.multiples.len() - remaining {
                for m in &self.multiples[i] {
                    xor(v, m);
                    let found = self.go(v, i + 1, remaining - 1);
                    xor(v, m);
                    if found.is_some() {
                        return found;
                    }
                }
            }
            None
        }
    }

    fn xor(v: &mut [u64], m: &[u64]) {
        for (a, b) in v.iter_mut().zip(m) {
            *a ^= b;
        }
    }

    let accept = |v: &[u64]| !image.contains(&Gf4Vec::from_planar_words(n, v));
    let walk = Walk {
        multiples: &multiples,
        weight: &weight,
        accept: &accept,
        bound,
    };
    // Items: (support size, leading index) in increasing order.
    let max_w = bound.min(k);
    let items: Vec<(usize, usize)> = (1..=max_w)
        .flat_map(|w| (0..=k - w).map(move |lead| (w, lead)))
        .collect();
    par::find_first(items.len(), parallel, |t| {
        let (w, lead) = items[t];
        let mut v = multiples[lead][0].clone();
        walk.go(&mut v, lead + 1, w - 1)
    })
    .map(|words| Gf4Vec::from_planar_words(n, &words))
}
