//! Exact code distance by coset enumeration.
//!
//! `ker δ` splits into `2^H` cosets of `im δ`. Only the nontrivial ones are
//! swept, so every visited vector is automatically a nontrivial cycle and no
//! membership test is needed inside the loop.

pub(crate) mod engine;

use std::time::{Duration, Instant};

use serde_json::json;

use crate::complex::BoundaryOperator;
use crate::error::{Error, Result};
use crate::gf2::{image_basis, kernel_basis, Basis, BitMatrix, BitVec};
use crate::par;
use engine::{Labels, Layout, Mode, Plan};

/// Default cap on enumeration steps per sector.
pub const DEFAULT_BUDGET: u128 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: u128,
    /// Worker threads; 1 runs on the calling thread, 0 uses every core.
    pub threads: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_BUDGET,
            threads: 1,
        }
    }
}

impl SearchOptions {
    pub fn with_threads(threads: usize) -> Self {
        SearchOptions {
            threads,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct DistanceResult {
    pub d_z: usize,
    pub d_x: usize,
    pub witness_z: BitVec,
    pub witness_x: BitVec,
    pub cosets_scanned: u64,
    pub wall_time: Duration,
}

impl DistanceResult {
    pub fn distance(&self) -> usize {
        self.d_z.min(self.d_x)
    }

    /// Equality ignoring wall time.
    pub fn same_outcome(&self, other: &DistanceResult) -> bool {
        (
            self.d_z,
            self.d_x,
            &self.witness_z,
            &self.witness_x,
            self.cosets_scanned,
        ) == (
            other.d_z,
            other.d_x,
            &other.witness_z,
            &other.witness_x,
            other.cosets_scanned,
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "d_z": self.d_z,
            "d_x": self.d_x,
            "witness_z": self.witness_z.to_hex(),
            "witness_x": self.witness_x.to_hex(),
            "cosets_scanned": self.cosets_scanned,
            "wall_time_s": self.wall_time.as_secs_f64(),
        })
    }
}

fn required_steps(bits: usize) -> u128 {
    u32::try_from(bits)
        .ok()
        .and_then(|b| 2u128.checked_pow(b))
        .unwrap_or(u128::MAX)
}

/// Sweep plan for the nontrivial cosets of `ker m / im m`.
fn sector_plan(m: &BitMatrix, budget: u128) -> Result<Plan> {
    let image = image_basis(m);
    let reps = image.complement_in(&kernel_basis(m));
    if reps.is_empty() {
        return Err(Error::NoLogicals);
    }
    let required = required_steps(image.dim() + reps.len());
    if required > budget {
        return Err(Error::Budget { required, budget });
    }
    Ok(Plan {
        layout: Layout::Binary(m.cols()),
        gens: image.vectors().iter().map(|v| v.words().to_vec()).collect(),
        labels: Labels::Binary(reps.iter().map(|v| v.words().to_vec()).collect()),
    })
}

fn verify_witness(m: &BitMatrix, image: &Basis, w: &BitVec, weight: usize) {
    assert!(m.mul_vec(w).is_zero(), "witness is not a cycle");
    assert!(!image.contains(w).expect("length"), "witness is a boundary");
    assert_eq!(w.weight(), weight, "witness weight mismatch");
}

fn sector_minimum(m: &BitMatrix, plan: &Plan, parallel: bool) -> (usize, BitVec) {
    let hit = engine::run(plan, Mode::Minimum, parallel).expect("nontrivial coset is nonempty");
    let w = BitVec::from_words(m.cols(), hit.words);
    verify_witness(m, &image_basis(m), &w, hit.weight as usize);
    (hit.weight as usize, w)
}

/// Exact `d_Z` and `d_X` on the calling thread.
pub fn distance(d: &BoundaryOperator) -> Result<DistanceResult> {
    distance_with(d, &SearchOptions::default())
}

/// Same result as [`distance`], computed on `threads` workers.
pub fn distance_parallel(d: &BoundaryOperator, threads: usize) -> Result<DistanceResult> {
    distance_with(d, &SearchOptions::with_threads(threads))
}

pub fn distance_with(d: &BoundaryOperator, opts: &SearchOptions) -> Result<DistanceResult> {
    let start = Instant::now();
    let m = d.matrix();
    let mt = m.transpose();
    let plan_z = sector_plan(m, opts.budget)?;
    let plan_x = sector_plan(&mt, opts.budget)?;
    let cosets = (plan_z.coset_count() + plan_x.coset_count()) as u64;
    let ((d_z, witness_z), (d_x, witness_x)) = par::with_threads(opts.threads, |parallel| {
        (
            sector_minimum(m, &plan_z, parallel),
            sector_minimum(&mt, &plan_x, parallel),
        )
    });
    log::debug!("distance: d_z={d_z} d_x={d_x} in {:?}", start.elapsed());
    Ok(DistanceResult {
        d_z,
        d_x,
        witness_z,
        witness_x,
        cosets_scanned: cosets,
        wall_time: start.elapsed(),
    })
}

/// First nontrivial cycle of weight at most `bound` in sweep order, or `None`
/// when the full sweep finds none (so `d_Z > bound`).
pub fn distance_upper_bound(d: &BoundaryOperator, bound: usize) -> Result<Option<BitVec>> {
    distance_upper_bound_with(d, bound, &SearchOptions::default())
}

pub fn distance_upper_bound_with(d: &BoundaryOperator, bound: usize, opts: &SearchOptions) -> Result<Option<BitVec>> {
    let m = d.matrix();
    let plan = sector_plan(m, opts.budget)?;
    if bound == 0 {
        return Ok(None);
    }
    let bound = u32::try_from(bound).unwrap_or(u32::MAX);
    let hit = par::with_threads(opts.threads, |parallel| {
        engine::run(&plan, Mode::AtMost(bound), parallel)
    });
    Ok(hit.map(|h| {
        let w = BitVec::from_words(m.cols(), h.words);
        verify_witness(m, &image_basis(m), &w, h.weight as usize);
        w
    }))
}

/// Lightest nonzero vector of `span(basis)`, ties broken lexicographically.
pub fn min_weight_in_span(basis: &Basis, opts: &SearchOptions) -> Result<Option<(usize, BitVec)>> {
    if basis.dim() == 0 {
        return Ok(None);
    }
    let required = required_steps(basis.dim());
    if required > opts.budget {
        return Err(Error::Budget {
            required,
            budget: opts.budget,
        });
    }
    let plan = Plan {
        layout: Layout::Binary(basis.ambient_dim()),
        gens: basis.vectors().iter().map(|v| v.words().to_vec()).collect(),
        labels: Labels::Prefix,
    };
    let hit = par::with_threads(opts.threads, |parallel| engine::run(&plan, Mode::Minimum, parallel));
    Ok(hit.map(|h| (h.weight as usize, BitVec::from_words(basis.ambient_dim(), h.words))))
}

/// The vectors of `rep + span(gens)` in the engine's Gray order.
///
/// Exposed so callers can check the walk; only sensible for a handful of generators.
pub fn gray_walk(rep: &BitVec, gens: &[BitVec]) -> Vec<BitVec> {
    let words: Vec<Vec<u64>> = gens.iter().map(|g| g.words().to_vec()).collect();
    engine::gray_walk(rep.len(), rep.words(), &words)
        .into_iter()
        .map(|w| BitVec::from_words(rep.len(), w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::steane_checks;
    use crate::complex::{canonical_boundary, random_boundary};
    use crate::css::boundary_from_checks;
    use crate::product::product;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn steane(u: &BitMatrix) -> BoundaryOperator {
        boundary_from_checks(7, &steane_checks(), u).unwrap()
    }

    /// Oracle: every kernel vector, tested for image membership one by one.
    fn naive_sector(m: &BitMatrix) -> Option<(usize, BitVec)> {
        let ker = kernel_basis(m).vectors();
        let im = image_basis(m);
        let mut best: Option<(usize, BitVec)> = None;
        for code in 1u64..(1 << ker.len()) {
            let mut v = BitVec::zeros(m.cols());
            for (j, k) in ker.iter().enumerate() {
                if code >> j & 1 == 1 {
                    v.xor_assign(k);
                }
            }
            if im.contains(&v).unwrap() {
                continue;
            }
            let w = v.weight();
            let better = match &best {
                None => true,
                Some((bw, bv)) => w < *bw || (w == *bw && v.lex_cmp(bv) == std::cmp::Ordering::Less),
            };
            if better {
                best = Some((w, v));
            }
        }
        best
    }

    #[test]
    fn steane_distance() {
        let r = distance(&steane(&BitMatrix::identity(3))).unwrap();
        assert_eq!((r.d_z, r.d_x), (3, 3));
        assert_eq!(r.witness_z.weight(), 3);
    }

    #[test]
    fn matches_naive_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        for _ in 0..60 {
            let m = rng.gen_range(2..=12usize);
            let h = rng.gen_range(1..=m);
            if (m - h) % 2 == 1 {
                continue;
            }
            let d = random_boundary(m, h, &mut rng).unwrap();
            let (l, hh) = (d.rank(), d.hom_dim());
            assert!(l + hh <= 16);
            let r = distance(&d).unwrap();
            let (wz, vz) = naive_sector(d.matrix()).unwrap();
            let (wx, vx) = naive_sector(&d.matrix().transpose()).unwrap();
            assert_eq!((r.d_z, r.d_x), (wz, wx));
            assert_eq!((&r.witness_z, &r.witness_x), (&vz, &vx));
            checked += 1;
        }
        assert!(checked > 20);
    }

    #[test]
    fn small_product_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_boundary(4, 2, &mut rng).unwrap();
        let b = random_boundary(3, 1, &mut rng).unwrap();
        let p = product(&a, &b);
        let r = distance(p.operator()).unwrap();
        let (w, v) = naive_sector(p.operator().matrix()).unwrap();
        assert_eq!((r.d_z, &r.witness_z), (w, &v));
    }

    #[test]
    fn errors() {
        let d = canonical_boundary(0, 2);
        assert!(matches!(distance(&d), Err(Error::NoLogicals)));
        let big = canonical_boundary(40, 0);
        match distance(&big) {
            Err(Error::Budget { required, budget }) => {
                assert_eq!(required, 1 << 40);
                assert_eq!(budget, DEFAULT_BUDGET);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn upper_bound_examples() {
        let s = steane(&BitMatrix::identity(3));
        let w = distance_upper_bound(&s, 3).unwrap().unwrap();
        assert_eq!(w.weight(), 3);
        assert!(s.matrix().mul_vec(&w).is_zero());
        assert!(!s.image().contains(&w).unwrap());
        assert_eq!(distance_upper_bound(&s, 2).unwrap(), None);
        assert_eq!(distance_upper_bound(&s, 0).unwrap(), None);
    }

    #[test]
    fn gray_walk_visits_coset_once() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let d = random_boundary(12, 2, &mut rng).unwrap();
        let gens = d.image().vectors();
        let rep = d.homology_representatives()[0].clone();
        let walk = gray_walk(&rep, &gens);
        assert_eq!(walk.len(), 1 << gens.len());
        let distinct: HashSet<_> = walk.iter().collect();
        assert_eq!(distinct.len(), walk.len());
        let mut back = walk.last().unwrap().clone();
        back.xor_assign(gens.last().unwrap());
        assert_eq!(back, rep);
        for v in &walk {
            let mut t = v.clone();
            t.xor_assign(&rep);
            assert!(d.image().contains(&t).unwrap());
        }
    }

    #[test]
    fn threads_do_not_change_result() {
        let s = steane(&BitMatrix::from_strs(&["110", "010", "001"]));
        let p = product(&s, &steane(&BitMatrix::identity(3)));
        let one = distance_parallel(p.operator(), 1).unwrap();
        let four = distance_parallel(p.operator(), 4).unwrap();
        assert!(one.same_outcome(&four));
        assert_eq!(one.d_z, 9);
    }

    #[test]
    fn span_minimum() {
        let b = Basis::span_of(
            5,
            &[
                BitVec::from_bit_str("11100"),
                BitVec::from_bit_str("01110"),
                BitVec::from_bit_str("11111"),
            ],
        );
        // Span: 11100 01110 11111 10010 00011 10001 01101 and zero.
        let (w, v) = min_weight_in_span(&b, &SearchOptions::default()).unwrap().unwrap();
        assert_eq!(w, 2);
        assert_eq!(v, BitVec::from_bit_str("00011"));
        assert_eq!(
            min_weight_in_span(&Basis::empty(3), &SearchOptions::default()).unwrap(),
            None
        );
    }
}
