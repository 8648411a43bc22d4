//! Stabilizer splitting and a driver that lowers the maximum check weight.
//!
//! A Z split replaces a Z check `S` with support `T = T₁ ⊔ T₂` by
//! `Z_a ∏_{T₁} Z` and `Z_a ∏_{T₂} Z` on a fresh qubit `a`, and puts `X_a` on
//! every X check with odd overlap on `T₁`. `k` is unchanged. An X split is the
//! same with the roles of the two check matrices swapped.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::css::CssCode;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckType {
    Z,
    X,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "seed")]
pub enum Strategy {
    /// All heavy Z checks (heaviest first), then all heavy X checks, repeated;
    /// each split uses the least-conflict balanced half.
    RoundRobin,
    /// Round robin order with `T₁` the first half of the support.
    RoundRobinPrefix,
    /// Uniformly random heavy check, random balanced half of its support.
    Random(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitStep {
    pub check: CheckType,
    pub stabilizer: usize,
    pub t1: Vec<usize>,
}

/// Record of a reduction run. The histories start with the input code, so they
/// hold one more entry than `steps`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitTrace {
    pub steps: Vec<SplitStep>,
    pub weight_history: Vec<usize>,
    pub n_history: Vec<usize>,
    pub reached: bool,
}

fn split_matrices(main: &BitMatrix, other: &BitMatrix, stab: usize, t1: &[usize]) -> Result<(BitMatrix, BitMatrix)> {
    if stab >= main.rows() {
        return Err(Error::Precondition(format!("no check with index {stab}")));
    }
    let n = main.cols();
    let support: Vec<usize> = main.row_ones(stab).collect();
    let mut half = BitVec::zeros(n);
    for &q in t1 {
        if q >= n || !main.get(stab, q) {
            return Err(Error::Precondition(format!("qubit {q} is not in the check's support")));
        }
        if half.get(q) {
            return Err(Error::Precondition(format!("qubit {q} repeated")));
        }
        half.set(q, true);
    }
    if t1.is_empty() || t1.len() == support.len() {
        return Err(Error::Precondition(
            "T1 must be a nonempty proper subset of the support".into(),
        ));
    }

    let a = n;
    let first = half.concat(&BitVec::unit(1, 0));
    let mut second = main.row(stab).concat(&BitVec::unit(1, 0));
    second.xor_assign(&half.concat(&BitVec::zeros(1)));
    let mut new_main = main.with_extra_col();
    new_main.remove_row(stab);
    // Keep the first half at the original index.
    let mut rows = new_main.row_vecs();
    rows.insert(stab, first);
    rows.push(second);
    let new_main = BitMatrix::from_rows(n + 1, &rows);

    let mut new_other = other.with_extra_col();
    for r in 0..other.rows() {
        if other.row(r).dot(&half) {
            new_other.set(r, a, true);
        }
    }
    Ok((new_main, new_other))
}

// The split rank goes up by one, the other rank is unchanged and every
// overlap stays even, so `k` and commutation carry over unchecked.

/// Splits Z check `stab`; the halves sit at index `stab` and at the end.
pub fn z_split(c: &CssCode, stab: usize, t1: &[usize]) -> Result<CssCode> {
    let (z, x) = split_matrices(c.a_z(), c.a_x(), stab, t1)?;
    Ok(CssCode::from_parts(z, x, c.k()))
}

pub fn x_split(c: &CssCode, stab: usize, t1: &[usize]) -> Result<CssCode> {
    let (x, z) = split_matrices(c.a_x(), c.a_z(), stab, t1)?;
    Ok(CssCode::from_parts(z, x, c.k()))
}

/// Recomputes `k` from ranks and checks commutation; `None` if the checks anticommute.
pub fn recomputed_k(c: &CssCode) -> Option<usize> {
    CssCode::new(c.a_z().clone(), c.a_x().clone()).ok().map(|c| c.k())
}

fn checks(c: &CssCode, t: CheckType) -> &BitMatrix {
    match t {
        CheckType::Z => c.a_z(),
        CheckType::X => c.a_x(),
    }
}

/// Heaviest check of type `t` above `target` (lowest index on ties).
fn heaviest(c: &CssCode, t: CheckType, target: usize) -> Option<usize> {
    let m = checks(c, t);
    (0..m.rows())
        .filter(|&r| m.row_weight(r) > target)
        .max_by_key(|&r| (m.row_weight(r), std::cmp::Reverse(r)))
}

/// Largest support searched exhaustively for the least-conflict half.
const EXHAUSTIVE_HALF: usize = 20;

/// Balanced `T₁` that pushes the fewest other-type checks above `target`,
/// then touches the fewest other-type checks, then is lexicographically first.
///
/// Each check of the other type with odd overlap on `T₁` gains the new qubit.
fn least_conflict_half(main: &BitMatrix, other: &BitMatrix, stab: usize, target: usize) -> Vec<usize> {
    let support: Vec<usize> = main.row_ones(stab).collect();
    let t = support.len();
    let h = t.div_ceil(2);
    // Overlap mask (bit i = support[i]) and current weight of every touching check.
    let overlaps: Vec<(u32, usize)> = if t <= EXHAUSTIVE_HALF {
        (0..other.rows())
            .filter_map(|r| {
                let mask = support
                    .iter()
                    .enumerate()
                    .filter(|(_, &q)| other.get(r, q))
                    .fold(0u32, |m, (i, _)| m | 1 << i);
                (mask != 0).then(|| (mask, other.row_weight(r)))
            })
            .collect()
    } else {
        return support[..h].to_vec();
    };
    let cost = |mask: u32| {
        overlaps
            .iter()
            .filter(|&&(o, _)| (o & mask).count_ones() % 2 == 1)
            .fold((0usize, 0usize), |(over, odd), &(_, w)| {
                (over + usize::from(w >= target), odd + 1)
            })
    };
    // Walk the size-h subsets in lexicographic order of their position lists.
    let mut best: Option<((usize, usize), u32)> = None;
    let mut pos: Vec<usize> = (0..h).collect();
    loop {
        let mask = pos.iter().fold(0u32, |m, &i| m | 1 << i);
        let c = cost(mask);
        if best.is_none_or(|(b, _)| c < b) {
            best = Some((c, mask));
        }
        let Some(i) = (0..h).rev().find(|&i| pos[i] < t - h + i) else {
            break;
        };
        pos[i] += 1;
        for j in i + 1..h {
            pos[j] = pos[j - 1] + 1;
        }
    }
    let mask = best.expect("support is nonempty").1;
    (0..t).filter(|&i| mask >> i & 1 == 1).map(|i| support[i]).collect()
}

pub fn default_max_steps(c: &CssCode) -> usize {
    64 * c.n()
}

/// Splits checks heavier than `w_target` until none remain or `max_steps` splits were made.
pub fn reduce_weights(
    c: &CssCode,
    w_target: usize,
    strategy: Strategy,
    max_steps: usize,
) -> Result<(CssCode, SplitTrace)> {
    if w_target < 3 {
        // A weight-3 check splits into weights 3 and 2, so lower targets never terminate.
        return Err(Error::InvalidParameter(format!("target weight {w_target} is below 3")));
    }
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Strategy::RoundRobin | Strategy::RoundRobinPrefix => None,
    };
    let mut code = c.clone();
    code.d_z = None;
    code.d_x = None;
    let mut trace = SplitTrace {
        steps: Vec::new(),
        weight_history: vec![code.max_check_weight()],
        n_history: vec![code.n()],
        reached: code.max_check_weight() <= w_target,
    };
    let mut phase = CheckType::Z;
    while !trace.reached && trace.steps.len() < max_steps {
        let (check, stab, t1) = match rng.as_mut() {
            None => {
                let stab = match heaviest(&code, phase, w_target) {
                    Some(s) => s,
                    None => {
                        phase = if phase == CheckType::Z {
                            CheckType::X
                        } else {
                            CheckType::Z
                        };
                        continue;
                    }
                };
                let (main, other) = match phase {
                    CheckType::Z => (code.a_z(), code.a_x()),
                    CheckType::X => (code.a_x(), code.a_z()),
                };
                let t1 = if strategy == Strategy::RoundRobinPrefix {
                    let support: Vec<usize> = main.row_ones(stab).collect();
                    support[..support.len().div_ceil(2)].to_vec()
                } else {
                    least_conflict_half(main, other, stab, w_target)
                };
                (phase, stab, t1)
            }
            Some(rng) => {
                let heavy: Vec<(CheckType, usize)> = [CheckType::Z, CheckType::X]
                    .into_iter()
                    .flat_map(|t| {
                        let m = checks(&code, t);
                        (0..m.rows())
                            .filter(move |&r| m.row_weight(r) > w_target)
                            .map(move |r| (t, r))
                    })
                    .collect();
                let (t, stab) = heavy[rng.gen_range(0..heavy.len())];
                let mut support: Vec<usize> = checks(&code, t).row_ones(stab).collect();
                support.shuffle(rng);
                let mut t1 = support[..support.len().div_ceil(2)].to_vec();
                t1.sort_unstable();
                (t, stab, t1)
            }
        };
        let next = match check {
            CheckType::Z => z_split(&code, stab, &t1)?,
            CheckType::X => x_split(&code, stab, &t1)?,
        };
        code = next;
        trace.steps.push(SplitStep {
            check,
            stabilizer: stab,
            t1,
        });
        trace.weight_history.push(code.max_check_weight());
        trace.n_history.push(code.n());
        trace.reached = code.max_check_weight() <= w_target;
    }
    Ok((code, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::steane_checks;
    use crate::complex::random_boundary;
    use crate::css::{boundary_from_checks, code_from_complex};
    use crate::gf2::Basis;
    use crate::product::product;

    fn steane() -> CssCode {
        code_from_complex(&boundary_from_checks(7, &steane_checks(), &BitMatrix::identity(3)).unwrap())
            .independent_checks()
    }

    #[test]
    fn steane_z_split() {
        let c = steane();
        assert_eq!((c.n(), c.k()), (7, 1));
        for r in 0..c.a_z().rows() {
            let t1: Vec<usize> = c.a_z().row_ones(r).take(2).collect();
            let s = z_split(&c, r, &t1).unwrap();
            assert_eq!((s.n(), s.k()), (8, 1));
            assert!(s.is_orthogonal());
            assert_eq!(s.a_z().row_weight(r), 3);
            assert_eq!(s.a_z().row_weight(s.a_z().rows() - 1), 3);
            // The halves multiply back to the original check; Z_a cancels.
            let mut sum = s.a_z().row(r);
            sum.xor_assign(&s.a_z().row(s.a_z().rows() - 1));
            assert_eq!(sum, c.a_z().row(r).concat(&BitVec::zeros(1)));
        }
    }

    #[test]
    fn steane_x_split() {
        let c = steane();
        let t1: Vec<usize> = c.a_x().row_ones(1).take(2).collect();
        let s = x_split(&c, 1, &t1).unwrap();
        assert_eq!((s.n(), s.k()), (8, 1));
        assert!(s.is_orthogonal());
        assert_eq!(s.a_x().rows(), c.a_x().rows() + 1);
        assert_eq!(s.a_z().rows(), c.a_z().rows());
    }

    #[test]
    fn invalid_splits() {
        let c = steane();
        let support: Vec<usize> = c.a_z().row_ones(0).collect();
        assert!(z_split(&c, 99, &support[..1]).is_err());
        assert!(z_split(&c, 0, &[]).is_err());
        assert!(z_split(&c, 0, &support).is_err());
        assert!(z_split(&c, 0, &[support[0], support[0]]).is_err());
        let outside = (0..7).find(|q| !support.contains(q)).unwrap();
        assert!(z_split(&c, 0, &[outside]).is_err());
    }

    fn swap_last_two_cols(m: &BitMatrix) -> BitMatrix {
        let n = m.cols();
        BitMatrix::from_fn(m.rows(), n, |r, c| {
            let c = if c == n - 1 {
                n - 2
            } else if c == n - 2 {
                n - 1
            } else {
                c
            };
            m.get(r, c)
        })
    }

    #[test]
    fn disjoint_splits_commute() {
        let d = boundary_from_checks(7, &steane_checks(), &BitMatrix::identity(3)).unwrap();
        let c = code_from_complex(product(&d, &d).operator()).independent_checks();
        let (zr, xr) = (0..c.a_z().rows())
            .flat_map(|z| (0..c.a_x().rows()).map(move |x| (z, x)))
            .find(|&(z, x)| {
                c.a_z().row_ones(z).all(|q| !c.a_x().get(x, q))
                    && c.a_z().row_weight(z) > 1
                    && c.a_x().row_weight(x) > 1
            })
            .unwrap();
        let tz: Vec<usize> = c.a_z().row_ones(zr).take(1).collect();
        let tx: Vec<usize> = c.a_x().row_ones(xr).take(1).collect();
        let zx = x_split(&z_split(&c, zr, &tz).unwrap(), xr, &tx).unwrap();
        let xz = z_split(&x_split(&c, xr, &tx).unwrap(), zr, &tz).unwrap();
        let n = zx.n();
        let span = |m: &BitMatrix| Basis::row_space(m);
        assert!(span(&swap_last_two_cols(xz.a_z())).same_span(&span(zx.a_z())));
        assert!(span(&swap_last_two_cols(xz.a_x())).same_span(&span(zx.a_x())));
        assert_eq!((n, zx.k()), (xz.n(), xz.k()));
    }

    #[test]
    fn already_light_takes_no_steps() {
        let c = steane();
        let (out, trace) = reduce_weights(&c, 4, Strategy::RoundRobin, 100).unwrap();
        assert_eq!(out, c);
        assert!(trace.steps.is_empty() && trace.reached);
        assert!(reduce_weights(&c, 2, Strategy::RoundRobin, 10).is_err());
    }

    #[test]
    fn steane_squared_reaches_six() {
        let d = boundary_from_checks(7, &steane_checks(), &BitMatrix::identity(3)).unwrap();
        let c = code_from_complex(product(&d, &d).operator()).independent_checks();
        let (out, trace) = reduce_weights(&c, 6, Strategy::RoundRobin, default_max_steps(&c)).unwrap();
        assert!(trace.reached);
        assert!(out.max_check_weight() <= 6);
        assert_eq!(recomputed_k(&out), Some(1));
        assert_eq!(trace.n_history.len(), trace.steps.len() + 1);
        assert!(trace.n_history.windows(2).all(|w| w[1] == w[0] + 1));
        assert_eq!(*trace.weight_history.last().unwrap(), out.max_check_weight());
    }

    #[test]
    fn split_invariants_on_random_codes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let m = rng.gen_range(4..=12usize);
            let h = [m % 2, m % 2 + 2][rng.gen_range(0..2)];
            let d = random_boundary(m, h, &mut rng).unwrap();
            let c = code_from_complex(&d).independent_checks();
            for t in [CheckType::Z, CheckType::X] {
                let m = checks(&c, t);
                let Some(r) = (0..m.rows()).find(|&r| m.row_weight(r) >= 2) else {
                    continue;
                };
                let support: Vec<usize> = m.row_ones(r).collect();
                let t1 = &support[..support.len().div_ceil(2)];
                let s = match t {
                    CheckType::Z => z_split(&c, r, t1).unwrap(),
                    CheckType::X => x_split(&c, r, t1).unwrap(),
                };
                assert_eq!(recomputed_k(&s), Some(c.k()));
                let (old_other, new_other) = match t {
                    CheckType::Z => (c.a_x(), s.a_x()),
                    CheckType::X => (c.a_z(), s.a_z()),
                };
                for q in 0..old_other.rows() {
                    assert!(new_other.row_weight(q) <= old_other.row_weight(q) + 1);
                }
            }
        }
    }

    #[test]
    fn random_strategy_is_seeded() {
        let c = steane();
        let a = reduce_weights(&c, 3, Strategy::Random(9), 100).unwrap();
        let b = reduce_weights(&c, 3, Strategy::Random(9), 100).unwrap();
        assert_eq!(a, b);
    }
}
