//! Coset sweep shared by the GF(2) and GF(4) searches.
//!
//! A search is a list of cosets `rep + span(gens[..k])`. Each coset is cut
//! into `2^g` chunks by fixing its top `g` generator coefficients, and each
//! chunk is walked in Gray order so every step is one vector XOR. The chunk
//! size depends only on `k`, so the work split (and therefore the result) is
//! the same for any thread count.

use std::cmp::Ordering;
use std::ops::ControlFlow;

use crate::gf2::{lex_cmp_words, words_for};
use crate::par;

const MAX_CHUNK_BITS: usize = 10;
const MIN_CHUNK_SWEEP: usize = 12;

pub(crate) fn chunk_bits(ngens: usize) -> usize {
    ngens.saturating_sub(MIN_CHUNK_SWEEP).min(MAX_CHUNK_BITS)
}

/// How vectors are packed into words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Layout {
    /// Plain bit vectors of length `n`; weight is popcount.
    Binary(usize),
    /// GF(4) vectors of length `n` as `[lo words…, hi words…]`; weight is popcount of `lo | hi`.
    Planar(usize),
}

impl Layout {
    fn words(self) -> usize {
        match self {
            Layout::Binary(n) => words_for(n),
            Layout::Planar(n) => 2 * words_for(n),
        }
    }
}

pub(crate) enum Labels {
    /// All nonzero GF(2) combinations of the representatives, in increasing binary order.
    Binary(Vec<Vec<u64>>),
    /// One representative per projective point; each entry holds `[h, ωh, ω²h]`.
    Projective(Vec<[Vec<u64>; 3]>),
    /// Coset `i` is `gens[i] + span(gens[..i])`; together these cover every nonzero vector of the span.
    Prefix,
}

pub(crate) struct Plan {
    pub layout: Layout,
    pub gens: Vec<Vec<u64>>,
    pub labels: Labels,
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Mode {
    Minimum,
    AtMost(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Hit {
    pub weight: u32,
    pub words: Vec<u64>,
}

impl Plan {
    pub fn coset_count(&self) -> u128 {
        match &self.labels {
            Labels::Binary(reps) => pow_sat(2, reps.len()) - 1,
            Labels::Projective(reps) => (pow_sat(4, reps.len()) - 1) / 3,
            Labels::Prefix => self.gens.len() as u128,
        }
    }

    /// Exact number of vectors a full sweep visits.
    #[cfg(test)]
    pub fn steps(&self) -> u128 {
        match &self.labels {
            Labels::Prefix => pow_sat(2, self.gens.len()) - 1,
            _ => self.coset_count().saturating_mul(pow_sat(2, self.gens.len())),
        }
    }

    fn label_rep(&self, t: usize) -> Vec<u64> {
        let mut v = vec![0u64; self.layout.words()];
        match &self.labels {
            Labels::Binary(reps) => {
                let code = t + 1;
                for (j, r) in reps.iter().enumerate() {
                    if code >> j & 1 == 1 {
                        xor_into(&mut v, r);
                    }
                }
            }
            Labels::Projective(reps) => {
                for (j, digit) in projective_point(t, reps.len()).into_iter().enumerate() {
                    if digit > 0 {
                        xor_into(&mut v, &reps[j][digit - 1]);
                    }
                }
            }
            Labels::Prefix => xor_into(&mut v, &self.gens[t]),
        }
        v
    }
}

fn pow_sat(base: u128, exp: usize) -> u128 {
    u32::try_from(exp)
        .ok()
        .and_then(|e| base.checked_pow(e))
        .unwrap_or(u128::MAX)
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

/// Digits (0 for zero, 1..=3 for 1, ω, ω²) of the `t`-th projective point of `GF(4)^h`.
///
/// Points are ordered by the position of their leading 1, earliest first,
/// then by the remaining digits read as a base-4 number.
fn projective_point(mut t: usize, h: usize) -> Vec<usize> {
    let mut digits = vec![0; h];
    for lead in 0..h {
        let block = 1usize << (2 * (h - 1 - lead));
        if t < block {
            digits[lead] = 1;
            for d in digits[lead + 1..].iter_mut().rev() {
                *d = t & 3;
                t >>= 2;
            }
            return digits;
        }
        t -= block;
    }
    panic!("projective index out of range");
}

/// Cut every coset into sweep items.
struct Items {
    /// `(first item, coset, ngens, chunk bits)` per coset group.
    groups: Vec<(usize, usize, usize, usize)>,
    total: usize,
    uniform: Option<(usize, usize)>,
}

impl Items {
    fn new(plan: &Plan) -> Self {
        match plan.labels {
            Labels::Prefix => {
                let mut groups = Vec::new();
                let mut total = 0;
                for i in 0..plan.gens.len() {
                    let g = chunk_bits(i);
                    groups.push((total, i, i, g));
                    total += 1 << g;
                }
                Items {
                    groups,
                    total,
                    uniform: None,
                }
            }
            _ => {
                let l = plan.gens.len();
                let g = chunk_bits(l);
                let cosets = usize::try_from(plan.coset_count()).expect("coset count fits in usize");
                Items {
                    groups: Vec::new(),
                    total: cosets << g,
                    uniform: Some((l, g)),
                }
            }
        }
    }

    /// Starting vector and number of low generators swept for item `i`.
    fn get(&self, plan: &Plan, i: usize) -> (Vec<u64>, usize) {
        let (coset, ngens, g, chunk) = match self.uniform {
            Some((l, g)) => (i >> g, l, g, i & ((1 << g) - 1)),
            None => {
                let k = self.groups.partition_point(|grp| grp.0 <= i) - 1;
                let (first, coset, ngens, g) = self.groups[k];
                (coset, ngens, g, i - first)
            }
        };
        let mut v = plan.label_rep(coset);
        let low = ngens - g;
        for b in 0..g {
            if chunk >> b & 1 == 1 {
                xor_into(&mut v, &plan.gens[low + b]);
            }
        }
        (v, low)
    }
}

/// Packed vector representation used inside the hot loop.
pub(crate) trait Space: Sync {
    type V: Clone + Send;
    fn load(&self, words: &[u64]) -> Self::V;
    fn store(&self, v: &Self::V) -> Vec<u64>;
    fn weight(&self, v: &Self::V) -> u32;
    /// XOR generator `g` into `v`; returns the new weight given the old one.
    fn step(&self, v: &mut Self::V, wt: u32, g: usize) -> u32;
    fn lex(&self, a: &Self::V, b: &Self::V) -> Ordering;
    /// Lexicographically smallest vector of the scalar class of `v`.
    fn canon(&self, v: &Self::V) -> Self::V;
}

/// Scalar multiples `[ωv, ω²v]` of one planar word pair.
#[inline]
fn omega_multiples(lo: u64, hi: u64) -> [(u64, u64); 2] {
    [(hi, lo ^ hi), (lo ^ hi, lo)]
}

/// Single-word vectors: binary `n ≤ 64`, or planar `n ≤ 32` packed as `lo | hi << 32`.
struct Word1<const PLANAR: bool> {
    gens: Vec<u64>,
}

impl<const PLANAR: bool> Word1<PLANAR> {
    fn new(gens: &[Vec<u64>]) -> Self {
        let mut s = Word1 { gens: Vec::new() };
        s.gens = gens.iter().map(|g| s.load(g)).collect();
        s
    }
}

impl<const PLANAR: bool> Space for Word1<PLANAR> {
    type V = u64;

    fn load(&self, words: &[u64]) -> u64 {
        if PLANAR {
            words[0] | words[1] << 32
        } else {
            words[0]
        }
    }

    fn store(&self, v: &u64) -> Vec<u64> {
        if PLANAR {
            vec![v & 0xffff_ffff, v >> 32]
        } else {
            vec![*v]
        }
    }

    #[inline(always)]
    fn weight(&self, v: &u64) -> u32 {
        if PLANAR {
            ((v | v >> 32) as u32).count_ones()
        } else {
            v.count_ones()
        }
    }

    #[inline(always)]
    fn step(&self, v: &mut u64, _wt: u32, g: usize) -> u32 {
        *v ^= self.gens[g];
        self.weight(v)
    }

    fn lex(&self, a: &u64, b: &u64) -> Ordering {
        lex_cmp_words(&[*a], &[*b])
    }

    fn canon(&self, v: &u64) -> u64 {
        if !PLANAR {
            return *v;
        }
        let mut best = *v;
        for (lo, hi) in omega_multiples(v & 0xffff_ffff, v >> 32) {
            let c = lo | hi << 32;
            if self.lex(&c, &best) == Ordering::Less {
                best = c;
            }
        }
        best
    }
}

/// Multi-word vectors with per-generator word footprints for incremental popcount.
struct Multi<const PLANAR: bool> {
    half: usize,
    gens: Vec<Vec<u64>>,
    footprints: Vec<Vec<usize>>,
}

impl<const PLANAR: bool> Multi<PLANAR> {
    fn new(layout: Layout, gens: &[Vec<u64>]) -> Self {
        let words = layout.words();
        let half = if PLANAR { words / 2 } else { words };
        let footprints = gens
            .iter()
            .map(|g| {
                (0..half)
                    .filter(|&w| g[w] != 0 || (PLANAR && g[w + half] != 0))
                    .collect()
            })
            .collect();
        Multi {
            half,
            gens: gens.to_vec(),
            footprints,
        }
    }

    #[inline(always)]
    fn word_weight(&self, v: &[u64], w: usize) -> u32 {
        if PLANAR {
            (v[w] | v[w + self.half]).count_ones()
        } else {
            v[w].count_ones()
        }
    }
}

impl<const PLANAR: bool> Space for Multi<PLANAR> {
    type V = Vec<u64>;

    fn load(&self, words: &[u64]) -> Vec<u64> {
        words.to_vec()
    }

    fn store(&self, v: &Vec<u64>) -> Vec<u64> {
        v.clone()
    }

    fn weight(&self, v: &Vec<u64>) -> u32 {
        (0..self.half).map(|w| self.word_weight(v, w)).sum()
    }

    #[inline(always)]
    fn step(&self, v: &mut Vec<u64>, mut wt: u32, g: usize) -> u32 {
        let gen = &self.gens[g];
        for &w in &self.footprints[g] {
            wt -= self.word_weight(v, w);
            v[w] ^= gen[w];
            if PLANAR {
                v[w + self.half] ^= gen[w + self.half];
            }
            wt += self.word_weight(v, w);
        }
        wt
    }

    fn lex(&self, a: &Vec<u64>, b: &Vec<u64>) -> Ordering {
        lex_cmp_words(a, b)
    }

    fn canon(&self, v: &Vec<u64>) -> Vec<u64> {
        if !PLANAR {
            return v.clone();
        }
        let h = self.half;
        let mut best = v.clone();
        for k in 0..2 {
            let mut c = v.clone();
            for w in 0..h {
                let (lo, hi) = omega_multiples(v[w], v[w + h])[k];
                c[w] = lo;
                c[w + h] = hi;
            }
            if lex_cmp_words(&c, &best) == Ordering::Less {
                best = c;
            }
        }
        best
    }
}

/// Walks `start + span(gens[..low])` in Gray order, calling `visit` on every vector.
#[inline(always)]
fn sweep<S: Space, B>(
    s: &S,
    start: S::V,
    low: usize,
    mut visit: impl FnMut(&S::V, u32) -> ControlFlow<B>,
) -> Option<B> {
    let mut v = start;
    let mut wt = s.weight(&v);
    if let ControlFlow::Break(b) = visit(&v, wt) {
        return Some(b);
    }
    for i in 1u64..(1u64 << low) {
        wt = s.step(&mut v, wt, i.trailing_zeros() as usize);
        if let ControlFlow::Break(b) = visit(&v, wt) {
            return Some(b);
        }
    }
    None
}

/// Lightest vector of the item, ties broken by the lex order of scalar-class representatives.
fn item_min<S: Space>(s: &S, start: S::V, low: usize) -> (u32, S::V) {
    let mut best_wt = s.weight(&start);
    let mut best = s.canon(&start);
    sweep::<S, ()>(s, start, low, |v, wt| {
        if wt < best_wt {
            best_wt = wt;
            best = s.canon(v);
        } else if wt == best_wt {
            let c = s.canon(v);
            if s.lex(&c, &best) == Ordering::Less {
                best = c;
            }
        }
        ControlFlow::Continue(())
    });
    (best_wt, best)
}

fn item_first<S: Space>(s: &S, start: S::V, low: usize, bound: u32) -> Option<(u32, S::V)> {
    sweep(s, start, low, |v, wt| {
        if wt <= bound {
            ControlFlow::Break((wt, v.clone()))
        } else {
            ControlFlow::Continue(())
        }
    })
}

fn run_with<S: Space>(s: &S, plan: &Plan, mode: Mode, parallel: bool) -> Option<Hit> {
    let items = Items::new(plan);
    let start = |i: usize| {
        let (words, low) = items.get(plan, i);
        (s.load(&words), low)
    };
    let found = match mode {
        Mode::Minimum => par::min_by(
            items.total,
            parallel,
            |i| {
                let (v, low) = start(i);
                Some(item_min(s, v, low))
            },
            |a, b| a.0.cmp(&b.0).then_with(|| s.lex(&a.1, &b.1)),
        ),
        Mode::AtMost(bound) => par::find_first(items.total, parallel, |i| {
            let (v, low) = start(i);
            item_first(s, v, low, bound)
        }),
    };
    found.map(|(weight, v)| Hit {
        weight,
        words: s.store(&v),
    })
}

pub(crate) fn run(plan: &Plan, mode: Mode, parallel: bool) -> Option<Hit> {
    match plan.layout {
        Layout::Binary(n) if n <= 64 => run_with(&Word1::<false>::new(&plan.gens), plan, mode, parallel),
        Layout::Planar(n) if n <= 32 => run_with(&Word1::<true>::new(&plan.gens), plan, mode, parallel),
        Layout::Binary(_) => run_with(&Multi::<false>::new(plan.layout, &plan.gens), plan, mode, parallel),
        Layout::Planar(_) => run_with(&Multi::<true>::new(plan.layout, &plan.gens), plan, mode, parallel),
    }
}

/// Every vector of `start + span(gens)` in the order the engine visits them,
/// using the multi-word code path. Meant for small `gens`.
pub(crate) fn gray_walk(n: usize, start: &[u64], gens: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let s = Multi::<false>::new(Layout::Binary(n), gens);
    let mut out = Vec::with_capacity(1 << gens.len());
    sweep::<_, ()>(&s, start.to_vec(), gens.len(), |v, wt| {
        debug_assert_eq!(wt, s.weight(v));
        out.push(v.clone());
        ControlFlow::Continue(())
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_points_are_distinct_and_normalized() {
        for h in 1..=4 {
            let count = ((1usize << (2 * h)) - 1) / 3;
            let pts: Vec<Vec<usize>> = (0..count).map(|t| projective_point(t, h)).collect();
            let set: std::collections::HashSet<_> = pts.iter().collect();
            assert_eq!(set.len(), count);
            for p in &pts {
                assert_eq!(p.iter().find(|&&d| d != 0), Some(&1));
            }
        }
    }

    #[test]
    fn chunking_covers_each_coset_once() {
        // 20 random-ish generators of length 30: 2^20 vectors per coset.
        let gens: Vec<Vec<u64>> = (0..20u64).map(|i| vec![(i * 0x9e37_79b9 + 1) & 0x3fff_ffff]).collect();
        let plan = Plan {
            layout: Layout::Binary(30),
            gens,
            labels: Labels::Prefix,
        };
        let items = Items::new(&plan);
        let expected: usize = (0..20).map(|i| 1usize << chunk_bits(i)).sum();
        assert_eq!(items.total, expected);
        let mut visited = 0u64;
        for i in 0..items.total {
            let (_, low) = items.get(&plan, i);
            visited += 1 << low;
        }
        assert_eq!(visited as u128, plan.steps());
    }

    #[test]
    fn word_layouts_agree() {
        let n = 30;
        let gens: Vec<Vec<u64>> = (0..14u64)
            .map(|i| {
                vec![
                    (i.wrapping_mul(0x2545_f491_4f6c_dd1d) >> 7) & ((1 << n) - 1),
                    (i * 77 + 5) & ((1 << n) - 1),
                ]
            })
            .collect();
        let rep = vec![vec![1u64, 3]];
        let one = Plan {
            layout: Layout::Planar(n),
            gens: gens.clone(),
            labels: Labels::Binary(rep.clone()),
        };
        let a = run_with(&Word1::<true>::new(&one.gens), &one, Mode::Minimum, false);
        let b = run_with(&Multi::<true>::new(one.layout, &one.gens), &one, Mode::Minimum, false);
        assert_eq!(a, b);
    }
}
