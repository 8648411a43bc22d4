//! Exact matrix-rank counts used in the reduced-cycle census, each with a brute-force oracle.
//!
//! Notation: `E(a, b, r)` is the number of `a × b` binary matrices of rank `r`;
//! `E_ext(a, r; A, R)` is the number of rank-`R` matrices of size `A × A`
//! whose top-left `a × a` block is a fixed matrix of rank `r`; `Z(r)` is the
//! number of rank-`r` matrices in `ker(δ₁ ⊗ I + I ⊗ δ₂)` for factors with
//! parameters `(L, H)`; `Γ(R)` is the number of rank-`R` reduced cycles.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::complex::{random_boundary, BoundaryOperator};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::product::{product, reshape};

/// Largest enumeration the brute-force oracles accept.
pub const ORACLE_BUDGET: u128 = 1 << 28;

fn pow2(e: usize) -> BigUint {
    BigUint::one() << e
}

/// `∏_{i<r} (2^n − 2^i)`: ordered sequences of `r` independent vectors in `GF(2)^n`.
fn independent_sequences(n: usize, r: usize) -> BigUint {
    (0..r).fold(BigUint::one(), |acc, i| acc * (pow2(n) - pow2(i)))
}

/// Number of `a × b` matrices of rank exactly `r`.
///
/// A rank-`r` matrix factors as `F·G` with `F` an `a × r` and `G` an `r × b`
/// full-rank matrix, unique up to `F → FM`, `G → M⁻¹G` with `M ∈ GL(r)`.
pub fn count_rank_matrices(a: usize, b: usize, r: usize) -> BigUint {
    if r > a.min(b) {
        return BigUint::zero();
    }
    independent_sequences(a, r) * independent_sequences(b, r) / independent_sequences(r, r)
}

/// Rank-`R` extensions to `A × A` of a fixed `a × a` matrix of rank `r`.
///
/// Adds the new columns first (`a × a → a × A`, rank `z`), then the new rows.
/// When adding columns, their components inside the old column space are
/// free and the remaining `(a − r) × (A − a)` part must have rank `z − r`;
/// rows go the same way against the row space of the intermediate matrix.
pub fn count_extensions(a: usize, r: usize, cap_a: usize, cap_r: usize) -> Result<BigUint> {
    if r > a || a > cap_a || r > cap_r {
        return Err(Error::InvalidParameter(format!(
            "extension count needs r <= a <= A and r <= R, got a={a} r={r} A={cap_a} R={cap_r}"
        )));
    }
    let extra = cap_a - a;
    let mut total = BigUint::zero();
    for z in r..=a.min(cap_r) {
        let cols = pow2(extra * r) * count_rank_matrices(a - r, extra, z - r);
        let rows = pow2(extra * z) * count_rank_matrices(extra, cap_a - z, cap_r - z);
        total += cols * rows;
    }
    Ok(total)
}

/// `Z(r)`: rank-`r` matrices in the product kernel for factors with `dim im δ = l`, `dim H = h`.
///
/// In canonical form the kernel is `[[A, B, 0], [C, D, F], [0, F, 0]]` in
/// blocks `h, l, l`. Summing over the rank `f` of `F`: its rows and columns
/// remove rank `2f`, the `A, B, C, D` entries they meet are free, and the
/// rest is an arbitrary `(h + l − f)`-square matrix of rank `r − 2f`.
pub fn count_kernel_by_rank(l: usize, h: usize, r: usize) -> BigUint {
    let mut total = BigUint::zero();
    let mut f = 0;
    while 2 * f <= r && f <= l {
        let free = 2 * f * (h + l) - f * f;
        total += count_rank_matrices(l, l, f) * pow2(free) * count_rank_matrices(h + l - f, h + l - f, r - 2 * f);
        f += 1;
    }
    total
}

/// Parameters of the reduced complex for `M`, `H`, `M'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedParams {
    /// Dimension of the reduced space, `2M' − M`.
    pub k: usize,
    /// Image dimension of the reduced operator, `L − (M − M')`.
    pub l: usize,
    pub h: usize,
}

pub fn reduced_params(m: usize, h: usize, m_prime: usize) -> Result<ReducedParams> {
    if h > m || !(m - h).is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "M - H must be even and nonnegative, got M={m} H={h}"
        )));
    }
    if m_prime > m {
        return Err(Error::InvalidParameter(format!("M'={m_prime} exceeds M={m}")));
    }
    let l = (m - h) / 2;
    let removed = m - m_prime;
    if removed > l {
        return Err(Error::InvalidParameter(format!(
            "no good operator exists: M - M' = {removed} exceeds L = {l}"
        )));
    }
    Ok(ReducedParams {
        k: 2 * m_prime - m,
        l: l - removed,
        h,
    })
}

/// `Γ(R) = Σ_r Z'(r) · E_ext(K, r; M', R)` with `Z'` taken at the reduced parameters.
pub fn count_reduced_cycles(m: usize, h: usize, m_prime: usize, cap_r: usize) -> Result<BigUint> {
    let p = reduced_params(m, h, m_prime)?;
    let mut total = BigUint::zero();
    for r in 0..=p.k.min(cap_r) {
        total += count_kernel_by_rank(p.l, p.h, r) * count_extensions(p.k, r, m_prime, cap_r)?;
    }
    Ok(total)
}

/// Base-2 exponents of the asymptotic upper bounds, for diagnostics only.
pub mod bounds {
    pub fn rank_matrices(a: usize, r: usize) -> f64 {
        (2 * a * r) as f64 - (r * r) as f64
    }

    pub fn extensions(a: usize, r: usize, cap_a: usize, cap_r: usize) -> f64 {
        let (a, r, ca, cr) = (a as f64, r as f64, cap_a as f64, cap_r as f64);
        (2.0 * ca - a) * cr - a * r - cr * cr + (r + cr) * (r + cr) / 4.0
    }

    pub fn kernel_by_rank(l: usize, h: usize, r: usize) -> f64 {
        let (lf, hf, rf) = (l as f64, h as f64, r as f64);
        let sum: f64 = (0..=(r / 2).min(l))
            .map(|f| {
                let f = f as f64;
                (-2.0 * f * f + 2.0 * f * (rf - hf)).exp2()
            })
            .sum();
        2.0 * (hf + lf) * rf - rf * rf + sum.log2()
    }

    pub fn reduced_cycles(m: usize, h: usize, cap_r: usize) -> f64 {
        let (m, h, r) = (m as f64, h as f64, cap_r as f64);
        if r <= h {
            (m + h) * r - r * r
        } else {
            (m + h / 2.0) * r - r * r / 2.0
        }
    }
}

/// Logs whether `value ≤ 2^(exponent + slack)`; returns the comparison.
pub fn check_bound(label: &str, value: &BigUint, exponent: f64, slack: f64) -> bool {
    let bits = value.bits() as f64;
    let ok = value.is_zero() || bits - 1.0 <= exponent + slack;
    log::debug!(
        "{label}: log2(value) ≈ {:.2}, bound exponent {exponent:.2} + {slack}: {ok}",
        bits - 1.0
    );
    ok
}

/// Brute-force oracle selector; each variant returns a distribution indexed by rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleQuery {
    /// All `a × b` matrices.
    RankMatrices { a: usize, b: usize },
    /// All extensions of `I_r ⊕ 0` from `a × a` to `A × A`.
    Extensions { a: usize, r: usize, cap_a: usize },
    /// All of `ker ∂` for canonical factors with parameters `(l, h)`.
    KernelCensus { l: usize, h: usize },
}

fn budget_check(bits: usize) -> Result<()> {
    let required = 1u128.checked_shl(bits as u32).unwrap_or(u128::MAX);
    if bits >= 128 || required > ORACLE_BUDGET {
        return Err(Error::Budget {
            required: if bits >= 128 { u128::MAX } else { required },
            budget: ORACLE_BUDGET,
        });
    }
    Ok(())
}

fn histogram(max_rank: usize, ranks: impl Iterator<Item = usize>) -> Vec<BigUint> {
    let mut counts = vec![0u64; max_rank + 1];
    for r in ranks {
        counts[r] += 1;
    }
    counts.into_iter().map(BigUint::from).collect()
}

fn matrix_from_code(rows: usize, cols: usize, code: u64) -> BitMatrix {
    BitMatrix::from_fn(rows, cols, |r, c| code >> (r * cols + c) & 1 == 1)
}

pub fn brute_count(query: &OracleQuery) -> Result<Vec<BigUint>> {
    match *query {
        OracleQuery::RankMatrices { a, b } => {
            budget_check(a * b)?;
            Ok(histogram(
                a.min(b),
                (0..1u64 << (a * b)).map(|code| matrix_from_code(a, b, code).rank()),
            ))
        }
        OracleQuery::Extensions { a, r, cap_a } => {
            if r > a || a > cap_a {
                return Err(Error::InvalidParameter(format!(
                    "need r <= a <= A, got r={r} a={a} A={cap_a}"
                )));
            }
            let x = BitMatrix::from_fn(a, a, |i, j| i == j && i < r);
            brute_extensions(&x, cap_a)
        }
        OracleQuery::KernelCensus { l, h } => {
            let c = crate::complex::canonical_boundary(h, l);
            brute_kernel_census(&c, &c)
        }
    }
}

/// Rank distribution of all extensions of `x` to `A × A`.
pub fn brute_extensions(x: &BitMatrix, cap_a: usize) -> Result<Vec<BigUint>> {
    let a = x.rows();
    let free = cap_a * cap_a - a * a;
    budget_check(free)?;
    let positions: Vec<(usize, usize)> = (0..cap_a)
        .flat_map(|i| (0..cap_a).map(move |j| (i, j)))
        .filter(|&(i, j)| i >= a || j >= a)
        .collect();
    Ok(histogram(
        cap_a,
        (0..1u64 << free).map(|code| {
            let mut y = BitMatrix::zeros(cap_a, cap_a);
            for i in 0..a {
                for j in 0..a {
                    y.set(i, j, x.get(i, j));
                }
            }
            for (k, &(i, j)) in positions.iter().enumerate() {
                if code >> k & 1 == 1 {
                    y.set(i, j, true);
                }
            }
            y.rank()
        }),
    ))
}

/// Every element of `span(basis)`.
fn span_elements(n: usize, basis: &[BitVec]) -> Result<impl Iterator<Item = BitVec> + '_> {
    budget_check(basis.len())?;
    Ok((0..1u64 << basis.len()).map(move |code| {
        let mut v = BitVec::zeros(n);
        for (j, b) in basis.iter().enumerate() {
            if code >> j & 1 == 1 {
                v.xor_assign(b);
            }
        }
        v
    }))
}

/// Rank distribution of the `M₁ × M₂` reshapes of every vector in `ker(δ₁ ⊗ I + I ⊗ δ₂)`.
pub fn brute_kernel_census(d1: &BoundaryOperator, d2: &BoundaryOperator) -> Result<Vec<BigUint>> {
    let p = product(d1, d2);
    let n = p.operator().dim();
    let ker = p.operator().kernel().vectors();
    let (m1, m2) = (d1.dim(), d2.dim());
    let ranks = histogram(m1.min(m2), span_elements(n, &ker)?.map(|v| reshape(&v, m1, m2).rank()));
    Ok(ranks)
}

/// Rank distribution of the distinct top-left `M' × M'` blocks of every cycle of the product.
pub fn brute_reduced_census(d1: &BoundaryOperator, d2: &BoundaryOperator, m_prime: usize) -> Result<Vec<BigUint>> {
    let p = product(d1, d2);
    let n = p.operator().dim();
    let ker = p.operator().kernel().vectors();
    let (m1, m2) = (d1.dim(), d2.dim());
    let mut seen = std::collections::HashSet::new();
    for v in span_elements(n, &ker)? {
        seen.insert(reshape(&v, m1, m2).submatrix(0..m_prime, 0..m_prime));
    }
    Ok(histogram(m_prime, seen.iter().map(BitMatrix::rank)))
}

/// A random boundary operator that is good at `m_prime`, by rejection.
pub fn random_good_boundary<R: Rng + ?Sized>(
    m: usize,
    h: usize,
    m_prime: usize,
    rng: &mut R,
    max_tries: usize,
) -> Result<BoundaryOperator> {
    reduced_params(m, h, m_prime)?;
    for _ in 0..max_tries {
        let d = random_boundary(m, h, rng)?;
        if crate::complex::is_good(&d, m_prime) {
            return Ok(d);
        }
    }
    Err(Error::Precondition(format!(
        "no good operator found in {max_tries} tries for M={m} H={h} M'={m_prime}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(count_rank_matrices(2, 2, 1), big(9));
        assert_eq!(count_rank_matrices(3, 5, 0), big(1));
        assert_eq!(count_rank_matrices(3, 3, 3), big(168));
        assert_eq!(count_rank_matrices(2, 3, 3), big(0));
        assert_eq!(
            brute_count(&OracleQuery::RankMatrices { a: 2, b: 2 }).unwrap(),
            vec![big(1), big(9), big(6)]
        );
    }

    #[test]
    fn rank_counts_sum_to_all_matrices() {
        for a in 0..=6 {
            for b in 0..=6 {
                let s: BigUint = (0..=a.min(b)).map(|r| count_rank_matrices(a, b, r)).sum();
                assert_eq!(s, pow2(a * b));
            }
        }
    }

    #[test]
    fn extension_examples() {
        for cap in 0..=4 {
            for cr in 0..=cap {
                assert_eq!(
                    count_extensions(0, 0, cap, cr).unwrap(),
                    count_rank_matrices(cap, cap, cr)
                );
            }
        }
        assert_eq!(count_extensions(1, 1, 2, 2).unwrap(), big(4));
        assert_eq!(count_extensions(3, 2, 3, 2).unwrap(), big(1));
        assert_eq!(count_extensions(3, 2, 3, 3).unwrap(), big(0));
        assert!(count_extensions(2, 3, 4, 3).is_err());
        assert!(count_extensions(2, 1, 4, 0).is_err());
        let total: BigUint = brute_count(&OracleQuery::Extensions { a: 1, r: 0, cap_a: 2 })
            .unwrap()
            .into_iter()
            .sum();
        assert_eq!(total, big(8));
    }

    #[test]
    fn extension_count_ignores_choice_of_x() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..10 {
            let x = BitMatrix::random(2, 2, &mut rng);
            let r = x.rank();
            let dist = brute_extensions(&x, 4).unwrap();
            for (cr, count) in dist.iter().enumerate() {
                if cr >= r {
                    assert_eq!(*count, count_extensions(2, r, 4, cr).unwrap());
                }
            }
        }
    }

    #[test]
    fn kernel_examples() {
        for (l, h) in [(0, 0), (1, 0), (0, 2), (1, 1)] {
            assert_eq!(count_kernel_by_rank(l, h, 0), big(1));
        }
        let census = brute_count(&OracleQuery::KernelCensus { l: 1, h: 0 }).unwrap();
        assert_eq!(count_kernel_by_rank(1, 0, 1), census[1]);
        let census = brute_count(&OracleQuery::KernelCensus { l: 1, h: 1 }).unwrap();
        let total: BigUint = census.iter().sum();
        assert_eq!(total, big(32));
        for (r, c) in census.iter().enumerate() {
            assert_eq!(count_kernel_by_rank(1, 1, r), *c);
        }
    }

    #[test]
    fn reduced_params_examples() {
        assert_eq!(reduced_params(8, 2, 6).unwrap(), ReducedParams { k: 4, l: 1, h: 2 });
        assert!(reduced_params(4, 0, 1).is_err());
        assert!(reduced_params(5, 2, 4).is_err());
    }

    #[test]
    fn reduced_census_matches_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (m, h) in [(2, 0), (3, 1), (4, 0), (4, 2)] {
            let mp = m - 1;
            for _ in 0..3 {
                let d1 = random_good_boundary(m, h, mp, &mut rng, 1000).unwrap();
                let d2 = random_good_boundary(m, h, mp, &mut rng, 1000).unwrap();
                let census = brute_reduced_census(&d1, &d2, mp).unwrap();
                for (cr, c) in census.iter().enumerate() {
                    assert_eq!(count_reduced_cycles(m, h, mp, cr).unwrap(), *c, "M={m} H={h} R={cr}");
                }
            }
        }
    }

    #[test]
    fn oracle_budget() {
        assert!(matches!(
            brute_count(&OracleQuery::RankMatrices { a: 6, b: 5 }),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn bound_diagnostics_hold_at_small_sizes() {
        for a in 1..=6 {
            for r in 0..=a {
                assert!(check_bound(
                    "E",
                    &count_rank_matrices(a, a, r),
                    bounds::rank_matrices(a, r),
                    4.0
                ));
            }
        }
    }
}
