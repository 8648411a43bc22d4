//! CNOT encoding circuits for factor and product codes, checked by stabilizer propagation.
//!
//! Conventions. `CNOT(c, t)` maps `X_c → X_c X_t` and `Z_t → Z_c Z_t`, so on
//! binary Pauli vectors it does `x_t ^= x_c` and `z_c ^= z_t`. On Z vectors a
//! gate is the elementary matrix `I + e_c e_tᵀ`; a circuit that applies `U` to
//! Z vectors applies `U⁻ᵀ` to X vectors.
//!
//! Any `δ = W δ₀ W⁻¹`, with `δ₀` canonical, is encoded by preparing the
//! canonical code (Z on the `L` image qubits, X on the `L` preimage qubits)
//! and then applying a circuit that realizes `W` on Z vectors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::BoundaryOperator;
use crate::error::{Error, Result};
use crate::gf2::{image_basis, Basis, BitMatrix, BitVec};
use crate::product::ProductComplex;

/// Row operation `row[dst] += row[src]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowOp {
    pub dst: usize,
    pub src: usize,
}

impl RowOp {
    pub fn matrix(self, m: usize) -> BitMatrix {
        let mut e = BitMatrix::identity(m);
        e.set(self.dst, self.src, true);
        e
    }
}

/// Factors `u` as `E(ops[0]) · E(ops[1]) ⋯`, where `E(op)` applies `op` to rows.
///
/// Gauss-Jordan elimination without swaps: a zero pivot is fixed by adding a
/// lower row, so the list has at most `M²` entries.
pub fn decompose_invertible(u: &BitMatrix) -> Result<Vec<RowOp>> {
    if !u.is_invertible() {
        return Err(Error::Precondition("matrix is not invertible".into()));
    }
    let m = u.rows();
    let mut a = u.clone();
    let mut ops = Vec::new();
    for c in 0..m {
        if !a.get(c, c) {
            let r = (c + 1..m)
                .find(|&r| a.get(r, c))
                .expect("invertible matrix has a pivot");
            a.add_row(c, r);
            ops.push(RowOp { dst: c, src: r });
        }
        for r in 0..m {
            if r != c && a.get(r, c) {
                a.add_row(r, c);
                ops.push(RowOp { dst: r, src: c });
            }
        }
    }
    // R_k ⋯ R_1 u = I and every R_i is an involution, so u = R_1 ⋯ R_k.
    Ok(ops)
}

pub fn recompose(m: usize, ops: &[RowOp]) -> BitMatrix {
    ops.iter()
        .fold(BitMatrix::identity(m), |acc, op| acc.mul(&op.matrix(m)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnot {
    pub control: usize,
    pub target: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QubitInit {
    Data,
    Zero,
    Plus,
    /// First half of a Bell pair stabilized by `XX` and `ZZ`.
    EprA(usize),
    EprB(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingCircuit {
    pub n_qubits: usize,
    pub init: Vec<QubitInit>,
    pub gates: Vec<Cnot>,
}

impl EncodingCircuit {
    pub fn data_qubits(&self) -> usize {
        self.init.iter().filter(|t| matches!(t, QubitInit::Data)).count()
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Checks sizes, gate indices and that Bell partners point at each other.
    pub fn validate(&self) -> Result<()> {
        if self.init.len() != self.n_qubits {
            return Err(Error::Dimension {
                expected: self.n_qubits,
                found: self.init.len(),
            });
        }
        for (q, tag) in self.init.iter().enumerate() {
            let ok = match *tag {
                QubitInit::EprA(p) => p < self.n_qubits && self.init[p] == QubitInit::EprB(q),
                QubitInit::EprB(p) => p < self.n_qubits && self.init[p] == QubitInit::EprA(q),
                _ => true,
            };
            if !ok {
                return Err(Error::Precondition(format!("qubit {q}: unmatched Bell partner")));
            }
        }
        for g in &self.gates {
            if g.control >= self.n_qubits || g.target >= self.n_qubits || g.control == g.target {
                return Err(Error::Precondition(format!("bad gate CNOT {} {}", g.control, g.target)));
            }
        }
        Ok(())
    }

    /// Initial stabilizer generators as a tableau.
    pub fn initial_tableau(&self) -> PauliTableau {
        let n = self.n_qubits;
        let mut rows: Vec<(BitVec, BitVec)> = Vec::new();
        for (q, tag) in self.init.iter().enumerate() {
            match *tag {
                QubitInit::Data | QubitInit::EprB(_) => {}
                QubitInit::Zero => rows.push((BitVec::zeros(n), BitVec::unit(n, q))),
                QubitInit::Plus => rows.push((BitVec::unit(n, q), BitVec::zeros(n))),
                QubitInit::EprA(p) => {
                    let pair = BitVec::from_ones(n, [q, p]);
                    rows.push((pair.clone(), BitVec::zeros(n)));
                    rows.push((BitVec::zeros(n), pair));
                }
            }
        }
        PauliTableau::from_rows(n, &rows)
    }
}

impl fmt::Display for Cnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CNOT {} {}", self.control, self.target)
    }
}

/// Stabilizer rows stored qubit-major, so a CNOT is two word-parallel XORs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliTableau {
    // Row q holds the x (resp. z) bits of every stabilizer on qubit q.
    x_cols: BitMatrix,
    z_cols: BitMatrix,
}

impl PauliTableau {
    /// From `(x, z)` stabilizer rows.
    pub fn from_rows(n: usize, rows: &[(BitVec, BitVec)]) -> Self {
        let xs: Vec<BitVec> = rows.iter().map(|r| r.0.clone()).collect();
        let zs: Vec<BitVec> = rows.iter().map(|r| r.1.clone()).collect();
        PauliTableau {
            x_cols: BitMatrix::from_rows(n, &xs).transpose(),
            z_cols: BitMatrix::from_rows(n, &zs).transpose(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.x_cols.rows()
    }

    pub fn n_rows(&self) -> usize {
        self.x_cols.cols()
    }

    /// X parts, one row per stabilizer.
    pub fn x_part(&self) -> BitMatrix {
        self.x_cols.transpose()
    }

    /// Z parts, one row per stabilizer.
    pub fn z_part(&self) -> BitMatrix {
        self.z_cols.transpose()
    }

    pub fn apply_cnot(&mut self, g: Cnot) {
        self.x_cols.add_row(g.target, g.control);
        self.z_cols.add_row(g.control, g.target);
    }

    pub fn apply_all(&mut self, gates: &[Cnot]) {
        for &g in gates {
            self.apply_cnot(g);
        }
    }

    /// Span of the pure-Z rows and of the pure-X rows; `None` if some row mixes both.
    pub fn css_spans(&self) -> Option<(Basis, Basis)> {
        let (x, z) = (self.x_part(), self.z_part());
        let n = self.n_qubits();
        let mut zs = Vec::new();
        let mut xs = Vec::new();
        for r in 0..x.rows() {
            match (x.row(r).is_zero(), z.row(r).is_zero()) {
                (true, _) => zs.push(z.row(r)),
                (false, true) => xs.push(x.row(r)),
                (false, false) => return None,
            }
        }
        Some((Basis::span_of(n, &zs), Basis::span_of(n, &xs)))
    }
}

/// Gates that realize `E(ops[0]) ⋯ E(ops[k-1])` on Z vectors, on qubits `qubits[i]`.
fn gates_for<'a>(ops: &'a [RowOp], qubits: impl Fn(usize) -> usize + 'a) -> impl Iterator<Item = Cnot> + 'a {
    // Z vectors see the last gate's matrix leftmost, so emit the ops in reverse.
    ops.iter().rev().map(move |op| Cnot {
        control: qubits(op.dst),
        target: qubits(op.src),
    })
}

fn canonical_init(h: usize, l: usize) -> Vec<QubitInit> {
    let mut init = vec![QubitInit::Data; h];
    init.extend(std::iter::repeat_n(QubitInit::Zero, l));
    init.extend(std::iter::repeat_n(QubitInit::Plus, l));
    init
}

fn witness_ops(d: &BoundaryOperator) -> Vec<RowOp> {
    decompose_invertible(&d.canonical_witness()).expect("canonical witness is invertible")
}

pub fn factor_encoder(d: &BoundaryOperator) -> EncodingCircuit {
    let (h, l) = (d.hom_dim(), d.rank());
    EncodingCircuit {
        n_qubits: d.dim(),
        init: canonical_init(h, l),
        gates: gates_for(&witness_ops(d), |i| i).collect(),
    }
}

/// Block of index `i` in the canonical layout: 0 homology, 1 image, 2 preimage.
fn block(i: usize, h: usize, l: usize) -> usize {
    if i < h {
        0
    } else if i < h + l {
        1
    } else {
        2
    }
}

/// Encoder on the `M₁ × M₂` grid: canonical product code, then `Û₂` on every row and `Û₁` on every column.
pub fn product_encoder(p: &ProductComplex) -> EncodingCircuit {
    let (d1, d2) = p.factors();
    let (m1, m2) = (d1.dim(), d2.dim());
    let (h1, l1) = (d1.hom_dim(), d1.rank());
    let (h2, l2) = (d2.hom_dim(), d2.rank());
    let idx = |i: usize, j: usize| i * m2 + j;
    let mut init = vec![QubitInit::Data; m1 * m2];
    for i in 0..m1 {
        for j in 0..m2 {
            let tag = match (block(i, h1, l1), block(j, h2, l2)) {
                (0, 0) => QubitInit::Data,
                (1, 0) | (0, 1) | (1, 1) => QubitInit::Zero,
                (2, 0) | (0, 2) | (2, 2) => QubitInit::Plus,
                // (image, preimage) pairs with (preimage, image): Bell pair
                // stabilized by the ZZ and XX images of the canonical product.
                (1, 2) => QubitInit::EprA(idx(i + l1, j - l2)),
                _ => QubitInit::EprB(idx(i - l1, j + l2)),
            };
            init[idx(i, j)] = tag;
        }
    }
    let ops1 = witness_ops(d1);
    let ops2 = witness_ops(d2);
    let mut gates = Vec::with_capacity(m1 * ops2.len() + m2 * ops1.len());
    for i in 0..m1 {
        gates.extend(gates_for(&ops2, |j| idx(i, j)));
    }
    for j in 0..m2 {
        gates.extend(gates_for(&ops1, |i| idx(i, j)));
    }
    EncodingCircuit {
        n_qubits: m1 * m2,
        init,
        gates,
    }
}

/// Whether the propagated stabilizers span exactly `im δ` (Z side) and `im δᵀ` (X side).
pub fn verify_encoder(c: &EncodingCircuit, d: &BoundaryOperator) -> Result<bool> {
    if c.n_qubits != d.dim() {
        return Err(Error::Dimension {
            expected: d.dim(),
            found: c.n_qubits,
        });
    }
    c.validate()?;
    if c.data_qubits() != d.hom_dim() {
        return Ok(false);
    }
    let mut t = c.initial_tableau();
    t.apply_all(&c.gates);
    let Some((z_span, x_span)) = t.css_spans() else {
        return Ok(false);
    };
    Ok(z_span.same_span(&d.image()) && x_span.same_span(&image_basis(&d.matrix().transpose())))
}

/// Drops gates one at a time while the circuit still encodes `d`, until no single gate can go.
///
/// Elimination leaves gates that only permute generators of the initial
/// stabilizer group (for instance CNOTs between two `|+⟩` qubits). In the
/// result every gate matters: deleting any one of them breaks the encoder.
pub fn prune_encoder(c: &EncodingCircuit, d: &BoundaryOperator) -> Result<EncodingCircuit> {
    if !verify_encoder(c, d)? {
        return Err(Error::Precondition("circuit does not encode the operator".into()));
    }
    let mut out = c.clone();
    loop {
        let before = out.gates.len();
        let mut i = out.gates.len();
        while i > 0 {
            i -= 1;
            let g = out.gates.remove(i);
            if !verify_encoder(&out, d)? {
                out.gates.insert(i, g);
            }
        }
        if out.gates.len() == before {
            return Ok(out);
        }
    }
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

    fn steane() -> BoundaryOperator {
        boundary_from_checks(7, &steane_checks(), &BitMatrix::identity(3)).unwrap()
    }

    #[test]
    fn decompose_examples() {
        assert!(decompose_invertible(&BitMatrix::identity(5)).unwrap().is_empty());
        let e = RowOp { dst: 1, src: 3 }.matrix(4);
        assert_eq!(decompose_invertible(&e).unwrap(), vec![RowOp { dst: 1, src: 3 }]);
        assert!(decompose_invertible(&BitMatrix::zeros(2, 2)).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let m = rng.gen_range(1..=16);
            let u = BitMatrix::random_invertible(m, &mut rng);
            let ops = decompose_invertible(&u).unwrap();
            assert!(ops.len() <= m * m);
            assert_eq!(recompose(m, &ops), u);
        }
    }

    #[test]
    fn cnot_conjugation_rules() {
        let n = 2;
        let mut t = PauliTableau::from_rows(
            n,
            &[
                (BitVec::unit(n, 0), BitVec::zeros(n)),
                (BitVec::zeros(n), BitVec::unit(n, 1)),
            ],
        );
        t.apply_cnot(Cnot { control: 0, target: 1 });
        assert_eq!(t.x_part().row(0), BitVec::from_bit_str("11"));
        assert_eq!(t.z_part().row(1), BitVec::from_bit_str("11"));
        assert_eq!(t.n_rows(), 2);
    }

    #[test]
    fn factor_encoder_examples() {
        let c0 = canonical_boundary(1, 2);
        let enc = factor_encoder(&c0);
        assert_eq!(enc.gate_count(), 0);
        assert!(verify_encoder(&enc, &c0).unwrap());

        let zero = canonical_boundary(3, 0);
        let enc = factor_encoder(&zero);
        assert_eq!((enc.data_qubits(), enc.gate_count()), (3, 0));

        let s = steane();
        let enc = factor_encoder(&s);
        assert!(verify_encoder(&enc, &s).unwrap());
        let mut t = enc.initial_tableau();
        t.apply_all(&enc.gates);
        let (z, x) = t.css_spans().unwrap();
        assert!(z.same_span(&s.image()));
        assert_eq!(x.dim(), 3);
    }

    #[test]
    fn random_factor_encoders_verify() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let m = rng.gen_range(1..=10usize);
            let h = rng.gen_range(0..=m);
            if (m - h) % 2 == 1 {
                continue;
            }
            let d = random_boundary(m, h, &mut rng).unwrap();
            let enc = factor_encoder(&d);
            assert!(enc.gate_count() <= m * m);
            assert!(verify_encoder(&enc, &d).unwrap());
        }
    }

    #[test]
    fn product_encoders_verify() {
        let c = canonical_boundary(1, 0);
        let p = product(&c, &c);
        let enc = product_encoder(&p);
        assert_eq!((enc.data_qubits(), enc.gate_count()), (1, 0));
        assert!(verify_encoder(&enc, p.operator()).unwrap());

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let (m1, h1) = [(3, 1), (4, 2), (5, 1), (4, 0), (2, 2)][rng.gen_range(0..5)];
            let (m2, h2) = [(3, 1), (5, 3), (4, 2), (6, 2)][rng.gen_range(0..4)];
            let p = product(
                &random_boundary(m1, h1, &mut rng).unwrap(),
                &random_boundary(m2, h2, &mut rng).unwrap(),
            );
            let enc = product_encoder(&p);
            enc.validate().unwrap();
            assert_eq!(enc.data_qubits(), h1 * h2);
            assert!(verify_encoder(&enc, p.operator()).unwrap());
        }
    }

    #[test]
    fn steane_product_encoder() {
        let s = steane();
        let p = product(&s, &s);
        let enc = product_encoder(&p);
        assert!(enc.gate_count() <= 2 * 7 * 56);
        assert!(verify_encoder(&enc, p.operator()).unwrap());
    }

    #[test]
    fn deleted_gate_is_rejected() {
        let s = steane();
        let enc = factor_encoder(&s);
        // The first gate acts on two |+> qubits and is harmless.
        assert_eq!(enc.gates[0], Cnot { control: 5, target: 6 });
        let mut m = enc.clone();
        m.gates.remove(0);
        assert!(verify_encoder(&m, &s).unwrap());

        let pruned = prune_encoder(&enc, &s).unwrap();
        assert!(pruned.gate_count() < enc.gate_count());
        assert!(verify_encoder(&pruned, &s).unwrap());
        for i in 0..pruned.gates.len() {
            let mut m = pruned.clone();
            m.gates.remove(i);
            assert!(!verify_encoder(&m, &s).unwrap(), "gate {i}");
        }
    }

    #[test]
    fn swapped_init_is_rejected() {
        let s = steane();
        let mut enc = factor_encoder(&s);
        enc.init.swap(1, 4);
        assert!(!verify_encoder(&enc, &s).unwrap());
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let enc = factor_encoder(&canonical_boundary(1, 1));
        assert!(matches!(
            verify_encoder(&enc, &canonical_boundary(2, 1)),
            Err(Error::Dimension { .. })
        ));
    }
}
