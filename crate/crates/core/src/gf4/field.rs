use std::fmt;

/// An element of GF(4) = {0, 1, ω, ω²} stored as a 2-bit code.
///
/// Codes: `0 ↔ 00`, `1 ↔ 01`, `ω ↔ 10`, `ω² ↔ 11`. Bit 0 is the "lo" plane
/// and bit 1 the "hi" plane, so addition is XOR of codes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gf4(u8);

// MUL[a][b] over codes.
const MUL: [[u8; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
const CONJ: [u8; 4] = [0, 1, 3, 2];
const INV: [u8; 4] = [0, 1, 3, 2];

impl Gf4 {
    pub const ZERO: Gf4 = Gf4(0);
    pub const ONE: Gf4 = Gf4(1);
    pub const W: Gf4 = Gf4(2);
    pub const W2: Gf4 = Gf4(3);
    pub const ALL: [Gf4; 4] = [Gf4::ZERO, Gf4::ONE, Gf4::W, Gf4::W2];

    pub fn from_code(code: u8) -> Gf4 {
        assert!(code < 4, "GF(4) code out of range: {code}");
        Gf4(code)
    }

    pub fn code(self) -> u8 {
        self.0
    }

    pub fn lo(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn hi(self) -> bool {
        self.0 & 2 == 2
    }

    pub fn from_planes(lo: bool, hi: bool) -> Gf4 {
        Gf4(lo as u8 | (hi as u8) << 1)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Frobenius conjugate `ā = a²`.
    pub fn conj(self) -> Gf4 {
        Gf4(CONJ[self.0 as usize])
    }

    pub fn inv(self) -> Option<Gf4> {
        (self.0 != 0).then(|| Gf4(INV[self.0 as usize]))
    }

    pub fn to_char(self) -> char {
        ['0', '1', 'w', 'W'][self.0 as usize]
    }

    pub fn from_char(c: char) -> Option<Gf4> {
        match c {
            '0' => Some(Gf4::ZERO),
            '1' => Some(Gf4::ONE),
            'w' => Some(Gf4::W),
            'W' => Some(Gf4::W2),
            _ => None,
        }
    }
}

impl std::ops::Add for Gf4 {
    type Output = Gf4;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Gf4) -> Gf4 {
        Gf4(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for Gf4 {
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: Gf4) {
        self.0 ^= rhs.0;
    }
}

impl std::ops::Mul for Gf4 {
    type Output = Gf4;
    fn mul(self, rhs: Gf4) -> Gf4 {
        Gf4(MUL[self.0 as usize][rhs.0 as usize])
    }
}

impl fmt::Debug for Gf4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["0", "1", "ω", "ω²"][self.0 as usize])
    }
}

impl fmt::Display for Gf4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}
