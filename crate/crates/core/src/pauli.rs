//! Signed multi-qubit Pauli operators in symplectic `(x|z)` form.
//!
//! A [`PauliString`] on `n` qubits stores two bit masks and a phase exponent
//! `k` mod 4 and denotes the operator `i^k · X^x Z^z`, where `X^x Z^z` is
//! factored qubit by qubit (X applied after Z on every qubit). With this
//! convention a `Y` letter contributes one factor of `i`: `Y = i·XZ`.
//!
//! Qubits are 0-based everywhere in the API. The text format writes qubit 0
//! as the first letter, so `"+ZXXII"` is `Z1 X2 X3` in 1-based notation.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest qubit count a packed Pauli string can hold.
pub const MAX_QUBITS: usize = 64;

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[inline]
pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Signed n-qubit Pauli operator `i^phase · X^x Z^z`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    phase: u8,
}

impl PauliString {
    /// The identity on `n` qubits. Panics if `n` exceeds [`MAX_QUBITS`].
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        PauliString {
            n,
            x: 0,
            z: 0,
            phase: 0,
        }
    }

    /// Builds `i^phase · X^x Z^z`. Bits above `n` must be clear.
    pub fn from_parts(n: usize, x: u64, z: u64, phase: u8) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::TooLarge {
                requested: n,
                max: MAX_QUBITS,
            });
        }
        let m = low_mask(n);
        if x & !m != 0 || z & !m != 0 {
            return Err(Error::InvalidArgument(format!(
                "x/z masks have bits beyond qubit count {n}"
            )));
        }
        Ok(PauliString {
            n,
            x,
            z,
            phase: phase & 3,
        })
    }

    /// Positive-sign string from a letter per qubit.
    pub fn from_letters(letters: &[Letter]) -> Result<Self> {
        let mut p = PauliString::identity(0);
        if letters.len() > MAX_QUBITS {
            return Err(Error::TooLarge {
                requested: letters.len(),
                max: MAX_QUBITS,
            });
        }
        p.n = letters.len();
        for (q, &l) in letters.iter().enumerate() {
            p.set_letter(q, l);
        }
        Ok(p)
    }

    /// Positive-sign string with the given letters on the listed qubits and
    /// identity elsewhere.
    pub fn from_sparse(n: usize, letters: &[(usize, Letter)]) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::TooLarge {
                requested: n,
                max: MAX_QUBITS,
            });
        }
        let mut p = PauliString::identity(n);
        for &(q, l) in letters {
            if q >= n {
                return Err(Error::IndexOutOfRange { index: q, size: n });
            }
            p.set_letter(q, l);
        }
        Ok(p)
    }

    pub fn single(n: usize, qubit: usize, letter: Letter) -> Result<Self> {
        Self::from_sparse(n, &[(qubit, letter)])
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_bits(&self) -> u64 {
        self.x
    }

    pub fn z_bits(&self) -> u64 {
        self.z
    }

    /// Exponent `k` in `i^k · X^x Z^z`.
    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    /// Exponent `c` of the coefficient `i^c` in front of the letter form
    /// (`Y` written as a letter, not as `iXZ`).
    pub fn sign_exp(&self) -> u8 {
        let ys = (self.x & self.z).count_ones() as u8 & 3;
        (self.phase + 4 - ys) & 3
    }

    pub fn is_hermitian(&self) -> bool {
        self.sign_exp() & 1 == 0
    }

    /// `true` when the letter-form coefficient is −1. Meaningless for ±i.
    pub fn is_negative(&self) -> bool {
        self.sign_exp() == 2
    }

    /// Letter-form sign as ±1, or `None` for the non-Hermitian ±i cases.
    pub fn sign(&self) -> Option<i8> {
        match self.sign_exp() {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    /// Same letters with the letter-form coefficient set to `+1` or `-1`.
    pub fn with_sign(&self, negative: bool) -> Self {
        let ys = (self.x & self.z).count_ones() as u8;
        PauliString {
            phase: (ys + if negative { 2 } else { 0 }) & 3,
            ..*self
        }
    }

    pub fn negated(&self) -> Self {
        PauliString {
            phase: (self.phase + 2) & 3,
            ..*self
        }
    }

    /// Identity up to phase (no letters set).
    pub fn is_trivial(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Exactly `+I`.
    pub fn is_identity(&self) -> bool {
        self.is_trivial() && self.phase == 0
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        debug_assert!(qubit < self.n);
        Letter::from_bits((self.x >> qubit) & 1 == 1, (self.z >> qubit) & 1 == 1)
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n).map(|q| self.letter(q)).collect()
    }

    /// Replaces the letter on `qubit`, keeping the letter-form coefficient.
    pub fn set_letter(&mut self, qubit: usize, letter: Letter) {
        debug_assert!(qubit < self.n);
        let c = self.sign_exp();
        let bit = 1u64 << qubit;
        let (lx, lz) = letter.bits();
        self.x = if lx { self.x | bit } else { self.x & !bit };
        self.z = if lz { self.z | bit } else { self.z & !bit };
        let ys = (self.x & self.z).count_ones() as u8;
        self.phase = (c + ys) & 3;
    }

    pub fn support_mask(&self) -> u64 {
        self.x | self.z
    }

    /// Qubits carrying a non-identity letter, ascending.
    pub fn support(&self) -> Vec<usize> {
        bits_of(self.support_mask())
    }

    pub fn weight(&self) -> usize {
        self.support_mask().count_ones() as usize
    }

    fn check_same_n(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Exact operator product `self · other`.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_same_n(other)?;
        Ok(self.mul(other))
    }

    // Z^z1 X^x2 = (-1)^{|z1 & x2|} X^x2 Z^z1
    pub(crate) fn mul(&self, other: &PauliString) -> PauliString {
        debug_assert_eq!(self.n, other.n);
        let swaps = (self.z & other.x).count_ones() as u8;
        PauliString {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: (self.phase + other.phase + 2 * (swaps & 1)) & 3,
        }
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_same_n(other)?;
        Ok(self.commutes_with(other))
    }

    /// Symplectic form `<x1,z2> + <x2,z1>` mod 2 is zero.
    pub(crate) fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones() % 2 == 0
    }

    /// Restriction to the qubits in `mask`: same letters there, identity
    /// elsewhere, letter-form sign `+`.
    pub fn restrict_mask(&self, mask: u64) -> PauliString {
        let x = self.x & mask;
        let z = self.z & mask;
        PauliString {
            n: self.n,
            x,
            z,
            phase: (x & z).count_ones() as u8 & 3,
        }
    }

    pub fn restrict(&self, qubits: &[usize]) -> Result<PauliString> {
        Ok(self.restrict_mask(mask_of(qubits, self.n)?))
    }

    /// Packed symplectic vector: x bits in the low word, z bits in the high word.
    pub(crate) fn vector(&self) -> u128 {
        self.x as u128 | ((self.z as u128) << 64)
    }

    /// Conjugation `U P U†` by a single-qubit Clifford given as images of X and Z.
    pub(crate) fn conjugate_local(&mut self, qubit: usize, gate: Gate) {
        let c = self.sign_exp();
        let letter = self.letter(qubit);
        let (image, flip) = gate.image(letter);
        self.set_letter(qubit, image);
        if flip {
            self.phase = (self.phase + 2) & 3;
        }
        debug_assert_eq!(self.sign_exp(), (c + if flip { 2 } else { 0 }) & 3);
    }

    /// Parses the text grammar `[+|-]` followed by one letter per qubit.
    /// `+i`/`-i` prefixes are accepted for non-Hermitian strings so that
    /// every value round-trips through [`fmt::Display`].
    pub fn parse(text: &str) -> Result<PauliString> {
        let t = text.trim();
        let (c, body) = if let Some(rest) = t.strip_prefix("+i") {
            (1u8, rest)
        } else if let Some(rest) = t.strip_prefix("-i") {
            (3u8, rest)
        } else if let Some(rest) = t.strip_prefix('+') {
            (0u8, rest)
        } else if let Some(rest) = t.strip_prefix('-') {
            (2u8, rest)
        } else {
            (0u8, t)
        };
        if body.is_empty() {
            return Err(Error::Parse {
                line: 0,
                message: format!("empty Pauli string {text:?}"),
            });
        }
        let mut letters = Vec::with_capacity(body.len());
        for (pos, ch) in body.chars().enumerate() {
            match Letter::from_char(ch) {
                Some(l) => letters.push(l),
                None => {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("invalid character {ch:?} at position {pos} in {text:?}"),
                    })
                }
            }
        }
        let p = PauliString::from_letters(&letters)?;
        Ok(PauliString {
            phase: (p.phase + c) & 3,
            ..p
        })
    }

    /// Parses and checks the qubit count.
    pub fn parse_with_len(text: &str, n: usize) -> Result<PauliString> {
        let p = Self::parse(text)?;
        if p.n != n {
            return Err(Error::Parse {
                line: 0,
                message: format!("Pauli string {text:?} has {} letters, expected {n}", p.n),
            });
        }
        Ok(p)
    }

    /// Compact 1-based rendering such as `-Y2Y3Y4`, identity as `I`.
    pub fn to_sparse_string(&self) -> String {
        let mut s = String::from(match self.sign_exp() {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        });
        if self.is_trivial() {
            s.push('I');
        }
        for q in self.support() {
            s.push(self.letter(q).as_char());
            s.push_str(&(q + 1).to_string());
        }
        s
    }
}

/// Elementary single-qubit Cliffords used for conjugation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    /// Hadamard: X ↔ Z, Y → −Y.
    H,
    /// Phase gate: X → Y, Y → −X.
    S,
    /// Pauli X: Z → −Z, Y → −Y.
    X,
    /// Pauli Z: X → −X, Y → −Y.
    Z,
}

impl Gate {
    /// Image of a letter under conjugation and whether the sign flips.
    pub fn image(self, letter: Letter) -> (Letter, bool) {
        use Letter::*;
        match (self, letter) {
            (_, I) => (I, false),
            (Gate::H, X) => (Z, false),
            (Gate::H, Z) => (X, false),
            (Gate::H, Y) => (Y, true),
            (Gate::S, X) => (Y, false),
            (Gate::S, Y) => (X, true),
            (Gate::S, Z) => (Z, false),
            (Gate::X, X) => (X, false),
            (Gate::X, l) => (l, true),
            (Gate::Z, Z) => (Z, false),
            (Gate::Z, l) => (l, true),
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.sign_exp() {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}")?;
        for q in 0..self.n {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PauliString::parse(s)
    }
}

/// Ascending indices of set bits.
pub fn bits_of(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

/// Bit mask of a qubit list, checking every index against `n`.
pub fn mask_of(qubits: &[usize], n: usize) -> Result<u64> {
    let mut m = 0u64;
    for &q in qubits {
        if q >= n {
            return Err(Error::IndexOutOfRange { index: q, size: n });
        }
        m |= 1 << q;
    }
    Ok(m)
}
