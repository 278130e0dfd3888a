use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{gates, ComplexMatrix, Gate1};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> Gate1 {
        match self {
            Pauli::I => gates::ID,
            Pauli::X => gates::X,
            Pauli::Y => gates::Y,
            Pauli::Z => gates::Z,
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// Product `self * other` as (power of i, letter).
    fn mul(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }
}

/// A Hermitian Pauli string: `±1` times a tensor product of single-qubit Paulis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
    negative: bool,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>, negative: bool) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidRegister("empty Pauli string".into()));
        }
        Ok(Self { letters, negative })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(alloc::vec![Pauli::I; n], false)
    }

    /// Single-letter string `letter` on `qubit` of an `n`-qubit register.
    pub fn single(n: usize, qubit: usize, letter: Pauli) -> Result<Self> {
        if qubit >= n {
            return Err(Error::QubitOutOfRange { qubit, n });
        }
        let mut letters = alloc::vec![Pauli::I; n];
        letters[qubit] = letter;
        Self::new(letters, false)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn letter(&self, qubit: usize) -> Pauli {
        self.letters[qubit]
    }

    /// `+1.0` or `-1.0`.
    pub fn phase(&self) -> f64 {
        if self.negative {
            -1.0
        } else {
            1.0
        }
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    /// Qubits carrying a non-identity letter.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.letters.iter().enumerate().filter(|(_, &p)| p != Pauli::I).map(|(q, _)| q)
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        let anti = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(&a, &b)| a != Pauli::I && b != Pauli::I && a != b)
            .count();
        anti % 2 == 0
    }

    /// Product `self * other`. Fails when the sizes differ or the product carries an
    /// imaginary phase (anticommuting factors).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch { expected: self.len(), found: other.len() });
        }
        let mut power = 0u8;
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (k, p) = a.mul(b);
                power += k;
                p
            })
            .collect();
        let mut negative = self.negative ^ other.negative;
        match power % 4 {
            0 => {}
            2 => negative = !negative,
            _ => return Err(Error::InvalidRegister("product of anticommuting Pauli strings".into())),
        }
        Self::new(letters, negative)
    }

    /// Dense matrix `phase * (sigma_0 ⊗ sigma_1 ⊗ ...)`, qubit 0 outermost.
    pub fn matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::from_gate(&self.letters[0].matrix());
        for p in &self.letters[1..] {
            m = m.kron(&ComplexMatrix::from_gate(&p.matrix()));
        }
        if self.negative {
            m = m.scale(Complex64::new(-1.0, 0.0));
        }
        m
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses `"XZI"`, `"+XZI"` or `"-XZI"`.
    fn from_str(s: &str) -> Result<Self> {
        let (negative, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let letters = body
            .chars()
            .map(|c| Pauli::from_char(c).ok_or_else(|| Error::Parse(alloc::format!("bad Pauli letter {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters, negative)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        let s: String = self.letters.iter().map(|p| p.as_char()).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn single_letters() {
        let i: PauliString = "I".parse().unwrap();
        assert_eq!(i.matrix(), ComplexMatrix::identity(2).unwrap());
        let z: PauliString = "Z".parse().unwrap();
        assert_eq!(z.matrix(), ComplexMatrix::from_row_major(2, vec![c(1.0), c(0.0), c(0.0), c(-1.0)]).unwrap());
    }

    #[test]
    fn xz_matches_hand_expanded_kronecker() {
        // X ⊗ Z = [[0, Z], [Z, 0]]
        let expected = [
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
        ];
        let m = "XZ".parse::<PauliString>().unwrap().matrix();
        for r in 0..4 {
            for col in 0..4 {
                assert_eq!(m.get(r, col), c(expected[r][col]), "entry ({r},{col})");
            }
        }
    }

    #[test]
    fn negative_phase_scales_matrix() {
        let m = "-Z".parse::<PauliString>().unwrap().matrix();
        assert_eq!(m.get(0, 0), c(-1.0));
        assert_eq!(m.get(1, 1), c(1.0));
    }

    #[test]
    fn products_track_phase() {
        let a: PauliString = "XZII".parse().unwrap();
        let b: PauliString = "IZXZ".parse().unwrap();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.to_string(), "XIXZ");
        // XY ⊗ YX = (iZ)(-iZ) = ZZ
        let p = "XY".parse::<PauliString>().unwrap().mul(&"YX".parse().unwrap()).unwrap();
        assert_eq!(p.to_string(), "ZZ");
        // XX * ZZ = (-iY)(-iY) = -YY
        let p = "XX".parse::<PauliString>().unwrap().mul(&"ZZ".parse().unwrap()).unwrap();
        assert_eq!(p.to_string(), "-YY");
        assert!("X".parse::<PauliString>().unwrap().mul(&"Z".parse().unwrap()).is_err());
    }

    #[test]
    fn parse_errors() {
        assert!("".parse::<PauliString>().is_err());
        assert!("XQ".parse::<PauliString>().is_err());
        assert!("-".parse::<PauliString>().is_err());
    }
}
