//! Pauli letters and signed Pauli strings.
//!
//! Character `j` of a Pauli string acts on qubit `j`, and qubit `j` is bit `j`
//! (least significant first) of a computational-basis index.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const NON_IDENTITY: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn is_identity(self) -> bool {
        self == Pauli::I
    }

    /// Symplectic `(x, z)` bits: X = (1,0), Z = (0,1), Y = (1,1).
    pub fn xz(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
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

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'I' | 'i' | '_' => Ok(Pauli::I),
            'X' | 'x' => Ok(Pauli::X),
            'Y' | 'y' => Ok(Pauli::Y),
            'Z' | 'z' => Ok(Pauli::Z),
            other => Err(Error::Parse(format!("unknown Pauli letter {other:?}"))),
        }
    }
}

/// An `n`-qubit Pauli observable `coefficient * P_0 ⊗ P_1 ⊗ ... ⊗ P_{n-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliString {
    letters: Vec<Pauli>,
    coefficient: f64,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        Self::with_coefficient(letters, 1.0)
    }

    pub fn with_coefficient(letters: Vec<Pauli>, coefficient: f64) -> Self {
        Self {
            letters,
            coefficient,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(vec![Pauli::I; n])
    }

    /// Builds an `n`-qubit string from `(qubit, letter)` pairs; the remaining
    /// qubits carry identities.
    pub fn from_sparse(n: usize, terms: &[(usize, Pauli)]) -> Result<Self> {
        let mut letters = vec![Pauli::I; n];
        for &(q, p) in terms {
            if q >= n {
                return Err(Error::InvalidQubits {
                    qubits: terms.iter().map(|t| t.0).collect(),
                    n,
                });
            }
            letters[q] = p;
        }
        Ok(Self::new(letters))
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::with_coefficient(self.letters.clone(), self.coefficient * factor)
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|p| !p.is_identity()).count()
    }

    /// Qubits carrying a non-identity letter, in increasing order.
    pub fn support(&self) -> Vec<usize> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_identity())
            .map(|(q, _)| q)
            .collect()
    }

    /// `(x_mask, z_mask, number_of_y)` of the letters.
    pub(crate) fn masks(&self) -> (usize, usize, u32) {
        let mut x = 0usize;
        let mut z = 0usize;
        let mut ys = 0u32;
        for (q, p) in self.letters.iter().enumerate() {
            let (px, pz) = p.xz();
            if px {
                x |= 1 << q;
            }
            if pz {
                z |= 1 << q;
            }
            if *p == Pauli::Y {
                ys += 1;
            }
        }
        (x, z, ys)
    }

    /// Applies the operator (including its coefficient) to a raw amplitude
    /// vector of length `2^n`, using `P|b> = i^{#Y} (-1)^{|b & z|} |b ^ x>`.
    pub fn apply(&self, amps: &[C64]) -> Result<Vec<C64>> {
        let mut out = vec![C64::new(0.0, 0.0); amps.len()];
        self.apply_add(amps, 1.0, &mut out)?;
        Ok(out)
    }

    /// `out += scale * coefficient * P * amps`.
    pub fn apply_add(&self, amps: &[C64], scale: f64, out: &mut [C64]) -> Result<()> {
        let dim = 1usize << self.n_qubits();
        if amps.len() != dim || out.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits(),
                found: amps.len().max(1).trailing_zeros() as usize,
            });
        }
        let (x, z, ys) = self.masks();
        let phase = i_pow(ys) * (scale * self.coefficient);
        for (b, a) in amps.iter().enumerate() {
            let sign = if (b & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            out[b ^ x] += phase * *a * sign;
        }
        Ok(())
    }
}

pub(crate) fn i_pow(k: u32) -> C64 {
    match k % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficient == -1.0 {
            write!(f, "-")?;
        } else if self.coefficient != 1.0 {
            write!(f, "{}*", self.coefficient)?;
        }
        for p in &self.letters {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Accepts `XYZI`, `+XYZI`, `-XYZI` or `0.5*XYZI`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (coefficient, body) = if let Some((c, body)) = s.split_once('*') {
            let c: f64 = c
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient in {s:?}")))?;
            (c, body.trim())
        } else if let Some(body) = s.strip_prefix('-') {
            (-1.0, body)
        } else if let Some(body) = s.strip_prefix('+') {
            (1.0, body)
        } else {
            (1.0, s)
        };
        if body.is_empty() {
            return Err(Error::Parse("empty Pauli string".into()));
        }
        let letters = body.chars().map(Pauli::from_char).collect::<Result<_>>()?;
        Ok(Self::with_coefficient(letters, coefficient))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn weight_counts_non_identity_letters() {
        assert_eq!(ps("IIII").weight(), 0);
        assert_eq!(ps("XYZI").weight(), 3);
        let mut letters = vec![Pauli::X; 8];
        letters.extend([Pauli::I; 4]);
        assert_eq!(PauliString::new(letters).weight(), 8);
    }

    #[test]
    fn parse_and_display() {
        let p = ps("-XIZ");
        assert_eq!(p.coefficient(), -1.0);
        assert_eq!(p.to_string(), "-XIZ");
        assert_eq!(ps("0.5*YY").coefficient(), 0.5);
        assert_eq!(p.support(), vec![0, 2]);
        assert!("XQ".parse::<PauliString>().is_err());
        assert!("".parse::<PauliString>().is_err());
    }

    #[test]
    fn single_qubit_actions() {
        let zero = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        let y0 = ps("Y").apply(&zero).unwrap();
        assert_eq!(y0, vec![C64::new(0.0, 0.0), C64::new(0.0, 1.0)]);
        let one = [C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
        assert_eq!(ps("Y").apply(&one).unwrap()[0], C64::new(0.0, -1.0));
        assert_eq!(ps("Z").apply(&one).unwrap()[1], C64::new(-1.0, 0.0));
    }

    #[test]
    fn squares_to_identity() {
        let amps: Vec<C64> = (0..8)
            .map(|k| C64::new(k as f64 * 0.1 - 0.3, 0.05 * k as f64))
            .collect();
        let p = ps("-XYZ");
        let twice = p.apply(&p.apply(&amps).unwrap()).unwrap();
        for (a, b) in twice.iter().zip(&amps) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let amps = vec![C64::new(1.0, 0.0); 4];
        assert!(matches!(
            ps("XYZ").apply(&amps),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
