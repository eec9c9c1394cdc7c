use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A residue in Z/3, used as the colour of an o-graph edge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct ColorZ3(u8);

impl ColorZ3 {
    pub const ZERO: ColorZ3 = ColorZ3(0);
    pub const ONE: ColorZ3 = ColorZ3(1);
    pub const TWO: ColorZ3 = ColorZ3(2);
    pub const ALL: [ColorZ3; 3] = [Self::ZERO, Self::ONE, Self::TWO];

    pub fn new(value: u8) -> Option<Self> {
        (value < 3).then_some(ColorZ3(value))
    }

    /// Reduces any integer modulo 3.
    pub fn wrapping(value: i64) -> Self {
        ColorZ3(value.rem_euclid(3) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// `1 - c`, the affine involution exchanging 0 and 1 and fixing 2.
    pub fn one_minus(self) -> Self {
        ColorZ3::ONE - self
    }
}

impl TryFrom<u8> for ColorZ3 {
    type Error = String;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        ColorZ3::new(value).ok_or_else(|| format!("color {value} out of range 0..=2"))
    }
}

impl From<ColorZ3> for u8 {
    fn from(c: ColorZ3) -> u8 {
        c.0
    }
}

impl Add for ColorZ3 {
    type Output = ColorZ3;
    fn add(self, rhs: ColorZ3) -> ColorZ3 {
        ColorZ3((self.0 + rhs.0) % 3)
    }
}

impl Sub for ColorZ3 {
    type Output = ColorZ3;
    fn sub(self, rhs: ColorZ3) -> ColorZ3 {
        ColorZ3((self.0 + 3 - rhs.0) % 3)
    }
}

impl Neg for ColorZ3 {
    type Output = ColorZ3;
    fn neg(self) -> ColorZ3 {
        ColorZ3((3 - self.0) % 3)
    }
}

impl fmt::Display for ColorZ3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One of the four alphabet classes that the single-face automaton cannot tell apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LetterClass {
    /// `{(2,2)}`
    A0,
    /// `{(0,0), (1,1)}`
    A1,
    /// `{(1,0), (0,1)}`
    A2,
    /// `{(0,2), (1,2), (2,0), (2,1)}`
    A3,
}

impl LetterClass {
    pub const ALL: [LetterClass; 4] = [Self::A0, Self::A1, Self::A2, Self::A3];

    pub fn letters(self) -> impl Iterator<Item = Letter> {
        Letter::ALL.into_iter().filter(move |l| l.class() == self)
    }
}

impl fmt::Display for LetterClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            LetterClass::A0 => "A0",
            LetterClass::A1 => "A1",
            LetterClass::A2 => "A2",
            LetterClass::A3 => "A3",
        };
        f.write_str(name)
    }
}

/// The colour pair `(beta, gamma)` carried by a double edge of a chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[ColorZ3; 2]", into = "[ColorZ3; 2]")]
pub struct Letter {
    pub beta: ColorZ3,
    pub gamma: ColorZ3,
}

impl Letter {
    /// All nine letters, ordered by `3 * beta + gamma`.
    pub const ALL: [Letter; 9] = {
        let mut out = [Letter { beta: ColorZ3(0), gamma: ColorZ3(0) }; 9];
        let mut i = 0;
        while i < 9 {
            out[i] = Letter { beta: ColorZ3((i / 3) as u8), gamma: ColorZ3((i % 3) as u8) };
            i += 1;
        }
        out
    };

    pub fn new(beta: ColorZ3, gamma: ColorZ3) -> Self {
        Letter { beta, gamma }
    }

    /// Convenience constructor from raw residues; panics if either is not in `0..3`.
    pub fn from_values(beta: u8, gamma: u8) -> Self {
        Letter::new(
            ColorZ3::new(beta).expect("beta out of range"),
            ColorZ3::new(gamma).expect("gamma out of range"),
        )
    }

    pub fn index(self) -> usize {
        3 * self.beta.value() as usize + self.gamma.value() as usize
    }

    pub fn from_index(index: usize) -> Self {
        Letter::ALL[index]
    }

    pub fn swapped(self) -> Self {
        Letter { beta: self.gamma, gamma: self.beta }
    }

    pub fn class(self) -> LetterClass {
        match (self.beta.value(), self.gamma.value()) {
            (2, 2) => LetterClass::A0,
            (b, g) if b == g => LetterClass::A1,
            (b, g) if b != 2 && g != 2 => LetterClass::A2,
            _ => LetterClass::A3,
        }
    }
}

impl From<[ColorZ3; 2]> for Letter {
    fn from([beta, gamma]: [ColorZ3; 2]) -> Self {
        Letter { beta, gamma }
    }
}

impl From<Letter> for [ColorZ3; 2] {
    fn from(l: Letter) -> Self {
        [l.beta, l.gamma]
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.beta, self.gamma)
    }
}
