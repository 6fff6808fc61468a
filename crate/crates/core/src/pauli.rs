//! Phase-free Pauli strings over `{I, X, Y, Z}`.
//!
//! A [`PauliString`] packs two bits per site into a `u32`, with qubit 1 in the
//! most significant position. Letters are coded `I=0, X=1, Y=2, Z=3`, so the
//! numeric order of codes is the lexicographic order of the strings and the
//! code of a non-identity string minus one is its index in
//! [`enumerate_basis`].

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported register width.
pub const MAX_QUBITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];
    pub const NON_IDENTITY: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];

    #[inline]
    pub fn bits(self) -> u32 {
        self as u32
    }

    #[inline]
    pub fn from_bits(bits: u32) -> Letter {
        Letter::ALL[(bits & 3) as usize]
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Result<Letter> {
        match c {
            'I' => Ok(Letter::I),
            'X' => Ok(Letter::X),
            'Y' => Ok(Letter::Y),
            'Z' => Ok(Letter::Z),
            other => Err(Error::BadLetter(other)),
        }
    }
}

pub(crate) fn check_width(n: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&n) {
        Ok(())
    } else {
        Err(Error::QubitCount(n))
    }
}

/// An `n`-site tensor product of Pauli letters with no sign or coefficient.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n: u8,
    code: u32,
}

impl PauliString {
    pub fn new(letters: &[Letter]) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyPauli);
        }
        check_width(letters.len())?;
        let code = letters.iter().fold(0u32, |acc, l| (acc << 2) | l.bits());
        Ok(PauliString {
            n: letters.len() as u8,
            code,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_width(n)?;
        Ok(PauliString { n: n as u8, code: 0 })
    }

    /// Builds a string directly from its packed code. `code` must be below `4^n`.
    pub(crate) fn from_code(n: usize, code: u32) -> Self {
        debug_assert!(n <= MAX_QUBITS && (code as u64) < (1u64 << (2 * n)));
        PauliString { n: n as u8, code }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn code(&self) -> u32 {
        self.code
    }

    /// Letter on qubit `q`, counted from 0.
    #[inline]
    pub fn letter(&self, q: usize) -> Letter {
        assert!(q < self.n(), "qubit {q} out of range for width {}", self.n);
        Letter::from_bits(self.code >> (2 * (self.n() - 1 - q)))
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.n()).map(move |q| self.letter(q))
    }

    pub fn with_letter(&self, q: usize, letter: Letter) -> Self {
        assert!(q < self.n());
        let shift = 2 * (self.n() - 1 - q);
        let code = (self.code & !(3 << shift)) | (letter.bits() << shift);
        PauliString { n: self.n, code }
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.support_mask().count_ones() as usize
    }

    /// Bit `q` is set when qubit `q` (from 0) carries a non-identity letter.
    pub fn support_mask(&self) -> u32 {
        let mut mask = 0;
        for q in 0..self.n() {
            if self.letter(q) != Letter::I {
                mask |= 1 << q;
            }
        }
        mask
    }

    pub fn is_identity(&self) -> bool {
        self.code == 0
    }

    /// Position of a non-identity string in [`enumerate_basis`] order.
    pub fn basis_index(&self) -> Option<usize> {
        (self.code != 0).then(|| self.code as usize - 1)
    }

    /// Parses either the positional form (`"XZI"`) or the indexed form
    /// (`"X1Z2"`, 1-based, unlisted qubits are `I`) for a register of width `n`.
    pub fn parse_with_width(text: &str, n: usize) -> Result<Self> {
        check_width(n)?;
        let text = text.trim();
        if text.chars().any(|c| c.is_ascii_digit()) {
            return Self::parse_indexed(text, n);
        }
        let p: PauliString = text.parse()?;
        if p.n() != n {
            return Err(Error::WidthMismatch {
                expected: n,
                found: p.n(),
            });
        }
        Ok(p)
    }

    fn parse_indexed(text: &str, n: usize) -> Result<Self> {
        let malformed = || Error::MalformedPauli(text.to_string());
        let mut letters = vec![Letter::I; n];
        let mut seen = vec![false; n];
        let mut chars = text.chars().peekable();
        if chars.peek().is_none() {
            return Err(Error::EmptyPauli);
        }
        while let Some(c) = chars.next() {
            let letter = Letter::from_char(c)?;
            let mut digits = String::new();
            while let Some(d) = chars.peek().copied().filter(char::is_ascii_digit) {
                digits.push(d);
                chars.next();
            }
            let index: usize = digits.parse().map_err(|_| malformed())?;
            if index == 0 || index > n {
                return Err(Error::QubitIndex { index, n });
            }
            if seen[index - 1] {
                return Err(malformed());
            }
            seen[index - 1] = true;
            letters[index - 1] = letter;
        }
        PauliString::new(&letters)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::EmptyPauli);
        }
        let letters = s.chars().map(Letter::from_char).collect::<Result<Vec<_>>>()?;
        PauliString::new(&letters)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Number of non-identity strings on `n` qubits.
pub fn basis_size(n: usize) -> usize {
    (1usize << (2 * n)) - 1
}

/// All `4^n - 1` non-identity strings in lexicographic order `I < X < Y < Z`.
pub fn enumerate_basis(n: usize) -> Result<PauliSet> {
    check_width(n)?;
    let members = (1..=basis_size(n) as u32)
        .map(|code| PauliString::from_code(n, code))
        .collect();
    Ok(PauliSet { n, members })
}

/// Same strings as [`enumerate_basis`] but as an ordered vector.
pub fn basis_vec(n: usize) -> Result<Vec<PauliString>> {
    check_width(n)?;
    Ok((1..=basis_size(n) as u32)
        .map(|code| PauliString::from_code(n, code))
        .collect())
}

/// A set of equal-width Pauli strings.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PauliSet {
    n: usize,
    members: BTreeSet<PauliString>,
}

impl PauliSet {
    pub fn empty(n: usize) -> Result<Self> {
        check_width(n)?;
        Ok(PauliSet {
            n,
            members: BTreeSet::new(),
        })
    }

    pub fn from_strings<I, S>(n: usize, items: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = PauliSet::empty(n)?;
        for s in items {
            set.insert(PauliString::parse_with_width(s.as_ref(), n)?)?;
        }
        Ok(set)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, p: PauliString) -> Result<bool> {
        if p.n() != self.n {
            return Err(Error::WidthMismatch {
                expected: self.n,
                found: p.n(),
            });
        }
        Ok(self.members.insert(p))
    }

    pub fn contains(&self, p: &PauliString) -> bool {
        self.members.contains(p)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &PauliString> + '_ {
        self.members.iter()
    }

    pub fn is_subset(&self, other: &PauliSet) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.members.iter().map(|p| p.to_string()).collect()
    }
}

impl<'a> IntoIterator for &'a PauliSet {
    type Item = &'a PauliString;
    type IntoIter = std::collections::btree_set::Iter<'a, PauliString>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

impl Serialize for PauliSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.members.iter())
    }
}

impl<'de> Deserialize<'de> for PauliSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(deserializer)?;
        let first = strings
            .first()
            .ok_or_else(|| serde::de::Error::custom("cannot infer width of an empty Pauli set"))?;
        PauliSet::from_strings(first.len(), &strings).map_err(serde::de::Error::custom)
    }
}
