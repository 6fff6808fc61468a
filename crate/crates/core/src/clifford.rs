//! Phase-stripped Clifford readout operations.
//!
//! Every operation is stored in a normal form: a qubit permutation applied
//! first, followed by one permutation of `{X, Y, Z}` per site. Two generator
//! words compare equal exactly when their normal forms agree.
//!
//! Words are written `A*B`, meaning `B` acts first and then `A`, so
//! `Rx1*SW12` is a swap of qubits 1 and 2 followed by `Rx` on qubit 1.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::pauli::{check_width, Letter, PauliString};

/// One factor of a readout word. Qubit indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Identity,
    Rx(usize),
    Ry(usize),
    Rz(usize),
    Swap(usize, usize),
}

impl Generator {
    fn validate(&self, n: usize) -> Result<()> {
        let check = |q: usize| {
            if (1..=n).contains(&q) {
                Ok(())
            } else {
                Err(Error::QubitIndex { index: q, n })
            }
        };
        match *self {
            Generator::Identity => Ok(()),
            Generator::Rx(q) | Generator::Ry(q) | Generator::Rz(q) => check(q),
            Generator::Swap(a, b) => {
                check(a)?;
                check(b)?;
                if a == b {
                    Err(Error::DegenerateSwap(a))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn is_swap(&self) -> bool {
        matches!(self, Generator::Swap(..))
    }

    fn parse(token: &str, n: usize) -> Result<Generator> {
        let malformed = || Error::MalformedOp(token.to_string());
        let index = |digits: &str| -> Result<usize> {
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            digits.parse().map_err(|_| malformed())
        };
        let generator = if !token.is_empty() && token.bytes().all(|b| b == b'I') {
            Generator::Identity
        } else if let Some(rest) = token.strip_prefix("Rx") {
            Generator::Rx(index(rest)?)
        } else if let Some(rest) = token.strip_prefix("Ry") {
            Generator::Ry(index(rest)?)
        } else if let Some(rest) = token.strip_prefix("Rz") {
            Generator::Rz(index(rest)?)
        } else if let Some(rest) = token.strip_prefix("SW") {
            let (a, b) = match rest.split_once(['_', ',']) {
                Some((a, b)) => (index(a)?, index(b)?),
                None if rest.len() == 2 => (index(&rest[..1])?, index(&rest[1..])?),
                None => return Err(malformed()),
            };
            Generator::Swap(a, b)
        } else {
            return Err(malformed());
        };
        generator.validate(n)?;
        Ok(generator)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Generator::Identity => write!(f, "I"),
            Generator::Rx(q) => write!(f, "Rx{q}"),
            Generator::Ry(q) => write!(f, "Ry{q}"),
            Generator::Rz(q) => write!(f, "Rz{q}"),
            Generator::Swap(a, b) if a < 10 && b < 10 => write!(f, "SW{a}{b}"),
            Generator::Swap(a, b) => write!(f, "SW{a}_{b}"),
        }
    }
}

/// Permutation of `{X, Y, Z}` on one site, indexed by letter code; `I` is fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SiteMap([u8; 4]);

impl SiteMap {
    pub const IDENTITY: SiteMap = SiteMap([0, 1, 2, 3]);
    /// `Y <-> Z`
    pub const RX: SiteMap = SiteMap([0, 1, 3, 2]);
    /// `X <-> Z`
    pub const RY: SiteMap = SiteMap([0, 3, 2, 1]);
    /// `X <-> Y`
    pub const RZ: SiteMap = SiteMap([0, 2, 1, 3]);

    #[inline]
    pub fn apply(&self, letter: Letter) -> Letter {
        Letter::from_bits(self.0[letter.bits() as usize] as u32)
    }

    /// `self` after `inner`.
    fn after(&self, inner: &SiteMap) -> SiteMap {
        let mut out = [0u8; 4];
        for (slot, &mid) in out.iter_mut().zip(inner.0.iter()) {
            *slot = self.0[mid as usize];
        }
        SiteMap(out)
    }

    /// Shortest `Rx`/`Ry`/`Rz` word for this permutation, leftmost acting last.
    fn word(&self, q: usize) -> Vec<Generator> {
        match self.0 {
            [0, 1, 2, 3] => vec![],
            [0, 1, 3, 2] => vec![Generator::Rx(q)],
            [0, 3, 2, 1] => vec![Generator::Ry(q)],
            [0, 2, 1, 3] => vec![Generator::Rz(q)],
            // X->Y, Y->Z, Z->X
            [0, 2, 3, 1] => vec![Generator::Rx(q), Generator::Ry(q)],
            // X->Z, Y->X, Z->Y
            [0, 3, 1, 2] => vec![Generator::Ry(q), Generator::Rx(q)],
            other => unreachable!("not a letter permutation: {other:?}"),
        }
    }
}

/// Normal form of a readout operation on `n` qubits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CliffordAction {
    /// `dest[i]` is where the letter on qubit `i` (from 0) is moved.
    dest: Vec<u8>,
    /// Letter permutation applied on each site after the move.
    sites: Vec<SiteMap>,
}

impl CliffordAction {
    pub fn identity(n: usize) -> Self {
        CliffordAction {
            dest: (0..n as u8).collect(),
            sites: vec![SiteMap::IDENTITY; n],
        }
    }

    pub fn n(&self) -> usize {
        self.dest.len()
    }

    fn of_generator(n: usize, g: Generator) -> Self {
        let mut action = CliffordAction::identity(n);
        match g {
            Generator::Identity => {}
            Generator::Rx(q) => action.sites[q - 1] = SiteMap::RX,
            Generator::Ry(q) => action.sites[q - 1] = SiteMap::RY,
            Generator::Rz(q) => action.sites[q - 1] = SiteMap::RZ,
            Generator::Swap(a, b) => action.dest.swap(a - 1, b - 1),
        }
        action
    }

    /// Action of `outer` after `inner`.
    pub fn then(inner: &CliffordAction, outer: &CliffordAction) -> CliffordAction {
        let n = inner.n();
        debug_assert_eq!(n, outer.n());
        let dest = inner
            .dest
            .iter()
            .map(|&d| outer.dest[d as usize])
            .collect::<Vec<u8>>();
        let mut sites = vec![SiteMap::IDENTITY; n];
        for (k, &d) in outer.dest.iter().enumerate() {
            let d = d as usize;
            sites[d] = outer.sites[d].after(&inner.sites[k]);
        }
        CliffordAction { dest, sites }
    }

    /// Image of a packed Pauli code of width `n()`.
    #[inline]
    pub fn apply_code(&self, code: u32) -> u32 {
        let n = self.n();
        let mut out = 0u32;
        for (i, &d) in self.dest.iter().enumerate() {
            let bits = (code >> (2 * (n - 1 - i))) & 3;
            let d = d as usize;
            let mapped = self.sites[d].0[bits as usize] as u32;
            out |= mapped << (2 * (n - 1 - d));
        }
        out
    }

    pub fn site_map(&self, q: usize) -> SiteMap {
        self.sites[q]
    }

    pub fn destination(&self, q: usize) -> usize {
        self.dest[q] as usize
    }

    /// Deterministic generator word: per-qubit rotations, then swaps.
    pub fn canonical_word(&self) -> Vec<Generator> {
        let mut word = Vec::new();
        for (q, site) in self.sites.iter().enumerate() {
            word.extend(site.word(q + 1));
        }
        let n = self.n();
        let mut seen = vec![false; n];
        let mut swaps = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut at = self.dest[start] as usize;
            while at != start {
                seen[at] = true;
                cycle.push(at);
                at = self.dest[at] as usize;
            }
            // (a1 a2 ... am) = (a1 am) ... (a1 a3)(a1 a2), rightmost first.
            for &other in cycle[1..].iter().rev() {
                let (a, b) = (start.min(other) + 1, start.max(other) + 1);
                swaps.push(Generator::Swap(a, b));
            }
        }
        word.extend(swaps);
        word
    }
}

/// A readout operation: a generator word together with its normal form.
///
/// Equality and hashing look only at the normal form.
#[derive(Clone, Debug)]
pub struct ReadoutOp {
    word: Vec<Generator>,
    action: CliffordAction,
}

impl ReadoutOp {
    pub fn identity(n: usize) -> Result<Self> {
        check_width(n)?;
        Ok(ReadoutOp {
            word: vec![],
            action: CliffordAction::identity(n),
        })
    }

    /// Builds an operation from a word; the rightmost generator acts first.
    pub fn from_word(n: usize, word: &[Generator]) -> Result<Self> {
        check_width(n)?;
        let mut action = CliffordAction::identity(n);
        for g in word {
            g.validate(n)?;
            action = CliffordAction::then(&CliffordAction::of_generator(n, *g), &action);
        }
        let word = word
            .iter()
            .copied()
            .filter(|g| *g != Generator::Identity)
            .collect();
        Ok(ReadoutOp { word, action })
    }

    pub fn from_action(action: CliffordAction) -> Self {
        ReadoutOp {
            word: action.canonical_word(),
            action,
        }
    }

    /// Parses the `*`-joined generator grammar, e.g. `Rx1*Ry2*SW13` or `I`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::MalformedOp(text.to_string()));
        }
        let word = text
            .split('*')
            .map(|tok| Generator::parse(tok.trim(), n))
            .collect::<Result<Vec<_>>>()?;
        ReadoutOp::from_word(n, &word)
    }

    pub fn n(&self) -> usize {
        self.action.n()
    }

    pub fn word(&self) -> &[Generator] {
        &self.word
    }

    pub fn action(&self) -> &CliffordAction {
        &self.action
    }

    pub fn name(&self) -> String {
        self.to_string()
    }

    pub fn swap_count(&self) -> usize {
        self.word.iter().filter(|g| g.is_swap()).count()
    }

    /// The same action renamed to its canonical word.
    pub fn canonicalized(&self) -> Self {
        ReadoutOp::from_action(self.action.clone())
    }

    /// Image `U p U†` with phase discarded.
    pub fn conjugate(&self, p: &PauliString) -> Result<PauliString> {
        if p.n() != self.n() {
            return Err(Error::WidthMismatch {
                expected: self.n(),
                found: p.n(),
            });
        }
        Ok(PauliString::from_code(self.n(), self.action.apply_code(p.code())))
    }

    /// `outer` applied after `inner`, named by the canonical word.
    pub fn compose(outer: &ReadoutOp, inner: &ReadoutOp) -> Result<Self> {
        if outer.n() != inner.n() {
            return Err(Error::WidthMismatch {
                expected: outer.n(),
                found: inner.n(),
            });
        }
        Ok(ReadoutOp::from_action(CliffordAction::then(
            &inner.action,
            &outer.action,
        )))
    }
}

impl PartialEq for ReadoutOp {
    fn eq(&self, other: &Self) -> bool {
        self.action == other.action
    }
}

impl Eq for ReadoutOp {}

impl Hash for ReadoutOp {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.action.hash(state);
    }
}

impl fmt::Display for ReadoutOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "I");
        }
        for (i, g) in self.word.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Removes operations with equal normal forms, keeping the first position and
/// the lexicographically smallest name among duplicates.
pub fn dedup_by_action(ops: Vec<ReadoutOp>) -> Vec<ReadoutOp> {
    let mut first: HashMap<CliffordAction, usize> = HashMap::new();
    let mut out: Vec<ReadoutOp> = Vec::with_capacity(ops.len());
    for op in ops {
        match first.get(&op.action) {
            Some(&i) => {
                if op.name() < out[i].name() {
                    out[i] = op;
                }
            }
            None => {
                first.insert(op.action.clone(), out.len());
                out.push(op);
            }
        }
    }
    out
}

fn local_word(n: usize, mut index: usize) -> Vec<Generator> {
    let mut choice = vec![0usize; n];
    for slot in choice.iter_mut().rev() {
        *slot = index % 3;
        index /= 3;
    }
    choice
        .iter()
        .enumerate()
        .filter_map(|(q, &c)| match c {
            1 => Some(Generator::Rx(q + 1)),
            2 => Some(Generator::Ry(q + 1)),
            _ => None,
        })
        .collect()
}

/// `{I, Rx, Ry}^n` ordered with qubit 1 most significant and `I < Rx < Ry`.
pub fn canonical_local_set(n: usize) -> Result<Vec<ReadoutOp>> {
    check_width(n)?;
    (0..3usize.pow(n as u32))
        .map(|i| ReadoutOp::from_word(n, &local_word(n, i)))
        .collect()
}

/// All `V * SW(probe, j)` for `V` in `{I, Rx, Ry}^n` and `j = 1..=n`, where
/// `j = probe` contributes `V` alone. Ordered by `j`, then by `V`.
pub fn single_probe_set(n: usize, probe: usize) -> Result<Vec<ReadoutOp>> {
    check_width(n)?;
    if !(1..=n).contains(&probe) {
        return Err(Error::QubitIndex { index: probe, n });
    }
    let mut ops = Vec::with_capacity(n * 3usize.pow(n as u32));
    for j in 1..=n {
        for i in 0..3usize.pow(n as u32) {
            let mut word = local_word(n, i);
            if j != probe {
                word.push(Generator::Swap(probe.min(j), probe.max(j)));
            }
            ops.push(ReadoutOp::from_word(n, &word)?);
        }
    }
    Ok(dedup_by_action(ops))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::enumerate_basis;
    use std::collections::HashSet;

    fn op(s: &str, n: usize) -> ReadoutOp {
        ReadoutOp::parse(s, n).unwrap()
    }

    fn img(o: &ReadoutOp, s: &str) -> String {
        o.conjugate(&s.parse().unwrap()).unwrap().to_string()
    }

    #[test]
    fn single_generator_tables() {
        assert_eq!(img(&op("I", 3), "XYZ"), "XYZ");
        assert_eq!(img(&op("SW12", 2), "XI"), "IX");
        let rx = op("Rx1", 1);
        assert_eq!((img(&rx, "X"), img(&rx, "Y"), img(&rx, "Z")), ("X".into(), "Z".into(), "Y".into()));
        let ry = op("Ry1", 1);
        assert_eq!((img(&ry, "X"), img(&ry, "Y"), img(&ry, "Z")), ("Z".into(), "Y".into(), "X".into()));
        let rz = op("Rz1", 1);
        assert_eq!((img(&rz, "X"), img(&rz, "Y"), img(&rz, "Z")), ("Y".into(), "X".into(), "Z".into()));
    }

    #[test]
    fn composition_order() {
        let rx1 = op("Rx1", 2);
        let sw = op("SW12", 2);
        let c = ReadoutOp::compose(&rx1, &sw).unwrap();
        assert_eq!(img(&c, "YI"), "IY");
        assert_eq!(c.name(), "Rx1*SW12");
        assert_eq!(c, op("Rx1*SW12", 2));
        // swap first, then rotate the qubit that received the letter
        assert_eq!(img(&op("Rx2*SW12", 2), "YI"), "IZ");
        assert_eq!(ReadoutOp::compose(&op("I", 2), &rx1).unwrap(), rx1);
        let twice = ReadoutOp::compose(&rx1, &rx1).unwrap();
        assert_eq!(twice, op("I", 2));
        assert_eq!(twice.name(), "I");
    }

    #[test]
    fn three_cycle_names_round_trip() {
        let o = op("Rx1*Ry1", 1);
        assert_eq!(img(&o, "X"), "Y");
        assert_eq!(o.canonicalized().name(), "Rx1*Ry1");
        let o = op("Ry1*Rx1", 1);
        assert_eq!(img(&o, "X"), "Z");
        let long = op("SW13*SW12", 3);
        assert_eq!(long.canonicalized(), long);
    }

    #[test]
    fn grammar_errors() {
        assert!(matches!(ReadoutOp::parse("Rx0", 2), Err(Error::QubitIndex { .. })));
        assert!(matches!(ReadoutOp::parse("Rx3", 2), Err(Error::QubitIndex { .. })));
        assert!(matches!(ReadoutOp::parse("SW11", 2), Err(Error::DegenerateSwap(1))));
        assert!(ReadoutOp::parse("Rq1", 2).is_err());
        assert!(ReadoutOp::parse("", 2).is_err());
        assert!(ReadoutOp::parse("SW123", 12).is_err());
        assert_eq!(op("SW1_12", 12).name(), "SW1_12");
        assert_eq!(op("II", 2).name(), "I");
        assert_eq!(op("Rx1 * Ry2", 2).name(), "Rx1*Ry2");
    }

    #[test]
    fn candidate_set_sizes() {
        let one: Vec<String> = canonical_local_set(1).unwrap().iter().map(|o| o.name()).collect();
        assert_eq!(one, vec!["I", "Rx1", "Ry1"]);
        assert_eq!(canonical_local_set(2).unwrap().len(), 9);
        let six = canonical_local_set(6).unwrap();
        assert_eq!(six.len(), 729);
        assert_eq!(six.iter().collect::<HashSet<_>>().len(), 729);

        let p1: Vec<String> = single_probe_set(1, 1).unwrap().iter().map(|o| o.name()).collect();
        assert_eq!(p1, vec!["I", "Rx1", "Ry1"]);
        let p2: Vec<String> = single_probe_set(2, 1).unwrap().iter().map(|o| o.name()).collect();
        assert!(p2.contains(&"SW12".to_string()));
        assert!(p2.contains(&"Rx1*SW12".to_string()));
        assert!(single_probe_set(4, 1).unwrap().len() <= 324);
        assert!(single_probe_set(3, 4).is_err());
        assert!(single_probe_set(3, 0).is_err());
    }

    #[test]
    fn dedup_keeps_smallest_name() {
        let ops = vec![op("Rx1*Rx1", 2), op("Ry2", 2), op("I", 2)];
        let out = dedup_by_action(ops);
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].name(), "I");
        assert_eq!(out[1].name(), "Ry2");
    }

    #[test]
    fn generated_ops_are_weight_preserving_bijections() {
        for n in 1..=3 {
            let basis = enumerate_basis(n).unwrap();
            let mut ops = canonical_local_set(n).unwrap();
            for probe in 1..=n {
                ops.extend(single_probe_set(n, probe).unwrap());
            }
            for o in &ops {
                let image: HashSet<_> = basis.iter().map(|p| o.conjugate(p).unwrap()).collect();
                assert_eq!(image.len(), basis.len());
                assert!(basis.iter().all(|p| o.conjugate(p).unwrap().weight() == p.weight()));
                assert!(!image.iter().any(|p| p.is_identity()));
            }
        }
    }
}
