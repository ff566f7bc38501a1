//! Oriented Gauss codes for closed and long knot diagrams.
//!
//! A code is a sequence of passages. Each crossing is passed twice; a
//! classical crossing is passed once over and once under, a flat crossing
//! twice as `F`. Virtual crossings are not recorded at all. Every passage of
//! a crossing carries the same sign. For flat crossings that sign is the
//! crossing's *chirality*: the classical sign the crossing would have if its
//! first passage were made an under-passage.
//!
//! Codes are normalized on construction: crossing ids are renumbered densely
//! `1..=n` in order of first appearance, so structural equality of two codes
//! is equality of diagrams with the same basepoint.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PassKind {
    Over,
    Under,
    Flat,
}

impl PassKind {
    fn letter(self) -> char {
        match self {
            PassKind::Over => 'O',
            PassKind::Under => 'U',
            PassKind::Flat => 'F',
        }
    }

    /// Over and under exchanged; flat passages are unchanged.
    pub fn swapped(self) -> PassKind {
        match self {
            PassKind::Over => PassKind::Under,
            PassKind::Under => PassKind::Over,
            PassKind::Flat => PassKind::Flat,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn is_pos(self) -> bool {
        self == Sign::Pos
    }

    fn symbol(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
        }
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Passage {
    pub crossing: u32,
    pub kind: PassKind,
    pub sign: Sign,
}

impl Passage {
    pub fn new(crossing: u32, kind: PassKind, sign: Sign) -> Self {
        Passage { crossing, kind, sign }
    }
}

impl fmt::Display for Passage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.kind.letter(), self.crossing, self.sign.symbol())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shape {
    Closed,
    Long,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

/// A validated, normalized Gauss code.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussCode {
    passages: Vec<Passage>,
    shape: Shape,
    /// `occ[c - 1]` holds the two positions of crossing `c`, in code order.
    occ: Vec<[usize; 2]>,
}

impl GaussCode {
    /// Validates `passages` and renumbers crossings by first appearance.
    pub fn new(shape: Shape, passages: Vec<Passage>) -> Result<Self> {
        let mut renumber: Vec<(u32, u32)> = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        let mut firsts: Vec<Passage> = Vec::new();
        let mut out = Vec::with_capacity(passages.len());

        let mut flat = 0usize;
        for p in &passages {
            if p.kind == PassKind::Flat {
                flat += 1;
            }
        }
        if flat != 0 && flat != passages.len() {
            return Err(Error::MixedFlat);
        }

        for p in &passages {
            if p.crossing == 0 {
                return Err(Error::MalformedToken {
                    token: p.to_string(),
                    reason: "crossing ids start at 1".into(),
                });
            }
            let slot = match renumber.iter().position(|&(old, _)| old == p.crossing) {
                Some(i) => i,
                None => {
                    renumber.push((p.crossing, renumber.len() as u32 + 1));
                    counts.push(0);
                    firsts.push(*p);
                    renumber.len() - 1
                }
            };
            counts[slot] += 1;
            if counts[slot] > 2 {
                return Err(Error::CrossingCount { id: p.crossing, count: counts[slot] });
            }
            if counts[slot] == 2 {
                let first = firsts[slot];
                if first.sign != p.sign {
                    return Err(Error::SignMismatch { id: p.crossing });
                }
                if p.kind != PassKind::Flat && first.kind == p.kind {
                    return Err(Error::KindMismatch { id: p.crossing });
                }
            }
            out.push(Passage::new(renumber[slot].1, p.kind, p.sign));
        }
        for (i, &c) in counts.iter().enumerate() {
            if c != 2 {
                let id = renumber[i].0;
                let total = passages.iter().filter(|p| p.crossing == id).count();
                return Err(Error::CrossingCount { id, count: total });
            }
        }

        let mut occ = vec![[usize::MAX; 2]; renumber.len()];
        for (pos, p) in out.iter().enumerate() {
            let slot = &mut occ[p.crossing as usize - 1];
            if slot[0] == usize::MAX {
                slot[0] = pos;
            } else {
                slot[1] = pos;
            }
        }
        Ok(GaussCode { passages: out, shape, occ })
    }

    pub fn empty(shape: Shape) -> Self {
        GaussCode { passages: Vec::new(), shape, occ: Vec::new() }
    }

    pub fn parse(text: &str) -> Result<Self> {
        text.parse()
    }

    /// Parses every non-blank, non-comment line of `text`.
    pub fn parse_many(text: &str) -> Result<Vec<Self>> {
        text.lines()
            .map(strip_comment)
            .filter(|l| !l.trim().is_empty())
            .map(GaussCode::parse)
            .collect()
    }

    pub fn passages(&self) -> &[Passage] {
        &self.passages
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn is_long(&self) -> bool {
        self.shape == Shape::Long
    }

    pub fn len(&self) -> usize {
        self.passages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.passages.is_empty()
    }

    pub fn crossing_count(&self) -> usize {
        self.occ.len()
    }

    pub fn crossings(&self) -> impl Iterator<Item = u32> {
        1..=self.occ.len() as u32
    }

    /// True when every passage is flat (vacuously true for the empty code).
    pub fn is_flat(&self) -> bool {
        self.passages.iter().all(|p| p.kind == PassKind::Flat)
    }

    /// True when no passage is flat (vacuously true for the empty code).
    pub fn is_virtual(&self) -> bool {
        self.passages.iter().all(|p| p.kind != PassKind::Flat)
    }

    pub(crate) fn require_virtual(&self) -> Result<()> {
        if self.is_virtual() {
            Ok(())
        } else {
            Err(Error::FlatCode)
        }
    }

    pub(crate) fn require_flat(&self) -> Result<()> {
        if self.is_flat() {
            Ok(())
        } else {
            Err(Error::NotFlat)
        }
    }

    fn check_id(&self, id: u32) -> Result<usize> {
        if id == 0 || id as usize > self.occ.len() {
            Err(Error::UnknownCrossing { id })
        } else {
            Ok(id as usize - 1)
        }
    }

    /// Both positions of crossing `id`, in code order.
    pub fn occurrences(&self, id: u32) -> Result<[usize; 2]> {
        Ok(self.occ[self.check_id(id)?])
    }

    pub(crate) fn occ(&self, id: u32) -> [usize; 2] {
        self.occ[id as usize - 1]
    }

    pub fn sign(&self, id: u32) -> Result<Sign> {
        Ok(self.passages[self.occurrences(id)?[0]].sign)
    }

    pub(crate) fn sign_of(&self, id: u32) -> Sign {
        self.passages[self.occ(id)[0]].sign
    }

    /// Gaussian parity: odd when an odd number of passages lie strictly between
    /// the two occurrences. For closed codes both arcs give the same answer.
    pub fn parity(&self, id: u32) -> Result<Parity> {
        let [a, b] = self.occurrences(id)?;
        Ok(if (b - a - 1) % 2 == 1 { Parity::Odd } else { Parity::Even })
    }

    pub(crate) fn is_odd(&self, id: u32) -> bool {
        let [a, b] = self.occ(id);
        (b - a) % 2 == 0
    }

    pub fn writhe(&self) -> Result<i64> {
        self.require_virtual()?;
        Ok(self.crossings().map(|c| self.sign_of(c).value()).sum())
    }

    /// Sum of the signs of the odd crossings.
    pub fn odd_writhe(&self) -> Result<i64> {
        self.require_virtual()?;
        Ok(self
            .crossings()
            .filter(|&c| self.is_odd(c))
            .map(|c| self.sign_of(c).value())
            .sum())
    }

    fn rebuild(&self, shape: Shape, passages: Vec<Passage>) -> GaussCode {
        GaussCode::new(shape, passages).expect("structural map preserves validity")
    }

    /// Forgets over/under; the chirality of each crossing is its sign if the
    /// first passage is under and the opposite sign otherwise.
    pub fn flatten(&self) -> GaussCode {
        if self.is_flat() {
            return self.clone();
        }
        let passages = self
            .passages
            .iter()
            .map(|p| {
                let first = self.passages[self.occ(p.crossing)[0]];
                let chi = if first.kind == PassKind::Under { p.sign } else { -p.sign };
                Passage::new(p.crossing, PassKind::Flat, chi)
            })
            .collect();
        self.rebuild(self.shape, passages)
    }

    /// Lifts a flat code by making the first passage of every crossing an
    /// under-passage, with sign equal to the stored chirality.
    pub fn lift_ascending(&self) -> Result<GaussCode> {
        self.require_flat()?;
        let passages = self
            .passages
            .iter()
            .enumerate()
            .map(|(pos, p)| {
                let kind = if self.occ(p.crossing)[0] == pos { PassKind::Under } else { PassKind::Over };
                Passage::new(p.crossing, kind, p.sign)
            })
            .collect();
        Ok(self.rebuild(self.shape, passages))
    }

    /// The ascending map on long flat codes.
    pub fn ascend(&self) -> Result<GaussCode> {
        self.require_flat()?;
        if !self.is_long() {
            return Err(Error::NotLong);
        }
        self.lift_ascending()
    }

    /// Joins the two ends of a long code.
    pub fn close(&self) -> Result<GaussCode> {
        if !self.is_long() {
            return Err(Error::AlreadyClosed);
        }
        Ok(GaussCode { passages: self.passages.clone(), shape: Shape::Closed, occ: self.occ.clone() })
    }

    /// Crossing change at `id`: over and under exchange and the sign flips.
    pub fn switch(&self, id: u32) -> Result<GaussCode> {
        self.require_virtual()?;
        self.check_id(id)?;
        let passages = self
            .passages
            .iter()
            .map(|p| {
                if p.crossing == id {
                    Passage::new(id, p.kind.swapped(), -p.sign)
                } else {
                    *p
                }
            })
            .collect();
        Ok(self.rebuild(self.shape, passages))
    }

    /// Virtualization at `id`.
    ///
    /// Flanking a crossing by two virtual crossings leaves the order of
    /// passages and the over-strand unchanged but reverses the local picture
    /// of the crossing, so on the code it is a sign change alone:
    ///
    /// | original   | virtualized |
    /// |------------|-------------|
    /// | `O c+ / U c+` | `O c- / U c-` |
    /// | `O c- / U c-` | `O c+ / U c+` |
    pub fn virtualize(&self, id: u32) -> Result<GaussCode> {
        self.require_virtual()?;
        self.check_id(id)?;
        let passages = self
            .passages
            .iter()
            .map(|p| if p.crossing == id { Passage::new(id, p.kind, -p.sign) } else { *p })
            .collect();
        Ok(self.rebuild(self.shape, passages))
    }

    /// Mirror image: every crossing switched. On flat codes the chirality of
    /// every crossing is negated.
    pub fn mirror(&self) -> GaussCode {
        let passages = self
            .passages
            .iter()
            .map(|p| Passage::new(p.crossing, p.kind.swapped(), -p.sign))
            .collect();
        self.rebuild(self.shape, passages)
    }

    /// Orientation reversal. Classical signs are unchanged; on flat codes the
    /// first and second passages trade places, which negates chirality.
    pub fn reverse(&self) -> GaussCode {
        let flat = self.is_flat() && !self.is_empty();
        let passages = self
            .passages
            .iter()
            .rev()
            .map(|p| if flat { Passage::new(p.crossing, p.kind, -p.sign) } else { *p })
            .collect();
        self.rebuild(self.shape, passages)
    }

    /// A code of the same shape from new passages.
    pub(crate) fn with_passages(&self, passages: Vec<Passage>) -> Result<GaussCode> {
        GaussCode::new(self.shape, passages)
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_passage(token: &str) -> Result<Passage> {
    let bad = |reason: &str| Error::MalformedToken { token: token.to_string(), reason: reason.to_string() };
    let mut chars = token.chars();
    let kind = match chars.next() {
        Some('O') => PassKind::Over,
        Some('U') => PassKind::Under,
        Some('F') => PassKind::Flat,
        _ => return Err(bad("expected O, U or F")),
    };
    let rest = chars.as_str();
    let (digits, sign) = match rest.char_indices().last() {
        Some((i, '+')) => (&rest[..i], Sign::Pos),
        Some((i, '-')) => (&rest[..i], Sign::Neg),
        _ => return Err(bad("expected trailing + or -")),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return Err(bad("expected a positive crossing id"));
    }
    let id: u32 = digits.parse().map_err(|_| bad("crossing id out of range"))?;
    Ok(Passage::new(id, kind, sign))
}

impl FromStr for GaussCode {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let line = strip_comment(text).trim();
        let (shape, rest) = if let Some(rest) = line.strip_prefix("closed:") {
            (Shape::Closed, rest)
        } else if let Some(rest) = line.strip_prefix("long:") {
            (Shape::Long, rest)
        } else {
            let token = line.split_whitespace().next().unwrap_or("").to_string();
            return Err(Error::MalformedToken { token, reason: "expected `closed:` or `long:`".into() });
        };
        let passages = rest.split_whitespace().map(parse_passage).collect::<Result<Vec<_>>>()?;
        GaussCode::new(shape, passages)
    }
}

impl fmt::Display for GaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.shape {
            Shape::Closed => "closed:",
            Shape::Long => "long:",
        })?;
        for p in &self.passages {
            write!(f, " {p}")?;
        }
        Ok(())
    }
}

impl Serialize for GaussCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const VT: &str = "closed: O1+ O2+ U1+ U2+";
    const TR: &str = "closed: O1+ U2+ O3+ U1+ O2+ U3+";
    const F: &str = "long: F1+ F2+ F1+ F2+";

    fn code(s: &str) -> GaussCode {
        s.parse().unwrap()
    }

    #[test]
    fn parses_examples() {
        assert_eq!(code(VT).crossing_count(), 2);
        let empty = code("closed:");
        assert_eq!(empty.crossing_count(), 0);
        assert!(!empty.is_long());
        let f = code(F);
        assert!(f.is_long() && f.is_flat());
        assert_eq!(f.to_string(), F);
    }

    #[test]
    fn renumbers_by_first_appearance() {
        let c = code("closed:   U7-  O3+ O7- U3+ # trailing comment");
        assert_eq!(c.to_string(), "closed: U1- O2+ O1- U2+");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(code_err("closed: X1+ U1+"), Error::MalformedToken { .. }));
        assert!(matches!(code_err("closed: O1 U1+"), Error::MalformedToken { .. }));
        assert!(matches!(code_err("closed: O01+ U1+"), Error::MalformedToken { .. }));
        assert!(matches!(code_err("open: O1+ U1+"), Error::MalformedToken { .. }));
        assert!(matches!(code_err("closed: O1+"), Error::CrossingCount { id: 1, count: 1 }));
        assert!(matches!(code_err("closed: O1+ U1+ O1+"), Error::CrossingCount { id: 1, count: 3 }));
        assert!(matches!(code_err("closed: O1+ U1+ F2+ F2+"), Error::MixedFlat));
        assert!(matches!(code_err("closed: O1+ U1-"), Error::SignMismatch { id: 1 }));
        assert!(matches!(code_err("closed: O1+ O1+"), Error::KindMismatch { id: 1 }));
    }

    fn code_err(s: &str) -> Error {
        s.parse::<GaussCode>().unwrap_err()
    }

    #[test]
    fn parity_examples() {
        assert_eq!(code(VT).parity(1).unwrap(), Parity::Odd);
        assert_eq!(code(TR).parity(1).unwrap(), Parity::Even);
        assert_eq!(code(F).parity(2).unwrap(), Parity::Odd);
        assert!(matches!(code(VT).parity(3), Err(Error::UnknownCrossing { id: 3 })));
    }

    #[test]
    fn writhes() {
        assert_eq!(code(VT).odd_writhe().unwrap(), 2);
        assert_eq!(code(TR).odd_writhe().unwrap(), 0);
        assert_eq!(code("closed:").odd_writhe().unwrap(), 0);
        assert_eq!(code(TR).writhe().unwrap(), 3);
        assert_eq!(code(VT).writhe().unwrap(), 2);
        assert_eq!(code("closed:").writhe().unwrap(), 0);
        assert_eq!(code(F).odd_writhe(), Err(Error::FlatCode));
        assert_eq!(code(F).writhe(), Err(Error::FlatCode));
    }

    #[test]
    fn flatten_and_ascend() {
        assert_eq!(code(VT).flatten().to_string(), "closed: F1- F2- F1- F2-");
        assert_eq!(code("closed:").flatten(), code("closed:"));
        let af = code(F).ascend().unwrap();
        assert_eq!(af.to_string(), "long: U1+ U2+ O1+ O2+");
        assert_eq!(af.flatten(), code(F));
        assert_eq!(af.odd_writhe().unwrap(), 2);
        let g = code("long: F1- F2- F1- F2-");
        assert_eq!(g.ascend().unwrap().odd_writhe().unwrap(), -2);
        assert_eq!(code("long:").ascend().unwrap(), code("long:"));
        assert_eq!(code(VT).ascend(), Err(Error::NotFlat));
        assert_eq!(code("closed: F1+ F1+").ascend(), Err(Error::NotLong));
    }

    #[test]
    fn close_keeps_parity_and_signs() {
        let af = code(F).ascend().unwrap();
        let closed = af.close().unwrap();
        assert_eq!(closed.shape(), Shape::Closed);
        assert_eq!(closed.odd_writhe().unwrap(), 2);
        assert_eq!(code("long:").close().unwrap(), code("closed:"));
        assert_eq!(code(VT).close(), Err(Error::AlreadyClosed));
    }

    #[test]
    fn switch_virtualize_mirror() {
        let vt = code(VT);
        assert_eq!(vt.switch(1).unwrap().switch(1).unwrap(), vt);
        assert_eq!(code(TR).switch(1).unwrap().writhe().unwrap(), 1);
        assert_eq!(vt.switch(3), Err(Error::UnknownCrossing { id: 3 }));
        assert_eq!(code(F).switch(1), Err(Error::FlatCode));
        assert_eq!(code(F).virtualize(1), Err(Error::FlatCode));
        assert_eq!(code(TR).virtualize(1).unwrap().to_string(), "closed: O1- U2+ O3+ U1- O2+ U3+");
        assert_eq!(vt.mirror().mirror(), vt);
        assert_eq!(vt.mirror().odd_writhe().unwrap(), -2);
    }

    #[test]
    fn reverse_flat_negates_chirality() {
        let f = code(F);
        let g = code("long: F1- F2- F1- F2-");
        assert_eq!(f.reverse(), g);
        assert_eq!(f.reverse().reverse(), f);
        let vt = code(VT);
        assert_eq!(vt.reverse().to_string(), "closed: U1+ U2+ O1+ O2+");
        // reversal commutes with flattening
        assert_eq!(vt.reverse().flatten(), vt.flatten().reverse());
    }
}
