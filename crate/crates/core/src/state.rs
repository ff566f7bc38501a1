//! Smoothing states of a Gauss code as a port graph.
//!
//! Passage `p` has an in-port `2p` and an out-port `2p + 1`. Consecutive
//! passages are joined by arcs `out(p) - in(p + 1)` (cyclically for closed
//! codes; a long code leaves `in(0)` and `out(N - 1)` free). A resolution
//! then pairs the four ports at every crossing:
//!
//! * oriented: `in(o) - out(u)` and `in(u) - out(o)`
//! * disoriented: `in(o) - in(u)` (sink cusp) and `out(o) - out(u)` (source cusp)
//! * through (a graph node): `in(p) - out(p)` for both passages
//!
//! where `o` and `u` are the over and under passages. The A-smoothing of a
//! positive crossing is the oriented one and of a negative crossing the
//! disoriented one.

use rayon::prelude::*;

use crate::gauss::{GaussCode, PassKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Smoothing {
    A,
    B,
}

/// The side of a cusp, read in the direction of travel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    L,
    R,
}

impl Side {
    pub fn flipped(self) -> Side {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Side::L => 'L',
            Side::R => 'R',
        }
    }

    /// Parses a word over `{L, R}`; other characters are rejected.
    pub fn word(s: &str) -> Option<Vec<Side>> {
        s.chars()
            .map(|c| match c {
                'L' => Some(Side::L),
                'R' => Some(Side::R),
                _ => None,
            })
            .collect()
    }

    pub fn word_string(w: &[Side]) -> String {
        w.iter().map(|s| s.letter()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LoopKind {
    Closed,
    LongSegment,
}

/// A state loop with its unreduced cusp word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CuspLoop {
    pub kind: LoopKind,
    pub word: Vec<Side>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Conn {
    Oriented,
    Disoriented,
    Through,
}

/// One loop found by [`Skeleton::trace`].
#[derive(Clone, Debug, Default)]
pub(crate) struct Traced {
    pub long: bool,
    pub word: Vec<Side>,
    /// Through-passages met, as `(passage, forward)`.
    pub nodes: Vec<(usize, bool)>,
}

/// Loops of one resolution together with the loop index of every port.
#[derive(Clone, Debug)]
pub(crate) struct Resolution {
    pub loops: Vec<Traced>,
    pub loop_of: Vec<u32>,
}

/// Crossing data of a virtual code, indexed by `crossing - 1`.
#[derive(Clone, Debug)]
pub(crate) struct Skeleton {
    n_pass: usize,
    long: bool,
    pub over: Vec<usize>,
    pub under: Vec<usize>,
    pub positive: Vec<bool>,
    /// Crossing index of every passage.
    pub crossing_of: Vec<usize>,
}

impl Skeleton {
    pub fn new(code: &GaussCode) -> Skeleton {
        debug_assert!(code.is_virtual());
        let n = code.crossing_count();
        let mut over = vec![0; n];
        let mut under = vec![0; n];
        let mut positive = vec![false; n];
        let mut crossing_of = vec![0; code.len()];
        for (pos, p) in code.passages().iter().enumerate() {
            let c = p.crossing as usize - 1;
            crossing_of[pos] = c;
            positive[c] = p.sign.is_pos();
            if p.kind == PassKind::Over {
                over[c] = pos;
            } else {
                under[c] = pos;
            }
        }
        Skeleton { n_pass: code.len(), long: code.is_long(), over, under, positive, crossing_of }
    }

    pub fn crossings(&self) -> usize {
        self.over.len()
    }

    pub fn ports(&self) -> usize {
        2 * self.n_pass
    }

    fn arc(&self, port: usize) -> Option<usize> {
        let n = self.n_pass;
        let p = port / 2;
        if port % 2 == 1 {
            if p + 1 < n {
                Some(2 * (p + 1))
            } else if self.long {
                None
            } else {
                Some(0)
            }
        } else if p > 0 {
            Some(2 * p - 1)
        } else if self.long {
            None
        } else {
            Some(2 * n - 1)
        }
    }

    /// Connection used by `choice` at crossing `c`.
    pub fn conn(&self, c: usize, choice: Smoothing) -> Conn {
        if (choice == Smoothing::A) == self.positive[c] {
            Conn::Oriented
        } else {
            Conn::Disoriented
        }
    }

    /// Crossing partner of every port.
    pub fn partners(&self, conn: impl Fn(usize) -> Conn) -> Vec<u32> {
        let mut part = vec![0u32; self.ports()];
        for c in 0..self.crossings() {
            let (o, u) = (self.over[c], self.under[c]);
            let pairs = match conn(c) {
                Conn::Oriented => [(2 * o, 2 * u + 1), (2 * u, 2 * o + 1)],
                Conn::Disoriented => [(2 * o, 2 * u), (2 * o + 1, 2 * u + 1)],
                Conn::Through => [(2 * o, 2 * o + 1), (2 * u, 2 * u + 1)],
            };
            for (x, y) in pairs {
                part[x] = y as u32;
                part[y] = x as u32;
            }
        }
        part
    }

    /// Number of loops, counting a long segment as one.
    pub fn count_loops(&self, part: &[u32], seen: &mut Vec<bool>) -> usize {
        seen.clear();
        seen.resize(self.ports(), false);
        let mut count = 0;
        if self.long {
            count += 1;
            if self.n_pass > 0 {
                let mut x = 0;
                loop {
                    let y = part[x] as usize;
                    seen[x] = true;
                    seen[y] = true;
                    match self.arc(y) {
                        Some(z) => x = z,
                        None => break,
                    }
                }
            }
        } else if self.n_pass == 0 {
            return 1;
        }
        for start in 0..self.ports() {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut x = start;
            loop {
                let y = part[x] as usize;
                seen[x] = true;
                seen[y] = true;
                x = self.arc(y).expect("closed loops never reach a free end");
                if x == start {
                    break;
                }
            }
        }
        count
    }

    /// Cusp side when leaving the crossing of passage `from` through a
    /// disoriented connection entered at `from`.
    fn side(&self, from: usize) -> Side {
        let c = self.crossing_of[from];
        if self.positive[c] == (self.over[c] == from) {
            Side::R
        } else {
            Side::L
        }
    }

    fn step(&self, part: &[u32], conn: &impl Fn(usize) -> Conn, x: usize, t: &mut Traced) -> usize {
        let y = part[x] as usize;
        let c = self.crossing_of[x / 2];
        match conn(c) {
            Conn::Disoriented => t.word.push(self.side(x / 2)),
            Conn::Through => t.nodes.push((x / 2, x % 2 == 0)),
            Conn::Oriented => {}
        }
        y
    }

    /// Full trace of a resolution. The long segment, if any, is loop 0 and is
    /// read from the input end; closed loops follow in order of their
    /// smallest port and are read from that port.
    pub fn trace(&self, conn: impl Fn(usize) -> Conn) -> Resolution {
        let part = self.partners(&conn);
        let mut loop_of = vec![u32::MAX; self.ports()];
        let mut loops = Vec::new();
        if self.long {
            let mut t = Traced { long: true, ..Traced::default() };
            if self.n_pass > 0 {
                let mut x = 0;
                loop {
                    let y = self.step(&part, &conn, x, &mut t);
                    loop_of[x] = 0;
                    loop_of[y] = 0;
                    match self.arc(y) {
                        Some(z) => x = z,
                        None => break,
                    }
                }
            }
            loops.push(t);
        } else if self.n_pass == 0 {
            loops.push(Traced::default());
        }
        for start in 0..self.ports() {
            if loop_of[start] != u32::MAX {
                continue;
            }
            let id = loops.len() as u32;
            let mut t = Traced::default();
            let mut x = start;
            loop {
                let y = self.step(&part, &conn, x, &mut t);
                loop_of[x] = id;
                loop_of[y] = id;
                x = self.arc(y).expect("closed loops never reach a free end");
                if x == start {
                    break;
                }
            }
            loops.push(t);
        }
        Resolution { loops, loop_of }
    }

    /// Resolution of a full A/B state given as a bit mask (bit `c` set means
    /// crossing `c + 1` takes the B-smoothing).
    pub fn trace_mask(&self, mask: u64) -> Resolution {
        self.trace(|c| self.conn(c, choice_of(mask, c)))
    }
}

pub(crate) fn choice_of(mask: u64, c: usize) -> Smoothing {
    if mask >> c & 1 == 1 {
        Smoothing::B
    } else {
        Smoothing::A
    }
}

/// Folds `visit` over all `2^n` masks in parallel chunks and merges the
/// per-chunk accumulators with `merge`. Both must be associative and
/// commutative for the result to be independent of the chunking.
pub(crate) fn fold_states<T, I, V, M>(n: usize, init: I, visit: V, merge: M) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    V: Fn(&mut T, u64) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    let chunk_bits = n.min(6);
    let low_bits = n - chunk_bits;
    (0u64..1 << chunk_bits)
        .into_par_iter()
        .map(|hi| {
            let mut acc = init();
            for lo in 0u64..1 << low_bits {
                visit(&mut acc, hi << low_bits | lo);
            }
            acc
        })
        .reduce(&init, &merge)
}
