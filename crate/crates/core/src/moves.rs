//! Reidemeister moves on Gauss codes and a seeded scrambler.
//!
//! Detour moves do not change a Gauss code, so only the three classical move
//! types are needed. A *segment* is a pair of consecutive passages (wrapping
//! around for closed codes); a *gap* `g` is the insertion point before
//! position `g`.
//!
//! * R1: a crossing whose two passages are consecutive, any kind order and
//!   any sign.
//! * R2: crossings `x`, `y` filling two segments, one strand over both, with
//!   opposite signs; the second segment may list them in either order.
//! * R3: three crossings filling three segments pairwise, matching one of the
//!   configurations of three oriented lines at distinct heights forming a
//!   triangle. The move reverses the order inside each segment.
//!
//! Flat codes use the same moves through a lift: a flat site is valid when
//! some choice of over/under at its crossings makes it a valid classical site.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gauss::{GaussCode, PassKind, Passage, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    /// Inserts a kink at `gap`: the first new passage is over when
    /// `first_over`, and the crossing gets `sign`.
    R1Add { gap: usize, first_over: bool, sign: Sign },
    R1Remove { crossing: u32 },
    /// Inserts two crossings `x` (with `sign`) and `y` (with the opposite
    /// sign): `x y` at `gap_a` with kind over when `a_over`, and `x y`
    /// (or `y x` when `reversed`) at `gap_b` with the other kind. When the
    /// gaps coincide the first pair comes first.
    R2Add { gap_a: usize, gap_b: usize, reversed: bool, a_over: bool, sign: Sign },
    R2Remove { first: u32, second: u32 },
    /// Start positions of the three segments, ascending.
    R3 { segments: [usize; 3] },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |s: &Sign| if s.is_pos() { '+' } else { '-' };
        match self {
            Move::R1Add { gap, first_over, sign } => {
                write!(f, "R1Add(gap={gap}, first={}, sign={})", if *first_over { 'O' } else { 'U' }, s(sign))
            }
            Move::R1Remove { crossing } => write!(f, "R1Remove({crossing})"),
            Move::R2Add { gap_a, gap_b, reversed, a_over, sign } => write!(
                f,
                "R2Add(gaps={gap_a},{gap_b}, {}, a={}, sign={})",
                if *reversed { "reversed" } else { "parallel" },
                if *a_over { 'O' } else { 'U' },
                s(sign)
            ),
            Move::R2Remove { first, second } => write!(f, "R2Remove({first},{second})"),
            Move::R3 { segments } => write!(f, "R3({},{},{})", segments[0], segments[1], segments[2]),
        }
    }
}

fn next(code: &GaussCode, p: usize) -> Option<usize> {
    let n = code.len();
    if p + 1 < n {
        Some(p + 1)
    } else if !code.is_long() && n >= 2 {
        Some(0)
    } else {
        None
    }
}

fn adjacent(code: &GaussCode, a: usize, b: usize) -> bool {
    next(code, a) == Some(b) || next(code, b) == Some(a)
}

fn segment_starts(code: &GaussCode) -> Vec<usize> {
    (0..code.len()).filter(|&p| next(code, p).is_some()).collect()
}

fn gap_count(code: &GaussCode) -> usize {
    if code.is_long() {
        code.len() + 1
    } else {
        code.len().max(1)
    }
}

/// Flat chirality seen from position `pos`: the stored chirality at the first
/// passage, its negative at the second.
fn flat_bit(code: &GaussCode, pos: usize) -> i64 {
    let c = code.passages()[pos].crossing;
    let chi = code.sign_of(c).value();
    if code.occ(c)[0] == pos {
        chi
    } else {
        -chi
    }
}

/// Ascending lift of a flat code with the over passage of some crossings
/// placed at chosen positions.
fn relift(code: &GaussCode, overs: &[usize]) -> GaussCode {
    let mut ps: Vec<Passage> = code.lift_ascending().expect("flat code").passages().to_vec();
    for &pos in overs {
        let c = code.passages()[pos].crossing;
        let [a, b] = code.occ(c);
        let other = if a == pos { b } else { a };
        let sign = if flat_bit(code, other) > 0 { Sign::Pos } else { Sign::Neg };
        ps[pos] = Passage::new(c, PassKind::Over, sign);
        ps[other] = Passage::new(c, PassKind::Under, sign);
    }
    code.with_passages(ps).expect("relabeling keeps a valid code")
}

/// A pattern of three segments: for each segment the other segment met at
/// each of its two passages and whether the passage is over, then the signs
/// of the crossings shared by segments (0,1), (0,2), (1,2).
type R3Pattern = ([[(u8, bool); 2]; 3], [bool; 3]);

fn r3_table() -> &'static HashSet<R3Pattern> {
    static TABLE: OnceLock<HashSet<R3Pattern>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // Lines y = 0, x = 0, x + y = 1 meet at (0,0), (1,0), (0,1).
        let base_dir = [(1i64, 0i64), (0, 1), (1, -1)];
        // Parameter of the crossing of line i with line j along line i.
        let param = |i: usize, j: usize| -> i64 {
            match (i, j) {
                (0, 1) => 0,
                (0, 2) => 1,
                (1, 0) => 0,
                (1, 2) => 1,
                (2, 1) => 0,
                (2, 0) => 1,
                _ => unreachable!(),
            }
        };
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut table = HashSet::new();
        for dirs in 0..8 {
            let sigma = |i: usize| if dirs >> i & 1 == 1 { -1 } else { 1 };
            let dir = |i: usize| (base_dir[i].0 * sigma(i), base_dir[i].1 * sigma(i));
            for height in perms {
                for label in perms {
                    let mut seqs = [[(0u8, false); 2]; 3];
                    for i in 0..3 {
                        let mut others: Vec<usize> = (0..3).filter(|&j| j != i).collect();
                        others.sort_by_key(|&j| param(i, j) * sigma(i));
                        for (k, &j) in others.iter().enumerate() {
                            seqs[label[i]][k] = (label[j] as u8, height[i] > height[j]);
                        }
                    }
                    let mut signs = [false; 3];
                    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                        let (o, u) = if height[i] > height[j] { (i, j) } else { (j, i) };
                        let (a, b) = (dir(o), dir(u));
                        let positive = a.0 * b.1 - a.1 * b.0 > 0;
                        let (li, lj) = (label[i].min(label[j]), label[i].max(label[j]));
                        let slot = match (li, lj) {
                            (0, 1) => 0,
                            (0, 2) => 1,
                            _ => 2,
                        };
                        signs[slot] = positive;
                    }
                    table.insert((seqs, signs));
                }
            }
        }
        table
    })
}

/// Segment triples `[s0, s1, s2]` (start positions) that share three
/// crossings pairwise, before any validity check.
fn r3_candidates(code: &GaussCode) -> Vec<[usize; 3]> {
    let ps = code.passages();
    let segs = segment_starts(code);
    let seg_of = |pos: usize| -> Vec<usize> {
        let mut v = Vec::new();
        if next(code, pos).is_some() {
            v.push(pos);
        }
        if let Some(prev) = segs.iter().copied().find(|&s| next(code, s) == Some(pos)) {
            v.push(prev);
        }
        v
    };
    let mut out = BTreeSet::new();
    for &s0 in &segs {
        let q0 = next(code, s0).unwrap();
        let (x, y) = (ps[s0].crossing, ps[q0].crossing);
        if x == y {
            continue;
        }
        let other = |c: u32, pos: usize| {
            let [a, b] = code.occ(c);
            if a == pos {
                b
            } else {
                a
            }
        };
        let y2 = other(y, q0);
        let x2 = other(x, s0);
        for s1 in seg_of(y2) {
            let q1 = next(code, s1).unwrap();
            let z_pos = if s1 == y2 { q1 } else { s1 };
            let z = ps[z_pos].crossing;
            if z == x || z == y {
                continue;
            }
            let z2 = other(z, z_pos);
            for s2 in seg_of(x2) {
                let q2 = next(code, s2).unwrap();
                let partner = if s2 == x2 { q2 } else { s2 };
                if partner != z2 {
                    continue;
                }
                let mut used = vec![s0, q0, s1, q1, s2, q2];
                used.sort_unstable();
                used.dedup();
                if used.len() != 6 {
                    continue;
                }
                let mut t = [s0, s1, s2];
                t.sort_unstable();
                out.insert(t);
            }
        }
    }
    out.into_iter().collect()
}

/// Pattern of a candidate site given the over flag and sign of each position.
fn r3_pattern(code: &GaussCode, segs: [usize; 3], info: impl Fn(usize) -> (bool, bool)) -> Option<R3Pattern> {
    let ps = code.passages();
    let positions: Vec<[usize; 2]> = segs.iter().map(|&s| [s, next(code, s).unwrap()]).collect();
    let seg_containing = |c: u32, not: usize| -> Option<usize> {
        (0..3).find(|&i| i != not && positions[i].iter().any(|&p| ps[p].crossing == c))
    };
    let mut seqs = [[(0u8, false); 2]; 3];
    let mut signs = [None; 3];
    for i in 0..3 {
        for k in 0..2 {
            let pos = positions[i][k];
            let j = seg_containing(ps[pos].crossing, i)?;
            let (over, positive) = info(pos);
            seqs[i][k] = (j as u8, over);
            let slot = match (i.min(j), i.max(j)) {
                (0, 1) => 0,
                (0, 2) => 1,
                _ => 2,
            };
            signs[slot] = Some(positive);
        }
    }
    Some((seqs, [signs[0]?, signs[1]?, signs[2]?]))
}

fn r3_valid_virtual(code: &GaussCode, segs: [usize; 3]) -> bool {
    let ps = code.passages();
    r3_pattern(code, segs, |p| (ps[p].kind == PassKind::Over, ps[p].sign.is_pos()))
        .is_some_and(|pat| r3_table().contains(&pat))
}

/// A lift of a flat code in which `segs` is a valid classical R3 site.
fn r3_flat_lift(code: &GaussCode, segs: [usize; 3]) -> Option<GaussCode> {
    let ps = code.passages();
    let mut crossings: Vec<u32> = segs
        .iter()
        .flat_map(|&s| [ps[s].crossing, ps[next(code, s).unwrap()].crossing])
        .collect();
    crossings.sort_unstable();
    crossings.dedup();
    for choice in 0..8u32 {
        let overs: Vec<usize> = crossings.iter().enumerate().map(|(i, &c)| code.occ(c)[(choice >> i & 1) as usize]).collect();
        let lift = relift(code, &overs);
        if r3_valid_virtual(&lift, segs) {
            return Some(lift);
        }
    }
    None
}

fn is_flat_flavor(code: &GaussCode) -> bool {
    !code.is_empty() && code.is_flat()
}

fn r1_removals(code: &GaussCode) -> Vec<Move> {
    code.crossings()
        .filter(|&c| {
            let [a, b] = code.occ(c);
            adjacent(code, a, b)
        })
        .map(|crossing| Move::R1Remove { crossing })
        .collect()
}

fn r2_removal_valid(code: &GaussCode, x: u32, y: u32, flat: bool) -> bool {
    if x == y {
        return false;
    }
    let ps = code.passages();
    let [x1, x2] = code.occ(x);
    let [y1, y2] = code.occ(y);
    for (a, b, c, d) in [(x1, y1, x2, y2), (x1, y2, x2, y1)] {
        if !(adjacent(code, a, b) && adjacent(code, c, d)) {
            continue;
        }
        let ok = if flat {
            flat_bit(code, a) != flat_bit(code, b)
        } else {
            ps[a].kind == ps[b].kind && ps[a].sign != ps[b].sign
        };
        if ok {
            return true;
        }
    }
    false
}

fn r2_removals(code: &GaussCode, flat: bool) -> Vec<Move> {
    let ps = code.passages();
    let mut out = BTreeSet::new();
    for s in segment_starts(code) {
        let (x, y) = (ps[s].crossing, ps[next(code, s).unwrap()].crossing);
        if r2_removal_valid(code, x, y, flat) {
            out.insert(Move::R2Remove { first: x.min(y), second: x.max(y) });
        }
    }
    out.into_iter().collect()
}

fn r3_moves(code: &GaussCode, flat: bool) -> Vec<Move> {
    r3_candidates(code)
        .into_iter()
        .filter(|&segs| if flat { r3_flat_lift(code, segs).is_some() } else { r3_valid_virtual(code, segs) })
        .map(|segments| Move::R3 { segments })
        .collect()
}

/// Moves that remove crossings or rearrange them (R1/R2 removals and R3).
pub fn enumerate_reductions(code: &GaussCode) -> Vec<Move> {
    let flat = is_flat_flavor(code);
    let mut out = r1_removals(code);
    out.extend(r2_removals(code, flat));
    out.extend(r3_moves(code, flat));
    out
}

/// Every move applicable to `code`, including the full R1Add and R2Add
/// families over all gaps. For flat codes redundant add parameters are
/// omitted.
pub fn enumerate_moves(code: &GaussCode) -> Vec<Move> {
    let flat = is_flat_flavor(code);
    let mut out = enumerate_reductions(code);
    let gaps = gap_count(code);
    let bools: &[bool] = if flat { &[false] } else { &[false, true] };
    for gap in 0..gaps {
        for &first_over in bools {
            for sign in [Sign::Pos, Sign::Neg] {
                out.push(Move::R1Add { gap, first_over, sign });
            }
        }
    }
    for gap_a in 0..gaps {
        for gap_b in 0..gaps {
            for reversed in [false, true] {
                for &a_over in bools {
                    for sign in [Sign::Pos, Sign::Neg] {
                        out.push(Move::R2Add { gap_a, gap_b, reversed, a_over: a_over || flat, sign });
                    }
                }
            }
        }
    }
    out
}

fn insert_at(base: &[Passage], inserts: &[(usize, Vec<Passage>)]) -> Vec<Passage> {
    let mut out = Vec::with_capacity(base.len() + 4);
    for g in 0..=base.len() {
        for (gap, ps) in inserts {
            if *gap == g {
                out.extend_from_slice(ps);
            }
        }
        if g < base.len() {
            out.push(base[g]);
        }
    }
    out
}

fn apply_add(code: &GaussCode, mv: Move) -> Result<GaussCode> {
    let limit = if code.is_long() || code.is_empty() { code.len() } else { code.len() - 1 };
    let check = |g: usize| {
        if g > limit && !(g == code.len()) {
            Err(Error::InvalidSite(format!("gap {g} out of range")))
        } else {
            Ok(())
        }
    };
    let x = code.crossing_count() as u32 + 1;
    let kind = |over: bool| if over { PassKind::Over } else { PassKind::Under };
    let ps = match mv {
        Move::R1Add { gap, first_over, sign } => {
            check(gap)?;
            let pair = vec![Passage::new(x, kind(first_over), sign), Passage::new(x, kind(!first_over), sign)];
            insert_at(code.passages(), &[(gap, pair)])
        }
        Move::R2Add { gap_a, gap_b, reversed, a_over, sign } => {
            check(gap_a)?;
            check(gap_b)?;
            let y = x + 1;
            let a = vec![Passage::new(x, kind(a_over), sign), Passage::new(y, kind(a_over), -sign)];
            let mut b = vec![Passage::new(x, kind(!a_over), sign), Passage::new(y, kind(!a_over), -sign)];
            if reversed {
                b.reverse();
            }
            insert_at(code.passages(), &[(gap_a, a), (gap_b, b)])
        }
        _ => unreachable!(),
    };
    code.with_passages(ps)
}

fn remove_crossings(code: &GaussCode, cs: &[u32]) -> Result<GaussCode> {
    let ps = code.passages().iter().filter(|p| !cs.contains(&p.crossing)).copied().collect();
    code.with_passages(ps)
}

fn swap_segments(code: &GaussCode, segs: [usize; 3]) -> Result<GaussCode> {
    let mut ps = code.passages().to_vec();
    for s in segs {
        let t = next(code, s).expect("segment start");
        ps.swap(s, t);
    }
    code.with_passages(ps)
}

fn check_crossing(code: &GaussCode, c: u32) -> Result<()> {
    code.occurrences(c).map(|_| ()).map_err(|_| Error::InvalidSite(format!("no crossing {c}")))
}

/// Applies `mv`. Empty codes are treated as virtual; see [`apply_flat`].
pub fn apply(code: &GaussCode, mv: Move) -> Result<GaussCode> {
    if is_flat_flavor(code) {
        apply_flat(code, mv)
    } else {
        apply_virtual(code, mv)
    }
}

fn apply_virtual(code: &GaussCode, mv: Move) -> Result<GaussCode> {
    match mv {
        Move::R1Add { .. } | Move::R2Add { .. } => apply_add(code, mv),
        Move::R1Remove { crossing } => {
            check_crossing(code, crossing)?;
            let [a, b] = code.occ(crossing);
            if !adjacent(code, a, b) {
                return Err(Error::InvalidSite(format!("crossing {crossing} is not a kink")));
            }
            remove_crossings(code, &[crossing])
        }
        Move::R2Remove { first, second } => {
            check_crossing(code, first)?;
            check_crossing(code, second)?;
            if !r2_removal_valid(code, first, second, false) {
                return Err(Error::InvalidSite(format!("crossings {first},{second} do not form a bigon")));
            }
            remove_crossings(code, &[first, second])
        }
        Move::R3 { segments } => {
            if !r3_candidates(code).contains(&segments) || !r3_valid_virtual(code, segments) {
                return Err(Error::InvalidSite(format!("{mv} is not a third-move site")));
            }
            swap_segments(code, segments)
        }
    }
}

/// Applies `mv` to a flat code (including the empty flat code).
pub fn apply_flat(code: &GaussCode, mv: Move) -> Result<GaussCode> {
    code.require_flat()?;
    match mv {
        Move::R1Add { .. } | Move::R2Add { .. } => Ok(apply_add(&code.lift_ascending()?, mv)?.flatten()),
        Move::R1Remove { crossing } => {
            check_crossing(code, crossing)?;
            let [a, b] = code.occ(crossing);
            if !adjacent(code, a, b) {
                return Err(Error::InvalidSite(format!("crossing {crossing} is not a kink")));
            }
            remove_crossings(code, &[crossing])
        }
        Move::R2Remove { first, second } => {
            check_crossing(code, first)?;
            check_crossing(code, second)?;
            if !r2_removal_valid(code, first, second, true) {
                return Err(Error::InvalidSite(format!("crossings {first},{second} do not form a bigon")));
            }
            remove_crossings(code, &[first, second])
        }
        Move::R3 { segments } => {
            if !r3_candidates(code).contains(&segments) {
                return Err(Error::InvalidSite(format!("{mv} is not a third-move site")));
            }
            let lift = r3_flat_lift(code, segments)
                .ok_or_else(|| Error::InvalidSite(format!("{mv} is not a third-move site")))?;
            Ok(swap_segments(&lift, segments)?.flatten())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScrambleConfig {
    /// Adds are not proposed once they would exceed this many crossings.
    pub max_crossings: usize,
    /// Flavor used when the input is the empty code.
    pub flat: bool,
}

impl Default for ScrambleConfig {
    fn default() -> Self {
        ScrambleConfig { max_crossings: 24, flat: false }
    }
}

/// A scrambled code together with the moves that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scrambled {
    pub code: GaussCode,
    pub trace: Vec<Move>,
}

/// Deterministic random walk of `steps` moves driven by ChaCha8 seeded with
/// `seed`. Each step picks a move type by weight among those available
/// (R3: 3, R2 removal: 3, R1 removal: 2, R2 add: 1, R1 add: 1) and then a
/// uniform site or uniform add parameters.
pub fn scramble(code: &GaussCode, steps: usize, seed: u64) -> GaussCode {
    scramble_with(code, steps, seed, &ScrambleConfig::default()).code
}

pub fn scramble_with(code: &GaussCode, steps: usize, seed: u64, config: &ScrambleConfig) -> Scrambled {
    let flat = if code.is_empty() { config.flat } else { code.is_flat() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = code.clone();
    let mut trace = Vec::with_capacity(steps);
    let bool_of = |rng: &mut ChaCha8Rng| rng.random_range(0..2) == 1;
    for _ in 0..steps {
        let n = cur.crossing_count();
        let r1 = r1_removals(&cur);
        let r2 = r2_removals(&cur, flat);
        let r3 = r3_moves(&cur, flat);
        let mut weights = [0u32; 5];
        if !r3.is_empty() {
            weights[0] = 3;
        }
        if !r2.is_empty() {
            weights[1] = 3;
        }
        if !r1.is_empty() {
            weights[2] = 2;
        }
        if n + 2 <= config.max_crossings {
            weights[3] = 1;
        }
        if n < config.max_crossings {
            weights[4] = 1;
        }
        let total: u32 = weights.iter().sum();
        if total == 0 {
            continue;
        }
        let mut pick = rng.random_range(0..total);
        let mut kind = 0;
        while pick >= weights[kind] {
            pick -= weights[kind];
            kind += 1;
        }
        let gaps = gap_count(&cur);
        let sign_of = |b: bool| if b { Sign::Pos } else { Sign::Neg };
        let mv = match kind {
            0 => r3[rng.random_range(0..r3.len())],
            1 => r2[rng.random_range(0..r2.len())],
            2 => r1[rng.random_range(0..r1.len())],
            3 => Move::R2Add {
                gap_a: rng.random_range(0..gaps),
                gap_b: rng.random_range(0..gaps),
                reversed: bool_of(&mut rng),
                a_over: bool_of(&mut rng) || flat,
                sign: sign_of(bool_of(&mut rng)),
            },
            _ => Move::R1Add {
                gap: rng.random_range(0..gaps),
                first_over: bool_of(&mut rng) && !flat,
                sign: sign_of(bool_of(&mut rng)),
            },
        };
        let applied = if flat { apply_flat(&cur, mv) } else { apply_virtual(&cur, mv) };
        cur = applied.expect("sampled moves are valid");
        trace.push(mv);
    }
    Scrambled { code: cur, trace }
}

/// Replays a move trace, as produced by [`scramble_with`].
pub fn replay(code: &GaussCode, trace: &[Move], flat: bool) -> Result<GaussCode> {
    let mut cur = code.clone();
    for &mv in trace {
        cur = if flat { apply_flat(&cur, mv)? } else { apply_virtual(&cur, mv)? };
    }
    Ok(cur)
}
