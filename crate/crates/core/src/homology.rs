//! Mod 2 Khovanov homology of virtual codes and the dotted-grading arrow
//! complex.
//!
//! Generators are enhanced states: an A/B choice per crossing (bit set means
//! B) and a label per loop (bit set means `X`). Gradings are `i = n_B`,
//! `j = n_B + #1 - #X` and, for the arrow complex, `g = #dotted X - #dotted 1`
//! where a loop is dotted when its arrow number is odd.
//!
//! The partial differential at an A-site re-smooths it to B. Two loops
//! merging use `1·1 = 1`, `1·X = X`, `X·X = 0`; one loop splitting uses
//! `Δ(1) = 1⊗X + X⊗1`, `Δ(X) = X⊗X`. A single loop going to a single loop,
//! which only happens for virtual codes, gets the zero map.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arrow::arrow_number;
use crate::error::{Error, Result};
use crate::gauss::GaussCode;
use crate::poly::Laurent;
use crate::state::Skeleton;

pub const DEFAULT_MAX_HOMOLOGY_CROSSINGS: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EnhancedState {
    /// Bit `c` set: crossing `c + 1` is B-smoothed.
    pub choices: u64,
    /// Bit `l` set: loop `l` of the resolution is labeled `X`.
    pub labels: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Generator {
    pub state: EnhancedState,
    pub i: i64,
    pub j: i64,
    pub g: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexKind {
    Khovanov,
    /// The differential keeps only components that preserve `g`.
    Arrow,
}

/// A cube complex over GF(2). Generators are ordered by `(choices, labels)`;
/// the differential is stored as one sparse column per generator.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    kind: ComplexKind,
    n_plus: i64,
    n_minus: i64,
    generators: Vec<Generator>,
    columns: Vec<Vec<u32>>,
    dropped: Vec<Vec<u32>>,
}

struct Res {
    loops: usize,
    loop_of: Vec<u32>,
    /// One port on each loop, or `u32::MAX` for the portless empty loop.
    rep: Vec<u32>,
    dotted: u64,
}

fn resolve(sk: &Skeleton, mask: u64) -> Res {
    let r = sk.trace_mask(mask);
    let mut rep = vec![u32::MAX; r.loops.len()];
    for (port, &l) in r.loop_of.iter().enumerate().rev() {
        rep[l as usize] = port as u32;
    }
    let mut dotted = 0u64;
    for (l, t) in r.loops.iter().enumerate() {
        if arrow_number(&t.word) % 2 == 1 {
            dotted |= 1 << l;
        }
    }
    Res { loops: r.loops.len(), loop_of: r.loop_of, rep, dotted }
}

fn grading(res: &Res, mask: u64, labels: u64) -> (i64, i64, i64) {
    let i = mask.count_ones() as i64;
    let xs = labels.count_ones() as i64;
    let j = i + res.loops as i64 - 2 * xs;
    let dx = (labels & res.dotted).count_ones() as i64;
    let d1 = (res.dotted & !labels).count_ones() as i64;
    (i, j, dx - d1)
}

/// Targets of the partial differential at crossing `c` from `(mask, labels)`,
/// as label words of the resolution `mask | 1 << c`.
fn partial(sk: &Skeleton, from: &Res, to: &Res, c: usize, labels: u64) -> Vec<u64> {
    let ports = [2 * sk.over[c], 2 * sk.over[c] + 1, 2 * sk.under[c], 2 * sk.under[c] + 1];
    let mut before: Vec<u32> = ports.iter().map(|&p| from.loop_of[p]).collect();
    before.sort_unstable();
    before.dedup();
    let mut after: Vec<u32> = ports.iter().map(|&p| to.loop_of[p]).collect();
    after.sort_unstable();
    after.dedup();
    let mut base = 0u64;
    for l in 0..from.loops {
        if before.contains(&(l as u32)) {
            continue;
        }
        let image = to.loop_of[from.rep[l] as usize];
        if labels >> l & 1 == 1 {
            base |= 1 << image;
        }
    }
    let x = |l: u32| 1u64 << l;
    match (before.len(), after.len()) {
        (2, 1) => {
            let a = labels >> before[0] & 1;
            let b = labels >> before[1] & 1;
            match a + b {
                0 => vec![base],
                1 => vec![base | x(after[0])],
                _ => vec![],
            }
        }
        (1, 2) => {
            if labels >> before[0] & 1 == 0 {
                vec![base | x(after[1]), base | x(after[0])]
            } else {
                vec![base | x(after[0]) | x(after[1])]
            }
        }
        _ => vec![],
    }
}

fn build(code: &GaussCode, cap: usize, kind: ComplexKind) -> Result<ChainComplex> {
    code.require_virtual()?;
    if code.is_long() {
        return Err(Error::NotClosed);
    }
    let n = code.crossing_count();
    if n > cap || n > 63 {
        return Err(Error::SizeCapExceeded { crossings: n, cap: cap.min(63) });
    }
    let sk = Skeleton::new(code);
    let res: Vec<Res> = (0u64..1 << n).into_par_iter().map(|m| resolve(&sk, m)).collect();
    let mut offset = Vec::with_capacity(res.len() + 1);
    let mut total = 0usize;
    for r in &res {
        offset.push(total);
        total += 1 << r.loops;
    }
    let generators: Vec<Generator> = res
        .par_iter()
        .enumerate()
        .flat_map_iter(|(m, r)| {
            (0u64..1 << r.loops).map(move |labels| {
                let (i, j, g) = grading(r, m as u64, labels);
                Generator { state: EnhancedState { choices: m as u64, labels }, i, j, g }
            })
        })
        .collect();
    let cols: Vec<(Vec<u32>, Vec<u32>)> = generators
        .par_iter()
        .map(|gen| {
            let mask = gen.state.choices;
            let from = &res[mask as usize];
            let mut kept = Vec::new();
            let mut dropped = Vec::new();
            for c in 0..n {
                if mask >> c & 1 == 1 {
                    continue;
                }
                let m2 = mask | 1 << c;
                for labels in partial(&sk, from, &res[m2 as usize], c, gen.state.labels) {
                    let t = (offset[m2 as usize] + labels as usize) as u32;
                    let target = &generators[t as usize];
                    assert_eq!(target.j, gen.j, "differential preserves j");
                    if kind == ComplexKind::Arrow && target.g != gen.g {
                        dropped.push(t);
                    } else {
                        kept.push(t);
                    }
                }
            }
            kept.sort_unstable();
            dropped.sort_unstable();
            (kept, dropped)
        })
        .collect();
    let (columns, dropped) = cols.into_iter().unzip();
    let w = code.writhe()?;
    let c = ChainComplex {
        kind,
        n_plus: (n as i64 + w) / 2,
        n_minus: (n as i64 - w) / 2,
        generators,
        columns,
        dropped,
    };
    c.check_square()?;
    Ok(c)
}

pub fn khovanov_complex(code: &GaussCode) -> Result<ChainComplex> {
    khovanov_complex_capped(code, DEFAULT_MAX_HOMOLOGY_CROSSINGS)
}

pub fn khovanov_complex_capped(code: &GaussCode, cap: usize) -> Result<ChainComplex> {
    build(code, cap, ComplexKind::Khovanov)
}

/// The complex with differential `∂′`, the `g`-preserving part of `∂`.
pub fn arrow_complex(code: &GaussCode) -> Result<ChainComplex> {
    arrow_complex_capped(code, DEFAULT_MAX_HOMOLOGY_CROSSINGS)
}

pub fn arrow_complex_capped(code: &GaussCode, cap: usize) -> Result<ChainComplex> {
    build(code, cap, ComplexKind::Arrow)
}

impl ChainComplex {
    pub fn kind(&self) -> ComplexKind {
        self.kind
    }

    pub fn n_plus(&self) -> i64 {
        self.n_plus
    }

    pub fn n_minus(&self) -> i64 {
        self.n_minus
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Indices of the generators hit by the differential of generator `idx`.
    pub fn differential(&self, idx: usize) -> &[u32] {
        &self.columns[idx]
    }

    /// For the arrow complex, the components of `∂` removed from `∂′`
    /// (that is, `∂″ = ∂ - ∂′`); empty for the Khovanov complex.
    pub fn residual(&self, idx: usize) -> &[u32] {
        &self.dropped[idx]
    }

    /// Verifies `∂∘∂ = 0` over GF(2).
    pub fn check_square(&self) -> Result<()> {
        let bad = (0..self.generators.len()).into_par_iter().find_any(|&idx| {
            let mut acc: HashMap<u32, bool> = HashMap::new();
            for &t in &self.columns[idx] {
                for &u in &self.columns[t as usize] {
                    *acc.entry(u).or_default() ^= true;
                }
            }
            acc.values().any(|&v| v)
        });
        match bad {
            Some(idx) => Err(Error::DifferentialSquare(format!("{:?}", self.generators[idx].state))),
            None => Ok(()),
        }
    }

    /// `sum_gen (-1)^i q^j`.
    pub fn euler_characteristic(&self) -> Laurent {
        let mut out = Laurent::zero();
        for g in &self.generators {
            out.add_term(g.j, BigInt::from(if g.i % 2 == 0 { 1 } else { -1 }));
        }
        out
    }

    fn stratum_key(&self, g: &Generator) -> (i64, i64) {
        match self.kind {
            ComplexKind::Khovanov => (g.j, 0),
            ComplexKind::Arrow => (g.j, g.g),
        }
    }

    /// Dimensions of homology over GF(2), keyed by `(i, j, g)`; `g` is 0 for
    /// the Khovanov complex.
    pub fn betti(&self) -> BettiTable {
        let mut strata: BTreeMap<(i64, i64), BTreeMap<i64, Vec<u32>>> = BTreeMap::new();
        for (idx, g) in self.generators.iter().enumerate() {
            strata.entry(self.stratum_key(g)).or_default().entry(g.i).or_default().push(idx as u32);
        }
        let entries: Vec<((i64, i64, i64), usize)> = strata
            .into_par_iter()
            .flat_map_iter(|((j, g), by_i)| {
                let ranks: BTreeMap<i64, usize> =
                    by_i.iter().map(|(&i, cols)| (i, self.rank(cols, by_i.get(&(i + 1))))).collect();
                by_i.iter()
                    .map(|(&i, cols)| {
                        let below = ranks.get(&(i - 1)).copied().unwrap_or(0);
                        ((i, j, g), cols.len() - ranks[&i] - below)
                    })
                    .filter(|&(_, d)| d > 0)
                    .collect::<Vec<_>>()
            })
            .collect();
        BettiTable { graded_g: self.kind == ComplexKind::Arrow, entries: entries.into_iter().collect() }
    }

    /// Betti table shifted to `(i - n_-, j + n_+ - 2 n_-)`.
    pub fn normalized_betti(&self) -> BettiTable {
        self.betti().shifted(-self.n_minus, self.n_plus - 2 * self.n_minus)
    }

    fn rank(&self, cols: &[u32], targets: Option<&Vec<u32>>) -> usize {
        let Some(targets) = targets else { return 0 };
        let index: HashMap<u32, usize> = targets.iter().enumerate().map(|(k, &t)| (t, k)).collect();
        let words = targets.len().div_ceil(64);
        let mut pivots: HashMap<usize, Vec<u64>> = HashMap::new();
        let mut rank = 0;
        for &c in cols {
            let mut v = vec![0u64; words];
            for t in &self.columns[c as usize] {
                if let Some(&k) = index.get(t) {
                    v[k / 64] ^= 1 << (k % 64);
                }
            }
            loop {
                let Some(lead) = v.iter().enumerate().rev().find(|(_, &w)| w != 0).map(|(k, &w)| k * 64 + 63 - w.leading_zeros() as usize) else {
                    break;
                };
                match pivots.get(&lead) {
                    Some(p) => {
                        for (a, b) in v.iter_mut().zip(p) {
                            *a ^= b;
                        }
                    }
                    None => {
                        pivots.insert(lead, v);
                        rank += 1;
                        break;
                    }
                }
            }
        }
        rank
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BettiTable {
    pub graded_g: bool,
    pub entries: BTreeMap<(i64, i64, i64), usize>,
}

impl BettiTable {
    pub fn get(&self, i: i64, j: i64, g: i64) -> usize {
        self.entries.get(&(i, j, g)).copied().unwrap_or(0)
    }

    pub fn total_rank(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn shifted(&self, di: i64, dj: i64) -> BettiTable {
        BettiTable {
            graded_g: self.graded_g,
            entries: self.entries.iter().map(|(&(i, j, g), &d)| ((i + di, j + dj, g), d)).collect(),
        }
    }

    /// `sum (-1)^i dim q^j`.
    pub fn euler_characteristic(&self) -> Laurent {
        let mut out = Laurent::zero();
        for (&(i, j, _), &d) in &self.entries {
            out.add_term(j, BigInt::from(d as i64 * if i % 2 == 0 { 1 } else { -1 }));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|(&(i, j, g), &dim)| {
                    if self.graded_g {
                        json!({ "i": i, "j": j, "g": g, "dim": dim })
                    } else {
                        json!({ "i": i, "j": j, "dim": dim })
                    }
                })
                .collect(),
        )
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "(zero)");
        }
        let mut first = true;
        for (&(i, j, g), &d) in &self.entries {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if self.graded_g {
                write!(f, "({i},{j},{g}):{d}")?;
            } else {
                write!(f, "({i},{j}):{d}")?;
            }
        }
        Ok(())
    }
}

/// The translation `(di, dj)` taking `t1` onto `t2` with `g` unchanged, if
/// one exists.
pub fn betti_equal_up_to_shift(t1: &BettiTable, t2: &BettiTable) -> Option<(i64, i64)> {
    if t1.entries.len() != t2.entries.len() {
        return None;
    }
    let (Some((&(i1, j1, g1), _)), Some((&(i2, j2, g2), _))) = (t1.entries.iter().next(), t2.entries.iter().next())
    else {
        return Some((0, 0));
    };
    if g1 != g2 {
        return None;
    }
    let (di, dj) = (i2 - i1, j2 - j1);
    (t1.shifted(di, dj).entries == t2.entries).then_some((di, dj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::q_bracket;

    fn code(s: &str) -> GaussCode {
        s.parse().unwrap()
    }

    #[test]
    fn unknot() {
        let c = khovanov_complex(&code("closed:")).unwrap();
        assert_eq!(c.betti().to_string(), "(0,-1):1 (0,1):1");
        let kink = khovanov_complex(&code("closed: O1+ U1+")).unwrap();
        let shift = betti_equal_up_to_shift(&c.betti(), &kink.betti()).unwrap();
        assert_eq!(kink.normalized_betti(), c.betti(), "shift {shift:?}");
    }

    #[test]
    fn euler_characteristic_is_q_bracket() {
        for s in ["closed: O1+ O2+ U1+ U2+", "closed: O1+ U2+ O3+ U1+ O2+ U3+", "closed: O1- O2+ U3- U2+ O3- O4+ U1- U4+"] {
            let k = code(s);
            let c = khovanov_complex(&k).unwrap();
            assert_eq!(c.euler_characteristic(), q_bracket(&k).unwrap());
            assert_eq!(c.betti().euler_characteristic(), q_bracket(&k).unwrap());
            let a = arrow_complex(&k).unwrap();
            assert_eq!(a.betti().euler_characteristic(), q_bracket(&k).unwrap());
        }
    }

    #[test]
    fn trefoil_mod_two() {
        let c = khovanov_complex(&code("closed: O1+ U2+ O3+ U1+ O2+ U3+")).unwrap();
        assert_eq!(c.normalized_betti().to_string(), "(0,1):1 (0,3):1 (2,5):1 (2,7):1 (3,7):1 (3,9):1");
    }

    #[test]
    fn virtual_trefoil_has_dotted_generators() {
        let a = arrow_complex(&code("closed: O1+ O2+ U1+ U2+")).unwrap();
        assert!(a.generators().iter().any(|g| g.g != 0));
        let classical = arrow_complex(&code("closed: O1+ U2+ O3+ U1+ O2+ U3+")).unwrap();
        assert!(classical.generators().iter().all(|g| g.g == 0));
    }

    #[test]
    fn caps_and_shapes() {
        let tr = code("closed: O1+ U2+ O3+ U1+ O2+ U3+");
        assert!(matches!(khovanov_complex_capped(&tr, 2), Err(Error::SizeCapExceeded { .. })));
        assert_eq!(khovanov_complex(&code("long: U1+ O1+")).unwrap_err(), Error::NotClosed);
        assert_eq!(khovanov_complex(&code("closed: F1+ F1+")).unwrap_err(), Error::FlatCode);
    }

    #[test]
    fn shift_matching() {
        let t = khovanov_complex(&code("closed: O1+ O2+ U1+ U2+")).unwrap().betti();
        assert_eq!(betti_equal_up_to_shift(&t, &t), Some((0, 0)));
        assert_eq!(betti_equal_up_to_shift(&t, &t.shifted(1, -2)), Some((1, -2)));
        assert_eq!(betti_equal_up_to_shift(&t, &BettiTable::default()), None);
    }
}
