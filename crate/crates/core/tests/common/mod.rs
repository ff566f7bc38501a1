//! Independent reference computations used by the integration tests.
//!
//! Nothing here calls the library's state machinery: loops are counted with a
//! union-find over passage ends, and mod 2 Khovanov homology is computed from
//! dense matrices.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use vknot::{GaussCode, PassKind, Passage, Shape, Sign};

/// A uniformly random code: a random pairing word on `n` crossings, random
/// over/under order and random signs.
pub fn random_code<R: Rng>(rng: &mut R, n: usize, long: bool, flat: bool) -> GaussCode {
    let mut ids: Vec<u32> = (1..=n as u32).flat_map(|c| [c, c]).collect();
    ids.shuffle(rng);
    let first_over: Vec<bool> = (0..n).map(|_| rng.random()).collect();
    let signs: Vec<Sign> = (0..n).map(|_| if rng.random() { Sign::Pos } else { Sign::Neg }).collect();
    let mut seen = vec![false; n + 1];
    let ps = ids
        .into_iter()
        .map(|c| {
            let i = c as usize - 1;
            let kind = if flat {
                PassKind::Flat
            } else if first_over[i] != seen[c as usize] {
                PassKind::Over
            } else {
                PassKind::Under
            };
            seen[c as usize] = true;
            Passage::new(c, kind, signs[i])
        })
        .collect();
    GaussCode::new(if long { Shape::Long } else { Shape::Closed }, ps).unwrap()
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

/// The two passage positions of every crossing, indexed by `id - 1`.
fn occurrences(code: &GaussCode) -> Vec<[usize; 2]> {
    let mut occ = vec![[usize::MAX; 2]; code.crossing_count()];
    for (pos, p) in code.passages().iter().enumerate() {
        let o = &mut occ[p.crossing as usize - 1];
        if o[0] == usize::MAX {
            o[0] = pos;
        } else {
            o[1] = pos;
        }
    }
    occ
}

/// Loop component of every passage end (`2p` entering, `2p + 1` leaving) in
/// the state `mask` (bit `c` set: crossing `c + 1` takes the B smoothing).
/// A long code is closed up first; that never changes the loop count.
pub fn state_components(code: &GaussCode, mask: u64) -> (Vec<usize>, usize) {
    let m = code.len();
    if m == 0 {
        return (Vec::new(), 1);
    }
    let mut dsu = Dsu::new(2 * m);
    for p in 0..m {
        dsu.union(2 * p + 1, 2 * ((p + 1) % m));
    }
    for (c, &[x, y]) in occurrences(code).iter().enumerate() {
        let positive = code.passages()[x].sign == Sign::Pos;
        let b = mask >> c & 1 == 1;
        // A is the oriented smoothing at a positive crossing
        if positive != b {
            dsu.union(2 * x, 2 * y + 1);
            dsu.union(2 * y, 2 * x + 1);
        } else {
            dsu.union(2 * x, 2 * y);
            dsu.union(2 * x + 1, 2 * y + 1);
        }
    }
    let mut index = BTreeMap::new();
    let comp: Vec<usize> = (0..2 * m)
        .map(|e| {
            let r = dsu.find(e);
            let k = index.len();
            *index.entry(r).or_insert(k)
        })
        .collect();
    let count = index.len();
    (comp, count)
}

/// `<K>` as a map from the exponent of `A` to its coefficient.
pub fn bracket(code: &GaussCode) -> BTreeMap<i64, i64> {
    let n = code.crossing_count();
    // d^k expanded: (-A^2 - A^-2)^k
    let mut d_pows: Vec<BTreeMap<i64, i64>> = vec![BTreeMap::from([(0, 1)])];
    for k in 1..=n + 1 {
        let mut next = BTreeMap::new();
        for (&e, &c) in &d_pows[k - 1] {
            *next.entry(e + 2).or_insert(0) -= c;
            *next.entry(e - 2).or_insert(0) -= c;
        }
        d_pows.push(next);
    }
    let mut out = BTreeMap::new();
    for mask in 0u64..1 << n {
        let b = mask.count_ones() as i64;
        let (_, loops) = state_components(code, mask);
        for (&e, &c) in &d_pows[loops - 1] {
            *out.entry(e + n as i64 - 2 * b).or_insert(0) += c;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// A polynomial in `A` alone in the same shape as [`bracket`], after every
/// graphical variable is set to 1.
pub fn a_only(p: &vknot::MultiPoly) -> BTreeMap<i64, i64> {
    let p = p.substitute(&vknot::Substitution::graphical_to_one()).unwrap();
    p.terms().map(|(m, c)| (m.a_exp, i64::try_from(c.clone()).unwrap())).collect()
}

fn rank_gf2(mut rows: Vec<Vec<bool>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col]) else { continue };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] {
                let pivot_row = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(pivot_row) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Normalized mod 2 Khovanov Betti numbers `(i, j) -> dim` of a closed
/// virtual code, from the full cube with dense differential matrices.
pub fn khovanov_mod2(code: &GaussCode) -> BTreeMap<(i64, i64), usize> {
    let n = code.crossing_count();
    let occ = occurrences(code);
    let states: Vec<(Vec<usize>, usize)> = (0u64..1 << n).map(|m| state_components(code, m)).collect();
    // generators: (mask, labels) with label bit set meaning X
    let mut gens: Vec<(u64, u64)> = Vec::new();
    for (mask, (_, loops)) in states.iter().enumerate() {
        for labels in 0u64..1 << loops {
            gens.push((mask as u64, labels));
        }
    }
    let grade = |&(mask, labels): &(u64, u64)| {
        let loops = states[mask as usize].1 as i64;
        let x = labels.count_ones() as i64;
        let i = mask.count_ones() as i64;
        (i, i + (loops - x) - x)
    };
    let index: BTreeMap<(u64, u64), usize> = gens.iter().enumerate().map(|(k, &g)| (g, k)).collect();
    // image of every generator as a set of generator indices
    let mut image: Vec<Vec<usize>> = vec![Vec::new(); gens.len()];
    for (k, &(mask, labels)) in gens.iter().enumerate() {
        let (old, _) = &states[mask as usize];
        for c in 0..n {
            if mask >> c & 1 == 1 {
                continue;
            }
            let target = mask | 1 << c;
            let (new, _) = &states[target as usize];
            let ends = [2 * occ[c][0], 2 * occ[c][0] + 1, 2 * occ[c][1], 2 * occ[c][1] + 1];
            let touched = |comp: &Vec<usize>| {
                let mut v: Vec<usize> = ends.iter().map(|&e| comp[e]).collect();
                v.sort();
                v.dedup();
                v
            };
            let (touched_old, touched_new) = (touched(old), touched(new));
            let label_of = |l: usize| labels >> l & 1 == 1;
            // loops away from the crossing keep their label
            let mut base = 0u64;
            for e in 0..old.len() {
                if !touched_old.contains(&old[e]) && label_of(old[e]) {
                    base |= 1 << new[e];
                }
            }
            let mut outs: Vec<u64> = Vec::new();
            match (touched_old.len(), touched_new.len()) {
                (2, 1) => {
                    let xs = touched_old.iter().filter(|&&l| label_of(l)).count();
                    match xs {
                        0 => outs.push(base),
                        1 => outs.push(base | 1 << touched_new[0]),
                        _ => {}
                    }
                }
                (1, 2) => {
                    let (p, q) = (touched_new[0], touched_new[1]);
                    if label_of(touched_old[0]) {
                        outs.push(base | 1 << p | 1 << q);
                    } else {
                        outs.push(base | 1 << p);
                        outs.push(base | 1 << q);
                    }
                }
                (1, 1) => {}
                other => panic!("impossible re-smoothing {other:?}"),
            }
            for l in outs {
                let t = index[&(target, l)];
                image[k].push(t);
            }
        }
    }
    let mut by_grade: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for (k, g) in gens.iter().enumerate() {
        by_grade.entry(grade(g)).or_default().push(k);
    }
    // rank of d out of bidegree (i, j)
    let rank_out = |i: i64, j: i64| -> usize {
        let (Some(src), Some(dst)) = (by_grade.get(&(i, j)), by_grade.get(&(i + 1, j))) else { return 0 };
        let pos: BTreeMap<usize, usize> = dst.iter().enumerate().map(|(r, &t)| (t, r)).collect();
        let rows: Vec<Vec<bool>> = src
            .iter()
            .map(|&s| {
                let mut row = vec![false; dst.len()];
                for t in &image[s] {
                    let r = pos.get(t).expect("d preserves j");
                    row[*r] ^= true;
                }
                row
            })
            .collect();
        rank_gf2(rows)
    };
    let w = code.writhe().unwrap();
    let n_plus = (n as i64 + w) / 2;
    let n_minus = (n as i64 - w) / 2;
    let mut out = BTreeMap::new();
    for (&(i, j), gs) in &by_grade {
        let dim = gs.len() - rank_out(i, j) - rank_out(i - 1, j);
        if dim > 0 {
            out.insert((i - n_minus, j + n_plus - 2 * n_minus), dim);
        }
    }
    out
}

/// The library's normalized Khovanov table in the oracle's shape.
pub fn library_khovanov(code: &GaussCode) -> BTreeMap<(i64, i64), usize> {
    let t = vknot::homology::khovanov_complex(code).unwrap().normalized_betti();
    t.entries.iter().map(|(&(i, j, _), &d)| ((i, j), d)).collect()
}
