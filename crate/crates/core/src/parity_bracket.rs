//! The parity bracket.
//!
//! Even crossings are smoothed as in the bracket; odd crossings become graph
//! nodes that both strands pass straight through. A state is then a set of
//! plain loops plus a nodal graph: circuits listing the node passages met.
//!
//! Every node passage carries a bit: the sign the node would have, with both
//! strands oriented by their circuits' traversal, if this passage were the
//! under-strand. The two passages of a node always carry opposite bits, and
//! reversing a circuit flips both bits of each node it meets exactly once.
//!
//! Graphs are reduced by nodal second Reidemeister moves: nodes `x`, `y`
//! that are consecutive on two different strands, with opposite bits along
//! either strand, are removed together. In free mode bits are forgotten and
//! every such bigon cancels.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::bracket::{check_cap, DEFAULT_MAX_CROSSINGS};
use crate::error::{Error, Result};
use crate::gauss::GaussCode;
use crate::poly::{MultiPoly, Substitution};
use crate::state::{fold_states, Conn, Skeleton, Smoothing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GraphMode {
    Oriented,
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodePass {
    pub node: u32,
    /// `+1` or `-1`; always 0 in free mode.
    pub bit: i8,
}

/// Circuits of node passages. Equality is structural; use [`canonicalize`]
/// before comparing graphs up to relabeling, rotation and reversal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodalGraph {
    circuits: Vec<Vec<NodePass>>,
    mode: GraphMode,
}

/// Result of [`canonicalize`]: the canonical irreducible graph and the
/// number of circuits that lost all their nodes and became plain loops.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Reduced {
    pub graph: NodalGraph,
    pub loops: u32,
}

impl NodalGraph {
    /// Validates that every node occurs exactly twice and, in oriented mode,
    /// that its two passages carry opposite nonzero bits.
    pub fn new(circuits: Vec<Vec<NodePass>>, mode: GraphMode) -> Result<NodalGraph> {
        let mut seen: HashMap<u32, Vec<i8>> = HashMap::new();
        for p in circuits.iter().flatten() {
            seen.entry(p.node).or_default().push(p.bit);
        }
        for (&node, bits) in &seen {
            if bits.len() != 2 {
                return Err(Error::CrossingCount { id: node, count: bits.len() });
            }
            let ok = match mode {
                GraphMode::Oriented => bits[0].abs() == 1 && bits[0] == -bits[1],
                GraphMode::Free => bits.iter().all(|&b| b == 0),
            };
            if !ok {
                return Err(Error::SignMismatch { id: node });
            }
        }
        Ok(NodalGraph { circuits, mode })
    }

    pub fn empty(mode: GraphMode) -> NodalGraph {
        NodalGraph { circuits: Vec::new(), mode }
    }

    pub fn circuits(&self) -> &[Vec<NodePass>] {
        &self.circuits
    }

    pub fn mode(&self) -> GraphMode {
        self.mode
    }

    pub fn node_count(&self) -> usize {
        self.circuits.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.circuits.iter().all(Vec::is_empty)
    }

    /// The same graph with bits forgotten.
    pub fn to_free(&self) -> NodalGraph {
        NodalGraph {
            circuits: self
                .circuits
                .iter()
                .map(|c| c.iter().map(|p| NodePass { node: p.node, bit: 0 }).collect())
                .collect(),
            mode: GraphMode::Free,
        }
    }

    /// All graphs reachable by one nodal second Reidemeister move.
    pub fn r2_reductions(&self) -> Vec<NodalGraph> {
        let mut segs: HashMap<(u32, u32), Vec<(usize, usize, usize)>> = HashMap::new();
        for (ci, c) in self.circuits.iter().enumerate() {
            let len = c.len();
            let count = match len {
                0 | 1 => 0,
                2 => 1,
                _ => len,
            };
            for j in 0..count {
                let (a, b) = (c[j].node, c[(j + 1) % len].node);
                if a != b {
                    segs.entry((a.min(b), a.max(b))).or_default().push((ci, j, (j + 1) % len));
                }
            }
        }
        let mut out = Vec::new();
        let mut keys: Vec<_> = segs.keys().copied().collect();
        keys.sort_unstable();
        for key in keys {
            let list = &segs[&key];
            for s in 0..list.len() {
                for t in s + 1..list.len() {
                    let (c1, i1, j1) = list[s];
                    let (c2, i2, j2) = list[t];
                    let p1 = [(c1, i1), (c1, j1)];
                    let p2 = [(c2, i2), (c2, j2)];
                    if p1.iter().any(|x| p2.contains(x)) {
                        continue;
                    }
                    if self.mode == GraphMode::Oriented {
                        let strand = &self.circuits[c1];
                        if strand[i1].bit == strand[j1].bit {
                            continue;
                        }
                    }
                    let drop: HashSet<(usize, usize)> = p1.iter().chain(&p2).copied().collect();
                    let circuits = self
                        .circuits
                        .iter()
                        .enumerate()
                        .map(|(ci, c)| {
                            c.iter()
                                .enumerate()
                                .filter(|(j, _)| !drop.contains(&(ci, *j)))
                                .map(|(_, p)| *p)
                                .collect()
                        })
                        .collect();
                    out.push(NodalGraph { circuits, mode: self.mode });
                }
            }
        }
        out
    }

    fn serialize_into(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.circuits.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (j, p) in c.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                match p.bit {
                    0 => write!(f, "({})", p.node)?,
                    1 => write!(f, "({},+)", p.node)?,
                    _ => write!(f, "({},-)", p.node)?,
                }
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.circuits
                .iter()
                .map(|c| {
                    Value::Array(
                        c.iter()
                            .map(|p| if p.bit == 0 { json!([p.node]) } else { json!([p.node, p.bit]) })
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

impl fmt::Display for NodalGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.serialize_into(f)
    }
}

/// Canonical representative up to circuit rotation, order and reversal and
/// node relabeling, without any reduction. Empty circuits are dropped.
pub fn canonical_form(g: &NodalGraph) -> NodalGraph {
    let circuits: Vec<&Vec<NodePass>> = g.circuits.iter().filter(|c| !c.is_empty()).collect();
    let k = circuits.len();
    let mut home: HashMap<u32, Vec<usize>> = HashMap::new();
    for (i, c) in circuits.iter().enumerate() {
        for p in c.iter() {
            home.entry(p.node).or_default().push(i);
        }
    }
    let mut best: Option<Vec<Vec<(u32, i8)>>> = None;
    for rev_bits in 0..1u32 << k {
        let rev = |i: usize| rev_bits >> i & 1 == 1;
        let adjusted: Vec<Vec<NodePass>> = circuits
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut v: Vec<NodePass> = c
                    .iter()
                    .map(|p| {
                        let h = &home[&p.node];
                        let flip = h[0] != h[1] && rev(h[0]) != rev(h[1]);
                        NodePass { node: p.node, bit: if flip { -p.bit } else { p.bit } }
                    })
                    .collect();
                if rev(i) {
                    v.reverse();
                }
                v
            })
            .collect();
        let mut search = Search { circuits: &adjusted, best: &mut best, used: vec![false; k], prefix: Vec::new() };
        search.run(&HashMap::new());
    }
    let circuits = best
        .unwrap_or_default()
        .into_iter()
        .map(|c| c.into_iter().map(|(node, bit)| NodePass { node, bit }).collect())
        .collect();
    NodalGraph { circuits, mode: g.mode }
}

struct Search<'a> {
    circuits: &'a [Vec<NodePass>],
    best: &'a mut Option<Vec<Vec<(u32, i8)>>>,
    used: Vec<bool>,
    prefix: Vec<Vec<(u32, i8)>>,
}

impl Search<'_> {
    fn run(&mut self, labels: &HashMap<u32, u32>) {
        let t = self.prefix.len();
        if t == self.circuits.len() {
            if self.best.as_ref().is_none_or(|b| self.prefix < *b) {
                *self.best = Some(self.prefix.clone());
            }
            return;
        }
        for i in 0..self.circuits.len() {
            if self.used[i] {
                continue;
            }
            let c = &self.circuits[i];
            for r in 0..c.len() {
                let mut lab = labels.clone();
                let seq: Vec<(u32, i8)> = (0..c.len())
                    .map(|j| {
                        let p = c[(r + j) % c.len()];
                        let next = lab.len() as u32 + 1;
                        (*lab.entry(p.node).or_insert(next), p.bit)
                    })
                    .collect();
                self.prefix.push(seq);
                let prune = self.best.as_ref().is_some_and(|b| self.prefix[..] > b[..=t]);
                if !prune {
                    self.used[i] = true;
                    self.run(&lab);
                    self.used[i] = false;
                }
                self.prefix.pop();
            }
        }
    }
}

/// Reduces `g` by every sequence of nodal second Reidemeister moves and
/// returns the smallest irreducible result by node count, then by canonical
/// serialization.
pub fn canonicalize(g: &NodalGraph) -> Reduced {
    let total = g.circuits.len() as u32;
    let start = canonical_form(g);
    let mut seen: HashSet<NodalGraph> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut best: Option<NodalGraph> = None;
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(cur) = queue.pop_front() {
        let next = cur.r2_reductions();
        if next.is_empty() {
            let better = match &best {
                None => true,
                Some(b) => (cur.node_count(), &cur) < (b.node_count(), b),
            };
            if better {
                best = Some(cur);
            }
            continue;
        }
        for n in next {
            let n = canonical_form(&n);
            if seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    let graph = best.expect("search visits at least the start graph");
    let loops = total - graph.circuits.len() as u32;
    Reduced { graph, loops }
}

/// Formal sum of canonical graphs with Laurent coefficients in `A`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ParityBracketValue {
    terms: BTreeMap<NodalGraph, MultiPoly>,
}

impl ParityBracketValue {
    fn add(&mut self, g: NodalGraph, p: MultiPoly) {
        let entry = self.terms.entry(g.clone()).or_default();
        *entry = std::mem::take(entry) + p;
        if entry.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NodalGraph, &MultiPoly)> {
        self.terms.iter()
    }

    /// Coefficient of the empty graph.
    pub fn pure_part(&self) -> MultiPoly {
        self.terms.iter().find(|(g, _)| g.is_empty()).map(|(_, p)| p.clone()).unwrap_or_default()
    }

    pub fn graph_terms(&self) -> impl Iterator<Item = (&NodalGraph, &MultiPoly)> {
        self.terms.iter().filter(|(g, _)| !g.is_empty())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Every coefficient multiplied by `p`.
    pub fn scale(&self, p: &MultiPoly) -> Result<ParityBracketValue> {
        let mut out = ParityBracketValue::default();
        for (g, c) in &self.terms {
            out.add(g.clone(), c.mul(p)?);
        }
        Ok(out)
    }

    pub fn substitute(&self, s: &Substitution) -> Result<ParityBracketValue> {
        let mut out = ParityBracketValue::default();
        for (g, c) in &self.terms {
            out.add(g.clone(), c.substitute(s)?);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms.iter().map(|(g, p)| json!({"graph": g.to_json(), "coeff": p.to_json()})).collect(),
        )
    }
}

impl fmt::Display for ParityBracketValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (g, p)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if g.is_empty() {
                write!(f, "({p})")?;
            } else {
                write!(f, "({p})*{g}")?;
            }
        }
        Ok(())
    }
}

/// Raw graph of the parity state `choices` (over even crossings, in id order)
/// and its number of plain loops.
fn parity_state(sk: &Skeleton, odd: &[bool], even_choice: impl Fn(usize) -> Smoothing, mode: GraphMode) -> (NodalGraph, u32) {
    let res = sk.trace(|c| if odd[c] { Conn::Through } else { sk.conn(c, even_choice(c)) });
    let mut forward = vec![true; sk.ports() / 2];
    for t in &res.loops {
        for &(p, fw) in &t.nodes {
            forward[p] = fw;
        }
    }
    let mut loops = 0;
    let mut circuits = Vec::new();
    for t in &res.loops {
        if t.nodes.is_empty() {
            loops += 1;
            continue;
        }
        circuits.push(
            t.nodes
                .iter()
                .map(|&(p, _)| {
                    let c = sk.crossing_of[p];
                    let bit = match mode {
                        GraphMode::Free => 0,
                        GraphMode::Oriented => {
                            let (o, u) = (sk.over[c], sk.under[c]);
                            let s = if sk.positive[c] { 1 } else { -1 };
                            let rel = s * if forward[o] == forward[u] { 1 } else { -1 };
                            if p == u {
                                rel
                            } else {
                                -rel
                            }
                        }
                    };
                    NodePass { node: c as u32 + 1, bit }
                })
                .collect(),
        );
    }
    (NodalGraph { circuits, mode }, loops)
}

/// `<K>_P = sum_S A^{n(S)} d^{l} [G(S)]` with the default cap on even
/// crossings. States whose graph reduces to nothing use `d^{l - 1}`.
pub fn parity_bracket(code: &GaussCode, z_mode: bool) -> Result<ParityBracketValue> {
    parity_bracket_capped(code, z_mode, DEFAULT_MAX_CROSSINGS)
}

pub fn parity_bracket_capped(code: &GaussCode, z_mode: bool, cap: usize) -> Result<ParityBracketValue> {
    code.require_virtual()?;
    if code.is_long() {
        return Err(Error::NotClosed);
    }
    let odd: Vec<bool> = code.crossings().map(|c| code.is_odd(c)).collect();
    let even: Vec<usize> = (0..odd.len()).filter(|&c| !odd[c]).collect();
    if even.len() > cap.min(63) {
        return Err(Error::SizeCapExceeded { crossings: even.len(), cap: cap.min(63) });
    }
    check_cap(code, 63)?;
    let mode = if z_mode { GraphMode::Free } else { GraphMode::Oriented };
    let sk = Skeleton::new(code);
    type Acc = (HashMap<(Reduced, u32, u32), u64>, HashMap<NodalGraph, Reduced>);
    let (hist, _) = fold_states(
        even.len(),
        || -> Acc { (HashMap::new(), HashMap::new()) },
        |(hist, cache), mask| {
            let choice = |c: usize| {
                let k = even.iter().position(|&e| e == c).unwrap();
                if mask >> k & 1 == 1 {
                    Smoothing::B
                } else {
                    Smoothing::A
                }
            };
            let (raw, loops) = parity_state(&sk, &odd, choice, mode);
            let red = cache.entry(raw.clone()).or_insert_with(|| canonicalize(&raw)).clone();
            *hist.entry((red, loops, mask.count_ones())).or_default() += 1;
        },
        |(mut a, ca), (b, _)| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            (a, ca)
        },
    );
    let e = even.len() as i64;
    let mut entries: Vec<_> = hist.into_iter().collect();
    entries.sort_by(|x, y| (&x.0 .0.graph, x.0 .1, x.0 .2).cmp(&(&y.0 .0.graph, y.0 .1, y.0 .2)));
    let mut out = ParityBracketValue::default();
    for ((red, loops, b), count) in entries {
        let l = loops + red.loops;
        let power = if red.graph.is_empty() { l - 1 } else { l };
        let coeff = MultiPoly::pow_d(power).shift_a(e - 2 * b as i64).scalar_mul(&BigInt::from(count));
        out.add(red.graph, coeff);
    }
    Ok(out)
}

/// `(-A^3)^{-w} <K>_P`.
pub fn normalized_parity_bracket(code: &GaussCode, z_mode: bool) -> Result<ParityBracketValue> {
    normalized_parity_bracket_capped(code, z_mode, DEFAULT_MAX_CROSSINGS)
}

pub fn normalized_parity_bracket_capped(code: &GaussCode, z_mode: bool, cap: usize) -> Result<ParityBracketValue> {
    parity_bracket_capped(code, z_mode, cap)?.scale(&MultiPoly::neg_a3_pow(-code.writhe()?))
}

/// Free-knot invariant of a flat code: the parity bracket of its ascending
/// lift at `A = 1` in free mode, up to an overall sign fixed by making the
/// first coefficient positive.
pub fn free_knot_invariant(code: &GaussCode) -> Result<ParityBracketValue> {
    free_knot_invariant_capped(code, DEFAULT_MAX_CROSSINGS)
}

pub fn free_knot_invariant_capped(code: &GaussCode, cap: usize) -> Result<ParityBracketValue> {
    let lift = code.lift_ascending()?;
    let v = parity_bracket_capped(&lift, true, cap)?.substitute(&Substitution::new().a(MultiPoly::one()))?;
    let negative = v.terms().next().is_some_and(|(_, p)| p.to_constant().is_ok_and(|c| c < BigInt::from(0)));
    if negative {
        v.scale(&MultiPoly::constant(-1))
    } else {
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::bracket;

    fn code(s: &str) -> GaussCode {
        s.parse().unwrap()
    }

    fn graph(circuits: &[&[(u32, i8)]], mode: GraphMode) -> NodalGraph {
        NodalGraph::new(
            circuits.iter().map(|c| c.iter().map(|&(node, bit)| NodePass { node, bit }).collect()).collect(),
            mode,
        )
        .unwrap()
    }

    const KISHINO: &str = "closed: O1- O2+ U3- U2+ O3- O4+ U1- U4+";

    #[test]
    fn all_even_is_the_bracket() {
        let tr = code("closed: O1+ U2+ O3+ U1+ O2+ U3+");
        let v = parity_bracket(&tr, false).unwrap();
        assert_eq!(v.graph_terms().count(), 0);
        assert_eq!(v.pure_part(), bracket(&tr).unwrap());
        assert!(parity_bracket(&code("closed:"), false).unwrap().pure_part().is_one());
    }

    #[test]
    fn bigon_reduces() {
        let g = graph(&[&[(1, 1), (2, -1)], &[(1, -1), (2, 1)]], GraphMode::Oriented);
        let r = canonicalize(&g);
        assert!(r.graph.is_empty());
        assert_eq!(r.loops, 2);
        // a single circuit 1212 always contains a bigon
        let single = graph(&[&[(1, 1), (2, 1), (1, -1), (2, -1)]], GraphMode::Oriented);
        assert!(canonicalize(&single).graph.is_empty());
        // equal bits along each strand: no bigon
        let linked = graph(&[&[(1, 1), (2, 1)], &[(1, -1), (2, -1)]], GraphMode::Oriented);
        assert_eq!(canonicalize(&linked).graph.node_count(), 2);
        assert!(canonicalize(&linked.to_free()).graph.is_empty());
    }

    #[test]
    fn kishino_graph() {
        let v = parity_bracket(&code(KISHINO), false).unwrap();
        let terms: Vec<_> = v.terms().collect();
        assert_eq!(terms.len(), 1);
        let (g, p) = terms[0];
        assert_eq!(g.node_count(), 4);
        assert!(p.is_one());
        assert_eq!(canonicalize(g).graph, *g);
        let free = parity_bracket(&code(KISHINO), true).unwrap();
        assert_eq!(free.graph_terms().count(), 0);
    }

    #[test]
    fn canonical_form_ignores_presentation() {
        let a = graph(&[&[(1, 1), (2, 1), (3, -1), (1, -1), (2, -1), (3, 1)]], GraphMode::Oriented);
        let b = graph(&[&[(9, -1), (7, 1), (5, -1), (9, 1), (7, -1), (5, 1)]], GraphMode::Oriented);
        let rotated = graph(&[&[(2, 1), (3, -1), (1, -1), (2, -1), (3, 1), (1, 1)]], GraphMode::Oriented);
        assert_eq!(canonical_form(&a), canonical_form(&rotated));
        // b is a relabeled reversal of a
        let rb = NodalGraph::new(
            vec![b.circuits()[0].iter().rev().copied().collect()],
            GraphMode::Oriented,
        )
        .unwrap();
        assert_eq!(canonical_form(&b), canonical_form(&rb));
    }

    #[test]
    fn free_invariant_of_flat_unknot() {
        assert!(free_knot_invariant(&code("closed:")).unwrap().pure_part().is_one());
        assert_eq!(free_knot_invariant(&code(KISHINO)), Err(Error::NotFlat));
    }
}
