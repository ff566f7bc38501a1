//! The arrow polynomial.
//!
//! Each disoriented smoothing leaves a pair of cusps. Reading a state loop in
//! its direction of travel, a cusp is recorded as `L` or `R`. Entering a
//! disoriented smoothing along passage `p` of crossing `c`, the letter is
//!
//! | sign of `c` | `p` is the over passage | letter |
//! |-------------|-------------------------|--------|
//! | +           | yes                     | R      |
//! | +           | no                      | L      |
//! | -           | yes                     | L      |
//! | -           | no                      | R      |
//!
//! Both cusps of a smoothing carry the same letter and the source/sink
//! polarity alternates along a loop, so it is not stored. Traversing a loop
//! backwards flips every letter. Adjacent equal letters cancel; a closed
//! loop whose reduced cyclic word has length `2n` contributes `K_n`, and the
//! segment of a long diagram contributes `Λ_w` for its reduced word `w`
//! read from the input end.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::bracket::{check_cap, DEFAULT_MAX_CROSSINGS};
use crate::error::Result;
use crate::gauss::GaussCode;
use crate::poly::{Monomial, MultiPoly, Substitution};
use crate::state::{fold_states, Skeleton};

pub use crate::state::{CuspLoop, LoopKind, Side};

/// Cancels adjacent equal letters to a fixed point; with `cyclic` the first
/// and last letters are adjacent too.
pub fn reduce_word(word: &[Side], cyclic: bool) -> Vec<Side> {
    let mut stack: Vec<Side> = Vec::with_capacity(word.len());
    for &s in word {
        if stack.last() == Some(&s) {
            stack.pop();
        } else {
            stack.push(s);
        }
    }
    if cyclic {
        let (mut lo, mut hi) = (0, stack.len());
        while hi - lo >= 2 && stack[lo] == stack[hi - 1] {
            lo += 1;
            hi -= 1;
        }
        stack.truncate(hi);
        stack.drain(..lo);
    }
    stack
}

/// Half the reduced cyclic length of a closed-loop word.
pub fn arrow_number(word: &[Side]) -> u32 {
    let r = reduce_word(word, true);
    debug_assert!(r.len() % 2 == 0);
    (r.len() / 2) as u32
}

type Key = (u32, u32, Vec<u32>, Option<Vec<Side>>);

fn arrow_histogram(code: &GaussCode) -> HashMap<Key, u64> {
    let sk = Skeleton::new(code);
    fold_states(
        sk.crossings(),
        HashMap::new,
        |acc: &mut HashMap<Key, u64>, mask| {
            let res = sk.trace_mask(mask);
            let mut ks = Vec::new();
            let mut lambda = None;
            for t in &res.loops {
                if t.long {
                    let w = reduce_word(&t.word, false);
                    if !w.is_empty() {
                        lambda = Some(w);
                    }
                } else {
                    let n = arrow_number(&t.word);
                    if n > 0 {
                        ks.push(n);
                    }
                }
            }
            ks.sort_unstable();
            *acc.entry((mask.count_ones(), res.loops.len() as u32, ks, lambda)).or_default() += 1;
        },
        |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        },
    )
}

/// `A[K] = sum_S <K|S> d^{||S|| - 1} V[S]` with the default cap.
pub fn arrow_poly(code: &GaussCode) -> Result<MultiPoly> {
    arrow_poly_capped(code, DEFAULT_MAX_CROSSINGS)
}

pub fn arrow_poly_capped(code: &GaussCode, cap: usize) -> Result<MultiPoly> {
    code.require_virtual()?;
    check_cap(code, cap)?;
    let n = code.crossing_count() as i64;
    let mut entries: Vec<_> = arrow_histogram(code).into_iter().collect();
    entries.sort();
    let mut out = MultiPoly::zero();
    for ((b, loops, ks, lambda), count) in entries {
        let mut mono = Monomial::a(0);
        for k in ks {
            mono = mono.mul(&Monomial::k(k))?;
        }
        if let Some(w) = lambda {
            mono = mono.mul(&Monomial::lambda(&Side::word_string(&w)))?;
        }
        let term = MultiPoly::pow_d(loops - 1).shift_a(n - 2 * b as i64).mul(&MultiPoly::term(1, mono))?;
        out = out + term.scalar_mul(&BigInt::from(count));
    }
    Ok(out)
}

/// `W[K] = (-A^3)^{-w} A[K]`.
pub fn w_poly(code: &GaussCode) -> Result<MultiPoly> {
    w_poly_capped(code, DEFAULT_MAX_CROSSINGS)
}

pub fn w_poly_capped(code: &GaussCode, cap: usize) -> Result<MultiPoly> {
    arrow_poly_capped(code, cap)?.mul(&MultiPoly::neg_a3_pow(-code.writhe()?))
}

/// `F[K] = A[K](A = 1)` for a flat code, computed on its ascending lift and
/// multiplied by `(-1)^n` for `n` crossings. A kink contributes `-A^{±3}`,
/// which is `-1` at `A = 1`, so the unsigned value is only invariant up to
/// sign; the normalized one equals `W` of any lift at `A = 1`.
pub fn flat_arrow(code: &GaussCode) -> Result<MultiPoly> {
    flat_arrow_capped(code, DEFAULT_MAX_CROSSINGS)
}

pub fn flat_arrow_capped(code: &GaussCode, cap: usize) -> Result<MultiPoly> {
    let lift = code.lift_ascending()?;
    let sign = if code.crossing_count() % 2 == 0 { 1 } else { -1 };
    Ok(arrow_poly_capped(&lift, cap)?
        .substitute(&Substitution::new().a(MultiPoly::one()))?
        .scalar_mul(&BigInt::from(sign)))
}

/// Largest `n` with `K_n` present in `p`, or 0.
pub fn max_k_index(p: &MultiPoly) -> u32 {
    p.max_k_index()
}
