//! The bracket state sum, its writhe normalization `f`, the Jones form and
//! the `q`-form bracket.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::gauss::GaussCode;
use crate::poly::{Laurent, MultiPoly};
use crate::state::{choice_of, fold_states, CuspLoop, LoopKind, Skeleton, Smoothing};

/// Default crossing cap for the state sums.
pub const DEFAULT_MAX_CROSSINGS: usize = 24;

pub(crate) fn check_cap(code: &GaussCode, cap: usize) -> Result<()> {
    let n = code.crossing_count();
    if n > cap || n > 63 {
        Err(Error::SizeCapExceeded { crossings: n, cap: cap.min(63) })
    } else {
        Ok(())
    }
}

/// Loops of the state `choices` (indexed by crossing id minus one), each with
/// its unreduced cusp word. For long codes the long segment comes first.
pub fn state_loops(code: &GaussCode, choices: &[Smoothing]) -> Result<Vec<CuspLoop>> {
    code.require_virtual()?;
    if choices.len() != code.crossing_count() {
        return Err(Error::InvalidSite(format!(
            "{} smoothing choices for {} crossings",
            choices.len(),
            code.crossing_count()
        )));
    }
    let sk = Skeleton::new(code);
    let res = sk.trace(|c| sk.conn(c, choices[c]));
    Ok(res
        .loops
        .into_iter()
        .map(|t| CuspLoop { kind: if t.long { LoopKind::LongSegment } else { LoopKind::Closed }, word: t.word })
        .collect())
}

/// `counts[b][l]`: number of states with `b` B-smoothings and `l` loops.
pub(crate) fn loop_histogram(code: &GaussCode) -> Vec<Vec<u64>> {
    let sk = Skeleton::new(code);
    let n = sk.crossings();
    let max_loops = code.len() + 1;
    fold_states(
        n,
        || (vec![vec![0u64; max_loops + 1]; n + 1], Vec::new()),
        |(hist, seen), mask| {
            let part = sk.partners(|c| sk.conn(c, choice_of(mask, c)));
            let loops = sk.count_loops(&part, seen);
            hist[mask.count_ones() as usize][loops] += 1;
        },
        |(mut a, s), (b, _)| {
            for (ra, rb) in a.iter_mut().zip(b) {
                for (x, y) in ra.iter_mut().zip(rb) {
                    *x += y;
                }
            }
            (a, s)
        },
    )
    .0
}

/// `<K> = sum_S A^{#A - #B} d^{||S|| - 1}` with the default cap.
pub fn bracket(code: &GaussCode) -> Result<MultiPoly> {
    bracket_capped(code, DEFAULT_MAX_CROSSINGS)
}

pub fn bracket_capped(code: &GaussCode, cap: usize) -> Result<MultiPoly> {
    code.require_virtual()?;
    check_cap(code, cap)?;
    let n = code.crossing_count() as i64;
    let mut out = MultiPoly::zero();
    for (b, row) in loop_histogram(code).into_iter().enumerate() {
        for (loops, count) in row.into_iter().enumerate() {
            if count == 0 {
                continue;
            }
            let term = MultiPoly::pow_d(loops as u32 - 1).shift_a(n - 2 * b as i64);
            out = out + term.scalar_mul(&BigInt::from(count));
        }
    }
    Ok(out)
}

/// `f_K = (-A^3)^{-w} <K>`.
pub fn f_poly(code: &GaussCode) -> Result<MultiPoly> {
    f_poly_capped(code, DEFAULT_MAX_CROSSINGS)
}

pub fn f_poly_capped(code: &GaussCode, cap: usize) -> Result<MultiPoly> {
    let b = bracket_capped(code, cap)?;
    b.mul(&MultiPoly::neg_a3_pow(-code.writhe()?))
}

/// `f_K` together with `V_K(t) = f_K(t^{-1/4})` when every exponent of `A`
/// is a multiple of 4.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jones {
    pub f: MultiPoly,
    pub t_form: Option<Laurent>,
}

pub fn jones(code: &GaussCode) -> Result<Jones> {
    jones_capped(code, DEFAULT_MAX_CROSSINGS)
}

pub fn jones_capped(code: &GaussCode, cap: usize) -> Result<Jones> {
    let f = f_poly_capped(code, cap)?;
    Ok(Jones { t_form: t_form(&f), f })
}

/// `A^e -> t^{-e/4}` when exact.
pub fn t_form(f: &MultiPoly) -> Option<Laurent> {
    if !f.is_a_only() {
        return None;
    }
    let mut out = Laurent::zero();
    for (m, c) in f.terms() {
        if m.a_exp % 4 != 0 {
            return None;
        }
        out.add_term(-m.a_exp / 4, c.clone());
    }
    Some(out)
}

/// `sum_s (-1)^{n_B(s)} q^{n_B(s) + lambda(s)}` over enhanced states, which is
/// `sum_S (-1)^{n_B} q^{n_B} (q + q^{-1})^{||S||}`.
pub fn q_bracket(code: &GaussCode) -> Result<Laurent> {
    q_bracket_capped(code, DEFAULT_MAX_CROSSINGS)
}

pub fn q_bracket_capped(code: &GaussCode, cap: usize) -> Result<Laurent> {
    code.require_virtual()?;
    check_cap(code, cap)?;
    let circle = Laurent::monomial(1, 1) + Laurent::monomial(1, -1);
    let mut powers = vec![Laurent::monomial(1, 0)];
    let mut out = Laurent::zero();
    for (b, row) in loop_histogram(code).into_iter().enumerate() {
        let sign = if b % 2 == 0 { 1 } else { -1 };
        for (loops, count) in row.into_iter().enumerate() {
            if count == 0 {
                continue;
            }
            while powers.len() <= loops {
                let next = powers.last().unwrap().mul(&circle);
                powers.push(next);
            }
            let term = powers[loops].mul(&Laurent::monomial(BigInt::from(count) * sign, b as i64));
            out = out + term;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> GaussCode {
        s.parse().unwrap()
    }

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn small_brackets() {
        assert!(bracket(&code("closed:")).unwrap().is_one());
        assert!(bracket(&code("long:")).unwrap().is_one());
        assert_eq!(bracket(&code("closed: O1+ U1+")).unwrap(), p("-A^3"));
        assert_eq!(bracket(&code("closed: U1+ O1+")).unwrap(), p("-A^3"));
        assert_eq!(bracket(&code("closed: O1- U1-")).unwrap(), p("-A^-3"));
        assert!(f_poly(&code("closed: O1- U1-")).unwrap().is_one());
    }

    #[test]
    fn virtual_trefoil() {
        // four hand-traced states: loops 1, 1, 1, 2
        assert_eq!(bracket(&code("closed: O1+ O2+ U1+ U2+")).unwrap(), p("-A^-4 + 1 + A^2"));
        assert_eq!(f_poly(&code("closed: O1+ O2+ U1+ U2+")).unwrap(), p("-A^-10 + A^-6 + A^-4"));
    }

    #[test]
    fn trefoil() {
        // loop counts by number of B-smoothings: 2, 1, 2, 3
        let tr = code("closed: O1+ U2+ O3+ U1+ O2+ U3+");
        assert_eq!(bracket(&tr).unwrap(), p("A^-7 - A^-3 - A^5"));
        let f = f_poly(&tr).unwrap();
        assert_eq!(f, p("-A^-16 + A^-12 + A^-4"));
        let j = jones(&tr).unwrap();
        assert_eq!(j.t_form.unwrap().display("t"), "t + t^3 - t^4");
    }

    #[test]
    fn cap_is_enforced() {
        let tr = code("closed: O1+ U2+ O3+ U1+ O2+ U3+");
        assert_eq!(bracket_capped(&tr, 2), Err(Error::SizeCapExceeded { crossings: 3, cap: 2 }));
        assert_eq!(bracket(&code("long: F1+ F1+")), Err(Error::FlatCode));
    }

    #[test]
    fn q_bracket_examples() {
        assert_eq!(q_bracket(&code("closed:")).unwrap().display("q"), "q^-1 + q");
        // transport: (q + 1/q) * [A^{-n} <K>] with A^2 -> -1/q
        for s in ["closed: O1+ O2+ U1+ U2+", "closed: O1+ U2+ O3+ U1+ O2+ U3+", "closed: O1- U1-"] {
            let k = code(s);
            let shifted = bracket(&k).unwrap().shift_a(-(k.crossing_count() as i64));
            let mut moved = Laurent::zero();
            for (m, c) in shifted.terms() {
                assert_eq!(m.a_exp % 2, 0);
                let half = m.a_exp / 2;
                let sign = if half.rem_euclid(2) == 0 { 1 } else { -1 };
                moved.add_term(-half, c * sign);
            }
            let moved = moved.mul(&(Laurent::monomial(1, 1) + Laurent::monomial(1, -1)));
            assert_eq!(q_bracket(&k).unwrap(), moved, "{s}");
        }
    }

    #[test]
    fn state_loops_examples() {
        let vt = code("closed: O1+ O2+ U1+ U2+");
        let loops = state_loops(&vt, &[Smoothing::A, Smoothing::A]).unwrap();
        assert_eq!(loops.len(), 1);
        assert!(loops[0].word.is_empty());
        let e = state_loops(&code("closed:"), &[]).unwrap();
        assert_eq!(e, vec![CuspLoop { kind: LoopKind::Closed, word: vec![] }]);
        assert!(state_loops(&vt, &[Smoothing::A]).is_err());
    }
}
