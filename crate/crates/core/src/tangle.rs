//! Two-strand twist tangles and single virtualizations of their closures.
//!
//! A classical 2-2 tangle `T` with parallel strands expands in the bracket
//! state sum as `a(T)·1 + b(T)·e`, where `1` is the oriented (identity)
//! smoothing and `e` the disoriented turnback with `e² = d·e`. Closing `T`
//! against one more crossing and virtualizing that crossing gives a knot
//! whose arrow polynomial has a `K` term exactly when `b(T) ≠ 0`.

use crate::error::{Error, Result};
use crate::gauss::{GaussCode, PassKind, Passage, Shape, Sign};
use crate::poly::MultiPoly;

/// The braid word `σ^{s_1} ... σ^{s_k}` on two strands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistTangle {
    pub signs: Vec<Sign>,
}

impl TwistTangle {
    pub fn new(signs: Vec<Sign>) -> Self {
        TwistTangle { signs }
    }

    /// `(a(T), b(T))` by summing over the `2^k` states of the tangle and
    /// composing the smoothings.
    pub fn coefficients(&self) -> (MultiPoly, MultiPoly) {
        let k = self.signs.len();
        let mut a = MultiPoly::zero();
        let mut b = MultiPoly::zero();
        for mask in 0u64..1 << k {
            let mut turnbacks = 0u32;
            for (c, s) in self.signs.iter().enumerate() {
                let b_smoothing = mask >> c & 1 == 1;
                // the A-smoothing of a positive crossing is the identity
                if b_smoothing == s.is_pos() {
                    turnbacks += 1;
                }
            }
            let weight = MultiPoly::a_pow(k as i64 - 2 * mask.count_ones() as i64);
            if turnbacks == 0 {
                a = a + weight;
            } else {
                b = b + weight.mul(&MultiPoly::pow_d(turnbacks - 1)).expect("A-only");
            }
        }
        (a, b)
    }

    /// Closure of the braid `T·σ^{closing}`: a knot when the total number of
    /// crossings is odd. The closing crossing is the last one.
    pub fn closure(&self, closing: Sign) -> Result<GaussCode> {
        let mut word = self.signs.clone();
        word.push(closing);
        if word.len() % 2 == 0 {
            return Err(Error::InvalidSite(format!("a two-strand closure of {} crossings is a link", word.len())));
        }
        let mut ps = Vec::with_capacity(2 * word.len());
        for pass in 0..2 {
            for (c, &s) in word.iter().enumerate() {
                // the strand is on the left at crossing c of the first pass
                // when c is even; σ puts the left strand over
                let left = (c % 2 == 0) == (pass == 0);
                let over = left == s.is_pos();
                let kind = if over { PassKind::Over } else { PassKind::Under };
                ps.push(Passage::new(c as u32 + 1, kind, s));
            }
        }
        GaussCode::new(Shape::Closed, ps)
    }

    /// The closure with its closing crossing virtualized.
    pub fn virtualized_closure(&self, closing: Sign) -> Result<GaussCode> {
        self.closure(closing)?.virtualize(self.signs.len() as u32 + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::bracket;

    #[test]
    fn single_twists() {
        let (a, b) = TwistTangle::new(vec![Sign::Pos]).coefficients();
        assert_eq!((a, b), (MultiPoly::a_pow(1), MultiPoly::a_pow(-1)));
        let (a, b) = TwistTangle::new(vec![Sign::Pos, Sign::Neg]).coefficients();
        assert!(a.is_one() && b.is_zero());
    }

    #[test]
    fn closures() {
        let tr = TwistTangle::new(vec![Sign::Pos, Sign::Pos]).closure(Sign::Pos).unwrap();
        assert_eq!(tr, "closed: O1+ U2+ O3+ U1+ O2+ U3+".parse().unwrap());
        assert!(TwistTangle::new(vec![Sign::Pos]).closure(Sign::Pos).is_err());
    }

    #[test]
    fn expansion_matches_the_closure() {
        // <cl(T σ)> = a <cl(σ)> + b <cl(e σ)> = -A^3 a - A^-3 b
        for signs in [vec![Sign::Pos, Sign::Pos], vec![Sign::Pos, Sign::Neg], vec![Sign::Neg; 4]] {
            let t = TwistTangle::new(signs);
            let (a, b) = t.coefficients();
            let expect = a.mul(&"-A^3".parse().unwrap()).unwrap() + b.mul(&"-A^-3".parse().unwrap()).unwrap();
            assert_eq!(bracket(&t.closure(Sign::Pos).unwrap()).unwrap(), expect);
        }
    }
}
