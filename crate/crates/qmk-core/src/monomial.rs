//! Monomials in canonical (declaration) order, with Koszul sign bookkeeping.

use crate::context::{CoordId, GradedContext, Parity};

/// Exponent vector over a context, indexed by declaration order. Odd
/// coordinates carry exponent 0 or 1; any reordering of odd factors during
/// normalization contributes a sign of -1 per transposition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial {
            exponents: vec![0; n],
        }
    }

    pub fn coordinate(n: usize, id: CoordId) -> Self {
        let mut exponents = vec![0; n];
        exponents[id.0] = 1;
        Monomial { exponents }
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial { exponents }
    }

    pub fn exponent(&self, id: CoordId) -> u32 {
        self.exponents[id.0]
    }

    pub fn is_one(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn factors(&self) -> impl Iterator<Item = (CoordId, u32)> + '_ {
        self.exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (CoordId(i), e))
    }

    pub fn total_degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn weight(&self, ctx: &GradedContext) -> i64 {
        self.factors()
            .map(|(id, e)| ctx.weight(id) * e as i64)
            .sum()
    }

    pub fn parity(&self, ctx: &GradedContext) -> Parity {
        let odd_count: u32 = self
            .factors()
            .filter(|(id, _)| ctx.parity(*id).is_odd())
            .map(|(_, e)| e)
            .sum();
        if odd_count.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Multiply two normalized monomials. Returns the merged monomial and
    /// the Koszul sign, or `None` when an odd coordinate would be squared.
    ///
    /// The sign counts, for each odd factor of `rhs`, the odd factors of
    /// `self` that stand strictly after it in canonical order; even factors
    /// commute freely and contribute nothing.
    pub fn mul(&self, rhs: &Monomial, ctx: &GradedContext) -> Option<(Monomial, i8)> {
        debug_assert_eq!(self.exponents.len(), rhs.exponents.len());
        let mut exponents = self.exponents.clone();
        let mut sign: i8 = 1;
        for (j, &e) in rhs.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            exponents[j] += e;
            if !ctx.parity(CoordId(j)).is_odd() {
                continue;
            }
            if exponents[j] > 1 {
                return None;
            }
            let passed = self.exponents[j + 1..]
                .iter()
                .enumerate()
                .filter(|(k, &se)| se == 1 && ctx.parity(CoordId(j + 1 + *k)).is_odd())
                .count();
            if passed % 2 == 1 {
                sign = -sign;
            }
        }
        Some((Monomial { exponents }, sign))
    }

    /// Left partial derivative of the monomial by coordinate `id`. Returns
    /// the reduced monomial, an integer factor (the exponent for an even
    /// coordinate) and the Koszul sign from moving the derivative past the
    /// factors that precede `id`.
    pub fn derivative(&self, id: CoordId, ctx: &GradedContext) -> Option<(Monomial, u32, i8)> {
        let e = self.exponents[id.0];
        if e == 0 {
            return None;
        }
        let mut exponents = self.exponents.clone();
        exponents[id.0] -= 1;
        if !ctx.parity(id).is_odd() {
            return Some((Monomial { exponents }, e, 1));
        }
        let preceding_odd = self.exponents[..id.0]
            .iter()
            .enumerate()
            .filter(|(k, &se)| se == 1 && ctx.parity(CoordId(*k)).is_odd())
            .count();
        let sign = if preceding_odd % 2 == 0 { 1 } else { -1 };
        Some((Monomial { exponents }, 1, sign))
    }

    /// True when every factor has positive weight.
    pub fn is_fiber_only(&self, ctx: &GradedContext) -> bool {
        self.factors().all(|(id, _)| ctx.weight(id) > 0)
    }

    /// Split into the positive-weight part and the rest (weight <= 0 factors).
    pub fn split_fiber(&self, ctx: &GradedContext) -> (Monomial, Monomial) {
        let mut fiber = vec![0; self.exponents.len()];
        let mut base = vec![0; self.exponents.len()];
        for (i, &e) in self.exponents.iter().enumerate() {
            if ctx.weight(CoordId(i)) > 0 {
                fiber[i] = e;
            } else {
                base[i] = e;
            }
        }
        (Monomial { exponents: fiber }, Monomial { exponents: base })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::GradedContext;

    fn ctx2() -> crate::context::Context {
        GradedContext::build(&[("t1", Parity::Odd, 1), ("t2", Parity::Odd, 1)]).unwrap()
    }

    #[test]
    fn odd_square_is_none() {
        let ctx = ctx2();
        let t1 = Monomial::coordinate(2, CoordId(0));
        assert!(t1.mul(&t1, &ctx).is_none());
    }

    #[test]
    fn odd_transposition_sign() {
        let ctx = ctx2();
        let t1 = Monomial::coordinate(2, CoordId(0));
        let t2 = Monomial::coordinate(2, CoordId(1));
        let (m, s) = t2.mul(&t1, &ctx).unwrap();
        assert_eq!(s, -1);
        assert_eq!(m.exponent(CoordId(0)), 1);
        assert_eq!(m.exponent(CoordId(1)), 1);
        let (_, s) = t1.mul(&t2, &ctx).unwrap();
        assert_eq!(s, 1);
    }

    #[test]
    fn left_derivative_sign() {
        let ctx = ctx2();
        let mut exps = vec![0; 2];
        exps[0] = 1;
        exps[1] = 1;
        let m = Monomial::from_exponents(exps);
        // d/dt1 (t1 t2) = t2
        let (r, f, s) = m.derivative(CoordId(0), &ctx).unwrap();
        assert_eq!((f, s), (1, 1));
        assert_eq!(r, Monomial::coordinate(2, CoordId(1)));
        // d/dt2 (t1 t2) = -t1
        let (r, f, s) = m.derivative(CoordId(1), &ctx).unwrap();
        assert_eq!((f, s), (1, -1));
        assert_eq!(r, Monomial::coordinate(2, CoordId(0)));
    }
}
