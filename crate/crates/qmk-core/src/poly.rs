//! Supercommutative polynomials with exact rational coefficients.
//!
//! Values are normal forms: a map from canonical monomials to nonzero
//! reduced fractions. Equality is structural equality of the term maps.
//! Floating point never enters the kernel.

use std::cell::Cell;
use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::context::{check_same_context, CoordId, Context, Parity};
use crate::error::AlgebraError;
use crate::monomial::Monomial;

thread_local! {
    static TERM_LIMIT: Cell<usize> = const { Cell::new(0) };
}

/// Install a per-thread cap on the number of terms a polynomial may hold,
/// as a resource guard for runaway inputs. `None` removes the cap.
pub fn set_term_limit(limit: Option<usize>) {
    TERM_LIMIT.with(|l| l.set(limit.unwrap_or(0)));
}

fn check_term_limit(n: usize) -> Result<(), AlgebraError> {
    let limit = TERM_LIMIT.with(Cell::get);
    if limit > 0 && n > limit {
        Err(AlgebraError::TermLimit(limit))
    } else {
        Ok(())
    }
}

/// Parity/weight classification of a polynomial or vector field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    /// The zero value, homogeneous of every parity and weight.
    Zero,
    Homogeneous(Parity, i64),
    Mixed,
}

impl Homogeneity {
    pub fn parity(self) -> Option<Parity> {
        match self {
            Homogeneity::Homogeneous(p, _) => Some(p),
            _ => None,
        }
    }

    pub fn weight(self) -> Option<i64> {
        match self {
            Homogeneity::Homogeneous(_, w) => Some(w),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ctx: Context,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(ctx: &Context) -> Self {
        Polynomial {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &Context, value: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Monomial::one(ctx.len()), value);
        }
        Polynomial {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn one(ctx: &Context) -> Self {
        Self::constant(ctx, BigRational::one())
    }

    pub fn from_integer(ctx: &Context, n: i64) -> Self {
        Self::constant(ctx, BigRational::from(BigInt::from(n)))
    }

    pub fn coordinate(ctx: &Context, id: CoordId) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::coordinate(ctx.len(), id), BigRational::one());
        Polynomial {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn coordinate_named(ctx: &Context, name: &str) -> Result<Self, AlgebraError> {
        Ok(Self::coordinate(ctx, ctx.require(name)?))
    }

    pub fn monomial(ctx: &Context, m: Monomial, coeff: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(m, coeff);
        }
        Polynomial {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// The coefficient of the constant monomial.
    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&Monomial::one(self.ctx.len()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    fn insert_term(
        terms: &mut BTreeMap<Monomial, BigRational>,
        m: Monomial,
        c: BigRational,
    ) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Polynomial) -> Result<Polynomial, AlgebraError> {
        check_same_context(&self.ctx, &rhs.ctx)?;
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            Self::insert_term(&mut terms, m.clone(), c.clone());
        }
        check_term_limit(terms.len())?;
        Ok(Polynomial {
            ctx: self.ctx.clone(),
            terms,
        })
    }

    pub fn sub(&self, rhs: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, factor: &BigRational) -> Polynomial {
        if factor.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    /// Supercommutative product. Bilinear and associative; monomials that
    /// would square an odd coordinate collapse to zero.
    pub fn mul(&self, rhs: &Polynomial) -> Result<Polynomial, AlgebraError> {
        check_same_context(&self.ctx, &rhs.ctx)?;
        let mut terms = BTreeMap::new();
        for (ml, cl) in &self.terms {
            for (mr, cr) in &rhs.terms {
                if let Some((m, sign)) = ml.mul(mr, &self.ctx) {
                    let mut c = cl * cr;
                    if sign < 0 {
                        c = -c;
                    }
                    Self::insert_term(&mut terms, m, c);
                }
            }
        }
        check_term_limit(terms.len())?;
        Ok(Polynomial {
            ctx: self.ctx.clone(),
            terms,
        })
    }

    pub fn pow(&self, n: u32) -> Result<Polynomial, AlgebraError> {
        let mut acc = Polynomial::one(&self.ctx);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Left partial derivative by the given coordinate.
    pub fn partial_derivative(&self, id: CoordId) -> Polynomial {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if let Some((reduced, factor, sign)) = m.derivative(id, &self.ctx) {
                let mut c = c * BigRational::from(BigInt::from(factor));
                if sign < 0 {
                    c = -c;
                }
                Self::insert_term(&mut terms, reduced, c);
            }
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn partial_derivative_named(&self, name: &str) -> Result<Polynomial, AlgebraError> {
        Ok(self.partial_derivative(self.ctx.require(name)?))
    }

    /// The part of the polynomial of the given weight.
    pub fn homogeneous_component(&self, w: i64) -> Polynomial {
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight(&self.ctx) == w)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The weights at which the polynomial has nonzero components.
    pub fn weights(&self) -> Vec<i64> {
        let mut ws: Vec<i64> = self.terms.keys().map(|m| m.weight(&self.ctx)).collect();
        ws.sort_unstable();
        ws.dedup();
        ws
    }

    /// Joint parity/weight classification of all terms.
    pub fn homogeneity(&self) -> Homogeneity {
        let mut seen: Option<(Parity, i64)> = None;
        for m in self.terms.keys() {
            let pw = (m.parity(&self.ctx), m.weight(&self.ctx));
            match seen {
                None => seen = Some(pw),
                Some(prev) if prev == pw => {}
                Some(_) => return Homogeneity::Mixed,
            }
        }
        match seen {
            None => Homogeneity::Zero,
            Some((p, w)) => Homogeneity::Homogeneous(p, w),
        }
    }

    /// Parity classification ignoring weight. The zero polynomial reports
    /// even; mixed-parity polynomials report `None`.
    pub fn parity(&self) -> Option<Parity> {
        let mut seen: Option<Parity> = None;
        for m in self.terms.keys() {
            let p = m.parity(&self.ctx);
            match seen {
                None => seen = Some(p),
                Some(prev) if prev == p => {}
                Some(_) => return None,
            }
        }
        seen.or(Some(Parity::Even))
    }

    /// Substitute every coordinate by its image under `map`. An algebra
    /// morphism: factors of each canonical monomial are replaced in order
    /// and multiplied left to right.
    pub fn substitute(&self, map: &SubstitutionMap) -> Result<Polynomial, AlgebraError> {
        check_same_context(&self.ctx, &map.source)?;
        let mut acc = Polynomial::zero(&map.target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(&map.target, c.clone());
            for (id, e) in m.factors() {
                let image = map
                    .images
                    .get(&id)
                    .ok_or_else(|| AlgebraError::MissingImage(self.ctx.name(id).to_string()))?;
                term = term.mul(&image.pow(e)?)?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Set every positive-weight coordinate to zero, keeping the weight-0
    /// coordinates intact.
    pub fn restrict_to_base(&self) -> Polynomial {
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| {
                    m.factors().all(|(id, _)| self.ctx.weight(id) <= 0)
                })
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

/// Coordinate-to-polynomial assignment used by `Polynomial::substitute`.
/// Images must be parity-homogeneous of the parity of the coordinate they
/// replace (the zero polynomial is accepted for either parity).
#[derive(Debug, Clone)]
pub struct SubstitutionMap {
    source: Context,
    target: Context,
    images: BTreeMap<CoordId, Polynomial>,
}

impl SubstitutionMap {
    pub fn new(
        source: &Context,
        target: &Context,
        images: Vec<(CoordId, Polynomial)>,
    ) -> Result<Self, AlgebraError> {
        let mut map = BTreeMap::new();
        for (id, image) in images {
            check_same_context(image.context(), target)?;
            match image.parity() {
                None => {
                    return Err(AlgebraError::ParityMismatch {
                        coordinate: source.name(id).to_string(),
                        expected: source.parity(id).to_string(),
                        found: "mixed".to_string(),
                    })
                }
                Some(p) if !image.is_zero() && p != source.parity(id) => {
                    return Err(AlgebraError::ParityMismatch {
                        coordinate: source.name(id).to_string(),
                        expected: source.parity(id).to_string(),
                        found: p.to_string(),
                    })
                }
                _ => {}
            }
            map.insert(id, image);
        }
        Ok(SubstitutionMap {
            source: source.clone(),
            target: target.clone(),
            images: map,
        })
    }

    pub fn identity(ctx: &Context) -> Self {
        let images = ctx
            .coordinates()
            .map(|(id, _)| (id, Polynomial::coordinate(ctx, id)))
            .collect();
        SubstitutionMap {
            source: ctx.clone(),
            target: ctx.clone(),
            images,
        }
    }

    pub fn source(&self) -> &Context {
        &self.source
    }

    pub fn target(&self) -> &Context {
        &self.target
    }

    pub fn image(&self, id: CoordId) -> Option<&Polynomial> {
        self.images.get(&id)
    }

    pub fn is_total(&self) -> bool {
        self.source
            .coordinates()
            .all(|(id, _)| self.images.contains_key(&id))
    }

    /// True when every image is weight-homogeneous of its coordinate's weight.
    pub fn preserves_weight(&self) -> bool {
        self.images.iter().all(|(id, image)| {
            image.is_zero()
                || matches!(image.homogeneity(),
                    Homogeneity::Homogeneous(_, w) if w == self.source.weight(*id))
        })
    }
}

/// Normalized printing: terms sorted by (weight, then descending canonical
/// exponent order), coefficients as reduced fractions, factors joined with
/// `*` and powers written `x^k`. Printing then parsing is the identity.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut entries: Vec<(&Monomial, &BigRational)> = self.terms.iter().collect();
        entries.sort_by(|(ma, _), (mb, _)| {
            ma.weight(&self.ctx)
                .cmp(&mb.weight(&self.ctx))
                .then_with(|| mb.cmp(ma))
        });
        for (i, (m, c)) in entries.iter().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut pieces: Vec<String> = Vec::new();
            if !magnitude.is_one() || m.is_one() {
                pieces.push(magnitude.to_string());
            }
            for (id, e) in m.factors() {
                if e == 1 {
                    pieces.push(self.ctx.name(id).to_string());
                } else {
                    pieces.push(format!("{}^{}", self.ctx.name(id), e));
                }
            }
            write!(f, "{}", pieces.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
