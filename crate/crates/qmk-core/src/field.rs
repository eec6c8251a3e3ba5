//! Graded vector fields on a chart: action on functions, the super Lie
//! bracket, weight decomposition, relatedness under maps, and pushforward
//! along coordinate changes.

use std::collections::BTreeMap;
use std::fmt;

use num::BigRational;

use crate::context::{check_same_context, CoordId, Context, Parity};
use crate::error::AlgebraError;
use crate::poly::{Homogeneity, Polynomial, SubstitutionMap};

/// A derivation written as one coefficient polynomial per coordinate;
/// missing entries mean a zero component.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    ctx: Context,
    components: BTreeMap<CoordId, Polynomial>,
}

impl VectorField {
    pub fn zero(ctx: &Context) -> Self {
        VectorField {
            ctx: ctx.clone(),
            components: BTreeMap::new(),
        }
    }

    pub fn new(ctx: &Context, components: Vec<(CoordId, Polynomial)>) -> Result<Self, AlgebraError> {
        let mut map = BTreeMap::new();
        for (id, p) in components {
            check_same_context(p.context(), ctx)?;
            if !p.is_zero() {
                map.insert(id, p);
            }
        }
        Ok(VectorField {
            ctx: ctx.clone(),
            components: map,
        })
    }

    /// The coordinate field `d/dc` of a coordinate c.
    pub fn coordinate_derivation(ctx: &Context, id: CoordId) -> Self {
        VectorField {
            ctx: ctx.clone(),
            components: [(id, Polynomial::one(ctx))].into_iter().collect(),
        }
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component(&self, id: CoordId) -> Polynomial {
        self.components
            .get(&id)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(&self.ctx))
    }

    pub fn components(&self) -> impl Iterator<Item = (CoordId, &Polynomial)> {
        self.components.iter().map(|(id, p)| (*id, p))
    }

    pub fn add(&self, rhs: &VectorField) -> Result<VectorField, AlgebraError> {
        check_same_context(&self.ctx, &rhs.ctx)?;
        let mut components = self.components.clone();
        for (id, p) in &rhs.components {
            let sum = match components.get(id) {
                Some(q) => q.add(p)?,
                None => p.clone(),
            };
            if sum.is_zero() {
                components.remove(id);
            } else {
                components.insert(*id, sum);
            }
        }
        Ok(VectorField {
            ctx: self.ctx.clone(),
            components,
        })
    }

    pub fn sub(&self, rhs: &VectorField) -> Result<VectorField, AlgebraError> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> VectorField {
        VectorField {
            ctx: self.ctx.clone(),
            components: self
                .components
                .iter()
                .map(|(id, p)| (*id, p.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, factor: &BigRational) -> VectorField {
        let mut out = BTreeMap::new();
        for (id, p) in &self.components {
            let q = p.scale(factor);
            if !q.is_zero() {
                out.insert(*id, q);
            }
        }
        VectorField {
            ctx: self.ctx.clone(),
            components: out,
        }
    }

    /// Left multiplication by a function: (f X)(g) = f * X(g).
    pub fn mul_left(&self, f: &Polynomial) -> Result<VectorField, AlgebraError> {
        check_same_context(&self.ctx, f.context())?;
        let mut out = BTreeMap::new();
        for (id, p) in &self.components {
            let q = f.mul(p)?;
            if !q.is_zero() {
                out.insert(*id, q);
            }
        }
        Ok(VectorField {
            ctx: self.ctx.clone(),
            components: out,
        })
    }

    /// Action on a function with the left-derivative convention:
    /// X(f) = sum over coordinates of X^c * d_c f.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial, AlgebraError> {
        check_same_context(&self.ctx, f.context())?;
        let mut acc = Polynomial::zero(&self.ctx);
        for (id, coeff) in &self.components {
            acc = acc.add(&coeff.mul(&f.partial_derivative(*id))?)?;
        }
        Ok(acc)
    }

    /// Joint parity/weight classification. A field is homogeneous of parity
    /// p when parity(X^c) + parity(c) = p for every nonzero component, and
    /// of weight n when weight(X^c) - weight(c) = n.
    pub fn homogeneity(&self) -> Homogeneity {
        let mut seen: Option<(Parity, i64)> = None;
        for (id, p) in &self.components {
            let (cp, cw) = match p.homogeneity() {
                Homogeneity::Zero => continue,
                Homogeneity::Mixed => return Homogeneity::Mixed,
                Homogeneity::Homogeneous(cp, cw) => (cp, cw),
            };
            let fp = cp.combine(self.ctx.parity(*id));
            let fw = cw - self.ctx.weight(*id);
            match seen {
                None => seen = Some((fp, fw)),
                Some(prev) if prev == (fp, fw) => {}
                Some(_) => return Homogeneity::Mixed,
            }
        }
        match seen {
            None => Homogeneity::Zero,
            Some((p, w)) => Homogeneity::Homogeneous(p, w),
        }
    }

    /// Parity of the field as a derivation, if homogeneous. The zero field
    /// reports even.
    pub fn parity(&self) -> Result<Parity, AlgebraError> {
        let mut seen: Option<Parity> = None;
        for (id, p) in &self.components {
            let cp = match p.parity() {
                None => return Err(AlgebraError::InhomogeneousParity),
                Some(cp) => cp,
            };
            if p.is_zero() {
                continue;
            }
            let fp = cp.combine(self.ctx.parity(*id));
            match seen {
                None => seen = Some(fp),
                Some(prev) if prev == fp => {}
                Some(_) => return Err(AlgebraError::InhomogeneousParity),
            }
        }
        Ok(seen.unwrap_or(Parity::Even))
    }

    /// Weight of the field, if homogeneous. The zero field reports 0.
    pub fn weight(&self) -> Result<i64, AlgebraError> {
        match self.homogeneity() {
            Homogeneity::Zero => Ok(0),
            Homogeneity::Homogeneous(_, w) => Ok(w),
            Homogeneity::Mixed => Err(AlgebraError::InhomogeneousWeight),
        }
    }

    /// Super Lie bracket with the fixed sign convention
    /// `[X,Y]^c = X(Y^c) - (-1)^(p(X) p(Y)) Y(X^c)`.
    /// Mixed-parity inputs are rejected rather than decomposed.
    pub fn commutator(&self, rhs: &VectorField) -> Result<VectorField, AlgebraError> {
        check_same_context(&self.ctx, &rhs.ctx)?;
        if self.is_zero() || rhs.is_zero() {
            return Ok(VectorField::zero(&self.ctx));
        }
        let sign = self.parity()?.koszul_sign(rhs.parity()?);
        let mut components = BTreeMap::new();
        for (id, _) in self.ctx.coordinates() {
            let mut term = self.apply(&rhs.component(id))?;
            let back = self.component(id);
            if !back.is_zero() {
                let mut yx = rhs.apply(&back)?;
                if sign < 0 {
                    yx = yx.neg();
                }
                term = term.sub(&yx)?;
            }
            if !term.is_zero() {
                components.insert(id, term);
            }
        }
        Ok(VectorField {
            ctx: self.ctx.clone(),
            components,
        })
    }

    /// Split into homogeneous-weight parts. Summing the parts reproduces
    /// the field.
    pub fn weight_decompose(&self) -> BTreeMap<i64, VectorField> {
        let mut parts: BTreeMap<i64, VectorField> = BTreeMap::new();
        for (id, p) in &self.components {
            for w in p.weights() {
                let piece = p.homogeneous_component(w);
                let n = w - self.ctx.weight(*id);
                let entry = parts
                    .entry(n)
                    .or_insert_with(|| VectorField::zero(&self.ctx));
                entry.components.insert(
                    *id,
                    match entry.components.get(id) {
                        Some(q) => q.add(&piece).expect("same context"),
                        None => piece,
                    },
                );
            }
        }
        parts
    }

    /// Projection onto the negative-weight part.
    pub fn negative_part(&self) -> VectorField {
        self.weight_part(|n| n < 0)
    }

    /// Projection onto the non-negative-weight part.
    pub fn nonnegative_part(&self) -> VectorField {
        self.weight_part(|n| n >= 0)
    }

    fn weight_part(&self, keep: impl Fn(i64) -> bool) -> VectorField {
        let mut acc = VectorField::zero(&self.ctx);
        for (n, part) in self.weight_decompose() {
            if keep(n) {
                acc = acc.add(&part).expect("same context");
            }
        }
        acc
    }

    /// Check `[Q,Q] = 0`, equivalently `Q(Q^c) = 0` for every coordinate.
    /// On failure the first nonzero component (in declaration order) is
    /// returned as a witness.
    pub fn is_homological(&self) -> Result<HomologyCheck, AlgebraError> {
        if !self.is_zero() && !self.parity()?.is_odd() {
            return Err(AlgebraError::NotOdd);
        }
        for (id, _) in self.ctx.coordinates() {
            let residual = self.apply(&self.component(id))?;
            if !residual.is_zero() {
                return Ok(HomologyCheck::Failed {
                    coordinate: id,
                    residual,
                });
            }
        }
        Ok(HomologyCheck::Homological)
    }
}

/// Outcome of the homological test, with a witness on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomologyCheck {
    Homological,
    Failed {
        coordinate: CoordId,
        residual: Polynomial,
    },
}

impl HomologyCheck {
    pub fn is_homological(&self) -> bool {
        matches!(self, HomologyCheck::Homological)
    }
}

/// Result of an f-relatedness check: one residual per target coordinate.
#[derive(Debug, Clone)]
pub struct RelatednessReport {
    pub residuals: Vec<(CoordId, Polynomial)>,
}

impl RelatednessReport {
    pub fn related(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }
}

/// Check whether two fields are related under the map whose pullback is
/// `sigma`. `sigma` sends each coordinate of the context of `target_field`
/// to a polynomial over the context of `source_field`; the fields are
/// related when substituting each target component agrees with applying
/// the source field to the corresponding image.
pub fn check_f_related(
    sigma: &SubstitutionMap,
    source_field: &VectorField,
    target_field: &VectorField,
) -> Result<RelatednessReport, AlgebraError> {
    check_same_context(sigma.target(), source_field.context())?;
    check_same_context(sigma.source(), target_field.context())?;
    let mut residuals = Vec::new();
    for (id, c) in sigma.source().coordinates() {
        let image = sigma
            .image(id)
            .ok_or_else(|| AlgebraError::MissingImage(c.name.clone()))?;
        let lhs = target_field.component(id).substitute(sigma)?;
        let rhs = source_field.apply(image)?;
        residuals.push((id, lhs.sub(&rhs)?));
    }
    Ok(RelatednessReport { residuals })
}

/// A weight-preserving polynomial change of chart together with its
/// inverse. `forward` expresses each old coordinate in the new chart;
/// `inverse` expresses each new coordinate in the old chart. Both maps
/// must be total, parity-consistent and weight-preserving; for charts with
/// symbolic coefficients the roundtrip identity cannot be checked
/// syntactically, so it is validated separately by `verify_inverse`.
#[derive(Debug, Clone)]
pub struct CoordinateChange {
    forward: SubstitutionMap,
    inverse: SubstitutionMap,
}

impl CoordinateChange {
    pub fn new(forward: SubstitutionMap, inverse: SubstitutionMap) -> Result<Self, AlgebraError> {
        check_same_context(forward.target(), inverse.source())?;
        check_same_context(forward.source(), inverse.target())?;
        for (map, label) in [(&forward, "forward"), (&inverse, "inverse")] {
            if !map.is_total() {
                return Err(AlgebraError::InvalidCoordinateChange(format!(
                    "{label} map does not cover every coordinate"
                )));
            }
            if !map.preserves_weight() {
                return Err(AlgebraError::InvalidCoordinateChange(format!(
                    "{label} map does not preserve weight"
                )));
            }
        }
        Ok(CoordinateChange { forward, inverse })
    }

    pub fn old_chart(&self) -> &Context {
        self.forward.source()
    }

    pub fn new_chart(&self) -> &Context {
        self.forward.target()
    }

    pub fn forward(&self) -> &SubstitutionMap {
        &self.forward
    }

    pub fn inverse(&self) -> &SubstitutionMap {
        &self.inverse
    }

    /// Check forward and inverse compose to the identity on coordinates.
    /// Only meaningful for concrete (non-symbolic) changes.
    pub fn verify_inverse(&self) -> Result<bool, AlgebraError> {
        for (id, _) in self.old_chart().coordinates() {
            let there = Polynomial::coordinate(self.old_chart(), id)
                .substitute(&self.forward)?
                .substitute(&self.inverse)?;
            if there != Polynomial::coordinate(self.old_chart(), id) {
                return Ok(false);
            }
        }
        for (id, _) in self.new_chart().coordinates() {
            let back = Polynomial::coordinate(self.new_chart(), id)
                .substitute(&self.inverse)?
                .substitute(&self.forward)?;
            if back != Polynomial::coordinate(self.new_chart(), id) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Express a field given on the old chart in the new chart: the
    /// component at a new coordinate c' is X(c'-as-function-of-old)
    /// rewritten in the new chart.
    pub fn pushforward(&self, field: &VectorField) -> Result<VectorField, AlgebraError> {
        check_same_context(field.context(), self.old_chart())?;
        let mut components = Vec::new();
        for (id, _) in self.new_chart().coordinates() {
            let expr_in_old = self
                .inverse
                .image(id)
                .ok_or_else(|| AlgebraError::MissingImage(self.new_chart().name(id).into()))?;
            let applied = field.apply(expr_in_old)?;
            components.push((id, applied.substitute(&self.forward)?));
        }
        VectorField::new(self.new_chart(), components)
    }
}

/// Components printed in declaration order as `{ c = expr; ... }`.
impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (id, _) in self.ctx.coordinates() {
            if let Some(p) = self.components.get(&id) {
                if first {
                    write!(f, " ")?;
                    first = false;
                } else {
                    write!(f, " ")?;
                }
                write!(f, "{} = {};", self.ctx.name(id), p)?;
            }
        }
        write!(f, " }}")
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
