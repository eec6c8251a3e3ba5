//! Derived operations of a weight-one odd field on the negative-weight
//! fields of a non-negatively graded chart: the differential, the odd
//! binary and higher brackets, the two anchors, and the identity suite
//! relating them to the super Lie bracket.

use crate::context::{check_same_context, CoordId, Context, Parity};
use crate::error::AlgebraError;
use crate::field::VectorField;
use crate::monomial::Monomial;
use crate::poly::{Homogeneity, Polynomial};
use crate::report::{CheckLine, CheckReport};

/// A non-negatively graded chart equipped with an odd vector field of
/// weight +1. The checked constructor also requires the field to be
/// homological; the unchecked one admits arbitrary weight-one odd fields,
/// which is what table computations on fully symbolic coefficients and
/// deliberate counterexamples need.
#[derive(Debug, Clone)]
pub struct HigherAlgebroid {
    ctx: Context,
    q: VectorField,
    degree: i64,
}

impl HigherAlgebroid {
    pub fn new(ctx: &Context, q: VectorField) -> Result<Self, AlgebraError> {
        let a = Self::new_unchecked(ctx, q)?;
        if !a.q.is_zero() && !a.q.is_homological()?.is_homological() {
            return Err(AlgebraError::NotHomological);
        }
        Ok(a)
    }

    /// Construct without the homological check. Shape requirements (odd
    /// parity, homogeneous weight +1, non-negative coordinate weights)
    /// still apply.
    pub fn new_unchecked(ctx: &Context, q: VectorField) -> Result<Self, AlgebraError> {
        if let Some((_, c)) = ctx.coordinates().find(|(_, c)| c.weight < 0) {
            return Err(AlgebraError::NegativeWeightCoordinate(c.name.clone()));
        }
        check_same_context(ctx, q.context())?;
        match q.homogeneity() {
            Homogeneity::Zero => {}
            Homogeneity::Homogeneous(Parity::Odd, 1) => {}
            Homogeneity::Homogeneous(Parity::Even, _) => return Err(AlgebraError::NotOdd),
            Homogeneity::Homogeneous(_, _) | Homogeneity::Mixed => {
                return Err(AlgebraError::NotWeightOne)
            }
        }
        debug_assert!(q.negative_part().is_zero());
        Ok(HigherAlgebroid {
            ctx: ctx.clone(),
            q,
            degree: ctx.degree().unwrap_or(0).max(0),
        })
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn q(&self) -> &VectorField {
        &self.q
    }

    /// Maximal coordinate weight of the chart.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_homological(&self) -> Result<bool, AlgebraError> {
        if self.q.is_zero() {
            return Ok(true);
        }
        Ok(self.q.is_homological()?.is_homological())
    }

    /// The odd derivation D(u) = [Q, u]. Squares to zero exactly when Q
    /// is homological.
    pub fn big_d(&self, u: &VectorField) -> Result<VectorField, AlgebraError> {
        self.q.commutator(u)
    }

    /// The differential d(u): the negative-weight part of [Q, u]. Vanishes
    /// on fields of weight -1 and coincides with [Q, u] below that.
    pub fn derived_d(&self, u: &VectorField) -> Result<VectorField, AlgebraError> {
        self.require_negative(u)?;
        Ok(self.big_d(u)?.negative_part())
    }

    /// The odd bracket {u, v} = [[Q, u], v]. Lands in negative weights
    /// without projection.
    pub fn derived_bracket2(
        &self,
        u: &VectorField,
        v: &VectorField,
    ) -> Result<VectorField, AlgebraError> {
        self.require_negative(u)?;
        self.require_negative(v)?;
        self.big_d(u)?.commutator(v)
    }

    /// The k-ary bracket: project [..[[Q, u1], u2], .., uk] onto negative
    /// weights. For one argument this is the differential; from two
    /// arguments on the projection is a no-op.
    pub fn higher_derived_bracket(
        &self,
        args: &[VectorField],
    ) -> Result<VectorField, AlgebraError> {
        match args {
            [] => Err(AlgebraError::EmptyBracket),
            [u] => self.derived_d(u),
            [u, rest @ ..] => {
                self.require_negative(u)?;
                let mut acc = self.big_d(u)?;
                for v in rest {
                    self.require_negative(v)?;
                    acc = acc.commutator(v)?;
                }
                Ok(acc.negative_part())
            }
        }
    }

    /// Coefficient family of the weight-zero components of Q: one
    /// polynomial in the base coordinates per (base coordinate, weight-one
    /// coordinate) pair. Empty when the chart has no base.
    pub fn anchor_coefficients(&self) -> Result<AnchorCoefficients, AlgebraError> {
        let mut entries = Vec::new();
        for (a, _) in self.ctx.base_coordinates() {
            let component = self.q.component(a);
            for (i, c) in self.ctx.fiber_coordinates() {
                if c.weight != 1 {
                    continue;
                }
                let y_i = Monomial::coordinate(self.ctx.len(), i);
                let mut coeff = Polynomial::zero(&self.ctx);
                for (m, alpha) in component.terms() {
                    let (fiber, base) = m.split_fiber(&self.ctx);
                    if fiber != y_i {
                        continue;
                    }
                    // term = alpha * M with M = sign * (y^i * base-part)
                    let (merged, sign) =
                        y_i.mul(&base, &self.ctx).expect("disjoint factors");
                    debug_assert_eq!(&merged, m);
                    let mut c = alpha.clone();
                    if sign < 0 {
                        c = -c;
                    }
                    coeff = coeff.add(&Polynomial::monomial(&self.ctx, base, c))?;
                }
                if !coeff.is_zero() {
                    entries.push((a, i, coeff));
                }
            }
        }
        Ok(AnchorCoefficients { entries })
    }

    /// The action a(u)f = [[Q, u], f], where bracketing a field with a
    /// function means applying the field. Vanishes unless u has weight -1.
    pub fn anchor_apply(
        &self,
        u: &VectorField,
        f: &Polynomial,
    ) -> Result<Polynomial, AlgebraError> {
        self.require_negative(u)?;
        require_weight_zero(f)?;
        self.big_d(u)?.apply(f)
    }

    /// The anchor of u as a vector field in the base coordinates, read off
    /// from its action on each base coordinate.
    pub fn anchor_field(&self, u: &VectorField) -> Result<VectorField, AlgebraError> {
        self.require_negative(u)?;
        let du = self.big_d(u)?;
        let mut components = Vec::new();
        for (a, _) in self.ctx.base_coordinates() {
            components.push((a, du.apply(&Polynomial::coordinate(&self.ctx, a))?));
        }
        VectorField::new(&self.ctx, components)
    }

    /// Compare the two anchor descriptions on the weight-one coordinate
    /// fields: the action-defined anchor against the field assembled from
    /// the coefficient family as (-1)^(p(u)+1) sum of u^i Q^a_i d/dx^a.
    pub fn anchors_agree(&self) -> Result<CheckReport, AlgebraError> {
        let family = self.anchor_coefficients()?;
        let mut report = CheckReport::new();
        for (i, c) in self.ctx.fiber_coordinates() {
            if c.weight != 1 {
                continue;
            }
            let u = VectorField::coordinate_derivation(&self.ctx, i);
            let algebraic = self.anchor_field(&u)?;
            let mut expected = VectorField::zero(&self.ctx);
            for (a, j, coeff) in &family.entries {
                if *j != i {
                    continue;
                }
                expected =
                    expected.add(&VectorField::new(&self.ctx, vec![(*a, coeff.clone())])?)?;
            }
            if !c.parity.is_odd() {
                // (-1)^(p(u)+1) with p(u) the parity of d/dy^i
                expected = expected.neg();
            }
            let residual = algebraic.sub(&expected)?;
            let name = format!("anchor[{}]", c.name);
            if residual.is_zero() {
                report.push(CheckLine::ok("ANCHOR", &name));
            } else {
                report.push(CheckLine::fail(
                    "ANCHOR",
                    &name,
                    format!("u=d/d{}", c.name),
                    residual.to_string(),
                ));
            }
        }
        Ok(report)
    }

    /// The commutator of the differential with multiplication by a
    /// weight-zero function: (delta f)(u) = d(f u) - (-1)^p(f) f d(u).
    pub fn delta_f(&self, f: &Polynomial, u: &VectorField) -> Result<VectorField, AlgebraError> {
        require_weight_zero(f)?;
        let fp = f.parity().ok_or(AlgebraError::InhomogeneousParity)?;
        self.require_negative(u)?;
        let first = self.derived_d(&u.mul_left(f)?)?;
        let mut second = self.derived_d(u)?.mul_left(f)?;
        if fp.is_odd() {
            second = second.neg();
        }
        first.sub(&second)
    }

    fn require_negative(&self, u: &VectorField) -> Result<(), AlgebraError> {
        if u.is_zero() {
            return Ok(());
        }
        let w = u.weight()?;
        if w >= 0 {
            return Err(AlgebraError::WeightNotNegative(w));
        }
        Ok(())
    }
}

/// The family Q^a_i of weight-zero anchor coefficients.
#[derive(Debug, Clone)]
pub struct AnchorCoefficients {
    /// (base coordinate, weight-one coordinate, coefficient) triples;
    /// zero coefficients are omitted.
    pub entries: Vec<(CoordId, CoordId, Polynomial)>,
}

impl AnchorCoefficients {
    pub fn get(&self, base: CoordId, fiber: CoordId) -> Option<&Polynomial> {
        self.entries
            .iter()
            .find(|(a, i, _)| *a == base && *i == fiber)
            .map(|(_, _, p)| p)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One evaluation point for the identity suite: three homogeneous fields
/// of negative weight and two parity-homogeneous weight-zero functions.
#[derive(Debug, Clone)]
pub struct SampleTuple {
    pub u: VectorField,
    pub v: VectorField,
    pub w: VectorField,
    pub f: Polynomial,
    pub g: Polynomial,
}

impl SampleTuple {
    pub fn describe(&self) -> String {
        format!(
            "u={} v={} w={} f={} g={}",
            self.u, self.v, self.w, self.f, self.g
        )
    }
}

/// Names of the nine identities checked by `verify_two_layer`, in report
/// order.
pub const IDENTITY_NAMES: [&str; 9] = [
    "d_squared",
    "d_commutator",
    "d_derived_bracket",
    "mixed_jacobi",
    "derived_jacobi",
    "commutator_linearity",
    "anchor_linearity",
    "derived_leibniz_right",
    "derived_leibniz_left",
];

fn signed(field: VectorField, negate: bool) -> VectorField {
    if negate {
        field.neg()
    } else {
        field
    }
}

/// Evaluate the left-minus-right residual of every identity on every
/// sample, reporting the first offending sample per identity. An empty
/// sample set yields an empty report.
pub fn verify_two_layer(
    a: &HigherAlgebroid,
    samples: &[SampleTuple],
) -> Result<CheckReport, AlgebraError> {
    let mut report = CheckReport::new();
    if samples.is_empty() {
        return Ok(report);
    }
    let mut failures: [Option<(String, String)>; 9] = Default::default();
    for sample in samples {
        for (idx, name) in IDENTITY_NAMES.iter().enumerate() {
            if failures[idx].is_some() {
                continue;
            }
            let residual = identity_residual(a, name, sample)?;
            if !residual.is_zero() {
                failures[idx] = Some((sample.describe(), residual.to_string()));
            }
        }
    }
    for (idx, name) in IDENTITY_NAMES.iter().enumerate() {
        match failures[idx].take() {
            None => report.push(CheckLine::ok("IDENTITY", name)),
            Some((details, residual)) => {
                report.push(CheckLine::fail("IDENTITY", name, details, residual))
            }
        }
    }
    Ok(report)
}

/// Left-minus-right residual of a single named identity on one sample.
pub fn identity_residual(
    a: &HigherAlgebroid,
    name: &str,
    s: &SampleTuple,
) -> Result<VectorField, AlgebraError> {
    let (u, v, w, f, g) = (&s.u, &s.v, &s.w, &s.f, &s.g);
    let pu = u.parity()?;
    let pv = v.parity()?;
    let pf = f.parity().ok_or(AlgebraError::InhomogeneousParity)?;
    let pg = g.parity().ok_or(AlgebraError::InhomogeneousParity)?;
    let odd = Parity::is_odd;
    match name {
        // d(d(u)) = 0
        "d_squared" => a.derived_d(&a.derived_d(u)?),
        // d[u,v] = {u,v} - (-1)^(u v) {v,u}
        "d_commutator" => {
            let lhs = a.derived_d(&u.commutator(v)?)?;
            let rhs = a
                .derived_bracket2(u, v)?
                .sub(&signed(a.derived_bracket2(v, u)?, odd(pu) && odd(pv)))?;
            lhs.sub(&rhs)
        }
        // d{u,v} = -(-1)^((u+1) v) {v,du} + (-1)^(u+1) {u,dv} + (-1)^u [du,dv]
        "d_derived_bracket" => {
            let du = a.derived_d(u)?;
            let dv = a.derived_d(v)?;
            let lhs = a.derived_d(&a.derived_bracket2(u, v)?)?;
            let t1 = signed(a.derived_bracket2(v, &du)?, !(odd(pu.flip()) && odd(pv)));
            let t2 = signed(a.derived_bracket2(u, &dv)?, !odd(pu));
            let t3 = signed(du.commutator(&dv)?, odd(pu));
            lhs.sub(&t1.add(&t2)?.add(&t3)?)
        }
        // {u,[v,w]} = [{u,v},w] + (-1)^((u+1) v) [v,{u,w}]
        "mixed_jacobi" => {
            let lhs = a.derived_bracket2(u, &v.commutator(w)?)?;
            let t1 = a.derived_bracket2(u, v)?.commutator(w)?;
            let t2 = signed(
                v.commutator(&a.derived_bracket2(u, w)?)?,
                odd(pu.flip()) && odd(pv),
            );
            lhs.sub(&t1.add(&t2)?)
        }
        // {u,{v,w}} = (-1)^(u+1) {{u,v},w} + (-1)^((u+1)(v+1)) {v,{u,w}}
        "derived_jacobi" => {
            let lhs = a.derived_bracket2(u, &a.derived_bracket2(v, w)?)?;
            let t1 = signed(a.derived_bracket2(&a.derived_bracket2(u, v)?, w)?, !odd(pu));
            let t2 = signed(
                a.derived_bracket2(v, &a.derived_bracket2(u, w)?)?,
                odd(pu.flip()) && odd(pv.flip()),
            );
            lhs.sub(&t1.add(&t2)?)
        }
        // [f u, v] = f [u,v]
        "commutator_linearity" => {
            let lhs = u.mul_left(f)?.commutator(v)?;
            let rhs = u.commutator(v)?.mul_left(f)?;
            lhs.sub(&rhs)
        }
        // a(g u) = (-1)^g g a(u)
        "anchor_linearity" => {
            let lhs = a.anchor_field(&u.mul_left(g)?)?;
            let rhs = signed(a.anchor_field(u)?.mul_left(g)?, odd(pg));
            lhs.sub(&rhs)
        }
        // {u, f v} = a(u)f * v + (-1)^((u+1) f) f {u,v}
        "derived_leibniz_right" => {
            let lhs = a.derived_bracket2(u, &v.mul_left(f)?)?;
            let t1 = v.mul_left(&a.anchor_apply(u, f)?)?;
            let t2 = signed(
                a.derived_bracket2(u, v)?.mul_left(f)?,
                odd(pu.flip()) && odd(pf),
            );
            lhs.sub(&t1.add(&t2)?)
        }
        // {f u, v} = (-1)^f f {u,v} + (-1)^((f+u) v) a(v)f * u + delta_f([u,v])
        "derived_leibniz_left" => {
            let lhs = a.derived_bracket2(&u.mul_left(f)?, v)?;
            let t1 = signed(a.derived_bracket2(u, v)?.mul_left(f)?, odd(pf));
            let t2 = signed(
                u.mul_left(&a.anchor_apply(v, f)?)?,
                odd(pf.combine(pu)) && odd(pv),
            );
            let t3 = a.delta_f(f, &u.commutator(v)?)?;
            lhs.sub(&t1.add(&t2)?.add(&t3)?)
        }
        other => panic!("unknown identity `{other}`"),
    }
}

fn require_weight_zero(f: &Polynomial) -> Result<(), AlgebraError> {
    match f.homogeneity() {
        Homogeneity::Zero | Homogeneity::Homogeneous(_, 0) => Ok(()),
        _ => Err(AlgebraError::WeightNotZero),
    }
}
