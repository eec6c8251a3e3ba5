//! The weight-one layer: charts with weights 0 and 1 only, sections of the
//! underlying bundle as weight-(-1) fields, the bracket and anchor induced
//! by an odd weight-one field, and the axiom suite they satisfy exactly
//! when the field squares to zero.

use std::collections::BTreeMap;
use std::fmt;

use crate::context::{check_same_context, CoordId, Context, Parity};
use crate::derived::HigherAlgebroid;
use crate::error::AlgebraError;
use crate::field::{check_f_related, RelatednessReport, VectorField};
use crate::poly::{Homogeneity, Polynomial, SubstitutionMap};
use crate::report::{CheckLine, CheckReport};

/// A chart whose coordinates have weights 0 (base) and 1 (fiber), together
/// with an odd weight-one field. Homologicality is not required to define
/// the induced operations, only for their axioms to hold.
#[derive(Debug, Clone)]
pub struct AlgebroidChart {
    ctx: Context,
    q: VectorField,
}

impl AlgebroidChart {
    pub fn new(ctx: &Context, q: VectorField) -> Result<Self, AlgebraError> {
        if let Some((_, c)) = ctx.coordinates().find(|(_, c)| c.weight != 0 && c.weight != 1) {
            return Err(AlgebraError::InvalidCoordinateChange(format!(
                "coordinate {} has weight {}, expected 0 or 1",
                c.name, c.weight
            )));
        }
        check_same_context(ctx, q.context())?;
        match q.homogeneity() {
            Homogeneity::Zero | Homogeneity::Homogeneous(Parity::Odd, 1) => {}
            Homogeneity::Homogeneous(Parity::Even, _) => return Err(AlgebraError::NotOdd),
            _ => return Err(AlgebraError::NotWeightOne),
        }
        Ok(AlgebroidChart {
            ctx: ctx.clone(),
            q,
        })
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn q(&self) -> &VectorField {
        &self.q
    }

    pub fn is_homological(&self) -> Result<bool, AlgebraError> {
        if self.q.is_zero() {
            return Ok(true);
        }
        Ok(self.q.is_homological()?.is_homological())
    }

    /// Weight-one coordinates, indexing the frame of sections.
    pub fn fiber(&self) -> Vec<CoordId> {
        self.ctx
            .fiber_coordinates()
            .map(|(id, _)| id)
            .collect()
    }

    fn derived(&self) -> HigherAlgebroid {
        HigherAlgebroid::new_unchecked(&self.ctx, self.q.clone())
            .expect("weight-one chart is a valid graded chart")
    }
}

/// A section written in the frame dual to the fiber coordinates, with a
/// declared parity. The parity of a component differs from the section
/// parity by the reversed parity of its fiber coordinate.
#[derive(Clone, PartialEq, Eq)]
pub struct Section {
    ctx: Context,
    parity: Parity,
    components: BTreeMap<CoordId, Polynomial>,
}

impl Section {
    pub fn new(
        ctx: &Context,
        parity: Parity,
        components: Vec<(CoordId, Polynomial)>,
    ) -> Result<Self, AlgebraError> {
        let mut map = BTreeMap::new();
        for (id, p) in components {
            check_same_context(p.context(), ctx)?;
            if ctx.weight(id) != 1 {
                return Err(AlgebraError::UnknownCoordinate(format!(
                    "{} is not a fiber coordinate",
                    ctx.name(id)
                )));
            }
            if p.is_zero() {
                continue;
            }
            match p.homogeneity() {
                Homogeneity::Homogeneous(cp, 0)
                    if cp == parity.combine(ctx.parity(id).flip()) => {}
                Homogeneity::Homogeneous(_, 0) => {
                    return Err(AlgebraError::InhomogeneousParity)
                }
                _ => return Err(AlgebraError::WeightNotZero),
            }
            map.insert(id, p);
        }
        Ok(Section {
            ctx: ctx.clone(),
            parity,
            components: map,
        })
    }

    pub fn zero(ctx: &Context, parity: Parity) -> Self {
        Section {
            ctx: ctx.clone(),
            parity,
            components: BTreeMap::new(),
        }
    }

    /// The frame section at a fiber coordinate. Its parity is the reverse
    /// of the coordinate parity.
    pub fn frame(ctx: &Context, id: CoordId) -> Self {
        Section {
            ctx: ctx.clone(),
            parity: ctx.parity(id).flip(),
            components: [(id, Polynomial::one(ctx))].into_iter().collect(),
        }
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn component(&self, id: CoordId) -> Polynomial {
        self.components
            .get(&id)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(&self.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn add(&self, rhs: &Section) -> Result<Section, AlgebraError> {
        if self.parity != rhs.parity && !self.is_zero() && !rhs.is_zero() {
            return Err(AlgebraError::InhomogeneousParity);
        }
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
        Ok(Section {
            ctx: self.ctx.clone(),
            parity: if self.is_zero() { rhs.parity } else { self.parity },
            components,
        })
    }

    pub fn sub(&self, rhs: &Section) -> Result<Section, AlgebraError> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Section {
        Section {
            ctx: self.ctx.clone(),
            parity: self.parity,
            components: self
                .components
                .iter()
                .map(|(id, p)| (*id, p.neg()))
                .collect(),
        }
    }

    /// Multiply by a parity-homogeneous base function from the left.
    pub fn mul_left(&self, f: &Polynomial) -> Result<Section, AlgebraError> {
        let fp = f.parity().ok_or(AlgebraError::InhomogeneousParity)?;
        let mut components = BTreeMap::new();
        for (id, p) in &self.components {
            let q = f.mul(p)?;
            if !q.is_zero() {
                components.insert(*id, q);
            }
        }
        Ok(Section {
            ctx: self.ctx.clone(),
            parity: self.parity.combine(fp),
            components,
        })
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parity={} {{", self.parity)?;
        for (id, _) in self.ctx.coordinates() {
            if let Some(p) = self.components.get(&id) {
                write!(f, " {} = {};", self.ctx.name(id), p)?;
            }
        }
        write!(f, " }}")
    }
}

impl fmt::Debug for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The odd embedding of sections into weight-(-1) fields:
/// u = u^k e_k goes to (-1)^p(u) u^k d/dxi^k.
pub fn embed_section(u: &Section) -> VectorField {
    let negate = u.parity.is_odd();
    let components = u
        .components
        .iter()
        .map(|(id, p)| (*id, if negate { p.neg() } else { p.clone() }))
        .collect();
    VectorField::new(&u.ctx, components).expect("section components share the context")
}

/// Inverse of the embedding for a weight-(-1) field with base-only
/// coefficients, at the stated section parity.
pub fn extract_section(
    ctx: &Context,
    field: &VectorField,
    parity: Parity,
) -> Result<Section, AlgebraError> {
    if !field.is_zero() {
        let fp = field.parity()?;
        if fp != parity.flip() {
            return Err(AlgebraError::InhomogeneousParity);
        }
        if field.weight()? != -1 {
            return Err(AlgebraError::WeightNotNegative(field.weight()?));
        }
    }
    let negate = parity.is_odd();
    let mut components = Vec::new();
    for (id, p) in field.components() {
        components.push((id, if negate { p.neg() } else { p.clone() }));
    }
    Section::new(ctx, parity, components)
}

/// Bracket on sections induced by the weight-one field:
/// the section whose embedding is (-1)^p(u) [[Q, i_u], i_v].
pub fn algebroid_bracket(
    chart: &AlgebroidChart,
    u: &Section,
    v: &Section,
) -> Result<Section, AlgebraError> {
    let iu = embed_section(u);
    let iv = embed_section(v);
    let mut w = chart.q.commutator(&iu)?.commutator(&iv)?;
    if u.parity.is_odd() {
        w = w.neg();
    }
    extract_section(&chart.ctx, &w, u.parity.combine(v.parity))
}

/// Anchor of a section as a vector field in the base coordinates:
/// a(u)f = [[Q, i_u], f].
pub fn algebroid_anchor(
    chart: &AlgebroidChart,
    u: &Section,
) -> Result<VectorField, AlgebraError> {
    let du = chart.q.commutator(&embed_section(u))?;
    let mut components = Vec::new();
    for (a, _) in chart.ctx.base_coordinates() {
        components.push((a, du.apply(&Polynomial::coordinate(&chart.ctx, a))?));
    }
    VectorField::new(&chart.ctx, components)
}

fn section_samples(chart: &AlgebroidChart) -> Vec<Section> {
    let mut samples: Vec<Section> = chart
        .fiber()
        .iter()
        .map(|id| Section::frame(&chart.ctx, *id))
        .collect();
    let frames: Vec<Section> = samples.clone();
    for (a, _) in chart.ctx.base_coordinates() {
        let f = Polynomial::coordinate(&chart.ctx, a);
        for frame in &frames {
            if let Ok(scaled) = frame.mul_left(&f) {
                samples.push(scaled);
            }
        }
    }
    samples
}

fn function_samples(chart: &AlgebroidChart) -> Vec<Polynomial> {
    let mut out = vec![Polynomial::one(&chart.ctx)];
    for (a, _) in chart.ctx.base_coordinates() {
        out.push(Polynomial::coordinate(&chart.ctx, a));
    }
    out
}

/// Check the bracket/anchor axioms over the frame sections, the frame
/// sections scaled by base coordinates, and base-function multipliers:
/// super antisymmetry, the super Jacobi identity, the Leibniz rule, and
/// function-linearity of the anchor. The homological check is reported on
/// a separate line of kind Q2.
pub fn verify_algebroid_axioms(chart: &AlgebroidChart) -> Result<CheckReport, AlgebraError> {
    let mut report = CheckReport::new();
    let sections = section_samples(chart);
    let functions = function_samples(chart);
    let derived = chart.derived();

    let mut antisymmetry: Option<(String, String)> = None;
    let mut jacobi: Option<(String, String)> = None;
    let mut leibniz: Option<(String, String)> = None;
    let mut anchor_linear: Option<(String, String)> = None;

    for u in &sections {
        for v in &sections {
            if antisymmetry.is_none() {
                // residual of [u,v] = -(-1)^(uv) [v,u]
                let mut back = algebroid_bracket(chart, v, u)?;
                if u.parity().koszul_sign(v.parity()) < 0 {
                    back = back.neg();
                }
                let r = algebroid_bracket(chart, u, v)?.add(&back)?;
                if !r.is_zero() {
                    antisymmetry = Some((format!("u={u} v={v}"), r.to_string()));
                }
            }
            for f in &functions {
                if leibniz.is_none() {
                    let lhs = algebroid_bracket(chart, u, &v.mul_left(f)?)?;
                    let anchor_term =
                        v.mul_left(&derived.anchor_apply(&embed_section(u), f)?)?;
                    let mut scaled = algebroid_bracket(chart, u, v)?.mul_left(f)?;
                    if u.parity().is_odd()
                        && f.parity().ok_or(AlgebraError::InhomogeneousParity)?.is_odd()
                    {
                        scaled = scaled.neg();
                    }
                    let r = lhs.sub(&anchor_term.add(&scaled)?)?;
                    if !r.is_zero() {
                        leibniz = Some((format!("u={u} f={f} v={v}"), r.to_string()));
                    }
                }
            }
            if anchor_linear.is_none() {
                for f in &functions {
                    let lhs = algebroid_anchor(chart, &u.mul_left(f)?)?;
                    let rhs = algebroid_anchor(chart, u)?.mul_left(f)?;
                    let r = lhs.sub(&rhs)?;
                    if !r.is_zero() {
                        anchor_linear = Some((format!("f={f} u={u}"), r.to_string()));
                        break;
                    }
                }
            }
            if jacobi.is_none() {
                for w in &sections {
                    let lhs = algebroid_bracket(chart, u, &algebroid_bracket(chart, v, w)?)?;
                    let t1 = algebroid_bracket(chart, &algebroid_bracket(chart, u, v)?, w)?;
                    let mut t2 = algebroid_bracket(chart, v, &algebroid_bracket(chart, u, w)?)?;
                    if u.parity().is_odd() && v.parity().is_odd() {
                        t2 = t2.neg();
                    }
                    let r = lhs.sub(&t1.add(&t2)?)?;
                    if !r.is_zero() {
                        jacobi = Some((format!("u={u} v={v} w={w}"), r.to_string()));
                        break;
                    }
                }
            }
        }
    }

    let mut line = |name: &str, failure: Option<(String, String)>| match failure {
        None => report.push(CheckLine::ok("AXIOM", name)),
        Some((details, residual)) => {
            report.push(CheckLine::fail("AXIOM", name, details, residual))
        }
    };
    line("antisymmetry", antisymmetry);
    line("jacobi", jacobi);
    line("leibniz", leibniz);
    line("anchor_linearity", anchor_linear);

    match chart.is_homological()? {
        true => report.push(CheckLine::ok("Q2", "homological")),
        false => {
            let check = chart.q.is_homological()?;
            let (details, residual) = match check {
                crate::field::HomologyCheck::Failed {
                    coordinate,
                    residual,
                } => (
                    format!("witness={}", chart.ctx.name(coordinate)),
                    residual.to_string(),
                ),
                _ => unreachable!("non-homological chart must produce a witness"),
            };
            report.push(CheckLine::fail("Q2", "homological", details, residual));
        }
    }
    Ok(report)
}

/// Whether only the bracket/anchor axiom lines passed (the homological
/// line is excluded: relating the two is the point of the equivalence).
pub fn axioms_all_ok(report: &CheckReport) -> bool {
    report
        .lines
        .iter()
        .filter(|l| l.kind == "AXIOM")
        .all(CheckLine::passed)
}

/// The anchor intertwines brackets: `a([u,v]) = [a(u), a(v)]` over the
/// sample sections. A consequence of the axioms, checked as a guard
/// against convention drift.
pub fn check_anchor_bracket_homomorphism(
    chart: &AlgebroidChart,
) -> Result<CheckReport, AlgebraError> {
    let mut report = CheckReport::new();
    let sections = section_samples(chart);
    let mut failure = None;
    'outer: for u in &sections {
        for v in &sections {
            let lhs = algebroid_anchor(chart, &algebroid_bracket(chart, u, v)?)?;
            let rhs = algebroid_anchor(chart, u)?.commutator(&algebroid_anchor(chart, v)?)?;
            let r = lhs.sub(&rhs)?;
            if !r.is_zero() {
                failure = Some((format!("u={u} v={v}"), r.to_string()));
                break 'outer;
            }
        }
    }
    match failure {
        None => report.push(CheckLine::ok("AXIOM", "anchor_bracket")),
        Some((details, residual)) => {
            report.push(CheckLine::fail("AXIOM", "anchor_bracket", details, residual))
        }
    }
    Ok(report)
}

/// A bundle morphism is a morphism of the induced structures exactly when
/// the weight-one fields are related under it.
pub fn check_algebroid_morphism(
    source: &AlgebroidChart,
    target: &AlgebroidChart,
    sigma: &SubstitutionMap,
) -> Result<RelatednessReport, AlgebraError> {
    if !sigma.preserves_weight() {
        return Err(AlgebraError::InvalidCoordinateChange(
            "morphism substitution must preserve weight".to_string(),
        ));
    }
    check_f_related(sigma, source.q(), target.q())
}
