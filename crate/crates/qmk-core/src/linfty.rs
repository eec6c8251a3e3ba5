//! Homotopy bracket tables on the quotient of the negative-weight fields
//! by the kernel of restriction to the zero section, and reconstruction of
//! the generating weight-one field from tabulated data.
//!
//! The quotient has one class per positive-weight coordinate. The bracket
//! tables depend on the chosen lifting of classes (the default lifts the
//! class of c to d/dc) and on the chart; both are recorded.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, Zero};

use crate::context::{CoordId, Context};
use crate::derived::HigherAlgebroid;
use crate::error::AlgebraError;
use crate::field::VectorField;
use crate::monomial::Monomial;
use crate::poly::{Homogeneity, Polynomial};
use crate::twolayer::{Combination, TwoLayerStructure};

/// A combination of quotient classes with weight-zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClassCombination {
    pub terms: BTreeMap<CoordId, Polynomial>,
}

impl ClassCombination {
    pub fn zero() -> Self {
        ClassCombination::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, c: CoordId, ctx: &Context) -> Polynomial {
        self.terms
            .get(&c)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(ctx))
    }

    pub fn render(&self, ctx: &Context) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let pieces: Vec<String> = self
            .terms
            .iter()
            .map(|(c, p)| {
                let label = format!("[d/d{}]", ctx.name(*c));
                let s = p.to_string();
                if s == "1" {
                    label
                } else if s == "-1" {
                    format!("-{label}")
                } else if p.num_terms() == 1 && !s.contains(' ') {
                    format!("{s}*{label}")
                } else {
                    format!("({s})*{label}")
                }
            })
            .collect();
        let mut out = String::new();
        for (i, piece) in pieces.iter().enumerate() {
            if i == 0 {
                out.push_str(piece);
            } else if let Some(stripped) = piece.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(piece);
            }
        }
        out
    }
}

/// Restriction of a negative-weight field to the zero section: keep the
/// weight-zero part of each fiber component.
pub fn class_of_field(x: &VectorField) -> Result<ClassCombination, AlgebraError> {
    let ctx = x.context();
    let mut terms = BTreeMap::new();
    for (id, p) in x.components() {
        if ctx.weight(id) <= 0 {
            if !p.is_zero() {
                return Err(AlgebraError::WeightNotNegative(0));
            }
            continue;
        }
        let restricted = p.restrict_to_base();
        if !restricted.is_zero() {
            terms.insert(id, restricted);
        }
    }
    Ok(ClassCombination { terms })
}

/// Class of a basis combination: entries whose basis monomial is 1 survive
/// with their coefficient, products die.
pub fn class_of_combination(
    t: &TwoLayerStructure,
    combo: &Combination,
) -> Result<ClassCombination, AlgebraError> {
    let mut out = ClassCombination::zero();
    for (idx, coeff) in &combo.terms {
        let b = &t.basis[*idx];
        if !b.monomial.is_one() {
            continue;
        }
        let entry = out
            .terms
            .entry(b.coordinate)
            .or_insert_with(|| Polynomial::zero(&t.ctx));
        *entry = entry.add(coeff)?;
    }
    out.terms.retain(|_, p| !p.is_zero());
    Ok(out)
}

/// A choice of representative negative field per quotient class. The
/// default lifts the class of a coordinate c to d/dc.
#[derive(Debug, Clone)]
pub struct Lifting {
    reps: BTreeMap<CoordId, VectorField>,
}

impl Lifting {
    pub fn default_for(ctx: &Context) -> Self {
        let reps = ctx
            .fiber_coordinates()
            .map(|(id, _)| (id, VectorField::coordinate_derivation(ctx, id)))
            .collect();
        Lifting { reps }
    }

    pub fn new(ctx: &Context, reps: Vec<(CoordId, VectorField)>) -> Result<Self, AlgebraError> {
        let mut lifting = Lifting::default_for(ctx);
        for (id, rep) in reps {
            lifting.reps.insert(id, rep);
        }
        lifting.validate(ctx)?;
        Ok(lifting)
    }

    /// A lifting must be a section of the quotient projection: each
    /// representative is homogeneous of the class weight and restricts to
    /// exactly its class on the zero section.
    pub fn validate(&self, ctx: &Context) -> Result<(), AlgebraError> {
        for (id, c) in ctx.fiber_coordinates() {
            let rep = self.reps.get(&id).ok_or(AlgebraError::InvalidLifting)?;
            match rep.homogeneity() {
                Homogeneity::Homogeneous(_, w) if w == -c.weight => {}
                _ => return Err(AlgebraError::InvalidLifting),
            }
            let class = class_of_field(rep)?;
            let mut expected = ClassCombination::zero();
            expected.terms.insert(id, Polynomial::one(ctx));
            if class != expected {
                return Err(AlgebraError::InvalidLifting);
            }
        }
        Ok(())
    }

    pub fn representative(&self, id: CoordId) -> &VectorField {
        &self.reps[&id]
    }

    pub fn describe(&self, ctx: &Context) -> Vec<String> {
        self.reps
            .iter()
            .map(|(id, rep)| format!("[d/d{}] -> {}", ctx.name(*id), rep))
            .collect()
    }
}

/// Bracket tables on quotient classes, keyed by ascending tuples of class
/// coordinates (repetitions allowed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LInftyStructure {
    pub ctx: Context,
    /// tables[k-1] holds the (k)-ary bracket entries.
    pub tables: Vec<BTreeMap<Vec<CoordId>, ClassCombination>>,
    /// Rendered lifting representatives, recording the chart-dependent choice.
    pub lifting: Vec<String>,
}

impl LInftyStructure {
    pub fn max_arity(&self) -> usize {
        self.tables.len()
    }

    pub fn entry(&self, tuple: &[CoordId]) -> Option<&ClassCombination> {
        self.tables.get(tuple.len().saturating_sub(1))?.get(tuple)
    }
}

impl fmt::Display for LInftyStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lifting {
            writeln!(f, "LIFTING {line}")?;
        }
        for (k, table) in self.tables.iter().enumerate() {
            for (tuple, combo) in table {
                let args: Vec<String> = tuple
                    .iter()
                    .map(|c| format!("[d/d{}]", self.ctx.name(*c)))
                    .collect();
                writeln!(
                    f,
                    "LINFTY {} ({}) = {}",
                    k + 1,
                    args.join(", "),
                    combo.render(&self.ctx)
                )?;
            }
        }
        Ok(())
    }
}

/// Ascending tuples (with repetition) of fiber coordinates of size 1..=k.
fn class_tuples(ctx: &Context, max_arity: usize) -> Vec<Vec<CoordId>> {
    let classes: Vec<CoordId> = ctx.fiber_coordinates().map(|(id, _)| id).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn recurse(
        classes: &[CoordId],
        from: usize,
        remaining: usize,
        current: &mut Vec<CoordId>,
        out: &mut Vec<Vec<CoordId>>,
    ) {
        if !current.is_empty() {
            out.push(current.clone());
        }
        if remaining == 0 {
            return;
        }
        for (i, c) in classes.iter().enumerate().skip(from) {
            current.push(*c);
            recurse(classes, i, remaining - 1, current, out);
            current.pop();
        }
    }
    recurse(&classes, 0, max_arity, &mut current, &mut out);
    out.sort_by_key(|a| (a.len(), a.clone()));
    out
}

/// Compute the bracket tables of `a` on quotient classes with the given
/// lifting: the unary entry is the class of d(rep), higher entries are
/// classes of iterated commutators seeded by [Q, rep1].
pub fn linfty_brackets(
    a: &HigherAlgebroid,
    lifting: &Lifting,
) -> Result<LInftyStructure, AlgebraError> {
    let ctx = a.context().clone();
    lifting.validate(&ctx)?;
    let max_arity = (a.degree() + 1).max(1) as usize;
    let mut tables = vec![BTreeMap::new(); max_arity];
    for tuple in class_tuples(&ctx, max_arity) {
        let args: Vec<VectorField> = tuple
            .iter()
            .map(|c| lifting.representative(*c).clone())
            .collect();
        let value = a.higher_derived_bracket(&args)?;
        tables[tuple.len() - 1].insert(tuple, class_of_field(&value)?);
    }
    Ok(LInftyStructure {
        ctx: ctx.clone(),
        tables,
        lifting: lifting.describe(&ctx),
    })
}

/// The same tables computed purely from tabulated data, without the
/// weight-one field: unary from the differential table, binary from the
/// odd-bracket table, higher by folding the commutator table.
pub fn linfty_from_tables(t: &TwoLayerStructure) -> Result<LInftyStructure, AlgebraError> {
    let ctx = t.ctx.clone();
    let degree = ctx.degree().unwrap_or(0).max(0);
    let max_arity = (degree + 1).max(1) as usize;
    let mut tables = vec![BTreeMap::new(); max_arity];
    for tuple in class_tuples(&ctx, max_arity) {
        let combo = tuple_combination(t, &tuple)?;
        tables[tuple.len() - 1].insert(tuple, class_of_combination(t, &combo)?);
    }
    Ok(LInftyStructure {
        ctx,
        tables,
        lifting: Lifting::default_for(&t.ctx).describe(&t.ctx),
    })
}

fn lifted_index(t: &TwoLayerStructure, c: CoordId) -> Result<usize, AlgebraError> {
    t.basis_index(c, &Monomial::one(t.ctx.len()))
        .ok_or_else(|| {
            AlgebraError::InconsistentTables(format!(
                "no basis entry d/d{} for the default lifting",
                t.ctx.name(c)
            ))
        })
}

/// Evaluate the nested bracket of default-lifted classes through the
/// tables only.
fn tuple_combination(
    t: &TwoLayerStructure,
    tuple: &[CoordId],
) -> Result<Combination, AlgebraError> {
    match tuple {
        [] => Err(AlgebraError::EmptyBracket),
        [c] => Ok(t.d[lifted_index(t, *c)?].clone()),
        [c1, c2, rest @ ..] => {
            let mut combo = t.bracket[lifted_index(t, *c1)?][lifted_index(t, *c2)?].clone();
            for c in rest {
                combo = t.table_commutator(&combo, lifted_index(t, *c)?)?;
            }
            Ok(combo)
        }
    }
}

/// Reconstruct the weight-one field from tabulated data.
///
/// Fiber components: for each positive-weight coordinate c and each fiber
/// monomial m of weight w(c)+1, the entry of the |m|-ary bracket at the
/// factors of m isolates the coefficient of m in the component at c; the
/// exact rational factor relating the two is recovered by running the same
/// nested bracket on a single-term candidate field. Base components are
/// read off the anchor table the same way. The reconstruction is accepted
/// only if it reproduces every input table.
pub fn recover_q(t: &TwoLayerStructure) -> Result<VectorField, AlgebraError> {
    let ctx = &t.ctx;
    // The commutator table carries no information about the field; it must
    // match the chart-determined table exactly.
    let canonical = TwoLayerStructure::canonical_commutator_table(ctx, &t.basis)?;
    if canonical != t.commutator {
        return Err(AlgebraError::InconsistentTables(
            "commutator table does not match the chart".to_string(),
        ));
    }

    let mut components: BTreeMap<CoordId, Polynomial> = BTreeMap::new();
    let mut add_term = |id: CoordId, term: Polynomial| -> Result<(), AlgebraError> {
        let entry = components
            .entry(id)
            .or_insert_with(|| Polynomial::zero(ctx));
        *entry = entry.add(&term)?;
        Ok(())
    };

    // Base components from the anchor table.
    for (i, c) in ctx.fiber_coordinates() {
        if c.weight != 1 {
            continue;
        }
        let row = &t.anchor[lifted_index(t, i)?];
        let e_i = VectorField::coordinate_derivation(ctx, i);
        for (a, table_poly) in row {
            for (chi, alpha) in table_poly.terms() {
                let candidate = merged_monomial(ctx, chi, &Monomial::coordinate(ctx.len(), i))?;
                let e = VectorField::new(
                    ctx,
                    vec![(
                        *a,
                        Polynomial::monomial(ctx, candidate.clone(), BigRational::from_integer(1.into())),
                    )],
                )?;
                let forward = e
                    .commutator(&e_i)?
                    .apply(&Polynomial::coordinate(ctx, *a))?;
                let s = coefficient_ratio(&forward, chi)?;
                add_term(
                    *a,
                    Polynomial::monomial(ctx, candidate, alpha / &s),
                )?;
            }
        }
    }

    // Fiber components from the homotopy bracket tables.
    for (c, coord) in ctx.fiber_coordinates() {
        for m in crate::twolayer::fiber_monomials_of_weight(ctx, coord.weight + 1) {
            let tuple = monomial_factors(&m);
            let combo = tuple_combination(t, &tuple)?;
            let lambda = class_of_combination(t, &combo)?.coefficient(c, ctx);
            if lambda.is_zero() {
                continue;
            }
            let args: Vec<VectorField> = tuple
                .iter()
                .map(|id| VectorField::coordinate_derivation(ctx, *id))
                .collect();
            for (chi, alpha) in lambda.terms() {
                let candidate = merged_monomial(ctx, chi, &m)?;
                let e = VectorField::new(
                    ctx,
                    vec![(
                        c,
                        Polynomial::monomial(ctx, candidate.clone(), BigRational::from_integer(1.into())),
                    )],
                )?;
                let mut nested = e.commutator(&args[0])?;
                for u in &args[1..] {
                    nested = nested.commutator(u)?;
                }
                let rho = class_of_field(&nested.negative_part())?.coefficient(c, ctx);
                let s = coefficient_ratio(&rho, chi)?;
                add_term(c, Polynomial::monomial(ctx, candidate, alpha / &s))?;
            }
        }
    }

    let q = VectorField::new(ctx, components.into_iter().collect())?;

    // Accept only a reconstruction that reproduces the input tables.
    let algebroid = HigherAlgebroid::new_unchecked(ctx, q.clone()).map_err(|e| {
        AlgebraError::InconsistentTables(format!("reconstructed field is invalid: {e}"))
    })?;
    let recomputed = TwoLayerStructure::from_algebroid(&algebroid)?;
    if &recomputed != t {
        return Err(AlgebraError::InconsistentTables(
            "tables are not reproduced by the reconstructed field".to_string(),
        ));
    }
    Ok(q)
}

/// Merge a weight-zero monomial with a fiber monomial by exponent addition
/// (their supports are disjoint, so no reordering sign arises).
fn merged_monomial(
    ctx: &Context,
    base: &Monomial,
    fiber: &Monomial,
) -> Result<Monomial, AlgebraError> {
    let exps: Vec<u32> = (0..ctx.len())
        .map(|k| base.exponent(CoordId(k)) + fiber.exponent(CoordId(k)))
        .collect();
    let m = Monomial::from_exponents(exps);
    for (id, e) in m.factors() {
        if ctx.parity(id).is_odd() && e > 1 {
            return Err(AlgebraError::InconsistentTables(
                "table entry requires an odd coordinate squared".to_string(),
            ));
        }
    }
    Ok(m)
}

/// Factors of a fiber monomial in canonical order, with multiplicity.
fn monomial_factors(m: &Monomial) -> Vec<CoordId> {
    let mut out = Vec::new();
    for (id, e) in m.factors() {
        for _ in 0..e {
            out.push(id);
        }
    }
    out
}

/// The exact rational s with `value = s * monomial`; the value must be a
/// single term at exactly that monomial.
fn coefficient_ratio(value: &Polynomial, monomial: &Monomial) -> Result<BigRational, AlgebraError> {
    let mut found: Option<BigRational> = None;
    for (m, c) in value.terms() {
        if m == monomial && found.is_none() {
            found = Some(c.clone());
        } else {
            return Err(AlgebraError::InconsistentTables(
                "unexpected cross-term while isolating a coefficient".to_string(),
            ));
        }
    }
    match found {
        Some(s) if !s.is_zero() => Ok(s),
        _ => Err(AlgebraError::InconsistentTables(
            "vanishing normalization factor while isolating a coefficient".to_string(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{GradedContext, Parity};
    use crate::expr::parse_expression;

    fn toy() -> (Context, HigherAlgebroid) {
        let ctx = GradedContext::build(&[("y", Parity::Odd, 1), ("z", Parity::Even, 2)]).unwrap();
        let q = VectorField::new(
            &ctx,
            vec![(ctx.require("y").unwrap(), parse_expression("z", &ctx).unwrap())],
        )
        .unwrap();
        let a = HigherAlgebroid::new(&ctx, q).unwrap();
        (ctx, a)
    }

    #[test]
    fn default_lifting_is_valid() {
        let (ctx, _) = toy();
        Lifting::default_for(&ctx).validate(&ctx).unwrap();
    }

    #[test]
    fn invalid_lifting_rejected() {
        let (ctx, _) = toy();
        // wrong weight: lift the z-class to d/dy
        let bad = Lifting::new(
            &ctx,
            vec![(
                ctx.require("z").unwrap(),
                VectorField::coordinate_derivation(&ctx, ctx.require("y").unwrap()),
            )],
        );
        assert!(matches!(bad, Err(AlgebraError::InvalidLifting)));
    }

    #[test]
    fn toy_linfty_tables() {
        let (ctx, a) = toy();
        let structure = linfty_brackets(&a, &Lifting::default_for(&ctx)).unwrap();
        let y = ctx.require("y").unwrap();
        let z = ctx.require("z").unwrap();
        // unary: the class of d(d/dz) = class(-d/dy) = -[d/dy]
        let unary = structure.entry(&[z]).unwrap();
        assert_eq!(unary.render(&ctx), "-[d/dy]");
        assert!(structure.entry(&[y]).unwrap().is_zero());
        // the two routes agree
        let t = TwoLayerStructure::from_algebroid(&a).unwrap();
        let via_tables = linfty_from_tables(&t).unwrap();
        assert_eq!(structure, via_tables);
    }

    #[test]
    fn recover_round_trip_toy() {
        let (_, a) = toy();
        let t = TwoLayerStructure::from_algebroid(&a).unwrap();
        assert_eq!(&recover_q(&t).unwrap(), a.q());
    }

    #[test]
    fn recover_zero_field() {
        let ctx = GradedContext::build(&[("y", Parity::Odd, 1), ("z", Parity::Even, 2)]).unwrap();
        let a = HigherAlgebroid::new(&ctx, VectorField::zero(&ctx)).unwrap();
        let t = TwoLayerStructure::from_algebroid(&a).unwrap();
        assert!(recover_q(&t).unwrap().is_zero());
    }

    #[test]
    fn recover_rejects_corrupted_tables() {
        let (ctx, a) = toy();
        let mut t = TwoLayerStructure::from_algebroid(&a).unwrap();
        // corrupt the differential table entry for d/dz
        let idx = t.basis_index(ctx.require("z").unwrap(), &Monomial::one(ctx.len())).unwrap();
        let target = t.basis_index(ctx.require("y").unwrap(), &Monomial::one(ctx.len())).unwrap();
        t.d[idx]
            .insert(target, parse_expression("5", &ctx).unwrap())
            .unwrap();
        assert!(matches!(
            recover_q(&t),
            Err(AlgebraError::InconsistentTables(_))
        ));
    }
}
