//! Tabulated structure of the negative-weight fields: the canonical basis,
//! the commutator / differential / odd-bracket / anchor tables of a chart
//! with a weight-one field, and their text and JSON renderings.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, One};
use serde::{Deserialize, Serialize};

use crate::context::{CoordId, Context, Coordinate, GradedContext};
use crate::derived::HigherAlgebroid;
use crate::error::AlgebraError;
use crate::field::VectorField;
use crate::monomial::Monomial;
use crate::poly::Polynomial;

/// A basis element m * d/dc of the negative-weight fields, where c has
/// positive weight and the monomial m uses positive-weight coordinates of
/// total weight strictly below the weight of c.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisField {
    pub monomial: Monomial,
    pub coordinate: CoordId,
}

impl BasisField {
    pub fn weight(&self, ctx: &GradedContext) -> i64 {
        self.monomial.weight(ctx) - ctx.weight(self.coordinate)
    }

    pub fn parity(&self, ctx: &GradedContext) -> crate::context::Parity {
        self.monomial.parity(ctx).combine(ctx.parity(self.coordinate))
    }

    pub fn to_field(&self, ctx: &Context) -> VectorField {
        VectorField::new(
            ctx,
            vec![(
                self.coordinate,
                Polynomial::monomial(ctx, self.monomial.clone(), BigRational::one()),
            )],
        )
        .expect("basis field construction")
    }

    pub fn label(&self, ctx: &Context) -> String {
        let d = format!("d/d{}", ctx.name(self.coordinate));
        if self.monomial.is_one() {
            d
        } else {
            let m = Polynomial::monomial(ctx, self.monomial.clone(), BigRational::one());
            format!("{m}*{d}")
        }
    }
}

/// All monomials in the positive-weight coordinates of exact total
/// weight `w`, in canonical order.
pub fn fiber_monomials_of_weight(ctx: &Context, w: i64) -> Vec<Monomial> {
    let fiber: Vec<(CoordId, i64, bool)> = ctx
        .fiber_coordinates()
        .map(|(id, c)| (id, c.weight, c.parity.is_odd()))
        .collect();
    let mut out = Vec::new();
    let mut exponents = vec![0u32; ctx.len()];
    fn recurse(
        fiber: &[(CoordId, i64, bool)],
        pos: usize,
        remaining: i64,
        exponents: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        if remaining == 0 {
            out.push(Monomial::from_exponents(exponents.clone()));
            return;
        }
        if pos >= fiber.len() || remaining < 0 {
            return;
        }
        let (id, weight, odd) = fiber[pos];
        let max_e = if odd {
            1
        } else {
            (remaining / weight) as u32
        };
        for e in 0..=max_e {
            exponents[id.0] = e;
            recurse(fiber, pos + 1, remaining - weight * e as i64, exponents, out);
        }
        exponents[id.0] = 0;
    }
    recurse(&fiber, 0, w, &mut exponents, &mut out);
    out.sort();
    out
}

/// The canonical basis of the negative-weight fields as a module over the
/// weight-zero functions, ordered by descending field weight (-1 first),
/// then coordinate declaration order, then monomial order.
pub fn enumerate_basis(ctx: &Context) -> Vec<BasisField> {
    let mut basis = Vec::new();
    for (id, c) in ctx.fiber_coordinates() {
        for w in 0..c.weight {
            for m in fiber_monomials_of_weight(ctx, w) {
                basis.push(BasisField {
                    monomial: m,
                    coordinate: id,
                });
            }
        }
    }
    basis.sort_by(|a, b| {
        // weight -1 first, then declaration order of the target coordinate,
        // then monomials with earlier-declared factors first
        (-a.weight(ctx), a.coordinate)
            .cmp(&(-b.weight(ctx), b.coordinate))
            .then_with(|| b.monomial.cmp(&a.monomial))
    });
    basis
}

/// A finite combination of basis fields with weight-zero polynomial
/// coefficients (multiplying from the left).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Combination {
    pub terms: BTreeMap<usize, Polynomial>,
}

impl Combination {
    pub fn zero() -> Self {
        Combination::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn insert(&mut self, idx: usize, coeff: Polynomial) -> Result<(), AlgebraError> {
        if coeff.is_zero() {
            return Ok(());
        }
        match self.terms.remove(&idx) {
            None => {
                self.terms.insert(idx, coeff);
            }
            Some(prev) => {
                let sum = prev.add(&coeff)?;
                if !sum.is_zero() {
                    self.terms.insert(idx, sum);
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Combination) -> Result<Combination, AlgebraError> {
        let mut out = self.clone();
        for (idx, coeff) in &rhs.terms {
            out.insert(*idx, coeff.clone())?;
        }
        Ok(out)
    }

    /// Left-multiply every coefficient by a weight-zero polynomial.
    pub fn mul_left(&self, f: &Polynomial) -> Result<Combination, AlgebraError> {
        let mut out = Combination::zero();
        for (idx, coeff) in &self.terms {
            out.insert(*idx, f.mul(coeff)?)?;
        }
        Ok(out)
    }

    pub fn to_field(&self, ctx: &Context, basis: &[BasisField]) -> Result<VectorField, AlgebraError> {
        let mut acc = VectorField::zero(ctx);
        for (idx, coeff) in &self.terms {
            acc = acc.add(&basis[*idx].to_field(ctx).mul_left(coeff)?)?;
        }
        Ok(acc)
    }

    pub fn render(&self, ctx: &Context, basis: &[BasisField]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let pieces = self
            .terms
            .iter()
            .map(|(idx, coeff)| render_scaled(coeff, &basis[*idx].label(ctx)))
            .collect();
        join_signed(pieces)
    }
}

/// Render `coeff * label` with trivial coefficients elided.
fn render_scaled(coeff: &Polynomial, label: &str) -> String {
    let rendered = coeff.to_string();
    if rendered == "1" {
        label.to_string()
    } else if rendered == "-1" {
        format!("-{label}")
    } else if coeff.num_terms() == 1 && !rendered.contains(' ') {
        format!("{rendered}*{label}")
    } else {
        format!("({rendered})*{label}")
    }
}

/// Join signed pieces into `a - b + c` form.
fn join_signed(pieces: Vec<String>) -> String {
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

/// Express a negative-weight field in the canonical basis. Every monomial
/// of every component splits as (weight-zero part) * (fiber part); the
/// Koszul sign of that reordering is delegated to the monomial product.
pub fn decompose_in_basis(
    x: &VectorField,
    ctx: &Context,
    basis: &[BasisField],
) -> Result<Combination, AlgebraError> {
    let mut index: BTreeMap<(Vec<u32>, CoordId), usize> = BTreeMap::new();
    for (i, b) in basis.iter().enumerate() {
        let exps: Vec<u32> = (0..ctx.len())
            .map(|k| b.monomial.exponent(CoordId(k)))
            .collect();
        index.insert((exps, b.coordinate), i);
    }
    let mut combo = Combination::zero();
    for (id, component) in x.components() {
        for (m, alpha) in component.terms() {
            let (fiber, base) = m.split_fiber(ctx);
            let exps: Vec<u32> = (0..ctx.len()).map(|k| fiber.exponent(CoordId(k))).collect();
            let idx = *index
                .get(&(exps, id))
                .ok_or_else(|| AlgebraError::InconsistentTables(format!(
                    "field term outside the canonical basis at coordinate {}",
                    ctx.name(id)
                )))?;
            // alpha * M = alpha * sign * (base * fiber), so the basis
            // coefficient picks up the reordering sign.
            let (_, sign) = base.mul(&fiber, ctx).expect("disjoint factors");
            let mut c = alpha.clone();
            if sign < 0 {
                c = -c;
            }
            combo.insert(idx, Polynomial::monomial(ctx, base, c))?;
        }
    }
    Ok(combo)
}

/// Tabulated commutator, differential, odd bracket and anchor on the
/// canonical basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoLayerStructure {
    pub ctx: Context,
    pub basis: Vec<BasisField>,
    pub commutator: Vec<Vec<Combination>>,
    pub d: Vec<Combination>,
    pub bracket: Vec<Vec<Combination>>,
    /// Anchor of each basis field as components on the base coordinates.
    pub anchor: Vec<BTreeMap<CoordId, Polynomial>>,
}

impl TwoLayerStructure {
    /// Evaluate the defining operations of `a` on the canonical basis.
    pub fn from_algebroid(a: &HigherAlgebroid) -> Result<Self, AlgebraError> {
        let ctx = a.context().clone();
        let basis = enumerate_basis(&ctx);
        let fields: Vec<VectorField> = basis.iter().map(|b| b.to_field(&ctx)).collect();
        let n = basis.len();
        let mut commutator = vec![vec![Combination::zero(); n]; n];
        let mut bracket = vec![vec![Combination::zero(); n]; n];
        let mut d = vec![Combination::zero(); n];
        let mut anchor = Vec::with_capacity(n);
        for i in 0..n {
            d[i] = decompose_in_basis(&a.derived_d(&fields[i])?, &ctx, &basis)?;
            let af = a.anchor_field(&fields[i])?;
            anchor.push(af.components().map(|(c, p)| (c, p.clone())).collect());
            for j in 0..n {
                commutator[i][j] =
                    decompose_in_basis(&fields[i].commutator(&fields[j])?, &ctx, &basis)?;
                bracket[i][j] =
                    decompose_in_basis(&a.derived_bracket2(&fields[i], &fields[j])?, &ctx, &basis)?;
            }
        }
        Ok(TwoLayerStructure {
            ctx,
            basis,
            commutator,
            d,
            bracket,
            anchor,
        })
    }

    pub fn basis_index(&self, coordinate: CoordId, monomial: &Monomial) -> Option<usize> {
        self.basis
            .iter()
            .position(|b| b.coordinate == coordinate && &b.monomial == monomial)
    }

    /// Commutator of a combination with a basis field, evaluated through
    /// the tables using linearity of the bracket over weight-zero
    /// coefficients in the first slot.
    pub fn table_commutator(
        &self,
        lhs: &Combination,
        rhs: usize,
    ) -> Result<Combination, AlgebraError> {
        let mut out = Combination::zero();
        for (idx, coeff) in &lhs.terms {
            out = out.add(&self.commutator[*idx][rhs].mul_left(coeff)?)?;
        }
        Ok(out)
    }

    /// The commutator table is independent of the weight-one field; it can
    /// be recomputed from the chart alone for consistency checking.
    pub fn canonical_commutator_table(
        ctx: &Context,
        basis: &[BasisField],
    ) -> Result<Vec<Vec<Combination>>, AlgebraError> {
        let fields: Vec<VectorField> = basis.iter().map(|b| b.to_field(ctx)).collect();
        let n = basis.len();
        let mut table = vec![vec![Combination::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                table[i][j] = decompose_in_basis(&fields[i].commutator(&fields[j])?, ctx, basis)?;
            }
        }
        Ok(table)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&TablesDoc::from(self)).expect("tables serialization")
    }

    pub fn from_json(text: &str) -> Result<Self, AlgebraError> {
        let doc: TablesDoc = serde_json::from_str(text)
            .map_err(|e| AlgebraError::InconsistentTables(format!("malformed tables file: {e}")))?;
        doc.try_into()
    }
}

impl fmt::Display for TwoLayerStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (_, c) in self.ctx.coordinates() {
            writeln!(f, "COORD {} parity={} weight={}", c.name, c.parity, c.weight)?;
        }
        for (i, b) in self.basis.iter().enumerate() {
            writeln!(
                f,
                "BASIS e{} = {} (weight {})",
                i,
                b.label(&self.ctx),
                b.weight(&self.ctx)
            )?;
        }
        for (i, b) in self.basis.iter().enumerate() {
            for (j, c) in self.basis.iter().enumerate() {
                writeln!(
                    f,
                    "COMMUTATOR [{}, {}] = {}",
                    b.label(&self.ctx),
                    c.label(&self.ctx),
                    self.commutator[i][j].render(&self.ctx, &self.basis)
                )?;
            }
        }
        for (i, b) in self.basis.iter().enumerate() {
            writeln!(
                f,
                "D {} = {}",
                b.label(&self.ctx),
                self.d[i].render(&self.ctx, &self.basis)
            )?;
        }
        for (i, b) in self.basis.iter().enumerate() {
            for (j, c) in self.basis.iter().enumerate() {
                writeln!(
                    f,
                    "BRACKET {{{}, {}}} = {}",
                    b.label(&self.ctx),
                    c.label(&self.ctx),
                    self.bracket[i][j].render(&self.ctx, &self.basis)
                )?;
            }
        }
        for (i, b) in self.basis.iter().enumerate() {
            let rendered = if self.anchor[i].is_empty() {
                "0".to_string()
            } else {
                join_signed(
                    self.anchor[i]
                        .iter()
                        .map(|(c, p)| render_scaled(p, &format!("d/d{}", self.ctx.name(*c))))
                        .collect(),
                )
            };
            writeln!(f, "ANCHOR a({}) = {}", b.label(&self.ctx), rendered)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TablesDoc {
    context: Vec<Coordinate>,
    basis: Vec<BasisEntry>,
    commutator: Vec<Vec<BTreeMap<usize, String>>>,
    d: Vec<BTreeMap<usize, String>>,
    bracket: Vec<Vec<BTreeMap<usize, String>>>,
    anchor: Vec<BTreeMap<String, String>>,
}

#[derive(Serialize, Deserialize)]
struct BasisEntry {
    monomial: String,
    coordinate: String,
}

impl From<&TwoLayerStructure> for TablesDoc {
    fn from(t: &TwoLayerStructure) -> Self {
        let ctx = &t.ctx;
        let render_combo = |c: &Combination| -> BTreeMap<usize, String> {
            c.terms
                .iter()
                .map(|(idx, p)| (*idx, p.to_string()))
                .collect()
        };
        TablesDoc {
            context: ctx.coordinates().map(|(_, c)| c.clone()).collect(),
            basis: t
                .basis
                .iter()
                .map(|b| BasisEntry {
                    monomial: Polynomial::monomial(ctx, b.monomial.clone(), BigRational::one())
                        .to_string(),
                    coordinate: ctx.name(b.coordinate).to_string(),
                })
                .collect(),
            commutator: t
                .commutator
                .iter()
                .map(|row| row.iter().map(render_combo).collect())
                .collect(),
            d: t.d.iter().map(render_combo).collect(),
            bracket: t
                .bracket
                .iter()
                .map(|row| row.iter().map(render_combo).collect())
                .collect(),
            anchor: t
                .anchor
                .iter()
                .map(|entry| {
                    entry
                        .iter()
                        .map(|(c, p)| (ctx.name(*c).to_string(), p.to_string()))
                        .collect()
                })
                .collect(),
        }
    }
}

impl TryFrom<TablesDoc> for TwoLayerStructure {
    type Error = AlgebraError;

    fn try_from(doc: TablesDoc) -> Result<Self, AlgebraError> {
        let ctx = GradedContext::new(doc.context)?;
        let basis = enumerate_basis(&ctx);
        let bad = |msg: String| AlgebraError::InconsistentTables(msg);
        if doc.basis.len() != basis.len() {
            return Err(bad(format!(
                "basis size {} does not match the canonical basis ({})",
                doc.basis.len(),
                basis.len()
            )));
        }
        for (entry, b) in doc.basis.iter().zip(&basis) {
            let expected =
                Polynomial::monomial(&ctx, b.monomial.clone(), BigRational::one()).to_string();
            if entry.monomial != expected || entry.coordinate != ctx.name(b.coordinate) {
                return Err(bad(format!(
                    "basis entry `{}*d/d{}` does not match the canonical enumeration",
                    entry.monomial, entry.coordinate
                )));
            }
        }
        let n = basis.len();
        let parse_poly = |s: &str| -> Result<Polynomial, AlgebraError> {
            crate::expr::parse_expression(s, &ctx)
                .map_err(|e| bad(format!("bad coefficient `{s}`: {e}")))
        };
        let parse_combo = |m: &BTreeMap<usize, String>| -> Result<Combination, AlgebraError> {
            let mut combo = Combination::zero();
            for (idx, s) in m {
                if *idx >= n {
                    return Err(bad(format!("basis index {idx} out of range")));
                }
                combo.insert(*idx, parse_poly(s)?)?;
            }
            Ok(combo)
        };
        let grid = |rows: &Vec<Vec<BTreeMap<usize, String>>>,
                    what: &str|
         -> Result<Vec<Vec<Combination>>, AlgebraError> {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(bad(format!("{what} table has the wrong shape")));
            }
            rows.iter()
                .map(|r| r.iter().map(&parse_combo).collect())
                .collect()
        };
        let commutator = grid(&doc.commutator, "commutator")?;
        let bracket = grid(&doc.bracket, "bracket")?;
        if doc.d.len() != n || doc.anchor.len() != n {
            return Err(bad("differential or anchor table has the wrong shape".into()));
        }
        let d = doc
            .d
            .iter()
            .map(&parse_combo)
            .collect::<Result<Vec<_>, _>>()?;
        let mut anchor = Vec::with_capacity(n);
        for entry in &doc.anchor {
            let mut m = BTreeMap::new();
            for (name, s) in entry {
                let id = ctx.require(name)?;
                if ctx.weight(id) != 0 {
                    return Err(bad(format!("anchor component at non-base coordinate {name}")));
                }
                m.insert(id, parse_poly(s)?);
            }
            anchor.push(m);
        }
        Ok(TwoLayerStructure {
            ctx,
            basis,
            commutator,
            d,
            bracket,
            anchor,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{GradedContext, Parity};
    use crate::expr::parse_expression;

    fn model_ctx() -> Context {
        GradedContext::build(&[
            ("y1", Parity::Odd, 1),
            ("y2", Parity::Odd, 1),
            ("z1", Parity::Even, 2),
        ])
        .unwrap()
    }

    #[test]
    fn basis_enumeration_matches_model() {
        let ctx = model_ctx();
        let basis = enumerate_basis(&ctx);
        let labels: Vec<String> = basis.iter().map(|b| b.label(&ctx)).collect();
        assert_eq!(
            labels,
            vec!["d/dy1", "d/dy2", "y1*d/dz1", "y2*d/dz1", "d/dz1"]
        );
        assert_eq!(basis[0].weight(&ctx), -1);
        assert_eq!(basis[4].weight(&ctx), -2);
    }

    #[test]
    fn decompose_round_trips() {
        let ctx = model_ctx();
        let basis = enumerate_basis(&ctx);
        let x = VectorField::new(
            &ctx,
            vec![
                (
                    ctx.require("z1").unwrap(),
                    parse_expression("3*y1 - 1/2*y2", &ctx).unwrap(),
                ),
                (ctx.require("y2").unwrap(), parse_expression("7", &ctx).unwrap()),
            ],
        )
        .unwrap();
        let combo = decompose_in_basis(&x, &ctx, &basis).unwrap();
        assert_eq!(combo.to_field(&ctx, &basis).unwrap(), x);
    }

    #[test]
    fn commutator_table_matches_direct_computation() {
        // [e_i, y^j d/dz] = delta_i^j d/dz and all other pairs vanish
        let ctx = model_ctx();
        let basis = enumerate_basis(&ctx);
        let table = TwoLayerStructure::canonical_commutator_table(&ctx, &basis).unwrap();
        // e0 = d/dy1, e2 = y1 d/dz1, e4 = d/dz1; both fields are odd, so
        // the bracket of the pair is symmetric
        assert_eq!(table[0][2].render(&ctx, &basis), "d/dz1");
        assert_eq!(table[2][0].render(&ctx, &basis), "d/dz1");
        assert_eq!(table[0][3].render(&ctx, &basis), "0");
        assert_eq!(table[0][1].render(&ctx, &basis), "0");
        assert_eq!(table[4][4].render(&ctx, &basis), "0");
    }

    #[test]
    fn tables_json_round_trip() {
        let ctx = model_ctx();
        let q = VectorField::new(
            &ctx,
            vec![(ctx.require("y1").unwrap(), parse_expression("z1", &ctx).unwrap())],
        )
        .unwrap();
        let a = HigherAlgebroid::new(&ctx, q).unwrap();
        let t = TwoLayerStructure::from_algebroid(&a).unwrap();
        let json = t.to_json();
        let back = TwoLayerStructure::from_json(&json).unwrap();
        assert_eq!(t, back);
    }
}
