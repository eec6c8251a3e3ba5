//! Deterministic sample generation for the identity suite: exhaustive
//! tuples over the canonical basis and seeded random tuples.

use num::{BigInt, BigRational, One};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::context::{Context, Parity};
use crate::derived::{HigherAlgebroid, SampleTuple};
use crate::error::AlgebraError;
use crate::field::VectorField;
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::twolayer::enumerate_basis;

/// Weight-zero monomials of total degree at most two, split by parity.
fn base_monomial_pool(ctx: &Context) -> (Vec<Monomial>, Vec<Monomial>) {
    let base: Vec<_> = ctx.base_coordinates().map(|(id, c)| (id, c.parity)).collect();
    let mut even = vec![Monomial::one(ctx.len())];
    let mut odd = Vec::new();
    let mut push = |m: Monomial, p: Parity| match p {
        Parity::Even => even.push(m),
        Parity::Odd => odd.push(m),
    };
    for (i, (id_i, p_i)) in base.iter().enumerate() {
        push(Monomial::coordinate(ctx.len(), *id_i), *p_i);
        for (id_j, p_j) in base.iter().skip(i) {
            if id_i == id_j && p_i.is_odd() {
                continue;
            }
            let (m, _) = Monomial::coordinate(ctx.len(), *id_i)
                .mul(&Monomial::coordinate(ctx.len(), *id_j), ctx)
                .expect("no odd square here");
            push(m, p_i.combine(*p_j));
        }
    }
    (even, odd)
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let numerators = [-3i64, -2, -1, 1, 2, 3];
    let denominators = [1i64, 2, 3];
    BigRational::new(
        BigInt::from(numerators[rng.gen_range(0..numerators.len())]),
        BigInt::from(denominators[rng.gen_range(0..denominators.len())]),
    )
}

/// A random parity-homogeneous weight-zero polynomial. Returns `None` when
/// the requested parity has no monomials over this chart.
fn random_weight_zero(
    ctx: &Context,
    rng: &mut ChaCha8Rng,
    parity: Parity,
) -> Option<Polynomial> {
    let (even, odd) = base_monomial_pool(ctx);
    let pool = match parity {
        Parity::Even => even,
        Parity::Odd => odd,
    };
    if pool.is_empty() {
        return None;
    }
    let mut acc = Polynomial::zero(ctx);
    let picks = 1 + rng.gen_range(0..2);
    for _ in 0..picks {
        let m = pool[rng.gen_range(0..pool.len())].clone();
        acc = acc
            .add(&Polynomial::monomial(ctx, m, random_rational(rng)))
            .expect("same context");
    }
    if acc.is_zero() {
        Some(Polynomial::monomial(
            ctx,
            pool[0].clone(),
            BigRational::one(),
        ))
    } else {
        Some(acc)
    }
}

/// A random parity- and weight-homogeneous field of negative weight,
/// built as a short combination of canonical basis fields with random
/// weight-zero coefficients.
fn random_negative_field(
    ctx: &Context,
    rng: &mut ChaCha8Rng,
) -> VectorField {
    let basis = enumerate_basis(ctx);
    assert!(!basis.is_empty(), "chart has no negative-weight fields");
    for _ in 0..64 {
        let pivot = &basis[rng.gen_range(0..basis.len())];
        let weight = pivot.weight(ctx);
        let parity = if rng.gen_bool(0.5) {
            pivot.parity(ctx)
        } else {
            pivot.parity(ctx).flip()
        };
        let candidates: Vec<_> = basis
            .iter()
            .filter(|b| b.weight(ctx) == weight)
            .collect();
        let mut acc = VectorField::zero(ctx);
        let picks = 1 + rng.gen_range(0..2);
        for _ in 0..picks {
            let b = candidates[rng.gen_range(0..candidates.len())];
            let coeff_parity = parity.combine(b.parity(ctx));
            let Some(coeff) = random_weight_zero(ctx, rng, coeff_parity) else {
                continue;
            };
            acc = acc
                .add(&b.to_field(ctx).mul_left(&coeff).expect("same context"))
                .expect("same context");
        }
        if !acc.is_zero() {
            return acc;
        }
    }
    basis[0].to_field(ctx)
}

fn random_function(ctx: &Context, rng: &mut ChaCha8Rng) -> Polynomial {
    let parity = if rng.gen_bool(0.3) {
        Parity::Odd
    } else {
        Parity::Even
    };
    random_weight_zero(ctx, rng, parity)
        .or_else(|| random_weight_zero(ctx, rng, Parity::Even))
        .unwrap_or_else(|| Polynomial::one(ctx))
}

/// Seeded random sample tuples for the identity suite.
pub fn random_tuples(
    a: &HigherAlgebroid,
    seed: u64,
    count: usize,
) -> Result<Vec<SampleTuple>, AlgebraError> {
    let ctx = a.context();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(SampleTuple {
            u: random_negative_field(ctx, &mut rng),
            v: random_negative_field(ctx, &mut rng),
            w: random_negative_field(ctx, &mut rng),
            f: random_function(ctx, &mut rng),
            g: random_function(ctx, &mut rng),
        });
    }
    Ok(out)
}

/// Exhaustive field triples over the canonical basis, with functions
/// cycling through 1 and the base coordinates.
pub fn basis_tuples(a: &HigherAlgebroid) -> Result<Vec<SampleTuple>, AlgebraError> {
    let ctx = a.context();
    let basis = enumerate_basis(ctx);
    let fields: Vec<VectorField> = basis.iter().map(|b| b.to_field(ctx)).collect();
    let mut functions = vec![Polynomial::one(ctx)];
    for (id, _) in ctx.base_coordinates() {
        functions.push(Polynomial::coordinate(ctx, id));
    }
    let mut out = Vec::new();
    let mut pick = 0usize;
    for u in &fields {
        for v in &fields {
            for w in &fields {
                let f = functions[pick % functions.len()].clone();
                let g = functions[(pick / functions.len()) % functions.len()].clone();
                pick += 1;
                out.push(SampleTuple {
                    u: u.clone(),
                    v: v.clone(),
                    w: w.clone(),
                    f,
                    g,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::GradedContext;
    use crate::expr::parse_expression;
    use crate::poly::Homogeneity;

    fn mixed_ctx() -> (Context, HigherAlgebroid) {
        let ctx = GradedContext::build(&[
            ("x", Parity::Even, 0),
            ("th", Parity::Odd, 0),
            ("y", Parity::Odd, 1),
            ("z", Parity::Even, 2),
        ])
        .unwrap();
        let q = VectorField::new(
            &ctx,
            vec![(
                ctx.require("y").unwrap(),
                parse_expression("z", &ctx).unwrap(),
            )],
        )
        .unwrap();
        let a = HigherAlgebroid::new(&ctx, q).unwrap();
        (ctx, a)
    }

    #[test]
    fn random_fields_are_homogeneous_and_negative() {
        let (_, a) = mixed_ctx();
        let tuples = random_tuples(&a, 7, 40).unwrap();
        assert_eq!(tuples.len(), 40);
        for t in &tuples {
            for field in [&t.u, &t.v, &t.w] {
                match field.homogeneity() {
                    Homogeneity::Homogeneous(_, w) => assert!(w < 0),
                    other => panic!("expected homogeneous sample, got {other:?}"),
                }
            }
            assert!(t.f.parity().is_some());
            assert!(t.g.parity().is_some());
        }
    }

    #[test]
    fn seeding_is_deterministic() {
        let (_, a) = mixed_ctx();
        let first = random_tuples(&a, 42, 10).unwrap();
        let second = random_tuples(&a, 42, 10).unwrap();
        for (s, t) in first.iter().zip(&second) {
            assert_eq!(s.u, t.u);
            assert_eq!(s.f, t.f);
        }
        let other = random_tuples(&a, 43, 10).unwrap();
        assert!(first.iter().zip(&other).any(|(s, t)| s.u != t.u || s.f != t.f));
    }

    #[test]
    fn basis_tuples_cover_all_triples() {
        let (ctx, a) = mixed_ctx();
        let n = enumerate_basis(&ctx).len();
        let tuples = basis_tuples(&a).unwrap();
        assert_eq!(tuples.len(), n * n * n);
    }

    #[test]
    fn odd_functions_appear_when_odd_scalars_exist() {
        let (_, a) = mixed_ctx();
        let tuples = random_tuples(&a, 1, 60).unwrap();
        assert!(tuples
            .iter()
            .any(|t| t.f.parity() == Some(Parity::Odd) && !t.f.is_zero()));
    }
}
