//! Example charts used across the test suites, the benchmarks and the
//! command-line documentation. Each builder returns a named chart with a
//! weight-one field; charts marked "broken" carry fields that do not
//! square to zero and are built without the homological check.

use crate::context::{Context, GradedContext, Parity};
use crate::derived::HigherAlgebroid;
use crate::error::AlgebraError;
use crate::expr::parse_expression;
use crate::field::{CoordinateChange, VectorField};
use crate::poly::SubstitutionMap;

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub algebroid: HigherAlgebroid,
}

impl Fixture {
    pub fn context(&self) -> &Context {
        self.algebroid.context()
    }
}

fn build_field(ctx: &Context, components: &[(&str, &str)]) -> VectorField {
    VectorField::new(
        ctx,
        components
            .iter()
            .map(|(c, e)| {
                (
                    ctx.require(c).expect("fixture coordinate"),
                    parse_expression(e, ctx).expect("fixture expression"),
                )
            })
            .collect(),
    )
    .expect("fixture field")
}

fn checked(
    name: &'static str,
    coords: &[(&str, Parity, i64)],
    components: &[(&str, &str)],
) -> Fixture {
    let ctx = GradedContext::build(coords).expect("fixture context");
    let q = build_field(&ctx, components);
    Fixture {
        name,
        algebroid: HigherAlgebroid::new(&ctx, q).expect("fixture must be homological"),
    }
}

fn broken(
    name: &'static str,
    coords: &[(&str, Parity, i64)],
    components: &[(&str, &str)],
) -> Fixture {
    let ctx = GradedContext::build(coords).expect("fixture context");
    let q = build_field(&ctx, components);
    Fixture {
        name,
        algebroid: HigherAlgebroid::new_unchecked(&ctx, q).expect("fixture shape"),
    }
}

/// One even base coordinate with its odd differential: Q = xi d/dx.
pub fn tangent_line() -> Fixture {
    checked(
        "tangent_line",
        &[("x", Parity::Even, 0), ("xi", Parity::Odd, 1)],
        &[("x", "xi")],
    )
}

/// Base-dependent anchor on one generator: Q = x xi d/dx.
pub fn action_line() -> Fixture {
    checked(
        "action_line",
        &[("x", Parity::Even, 0), ("xi", Parity::Odd, 1)],
        &[("x", "x*xi")],
    )
}

/// Two odd generators with one symbolic structure constant:
/// Q = c xi1 xi2 d/dxi1.
pub fn nonabelian_pair() -> Fixture {
    checked(
        "nonabelian_pair",
        &[
            ("c", Parity::Even, 0),
            ("xi1", Parity::Odd, 1),
            ("xi2", Parity::Odd, 1),
        ],
        &[("xi1", "c*xi1*xi2")],
    )
}

/// Two odd generators with the zero field.
pub fn abelian_pair() -> Fixture {
    checked(
        "abelian_pair",
        &[("xi1", Parity::Odd, 1), ("xi2", Parity::Odd, 1)],
        &[],
    )
}

/// Three odd generators with the cyclic structure constants.
pub fn cyclic_triple() -> Fixture {
    checked(
        "cyclic_triple",
        &[
            ("xi1", Parity::Odd, 1),
            ("xi2", Parity::Odd, 1),
            ("xi3", Parity::Odd, 1),
        ],
        &[
            ("xi1", "xi2*xi3"),
            ("xi2", "xi3*xi1"),
            ("xi3", "xi1*xi2"),
        ],
    )
}

/// Three odd generators with constants that violate the Jacobi identity;
/// the field does not square to zero.
pub fn corrupted_triple() -> Fixture {
    broken(
        "corrupted_triple",
        &[
            ("xi1", Parity::Odd, 1),
            ("xi2", Parity::Odd, 1),
            ("xi3", Parity::Odd, 1),
        ],
        &[("xi1", "xi2*xi3 + xi1*xi3"), ("xi3", "xi1*xi2")],
    )
}

/// One odd weight-1 and one even weight-2 coordinate: Q = z d/dy.
pub fn dg_pair() -> Fixture {
    checked(
        "dg_pair",
        &[("y", Parity::Odd, 1), ("z", Parity::Even, 2)],
        &[("y", "z")],
    )
}

/// Same chart as `dg_pair` with a field that does not square to zero.
pub fn broken_dg_pair() -> Fixture {
    broken(
        "broken_dg_pair",
        &[("y", Parity::Odd, 1), ("z", Parity::Even, 2)],
        &[("y", "z"), ("z", "y*z")],
    )
}

/// Degree-2 model on two odd weight-1 and one even weight-2 coordinate
/// with two free even scalars; the field squares to zero identically in
/// the scalars:
/// Q = (c z1 + a y1 y2) d/dy1 - a y2 z1 d/dz1.
pub fn model_symbolic() -> Fixture {
    checked(
        "model_symbolic",
        &[
            ("a", Parity::Even, 0),
            ("c", Parity::Even, 0),
            ("y1", Parity::Odd, 1),
            ("y2", Parity::Odd, 1),
            ("z1", Parity::Even, 2),
        ],
        &[("y1", "c*z1 + a*y1*y2"), ("z1", "-a*y2*z1")],
    )
}

/// The general odd weight-one field on three odd weight-1 coordinates and
/// one even weight-2 coordinate, with every coefficient a free even
/// scalar. Not homological for generic coefficients; used for table and
/// reconstruction work.
pub fn model_general() -> Fixture {
    let mut coords: Vec<(&str, Parity, i64)> = vec![
        ("p1", Parity::Even, 0),
        ("p2", Parity::Even, 0),
        ("p3", Parity::Even, 0),
        ("q121", Parity::Even, 0),
        ("q131", Parity::Even, 0),
        ("q132", Parity::Even, 0),
        ("q221", Parity::Even, 0),
        ("q231", Parity::Even, 0),
        ("q232", Parity::Even, 0),
        ("q321", Parity::Even, 0),
        ("q331", Parity::Even, 0),
        ("q332", Parity::Even, 0),
        ("m1", Parity::Even, 0),
        ("m2", Parity::Even, 0),
        ("m3", Parity::Even, 0),
        ("r321", Parity::Even, 0),
    ];
    coords.extend([
        ("y1", Parity::Odd, 1),
        ("y2", Parity::Odd, 1),
        ("y3", Parity::Odd, 1),
        ("z1", Parity::Even, 2),
    ]);
    let ctx = GradedContext::build(&coords).expect("fixture context");
    let q = build_field(
        &ctx,
        &[
            ("y1", "p1*z1 + q121*y1*y2 + q131*y1*y3 + q132*y2*y3"),
            ("y2", "p2*z1 + q221*y1*y2 + q231*y1*y3 + q232*y2*y3"),
            ("y3", "p3*z1 + q321*y1*y2 + q331*y1*y3 + q332*y2*y3"),
            ("z1", "m1*y1*z1 + m2*y2*z1 + m3*y3*z1 + r321*y1*y2*y3"),
        ],
    );
    Fixture {
        name: "model_general",
        algebroid: HigherAlgebroid::new_unchecked(&ctx, q).expect("fixture shape"),
    }
}

/// Degree-2 chart with a base coordinate, a nonzero anchor, a nonzero
/// generator bracket and a nonzero differential:
/// Q = xi3 d/dx + xi1 xi2 d/dxi1 + z d/dy.
pub fn mixed_degree2() -> Fixture {
    checked(
        "mixed_degree2",
        &[
            ("x", Parity::Even, 0),
            ("xi1", Parity::Odd, 1),
            ("xi2", Parity::Odd, 1),
            ("xi3", Parity::Odd, 1),
            ("y", Parity::Odd, 1),
            ("z", Parity::Even, 2),
        ],
        &[("x", "xi3"), ("xi1", "xi1*xi2"), ("y", "z")],
    )
}

/// The homological fixtures exercised by the identity suite.
pub fn standard_fixtures() -> Vec<Fixture> {
    vec![
        tangent_line(),
        action_line(),
        nonabelian_pair(),
        abelian_pair(),
        cyclic_triple(),
        dg_pair(),
        model_symbolic(),
        mixed_degree2(),
    ]
}

/// A symbolic weight-preserving change on the chart of `model_general`'s
/// geometric coordinates (three odd weight-1, one even weight-2), with
/// free even scalars for the transition coefficients and for a formal
/// inverse. Returns the change whose pushforward rewrites fields given on
/// the primed chart in the unprimed one.
pub fn symbolic_change() -> Result<CoordinateChange, AlgebraError> {
    let scalars: Vec<(&str, Parity, i64)> = vec![
        // t<i><j> stands for the coefficient of the primed y_j in y_i
        ("t11", Parity::Even, 0),
        ("t12", Parity::Even, 0),
        ("t13", Parity::Even, 0),
        ("t21", Parity::Even, 0),
        ("t22", Parity::Even, 0),
        ("t23", Parity::Even, 0),
        ("t31", Parity::Even, 0),
        ("t32", Parity::Even, 0),
        ("t33", Parity::Even, 0),
        ("tz", Parity::Even, 0),
        // s<j><i>: coefficient of yp<i>*yp<j> in z
        ("s21", Parity::Even, 0),
        ("s31", Parity::Even, 0),
        ("s32", Parity::Even, 0),
        // formal inverse data
        ("u11", Parity::Even, 0),
        ("u12", Parity::Even, 0),
        ("u13", Parity::Even, 0),
        ("u21", Parity::Even, 0),
        ("u22", Parity::Even, 0),
        ("u23", Parity::Even, 0),
        ("u31", Parity::Even, 0),
        ("u32", Parity::Even, 0),
        ("u33", Parity::Even, 0),
        ("uz", Parity::Even, 0),
        ("v21", Parity::Even, 0),
        ("v31", Parity::Even, 0),
        ("v32", Parity::Even, 0),
    ];
    let mut primed_coords = scalars.clone();
    primed_coords.extend([
        ("yp1", Parity::Odd, 1),
        ("yp2", Parity::Odd, 1),
        ("yp3", Parity::Odd, 1),
        ("zp1", Parity::Even, 2),
    ]);
    let mut unprimed_coords = scalars;
    unprimed_coords.extend([
        ("y1", Parity::Odd, 1),
        ("y2", Parity::Odd, 1),
        ("y3", Parity::Odd, 1),
        ("z1", Parity::Even, 2),
    ]);
    let primed = GradedContext::build(&primed_coords)?;
    let unprimed = GradedContext::build(&unprimed_coords)?;

    // primed coordinates expressed in the unprimed chart
    let mut forward_images = Vec::new();
    for (id, c) in primed.coordinates() {
        let expr = match c.name.as_str() {
            "yp1" => "u11*y1 + u12*y2 + u13*y3".to_string(),
            "yp2" => "u21*y1 + u22*y2 + u23*y3".to_string(),
            "yp3" => "u31*y1 + u32*y2 + u33*y3".to_string(),
            "zp1" => "uz*z1 + v21*y1*y2 + v31*y1*y3 + v32*y2*y3".to_string(),
            name => name.to_string(),
        };
        forward_images.push((id, parse_expression(&expr, &unprimed).expect("fixture expression")));
    }
    // unprimed coordinates expressed in the primed chart
    let mut inverse_images = Vec::new();
    for (id, c) in unprimed.coordinates() {
        let expr = match c.name.as_str() {
            "y1" => "t11*yp1 + t12*yp2 + t13*yp3".to_string(),
            "y2" => "t21*yp1 + t22*yp2 + t23*yp3".to_string(),
            "y3" => "t31*yp1 + t32*yp2 + t33*yp3".to_string(),
            "z1" => "tz*zp1 + s21*yp1*yp2 + s31*yp1*yp3 + s32*yp2*yp3".to_string(),
            name => name.to_string(),
        };
        inverse_images.push((id, parse_expression(&expr, &primed).expect("fixture expression")));
    }
    CoordinateChange::new(
        SubstitutionMap::new(&primed, &unprimed, forward_images)?,
        SubstitutionMap::new(&unprimed, &primed, inverse_images)?,
    )
}
