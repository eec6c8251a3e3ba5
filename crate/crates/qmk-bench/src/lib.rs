//! Shared helpers for the benchmarks.

use qmk_core::{parse_expression, Context, GradedContext, Parity, Polynomial};

/// A mixed chart exercising base scalars and both parities.
pub fn bench_context() -> Context {
    GradedContext::build(&[
        ("x", Parity::Even, 0),
        ("th", Parity::Odd, 0),
        ("y1", Parity::Odd, 1),
        ("y2", Parity::Odd, 1),
        ("w", Parity::Even, 1),
        ("z", Parity::Even, 2),
    ])
    .unwrap()
}

pub fn dense_polynomial(ctx: &Context) -> Polynomial {
    parse_expression(
        "3/2*x^3 + x^2*th + 2*x*y1*y2 + w^2 - 5*th*y1*w + z + x*z - 1/3*y1*y2*z + w*z",
        ctx,
    )
    .unwrap()
}
