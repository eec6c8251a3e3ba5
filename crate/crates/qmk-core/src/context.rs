//! Coordinate charts: named coordinates with a parity and an integer weight.
//!
//! The declaration order of coordinates is the canonical total order used
//! everywhere for monomial normal forms and for deterministic printing.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;

/// Z2-grading of a coordinate. Odd coordinates anticommute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// Parity addition mod 2.
    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        self.combine(Parity::Odd)
    }

    /// The sign (-1)^(p q).
    pub fn koszul_sign(self, other: Parity) -> i8 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
        }
    }
}

/// Index of a coordinate within its context, in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordId(pub usize);

/// A named coordinate with parity and integer weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coordinate {
    pub name: String,
    pub parity: Parity,
    pub weight: i64,
}

impl Coordinate {
    pub fn new(name: impl Into<String>, parity: Parity, weight: i64) -> Self {
        Coordinate {
            name: name.into(),
            parity,
            weight,
        }
    }
}

/// An ordered chart of coordinates. Shared behind `Arc` by every value
/// built over it; all values are immutable after construction.
#[derive(Debug, PartialEq, Eq)]
pub struct GradedContext {
    coords: Vec<Coordinate>,
    by_name: HashMap<String, usize>,
}

pub type Context = Arc<GradedContext>;

impl GradedContext {
    pub fn new(coords: Vec<Coordinate>) -> Result<Context, AlgebraError> {
        let mut by_name = HashMap::new();
        for (i, c) in coords.iter().enumerate() {
            if by_name.insert(c.name.clone(), i).is_some() {
                return Err(AlgebraError::DuplicateCoordinate(c.name.clone()));
            }
        }
        Ok(Arc::new(GradedContext { coords, by_name }))
    }

    /// Convenience constructor from `(name, parity, weight)` triples.
    pub fn build(coords: &[(&str, Parity, i64)]) -> Result<Context, AlgebraError> {
        Self::new(
            coords
                .iter()
                .map(|(n, p, w)| Coordinate::new(*n, *p, *w))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coordinate(&self, id: CoordId) -> &Coordinate {
        &self.coords[id.0]
    }

    pub fn coordinates(&self) -> impl Iterator<Item = (CoordId, &Coordinate)> {
        self.coords.iter().enumerate().map(|(i, c)| (CoordId(i), c))
    }

    pub fn lookup(&self, name: &str) -> Option<CoordId> {
        self.by_name.get(name).copied().map(CoordId)
    }

    pub fn require(&self, name: &str) -> Result<CoordId, AlgebraError> {
        self.lookup(name)
            .ok_or_else(|| AlgebraError::UnknownCoordinate(name.to_string()))
    }

    pub fn name(&self, id: CoordId) -> &str {
        &self.coords[id.0].name
    }

    pub fn parity(&self, id: CoordId) -> Parity {
        self.coords[id.0].parity
    }

    pub fn weight(&self, id: CoordId) -> i64 {
        self.coords[id.0].weight
    }

    /// The maximal coordinate weight. Only meaningful when all weights are
    /// non-negative; `None` for an empty chart.
    pub fn degree(&self) -> Option<i64> {
        self.coords.iter().map(|c| c.weight).max()
    }

    pub fn has_negative_weights(&self) -> bool {
        self.coords.iter().any(|c| c.weight < 0)
    }

    /// Coordinates of weight zero, in declaration order.
    pub fn base_coordinates(&self) -> impl Iterator<Item = (CoordId, &Coordinate)> {
        self.coordinates().filter(|(_, c)| c.weight == 0)
    }

    /// Coordinates of positive weight, in declaration order.
    pub fn fiber_coordinates(&self) -> impl Iterator<Item = (CoordId, &Coordinate)> {
        self.coordinates().filter(|(_, c)| c.weight > 0)
    }
}

/// Contexts compare by identity first and structurally as a fallback, so
/// independently built copies of the same chart are interchangeable.
pub fn same_context(a: &Context, b: &Context) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub fn check_same_context(a: &Context, b: &Context) -> Result<(), AlgebraError> {
    if same_context(a, b) {
        Ok(())
    } else {
        Err(AlgebraError::ContextMismatch)
    }
}
