//! Resource descriptions and the matchmaking math over them.
//!
//! A description is a triple of small integers. Two descriptions are compared
//! by their Manhattan distance, and the similarity is that distance mapped
//! linearly onto a 0–100 % scale.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// Number of elements in a description.
pub const DIMENSIONS: usize = 3;
/// Largest value a single element may take.
pub const MAX_ELEMENT: u8 = 4;
/// Largest possible distance between two descriptions.
pub const MAX_DISTANCE: u8 = DIMENSIONS as u8 * MAX_ELEMENT;

/// The semantic identity of a node or of a search target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResourceDescription([u8; DIMENSIONS]);

impl ResourceDescription {
    pub fn new(elements: [i64; DIMENSIONS]) -> Result<Self> {
        let mut out = [0u8; DIMENSIONS];
        for (index, (&value, slot)) in elements.iter().zip(out.iter_mut()).enumerate() {
            if !(0..=MAX_ELEMENT as i64).contains(&value) {
                return Err(Error::InvalidDescription { index, value });
            }
            *slot = value as u8;
        }
        Ok(Self(out))
    }

    pub fn elements(&self) -> [u8; DIMENSIONS] {
        self.0
    }

    /// Draws every element independently and uniformly from `0..=4`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut out = [0u8; DIMENSIONS];
        for slot in out.iter_mut() {
            *slot = rng.gen_range(0..=MAX_ELEMENT);
        }
        Self(out)
    }

    /// Every description in the domain, in lexicographic order.
    pub fn all() -> impl Iterator<Item = Self> {
        let r = 0..=MAX_ELEMENT;
        r.clone().flat_map(move |a| {
            let r = r.clone();
            r.clone()
                .flat_map(move |b| r.clone().map(move |c| Self([a, b, c])))
        })
    }
}

impl fmt::Display for ResourceDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "<{a},{b},{c}>")
    }
}

impl std::str::FromStr for ResourceDescription {
    type Err = Error;

    /// Accepts `<a,b,c>` or `a,b,c`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('<').trim_end_matches('>');
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != DIMENSIONS {
            return Err(Error::Parse {
                line: 0,
                reason: format!("expected {DIMENSIONS} elements in `{s}`"),
            });
        }
        let mut elements = [0i64; DIMENSIONS];
        for (slot, part) in elements.iter_mut().zip(&parts) {
            *slot = part.parse().map_err(|_| Error::Parse {
                line: 0,
                reason: format!("`{part}` is not an integer"),
            })?;
        }
        Self::new(elements)
    }
}

/// Semantic distance in `0..=12`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Distance(u8);

impl Distance {
    pub const ZERO: Distance = Distance(0);
    pub const MAX: Distance = Distance(MAX_DISTANCE);

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn similarity(self) -> Similarity {
        Similarity::from_distance(self)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Similarity percentage. Only constructible from a [`Distance`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Similarity(f64);

impl Similarity {
    fn from_distance(d: Distance) -> Self {
        let max = MAX_DISTANCE as f64;
        Self((max - d.0 as f64) / max * 100.0)
    }

    pub fn percent(self) -> f64 {
        self.0
    }
}

/// Matching threshold on distance, validated to lie in `[0, 12]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AllowableError(f64);

impl AllowableError {
    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=MAX_DISTANCE as f64).contains(&value) {
            return Err(Error::AllowableErrorOutOfRange(value));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn admits(self, d: Distance) -> bool {
        d.0 as f64 <= self.0
    }
}

/// Manhattan distance between two descriptions.
pub fn distance(a: &ResourceDescription, b: &ResourceDescription) -> Distance {
    let sum = a.0.iter().zip(&b.0).map(|(x, y)| x.abs_diff(*y)).sum();
    Distance(sum)
}

pub fn similarity(a: &ResourceDescription, b: &ResourceDescription) -> Similarity {
    distance(a, b).similarity()
}

/// True iff `node` lies within `allowable` of `request`.
pub fn matches(
    request: &ResourceDescription,
    node: &ResourceDescription,
    allowable: AllowableError,
) -> bool {
    allowable.admits(distance(request, node))
}

pub fn random_description<R: Rng + ?Sized>(rng: &mut R) -> ResourceDescription {
    ResourceDescription::random(rng)
}
