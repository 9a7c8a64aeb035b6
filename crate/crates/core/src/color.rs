//! Colors, color sets, list assignments, weights and colorings, plus the
//! validity verifier every other module leans on.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An opaque color identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Color(pub u32);

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A finite set of colors, stored as a growable bitset.
///
/// Trailing zero words are always trimmed so that structural equality is set
/// equality. The cardinality is cached.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ColorSet {
    words: Vec<u64>,
    len: usize,
}

impl ColorSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_ids<I: IntoIterator<Item = u32>>(ids: I) -> Self {
        ids.into_iter().map(Color).collect()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, color: Color) -> bool {
        let (w, b) = split(color);
        self.words.get(w).is_some_and(|word| word & (1 << b) != 0)
    }

    /// Returns `true` if the color was not already present.
    pub fn insert(&mut self, color: Color) -> bool {
        let (w, b) = split(color);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        let fresh = self.words[w] & (1 << b) == 0;
        if fresh {
            self.words[w] |= 1 << b;
            self.len += 1;
        }
        fresh
    }

    /// Returns `true` if the color was present.
    pub fn remove(&mut self, color: Color) -> bool {
        let (w, b) = split(color);
        let present = self.words.get(w).is_some_and(|word| word & (1 << b) != 0);
        if present {
            self.words[w] &= !(1 << b);
            self.len -= 1;
            self.trim();
        }
        present
    }

    /// Ascending iteration.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn min(&self) -> Option<Color> {
        self.iter().next()
    }

    pub fn max(&self) -> Option<Color> {
        let last = *self.words.last()?;
        let w = self.words.len() - 1;
        Some(Color((w * 64 + 63 - last.leading_zeros() as usize) as u32))
    }

    pub fn union(&self, other: &ColorSet) -> ColorSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn union_with(&mut self, other: &ColorSet) {
        if self.words.len() < other.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        self.recount();
    }

    pub fn intersection(&self, other: &ColorSet) -> ColorSet {
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        Self::from_words(words)
    }

    pub fn difference(&self, other: &ColorSet) -> ColorSet {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn difference_with(&mut self, other: &ColorSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        self.recount();
        self.trim();
    }

    pub fn intersection_len(&self, other: &ColorSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_disjoint(&self, other: &ColorSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset(&self, other: &ColorSet) -> bool {
        self.words.iter().enumerate().all(|(i, a)| {
            let b = other.words.get(i).copied().unwrap_or(0);
            a & !b == 0
        })
    }

    /// The `k` smallest colors of the set (all of them if `k >= len`).
    pub fn lowest(&self, k: usize) -> ColorSet {
        self.iter().take(k).collect()
    }

    fn from_words(words: Vec<u64>) -> Self {
        let mut out = ColorSet { words, len: 0 };
        out.recount();
        out.trim();
        out
    }

    fn recount(&mut self) {
        self.len = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

#[inline]
fn split(color: Color) -> (usize, u32) {
    ((color.0 / 64) as usize, color.0 % 64)
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = Color;

    fn next(&mut self) -> Option<Color> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros();
                self.current &= self.current - 1;
                return Some(Color(self.index as u32 * 64 + bit));
            }
            self.index += 1;
            self.current = *self.words.get(self.index)?;
        }
    }
}

impl<'a> IntoIterator for &'a ColorSet {
    type Item = Color;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl FromIterator<Color> for ColorSet {
    fn from_iter<I: IntoIterator<Item = Color>>(iter: I) -> Self {
        let mut out = ColorSet::new();
        for c in iter {
            out.insert(c);
        }
        out
    }
}

impl Extend<Color> for ColorSet {
    fn extend<I: IntoIterator<Item = Color>>(&mut self, iter: I) {
        for c in iter {
            self.insert(c);
        }
    }
}

impl<const N: usize> From<[u32; N]> for ColorSet {
    fn from(ids: [u32; N]) -> Self {
        ColorSet::from_ids(ids)
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|c| c.0)).finish()
    }
}

impl Serialize for ColorSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ColorSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let ids = Vec::<u32>::deserialize(deserializer)?;
        let set = ColorSet::from_ids(ids.iter().copied());
        if set.len() != ids.len() {
            return Err(serde::de::Error::custom("duplicate color in set"));
        }
        Ok(set)
    }
}

macro_rules! per_vertex {
    ($name:ident, $item:ty) => {
        impl $name {
            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn iter(&self) -> std::slice::Iter<'_, $item> {
                self.0.iter()
            }

            pub fn as_slice(&self) -> &[$item] {
                &self.0
            }

            pub fn into_inner(self) -> Vec<$item> {
                self.0
            }
        }

        impl Index<usize> for $name {
            type Output = $item;

            fn index(&self, i: usize) -> &$item {
                &self.0[i]
            }
        }

        impl From<Vec<$item>> for $name {
            fn from(v: Vec<$item>) -> Self {
                $name(v)
            }
        }

        impl FromIterator<$item> for $name {
            fn from_iter<I: IntoIterator<Item = $item>>(iter: I) -> Self {
                $name(iter.into_iter().collect())
            }
        }
    };
}

/// The lists `L(v)`, one per vertex in a fixed vertex order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ListAssignment(pub Vec<ColorSet>);
per_vertex!(ListAssignment, ColorSet);

/// Per-vertex demands `w(v)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightFn(pub Vec<usize>);
per_vertex!(WeightFn, usize);

impl WeightFn {
    pub fn uniform(len: usize, b: usize) -> Self {
        WeightFn(vec![b; len])
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

/// The chosen sets `c(v)`, one per vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiColoring(pub Vec<ColorSet>);
per_vertex!(MultiColoring, ColorSet);

/// `a`-lists with demand `b`; `e = a - 2b` is the excess over `2b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemParams {
    pub a: usize,
    pub b: usize,
    pub e: usize,
    pub m: Option<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamsError {
    #[error("list size a={a} is smaller than 2b={}", 2 * b)]
    ListsTooShort { a: usize, b: usize },
    #[error("multiplier m must be at least 1")]
    ZeroMultiplier,
}

impl ProblemParams {
    pub fn new(a: usize, b: usize) -> Result<Self, ParamsError> {
        if a < 2 * b {
            return Err(ParamsError::ListsTooShort { a, b });
        }
        Ok(ProblemParams {
            a,
            b,
            e: a - 2 * b,
            m: None,
        })
    }

    /// `a = 5m`, `b = 2m`, `e = m`.
    pub fn five_two(m: usize) -> Result<Self, ParamsError> {
        if m == 0 {
            return Err(ParamsError::ZeroMultiplier);
        }
        Ok(ProblemParams {
            a: 5 * m,
            b: 2 * m,
            e: m,
            m: Some(m),
        })
    }

    /// `a/b >= 5/2`, checked in integers.
    pub fn meets_ratio_gate(&self) -> bool {
        2 * self.a >= 5 * self.b
    }
}

/// The first violated clause found by [`verify_coloring`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum Violation {
    NotSubset {
        vertex: usize,
        stray: Vec<Color>,
    },
    WrongSize {
        vertex: usize,
        expected: usize,
        actual: usize,
    },
    Conflict {
        u: usize,
        v: usize,
        shared: Vec<Color>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotSubset { vertex, stray } => {
                write!(f, "vertex {vertex}: colors {stray:?} are not in its list")
            }
            Violation::WrongSize {
                vertex,
                expected,
                actual,
            } => {
                write!(
                    f,
                    "vertex {vertex}: {actual} colors chosen, demand is {expected}"
                )
            }
            Violation::Conflict { u, v, shared } => {
                write!(f, "edge {u}-{v}: both endpoints use {shared:?}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verification {
    Pass,
    Fail(Violation),
}

impl Verification {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verification::Pass)
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            Verification::Pass => None,
            Verification::Fail(v) => Some(v),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InputError {
    #[error("{what} has {actual} entries, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("edge ({u}, {v}) references a vertex outside 0..{len}")]
    EdgeOutOfRange { u: usize, v: usize, len: usize },
}

fn check_domains(
    edges: &[(usize, usize)],
    lists: &ListAssignment,
    weights: &WeightFn,
    coloring: &MultiColoring,
) -> Result<(), InputError> {
    let len = lists.len();
    if weights.len() != len {
        return Err(InputError::LengthMismatch {
            what: "weights",
            expected: len,
            actual: weights.len(),
        });
    }
    if coloring.len() != len {
        return Err(InputError::LengthMismatch {
            what: "coloring",
            expected: len,
            actual: coloring.len(),
        });
    }
    if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= len || v >= len) {
        return Err(InputError::EdgeOutOfRange { u, v, len });
    }
    Ok(())
}

/// Checks `c(v) ⊆ L(v)`, `|c(v)| = w(v)` and disjointness across every edge.
///
/// Vertices are scanned in order (subset clause, then size clause), then
/// edges in the given order; the first violation is reported.
pub fn verify_coloring(
    edges: &[(usize, usize)],
    lists: &ListAssignment,
    weights: &WeightFn,
    coloring: &MultiColoring,
) -> Result<Verification, InputError> {
    check_domains(edges, lists, weights, coloring)?;
    for v in 0..lists.len() {
        if let Some(violation) = subset_violation(v, lists, coloring) {
            return Ok(Verification::Fail(violation));
        }
        if let Some(violation) = size_violation(v, weights, coloring) {
            return Ok(Verification::Fail(violation));
        }
    }
    Ok(match first_conflict(edges, coloring) {
        Some(violation) => Verification::Fail(violation),
        None => Verification::Pass,
    })
}

/// Subset clause only.
pub fn check_subsets(lists: &ListAssignment, coloring: &MultiColoring) -> Option<Violation> {
    (0..lists.len().min(coloring.len())).find_map(|v| subset_violation(v, lists, coloring))
}

/// Size clause only.
pub fn check_sizes(weights: &WeightFn, coloring: &MultiColoring) -> Option<Violation> {
    (0..weights.len().min(coloring.len())).find_map(|v| size_violation(v, weights, coloring))
}

/// Disjointness clause only.
pub fn first_conflict(edges: &[(usize, usize)], coloring: &MultiColoring) -> Option<Violation> {
    edges.iter().find_map(|&(u, v)| {
        let (cu, cv) = (&coloring[u], &coloring[v]);
        (!cu.is_disjoint(cv)).then(|| Violation::Conflict {
            u,
            v,
            shared: cu.intersection(cv).iter().collect(),
        })
    })
}

fn subset_violation(
    v: usize,
    lists: &ListAssignment,
    coloring: &MultiColoring,
) -> Option<Violation> {
    let chosen = &coloring[v];
    (!chosen.is_subset(&lists[v])).then(|| Violation::NotSubset {
        vertex: v,
        stray: chosen.difference(&lists[v]).iter().collect(),
    })
}

fn size_violation(v: usize, weights: &WeightFn, coloring: &MultiColoring) -> Option<Violation> {
    let (expected, actual) = (weights[v], coloring[v].len());
    (expected != actual).then_some(Violation::WrongSize {
        vertex: v,
        expected,
        actual,
    })
}

/// `true` iff every list has exactly `a` colors.
pub fn list_sizes_ok(lists: &ListAssignment, a: usize) -> bool {
    lists.iter().all(|l| l.len() == a)
}

/// Edges of the path `0 - 1 - ... - (len-1)`.
pub fn path_edges(len: usize) -> Vec<(usize, usize)> {
    (1..len).map(|i| (i - 1, i)).collect()
}
