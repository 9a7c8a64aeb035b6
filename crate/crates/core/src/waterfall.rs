//! Weighted paths and waterfall lists.
//!
//! A list on a path is a *waterfall* list when every color sits on one
//! vertex or on two consecutive vertices. On such lists colorability reduces
//! to counting: the path is colorable iff every window `i..=j` offers at
//! least as many colors as it demands. Any *good* list (every interior list
//! covers the demand of itself and its right neighbor) can be rewritten into
//! a waterfall list with the same list sizes and the same colorability, and
//! a coloring of the rewritten list can be pulled back to the original.
//!
//! The two handle-extension routines at the bottom build on that pipeline:
//! transform, color greedily, pull back.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::color::{
    path_edges, verify_coloring, Color, ColorSet, ListAssignment, MultiColoring, ProblemParams,
    Verification, Violation, WeightFn,
};
use crate::oracle::{self, OracleConfig, OracleError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("path has {lists} lists but {weights} weights")]
    LengthMismatch { lists: usize, weights: usize },
    #[error("window {i}..={j} is outside a path with {len} vertices")]
    IndexOutOfRange { i: usize, j: usize, len: usize },
    #[error("list is not good at vertex {index}: |L| = {size} < w(i) + w(i+1) = {needed}")]
    NotGood {
        index: usize,
        size: usize,
        needed: usize,
    },
    #[error("list is not a waterfall list: L({i}) and L({j}) share a color")]
    NotWaterfall { i: usize, j: usize },
    #[error("last list has {size} colors, fewer than its demand {demand}")]
    EndpointTooSmall { size: usize, demand: usize },
    #[error("instance has no coloring")]
    Infeasible,
    #[error("coloring does not fit the transformed list: {0}")]
    InvalidColoring(Violation),
    #[error("trace does not match the list: {0}")]
    TraceMismatch(String),
    #[error("pullback of replacement {record} found no swap color; the list was not good")]
    PullbackInvariant { record: usize },
    #[error("excess e = a - 2b is zero; the handle theorems need e >= 1")]
    ZeroExcess,
    #[error(
        "vertex {index} has demand {actual}, the handle routines need uniform demand {expected}"
    )]
    NonUniformDemand {
        index: usize,
        expected: usize,
        actual: usize,
    },
    #[error("list at vertex {index} has {actual} colors, expected {expected}")]
    ListSize {
        index: usize,
        expected: usize,
        actual: usize,
    },
    #[error("path of length {n} is shorter than the required {required}")]
    TooShort { n: usize, required: usize },
    #[error("|A(n-1,n)| = {have} is below 2b = {need}")]
    AmplitudeTooSmall { have: usize, need: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("internal invariant broken: {0}")]
    Internal(String),
}

/// The path `P_{n+1}` with vertices `0..=n`, a list and a demand per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedPath {
    pub lists: ListAssignment,
    pub weights: WeightFn,
}

impl WeightedPath {
    pub fn new(lists: ListAssignment, weights: WeightFn) -> Result<Self, PathError> {
        if lists.len() != weights.len() {
            return Err(PathError::LengthMismatch {
                lists: lists.len(),
                weights: weights.len(),
            });
        }
        Ok(WeightedPath { lists, weights })
    }

    /// Constant demand `b` on every vertex.
    pub fn uniform(lists: ListAssignment, b: usize) -> Self {
        let weights = WeightFn::uniform(lists.len(), b);
        WeightedPath { lists, weights }
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    /// Path length `n` (number of edges).
    pub fn length(&self) -> usize {
        self.len().saturating_sub(1)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        path_edges(self.len())
    }

    pub fn verify(&self, coloring: &MultiColoring) -> Verification {
        verify_coloring(&self.edges(), &self.lists, &self.weights, coloring).unwrap_or_else(|_| {
            Verification::Fail(Violation::WrongSize {
                vertex: 0,
                expected: self.len(),
                actual: coloring.len(),
            })
        })
    }

    fn with_lists(&self, lists: ListAssignment) -> WeightedPath {
        WeightedPath {
            lists,
            weights: self.weights.clone(),
        }
    }
}

/// `true` iff `L(i) ∩ L(j) = ∅` whenever `|i - j| >= 2`.
pub fn is_waterfall(path: &WeightedPath) -> bool {
    waterfall_violation(path).is_none()
}

fn waterfall_violation(path: &WeightedPath) -> Option<(usize, usize)> {
    let l = &path.lists;
    (0..l.len()).find_map(|i| {
        (i + 2..l.len())
            .find(|&j| !l[i].is_disjoint(&l[j]))
            .map(|j| (i, j))
    })
}

/// The amplitude `A(i, j)`: union of the lists on `i..=j`.
pub fn amplitude(path: &WeightedPath, i: usize, j: usize) -> Result<ColorSet, PathError> {
    if i > j || j >= path.len() {
        return Err(PathError::IndexOutOfRange {
            i,
            j,
            len: path.len(),
        });
    }
    let mut acc = ColorSet::new();
    for k in i..=j {
        acc.union_with(&path.lists[k]);
    }
    Ok(acc)
}

/// `|L(i)| >= w(i) + w(i+1)` for every interior vertex; endpoints are exempt.
pub fn is_good(path: &WeightedPath) -> bool {
    goodness_violation(path).is_none()
}

fn goodness_violation(path: &WeightedPath) -> Option<PathError> {
    let w = &path.weights;
    (1..path.len().saturating_sub(1)).find_map(|i| {
        let (size, needed) = (path.lists[i].len(), w[i] + w[i + 1]);
        (size < needed).then_some(PathError::NotGood {
            index: i,
            size,
            needed,
        })
    })
}

/// A color together with the index interval it occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ColorSpan {
    pub color: Color,
    pub first: usize,
    pub last: usize,
}

/// One maximal run of an input color and the working color it was renamed to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RunLabel {
    pub original: Color,
    pub first: usize,
    pub last: usize,
    pub label: Color,
}

/// Color `old` spanned `origin..=last` and was replaced by the fresh color
/// `new` on `origin + 2..=last`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Replacement {
    pub old: Color,
    pub new: Color,
    pub origin: usize,
    pub last: usize,
}

impl Replacement {
    pub fn affected(&self) -> std::ops::RangeInclusive<usize> {
        self.origin + 2..=self.last
    }
}

/// Everything needed to replay a waterfall transformation or undo it on a
/// coloring: the renaming of input runs to working colors, then the ordered
/// replacements.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TransformTrace {
    pub runs: Vec<RunLabel>,
    pub replacements: Vec<Replacement>,
}

impl TransformTrace {
    /// A trace whose renaming is the identity. Fails if some color of the
    /// path occupies more than one interval.
    pub fn identity(path: &WeightedPath) -> Result<Self, PathError> {
        let runs: Vec<RunLabel> = color_runs(&path.lists)
            .into_iter()
            .map(|s| RunLabel {
                original: s.color,
                first: s.first,
                last: s.last,
                label: s.color,
            })
            .collect();
        let mut seen = ColorSet::new();
        for r in &runs {
            if !seen.insert(r.original) {
                return Err(PathError::TraceMismatch(format!(
                    "color {} occupies several intervals",
                    r.original
                )));
            }
        }
        Ok(TransformTrace {
            runs,
            replacements: Vec::new(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.replacements.is_empty() && self.runs.iter().all(|r| r.original == r.label)
    }

    /// Applies the renaming only.
    pub fn relabel(&self, lists: &ListAssignment) -> Result<ListAssignment, PathError> {
        let mut by_key: HashMap<(Color, usize), Color> = HashMap::new();
        for r in &self.runs {
            for k in r.first..=r.last {
                by_key.insert((r.original, k), r.label);
            }
        }
        let mut out = Vec::with_capacity(lists.len());
        for (k, list) in lists.iter().enumerate() {
            let mut renamed = ColorSet::new();
            for c in list {
                let label = by_key.get(&(c, k)).ok_or_else(|| {
                    PathError::TraceMismatch(format!("color {c} at vertex {k} has no run"))
                })?;
                renamed.insert(*label);
            }
            out.push(renamed);
        }
        let covered: usize = self.runs.iter().map(|r| r.last - r.first + 1).sum();
        let present: usize = lists.iter().map(ColorSet::len).sum();
        if covered != present {
            return Err(PathError::TraceMismatch(
                "runs cover colors absent from the list".into(),
            ));
        }
        Ok(ListAssignment(out))
    }

    /// Replays renaming and replacements; reproduces the transform output.
    pub fn replay(&self, lists: &ListAssignment) -> Result<ListAssignment, PathError> {
        let mut out = self.relabel(lists)?.into_inner();
        for rep in &self.replacements {
            if rep.last >= out.len() {
                return Err(PathError::TraceMismatch(format!(
                    "replacement reaches vertex {}",
                    rep.last
                )));
            }
            for k in rep.affected() {
                if !out[k].remove(rep.old) {
                    return Err(PathError::TraceMismatch(format!(
                        "color {} missing at vertex {k}",
                        rep.old
                    )));
                }
                out[k].insert(rep.new);
            }
        }
        Ok(ListAssignment(out))
    }

    fn original_of(&self) -> HashMap<Color, Color> {
        self.runs.iter().map(|r| (r.label, r.original)).collect()
    }
}

/// Maximal runs of every color, sorted by `(first, last, color)`.
fn color_runs(lists: &ListAssignment) -> Vec<ColorSpan> {
    let mut palette = ColorSet::new();
    for l in lists.iter() {
        palette.union_with(l);
    }
    let mut runs = Vec::new();
    for color in &palette {
        let mut start = None;
        for k in 0..=lists.len() {
            let here = k < lists.len() && lists[k].contains(color);
            match (here, start) {
                (true, None) => start = Some(k),
                (false, Some(first)) => {
                    runs.push(ColorSpan {
                        color,
                        first,
                        last: k - 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
    }
    runs.sort_by_key(|s| (s.first, s.last, s.color));
    runs
}

/// Rewrites a good list into a similar waterfall list with the same list
/// sizes.
///
/// Each maximal run of a color becomes its own working color; working
/// colors are numbered `1, 2, ...` by `(first, last)`. Then, repeatedly, the
/// smallest color `x` spanning three or more vertices `i..=j` is replaced by
/// a fresh color on `i + 2..=j`.
pub fn waterfall_transform(
    path: &WeightedPath,
) -> Result<(ListAssignment, TransformTrace), PathError> {
    if let Some(err) = goodness_violation(path) {
        return Err(err);
    }
    let runs: Vec<RunLabel> = color_runs(&path.lists)
        .into_iter()
        .enumerate()
        .map(|(i, s)| RunLabel {
            original: s.color,
            first: s.first,
            last: s.last,
            label: Color(i as u32 + 1),
        })
        .collect();

    let mut lists = vec![ColorSet::new(); path.len()];
    // spans[label - 1]
    let mut spans: Vec<(usize, usize)> = Vec::with_capacity(runs.len());
    for r in &runs {
        for list in &mut lists[r.first..=r.last] {
            list.insert(r.label);
        }
        spans.push((r.first, r.last));
    }

    let mut replacements = Vec::new();
    let mut cursor = 0;
    while cursor < spans.len() {
        let (first, last) = spans[cursor];
        if last >= first + 2 {
            let old = Color(cursor as u32 + 1);
            let new = Color(spans.len() as u32 + 1);
            for list in &mut lists[first + 2..=last] {
                list.remove(old);
                list.insert(new);
            }
            spans[cursor] = (first, first + 1);
            spans.push((first + 2, last));
            replacements.push(Replacement {
                old,
                new,
                origin: first,
                last,
            });
        }
        cursor += 1;
    }
    Ok((ListAssignment(lists), TransformTrace { runs, replacements }))
}

/// Which branch of the pullback handled each replacement.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PullbackCases {
    /// `x` unused at `origin + 1` or `y` unused at `origin + 2`: plain rename.
    pub rename: usize,
    /// A free color of `L(origin + 1)` replaces `x` there.
    pub free_substitute: usize,
    /// `x` and some `z` trade places between `origin` and `origin + 1`.
    pub swap: usize,
}

/// Turns a coloring of the transformed list back into a coloring of the
/// original list, undoing the replacements last to first.
pub fn pullback_coloring(
    trace: &TransformTrace,
    original: &WeightedPath,
    transformed: &MultiColoring,
) -> Result<MultiColoring, PathError> {
    pullback_coloring_traced(trace, original, transformed).map(|(c, _)| c)
}

pub fn pullback_coloring_traced(
    trace: &TransformTrace,
    original: &WeightedPath,
    transformed: &MultiColoring,
) -> Result<(MultiColoring, PullbackCases), PathError> {
    if let Some(err) = goodness_violation(original) {
        return Err(err);
    }
    let mut current = trace.replay(&original.lists)?.into_inner();
    if let Verification::Fail(v) = original
        .with_lists(ListAssignment(current.clone()))
        .verify(transformed)
    {
        return Err(PathError::InvalidColoring(v));
    }

    let mut c = transformed.clone().into_inner();
    let mut cases = PullbackCases::default();
    for (record, rep) in trace.replacements.iter().enumerate().rev() {
        let (x, y, i) = (rep.old, rep.new, rep.origin);
        let (mid, far) = (i + 1, i + 2);
        if !c[mid].contains(x) || !c[far].contains(y) {
            cases.rename += 1;
        } else {
            let mut blocked = c[i].union(&c[mid]);
            blocked.union_with(&c[far]);
            if let Some(z) = current[mid].difference(&blocked).min() {
                c[mid].remove(x);
                c[mid].insert(z);
                cases.free_substitute += 1;
            } else {
                let z = c[i]
                    .difference(&c[far])
                    .intersection(&current[mid])
                    .min()
                    .ok_or(PathError::PullbackInvariant { record })?;
                c[mid].remove(x);
                c[mid].insert(z);
                c[i].remove(z);
                c[i].insert(x);
                cases.swap += 1;
            }
        }
        for k in rep.affected() {
            if c[k].remove(y) {
                c[k].insert(x);
            }
            current[k].remove(y);
            current[k].insert(x);
        }
    }

    let original_of = trace.original_of();
    let coloring: MultiColoring = c
        .iter()
        .map(|set| set.iter().map(|label| original_of[&label]).collect())
        .collect();
    if let Verification::Fail(v) = original.verify(&coloring) {
        return Err(PathError::Internal(format!(
            "pullback produced an invalid coloring: {v}"
        )));
    }
    Ok((coloring, cases))
}

/// Colorability test for waterfall lists: every window `i..=j` must satisfy
/// `|A(i, j)| >= w(i) + ... + w(j)`.
pub fn waterfall_colorable(path: &WeightedPath) -> Result<bool, PathError> {
    if let Some((i, j)) = waterfall_violation(path) {
        return Err(PathError::NotWaterfall { i, j });
    }
    Ok(windows_satisfied(path))
}

fn windows_satisfied(path: &WeightedPath) -> bool {
    for i in 0..path.len() {
        let mut union = ColorSet::new();
        let mut demand = 0;
        for j in i..path.len() {
            union.union_with(&path.lists[j]);
            demand += path.weights[j];
            if union.len() < demand {
                return false;
            }
        }
    }
    true
}

/// The prefix form of the window test, valid for good waterfall lists whose
/// last list covers its own demand: only windows `0..=j` need checking.
pub fn prefix_colorable(path: &WeightedPath) -> Result<bool, PathError> {
    if let Some((i, j)) = waterfall_violation(path) {
        return Err(PathError::NotWaterfall { i, j });
    }
    if let Some(err) = goodness_violation(path) {
        return Err(err);
    }
    if let (Some(last), Some(&demand)) = (path.lists.iter().last(), path.weights.iter().last()) {
        if last.len() < demand {
            return Err(PathError::EndpointTooSmall {
                size: last.len(),
                demand,
            });
        }
    }
    let mut union = ColorSet::new();
    let mut demand = 0;
    for j in 0..path.len() {
        union.union_with(&path.lists[j]);
        demand += path.weights[j];
        if union.len() < demand {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WaterfallColoring {
    pub coloring: MultiColoring,
    /// The greedy pass got stuck and the exact oracle produced the coloring.
    pub fallback: bool,
}

/// Colors a colorable waterfall list left to right.
///
/// At vertex `i` the available colors are `L(i) \ c(i-1)`; colors that do
/// not continue into `L(i+1)` are taken first, then shared ones, lowest id
/// first within each group.
pub fn waterfall_color(path: &WeightedPath) -> Result<WaterfallColoring, PathError> {
    if !waterfall_colorable(path)? {
        return Err(PathError::Infeasible);
    }
    if let Some(coloring) = greedy(path) {
        return Ok(WaterfallColoring {
            coloring,
            fallback: false,
        });
    }
    match oracle::solve_path_exact(path, None, None, &OracleConfig::default())? {
        Some(coloring) => Ok(WaterfallColoring {
            coloring,
            fallback: true,
        }),
        None => Err(PathError::Infeasible),
    }
}

fn greedy(path: &WeightedPath) -> Option<MultiColoring> {
    let mut out: Vec<ColorSet> = Vec::with_capacity(path.len());
    let empty = ColorSet::new();
    for i in 0..path.len() {
        let prev = out.last().unwrap_or(&empty);
        let available = path.lists[i].difference(prev);
        let next = if i + 1 < path.len() {
            &path.lists[i + 1]
        } else {
            &empty
        };
        let want = path.weights[i];
        let mut chosen = available.difference(next).lowest(want);
        if chosen.len() < want {
            chosen.union_with(&available.intersection(next).lowest(want - chosen.len()));
        }
        if chosen.len() < want {
            return None;
        }
        out.push(chosen);
    }
    Some(MultiColoring(out))
}

/// Smallest even integer `p` with `p >= numerator / denominator`.
///
/// Panics if `denominator` is zero.
pub fn even_ceil(numerator: u64, denominator: u64) -> u64 {
    assert!(denominator > 0, "even_ceil: zero denominator");
    let p = numerator.div_ceil(denominator);
    p + p % 2
}

/// The handle-length threshold `Even(2b / e)`.
pub fn handle_threshold(params: &ProblemParams) -> Result<usize, PathError> {
    if params.e == 0 {
        return Err(PathError::ZeroExcess);
    }
    Ok(even_ceil(2 * params.b as u64, params.e as u64) as usize)
}

fn check_uniform_demand(path: &WeightedPath, b: usize) -> Result<(), PathError> {
    match path.weights.iter().position(|&w| w != b) {
        Some(index) => Err(PathError::NonUniformDemand {
            index,
            expected: b,
            actual: path.weights[index],
        }),
        None => Ok(()),
    }
}

fn check_size(path: &WeightedPath, index: usize, expected: usize) -> Result<(), PathError> {
    let actual = path.lists[index].len();
    if actual != expected {
        return Err(PathError::ListSize {
            index,
            expected,
            actual,
        });
    }
    Ok(())
}

fn transform_and_color(path: &WeightedPath) -> Result<MultiColoring, PathError> {
    let (lists, trace) = waterfall_transform(path)?;
    let colored = waterfall_color(&path.with_lists(lists))?;
    pullback_coloring(&trace, path, &colored.coloring)
}

/// Extends across a long handle: ends carry `b` colors, interior lists `a`
/// colors, `n >= Even(2b / e)`, demand `b` everywhere.
///
/// With end lists of exactly `b` colors the ends are forced to their whole
/// list, which is how callers pin already-colored endpoints.
pub fn color_handle_long(
    path: &WeightedPath,
    params: &ProblemParams,
) -> Result<MultiColoring, PathError> {
    let required = handle_threshold(params)?;
    check_uniform_demand(path, params.b)?;
    let n = path.length();
    if path.is_empty() {
        return Err(PathError::TooShort { n: 0, required });
    }
    check_size(path, 0, params.b)?;
    check_size(path, n, params.b)?;
    for i in 1..n {
        check_size(path, i, params.a)?;
    }
    if n < required {
        return Err(PathError::TooShort { n, required });
    }
    transform_and_color(path)
}

/// Extends across a short handle whose last two lists have only `b + e`
/// colors but jointly offer at least `2b`.
///
/// A set `D` of `b - e` colors of `L(n) \ L(n-1)` (lowest ids) is reserved
/// for the last vertex, which then only needs `e` more colors from the rest
/// of its list; that reduced instance is good and goes through the usual
/// pipeline. When `e >= b` the set `D` is empty.
pub fn color_handle_short(
    path: &WeightedPath,
    params: &ProblemParams,
) -> Result<MultiColoring, PathError> {
    let required = handle_threshold(params)?;
    check_uniform_demand(path, params.b)?;
    let n = path.length();
    if path.len() < 3 {
        return Err(PathError::TooShort {
            n,
            required: required.max(2),
        });
    }
    let (a, b, e) = (params.a, params.b, params.e);
    check_size(path, 0, b)?;
    for i in 1..n - 1 {
        check_size(path, i, a)?;
    }
    check_size(path, n - 1, b + e)?;
    check_size(path, n, b + e)?;
    let have = path.lists[n - 1].union(&path.lists[n]).len();
    if have < 2 * b {
        return Err(PathError::AmplitudeTooSmall { have, need: 2 * b });
    }
    if n < required {
        return Err(PathError::TooShort { n, required });
    }

    let reserve = b.saturating_sub(e);
    let reserved = path.lists[n].difference(&path.lists[n - 1]).lowest(reserve);
    if reserved.len() < reserve {
        return Err(PathError::Internal(format!(
            "only {} colors of L(n) avoid L(n-1), need {reserve}",
            reserved.len()
        )));
    }
    let mut lists = path.lists.clone().into_inner();
    lists[n].difference_with(&reserved);
    let mut weights = path.weights.clone().into_inner();
    weights[n] = b - reserve;
    let reduced = WeightedPath {
        lists: ListAssignment(lists),
        weights: WeightFn(weights),
    };

    let mut sets = transform_and_color(&reduced)?.into_inner();
    sets[n].union_with(&reserved);
    let coloring = MultiColoring(sets);
    if let Verification::Fail(v) = path.verify(&coloring) {
        return Err(PathError::Internal(format!(
            "short-handle extension is invalid: {v}"
        )));
    }
    Ok(coloring)
}

/// Cuts the last two lists of a short handle down to `size` colors each
/// while keeping their union at least `min(|prev ∪ last|, 2 * size - ...)`
/// as large as possible.
///
/// `prev` keeps its colors outside `last` first, then the lowest ids; `last`
/// then keeps its colors outside the trimmed `prev` first, then the lowest
/// ids. If the untrimmed union has at least `2b` colors and `size = b + e`
/// with `e <= b`, the trimmed union still has at least `2b`.
pub fn trim_end_lists(
    prev: &ColorSet,
    last: &ColorSet,
    size: usize,
) -> Result<(ColorSet, ColorSet), PathError> {
    for (index, list) in [(0, prev), (1, last)] {
        if list.len() < size {
            return Err(PathError::ListSize {
                index,
                expected: size,
                actual: list.len(),
            });
        }
    }
    let mut kept_prev = prev.difference(last).lowest(size);
    kept_prev.union_with(&prev.intersection(last).lowest(size - kept_prev.len()));
    let mut kept_last = last.difference(&kept_prev).lowest(size);
    kept_last.union_with(&last.intersection(&kept_prev).lowest(size - kept_last.len()));
    Ok((kept_prev, kept_last))
}

/// Hall's condition on a path.
///
/// For every window `i..=j`, each color contributes the independence number
/// of the vertices of the window whose list contains it (a union of runs, a
/// run of length `r` contributing `ceil(r / 2)`), and the total must reach
/// the window's demand. On paths this is equivalent to colorability.
pub fn hall_check_path(path: &WeightedPath) -> bool {
    for i in 0..path.len() {
        // color -> (last index seen, current run length)
        let mut runs: HashMap<Color, (usize, usize)> = HashMap::new();
        let mut supply = 0;
        let mut demand = 0;
        for j in i..path.len() {
            for c in &path.lists[j] {
                let entry = runs.entry(c).or_insert((usize::MAX, 0));
                if entry.0 != usize::MAX && entry.0 + 1 == j {
                    if entry.1.is_multiple_of(2) {
                        supply += 1;
                    }
                    entry.1 += 1;
                } else {
                    supply += 1;
                    entry.1 = 1;
                }
                entry.0 = j;
            }
            demand += path.weights[j];
            if supply < demand {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{
        enumerate_feasibility, solve_path_exact, FeasibilityInstance, DEFAULT_MAX_TRANSITIONS,
    };

    fn path(sets: &[&[u32]], w: &[usize]) -> WeightedPath {
        WeightedPath::new(
            sets.iter()
                .map(|s| ColorSet::from_ids(s.iter().copied()))
                .collect(),
            WeightFn(w.to_vec()),
        )
        .unwrap()
    }

    fn ids(lists: &[ColorSet]) -> Vec<Vec<u32>> {
        lists
            .iter()
            .map(|s| s.iter().map(|c| c.0).collect())
            .collect()
    }

    fn feasible(p: &WeightedPath) -> bool {
        enumerate_feasibility(FeasibilityInstance::Path(p), DEFAULT_MAX_TRANSITIONS).unwrap()
    }

    fn overlapping_five() -> WeightedPath {
        path(
            &[
                &[1, 2, 3, 4, 6],
                &[2, 3, 4, 5],
                &[1, 3, 5, 6, 7],
                &[1, 3, 4],
                &[1, 4, 5, 6],
            ],
            &[1; 5],
        )
    }

    fn staircase_five(w: usize) -> WeightedPath {
        path(
            &[
                &[1, 2, 3, 4, 5],
                &[3, 4, 5, 6],
                &[6, 7, 8, 9],
                &[9, 10, 11],
                &[10, 11, 12, 13],
            ],
            &[w; 5],
        )
    }

    #[test]
    fn waterfall_recognition() {
        assert!(!is_waterfall(&overlapping_five()));
        assert_eq!(waterfall_violation(&overlapping_five()), Some((0, 2)));
        assert!(is_waterfall(&staircase_five(1)));
        assert!(is_waterfall(&path(&[&[1, 2, 3]], &[7])));
    }

    #[test]
    fn amplitudes() {
        let p = staircase_five(1);
        assert_eq!(
            amplitude(&p, 0, 1).unwrap(),
            ColorSet::from([1, 2, 3, 4, 5, 6])
        );
        assert_eq!(
            amplitude(&p, 3, 4).unwrap(),
            ColorSet::from([9, 10, 11, 12, 13])
        );
        assert_eq!(amplitude(&p, 2, 2).unwrap(), p.lists[2]);
        assert_eq!(
            amplitude(&p, 2, 5),
            Err(PathError::IndexOutOfRange { i: 2, j: 5, len: 5 })
        );
        assert!(amplitude(&p, 3, 1).is_err());
    }

    #[test]
    fn goodness() {
        let five: Vec<u32> = (1..=5).collect();
        assert!(is_good(&path(
            &[&five, &five, &five, &five, &five],
            &[2; 5]
        )));
        assert!(!is_good(&path(&[&[1, 2], &[1, 2, 3], &[1, 2]], &[2, 2, 2])));
        assert!(is_good(&path(&[&[1, 2], &[1, 2, 3], &[1, 3]], &[1, 1, 1])));
        // n = 1 has no interior vertex
        assert!(is_good(&path(&[&[], &[]], &[3, 3])));
    }

    #[test]
    fn transform_small_example() {
        let p = path(&[&[1, 2], &[1, 2, 3], &[1, 3]], &[1, 1, 1]);
        let (lc, trace) = waterfall_transform(&p).unwrap();
        // 2 spans 0..=1, 1 spans 0..=2, 3 spans 1..=2, renamed 1, 2, 3; then 2 is cut at vertex 2
        assert_eq!(
            ids(lc.as_slice()),
            vec![vec![1, 2], vec![1, 2, 3], vec![3, 4]]
        );
        assert_eq!(
            trace.replacements,
            vec![Replacement {
                old: Color(2),
                new: Color(4),
                origin: 0,
                last: 2
            }]
        );
        assert_eq!(trace.replay(&p.lists).unwrap(), lc);
        assert!(is_waterfall(&p.with_lists(lc.clone())));
        assert_eq!(feasible(&p), feasible(&p.with_lists(lc)));
    }

    #[test]
    fn transform_leaves_canonical_waterfall_lists_alone() {
        let p = path(&[&[1, 2], &[2, 3], &[3, 4]], &[1, 1, 1]);
        let (lc, trace) = waterfall_transform(&p).unwrap();
        assert_eq!(lc, p.lists);
        assert!(trace.replacements.is_empty());
        assert!(trace.is_identity());
    }

    #[test]
    fn transform_overlapping_path() {
        let p = overlapping_five();
        let (lc, trace) = waterfall_transform(&p).unwrap();
        let q = p.with_lists(lc.clone());
        assert!(is_waterfall(&q));
        assert_eq!(
            lc.iter().map(ColorSet::len).collect::<Vec<_>>(),
            vec![5, 4, 5, 3, 4]
        );
        assert_eq!(trace.replay(&p.lists).unwrap(), lc);
        assert_eq!(feasible(&p), feasible(&q));
        assert!(feasible(&p));
    }

    #[test]
    fn transform_rejects_bad_lists() {
        let p = path(&[&[1, 2], &[1], &[1, 2]], &[1, 1, 1]);
        assert_eq!(
            waterfall_transform(&p).unwrap_err(),
            PathError::NotGood {
                index: 1,
                size: 1,
                needed: 2
            }
        );
    }

    #[test]
    fn transform_splits_gapped_colors() {
        // color 1 appears at 0 and again at 2 after a gap: two runs, two labels
        let p = path(&[&[1, 2], &[2, 3], &[1, 3]], &[1, 1, 1]);
        let (lc, trace) = waterfall_transform(&p).unwrap();
        assert_eq!(
            trace.runs.iter().filter(|r| r.original == Color(1)).count(),
            2
        );
        assert!(trace.replacements.is_empty());
        assert!(is_waterfall(&p.with_lists(lc)));
    }

    fn hand_trace() -> (WeightedPath, TransformTrace) {
        let p = path(&[&[1, 2], &[1, 2, 3], &[1, 3]], &[1, 1, 1]);
        let mut trace = TransformTrace::identity(&p).unwrap();
        trace.replacements.push(Replacement {
            old: Color(1),
            new: Color(4),
            origin: 0,
            last: 2,
        });
        (p, trace)
    }

    #[test]
    fn pullback_free_substitute() {
        let (p, trace) = hand_trace();
        let cprime = MultiColoring::from(vec![
            ColorSet::from([2]),
            ColorSet::from([1]),
            ColorSet::from([4]),
        ]);
        let (c, cases) = pullback_coloring_traced(&trace, &p, &cprime).unwrap();
        assert_eq!(ids(c.as_slice()), vec![vec![2], vec![3], vec![1]]);
        assert_eq!(
            cases,
            PullbackCases {
                rename: 0,
                free_substitute: 1,
                swap: 0
            }
        );
    }

    #[test]
    fn pullback_plain_rename() {
        let (p, trace) = hand_trace();
        let cprime = MultiColoring::from(vec![
            ColorSet::from([2]),
            ColorSet::from([3]),
            ColorSet::from([4]),
        ]);
        let (c, cases) = pullback_coloring_traced(&trace, &p, &cprime).unwrap();
        assert_eq!(ids(c.as_slice()), vec![vec![2], vec![3], vec![1]]);
        assert_eq!(cases.rename, 1);
    }

    #[test]
    fn pullback_swap() {
        // L'(1) = {1, 2} is exhausted by c'(0) ∪ c'(1) ∪ c'(2), so x = 1 and z = 2 trade places
        let p = path(&[&[1, 2], &[1, 2], &[1, 3]], &[1, 1, 1]);
        let mut trace = TransformTrace::identity(&p).unwrap();
        trace.replacements.push(Replacement {
            old: Color(1),
            new: Color(4),
            origin: 0,
            last: 2,
        });
        let cprime = MultiColoring::from(vec![
            ColorSet::from([2]),
            ColorSet::from([1]),
            ColorSet::from([4]),
        ]);
        let (c, cases) = pullback_coloring_traced(&trace, &p, &cprime).unwrap();
        assert_eq!(ids(c.as_slice()), vec![vec![1], vec![2], vec![1]]);
        assert_eq!(cases.swap, 1);
    }

    #[test]
    fn pullback_identity_and_errors() {
        let p = path(&[&[1, 2], &[2, 3]], &[1, 1]);
        let trace = TransformTrace::identity(&p).unwrap();
        let cprime = MultiColoring::from(vec![ColorSet::from([1]), ColorSet::from([3])]);
        assert_eq!(pullback_coloring(&trace, &p, &cprime).unwrap(), cprime);
        let bad = MultiColoring::from(vec![ColorSet::from([2]), ColorSet::from([2])]);
        assert!(matches!(
            pullback_coloring(&trace, &p, &bad),
            Err(PathError::InvalidColoring(_))
        ));
    }

    #[test]
    fn window_criterion_examples() {
        assert!(waterfall_colorable(&path(&[&[1, 2], &[2, 3, 4], &[4, 5]], &[1, 1, 1])).unwrap());
        assert!(!waterfall_colorable(&path(&[&[1], &[1, 2], &[2]], &[1, 1, 1])).unwrap());
        assert!(waterfall_colorable(&staircase_five(0)).unwrap());
        assert_eq!(
            waterfall_colorable(&overlapping_five()),
            Err(PathError::NotWaterfall { i: 0, j: 2 })
        );
    }

    #[test]
    fn greedy_examples() {
        let p = path(&[&[1, 2], &[2, 3, 4], &[4, 5]], &[1, 1, 1]);
        let out = waterfall_color(&p).unwrap();
        // 1 leaves at vertex 0; at vertex 1 both 2 and 3 leave, 2 is lower; 4 is lower than 5
        assert_eq!(
            ids(out.coloring.as_slice()),
            vec![vec![1], vec![2], vec![4]]
        );
        assert!(!out.fallback);
        assert!(p.verify(&out.coloring).is_pass());

        let single = path(&[&[1, 2, 3]], &[2]);
        assert_eq!(
            ids(waterfall_color(&single).unwrap().coloring.as_slice()),
            vec![vec![1, 2]]
        );

        let stairs = staircase_five(2);
        let out = waterfall_color(&stairs).unwrap();
        assert_eq!(
            ids(out.coloring.as_slice()),
            vec![
                vec![1, 2],
                vec![3, 4],
                vec![6, 7],
                vec![9, 10],
                vec![11, 12]
            ]
        );
        assert!(stairs.verify(&out.coloring).is_pass());
    }

    #[test]
    fn greedy_rejects_infeasible() {
        assert_eq!(
            waterfall_color(&path(&[&[1], &[1, 2], &[2]], &[1, 1, 1])),
            Err(PathError::Infeasible)
        );
    }

    #[test]
    fn prefix_examples() {
        let p = path(&[&[1], &[1, 2], &[2, 3]], &[1, 1, 1]);
        assert!(prefix_colorable(&p).unwrap());
        assert!(waterfall_colorable(&p).unwrap());
        let c = solve_path_exact(&p, None, None, &OracleConfig::default())
            .unwrap()
            .unwrap();
        assert_eq!(ids(c.as_slice()), vec![vec![1], vec![2], vec![3]]);
        assert!(prefix_colorable(&staircase_five(0)).unwrap());
        assert!(prefix_colorable(&staircase_five(1)).unwrap());
        let tight = path(&[&[1], &[1, 2], &[2]], &[1, 1, 1]);
        assert!(!prefix_colorable(&tight).unwrap());
        let short_end = path(&[&[1], &[1, 2], &[]], &[1, 1, 1]);
        assert_eq!(
            prefix_colorable(&short_end),
            Err(PathError::EndpointTooSmall { size: 0, demand: 1 })
        );
    }

    #[test]
    fn even_ceil_examples() {
        assert_eq!(even_ceil(4, 1), 4);
        assert_eq!(even_ceil(2, 1), 2);
        assert_eq!(even_ceil(8, 3), 4);
        assert_eq!(even_ceil(0, 5), 0);
        assert_eq!(even_ceil(5, 1), 6);
        for m in 1..10 {
            assert_eq!(
                handle_threshold(&ProblemParams::five_two(m).unwrap()).unwrap(),
                4
            );
        }
    }

    proptest::proptest! {
        #[test]
        fn even_ceil_is_tight(num in 0u64..10_000, den in 1u64..500) {
            let p = even_ceil(num, den);
            proptest::prop_assert_eq!(p % 2, 0);
            proptest::prop_assert!(p * den >= num);
            proptest::prop_assert!(p < 2 || (p - 2) * den < num);
        }
    }

    #[test]
    fn long_handle_examples() {
        let params = ProblemParams::new(5, 2).unwrap();
        let p = WeightedPath::uniform(
            ListAssignment(vec![
                ColorSet::from([1, 2]),
                ColorSet::from([1, 2, 3, 4, 5]),
                ColorSet::from([3, 4, 5, 6, 7]),
                ColorSet::from([6, 7, 8, 9, 10]),
                ColorSet::from([9, 10]),
            ]),
            2,
        );
        let c = color_handle_long(&p, &params).unwrap();
        assert!(p.verify(&c).is_pass());
        assert_eq!(c[0], ColorSet::from([1, 2]));
        assert_eq!(c[4], ColorSet::from([9, 10]));

        let params = ProblemParams::new(3, 1).unwrap();
        let p = WeightedPath::uniform(
            ListAssignment(vec![
                ColorSet::from([1]),
                ColorSet::from([1, 2, 3]),
                ColorSet::from([2]),
            ]),
            1,
        );
        let c = color_handle_long(&p, &params).unwrap();
        assert_eq!(ids(c.as_slice()), vec![vec![1], vec![3], vec![2]]);

        let params = ProblemParams::new(3, 0).unwrap();
        let p = WeightedPath::uniform(
            ListAssignment(vec![
                ColorSet::new(),
                ColorSet::from([1, 2, 3]),
                ColorSet::new(),
            ]),
            0,
        );
        let c = color_handle_long(&p, &params).unwrap();
        assert!(c.iter().all(ColorSet::is_empty));
    }

    #[test]
    fn long_handle_preconditions() {
        let params = ProblemParams::new(5, 2).unwrap();
        let five = ColorSet::from([1, 2, 3, 4, 5]);
        let p = WeightedPath::uniform(
            ListAssignment(vec![
                ColorSet::from([1, 2]),
                five.clone(),
                five.clone(),
                ColorSet::from([1, 2]),
            ]),
            2,
        );
        assert_eq!(
            color_handle_long(&p, &params),
            Err(PathError::TooShort { n: 3, required: 4 })
        );
        let zero = ProblemParams::new(4, 2).unwrap();
        assert_eq!(color_handle_long(&p, &zero), Err(PathError::ZeroExcess));
        let wrong = WeightedPath::uniform(ListAssignment(vec![five.clone(), five.clone()]), 2);
        assert_eq!(
            color_handle_long(&wrong, &params),
            Err(PathError::ListSize {
                index: 0,
                expected: 2,
                actual: 5
            })
        );
        let mut uneven = p.clone();
        uneven.weights = WeightFn(vec![2, 2, 1, 2]);
        assert!(matches!(
            color_handle_long(&uneven, &params),
            Err(PathError::NonUniformDemand { index: 2, .. })
        ));
    }

    fn short_example(last: &[u32]) -> WeightedPath {
        WeightedPath::uniform(
            ListAssignment(vec![
                ColorSet::from([1, 2]),
                ColorSet::from([1, 2, 3, 4, 5]),
                ColorSet::from([3, 4, 5, 6, 7]),
                ColorSet::from([6, 7, 8]),
                ColorSet::from_ids(last.iter().copied()),
            ]),
            2,
        )
    }

    #[test]
    fn short_handle_examples() {
        let params = ProblemParams::new(5, 2).unwrap();
        let p = short_example(&[8, 9, 10]);
        let c = color_handle_short(&p, &params).unwrap();
        assert!(p.verify(&c).is_pass());
        assert_eq!(c[0], ColorSet::from([1, 2]));
        // D = {9}, the lowest color of L(4) \ L(3)
        assert!(c[4].contains(Color(9)));
        assert!(feasible(&p));

        let bad = short_example(&[6, 7, 8]);
        assert_eq!(
            color_handle_short(&bad, &params),
            Err(PathError::AmplitudeTooSmall { have: 3, need: 4 })
        );
    }

    #[test]
    fn short_handle_with_empty_reserve() {
        // b = e = 1: b + e = 2, D = ∅, w'(n) = 1
        let params = ProblemParams::new(3, 1).unwrap();
        let p = WeightedPath::uniform(
            ListAssignment(vec![
                ColorSet::from([1]),
                ColorSet::from([1, 2, 3]),
                ColorSet::from([2, 3]),
                ColorSet::from([3, 4]),
            ]),
            1,
        );
        let c = color_handle_short(&p, &params).unwrap();
        assert!(p.verify(&c).is_pass());
    }

    #[test]
    fn trimming_keeps_the_amplitude() {
        let (p, l) = trim_end_lists(
            &ColorSet::from([1, 2, 3, 4, 5]),
            &ColorSet::from([1, 2, 3, 6, 7]),
            3,
        )
        .unwrap();
        assert_eq!(p, ColorSet::from([4, 5, 1]));
        assert_eq!(l, ColorSet::from([2, 3, 6]));
        assert_eq!(p.union(&l).len(), 6);
        assert!(trim_end_lists(&ColorSet::from([1]), &ColorSet::from([1, 2]), 2).is_err());
    }

    #[test]
    fn hall_examples() {
        assert!(!hall_check_path(&path(&[&[1], &[1], &[1]], &[1, 1, 1])));
        assert!(hall_check_path(&path(&[&[1], &[2], &[1]], &[1, 1, 1])));
        assert!(hall_check_path(&path(&[&[], &[], &[]], &[0, 0, 0])));
        assert!(!hall_check_path(&path(&[&[1], &[1, 2], &[2]], &[1, 1, 1])));
    }
}
