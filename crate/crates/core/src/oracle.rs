//! Exact feasibility and coloring for weighted paths and cycles.
//!
//! The state at a vertex is the chosen color set itself, so a path is solved
//! by a layered DP whose transitions are "the two chosen sets are disjoint".
//! Candidate sets are enumerated in lexicographic order of color ids and the
//! reconstruction always takes the first surviving candidate, so the
//! coloring returned is the lexicographically first one.

use thiserror::Error;

use crate::color::{Color, ColorSet, ListAssignment, MultiColoring, WeightFn};
use crate::waterfall::WeightedPath;

pub const DEFAULT_MAX_TRANSITIONS: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Upper bound on the number of pairwise state checks one call may do.
    pub max_transitions: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_transitions: DEFAULT_MAX_TRANSITIONS,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("state space needs about {needed} transitions, cap is {cap}")]
    ResourceCap { needed: u64, cap: u64 },
    #[error("fixed set at vertex {index} is not a {demand}-subset of its list")]
    InvalidFixedSet { index: usize, demand: usize },
    #[error("cycle of length {0} is too short (need at least 3)")]
    CycleTooShort(usize),
    #[error("cycle has {lists} lists but {weights} weights")]
    LengthMismatch { lists: usize, weights: usize },
}

/// All `k`-subsets of `list` in lexicographic order.
pub fn candidate_sets(list: &ColorSet, k: usize) -> Vec<ColorSet> {
    let items: Vec<Color> = list.iter().collect();
    let mut out = Vec::new();
    for_each_combination(items.len(), k, |idx| {
        out.push(idx.iter().map(|&i| items[i]).collect())
    });
    out
}

/// Exact solver for a weighted path, optionally pinning the color sets of
/// the first and last vertex. `Ok(None)` means infeasible.
pub fn solve_path_exact(
    path: &WeightedPath,
    fixed_start: Option<&ColorSet>,
    fixed_end: Option<&ColorSet>,
    config: &OracleConfig,
) -> Result<Option<MultiColoring>, OracleError> {
    let mut spent = 0;
    solve_slices(
        path.lists.as_slice(),
        path.weights.as_slice(),
        fixed_start,
        fixed_end,
        config,
        &mut spent,
    )
}

/// Exact solver for a weighted cycle `0 - 1 - ... - (len-1) - 0`.
///
/// Vertex 0 is the anchor: each of its candidate sets is tried in order and
/// the cycle cut open at the anchor is solved as a path whose two ends must
/// avoid the anchor's set.
pub fn solve_cycle_exact(
    lists: &ListAssignment,
    weights: &WeightFn,
    config: &OracleConfig,
) -> Result<Option<MultiColoring>, OracleError> {
    check_cycle(lists, weights)?;
    let mut spent = 0;
    for anchor in candidate_sets(&lists[0], weights[0]) {
        let (rest, rest_w) = open_cycle(lists, weights, &anchor);
        if let Some(tail) = solve_slices(&rest, &rest_w, None, None, config, &mut spent)? {
            let mut sets = Vec::with_capacity(lists.len());
            sets.push(anchor);
            sets.extend(tail.into_inner());
            return Ok(Some(MultiColoring(sets)));
        }
    }
    Ok(None)
}

/// What [`enumerate_feasibility`] should decide.
#[derive(Clone, Copy, Debug)]
pub enum FeasibilityInstance<'a> {
    Path(&'a WeightedPath),
    Cycle {
        lists: &'a ListAssignment,
        weights: &'a WeightFn,
    },
}

/// Verdict-only variant of the solvers: forward reachability with early
/// exit, no coloring is materialized. `budget` caps transitions as in
/// [`OracleConfig`].
pub fn enumerate_feasibility(
    instance: FeasibilityInstance<'_>,
    budget: u64,
) -> Result<bool, OracleError> {
    let config = OracleConfig {
        max_transitions: budget,
    };
    let mut spent = 0;
    match instance {
        FeasibilityInstance::Path(path) => feasible_slices(
            path.lists.as_slice(),
            path.weights.as_slice(),
            &config,
            &mut spent,
        ),
        FeasibilityInstance::Cycle { lists, weights } => {
            check_cycle(lists, weights)?;
            for anchor in candidate_sets(&lists[0], weights[0]) {
                let (rest, rest_w) = open_cycle(lists, weights, &anchor);
                if feasible_slices(&rest, &rest_w, &config, &mut spent)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

fn check_cycle(lists: &ListAssignment, weights: &WeightFn) -> Result<(), OracleError> {
    if lists.len() != weights.len() {
        return Err(OracleError::LengthMismatch {
            lists: lists.len(),
            weights: weights.len(),
        });
    }
    if lists.len() < 3 {
        return Err(OracleError::CycleTooShort(lists.len()));
    }
    Ok(())
}

fn open_cycle(
    lists: &ListAssignment,
    weights: &WeightFn,
    anchor: &ColorSet,
) -> (Vec<ColorSet>, Vec<usize>) {
    let mut rest: Vec<ColorSet> = lists.as_slice()[1..].to_vec();
    let last = rest.len() - 1;
    rest[0].difference_with(anchor);
    rest[last].difference_with(anchor);
    (rest, weights.as_slice()[1..].to_vec())
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

fn estimate(sizes: &[u64]) -> u64 {
    let pairs = sizes
        .windows(2)
        .fold(0u64, |acc, w| acc.saturating_add(w[0].saturating_mul(w[1])));
    pairs.saturating_add(sizes.iter().fold(0u64, |acc, &s| acc.saturating_add(s)))
}

fn charge(needed: u64, config: &OracleConfig, spent: &mut u64) -> Result<(), OracleError> {
    let total = spent.saturating_add(needed);
    if total > config.max_transitions {
        return Err(OracleError::ResourceCap {
            needed: total,
            cap: config.max_transitions,
        });
    }
    *spent = total;
    Ok(())
}

/// Lexicographic `k`-combinations of `0..n`.
fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

trait Mask: Clone {
    fn disjoint(&self, other: &Self) -> bool;
}

impl Mask for u128 {
    #[inline]
    fn disjoint(&self, other: &Self) -> bool {
        self & other == 0
    }
}

impl Mask for ColorSet {
    #[inline]
    fn disjoint(&self, other: &Self) -> bool {
        self.is_disjoint(other)
    }
}

/// Local dense numbering of every color on the instance.
struct Universe {
    colors: Vec<Color>,
}

impl Universe {
    fn new(lists: &[ColorSet]) -> Self {
        let mut all = ColorSet::new();
        for l in lists {
            all.union_with(l);
        }
        Universe {
            colors: all.iter().collect(),
        }
    }

    fn bit(&self, c: Color) -> usize {
        self.colors
            .binary_search(&c)
            .expect("color outside the universe")
    }

    fn mask(&self, set: &ColorSet) -> u128 {
        set.iter().fold(0, |m, c| m | 1u128 << self.bit(c))
    }

    fn decode(&self, mut mask: u128) -> ColorSet {
        let mut out = ColorSet::new();
        while mask != 0 {
            out.insert(self.colors[mask.trailing_zeros() as usize]);
            mask &= mask - 1;
        }
        out
    }
}

fn states_for<M>(
    list: &ColorSet,
    k: usize,
    fixed: [Option<&ColorSet>; 2],
    to_mask: &impl Fn(&ColorSet) -> M,
    from_items: &impl Fn(&[Color], &[usize]) -> M,
) -> Vec<M> {
    match fixed {
        [Some(a), Some(b)] if a != b => Vec::new(),
        [Some(f), _] | [None, Some(f)] => vec![to_mask(f)],
        [None, None] => {
            let items: Vec<Color> = list.iter().collect();
            let mut out = Vec::new();
            for_each_combination(items.len(), k, |idx| out.push(from_items(&items, idx)));
            out
        }
    }
}

fn validate_fixed(
    lists: &[ColorSet],
    weights: &[usize],
    start: Option<&ColorSet>,
    end: Option<&ColorSet>,
) -> Result<(), OracleError> {
    let last = lists.len().wrapping_sub(1);
    for (index, fixed) in [(0, start), (last, end)] {
        if let Some(f) = fixed {
            if lists.is_empty() || f.len() != weights[index] || !f.is_subset(&lists[index]) {
                return Err(OracleError::InvalidFixedSet {
                    index,
                    demand: weights.get(index).copied().unwrap_or(0),
                });
            }
        }
    }
    Ok(())
}

fn layer_sizes(lists: &[ColorSet], weights: &[usize], start: bool, end: bool) -> Vec<u64> {
    let last = lists.len().saturating_sub(1);
    lists
        .iter()
        .zip(weights)
        .enumerate()
        .map(|(i, (l, &w))| {
            if (i == 0 && start) || (i == last && end) {
                1
            } else {
                binomial(l.len(), w)
            }
        })
        .collect()
}

fn build_layers<M>(
    lists: &[ColorSet],
    weights: &[usize],
    start: Option<&ColorSet>,
    end: Option<&ColorSet>,
    to_mask: impl Fn(&ColorSet) -> M,
    from_items: impl Fn(&[Color], &[usize]) -> M,
) -> Vec<Vec<M>> {
    let last = lists.len().saturating_sub(1);
    (0..lists.len())
        .map(|i| {
            let fixed = [
                if i == 0 { start } else { None },
                if i == last { end } else { None },
            ];
            states_for(&lists[i], weights[i], fixed, &to_mask, &from_items)
        })
        .collect()
}

fn solve_slices(
    lists: &[ColorSet],
    weights: &[usize],
    start: Option<&ColorSet>,
    end: Option<&ColorSet>,
    config: &OracleConfig,
    spent: &mut u64,
) -> Result<Option<MultiColoring>, OracleError> {
    validate_fixed(lists, weights, start, end)?;
    charge(
        estimate(&layer_sizes(lists, weights, start.is_some(), end.is_some())),
        config,
        spent,
    )?;
    if lists.is_empty() {
        return Ok(Some(MultiColoring::default()));
    }
    let universe = Universe::new(lists);
    let sets = if universe.colors.len() <= 128 {
        let layers = build_layers(
            lists,
            weights,
            start,
            end,
            |s| universe.mask(s),
            |items, idx| {
                idx.iter()
                    .fold(0u128, |m, &i| m | 1u128 << universe.bit(items[i]))
            },
        );
        best_path(&layers).map(|choice| {
            choice
                .iter()
                .enumerate()
                .map(|(i, &s)| universe.decode(layers[i][s]))
                .collect()
        })
    } else {
        let layers = build_layers(
            lists,
            weights,
            start,
            end,
            |s| s.clone(),
            |items, idx| idx.iter().map(|&i| items[i]).collect(),
        );
        best_path(&layers).map(|choice| {
            choice
                .iter()
                .enumerate()
                .map(|(i, &s)| layers[i][s].clone())
                .collect()
        })
    };
    Ok(sets.map(MultiColoring))
}

fn feasible_slices(
    lists: &[ColorSet],
    weights: &[usize],
    config: &OracleConfig,
    spent: &mut u64,
) -> Result<bool, OracleError> {
    charge(
        estimate(&layer_sizes(lists, weights, false, false)),
        config,
        spent,
    )?;
    if lists.is_empty() {
        return Ok(true);
    }
    let universe = Universe::new(lists);
    Ok(if universe.colors.len() <= 128 {
        let layers = build_layers(
            lists,
            weights,
            None,
            None,
            |s| universe.mask(s),
            |items, idx| {
                idx.iter()
                    .fold(0u128, |m, &i| m | 1u128 << universe.bit(items[i]))
            },
        );
        reachable(&layers)
    } else {
        let layers = build_layers(
            lists,
            weights,
            None,
            None,
            |s| s.clone(),
            |items, idx| idx.iter().map(|&i| items[i]).collect(),
        );
        reachable(&layers)
    })
}

/// Backward feasibility, then a forward pass taking the first viable state.
fn best_path<M: Mask>(layers: &[Vec<M>]) -> Option<Vec<usize>> {
    let last = layers.len() - 1;
    let mut viable: Vec<Vec<bool>> = layers.iter().map(|l| vec![false; l.len()]).collect();
    viable[last].iter_mut().for_each(|v| *v = true);
    for i in (0..last).rev() {
        let (head, tail) = viable.split_at_mut(i + 1);
        let next_ok = &tail[0];
        for (s, state) in layers[i].iter().enumerate() {
            head[i][s] = layers[i + 1]
                .iter()
                .zip(next_ok)
                .any(|(t, &ok)| ok && state.disjoint(t));
        }
    }
    let mut choice = Vec::with_capacity(layers.len());
    let mut prev = viable[0].iter().position(|&ok| ok)?;
    choice.push(prev);
    for i in 1..layers.len() {
        let p = &layers[i - 1][prev];
        prev = (0..layers[i].len())
            .find(|&t| viable[i][t] && p.disjoint(&layers[i][t]))
            .expect("viable state must have a viable successor");
        choice.push(prev);
    }
    Some(choice)
}

fn reachable<M: Mask>(layers: &[Vec<M>]) -> bool {
    let mut frontier: Vec<&M> = layers[0].iter().collect();
    for layer in &layers[1..] {
        frontier = layer
            .iter()
            .filter(|t| frontier.iter().any(|s| s.disjoint(t)))
            .collect();
        if frontier.is_empty() {
            return false;
        }
    }
    !frontier.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::{path_edges, verify_coloring};

    fn path(sets: &[&[u32]], w: &[usize]) -> WeightedPath {
        WeightedPath::new(
            sets.iter()
                .map(|s| ColorSet::from_ids(s.iter().copied()))
                .collect(),
            WeightFn(w.to_vec()),
        )
        .unwrap()
    }

    fn sets(c: &MultiColoring) -> Vec<Vec<u32>> {
        c.iter().map(|s| s.iter().map(|x| x.0).collect()).collect()
    }

    const CFG: OracleConfig = OracleConfig {
        max_transitions: DEFAULT_MAX_TRANSITIONS,
    };

    #[test]
    fn combinations_are_lexicographic() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |idx| seen.push(idx.to_vec()));
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        let mut count = 0;
        for_each_combination(3, 0, |idx| {
            assert!(idx.is_empty());
            count += 1;
        });
        assert_eq!(count, 1);
        for_each_combination(2, 3, |_| panic!("no 3-subsets of a 2-set"));
        assert_eq!(binomial(15, 6), 5005);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn forced_chain_is_infeasible() {
        let p = path(&[&[1], &[1, 2], &[2]], &[1, 1, 1]);
        assert_eq!(solve_path_exact(&p, None, None, &CFG).unwrap(), None);
        assert!(
            !enumerate_feasibility(FeasibilityInstance::Path(&p), DEFAULT_MAX_TRANSITIONS).unwrap()
        );
    }

    #[test]
    fn three_vertex_path() {
        let p = path(&[&[1, 2], &[1, 2, 3], &[1, 3]], &[1, 1, 1]);
        let c = solve_path_exact(&p, None, None, &CFG).unwrap().unwrap();
        // lexicographically first; the ends are not adjacent and may share 1
        assert_eq!(sets(&c), vec![vec![1], vec![2], vec![1]]);
        assert!(verify_coloring(&path_edges(3), &p.lists, &p.weights, &c)
            .unwrap()
            .is_pass());
        // the witness ({2},{3},{1}) is reachable by pinning both ends
        let c = solve_path_exact(&p, Some(&ColorSet::from([2])), None, &CFG)
            .unwrap()
            .unwrap();
        assert_eq!(sets(&c), vec![vec![2], vec![1], vec![3]]);
        let c = solve_path_exact(
            &p,
            Some(&ColorSet::from([2])),
            Some(&ColorSet::from([1])),
            &CFG,
        )
        .unwrap()
        .unwrap();
        assert_eq!(sets(&c), vec![vec![2], vec![3], vec![1]]);
    }

    #[test]
    fn fixed_start_on_single_vertex() {
        let p = path(&[&[1, 2, 3]], &[2]);
        let c = solve_path_exact(&p, Some(&ColorSet::from([1, 2])), None, &CFG)
            .unwrap()
            .unwrap();
        assert_eq!(sets(&c), vec![vec![1, 2]]);
        let c = solve_path_exact(
            &p,
            Some(&ColorSet::from([2, 3])),
            Some(&ColorSet::from([2, 3])),
            &CFG,
        )
        .unwrap()
        .unwrap();
        assert_eq!(sets(&c), vec![vec![2, 3]]);
        assert_eq!(
            solve_path_exact(
                &p,
                Some(&ColorSet::from([1, 2])),
                Some(&ColorSet::from([2, 3])),
                &CFG
            )
            .unwrap(),
            None
        );
    }

    #[test]
    fn bad_fixed_set_is_rejected() {
        let p = path(&[&[1, 2, 3]], &[2]);
        assert_eq!(
            solve_path_exact(&p, Some(&ColorSet::from([1])), None, &CFG),
            Err(OracleError::InvalidFixedSet {
                index: 0,
                demand: 2
            })
        );
        assert!(solve_path_exact(&p, None, Some(&ColorSet::from([1, 4])), &CFG).is_err());
    }

    #[test]
    fn resource_cap_fails_loudly() {
        let big: Vec<u32> = (0..30).collect();
        let p = path(&[&big, &big, &big], &[10, 10, 10]);
        let tiny = OracleConfig {
            max_transitions: 1000,
        };
        assert!(matches!(
            solve_path_exact(&p, None, None, &tiny),
            Err(OracleError::ResourceCap { .. })
        ));
        assert!(matches!(
            enumerate_feasibility(FeasibilityInstance::Path(&p), 1000),
            Err(OracleError::ResourceCap { .. })
        ));
    }

    #[test]
    fn wide_universe_uses_the_generic_masks() {
        // 200 distinct colors: past the u128 fast path
        let a: Vec<u32> = (0..100).collect();
        let b: Vec<u32> = (50..200).collect();
        let p = path(&[&a, &b, &[0, 199]], &[1, 1, 1]);
        let c = solve_path_exact(&p, None, None, &CFG).unwrap().unwrap();
        assert_eq!(sets(&c), vec![vec![0], vec![50], vec![0]]);
        assert!(
            enumerate_feasibility(FeasibilityInstance::Path(&p), DEFAULT_MAX_TRANSITIONS).unwrap()
        );
    }

    #[test]
    fn empty_path() {
        let p = WeightedPath::new(ListAssignment::default(), WeightFn::default()).unwrap();
        assert!(enumerate_feasibility(FeasibilityInstance::Path(&p), 10).unwrap());
        assert_eq!(
            solve_path_exact(&p, None, None, &CFG).unwrap(),
            Some(MultiColoring::default())
        );
    }

    fn cycle(n: usize, list: &[u32], w: usize) -> (ListAssignment, WeightFn) {
        (
            (0..n)
                .map(|_| ColorSet::from_ids(list.iter().copied()))
                .collect(),
            WeightFn::uniform(n, w),
        )
    }

    fn cycle_edges(n: usize) -> Vec<(usize, usize)> {
        let mut e = path_edges(n);
        e.push((n - 1, 0));
        e
    }

    #[test]
    fn c4_alternates() {
        let (l, w) = cycle(4, &[1, 2], 1);
        let c = solve_cycle_exact(&l, &w, &CFG).unwrap().unwrap();
        assert_eq!(sets(&c), vec![vec![1], vec![2], vec![1], vec![2]]);
    }

    #[test]
    fn c5_with_five_lists() {
        let (l, w) = cycle(5, &[1, 2, 3, 4, 5], 2);
        let c = solve_cycle_exact(&l, &w, &CFG).unwrap().unwrap();
        assert_eq!(
            sets(&c),
            vec![vec![1, 2], vec![3, 4], vec![1, 5], vec![2, 3], vec![4, 5]]
        );
        assert!(verify_coloring(&cycle_edges(5), &l, &w, &c)
            .unwrap()
            .is_pass());
    }

    #[test]
    fn c3_two_colors_infeasible() {
        let (l, w) = cycle(3, &[1, 2], 1);
        assert_eq!(solve_cycle_exact(&l, &w, &CFG).unwrap(), None);
        let inst = FeasibilityInstance::Cycle {
            lists: &l,
            weights: &w,
        };
        assert!(!enumerate_feasibility(inst, DEFAULT_MAX_TRANSITIONS).unwrap());
    }

    #[test]
    fn short_cycles_are_rejected() {
        let (l, w) = cycle(2, &[1, 2], 1);
        assert_eq!(
            solve_cycle_exact(&l, &w, &CFG),
            Err(OracleError::CycleTooShort(2))
        );
    }

    #[test]
    fn cycle_verdict_is_rotation_invariant() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.gen_range(3..8);
            let lists: Vec<ColorSet> = (0..n)
                .map(|_| {
                    (0..rng.gen_range(0..5))
                        .map(|_| Color(rng.gen_range(0..6)))
                        .collect()
                })
                .collect();
            let weights: Vec<usize> = (0..n).map(|_| rng.gen_range(0..3)).collect();
            let base = {
                let (l, w) = (ListAssignment(lists.clone()), WeightFn(weights.clone()));
                let c = solve_cycle_exact(&l, &w, &CFG).unwrap();
                if let Some(c) = &c {
                    assert!(verify_coloring(&cycle_edges(n), &l, &w, c)
                        .unwrap()
                        .is_pass());
                }
                let inst = FeasibilityInstance::Cycle {
                    lists: &l,
                    weights: &w,
                };
                assert_eq!(
                    enumerate_feasibility(inst, DEFAULT_MAX_TRANSITIONS).unwrap(),
                    c.is_some()
                );
                c.is_some()
            };
            for r in 1..n {
                let mut l = lists.clone();
                let mut w = weights.clone();
                l.rotate_left(r);
                w.rotate_left(r);
                let verdict = solve_cycle_exact(&ListAssignment(l), &WeightFn(w), &CFG)
                    .unwrap()
                    .is_some();
                assert_eq!(verdict, base);
            }
        }
    }

    #[test]
    fn pinned_endpoints_are_reproduced() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut pinned = 0;
        for _ in 0..500 {
            let n = rng.gen_range(2..7);
            let lists: Vec<ColorSet> = (0..n)
                .map(|_| {
                    (0..rng.gen_range(1..6))
                        .map(|_| Color(rng.gen_range(0..8)))
                        .collect()
                })
                .collect();
            let weights: Vec<usize> = lists
                .iter()
                .map(|l| rng.gen_range(0..=l.len().min(2)))
                .collect();
            let p = WeightedPath::new(ListAssignment(lists), WeightFn(weights)).unwrap();
            let Some(free) = solve_path_exact(&p, None, None, &CFG).unwrap() else {
                assert!(!enumerate_feasibility(
                    FeasibilityInstance::Path(&p),
                    DEFAULT_MAX_TRANSITIONS
                )
                .unwrap());
                continue;
            };
            assert!(verify_coloring(&path_edges(n), &p.lists, &p.weights, &free)
                .unwrap()
                .is_pass());
            let (s, e) = (free[0].clone(), free[n - 1].clone());
            let c = solve_path_exact(&p, Some(&s), Some(&e), &CFG)
                .unwrap()
                .unwrap();
            assert_eq!((&c[0], &c[n - 1]), (&s, &e));
            pinned += 1;
        }
        assert!(pinned > 100);
    }
}
