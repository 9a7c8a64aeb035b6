//! `(L, b)`-coloring of triangle-free lattice graphs with `a`-lists,
//! `a / b >= 5/2`.
//!
//! The solver peels cutting handles until no node is left, colors what
//! remains component by component, then re-attaches the handles in reverse
//! order, extending the coloring across each one:
//!
//! * a handle of length `n >= Even(2b/e)` (or one closing on its own node)
//!   is colored by the long-handle routine with both ends pinned;
//! * a handle of length 3 is colored together with `v3` and `v4`, whose
//!   earlier colors are dropped, by the short-handle routine;
//! * a walk that runs into a leaf instead of a node is colored greedily.

use serde::Serialize;
use thiserror::Error;

use crate::color::{
    verify_coloring, ColorSet, ListAssignment, MultiColoring, ParamsError, ProblemParams,
    Verification, Violation, WeightFn,
};
use crate::lattice::{
    cutting_walk, mirror, mirror_coord, short_handle_context, Coord, Handle, HandleContext,
    LatticeGraph, StructuralError, Walk,
};
use crate::oracle::{solve_cycle_exact, OracleConfig, OracleError};
use crate::waterfall::{
    color_handle_long, color_handle_short, handle_threshold, trim_end_lists, PathError,
    WeightedPath,
};

#[derive(Clone, Debug)]
pub struct SolveInstance {
    pub graph: LatticeGraph,
    pub lists: ListAssignment,
    pub params: ProblemParams,
}

impl SolveInstance {
    /// Checks the gate `a / b >= 5/2`, triangle-freeness and list sizes.
    pub fn new(
        graph: LatticeGraph,
        lists: ListAssignment,
        params: ProblemParams,
    ) -> Result<Self, SolveError> {
        if !params.meets_ratio_gate() {
            return Err(SolveError::RatioGate {
                a: params.a,
                b: params.b,
            });
        }
        if graph.len() != lists.len() {
            return Err(SolveError::LengthMismatch {
                vertices: graph.len(),
                lists: lists.len(),
            });
        }
        if let Some(corners) = graph.find_triangle() {
            return Err(SolveError::Triangle { corners });
        }
        for (i, list) in lists.iter().enumerate() {
            if list.len() != params.a {
                return Err(SolveError::ListSize {
                    vertex: graph.coord(i),
                    expected: params.a,
                    actual: list.len(),
                });
            }
        }
        Ok(SolveInstance {
            graph,
            lists,
            params,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseKind {
    Isolated,
    Path,
    EvenCycle,
    OddCycle,
}

/// How a base cycle got its coloring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleRoute {
    Oracle,
    /// The oracle hit its resource cap; one vertex was fixed and the rest
    /// colored as a closed long handle.
    ClosedHandle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum DecompositionStep {
    /// The next handle was found in the mirror image of the graph.
    Mirror,
    LongHandle {
        handle: Handle,
    },
    ShortHandle {
        context: HandleContext,
    },
    /// The cutting walk from the node ended at a leaf.
    PendantChain {
        chain: Vec<Coord>,
    },
    BaseComponent {
        kind: BaseKind,
        vertices: Vec<Coord>,
        #[serde(skip_serializing_if = "Option::is_none")]
        route: Option<CycleRoute>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub coloring: MultiColoring,
    pub steps: Vec<DecompositionStep>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("a/b = {a}/{b} is below 5/2")]
    RatioGate { a: usize, b: usize },
    #[error("graph has {vertices} vertices but {lists} lists")]
    LengthMismatch { vertices: usize, lists: usize },
    #[error("graph contains the triangle {:?}", corners)]
    Triangle { corners: [Coord; 3] },
    #[error("list at {vertex} has {actual} colors, expected {expected}")]
    ListSize {
        vertex: Coord,
        expected: usize,
        actual: usize,
    },
    #[error("structural finding: {error}")]
    Structural {
        error: StructuralError,
        trace: Vec<DecompositionStep>,
    },
    #[error("extension failed at step {step}: {source}")]
    Extension {
        step: usize,
        source: PathError,
        trace: Vec<DecompositionStep>,
    },
    #[error("base cycle through {start} has no coloring")]
    BaseInfeasible { start: Coord },
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("final coloring failed verification: {0}")]
    Verification(Violation),
}

struct Colors<'a> {
    graph: &'a LatticeGraph,
    lists: &'a ListAssignment,
    sets: Vec<Option<ColorSet>>,
}

impl Colors<'_> {
    fn list(&self, c: Coord) -> &ColorSet {
        &self.lists[self.graph.index_of(c).expect("vertex of the instance")]
    }

    fn get(&self, c: Coord) -> &ColorSet {
        self.sets[self.graph.index_of(c).expect("vertex of the instance")]
            .as_ref()
            .expect("colored vertex")
    }

    fn set(&mut self, c: Coord, colors: ColorSet) {
        let i = self.graph.index_of(c).expect("vertex of the instance");
        self.sets[i] = Some(colors);
    }
}

/// Knobs that do not change what a valid answer is.
#[derive(Clone, Copy, Debug, Default)]
pub struct SolveConfig {
    /// Cap for the exact cycle solver used on base cycles. When it is hit
    /// the cycle is colored as a closed handle instead.
    pub oracle: OracleConfig,
}

pub fn solve(instance: &SolveInstance) -> Result<Solution, SolveError> {
    solve_with(instance, &SolveConfig::default())
}

pub fn solve_with(instance: &SolveInstance, config: &SolveConfig) -> Result<Solution, SolveError> {
    let SolveInstance {
        graph,
        lists,
        params,
    } = instance;
    let b = params.b;
    if b == 0 {
        return Ok(Solution {
            coloring: MultiColoring(vec![ColorSet::new(); graph.len()]),
            steps: Vec::new(),
        });
    }
    let threshold = handle_threshold(params).map_err(|source| SolveError::Extension {
        step: 0,
        source,
        trace: Vec::new(),
    })?;

    let Decomposition {
        mut steps,
        remaining,
    } = decompose(graph, threshold)?;
    let peeled = steps.len();

    let mut colors = Colors {
        graph,
        lists,
        sets: vec![None; graph.len()],
    };
    for component in remaining.components() {
        let step = solve_component(&remaining, &component, &mut colors, params, config, &steps)?;
        steps.push(step);
    }

    for step in (0..peeled).rev() {
        extend(&steps[step], &mut colors, params).map_err(|source| SolveError::Extension {
            step,
            source,
            trace: steps.clone(),
        })?;
    }

    let coloring = MultiColoring(
        colors
            .sets
            .into_iter()
            .map(|s| s.expect("every vertex colored"))
            .collect(),
    );
    let weights = WeightFn::uniform(graph.len(), b);
    match verify_coloring(&graph.edges(), lists, &weights, &coloring) {
        Ok(Verification::Pass) => Ok(Solution { coloring, steps }),
        Ok(Verification::Fail(v)) => Err(SolveError::Verification(v)),
        Err(e) => unreachable!("lengths were checked on construction: {e}"),
    }
}

/// The handle-peeling half of [`solve`], without colors: the steps in
/// peeling order and the node-free graph left at the end.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub steps: Vec<DecompositionStep>,
    pub remaining: LatticeGraph,
}

/// Peels cutting handles until no node is left. Handles of length at least
/// `threshold`, or closing on their own node, are long; anything shorter
/// must be a length-3 handle with a context, or a structural error results.
pub fn decompose(graph: &LatticeGraph, threshold: usize) -> Result<Decomposition, SolveError> {
    let mut steps = Vec::new();
    let mut remaining = graph.clone();
    let structural =
        |error: StructuralError, steps: &Vec<DecompositionStep>| SolveError::Structural {
            error,
            trace: steps.clone(),
        };

    while !remaining.nodes().is_empty() {
        if let Some(&vertex) = remaining.unclassified_degree_three().first() {
            return Err(structural(
                StructuralError::UnclassifiedDegreeThree { vertex },
                &steps,
            ));
        }
        let (frame, mirrored) = match remaining.cutting_node() {
            Some(_) => (remaining.clone(), false),
            None => (mirror(&remaining).graph, true),
        };
        let back = |c: Coord| if mirrored { mirror_coord(c) } else { c };
        let walk = cutting_walk(&frame).expect("a graph with nodes has a cutting node on one side");
        if mirrored {
            steps.push(DecompositionStep::Mirror);
        }
        let step = match walk {
            Walk::Pendant(chain) => DecompositionStep::PendantChain {
                chain: chain.into_iter().map(back).collect(),
            },
            Walk::Handle(h) if h.is_closed() || h.length() >= threshold => {
                DecompositionStep::LongHandle {
                    handle: Handle {
                        vertices: h.vertices.into_iter().map(back).collect(),
                    },
                }
            }
            Walk::Handle(h) => {
                let ctx = short_handle_context(&frame, &h).map_err(|e| structural(e, &steps))?;
                DecompositionStep::ShortHandle {
                    context: HandleContext {
                        handle: Handle {
                            vertices: ctx.handle.vertices.into_iter().map(back).collect(),
                        },
                        v3: back(ctx.v3),
                        v4: back(ctx.v4),
                        v5: ctx.v5.map(back),
                        u: ctx.u.map(back),
                    },
                }
            }
        };
        let removed: Vec<Coord> = match &step {
            DecompositionStep::PendantChain { chain } => chain[1..].to_vec(),
            DecompositionStep::LongHandle { handle } => handle.interior().to_vec(),
            DecompositionStep::ShortHandle { context } => context.handle.interior().to_vec(),
            _ => unreachable!("peeling produces handle steps only"),
        };
        steps.push(step);
        remaining = remaining.filter(|c| !removed.contains(&c));
    }
    Ok(Decomposition { steps, remaining })
}

/// Solves the mirror image of the instance and carries the coloring back
/// (vertex `i` of the image is the image of vertex `i`).
pub fn solve_mirrored(instance: &SolveInstance) -> Result<Solution, SolveError> {
    let image = SolveInstance {
        graph: mirror(&instance.graph).graph,
        lists: instance.lists.clone(),
        params: instance.params,
    };
    let mut solution = solve(&image)?;
    solution.steps.insert(0, DecompositionStep::Mirror);
    Ok(solution)
}

/// `a = 5m`, `b = 2m`.
pub fn solve_5m_2m(
    graph: LatticeGraph,
    lists: ListAssignment,
    m: usize,
) -> Result<Solution, SolveError> {
    let params = ProblemParams::five_two(m)?;
    solve(&SolveInstance::new(graph, lists, params)?)
}

fn extend(
    step: &DecompositionStep,
    colors: &mut Colors<'_>,
    params: &ProblemParams,
) -> Result<(), PathError> {
    let b = params.b;
    match step {
        DecompositionStep::PendantChain { chain } => {
            for pair in chain.windows(2) {
                let chosen = colors
                    .list(pair[1])
                    .difference(colors.get(pair[0]))
                    .lowest(b);
                if chosen.len() < b {
                    return Err(PathError::Infeasible);
                }
                colors.set(pair[1], chosen);
            }
        }
        DecompositionStep::LongHandle { handle: h } => {
            let n = h.length();
            let sets: Vec<ColorSet> = h
                .vertices
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    if i == 0 || i == n {
                        colors.get(v).clone()
                    } else {
                        colors.list(v).clone()
                    }
                })
                .collect();
            let path = WeightedPath::uniform(ListAssignment(sets), b);
            let c = color_handle_long(&path, params)?;
            for (i, &v) in h.interior().iter().enumerate() {
                colors.set(v, c[i + 1].clone());
            }
        }
        DecompositionStep::ShortHandle { context: ctx } => {
            let v = &ctx.handle.vertices;
            let size = b + params.e;
            let empty = ColorSet::new();
            let at_u = ctx.u.map_or(&empty, |u| colors.get(u));
            let at_v5 = ctx.v5.map_or(&empty, |v5| colors.get(v5));
            let (l3, l4) = trim_end_lists(
                &colors.list(ctx.v3).difference(at_u),
                &colors.list(ctx.v4).difference(at_v5),
                size,
            )?;
            let sets = vec![
                colors.get(v[0]).clone(),
                colors.list(v[1]).clone(),
                colors.list(v[2]).clone(),
                l3,
                l4,
            ];
            let path = WeightedPath::uniform(ListAssignment(sets), b);
            let c = color_handle_short(&path, params)?;
            for (i, &vertex) in [v[1], v[2], ctx.v3, ctx.v4].iter().enumerate() {
                colors.set(vertex, c[i + 1].clone());
            }
        }
        DecompositionStep::Mirror | DecompositionStep::BaseComponent { .. } => {}
    }
    Ok(())
}

fn solve_component(
    g: &LatticeGraph,
    component: &[Coord],
    colors: &mut Colors<'_>,
    params: &ProblemParams,
    config: &SolveConfig,
    steps: &[DecompositionStep],
) -> Result<DecompositionStep, SolveError> {
    let b = params.b;
    let start = *component.iter().min().expect("components are nonempty");
    if component.len() == 1 {
        colors.set(start, colors.list(start).lowest(b));
        return Ok(DecompositionStep::BaseComponent {
            kind: BaseKind::Isolated,
            vertices: vec![start],
            route: None,
        });
    }
    let is_cycle = component.iter().all(|&c| g.degree(c) == 2);
    let first = if is_cycle {
        start
    } else {
        *component
            .iter()
            .filter(|&&c| g.degree(c) <= 1)
            .min()
            .expect("a path has an end")
    };
    let order = trace_component(g, first, component.len());

    if !is_cycle {
        colors.set(order[0], colors.list(order[0]).lowest(b));
        for pair in order.windows(2) {
            let chosen = colors
                .list(pair[1])
                .difference(colors.get(pair[0]))
                .lowest(b);
            colors.set(pair[1], chosen);
        }
        return Ok(DecompositionStep::BaseComponent {
            kind: BaseKind::Path,
            vertices: order,
            route: None,
        });
    }

    let kind = if order.len().is_multiple_of(2) {
        BaseKind::EvenCycle
    } else {
        BaseKind::OddCycle
    };
    let lists = ListAssignment(order.iter().map(|&c| colors.list(c).clone()).collect());
    let weights = WeightFn::uniform(order.len(), b);
    let route = match solve_cycle_exact(&lists, &weights, &config.oracle) {
        Ok(Some(c)) => {
            for (i, &v) in order.iter().enumerate() {
                colors.set(v, c[i].clone());
            }
            CycleRoute::Oracle
        }
        Ok(None) => return Err(SolveError::BaseInfeasible { start }),
        Err(OracleError::ResourceCap { .. }) => {
            let anchor = colors.list(start).lowest(b);
            let mut sets: Vec<ColorSet> = lists.iter().cloned().collect();
            sets[0] = anchor.clone();
            sets.push(anchor.clone());
            let path = WeightedPath::uniform(ListAssignment(sets), b);
            let c = color_handle_long(&path, params).map_err(|source| SolveError::Extension {
                step: steps.len(),
                source,
                trace: steps.to_vec(),
            })?;
            for (i, &v) in order.iter().enumerate() {
                colors.set(v, c[i].clone());
            }
            CycleRoute::ClosedHandle
        }
        Err(e) => return Err(e.into()),
    };
    Ok(DecompositionStep::BaseComponent {
        kind,
        vertices: order,
        route: Some(route),
    })
}

/// Walks a path or cycle component from `first`, stepping to the smaller
/// unvisited neighbor.
fn trace_component(g: &LatticeGraph, first: Coord, len: usize) -> Vec<Coord> {
    let mut order = vec![first];
    let mut prev: Option<Coord> = None;
    let mut cur = first;
    while order.len() < len {
        let next = g
            .neighbors_of(cur)
            .into_iter()
            .filter(|&n| Some(n) != prev && n != first)
            .min()
            .expect("component is a path or cycle");
        order.push(next);
        prev = Some(cur);
        cur = next;
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::induced_graph;

    fn c(x: i32, y: i32) -> Coord {
        Coord::new(x, y)
    }

    fn hexagon() -> Vec<Coord> {
        vec![c(0, 0), c(0, 1), c(1, 1), c(2, 0), c(2, -1), c(1, -1)]
    }

    fn same_lists(n: usize, ids: std::ops::RangeInclusive<u32>) -> ListAssignment {
        ListAssignment(vec![ColorSet::from_ids(ids); n])
    }

    fn ids(c: &MultiColoring) -> Vec<Vec<u32>> {
        c.iter().map(|s| s.iter().map(|x| x.0).collect()).collect()
    }

    #[test]
    fn single_vertex() {
        let s = solve_5m_2m(induced_graph([c(0, 0)]), same_lists(1, 1..=5), 1).unwrap();
        assert_eq!(ids(&s.coloring), vec![vec![1, 2]]);
    }

    #[test]
    fn hexagon_alternates() {
        let g = LatticeGraph::new(hexagon()).unwrap();
        let s = solve_5m_2m(g, same_lists(6, 1..=5), 1).unwrap();
        let a = vec![1, 2];
        let b = vec![3, 4];
        assert_eq!(
            ids(&s.coloring),
            vec![a.clone(), b.clone(), a.clone(), b.clone(), a, b]
        );
        assert!(matches!(
            s.steps.as_slice(),
            [DecompositionStep::BaseComponent {
                kind: BaseKind::EvenCycle,
                route: Some(CycleRoute::Oracle),
                ..
            }]
        ));
    }

    #[test]
    fn path_component_is_greedy() {
        let g = induced_graph([c(0, 0), c(1, 0), c(2, 0)]);
        let s = solve_5m_2m(g, same_lists(3, 1..=5), 1).unwrap();
        assert_eq!(ids(&s.coloring), vec![vec![1, 2], vec![3, 4], vec![1, 2]]);
    }

    #[test]
    fn double_pendant_takes_a_short_step() {
        let mut v = hexagon();
        v.extend([c(-1, 0), c(3, 0)]);
        let g = LatticeGraph::new(v).unwrap();
        let lists = ListAssignment(
            [
                [1, 2, 3, 4, 5],
                [3, 4, 5, 6, 7],
                [2, 5, 7, 8, 9],
                [1, 4, 8, 9, 10],
                [2, 3, 6, 9, 10],
                [1, 5, 6, 7, 10],
                [2, 4, 6, 8, 10],
                [1, 3, 5, 7, 9],
            ]
            .iter()
            .map(|l| ColorSet::from(*l))
            .collect(),
        );
        let s = solve_5m_2m(g, lists, 1).unwrap();
        let short: Vec<_> = s
            .steps
            .iter()
            .filter(|st| matches!(st, DecompositionStep::ShortHandle { .. }))
            .collect();
        assert_eq!(short.len(), 1);
    }

    #[test]
    fn gate_and_validation() {
        let g = induced_graph([c(0, 0)]);
        let params = ProblemParams::new(9, 4).unwrap();
        assert_eq!(
            SolveInstance::new(g.clone(), same_lists(1, 1..=9), params).unwrap_err(),
            SolveError::RatioGate { a: 9, b: 4 }
        );
        let params = ProblemParams::five_two(1).unwrap();
        assert!(matches!(
            SolveInstance::new(g.clone(), same_lists(1, 1..=4), params),
            Err(SolveError::ListSize {
                expected: 5,
                actual: 4,
                ..
            })
        ));
        let tri = induced_graph([c(0, 0), c(1, 0), c(0, 1)]);
        assert!(matches!(
            SolveInstance::new(tri, same_lists(3, 1..=5), params),
            Err(SolveError::Triangle { .. })
        ));
        let empty = solve_5m_2m(induced_graph([]), ListAssignment::default(), 1).unwrap();
        assert!(empty.coloring.is_empty());
    }

    #[test]
    fn odd_cycle_base() {
        let ring = vec![
            c(0, 0),
            c(-1, 0),
            c(-2, 0),
            c(-3, 1),
            c(-3, 2),
            c(-3, 3),
            c(-2, 3),
            c(-1, 2),
            c(0, 1),
        ];
        let g = LatticeGraph::new(ring).unwrap();
        assert!(g.is_triangle_free());
        assert!(g.vertices().all(|v| g.degree(v) == 2));
        assert_eq!(g.girth(), Some(9));
        let s = solve_5m_2m(g, same_lists(9, 1..=5), 1).unwrap();
        assert!(matches!(
            s.steps[0],
            DecompositionStep::BaseComponent {
                kind: BaseKind::OddCycle,
                ..
            }
        ));
    }

    #[test]
    fn capped_oracle_falls_back_on_closed_handles() {
        let g = LatticeGraph::new(hexagon()).unwrap();
        let params = ProblemParams::new(13, 5).unwrap();
        let inst = SolveInstance::new(g, same_lists(6, 1..=13), params).unwrap();
        assert!(matches!(
            solve(&inst).unwrap().steps[0],
            DecompositionStep::BaseComponent {
                route: Some(CycleRoute::Oracle),
                ..
            }
        ));
        let tight = SolveConfig {
            oracle: OracleConfig {
                max_transitions: 1000,
            },
        };
        let s = solve_with(&inst, &tight).unwrap();
        assert!(matches!(
            s.steps[0],
            DecompositionStep::BaseComponent {
                route: Some(CycleRoute::ClosedHandle),
                ..
            }
        ));
    }
}
