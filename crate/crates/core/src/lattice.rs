//! Finite induced subgraphs of the triangular lattice.
//!
//! Vertices use axial coordinates; `(x, y)` has the six neighbors
//! `(x±1, y)`, `(x-1, y+1)`, `(x, y+1)`, `(x, y-1)`, `(x+1, y-1)`. Edges are
//! never stored apart from the vertex set: two present vertices are adjacent
//! iff they are lattice neighbors.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(i32, i32)", into = "(i32, i32)")]
pub struct Coord {
    pub x: i32,
    pub y: i32,
}

impl Coord {
    pub const fn new(x: i32, y: i32) -> Self {
        Coord { x, y }
    }

    pub fn step(self, d: Direction) -> Coord {
        let (dx, dy) = d.offset();
        Coord::new(self.x + dx, self.y + dy)
    }
}

impl From<(i32, i32)> for Coord {
    fn from((x, y): (i32, i32)) -> Self {
        Coord { x, y }
    }
}

impl From<Coord> for (i32, i32) {
    fn from(c: Coord) -> Self {
        (c.x, c.y)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Left,
    Right,
    TopLeft,
    TopRight,
    BottomLeft,
    BottomRight,
}

impl Direction {
    pub const ALL: [Direction; 6] = [
        Direction::Left,
        Direction::Right,
        Direction::TopLeft,
        Direction::TopRight,
        Direction::BottomLeft,
        Direction::BottomRight,
    ];

    pub const fn offset(self) -> (i32, i32) {
        match self {
            Direction::Left => (-1, 0),
            Direction::Right => (1, 0),
            Direction::TopLeft => (-1, 1),
            Direction::TopRight => (0, 1),
            Direction::BottomLeft => (0, -1),
            Direction::BottomRight => (1, -1),
        }
    }

    fn between(from: Coord, to: Coord) -> Option<Direction> {
        let d = (to.x - from.x, to.y - from.y);
        Direction::ALL.into_iter().find(|dir| dir.offset() == d)
    }
}

/// The six lattice neighbors in the order left, right, top-left, top-right,
/// bottom-left, bottom-right.
pub fn neighbors(c: Coord) -> [Coord; 6] {
    Direction::ALL.map(|d| c.step(d))
}

pub fn are_adjacent(u: Coord, v: Coord) -> bool {
    Direction::between(u, v).is_some()
}

/// `f(x, y) = (-x - y, y)`, a reflection of the lattice that swaps left and
/// right nodes. It is an involution.
pub fn mirror_coord(c: Coord) -> Coord {
    Coord::new(-c.x - c.y, c.y)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("vertex {0} is listed twice")]
    DuplicateVertex(Coord),
    #[error("vertex {0} is not in the graph")]
    VertexAbsent(Coord),
    #[error(transparent)]
    Structural(#[from] StructuralError),
}

/// A finding that contradicts the structure theory for triangle-free
/// lattice graphs. These are reported, never patched over.
#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StructuralError {
    #[error("degree-3 vertex {vertex} matches neither node pattern")]
    UnclassifiedDegreeThree { vertex: Coord },
    #[error("cutting handle from {start} has length {length}, expected 3")]
    ShortCuttingHandle { start: Coord, length: usize },
    #[error("no neighbor of {v3} other than {v2} has degree at most 2")]
    NoClaimNeighbor { v3: Coord, v2: Coord },
    #[error("vertex {0} is not a node")]
    NotANode(Coord),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeGraph {
    vertices: IndexSet<Coord>,
    adjacency: Vec<Vec<usize>>,
}

impl LatticeGraph {
    /// Builds the induced graph on `vertices`, keeping their order.
    pub fn new(vertices: Vec<Coord>) -> Result<Self, LatticeError> {
        let mut set = IndexSet::with_capacity(vertices.len());
        for v in vertices {
            if !set.insert(v) {
                return Err(LatticeError::DuplicateVertex(v));
            }
        }
        Ok(Self::from_set(set))
    }

    fn from_set(vertices: IndexSet<Coord>) -> Self {
        let adjacency = vertices
            .iter()
            .map(|&v| {
                neighbors(v)
                    .into_iter()
                    .filter_map(|n| vertices.get_index_of(&n))
                    .collect()
            })
            .collect();
        LatticeGraph {
            vertices,
            adjacency,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = Coord> + '_ {
        self.vertices.iter().copied()
    }

    pub fn coord(&self, index: usize) -> Coord {
        self.vertices[index]
    }

    pub fn index_of(&self, c: Coord) -> Option<usize> {
        self.vertices.get_index_of(&c)
    }

    pub fn contains(&self, c: Coord) -> bool {
        self.vertices.contains(&c)
    }

    /// Neighbor indices of vertex `index`, in direction order.
    pub fn neighbor_indices(&self, index: usize) -> &[usize] {
        &self.adjacency[index]
    }

    pub fn neighbors_of(&self, c: Coord) -> Vec<Coord> {
        match self.index_of(c) {
            Some(i) => self.adjacency[i]
                .iter()
                .map(|&j| self.vertices[j])
                .collect(),
            None => Vec::new(),
        }
    }

    pub fn degree(&self, c: Coord) -> usize {
        self.index_of(c).map_or(0, |i| self.adjacency[i].len())
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges as index pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        out.sort_unstable();
        out
    }

    /// The induced subgraph on the vertices for which `keep` holds, in the
    /// same relative order.
    pub fn filter(&self, mut keep: impl FnMut(Coord) -> bool) -> LatticeGraph {
        Self::from_set(self.vertices.iter().copied().filter(|&c| keep(c)).collect())
    }

    /// First triangle in row-major order (`y`, then `x`, of its lowest-left
    /// corner), reported as its three corners.
    pub fn find_triangle(&self) -> Option<[Coord; 3]> {
        let mut order: Vec<Coord> = self.vertices().collect();
        order.sort_by_key(|c| (c.y, c.x));
        order.into_iter().find_map(|v| {
            lattice_triangles(v)
                .into_iter()
                .find(|t| t.iter().all(|&c| self.contains(c)))
        })
    }

    pub fn is_triangle_free(&self) -> bool {
        self.find_triangle().is_none()
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        let n = self.len();
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        for s in 0..n {
            dist.fill(usize::MAX);
            parent.fill(usize::MAX);
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if best.is_some_and(|g| 2 * dist[u] + 1 >= g) {
                    break;
                }
                for &v in &self.adjacency[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        queue.push_back(v);
                    } else if parent[u] != v {
                        let len = dist[u] + dist[v] + 1;
                        best = Some(best.map_or(len, |g| g.min(len)));
                    }
                }
            }
        }
        best
    }

    pub fn girth_at_least_6(&self) -> bool {
        self.girth().is_none_or(|g| g >= 6)
    }

    pub fn classify_node(&self, c: Coord) -> Result<NodeKind, LatticeError> {
        let i = self.index_of(c).ok_or(LatticeError::VertexAbsent(c))?;
        Ok(self.kind_at(i))
    }

    fn kind_at(&self, i: usize) -> NodeKind {
        if self.adjacency[i].len() != 3 {
            return NodeKind::NotANode;
        }
        let c = self.vertices[i];
        let has = |d: Direction| self.contains(c.step(d));
        if has(Direction::Left) && has(Direction::TopRight) && has(Direction::BottomRight) {
            NodeKind::LeftNode
        } else if has(Direction::Right) && has(Direction::TopLeft) && has(Direction::BottomLeft) {
            NodeKind::RightNode
        } else {
            NodeKind::NotANode
        }
    }

    /// Vertices classified as nodes, in vertex order.
    pub fn nodes(&self) -> Vec<(Coord, NodeKind)> {
        (0..self.len())
            .map(|i| (self.vertices[i], self.kind_at(i)))
            .filter(|(_, k)| *k != NodeKind::NotANode)
            .collect()
    }

    pub fn count_nodes(&self, kind: NodeKind) -> usize {
        (0..self.len()).filter(|&i| self.kind_at(i) == kind).count()
    }

    /// Degree-3 vertices that fit neither node pattern. Empty on every
    /// triangle-free graph.
    pub fn unclassified_degree_three(&self) -> Vec<Coord> {
        (0..self.len())
            .filter(|&i| self.adjacency[i].len() == 3 && self.kind_at(i) == NodeKind::NotANode)
            .map(|i| self.vertices[i])
            .collect()
    }

    /// The rightmost left node among the nodes of maximal `y`.
    pub fn cutting_node(&self) -> Option<Coord> {
        let nodes = self.nodes();
        let top = nodes.iter().map(|(c, _)| c.y).max()?;
        nodes
            .iter()
            .filter(|(c, k)| c.y == top && *k == NodeKind::LeftNode)
            .map(|(c, _)| *c)
            .max_by_key(|c| c.x)
    }

    /// Connected components as vertex lists, each in vertex order, ordered
    /// by their first vertex.
    pub fn components(&self) -> Vec<Vec<Coord>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut members = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        members.push(v);
                        stack.push(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members.into_iter().map(|i| self.vertices[i]).collect());
        }
        out
    }
}

fn lattice_triangles(v: Coord) -> [[Coord; 3]; 2] {
    [
        [v, v.step(Direction::Right), v.step(Direction::TopRight)],
        [v, v.step(Direction::Right), v.step(Direction::BottomRight)],
    ]
}

/// The induced graph on a set of coordinates (duplicates collapse).
pub fn induced_graph(vertices: impl IntoIterator<Item = Coord>) -> LatticeGraph {
    LatticeGraph::from_set(vertices.into_iter().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    LeftNode,
    RightNode,
    NotANode,
}

/// The mirrored graph. Vertex `i` of `graph` is the image of vertex `i` of
/// the source, so colorings transfer index by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mirror {
    pub graph: LatticeGraph,
}

impl Mirror {
    pub fn to_source(&self, c: Coord) -> Coord {
        mirror_coord(c)
    }

    pub fn to_image(&self, c: Coord) -> Coord {
        mirror_coord(c)
    }
}

pub fn mirror(g: &LatticeGraph) -> Mirror {
    Mirror {
        graph: LatticeGraph::from_set(g.vertices().map(mirror_coord).collect()),
    }
}

/// A node-to-node path whose interior vertices have degree 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Handle {
    pub vertices: Vec<Coord>,
}

impl Handle {
    pub fn length(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn start(&self) -> Coord {
        self.vertices[0]
    }

    pub fn end(&self) -> Coord {
        self.vertices[self.vertices.len() - 1]
    }

    /// The interior vertices `v_1 .. v_{n-1}`.
    pub fn interior(&self) -> &[Coord] {
        &self.vertices[1..self.vertices.len() - 1]
    }

    /// Both ends are the same node: a cycle hanging on one vertex.
    pub fn is_closed(&self) -> bool {
        self.start() == self.end()
    }

    fn canonical(mut self) -> Self {
        let mut reversed = self.vertices.clone();
        reversed.reverse();
        if reversed < self.vertices {
            self.vertices = reversed;
        }
        self
    }
}

/// Where a walk from a node through degree-2 vertices stops.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "vertices", rename_all = "snake_case")]
pub enum Walk {
    /// Reached a node (possibly the start node again).
    Handle(Handle),
    /// Reached a vertex of degree 1; the sequence starts at the node and
    /// ends at that leaf.
    Pendant(Vec<Coord>),
}

fn walk_from(g: &LatticeGraph, start: Coord, first: Coord) -> Walk {
    let mut seq = vec![start, first];
    let (mut prev, mut cur) = (start, first);
    loop {
        match g.degree(cur) {
            2 => {
                let next = g
                    .neighbors_of(cur)
                    .into_iter()
                    .find(|&n| n != prev)
                    .expect("degree 2");
                seq.push(next);
                prev = cur;
                cur = next;
                if cur == start {
                    return Walk::Handle(Handle { vertices: seq });
                }
            }
            1 => return Walk::Pendant(seq),
            _ => return Walk::Handle(Handle { vertices: seq }),
        }
    }
}

/// Every handle of `g`, each once, oriented so the vertex sequence is
/// lexicographically smaller than its reverse; sorted.
pub fn find_handles(g: &LatticeGraph) -> Vec<Handle> {
    let mut found = BTreeSet::new();
    for (node, _) in g.nodes() {
        for first in g.neighbors_of(node) {
            if let Walk::Handle(h) = walk_from(g, node, first) {
                found.insert(h.canonical().vertices);
            }
        }
    }
    found
        .into_iter()
        .map(|vertices| Handle { vertices })
        .collect()
}

/// The walk from the cutting node through its top-right neighbor. Usually a
/// handle; a pendant path when the walk runs into a leaf.
pub fn cutting_walk(g: &LatticeGraph) -> Option<Walk> {
    let node = g.cutting_node()?;
    Some(walk_from(g, node, node.step(Direction::TopRight)))
}

/// The cutting handle, if the cutting walk ends at a node.
pub fn cutting_handle(g: &LatticeGraph) -> Option<Handle> {
    match cutting_walk(g)? {
        Walk::Handle(h) => Some(h),
        Walk::Pendant(_) => None,
    }
}

/// A length-3 cutting handle `v0 v1 v2 v3` and the vertices around its far
/// end that the short-handle extension needs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HandleContext {
    pub handle: Handle,
    pub v3: Coord,
    /// Neighbor of `v3` other than `v2` with degree at most 2.
    pub v4: Coord,
    /// The other neighbor of `v4`, when `v4` has degree 2.
    pub v5: Option<Coord>,
    /// The neighbor of `v3` that is neither `v2` nor `v4`.
    pub u: Option<Coord>,
}

/// Reads off the vertices around the end of a short cutting handle.
///
/// `v4` is the right neighbor of `v3` when that qualifies, otherwise the
/// smallest qualifying neighbor.
pub fn short_handle_context(
    g: &LatticeGraph,
    h: &Handle,
) -> Result<HandleContext, StructuralError> {
    if h.length() != 3 {
        return Err(StructuralError::ShortCuttingHandle {
            start: h.start(),
            length: h.length(),
        });
    }
    let (v2, v3) = (h.vertices[2], h.vertices[3]);
    let mut candidates: Vec<Coord> = g
        .neighbors_of(v3)
        .into_iter()
        .filter(|&c| c != v2 && g.degree(c) <= 2)
        .collect();
    candidates.sort();
    let right = v3.step(Direction::Right);
    let v4 = if candidates.contains(&right) {
        right
    } else {
        *candidates
            .first()
            .ok_or(StructuralError::NoClaimNeighbor { v3, v2 })?
    };
    let v5 = g.neighbors_of(v4).into_iter().find(|&c| c != v3);
    let u = g.neighbors_of(v3).into_iter().find(|&c| c != v2 && c != v4);
    Ok(HandleContext {
        handle: h.clone(),
        v3,
        v4,
        v5,
        u,
    })
}

/// Degree-2 vertices lying on some handle's interior. Used by the cover
/// property: each appears in exactly one handle.
pub fn interior_vertices(handles: &[Handle]) -> Vec<Coord> {
    handles
        .iter()
        .flat_map(|h| h.interior().iter().copied())
        .collect()
}

/// Degree-2 vertices whose two walks both end at nodes.
pub fn between_nodes(g: &LatticeGraph) -> HashSet<Coord> {
    let mut out = HashSet::new();
    for c in g.vertices() {
        if g.degree(c) != 2 {
            continue;
        }
        let ends: Vec<bool> = g
            .neighbors_of(c)
            .into_iter()
            .map(|n| {
                let (mut prev, mut cur) = (c, n);
                loop {
                    match g.degree(cur) {
                        2 if cur != c => {
                            let next = g
                                .neighbors_of(cur)
                                .into_iter()
                                .find(|&x| x != prev)
                                .unwrap();
                            prev = cur;
                            cur = next;
                        }
                        3 => return true,
                        _ => return false,
                    }
                }
            })
            .collect();
        if ends.iter().all(|&e| e) {
            out.insert(c);
        }
    }
    out
}
