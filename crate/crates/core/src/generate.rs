//! Seeded random instances: lattice windows thinned to triangle-free
//! induced subgraphs, and list assignments of several shapes.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::color::{Color, ColorSet, ListAssignment};
use crate::lattice::{Coord, Direction, LatticeGraph};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ListStyle {
    /// Independent uniform `a`-subsets of the palette.
    #[default]
    Uniform,
    /// Cyclic intervals whose start drifts slowly across the window, so
    /// neighbors share most of their colors.
    ShiftedInterval,
    /// One base list, each vertex swapping up to two colors out.
    NearIdentical,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowShape {
    /// Every cell of the window is a candidate vertex.
    #[default]
    Full,
    /// Cells with `x - y ≡ 0 (mod 3)` are dropped up front, leaving a
    /// honeycomb: triangle-free, every vertex of degree 3 inside the window,
    /// hence many short cycles and nodes.
    Honeycomb,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub width: u32,
    pub height: u32,
    /// Probability that a window cell becomes a vertex before thinning.
    pub density: f64,
    pub seed: u64,
    /// Number of colors to draw from; `None` means `3 * list_size`.
    pub palette: Option<u32>,
    pub list_size: usize,
    #[serde(default)]
    pub style: ListStyle,
    #[serde(default)]
    pub shape: WindowShape,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            width: 8,
            height: 6,
            density: 0.7,
            seed: 0,
            palette: None,
            list_size: 5,
            style: ListStyle::Uniform,
            shape: WindowShape::Full,
        }
    }
}

impl GeneratorConfig {
    pub fn palette_size(&self) -> u32 {
        self.palette
            .unwrap_or(3 * self.list_size as u32)
            .max(self.list_size as u32)
    }
}

/// Deletes vertices until no lattice triangle is left: triangles are visited
/// by their lower-left corner in row-major order and the largest corner of
/// each one still fully present is removed.
pub fn destroy_triangles(vertices: Vec<Coord>) -> Vec<Coord> {
    let mut present: std::collections::HashSet<Coord> = vertices.iter().copied().collect();
    let mut order = vertices.clone();
    order.sort_by_key(|c| (c.y, c.x));
    for v in order {
        for other in [Direction::TopRight, Direction::BottomRight] {
            let t = [v, v.step(Direction::Right), v.step(other)];
            if t.iter().all(|c| present.contains(c)) {
                present.remove(t.iter().max().expect("three corners"));
            }
        }
    }
    vertices
        .into_iter()
        .filter(|c| present.contains(c))
        .collect()
}

fn window(config: &GeneratorConfig, rng: &mut ChaCha8Rng) -> Vec<Coord> {
    let mut out = Vec::new();
    for y in 0..config.height as i32 {
        for x in 0..config.width as i32 {
            if config.shape == WindowShape::Honeycomb && (x - y).rem_euclid(3) == 0 {
                continue;
            }
            if rng.gen_bool(config.density.clamp(0.0, 1.0)) {
                out.push(Coord::new(x, y));
            }
        }
    }
    out
}

pub fn generate_graph(config: &GeneratorConfig) -> LatticeGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    graph_from(config, &mut rng)
}

fn graph_from(config: &GeneratorConfig, rng: &mut ChaCha8Rng) -> LatticeGraph {
    let vertices = destroy_triangles(window(config, rng));
    LatticeGraph::new(vertices).expect("window cells are distinct")
}

pub fn generate_lists(
    graph: &LatticeGraph,
    config: &GeneratorConfig,
    rng: &mut impl Rng,
) -> ListAssignment {
    let palette = config.palette_size();
    let a = config.list_size;
    match config.style {
        ListStyle::Uniform => graph
            .vertices()
            .map(|_| random_subset(rng, palette, a))
            .collect(),
        ListStyle::ShiftedInterval => {
            let (sx, sy) = (rng.gen_range(0..=2u32), rng.gen_range(0..=2u32));
            graph
                .vertices()
                .map(|c| {
                    let jitter = rng.gen_range(0..=1u32);
                    let start = (c.x.rem_euclid(palette as i32) as u32 * sx
                        + c.y.rem_euclid(palette as i32) as u32 * sy
                        + jitter)
                        % palette;
                    (0..a as u32)
                        .map(|k| Color((start + k) % palette))
                        .collect()
                })
                .collect()
        }
        ListStyle::NearIdentical => {
            let base = random_subset(rng, palette, a);
            graph
                .vertices()
                .map(|_| {
                    let mut list = base.clone();
                    for _ in 0..rng.gen_range(0..=2) {
                        let outside: Vec<Color> = (0..palette)
                            .map(Color)
                            .filter(|c| !list.contains(*c))
                            .collect();
                        if outside.is_empty() {
                            break;
                        }
                        let drop = list
                            .iter()
                            .nth(rng.gen_range(0..list.len()))
                            .expect("nonempty list");
                        list.remove(drop);
                        list.insert(outside[rng.gen_range(0..outside.len())]);
                    }
                    list
                })
                .collect()
        }
    }
}

/// A uniform `k`-subset of `0..palette`.
pub fn random_subset(rng: &mut impl Rng, palette: u32, k: usize) -> ColorSet {
    sample(rng, palette as usize, k)
        .into_iter()
        .map(|i| Color(i as u32))
        .collect()
}

/// Graph and lists from one seed.
pub fn generate_instance(config: &GeneratorConfig) -> (LatticeGraph, ListAssignment) {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let graph = graph_from(config, &mut rng);
    let lists = generate_lists(&graph, config, &mut rng);
    (graph, lists)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let config = GeneratorConfig {
            seed: 7,
            ..GeneratorConfig::default()
        };
        assert_eq!(generate_instance(&config), generate_instance(&config));
        let other = GeneratorConfig { seed: 8, ..config };
        assert_ne!(generate_instance(&config).0, generate_instance(&other).0);
    }

    #[test]
    fn output_is_triangle_free_with_exact_list_sizes() {
        for style in [
            ListStyle::Uniform,
            ListStyle::ShiftedInterval,
            ListStyle::NearIdentical,
        ] {
            for seed in 0..50 {
                let config = GeneratorConfig {
                    seed,
                    style,
                    density: 0.9,
                    ..GeneratorConfig::default()
                };
                let (g, lists) = generate_instance(&config);
                assert!(g.is_triangle_free());
                assert_eq!(lists.len(), g.len());
                assert!(lists
                    .iter()
                    .all(|l| l.len() == 5 && l.iter().all(|c| c.0 < 15)));
            }
        }
    }

    #[test]
    fn honeycomb_needs_no_thinning() {
        let config = GeneratorConfig {
            density: 1.0,
            shape: WindowShape::Honeycomb,
            ..GeneratorConfig::default()
        };
        let g = generate_graph(&config);
        assert_eq!(g.len(), 32);
        assert!(g.is_triangle_free());
        assert_eq!(g.max_degree(), 3);
    }

    #[test]
    fn full_window_thinning() {
        let config = GeneratorConfig {
            density: 1.0,
            width: 4,
            height: 3,
            ..GeneratorConfig::default()
        };
        let g = generate_graph(&config);
        assert!(g.is_triangle_free());
        assert!(!g.is_empty());
    }
}
