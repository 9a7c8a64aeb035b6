//! The property suite behind `trichoose selftest` and the acceptance target.
//!
//! Each criterion returns a [`CriterionReport`]; a criterion passes only at
//! 100% agreement. At `scale = 1.0` the sample counts and exhaustive
//! matrices are the acceptance sizes; smaller scales shrink both.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::choose::{decompose, solve, CycleRoute, DecompositionStep, SolveError, SolveInstance};
use crate::color::{verify_coloring, Color, ColorSet, ListAssignment, ProblemParams, WeightFn};
use crate::generate::{generate_instance, random_subset, GeneratorConfig, ListStyle, WindowShape};
use crate::lattice::{mirror, LatticeGraph, NodeKind};
use crate::oracle::{
    enumerate_feasibility, solve_path_exact, FeasibilityInstance, OracleConfig,
    DEFAULT_MAX_TRANSITIONS,
};
use crate::waterfall::{
    color_handle_long, color_handle_short, even_ceil, hall_check_path, is_waterfall,
    pullback_coloring_traced, waterfall_color, waterfall_colorable, waterfall_transform,
    PullbackCases, WeightedPath,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SelfTestConfig {
    /// 1.0 runs the acceptance sizes.
    pub scale: f64,
    pub seed: u64,
}

impl Default for SelfTestConfig {
    fn default() -> Self {
        SelfTestConfig {
            scale: 1.0,
            seed: 0x5eed,
        }
    }
}

impl SelfTestConfig {
    fn count(&self, full: usize) -> usize {
        ((full as f64 * self.scale).round() as usize).max(1)
    }

    fn full(&self) -> bool {
        self.scale >= 1.0
    }

    fn rng(&self, criterion: u8) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ (u64::from(criterion) << 32))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub checked: u64,
    pub failures: u64,
    pub detail: String,
    pub first_failure: Option<String>,
    #[serde(serialize_with = "secs")]
    pub elapsed: Duration,
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2}. {}: {} ({:.1}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )?;
        if let Some(first) = &self.first_failure {
            write!(f, "\n       first failure: {first}")?;
        }
        Ok(())
    }
}

struct Tally {
    checked: u64,
    failures: u64,
    first: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checked: 0,
            failures: 0,
            first: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn report(
        self,
        id: u8,
        name: &'static str,
        extra_ok: bool,
        detail: String,
        start: Instant,
    ) -> CriterionReport {
        CriterionReport {
            id,
            name,
            passed: self.failures == 0 && extra_ok,
            checked: self.checked,
            failures: self.failures,
            detail,
            first_failure: self.first,
            elapsed: start.elapsed(),
        }
    }
}

pub fn run_all(config: &SelfTestConfig) -> Vec<CriterionReport> {
    let graphs = corpus(config);
    vec![
        waterfall_exactness(config),
        hall_exactness(config),
        transform_similarity(config),
        long_handles(config),
        short_handles(config),
        claim_validation(config, &graphs),
        mirror_map(config, &graphs),
        main_theorem_m1(config),
        main_theorem_m2(config),
        generalization(config),
        girth(config, &graphs),
    ]
}

fn feasible(path: &WeightedPath) -> bool {
    enumerate_feasibility(FeasibilityInstance::Path(path), DEFAULT_MAX_TRANSITIONS)
        .expect("desk-scale instance")
}

fn path_of(lists: Vec<ColorSet>, weights: Vec<usize>) -> WeightedPath {
    WeightedPath::new(ListAssignment(lists), WeightFn(weights)).expect("aligned")
}

/// Calls `f` with every weight vector in `0..=max_w` of length `len`.
fn for_each_weights(len: usize, max_w: usize, mut f: impl FnMut(&[usize])) {
    let mut w = vec![0; len];
    loop {
        f(&w);
        let mut k = 0;
        while k < len && w[k] == max_w {
            w[k] = 0;
            k += 1;
        }
        if k == len {
            return;
        }
        w[k] += 1;
    }
}

/// Every waterfall list on `n + 1` vertices with at most `palette` colors,
/// up to renaming colors: `private[i]` colors only at `i`, `shared[i]`
/// colors at `i` and `i + 1`.
fn for_each_waterfall(n: usize, palette: usize, mut f: impl FnMut(Vec<ColorSet>)) {
    fn rec(counts: &mut Vec<usize>, slots: usize, left: usize, f: &mut dyn FnMut(&[usize])) {
        if counts.len() == slots {
            f(counts);
            return;
        }
        for v in 0..=left {
            counts.push(v);
            rec(counts, slots, left - v, f);
            counts.pop();
        }
    }
    rec(&mut Vec::new(), 2 * n + 1, palette, &mut |counts| {
        let mut lists = vec![ColorSet::new(); n + 1];
        let mut next = 0u32;
        for (i, &k) in counts[..=n].iter().enumerate() {
            for _ in 0..k {
                lists[i].insert(Color(next));
                next += 1;
            }
        }
        for (i, &k) in counts[n + 1..].iter().enumerate() {
            for _ in 0..k {
                lists[i].insert(Color(next));
                lists[i + 1].insert(Color(next));
                next += 1;
            }
        }
        f(lists);
    });
}

/// Every list assignment on `n + 1` vertices with at most `palette` colors,
/// up to renaming colors: a multiset of nonempty support patterns.
fn for_each_general(n: usize, palette: usize, mut f: impl FnMut(Vec<ColorSet>)) {
    fn rec(cur: &mut Vec<u32>, types: u32, max: usize, f: &mut dyn FnMut(&[u32])) {
        f(cur);
        if cur.len() == max {
            return;
        }
        for t in cur.last().copied().unwrap_or(1)..types {
            cur.push(t);
            rec(cur, types, max, f);
            cur.pop();
        }
    }
    rec(&mut Vec::new(), 1 << (n + 1), palette, &mut |patterns| {
        let mut lists = vec![ColorSet::new(); n + 1];
        for (c, &p) in patterns.iter().enumerate() {
            for (i, list) in lists.iter_mut().enumerate() {
                if p >> i & 1 == 1 {
                    list.insert(Color(c as u32));
                }
            }
        }
        f(lists);
    });
}

/// Criterion 1: Window criterion vs. oracle on every waterfall list with `n <= 5`,
/// palette `<= 7`, weights `<= 2`; the greedy colors every feasible one.
pub fn waterfall_exactness(config: &SelfTestConfig) -> CriterionReport {
    let start = Instant::now();
    let max_n = if config.full() { 5 } else { 3 };
    let mut tally = Tally::new();
    let (mut feasible_count, mut fallbacks) = (0u64, 0u64);
    for n in 0..=max_n {
        for_each_waterfall(n, 7, |lists| {
            for_each_weights(n + 1, 2, |w| {
                let p = path_of(lists.clone(), w.to_vec());
                let oracle = feasible(&p);
                let criterion = waterfall_colorable(&p).expect("waterfall by construction");
                let mut ok = oracle == criterion;
                if oracle {
                    feasible_count += 1;
                    match waterfall_color(&p) {
                        Ok(out) => {
                            fallbacks += u64::from(out.fallback);
                            ok &= !out.fallback && p.verify(&out.coloring).is_pass();
                        }
                        Err(_) => ok = false,
                    }
                }
                tally.check(ok, || {
                    format!("lists {lists:?} weights {w:?}: oracle {oracle}, criterion {criterion}")
                });
            });
        });
    }
    let in_time = start.elapsed() < Duration::from_secs(60);
    let detail = format!(
        "n<={max_n}, palette<=7, w<=2: {}/{} agree, {feasible_count} feasible, greedy fallbacks {fallbacks}, runtime {:.1}s (< 60s)",
        tally.checked - tally.failures,
        tally.checked,
        start.elapsed().as_secs_f64()
    );
    tally.report(1, "waterfall criterion exactness", in_time, detail, start)
}

/// Criterion 2: Hall's condition vs. oracle on general lists (exhaustive, reduced
/// palettes as `n` grows), and necessity on random longer paths.
pub fn hall_exactness(config: &SelfTestConfig) -> CriterionReport {
    let start = Instant::now();
    let plan: &[(usize, usize)] = if config.full() {
        &[(0, 7), (1, 7), (2, 7), (3, 6), (4, 4), (5, 2)]
    } else {
        &[(0, 5), (1, 5), (2, 5), (3, 3)]
    };
    let mut tally = Tally::new();
    for &(n, palette) in plan {
        for_each_general(n, palette, |lists| {
            for_each_weights(n + 1, 2, |w| {
                let p = path_of(lists.clone(), w.to_vec());
                let (oracle, hall) = (feasible(&p), hall_check_path(&p));
                tally.check(oracle == hall, || {
                    format!("lists {lists:?} weights {w:?}: oracle {oracle}, hall {hall}")
                });
            });
        });
    }
    let exhaustive = tally.checked;
    let mut rng = config.rng(2);
    let random = config.count(10_000);
    let mut necessity_feasible = 0;
    for _ in 0..random {
        let n = rng.gen_range(6..=11);
        let palette = rng.gen_range(4..=10);
        let lists: Vec<ColorSet> = (0..=n)
            .map(|_| {
                let size = rng.gen_range(0..=palette.min(5) as usize);
                random_subset(&mut rng, palette, size)
            })
            .collect();
        let weights: Vec<usize> = (0..=n).map(|_| rng.gen_range(0..=2)).collect();
        let p = path_of(lists, weights);
        let oracle = feasible(&p);
        necessity_feasible += u64::from(oracle);
        tally.check(!oracle || hall_check_path(&p), || {
            format!("feasible path fails Hall: {p:?}")
        });
    }
    let plan_text: Vec<String> = plan.iter().map(|(n, p)| format!("n={n}:P<={p}")).collect();
    let detail = format!(
        "exhaustive [{}] w<=2: {exhaustive} instances; necessity on {random} random paths n in 6..=11 ({necessity_feasible} feasible); {} failures",
        plan_text.join(" "),
        tally.failures
    );
    tally.report(2, "Hall exactness on paths", true, detail, start)
}

fn random_good_path(rng: &mut ChaCha8Rng) -> WeightedPath {
    let n = rng.gen_range(1..=8);
    let palette = rng.gen_range(6..=12);
    let weights: Vec<usize> = (0..=n).map(|_| rng.gen_range(0..=2)).collect();
    let lists = (0..=n)
        .map(|i| {
            let need = if i == 0 || i == n {
                weights[i]
            } else {
                weights[i] + weights[i + 1]
            };
            let size = (need + rng.gen_range(0..=2)).min(palette as usize);
            random_subset(rng, palette, size)
        })
        .collect();
    path_of(lists, weights)
}

/// Criterion 3: The transform keeps sizes and colorability; pullback of an oracle
/// coloring of the transformed list verifies on the original.
pub fn transform_similarity(config: &SelfTestConfig) -> CriterionReport {
    let start = Instant::now();
    let mut rng = config.rng(3);
    let mut tally = Tally::new();
    let mut cases = PullbackCases::default();
    let mut feasible_count = 0;
    let oracle_config = OracleConfig::default();
    for _ in 0..config.count(10_000) {
        let p = random_good_path(&mut rng);
        let (lc, trace) = match waterfall_transform(&p) {
            Ok(out) => out,
            Err(e) => {
                tally.check(false, || format!("transform rejected a good list: {e}"));
                continue;
            }
        };
        let q = WeightedPath {
            lists: lc,
            weights: p.weights.clone(),
        };
        let sizes = p
            .lists
            .iter()
            .zip(q.lists.iter())
            .all(|(x, y)| x.len() == y.len());
        let replay = trace.replay(&p.lists).as_ref() == Ok(&q.lists);
        let before = feasible(&p);
        let after = feasible(&q);
        let mut ok = sizes && replay && is_waterfall(&q) && before == after;
        if after {
            feasible_count += 1;
            let cprime = solve_path_exact(&q, None, None, &oracle_config)
                .ok()
                .flatten();
            match cprime.map(|c| pullback_coloring_traced(&trace, &p, &c)) {
                Some(Ok((c, used))) => {
                    ok &= p.verify(&c).is_pass();
                    cases.rename += used.rename;
                    cases.free_substitute += used.free_substitute;
                    cases.swap += used.swap;
                }
                _ => ok = false,
            }
        }
        tally.check(ok, || {
            format!("{p:?}: sizes {sizes}, replay {replay}, before {before}, after {after}")
        });
    }
    let detail = format!(
        "{} random good lists n<=8 palette<=12: {} failures; {feasible_count} pullbacks verified (rename {}, substitute {}, swap {})",
        tally.checked, tally.failures, cases.rename, cases.free_substitute, cases.swap
    );
    tally.report(3, "transform similarity", true, detail, start)
}

/// The `(b, e, n)` grid shared by criteria 4 and 5.
fn handle_grid() -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for b in 1..=4 {
        for e in 1..=2 {
            let first = even_ceil(2 * b as u64, e as u64) as usize;
            for n in first..=first + 3 {
                out.push((b, e, n));
            }
        }
    }
    out
}

/// Criterion 4: Long handles: ends of size `b`, interior `a`, `n >= Even(2b/e)`.
pub fn long_handles(config: &SelfTestConfig) -> CriterionReport {
    let start = Instant::now();
    let mut rng = config.rng(4);
    let mut tally = Tally::new();
    let per_cell = config.count(1000);
    let grid = handle_grid();
    for &(b, e, n) in &grid {
        let params = ProblemParams::new(2 * b + e, b).expect("a >= 2b");
        for _ in 0..per_cell {
            let palette = [
                params.a as u32 + 1,
                2 * params.a as u32,
                3 * params.a as u32,
            ][rng.gen_range(0..3)];
            let lists: Vec<ColorSet> = (0..=n)
                .map(|i| {
                    random_subset(
                        &mut rng,
                        palette,
                        if i == 0 || i == n { b } else { params.a },
                    )
                })
                .collect();
            let p = WeightedPath::uniform(ListAssignment(lists), b);
            let ok = match color_handle_long(&p, &params) {
                Ok(c) => p.verify(&c).is_pass() && c[0] == p.lists[0] && c[n] == p.lists[n],
                Err(_) => false,
            };
            tally.check(ok, || format!("b={b} e={e} n={n}: {p:?}"));
        }
    }
    let detail = format!(
        "{} cells (b 1..=4, e 1..=2, n Even..Even+3) x {per_cell}: {}/{} colored, verified, ends kept",
        grid.len(),
        tally.checked - tally.failures,
        tally.checked
    );
    tally.report(4, "long-handle corollary", true, detail, start)
}

/// Criterion 5: Short handles: last two lists of size `b + e` with union `>= 2b`.
pub fn short_handles(config: &SelfTestConfig) -> CriterionReport {
    let start = Instant::now();
    let mut rng = config.rng(5);
    let mut tally = Tally::new();
    let per_cell = config.count(1000);
    let grid = handle_grid();
    let mut empty_reserve = 0;
    for &(b, e, n) in &grid {
        let params = ProblemParams::new(2 * b + e, b).expect("a >= 2b");
        let end = b + e;
        let palette = (3 * params.a).max(2 * end) as u32;
        for _ in 0..per_cell {
            let mut lists: Vec<ColorSet> = (0..n - 1)
                .map(|i| random_subset(&mut rng, palette, if i == 0 { b } else { params.a }))
                .collect();
            let before_last = random_subset(&mut rng, palette, end);
            let overlap = rng.gen_range(0..=(2 * e).min(end));
            let shared: Vec<Color> = before_last.iter().collect();
            let mut last: ColorSet = rand::seq::index::sample(&mut rng, end, overlap)
                .into_iter()
                .map(|i| shared[i])
                .collect();
            let outside: Vec<Color> = (0..palette)
                .map(Color)
                .filter(|c| !before_last.contains(*c))
                .collect();
            for i in rand::seq::index::sample(&mut rng, outside.len(), end - overlap) {
                last.insert(outside[i]);
            }
            lists.push(before_last);
            lists.push(last);
            let p = WeightedPath::uniform(ListAssignment(lists), b);
            empty_reserve += u64::from(b <= e);
            let ok = match color_handle_short(&p, &params) {
                Ok(c) => p.verify(&c).is_pass(),
                Err(_) => false,
            };
            tally.check(ok, || format!("b={b} e={e} n={n}: {p:?}"));
        }
    }
    let detail = format!(
        "{} cells x {per_cell}: {}/{} colored and verified ({empty_reserve} with b<=e, empty D)",
        grid.len(),
        tally.checked - tally.failures,
        tally.checked
    );
    tally.report(5, "short-handle theorem", true, detail, start)
}

/// Random triangle-free graphs for criteria 6, 7 and 11, at least
/// `count(5000)` of them with nodes.
pub fn corpus(config: &SelfTestConfig) -> Vec<LatticeGraph> {
    let mut rng = config.rng(6);
    let want = config.count(5000);
    let mut out = Vec::new();
    let mut with_nodes = 0;
    while with_nodes < want {
        let generator = GeneratorConfig {
            width: rng.gen_range(3..=10),
            height: rng.gen_range(3..=8),
            density: rng.gen_range(0.55..=1.0),
            seed: rng.gen(),
            shape: if rng.gen_bool(0.5) {
                WindowShape::Honeycomb
            } else {
                WindowShape::Full
            },
            ..GeneratorConfig::default()
        };
        let g = crate::generate::generate_graph(&generator);
        with_nodes += usize::from(!g.nodes().is_empty());
        out.push(g);
    }
    out
}

/// Criterion 6: Every cutting handle met while peeling that is shorter than 4 has
/// length exactly 3 and a qualifying `v4`.
pub fn claim_validation(_config: &SelfTestConfig, graphs: &[LatticeGraph]) -> CriterionReport {
    let start = Instant::now();
    let mut tally = Tally::new();
    let (mut short, mut closed, mut pendant, mut mirrors) = (0, 0, 0, 0);
    for g in graphs.iter().filter(|g| !g.nodes().is_empty()) {
        match decompose(g, 4) {
            Ok(d) => {
                for step in &d.steps {
                    match step {
                        DecompositionStep::ShortHandle { .. } => short += 1,
                        DecompositionStep::LongHandle { handle } if handle.is_closed() => {
                            closed += 1
                        }
                        DecompositionStep::PendantChain { .. } => pendant += 1,
                        DecompositionStep::Mirror => mirrors += 1,
                        _ => {}
                    }
                }
                tally.check(true, String::new);
            }
            Err(e) => tally.check(false, || {
                format!("{:?}: {e}", g.vertices().collect::<Vec<_>>())
            }),
        }
    }
    let detail = format!(
        "{} graphs with nodes: {short} short cutting handles all of length 3 with v4, {} structural errors; closed handles {closed}, pendant walks {pendant}, mirrors {mirrors}",
        tally.checked, tally.failures
    );
    tally.report(6, "Claim validation", true, detail, start)
}

/// Criterion 7: The mirror map keeps adjacency, is an involution and swaps node kinds.
pub fn mirror_map(_config: &SelfTestConfig, graphs: &[LatticeGraph]) -> CriterionReport {
    let start = Instant::now();
    let mut tally = Tally::new();
    for g in graphs.iter().filter(|g| !g.nodes().is_empty()) {
        let m = mirror(g).graph;
        let adjacency = m.edges() == g.edges();
        let involution = mirror(&m).graph == *g;
        let swap = g.count_nodes(NodeKind::LeftNode) == m.count_nodes(NodeKind::RightNode)
            && g.count_nodes(NodeKind::RightNode) == m.count_nodes(NodeKind::LeftNode);
        tally.check(adjacency && involution && swap, || {
            format!(
                "{:?}: adjacency {adjacency}, involution {involution}, swap {swap}",
                g.vertices().collect::<Vec<_>>()
            )
        });
    }
    let detail = format!(
        "{}/{} graphs",
        tally.checked - tally.failures,
        tally.checked
    );
    tally.report(7, "mirror map", true, detail, start)
}

fn instance_config(rng: &mut ChaCha8Rng, max_vertices: u32, list_size: usize) -> GeneratorConfig {
    let shape = if rng.gen_bool(0.5) {
        WindowShape::Honeycomb
    } else {
        WindowShape::Full
    };
    // a honeycomb window keeps two cells in three
    let cells = if shape == WindowShape::Honeycomb {
        max_vertices * 3 / 2
    } else {
        max_vertices
    };
    let width = rng.gen_range(3..=(cells / 3).clamp(3, 10));
    let height = (cells / width).max(1);
    let style = [
        ListStyle::Uniform,
        ListStyle::ShiftedInterval,
        ListStyle::NearIdentical,
    ][rng.gen_range(0..3)];
    GeneratorConfig {
        width,
        height,
        density: rng.gen_range(0.6..=1.0),
        seed: rng.gen(),
        palette: None,
        list_size,
        style,
        shape,
    }
}

struct Run {
    ok: bool,
    vertices: usize,
    elapsed: Duration,
    error: Option<SolveError>,
    steps: Vec<DecompositionStep>,
}

/// What the solver did across a batch, so the report shows which routes
/// were exercised.
#[derive(Default)]
struct Mix {
    instances: usize,
    vertices: usize,
    short: usize,
    long: usize,
    pendant: usize,
    oracle_cycles: usize,
    closed_cycles: usize,
}

impl Mix {
    fn add(&mut self, run: &Run) {
        self.instances += 1;
        self.vertices += run.vertices;
        for step in &run.steps {
            match step {
                DecompositionStep::ShortHandle { .. } => self.short += 1,
                DecompositionStep::LongHandle { .. } => self.long += 1,
                DecompositionStep::PendantChain { .. } => self.pendant += 1,
                DecompositionStep::BaseComponent {
                    route: Some(CycleRoute::Oracle),
                    ..
                } => self.oracle_cycles += 1,
                DecompositionStep::BaseComponent {
                    route: Some(CycleRoute::ClosedHandle),
                    ..
                } => self.closed_cycles += 1,
                _ => {}
            }
        }
    }
}

impl fmt::Display for Mix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mean {:.1} vertices; steps: {} short, {} long, {} pendant, base cycles {} oracle + {} closed-handle",
            self.vertices as f64 / self.instances.max(1) as f64,
            self.short,
            self.long,
            self.pendant,
            self.oracle_cycles,
            self.closed_cycles
        )
    }
}

fn run_instance(generator: &GeneratorConfig, params: ProblemParams) -> Run {
    let (g, lists) = generate_instance(generator);
    let vertices = g.len();
    let edges = g.edges();
    let t = Instant::now();
    let result = SolveInstance::new(g, lists.clone(), params).and_then(|inst| solve(&inst));
    let elapsed = t.elapsed();
    match result {
        Ok(s) => {
            let weights = WeightFn::uniform(vertices, params.b);
            let ok =
                verify_coloring(&edges, &lists, &weights, &s.coloring).is_ok_and(|v| v.is_pass());
            Run {
                ok,
                vertices,
                elapsed,
                error: None,
                steps: s.steps,
            }
        }
        Err(e) => Run {
            ok: false,
            vertices,
            elapsed,
            error: Some(e),
            steps: Vec::new(),
        },
    }
}

fn median(mut xs: Vec<Duration>) -> Duration {
    if xs.is_empty() {
        return Duration::ZERO;
    }
    xs.sort();
    xs[xs.len() / 2]
}

/// Criterion 8: `(5, 2)` on graphs with up to 60 vertices.
pub fn main_theorem_m1(config: &SelfTestConfig) -> CriterionReport {
    let start = Instant::now();
    let mut rng = config.rng(8);
    let mut tally = Tally::new();
    let mut times = Vec::new();
    let mut largest = 0;
    let mut mix = Mix::default();
    let params = ProblemParams::five_two(1).expect("m = 1");
    for _ in 0..config.count(2000) {
        let generator = instance_config(&mut rng, 60, 5);
        let run = run_instance(&generator, params);
        largest = largest.max(run.vertices);
        mix.add(&run);
        times.push(run.elapsed);
        tally.check(run.ok && run.vertices <= 60, || {
            format!("{generator:?}: {:?}", run.error)
        });
    }
    let med = median(times);
    let fast = med < Duration::from_millis(100);
    let detail = format!(
        "{}/{} verified, up to {largest} vertices, median {:.3} ms (< 100 ms); {mix}",
        tally.checked - tally.failures,
        tally.checked,
        med.as_secs_f64() * 1e3
    );
    tally.report(8, "main theorem m=1", fast, detail, start)
}

/// Criterion 9: `(10, 4)` on graphs with up to 20 vertices.
pub fn main_theorem_m2(config: &SelfTestConfig) -> CriterionReport {
    let start = Instant::now();
    let mut rng = config.rng(9);
    let mut tally = Tally::new();
    let mut slowest = Duration::ZERO;
    let mut mix = Mix::default();
    let params = ProblemParams::five_two(2).expect("m = 2");
    for _ in 0..config.count(200) {
        let generator = instance_config(&mut rng, 20, 10);
        let run = run_instance(&generator, params);
        slowest = slowest.max(run.elapsed);
        mix.add(&run);
        tally.check(
            run.ok && run.vertices <= 20 && run.elapsed < Duration::from_secs(10),
            || format!("{generator:?}: {:?} in {:?}", run.error, run.elapsed),
        );
    }
    let detail = format!(
        "{}/{} verified, slowest {:.3} s (< 10 s each); {mix}",
        tally.checked - tally.failures,
        tally.checked,
        slowest.as_secs_f64()
    );
    tally.report(9, "main theorem m=2", true, detail, start)
}

/// Criterion 10: Other ratios `a / b >= 5/2`, and rejection of `(9, 4)`.
pub fn generalization(config: &SelfTestConfig) -> CriterionReport {
    let start = Instant::now();
    let mut rng = config.rng(10);
    let mut tally = Tally::new();
    let mut per_pair = Vec::new();
    for (a, b) in [(5, 2), (8, 3), (11, 4), (13, 5)] {
        let params = ProblemParams::new(a, b).expect("a >= 2b");
        let before = tally.failures;
        let mut slowest = Duration::ZERO;
        let mut mix = Mix::default();
        for _ in 0..config.count(200) {
            let generator = instance_config(&mut rng, 40, a);
            let run = run_instance(&generator, params);
            slowest = slowest.max(run.elapsed);
            mix.add(&run);
            tally.check(run.ok, || {
                format!("({a},{b}) {generator:?}: {:?}", run.error)
            });
        }
        per_pair.push(format!(
            "({a},{b}) {} failed, slowest {:.2}s, {} short / {} long / {} cycles",
            tally.failures - before,
            slowest.as_secs_f64(),
            mix.short,
            mix.long,
            mix.oracle_cycles + mix.closed_cycles
        ));
    }
    let gated = ProblemParams::new(9, 4).expect("9 >= 8");
    let (g, lists) = generate_instance(&GeneratorConfig {
        list_size: 9,
        seed: config.seed,
        ..GeneratorConfig::default()
    });
    let rejected = matches!(
        SolveInstance::new(g, lists, gated),
        Err(SolveError::RatioGate { a: 9, b: 4 })
    );
    tally.check(rejected, || {
        "(9,4) was not rejected by the ratio gate".into()
    });
    let detail = format!(
        "{} instances: {}; (9,4) rejected with the gate error: {rejected}",
        tally.checked - 1,
        per_pair.join(", ")
    );
    tally.report(10, "generalization a/b >= 5/2", true, detail, start)
}

/// Criterion 11: Triangle-free lattice graphs have girth at least 6.
pub fn girth(_config: &SelfTestConfig, graphs: &[LatticeGraph]) -> CriterionReport {
    let start = Instant::now();
    let mut tally = Tally::new();
    let mut cyclic = 0;
    for g in graphs {
        let girth = g.girth();
        cyclic += u64::from(girth.is_some());
        tally.check(g.is_triangle_free() && g.girth_at_least_6(), || {
            format!("{:?}: girth {girth:?}", g.vertices().collect::<Vec<_>>())
        });
    }
    let detail = format!(
        "{}/{} generated graphs ({cyclic} with cycles)",
        tally.checked - tally.failures,
        tally.checked
    );
    tally.report(11, "girth at least 6", true, detail, start)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn waterfall_enumeration_counts() {
        let mut k = 0;
        for_each_waterfall(1, 2, |lists| {
            assert!(lists.iter().map(ColorSet::len).sum::<usize>() <= 4);
            k += 1;
        });
        // (p0, p1, s0) with sum <= 2
        assert_eq!(k, 10);
    }

    #[test]
    fn general_enumeration_counts() {
        let mut k = 0;
        for_each_general(1, 2, |_| k += 1);
        // multisets of size <= 2 over 3 patterns
        assert_eq!(k, 1 + 3 + 6);
    }

    #[test]
    fn weights_enumeration() {
        let mut k = 0;
        for_each_weights(3, 2, |_| k += 1);
        assert_eq!(k, 27);
    }

    #[test]
    fn quick_run_passes() {
        let config = SelfTestConfig {
            scale: 0.01,
            seed: 1,
        };
        let graphs = corpus(&config);
        for report in [
            transform_similarity(&config),
            long_handles(&config),
            short_handles(&config),
            claim_validation(&config, &graphs),
            mirror_map(&config, &graphs),
            main_theorem_m1(&config),
            generalization(&config),
            girth(&config, &graphs),
        ] {
            assert!(report.passed, "{report}");
        }
    }
}
