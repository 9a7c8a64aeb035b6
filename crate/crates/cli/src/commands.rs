use std::fs;
use std::path::Path;
use std::process::ExitCode;

use serde::Serialize;
use trichoose::choose::{solve as solve_instance, SolveError, SolveInstance};
use trichoose::color::{verify_coloring, ProblemParams, Violation, WeightFn};
use trichoose::generate::{generate_instance, GeneratorConfig};
use trichoose::lattice::{Coord, LatticeGraph};
use trichoose::oracle::{solve_cycle_exact, solve_path_exact, OracleConfig, OracleError};
use trichoose::selftest::{run_all, SelfTestConfig};
use trichoose::waterfall::WeightedPath;

use crate::docs::{
    check_color_ids, emit, read, to_json, ColoringDoc, GraphDoc, ListsDoc, OracleDoc, OracleReport,
    SolveDoc, VerifyReport,
};
use crate::error::CliError;
use crate::GenArgs;

fn load_instance(graph: &Path, lists: &Path) -> Result<(LatticeGraph, ListsDoc), CliError> {
    let graph = read::<GraphDoc>(graph)?.into_graph()?;
    let lists: ListsDoc = read(lists)?;
    check_color_ids(lists.lists.iter())?;
    if lists.lists.len() != graph.len() {
        return Err(CliError::Malformed(format!(
            "graph has {} vertices but {} lists",
            graph.len(),
            lists.lists.len()
        )));
    }
    Ok((graph, lists))
}

fn triangle(corners: &[Coord; 3]) -> String {
    let names: Vec<String> = corners.iter().map(Coord::to_string).collect();
    format!("graph contains the triangle {}", names.join(" "))
}

fn solve_error(e: SolveError) -> CliError {
    match e {
        SolveError::Triangle { corners } => CliError::Malformed(triangle(&corners)),
        SolveError::LengthMismatch { .. } | SolveError::ListSize { .. } | SolveError::Params(_) => {
            CliError::Malformed(e.to_string())
        }
        SolveError::Structural { .. }
        | SolveError::Extension { .. }
        | SolveError::RatioGate { .. }
        | SolveError::BaseInfeasible { .. }
        | SolveError::Oracle(_)
        | SolveError::Verification(_) => CliError::Rejected(e.to_string()),
    }
}

pub fn solve(
    graph: &Path,
    lists: &Path,
    params: ProblemParams,
    out: Option<&Path>,
) -> Result<ExitCode, CliError> {
    let (graph, lists) = load_instance(graph, lists)?;
    let instance = SolveInstance::new(graph, lists.lists, params).map_err(solve_error)?;
    let solution = solve_instance(&instance).map_err(solve_error)?;
    emit(
        &SolveDoc {
            params,
            coloring: solution.coloring,
            trace: solution.steps,
        },
        out,
    )?;
    Ok(ExitCode::SUCCESS)
}

fn violation_sites(violation: &Violation, graph: &LatticeGraph) -> Vec<Coord> {
    match *violation {
        Violation::NotSubset { vertex, .. } | Violation::WrongSize { vertex, .. } => {
            vec![graph.coord(vertex)]
        }
        Violation::Conflict { u, v, .. } => vec![graph.coord(u), graph.coord(v)],
    }
}

pub fn verify(
    graph: &Path,
    lists: &Path,
    coloring: &Path,
    demand: usize,
    out: Option<&Path>,
) -> Result<ExitCode, CliError> {
    let (graph, lists) = load_instance(graph, lists)?;
    let coloring: ColoringDoc = read(coloring)?;
    check_color_ids(coloring.coloring.iter())?;
    let weights = WeightFn::uniform(graph.len(), demand);
    let verdict = verify_coloring(&graph.edges(), &lists.lists, &weights, &coloring.coloring)
        .map_err(|e| CliError::Malformed(e.to_string()))?;
    let violation = verdict.violation().cloned();
    let report = VerifyReport {
        valid: violation.is_none(),
        at: violation
            .as_ref()
            .map(|v| violation_sites(v, &graph))
            .unwrap_or_default(),
        violation,
    };
    emit(&report, out)?;
    Ok(if report.valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[derive(Serialize)]
struct InstanceDoc {
    vertices: Vec<Coord>,
    lists: trichoose::color::ListAssignment,
}

pub fn gen(args: &GenArgs) -> Result<ExitCode, CliError> {
    let list_size = match (args.m, args.a) {
        (Some(m), _) => 5 * m,
        (None, Some(a)) => a,
        (None, None) => 5,
    };
    if !(0.0..=1.0).contains(&args.density) {
        return Err(CliError::Malformed(format!(
            "density {} is not a probability",
            args.density
        )));
    }
    let config = GeneratorConfig {
        width: args.width,
        height: args.height,
        density: args.density,
        seed: args.seed,
        palette: args.palette,
        list_size,
        style: args.style.into(),
        shape: args.shape.into(),
    };
    let (graph, lists) = generate_instance(&config);
    if let Some(corners) = graph.find_triangle() {
        return Err(CliError::Rejected(format!(
            "generator bug: {}",
            triangle(&corners)
        )));
    }
    match &args.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| CliError::Io {
                path: dir.clone(),
                source: e,
            })?;
            emit(&GraphDoc::from_graph(&graph), Some(&dir.join("graph.json")))?;
            emit(&ListsDoc { lists }, Some(&dir.join("lists.json")))?;
        }
        None => print!(
            "{}",
            to_json(&InstanceDoc {
                vertices: graph.vertices().collect(),
                lists,
            })
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn oracle_error(e: OracleError) -> CliError {
    match e {
        OracleError::ResourceCap { .. } => CliError::Rejected(e.to_string()),
        OracleError::InvalidFixedSet { .. }
        | OracleError::CycleTooShort(_)
        | OracleError::LengthMismatch { .. } => CliError::Malformed(e.to_string()),
    }
}

pub fn oracle(
    lists: &Path,
    demand: Option<usize>,
    cycle: bool,
    out: Option<&Path>,
) -> Result<ExitCode, CliError> {
    let doc: OracleDoc = read(lists)?;
    check_color_ids(doc.lists.iter())?;
    let weights = match (doc.weights, demand) {
        (Some(w), None) => w,
        (None, Some(b)) => WeightFn::uniform(doc.lists.len(), b),
        (Some(_), Some(_)) => {
            return Err(CliError::Malformed(
                "the document has weights, drop --b".into(),
            ))
        }
        (None, None) => {
            return Err(CliError::Malformed(
                "the document has no weights, give --b".into(),
            ))
        }
    };
    let config = OracleConfig::default();
    let coloring = if cycle || doc.cycle {
        solve_cycle_exact(&doc.lists, &weights, &config)
    } else {
        let path = WeightedPath::new(doc.lists, weights)
            .map_err(|e| CliError::Malformed(e.to_string()))?;
        solve_path_exact(&path, None, None, &config)
    }
    .map_err(oracle_error)?;
    let report = OracleReport {
        feasible: coloring.is_some(),
        coloring,
    };
    emit(&report, out)?;
    Ok(if report.feasible {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

pub fn selftest(scale: f64, seed: u64) -> Result<ExitCode, CliError> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(CliError::Malformed(format!(
            "scale {scale} must be positive"
        )));
    }
    let reports = run_all(&SelfTestConfig { scale, seed });
    for r in &reports {
        println!("{r}");
    }
    let red = reports.iter().filter(|r| !r.passed).count();
    println!("{} of {} criteria pass", reports.len() - red, reports.len());
    Ok(if red == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
