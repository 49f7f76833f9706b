//! Implementation of the `structcsp` command-line tool.
//!
//! Exit code contract: 0 success, 1 unsatisfiable, 2 input error, 3 budget
//! or size limit exceeded.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Map, Value};

use structcsp::acyclic::{enumerate_solutions, full_reduce};
use structcsp::decomposition::{
    check_ghd, check_tree_decomposition, greedy_cover_lambda, minfill_tree_decomposition,
    DecompositionFile, GeneralizedHypertreeDecomposition, TreeDecomposition,
};
use structcsp::generate::{
    acyclic_instance, add_random_tuple_weights, chain_instance, random_instance,
    random_unary_weights, triangle_core_instance, GenParams,
};
use structcsp::hypergraph::{
    build_hypergraph, gyo_acyclicity, incidence_graph, primal_graph, GyoOutcome, JoinTree,
};
use structcsp::model::{
    parse_instance_with, serialize_instance, CostMonoid, CspInstance, InstanceStats, ParseOptions,
    Tuple, UnaryCostFunction,
};
use structcsp::optimize::{
    compute_optimal_solution, solve_with_decomposition_budgeted, SolveOutcome,
};
use structcsp::oracle::{
    brute_force_min_violation, brute_force_optimal, brute_force_solutions,
    exhaustive_join_tree_search,
};
use structcsp::reduce::{
    acyclic_from_ghd, acyclic_from_tree_decomposition, maxcsp_to_csop, wcsp_to_csop,
    DEFAULT_TUPLE_BUDGET,
};
use structcsp::Error;

/// Exit code for an error, per the CLI contract.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::BudgetExceeded { .. } | Error::TooLarge(_) => 3,
        _ => 2,
    }
}

/// Process-wide outcome of one command.
pub enum Outcome {
    Success,
    Unsatisfiable,
}

impl Outcome {
    pub fn code(&self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::Unsatisfiable => 1,
        }
    }
}

/// Phase timings and instance statistics echoed to stderr after a solve.
pub struct RunReport {
    pub command: String,
    pub timings_ms: BTreeMap<&'static str, u128>,
    pub stats: InstanceStats,
    pub result: Value,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut timings = Map::new();
        for phase in ["parse", "decompose", "transform", "solve"] {
            if let Some(ms) = self.timings_ms.get(phase) {
                timings.insert(phase.to_string(), json!(ms));
            }
        }
        let mut root = Map::new();
        root.insert("command".into(), json!(self.command));
        root.insert("timings_ms".into(), Value::Object(timings));
        root.insert(
            "stats".into(),
            serde_json::to_value(&self.stats).expect("stats"),
        );
        root.insert("result".into(), self.result.clone());
        serde_json::to_string(&Value::Object(root)).expect("report")
    }
}

fn read_file(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path)
        .map_err(|e| Error::Semantic(format!("cannot read `{}`: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    fs::write(path, contents)
        .map_err(|e| Error::Semantic(format!("cannot write `{}`: {e}", path.display())))
}

pub fn load_instance(
    path: &Path,
    allow_reserved: bool,
) -> Result<(CspInstance, Option<UnaryCostFunction>), Error> {
    let text = read_file(path)?;
    parse_instance_with(
        &text,
        &ParseOptions {
            allow_reserved_names: allow_reserved,
        },
    )
}

/// Strips `.csp.json` / `.json` from an instance path.
fn stem(path: &Path) -> PathBuf {
    let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("out");
    let stripped = name
        .strip_suffix(".csp.json")
        .or_else(|| name.strip_suffix(".json"))
        .unwrap_or(name);
    path.with_file_name(stripped)
}

fn assignment_json(t: &Tuple) -> Value {
    let mut obj = Map::new();
    for (var, val) in t.bindings() {
        obj.insert(var.to_string(), json!(val));
    }
    Value::Object(obj)
}

fn outcome_json(outcome: &SolveOutcome) -> Value {
    match outcome {
        SolveOutcome::Unsatisfiable => json!({"status": "unsatisfiable"}),
        SolveOutcome::Optimal(sol) => {
            let mut obj = Map::new();
            obj.insert("status".into(), json!("optimal"));
            obj.insert("cost".into(), json!(sol.cost.to_canonical_string()));
            obj.insert("assignment".into(), assignment_json(&sol.assignment));
            Value::Object(obj)
        }
    }
}

/// `check`: structural facts about an instance.
pub fn run_check(path: &Path, allow_reserved: bool) -> Result<Outcome, Error> {
    let (instance, _) = load_instance(path, allow_reserved)?;
    let stats = instance.stats();
    println!(
        "variables: {}, constraints: {}, largest relation: {}",
        stats.num_variables, stats.num_constraints, stats.largest_relation
    );
    let h = build_hypergraph(&instance)?;
    let outcome = gyo_acyclicity(&h)?;
    match &outcome {
        GyoOutcome::Acyclic(tree) => {
            println!("acyclic: yes");
            println!("join tree: {} nodes", tree.node_count());
            println!("ghw <= 1");
        }
        GyoOutcome::NotAcyclic(residual) => {
            println!("acyclic: no");
            println!("cyclic core: {} hyperedges", residual.edge_count());
        }
    }
    let primal = primal_graph(&h);
    let td = minfill_tree_decomposition(&primal)?;
    println!("primal treewidth <= {} (min-fill)", td.width());
    let incidence = incidence_graph(&h)?;
    let itd = minfill_tree_decomposition(&incidence)?;
    println!("incidence treewidth <= {} (min-fill)", itd.width());
    if !outcome.is_acyclic() {
        let ghd = greedy_cover_lambda(&h, &td)?;
        println!("ghw <= {} (greedy cover, upper bound)", ghd.width());
    }
    Ok(Outcome::Success)
}

/// Which graph a decomposition is built over.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Primal,
    Incidence,
}

/// `decompose`: min-fill decomposition written beside the instance.
pub fn run_decompose(
    path: &Path,
    kind: GraphKind,
    output: Option<&Path>,
    allow_reserved: bool,
) -> Result<Outcome, Error> {
    let (instance, _) = load_instance(path, allow_reserved)?;
    let h = build_hypergraph(&instance)?;
    let (file, default_name) = match kind {
        GraphKind::Primal => {
            let td = minfill_tree_decomposition(&primal_graph(&h))?;
            let ghd = greedy_cover_lambda(&h, &td)?;
            println!(
                "primal treewidth <= {}, ghw <= {} (upper bounds)",
                td.width(),
                ghd.width()
            );
            (
                DecompositionFile::Generalized(ghd),
                stem(path).with_extension("ghd.json"),
            )
        }
        GraphKind::Incidence => {
            let td = minfill_tree_decomposition(&incidence_graph(&h)?)?;
            println!("incidence treewidth <= {} (upper bound)", td.width());
            (
                DecompositionFile::Tree(td),
                stem(path).with_extension("incidence.ghd.json"),
            )
        }
    };
    let out = output.map(Path::to_path_buf).unwrap_or(default_name);
    write_file(&out, &file.to_json())?;
    println!("wrote {}", out.display());
    Ok(Outcome::Success)
}

pub enum SolveMode {
    Csop,
    Wcsp,
    MaxCsp,
}

pub struct SolveOptions {
    pub mode: SolveMode,
    pub monoid: CostMonoid,
    pub decomposition: Option<PathBuf>,
    pub budget: u64,
    pub enumerate: bool,
    pub limit: Option<usize>,
    pub allow_reserved: bool,
    pub use_cache: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            mode: SolveMode::Csop,
            monoid: CostMonoid::Sum,
            decomposition: None,
            budget: DEFAULT_TUPLE_BUDGET,
            enumerate: false,
            limit: None,
            allow_reserved: false,
            use_cache: true,
        }
    }
}

fn load_ghd_file(path: &Path) -> Result<DecompositionFile, Error> {
    DecompositionFile::from_json(&read_file(path)?)
}

fn cache_is_fresh(instance: &Path, cache: &Path) -> bool {
    let (Ok(i), Ok(c)) = (fs::metadata(instance), fs::metadata(cache)) else {
        return false;
    };
    match (i.modified(), c.modified()) {
        (Ok(im), Ok(cm)) => cm >= im,
        _ => false,
    }
}

/// A generalized hypertree decomposition of the primal structure: from the
/// supplied file, from a fresh-enough cache, or computed by min-fill plus
/// greedy cover (and then cached).
fn obtain_primal_ghd(
    instance: &CspInstance,
    instance_path: &Path,
    options: &SolveOptions,
) -> Result<GeneralizedHypertreeDecomposition, Error> {
    let h = build_hypergraph(instance)?;
    if let Some(path) = &options.decomposition {
        return match load_ghd_file(path)? {
            DecompositionFile::Generalized(ghd) => {
                check_ghd(&h, &ghd).map_err(|d| Error::InvalidDecomposition(d.to_string()))?;
                Ok(ghd)
            }
            DecompositionFile::Tree(td) => {
                check_tree_decomposition(&primal_graph(&h), &td)
                    .map_err(|d| Error::InvalidDecomposition(d.to_string()))?;
                greedy_cover_lambda(&h, &td)
            }
        };
    }
    let cache = stem(instance_path).with_extension("ghd.json");
    if options.use_cache && cache_is_fresh(instance_path, &cache) {
        if let Ok(DecompositionFile::Generalized(ghd)) = load_ghd_file(&cache) {
            if check_ghd(&h, &ghd).is_ok() {
                return Ok(ghd);
            }
        }
    }
    let td = minfill_tree_decomposition(&primal_graph(&h))?;
    let ghd = greedy_cover_lambda(&h, &td)?;
    if options.use_cache {
        let _ = fs::write(
            &cache,
            DecompositionFile::Generalized(ghd.clone()).to_json(),
        );
    }
    Ok(ghd)
}

/// A tree decomposition of the incidence structure, with the same
/// file / cache / heuristic fallbacks.
fn obtain_incidence_td(
    instance: &CspInstance,
    instance_path: &Path,
    options: &SolveOptions,
) -> Result<TreeDecomposition, Error> {
    let h = build_hypergraph(instance)?;
    let incidence = incidence_graph(&h)?;
    if let Some(path) = &options.decomposition {
        return match load_ghd_file(path)? {
            DecompositionFile::Tree(td) => {
                check_tree_decomposition(&incidence, &td).map_err(|d| {
                    Error::InvalidDecomposition(format!(
                        "not a tree decomposition of the incidence graph: {d}"
                    ))
                })?;
                Ok(td)
            }
            DecompositionFile::Generalized(_) => Err(Error::InvalidDecomposition(
                "violation-degree mode needs a plain tree decomposition of the incidence graph"
                    .to_string(),
            )),
        };
    }
    let cache = stem(instance_path).with_extension("incidence.ghd.json");
    if options.use_cache && cache_is_fresh(instance_path, &cache) {
        if let Ok(DecompositionFile::Tree(td)) = load_ghd_file(&cache) {
            if check_tree_decomposition(&incidence, &td).is_ok() {
                return Ok(td);
            }
        }
    }
    let td = minfill_tree_decomposition(&incidence)?;
    if options.use_cache {
        let _ = fs::write(&cache, DecompositionFile::Tree(td.clone()).to_json());
    }
    Ok(td)
}

fn acyclic_join_tree(instance: &CspInstance) -> Result<Option<JoinTree>, Error> {
    let h = build_hypergraph(instance)?;
    Ok(gyo_acyclicity(&h)?.join_tree().cloned())
}

/// `solve`: the full pipeline for one of the three problem flavours.
pub fn run_solve(path: &Path, options: &SolveOptions) -> Result<(Outcome, RunReport), Error> {
    let mut timings: BTreeMap<&'static str, u128> = BTreeMap::new();
    let started = Instant::now();
    let (instance, file_weights) = load_instance(path, options.allow_reserved)?;
    timings.insert("parse", started.elapsed().as_millis());

    let weights = file_weights.unwrap_or_default();
    let mut stats = instance.stats();

    let (outcome, solutions) = match options.mode {
        SolveMode::Csop => {
            let t0 = Instant::now();
            let tree = acyclic_join_tree(&instance)?;
            match tree {
                Some(tree) => {
                    timings.insert("decompose", t0.elapsed().as_millis());
                    stats = stats.with_decomposition(1, tree.node_count());
                    let t1 = Instant::now();
                    let outcome =
                        compute_optimal_solution(&instance, &weights, &tree, &options.monoid)?;
                    timings.insert("solve", t1.elapsed().as_millis());
                    let solutions = if options.enumerate {
                        Some(enumerate_csop(&instance, &tree, options.limit)?)
                    } else {
                        None
                    };
                    (outcome, solutions)
                }
                None => {
                    let ghd = obtain_primal_ghd(&instance, path, options)?;
                    timings.insert("decompose", t0.elapsed().as_millis());
                    stats = stats.with_decomposition(ghd.width(), ghd.base().node_count());
                    let t1 = Instant::now();
                    let (acyclic, tree, _) = acyclic_from_ghd(&instance, &ghd, options.budget)?;
                    timings.insert("transform", t1.elapsed().as_millis());
                    let t2 = Instant::now();
                    let outcome =
                        compute_optimal_solution(&acyclic, &weights, &tree, &options.monoid)?;
                    timings.insert("solve", t2.elapsed().as_millis());
                    let solutions = if options.enumerate {
                        Some(enumerate_csop(&acyclic, &tree, options.limit)?)
                    } else {
                        None
                    };
                    (outcome, solutions)
                }
            }
        }
        SolveMode::Wcsp => {
            let t0 = Instant::now();
            let (transformed, mut tuple_weights, artifacts) = wcsp_to_csop(&instance)?;
            tuple_weights.merge(&weights);
            timings.insert("transform", t0.elapsed().as_millis());
            let t1 = Instant::now();
            let outcome = match acyclic_join_tree(&transformed)? {
                Some(tree) => {
                    stats = stats.with_decomposition(1, tree.node_count());
                    timings.insert("decompose", t1.elapsed().as_millis());
                    let t2 = Instant::now();
                    let out = compute_optimal_solution(
                        &transformed,
                        &tuple_weights,
                        &tree,
                        &options.monoid,
                    )?;
                    timings.insert("solve", t2.elapsed().as_millis());
                    out
                }
                None => {
                    let h = build_hypergraph(&transformed)?;
                    let td = minfill_tree_decomposition(&primal_graph(&h))?;
                    let ghd = greedy_cover_lambda(&h, &td)?;
                    stats = stats.with_decomposition(ghd.width(), ghd.base().node_count());
                    timings.insert("decompose", t1.elapsed().as_millis());
                    let t2 = Instant::now();
                    let out = solve_with_decomposition_budgeted(
                        &transformed,
                        &tuple_weights,
                        &ghd,
                        &options.monoid,
                        options.budget,
                    )?;
                    timings.insert("solve", t2.elapsed().as_millis());
                    out
                }
            };
            let outcome = map_back(outcome, |t| artifacts.back_map(t));
            (outcome, None)
        }
        SolveMode::MaxCsp => {
            let t0 = Instant::now();
            let td = obtain_incidence_td(&instance, path, options)?;
            timings.insert("decompose", t0.elapsed().as_millis());
            stats = stats.with_decomposition(td.width(), td.node_count());
            let t1 = Instant::now();
            let (transformed, status_weights, artifacts) =
                maxcsp_to_csop(&instance, &td, options.budget, None)?;
            timings.insert("transform", t1.elapsed().as_millis());
            let t2 = Instant::now();
            let tree = acyclic_join_tree(&transformed)?.ok_or_else(|| {
                Error::InvalidDecomposition("rewritten instance is not acyclic".to_string())
            })?;
            let outcome =
                compute_optimal_solution(&transformed, &status_weights, &tree, &CostMonoid::Sum)?;
            timings.insert("solve", t2.elapsed().as_millis());
            let outcome = map_back(outcome, |t| artifacts.back_map(t));
            (outcome, None)
        }
    };

    let result = outcome_json(&outcome);
    println!("{}", serde_json::to_string(&result).expect("result"));
    if let Some(lines) = solutions {
        for line in lines {
            println!(
                "{}",
                serde_json::to_string(&assignment_json(&line)).expect("solution")
            );
        }
    }
    let report = RunReport {
        command: format!("solve {}", path.display()),
        timings_ms: timings,
        stats,
        result,
    };
    let code = match outcome {
        SolveOutcome::Optimal(_) => Outcome::Success,
        SolveOutcome::Unsatisfiable => Outcome::Unsatisfiable,
    };
    Ok((code, report))
}

fn enumerate_csop(
    instance: &CspInstance,
    tree: &JoinTree,
    limit: Option<usize>,
) -> Result<Vec<Tuple>, Error> {
    let reduced = full_reduce(instance, tree)?;
    if !reduced.consistent() {
        return Ok(Vec::new());
    }
    Ok(enumerate_solutions(&reduced, limit)?.collect())
}

fn map_back(outcome: SolveOutcome, f: impl Fn(&Tuple) -> Tuple) -> SolveOutcome {
    match outcome {
        SolveOutcome::Unsatisfiable => SolveOutcome::Unsatisfiable,
        SolveOutcome::Optimal(mut sol) => {
            sol.assignment = f(&sol.assignment);
            SolveOutcome::Optimal(sol)
        }
    }
}

pub enum ConvertMode {
    Td,
    Ghd,
    Wcsp,
    MaxCsp,
}

/// `convert`: rewrite an instance, writing the result and its back-map.
pub fn run_convert(
    path: &Path,
    mode: ConvertMode,
    options: &SolveOptions,
    output: Option<&Path>,
) -> Result<Outcome, Error> {
    let (instance, _) = load_instance(path, options.allow_reserved)?;
    let (suffix, text, map_json) = match mode {
        ConvertMode::Td => {
            let h = build_hypergraph(&instance)?;
            let td = match &options.decomposition {
                Some(p) => match load_ghd_file(p)? {
                    DecompositionFile::Tree(td) => td,
                    DecompositionFile::Generalized(g) => g.base().clone(),
                },
                None => minfill_tree_decomposition(&primal_graph(&h))?,
            };
            let (p2, _, artifacts) =
                acyclic_from_tree_decomposition(&instance, &td, options.budget)?;
            ("td", serialize_instance(&p2, None), artifacts.to_json())
        }
        ConvertMode::Ghd => {
            let ghd = obtain_primal_ghd(&instance, path, options)?;
            let (p2, _, artifacts) = acyclic_from_ghd(&instance, &ghd, options.budget)?;
            ("ghd", serialize_instance(&p2, None), artifacts.to_json())
        }
        ConvertMode::Wcsp => {
            let (p2, w, artifacts) = wcsp_to_csop(&instance)?;
            (
                "wcsp",
                serialize_instance(&p2, Some(&w)),
                artifacts.to_json(),
            )
        }
        ConvertMode::MaxCsp => {
            let td = obtain_incidence_td(&instance, path, options)?;
            let (p2, w, artifacts) = maxcsp_to_csop(&instance, &td, options.budget, None)?;
            (
                "maxcsp",
                serialize_instance(&p2, Some(&w)),
                artifacts.to_json(),
            )
        }
    };
    let base = output
        .map(Path::to_path_buf)
        .unwrap_or_else(|| stem(path).with_extension(format!("{suffix}.csp.json")));
    let map_path = {
        let name = base.file_name().and_then(|s| s.to_str()).unwrap_or("out");
        let stripped = name.strip_suffix(".csp.json").unwrap_or(name);
        base.with_file_name(format!("{stripped}.map.json"))
    };
    write_file(&base, &text)?;
    write_file(&map_path, &map_json)?;
    println!("wrote {}", base.display());
    println!("wrote {}", map_path.display());
    Ok(Outcome::Success)
}

pub enum OracleOp {
    Solutions,
    Optimal,
    MinViolation,
    JoinTree,
}

/// `oracle`: brute-force reference answers, for scripting tests.
pub fn run_oracle(
    path: &Path,
    op: OracleOp,
    monoid: &CostMonoid,
    limit: Option<usize>,
    allow_reserved: bool,
) -> Result<Outcome, Error> {
    let (instance, weights) = load_instance(path, allow_reserved)?;
    match op {
        OracleOp::Solutions => {
            let solutions = brute_force_solutions(&instance)?;
            let empty = solutions.is_empty();
            for s in solutions.into_iter().take(limit.unwrap_or(usize::MAX)) {
                println!(
                    "{}",
                    serde_json::to_string(&assignment_json(&s)).expect("solution")
                );
            }
            if empty {
                return Ok(Outcome::Unsatisfiable);
            }
        }
        OracleOp::Optimal => {
            let outcome = brute_force_optimal(&instance, &weights.unwrap_or_default(), monoid)?;
            println!(
                "{}",
                serde_json::to_string(&outcome_json(&outcome)).expect("result")
            );
            if outcome.is_unsatisfiable() {
                return Ok(Outcome::Unsatisfiable);
            }
        }
        OracleOp::MinViolation => {
            let (assignment, degree) = brute_force_min_violation(&instance)?;
            let out = json!({
                "violation_degree": degree,
                "assignment": assignment_json(&assignment),
            });
            println!("{}", serde_json::to_string(&out).expect("result"));
        }
        OracleOp::JoinTree => {
            let h = build_hypergraph(&instance)?;
            match exhaustive_join_tree_search(&h)? {
                Some(tree) => println!("{}", tree.to_json()),
                None => println!("{}", json!({"acyclic": false})),
            }
        }
    }
    Ok(Outcome::Success)
}

pub enum Family {
    Chain,
    Acyclic,
    TriangleCore,
    Random,
}

pub enum WeightsKind {
    None,
    Unary,
    Tuple,
}

pub struct GenerateOptions {
    pub family: Family,
    pub seed: u64,
    pub length: usize,
    pub params: GenParams,
    pub weights: WeightsKind,
    pub output: Option<PathBuf>,
}

/// `generate`: deterministic instances from the named families.
pub fn run_generate(options: &GenerateOptions) -> Result<Outcome, Error> {
    let p = match options.family {
        Family::Chain => chain_instance(
            options.length,
            options.params.domain_size,
            options.params.density_percent,
            options.params.plant_solution,
            options.seed,
        ),
        Family::Acyclic => acyclic_instance(options.seed, &options.params),
        Family::TriangleCore => triangle_core_instance(options.seed, &options.params),
        Family::Random => random_instance(options.seed, &options.params),
    };
    let (p, weights) = match options.weights {
        WeightsKind::None => (p, None),
        WeightsKind::Unary => {
            let w = random_unary_weights(options.seed ^ 0x5eed, &p);
            (p, Some(w))
        }
        WeightsKind::Tuple => (add_random_tuple_weights(options.seed ^ 0x5eed, &p), None),
    };
    let text = serialize_instance(&p, weights.as_ref());
    match &options.output {
        Some(path) => {
            write_file(path, &text)?;
            println!("wrote {}", path.display());
        }
        None => println!("{text}"),
    }
    Ok(Outcome::Success)
}

/// One row of `bench` output.
pub struct BenchRow {
    pub size: usize,
    pub median_ms: u128,
    pub runs_ms: Vec<u128>,
}

/// Times the chain-family solve path (join tree construction plus the
/// dynamic program) at each size, repeating and taking a median.
pub fn bench_chain(sizes: &[usize], repeat: usize, domain_size: usize) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    for &size in sizes {
        let instance = chain_instance(size, domain_size, 100, true, 42);
        let weights = random_unary_weights(42, &instance);
        // Warm-up run, not measured.
        solve_once(&instance, &weights);
        let mut runs = Vec::with_capacity(repeat);
        for _ in 0..repeat {
            let t = Instant::now();
            solve_once(&instance, &weights);
            runs.push(t.elapsed().as_millis());
        }
        let mut sorted = runs.clone();
        sorted.sort_unstable();
        rows.push(BenchRow {
            size,
            median_ms: sorted[sorted.len() / 2],
            runs_ms: runs,
        });
    }
    rows
}

fn solve_once(instance: &CspInstance, weights: &UnaryCostFunction) {
    let h = build_hypergraph(instance).expect("chain hypergraph");
    let tree = gyo_acyclicity(&h)
        .expect("gyo")
        .join_tree()
        .cloned()
        .expect("chains are acyclic");
    let out =
        compute_optimal_solution(instance, weights, &tree, &CostMonoid::Sum).expect("chain solve");
    assert!(
        out.optimal().is_some(),
        "full chain relations are satisfiable"
    );
}

pub fn run_bench(sizes: &[usize], repeat: usize, domain_size: usize) -> Result<Outcome, Error> {
    println!("size,median_ms,runs_ms");
    for row in bench_chain(sizes, repeat, domain_size) {
        let runs: Vec<String> = row.runs_ms.iter().map(|m| m.to_string()).collect();
        println!("{},{},{}", row.size, row.median_ms, runs.join(";"));
    }
    Ok(Outcome::Success)
}
