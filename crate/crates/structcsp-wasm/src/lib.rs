//! Browser demo bindings: analyze an instance's structure, solve it, and
//! generate example instances. Everything takes and returns JSON strings so
//! the page stays a thin SVG renderer.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use wasm_bindgen::prelude::*;

use structcsp::decomposition::{greedy_cover_lambda, minfill_tree_decomposition};
use structcsp::generate::{
    acyclic_instance, chain_instance, random_instance, triangle_core_instance, GenParams,
};
use structcsp::hypergraph::{
    build_hypergraph, gyo_acyclicity, incidence_graph, primal_graph, GyoOutcome,
};
use structcsp::model::{parse_instance, serialize_instance, CostMonoid, Tuple};
use structcsp::optimize::{compute_optimal_solution, solve_with_decomposition, SolveOutcome};
use structcsp::reduce::{maxcsp_to_csop, wcsp_to_csop, DEFAULT_TUPLE_BUDGET};
use structcsp::Error;

fn error_json(err: &Error) -> String {
    json!({ "error": err.to_string() }).to_string()
}

/// Simple layered layout for a rooted tree: leaves get consecutive x slots,
/// parents sit centered above their children, y is the depth.
fn tree_layout(
    nodes: &[String],
    edges: &[(String, String)],
    root: &str,
) -> BTreeMap<String, (f64, f64)> {
    let mut adjacent: BTreeMap<&str, Vec<&str>> =
        nodes.iter().map(|n| (n.as_str(), Vec::new())).collect();
    for (a, b) in edges {
        adjacent.get_mut(a.as_str()).unwrap().push(b);
        adjacent.get_mut(b.as_str()).unwrap().push(a);
    }
    for v in adjacent.values_mut() {
        v.sort_unstable();
    }
    let mut order = Vec::new();
    let mut stack = vec![(root, None::<&str>, 0usize)];
    while let Some((n, parent, depth)) = stack.pop() {
        order.push((n, parent, depth));
        for &m in &adjacent[n] {
            if Some(m) != parent {
                stack.push((m, Some(n), depth + 1));
            }
        }
    }
    let mut positions: BTreeMap<String, (f64, f64)> = BTreeMap::new();
    let mut next_leaf_x = 0.0f64;
    for &(n, parent, depth) in order.iter().rev() {
        let children: Vec<&str> = adjacent[n]
            .iter()
            .copied()
            .filter(|&m| Some(m) != parent)
            .collect();
        let x = if children.is_empty() {
            let x = next_leaf_x;
            next_leaf_x += 1.0;
            x
        } else {
            let sum: f64 = children.iter().map(|c| positions[*c].0).sum();
            sum / children.len() as f64
        };
        positions.insert(n.to_string(), (x, depth as f64));
    }
    positions
}

fn layout_json(
    nodes: &[String],
    labels: &BTreeMap<String, Value>,
    edges: &[(String, String)],
    root: &str,
) -> Value {
    let positions = tree_layout(nodes, edges, root);
    let node_array: Vec<Value> = nodes
        .iter()
        .map(|n| {
            let (x, y) = positions[n];
            json!({ "id": n, "label": labels.get(n).cloned().unwrap_or(Value::Null),
                    "x": x, "y": y })
        })
        .collect();
    let edge_array: Vec<Value> = edges.iter().map(|(a, b)| json!([a, b])).collect();
    json!({ "nodes": node_array, "edges": edge_array, "root": root })
}

fn analyze_impl(instance_json: &str) -> Result<Value, Error> {
    let (instance, weights) = parse_instance(instance_json)?;
    let h = build_hypergraph(&instance)?;
    let stats = instance.stats();

    let mut out = Map::new();
    out.insert("stats".into(), serde_json::to_value(&stats).expect("stats"));
    out.insert("has_weights".into(), json!(weights.is_some()));

    let hyperedges: Vec<Value> = h
        .edges()
        .map(|(id, members)| json!({ "id": id, "vertices": members.iter().collect::<Vec<_>>() }))
        .collect();
    out.insert("hyperedges".into(), Value::Array(hyperedges));

    match gyo_acyclicity(&h)? {
        GyoOutcome::Acyclic(tree) => {
            out.insert("acyclic".into(), json!(true));
            let labels: BTreeMap<String, Value> = tree
                .nodes()
                .iter()
                .map(|n| {
                    let edge = tree.hyperedge_of(n).unwrap();
                    let members: Vec<&String> = h.edge_vertices(edge).unwrap().iter().collect();
                    (n.clone(), json!({ "edge": edge, "vertices": members }))
                })
                .collect();
            let edges: Vec<(String, String)> = tree
                .tree_edges()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect();
            out.insert(
                "join_tree".into(),
                layout_json(tree.nodes(), &labels, &edges, tree.root()),
            );
            out.insert("ghw_bound".into(), json!(1));
        }
        GyoOutcome::NotAcyclic(residual) => {
            out.insert("acyclic".into(), json!(false));
            let core: Vec<Value> = residual
                .edges()
                .map(|(id, members)| {
                    json!({ "id": id, "vertices": members.iter().collect::<Vec<_>>() })
                })
                .collect();
            out.insert("cyclic_core".into(), Value::Array(core));

            let td = minfill_tree_decomposition(&primal_graph(&h))?;
            let ghd = greedy_cover_lambda(&h, &td)?;
            out.insert("ghw_bound".into(), json!(ghd.width()));
            let base = ghd.base();
            let labels: BTreeMap<String, Value> = base
                .nodes()
                .iter()
                .map(|n| {
                    (
                        n.clone(),
                        json!({
                            "chi": base.bag(n).unwrap().iter().collect::<Vec<_>>(),
                            "lambda": ghd.lambda(n).unwrap().iter().collect::<Vec<_>>(),
                        }),
                    )
                })
                .collect();
            let edges: Vec<(String, String)> = base
                .tree_edges()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect();
            out.insert(
                "decomposition".into(),
                layout_json(base.nodes(), &labels, &edges, base.root()),
            );
        }
    }

    let td = minfill_tree_decomposition(&primal_graph(&h))?;
    out.insert("primal_tw_bound".into(), json!(td.width()));
    let itd = minfill_tree_decomposition(&incidence_graph(&h)?)?;
    out.insert("incidence_tw_bound".into(), json!(itd.width()));
    Ok(Value::Object(out))
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
        SolveOutcome::Unsatisfiable => json!({ "status": "unsatisfiable" }),
        SolveOutcome::Optimal(sol) => json!({
            "status": "optimal",
            "cost": sol.cost.to_canonical_string(),
            "assignment": assignment_json(&sol.assignment),
        }),
    }
}

fn solve_impl(instance_json: &str, mode: &str, monoid: &str) -> Result<Value, Error> {
    let (instance, weights) = parse_instance(instance_json)?;
    let monoid: CostMonoid = monoid.parse()?;
    let weights = weights.unwrap_or_default();
    let outcome = match mode {
        "csop" => {
            let h = build_hypergraph(&instance)?;
            match gyo_acyclicity(&h)? {
                GyoOutcome::Acyclic(tree) => {
                    compute_optimal_solution(&instance, &weights, &tree, &monoid)?
                }
                GyoOutcome::NotAcyclic(_) => {
                    let td = minfill_tree_decomposition(&primal_graph(&h))?;
                    let ghd = greedy_cover_lambda(&h, &td)?;
                    solve_with_decomposition(&instance, &weights, &ghd, &monoid)?
                }
            }
        }
        "wcsp" => {
            let (transformed, mut w, artifacts) = wcsp_to_csop(&instance)?;
            w.merge(&weights);
            let h = build_hypergraph(&transformed)?;
            let outcome = match gyo_acyclicity(&h)? {
                GyoOutcome::Acyclic(tree) => {
                    compute_optimal_solution(&transformed, &w, &tree, &monoid)?
                }
                GyoOutcome::NotAcyclic(_) => {
                    let td = minfill_tree_decomposition(&primal_graph(&h))?;
                    let ghd = greedy_cover_lambda(&h, &td)?;
                    solve_with_decomposition(&transformed, &w, &ghd, &monoid)?
                }
            };
            strip_aux(outcome, &artifacts)
        }
        "maxcsp" => {
            let h = build_hypergraph(&instance)?;
            let td = minfill_tree_decomposition(&incidence_graph(&h)?)?;
            let (transformed, w, artifacts) =
                maxcsp_to_csop(&instance, &td, DEFAULT_TUPLE_BUDGET, None)?;
            let h2 = build_hypergraph(&transformed)?;
            let tree = gyo_acyclicity(&h2)?
                .join_tree()
                .cloned()
                .expect("rewritten instance is acyclic");
            let outcome = compute_optimal_solution(&transformed, &w, &tree, &CostMonoid::Sum)?;
            strip_aux(outcome, &artifacts)
        }
        other => {
            return Err(Error::Unsupported(format!(
                "unknown mode `{other}` (expected csop, wcsp, or maxcsp)"
            )))
        }
    };
    Ok(outcome_json(&outcome))
}

fn strip_aux(
    outcome: SolveOutcome,
    artifacts: &structcsp::reduce::ReductionArtifacts,
) -> SolveOutcome {
    match outcome {
        SolveOutcome::Unsatisfiable => SolveOutcome::Unsatisfiable,
        SolveOutcome::Optimal(mut sol) => {
            sol.assignment = artifacts.back_map(&sol.assignment);
            SolveOutcome::Optimal(sol)
        }
    }
}

fn generate_impl(family: &str, seed: u64, size: usize) -> Result<String, Error> {
    let params = GenParams {
        variables: size.max(2),
        constraints: size.max(2),
        ..GenParams::default()
    };
    let instance = match family {
        "chain" => chain_instance(size.max(2), 3, 70, true, seed),
        "acyclic" => acyclic_instance(seed, &params),
        "triangle-core" => triangle_core_instance(seed, &params),
        "random" => random_instance(seed, &params),
        other => {
            return Err(Error::Unsupported(format!(
                "unknown family `{other}` (expected chain, acyclic, triangle-core, or random)"
            )))
        }
    };
    Ok(serialize_instance(&instance, None))
}

fn preset_impl(name: &str) -> Result<String, Error> {
    match name {
        "chain" => Ok(serialize_instance(
            &structcsp::fixtures::p_chain(),
            Some(&structcsp::fixtures::p_chain_weights()),
        )),
        "triangle" => Ok(serialize_instance(
            &structcsp::fixtures::triangle_equality(),
            None,
        )),
        "big-violation" => Ok(serialize_instance(
            &structcsp::fixtures::unsat_big_constraint(),
            None,
        )),
        #[cfg(feature = "paper-fixtures")]
        "crossword" => Ok(structcsp::fixtures::crossword_json().to_string()),
        other => Err(Error::Unsupported(format!("unknown preset `{other}`"))),
    }
}

/// Structural analysis of an instance: acyclicity, join tree or cyclic
/// core, width bounds, and a drawable tree layout. JSON in, JSON out.
#[wasm_bindgen]
pub fn analyze(instance_json: &str) -> String {
    match analyze_impl(instance_json) {
        Ok(v) => v.to_string(),
        Err(e) => error_json(&e),
    }
}

/// Optimal solution under the given mode (`csop`, `wcsp`, `maxcsp`) and
/// monoid (`sum`, `max`).
#[wasm_bindgen]
pub fn solve(instance_json: &str, mode: &str, monoid: &str) -> String {
    match solve_impl(instance_json, mode, monoid) {
        Ok(v) => v.to_string(),
        Err(e) => error_json(&e),
    }
}

/// A deterministic random instance from the named family.
#[wasm_bindgen]
pub fn generate(family: &str, seed: u32, size: u32) -> String {
    match generate_impl(family, seed as u64, size as usize) {
        Ok(text) => text,
        Err(e) => error_json(&e),
    }
}

/// Built-in example instances for the preset dropdown.
#[wasm_bindgen]
pub fn preset(name: &str) -> String {
    match preset_impl(name) {
        Ok(text) => text,
        Err(e) => error_json(&e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_chain_preset() {
        let instance = preset_impl("chain").unwrap();
        let out = analyze_impl(&instance).unwrap();
        assert_eq!(out["acyclic"], json!(true));
        assert_eq!(out["ghw_bound"], json!(1));
        assert_eq!(out["join_tree"]["nodes"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn analyze_triangle_shows_cyclic_core() {
        let instance = preset_impl("triangle").unwrap();
        let out = analyze_impl(&instance).unwrap();
        assert_eq!(out["acyclic"], json!(false));
        assert_eq!(out["cyclic_core"].as_array().unwrap().len(), 3);
        assert_eq!(out["ghw_bound"], json!(2));
    }

    #[test]
    fn solve_chain_preset() {
        let instance = preset_impl("chain").unwrap();
        let out = solve_impl(&instance, "csop", "sum").unwrap();
        assert_eq!(out["status"], json!("optimal"));
        assert_eq!(out["cost"], json!("1"));
    }

    #[test]
    fn solve_big_violation_preset() {
        let instance = preset_impl("big-violation").unwrap();
        let out = solve_impl(&instance, "maxcsp", "sum").unwrap();
        assert_eq!(out["cost"], json!("1"));
    }

    #[test]
    fn generate_families_parse_back() {
        for family in ["chain", "acyclic", "triangle-core", "random"] {
            let text = generate_impl(family, 5, 4).unwrap();
            assert!(parse_instance(&text).is_ok(), "family {family}");
        }
    }

    #[test]
    fn errors_are_reported_as_json() {
        let out = analyze("not json");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert!(v["error"].as_str().unwrap().contains("syntax"));
    }
}
