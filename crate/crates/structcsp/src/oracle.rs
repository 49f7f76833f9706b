//! Brute-force reference implementations.
//!
//! These share nothing with the solving pipeline beyond the data model and
//! [`evaluate_assignment`]; they enumerate exhaustively, guarded by hard
//! size limits rather than silent truncation, and back every equivalence
//! assertion in the test suite.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::hypergraph::{check_join_tree, Hypergraph, JoinTree};
use crate::model::{
    evaluate_assignment, unary_cost, Cost, CostMonoid, CspInstance, Tuple, UnaryCostFunction,
};
use crate::optimize::{OptimalSolution, SolveOutcome};

const MAX_ASSIGNMENTS: u128 = 1_000_000;

fn assignment_space(instance: &CspInstance) -> Result<(), Error> {
    let mut total: u128 = 1;
    for _ in instance.variables() {
        total = total.saturating_mul(instance.domain().len() as u128);
        if total > MAX_ASSIGNMENTS {
            return Err(Error::TooLarge(format!(
                "assignment space exceeds {MAX_ASSIGNMENTS}"
            )));
        }
    }
    Ok(())
}

fn assignments(instance: &CspInstance) -> Vec<Tuple> {
    let vars = instance.variables();
    let domain = instance.domain();
    if vars.is_empty() || domain.is_empty() {
        return if vars.is_empty() {
            vec![Tuple::empty()]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    let mut cursor = vec![0usize; vars.len()];
    'outer: loop {
        let mut t = Tuple::empty();
        for (i, v) in vars.iter().enumerate() {
            t.set(v.clone(), domain[cursor[i]].clone());
        }
        out.push(t);
        let mut i = vars.len();
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            cursor[i] += 1;
            if cursor[i] < domain.len() {
                break;
            }
            cursor[i] = 0;
        }
    }
    out
}

/// The exact solution set, by checking every assignment.
pub fn brute_force_solutions(instance: &CspInstance) -> Result<Vec<Tuple>, Error> {
    assignment_space(instance)?;
    let mut out = Vec::new();
    for theta in assignments(instance) {
        if evaluate_assignment(instance, &theta, None)?.satisfies {
            out.push(theta);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// The exact optimum under a cost monoid, ties broken by canonical
/// assignment order.
pub fn brute_force_optimal(
    instance: &CspInstance,
    weights: &UnaryCostFunction,
    monoid: &CostMonoid,
) -> Result<SolveOutcome, Error> {
    let solutions = brute_force_solutions(instance)?;
    let mut best: Option<(Cost, Tuple)> = None;
    for theta in solutions {
        let cost = unary_cost(weights, &theta, monoid);
        match &best {
            Some((c, t)) if (c, t) <= (&cost, &theta) => {}
            _ => best = Some((cost, theta)),
        }
    }
    Ok(match best {
        None => SolveOutcome::Unsatisfiable,
        Some((cost, assignment)) => SolveOutcome::Optimal(OptimalSolution { assignment, cost }),
    })
}

/// The exact minimum violation degree and a witnessing assignment, ties
/// broken canonically. Every instance with a non-empty assignment space has
/// one.
pub fn brute_force_min_violation(instance: &CspInstance) -> Result<(Tuple, usize), Error> {
    assignment_space(instance)?;
    let mut best: Option<(usize, Tuple)> = None;
    for theta in assignments(instance) {
        let report = evaluate_assignment(instance, &theta, None)?;
        let key = (report.violation_degree, theta);
        match &best {
            Some(b) if *b <= key => {}
            _ => best = Some(key),
        }
    }
    match best {
        Some((degree, theta)) => Ok((theta, degree)),
        None => Err(Error::TooLarge(
            "instance has an empty assignment space".to_string(),
        )),
    }
}

/// Decodes a labelled tree on `n` nodes from a sequence of `n - 2` labels.
fn tree_from_sequence(n: usize, seq: &[usize]) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut leaf_heap: BTreeSet<usize> = (0..n).filter(|&i| degree[i] == 1).collect();
    for &s in seq {
        let leaf = *leaf_heap.iter().next().unwrap();
        leaf_heap.remove(&leaf);
        edges.push((leaf, s));
        degree[s] -= 1;
        if degree[s] == 1 {
            leaf_heap.insert(s);
        }
    }
    let mut rest = leaf_heap.into_iter();
    let (a, b) = (rest.next().unwrap(), rest.next().unwrap());
    edges.push((a, b));
    edges
}

/// Tries every labelled tree over the hyperedges and returns the first join
/// tree found, in lexicographic sequence order; `None` when no tree
/// satisfies the connectedness property.
pub fn exhaustive_join_tree_search(h: &Hypergraph) -> Result<Option<JoinTree>, Error> {
    let m = h.edge_count();
    if m == 0 {
        return Err(Error::Unsupported(
            "hypergraph has no hyperedges".to_string(),
        ));
    }
    if m > 6 {
        return Err(Error::TooLarge(format!(
            "exhaustive join tree search supports at most 6 hyperedges, got {m}"
        )));
    }
    let ids: Vec<&str> = h.edge_ids().collect();
    let node_name = |i: usize| format!("n{}", i + 1);
    let build = |edges: &[(usize, usize)]| -> JoinTree {
        let nodes: Vec<String> = (0..m).map(node_name).collect();
        let hyperedge_of: BTreeMap<String, String> =
            (0..m).map(|i| (node_name(i), ids[i].to_string())).collect();
        let tree_edges: BTreeSet<(String, String)> = edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (node_name(a), node_name(b));
                if x < y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect();
        JoinTree::new(nodes, hyperedge_of, tree_edges, node_name(0)).expect("labelled tree")
    };

    if m == 1 {
        let tree = build(&[]);
        return Ok(check_join_tree(h, &tree).is_ok().then_some(tree));
    }
    if m == 2 {
        let tree = build(&[(0, 1)]);
        return Ok(check_join_tree(h, &tree).is_ok().then_some(tree));
    }

    // All label sequences of length m - 2 over 0..m, lexicographically.
    let mut seq = vec![0usize; m - 2];
    loop {
        let tree = build(&tree_from_sequence(m, &seq));
        if check_join_tree(h, &tree).is_ok() {
            return Ok(Some(tree));
        }
        let mut i = seq.len();
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            seq[i] += 1;
            if seq[i] < m {
                break;
            }
            seq[i] = 0;
        }
    }
}
