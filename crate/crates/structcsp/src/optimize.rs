//! Optimal-solution computation on a join tree.
//!
//! The dynamic program walks the tree bottom-up. For each node and each
//! surviving tuple it keeps a label: the best combined cost achievable in
//! the subtree under that node once the tuple is fixed. A tuple with no
//! conforming tuple in some child relation is pruned; an emptied relation
//! means the instance has no solution. The optimum is read off at the root
//! and the witnessing assignment recovered through stored best-child
//! pointers.
//!
//! Cost attribution: every variable is charged at exactly one node, the one
//! closest to the root whose scope contains it. This keeps the recurrence
//! free of subtraction, so it works verbatim for any admissible cost
//! monoid; for the additive monoid it provably agrees with the classical
//! formulation that adds a child's label and subtracts the weight of the
//! shared bindings, which is retained in
//! [`compute_optimal_solution_fig3`] as a cross-check.
//!
//! Per-child minimization groups the child's tuples by their shared-variable
//! projection (the same keying the semijoins use), so each tree edge costs
//! one hash pass instead of a quadratic scan.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::acyclic::node_tables;
use crate::decomposition::{check_ghd, GeneralizedHypertreeDecomposition};
use crate::error::Error;
use crate::hypergraph::{build_hypergraph, JoinTree};
use crate::model::{
    evaluate_assignment, Cost, CostMonoid, CspInstance, Rational, Tuple, UnaryCostFunction,
};
use crate::reduce::{acyclic_from_ghd, DEFAULT_TUPLE_BUDGET};

/// True iff the two tuples agree on every variable in `shared`.
pub fn conforms(a: &Tuple, b: &Tuple, shared: &BTreeSet<String>) -> bool {
    a.conforms_with(b, shared)
}

/// A minimum-cost solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalSolution {
    pub assignment: Tuple,
    pub cost: Cost,
}

/// Result of a solve: either an optimal solution or a proof of
/// unsatisfiability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Optimal(OptimalSolution),
    Unsatisfiable,
}

impl SolveOutcome {
    pub fn optimal(&self) -> Option<&OptimalSolution> {
        match self {
            SolveOutcome::Optimal(s) => Some(s),
            SolveOutcome::Unsatisfiable => None,
        }
    }

    pub fn is_unsatisfiable(&self) -> bool {
        matches!(self, SolveOutcome::Unsatisfiable)
    }
}

type Key = Vec<(String, String)>;

struct EdgeGroup {
    shared: BTreeSet<String>,
    /// Projection key of the parent tuple to (best child label, index of
    /// the canonically smallest child tuple achieving it).
    best: HashMap<Key, (Cost, usize)>,
}

/// Finalized labels and best-child pointers of one dynamic-programming run.
pub struct DpTable {
    /// Nodes in processing order, leaves before parents.
    order: Vec<String>,
    /// Surviving tuples with their final labels, in canonical tuple order.
    survivors: BTreeMap<String, Vec<(Tuple, Cost)>>,
    edges: BTreeMap<(String, String), EdgeGroup>,
}

impl DpTable {
    pub fn nodes_bottom_up(&self) -> &[String] {
        &self.order
    }

    pub fn surviving(&self, node: &str) -> Option<&[(Tuple, Cost)]> {
        self.survivors.get(node).map(Vec::as_slice)
    }

    /// The label of a surviving tuple at a node.
    pub fn label(&self, node: &str, tuple: &Tuple) -> Option<&Cost> {
        let rows = self.survivors.get(node)?;
        rows.binary_search_by(|(t, _)| t.cmp(tuple))
            .ok()
            .map(|i| &rows[i].1)
    }

    /// The stored best tuple of `child` for a given parent tuple.
    pub fn best_child_tuple(
        &self,
        parent: &str,
        child: &str,
        parent_tuple: &Tuple,
    ) -> Option<&Tuple> {
        let group = self.edges.get(&(parent.to_string(), child.to_string()))?;
        let (_, idx) = group
            .best
            .get(&parent_tuple.projection_key(&group.shared))?;
        self.survivors.get(child).map(|rows| &rows[*idx].0)
    }
}

/// Computes a minimum-cost solution of `instance` over the join tree
/// `tree`, combining unary weights with `monoid`.
pub fn compute_optimal_solution(
    instance: &CspInstance,
    weights: &UnaryCostFunction,
    tree: &JoinTree,
    monoid: &CostMonoid,
) -> Result<SolveOutcome, Error> {
    compute_optimal_solution_with_table(instance, weights, tree, monoid).map(|(o, _)| o)
}

/// Like [`compute_optimal_solution`], also returning the DP table.
pub fn compute_optimal_solution_with_table(
    instance: &CspInstance,
    weights: &UnaryCostFunction,
    tree: &JoinTree,
    monoid: &CostMonoid,
) -> Result<(SolveOutcome, DpTable), Error> {
    let tables = node_tables(instance, tree)?;

    // Each variable is owned by the node nearest the root containing it;
    // breadth-first order makes that the first node encountered.
    let mut owner: BTreeMap<&str, &str> = BTreeMap::new();
    for node in &tables.order {
        for var in &tables.scope[node] {
            owner.entry(var.as_str()).or_insert(node.as_str());
        }
    }
    let mut owned: BTreeMap<&str, Vec<&str>> = tables
        .order
        .iter()
        .map(|n| (n.as_str(), Vec::new()))
        .collect();
    for (var, node) in &owner {
        owned.get_mut(node).unwrap().push(var);
    }

    let mut table = DpTable {
        order: tables.order.iter().rev().cloned().collect(),
        survivors: BTreeMap::new(),
        edges: BTreeMap::new(),
    };

    for node in tables.order.iter().rev() {
        let owned_vars = &owned[node.as_str()];
        let child_groups: Vec<&EdgeGroup> = tables.children[node]
            .iter()
            .map(|c| &table.edges[&(node.clone(), c.clone())])
            .collect();
        let mut rows: Vec<(Tuple, Cost)> = Vec::new();
        'tuples: for theta in &tables.relation[node] {
            let mut label = monoid.fold(
                owned_vars
                    .iter()
                    .map(|var| Cost::Finite(weights.get(var, theta.get(var).expect("scope var")))),
            );
            for group in &child_groups {
                match group.best.get(&theta.projection_key(&group.shared)) {
                    Some((best, _)) => label = monoid.combine(&label, best),
                    None => continue 'tuples, // no conforming child tuple
                }
            }
            rows.push((theta.clone(), label));
        }
        drop(child_groups);
        if rows.is_empty() {
            return Ok((SolveOutcome::Unsatisfiable, table));
        }
        if let Some(parent) = tables.parent.get(node) {
            let shared: BTreeSet<String> = tables.scope[node]
                .intersection(&tables.scope[parent])
                .cloned()
                .collect();
            let mut best: HashMap<Key, (Cost, usize)> = HashMap::new();
            for (i, (theta, cost)) in rows.iter().enumerate() {
                let key = theta.projection_key(&shared);
                match best.get(&key) {
                    Some((c, _)) if c <= cost => {}
                    _ => {
                        best.insert(key, (cost.clone(), i));
                    }
                }
            }
            table
                .edges
                .insert((parent.clone(), node.clone()), EdgeGroup { shared, best });
        }
        table.survivors.insert(node.clone(), rows);
    }

    let root = &tables.order[0];
    let root_rows = &table.survivors[root];
    let (mut best_idx, mut best_cost) = (0usize, root_rows[0].1.clone());
    for (i, (_, cost)) in root_rows.iter().enumerate().skip(1) {
        if *cost < best_cost {
            best_cost = cost.clone();
            best_idx = i;
        }
    }

    // Top-down: follow stored pointers, iteratively.
    let mut assignment = Tuple::empty();
    let mut stack: Vec<(&str, usize)> = vec![(root.as_str(), best_idx)];
    while let Some((node, idx)) = stack.pop() {
        let (theta, _) = &table.survivors[node][idx];
        for (var, val) in theta.bindings() {
            assignment.set(var, val);
        }
        for child in &tables.children[node] {
            let group = &table.edges[&(node.to_string(), child.clone())];
            let (_, child_idx) = group.best[&theta.projection_key(&group.shared)];
            stack.push((child.as_str(), child_idx));
        }
    }

    debug_assert!(
        evaluate_assignment(instance, &assignment, None)
            .map(|r| r.satisfies)
            .unwrap_or(false),
        "extracted assignment violates a constraint"
    );

    Ok((
        SolveOutcome::Optimal(OptimalSolution {
            assignment,
            cost: best_cost,
        }),
        table,
    ))
}

/// The classical additive recurrence, kept verbatim as a reference: a
/// node's label is the weight of its full tuple plus, per child, the
/// minimum of the child label minus the weight of the bindings shared with
/// the parent tuple. Additive costs only; agrees with
/// [`compute_optimal_solution`] under the sum monoid.
pub fn compute_optimal_solution_fig3(
    instance: &CspInstance,
    weights: &UnaryCostFunction,
    tree: &JoinTree,
) -> Result<(SolveOutcome, DpTable), Error> {
    let tables = node_tables(instance, tree)?;
    let mut table = DpTable {
        order: tables.order.iter().rev().cloned().collect(),
        survivors: BTreeMap::new(),
        edges: BTreeMap::new(),
    };

    for node in tables.order.iter().rev() {
        let mut rows: Vec<(Tuple, Cost)> = Vec::new();
        'tuples: for theta in &tables.relation[node] {
            let mut label: Rational = weights.weight_of(theta);
            for child in &tables.children[node] {
                let shared: BTreeSet<String> = tables.scope[node]
                    .intersection(&tables.scope[child])
                    .cloned()
                    .collect();
                let child_rows = &table.survivors[child];
                let mut best: Option<(Rational, usize)> = None;
                for (i, (theta_c, cost_c)) in child_rows.iter().enumerate() {
                    if !theta.conforms_with(theta_c, &shared) {
                        continue;
                    }
                    // Weight of the bindings common to both tuples.
                    let overlap: Rational = theta_c
                        .bindings()
                        .filter(|(var, val)| theta.get(var) == Some(val))
                        .map(|(var, val)| weights.get(var, val))
                        .sum();
                    let value = cost_c.as_rational().expect("additive label").clone() - overlap;
                    match &best {
                        Some((b, _)) if *b <= value => {}
                        _ => best = Some((value, i)),
                    }
                }
                match best {
                    Some((value, _)) => label = label + value,
                    None => continue 'tuples,
                }
            }
            rows.push((theta.clone(), Cost::Finite(label)));
        }
        if rows.is_empty() {
            return Ok((SolveOutcome::Unsatisfiable, table));
        }
        if let Some(parent) = tables.parent.get(node) {
            let shared: BTreeSet<String> = tables.scope[node]
                .intersection(&tables.scope[parent])
                .cloned()
                .collect();
            // Among conforming tuples the shared bindings are fixed, so the
            // adjusted argmin per projection key is the label argmin.
            let mut best: HashMap<Key, (Cost, usize)> = HashMap::new();
            for (i, (theta, cost)) in rows.iter().enumerate() {
                let key = theta.projection_key(&shared);
                match best.get(&key) {
                    Some((c, _)) if c <= cost => {}
                    _ => {
                        best.insert(key, (cost.clone(), i));
                    }
                }
            }
            table
                .edges
                .insert((parent.clone(), node.clone()), EdgeGroup { shared, best });
        }
        table.survivors.insert(node.clone(), rows);
    }

    let root = &tables.order[0];
    let root_rows = &table.survivors[root];
    let (mut best_idx, mut best_cost) = (0usize, root_rows[0].1.clone());
    for (i, (_, cost)) in root_rows.iter().enumerate().skip(1) {
        if *cost < best_cost {
            best_cost = cost.clone();
            best_idx = i;
        }
    }
    let mut assignment = Tuple::empty();
    let mut stack: Vec<(&str, usize)> = vec![(root.as_str(), best_idx)];
    while let Some((node, idx)) = stack.pop() {
        let (theta, _) = &table.survivors[node][idx];
        for (var, val) in theta.bindings() {
            assignment.set(var, val);
        }
        for child in &tables.children[node] {
            let group = &table.edges[&(node.to_string(), child.clone())];
            let (_, child_idx) = group.best[&theta.projection_key(&group.shared)];
            stack.push((child.as_str(), child_idx));
        }
    }

    Ok((
        SolveOutcome::Optimal(OptimalSolution {
            assignment,
            cost: best_cost,
        }),
        table,
    ))
}

/// Solves a cyclic instance through a generalized hypertree decomposition:
/// rewrite into an equivalent acyclic instance whose join tree is the
/// decomposition tree, run the dynamic program, and restrict the result to
/// the original variables (the rewriting introduces none).
pub fn solve_with_decomposition(
    instance: &CspInstance,
    weights: &UnaryCostFunction,
    decomposition: &GeneralizedHypertreeDecomposition,
    monoid: &CostMonoid,
) -> Result<SolveOutcome, Error> {
    solve_with_decomposition_budgeted(
        instance,
        weights,
        decomposition,
        monoid,
        DEFAULT_TUPLE_BUDGET,
    )
}

pub fn solve_with_decomposition_budgeted(
    instance: &CspInstance,
    weights: &UnaryCostFunction,
    decomposition: &GeneralizedHypertreeDecomposition,
    monoid: &CostMonoid,
    budget: u64,
) -> Result<SolveOutcome, Error> {
    let h = build_hypergraph(instance)?;
    check_ghd(&h, decomposition).map_err(|d| Error::InvalidDecomposition(d.to_string()))?;
    let (acyclic, tree, _artifacts) = acyclic_from_ghd(instance, decomposition, budget)?;
    compute_optimal_solution(&acyclic, weights, &tree, monoid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::hypergraph::gyo_acyclicity;
    use crate::model::Constraint;

    fn tuple(pairs: &[(&str, &str)]) -> Tuple {
        Tuple::from_pairs(pairs.iter().copied()).unwrap()
    }

    fn join_tree_of(p: &CspInstance) -> JoinTree {
        let h = build_hypergraph(p).unwrap();
        gyo_acyclicity(&h).unwrap().join_tree().cloned().unwrap()
    }

    #[test]
    fn conforms_examples() {
        let a = tuple(&[("X", "a"), ("Y", "b")]);
        let b = tuple(&[("Y", "b"), ("Z", "c")]);
        let c = tuple(&[("Y", "c"), ("Z", "c")]);
        assert!(conforms(&a, &c, &BTreeSet::new()));
        let shared: BTreeSet<String> = ["Y".to_string()].into();
        assert!(conforms(&a, &b, &shared));
        assert!(!conforms(&a, &c, &shared));
    }

    #[test]
    fn single_constraint_minimum() {
        let p = CspInstance::new(
            vec!["X".into()],
            vec!["a".into(), "b".into()],
            vec![Constraint::new(
                "C",
                vec!["X".into()],
                vec![tuple(&[("X", "a")]), tuple(&[("X", "b")])],
            )
            .unwrap()],
        )
        .unwrap();
        let mut w = UnaryCostFunction::new();
        w.set("X", "a", Rational::integer(1));
        w.set("X", "b", Rational::integer(2));
        let tree = join_tree_of(&p);
        let out = compute_optimal_solution(&p, &w, &tree, &CostMonoid::Sum).unwrap();
        let sol = out.optimal().unwrap();
        assert_eq!(sol.assignment, tuple(&[("X", "a")]));
        assert_eq!(sol.cost, Cost::Finite(Rational::integer(1)));
    }

    #[test]
    fn chain_optimum_is_cost_one() {
        let p = fixtures::p_chain();
        let w = fixtures::p_chain_weights();
        let tree = join_tree_of(&p);
        let out = compute_optimal_solution(&p, &w, &tree, &CostMonoid::Sum).unwrap();
        let sol = out.optimal().unwrap();
        assert_eq!(sol.cost, Cost::Finite(Rational::integer(1)));
        assert_eq!(sol.assignment, tuple(&[("X", "0"), ("Y", "0"), ("Z", "1")]));
    }

    #[test]
    fn fig3_reference_agrees_on_chain() {
        let p = fixtures::p_chain();
        let w = fixtures::p_chain_weights();
        let tree = join_tree_of(&p);
        let (a, _) = compute_optimal_solution_with_table(&p, &w, &tree, &CostMonoid::Sum).unwrap();
        let (b, _) = compute_optimal_solution_fig3(&p, &w, &tree).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unsatisfiable_chain_detected() {
        let p = fixtures::p_chain();
        let mut constraints = p.constraints().to_vec();
        constraints[1] = Constraint::new("C2", vec!["Y".into(), "Z".into()], vec![]).unwrap();
        let p2 =
            CspInstance::new(p.variables().to_vec(), p.domain().to_vec(), constraints).unwrap();
        let tree = join_tree_of(&p2);
        let out = compute_optimal_solution(&p2, &UnaryCostFunction::new(), &tree, &CostMonoid::Sum)
            .unwrap();
        assert!(out.is_unsatisfiable());
    }

    /// The lone-constraint crossword slot: minimizing the number of vowels
    /// picks the word with the fewest of them.
    #[cfg(feature = "paper-fixtures")]
    #[test]
    fn crossword_slot_picks_fewest_vowels() {
        let cw = fixtures::crossword();
        let slot = cw.constraint("1H").unwrap().clone();
        let p = CspInstance::new(
            slot.scope().to_vec(),
            cw.domain().to_vec(),
            vec![slot.clone()],
        )
        .unwrap();
        let mut w = UnaryCostFunction::new();
        for var in p.variables() {
            for vowel in ["a", "e", "i", "o", "u"] {
                w.set(var.clone(), vowel, Rational::integer(1));
            }
        }
        // Vowel counts derived from the relation itself.
        let counts: Vec<(Tuple, usize)> = slot
            .tuples()
            .iter()
            .map(|t| {
                let n = t
                    .bindings()
                    .filter(|(_, val)| ["a", "e", "i", "o", "u"].contains(val))
                    .count();
                (t.clone(), n)
            })
            .collect();
        let best = counts.iter().map(|(_, n)| *n).min().unwrap();
        assert_eq!(best, 1); // "block"

        let tree = join_tree_of(&p);
        let out = compute_optimal_solution(&p, &w, &tree, &CostMonoid::Sum).unwrap();
        let sol = out.optimal().unwrap();
        assert_eq!(sol.cost, Cost::Finite(Rational::integer(best as i64)));
        let word: String = ["1", "2", "3", "4", "5"]
            .iter()
            .map(|b| sol.assignment.get(b).unwrap())
            .collect();
        assert_eq!(word, "block");
    }

    /// Two constraints over the same scope share one tree node; the node's
    /// relation is their intersection.
    #[test]
    fn same_scope_constraints_intersect_at_their_node() {
        let p = CspInstance::new(
            vec!["X".into(), "Y".into()],
            vec!["0".into(), "1".into()],
            vec![
                Constraint::new(
                    "C1",
                    vec!["X".into(), "Y".into()],
                    vec![
                        tuple(&[("X", "0"), ("Y", "0")]),
                        tuple(&[("X", "0"), ("Y", "1")]),
                        tuple(&[("X", "1"), ("Y", "1")]),
                    ],
                )
                .unwrap(),
                Constraint::new(
                    "C2",
                    vec!["Y".into(), "X".into()],
                    vec![
                        tuple(&[("X", "0"), ("Y", "1")]),
                        tuple(&[("X", "1"), ("Y", "1")]),
                        tuple(&[("X", "1"), ("Y", "0")]),
                    ],
                )
                .unwrap(),
            ],
        )
        .unwrap();
        let mut w = UnaryCostFunction::new();
        w.set("X", "1", Rational::integer(1));
        w.set("Y", "1", Rational::integer(1));
        let tree = join_tree_of(&p);
        assert_eq!(tree.node_count(), 1);
        let out = compute_optimal_solution(&p, &w, &tree, &CostMonoid::Sum).unwrap();
        let sol = out.optimal().unwrap();
        // Intersection is {01, 11}; the cheaper of the two costs 1.
        assert_eq!(sol.assignment, tuple(&[("X", "0"), ("Y", "1")]));
        assert_eq!(sol.cost, Cost::Finite(Rational::one()));
    }

    #[test]
    fn decomposition_route_matches_direct_solve_on_acyclic_input() {
        use crate::decomposition::ghd_from_join_tree;
        let p = fixtures::p_chain();
        let w = fixtures::p_chain_weights();
        let tree = join_tree_of(&p);
        let direct = compute_optimal_solution(&p, &w, &tree, &CostMonoid::Sum).unwrap();
        let h = build_hypergraph(&p).unwrap();
        let ghd = ghd_from_join_tree(&h, &tree).unwrap();
        let via_decomposition = solve_with_decomposition(&p, &w, &ghd, &CostMonoid::Sum).unwrap();
        assert_eq!(direct, via_decomposition);
    }

    #[test]
    fn decomposition_route_detects_unsatisfiable_triangle() {
        use crate::decomposition::{GeneralizedHypertreeDecomposition, TreeDecomposition};
        use std::collections::BTreeMap;
        let base = fixtures::triangle_equality();
        let mut constraints = base.constraints().to_vec();
        constraints[2] = Constraint::new("CA", vec!["C".into(), "A".into()], vec![]).unwrap();
        let p = CspInstance::new(
            base.variables().to_vec(),
            base.domain().to_vec(),
            constraints,
        )
        .unwrap();
        let chi: BTreeMap<String, BTreeSet<String>> = [(
            "t1".to_string(),
            ["A".to_string(), "B".to_string(), "C".to_string()].into(),
        )]
        .into();
        let td =
            TreeDecomposition::new(vec!["t1".into()], chi, BTreeSet::new(), "t1".into()).unwrap();
        let lambda: BTreeMap<String, BTreeSet<String>> = [(
            "t1".to_string(),
            ["AB".to_string(), "BC".to_string()].into(),
        )]
        .into();
        let ghd = GeneralizedHypertreeDecomposition::new(td, lambda).unwrap();
        let out = solve_with_decomposition(&p, &UnaryCostFunction::new(), &ghd, &CostMonoid::Sum)
            .unwrap();
        assert!(out.is_unsatisfiable());
    }

    #[test]
    fn best_child_pointers_conform() {
        let p = fixtures::p_chain();
        let w = fixtures::p_chain_weights();
        let tree = join_tree_of(&p);
        let (_, table) =
            compute_optimal_solution_with_table(&p, &w, &tree, &CostMonoid::Sum).unwrap();
        let parents: Vec<(String, String)> = table.edges.keys().cloned().collect();
        for (parent, child) in parents {
            let shared = table.edges[&(parent.clone(), child.clone())].shared.clone();
            for (theta, _) in table.surviving(&parent).unwrap() {
                if let Some(best) = table.best_child_tuple(&parent, &child, theta) {
                    assert!(theta.conforms_with(best, &shared));
                }
            }
        }
    }
}
