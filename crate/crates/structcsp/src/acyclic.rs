//! Evaluation of acyclic instances over a join tree: satisfiability by
//! upward semijoins, full reduction to global consistency, and
//! backtrack-free solution enumeration.
//!
//! After the upward pass the root relation is empty exactly when the
//! instance has no solution. Running the downward pass as well leaves every
//! relation globally consistent: each surviving tuple extends to a full
//! solution, so solutions can be read off without ever backtracking and
//! with polynomial delay.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::error::Error;
use crate::hypergraph::{build_hypergraph, check_join_tree, JoinTree};
use crate::model::{CspInstance, Tuple};

/// Per-node scopes and relations for a join tree over an instance.
///
/// Each tree node stands for one distinct constraint scope; its relation is
/// the intersection of the relations of all constraints with that scope,
/// sorted canonically.
pub(crate) struct NodeTables {
    /// Nodes in breadth-first order from the root (parents first).
    pub order: Vec<String>,
    pub parent: BTreeMap<String, String>,
    pub children: BTreeMap<String, Vec<String>>,
    pub scope: BTreeMap<String, BTreeSet<String>>,
    pub relation: BTreeMap<String, Vec<Tuple>>,
}

pub(crate) fn node_tables(instance: &CspInstance, tree: &JoinTree) -> Result<NodeTables, Error> {
    let h = build_hypergraph(instance)?;
    check_join_tree(&h, tree).map_err(|d| Error::InvalidJoinTree(d.to_string()))?;

    // Group constraints by scope; same-scope relations intersect.
    let mut by_scope: BTreeMap<BTreeSet<String>, Vec<usize>> = BTreeMap::new();
    for (i, c) in instance.constraints().iter().enumerate() {
        by_scope.entry(c.scope_set()).or_default().push(i);
    }

    let order: Vec<String> = tree.bfs_order().iter().map(|s| s.to_string()).collect();
    let parent: BTreeMap<String, String> = tree
        .parents()
        .into_iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    let mut children: BTreeMap<String, Vec<String>> =
        order.iter().map(|n| (n.clone(), Vec::new())).collect();
    for (child, p) in &parent {
        children.get_mut(p).unwrap().push(child.clone());
    }
    for v in children.values_mut() {
        v.sort_unstable();
    }

    let mut scope = BTreeMap::new();
    let mut relation = BTreeMap::new();
    for node in &order {
        let edge = tree.hyperedge_of(node).expect("labelled node");
        let vars = h.edge_vertices(edge).expect("validated edge").clone();
        let members = &by_scope[&vars];
        let mut tuples: Vec<Tuple> = instance.constraints()[members[0]].tuples().to_vec();
        for &i in &members[1..] {
            let other: HashSet<&Tuple> = instance.constraints()[i].tuples().iter().collect();
            tuples.retain(|t| other.contains(t));
        }
        tuples.sort_unstable();
        tuples.dedup();
        scope.insert(node.clone(), vars);
        relation.insert(node.clone(), tuples);
    }

    Ok(NodeTables {
        order,
        parent,
        children,
        scope,
        relation,
    })
}

/// Keeps the tuples of `target` that conform with some tuple of `support`
/// on the shared variables. With no shared variables every tuple of a
/// non-empty `support` conforms vacuously.
pub(crate) fn semijoin(target: &mut Vec<Tuple>, support: &[Tuple], shared: &BTreeSet<String>) {
    if shared.is_empty() {
        if support.is_empty() {
            target.clear();
        }
        return;
    }
    let keys: HashSet<Vec<(String, String)>> =
        support.iter().map(|t| t.projection_key(shared)).collect();
    target.retain(|t| keys.contains(&t.projection_key(shared)));
}

/// Sort-merge variant of [`semijoin`], kept as an independent cross-check.
#[allow(dead_code)]
pub(crate) fn semijoin_sort_merge(
    target: &mut Vec<Tuple>,
    support: &[Tuple],
    shared: &BTreeSet<String>,
) {
    if shared.is_empty() {
        if support.is_empty() {
            target.clear();
        }
        return;
    }
    let mut keys: Vec<Vec<(String, String)>> =
        support.iter().map(|t| t.projection_key(shared)).collect();
    keys.sort_unstable();
    keys.dedup();
    target.retain(|t| keys.binary_search(&t.projection_key(shared)).is_ok());
}

/// Decides satisfiability by leaf-to-root semijoins: true iff the root
/// relation stays non-empty.
pub fn yannakakis_decide(instance: &CspInstance, tree: &JoinTree) -> Result<bool, Error> {
    let tables = node_tables(instance, tree)?;
    let mut relation = tables.relation;
    for node in tables.order.iter().rev() {
        for child in &tables.children[node] {
            let shared: BTreeSet<String> = tables.scope[node]
                .intersection(&tables.scope[child])
                .cloned()
                .collect();
            let support = relation[child].clone();
            semijoin(relation.get_mut(node).unwrap(), &support, &shared);
        }
        if relation[node].is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An instance together with its globally consistent reduced relations.
#[derive(Clone, Debug)]
pub struct ReducedInstance {
    instance: CspInstance,
    join_tree: JoinTree,
    /// Per-constraint relations after reduction; subsets of the originals.
    reduced_relations: BTreeMap<String, Vec<Tuple>>,
    consistent: bool,
    // Node-level data for enumeration.
    node_order: Vec<String>,
    node_parent: BTreeMap<String, String>,
    node_scope: BTreeMap<String, BTreeSet<String>>,
    node_relation: BTreeMap<String, Vec<Tuple>>,
}

impl ReducedInstance {
    pub fn instance(&self) -> &CspInstance {
        &self.instance
    }

    pub fn join_tree(&self) -> &JoinTree {
        &self.join_tree
    }

    pub fn consistent(&self) -> bool {
        self.consistent
    }

    /// The reduced relation of a constraint, by name.
    pub fn reduced_relation(&self, constraint: &str) -> Option<&[Tuple]> {
        self.reduced_relations.get(constraint).map(Vec::as_slice)
    }

    pub fn reduced_relations(&self) -> impl Iterator<Item = (&str, &[Tuple])> {
        self.reduced_relations
            .iter()
            .map(|(n, r)| (n.as_str(), r.as_slice()))
    }
}

/// Bottom-up then top-down semijoin passes. On satisfiable instances the
/// resulting relations are globally consistent: every surviving tuple is
/// part of some solution.
pub fn full_reduce(instance: &CspInstance, tree: &JoinTree) -> Result<ReducedInstance, Error> {
    let tables = node_tables(instance, tree)?;
    let mut relation = tables.relation.clone();
    let mut consistent = true;

    let shared_with = |node: &str, other: &str| -> BTreeSet<String> {
        tables.scope[node]
            .intersection(&tables.scope[other])
            .cloned()
            .collect()
    };

    // Upward: filter each parent by its children.
    for node in tables.order.iter().rev() {
        for child in &tables.children[node] {
            let shared = shared_with(node, child);
            let support = relation[child].clone();
            semijoin(relation.get_mut(node).unwrap(), &support, &shared);
        }
        if relation[node].is_empty() {
            consistent = false;
        }
    }
    // Downward: filter each child by its parent.
    for node in &tables.order {
        for child in &tables.children[node] {
            let shared = shared_with(node, child);
            let support = relation[node].clone();
            semijoin(relation.get_mut(child).unwrap(), &support, &shared);
            if relation[child].is_empty() {
                consistent = false;
            }
        }
    }

    // Map node relations back to the constraints sharing each scope.
    let mut node_of_scope: BTreeMap<&BTreeSet<String>, &String> = BTreeMap::new();
    for node in &tables.order {
        node_of_scope.insert(&tables.scope[node], node);
    }
    let mut reduced_relations = BTreeMap::new();
    for c in instance.constraints() {
        let scope = c.scope_set();
        let node = node_of_scope[&scope];
        reduced_relations.insert(c.name().to_string(), relation[node.as_str()].clone());
    }

    Ok(ReducedInstance {
        instance: instance.clone(),
        join_tree: tree.clone(),
        reduced_relations,
        consistent,
        node_order: tables.order,
        node_parent: tables.parent,
        node_scope: tables.scope,
        node_relation: relation,
    })
}

/// Streams the solutions of a fully reduced, consistent instance in
/// canonical order (root tuples first, then depth-first children), without
/// backtracking and with polynomial delay. `limit` truncates the stream.
pub fn enumerate_solutions(
    reduced: &ReducedInstance,
    limit: Option<usize>,
) -> Result<SolutionIter<'_>, Error> {
    if !reduced.consistent {
        return Err(Error::Unsupported(
            "cannot enumerate solutions of an inconsistent instance".to_string(),
        ));
    }
    // Depth-first pre-order; every node's parent appears earlier.
    let mut dfs: Vec<String> = Vec::with_capacity(reduced.node_order.len());
    let mut children: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (child, parent) in &reduced.node_parent {
        children
            .entry(parent.as_str())
            .or_default()
            .push(child.as_str());
    }
    let root = reduced.node_order[0].as_str();
    let mut stack = vec![root];
    while let Some(n) = stack.pop() {
        dfs.push(n.to_string());
        if let Some(cs) = children.get(n) {
            for c in cs.iter().rev() {
                stack.push(c);
            }
        }
    }
    let parent_level: Vec<Option<usize>> = dfs
        .iter()
        .map(|n| {
            reduced
                .node_parent
                .get(n)
                .map(|p| dfs.iter().position(|m| m == p).expect("parent in order"))
        })
        .collect();

    Ok(SolutionIter {
        reduced,
        dfs,
        parent_level,
        levels: Vec::new(),
        remaining: limit,
        exhausted: false,
    })
}

struct Level {
    candidates: Vec<usize>,
    cursor: usize,
}

/// Iterator over the solutions of a reduced instance.
pub struct SolutionIter<'a> {
    reduced: &'a ReducedInstance,
    dfs: Vec<String>,
    parent_level: Vec<Option<usize>>,
    levels: Vec<Level>,
    remaining: Option<usize>,
    exhausted: bool,
}

impl SolutionIter<'_> {
    fn candidates_for(&self, level: usize) -> Vec<usize> {
        let node = &self.dfs[level];
        let relation = &self.reduced.node_relation[node];
        match self.parent_level[level] {
            None => (0..relation.len()).collect(),
            Some(pl) => {
                let parent_node = &self.dfs[pl];
                let parent_rel = &self.reduced.node_relation[parent_node];
                let parent_tuple = &parent_rel[self.levels[pl].candidates[self.levels[pl].cursor]];
                let shared: BTreeSet<String> = self.reduced.node_scope[node]
                    .intersection(&self.reduced.node_scope[parent_node])
                    .cloned()
                    .collect();
                (0..relation.len())
                    .filter(|&i| relation[i].conforms_with(parent_tuple, &shared))
                    .collect()
            }
        }
    }

    fn descend_from(&mut self, level: usize) {
        for l in level..self.dfs.len() {
            let candidates = self.candidates_for(l);
            // Global consistency guarantees progress at every level.
            assert!(
                !candidates.is_empty(),
                "enumeration dead-ended at node {}",
                self.dfs[l]
            );
            self.levels.push(Level {
                candidates,
                cursor: 0,
            });
        }
    }

    fn current_solution(&self) -> Tuple {
        let mut assignment = Tuple::empty();
        for (l, level) in self.levels.iter().enumerate() {
            let node = &self.dfs[l];
            let tuple = &self.reduced.node_relation[node][level.candidates[level.cursor]];
            for (var, val) in tuple.bindings() {
                assignment.set(var, val);
            }
        }
        assignment
    }
}

impl Iterator for SolutionIter<'_> {
    type Item = Tuple;

    fn next(&mut self) -> Option<Tuple> {
        if self.exhausted || self.remaining == Some(0) {
            return None;
        }
        if self.levels.is_empty() {
            self.descend_from(0);
        } else {
            // Advance the odometer from the deepest level.
            let mut l = self.levels.len();
            loop {
                if l == 0 {
                    self.exhausted = true;
                    return None;
                }
                l -= 1;
                self.levels[l].cursor += 1;
                if self.levels[l].cursor < self.levels[l].candidates.len() {
                    break;
                }
            }
            self.levels.truncate(l + 1);
            self.descend_from(l + 1);
        }
        if let Some(r) = self.remaining.as_mut() {
            *r -= 1;
        }
        Some(self.current_solution())
    }
}

/// Semijoins between all ordered pairs of constraint relations until a
/// fixpoint. On acyclic instances this matches the relations produced by
/// [`full_reduce`]; it serves as an independent cross-check.
pub fn pairwise_consistency_fixpoint(instance: &CspInstance) -> BTreeMap<String, Vec<Tuple>> {
    let mut relations: Vec<(BTreeSet<String>, Vec<Tuple>)> = instance
        .constraints()
        .iter()
        .map(|c| {
            let mut tuples = c.tuples().to_vec();
            tuples.sort_unstable();
            (c.scope_set(), tuples)
        })
        .collect();
    loop {
        let mut changed = false;
        for i in 0..relations.len() {
            for j in 0..relations.len() {
                if i == j {
                    continue;
                }
                let shared: BTreeSet<String> = relations[i]
                    .0
                    .intersection(&relations[j].0)
                    .cloned()
                    .collect();
                let before = relations[i].1.len();
                let support = relations[j].1.clone();
                semijoin(&mut relations[i].1, &support, &shared);
                if relations[i].1.len() != before {
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    instance
        .constraints()
        .iter()
        .zip(relations)
        .map(|(c, (_, r))| (c.name().to_string(), r))
        .collect()
}
