//! Instance transformations: acyclicization along a (generalized hypertree)
//! decomposition, tuple weights to unary weights, and violation-degree
//! minimization to unary-weighted optimization.
//!
//! Every transformation preserves the solution set (or, for
//! violation-degree minimization, the optimum) and maps the structural
//! witness along: the decomposition tree becomes the join tree of the
//! rewritten instance, and fresh names never collide with user names
//! because the parser reserves the `__` prefix.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::decomposition::{
    check_ghd, check_tree_decomposition, GeneralizedHypertreeDecomposition, TreeDecomposition,
};
use crate::error::Error;
use crate::hypergraph::{build_hypergraph, incidence_graph, incidence_vertex_edge_id, JoinTree};
use crate::model::{Constraint, CspInstance, Rational, Tuple, UnaryCostFunction};

/// Default cap on the number of materialized tuples per transformation.
pub const DEFAULT_TUPLE_BUDGET: u64 = 10_000_000;

/// What a transformation did to the instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionKind {
    /// Acyclicization along a tree decomposition of the primal graph.
    TreeDecomposition,
    /// Acyclicization along a generalized hypertree decomposition.
    GeneralizedHypertree,
    /// Tuple weights moved onto fresh selector variables.
    TupleWeights,
    /// Violation counting via per-constraint status variables.
    ViolationDegree,
}

impl ReductionKind {
    fn as_str(&self) -> &'static str {
        match self {
            ReductionKind::TreeDecomposition => "tree-decomposition",
            ReductionKind::GeneralizedHypertree => "generalized-hypertree",
            ReductionKind::TupleWeights => "tuple-weights",
            ReductionKind::ViolationDegree => "violation-degree",
        }
    }

    fn parse(s: &str) -> Result<Self, Error> {
        match s {
            "tree-decomposition" => Ok(ReductionKind::TreeDecomposition),
            "generalized-hypertree" => Ok(ReductionKind::GeneralizedHypertree),
            "tuple-weights" => Ok(ReductionKind::TupleWeights),
            "violation-degree" => Ok(ReductionKind::ViolationDegree),
            other => Err(Error::semantic(format!("unknown reduction kind `{other}`"))),
        }
    }
}

/// Bookkeeping to translate between an instance and its transformed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionArtifacts {
    pub kind: ReductionKind,
    /// Fresh variables introduced by the transformation.
    pub aux_variables: Vec<String>,
    /// Fresh value to (constraint name, tuple index) of the tuple it encodes.
    pub value_map: BTreeMap<String, (String, usize)>,
    /// The fresh value marking a violated constraint, when one exists.
    pub sentinel: Option<String>,
    /// For acyclicizations: the tree node at which each original constraint
    /// was enforced.
    pub constraint_nodes: BTreeMap<String, String>,
}

impl ReductionArtifacts {
    fn new(kind: ReductionKind) -> Self {
        ReductionArtifacts {
            kind,
            aux_variables: Vec::new(),
            value_map: BTreeMap::new(),
            sentinel: None,
            constraint_nodes: BTreeMap::new(),
        }
    }

    /// Translates a transformed solution back: drops the fresh variables.
    pub fn back_map(&self, assignment: &Tuple) -> Tuple {
        let aux: BTreeSet<&str> = self.aux_variables.iter().map(String::as_str).collect();
        let mut out = Tuple::empty();
        for (var, val) in assignment.bindings() {
            if !aux.contains(var) {
                out.set(var, val);
            }
        }
        out
    }

    /// `.map.json` serialization.
    pub fn to_json(&self) -> String {
        let mut root = Map::new();
        root.insert("kind".into(), json!(self.kind.as_str()));
        root.insert("aux_variables".into(), json!(self.aux_variables));
        let mut vm = Map::new();
        for (value, (constraint, index)) in &self.value_map {
            vm.insert(value.clone(), json!([constraint, index]));
        }
        root.insert("value_map".into(), Value::Object(vm));
        if let Some(s) = &self.sentinel {
            root.insert("sentinel".into(), json!(s));
        }
        if !self.constraint_nodes.is_empty() {
            root.insert("constraint_nodes".into(), json!(self.constraint_nodes));
        }
        serde_json::to_string_pretty(&Value::Object(root)).expect("artifacts serialization")
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            kind: String,
            aux_variables: Vec<String>,
            value_map: BTreeMap<String, (String, usize)>,
            #[serde(default)]
            sentinel: Option<String>,
            #[serde(default)]
            constraint_nodes: BTreeMap<String, String>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Ok(ReductionArtifacts {
            kind: ReductionKind::parse(&raw.kind)?,
            aux_variables: raw.aux_variables,
            value_map: raw.value_map,
            sentinel: raw.sentinel,
            constraint_nodes: raw.constraint_nodes,
        })
    }
}

fn fresh_name(base: String, taken: &mut BTreeSet<String>) -> String {
    let mut name = base.clone();
    let mut k = 0usize;
    while taken.contains(&name) {
        k += 1;
        name = format!("{base}_{k}");
    }
    taken.insert(name.clone());
    name
}

fn saturating_pow(base: u128, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}

/// All tuples over `vars` with values from `domain`, in odometer order.
fn all_tuples(vars: &[String], domain: &[String]) -> Vec<Tuple> {
    if vars.is_empty() {
        return vec![Tuple::empty()];
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

/// Per distinct scope, the intersection of the relations of all constraints
/// carrying it.
fn scope_relations(instance: &CspInstance) -> BTreeMap<BTreeSet<String>, Vec<Tuple>> {
    let mut by_scope: BTreeMap<BTreeSet<String>, Vec<Tuple>> = BTreeMap::new();
    for c in instance.constraints() {
        let scope = c.scope_set();
        match by_scope.get_mut(&scope) {
            None => {
                let mut tuples = c.tuples().to_vec();
                tuples.sort_unstable();
                by_scope.insert(scope, tuples);
            }
            Some(existing) => {
                let other: HashSet<&Tuple> = c.tuples().iter().collect();
                existing.retain(|t| other.contains(t));
            }
        }
    }
    by_scope
}

/// The tree node (smallest id) whose bag contains each constraint scope.
fn assign_constraints(
    instance: &CspInstance,
    td: &TreeDecomposition,
) -> Result<BTreeMap<String, String>, Error> {
    let mut assignment = BTreeMap::new();
    for c in instance.constraints() {
        let scope = c.scope_set();
        let node = td
            .bags()
            .filter(|(_, bag)| scope.iter().all(|v| bag.contains(v)))
            .map(|(n, _)| n)
            .min();
        match node {
            Some(n) => {
                assignment.insert(c.name().to_string(), n.to_string());
            }
            None => {
                return Err(Error::InvalidDecomposition(format!(
                    "scope of constraint `{}` is contained in no bag",
                    c.name()
                )))
            }
        }
    }
    Ok(assignment)
}

/// Packages the per-node relations of an acyclicization into an instance
/// whose join tree is the decomposition tree itself.
fn assemble_acyclic(
    instance: &CspInstance,
    td: &TreeDecomposition,
    relations: BTreeMap<String, Vec<Tuple>>,
    kind: ReductionKind,
    constraint_nodes: BTreeMap<String, String>,
) -> Result<(CspInstance, JoinTree, ReductionArtifacts), Error> {
    let mut constraints = Vec::new();
    for node in td.nodes() {
        let bag = td.bag(node).expect("bag");
        let scope: Vec<String> = bag.iter().cloned().collect();
        constraints.push(Constraint::new(
            node.clone(),
            scope,
            relations[node].clone(),
        )?);
    }
    let transformed = CspInstance::new(
        instance.variables().to_vec(),
        instance.domain().to_vec(),
        constraints,
    )?;

    let nodes = td.nodes().to_vec();
    let hyperedge_of: BTreeMap<String, String> =
        nodes.iter().map(|n| (n.clone(), n.clone())).collect();
    let tree_edges: BTreeSet<(String, String)> = td
        .tree_edges()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    let tree = JoinTree::new(nodes, hyperedge_of, tree_edges, td.root().to_string())?;

    let mut artifacts = ReductionArtifacts::new(kind);
    artifacts.constraint_nodes = constraint_nodes;
    Ok((transformed, tree, artifacts))
}

/// Rewrites an instance into an equivalent acyclic one along a tree
/// decomposition of its primal graph: one constraint per node, whose
/// relation is every bag tuple that passes all original constraints fitting
/// in the bag.
pub fn acyclic_from_tree_decomposition(
    instance: &CspInstance,
    td: &TreeDecomposition,
    budget: u64,
) -> Result<(CspInstance, JoinTree, ReductionArtifacts), Error> {
    let h = build_hypergraph(instance)?;
    let primal = crate::hypergraph::primal_graph(&h);
    check_tree_decomposition(&primal, td)
        .map_err(|d| Error::InvalidDecomposition(d.to_string()))?;
    let td = td.normalize();

    let u = instance.domain().len() as u128;
    let projected: u128 = td
        .bags()
        .map(|(_, bag)| saturating_pow(u, bag.len()))
        .fold(0u128, |a, b| a.saturating_add(b));
    if projected > budget as u128 {
        return Err(Error::BudgetExceeded { projected, budget });
    }

    let constraint_nodes = assign_constraints(instance, &td)?;
    let mut filters: BTreeMap<&str, Vec<&Constraint>> = td
        .nodes()
        .iter()
        .map(|n| (n.as_str(), Vec::new()))
        .collect();
    for c in instance.constraints() {
        let scope = c.scope_set();
        for (node, bag) in td.bags() {
            if scope.iter().all(|v| bag.contains(v)) {
                filters.get_mut(node).unwrap().push(c);
            }
        }
    }
    let membership: HashMap<&str, HashSet<&Tuple>> = instance
        .constraints()
        .iter()
        .map(|c| (c.name(), c.tuples().iter().collect()))
        .collect();

    let mut relations = BTreeMap::new();
    for (node, bag) in td.bags() {
        let vars: Vec<String> = bag.iter().cloned().collect();
        let mut rows = all_tuples(&vars, instance.domain());
        rows.retain(|t| {
            filters[node].iter().all(|c| {
                let proj = t.restrict(c.scope().iter().map(String::as_str));
                membership[c.name()].contains(&proj)
            })
        });
        relations.insert(node.to_string(), rows);
    }

    assemble_acyclic(
        instance,
        &td,
        relations,
        ReductionKind::TreeDecomposition,
        constraint_nodes,
    )
}

fn join_relations(
    a_rel: &[Tuple],
    a_scope: &BTreeSet<String>,
    b_rel: &[Tuple],
    b_scope: &BTreeSet<String>,
) -> Vec<Tuple> {
    let shared: BTreeSet<String> = a_scope.intersection(b_scope).cloned().collect();
    let mut grouped: HashMap<Vec<(String, String)>, Vec<&Tuple>> = HashMap::new();
    for t in b_rel {
        grouped
            .entry(t.projection_key(&shared))
            .or_default()
            .push(t);
    }
    let mut out = Vec::new();
    for a in a_rel {
        if let Some(bs) = grouped.get(&a.projection_key(&shared)) {
            for b in bs {
                out.push(a.union(b).expect("join tuples agree on shared variables"));
            }
        }
    }
    out
}

/// Rewrites an instance into an equivalent acyclic one along a generalized
/// hypertree decomposition: per node, join the relations of the covering
/// scopes pairwise, project onto the bag, and filter by every original
/// constraint fitting in the bag. Intermediate join sizes stay below
/// `r_max` to the cover size.
pub fn acyclic_from_ghd(
    instance: &CspInstance,
    ghd: &GeneralizedHypertreeDecomposition,
    budget: u64,
) -> Result<(CspInstance, JoinTree, ReductionArtifacts), Error> {
    let h = build_hypergraph(instance)?;
    check_ghd(&h, ghd).map_err(|d| Error::InvalidDecomposition(d.to_string()))?;
    let ghd = ghd.normalize();
    let td = ghd.base();

    let by_scope = scope_relations(instance);
    let r_max = instance
        .constraints()
        .iter()
        .map(|c| c.tuples().len())
        .max()
        .unwrap_or(0) as u128;

    let constraint_nodes = assign_constraints(instance, td)?;
    let membership: HashMap<&str, HashSet<&Tuple>> = instance
        .constraints()
        .iter()
        .map(|c| (c.name(), c.tuples().iter().collect()))
        .collect();

    let mut produced: u128 = 0;
    let mut relations = BTreeMap::new();
    for node in td.nodes() {
        let bag = td.bag(node).expect("bag");
        let cover = ghd.lambda(node).expect("cover");
        let bound = saturating_pow(r_max, cover.len());

        let mut acc: Option<(BTreeSet<String>, Vec<Tuple>)> = None;
        for edge in cover {
            let scope = h.edge_vertices(edge).expect("validated edge").clone();
            let relation = by_scope[&scope].clone();
            acc = Some(match acc {
                None => (scope, relation),
                Some((acc_scope, acc_rel)) => {
                    let joined = join_relations(&acc_rel, &acc_scope, &relation, &scope);
                    let merged: BTreeSet<String> = acc_scope.union(&scope).cloned().collect();
                    (merged, joined)
                }
            });
            let size = acc.as_ref().unwrap().1.len() as u128;
            assert!(
                size <= bound,
                "pairwise join exceeded its size bound at node {node}"
            );
            produced = produced.saturating_add(size);
            if produced > budget as u128 {
                return Err(Error::BudgetExceeded {
                    projected: produced,
                    budget,
                });
            }
        }
        let (_, joined) = acc.ok_or_else(|| {
            Error::InvalidDecomposition(format!("node `{node}` has an empty cover"))
        })?;

        let bag_vars: Vec<&str> = bag.iter().map(String::as_str).collect();
        let mut projected: Vec<Tuple> = joined
            .iter()
            .map(|t| t.restrict(bag_vars.iter().copied()))
            .collect();
        projected.sort_unstable();
        projected.dedup();
        projected.retain(|t| {
            instance.constraints().iter().all(|c| {
                let scope = c.scope_set();
                if !scope.iter().all(|v| bag.contains(v)) {
                    return true;
                }
                let proj = t.restrict(c.scope().iter().map(String::as_str));
                membership[c.name()].contains(&proj)
            })
        });
        relations.insert(node.to_string(), projected);
    }

    assemble_acyclic(
        instance,
        td,
        relations,
        ReductionKind::GeneralizedHypertree,
        constraint_nodes,
    )
}

/// Moves tuple weights onto fresh selector variables: each constraint gains
/// a variable whose value picks the tuple in use, and the tuple's weight
/// becomes the unary weight of that value. Solutions correspond one-to-one
/// with identical costs, and each hyperedge only gains a private vertex, so
/// acyclicity is preserved in both directions.
pub fn wcsp_to_csop(
    instance: &CspInstance,
) -> Result<(CspInstance, UnaryCostFunction, ReductionArtifacts), Error> {
    for c in instance.constraints() {
        if c.tuple_weights().is_none() {
            return Err(Error::semantic(format!(
                "constraint `{}` has no tuple weights",
                c.name()
            )));
        }
    }

    let mut taken_vars: BTreeSet<String> = instance.variables().iter().cloned().collect();
    let mut taken_vals: BTreeSet<String> = instance.domain().iter().cloned().collect();

    let mut artifacts = ReductionArtifacts::new(ReductionKind::TupleWeights);
    let mut variables = instance.variables().to_vec();
    let mut domain = instance.domain().to_vec();
    let mut constraints = Vec::new();
    let mut weights = UnaryCostFunction::new();

    for (v, c) in instance.constraints().iter().enumerate() {
        let selector = fresh_name(format!("__D{}", v + 1), &mut taken_vars);
        variables.push(selector.clone());
        artifacts.aux_variables.push(selector.clone());

        let mut scope = c.scope().to_vec();
        scope.push(selector.clone());
        let mut tuples = Vec::with_capacity(c.tuples().len());
        for (i, t) in c.tuples().iter().enumerate() {
            let value = fresh_name(format!("__u{}_{}", v + 1, i), &mut taken_vals);
            domain.push(value.clone());
            let mut extended = t.clone();
            extended.set(selector.clone(), value.clone());
            tuples.push(extended);
            weights.set(
                selector.clone(),
                value.clone(),
                c.tuple_weights().unwrap()[i].clone(),
            );
            artifacts.value_map.insert(value, (c.name().to_string(), i));
        }
        constraints.push(Constraint::new(c.name(), scope, tuples)?);
    }

    let transformed = CspInstance::new(variables, domain, constraints)?;
    Ok((transformed, weights, artifacts))
}

/// Rewrites violation-degree minimization into unary-weighted optimization
/// over a tree decomposition of the incidence graph.
///
/// Each constraint gains a status variable bound, per bag containing the
/// constraint's incidence vertex, either to a fresh value naming a tuple
/// that conforms with the bag's ordinary variables, or to the `unsat`
/// sentinel. The sentinel row is emitted whenever some completion of the
/// bag-local assignment violates the constraint, which on bags seeing the
/// whole scope reduces to "no tuple conforms"; since every variable of the
/// scope meets the incidence vertex in some bag, a status value is
/// globally consistent exactly when it is correct, and the minimum weight
/// of a solution equals the minimum violation degree. Weight 1 per
/// violated constraint by default, overridable per constraint.
pub fn maxcsp_to_csop(
    instance: &CspInstance,
    td: &TreeDecomposition,
    budget: u64,
    violation_costs: Option<&BTreeMap<String, Rational>>,
) -> Result<(CspInstance, UnaryCostFunction, ReductionArtifacts), Error> {
    let h = build_hypergraph(instance)?;
    let incidence = incidence_graph(&h)?;
    check_tree_decomposition(&incidence, td).map_err(|d| {
        Error::InvalidDecomposition(format!(
            "not a tree decomposition of the incidence graph: {d}"
        ))
    })?;
    let td = td.normalize();

    let variable_set = instance.variable_set();
    let mut taken_vars: BTreeSet<String> = variable_set.clone();
    let mut taken_vals: BTreeSet<String> = instance.domain().iter().cloned().collect();

    // Status variable and per-tuple values, per constraint.
    let mut status_var: Vec<String> = Vec::new();
    let mut tuple_value: Vec<Vec<String>> = Vec::new();
    let mut artifacts = ReductionArtifacts::new(ReductionKind::ViolationDegree);
    for (i, c) in instance.constraints().iter().enumerate() {
        let s = fresh_name(format!("__S{}", i + 1), &mut taken_vars);
        artifacts.aux_variables.push(s.clone());
        status_var.push(s);
        let mut values = Vec::with_capacity(c.tuples().len());
        for (t, _) in c.tuples().iter().enumerate() {
            let value = fresh_name(format!("__u{}_{}", i + 1, t), &mut taken_vals);
            artifacts
                .value_map
                .insert(value.clone(), (c.name().to_string(), t));
            values.push(value);
        }
        tuple_value.push(values);
    }
    let sentinel = fresh_name("__unsat".to_string(), &mut taken_vals);
    artifacts.sentinel = Some(sentinel.clone());

    // Constraints attached to each hyperedge of the hypergraph.
    let mut edge_constraints: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (id, members) in h.edges() {
        let indexes: Vec<usize> = instance
            .constraints()
            .iter()
            .enumerate()
            .filter(|(_, c)| &c.scope_set() == members)
            .map(|(i, _)| i)
            .collect();
        edge_constraints.insert(id, indexes);
    }

    let u = instance.domain().len() as u128;
    let mut produced: u128 = 0;
    let mut constraints = Vec::new();
    for node in td.nodes() {
        let bag = td.bag(node).expect("bag");
        let mut ordinary: Vec<String> = Vec::new();
        let mut members: Vec<usize> = Vec::new();
        for entry in bag {
            match incidence_vertex_edge_id(entry) {
                Some(edge) => members.extend(edge_constraints[edge].iter().copied()),
                None => ordinary.push(entry.clone()),
            }
        }
        ordinary.sort_unstable();
        members.sort_unstable();

        let base_count = saturating_pow(u, ordinary.len());
        if base_count > budget as u128 {
            return Err(Error::BudgetExceeded {
                projected: base_count,
                budget,
            });
        }

        // Per member constraint: tuples grouped by their projection onto the
        // bag's ordinary variables, plus how many distinct completions of
        // the remaining scope each group covers.
        struct Member {
            status: String,
            options_by_key: HashMap<Vec<(String, String)>, Vec<usize>>,
            shared: BTreeSet<String>,
            completions: u128,
        }
        let ordinary_set: BTreeSet<String> = ordinary.iter().cloned().collect();
        let mut member_data = Vec::with_capacity(members.len());
        for &i in &members {
            let c = &instance.constraints()[i];
            let scope = c.scope_set();
            let shared: BTreeSet<String> = scope.intersection(&ordinary_set).cloned().collect();
            let rest: Vec<&str> = scope
                .iter()
                .filter(|v| !ordinary_set.contains(*v))
                .map(String::as_str)
                .collect();
            let mut options_by_key: HashMap<Vec<(String, String)>, Vec<usize>> = HashMap::new();
            for (t, tuple) in c.tuples().iter().enumerate() {
                options_by_key
                    .entry(tuple.projection_key(&shared))
                    .or_default()
                    .push(t);
            }
            member_data.push(Member {
                status: status_var[i].clone(),
                options_by_key,
                shared,
                completions: saturating_pow(u, rest.len()),
            });
        }

        let mut rows: Vec<Tuple> = Vec::new();
        for theta in all_tuples(&ordinary, instance.domain()) {
            // Options per status variable: one value per conforming tuple,
            // plus the sentinel when some completion violates.
            let mut options: Vec<Vec<String>> = Vec::with_capacity(members.len());
            for (&i, member) in members.iter().zip(&member_data) {
                let key = theta.projection_key(&member.shared);
                let conforming = member.options_by_key.get(&key);
                let mut opts: Vec<String> = conforming
                    .into_iter()
                    .flatten()
                    .map(|&t| tuple_value[i][t].clone())
                    .collect();
                let distinct_rests: u128 = match conforming {
                    None => 0,
                    Some(ts) => {
                        let rest_vars: Vec<&str> = instance.constraints()[i]
                            .scope()
                            .iter()
                            .filter(|v| !ordinary_set.contains(*v))
                            .map(String::as_str)
                            .collect();
                        let rests: BTreeSet<Tuple> = ts
                            .iter()
                            .map(|&t| {
                                instance.constraints()[i].tuples()[t]
                                    .restrict(rest_vars.iter().copied())
                            })
                            .collect();
                        rests.len() as u128
                    }
                };
                if distinct_rests < member.completions {
                    opts.push(sentinel.clone());
                }
                options.push(opts);
            }
            // Cartesian product of the options.
            let mut cursor = vec![0usize; options.len()];
            loop {
                let mut row = theta.clone();
                for (m, member) in member_data.iter().enumerate() {
                    row.set(member.status.clone(), options[m][cursor[m]].clone());
                }
                rows.push(row);
                produced = produced.saturating_add(1);
                if produced > budget as u128 {
                    return Err(Error::BudgetExceeded {
                        projected: produced,
                        budget,
                    });
                }
                let mut m = options.len();
                let mut done = true;
                while m > 0 {
                    m -= 1;
                    cursor[m] += 1;
                    if cursor[m] < options[m].len() {
                        done = false;
                        break;
                    }
                    cursor[m] = 0;
                }
                if done {
                    break;
                }
            }
        }
        let mut scope: Vec<String> = ordinary.clone();
        scope.extend(member_data.iter().map(|m| m.status.clone()));
        rows.sort_unstable();
        rows.dedup();
        constraints.push(Constraint::new(node.clone(), scope, rows)?);
    }

    let mut variables = instance.variables().to_vec();
    variables.extend(status_var.iter().cloned());
    let mut domain = instance.domain().to_vec();
    domain.push(sentinel.clone());
    for values in &tuple_value {
        domain.extend(values.iter().cloned());
    }

    let transformed = CspInstance::new(variables, domain, constraints)?;
    let mut weights = UnaryCostFunction::new();
    for (i, c) in instance.constraints().iter().enumerate() {
        let cost = violation_costs
            .and_then(|m| m.get(c.name()).cloned())
            .unwrap_or_else(Rational::one);
        weights.set(status_var[i].clone(), sentinel.clone(), cost);
    }

    Ok((transformed, weights, artifacts))
}
