//! Constraint hypergraphs, their binary graph encodings, and join trees.
//!
//! The hypergraph of an instance has the variables as vertices and one
//! hyperedge per distinct constraint scope. A hypergraph is acyclic exactly
//! when it admits a join tree: a tree over the hyperedges in which, for
//! every vertex, the hyperedges containing it induce a connected subtree.
//! Acyclicity is recognized by GYO reduction: repeatedly strip vertices
//! occurring in a single hyperedge and remove hyperedges contained in
//! another one, recording parent links that become the join tree. A
//! non-empty irreducible residual witnesses cyclicity.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::model::CspInstance;

/// Prefix namespacing hyperedge-side vertices in the incidence encoding,
/// so they can never clash with variable names.
pub const INCIDENCE_EDGE_PREFIX: &str = "__h:";

/// A hypergraph: named vertices and an ordered list of identified
/// hyperedges, each a non-empty subset of the vertices.
#[derive(Clone, Debug)]
pub struct Hypergraph {
    vertices: Vec<String>,
    edges: Vec<(String, BTreeSet<String>)>,
    edge_index: HashMap<String, usize>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

impl Hypergraph {
    pub fn new(
        vertices: Vec<String>,
        edges: Vec<(String, BTreeSet<String>)>,
    ) -> Result<Self, Error> {
        let mut vset = BTreeSet::new();
        for v in &vertices {
            if !vset.insert(v.clone()) {
                return Err(Error::semantic(format!("vertex `{v}` declared twice")));
            }
        }
        let mut edge_index = HashMap::new();
        for (i, (id, members)) in edges.iter().enumerate() {
            if edge_index.insert(id.clone(), i).is_some() {
                return Err(Error::semantic(format!("hyperedge id `{id}` used twice")));
            }
            if members.is_empty() {
                return Err(Error::semantic(format!("hyperedge `{id}` is empty")));
            }
            for v in members {
                if !vset.contains(v) {
                    return Err(Error::semantic(format!(
                        "hyperedge `{id}` references undeclared vertex `{v}`"
                    )));
                }
            }
        }
        Ok(Hypergraph {
            vertices,
            edges,
            edge_index,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_set(&self) -> BTreeSet<String> {
        self.vertices.iter().cloned().collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &BTreeSet<String>)> {
        self.edges.iter().map(|(id, m)| (id.as_str(), m))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = &str> {
        self.edges.iter().map(|(id, _)| id.as_str())
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_vertices(&self, id: &str) -> Option<&BTreeSet<String>> {
        self.edge_index.get(id).map(|&i| &self.edges[i].1)
    }

    /// `.hg.json`: `{"vertices":[...], "edges":{"id":[vertex,...]}}`.
    pub fn to_json(&self) -> String {
        let mut edges = Map::new();
        for (id, members) in &self.edges {
            edges.insert(id.clone(), json!(members.iter().collect::<Vec<_>>()));
        }
        let mut root = Map::new();
        root.insert("vertices".into(), json!(self.vertices));
        root.insert("edges".into(), Value::Object(edges));
        serde_json::to_string_pretty(&Value::Object(root)).expect("hypergraph serialization")
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            vertices: Vec<String>,
            edges: serde_json::Map<String, Value>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let mut edges = Vec::new();
        for (id, members) in raw.edges {
            let members: Vec<String> = serde_json::from_value(members)
                .map_err(|e| Error::semantic(format!("hyperedge `{id}`: {e}")))?;
            edges.push((id, members.into_iter().collect()));
        }
        Hypergraph::new(raw.vertices, edges)
    }
}

/// An undirected simple graph with named vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: BTreeSet<(String, String)>,
}

impl Graph {
    pub fn new<I: IntoIterator<Item = (String, String)>>(
        vertices: Vec<String>,
        edges: I,
    ) -> Result<Self, Error> {
        let vset: BTreeSet<&String> = vertices.iter().collect();
        if vset.len() != vertices.len() {
            return Err(Error::semantic("graph declares a vertex twice".to_string()));
        }
        let mut normalized = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::semantic(format!("self-loop on vertex `{a}`")));
            }
            if !vset.contains(&a) || !vset.contains(&b) {
                return Err(Error::semantic(format!(
                    "edge {{{a},{b}}} references an undeclared vertex"
                )));
            }
            let (x, y) = if a < b { (a, b) } else { (b, a) };
            normalized.insert((x, y));
        }
        Ok(Graph {
            vertices,
            edges: normalized,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        let (x, y) = if a < b { (a, b) } else { (b, a) };
        self.edges.contains(&(x.to_string(), y.to_string()))
    }

    pub fn neighbors<'a>(&'a self, v: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.edges.iter().filter_map(move |(a, b)| {
            if a == v {
                Some(b.as_str())
            } else if b == v {
                Some(a.as_str())
            } else {
                None
            }
        })
    }

    /// Adjacency sets for all vertices.
    pub fn adjacency(&self) -> BTreeMap<String, BTreeSet<String>> {
        let mut adj: BTreeMap<String, BTreeSet<String>> = self
            .vertices
            .iter()
            .map(|v| (v.clone(), BTreeSet::new()))
            .collect();
        for (a, b) in &self.edges {
            adj.get_mut(a).unwrap().insert(b.clone());
            adj.get_mut(b).unwrap().insert(a.clone());
        }
        adj
    }
}

/// Builds the constraint hypergraph of an instance: one hyperedge per
/// distinct constraint scope, identified by the first constraint carrying
/// that scope.
///
/// A variable occurring in no scope is an error, since the structural
/// methods assume every variable is constrained.
pub fn build_hypergraph(instance: &CspInstance) -> Result<Hypergraph, Error> {
    if instance.constraints().is_empty() {
        return Err(Error::semantic(
            "instance has no constraints, so its hypergraph is empty".to_string(),
        ));
    }
    let mut seen_scopes: BTreeSet<BTreeSet<String>> = BTreeSet::new();
    let mut edges = Vec::new();
    let mut covered: BTreeSet<String> = BTreeSet::new();
    for c in instance.constraints() {
        let scope = c.scope_set();
        covered.extend(scope.iter().cloned());
        if seen_scopes.insert(scope.clone()) {
            edges.push((c.name().to_string(), scope));
        }
    }
    for v in instance.variables() {
        if !covered.contains(v) {
            return Err(Error::semantic(format!(
                "variable `{v}` occurs in no constraint scope"
            )));
        }
    }
    Hypergraph::new(instance.variables().to_vec(), edges)
}

/// The primal graph: variables, with an edge between two variables whenever
/// some hyperedge contains both.
pub fn primal_graph(h: &Hypergraph) -> Graph {
    let mut edges = BTreeSet::new();
    for (_, members) in h.edges() {
        let members: Vec<&String> = members.iter().collect();
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                edges.insert((members[i].clone(), members[j].clone()));
            }
        }
    }
    Graph::new(h.vertices().to_vec(), edges).expect("primal graph construction")
}

/// Vertex name of a hyperedge in the incidence encoding.
pub fn incidence_edge_vertex(edge_id: &str) -> String {
    format!("{INCIDENCE_EDGE_PREFIX}{edge_id}")
}

/// Inverse of [`incidence_edge_vertex`].
pub fn incidence_vertex_edge_id(vertex: &str) -> Option<&str> {
    vertex.strip_prefix(INCIDENCE_EDGE_PREFIX)
}

/// The incidence graph: a bipartite graph on hyperedges and vertices, with
/// an edge between a hyperedge and each vertex it contains. Hyperedge-side
/// vertices are namespaced with [`INCIDENCE_EDGE_PREFIX`].
pub fn incidence_graph(h: &Hypergraph) -> Result<Graph, Error> {
    let mut vertices: Vec<String> = Vec::new();
    for (id, _) in h.edges() {
        let name = incidence_edge_vertex(id);
        if h.vertices().contains(&name) {
            return Err(Error::semantic(format!(
                "vertex `{name}` clashes with the incidence name of hyperedge `{id}`"
            )));
        }
        vertices.push(name);
    }
    vertices.extend(h.vertices().iter().cloned());
    let mut edges = BTreeSet::new();
    for (id, members) in h.edges() {
        let ev = incidence_edge_vertex(id);
        for v in members {
            edges.insert((ev.clone(), v.clone()));
        }
    }
    Graph::new(vertices, edges)
}

/// A join tree: one tree node per hyperedge, with the connectedness
/// property over the hyperedge contents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinTree {
    nodes: Vec<String>,
    hyperedge_of: BTreeMap<String, String>,
    tree_edges: BTreeSet<(String, String)>,
    root: String,
}

impl JoinTree {
    /// Validates tree shape: connected, acyclic, node count minus one edges,
    /// every node labelled, root declared.
    pub fn new(
        nodes: Vec<String>,
        hyperedge_of: BTreeMap<String, String>,
        tree_edges: BTreeSet<(String, String)>,
        root: String,
    ) -> Result<Self, Error> {
        if nodes.is_empty() {
            return Err(Error::InvalidJoinTree("no nodes".to_string()));
        }
        let node_set: BTreeSet<&String> = nodes.iter().collect();
        if node_set.len() != nodes.len() {
            return Err(Error::InvalidJoinTree("duplicate node id".to_string()));
        }
        if !node_set.contains(&root) {
            return Err(Error::InvalidJoinTree(format!("unknown root `{root}`")));
        }
        for n in &nodes {
            if !hyperedge_of.contains_key(n) {
                return Err(Error::InvalidJoinTree(format!(
                    "node `{n}` has no hyperedge label"
                )));
            }
        }
        if hyperedge_of.len() != nodes.len() {
            return Err(Error::InvalidJoinTree(
                "hyperedge label for unknown node".to_string(),
            ));
        }
        for (a, b) in &tree_edges {
            if a == b {
                return Err(Error::InvalidJoinTree(format!("self-loop on `{a}`")));
            }
            if !node_set.contains(a) || !node_set.contains(b) {
                return Err(Error::InvalidJoinTree(format!(
                    "tree edge {{{a},{b}}} references an unknown node"
                )));
            }
        }
        if tree_edges.len() != nodes.len() - 1 {
            return Err(Error::InvalidJoinTree(format!(
                "{} nodes need {} tree edges, found {}",
                nodes.len(),
                nodes.len() - 1,
                tree_edges.len()
            )));
        }
        let tree = JoinTree {
            nodes,
            hyperedge_of,
            tree_edges,
            root,
        };
        let reached = tree.bfs_order();
        if reached.len() != tree.nodes.len() {
            return Err(Error::InvalidJoinTree("tree is not connected".to_string()));
        }
        Ok(tree)
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn root(&self) -> &str {
        &self.root
    }

    pub fn hyperedge_of(&self, node: &str) -> Option<&str> {
        self.hyperedge_of.get(node).map(String::as_str)
    }

    pub fn tree_edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.tree_edges
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn adjacency(&self) -> BTreeMap<&str, Vec<&str>> {
        let mut adj: BTreeMap<&str, Vec<&str>> = self
            .nodes
            .iter()
            .map(|n| (n.as_str(), Vec::new()))
            .collect();
        for (a, b) in &self.tree_edges {
            adj.get_mut(a.as_str()).unwrap().push(b.as_str());
            adj.get_mut(b.as_str()).unwrap().push(a.as_str());
        }
        for children in adj.values_mut() {
            children.sort_unstable();
        }
        adj
    }

    /// Nodes in breadth-first order from the root; parents precede children.
    pub fn bfs_order(&self) -> Vec<&str> {
        let adj = self.adjacency();
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        let mut queue = VecDeque::new();
        queue.push_back(self.root.as_str());
        seen.insert(self.root.as_str());
        while let Some(n) = queue.pop_front() {
            order.push(n);
            for &m in adj.get(n).into_iter().flatten() {
                if seen.insert(m) {
                    queue.push_back(m);
                }
            }
        }
        order
    }

    /// Parent of each non-root node under the designated root.
    pub fn parents(&self) -> BTreeMap<&str, &str> {
        let adj = self.adjacency();
        let mut parent = BTreeMap::new();
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        let mut queue = VecDeque::new();
        queue.push_back(self.root.as_str());
        seen.insert(self.root.as_str());
        while let Some(n) = queue.pop_front() {
            for &m in adj.get(n).into_iter().flatten() {
                if seen.insert(m) {
                    parent.insert(m, n);
                    queue.push_back(m);
                }
            }
        }
        parent
    }

    /// `{"nodes":{"n1":"edge"},"tree_edges":[["n1","n2"]],"root":"n1"}`.
    pub fn to_json(&self) -> String {
        let mut nodes = Map::new();
        for n in &self.nodes {
            nodes.insert(n.clone(), json!(self.hyperedge_of[n]));
        }
        let mut root = Map::new();
        root.insert("nodes".into(), Value::Object(nodes));
        root.insert(
            "tree_edges".into(),
            json!(self.tree_edges.iter().collect::<Vec<_>>()),
        );
        root.insert("root".into(), json!(self.root));
        serde_json::to_string_pretty(&Value::Object(root)).expect("join tree serialization")
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            nodes: serde_json::Map<String, Value>,
            tree_edges: Vec<(String, String)>,
            root: String,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let mut nodes = Vec::new();
        let mut hyperedge_of = BTreeMap::new();
        for (n, label) in raw.nodes {
            let edge: String = serde_json::from_value(label)
                .map_err(|e| Error::semantic(format!("node `{n}`: {e}")))?;
            nodes.push(n.clone());
            hyperedge_of.insert(n, edge);
        }
        let tree_edges = raw
            .tree_edges
            .into_iter()
            .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
            .collect();
        JoinTree::new(nodes, hyperedge_of, tree_edges, raw.root)
    }
}

/// Why a candidate join tree is not a join tree of a hypergraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JoinTreeDefect {
    /// A hyperedge of the hypergraph labels no tree node.
    MissingHyperedge { edge: String },
    /// Two nodes are labelled with the same hyperedge.
    DuplicateHyperedge { edge: String },
    /// A node references a hyperedge absent from the hypergraph.
    UnknownHyperedge { node: String, edge: String },
    /// A vertex occurs in two nodes not linked within its occurrence set.
    Disconnected {
        vertex: String,
        node_a: String,
        node_b: String,
    },
}

impl fmt::Display for JoinTreeDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JoinTreeDefect::MissingHyperedge { edge } => {
                write!(f, "hyperedge `{edge}` labels no tree node")
            }
            JoinTreeDefect::DuplicateHyperedge { edge } => {
                write!(f, "hyperedge `{edge}` labels more than one node")
            }
            JoinTreeDefect::UnknownHyperedge { node, edge } => {
                write!(f, "node `{node}` references unknown hyperedge `{edge}`")
            }
            JoinTreeDefect::Disconnected {
                vertex,
                node_a,
                node_b,
            } => write!(
                f,
                "vertex `{vertex}` occurs in `{node_a}` and `{node_b}` but not on the path between them"
            ),
        }
    }
}

/// Checks that `tree` spans all hyperedges of `h` and satisfies the
/// connectedness property, reporting the first defect found.
pub fn check_join_tree(h: &Hypergraph, tree: &JoinTree) -> Result<(), JoinTreeDefect> {
    let mut labelled: BTreeSet<&str> = BTreeSet::new();
    for node in tree.nodes() {
        let edge = tree.hyperedge_of(node).expect("labelled node");
        if h.edge_vertices(edge).is_none() {
            return Err(JoinTreeDefect::UnknownHyperedge {
                node: node.clone(),
                edge: edge.to_string(),
            });
        }
        if !labelled.insert(edge) {
            return Err(JoinTreeDefect::DuplicateHyperedge {
                edge: edge.to_string(),
            });
        }
    }
    for id in h.edge_ids() {
        if !labelled.contains(id) {
            return Err(JoinTreeDefect::MissingHyperedge {
                edge: id.to_string(),
            });
        }
    }

    // Connectedness: the nodes containing each vertex must induce a
    // connected subtree.
    let mut occurrences: BTreeMap<&String, Vec<&str>> = BTreeMap::new();
    for node in tree.nodes() {
        let edge = tree.hyperedge_of(node).unwrap();
        for v in h.edge_vertices(edge).unwrap() {
            occurrences.entry(v).or_default().push(node);
        }
    }
    let adj = tree.adjacency();
    for (vertex, nodes) in occurrences {
        if nodes.len() <= 1 {
            continue;
        }
        let members: BTreeSet<&str> = nodes.iter().copied().collect();
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        queue.push_back(nodes[0]);
        seen.insert(nodes[0]);
        while let Some(n) = queue.pop_front() {
            for &m in adj.get(n).into_iter().flatten() {
                if members.contains(m) && seen.insert(m) {
                    queue.push_back(m);
                }
            }
        }
        if let Some(stranded) = members.iter().find(|n| !seen.contains(*n)) {
            return Err(JoinTreeDefect::Disconnected {
                vertex: vertex.clone(),
                node_a: nodes[0].to_string(),
                node_b: stranded.to_string(),
            });
        }
    }
    Ok(())
}

/// Result of GYO reduction.
#[derive(Clone, Debug)]
pub enum GyoOutcome {
    Acyclic(JoinTree),
    /// The irreducible residual hypergraph, as a machine-checkable witness.
    NotAcyclic(Hypergraph),
}

impl GyoOutcome {
    pub fn join_tree(&self) -> Option<&JoinTree> {
        match self {
            GyoOutcome::Acyclic(t) => Some(t),
            GyoOutcome::NotAcyclic(_) => None,
        }
    }

    pub fn is_acyclic(&self) -> bool {
        matches!(self, GyoOutcome::Acyclic(_))
    }
}

/// GYO reduction. Among removable ears, always the lexicographically
/// smallest edge id is removed, attached to its lexicographically smallest
/// superset, so the resulting join tree is reproducible.
pub fn gyo_acyclicity(h: &Hypergraph) -> Result<GyoOutcome, Error> {
    if h.edge_count() == 0 {
        return Err(Error::Unsupported(
            "hypergraph has no hyperedges".to_string(),
        ));
    }

    let mut current: BTreeMap<&str, BTreeSet<&str>> = h
        .edges()
        .map(|(id, m)| (id, m.iter().map(String::as_str).collect()))
        .collect();
    let mut alive: BTreeSet<&str> = current.keys().copied().collect();
    let mut occurrences: HashMap<&str, BTreeSet<&str>> = HashMap::new();
    for (id, members) in &current {
        for &v in members {
            occurrences.entry(v).or_default().insert(id);
        }
    }
    let mut parent: BTreeMap<&str, &str> = BTreeMap::new();

    // Strip every vertex occurring in exactly one alive edge.
    let lone: Vec<&str> = occurrences
        .iter()
        .filter(|(_, occ)| occ.len() == 1)
        .map(|(&v, _)| v)
        .collect();
    for v in lone {
        let e = *occurrences[v].iter().next().unwrap();
        current.get_mut(e).unwrap().remove(v);
        occurrences.remove(v);
    }

    let mut candidates: BTreeSet<&str> = alive.clone();
    while alive.len() > 1 {
        let Some(&e) = candidates.iter().next() else {
            break;
        };
        candidates.remove(e);
        if !alive.contains(e) {
            continue;
        }
        let members = current[e].clone();
        let sup = if members.is_empty() {
            alive.iter().copied().find(|&f| f != e)
        } else {
            // Restrict the superset search to edges containing the least
            // frequent member vertex.
            let pivot = members
                .iter()
                .min_by_key(|v| occurrences[**v].len())
                .copied()
                .unwrap();
            occurrences[pivot]
                .iter()
                .copied()
                .find(|&f| f != e && members.is_subset(&current[f]))
        };
        let Some(f) = sup else {
            continue; // not currently an ear; re-queued if it shrinks
        };
        parent.insert(e, f);
        alive.remove(e);
        for v in &members {
            let occ = occurrences.get_mut(v).unwrap();
            occ.remove(e);
            if occ.len() == 1 {
                let g = *occ.iter().next().unwrap();
                current.get_mut(g).unwrap().remove(*v);
                occurrences.remove(v);
                candidates.insert(g);
            }
        }
    }

    if alive.len() == 1 {
        let node_of: BTreeMap<&str, String> = h
            .edges()
            .enumerate()
            .map(|(i, (id, _))| (id, format!("n{}", i + 1)))
            .collect();
        let nodes: Vec<String> = node_of.values().cloned().collect();
        let hyperedge_of: BTreeMap<String, String> = node_of
            .iter()
            .map(|(&edge, node)| (node.clone(), edge.to_string()))
            .collect();
        let tree_edges: BTreeSet<(String, String)> = parent
            .iter()
            .map(|(&e, &f)| {
                let (a, b) = (node_of[e].clone(), node_of[f].clone());
                if a < b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        let root = node_of[alive.iter().next().unwrap()].clone();
        let tree = JoinTree::new(nodes, hyperedge_of, tree_edges, root)?;
        Ok(GyoOutcome::Acyclic(tree))
    } else {
        let vertices: BTreeSet<&str> = alive
            .iter()
            .flat_map(|e| current[e].iter().copied())
            .collect();
        let edges: Vec<(String, BTreeSet<String>)> = h
            .edges()
            .filter(|(id, _)| alive.contains(id))
            .map(|(id, _)| {
                (
                    id.to_string(),
                    current[id].iter().map(|v| v.to_string()).collect(),
                )
            })
            .collect();
        let residual = Hypergraph::new(vertices.into_iter().map(str::to_string).collect(), edges)?;
        Ok(GyoOutcome::NotAcyclic(residual))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn hg(edges: &[(&str, &[&str])]) -> Hypergraph {
        let mut vertices: BTreeSet<String> = BTreeSet::new();
        for (_, m) in edges {
            vertices.extend(m.iter().map(|s| s.to_string()));
        }
        Hypergraph::new(
            vertices.into_iter().collect(),
            edges
                .iter()
                .map(|(id, m)| {
                    (
                        id.to_string(),
                        m.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>(),
                    )
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn build_hypergraph_chain() {
        let h = build_hypergraph(&fixtures::p_chain()).unwrap();
        assert_eq!(h.edge_count(), 2);
        let scopes: Vec<BTreeSet<String>> = h.edges().map(|(_, m)| m.clone()).collect();
        assert!(scopes.contains(&["X".to_string(), "Y".to_string()].into()));
        assert!(scopes.contains(&["Y".to_string(), "Z".to_string()].into()));
    }

    #[test]
    fn duplicate_scopes_collapse_to_one_hyperedge() {
        use crate::model::{Constraint, CspInstance, Tuple};
        let t = |a: &str, b: &str| Tuple::from_pairs([("X", a), ("Y", b)]).unwrap();
        let p = CspInstance::new(
            vec!["X".into(), "Y".into()],
            vec!["0".into(), "1".into()],
            vec![
                Constraint::new("C1", vec!["X".into(), "Y".into()], vec![t("0", "0")]).unwrap(),
                Constraint::new("C2", vec!["Y".into(), "X".into()], vec![t("0", "1")]).unwrap(),
            ],
        )
        .unwrap();
        let h = build_hypergraph(&p).unwrap();
        assert_eq!(h.edge_count(), 1);
    }

    #[test]
    fn unconstrained_variable_rejected() {
        use crate::model::{Constraint, CspInstance, Tuple};
        let p = CspInstance::new(
            vec!["X".into(), "Y".into()],
            vec!["a".into()],
            vec![Constraint::new(
                "C",
                vec!["X".into()],
                vec![Tuple::from_pairs([("X", "a")]).unwrap()],
            )
            .unwrap()],
        )
        .unwrap();
        let err = build_hypergraph(&p).unwrap_err();
        assert!(err.to_string().contains("`Y`"));
    }

    #[test]
    fn primal_of_single_edge_is_clique() {
        let h = hg(&[("h", &["A", "B", "C"])]);
        let g = primal_graph(&h);
        assert_eq!(g.edge_count(), 3);
        let h7 = hg(&[("h", &["A", "C", "D", "E", "F", "G", "H"])]);
        assert_eq!(primal_graph(&h7).edge_count(), 21);
    }

    #[test]
    fn primal_of_chain_is_path() {
        let h = hg(&[("h1", &["X", "Y"]), ("h2", &["Y", "Z"])]);
        let g = primal_graph(&h);
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge("X", "Y") && g.has_edge("Y", "Z"));
        assert!(!g.has_edge("X", "Z"));
    }

    #[test]
    fn incidence_star_and_path() {
        let h = hg(&[("h", &["A", "B"])]);
        let g = incidence_graph(&h).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge("__h:h", "A") && g.has_edge("__h:h", "B"));

        let chain = hg(&[("h1", &["X", "Y"]), ("h2", &["Y", "Z"])]);
        let gi = incidence_graph(&chain).unwrap();
        assert_eq!(gi.edge_count(), 4);
        assert!(gi.has_edge("__h:h1", "X"));
        assert!(gi.has_edge("__h:h1", "Y"));
        assert!(gi.has_edge("__h:h2", "Y"));
        assert!(gi.has_edge("__h:h2", "Z"));
    }

    #[test]
    fn gyo_single_edge() {
        let h = hg(&[("h", &["A", "B"])]);
        let out = gyo_acyclicity(&h).unwrap();
        let tree = out.join_tree().expect("acyclic");
        assert_eq!(tree.node_count(), 1);
        assert!(check_join_tree(&h, tree).is_ok());
    }

    #[test]
    fn gyo_triangle_is_cyclic_with_residual_witness() {
        let h = hg(&[
            ("ab", &["A", "B"]),
            ("bc", &["B", "C"]),
            ("ca", &["A", "C"]),
        ]);
        match gyo_acyclicity(&h).unwrap() {
            GyoOutcome::NotAcyclic(residual) => {
                assert_eq!(residual.edge_count(), 3);
            }
            GyoOutcome::Acyclic(_) => panic!("triangle misclassified as acyclic"),
        }
    }

    #[test]
    fn gyo_chain_tree_validates() {
        let h = hg(&[("h1", &["X", "Y"]), ("h2", &["Y", "Z"])]);
        let tree = gyo_acyclicity(&h).unwrap().join_tree().cloned().unwrap();
        assert_eq!(tree.node_count(), 2);
        assert!(check_join_tree(&h, &tree).is_ok());
    }

    #[test]
    fn check_join_tree_reports_disconnected_vertex() {
        // Star centered at {B,C}: vertex A occurs in both leaves but not in
        // the center.
        let h = hg(&[
            ("ab", &["A", "B"]),
            ("bc", &["B", "C"]),
            ("acd", &["A", "C", "D"]),
        ]);
        let mut hyperedge_of = BTreeMap::new();
        hyperedge_of.insert("n1".to_string(), "ab".to_string());
        hyperedge_of.insert("n2".to_string(), "bc".to_string());
        hyperedge_of.insert("n3".to_string(), "acd".to_string());
        let tree = JoinTree::new(
            vec!["n1".into(), "n2".into(), "n3".into()],
            hyperedge_of,
            [
                ("n1".to_string(), "n2".to_string()),
                ("n2".to_string(), "n3".to_string()),
            ]
            .into(),
            "n2".to_string(),
        )
        .unwrap();
        match check_join_tree(&h, &tree) {
            Err(JoinTreeDefect::Disconnected { vertex, .. }) => assert_eq!(vertex, "A"),
            other => panic!("expected disconnected vertex A, got {other:?}"),
        }
    }

    #[test]
    fn join_tree_json_roundtrip() {
        let h = hg(&[("h1", &["X", "Y"]), ("h2", &["Y", "Z"])]);
        let tree = gyo_acyclicity(&h).unwrap().join_tree().cloned().unwrap();
        let text = tree.to_json();
        let back = JoinTree::from_json(&text).unwrap();
        assert_eq!(tree, back);
    }

    #[test]
    fn hypergraph_json_roundtrip() {
        let h = hg(&[("h1", &["X", "Y"]), ("h2", &["Y", "Z"])]);
        let back = Hypergraph::from_json(&h.to_json()).unwrap();
        assert_eq!(h, back);
    }

    #[cfg(feature = "paper-fixtures")]
    #[test]
    fn crossword_hypergraph_is_cyclic() {
        let p = fixtures::crossword();
        let h = build_hypergraph(&p).unwrap();
        assert_eq!(h.edge_count(), 4);
        assert!(!gyo_acyclicity(&h).unwrap().is_acyclic());
    }

    #[cfg(feature = "paper-fixtures")]
    #[test]
    fn h1_incidence_treewidth_is_two() {
        use crate::decomposition::minfill_tree_decomposition;
        let h = fixtures::h1_hypergraph();
        let inc = incidence_graph(&h).unwrap();
        // Upper bound 2 from the heuristic; lower bound 2 because the
        // incidence graph contains a cycle through the shared vertices.
        let td = minfill_tree_decomposition(&inc).unwrap();
        assert_eq!(td.width(), 2);
        assert!(inc.edge_count() >= inc.vertices().len());
    }

    #[cfg(feature = "paper-fixtures")]
    #[test]
    fn h1_fixture_is_acyclic() {
        let h = fixtures::h1_hypergraph();
        let tree = gyo_acyclicity(&h).unwrap().join_tree().cloned().unwrap();
        assert!(check_join_tree(&h, &tree).is_ok());
        // The 7-vertex hyperedge flattens into a 21-edge clique.
        let g = primal_graph(&h);
        let clique: Vec<&str> = vec!["A", "C", "D", "E", "F", "G", "H"];
        let mut count = 0;
        for i in 0..clique.len() {
            for j in i + 1..clique.len() {
                if g.has_edge(clique[i], clique[j]) {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 21);
    }
}
