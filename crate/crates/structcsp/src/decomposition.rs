//! Tree decompositions and (generalized) hypertree decompositions.
//!
//! A tree decomposition of a graph assigns every tree node a bag of
//! vertices such that (1) every vertex is in some bag, (2) every edge is
//! inside some bag, and (3) the bags containing any vertex induce a
//! connected subtree. Its width is the largest bag size minus one. A
//! generalized hypertree decomposition additionally covers every bag with
//! hyperedges; its width is the largest cover size.
//!
//! Exact width computation is out of reach in general, so construction here
//! is heuristic (min-fill elimination plus a greedy set cover) and the
//! widths reported by these heuristics are upper bounds. A subset-based
//! exhaustive search provides exact treewidth for tiny graphs, used as an
//! oracle in tests.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::hypergraph::{primal_graph, Graph, Hypergraph, JoinTree};

/// A tree decomposition: a tree whose nodes carry vertex bags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    nodes: Vec<String>,
    chi: BTreeMap<String, BTreeSet<String>>,
    tree_edges: BTreeSet<(String, String)>,
    root: String,
}

impl TreeDecomposition {
    pub fn new(
        nodes: Vec<String>,
        chi: BTreeMap<String, BTreeSet<String>>,
        tree_edges: BTreeSet<(String, String)>,
        root: String,
    ) -> Result<Self, Error> {
        if nodes.is_empty() {
            return Err(Error::InvalidDecomposition("no nodes".to_string()));
        }
        let node_set: BTreeSet<&String> = nodes.iter().collect();
        if node_set.len() != nodes.len() {
            return Err(Error::InvalidDecomposition("duplicate node id".to_string()));
        }
        if !node_set.contains(&root) {
            return Err(Error::InvalidDecomposition(format!(
                "unknown root `{root}`"
            )));
        }
        for n in &nodes {
            if !chi.contains_key(n) {
                return Err(Error::InvalidDecomposition(format!(
                    "node `{n}` has no bag"
                )));
            }
        }
        if chi.len() != nodes.len() {
            return Err(Error::InvalidDecomposition(
                "bag for unknown node".to_string(),
            ));
        }
        for (a, b) in &tree_edges {
            if a == b {
                return Err(Error::InvalidDecomposition(format!("self-loop on `{a}`")));
            }
            if !node_set.contains(a) || !node_set.contains(b) {
                return Err(Error::InvalidDecomposition(format!(
                    "tree edge {{{a},{b}}} references an unknown node"
                )));
            }
        }
        if tree_edges.len() != nodes.len() - 1 {
            return Err(Error::InvalidDecomposition(format!(
                "{} nodes need {} tree edges, found {}",
                nodes.len(),
                nodes.len() - 1,
                tree_edges.len()
            )));
        }
        let td = TreeDecomposition {
            nodes,
            chi,
            tree_edges,
            root,
        };
        if td.bfs_order().len() != td.nodes.len() {
            return Err(Error::InvalidDecomposition(
                "tree is not connected".to_string(),
            ));
        }
        Ok(td)
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn root(&self) -> &str {
        &self.root
    }

    pub fn bag(&self, node: &str) -> Option<&BTreeSet<String>> {
        self.chi.get(node)
    }

    pub fn bags(&self) -> impl Iterator<Item = (&str, &BTreeSet<String>)> {
        self.chi.iter().map(|(n, b)| (n.as_str(), b))
    }

    pub fn tree_edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.tree_edges
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Largest bag size minus one.
    pub fn width(&self) -> usize {
        self.chi
            .values()
            .map(|b| b.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
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
        for v in adj.values_mut() {
            v.sort_unstable();
        }
        adj
    }

    /// Breadth-first order from the root; parents precede children.
    pub fn bfs_order(&self) -> Vec<&str> {
        let adj = self.adjacency();
        let mut order = Vec::new();
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

    /// Contracts every tree edge whose one bag is contained in the other,
    /// leaving pairwise distinct bags. This is the usual redundancy-free
    /// normal form; it never increases the width or the node count.
    pub fn normalize(&self) -> TreeDecomposition {
        let mut chi = self.chi.clone();
        let mut adj: BTreeMap<String, BTreeSet<String>> = self
            .nodes
            .iter()
            .map(|n| (n.clone(), BTreeSet::new()))
            .collect();
        for (a, b) in &self.tree_edges {
            adj.get_mut(a).unwrap().insert(b.clone());
            adj.get_mut(b).unwrap().insert(a.clone());
        }
        let mut root = self.root.clone();

        let mut queue: VecDeque<(String, String)> = self.tree_edges.iter().cloned().collect();
        while let Some((a, b)) = queue.pop_front() {
            if !chi.contains_key(&a) || !chi.contains_key(&b) {
                continue;
            }
            if !adj[&a].contains(&b) {
                continue;
            }
            // Contract the subset endpoint into the other.
            let (gone, kept) = if chi[&a].is_subset(&chi[&b]) {
                (a, b)
            } else if chi[&b].is_subset(&chi[&a]) {
                (b, a)
            } else {
                continue;
            };
            let neighbors = adj.remove(&gone).unwrap();
            chi.remove(&gone);
            adj.get_mut(&kept).unwrap().remove(&gone);
            for n in neighbors {
                if n == kept {
                    continue;
                }
                adj.get_mut(&n).unwrap().remove(&gone);
                adj.get_mut(&n).unwrap().insert(kept.clone());
                adj.get_mut(&kept).unwrap().insert(n.clone());
                queue.push_back(if n < kept {
                    (n.clone(), kept.clone())
                } else {
                    (kept.clone(), n.clone())
                });
            }
            if root == gone {
                root = kept.clone();
            }
        }

        let nodes: Vec<String> = self
            .nodes
            .iter()
            .filter(|n| chi.contains_key(*n))
            .cloned()
            .collect();
        let mut tree_edges = BTreeSet::new();
        for (a, ns) in &adj {
            for b in ns {
                tree_edges.insert(if a < b {
                    (a.clone(), b.clone())
                } else {
                    (b.clone(), a.clone())
                });
            }
        }
        TreeDecomposition::new(nodes, chi, tree_edges, root).expect("normalization preserves shape")
    }

    /// Re-roots at the node with the lexicographically smallest bag
    /// (ties by node id), for reproducible rooted traversals.
    pub fn rerooted_canonical(mut self) -> TreeDecomposition {
        if let Some(best) = self
            .nodes
            .iter()
            .min_by_key(|n| (&self.chi[*n], (*n).clone()))
        {
            self.root = best.clone();
        }
        self
    }
}

/// Why a candidate decomposition fails the defining conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeDecompositionDefect {
    UnknownVertex { node: String, vertex: String },
    UncoveredVertex { vertex: String },
    UncoveredEdge { a: String, b: String },
    Disconnected { vertex: String },
}

impl fmt::Display for TreeDecompositionDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeDecompositionDefect::UnknownVertex { node, vertex } => {
                write!(f, "bag of `{node}` contains unknown vertex `{vertex}`")
            }
            TreeDecompositionDefect::UncoveredVertex { vertex } => {
                write!(f, "vertex `{vertex}` occurs in no bag (condition 1)")
            }
            TreeDecompositionDefect::UncoveredEdge { a, b } => {
                write!(f, "edge {{{a},{b}}} is inside no bag (condition 2)")
            }
            TreeDecompositionDefect::Disconnected { vertex } => {
                write!(
                    f,
                    "bags containing `{vertex}` are not connected (condition 3)"
                )
            }
        }
    }
}

/// Checks the three defining conditions of a tree decomposition against a
/// graph, returning the width on success and the first violation otherwise.
pub fn check_tree_decomposition(
    graph: &Graph,
    td: &TreeDecomposition,
) -> Result<usize, TreeDecompositionDefect> {
    let vertex_set: BTreeSet<&String> = graph.vertices().iter().collect();
    for (node, bag) in td.bags() {
        for v in bag {
            if !vertex_set.contains(v) {
                return Err(TreeDecompositionDefect::UnknownVertex {
                    node: node.to_string(),
                    vertex: v.clone(),
                });
            }
        }
    }
    let mut occurrences: BTreeMap<&String, Vec<&str>> = BTreeMap::new();
    for (node, bag) in td.bags() {
        for v in bag {
            occurrences.entry(v).or_default().push(node);
        }
    }
    for v in graph.vertices() {
        if !occurrences.contains_key(v) {
            return Err(TreeDecompositionDefect::UncoveredVertex { vertex: v.clone() });
        }
    }
    for (a, b) in graph.edges() {
        let covered = td.bags().any(|(_, bag)| bag.contains(a) && bag.contains(b));
        if !covered {
            return Err(TreeDecompositionDefect::UncoveredEdge {
                a: a.to_string(),
                b: b.to_string(),
            });
        }
    }
    let adj = td.adjacency();
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
        if seen.len() != members.len() {
            return Err(TreeDecompositionDefect::Disconnected {
                vertex: vertex.clone(),
            });
        }
    }
    Ok(td.width())
}

/// Builds a tree decomposition by min-fill vertex elimination, ties broken
/// by lexicographic vertex name. The result is normalized, rooted
/// canonically, validated, and deterministic for a given graph.
pub fn minfill_tree_decomposition(graph: &Graph) -> Result<TreeDecomposition, Error> {
    if graph.vertices().is_empty() {
        return Err(Error::Unsupported("graph has no vertices".to_string()));
    }
    let mut adj = graph.adjacency();
    let mut bags: Vec<(String, BTreeSet<String>)> = Vec::new();

    while !adj.is_empty() {
        let mut best: Option<(usize, &String)> = None;
        for (v, ns) in &adj {
            let ns: Vec<&String> = ns.iter().collect();
            let mut fill = 0usize;
            for i in 0..ns.len() {
                for j in i + 1..ns.len() {
                    if !adj[ns[i]].contains(ns[j]) {
                        fill += 1;
                    }
                }
            }
            match best {
                Some((f, _)) if f <= fill => {}
                _ => best = Some((fill, v)),
            }
        }
        let v = best.unwrap().1.clone();
        let neighbors = adj[&v].clone();
        let mut bag = neighbors.clone();
        bag.insert(v.clone());
        bags.push((v.clone(), bag));

        for a in &neighbors {
            for b in &neighbors {
                if a < b {
                    adj.get_mut(a).unwrap().insert(b.clone());
                    adj.get_mut(b).unwrap().insert(a.clone());
                }
            }
        }
        adj.remove(&v);
        for ns in adj.values_mut() {
            ns.remove(&v);
        }
    }

    let elim_index: HashMap<&String, usize> =
        bags.iter().enumerate().map(|(i, (v, _))| (v, i)).collect();
    let node_id = |i: usize| format!("t{}", i + 1);
    let mut tree_edges = BTreeSet::new();
    let mut roots: Vec<usize> = Vec::new();
    for (i, (v, bag)) in bags.iter().enumerate() {
        let successor = bag.iter().filter(|u| *u != v).map(|u| elim_index[u]).min();
        match successor {
            Some(j) => {
                let (a, b) = (node_id(i), node_id(j));
                tree_edges.insert(if a < b { (a, b) } else { (b, a) });
            }
            None => roots.push(i),
        }
    }
    // One root per connected component; chain them so the result is a tree.
    for w in roots.windows(2) {
        let (a, b) = (node_id(w[0]), node_id(w[1]));
        tree_edges.insert(if a < b { (a, b) } else { (b, a) });
    }

    let nodes: Vec<String> = (0..bags.len()).map(node_id).collect();
    let chi: BTreeMap<String, BTreeSet<String>> = bags
        .iter()
        .enumerate()
        .map(|(i, (_, bag))| (node_id(i), bag.clone()))
        .collect();
    let root = node_id(roots[0]);
    let td = TreeDecomposition::new(nodes, chi, tree_edges, root)?
        .normalize()
        .rerooted_canonical();
    check_tree_decomposition(graph, &td)
        .map_err(|d| Error::InvalidDecomposition(format!("min-fill produced a bad result: {d}")))?;
    Ok(td)
}

/// Exact treewidth by exhaustive elimination-order search with memoization
/// over vertex subsets. Only for tiny graphs.
pub fn exact_treewidth(graph: &Graph) -> Result<usize, Error> {
    let n = graph.vertices().len();
    if n == 0 {
        return Err(Error::Unsupported("graph has no vertices".to_string()));
    }
    if n > 12 {
        return Err(Error::TooLarge(format!(
            "exact treewidth supports at most 12 vertices, got {n}"
        )));
    }
    let index: HashMap<&String, usize> = graph
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let mut adj = vec![0u16; n];
    for (a, b) in graph.edges() {
        let (i, j) = (index[&a.to_string()], index[&b.to_string()]);
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }

    // Degree of `v` when eliminated after the set `done`: vertices outside
    // `done` reachable from `v` along paths whose interior lies in `done`.
    let reach_degree = |done: u16, v: usize| -> usize {
        let mut visited: u16 = 1 << v;
        let mut stack = vec![v];
        let mut count = 0usize;
        while let Some(u) = stack.pop() {
            let mut fresh = adj[u] & !visited;
            while fresh != 0 {
                let w = fresh.trailing_zeros() as usize;
                fresh &= fresh - 1;
                visited |= 1 << w;
                if done & (1 << w) != 0 {
                    stack.push(w); // interior vertex: traverse through
                } else {
                    count += 1;
                }
            }
        }
        count
    };

    fn solve(
        s: u16,
        adj_len: usize,
        memo: &mut HashMap<u16, usize>,
        reach: &dyn Fn(u16, usize) -> usize,
    ) -> usize {
        if s == 0 {
            return 0;
        }
        if let Some(&w) = memo.get(&s) {
            return w;
        }
        let mut best = usize::MAX;
        for v in 0..adj_len {
            if s & (1 << v) == 0 {
                continue;
            }
            let rest = s & !(1 << v);
            let candidate = solve(rest, adj_len, memo, reach).max(reach(rest, v));
            best = best.min(candidate);
        }
        memo.insert(s, best);
        best
    }

    let full: u16 = if n == 16 { u16::MAX } else { (1 << n) - 1 };
    let mut memo = HashMap::new();
    Ok(solve(full, n, &mut memo, &reach_degree))
}

/// A generalized hypertree decomposition: a tree decomposition of the primal
/// graph plus, per node, a set of hyperedges covering the bag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedHypertreeDecomposition {
    base: TreeDecomposition,
    lambda: BTreeMap<String, BTreeSet<String>>,
}

impl GeneralizedHypertreeDecomposition {
    pub fn new(
        base: TreeDecomposition,
        lambda: BTreeMap<String, BTreeSet<String>>,
    ) -> Result<Self, Error> {
        for n in base.nodes() {
            if !lambda.contains_key(n) {
                return Err(Error::InvalidDecomposition(format!(
                    "node `{n}` has no hyperedge cover"
                )));
            }
        }
        if lambda.len() != base.node_count() {
            return Err(Error::InvalidDecomposition(
                "hyperedge cover for unknown node".to_string(),
            ));
        }
        Ok(GeneralizedHypertreeDecomposition { base, lambda })
    }

    pub fn base(&self) -> &TreeDecomposition {
        &self.base
    }

    pub fn lambda(&self, node: &str) -> Option<&BTreeSet<String>> {
        self.lambda.get(node)
    }

    pub fn covers(&self) -> impl Iterator<Item = (&str, &BTreeSet<String>)> {
        self.lambda.iter().map(|(n, l)| (n.as_str(), l))
    }

    /// Largest cover size.
    pub fn width(&self) -> usize {
        self.lambda.values().map(|l| l.len()).max().unwrap_or(0)
    }

    /// Contracts subset bags like [`TreeDecomposition::normalize`], dropping
    /// the covers of contracted nodes.
    pub fn normalize(&self) -> GeneralizedHypertreeDecomposition {
        let base = self.base.normalize();
        let lambda = base
            .nodes()
            .iter()
            .map(|n| (n.clone(), self.lambda[n].clone()))
            .collect();
        GeneralizedHypertreeDecomposition { base, lambda }
    }
}

/// Why a candidate generalized hypertree decomposition is invalid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GhdDefect {
    Base(TreeDecompositionDefect),
    UnknownEdge { node: String, edge: String },
    Uncovered { node: String, variable: String },
}

impl fmt::Display for GhdDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GhdDefect::Base(d) => write!(f, "base tree decomposition: {d}"),
            GhdDefect::UnknownEdge { node, edge } => {
                write!(f, "cover of `{node}` references unknown hyperedge `{edge}`")
            }
            GhdDefect::Uncovered { node, variable } => {
                write!(
                    f,
                    "variable `{variable}` in bag of `{node}` is covered by no hyperedge"
                )
            }
        }
    }
}

/// Validates a generalized hypertree decomposition of `h`: the base must
/// decompose the primal graph and every bag must be covered by its
/// hyperedges. Returns the width on success.
pub fn check_ghd(
    h: &Hypergraph,
    d: &GeneralizedHypertreeDecomposition,
) -> Result<usize, GhdDefect> {
    check_tree_decomposition(&primal_graph(h), d.base()).map_err(GhdDefect::Base)?;
    for (node, cover) in d.covers() {
        for edge in cover {
            if h.edge_vertices(edge).is_none() {
                return Err(GhdDefect::UnknownEdge {
                    node: node.to_string(),
                    edge: edge.clone(),
                });
            }
        }
        let bag = d.base().bag(node).expect("validated node");
        let mut covered: BTreeSet<&String> = BTreeSet::new();
        for edge in cover {
            covered.extend(h.edge_vertices(edge).unwrap());
        }
        for v in bag {
            if !covered.contains(v) {
                return Err(GhdDefect::Uncovered {
                    node: node.to_string(),
                    variable: v.clone(),
                });
            }
        }
    }
    Ok(d.width())
}

/// Per node, covers the bag greedily: the hyperedge with the largest
/// residual intersection first, ties by lexicographic edge id.
pub fn greedy_cover_lambda(
    h: &Hypergraph,
    d: &TreeDecomposition,
) -> Result<GeneralizedHypertreeDecomposition, Error> {
    check_tree_decomposition(&primal_graph(h), d).map_err(|defect| {
        Error::InvalidDecomposition(format!(
            "not a tree decomposition of the primal graph: {defect}"
        ))
    })?;
    // Lexicographic edge order makes the tie-break reproducible.
    let mut sorted_edges: Vec<(&str, &BTreeSet<String>)> = h.edges().collect();
    sorted_edges.sort_unstable_by_key(|(id, _)| *id);
    let mut lambda = BTreeMap::new();
    for (node, bag) in d.bags() {
        let mut uncovered: BTreeSet<&String> = bag.iter().collect();
        let mut cover = BTreeSet::new();
        while !uncovered.is_empty() {
            let mut best: Option<(usize, &str)> = None;
            for &(id, members) in &sorted_edges {
                let gain = members.iter().filter(|v| uncovered.contains(v)).count();
                match best {
                    Some((g, _)) if g >= gain => {}
                    _ if gain > 0 => best = Some((gain, id)),
                    _ => {}
                }
            }
            let Some((_, id)) = best else {
                let witness = uncovered.iter().next().unwrap();
                return Err(Error::Semantic(format!(
                    "bag of `{node}` cannot be covered: variable `{witness}` occurs in no hyperedge"
                )));
            };
            for v in h.edge_vertices(id).unwrap() {
                uncovered.remove(v);
            }
            cover.insert(id.to_string());
        }
        lambda.insert(node.to_string(), cover);
    }
    let ghd = GeneralizedHypertreeDecomposition::new(d.clone(), lambda)?;
    debug_assert!(check_ghd(h, &ghd).is_ok());
    Ok(ghd)
}

/// Per-node, per-cover-edge condition distinguishing hypertree
/// decompositions from generalized ones: for every node `p` and hyperedge
/// `h` in its cover, the part of `h` occurring anywhere in the subtree
/// under `p` must already be in the bag of `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescendantDefect {
    pub node: String,
    pub edge: String,
    pub variable: String,
}

impl fmt::Display for DescendantDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "hyperedge `{}` at node `{}` reaches `{}` below without it being in the bag",
            self.edge, self.node, self.variable
        )
    }
}

pub fn check_descendant_condition(
    h: &Hypergraph,
    d: &GeneralizedHypertreeDecomposition,
) -> Result<(), DescendantDefect> {
    let base = d.base();
    let order = base.bfs_order();
    let parents = base.parents();
    // Subtree vertex sets, children before parents.
    let mut subtree: BTreeMap<&str, BTreeSet<String>> = BTreeMap::new();
    for &node in order.iter().rev() {
        let mut acc = base.bag(node).expect("bag").clone();
        for (&child, &p) in &parents {
            if p == node {
                acc.extend(subtree[child].iter().cloned());
            }
        }
        subtree.insert(node, acc);
    }
    for &node in &order {
        let bag = base.bag(node).unwrap();
        for edge in d.lambda(node).expect("cover") {
            let members = match h.edge_vertices(edge) {
                Some(m) => m,
                None => continue, // unknown edges are check_ghd's business
            };
            for v in members {
                if subtree[node].contains(v) && !bag.contains(v) {
                    return Err(DescendantDefect {
                        node: node.to_string(),
                        edge: edge.clone(),
                        variable: v.clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// The width-one decomposition induced by a join tree: every node's bag is
/// its hyperedge, covered by that hyperedge alone.
pub fn ghd_from_join_tree(
    h: &Hypergraph,
    tree: &JoinTree,
) -> Result<GeneralizedHypertreeDecomposition, Error> {
    let mut chi = BTreeMap::new();
    let mut lambda = BTreeMap::new();
    for node in tree.nodes() {
        let edge = tree.hyperedge_of(node).expect("labelled node");
        let members = h.edge_vertices(edge).ok_or_else(|| {
            Error::InvalidJoinTree(format!(
                "node `{node}` references unknown hyperedge `{edge}`"
            ))
        })?;
        chi.insert(node.clone(), members.clone());
        lambda.insert(node.clone(), BTreeSet::from([edge.to_string()]));
    }
    let tree_edges = tree
        .tree_edges()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    let base = TreeDecomposition::new(
        tree.nodes().to_vec(),
        chi,
        tree_edges,
        tree.root().to_string(),
    )?
    .rerooted_canonical();
    GeneralizedHypertreeDecomposition::new(base, lambda)
}

/// Contents of a `.ghd.json` file: a plain tree decomposition when no node
/// carries a cover, a generalized hypertree decomposition when all do.
#[derive(Clone, Debug)]
pub enum DecompositionFile {
    Tree(TreeDecomposition),
    Generalized(GeneralizedHypertreeDecomposition),
}

impl DecompositionFile {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct RawNode {
            chi: Vec<String>,
            #[serde(default)]
            lambda: Option<Vec<String>>,
        }
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
        let mut chi = BTreeMap::new();
        let mut lambda = BTreeMap::new();
        let mut with_lambda = 0usize;
        for (name, value) in raw.nodes {
            let node: RawNode = serde_json::from_value(value)
                .map_err(|e| Error::semantic(format!("node `{name}`: {e}")))?;
            nodes.push(name.clone());
            chi.insert(name.clone(), node.chi.into_iter().collect());
            if let Some(l) = node.lambda {
                with_lambda += 1;
                lambda.insert(name, l.into_iter().collect());
            }
        }
        let tree_edges = raw
            .tree_edges
            .into_iter()
            .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
            .collect();
        let base = TreeDecomposition::new(nodes, chi, tree_edges, raw.root)?;
        if with_lambda == 0 {
            Ok(DecompositionFile::Tree(base))
        } else if with_lambda == base.node_count() {
            Ok(DecompositionFile::Generalized(
                GeneralizedHypertreeDecomposition::new(base, lambda)?,
            ))
        } else {
            Err(Error::semantic(
                "either all nodes or no node may carry a `lambda` cover".to_string(),
            ))
        }
    }

    pub fn to_json(&self) -> String {
        let (base, lambda) = match self {
            DecompositionFile::Tree(td) => (td, None),
            DecompositionFile::Generalized(g) => (g.base(), Some(g)),
        };
        let mut nodes = Map::new();
        for n in base.nodes() {
            let mut obj = Map::new();
            obj.insert(
                "chi".into(),
                json!(base.bag(n).unwrap().iter().collect::<Vec<_>>()),
            );
            if let Some(g) = lambda {
                obj.insert(
                    "lambda".into(),
                    json!(g.lambda(n).unwrap().iter().collect::<Vec<_>>()),
                );
            }
            nodes.insert(n.clone(), Value::Object(obj));
        }
        let mut root = Map::new();
        root.insert("nodes".into(), Value::Object(nodes));
        root.insert(
            "tree_edges".into(),
            json!(base
                .tree_edges()
                .map(|(a, b)| vec![a, b])
                .collect::<Vec<_>>()),
        );
        root.insert("root".into(), json!(base.root()));
        serde_json::to_string_pretty(&Value::Object(root)).expect("decomposition serialization")
    }
}
