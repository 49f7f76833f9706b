//! Deterministic instance generators for tests, benchmarks, and the CLI.
//!
//! Everything is driven by a tiny self-contained PRNG so a given seed
//! produces the same instance on every platform and toolchain, which the
//! command-line contract relies on.

use std::collections::BTreeSet;

use crate::hypergraph::{Graph, Hypergraph};
use crate::model::{Constraint, CspInstance, Rational, Tuple, UnaryCostFunction};

/// SplitMix64: small, fast, and stable across releases.
#[derive(Clone, Debug)]
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    /// True with probability `percent / 100`.
    pub fn chance(&mut self, percent: u32) -> bool {
        (self.next_u64() % 100) < percent as u64
    }
}

/// Knobs for the random families.
#[derive(Clone, Debug)]
pub struct GenParams {
    pub variables: usize,
    pub domain_size: usize,
    pub constraints: usize,
    pub max_arity: usize,
    /// Probability (percent) of keeping each candidate tuple.
    pub density_percent: u32,
    /// Insert the restriction of a hidden assignment into every relation,
    /// making the instance satisfiable by construction.
    pub plant_solution: bool,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            variables: 5,
            domain_size: 3,
            constraints: 4,
            max_arity: 3,
            density_percent: 50,
            plant_solution: true,
        }
    }
}

fn domain_names(size: usize) -> Vec<String> {
    (0..size).map(|i| format!("{i}")).collect()
}

fn all_rows(scope: &[String], domain: &[String]) -> Vec<Tuple> {
    let mut out = Vec::new();
    let mut cursor = vec![0usize; scope.len()];
    'outer: loop {
        let mut t = Tuple::empty();
        for (i, v) in scope.iter().enumerate() {
            t.set(v.clone(), domain[cursor[i]].clone());
        }
        out.push(t);
        let mut i = scope.len();
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

/// Builds the constraints for the given scopes: random tuple subsets at the
/// requested density, with an optional planted solution.
fn relations_for(
    scopes: Vec<(String, Vec<String>)>,
    variables: &[String],
    domain: &[String],
    params: &GenParams,
    rng: &mut Rng,
) -> CspInstance {
    let planted: Option<Tuple> = params.plant_solution.then(|| {
        let mut t = Tuple::empty();
        for v in variables {
            t.set(v.clone(), domain[rng.below(domain.len())].clone());
        }
        t
    });
    let mut constraints = Vec::new();
    for (name, scope) in scopes {
        let mut rows: Vec<Tuple> = all_rows(&scope, domain)
            .into_iter()
            .filter(|_| rng.chance(params.density_percent))
            .collect();
        if let Some(p) = &planted {
            let restriction = p.restrict(scope.iter().map(String::as_str));
            if !rows.contains(&restriction) {
                rows.push(restriction);
            }
        }
        constraints.push(Constraint::new(name, scope, rows).expect("generated constraint"));
    }
    CspInstance::new(variables.to_vec(), domain.to_vec(), constraints).expect("generated instance")
}

/// A chain of binary constraints: `length` variables, `length - 1`
/// constraints over consecutive pairs.
pub fn chain_instance(
    length: usize,
    domain_size: usize,
    density_percent: u32,
    plant_solution: bool,
    seed: u64,
) -> CspInstance {
    assert!(length >= 2, "a chain needs at least two variables");
    let mut rng = Rng::new(seed);
    let variables: Vec<String> = (1..=length).map(|i| format!("V{i}")).collect();
    let domain = domain_names(domain_size);
    let scopes: Vec<(String, Vec<String>)> = (0..length - 1)
        .map(|i| {
            (
                format!("C{}", i + 1),
                vec![variables[i].clone(), variables[i + 1].clone()],
            )
        })
        .collect();
    let params = GenParams {
        domain_size,
        density_percent,
        plant_solution,
        ..GenParams::default()
    };
    relations_for(scopes, &variables, &domain, &params, &mut rng)
}

/// Scopes grown in reverse GYO order: each new scope takes a subset of an
/// existing one plus fresh variables, so the hypergraph is acyclic by
/// construction.
fn grow_acyclic_scopes(
    params: &GenParams,
    rng: &mut Rng,
) -> (Vec<String>, Vec<(String, Vec<String>)>) {
    let mut variables: Vec<String> = Vec::new();
    let fresh = |variables: &mut Vec<String>| -> String {
        let name = format!("X{}", variables.len() + 1);
        variables.push(name.clone());
        name
    };
    let mut scopes: Vec<(String, Vec<String>)> = Vec::new();

    let first_arity = 1 + rng.below(params.max_arity);
    let first: Vec<String> = (0..first_arity).map(|_| fresh(&mut variables)).collect();
    scopes.push(("C1".to_string(), first));

    for k in 1..params.constraints {
        let base = &scopes[rng.below(scopes.len())].1.clone();
        let mut scope: Vec<String> = base.iter().filter(|_| rng.chance(50)).cloned().collect();
        let room = params.max_arity.saturating_sub(scope.len());
        let budget = params.variables.saturating_sub(variables.len());
        let fresh_count = if room == 0 {
            0
        } else {
            rng.below(room + 1).min(budget)
        };
        for _ in 0..fresh_count {
            scope.push(fresh(&mut variables));
        }
        if scope.is_empty() {
            scope.push(base[rng.below(base.len())].clone());
        }
        scopes.push((format!("C{}", k + 1), scope));
    }
    (variables, scopes)
}

/// A random instance whose hypergraph is acyclic by construction.
pub fn acyclic_instance(seed: u64, params: &GenParams) -> CspInstance {
    let mut rng = Rng::new(seed);
    let (variables, scopes) = grow_acyclic_scopes(params, &mut rng);
    let domain = domain_names(params.domain_size);
    relations_for(scopes, &variables, &domain, params, &mut rng)
}

/// Three pairwise-overlapping binary constraints; the hypergraph reduces to
/// an irreducible triangle, so it is never acyclic.
pub fn triangle_core_instance(seed: u64, params: &GenParams) -> CspInstance {
    let mut rng = Rng::new(seed);
    let variables = vec!["A".to_string(), "B".to_string(), "C".to_string()];
    let domain = domain_names(params.domain_size);
    let scopes = vec![
        ("AB".to_string(), vec!["A".to_string(), "B".to_string()]),
        ("BC".to_string(), vec!["B".to_string(), "C".to_string()]),
        ("CA".to_string(), vec!["C".to_string(), "A".to_string()]),
    ];
    relations_for(scopes, &variables, &domain, params, &mut rng)
}

/// A random instance with unrestricted scopes (usually cyclic).
pub fn random_instance(seed: u64, params: &GenParams) -> CspInstance {
    let mut rng = Rng::new(seed);
    let pool: Vec<String> = (1..=params.variables).map(|i| format!("X{i}")).collect();
    let mut scopes: Vec<(String, Vec<String>)> = Vec::new();
    let mut used: BTreeSet<String> = BTreeSet::new();
    for k in 0..params.constraints {
        let arity = (1 + rng.below(params.max_arity)).min(pool.len());
        let mut scope: Vec<String> = Vec::new();
        while scope.len() < arity {
            let candidate = pool[rng.below(pool.len())].clone();
            if !scope.contains(&candidate) {
                scope.push(candidate);
            }
        }
        used.extend(scope.iter().cloned());
        scopes.push((format!("C{}", k + 1), scope));
    }
    let variables: Vec<String> = pool.into_iter().filter(|v| used.contains(v)).collect();
    let domain = domain_names(params.domain_size);
    relations_for(scopes, &variables, &domain, params, &mut rng)
}

/// Random unary weights: small rationals, including negatives and halves.
pub fn random_unary_weights(seed: u64, instance: &CspInstance) -> UnaryCostFunction {
    let mut rng = Rng::new(seed);
    let mut w = UnaryCostFunction::new();
    for var in instance.variables() {
        for val in instance.domain() {
            let numer = rng.below(13) as i64 - 4;
            let denom = if rng.chance(25) { 2 } else { 1 };
            w.set(var.clone(), val.clone(), Rational::new(numer, denom));
        }
    }
    w
}

/// Attaches a random weight to every tuple of every constraint.
pub fn add_random_tuple_weights(seed: u64, instance: &CspInstance) -> CspInstance {
    let mut rng = Rng::new(seed);
    let constraints = instance
        .constraints()
        .iter()
        .map(|c| {
            let weights: Vec<Rational> = c
                .tuples()
                .iter()
                .map(|_| {
                    let numer = rng.below(17) as i64 - 5;
                    Rational::integer(numer)
                })
                .collect();
            c.clone().with_tuple_weights(weights).expect("weight count")
        })
        .collect();
    CspInstance::new(
        instance.variables().to_vec(),
        instance.domain().to_vec(),
        constraints,
    )
    .expect("weighted instance")
}

/// A random hypergraph: non-empty random subsets of a vertex pool. Only
/// vertices used by some edge are declared.
pub fn random_hypergraph(seed: u64, max_vertices: usize, edges: usize) -> Hypergraph {
    let mut rng = Rng::new(seed);
    let pool: Vec<String> = (1..=max_vertices).map(|i| format!("v{i}")).collect();
    let mut used: BTreeSet<String> = BTreeSet::new();
    let mut edge_list = Vec::new();
    for k in 0..edges {
        let mut members: BTreeSet<String> =
            pool.iter().filter(|_| rng.chance(40)).cloned().collect();
        if members.is_empty() {
            members.insert(pool[rng.below(pool.len())].clone());
        }
        used.extend(members.iter().cloned());
        edge_list.push((format!("h{}", k + 1), members));
    }
    let vertices: Vec<String> = pool.into_iter().filter(|v| used.contains(v)).collect();
    Hypergraph::new(vertices, edge_list).expect("generated hypergraph")
}

/// An acyclic hypergraph grown by ears, like [`acyclic_instance`] without
/// relations.
pub fn acyclic_hypergraph(seed: u64, params: &GenParams) -> Hypergraph {
    let mut rng = Rng::new(seed);
    let (variables, scopes) = grow_acyclic_scopes(params, &mut rng);
    Hypergraph::new(
        variables,
        scopes
            .into_iter()
            .map(|(name, scope)| (name, scope.into_iter().collect()))
            .collect(),
    )
    .expect("generated acyclic hypergraph")
}

/// A random simple graph over `n` vertices, each edge kept with the given
/// probability.
pub fn random_graph(seed: u64, n: usize, percent: u32) -> Graph {
    let mut rng = Rng::new(seed);
    let vertices: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.chance(percent) {
                edges.push((vertices[i].clone(), vertices[j].clone()));
            }
        }
    }
    Graph::new(vertices, edges).expect("generated graph")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{build_hypergraph, gyo_acyclicity, incidence_graph};

    #[test]
    fn seeds_are_reproducible() {
        let a = acyclic_instance(7, &GenParams::default());
        let b = acyclic_instance(7, &GenParams::default());
        assert_eq!(a, b);
        assert_ne!(a, acyclic_instance(8, &GenParams::default()));
    }

    #[test]
    fn acyclic_family_is_acyclic() {
        for seed in 0..50 {
            let p = acyclic_instance(seed, &GenParams::default());
            let h = build_hypergraph(&p).unwrap();
            assert!(
                gyo_acyclicity(&h).unwrap().is_acyclic(),
                "seed {seed} produced a cyclic instance"
            );
        }
    }

    #[test]
    fn triangle_family_is_cyclic() {
        for seed in 0..20 {
            let p = triangle_core_instance(seed, &GenParams::default());
            let h = build_hypergraph(&p).unwrap();
            assert!(!gyo_acyclicity(&h).unwrap().is_acyclic());
        }
    }

    #[test]
    fn chain_has_expected_shape() {
        let p = chain_instance(3, 2, 60, true, 1);
        assert_eq!(p.variables().len(), 3);
        assert_eq!(p.constraints().len(), 2);
        for c in p.constraints() {
            assert_eq!(c.scope().len(), 2);
        }
    }

    #[test]
    fn planted_solution_makes_instances_satisfiable() {
        for seed in 0..30 {
            let p = acyclic_instance(
                seed,
                &GenParams {
                    plant_solution: true,
                    density_percent: 10,
                    ..GenParams::default()
                },
            );
            assert!(
                !crate::oracle::brute_force_solutions(&p).unwrap().is_empty(),
                "seed {seed} unsatisfiable despite planting"
            );
        }
    }

    #[test]
    fn incidence_graphs_are_bipartite() {
        for seed in 0..100 {
            let h = random_hypergraph(seed, 6, 1 + (seed as usize % 4));
            let g = incidence_graph(&h).unwrap();
            for (a, b) in g.edges() {
                let a_edge = a.starts_with("__h:");
                let b_edge = b.starts_with("__h:");
                assert!(a_edge != b_edge, "edge within one side: {a} - {b}");
            }
        }
    }
}
