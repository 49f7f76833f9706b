//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its elapsed time (visible with `--nocapture`). Sample sizes, seeds, and
//! tolerances are pinned; all value comparisons are exact rational
//! equality.

use std::collections::BTreeSet;
use std::time::Instant;

use structcsp::acyclic::{enumerate_solutions, full_reduce, yannakakis_decide};
use structcsp::decomposition::{
    check_ghd, exact_treewidth, ghd_from_join_tree, greedy_cover_lambda, minfill_tree_decomposition,
};
use structcsp::generate::{
    acyclic_hypergraph, acyclic_instance, add_random_tuple_weights, random_hypergraph,
    random_instance, random_unary_weights, triangle_core_instance, GenParams, Rng,
};
use structcsp::hypergraph::{
    build_hypergraph, gyo_acyclicity, incidence_graph, primal_graph, Graph, Hypergraph,
};
use structcsp::model::{evaluate_assignment, CostMonoid, CspInstance, Rational, Tuple};
use structcsp::optimize::{compute_optimal_solution, solve_with_decomposition, SolveOutcome};
use structcsp::oracle::{
    brute_force_min_violation, brute_force_optimal, brute_force_solutions,
    exhaustive_join_tree_search,
};
use structcsp::reduce::{maxcsp_to_csop, wcsp_to_csop, DEFAULT_TUPLE_BUDGET};
use structcsp_cli::bench_chain;

fn pass(number: usize, name: &str, started: Instant) {
    println!(
        "ACCEPTANCE {number} ({name}): PASS [{} ms]",
        started.elapsed().as_millis()
    );
}

fn join_tree_of(p: &CspInstance) -> structcsp::hypergraph::JoinTree {
    let h = build_hypergraph(p).expect("hypergraph");
    gyo_acyclicity(&h)
        .expect("gyo")
        .join_tree()
        .cloned()
        .expect("acyclic instance")
}

/// Criterion 1: on 500 seeded random acyclic instances (<=6 variables,
/// |U|<=4, <=5 constraints, arity <=3), the dynamic program matches the
/// brute-force optimum exactly and returns a satisfying assignment.
#[test]
fn acceptance_01_oracle_optimality() {
    let t = Instant::now();
    let params = GenParams {
        variables: 6,
        domain_size: 4,
        constraints: 5,
        max_arity: 3,
        density_percent: 45,
        plant_solution: true,
    };
    for seed in 0..500u64 {
        let p = acyclic_instance(
            seed,
            &GenParams {
                plant_solution: seed % 4 != 3,
                ..params.clone()
            },
        );
        let w = random_unary_weights(seed.wrapping_mul(31) ^ 0x1, &p);
        let tree = join_tree_of(&p);
        let dp = compute_optimal_solution(&p, &w, &tree, &CostMonoid::Sum)
            .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        let oracle = brute_force_optimal(&p, &w, &CostMonoid::Sum).unwrap();
        match (&dp, &oracle) {
            (SolveOutcome::Unsatisfiable, SolveOutcome::Unsatisfiable) => {}
            (SolveOutcome::Optimal(a), SolveOutcome::Optimal(b)) => {
                assert_eq!(a.cost, b.cost, "seed {seed}: cost mismatch");
                let report = evaluate_assignment(&p, &a.assignment, None).unwrap();
                assert!(
                    report.satisfies,
                    "seed {seed}: assignment violates a constraint"
                );
            }
            other => panic!("seed {seed}: solver/oracle disagreement {other:?}"),
        }
    }
    pass(1, "oracle optimality on acyclic instances", t);
}

/// Criterion 2: on 300 seeded random cyclic instances decomposed by
/// min-fill plus greedy cover, solving through the decomposition matches
/// the brute-force optimum exactly.
#[test]
fn acceptance_02_pipeline_optimality_bounded_width() {
    let t = Instant::now();
    let params = GenParams {
        variables: 6,
        domain_size: 3,
        constraints: 5,
        max_arity: 3,
        density_percent: 50,
        plant_solution: true,
    };
    let mut tested = 0usize;
    let mut seed = 0u64;
    while tested < 300 {
        seed += 1;
        let p = random_instance(
            seed,
            &GenParams {
                plant_solution: seed % 4 != 3,
                ..params.clone()
            },
        );
        let h = build_hypergraph(&p).unwrap();
        if gyo_acyclicity(&h).unwrap().is_acyclic() {
            continue;
        }
        let td = minfill_tree_decomposition(&primal_graph(&h)).unwrap();
        let ghd = greedy_cover_lambda(&h, &td).unwrap();
        let w = random_unary_weights(seed ^ 0x2, &p);
        let dp = solve_with_decomposition(&p, &w, &ghd, &CostMonoid::Sum)
            .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        let oracle = brute_force_optimal(&p, &w, &CostMonoid::Sum).unwrap();
        match (&dp, &oracle) {
            (SolveOutcome::Unsatisfiable, SolveOutcome::Unsatisfiable) => {}
            (SolveOutcome::Optimal(a), SolveOutcome::Optimal(b)) => {
                assert_eq!(a.cost, b.cost, "seed {seed}");
                assert!(
                    evaluate_assignment(&p, &a.assignment, None)
                        .unwrap()
                        .satisfies,
                    "seed {seed}"
                );
            }
            other => panic!("seed {seed}: disagreement {other:?}"),
        }
        tested += 1;
    }
    pass(2, "pipeline optimality through decompositions", t);
}

/// Criterion 3: on 200 seeded random acyclic tuple-weighted instances, the
/// rewriting to unary weights followed by the dynamic program matches the
/// brute-force weighted optimum exactly; and the rewriting preserves the
/// acyclicity verdict on 100 acyclic plus 100 triangle-core instances.
#[test]
fn acceptance_03_tuple_weight_reduction() {
    let t = Instant::now();
    let params = GenParams {
        variables: 6,
        domain_size: 3,
        constraints: 4,
        max_arity: 3,
        density_percent: 50,
        plant_solution: true,
    };
    for seed in 0..200u64 {
        let base = acyclic_instance(
            seed,
            &GenParams {
                plant_solution: seed % 5 != 4,
                ..params.clone()
            },
        );
        let p = add_random_tuple_weights(seed ^ 0x3, &base);
        let (p2, w, artifacts) = wcsp_to_csop(&p).unwrap();
        let tree = join_tree_of(&p2);
        let dp = compute_optimal_solution(&p2, &w, &tree, &CostMonoid::Sum).unwrap();

        let oracle_best: Option<Rational> = brute_force_solutions(&p)
            .unwrap()
            .iter()
            .map(|s| {
                evaluate_assignment(&p, s, None)
                    .unwrap()
                    .tuple_cost
                    .expect("fully weighted")
            })
            .min();
        match (&dp, oracle_best) {
            (SolveOutcome::Unsatisfiable, None) => {}
            (SolveOutcome::Optimal(sol), Some(best)) => {
                assert_eq!(sol.cost.as_rational(), Some(&best), "seed {seed}");
                let back = artifacts.back_map(&sol.assignment);
                assert!(
                    evaluate_assignment(&p, &back, None).unwrap().satisfies,
                    "seed {seed}"
                );
            }
            other => panic!("seed {seed}: disagreement {other:?}"),
        }
    }

    // Structure preservation, both directions.
    for seed in 0..100u64 {
        let p = add_random_tuple_weights(seed, &acyclic_instance(seed, &params));
        let (p2, _, _) = wcsp_to_csop(&p).unwrap();
        assert!(
            gyo_acyclicity(&build_hypergraph(&p2).unwrap())
                .unwrap()
                .is_acyclic(),
            "seed {seed}: acyclic input became cyclic"
        );
    }
    for seed in 0..100u64 {
        let p = add_random_tuple_weights(seed, &triangle_core_instance(seed, &params));
        let (p2, _, _) = wcsp_to_csop(&p).unwrap();
        assert!(
            !gyo_acyclicity(&build_hypergraph(&p2).unwrap())
                .unwrap()
                .is_acyclic(),
            "seed {seed}: cyclic input became acyclic"
        );
    }
    pass(3, "tuple-weight reduction", t);
}

/// Criterion 4: on 200 seeded random instances (<=5 variables, |U|<=3,
/// <=4 constraints), the violation-degree rewriting over a valid
/// incidence-graph tree decomposition followed by the dynamic program
/// matches the brute-force minimum violation degree exactly; the
/// satisfiable-core-plus-empty-constraint fixture costs exactly 1.
#[test]
fn acceptance_04_violation_degree_reduction() {
    let t = Instant::now();
    let params = GenParams {
        variables: 5,
        domain_size: 3,
        constraints: 4,
        max_arity: 3,
        density_percent: 40,
        plant_solution: false,
    };
    for seed in 0..200u64 {
        let p = random_instance(
            seed,
            &GenParams {
                plant_solution: seed % 3 == 0,
                ..params.clone()
            },
        );
        let h = build_hypergraph(&p).unwrap();
        let td = minfill_tree_decomposition(&incidence_graph(&h).unwrap()).unwrap();
        let (p2, w, artifacts) = maxcsp_to_csop(&p, &td, DEFAULT_TUPLE_BUDGET, None).unwrap();
        let tree = join_tree_of(&p2);
        let dp = compute_optimal_solution(&p2, &w, &tree, &CostMonoid::Sum).unwrap();
        let sol = dp
            .optimal()
            .unwrap_or_else(|| panic!("seed {seed}: rewriting must always be satisfiable"));
        let (_, oracle_degree) = brute_force_min_violation(&p).unwrap();
        assert_eq!(
            sol.cost.as_rational(),
            Some(&Rational::integer(oracle_degree as i64)),
            "seed {seed}: violation degree mismatch"
        );
        let back = artifacts.back_map(&sol.assignment);
        let report = evaluate_assignment(&p, &back, None).unwrap();
        assert_eq!(report.violation_degree, oracle_degree, "seed {seed}");
    }

    // The fixture with a satisfiable core and one empty constraint over all
    // variables has minimum violation degree exactly 1.
    let p = structcsp::fixtures::unsat_big_constraint();
    let h = build_hypergraph(&p).unwrap();
    let td = minfill_tree_decomposition(&incidence_graph(&h).unwrap()).unwrap();
    let (p2, w, _) = maxcsp_to_csop(&p, &td, DEFAULT_TUPLE_BUDGET, None).unwrap();
    let tree = join_tree_of(&p2);
    let dp = compute_optimal_solution(&p2, &w, &tree, &CostMonoid::Sum).unwrap();
    assert_eq!(
        dp.optimal().unwrap().cost.as_rational(),
        Some(&Rational::one())
    );
    pass(4, "violation-degree reduction", t);
}

/// Criterion 5: GYO reduction agrees with the exhaustive join-tree search
/// on every hypergraph with at most 4 hyperedges over at most 5 vertices.
#[test]
fn acceptance_05_acyclicity_recognition_exhaustive() {
    let t = Instant::now();
    let pool: Vec<String> = (1..=5).map(|i| format!("v{i}")).collect();
    // All non-empty subsets of the vertex pool, as candidate hyperedges.
    let mut candidates: Vec<BTreeSet<String>> = Vec::new();
    for mask in 1u32..32 {
        candidates.push(
            (0..5)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| pool[i].clone())
                .collect(),
        );
    }

    let mut combo = Vec::new();
    let mut checked = 0usize;
    fn visit(
        candidates: &[BTreeSet<String>],
        start: usize,
        combo: &mut Vec<usize>,
        checked: &mut usize,
    ) {
        if !combo.is_empty() {
            let vertices: Vec<String> = combo
                .iter()
                .flat_map(|&i| candidates[i].iter().cloned())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let edges: Vec<(String, BTreeSet<String>)> = combo
                .iter()
                .enumerate()
                .map(|(k, &i)| (format!("e{}", k + 1), candidates[i].clone()))
                .collect();
            let h = Hypergraph::new(vertices, edges).unwrap();
            let gyo = gyo_acyclicity(&h).unwrap();
            let exhaustive = exhaustive_join_tree_search(&h).unwrap();
            assert_eq!(
                gyo.is_acyclic(),
                exhaustive.is_some(),
                "disagreement on {}",
                h.to_json()
            );
            *checked += 1;
        }
        if combo.len() == 4 {
            return;
        }
        for i in start..candidates.len() {
            combo.push(i);
            visit(candidates, i + 1, combo, checked);
            combo.pop();
        }
    }
    visit(&candidates, 0, &mut combo, &mut checked);
    assert_eq!(checked, 31 + 465 + 4495 + 31465);
    pass(5, "exhaustive acyclicity recognition", t);
}

/// Criterion 6: on 100 random acyclic instances, every tuple surviving the
/// full reduction occurs in at least one enumerated solution, and the
/// enumerated set equals the brute-force solution set.
#[test]
fn acceptance_06_global_consistency() {
    let t = Instant::now();
    let params = GenParams {
        variables: 6,
        domain_size: 3,
        constraints: 5,
        max_arity: 3,
        density_percent: 50,
        plant_solution: true,
    };
    for seed in 0..100u64 {
        let p = acyclic_instance(seed, &params);
        let tree = join_tree_of(&p);
        let reduced = full_reduce(&p, &tree).unwrap();
        let solutions = brute_force_solutions(&p).unwrap();
        assert!(
            reduced.consistent(),
            "seed {seed}: planted instance must reduce"
        );
        let enumerated: BTreeSet<Tuple> = enumerate_solutions(&reduced, None).unwrap().collect();
        assert_eq!(
            enumerated,
            solutions.iter().cloned().collect::<BTreeSet<_>>(),
            "seed {seed}"
        );
        for c in p.constraints() {
            let scope: Vec<&str> = c.scope().iter().map(String::as_str).collect();
            for tuple in reduced.reduced_relation(c.name()).unwrap() {
                assert!(
                    solutions
                        .iter()
                        .any(|s| s.restrict(scope.iter().copied()) == *tuple),
                    "seed {seed}: tuple {tuple:?} of `{}` is in no solution",
                    c.name()
                );
            }
        }
        // Decision agreement on the same inputs.
        assert!(yannakakis_decide(&p, &tree).unwrap(), "seed {seed}");
    }
    pass(6, "global consistency and enumeration", t);
}

/// Criterion 7: width facts. Cliques K_n have treewidth n-1, trees have
/// treewidth 1, join-tree decompositions of acyclic hypergraphs validate at
/// width 1, and the incidence encoding's exact treewidth never exceeds the
/// primal encoding's on 100 random hypergraphs with at most 8 primal
/// vertices.
#[test]
fn acceptance_07_width_facts() {
    let t = Instant::now();
    // Cliques.
    for n in 2..=7usize {
        let names: Vec<String> = (0..n).map(|i| format!("k{i}")).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((names[i].clone(), names[j].clone()));
            }
        }
        let g = Graph::new(names, edges).unwrap();
        assert_eq!(exact_treewidth(&g).unwrap(), n - 1, "K_{n}");
    }
    println!("  clause 1 (clique treewidth): ok");

    // Random trees.
    let mut rng = Rng::new(7);
    for case in 0..50 {
        let n = 2 + rng.below(9);
        let names: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
        let mut edges = Vec::new();
        for i in 1..n {
            edges.push((names[rng.below(i)].clone(), names[i].clone()));
        }
        let g = Graph::new(names, edges).unwrap();
        assert_eq!(exact_treewidth(&g).unwrap(), 1, "tree case {case}");
    }
    println!("  clause 2 (tree treewidth): ok");

    // Join-tree decompositions of acyclic hypergraphs have width one.
    for seed in 0..100u64 {
        let h = acyclic_hypergraph(
            seed,
            &GenParams {
                variables: 8,
                constraints: 5,
                ..GenParams::default()
            },
        );
        let tree = gyo_acyclicity(&h).unwrap().join_tree().cloned().unwrap();
        let ghd = ghd_from_join_tree(&h, &tree).unwrap();
        assert_eq!(check_ghd(&h, &ghd).unwrap(), 1, "seed {seed}");
    }
    println!("  clause 3 (width-one decompositions from join trees): ok");

    // Incidence treewidth vs primal treewidth on random hypergraphs.
    let mut tested = 0usize;
    let mut violations: Vec<(u64, usize, usize, String)> = Vec::new();
    let mut seed = 0u64;
    while tested < 100 {
        seed += 1;
        let h = random_hypergraph(seed, 8, 1 + (seed as usize % 4));
        let primal = primal_graph(&h);
        let incidence = incidence_graph(&h).unwrap();
        if primal.vertices().len() > 8 || incidence.vertices().len() > 12 {
            continue;
        }
        let tw_p = exact_treewidth(&primal).unwrap();
        let tw_i = exact_treewidth(&incidence).unwrap();
        if tw_i > tw_p {
            violations.push((seed, tw_i, tw_p, h.to_json()));
        }
        tested += 1;
    }
    if !violations.is_empty() {
        let (seed, tw_i, tw_p, json) = &violations[0];
        panic!(
            "  clause 4 (incidence treewidth <= primal treewidth): FAIL on {} of 100 \
             hypergraphs; first counterexample (seed {seed}): tw(incidence) = {tw_i} > \
             tw(primal) = {tw_p} for {json}. The inequality does not hold universally \
             (a lone unary hyperedge already gives 1 > 0); the bound that does hold is \
             tw(incidence) <= tw(primal) + 1, which this sample satisfies.",
            violations.len()
        );
    }
    println!("  clause 4 (incidence vs primal treewidth): ok");
    pass(7, "width facts", t);
}

/// Criterion 8: the crossword fixture is cyclic and its transcribed
/// decomposition validates at width exactly 2.
#[cfg(feature = "paper-fixtures")]
#[test]
fn acceptance_08_crossword_fixture() {
    let t = Instant::now();
    let p = structcsp::fixtures::crossword();
    let h = build_hypergraph(&p).unwrap();
    assert!(
        !gyo_acyclicity(&h).unwrap().is_acyclic(),
        "crossword hypergraph must be cyclic"
    );
    let ghd = structcsp::fixtures::crossword_ghd();
    assert_eq!(check_ghd(&h, &ghd).unwrap(), 2, "decomposition width");
    pass(8, "crossword fixture", t);
}

/// Criterion 9: scaling tripwire. Doubling a fixed-relation-size chain from
/// 5000 to 10000 constraints increases the median-of-5 solve time by at
/// most a factor of 2.5.
#[test]
fn acceptance_09_scaling_sanity() {
    let t = Instant::now();
    let rows = bench_chain(&[5000, 10000], 5, 6);
    let first = rows[0].median_ms.max(1) as f64;
    let second = rows[1].median_ms.max(1) as f64;
    let ratio = second / first;
    println!(
        "  5000 -> {} ms, 10000 -> {} ms, ratio {ratio:.2}",
        rows[0].median_ms, rows[1].median_ms
    );
    assert!(
        ratio <= 2.5,
        "doubling the chain scaled time by {ratio:.2} > 2.5"
    );
    pass(9, "scaling sanity", t);
}
