//! Small instances shared by tests, the CLI examples, and the browser demo.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::model::{Constraint, CspInstance, Rational, Tuple, UnaryCostFunction};

fn tuples(scope: &[&str], rows: &[&[&str]]) -> Vec<Tuple> {
    rows.iter()
        .map(|row| {
            Tuple::from_pairs(scope.iter().copied().zip(row.iter().copied()))
                .expect("fixture tuple")
        })
        .collect()
}

fn constraint(name: &str, scope: &[&str], rows: &[&[&str]]) -> Constraint {
    Constraint::new(
        name,
        scope.iter().map(|s| s.to_string()).collect(),
        tuples(scope, rows),
    )
    .expect("fixture constraint")
}

/// Three variables on a chain: `C1` on {X,Y} allows 00, 01, 11 and `C2` on
/// {Y,Z} allows 01, 10. Exactly three solutions.
pub fn p_chain() -> CspInstance {
    CspInstance::new(
        vec!["X".into(), "Y".into(), "Z".into()],
        vec!["0".into(), "1".into()],
        vec![
            constraint("C1", &["X", "Y"], &[&["0", "0"], &["0", "1"], &["1", "1"]]),
            constraint("C2", &["Y", "Z"], &[&["0", "1"], &["1", "0"]]),
        ],
    )
    .expect("chain fixture")
}

/// Weights making the chain's three solutions cost 1, 2, and 7.
pub fn p_chain_weights() -> UnaryCostFunction {
    let mut w = UnaryCostFunction::new();
    w.set("X", "0", Rational::integer(0));
    w.set("X", "1", Rational::integer(5));
    w.set("Y", "0", Rational::integer(1));
    w.set("Y", "1", Rational::integer(0));
    w.set("Z", "0", Rational::integer(2));
    w.set("Z", "1", Rational::integer(0));
    w
}

/// Three binary equality constraints forming a triangle on {A,B,C}; the
/// hypergraph is cyclic and the solutions are the two constant assignments.
pub fn triangle_equality() -> CspInstance {
    let eq: &[&[&str]] = &[&["0", "0"], &["1", "1"]];
    CspInstance::new(
        vec!["A".into(), "B".into(), "C".into()],
        vec!["0".into(), "1".into()],
        vec![
            constraint("AB", &["A", "B"], eq),
            constraint("BC", &["B", "C"], eq),
            constraint("CA", &["C", "A"], eq),
        ],
    )
    .expect("triangle fixture")
}

/// A satisfiable core plus one unsatisfiable constraint spanning all
/// variables. Any assignment violates at least the empty constraint, and
/// solutions of the core violate exactly it, so the minimum violation
/// degree is exactly 1.
pub fn unsat_big_constraint() -> CspInstance {
    let chain = p_chain();
    let mut constraints = chain.constraints().to_vec();
    constraints.push(
        Constraint::new("BIG", vec!["X".into(), "Y".into(), "Z".into()], Vec::new())
            .expect("empty constraint"),
    );
    CspInstance::new(
        chain.variables().to_vec(),
        chain.domain().to_vec(),
        constraints,
    )
    .expect("big-constraint fixture")
}

/// A crossword puzzle over twelve boxes arranged as a frame: two horizontal
/// slots (top and bottom rows) and two vertical slots (left and right
/// columns). Words give the constraint relations; slot `1H` admits house,
/// coins, and block. The four slots pairwise overlap in corner boxes, so
/// the constraint hypergraph is cyclic.
///
/// Transcribed grid, box numbers:
///
/// ```text
///  1  2  3  4  5
///  6           7
///  8  9 10 11 12
/// ```
#[cfg(feature = "paper-fixtures")]
pub fn crossword_json() -> &'static str {
    r#"{
  "variables": ["1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11", "12"],
  "domain": ["a","b","c","d","e","f","g","h","i","j","k","l","m",
             "n","o","p","q","r","s","t","u","v","w","x","y","z"],
  "constraints": [
    {"name": "1H", "scope": ["1", "2", "3", "4", "5"],
     "tuples": [["h","o","u","s","e"], ["c","o","i","n","s"], ["b","l","o","c","k"]]},
    {"name": "2V", "scope": ["1", "6", "8"],
     "tuples": [["h","a","m"], ["c","o","d"], ["b","u","s"]]},
    {"name": "3V", "scope": ["5", "7", "12"],
     "tuples": [["e","n","d"], ["s","u","n"], ["k","i","t"]]},
    {"name": "4H", "scope": ["8", "9", "10", "11", "12"],
     "tuples": [["m","o","u","n","d"], ["d","r","i","e","d"], ["s","t","o","r","m"]]}
  ]
}"#
}

#[cfg(feature = "paper-fixtures")]
pub fn crossword() -> CspInstance {
    crate::model::parse_instance(crossword_json())
        .expect("crossword fixture")
        .0
}

/// A width-2 generalized hypertree decomposition of the crossword
/// hypergraph: the four corner boxes are covered by the two vertical slots,
/// and each slot hangs off that central node.
#[cfg(feature = "paper-fixtures")]
pub fn crossword_ghd() -> crate::decomposition::GeneralizedHypertreeDecomposition {
    use crate::decomposition::{GeneralizedHypertreeDecomposition, TreeDecomposition};

    let set =
        |items: &[&str]| -> BTreeSet<String> { items.iter().map(|s| s.to_string()).collect() };
    let chi: BTreeMap<String, BTreeSet<String>> = [
        ("g1".to_string(), set(&["1", "5", "8", "12"])),
        ("g2".to_string(), set(&["1", "2", "3", "4", "5"])),
        ("g3".to_string(), set(&["8", "9", "10", "11", "12"])),
        ("g4".to_string(), set(&["1", "6", "8"])),
        ("g5".to_string(), set(&["5", "7", "12"])),
    ]
    .into();
    let lambda: BTreeMap<String, BTreeSet<String>> = [
        ("g1".to_string(), set(&["2V", "3V"])),
        ("g2".to_string(), set(&["1H"])),
        ("g3".to_string(), set(&["4H"])),
        ("g4".to_string(), set(&["2V"])),
        ("g5".to_string(), set(&["3V"])),
    ]
    .into();
    let edges: BTreeSet<(String, String)> = [
        ("g1".to_string(), "g2".to_string()),
        ("g1".to_string(), "g3".to_string()),
        ("g1".to_string(), "g4".to_string()),
        ("g1".to_string(), "g5".to_string()),
    ]
    .into();
    let base = TreeDecomposition::new(
        vec![
            "g1".into(),
            "g2".into(),
            "g3".into(),
            "g4".into(),
            "g5".into(),
        ],
        chi,
        edges,
        "g1".into(),
    )
    .expect("crossword decomposition tree");
    GeneralizedHypertreeDecomposition::new(base, lambda).expect("crossword decomposition")
}

/// An acyclic hypergraph on thirteen vertices with six hyperedges, one of
/// arity seven; its primal graph flattens that hyperedge into a 21-edge
/// clique.
#[cfg(feature = "paper-fixtures")]
pub fn h1_hypergraph() -> crate::hypergraph::Hypergraph {
    use crate::hypergraph::Hypergraph;
    let set =
        |items: &[&str]| -> BTreeSet<String> { items.iter().map(|s| s.to_string()).collect() };
    Hypergraph::new(
        [
            "A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L", "M",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
        vec![
            ("h1".to_string(), set(&["A", "B", "C"])),
            ("h2".to_string(), set(&["A", "C", "D", "E", "F", "G", "H"])),
            ("h3".to_string(), set(&["D", "E", "I"])),
            ("h4".to_string(), set(&["F", "G", "J"])),
            ("h5".to_string(), set(&["H", "K", "L"])),
            ("h6".to_string(), set(&["L", "M"])),
        ],
    )
    .expect("h1 fixture")
}
