//! Exact constraint optimization through structural decomposition.
//!
//! This crate solves constraint satisfaction and optimization problems
//! whose constraint hypergraphs are acyclic or close to it. Acyclic
//! instances are evaluated by semijoin passes over a join tree and
//! optimized by a dynamic program on the same tree; cyclic instances are
//! first rewritten into equivalent acyclic ones along a tree decomposition
//! or a generalized hypertree decomposition. Two further rewritings reduce
//! tuple-weighted instances and violation-minimization instances to the
//! unary-weighted case, so one dynamic program serves all three problem
//! flavours.
//!
//! Costs are exact rationals combined through a totally ordered monoid
//! (sum or max), and every solver path has an independent brute-force
//! oracle in [`oracle`] used throughout the test suite.
//!
//! # Example
//!
//! Parse an instance, recognize its join tree, and compute a minimum-cost
//! solution:
//!
//! ```
//! use structcsp::hypergraph::{build_hypergraph, gyo_acyclicity};
//! use structcsp::model::{parse_instance, CostMonoid};
//! use structcsp::optimize::compute_optimal_solution;
//!
//! let (instance, weights) = parse_instance(r#"{
//!     "variables": ["X", "Y", "Z"],
//!     "domain": ["0", "1"],
//!     "constraints": [
//!         {"name": "C1", "scope": ["X", "Y"],
//!          "tuples": [["0","0"], ["0","1"], ["1","1"]]},
//!         {"name": "C2", "scope": ["Y", "Z"],
//!          "tuples": [["0","1"], ["1","0"]]}
//!     ],
//!     "unary_weights": {"X=1": 5, "Y=0": 1, "Z=0": 2}
//! }"#)?;
//!
//! let hypergraph = build_hypergraph(&instance)?;
//! let tree = gyo_acyclicity(&hypergraph)?
//!     .join_tree()
//!     .cloned()
//!     .expect("chains are acyclic");
//! let outcome = compute_optimal_solution(
//!     &instance,
//!     &weights.unwrap_or_default(),
//!     &tree,
//!     &CostMonoid::Sum,
//! )?;
//! let best = outcome.optimal().expect("satisfiable");
//! assert_eq!(best.cost.to_canonical_string(), "1");
//! assert_eq!(best.assignment.get("Z"), Some("1"));
//! # Ok::<(), structcsp::Error>(())
//! ```

pub mod acyclic;
pub mod decomposition;
mod error;
pub mod fixtures;
pub mod generate;
pub mod hypergraph;
pub mod model;
pub mod optimize;
pub mod oracle;
pub mod reduce;

pub use error::Error;
