//! Core data model: instances, substitutions, cost structures, and
//! assignment evaluation.
//!
//! A constraint satisfaction instance is a finite set of variables, a finite
//! value domain, and a list of constraints, each given extensionally as a
//! scope and a relation of allowed tuples. Substitutions ([`Tuple`]) map
//! variables to values and are totally ordered (lexicographically by
//! variable name, then value name) so that every downstream tie-break is
//! deterministic.

mod format;
mod monoid;
mod rational;

pub use format::{parse_instance, parse_instance_with, serialize_instance, ParseOptions};
pub use monoid::{Cost, CostMonoid};
pub use rational::Rational;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::Error;

/// Reserved prefix for machine-generated variable, value, and constraint
/// names. The parser rejects it in user input so instance transformations
/// can mint fresh names without collisions.
pub const RESERVED_PREFIX: &str = "__";

/// A substitution: a functional set of variable/value bindings.
///
/// The derived ordering compares the sorted binding sequences and is the
/// canonical total order used for tie-breaking and enumeration order.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tuple {
    bindings: BTreeMap<String, String>,
}

impl Tuple {
    pub fn empty() -> Self {
        Tuple::default()
    }

    /// Builds a tuple from pairs, rejecting a variable bound twice.
    pub fn from_pairs<S, I>(pairs: I) -> Result<Self, Error>
    where
        S: Into<String>,
        I: IntoIterator<Item = (S, S)>,
    {
        let mut bindings = BTreeMap::new();
        for (var, val) in pairs {
            let var = var.into();
            let val = val.into();
            if bindings.insert(var.clone(), val).is_some() {
                return Err(Error::semantic(format!(
                    "variable `{var}` bound more than once in one tuple"
                )));
            }
        }
        Ok(Tuple { bindings })
    }

    /// Inserts or overwrites one binding.
    pub fn set(&mut self, var: impl Into<String>, val: impl Into<String>) {
        self.bindings.insert(var.into(), val.into());
    }

    pub fn get(&self, var: &str) -> Option<&str> {
        self.bindings.get(var).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.bindings.keys().map(String::as_str)
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&str, &str)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// The restriction of this tuple to the given variables.
    pub fn restrict<'a, I: IntoIterator<Item = &'a str>>(&self, vars: I) -> Tuple {
        let mut bindings = BTreeMap::new();
        for v in vars {
            if let Some(val) = self.bindings.get(v) {
                bindings.insert(v.to_string(), val.clone());
            }
        }
        Tuple { bindings }
    }

    /// A hashable projection key over `vars`, in sorted variable order.
    pub fn projection_key(&self, vars: &BTreeSet<String>) -> Vec<(String, String)> {
        vars.iter()
            .filter_map(|v| self.bindings.get(v).map(|val| (v.clone(), val.clone())))
            .collect()
    }

    /// True iff the two tuples agree on every variable in `shared`.
    ///
    /// Variables of `shared` missing from either side count as disagreement.
    pub fn conforms_with(&self, other: &Tuple, shared: &BTreeSet<String>) -> bool {
        shared.iter().all(|v| {
            matches!(
                (self.bindings.get(v), other.bindings.get(v)),
                (Some(a), Some(b)) if a == b
            )
        })
    }

    /// True iff every binding of `self` also occurs in `other`.
    pub fn is_subtuple_of(&self, other: &Tuple) -> bool {
        self.bindings
            .iter()
            .all(|(k, v)| other.bindings.get(k) == Some(v))
    }

    /// The union of two tuples, or `None` if they conflict on a variable.
    pub fn union(&self, other: &Tuple) -> Option<Tuple> {
        let mut bindings = self.bindings.clone();
        for (k, v) in &other.bindings {
            match bindings.get(k) {
                Some(existing) if existing != v => return None,
                _ => {
                    bindings.insert(k.clone(), v.clone());
                }
            }
        }
        Some(Tuple { bindings })
    }
}

impl fmt::Debug for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, v)) in self.bindings.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}/{v}")?;
        }
        write!(f, "}}")
    }
}

/// One extensional constraint: a scope and the relation of allowed tuples,
/// optionally carrying one weight per tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    name: String,
    scope: Vec<String>,
    tuples: Vec<Tuple>,
    tuple_weights: Option<Vec<Rational>>,
}

impl Constraint {
    pub fn new(
        name: impl Into<String>,
        scope: Vec<String>,
        tuples: Vec<Tuple>,
    ) -> Result<Self, Error> {
        let name = name.into();
        if scope.is_empty() {
            return Err(Error::semantic(format!(
                "constraint `{name}` has an empty scope"
            )));
        }
        let mut scope_set = BTreeSet::new();
        for v in &scope {
            if !scope_set.insert(v.clone()) {
                return Err(Error::semantic(format!(
                    "constraint `{name}` repeats variable `{v}` in its scope"
                )));
            }
        }
        let mut seen = BTreeSet::new();
        for t in &tuples {
            let t_vars: BTreeSet<String> = t.variables().map(str::to_string).collect();
            if t_vars != scope_set {
                return Err(Error::semantic(format!(
                    "constraint `{name}` has a tuple {t:?} that does not assign exactly its scope"
                )));
            }
            if !seen.insert(t.clone()) {
                return Err(Error::semantic(format!(
                    "constraint `{name}` lists tuple {t:?} twice"
                )));
            }
        }
        Ok(Constraint {
            name,
            scope,
            tuples,
            tuple_weights: None,
        })
    }

    /// Attaches one weight per tuple, in relation order.
    pub fn with_tuple_weights(mut self, weights: Vec<Rational>) -> Result<Self, Error> {
        if weights.len() != self.tuples.len() {
            return Err(Error::semantic(format!(
                "constraint `{}` has {} tuples but {} tuple weights",
                self.name,
                self.tuples.len(),
                weights.len()
            )));
        }
        self.tuple_weights = Some(weights);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn scope(&self) -> &[String] {
        &self.scope
    }

    pub fn scope_set(&self) -> BTreeSet<String> {
        self.scope.iter().cloned().collect()
    }

    pub fn tuples(&self) -> &[Tuple] {
        &self.tuples
    }

    pub fn tuple_weights(&self) -> Option<&[Rational]> {
        self.tuple_weights.as_deref()
    }

    /// The weight of the tuple equal to `t`, when weights are present.
    pub fn weight_of(&self, t: &Tuple) -> Option<Rational> {
        let weights = self.tuple_weights.as_ref()?;
        self.tuples
            .iter()
            .position(|x| x == t)
            .map(|i| weights[i].clone())
    }
}

/// A constraint satisfaction instance over a finite domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CspInstance {
    variables: Vec<String>,
    domain: Vec<String>,
    constraints: Vec<Constraint>,
}

impl CspInstance {
    pub fn new(
        variables: Vec<String>,
        domain: Vec<String>,
        constraints: Vec<Constraint>,
    ) -> Result<Self, Error> {
        let mut var_set = BTreeSet::new();
        for v in &variables {
            if !var_set.insert(v.clone()) {
                return Err(Error::semantic(format!("variable `{v}` declared twice")));
            }
        }
        let mut dom_set = BTreeSet::new();
        for u in &domain {
            if !dom_set.insert(u.clone()) {
                return Err(Error::semantic(format!(
                    "domain value `{u}` declared twice"
                )));
            }
        }
        let mut names = BTreeSet::new();
        for c in &constraints {
            if !names.insert(c.name.clone()) {
                return Err(Error::semantic(format!(
                    "constraint name `{}` used twice",
                    c.name
                )));
            }
            for v in &c.scope {
                if !var_set.contains(v) {
                    return Err(Error::semantic(format!(
                        "constraint `{}` uses undeclared variable `{v}`",
                        c.name
                    )));
                }
            }
            for t in &c.tuples {
                for (_, val) in t.bindings() {
                    if !dom_set.contains(val) {
                        return Err(Error::semantic(format!(
                            "constraint `{}` uses undeclared value `{val}`",
                            c.name
                        )));
                    }
                }
            }
        }
        Ok(CspInstance {
            variables,
            domain,
            constraints,
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn constraint(&self, name: &str) -> Option<&Constraint> {
        self.constraints.iter().find(|c| c.name == name)
    }

    pub fn variable_set(&self) -> BTreeSet<String> {
        self.variables.iter().cloned().collect()
    }

    pub fn stats(&self) -> InstanceStats {
        InstanceStats {
            num_variables: self.variables.len(),
            num_constraints: self.constraints.len(),
            largest_relation: self
                .constraints
                .iter()
                .map(|c| c.tuples.len())
                .max()
                .unwrap_or(0),
            decomposition_width: None,
            decomposition_vertices: None,
        }
    }
}

/// Structural size figures for reports: variable and constraint counts, the
/// largest relation, and (when a decomposition is in play) its width and
/// vertex count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceStats {
    pub num_variables: usize,
    pub num_constraints: usize,
    pub largest_relation: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition_width: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition_vertices: Option<usize>,
}

impl InstanceStats {
    pub fn with_decomposition(mut self, width: usize, vertices: usize) -> Self {
        self.decomposition_width = Some(width);
        self.decomposition_vertices = Some(vertices);
        self
    }
}

/// Unary weights on variable/value pairs. Absent entries weigh zero, and
/// zero entries are normalized away so equality is representation-free.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnaryCostFunction {
    weights: BTreeMap<String, BTreeMap<String, Rational>>,
}

impl UnaryCostFunction {
    pub fn new() -> Self {
        UnaryCostFunction::default()
    }

    pub fn set(&mut self, var: impl Into<String>, val: impl Into<String>, weight: Rational) {
        let var = var.into();
        if weight.is_zero() {
            if let Some(inner) = self.weights.get_mut(&var) {
                inner.remove(&val.into());
                if inner.is_empty() {
                    self.weights.remove(&var);
                }
            }
        } else {
            self.weights
                .entry(var)
                .or_default()
                .insert(val.into(), weight);
        }
    }

    pub fn get(&self, var: &str, val: &str) -> Rational {
        self.weights
            .get(var)
            .and_then(|inner| inner.get(val))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, &Rational)> {
        self.weights.iter().flat_map(|(var, inner)| {
            inner
                .iter()
                .map(move |(val, w)| (var.as_str(), val.as_str(), w))
        })
    }

    /// Merges `other` into `self` by addition.
    pub fn merge(&mut self, other: &UnaryCostFunction) {
        for (var, val, w) in other.entries() {
            let sum = self.get(var, val) + w.clone();
            self.set(var, val, sum);
        }
    }

    /// Plain additive weight of a substitution.
    pub fn weight_of(&self, t: &Tuple) -> Rational {
        t.bindings().map(|(var, val)| self.get(var, val)).sum()
    }
}

/// Combined cost of a substitution under a cost monoid; the empty tuple
/// yields the monoid identity.
pub fn unary_cost(w: &UnaryCostFunction, t: &Tuple, monoid: &CostMonoid) -> Cost {
    monoid.fold(t.bindings().map(|(var, val)| Cost::Finite(w.get(var, val))))
}

/// Outcome of checking a total assignment against an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationReport {
    /// True iff every constraint admits the assignment.
    pub satisfies: bool,
    /// Number of constraints with no tuple contained in the assignment.
    pub violation_degree: usize,
    /// Additive unary cost, when a weight function was supplied.
    pub unary_cost: Option<Rational>,
    /// Sum of matched tuple weights, when every constraint carries weights
    /// and the assignment satisfies the instance.
    pub tuple_cost: Option<Rational>,
}

/// Checks a total assignment: which constraints it satisfies, its violation
/// degree, and its costs when weight inputs are supplied.
pub fn evaluate_assignment(
    instance: &CspInstance,
    assignment: &Tuple,
    weights: Option<&UnaryCostFunction>,
) -> Result<EvaluationReport, Error> {
    for v in instance.variables() {
        if assignment.get(v).is_none() {
            return Err(Error::semantic(format!(
                "partial assignment: variable `{v}` is unassigned"
            )));
        }
    }
    for (var, val) in assignment.bindings() {
        if !instance.variables.iter().any(|x| x == var) {
            return Err(Error::semantic(format!(
                "assignment binds undeclared variable `{var}`"
            )));
        }
        if !instance.domain.iter().any(|x| x == val) {
            return Err(Error::semantic(format!(
                "assignment uses undeclared value `{val}`"
            )));
        }
    }

    let mut violations = 0usize;
    let mut tuple_cost = Some(Rational::zero());
    let all_weighted = instance
        .constraints
        .iter()
        .all(|c| c.tuple_weights.is_some());
    for c in &instance.constraints {
        let projected = assignment.restrict(c.scope.iter().map(String::as_str));
        if c.tuples.contains(&projected) {
            if let (Some(acc), Some(w)) = (tuple_cost.clone(), c.weight_of(&projected)) {
                tuple_cost = Some(acc + w);
            }
        } else {
            violations += 1;
        }
    }

    Ok(EvaluationReport {
        satisfies: violations == 0,
        violation_degree: violations,
        unary_cost: weights.map(|w| w.weight_of(assignment)),
        tuple_cost: if all_weighted && violations == 0 {
            tuple_cost
        } else {
            None
        },
    })
}
