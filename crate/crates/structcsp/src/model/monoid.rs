//! Cost values and the totally ordered monoids used to combine them.
//!
//! The solver minimizes over solutions while combining per-variable costs
//! inside a solution with the monoid operation. Two monoids are built in:
//! rationals under addition (identity 0) and rationals under max, whose
//! identity is a dedicated negative-infinity sentinel ordered below every
//! rational. For the additive monoid the sentinel is absorbing, which keeps
//! the operation total, commutative, associative, and monotone on the whole
//! cost domain.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::model::Rational;

/// A cost value: either a rational or the `-inf` sentinel.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cost {
    NegativeInfinity,
    Finite(Rational),
}

impl Cost {
    pub fn finite(r: Rational) -> Self {
        Cost::Finite(r)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Cost::Finite(r) => Some(r),
            Cost::NegativeInfinity => None,
        }
    }

    pub fn to_canonical_string(&self) -> String {
        match self {
            Cost::NegativeInfinity => "-inf".to_string(),
            Cost::Finite(r) => r.to_canonical_string(),
        }
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl From<Rational> for Cost {
    fn from(r: Rational) -> Self {
        Cost::Finite(r)
    }
}

/// A totally ordered commutative monoid over [`Cost`] values.
///
/// Required laws, which the test suite samples: commutativity,
/// associativity, identity, and monotonicity of `combine` with respect to
/// the total order on costs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostMonoid {
    /// Rational addition with identity 0.
    Sum,
    /// Maximum with identity `-inf`.
    Max,
}

impl CostMonoid {
    pub fn identity(&self) -> Cost {
        match self {
            CostMonoid::Sum => Cost::Finite(Rational::zero()),
            CostMonoid::Max => Cost::NegativeInfinity,
        }
    }

    pub fn combine(&self, a: &Cost, b: &Cost) -> Cost {
        match self {
            CostMonoid::Sum => match (a, b) {
                (Cost::Finite(x), Cost::Finite(y)) => Cost::Finite(x + y),
                _ => Cost::NegativeInfinity,
            },
            CostMonoid::Max => a.clone().max(b.clone()),
        }
    }

    pub fn fold<I: IntoIterator<Item = Cost>>(&self, items: I) -> Cost {
        items
            .into_iter()
            .fold(self.identity(), |acc, x| self.combine(&acc, &x))
    }
}

impl fmt::Display for CostMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostMonoid::Sum => f.write_str("sum"),
            CostMonoid::Max => f.write_str("max"),
        }
    }
}

impl FromStr for CostMonoid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "sum" => Ok(CostMonoid::Sum),
            "max" => Ok(CostMonoid::Max),
            other => Err(Error::semantic(format!(
                "unknown cost monoid `{other}` (expected `sum` or `max`)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_costs() -> Vec<Cost> {
        let mut out = vec![Cost::NegativeInfinity];
        for n in -5..=5i64 {
            for d in 1..=4i64 {
                out.push(Cost::Finite(Rational::new(n, d)));
            }
        }
        out
    }

    #[test]
    fn monoid_laws_on_sampled_triples() {
        let costs = sample_costs();
        let mut checked = 0usize;
        for monoid in [CostMonoid::Sum, CostMonoid::Max] {
            let e = monoid.identity();
            for a in &costs {
                assert_eq!(&monoid.combine(a, &e), a, "identity law ({monoid})");
                for b in &costs {
                    assert_eq!(
                        monoid.combine(a, b),
                        monoid.combine(b, a),
                        "commutativity ({monoid})"
                    );
                    for c in &costs {
                        assert_eq!(
                            monoid.combine(&monoid.combine(a, b), c),
                            monoid.combine(a, &monoid.combine(b, c)),
                            "associativity ({monoid})"
                        );
                        if a <= b {
                            assert!(
                                monoid.combine(a, c) <= monoid.combine(b, c),
                                "monotonicity ({monoid})"
                            );
                        }
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked >= 1000, "sampled {checked} triples");
    }

    #[test]
    fn sentinel_sorts_below_all_rationals() {
        assert!(Cost::NegativeInfinity < Cost::Finite(Rational::new(-1_000_000, 1)));
    }

    #[test]
    fn fold_empty_is_identity() {
        assert_eq!(CostMonoid::Sum.fold([]), Cost::Finite(Rational::zero()));
        assert_eq!(CostMonoid::Max.fold([]), Cost::NegativeInfinity);
    }
}
