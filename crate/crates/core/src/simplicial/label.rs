use std::fmt;

use serde::{Deserialize, Serialize};

use crate::kneser::{Parity, StableSet};

/// Vertex labels for the neighborhood complex and its partial subdivisions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum VertexLabel {
    Stable(StableSet),
    /// Midpoint of an edge between two distinct stable sets, stored sorted.
    Midpoint(StableSet, StableSet),
    /// Barycenter of the all-odd or all-even tight simplex.
    Barycenter(Parity),
    /// Barycenter of a face of a subdivided simplex; sorted, nonempty.
    Flag(Vec<StableSet>),
}

impl VertexLabel {
    pub fn midpoint(a: StableSet, b: StableSet) -> VertexLabel {
        assert_ne!(a, b, "midpoint of a degenerate edge");
        if a < b {
            VertexLabel::Midpoint(a, b)
        } else {
            VertexLabel::Midpoint(b, a)
        }
    }

    pub fn flag(mut sets: Vec<StableSet>) -> VertexLabel {
        assert!(!sets.is_empty(), "empty flag");
        sets.sort();
        sets.dedup();
        VertexLabel::Flag(sets)
    }

    pub fn as_stable(&self) -> Option<&StableSet> {
        match self {
            VertexLabel::Stable(s) => Some(s),
            _ => None,
        }
    }
}

impl From<StableSet> for VertexLabel {
    fn from(s: StableSet) -> Self {
        VertexLabel::Stable(s)
    }
}

/// Canonical serialization: `1.3.5`, `mid(1.3|3.5)`, `b_odd`, `flag(1.3|1.5)`.
impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Stable(s) => write!(f, "{}", s.key()),
            VertexLabel::Midpoint(a, b) => write!(f, "mid({}|{})", a.key(), b.key()),
            VertexLabel::Barycenter(Parity::Odd) => write!(f, "b_odd"),
            VertexLabel::Barycenter(Parity::Even) => write!(f, "b_even"),
            VertexLabel::Flag(sets) => {
                let parts: Vec<String> = sets.iter().map(StableSet::key).collect();
                write!(f, "flag({})", parts.join("|"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_strings() {
        let a = StableSet::new([1, 3], 6).unwrap();
        let b = StableSet::new([3, 5], 6).unwrap();
        assert_eq!(VertexLabel::Stable(a.clone()).to_string(), "1.3");
        assert_eq!(VertexLabel::midpoint(b.clone(), a.clone()).to_string(), "mid(1.3|3.5)");
        assert_eq!(VertexLabel::Barycenter(Parity::Even).to_string(), "b_even");
        assert_eq!(VertexLabel::flag(vec![b, a]).to_string(), "flag(1.3|3.5)");
    }
}
