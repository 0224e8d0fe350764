//! Generalized Dynkin diagrams of diagonal braidings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cocycle::{format_pair_key, parse_key, Pair};
use crate::error::{Error, Result};
use crate::phase::Phase;

/// Default bound on the rank for permutation searches.
pub const TWIST_RANK_BOUND: usize = 8;

/// Vertex labels `q_ii` and edge labels `q~_ij` (`i < j`, nonzero only).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    q_ii: Vec<Phase>,
    q_tilde: BTreeMap<Pair, Phase>,
}

impl Diagram {
    /// Builds a diagram; `q_tilde` may list a pair in either order, but both
    /// orders must then agree. Zero edge labels are dropped.
    pub fn from_constants(q_ii: Vec<Phase>, q_tilde: &[(Pair, Phase)]) -> Result<Diagram> {
        let n = q_ii.len();
        let mut edges: BTreeMap<Pair, Phase> = BTreeMap::new();
        for &((i, j), v) in q_tilde {
            if i == j || i >= n || j >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({},{}) invalid for rank {n}",
                    i + 1,
                    j + 1
                )));
            }
            let key = (i.min(j), i.max(j));
            if let Some(&old) = edges.get(&key) {
                if old != v {
                    return Err(Error::AsymmetricDiagram {
                        i: key.0 + 1,
                        j: key.1 + 1,
                        a: old.to_string(),
                        b: v.to_string(),
                    });
                }
            }
            edges.insert(key, v);
        }
        edges.retain(|_, v| !v.is_zero());
        Ok(Diagram {
            q_ii,
            q_tilde: edges,
        })
    }

    pub fn rank(&self) -> usize {
        self.q_ii.len()
    }

    pub fn q_ii(&self) -> &[Phase] {
        &self.q_ii
    }

    pub fn vertex(&self, i: usize) -> Phase {
        self.q_ii[i]
    }

    /// `q~_ij` for `i != j` in either order; zero when there is no edge.
    pub fn edge(&self, i: usize, j: usize) -> Phase {
        let key = (i.min(j), i.max(j));
        self.q_tilde.get(&key).copied().unwrap_or(Phase::ZERO)
    }

    pub fn edges(&self) -> &BTreeMap<Pair, Phase> {
        &self.q_tilde
    }

    /// Vertex sets of the connected components, each sorted, ordered by
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.rank();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            let mut members = Vec::new();
            comp[start] = id;
            while let Some(v) = stack.pop() {
                members.push(v);
                for w in 0..n {
                    if w != v && comp[w] == usize::MAX && !self.edge(v, w).is_zero() {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

/// Lexicographically first `τ` with `q'_{τ(i)τ(i)} = q_ii` and
/// `q~'_{τ(i)τ(j)} = q~_ij`; `None` when there is none or the ranks differ.
pub fn twist_equivalent(d1: &Diagram, d2: &Diagram, bound: usize) -> Result<Option<Vec<usize>>> {
    let n = d1.rank();
    if n > bound || d2.rank() > bound {
        return Err(Error::RankTooLarge {
            rank: n.max(d2.rank()),
            bound,
        });
    }
    if n != d2.rank() {
        return Ok(None);
    }
    fn extend(d1: &Diagram, d2: &Diagram, tau: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = tau.len();
        if i == d1.rank() {
            return true;
        }
        for c in 0..d2.rank() {
            if used[c] || d2.vertex(c) != d1.vertex(i) {
                continue;
            }
            if (0..i).any(|k| d2.edge(tau[k], c) != d1.edge(k, i)) {
                continue;
            }
            tau.push(c);
            used[c] = true;
            if extend(d1, d2, tau, used) {
                return true;
            }
            used[c] = false;
            tau.pop();
        }
        false
    }
    let mut tau = Vec::with_capacity(n);
    let mut used = vec![false; n];
    Ok(extend(d1, d2, &mut tau, &mut used).then_some(tau))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDiagram {
    q_ii: Vec<Phase>,
    #[serde(default)]
    q_tilde: BTreeMap<String, Phase>,
}

impl Serialize for Diagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawDiagram {
            q_ii: self.q_ii.clone(),
            q_tilde: self
                .q_tilde
                .iter()
                .map(|(&p, &v)| (format_pair_key(p), v))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Diagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawDiagram::deserialize(d)?;
        let edges = raw
            .q_tilde
            .iter()
            .map(|(k, &v)| parse_key(k, 2).map(|ix| ((ix[0], ix[1]), v)))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Diagram::from_constants(raw.q_ii, &edges).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: i64, d: u64) -> Phase {
        Phase::new(n, d)
    }

    #[test]
    fn construction_examples() {
        let d = Diagram::from_constants(vec![p(1, 3)], &[]).unwrap();
        assert_eq!(d.rank(), 1);
        let d = Diagram::from_constants(vec![p(1, 3), p(1, 3)], &[((0, 1), Phase::ZERO)]).unwrap();
        assert!(d.edges().is_empty());
        assert_eq!(d.components(), vec![vec![0], vec![1]]);
        let a2 = Diagram::from_constants(vec![p(1, 3), p(1, 3)], &[((1, 0), p(2, 3))]).unwrap();
        assert_eq!(a2.edge(0, 1), p(2, 3));
        assert!(a2.is_connected());
    }

    #[test]
    fn asymmetric_rejected() {
        let err = Diagram::from_constants(
            vec![p(1, 3), p(1, 3)],
            &[((0, 1), p(1, 3)), ((1, 0), p(2, 3))],
        )
        .unwrap_err();
        assert!(matches!(err, Error::AsymmetricDiagram { .. }));
        assert!(serde_json::from_str::<Diagram>(
            r#"{"q_ii":[{"num":1,"den":3},{"num":1,"den":3}],"q_tilde":{"1,2":{"num":1,"den":3},"2,1":{"num":2,"den":3}}}"#
        )
        .is_err());
    }

    #[test]
    fn twist_examples() {
        let a2 = Diagram::from_constants(vec![p(1, 5), p(1, 5)], &[((0, 1), p(4, 5))]).unwrap();
        assert_eq!(twist_equivalent(&a2, &a2, 8).unwrap(), Some(vec![0, 1]));
        let b = Diagram::from_constants(vec![p(1, 5), p(2, 5)], &[((0, 1), p(4, 5))]).unwrap();
        let b_swapped =
            Diagram::from_constants(vec![p(2, 5), p(1, 5)], &[((0, 1), p(4, 5))]).unwrap();
        assert_eq!(
            twist_equivalent(&b, &b_swapped, 8).unwrap(),
            Some(vec![1, 0])
        );
        let a2sq = Diagram::from_constants(vec![p(2, 5), p(2, 5)], &[((0, 1), p(3, 5))]).unwrap();
        assert_eq!(twist_equivalent(&a2, &a2sq, 8).unwrap(), None);
        let big = Diagram::from_constants(vec![Phase::ZERO; 9], &[]).unwrap();
        assert!(matches!(
            twist_equivalent(&big, &big, 8),
            Err(Error::RankTooLarge { .. })
        ));
    }

    #[test]
    fn json_roundtrip() {
        let a2 = Diagram::from_constants(vec![p(1, 3), p(1, 3)], &[((0, 1), p(2, 3))]).unwrap();
        let text = serde_json::to_string(&a2).unwrap();
        assert_eq!(
            text,
            r#"{"q_ii":[{"num":1,"den":3},{"num":1,"den":3}],"q_tilde":{"1,2":{"num":2,"den":3}}}"#
        );
        assert_eq!(serde_json::from_str::<Diagram>(&text).unwrap(), a2);
    }
}
