//! Resistor network data model and Kirchhoff matrix assembly.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Boundary,
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeRole {
    Star,
    Auxiliary,
}

/// An undirected edge, stored with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub conductivity: Rational,
    pub role: EdgeRole,
}

impl Edge {
    pub fn new(u: u32, v: u32, conductivity: Rational, role: EdgeRole) -> Self {
        Edge {
            u: VertexId(u),
            v: VertexId(v),
            conductivity,
            role,
        }
    }

    pub fn star(u: u32, v: u32, conductivity: Rational) -> Self {
        Self::new(u, v, conductivity, EdgeRole::Star)
    }

    pub fn key(&self) -> (VertexId, VertexId) {
        ordered(self.u, self.v)
    }
}

pub fn ordered(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge {u}-{v} has non-positive conductivity {conductivity}")]
    NonPositiveConductivity {
        u: VertexId,
        v: VertexId,
        conductivity: Rational,
    },
    #[error("edge {u}-{v} references unknown vertex {missing}")]
    UnknownEndpoint {
        u: VertexId,
        v: VertexId,
        missing: VertexId,
    },
    #[error("network has no boundary vertex")]
    NoBoundary,
    #[error("vertex {0} declared twice")]
    DuplicateVertex(VertexId),
    #[error("parallel edges {u}-{v} carry different roles")]
    RoleConflict { u: VertexId, v: VertexId },
    #[error("no edge {u}-{v}")]
    MissingEdge { u: VertexId, v: VertexId },
    #[error("invalid network JSON: {0}")]
    Json(String),
}

/// A validated network. Vertices are kept sorted by id and edges by their
/// ordered endpoint pair, so two networks built from the same lists in any
/// order are identical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    vertices: BTreeMap<VertexId, VertexKind>,
    edges: BTreeMap<(VertexId, VertexId), Edge>,
}

impl Network {
    /// Validates the inputs and merges parallel edges by summing their
    /// conductivities.
    pub fn build(
        vertices: impl IntoIterator<Item = (VertexId, VertexKind)>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Network, NetworkError> {
        let mut vmap = BTreeMap::new();
        for (id, kind) in vertices {
            if vmap.insert(id, kind).is_some() {
                return Err(NetworkError::DuplicateVertex(id));
            }
        }
        if !vmap.values().any(|k| *k == VertexKind::Boundary) {
            return Err(NetworkError::NoBoundary);
        }
        let mut emap: BTreeMap<(VertexId, VertexId), Edge> = BTreeMap::new();
        for e in edges {
            if e.u == e.v {
                return Err(NetworkError::SelfLoop(e.u));
            }
            for end in [e.u, e.v] {
                if !vmap.contains_key(&end) {
                    return Err(NetworkError::UnknownEndpoint {
                        u: e.u,
                        v: e.v,
                        missing: end,
                    });
                }
            }
            if !e.conductivity.is_positive() {
                return Err(NetworkError::NonPositiveConductivity {
                    u: e.u,
                    v: e.v,
                    conductivity: e.conductivity,
                });
            }
            let (u, v) = e.key();
            match emap.get_mut(&(u, v)) {
                Some(existing) => {
                    if existing.role != e.role {
                        return Err(NetworkError::RoleConflict { u, v });
                    }
                    existing.conductivity = &existing.conductivity + &e.conductivity;
                }
                None => {
                    emap.insert(
                        (u, v),
                        Edge {
                            u,
                            v,
                            conductivity: e.conductivity,
                            role: e.role,
                        },
                    );
                }
            }
        }
        Ok(Network {
            vertices: vmap,
            edges: emap,
        })
    }

    pub fn vertices(&self) -> &BTreeMap<VertexId, VertexKind> {
        &self.vertices
    }

    pub fn kind(&self, v: VertexId) -> Option<VertexKind> {
        self.vertices.get(&v).copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.values()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, a: u32, b: u32) -> Option<&Edge> {
        self.edges.get(&ordered(VertexId(a), VertexId(b)))
    }

    pub fn conductivity(&self, a: u32, b: u32) -> Option<&Rational> {
        self.edge(a, b).map(|e| &e.conductivity)
    }

    pub fn boundary(&self) -> Vec<VertexId> {
        self.ids_of(VertexKind::Boundary)
    }

    pub fn interior(&self) -> Vec<VertexId> {
        self.ids_of(VertexKind::Interior)
    }

    fn ids_of(&self, kind: VertexKind) -> Vec<VertexId> {
        self.vertices
            .iter()
            .filter(|(_, k)| **k == kind)
            .map(|(id, _)| *id)
            .collect()
    }

    /// Boundary vertices ascending, then interior vertices ascending.
    pub fn vertex_order(&self) -> Vec<VertexId> {
        let mut order = self.boundary();
        order.extend(self.interior());
        order
    }

    pub fn degree(&self, v: u32) -> usize {
        let v = VertexId(v);
        self.edges.keys().filter(|(a, b)| *a == v || *b == v).count()
    }

    /// Returns a copy with the edge `a-b` set to `conductivity`.
    pub fn with_conductivity(&self, a: u32, b: u32, conductivity: Rational) -> Result<Network, NetworkError> {
        let key = ordered(VertexId(a), VertexId(b));
        let mut out = self.clone();
        let edge = out.edges.get_mut(&key).ok_or(NetworkError::MissingEdge { u: key.0, v: key.1 })?;
        if !conductivity.is_positive() {
            return Err(NetworkError::NonPositiveConductivity {
                u: key.0,
                v: key.1,
                conductivity,
            });
        }
        edge.conductivity = conductivity;
        Ok(out)
    }

    /// Returns a copy with extra edges merged in.
    pub fn with_edges(&self, extra: impl IntoIterator<Item = Edge>) -> Result<Network, NetworkError> {
        Network::build(
            self.vertices.iter().map(|(id, k)| (*id, *k)),
            self.edges.values().cloned().chain(extra),
        )
    }

    pub fn kirchhoff_matrix(&self) -> KirchhoffMatrix {
        let order = self.vertex_order();
        let index: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let n = order.len();
        let mut entries = vec![vec![Rational::zero(); n]; n];
        for e in self.edges.values() {
            let (i, j) = (index[&e.u], index[&e.v]);
            let g = &e.conductivity;
            entries[i][j] = &entries[i][j] - g;
            entries[j][i] = &entries[j][i] - g;
            entries[i][i] = &entries[i][i] + g;
            entries[j][j] = &entries[j][j] + g;
        }
        KirchhoffMatrix {
            order,
            boundary_len: self.boundary().len(),
            entries,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(NetworkDoc::from(self)).expect("network serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&NetworkDoc::from(self)).expect("network serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Network, NetworkError> {
        let doc: NetworkDoc = serde_json::from_str(s).map_err(|e| NetworkError::Json(e.to_string()))?;
        Network::build(
            doc.vertices.into_iter().map(|v| (v.id, v.kind)),
            doc.edges,
        )
    }
}

/// Weighted Laplacian indexed boundary-first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KirchhoffMatrix {
    pub order: Vec<VertexId>,
    pub boundary_len: usize,
    pub entries: Vec<Vec<Rational>>,
}

impl KirchhoffMatrix {
    pub fn dim(&self) -> usize {
        self.order.len()
    }

    pub fn get(&self, a: u32, b: u32) -> Option<&Rational> {
        let i = self.order.iter().position(|v| v.0 == a)?;
        let j = self.order.iter().position(|v| v.0 == b)?;
        Some(&self.entries[i][j])
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct VertexDoc {
    pub id: VertexId,
    pub kind: VertexKind,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct NetworkDoc {
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<Edge>,
}

impl From<&Network> for NetworkDoc {
    fn from(n: &Network) -> Self {
        NetworkDoc {
            vertices: n
                .vertices
                .iter()
                .map(|(id, kind)| VertexDoc { id: *id, kind: *kind })
                .collect(),
            edges: n.edges.values().cloned().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn b(id: u32) -> (VertexId, VertexKind) {
        (VertexId(id), VertexKind::Boundary)
    }

    fn i(id: u32) -> (VertexId, VertexKind) {
        (VertexId(id), VertexKind::Interior)
    }

    #[test]
    fn single_edge() {
        let n = Network::build([b(1), b(2)], [Edge::star(1, 2, 1.into())]).unwrap();
        assert_eq!(n.edge_count(), 1);
        let k = n.kirchhoff_matrix();
        assert_eq!(
            k.entries,
            vec![vec![Rational::one(), Rational::integer(-1)], vec![Rational::integer(-1), Rational::one()]]
        );
    }

    #[test]
    fn path_diagonal() {
        let n = Network::build(
            [b(1), i(2), b(3)],
            [Edge::star(1, 2, 1.into()), Edge::star(2, 3, 1.into())],
        )
        .unwrap();
        let k = n.kirchhoff_matrix();
        assert_eq!(k.order, vec![VertexId(1), VertexId(3), VertexId(2)]);
        let diag: Vec<_> = (0..3).map(|d| k.entries[d][d].clone()).collect();
        assert_eq!(diag, vec![Rational::one(), Rational::one(), Rational::integer(2)]);
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            Network::build([b(1), b(2)], [Edge::star(1, 2, Rational::zero())]),
            Err(NetworkError::NonPositiveConductivity { .. })
        ));
        assert!(matches!(
            Network::build([b(1), b(2)], [Edge::star(1, 2, q(-1, 2))]),
            Err(NetworkError::NonPositiveConductivity { .. })
        ));
        assert!(matches!(
            Network::build([b(1)], [Edge::star(1, 1, 1.into())]),
            Err(NetworkError::SelfLoop(_))
        ));
        assert!(matches!(
            Network::build([b(1)], [Edge::star(1, 5, 1.into())]),
            Err(NetworkError::UnknownEndpoint { missing: VertexId(5), .. })
        ));
        assert!(matches!(
            Network::build([i(1), i(2)], [Edge::star(1, 2, 1.into())]),
            Err(NetworkError::NoBoundary)
        ));
        assert!(matches!(Network::build([b(1), b(1)], []), Err(NetworkError::DuplicateVertex(_))));
    }

    #[test]
    fn parallel_edges_merge() {
        let n = Network::build(
            [b(1), b(2)],
            [Edge::star(1, 2, 1.into()), Edge::star(2, 1, 2.into())],
        )
        .unwrap();
        assert_eq!(n.edge_count(), 1);
        assert_eq!(n.conductivity(1, 2), Some(&Rational::integer(3)));
        assert!(matches!(
            Network::build(
                [b(1), b(2)],
                [Edge::star(1, 2, 1.into()), Edge::new(1, 2, 1.into(), EdgeRole::Auxiliary)],
            ),
            Err(NetworkError::RoleConflict { .. })
        ));
    }

    #[test]
    fn json_schema_shape() {
        let n = Network::build([i(1), b(2)], [Edge::star(2, 1, q(53, 5))]).unwrap();
        let s = serde_json::to_string(&n.to_json()).unwrap();
        assert_eq!(
            s,
            r#"{"vertices":[{"id":1,"kind":"interior"},{"id":2,"kind":"boundary"}],"edges":[{"u":1,"v":2,"conductivity":"53/5","role":"star"}]}"#
        );
        assert_eq!(Network::from_json_str(&s).unwrap(), n);
        assert!(Network::from_json_str(r#"{"vertices":[]}"#).is_err());
    }

    #[test]
    fn with_conductivity_replaces() {
        let n = Network::build([b(1), b(2)], [Edge::star(1, 2, 1.into())]).unwrap();
        let m = n.with_conductivity(2, 1, q(85, 18)).unwrap();
        assert_eq!(m.conductivity(1, 2), Some(&q(85, 18)));
        assert!(n.with_conductivity(1, 3, 1.into()).is_err());
        assert!(n.with_conductivity(1, 2, Rational::zero()).is_err());
    }
}
