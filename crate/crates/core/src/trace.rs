//! Provenance records linking the vertices and edges of a reduced instance to the
//! instance they were produced from.
//!
//! Text form:
//!
//! ```text
//! reduction-trace v1
//! stage composed
//! vertex u.0 block u 0
//! vertex e0.1.y0 aux 0 1 0
//! edge twins 0 0 2
//! edge twins 0 1 0 padding
//! ```

use std::collections::HashMap;

/// Where a vertex of a reduced instance came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VertexOrigin {
    /// Copy of a vertex of the previous stage.
    Source { vertex: String },
    /// One bit of the codeword block of a previous-stage vertex.
    Block { vertex: String, position: usize },
    /// Auxiliary variable `aux` of twin `twin` (1 or 2) of the tester run for `edge`.
    Aux { edge: usize, twin: u8, aux: usize },
    /// Fresh vertex standing for hyperedge `edge` of the previous stage.
    Hyperedge { edge: usize },
    /// Product of twin edges `first` and `second` of the tester run for `source_edge`.
    TwinPair {
        source_edge: usize,
        first: usize,
        second: usize,
    },
}

/// Where an edge of a reduced instance came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeOrigin {
    /// Product of tester edges `first` (twin 1) and `second` (twin 2) for `source_edge`.
    /// `padding` marks a duplicate added to equalize per-edge counts.
    Twins {
        source_edge: usize,
        first: usize,
        second: usize,
        padding: bool,
    },
    /// Consistency check between the vertex of `hyperedge` and its `coordinate`-th endpoint.
    Consistency { hyperedge: usize, coordinate: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub stage: String,
    /// Factor by which a soundness gap may shrink across this stage.
    pub soundness_loss: Option<u32>,
    /// One entry per vertex of the reduced instance, in its declaration order.
    pub vertices: Vec<(String, VertexOrigin)>,
    /// One entry per edge of the reduced instance, in its declaration order.
    pub edges: Vec<EdgeOrigin>,
}

impl ReductionTrace {
    pub fn new(stage: impl Into<String>) -> Self {
        ReductionTrace {
            stage: stage.into(),
            soundness_loss: None,
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn origin_of(&self, id: &str) -> Option<&VertexOrigin> {
        self.vertices.iter().find(|(v, _)| v == id).map(|(_, o)| o)
    }

    pub fn origin_map(&self) -> HashMap<&str, &VertexOrigin> {
        self.vertices.iter().map(|(v, o)| (v.as_str(), o)).collect()
    }

    /// Number of edges produced for each source edge (padding included).
    pub fn edges_per_source(&self) -> HashMap<usize, usize> {
        let mut counts = HashMap::new();
        for e in &self.edges {
            if let EdgeOrigin::Twins { source_edge, .. } = e {
                *counts.entry(*source_edge).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Checks that the trace covers exactly the given vertex ids in order.
    pub fn covers(&self, ids: &[String]) -> bool {
        self.vertices.len() == ids.len()
            && self.vertices.iter().zip(ids).all(|((v, _), id)| v == id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{parse_trace, write_trace};

    #[test]
    fn round_trip() {
        let mut t = ReductionTrace::new("composed");
        t.soundness_loss = Some(4);
        t.vertices.push((
            "u.0".into(),
            VertexOrigin::Block {
                vertex: "u".into(),
                position: 0,
            },
        ));
        t.vertices.push((
            "y".into(),
            VertexOrigin::Aux {
                edge: 0,
                twin: 2,
                aux: 0,
            },
        ));
        t.vertices
            .push(("h".into(), VertexOrigin::Hyperedge { edge: 3 }));
        t.vertices
            .push(("s".into(), VertexOrigin::Source { vertex: "u".into() }));
        t.edges.push(EdgeOrigin::Twins {
            source_edge: 0,
            first: 1,
            second: 2,
            padding: true,
        });
        t.edges.push(EdgeOrigin::Consistency {
            hyperedge: 3,
            coordinate: 1,
        });
        let text = write_trace(&t);
        assert_eq!(parse_trace(&text).unwrap(), t);
        assert_eq!(t.edges_per_source()[&0], 1);
        assert!(matches!(
            t.origin_of("h"),
            Some(VertexOrigin::Hyperedge { edge: 3 })
        ));
    }
}
