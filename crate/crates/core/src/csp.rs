//! Constraint graphs, assignments and reconfiguration sequences.
//!
//! A [`ConstraintGraph`] is a `q`-uniform hypergraph whose hyperedges each carry an
//! explicit set of acceptable value tuples. Vertices are opaque string ids kept in
//! declaration order; assignments are dense vectors indexed by that order.
//!
//! Values are exact `satisfied / total` pairs. Nothing here ever goes through floating
//! point.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub type Symbol = u32;

/// One hyperedge together with its acceptable tuples.
///
/// Tuples are stored as sorted mixed-radix codes: coordinate `i` has weight equal to the
/// product of the alphabet sizes of coordinates `0..i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperedge {
    vertices: Vec<usize>,
    radices: Vec<u64>,
    accepted: Vec<u64>,
}

impl Hyperedge {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn accepted_count(&self) -> usize {
        self.accepted.len()
    }

    fn code<I: IntoIterator<Item = Symbol>>(&self, tuple: I) -> u64 {
        tuple
            .into_iter()
            .zip(&self.radices)
            .map(|(s, r)| s as u64 * r)
            .sum()
    }

    /// Whether the tuple read off `values` (indexed by vertex) is acceptable.
    #[inline]
    pub fn is_satisfied_by(&self, values: &[Symbol]) -> bool {
        let code = self.code(self.vertices.iter().map(|&v| values[v]));
        self.accepted.binary_search(&code).is_ok()
    }

    pub fn accepts(&self, tuple: &[Symbol]) -> bool {
        tuple.len() == self.vertices.len()
            && self
                .accepted
                .binary_search(&self.code(tuple.iter().copied()))
                .is_ok()
    }

    /// Acceptable tuples in ascending code order.
    pub fn accepted_tuples(&self) -> impl Iterator<Item = Vec<Symbol>> + '_ {
        let q = self.vertices.len();
        self.accepted.iter().map(move |&code| {
            let mut t = vec![0; q];
            let mut rest = code;
            for i in (0..q).rev() {
                t[i] = (rest / self.radices[i]) as Symbol;
                rest %= self.radices[i];
            }
            t
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintGraph {
    arity: usize,
    alphabet: u32,
    ids: Vec<String>,
    overrides: Vec<Option<u32>>,
    index: HashMap<String, usize>,
    edges: Vec<Hyperedge>,
}

impl ConstraintGraph {
    pub fn new(arity: usize, alphabet: u32) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidArgument("arity must be positive".into()));
        }
        if alphabet == 0 {
            return Err(Error::EmptyAlphabet);
        }
        Ok(Self {
            arity,
            alphabet,
            ids: Vec::new(),
            overrides: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// The default alphabet size.
    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.ids
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn alphabet_override(&self, v: usize) -> Option<u32> {
        self.overrides[v]
    }

    pub fn alphabet_of(&self, v: usize) -> u32 {
        self.overrides[v].unwrap_or(self.alphabet)
    }

    pub fn max_alphabet(&self) -> u32 {
        (0..self.vertex_count())
            .map(|v| self.alphabet_of(v))
            .max()
            .unwrap_or(self.alphabet)
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Hyperedge {
        &self.edges[e]
    }

    pub fn add_vertex(&mut self, id: impl Into<String>) -> Result<usize> {
        self.push_vertex(id.into(), None)
    }

    pub fn add_vertex_with_alphabet(
        &mut self,
        id: impl Into<String>,
        alphabet: u32,
    ) -> Result<usize> {
        if alphabet == 0 {
            return Err(Error::EmptyAlphabet);
        }
        self.push_vertex(id.into(), Some(alphabet))
    }

    fn push_vertex(&mut self, id: String, alphabet: Option<u32>) -> Result<usize> {
        if !is_valid_id(&id) {
            return Err(Error::InvalidArgument(format!("invalid vertex id `{id}`")));
        }
        if self.index.contains_key(&id) {
            return Err(Error::DuplicateVertex(id));
        }
        let v = self.ids.len();
        self.index.insert(id.clone(), v);
        self.ids.push(id);
        self.overrides.push(alphabet);
        Ok(v)
    }

    fn radices_for(&self, vertices: &[usize]) -> Result<(Vec<u64>, u128)> {
        if vertices.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: vertices.len(),
            });
        }
        let mut radices = Vec::with_capacity(vertices.len());
        let mut acc: u128 = 1;
        for &v in vertices {
            if v >= self.vertex_count() {
                return Err(Error::VertexIndexOutOfRange(v));
            }
            radices.push(acc as u64);
            acc *= self.alphabet_of(v) as u128;
            if acc > u64::MAX as u128 {
                return Err(Error::ConstraintTooLarge(format!(
                    "tuple space of hyperedge over {} vertices exceeds 2^64",
                    vertices.len()
                )));
            }
        }
        Ok((radices, acc))
    }

    /// Adds a hyperedge with an explicit list of acceptable tuples. Duplicate tuples are
    /// merged; duplicate hyperedges are kept.
    pub fn add_edge<T: AsRef<[Symbol]>>(
        &mut self,
        vertices: &[usize],
        accepted: impl IntoIterator<Item = T>,
    ) -> Result<usize> {
        let (radices, _) = self.radices_for(vertices)?;
        let mut codes = Vec::new();
        for tuple in accepted {
            let tuple = tuple.as_ref();
            if tuple.len() != self.arity {
                return Err(Error::ArityMismatch {
                    expected: self.arity,
                    got: tuple.len(),
                });
            }
            let mut code = 0u64;
            for ((&s, &v), &r) in tuple.iter().zip(vertices).zip(&radices) {
                let w = self.alphabet_of(v);
                if s >= w {
                    return Err(Error::SymbolOutOfRange {
                        vertex: self.ids[v].clone(),
                        symbol: s,
                        alphabet: w,
                    });
                }
                code += s as u64 * r;
            }
            codes.push(code);
        }
        codes.sort_unstable();
        codes.dedup();
        self.edges.push(Hyperedge {
            vertices: vertices.to_vec(),
            radices,
            accepted: codes,
        });
        Ok(self.edges.len() - 1)
    }

    /// Adds a hyperedge whose acceptable tuples are those of the full tuple space for
    /// which `accept` returns true. `limit` bounds the tuple space that may be scanned.
    pub fn add_edge_with(
        &mut self,
        vertices: &[usize],
        limit: u64,
        mut accept: impl FnMut(&[Symbol]) -> bool,
    ) -> Result<usize> {
        let (radices, space) = self.radices_for(vertices)?;
        if space > limit as u128 {
            return Err(Error::ConstraintTooLarge(format!(
                "tuple space {space} exceeds scan limit {limit}"
            )));
        }
        let sizes: Vec<u32> = vertices.iter().map(|&v| self.alphabet_of(v)).collect();
        let mut tuple = vec![0 as Symbol; vertices.len()];
        let mut codes = Vec::new();
        for code in 0..space as u64 {
            if accept(&tuple) {
                codes.push(code);
            }
            // little-endian odometer, matching the code weights
            for (t, &w) in tuple.iter_mut().zip(&sizes) {
                *t += 1;
                if *t < w {
                    break;
                }
                *t = 0;
            }
        }
        self.edges.push(Hyperedge {
            vertices: vertices.to_vec(),
            radices,
            accepted: codes,
        });
        Ok(self.edges.len() - 1)
    }

    /// Appends a copy of hyperedge `e` and returns the new index.
    pub fn duplicate_edge(&mut self, e: usize) -> usize {
        self.edges.push(self.edges[e].clone());
        self.edges.len() - 1
    }

    /// Checks that `psi` is total and in range.
    pub fn check_assignment(&self, psi: &Assignment) -> Result<()> {
        if psi.len() != self.vertex_count() {
            return Err(Error::IncompleteAssignment {
                expected: self.vertex_count(),
                got: psi.len(),
            });
        }
        for (v, &s) in psi.values().iter().enumerate() {
            let w = self.alphabet_of(v);
            if s >= w {
                return Err(Error::SymbolOutOfRange {
                    vertex: self.ids[v].clone(),
                    symbol: s,
                    alphabet: w,
                });
            }
        }
        Ok(())
    }

    /// Number of satisfied hyperedges; `psi` must already be checked.
    pub fn satisfied_count(&self, values: &[Symbol]) -> u64 {
        self.edges
            .iter()
            .filter(|e| e.is_satisfied_by(values))
            .count() as u64
    }

    /// `incidence()[v]` lists the hyperedges touching `v`, each once.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertex_count()];
        for (e, edge) in self.edges.iter().enumerate() {
            for &v in &edge.vertices {
                if inc[v].last() != Some(&e) {
                    inc[v].push(e);
                }
            }
        }
        inc
    }

    /// Product of all vertex alphabet sizes.
    pub fn configuration_count(&self) -> u128 {
        (0..self.vertex_count()).fold(1u128, |acc, v| {
            acc.saturating_mul(self.alphabet_of(v) as u128)
        })
    }
}

/// Vertex ids are non-empty and free of whitespace, `=`, `#`, `:` and `;`, so they
/// survive the text formats unchanged.
pub fn is_valid_id(id: &str) -> bool {
    !id.is_empty()
        && !id
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '=' | '#' | ':' | ';'))
}

/// A total map from vertices to symbols, indexed by declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(Vec<Symbol>);

impl Assignment {
    pub fn new(values: Vec<Symbol>) -> Self {
        Self(values)
    }

    /// Builds an assignment from `(vertex id, symbol)` pairs; every vertex must appear.
    pub fn from_pairs<'a>(
        graph: &ConstraintGraph,
        pairs: impl IntoIterator<Item = (&'a str, Symbol)>,
    ) -> Result<Self> {
        let mut values = vec![None; graph.vertex_count()];
        for (id, s) in pairs {
            let v = graph
                .vertex_index(id)
                .ok_or_else(|| Error::UnknownVertex(id.to_string()))?;
            values[v] = Some(s);
        }
        let got = values.iter().filter(|s| s.is_some()).count();
        if got != values.len() {
            return Err(Error::IncompleteAssignment {
                expected: values.len(),
                got,
            });
        }
        let psi = Self(values.into_iter().map(Option::unwrap).collect());
        graph.check_assignment(&psi)?;
        Ok(psi)
    }

    pub fn values(&self) -> &[Symbol] {
        &self.0
    }

    pub fn values_mut(&mut self) -> &mut [Symbol] {
        &mut self.0
    }

    pub fn get(&self, v: usize) -> Symbol {
        self.0[v]
    }

    pub fn set(&mut self, v: usize, s: Symbol) {
        self.0[v] = s;
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of vertices on which the two assignments differ.
    pub fn difference(&self, other: &Assignment) -> usize {
        let tail = self.0.len().abs_diff(other.0.len());
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count() + tail
    }

    pub fn into_values(self) -> Vec<Symbol> {
        self.0
    }
}

/// Exact fraction of satisfied hyperedges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Value {
    pub satisfied: u64,
    pub total: u64,
}

impl Value {
    pub fn new(satisfied: u64, total: u64) -> Self {
        debug_assert!(total > 0 && satisfied <= total);
        Self { satisfied, total }
    }

    pub fn is_one(&self) -> bool {
        self.satisfied == self.total
    }

    pub fn violated(&self) -> u64 {
        self.total - self.satisfied
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.satisfied as u128 * other.total as u128)
            .cmp(&(other.satisfied as u128 * self.total as u128))
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.satisfied, self.total)
    }
}

/// A non-empty list of assignments. Adjacency is checked by [`validate_sequence`]
/// and [`sequence_value`], not on construction, so broken sequences can be diagnosed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconfigSequence {
    steps: Vec<Assignment>,
}

impl ReconfigSequence {
    pub fn new(steps: Vec<Assignment>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Self { steps })
    }

    pub fn single(psi: Assignment) -> Self {
        Self { steps: vec![psi] }
    }

    pub fn steps(&self) -> &[Assignment] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> &Assignment {
        &self.steps[0]
    }

    pub fn last(&self) -> &Assignment {
        &self.steps[self.steps.len() - 1]
    }

    /// Appends a step, skipping it if equal to the current last step.
    pub fn push_dedup(&mut self, psi: Assignment) {
        if self.last() != &psi {
            self.steps.push(psi);
        }
    }

    pub fn reversed(&self) -> Self {
        let mut steps = self.steps.clone();
        steps.reverse();
        Self { steps }
    }

    /// Joins `other` onto `self`; `other` must start where `self` ends.
    pub fn concat(&self, other: &ReconfigSequence) -> Result<Self> {
        if self.last() != other.first() {
            return Err(Error::EndpointMismatch("concatenation point differs"));
        }
        let mut steps = self.steps.clone();
        steps.extend(other.steps[1..].iter().cloned());
        Ok(Self { steps })
    }

    pub fn into_steps(self) -> Vec<Assignment> {
        self.steps
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconfInstance {
    pub graph: ConstraintGraph,
    pub psi_ini: Assignment,
    pub psi_tar: Assignment,
}

impl ReconfInstance {
    pub fn new(graph: ConstraintGraph, psi_ini: Assignment, psi_tar: Assignment) -> Result<Self> {
        graph.check_assignment(&psi_ini)?;
        graph.check_assignment(&psi_tar)?;
        Ok(Self {
            graph,
            psi_ini,
            psi_tar,
        })
    }

    pub fn swapped(&self) -> Self {
        Self {
            graph: self.graph.clone(),
            psi_ini: self.psi_tar.clone(),
            psi_tar: self.psi_ini.clone(),
        }
    }

    pub fn endpoints_satisfy(&self) -> bool {
        let e = self.graph.edge_count() as u64;
        self.graph.satisfied_count(self.psi_ini.values()) == e
            && self.graph.satisfied_count(self.psi_tar.values()) == e
    }
}

pub fn value(graph: &ConstraintGraph, psi: &Assignment) -> Result<Value> {
    graph.check_assignment(psi)?;
    if graph.edge_count() == 0 {
        return Err(Error::NoConstraints);
    }
    Ok(Value::new(
        graph.satisfied_count(psi.values()),
        graph.edge_count() as u64,
    ))
}

/// Indices `t` such that steps `t` and `t + 1` differ in more than one vertex.
pub fn validate_sequence(steps: &[Assignment]) -> Vec<usize> {
    steps
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0].difference(&w[1]) > 1)
        .map(|(t, _)| t)
        .collect()
}

/// Minimum value over the steps of a valid sequence.
pub fn sequence_value(graph: &ConstraintGraph, seq: &ReconfigSequence) -> Result<Value> {
    if let Some(w) = seq
        .steps()
        .windows(2)
        .enumerate()
        .find(|(_, w)| w[0].difference(&w[1]) > 1)
    {
        return Err(Error::InvalidStep {
            index: w.0,
            changed: w.1[0].difference(&w.1[1]),
        });
    }
    let mut best: Option<Value> = None;
    for psi in seq.steps() {
        let v = value(graph, psi)?;
        best = Some(match best {
            Some(b) if b <= v => b,
            _ => v,
        });
    }
    Ok(best.expect("sequence is non-empty"))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn triangle() -> ConstraintGraph {
        let mut g = ConstraintGraph::new(2, 2).unwrap();
        let v: Vec<usize> = ["v0", "v1", "v2"]
            .iter()
            .map(|id| g.add_vertex(*id).unwrap())
            .collect();
        let eq = [[0, 0], [1, 1]];
        g.add_edge(&[v[0], v[1]], eq).unwrap();
        g.add_edge(&[v[1], v[2]], eq).unwrap();
        g.add_edge(&[v[0], v[2]], eq).unwrap();
        g
    }

    #[test]
    fn single_edge_value() {
        let mut g = ConstraintGraph::new(2, 2).unwrap();
        let u = g.add_vertex("u").unwrap();
        let v = g.add_vertex("v").unwrap();
        g.add_edge(&[u, v], [[0, 0]]).unwrap();
        assert_eq!(
            value(&g, &Assignment::new(vec![0, 0])).unwrap(),
            Value::new(1, 1)
        );
    }

    #[test]
    fn triangle_value_one_third() {
        let g = triangle();
        let v = value(&g, &Assignment::new(vec![0, 0, 1])).unwrap();
        assert_eq!((v.satisfied, v.total), (1, 3));
    }

    #[test]
    fn vacuous_constraints() {
        let mut g = ConstraintGraph::new(2, 3).unwrap();
        let a = g.add_vertex("a").unwrap();
        let b = g.add_vertex("b").unwrap();
        g.add_edge_with(&[a, b], 1 << 10, |_| true).unwrap();
        g.add_edge_with(&[b, a], 1 << 10, |_| true).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                let v = value(&g, &Assignment::new(vec![x, y])).unwrap();
                assert!(v.is_one());
            }
        }
    }

    #[test]
    fn value_errors() {
        let g = triangle();
        assert_eq!(
            value(&g, &Assignment::new(vec![0, 0])),
            Err(Error::IncompleteAssignment {
                expected: 3,
                got: 2
            })
        );
        let mut empty = ConstraintGraph::new(2, 2).unwrap();
        empty.add_vertex("a").unwrap();
        assert_eq!(
            value(&empty, &Assignment::new(vec![0])),
            Err(Error::NoConstraints)
        );
        assert!(matches!(
            value(&g, &Assignment::new(vec![0, 2, 0])),
            Err(Error::SymbolOutOfRange { symbol: 2, .. })
        ));
    }

    #[test]
    fn sequence_values() {
        let g = triangle();
        let a = |v: [u32; 3]| Assignment::new(v.to_vec());
        let seq =
            ReconfigSequence::new(vec![a([0, 0, 0]), a([1, 0, 0]), a([1, 1, 0]), a([1, 1, 1])])
                .unwrap();
        assert_eq!(sequence_value(&g, &seq).unwrap(), Value::new(1, 3));
        assert_eq!(
            sequence_value(&g, &ReconfigSequence::single(a([1, 1, 1]))).unwrap(),
            Value::new(3, 3)
        );
        let twice = ReconfigSequence::new(vec![a([0, 0, 1]), a([0, 0, 1])]).unwrap();
        assert_eq!(sequence_value(&g, &twice).unwrap(), Value::new(1, 3));
        let bad = ReconfigSequence::new(vec![a([0, 0, 0]), a([0, 0, 0]), a([1, 1, 0])]).unwrap();
        assert_eq!(
            sequence_value(&g, &bad),
            Err(Error::InvalidStep {
                index: 1,
                changed: 2
            })
        );
    }

    #[test]
    fn validate_sequence_examples() {
        let a = |v: [u32; 2]| Assignment::new(v.to_vec());
        assert!(validate_sequence(&[a([0, 0]), a([0, 1]), a([1, 1])]).is_empty());
        assert_eq!(validate_sequence(&[a([0, 0]), a([1, 1])]), vec![0]);
        assert!(validate_sequence(&[a([0, 0])]).is_empty());
    }

    #[test]
    fn value_ordering_is_exact() {
        assert!(Value::new(1, 3) < Value::new(2, 5));
        assert_eq!(Value::new(2, 4).cmp(&Value::new(1, 2)), Ordering::Equal);
        let tiny = Value::new(u64::MAX - 1, u64::MAX);
        assert!(tiny < Value::new(1, 1));
    }

    #[test]
    fn accepted_tuples_round_trip() {
        let mut g = ConstraintGraph::new(3, 2).unwrap();
        let a = g.add_vertex("a").unwrap();
        let b = g.add_vertex_with_alphabet("b", 5).unwrap();
        let c = g.add_vertex("c").unwrap();
        let tuples = vec![vec![1, 4, 0], vec![0, 2, 1], vec![1, 0, 1]];
        g.add_edge(&[a, b, c], &tuples).unwrap();
        let mut got: Vec<_> = g.edge(0).accepted_tuples().collect();
        got.sort();
        let mut want = tuples.clone();
        want.sort();
        assert_eq!(got, want);
        assert!(g.edge(0).accepts(&[0, 2, 1]));
        assert!(!g.edge(0).accepts(&[0, 2, 0]));
    }
}
