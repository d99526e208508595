//! Assignment testers, twin superimposition and arity reduction.
//!
//! An assignment tester turns a circuit, given by its satisfying inputs, into a binary
//! constraint graph over the input bits plus auxiliary variables. Running a tester twice
//! on the same circuit and taking the product of the two edge sets yields 4-ary
//! constraints `(a₁, b₁, a₂, b₂)` that accept when either twin edge accepts, so a
//! product edge is violated exactly when both twin edges are.
//!
//! Arity reduction replaces each 4-ary hyperedge `h` by a fresh vertex whose value picks
//! a nonempty set of at most two symbols for every coordinate, and four binary edges
//! that accept when the endpoint's symbol lies in its set. Only value codes whose
//! product of sets lies inside the constraint of `h` are kept.

use std::collections::HashMap;

use num_rational::Ratio;

use crate::csp::{Assignment, ConstraintGraph, ReconfInstance, ReconfigSequence, Symbol};
use crate::error::{Error, Result};
use crate::robustize::{BitFlip, CircuitSystem, MicroOracle, SigmaSequence};
use crate::trace::{EdgeOrigin, ReductionTrace, VertexOrigin};

/// Largest circuit input width accepted by the reference tester.
pub const MAX_TESTER_BITS: usize = 16;

/// Default cap on value codes per hyperedge in [`arity_reduce`].
pub const DEFAULT_CODE_LIMIT: u64 = 1 << 16;

/// Tuple-space scan limit for superimposed hyperedges.
const PRODUCT_SCAN_LIMIT: u64 = 1 << 26;

/// Binary constraint graph produced by a tester for one circuit. Input bit `i` is graph
/// vertex `inputs[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TesterOutput {
    pub graph: ConstraintGraph,
    pub inputs: Vec<usize>,
    pub aux: Vec<usize>,
    /// Claimed rejection rate `ρ`.
    pub rejection_rate: Ratio<u64>,
    sat: Vec<u64>,
    witnesses: Vec<Vec<Symbol>>,
}

impl TesterOutput {
    /// Auxiliary values completing a satisfying input, packed with bit `i` at position `i`.
    pub fn witness(&self, input: u64) -> Option<&[Symbol]> {
        self.sat
            .binary_search(&input)
            .ok()
            .map(|k| self.witnesses[k].as_slice())
    }

    pub fn input_bits(&self) -> usize {
        self.inputs.len()
    }

    pub fn sat_set(&self) -> &[u64] {
        &self.sat
    }

    /// Full assignment from packed input bits and auxiliary values.
    pub fn assignment(&self, input: u64, aux: &[Symbol]) -> Assignment {
        let mut values = vec![0; self.graph.vertex_count()];
        for (i, &v) in self.inputs.iter().enumerate() {
            values[v] = (input >> i & 1) as Symbol;
        }
        for (&v, &a) in self.aux.iter().zip(aux) {
            values[v] = a;
        }
        Assignment::new(values)
    }
}

pub trait AssignmentTester {
    /// Builds the tester graph for the circuit over `m` input bits whose satisfying
    /// inputs are `sat`.
    fn test(&self, m: usize, sat: &[u64]) -> Result<TesterOutput>;
}

/// One auxiliary variable naming a satisfying input, and one edge per input bit that
/// checks that bit against the named input. Any `σ` at Hamming distance `d` from the
/// satisfying set violates at least `d` of the `m` edges, so the rejection rate is 1.
#[derive(Clone, Copy, Debug, Default)]
pub struct ReferenceTester;

impl AssignmentTester for ReferenceTester {
    fn test(&self, m: usize, sat: &[u64]) -> Result<TesterOutput> {
        if m == 0 || m > MAX_TESTER_BITS {
            return Err(Error::InvalidArgument(format!(
                "tester input width {m} outside 1..={MAX_TESTER_BITS}"
            )));
        }
        let mut sat = sat.to_vec();
        sat.sort_unstable();
        sat.dedup();
        if sat.is_empty() {
            return Err(Error::UnsatisfiableCircuit);
        }
        if sat.iter().any(|&s| s >> m != 0) {
            return Err(Error::InvalidArgument(format!(
                "satisfying input wider than {m} bits"
            )));
        }
        let mut graph = ConstraintGraph::new(2, 2)?;
        let inputs = (0..m)
            .map(|i| graph.add_vertex(format!("x{i}")))
            .collect::<Result<Vec<_>>>()?;
        let y = graph.add_vertex_with_alphabet("y", sat.len() as u32)?;
        for (i, &x) in inputs.iter().enumerate() {
            let pairs: Vec<[Symbol; 2]> = sat
                .iter()
                .enumerate()
                .map(|(k, &s)| [k as Symbol, (s >> i & 1) as Symbol])
                .collect();
            graph.add_edge(&[y, x], &pairs)?;
        }
        Ok(TesterOutput {
            graph,
            inputs,
            aux: vec![y],
            rejection_rate: Ratio::from_integer(1),
            witnesses: (0..sat.len()).map(|k| vec![k as Symbol]).collect(),
            sat,
        })
    }
}

/// Product of two tester graphs over shared inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperimposedGraph {
    /// 4-ary graph over the inputs, then the auxiliary variables of twin 1, then twin 2.
    pub graph: ConstraintGraph,
    pub inputs: Vec<usize>,
    pub aux1: Vec<usize>,
    pub aux2: Vec<usize>,
    /// `(first, second)` twin edge indices of every hyperedge.
    pub pairs: Vec<(usize, usize)>,
}

/// Maps the vertices of a tester graph into a host graph and returns the local-to-host
/// vertex map.
fn embed_vertices(
    host: &mut ConstraintGraph,
    twin: &TesterOutput,
    inputs: &[usize],
    aux_id: impl Fn(usize) -> String,
) -> Result<Vec<usize>> {
    let mut map = vec![usize::MAX; twin.graph.vertex_count()];
    for (&local, &global) in twin.inputs.iter().zip(inputs) {
        map[local] = global;
    }
    for (k, &a) in twin.aux.iter().enumerate() {
        map[a] = host.add_vertex_with_alphabet(aux_id(k), twin.graph.alphabet_of(a))?;
    }
    if map.contains(&usize::MAX) {
        return Err(Error::InvalidArgument(
            "tester vertex is neither input nor auxiliary".into(),
        ));
    }
    Ok(map)
}

/// Adds the product hyperedges of two embedded twins to `host`.
fn add_products(
    host: &mut ConstraintGraph,
    twin1: &TesterOutput,
    map1: &[usize],
    twin2: &TesterOutput,
    map2: &[usize],
) -> Result<Vec<(usize, usize)>> {
    let (e1, e2) = (twin1.graph.edges(), twin2.graph.edges());
    if e1.is_empty() || e2.is_empty() {
        return Err(Error::InvalidArgument("twin edge set is empty".into()));
    }
    let mut pairs = Vec::with_capacity(e1.len() * e2.len());
    for (i, a) in e1.iter().enumerate() {
        for (j, b) in e2.iter().enumerate() {
            let verts = [
                map1[a.vertices()[0]],
                map1[a.vertices()[1]],
                map2[b.vertices()[0]],
                map2[b.vertices()[1]],
            ];
            host.add_edge_with(&verts, PRODUCT_SCAN_LIMIT, |t| {
                a.accepts(&t[..2]) || b.accepts(&t[2..])
            })?;
            pairs.push((i, j));
        }
    }
    Ok(pairs)
}

pub fn superimpose(twin1: &TesterOutput, twin2: &TesterOutput) -> Result<SuperimposedGraph> {
    if twin1.inputs.len() != twin2.inputs.len() {
        return Err(Error::LengthMismatch {
            left: twin1.inputs.len(),
            right: twin2.inputs.len(),
        });
    }
    for t in [twin1, twin2] {
        if t.graph.arity() != 2 {
            return Err(Error::ArityMismatch {
                expected: 2,
                got: t.graph.arity(),
            });
        }
    }
    let mut graph = ConstraintGraph::new(4, 2)?;
    let inputs = (0..twin1.inputs.len())
        .map(|i| graph.add_vertex(format!("x{i}")))
        .collect::<Result<Vec<_>>>()?;
    let map1 = embed_vertices(&mut graph, twin1, &inputs, |k| format!("y1.{k}"))?;
    let map2 = embed_vertices(&mut graph, twin2, &inputs, |k| format!("y2.{k}"))?;
    let pairs = add_products(&mut graph, twin1, &map1, twin2, &map2)?;
    Ok(SuperimposedGraph {
        graph,
        aux1: twin1.aux.iter().map(|&a| map1[a]).collect(),
        aux2: twin2.aux.iter().map(|&a| map2[a]).collect(),
        inputs,
        pairs,
    })
}

/// Per source edge, the tester run and the composed vertex indices of its twins.
#[derive(Clone, Debug)]
pub struct ComposedEdge {
    pub tester: TesterOutput,
    /// Composed vertex of every tester input bit.
    pub inputs: Vec<usize>,
    pub aux1: Vec<usize>,
    pub aux2: Vec<usize>,
}

/// A 4-ary instance built from a circuit system, with what is needed to move between
/// block assignments and composed assignments.
#[derive(Clone, Debug)]
pub struct ComposedSystem {
    pub instance: ReconfInstance,
    pub trace: ReductionTrace,
    pub n: u32,
    /// `bits[v][x]` is the composed vertex of bit `x` of the block of source vertex `v`.
    pub bits: Vec<Vec<usize>>,
    pub edges: Vec<ComposedEdge>,
}

/// Composes every circuit of a system with two runs of `tester`. Needs `n ≤ 3` so
/// satisfying sets can be enumerated.
pub fn compose_system(
    system: &CircuitSystem,
    tester: &dyn AssignmentTester,
) -> Result<ComposedSystem> {
    let src = system.graph();
    let n = system.n;
    let len = 1usize << n;
    let mut graph = ConstraintGraph::new(4, 2)?;
    let mut trace = ReductionTrace::new("composed");
    let mut bits = Vec::with_capacity(src.vertex_count());
    for v in 0..src.vertex_count() {
        let mut row = Vec::with_capacity(len);
        for x in 0..len {
            let id = format!("{}.{x}", src.vertex_id(v));
            row.push(graph.add_vertex(id.clone())?);
            trace.vertices.push((
                id,
                VertexOrigin::Block {
                    vertex: src.vertex_id(v).to_string(),
                    position: x,
                },
            ));
        }
        bits.push(row);
    }
    let mut edges = Vec::with_capacity(system.circuits.len());
    let mut per_edge: Vec<Vec<usize>> = Vec::new();
    for (k, c) in system.circuits.iter().enumerate() {
        let oracle = MicroOracle::new(c)?;
        let sat: Vec<u64> = oracle.sat_set().iter().map(|&s| s as u64).collect();
        let tester_out = tester.test(2 * len, &sat)?;
        let (v, w) = c.endpoints;
        let inputs: Vec<usize> = bits[v].iter().chain(&bits[w]).copied().collect();
        let mut maps = Vec::new();
        for twin in [1u8, 2] {
            let map = embed_vertices(&mut graph, &tester_out, &inputs, |a| {
                format!("e{k}.t{twin}.y{a}")
            })?;
            for (a, &local) in tester_out.aux.iter().enumerate() {
                trace.vertices.push((
                    graph.vertex_id(map[local]).to_string(),
                    VertexOrigin::Aux {
                        edge: k,
                        twin,
                        aux: a,
                    },
                ));
            }
            maps.push(map);
        }
        let first = graph.edge_count();
        let pairs = add_products(&mut graph, &tester_out, &maps[0], &tester_out, &maps[1])
            .map_err(|e| e.at_stage("compose"))?;
        for &(a, b) in &pairs {
            trace.edges.push(EdgeOrigin::Twins {
                source_edge: k,
                first: a,
                second: b,
                padding: false,
            });
        }
        per_edge.push((first..graph.edge_count()).collect());
        edges.push(ComposedEdge {
            aux1: tester_out.aux.iter().map(|&a| maps[0][a]).collect(),
            aux2: tester_out.aux.iter().map(|&a| maps[1][a]).collect(),
            tester: tester_out,
            inputs,
        });
    }
    // equalize per-edge counts by round-robin duplication
    let target = per_edge.iter().map(Vec::len).max().unwrap_or(0);
    for (k, list) in per_edge.iter().enumerate() {
        for i in 0..target - list.len() {
            let e = list[i % list.len()];
            graph.duplicate_edge(e);
            match trace.edges[e].clone() {
                EdgeOrigin::Twins { first, second, .. } => trace.edges.push(EdgeOrigin::Twins {
                    source_edge: k,
                    first,
                    second,
                    padding: true,
                }),
                other => trace.edges.push(other),
            }
        }
    }
    let mut composed = ComposedSystem {
        instance: ReconfInstance::new(
            graph.clone(),
            Assignment::new(vec![0; graph.vertex_count()]),
            Assignment::new(vec![0; graph.vertex_count()]),
        )?,
        trace,
        n,
        bits,
        edges,
    };
    composed.instance.psi_ini = composed.lift_blocks(&system.sigma_ini.blocks)?;
    composed.instance.psi_tar = composed.lift_blocks(&system.sigma_tar.blocks)?;
    Ok(composed)
}

impl ComposedSystem {
    fn packed_input(&self, k: usize, values: &[Symbol]) -> u64 {
        self.edges[k]
            .inputs
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &v)| acc | (values[v] as u64) << i)
    }

    fn write_blocks(&self, blocks: &[crate::hadamard::BitFunction], values: &mut [Symbol]) {
        for (row, b) in self.bits.iter().zip(blocks) {
            for (x, &v) in row.iter().enumerate() {
                values[v] = b.get(x) as Symbol;
            }
        }
    }

    /// Composed assignment with the given blocks and both twins set to the witness of
    /// each circuit. Every circuit must accept its blocks.
    pub fn lift_blocks(&self, blocks: &[crate::hadamard::BitFunction]) -> Result<Assignment> {
        let mut values = vec![0; self.instance.graph.vertex_count()];
        self.write_blocks(blocks, &mut values);
        for (k, e) in self.edges.iter().enumerate() {
            let input = self.packed_input(k, &values);
            let tau = e.tester.witness(input).ok_or(Error::UnsatisfiedEndpoint(
                "block assignment violates a circuit",
            ))?;
            for (twin_aux, &t) in e.aux1.iter().zip(tau).chain(e.aux2.iter().zip(tau)) {
                values[*twin_aux] = t;
            }
        }
        Ok(Assignment::new(values))
    }

    /// Lifts a sequence of circuit-satisfying block assignments: for every bit flip,
    /// each affected circuit first moves its twin-1 auxiliaries to the new witness, then
    /// the bit flips, then twin 2 follows.
    pub fn lift_sigma_sequence(&self, seq: &SigmaSequence) -> Result<ReconfigSequence> {
        let mut psi = self.lift_blocks(&seq.start.blocks)?;
        let mut out = ReconfigSequence::single(psi.clone());
        let touching: Vec<Vec<usize>> = (0..self.bits.len())
            .map(|v| {
                (0..self.edges.len())
                    .filter(|&k| self.edges[k].inputs.contains(&self.bits[v][0]))
                    .collect()
            })
            .collect();
        for &BitFlip { vertex, position } in &seq.flips {
            let bit = self.bits[vertex][position];
            let mut next = psi.values().to_vec();
            next[bit] ^= 1;
            let mut taus = Vec::new();
            for &k in &touching[vertex] {
                let input = self.packed_input(k, &next);
                taus.push(self.edges[k].tester.witness(input).map(<[Symbol]>::to_vec));
            }
            for (&k, tau) in touching[vertex].iter().zip(&taus) {
                if let Some(tau) = tau {
                    for (&a, &t) in self.edges[k].aux1.iter().zip(tau) {
                        psi.set(a, t);
                        out.push_dedup(psi.clone());
                    }
                }
            }
            psi.set(bit, next[bit]);
            out.push_dedup(psi.clone());
            for (&k, tau) in touching[vertex].iter().zip(&taus) {
                if let Some(tau) = tau {
                    for (&a, &t) in self.edges[k].aux2.iter().zip(tau) {
                        psi.set(a, t);
                        out.push_dedup(psi.clone());
                    }
                }
            }
        }
        Ok(out)
    }

    /// Block part of a composed assignment.
    pub fn blocks_of(&self, psi: &Assignment) -> Result<Vec<crate::hadamard::BitFunction>> {
        self.bits
            .iter()
            .map(|row| {
                let mut f = crate::hadamard::BitFunction::zeros(self.n)?;
                for (x, &v) in row.iter().enumerate() {
                    f.set(x, psi.get(v) != 0);
                }
                Ok(f)
            })
            .collect()
    }

    /// Restriction of a composed sequence to the blocks, as single-bit flips.
    pub fn restrict_to_blocks(&self, seq: &ReconfigSequence) -> Result<SigmaSequence> {
        let start = crate::robustize::BlockAssignment {
            n: self.n,
            blocks: self.blocks_of(seq.first())?,
        };
        let mut out = SigmaSequence::constant(start);
        let mut where_bit = HashMap::new();
        for (v, row) in self.bits.iter().enumerate() {
            for (x, &b) in row.iter().enumerate() {
                where_bit.insert(b, (v, x));
            }
        }
        for w in seq.steps().windows(2) {
            let changed: Vec<usize> = (0..w[0].len())
                .filter(|&u| w[0].get(u) != w[1].get(u))
                .collect();
            if changed.len() > 1 {
                return Err(Error::InvalidStep {
                    index: 0,
                    changed: changed.len(),
                });
            }
            if let Some(&(vertex, position)) = changed.first().and_then(|u| where_bit.get(u)) {
                out.flips.push(BitFlip { vertex, position });
            }
        }
        Ok(out)
    }
}

/// A nonempty set of one or two symbols, `(lo, hi)` with `lo ≤ hi`.
pub type PairSet = (Symbol, Symbol);

fn in_set(s: PairSet, a: Symbol) -> bool {
    a == s.0 || a == s.1
}

/// Result of [`arity_reduce`].
#[derive(Clone, Debug)]
pub struct ArityReduction {
    pub instance: ReconfInstance,
    pub trace: ReductionTrace,
    /// Vertex of every 4-ary vertex in the binary instance.
    pub originals: Vec<usize>,
    /// Vertex of every hyperedge in the binary instance.
    pub hyper: Vec<usize>,
    /// Live value codes of every hyperedge vertex, indexed by symbol.
    pub codes: Vec<Vec<[PairSet; 4]>>,
    arity: usize,
}

/// Live value codes of a hyperedge: one singleton code per accepted tuple, plus one code
/// per accepted tuple and vertex where that vertex's coordinates hold `{a, b}` and both
/// choices are accepted. Tuples disagreeing on a repeated vertex are skipped.
fn live_codes(graph: &ConstraintGraph, e: usize, limit: u64) -> Result<Vec<Vec<PairSet>>> {
    let edge = graph.edge(e);
    let verts = edge.vertices();
    let q = verts.len();
    let consistent =
        |t: &[Symbol]| (0..q).all(|i| (0..i).all(|j| verts[j] != verts[i] || t[j] == t[i]));
    if edge.accepted_count() as u64 > limit {
        return Err(Error::ConstraintTooLarge(format!(
            "hyperedge {e} has more than {limit} value codes"
        )));
    }
    let mut live: Vec<Vec<PairSet>> = Vec::new();
    let mut widened = vec![0 as Symbol; q];
    for t in edge.accepted_tuples().filter(|t| consistent(t)) {
        live.push(t.iter().map(|&a| (a, a)).collect());
        for i in (0..q).filter(|&i| verts[..i].iter().all(|&u| u != verts[i])) {
            let a = t[i];
            for b in a + 1..graph.alphabet_of(verts[i]) {
                for j in 0..q {
                    widened[j] = if verts[j] == verts[i] { b } else { t[j] };
                }
                if edge.accepts(&widened) {
                    live.push(
                        (0..q)
                            .map(|j| {
                                if verts[j] == verts[i] {
                                    (a, b)
                                } else {
                                    (t[j], t[j])
                                }
                            })
                            .collect(),
                    );
                }
            }
        }
        if live.len() as u64 > limit {
            return Err(Error::ConstraintTooLarge(format!(
                "hyperedge {e} has more than {limit} value codes"
            )));
        }
    }
    live.sort_unstable_by(|x, y| x.iter().rev().cmp(y.iter().rev()));
    live.dedup();
    Ok(live)
}

/// Replaces every 4-ary hyperedge by a value-set vertex and four binary consistency
/// edges. A violated hyperedge forces at least one of its four edges to be violated.
pub fn arity_reduce(inst: &ReconfInstance, code_limit: u64) -> Result<ArityReduction> {
    let g = &inst.graph;
    if g.arity() != 4 {
        return Err(Error::ArityMismatch {
            expected: 4,
            got: g.arity(),
        });
    }
    if g.edge_count() == 0 {
        return Err(Error::NoConstraints);
    }
    g.check_assignment(&inst.psi_ini)?;
    g.check_assignment(&inst.psi_tar)?;
    let mut out = ConstraintGraph::new(2, g.alphabet())?;
    let mut trace = ReductionTrace::new("binary");
    trace.soundness_loss = Some(4);
    let mut originals = Vec::with_capacity(g.vertex_count());
    for v in 0..g.vertex_count() {
        let id = g.vertex_id(v).to_string();
        originals.push(match g.alphabet_override(v) {
            Some(w) => out.add_vertex_with_alphabet(id.clone(), w)?,
            None => out.add_vertex(id.clone())?,
        });
        trace
            .vertices
            .push((id.clone(), VertexOrigin::Source { vertex: id }));
    }
    let mut hyper = Vec::with_capacity(g.edge_count());
    let mut codes = Vec::with_capacity(g.edge_count());
    for e in 0..g.edge_count() {
        let live: Vec<[PairSet; 4]> = live_codes(g, e, code_limit)?
            .into_iter()
            .map(|s| [s[0], s[1], s[2], s[3]])
            .collect();
        let id = format!("h{e}");
        // an empty constraint keeps one code that no consistency edge accepts
        let h = out.add_vertex_with_alphabet(id.clone(), live.len().max(1) as u32)?;
        trace
            .vertices
            .push((id, VertexOrigin::Hyperedge { edge: e }));
        for (i, &v) in g.edge(e).vertices().iter().enumerate() {
            let pairs: Vec<[Symbol; 2]> = live
                .iter()
                .enumerate()
                .flat_map(|(c, sets)| {
                    let (lo, hi) = sets[i];
                    let mut p = vec![[c as Symbol, lo]];
                    if hi != lo {
                        p.push([c as Symbol, hi]);
                    }
                    p
                })
                .collect();
            out.add_edge(&[h, originals[v]], &pairs)?;
            trace.edges.push(EdgeOrigin::Consistency {
                hyperedge: e,
                coordinate: i,
            });
        }
        hyper.push(h);
        codes.push(live);
    }
    let mut red = ArityReduction {
        instance: ReconfInstance::new(
            out.clone(),
            Assignment::new(vec![0; out.vertex_count()]),
            Assignment::new(vec![0; out.vertex_count()]),
        )?,
        trace,
        originals,
        hyper,
        codes,
        arity: 4,
    };
    red.instance.psi_ini = red.lift_assignment(g, &inst.psi_ini);
    red.instance.psi_tar = red.lift_assignment(g, &inst.psi_tar);
    Ok(red)
}

impl ArityReduction {
    fn code_index(&self, e: usize, sets: &[PairSet; 4]) -> Option<usize> {
        self.codes[e]
            .binary_search_by(|c| c.iter().rev().cmp(sets.iter().rev()))
            .ok()
    }

    /// Code with the most coordinates consistent with `values`, smallest on ties.
    fn best_code(&self, g: &ConstraintGraph, e: usize, values: &[Symbol]) -> Symbol {
        let verts = g.edge(e).vertices();
        let singles = [0, 1, 2, 3].map(|i| (values[verts[i]], values[verts[i]]));
        if let Some(c) = self.code_index(e, &singles) {
            return c as Symbol;
        }
        let mut best = (0usize, 0usize);
        for (c, sets) in self.codes[e].iter().enumerate() {
            let hits = (0..self.arity)
                .filter(|&i| in_set(sets[i], values[verts[i]]))
                .count();
            if hits > best.0 {
                best = (hits, c);
            }
        }
        best.1 as Symbol
    }

    /// Binary assignment extending a 4-ary one, with every hyperedge vertex on its
    /// singleton code when that code is live.
    pub fn lift_assignment(&self, g: &ConstraintGraph, psi: &Assignment) -> Assignment {
        let mut values = vec![0; self.instance.graph.vertex_count()];
        for (v, &o) in self.originals.iter().enumerate() {
            values[o] = psi.get(v);
        }
        for (e, &h) in self.hyper.iter().enumerate() {
            values[h] = self.best_code(g, e, psi.values());
        }
        Assignment::new(values)
    }

    /// Lifts a 4-ary sequence: before a vertex moves from `a` to `b`, every hyperedge
    /// vertex over it widens its sets to `{a, b}`; after the move the sets shrink back.
    pub fn lift_sequence(
        &self,
        g: &ConstraintGraph,
        seq: &ReconfigSequence,
    ) -> Result<ReconfigSequence> {
        let incidence = g.incidence();
        let mut cur4 = seq.first().clone();
        let mut psi = self.lift_assignment(g, &cur4);
        let mut out = ReconfigSequence::single(psi.clone());
        for (t, w) in seq.steps().windows(2).enumerate() {
            let changed: Vec<usize> = (0..w[0].len())
                .filter(|&v| w[0].get(v) != w[1].get(v))
                .collect();
            let v = match changed[..] {
                [] => continue,
                [v] => v,
                _ => {
                    return Err(Error::InvalidStep {
                        index: t,
                        changed: changed.len(),
                    })
                }
            };
            let (a, b) = (w[0].get(v), w[1].get(v));
            for &e in &incidence[v] {
                let verts = g.edge(e).vertices();
                let sets = [0, 1, 2, 3].map(|i| {
                    let x = cur4.get(verts[i]);
                    if verts[i] == v {
                        (a.min(b), a.max(b))
                    } else {
                        (x, x)
                    }
                });
                if let Some(c) = self.code_index(e, &sets) {
                    psi.set(self.hyper[e], c as Symbol);
                    out.push_dedup(psi.clone());
                }
            }
            cur4.set(v, b);
            psi.set(self.originals[v], b);
            out.push_dedup(psi.clone());
            for &e in &incidence[v] {
                psi.set(self.hyper[e], self.best_code(g, e, cur4.values()));
                out.push_dedup(psi.clone());
            }
        }
        Ok(out)
    }

    /// Projection of a binary sequence onto the 4-ary vertices.
    pub fn restrict_sequence(&self, seq: &ReconfigSequence) -> ReconfigSequence {
        let project = |psi: &Assignment| {
            Assignment::new(self.originals.iter().map(|&o| psi.get(o)).collect())
        };
        let mut out = ReconfigSequence::single(project(seq.first()));
        for psi in &seq.steps()[1..] {
            out.push_dedup(project(psi));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::{sequence_value, value, Value};

    #[test]
    fn reference_tester_shape() {
        let t = ReferenceTester.test(4, &[0b0011, 0b1100]).unwrap();
        assert_eq!(t.graph.edge_count(), 4);
        let w = t.witness(0b1100).unwrap();
        let psi = t.assignment(0b1100, w);
        assert_eq!(value(&t.graph, &psi).unwrap(), Value::new(4, 4));
        assert!(t.witness(0b0101).is_none());
        assert_eq!(
            ReferenceTester.test(4, &[]).unwrap_err(),
            Error::UnsatisfiableCircuit
        );
    }

    #[test]
    fn superimposed_counts() {
        let t = ReferenceTester.test(3, &[0b000, 0b111]).unwrap();
        let s = superimpose(&t, &t).unwrap();
        assert_eq!(s.graph.edge_count(), 9);
        assert_eq!(s.graph.vertex_count(), 5);
        // all inputs 0, twin 1 names 0b111, twin 2 names 0b000: every product edge holds
        let mut vals = vec![0; 5];
        vals[s.aux1[0]] = 1;
        assert_eq!(s.graph.satisfied_count(&vals), 9);
        vals[s.aux2[0]] = 1;
        assert_eq!(s.graph.satisfied_count(&vals), 0);
    }

    fn four_ary_instance() -> ReconfInstance {
        let mut g = ConstraintGraph::new(4, 2).unwrap();
        for id in ["a", "b", "c"] {
            g.add_vertex(id).unwrap();
        }
        // accepts when not all three coordinates a, b, c are equal
        g.add_edge_with(&[0, 1, 2, 0], 16, |t| {
            t[0] == t[3] && !(t[0] == t[1] && t[1] == t[2])
        })
        .unwrap();
        ReconfInstance::new(
            g,
            Assignment::new(vec![0, 1, 1]),
            Assignment::new(vec![1, 0, 0]),
        )
        .unwrap()
    }

    #[test]
    fn arity_reduction_lifts() {
        let inst = four_ary_instance();
        let red = arity_reduce(&inst, DEFAULT_CODE_LIMIT).unwrap();
        assert_eq!(red.instance.graph.edge_count(), 4);
        assert!(red.instance.endpoints_satisfy());
        let seq = ReconfigSequence::new(vec![
            Assignment::new(vec![0, 1, 1]),
            Assignment::new(vec![0, 1, 0]),
            Assignment::new(vec![1, 1, 0]),
            Assignment::new(vec![1, 0, 0]),
        ])
        .unwrap();
        assert!(sequence_value(&inst.graph, &seq).unwrap().is_one());
        let lifted = red.lift_sequence(&inst.graph, &seq).unwrap();
        assert!(sequence_value(&red.instance.graph, &lifted)
            .unwrap()
            .is_one());
        assert_eq!(red.restrict_sequence(&lifted), seq);
    }
}
