//! Robust circuits over Hadamard codeword blocks.
//!
//! Each vertex `v` of a binary constraint graph over `2^n` symbols becomes a block of
//! `2^n` bits. The circuit `C_e` of an edge `e = (v, w)` accepts the two blocks `f ∘ g`
//! when
//!
//! 1. `f` and `g` are each within Hamming distance `2^{n-2}` of some codeword, and
//! 2. every pair `(α, β)` with `f` within the *wide* radius of `Had(α)` and `g` within
//!    the wide radius of `Had(β)` is acceptable for `e`.
//!
//! The robust kind uses the wide radius `⌊(201/800)·2^n⌋`; the weakened kind uses
//! `2^{n-2}` for both clauses. Circuits are evaluated by scanning all `2^n` codewords.

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::constants::{close_radius, wide_radius};
use crate::csp::{Assignment, ConstraintGraph, ReconfInstance, ReconfigSequence, Symbol};
use crate::error::{Error, Result};
use crate::hadamard::{
    disagreement_set, generate_verified_path, had_encode, inner, BitFunction, Codebook,
};
use crate::seeds;
use crate::trace::{ReductionTrace, VertexOrigin};

/// Largest block parameter accepted by [`robustize`].
pub const MAX_N: u32 = 12;

/// Largest block parameter accepted by [`MicroOracle`].
pub const MICRO_MAX_N: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CircuitKind {
    Robust,
    Weakened,
}

impl CircuitKind {
    pub fn wide_radius(self, n: u32) -> u32 {
        match self {
            CircuitKind::Robust => wide_radius(n),
            CircuitKind::Weakened => close_radius(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RobustCircuit {
    pub edge: usize,
    pub endpoints: (usize, usize),
    pub n: u32,
    pub kind: CircuitKind,
    /// Acceptable pairs encoded as `α | β << n`, sorted.
    pi: Vec<u64>,
}

impl RobustCircuit {
    pub fn new(
        edge: usize,
        endpoints: (usize, usize),
        n: u32,
        kind: CircuitKind,
        pairs: impl IntoIterator<Item = (Symbol, Symbol)>,
    ) -> Result<Self> {
        if !(1..=MAX_N).contains(&n) {
            return Err(Error::InvalidArgument(format!(
                "n = {n} outside 1..={MAX_N}"
            )));
        }
        let mut pi = Vec::new();
        for (a, b) in pairs {
            if (a as u64) >> n != 0 || (b as u64) >> n != 0 {
                return Err(Error::InvalidArgument(format!(
                    "pair ({a}, {b}) out of range"
                )));
            }
            pi.push(a as u64 | (b as u64) << n);
        }
        pi.sort_unstable();
        pi.dedup();
        Ok(RobustCircuit {
            edge,
            endpoints,
            n,
            kind,
            pi,
        })
    }

    pub fn accepts_pair(&self, alpha: Symbol, beta: Symbol) -> bool {
        self.pi
            .binary_search(&(alpha as u64 | (beta as u64) << self.n))
            .is_ok()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Symbol, Symbol)> + '_ {
        let mask = (1u64 << self.n) - 1;
        self.pi
            .iter()
            .map(move |&c| ((c & mask) as Symbol, (c >> self.n) as Symbol))
    }

    /// Same acceptable pairs with the other radius rule.
    pub fn with_kind(&self, kind: CircuitKind) -> Self {
        RobustCircuit {
            kind,
            ..self.clone()
        }
    }

    /// Verdict from the distance vectors of both blocks to every codeword.
    pub fn eval_distances(&self, df: &[u32], dg: &[u32]) -> bool {
        let close = close_radius(self.n);
        if df.iter().min().is_none_or(|&d| d > close) || dg.iter().min().is_none_or(|&d| d > close)
        {
            return false;
        }
        let wide = self.kind.wide_radius(self.n);
        let near_g: Vec<Symbol> = (0..dg.len())
            .filter(|&b| dg[b] <= wide)
            .map(|b| b as Symbol)
            .collect();
        df.iter()
            .enumerate()
            .filter(|(_, &d)| d <= wide)
            .all(|(a, _)| near_g.iter().all(|&b| self.accepts_pair(a as Symbol, b)))
    }

    pub fn eval(&self, f: &BitFunction, g: &BitFunction) -> Result<bool> {
        if f.n() != self.n || g.n() != self.n {
            return Err(Error::LengthMismatch {
                left: f.len().max(g.len()),
                right: 1 << self.n,
            });
        }
        let book = Codebook::get(self.n);
        Ok(self.eval_distances(&book.distances(f)?, &book.distances(g)?))
    }
}

/// Nearest codeword symbol, smallest symbol on ties.
pub fn decode_distances(dist: &[u32]) -> Symbol {
    let mut best = 0;
    for (a, &d) in dist.iter().enumerate() {
        if d < dist[best] {
            best = a;
        }
    }
    best as Symbol
}

pub fn decode_block(f: &BitFunction) -> Symbol {
    decode_distances(
        &Codebook::get(f.n())
            .distances(f)
            .expect("codebook matches n"),
    )
}

/// One block per vertex of the system graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockAssignment {
    pub n: u32,
    pub blocks: Vec<BitFunction>,
}

impl BlockAssignment {
    /// Blockwise Hadamard encoding of `psi`.
    pub fn encode(psi: &Assignment, n: u32) -> Result<Self> {
        let book = Codebook::get(n);
        let blocks = psi
            .values()
            .iter()
            .map(|&s| {
                if (s as u64) >> n != 0 {
                    Err(Error::InvalidArgument(format!(
                        "symbol {s} needs more than {n} bits"
                    )))
                } else {
                    Ok(book.codeword(s as u64).clone())
                }
            })
            .collect::<Result<_>>()?;
        Ok(BlockAssignment { n, blocks })
    }

    pub fn decode(&self) -> Assignment {
        Assignment::new(self.blocks.iter().map(decode_block).collect())
    }

    pub fn flip(&mut self, flip: BitFlip) {
        self.blocks[flip.vertex].flip(flip.position);
    }

    /// Hamming distance summed over blocks.
    pub fn hamming(&self, other: &BlockAssignment) -> Result<u32> {
        if self.blocks.len() != other.blocks.len() {
            return Err(Error::LengthMismatch {
                left: self.blocks.len(),
                right: other.blocks.len(),
            });
        }
        self.blocks
            .iter()
            .zip(&other.blocks)
            .try_fold(0, |acc, (a, b)| Ok(acc + a.hamming(b)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BitFlip {
    pub vertex: usize,
    pub position: usize,
}

/// A starting block assignment and a list of single-bit flips.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaSequence {
    pub start: BlockAssignment,
    pub flips: Vec<BitFlip>,
}

impl SigmaSequence {
    pub fn constant(start: BlockAssignment) -> Self {
        SigmaSequence {
            start,
            flips: Vec::new(),
        }
    }

    /// Number of block assignments (flips + 1).
    pub fn len(&self) -> usize {
        self.flips.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last(&self) -> BlockAssignment {
        let mut s = self.start.clone();
        for &f in &self.flips {
            s.flip(f);
        }
        s
    }

    pub fn check_shape(&self) -> Result<()> {
        for f in &self.flips {
            match self.start.blocks.get(f.vertex) {
                Some(b) if f.position < b.len() => {}
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "flip of vertex {} position {} out of range",
                        f.vertex, f.position
                    )))
                }
            }
        }
        Ok(())
    }

    /// Flips that move every block from `from` to `to`, vertex by vertex, in ascending
    /// position order.
    pub fn push_walk(&mut self, from: &BlockAssignment, to: &BlockAssignment) {
        for (v, (a, b)) in from.blocks.iter().zip(&to.blocks).enumerate() {
            for x in 0..a.len() {
                if a.get(x) != b.get(x) {
                    self.flips.push(BitFlip {
                        vertex: v,
                        position: x,
                    });
                }
            }
        }
    }
}

/// Per-vertex codeword distances maintained under single-bit flips.
#[derive(Clone, Debug)]
pub struct BlockDecoder {
    n: u32,
    current: BlockAssignment,
    dist: Vec<Vec<u32>>,
}

impl BlockDecoder {
    pub fn new(start: &BlockAssignment) -> Result<Self> {
        let book = Codebook::get(start.n);
        let dist = start
            .blocks
            .iter()
            .map(|b| book.distances(b))
            .collect::<Result<_>>()?;
        Ok(BlockDecoder {
            n: start.n,
            current: start.clone(),
            dist,
        })
    }

    pub fn flip(&mut self, flip: BitFlip) {
        let bit = self.current.blocks[flip.vertex].get(flip.position);
        for (g, d) in self.dist[flip.vertex].iter_mut().enumerate() {
            if inner(g as u64, flip.position as u64) == bit {
                *d += 1;
            } else {
                *d -= 1;
            }
        }
        self.current.flip(flip);
    }

    pub fn distances(&self, v: usize) -> &[u32] {
        &self.dist[v]
    }

    pub fn decoded(&self, v: usize) -> Symbol {
        decode_distances(&self.dist[v])
    }

    pub fn decode_all(&self) -> Assignment {
        Assignment::new((0..self.dist.len()).map(|v| self.decoded(v)).collect())
    }

    pub fn current(&self) -> &BlockAssignment {
        &self.current
    }

    pub fn n(&self) -> u32 {
        self.n
    }
}

/// The circuits of a padded binary constraint graph and the encoded endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitSystem {
    pub n: u32,
    pub kind: CircuitKind,
    /// The source instance with every vertex alphabet padded to `2^n`.
    pub source: ReconfInstance,
    pub circuits: Vec<RobustCircuit>,
    pub sigma_ini: BlockAssignment,
    pub sigma_tar: BlockAssignment,
}

/// Smallest `n ≥ 2` with `2^n` at least the largest vertex alphabet.
pub fn block_parameter(graph: &ConstraintGraph) -> u32 {
    let w = graph.max_alphabet().max(1);
    (u32::BITS - (w - 1).leading_zeros()).max(2)
}

/// Copy of `graph` over `2^n` symbols at every vertex. Padding symbols appear in no
/// acceptable tuple.
pub fn pad_graph(graph: &ConstraintGraph, n: u32) -> Result<ConstraintGraph> {
    let mut g = ConstraintGraph::new(graph.arity(), 1 << n)?;
    for id in graph.vertex_ids() {
        g.add_vertex(id.clone())?;
    }
    for e in graph.edges() {
        let tuples: Vec<Vec<Symbol>> = e.accepted_tuples().collect();
        g.add_edge(e.vertices(), &tuples)?;
    }
    Ok(g)
}

pub fn robustize(inst: &ReconfInstance, kind: CircuitKind) -> Result<CircuitSystem> {
    let g = &inst.graph;
    if g.arity() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            got: g.arity(),
        });
    }
    if g.edge_count() == 0 {
        return Err(Error::NoConstraints);
    }
    g.check_assignment(&inst.psi_ini)?;
    g.check_assignment(&inst.psi_tar)?;
    for (name, psi) in [("psi_ini", &inst.psi_ini), ("psi_tar", &inst.psi_tar)] {
        if g.satisfied_count(psi.values()) != g.edge_count() as u64 {
            return Err(Error::UnsatisfiedEndpoint(name));
        }
    }
    let n = block_parameter(g);
    if n > MAX_N {
        return Err(Error::InvalidArgument(format!(
            "alphabet {} needs n = {n} > {MAX_N}",
            g.max_alphabet()
        )));
    }
    let padded = pad_graph(g, n)?;
    let mut circuits = Vec::with_capacity(padded.edge_count());
    for (i, e) in padded.edges().iter().enumerate() {
        let (v, w) = (e.vertices()[0], e.vertices()[1]);
        if v == w {
            return Err(Error::InvalidArgument(format!(
                "edge {i} is a self-loop on `{}`",
                padded.vertex_id(v)
            )));
        }
        circuits.push(RobustCircuit::new(
            i,
            (v, w),
            n,
            kind,
            e.accepted_tuples().map(|t| (t[0], t[1])),
        )?);
    }
    let source = ReconfInstance::new(padded, inst.psi_ini.clone(), inst.psi_tar.clone())?;
    Ok(CircuitSystem {
        n,
        kind,
        sigma_ini: BlockAssignment::encode(&source.psi_ini, n)?,
        sigma_tar: BlockAssignment::encode(&source.psi_tar, n)?,
        source,
        circuits,
    })
}

impl CircuitSystem {
    pub fn graph(&self) -> &ConstraintGraph {
        &self.source.graph
    }

    /// Provenance of every block bit `v.x`, vertex-major.
    pub fn block_trace(&self) -> ReductionTrace {
        let src = self.graph();
        let mut trace = ReductionTrace::new("robustized");
        for v in 0..src.vertex_count() {
            for x in 0..1usize << self.n {
                trace.vertices.push((
                    format!("{}.{x}", src.vertex_id(v)),
                    VertexOrigin::Block {
                        vertex: src.vertex_id(v).to_string(),
                        position: x,
                    },
                ));
            }
        }
        trace
    }

    pub fn satisfied_count(&self, sigma: &BlockAssignment) -> Result<u64> {
        let dec = BlockDecoder::new(sigma)?;
        Ok(self.satisfied_with(&dec))
    }

    fn satisfied_with(&self, dec: &BlockDecoder) -> u64 {
        self.circuits
            .iter()
            .filter(|c| {
                c.eval_distances(dec.distances(c.endpoints.0), dec.distances(c.endpoints.1))
            })
            .count() as u64
    }

    fn check_blocks(&self, sigma: &BlockAssignment) -> Result<()> {
        if sigma.n != self.n || sigma.blocks.len() != self.graph().vertex_count() {
            return Err(Error::InvalidArgument(format!(
                "block assignment has n = {} and {} blocks, system needs n = {} and {}",
                sigma.n,
                sigma.blocks.len(),
                self.n,
                self.graph().vertex_count()
            )));
        }
        Ok(())
    }

    /// Satisfied circuit count at every step of `seq`.
    pub fn check_sequence(&self, seq: &SigmaSequence) -> Result<Vec<u64>> {
        self.check_blocks(&seq.start)?;
        seq.check_shape()?;
        let incidence = self.graph().incidence();
        let mut dec = BlockDecoder::new(&seq.start)?;
        let mut sat: Vec<bool> = self
            .circuits
            .iter()
            .map(|c| c.eval_distances(dec.distances(c.endpoints.0), dec.distances(c.endpoints.1)))
            .collect();
        let mut count = sat.iter().filter(|&&s| s).count() as u64;
        let mut out = Vec::with_capacity(seq.len());
        out.push(count);
        for &f in &seq.flips {
            dec.flip(f);
            for &e in &incidence[f.vertex] {
                let c = &self.circuits[e];
                let now =
                    c.eval_distances(dec.distances(c.endpoints.0), dec.distances(c.endpoints.1));
                if now != sat[e] {
                    if now {
                        count += 1;
                    } else {
                        count -= 1;
                    }
                    sat[e] = now;
                }
            }
            out.push(count);
        }
        Ok(out)
    }

    /// Splices a verified codeword path into every move of `psi_seq`. Every step of
    /// `psi_seq` must satisfy the source graph.
    pub fn completeness_sequence(
        &self,
        psi_seq: &ReconfigSequence,
        seed: u64,
        max_retries: u32,
    ) -> Result<SigmaSequence> {
        let g = self.graph();
        if psi_seq.first() != &self.source.psi_ini {
            return Err(Error::EndpointMismatch("first step differs from psi_ini"));
        }
        if psi_seq.last() != &self.source.psi_tar {
            return Err(Error::EndpointMismatch("last step differs from psi_tar"));
        }
        let total = g.edge_count() as u64;
        for (t, psi) in psi_seq.steps().iter().enumerate() {
            g.check_assignment(psi)?;
            if g.satisfied_count(psi.values()) != total {
                return Err(Error::InvalidArgument(format!(
                    "step {t} does not satisfy the graph"
                )));
            }
        }
        let mut seq = SigmaSequence::constant(self.sigma_ini.clone());
        for (t, w) in psi_seq.steps().windows(2).enumerate() {
            let changed: Vec<usize> = (0..w[0].len())
                .filter(|&v| w[0].get(v) != w[1].get(v))
                .collect();
            match changed[..] {
                [] => {}
                [v] => {
                    let path = generate_verified_path(
                        w[0].get(v) as u64,
                        w[1].get(v) as u64,
                        self.n,
                        seeds::derive(seed, "completeness", t as u64),
                        max_retries,
                    )?;
                    seq.flips.extend(path.flips.iter().map(|&x| BitFlip {
                        vertex: v,
                        position: x,
                    }));
                }
                _ => {
                    return Err(Error::InvalidStep {
                        index: t,
                        changed: changed.len(),
                    })
                }
            }
        }
        Ok(seq)
    }

    /// Stepwise decoding of every block, consecutive duplicates collapsed.
    pub fn extract_psi_sequence(&self, seq: &SigmaSequence) -> Result<ReconfigSequence> {
        self.check_blocks(&seq.start)?;
        seq.check_shape()?;
        let mut dec = BlockDecoder::new(&seq.start)?;
        let mut psi = dec.decode_all();
        let mut out = ReconfigSequence::single(psi.clone());
        for &f in &seq.flips {
            dec.flip(f);
            psi.set(f.vertex, dec.decoded(f.vertex));
            out.push_dedup(psi.clone());
        }
        Ok(out)
    }

    /// Seeded adversarial walk from `sigma_ini` to `sigma_tar`: it visits `waypoints`
    /// random noisy codeword assignments, flipping the differing bits of each leg in
    /// random order.
    pub fn random_sigma_sequence(&self, seed: u64, waypoints: usize) -> SigmaSequence {
        let mut rng = seeds::rng(seed, "sigma-sequence", 0);
        let book = Codebook::get(self.n);
        let len = 1usize << self.n;
        let mut seq = SigmaSequence::constant(self.sigma_ini.clone());
        let mut cur = self.sigma_ini.clone();
        let count = cur.blocks.len();
        for leg in 0..=waypoints {
            let to = if leg == waypoints {
                self.sigma_tar.clone()
            } else {
                let mut to = BlockAssignment {
                    n: self.n,
                    blocks: (0..count)
                        .map(|_| book.codeword(rng.gen_range(0..len as u64)).clone())
                        .collect(),
                };
                for b in &mut to.blocks {
                    let noise = rng.gen_range(0..=len / 4);
                    for _ in 0..noise {
                        b.flip(rng.gen_range(0..len));
                    }
                }
                to
            };
            let mut walk = SigmaSequence::constant(cur.clone());
            walk.push_walk(&cur, &to);
            walk.flips.shuffle(&mut rng);
            seq.flips.extend(walk.flips);
            cur = to;
        }
        seq
    }
}

/// Exhaustive satisfying set of one circuit for `n ≤ 3`, over the `2^{n+1}` input bits
/// `f ∘ g` packed as `f | g << 2^n`.
#[derive(Clone, Debug)]
pub struct MicroOracle {
    n: u32,
    sat: Vec<u32>,
}

impl MicroOracle {
    pub fn new(c: &RobustCircuit) -> Result<Self> {
        if c.n > MICRO_MAX_N {
            return Err(Error::MicroOracleOutOfRange(c.n));
        }
        let len = 1u32 << c.n;
        let book = Codebook::get(c.n);
        let dists: Vec<Vec<u32>> = (0..1u64 << len)
            .map(|bits| {
                book.distances(&BitFunction::from_u64(c.n, bits).unwrap())
                    .unwrap()
            })
            .collect();
        let mut sat = Vec::new();
        for (g, dg) in dists.iter().enumerate() {
            for (f, df) in dists.iter().enumerate() {
                if c.eval_distances(df, dg) {
                    sat.push(f as u32 | (g as u32) << len);
                }
            }
        }
        Ok(MicroOracle { n: c.n, sat })
    }

    pub fn pack(f: &BitFunction, g: &BitFunction) -> u32 {
        f.to_u64() as u32 | (g.to_u64() as u32) << f.len()
    }

    /// Input bit count `2^{n+1}`.
    pub fn input_bits(&self) -> u32 {
        2 << self.n
    }

    pub fn sat_set(&self) -> &[u32] {
        &self.sat
    }

    pub fn is_sat(&self, packed: u32) -> bool {
        self.sat.binary_search(&packed).is_ok()
    }

    /// Minimum Hamming distance from `packed` to the satisfying set.
    pub fn hamming_to_sat(&self, packed: u32) -> Option<u32> {
        self.sat.iter().map(|&s| (s ^ packed).count_ones()).min()
    }

    /// Relative distance over the `2^{n+1}` input bits.
    pub fn distance_to_sat(&self, f: &BitFunction, g: &BitFunction) -> Option<Ratio<u64>> {
        self.hamming_to_sat(Self::pack(f, g))
            .map(|h| Ratio::new(h as u64, self.input_bits() as u64))
    }
}

/// The walk of a weakened-circuit counterexample: `f` is `Had(α₁)` with the first
/// `2^{n-2}` positions of `D(α₁, α₂)` flipped, and `g` likewise for `β₁, β₂`. The walk
/// moves `Had(α₁) → f`, then `Had(β₁) → g`, then `f → Had(α₂)`, then `g → Had(β₂)`.
/// Returns every `(f, g)` on the walk.
pub fn failed_attempt_path(
    n: u32,
    alphas: (u64, u64),
    betas: (u64, u64),
) -> Result<Vec<(BitFunction, BitFunction)>> {
    let da = disagreement_set(alphas.0, alphas.1, n)?;
    let db = disagreement_set(betas.0, betas.1, n)?;
    let quarter = da.len() / 2;
    let mut f = had_encode(alphas.0, n)?;
    let mut g = had_encode(betas.0, n)?;
    let mut out = vec![(f.clone(), g.clone())];
    for &x in &da[..quarter] {
        f.flip(x);
        out.push((f.clone(), g.clone()));
    }
    for &x in &db[..quarter] {
        g.flip(x);
        out.push((f.clone(), g.clone()));
    }
    for &x in &da[quarter..] {
        f.flip(x);
        out.push((f.clone(), g.clone()));
    }
    for &x in &db[quarter..] {
        g.flip(x);
        out.push((f.clone(), g.clone()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circuit(n: u32, pairs: &[(Symbol, Symbol)]) -> RobustCircuit {
        RobustCircuit::new(0, (0, 1), n, CircuitKind::Robust, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn codeword_pairs() {
        let c = circuit(3, &[(1, 2), (5, 5)]);
        let h = |a| had_encode(a, 3).unwrap();
        assert!(c.eval(&h(1), &h(2)).unwrap());
        assert!(c.eval(&h(5), &h(5)).unwrap());
        assert!(!c.eval(&h(2), &h(1)).unwrap());
        assert!(!c.eval(&h(1), &h(5)).unwrap());
    }

    #[test]
    fn decoding_examples() {
        for a in 0..8 {
            assert_eq!(decode_block(&had_encode(a, 3).unwrap()), a as Symbol);
        }
        let mut f = BitFunction::zeros(3).unwrap();
        f.flip(0);
        assert_eq!(decode_block(&f), 0);
        // two of the four positions of D(0, 1) = {1, 3, 5, 7}
        let mut f = BitFunction::zeros(3).unwrap();
        f.flip(1);
        f.flip(3);
        let d = Codebook::get(3).distances(&f).unwrap();
        assert_eq!((d[0], d[1]), (2, 2));
        assert_eq!(decode_block(&f), 0);
    }

    #[test]
    fn micro_oracle_basics() {
        let c = circuit(2, &[(0, 0)]);
        let o = MicroOracle::new(&c).unwrap();
        let z = had_encode(0, 2).unwrap();
        let one = had_encode(1, 2).unwrap();
        assert_eq!(o.distance_to_sat(&z, &z).unwrap(), Ratio::from_integer(0));
        assert!(o.distance_to_sat(&one, &one).unwrap() > Ratio::from_integer(0));
        let big = circuit(4, &[(0, 0)]);
        assert!(MicroOracle::new(&big)
            .unwrap_err()
            .to_string()
            .contains("micro oracle out of range"));
    }

    #[test]
    fn failed_attempt_shape() {
        let p = failed_attempt_path(3, (0, 1), (2, 3)).unwrap();
        assert_eq!(p.len(), 9);
        assert_eq!(p[0].0, had_encode(0, 3).unwrap());
        assert_eq!(p[8].1, had_encode(3, 3).unwrap());
        let book = Codebook::get(3);
        let mid = &p[4];
        let df = book.distances(&mid.0).unwrap();
        let dg = book.distances(&mid.1).unwrap();
        assert_eq!((df[0], df[1], dg[2], dg[3]), (2, 2, 2, 2));
    }

    #[test]
    fn block_parameter_pads() {
        let mut g = ConstraintGraph::new(2, 5).unwrap();
        g.add_vertex("a").unwrap();
        assert_eq!(block_parameter(&g), 3);
        let g = ConstraintGraph::new(2, 2).unwrap();
        assert_eq!(block_parameter(&g), 2);
        let g = ConstraintGraph::new(2, 512).unwrap();
        assert_eq!(block_parameter(&g), 9);
    }
}
