//! Seeded instance generators.
//!
//! Satisfiable instances are planted: a random walk between two random assignments is
//! drawn first and every constraint accepts the pairs the walk visits, plus random
//! extra pairs. Shadow embeddings copy a small-alphabet instance into a large alphabet
//! through an injective relabelling per vertex; unused symbols satisfy nothing, so the
//! maxmin value is unchanged.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::csp::{Assignment, ConstraintGraph, ReconfInstance, ReconfigSequence, Symbol};
use crate::error::{Error, Result};
use crate::seeds;
use crate::solver::find_satisfying_path;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Path,
    Cycle,
    /// Random simple graph with the given number of edges.
    Random {
        edges: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenerateParams {
    pub shape: Shape,
    pub vertices: usize,
    pub alphabet: u32,
    /// Extra random pairs per constraint, as a fraction of all `W²` pairs (sampled with
    /// replacement).
    pub density: f64,
    pub satisfiable: bool,
    pub seed: u64,
}

/// Largest alphabet accepted by the generators.
pub const MAX_ALPHABET: u32 = 4096;

/// Satisfying-state exploration cap used to confirm planted paths.
const CONFIRM_CAP: usize = 1 << 20;

fn edge_list(shape: Shape, vertices: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, usize)>> {
    if vertices < 2 {
        return Err(Error::InvalidArgument(
            "at least two vertices are needed".into(),
        ));
    }
    Ok(match shape {
        Shape::Path => (0..vertices - 1).map(|i| (i, i + 1)).collect(),
        Shape::Cycle => {
            if vertices < 3 {
                return Err(Error::InvalidArgument(
                    "a cycle needs at least three vertices".into(),
                ));
            }
            (0..vertices).map(|i| (i, (i + 1) % vertices)).collect()
        }
        Shape::Random { edges } => {
            let mut all: Vec<(usize, usize)> = (0..vertices)
                .flat_map(|a| (a + 1..vertices).map(move |b| (a, b)))
                .collect();
            if edges == 0 || edges > all.len() {
                return Err(Error::InvalidArgument(format!(
                    "edge count must be in 1..={}",
                    all.len()
                )));
            }
            all.shuffle(rng);
            all.truncate(edges);
            all.sort_unstable();
            all
        }
    })
}

/// Walk from `ini` to `tar` changing the differing vertices one at a time in random
/// order.
fn planted_walk(ini: &Assignment, tar: &Assignment, rng: &mut ChaCha8Rng) -> ReconfigSequence {
    let mut order: Vec<usize> = (0..ini.len())
        .filter(|&v| ini.get(v) != tar.get(v))
        .collect();
    order.shuffle(rng);
    let mut cur = ini.clone();
    let mut seq = ReconfigSequence::single(cur.clone());
    for v in order {
        cur.set(v, tar.get(v));
        seq.push_dedup(cur.clone());
    }
    seq
}

fn check_params(p: &GenerateParams) -> Result<()> {
    if !(2..=MAX_ALPHABET).contains(&p.alphabet) {
        return Err(Error::InvalidArgument(format!(
            "alphabet must be in 2..={MAX_ALPHABET}"
        )));
    }
    if !(0.0..=1.0).contains(&p.density) {
        return Err(Error::InvalidArgument("density must be in [0, 1]".into()));
    }
    Ok(())
}

/// Generates an instance and, for satisfiable instances, the planted walk.
pub fn generate(p: &GenerateParams) -> Result<(ReconfInstance, Option<ReconfigSequence>)> {
    check_params(p)?;
    let mut rng = seeds::rng(p.seed, "generate", 0);
    let edges = edge_list(p.shape, p.vertices, &mut rng)?;
    let w = p.alphabet;
    let random_psi = |rng: &mut ChaCha8Rng| {
        Assignment::new((0..p.vertices).map(|_| rng.gen_range(0..w)).collect())
    };
    let psi_ini = random_psi(&mut rng);
    let psi_tar = random_psi(&mut rng);
    let walk = planted_walk(&psi_ini, &psi_tar, &mut rng);
    let mut g = ConstraintGraph::new(2, w)?;
    for v in 0..p.vertices {
        g.add_vertex(format!("v{v}"))?;
    }
    for &(a, b) in &edges {
        let mut pairs: Vec<[Symbol; 2]> = Vec::new();
        if p.satisfiable {
            pairs.extend(walk.steps().iter().map(|s| [s.get(a), s.get(b)]));
        }
        // sparse sampling keeps large alphabets cheap
        let extra = (p.density * (w as f64) * (w as f64)).round() as usize;
        for _ in 0..extra {
            pairs.push([rng.gen_range(0..w), rng.gen_range(0..w)]);
        }
        if pairs.is_empty() {
            pairs.push([rng.gen_range(0..w), rng.gen_range(0..w)]);
        }
        g.add_edge(&[a, b], &pairs)?;
    }
    let inst = ReconfInstance::new(g, psi_ini, psi_tar)?;
    if !p.satisfiable {
        return Ok((inst, None));
    }
    if !inst.endpoints_satisfy() {
        return Err(Error::InvalidArgument(
            "satisfiable generation timed out; try smaller parameters".into(),
        ));
    }
    // confirm connectivity independently of the planting when the search is small
    if (w as u64).pow(2) * p.vertices as u64 <= CONFIRM_CAP as u64 {
        match find_satisfying_path(&inst, CONFIRM_CAP) {
            Ok(Some(path)) if path.last() == &inst.psi_tar => {}
            _ => {
                return Err(Error::InvalidArgument(
                    "satisfiable generation timed out; try smaller parameters".into(),
                ))
            }
        }
    }
    Ok((inst, Some(walk)))
}

/// Keeps only the endpoint pairs in every constraint.
pub fn prune_to_endpoints(inst: &ReconfInstance) -> Result<ReconfInstance> {
    let g = &inst.graph;
    let mut out = ConstraintGraph::new(g.arity(), g.alphabet())?;
    for v in 0..g.vertex_count() {
        match g.alphabet_override(v) {
            Some(w) => out.add_vertex_with_alphabet(g.vertex_id(v), w)?,
            None => out.add_vertex(g.vertex_id(v))?,
        };
    }
    for e in g.edges() {
        let tuples: Vec<Vec<Symbol>> = [&inst.psi_ini, &inst.psi_tar]
            .iter()
            .map(|psi| e.vertices().iter().map(|&v| psi.get(v)).collect::<Vec<_>>())
            .filter(|t| e.accepts(t))
            .collect();
        out.add_edge(e.vertices(), &tuples)?;
    }
    ReconfInstance::new(out, inst.psi_ini.clone(), inst.psi_tar.clone())
}

/// Injective relabelling of every vertex's symbols into a larger alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShadowEmbedding {
    pub alphabet: u32,
    /// `maps[v][s]` is the large symbol standing for small symbol `s` at vertex `v`.
    pub maps: Vec<Vec<Symbol>>,
}

impl ShadowEmbedding {
    pub fn random(shadow: &ConstraintGraph, alphabet: u32, seed: u64) -> Result<Self> {
        let mut maps = Vec::with_capacity(shadow.vertex_count());
        for v in 0..shadow.vertex_count() {
            let w = shadow.alphabet_of(v);
            if w > alphabet {
                return Err(Error::InvalidArgument(format!(
                    "vertex alphabet {w} exceeds target alphabet {alphabet}"
                )));
            }
            let mut rng = seeds::rng(seed, "shadow-embedding", v as u64);
            let picks = rand::seq::index::sample(&mut rng, alphabet as usize, w as usize);
            maps.push(picks.into_iter().map(|s| s as Symbol).collect());
        }
        Ok(ShadowEmbedding { alphabet, maps })
    }

    pub fn assignment(&self, psi: &Assignment) -> Assignment {
        Assignment::new(
            psi.values()
                .iter()
                .enumerate()
                .map(|(v, &s)| self.maps[v][s as usize])
                .collect(),
        )
    }

    pub fn sequence(&self, seq: &ReconfigSequence) -> ReconfigSequence {
        let steps = seq.steps().iter().map(|s| self.assignment(s)).collect();
        ReconfigSequence::new(steps).expect("non-empty")
    }

    /// Small symbol for a large one, if it is in the image.
    pub fn preimage(&self, v: usize, s: Symbol) -> Option<Symbol> {
        self.maps[v]
            .iter()
            .position(|&x| x == s)
            .map(|i| i as Symbol)
    }

    pub fn embed(&self, shadow: &ReconfInstance) -> Result<ReconfInstance> {
        let g = &shadow.graph;
        let mut out = ConstraintGraph::new(g.arity(), self.alphabet)?;
        for v in 0..g.vertex_count() {
            out.add_vertex(g.vertex_id(v))?;
        }
        for e in g.edges() {
            let tuples: Vec<Vec<Symbol>> = e
                .accepted_tuples()
                .map(|t| {
                    t.iter()
                        .zip(e.vertices())
                        .map(|(&s, &v)| self.maps[v][s as usize])
                        .collect()
                })
                .collect();
            out.add_edge(e.vertices(), &tuples)?;
        }
        ReconfInstance::new(
            out,
            self.assignment(&shadow.psi_ini),
            self.assignment(&shadow.psi_tar),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::{sequence_value, Value};
    use crate::solver::{maxmin_value, DEFAULT_BUDGET};

    fn params(shape: Shape, seed: u64) -> GenerateParams {
        GenerateParams {
            shape,
            vertices: 3,
            alphabet: 4,
            density: 0.2,
            satisfiable: true,
            seed,
        }
    }

    #[test]
    fn deterministic_and_satisfiable() {
        for seed in 0..10 {
            let p = params(Shape::Path, seed);
            let (a, walk) = generate(&p).unwrap();
            assert_eq!(a, generate(&p).unwrap().0);
            assert!(a.endpoints_satisfy());
            assert!(sequence_value(&a.graph, &walk.unwrap()).unwrap().is_one());
        }
        let (c, _) = generate(&params(Shape::Cycle, 3)).unwrap();
        assert_eq!(c.graph.edge_count(), 3);
        let mut p = params(Shape::Random { edges: 2 }, 4);
        p.vertices = 4;
        assert_eq!(generate(&p).unwrap().0.graph.edge_count(), 2);
    }

    #[test]
    fn bad_params() {
        let mut p = params(Shape::Path, 0);
        p.alphabet = 1;
        assert!(generate(&p).is_err());
        let mut p = params(Shape::Random { edges: 9 }, 0);
        p.vertices = 3;
        assert!(generate(&p).is_err());
    }

    #[test]
    fn embedding_preserves_maxmin() {
        for seed in 0..5 {
            let (small, _) = generate(&params(Shape::Path, seed)).unwrap();
            let small = prune_to_endpoints(&small).unwrap();
            let emb = ShadowEmbedding::random(&small.graph, 16, seed).unwrap();
            let big = emb.embed(&small).unwrap();
            let a = maxmin_value(&small, DEFAULT_BUDGET).unwrap().optimum;
            let b = maxmin_value(&big, DEFAULT_BUDGET).unwrap().optimum;
            assert_eq!(a, b);
            assert!(a <= Value::new(1, 1));
        }
    }
}
