//! Line-oriented text formats.
//!
//! Every document starts with a header line naming its kind and version. Blank lines
//! and `#` comments are ignored. Lists serialize in declaration order.
//!
//! Instance:
//!
//! ```text
//! reconf-instance v1
//! arity 2
//! alphabet 4
//! vertex a
//! vertex b alphabet 8
//! edge a b : 0 0 ; 1 1 ; 2 3
//! psi_ini a=0 b=0
//! psi_tar a=1 b=1
//! ```
//!
//! Sequence (`step` values follow the `vertices` line order):
//!
//! ```text
//! reconf-sequence v1
//! vertices a b
//! step 0 0
//! step 1 0
//! ```
//!
//! Block assignment (hex per [`BitFunction::to_hex`]) and single-bit-flip sequences:
//!
//! ```text
//! block-assignment v1        sigma-sequence v1
//! n 2                        n 2
//! block a 00                 block a 00
//! block b 0a                 block b 0a
//!                            flip a 3
//! ```
//!
//! A circuit-system descriptor is a `circuit-system v1` header, `n` and `kind` lines, and
//! then an embedded instance document. Reduction traces are described on
//! [`crate::trace`].

use std::fmt::Write as _;

use thiserror::Error;

use crate::csp::{
    is_valid_id, Assignment, ConstraintGraph, ReconfInstance, ReconfigSequence, Symbol,
};
use crate::error::Error;
use crate::hadamard::BitFunction;
use crate::robustize::{BitFlip, BlockAssignment, SigmaSequence};
use crate::trace::{EdgeOrigin, ReductionTrace, VertexOrigin};

pub const INSTANCE_HEADER: &str = "reconf-instance v1";
pub const SEQUENCE_HEADER: &str = "reconf-sequence v1";
pub const BLOCKS_HEADER: &str = "block-assignment v1";
pub const SIGMA_HEADER: &str = "sigma-sequence v1";
pub const SYSTEM_HEADER: &str = "circuit-system v1";
pub const TRACE_HEADER: &str = "reduction-trace v1";

/// Largest `n` accepted for block functions in text input.
const MAX_BLOCK_N: u32 = 12;

/// A parse failure at a 1-based line (`0` for end of input).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected header `{0}`")]
    MissingHeader(&'static str),
    #[error("malformed field `{field}`: {detail}")]
    Malformed { field: String, detail: String },
    #[error("missing field `{0}`")]
    MissingField(&'static str),
    #[error("missing endpoint `{0}`")]
    MissingEndpoint(&'static str),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("symbol {symbol} out of range for vertex `{vertex}` (alphabet size {alphabet})")]
    SymbolOutOfRange {
        vertex: String,
        symbol: u64,
        alphabet: u32,
    },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate {0}")]
    Duplicate(String),
    #[error("incomplete assignment: {0}")]
    IncompleteAssignment(String),
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

fn malformed(line: usize, field: &str, detail: impl Into<String>) -> ParseError {
    err(
        line,
        ParseErrorKind::Malformed {
            field: field.to_string(),
            detail: detail.into(),
        },
    )
}

/// Non-blank, comment-stripped lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let l = raw.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn expect_header<'a>(
    it: &mut impl Iterator<Item = (usize, &'a str)>,
    header: &'static str,
) -> Result<(), ParseError> {
    match it.next() {
        Some((_, l)) if l.split_whitespace().eq(header.split_whitespace()) => Ok(()),
        Some((line, _)) => Err(err(line, ParseErrorKind::MissingHeader(header))),
        None => Err(err(0, ParseErrorKind::MissingHeader(header))),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, field: &str, tok: &str) -> Result<T, ParseError> {
    tok.parse()
        .map_err(|_| malformed(line, field, format!("`{tok}` is not a valid number")))
}

fn single_value<T: std::str::FromStr>(
    line: usize,
    field: &str,
    rest: &[&str],
) -> Result<T, ParseError> {
    match rest {
        [tok] => parse_num(line, field, tok),
        _ => Err(malformed(line, field, "expected exactly one value")),
    }
}

fn check_id(line: usize, field: &str, id: &str) -> Result<(), ParseError> {
    if is_valid_id(id) {
        Ok(())
    } else {
        Err(malformed(line, field, format!("invalid id `{id}`")))
    }
}

fn lookup(graph: &ConstraintGraph, line: usize, id: &str) -> Result<usize, ParseError> {
    graph
        .vertex_index(id)
        .ok_or_else(|| err(line, ParseErrorKind::UnknownVertex(id.to_string())))
}

fn symbol_in_range(
    graph: &ConstraintGraph,
    line: usize,
    v: usize,
    tok: &str,
    field: &str,
) -> Result<Symbol, ParseError> {
    let s: u64 = parse_num(line, field, tok)?;
    let w = graph.alphabet_of(v);
    if s >= w as u64 {
        return Err(err(
            line,
            ParseErrorKind::SymbolOutOfRange {
                vertex: graph.vertex_id(v).to_string(),
                symbol: s,
                alphabet: w,
            },
        ));
    }
    Ok(s as Symbol)
}

/// Translates a graph construction error raised while parsing line `line`.
fn graph_error(line: usize, e: Error) -> ParseError {
    match e {
        Error::DuplicateVertex(id) => {
            err(line, ParseErrorKind::Duplicate(format!("vertex `{id}`")))
        }
        Error::ArityMismatch { expected, got } => {
            err(line, ParseErrorKind::ArityMismatch { expected, got })
        }
        Error::SymbolOutOfRange {
            vertex,
            symbol,
            alphabet,
        } => err(
            line,
            ParseErrorKind::SymbolOutOfRange {
                vertex,
                symbol: symbol as u64,
                alphabet,
            },
        ),
        other => malformed(line, "edge", other.to_string()),
    }
}

pub fn write_instance(inst: &ReconfInstance) -> String {
    let g = &inst.graph;
    let mut s = String::new();
    writeln!(s, "{INSTANCE_HEADER}").unwrap();
    writeln!(s, "arity {}", g.arity()).unwrap();
    writeln!(s, "alphabet {}", g.alphabet()).unwrap();
    for v in 0..g.vertex_count() {
        match g.alphabet_override(v) {
            Some(w) => writeln!(s, "vertex {} alphabet {w}", g.vertex_id(v)).unwrap(),
            None => writeln!(s, "vertex {}", g.vertex_id(v)).unwrap(),
        }
    }
    for edge in g.edges() {
        s.push_str("edge");
        for &v in edge.vertices() {
            write!(s, " {}", g.vertex_id(v)).unwrap();
        }
        s.push_str(" :");
        for (i, t) in edge.accepted_tuples().enumerate() {
            if i > 0 {
                s.push_str(" ;");
            }
            for x in t {
                write!(s, " {x}").unwrap();
            }
        }
        s.push('\n');
    }
    for (name, psi) in [("psi_ini", &inst.psi_ini), ("psi_tar", &inst.psi_tar)] {
        s.push_str(name);
        for (v, &x) in psi.values().iter().enumerate() {
            write!(s, " {}={x}", g.vertex_id(v)).unwrap();
        }
        s.push('\n');
    }
    s
}

pub fn parse_instance(text: &str) -> Result<ReconfInstance, ParseError> {
    let mut it = lines(text).peekable();
    expect_header(&mut it, INSTANCE_HEADER)?;
    let mut arity: Option<usize> = None;
    let mut alphabet: Option<u32> = None;
    let mut graph: Option<ConstraintGraph> = None;
    let mut psi_ini = None;
    let mut psi_tar = None;

    for (line, l) in it {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let (key, rest) = (toks[0], &toks[1..]);
        match key {
            "arity" | "alphabet" => {
                if graph.is_some() {
                    return Err(malformed(line, key, "must precede vertices"));
                }
                if key == "arity" {
                    if arity.is_some() {
                        return Err(err(line, ParseErrorKind::Duplicate("arity".into())));
                    }
                    let q: usize = single_value(line, key, rest)?;
                    if q == 0 || q > 64 {
                        return Err(malformed(line, key, "arity must be in 1..=64"));
                    }
                    arity = Some(q);
                } else {
                    if alphabet.is_some() {
                        return Err(err(line, ParseErrorKind::Duplicate("alphabet".into())));
                    }
                    let w: u32 = single_value(line, key, rest)?;
                    if w == 0 {
                        return Err(malformed(line, key, "alphabet must be positive"));
                    }
                    alphabet = Some(w);
                }
            }
            "vertex" => {
                let g = match &mut graph {
                    Some(g) => g,
                    None => {
                        let q = arity.ok_or(err(line, ParseErrorKind::MissingField("arity")))?;
                        let w =
                            alphabet.ok_or(err(line, ParseErrorKind::MissingField("alphabet")))?;
                        graph.insert(ConstraintGraph::new(q, w).map_err(|e| graph_error(line, e))?)
                    }
                };
                if g.edge_count() > 0 || psi_ini.is_some() || psi_tar.is_some() {
                    return Err(malformed(
                        line,
                        key,
                        "vertices must precede edges and endpoints",
                    ));
                }
                match rest {
                    [id] => {
                        check_id(line, key, id)?;
                        g.add_vertex(*id).map_err(|e| graph_error(line, e))?;
                    }
                    [id, "alphabet", w] => {
                        check_id(line, key, id)?;
                        let w: u32 = parse_num(line, "alphabet", w)?;
                        if w == 0 {
                            return Err(malformed(line, "alphabet", "alphabet must be positive"));
                        }
                        g.add_vertex_with_alphabet(*id, w)
                            .map_err(|e| graph_error(line, e))?;
                    }
                    _ => return Err(malformed(line, key, "expected `vertex ID [alphabet W]`")),
                }
            }
            "edge" => {
                let g = graph
                    .as_mut()
                    .ok_or(err(line, ParseErrorKind::MissingField("vertex")))?;
                let colon = rest
                    .iter()
                    .position(|t| *t == ":")
                    .ok_or_else(|| malformed(line, key, "missing `:` separator"))?;
                let ends = &rest[..colon];
                if ends.len() != g.arity() {
                    return Err(err(
                        line,
                        ParseErrorKind::ArityMismatch {
                            expected: g.arity(),
                            got: ends.len(),
                        },
                    ));
                }
                let verts = ends
                    .iter()
                    .map(|id| lookup(g, line, id))
                    .collect::<Result<Vec<_>, _>>()?;
                let body = rest[colon + 1..].join(" ");
                let mut tuples = Vec::new();
                if !body.trim().is_empty() {
                    for chunk in body.split(';') {
                        let vals: Vec<&str> = chunk.split_whitespace().collect();
                        if vals.len() != g.arity() {
                            return Err(err(
                                line,
                                ParseErrorKind::ArityMismatch {
                                    expected: g.arity(),
                                    got: vals.len(),
                                },
                            ));
                        }
                        let t = vals
                            .iter()
                            .zip(&verts)
                            .map(|(tok, &v)| symbol_in_range(g, line, v, tok, key))
                            .collect::<Result<Vec<_>, _>>()?;
                        tuples.push(t);
                    }
                }
                g.add_edge(&verts, &tuples)
                    .map_err(|e| graph_error(line, e))?;
            }
            "psi_ini" | "psi_tar" => {
                let g = graph
                    .as_ref()
                    .ok_or(err(line, ParseErrorKind::MissingField("vertex")))?;
                let slot = if key == "psi_ini" {
                    &mut psi_ini
                } else {
                    &mut psi_tar
                };
                if slot.is_some() {
                    return Err(err(line, ParseErrorKind::Duplicate(key.to_string())));
                }
                *slot = Some(parse_assignment(g, line, rest)?);
            }
            other => return Err(malformed(line, other, "unknown field")),
        }
    }

    let graph = match graph {
        Some(g) => g,
        None => {
            arity.ok_or(err(0, ParseErrorKind::MissingField("arity")))?;
            alphabet.ok_or(err(0, ParseErrorKind::MissingField("alphabet")))?;
            return Err(err(0, ParseErrorKind::MissingField("vertex")));
        }
    };
    let psi_ini = psi_ini.ok_or(err(0, ParseErrorKind::MissingEndpoint("psi_ini")))?;
    let psi_tar = psi_tar.ok_or(err(0, ParseErrorKind::MissingEndpoint("psi_tar")))?;
    Ok(ReconfInstance {
        graph,
        psi_ini,
        psi_tar,
    })
}

fn parse_assignment(
    g: &ConstraintGraph,
    line: usize,
    toks: &[&str],
) -> Result<Assignment, ParseError> {
    let mut values: Vec<Option<Symbol>> = vec![None; g.vertex_count()];
    for tok in toks {
        let (id, val) = tok.split_once('=').ok_or_else(|| {
            malformed(
                line,
                "assignment",
                format!("expected `id=value`, got `{tok}`"),
            )
        })?;
        let v = lookup(g, line, id)?;
        if values[v].is_some() {
            return Err(err(
                line,
                ParseErrorKind::Duplicate(format!("value for `{id}`")),
            ));
        }
        values[v] = Some(symbol_in_range(g, line, v, val, "assignment")?);
    }
    if let Some(v) = values.iter().position(Option::is_none) {
        return Err(err(
            line,
            ParseErrorKind::IncompleteAssignment(format!("no value for `{}`", g.vertex_id(v))),
        ));
    }
    Ok(Assignment::new(
        values.into_iter().map(Option::unwrap).collect(),
    ))
}

/// A sequence document before it is resolved against a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawSequence {
    pub vertices: Vec<String>,
    pub steps: Vec<Vec<Symbol>>,
}

pub fn write_sequence(graph: &ConstraintGraph, seq: &ReconfigSequence) -> String {
    let mut s = String::new();
    writeln!(s, "{SEQUENCE_HEADER}").unwrap();
    writeln!(s, "vertices {}", graph.vertex_ids().join(" ")).unwrap();
    for psi in seq.steps() {
        s.push_str("step");
        for x in psi.values() {
            write!(s, " {x}").unwrap();
        }
        s.push('\n');
    }
    s
}

pub fn parse_sequence(text: &str) -> Result<RawSequence, ParseError> {
    let mut it = lines(text);
    expect_header(&mut it, SEQUENCE_HEADER)?;
    let mut vertices: Option<Vec<String>> = None;
    let mut steps = Vec::new();
    for (line, l) in it {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks[0] {
            "vertices" => {
                if vertices.is_some() {
                    return Err(err(line, ParseErrorKind::Duplicate("vertices".into())));
                }
                let mut seen = std::collections::HashSet::new();
                for id in &toks[1..] {
                    check_id(line, "vertices", id)?;
                    if !seen.insert(*id) {
                        return Err(err(
                            line,
                            ParseErrorKind::Duplicate(format!("vertex `{id}`")),
                        ));
                    }
                }
                vertices = Some(toks[1..].iter().map(|s| s.to_string()).collect());
            }
            "step" => {
                let vs = vertices
                    .as_ref()
                    .ok_or(err(line, ParseErrorKind::MissingField("vertices")))?;
                if toks.len() - 1 != vs.len() {
                    return Err(err(
                        line,
                        ParseErrorKind::IncompleteAssignment(format!(
                            "{} values for {} vertices",
                            toks.len() - 1,
                            vs.len()
                        )),
                    ));
                }
                steps.push(
                    toks[1..]
                        .iter()
                        .map(|t| parse_num(line, "step", t))
                        .collect::<Result<Vec<Symbol>, _>>()?,
                );
            }
            other => return Err(malformed(line, other, "unknown field")),
        }
    }
    let vertices = vertices.ok_or(err(0, ParseErrorKind::MissingField("vertices")))?;
    if steps.is_empty() {
        return Err(err(0, ParseErrorKind::MissingField("step")));
    }
    Ok(RawSequence { vertices, steps })
}

impl RawSequence {
    /// Reorders values into the graph's vertex order and range-checks them.
    pub fn resolve(&self, graph: &ConstraintGraph) -> Result<ReconfigSequence, Error> {
        if self.vertices.len() != graph.vertex_count() {
            return Err(Error::IncompleteAssignment {
                expected: graph.vertex_count(),
                got: self.vertices.len(),
            });
        }
        let order = self
            .vertices
            .iter()
            .map(|id| {
                graph
                    .vertex_index(id)
                    .ok_or_else(|| Error::UnknownVertex(id.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut steps = Vec::with_capacity(self.steps.len());
        for raw in &self.steps {
            let mut values = vec![0; graph.vertex_count()];
            for (&v, &x) in order.iter().zip(raw) {
                values[v] = x;
            }
            let psi = Assignment::new(values);
            graph.check_assignment(&psi)?;
            steps.push(psi);
        }
        ReconfigSequence::new(steps)
    }
}

/// Named blocks of a block assignment, in file order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawBlocks {
    pub n: u32,
    pub blocks: Vec<(String, BitFunction)>,
}

/// A single-bit-flip sequence document: starting blocks plus `(vertex, position)` flips.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawSigmaSequence {
    pub start: RawBlocks,
    pub flips: Vec<(String, usize)>,
}

pub fn write_blocks(n: u32, blocks: &[(&str, &BitFunction)]) -> String {
    let mut s = String::new();
    writeln!(s, "{BLOCKS_HEADER}").unwrap();
    writeln!(s, "n {n}").unwrap();
    for (id, f) in blocks {
        writeln!(s, "block {id} {}", f.to_hex()).unwrap();
    }
    s
}

pub fn write_sigma_sequence(
    n: u32,
    blocks: &[(&str, &BitFunction)],
    flips: impl IntoIterator<Item = (String, usize)>,
) -> String {
    let mut s = String::new();
    writeln!(s, "{SIGMA_HEADER}").unwrap();
    writeln!(s, "n {n}").unwrap();
    for (id, f) in blocks {
        writeln!(s, "block {id} {}", f.to_hex()).unwrap();
    }
    for (id, x) in flips {
        writeln!(s, "flip {id} {x}").unwrap();
    }
    s
}

fn parse_block_lines<'a>(
    it: impl Iterator<Item = (usize, &'a str)>,
    allow_flips: bool,
) -> Result<RawSigmaSequence, ParseError> {
    let mut n: Option<u32> = None;
    let mut blocks: Vec<(String, BitFunction)> = Vec::new();
    let mut flips = Vec::new();
    for (line, l) in it {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks[0] {
            "n" => {
                if n.is_some() {
                    return Err(err(line, ParseErrorKind::Duplicate("n".into())));
                }
                let v: u32 = single_value(line, "n", &toks[1..])?;
                if v > MAX_BLOCK_N {
                    return Err(malformed(
                        line,
                        "n",
                        format!("n must be at most {MAX_BLOCK_N}"),
                    ));
                }
                n = Some(v);
            }
            "block" => {
                let n = n.ok_or(err(line, ParseErrorKind::MissingField("n")))?;
                if !flips.is_empty() {
                    return Err(malformed(line, "block", "blocks must precede flips"));
                }
                let [id, hex] = toks[1..] else {
                    return Err(malformed(line, "block", "expected `block ID HEX`"));
                };
                check_id(line, "block", id)?;
                if blocks.iter().any(|(b, _)| b == id) {
                    return Err(err(
                        line,
                        ParseErrorKind::Duplicate(format!("block `{id}`")),
                    ));
                }
                let f = BitFunction::from_hex(n, hex)
                    .map_err(|e| malformed(line, "block", e.to_string()))?;
                blocks.push((id.to_string(), f));
            }
            "flip" if allow_flips => {
                let [id, pos] = toks[1..] else {
                    return Err(malformed(line, "flip", "expected `flip ID POSITION`"));
                };
                let Some((_, f)) = blocks.iter().find(|(b, _)| b == id) else {
                    return Err(err(line, ParseErrorKind::UnknownVertex(id.to_string())));
                };
                let x: usize = parse_num(line, "flip", pos)?;
                if x >= f.len() {
                    return Err(malformed(
                        line,
                        "flip",
                        format!("position {x} out of range"),
                    ));
                }
                flips.push((id.to_string(), x));
            }
            other => return Err(malformed(line, other, "unknown field")),
        }
    }
    let n = n.ok_or(err(0, ParseErrorKind::MissingField("n")))?;
    Ok(RawSigmaSequence {
        start: RawBlocks { n, blocks },
        flips,
    })
}

pub fn parse_blocks(text: &str) -> Result<RawBlocks, ParseError> {
    let mut it = lines(text);
    expect_header(&mut it, BLOCKS_HEADER)?;
    Ok(parse_block_lines(it, false)?.start)
}

pub fn parse_sigma_sequence(text: &str) -> Result<RawSigmaSequence, ParseError> {
    let mut it = lines(text);
    expect_header(&mut it, SIGMA_HEADER)?;
    parse_block_lines(it, true)
}

impl RawBlocks {
    /// Reorders blocks into the graph's vertex order.
    pub fn resolve(&self, graph: &ConstraintGraph) -> Result<BlockAssignment, Error> {
        if self.blocks.len() != graph.vertex_count() {
            return Err(Error::IncompleteAssignment {
                expected: graph.vertex_count(),
                got: self.blocks.len(),
            });
        }
        let mut blocks: Vec<Option<BitFunction>> = vec![None; graph.vertex_count()];
        for (id, f) in &self.blocks {
            let v = graph
                .vertex_index(id)
                .ok_or_else(|| Error::UnknownVertex(id.clone()))?;
            if blocks[v].replace(f.clone()).is_some() {
                return Err(Error::DuplicateVertex(id.clone()));
            }
        }
        Ok(BlockAssignment {
            n: self.n,
            blocks: blocks
                .into_iter()
                .map(|b| b.expect("every vertex has a block"))
                .collect(),
        })
    }
}

impl RawSigmaSequence {
    pub fn resolve(&self, graph: &ConstraintGraph) -> Result<SigmaSequence, Error> {
        let start = self.start.resolve(graph)?;
        let flips = self
            .flips
            .iter()
            .map(|(id, position)| {
                let vertex = graph
                    .vertex_index(id)
                    .ok_or_else(|| Error::UnknownVertex(id.clone()))?;
                Ok(BitFlip {
                    vertex,
                    position: *position,
                })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let seq = SigmaSequence { start, flips };
        seq.check_shape()?;
        Ok(seq)
    }
}

/// Writes the start blocks and flips of `seq` with the graph's vertex ids.
pub fn write_sigma(graph: &ConstraintGraph, seq: &SigmaSequence) -> String {
    let blocks: Vec<(&str, &BitFunction)> = graph
        .vertex_ids()
        .iter()
        .map(String::as_str)
        .zip(&seq.start.blocks)
        .collect();
    write_sigma_sequence(
        seq.start.n,
        &blocks,
        seq.flips
            .iter()
            .map(|f| (graph.vertex_id(f.vertex).to_string(), f.position)),
    )
}

/// Header fields of a circuit-system descriptor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemDescriptor {
    pub n: u32,
    pub weakened: bool,
    pub instance: ReconfInstance,
}

pub fn write_system_descriptor(n: u32, weakened: bool, instance: &ReconfInstance) -> String {
    let kind = if weakened { "weakened" } else { "robust" };
    format!(
        "{SYSTEM_HEADER}\nn {n}\nkind {kind}\n{}",
        write_instance(instance)
    )
}

pub fn parse_system_descriptor(text: &str) -> Result<SystemDescriptor, ParseError> {
    let mut it = lines(text);
    expect_header(&mut it, SYSTEM_HEADER)?;
    let (line, l) = it.next().ok_or(err(0, ParseErrorKind::MissingField("n")))?;
    let toks: Vec<&str> = l.split_whitespace().collect();
    if toks[0] != "n" {
        return Err(err(line, ParseErrorKind::MissingField("n")));
    }
    let n: u32 = single_value(line, "n", &toks[1..])?;
    if !(2..=MAX_BLOCK_N).contains(&n) {
        return Err(malformed(
            line,
            "n",
            format!("n must be in 2..={MAX_BLOCK_N}"),
        ));
    }
    let (line, l) = it
        .next()
        .ok_or(err(0, ParseErrorKind::MissingField("kind")))?;
    let weakened = match l.split_whitespace().collect::<Vec<_>>()[..] {
        ["kind", "robust"] => false,
        ["kind", "weakened"] => true,
        _ => return Err(malformed(line, "kind", "expected `kind robust|weakened`")),
    };
    // the embedded instance keeps its own line numbers
    let offset = text
        .lines()
        .take(line)
        .map(|l| l.len() + 1)
        .sum::<usize>()
        .min(text.len());
    let instance = parse_instance(&text[offset..]).map_err(|mut e| {
        if e.line > 0 {
            e.line += line;
        }
        e
    })?;
    Ok(SystemDescriptor {
        n,
        weakened,
        instance,
    })
}

pub fn write_trace(trace: &ReductionTrace) -> String {
    let mut s = String::new();
    writeln!(s, "{TRACE_HEADER}").unwrap();
    writeln!(s, "stage {}", trace.stage).unwrap();
    if let Some(f) = trace.soundness_loss {
        writeln!(s, "soundness-loss {f}").unwrap();
    }
    for (id, origin) in &trace.vertices {
        match origin {
            VertexOrigin::Source { vertex } => writeln!(s, "vertex {id} source {vertex}"),
            VertexOrigin::Block { vertex, position } => {
                writeln!(s, "vertex {id} block {vertex} {position}")
            }
            VertexOrigin::Aux { edge, twin, aux } => {
                writeln!(s, "vertex {id} aux {edge} {twin} {aux}")
            }
            VertexOrigin::Hyperedge { edge } => writeln!(s, "vertex {id} hyperedge {edge}"),
            VertexOrigin::TwinPair {
                source_edge,
                first,
                second,
            } => writeln!(s, "vertex {id} twin-pair {source_edge} {first} {second}"),
        }
        .unwrap();
    }
    for origin in &trace.edges {
        match origin {
            EdgeOrigin::Twins {
                source_edge,
                first,
                second,
                padding,
            } => writeln!(
                s,
                "edge twins {source_edge} {first} {second}{}",
                if *padding { " padding" } else { "" }
            ),
            EdgeOrigin::Consistency {
                hyperedge,
                coordinate,
            } => writeln!(s, "edge consistency {hyperedge} {coordinate}"),
        }
        .unwrap();
    }
    s
}

pub fn parse_trace(text: &str) -> Result<ReductionTrace, ParseError> {
    let mut it = lines(text);
    expect_header(&mut it, TRACE_HEADER)?;
    let mut trace = ReductionTrace {
        stage: String::new(),
        soundness_loss: None,
        vertices: Vec::new(),
        edges: Vec::new(),
    };
    let mut have_stage = false;
    let mut ids = std::collections::HashSet::new();
    for (line, l) in it {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let num = |i: usize, field: &str| -> Result<usize, ParseError> {
            let tok = toks
                .get(i)
                .ok_or_else(|| malformed(line, field, "missing value"))?;
            parse_num(line, field, tok)
        };
        let arity = |want: usize, field: &str| -> Result<(), ParseError> {
            if toks.len() == want {
                Ok(())
            } else {
                Err(malformed(line, field, format!("expected {} tokens", want)))
            }
        };
        match toks[0] {
            "stage" => {
                arity(2, "stage")?;
                if have_stage {
                    return Err(err(line, ParseErrorKind::Duplicate("stage".into())));
                }
                check_id(line, "stage", toks[1])?;
                trace.stage = toks[1].to_string();
                have_stage = true;
            }
            "soundness-loss" => {
                arity(2, "soundness-loss")?;
                trace.soundness_loss = Some(parse_num(line, "soundness-loss", toks[1])?);
            }
            "vertex" => {
                if toks.len() < 3 {
                    return Err(malformed(line, "vertex", "expected `vertex ID KIND ...`"));
                }
                let id = toks[1];
                check_id(line, "vertex", id)?;
                if !ids.insert(id.to_string()) {
                    return Err(err(
                        line,
                        ParseErrorKind::Duplicate(format!("vertex `{id}`")),
                    ));
                }
                let origin = match toks[2] {
                    "source" => {
                        arity(4, "source")?;
                        check_id(line, "source", toks[3])?;
                        VertexOrigin::Source {
                            vertex: toks[3].to_string(),
                        }
                    }
                    "block" => {
                        arity(5, "block")?;
                        check_id(line, "block", toks[3])?;
                        VertexOrigin::Block {
                            vertex: toks[3].to_string(),
                            position: num(4, "block")?,
                        }
                    }
                    "aux" => {
                        arity(6, "aux")?;
                        let twin: u8 = parse_num(line, "aux", toks[4])?;
                        if !(1..=2).contains(&twin) {
                            return Err(malformed(line, "aux", "twin must be 1 or 2"));
                        }
                        VertexOrigin::Aux {
                            edge: num(3, "aux")?,
                            twin,
                            aux: num(5, "aux")?,
                        }
                    }
                    "hyperedge" => {
                        arity(4, "hyperedge")?;
                        VertexOrigin::Hyperedge {
                            edge: num(3, "hyperedge")?,
                        }
                    }
                    "twin-pair" => {
                        arity(6, "twin-pair")?;
                        VertexOrigin::TwinPair {
                            source_edge: num(3, "twin-pair")?,
                            first: num(4, "twin-pair")?,
                            second: num(5, "twin-pair")?,
                        }
                    }
                    other => {
                        return Err(malformed(
                            line,
                            "vertex",
                            format!("unknown origin `{other}`"),
                        ))
                    }
                };
                trace.vertices.push((id.to_string(), origin));
            }
            "edge" => match toks.get(1).copied() {
                Some("twins") => {
                    let padding = match toks.len() {
                        5 => false,
                        6 if toks[5] == "padding" => true,
                        _ => {
                            return Err(malformed(
                                line,
                                "twins",
                                "expected `edge twins E A B [padding]`",
                            ))
                        }
                    };
                    trace.edges.push(EdgeOrigin::Twins {
                        source_edge: num(2, "twins")?,
                        first: num(3, "twins")?,
                        second: num(4, "twins")?,
                        padding,
                    });
                }
                Some("consistency") => {
                    arity(4, "consistency")?;
                    trace.edges.push(EdgeOrigin::Consistency {
                        hyperedge: num(2, "consistency")?,
                        coordinate: num(3, "consistency")?,
                    });
                }
                _ => return Err(malformed(line, "edge", "expected `twins` or `consistency`")),
            },
            other => return Err(malformed(line, other, "unknown field")),
        }
    }
    if !have_stage {
        return Err(err(0, ParseErrorKind::MissingField("stage")));
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
reconf-instance v1
# two vertices, one edge
arity 2
alphabet 4
vertex a
vertex b alphabet 8
edge a b : 0 0 ; 1 1 ; 2 7
psi_ini a=0 b=0
psi_tar a=1 b=1
";

    #[test]
    fn parse_sample() {
        let inst = parse_instance(SAMPLE).unwrap();
        assert_eq!(inst.graph.vertex_count(), 2);
        assert_eq!(inst.graph.alphabet_of(1), 8);
        assert!(inst.graph.edge(0).accepts(&[2, 7]));
        assert_eq!(inst.psi_tar.values(), &[1, 1]);
        assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn missing_endpoint() {
        let text = SAMPLE.replace("psi_tar a=1 b=1\n", "");
        let e = parse_instance(&text).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingEndpoint("psi_tar"));
        assert!(e.to_string().contains("missing endpoint"));
    }

    #[test]
    fn arity_mismatch_in_tuple() {
        let text = SAMPLE.replace("2 7", "2 7 1");
        let e = parse_instance(&text).unwrap_err();
        assert_eq!(e.line, 7);
        assert!(e.to_string().contains("arity mismatch"));
        let text = SAMPLE.replace("edge a b :", "edge a :");
        assert!(parse_instance(&text)
            .unwrap_err()
            .to_string()
            .contains("arity mismatch"));
    }

    #[test]
    fn out_of_range_and_unknown() {
        let e = parse_instance(&SAMPLE.replace("2 7", "4 7")).unwrap_err();
        assert_eq!(e.line, 7);
        assert!(matches!(
            e.kind,
            ParseErrorKind::SymbolOutOfRange { symbol: 4, .. }
        ));
        let e = parse_instance(&SAMPLE.replace("psi_ini a=0", "psi_ini c=0")).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownVertex("c".into()));
        assert_eq!(e.line, 8);
        let e = parse_instance(&SAMPLE.replace("alphabet 4", "alphabet four")).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Malformed { .. }));
        let e = parse_instance(&SAMPLE.replace("psi_ini a=0 b=0", "psi_ini a=0")).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::IncompleteAssignment(_)));
    }

    #[test]
    fn empty_constraint_is_allowed() {
        let inst = parse_instance(&SAMPLE.replace(": 0 0 ; 1 1 ; 2 7", ":")).unwrap();
        assert_eq!(inst.graph.edge(0).accepted_count(), 0);
        assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn sequence_round_trip() {
        let inst = parse_instance(SAMPLE).unwrap();
        let seq = ReconfigSequence::new(vec![
            inst.psi_ini.clone(),
            Assignment::new(vec![1, 0]),
            inst.psi_tar.clone(),
        ])
        .unwrap();
        let text = write_sequence(&inst.graph, &seq);
        assert_eq!(
            parse_sequence(&text).unwrap().resolve(&inst.graph).unwrap(),
            seq
        );
    }

    #[test]
    fn sigma_round_trip() {
        let f = crate::hadamard::had_encode(3, 3).unwrap();
        let g = crate::hadamard::had_encode(5, 3).unwrap();
        let text = write_sigma_sequence(3, &[("a", &f), ("b", &g)], vec![("b".to_string(), 7)]);
        let raw = parse_sigma_sequence(&text).unwrap();
        assert_eq!(raw.start.blocks[1].1, g);
        assert_eq!(raw.flips, vec![("b".to_string(), 7)]);
        let bad = text.replace("flip b 7", "flip b 8");
        assert!(parse_sigma_sequence(&bad).is_err());
    }

    #[test]
    fn system_descriptor_line_numbers() {
        let inst = parse_instance(SAMPLE).unwrap();
        let text = write_system_descriptor(2, false, &inst);
        let d = parse_system_descriptor(&text).unwrap();
        assert_eq!(d.instance, inst);
        let bad = text.replace("2 7", "9 7");
        let e = parse_system_descriptor(&bad).unwrap_err();
        assert_eq!(
            bad.lines().nth(e.line - 1).unwrap().trim(),
            "edge a b : 0 0 ; 1 1 ; 9 7"
        );
    }
}
