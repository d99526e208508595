//! End-to-end runs of the reduction with per-stage value reports.
//!
//! Micro mode (`n ≤ 3`) builds every stage explicitly: the source graph, the robustized
//! stage as a `2^{n+1}`-ary graph over block bits whose constraints are the satisfying
//! sets of the circuits, the composed 4-ary graph, and the binary graph. Each stage is
//! checked by the exact solver when it fits the state budget, otherwise by a search over
//! satisfying assignments only, and value-1 sequences are lifted from stage to stage.
//!
//! N9 mode builds the circuit system for a 512-letter instance and checks the spliced
//! completeness sequence.

use std::fmt::Write as _;

use crate::compose::{
    arity_reduce, compose_system, ArityReduction, ComposedSystem, ReferenceTester,
};
use crate::csp::{
    sequence_value, ConstraintGraph, ReconfInstance, ReconfigSequence, Symbol, Value,
};
use crate::error::{Error, Result};
use crate::robustize::{
    robustize, BitFlip, BlockAssignment, CircuitKind, CircuitSystem, MicroOracle, SigmaSequence,
    MICRO_MAX_N,
};
use crate::solver::{find_satisfying_path, Solver};
use crate::trace::ReductionTrace;

pub const REPORT_HEADER: &str =
    "stage,vertices,edges,max-alphabet,maxmin-numerator,maxmin-denominator,method";

/// How a stage's value was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Exact solver.
    Exact,
    /// Search over satisfying assignments found a path, so the value is 1.
    SatisfyingPath,
    /// Search over satisfying assignments was exhausted, so the value is below 1.
    NoSatisfyingPath,
    /// A lifted sequence attains value 1.
    Constructive,
    /// Too large for any check.
    Unchecked,
    /// Not built because its tables exceed the configured limits.
    NotBuilt,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::SatisfyingPath => "satisfying-path",
            Method::NoSatisfyingPath => "no-satisfying-path",
            Method::Constructive => "constructive",
            Method::Unchecked => "unchecked",
            Method::NotBuilt => "not-built",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageReport {
    pub stage: &'static str,
    pub vertices: usize,
    pub edges: usize,
    pub max_alphabet: u32,
    /// Known maxmin value.
    pub maxmin: Option<Value>,
    /// Whether the maxmin value is 1, when known.
    pub perfect: Option<bool>,
    pub method: Method,
}

impl StageReport {
    fn new(stage: &'static str, g: &ConstraintGraph) -> Self {
        StageReport {
            stage,
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            max_alphabet: g.max_alphabet(),
            maxmin: None,
            perfect: None,
            method: Method::Unchecked,
        }
    }

    fn set_value(&mut self, v: Value, method: Method) {
        self.perfect = Some(v.is_one());
        self.maxmin = Some(v);
        self.method = method;
    }
}

pub fn report_csv(rows: &[StageReport]) -> String {
    let mut s = String::from(REPORT_HEADER);
    s.push('\n');
    for r in rows {
        let (num, den) = match r.maxmin {
            Some(v) => (v.satisfied.to_string(), v.total.to_string()),
            None => (String::new(), String::new()),
        };
        writeln!(
            s,
            "{},{},{},{},{num},{den},{}",
            r.stage,
            r.vertices,
            r.edges,
            r.max_alphabet,
            r.method.as_str()
        )
        .unwrap();
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MicroOptions {
    pub budget: u64,
    /// Stages with more configurations than this skip the exact solver.
    pub exact_limit: u64,
    /// Cap on satisfying assignments visited by the sparse search.
    pub visit_cap: usize,
    /// Cap on candidate value codes per hyperedge in arity reduction.
    pub code_limit: u64,
}

impl Default for MicroOptions {
    fn default() -> Self {
        MicroOptions {
            budget: crate::solver::DEFAULT_BUDGET,
            exact_limit: 1 << 16,
            visit_cap: 1 << 16,
            code_limit: crate::compose::DEFAULT_CODE_LIMIT,
        }
    }
}

pub struct MicroRun {
    pub source: ReconfInstance,
    pub source_witness: Option<ReconfigSequence>,
    pub system: CircuitSystem,
    pub robustized: ReconfInstance,
    pub robustized_trace: ReductionTrace,
    /// Value-1 block sequence, when the robustized stage has one.
    pub sigma_witness: Option<SigmaSequence>,
    pub composed: ComposedSystem,
    /// Value of the lift of `sigma_witness`.
    pub composed_lift_value: Option<Value>,
    pub composed_witness: Option<ReconfigSequence>,
    pub binary: Option<ArityReduction>,
    /// Value of the lift of `composed_witness`.
    pub binary_lift_value: Option<Value>,
    pub reports: Vec<StageReport>,
}

impl MicroRun {
    /// Checks that lifted witnesses keep value 1 and that adjacent stages agree on
    /// perfection.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        let lifts = [self.composed_lift_value, self.binary_lift_value];
        if lifts.iter().flatten().any(|v| !v.is_one()) {
            out.push("lifted sequence below 1".to_string());
        }
        let perfect: Vec<Option<bool>> = self.reports.iter().map(|r| r.perfect).collect();
        if let (Some(a), Some(b)) = (perfect[1], perfect[2]) {
            if a != b {
                out.push("robustized and composed disagree".to_string());
            }
        }
        if let (Some(a), Some(b)) = (perfect[2], perfect.get(3).copied().flatten()) {
            if a != b {
                out.push("composed and binary disagree".to_string());
            }
        }
        out
    }
}

/// The robustized stage as an explicit graph over block bits `v.x`.
pub fn materialize_robustized(system: &CircuitSystem) -> Result<(ReconfInstance, ReductionTrace)> {
    if system.n > MICRO_MAX_N {
        return Err(Error::MicroOracleOutOfRange(system.n));
    }
    let len = 1usize << system.n;
    let mut g = ConstraintGraph::new(2 * len, 2)?;
    let trace = system.block_trace();
    for (id, _) in &trace.vertices {
        g.add_vertex(id.clone())?;
    }
    for c in &system.circuits {
        let oracle = MicroOracle::new(c)?;
        let (v, w) = c.endpoints;
        let verts: Vec<usize> = (0..len)
            .map(|x| v * len + x)
            .chain((0..len).map(|x| w * len + x))
            .collect();
        let tuples: Vec<Vec<Symbol>> = oracle
            .sat_set()
            .iter()
            .map(|&s| (0..2 * len).map(|i| (s >> i & 1) as Symbol).collect())
            .collect();
        g.add_edge(&verts, &tuples)?;
    }
    let bits = |b: &BlockAssignment| {
        crate::csp::Assignment::new(
            b.blocks
                .iter()
                .flat_map(|f| (0..len).map(move |x| f.get(x) as Symbol))
                .collect(),
        )
    };
    let inst = ReconfInstance::new(g, bits(&system.sigma_ini), bits(&system.sigma_tar))?;
    Ok((inst, trace))
}

/// Reads a sequence over the bit vertices of a materialized robustized stage as flips.
pub fn sigma_from_bits(system: &CircuitSystem, seq: &ReconfigSequence) -> Result<SigmaSequence> {
    let len = 1usize << system.n;
    let first = seq.first();
    let mut blocks = system.sigma_ini.clone();
    for (v, b) in blocks.blocks.iter_mut().enumerate() {
        for x in 0..len {
            b.set(x, first.get(v * len + x) != 0);
        }
    }
    let mut out = SigmaSequence::constant(blocks);
    for (t, w) in seq.steps().windows(2).enumerate() {
        let changed: Vec<usize> = (0..w[0].len())
            .filter(|&u| w[0].get(u) != w[1].get(u))
            .collect();
        match changed[..] {
            [] => {}
            [u] => out.flips.push(BitFlip {
                vertex: u / len,
                position: u % len,
            }),
            _ => {
                return Err(Error::InvalidStep {
                    index: t,
                    changed: changed.len(),
                })
            }
        }
    }
    Ok(out)
}

/// Exact value when the stage fits the budget, else the satisfying-path search.
fn check_stage(
    inst: &ReconfInstance,
    report: &mut StageReport,
    opts: &MicroOptions,
) -> Option<ReconfigSequence> {
    if inst.graph.configuration_count() <= opts.budget.min(opts.exact_limit) as u128 {
        if let Ok(solver) = Solver::new(inst, opts.budget) {
            let r = solver.maxmin();
            report.set_value(r.optimum, Method::Exact);
            return r.witness.filter(|_| r.optimum.is_one());
        }
    }
    match find_satisfying_path(inst, opts.visit_cap) {
        Ok(Some(path)) => {
            report.set_value(
                Value::new(
                    inst.graph.edge_count() as u64,
                    inst.graph.edge_count() as u64,
                ),
                Method::SatisfyingPath,
            );
            Some(path)
        }
        Ok(None) => {
            report.perfect = Some(false);
            report.method = Method::NoSatisfyingPath;
            None
        }
        Err(_) => None,
    }
}

pub fn run_micro(inst: &ReconfInstance, opts: &MicroOptions) -> Result<MicroRun> {
    let mut reports = Vec::new();

    let mut src_report = StageReport::new("source", &inst.graph);
    let solved = Solver::new(inst, opts.budget)
        .map_err(|e| e.at_stage("source"))?
        .maxmin();
    src_report.set_value(solved.optimum, Method::Exact);
    reports.push(src_report);
    let source_witness = solved.witness.filter(|_| solved.optimum.is_one());

    let system = robustize(inst, CircuitKind::Robust).map_err(|e| e.at_stage("robustize"))?;
    let (robustized, robustized_trace) =
        materialize_robustized(&system).map_err(|e| e.at_stage("robustize"))?;
    let mut rob_report = StageReport::new("robustized", &robustized.graph);
    let bit_witness = check_stage(&robustized, &mut rob_report, opts);
    reports.push(rob_report);
    let sigma_witness = bit_witness
        .map(|w| sigma_from_bits(&system, &w))
        .transpose()
        .map_err(|e| e.at_stage("robustize"))?;

    let composed = compose_system(&system, &ReferenceTester).map_err(|e| e.at_stage("compose"))?;
    let mut comp_report = StageReport::new("composed", &composed.instance.graph);
    let mut composed_lift_value = None;
    let mut composed_witness = None;
    if let Some(sigma) = &sigma_witness {
        let lifted = composed
            .lift_sigma_sequence(sigma)
            .map_err(|e| e.at_stage("compose"))?;
        let v =
            sequence_value(&composed.instance.graph, &lifted).map_err(|e| e.at_stage("compose"))?;
        composed_lift_value = Some(v);
        if v.is_one() {
            comp_report.set_value(v, Method::Constructive);
            composed_witness = Some(lifted);
        }
    }
    // the oracle runs regardless of the lift and takes precedence in the report
    let mut oracle_report = comp_report.clone();
    let oracle_witness = check_stage(&composed.instance, &mut oracle_report, opts);
    if oracle_report.method != Method::Unchecked {
        comp_report = oracle_report;
        if composed_witness.is_none() {
            composed_witness = oracle_witness;
        }
    }
    reports.push(comp_report);

    let (binary, binary_lift_value) = match arity_reduce(&composed.instance, opts.code_limit) {
        Ok(red) => {
            let mut bin_report = StageReport::new("binary", &red.instance.graph);
            let mut lift_value = None;
            if let Some(w) = &composed_witness {
                let lifted = red
                    .lift_sequence(&composed.instance.graph, w)
                    .map_err(|e| e.at_stage("arity-reduce"))?;
                let v = sequence_value(&red.instance.graph, &lifted)
                    .map_err(|e| e.at_stage("arity-reduce"))?;
                lift_value = Some(v);
                if v.is_one() {
                    bin_report.set_value(v, Method::Constructive);
                }
            }
            if red.instance.graph.configuration_count() <= opts.budget.min(opts.exact_limit) as u128
            {
                let mut exact = bin_report.clone();
                check_stage(&red.instance, &mut exact, opts);
                bin_report = exact;
            }
            reports.push(bin_report);
            (Some(red), lift_value)
        }
        Err(Error::ConstraintTooLarge(_)) => {
            reports.push(StageReport {
                stage: "binary",
                vertices: 0,
                edges: 0,
                max_alphabet: 0,
                maxmin: None,
                perfect: None,
                method: Method::NotBuilt,
            });
            (None, None)
        }
        Err(e) => return Err(e.at_stage("arity-reduce")),
    };

    Ok(MicroRun {
        source: inst.clone(),
        source_witness,
        system,
        robustized,
        robustized_trace,
        sigma_witness,
        composed,
        composed_lift_value,
        composed_witness,
        binary,
        binary_lift_value,
        reports,
    })
}

pub struct N9Run {
    pub system: CircuitSystem,
    pub psi_path: ReconfigSequence,
    pub sigma: SigmaSequence,
    /// Satisfied circuit count at every step.
    pub counts: Vec<u64>,
    pub extracted: ReconfigSequence,
    pub reports: Vec<StageReport>,
}

impl N9Run {
    pub fn all_satisfied(&self) -> bool {
        let total = self.system.circuits.len() as u64;
        self.counts.iter().all(|&c| c == total)
    }

    /// Whether decoding the block sequence gives back the source path.
    pub fn round_trips(&self) -> bool {
        let mut dedup = ReconfigSequence::single(self.psi_path.first().clone());
        for s in &self.psi_path.steps()[1..] {
            dedup.push_dedup(s.clone());
        }
        dedup == self.extracted
    }
}

/// Completeness check at `n = 9`. Without `psi_path` a satisfying path is searched for.
pub fn run_n9(
    inst: &ReconfInstance,
    psi_path: Option<ReconfigSequence>,
    seed: u64,
    max_retries: u32,
    visit_cap: usize,
) -> Result<N9Run> {
    let system = robustize(inst, CircuitKind::Robust).map_err(|e| e.at_stage("robustize"))?;
    if system.n != 9 {
        return Err(Error::InvalidArgument(format!(
            "n9 mode needs a largest alphabet in 257..=512, got n = {}",
            system.n
        ))
        .at_stage("robustize"));
    }
    let psi_path = match psi_path {
        Some(p) => p,
        None => find_satisfying_path(inst, visit_cap)
            .map_err(|e| e.at_stage("source"))?
            .ok_or_else(|| {
                Error::InvalidArgument("no satisfying path between the endpoints".into())
                    .at_stage("source")
            })?,
    };
    let sigma = system
        .completeness_sequence(&psi_path, seed, max_retries)
        .map_err(|e| e.at_stage("robustize"))?;
    let counts = system
        .check_sequence(&sigma)
        .map_err(|e| e.at_stage("robustize"))?;
    let extracted = system
        .extract_psi_sequence(&sigma)
        .map_err(|e| e.at_stage("robustize"))?;
    let mut src = StageReport::new("source", &inst.graph);
    if sequence_value(&inst.graph, &psi_path)
        .map_err(|e| e.at_stage("source"))?
        .is_one()
    {
        src.set_value(
            Value::new(
                inst.graph.edge_count() as u64,
                inst.graph.edge_count() as u64,
            ),
            Method::Constructive,
        );
    }
    let total = system.circuits.len() as u64;
    let mut rob = StageReport {
        stage: "robustized",
        vertices: system.graph().vertex_count() << system.n,
        edges: system.circuits.len(),
        max_alphabet: 2,
        maxmin: None,
        perfect: None,
        method: Method::Unchecked,
    };
    if counts.iter().all(|&c| c == total) {
        rob.set_value(Value::new(total, total), Method::Constructive);
    }
    Ok(N9Run {
        system,
        psi_path,
        sigma,
        counts,
        extracted,
        reports: vec![src, rob],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::Assignment;

    fn single_edge() -> ReconfInstance {
        let mut g = ConstraintGraph::new(2, 4).unwrap();
        g.add_vertex("u").unwrap();
        g.add_vertex("v").unwrap();
        g.add_edge(&[0, 1], [[0, 0], [1, 1]]).unwrap();
        ReconfInstance::new(g, Assignment::new(vec![0, 0]), Assignment::new(vec![1, 1])).unwrap()
    }

    #[test]
    fn micro_single_edge_report() {
        let run = run_micro(&single_edge(), &MicroOptions::default()).unwrap();
        let csv = report_csv(&run.reports);
        assert!(csv.starts_with(REPORT_HEADER));
        assert_eq!(run.reports.len(), 4);
        assert_eq!(run.reports[0].maxmin, Some(Value::new(0, 1)));
        assert_eq!(run.reports[1].perfect, Some(false));
        assert!(run
            .composed
            .trace
            .covers(run.composed.instance.graph.vertex_ids()));
    }
}
