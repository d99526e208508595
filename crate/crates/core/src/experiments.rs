//! Scripted experiments. Each produces a CSV table and a pass flag.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use itertools::Itertools;
use rand::Rng;

use crate::compose::arity_reduce;
use crate::constants;
use crate::csp::{Assignment, ConstraintGraph, ReconfInstance, Symbol, Value};
use crate::error::{Error, Result};
use crate::generate::{generate, prune_to_endpoints, GenerateParams, Shape};
use crate::hadamard::{
    disagreement_set, distance_profile, generate_codeword_path, partial_sum_experiment,
    partition_triple, random_message, verify_codeword_path, CodewordPath,
};
use crate::pipeline::{report_csv, run_micro, MicroOptions, StageReport, REPORT_HEADER};
use crate::seeds;
use crate::solver::maxmin_value;

pub const NAMES: [&str; 5] = [
    "fig2-profile",
    "partial-sum",
    "obs-n3",
    "claim-partition",
    "micro-pipeline",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentOutput {
    pub csv: String,
    pub pass: bool,
    /// One human-readable line.
    pub summary: String,
}

/// Distance profile of one random verified codeword path. Distances are Hamming counts
/// out of `positions`.
pub fn fig2_profile(n: u32, seed: u64, max_retries: u32) -> Result<ExperimentOutput> {
    if !(2..=crate::robustize::MAX_N).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "n must be in 2..={}",
            crate::robustize::MAX_N
        )));
    }
    let mut rng = seeds::rng(seed, "fig2-profile", 0);
    let alpha = random_message(&mut rng, n);
    let beta = loop {
        let b = random_message(&mut rng, n);
        if b != alpha {
            break b;
        }
    };
    let path = generate_codeword_path(alpha, beta, n, seed, max_retries)?;
    let verdict = verify_codeword_path(&path)?;
    let mut csv = String::from("step,dist-alpha,dist-beta,min-dist-other,argmin-other,positions\n");
    for r in distance_profile(&path)? {
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            r.step,
            r.dist_alpha,
            r.dist_beta,
            r.min_dist_other,
            r.argmin_other,
            1u64 << n
        )
        .unwrap();
    }
    Ok(ExperimentOutput {
        csv,
        pass: verdict.is_pass(),
        summary: format!("n = {n}, alpha = {alpha}, beta = {beta}: {verdict:?}"),
    })
}

pub fn partial_sum(half_len: usize, trials: u64, seed: u64) -> ExperimentOutput {
    let r = partial_sum_experiment(half_len, trials, seed);
    let freq = r.frequency();
    let csv = format!(
        "half-len,trials,threshold,hits,frequency,bound\n{},{},{},{},{}/{},{:e}\n",
        r.half_len,
        r.trials,
        r.threshold,
        r.hits,
        freq.numer(),
        freq.denom(),
        r.bound
    );
    // the bound is only claimed for N > 100
    let pass = half_len <= 100 || r.hits as f64 <= r.bound * r.trials as f64;
    ExperimentOutput {
        csv,
        pass,
        summary: format!(
            "{} of {} trials dip to -{} (bound {:e})",
            r.hits, r.trials, r.threshold, r.bound
        ),
    }
}

/// Every flip order of every ordered pair at `n = 3`, counting orders that pass within
/// `1/4` of a third codeword.
pub fn obs_n3() -> Result<ExperimentOutput> {
    let n = 3;
    let close = constants::close_radius(n);
    let mut csv = String::from("alpha,beta,orders,failing-orders\n");
    let mut pass = true;
    let mut pairs = 0;
    for (alpha, beta) in (0..8u64).cartesian_product(0..8u64).filter(|(a, b)| a != b) {
        let d = disagreement_set(alpha, beta, n)?;
        let mut orders = 0;
        let mut failing = 0;
        for flips in d.iter().copied().permutations(d.len()) {
            let path = CodewordPath {
                n,
                alpha,
                beta,
                flips,
            };
            orders += 1;
            if distance_profile(&path)?
                .iter()
                .any(|r| r.min_dist_other <= close)
            {
                failing += 1;
            }
        }
        pass &= failing == orders;
        pairs += 1;
        writeln!(csv, "{alpha},{beta},{orders},{failing}").unwrap();
    }
    Ok(ExperimentOutput {
        csv,
        pass,
        summary: if pass {
            format!("all flip orders fail for all {pairs} ordered pairs")
        } else {
            "some flip order avoids every third codeword".into()
        },
    })
}

/// Class sizes over all ordered triples of distinct messages, grouped by size.
pub fn claim_partition(n: u32) -> Result<ExperimentOutput> {
    if !(2..=7).contains(&n) {
        return Err(Error::InvalidArgument("n must be in 2..=7".into()));
    }
    let count = 1u64 << n;
    let mut groups: BTreeMap<[usize; 4], u64> = BTreeMap::new();
    let mut union_failures = 0u64;
    for (a, b, c) in (0..count)
        .cartesian_product(0..count)
        .cartesian_product(0..count)
        .map(|((a, b), c)| (a, b, c))
        .filter(|&(a, b, c)| a != b && b != c && a != c)
    {
        let r = partition_triple(a, b, c, n)?;
        *groups.entry(r.sizes()).or_default() += 1;
        let mut union: Vec<usize> = r.p_alpha.iter().chain(&r.p_beta).copied().collect();
        union.sort_unstable();
        if union != disagreement_set(a, b, n)? {
            union_failures += 1;
        }
    }
    let quarter = (count / 4) as usize;
    let mut csv = String::from("p-alpha,p-beta,p-gamma,p-equal,triples\n");
    for (s, k) in &groups {
        writeln!(csv, "{},{},{},{},{k}", s[0], s[1], s[2], s[3]).unwrap();
    }
    let pass = union_failures == 0 && groups.keys().all(|s| *s == [quarter; 4]);
    let triples: u64 = groups.values().sum();
    Ok(ExperimentOutput {
        csv,
        pass,
        summary: format!(
            "{triples} triples, {} size classes, {union_failures} union failures",
            groups.len()
        ),
    })
}

/// Micro corpus member `i`. Every fifth member is a fan: `u` moves from 0 to 2 while its
/// neighbour `v` stays at 0, with a tail edge `v w` when three vertices are used. The
/// others are generated 2- or 3-vertex paths over 4 letters with constraint density
/// cycling through 0.2, 0.6 and 1, where indices `4 mod 5` keep only their endpoint pairs.
pub fn micro_instance(seed: u64, i: u64) -> Result<ReconfInstance> {
    let vertices = 2 + (i % 2) as usize;
    if i.is_multiple_of(5) {
        return fan_instance(2 + (i / 5 % 2) as usize);
    }
    let (inst, _) = generate(&GenerateParams {
        shape: Shape::Path,
        vertices,
        alphabet: 4,
        density: [0.2, 0.6, 1.0][(i / 2 % 3) as usize],
        satisfiable: true,
        seed: seeds::derive(seed, "micro-corpus", i),
    })?;
    if i % 5 == 4 {
        prune_to_endpoints(&inst)
    } else {
        Ok(inst)
    }
}

fn fan_instance(vertices: usize) -> Result<ReconfInstance> {
    let mut g = ConstraintGraph::new(2, 4)?;
    for id in ["u", "v", "w"].iter().take(vertices) {
        g.add_vertex(*id)?;
    }
    g.add_edge(&[0, 1], [[0, 0], [1, 0], [2, 0]])?;
    if vertices == 3 {
        g.add_edge(&[1, 2], [[0, 0], [0, 1]])?;
    }
    let mut tar = vec![0; vertices];
    tar[0] = 2;
    ReconfInstance::new(g, Assignment::new(vec![0; vertices]), Assignment::new(tar))
}

/// Small random 4-ary instance over 2 letters with satisfying endpoints. Hyperedges
/// may repeat a vertex.
pub fn arity_instance(seed: u64, i: u64) -> Result<ReconfInstance> {
    let mut rng = seeds::rng(seed, "arity-corpus", i);
    let vertices = rng.gen_range(4..=5usize);
    let mut g = ConstraintGraph::new(4, 2)?;
    for v in 0..vertices {
        g.add_vertex(format!("v{v}"))?;
    }
    let psi = |rng: &mut rand_chacha::ChaCha8Rng| {
        Assignment::new((0..vertices).map(|_| rng.gen_range(0..2)).collect())
    };
    let ini = psi(&mut rng);
    let tar = psi(&mut rng);
    for _ in 0..rng.gen_range(1..=2) {
        let verts: Vec<usize> = (0..4).map(|_| rng.gen_range(0..vertices)).collect();
        let mut tuples: Vec<Vec<Symbol>> = [&ini, &tar]
            .iter()
            .map(|p| verts.iter().map(|&v| p.get(v)).collect())
            .collect();
        for t in 0..16u32 {
            if rng.gen_bool(0.4) {
                tuples.push((0..4).map(|j| t >> j & 1).collect());
            }
        }
        g.add_edge(&verts, &tuples)?;
    }
    ReconfInstance::new(g, ini, tar)
}

fn row(out: &mut String, label: &str, r: &StageReport) {
    let line = report_csv(std::slice::from_ref(r));
    let body = line.lines().nth(1).unwrap_or_default();
    writeln!(out, "{label},{body}").unwrap();
}

/// Runs the micro pipeline on `count` corpus instances and the exact 4-ary versus
/// binary comparison on `count` small 4-ary instances.
///
/// Checks: a lifted value-1 sequence has value 1 at the next stage; no stage is reported
/// perfect after an imperfect one in a way the reductions forbid; the robustized and
/// composed stages agree on perfection; and exact 4-ary and binary values satisfy
/// `m_bin = 1 ⇔ m_4 = 1` and `1 - m_bin ≥ (1 - m_4)/4`.
pub fn micro_pipeline(seed: u64, count: u64, opts: &MicroOptions) -> Result<ExperimentOutput> {
    let mut csv = format!("instance,{REPORT_HEADER}\n");
    let mut failures = Vec::new();
    for i in 0..count {
        let inst = micro_instance(seed, i)?;
        let run = run_micro(&inst, opts)?;
        for r in &run.reports {
            row(&mut csv, &format!("m{i}"), r);
        }
        failures.extend(run.failures().into_iter().map(|f| format!("m{i}: {f}")));
    }
    for i in 0..count {
        let inst = arity_instance(seed, i)?;
        let red = arity_reduce(&inst, opts.code_limit)?;
        let m4 = maxmin_value(&inst, opts.budget)?.optimum;
        let mb = maxmin_value(&red.instance, opts.budget)?.optimum;
        for (stage, g, m) in [
            ("arity-source", &inst.graph, m4),
            ("arity-binary", &red.instance.graph, mb),
        ] {
            let r = StageReport {
                stage,
                vertices: g.vertex_count(),
                edges: g.edge_count(),
                max_alphabet: g.max_alphabet(),
                maxmin: Some(m),
                perfect: Some(m.is_one()),
                method: crate::pipeline::Method::Exact,
            };
            row(&mut csv, &format!("a{i}"), &r);
        }
        if !arity_bound_holds(m4, mb) {
            failures.push(format!("a{i}: arity bound fails ({m4:?} vs {mb:?})"));
        }
    }
    let t = constants::theoretical();
    let summary = if failures.is_empty() {
        format!(
            "all checks hold; theoretical constants (not reproduced): kappa = {}, final alphabet = {}",
            t.kappa, t.final_alphabet
        )
    } else {
        failures.join("; ")
    };
    Ok(ExperimentOutput {
        csv,
        pass: failures.is_empty(),
        summary,
    })
}

/// `m_bin = 1 ⇔ m_4 = 1` and `4·(1 - m_bin) ≥ 1 - m_4`.
pub fn arity_bound_holds(m4: Value, mb: Value) -> bool {
    let lhs = 4 * mb.violated() as u128 * m4.total as u128;
    let rhs = m4.violated() as u128 * mb.total as u128;
    m4.is_one() == mb.is_one() && lhs >= rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_experiments_pass() {
        assert!(obs_n3().unwrap().pass);
        let c = claim_partition(3).unwrap();
        assert!(c.pass, "{}", c.summary);
        assert!(c.csv.contains("2,2,2,2,336"));
        assert!(partial_sum(2, 100, 1).pass);
        assert!(claim_partition(8).is_err());
    }

    #[test]
    fn arity_bound_arithmetic() {
        assert!(arity_bound_holds(Value::new(1, 1), Value::new(4, 4)));
        assert!(arity_bound_holds(Value::new(1, 2), Value::new(7, 8)));
        assert!(!arity_bound_holds(Value::new(0, 1), Value::new(7, 8)));
        assert!(!arity_bound_holds(Value::new(1, 1), Value::new(7, 8)));
    }
}
