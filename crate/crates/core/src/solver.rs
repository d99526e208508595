//! Exact maxmin reconfiguration by breadth-first threshold search.
//!
//! States are whole assignments encoded as mixed-radix integers (vertex 0 least
//! significant). For a threshold `k` the search walks the graph whose nodes are the
//! assignments satisfying at least `k` edges and whose moves change one vertex. The
//! maxmin value is the largest `k` for which the endpoints are connected.

use std::collections::{HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::csp::{Assignment, ConstraintGraph, ReconfInstance, ReconfigSequence, Symbol, Value};
use crate::error::{Error, Result};
use crate::seeds;

pub const DEFAULT_BUDGET: u64 = 1 << 24;

const UNSEEN: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxminResult {
    pub optimum: Value,
    /// A shortest sequence whose worst step attains `optimum`.
    pub witness: Option<ReconfigSequence>,
}

/// Exact search over all assignments of one instance.
pub struct Solver<'a> {
    inst: &'a ReconfInstance,
    radices: Vec<u64>,
    weights: Vec<u64>,
    incidence: Vec<Vec<usize>>,
    states: u64,
}

impl<'a> Solver<'a> {
    pub fn new(inst: &'a ReconfInstance, budget: u64) -> Result<Self> {
        let g = &inst.graph;
        if g.edge_count() == 0 {
            return Err(Error::NoConstraints);
        }
        g.check_assignment(&inst.psi_ini)?;
        g.check_assignment(&inst.psi_tar)?;
        let configurations = g.configuration_count();
        let budget = budget.min(UNSEEN as u64 - 1);
        if configurations > budget as u128 {
            return Err(Error::StateBudgetExceeded {
                configurations,
                budget,
            });
        }
        let radices: Vec<u64> = (0..g.vertex_count())
            .map(|v| g.alphabet_of(v) as u64)
            .collect();
        let mut weights = Vec::with_capacity(radices.len());
        let mut w = 1u64;
        for &r in &radices {
            weights.push(w);
            w *= r;
        }
        Ok(Solver {
            inst,
            radices,
            weights,
            incidence: g.incidence(),
            states: configurations as u64,
        })
    }

    fn encode(&self, values: &[Symbol]) -> u64 {
        values
            .iter()
            .zip(&self.weights)
            .map(|(&s, &w)| s as u64 * w)
            .sum()
    }

    fn decode_into(&self, mut code: u64, out: &mut [Symbol]) {
        for (slot, &r) in out.iter_mut().zip(&self.radices) {
            *slot = (code % r) as Symbol;
            code /= r;
        }
    }

    fn graph(&self) -> &ConstraintGraph {
        &self.inst.graph
    }

    fn local_satisfied(&self, v: usize, values: &[Symbol]) -> u64 {
        self.incidence[v]
            .iter()
            .filter(|&&e| self.graph().edge(e).is_satisfied_by(values))
            .count() as u64
    }

    /// Shortest sequence between the endpoints through assignments satisfying at least
    /// `k` edges, or `None` when none exists.
    pub fn reachable(&self, k: u64) -> Option<ReconfigSequence> {
        let g = self.graph();
        let ini = self.inst.psi_ini.values();
        let tar = self.inst.psi_tar.values();
        if g.satisfied_count(ini) < k || g.satisfied_count(tar) < k {
            return None;
        }
        let start = self.encode(ini);
        let goal = self.encode(tar);
        let mut parent = vec![UNSEEN; self.states as usize];
        parent[start as usize] = start as u32;
        let mut queue = VecDeque::from([(start, g.satisfied_count(ini))]);
        let mut values = vec![0; g.vertex_count()];
        while let Some((code, count)) = queue.pop_front() {
            if code == goal {
                break;
            }
            self.decode_into(code, &mut values);
            for v in 0..values.len() {
                let old = values[v];
                let before = self.local_satisfied(v, &values);
                for s in 0..self.radices[v] as Symbol {
                    if s == old {
                        continue;
                    }
                    let next = code - old as u64 * self.weights[v] + s as u64 * self.weights[v];
                    if parent[next as usize] != UNSEEN {
                        continue;
                    }
                    values[v] = s;
                    let c = count - before + self.local_satisfied(v, &values);
                    if c >= k {
                        parent[next as usize] = code as u32;
                        queue.push_back((next, c));
                    }
                }
                values[v] = old;
            }
        }
        if parent[goal as usize] == UNSEEN {
            return None;
        }
        let mut codes = vec![goal];
        let mut cur = goal;
        while cur != start {
            cur = parent[cur as usize] as u64;
            codes.push(cur);
        }
        codes.reverse();
        let steps = codes
            .into_iter()
            .map(|c| {
                let mut vals = vec![0; g.vertex_count()];
                self.decode_into(c, &mut vals);
                Assignment::new(vals)
            })
            .collect();
        Some(ReconfigSequence::new(steps).expect("path is non-empty"))
    }

    pub fn maxmin(&self) -> MaxminResult {
        let g = self.graph();
        let total = g.edge_count() as u64;
        // every assignment is reachable at threshold 0
        let mut lo = 0;
        let mut witness = self.reachable(0);
        let mut hi = g
            .satisfied_count(self.inst.psi_ini.values())
            .min(g.satisfied_count(self.inst.psi_tar.values()));
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            match self.reachable(mid) {
                Some(w) => {
                    lo = mid;
                    witness = Some(w);
                }
                None => hi = mid - 1,
            }
        }
        MaxminResult {
            optimum: Value::new(lo, total),
            witness,
        }
    }
}

/// Whether the endpoints are connected through assignments satisfying at least `k`
/// edges, with a shortest witness.
pub fn reachable_at_threshold(
    inst: &ReconfInstance,
    k: u64,
    budget: u64,
) -> Result<Option<ReconfigSequence>> {
    Ok(Solver::new(inst, budget)?.reachable(k))
}

pub fn maxmin_value(inst: &ReconfInstance, budget: u64) -> Result<MaxminResult> {
    Ok(Solver::new(inst, budget)?.maxmin())
}

/// Shortest sequence between the endpoints through fully satisfying assignments only,
/// exploring at most `visit_cap` of them. Works on instances far beyond the exact
/// search budget when satisfying assignments are sparse.
pub fn find_satisfying_path(
    inst: &ReconfInstance,
    visit_cap: usize,
) -> Result<Option<ReconfigSequence>> {
    let g = &inst.graph;
    g.check_assignment(&inst.psi_ini)?;
    g.check_assignment(&inst.psi_tar)?;
    if !inst.endpoints_satisfy() {
        return Ok(None);
    }
    let incidence = g.incidence();
    let start = inst.psi_ini.values().to_vec();
    let goal = inst.psi_tar.values().to_vec();
    let mut parent: HashMap<Vec<Symbol>, Option<Vec<Symbol>>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        if cur == goal {
            let mut steps = vec![Assignment::new(cur.clone())];
            let mut at = cur;
            while let Some(Some(p)) = parent.get(&at) {
                steps.push(Assignment::new(p.clone()));
                at = p.clone();
            }
            steps.reverse();
            return Ok(Some(ReconfigSequence::new(steps)?));
        }
        let mut next = cur.clone();
        for v in 0..cur.len() {
            for s in 0..g.alphabet_of(v) {
                if s == cur[v] {
                    continue;
                }
                next[v] = s;
                let ok = incidence[v]
                    .iter()
                    .all(|&e| g.edge(e).is_satisfied_by(&next));
                if ok && !parent.contains_key(&next) {
                    if parent.len() >= visit_cap {
                        return Err(Error::StateBudgetExceeded {
                            configurations: g.configuration_count(),
                            budget: visit_cap as u64,
                        });
                    }
                    parent.insert(next.clone(), Some(cur.clone()));
                    queue.push_back(next.clone());
                }
            }
            next[v] = cur[v];
        }
    }
    Ok(None)
}

/// Seeded random walk from `psi_ini` that makes `scramble` random single-vertex
/// changes and then moves each vertex that differs from `psi_tar` straight to its
/// target value, in random order.
pub fn random_adversarial_sequence(
    inst: &ReconfInstance,
    seed: u64,
    scramble: usize,
) -> Result<ReconfigSequence> {
    let g = &inst.graph;
    g.check_assignment(&inst.psi_ini)?;
    g.check_assignment(&inst.psi_tar)?;
    let mut rng = seeds::rng(seed, "adversarial-sequence", 0);
    let mut cur = inst.psi_ini.clone();
    let mut seq = ReconfigSequence::single(cur.clone());
    let movable: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| g.alphabet_of(v) > 1)
        .collect();
    if !movable.is_empty() {
        for _ in 0..scramble {
            let v = *movable.choose(&mut rng).unwrap();
            let w = g.alphabet_of(v);
            let shift = rng.gen_range(1..w);
            cur.set(v, (cur.get(v) + shift) % w);
            seq.push_dedup(cur.clone());
        }
    }
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.shuffle(&mut rng);
    for v in order {
        if cur.get(v) != inst.psi_tar.get(v) {
            cur.set(v, inst.psi_tar.get(v));
            seq.push_dedup(cur.clone());
        }
    }
    Ok(seq)
}
