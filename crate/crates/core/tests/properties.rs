use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use reconf_core::compose::{arity_reduce, compose_system, ReferenceTester, DEFAULT_CODE_LIMIT};
use reconf_core::experiments::{arity_instance, micro_instance};
use reconf_core::format::{parse_instance, parse_sequence, write_instance, write_sequence};
use reconf_core::generate::{generate, GenerateParams, Shape};
use reconf_core::hadamard::{
    generate_codeword_path, had_encode, partition_triple, BitFunction, Codebook,
};
use reconf_core::robustize::{robustize, BlockAssignment, CircuitKind, RobustCircuit};
use reconf_core::solver::{maxmin_value, reachable_at_threshold, DEFAULT_BUDGET};
use reconf_core::{
    sequence_value, value, Assignment, ConstraintGraph, ReconfInstance, ReconfigSequence, Value,
};

fn small_instance(seed: u64, satisfiable: bool) -> ReconfInstance {
    let shape = [Shape::Path, Shape::Cycle, Shape::Random { edges: 3 }][(seed % 3) as usize];
    generate(&GenerateParams {
        shape,
        vertices: 4,
        alphabet: 3,
        density: 0.3,
        satisfiable,
        seed,
    })
    .unwrap()
    .0
}

/// Random walk of single-vertex changes from `start`.
fn random_walk(
    g: &ConstraintGraph,
    start: &Assignment,
    len: usize,
    rng: &mut ChaCha8Rng,
) -> ReconfigSequence {
    let mut cur = start.clone();
    let mut steps = vec![cur.clone()];
    for _ in 0..len {
        let v = rng.gen_range(0..g.vertex_count());
        cur.set(v, rng.gen_range(0..g.alphabet_of(v)));
        steps.push(cur.clone());
    }
    ReconfigSequence::new(steps).unwrap()
}

/// Copy of `g` with vertices relabelled by `perm` and hyperedges in `order`.
fn relabel(g: &ConstraintGraph, perm: &[usize], order: &[usize]) -> ConstraintGraph {
    let mut inv = vec![0; perm.len()];
    for (v, &p) in perm.iter().enumerate() {
        inv[p] = v;
    }
    let mut out = ConstraintGraph::new(g.arity(), g.alphabet()).unwrap();
    for &v in &inv {
        out.add_vertex(g.vertex_id(v)).unwrap();
    }
    for &e in order {
        let h = g.edge(e);
        let vs: Vec<usize> = h.vertices().iter().map(|&v| perm[v]).collect();
        out.add_edge(&vs, h.accepted_tuples().collect::<Vec<_>>())
            .unwrap();
    }
    out
}

fn permute_assignment(psi: &Assignment, perm: &[usize]) -> Assignment {
    let mut out = vec![0; psi.len()];
    for (v, &p) in perm.iter().enumerate() {
        out[p] = psi.get(v);
    }
    Assignment::new(out)
}

/// Invertible matrix over GF(2) as row bitmasks.
fn invertible(n: u32, rng: &mut ChaCha8Rng) -> Vec<u64> {
    loop {
        let rows: Vec<u64> = (0..n).map(|_| rng.gen_range(0..1u64 << n)).collect();
        let mut m = rows.clone();
        let mut rank = 0;
        for bit in 0..n {
            if let Some(p) = (rank..n as usize).find(|&r| m[r] >> bit & 1 == 1) {
                m.swap(rank, p);
                for r in 0..n as usize {
                    if r != rank && m[r] >> bit & 1 == 1 {
                        m[r] ^= m[rank];
                    }
                }
                rank += 1;
            }
        }
        if rank == n as usize {
            return rows;
        }
    }
}

fn apply(rows: &[u64], x: u64) -> u64 {
    rows.iter().enumerate().fold(0, |acc, (i, &r)| {
        acc | (((r & x).count_ones() as u64 & 1) << i)
    })
}

fn transpose_apply(rows: &[u64], alpha: u64) -> u64 {
    rows.iter()
        .enumerate()
        .filter(|(i, _)| alpha >> i & 1 == 1)
        .fold(0, |acc, (_, &r)| acc ^ r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn value_invariant_under_relabelling(seed in 0u64..10_000, shuffle in any::<u64>()) {
        let inst = small_instance(seed, seed % 2 == 0);
        let g = &inst.graph;
        let mut rng = ChaCha8Rng::seed_from_u64(shuffle);
        let mut perm: Vec<usize> = (0..g.vertex_count()).collect();
        perm.shuffle(&mut rng);
        let mut order: Vec<usize> = (0..g.edge_count()).collect();
        order.shuffle(&mut rng);
        let h = relabel(g, &perm, &order);
        for _ in 0..8 {
            let psi = Assignment::new((0..g.vertex_count()).map(|v| rng.gen_range(0..g.alphabet_of(v))).collect());
            prop_assert_eq!(value(g, &psi).unwrap(), value(&h, &permute_assignment(&psi, &perm)).unwrap());
        }
    }

    #[test]
    fn sequence_value_bounds(seed in 0u64..10_000, walk in any::<u64>(), len in 0usize..12) {
        let inst = small_instance(seed, true);
        let g = &inst.graph;
        let mut rng = ChaCha8Rng::seed_from_u64(walk);
        let a = random_walk(g, &inst.psi_ini, len, &mut rng);
        let b = random_walk(g, a.last(), len, &mut rng);
        let va = sequence_value(g, &a).unwrap();
        let vb = sequence_value(g, &b).unwrap();
        prop_assert!(va <= value(g, a.first()).unwrap());
        prop_assert!(va <= value(g, a.last()).unwrap());
        prop_assert_eq!(va, sequence_value(g, &a.reversed()).unwrap());
        prop_assert_eq!(sequence_value(g, &a.concat(&b).unwrap()).unwrap(), va.min(vb));
    }

    #[test]
    fn value_order_is_rational_order(a in 0u64..50, b in 1u64..50, c in 0u64..50, d in 1u64..50) {
        let (a, c) = (a.min(b), c.min(d));
        let x = Value::new(a, b);
        let y = Value::new(c, d);
        prop_assert_eq!(x.cmp(&y), (a * d).cmp(&(c * b)));
        prop_assert_eq!(x.violated(), b - a);
    }

    #[test]
    fn instance_text_round_trips(seed in 0u64..10_000, walk in any::<u64>()) {
        let inst = small_instance(seed, seed % 3 != 0);
        let text = write_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(write_instance(&back), text);
        let mut rng = ChaCha8Rng::seed_from_u64(walk);
        let seq = random_walk(&inst.graph, &inst.psi_ini, 6, &mut rng);
        let raw = parse_sequence(&write_sequence(&inst.graph, &seq)).unwrap();
        prop_assert_eq!(raw.resolve(&inst.graph).unwrap(), seq);
    }

    #[test]
    fn solver_symmetric_and_monotone(seed in 0u64..10_000) {
        let inst = small_instance(seed, seed % 2 == 0);
        let fwd = maxmin_value(&inst, DEFAULT_BUDGET).unwrap();
        let back = maxmin_value(&inst.swapped(), DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(fwd.optimum, back.optimum);
        if let Some(w) = &fwd.witness {
            prop_assert_eq!(sequence_value(&inst.graph, w).unwrap(), fwd.optimum);
            prop_assert_eq!(w.first(), &inst.psi_ini);
            prop_assert_eq!(w.last(), &inst.psi_tar);
        }
        let m = inst.graph.edge_count() as u64;
        let mut reachable = true;
        for k in 0..=m {
            let now = reachable_at_threshold(&inst, k, DEFAULT_BUDGET).unwrap().is_some();
            prop_assert!(reachable || !now);
            prop_assert_eq!(now, k <= fwd.optimum.satisfied);
            reachable = now;
        }
    }

    #[test]
    fn codeword_path_distances_move_by_one(alpha in 0u64..128, beta in 0u64..128, gamma in 0u64..128, seed in any::<u64>()) {
        let n = 7;
        prop_assume!(alpha != beta && gamma != alpha && gamma != beta);
        let path = generate_codeword_path(alpha, beta, n, seed, 0).unwrap();
        prop_assert_eq!(path.len(), (1 << (n - 1)) + 1);
        let book = Codebook::get(n);
        let part = partition_triple(alpha, beta, gamma, n).unwrap();
        let mut f = path.start().unwrap();
        let mut prev = book.distances(&f).unwrap();
        prop_assert_eq!(&f, book.codeword(alpha));
        for &x in &path.flips {
            f.flip(x);
            let d = book.distances(&f).unwrap();
            prop_assert_eq!(d[alpha as usize], prev[alpha as usize] + 1);
            prop_assert_eq!(d[beta as usize] + 1, prev[beta as usize]);
            let expected = if part.p_alpha.contains(&x) {
                prev[gamma as usize] - 1
            } else {
                prop_assert!(part.p_beta.contains(&x));
                prev[gamma as usize] + 1
            };
            prop_assert_eq!(d[gamma as usize], expected);
            prev = d;
        }
        prop_assert_eq!(&f, book.codeword(beta));
    }

    #[test]
    fn circuit_verdict_follows_linear_relabelling(
        n in 2u32..5,
        seed in any::<u64>(),
        kind in prop_oneof![Just(CircuitKind::Robust), Just(CircuitKind::Weakened)],
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let size = 1u64 << n;
        let pairs: Vec<(u32, u32)> = (0..rng.gen_range(1..6))
            .map(|_| (rng.gen_range(0..size) as u32, rng.gen_range(0..size) as u32))
            .collect();
        let a = invertible(n, &mut rng);
        let moved: Vec<(u32, u32)> = pairs
            .iter()
            .map(|&(x, y)| (transpose_apply(&a, x as u64) as u32, transpose_apply(&a, y as u64) as u32))
            .collect();
        let c = RobustCircuit::new(0, (0, 1), n, kind, pairs.iter().copied()).unwrap();
        let c2 = RobustCircuit::new(0, (0, 1), n, kind, moved.iter().copied()).unwrap();
        let (p, q) = pairs[0];
        for _ in 0..16 {
            let mut f = had_encode(p as u64, n).unwrap();
            let mut g = had_encode(q as u64, n).unwrap();
            for _ in 0..rng.gen_range(0..=size / 2) {
                f.flip(rng.gen_range(0..size as usize));
                g.flip(rng.gen_range(0..size as usize));
            }
            let compose_with = |h: &BitFunction| {
                let mut out = BitFunction::zeros(n).unwrap();
                for x in 0..size {
                    out.set(x as usize, h.get(apply(&a, x) as usize));
                }
                out
            };
            prop_assert_eq!(c.eval(&f, &g).unwrap(), c2.eval(&compose_with(&f), &compose_with(&g)).unwrap());
        }
    }

    #[test]
    fn encoded_satisfying_assignment_satisfies_every_circuit(
        seed in 0u64..10_000,
        kind in prop_oneof![Just(CircuitKind::Robust), Just(CircuitKind::Weakened)],
    ) {
        let inst = small_instance(seed, true);
        let system = robustize(&inst, kind).unwrap();
        prop_assert_eq!(system.circuits.len(), inst.graph.edge_count());
        for psi in [&inst.psi_ini, &inst.psi_tar] {
            let sigma = BlockAssignment::encode(psi, system.n).unwrap();
            prop_assert_eq!(system.satisfied_count(&sigma).unwrap(), system.circuits.len() as u64);
            prop_assert_eq!(&sigma.decode(), psi);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn composition_pads_and_keeps_endpoints(i in 0u64..10) {
        let inst = micro_instance(3, i).unwrap();
        let system = robustize(&inst, CircuitKind::Robust).unwrap();
        let composed = compose_system(&system, &ReferenceTester).unwrap();
        let per_edge = composed.trace.edges_per_source();
        let counts: Vec<usize> = (0..inst.graph.edge_count()).map(|e| per_edge[&e]).collect();
        prop_assert!(counts.windows(2).all(|w| w[0] == w[1]));
        prop_assert!(composed.instance.endpoints_satisfy());
    }

    #[test]
    fn arity_reduction_keeps_endpoints(i in 0u64..40) {
        let inst = arity_instance(5, i).unwrap();
        let red = arity_reduce(&inst, DEFAULT_CODE_LIMIT).unwrap();
        prop_assert!(inst.endpoints_satisfy() == red.instance.endpoints_satisfy());
        prop_assert_eq!(red.instance.graph.arity(), 2);
        prop_assert_eq!(&red.restrict_sequence(&ReconfigSequence::single(red.instance.psi_ini.clone())).first().clone(), &inst.psi_ini);
    }
}

#[test]
fn hadamard_encoding_is_linear() {
    for n in 1..=6u32 {
        for a in 0..1u64 << n {
            for b in 0..1u64 << n {
                let x = had_encode(a, n)
                    .unwrap()
                    .xor(&had_encode(b, n).unwrap())
                    .unwrap();
                assert_eq!(x, had_encode(a ^ b, n).unwrap());
            }
        }
    }
}
