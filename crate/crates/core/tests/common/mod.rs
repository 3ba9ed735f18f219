//! Independent reference implementations used only by tests.
#![allow(dead_code, clippy::needless_range_loop)]

use pooltest::cost_model::ModelParams;
use pooltest::graph::Graph;
use pooltest::sampled_graph::SampledGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Expected relative cost by summing over every hidden-type sequence of
/// length `m`, weighted by its chain probability.
pub fn enumerated_cost(params: &ModelParams, m: usize) -> f64 {
    let k = params.num_types();
    let (pi, r0, w) = (params.pi(), params.r0(), params.omega());
    let step = |i: usize, j: usize| if i == j { w } else { 0.0 } + (1.0 - w) * pi[j];
    let mut all_negative = 0.0;
    let mut seq = vec![0usize; m];
    loop {
        let mut p = pi[seq[0]] * r0[seq[0]];
        for t in 1..m {
            p *= step(seq[t - 1], seq[t]) * r0[seq[t]];
        }
        all_negative += p;
        // odometer increment
        let mut pos = m;
        loop {
            if pos == 0 {
                return (m as f64 + 1.0) / m as f64 - all_negative;
            }
            pos -= 1;
            seq[pos] += 1;
            if seq[pos] < k {
                break;
            }
            seq[pos] = 0;
        }
    }
}

pub fn random_params<R: Rng>(rng: &mut R, max_types: usize) -> ModelParams {
    let k = rng.random_range(1..=max_types);
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.01..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut pi: Vec<f64> = raw.iter().map(|x| x / total).collect();
    // force an exact unit sum
    let rest: f64 = pi[1..].iter().sum();
    pi[0] = 1.0 - rest;
    let r0 = (0..k).map(|_| rng.random_range(0.0..=1.0)).collect();
    let omega = rng.random_range(0.0..=1.0);
    ModelParams::new(pi, r0, omega).expect("valid random params")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `q(S1, S2)` straight from the joint distribution, without the
/// library's covariance helpers.
pub fn scratch_set_covariance(sg: &SampledGraph, s1: &[usize], s2: &[usize]) -> f64 {
    let mut total = 0.0;
    for &u in s1 {
        for &w in s2 {
            total += sg.joint(u, w) - sg.marginal(u) * sg.marginal(w);
        }
    }
    total
}

/// `T^2 q(u, w)` as exact integers, via a dense `A^2` product.
pub fn scaled_pair_covariances(graph: &Graph) -> Vec<Vec<i128>> {
    let n = graph.num_nodes();
    let a: Vec<Vec<i128>> = (0..n)
        .map(|u| (0..n).map(|w| graph.has_edge(u, w) as i128).collect())
        .collect();
    let w: Vec<Vec<i128>> = (0..n)
        .map(|u| {
            (0..n)
                .map(|v| 2 * a[u][v] + (0..n).map(|k| a[u][k] * a[k][v]).sum::<i128>())
                .collect()
        })
        .collect();
    let s: Vec<i128> = w.iter().map(|r| r.iter().sum()).collect();
    let t: i128 = s.iter().sum();
    (0..n)
        .map(|u| (0..n).map(|v| w[u][v] * t - s[u] * s[v]).collect())
        .collect()
}

/// Direct agglomeration: every step recomputes all set covariances from
/// scratch, in exact integer arithmetic, and scans every pair. Returns the
/// final order.
pub fn naive_hierarchical(sg: &SampledGraph) -> Vec<usize> {
    let q = scaled_pair_covariances(sg.graph());
    let n = sg.num_nodes();
    let set_cov = |a: &[usize], b: &[usize]| -> i128 {
        a.iter()
            .flat_map(|&u| b.iter().map(move |&w| (u, w)))
            .map(|(u, w)| q[u][w])
            .sum()
    };
    let mut sets: Vec<Option<Vec<usize>>> = (0..n).map(|v| Some(vec![v])).collect();
    for _ in 1..n {
        let mut best: Option<(usize, usize, i128)> = None;
        for i in 0..n {
            let Some(si) = &sets[i] else { continue };
            for j in i + 1..n {
                let Some(sj) = &sets[j] else { continue };
                let c = set_cov(si, sj);
                if best.is_none_or(|b| c > b.2) {
                    best = Some((i, j, c));
                }
            }
        }
        let (i, j, _) = best.expect("at least two sets");
        let tail = sets[j].take().unwrap();
        sets[i].as_mut().unwrap().extend(tail);
    }
    sets.into_iter().flatten().next().unwrap()
}

/// Erdos-Renyi graph with at least one edge.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |w| (u, w)))
        .collect();
    edges.retain(|_| rng.random_bool(p));
    if edges.is_empty() {
        edges.push((0, 1));
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Nodes within live-edge distance `depth` of `seeds`, where edge `u -> v`
/// is live when `live(u, v)`. Plain BFS over the live subgraph.
pub fn live_edge_ball(
    graph: &Graph,
    seeds: &[usize],
    depth: usize,
    live: impl Fn(usize, usize) -> bool,
) -> Vec<bool> {
    let n = graph.num_nodes();
    let mut dist = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for &s in seeds {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        for &v in graph.neighbors(u) {
            if dist[v] == usize::MAX && live(u, v) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist.iter().map(|&d| d <= depth).collect()
}
