//! Edge-list ingestion, the synthetic small-world generator, and
//! descriptive graph statistics.

use std::collections::{BTreeSet, HashSet};
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::par;
use crate::rng::{self, tag};

/// Node filtering applied after parsing. Self-loops and duplicate edges
/// are always removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Cleanup {
    #[default]
    None,
    /// Remove nodes left with degree 0.
    DropIsolated,
    /// Keep only the largest connected component.
    LargestComponent,
}

impl FromStr for Cleanup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Cleanup::None),
            "drop-isolated" => Ok(Cleanup::DropIsolated),
            "largest-component" => Ok(Cleanup::LargestComponent),
            other => Err(invalid(
                "cleanup",
                format!("unknown policy `{other}` (none | drop-isolated | largest-component)"),
            )),
        }
    }
}

/// Reads a whitespace-separated edge list. Lines that are blank or start
/// with `#` are skipped. Node ids are compacted to `0..n` in increasing
/// label order; the original ids are kept as [`Graph::labels`].
pub fn load_edge_list<R: BufRead>(reader: R, cleanup: Cleanup) -> Result<Graph> {
    let mut raw = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: i + 1,
                reason: format!("expected two node ids, found {} fields", fields.len()),
            });
        }
        let parse = |s: &str| {
            s.parse::<u64>().map_err(|e| Error::Parse {
                line: i + 1,
                reason: format!("bad node id `{s}`: {e}"),
            })
        };
        raw.push((parse(fields[0])?, parse(fields[1])?));
    }

    let labels: Vec<u64> = raw
        .iter()
        .flat_map(|&(u, w)| [u, w])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index = |l: u64| labels.binary_search(&l).expect("label collected above");
    let edges: Vec<(usize, usize)> = raw.iter().map(|&(u, w)| (index(u), index(w))).collect();
    let graph = Graph::from_edges(labels.len(), edges)?.with_labels(labels);

    let graph = match cleanup {
        Cleanup::None => graph,
        Cleanup::DropIsolated => {
            let keep: Vec<usize> = (0..graph.num_nodes())
                .filter(|&v| graph.degree(v) > 0)
                .collect();
            graph.induced(&keep)
        }
        Cleanup::LargestComponent => graph.induced(&graph.largest_component()),
    };
    if graph.num_nodes() == 0 {
        return Err(Error::EmptyGraph("no nodes left after cleanup".into()));
    }
    Ok(graph)
}

/// Writes one `u w` line per edge using the node labels.
pub fn write_edge_list<W: Write>(graph: &Graph, mut out: W) -> Result<()> {
    let labels = graph.labels();
    for (u, w) in graph.edges() {
        writeln!(out, "{} {}", labels[u], labels[w])?;
    }
    Ok(())
}

/// How a rewired edge is replaced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Rewiring {
    /// Both endpoints of the replacement edge are drawn uniformly.
    #[default]
    BothEndpoints,
    /// Watts-Strogatz: keep the first endpoint, redraw the second.
    OneEndpoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallWorldConfig {
    pub n: usize,
    /// Lattice degree; each node links to `k / 2` neighbours on each side.
    pub k: usize,
    pub rewire_p: f64,
    pub rewiring: Rewiring,
}

impl Default for SmallWorldConfig {
    fn default() -> Self {
        Self {
            n: 1000,
            k: 30,
            rewire_p: 0.5,
            rewiring: Rewiring::BothEndpoints,
        }
    }
}

/// Ring lattice with every edge independently replaced, with probability
/// `rewire_p`, by a random edge. Replacements never create self-loops or
/// duplicates, so the edge count stays `n * k / 2`.
pub fn generate_small_world(config: &SmallWorldConfig, seed: u64) -> Result<Graph> {
    let SmallWorldConfig {
        n,
        k,
        rewire_p,
        rewiring,
    } = *config;
    if k == 0 || k % 2 != 0 {
        return Err(invalid(
            "k",
            format!("lattice degree must be positive and even, got {k}"),
        ));
    }
    if k >= n {
        return Err(invalid(
            "k",
            format!("lattice degree {k} must be below n = {n}"),
        ));
    }
    if !(0.0..=1.0).contains(&rewire_p) {
        return Err(invalid("rewire_p", format!("{rewire_p} is not in [0, 1]")));
    }
    // a complete graph leaves no room for a replacement edge
    if rewire_p > 0.0 && n * k / 2 >= n * (n - 1) / 2 {
        return Err(invalid("k", "lattice is complete; nothing to rewire into"));
    }

    let key = |u: usize, w: usize| (u.min(w), u.max(w));
    let lattice: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (1..=k / 2).map(move |j| key(u, (u + j) % n)))
        .collect();
    let mut present: HashSet<(usize, usize)> = lattice.iter().copied().collect();
    let mut rng = rng::stream(seed, rng::stream_id(tag::GRAPH_GEN, 0, 0));
    for &(u, w) in &lattice {
        if !rng.random_bool(rewire_p) {
            continue;
        }
        present.remove(&(u, w));
        loop {
            let a = match rewiring {
                Rewiring::BothEndpoints => rng.random_range(0..n),
                Rewiring::OneEndpoint => u,
            };
            let b = rng.random_range(0..n);
            if a != b && present.insert(key(a, b)) {
                break;
            }
        }
    }
    Graph::from_edges(n, present)
}

/// Descriptive statistics. Path length and diameter are taken over the
/// largest connected component; other fields over the whole graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    pub avg_degree: f64,
    pub avg_excess_degree: f64,
    pub avg_clustering_coefficient: f64,
    pub avg_path_length: f64,
    pub diameter: usize,
    pub density: f64,
}

impl GraphStats {
    pub const CSV_HEADER: &'static str = "dataset,number_of_nodes,number_of_edges,average_degree,\
average_excess_degree,average_clustering_coefficient,average_path_length,diameter,density";
}

fn local_clustering(graph: &Graph, v: usize) -> f64 {
    let ns = graph.neighbors(v);
    let d = ns.len();
    if d < 2 {
        return 0.0;
    }
    let mut links = 0usize;
    for (i, &a) in ns.iter().enumerate() {
        // count neighbours of `a` among ns[i+1..] by sorted merge
        let (mut x, mut y) = (
            graph.neighbors(a).iter().peekable(),
            ns[i + 1..].iter().peekable(),
        );
        while let (Some(&&p), Some(&&q)) = (x.peek(), y.peek()) {
            match p.cmp(&q) {
                std::cmp::Ordering::Less => {
                    x.next();
                }
                std::cmp::Ordering::Greater => {
                    y.next();
                }
                std::cmp::Ordering::Equal => {
                    links += 1;
                    x.next();
                    y.next();
                }
            }
        }
    }
    2.0 * links as f64 / (d * (d - 1)) as f64
}

pub fn compute_stats(graph: &Graph) -> GraphStats {
    let n = graph.num_nodes();
    let m = graph.num_edges();
    let degrees: Vec<f64> = (0..n).map(|v| graph.degree(v) as f64).collect();
    let sum_k: f64 = degrees.iter().sum();
    let sum_k2: f64 = degrees.iter().map(|k| k * k).sum();
    let avg_excess_degree = if sum_k > 0.0 {
        sum_k2 / sum_k - 1.0
    } else {
        0.0
    };
    let clustering: f64 = par::map_indexed(n, |v| local_clustering(graph, v))
        .iter()
        .sum::<f64>()
        / n as f64;

    let lcc = graph.induced(&graph.largest_component());
    let per_source = par::map_indexed(lcc.num_nodes(), |s| {
        let dist = lcc.bfs_distances(s);
        (
            dist.iter().sum::<usize>(),
            dist.into_iter().max().unwrap_or(0),
        )
    });
    let size = lcc.num_nodes();
    let total: usize = per_source.iter().map(|p| p.0).sum();
    let diameter = per_source.iter().map(|p| p.1).max().unwrap_or(0);
    let avg_path_length = if size > 1 {
        total as f64 / (size * (size - 1)) as f64
    } else {
        0.0
    };
    let density = if n > 1 {
        2.0 * m as f64 / (n as f64 * (n as f64 - 1.0))
    } else {
        0.0
    };
    GraphStats {
        n,
        m,
        avg_degree: if n > 0 { sum_k / n as f64 } else { 0.0 },
        avg_excess_degree,
        avg_clustering_coefficient: clustering,
        avg_path_length,
        diameter,
        density,
    }
}
