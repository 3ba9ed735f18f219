use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Undirected simple graph on nodes `0..n`.
///
/// Adjacency lists are sorted. `labels[v]` is the identifier node `v`
/// carried in its source (1-based position for generated graphs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    labels: Vec<u64>,
    num_edges: usize,
}

impl Graph {
    /// Builds a graph from an edge list, dropping self-loops and duplicate
    /// edges in either orientation.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (u, w) in edges {
            for v in [u, w] {
                if v >= n {
                    return Err(Error::NodeOutOfRange { node: v, n });
                }
            }
            if u != w {
                adj[u].push(w);
                adj[w].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let num_edges = adj.iter().map(Vec::len).sum::<usize>() / 2;
        Ok(Self {
            adj,
            labels: (1..=n as u64).collect(),
            num_edges,
        })
    }

    pub fn with_labels(mut self, labels: Vec<u64>) -> Self {
        assert_eq!(labels.len(), self.adj.len(), "one label per node");
        self.labels = labels;
        self
    }

    pub fn num_nodes(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, w: usize) -> bool {
        self.adj[u].binary_search(&w).is_ok()
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Each undirected edge once, as `(u, w)` with `u < w`, in order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&w| w > u).map(move |&w| (u, w)))
    }

    /// Induced subgraph on `keep` (in the given order), labels carried over.
    pub fn induced(&self, keep: &[usize]) -> Self {
        let mut index = vec![usize::MAX; self.num_nodes()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges()
            .filter(|&(u, w)| index[u] != usize::MAX && index[w] != usize::MAX)
            .map(|(u, w)| (index[u], index[w]));
        let labels = keep.iter().map(|&v| self.labels[v]).collect();
        Self::from_edges(keep.len(), edges)
            .expect("indices are in range")
            .with_labels(labels)
    }

    /// BFS distances from `source`; `usize::MAX` marks unreachable nodes.
    pub fn bfs_distances(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.num_nodes()];
        let mut queue = VecDeque::from([source]);
        dist[source] = 0;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.num_nodes();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Largest connected component; ties go to the one with the smallest node.
    pub fn largest_component(&self) -> Vec<usize> {
        self.components().into_iter().fold(
            Vec::new(),
            |best, c| if c.len() > best.len() { c } else { best },
        )
    }
}
