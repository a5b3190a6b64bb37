//! Communication graphs: generators, edge sampling and gossip spectra.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Largest node count accepted by the dense eigen-solver.
pub const DEFAULT_EIGEN_CAP: usize = 2000;

/// Watts-Strogatz generation is restarted at most this many times when the
/// rewired graph comes out disconnected.
pub const WS_MAX_RETRIES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Topology {
    Complete,
    Cycle,
    /// Ring lattice of even degree `k`, each clockwise edge rewired with
    /// probability `p`.
    WattsStrogatz { k: usize, p: f64 },
}

/// Undirected simple graph on nodes `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    degrees: Vec<usize>,
}

impl Graph {
    /// Builds a graph from an edge list. Edges are normalized to `(min, max)`
    /// order; self-loops, duplicates and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut list = Vec::new();
        let mut degrees = vec![0; n];
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidParameter(format!("edge ({a}, {b}) out of range for n = {n}")));
            }
            if a == b {
                return Err(Error::InvalidParameter(format!("self-loop at node {a}")));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::InvalidParameter(format!("duplicate edge ({}, {})", e.0, e.1)));
            }
            degrees[a] += 1;
            degrees[b] += 1;
            list.push(e);
        }
        Ok(Self {
            n,
            edges: list,
            degrees,
        })
    }

    pub fn complete(n: usize) -> Result<Self> {
        check_node_count(n)?;
        let edges = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j)));
        Self::from_edges(n, edges)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        check_node_count(n)?;
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// Watts-Strogatz small world: a ring lattice where node `i` links to
    /// `i+1, ..., i+k/2`, then each of those clockwise edges has its far
    /// endpoint rewired with probability `p` to a uniform node that is neither
    /// `i` nor already adjacent to `i`. Disconnected draws are discarded and the
    /// whole graph is regenerated, up to [`WS_MAX_RETRIES`] times.
    pub fn watts_strogatz<R: Rng + ?Sized>(n: usize, k: usize, p: f64, rng: &mut R) -> Result<Self> {
        check_node_count(n)?;
        if k % 2 != 0 || k < 2 || k >= n {
            return Err(Error::InvalidParameter(format!(
                "watts-strogatz degree k = {k} must be even with 2 <= k < n = {n}"
            )));
        }
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(Error::InvalidParameter(format!("rewiring probability {p} not in [0, 1]")));
        }
        for _ in 0..WS_MAX_RETRIES {
            let g = ws_attempt(n, k, p, rng)?;
            if g.is_connected() {
                return Ok(g);
            }
        }
        Err(Error::RetryBudgetExhausted(WS_MAX_RETRIES))
    }

    pub fn build<R: Rng + ?Sized>(topology: Topology, n: usize, rng: &mut R) -> Result<Self> {
        match topology {
            Topology::Complete => Self::complete(n),
            Topology::Cycle => Self::cycle(n),
            Topology::WattsStrogatz { k, p } => Self::watts_strogatz(n, k, p, rng),
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * (self.n.saturating_sub(1)) / 2
    }

    fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.adjacency_lists();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n
    }

    /// Two-colouring by breadth-first traversal of every component.
    pub fn is_bipartite(&self) -> bool {
        let adj = self.adjacency_lists();
        let mut colour: Vec<Option<bool>> = vec![None; self.n];
        for start in 0..self.n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let cu = colour[u].unwrap();
                for &v in &adj[u] {
                    match colour[v] {
                        None => {
                            colour[v] = Some(!cu);
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    /// Errors unless the graph is connected and non-bipartite, the
    /// conditions under which the gossip convergence guarantees apply.
    pub fn check_gossip_preconditions(&self) -> Result<()> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        if self.is_bipartite() {
            return Err(Error::Bipartite);
        }
        Ok(())
    }

    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for &(i, j) in &self.edges {
            a[(i, j)] = 1.0;
            a[(j, i)] = 1.0;
        }
        a
    }

    /// `L = D - A`.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let mut l = -self.adjacency_matrix();
        for (i, &d) in self.degrees.iter().enumerate() {
            l[(i, i)] = d as f64;
        }
        l
    }

    /// Expected pairwise-averaging matrix `I - L / (2|E|)`: the mean of
    /// `I - (e_i - e_j)(e_i - e_j)^T / 2` over uniformly drawn edges.
    pub fn expected_gossip_matrix(&self) -> DMatrix<f64> {
        let m = self.edges.len() as f64;
        DMatrix::identity(self.n, self.n) - self.laplacian() / (2.0 * m)
    }

    /// Laplacian eigenvalues in ascending order.
    pub fn laplacian_spectrum(&self, cap: usize) -> Result<Vec<f64>> {
        if self.n > cap {
            return Err(Error::TooLarge { n: self.n, cap });
        }
        let mut ev: Vec<f64> = self.laplacian().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        Ok(ev)
    }

    /// Eigenvalues of the expected gossip matrix, descending.
    pub fn gossip_spectrum(&self, cap: usize) -> Result<Vec<f64>> {
        let m2 = 2.0 * self.edges.len() as f64;
        Ok(self.laplacian_spectrum(cap)?.into_iter().map(|b| 1.0 - b / m2).collect())
    }

    /// `1 - lambda_2` of the expected gossip matrix, computed as
    /// `beta_{n-1} / (2|E|)` from the second-smallest Laplacian eigenvalue.
    pub fn spectral_gap(&self) -> Result<f64> {
        self.spectral_gap_with_cap(DEFAULT_EIGEN_CAP)
    }

    pub fn spectral_gap_with_cap(&self, cap: usize) -> Result<f64> {
        if self.n < 2 || self.edges.is_empty() || !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let ev = self.laplacian_spectrum(cap)?;
        Ok((ev[1] / (2.0 * self.edges.len() as f64)).max(0.0))
    }

    /// Tensor product with the complete graph on `k` nodes (adjacency
    /// `1_k 1_k^T (x) A`). Node `(copy a, original i)` has index `a * n + i`
    /// and is adjacent to every copy of every neighbour of `i`; copies of the
    /// same node are not adjacent to each other. The result has `k n` nodes and
    /// `k^2 |E|` edges.
    pub fn tensor_with_complete(&self, k: usize) -> Result<Graph> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!("tensor expansion needs k >= 2, got {k}")));
        }
        if self.is_complete() {
            return Err(Error::InvalidParameter(
                "tensor expansion gap relation requires a non-complete graph".into(),
            ));
        }
        let n = self.n;
        let mut edges = Vec::with_capacity(k * k * self.edges.len());
        for &(i, j) in &self.edges {
            for a in 0..k {
                for b in 0..k {
                    edges.push((a * n + i, b * n + j));
                }
            }
        }
        Graph::from_edges(k * n, edges)
    }

    /// Uniform edge draw with a uniformly random orientation.
    pub fn sample_edge<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, usize) {
        assert!(!self.edges.is_empty(), "cannot sample from an edgeless graph");
        let (a, b) = self.edges[rng.random_range(0..self.edges.len())];
        if rng.random_bool(0.5) {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Probability `d_k / |E|` that node `k` is an endpoint of a uniformly
    /// drawn edge. The vector sums to 2.
    pub fn activation_probabilities(&self) -> Vec<f64> {
        let m = self.edges.len() as f64;
        self.degrees.iter().map(|&d| d as f64 / m).collect()
    }

    /// Edge-list text: a header line `n m`, then one `i j` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{} {}", self.n, self.edges.len()).unwrap();
        for &(i, j) in &self.edges {
            writeln!(s, "{i} {j}").unwrap();
        }
        s
    }

    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line_no, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let (n, m) = parse_pair(header, line_no)?;
        let mut edges = Vec::with_capacity(m);
        for (line_no, line) in lines {
            edges.push(parse_pair(line, line_no)?);
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Graph::from_edges(n, edges)
    }
}

fn check_node_count(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 nodes, got {n}")));
    }
    Ok(())
}

fn parse_pair(line: &str, line_no: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::Parse {
                line: line_no,
                msg: "expected two integers".into(),
            })?
            .parse()
            .map_err(|e| Error::Parse {
                line: line_no,
                msg: format!("{e}"),
            })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line: line_no,
            msg: "trailing tokens".into(),
        });
    }
    Ok((a, b))
}

fn ws_attempt<R: Rng + ?Sized>(n: usize, k: usize, p: f64, rng: &mut R) -> Result<Graph> {
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for i in 0..n {
        for s in 1..=k / 2 {
            let j = (i + s) % n;
            adj[i].insert(j);
            adj[j].insert(i);
        }
    }
    for s in 1..=k / 2 {
        for i in 0..n {
            let j = (i + s) % n;
            // the lattice edge may already have been rewired away
            if !adj[i].contains(&j) || !rng.random_bool(p) {
                continue;
            }
            if adj[i].len() >= n - 1 {
                continue;
            }
            let target = loop {
                let w = rng.random_range(0..n);
                if w != i && !adj[i].contains(&w) {
                    break w;
                }
            };
            adj[i].remove(&j);
            adj[j].remove(&i);
            adj[i].insert(target);
            adj[target].insert(i);
        }
    }
    let edges = adj
        .iter()
        .enumerate()
        .flat_map(|(i, nb)| nb.iter().filter(move |&&j| j > i).map(move |&j| (i, j)));
    Graph::from_edges(n, edges)
}
