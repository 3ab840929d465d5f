//! Finite simple graphs, path-length distances and intersection numbers.
//!
//! Everything in this module is exact integer arithmetic. Vertices are dense
//! indices `0..n`.

use std::collections::VecDeque;

use nalgebra::DMatrix;

use crate::error::{Error, RegularityWitness, Result};

/// Undirected simple graph stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list. Loops, out-of-range endpoints and
    /// repeated edges (in either orientation) are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph must have at least one vertex".into()));
        }
        let mut neighbors = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for (u, list) in neighbors.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {})", w[0])));
            }
        }
        Ok(Graph { n, neighbors })
    }

    /// Builds a graph from a symmetric predicate evaluated on every pair `x < y`.
    pub fn from_adjacency_fn(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut edges = Vec::new();
        for x in 0..n {
            for y in (x + 1)..n {
                if adjacent(x, y) {
                    edges.push((x, y));
                }
            }
        }
        Self::from_edges(n, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.neighbors[x]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.neighbors[x].len()
    }

    pub fn is_adjacent(&self, x: usize, y: usize) -> bool {
        self.neighbors[x].binary_search(&y).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.neighbors.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    /// Adjacency matrix as `f64` entries.
    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for (u, list) in self.neighbors.iter().enumerate() {
            for &v in list {
                a[(u, v)] = 1.0;
            }
        }
        a
    }
}

/// All-pairs path-length distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<u32>,
    diameter: usize,
}

impl DistanceMatrix {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn diameter(&self) -> usize {
        self.diameter
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> usize {
        self.dist[x * self.n + y] as usize
    }

    pub fn row(&self, x: usize) -> &[u32] {
        &self.dist[x * self.n..(x + 1) * self.n]
    }

    /// Γ_i(x), in increasing vertex order.
    pub fn sphere(&self, x: usize, i: usize) -> Vec<usize> {
        self.row(x)
            .iter()
            .enumerate()
            .filter(|&(_, &d)| d as usize == i)
            .map(|(z, _)| z)
            .collect()
    }
}

/// Runs one BFS per source vertex.
pub fn distance_matrix(g: &Graph) -> Result<DistanceMatrix> {
    let n = g.vertex_count();
    let mut dist = vec![u32::MAX; n * n];
    let mut queue = VecDeque::with_capacity(n);
    for s in 0..n {
        let row = &mut dist[s * n..(s + 1) * n];
        row[s] = 0;
        queue.clear();
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let du = row[u];
            for &v in g.neighbors(u) {
                if row[v] == u32::MAX {
                    row[v] = du + 1;
                    queue.push_back(v);
                }
            }
        }
        if let Some(y) = row.iter().position(|&d| d == u32::MAX) {
            return Err(Error::DisconnectedGraph { x: s, y });
        }
    }
    let diameter = dist.iter().copied().max().unwrap_or(0) as usize;
    Ok(DistanceMatrix { n, dist, diameter })
}

/// Intersection numbers of a distance-regular graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionData {
    d: usize,
    p: Vec<u64>,
    c: Vec<u64>,
    a: Vec<u64>,
    b: Vec<u64>,
}

impl IntersectionData {
    pub fn diameter(&self) -> usize {
        self.d
    }

    /// p^h_{ij}
    #[inline]
    pub fn p(&self, h: usize, i: usize, j: usize) -> u64 {
        let m = self.d + 1;
        self.p[(h * m + i) * m + j]
    }

    /// c_i for `0 <= i <= d`, with c_0 = 0.
    pub fn c(&self, i: usize) -> u64 {
        self.c[i]
    }

    pub fn a(&self, i: usize) -> u64 {
        self.a[i]
    }

    /// b_i for `0 <= i <= d`, with b_d = 0.
    pub fn b(&self, i: usize) -> u64 {
        self.b[i]
    }

    pub fn valency(&self) -> u64 {
        self.b[0]
    }

    /// k_i = p^0_{ii} = |Γ_i(x)|.
    pub fn sphere_size(&self, i: usize) -> u64 {
        self.p(0, i, i)
    }

    /// c_1..c_d; with `a_array` (a_1..a_d) and `b_array` (b_0..b_{d-1}).
    pub fn c_array(&self) -> &[u64] {
        &self.c[1..]
    }

    pub fn a_array(&self) -> &[u64] {
        &self.a[1..]
    }

    pub fn b_array(&self) -> &[u64] {
        &self.b[..self.d]
    }
}

/// Verifies the full tensor p^h_{ij} is independent of the pair `(x, y)` and
/// returns it. Graphs of diameter below 2 are rejected.
pub fn check_distance_regular(g: &Graph, dm: &DistanceMatrix) -> Result<IntersectionData> {
    let n = g.vertex_count();
    debug_assert_eq!(n, dm.vertex_count());
    let d = dm.diameter();
    if d < 2 {
        return Err(Error::DiameterTooSmall { diameter: d });
    }
    let m = d + 1;
    let mut p = vec![0u64; m * m * m];
    let mut seen = vec![false; m];
    let mut counts = vec![0u64; m * m];
    for x in 0..n {
        let rx = dm.row(x);
        for y in 0..n {
            let h = dm.get(x, y);
            let ry = dm.row(y);
            counts.iter_mut().for_each(|c| *c = 0);
            for z in 0..n {
                counts[rx[z] as usize * m + ry[z] as usize] += 1;
            }
            let slot = &mut p[h * m * m..(h + 1) * m * m];
            if !seen[h] {
                slot.copy_from_slice(&counts);
                seen[h] = true;
                continue;
            }
            if let Some(idx) = (0..m * m).find(|&idx| slot[idx] != counts[idx]) {
                return Err(Error::NotDistanceRegular(RegularityWitness {
                    h,
                    i: idx / m,
                    j: idx % m,
                    x,
                    y,
                    expected: slot[idx],
                    found: counts[idx],
                }));
            }
        }
    }

    let at = |h: usize, i: usize, j: usize| p[(h * m + i) * m + j];
    let c = (0..m).map(|i| if i == 0 { 0 } else { at(i, 1, i - 1) }).collect();
    let a = (0..m).map(|i| at(i, 1, i)).collect();
    let b = (0..m).map(|i| if i == d { 0 } else { at(i, 1, i + 1) }).collect();
    Ok(IntersectionData { d, p, c, a, b })
}

/// The distance matrices A_0..A_d as exact 0/1 integer matrices.
pub fn distance_matrices(dm: &DistanceMatrix) -> Vec<DMatrix<i64>> {
    let n = dm.vertex_count();
    (0..=dm.diameter())
        .map(|i| DMatrix::from_fn(n, n, |x, y| i64::from(dm.get(x, y) == i)))
        .collect()
}
