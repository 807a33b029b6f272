//! Graph models: plain multigraphs, colored half-edge multigraphs (covers of
//! the rose), finite leafless graphs with spanning trees, covering maps and
//! the lego-block expansion that lifts rose covers to covers of general
//! graphs.

mod colored;
mod covering;
mod finite;
mod lego;
mod text;

pub use colored::{
    rose, validate_rose_cover, ColoredEdge, ColoredMultigraph, HalfEdge, HalfEdgeColor,
    RoseCover, Sign, Violation,
};
pub use covering::{covering_map_check, CoveringMap};
pub use finite::{spanning_tree, CutEdge, FiniteGraph, SpanningTree};
pub use lego::{lego_expand, LegoExpansion};
pub use text::{parse_jacobi_graph, write_jacobi_graph};

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Anything with a vertex count and an ordered list of undirected edges.
///
/// Edge `i` joins `edges()[i].0` (its tail) and `edges()[i].1` (its head);
/// self-loops and parallel edges are allowed.
pub trait EdgeSet {
    fn vertex_count(&self) -> usize;
    fn edges(&self) -> &[(usize, usize)];

    fn edge_count(&self) -> usize {
        self.edges().len()
    }
}

/// An undirected multigraph given by an edge list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(u, v)) = edges
            .iter()
            .find(|&&(u, v)| u >= vertex_count || v >= vertex_count)
        {
            return Err(Error::InvalidGraph(format!(
                "edge ({u}, {v}) out of range for {vertex_count} vertices"
            )));
        }
        Ok(Multigraph {
            vertex_count,
            edges,
        })
    }

    /// The rose: one vertex carrying `ell` self-loops.
    pub fn rose(ell: usize) -> Self {
        Multigraph {
            vertex_count: 1,
            edges: vec![(0, 0); ell],
        }
    }

    pub fn cycle(n: usize) -> Self {
        Multigraph {
            vertex_count: n,
            edges: (0..n).map(|i| (i, (i + 1) % n)).collect(),
        }
    }

    pub fn from_edge_set<G: EdgeSet + ?Sized>(g: &G) -> Self {
        Multigraph {
            vertex_count: g.vertex_count(),
            edges: g.edges().to_vec(),
        }
    }
}

impl EdgeSet for Multigraph {
    fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

/// Degree of every vertex; a self-loop contributes 2.
pub fn degrees<G: EdgeSet + ?Sized>(g: &G) -> Vec<usize> {
    let mut deg = vec![0; g.vertex_count()];
    for &(u, v) in g.edges() {
        deg[u] += 1;
        deg[v] += 1;
    }
    deg
}

/// Incident half-edges `(edge, end)` per vertex, with `end` 0 for the tail
/// and 1 for the head. Ordered by edge index, tail before head.
pub fn incidence<G: EdgeSet + ?Sized>(g: &G) -> Vec<Vec<(usize, u8)>> {
    let mut inc = vec![Vec::new(); g.vertex_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        inc[u].push((e, 0));
        inc[v].push((e, 1));
    }
    inc
}

/// Neighbor lists (with repetition for parallel edges and loops).
pub fn neighbors<G: EdgeSet + ?Sized>(g: &G) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); g.vertex_count()];
    for &(u, v) in g.edges() {
        adj[u].push(v);
        if u != v {
            adj[v].push(u);
        }
    }
    adj
}

pub fn is_connected<G: EdgeSet + ?Sized>(g: &G) -> bool {
    let n = g.vertex_count();
    if n == 0 {
        return true;
    }
    let adj = neighbors(g);
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count == n
}
