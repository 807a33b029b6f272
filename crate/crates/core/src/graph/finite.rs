use std::collections::VecDeque;

use super::{degrees, incidence, is_connected, EdgeSet, Multigraph};
use crate::error::{Error, Result};

/// A connected leafless multigraph (minimum degree 2, loops counting twice).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGraph {
    graph: Multigraph,
}

impl FiniteGraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::from_multigraph(Multigraph::new(vertex_count, edges)?)
    }

    pub fn from_multigraph(graph: Multigraph) -> Result<Self> {
        if graph.vertex_count() == 0 {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        if !is_connected(&graph) {
            return Err(Error::Disconnected);
        }
        if let Some((vertex, &degree)) = degrees(&graph).iter().enumerate().find(|(_, &d)| d < 2) {
            return Err(Error::Leaf { vertex, degree });
        }
        Ok(FiniteGraph { graph })
    }

    pub fn from_edge_set<G: EdgeSet + ?Sized>(g: &G) -> Result<Self> {
        Self::from_multigraph(Multigraph::from_edge_set(g))
    }

    /// Rank of the fundamental group, `q - p + 1`.
    pub fn rank(&self) -> usize {
        self.graph.edge_count() + 1 - self.graph.vertex_count()
    }

    pub fn as_multigraph(&self) -> &Multigraph {
        &self.graph
    }
}

impl EdgeSet for FiniteGraph {
    fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    fn edges(&self) -> &[(usize, usize)] {
        self.graph.edges()
    }
}

/// A non-tree edge, oriented from the endpoint discovered first.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct CutEdge {
    pub edge: usize,
    pub plus_end: usize,
    pub minus_end: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    /// Tree edges in the order they were discovered.
    pub tree_edges: Vec<usize>,
    pub in_tree: Vec<bool>,
    /// Cut edges by increasing edge index; these are the generators `1..=ℓ`.
    pub cut_edges: Vec<CutEdge>,
    /// Vertices in BFS discovery order; `order[0]` is the root 0.
    pub order: Vec<usize>,
    /// Discovery position of each vertex.
    pub discovery: Vec<usize>,
    /// Tree edge to the parent, and the parent, for every non-root vertex.
    pub parent: Vec<Option<(usize, usize)>>,
}

impl SpanningTree {
    pub fn rank(&self) -> usize {
        self.cut_edges.len()
    }
}

/// BFS spanning tree from vertex 0. At each vertex the incident edges are
/// scanned by `(neighbor, edge index)`, so the result depends only on the
/// edge list.
pub fn spanning_tree(g: &FiniteGraph) -> SpanningTree {
    let n = g.vertex_count();
    let edges = g.edges();
    let inc = incidence(g);
    let mut discovery = vec![usize::MAX; n];
    let mut parent = vec![None; n];
    let mut in_tree = vec![false; edges.len()];
    let mut tree_edges = Vec::with_capacity(n.saturating_sub(1));
    let mut order = Vec::with_capacity(n);

    discovery[0] = 0;
    order.push(0);
    let mut queue = VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        let mut nbrs: Vec<(usize, usize)> = inc[u]
            .iter()
            .map(|&(e, end)| {
                let (a, b) = edges[e];
                (if end == 0 { b } else { a }, e)
            })
            .collect();
        nbrs.sort_unstable();
        nbrs.dedup();
        for (w, e) in nbrs {
            if discovery[w] == usize::MAX {
                discovery[w] = order.len();
                order.push(w);
                parent[w] = Some((e, u));
                in_tree[e] = true;
                tree_edges.push(e);
                queue.push_back(w);
            }
        }
    }

    let cut_edges = edges
        .iter()
        .enumerate()
        .filter(|&(e, _)| !in_tree[e])
        .map(|(edge, &(a, b))| {
            let (plus_end, minus_end) = if discovery[a] <= discovery[b] { (a, b) } else { (b, a) };
            CutEdge {
                edge,
                plus_end,
                minus_end,
            }
        })
        .collect();

    SpanningTree {
        tree_edges,
        in_tree,
        cut_edges,
        order,
        discovery,
        parent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rose_has_empty_tree() {
        let g = FiniteGraph::new(1, vec![(0, 0), (0, 0)]).unwrap();
        let t = spanning_tree(&g);
        assert!(t.tree_edges.is_empty());
        assert_eq!(t.rank(), 2);
        assert_eq!(g.rank(), 2);
    }

    #[test]
    fn four_parallel_edges() {
        let g = FiniteGraph::new(2, vec![(0, 1); 4]).unwrap();
        let t = spanning_tree(&g);
        assert_eq!(t.tree_edges, vec![0]);
        assert_eq!(t.rank(), 3);
        assert!(t.cut_edges.iter().all(|c| c.plus_end == 0 && c.minus_end == 1));
    }

    #[test]
    fn doubled_triangle() {
        let g = FiniteGraph::new(3, vec![(0, 1), (1, 2), (2, 0), (0, 1), (1, 2), (2, 0)]).unwrap();
        let t = spanning_tree(&g);
        assert_eq!(t.rank(), 4);
        assert_eq!(t.tree_edges.len(), 2);
        assert_eq!(t.order, vec![0, 1, 2]);
    }

    #[test]
    fn cut_edge_orientation_follows_discovery() {
        // 0-1-2 path closed by 2->0 and a loop at 2, listed tail-last
        let g = FiniteGraph::new(3, vec![(1, 0), (2, 1), (2, 0), (2, 2)]).unwrap();
        let t = spanning_tree(&g);
        assert_eq!(t.tree_edges, vec![0, 2]);
        assert_eq!(
            t.cut_edges,
            vec![
                CutEdge {
                    edge: 1,
                    plus_end: 1,
                    minus_end: 2
                },
                CutEdge {
                    edge: 3,
                    plus_end: 2,
                    minus_end: 2
                }
            ]
        );
    }

    #[test]
    fn rejects_leaves_and_disconnection() {
        assert_eq!(
            FiniteGraph::new(3, vec![(0, 1), (1, 1), (1, 2), (0, 0)]).unwrap_err(),
            Error::Leaf {
                vertex: 2,
                degree: 1
            }
        );
        assert_eq!(
            FiniteGraph::new(2, vec![(0, 0), (1, 1)]).unwrap_err(),
            Error::Disconnected
        );
    }
}
