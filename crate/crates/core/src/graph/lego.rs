use super::{CoveringMap, EdgeSet, FiniteGraph, Multigraph, RoseCover, SpanningTree};
use crate::error::{Error, Result};
use crate::jacobi::JacobiData;

/// The cover of a pattern graph induced by a rose cover, with lifted data
/// and the projection back to the pattern.
#[derive(Clone, Debug)]
pub struct LegoExpansion {
    pub graph: FiniteGraph,
    pub jacobi: JacobiData,
    pub covering: CoveringMap,
    /// Number of spanning-tree copies (vertices of the rose cover).
    pub copies: usize,
}

impl LegoExpansion {
    /// Index of the copy of pattern vertex `x` sitting at cover vertex `c`.
    pub fn vertex(&self, c: usize, x: usize) -> usize {
        c * (self.graph.vertex_count() / self.copies) + x
    }
}

/// Replaces every vertex `c` of `cover` by a copy of the spanning tree of
/// `pattern` and, for each color-`j` edge `c → c'` of the cover, joins the
/// plus end of cut edge `j` in copy `c` to its minus end in copy `c'`.
///
/// Vertex `(c, x)` is numbered `c·p + x`. Edges are listed pattern edge by
/// pattern edge, each keeping the pattern's orientation, so the projection
/// sends every edge forward onto the pattern edge it copies.
pub fn lego_expand(
    cover: &RoseCover,
    pattern: &FiniteGraph,
    tree: &SpanningTree,
    data: &JacobiData,
) -> Result<LegoExpansion> {
    if tree.rank() != cover.ell() {
        return Err(Error::RankMismatch {
            cover: cover.ell(),
            pattern: tree.rank(),
        });
    }
    data.check_matches(pattern)?;
    let n = cover.vertex_count();
    let p = pattern.vertex_count();
    let at = |c: usize, x: usize| c * p + x;

    let mut by_color: Vec<Vec<(usize, usize)>> = vec![Vec::new(); cover.ell()];
    for e in cover.colored_edges() {
        let plus = cover.half_edge(e.plus).owner;
        let minus = cover.half_edge(e.minus).owner;
        by_color[e.color - 1].push((plus, minus));
    }
    let mut color_of = vec![None; pattern.edge_count()];
    for (j, cut) in tree.cut_edges.iter().enumerate() {
        color_of[cut.edge] = Some(j);
    }

    let mut edges = Vec::with_capacity(n * pattern.edge_count());
    let mut a = Vec::with_capacity(edges.capacity());
    let mut edge_map = Vec::with_capacity(edges.capacity());
    for (e, &(x, y)) in pattern.edges().iter().enumerate() {
        match color_of[e] {
            None => edges.extend((0..n).map(|c| (at(c, x), at(c, y)))),
            Some(j) => {
                let cut = tree.cut_edges[j];
                for &(cp, cm) in &by_color[j] {
                    edges.push(if cut.plus_end == x {
                        (at(cp, x), at(cm, y))
                    } else {
                        (at(cm, x), at(cp, y))
                    });
                }
            }
        }
        let added = edges.len() - a.len();
        a.extend(std::iter::repeat_n(data.a()[e].clone(), added));
        edge_map.extend(std::iter::repeat_n((e, true), added));
    }

    let b = (0..n).flat_map(|_| data.b().iter().cloned()).collect();
    let source = Multigraph::new(n * p, edges)?;
    let covering = CoveringMap {
        source: source.clone(),
        target: pattern.as_multigraph().clone(),
        vertex_map: (0..n * p).map(|v| v % p).collect(),
        edge_map,
    };
    Ok(LegoExpansion {
        graph: FiniteGraph::from_multigraph(source)?,
        jacobi: JacobiData::new(b, a)?,
        covering,
        copies: n,
    })
}
