use super::{incidence, EdgeSet, Multigraph};

/// A graph morphism given by vertex and edge maps. `edge_map[e] = (f, true)`
/// sends the tail of `e` to the tail of `f`; `false` reverses it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringMap {
    pub source: Multigraph,
    pub target: Multigraph,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<(usize, bool)>,
}

/// True when endpoints commute with the vertex map and, at every source
/// vertex, incident half-edges map bijectively onto the half-edges at the
/// image vertex.
pub fn covering_map_check(m: &CoveringMap) -> bool {
    let (src, tgt) = (&m.source, &m.target);
    if m.vertex_map.len() != src.vertex_count() || m.edge_map.len() != src.edge_count() {
        return false;
    }
    if m.vertex_map.iter().any(|&x| x >= tgt.vertex_count())
        || m.edge_map.iter().any(|&(f, _)| f >= tgt.edge_count())
    {
        return false;
    }

    // image of half-edge (e, end) is (f, end) or (f, 1 - end)
    let image = |e: usize, end: u8| -> (usize, u8) {
        let (f, forward) = m.edge_map[e];
        (f, if forward { end } else { 1 - end })
    };

    for (e, &(s, t)) in src.edges().iter().enumerate() {
        let (f, _) = m.edge_map[e];
        let (x, y) = tgt.edges()[f];
        let at = |end: u8| if end == 0 { x } else { y };
        if m.vertex_map[s] != at(image(e, 0).1) || m.vertex_map[t] != at(image(e, 1).1) {
            return false;
        }
    }

    let src_inc = incidence(src);
    let tgt_inc = incidence(tgt);
    for (u, halves) in src_inc.iter().enumerate() {
        let mut up: Vec<(usize, u8)> = halves.iter().map(|&(e, end)| image(e, end)).collect();
        let mut down = tgt_inc[m.vertex_map[u]].clone();
        up.sort_unstable();
        down.sort_unstable();
        if up != down {
            return false;
        }
    }
    true
}
