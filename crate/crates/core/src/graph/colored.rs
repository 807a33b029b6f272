use std::collections::VecDeque;
use std::fmt;
use std::ops::{Deref, Range};

use super::{CoveringMap, EdgeSet, Multigraph};
use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// One of the `2ℓ` half-edge labels `(j, ±)`, `j` in `1..=ℓ`.
///
/// Read as a free-group letter, `(j,+)` is the generator `g_j` and `(j,-)`
/// its inverse: leaving a vertex along a `(j,+)` half-edge multiplies on the
/// right by `g_j`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdgeColor {
    pub index: usize,
    pub sign: Sign,
}

impl HalfEdgeColor {
    pub fn plus(index: usize) -> Self {
        HalfEdgeColor {
            index,
            sign: Sign::Plus,
        }
    }

    pub fn minus(index: usize) -> Self {
        HalfEdgeColor {
            index,
            sign: Sign::Minus,
        }
    }

    /// The color this one must be glued to.
    pub fn inverse(self) -> Self {
        HalfEdgeColor {
            index: self.index,
            sign: self.sign.flip(),
        }
    }

    /// Position in the canonical order `(1,+), (1,-), (2,+), ...`.
    pub fn slot(self) -> usize {
        2 * (self.index - 1) + usize::from(self.sign == Sign::Minus)
    }

    pub fn from_slot(slot: usize) -> Self {
        let index = slot / 2 + 1;
        if slot % 2 == 0 {
            Self::plus(index)
        } else {
            Self::minus(index)
        }
    }

    /// All `2ℓ` colors in canonical order.
    pub fn all(ell: usize) -> impl Iterator<Item = HalfEdgeColor> {
        (0..2 * ell).map(Self::from_slot)
    }
}

impl fmt::Display for HalfEdgeColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.index, self.sign.symbol())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfEdge {
    pub owner: usize,
    pub color: HalfEdgeColor,
}

/// An edge formed by a glued `(j,+)`/`(j,-)` pair. The tail owns the plus
/// half.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColoredEdge {
    pub color: usize,
    pub plus: usize,
    pub minus: usize,
}

/// Vertices with colored half-edges and a (possibly partial) gluing
/// involution. Unglued half-edges are dangling.
///
/// Half-edges are kept sorted by `(owner, color)`; construction normalises
/// whatever order it is given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredMultigraph {
    ell: usize,
    vertex_count: usize,
    half_edges: Vec<HalfEdge>,
    mate: Vec<Option<usize>>,
    offsets: Vec<usize>,
    colored_edges: Vec<ColoredEdge>,
    edges: Vec<(usize, usize)>,
    edge_of_half: Vec<Option<usize>>,
}

impl ColoredMultigraph {
    pub fn new(
        ell: usize,
        vertex_count: usize,
        half_edges: Vec<HalfEdge>,
        mate: Vec<Option<usize>>,
    ) -> Result<Self> {
        if ell == 0 {
            return Err(Error::InvalidGraph("need at least one color".into()));
        }
        if mate.len() != half_edges.len() {
            return Err(Error::InvalidGraph(format!(
                "{} half-edges but {} pairing entries",
                half_edges.len(),
                mate.len()
            )));
        }
        for (h, he) in half_edges.iter().enumerate() {
            if he.owner >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "half-edge {h} owned by vertex {} of {vertex_count}",
                    he.owner
                )));
            }
            if he.color.index == 0 || he.color.index > ell {
                return Err(Error::InvalidGraph(format!(
                    "half-edge {h} has color {} outside 1..={ell}",
                    he.color
                )));
            }
            if let Some(m) = mate[h] {
                if m >= half_edges.len() || mate[m] != Some(h) {
                    return Err(Error::InvalidGraph(format!(
                        "pairing is not an involution at half-edge {h}"
                    )));
                }
                if m == h {
                    return Err(Error::InvalidGraph(format!(
                        "half-edge {h} is paired with itself"
                    )));
                }
                if half_edges[m].color != he.color.inverse() {
                    return Err(Error::InvalidGraph(format!(
                        "half-edge {h} of color {} is paired with color {}",
                        he.color, half_edges[m].color
                    )));
                }
            }
        }

        let mut order: Vec<usize> = (0..half_edges.len()).collect();
        order.sort_by_key(|&h| (half_edges[h].owner, half_edges[h].color));
        let mut new_index = vec![0; half_edges.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let sorted: Vec<HalfEdge> = order.iter().map(|&h| half_edges[h]).collect();
        let sorted_mate: Vec<Option<usize>> = order
            .iter()
            .map(|&h| mate[h].map(|m| new_index[m]))
            .collect();
        Ok(Self::assemble(ell, vertex_count, sorted, sorted_mate))
    }

    fn assemble(
        ell: usize,
        vertex_count: usize,
        half_edges: Vec<HalfEdge>,
        mate: Vec<Option<usize>>,
    ) -> Self {
        let mut offsets = vec![0; vertex_count + 1];
        for he in &half_edges {
            offsets[he.owner + 1] += 1;
        }
        for v in 0..vertex_count {
            offsets[v + 1] += offsets[v];
        }
        let mut colored_edges = Vec::new();
        let mut edge_of_half = vec![None; half_edges.len()];
        for (h, m) in mate.iter().enumerate() {
            let Some(m) = *m else { continue };
            if h < m {
                let (plus, minus) = if half_edges[h].color.sign == Sign::Plus {
                    (h, m)
                } else {
                    (m, h)
                };
                edge_of_half[h] = Some(colored_edges.len());
                edge_of_half[m] = Some(colored_edges.len());
                colored_edges.push(ColoredEdge {
                    color: half_edges[h].color.index,
                    plus,
                    minus,
                });
            }
        }
        let edges = colored_edges
            .iter()
            .map(|e| (half_edges[e.plus].owner, half_edges[e.minus].owner))
            .collect();
        ColoredMultigraph {
            ell,
            vertex_count,
            half_edges,
            mate,
            offsets,
            colored_edges,
            edges,
            edge_of_half,
        }
    }

    /// Builds a fully glued graph from colored edges `(tail, head, j)`; the
    /// tail receives `(j,+)` and the head `(j,-)`.
    pub fn from_colored_edges(
        ell: usize,
        vertex_count: usize,
        edges: &[(usize, usize, usize)],
    ) -> Result<Self> {
        let mut half_edges = Vec::with_capacity(2 * edges.len());
        let mut mate = Vec::with_capacity(2 * edges.len());
        for (i, &(tail, head, j)) in edges.iter().enumerate() {
            half_edges.push(HalfEdge {
                owner: tail,
                color: HalfEdgeColor::plus(j),
            });
            half_edges.push(HalfEdge {
                owner: head,
                color: HalfEdgeColor::minus(j),
            });
            mate.push(Some(2 * i + 1));
            mate.push(Some(2 * i));
        }
        Self::new(ell, vertex_count, half_edges, mate)
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn half_edges(&self) -> &[HalfEdge] {
        &self.half_edges
    }

    pub fn half_edge(&self, h: usize) -> HalfEdge {
        self.half_edges[h]
    }

    pub fn mate(&self, h: usize) -> Option<usize> {
        self.mate[h]
    }

    pub fn pairing(&self) -> &[Option<usize>] {
        &self.mate
    }

    /// Indices of the half-edges owned by `v`.
    pub fn half_edges_at(&self, v: usize) -> Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    /// The half-edge of the given color at `v`, if present (first one if
    /// duplicated).
    pub fn half_edge_with_color(&self, v: usize, color: HalfEdgeColor) -> Option<usize> {
        self.half_edges_at(v)
            .find(|&h| self.half_edges[h].color == color)
    }

    /// Vertex at the other end of half-edge `h`, if glued.
    pub fn across(&self, h: usize) -> Option<usize> {
        self.mate[h].map(|m| self.half_edges[m].owner)
    }

    pub fn dangling_count(&self) -> usize {
        self.mate.iter().filter(|m| m.is_none()).count()
    }

    pub fn colored_edges(&self) -> &[ColoredEdge] {
        &self.colored_edges
    }

    /// Edge containing half-edge `h`.
    pub fn edge_of_half_edge(&self, h: usize) -> Option<usize> {
        self.edge_of_half[h]
    }

    /// Colors `1..=ℓ` of the edges, in edge order.
    pub fn edge_colors(&self) -> Vec<usize> {
        self.colored_edges.iter().map(|e| e.color).collect()
    }

    /// Re-glues the dangling half-edges according to `pairs` (each pair is a
    /// `(j,+)` and a `(j,-)` half-edge index), leaving existing gluings.
    pub fn glue(&self, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut mate = self.mate.clone();
        for &(a, b) in pairs {
            for h in [a, b] {
                if h >= mate.len() {
                    return Err(Error::InvalidPairing(format!("half-edge {h} out of range")));
                }
                if mate[h].is_some() {
                    return Err(Error::InvalidPairing(format!(
                        "half-edge {h} is already glued"
                    )));
                }
            }
            if a == b {
                return Err(Error::InvalidPairing(format!("half-edge {a} paired with itself")));
            }
            mate[a] = Some(b);
            mate[b] = Some(a);
        }
        Self::new(self.ell, self.vertex_count, self.half_edges.clone(), mate)
    }
}

impl EdgeSet for ColoredMultigraph {
    fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The graph was checked against a different number of colors.
    ColorCount { graph: usize, expected: usize },
    NoVertices,
    UnpairedHalfEdges { count: usize },
    DuplicateColor { vertex: usize, color: HalfEdgeColor },
    MissingColor { vertex: usize, color: HalfEdgeColor },
    Disconnected,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ColorCount { graph, expected } => {
                write!(f, "graph has ℓ={graph}, expected ℓ={expected}")
            }
            Violation::NoVertices => write!(f, "no vertices"),
            Violation::UnpairedHalfEdges { count } => write!(f, "{count} unpaired half-edges"),
            Violation::DuplicateColor { vertex, color } => {
                write!(f, "vertex {vertex} carries color {color} more than once")
            }
            Violation::MissingColor { vertex, color } => {
                write!(f, "vertex {vertex} lacks color {color}")
            }
            Violation::Disconnected => write!(f, "disconnected"),
        }
    }
}

/// Checks every condition for `g` to be a connected cover of the rose with
/// `ell` petals. An empty list means the graph is valid.
pub fn validate_rose_cover(g: &ColoredMultigraph, ell: usize) -> Vec<Violation> {
    let mut violations = Vec::new();
    if g.ell != ell {
        violations.push(Violation::ColorCount {
            graph: g.ell,
            expected: ell,
        });
    }
    if g.vertex_count == 0 {
        violations.push(Violation::NoVertices);
        return violations;
    }
    let unpaired = g.dangling_count();
    if unpaired > 0 {
        violations.push(Violation::UnpairedHalfEdges { count: unpaired });
    }
    for v in 0..g.vertex_count {
        let mut seen = vec![0usize; 2 * ell.max(g.ell)];
        for h in g.half_edges_at(v) {
            seen[g.half_edges[h].color.slot()] += 1;
        }
        for (slot, &count) in seen.iter().enumerate().take(2 * ell) {
            let color = HalfEdgeColor::from_slot(slot);
            if count == 0 {
                violations.push(Violation::MissingColor { vertex: v, color });
            } else if count > 1 {
                violations.push(Violation::DuplicateColor { vertex: v, color });
            }
        }
    }
    if !connected_via_glued(g) {
        violations.push(Violation::Disconnected);
    }
    violations
}

fn connected_via_glued(g: &ColoredMultigraph) -> bool {
    let mut seen = vec![false; g.vertex_count];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for h in g.half_edges_at(u) {
            if let Some(w) = g.across(h) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
    }
    count == g.vertex_count
}

/// A connected, fully glued colored multigraph in which every vertex carries
/// each of the `2ℓ` colors exactly once: a finite cover of the rose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoseCover(ColoredMultigraph);

impl RoseCover {
    pub fn new(g: ColoredMultigraph) -> Result<Self> {
        let violations = validate_rose_cover(&g, g.ell);
        if violations.is_empty() {
            Ok(RoseCover(g))
        } else {
            let text: Vec<String> = violations.iter().map(ToString::to_string).collect();
            Err(Error::InvalidGraph(text.join("; ")))
        }
    }

    /// The cover in which color `j` sends `v` to `perms[j-1][v]`.
    pub fn from_permutations(perms: &[Vec<usize>]) -> Result<Self> {
        let ell = perms.len();
        let n = perms.first().map_or(0, Vec::len);
        let mut edges = Vec::with_capacity(n * ell);
        for (j, perm) in perms.iter().enumerate() {
            if perm.len() != n {
                return Err(Error::InvalidGraph("permutations of unequal length".into()));
            }
            edges.extend(perm.iter().enumerate().map(|(v, &w)| (v, w, j + 1)));
        }
        Self::new(ColoredMultigraph::from_colored_edges(ell, n, &edges)?)
    }

    pub fn into_inner(self) -> ColoredMultigraph {
        self.0
    }

    /// Sends every vertex to the rose's vertex and every color-`j` edge to
    /// petal `j`, tail to tail.
    pub fn projection_to_rose(&self) -> CoveringMap {
        CoveringMap {
            source: Multigraph::from_edge_set(&self.0),
            target: Multigraph::rose(self.0.ell),
            vertex_map: vec![0; self.0.vertex_count],
            edge_map: self.0.colored_edges.iter().map(|e| (e.color - 1, true)).collect(),
        }
    }

    /// The color-`j` edge leaving `v` through its `(j,+)` half-edge.
    pub fn out_edge(&self, v: usize, color: usize) -> usize {
        let h = self
            .0
            .half_edge_with_color(v, HalfEdgeColor::plus(color))
            .expect("rose cover carries every color");
        self.0.edge_of_half[h].expect("rose cover is fully glued")
    }
}

impl Deref for RoseCover {
    type Target = ColoredMultigraph;

    fn deref(&self) -> &ColoredMultigraph {
        &self.0
    }
}

impl EdgeSet for RoseCover {
    fn vertex_count(&self) -> usize {
        self.0.vertex_count
    }

    fn edges(&self) -> &[(usize, usize)] {
        &self.0.edges
    }
}

/// The rose with `ell` petals as a cover of itself.
pub fn rose(ell: usize) -> RoseCover {
    let edges: Vec<_> = (1..=ell).map(|j| (0, 0, j)).collect();
    RoseCover::new(ColoredMultigraph::from_colored_edges(ell, 1, &edges).expect("valid rose"))
        .expect("rose is a rose cover")
}
