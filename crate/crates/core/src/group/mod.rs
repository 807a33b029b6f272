//! Homogeneous covers from congruence subgroups: Sanov matrices, the covers
//! `𝒦_n` and their Schreier generators, congruence quotients mod `2ⁿ` and
//! their injectivity radii.

mod matrix;
mod word;

pub use matrix::{sanov_generators, IntMat2, MatMod2n};
pub use word::Word;

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{
    spanning_tree, CoveringMap, EdgeSet, FiniteGraph, HalfEdgeColor, Multigraph, RoseCover,
};
use crate::jacobi::{assemble_matrix, JacobiData};

/// Images of the free generators of `𝔽_ℓ` in `SL(2,ℤ)`, each with the word
/// in the Sanov generators `a`, `b` it was evaluated from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorImages {
    pub words: Vec<Word>,
    pub matrices: Vec<IntMat2>,
}

impl GeneratorImages {
    pub fn ell(&self) -> usize {
        self.matrices.len()
    }

    /// Image of a word in the free generators of `𝔽_ℓ`, mod `2ⁿ`.
    pub fn eval_mod(&self, w: &Word, n: u32) -> MatMod2n {
        let gens: Vec<MatMod2n> = self.matrices.iter().map(|m| m.reduce(n)).collect();
        w.letters().iter().fold(MatMod2n::identity(n), |acc, c| {
            let g = gens[c.index - 1];
            acc.mul(&if c.sign == crate::graph::Sign::Plus { g } else { g.inverse() })
        })
    }
}

/// Product of Sanov generators spelled by `w` (letter `a` is `[[1,2],[0,1]]`,
/// `b` is `[[1,0],[2,1]]`).
pub fn eval_sanov(w: &Word) -> Result<IntMat2> {
    let gens = sanov_generators();
    w.letters().iter().try_fold(IntMat2::IDENTITY, |acc, c| {
        let g = *gens
            .get(c.index - 1)
            .ok_or_else(|| Error::InvalidArgument(format!("word {w} uses a letter beyond b")))?;
        acc.checked_mul(&if c.sign == crate::graph::Sign::Plus { g } else { g.inverse_sl2() })
    })
}

/// The `n`-vertex cover of the two-petal rose on `ℤ_n`: color 1 joins `m` to
/// `m+1` and color 2 joins `m` to `m+2`.
pub fn build_kn(n: usize) -> Result<RoseCover> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n ≥ 2, got {n}")));
    }
    RoseCover::from_permutations(&[
        (0..n).map(|m| (m + 1) % n).collect(),
        (0..n).map(|m| (m + 2) % n).collect(),
    ])
}

/// One reduced word per non-tree edge of the BFS spanning tree of `cover`,
/// a free basis of the subgroup of `𝔽_ℓ` that the cover represents.
///
/// Let `P` be the endpoint of the cut edge discovered first and `Q` the
/// other. The word is the tree path from the root to `Q`, the edge letter
/// read from `Q` to `P`, and the tree path from `P` back to the root. A loop
/// is read in its own direction.
pub fn schreier_generators(cover: &RoseCover) -> Result<Vec<Word>> {
    let g = FiniteGraph::from_edge_set(cover)?;
    let tree = spanning_tree(&g);
    let colored = cover.colored_edges();
    let edges = cover.edges();
    // letter read when walking edge e out of vertex x
    let letter = |e: usize, from: usize| {
        let (tail, _) = edges[e];
        if from == tail {
            HalfEdgeColor::plus(colored[e].color)
        } else {
            HalfEdgeColor::minus(colored[e].color)
        }
    };

    let mut path: Vec<Vec<HalfEdgeColor>> = vec![Vec::new(); cover.vertex_count()];
    for &v in tree.order.iter().skip(1) {
        let (e, p) = tree.parent[v].expect("non-root vertex has a parent");
        let mut w = path[p].clone();
        w.push(letter(e, p));
        path[v] = w;
    }

    Ok(tree
        .cut_edges
        .iter()
        .map(|cut| {
            let (p, q) = (cut.plus_end, cut.minus_end);
            let (start, step) = if p == q {
                let (tail, _) = edges[cut.edge];
                (tail, HalfEdgeColor::plus(colored[cut.edge].color))
            } else {
                (q, letter(cut.edge, q))
            };
            let end = if p == q { start } else { p };
            let back = path[end].iter().rev().map(|c| c.inverse());
            Word::new(path[start].iter().copied().chain([step]).chain(back))
        })
        .collect())
}

/// `ℓ = 2`: the Sanov generators. `ℓ ≥ 3`: the Schreier basis of
/// `𝒦_{ℓ-1}` evaluated in the Sanov generators.
pub fn free_generator_images(ell: usize) -> Result<GeneratorImages> {
    let words = match ell {
        0 | 1 => return Err(Error::InvalidArgument(format!("need ℓ ≥ 2, got {ell}"))),
        2 => vec![Word::generator(1), Word::generator(2)],
        _ => schreier_generators(&build_kn(ell - 1)?)?,
    };
    let matrices = words.iter().map(eval_sanov).collect::<Result<_>>()?;
    Ok(GeneratorImages { words, matrices })
}

/// The Cayley graph of the image of `𝔽_ℓ` in `SL(2, ℤ/2ⁿ)`.
#[derive(Clone, Debug)]
pub struct CongruenceQuotient {
    pub n: u32,
    pub cover: RoseCover,
    /// Group element at each vertex, vertex 0 being the identity.
    pub elements: Vec<MatMod2n>,
    index: HashMap<MatMod2n, usize>,
}

impl CongruenceQuotient {
    pub fn vertex_of(&self, m: &MatMod2n) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// BFS closure of the identity under right multiplication by the generator
/// images mod `2ⁿ`; the color-`j` edge at `v` runs to `v·g_j`.
pub fn congruence_quotient(gens: &GeneratorImages, n: u32, cap: usize) -> Result<CongruenceQuotient> {
    if n == 0 || n > 63 {
        return Err(Error::InvalidArgument(format!("modulus exponent {n} outside 1..=63")));
    }
    let g: Vec<MatMod2n> = gens.matrices.iter().map(|m| m.reduce(n)).collect();
    let mut elements = vec![MatMod2n::identity(n)];
    let mut index = HashMap::from([(elements[0], 0)]);
    let mut perms: Vec<Vec<usize>> = vec![Vec::new(); g.len()];
    let mut v = 0;
    while v < elements.len() {
        for (j, gj) in g.iter().enumerate() {
            let w = elements[v].mul(gj);
            let next = elements.len();
            let target = *index.entry(w).or_insert(next);
            if target == next {
                elements.push(w);
                if elements.len() > cap {
                    return Err(Error::CapExceeded {
                        what: "congruence quotient",
                        requested: elements.len() as u128,
                        cap,
                    });
                }
            }
            perms[j].push(target);
        }
        v += 1;
    }
    Ok(CongruenceQuotient {
        n,
        cover: RoseCover::from_permutations(&perms)?,
        elements,
        index,
    })
}

/// Shortest nontrivial reduced word mapped to the identity, or a lower
/// bound when it is at least the search cap.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Radius {
    Exact(usize),
    AtLeast(usize),
}

impl Radius {
    /// The value, or the lower bound.
    pub fn value(self) -> usize {
        match self {
            Radius::Exact(r) | Radius::AtLeast(r) => r,
        }
    }
}

impl std::fmt::Display for Radius {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Radius::Exact(r) => write!(f, "{r}"),
            Radius::AtLeast(r) => write!(f, ">={r}"),
        }
    }
}

/// Length of the shortest nonempty reduced word whose image is `≡ I mod 2ⁿ`:
/// the girth of the quotient Cayley graph, found by BFS from the identity
/// with each group element visited once.
pub fn injectivity_radius(gens: &GeneratorImages, n: u32, cap: usize) -> Radius {
    assert!(cap >= 1, "search cap must be positive");
    let deg = 2 * gens.ell();
    // letter slot s multiplies by step[s]
    let step: Vec<MatMod2n> = (0..deg)
        .map(|s| {
            let g = gens.matrices[s / 2].reduce(n);
            if s % 2 == 0 {
                g
            } else {
                g.inverse()
            }
        })
        .collect();
    let mut depth: HashMap<MatMod2n, usize> = HashMap::from([(MatMod2n::identity(n), 0)]);
    let mut queue = VecDeque::from([(MatMod2n::identity(n), 0usize, None::<usize>)]);
    let mut best = usize::MAX;
    while let Some((u, d, entered_by)) = queue.pop_front() {
        if 2 * d + 1 >= best.min(cap) {
            break;
        }
        for (s, g) in step.iter().enumerate() {
            if entered_by == Some(s ^ 1) {
                continue;
            }
            let w = u.mul(g);
            match depth.get(&w) {
                Some(&dw) => best = best.min(d + dw + 1),
                None => {
                    depth.insert(w, d + 1);
                    queue.push_back((w, d + 1, Some(s)));
                }
            }
        }
    }
    if best < cap {
        Radius::Exact(best)
    } else {
        Radius::AtLeast(cap)
    }
}

/// True iff every vertex has the same exact spectral moments up to order
/// `max_k`.
pub fn homogeneity_check<G: EdgeSet + ?Sized>(g: &G, data: &JacobiData, max_k: usize) -> Result<bool> {
    let moments = assemble_matrix(g, data)?.all_vertex_moments(max_k);
    Ok(moments.windows(2).all(|w| w[0] == w[1]))
}

/// The covering of `lower` by `upper` (one level up the tower) given by
/// reducing group elements mod `2ⁿ`.
pub fn tower_covering_map(upper: &CongruenceQuotient, lower: &CongruenceQuotient) -> Result<CoveringMap> {
    if upper.n <= lower.n || upper.cover.ell() != lower.cover.ell() {
        return Err(Error::InvalidArgument("levels do not form a tower step".into()));
    }
    let vertex_map = upper
        .elements
        .iter()
        .map(|m| {
            lower.vertex_of(&m.reduce(lower.n)).ok_or_else(|| {
                Error::InvalidArgument(format!("{m} reduces outside the lower quotient"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let edge_map = upper
        .cover
        .colored_edges()
        .iter()
        .map(|e| {
            let tail = upper.cover.half_edge(e.plus).owner;
            (lower.cover.out_edge(vertex_map[tail], e.color), true)
        })
        .collect();
    Ok(CoveringMap {
        source: Multigraph::from_edge_set(&upper.cover),
        target: Multigraph::from_edge_set(&lower.cover),
        vertex_map,
        edge_map,
    })
}
