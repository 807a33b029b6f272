//! Density-of-states moments of periodic Jacobi matrices on the universal
//! cover (a tree), computed exactly from closed walks.

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{incidence, CoveringMap, EdgeSet, FiniteGraph, Multigraph};
use crate::jacobi::{assemble_matrix, JacobiData, MomentVector, RoseParams};
use crate::rational::Rational;

/// Refuse to unfold trees larger than this.
pub const TREE_VERTEX_CAP: usize = 4_000_000;

/// The ball of radius `depth` around a lift of `base` in the universal cover.
#[derive(Clone, Debug)]
pub struct TruncatedCover {
    /// Tree on `0..n`, root 0; edge `i` joins vertex `i + 1` to its parent.
    pub tree: Multigraph,
    pub base: usize,
    pub depth: usize,
    pub jacobi: JacobiData,
    /// Projection to the base graph. Locally bijective away from the leaves.
    pub covering: CoveringMap,
    /// Distance from the root of each vertex.
    pub level: Vec<usize>,
}

/// Unfolds `g` from `base` by non-backtracking extension up to `depth`.
pub fn truncated_universal_cover(
    g: &FiniteGraph,
    data: &JacobiData,
    base: usize,
    depth: usize,
) -> Result<TruncatedCover> {
    data.check_matches(g)?;
    if base >= g.vertex_count() {
        return Err(Error::InvalidArgument(format!("base vertex {base} out of range")));
    }
    let edges = g.edges();
    let inc = incidence(g);

    // per tree vertex: downstairs vertex and the half-edge it was entered by
    let mut image = vec![base];
    let mut entry: Vec<Option<(usize, u8)>> = vec![None];
    let mut level = vec![0];
    let mut tree_edges = Vec::new();
    let mut edge_map = Vec::new();
    let mut a = Vec::new();
    let mut frontier = 0..1;
    for d in 0..depth {
        let start = image.len();
        for t in frontier.clone() {
            let x = image[t];
            for &(e, end) in &inc[x] {
                if entry[t] == Some((e, end)) {
                    continue;
                }
                let far = 1 - end;
                let y = if far == 0 { edges[e].0 } else { edges[e].1 };
                image.push(y);
                entry.push(Some((e, far)));
                level.push(d + 1);
                tree_edges.push((t, image.len() - 1));
                edge_map.push((e, end == 0));
                a.push(data.a()[e].clone());
                if image.len() > TREE_VERTEX_CAP {
                    return Err(Error::CapExceeded {
                        what: "truncated universal cover",
                        requested: image.len() as u128,
                        cap: TREE_VERTEX_CAP,
                    });
                }
            }
        }
        frontier = start..image.len();
    }

    let b = image.iter().map(|&x| data.b()[x].clone()).collect();
    let tree = Multigraph::new(image.len(), tree_edges)?;
    Ok(TruncatedCover {
        covering: CoveringMap {
            source: tree.clone(),
            target: g.as_multigraph().clone(),
            vertex_map: image,
            edge_map,
        },
        tree,
        base,
        depth,
        jacobi: JacobiData::new(b, a)?,
        level,
    })
}

impl TruncatedCover {
    /// `⟨δ_root, H^k δ_root⟩` for `k = 0..=max_k`; exact while
    /// `max_k ≤ 2·depth + 1`.
    pub fn root_moments(&self, max_k: usize) -> Result<Vec<Rational>> {
        Ok(assemble_matrix(&self.tree, &self.jacobi)?.vertex_moments(0, max_k))
    }
}

/// DOS moments `m_0..m_K`: the root spectral moments of one lift of every
/// base vertex, averaged.
pub fn dos_moments(g: &FiniteGraph, data: &JacobiData, max_k: usize) -> Result<MomentVector> {
    dos_moments_at_depth(g, data, max_k, max_k.div_ceil(2))
}

/// [`dos_moments`] with an explicit truncation depth, which must be at
/// least `⌈K/2⌉` for the result to be exact.
pub fn dos_moments_at_depth(
    g: &FiniteGraph,
    data: &JacobiData,
    max_k: usize,
    depth: usize,
) -> Result<MomentVector> {
    let per_base = (0..g.vertex_count())
        .into_par_iter()
        .map(|v| truncated_universal_cover(g, data, v, depth)?.root_moments(max_k))
        .collect::<Result<Vec<_>>>()?;
    let p = Rational::from_integer(g.vertex_count().into());
    let moments = (0..=max_k)
        .map(|k| per_base.iter().map(|m| &m[k]).sum::<Rational>() / &p)
        .collect();
    Ok(MomentVector::new(moments))
}

/// DOS moments for period-one data on the `2ℓ`-regular tree, without
/// building the tree.
///
/// `S_k(y)` is the weight of length-`k` walks that start and end at a vertex
/// entered by letter `y` and never visit its parent; splitting each walk at
/// its first step down gives
///
/// ```text
/// S_k(y) = b S_{k-1}(y) + Σ_{x ≠ y⁻¹} Σ_i a_x² S_i(x) S_{k-2-i}(y)
/// ```
///
/// and the root moment `R_k` obeys the same recursion with no letter
/// excluded. Cost is `O(K² ℓ)`.
pub fn rose_dos_moments(params: &RoseParams, max_k: usize) -> MomentVector {
    let ell = params.ell();
    let letters = 2 * ell;
    let b = params.b();
    // letter slot s has color s / 2 and inverse s ^ 1
    let a2: Vec<Rational> = (0..letters)
        .map(|s| &params.a()[s / 2] * &params.a()[s / 2])
        .collect();

    let mut s: Vec<Vec<Rational>> = vec![vec![Rational::zero(); max_k + 1]; letters];
    // t[i] = Σ_x a_x² S_i(x)
    let mut t: Vec<Rational> = vec![Rational::zero(); max_k + 1];
    let mut r: Vec<Rational> = vec![Rational::zero(); max_k + 1];
    for row in &mut s {
        row[0] = Rational::from_integer(1.into());
    }
    r[0] = Rational::from_integer(1.into());
    t[0] = a2.iter().sum();

    for k in 1..=max_k {
        for y in 0..letters {
            let mut acc = b * &s[y][k - 1];
            for i in 0..k.saturating_sub(1) {
                let down = &t[i] - &a2[y ^ 1] * &s[y ^ 1][i];
                acc += down * &s[y][k - 2 - i];
            }
            s[y][k] = acc;
        }
        let mut acc = b * &r[k - 1];
        for i in 0..k.saturating_sub(1) {
            acc += &t[i] * &r[k - 2 - i];
        }
        r[k] = acc;
        t[k] = (0..letters).map(|y| &a2[y] * &s[y][k]).sum();
    }
    MomentVector::new(r)
}
