//! Balls `Λ_r` in the `2ℓ`-regular tree with dangling boundary half-edges,
//! their pairings, and the covers obtained by closing them.

use std::fmt::Write as _;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::graph::{ColoredMultigraph, EdgeSet, HalfEdge, HalfEdgeColor, RoseCover};
use crate::rng;

pub const DEFAULT_BALL_CAP: usize = 200_000;

/// Closed-form sizes of `Λ_r`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct BallCounts {
    /// `M_r = (2ℓ-1)^r`, the number of dangling half-edges of each color.
    pub m_r: u128,
    /// `#∂Λ_r = 2ℓ (2ℓ-1)^{r-1}`.
    pub boundary: u128,
    /// `#Λ_r = (ℓ M_r - 1) / (ℓ - 1)`.
    pub vertices: u128,
}

pub fn ball_counts(ell: usize, r: usize) -> Result<BallCounts> {
    if ell < 2 || r < 1 {
        return Err(Error::InvalidArgument(format!("need ℓ ≥ 2 and r ≥ 1, got ℓ={ell}, r={r}")));
    }
    let over = || Error::Overflow("ball size");
    let ell = ell as u128;
    let base = 2 * ell - 1;
    let m_r = base.checked_pow(r as u32).ok_or_else(over)?;
    let boundary = m_r / base * 2 * ell;
    let vertices = (ell.checked_mul(m_r).ok_or_else(over)? - 1) / (ell - 1);
    Ok(BallCounts {
        m_r,
        boundary,
        vertices,
    })
}

/// `Λ_r` as a colored multigraph. Vertices are the reduced words of length
/// at most `r`, numbered by length and then lexicographically in the color
/// order `(1,+) < (1,-) < (2,+) < …`; the root is vertex 0. Every vertex
/// owns all `2ℓ` half-edges, half-edge `v·2ℓ + slot` having color
/// `HalfEdgeColor::from_slot(slot)`, and those leaving the ball dangle.
#[derive(Clone, Debug)]
pub struct BallGraph {
    ell: usize,
    radius: usize,
    graph: ColoredMultigraph,
    /// Parent vertex and the slot of the last letter, for non-root vertices.
    parent: Vec<Option<(usize, u8)>>,
    boundary: Vec<usize>,
    /// Dangling half-edges per color index `j-1`, by boundary vertex order.
    dangling_plus: Vec<Vec<usize>>,
    dangling_minus: Vec<Vec<usize>>,
}

pub fn build_ball(ell: usize, r: usize) -> Result<BallGraph> {
    build_ball_capped(ell, r, DEFAULT_BALL_CAP)
}

pub fn build_ball_capped(ell: usize, r: usize, cap: usize) -> Result<BallGraph> {
    let counts = ball_counts(ell, r)?;
    if counts.vertices > cap as u128 {
        return Err(Error::CapExceeded {
            what: "ball",
            requested: counts.vertices,
            cap,
        });
    }
    let n = counts.vertices as usize;
    let deg = 2 * ell;
    let mut parent: Vec<Option<(usize, u8)>> = Vec::with_capacity(n);
    let mut mate: Vec<Option<usize>> = vec![None; n * deg];
    parent.push(None);
    let mut layer = 0..1;
    for _ in 0..r {
        let start = parent.len();
        for v in layer.clone() {
            let back = parent[v].map(|(_, s)| s as usize ^ 1);
            for slot in 0..deg {
                if Some(slot) == back {
                    continue;
                }
                let w = parent.len();
                parent.push(Some((v, slot as u8)));
                mate[v * deg + slot] = Some(w * deg + (slot ^ 1));
                mate[w * deg + (slot ^ 1)] = Some(v * deg + slot);
            }
        }
        layer = start..parent.len();
    }
    debug_assert_eq!(parent.len(), n);

    let half_edges = (0..n * deg)
        .map(|h| HalfEdge {
            owner: h / deg,
            color: HalfEdgeColor::from_slot(h % deg),
        })
        .collect();
    let boundary: Vec<usize> = layer.collect();
    let mut dangling_plus = vec![Vec::new(); ell];
    let mut dangling_minus = vec![Vec::new(); ell];
    for &v in &boundary {
        for slot in 0..deg {
            let h = v * deg + slot;
            if mate[h].is_none() {
                if slot % 2 == 0 {
                    dangling_plus[slot / 2].push(h);
                } else {
                    dangling_minus[slot / 2].push(h);
                }
            }
        }
    }
    Ok(BallGraph {
        ell,
        radius: r,
        graph: ColoredMultigraph::new(ell, n, half_edges, mate)?,
        parent,
        boundary,
        dangling_plus,
        dangling_minus,
    })
}

impl BallGraph {
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn graph(&self) -> &ColoredMultigraph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Vertices at distance exactly `r` from the root.
    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    /// `M_r`.
    pub fn m_r(&self) -> usize {
        self.dangling_plus[0].len()
    }

    /// Dangling half-edges of color `(j, sign)`, in boundary order.
    pub fn dangling(&self, color: HalfEdgeColor) -> &[usize] {
        match color.sign {
            crate::graph::Sign::Plus => &self.dangling_plus[color.index - 1],
            crate::graph::Sign::Minus => &self.dangling_minus[color.index - 1],
        }
    }

    /// The reduced word naming `v`.
    pub fn word(&self, v: usize) -> Vec<HalfEdgeColor> {
        let mut letters = Vec::new();
        let mut u = v;
        while let Some((p, slot)) = self.parent[u] {
            letters.push(HalfEdgeColor::from_slot(slot as usize));
            u = p;
        }
        letters.reverse();
        letters
    }

    /// The vertex named by a reduced word, if it lies in the ball.
    pub fn vertex_of_word(&self, word: &[HalfEdgeColor]) -> Option<usize> {
        let deg = 2 * self.ell;
        let mut v = 0;
        for c in word {
            if c.index == 0 || c.index > self.ell {
                return None;
            }
            v = self.graph.across(v * deg + c.slot())?;
        }
        // a non-reduced word walks back toward the root and names another vertex
        Some(v).filter(|&w| self.word(w).as_slice() == word)
    }
}

/// For each color `j`, a bijection from the `M_r` dangling `(j,+)`
/// half-edges to the `M_r` dangling `(j,-)` half-edges, both listed in
/// boundary order: `perms[j-1][i]` is the minus partner of the `i`-th plus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pairing {
    pub perms: Vec<Vec<usize>>,
}

impl Pairing {
    /// One line per color, `color j: ` followed by the permutation in
    /// one-line notation, 1-based.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (j, perm) in self.perms.iter().enumerate() {
            write!(out, "color {}:", j + 1).unwrap();
            for x in perm {
                write!(out, " {}", x + 1).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut perms = Vec::new();
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let rest = line
                .trim()
                .strip_prefix(&format!("color {}:", perms.len() + 1))
                .ok_or_else(|| Error::parse(i + 1, format!("expected `color {}:`", perms.len() + 1)))?;
            let perm = rest
                .split_whitespace()
                .map(|s| match s.parse::<usize>() {
                    Ok(x) if x >= 1 => Ok(x - 1),
                    _ => Err(Error::parse(i + 1, format!("bad entry {s:?}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            if !is_permutation(&perm) {
                return Err(Error::parse(i + 1, "not a permutation"));
            }
            perms.push(perm);
        }
        Ok(Pairing { perms })
    }
}

fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    perm.iter()
        .all(|&x| x < perm.len() && !std::mem::replace(&mut seen[x], true))
}

/// The antipodal pairing: the boundary word `w_1…w_r` is matched with
/// `w_1⁻¹…w_r⁻¹`, the `(j,+)` half-edge of each glued to the `(j,-)`
/// half-edge of its partner.
pub fn antipodal_pairing(ball: &BallGraph) -> Pairing {
    let deg = 2 * ball.ell;
    let mut position = vec![usize::MAX; ball.graph.half_edges().len()];
    for list in &ball.dangling_minus {
        for (i, &h) in list.iter().enumerate() {
            position[h] = i;
        }
    }
    let perms = (0..ball.ell)
        .map(|j| {
            ball.dangling_plus[j]
                .iter()
                .map(|&h| {
                    let tilde: Vec<HalfEdgeColor> =
                        ball.word(h / deg).into_iter().map(HalfEdgeColor::inverse).collect();
                    let partner = ball.vertex_of_word(&tilde).expect("inverse word is in the ball");
                    position[partner * deg + HalfEdgeColor::minus(j + 1).slot()]
                })
                .collect()
        })
        .collect();
    Pairing { perms }
}

/// A uniformly random pairing. Color `j` is a Fisher–Yates shuffle of the
/// minus list driven by the ChaCha8 stream `rng::stream(seed, [j])`.
pub fn random_pairing(ball: &BallGraph, seed: u64) -> Pairing {
    let m = ball.m_r();
    let perms = (1..=ball.ell)
        .map(|j| {
            let mut perm: Vec<usize> = (0..m).collect();
            perm.shuffle(&mut rng::stream(seed, &[j as u64]));
            perm
        })
        .collect();
    Pairing { perms }
}

/// Glues the dangling half-edges of `ball` according to `q`.
pub fn close_ball(ball: &BallGraph, q: &Pairing) -> Result<RoseCover> {
    if q.perms.len() != ball.ell {
        return Err(Error::InvalidPairing(format!(
            "{} colors in pairing, ball has ℓ={}",
            q.perms.len(),
            ball.ell
        )));
    }
    let mut pairs = Vec::with_capacity(ball.ell * ball.m_r());
    for (j, perm) in q.perms.iter().enumerate() {
        if perm.len() != ball.m_r() || !is_permutation(perm) {
            return Err(Error::InvalidPairing(format!(
                "color {} is not a permutation of {} elements",
                j + 1,
                ball.m_r()
            )));
        }
        pairs.extend(
            perm.iter()
                .enumerate()
                .map(|(i, &k)| (ball.dangling_plus[j][i], ball.dangling_minus[j][k])),
        );
    }
    RoseCover::new(ball.graph.glue(&pairs)?)
}

/// The antipodal closure of `Λ_r`.
pub fn q0_cover(ell: usize, r: usize) -> Result<RoseCover> {
    let ball = build_ball(ell, r)?;
    close_ball(&ball, &antipodal_pairing(&ball))
}

/// A uniformly random closure of `Λ_r`.
pub fn random_cover(ell: usize, r: usize, seed: u64, cap: usize) -> Result<RoseCover> {
    let ball = build_ball_capped(ell, r, cap)?;
    close_ball(&ball, &random_pairing(&ball, seed))
}
