//! Short-loop statistics and convergence diagnostics for finite covers.

use std::collections::{HashSet, VecDeque};

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::ball::random_cover;
use crate::error::Result;
use crate::graph::{ColoredMultigraph, EdgeSet, RoseCover};
use crate::jacobi::{assemble_matrix, JacobiData, MomentVector, RoseParams, Spectrum};
use crate::rational::{to_f64, Rational};
use crate::rng::derive_seed;
use crate::tree_dos::rose_dos_moments;

/// Largest `m` such that the non-backtracking paths of length at most `m`
/// from `v` end at pairwise distinct vertices, i.e. the radius-`m` ball of
/// the universal cover maps injectively. Searching stops at `limit`.
pub fn tree_like_radius_capped(g: &ColoredMultigraph, v: usize, limit: usize) -> usize {
    let mut seen = HashSet::from([v]);
    // (vertex, half-edge it was entered by)
    let mut layer: Vec<(usize, Option<usize>)> = vec![(v, None)];
    for m in 0..limit {
        let mut next = Vec::new();
        for &(u, entry) in &layer {
            for h in g.half_edges_at(u) {
                if Some(h) == entry {
                    continue;
                }
                let Some(mate) = g.mate(h) else { continue };
                let w = g.half_edge(mate).owner;
                if !seen.insert(w) {
                    return m;
                }
                next.push((w, Some(mate)));
            }
        }
        layer = next;
    }
    limit
}

pub fn tree_like_radius(c: &RoseCover, v: usize) -> usize {
    tree_like_radius_capped(c, v, c.vertex_count())
}

/// Fraction of vertices whose tree-like radius is below `m`.
pub fn bad_fraction(c: &RoseCover, m: usize) -> Rational {
    let bad = (0..c.vertex_count())
        .into_par_iter()
        .filter(|&v| tree_like_radius_capped(c, v, m) < m)
        .count();
    Rational::new(bad.into(), c.vertex_count().into())
}

/// Length of the shortest cycle; a loop counts 1 and a pair of parallel
/// edges 2. `None` for a forest.
pub fn girth<G: EdgeSet + ?Sized + Sync>(g: &G) -> Option<usize> {
    let inc = crate::graph::incidence(g);
    let edges = g.edges();
    (0..g.vertex_count())
        .into_par_iter()
        .filter_map(|root| {
            let mut depth = vec![usize::MAX; g.vertex_count()];
            depth[root] = 0;
            let mut queue = VecDeque::from([(root, usize::MAX)]);
            let mut best = usize::MAX;
            while let Some((u, parent_edge)) = queue.pop_front() {
                if 2 * depth[u] + 1 >= best {
                    break;
                }
                for &(e, end) in &inc[u] {
                    // skip the tree edge back to the parent, but only once for a loop
                    if e == parent_edge {
                        continue;
                    }
                    let w = if end == 0 { edges[e].1 } else { edges[e].0 };
                    if depth[w] == usize::MAX {
                        depth[w] = depth[u] + 1;
                        queue.push_back((w, e));
                    } else {
                        best = best.min(depth[u] + depth[w] + 1);
                    }
                }
            }
            (best != usize::MAX).then_some(best)
        })
        .min()
}

/// Exact moment gaps `m_k(N) - m_k(dk)` of a cover against a DOS.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub cover_moments: MomentVector,
    pub dos_moments: MomentVector,
    pub gaps: Vec<Rational>,
}

impl GapReport {
    pub fn new(cover_moments: MomentVector, dos_moments: MomentVector) -> Self {
        assert_eq!(cover_moments.max_order(), dos_moments.max_order());
        let gaps = cover_moments
            .as_slice()
            .iter()
            .zip(dos_moments.as_slice())
            .map(|(x, y)| x - y)
            .collect();
        GapReport {
            cover_moments,
            dos_moments,
            gaps,
        }
    }

    pub fn gap_f64(&self, k: usize) -> f64 {
        to_f64(&self.gaps[k])
    }

    /// Orders at which the gap is exactly zero.
    pub fn exact_zeros(&self) -> Vec<usize> {
        (0..self.gaps.len()).filter(|&k| self.gaps[k].is_zero()).collect()
    }

    pub fn max_abs_gap(&self) -> Rational {
        self.gaps
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

/// Gaps between the counting measure of `g` and the given DOS moments.
pub fn gap_report_against<G: EdgeSet + ?Sized>(
    g: &G,
    data: &JacobiData,
    dos: &MomentVector,
) -> Result<GapReport> {
    let moments = assemble_matrix(g, data)?.trace_moments(dos.max_order());
    Ok(GapReport::new(moments, dos.clone()))
}

/// Gaps of a rose cover carrying period-one data against the tree DOS.
pub fn moment_gap_report(c: &RoseCover, data: &JacobiData, max_k: usize) -> Result<GapReport> {
    let params = RoseParams::from_cover_data(c, data)?;
    gap_report_against(c, data, &rose_dos_moments(&params, max_k))
}

/// Random closures of balls, sampled at several radii.
#[derive(Clone, Debug)]
pub struct EnsembleSpec {
    pub params: RoseParams,
    pub radii: Vec<usize>,
    pub max_k: usize,
    pub samples: usize,
    pub master_seed: u64,
    pub cap: usize,
    /// Radii `m` at which to record the bad fraction of each sample.
    pub bad_m: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleRow {
    pub r: usize,
    pub index: usize,
    pub seed: u64,
    pub vertices: usize,
    pub gaps: Vec<Rational>,
    /// `(m, fraction)` for each requested `m`.
    pub bad_fractions: Vec<(usize, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadiusSummary {
    pub r: usize,
    pub samples: usize,
    pub mean_abs_gap: Vec<Rational>,
    pub max_abs_gap: Vec<Rational>,
    pub mean_bad_fraction: Vec<(usize, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub ell: usize,
    pub dos_moments: MomentVector,
    /// Sorted by `(r, index)`.
    pub rows: Vec<SampleRow>,
    pub summaries: Vec<RadiusSummary>,
}

/// Seed of sample `i` at radius `r`.
pub fn sample_seed(master_seed: u64, r: usize, i: usize) -> u64 {
    derive_seed(master_seed, &[r as u64, i as u64])
}

/// Closes `samples` random pairings at every radius and reports exact moment
/// gaps against the tree DOS. The result depends only on `ensemble`.
pub fn ensemble_convergence(ensemble: &EnsembleSpec) -> Result<ConvergenceReport> {
    let ell = ensemble.params.ell();
    let dos = rose_dos_moments(&ensemble.params, ensemble.max_k);
    let jobs: Vec<(usize, usize)> = ensemble
        .radii
        .iter()
        .flat_map(|&r| (0..ensemble.samples).map(move |i| (r, i)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(r, index)| {
            let seed = sample_seed(ensemble.master_seed, r, index);
            let c = random_cover(ell, r, seed, ensemble.cap)?;
            let data = JacobiData::lift_rose(&c, &ensemble.params)?;
            let report = gap_report_against(&c, &data, &dos)?;
            Ok(SampleRow {
                r,
                index,
                seed,
                vertices: c.vertex_count(),
                gaps: report.gaps,
                bad_fractions: ensemble.bad_m.iter().map(|&m| (m, bad_fraction(&c, m))).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let summaries = ensemble
        .radii
        .iter()
        .map(|&r| summarize(r, rows.iter().filter(|row| row.r == r), ensemble))
        .collect();
    Ok(ConvergenceReport {
        ell,
        dos_moments: dos,
        rows,
        summaries,
    })
}

fn summarize<'a>(r: usize, rows: impl Iterator<Item = &'a SampleRow>, ensemble: &EnsembleSpec) -> RadiusSummary {
    let rows: Vec<&SampleRow> = rows.collect();
    let count = Rational::from_integer(rows.len().max(1).into());
    let mean_abs_gap = (0..=ensemble.max_k)
        .map(|k| rows.iter().map(|row| row.gaps[k].abs()).sum::<Rational>() / &count)
        .collect();
    let max_abs_gap = (0..=ensemble.max_k)
        .map(|k| {
            rows.iter()
                .map(|row| row.gaps[k].abs())
                .max()
                .unwrap_or_else(Rational::zero)
        })
        .collect();
    let mean_bad_fraction = ensemble
        .bad_m
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            (m, rows.iter().map(|row| row.bad_fractions[i].1.clone()).sum::<Rational>() / &count)
        })
        .collect();
    RadiusSummary {
        r,
        samples: rows.len(),
        mean_abs_gap,
        max_abs_gap,
        mean_bad_fraction,
    }
}

/// One-sided Hausdorff distance: the largest distance from a point of `s`
/// to the nearest point of `reference`.
pub fn hausdorff_gap(s: &Spectrum, reference: &Spectrum) -> f64 {
    assert!(!s.is_empty() && !reference.is_empty(), "spectra must be nonempty");
    let r = reference.values();
    s.values()
        .iter()
        .map(|&x| {
            let i = r.partition_point(|&y| y < x);
            let above = r.get(i).map_or(f64::INFINITY, |y| y - x);
            let below = if i > 0 { x - r[i - 1] } else { f64::INFINITY };
            above.min(below)
        })
        .fold(0.0, f64::max)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
