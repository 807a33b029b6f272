//! Structural properties of rose covers, balls, pairings and lego expansion.

mod common;

use std::collections::HashMap;

use num_traits::Zero;
use pbc_core::ball::{build_ball, close_ball, random_pairing};
use pbc_core::graph::{
    covering_map_check, lego_expand, spanning_tree, ColoredMultigraph, EdgeSet, FiniteGraph,
    HalfEdgeColor,
};
use pbc_core::jacobi::{assemble_matrix, trace_power_moments, JacobiData, RoseParams};
use pbc_core::rational::int;
use pbc_core::Rational;
use proptest::prelude::*;

use common::*;

/// Weighted closed walks of length `0..=max_k`, enumerated step by step over
/// half-edges. Each step either stays put (weight `b`) or crosses a glued
/// half-edge (weight `a_j` of its color).
fn brute_force_moments(c: &ColoredMultigraph, params: &RoseParams, max_k: usize) -> Vec<Rational> {
    struct Walker<'a> {
        c: &'a ColoredMultigraph,
        params: &'a RoseParams,
        max_k: usize,
        start: usize,
        totals: Vec<Rational>,
    }
    impl Walker<'_> {
        fn walk(&mut self, at: usize, len: usize, weight: Rational) {
            if at == self.start {
                self.totals[len] += &weight;
            }
            if len == self.max_k {
                return;
            }
            if !self.params.b().is_zero() {
                self.walk(at, len + 1, &weight * self.params.b());
            }
            for h in self.c.half_edges_at(at) {
                if let Some(mate) = self.c.mate(h) {
                    let a = &self.params.a()[self.c.half_edge(h).color.index - 1];
                    self.walk(self.c.half_edge(mate).owner, len + 1, &weight * a);
                }
            }
        }
    }
    let mut w = Walker {
        c,
        params,
        max_k,
        start: 0,
        totals: vec![Rational::zero(); max_k + 1],
    };
    for v in 0..c.vertex_count() {
        w.start = v;
        w.walk(v, 0, int(1));
    }
    let n = Rational::from_integer(c.vertex_count().into());
    w.totals.into_iter().map(|t| t / &n).collect()
}

#[test]
fn ball_shapes_follow_the_counting_formulas() {
    for ell in 2..=4 {
        for r in 1..=4 {
            let ball = build_ball(ell, r).unwrap();
            let counts = pbc_core::ball::ball_counts(ell, r).unwrap();
            assert_eq!(ball.vertex_count() as u128, counts.vertices);
            assert_eq!(ball.boundary().len() as u128, counts.boundary);
            for color in HalfEdgeColor::all(ell) {
                assert_eq!(ball.dangling(color).len() as u128, counts.m_r);
            }
            for &v in ball.boundary() {
                let dangling = ball
                    .graph()
                    .half_edges_at(v)
                    .filter(|&h| ball.graph().mate(h).is_none())
                    .count();
                assert_eq!(dangling, 2 * ell - 1);
            }
        }
    }
}

#[test]
fn random_pairing_is_uniform_on_small_balls() {
    // ℓ = 2, r = 1: each color pairs 3 half-edges, so 6 equally likely perms
    let ball = build_ball(2, 1).unwrap();
    let trials = 10_000;
    let mut freq: HashMap<(Vec<usize>, Vec<usize>), usize> = HashMap::new();
    let mut first: HashMap<Vec<usize>, usize> = HashMap::new();
    for seed in 0..trials {
        let q = random_pairing(&ball, seed);
        *first.entry(q.perms[0].clone()).or_default() += 1;
        *freq.entry((q.perms[0].clone(), q.perms[1].clone())).or_default() += 1;
    }
    assert_eq!(first.len(), 6);
    for &count in first.values() {
        let p = count as f64 / trials as f64;
        assert!((p - 1.0 / 6.0).abs() <= 0.02, "frequency {p}");
    }
    // joint χ² over the 36 cells, 35 degrees of freedom; 0.1% critical value 66.6
    let expected = trials as f64 / 36.0;
    let chi2: f64 = freq.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    assert_eq!(freq.len(), 36);
    assert!(chi2 < 66.6, "χ² = {chi2}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rose_cover_counts(c in (2usize..=4).prop_flat_map(|ell| rose_cover(ell, 12))) {
        let n = c.vertex_count();
        prop_assert_eq!(c.half_edges().len(), 2 * c.ell() * n);
        prop_assert_eq!(c.edge_count(), c.ell() * n);
        prop_assert!(covering_map_check(&c.projection_to_rose()));
    }

    #[test]
    fn lego_expansion_covers_its_pattern(
        (c, pattern) in (1usize..=3).prop_flat_map(|ell| (rose_cover(ell, 6), graph_of_rank(5, ell)))
    ) {
        let tree = spanning_tree(&pattern);
        let data = JacobiData::unit(&pattern);
        let lego = lego_expand(&c, &pattern, &tree, &data).unwrap();
        prop_assert_eq!(lego.graph.vertex_count(), c.vertex_count() * pattern.vertex_count());
        prop_assert_eq!(lego.graph.edge_count(), c.vertex_count() * pattern.edge_count());
        prop_assert!(covering_map_check(&lego.covering));
    }

    #[test]
    fn spanning_tree_is_deterministic(g in leafless_graph(8, 6)) {
        let rebuilt = FiniteGraph::new(g.vertex_count(), g.edges().to_vec()).unwrap();
        let t = spanning_tree(&g);
        prop_assert_eq!(&t, &spanning_tree(&rebuilt));
        prop_assert_eq!(t.tree_edges.len() + t.rank(), g.edge_count());
        prop_assert_eq!(t.rank(), g.rank());
    }

    #[test]
    fn splitting_an_edge_keeps_the_matrix(
        (g, data) in graph_with_data(6, 4),
        pick in any::<prop::sample::Index>(),
        share in 1i64..=9,
    ) {
        let e = pick.index(g.edge_count());
        let a = data.a()[e].clone();
        let part = &a * Rational::new(share.into(), 10.into());
        let mut edges = g.edges().to_vec();
        let mut weights = data.a().to_vec();
        edges.push(edges[e]);
        weights[e] = &a - &part;
        weights.push(part);
        let split = FiniteGraph::new(g.vertex_count(), edges).unwrap();
        let split_data = JacobiData::new(data.b().to_vec(), weights).unwrap();

        let h = assemble_matrix(&g, &data).unwrap();
        let h2 = assemble_matrix(&split, &split_data).unwrap();
        for u in 0..g.vertex_count() {
            for v in 0..g.vertex_count() {
                prop_assert_eq!(h.entry(u, v), h2.entry(u, v));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn closed_ball_traces_match_walk_enumeration(
        (r, params) in prop_oneof![
            (Just(1usize), rose_params(2)),
            (Just(2), rose_params(2)),
            (Just(1), rose_params(3)),
        ],
        seed in any::<u64>(),
    ) {
        let ell = params.ell();
        let ball = build_ball(ell, r).unwrap();
        let c = close_ball(&ball, &random_pairing(&ball, seed)).unwrap();
        let data = JacobiData::lift_rose(&c, &params).unwrap();
        let traces = trace_power_moments(&*c, &data, 6).unwrap();
        prop_assert_eq!(traces.as_slice(), &brute_force_moments(&c, &params, 6)[..]);
    }
}
