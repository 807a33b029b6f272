#![allow(dead_code)]

use pbc_core::graph::{EdgeSet, FiniteGraph, RoseCover};
use pbc_core::jacobi::{JacobiData, RoseParams};
use pbc_core::rational::ratio;
use pbc_core::Rational;
use proptest::prelude::*;

pub fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

/// A connected rose cover with `ell` colors on `1..=max_n` vertices.
pub fn rose_cover(ell: usize, max_n: usize) -> impl Strategy<Value = RoseCover> {
    (1..=max_n)
        .prop_flat_map(move |n| proptest::collection::vec(permutation(n), ell))
        .prop_filter_map("disconnected", |perms| RoseCover::from_permutations(&perms).ok())
}

pub fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=9, 1i64..=4).prop_map(|(p, q)| ratio(p, q))
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| ratio(p, q))
}

pub fn rose_params(ell: usize) -> impl Strategy<Value = RoseParams> {
    (rational(), proptest::collection::vec(positive_rational(), ell))
        .prop_map(|(b, a)| RoseParams::new(b, a).unwrap())
}

/// A connected leafless graph on `p` vertices: a cycle through all vertices
/// (a loop when `p = 1`) plus `extra` further edges.
pub fn leafless_graph(max_p: usize, max_extra: usize) -> impl Strategy<Value = FiniteGraph> {
    (1..=max_p, 0..=max_extra)
        .prop_flat_map(|(p, extra)| proptest::collection::vec((0..p, 0..p), extra).prop_map(move |e| (p, e)))
        .prop_map(|(p, extra)| cycle_plus(p, extra))
}

/// As [`leafless_graph`] with exactly `rank` independent cycles.
pub fn graph_of_rank(max_p: usize, rank: usize) -> impl Strategy<Value = FiniteGraph> {
    (1..=max_p)
        .prop_flat_map(move |p| proptest::collection::vec((0..p, 0..p), rank - 1).prop_map(move |e| (p, e)))
        .prop_map(|(p, extra)| cycle_plus(p, extra))
}

fn cycle_plus(p: usize, extra: Vec<(usize, usize)>) -> FiniteGraph {
    let mut edges: Vec<(usize, usize)> = (0..p).map(|v| (v, (v + 1) % p)).collect();
    edges.extend(extra);
    FiniteGraph::new(p, edges).unwrap()
}

/// A graph together with random rational data on it.
pub fn graph_with_data(max_p: usize, max_extra: usize) -> impl Strategy<Value = (FiniteGraph, JacobiData)> {
    leafless_graph(max_p, max_extra).prop_flat_map(|g| {
        let p = g.vertex_count();
        let m = g.edge_count();
        (
            Just(g),
            proptest::collection::vec(rational(), p),
            proptest::collection::vec(positive_rational(), m),
        )
            .prop_map(|(g, b, a)| (g, JacobiData::new(b, a).unwrap()))
    })
}
