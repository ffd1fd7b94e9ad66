//! Combinatorial membership tests for `H = pi_1(Y)` and `K = pi_1(C(Y))`.

use serde::{Deserialize, Serialize};

use crate::complex::CubeComplex2;
use crate::graph::DefiningGraph;
use crate::word::{geodesic_reduce, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceWitness {
    /// The geodesic traced through `Y` and stopped here.
    Endpoint(usize),
    /// The geodesic left `Y` at this letter position.
    FailedAt(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub in_h: bool,
    pub in_k: bool,
    pub witness: TraceWitness,
}

/// Traces one geodesic spelling of `w` through `Y`. Convexity of the lift of
/// `Y` makes a single geodesic sufficient.
pub fn trace_h(y: &CubeComplex2, graph: &DefiningGraph, w: &Word) -> TraceWitness {
    let g = geodesic_reduce(graph, w);
    match y.trace(y.basepoint(), &g) {
        Ok(v) => TraceWitness::Endpoint(v),
        Err(f) => TraceWitness::FailedAt(f.position),
    }
}

pub fn is_member_h(y: &CubeComplex2, graph: &DefiningGraph, w: &Word) -> bool {
    trace_h(y, graph, w) == TraceWitness::Endpoint(y.basepoint())
}

/// Whether the monodromy of `w` fixes the basepoint of the cover `C`.
pub fn is_member_k(c: &CubeComplex2, w: &Word) -> bool {
    c.trace(c.basepoint(), w) == Ok(c.basepoint())
}

pub fn membership(y: &CubeComplex2, c: &CubeComplex2, graph: &DefiningGraph, w: &Word) -> MembershipVerdict {
    let witness = trace_h(y, graph, w);
    MembershipVerdict { in_h: witness == TraceWitness::Endpoint(y.basepoint()), in_k: is_member_k(c, w), witness }
}

/// Free generators of `pi_1(Y)` read off a breadth-first spanning tree: one
/// loop `tau(src) x tau(dst)^-1` per non-tree edge.
pub fn schreier_generators(y: &CubeComplex2) -> Vec<Word> {
    let (words, tree) = y.bfs_tree();
    let mut in_tree = vec![false; y.edges().len()];
    for e in tree {
        in_tree[e] = true;
    }
    y.edges()
        .iter()
        .filter(|e| !in_tree[e.id])
        .filter_map(|e| {
            let s = words[e.src].as_ref()?;
            let d = words[e.dst].as_ref()?;
            Some(s.concat(&Word::letter(e.label)).concat(&d.inverse()))
        })
        .collect()
}
