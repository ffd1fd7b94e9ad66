//! Based, directed, generator-labelled 2-dimensional cube complexes.
//!
//! A square with labels `(x, y)`, `x < y`, has corners `[A, B, C, D]` and
//! boundary edges `[AB, AD, DC, BC]`, where `AB` and `DC` are `x`-edges and
//! `AD` and `BC` are `y`-edges. Read from `A` its boundary is `x y x^-1 y^-1`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt::Write as _;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{ComplexError, StructureError};
use crate::graph::DefiningGraph;
use crate::word::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub label: usize,
    pub id: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Square {
    pub labels: [usize; 2],
    pub corners: [usize; 4],
    pub edges: [usize; 4],
}

impl Square {
    pub const A: usize = 0;
    pub const B: usize = 1;
    pub const C: usize = 2;
    pub const D: usize = 3;

    /// The two germs meeting at each corner, as `(x-germ, y-germ)`.
    pub fn corner_germs(&self) -> [(usize, (Germ, Germ)); 4] {
        let [x, y] = self.labels;
        let [a, b, c, d] = self.corners;
        let [ab, ad, dc, bc] = self.edges;
        let g = |vertex, label, direction, edge| Germ { vertex, label, direction, edge };
        use Direction::*;
        [
            (a, (g(a, x, Outgoing, ab), g(a, y, Outgoing, ad))),
            (b, (g(b, x, Incoming, ab), g(b, y, Outgoing, bc))),
            (c, (g(c, x, Incoming, dc), g(c, y, Incoming, bc))),
            (d, (g(d, x, Outgoing, dc), g(d, y, Incoming, ad))),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Outgoing,
    Incoming,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Germ {
    pub vertex: usize,
    pub label: usize,
    pub direction: Direction,
    pub edge: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissingCorner {
    pub vertex: usize,
    pub germs: [Germ; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalIsometryReport {
    pub folded: bool,
    pub missing_square_corners: Vec<MissingCorner>,
    pub verdict: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceFailure {
    /// Index of the first letter that could not be followed.
    pub position: usize,
    /// Vertex reached before the failing letter.
    pub at: usize,
}

/// Per-vertex, per-label incidence, keyed `vertex * labels + label`.
#[derive(Clone, Debug, Default)]
struct Incidence {
    labels: usize,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Default)]
pub struct CubeComplex2 {
    num_vertices: usize,
    edges: Vec<Edge>,
    squares: Vec<Square>,
    basepoint: usize,
    labels: usize,
    index: OnceLock<Incidence>,
}

impl PartialEq for CubeComplex2 {
    fn eq(&self, other: &Self) -> bool {
        self.num_vertices == other.num_vertices
            && self.edges == other.edges
            && self.squares == other.squares
            && self.basepoint == other.basepoint
            && self.labels == other.labels
    }
}

impl Eq for CubeComplex2 {}

impl CubeComplex2 {
    /// A single basepoint over an alphabet of `labels` generators.
    pub fn point(labels: usize) -> Self {
        Self { num_vertices: 1, labels, ..Default::default() }
    }

    /// Assembles a complex from raw parts without validating it.
    pub fn from_parts(
        labels: usize,
        num_vertices: usize,
        edges: Vec<Edge>,
        squares: Vec<Square>,
        basepoint: usize,
    ) -> Self {
        Self { num_vertices, edges, squares, basepoint, labels, index: OnceLock::new() }
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn num_labels(&self) -> usize {
        self.labels
    }

    pub fn cell_count(&self) -> usize {
        self.num_vertices + self.edges.len() + self.squares.len()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.index = OnceLock::new();
        self.num_vertices += 1;
        self.num_vertices - 1
    }

    pub fn add_edge(&mut self, src: usize, dst: usize, label: usize) -> usize {
        self.index = OnceLock::new();
        let id = self.edges.len();
        self.edges.push(Edge { src, dst, label, id });
        id
    }

    pub fn add_square(&mut self, square: Square) {
        self.squares.push(square);
    }

    fn incidence(&self) -> &Incidence {
        self.index.get_or_init(|| {
            let n = self.labels;
            let mut inc = Incidence {
                labels: n,
                outgoing: vec![Vec::new(); self.num_vertices * n],
                incoming: vec![Vec::new(); self.num_vertices * n],
            };
            for e in &self.edges {
                if e.src < self.num_vertices && e.dst < self.num_vertices && e.label < n {
                    inc.outgoing[e.src * n + e.label].push(e.id);
                    inc.incoming[e.dst * n + e.label].push(e.id);
                }
            }
            inc
        })
    }

    /// Ids of edges labelled `label` leaving `v`.
    pub fn outgoing(&self, v: usize, label: usize) -> &[usize] {
        let inc = self.incidence();
        &inc.outgoing[v * inc.labels + label]
    }

    pub fn incoming(&self, v: usize, label: usize) -> &[usize] {
        let inc = self.incidence();
        &inc.incoming[v * inc.labels + label]
    }

    /// The unique (first) edge followed by `letter` from `v`, with its far end.
    pub fn step(&self, v: usize, letter: Letter) -> Option<(usize, usize)> {
        if letter.inverse {
            self.incoming(v, letter.generator).first().map(|&e| (e, self.edges[e].src))
        } else {
            self.outgoing(v, letter.generator).first().map(|&e| (e, self.edges[e].dst))
        }
    }

    pub fn germs_at(&self, v: usize, label: usize, direction: Direction) -> Vec<Germ> {
        let ids = match direction {
            Direction::Outgoing => self.outgoing(v, label),
            Direction::Incoming => self.incoming(v, label),
        };
        ids.iter().map(|&edge| Germ { vertex: v, label, direction, edge }).collect()
    }

    /// Follows `w` from `start`, one matching edge per letter.
    pub fn trace(&self, start: usize, w: &Word) -> Result<usize, TraceFailure> {
        self.trace_edges(start, w).map(|(v, _)| v)
    }

    /// Like [`trace`](Self::trace), also returning the traversed edges with
    /// their orientation (`true` = traversed backwards).
    pub fn trace_edges(&self, start: usize, w: &Word) -> Result<(usize, Vec<(usize, bool)>), TraceFailure> {
        let mut v = start;
        let mut path = Vec::with_capacity(w.len());
        for (position, &l) in w.letters().iter().enumerate() {
            match self.step(v, l) {
                Some((e, next)) => {
                    path.push((e, l.inverse));
                    v = next;
                }
                None => return Err(TraceFailure { position, at: v }),
            }
        }
        Ok((v, path))
    }

    pub fn validate(&self, graph: &DefiningGraph) -> Result<(), StructureError> {
        if self.basepoint >= self.num_vertices {
            return Err(StructureError::Basepoint(self.basepoint));
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.id != i {
                return Err(StructureError::EdgeId(i));
            }
            for v in [e.src, e.dst] {
                if v >= self.num_vertices {
                    return Err(StructureError::EdgeVertex { edge: i, vertex: v });
                }
            }
            if e.label >= graph.len() || e.label >= self.labels {
                return Err(StructureError::EdgeLabel { edge: i, label: e.label });
            }
        }
        for (i, s) in self.squares.iter().enumerate() {
            let [x, y] = s.labels;
            if x >= graph.len() || y >= graph.len() || x == y || !graph.adjacent(x, y) {
                return Err(StructureError::SquareLabels(i));
            }
            if s.edges.iter().any(|&e| e >= self.edges.len()) || s.corners.iter().any(|&v| v >= self.num_vertices) {
                return Err(StructureError::SquareBoundary(i));
            }
            let [a, b, c, d] = s.corners;
            let [ab, ad, dc, bc] = s.edges.map(|e| self.edges[e]);
            let ok = (ab.src, ab.dst, ab.label) == (a, b, x)
                && (ad.src, ad.dst, ad.label) == (a, d, y)
                && (dc.src, dc.dst, dc.label) == (d, c, x)
                && (bc.src, bc.dst, bc.label) == (b, c, y);
            if !ok {
                return Err(StructureError::SquareBoundary(i));
            }
        }
        Ok(())
    }

    /// No vertex carries two same-label same-direction germs, and no two
    /// squares share a corner germ pair.
    pub fn is_folded(&self) -> bool {
        let inc = self.incidence();
        if inc.outgoing.iter().chain(&inc.incoming).any(|v| v.len() > 1) {
            return false;
        }
        let mut seen = HashSet::new();
        self.squares.iter().all(|s| seen.insert((s.labels, s.edges[0], s.edges[1])))
    }

    fn realized_corners(&self) -> HashSet<(Germ, Germ)> {
        self.squares.iter().flat_map(|s| s.corner_germs().map(|(_, pair)| pair)).collect()
    }

    pub fn check_local_isometry(&self, graph: &DefiningGraph) -> Result<LocalIsometryReport, ComplexError> {
        self.validate(graph)?;
        let folded = self.is_folded();
        let realized = self.realized_corners();
        let mut missing = Vec::new();
        use Direction::*;
        for v in 0..self.num_vertices {
            for (x, y) in graph.edges() {
                for dx in [Outgoing, Incoming] {
                    for dy in [Outgoing, Incoming] {
                        for gx in self.germs_at(v, x, dx) {
                            for gy in self.germs_at(v, y, dy) {
                                if !realized.contains(&(gx, gy)) {
                                    missing.push(MissingCorner { vertex: v, germs: [gx, gy] });
                                }
                            }
                        }
                    }
                }
            }
        }
        let verdict = folded && missing.is_empty();
        Ok(LocalIsometryReport { folded, missing_square_corners: missing, verdict })
    }

    /// Whether this is a finite cover of the Salvetti complex: one incoming
    /// and one outgoing edge per generator at every vertex, and every lifted
    /// relator boundary bounds a square.
    pub fn is_cover(&self, graph: &DefiningGraph) -> bool {
        if self.validate(graph).is_err() || self.labels != graph.len() {
            return false;
        }
        for v in 0..self.num_vertices {
            for x in 0..graph.len() {
                if self.outgoing(v, x).len() != 1 || self.incoming(v, x).len() != 1 {
                    return false;
                }
            }
        }
        let squares: HashSet<([usize; 2], usize, usize)> =
            self.squares.iter().map(|s| (s.labels, s.edges[0], s.edges[1])).collect();
        for v in 0..self.num_vertices {
            for (x, y) in graph.edges() {
                let boundary = Word(vec![Letter::pos(x), Letter::pos(y), Letter::neg(x), Letter::neg(y)]);
                if self.trace(v, &boundary) != Ok(v) {
                    return false;
                }
                let ab = self.outgoing(v, x)[0];
                let ad = self.outgoing(v, y)[0];
                if !squares.contains(&([x, y], ab, ad)) {
                    return false;
                }
            }
        }
        true
    }

    /// Vertices reachable from `v` along edges whose labels commute with `x`
    /// and differ from `x`.
    pub fn commuting_component(&self, graph: &DefiningGraph, v: usize, x: usize) -> BTreeSet<usize> {
        self.component_by(v, |label| label != x && graph.adjacent(label, x))
    }

    /// Vertices reachable from `v` using only edges whose label satisfies `allowed`.
    pub fn component_by(&self, v: usize, allowed: impl Fn(usize) -> bool) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([v]);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for label in (0..self.labels).filter(|&l| allowed(l)) {
                let nbrs = self
                    .outgoing(u, label)
                    .iter()
                    .map(|&e| self.edges[e].dst)
                    .chain(self.incoming(u, label).iter().map(|&e| self.edges[e].src));
                for w in nbrs.collect::<Vec<_>>() {
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
        }
        seen
    }

    /// Breadth-first spanning tree from the basepoint. Neighbours are visited
    /// in generator order, outgoing before incoming. Returns, per vertex, the
    /// word read along the tree path (`None` if unreachable) and the tree edges.
    pub fn bfs_tree(&self) -> (Vec<Option<Word>>, Vec<usize>) {
        let (_, words, tree) = self.bfs();
        (words, tree)
    }

    /// Breadth-first discovery order from the basepoint; unreachable vertices
    /// follow in index order.
    pub fn bfs_order(&self) -> Vec<usize> {
        let (mut order, words, _) = self.bfs();
        order.extend(words.iter().enumerate().filter(|(_, w)| w.is_none()).map(|(v, _)| v));
        order
    }

    fn bfs(&self) -> (Vec<usize>, Vec<Option<Word>>, Vec<usize>) {
        let mut words: Vec<Option<Word>> = vec![None; self.num_vertices];
        let mut tree = Vec::new();
        let mut order = Vec::with_capacity(self.num_vertices);
        words[self.basepoint] = Some(Word::empty());
        let mut queue = VecDeque::from([self.basepoint]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            let here = words[u].clone().expect("queued vertices are reached");
            for label in 0..self.labels {
                for l in [Letter::pos(label), Letter::neg(label)] {
                    let ids = if l.inverse { self.incoming(u, label) } else { self.outgoing(u, label) };
                    for &e in ids {
                        let w = if l.inverse { self.edges[e].src } else { self.edges[e].dst };
                        if words[w].is_none() {
                            let mut path = here.clone();
                            path.0.push(l);
                            words[w] = Some(path);
                            tree.push(e);
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        (order, words, tree)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ComplexJson::from(self)).expect("complex serializes")
    }

    pub fn from_json(text: &str, graph: &DefiningGraph) -> Result<Self, ComplexError> {
        let raw: ComplexJson =
            serde_json::from_str(text).map_err(|e| ComplexError::Invariant(format!("complex JSON: {e}")))?;
        let c = Self::from_parts(graph.len(), raw.vertices.len(), raw.edges, raw.squares, raw.basepoint);
        if raw.vertices.iter().enumerate().any(|(i, &v)| i != v) {
            return Err(ComplexError::Invariant("vertices must be 0..n in order".into()));
        }
        c.validate(graph)?;
        Ok(c)
    }

    /// Graphviz rendering of the 1-skeleton; squares are listed as comments.
    pub fn to_dot(&self, graph: &DefiningGraph) -> String {
        const COLORS: [&str; 8] = ["red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan"];
        let mut out = String::from("digraph complex {\n");
        for v in 0..self.num_vertices {
            let shape = if v == self.basepoint { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  v{v} [label=\"v{v}\", shape={shape}];");
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  v{} -> v{} [label=\"{}\", color={}];",
                e.src,
                e.dst,
                graph.name(e.label),
                COLORS[e.label % COLORS.len()]
            );
        }
        for s in &self.squares {
            let _ = writeln!(
                out,
                "  // square {}{} corners v{} v{} v{} v{} edges {:?}",
                graph.name(s.labels[0]),
                graph.name(s.labels[1]),
                s.corners[0],
                s.corners[1],
                s.corners[2],
                s.corners[3],
                s.edges
            );
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    schema: u32,
    vertices: Vec<usize>,
    edges: Vec<Edge>,
    squares: Vec<Square>,
    basepoint: usize,
}

impl From<&CubeComplex2> for ComplexJson {
    fn from(c: &CubeComplex2) -> Self {
        Self {
            schema: 1,
            vertices: (0..c.num_vertices).collect(),
            edges: c.edges.clone(),
            squares: c.squares.clone(),
            basepoint: c.basepoint,
        }
    }
}

/// The 2-skeleton of the Salvetti complex: one vertex, a loop per generator
/// (edge id = generator index) and a square per edge of the graph.
pub fn salvetti(graph: &DefiningGraph) -> CubeComplex2 {
    let mut c = CubeComplex2::point(graph.len());
    for x in 0..graph.len() {
        c.add_edge(0, 0, x);
    }
    for (x, y) in graph.edges() {
        c.add_square(Square { labels: [x, y], corners: [0; 4], edges: [x, y, x, y] });
    }
    c
}

/// Boundary word `x y x^-1 y^-1` of a square read from corner `A`.
pub fn square_boundary(square: &Square) -> Word {
    let [x, y] = square.labels;
    Word(vec![Letter::pos(x), Letter::pos(y), Letter::neg(x), Letter::neg(y)])
}
