//! Builds the compact based complex `Y` with a local isometry to the Salvetti
//! complex from a list of subgroup generators.
//!
//! Three moves run to a fixpoint: FOLD identifies two same-label,
//! same-direction edges at a vertex; FILL adds a square whose four boundary
//! edges are present; SPREAD completes a missing square corner by creating
//! the missing vertex and edges. Spreads are what grow the complex toward the
//! combinatorial convex hull, so they only run once folds and fills are
//! exhausted. A cell cap stops the growth when the hull looks unbounded.

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap};

use crate::complex::{CubeComplex2, Direction, Edge, Square};
use crate::error::ComplexError;
use crate::graph::DefiningGraph;
use crate::word::{geodesic_reduce, Word};

pub const DEFAULT_MAX_CELLS: usize = 10_000;

/// Order in which spreads are interleaved with folds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MoveOrder {
    /// Exhaust folds, then fills, then one full round of spreads; repeat.
    #[default]
    RoundRobin,
    /// A single spread between consecutive fold/fill fixpoints.
    SingleSpread,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FoldingConfig {
    pub max_cells: usize,
    pub move_order: MoveOrder,
}

impl Default for FoldingConfig {
    fn default() -> Self {
        Self { max_cells: DEFAULT_MAX_CELLS, move_order: MoveOrder::RoundRobin }
    }
}

impl FoldingConfig {
    pub fn with_cap(max_cells: usize) -> Self {
        Self { max_cells, ..Self::default() }
    }
}

/// Seed complex: one subdivided loop per (reduced, nonempty) generator word,
/// all wedged at the basepoint.
pub fn wedge_from_generators(graph: &DefiningGraph, gens: &[Word]) -> CubeComplex2 {
    let mut c = CubeComplex2::point(graph.len());
    let base = c.basepoint();
    for w in gens {
        let w = geodesic_reduce(graph, w);
        let m = w.len();
        let mut cur = base;
        for (i, l) in w.letters().iter().enumerate() {
            let next = if i + 1 == m { base } else { c.add_vertex() };
            if l.inverse {
                c.add_edge(next, cur, l.generator);
            } else {
                c.add_edge(cur, next, l.generator);
            }
            cur = next;
        }
    }
    c
}

/// Runs the fold/fill/spread fixpoint on the wedge of `gens`.
pub fn build_subgroup_complex(
    graph: &DefiningGraph,
    gens: &[Word],
    cfg: FoldingConfig,
) -> Result<CubeComplex2, ComplexError> {
    let seed = wedge_from_generators(graph, gens);
    let mut work = Work::new(graph, &seed);
    work.cap = cfg.max_cells;
    work.check_cap()?;
    loop {
        work.fold_all()?;
        work.fill_all()?;
        let missing = work.missing_corners();
        if missing.is_empty() {
            break;
        }
        let round = match cfg.move_order {
            MoveOrder::RoundRobin => &missing[..],
            MoveOrder::SingleSpread => &missing[..1],
        };
        for corner in round {
            work.spread(corner)?;
        }
    }
    Ok(work.freeze())
}

/// A corner at `vertex` whose `x`- and `y`-germs span no square.
#[derive(Clone, Copy, Debug)]
struct Corner {
    vertex: usize,
    x: usize,
    y: usize,
    x_dir: Direction,
    y_dir: Direction,
    x_edge: usize,
    y_edge: usize,
}

/// Mutable complex with tombstoned cells and incremental incidence.
struct Work<'g> {
    graph: &'g DefiningGraph,
    labels: usize,
    alive: Vec<bool>,
    edges: Vec<Option<Edge>>,
    squares: Vec<Option<Square>>,
    basepoint: usize,
    out: Vec<Vec<Vec<usize>>>,
    inc: Vec<Vec<Vec<usize>>>,
    squares_on_edge: Vec<Vec<usize>>,
    square_keys: HashMap<[usize; 4], usize>,
    live_vertices: usize,
    live_edges: usize,
    live_squares: usize,
    cap: usize,
}

impl<'g> Work<'g> {
    fn new(graph: &'g DefiningGraph, seed: &CubeComplex2) -> Self {
        let labels = graph.len();
        let mut w = Work {
            graph,
            labels,
            alive: vec![],
            edges: vec![],
            squares: vec![],
            basepoint: seed.basepoint(),
            out: vec![],
            inc: vec![],
            squares_on_edge: vec![],
            square_keys: HashMap::new(),
            live_vertices: 0,
            live_edges: 0,
            live_squares: 0,
            cap: usize::MAX,
        };
        for _ in 0..seed.num_vertices() {
            w.new_vertex();
        }
        for e in seed.edges() {
            w.new_edge(e.src, e.dst, e.label);
        }
        for s in seed.squares() {
            w.new_square(*s);
        }
        w
    }

    fn cells(&self) -> usize {
        self.live_vertices + self.live_edges + self.live_squares
    }

    fn check_cap(&self) -> Result<(), ComplexError> {
        if self.cells() > self.cap {
            Err(ComplexError::CapExceeded { cap: self.cap })
        } else {
            Ok(())
        }
    }

    fn new_vertex(&mut self) -> usize {
        self.alive.push(true);
        self.out.push(vec![Vec::new(); self.labels]);
        self.inc.push(vec![Vec::new(); self.labels]);
        self.live_vertices += 1;
        self.alive.len() - 1
    }

    fn new_edge(&mut self, src: usize, dst: usize, label: usize) -> usize {
        let id = self.edges.len();
        self.edges.push(Some(Edge { src, dst, label, id }));
        self.squares_on_edge.push(Vec::new());
        self.out[src][label].push(id);
        self.inc[dst][label].push(id);
        self.live_edges += 1;
        id
    }

    /// Adds a square unless one with the same boundary edges exists.
    fn new_square(&mut self, s: Square) -> bool {
        if self.square_keys.contains_key(&s.edges) {
            return false;
        }
        let id = self.squares.len();
        self.square_keys.insert(s.edges, id);
        for &e in &s.edges {
            if !self.squares_on_edge[e].contains(&id) {
                self.squares_on_edge[e].push(id);
            }
        }
        self.squares.push(Some(s));
        self.live_squares += 1;
        true
    }

    fn edge(&self, e: usize) -> Edge {
        self.edges[e].expect("live edge")
    }

    fn fold_all(&mut self) -> Result<(), ComplexError> {
        let mut pending: BTreeSet<usize> = (0..self.alive.len()).filter(|&v| self.alive[v]).collect();
        while let Some(v) = pending.pop_first() {
            if !self.alive[v] {
                continue;
            }
            if let Some((keep, merged)) = self.fold_once(v) {
                pending.insert(v);
                pending.insert(keep);
                pending.remove(&merged);
            }
        }
        Ok(())
    }

    /// Performs one fold at `v` if possible; returns `(kept, removed)` vertices.
    fn fold_once(&mut self, v: usize) -> Option<(usize, usize)> {
        for label in 0..self.labels {
            for dir in [Direction::Outgoing, Direction::Incoming] {
                let list = match dir {
                    Direction::Outgoing => &self.out[v][label],
                    Direction::Incoming => &self.inc[v][label],
                };
                if list.len() < 2 {
                    continue;
                }
                let (e1, e2) = (list[0].min(list[1]), list[0].max(list[1]));
                let far = |e: Edge| if dir == Direction::Outgoing { e.dst } else { e.src };
                let (t1, t2) = (far(self.edge(e1)), far(self.edge(e2)));
                let (keep, gone) = if t1 == t2 {
                    (t1, t1)
                } else if t2 == self.basepoint || (t1 != self.basepoint && t2 < t1) {
                    (t2, t1)
                } else {
                    (t1, t2)
                };
                if keep != gone {
                    self.merge_vertex(gone, keep);
                }
                self.replace_edge(e2, e1);
                return Some((keep, gone));
            }
        }
        None
    }

    fn merge_vertex(&mut self, gone: usize, keep: usize) {
        for label in 0..self.labels {
            for e in std::mem::take(&mut self.out[gone][label]) {
                self.edges[e].as_mut().unwrap().src = keep;
                self.out[keep][label].push(e);
            }
            for e in std::mem::take(&mut self.inc[gone][label]) {
                self.edges[e].as_mut().unwrap().dst = keep;
                self.inc[keep][label].push(e);
            }
            self.out[keep][label].sort_unstable();
            self.inc[keep][label].sort_unstable();
        }
        for s in self.squares.iter_mut().flatten() {
            for c in s.corners.iter_mut() {
                if *c == gone {
                    *c = keep;
                }
            }
        }
        self.alive[gone] = false;
        self.live_vertices -= 1;
    }

    /// Deletes edge `gone`, which must now be parallel to `keep`, rerouting
    /// squares through `keep` and dropping squares that become duplicates.
    fn replace_edge(&mut self, gone: usize, keep: usize) {
        let e = self.edge(gone);
        self.out[e.src][e.label].retain(|&x| x != gone);
        self.inc[e.dst][e.label].retain(|&x| x != gone);
        self.edges[gone] = None;
        self.live_edges -= 1;
        for sid in std::mem::take(&mut self.squares_on_edge[gone]) {
            let Some(mut s) = self.squares[sid] else { continue };
            self.square_keys.remove(&s.edges);
            for x in s.edges.iter_mut() {
                if *x == gone {
                    *x = keep;
                }
            }
            if let Entry::Vacant(slot) = self.square_keys.entry(s.edges) {
                slot.insert(sid);
                self.squares[sid] = Some(s);
                if !self.squares_on_edge[keep].contains(&sid) {
                    self.squares_on_edge[keep].push(sid);
                }
            } else {
                self.squares[sid] = None;
                self.live_squares -= 1;
                for &x in &s.edges {
                    self.squares_on_edge[x].retain(|&q| q != sid);
                }
            }
        }
    }

    fn first_out(&self, v: usize, label: usize) -> Option<usize> {
        self.out[v][label].first().copied()
    }

    fn first_in(&self, v: usize, label: usize) -> Option<usize> {
        self.inc[v][label].first().copied()
    }

    fn fill_all(&mut self) -> Result<(), ComplexError> {
        let pairs: Vec<(usize, usize)> = self.graph.edges().collect();
        for a in 0..self.alive.len() {
            if !self.alive[a] {
                continue;
            }
            for &(x, y) in &pairs {
                let (Some(ab), Some(ad)) = (self.first_out(a, x), self.first_out(a, y)) else { continue };
                let (b, d) = (self.edge(ab).dst, self.edge(ad).dst);
                let (Some(bc), Some(dc)) = (self.first_out(b, y), self.first_out(d, x)) else { continue };
                let c = self.edge(bc).dst;
                if self.edge(dc).dst != c {
                    continue;
                }
                if self.new_square(Square { labels: [x, y], corners: [a, b, c, d], edges: [ab, ad, dc, bc] }) {
                    self.check_cap()?;
                }
            }
        }
        Ok(())
    }

    fn realized(&self) -> std::collections::HashSet<(usize, usize, usize, u8)> {
        // (vertex, x-edge, y-edge, corner role)
        let mut set = std::collections::HashSet::new();
        for s in self.squares.iter().flatten() {
            let [a, b, c, d] = s.corners;
            let [ab, ad, dc, bc] = s.edges;
            set.insert((a, ab, ad, 0));
            set.insert((b, ab, bc, 1));
            set.insert((c, dc, bc, 2));
            set.insert((d, dc, ad, 3));
        }
        set
    }

    fn missing_corners(&self) -> Vec<Corner> {
        let realized = self.realized();
        let pairs: Vec<(usize, usize)> = self.graph.edges().collect();
        let mut missing = Vec::new();
        use Direction::*;
        for v in (0..self.alive.len()).filter(|&v| self.alive[v]) {
            for &(x, y) in &pairs {
                for (x_dir, y_dir, role) in [
                    (Outgoing, Outgoing, 0u8),
                    (Incoming, Outgoing, 1),
                    (Incoming, Incoming, 2),
                    (Outgoing, Incoming, 3),
                ] {
                    let xs = if x_dir == Outgoing { &self.out[v][x] } else { &self.inc[v][x] };
                    let ys = if y_dir == Outgoing { &self.out[v][y] } else { &self.inc[v][y] };
                    for &x_edge in xs {
                        for &y_edge in ys {
                            if !realized.contains(&(v, x_edge, y_edge, role)) {
                                missing.push(Corner { vertex: v, x, y, x_dir, y_dir, x_edge, y_edge });
                            }
                        }
                    }
                }
            }
        }
        missing
    }

    fn edge_between(&self, src: usize, dst: usize, label: usize) -> Option<usize> {
        self.out[src][label].iter().copied().find(|&e| self.edge(e).dst == dst)
    }

    fn edge_or_new(&mut self, src: usize, dst: usize, label: usize) -> Result<usize, ComplexError> {
        match self.edge_between(src, dst, label) {
            Some(e) => Ok(e),
            None => {
                let e = self.new_edge(src, dst, label);
                self.check_cap()?;
                Ok(e)
            }
        }
    }

    fn vertex_or_new(&mut self, found: Option<usize>) -> Result<usize, ComplexError> {
        match found {
            Some(v) => Ok(v),
            None => {
                let v = self.new_vertex();
                self.check_cap()?;
                Ok(v)
            }
        }
    }

    fn spread(&mut self, k: &Corner) -> Result<(), ComplexError> {
        // the corner may have been resolved by an earlier spread this round
        let (Some(ex), Some(ey)) = (self.edges[k.x_edge], self.edges[k.y_edge]) else { return Ok(()) };
        let role = match (k.x_dir, k.y_dir) {
            (Direction::Outgoing, Direction::Outgoing) => 0u8,
            (Direction::Incoming, Direction::Outgoing) => 1,
            (Direction::Incoming, Direction::Incoming) => 2,
            (Direction::Outgoing, Direction::Incoming) => 3,
        };
        if self.realized().contains(&(k.vertex, k.x_edge, k.y_edge, role)) {
            return Ok(());
        }
        let (x, y) = (k.x, k.y);
        let dst = |e: Option<usize>, s: &Self| e.map(|e| s.edge(e).dst);
        let src = |e: Option<usize>, s: &Self| e.map(|e| s.edge(e).src);
        let square = match role {
            0 => {
                let (a, b, d) = (k.vertex, ex.dst, ey.dst);
                let found = dst(self.first_out(b, y), self).or(dst(self.first_out(d, x), self));
                let c = self.vertex_or_new(found)?;
                let bc = self.edge_or_new(b, c, y)?;
                let dc = self.edge_or_new(d, c, x)?;
                Square { labels: [x, y], corners: [a, b, c, d], edges: [ex.id, ey.id, dc, bc] }
            }
            1 => {
                let (b, a, c) = (k.vertex, ex.src, ey.dst);
                let found = dst(self.first_out(a, y), self).or(src(self.first_in(c, x), self));
                let d = self.vertex_or_new(found)?;
                let ad = self.edge_or_new(a, d, y)?;
                let dc = self.edge_or_new(d, c, x)?;
                Square { labels: [x, y], corners: [a, b, c, d], edges: [ex.id, ad, dc, ey.id] }
            }
            2 => {
                let (c, d, b) = (k.vertex, ex.src, ey.src);
                let found = src(self.first_in(b, x), self).or(src(self.first_in(d, y), self));
                let a = self.vertex_or_new(found)?;
                let ab = self.edge_or_new(a, b, x)?;
                let ad = self.edge_or_new(a, d, y)?;
                Square { labels: [x, y], corners: [a, b, c, d], edges: [ab, ad, ex.id, ey.id] }
            }
            _ => {
                let (d, c, a) = (k.vertex, ex.dst, ey.src);
                let found = dst(self.first_out(a, x), self).or(src(self.first_in(c, y), self));
                let b = self.vertex_or_new(found)?;
                let ab = self.edge_or_new(a, b, x)?;
                let bc = self.edge_or_new(b, c, y)?;
                Square { labels: [x, y], corners: [a, b, c, d], edges: [ab, ey.id, ex.id, bc] }
            }
        };
        if self.new_square(square) {
            self.check_cap()?;
        }
        Ok(())
    }

    /// Compacts live cells into a complex, preserving relative id order.
    fn freeze(&self) -> CubeComplex2 {
        let mut vmap = vec![usize::MAX; self.alive.len()];
        let mut nv = 0;
        for (v, &a) in self.alive.iter().enumerate() {
            if a {
                vmap[v] = nv;
                nv += 1;
            }
        }
        let mut emap = vec![usize::MAX; self.edges.len()];
        let mut edges = Vec::new();
        for e in self.edges.iter().flatten() {
            emap[e.id] = edges.len();
            edges.push(Edge { src: vmap[e.src], dst: vmap[e.dst], label: e.label, id: edges.len() });
        }
        let squares = self
            .squares
            .iter()
            .flatten()
            .map(|s| Square { labels: s.labels, corners: s.corners.map(|v| vmap[v]), edges: s.edges.map(|e| emap[e]) })
            .collect();
        CubeComplex2::from_parts(self.labels, nv, edges, squares, vmap[self.basepoint])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> DefiningGraph {
        DefiningGraph::parse("generators: a b\nedge: a b\n").unwrap()
    }

    fn f2() -> DefiningGraph {
        DefiningGraph::free(["a", "b"])
    }

    fn words(g: &DefiningGraph, ws: &[&str]) -> Vec<Word> {
        ws.iter().map(|s| Word::parse(g, s).unwrap()).collect()
    }

    #[test]
    fn wedge_examples() {
        let g = f2();
        let c = wedge_from_generators(&g, &words(&g, &["a a", "b"]));
        assert_eq!(c.num_vertices(), 2);
        assert_eq!(c.edges().len(), 3);
        let c = wedge_from_generators(&g, &[]);
        assert_eq!((c.num_vertices(), c.edges().len()), (1, 0));
        let z = z2();
        let c = wedge_from_generators(&z, &words(&z, &["a", "b b^-1"]));
        assert_eq!((c.num_vertices(), c.edges().len()), (1, 1));
    }

    #[test]
    fn stallings_a2_b() {
        let g = f2();
        let y = build_subgroup_complex(&g, &words(&g, &["a a", "b"]), FoldingConfig::default()).unwrap();
        assert_eq!(y.num_vertices(), 2);
        assert_eq!(y.edges().len(), 3);
        assert!(y.squares().is_empty());
        assert_eq!(y.trace(0, &words(&g, &["a"])[0]), Ok(1));
        assert_eq!(y.trace(0, &words(&g, &["a a"])[0]), Ok(0));
        assert_eq!(y.trace(0, &words(&g, &["b"])[0]), Ok(0));
    }

    #[test]
    fn folds_redundant_generators() {
        let g = f2();
        let y = build_subgroup_complex(&g, &words(&g, &["a b", "a b a b^-1", "a"]), FoldingConfig::default()).unwrap();
        // <ab, a> = F2, whose Stallings graph is the rose
        assert_eq!(y.num_vertices(), 1);
        assert_eq!(y.edges().len(), 2);
    }

    #[test]
    fn single_loop_in_z2() {
        let g = z2();
        let y = build_subgroup_complex(&g, &words(&g, &["a"]), FoldingConfig::default()).unwrap();
        assert_eq!((y.num_vertices(), y.edges().len(), y.squares().len()), (1, 1, 0));
        assert!(y.check_local_isometry(&g).unwrap().verdict);
    }

    #[test]
    fn diagonal_in_z2_exceeds_cap() {
        let g = z2();
        let r = build_subgroup_complex(&g, &words(&g, &["a b"]), FoldingConfig::with_cap(200));
        assert!(matches!(r, Err(ComplexError::CapExceeded { cap: 200 })));
    }

    #[test]
    fn whole_group_gives_salvetti() {
        let g = z2();
        let y = build_subgroup_complex(&g, &words(&g, &["a", "b"]), FoldingConfig::default()).unwrap();
        assert!(y.is_cover(&g));
        assert_eq!(y.num_vertices(), 1);
    }

    #[test]
    fn spreading_builds_a_strip() {
        // <a, b^2> in Z^2: the hull needs a second vertex
        let g = z2();
        let y = build_subgroup_complex(&g, &words(&g, &["a", "b b"]), FoldingConfig::default()).unwrap();
        assert!(y.check_local_isometry(&g).unwrap().verdict);
        assert_eq!(y.num_vertices(), 2);
        assert!(y.is_cover(&g));
    }
}
