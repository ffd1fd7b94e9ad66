//! Canonical completion of a locally isometric complex `Y` to a finite cover
//! `C(Y)` of the Salvetti complex.
//!
//! Generators are handled one at a time. Within a generator, the first vertex
//! (in breadth-first order) not lying on a closed `x`-cycle starts a step:
//!
//! 1. valency 0 in `x`: add an `x`-loop;
//! 2. valency 1: close the maximal `x`-path through it;
//! 3. valency 2 on an open path: likewise close the path;
//! 4. on an `x`-cycle already: nothing.
//!
//! Each step treats the whole commuting component of that vertex at once,
//! then fills every newly closed square boundary. Vertices are never created
//! or merged, so `Y` embeds in `C(Y)` with the same vertex and edge ids.
//! Every step adds one generator `t = h x^k h^-1` to the fundamental group,
//! where `h` is the breadth-first tree path to the step's vertex.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::complex::{CubeComplex2, Square};
use crate::error::{ComplexError, ParseError};
use crate::graph::DefiningGraph;
use crate::word::{Letter, Word};

/// Which edges connect a commuting component.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ComponentRule {
    /// Labels that commute with `x` and differ from it.
    #[default]
    ExcludeLabel,
    /// Labels that commute with `x`, `x` included.
    IncludeLabel,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GeneratorOrder {
    #[default]
    Graph,
    Reversed,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CompletionConfig {
    pub component_rule: ComponentRule,
    pub generator_order: GeneratorOrder,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerStep {
    /// 1, 2 or 3; no-op steps are not recorded.
    pub case: u8,
    pub label: usize,
    pub k: usize,
    pub h: Word,
    /// The commuting component processed, sorted.
    pub vertices: Vec<usize>,
    /// Ids of the edges created, in creation order.
    pub edges: Vec<usize>,
    /// Labels other than `label` on edges inside the component.
    #[serde(default)]
    pub component_labels: Vec<usize>,
}

impl LedgerStep {
    /// The new generator `h x^k h^-1`.
    pub fn stable_letter(&self) -> Word {
        self.h.concat(&Word::generator_power(self.label, self.k as i64)).concat(&self.h.inverse())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompletionLedger {
    pub steps: Vec<LedgerStep>,
    pub square_fills: usize,
}

#[derive(Serialize, Deserialize)]
struct StepJson {
    case: u8,
    label: usize,
    k: usize,
    h: String,
    vertices: Vec<usize>,
    edges: Vec<usize>,
    #[serde(default)]
    component_labels: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct LedgerJson {
    schema: u32,
    steps: Vec<StepJson>,
    square_fills: usize,
}

impl CompletionLedger {
    pub fn to_json(&self, graph: &DefiningGraph) -> String {
        let raw = LedgerJson {
            schema: 1,
            steps: self
                .steps
                .iter()
                .map(|s| StepJson {
                    case: s.case,
                    label: s.label,
                    k: s.k,
                    h: s.h.display(graph).to_string(),
                    vertices: s.vertices.clone(),
                    edges: s.edges.clone(),
                    component_labels: s.component_labels.clone(),
                })
                .collect(),
            square_fills: self.square_fills,
        };
        serde_json::to_string_pretty(&raw).expect("ledger serializes")
    }

    pub fn from_json(text: &str, graph: &DefiningGraph) -> Result<Self, ParseError> {
        let raw: LedgerJson =
            serde_json::from_str(text).map_err(|e| ParseError::Syntax { line: e.line(), message: e.to_string() })?;
        let steps = raw
            .steps
            .into_iter()
            .map(|s| {
                Ok(LedgerStep {
                    case: s.case,
                    label: s.label,
                    k: s.k,
                    h: Word::parse(graph, &s.h)?,
                    vertices: s.vertices,
                    edges: s.edges,
                    component_labels: s.component_labels,
                })
            })
            .collect::<Result<_, ParseError>>()?;
        Ok(Self { steps, square_fills: raw.square_fills })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HnnKind {
    FreeProduct,
    Hnn,
}

/// Each generator's permutation of the vertices of a cover: `v` goes to the
/// head of the outgoing edge at `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonodromyAction {
    pub permutations: Vec<Vec<usize>>,
}

impl MonodromyAction {
    pub fn degree(&self) -> usize {
        self.permutations.first().map_or(1, Vec::len)
    }

    pub fn act(&self, v: usize, w: &Word) -> usize {
        w.letters().iter().fold(v, |v, l| self.act_letter(v, *l))
    }

    fn act_letter(&self, v: usize, l: Letter) -> usize {
        let p = &self.permutations[l.generator];
        if l.inverse {
            p.iter().position(|&u| u == v).expect("bijection")
        } else {
            p[v]
        }
    }

    /// The permutation `v -> v . w` (letters act on the right).
    pub fn permutation_of(&self, w: &Word) -> Vec<usize> {
        let inverses: Vec<Vec<usize>> = self.permutations.iter().map(|p| invert(p)).collect();
        (0..self.degree())
            .map(|v| {
                w.letters().iter().fold(v, |v, l| {
                    if l.inverse {
                        inverses[l.generator][v]
                    } else {
                        self.permutations[l.generator][v]
                    }
                })
            })
            .collect()
    }
}

pub fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    /// Per vertex, the tree word leading to it from the basepoint.
    pub representatives: Vec<Word>,
    pub tree: Vec<usize>,
}

pub fn canonical_complete(
    y: &CubeComplex2,
    graph: &DefiningGraph,
) -> Result<(CubeComplex2, CompletionLedger), ComplexError> {
    canonical_complete_with(y, graph, CompletionConfig::default())
}

pub fn canonical_complete_with(
    y: &CubeComplex2,
    graph: &DefiningGraph,
    cfg: CompletionConfig,
) -> Result<(CubeComplex2, CompletionLedger), ComplexError> {
    if !y.check_local_isometry(graph)?.verdict {
        return Err(ComplexError::InputNotLocallyIsometric);
    }
    let mut c = y.clone();
    let mut ledger = CompletionLedger::default();
    let mut order: Vec<usize> = (0..graph.len()).collect();
    if cfg.generator_order == GeneratorOrder::Reversed {
        order.reverse();
    }
    for x in order {
        while let Some(v) = c.bfs_order().into_iter().find(|&v| !on_cycle(&c, v, x)) {
            let h = c.bfs_tree().0[v]
                .clone()
                .ok_or_else(|| ComplexError::Invariant(format!("vertex {v} unreachable from the basepoint")))?;
            let case = match (c.outgoing(v, x).len(), c.incoming(v, x).len()) {
                (0, 0) => 1,
                (1, 0) | (0, 1) => 2,
                _ => 3,
            };
            let k = if case == 1 { 1 } else { open_path(&c, v, x).len() + 1 };
            let component = match cfg.component_rule {
                ComponentRule::ExcludeLabel => c.commuting_component(graph, v, x),
                ComponentRule::IncludeLabel => c.component_by(v, |l| graph.generators_commute(l, x)),
            };
            let component_labels = labels_inside(&c, &component, x);
            let vertices: Vec<usize> = component.into_iter().collect();
            let edges = close_component(&mut c, &vertices, x);
            ledger.square_fills += fill_squares(&mut c, graph);
            ledger.steps.push(LedgerStep { case, label: x, k, h, vertices, edges, component_labels });
        }
    }
    if !c.is_cover(graph) {
        return Err(ComplexError::Invariant("completion did not produce a cover".into()));
    }
    Ok((c, ledger))
}

/// Rebuilds the completion from `Y` and a ledger, checking that every step
/// creates exactly the recorded edges. `upto` limits the number of steps.
pub fn replay(
    y: &CubeComplex2,
    graph: &DefiningGraph,
    ledger: &CompletionLedger,
    upto: Option<usize>,
) -> Result<CubeComplex2, ComplexError> {
    let mut c = y.clone();
    let n = upto.unwrap_or(ledger.steps.len()).min(ledger.steps.len());
    for (i, step) in ledger.steps[..n].iter().enumerate() {
        if step.label >= graph.len() || step.vertices.iter().any(|&v| v >= c.num_vertices()) {
            return Err(ComplexError::ReplayMismatch(i));
        }
        let created = close_component(&mut c, &step.vertices, step.label);
        if created != step.edges {
            return Err(ComplexError::ReplayMismatch(i));
        }
        fill_squares(&mut c, graph);
    }
    Ok(c)
}

fn on_cycle(c: &CubeComplex2, v: usize, x: usize) -> bool {
    let mut u = v;
    for _ in 0..=c.num_vertices() {
        match c.outgoing(u, x).first() {
            Some(&e) => u = c.edges()[e].dst,
            None => return false,
        }
        if u == v {
            return true;
        }
    }
    false
}

/// Edge ids of the maximal open `x`-path through `v`, initial vertex first.
fn open_path(c: &CubeComplex2, v: usize, x: usize) -> Vec<usize> {
    let mut start = v;
    while let Some(&e) = c.incoming(start, x).first() {
        start = c.edges()[e].src;
        if start == v {
            break;
        }
    }
    let mut path = Vec::new();
    let mut u = start;
    while let Some(&e) = c.outgoing(u, x).first() {
        path.push(e);
        u = c.edges()[e].dst;
        if u == start {
            break;
        }
    }
    path
}

fn labels_inside(c: &CubeComplex2, component: &BTreeSet<usize>, x: usize) -> Vec<usize> {
    let labels: BTreeSet<usize> = c
        .edges()
        .iter()
        .filter(|e| e.label != x && component.contains(&e.src) && component.contains(&e.dst))
        .map(|e| e.label)
        .collect();
    labels.into_iter().collect()
}

/// Adds `x`-loops at valency-0 vertices and closes open `x`-paths through the
/// given vertices. Returns the created edge ids.
fn close_component(c: &mut CubeComplex2, vertices: &[usize], x: usize) -> Vec<usize> {
    let mut created = Vec::new();
    for &u in vertices {
        if on_cycle(c, u, x) {
            continue;
        }
        if c.outgoing(u, x).is_empty() && c.incoming(u, x).is_empty() {
            created.push(c.add_edge(u, u, x));
        } else {
            let path = open_path(c, u, x);
            let initial = c.edges()[path[0]].src;
            let terminal = c.edges()[*path.last().unwrap()].dst;
            created.push(c.add_edge(terminal, initial, x));
        }
    }
    created
}

/// Adds a square on every closed relator boundary lacking one. Returns the
/// number added.
fn fill_squares(c: &mut CubeComplex2, graph: &DefiningGraph) -> usize {
    let mut present: HashSet<([usize; 2], usize, usize)> =
        c.squares().iter().map(|s| (s.labels, s.edges[0], s.edges[1])).collect();
    let mut added = 0;
    for a in 0..c.num_vertices() {
        for (x, y) in graph.edges() {
            let (Some(&ab), Some(&ad)) = (c.outgoing(a, x).first(), c.outgoing(a, y).first()) else { continue };
            if present.contains(&([x, y], ab, ad)) {
                continue;
            }
            let (b, d) = (c.edges()[ab].dst, c.edges()[ad].dst);
            let (Some(&bc), Some(&dc)) = (c.outgoing(b, y).first(), c.outgoing(d, x).first()) else { continue };
            let cc = c.edges()[bc].dst;
            if c.edges()[dc].dst != cc {
                continue;
            }
            c.add_square(Square { labels: [x, y], corners: [a, b, cc, d], edges: [ab, ad, dc, bc] });
            present.insert(([x, y], ab, ad));
            added += 1;
        }
    }
    added
}

pub fn monodromy(c: &CubeComplex2, graph: &DefiningGraph) -> Result<MonodromyAction, ComplexError> {
    if !c.is_cover(graph) {
        return Err(ComplexError::NotACover);
    }
    let permutations =
        (0..graph.len()).map(|x| (0..c.num_vertices()).map(|v| c.edges()[c.outgoing(v, x)[0]].dst).collect()).collect();
    Ok(MonodromyAction { permutations })
}

/// `[L : K]` for a cover: the number of vertices over the single Salvetti vertex.
pub fn index_of_k(c: &CubeComplex2) -> usize {
    c.num_vertices()
}

pub fn coset_table(c: &CubeComplex2) -> CosetTable {
    let (words, tree) = c.bfs_tree();
    CosetTable { representatives: words.into_iter().map(|w| w.expect("covers are connected")).collect(), tree }
}

/// The stable letters of the completion, each tagged by whether the
/// associated subgroup is trivial.
pub fn hnn_chain(ledger: &CompletionLedger, graph: &DefiningGraph) -> Vec<(Word, HnnKind)> {
    ledger
        .steps
        .iter()
        .map(|s| {
            let kind = if s.component_labels.iter().any(|&l| graph.adjacent(l, s.label)) {
                HnnKind::Hnn
            } else {
                HnnKind::FreeProduct
            };
            (s.stable_letter(), kind)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::salvetti;
    use crate::folding::{build_subgroup_complex, FoldingConfig};

    fn z2() -> DefiningGraph {
        DefiningGraph::parse("generators: a b\nedge: a b\n").unwrap()
    }

    fn f2() -> DefiningGraph {
        DefiningGraph::free(["a", "b"])
    }

    fn y_of(g: &DefiningGraph, gens: &[&str]) -> CubeComplex2 {
        let gens: Vec<Word> = gens.iter().map(|s| Word::parse(g, s).unwrap()).collect();
        build_subgroup_complex(g, &gens, FoldingConfig::default()).unwrap()
    }

    #[test]
    fn a2_b_in_f2() {
        let g = f2();
        let y = y_of(&g, &["a a", "b"]);
        let (c, ledger) = canonical_complete(&y, &g).unwrap();
        assert_eq!(index_of_k(&c), 2);
        assert_eq!(ledger.steps.len(), 1);
        let s = &ledger.steps[0];
        assert_eq!((s.case, s.label, s.k), (1, 1, 1));
        assert_eq!(s.h, Word::parse(&g, "a").unwrap());
        assert_eq!(s.vertices, vec![1]);
        assert_eq!(s.stable_letter(), Word::parse(&g, "a b a^-1").unwrap());
        let m = monodromy(&c, &g).unwrap();
        assert_eq!(m.permutations, vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(coset_table(&c).representatives, vec![Word::empty(), Word::parse(&g, "a").unwrap()]);
        assert_eq!(hnn_chain(&ledger, &g), vec![(Word::parse(&g, "a b a^-1").unwrap(), HnnKind::FreeProduct)]);
    }

    #[test]
    fn a_in_z2() {
        let g = z2();
        let y = y_of(&g, &["a"]);
        let (c, ledger) = canonical_complete(&y, &g).unwrap();
        assert_eq!(c, salvetti(&g));
        assert_eq!(ledger.steps.len(), 1);
        assert_eq!(ledger.square_fills, 1);
        assert_eq!(ledger.steps[0].stable_letter(), Word::parse(&g, "b").unwrap());
        assert_eq!(hnn_chain(&ledger, &g), vec![(Word::parse(&g, "b").unwrap(), HnnKind::Hnn)]);
    }

    #[test]
    fn salvetti_is_already_complete() {
        for g in [f2(), z2()] {
            let s = salvetti(&g);
            let (c, ledger) = canonical_complete(&s, &g).unwrap();
            assert_eq!(c, s);
            assert!(ledger.steps.is_empty());
            assert!(hnn_chain(&ledger, &g).is_empty());
            assert_eq!(coset_table(&c).representatives, vec![Word::empty()]);
            assert!(monodromy(&c, &g).unwrap().permutations.iter().all(|p| p == &vec![0]));
        }
    }

    #[test]
    fn case_three_closes_paths() {
        // <a^3, b a b^-1> in F2: vertices on the b-path need closing
        let g = f2();
        let y = y_of(&g, &["a a a", "b a b^-1"]);
        let (c, ledger) = canonical_complete(&y, &g).unwrap();
        assert!(c.is_cover(&g));
        assert!(ledger.steps.iter().all(|s| s.case >= 1 && s.case <= 3));
        let replayed = replay(&y, &g, &ledger, None).unwrap();
        assert_eq!(replayed, c);
    }

    #[test]
    fn double_cover_monodromy() {
        let g = z2();
        let y = y_of(&g, &["a a", "b"]);
        let (c, _) = canonical_complete(&y, &g).unwrap();
        assert_eq!(index_of_k(&c), 2);
        let m = monodromy(&c, &g).unwrap();
        assert_eq!(m.permutations, vec![vec![1, 0], vec![0, 1]]);
        let comm = Word::parse(&g, "a b a^-1 b^-1").unwrap();
        assert_eq!(m.permutation_of(&comm), vec![0, 1]);
    }

    #[test]
    fn rejects_non_isometric_input() {
        let g = z2();
        let mut y = CubeComplex2::point(2);
        let v1 = y.add_vertex();
        y.add_edge(0, v1, 0);
        y.add_edge(v1, 0, 1);
        assert_eq!(canonical_complete(&y, &g), Err(ComplexError::InputNotLocallyIsometric));
    }

    #[test]
    fn ledger_json_round_trip() {
        let g = f2();
        let y = y_of(&g, &["a a", "b"]);
        let (c, ledger) = canonical_complete(&y, &g).unwrap();
        let back = CompletionLedger::from_json(&ledger.to_json(&g), &g).unwrap();
        assert_eq!(back, ledger);
        assert_eq!(replay(&y, &g, &back, None).unwrap(), c);
        let mut bad = back.clone();
        bad.steps[0].edges = vec![99];
        assert_eq!(replay(&y, &g, &bad, None), Err(ComplexError::ReplayMismatch(0)));
    }

    #[test]
    fn not_a_cover_is_an_error() {
        let g = f2();
        let y = y_of(&g, &["a a", "b"]);
        assert_eq!(monodromy(&y, &g), Err(ComplexError::NotACover));
    }
}
