//! Exact integer representations.
//!
//! `rho0` embeds the RAAG in the right-angled Coxeter group of the doubled
//! graph (`a_v -> s_{v1} s_{v2}`) and applies the Tits reflection
//! representation. On `K = pi_1(C(Y))` a second representation `rho'` agrees
//! with `rho0` on `H` and sends each stable letter `t_i` of the completion to
//! `rho0(t_i)^k`. The pair `Phi = (rho0, rho')` is induced up to `L` along the
//! coset table of `C(Y)`; `w` lies in `H` exactly when `w` fixes the base coset
//! and both factors of `Phi(w)` agree.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::completion::{coset_table, monodromy, CompletionLedger, CosetTable, MonodromyAction};
use crate::complex::CubeComplex2;
use crate::error::{ComplexError, RepError};
use crate::graph::DefiningGraph;
use crate::matrix::{IntMatrix, ModMatrix};
use crate::membership::{is_member_k, schreier_generators};
use crate::word::{geodesic_reduce, Letter, Word};

pub const DEFAULT_TWIST: u32 = 2;

/// Two copies `v1 = 2v`, `v2 = 2v + 1` of every generator; copies of adjacent
/// generators are joined, the two copies of one generator are not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubledGraph {
    adjacency: Vec<Vec<bool>>,
}

impl DoubledGraph {
    pub fn new(graph: &DefiningGraph) -> Self {
        let n = 2 * graph.len();
        let adjacency = (0..n).map(|s| (0..n).map(|t| graph.adjacent(s / 2, t / 2)).collect()).collect();
        Self { adjacency }
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn vertex(generator: usize, copy: usize) -> usize {
        2 * generator + copy
    }

    pub fn adjacent(&self, s: usize, t: usize) -> bool {
        self.adjacency[s][t]
    }

    pub fn edge_count(&self) -> usize {
        let n = self.len();
        (0..n).flat_map(|s| ((s + 1)..n).map(move |t| (s, t))).filter(|&(s, t)| self.adjacency[s][t]).count()
    }

    /// `B(e_s, e_t)`: 1 on the diagonal, 0 for commuting pairs, -1 otherwise.
    pub fn bilinear(&self, s: usize, t: usize) -> i64 {
        if s == t {
            1
        } else if self.adjacency[s][t] {
            0
        } else {
            -1
        }
    }

    /// Row `s` of the reflection `sigma_s(e_t) = e_t - 2 B(e_s, e_t) e_s`; all
    /// other rows are those of the identity.
    pub fn reflection_row(&self, s: usize) -> Vec<i64> {
        (0..self.len()).map(|t| i64::from(s == t) - 2 * self.bilinear(s, t)).collect()
    }
}

pub fn tits_matrix(dg: &DoubledGraph, s: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(dg.len());
    m.mul_row_elementary(s, &dg.reflection_row(s));
    m
}

/// The faithful representation `rho0` of `L` in `GL(2n, Z)`.
#[derive(Clone, Debug)]
pub struct Rho0 {
    rows: Vec<Vec<i64>>,
}

impl Rho0 {
    pub fn new(graph: &DefiningGraph) -> Self {
        let dg = DoubledGraph::new(graph);
        Self { rows: (0..dg.len()).map(|s| dg.reflection_row(s)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// `m <- m * rho0(l)`.
    pub fn apply_letter(&self, m: &mut IntMatrix, l: Letter) {
        let (s1, s2) = (DoubledGraph::vertex(l.generator, 0), DoubledGraph::vertex(l.generator, 1));
        let (first, second) = if l.inverse { (s2, s1) } else { (s1, s2) };
        m.mul_row_elementary(first, &self.rows[first]);
        m.mul_row_elementary(second, &self.rows[second]);
    }

    pub fn eval(&self, w: &Word) -> IntMatrix {
        let mut m = IntMatrix::identity(self.dim());
        for &l in w.letters() {
            self.apply_letter(&mut m, l);
        }
        m
    }
}

pub fn rho0(graph: &DefiningGraph, w: &Word) -> IntMatrix {
    Rho0::new(graph).eval(w)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Syllable {
    /// An element of `H`, spelled as a word in `L`.
    H(Word),
    /// Stable letter `t_{step}` or its inverse (`step` counts from 0).
    T { step: usize, inverse: bool },
}

/// An element of `K` as an alternating product of `H`-elements and stable letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HnnWord(pub Vec<Syllable>);

impl HnnWord {
    pub fn inverse(&self) -> HnnWord {
        HnnWord(
            self.0
                .iter()
                .rev()
                .map(|s| match s {
                    Syllable::H(w) => Syllable::H(w.inverse()),
                    Syllable::T { step, inverse } => Syllable::T { step: *step, inverse: !inverse },
                })
                .collect(),
        )
    }

    fn push(&mut self, s: Syllable) {
        match (self.0.last_mut(), s) {
            (_, Syllable::H(w)) if w.is_empty() => {}
            (Some(Syllable::H(prev)), Syllable::H(w)) => prev.0.extend(w.0),
            (Some(Syllable::T { step: a, inverse: i }), Syllable::T { step: b, inverse: j }) if *a == b && *i != j => {
                self.0.pop();
            }
            (_, s) => self.0.push(s),
        }
    }

    fn extend(&mut self, other: &HnnWord) {
        for s in &other.0 {
            self.push(s.clone());
        }
    }

    /// Reduces each `H`-syllable to a geodesic and re-merges.
    pub fn tidy(&self, graph: &DefiningGraph) -> HnnWord {
        let mut out = HnnWord::default();
        for s in &self.0 {
            out.push(match s {
                Syllable::H(w) => Syllable::H(geodesic_reduce(graph, w)),
                t => t.clone(),
            });
        }
        out
    }

    pub fn stable_letters(&self) -> usize {
        self.0.iter().filter(|s| matches!(s, Syllable::T { .. })).count()
    }

    /// Substitutes `t_i = h x^k h^-1` to get a word in `L`.
    pub fn evaluate(&self, ledger: &CompletionLedger) -> Word {
        let mut out = Word::empty();
        for s in &self.0 {
            match s {
                Syllable::H(w) => out = out.concat(w),
                Syllable::T { step, inverse } => {
                    let t = ledger.steps[*step].stable_letter();
                    out = out.concat(&if *inverse { t.inverse() } else { t });
                }
            }
        }
        out
    }

    pub fn display<'a>(&'a self, graph: &'a DefiningGraph) -> impl fmt::Display + 'a {
        HnnDisplay { word: self, graph }
    }
}

struct HnnDisplay<'a> {
    word: &'a HnnWord,
    graph: &'a DefiningGraph,
}

impl fmt::Display for HnnDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.0.is_empty() {
            return write!(f, "1");
        }
        for (i, s) in self.word.0.iter().enumerate() {
            if i > 0 {
                write!(f, " . ")?;
            }
            match s {
                Syllable::H(w) => write!(f, "({})", w.display(self.graph))?,
                Syllable::T { step, inverse: false } => write!(f, "t{}", step + 1)?,
                Syllable::T { step, inverse: true } => write!(f, "t{}^-1", step + 1)?,
            }
        }
        Ok(())
    }
}

/// A block-monomial matrix: block row `j` holds its only nonzero block in
/// block column `cols[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockMonomial {
    pub block_dim: usize,
    pub cols: Vec<usize>,
    pub blocks: Vec<IntMatrix>,
}

impl BlockMonomial {
    pub fn identity(blocks: usize, block_dim: usize) -> Self {
        Self { block_dim, cols: (0..blocks).collect(), blocks: vec![IntMatrix::identity(block_dim); blocks] }
    }

    pub fn num_blocks(&self) -> usize {
        self.cols.len()
    }

    pub fn dim(&self) -> usize {
        self.block_dim * self.cols.len()
    }

    pub fn mul(&self, rhs: &BlockMonomial) -> BlockMonomial {
        assert_eq!((self.block_dim, self.num_blocks()), (rhs.block_dim, rhs.num_blocks()));
        let cols = self.cols.iter().map(|&m| rhs.cols[m]).collect();
        let blocks = self.cols.iter().zip(&self.blocks).map(|(&m, b)| b * &rhs.blocks[m]).collect();
        BlockMonomial { block_dim: self.block_dim, cols, blocks }
    }

    pub fn to_dense(&self) -> IntMatrix {
        let m = self.block_dim;
        let mut out = IntMatrix::zeros(self.dim());
        for (j, (&i, b)) in self.cols.iter().zip(&self.blocks).enumerate() {
            for r in 0..m {
                for c in 0..m {
                    out.set(j * m + r, i * m + c, b.get(r, c).clone());
                }
            }
        }
        out
    }

    pub fn reduce_mod(&self, p: u64) -> ModBlockMonomial {
        ModBlockMonomial { cols: self.cols.clone(), blocks: self.blocks.iter().map(|b| b.reduce_mod(p)).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModBlockMonomial {
    pub cols: Vec<usize>,
    pub blocks: Vec<ModMatrix>,
}

/// The induced representation evaluated on one element: one block-monomial
/// matrix per factor of `Phi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedPair {
    pub first: BlockMonomial,
    pub second: BlockMonomial,
}

impl InducedPair {
    pub fn mul(&self, rhs: &InducedPair) -> InducedPair {
        InducedPair { first: self.first.mul(&rhs.first), second: self.second.mul(&rhs.second) }
    }

    /// Membership in the closure pattern of the image of `H`: the base coset
    /// is fixed and the two base blocks coincide.
    pub fn in_h_pattern(&self) -> bool {
        self.first.cols[0] == 0 && self.second.cols[0] == 0 && self.first.blocks[0] == self.second.blocks[0]
    }
}

#[derive(Clone, Debug)]
struct EdgeFactor {
    rho: IntMatrix,
    rho_inv: IntMatrix,
    prime: IntMatrix,
    prime_inv: IntMatrix,
}

/// Loops `A`, `B` through `Y_{i-1}` with
/// `tau(s) e tau(d)^-1 = A t_i A^-1 B` for an edge `e: s -> d` created at step `i`.
#[derive(Clone, Debug)]
struct EdgePlan {
    step: usize,
    a: Word,
    b: Word,
}

/// Everything needed to evaluate `rho0`, `rho'`, `Phi` and the induced
/// representation for one subgroup.
#[derive(Clone, Debug)]
pub struct RepresentationBundle {
    graph: DefiningGraph,
    y: CubeComplex2,
    c: CubeComplex2,
    ledger: CompletionLedger,
    twist: u32,
    rho: Rho0,
    cosets: CosetTable,
    action: MonodromyAction,
    tree_words: Vec<Word>,
    plans: Vec<Option<EdgePlan>>,
    factors: Vec<EdgeFactor>,
    h_generators: Vec<Word>,
}

impl RepresentationBundle {
    pub fn new(
        graph: &DefiningGraph,
        y: &CubeComplex2,
        c: &CubeComplex2,
        ledger: &CompletionLedger,
        twist: u32,
    ) -> Result<Self, RepError> {
        if twist < 2 {
            return Err(ComplexError::Invariant("twist exponent must be at least 2".into()).into());
        }
        let action = monodromy(c, graph)?;
        let ny = y.edges().len();
        if c.num_vertices() != y.num_vertices() || c.edges().len() < ny || c.edges()[..ny] != *y.edges() {
            return Err(ComplexError::Invariant("cover does not extend Y".into()).into());
        }
        let tree_words: Vec<Word> = y
            .bfs_tree()
            .0
            .into_iter()
            .map(|w| w.ok_or_else(|| ComplexError::Invariant("Y is disconnected".into())))
            .collect::<Result<_, _>>()?;
        let rho = Rho0::new(graph);
        let mut bundle = Self {
            graph: graph.clone(),
            y: y.clone(),
            c: c.clone(),
            ledger: ledger.clone(),
            twist,
            rho,
            cosets: coset_table(c),
            action,
            tree_words,
            plans: Vec::new(),
            factors: Vec::new(),
            h_generators: schreier_generators(y),
        };
        bundle.plan_edges()?;
        bundle.compute_factors()?;
        Ok(bundle)
    }

    pub fn graph(&self) -> &DefiningGraph {
        &self.graph
    }

    pub fn y(&self) -> &CubeComplex2 {
        &self.y
    }

    pub fn cover(&self) -> &CubeComplex2 {
        &self.c
    }

    pub fn ledger(&self) -> &CompletionLedger {
        &self.ledger
    }

    pub fn twist(&self) -> u32 {
        self.twist
    }

    pub fn rho(&self) -> &Rho0 {
        &self.rho
    }

    pub fn cosets(&self) -> &CosetTable {
        &self.cosets
    }

    pub fn action(&self) -> &MonodromyAction {
        &self.action
    }

    /// Free generators of `H` read off `Y`.
    pub fn h_generators(&self) -> &[Word] {
        &self.h_generators
    }

    /// `2n`, the dimension of `rho0`.
    pub fn base_dim(&self) -> usize {
        self.rho.dim()
    }

    /// `d_H = [L : K]`.
    pub fn index(&self) -> usize {
        self.c.num_vertices()
    }

    pub fn induced_dim(&self) -> usize {
        self.base_dim() * self.index()
    }

    fn step_of_edge(&self, e: usize) -> Option<usize> {
        self.ledger.steps.iter().position(|s| s.edges.contains(&e))
    }

    fn first_edge_of(&self, step: usize) -> usize {
        self.ledger.steps[step].edges.iter().copied().min().unwrap_or(usize::MAX)
    }

    /// Path word from `from` to `to` using only edges with id `< limit` whose
    /// labels commute with `x`.
    fn commuting_path(&self, from: usize, to: usize, x: usize, limit: usize) -> Option<Word> {
        let c = &self.c;
        let mut prev: HashMap<usize, (usize, Letter)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = vec![false; c.num_vertices()];
        seen[from] = true;
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for label in (0..self.graph.len()).filter(|&l| self.graph.generators_commute(l, x)) {
                for l in [Letter::pos(label), Letter::neg(label)] {
                    let ids = if l.inverse { c.incoming(u, label) } else { c.outgoing(u, label) };
                    for &e in ids.iter().filter(|&&e| e < limit) {
                        let w = if l.inverse { c.edges()[e].src } else { c.edges()[e].dst };
                        if !seen[w] {
                            seen[w] = true;
                            prev.insert(w, (u, l));
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        if !seen[to] {
            return None;
        }
        let mut letters = Vec::new();
        let mut v = to;
        while v != from {
            let (u, l) = prev[&v];
            letters.push(l);
            v = u;
        }
        letters.reverse();
        Some(Word(letters))
    }

    #[allow(clippy::needless_range_loop)]
    fn plan_edges(&mut self) -> Result<(), RepError> {
        let ne = self.c.edges().len();
        let mut plans = vec![None; ne];
        let base = self.c.basepoint();
        for e in self.y.edges().len()..ne {
            let invariant = |m: String| RepError::from(ComplexError::Invariant(m));
            let step = self.step_of_edge(e).ok_or_else(|| invariant(format!("edge {e} has no ledger step")))?;
            let s_rec = &self.ledger.steps[step];
            let limit = self.first_edge_of(step);
            let edge = self.c.edges()[e];
            let (s, d, x) = (edge.src, edge.dst, edge.label);
            if x != s_rec.label {
                return Err(invariant(format!("edge {e} label disagrees with its step")));
            }
            let v = self.c.trace(base, &s_rec.h).map_err(|_| invariant("conjugator does not trace".into()))?;
            let to_s = self
                .commuting_path(v, s, x, limit)
                .ok_or_else(|| invariant(format!("no commuting path to vertex {s}")))?;
            // x-path from d back to s, inside Y_{i-1}
            let mut back = 0usize;
            let mut u = d;
            while u != s {
                let next = self.c.outgoing(u, x).iter().copied().find(|&f| f < limit);
                match next {
                    Some(f) => u = self.c.edges()[f].dst,
                    None => return Err(invariant(format!("open x-path at vertex {u}"))),
                }
                back += 1;
                if back > self.c.num_vertices() {
                    return Err(invariant("x-path does not return".into()));
                }
            }
            if back + 1 != s_rec.k {
                return Err(invariant(format!(
                    "edge {e} closes a cycle of length {}, step says {}",
                    back + 1,
                    s_rec.k
                )));
            }
            let tau_s = &self.tree_words[s];
            let tau_d = &self.tree_words[d];
            let a = tau_s.concat(&to_s.inverse()).concat(&s_rec.h.inverse());
            let b = tau_s.concat(&Word::generator_power(x, -(back as i64))).concat(&tau_d.inverse());
            for w in [&a, &b] {
                let (end, path) = self.c.trace_edges(base, w).map_err(|_| invariant("loop leaves C".into()))?;
                if end != base || path.iter().any(|&(f, _)| f >= limit) {
                    return Err(invariant(format!("decomposition of edge {e} leaves Y_{step}")));
                }
            }
            plans[e] = Some(EdgePlan { step, a, b });
        }
        self.plans = plans;
        Ok(())
    }

    fn edge_word(&self, e: usize) -> Word {
        let edge = self.c.edges()[e];
        self.tree_words[edge.src].concat(&Word::letter(edge.label)).concat(&self.tree_words[edge.dst].inverse())
    }

    fn path_product(&self, path: &[(usize, bool)], factors: &[EdgeFactor]) -> IntMatrix {
        let mut m = IntMatrix::identity(self.base_dim());
        for &(e, backward) in path {
            let f = &factors[e];
            m = &m * if backward { &f.prime_inv } else { &f.prime };
        }
        m
    }

    fn loop_path(&self, w: &Word) -> Option<Vec<(usize, bool)>> {
        let base = self.c.basepoint();
        match self.c.trace_edges(base, w) {
            Ok((end, path)) if end == base => Some(path),
            _ => None,
        }
    }

    fn compute_factors(&mut self) -> Result<(), RepError> {
        let mut factors: Vec<EdgeFactor> = Vec::with_capacity(self.c.edges().len());
        let twisted: Vec<(IntMatrix, IntMatrix)> = self
            .ledger
            .steps
            .iter()
            .map(|s| {
                let t = s.stable_letter();
                (self.rho.eval(&t).pow(self.twist), self.rho.eval(&t.inverse()).pow(self.twist))
            })
            .collect();
        for e in 0..self.c.edges().len() {
            let w = self.edge_word(e);
            let rho = self.rho.eval(&w);
            let rho_inv = self.rho.eval(&w.inverse());
            let (prime, prime_inv) = match &self.plans[e] {
                None => (rho.clone(), rho_inv.clone()),
                Some(plan) => {
                    let path = |w: &Word| self.loop_path(w).expect("planned loops close");
                    let pa = self.path_product(&path(&plan.a), &factors);
                    let pa_inv = self.path_product(&path(&plan.a.inverse()), &factors);
                    let pb = self.path_product(&path(&plan.b), &factors);
                    let pb_inv = self.path_product(&path(&plan.b.inverse()), &factors);
                    let (t, t_inv) = &twisted[plan.step];
                    let prime = &(&(&pa * t) * &pa_inv) * &pb;
                    let prime_inv = &(&(&pb_inv * &pa) * t_inv) * &pa_inv;
                    (prime, prime_inv)
                }
            };
            factors.push(EdgeFactor { rho, rho_inv, prime, prime_inv });
        }
        self.factors = factors;
        Ok(())
    }

    pub fn rho0(&self, w: &Word) -> IntMatrix {
        self.rho.eval(w)
    }

    pub fn is_member_k(&self, w: &Word) -> bool {
        is_member_k(&self.c, w)
    }

    pub fn rho_prime(&self, w: &Word) -> Result<IntMatrix, RepError> {
        let path = self.loop_path(w).ok_or(RepError::NotInK)?;
        Ok(self.path_product(&path, &self.factors))
    }

    /// `rho0` computed edge by edge along the loop of `w` in `C`; equal to
    /// [`rho0`](Self::rho0) whenever `w` lies in `K`.
    pub fn rho0_by_edges(&self, w: &Word) -> Result<IntMatrix, RepError> {
        let path = self.loop_path(w).ok_or(RepError::NotInK)?;
        let mut m = IntMatrix::identity(self.base_dim());
        for (e, backward) in path {
            let f = &self.factors[e];
            m = &m * if backward { &f.rho_inv } else { &f.rho };
        }
        Ok(m)
    }

    pub fn phi(&self, w: &Word) -> Result<(IntMatrix, IntMatrix), RepError> {
        let second = self.rho_prime(w)?;
        Ok((self.rho0(w), second))
    }

    /// Rewrites a `K`-word as an alternating product of `H`-elements and
    /// stable letters by tracing it through the completion history.
    pub fn rewrite_in_k_generators(&self, w: &Word) -> Result<HnnWord, RepError> {
        let path = self.loop_path(w).ok_or(RepError::NotInK)?;
        let mut memo: HashMap<usize, HnnWord> = HashMap::new();
        let mut out = HnnWord::default();
        for (e, backward) in path {
            let piece = self.edge_hnn(e, &mut memo);
            out.extend(&if backward { piece.inverse() } else { piece });
        }
        Ok(out.tidy(&self.graph))
    }

    fn edge_hnn(&self, e: usize, memo: &mut HashMap<usize, HnnWord>) -> HnnWord {
        if let Some(h) = memo.get(&e) {
            return h.clone();
        }
        let out = match &self.plans[e] {
            None => HnnWord(vec![Syllable::H(self.edge_word(e))]),
            Some(plan) => {
                let loop_hnn = |w: &Word, memo: &mut HashMap<usize, HnnWord>| {
                    let mut h = HnnWord::default();
                    for (f, backward) in self.loop_path(w).expect("planned loops close") {
                        let piece = self.edge_hnn(f, memo);
                        h.extend(&if backward { piece.inverse() } else { piece });
                    }
                    h
                };
                let a = loop_hnn(&plan.a, memo);
                let b = loop_hnn(&plan.b, memo);
                let mut h = a.clone();
                h.push(Syllable::T { step: plan.step, inverse: false });
                h.extend(&a.inverse());
                h.extend(&b);
                h
            }
        };
        memo.insert(e, out.clone());
        out
    }

    /// Evaluates an `HnnWord` under `rho'`: `H`-syllables through `rho0`,
    /// stable letters through `rho0(t_i)^{+-k}`.
    pub fn rho_prime_of_hnn(&self, h: &HnnWord) -> IntMatrix {
        let mut m = IntMatrix::identity(self.base_dim());
        for s in &h.0 {
            let factor = match s {
                Syllable::H(w) => self.rho.eval(w),
                Syllable::T { step, inverse } => {
                    let t = self.ledger.steps[*step].stable_letter();
                    let t = if *inverse { t.inverse() } else { t };
                    self.rho.eval(&t).pow(self.twist)
                }
            };
            m = &m * &factor;
        }
        m
    }

    /// The `K`-element `g_j w g_{j.w}^-1` placed in block row `j`.
    pub fn coset_cocycle(&self, j: usize, w: &Word) -> (usize, Word) {
        let i = self.action.act(j, w);
        let g = &self.cosets.representatives;
        (i, g[j].concat(w).concat(&g[i].inverse()))
    }

    /// The induced representation of `Phi` on `L`, both factors.
    pub fn induce(&self, w: &Word) -> InducedPair {
        let d = self.index();
        let m = self.base_dim();
        let mut first = BlockMonomial { block_dim: m, cols: Vec::with_capacity(d), blocks: Vec::with_capacity(d) };
        let mut second = first.clone();
        for j in 0..d {
            let (i, k) = self.coset_cocycle(j, w);
            let (a, b) = self.phi(&k).expect("cocycle values lie in K");
            first.cols.push(i);
            first.blocks.push(a);
            second.cols.push(i);
            second.blocks.push(b);
        }
        InducedPair { first, second }
    }

    /// `w` fixes the base coset and the two factors of `Phi(w)` agree.
    pub fn zariski_membership_test(&self, w: &Word) -> bool {
        match self.phi(w) {
            Ok((a, b)) => a == b,
            Err(_) => false,
        }
    }
}
