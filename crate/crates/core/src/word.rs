//! Words over RAAG generators: reduction to geodesics, lexicographic normal
//! forms and word length with respect to the standard generators.
//!
//! Letters act on the right, so a word is read left to right as an edge path.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::graph::DefiningGraph;

/// A generator or its inverse. Ordered by generator index, then `x < x^-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub const fn pos(generator: usize) -> Self {
        Self { generator, inverse: false }
    }

    pub const fn neg(generator: usize) -> Self {
        Self { generator, inverse: true }
    }

    pub fn inv(self) -> Self {
        Self { generator: self.generator, inverse: !self.inverse }
    }

    pub fn sign(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A finite, not necessarily reduced, sequence of letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letter(generator: usize) -> Self {
        Self(vec![Letter::pos(generator)])
    }

    /// `x^k` for a generator `x`; negative `k` gives inverse letters.
    pub fn generator_power(generator: usize, k: i64) -> Self {
        let l = if k >= 0 { Letter::pos(generator) } else { Letter::neg(generator) };
        Self(vec![l; k.unsigned_abs() as usize])
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self(v)
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        Self(v)
    }

    /// `u v u^-1 v^-1`.
    pub fn commutator(u: &Word, v: &Word) -> Self {
        u.concat(v).concat(&u.inverse()).concat(&v.inverse())
    }

    /// Parses juxtaposed tokens such as `a b^-1 a`. `x^k` for any integer `k`
    /// is accepted and expanded. The literal `1` or an empty string is the
    /// empty word.
    pub fn parse(graph: &DefiningGraph, text: &str) -> Result<Self, ParseError> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e.parse().map_err(|_| ParseError::BadToken(tok.to_string()))?;
                    (n, e)
                }
                None => (tok, 1),
            };
            let g = graph.index_of(name).ok_or_else(|| ParseError::UnknownGenerator(name.to_string()))?;
            out.extend(Word::generator_power(g, exp).0);
        }
        Ok(Self(out))
    }

    pub fn display<'a>(&'a self, graph: &'a DefiningGraph) -> WordDisplay<'a> {
        WordDisplay { word: self, graph }
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Self(v)
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    graph: &'a DefiningGraph,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.word.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.graph.name(l.generator))?;
            if l.inverse {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// Repeatedly deletes the leftmost cancelling pair `(i, j)` (smallest `j` for
/// that `i`) whose interior letters all commute with the pair's generator.
/// The fixpoint is a geodesic for the same element.
pub fn geodesic_reduce(graph: &DefiningGraph, w: &Word) -> Word {
    let mut letters = w.0.clone();
    'restart: loop {
        for i in 0..letters.len() {
            let target = letters[i].inv();
            let gi = letters[i].generator;
            for j in (i + 1)..letters.len() {
                if letters[j] == target {
                    letters.remove(j);
                    letters.remove(i);
                    continue 'restart;
                }
                if !graph.generators_commute(gi, letters[j].generator) {
                    break;
                }
            }
        }
        return Word(letters);
    }
}

/// Lexicographically least geodesic spelling, built by repeatedly emitting the
/// least letter that can be shuffled to the front through commuting letters.
pub fn normal_form(graph: &DefiningGraph, w: &Word) -> Word {
    let mut rest = geodesic_reduce(graph, w).0;
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let mut best: Option<(Letter, usize)> = None;
        for p in 0..rest.len() {
            let l = rest[p];
            let movable = rest[..p].iter().all(|q| graph.commutes(*q, l));
            if movable && best.is_none_or(|(b, _)| l < b) {
                best = Some((l, p));
            }
        }
        let (l, p) = best.expect("first letter is always movable");
        out.push(l);
        rest.remove(p);
    }
    Word(out)
}

pub fn word_length(graph: &DefiningGraph, w: &Word) -> usize {
    geodesic_reduce(graph, w).len()
}

pub fn same_element(graph: &DefiningGraph, u: &Word, v: &Word) -> bool {
    normal_form(graph, u) == normal_form(graph, v)
}

/// Whether `nf · l` is again a normal form, given that `nf` is one.
pub fn extends_normal_form(graph: &DefiningGraph, nf: &[Letter], l: Letter) -> bool {
    let inv = l.inv();
    for &q in nf.iter().rev() {
        if q == inv {
            return false;
        }
        if !graph.commutes(q, l) {
            return true;
        }
        if q != l && l < q {
            return false;
        }
    }
    true
}

/// All letters of the graph in normal-form order.
pub fn alphabet(graph: &DefiningGraph) -> Vec<Letter> {
    (0..graph.len()).flat_map(|g| [Letter::pos(g), Letter::neg(g)]).collect()
}

/// Depth-first walk over the normal forms of every element of length at most
/// `max_len`, each visited exactly once. The callback sees the normal form and
/// the letter just appended (`None` for the identity); returning `false` prunes
/// the subtree.
pub fn walk_ball<F>(graph: &DefiningGraph, max_len: usize, mut visit: F)
where
    F: FnMut(&[Letter], Option<Letter>) -> bool,
{
    let letters = alphabet(graph);
    let mut prefix: Vec<Letter> = Vec::with_capacity(max_len);
    if !visit(&prefix, None) {
        return;
    }
    fn rec<F: FnMut(&[Letter], Option<Letter>) -> bool>(
        graph: &DefiningGraph,
        letters: &[Letter],
        prefix: &mut Vec<Letter>,
        max_len: usize,
        visit: &mut F,
    ) {
        if prefix.len() == max_len {
            return;
        }
        for &l in letters {
            if extends_normal_form(graph, prefix, l) {
                prefix.push(l);
                if visit(prefix, Some(l)) {
                    rec(graph, letters, prefix, max_len, visit);
                }
                prefix.pop();
            }
        }
    }
    rec(graph, &letters, &mut prefix, max_len, &mut visit);
}

/// Normal forms of every element of length at most `max_len`.
pub fn ball(graph: &DefiningGraph, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    walk_ball(graph, max_len, |p, _| {
        out.push(Word(p.to_vec()));
        true
    });
    out
}
