//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};
use std::ops::RangeInclusive;

use raagsep::word::{alphabet, normal_form};
use raagsep::{DefiningGraph, Letter, Word};
use rand::Rng;

/// Brute-force enumeration of `H`: breadth-first search over products of the
/// generators, keeping every element whose normal form has length at most
/// `radius`. Elements of `H` whose shortest generator-product path leaves the
/// ball are missed, so `radius` should exceed the tested length by a few
/// generator lengths.
pub struct SubgroupOracle {
    graph: DefiningGraph,
    elements: HashSet<Word>,
    pub radius: usize,
}

impl SubgroupOracle {
    pub fn new(graph: &DefiningGraph, gens: &[Word], radius: usize) -> Self {
        let mut steps: Vec<Word> = Vec::new();
        for g in gens {
            steps.push(g.clone());
            steps.push(g.inverse());
        }
        let start = Word::empty();
        let mut elements = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for s in &steps {
                let v = normal_form(graph, &u.concat(s));
                if v.len() <= radius && !elements.contains(&v) {
                    elements.insert(v.clone());
                    queue.push_back(v);
                }
            }
        }
        Self { graph: graph.clone(), elements, radius }
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.elements.contains(&normal_form(&self.graph, w))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }
}

pub fn random_word<R: Rng>(rng: &mut R, graph: &DefiningGraph, lens: RangeInclusive<usize>) -> Word {
    let len = rng.gen_range(lens);
    let letters = alphabet(graph);
    Word((0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect())
}

/// A freely reduced random word with length drawn from `lens`.
pub fn random_reduced_word<R: Rng>(rng: &mut R, graph: &DefiningGraph, lens: RangeInclusive<usize>) -> Word {
    let len = rng.gen_range(lens);
    let letters = alphabet(graph);
    let mut out: Vec<Letter> = Vec::with_capacity(len);
    while out.len() < len {
        let l = letters[rng.gen_range(0..letters.len())];
        if out.last() != Some(&l.inv()) {
            out.push(l);
        }
    }
    Word(out)
}

/// Composes permutations left to right: `(p * q)[i] = q[p[i]]`.
pub fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    p.iter().map(|&i| q[i]).collect()
}
