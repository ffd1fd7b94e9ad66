//! Defining graphs of right-angled Artin groups.
//!
//! Text format:
//!
//! ```text
//! # comment
//! generators: a b c
//! edge: a b
//! ```
//!
//! The JSON form is `{"schema": 1, "generators": [...], "edges": [["a","b"], ...]}`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::word::Letter;

/// The commutation graph of a RAAG. Generator order is significant: it fixes
/// the letter order used by normal forms and every deterministic traversal.
#[derive(Clone, PartialEq, Eq)]
pub struct DefiningGraph {
    names: Vec<String>,
    adjacency: Vec<Vec<bool>>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    schema: u32,
    generators: Vec<String>,
    edges: Vec<[String; 2]>,
}

impl DefiningGraph {
    /// Builds a graph from generator names and index pairs.
    pub fn new<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        edges: &[(usize, usize)],
    ) -> Result<Self, ParseError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if seen.insert(n.clone(), i).is_some() {
                return Err(ParseError::DuplicateGenerator(n.clone()));
            }
        }
        let n = names.len();
        let mut adjacency = vec![vec![false; n]; n];
        for &(a, b) in edges {
            if a >= n {
                return Err(ParseError::UnknownGenerator(format!("#{a}")));
            }
            if b >= n {
                return Err(ParseError::UnknownGenerator(format!("#{b}")));
            }
            if a == b {
                return Err(ParseError::SelfLoop(names[a].clone()));
            }
            adjacency[a][b] = true;
            adjacency[b][a] = true;
        }
        Ok(Self { names, adjacency })
    }

    /// Edgeless graph on the given names: a free group.
    pub fn free<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Self::new(names, &[]).expect("distinct names")
    }

    /// Parses the line-oriented text format.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut names: Option<Vec<String>> = None;
        let mut edge_names: Vec<(usize, String, String)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = lineno + 1;
            let (key, rest) = line.split_once(':').ok_or_else(|| ParseError::Syntax {
                line: lineno,
                message: format!("expected `key: value`, got `{line}`"),
            })?;
            let toks: Vec<&str> = rest.split_whitespace().collect();
            match key.trim() {
                "generators" => {
                    if names.is_some() {
                        return Err(ParseError::Syntax { line: lineno, message: "repeated `generators:` line".into() });
                    }
                    for t in &toks {
                        if !valid_name(t) {
                            return Err(ParseError::Syntax {
                                line: lineno,
                                message: format!("invalid generator name `{t}`"),
                            });
                        }
                    }
                    names = Some(toks.iter().map(|s| s.to_string()).collect());
                }
                "edge" => {
                    if toks.len() != 2 {
                        return Err(ParseError::Syntax {
                            line: lineno,
                            message: "an edge names exactly two generators".into(),
                        });
                    }
                    edge_names.push((lineno, toks[0].to_string(), toks[1].to_string()));
                }
                other => return Err(ParseError::Syntax { line: lineno, message: format!("unknown key `{other}`") }),
            }
        }
        let names = names.ok_or(ParseError::MissingGenerators)?;
        Self::from_named_edges(names, edge_names.into_iter().map(|(_, a, b)| (a, b)))
    }

    fn from_named_edges(
        names: Vec<String>,
        edges: impl IntoIterator<Item = (String, String)>,
    ) -> Result<Self, ParseError> {
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut pairs = Vec::new();
        for (a, b) in edges {
            let ia = *index.get(a.as_str()).ok_or_else(|| ParseError::UnknownGenerator(a.clone()))?;
            let ib = *index.get(b.as_str()).ok_or_else(|| ParseError::UnknownGenerator(b.clone()))?;
            if ia == ib {
                return Err(ParseError::SelfLoop(a));
            }
            pairs.push((ia, ib));
        }
        Self::new(names, &pairs)
    }

    /// Accepts either the JSON form or the text form.
    pub fn parse_any(text: &str) -> Result<Self, ParseError> {
        if text.trim_start().starts_with('{') {
            let raw: GraphJson = serde_json::from_str(text)
                .map_err(|e| ParseError::Syntax { line: e.line(), message: e.to_string() })?;
            Self::from_named_edges(raw.generators, raw.edges.into_iter().map(|[a, b]| (a, b)))
        } else {
            Self::parse(text)
        }
    }

    pub fn to_json(&self) -> String {
        let raw = GraphJson {
            schema: 1,
            generators: self.names.clone(),
            edges: self.edges().map(|(a, b)| [self.names[a].clone(), self.names[b].clone()]).collect(),
        };
        serde_json::to_string_pretty(&raw).expect("graph serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("generators: {}\n", self.names.join(" "));
        for (a, b) in self.edges() {
            out.push_str(&format!("edge: {} {}\n", self.names[a], self.names[b]));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, generator: usize) -> &str {
        &self.names[generator]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a][b]
    }

    /// Generators commute iff they are equal or joined by an edge.
    pub fn generators_commute(&self, a: usize, b: usize) -> bool {
        a == b || self.adjacency[a][b]
    }

    pub fn commutes(&self, x: Letter, y: Letter) -> bool {
        self.generators_commute(x.generator, y.generator)
    }

    /// Edges `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |a| ((a + 1)..n).filter(move |&b| self.adjacency[a][b]).map(move |b| (a, b)))
    }

    pub fn neighbors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&b| self.adjacency[a][b])
    }
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && !s.contains('^') && s.chars().all(|c| c.is_alphanumeric() || c == '_')
}

impl fmt::Debug for DefiningGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self.edges().map(|(a, b)| format!("{}-{}", self.names[a], self.names[b])).collect();
        write!(f, "DefiningGraph({:?}; {:?})", self.names, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_free_and_abelian() {
        let f2 = DefiningGraph::parse("generators: a b\n").unwrap();
        assert_eq!(f2.len(), 2);
        assert_eq!(f2.edges().count(), 0);

        let z2 = DefiningGraph::parse("# torus\ngenerators: a b\nedge: a b\n").unwrap();
        assert!(z2.adjacent(0, 1) && z2.adjacent(1, 0));

        let mixed = DefiningGraph::parse("generators: a b c\nedge: a b\n").unwrap();
        assert!(mixed.adjacent(0, 1));
        assert!(!mixed.adjacent(0, 2));
        assert!(!mixed.adjacent(1, 2));
        assert_eq!(mixed.names(), &["a", "b", "c"]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(DefiningGraph::parse("generators: a a\n"), Err(ParseError::DuplicateGenerator(_))));
        assert!(matches!(DefiningGraph::parse("generators: a b\nedge: a c\n"), Err(ParseError::UnknownGenerator(_))));
        assert!(matches!(DefiningGraph::parse("generators: a b\nedge: a a\n"), Err(ParseError::SelfLoop(_))));
        assert!(matches!(DefiningGraph::parse("edge: a b\n"), Err(ParseError::MissingGenerators)));
        assert!(matches!(DefiningGraph::parse("generators: a b\nedge a b\n"), Err(ParseError::Syntax { line: 2, .. })));
        assert!(matches!(DefiningGraph::parse("generators: a b\nedge: a\n"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn commutation() {
        let z2 = DefiningGraph::parse("generators: a b\nedge: a b\n").unwrap();
        let f2 = DefiningGraph::free(["a", "b"]);
        assert!(z2.commutes(Letter::pos(0), Letter::pos(1)));
        assert!(!f2.commutes(Letter::pos(0), Letter::pos(1)));
        assert!(f2.commutes(Letter::pos(0), Letter::neg(0)));
    }

    #[test]
    fn json_and_text_round_trip() {
        let g = DefiningGraph::parse("generators: a b c\nedge: b c\nedge: a b\n").unwrap();
        assert_eq!(DefiningGraph::parse_any(&g.to_json()).unwrap(), g);
        assert_eq!(DefiningGraph::parse_any(&g.to_text()).unwrap(), g);
    }
}
