//! Growth-family experiments, the shipped corpus, exponent fitting and DOT
//! export.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::completion::canonical_complete;
use crate::complex::CubeComplex2;
use crate::error::{BenchError, ComplexError};
use crate::folding::{build_subgroup_complex, FoldingConfig};
use crate::graph::DefiningGraph;
use crate::membership::is_member_h;
use crate::representation::{RepresentationBundle, DEFAULT_TWIST};
use crate::separation::{separate, CertificateKind};
use crate::word::{word_length, Word};

/// Minimum number of records accepted by [`fit_exponent`].
pub const MIN_FIT_RECORDS: usize = 8;
/// Half-sample slopes must agree within this relative tolerance.
pub const STABILITY_TOLERANCE: f64 = 0.2;

/// A one-parameter family `prefix . base^m . suffix` of elements outside `H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthFamily {
    #[serde(default = "schema_one")]
    pub schema: u32,
    pub name: String,
    /// Defining graph in text or JSON form.
    pub graph: String,
    pub subgroup: Vec<String>,
    #[serde(default)]
    pub prefix: String,
    pub base: String,
    #[serde(default)]
    pub suffix: String,
    pub m_min: usize,
    pub m_max: usize,
}

fn schema_one() -> u32 {
    1
}

/// A validated family: graph, completed subgroup data and instantiated words.
pub struct PreparedFamily {
    pub graph: DefiningGraph,
    pub bundle: RepresentationBundle,
    pub samples: Vec<(usize, Word)>,
}

impl GrowthFamily {
    pub fn from_json(text: &str) -> Result<Self, BenchError> {
        serde_json::from_str(text).map_err(|e| BenchError::InvalidFamily(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("family serializes")
    }

    pub fn instantiate(&self, graph: &DefiningGraph, m: usize) -> Result<Word, BenchError> {
        let parse = |s: &str| if s.trim().is_empty() { Ok(Word::empty()) } else { Word::parse(graph, s) };
        Ok(parse(&self.prefix)?.concat(&parse(&self.base)?.pow(m as i64)).concat(&parse(&self.suffix)?))
    }

    /// Builds the subgroup data and rejects the family if any sample lies in `H`.
    pub fn prepare(&self, config: FoldingConfig) -> Result<PreparedFamily, BenchError> {
        if self.m_min > self.m_max {
            return Err(BenchError::InvalidFamily(format!("empty range {}..={}", self.m_min, self.m_max)));
        }
        let graph = DefiningGraph::parse_any(&self.graph)?;
        let gens = self.subgroup.iter().map(|s| Word::parse(&graph, s)).collect::<Result<Vec<_>, _>>()?;
        let y = build_subgroup_complex(&graph, &gens, config)?;
        let (c, ledger) = canonical_complete(&y, &graph)?;
        let bundle = RepresentationBundle::new(&graph, &y, &c, &ledger, DEFAULT_TWIST)?;
        let mut samples = Vec::new();
        for m in self.m_min..=self.m_max {
            let w = self.instantiate(&graph, m)?;
            if is_member_h(&y, &graph, &w) {
                return Err(BenchError::InvalidFamily(format!("sample m = {m} lies in the subgroup")));
            }
            samples.push((m, w));
        }
        Ok(PreparedFamily { graph, bundle, samples })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecordKind {
    Permutation,
    ModP,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub m: usize,
    pub len: usize,
    pub kind: RecordKind,
    pub p: Option<u64>,
    pub log_bound: Option<f64>,
    pub ms: f64,
}

impl BenchRecord {
    /// Equality ignoring the timing column.
    pub fn same_result(&self, other: &BenchRecord) -> bool {
        (self.m, self.len, self.kind, self.p, self.log_bound)
            == (other.m, other.len, other.kind, other.p, other.log_bound)
    }
}

/// Separates every sample; samples run in parallel, records come back ordered by `m`.
pub fn run_family(family: &GrowthFamily) -> Result<Vec<BenchRecord>, BenchError> {
    run_family_with(family, FoldingConfig::default())
}

pub fn run_family_with(family: &GrowthFamily, config: FoldingConfig) -> Result<Vec<BenchRecord>, BenchError> {
    let prepared = family.prepare(config)?;
    let mut records: Vec<BenchRecord> = prepared
        .samples
        .par_iter()
        .map(|(m, w)| {
            let start = Instant::now();
            let len = word_length(&prepared.graph, w);
            let outcome = separate(&prepared.bundle, w);
            let ms = start.elapsed().as_secs_f64() * 1000.0;
            match outcome {
                Ok(cert) => BenchRecord {
                    m: *m,
                    len,
                    kind: match cert.kind {
                        CertificateKind::Permutation => RecordKind::Permutation,
                        CertificateKind::ModP => RecordKind::ModP,
                    },
                    p: cert.mod_p.as_ref().map(|q| q.p),
                    log_bound: Some(cert.log_bound()),
                    ms,
                },
                Err(_) => BenchRecord { m: *m, len, kind: RecordKind::Error, p: None, log_bound: None, ms },
            }
        })
        .collect();
    records.sort_by_key(|r| r.m);
    Ok(records)
}

pub fn records_to_csv(records: &[BenchRecord]) -> Result<String, BenchError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| BenchError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

pub fn records_from_csv(text: &str) -> Result<Vec<BenchRecord>, BenchError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize().map(|row| row.map_err(BenchError::from)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub n: usize,
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
    pub first_half_slope: f64,
    pub second_half_slope: f64,
}

impl FitReport {
    /// `|s1 - s2| / max(|s1|, |s2|)`, taken as 0 when both slopes vanish.
    pub fn half_sample_gap(&self) -> f64 {
        let (a, b) = (self.first_half_slope, self.second_half_slope);
        let scale = a.abs().max(b.abs());
        if scale < 1e-12 {
            0.0
        } else {
            (a - b).abs() / scale
        }
    }

    pub fn is_stable(&self) -> bool {
        self.half_sample_gap() < STABILITY_TOLERANCE
    }
}

fn least_squares(points: &[(f64, f64)]) -> Result<(f64, f64), BenchError> {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx <= 1e-15 {
        return Err(BenchError::DegenerateFit);
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Least-squares slope of `ln size_bound` against `ln len` over the
/// successful records, with the slopes of the two halves (ordered by length).
pub fn fit_exponent(records: &[BenchRecord]) -> Result<FitReport, BenchError> {
    let mut points: Vec<(f64, f64)> =
        records.iter().filter_map(|r| Some(((r.len as f64).ln(), r.log_bound?))).filter(|p| p.0.is_finite()).collect();
    if points.len() < MIN_FIT_RECORDS {
        return Err(BenchError::TooFewRecords { needed: MIN_FIT_RECORDS, got: points.len() });
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (slope, intercept) = least_squares(&points)?;
    let max_residual = points.iter().map(|&(x, y)| (y - slope * x - intercept).abs()).fold(0.0, f64::max);
    let half = points.len() / 2;
    let (first_half_slope, _) = least_squares(&points[..half])?;
    let (second_half_slope, _) = least_squares(&points[half..])?;
    Ok(FitReport { n: points.len(), slope, intercept, max_residual, first_half_slope, second_half_slope })
}

/// DOT rendering of a complex; complexes without vertices are rejected.
pub fn export_dot(x: &CubeComplex2, graph: &DefiningGraph) -> Result<String, BenchError> {
    if x.num_vertices() == 0 {
        return Err(BenchError::EmptyComplex);
    }
    Ok(x.to_dot(graph))
}

pub const F2: &str = "generators: a b\n";
pub const Z2: &str = "generators: a b\nedge: a b\n";
pub const PATH3: &str = "generators: a b c\nedge: a b\nedge: b c\n";

/// A subgroup from the shipped corpus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub graph: &'static str,
    pub generators: Vec<&'static str>,
    /// The folding fixpoint is expected to exceed the cell cap.
    pub expect_cap_exceeded: bool,
}

impl CorpusEntry {
    pub fn graph(&self) -> DefiningGraph {
        DefiningGraph::parse(self.graph).expect("corpus graphs parse")
    }

    pub fn generator_words(&self, graph: &DefiningGraph) -> Vec<Word> {
        self.generators.iter().map(|s| Word::parse(graph, s).expect("corpus words parse")).collect()
    }

    pub fn build(&self, config: FoldingConfig) -> Result<(DefiningGraph, CubeComplex2), ComplexError> {
        let g = self.graph();
        let gens = self.generator_words(&g);
        let y = build_subgroup_complex(&g, &gens, config)?;
        Ok((g, y))
    }

    pub fn bundle(&self) -> Result<RepresentationBundle, BenchError> {
        let (g, y) = self.build(FoldingConfig::default())?;
        let (c, ledger) = canonical_complete(&y, &g)?;
        Ok(RepresentationBundle::new(&g, &y, &c, &ledger, DEFAULT_TWIST)?)
    }
}

pub fn corpus() -> Vec<CorpusEntry> {
    let entry = |name, graph, generators: &[&'static str], expect_cap_exceeded| CorpusEntry {
        name,
        graph,
        generators: generators.to_vec(),
        expect_cap_exceeded,
    };
    vec![
        entry("f2-a2-b", F2, &["a a", "b"], false),
        entry("f2-a3-b", F2, &["a^3", "b"], false),
        entry("f2-a2-bab", F2, &["a a", "b a b^-1"], false),
        entry("z2-a", Z2, &["a"], false),
        entry("z2-a-b2", Z2, &["a", "b b"], false),
        entry("path-a-c", PATH3, &["a", "c"], false),
        entry("path-b-ac", PATH3, &["b", "a c"], false),
        entry("z2-ab", Z2, &["a b"], true),
    ]
}

fn family(name: &str, graph: &str, subgroup: &[&str], prefix: &str, base: &str, suffix: &str) -> GrowthFamily {
    GrowthFamily {
        schema: 1,
        name: name.into(),
        graph: graph.into(),
        subgroup: subgroup.iter().map(|s| s.to_string()).collect(),
        prefix: prefix.into(),
        base: base.into(),
        suffix: suffix.into(),
        m_min: 1,
        m_max: 24,
    }
}

/// The growth families used for the exponent fit.
pub fn shipped_families() -> Vec<GrowthFamily> {
    vec![
        family("f2-a2-b-abma", F2, &["a a", "b"], "a", "b", "a"),
        family("f2-a2-b-conj", F2, &["a a", "b"], "a", "b", "a^-1"),
        family("f2-a2-b-outside-k", F2, &["a a", "b"], "", "b", "a"),
        family("z2-a-bm", Z2, &["a"], "", "b", ""),
        family("path-a-c-bm", PATH3, &["a", "c"], "", "b", ""),
    ]
}
