//! Finite-quotient separation certificates for elements outside `H`.
//!
//! Elements outside `K` are separated by the monodromy action on the cosets of
//! `K`. Elements of `K - H` are separated by reducing the induced pair modulo
//! the least prime that does not divide a nonzero entry of
//! `rho0(w) - rho'(w)`.

use std::collections::{HashSet, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::SeparationError;
use crate::representation::{ModBlockMonomial, RepresentationBundle};
use crate::word::{word_length, Word};

/// Image orders are computed exactly up to this many elements.
pub const PERMUTATION_CLOSURE_LIMIT: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    Permutation,
    ModP,
}

/// A nonzero entry of `rho0(w) - rho'(w)`, first in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessInteger {
    #[serde(with = "decimal")]
    pub value: BigInt,
    pub row: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationQuotient {
    /// One permutation of the cosets per generator.
    pub generators: Vec<Vec<usize>>,
    /// Image of `w`; it moves coset 0.
    pub image: Vec<usize>,
    /// Order of the image group when closure finished below the limit.
    pub group_order: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModPQuotient {
    pub p: u64,
    pub witness: WitnessInteger,
    pub image_first: ModBlockMonomial,
    pub image_second: ModBlockMonomial,
    /// Human-readable description of the subgroup that contains the image of `H`.
    pub pattern: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationCertificate {
    pub schema: u32,
    pub kind: CertificateKind,
    pub word: Word,
    /// `word` in literal syntax, for readers of the JSON.
    #[serde(default)]
    pub word_literal: String,
    pub word_length: usize,
    pub index: usize,
    pub base_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation: Option<PermutationQuotient>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mod_p: Option<ModPQuotient>,
    #[serde(with = "decimal_unsigned")]
    pub size_bound: BigUint,
}

impl SeparationCertificate {
    /// Natural log of `size_bound`.
    pub fn log_bound(&self) -> f64 {
        match &self.mod_p {
            Some(m) => mod_p_exponent(self.base_dim, self.index) as f64 * (m.p as f64).ln(),
            None => biguint_ln(&self.size_bound),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

fn biguint_ln(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        n.to_f64().map_or(f64::INFINITY, f64::ln)
    } else {
        let shift = bits - 64;
        (n >> shift).to_f64().unwrap_or(1.0).ln() + shift as f64 * std::f64::consts::LN_2
    }
}

mod decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

mod decimal_unsigned {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Least prime `p` with `p` not dividing `z` (trial division from 2).
pub fn least_prime_not_dividing(z: &BigInt) -> u64 {
    assert!(!z.is_zero(), "witness must be nonzero");
    (2u64..).filter(|&p| is_prime(p)).find(|&p| !z.is_multiple_of(&BigInt::from(p))).expect("some prime works")
}

/// `2 (2n d_H)^2`: the number of matrix entries of the induced pair.
pub fn mod_p_exponent(base_dim: usize, index: usize) -> u32 {
    let d = base_dim * index;
    u32::try_from(2 * d * d).expect("exponent fits")
}

pub fn mod_p_size_bound(p: u64, base_dim: usize, index: usize) -> BigUint {
    BigUint::from(p).pow(mod_p_exponent(base_dim, index))
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Order of the group generated by `gens`, by closure, or `None` once more
/// than `limit` elements have been found.
pub fn permutation_group_order(gens: &[Vec<usize>], limit: usize) -> Option<u64> {
    let degree = gens.first().map_or(0, Vec::len);
    let identity: Vec<usize> = (0..degree).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h: Vec<usize> = g.iter().map(|&i| s[i]).collect();
            if seen.insert(h.clone()) {
                if seen.len() > limit {
                    return None;
                }
                queue.push_back(h);
            }
        }
    }
    Some(seen.len() as u64)
}

/// `(d_H)!`, lowered to the image order when that is known.
pub fn permutation_size_bound(gens: &[Vec<usize>], index: usize) -> (Option<u64>, BigUint) {
    let order = permutation_group_order(gens, PERMUTATION_CLOSURE_LIMIT);
    let bound = order.map_or_else(|| factorial(index), BigUint::from);
    (order, bound)
}

pub fn witness(bundle: &RepresentationBundle, w: &Word) -> Result<WitnessInteger, SeparationError> {
    if bundle.zariski_membership_test(w) {
        return Err(SeparationError::InH);
    }
    let (a, b) = bundle.phi(w)?;
    let diff = a.sub(&b);
    match diff.first_nonzero() {
        Some((row, col, v)) => Ok(WitnessInteger { value: v.clone(), row, col }),
        None => Err(SeparationError::InKButEqual),
    }
}

pub fn separate(bundle: &RepresentationBundle, w: &Word) -> Result<SeparationCertificate, SeparationError> {
    let graph = bundle.graph();
    let in_h = crate::membership::is_member_h(bundle.y(), graph, w);
    if in_h {
        return Err(SeparationError::InH);
    }
    let mut cert = SeparationCertificate {
        schema: 1,
        kind: CertificateKind::Permutation,
        word: w.clone(),
        word_literal: w.display(graph).to_string(),
        word_length: word_length(graph, w),
        index: bundle.index(),
        base_dim: bundle.base_dim(),
        permutation: None,
        mod_p: None,
        size_bound: BigUint::zero(),
    };
    if !bundle.is_member_k(w) {
        let generators = bundle.action().permutations.clone();
        let image = bundle.action().permutation_of(w);
        let (group_order, bound) = permutation_size_bound(&generators, bundle.index());
        cert.permutation = Some(PermutationQuotient { generators, image, group_order });
        cert.size_bound = bound;
        return Ok(cert);
    }
    let z = witness(bundle, w)?;
    let p = least_prime_not_dividing(&z.value);
    let pair = bundle.induce(w);
    cert.kind = CertificateKind::ModP;
    cert.size_bound = mod_p_size_bound(p, bundle.base_dim(), bundle.index());
    cert.mod_p = Some(ModPQuotient {
        p,
        witness: z,
        image_first: pair.first.reduce_mod(p),
        image_second: pair.second.reduce_mod(p),
        pattern: "pairs of block-monomial matrices over Z/p fixing block 0 with equal (0,0) blocks".into(),
    });
    Ok(cert)
}

fn in_pattern_mod_p(first: &ModBlockMonomial, second: &ModBlockMonomial) -> bool {
    first.cols[0] == 0 && second.cols[0] == 0 && first.blocks[0] == second.blocks[0]
}

/// Recomputes every claim of `cert` for the word `w`.
pub fn verify(cert: &SeparationCertificate, bundle: &RepresentationBundle, w: &Word) -> bool {
    if cert.schema != 1
        || cert.word != *w
        || cert.word_literal != w.display(bundle.graph()).to_string()
        || cert.word_length != word_length(bundle.graph(), w)
        || cert.index != bundle.index()
        || cert.base_dim != bundle.base_dim()
    {
        return false;
    }
    match cert.kind {
        CertificateKind::Permutation => {
            let Some(q) = &cert.permutation else { return false };
            let action = bundle.action();
            if q.generators != action.permutations || q.image != action.permutation_of(w) || q.image[0] == 0 {
                return false;
            }
            if !bundle.h_generators().iter().all(|h| action.act(0, h) == 0) {
                return false;
            }
            let (order, bound) = permutation_size_bound(&q.generators, cert.index);
            order == q.group_order && bound == cert.size_bound
        }
        CertificateKind::ModP => {
            let Some(q) = &cert.mod_p else { return false };
            if !is_prime(q.p) || q.witness.value.is_zero() {
                return false;
            }
            let pair = bundle.induce(w);
            let (first, second) = (pair.first.reduce_mod(q.p), pair.second.reduce_mod(q.p));
            if first != q.image_first || second != q.image_second {
                return false;
            }
            // w fixes the base coset and the reduced factors differ at the witness
            if first.cols[0] != 0 || second.cols[0] != 0 {
                return false;
            }
            let (r, c) = (q.witness.row, q.witness.col);
            let dim = bundle.base_dim();
            if r >= dim || c >= dim || first.blocks[0].get(r, c) == second.blocks[0].get(r, c) {
                return false;
            }
            let exact = bundle.phi(w).ok().map(|(a, b)| a.sub(&b).get(r, c).clone());
            if exact.as_ref() != Some(&q.witness.value) {
                return false;
            }
            for h in bundle.h_generators() {
                let hp = bundle.induce(h);
                if !in_pattern_mod_p(&hp.first.reduce_mod(q.p), &hp.second.reduce_mod(q.p)) {
                    return false;
                }
            }
            cert.size_bound == mod_p_size_bound(q.p, cert.base_dim, cert.index)
        }
    }
}

/// The quotient order bounds the index of the normal core of `K`.
pub fn normal_core_bound(cert: &SeparationCertificate) -> BigUint {
    cert.size_bound.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::canonical_complete;
    use crate::folding::{build_subgroup_complex, FoldingConfig};
    use crate::graph::DefiningGraph;
    use crate::representation::DEFAULT_TWIST;

    fn bundle(g: &DefiningGraph, gens: &[&str]) -> RepresentationBundle {
        let gens: Vec<Word> = gens.iter().map(|s| Word::parse(g, s).unwrap()).collect();
        let y = build_subgroup_complex(g, &gens, FoldingConfig::default()).unwrap();
        let (c, ledger) = canonical_complete(&y, g).unwrap();
        RepresentationBundle::new(g, &y, &c, &ledger, DEFAULT_TWIST).unwrap()
    }

    #[test]
    fn primes() {
        assert_eq!(least_prime_not_dividing(&BigInt::from(6)), 5);
        assert_eq!(least_prime_not_dividing(&BigInt::from(-1)), 2);
        assert_eq!(least_prime_not_dividing(&BigInt::from(30)), 7);
        assert_eq!(least_prime_not_dividing(&BigInt::from(-2)), 3);
        assert!(is_prime(2) && is_prime(97) && !is_prime(1) && !is_prime(91));
    }

    #[test]
    fn group_orders() {
        assert_eq!(permutation_group_order(&[vec![1, 0], vec![0, 1]], 100), Some(2));
        assert_eq!(permutation_group_order(&[vec![1, 2, 0], vec![1, 0, 2]], 100), Some(6));
        assert_eq!(permutation_group_order(&[vec![1, 2, 3, 4, 0], vec![1, 0, 2, 3, 4]], 10), None);
        assert_eq!(factorial(5), BigUint::from(120u32));
    }

    #[test]
    fn permutation_certificate_for_a() {
        let g = DefiningGraph::free(["a", "b"]);
        let b = bundle(&g, &["a a", "b"]);
        let w = Word::parse(&g, "a").unwrap();
        let cert = separate(&b, &w).unwrap();
        assert_eq!(cert.kind, CertificateKind::Permutation);
        assert_eq!(cert.size_bound, BigUint::from(2u32));
        assert_eq!(normal_core_bound(&cert), BigUint::from(2u32));
        assert!(verify(&cert, &b, &w));
        let back = SeparationCertificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn mod_p_certificate_for_stable_letter() {
        let g = DefiningGraph::free(["a", "b"]);
        let b = bundle(&g, &["a a", "b"]);
        let w = Word::parse(&g, "a b a^-1").unwrap();
        let z = witness(&b, &w).unwrap();
        let (x, y) = b.phi(&w).unwrap();
        assert_eq!(x.sub(&y).get(z.row, z.col), &z.value);
        let cert = separate(&b, &w).unwrap();
        let q = cert.mod_p.as_ref().unwrap();
        assert_eq!(q.p, least_prime_not_dividing(&z.value));
        assert_eq!(cert.size_bound, BigUint::from(q.p).pow(2 * 8 * 8));
        assert!(verify(&cert, &b, &w));
        let back = SeparationCertificate::from_json(&cert.to_json()).unwrap();
        assert!(verify(&back, &b, &w));
    }

    #[test]
    fn tampering_is_detected() {
        let g = DefiningGraph::free(["a", "b"]);
        let b = bundle(&g, &["a a", "b"]);
        let w = Word::parse(&g, "a b a^-1").unwrap();
        let cert = separate(&b, &w).unwrap();
        let z = cert.mod_p.as_ref().unwrap().witness.value.clone();
        let small: Vec<u64> = (2..cert.mod_p.as_ref().unwrap().p).filter(|&p| is_prime(p)).collect();
        for p in small {
            assert!(z.is_multiple_of(&BigInt::from(p)));
            let mut bad = cert.clone();
            let q = bad.mod_p.as_mut().unwrap();
            q.p = p;
            let pair = b.induce(&w);
            q.image_first = pair.first.reduce_mod(p);
            q.image_second = pair.second.reduce_mod(p);
            bad.size_bound = mod_p_size_bound(p, bad.base_dim, bad.index);
            assert!(!verify(&bad, &b, &w));
        }
        let h = Word::parse(&g, "a a b").unwrap();
        let mut swapped = cert.clone();
        swapped.word = h.clone();
        swapped.word_literal = "a a b".into();
        swapped.word_length = 3;
        assert!(!verify(&swapped, &b, &h));
        assert_eq!(separate(&b, &h), Err(SeparationError::InH));
        assert_eq!(witness(&b, &h), Err(SeparationError::InH));
    }

    #[test]
    fn bounds_are_monotone() {
        assert!(mod_p_size_bound(2, 4, 1) < mod_p_size_bound(3, 4, 1));
        assert!(mod_p_size_bound(3, 4, 1) < mod_p_size_bound(3, 4, 2));
        assert_eq!(mod_p_size_bound(2, 4, 1), BigUint::from(2u32).pow(32));
    }
}
