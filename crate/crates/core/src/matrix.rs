//! Dense square matrices over the integers and over `Z/p`.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![BigInt::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        Self { dim, entries: rows.iter().flat_map(|r| r.iter().map(|&x| x.into())).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let e = self.get(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, other.dim);
        Self { dim: self.dim, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect() }
    }

    pub fn pow(&self, mut k: u32) -> IntMatrix {
        let mut base = self.clone();
        let mut acc = IntMatrix::identity(self.dim);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Right multiplication by a matrix that is the identity except in row
    /// `row`, whose entries are `row_entries`. Costs `O(dim^2)`.
    pub fn mul_row_elementary(&mut self, row: usize, row_entries: &[i64]) {
        let n = self.dim;
        let pivot: Vec<BigInt> = (0..n).map(|i| self.entries[i * n + row].clone()).collect();
        for (j, &r) in row_entries.iter().enumerate() {
            let delta = if j == row { r - 1 } else { r };
            if delta == 0 {
                continue;
            }
            for (i, p) in pivot.iter().enumerate() {
                if !p.is_zero() {
                    self.entries[i * n + j] += p * delta;
                }
            }
        }
    }

    /// First nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &BigInt)> {
        self.entries.iter().enumerate().find(|(_, e)| !e.is_zero()).map(|(k, e)| (k / self.dim, k % self.dim, e))
    }

    pub fn reduce_mod(&self, p: u64) -> ModMatrix {
        let m = BigInt::from(p);
        ModMatrix {
            p,
            dim: self.dim,
            entries: self.entries.iter().map(|e| e.mod_floor(&m).to_u64().expect("residue fits")).collect(),
        }
    }

    /// Largest absolute entry, as a bit length.
    pub fn max_bits(&self) -> u64 {
        self.entries.iter().map(|e| e.abs().bits()).max().unwrap_or(0)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.get(i, j).to_string()).collect()).collect()
    }

    pub fn from_strings(rows: &[Vec<String>]) -> Option<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for r in rows {
            if r.len() != dim {
                return None;
            }
            for s in r {
                entries.push(s.parse().ok()?);
            }
        }
        Some(Self { dim, entries })
    }
}

impl<'a> Mul<&'a IntMatrix> for &'a IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &'a IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.entries[k * n + j];
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.dim).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        IntMatrix::from_strings(&rows).ok_or_else(|| serde::de::Error::custom("bad integer matrix"))
    }
}

/// Square matrix over `Z/p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModMatrix {
    pub p: u64,
    pub dim: usize,
    pub entries: Vec<u64>,
}

impl ModMatrix {
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.dim + j]
    }

    pub fn mul(&self, rhs: &ModMatrix) -> ModMatrix {
        assert_eq!((self.p, self.dim), (rhs.p, rhs.dim));
        let (n, p) = (self.dim, self.p as u128);
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc: u128 = 0;
                for k in 0..n {
                    acc = (acc + self.entries[i * n + k] as u128 * rhs.entries[k * n + j] as u128) % p;
                }
                entries[i * n + j] = acc as u64;
            }
        }
        ModMatrix { p: self.p, dim: n, entries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_and_powers() {
        let m = IntMatrix::from_rows(&[vec![3, -2], vec![2, -1]]);
        let sq = &m * &m;
        assert_eq!(sq, IntMatrix::from_rows(&[vec![5, -4], vec![4, -3]]));
        assert_eq!(m.pow(2), sq);
        assert_eq!(m.pow(0), IntMatrix::identity(2));
        assert!(IntMatrix::identity(3).is_identity());
        assert!(!m.is_identity());
    }

    #[test]
    fn elementary_right_multiplication() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]);
        let e = IntMatrix::from_rows(&[vec![1, 0, 0], vec![2, -1, 2], vec![0, 0, 1]]);
        let mut fast = m.clone();
        fast.mul_row_elementary(1, &[2, -1, 2]);
        assert_eq!(fast, &m * &e);
    }

    #[test]
    fn reduction_and_first_nonzero() {
        let m = IntMatrix::from_rows(&[vec![0, -7], vec![12, 0]]);
        let (i, j, v) = m.first_nonzero().unwrap();
        assert_eq!((i, j, v.clone()), (0, 1, BigInt::from(-7)));
        let r = m.reduce_mod(5);
        assert_eq!(r.entries, vec![0, 3, 2, 0]);
        assert!(IntMatrix::zeros(2).first_nonzero().is_none());
    }

    #[test]
    fn serde_uses_decimal_strings() {
        let m = IntMatrix::from_rows(&[vec![1i64, -2], vec![3, 4]]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"[["1","-2"],["3","4"]]"#);
        let back: IntMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
