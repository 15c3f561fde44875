//! Brute-force ground truth for small finite rings.
//!
//! A [`FiniteRingTable`] stores full Cayley tables for addition and
//! multiplication over element indices, plus an additive generating set with
//! a coordinate vector for every element. Everything downstream (radicals,
//! quotients, central idempotents, the isomorphism oracle) works on indices.

mod decompose;
mod oracle;
mod radical;

pub use decompose::{
    central_idempotent_decomposition, central_idempotents, fingerprint, matrix_order,
    RingFingerprint,
};
pub use oracle::{oracle_isomorphic, verify_isomorphism, OracleOptions, OracleResult};
pub use radical::{
    additive_span, ideal_power_sizes, is_ideal, is_nilpotent_ideal, prime_radical, quotient,
    span_generators, IdealSet,
};

use rayon::prelude::*;
use thiserror::Error;

use crate::matrix::FormalMatrixRing;
use crate::ring::BaseRing;

/// Default element-count limit; the largest built-in case `M(2, Z/8)` has 4096.
pub const DEFAULT_LIMIT: usize = 4096;
/// Element indices are stored as `u16`.
pub const HARD_LIMIT: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiniteError {
    #[error("ring has {required} elements, limit is {limit}")]
    TooLarge { required: u128, limit: usize },
    #[error("base ring {0} is infinite")]
    NotFinite(BaseRing),
    #[error("not a two-sided ideal: {0}")]
    NotAnIdeal(String),
}

#[derive(Debug, Clone)]
pub struct FiniteRingTable {
    size: usize,
    labels: Vec<Vec<i64>>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    zero: usize,
    one: usize,
    generators: Vec<usize>,
    coords: Vec<Vec<u32>>,
}

fn check_limit(required: u128, limit: usize) -> Result<(), FiniteError> {
    let limit = limit.min(HARD_LIMIT);
    if required > limit as u128 {
        return Err(FiniteError::TooLarge { required, limit });
    }
    Ok(())
}

impl FiniteRingTable {
    /// Assemble a table from element labels and index-level operations.
    #[allow(clippy::too_many_arguments)]
    fn build(
        labels: Vec<Vec<i64>>,
        add: impl Fn(usize, usize) -> usize + Sync,
        mul: impl Fn(usize, usize) -> usize + Sync,
        zero: usize,
        one: usize,
        generators: Vec<usize>,
        coords: Vec<Vec<u32>>,
    ) -> Self {
        let size = labels.len();
        assert!(size <= HARD_LIMIT);
        let table = |f: &(dyn Fn(usize, usize) -> usize + Sync)| -> Vec<u16> {
            let mut t = vec![0u16; size * size];
            t.par_chunks_mut(size).enumerate().for_each(|(x, row)| {
                for (y, slot) in row.iter_mut().enumerate() {
                    *slot = f(x, y) as u16;
                }
            });
            t
        };
        let add = table(&add);
        let mul = table(&mul);
        let neg = (0..size)
            .map(|x| {
                let row = &add[x * size..(x + 1) * size];
                row.iter()
                    .position(|&v| v as usize == zero)
                    .expect("additive inverse") as u16
            })
            .collect();
        FiniteRingTable {
            size,
            labels,
            add,
            mul,
            neg,
            zero,
            one,
            generators,
            coords,
        }
    }

    /// Every element of `M(n, Z/m, Σ)`, ordered lexicographically by entries.
    /// Additive generators are the matrix units, diagonal ones first.
    pub fn materialize(k: &FormalMatrixRing, limit: usize) -> Result<Self, FiniteError> {
        let base = k.base();
        let q = match base {
            BaseRing::Modular(m) => m as u128,
            BaseRing::Integers => return Err(FiniteError::NotFinite(base)),
        };
        let n = k.n();
        let cells = (n * n) as u32;
        let required = q.checked_pow(cells).unwrap_or(u128::MAX);
        check_limit(required, limit)?;
        let size = required as usize;
        let q = q as i64;
        let sys = k.system();

        let decode = |mut x: usize| {
            let mut e = vec![0i64; n * n];
            for slot in e.iter_mut().rev() {
                *slot = (x % q as usize) as i64;
                x /= q as usize;
            }
            e
        };
        let encode = |e: &[i64]| {
            e.iter()
                .fold(0usize, |acc, &v| acc * q as usize + v as usize)
        };
        let labels: Vec<Vec<i64>> = (0..size).map(decode).collect();

        let add = |x: usize, y: usize| {
            let s: Vec<i64> = labels[x]
                .iter()
                .zip(&labels[y])
                .map(|(&a, &b)| base.add(a, b))
                .collect();
            encode(&s)
        };
        let mul = |x: usize, y: usize| {
            let (a, b) = (&labels[x], &labels[y]);
            let mut c = vec![0i64; n * n];
            for i in 0..n {
                for kk in 0..n {
                    let aik = a[i * n + kk];
                    if aik == 0 {
                        continue;
                    }
                    for j in 0..n {
                        let t = base.mul(base.mul(sys.at(i, kk, j), aik), b[kk * n + j]);
                        c[i * n + j] = base.add(c[i * n + j], t);
                    }
                }
            }
            encode(&c)
        };

        let mut cells_order: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
        cells_order
            .extend((0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))));
        let generators = cells_order
            .iter()
            .map(|&(i, j)| {
                let mut e = vec![0i64; n * n];
                e[i * n + j] = 1;
                encode(&e)
            })
            .collect();
        let coords = labels
            .iter()
            .map(|e| {
                cells_order
                    .iter()
                    .map(|&(i, j)| e[i * n + j] as u32)
                    .collect()
            })
            .collect();
        let mut one = vec![0i64; n * n];
        for i in 0..n {
            one[i * n + i] = 1;
        }
        let one = encode(&one);
        Ok(Self::build(
            labels.clone(),
            add,
            mul,
            0,
            one,
            generators,
            coords,
        ))
    }

    /// `Z/m` as a table with generator 1.
    pub fn cyclic(m: usize) -> Result<Self, FiniteError> {
        check_limit(m as u128, HARD_LIMIT)?;
        assert!(m >= 2, "modulus must be at least 2");
        let labels = (0..m as i64).map(|v| vec![v]).collect();
        let coords = (0..m as u32).map(|v| vec![v]).collect();
        Ok(Self::build(
            labels,
            |x, y| (x + y) % m,
            |x, y| (x * y) % m,
            0,
            1,
            vec![1],
            coords,
        ))
    }

    /// `A × B` with componentwise operations.
    pub fn direct_product(a: &Self, b: &Self, limit: usize) -> Result<Self, FiniteError> {
        check_limit(a.size as u128 * b.size as u128, limit)?;
        let nb = b.size;
        let idx = |x: usize, y: usize| x * nb + y;
        let labels = (0..a.size)
            .flat_map(|x| (0..nb).map(move |y| (x, y)))
            .map(|(x, y)| [a.labels[x].clone(), b.labels[y].clone()].concat())
            .collect();
        let mut generators: Vec<usize> = a.generators.iter().map(|&g| idx(g, b.zero)).collect();
        generators.extend(b.generators.iter().map(|&g| idx(a.zero, g)));
        let coords = (0..a.size)
            .flat_map(|x| (0..nb).map(move |y| (x, y)))
            .map(|(x, y)| [a.coords[x].clone(), b.coords[y].clone()].concat())
            .collect();
        Ok(Self::build(
            labels,
            |p, q| idx(a.add(p / nb, q / nb), b.add(p % nb, q % nb)),
            |p, q| idx(a.mul(p / nb, q / nb), b.mul(p % nb, q % nb)),
            idx(a.zero, b.zero),
            idx(a.one, b.one),
            generators,
            coords,
        ))
    }

    /// Subring on `members` (sorted, closed under both operations) with its
    /// own identity `one`. Generators and coordinates are supplied by caller.
    fn restrict(
        &self,
        members: &[usize],
        one: usize,
        generators: Vec<usize>,
        coords: Vec<Vec<u32>>,
    ) -> Self {
        let mut pos = vec![usize::MAX; self.size];
        for (p, &x) in members.iter().enumerate() {
            pos[x] = p;
        }
        let labels = members.iter().map(|&x| self.labels[x].clone()).collect();
        let gens = generators.iter().map(|&g| pos[g]).collect();
        Self::build(
            labels,
            |p, q| pos[self.add(members[p], members[q])],
            |p, q| pos[self.mul(members[p], members[q])],
            pos[self.zero],
            pos[one],
            gens,
            coords,
        )
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    /// Entries (or concatenated component entries) naming element `x`.
    pub fn label(&self, x: usize) -> &[i64] {
        &self.labels[x]
    }

    pub fn find(&self, label: &[i64]) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Coefficients of `x` over [`Self::generators`].
    pub fn coords(&self, x: usize) -> &[u32] {
        &self.coords[x]
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.size + y] as usize
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.size + y] as usize
    }

    #[inline]
    pub fn neg(&self, x: usize) -> usize {
        self.neg[x] as usize
    }

    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg(y))
    }

    /// `c * x` by repeated addition.
    pub fn scale(&self, c: u32, x: usize) -> usize {
        (0..c).fold(self.zero, |acc, _| self.add(acc, x))
    }

    pub fn additive_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut acc = x;
        while acc != self.zero {
            acc = self.add(acc, x);
            k += 1;
        }
        k
    }

    pub fn is_idempotent(&self, x: usize) -> bool {
        self.mul(x, x) == x
    }

    pub fn is_central(&self, x: usize) -> bool {
        (0..self.size).all(|y| self.mul(x, y) == self.mul(y, x))
    }

    /// Units: in a finite ring a one-sided inverse is two-sided.
    pub fn unit_mask(&self) -> Vec<bool> {
        (0..self.size)
            .into_par_iter()
            .map(|x| {
                self.mul[x * self.size..(x + 1) * self.size]
                    .iter()
                    .any(|&v| v as usize == self.one)
            })
            .collect()
    }

    /// Spot check of the ring axioms on all triples drawn from `sample`.
    pub fn check_axioms_on(&self, sample: &[usize]) -> bool {
        sample.iter().all(|&a| {
            self.mul(a, self.one) == a
                && self.mul(self.one, a) == a
                && self.add(a, self.zero) == a
                && sample.iter().all(|&b| {
                    self.add(a, b) == self.add(b, a)
                        && sample.iter().all(|&c| {
                            self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
                                && self.mul(a, self.add(b, c))
                                    == self.add(self.mul(a, b), self.mul(a, c))
                                && self.mul(self.add(a, b), c)
                                    == self.add(self.mul(a, c), self.mul(b, c))
                        })
                })
        })
    }
}
