//! The ring `K = M(n, R, Σ)`: matrices with the factor-twisted product
//! `c_ij = Σ_k s_ikj a_ik b_kj`.
//!
//! A [`FormalMatrix`] is a bare array of canonical values and does not know
//! its ring; every operation goes through a [`FormalMatrixRing`] handle. That
//! lets one matrix be read in `M(n,R,Σ)` and `M(n,R,τΣ)` side by side.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::factor::{FactorSystem, Permutation};
use crate::ring::{BaseRing, RingElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("shape mismatch: expected {expected}x{expected}, got {found}")]
    ShapeMismatch { expected: usize, found: String },
    #[error("entry {value} at ({row}, {col}) is not a canonical element of {ring}")]
    EntryOutOfRing {
        row: usize,
        col: usize,
        value: i64,
        ring: BaseRing,
    },
    #[error("scalar belongs to {found}, ring is over {expected}")]
    WrongRing { expected: BaseRing, found: BaseRing },
}

/// Square matrix of raw ring values, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormalMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl fmt::Display for FormalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.chunks(self.n).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{row:?}")?;
        }
        write!(f, "]")
    }
}

impl FormalMatrix {
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, MatrixError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(MatrixError::ShapeMismatch {
                expected: n,
                found: format!(
                    "ragged rows {:?}",
                    rows.iter().map(Vec::len).collect::<Vec<_>>()
                ),
            });
        }
        Ok(FormalMatrix {
            n,
            entries: rows.iter().flatten().copied().collect(),
        })
    }

    pub(crate) fn from_flat(n: usize, entries: Vec<i64>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        FormalMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 1-based entry `a_ij`.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n).map(<[i64]>::to_vec).collect()
    }
}

/// `(τA)_ij = a_{τ(i) τ(j)}`; an isomorphism `M(n,R,Σ) → M(n,R,τΣ)`.
pub fn transport(tau: &Permutation, a: &FormalMatrix) -> FormalMatrix {
    let n = a.n;
    assert_eq!(
        tau.degree(),
        n,
        "permutation degree must equal matrix order"
    );
    let entries = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| a.entries[tau.at(i) * n + tau.at(j)])
        .collect();
    FormalMatrix { n, entries }
}

/// First failing associativity instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssocWitness {
    pub a: FormalMatrix,
    pub b: FormalMatrix,
    pub c: FormalMatrix,
    pub left: FormalMatrix,
    pub right: FormalMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssocReport {
    pub seed: u64,
    pub samples: usize,
    pub unit_triples: usize,
    pub counterexample: Option<AssocWitness>,
}

impl AssocReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// `M(n, R, Σ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalMatrixRing {
    sys: FactorSystem,
}

impl FormalMatrixRing {
    pub fn new(sys: FactorSystem) -> Self {
        FormalMatrixRing { sys }
    }

    pub fn system(&self) -> &FactorSystem {
        &self.sys
    }

    pub fn base(&self) -> BaseRing {
        self.sys.ring()
    }

    pub fn n(&self) -> usize {
        self.sys.n()
    }

    /// Check and wrap a matrix literal.
    pub fn element(&self, rows: &[Vec<i64>]) -> Result<FormalMatrix, MatrixError> {
        let m = FormalMatrix::from_rows(rows)?;
        self.check(&m)?;
        let ring = self.base();
        if let Some(pos) = m.entries.iter().position(|&v| !ring.contains(v)) {
            return Err(MatrixError::EntryOutOfRing {
                row: pos / m.n + 1,
                col: pos % m.n + 1,
                value: m.entries[pos],
                ring,
            });
        }
        Ok(m)
    }

    fn check(&self, a: &FormalMatrix) -> Result<(), MatrixError> {
        if a.n != self.n() {
            return Err(MatrixError::ShapeMismatch {
                expected: self.n(),
                found: format!("{0}x{0}", a.n),
            });
        }
        Ok(())
    }

    pub fn zero(&self) -> FormalMatrix {
        FormalMatrix::from_flat(self.n(), vec![0; self.n() * self.n()])
    }

    pub fn identity(&self) -> FormalMatrix {
        self.scalar_embed(&self.base().one())
            .expect("one lives in the base ring")
    }

    /// Matrix unit `E_ij` (1-based).
    pub fn unit(&self, i: usize, j: usize) -> FormalMatrix {
        let n = self.n();
        let mut e = vec![0; n * n];
        e[(i - 1) * n + (j - 1)] = self.base().reduce(1);
        FormalMatrix::from_flat(n, e)
    }

    /// `r * E`, the diagonal embedding of `R`.
    pub fn scalar_embed(&self, r: &RingElement) -> Result<FormalMatrix, MatrixError> {
        if r.ring() != self.base() {
            return Err(MatrixError::WrongRing {
                expected: self.base(),
                found: r.ring(),
            });
        }
        let n = self.n();
        let mut e = vec![0; n * n];
        for i in 0..n {
            e[i * n + i] = r.value();
        }
        Ok(FormalMatrix::from_flat(n, e))
    }

    pub fn add(&self, a: &FormalMatrix, b: &FormalMatrix) -> Result<FormalMatrix, MatrixError> {
        self.check(a)?;
        self.check(b)?;
        let r = self.base();
        let entries = a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(&x, &y)| r.add(x, y))
            .collect();
        Ok(FormalMatrix::from_flat(a.n, entries))
    }

    pub fn neg(&self, a: &FormalMatrix) -> Result<FormalMatrix, MatrixError> {
        self.check(a)?;
        let r = self.base();
        Ok(FormalMatrix::from_flat(
            a.n,
            a.entries.iter().map(|&x| r.neg(x)).collect(),
        ))
    }

    pub fn sub(&self, a: &FormalMatrix, b: &FormalMatrix) -> Result<FormalMatrix, MatrixError> {
        self.add(a, &self.neg(b)?)
    }

    pub fn mul(&self, a: &FormalMatrix, b: &FormalMatrix) -> Result<FormalMatrix, MatrixError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub(crate) fn mul_unchecked(&self, a: &FormalMatrix, b: &FormalMatrix) -> FormalMatrix {
        let n = self.n();
        let r = self.base();
        let mut c = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0;
                for k in 0..n {
                    let t = r.mul(
                        r.mul(self.sys.at(i, k, j), a.entries[i * n + k]),
                        b.entries[k * n + j],
                    );
                    acc = r.add(acc, t);
                }
                c[i * n + j] = acc;
            }
        }
        FormalMatrix::from_flat(n, c)
    }

    /// Uniform over `Z/m`; entries in `-9..=9` over `Z`.
    pub fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> FormalMatrix {
        let n = self.n();
        let entries = (0..n * n)
            .map(|_| match self.base() {
                BaseRing::Modular(m) => rng.gen_range(0..m),
                BaseRing::Integers => rng.gen_range(-9..=9),
            })
            .collect();
        FormalMatrix::from_flat(n, entries)
    }

    /// Test `(AB)C = A(BC)`: first on every triple of matrix units, then on
    /// `samples` random triples drawn from a ChaCha8 stream seeded by `seed`.
    pub fn associativity_probe(&self, samples: usize, seed: u64) -> AssocReport {
        let n = self.n();
        let units: Vec<FormalMatrix> = (1..=n)
            .flat_map(|i| (1..=n).map(move |j| (i, j)))
            .map(|(i, j)| self.unit(i, j))
            .collect();
        let mut unit_triples = 0;
        let check = |a: &FormalMatrix, b: &FormalMatrix, c: &FormalMatrix| {
            let left = self.mul_unchecked(&self.mul_unchecked(a, b), c);
            let right = self.mul_unchecked(a, &self.mul_unchecked(b, c));
            (left != right).then(|| AssocWitness {
                a: a.clone(),
                b: b.clone(),
                c: c.clone(),
                left,
                right,
            })
        };
        for a in &units {
            for b in &units {
                for c in &units {
                    unit_triples += 1;
                    if let Some(w) = check(a, b, c) {
                        return AssocReport {
                            seed,
                            samples: 0,
                            unit_triples,
                            counterexample: Some(w),
                        };
                    }
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for done in 1..=samples {
            let (a, b, c) = (
                self.random(&mut rng),
                self.random(&mut rng),
                self.random(&mut rng),
            );
            if let Some(w) = check(&a, &b, &c) {
                return AssocReport {
                    seed,
                    samples: done,
                    unit_triples,
                    counterexample: Some(w),
                };
            }
        }
        AssocReport {
            seed,
            samples,
            unit_triples,
            counterexample: None,
        }
    }
}
