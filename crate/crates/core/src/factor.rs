//! Factor systems `{s_ijk}` and the data derived from them.
//!
//! Indices are 1-based in every public method, matching the usual subscript
//! convention `s_ijk` with `i, j, k` in `1..=n`. Storage is a flat 0-based
//! array `table[(i * n + j) * n + k]`.

use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::ring::{BaseRing, RingElement, RingError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// `s_iik = 1 = s_ikk` fails.
    Normalization,
    /// `s_ijk * s_ikl = s_ijl * s_jkl` fails.
    Cocycle,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::Normalization => write!(f, "normalization"),
            ViolationKind::Cocycle => write!(f, "cocycle"),
        }
    }
}

/// First failing identity, with its 1-based indices (a triple for
/// normalization, a quadruple for the cocycle identity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub indices: Vec<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} identity fails at {:?}", self.kind, self.indices)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentDefect {
    Diagonal,
    Triangle,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("entry {value} at {indices:?} is not a canonical element of {ring}")]
    EntryOutOfRing {
        indices: Vec<usize>,
        value: i64,
        ring: BaseRing,
    },
    #[error("not a factor system: {0}")]
    Violation(Violation),
    #[error("bad exponent matrix ({reason:?}) at {indices:?}")]
    BadExponentMatrix {
        reason: ExponentDefect,
        indices: Vec<usize>,
    },
    #[error("bad class map: {0}")]
    BadClassMap(String),
    #[error("bad permutation: {0}")]
    BadPermutation(String),
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A bijection of `{1, ..., n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>, // 0-based
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.images().iter().join(", "))
    }
}

impl Permutation {
    /// Build from 1-based images: `images[i - 1] = tau(i)`.
    pub fn new(images: Vec<usize>) -> Result<Self, FactorError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x == 0 || x > n {
                return Err(FactorError::BadPermutation(format!(
                    "image {x} outside 1..={n}"
                )));
            }
            if std::mem::replace(&mut seen[x - 1], true) {
                return Err(FactorError::BadPermutation(format!("image {x} repeated")));
            }
        }
        Ok(Permutation {
            images: images.into_iter().map(|x| x - 1).collect(),
        })
    }

    pub(crate) fn from_zero_based(images: Vec<usize>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.into_iter().eq(0..images.len())
        });
        Permutation { images }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 1-based image list.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|x| x + 1).collect()
    }

    /// `tau(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] + 1
    }

    pub(crate) fn at(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.degree(), other.degree(), "permutation degrees differ");
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Every permutation of degree `n`, in lexicographic order of images.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (0..n).permutations(n).map(|images| Permutation { images })
    }
}

/// Nonnegative integer matrix `g` with zero diagonal and the triangle
/// inequality `g(i,k) <= g(i,j) + g(j,k)`. Feeds [`FactorSystem::coboundary`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMatrix {
    n: usize,
    g: Vec<u32>,
}

impl ExponentMatrix {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self, FactorError> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(FactorError::DimensionMismatch(format!(
                "exponent row {} has length {}, expected {n}",
                i + 1,
                r.len()
            )));
        }
        let g: Vec<u32> = rows.into_iter().flatten().collect();
        for i in 0..n {
            if g[i * n + i] != 0 {
                return Err(FactorError::BadExponentMatrix {
                    reason: ExponentDefect::Diagonal,
                    indices: vec![i + 1, i + 1],
                });
            }
        }
        for (i, j, k) in itertools::iproduct!(0..n, 0..n, 0..n) {
            if g[i * n + k] as u64 > g[i * n + j] as u64 + g[j * n + k] as u64 {
                return Err(FactorError::BadExponentMatrix {
                    reason: ExponentDefect::Triangle,
                    indices: vec![i + 1, j + 1, k + 1],
                });
            }
        }
        Ok(ExponentMatrix { n, g })
    }

    /// `g(i,j) = 1` when `class(i) > class(j)`, else 0. `class_of` uses 1-based labels.
    pub fn from_class_order(class_of: &[usize]) -> Result<Self, FactorError> {
        check_class_map(class_of)?;
        let rows = class_of
            .iter()
            .map(|&ci| class_of.iter().map(|&cj| u32::from(ci > cj)).collect())
            .collect();
        ExponentMatrix::new(rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 1-based entry `g(i,j)`.
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.g[(i - 1) * self.n + (j - 1)]
    }

    fn at(&self, i: usize, j: usize) -> u32 {
        self.g[i * self.n + j]
    }
}

/// A class map must use exactly the labels `1..=k` for some `k`.
pub fn check_class_map(class_of: &[usize]) -> Result<(), FactorError> {
    let k = class_of.iter().copied().max().unwrap_or(0);
    if class_of.contains(&0) {
        return Err(FactorError::BadClassMap("class labels start at 1".into()));
    }
    for label in 1..=k {
        if !class_of.contains(&label) {
            return Err(FactorError::BadClassMap(format!(
                "label {label} unused (labels must be 1..={k})"
            )));
        }
    }
    Ok(())
}

/// All class maps `{1..n} -> {1..k}` that are onto `1..=k`, i.e. every ordered
/// set partition of `{1..n}`, in lexicographic order.
pub fn ordered_class_maps(n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|_| 1..=n)
        .multi_cartesian_product()
        .filter(|c| check_class_map(c).is_ok())
        .collect()
}

/// A table `{s_ijk}` over a base ring. Values built through
/// [`FactorSystem::validate`] or the constructors are certified to satisfy
/// the normalization and cocycle identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSystem {
    n: usize,
    ring: BaseRing,
    table: Vec<i64>,
    certified: bool,
}

/// Outcome of re-checking the identities implied by the axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedReport {
    pub checked: usize,
    /// Name of the failed relation and its 1-based indices.
    pub violation: Option<(&'static str, Vec<usize>)>,
}

impl DerivedReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Uniqueness {
    TablesAgree,
    TablesDiffer,
    /// Principal matrices differ, so the tables were not compared.
    NotComparable,
}

impl FactorSystem {
    /// Certify a raw table given as `table[i][j][k] = s_{i+1,j+1,k+1}`.
    pub fn validate(ring: BaseRing, table: &[Vec<Vec<i64>>]) -> Result<Self, FactorError> {
        let n = table.len();
        if n < 2 {
            return Err(FactorError::OrderTooSmall(n));
        }
        for (i, plane) in table.iter().enumerate() {
            if plane.len() != n {
                return Err(FactorError::DimensionMismatch(format!(
                    "table[{i}] has {} rows, expected {n}",
                    plane.len()
                )));
            }
            for (j, row) in plane.iter().enumerate() {
                if row.len() != n {
                    return Err(FactorError::DimensionMismatch(format!(
                        "table[{i}][{j}] has {} entries, expected {n}",
                        row.len()
                    )));
                }
            }
        }
        let flat: Vec<i64> = table.iter().flatten().flatten().copied().collect();
        Self::validate_flat(ring, n, flat)
    }

    pub fn validate_flat(ring: BaseRing, n: usize, table: Vec<i64>) -> Result<Self, FactorError> {
        let sys = Self::unchecked(ring, n, table)?;
        if let Some(v) = sys.first_violation() {
            return Err(FactorError::Violation(v));
        }
        Ok(FactorSystem {
            certified: true,
            ..sys
        })
    }

    /// Wrap a table without checking the axioms. The result reports
    /// `is_certified() == false`; intended for probing broken tables.
    pub fn unchecked(ring: BaseRing, n: usize, table: Vec<i64>) -> Result<Self, FactorError> {
        if n < 2 {
            return Err(FactorError::OrderTooSmall(n));
        }
        if table.len() != n * n * n {
            return Err(FactorError::DimensionMismatch(format!(
                "flat table has {} entries, expected {}",
                table.len(),
                n * n * n
            )));
        }
        if let Some(pos) = table.iter().position(|&v| !ring.contains(v)) {
            return Err(FactorError::EntryOutOfRing {
                indices: vec![pos / (n * n) + 1, (pos / n) % n + 1, pos % n + 1],
                value: table[pos],
                ring,
            });
        }
        Ok(FactorSystem {
            n,
            ring,
            table,
            certified: false,
        })
    }

    /// All factors equal to 1: the ordinary matrix ring.
    pub fn trivial(ring: BaseRing, n: usize) -> Result<Self, FactorError> {
        Self::validate_flat(ring, n, vec![ring.reduce(1); n * n * n])
    }

    /// `s_ijk = s^(g(i,j) + g(j,k) - g(i,k))`.
    pub fn coboundary(g: &ExponentMatrix, s: &RingElement) -> Result<Self, FactorError> {
        let n = g.n();
        let ring = s.ring();
        let mut table = Vec::with_capacity(n * n * n);
        for (i, j, k) in itertools::iproduct!(0..n, 0..n, 0..n) {
            let e = g.at(i, j) + g.at(j, k) - g.at(i, k);
            table.push(s.pow(e)?.value());
        }
        let sys = Self::unchecked(ring, n, table)?;
        debug_assert!(sys.first_violation().is_none());
        Ok(FactorSystem {
            certified: true,
            ..sys
        })
    }

    /// The binary system of an ordered partition: `class_of[i - 1]` is the
    /// 1-based label of the class holding `i`.
    pub fn binary(class_of: &[usize], s: &RingElement) -> Result<Self, FactorError> {
        let g = ExponentMatrix::from_class_order(class_of)?;
        Self::coboundary(&g, s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// Flat 0-based storage, `table[(i * n + j) * n + k]`.
    pub fn raw_table(&self) -> &[i64] {
        &self.table
    }

    #[inline]
    pub(crate) fn at(&self, i: usize, j: usize, k: usize) -> i64 {
        self.table[(i * self.n + j) * self.n + k]
    }

    /// `s_ijk` with 1-based indices.
    pub fn factor(&self, i: usize, j: usize, k: usize) -> i64 {
        self.at(i - 1, j - 1, k - 1)
    }

    pub fn factor_element(&self, i: usize, j: usize, k: usize) -> RingElement {
        self.ring.element(self.factor(i, j, k))
    }

    /// Nested `table[i][j][k]` form (0-based positions).
    pub fn to_nested(&self) -> Vec<Vec<Vec<i64>>> {
        self.table
            .chunks(self.n * self.n)
            .map(|plane| plane.chunks(self.n).map(<[i64]>::to_vec).collect())
            .collect()
    }

    fn first_violation(&self) -> Option<Violation> {
        let n = self.n;
        let r = &self.ring;
        let one = r.reduce(1);
        for (i, j, k) in itertools::iproduct!(0..n, 0..n, 0..n) {
            if (i == j || j == k) && self.at(i, j, k) != one {
                return Some(Violation {
                    kind: ViolationKind::Normalization,
                    indices: vec![i + 1, j + 1, k + 1],
                });
            }
        }
        for (i, j, k, l) in itertools::iproduct!(0..n, 0..n, 0..n, 0..n) {
            let lhs = r.mul(self.at(i, j, k), self.at(i, k, l));
            let rhs = r.mul(self.at(i, j, l), self.at(j, k, l));
            if lhs != rhs {
                return Some(Violation {
                    kind: ViolationKind::Cocycle,
                    indices: vec![i + 1, j + 1, k + 1, l + 1],
                });
            }
        }
        None
    }

    /// Re-check the consequences of the axioms:
    /// `s_iji = s_jij = s_ijl s_jil = s_lij s_lji` for all `i, j, l`, and the
    /// three index-permuted rows of that identity for every triple `i, j, k`.
    /// A failure on a certified system means an arithmetic bug, not bad input.
    pub fn derived_relations_report(&self) -> DerivedReport {
        let n = self.n;
        let r = &self.ring;
        let s = |i: usize, j: usize, k: usize| self.at(i, j, k);
        let mut checked = 0;
        let fail = |name: &'static str, idx: &[usize]| {
            Some((name, idx.iter().map(|x| x + 1).collect::<Vec<_>>()))
        };
        for (i, j, l) in itertools::iproduct!(0..n, 0..n, 0..n) {
            let base = s(i, j, i);
            checked += 3;
            if base != s(j, i, j) {
                return DerivedReport {
                    checked,
                    violation: fail("s_iji = s_jij", &[i, j, l]),
                };
            }
            if base != r.mul(s(i, j, l), s(j, i, l)) {
                return DerivedReport {
                    checked,
                    violation: fail("s_iji = s_ijl s_jil", &[i, j, l]),
                };
            }
            if base != r.mul(s(l, i, j), s(l, j, i)) {
                return DerivedReport {
                    checked,
                    violation: fail("s_iji = s_lij s_lji", &[i, j, l]),
                };
            }
        }
        for (i, j, k) in itertools::iproduct!(0..n, 0..n, 0..n) {
            let rows: [(&'static str, [i64; 4]); 3] = [
                (
                    "row ij",
                    [
                        s(i, j, i),
                        s(j, i, j),
                        r.mul(s(i, j, k), s(j, i, k)),
                        r.mul(s(k, i, j), s(k, j, i)),
                    ],
                ),
                (
                    "row jk",
                    [
                        s(j, k, j),
                        s(k, j, k),
                        r.mul(s(j, k, i), s(k, j, i)),
                        r.mul(s(i, j, k), s(i, k, j)),
                    ],
                ),
                (
                    "row ik",
                    [
                        s(i, k, i),
                        s(k, i, k),
                        r.mul(s(i, k, j), s(k, i, j)),
                        r.mul(s(j, i, k), s(j, k, i)),
                    ],
                ),
            ];
            for (name, vals) in rows {
                checked += 3;
                if vals.iter().any(|&v| v != vals[0]) {
                    return DerivedReport {
                        checked,
                        violation: fail(name, &[i, j, k]),
                    };
                }
            }
        }
        DerivedReport {
            checked,
            violation: None,
        }
    }

    /// Principal factor matrix `S = (s_iji)`, row-major.
    pub fn principal_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.n;
        (0..n)
            .map(|i| (0..n).map(|j| self.at(i, j, i)).collect())
            .collect()
    }

    /// Factor matrix `S_k = (s_ikj)` for 1-based `k`.
    pub fn factor_matrix(&self, k: usize) -> Result<Vec<Vec<i64>>, FactorError> {
        let n = self.n;
        if k == 0 || k > n {
            return Err(FactorError::IndexOutOfRange { index: k, n });
        }
        let k = k - 1;
        Ok((0..n)
            .map(|i| (0..n).map(|j| self.at(i, k, j)).collect())
            .collect())
    }

    /// `tau Σ`: `t_ijk = s_{tau(i) tau(j) tau(k)}`.
    pub fn permute(&self, tau: &Permutation) -> FactorSystem {
        assert_eq!(tau.degree(), self.n, "permutation degree must equal n");
        let n = self.n;
        let table = itertools::iproduct!(0..n, 0..n, 0..n)
            .map(|(i, j, k)| self.at(tau.at(i), tau.at(j), tau.at(k)))
            .collect();
        FactorSystem {
            n,
            ring: self.ring,
            table,
            certified: self.certified,
        }
    }

    /// Distinct values different from 1.
    pub fn non_identity_values(&self) -> Vec<i64> {
        let one = self.ring.reduce(1);
        self.table
            .iter()
            .copied()
            .filter(|&v| v != one)
            .sorted()
            .dedup()
            .collect()
    }

    /// Whether every factor is 1 or `s`.
    pub fn is_binary_in(&self, s: &RingElement) -> bool {
        s.ring() == self.ring && self.non_identity_values().iter().all(|&v| v == s.value())
    }

    /// Same underlying table (ignores certification).
    pub fn same_table(&self, other: &FactorSystem) -> bool {
        self.n == other.n && self.ring == other.ring && self.table == other.table
    }
}

/// Whether two binary systems with equal principal matrices have equal full
/// tables. Requires `s^2 != 1` and `s^2 != s`.
pub fn binary_uniqueness_check(
    a: &FactorSystem,
    b: &FactorSystem,
    s: &RingElement,
) -> Result<Uniqueness, FactorError> {
    if a.n() != b.n() || a.ring() != b.ring() || a.ring() != s.ring() {
        return Err(FactorError::HypothesisViolated(
            "systems must share order and base ring with s".into(),
        ));
    }
    let sq = s.mul(s)?;
    if sq.is_one() {
        return Err(FactorError::HypothesisViolated("s^2 = 1".into()));
    }
    if sq == *s {
        return Err(FactorError::HypothesisViolated("s^2 = s".into()));
    }
    if !a.is_binary_in(s) || !b.is_binary_in(s) {
        return Err(FactorError::HypothesisViolated(format!(
            "factor values must lie in {{1, {s}}}"
        )));
    }
    if a.principal_matrix() != b.principal_matrix() {
        return Ok(Uniqueness::NotComparable);
    }
    Ok(if a.same_table(b) {
        Uniqueness::TablesAgree
    } else {
        Uniqueness::TablesDiffer
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zm(m: i64) -> BaseRing {
        BaseRing::modular(m).unwrap()
    }

    fn nested(n: usize, f: impl Fn(usize, usize, usize) -> i64) -> Vec<Vec<Vec<i64>>> {
        (1..=n)
            .map(|i| {
                (1..=n)
                    .map(|j| (1..=n).map(|k| f(i, j, k)).collect())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn all_ones_is_certified() {
        let sys = FactorSystem::validate(zm(5), &nested(2, |_, _, _| 1)).unwrap();
        assert!(sys.is_certified());
        assert_eq!(sys, FactorSystem::trivial(zm(5), 2).unwrap());
    }

    #[test]
    fn two_by_two_over_z4() {
        let t = nested(2, |i, j, k| {
            if (i, j, k) == (1, 2, 1) || (i, j, k) == (2, 1, 2) {
                2
            } else {
                1
            }
        });
        FactorSystem::validate(zm(4), &t).unwrap();

        let mut bad = t.clone();
        bad[0][0][1] = 2;
        let err = FactorSystem::validate(zm(4), &bad).unwrap_err();
        assert_eq!(
            err,
            FactorError::Violation(Violation {
                kind: ViolationKind::Normalization,
                indices: vec![1, 1, 2]
            })
        );
    }

    #[test]
    fn cocycle_violation_reported_lexicographically_first() {
        let mut t = nested(3, |_, _, _| 1);
        t[0][1][0] = 2; // s_121
        let err = FactorSystem::validate(zm(8), &t).unwrap_err();
        // Every earlier quadruple has s_121 on both sides or not at all.
        assert_eq!(
            err,
            FactorError::Violation(Violation {
                kind: ViolationKind::Cocycle,
                indices: vec![1, 2, 1, 2]
            })
        );
    }

    #[test]
    fn dimension_and_range_errors() {
        let mut t = nested(2, |_, _, _| 1);
        t[1].pop();
        assert!(matches!(
            FactorSystem::validate(zm(4), &t),
            Err(FactorError::DimensionMismatch(_))
        ));
        let t = nested(2, |i, _, _| if i == 2 { 7 } else { 1 });
        assert!(matches!(
            FactorSystem::validate(zm(4), &t),
            Err(FactorError::EntryOutOfRing { value: 7, .. })
        ));
        assert!(matches!(
            FactorSystem::validate(zm(4), &[vec![vec![1]]]),
            Err(FactorError::OrderTooSmall(1))
        ));
    }

    #[test]
    fn coboundary_examples() {
        let g = ExponentMatrix::new(vec![vec![0, 1], vec![0, 0]]).unwrap();
        let sys = FactorSystem::coboundary(&g, &zm(4).element(2)).unwrap();
        for (i, j, k) in itertools::iproduct!(1..=2, 1..=2, 1..=2) {
            let expected = if (i, j, k) == (1, 2, 1) || (i, j, k) == (2, 1, 2) {
                2
            } else {
                1
            };
            assert_eq!(sys.factor(i, j, k), expected, "s_{i}{j}{k}");
        }
        let zero = ExponentMatrix::new(vec![vec![0; 4]; 4]).unwrap();
        let sys = FactorSystem::coboundary(&zero, &zm(9).element(3)).unwrap();
        assert_eq!(sys, FactorSystem::trivial(zm(9), 4).unwrap());
    }

    #[test]
    fn bad_exponent_matrices() {
        assert_eq!(
            ExponentMatrix::new(vec![vec![0, 1], vec![0, 1]]).unwrap_err(),
            FactorError::BadExponentMatrix {
                reason: ExponentDefect::Diagonal,
                indices: vec![2, 2]
            }
        );
        assert_eq!(
            ExponentMatrix::new(vec![vec![0, 0, 2], vec![0, 0, 0], vec![0, 0, 0]]).unwrap_err(),
            FactorError::BadExponentMatrix {
                reason: ExponentDefect::Triangle,
                indices: vec![1, 2, 3]
            }
        );
    }

    #[test]
    fn binary_examples() {
        let s = zm(8).element(2);
        let sys = FactorSystem::binary(&[1, 1, 2], &s).unwrap();
        assert_eq!(
            sys.principal_matrix(),
            vec![vec![1, 1, 2], vec![1, 1, 2], vec![2, 2, 1]]
        );
        assert!(sys.derived_relations_report().passed());

        let sys = FactorSystem::binary(&[1, 2], &zm(4).element(2)).unwrap();
        assert_eq!(sys.principal_matrix(), vec![vec![1, 2], vec![2, 1]]);

        let sys = FactorSystem::binary(&[1, 1, 1], &zm(4).element(2)).unwrap();
        assert_eq!(sys, FactorSystem::trivial(zm(4), 3).unwrap());

        let z2 = zm(2);
        let sys = FactorSystem::binary(&[1, 2, 3], &z2.zero()).unwrap();
        assert_eq!(
            sys.principal_matrix(),
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]
        );
        // For pairwise class-distinct (i,j,k) the exponent is 1 exactly when
        // (c_i, c_j, c_k) is an odd arrangement; (1,2,3) stays 1.
        assert_eq!(sys.factor(1, 2, 3), 1);
        assert_eq!(sys.factor(1, 3, 2), 0);
        assert_eq!(sys.factor(2, 1, 3), 0);
        assert_eq!(sys.factor(3, 2, 1), 0);
        assert_eq!(sys.factor(2, 3, 1), 1);
    }

    #[test]
    fn bad_class_maps() {
        let s = zm(4).element(2);
        assert!(matches!(
            FactorSystem::binary(&[1, 3], &s),
            Err(FactorError::BadClassMap(_))
        ));
        assert!(matches!(
            FactorSystem::binary(&[0, 1], &s),
            Err(FactorError::BadClassMap(_))
        ));
    }

    #[test]
    fn factor_matrices_by_index() {
        let sys = FactorSystem::binary(&[1, 2], &zm(4).element(2)).unwrap();
        // Entry (i,j) of S_k is s_ikj; row k and column k are all 1.
        assert_eq!(sys.factor_matrix(1).unwrap(), vec![vec![1, 1], vec![1, 2]]);
        assert_eq!(sys.factor_matrix(2).unwrap(), vec![vec![2, 1], vec![1, 1]]);
        assert_eq!(
            sys.factor_matrix(3).unwrap_err(),
            FactorError::IndexOutOfRange { index: 3, n: 2 }
        );
        let triv = FactorSystem::trivial(zm(4), 3).unwrap();
        for k in 1..=3 {
            assert_eq!(triv.factor_matrix(k).unwrap(), vec![vec![1; 3]; 3]);
        }
    }

    #[test]
    fn permutation_basics() {
        let tau = Permutation::new(vec![3, 1, 2]).unwrap();
        assert_eq!(tau.apply(1), 3);
        assert!(tau.compose(&tau.inverse()).is_identity());
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert_eq!(Permutation::all(4).count(), 24);
    }

    #[test]
    fn permute_examples() {
        let s = zm(4).element(2);
        let sys = FactorSystem::binary(&[1, 2], &s).unwrap();
        assert_eq!(sys.permute(&Permutation::identity(2)), sys);
        let swap = Permutation::new(vec![2, 1]).unwrap();
        let swapped = sys.permute(&swap);
        assert_eq!(swapped, FactorSystem::binary(&[2, 1], &s).unwrap());
        assert_eq!(swapped.principal_matrix(), sys.principal_matrix());

        // tau = (1 -> 3, 3 -> 2, 2 -> 1): t_ijk = s_{tau i tau j tau k}
        let s8 = zm(8).element(2);
        let sys = FactorSystem::binary(&[1, 1, 2], &s8).unwrap();
        let tau = Permutation::new(vec![3, 1, 2]).unwrap();
        let p = sys.permute(&tau);
        FactorSystem::validate_flat(p.ring(), 3, p.raw_table().to_vec()).unwrap();
        // class of i in the permuted system is class(tau(i)) = [2, 1, 1].
        assert_eq!(p, FactorSystem::binary(&[2, 1, 1], &s8).unwrap());
    }

    #[test]
    fn ordered_partition_counts() {
        // Ordered Bell (Fubini) numbers.
        let counts: Vec<usize> = (1..=5).map(|n| ordered_class_maps(n).len()).collect();
        assert_eq!(counts, vec![1, 3, 13, 75, 541]);
    }

    #[test]
    fn uniqueness_check_paths() {
        let s = zm(8).element(2);
        let a = FactorSystem::binary(&[1, 2], &s).unwrap();
        let b = FactorSystem::binary(&[1, 2], &s).unwrap();
        assert_eq!(
            binary_uniqueness_check(&a, &a, &s).unwrap(),
            Uniqueness::TablesAgree
        );
        assert_eq!(
            binary_uniqueness_check(&a, &b, &s).unwrap(),
            Uniqueness::TablesAgree
        );
        let c = FactorSystem::trivial(zm(8), 2).unwrap();
        assert_eq!(
            binary_uniqueness_check(&a, &c, &s).unwrap(),
            Uniqueness::NotComparable
        );
        // Reversing the class order of three singleton classes keeps S but
        // flips s_132: the principal matrix does not pin the table down.
        let x = FactorSystem::binary(&[1, 2, 3], &s).unwrap();
        let y = FactorSystem::binary(&[3, 2, 1], &s).unwrap();
        assert_eq!(
            binary_uniqueness_check(&x, &y, &s).unwrap(),
            Uniqueness::TablesDiffer
        );

        let zero = zm(8).zero();
        assert!(matches!(
            binary_uniqueness_check(&a, &b, &zero),
            Err(FactorError::HypothesisViolated(_))
        ));
        let unit = zm(8).element(3);
        assert!(matches!(
            binary_uniqueness_check(&a, &b, &unit),
            Err(FactorError::HypothesisViolated(_))
        ));
    }
}
