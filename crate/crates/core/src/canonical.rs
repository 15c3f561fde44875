//! Canonical forms of principal factor matrices and the isomorphism decision
//! for rings `M(n, R, s)` whose factors all lie in `{1, s}`.
//!
//! When every factor is 1 or a non-unit, `i ~ j ⇔ s_iji = 1` is an
//! equivalence relation. Listing its classes one after another gives a
//! permutation `τ` under which `τS` is block diagonal: all-one blocks on the
//! diagonal and non-units elsewhere. For a binary system in `{1, s}` the
//! multiset of block sizes together with `s` is the canonical descriptor.
//!
//! Block order: classes by decreasing size, ties by smallest member, so two
//! systems have the same canonical form iff their descriptors are equal.

use std::fmt;

use thiserror::Error;

use crate::factor::{FactorError, FactorSystem, Permutation};
use crate::ring::{BaseRing, RingElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("factor s_{i}{j}{k} = {value} is not in {{1, s}}")]
    NotBinary {
        i: usize,
        j: usize,
        k: usize,
        value: i64,
    },
    #[error("similarity is not transitive at ({i}, {j}, {k})")]
    NotTransitive { i: usize, j: usize, k: usize },
    #[error(transparent)]
    Factor(#[from] FactorError),
}

/// Classes of `~`, each sorted, listed by smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalencePartition {
    classes: Vec<Vec<usize>>,
}

impl EquivalencePartition {
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// 1-based class index of each element, classes numbered by smallest member.
    pub fn class_of(&self) -> Vec<usize> {
        let n = self.classes.iter().map(Vec::len).sum();
        let mut out = vec![0; n];
        for (c, members) in self.classes.iter().enumerate() {
            for &i in members {
                out[i - 1] = c + 1;
            }
        }
        out
    }

    /// Partition induced by a class map (labels ignored, only the blocks count).
    pub fn from_class_map(class_of: &[usize]) -> Self {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut label_slot: Vec<(usize, usize)> = Vec::new();
        for (i, &c) in class_of.iter().enumerate() {
            match label_slot.iter().find(|(l, _)| *l == c) {
                Some(&(_, slot)) => classes[slot].push(i + 1),
                None => {
                    label_slot.push((c, classes.len()));
                    classes.push(vec![i + 1]);
                }
            }
        }
        EquivalencePartition { classes }
    }
}

/// Canonical-form fingerprint: `s` and the diagonal block sizes, descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalDescriptor {
    pub s: RingElement,
    pub block_sizes: Vec<usize>,
}

impl fmt::Display for CanonicalDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "blocks {:?}, s = {}", self.block_sizes, self.s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    pub tau: Permutation,
    pub descriptor: CanonicalDescriptor,
    pub canonical_s: Vec<Vec<i64>>,
    pub partition: EquivalencePartition,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TrichotomyReport {
    /// Triples `i < j < k` falling under case 1 (all three equal 1), case 2
    /// (exactly one equals 1) and case 3 (none equals 1).
    pub census: [usize; 3],
    /// Triples with exactly two ones among `s_iji, s_iki, s_jkj`.
    pub anomalies: Vec<(usize, usize, usize)>,
}

/// Classification of the triple `(s_iji, s_iki, s_jkj)`.
pub fn triple_case(sys: &FactorSystem, i: usize, j: usize, k: usize) -> Option<u8> {
    let ones = [
        sys.factor(i, j, i),
        sys.factor(i, k, i),
        sys.factor(j, k, j),
    ]
    .iter()
    .filter(|&&v| v == sys.ring().reduce(1))
    .count();
    match ones {
        3 => Some(1),
        1 => Some(2),
        0 => Some(3),
        _ => None,
    }
}

fn check_one_or_nonunit(sys: &FactorSystem) -> Result<(), CanonError> {
    let n = sys.n();
    let ring = sys.ring();
    for (i, j, k) in itertools::iproduct!(1..=n, 1..=n, 1..=n) {
        let v = sys.factor(i, j, k);
        if v != ring.reduce(1) && ring.is_unit_value(v) {
            return Err(CanonError::HypothesisViolated(format!(
                "factor s_{i}{j}{k} = {v} is invertible and different from 1"
            )));
        }
    }
    Ok(())
}

pub fn trichotomy_check(sys: &FactorSystem) -> Result<TrichotomyReport, CanonError> {
    check_one_or_nonunit(sys)?;
    let n = sys.n();
    let mut report = TrichotomyReport::default();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                match triple_case(sys, i, j, k) {
                    Some(c) => report.census[c as usize - 1] += 1,
                    None => report.anomalies.push((i, j, k)),
                }
            }
        }
    }
    Ok(report)
}

/// Classes of `i ~ j ⇔ s_iji = 1`, with every equivalence axiom checked.
pub fn similarity_partition(sys: &FactorSystem) -> Result<EquivalencePartition, CanonError> {
    check_one_or_nonunit(sys)?;
    let n = sys.n();
    let one = sys.ring().reduce(1);
    let rel = |i: usize, j: usize| sys.factor(i, j, i) == one;
    for i in 1..=n {
        if !rel(i, i) {
            return Err(CanonError::HypothesisViolated(format!("s_{i}{i}{i} != 1")));
        }
        for j in 1..=n {
            if rel(i, j) != rel(j, i) {
                return Err(CanonError::HypothesisViolated(format!(
                    "principal matrix not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    for (i, j, k) in itertools::iproduct!(1..=n, 1..=n, 1..=n) {
        if rel(i, j) && rel(j, k) && !rel(i, k) {
            return Err(CanonError::NotTransitive { i, j, k });
        }
    }
    let mut assigned = vec![false; n + 1];
    let mut classes = Vec::new();
    for i in 1..=n {
        if assigned[i] {
            continue;
        }
        let class: Vec<usize> = (i..=n).filter(|&j| rel(i, j)).collect();
        for &j in &class {
            assigned[j] = true;
        }
        classes.push(class);
    }
    Ok(EquivalencePartition { classes })
}

/// Reduce the principal matrix of a binary system in `{1, s}` to canonical form.
pub fn canonicalize(sys: &FactorSystem, s: &RingElement) -> Result<Canonical, CanonError> {
    if s.ring() != sys.ring() {
        return Err(CanonError::HypothesisViolated(format!(
            "s lives in {}, system is over {}",
            s.ring(),
            sys.ring()
        )));
    }
    let n = sys.n();
    for (i, j, k) in itertools::iproduct!(1..=n, 1..=n, 1..=n) {
        let v = sys.factor(i, j, k);
        if v != sys.ring().reduce(1) && v != s.value() {
            return Err(CanonError::NotBinary { i, j, k, value: v });
        }
    }
    let partition = similarity_partition(sys)?;
    let mut blocks = partition.classes.clone();
    // Stable sort keeps the smallest-member order among equal sizes.
    blocks.sort_by_key(|b| std::cmp::Reverse(b.len()));
    let images: Vec<usize> = blocks.iter().flatten().map(|&i| i - 1).collect();
    let tau = Permutation::from_zero_based(images);
    let canonical_s = sys.permute(&tau).principal_matrix();
    Ok(Canonical {
        tau,
        descriptor: CanonicalDescriptor {
            s: *s,
            block_sizes: blocks.iter().map(Vec::len).collect(),
        },
        canonical_s,
        partition,
    })
}

/// Binary value of a system: the unique factor different from 1, if any.
pub fn binary_value(sys: &FactorSystem) -> Result<Option<RingElement>, CanonError> {
    let vals = sys.non_identity_values();
    match vals.as_slice() {
        [] => Ok(None),
        [v] => Ok(Some(sys.ring().element(*v))),
        _ => Err(CanonError::HypothesisViolated(format!(
            "factors take several values besides 1: {vals:?}"
        ))),
    }
}

pub fn same_canonical_form(a: &CanonicalDescriptor, b: &CanonicalDescriptor) -> bool {
    let mut x = a.block_sizes.clone();
    let mut y = b.block_sizes.clone();
    x.sort_unstable();
    y.sort_unstable();
    a.s == b.s && x == y
}

/// Cell-by-cell check that `canonical_s` has all-one diagonal blocks of the
/// given sizes and `s` everywhere else.
pub fn has_block_form(canonical_s: &[Vec<i64>], block_sizes: &[usize], s: i64, one: i64) -> bool {
    let block_of: Vec<usize> = block_sizes
        .iter()
        .enumerate()
        .flat_map(|(b, &len)| std::iter::repeat_n(b, len))
        .collect();
    if block_of.len() != canonical_s.len() {
        return false;
    }
    canonical_s.iter().enumerate().all(|(i, row)| {
        row.len() == block_of.len()
            && row.iter().enumerate().all(|(j, &v)| {
                let expected = if block_of[i] == block_of[j] { one } else { s };
                v == expected
            })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoOutcome {
    Isomorphic,
    NotIsomorphic,
    Inconclusive,
}

impl fmt::Display for IsoOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IsoOutcome::Isomorphic => "Isomorphic",
            IsoOutcome::NotIsomorphic => "NotIsomorphic",
            IsoOutcome::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoVerdict {
    pub outcome: IsoOutcome,
    /// Short justification, e.g. "distinct canonical forms".
    pub basis: String,
    pub hypotheses: Vec<HypothesisCheck>,
    /// `σ` with `permute(sysA, σ) == sysB`; then `X ↦ transport(σ⁻¹, X)`
    /// carries `M(n,R,Σ_A)` onto `M(n,R,Σ_B)`.
    pub witness: Option<Permutation>,
    pub descriptors: Option<(CanonicalDescriptor, CanonicalDescriptor)>,
}

impl IsoVerdict {
    pub fn hypothesis(&self, name: &str) -> Option<&HypothesisCheck> {
        self.hypotheses.iter().find(|h| h.name == name)
    }
}

pub const H_S_IN_RADICAL: &str = "s in prime radical of R";
pub const H_INDECOMPOSABLE: &str = "R/P(R) indecomposable";
pub const H_NM_CONDITION: &str = "(n,m)-condition";
pub const H_S2_NE_1: &str = "s^2 != 1";
pub const H_S2_NE_S: &str = "s^2 != s";
pub const H_QUOTIENT_LEVEL: &str = "quotient-level equivalence available";

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> HypothesisCheck {
    HypothesisCheck {
        name,
        passed,
        detail: detail.into(),
    }
}

/// Search for `σ` with `permute(a, σ) == b` by backtracking over images,
/// pruning on every fully assigned index triple.
pub fn find_permutation_witness(a: &FactorSystem, b: &FactorSystem) -> Option<Permutation> {
    fn extend(
        a: &FactorSystem,
        b: &FactorSystem,
        images: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        let n = a.n();
        let d = images.len();
        if d == n {
            return true;
        }
        for x in 0..n {
            if used[x] {
                continue;
            }
            images.push(x);
            // Check every triple that includes the new index d.
            let consistent = (0..=d).all(|i| {
                (0..=d).all(|j| {
                    (0..=d).all(|k| {
                        (i != d && j != d && k != d)
                            || a.at(images[i], images[j], images[k]) == b.at(i, j, k)
                    })
                })
            });
            if consistent {
                used[x] = true;
                if extend(a, b, images, used) {
                    return true;
                }
                used[x] = false;
            }
            images.pop();
        }
        false
    }
    if a.n() != b.n() || a.ring() != b.ring() {
        return None;
    }
    let mut images = Vec::with_capacity(a.n());
    let mut used = vec![false; a.n()];
    extend(a, b, &mut images, &mut used).then(|| Permutation::from_zero_based(images))
}

/// Decide `M(n,R,Σ_A) ≅ M(n,R,Σ_B)` for binary systems in `{1, s}`.
///
/// Differing canonical forms give `NotIsomorphic` when `s` is nilpotent and
/// `R/P(R)` is indecomposable. Equal forms give `Isomorphic` when in addition
/// `s^2 ∉ {1, s}` and an explicit permutation witness exists; otherwise the
/// verdict is `Inconclusive` and the failed checks say why.
pub fn decide_isomorphism(
    ring: BaseRing,
    s: &RingElement,
    a: &FactorSystem,
    b: &FactorSystem,
) -> Result<IsoVerdict, CanonError> {
    if a.n() != b.n() {
        return Err(CanonError::HypothesisViolated(format!(
            "orders differ ({} vs {})",
            a.n(),
            b.n()
        )));
    }
    if a.ring() != ring || b.ring() != ring || s.ring() != ring {
        return Err(CanonError::HypothesisViolated(
            "systems and s must live over the same base ring".into(),
        ));
    }
    for sys in [a, b] {
        if !sys.is_certified() {
            return Err(CanonError::HypothesisViolated(
                "system is not certified".into(),
            ));
        }
        if !sys.is_binary_in(s) {
            return Err(CanonError::HypothesisViolated(format!(
                "factors must lie in {{1, {s}}}"
            )));
        }
    }
    let n = a.n();

    if s.is_unit() {
        // Every binary system in {1, s} over a unit s rescales to the ordinary
        // matrix ring; only s = 1 gives a table usable by canonicalize.
        let desc = CanonicalDescriptor {
            s: *s,
            block_sizes: vec![n],
        };
        return Ok(IsoVerdict {
            outcome: IsoOutcome::Isomorphic,
            basis: "s is invertible: both rings are isomorphic to M(n, R)".into(),
            hypotheses: vec![check(
                "s invertible",
                true,
                format!("{s} is a unit of {ring}"),
            )],
            witness: None,
            descriptors: Some((desc.clone(), desc)),
        });
    }

    let ca = canonicalize(a, s)?;
    let cb = canonicalize(b, s)?;
    let sq = s.mul(s).map_err(FactorError::from)?;
    let in_radical = s.is_nilpotent();
    let indecomposable = ring.indecomposable_mod_radical();
    let mut hypotheses = vec![
        check(
            H_S_IN_RADICAL,
            in_radical,
            format!("{s} nilpotent in {ring}: {in_radical}"),
        ),
        check(
            H_INDECOMPOSABLE,
            indecomposable,
            format!("{ring} modulo its nilradical is {}", ring.residue_ring()),
        ),
        check(H_NM_CONDITION, true, "holds for every commutative ring"),
    ];
    let part1 = in_radical && indecomposable;
    let same = same_canonical_form(&ca.descriptor, &cb.descriptor);
    let descriptors = Some((ca.descriptor.clone(), cb.descriptor.clone()));

    hypotheses.push(check(
        H_QUOTIENT_LEVEL,
        part1,
        if part1 {
            format!(
                "K/P(K) rings are isomorphic iff canonical forms agree ({})",
                if same { "they do" } else { "they do not" }
            )
        } else {
            "requires s nilpotent and R/P(R) indecomposable".to_string()
        },
    ));

    if !same {
        let outcome = if part1 {
            IsoOutcome::NotIsomorphic
        } else {
            IsoOutcome::Inconclusive
        };
        return Ok(IsoVerdict {
            outcome,
            basis: if part1 {
                "distinct canonical forms".into()
            } else {
                "distinct canonical forms, but the base-ring hypotheses fail".into()
            },
            hypotheses,
            witness: None,
            descriptors,
        });
    }

    let not_one = !sq.is_one();
    let not_s = sq != *s;
    hypotheses.push(check(H_S2_NE_1, not_one, format!("s^2 = {sq}")));
    hypotheses.push(check(H_S2_NE_S, not_s, format!("s^2 = {sq}")));
    if !(part1 && not_one && not_s) {
        return Ok(IsoVerdict {
            outcome: IsoOutcome::Inconclusive,
            basis: "equal canonical forms, but the converse hypotheses fail".into(),
            hypotheses,
            witness: None,
            descriptors,
        });
    }

    // Align the canonical forms first; fall back to a full search when the
    // aligned tables differ.
    let aligned = ca.tau.compose(&cb.tau.inverse());
    let witness = if a.permute(&aligned).same_table(b) {
        Some(aligned)
    } else {
        find_permutation_witness(a, b)
    };
    match witness {
        Some(w) => Ok(IsoVerdict {
            outcome: IsoOutcome::Isomorphic,
            basis: "equal canonical forms".into(),
            hypotheses,
            witness: Some(w),
            descriptors,
        }),
        None => {
            hypotheses.push(check(
                "permutation witness",
                false,
                "no index permutation carries one factor table onto the other",
            ));
            Ok(IsoVerdict {
                outcome: IsoOutcome::Inconclusive,
                basis: "equal canonical forms, but no permutation witness".into(),
                hypotheses,
                witness: None,
                descriptors,
            })
        }
    }
}

/// Orders `n_i` of the matrix rings `M(n_i, R/P(R))` whose product is
/// `K/P(K)`; these are the diagonal block sizes of the canonical form.
pub fn quotient_descriptor(
    ring: BaseRing,
    s: &RingElement,
    sys: &FactorSystem,
) -> Result<Vec<usize>, CanonError> {
    if sys.ring() != ring {
        return Err(CanonError::HypothesisViolated(
            "system is over a different ring".into(),
        ));
    }
    if !s.is_nilpotent() {
        return Err(CanonError::HypothesisViolated(format!(
            "{s} is not nilpotent in {ring}"
        )));
    }
    Ok(canonicalize(sys, s)?.descriptor.block_sizes)
}
