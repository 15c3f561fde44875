use rayon::prelude::*;

use super::{FiniteError, FiniteRingTable};

/// A set of element indices, kept sorted, with a membership mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealSet {
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl IdealSet {
    pub fn from_mask(mask: Vec<bool>) -> Self {
        let members = mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| i)
            .collect();
        IdealSet { members, mask }
    }

    pub fn from_members(size: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut mask = vec![false; size];
        for x in members {
            mask[x] = true;
        }
        Self::from_mask(mask)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask[x]
    }
}

/// Additive subgroup generated by `gens`.
pub fn additive_span(t: &FiniteRingTable, gens: impl IntoIterator<Item = usize>) -> IdealSet {
    let mut mask = vec![false; t.size()];
    mask[t.zero()] = true;
    let mut list = vec![t.zero()];
    for g in gens {
        if mask[g] {
            continue;
        }
        // The span so far is a subgroup, so each shift by g is a whole coset
        // that is either already present or entirely new.
        let mut shifted: Vec<usize> = list.clone();
        loop {
            for x in shifted.iter_mut() {
                *x = t.add(*x, g);
            }
            if mask[shifted[0]] {
                break;
            }
            for &x in &shifted {
                mask[x] = true;
            }
            list.extend_from_slice(&shifted);
        }
    }
    IdealSet::from_mask(mask)
}

/// A small additive generating set of `set`, picked greedily in index order.
pub fn span_generators(t: &FiniteRingTable, set: &IdealSet) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = additive_span(t, []);
    for &x in set.members() {
        if !span.contains(x) {
            gens.push(x);
            span = additive_span(t, gens.iter().copied());
        }
    }
    gens
}

/// Two-sided ideal check; the error names the first failing condition.
pub fn is_ideal(t: &FiniteRingTable, set: &IdealSet) -> Result<(), FiniteError> {
    if !set.contains(t.zero()) {
        return Err(FiniteError::NotAnIdeal("does not contain 0".into()));
    }
    for &a in set.members() {
        if !set.contains(t.neg(a)) {
            return Err(FiniteError::NotAnIdeal(format!(
                "not closed under negation at {a}"
            )));
        }
        if let Some(&b) = set.members().iter().find(|&&b| !set.contains(t.add(a, b))) {
            return Err(FiniteError::NotAnIdeal(format!("{a} + {b} escapes")));
        }
        if let Some(x) =
            (0..t.size()).find(|&x| !set.contains(t.mul(x, a)) || !set.contains(t.mul(a, x)))
        {
            return Err(FiniteError::NotAnIdeal(format!(
                "not absorbing: {x} and {a}"
            )));
        }
    }
    Ok(())
}

/// Prime radical. A finite ring is Artinian, so this is the Jacobson radical
/// `{x : 1 - a x is a unit for every a}`.
pub fn prime_radical(t: &FiniteRingTable) -> IdealSet {
    let units = t.unit_mask();
    let one = t.one();
    let mask = (0..t.size())
        .into_par_iter()
        .map(|x| (0..t.size()).all(|a| units[t.sub(one, t.mul(a, x))]))
        .collect();
    IdealSet::from_mask(mask)
}

/// Sizes of `I, I^2, I^3, ...` until the chain reaches `{0}` or stabilises.
/// `I^(k+1)` is the additive span of all products `a b` with `a ∈ I^k, b ∈ I`.
pub fn ideal_power_sizes(t: &FiniteRingTable, ideal: &IdealSet) -> Vec<usize> {
    let mut sizes = vec![ideal.len()];
    let mut current = ideal.clone();
    loop {
        let products: Vec<usize> = current
            .members()
            .iter()
            .flat_map(|&a| ideal.members().iter().map(move |&b| t.mul(a, b)))
            .collect();
        let mut products = products;
        products.sort_unstable();
        products.dedup();
        let next = additive_span(t, products);
        if next.len() == current.len() {
            return sizes;
        }
        sizes.push(next.len());
        if next.len() == 1 {
            return sizes;
        }
        current = next;
    }
}

pub fn is_nilpotent_ideal(t: &FiniteRingTable, ideal: &IdealSet) -> bool {
    ideal.len() == 1 || ideal_power_sizes(t, ideal).last() == Some(&1)
}

/// The coset ring `T / I`. Each coset is named by its smallest member.
pub fn quotient(t: &FiniteRingTable, ideal: &IdealSet) -> Result<FiniteRingTable, FiniteError> {
    is_ideal(t, ideal)?;
    let mut class = vec![usize::MAX; t.size()];
    let mut reps = Vec::new();
    for x in 0..t.size() {
        if class[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &i in ideal.members() {
            class[t.add(x, i)] = c;
        }
    }
    let labels = reps.iter().map(|&x| t.label(x).to_vec()).collect();
    let coords = reps.iter().map(|&x| t.coords(x).to_vec()).collect();
    let generators = t.generators().iter().map(|&g| class[g]).collect();
    Ok(FiniteRingTable::build(
        labels,
        |p, q| class[t.add(reps[p], reps[q])],
        |p, q| class[t.mul(reps[p], reps[q])],
        class[t.zero()],
        class[t.one()],
        generators,
        coords,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::FactorSystem;
    use crate::finite::DEFAULT_LIMIT;
    use crate::matrix::FormalMatrixRing;
    use crate::ring::BaseRing;

    fn table(sys: FactorSystem) -> FiniteRingTable {
        FiniteRingTable::materialize(&FormalMatrixRing::new(sys), DEFAULT_LIMIT).unwrap()
    }

    fn zm(m: i64) -> BaseRing {
        BaseRing::modular(m).unwrap()
    }

    #[test]
    fn simple_ring_has_zero_radical() {
        let t = table(FactorSystem::trivial(zm(2), 2).unwrap());
        assert_eq!(prime_radical(&t).members(), &[t.zero()]);
    }

    #[test]
    fn radical_of_m2_z4_is_even_matrices() {
        let t = table(FactorSystem::trivial(zm(4), 2).unwrap());
        let p = prime_radical(&t);
        assert_eq!(p.len(), 16);
        // Oracle: P(M(2,R)) = M(2, P(R)) with P(Z/4) = {0, 2}.
        for x in 0..t.size() {
            assert_eq!(p.contains(x), t.label(x).iter().all(|v| v % 2 == 0));
        }
        assert!(is_ideal(&t, &p).is_ok());
        assert!(is_nilpotent_ideal(&t, &p));
        assert_eq!(ideal_power_sizes(&t, &p), vec![16, 1]);
        let q = quotient(&t, &p).unwrap();
        assert_eq!(q.size(), 16);
        assert_eq!(prime_radical(&q).len(), 1);
    }

    #[test]
    fn radical_of_binary_z4() {
        let s = zm(4).element(2);
        let t = table(FactorSystem::binary(&[1, 2], &s).unwrap());
        let p = prime_radical(&t);
        assert_eq!(p.len(), 64);
        for &x in p.members() {
            let l = t.label(x);
            assert!(l[0] % 2 == 0 && l[3] % 2 == 0);
        }
        assert!(is_nilpotent_ideal(&t, &p));
        let q = quotient(&t, &p).unwrap();
        assert_eq!(q.size(), 4);
        assert_eq!(prime_radical(&q).len(), 1);
        // The four off-diagonal generators collapse to 0.
        assert_eq!(q.generators().iter().filter(|&&g| g == q.zero()).count(), 2);
    }

    #[test]
    fn trivial_quotient_and_non_ideals() {
        let t = table(FactorSystem::trivial(zm(2), 2).unwrap());
        let zero = IdealSet::from_members(t.size(), [t.zero()]);
        assert_eq!(quotient(&t, &zero).unwrap().size(), 16);
        // Upper-triangular matrices are a subring, not an ideal.
        let upper = IdealSet::from_members(t.size(), (0..t.size()).filter(|&x| t.label(x)[2] == 0));
        assert!(matches!(
            quotient(&t, &upper),
            Err(FiniteError::NotAnIdeal(_))
        ));
        let no_zero = IdealSet::from_members(t.size(), [t.one()]);
        assert!(is_ideal(&t, &no_zero).is_err());
    }

    #[test]
    fn span_and_generators() {
        let t = FiniteRingTable::cyclic(12).unwrap();
        assert_eq!(additive_span(&t, [8]).members(), &[0, 4, 8]);
        assert_eq!(additive_span(&t, [8, 6]).len(), 6);
        let p = prime_radical(&t);
        assert_eq!(p.members(), &[0, 6]);
        assert_eq!(span_generators(&t, &p), vec![6]);
    }
}
