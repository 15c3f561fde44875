use std::collections::BTreeMap;

use rayon::prelude::*;

use super::FiniteRingTable;

/// Central idempotents, in index order.
pub fn central_idempotents(t: &FiniteRingTable) -> Vec<usize> {
    (0..t.size())
        .into_par_iter()
        .filter(|&x| t.is_idempotent(x) && t.is_central(x))
        .collect()
}

/// Split `T` along its primitive central idempotents `e_1, ..., e_k`,
/// returning the rings `e_i T` (identity `e_i`), largest first.
pub fn central_idempotent_decomposition(t: &FiniteRingTable) -> Vec<FiniteRingTable> {
    let central = central_idempotents(t);
    let primitive: Vec<usize> = central
        .iter()
        .copied()
        .filter(|&e| e != t.zero())
        .filter(|&e| {
            central
                .iter()
                .all(|&f| f == t.zero() || f == e || t.mul(e, f) != f)
        })
        .collect();
    let mut factors: Vec<FiniteRingTable> = primitive
        .into_iter()
        .map(|e| {
            let mut members: Vec<usize> = (0..t.size()).map(|x| t.mul(e, x)).collect();
            members.sort_unstable();
            members.dedup();
            // x in eT satisfies x = x e, so T-coordinates stay valid over the e g.
            let generators = t.generators().iter().map(|&g| t.mul(g, e)).collect();
            let coords = members.iter().map(|&x| t.coords(x).to_vec()).collect();
            t.restrict(&members, e, generators, coords)
        })
        .collect();
    factors.sort_by_key(|f| std::cmp::Reverse(f.size()));
    factors
}

/// `n` with `q^(n^2) = size`, if any.
pub fn matrix_order(size: usize, q: usize) -> Option<usize> {
    (1..)
        .map(|n: u32| (n, (q as u128).checked_pow(n * n)))
        .take_while(|(_, p)| p.is_some_and(|p| p <= size as u128))
        .find(|(_, p)| *p == Some(size as u128))
        .map(|(n, _)| n as usize)
}

/// Isomorphism invariants. Unequal fingerprints prove non-isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingFingerprint {
    pub size: usize,
    pub additive_orders: BTreeMap<usize, usize>,
    pub idempotents: usize,
    pub central_idempotents: usize,
    pub units: usize,
    pub square_zero: usize,
}

pub fn fingerprint(t: &FiniteRingTable) -> RingFingerprint {
    let mut additive_orders = BTreeMap::new();
    for x in 0..t.size() {
        *additive_orders.entry(t.additive_order(x)).or_insert(0) += 1;
    }
    RingFingerprint {
        size: t.size(),
        additive_orders,
        idempotents: (0..t.size()).filter(|&x| t.is_idempotent(x)).count(),
        central_idempotents: central_idempotents(t).len(),
        units: t.unit_mask().into_iter().filter(|&u| u).count(),
        square_zero: (0..t.size()).filter(|&x| t.mul(x, x) == t.zero()).count(),
    }
}
