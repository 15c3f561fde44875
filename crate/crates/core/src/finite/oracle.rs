//! Exhaustive search for unital ring isomorphisms between two tables.
//!
//! A homomorphism is fixed by the images of the additive generators of the
//! source. The search assigns those images one generator at a time, in the
//! source table's generator order (matrix units with the diagonal first), and
//! prunes with necessary conditions only:
//!
//! - an image has the same additive order as its generator, and is
//!   idempotent (resp. squares to zero) exactly when the generator is;
//! - every product `g_a g_b = Σ c_t g_t` whose terms are all assigned must
//!   map to `h_a h_b = Σ c_t h_t` (this covers idempotency and
//!   orthogonality of the diagonal units);
//! - once the coordinates of `1` are assigned they must sum to `1`;
//! - the induced additive map on the span of the assigned generators must be
//!   well defined and injective.
//!
//! A leaf that survives all of this is re-verified exhaustively before it is
//! reported, so a `true` verdict always carries a checked witness and a
//! `false` verdict means the whole search space was exhausted.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use super::{check_limit, FiniteError, FiniteRingTable, DEFAULT_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    pub limit: usize,
    /// Explore branches sequentially in candidate order; the witness is then
    /// the first one in lexicographic order of generator images.
    pub deterministic: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            limit: DEFAULT_LIMIT,
            deterministic: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub isomorphic: bool,
    /// `witness[x]` is the image of source element `x`.
    pub witness: Option<Vec<usize>>,
    pub nodes: u64,
}

/// Product constraint activated once every generator it mentions is placed.
struct Constraint {
    left: usize,
    right: usize,
    terms: Vec<(usize, u32)>,
}

struct Plan<'a> {
    src: &'a FiniteRingTable,
    dst: &'a FiniteRingTable,
    orders: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    products: Vec<Vec<Constraint>>,
    unit_terms: Vec<(usize, u32)>,
    unit_depth: usize,
}

fn support(coords: &[u32], orders: &[usize]) -> Vec<(usize, u32)> {
    coords
        .iter()
        .enumerate()
        .map(|(t, &c)| (t, c % orders[t] as u32))
        .filter(|&(_, c)| c != 0)
        .collect()
}

impl<'a> Plan<'a> {
    fn new(src: &'a FiniteRingTable, dst: &'a FiniteRingTable) -> Self {
        let gens = src.generators();
        let g = gens.len();
        let orders: Vec<usize> = gens.iter().map(|&x| src.additive_order(x)).collect();
        let dst_profile: Vec<(usize, bool, bool)> = (0..dst.size())
            .map(|y| {
                (
                    dst.additive_order(y),
                    dst.is_idempotent(y),
                    dst.mul(y, y) == dst.zero(),
                )
            })
            .collect();
        let candidates = gens
            .iter()
            .zip(&orders)
            .map(|(&x, &ord)| {
                let want = (ord, src.is_idempotent(x), src.mul(x, x) == src.zero());
                (0..dst.size())
                    .filter(|&y| dst_profile[y] == want)
                    .collect()
            })
            .collect();
        let mut products: Vec<Vec<Constraint>> = (0..g).map(|_| Vec::new()).collect();
        for a in 0..g {
            for b in 0..g {
                let p = src.mul(gens[a], gens[b]);
                let terms = support(src.coords(p), &orders);
                let depth = terms.iter().map(|&(t, _)| t).chain([a, b]).max().unwrap();
                products[depth].push(Constraint {
                    left: a,
                    right: b,
                    terms,
                });
            }
        }
        let unit_terms = support(src.coords(src.one()), &orders);
        let unit_depth = unit_terms.iter().map(|&(t, _)| t).max().unwrap_or(0);
        Plan {
            src,
            dst,
            orders,
            candidates,
            products,
            unit_terms,
            unit_depth,
        }
    }
}

const UNSET: u32 = u32::MAX;

struct State<'p, 'a> {
    plan: &'p Plan<'a>,
    images: Vec<usize>,
    /// `multiples[d][c] = c · images[d]`.
    multiples: Vec<Vec<usize>>,
    /// Source element → image, on the span of the assigned generators.
    map: Vec<u32>,
    used: Vec<bool>,
    /// Span members in insertion order; `marks[d]` is its length before depth d.
    span: Vec<usize>,
    marks: Vec<usize>,
    nodes: &'p AtomicU64,
}

impl<'p, 'a> State<'p, 'a> {
    fn new(plan: &'p Plan<'a>, nodes: &'p AtomicU64) -> Self {
        let mut map = vec![UNSET; plan.src.size()];
        let mut used = vec![false; plan.dst.size()];
        map[plan.src.zero()] = plan.dst.zero() as u32;
        used[plan.dst.zero()] = true;
        State {
            plan,
            images: Vec::new(),
            multiples: Vec::new(),
            map,
            used,
            span: vec![plan.src.zero()],
            marks: Vec::new(),
            nodes,
        }
    }

    fn combine(&self, terms: &[(usize, u32)]) -> usize {
        let dst = self.plan.dst;
        terms.iter().fold(dst.zero(), |acc, &(t, c)| {
            dst.add(acc, self.multiples[t][c as usize])
        })
    }

    /// Place image `y` for generator `d = images.len()`; false if pruned.
    fn push(&mut self, y: usize) -> bool {
        self.nodes.fetch_add(1, Ordering::Relaxed);
        let plan = self.plan;
        let dst = plan.dst;
        let d = self.images.len();
        let ord = plan.orders[d];
        let mut mult = Vec::with_capacity(ord);
        let mut acc = dst.zero();
        for _ in 0..ord {
            mult.push(acc);
            acc = dst.add(acc, y);
        }
        self.images.push(y);
        self.multiples.push(mult);
        self.marks.push(self.span.len());

        let ok = plan.products[d]
            .iter()
            .all(|c| dst.mul(self.images[c.left], self.images[c.right]) == self.combine(&c.terms))
            && (d != plan.unit_depth || self.combine(&plan.unit_terms) == dst.one())
            && self.extend_span(d);
        if !ok {
            self.pop();
        }
        ok
    }

    fn extend_span(&mut self, d: usize) -> bool {
        let (src, dst) = (self.plan.src, self.plan.dst);
        let g = src.generators()[d];
        let h = self.images[d];
        let base_len = self.marks[d];
        for idx in 0..base_len {
            let mut x = self.span[idx];
            let mut y = self.map[x] as usize;
            for _ in 1..self.plan.orders[d] {
                x = src.add(x, g);
                y = dst.add(y, h);
                match self.map[x] {
                    UNSET => {
                        if self.used[y] {
                            return false;
                        }
                        self.map[x] = y as u32;
                        self.used[y] = true;
                        self.span.push(x);
                    }
                    prev if prev as usize != y => return false,
                    _ => {}
                }
            }
        }
        true
    }

    fn pop(&mut self) {
        let mark = self.marks.pop().expect("pop without push");
        for &x in &self.span[mark..] {
            self.used[self.map[x] as usize] = false;
            self.map[x] = UNSET;
        }
        self.span.truncate(mark);
        self.images.pop();
        self.multiples.pop();
    }

    fn search(&mut self) -> Option<Vec<usize>> {
        let plan = self.plan;
        let d = self.images.len();
        if d == plan.orders.len() {
            if self.span.len() != plan.src.size() {
                return None;
            }
            let witness: Vec<usize> = self.map.iter().map(|&v| v as usize).collect();
            return verify_isomorphism(plan.src, plan.dst, &witness)
                .is_ok()
                .then_some(witness);
        }
        for &y in &plan.candidates[d] {
            if self.push(y) {
                if let Some(w) = self.search() {
                    return Some(w);
                }
                self.pop();
            }
        }
        None
    }
}

/// Decide whether `a ≅ b` as unital rings by exhaustive search.
pub fn oracle_isomorphic(
    a: &FiniteRingTable,
    b: &FiniteRingTable,
    opts: OracleOptions,
) -> Result<OracleResult, FiniteError> {
    check_limit(a.size() as u128, opts.limit)?;
    check_limit(b.size() as u128, opts.limit)?;
    if a.size() != b.size() {
        return Ok(OracleResult {
            isomorphic: false,
            witness: None,
            nodes: 0,
        });
    }
    let plan = Plan::new(a, b);
    let nodes = AtomicU64::new(0);
    let witness = if plan.orders.is_empty() {
        // Only the zero ring has no generators; sizes already match.
        Some(vec![b.zero()])
    } else if opts.deterministic {
        State::new(&plan, &nodes).search()
    } else {
        plan.candidates[0].par_iter().find_map_any(|&y| {
            let mut st = State::new(&plan, &nodes);
            if st.push(y) {
                st.search()
            } else {
                None
            }
        })
    };
    Ok(OracleResult {
        isomorphic: witness.is_some(),
        witness,
        nodes: nodes.into_inner(),
    })
}

/// Exhaustive check that `map` is a bijective, additive, multiplicative and
/// unital map `a → b`.
pub fn verify_isomorphism(
    a: &FiniteRingTable,
    b: &FiniteRingTable,
    map: &[usize],
) -> Result<(), String> {
    if a.size() != b.size() || map.len() != a.size() {
        return Err("sizes differ".into());
    }
    let mut hit = vec![false; b.size()];
    for &y in map {
        if y >= b.size() || std::mem::replace(&mut hit[y], true) {
            return Err(format!("not a bijection at image {y}"));
        }
    }
    if map[a.one()] != b.one() {
        return Err("identity not preserved".into());
    }
    (0..a.size()).into_par_iter().try_for_each(|x| {
        for y in 0..a.size() {
            if map[a.add(x, y)] != b.add(map[x], map[y]) {
                return Err(format!("not additive at ({x}, {y})"));
            }
            if map[a.mul(x, y)] != b.mul(map[x], map[y]) {
                return Err(format!("not multiplicative at ({x}, {y})"));
            }
        }
        Ok(())
    })
}
