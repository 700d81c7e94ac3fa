//! A finite semigroup engine: Cayley graphs, Green's relations, eggbox
//! diagrams, mid-identities, ranks and isomorphism tests.
//!
//! Elements are stored once and referred to by dense `u32` indices. Every
//! element carries a word over the generators (a parent pointer plus a last
//! letter), so products can be computed from the right Cayley table alone;
//! the full multiplication table is only materialised on request.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;
use std::hash::Hash;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;
use petgraph::algo::kosaraju_scc;
use petgraph::graph::DiGraph;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;
use thiserror::Error;

/// Largest number of entries in a materialised multiplication table.
pub const TABLE_BUDGET: usize = 40_000_000;
/// Default cap on the number of elements produced by a closure.
pub const DEFAULT_MAX_ELEMENTS: usize = 2_000_000;

const ROOT: u32 = u32::MAX;

pub type MulFn<T> = Arc<dyn Fn(&T, &T) -> T + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("not closed: the product of input elements {left} and {right} is missing")]
    NotClosed { left: usize, right: usize },
    #[error("more than {limit} elements")]
    BoundExceeded { limit: usize },
    #[error("semigroup is not regular")]
    NotRegular,
    #[error("semigroup is not generated by its idempotents")]
    NotIdempotentGenerated,
    #[error("rank search unresolved: between {lower} and {upper}")]
    Unresolved { lower: usize, upper: usize },
}

pub struct FiniteSemigroup<T> {
    elements: Vec<T>,
    index: HashMap<T, u32>,
    mul: MulFn<T>,
    gens: Vec<u32>,
    /// `right[x * k + g] = x · gens[g]`.
    right: Vec<u32>,
    /// `left[x * k + g] = gens[g] · x`.
    left: Vec<u32>,
    /// `(prefix, letter)` with `x = prefix · gens[letter]`, or `(ROOT, g)` for `x = gens[g]`.
    parent: Vec<(u32, u32)>,
    table: OnceLock<Option<Vec<u32>>>,
    green: OnceLock<GreenStructure>,
    idempotents: OnceLock<Vec<bool>>,
}

struct Builder<'a, T> {
    elements: Vec<T>,
    index: HashMap<T, u32>,
    mul: &'a MulFn<T>,
    gens: Vec<u32>,
    rows: Vec<Vec<u32>>,
    parent: Vec<(u32, u32)>,
    processed: usize,
    limit: usize,
    allowed: Option<&'a HashMap<T, usize>>,
}

impl<'a, T: Clone + Eq + Hash> Builder<'a, T> {
    fn lookup_or_insert(&mut self, t: T, parent: (u32, u32), witness: (u32, u32)) -> Result<u32, SemigroupError> {
        if let Some(&i) = self.index.get(&t) {
            return Ok(i);
        }
        if let Some(allowed) = self.allowed {
            if !allowed.contains_key(&t) {
                let pos = |i: u32| allowed[&self.elements[i as usize]];
                return Err(SemigroupError::NotClosed { left: pos(witness.0), right: pos(witness.1) });
            }
        }
        if self.elements.len() >= self.limit {
            return Err(SemigroupError::BoundExceeded { limit: self.limit });
        }
        let i = self.elements.len() as u32;
        self.index.insert(t.clone(), i);
        self.elements.push(t);
        self.parent.push(parent);
        self.rows.push(Vec::new());
        Ok(i)
    }

    fn add_generator(&mut self, g: T) -> Result<(), SemigroupError> {
        let letter = self.gens.len() as u32;
        let gi = match self.index.get(&g) {
            Some(&i) => i,
            None => self.lookup_or_insert(g, (ROOT, letter), (0, 0))?,
        };
        self.gens.push(gi);
        for x in 0..self.processed {
            let y = (self.mul)(&self.elements[x], &self.elements[gi as usize]);
            let yi = self.lookup_or_insert(y, (x as u32, letter), (x as u32, gi))?;
            self.rows[x].push(yi);
        }
        self.run()
    }

    fn run(&mut self) -> Result<(), SemigroupError> {
        while self.processed < self.elements.len() {
            let x = self.processed;
            for letter in 0..self.gens.len() {
                let gi = self.gens[letter];
                let y = (self.mul)(&self.elements[x], &self.elements[gi as usize]);
                let yi = self.lookup_or_insert(y, (x as u32, letter as u32), (x as u32, gi))?;
                self.rows[x].push(yi);
            }
            self.processed += 1;
        }
        Ok(())
    }

    fn finish(self) -> FiniteSemigroup<T> {
        let k = self.gens.len();
        let n = self.elements.len();
        let right: Vec<u32> = self.rows.into_iter().flatten().collect();
        debug_assert_eq!(right.len(), n * k);
        let mut left = vec![0u32; n * k];
        for x in 0..n {
            let (p, a) = self.parent[x];
            for g in 0..k {
                left[x * k + g] = if p == ROOT {
                    right[self.gens[g] as usize * k + a as usize]
                } else {
                    right[left[p as usize * k + g] as usize * k + a as usize]
                };
            }
        }
        FiniteSemigroup {
            elements: self.elements,
            index: self.index,
            mul: self.mul.clone(),
            gens: self.gens,
            right,
            left,
            parent: self.parent,
            table: OnceLock::new(),
            green: OnceLock::new(),
            idempotents: OnceLock::new(),
        }
    }
}

impl<T: Clone + Eq + Hash + Send + Sync> FiniteSemigroup<T> {
    /// The subsemigroup generated by `generators`.
    pub fn closure(generators: &[T], mul: MulFn<T>) -> Result<Self, SemigroupError> {
        Self::closure_bounded(generators, mul, DEFAULT_MAX_ELEMENTS)
    }

    pub fn closure_bounded(generators: &[T], mul: MulFn<T>, limit: usize) -> Result<Self, SemigroupError> {
        let mut b = Builder {
            elements: Vec::new(),
            index: HashMap::new(),
            mul: &mul,
            gens: Vec::new(),
            rows: Vec::new(),
            parent: Vec::new(),
            processed: 0,
            limit,
            allowed: None,
        };
        let mut seen = HashSet::new();
        for g in generators {
            if seen.insert(g.clone()) {
                b.add_generator(g.clone())?;
            }
        }
        Ok(b.finish())
    }

    /// A semigroup on a given closed set; generators are picked greedily in
    /// the order given, skipping elements already generated.
    pub fn from_elements(elements: &[T], mul: MulFn<T>) -> Result<Self, SemigroupError> {
        let allowed: HashMap<T, usize> = elements.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let mut b = Builder {
            elements: Vec::new(),
            index: HashMap::new(),
            mul: &mul,
            gens: Vec::new(),
            rows: Vec::new(),
            parent: Vec::new(),
            processed: 0,
            limit: usize::MAX,
            allowed: Some(&allowed),
        };
        for t in elements {
            if !b.index.contains_key(t) {
                b.add_generator(t.clone())?;
            }
        }
        Ok(b.finish())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn get(&self, i: u32) -> &T {
        &self.elements[i as usize]
    }

    pub fn index_of(&self, t: &T) -> Option<u32> {
        self.index.get(t).copied()
    }

    /// Element indices of the generators.
    pub fn generators(&self) -> &[u32] {
        &self.gens
    }

    pub fn mul_fn(&self) -> &MulFn<T> {
        &self.mul
    }

    fn k(&self) -> usize {
        self.gens.len()
    }

    /// `x · gens[g]`.
    pub fn right_by_generator(&self, x: u32, g: usize) -> u32 {
        self.right[x as usize * self.k() + g]
    }

    /// `gens[g] · x`.
    pub fn left_by_generator(&self, x: u32, g: usize) -> u32 {
        self.left[x as usize * self.k() + g]
    }

    /// Generator letters spelling `y`.
    pub fn word(&self, y: u32) -> Vec<u32> {
        let mut w = Vec::new();
        let mut cur = y;
        loop {
            let (p, a) = self.parent[cur as usize];
            w.push(a);
            if p == ROOT {
                break;
            }
            cur = p;
        }
        w.reverse();
        w
    }

    pub fn mul_idx(&self, x: u32, y: u32) -> u32 {
        if let Some(Some(t)) = self.table.get() {
            return t[x as usize * self.len() + y as usize];
        }
        let k = self.k();
        self.word(y).into_iter().fold(x, |acc, a| self.right[acc as usize * k + a as usize])
    }

    /// The column `x ↦ x · y`.
    pub fn right_column(&self, y: u32) -> Vec<u32> {
        let n = self.len();
        if let Some(Some(t)) = self.table.get() {
            return (0..n).map(|x| t[x * n + y as usize]).collect();
        }
        let k = self.k();
        let mut col: Vec<u32> = (0..n as u32).collect();
        for a in self.word(y) {
            for c in col.iter_mut() {
                *c = self.right[*c as usize * k + a as usize];
            }
        }
        col
    }

    /// Materialises the multiplication table if it fits the budget.
    pub fn ensure_table(&self) -> bool {
        self.table
            .get_or_init(|| {
                let n = self.len();
                if n.saturating_mul(n) > TABLE_BUDGET {
                    return None;
                }
                let k = self.k();
                let mut table = vec![0u32; n * n];
                table.par_chunks_mut(n.max(1)).enumerate().for_each(|(x, row)| {
                    for y in 0..n {
                        let (p, a) = self.parent[y];
                        let base = if p == ROOT { x } else { row[p as usize] as usize };
                        row[y] = self.right[base * k + a as usize];
                    }
                });
                Some(table)
            })
            .is_some()
    }

    /// Checks the Cayley-table products against the raw multiplication on
    /// up to `samples` pairs (all pairs if `None`).
    pub fn verify_against_mul(&self, samples: Option<usize>) -> bool {
        let n = self.len();
        let check = |x: usize, y: usize| {
            let direct = (self.mul)(&self.elements[x], &self.elements[y]);
            self.index.get(&direct) == Some(&self.mul_idx(x as u32, y as u32))
        };
        match samples {
            None => (0..n).into_par_iter().all(|x| (0..n).all(|y| check(x, y))),
            Some(s) => {
                let mut rng = StdRng::seed_from_u64(0x5eed);
                (0..s).all(|_| {
                    use rand::Rng;
                    let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
                    check(x, y)
                })
            }
        }
    }

    pub fn idempotent_flags(&self) -> &[bool] {
        self.idempotents.get_or_init(|| (0..self.len() as u32).map(|x| self.mul_idx(x, x) == x).collect())
    }

    pub fn idempotents(&self) -> Vec<u32> {
        self.idempotent_flags().iter().enumerate().filter(|(_, &e)| e).map(|(i, _)| i as u32).collect()
    }

    /// Closure of a set of elements under the product, as element indices.
    pub fn closure_ids(&self, gens: &[u32]) -> FixedBitSet {
        let mut c = SubClosure::new(self.len());
        let mut cols = ColumnCache::default();
        for &g in gens {
            c.add(self, &mut cols, g);
        }
        c.members
    }

    /// `⟨E(S)⟩` as element indices.
    pub fn idempotent_closure(&self) -> FixedBitSet {
        self.closure_ids(&self.idempotents())
    }

    pub fn green(&self) -> &GreenStructure {
        self.green.get_or_init(|| GreenStructure::build(self))
    }

    pub fn is_regular(&self) -> bool {
        let g = self.green();
        let mut regular = vec![false; g.d_count];
        for e in self.idempotents() {
            regular[g.d[e as usize] as usize] = true;
        }
        regular.into_iter().all(|r| r)
    }

    /// Mid-identities: `u` with `xy = xuy` for all `x, y`; it suffices to test generators.
    pub fn mid_identities(&self) -> Vec<u32> {
        self.ensure_table();
        (0..self.len() as u32)
            .into_par_iter()
            .filter(|&u| {
                self.gens.iter().all(|&x| {
                    let xu = self.mul_idx(x, u);
                    self.gens.iter().all(|&y| self.mul_idx(xu, y) == self.mul_idx(x, y))
                })
            })
            .collect()
    }

    /// Elements `u` for which the variant `(S, x·u·y)` is regular.
    pub fn regularity_preserving(&self) -> Vec<u32> {
        self.ensure_table();
        let n = self.len() as u32;
        (0..n)
            .into_par_iter()
            .filter(|&u| {
                (0..n).all(|x| {
                    let a = self.mul_idx(x, u);
                    let b = self.mul_idx(u, x);
                    (0..n).any(|y| self.mul_idx(self.mul_idx(a, y), b) == x)
                })
            })
            .collect()
    }

    /// `e ⪯ f` in the natural order on idempotents: `e = ef = fe`.
    pub fn natural_order_below(&self, e: u32, f: u32) -> bool {
        self.mul_idx(e, f) == e && self.mul_idx(f, e) == e
    }

    /// Whether every idempotent lies below a mid-identity; on failure the
    /// least such idempotent is returned as a witness.
    pub fn is_mi_dominated(&self) -> Result<(bool, Option<u32>), SemigroupError> {
        if !self.is_regular() {
            return Err(SemigroupError::NotRegular);
        }
        let mi = self.mid_identities();
        let witness = self
            .idempotents()
            .into_iter()
            .find(|&e| !mi.iter().any(|&u| self.natural_order_below(e, u)));
        Ok((witness.is_none(), witness))
    }

    /// `{u·e·u : u ∈ MI, e ∈ E}`.
    pub fn mi_sandwiched_idempotents(&self) -> Vec<u32> {
        let mi = self.mid_identities();
        let mut out: Vec<u32> = self
            .idempotents()
            .into_iter()
            .flat_map(|e| mi.iter().map(move |&u| (u, e)))
            .map(|(u, e)| self.mul_idx(self.mul_idx(u, e), u))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Exact rank, or the bracketing bounds when the search cannot close the gap.
    pub fn exact_rank(&self, must_include: &[u32]) -> Result<RankResult, SemigroupError> {
        let all: Vec<u32> = (0..self.len() as u32).collect();
        rank_search(self, &all, must_include)
    }

    /// Least size of a generating set of idempotents.
    pub fn exact_idempotent_rank(&self) -> Result<RankResult, SemigroupError> {
        let e = self.idempotents();
        if self.closure_ids(&e).count_ones(..) != self.len() {
            return Err(SemigroupError::NotIdempotentGenerated);
        }
        rank_search(self, &e, &[])
    }

    /// Per-element invariants preserved by isomorphisms (`anti` swaps R and L).
    fn colours(&self, anti: bool) -> Vec<[usize; 7]> {
        let g = self.green();
        let count = |ids: &[u32], c: usize| {
            let mut v = vec![0usize; c];
            for &i in ids {
                v[i as usize] += 1;
            }
            v
        };
        let rs = count(&g.r, g.r_count);
        let ls = count(&g.l, g.l_count);
        let hs = count(&g.h, g.h_count);
        let ds = count(&g.d, g.d_count);
        let idem = self.idempotent_flags();
        (0..self.len())
            .map(|x| {
                let (index, period) = self.index_period(x as u32);
                let (r, l) = (rs[g.r[x] as usize], ls[g.l[x] as usize]);
                let (r, l) = if anti { (l, r) } else { (r, l) };
                [idem[x] as usize, r, l, hs[g.h[x] as usize], ds[g.d[x] as usize], index, period]
            })
            .collect()
    }

    /// Index and period of the monogenic subsemigroup of `x`.
    pub fn index_period(&self, x: u32) -> (usize, usize) {
        let mut seen = HashMap::new();
        let mut cur = x;
        let mut i = 1;
        loop {
            if let Some(&j) = seen.get(&cur) {
                return (j, i - j);
            }
            seen.insert(cur, i);
            cur = self.mul_idx(cur, x);
            i += 1;
        }
    }

    /// Isomorphism (or, with `anti`, anti-isomorphism) test by backtracking
    /// over images of the generators.
    pub fn isomorphic<U: Clone + Eq + Hash + Send + Sync>(
        &self,
        other: &FiniteSemigroup<U>,
        anti: bool,
        limit: usize,
    ) -> Result<bool, SemigroupError> {
        if self.len() != other.len() {
            return Ok(false);
        }
        if self.len() > limit {
            return Err(SemigroupError::BoundExceeded { limit });
        }
        self.ensure_table();
        other.ensure_table();
        let cs = self.colours(false);
        let ct = other.colours(anti);
        let mut a = cs.clone();
        let mut b = ct.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Ok(false);
        }
        let candidates: Vec<Vec<u32>> = self
            .gens
            .iter()
            .map(|&g| (0..other.len() as u32).filter(|&t| ct[t as usize] == cs[g as usize]).collect())
            .collect();
        let mut images = vec![0u32; self.gens.len()];
        Ok(self.assign(other, anti, &candidates, &mut images, 0))
    }

    fn assign<U: Clone + Eq + Hash + Send + Sync>(
        &self,
        other: &FiniteSemigroup<U>,
        anti: bool,
        candidates: &[Vec<u32>],
        images: &mut Vec<u32>,
        depth: usize,
    ) -> bool {
        if depth == images.len() {
            return self.extends(other, anti, images);
        }
        for &c in &candidates[depth] {
            // Equal generators must have equal images.
            let consistent = (0..depth).all(|j| (self.gens[j] == self.gens[depth]) == (images[j] == c));
            if !consistent {
                continue;
            }
            images[depth] = c;
            if self.assign(other, anti, candidates, images, depth + 1) {
                return true;
            }
        }
        false
    }

    fn extends<U: Clone + Eq + Hash + Send + Sync>(&self, other: &FiniteSemigroup<U>, anti: bool, images: &[u32]) -> bool {
        let n = self.len();
        let prod = |x: u32, y: u32| if anti { other.mul_idx(y, x) } else { other.mul_idx(x, y) };
        let mut phi = vec![0u32; n];
        for x in 0..n {
            let (p, a) = self.parent[x];
            phi[x] = if p == ROOT { images[a as usize] } else { prod(phi[p as usize], images[a as usize]) };
        }
        let mut hit = FixedBitSet::with_capacity(n);
        for &y in &phi {
            if hit.put(y as usize) {
                return false;
            }
        }
        let k = self.k();
        (0..n).all(|x| (0..k).all(|g| phi[self.right[x * k + g] as usize] == prod(phi[x], images[g])))
    }

    pub fn eggbox(&self) -> EggboxStructure {
        self.eggbox_labelled(|_, k| format!("D{k}"))
    }

    /// Eggbox structure with a caller-supplied label per D-class, given a
    /// representative element and the class position.
    pub fn eggbox_labelled(&self, label: impl Fn(&T, usize) -> String) -> EggboxStructure {
        self.eggbox_restricted(None, label)
    }

    /// Eggbox restricted to the D-classes meeting `keep`.
    pub fn eggbox_restricted(&self, keep: Option<&FixedBitSet>, label: impl Fn(&T, usize) -> String) -> EggboxStructure {
        let g = self.green();
        let idem = self.idempotent_flags();
        let kept = |d: usize| keep.map_or(true, |k| g.d_members[d].iter().any(|&x| k.contains(x as usize)));
        let order: Vec<usize> = g.d_topological().into_iter().filter(|&d| kept(d)).collect();
        let mut position = vec![usize::MAX; g.d_count];
        for (i, &d) in order.iter().enumerate() {
            position[d] = i;
        }
        let classes = order
            .iter()
            .enumerate()
            .map(|(pos, &d)| {
                let members = &g.d_members[d];
                let mut rows: Vec<u32> = members.iter().map(|&x| g.r[x as usize]).collect();
                let mut cols: Vec<u32> = members.iter().map(|&x| g.l[x as usize]).collect();
                rows.sort_unstable();
                rows.dedup();
                cols.sort_unstable();
                cols.dedup();
                let mut cells = vec![vec![EggCell { size: 0, group: false }; cols.len()]; rows.len()];
                for &x in members {
                    let i = rows.binary_search(&g.r[x as usize]).unwrap();
                    let j = cols.binary_search(&g.l[x as usize]).unwrap();
                    cells[i][j].size += 1;
                    cells[i][j].group |= idem[x as usize];
                }
                let regular = cells.iter().flatten().any(|c| c.group);
                EggboxClass {
                    label: label(&self.elements[members[0] as usize], pos),
                    size: members.len(),
                    regular,
                    cells,
                }
            })
            .collect();
        let covers = g
            .d_covers()
            .into_iter()
            .filter(|&(u, l)| position[u] != usize::MAX && position[l] != usize::MAX)
            .map(|(u, l)| (position[u], position[l]))
            .collect();
        EggboxStructure { classes, covers }
    }
}

impl FiniteSemigroup<usize> {
    /// A semigroup from an explicit multiplication table on `0..n`.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self, SemigroupError> {
        let n = table.len();
        if table.iter().any(|row| row.len() != n || row.iter().any(|&v| v >= n)) {
            return Err(SemigroupError::NotClosed { left: 0, right: 0 });
        }
        let t = Arc::new(table.to_vec());
        let elements: Vec<usize> = (0..n).collect();
        FiniteSemigroup::from_elements(&elements, Arc::new(move |&a: &usize, &b: &usize| t[a][b]))
    }
}

/// Right-multiplication columns for arbitrary elements, computed on demand.
#[derive(Default)]
struct ColumnCache {
    cols: HashMap<u32, Arc<Vec<u32>>>,
}

impl ColumnCache {
    fn get<T: Clone + Eq + Hash + Send + Sync>(&mut self, s: &FiniteSemigroup<T>, y: u32) -> Arc<Vec<u32>> {
        self.cols.entry(y).or_insert_with(|| Arc::new(s.right_column(y))).clone()
    }
}

/// An incrementally grown subsemigroup.
#[derive(Clone)]
struct SubClosure {
    members: FixedBitSet,
    list: Vec<u32>,
    gens: Vec<Arc<Vec<u32>>>,
}

impl SubClosure {
    fn new(n: usize) -> Self {
        SubClosure { members: FixedBitSet::with_capacity(n), list: Vec::new(), gens: Vec::new() }
    }

    fn len(&self) -> usize {
        self.list.len()
    }

    fn push(&mut self, x: u32) {
        if !self.members.put(x as usize) {
            self.list.push(x);
        }
    }

    fn add<T: Clone + Eq + Hash + Send + Sync>(&mut self, s: &FiniteSemigroup<T>, cache: &mut ColumnCache, g: u32) {
        let col = cache.get(s, g);
        let old = self.list.len();
        self.push(g);
        for i in 0..old {
            let y = col[self.list[i] as usize];
            self.push(y);
        }
        self.gens.push(col);
        let mut i = old;
        while i < self.list.len() {
            let x = self.list[i] as usize;
            for c in 0..self.gens.len() {
                let y = self.gens[c][x];
                self.push(y);
            }
            i += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankResult {
    pub rank: usize,
    pub generators: Vec<u32>,
    pub lower_bound: usize,
}

/// Rank over generating sets drawn from `pool`: a lower bound from the
/// maximal J-classes, an upper bound from randomised greedy runs, and a
/// subset search when the gap is small enough.
fn rank_search<T: Clone + Eq + Hash + Send + Sync>(
    s: &FiniteSemigroup<T>,
    pool: &[u32],
    must_include: &[u32],
) -> Result<RankResult, SemigroupError> {
    let n = s.len();
    let g = s.green();
    let mut in_pool = FixedBitSet::with_capacity(n);
    for &x in pool {
        in_pool.insert(x as usize);
    }
    let mut cache = ColumnCache::default();
    let demands = class_demands(s, &mut cache);
    let mut forced: Vec<u32> = must_include.to_vec();
    let mut lower = 0;
    let mut top_members = Vec::new();
    for (d, &need) in demands.iter().enumerate() {
        if need == 0 {
            continue;
        }
        let members = &g.d_members[d];
        if members.len() == 1 {
            forced.push(members[0]);
        }
        lower += need;
        top_members.extend(members.iter().copied().filter(|&x| in_pool.contains(x as usize)));
    }
    forced.sort_unstable();
    forced.dedup();
    let mut top = SubClosure::new(n);
    for &x in &top_members {
        top.add(s, &mut cache, x);
    }
    if top.len() < n {
        lower += 1;
    }
    lower = lower.max(forced.len());

    let best = greedy_upper_bound(s, pool, &forced, &mut cache);
    if best.len() <= lower {
        return Ok(RankResult { rank: best.len(), generators: best, lower_bound: lower });
    }
    // Subset search over sizes lower..best, when the number of subsets is manageable.
    let free: Vec<u32> = pool.iter().copied().filter(|x| forced.binary_search(x).is_err()).collect();
    let mut base = SubClosure::new(n);
    for &f in &forced {
        base.add(s, &mut cache, f);
    }
    for size in lower..best.len() {
        let extra = size - forced.len();
        if binomial_exceeds(free.len(), extra, 200_000) {
            return Err(SemigroupError::Unresolved { lower: size, upper: best.len() });
        }
        let mut chosen = Vec::new();
        if let Some(found) = subset_search(s, &free, extra, 0, &base, &mut chosen, &mut cache) {
            let mut gens = forced.clone();
            gens.extend(found);
            return Ok(RankResult { rank: size, generators: gens, lower_bound: lower });
        }
    }
    Ok(RankResult { rank: best.len(), generators: best, lower_bound: lower })
}

/// Generators each D-class `C` must contain. With `U` the elements strictly
/// above `C`, every factorisation of `x ∈ C` uses only `C ∪ U`; so an R-class
/// of `C` needs its own generator unless it meets `⟨U⟩` or is entered from
/// another R-class of `C` under left multiplication by `U`. Dually for L.
fn class_demands<T: Clone + Eq + Hash + Send + Sync>(s: &FiniteSemigroup<T>, cache: &mut ColumnCache) -> Vec<usize> {
    let n = s.len();
    let g = s.green();
    let mut out = vec![0; g.d_count];
    for d in 0..g.d_count {
        let mut above = SubClosure::new(n);
        let mut u_gens = Vec::new();
        for x in 0..n as u32 {
            let dx = g.d[x as usize] as usize;
            if dx != d && g.d_class_leq(d, dx) && !above.members.contains(x as usize) {
                above.add(s, cache, x);
                u_gens.push(x);
            }
        }
        let members = &g.d_members[d];
        let mut needs_r: HashMap<u32, bool> = members.iter().map(|&x| (g.r[x as usize], true)).collect();
        let mut needs_l: HashMap<u32, bool> = members.iter().map(|&x| (g.l[x as usize], true)).collect();
        for &c in members {
            if above.members.contains(c as usize) {
                needs_r.insert(g.r[c as usize], false);
                needs_l.insert(g.l[c as usize], false);
            }
        }
        for &u in &u_gens {
            let col = cache.get(s, u);
            for &c in members {
                let left = s.mul_idx(u, c) as usize;
                if g.d[left] as usize == d && g.r[left] != g.r[c as usize] {
                    needs_r.insert(g.r[left], false);
                }
                let right = col[c as usize] as usize;
                if g.d[right] as usize == d && g.l[right] != g.l[c as usize] {
                    needs_l.insert(g.l[right], false);
                }
            }
        }
        let count = |m: &HashMap<u32, bool>| m.values().filter(|&&b| b).count();
        out[d] = count(&needs_r).max(count(&needs_l));
    }
    out
}

fn binomial_exceeds(n: usize, k: usize, cap: u128) -> bool {
    if k > n {
        return false;
    }
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
        if acc > cap {
            return true;
        }
    }
    false
}

fn subset_search<T: Clone + Eq + Hash + Send + Sync>(
    s: &FiniteSemigroup<T>,
    free: &[u32],
    extra: usize,
    start: usize,
    current: &SubClosure,
    chosen: &mut Vec<u32>,
    cache: &mut ColumnCache,
) -> Option<Vec<u32>> {
    if extra == 0 {
        return (current.len() == s.len()).then(|| chosen.clone());
    }
    for i in start..free.len() {
        if free.len() - i < extra {
            break;
        }
        let x = free[i];
        if current.members.contains(x as usize) {
            continue;
        }
        let mut next = current.clone();
        next.add(s, cache, x);
        chosen.push(x);
        if let Some(found) = subset_search(s, free, extra - 1, i + 1, &next, chosen, cache) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}

fn greedy_upper_bound<T: Clone + Eq + Hash + Send + Sync>(
    s: &FiniteSemigroup<T>,
    pool: &[u32],
    forced: &[u32],
    cache: &mut ColumnCache,
) -> Vec<u32> {
    let n = s.len();
    let g = s.green();
    let order = g.d_topological();
    let mut rng = StdRng::seed_from_u64(0x9e3779b97f4a7c15);
    let mut best: Option<Vec<u32>> = None;
    for _ in 0..12 {
        let mut c = SubClosure::new(n);
        let mut gens = Vec::new();
        for &f in forced {
            c.add(s, cache, f);
            gens.push(f);
        }
        for &d in &order {
            let mut cand: Vec<u32> = g.d_members[d].iter().copied().filter(|x| pool.binary_search(x).is_ok()).collect();
            cand.shuffle(&mut rng);
            let mut rows = HashSet::new();
            let mut cols = HashSet::new();
            for &x in &gens {
                if g.d[x as usize] as usize == d {
                    rows.insert(g.r[x as usize]);
                    cols.insert(g.l[x as usize]);
                }
            }
            loop {
                let uncovered: Vec<u32> = cand.iter().copied().filter(|&x| !c.members.contains(x as usize)).collect();
                if uncovered.is_empty() {
                    break;
                }
                let score = |x: u32| {
                    !rows.contains(&g.r[x as usize]) as usize + !cols.contains(&g.l[x as usize]) as usize
                };
                let top_score = uncovered.iter().map(|&x| score(x)).max().unwrap();
                let shortlist: Vec<u32> = uncovered.iter().copied().filter(|&x| score(x) == top_score).take(4).collect();
                let (pick, closure) = shortlist
                    .into_iter()
                    .map(|x| {
                        let mut t = c.clone();
                        t.add(s, cache, x);
                        (x, t)
                    })
                    .max_by_key(|(_, t)| t.len())
                    .unwrap();
                rows.insert(g.r[pick as usize]);
                cols.insert(g.l[pick as usize]);
                gens.push(pick);
                c = closure;
            }
            if c.len() == n {
                break;
            }
        }
        if best.as_ref().map_or(true, |b| gens.len() < b.len()) {
            best = Some(gens);
        }
    }
    best.unwrap_or_default()
}

/// Green's relations of a finite semigroup; `J = D`.
#[derive(Debug, Clone)]
pub struct GreenStructure {
    pub r: Vec<u32>,
    pub l: Vec<u32>,
    pub h: Vec<u32>,
    pub d: Vec<u32>,
    pub r_count: usize,
    pub l_count: usize,
    pub h_count: usize,
    pub d_count: usize,
    /// Members of each D-class, increasing.
    pub d_members: Vec<Vec<u32>>,
    /// `d_below[c]` holds the classes `c'` with `c' ≤_J c`, including `c`.
    d_below: Vec<FixedBitSet>,
    r_reach: Vec<FixedBitSet>,
    l_reach: Vec<FixedBitSet>,
}

/// Strongly connected components, numbered by least member.
fn components(n: usize, edges: impl Iterator<Item = (u32, u32)>) -> (Vec<u32>, usize) {
    let mut graph: DiGraph<(), ()> = DiGraph::with_capacity(n, 0);
    for _ in 0..n {
        graph.add_node(());
    }
    for (a, b) in edges {
        graph.add_edge(a.into(), b.into(), ());
    }
    let mut sccs: Vec<Vec<u32>> = kosaraju_scc(&graph)
        .into_iter()
        .map(|c| c.into_iter().map(|v| v.index() as u32).collect())
        .collect();
    for c in &mut sccs {
        c.sort_unstable();
    }
    sccs.sort_unstable_by_key(|c| c[0]);
    let mut class = vec![0u32; n];
    for (i, c) in sccs.iter().enumerate() {
        for &v in c {
            class[v as usize] = i as u32;
        }
    }
    (class, sccs.len())
}

/// Reachability between classes of a condensed graph: `reach[c]` holds
/// every class reachable from `c`, including `c`.
fn class_reachability(class: &[u32], count: usize, edges: impl Iterator<Item = (u32, u32)>) -> Vec<FixedBitSet> {
    let mut succ: Vec<HashSet<u32>> = vec![HashSet::new(); count];
    for (a, b) in edges {
        let (ca, cb) = (class[a as usize], class[b as usize]);
        if ca != cb {
            succ[ca as usize].insert(cb);
        }
    }
    let mut indeg = vec![0usize; count];
    for s in &succ {
        for &b in s {
            indeg[b as usize] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..count).filter(|&c| indeg[c] == 0).collect();
    let mut topo = Vec::with_capacity(count);
    while let Some(c) = queue.pop_front() {
        topo.push(c);
        for &b in &succ[c] {
            indeg[b as usize] -= 1;
            if indeg[b as usize] == 0 {
                queue.push_back(b as usize);
            }
        }
    }
    let mut reach = vec![FixedBitSet::with_capacity(count); count];
    for &c in topo.iter().rev() {
        let mut set = FixedBitSet::with_capacity(count);
        set.insert(c);
        for &b in &succ[c] {
            set.union_with(&reach[b as usize]);
        }
        reach[c] = set;
    }
    reach
}

fn maximal_in(reach: &[FixedBitSet]) -> Vec<usize> {
    let mut covered = FixedBitSet::with_capacity(reach.len());
    for (c, set) in reach.iter().enumerate() {
        covered.extend(set.ones().filter(|&b| b != c));
    }
    (0..reach.len()).filter(|&c| !covered.contains(c)).collect()
}

impl GreenStructure {
    fn build<T: Clone + Eq + Hash + Send + Sync>(s: &FiniteSemigroup<T>) -> Self {
        let n = s.len();
        let k = s.k();
        let right_edges = || (0..n).flat_map(move |x| (0..k).map(move |g| (x as u32, s.right[x * k + g])));
        let left_edges = || (0..n).flat_map(move |x| (0..k).map(move |g| (x as u32, s.left[x * k + g])));
        let (r, r_count) = components(n, right_edges());
        let (l, l_count) = components(n, left_edges());
        let (d, d_count) = components(n, right_edges().chain(left_edges()));
        let mut h_ids: HashMap<(u32, u32), u32> = HashMap::new();
        let h: Vec<u32> = (0..n)
            .map(|x| {
                let next = h_ids.len() as u32;
                *h_ids.entry((r[x], l[x])).or_insert(next)
            })
            .collect();
        let mut d_members = vec![Vec::new(); d_count];
        for x in 0..n {
            d_members[d[x] as usize].push(x as u32);
        }
        let d_below = class_reachability(&d, d_count, right_edges().chain(left_edges()));
        let r_reach = class_reachability(&r, r_count, right_edges());
        let l_reach = class_reachability(&l, l_count, left_edges());
        GreenStructure {
            h_count: h_ids.len(),
            r,
            l,
            h,
            d,
            r_count,
            l_count,
            d_count,
            d_members,
            d_below,
            r_reach,
            l_reach,
        }
    }

    /// `x ≤_R y`, i.e. `x ∈ yS¹`.
    pub fn leq_r(&self, x: u32, y: u32) -> bool {
        self.r_reach[self.r[y as usize] as usize].contains(self.r[x as usize] as usize)
    }

    pub fn leq_l(&self, x: u32, y: u32) -> bool {
        self.l_reach[self.l[y as usize] as usize].contains(self.l[x as usize] as usize)
    }

    pub fn leq_j(&self, x: u32, y: u32) -> bool {
        self.d_class_leq(self.d[x as usize] as usize, self.d[y as usize] as usize)
    }

    /// D-class `a` lies below D-class `b`.
    pub fn d_class_leq(&self, a: usize, b: usize) -> bool {
        self.d_below[b].contains(a)
    }

    pub fn maximal_d_classes(&self) -> Vec<usize> {
        (0..self.d_count)
            .filter(|&c| (0..self.d_count).all(|o| o == c || !self.d_below[o].contains(c)))
            .collect()
    }

    /// R-classes with nothing strictly above them in the R-order.
    pub fn maximal_r_classes(&self) -> Vec<usize> {
        maximal_in(&self.r_reach)
    }

    pub fn maximal_l_classes(&self) -> Vec<usize> {
        maximal_in(&self.l_reach)
    }

    pub fn minimal_d_classes(&self) -> Vec<usize> {
        (0..self.d_count).filter(|&c| self.d_below[c].count_ones(..) == 1).collect()
    }

    /// D-classes ordered so that every class precedes those below it,
    /// ties broken by least member.
    pub fn d_topological(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.d_count).collect();
        order.sort_by_key(|&c| (std::cmp::Reverse(self.d_below[c].count_ones(..)), c));
        // Classes strictly above `c` have strictly larger down-sets, so sorting
        // by down-set size gives a linear extension.
        order
    }

    /// Covering pairs `(upper, lower)` of the J-order on D-classes.
    pub fn d_covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.d_count {
            let mut strict = self.d_below[u].clone();
            strict.set(u, false);
            let mut deeper = FixedBitSet::with_capacity(self.d_count);
            for w in strict.ones() {
                let mut s = self.d_below[w].clone();
                s.set(w, false);
                deeper.union_with(&s);
            }
            for l in strict.ones() {
                if !deeper.contains(l) {
                    out.push((u, l));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EggCell {
    pub size: usize,
    pub group: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EggboxClass {
    pub label: String,
    pub size: usize,
    pub regular: bool,
    /// Rows are R-classes, columns L-classes.
    pub cells: Vec<Vec<EggCell>>,
}

impl EggboxClass {
    pub fn dims(&self) -> (usize, usize) {
        (self.cells.len(), self.cells.first().map_or(0, |r| r.len()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EggboxStructure {
    /// D-classes, each before every class below it.
    pub classes: Vec<EggboxClass>,
    /// Covers of the J-order as `(upper, lower)` positions in `classes`.
    pub covers: Vec<(usize, usize)>,
}

impl EggboxStructure {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph eggbox {\n  node [shape=plaintext];\n");
        for (k, class) in self.classes.iter().enumerate() {
            let _ = writeln!(out, "  subgraph cluster_{k} {{");
            let _ = writeln!(out, "    label=\"{}\";", class.label);
            let _ = write!(out, "    d{k} [label=<<TABLE BORDER=\"0\" CELLBORDER=\"1\" CELLSPACING=\"0\">");
            for (i, row) in class.cells.iter().enumerate() {
                out.push_str("<TR>");
                for (j, cell) in row.iter().enumerate() {
                    let fill = if cell.group { " BGCOLOR=\"#cccccc\"" } else { "" };
                    let _ = write!(out, "<TD PORT=\"H_{i}_{j}\"{fill}>{}</TD>", cell.size);
                }
                out.push_str("</TR>");
            }
            out.push_str("</TABLE>>];\n  }\n");
        }
        for &(u, l) in &self.covers {
            let _ = writeln!(out, "  d{u} -> d{l};");
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type S = FiniteSemigroup<usize>;

    fn left_zero(k: usize) -> S {
        let table: Vec<Vec<usize>> = (0..k).map(|i| vec![i; k]).collect();
        S::from_table(&table).unwrap()
    }

    /// `{a, b, 0}` with `a² = a`, `b² = b`, all other products `0`.
    fn v_shape() -> S {
        S::from_table(&[vec![0, 2, 2], vec![2, 1, 2], vec![2, 2, 2]]).unwrap()
    }

    #[test]
    fn left_zero_structure() {
        let s = left_zero(3);
        let g = s.green();
        assert_eq!((g.d_count, g.r_count, g.l_count), (1, 3, 1));
        assert_eq!(s.idempotents().len(), 3);
        assert_eq!(s.exact_rank(&[]).unwrap().rank, 3);
        assert_eq!(s.exact_idempotent_rank().unwrap().rank, 3);
        let egg = s.eggbox();
        assert_eq!(egg.classes[0].dims(), (3, 1));
    }

    #[test]
    fn not_closed() {
        let elems = vec![1u32, 2];
        let mul: MulFn<u32> = Arc::new(|a, b| a * b);
        assert!(matches!(FiniteSemigroup::from_elements(&elems, mul), Err(SemigroupError::NotClosed { .. })));
    }

    #[test]
    fn v_shaped_order() {
        let s = v_shape();
        let g = s.green();
        assert_eq!(g.d_count, 3);
        assert_eq!(g.maximal_d_classes().len(), 2);
        let egg = s.eggbox();
        assert!(egg.classes.iter().all(|c| c.cells[0][0].group));
        assert_eq!(egg.covers.len(), 2);
        let dot = egg.to_dot();
        assert!(dot.contains("cluster_2") && dot.contains("#cccccc"));
    }

    #[test]
    fn monoid_mid_identities() {
        // The two-element semilattice {1, 0}.
        let s = S::from_table(&[vec![0, 1], vec![1, 1]]).unwrap();
        let one = s.index_of(&0).unwrap();
        assert_eq!(s.mid_identities(), vec![one]);
        assert_eq!(s.regularity_preserving(), vec![one]);
        assert_eq!(s.is_mi_dominated().unwrap(), (true, None));
    }

    #[test]
    fn rectangular_band_idempotent_rank() {
        let (rho, lam) = (2, 3);
        let n = rho * lam;
        let table: Vec<Vec<usize>> =
            (0..n).map(|x| (0..n).map(|y| (x / lam) * lam + y % lam).collect()).collect();
        let s = S::from_table(&table).unwrap();
        assert_eq!(s.exact_idempotent_rank().unwrap().rank, 3);
    }

    #[test]
    fn isomorphism_and_anti() {
        let lz = left_zero(2);
        let rz = S::from_table(&[vec![0, 1], vec![0, 1]]).unwrap();
        assert!(!lz.isomorphic(&rz, false, 500).unwrap());
        assert!(lz.isomorphic(&rz, true, 500).unwrap());
        assert!(lz.isomorphic(&lz, false, 500).unwrap());
    }

    #[test]
    fn table_and_words_agree() {
        let s = v_shape();
        assert!(s.verify_against_mul(None));
        s.ensure_table();
        assert!(s.verify_against_mul(None));
    }
}
