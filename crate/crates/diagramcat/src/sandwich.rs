//! Sandwich semigroups `K_mn^σ = (K_mn, α ⋆ β = ασβ)`.
//!
//! Green's classes, regularity and the idempotent-generated part are derived
//! from categorical data (ranks, kernels, the P-sets) without building the
//! multiplication table. The engine semigroup is available separately so the
//! two routes can be compared.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;
use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::diagrams::{CategoryTag, DiagramError, Partition, RowKey};
use crate::homsets::{self, cat_leq, GreenRelation, HomSet, HomSetError};
use crate::semigroups::{FiniteSemigroup, MulFn, SemigroupError, DEFAULT_MAX_ELEMENTS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SandwichError {
    #[error("σ is not a {0} partition")]
    NotInCategory(CategoryTag),
    #[error("σ must lie in K_{{{n},{m}}}, found a partition of shape {found_m}x{found_n}")]
    Shape { m: usize, n: usize, found_m: usize, found_n: usize },
    #[error("element is not regular in the sandwich semigroup")]
    NotRegularElement,
    #[error("rank {0} is not admissible")]
    RankNotAdmissible(usize),
    #[error(transparent)]
    HomSet(#[from] HomSetError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Subsets of `K_mn` given as bitsets over hom-set indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PSets {
    pub p1: FixedBitSet,
    pub p2: FixedBitSet,
    pub p3: FixedBitSet,
    pub p: FixedBitSet,
    /// For B and TL: whether the join-separation criterion reproduced `p1` and `p2`.
    pub join_criterion_agrees: Option<bool>,
}

/// Class ids per hom-set element for each sandwich Green relation (`J = D`).
#[derive(Debug, Clone)]
pub struct SandwichGreen {
    pub r: Vec<u32>,
    pub l: Vec<u32>,
    pub h: Vec<u32>,
    pub d: Vec<u32>,
    /// Regular D-classes keyed by rank.
    pub regular_d: Vec<(usize, Vec<usize>)>,
    /// Classes of the relations pulled back along Ψ, defined on regular elements only.
    pub r_hat: Vec<Option<u32>>,
    pub l_hat: Vec<Option<u32>>,
    pub h_hat: Vec<Option<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseSets {
    pub pre: Vec<usize>,
    pub post: Vec<usize>,
    pub v: Vec<usize>,
    pub ri: Vec<usize>,
    pub li: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalClasses {
    /// Elements forming singleton maximal classes.
    pub trivial: Vec<usize>,
    /// The nontrivial maximal class, when there is one.
    pub nontrivial: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdealStatus {
    pub is_e_generated: bool,
    pub by_top_class: bool,
}

#[derive(Debug, Clone)]
pub struct IdempotentGenerated {
    /// `⟨E⟩` computed by closure.
    pub members: FixedBitSet,
    /// The preimage under Ψ of the idempotent-generated submonoid of `K_r`.
    pub psi_preimage: FixedBitSet,
    /// The tag-specific description, where one is known.
    pub closed_form: Option<FixedBitSet>,
}

impl IdempotentGenerated {
    pub fn consistent(&self) -> bool {
        self.members == self.psi_preimage && self.closed_form.as_ref().map_or(true, |c| *c == self.members)
    }
}

/// An engine semigroup on part of `K_mn` with index maps to the hom-set.
pub struct Oracle {
    pub semigroup: FiniteSemigroup<Partition>,
    /// Engine index → hom-set index.
    pub to_homset: Vec<usize>,
    /// Hom-set index → engine index, for elements present.
    pub from_homset: HashMap<usize, u32>,
}

pub struct SandwichContext {
    pub tag: CategoryTag,
    pub m: usize,
    pub n: usize,
    pub sigma: Partition,
    pub r: usize,
    pub tau: Partition,
    homset: Arc<HomSet>,
    psets: OnceLock<PSets>,
    green: OnceLock<SandwichGreen>,
    cat_keys: OnceLock<Vec<(RowKey, RowKey, usize)>>,
}

impl SandwichContext {
    /// `σ ∈ K_nm`, so `K_mn` carries the product `α ⋆ β = ασβ`.
    pub fn new(tag: CategoryTag, m: usize, n: usize, sigma: Partition) -> Result<Self, SandwichError> {
        let bound = homsets::default_bound(tag);
        Self::with_bound(tag, m, n, sigma, bound)
    }

    pub fn with_bound(tag: CategoryTag, m: usize, n: usize, sigma: Partition, bound: usize) -> Result<Self, SandwichError> {
        if sigma.upper_size() != n || sigma.lower_size() != m {
            return Err(SandwichError::Shape { m, n, found_m: sigma.upper_size(), found_n: sigma.lower_size() });
        }
        if !sigma.in_category(tag) {
            return Err(SandwichError::NotInCategory(tag));
        }
        let homset = Arc::new(homsets::enumerate_bounded(tag, m, n, bound)?);
        Self::with_homset(sigma, homset)
    }

    /// Reuses an already enumerated `K_mn`.
    pub fn with_homset(sigma: Partition, homset: Arc<HomSet>) -> Result<Self, SandwichError> {
        let (tag, m, n) = (homset.tag, homset.m, homset.n);
        if sigma.upper_size() != n || sigma.lower_size() != m {
            return Err(SandwichError::Shape { m, n, found_m: sigma.upper_size(), found_n: sigma.lower_size() });
        }
        if !sigma.in_category(tag) {
            return Err(SandwichError::NotInCategory(tag));
        }
        let tau = tau_for(&sigma);
        Ok(SandwichContext {
            tag,
            m,
            n,
            r: sigma.rank(),
            sigma,
            tau,
            homset,
            psets: OnceLock::new(),
            green: OnceLock::new(),
            cat_keys: OnceLock::new(),
        })
    }

    pub fn homset(&self) -> &HomSet {
        &self.homset
    }

    pub fn len(&self) -> usize {
        self.homset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.homset.is_empty()
    }

    pub fn element(&self, i: usize) -> &Partition {
        self.homset.get(i)
    }

    pub fn star(&self, a: &Partition, b: &Partition) -> Result<Partition, SandwichError> {
        Ok(a.compose(&self.sigma)?.compose(b)?)
    }

    pub fn star_fn(&self) -> MulFn<Partition> {
        let sigma = self.sigma.clone();
        Arc::new(move |a: &Partition, b: &Partition| a.compose_unchecked(&sigma).compose_unchecked(b))
    }

    fn keys(&self) -> &[(RowKey, RowKey, usize)] {
        self.cat_keys.get_or_init(|| {
            self.homset.elements().iter().map(|a| (a.upper_key(), a.lower_key(), a.rank())).collect()
        })
    }

    /// Ranks `q ≤ r` of the regular D-classes.
    pub fn admissible_ranks(&self) -> Vec<usize> {
        if self.tag.parity_constrained() {
            (self.r % 2..=self.r).step_by(2).collect()
        } else {
            (0..=self.r).collect()
        }
    }

    pub fn p_sets(&self) -> &PSets {
        self.psets.get_or_init(|| {
            let len = self.len();
            let mut p1 = FixedBitSet::with_capacity(len);
            let mut p2 = FixedBitSet::with_capacity(len);
            let mut p3 = FixedBitSet::with_capacity(len);
            for (i, a) in self.homset.elements().iter().enumerate() {
                let q = a.rank();
                let a_sigma = a.compose_unchecked(&self.sigma);
                let sigma_a = self.sigma.compose_unchecked(a);
                p1.set(i, a_sigma.rank() == q);
                p2.set(i, sigma_a.rank() == q);
                p3.set(i, sigma_a.compose_unchecked(&self.sigma).rank() == q);
            }
            let mut p = p1.clone();
            p.intersect_with(&p2);
            let join_criterion_agrees = self.tag.parity_constrained().then(|| {
                self.homset.elements().iter().enumerate().all(|(i, a)| {
                    join_separates_codom(a, &self.sigma) == p1.contains(i)
                        && join_separates_dom(a, &self.sigma) == p2.contains(i)
                })
            });
            PSets { p1, p2, p3, p, join_criterion_agrees }
        })
    }

    /// `P1` and `P2` by the identities `x*x σσ* x*x = x*x` and `xx* σ*σ xx* = xx*`.
    pub fn equational_p_sets(&self) -> (FixedBitSet, FixedBitSet) {
        let len = self.len();
        let ss = self.sigma.compose_unchecked(&self.sigma.involution());
        let ss_rev = self.sigma.involution().compose_unchecked(&self.sigma);
        let mut p1 = FixedBitSet::with_capacity(len);
        let mut p2 = FixedBitSet::with_capacity(len);
        for (i, x) in self.homset.elements().iter().enumerate() {
            let xs = x.involution();
            let left = xs.compose_unchecked(x);
            p1.set(i, left.compose_unchecked(&ss).compose_unchecked(&left) == left);
            let right = x.compose_unchecked(&xs);
            p2.set(i, right.compose_unchecked(&ss_rev).compose_unchecked(&right) == right);
        }
        (p1, p2)
    }

    /// Indices of `Reg(K_mn^σ)`.
    pub fn regular_elements(&self) -> Vec<usize> {
        self.p_sets().p.ones().collect()
    }

    pub fn is_regular(&self, i: usize) -> bool {
        self.p_sets().p.contains(i)
    }

    /// `Ψ(α) = τσατ* ∈ K_r`, defined on regular elements.
    pub fn psi(&self, alpha: &Partition) -> Result<Partition, SandwichError> {
        let i = self.homset.index_of(alpha).ok_or(SandwichError::NotRegularElement)?;
        if !self.is_regular(i) {
            return Err(SandwichError::NotRegularElement);
        }
        Ok(self.psi_unchecked(alpha))
    }

    fn psi_unchecked(&self, alpha: &Partition) -> Partition {
        self.tau
            .compose_unchecked(&self.sigma)
            .compose_unchecked(alpha)
            .compose_unchecked(&self.tau.involution())
    }

    /// Green's classes from the P-sets and the categorical classes.
    pub fn sandwich_green(&self) -> &SandwichGreen {
        self.green.get_or_init(|| self.build_green())
    }

    fn build_green(&self) -> SandwichGreen {
        #[derive(Hash, PartialEq, Eq)]
        enum Key<'a> {
            Row(&'a RowKey),
            Pair(&'a RowKey, &'a RowKey),
            Rank(usize),
            Single(usize),
        }
        struct Interner<'a>(HashMap<Key<'a>, u32>);
        impl<'a> Interner<'a> {
            fn id(&mut self, k: Key<'a>) -> u32 {
                let next = self.0.len() as u32;
                *self.0.entry(k).or_insert(next)
            }
        }
        let ps = self.p_sets();
        let keys = self.keys();
        let (mut ri, mut li, mut hi, mut di) =
            (Interner(HashMap::new()), Interner(HashMap::new()), Interner(HashMap::new()), Interner(HashMap::new()));
        let len = self.len();
        let (mut r, mut l, mut h, mut d) = (vec![0; len], vec![0; len], vec![0; len], vec![0; len]);
        let mut regular_d: Vec<(usize, Vec<usize>)> = Vec::new();
        for i in 0..len {
            let (uk, lk, q) = &keys[i];
            let in1 = ps.p1.contains(i);
            let in2 = ps.p2.contains(i);
            r[i] = ri.id(if in1 { Key::Row(uk) } else { Key::Single(i) });
            l[i] = li.id(if in2 { Key::Row(lk) } else { Key::Single(i) });
            h[i] = hi.id(if in1 && in2 { Key::Pair(uk, lk) } else { Key::Single(i) });
            d[i] = di.id(match (in1, in2) {
                (true, true) => Key::Rank(*q),
                (false, true) => Key::Row(lk),
                (true, false) => Key::Row(uk),
                (false, false) => Key::Single(i),
            });
            if in1 && in2 {
                match regular_d.iter_mut().find(|(k, _)| k == q) {
                    Some((_, v)) => v.push(i),
                    None => regular_d.push((*q, vec![i])),
                }
            }
        }
        regular_d.sort_by_key(|(q, _)| *q);
        // Upper and lower row keys share the interner; split them by P-set membership.
        let d = relabel_pairs(&d, &ps.p1, &ps.p2);

        let mut hat_r = Interner(HashMap::new());
        let mut hat_l = Interner(HashMap::new());
        let mut hat_h = Interner(HashMap::new());
        let mut r_hat = vec![None; len];
        let mut l_hat = vec![None; len];
        let mut h_hat = vec![None; len];
        let psi_keys: Vec<Option<(RowKey, RowKey)>> = (0..len)
            .map(|i| {
                ps.p.contains(i).then(|| {
                    let x = self.psi_unchecked(self.element(i));
                    (x.upper_key(), x.lower_key())
                })
            })
            .collect();
        for i in 0..len {
            if let Some((uk, lk)) = &psi_keys[i] {
                r_hat[i] = Some(hat_r.id(Key::Row(uk)));
                l_hat[i] = Some(hat_l.id(Key::Row(lk)));
                h_hat[i] = Some(hat_h.id(Key::Pair(uk, lk)));
            }
        }
        SandwichGreen { r, l, h, d, regular_d, r_hat, l_hat, h_hat }
    }

    /// `x ≤_R y` in `K_mn^σ`: `x = y` or `x ≤_R yσ` in the category.
    pub fn leq_r(&self, x: usize, y: usize) -> bool {
        x == y || {
            let ys = self.element(y).compose_unchecked(&self.sigma);
            cat_leq(self.tag, GreenRelation::R, self.element(x), &ys)
        }
    }

    pub fn leq_l(&self, x: usize, y: usize) -> bool {
        x == y || {
            let sy = self.sigma.compose_unchecked(self.element(y));
            cat_leq(self.tag, GreenRelation::L, self.element(x), &sy)
        }
    }

    pub fn leq_j(&self, x: usize, y: usize) -> bool {
        if self.leq_r(x, y) || self.leq_l(x, y) {
            return true;
        }
        let sys = self.sigma.compose_unchecked(self.element(y)).compose_unchecked(&self.sigma);
        cat_leq(self.tag, GreenRelation::J, self.element(x), &sys)
    }

    pub fn inverse_sets(&self) -> InverseSets {
        let elems = self.homset.elements();
        let mut pre = Vec::new();
        let mut post = Vec::new();
        for (i, a) in elems.iter().enumerate() {
            let sa = self.sigma.compose_unchecked(a);
            if sa.compose_unchecked(&self.sigma) == self.sigma {
                pre.push(i);
            }
            if a.compose_unchecked(&self.sigma).compose_unchecked(a) == *a {
                post.push(i);
            }
        }
        let v = pre.iter().copied().filter(|i| post.binary_search(i).is_ok()).collect();
        let acts_as = |e: &Partition, right: bool| {
            elems.iter().all(|x| if right { x.compose_unchecked(e) == *x } else { e.compose_unchecked(x) == *x })
        };
        let mut right_cache: HashMap<Partition, bool> = HashMap::new();
        let mut left_cache: HashMap<Partition, bool> = HashMap::new();
        let mut ri = Vec::new();
        let mut li = Vec::new();
        for (i, b) in elems.iter().enumerate() {
            let sb = self.sigma.compose_unchecked(b);
            if *right_cache.entry(sb.clone()).or_insert_with(|| acts_as(&sb, true)) {
                ri.push(i);
            }
            let bs = b.compose_unchecked(&self.sigma);
            if *left_cache.entry(bs.clone()).or_insert_with(|| acts_as(&bs, false)) {
                li.push(i);
            }
        }
        InverseSets { pre, post, v, ri, li }
    }

    /// `E(K_mn^σ)`, which equals the set of post-inverses of σ.
    pub fn idempotents(&self) -> Vec<usize> {
        self.homset
            .elements()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.compose_unchecked(&self.sigma).compose_unchecked(a) == **a)
            .map(|(i, _)| i)
            .collect()
    }

    /// Maximal J-classes: singletons above σ, and `D_r^σ` exactly when every
    /// `x` with `rank(σxσ) = r` itself has rank `r`.
    pub fn maximal_j_classes(&self) -> MaximalClasses {
        let keys = self.keys();
        let trivial: Vec<usize> = (0..self.len()).filter(|&i| keys[i].2 > self.r).collect();
        let top_is_maximal = self.homset.elements().iter().all(|x| {
            let sxs = self.sigma.compose_unchecked(x).compose_unchecked(&self.sigma);
            sxs.rank() != self.r || x.rank() == self.r
        });
        let nontrivial = top_is_maximal.then(|| self.regular_d_class(self.r)).filter(|d| !d.is_empty());
        MaximalClasses { trivial, nontrivial }
    }

    /// `D_q^σ`: regular elements of rank `q`.
    pub fn regular_d_class(&self, q: usize) -> Vec<usize> {
        let ps = self.p_sets();
        let keys = self.keys();
        ps.p.ones().filter(|&i| keys[i].2 == q).collect()
    }

    /// The least rank occurring in `K_mn`.
    pub fn least_rank(&self) -> usize {
        if self.tag.parity_constrained() {
            self.m % 2
        } else {
            0
        }
    }

    /// The minimal ideal `D_z`, all elements of least rank.
    pub fn minimal_ideal(&self) -> Vec<usize> {
        let z = self.least_rank();
        let keys = self.keys();
        (0..self.len()).filter(|&i| keys[i].2 == z).collect()
    }

    fn check_rank(&self, q: usize) -> Result<(), SandwichError> {
        if self.admissible_ranks().contains(&q) {
            Ok(())
        } else {
            Err(SandwichError::RankNotAdmissible(q))
        }
    }

    /// `I_q`: regular elements of rank at most `q`.
    pub fn ideal(&self, q: usize) -> Result<Vec<usize>, SandwichError> {
        self.check_rank(q)?;
        let keys = self.keys();
        Ok(self.p_sets().p.ones().filter(|&i| keys[i].2 <= q).collect())
    }

    /// Closure under `⋆` of some hom-set elements, as hom-set indices.
    pub fn closure_of(&self, gens: &[usize]) -> Result<FixedBitSet, SandwichError> {
        let mut out = FixedBitSet::with_capacity(self.len());
        if gens.is_empty() {
            return Ok(out);
        }
        let elems: Vec<Partition> = gens.iter().map(|&i| self.element(i).clone()).collect();
        let s = FiniteSemigroup::closure_bounded(&elems, self.star_fn(), max_elements())?;
        for a in s.elements() {
            out.insert(self.homset.index_of(a).expect("closure stays in the hom-set"));
        }
        Ok(out)
    }

    pub fn ideal_idempotent_status(&self, q: usize) -> Result<IdealStatus, SandwichError> {
        let ideal = self.ideal(q)?;
        let keys = self.keys();
        let idem = self.idempotents();
        let e_ideal: Vec<usize> = idem.iter().copied().filter(|&i| self.is_regular(i) && keys[i].2 <= q).collect();
        let e_top: Vec<usize> = e_ideal.iter().copied().filter(|&i| keys[i].2 == q).collect();
        let mut target = FixedBitSet::with_capacity(self.len());
        target.extend(ideal.iter().copied());
        Ok(IdealStatus {
            is_e_generated: self.closure_of(&e_ideal)? == target,
            by_top_class: self.closure_of(&e_top)? == target,
        })
    }

    /// `⟨E(K_mn^σ)⟩` by closure, with the Ψ-preimage and closed descriptions alongside.
    pub fn idempotent_generated(&self) -> Result<IdempotentGenerated, SandwichError> {
        let len = self.len();
        let idem = self.idempotents();
        let members = self.closure_of(&idem)?;

        let kr = homsets::enumerate(self.tag, self.r, self.r)?;
        let compose: MulFn<Partition> = Arc::new(|a: &Partition, b: &Partition| a.compose_unchecked(b));
        let kr_idem: Vec<Partition> =
            kr.elements().iter().filter(|a| a.compose_unchecked(a) == **a).cloned().collect();
        let e_kr = FiniteSemigroup::closure_bounded(&kr_idem, compose, max_elements())?;
        let ps = self.p_sets();
        let mut psi_preimage = FixedBitSet::with_capacity(len);
        for i in ps.p.ones() {
            if e_kr.index_of(&self.psi_unchecked(self.element(i))).is_some() {
                psi_preimage.insert(i);
            }
        }

        let keys = self.keys();
        let rank_of = |i: usize| keys[i].2;
        let closed_form = match self.tag {
            CategoryTag::TL | CategoryTag::PP => Some(ps.p.clone()),
            CategoryTag::P | CategoryTag::B => {
                let mut set = FixedBitSet::with_capacity(len);
                for i in ps.p.ones() {
                    if rank_of(i) != self.r {
                        set.insert(i);
                    }
                }
                set.extend(self.inverse_sets().v);
                Some(set)
            }
            CategoryTag::PB => {
                let mut set = FixedBitSet::with_capacity(len);
                for i in ps.p.ones() {
                    if rank_of(i) + 2 <= self.r {
                        set.insert(i);
                    }
                }
                for &i in &idem {
                    if ps.p.contains(i) && rank_of(i) + 1 >= self.r {
                        set.insert(i);
                    }
                }
                Some(set)
            }
            CategoryTag::M => None,
        };
        Ok(IdempotentGenerated { members, psi_preimage, closed_form })
    }

    /// The engine semigroup on all of `K_mn`, generators chosen from high rank down.
    pub fn semigroup(&self) -> Result<Oracle, SandwichError> {
        let all: Vec<usize> = (0..self.len()).collect();
        self.oracle_on(&all)
    }

    /// The engine semigroup on `Reg(K_mn^σ)`.
    pub fn regular_semigroup(&self) -> Result<Oracle, SandwichError> {
        self.oracle_on(&self.regular_elements())
    }

    /// The engine semigroup on a `⋆`-closed set of hom-set indices.
    pub fn oracle_on(&self, members: &[usize]) -> Result<Oracle, SandwichError> {
        let keys = self.keys();
        let mut order = members.to_vec();
        order.sort_by_key(|&i| (std::cmp::Reverse(keys[i].2), i));
        let elems: Vec<Partition> = order.iter().map(|&i| self.element(i).clone()).collect();
        let semigroup = FiniteSemigroup::from_elements(&elems, self.star_fn())?;
        let to_homset: Vec<usize> =
            semigroup.elements().iter().map(|a| self.homset.index_of(a).expect("member of K_mn")).collect();
        let from_homset = to_homset.iter().enumerate().map(|(e, &h)| (h, e as u32)).collect();
        Ok(Oracle { semigroup, to_homset, from_homset })
    }
}

/// Label vectors describing the same partition of `0..n` compare equal after this.
pub fn canonical_labels<I: Copy + Eq + std::hash::Hash>(ids: &[I]) -> Vec<u32> {
    let mut map = HashMap::new();
    ids.iter()
        .map(|&x| {
            let next = map.len() as u32;
            *map.entry(x).or_insert(next)
        })
        .collect()
}

fn relabel_pairs(d: &[u32], p1: &FixedBitSet, p2: &FixedBitSet) -> Vec<u32> {
    let tagged: Vec<(u8, u32)> = d
        .iter()
        .enumerate()
        .map(|(i, &c)| ((p1.contains(i) as u8) << 1 | p2.contains(i) as u8, c))
        .collect();
    canonical_labels(&tagged)
}

/// Largest `q` for which the ideal `I_q` of `Reg(K_mn^σ)` is idempotent-generated,
/// given `r = rank(σ)`; negative when none is. For `r ≤ 1` all of `K_r` consists
/// of idempotents, so every ideal qualifies.
pub fn mu(tag: CategoryTag, r: usize) -> i64 {
    let r = r as i64;
    if r <= 1 {
        return r;
    }
    match tag {
        CategoryTag::PP | CategoryTag::TL => r,
        CategoryTag::P => r - 1,
        CategoryTag::PB | CategoryTag::B => r - 2,
        CategoryTag::M => r / 2 - 1,
    }
}

fn env_limit() -> Option<usize> {
    std::env::var("DIAGRAMCAT_MAX_ELEMENTS").ok()?.parse().ok()
}

/// Element cap for closures, overridable through `DIAGRAMCAT_MAX_ELEMENTS`.
pub fn max_elements() -> usize {
    env_limit().unwrap_or(DEFAULT_MAX_ELEMENTS)
}

/// `τ ∈ K_rn`: `{i} ∪ X_i'` for the transversals of σ in canonical order,
/// and `U_j'` for its upper nontransversals.
pub fn tau_for(sigma: &Partition) -> Partition {
    let n = sigma.upper_size();
    let blocks = sigma.blocks();
    let mut out: Vec<Vec<i32>> = Vec::new();
    let mut r = 0;
    for block in &blocks {
        let upper: Vec<i32> = block.iter().copied().filter(|&v| v > 0).collect();
        let lower_present = block.iter().any(|&v| v < 0);
        if upper.is_empty() {
            continue;
        }
        if lower_present {
            r += 1;
            let mut b = vec![r];
            b.extend(upper.iter().map(|&v| -v));
            out.push(b);
        } else {
            out.push(upper.iter().map(|&v| -v).collect());
        }
    }
    Partition::new(r as usize, n, &out).expect("τ covers [r] ∪ [n]'")
}

/// `coker(α) ∨ ker(σ)` has no class containing two points of `codom(α)`.
fn join_separates_codom(alpha: &Partition, sigma: &Partition) -> bool {
    let s = alpha.stats();
    let t = sigma.stats();
    separates(alpha.lower_size(), &s.coker, &t.ker, &s.codom)
}

/// `ker(α) ∨ coker(σ)` separates `dom(α)`.
fn join_separates_dom(alpha: &Partition, sigma: &Partition) -> bool {
    let s = alpha.stats();
    let t = sigma.stats();
    separates(alpha.upper_size(), &s.ker, &t.coker, &s.dom)
}

fn separates(size: usize, a: &[Vec<u32>], b: &[Vec<u32>], points: &[u32]) -> bool {
    let mut uf: UnionFind<usize> = UnionFind::new(size);
    for class in a.iter().chain(b) {
        for w in class.windows(2) {
            uf.union(w[0] as usize - 1, w[1] as usize - 1);
        }
    }
    let mut seen = std::collections::HashSet::new();
    points.iter().all(|&p| seen.insert(uf.find(p as usize - 1)))
}
