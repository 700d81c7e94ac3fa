//! Hom-set enumeration and the Green structure of the categories themselves.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::diagrams::{CategoryTag, Partition, RowKey};
use crate::numbers::{self, VerifyRow};

/// Largest `m + n` enumerated by default for the planar and Brauer families.
pub const DEFAULT_BOUND_SMALL_BLOCKS: usize = 14;
/// Largest `m + n` enumerated by default for P and PB.
pub const DEFAULT_BOUND_LARGE_BLOCKS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomSetError {
    #[error("{tag}_{{{m},{n}}} exceeds the enumeration bound m+n <= {bound}")]
    BoundExceeded { tag: CategoryTag, m: usize, n: usize, bound: usize },
}

pub fn default_bound(tag: CategoryTag) -> usize {
    match tag {
        CategoryTag::P | CategoryTag::PB => DEFAULT_BOUND_LARGE_BLOCKS,
        _ => DEFAULT_BOUND_SMALL_BLOCKS,
    }
}

/// All of `K_mn`, sorted, with a reverse index.
#[derive(Debug, Clone)]
pub struct HomSet {
    pub tag: CategoryTag,
    pub m: usize,
    pub n: usize,
    elements: Vec<Partition>,
    index: HashMap<Partition, usize>,
}

impl HomSet {
    pub fn elements(&self) -> &[Partition] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, alpha: &Partition) -> Option<usize> {
        self.index.get(alpha).copied()
    }

    pub fn get(&self, i: usize) -> &Partition {
        &self.elements[i]
    }
}

pub fn enumerate(tag: CategoryTag, m: usize, n: usize) -> Result<HomSet, HomSetError> {
    enumerate_bounded(tag, m, n, default_bound(tag))
}

pub fn enumerate_bounded(tag: CategoryTag, m: usize, n: usize, bound: usize) -> Result<HomSet, HomSetError> {
    if m + n > bound {
        return Err(HomSetError::BoundExceeded { tag, m, n, bound });
    }
    let mut elements = if tag.parity_constrained() && (m + n) % 2 == 1 {
        Vec::new()
    } else if tag.planar() {
        noncrossing(tag, m, n)
    } else {
        set_partitions(tag, m, n)
    };
    elements.sort_unstable();
    let index = elements.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    Ok(HomSet { tag, m, n, elements, index })
}

/// Restricted growth strings over the vertices, pruned by block size.
fn set_partitions(tag: CategoryTag, m: usize, n: usize) -> Vec<Partition> {
    let total = m + n;
    let max_block = tag.max_block().unwrap_or(usize::MAX);
    let exact_pairs = tag.perfect_matching();
    let mut out = Vec::new();
    let mut labels = vec![0usize; total];
    let mut sizes: Vec<usize> = Vec::new();

    fn go(
        i: usize,
        total: usize,
        labels: &mut Vec<usize>,
        sizes: &mut Vec<usize>,
        max_block: usize,
        exact_pairs: bool,
        emit: &mut dyn FnMut(&[usize]),
    ) {
        if exact_pairs {
            let open = sizes.iter().filter(|&&s| s == 1).count();
            if open > total - i {
                return;
            }
        }
        if i == total {
            if !exact_pairs || sizes.iter().all(|&s| s == 2) {
                emit(labels);
            }
            return;
        }
        for b in 0..=sizes.len() {
            if b == sizes.len() {
                sizes.push(1);
            } else if sizes[b] >= max_block {
                continue;
            } else {
                sizes[b] += 1;
            }
            labels[i] = b;
            go(i + 1, total, labels, sizes, max_block, exact_pairs, emit);
            if sizes[b] == 1 && b + 1 == sizes.len() {
                sizes.pop();
            } else {
                sizes[b] -= 1;
            }
        }
    }

    let mut emit = |l: &[usize]| out.push(Partition::from_labels(m, n, l.iter().copied()));
    go(0, total, &mut labels, &mut sizes, max_block, exact_pairs, &mut emit);
    out
}

/// Noncrossing partitions of the boundary (upper row left to right, then
/// lower row right to left), built with a stack of blocks still open to
/// further points.
fn noncrossing(tag: CategoryTag, m: usize, n: usize) -> Vec<Partition> {
    let total = m + n;
    let max_block = tag.max_block().unwrap_or(usize::MAX);
    let exact_pairs = tag.perfect_matching();
    let mut out = Vec::new();

    struct State {
        labels: Vec<usize>,
        sizes: Vec<usize>,
        stack: Vec<usize>,
    }

    fn go(
        pos: usize,
        total: usize,
        st: &mut State,
        max_block: usize,
        exact_pairs: bool,
        emit: &mut dyn FnMut(&[usize]),
    ) {
        if pos == total {
            if !exact_pairs || st.sizes.iter().all(|&s| s == 2) {
                emit(&st.labels);
            }
            return;
        }
        // Join an open block; every block above it on the stack is closed for good.
        for depth in (0..st.stack.len()).rev() {
            let b = st.stack[depth];
            let closed = &st.stack[depth + 1..];
            if exact_pairs && closed.iter().any(|&c| st.sizes[c] != 2) {
                break;
            }
            if st.sizes[b] >= max_block {
                continue;
            }
            let saved: Vec<usize> = st.stack.drain(depth + 1..).collect();
            st.sizes[b] += 1;
            st.labels[pos] = b;
            go(pos + 1, total, st, max_block, exact_pairs, emit);
            st.sizes[b] -= 1;
            st.stack.extend(saved);
        }
        // Start a new block.
        let b = st.sizes.len();
        st.sizes.push(1);
        st.stack.push(b);
        st.labels[pos] = b;
        go(pos + 1, total, st, max_block, exact_pairs, emit);
        st.stack.pop();
        st.sizes.pop();
    }

    let mut st = State { labels: vec![0; total], sizes: Vec::new(), stack: Vec::new() };
    let mut emit = |boundary: &[usize]| {
        let labels = (0..total).map(|idx| boundary[if idx < m { idx } else { 2 * m + n - 1 - idx }]);
        out.push(Partition::from_labels(m, n, labels));
    };
    go(0, total, &mut st, max_block, exact_pairs, &mut emit);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreenRelation {
    R,
    L,
    J,
}

/// `a` is finer than or equal to `b` as a row structure with the
/// nontransversal condition: `b`'s classes refine `a`'s and every
/// nontransversal class of `b` is a nontransversal class of `a`.
fn row_leq(a: &RowKey, b: &RowKey) -> bool {
    if a.classes.len() != b.classes.len() {
        return false;
    }
    let mut image = vec![u16::MAX; b.transversal.len()];
    let mut a_sizes = vec![0usize; a.transversal.len()];
    let mut b_sizes = vec![0usize; b.transversal.len()];
    for (&x, &y) in a.classes.iter().zip(b.classes.iter()) {
        let slot = &mut image[y as usize];
        if *slot == u16::MAX {
            *slot = x;
        } else if *slot != x {
            return false;
        }
        a_sizes[x as usize] += 1;
        b_sizes[y as usize] += 1;
    }
    (0..b.transversal.len()).all(|c| {
        b.transversal[c] || {
            let x = image[c] as usize;
            !a.transversal[x] && a_sizes[x] == b_sizes[c]
        }
    })
}

/// The Green preorders of the category, by the kernel/rank characterisation.
pub fn cat_leq(tag: CategoryTag, rel: GreenRelation, a: &Partition, b: &Partition) -> bool {
    match rel {
        GreenRelation::R => row_leq(&a.upper_key(), &b.upper_key()),
        GreenRelation::L => row_leq(&a.lower_key(), &b.lower_key()),
        GreenRelation::J => {
            let (x, y) = (a.rank(), b.rank());
            x <= y && (!tag.parity_constrained() || (y - x) % 2 == 0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatDClass {
    pub rank: usize,
    pub r_classes: Vec<usize>,
    pub l_classes: Vec<usize>,
    pub size: usize,
}

/// Green classes of a hom-set inside its category.
#[derive(Debug, Clone)]
pub struct CatGreenClasses {
    pub r_class: Vec<usize>,
    pub l_class: Vec<usize>,
    pub rank: Vec<usize>,
    pub r_keys: Vec<RowKey>,
    pub l_keys: Vec<RowKey>,
    /// D-classes keyed by rank, forming a chain.
    pub d_classes: BTreeMap<usize, CatDClass>,
}

impl CatGreenClasses {
    pub fn h_class(&self, i: usize) -> (usize, usize) {
        (self.r_class[i], self.l_class[i])
    }
}

fn intern(keys: &mut Vec<RowKey>, ids: &mut HashMap<RowKey, usize>, key: RowKey) -> usize {
    *ids.entry(key).or_insert_with_key(|k| {
        keys.push(k.clone());
        keys.len() - 1
    })
}

pub fn cat_green_classes(h: &HomSet) -> CatGreenClasses {
    let mut r_keys = Vec::new();
    let mut l_keys = Vec::new();
    let mut r_ids = HashMap::new();
    let mut l_ids = HashMap::new();
    let mut r_class = Vec::with_capacity(h.len());
    let mut l_class = Vec::with_capacity(h.len());
    let mut rank = Vec::with_capacity(h.len());
    let mut d_classes: BTreeMap<usize, CatDClass> = BTreeMap::new();
    for alpha in h.elements() {
        let r = intern(&mut r_keys, &mut r_ids, alpha.upper_key());
        let l = intern(&mut l_keys, &mut l_ids, alpha.lower_key());
        let k = alpha.rank();
        let d = d_classes.entry(k).or_insert_with(|| CatDClass { rank: k, r_classes: vec![], l_classes: vec![], size: 0 });
        if !d.r_classes.contains(&r) {
            d.r_classes.push(r);
        }
        if !d.l_classes.contains(&l) {
            d.l_classes.push(l);
        }
        d.size += 1;
        r_class.push(r);
        l_class.push(l);
        rank.push(k);
    }
    CatGreenClasses { r_class, l_class, rank, r_keys, l_keys, d_classes }
}

/// Hom-set sizes and categorical D-class profiles against their formulas,
/// for all `m + n ≤ max_size`.
pub fn verify_counts(tag: CategoryTag, max_size: usize) -> Result<Vec<VerifyRow>, HomSetError> {
    let mut rows = Vec::new();
    for total in 0..=max_size {
        for m in 0..=total {
            let n = total - m;
            let h = enumerate_bounded(tag, m, n, max_size.max(default_bound(tag)))?;
            rows.push(VerifyRow::new(tag, (m, n, 0), "homsetSize", numbers::homset_cardinality(tag, m, n), h.len()));
            let classes = cat_green_classes(&h);
            for r in numbers::admissible_ranks(tag, m, n) {
                let Ok(p) = numbers::dclass_profile(tag, m, n, r) else { continue };
                let d = classes.d_classes.get(&r);
                let (rc, lc, size) = d.map_or((0, 0, 0), |d| (d.r_classes.len(), d.l_classes.len(), d.size));
                let h_size = if size == 0 { 0 } else { size / (rc * lc) };
                rows.push(VerifyRow::new(tag, (m, n, r), "rClasses", &p.r_classes, rc));
                rows.push(VerifyRow::new(tag, (m, n, r), "lClasses", &p.l_classes, lc));
                rows.push(VerifyRow::new(tag, (m, n, r), "hSize", &p.h_size, h_size));
                rows.push(VerifyRow::new(tag, (m, n, r), "dSize", &p.d_size, size));
            }
        }
    }
    Ok(rows)
}
