//! Diagram partitions of `[m] ∪ [n]'`.
//!
//! Vertices are signed integers: `i > 0` is the upper vertex `i`, `-i` is the
//! lower vertex `i'`. Internally a partition is stored as one block label per
//! vertex, in the order `1 < … < m < 1' < … < n'`, relabelled so that labels
//! appear in increasing order of first occurrence. That restricted growth
//! string is the canonical form: blocks sorted by least vertex, vertices
//! sorted within each block.

use std::fmt;
use std::str::FromStr;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Signed vertex: positive for the upper row, negative for the lower row.
pub type Vertex = i32;

const MAX_VERTICES: usize = u16::MAX as usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("vertex {0} is missing")]
    MissingVertex(Vertex),
    #[error("vertex {0} occurs more than once")]
    DuplicateVertex(Vertex),
    #[error("vertex {0} is out of range")]
    OutOfRange(Vertex),
    #[error("blocks must be nonempty")]
    EmptyBlock,
    #[error("cannot compose: left factor has {left} lower points, right factor has {right} upper points")]
    ShapeMismatch { left: usize, right: usize },
    #[error("partition is not planar")]
    NotPlanar,
    #[error("{0} vertices exceed the supported maximum")]
    TooLarge(usize),
    #[error("column {column}: {message}")]
    Parse { column: usize, message: String },
}

/// The six diagram categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CategoryTag {
    P,
    PB,
    B,
    PP,
    M,
    TL,
}

impl CategoryTag {
    pub const ALL: [CategoryTag; 6] = [
        CategoryTag::P,
        CategoryTag::PB,
        CategoryTag::B,
        CategoryTag::PP,
        CategoryTag::M,
        CategoryTag::TL,
    ];

    /// Brauer and Temperley-Lieb hom-sets are empty unless `m ≡ n (mod 2)`,
    /// and their ranks all share that parity.
    pub fn parity_constrained(self) -> bool {
        matches!(self, CategoryTag::B | CategoryTag::TL)
    }

    pub fn planar(self) -> bool {
        matches!(self, CategoryTag::PP | CategoryTag::M | CategoryTag::TL)
    }

    /// Largest allowed block size, if bounded.
    pub fn max_block(self) -> Option<usize> {
        match self {
            CategoryTag::P | CategoryTag::PP => None,
            _ => Some(2),
        }
    }

    /// Every block has exactly two vertices.
    pub fn perfect_matching(self) -> bool {
        matches!(self, CategoryTag::B | CategoryTag::TL)
    }

    /// H-classes are nontrivial (symmetric groups) exactly in the non-planar families.
    pub fn has_symmetric_groups(self) -> bool {
        !self.planar()
    }

    pub fn name(self) -> &'static str {
        match self {
            CategoryTag::P => "P",
            CategoryTag::PB => "PB",
            CategoryTag::B => "B",
            CategoryTag::PP => "PP",
            CategoryTag::M => "M",
            CategoryTag::TL => "TL",
        }
    }
}

impl fmt::Display for CategoryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CategoryTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "P" => Ok(CategoryTag::P),
            "PB" => Ok(CategoryTag::PB),
            "B" => Ok(CategoryTag::B),
            "PP" => Ok(CategoryTag::PP),
            "M" => Ok(CategoryTag::M),
            "TL" => Ok(CategoryTag::TL),
            other => Err(format!("unknown category tag `{other}` (expected P, PB, B, PP, M or TL)")),
        }
    }
}

/// A set partition of `[m] ∪ [n]'` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    m: u32,
    n: u32,
    labels: Box<[u16]>,
}

/// Derived statistics of a partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionStats {
    pub rank: usize,
    /// Upper points lying in transversals.
    pub dom: Vec<u32>,
    /// Lower points lying in transversals.
    pub codom: Vec<u32>,
    /// Equivalence induced on the upper row, as sorted classes.
    pub ker: Vec<Vec<u32>>,
    /// Equivalence induced on the lower row, as sorted classes.
    pub coker: Vec<Vec<u32>>,
    pub upper_nontransversals: Vec<Vec<u32>>,
    pub lower_nontransversals: Vec<Vec<u32>>,
}

/// Everything about one row of a partition that determines its Green class:
/// the induced equivalence, and which of its classes lie in transversals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowKey {
    pub classes: Box<[u16]>,
    pub transversal: Box<[bool]>,
}

impl Partition {
    /// Builds a partition from signed-vertex blocks, validating coverage.
    pub fn new(m: usize, n: usize, blocks: &[Vec<Vertex>]) -> Result<Self, DiagramError> {
        if m + n > MAX_VERTICES {
            return Err(DiagramError::TooLarge(m + n));
        }
        let mut labels = vec![u16::MAX; m + n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(DiagramError::EmptyBlock);
            }
            for &v in block {
                let idx = vertex_index(m, n, v).ok_or(DiagramError::OutOfRange(v))?;
                if labels[idx] != u16::MAX {
                    return Err(DiagramError::DuplicateVertex(v));
                }
                labels[idx] = b as u16;
            }
        }
        if let Some(idx) = labels.iter().position(|&l| l == u16::MAX) {
            return Err(DiagramError::MissingVertex(index_vertex(m, idx)));
        }
        Ok(Self::from_labels(m, n, labels.into_iter().map(usize::from)))
    }

    /// Canonicalises arbitrary per-vertex block labels (upper row then lower row).
    pub(crate) fn from_labels(m: usize, n: usize, raw: impl IntoIterator<Item = usize>) -> Self {
        let mut relabel: Vec<u16> = Vec::new();
        let mut next = 0u16;
        let labels: Box<[u16]> = raw
            .into_iter()
            .map(|l| {
                if l >= relabel.len() {
                    relabel.resize(l + 1, u16::MAX);
                }
                if relabel[l] == u16::MAX {
                    relabel[l] = next;
                    next += 1;
                }
                relabel[l]
            })
            .collect();
        debug_assert_eq!(labels.len(), m + n);
        Partition { m: m as u32, n: n as u32, labels }
    }

    /// `id_n = {{x, x'} : x ∈ [n]}`.
    pub fn identity(n: usize) -> Self {
        Self::from_labels(n, n, (0..n).chain(0..n))
    }

    /// The permutation diagram `{{i, images[i-1]'}}`; `images` is 1-based.
    pub fn from_permutation(images: &[usize]) -> Self {
        let n = images.len();
        let mut lower = vec![0usize; n];
        for (i, &j) in images.iter().enumerate() {
            lower[j - 1] = i;
        }
        Self::from_labels(n, n, (0..n).chain(lower))
    }

    /// Number of upper points.
    pub fn upper_size(&self) -> usize {
        self.m as usize
    }

    /// Number of lower points.
    pub fn lower_size(&self) -> usize {
        self.n as usize
    }

    pub fn block_count(&self) -> usize {
        self.labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0)
    }

    /// Per-vertex block labels in canonical form.
    pub fn labels(&self) -> &[u16] {
        &self.labels
    }

    /// Blocks in canonical order as signed vertices.
    pub fn blocks(&self) -> Vec<Vec<Vertex>> {
        let mut blocks = vec![Vec::new(); self.block_count()];
        let m = self.upper_size();
        for (idx, &l) in self.labels.iter().enumerate() {
            blocks[l as usize].push(index_vertex(m, idx));
        }
        blocks
    }

    /// Upper and lower parts of each block, as unsigned point lists.
    fn halves(&self) -> Vec<(Vec<u32>, Vec<u32>)> {
        let m = self.upper_size();
        let mut halves = vec![(Vec::new(), Vec::new()); self.block_count()];
        for (idx, &l) in self.labels.iter().enumerate() {
            if idx < m {
                halves[l as usize].0.push(idx as u32 + 1);
            } else {
                halves[l as usize].1.push((idx - m) as u32 + 1);
            }
        }
        halves
    }

    /// Whether each block meets the upper row and whether it meets the lower row.
    fn row_flags(&self) -> (Vec<bool>, Vec<bool>) {
        let m = self.upper_size();
        let k = self.block_count();
        let mut up = vec![false; k];
        let mut down = vec![false; k];
        for (idx, &l) in self.labels.iter().enumerate() {
            if idx < m {
                up[l as usize] = true;
            } else {
                down[l as usize] = true;
            }
        }
        (up, down)
    }

    /// Number of transversals.
    pub fn rank(&self) -> usize {
        let (up, down) = self.row_flags();
        up.iter().zip(&down).filter(|(a, b)| **a && **b).count()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.block_count()];
        for &l in self.labels.iter() {
            sizes[l as usize] += 1;
        }
        sizes
    }

    /// The product `self · other`, gluing the lower row of `self` to the upper
    /// row of `other`; components confined to the middle row are dropped.
    pub fn compose(&self, other: &Partition) -> Result<Partition, DiagramError> {
        if self.n != other.m {
            return Err(DiagramError::ShapeMismatch { left: self.lower_size(), right: other.upper_size() });
        }
        Ok(self.compose_unchecked(other))
    }

    /// `compose` without the shape check; panics on mismatch in debug builds.
    pub fn compose_unchecked(&self, other: &Partition) -> Partition {
        debug_assert_eq!(self.n, other.m);
        let m = self.upper_size();
        let n = self.lower_size();
        let k = other.lower_size();
        let a = self.block_count();
        let b = other.block_count();
        let mut uf: UnionFind<u32> = UnionFind::new(a + b);
        for j in 0..n {
            uf.union(self.labels[m + j] as u32, (a + other.labels[j] as usize) as u32);
        }
        let upper = self.labels[..m].iter().map(|&l| l as usize);
        let lower = other.labels[n..].iter().map(|&l| a + l as usize);
        let roots: Vec<usize> = upper.chain(lower).map(|x| uf.find_mut(x as u32) as usize).collect();
        Partition::from_labels(m, k, roots)
    }

    /// The reflection `α*` swapping the two rows.
    pub fn involution(&self) -> Partition {
        let m = self.upper_size();
        let lower = self.labels[m..].iter();
        let upper = self.labels[..m].iter();
        Partition::from_labels(self.lower_size(), m, lower.chain(upper).map(|&l| l as usize))
    }

    pub fn stats(&self) -> PartitionStats {
        let halves = self.halves();
        let mut stats = PartitionStats {
            rank: 0,
            dom: Vec::new(),
            codom: Vec::new(),
            ker: Vec::new(),
            coker: Vec::new(),
            upper_nontransversals: Vec::new(),
            lower_nontransversals: Vec::new(),
        };
        for (up, down) in halves {
            match (up.is_empty(), down.is_empty()) {
                (false, false) => {
                    stats.rank += 1;
                    stats.dom.extend(&up);
                    stats.codom.extend(&down);
                    stats.ker.push(up);
                    stats.coker.push(down);
                }
                (false, true) => {
                    stats.ker.push(up.clone());
                    stats.upper_nontransversals.push(up);
                }
                (true, false) => {
                    stats.coker.push(down.clone());
                    stats.lower_nontransversals.push(down);
                }
                (true, true) => unreachable!("blocks are nonempty"),
            }
        }
        stats.dom.sort_unstable();
        stats.codom.sort_unstable();
        stats.coker.sort_unstable_by_key(|c| c[0]);
        stats.lower_nontransversals.sort_unstable_by_key(|c| c[0]);
        stats
    }

    /// Key determining the R-class: the kernel together with which kernel
    /// classes are transversal (equivalently `(dom, ker)` or `(ker, N_U)`).
    pub fn upper_key(&self) -> RowKey {
        let (_, down) = self.row_flags();
        row_key(self.labels[..self.upper_size()].iter(), &down)
    }

    /// Key determining the L-class: `(codom, coker)`.
    pub fn lower_key(&self) -> RowKey {
        let (up, _) = self.row_flags();
        row_key(self.labels[self.upper_size()..].iter(), &up)
    }

    /// Planarity via the combinatorial characterisation by nesting and
    /// separation of block halves.
    pub fn is_planar(&self) -> bool {
        let halves = self.halves();
        let mut transversals = Vec::new();
        let mut upper_only = Vec::new();
        let mut lower_only = Vec::new();
        for (up, down) in halves {
            match (up.is_empty(), down.is_empty()) {
                (false, false) => transversals.push((up, down)),
                (false, true) => upper_only.push(up),
                (true, false) => lower_only.push(down),
                (true, true) => unreachable!(),
            }
        }
        // Canonical order already sorts transversals by their least upper point.
        for w in transversals.windows(2) {
            if !(last(&w[0].0) < w[1].0[0] && last(&w[0].1) < w[1].1[0]) {
                return false;
            }
        }
        let pairwise_ok = |blocks: &[Vec<u32>]| {
            blocks.iter().enumerate().all(|(i, x)| {
                blocks[i + 1..]
                    .iter()
                    .all(|y| separated(x, y) || nested_by(x, y) || nested_by(y, x))
            })
        };
        if !pairwise_ok(&upper_only) || !pairwise_ok(&lower_only) {
            return false;
        }
        transversals.iter().all(|(a, b)| {
            upper_only.iter().all(|c| separated(a, c) || nested_by(c, a))
                && lower_only.iter().all(|d| separated(b, d) || nested_by(d, b))
        })
    }

    pub fn in_category(&self, tag: CategoryTag) -> bool {
        let sizes_ok = match tag {
            CategoryTag::B | CategoryTag::TL => self.block_sizes().iter().all(|&s| s == 2),
            CategoryTag::PB | CategoryTag::M => self.block_sizes().iter().all(|&s| s <= 2),
            CategoryTag::P | CategoryTag::PP => true,
        };
        sizes_ok && (!tag.planar() || self.is_planar())
    }

    /// The planar-to-Temperley-Lieb doubling: each point becomes two adjacent
    /// points and each block is replaced by the arcs tracing its boundary.
    pub fn pp_to_tl(&self) -> Result<Partition, DiagramError> {
        if !self.is_planar() {
            return Err(DiagramError::NotPlanar);
        }
        let m = self.upper_size();
        let n = self.lower_size();
        let total = m + n;
        if 2 * total > MAX_VERTICES {
            return Err(DiagramError::TooLarge(2 * total));
        }
        // Boundary order: upper row left to right, then lower row right to left.
        let mut by_block: Vec<Vec<usize>> = vec![Vec::new(); self.block_count()];
        for pos in 0..total {
            by_block[self.labels[boundary_index(m, n, pos)] as usize].push(pos);
        }
        let mut doubled = vec![0usize; 2 * total];
        let mut arc = 0;
        for positions in &by_block {
            let k = positions.len();
            for t in 0..k {
                let from = 2 * positions[t] + 1;
                let to = 2 * positions[(t + 1) % k];
                doubled[from] = arc;
                doubled[to] = arc;
                arc += 1;
            }
        }
        let (m2, n2) = (2 * m, 2 * n);
        let labels = (0..m2 + n2).map(|idx| doubled[index_boundary(m2, n2, idx)]);
        Ok(Partition::from_labels(m2, n2, labels))
    }

    /// One-line text form `m n | b1 | b2 | …`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn last(v: &[u32]) -> u32 {
    *v.last().expect("nonempty")
}

fn separated(x: &[u32], y: &[u32]) -> bool {
    last(x) < y[0] || last(y) < x[0]
}

/// `x` sits strictly between two consecutive points of `y`.
fn nested_by(x: &[u32], y: &[u32]) -> bool {
    y.windows(2).any(|w| w[0] < x[0] && last(x) < w[1])
}

fn row_key<'a>(row: impl Iterator<Item = &'a u16>, other_side: &[bool]) -> RowKey {
    let mut relabel: Vec<u16> = vec![u16::MAX; other_side.len()];
    let mut transversal = Vec::new();
    let classes = row
        .map(|&l| {
            let l = l as usize;
            if relabel[l] == u16::MAX {
                relabel[l] = transversal.len() as u16;
                transversal.push(other_side[l]);
            }
            relabel[l]
        })
        .collect();
    RowKey { classes, transversal: transversal.into_boxed_slice() }
}

fn vertex_index(m: usize, n: usize, v: Vertex) -> Option<usize> {
    if v > 0 && (v as usize) <= m {
        Some(v as usize - 1)
    } else if v < 0 && (v.unsigned_abs() as usize) <= n {
        Some(m + v.unsigned_abs() as usize - 1)
    } else {
        None
    }
}

fn index_vertex(m: usize, idx: usize) -> Vertex {
    if idx < m {
        idx as Vertex + 1
    } else {
        -((idx - m) as Vertex + 1)
    }
}

/// Vertex index of boundary position `pos`.
fn boundary_index(m: usize, n: usize, pos: usize) -> usize {
    if pos < m {
        pos
    } else {
        2 * m + n - 1 - pos
    }
}

/// Boundary position of vertex index `idx` (the inverse of `boundary_index`).
fn index_boundary(m: usize, n: usize, idx: usize) -> usize {
    boundary_index(m, n, idx)
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.m, self.n)?;
        for block in self.blocks() {
            f.write_str(" | ")?;
            for (i, v) in block.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({self})")
    }
}

impl FromStr for Partition {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut segments = Vec::new();
        let mut start = 0;
        for (i, c) in s.char_indices() {
            if c == '|' {
                segments.push((start, &s[start..i]));
                start = i + 1;
            }
        }
        segments.push((start, &s[start..]));
        let (head_at, head) = segments[0];
        let mut dims = Vec::new();
        for (offset, word) in words(head) {
            let value = word.parse::<usize>().map_err(|_| DiagramError::Parse {
                column: head_at + offset + 1,
                message: format!("expected a row size, found `{word}`"),
            })?;
            dims.push(value);
        }
        if dims.len() != 2 {
            return Err(DiagramError::Parse {
                column: head_at + 1,
                message: "expected `m n` before the first `|`".into(),
            });
        }
        let mut blocks = Vec::new();
        let last = segments.len() - 1;
        for (k, &(at, seg)) in segments.iter().enumerate().skip(1) {
            if seg.trim().is_empty() {
                if k == last && blocks.is_empty() && segments.len() == 2 {
                    continue;
                }
                return Err(DiagramError::Parse { column: at + 1, message: "empty block".into() });
            }
            let mut block = Vec::new();
            let mut offset = 0;
            for part in seg.split(',') {
                let trimmed = part.trim();
                let lead = part.len() - part.trim_start().len();
                let v = trimmed.parse::<Vertex>().map_err(|_| DiagramError::Parse {
                    column: at + offset + lead + 1,
                    message: format!("expected a signed vertex, found `{trimmed}`"),
                })?;
                if v == 0 {
                    return Err(DiagramError::Parse {
                        column: at + offset + lead + 1,
                        message: "vertex 0 does not exist".into(),
                    });
                }
                block.push(v);
                offset += part.len() + 1;
            }
            blocks.push(block);
        }
        Partition::new(dims[0], dims[1], &blocks)
    }
}

fn words(s: &str) -> impl Iterator<Item = (usize, &str)> {
    s.split(' ').scan(0usize, |pos, w| {
        let at = *pos;
        *pos += w.len() + 1;
        Some((at, w))
    })
    .filter(|(_, w)| !w.is_empty())
}

/// JSON shape `{"m":…,"n":…,"blocks":[[…],…]}`.
#[derive(Serialize, Deserialize)]
struct PartitionRepr {
    m: usize,
    n: usize,
    blocks: Vec<Vec<Vertex>>,
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PartitionRepr { m: self.upper_size(), n: self.lower_size(), blocks: self.blocks() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = PartitionRepr::deserialize(deserializer)?;
        Partition::new(repr.m, repr.n, &repr.blocks).map_err(serde::de::Error::custom)
    }
}
