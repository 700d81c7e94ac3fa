//! Closed forms for sandwich semigroups in the Brauer category, and the
//! suite that checks each of them against enumeration.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::diagrams::{CategoryTag, DiagramError, Partition};
use crate::homsets::{self, HomSet, HomSetError};
use crate::numbers::{binomial, double_factorial, factorial, kappa_join, matchings, VerifyRow};
use crate::sandwich::{SandwichContext, SandwichError};
use crate::semigroups::{RankResult, SemigroupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BrauerError {
    #[error("σ is not a Brauer partition")]
    NotBrauer,
    #[error("parity violation: {0}")]
    ParityViolation(String),
    #[error("rank {0} is not admissible")]
    RankNotAdmissible(usize),
}

/// `(m, n, r)`, which determines `B_mn^σ` up to isomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BrauerParams {
    pub m: usize,
    pub n: usize,
    pub r: usize,
}

impl BrauerParams {
    pub fn new(m: usize, n: usize, r: usize) -> Result<Self, BrauerError> {
        if (m + n) % 2 == 1 || (n + r) % 2 == 1 {
            return Err(BrauerError::ParityViolation(format!("(m, n, r) = ({m}, {n}, {r})")));
        }
        if r > m.min(n) {
            return Err(BrauerError::RankNotAdmissible(r));
        }
        Ok(BrauerParams { m, n, r })
    }

    /// The parameters of the anti-isomorphic `B_nm^{σ*}`.
    pub fn swapped(self) -> Self {
        BrauerParams { m: self.n, n: self.m, r: self.r }
    }

    fn tall(self) -> Self {
        if self.m >= self.n {
            self
        } else {
            self.swapped()
        }
    }

    /// Ranks `q ≤ r` with `q ≡ r (mod 2)`.
    pub fn ranks(self) -> impl Iterator<Item = usize> {
        (self.r % 2..=self.r).step_by(2)
    }

    fn check_rank(self, q: usize) -> Result<(), BrauerError> {
        if q > self.r || (self.r - q) % 2 == 1 {
            Err(BrauerError::RankNotAdmissible(q))
        } else {
            Ok(())
        }
    }

    /// The canonical `σ ∈ B_nm`: `{i, i'}` for `i ≤ r`, then consecutive pairs in each row.
    pub fn canonical_sigma(self) -> Partition {
        let mut blocks: Vec<Vec<i32>> = (1..=self.r as i32).map(|i| vec![i, -i]).collect();
        for a in (self.r + 1..self.n).step_by(2) {
            blocks.push(vec![a as i32, a as i32 + 1]);
        }
        for a in (self.r + 1..self.m).step_by(2) {
            blocks.push(vec![-(a as i32), -(a as i32) - 1]);
        }
        Partition::new(self.n, self.m, &blocks).expect("canonical σ is a Brauer partition")
    }
}

/// `(x-1)!!`.
fn df(x: usize) -> BigUint {
    matchings(x)
}

fn df_signed(x: i64) -> BigUint {
    double_factorial(x).expect("argument at least -1")
}

/// Canonical form of `σ ∈ B_nm` with permutations `π₁ ∈ S_n`, `π₂ ∈ S_m`
/// such that `σ = π₁ σ′ π₂`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub canonical: Partition,
    pub left: Partition,
    pub right: Partition,
}

impl Normalized {
    /// The isomorphism `B_mn^σ → B_mn^{σ′}`, `α ↦ π₂ α π₁`.
    pub fn transport(&self, alpha: &Partition) -> Partition {
        self.right.compose_unchecked(alpha).compose_unchecked(&self.left)
    }
}

pub fn normalize_sigma(sigma: &Partition) -> Result<Normalized, BrauerError> {
    if !sigma.in_category(CategoryTag::B) {
        return Err(BrauerError::NotBrauer);
    }
    let (n, m) = (sigma.upper_size(), sigma.lower_size());
    let params = BrauerParams { m, n, r: sigma.rank() };
    // upper[k] is the point of σ's upper row sent to position k of σ′.
    let mut upper = Vec::with_capacity(n);
    let mut lower = Vec::with_capacity(m);
    let mut upper_pairs = Vec::new();
    let mut lower_pairs = Vec::new();
    for block in sigma.blocks() {
        match block.as_slice() {
            &[a, b] if a > 0 && b < 0 => {
                upper.push(a as usize);
                lower.push((-b) as usize);
            }
            &[a, b] if a > 0 => upper_pairs.extend([a as usize, b as usize]),
            &[a, b] => lower_pairs.extend([(-a) as usize, (-b) as usize]),
            _ => return Err(BrauerError::NotBrauer),
        }
    }
    upper.extend(upper_pairs);
    lower.extend(lower_pairs);
    // π₁ sends upper[k] to k + 1; π₂ sends k + 1 to lower[k].
    let mut images = vec![0; n];
    for (k, &a) in upper.iter().enumerate() {
        images[a - 1] = k + 1;
    }
    Ok(Normalized {
        canonical: params.canonical_sigma(),
        left: Partition::from_permutation(&images),
        right: Partition::from_permutation(&lower),
    })
}

/// Whether `B_mn^σ ≅ B_kl^τ` for the given parameters.
pub fn iso_equivalent(p: BrauerParams, q: BrauerParams) -> bool {
    if p == q || (p.m + p.n <= 2 && q.m + q.n <= 2) {
        return true;
    }
    let left_zero_pair = |a: BrauerParams, b: BrauerParams| {
        a.m % 2 == 0 && a.m >= 2 && (a.n, a.r) == (0, 0) && (b.m, b.n, b.r) == (a.m - 1, 1, 1)
    };
    let dual_pair = |a: BrauerParams, b: BrauerParams| left_zero_pair(a.swapped(), b.swapped());
    left_zero_pair(p, q) || left_zero_pair(q, p) || dual_pair(p, q) || dual_pair(q, p)
}

/// `rank(B_n)` as a monoid-free semigroup rank.
fn brauer_monoid_rank(n: usize) -> usize {
    match n {
        0 | 1 => 1,
        2 => 2,
        _ => 3,
    }
}

pub fn sandwich_rank(p: BrauerParams) -> BigUint {
    let BrauerParams { m, n, r } = p.tall();
    if r == n && n == m {
        return BigUint::from(brauer_monoid_rank(n));
    }
    if r == n {
        return binomial(m, n) * df_signed(m as i64 - n as i64 - 1);
    }
    ((r + 2)..=n)
        .step_by(2)
        .map(|q| binomial(m, q) * binomial(n, q) * matchings(m - q) * matchings(n - q) * factorial(q))
        .sum()
}

/// Class data of the regular D-class `D_q^σ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegProfile {
    pub r_hat_classes: BigUint,
    pub r_per_r_hat: BigUint,
    pub l_hat_classes: BigUint,
    pub l_per_l_hat: BigUint,
    pub h_size: BigUint,
    /// Dimensions of the rectangular group over a group H-class of `B_r`.
    pub rect_dims: (BigUint, BigUint),
}

impl RegProfile {
    pub fn r_classes(&self) -> BigUint {
        &self.r_hat_classes * &self.r_per_r_hat
    }

    pub fn l_classes(&self) -> BigUint {
        &self.l_hat_classes * &self.l_per_l_hat
    }

    pub fn size(&self) -> BigUint {
        self.r_classes() * self.l_classes() * &self.h_size
    }
}

pub fn reg_profile(p: BrauerParams, q: usize) -> Result<RegProfile, BrauerError> {
    if (p.r + q) % 2 == 1 {
        return Err(BrauerError::ParityViolation(format!("q = {q} against r = {}", p.r)));
    }
    p.check_rank(q)?;
    let BrauerParams { m, n, r } = p;
    let hat = binomial(r, q) * matchings(r - q);
    let r_per = df(m + q) / df(r + q);
    let l_per = df(n + q) / df(r + q);
    Ok(RegProfile {
        r_hat_classes: hat.clone(),
        r_per_r_hat: r_per.clone(),
        l_hat_classes: hat,
        l_per_l_hat: l_per.clone(),
        h_size: factorial(q),
        rect_dims: (r_per, l_per),
    })
}

pub fn reg_size(p: BrauerParams) -> BigUint {
    p.ranks()
        .map(|q| {
            kappa_join(p.m, p.r, q).expect("admissible") * kappa_join(p.n, p.r, q).expect("admissible") * factorial(q)
        })
        .sum()
}

/// Idempotents of `D_q^σ` for each admissible `q`.
pub fn idempotent_counts(p: BrauerParams) -> Vec<(usize, BigUint)> {
    let BrauerParams { m, n, r } = p;
    p.ranks()
        .map(|q| {
            let num = binomial(r, q) * matchings(r - q) * df(m + q) * df(n + q);
            (q, num / (df(r + q) * df_signed(2 * q as i64 - 1)))
        })
        .collect()
}

pub fn idempotent_count(p: BrauerParams) -> BigUint {
    idempotent_counts(p).into_iter().map(|(_, c)| c).sum()
}

/// Rank of `Reg(B_mn^σ)`; the case `r = m = n` is the Brauer monoid itself.
pub fn reg_rank(p: BrauerParams) -> BigUint {
    let BrauerParams { m, n, r } = p.tall();
    if r == m && m == n {
        return BigUint::from(brauer_monoid_rank(n));
    }
    let top = df(m + r) / df_signed(2 * r as i64 - 1);
    top + if r >= 2 { BigUint::one() } else { BigUint::zero() }
}

/// Rank and idempotent rank of the idempotent-generated subsemigroup, which coincide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EGenRanks {
    pub rank: BigUint,
    pub idrank: BigUint,
}

pub fn e_gen_ranks(p: BrauerParams) -> EGenRanks {
    let BrauerParams { m, r, .. } = p.tall();
    let value = df(m + r) / df_signed(2 * r as i64 - 1) + binomial(r, 2);
    EGenRanks { rank: value.clone(), idrank: value }
}

/// Rank (and idempotent rank) of the proper ideal `I_q` of `Reg(B_mn^σ)`.
pub fn ideal_rank(p: BrauerParams, q: usize) -> Result<BigUint, BrauerError> {
    p.check_rank(q)?;
    if q == p.r {
        return Err(BrauerError::RankNotAdmissible(q));
    }
    let t = p.tall();
    Ok(kappa_join(t.m, t.r, q).expect("admissible"))
}

/// For `α ∈ D_q(B_mn)` with `q ≤ r`, `q < n`, build `β, γ ∈ D_{q+2}` with
/// `α = β σ γ` for the canonical `σ`.
pub fn factor_through_higher_rank(p: BrauerParams, alpha: &Partition) -> Option<(Partition, Partition)> {
    let BrauerParams { m, n, r } = p;
    let q = alpha.rank();
    if q > r || q >= n || alpha.upper_size() != m || alpha.lower_size() != n {
        return None;
    }
    let mut trans = Vec::new();
    let mut ups = Vec::new();
    let mut downs = Vec::new();
    for block in alpha.blocks() {
        match block.as_slice() {
            &[a, b] if a > 0 && b < 0 => trans.push((a, -b)),
            &[a, b] if a > 0 => ups.push((a, b)),
            &[a, b] => downs.push((-a, -b)),
            _ => return None,
        }
    }
    let (n_i, m_i, q_i) = (n as i32, m as i32, q as i32);
    let (&(cs, ds), ups_rest) = ups.split_last()?;
    let (&(et, ft), downs_rest) = downs.split_last()?;

    let mut beta: Vec<Vec<i32>> = trans.iter().enumerate().map(|(i, &(a, _))| vec![a, -(i as i32 + 1)]).collect();
    beta.push(vec![cs, -(n_i - 1)]);
    beta.push(vec![ds, -n_i]);
    beta.extend(ups_rest.iter().map(|&(c, d)| vec![c, d]));
    beta.extend((q_i + 1..n_i - 1).step_by(2).map(|x| vec![-x, -(x + 1)]));

    let mut gamma: Vec<Vec<i32>> = trans.iter().enumerate().map(|(i, &(_, b))| vec![i as i32 + 1, -b]).collect();
    gamma.push(vec![m_i - 1, -et]);
    gamma.push(vec![m_i, -ft]);
    gamma.extend((q_i + 1..m_i - 1).step_by(2).map(|x| vec![x, x + 1]));
    gamma.extend(downs_rest.iter().map(|&(e, f)| vec![-e, -f]));

    let beta = Partition::new(m, n, &beta).ok()?;
    let gamma = Partition::new(m, n, &gamma).ok()?;
    Some((beta, gamma))
}

/// Limits for [`verify_suite`].
#[derive(Debug, Clone, Copy)]
pub struct VerifyBounds {
    /// Largest `m + n` considered.
    pub max_size: usize,
    /// Largest semigroup handed to the exact rank search.
    pub rank_limit: usize,
    /// Largest hom-set compared by the isomorphism search.
    pub iso_limit: usize,
    /// Largest regular part checked for MI-domination.
    pub mi_limit: usize,
}

impl Default for VerifyBounds {
    fn default() -> Self {
        VerifyBounds { max_size: 12, rank_limit: 120, iso_limit: 500, mi_limit: 1000 }
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    HomSet(#[from] HomSetError),
    #[error(transparent)]
    Sandwich(#[from] SandwichError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

pub fn all_params(max_size: usize) -> Vec<BrauerParams> {
    let mut out = Vec::new();
    for total in (0..=max_size).step_by(2) {
        for m in 0..=total {
            let n = total - m;
            for r in (n % 2..=m.min(n)).step_by(2) {
                out.push(BrauerParams { m, n, r });
            }
        }
    }
    out
}

/// Every closed form of this module against enumeration or the engine.
pub fn verify_suite(bounds: VerifyBounds) -> Result<Vec<VerifyRow>, VerifyError> {
    let params = all_params(bounds.max_size);
    let mut homsets: HashMap<(usize, usize), Arc<HomSet>> = HashMap::new();
    for p in &params {
        if !homsets.contains_key(&(p.m, p.n)) {
            let h = homsets::enumerate_bounded(CategoryTag::B, p.m, p.n, bounds.max_size.max(homsets::DEFAULT_BOUND_SMALL_BLOCKS))?;
            homsets.insert((p.m, p.n), Arc::new(h));
        }
    }
    let per_point: Vec<Vec<VerifyRow>> = params
        .par_iter()
        .map(|&p| verify_point(p, homsets[&(p.m, p.n)].clone(), bounds))
        .collect::<Result<_, _>>()?;
    let mut rows: Vec<VerifyRow> = per_point.into_iter().flatten().collect();

    let kappa_row: Vec<String> = [0, 2, 4].iter().map(|&q| kappa_join(6, 4, q).expect("admissible").to_string()).collect();
    rows.push(VerifyRow::new(CategoryTag::B, (6, 6, 4), "kappaRow", "15 42 9", kappa_row.join(" ")));

    rows.extend(verify_isomorphism(&params, &homsets, bounds)?);
    Ok(rows)
}

fn verify_point(p: BrauerParams, homset: Arc<HomSet>, bounds: VerifyBounds) -> Result<Vec<VerifyRow>, VerifyError> {
    let tag = CategoryTag::B;
    let key = (p.m, p.n, p.r);
    let mut rows = Vec::new();
    let ctx = SandwichContext::with_homset(p.canonical_sigma(), homset)?;

    let reg = ctx.regular_elements();
    rows.push(VerifyRow::new(tag, key, "regSize", reg_size(p), reg.len()));

    let idem = ctx.idempotents();
    rows.push(VerifyRow::new(tag, key, "idempotentCount", idempotent_count(p), idem.len()));
    for (q, count) in idempotent_counts(p) {
        let brute = idem.iter().filter(|&&i| ctx.element(i).rank() == q).count();
        rows.push(VerifyRow::new(tag, key, format!("idempotents[q={q}]"), count, brute));
    }

    let green = ctx.sandwich_green();
    for q in p.ranks() {
        let profile = reg_profile(p, q).expect("admissible");
        let class = ctx.regular_d_class(q);
        let distinct = |ids: &dyn Fn(usize) -> Option<u32>| {
            let mut v: Vec<u32> = class.iter().filter_map(|&i| ids(i)).collect();
            v.sort_unstable();
            v.dedup();
            v.len()
        };
        let r_classes = distinct(&|i| Some(green.r[i]));
        let l_classes = distinct(&|i| Some(green.l[i]));
        let r_hat = distinct(&|i| green.r_hat[i]);
        let l_hat = distinct(&|i| green.l_hat[i]);
        let h_size = class.iter().filter(|&&i| green.h[i] == green.h[class[0]]).count();
        rows.push(VerifyRow::new(tag, key, format!("rClasses[q={q}]"), profile.r_classes(), r_classes));
        rows.push(VerifyRow::new(tag, key, format!("lClasses[q={q}]"), profile.l_classes(), l_classes));
        rows.push(VerifyRow::new(tag, key, format!("rHatClasses[q={q}]"), &profile.r_hat_classes, r_hat));
        rows.push(VerifyRow::new(tag, key, format!("lHatClasses[q={q}]"), &profile.l_hat_classes, l_hat));
        rows.push(VerifyRow::new(tag, key, format!("hSize[q={q}]"), &profile.h_size, h_size));
    }

    // Every α ∈ D_q with q ≤ r, q < n factors through D_{q+2}; σ = id_n is excluded.
    let t = p.tall();
    if t == p && p.n > 0 && !(p.r == p.n && p.n == p.m) {
        let sigma = &ctx.sigma;
        let mut eligible = 0usize;
        let mut factored = 0usize;
        for alpha in ctx.homset().elements() {
            let q = alpha.rank();
            if q > p.r || q >= p.n {
                continue;
            }
            eligible += 1;
            if let Some((b, g)) = factor_through_higher_rank(p, alpha) {
                if b.rank() == q + 2 && g.rank() == q + 2 && b.compose_unchecked(sigma).compose_unchecked(&g) == *alpha {
                    factored += 1;
                }
            }
        }
        rows.push(VerifyRow::new(tag, key, "factorsThroughHigherRank", eligible, factored));
    }

    if ctx.len() <= bounds.rank_limit {
        let s = ctx.semigroup()?;
        rows.push(rank_row(key, "sandwichRank", sandwich_rank(p), s.semigroup.exact_rank(&[]))?);
    }
    if reg.len() <= bounds.rank_limit {
        let s = ctx.regular_semigroup()?;
        rows.push(rank_row(key, "regRank", reg_rank(p), s.semigroup.exact_rank(&[]))?);
    }
    let e_gen: Vec<usize> = if reg.len() <= bounds.rank_limit {
        ctx.idempotent_generated()?.members.ones().collect()
    } else {
        Vec::new()
    };
    if !e_gen.is_empty() {
        let s = ctx.oracle_on(&e_gen)?;
        let ranks = e_gen_ranks(p);
        rows.push(rank_row(key, "eGenRank", ranks.rank, s.semigroup.exact_rank(&[]))?);
        rows.push(rank_row(key, "eGenIdrank", ranks.idrank, s.semigroup.exact_idempotent_rank())?);
    }
    if reg.len() <= bounds.mi_limit {
        let s = ctx.regular_semigroup()?;
        let (dominated, _) = s.semigroup.is_mi_dominated()?;
        rows.push(VerifyRow::new(tag, key, "miDominated", true, dominated));
    }
    for q in p.ranks().filter(|&q| q < p.r) {
        let ideal = ctx.ideal(q)?;
        if ideal.len() > bounds.rank_limit {
            continue;
        }
        let s = ctx.oracle_on(&ideal)?;
        let formula = ideal_rank(p, q).expect("q < r");
        rows.push(rank_row(key, &format!("idealRank[q={q}]"), formula, s.semigroup.exact_idempotent_rank())?);
    }
    Ok(rows)
}

/// An unresolved search becomes a failing row showing the bracket found.
fn rank_row(
    key: (usize, usize, usize),
    quantity: &str,
    formula: BigUint,
    found: Result<RankResult, SemigroupError>,
) -> Result<VerifyRow, VerifyError> {
    let brute = match found {
        Ok(res) => res.rank.to_string(),
        Err(SemigroupError::Unresolved { lower, upper }) => format!("{lower}..{upper}"),
        Err(e) => return Err(e.into()),
    };
    Ok(VerifyRow::new(CategoryTag::B, key, quantity, formula, brute))
}

fn verify_isomorphism(
    params: &[BrauerParams],
    homsets: &HashMap<(usize, usize), Arc<HomSet>>,
    bounds: VerifyBounds,
) -> Result<Vec<VerifyRow>, VerifyError> {
    let small: Vec<BrauerParams> =
        params.iter().copied().filter(|p| homsets[&(p.m, p.n)].len() <= bounds.iso_limit).collect();
    let mut oracles = Vec::with_capacity(small.len());
    for p in &small {
        let ctx = SandwichContext::with_homset(p.canonical_sigma(), homsets[&(p.m, p.n)].clone())?;
        oracles.push(ctx.semigroup()?.semigroup);
    }
    let pairs: Vec<(usize, usize)> =
        (0..small.len()).flat_map(|i| (i + 1..small.len()).map(move |j| (i, j))).collect();
    let verdicts: Vec<(usize, usize, bool)> = pairs
        .par_iter()
        .map(|&(i, j)| Ok((i, j, oracles[i].isomorphic(&oracles[j], false, usize::MAX)?)))
        .collect::<Result<_, SemigroupError>>()?;
    let mut agree = 0usize;
    let mut rows = Vec::new();
    for (i, j, engine) in verdicts {
        let formula = iso_equivalent(small[i], small[j]);
        if formula == engine {
            agree += 1;
        } else {
            let (a, b) = (small[i], small[j]);
            rows.push(VerifyRow::new(
                CategoryTag::B,
                (a.m, a.n, a.r),
                format!("isomorphic to ({}, {}, {})", b.m, b.n, b.r),
                formula,
                engine,
            ));
        }
    }
    rows.push(VerifyRow::new(CategoryTag::B, (0, 0, 0), "isoClassificationPairs", pairs.len(), agree));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(m: usize, n: usize, r: usize) -> BrauerParams {
        BrauerParams::new(m, n, r).unwrap()
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(reg_size(bp(6, 6, 4)), BigUint::from(5697u32));
        assert_eq!(reg_size(bp(2, 2, 2)), BigUint::from(3u32));
        assert_eq!(idempotent_count(bp(2, 2, 0)), BigUint::one());
        assert_eq!(reg_rank(bp(6, 6, 4)), BigUint::from(10u32));
        assert_eq!(e_gen_ranks(bp(6, 6, 4)).rank, BigUint::from(15u32));
        assert_eq!(ideal_rank(bp(6, 6, 4), 2).unwrap(), BigUint::from(42u32));
        assert_eq!(ideal_rank(bp(6, 6, 4), 0).unwrap(), BigUint::from(15u32));
        assert_eq!(sandwich_rank(bp(4, 2, 2)), BigUint::from(6u32));
        assert_eq!(sandwich_rank(bp(2, 2, 0)), BigUint::from(2u32));
        assert_eq!(sandwich_rank(bp(5, 5, 5)), BigUint::from(3u32));
        let prof = reg_profile(bp(6, 6, 4), 4).unwrap();
        assert_eq!((prof.r_hat_classes.clone(), prof.r_per_r_hat.clone()), (BigUint::one(), BigUint::from(9u32)));
        assert_eq!(reg_profile(bp(6, 6, 4), 2).unwrap().r_classes(), BigUint::from(42u32));
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(BrauerParams::new(3, 2, 0), Err(BrauerError::ParityViolation(_))));
        assert!(matches!(BrauerParams::new(2, 2, 4), Err(BrauerError::RankNotAdmissible(4))));
        assert!(matches!(ideal_rank(bp(4, 4, 2), 2), Err(BrauerError::RankNotAdmissible(2))));
        assert!(matches!(reg_profile(bp(4, 4, 2), 1), Err(BrauerError::ParityViolation(_))));
    }

    #[test]
    fn isomorphism_clauses() {
        assert!(iso_equivalent(bp(2, 0, 0), bp(1, 1, 1)));
        assert!(iso_equivalent(bp(0, 4, 0), bp(1, 3, 1)));
        assert!(iso_equivalent(bp(1, 1, 1), bp(0, 2, 0)));
        assert!(!iso_equivalent(bp(4, 4, 2), bp(4, 4, 0)));
        assert!(!iso_equivalent(bp(4, 0, 0), bp(1, 3, 1)));
    }

    #[test]
    fn normalization_recomposes() {
        let sigma: Partition = "4 6 | 1,-5 | 2,3 | 4,-2 | -1,-6 | -3,-4".parse().unwrap();
        let norm = normalize_sigma(&sigma).unwrap();
        assert_eq!(norm.left.compose(&norm.canonical).unwrap().compose(&norm.right).unwrap(), sigma);
        let canonical = bp(6, 4, 2).canonical_sigma();
        let again = normalize_sigma(&canonical).unwrap();
        assert_eq!(again.left, Partition::identity(4));
        assert_eq!(again.right, Partition::identity(6));
        assert_eq!(normalize_sigma(&"1 1 | 1 | -1".parse().unwrap()), Err(BrauerError::NotBrauer));
    }
}
