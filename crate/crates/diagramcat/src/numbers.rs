//! Integer sequences and the κ-counts behind the size and class formulas.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::binomial as big_binomial;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::diagrams::CategoryTag;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumbersError {
    #[error("{kind}: argument(s) {args:?} out of range")]
    ArgOutOfRange { kind: &'static str, args: Vec<i64> },
    #[error("parity violation: {0}")]
    ParityViolation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sequence {
    Stirling2,
    Bell,
    DoubleFactorial,
    Involutions,
    Catalan,
    MotzkinTriangle,
    Motzkin,
}

impl Sequence {
    pub fn name(self) -> &'static str {
        match self {
            Sequence::Stirling2 => "stirling2",
            Sequence::Bell => "bell",
            Sequence::DoubleFactorial => "doubleFactorial",
            Sequence::Involutions => "involutions",
            Sequence::Catalan => "catalan",
            Sequence::MotzkinTriangle => "motzkinTriangle",
            Sequence::Motzkin => "motzkin",
        }
    }

    fn arity(self) -> usize {
        match self {
            Sequence::Stirling2 | Sequence::MotzkinTriangle => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Sequence {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let all = [
            Sequence::Stirling2,
            Sequence::Bell,
            Sequence::DoubleFactorial,
            Sequence::Involutions,
            Sequence::Catalan,
            Sequence::MotzkinTriangle,
            Sequence::Motzkin,
        ];
        all.into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown sequence `{s}`"))
    }
}

/// Memoized rows of the recursively defined sequences.
#[derive(Debug)]
pub struct SequenceTable {
    bound: usize,
    stirling: Vec<Vec<BigUint>>,
    bell: Vec<BigUint>,
    involutions: Vec<BigUint>,
    motzkin: Vec<Vec<BigUint>>,
}

impl SequenceTable {
    /// Builds every row with index `≤ bound`.
    pub fn new(bound: usize) -> Self {
        let mut stirling = vec![vec![BigUint::one()]];
        for n in 1..=bound {
            let prev = &stirling[n - 1];
            let row: Vec<BigUint> = (0..=n)
                .map(|k| {
                    let mut v = BigUint::zero();
                    if k >= 1 && k - 1 < prev.len() {
                        v += &prev[k - 1];
                    }
                    if k < prev.len() {
                        v += &prev[k] * BigUint::from(k);
                    }
                    v
                })
                .collect();
            stirling.push(row);
        }
        let bell = stirling.iter().map(|row| row.iter().sum()).collect();

        let mut involutions: Vec<BigUint> = vec![BigUint::one(), BigUint::one()];
        for n in 2..=bound.max(1) {
            let v = &involutions[n - 1] + BigUint::from(n - 1) * &involutions[n - 2];
            involutions.push(v);
        }
        involutions.truncate(bound + 1);

        let mut motzkin = vec![vec![BigUint::one()]];
        for n in 1..=bound {
            let prev: &Vec<BigUint> = &motzkin[n - 1];
            let at = |k: isize| -> BigUint {
                if k < 0 || k as usize >= prev.len() {
                    BigUint::zero()
                } else {
                    prev[k as usize].clone()
                }
            };
            let row = (0..=n as isize).map(|k| at(k - 1) + at(k) + at(k + 1)).collect();
            motzkin.push(row);
        }
        SequenceTable { bound, stirling, bell, involutions, motzkin }
    }

    /// Shared table covering every argument used by the enumeration bounds.
    pub fn global() -> &'static SequenceTable {
        static TABLE: OnceLock<SequenceTable> = OnceLock::new();
        TABLE.get_or_init(|| SequenceTable::new(64))
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn stirling2(&self, n: usize, k: usize) -> BigUint {
        self.stirling[n].get(k).cloned().unwrap_or_default()
    }

    pub fn bell(&self, n: usize) -> BigUint {
        self.bell[n].clone()
    }

    pub fn involutions(&self, n: usize) -> BigUint {
        self.involutions[n].clone()
    }

    pub fn motzkin_triangle(&self, n: usize, k: usize) -> BigUint {
        self.motzkin[n].get(k).cloned().unwrap_or_default()
    }
}

fn with_table<T>(needed: usize, f: impl FnOnce(&SequenceTable) -> T) -> T {
    let global = SequenceTable::global();
    if needed <= global.bound() {
        f(global)
    } else {
        f(&SequenceTable::new(needed))
    }
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        BigUint::zero()
    } else {
        big_binomial(BigUint::from(n), BigUint::from(k))
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

/// `n!!`: zero for even `n ≥ 0`, `(-1)!! = 1`, and the odd product otherwise.
/// Arguments below `-1` have no value.
pub fn double_factorial(n: i64) -> Option<BigUint> {
    match n {
        i64::MIN..=-2 => None,
        -1 => Some(BigUint::one()),
        _ if n % 2 == 0 => Some(BigUint::zero()),
        _ => Some((1..=n as u64).step_by(2).map(BigUint::from).product()),
    }
}

/// `(n-1)!!` for `n ≥ 0`, the number of perfect matchings of an `n`-set.
pub fn matchings(n: usize) -> BigUint {
    double_factorial(n as i64 - 1).expect("n - 1 >= -1")
}

pub fn stirling2(n: usize, k: usize) -> BigUint {
    with_table(n, |t| t.stirling2(n, k))
}

pub fn bell(n: usize) -> BigUint {
    with_table(n, |t| t.bell(n))
}

pub fn involutions(n: usize) -> BigUint {
    with_table(n, |t| t.involutions(n))
}

pub fn catalan(n: usize) -> BigUint {
    binomial(2 * n, n) / BigUint::from(n + 1)
}

/// `C(x/2)` with the convention that non-natural arguments give zero.
pub fn catalan_of_half(x: usize) -> BigUint {
    if x % 2 == 1 {
        BigUint::zero()
    } else {
        catalan(x / 2)
    }
}

pub fn motzkin_triangle(n: usize, k: usize) -> BigUint {
    with_table(n, |t| t.motzkin_triangle(n, k))
}

pub fn motzkin(n: usize) -> BigUint {
    motzkin_triangle(n, 0)
}

/// Evaluates a named sequence on signed arguments.
pub fn seq(kind: Sequence, args: &[i64]) -> Result<BigUint, NumbersError> {
    let bad = || NumbersError::ArgOutOfRange { kind: kind.name(), args: args.to_vec() };
    if args.len() != kind.arity() {
        return Err(bad());
    }
    if kind == Sequence::DoubleFactorial {
        return double_factorial(args[0]).ok_or_else(bad);
    }
    if args.iter().any(|&a| a < 0) {
        return Err(bad());
    }
    let a = |i: usize| args[i] as usize;
    Ok(match kind {
        Sequence::Stirling2 => stirling2(a(0), a(1)),
        Sequence::Bell => bell(a(0)),
        Sequence::Involutions => involutions(a(0)),
        Sequence::Catalan => catalan(a(0)),
        Sequence::MotzkinTriangle => motzkin_triangle(a(0), a(1)),
        Sequence::Motzkin => motzkin(a(0)),
        Sequence::DoubleFactorial => unreachable!(),
    })
}

/// `κ(m,q)`: rank-`q` 1-2-equivalences on an `m`-set (equivalences with
/// blocks of size at most two and exactly `q` singletons).
pub fn kappa(m: usize, q: usize) -> BigUint {
    if q > m || (m - q) % 2 == 1 {
        return BigUint::zero();
    }
    binomial(m, q) * matchings(m - q)
}

fn check_kappa_args(m: usize, r: usize, q: usize) -> Result<(), NumbersError> {
    if q > r || r > m {
        return Err(NumbersError::ArgOutOfRange { kind: "kappaJoin", args: vec![m as i64, r as i64, q as i64] });
    }
    if (m - r) % 2 == 1 || (r - q) % 2 == 1 {
        return Err(NumbersError::ParityViolation(format!("κ({m},{r},{q}) needs q ≡ r ≡ m (mod 2)")));
    }
    Ok(())
}

/// `κ(m,r,q)`: for a fixed rank-`r` 1-2-equivalence `η` on an `m`-set, the
/// number of rank-`q` 1-2-equivalences `ε` for which `ε ∨ η` has exactly `q`
/// classes of odd size.
pub fn kappa_join(m: usize, r: usize, q: usize) -> Result<BigUint, NumbersError> {
    check_kappa_args(m, r, q)?;
    let df = |x: usize| matchings(x);
    // (r-q-1)!! (m+q-1)!! / (r+q-1)!!, all arguments odd or -1.
    Ok(binomial(r, q) * df(r - q) * df(m + q) / df(r + q))
}

/// `κ(m,r,q)` by the four-case recurrence, memoized.
pub fn kappa_join_recurrence(m: usize, r: usize, q: usize) -> Result<BigUint, NumbersError> {
    check_kappa_args(m, r, q)?;
    fn go(m: usize, r: usize, q: usize, memo: &mut HashMap<(usize, usize, usize), BigUint>) -> BigUint {
        if q == 0 {
            return matchings(m);
        }
        if m == r {
            return kappa(m, q);
        }
        if r == q {
            return matchings(m + r) / matchings(2 * r);
        }
        if let Some(v) = memo.get(&(m, r, q)) {
            return v.clone();
        }
        let v = go(m - 1, r - 1, q - 1, memo)
            + BigUint::from(r - 1) * go(m - 2, r - 2, q, memo)
            + BigUint::from(m - r) * go(m - 2, r, q, memo);
        memo.insert((m, r, q), v.clone());
        v
    }
    Ok(go(m, r, q, &mut HashMap::new()))
}

/// `|K_mn|` for each category.
pub fn homset_cardinality(tag: CategoryTag, m: usize, n: usize) -> BigUint {
    let s = m + n;
    match tag {
        CategoryTag::P => bell(s),
        CategoryTag::PB => involutions(s),
        CategoryTag::B => matchings(s),
        CategoryTag::PP => catalan(s),
        CategoryTag::M => motzkin(s),
        CategoryTag::TL => catalan_of_half(s),
    }
}

/// Ranks occurring in `K_mn`, in increasing order.
pub fn admissible_ranks(tag: CategoryTag, m: usize, n: usize) -> Vec<usize> {
    let top = m.min(n);
    if tag.parity_constrained() {
        if (m + n) % 2 == 1 {
            return Vec::new();
        }
        (top % 2..=top).step_by(2).collect()
    } else {
        (0..=top).collect()
    }
}

/// Number of R-classes in the rank-`r` D-class of `K_mn` (which depends only on `m`).
pub fn r_class_count(tag: CategoryTag, m: usize, r: usize) -> BigUint {
    if r > m || (tag.parity_constrained() && (m - r) % 2 == 1) {
        return BigUint::zero();
    }
    match tag {
        CategoryTag::P => (r..=m).map(|q| binomial(q, r) * stirling2(m, q)).sum(),
        CategoryTag::PB => binomial(m, r) * involutions(m - r),
        CategoryTag::B => binomial(m, r) * matchings(m - r),
        CategoryTag::PP => binomial(2 * m + 1, m - r) * BigUint::from(2 * r + 1) / BigUint::from(2 * m + 1),
        CategoryTag::M => motzkin_triangle(m, r),
        CategoryTag::TL => binomial(m + 1, (m - r) / 2) * BigUint::from(r + 1) / BigUint::from(m + 1),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DClassProfile {
    pub r_classes: BigUint,
    pub l_classes: BigUint,
    pub h_size: BigUint,
    pub d_size: BigUint,
}

/// Class counts for the rank-`r` D-class of `K_mn`.
pub fn dclass_profile(tag: CategoryTag, m: usize, n: usize, r: usize) -> Result<DClassProfile, NumbersError> {
    if r > m.min(n) {
        return Err(NumbersError::ArgOutOfRange { kind: "dclassProfile", args: vec![m as i64, n as i64, r as i64] });
    }
    if tag.parity_constrained() && ((m + r) % 2 == 1 || (n + r) % 2 == 1) {
        return Err(NumbersError::ParityViolation(format!("{tag}: rank {r} in K_{{{m},{n}}}")));
    }
    let r_classes = r_class_count(tag, m, r);
    let l_classes = r_class_count(tag, n, r);
    let h_size = if tag.has_symmetric_groups() { factorial(r) } else { BigUint::one() };
    let d_size = &r_classes * &l_classes * &h_size;
    Ok(DClassProfile { r_classes, l_classes, h_size, d_size })
}

/// One formula-versus-enumeration comparison. Values are decimal strings so
/// arbitrarily large counts survive CSV and JSON unchanged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyRow {
    pub tag: CategoryTag,
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub formula: String,
    pub bruteforce: String,
    #[serde(rename = "match")]
    pub matched: bool,
    pub quantity: String,
}

impl VerifyRow {
    pub fn new(
        tag: CategoryTag,
        (m, n, r): (usize, usize, usize),
        quantity: impl Into<String>,
        formula: impl ToString,
        bruteforce: impl ToString,
    ) -> Self {
        let formula = formula.to_string();
        let bruteforce = bruteforce.to_string();
        VerifyRow { tag, m, n, r, matched: formula == bruteforce, formula, bruteforce, quantity: quantity.into() }
    }
}
