//! Closed-form counts against direct enumeration by independent code.

use diagramcat::homsets;
use diagramcat::numbers::{self, kappa, kappa_join, kappa_join_recurrence};
use diagramcat::CategoryTag;
use num_bigint::BigUint;
use petgraph::unionfind::UnionFind;

/// All equivalences on `0..m` with blocks of size one or two, as block lists.
fn one_two_equivalences(m: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(rest: &[usize], acc: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        let Some((&first, tail)) = rest.split_first() else {
            out.push(acc.clone());
            return;
        };
        acc.push(vec![first]);
        go(tail, acc, out);
        acc.pop();
        for (i, &partner) in tail.iter().enumerate() {
            let mut remaining = tail.to_vec();
            remaining.remove(i);
            acc.push(vec![first, partner]);
            go(&remaining, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(&(0..m).collect::<Vec<_>>(), &mut Vec::new(), &mut out);
    out
}

fn singletons(eq: &[Vec<usize>]) -> usize {
    eq.iter().filter(|b| b.len() == 1).count()
}

fn odd_classes_of_join(m: usize, a: &[Vec<usize>], b: &[Vec<usize>]) -> usize {
    let mut uf = UnionFind::<usize>::new(m);
    for block in a.iter().chain(b) {
        for w in block.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut sizes = vec![0usize; m];
    for x in 0..m {
        sizes[uf.find(x)] += 1;
    }
    sizes.iter().filter(|&&s| s % 2 == 1).count()
}

#[test]
fn kappa_join_counts_joins_by_brute_force() {
    for m in 0..=10usize {
        let all = one_two_equivalences(m);
        for r in (m % 2..=m).step_by(2) {
            // η: singletons 0..r, then consecutive pairs.
            let eta: Vec<Vec<usize>> =
                (0..r).map(|i| vec![i]).chain((r..m).step_by(2).map(|i| vec![i, i + 1])).collect();
            for q in (r % 2..=r).step_by(2) {
                let count = all
                    .iter()
                    .filter(|eps| singletons(eps) == q && odd_classes_of_join(m, eps, &eta) == q)
                    .count();
                assert_eq!(kappa_join(m, r, q).unwrap(), BigUint::from(count), "κ({m},{r},{q})");
            }
        }
        for q in 0..=m {
            let count = all.iter().filter(|eps| singletons(eps) == q).count();
            assert_eq!(kappa(m, q), BigUint::from(count), "κ({m},{q})");
        }
    }
}

#[test]
fn kappa_recurrence_matches_closed_form() {
    for m in 0..=12usize {
        for r in (m % 2..=m).step_by(2) {
            for q in (r % 2..=r).step_by(2) {
                assert_eq!(kappa_join(m, r, q).unwrap(), kappa_join_recurrence(m, r, q).unwrap(), "κ({m},{r},{q})");
            }
        }
    }
    let row: Vec<BigUint> = [0, 2, 4].iter().map(|&q| kappa_join(6, 4, q).unwrap()).collect();
    assert_eq!(row, [15u32, 42, 9].map(BigUint::from));
}

fn motzkin_paths(n: usize) -> u64 {
    // Heights reachable after each step; steps are up, flat, down.
    let mut ways = vec![0u64; n + 2];
    ways[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u64; n + 2];
        for h in 0..=n {
            if ways[h] == 0 {
                continue;
            }
            next[h + 1] += ways[h];
            next[h] += ways[h];
            if h > 0 {
                next[h - 1] += ways[h];
            }
        }
        ways = next;
    }
    ways[0]
}

fn restricted_growth_strings(n: usize) -> u64 {
    fn go(pos: usize, n: usize, max: usize) -> u64 {
        if pos == n {
            return 1;
        }
        (0..=max + 1).map(|v| go(pos + 1, n, max.max(v))).sum()
    }
    if n == 0 {
        1
    } else {
        go(1, n, 0)
    }
}

fn balanced_words(n: usize) -> u64 {
    (0u32..1 << (2 * n))
        .filter(|w| {
            let mut depth = 0i32;
            for i in 0..2 * n {
                depth += if w >> i & 1 == 1 { 1 } else { -1 };
                if depth < 0 {
                    return false;
                }
            }
            depth == 0
        })
        .count() as u64
}

#[test]
fn sequences_against_direct_counts() {
    for n in 0..=14 {
        assert_eq!(numbers::motzkin(n), BigUint::from(motzkin_paths(n)), "Motzkin {n}");
    }
    for n in 0..=11 {
        assert_eq!(numbers::bell(n), BigUint::from(restricted_growth_strings(n)), "Bell {n}");
    }
    for n in 0..=10 {
        assert_eq!(numbers::catalan(n), BigUint::from(balanced_words(n)), "Catalan {n}");
        assert_eq!(numbers::involutions(n), BigUint::from(one_two_equivalences(n).len()), "involutions {n}");
    }
}

#[test]
fn class_profiles_sum_to_the_homset() {
    for tag in CategoryTag::ALL {
        for m in 0..=10usize {
            for n in 0..=10 - m {
                let total: BigUint = numbers::admissible_ranks(tag, m, n)
                    .into_iter()
                    .map(|r| numbers::dclass_profile(tag, m, n, r).unwrap().d_size)
                    .sum();
                assert_eq!(total, numbers::homset_cardinality(tag, m, n), "{tag} {m}x{n}");
            }
        }
    }
}

#[test]
fn homset_sizes_match_enumeration() {
    for tag in CategoryTag::ALL {
        for m in 0..=10usize {
            for n in 0..=10 - m {
                let h = homsets::enumerate(tag, m, n).unwrap();
                assert_eq!(BigUint::from(h.len()), numbers::homset_cardinality(tag, m, n), "{tag} {m}x{n}");
            }
        }
    }
}
