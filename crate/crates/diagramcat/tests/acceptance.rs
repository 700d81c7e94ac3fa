//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion. All comparisons
//! are exact; there are no numeric tolerances.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Instant;

use diagramcat::brauer::{self, BrauerParams};
use diagramcat::homsets::{self, HomSet};
use diagramcat::numbers::{self, kappa_join, kappa_join_recurrence};
use diagramcat::sandwich::{self, canonical_labels, SandwichContext};
use diagramcat::semigroups::{FiniteSemigroup, MulFn};
use diagramcat::{cli, CategoryTag, Partition};
use num_bigint::BigUint;
use petgraph::unionfind::UnionFind;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

fn compose_mul() -> MulFn<Partition> {
    Arc::new(|a: &Partition, b: &Partition| a.compose_unchecked(b))
}

/// Elements of `K_nn` acting as the identity away from two adjacent points.
fn local_generators(kn: &HomSet, n: usize) -> Vec<Partition> {
    kn.elements()
        .iter()
        .filter(|g| {
            let blocks = g.blocks();
            (1..n.max(2)).any(|i| {
                (1..=n as i32).filter(|&j| j != i as i32 && j != i as i32 + 1).all(|j| blocks.contains(&vec![j, -j]))
            })
        })
        .cloned()
        .collect()
}

fn six_by_eight_composition() -> Outcome {
    let alpha = p("6 8 | 1,4 | 2,3,-4,-5 | 5,6 | -1,-2,-6 | -3 | -7,-8");
    let beta = p("8 7 | 1,2 | 3,4,-1 | 5,-4,-5 | 6 | 7 | 8,-6,-7 | -2 | -3");
    let expected = p("6 7 | 1,4 | 2,3,-1,-4,-5 | 5,6 | -2 | -3 | -6,-7");
    let product = alpha.compose(&beta).map_err(|e| e.to_string())?;
    check(product == expected, || format!("got {product}"))?;
    Ok(format!("αβ = {product}"))
}

fn homset_counts() -> Outcome {
    let mut checked = 0;
    for tag in CategoryTag::ALL {
        for m in 0..=10usize {
            for n in 0..=10 - m {
                let h = homsets::enumerate(tag, m, n).map_err(|e| e.to_string())?;
                let formula = numbers::homset_cardinality(tag, m, n);
                check(BigUint::from(h.len()) == formula, || format!("{tag} {m}x{n}: {} vs {formula}", h.len()))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} hom-sets, all tags, m+n ≤ 10"))
}

fn green_profiles() -> Outcome {
    // Categorical classes for every shape, and the engine on each K_nn.
    let mut rows = 0;
    for tag in CategoryTag::ALL {
        let max = if matches!(tag, CategoryTag::B | CategoryTag::TL) { 12 } else { 10 };
        let found = homsets::verify_counts(tag, max).map_err(|e| e.to_string())?;
        let limit = if max == 12 { 6 } else { 5 };
        for row in found.iter().filter(|r| r.m <= limit && r.n <= limit) {
            check(row.matched, || {
                format!("{tag} {}x{} r={} {}: {} vs {}", row.m, row.n, row.r, row.quantity, row.formula, row.bruteforce)
            })?;
            rows += 1;
        }
    }
    let mut engines = 0;
    for tag in CategoryTag::ALL {
        let top = if matches!(tag, CategoryTag::P | CategoryTag::PB) { 4 } else { 6 };
        for n in 0..=top {
            let h = homsets::enumerate(tag, n, n).map_err(|e| e.to_string())?;
            let s = FiniteSemigroup::closure(&local_generators(&h, n), compose_mul()).map_err(|e| e.to_string())?;
            check(s.len() == h.len(), || format!("{tag}_{n}: closure has {} of {}", s.len(), h.len()))?;
            let g = s.green();
            let mut by_rank: BTreeMap<usize, (BTreeSet<u32>, BTreeSet<u32>, usize)> = BTreeMap::new();
            for (e, x) in s.elements().iter().enumerate() {
                let entry = by_rank.entry(x.rank()).or_default();
                entry.0.insert(g.r[e]);
                entry.1.insert(g.l[e]);
                entry.2 += 1;
            }
            for (r, (rs, ls, size)) in by_rank {
                let profile = numbers::dclass_profile(tag, n, n, r).map_err(|e| e.to_string())?;
                let h_size = size / (rs.len() * ls.len());
                let got = [rs.len(), ls.len(), h_size].map(BigUint::from);
                let want = [profile.r_classes, profile.l_classes, profile.h_size];
                check(got == want, || format!("engine {tag}_{n} rank {r}: {got:?} vs {want:?}"))?;
                engines += 1;
            }
        }
    }
    Ok(format!("{rows} categorical rows, {engines} engine D-classes"))
}

/// All 1-2-equivalences on `0..m`.
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

fn kappa_table() -> Outcome {
    let row: Vec<BigUint> = [0, 2, 4].iter().map(|&q| kappa_join(6, 4, q).unwrap()).collect();
    check(row == [15u32, 42, 9].map(BigUint::from), || format!("κ(6,4,·) = {row:?}"))?;
    for m in 0..=12usize {
        for r in (m % 2..=m).step_by(2) {
            for q in (r % 2..=r).step_by(2) {
                let (a, b) = (kappa_join(m, r, q).unwrap(), kappa_join_recurrence(m, r, q).unwrap());
                check(a == b, || format!("κ({m},{r},{q}): closed {a} vs recurrence {b}"))?;
            }
        }
    }
    for m in 0..=10usize {
        let all = one_two_equivalences(m);
        for r in (m % 2..=m).step_by(2) {
            let eta: Vec<Vec<usize>> = (0..r).map(|i| vec![i]).chain((r..m).step_by(2).map(|i| vec![i, i + 1])).collect();
            for q in (r % 2..=r).step_by(2) {
                let count = all
                    .iter()
                    .filter(|eps| {
                        if eps.iter().filter(|b| b.len() == 1).count() != q {
                            return false;
                        }
                        let mut uf = UnionFind::<usize>::new(m);
                        for block in eps.iter().chain(&eta) {
                            for w in block.windows(2) {
                                uf.union(w[0], w[1]);
                            }
                        }
                        let mut sizes = vec![0usize; m];
                        for x in 0..m {
                            sizes[uf.find(x)] += 1;
                        }
                        sizes.iter().filter(|&&s| s % 2 == 1).count() == q
                    })
                    .count();
                let k = kappa_join(m, r, q).unwrap();
                check(k == BigUint::from(count), || format!("κ({m},{r},{q}) = {k}, brute force {count}"))?;
            }
        }
    }
    Ok("κ(6,4,·) = 15 42 9; recurrence m ≤ 12; brute force m ≤ 10".into())
}

/// Sandwich contexts with `|K_mn| ≤ limit`, a few σ per shape.
fn sample_contexts(limit: usize, per_shape: usize) -> Vec<SandwichContext> {
    let mut out = Vec::new();
    for tag in CategoryTag::ALL {
        for m in 1..=4usize {
            for n in 1..=4usize {
                if numbers::homset_cardinality(tag, m, n) > BigUint::from(limit) {
                    continue;
                }
                let h = Arc::new(homsets::enumerate(tag, m, n).unwrap());
                let sigmas = homsets::enumerate(tag, n, m).unwrap();
                if h.is_empty() || sigmas.is_empty() {
                    continue;
                }
                let step = 1 + sigmas.len() / per_shape;
                for s in sigmas.elements().iter().step_by(step) {
                    out.push(SandwichContext::with_homset(s.clone(), h.clone()).unwrap());
                }
            }
        }
    }
    out
}

fn describe(ctx: &SandwichContext) -> String {
    format!("{} {}x{} σ = {}", ctx.tag, ctx.m, ctx.n, ctx.sigma)
}

/// Hom-set indices whose engine D-class contains an idempotent.
fn engine_regular(oracle: &sandwich::Oracle) -> Vec<usize> {
    let s = &oracle.semigroup;
    let g = s.green();
    let idem = s.idempotent_flags();
    let mut v: Vec<usize> = (0..s.len())
        .filter(|&e| g.d_members[g.d[e] as usize].iter().any(|&y| idem[y as usize]))
        .map(|e| oracle.to_homset[e])
        .collect();
    v.sort_unstable();
    v
}

fn sandwich_green_vs_engine() -> Outcome {
    let contexts = sample_contexts(2000, 2);
    let mut tags = BTreeSet::new();
    for ctx in &contexts {
        let oracle = ctx.semigroup().map_err(|e| e.to_string())?;
        let g = oracle.semigroup.green();
        let n = ctx.len();
        let mut engine = vec![vec![0u32; n]; 4];
        for (e, &h) in oracle.to_homset.iter().enumerate() {
            engine[0][h] = g.r[e];
            engine[1][h] = g.l[e];
            engine[2][h] = g.h[e];
            engine[3][h] = g.d[e];
        }
        let ours = ctx.sandwich_green();
        for (k, (theirs, mine)) in engine.iter().zip([&ours.r, &ours.l, &ours.h, &ours.d]).enumerate() {
            check(canonical_labels(theirs) == canonical_labels(mine), || {
                format!("{} classes differ on {}", ["R", "L", "H", "D"][k], describe(ctx))
            })?;
        }
        check(ctx.regular_elements() == engine_regular(&oracle), || format!("regular elements differ on {}", describe(ctx)))?;
        tags.insert(ctx.tag.name());
    }
    check(contexts.len() >= 20 && tags.len() == 6, || format!("{} contexts over {tags:?}", contexts.len()))?;
    Ok(format!("{} contexts with |K_mn| ≤ 2000 over all six tags", contexts.len()))
}

fn brauer_reg_structure() -> Outcome {
    let params = brauer::all_params(12);
    let mut homsets: BTreeMap<(usize, usize), Arc<HomSet>> = BTreeMap::new();
    let mut flagship = None;
    for bp in &params {
        let h = homsets
            .entry((bp.m, bp.n))
            .or_insert_with(|| Arc::new(homsets::enumerate(CategoryTag::B, bp.m, bp.n).unwrap()))
            .clone();
        let ctx = SandwichContext::with_homset(bp.canonical_sigma(), h).map_err(|e| e.to_string())?;
        let reg = ctx.regular_elements().len();
        let idem = ctx.idempotents().len();
        let (want_reg, want_idem) = (brauer::reg_size(*bp), brauer::idempotent_count(*bp));
        check(BigUint::from(reg) == want_reg, || format!("regSize{bp:?}: {want_reg} vs {reg}"))?;
        check(BigUint::from(idem) == want_idem, || format!("idempotentCount{bp:?}: {want_idem} vs {idem}"))?;
        if (bp.m, bp.n, bp.r) == (6, 6, 4) {
            flagship = Some(reg);
        }
    }
    check(flagship == Some(5697), || format!("regSize(6,6,4) = {flagship:?}"))?;
    Ok(format!("{} parameter triples with m+n ≤ 12; regSize(6,6,4) = 5697", params.len()))
}

fn hard_instances() -> Outcome {
    let ctx = SandwichContext::new(CategoryTag::P, 3, 3, p("3 3 | 1,-1 | 2 | 3,-2,-3")).map_err(|e| e.to_string())?;
    let idem = ctx.idempotents().len();
    check(idem == 99, || format!("|E| = {idem}"))?;
    let reg = ctx.regular_semigroup().map_err(|e| e.to_string())?;
    let covered = reg.semigroup.mi_sandwiched_idempotents().len();
    check(covered == 83, || format!("covered idempotents {covered}"))?;
    let (dominated, _) = reg.semigroup.is_mi_dominated().map_err(|e| e.to_string())?;
    check(!dominated, || "MI-dominated".into())?;
    let mi = reg.semigroup.mid_identities().len();
    let v = ctx.inverse_sets().v.len();
    check(mi == 9 && v == 9, || format!("|MI| = {mi}, |V| = {v}"))?;

    let ctx = SandwichContext::new(CategoryTag::P, 4, 4, p("4 4 | 1,-1 | 2,-2 | 3,4,-3,-4")).map_err(|e| e.to_string())?;
    let ideal = ctx.ideal(2).map_err(|e| e.to_string())?.len();
    let top: Vec<usize> =
        ctx.idempotents().into_iter().filter(|&i| ctx.is_regular(i) && ctx.element(i).rank() == 2).collect();
    let by_top = ctx.closure_of(&top).map_err(|e| e.to_string())?.count_ones(..);
    check(ideal == 2476 && by_top == 2332, || format!("|I_2| = {ideal}, |<E(D_2)>| = {by_top}"))?;
    Ok("|E| = 99, 83 covered, not MI-dominated, |MI| = |V| = 9; |I_2| = 2476, |<E(D_2)>| = 2332".into())
}

fn temperley_lieb_variants() -> Outcome {
    let kn = homsets::enumerate(CategoryTag::TL, 4, 4).map_err(|e| e.to_string())?;
    let h = Arc::new(kn.clone());
    let contexts: Vec<SandwichContext> = kn
        .elements()
        .iter()
        .filter(|s| s.rank() == 2)
        .map(|s| SandwichContext::with_homset(s.clone(), h.clone()).unwrap())
        .collect();
    check(contexts.len() == 9, || format!("{} rank-2 elements", contexts.len()))?;
    let (iso, iso_anti) = cli::classify_iso(&contexts).map_err(|e| e.to_string())?;
    check(iso.len() == 5 && iso_anti.len() == 4, || format!("{} and {} classes", iso.len(), iso_anti.len()))?;
    Ok("9 rank-2 σ; 5 classes up to isomorphism, 4 up to anti-isomorphism".into())
}

fn exact_ranks() -> Outcome {
    let bp = |m, n, r| BrauerParams::new(m, n, r).unwrap();
    let mut seen = Vec::new();
    for ((m, n, r), want) in [((2, 2, 0), 2usize), ((4, 2, 2), 6), ((4, 4, 2), 24), ((4, 4, 0), 96)] {
        let params = bp(m, n, r);
        let formula = brauer::sandwich_rank(params);
        let ctx = SandwichContext::new(CategoryTag::B, m, n, params.canonical_sigma()).map_err(|e| e.to_string())?;
        let oracle = ctx.semigroup().map_err(|e| e.to_string())?;
        let found = oracle.semigroup.exact_rank(&[]).map_err(|e| e.to_string())?;
        check(formula == BigUint::from(want) && found.rank == want && found.lower_bound == want, || {
            format!("rank({m},{n},{r}): formula {formula}, search {} (lower bound {})", found.rank, found.lower_bound)
        })?;
        seen.push(format!("({m},{n},{r}) {want}"));
    }
    for ((m, n, r), want) in [((4, 4, 2), 6usize), ((6, 6, 4), 10)] {
        let params = bp(m, n, r);
        let formula = brauer::reg_rank(params);
        let ctx = SandwichContext::new(CategoryTag::B, m, n, params.canonical_sigma()).map_err(|e| e.to_string())?;
        let oracle = ctx.regular_semigroup().map_err(|e| e.to_string())?;
        let found = oracle.semigroup.exact_rank(&[]).map_err(|e| e.to_string())?;
        check(formula == BigUint::from(want) && found.rank == want && found.lower_bound == want, || {
            format!("Reg rank({m},{n},{r}): formula {formula}, search {} (lower bound {})", found.rank, found.lower_bound)
        })?;
        seen.push(format!("Reg({m},{n},{r}) {want}"));
    }
    let params = bp(4, 4, 2);
    let formula = brauer::ideal_rank(params, 0).map_err(|e| e.to_string())?;
    let ctx = SandwichContext::new(CategoryTag::B, 4, 4, params.canonical_sigma()).map_err(|e| e.to_string())?;
    let ideal = ctx.ideal(0).map_err(|e| e.to_string())?;
    let oracle = ctx.oracle_on(&ideal).map_err(|e| e.to_string())?;
    let found = oracle.semigroup.exact_idempotent_rank().map_err(|e| e.to_string())?;
    check(formula == BigUint::from(3u32) && found.rank == 3, || format!("idrank I_0: formula {formula}, search {}", found.rank))?;
    seen.push("I_0(4,4,2) idrank 3".into());
    Ok(seen.join(", "))
}

fn idempotent_generated() -> Outcome {
    let mut closures = 0;
    for ctx in sample_contexts(5000, 3) {
        if ctx.regular_elements().len() > 2000 {
            continue;
        }
        let eg = ctx.idempotent_generated().map_err(|e| e.to_string())?;
        check(eg.consistent(), || format!("𝔼 descriptions disagree on {}", describe(&ctx)))?;
        closures += 1;
    }
    let mut ideals = 0;
    for tag in CategoryTag::ALL {
        for r in 0..=4usize {
            // The identity of K_r, and for r ≤ 3 a σ of rank r in K_{r,r+1}.
            let mut sigmas = vec![(r, r, Partition::identity(r))];
            if let (true, Ok(h)) = (r <= 3, homsets::enumerate(tag, r, r + 1)) {
                if let Some(s) = h.elements().iter().find(|s| s.rank() == r) {
                    sigmas.push((r + 1, r, s.clone()));
                }
            }
            for (m, n, sigma) in sigmas {
                if !sigma.in_category(tag) {
                    continue;
                }
                let ctx = SandwichContext::new(tag, m, n, sigma).map_err(|e| e.to_string())?;
                let mu = sandwich::mu(tag, r);
                for q in ctx.admissible_ranks() {
                    let status = ctx.ideal_idempotent_status(q).map_err(|e| e.to_string())?;
                    check(status.is_e_generated == (q as i64 <= mu), || {
                        format!("{}: I_{q} idempotent-generated = {}, μ = {mu}", describe(&ctx), status.is_e_generated)
                    })?;
                    ideals += 1;
                }

            }
        }
    }
    Ok(format!("{closures} closures with |Reg| ≤ 2000; {ideals} ideals against μ for r ≤ 4"))
}

fn property_suites() -> Outcome {
    let tag = CategoryTag::P;
    let mut checks = 0usize;
    // Regular *-category laws, exhaustive on P with m+n, n+k ≤ 4.
    for m in 0..=4usize {
        for n in 0..=4 - m {
            let left = homsets::enumerate(tag, m, n).unwrap();
            for k in 0..=4 - n {
                let right = homsets::enumerate(tag, n, k).unwrap();
                for a in left.elements() {
                    let s = a.involution();
                    check(&s.involution() == a && &a.compose(&s).unwrap().compose(a).unwrap() == a, || format!("*-laws fail on {a}"))?;
                    for b in right.elements() {
                        let ab = a.compose(b).unwrap();
                        check(ab.involution() == b.involution().compose(&s).unwrap(), || format!("(ab)* on {a}, {b}"))?;
                        checks += 1;
                    }
                }
            }
        }
    }
    // Closure of every subcategory, with planarity.
    for tag in CategoryTag::ALL {
        for (m, n, k) in [(2, 3, 2), (3, 2, 3), (3, 3, 1), (1, 3, 3)] {
            let (left, right) = (homsets::enumerate(tag, m, n).unwrap(), homsets::enumerate(tag, n, k).unwrap());
            for a in left.elements() {
                for b in right.elements() {
                    let ab = a.compose(b).unwrap();
                    check(ab.in_category(tag) && (!tag.planar() || ab.is_planar()), || format!("{tag}: {a} · {b}"))?;
                    checks += 1;
                }
            }
        }
    }
    // Doubling is a functor PP → TL.
    for (m, n, k) in [(2, 2, 2), (1, 3, 2), (3, 1, 3)] {
        let left = homsets::enumerate(CategoryTag::PP, m, n).unwrap();
        let right = homsets::enumerate(CategoryTag::PP, n, k).unwrap();
        for a in left.elements() {
            for b in right.elements() {
                let lhs = a.compose(b).unwrap().pp_to_tl().unwrap();
                let rhs = a.pp_to_tl().unwrap().compose(&b.pp_to_tl().unwrap()).unwrap();
                check(lhs == rhs, || format!("doubling fails on {a} · {b}"))?;
                checks += 1;
            }
        }
    }
    // The class of the inverses of σ, and the minimal ideal.
    for ctx in sample_contexts(120, 3) {
        let what = describe(&ctx);
        let v: BTreeSet<usize> = ctx.inverse_sets().v.into_iter().collect();
        let oracle = ctx.semigroup().map_err(|e| e.to_string())?;
        let s = &oracle.semigroup;
        let g = s.green();
        let idem = s.idempotent_flags();
        let b = oracle.from_homset[v.iter().next().ok_or_else(|| format!("{what}: V(σ) empty"))?];
        let class: BTreeSet<usize> = g.d_members[g.d[b as usize] as usize].iter().map(|&x| oracle.to_homset[x as usize]).collect();
        let e_class: BTreeSet<usize> = class.iter().copied().filter(|&i| idem[oracle.from_homset[&i] as usize]).collect();
        check(e_class == v, || format!("{what}: E(J_b) ≠ V(σ)"))?;
        for &x in &v {
            for &y in &v {
                let (ex, ey) = (oracle.from_homset[&x], oracle.from_homset[&y]);
                check(s.mul_idx(s.mul_idx(ex, ey), ex) == ex, || format!("{what}: V(σ) not a rectangular band"))?;
            }
        }
        let reg = ctx.regular_semigroup().map_err(|e| e.to_string())?;
        let mi: BTreeSet<usize> = reg.semigroup.mid_identities().into_iter().map(|x| reg.to_homset[x as usize]).collect();
        check(mi == v, || format!("{what}: MI(Reg) ≠ V(σ)"))?;
        if reg.semigroup.len() <= 150 {
            let rp: BTreeSet<usize> =
                reg.semigroup.regularity_preserving().into_iter().map(|x| reg.to_homset[x as usize]).collect();
            check(rp == class, || format!("{what}: RP(Reg) ≠ J_b"))?;
        }

        let z = ctx.least_rank();
        let minimal = ctx.minimal_ideal();
        let of_rank_z: Vec<usize> = (0..ctx.len()).filter(|&i| ctx.element(i).rank() == z).collect();
        check(minimal == of_rank_z && minimal == ctx.regular_d_class(z), || format!("{what}: D_z ≠ D_z^σ"))?;
        let bottom = g.minimal_d_classes();
        let engine_min: Vec<usize> = {
            let mut v: Vec<usize> = g.d_members[bottom[0]].iter().map(|&x| oracle.to_homset[x as usize]).collect();
            v.sort_unstable();
            v
        };
        check(bottom.len() == 1 && engine_min == minimal, || format!("{what}: engine minimal ideal differs"))?;
        checks += 1;
    }
    Ok(format!("{checks} checks, zero failures"))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("composition of the 6x8 and 8x7 example", six_by_eight_composition),
        ("hom-set counts", homset_counts),
        ("Green profiles", green_profiles),
        ("κ table", kappa_table),
        ("sandwich Green classes vs engine", sandwich_green_vs_engine),
        ("Brauer regular part and idempotents", brauer_reg_structure),
        ("hard instances in P3 and P4", hard_instances),
        ("TL4 sandwich classification", temperley_lieb_variants),
        ("exact ranks", exact_ranks),
        ("idempotent-generated parts and μ", idempotent_generated),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
